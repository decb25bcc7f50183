//! Physical configuration of the wall system and the heat-transfer
//! correlations that close its balance equations.
//!
//! All temperatures are absolute (kelvin). Fluxes and conductances are per
//! square metre of wall face.

use crate::error::{Error, Result};

/// Stefan–Boltzmann constant, W/(m²·K⁴).
pub const STEFAN_BOLTZMANN: f64 = 5.670_374_419e-8;

/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.806_65;

/// Offset between the Celsius and kelvin scales.
pub const ZERO_CELSIUS: f64 = 273.15;

/// Default Swinbank sky-temperature coefficient.
pub const SWINBANK_COEFFICIENT: f64 = 0.0552;

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("must be positive, got {value}"),
        ))
    }
}

fn non_negative(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("must be non-negative, got {value}"),
        ))
    }
}

fn unit_interval(field: &'static str, value: f64, allow_zero: bool) -> Result<()> {
    let lower_ok = if allow_zero {
        value >= 0.0
    } else {
        value > 0.0
    };
    if lower_ok && value <= 1.0 {
        Ok(())
    } else {
        let range = if allow_zero { "[0, 1]" } else { "(0, 1]" };
        Err(Error::config(
            field,
            format!("must lie in {range}, got {value}"),
        ))
    }
}

/// The massive storage wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallSpec {
    /// Wall height H, m.
    pub height: f64,
    /// Wall width B, m.
    pub width: f64,
    /// Wall thickness, m.
    pub thickness: f64,
    /// Thermal conductivity λ, W/(m·K).
    pub conductivity: f64,
    /// Density, kg/m³.
    pub density: f64,
    /// Specific heat capacity, J/(kg·K).
    pub heat_capacity: f64,
    /// Absorptance–transmittance product of glazing and absorber surface.
    pub absorptance_transmittance: f64,
}

impl WallSpec {
    /// Thermal diffusivity λ/(ρ·c), m²/s.
    pub fn diffusivity(&self) -> f64 {
        self.conductivity / (self.density * self.heat_capacity)
    }

    /// Volumetric heat capacity ρ·c, J/(m³·K).
    pub fn volumetric_heat_capacity(&self) -> f64 {
        self.density * self.heat_capacity
    }

    pub fn validate(&self) -> Result<()> {
        positive("wall.height", self.height)?;
        positive("wall.width", self.width)?;
        positive("wall.thickness", self.thickness)?;
        positive("wall.conductivity", self.conductivity)?;
        positive("wall.density", self.density)?;
        positive("wall.heat_capacity", self.heat_capacity)?;
        unit_interval(
            "wall.absorptance_transmittance",
            self.absorptance_transmittance,
            true,
        )
    }
}

impl Default for WallSpec {
    /// 3 m × 3.5 m × 0.3 m dense concrete behind double glazing.
    fn default() -> Self {
        Self {
            height: 3.0,
            width: 3.5,
            thickness: 0.3,
            conductivity: 1.4,
            density: 2200.0,
            heat_capacity: 880.0,
            absorptance_transmittance: 0.7,
        }
    }
}

/// Outside convective exchange of the outer pane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindConvection {
    /// Fixed coefficient, W/(m²·K).
    Fixed(f64),
    /// McAdams wind rule h = 5.7 + 3.8·v, with v in m/s.
    McAdams { wind_speed: f64 },
}

impl WindConvection {
    pub fn coefficient(&self) -> f64 {
        match *self {
            WindConvection::Fixed(h) => h,
            WindConvection::McAdams { wind_speed } => 5.7 + 3.8 * wind_speed,
        }
    }
}

/// Effective sky temperature seen by the outer pane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SkyModel {
    /// T_sky = coefficient · T_a^1.5.
    Swinbank { coefficient: f64 },
    /// The sky radiates at ambient air temperature.
    Ambient,
}

impl SkyModel {
    pub fn temperature(&self, ambient: f64) -> Result<f64> {
        match *self {
            SkyModel::Swinbank { coefficient } => swinbank_sky(ambient, coefficient),
            SkyModel::Ambient => {
                if ambient > 0.0 {
                    Ok(ambient)
                } else {
                    Err(Error::Domain(format!(
                        "ambient temperature must be positive, got {ambient} K"
                    )))
                }
            }
        }
    }
}

/// The two-pane glazing in front of the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlazingSpec {
    /// Lumped pane-to-pane conductance h₁₂, W/(m²·K).
    pub h12: f64,
    pub emissivity_glass: f64,
    /// Long-wave emissivity of the absorber face of the wall.
    pub emissivity_wall: f64,
    pub wind: WindConvection,
    pub sky: SkyModel,
}

impl GlazingSpec {
    /// Effective emissivity between the absorber and the inner pane,
    /// treated as infinite parallel grey plates.
    pub fn gap_emissivity(&self) -> f64 {
        1.0 / (1.0 / self.emissivity_wall + 1.0 / self.emissivity_glass - 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        positive("glazing.h12", self.h12)?;
        unit_interval("glazing.emissivity_glass", self.emissivity_glass, false)?;
        unit_interval("glazing.emissivity_wall", self.emissivity_wall, false)?;
        non_negative("glazing.wind", self.wind.coefficient())?;
        if let WindConvection::McAdams { wind_speed } = self.wind {
            non_negative("glazing.wind_speed", wind_speed)?;
        }
        if let SkyModel::Swinbank { coefficient } = self.sky {
            positive("glazing.sky_coefficient", coefficient)?;
        }
        Ok(())
    }
}

impl Default for GlazingSpec {
    fn default() -> Self {
        Self {
            h12: 5.0,
            emissivity_glass: 0.9,
            emissivity_wall: 0.95,
            wind: WindConvection::Fixed(15.0),
            sky: SkyModel::Swinbank {
                coefficient: SWINBANK_COEFFICIENT,
            },
        }
    }
}

/// When the upper and lower vents let room air through the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VentSchedule {
    AlwaysOpen,
    AlwaysClosed,
    /// Open between two hours of the day (wrapping past midnight when
    /// `from_hour > to_hour`).
    Daily {
        from_hour: f64,
        to_hour: f64,
    },
}

impl VentSchedule {
    /// Whether the vents are open at `time` seconds after scenario start.
    pub fn is_open(&self, time: f64) -> bool {
        match *self {
            VentSchedule::AlwaysOpen => true,
            VentSchedule::AlwaysClosed => false,
            VentSchedule::Daily { from_hour, to_hour } => {
                let hour = (time / 3600.0).rem_euclid(24.0);
                if from_hour <= to_hour {
                    hour >= from_hour && hour < to_hour
                } else {
                    hour >= from_hour || hour < to_hour
                }
            }
        }
    }
}

/// Convective exchange between the channel air and its two faces.
///
/// The coefficient blends a still-air cavity value with a turbulent
/// flat-duct correlation (Dittus–Boelter on the hydraulic diameter):
/// `h = (h_still³ + h_forced³)^(1/3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapConvection {
    /// Coefficient with no through-flow, W/(m²·K).
    pub still_air_h: f64,
    /// Air thermal conductivity, W/(m·K).
    pub air_conductivity: f64,
    /// Air kinematic viscosity, m²/s.
    pub kinematic_viscosity: f64,
    pub prandtl: f64,
}

impl Default for GapConvection {
    fn default() -> Self {
        Self {
            still_air_h: 3.0,
            air_conductivity: 0.026,
            kinematic_viscosity: 1.5e-5,
            prandtl: 0.71,
        }
    }
}

/// The air channel between glazing and wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSpec {
    /// Glazing-to-wall distance, m.
    pub depth: f64,
    /// Channel flow cross-section A_g, m².
    pub cross_section: f64,
    /// Area of one vent A_v, m².
    pub vent_area: f64,
    /// Loss coefficient on the (A_g/A_v)² term of the buoyancy velocity.
    pub c1: f64,
    /// Constant loss coefficient of the buoyancy velocity.
    pub c2: f64,
    pub air_density: f64,
    pub air_cp: f64,
    pub convection: GapConvection,
    pub vents: VentSchedule,
    /// Node count of the vertical march along the channel.
    pub march_nodes: usize,
}

impl GapSpec {
    pub fn hydraulic_diameter(&self) -> f64 {
        2.0 * self.depth
    }

    pub fn validate(&self) -> Result<()> {
        positive("gap.depth", self.depth)?;
        positive("gap.cross_section", self.cross_section)?;
        positive("gap.vent_area", self.vent_area)?;
        positive("gap.c1", self.c1)?;
        positive("gap.c2", self.c2)?;
        positive("gap.air_density", self.air_density)?;
        positive("gap.air_cp", self.air_cp)?;
        non_negative("gap.still_air_h", self.convection.still_air_h)?;
        positive("gap.air_conductivity", self.convection.air_conductivity)?;
        positive(
            "gap.kinematic_viscosity",
            self.convection.kinematic_viscosity,
        )?;
        positive("gap.prandtl", self.convection.prandtl)?;
        if self.march_nodes < 2 {
            return Err(Error::config("gap.march_nodes", "must be at least 2"));
        }
        if let VentSchedule::Daily { from_hour, to_hour } = self.vents {
            for h in [from_hour, to_hour] {
                if !(0.0..=24.0).contains(&h) {
                    return Err(Error::config(
                        "gap.vents",
                        format!("hour {h} outside [0, 24]"),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl Default for GapSpec {
    fn default() -> Self {
        Self {
            depth: 0.1,
            cross_section: 0.35,
            vent_area: 0.175,
            c1: 8.0,
            c2: 2.0,
            air_density: 1.2,
            air_cp: 1005.0,
            convection: GapConvection::default(),
            vents: VentSchedule::AlwaysOpen,
            march_nodes: 50,
        }
    }
}

/// The heated room behind the wall. Its air temperature is prescribed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoomSpec {
    /// Room air temperature T_r, K.
    pub air_temperature: f64,
    /// Mean radiant temperature of the other room surfaces, K.
    pub radiant_temperature: f64,
    pub h_c: f64,
    pub h_r: f64,
}

impl RoomSpec {
    /// Combined surface conductance h_c + h_r.
    pub fn h_total(&self) -> f64 {
        self.h_c + self.h_r
    }

    pub fn validate(&self) -> Result<()> {
        positive("room.air_temperature", self.air_temperature)?;
        positive("room.radiant_temperature", self.radiant_temperature)?;
        non_negative("room.h_c", self.h_c)?;
        non_negative("room.h_r", self.h_r)
    }
}

impl Default for RoomSpec {
    fn default() -> Self {
        Self {
            air_temperature: ZERO_CELSIUS + 20.0,
            radiant_temperature: ZERO_CELSIUS + 20.0,
            h_c: 2.5,
            h_r: 5.5,
        }
    }
}

/// The complete physical system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrombeSystem {
    pub wall: WallSpec,
    pub glazing: GlazingSpec,
    pub gap: GapSpec,
    pub room: RoomSpec,
}

impl TrombeSystem {
    pub fn validate(&self) -> Result<()> {
        self.wall.validate()?;
        self.glazing.validate()?;
        self.gap.validate()?;
        self.room.validate()
    }
}

/// Heat-transfer coefficients frozen for one linear solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    /// Channel air ↔ each face, W/(m²·K).
    pub h_cgap: f64,
    /// Absorber ↔ inner pane radiation.
    pub h_rgap: f64,
    /// Pane ↔ pane.
    pub h_12: f64,
    /// Outer pane ↔ ambient air.
    pub h_c_inf: f64,
    /// Outer pane ↔ sky.
    pub h_r_inf: f64,
    pub h_c_room: f64,
    pub h_r_room: f64,
    /// Mean channel velocity, m/s.
    pub gap_velocity: f64,
    /// Volumetric channel flow G = V·A_g, m³/s.
    pub gap_flow: f64,
    /// Channel-mean air rise over outlet rise, (T̄ − T_r)/(T_m − T_r).
    /// Exactly one half under the linear-profile reduction.
    pub mean_rise_ratio: f64,
}

impl CoefficientSet {
    /// A set with the channel sealed (no velocity, no flow).
    pub fn sealed(
        h_cgap: f64,
        h_rgap: f64,
        h_12: f64,
        h_c_inf: f64,
        h_r_inf: f64,
        room: &RoomSpec,
    ) -> Self {
        Self {
            h_cgap,
            h_rgap,
            h_12,
            h_c_inf,
            h_r_inf,
            h_c_room: room.h_c,
            h_r_room: room.h_r,
            gap_velocity: 0.0,
            gap_flow: 0.0,
            mean_rise_ratio: 0.5,
        }
    }

    pub fn h_room(&self) -> f64 {
        self.h_c_room + self.h_r_room
    }
}

/// Linearized long-wave exchange coefficient
/// `ε·σ·(T₁² + T₂²)(T₁ + T₂)`, so that `h·(T₁ − T₂)` is the exact
/// grey-body net flux.
pub fn linearized_radiation_coefficient(t_hot: f64, t_cold: f64, emissivity: f64) -> Result<f64> {
    if !(t_hot > 0.0 && t_cold > 0.0) {
        return Err(Error::Domain(format!(
            "absolute temperatures must be positive, got {t_hot} K and {t_cold} K"
        )));
    }
    if !(0.0..=1.0).contains(&emissivity) {
        return Err(Error::Domain(format!(
            "effective emissivity must lie in [0, 1], got {emissivity}"
        )));
    }
    Ok(emissivity * STEFAN_BOLTZMANN * (t_hot * t_hot + t_cold * t_cold) * (t_hot + t_cold))
}

/// Swinbank sky temperature with the default coefficient.
pub fn sky_temperature(ambient: f64) -> Result<f64> {
    swinbank_sky(ambient, SWINBANK_COEFFICIENT)
}

fn swinbank_sky(ambient: f64, coefficient: f64) -> Result<f64> {
    if !(ambient > 0.0) {
        return Err(Error::Domain(format!(
            "ambient temperature must be positive, got {ambient} K"
        )));
    }
    Ok(coefficient * ambient.powf(1.5))
}

/// Buoyancy-driven mean channel velocity, m/s.
///
/// `t_mean` is the mean channel air temperature. The vents act as a thermal
/// diode: a channel no warmer than the room carries no flow.
pub fn gap_velocity(gap: &GapSpec, wall: &WallSpec, t_mean: f64, t_room: f64) -> f64 {
    if !(t_mean > t_room) || t_mean <= 0.0 {
        return 0.0;
    }
    let area_ratio = gap.cross_section / gap.vent_area;
    let losses = gap.c1 * area_ratio * area_ratio + gap.c2;
    let buoyancy = (t_mean - t_room) / t_mean;
    (2.0 * STANDARD_GRAVITY * wall.height / losses * buoyancy).sqrt()
}

/// Channel air ↔ face convective coefficient at mean velocity `velocity`.
pub fn convective_gap_coefficient(velocity: f64, gap: &GapSpec) -> f64 {
    let c = &gap.convection;
    let v = velocity.max(0.0);
    let d_h = gap.hydraulic_diameter();
    let reynolds = v * d_h / c.kinematic_viscosity;
    let nusselt = 0.023 * reynolds.powf(0.8) * c.prandtl.powf(0.4);
    let forced = nusselt * c.air_conductivity / d_h;
    (c.still_air_h.powi(3) + forced.powi(3)).cbrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn radiation_coefficient_matches_cubic_law_at_equal_temperatures() {
        let h = linearized_radiation_coefficient(293.15, 293.15, 1.0).unwrap();
        assert_relative_eq!(h, 4.0 * 5.670e-8 * 293.15_f64.powi(3), max_relative = 1e-3);
        assert!((h - 5.71).abs() < 0.01);
    }

    #[test]
    fn radiation_coefficient_regression() {
        let h = linearized_radiation_coefficient(303.15, 283.15, 0.9).unwrap();
        assert_relative_eq!(h, 5.148_598_234_092_344, max_relative = 1e-12);
        assert_eq!(
            linearized_radiation_coefficient(310.0, 250.0, 0.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn radiation_coefficient_rejects_nonpositive_temperature() {
        assert!(matches!(
            linearized_radiation_coefficient(0.0, 300.0, 0.9),
            Err(Error::Domain(_))
        ));
        assert!(linearized_radiation_coefficient(300.0, -1.0, 0.9).is_err());
    }

    #[test]
    fn swinbank_values() {
        assert_relative_eq!(
            sky_temperature(273.15).unwrap(),
            249.195_895_622_631_3,
            max_relative = 1e-12
        );
        assert!((sky_temperature(273.15).unwrap() - 249.2).abs() < 0.01);
        assert_relative_eq!(
            sky_temperature(293.15).unwrap(),
            277.060_061_004_882_75,
            max_relative = 1e-12
        );
        assert!(sky_temperature(1e-9).unwrap() < 1e-12);
        assert!(sky_temperature(0.0).is_err());
    }

    #[test]
    fn velocity_worked_example() {
        let wall = WallSpec {
            height: 3.0,
            ..WallSpec::default()
        };
        let gap = GapSpec {
            c1: 8.0,
            c2: 2.0,
            cross_section: 0.4,
            vent_area: 0.2,
            ..GapSpec::default()
        };
        let v = gap_velocity(&gap, &wall, 300.0, 290.0);
        assert!((v - 0.240).abs() < 5e-4, "{v}");
        assert_eq!(gap_velocity(&gap, &wall, 300.0, 300.0), 0.0);
        assert_eq!(gap_velocity(&gap, &wall, 290.0, 300.0), 0.0);
        // Quadrupled driving difference at fixed T_m doubles V.
        let v4 = gap_velocity(&gap, &wall, 300.0, 260.0);
        assert_relative_eq!(v4, 2.0 * v, max_relative = 1e-12);
    }

    #[test]
    fn gap_convection_limits() {
        let mut gap = GapSpec::default();
        gap.convection.still_air_h = 3.0;
        assert_eq!(convective_gap_coefficient(0.0, &gap), 3.0);
        // (3³ + h_DB³)^(1/3) with Re = 3200 on a 0.2 m hydraulic diameter.
        assert_relative_eq!(
            convective_gap_coefficient(0.24, &gap),
            3.160_857_482_146_876,
            max_relative = 1e-9
        );
        assert!(convective_gap_coefficient(0.5, &gap) >= convective_gap_coefficient(0.25, &gap));
    }

    #[test]
    fn vent_schedule_wraps_midnight() {
        let s = VentSchedule::Daily {
            from_hour: 20.0,
            to_hour: 6.0,
        };
        assert!(s.is_open(22.0 * 3600.0));
        assert!(s.is_open(86400.0 + 3.0 * 3600.0));
        assert!(!s.is_open(12.0 * 3600.0));
    }

    #[test]
    fn defaults_validate() {
        TrombeSystem::default().validate().unwrap();
        let bad = WallSpec {
            absorptance_transmittance: 1.2,
            ..WallSpec::default()
        };
        assert!(bad.validate().is_err());
        assert_relative_eq!(
            WallSpec::default().diffusivity(),
            1.4 / (2200.0 * 880.0),
            max_relative = 1e-12
        );
    }

    proptest! {
        #[test]
        fn radiation_is_symmetric(t1 in 150.0f64..500.0, t2 in 150.0f64..500.0, e in 0.0f64..=1.0) {
            let a = linearized_radiation_coefficient(t1, t2, e).unwrap();
            let b = linearized_radiation_coefficient(t2, t1, e).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!(a >= 0.0 && a.is_finite());
        }

        #[test]
        fn sky_below_ambient_and_monotone(t in 1.0f64..328.0, dt in 0.01f64..10.0) {
            let s = sky_temperature(t).unwrap();
            prop_assert!(s <= t);
            prop_assert!(sky_temperature(t + dt).unwrap() > s);
        }

        #[test]
        fn velocity_is_finite_and_nonnegative(tm in 200.0f64..400.0, tr in 200.0f64..400.0) {
            let v = gap_velocity(&GapSpec::default(), &WallSpec::default(), tm, tr);
            prop_assert!(v.is_finite() && v >= 0.0);
        }

        #[test]
        fn gap_convection_monotone(v in 0.0f64..3.0, dv in 0.0f64..1.0) {
            let gap = GapSpec::default();
            prop_assert!(convective_gap_coefficient(v + dv, &gap) >= convective_gap_coefficient(v, &gap));
        }
    }
}
