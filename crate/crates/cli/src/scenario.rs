//! TOML scenario files.
//!
//! Every key is optional and falls back to the library default.
//! Temperatures carry a `_c` suffix and are given in Celsius.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use trombe_core::climate::{load_climate_csv, synthesize_climate};
use trombe_core::model::ZERO_CELSIUS;
use trombe_core::{
    ClimateSeries, GapSpec, GlazingSpec, Horizon, Mesh, NumericsConfig, RoomSpec, SkyModel,
    SyntheticClimate, TrombeSystem, VentSchedule, WallSpec, WindConvection,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ScenarioToml {
    name: Option<String>,
    wall: WallToml,
    glazing: GlazingToml,
    gap: GapToml,
    room: RoomToml,
    numerics: NumericsToml,
    climate: ClimateToml,
    output: OutputToml,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct WallToml {
    height: Option<f64>,
    width: Option<f64>,
    thickness: Option<f64>,
    conductivity: Option<f64>,
    density: Option<f64>,
    heat_capacity: Option<f64>,
    absorptance_transmittance: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GlazingToml {
    h12: Option<f64>,
    emissivity_glass: Option<f64>,
    emissivity_wall: Option<f64>,
    /// Fixed outside film coefficient.
    wind_h: Option<f64>,
    /// Wind speed for the McAdams rule. Excludes `wind_h`.
    wind_speed: Option<f64>,
    /// "swinbank" or "ambient".
    sky: Option<String>,
    sky_coefficient: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GapToml {
    depth: Option<f64>,
    cross_section: Option<f64>,
    vent_area: Option<f64>,
    c1: Option<f64>,
    c2: Option<f64>,
    air_density: Option<f64>,
    air_cp: Option<f64>,
    still_air_h: Option<f64>,
    air_conductivity: Option<f64>,
    kinematic_viscosity: Option<f64>,
    prandtl: Option<f64>,
    march_nodes: Option<usize>,
    /// "open", "closed" or "daily".
    vents: Option<String>,
    vents_from_hour: Option<f64>,
    vents_to_hour: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RoomToml {
    air_temperature_c: Option<f64>,
    radiant_temperature_c: Option<f64>,
    h_c: Option<f64>,
    h_r: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct NumericsToml {
    sigma: Option<f64>,
    dt: Option<f64>,
    wall_nodes: Option<usize>,
    fixpoint_tol: Option<f64>,
    fixpoint_max_iter: Option<usize>,
    under_relaxation: Option<f64>,
    spin_up_days: Option<f64>,
    report_days: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ClimateToml {
    preset: Option<String>,
    path: Option<PathBuf>,
    peak_insolation: Option<f64>,
    sunrise_hour: Option<f64>,
    sunset_hour: Option<f64>,
    mean_temperature_c: Option<f64>,
    swing: Option<f64>,
    lag_hours: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OutputToml {
    dir: Option<PathBuf>,
    /// Write every n-th step to the time series.
    every: Option<usize>,
}

/// Where the climate comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ClimateSource {
    Synthetic(SyntheticClimate),
    File(PathBuf),
}

/// A fully resolved, validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub source: PathBuf,
    pub system: TrombeSystem,
    pub numerics: NumericsConfig,
    pub wall_nodes: usize,
    pub horizon: Horizon,
    pub climate: ClimateSource,
    pub out_dir: Option<PathBuf>,
    pub every: usize,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub days: Option<f64>,
    pub dt: Option<f64>,
    pub sigma: Option<f64>,
}

impl Scenario {
    pub fn load(path: &Path, overrides: Overrides) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path, overrides)
    }

    pub fn parse(text: &str, path: &Path, overrides: Overrides) -> CliResult<Self> {
        let raw: ScenarioToml = toml::from_str(text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let located = |field: &str, reason: String| {
            let at = locate(text, field)
                .map(|line| format!("{}:{line}", path.display()))
                .unwrap_or_else(|| path.display().to_string());
            CliError::Validation(format!("{at}: invalid {field}: {reason}"))
        };
        let scenario = resolve(raw, path, overrides).map_err(|(f, r)| located(f, r))?;
        let checks = scenario
            .system
            .validate()
            .and_then(|_| scenario.numerics.validate())
            .and_then(|_| {
                Mesh::new(scenario.wall_nodes, scenario.system.wall.thickness).map(|_| ())
            });
        match checks {
            Ok(()) => Ok(scenario),
            Err(trombe_core::Error::Config { field, reason }) => Err(located(field, reason)),
            Err(e) => Err(CliError::Validation(format!("{}: {e}", path.display()))),
        }
    }

    pub fn mesh(&self) -> Mesh {
        Mesh::new(self.wall_nodes, self.system.wall.thickness).expect("validated at load")
    }

    /// Loads or synthesizes the climate covering the horizon.
    pub fn climate_series(&self) -> CliResult<ClimateSeries> {
        match &self.climate {
            ClimateSource::File(p) => load_climate_csv(p).map_err(CliError::from_input),
            ClimateSource::Synthetic(params) => {
                let days =
                    (self.horizon.spin_up_days + self.horizon.report_days).ceil() as usize + 1;
                synthesize_climate(&SyntheticClimate { days, ..*params })
                    .map_err(CliError::from_input)
            }
        }
    }
}

type FieldError = (&'static str, String);

fn resolve(raw: ScenarioToml, path: &Path, ov: Overrides) -> Result<Scenario, FieldError> {
    let base = path.parent().unwrap_or(Path::new("."));
    let w = WallSpec::default();
    let wall = WallSpec {
        height: raw.wall.height.unwrap_or(w.height),
        width: raw.wall.width.unwrap_or(w.width),
        thickness: raw.wall.thickness.unwrap_or(w.thickness),
        conductivity: raw.wall.conductivity.unwrap_or(w.conductivity),
        density: raw.wall.density.unwrap_or(w.density),
        heat_capacity: raw.wall.heat_capacity.unwrap_or(w.heat_capacity),
        absorptance_transmittance: raw
            .wall
            .absorptance_transmittance
            .unwrap_or(w.absorptance_transmittance),
    };

    let g = GlazingSpec::default();
    let wind = match (raw.glazing.wind_h, raw.glazing.wind_speed) {
        (Some(_), Some(_)) => {
            return Err((
                "glazing.wind_speed",
                "give either wind_h or wind_speed".into(),
            ))
        }
        (Some(h), None) => WindConvection::Fixed(h),
        (None, Some(v)) => WindConvection::McAdams { wind_speed: v },
        (None, None) => g.wind,
    };
    let sky = match raw.glazing.sky.as_deref() {
        None | Some("swinbank") => match (raw.glazing.sky_coefficient, g.sky) {
            (Some(c), _) => SkyModel::Swinbank { coefficient: c },
            (None, sky) => sky,
        },
        Some("ambient") => SkyModel::Ambient,
        Some(other) => {
            return Err((
                "glazing.sky",
                format!("expected \"swinbank\" or \"ambient\", got {other:?}"),
            ))
        }
    };
    let glazing = GlazingSpec {
        h12: raw.glazing.h12.unwrap_or(g.h12),
        emissivity_glass: raw.glazing.emissivity_glass.unwrap_or(g.emissivity_glass),
        emissivity_wall: raw.glazing.emissivity_wall.unwrap_or(g.emissivity_wall),
        wind,
        sky,
    };

    let gd = GapSpec::default();
    let vents = match raw.gap.vents.as_deref() {
        None => gd.vents,
        Some("open") => VentSchedule::AlwaysOpen,
        Some("closed") => VentSchedule::AlwaysClosed,
        Some("daily") => match (raw.gap.vents_from_hour, raw.gap.vents_to_hour) {
            (Some(from_hour), Some(to_hour)) => VentSchedule::Daily { from_hour, to_hour },
            _ => {
                return Err((
                    "gap.vents",
                    "a daily schedule needs vents_from_hour and vents_to_hour".into(),
                ))
            }
        },
        Some(other) => {
            return Err((
                "gap.vents",
                format!("expected \"open\", \"closed\" or \"daily\", got {other:?}"),
            ))
        }
    };
    let mut convection = gd.convection;
    convection.still_air_h = raw.gap.still_air_h.unwrap_or(convection.still_air_h);
    convection.air_conductivity = raw
        .gap
        .air_conductivity
        .unwrap_or(convection.air_conductivity);
    convection.kinematic_viscosity = raw
        .gap
        .kinematic_viscosity
        .unwrap_or(convection.kinematic_viscosity);
    convection.prandtl = raw.gap.prandtl.unwrap_or(convection.prandtl);
    let gap = GapSpec {
        depth: raw.gap.depth.unwrap_or(gd.depth),
        cross_section: raw.gap.cross_section.unwrap_or(gd.cross_section),
        vent_area: raw.gap.vent_area.unwrap_or(gd.vent_area),
        c1: raw.gap.c1.unwrap_or(gd.c1),
        c2: raw.gap.c2.unwrap_or(gd.c2),
        air_density: raw.gap.air_density.unwrap_or(gd.air_density),
        air_cp: raw.gap.air_cp.unwrap_or(gd.air_cp),
        convection,
        vents,
        march_nodes: raw.gap.march_nodes.unwrap_or(gd.march_nodes),
    };

    let r = RoomSpec::default();
    let room = RoomSpec {
        air_temperature: raw
            .room
            .air_temperature_c
            .map_or(r.air_temperature, |c| c + ZERO_CELSIUS),
        radiant_temperature: raw
            .room
            .radiant_temperature_c
            .map_or(r.radiant_temperature, |c| c + ZERO_CELSIUS),
        h_c: raw.room.h_c.unwrap_or(r.h_c),
        h_r: raw.room.h_r.unwrap_or(r.h_r),
    };

    let n = NumericsConfig::default();
    let numerics = NumericsConfig {
        sigma: ov.sigma.or(raw.numerics.sigma).unwrap_or(n.sigma),
        dt: ov.dt.or(raw.numerics.dt).unwrap_or(n.dt),
        fixpoint_tol: raw.numerics.fixpoint_tol.unwrap_or(n.fixpoint_tol),
        fixpoint_max_iter: raw
            .numerics
            .fixpoint_max_iter
            .unwrap_or(n.fixpoint_max_iter),
        under_relaxation: raw.numerics.under_relaxation.unwrap_or(n.under_relaxation),
    };
    let h = Horizon::default();
    let horizon = Horizon {
        spin_up_days: raw.numerics.spin_up_days.unwrap_or(h.spin_up_days),
        report_days: ov
            .days
            .or(raw.numerics.report_days)
            .unwrap_or(h.report_days),
    };
    for (field, days) in [
        ("numerics.spin_up_days", horizon.spin_up_days),
        ("numerics.report_days", horizon.report_days),
    ] {
        if days < 0.0 || !days.is_finite() {
            return Err((
                field,
                format!("must be a non-negative day count, got {days}"),
            ));
        }
    }

    let c = &raw.climate;
    let climate = match (&c.preset, &c.path) {
        (Some(_), Some(_)) => {
            return Err((
                "climate.path",
                "give either preset or path, not both".into(),
            ))
        }
        (_, Some(p)) => {
            let overrides = [
                c.peak_insolation,
                c.sunrise_hour,
                c.sunset_hour,
                c.mean_temperature_c,
                c.swing,
                c.lag_hours,
            ];
            if overrides.iter().any(Option::is_some) {
                return Err((
                    "climate.path",
                    "synthetic parameters do not apply to a climate file".into(),
                ));
            }
            ClimateSource::File(base.join(p))
        }
        (None | Some(_), None) => {
            if let Some(p) = c.preset.as_deref().filter(|p| *p != "february") {
                return Err((
                    "climate.preset",
                    format!("unknown preset {p:?}, expected \"february\""),
                ));
            }
            let f = SyntheticClimate::february(1);
            ClimateSource::Synthetic(SyntheticClimate {
                peak_insolation: c.peak_insolation.unwrap_or(f.peak_insolation),
                sunrise_hour: c.sunrise_hour.unwrap_or(f.sunrise_hour),
                sunset_hour: c.sunset_hour.unwrap_or(f.sunset_hour),
                mean_temperature: c
                    .mean_temperature_c
                    .map_or(f.mean_temperature, |t| t + ZERO_CELSIUS),
                swing: c.swing.unwrap_or(f.swing),
                lag_hours: c.lag_hours.unwrap_or(f.lag_hours),
                ..f
            })
        }
    };

    let every = raw.output.every.unwrap_or(1);
    if every == 0 {
        return Err(("output.every", "must be at least 1".into()));
    }
    let name = raw.name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into())
    });
    Ok(Scenario {
        name,
        source: path.to_path_buf(),
        system: TrombeSystem {
            wall,
            glazing,
            gap,
            room,
        },
        numerics,
        wall_nodes: raw.numerics.wall_nodes.unwrap_or(31),
        horizon,
        climate,
        out_dir: raw.output.dir.map(|d| base.join(d)),
        every,
    })
}

/// One-based line of the key behind `field` ("section.key"), also trying
/// the Celsius spelling `key_c` and the `wind_h` alias.
fn locate(text: &str, field: &str) -> Option<usize> {
    let (section, key) = field.split_once('.')?;
    let candidates: Vec<String> = match key {
        "wind" => vec!["wind_h".into(), "wind_speed".into()],
        k => vec![k.to_string(), format!("{k}_c")],
    };
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = header.trim().to_string();
            continue;
        }
        if current != section {
            continue;
        }
        if let Some((lhs, _)) = line.split_once('=') {
            if candidates.iter().any(|c| c == lhs.trim()) {
                return Some(i + 1);
            }
        }
    }
    None
}
