//! Energy balance of the vented air channel.
//!
//! Two kernels describe the same physics. The vertical march integrates
//! `ρ·G·c_p·dT/dz = B·[h(T_w0 − T) + h(T_g2 − T)]` up the channel; the
//! algebraic reduction replaces the profile by the mean of inlet and
//! outlet and solves the balance in closed form. The time stepper keeps
//! both consistent.

use crate::error::{Error, Result};
use crate::model::{CoefficientSet, GapSpec, WallSpec};

/// Solution of the channel balance for frozen face temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct GapFlowState {
    /// Air entering at the bottom vent, K.
    pub inlet: f64,
    /// Air leaving at the top vent T_m, K.
    pub outlet: f64,
    /// `(outlet + inlet) / 2`, K.
    pub mean: f64,
    /// `(z, T)` samples from bottom to top. Empty for the algebraic kernel.
    pub profile: Vec<(f64, f64)>,
    /// Volumetric flow G, m³/s.
    pub flow: f64,
    /// Convective gain delivered to the room, W/m² of wall.
    pub gain: f64,
}

fn capacity_rate(gap: &GapSpec, flow: f64) -> f64 {
    gap.air_density * flow * gap.air_cp
}

fn require_flow(coeffs: &CoefficientSet) -> Result<()> {
    if coeffs.gap_flow > 0.0 && coeffs.gap_flow.is_finite() {
        Ok(())
    } else {
        Err(Error::Flow(format!(
            "channel flow must be positive, got {} m³/s",
            coeffs.gap_flow
        )))
    }
}

/// Implicit node-to-node march of the channel air temperature from the
/// bottom vent (`z = 0`, temperature `inlet`) to the top (`z = H`).
pub fn march_gap_profile(
    t_w0: f64,
    t_g2: f64,
    inlet: f64,
    coeffs: &CoefficientSet,
    gap: &GapSpec,
    wall: &WallSpec,
    nodes: usize,
) -> Result<GapFlowState> {
    require_flow(coeffs)?;
    if nodes < 2 {
        return Err(Error::config("gap.march_nodes", "must be at least 2"));
    }
    let dz = wall.height / (nodes - 1) as f64;
    let w = capacity_rate(gap, coeffs.gap_flow);
    let h = coeffs.h_cgap;
    // Per-step exchange number B·Δz·Σh / (ρ·G·c_p).
    let ntu = wall.width * dz * 2.0 * h / w;
    let surface_mean = 0.5 * (t_w0 + t_g2);

    let mut profile = Vec::with_capacity(nodes);
    let mut t = inlet;
    profile.push((0.0, t));
    for j in 1..nodes {
        t += ntu * (surface_mean - t) / (1.0 + ntu);
        profile.push((j as f64 * dz, t));
    }
    let outlet = t;
    Ok(GapFlowState {
        inlet,
        outlet,
        mean: 0.5 * (inlet + outlet),
        profile,
        flow: coeffs.gap_flow,
        gain: w * (outlet - inlet) / (wall.height * wall.width),
    })
}

/// Closed-form solution of the mean-temperature balance
/// `ρGc_p(T_m − T_r)/(HB) = h(T_w0 − T_ma) + h(T_g2 − T_ma)` with
/// `T_ma = (T_m + T_r)/2`.
pub fn solve_gap_algebraic(
    t_w0: f64,
    t_g2: f64,
    t_room: f64,
    coeffs: &CoefficientSet,
    gap: &GapSpec,
    wall: &WallSpec,
) -> Result<GapFlowState> {
    require_flow(coeffs)?;
    let m = capacity_rate(gap, coeffs.gap_flow) / (wall.height * wall.width);
    let h = coeffs.h_cgap;
    let denom = m + h;
    if !(denom.abs() > 0.0) || !denom.is_finite() {
        return Err(Error::Singular {
            node: 2,
            label: "gap mean-temperature balance",
        });
    }
    let rise = h * ((t_w0 - t_room) + (t_g2 - t_room)) / denom;
    let outlet = t_room + rise;
    Ok(GapFlowState {
        inlet: t_room,
        outlet,
        mean: 0.5 * (outlet + t_room),
        profile: Vec::new(),
        flow: coeffs.gap_flow,
        gain: m * rise,
    })
}

/// Air temperature of a sealed channel: the conductance-weighted mean of
/// the two faces.
pub fn stagnant_gap_temperature(t_w0: f64, t_g2: f64, h_wall: f64, h_glass: f64) -> Result<f64> {
    let total = h_wall + h_glass;
    if !(total > 0.0) {
        return Err(Error::Domain(
            "sealed channel needs a positive face conductance".into(),
        ));
    }
    Ok((h_wall * t_w0 + h_glass * t_g2) / total)
}

/// Convective gain `ρ·G·c_p·(T_m − T_r)/(H·B)` carried into the room.
pub fn gap_convective_gain(state: &GapFlowState, gap: &GapSpec, wall: &WallSpec) -> f64 {
    if state.flow <= 0.0 {
        return 0.0;
    }
    capacity_rate(gap, state.flow) * (state.outlet - state.inlet) / (wall.height * wall.width)
}

/// Ratio of the channel-mean air rise to the outlet rise, measured on the
/// marched profile (trapezoidal mean). Tends to one half for weak exchange.
///
/// The ratio depends only on the exchange number, so it is measured with a
/// unit driving difference.
pub fn mean_rise_ratio(
    coeffs: &CoefficientSet,
    gap: &GapSpec,
    wall: &WallSpec,
    nodes: usize,
) -> Result<f64> {
    let state = march_gap_profile(1.0, 1.0, 0.0, coeffs, gap, wall, nodes)?;
    let rise = state.outlet - state.inlet;
    if !(rise > 0.0) {
        return Ok(0.5);
    }
    Ok(profile_mean(&state.profile, wall.height) / rise)
}

/// Trapezoidal z-average of a profile.
pub fn profile_mean(profile: &[(f64, f64)], height: f64) -> f64 {
    let integral: f64 = profile
        .windows(2)
        .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
        .sum();
    integral / height
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RoomSpec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn worked() -> (CoefficientSet, GapSpec, WallSpec) {
        let mut c = CoefficientSet::sealed(3.0, 5.0, 5.0, 15.0, 4.0, &RoomSpec::default());
        c.gap_flow = 0.1;
        let gap = GapSpec {
            air_density: 1.2,
            air_cp: 1005.0,
            ..GapSpec::default()
        };
        let wall = WallSpec {
            height: 3.0,
            width: 3.5,
            ..WallSpec::default()
        };
        (c, gap, wall)
    }

    fn closed_form_outlet(
        t_w0: f64,
        t_g2: f64,
        inlet: f64,
        c: &CoefficientSet,
        gap: &GapSpec,
        wall: &WallSpec,
    ) -> f64 {
        let ts = 0.5 * (t_w0 + t_g2);
        let k = 2.0 * c.h_cgap * wall.width / (gap.air_density * c.gap_flow * gap.air_cp);
        ts + (inlet - ts) * (-k * wall.height).exp()
    }

    #[test]
    fn equilibrium_profile_is_flat() {
        let (c, gap, wall) = worked();
        let s = march_gap_profile(293.15, 293.15, 293.15, &c, &gap, &wall, 50).unwrap();
        assert!(s.profile.iter().all(|&(_, t)| t == 293.15));
        assert_eq!(s.outlet, 293.15);
        let a = solve_gap_algebraic(293.15, 293.15, 293.15, &c, &gap, &wall).unwrap();
        assert_eq!(a.outlet, 293.15);
    }

    #[test]
    fn worked_example_outlets() {
        let (c, gap, wall) = worked();
        let exact = closed_form_outlet(330.0, 310.0, 293.15, &c, &gap, &wall);
        assert!((exact - 304.1).abs() < 0.05, "{exact}");
        let marched = march_gap_profile(330.0, 310.0, 293.15, &c, &gap, &wall, 200).unwrap();
        assert_relative_eq!(marched.outlet, 304.064_294_585_107_75, max_relative = 1e-12);
        let alg = solve_gap_algebraic(330.0, 310.0, 293.15, &c, &gap, &wall).unwrap();
        assert!((alg.outlet - 304.3).abs() < 0.05, "{}", alg.outlet);
        let rise = alg.outlet - 293.15;
        assert!((marched.outlet - alg.outlet).abs() <= 0.02 * rise);
        assert_relative_eq!(
            alg.gain,
            11.485_714_285_714_286 * rise,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gap_convective_gain(&alg, &gap, &wall),
            alg.gain,
            max_relative = 1e-12
        );
    }

    #[test]
    fn larger_flow_pulls_outlet_toward_inlet() {
        let (mut c, gap, wall) = worked();
        let slow = march_gap_profile(330.0, 310.0, 293.15, &c, &gap, &wall, 50).unwrap();
        c.gap_flow *= 10.0;
        let fast = march_gap_profile(330.0, 310.0, 293.15, &c, &gap, &wall, 50).unwrap();
        assert!((fast.outlet - 293.15).abs() < (slow.outlet - 293.15).abs());
    }

    #[test]
    fn algebraic_rise_is_linear_in_driving_difference() {
        let (c, gap, wall) = worked();
        let a = solve_gap_algebraic(300.0, 296.0, 293.0, &c, &gap, &wall).unwrap();
        let b = solve_gap_algebraic(307.0, 299.0, 293.0, &c, &gap, &wall).unwrap();
        assert_relative_eq!(
            b.outlet - 293.0,
            2.0 * (a.outlet - 293.0),
            max_relative = 1e-12
        );
    }

    #[test]
    fn stagnant_flow_is_rejected_by_kernels() {
        let (mut c, gap, wall) = worked();
        c.gap_flow = 0.0;
        assert!(matches!(
            march_gap_profile(330.0, 310.0, 293.15, &c, &gap, &wall, 50),
            Err(Error::Flow(_))
        ));
        assert!(solve_gap_algebraic(330.0, 310.0, 293.15, &c, &gap, &wall).is_err());
    }

    #[test]
    fn stagnant_temperature_weights() {
        assert_eq!(
            stagnant_gap_temperature(330.0, 310.0, 2.0, 2.0).unwrap(),
            320.0
        );
        assert_eq!(
            stagnant_gap_temperature(330.0, 310.0, 3.0, 1.0).unwrap(),
            325.0
        );
        assert_eq!(
            stagnant_gap_temperature(301.0, 301.0, 1.0, 4.0).unwrap(),
            301.0
        );
        assert!(stagnant_gap_temperature(330.0, 310.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn closed_channel_has_no_gain() {
        let s = GapFlowState {
            inlet: 293.0,
            outlet: 300.0,
            mean: 296.5,
            profile: vec![],
            flow: 0.0,
            gain: 0.0,
        };
        assert_eq!(
            gap_convective_gain(&s, &GapSpec::default(), &WallSpec::default()),
            0.0
        );
    }

    #[test]
    fn march_converges_first_order() {
        let (c, gap, wall) = worked();
        let exact = closed_form_outlet(330.0, 310.0, 293.15, &c, &gap, &wall);
        let errs: Vec<f64> = [26, 51, 101, 201]
            .iter()
            .map(|&n| {
                (march_gap_profile(330.0, 310.0, 293.15, &c, &gap, &wall, n)
                    .unwrap()
                    .outlet
                    - exact)
                    .abs()
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((1.6..=2.4).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn enthalpy_rise_matches_face_input() {
        let (c, gap, wall) = worked();
        let s = march_gap_profile(330.0, 310.0, 293.15, &c, &gap, &wall, 200).unwrap();
        let enthalpy = gap.air_density * c.gap_flow * gap.air_cp * (s.outlet - s.inlet);
        let input: f64 = s
            .profile
            .windows(2)
            .map(|w| {
                let f = |t: f64| c.h_cgap * (330.0 - t) + c.h_cgap * (310.0 - t);
                0.5 * (f(w[0].1) + f(w[1].1)) * (w[1].0 - w[0].0) * wall.width
            })
            .sum();
        assert!((enthalpy - input).abs() <= 0.005 * enthalpy);
    }

    #[test]
    fn weak_exchange_ratio_tends_to_half() {
        let (mut c, gap, wall) = worked();
        c.gap_flow = 100.0;
        let r = mean_rise_ratio(&c, &gap, &wall, 50).unwrap();
        assert!((r - 0.5).abs() < 1e-3, "{r}");
    }

    proptest! {
        #[test]
        fn outlet_lies_between_inlet_and_surface_mean(
            tw in 260.0f64..360.0, tg in 260.0f64..360.0, tin in 260.0f64..360.0,
            h in 0.5f64..10.0, g in 0.01f64..1.0,
        ) {
            let (mut c, gap, wall) = worked();
            c.h_cgap = h;
            c.gap_flow = g;
            let s = march_gap_profile(tw, tg, tin, &c, &gap, &wall, 50).unwrap();
            let ts = 0.5 * (tw + tg);
            let (lo, hi) = if tin < ts { (tin, ts) } else { (ts, tin) };
            prop_assert!(s.outlet >= lo && s.outlet <= hi);
            if (ts - tin).abs() > 1e-6 {
                prop_assert!(s.outlet > lo && s.outlet < hi);
            }
            prop_assert_eq!(s.mean, 0.5 * (s.outlet + s.inlet));
        }
    }
}
