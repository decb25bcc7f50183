//! Invariant suite runnable from the command line: sweep against dense
//! elimination, equilibrium, steady resistance chain, channel kernels,
//! energy closure and observed orders.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::airgap::{march_gap_profile, solve_gap_algebraic};
use crate::climate::{synthesize_climate, ClimateSample, SyntheticClimate};
use crate::convergence::{presets, spatial_study, temporal_study, SlabProblem};
use crate::error::Result;
use crate::fdm::{
    assemble_interior, back_substitute, classical_sweep, close_inner_surface, forward_sweep,
    initial_state, simulate, time_step, Boundary, BoundaryClosure, Horizon, LinearStep, Mesh,
    NumericsConfig,
};
use crate::model::{
    CoefficientSet, GapSpec, RoomSpec, SkyModel, TrombeSystem, VentSchedule, WallSpec,
};
use crate::oracle::{analytic_steady_profile, assemble_slab, dense_step, PeriodicSlab};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Measured error (units given in `detail`).
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn below(name: &'static str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: measured.is_finite() && measured < threshold,
            measured,
            threshold,
            detail: detail.into(),
        }
    }
}

/// Test hook: scales one forward-sweep coefficient before back
/// substitution so that the sweep/dense comparison must fail.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Perturbation {
    pub relative: f64,
}

/// A random but physically plausible linear step with `wall_nodes` wall
/// nodes.
pub fn random_step<R: Rng>(rng: &mut R, wall_nodes: usize) -> LinearStep {
    let room = RoomSpec {
        h_c: rng.gen_range(1.0..5.0),
        h_r: rng.gen_range(3.0..7.0),
        ..RoomSpec::default()
    };
    let coeffs = CoefficientSet::sealed(
        rng.gen_range(1.0..10.0),
        rng.gen_range(3.0..7.0),
        rng.gen_range(2.0..8.0),
        rng.gen_range(5.0..30.0),
        rng.gen_range(2.0..6.0),
        &room,
    );
    let thickness = rng.gen_range(0.1..0.5);
    let previous = (0..wall_nodes + 3)
        .map(|_| rng.gen_range(260.0..360.0))
        .collect();
    LinearStep {
        previous,
        coeffs,
        boundary: Boundary {
            ambient: rng.gen_range(260.0..310.0),
            sky: rng.gen_range(240.0..300.0),
            room_air: rng.gen_range(285.0..300.0),
            room_radiant: rng.gen_range(285.0..300.0),
            absorbed_solar: rng.gen_range(0.0..800.0),
        },
        sigma: rng.gen_range(0.5..=1.0),
        dt: rng.gen_range(10.0..3600.0),
        dx: thickness / (wall_nodes - 1) as f64,
        conductivity: rng.gen_range(0.5..2.5),
        heat_capacity: rng.gen_range(1.0e6..3.0e6),
        advection: if rng.gen_bool(0.7) {
            rng.gen_range(5.0..60.0)
        } else {
            0.0
        },
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn sweep_vs_dense(cases: usize, perturb: Perturbation) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e0b);
    let mut worst = 0.0_f64;
    for _ in 0..cases {
        let nodes = rng.gen_range(3..=40);
        let step = random_step(&mut rng, nodes);
        let mut sweep = forward_sweep(&step)?;
        sweep.alpha[Mesh::OUTER_SURFACE] *= 1.0 + perturb.relative;
        let inner = close_inner_surface(&step, &sweep)?;
        let fast = back_substitute(&sweep, inner);
        worst = worst.max(max_abs_diff(&fast, &dense_step(&step)?));
    }
    Ok(Check::below(
        "extended sweep matches dense elimination",
        worst,
        1e-9,
        format!("max |ΔT| over {cases} random steps, K"),
    ))
}

fn slab_sweep_vs_dense() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51ab);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let n = rng.gen_range(3..=40);
        let (sigma, dt, dx, a) = (
            rng.gen_range(0.5..=1.0),
            rng.gen_range(10.0..120.0),
            0.3 / (n - 1) as f64,
            rng.gen_range(3e-7..1.5e-6),
        );
        // A diurnal wave already inside the slab.
        let slab = PeriodicSlab {
            diffusivity: a,
            mean: rng.gen_range(270.0..310.0),
            amplitude: rng.gen_range(1.0..30.0),
            omega: 2.0 * std::f64::consts::PI / 86400.0,
        };
        let t0 = rng.gen_range(0.0..86400.0);
        let prev: Vec<f64> = (0..n)
            .map(|i| slab.temperature(i as f64 * dx, t0))
            .collect();
        let (left, right) = (
            slab.temperature(0.0, t0 + dt),
            slab.temperature((n - 1) as f64 * dx, t0 + dt),
        );
        let rows: Vec<_> = assemble_interior(&prev, sigma, dt, dx, a)
            .into_iter()
            .map(|r| r.to_tridiagonal())
            .collect();
        let sweep = classical_sweep(
            &rows,
            BoundaryClosure::fixed(left),
            BoundaryClosure::fixed(right),
        )?;
        let dense = assemble_slab(&prev, sigma, dt, dx, a, left, right).solve()?;
        worst = worst.max(max_abs_diff(&sweep, &dense));
    }
    Ok(Check::below(
        "classical sweep matches dense slab",
        worst,
        1e-12,
        "max |ΔT| over 20 random slabs, K",
    ))
}

/// Uniform system at room temperature with the sky at ambient.
pub fn equilibrium_system(temperature: f64) -> TrombeSystem {
    let mut system = TrombeSystem::default();
    system.glazing.sky = SkyModel::Ambient;
    system.room.air_temperature = temperature;
    system.room.radiant_temperature = temperature;
    system
}

fn equilibrium(steps: usize) -> Result<Check> {
    let t0 = 293.15;
    let system = equilibrium_system(t0);
    let mesh = Mesh::new(31, system.wall.thickness)?;
    let cfg = NumericsConfig::default();
    let mut state = initial_state(&system, &mesh, t0, 0.0)?;
    let mut drift = 0.0_f64;
    let mut extra_iterations = 0;
    for k in 1..=steps {
        let sample = ClimateSample {
            time: k as f64 * cfg.dt,
            insolation: 0.0,
            ambient: t0,
        };
        let next = time_step(&state, &sample, &system, &mesh, &cfg)?;
        drift = drift.max(max_abs_diff(&next.temperatures, &state.temperatures));
        extra_iterations += next.iterations.saturating_sub(1);
        state = next;
    }
    let mut check = Check::below(
        "equilibrium is a fixed point",
        drift,
        1e-12,
        format!("max per-step drift over {steps} steps, K"),
    );
    check.passed &= extra_iterations == 0;
    Ok(check)
}

/// Sealed-channel system used for the steady resistance-chain check.
pub fn steady_system() -> TrombeSystem {
    let mut system = TrombeSystem::default();
    system.gap.vents = VentSchedule::AlwaysClosed;
    system
}

/// Marches a sealed system under constant climate to steady state with a
/// large fully implicit step. Returns the final state and its boundary.
pub fn run_to_steady(
    system: &TrombeSystem,
    mesh: &Mesh,
    ambient: f64,
    insolation: f64,
) -> Result<(crate::fdm::ThermalState, Boundary)> {
    let cfg = NumericsConfig {
        sigma: 1.0,
        dt: 1.0e5,
        fixpoint_tol: 1e-12,
        fixpoint_max_iter: 200,
        ..NumericsConfig::default()
    };
    let mut state = initial_state(system, mesh, ambient, 0.0)?;
    for k in 1..=2000 {
        let sample = ClimateSample {
            time: k as f64 * cfg.dt,
            insolation,
            ambient,
        };
        let next = time_step(&state, &sample, system, mesh, &cfg)?;
        let change = max_abs_diff(&next.temperatures, &state.temperatures);
        state = next;
        if change < 1e-12 {
            break;
        }
    }
    let boundary = Boundary {
        ambient,
        sky: system.glazing.sky.temperature(ambient)?,
        room_air: system.room.air_temperature,
        room_radiant: system.room.radiant_temperature,
        absorbed_solar: insolation * system.wall.absorptance_transmittance,
    };
    Ok((state, boundary))
}

/// Heat flux towards the outside through each interface of a steady
/// sealed-channel state, W/m².
pub fn interface_fluxes(
    t: &[f64],
    coeffs: &CoefficientSet,
    boundary: &Boundary,
    wall: &WallSpec,
    mesh: &Mesh,
) -> [f64; 5] {
    let (g1, g2, ag, w0) = (
        t[Mesh::OUTER_GLASS],
        t[Mesh::INNER_GLASS],
        t[Mesh::GAP_AIR],
        t[Mesh::OUTER_SURFACE],
    );
    let inner = t[mesh.inner_surface()];
    [
        coeffs.h_c_inf * (g1 - boundary.ambient) + coeffs.h_r_inf * (g1 - boundary.sky),
        coeffs.h_12 * (g2 - g1),
        coeffs.h_rgap * (w0 - g2) + coeffs.h_cgap * (ag - g2),
        wall.conductivity * (inner - w0) / wall.thickness,
        coeffs.h_c_room * (boundary.room_air - inner)
            + coeffs.h_r_room * (boundary.room_radiant - inner),
    ]
}

/// Largest deviation of the wall nodes from the straight line through
/// the two surface temperatures, K.
pub fn wall_linearity_error(t: &[f64], mesh: &Mesh) -> f64 {
    let first = t[Mesh::OUTER_SURFACE];
    let last = t[mesh.inner_surface()];
    let n = mesh.wall_nodes() - 1;
    t[Mesh::OUTER_SURFACE..]
        .iter()
        .enumerate()
        .map(|(j, v)| (v - (first + (last - first) * j as f64 / n as f64)).abs())
        .fold(0.0, f64::max)
}

fn steady_profile() -> Result<Vec<Check>> {
    let system = steady_system();
    let mesh = Mesh::new(31, system.wall.thickness)?;
    let (state, boundary) = run_to_steady(&system, &mesh, 273.15, 0.0)?;
    let t = &state.temperatures;
    let analytic = analytic_steady_profile(&state.coeffs, &boundary, &system.wall, &mesh)?;
    let fluxes = interface_fluxes(t, &state.coeffs, &boundary, &system.wall, &mesh);
    let mean = fluxes.iter().sum::<f64>() / fluxes.len() as f64;
    let continuity = fluxes
        .iter()
        .map(|q| (q - mean).abs() / mean.abs())
        .fold(0.0, f64::max);
    Ok(vec![
        Check::below(
            "steady wall profile is linear",
            wall_linearity_error(t, &mesh),
            1e-6,
            "max deviation from linear, K",
        ),
        Check::below(
            "steady interface fluxes are continuous",
            continuity,
            1e-6,
            "max relative flux mismatch",
        ),
        Check::below(
            "steady state matches resistance chain",
            max_abs_diff(t, &analytic),
            1e-6,
            "max |ΔT| against the chain, K",
        ),
    ])
}

/// Random channel states for the march/algebraic comparison. Exchange
/// numbers stay at or below the reference channel's.
pub fn random_gap_case<R: Rng>(rng: &mut R) -> (f64, f64, f64, CoefficientSet) {
    let mut coeffs = CoefficientSet::sealed(
        rng.gen_range(2.0..3.0),
        5.0,
        5.0,
        15.0,
        4.0,
        &RoomSpec::default(),
    );
    coeffs.gap_flow = rng.gen_range(0.1..0.3);
    let inlet = rng.gen_range(285.0..300.0);
    (
        inlet + rng.gen_range(5.0..60.0),
        inlet + rng.gen_range(5.0..60.0),
        inlet,
        coeffs,
    )
}

fn gap_consistency() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a9);
    let gap = GapSpec::default();
    let wall = WallSpec::default();
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let (tw, tg, tin, coeffs) = random_gap_case(&mut rng);
        let marched = march_gap_profile(tw, tg, tin, &coeffs, &gap, &wall, 200)?;
        let algebraic = solve_gap_algebraic(tw, tg, tin, &coeffs, &gap, &wall)?;
        let rel = (marched.outlet - algebraic.outlet).abs() / (algebraic.outlet - tin);
        worst = worst.max(rel);
    }
    Ok(Check::below(
        "channel march agrees with algebraic reduction",
        worst,
        0.02,
        "max |ΔT_m| / (T_m − T_r) over 20 flow states",
    ))
}

/// `(|∫ residual dt|, ∫ absorbed dt)` over one reported synthetic day.
pub fn diurnal_energy_closure(system: &TrombeSystem, cfg: &NumericsConfig) -> Result<(f64, f64)> {
    let climate = synthesize_climate(&SyntheticClimate::february(3))?;
    let mesh = Mesh::new(31, system.wall.thickness)?;
    let sim = simulate(
        system,
        &mesh,
        cfg,
        &climate,
        Horizon {
            spin_up_days: 1.0,
            report_days: 1.0,
        },
    )?;
    let residual: f64 = sim
        .records
        .iter()
        .map(|r| r.balance.residual() * cfg.dt)
        .sum();
    let absorbed: f64 = sim
        .records
        .iter()
        .map(|r| r.balance.absorbed_solar * cfg.dt)
        .sum();
    Ok((residual.abs(), absorbed))
}

fn energy_closure() -> Result<Check> {
    let (residual, absorbed) =
        diurnal_energy_closure(&TrombeSystem::default(), &NumericsConfig::default())?;
    Ok(Check::below(
        "energy closes over a diurnal cycle",
        residual / absorbed,
        0.01,
        "|∫(absorbed − q_t − q_f − q_r) − ΔE| / ∫absorbed",
    ))
}

fn order_checks() -> Result<Vec<Check>> {
    let problem = SlabProblem::default();
    let mut checks = Vec::new();
    for (sigma, expected, name) in [
        (0.5, 2.0, "temporal order, sigma = 0.5"),
        (1.0, 1.0, "temporal order, sigma = 1"),
    ] {
        let study = temporal_study(
            &problem,
            sigma,
            presets::TEMPORAL_NODES,
            presets::TEMPORAL_DT0,
            presets::HALVINGS,
        )?;
        let worst = study
            .orders()
            .iter()
            .map(|p| (p - expected).abs())
            .fold(0.0, f64::max);
        checks.push(Check::below(
            name,
            worst,
            0.15,
            format!("max |order − {expected}|"),
        ));
    }
    let study = spatial_study(
        &problem,
        0.5,
        presets::SPATIAL_DT,
        presets::SPATIAL_INTERVALS0,
        presets::HALVINGS,
    )?;
    let worst = study
        .orders()
        .iter()
        .map(|p| (p - 2.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check::below("spatial order", worst, 0.2, "max |order − 2|"));
    Ok(checks)
}

/// Runs the suite. `perturb` is forwarded to the sweep/dense comparison.
pub fn run(level: Level, perturb: Perturbation) -> Result<Vec<Check>> {
    let full = level == Level::Full;
    let mut checks = vec![
        sweep_vs_dense(if full { 100 } else { 20 }, perturb)?,
        slab_sweep_vs_dense()?,
        equilibrium(if full { 1000 } else { 100 })?,
    ];
    checks.extend(steady_profile()?);
    checks.push(gap_consistency()?);
    checks.push(energy_closure()?);
    if full {
        checks.extend(order_checks()?);
    }
    Ok(checks)
}
