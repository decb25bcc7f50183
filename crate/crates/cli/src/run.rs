use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use trombe_core::fdm::StepRecord;
use trombe_core::model::ZERO_CELSIUS;
use trombe_core::{simulate, Mesh, Simulation};

use crate::error::{CliError, CliResult};
use crate::scenario::Scenario;

pub const TIMESERIES_HEADER: [&str; 9] = [
    "time_s",
    "q_s_wm2",
    "t_ambient_c",
    "t_g1_c",
    "t_g2_c",
    "t_gap_air_c",
    "t_w0_c",
    "t_mid_c",
    "t_wdelta_c",
];

pub const ENERGY_HEADER: [&str; 6] = [
    "time_s",
    "q_t_wm2",
    "q_f_wm2",
    "q_r_wm2",
    "absorbed_wm2",
    "stored_wm2",
];

/// What a finished run produced.
#[derive(Debug)]
pub struct RunReport {
    pub name: String,
    pub out_dir: PathBuf,
    pub summary: String,
}

pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> CliResult<RunReport> {
    let climate = scenario.climate_series()?;
    let mesh = scenario.mesh();
    let sim = simulate(
        &scenario.system,
        &mesh,
        &scenario.numerics,
        &climate,
        scenario.horizon,
    )
    .map_err(CliError::from_solver)?;

    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    write_timeseries(
        &out_dir.join("timeseries.csv"),
        &sim.records,
        &mesh,
        scenario.every,
    )?;
    write_energy(&out_dir.join("energy.csv"), &sim.records, scenario.every)?;
    let summary = summarize(scenario, &sim);
    write_file(&out_dir.join("summary.txt"), summary.as_bytes())?;
    write_file(&out_dir.join("plot.gp"), GNUPLOT.as_bytes())?;

    if let Some(t) = sim.first_unconverged {
        return Err(CliError::Numerical(format!(
            "{}: fixpoint did not converge within {} iterations, first at t = {t} s",
            scenario.name, scenario.numerics.fixpoint_max_iter
        )));
    }
    Ok(RunReport {
        name: scenario.name.clone(),
        out_dir: out_dir.to_path_buf(),
        summary,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::io(path, source),
        other => CliError::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_timeseries(
    path: &Path,
    records: &[StepRecord],
    mesh: &Mesh,
    every: usize,
) -> CliResult<()> {
    let err = csv_error(path);
    let mut w = csv_writer(path)?;
    w.write_record(TIMESERIES_HEADER).map_err(&err)?;
    let c = |k: f64| (k - ZERO_CELSIUS).to_string();
    for r in records.iter().step_by(every) {
        let t = &r.state.temperatures;
        w.write_record([
            r.climate.time.to_string(),
            r.climate.insolation.to_string(),
            c(r.climate.ambient),
            c(t[Mesh::OUTER_GLASS]),
            c(t[Mesh::INNER_GLASS]),
            c(t[Mesh::GAP_AIR]),
            c(t[Mesh::OUTER_SURFACE]),
            c(t[mesh.mid_wall()]),
            c(t[mesh.inner_surface()]),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_energy(path: &Path, records: &[StepRecord], every: usize) -> CliResult<()> {
    let err = csv_error(path);
    let mut w = csv_writer(path)?;
    w.write_record(ENERGY_HEADER).map_err(&err)?;
    for r in records.iter().step_by(every) {
        let b = &r.balance;
        w.write_record([
            r.climate.time.to_string(),
            b.q_t.to_string(),
            b.q_f.to_string(),
            b.q_r.to_string(),
            b.absorbed_solar.to_string(),
            b.stored_rate.to_string(),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Daily energy totals in Wh/m² plus solver statistics.
pub fn summarize(scenario: &Scenario, sim: &Simulation) -> String {
    let dt = scenario.numerics.dt;
    let mut s = String::new();
    let _ = writeln!(s, "scenario        {}", scenario.name);
    let _ = writeln!(
        s,
        "numerics        sigma {}, dt {} s, {} wall nodes, spin-up {} d, report {} d",
        scenario.numerics.sigma,
        dt,
        scenario.wall_nodes,
        scenario.horizon.spin_up_days,
        scenario.horizon.report_days
    );
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:>4} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "day", "absorbed", "q_t", "q_f", "q_r", "stored"
    );
    let start = sim
        .records
        .first()
        .map(|r| r.climate.time - dt)
        .unwrap_or(0.0);
    let mut days: Vec<[f64; 5]> = Vec::new();
    for r in &sim.records {
        let day = ((r.climate.time - dt - start) / 86400.0).floor() as usize;
        if days.len() <= day {
            days.resize(day + 1, [0.0; 5]);
        }
        let b = &r.balance;
        for (acc, q) in
            days[day]
                .iter_mut()
                .zip([b.absorbed_solar, b.q_t, b.q_f, b.q_r, b.stored_rate])
        {
            *acc += q * dt / 3600.0;
        }
    }
    let mut total = [0.0; 5];
    for (i, d) in days.iter().enumerate() {
        let _ = writeln!(
            s,
            "{:>4} {:>12.1} {:>12.1} {:>12.1} {:>12.1} {:>12.1}",
            i + 1,
            d[0],
            d[1],
            d[2],
            d[3],
            d[4]
        );
        for (t, v) in total.iter_mut().zip(d) {
            *t += v;
        }
    }
    let _ = writeln!(
        s,
        "{:>4} {:>12.1} {:>12.1} {:>12.1} {:>12.1} {:>12.1}",
        "all", total[0], total[1], total[2], total[3], total[4]
    );
    let _ = writeln!(s, "(Wh/m² of wall)");
    let _ = writeln!(s);
    let mean = if sim.total_steps > 0 {
        sim.total_iterations as f64 / sim.total_steps as f64
    } else {
        0.0
    };
    let _ = writeln!(
        s,
        "fixpoint        {} steps, mean {:.2} iterations, max {}",
        sim.total_steps, mean, sim.max_iterations
    );
    match sim.first_unconverged {
        Some(t) => {
            let _ = writeln!(s, "unconverged     first at t = {t} s");
        }
        None => {
            let _ = writeln!(s, "unconverged     none");
        }
    }
    s
}

/// Writes the summary of each report to standard output.
pub fn print_reports(reports: &[RunReport]) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    for r in reports {
        writeln!(out, "{} -> {}", r.name, r.out_dir.display())
            .and_then(|_| writeln!(out, "{}", r.summary))
            .map_err(|e| CliError::io("<stdout>", e))?;
    }
    Ok(())
}

const GNUPLOT: &str = r#"# gnuplot -p plot.gp   (run inside the output directory)
set datafile separator ","
set key autotitle columnhead outside
set xlabel "time (h)"
set grid

set multiplot layout 2,1
set ylabel "temperature (°C)"
plot "timeseries.csv" using ($1/3600):3 with lines, \
     "" using ($1/3600):4 with lines, \
     "" using ($1/3600):5 with lines, \
     "" using ($1/3600):6 with lines, \
     "" using ($1/3600):7 with lines, \
     "" using ($1/3600):8 with lines, \
     "" using ($1/3600):9 with lines

set ylabel "flux (W/m²)"
plot "energy.csv" using ($1/3600):2 with lines, \
     "" using ($1/3600):3 with lines, \
     "" using ($1/3600):4 with lines, \
     "" using ($1/3600):5 with lines
unset multiplot
"#;
