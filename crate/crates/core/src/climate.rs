//! Hourly climate driving the simulation: CSV ingestion and synthetic
//! diurnal series.
//!
//! CSV schema (UTF-8, comma separated, header mandatory):
//!
//! ```text
//! time_s,q_s_wm2,t_ambient_c
//! 0,0,-3.5
//! 3600,0,-4.1
//! ```
//!
//! `q_s_wm2` is total insolation on the vertical collector face; ambient
//! temperature is in Celsius on disk and kelvin in memory.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ZERO_CELSIUS;

/// Column names of the climate CSV.
pub const CSV_HEADER: [&str; 3] = ["time_s", "q_s_wm2", "t_ambient_c"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClimateSample {
    /// Seconds since scenario start.
    pub time: f64,
    /// Insolation on the vertical face, W/m².
    pub insolation: f64,
    /// Ambient air temperature, K.
    pub ambient: f64,
}

/// Time-ordered climate samples with a regular upper bound on spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct ClimateSeries {
    samples: Vec<ClimateSample>,
    cadence: f64,
}

impl ClimateSeries {
    /// Validates ordering, sign constraints and spacing. The cadence is
    /// taken from the first interval; no later interval may exceed it.
    pub fn new(samples: Vec<ClimateSample>) -> Result<Self> {
        Self::with_lines(samples, None)
    }

    fn with_lines(samples: Vec<ClimateSample>, lines: Option<&[u64]>) -> Result<Self> {
        let line = |i: usize| lines.map(|l| l[i]);
        if samples.len() < 2 {
            return Err(Error::climate(None, "at least two samples are required"));
        }
        for (i, s) in samples.iter().enumerate() {
            if !s.time.is_finite() {
                return Err(Error::climate(line(i), "timestamp is not finite"));
            }
            if !(s.insolation >= 0.0) || !s.insolation.is_finite() {
                return Err(Error::climate(
                    line(i),
                    format!("insolation must be non-negative, got {}", s.insolation),
                ));
            }
            if !(s.ambient > 0.0) || !s.ambient.is_finite() {
                return Err(Error::climate(
                    line(i),
                    format!("ambient temperature below absolute zero ({} K)", s.ambient),
                ));
            }
        }
        let cadence = samples[1].time - samples[0].time;
        for i in 1..samples.len() {
            let step = samples[i].time - samples[i - 1].time;
            if !(step > 0.0) {
                return Err(Error::climate(line(i), "timestamps must strictly increase"));
            }
            if step > cadence * (1.0 + 1e-9) {
                return Err(Error::climate(
                    line(i),
                    format!("gap of {step} s exceeds the {cadence} s cadence"),
                ));
            }
        }
        Ok(Self { samples, cadence })
    }

    pub fn samples(&self) -> &[ClimateSample] {
        &self.samples
    }

    pub fn cadence(&self) -> f64 {
        self.cadence
    }

    pub fn start(&self) -> f64 {
        self.samples[0].time
    }

    pub fn end(&self) -> f64 {
        self.samples[self.samples.len() - 1].time
    }

    /// Linear interpolation between the bracketing samples.
    pub fn at(&self, time: f64) -> Result<ClimateSample> {
        let tol = 1e-9 * self.cadence;
        if time < self.start() - tol || time > self.end() + tol {
            return Err(Error::climate(
                None,
                format!(
                    "time {time} s outside the series [{}, {}] s",
                    self.start(),
                    self.end()
                ),
            ));
        }
        let idx = self.samples.partition_point(|s| s.time <= time);
        if idx == 0 {
            return Ok(ClimateSample {
                time,
                ..self.samples[0]
            });
        }
        if idx == self.samples.len() {
            return Ok(ClimateSample {
                time,
                ..self.samples[idx - 1]
            });
        }
        let (a, b) = (&self.samples[idx - 1], &self.samples[idx]);
        let w = (time - a.time) / (b.time - a.time);
        Ok(ClimateSample {
            time,
            insolation: a.insolation + w * (b.insolation - a.insolation),
            ambient: a.ambient + w * (b.ambient - a.ambient),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    time_s: f64,
    q_s_wm2: f64,
    t_ambient_c: f64,
}

/// Reads and validates a climate series from a file.
pub fn load_climate_csv(path: impl AsRef<Path>) -> Result<ClimateSeries> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_climate_csv(file)
}

pub fn read_climate_csv<R: Read>(reader: R) -> Result<ClimateSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::climate(Some(1), e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::climate(
            Some(1),
            format!("expected header `{}`", CSV_HEADER.join(",")),
        ));
    }
    let mut samples = Vec::new();
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line());
            Error::climate(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row: CsvRow = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::climate(Some(line), format!("malformed row: {e}")))?;
        samples.push(ClimateSample {
            time: row.time_s,
            insolation: row.q_s_wm2,
            ambient: row.t_ambient_c + ZERO_CELSIUS,
        });
        lines.push(line);
    }
    ClimateSeries::with_lines(samples, Some(&lines))
}

pub fn write_climate_csv<W: Write>(writer: W, series: &ClimateSeries) -> Result<()> {
    let io = |e: csv::Error| Error::climate(None, e.to_string());
    let mut wtr = csv::Writer::from_writer(writer);
    for s in series.samples() {
        wtr.serialize(CsvRow {
            time_s: s.time,
            q_s_wm2: s.insolation,
            t_ambient_c: s.ambient - ZERO_CELSIUS,
        })
        .map_err(io)?;
    }
    wtr.flush().map_err(|e| Error::climate(None, e.to_string()))
}

/// Parameters of a synthetic clear-sky diurnal climate.
///
/// Insolation is a half sine between sunrise and sunset; ambient
/// temperature is a cosine peaking `lag_hours` after solar noon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticClimate {
    pub days: usize,
    /// Peak vertical-face insolation at solar noon, W/m².
    pub peak_insolation: f64,
    pub sunrise_hour: f64,
    pub sunset_hour: f64,
    /// Daily mean ambient temperature, K.
    pub mean_temperature: f64,
    /// Peak-to-peak diurnal ambient range, K.
    pub swing: f64,
    pub lag_hours: f64,
    /// Sample spacing, s.
    pub cadence: f64,
}

impl SyntheticClimate {
    /// Clear February days at a mid-latitude continental site.
    pub fn february(days: usize) -> Self {
        Self {
            days,
            peak_insolation: 600.0,
            sunrise_hour: 7.0,
            sunset_hour: 17.0,
            mean_temperature: ZERO_CELSIUS + 1.0,
            swing: 8.0,
            lag_hours: 2.0,
            cadence: 3600.0,
        }
    }

    fn hour_of_day(time: f64) -> f64 {
        (time / 3600.0).rem_euclid(24.0)
    }

    pub fn insolation_at(&self, time: f64) -> f64 {
        let h = Self::hour_of_day(time);
        if h <= self.sunrise_hour || h >= self.sunset_hour {
            return 0.0;
        }
        let phase = PI * (h - self.sunrise_hour) / (self.sunset_hour - self.sunrise_hour);
        self.peak_insolation * phase.sin()
    }

    pub fn ambient_at(&self, time: f64) -> f64 {
        let noon = 0.5 * (self.sunrise_hour + self.sunset_hour);
        let h = Self::hour_of_day(time);
        let phase = 2.0 * PI * (h - noon - self.lag_hours) / 24.0;
        self.mean_temperature + 0.5 * self.swing * phase.cos()
    }

    /// Closed-form daily insolation, Wh/m².
    pub fn daily_insolation_wh(&self) -> f64 {
        2.0 / PI * self.peak_insolation * (self.sunset_hour - self.sunrise_hour)
    }

    fn validate(&self) -> Result<()> {
        if self.days == 0 {
            return Err(Error::config("climate.days", "must be at least 1"));
        }
        if !(self.peak_insolation >= 0.0) {
            return Err(Error::config(
                "climate.peak_insolation",
                "must be non-negative",
            ));
        }
        if !(0.0..24.0).contains(&self.sunrise_hour)
            || !(self.sunset_hour > self.sunrise_hour && self.sunset_hour <= 24.0)
        {
            return Err(Error::config(
                "climate.sunset_hour",
                "need 0 ≤ sunrise < sunset ≤ 24",
            ));
        }
        if !(self.mean_temperature - 0.5 * self.swing > 0.0) || !(self.swing >= 0.0) {
            return Err(Error::config(
                "climate.mean_temperature",
                "ambient must stay above absolute zero with a non-negative swing",
            ));
        }
        if !(self.cadence > 0.0) {
            return Err(Error::config("climate.cadence", "must be positive"));
        }
        Ok(())
    }
}

/// Samples a synthetic climate at its cadence, `days · 86400 / cadence`
/// samples starting at time zero.
pub fn synthesize_climate(params: &SyntheticClimate) -> Result<ClimateSeries> {
    params.validate()?;
    let count = (params.days as f64 * 86400.0 / params.cadence).round() as usize;
    let samples = (0..count)
        .map(|i| {
            let time = i as f64 * params.cadence;
            ClimateSample {
                time,
                insolation: params.insolation_at(time),
                ambient: params.ambient_at(time),
            }
        })
        .collect();
    ClimateSeries::new(samples)
}
