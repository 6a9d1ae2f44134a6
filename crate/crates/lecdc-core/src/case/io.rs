//! Case loading and saving.
//!
//! A case is a directory holding one TOML manifest plus two delimited series
//! files, one row per period:
//!
//! * `community.csv` — columns `day_ahead_price, ppa_price, afrr_price,
//!   workload, mean_job_duration, outdoor_temp, wind_gen`;
//! * `households.csv` — per household `i` the columns `h{i}_baseline,
//!   h{i}_load_lower, h{i}_load_upper, h{i}_pv, h{i}_drive`.
//!
//! Series files may be longer than the manifest's horizon; the manifest's
//! `[grid]` block selects the rows actually used, so several manifests (a
//! year, one day, ...) can share the same data files.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::validate::{validate_case, Finding};
use super::{
    CaseBundle, CommunitySpec, DataCentreSpec, EvSpec, ExogenousProfiles, HouseholdSpec,
    ScenarioConfig, ThermalSpec, TimeGrid,
};

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{file}: missing column {column:?}")]
    MissingColumn { file: PathBuf, column: String },
    #[error("{file}: need {need} rows from offset {offset}, found {have}")]
    SeriesTooShort {
        file: PathBuf,
        offset: usize,
        need: usize,
        have: usize,
    },
    #[error("case is invalid:\n{}", findings.iter().map(|f| format!("  - {}", f)).collect::<Vec<_>>().join("\n"))]
    Validation { findings: Vec<Finding> },
}

const COMMUNITY_COLUMNS: [&str; 7] = [
    "day_ahead_price",
    "ppa_price",
    "afrr_price",
    "workload",
    "mean_job_duration",
    "outdoor_temp",
    "wind_gen",
];

#[derive(Debug, Serialize, Deserialize)]
struct RawCase {
    grid: RawGrid,
    series: RawSeries,
    scenario: RawScenario,
    data_centre: RawDataCentre,
    battery: RawBattery,
    households: Vec<RawHousehold>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawGrid {
    step_hours: f64,
    period_count: usize,
    #[serde(default)]
    start_index: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawSeries {
    community: String,
    households: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawScenario {
    thermal_coupling: bool,
    job_pausing: bool,
    afrr: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawDataCentre {
    rating: f64,
    resume_overhead: f64,
    heat_slope: f64,
    heat_floor: f64,
    exchanger_eff: f64,
    #[serde(default = "default_upgrade_eff")]
    upgrade_eff: f64,
    max_delay: f64,
    #[serde(default = "default_big_m")]
    big_m: f64,
}

fn default_upgrade_eff() -> f64 {
    1.0
}

fn default_big_m() -> f64 {
    1e4
}

#[derive(Debug, Serialize, Deserialize)]
struct RawBattery {
    rating: f64,
    eff_charge: f64,
    eff_discharge: f64,
    soc_min: f64,
    soc_max: f64,
    soc_initial: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawHousehold {
    ev: RawEv,
    thermal: RawThermal,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawEv {
    charger_rating: f64,
    eff_charge: f64,
    eff_discharge: f64,
    soc_min: f64,
    soc_max: f64,
    soc_initial: f64,
    arrival: usize,
    departure: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawThermal {
    resistance: f64,
    capacitance: f64,
    temp_min: f64,
    temp_max: f64,
    /// Defaults to the midpoint of the comfort band.
    temp_initial: Option<f64>,
    heat_rating: f64,
    cool_rating: f64,
    cool_eff: f64,
}

struct SeriesTable {
    path: PathBuf,
    columns: HashMap<String, Vec<f64>>,
    rows: usize,
}

impl SeriesTable {
    fn read(path: &Path) -> Result<Self, CaseError> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| CaseError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| CaseError::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
        for (row_idx, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CaseError::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
            for (col, field) in record.iter().enumerate() {
                let value: f64 = field.trim().parse().map_err(|_| CaseError::Parse {
                    path: path.to_path_buf(),
                    message: format!(
                        "row {} column {:?}: {:?} is not a number",
                        row_idx + 2,
                        headers.get(col).map(String::as_str).unwrap_or("?"),
                        field
                    ),
                })?;
                columns[col].push(value);
            }
        }
        let rows = columns.first().map(Vec::len).unwrap_or(0);
        Ok(SeriesTable {
            path: path.to_path_buf(),
            columns: headers.into_iter().zip(columns).collect(),
            rows,
        })
    }

    fn slice(&self, column: &str, grid: &TimeGrid) -> Result<Vec<f64>, CaseError> {
        let series = self
            .columns
            .get(column)
            .ok_or_else(|| CaseError::MissingColumn {
                file: self.path.clone(),
                column: column.to_string(),
            })?;
        let end = grid.start_index + grid.period_count;
        if series.len() < end {
            return Err(CaseError::SeriesTooShort {
                file: self.path.clone(),
                offset: grid.start_index,
                need: grid.period_count,
                have: self.rows,
            });
        }
        Ok(series[grid.start_index..end].to_vec())
    }
}

/// Loads a case without validating it. Structural problems (missing files,
/// malformed numbers, short series) are still errors.
pub fn load_case_unchecked(manifest_path: impl AsRef<Path>) -> Result<CaseBundle, CaseError> {
    let manifest_path = manifest_path.as_ref();
    let text = std::fs::read_to_string(manifest_path).map_err(|source| CaseError::Io {
        path: manifest_path.to_path_buf(),
        source,
    })?;
    let raw: RawCase = toml::from_str(&text).map_err(|e| CaseError::Parse {
        path: manifest_path.to_path_buf(),
        message: e.to_string(),
    })?;
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    let grid = TimeGrid {
        step_hours: raw.grid.step_hours,
        period_count: raw.grid.period_count,
        start_index: raw.grid.start_index,
    };

    let community_table = SeriesTable::read(&base.join(&raw.series.community))?;
    let household_table = SeriesTable::read(&base.join(&raw.series.households))?;

    let mut profiles = ExogenousProfiles {
        day_ahead_price: community_table.slice("day_ahead_price", &grid)?,
        ppa_price: community_table.slice("ppa_price", &grid)?,
        afrr_price: community_table.slice("afrr_price", &grid)?,
        workload: community_table.slice("workload", &grid)?,
        mean_job_duration: community_table.slice("mean_job_duration", &grid)?,
        outdoor_temp: community_table.slice("outdoor_temp", &grid)?,
        wind_gen: community_table.slice("wind_gen", &grid)?,
        pv_gen: Vec::new(),
        drive_power: Vec::new(),
    };

    let mut households = Vec::with_capacity(raw.households.len());
    for (i, h) in raw.households.iter().enumerate() {
        let col = |suffix: &str| household_table.slice(&format!("h{}_{}", i, suffix), &grid);
        profiles.pv_gen.push(col("pv")?);
        profiles.drive_power.push(col("drive")?);
        let thermal = ThermalSpec {
            resistance: h.thermal.resistance,
            capacitance: h.thermal.capacitance,
            temp_min: h.thermal.temp_min,
            temp_max: h.thermal.temp_max,
            temp_initial: h
                .thermal
                .temp_initial
                .unwrap_or(0.5 * (h.thermal.temp_min + h.thermal.temp_max)),
            heat_rating: h.thermal.heat_rating,
            cool_rating: h.thermal.cool_rating,
            cool_eff: h.thermal.cool_eff,
        };
        let ev = EvSpec {
            charger_rating: h.ev.charger_rating,
            eff_charge: h.ev.eff_charge,
            eff_discharge: h.ev.eff_discharge,
            soc_min: h.ev.soc_min,
            soc_max: h.ev.soc_max,
            soc_initial: h.ev.soc_initial,
            arrival: h.ev.arrival,
            departure: h.ev.departure,
        };
        households.push(HouseholdSpec {
            baseline_load: col("baseline")?,
            load_lower: col("load_lower")?,
            load_upper: col("load_upper")?,
            ev,
            thermal,
        });
    }

    let community = CommunitySpec {
        households,
        battery_rating: raw.battery.rating,
        battery_eff_charge: raw.battery.eff_charge,
        battery_eff_discharge: raw.battery.eff_discharge,
        battery_soc_min: raw.battery.soc_min,
        battery_soc_max: raw.battery.soc_max,
        battery_soc_initial: raw.battery.soc_initial,
    };
    let data_centre = DataCentreSpec {
        rating: raw.data_centre.rating,
        resume_overhead: raw.data_centre.resume_overhead,
        heat_slope: raw.data_centre.heat_slope,
        heat_floor: raw.data_centre.heat_floor,
        exchanger_eff: raw.data_centre.exchanger_eff,
        upgrade_eff: raw.data_centre.upgrade_eff,
        max_delay: raw.data_centre.max_delay,
        big_m: raw.data_centre.big_m,
    };
    let scenario = ScenarioConfig {
        thermal_coupling: raw.scenario.thermal_coupling,
        job_pausing: raw.scenario.job_pausing,
        afrr: raw.scenario.afrr,
    };

    Ok(CaseBundle {
        grid,
        community,
        data_centre,
        profiles,
        scenario,
    })
}

/// Loads and validates a case; any finding makes the load fail.
pub fn load_case(manifest_path: impl AsRef<Path>) -> Result<CaseBundle, CaseError> {
    let bundle = load_case_unchecked(manifest_path)?;
    let findings = validate_case(&bundle);
    if findings.is_empty() {
        Ok(bundle)
    } else {
        Err(CaseError::Validation { findings })
    }
}

fn fmt_row(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| format!("{}", v)).collect()
}

/// Writes `bundle` into `dir` as `case.toml` + the two series files.
///
/// The written manifest always has `start_index = 0` over exactly the
/// bundle's horizon; loading it back yields a bundle equal to the input.
pub fn save_case(bundle: &CaseBundle, dir: impl AsRef<Path>) -> Result<PathBuf, CaseError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| CaseError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source: std::io::Error| CaseError::Io {
            path: path.clone(),
            source,
        }
    };

    let community_path = dir.join("community.csv");
    {
        let mut w = csv::Writer::from_path(&community_path)
            .map_err(|e| CaseError::Parse {
                path: community_path.clone(),
                message: e.to_string(),
            })?;
        w.write_record(COMMUNITY_COLUMNS)
            .map_err(|e| CaseError::Parse {
                path: community_path.clone(),
                message: e.to_string(),
            })?;
        let p = &bundle.profiles;
        for t in 0..bundle.grid.period_count {
            w.write_record(fmt_row(&[
                p.day_ahead_price[t],
                p.ppa_price[t],
                p.afrr_price[t],
                p.workload[t],
                p.mean_job_duration[t],
                p.outdoor_temp[t],
                p.wind_gen[t],
            ]))
            .map_err(|e| CaseError::Parse {
                path: community_path.clone(),
                message: e.to_string(),
            })?;
        }
        w.flush().map_err(io_err(&community_path))?;
    }

    let household_path = dir.join("households.csv");
    {
        let mut w = csv::Writer::from_path(&household_path)
            .map_err(|e| CaseError::Parse {
                path: household_path.clone(),
                message: e.to_string(),
            })?;
        let mut header = Vec::new();
        for i in 0..bundle.household_count() {
            for suffix in ["baseline", "load_lower", "load_upper", "pv", "drive"] {
                header.push(format!("h{}_{}", i, suffix));
            }
        }
        w.write_record(&header).map_err(|e| CaseError::Parse {
            path: household_path.clone(),
            message: e.to_string(),
        })?;
        for t in 0..bundle.grid.period_count {
            let mut row = Vec::new();
            for (i, h) in bundle.community.households.iter().enumerate() {
                row.push(h.baseline_load[t]);
                row.push(h.load_lower[t]);
                row.push(h.load_upper[t]);
                row.push(bundle.profiles.pv_gen[i][t]);
                row.push(bundle.profiles.drive_power[i][t]);
            }
            w.write_record(fmt_row(&row)).map_err(|e| CaseError::Parse {
                path: household_path.clone(),
                message: e.to_string(),
            })?;
        }
        w.flush().map_err(io_err(&household_path))?;
    }

    let raw = RawCase {
        grid: RawGrid {
            step_hours: bundle.grid.step_hours,
            period_count: bundle.grid.period_count,
            start_index: 0,
        },
        series: RawSeries {
            community: "community.csv".to_string(),
            households: "households.csv".to_string(),
        },
        scenario: RawScenario {
            thermal_coupling: bundle.scenario.thermal_coupling,
            job_pausing: bundle.scenario.job_pausing,
            afrr: bundle.scenario.afrr,
        },
        data_centre: RawDataCentre {
            rating: bundle.data_centre.rating,
            resume_overhead: bundle.data_centre.resume_overhead,
            heat_slope: bundle.data_centre.heat_slope,
            heat_floor: bundle.data_centre.heat_floor,
            exchanger_eff: bundle.data_centre.exchanger_eff,
            upgrade_eff: bundle.data_centre.upgrade_eff,
            max_delay: bundle.data_centre.max_delay,
            big_m: bundle.data_centre.big_m,
        },
        battery: RawBattery {
            rating: bundle.community.battery_rating,
            eff_charge: bundle.community.battery_eff_charge,
            eff_discharge: bundle.community.battery_eff_discharge,
            soc_min: bundle.community.battery_soc_min,
            soc_max: bundle.community.battery_soc_max,
            soc_initial: bundle.community.battery_soc_initial,
        },
        households: bundle
            .community
            .households
            .iter()
            .map(|h| RawHousehold {
                ev: RawEv {
                    charger_rating: h.ev.charger_rating,
                    eff_charge: h.ev.eff_charge,
                    eff_discharge: h.ev.eff_discharge,
                    soc_min: h.ev.soc_min,
                    soc_max: h.ev.soc_max,
                    soc_initial: h.ev.soc_initial,
                    arrival: h.ev.arrival,
                    departure: h.ev.departure,
                },
                thermal: RawThermal {
                    resistance: h.thermal.resistance,
                    capacitance: h.thermal.capacitance,
                    temp_min: h.thermal.temp_min,
                    temp_max: h.thermal.temp_max,
                    temp_initial: Some(h.thermal.temp_initial),
                    heat_rating: h.thermal.heat_rating,
                    cool_rating: h.thermal.cool_rating,
                    cool_eff: h.thermal.cool_eff,
                },
            })
            .collect(),
    };
    let manifest_path = dir.join("case.toml");
    let text = toml::to_string_pretty(&raw).map_err(|e| CaseError::Parse {
        path: manifest_path.clone(),
        message: e.to_string(),
    })?;
    std::fs::write(&manifest_path, text).map_err(io_err(&manifest_path))?;
    Ok(manifest_path)
}
