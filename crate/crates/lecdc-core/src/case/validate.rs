//! Semantic validation of a loaded case.

use std::fmt;

use super::CaseBundle;

/// One violated invariant, with the field path that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

struct Check {
    findings: Vec<Finding>,
}

impl Check {
    fn fail(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            path: path.into(),
            message: message.into(),
        });
    }

    fn require(&mut self, ok: bool, path: &str, message: impl Into<String>) {
        if !ok {
            self.fail(path, message);
        }
    }

    fn series_len(&mut self, series: &[f64], expected: usize, path: &str) {
        if series.len() != expected {
            self.fail(
                path,
                format!("has {} entries, grid needs {}", series.len(), expected),
            );
        }
    }

    fn nonnegative(&mut self, series: &[f64], path: &str) {
        if let Some((t, v)) = series
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            self.fail(path, format!("entry {} is {} (must be >= 0)", t, v));
        }
    }

    fn finite(&mut self, series: &[f64], path: &str) {
        if let Some((t, v)) = series.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            self.fail(path, format!("entry {} is {}", t, v));
        }
    }
}

/// Checks every case invariant and returns one finding per violation.
///
/// Pure: the same bundle always produces the same findings, and a valid
/// bundle produces none.
pub fn validate_case(bundle: &CaseBundle) -> Vec<Finding> {
    let mut c = Check {
        findings: Vec::new(),
    };
    let grid = &bundle.grid;
    let t_count = grid.period_count;

    c.require(
        grid.step_hours > 0.0 && grid.step_hours.is_finite(),
        "grid.step_hours",
        "must be positive",
    );
    c.require(t_count >= 2, "grid.period_count", "must be at least 2");

    let p = &bundle.profiles;
    c.series_len(&p.day_ahead_price, t_count, "profiles.day_ahead_price");
    c.series_len(&p.ppa_price, t_count, "profiles.ppa_price");
    c.series_len(&p.afrr_price, t_count, "profiles.afrr_price");
    c.series_len(&p.workload, t_count, "profiles.workload");
    c.series_len(&p.mean_job_duration, t_count, "profiles.mean_job_duration");
    c.series_len(&p.outdoor_temp, t_count, "profiles.outdoor_temp");
    c.series_len(&p.wind_gen, t_count, "profiles.wind_gen");

    // prices and outdoor temperature may be negative, everything else not
    c.finite(&p.day_ahead_price, "profiles.day_ahead_price");
    c.finite(&p.ppa_price, "profiles.ppa_price");
    c.finite(&p.afrr_price, "profiles.afrr_price");
    c.finite(&p.outdoor_temp, "profiles.outdoor_temp");
    c.nonnegative(&p.workload, "profiles.workload");
    c.nonnegative(&p.mean_job_duration, "profiles.mean_job_duration");
    c.nonnegative(&p.wind_gen, "profiles.wind_gen");

    for (t, (&w, &mu)) in p.workload.iter().zip(&p.mean_job_duration).enumerate() {
        if w > 0.0 && mu <= 0.0 {
            c.fail(
                "profiles.mean_job_duration",
                format!("entry {} is {} while workload is positive", t, mu),
            );
            break;
        }
    }

    let dc = &bundle.data_centre;
    c.require(dc.rating > 0.0, "data_centre.rating", "must be positive");
    c.require(
        dc.resume_overhead > 1.0,
        "data_centre.resume_overhead",
        "must exceed 1",
    );
    c.require(
        dc.exchanger_eff > 0.0 && dc.exchanger_eff <= 1.0,
        "data_centre.exchanger_eff",
        "must be in (0, 1]",
    );
    c.require(
        dc.upgrade_eff > 0.0,
        "data_centre.upgrade_eff",
        "must be positive",
    );
    c.require(dc.heat_slope >= 0.0, "data_centre.heat_slope", "must be >= 0");
    c.require(dc.heat_floor >= 0.0, "data_centre.heat_floor", "must be >= 0");
    c.require(dc.max_delay > 0.0, "data_centre.max_delay", "must be positive");
    c.require(
        dc.big_m >= dc.rating * t_count as f64,
        "data_centre.big_m",
        format!(
            "must be at least rating * period_count = {}",
            dc.rating * t_count as f64
        ),
    );

    let com = &bundle.community;
    c.require(
        !com.households.is_empty(),
        "households",
        "at least one household required",
    );
    c.require(
        com.battery_rating >= 0.0,
        "battery.rating",
        "must be >= 0",
    );
    c.require(
        com.battery_eff_charge > 0.0 && com.battery_eff_charge <= 1.0,
        "battery.eff_charge",
        "must be in (0, 1]",
    );
    c.require(
        com.battery_eff_discharge > 0.0 && com.battery_eff_discharge <= 1.0,
        "battery.eff_discharge",
        "must be in (0, 1]",
    );
    c.require(
        com.battery_soc_min <= com.battery_soc_initial
            && com.battery_soc_initial <= com.battery_soc_max,
        "battery.soc_initial",
        "must lie between soc_min and soc_max",
    );
    c.require(
        com.battery_soc_min >= 0.0,
        "battery.soc_min",
        "must be >= 0",
    );

    let window_slots = grid.periods_per_day().min(t_count);
    for (i, h) in com.households.iter().enumerate() {
        let at = |field: &str| format!("households[{}].{}", i, field);

        c.series_len(&h.baseline_load, t_count, &at("baseline_load"));
        c.series_len(&h.load_lower, t_count, &at("load_lower"));
        c.series_len(&h.load_upper, t_count, &at("load_upper"));
        c.nonnegative(&h.baseline_load, &at("baseline_load"));
        c.nonnegative(&h.load_lower, &at("load_lower"));
        c.nonnegative(&h.load_upper, &at("load_upper"));
        if h.load_lower.len() == h.baseline_load.len()
            && h.load_upper.len() == h.baseline_load.len()
        {
            for t in 0..h.baseline_load.len() {
                if !(h.load_lower[t] <= h.baseline_load[t]
                    && h.baseline_load[t] <= h.load_upper[t])
                {
                    c.fail(
                        at("baseline_load"),
                        format!(
                            "entry {}: need load_lower <= baseline <= load_upper, got {} / {} / {}",
                            t, h.load_lower[t], h.baseline_load[t], h.load_upper[t]
                        ),
                    );
                    break;
                }
            }
        }

        if let Some(pv) = bundle.profiles.pv_gen.get(i) {
            c.series_len(pv, t_count, &format!("profiles.pv_gen[{}]", i));
            c.nonnegative(pv, &format!("profiles.pv_gen[{}]", i));
        } else {
            c.fail(format!("profiles.pv_gen[{}]", i), "missing series");
        }
        if let Some(drive) = bundle.profiles.drive_power.get(i) {
            c.series_len(drive, t_count, &format!("profiles.drive_power[{}]", i));
            c.nonnegative(drive, &format!("profiles.drive_power[{}]", i));
        } else {
            c.fail(format!("profiles.drive_power[{}]", i), "missing series");
        }

        let ev = &h.ev;
        c.require(ev.charger_rating >= 0.0, &at("ev.charger_rating"), "must be >= 0");
        c.require(
            ev.eff_charge > 0.0 && ev.eff_charge <= 1.0,
            &at("ev.eff_charge"),
            "must be in (0, 1]",
        );
        c.require(
            ev.eff_discharge > 0.0 && ev.eff_discharge <= 1.0,
            &at("ev.eff_discharge"),
            "must be in (0, 1]",
        );
        c.require(
            ev.soc_min <= ev.soc_initial && ev.soc_initial <= ev.soc_max,
            &at("ev.soc_initial"),
            "must lie between soc_min and soc_max",
        );
        c.require(ev.soc_min >= 0.0, &at("ev.soc_min"), "must be >= 0");
        c.require(
            ev.arrival < window_slots,
            &at("ev.arrival"),
            format!("index {} outside 0..{}", ev.arrival, window_slots),
        );
        c.require(
            ev.departure < window_slots,
            &at("ev.departure"),
            format!("index {} outside 0..{}", ev.departure, window_slots),
        );

        let th = &h.thermal;
        c.require(th.resistance > 0.0, &at("thermal.resistance"), "must be positive");
        c.require(
            th.capacitance > 0.0,
            &at("thermal.capacitance"),
            "must be positive",
        );
        c.require(
            th.temp_min <= th.temp_initial && th.temp_initial <= th.temp_max,
            &at("thermal.temp_initial"),
            "must lie between temp_min and temp_max",
        );
        c.require(th.heat_rating >= 0.0, &at("thermal.heat_rating"), "must be >= 0");
        c.require(th.cool_rating >= 0.0, &at("thermal.cool_rating"), "must be >= 0");
        c.require(th.cool_eff >= 0.0, &at("thermal.cool_eff"), "must be >= 0");
    }

    c.require(
        bundle.profiles.pv_gen.len() == com.households.len(),
        "profiles.pv_gen",
        "one series per household required",
    );
    c.require(
        bundle.profiles.drive_power.len() == com.households.len(),
        "profiles.drive_power",
        "one series per household required",
    );

    let s = &bundle.scenario;
    c.require(
        !s.afrr || s.job_pausing,
        "scenario.afrr",
        "requires job_pausing (reserves are earned by pausing jobs)",
    );

    c.findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::{
        CommunitySpec, DataCentreSpec, EvSpec, ExogenousProfiles, HouseholdSpec, ScenarioConfig,
        ThermalSpec, TimeGrid,
    };

    pub(crate) fn tiny_bundle(periods: usize) -> CaseBundle {
        let grid = TimeGrid {
            step_hours: 1.0,
            period_count: periods,
            start_index: 0,
        };
        let flat = |v: f64| vec![v; periods];
        let household = HouseholdSpec {
            baseline_load: flat(1.0),
            load_lower: flat(0.5),
            load_upper: flat(2.0),
            ev: EvSpec {
                charger_rating: 3.0,
                eff_charge: 0.95,
                eff_discharge: 0.95,
                soc_min: 1.0,
                soc_max: 10.0,
                soc_initial: 5.0,
                arrival: 0,
                departure: periods.min(24) - 1,
            },
            thermal: ThermalSpec {
                resistance: 8.0,
                capacitance: 3.0,
                temp_min: 19.0,
                temp_max: 24.0,
                temp_initial: 21.5,
                heat_rating: 5.0,
                cool_rating: 2.0,
                cool_eff: 3.0,
            },
        };
        CaseBundle {
            grid,
            community: CommunitySpec {
                households: vec![household],
                battery_rating: 5.0,
                battery_eff_charge: 0.95,
                battery_eff_discharge: 0.95,
                battery_soc_min: 1.0,
                battery_soc_max: 20.0,
                battery_soc_initial: 10.0,
            },
            data_centre: DataCentreSpec {
                rating: 100.0,
                resume_overhead: 1.1,
                heat_slope: 0.9,
                heat_floor: 2.0,
                exchanger_eff: 0.5,
                upgrade_eff: 1.0,
                max_delay: 0.5,
                big_m: 1e4,
            },
            profiles: ExogenousProfiles {
                day_ahead_price: flat(0.1),
                ppa_price: flat(0.05),
                afrr_price: flat(0.08),
                workload: flat(50.0),
                mean_job_duration: flat(4.0),
                outdoor_temp: flat(10.0),
                wind_gen: flat(5.0),
                pv_gen: vec![flat(0.5)],
                drive_power: vec![flat(0.0)],
            },
            scenario: ScenarioConfig::FULL,
        }
    }

    #[test]
    fn consistent_bundle_has_no_findings() {
        assert!(validate_case(&tiny_bundle(4)).is_empty());
    }

    #[test]
    fn resume_overhead_below_one_is_reported() {
        let mut b = tiny_bundle(4);
        b.data_centre.resume_overhead = 0.9;
        let findings = validate_case(&b);
        assert!(findings
            .iter()
            .any(|f| f.path == "data_centre.resume_overhead" && f.message.contains("exceed 1")));
    }

    #[test]
    fn zero_duration_with_workload_is_reported() {
        let mut b = tiny_bundle(8);
        b.profiles.mean_job_duration[5] = 0.0;
        assert!(b.profiles.workload[5] > 0.0);
        let findings = validate_case(&b);
        assert!(findings
            .iter()
            .any(|f| f.path == "profiles.mean_job_duration"));
    }

    #[test]
    fn out_of_range_ev_window_is_reported() {
        let mut b = tiny_bundle(8);
        b.community.households[0].ev.arrival = 8;
        let findings = validate_case(&b);
        assert!(findings.iter().any(|f| f.path.ends_with("ev.arrival")));
    }

    #[test]
    fn afrr_without_pausing_is_reported() {
        let mut b = tiny_bundle(4);
        b.scenario.job_pausing = false;
        b.scenario.thermal_coupling = true;
        let findings = validate_case(&b);
        assert!(findings.iter().any(|f| f.path == "scenario.afrr"));
    }

    #[test]
    fn validation_is_pure() {
        let mut b = tiny_bundle(4);
        b.data_centre.big_m = 1.0;
        assert_eq!(validate_case(&b), validate_case(&b));
    }
}
