//! Case definition: the time grid, static asset parameters and every
//! exogenous time series, as loaded from a case directory.
//!
//! All quantities use a fixed unit system: kW for power, kWh for energy,
//! °C for temperature, €/kWh for prices and hours for durations. There is no
//! unit inference anywhere.

mod io;
mod validate;

pub use io::{load_case, load_case_unchecked, save_case, CaseError};
pub use validate::{validate_case, Finding};

/// Discretised optimisation horizon.
///
/// `start_index` selects where the horizon begins inside the (possibly
/// longer) series files, so the same case directory can carry a year of data
/// while individual manifests solve a single day of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    /// Period length in hours.
    pub step_hours: f64,
    /// Number of periods in the horizon.
    pub period_count: usize,
    /// Offset of the first period inside the source series.
    pub start_index: usize,
}

impl TimeGrid {
    /// Periods per calendar day, at least 1.
    pub fn periods_per_day(&self) -> usize {
        ((24.0 / self.step_hours).round() as usize).max(1)
    }

    /// Hour-of-day slot of period `t`, in `0..periods_per_day()`.
    pub fn day_slot(&self, t: usize) -> usize {
        (self.start_index + t) % self.periods_per_day()
    }
}

/// All per-period input series, already sliced to the grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExogenousProfiles {
    /// Retailer purchase price, €/kWh. May be negative.
    pub day_ahead_price: Vec<f64>,
    /// Export remuneration, €/kWh. May be negative.
    pub ppa_price: Vec<f64>,
    /// Upward-reserve price paid on paused data-centre power, €/kWh.
    pub afrr_price: Vec<f64>,
    /// Data-centre job workload, kW.
    pub workload: Vec<f64>,
    /// Mean duration of the jobs running at each period, in periods.
    pub mean_job_duration: Vec<f64>,
    /// Outdoor temperature, °C.
    pub outdoor_temp: Vec<f64>,
    /// Shared wind generation available, kW.
    pub wind_gen: Vec<f64>,
    /// Per-household PV injection, kW (outer index = household).
    pub pv_gen: Vec<Vec<f64>>,
    /// Per-household EV driving power, kW (outer index = household).
    pub drive_power: Vec<Vec<f64>>,
}

/// Electric vehicle attached to one household.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvSpec {
    /// Charger rating, kW.
    pub charger_rating: f64,
    /// Charging efficiency in (0, 1].
    pub eff_charge: f64,
    /// Discharging efficiency in (0, 1].
    pub eff_discharge: f64,
    /// State-of-charge band, kWh.
    pub soc_min: f64,
    pub soc_max: f64,
    /// State of charge entering the horizon, kWh.
    pub soc_initial: f64,
    /// Day slot at which the EV plugs in (see [`connected`](Self::connected)).
    pub arrival: usize,
    /// Day slot at which it unplugs.
    pub departure: usize,
}

impl EvSpec {
    /// Whether the EV is plugged in during period `t`.
    ///
    /// `arrival`/`departure` are hour-of-day slots; the window repeats every
    /// day and wraps across midnight when `departure < arrival` (the typical
    /// arrive-evening / leave-morning pattern).
    pub fn connected(&self, grid: &TimeGrid, t: usize) -> bool {
        let slot = grid.day_slot(t);
        if self.arrival <= self.departure {
            self.arrival <= slot && slot <= self.departure
        } else {
            slot >= self.arrival || slot <= self.departure
        }
    }
}

/// First-order thermal envelope plus heating/cooling equipment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    /// Thermal resistance, °C/kW.
    pub resistance: f64,
    /// Thermal capacitance, kWh/°C.
    pub capacitance: f64,
    /// Comfort band, °C.
    pub temp_min: f64,
    pub temp_max: f64,
    /// Indoor temperature entering the horizon, °C.
    pub temp_initial: f64,
    /// Maximum heat delivery from the shared system, thermal kW.
    pub heat_rating: f64,
    /// Maximum cooling drive power, electric kW.
    pub cool_rating: f64,
    /// Thermal kW removed per electric kW of cooling.
    pub cool_eff: f64,
}

/// One household: its flexible load band, EV and thermal envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct HouseholdSpec {
    /// Scheduled baseline consumption, kW per period.
    pub baseline_load: Vec<f64>,
    /// Elementwise band around the baseline, kW per period.
    pub load_lower: Vec<f64>,
    pub load_upper: Vec<f64>,
    pub ev: EvSpec,
    pub thermal: ThermalSpec,
}

/// The community's shared assets.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunitySpec {
    pub households: Vec<HouseholdSpec>,
    /// Shared battery converter rating, kW.
    pub battery_rating: f64,
    pub battery_eff_charge: f64,
    pub battery_eff_discharge: f64,
    /// Battery state-of-charge band and starting point, kWh.
    pub battery_soc_min: f64,
    pub battery_soc_max: f64,
    pub battery_soc_initial: f64,
}

/// Data centre and its heat-recovery train.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataCentreSpec {
    /// Connection rating, kW.
    pub rating: f64,
    /// Energy overhead factor applied to resumed power, > 1.
    pub resume_overhead: f64,
    /// Thermal kW produced per electric kW consumed.
    pub heat_slope: f64,
    /// Heat produced at zero demand, thermal kW.
    pub heat_floor: f64,
    /// Heat-exchanger efficiency in (0, 1].
    pub exchanger_eff: f64,
    /// Thermal kW delivered per electric kW of supplemental HVAC input.
    pub upgrade_eff: f64,
    /// Maximum normalised job delay allowed.
    pub max_delay: f64,
    /// Big-M constant for the delay reformulation.
    pub big_m: f64,
}

/// Scenario toggles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScenarioConfig {
    /// Route data-centre waste heat into the household heat balance.
    pub thermal_coupling: bool,
    /// Allow the data centre to pause and resume jobs.
    pub job_pausing: bool,
    /// Earn reserve revenue on paused power (requires `job_pausing`).
    pub afrr: bool,
}

impl ScenarioConfig {
    pub const NO_COUPLING: ScenarioConfig = ScenarioConfig {
        thermal_coupling: false,
        job_pausing: false,
        afrr: false,
    };
    pub const THERMAL: ScenarioConfig = ScenarioConfig {
        thermal_coupling: true,
        job_pausing: false,
        afrr: false,
    };
    pub const THERMAL_PAUSING: ScenarioConfig = ScenarioConfig {
        thermal_coupling: true,
        job_pausing: true,
        afrr: false,
    };
    pub const FULL: ScenarioConfig = ScenarioConfig {
        thermal_coupling: true,
        job_pausing: true,
        afrr: true,
    };

    /// `nc`, `tc`, `tc-jp` or `tc-jp-afrr`.
    pub fn label(&self) -> &'static str {
        match (self.thermal_coupling, self.job_pausing, self.afrr) {
            (false, false, false) => "nc",
            (true, false, false) => "tc",
            (true, true, false) => "tc-jp",
            (true, true, true) => "tc-jp-afrr",
            _ => "custom",
        }
    }

    pub fn parse(label: &str) -> Option<ScenarioConfig> {
        match label {
            "nc" => Some(Self::NO_COUPLING),
            "tc" => Some(Self::THERMAL),
            "tc-jp" => Some(Self::THERMAL_PAUSING),
            "tc-jp-afrr" => Some(Self::FULL),
            _ => None,
        }
    }
}

/// A fully loaded case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseBundle {
    pub grid: TimeGrid,
    pub community: CommunitySpec,
    pub data_centre: DataCentreSpec,
    pub profiles: ExogenousProfiles,
    pub scenario: ScenarioConfig,
}

impl CaseBundle {
    pub fn household_count(&self) -> usize {
        self.community.households.len()
    }

    pub fn period_count(&self) -> usize {
        self.grid.period_count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid24() -> TimeGrid {
        TimeGrid {
            step_hours: 1.0,
            period_count: 48,
            start_index: 0,
        }
    }

    #[test]
    fn ev_window_wraps_midnight() {
        let ev = EvSpec {
            charger_rating: 7.0,
            eff_charge: 0.95,
            eff_discharge: 0.95,
            soc_min: 5.0,
            soc_max: 50.0,
            soc_initial: 25.0,
            arrival: 18,
            departure: 7,
        };
        let grid = grid24();
        assert!(ev.connected(&grid, 0)); // midnight
        assert!(ev.connected(&grid, 7));
        assert!(!ev.connected(&grid, 8));
        assert!(!ev.connected(&grid, 17));
        assert!(ev.connected(&grid, 18));
        assert!(ev.connected(&grid, 23));
        // second day repeats the pattern
        assert!(ev.connected(&grid, 24 + 3));
        assert!(!ev.connected(&grid, 24 + 12));
    }

    #[test]
    fn ev_window_plain_interval() {
        let ev = EvSpec {
            charger_rating: 7.0,
            eff_charge: 1.0,
            eff_discharge: 1.0,
            soc_min: 0.0,
            soc_max: 10.0,
            soc_initial: 5.0,
            arrival: 2,
            departure: 5,
        };
        let grid = TimeGrid {
            step_hours: 1.0,
            period_count: 8,
            start_index: 0,
        };
        let connected: Vec<bool> = (0..8).map(|t| ev.connected(&grid, t)).collect();
        assert_eq!(
            connected,
            vec![false, false, true, true, true, true, false, false]
        );
    }

    #[test]
    fn day_slot_respects_start_index() {
        let grid = TimeGrid {
            step_hours: 1.0,
            period_count: 24,
            start_index: 30,
        };
        assert_eq!(grid.day_slot(0), 6);
        assert_eq!(grid.day_slot(18), 0);
    }
}
