//! Serialized forms of command results.

use fbl_bounds::sim::TrialSummary;
use fbl_bounds::{DistanceBounds, OperatingPoint, Probability, SystemConfig};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct BoundRow {
    pub axis_value: Option<f64>,
    #[serde(rename = "M")]
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub epsilon: f64,
    pub sigma2: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub dmin_min: u64,
    pub dmin_max: u64,
    pub log10_pcon_lb: f64,
    pub log10_pcon_ub: f64,
    pub pers_lb: f64,
    pub pers_ub: f64,
    pub feasible: bool,
}

impl BoundRow {
    pub fn new(axis_value: Option<f64>, op: &OperatingPoint) -> Self {
        let c = &op.config;
        BoundRow {
            axis_value,
            m: c.m,
            n: c.n,
            k: c.k,
            epsilon: c.epsilon,
            sigma2: c.sigma2,
            energy: op.total_energy,
            radius: op.radius,
            dmin_min: op.distance.dmin_min,
            dmin_max: op.distance.dmin_max,
            log10_pcon_lb: op.rates.pcon_lb.log10_value(),
            log10_pcon_ub: op.rates.pcon_ub.log10_value(),
            pers_lb: op.rates.pers_lb.value(),
            pers_ub: op.rates.pers_ub.value(),
            feasible: op.rates.feasible,
        }
    }
}

/// A probability shown both linearly and as a base-10 log.
#[derive(Debug, Serialize)]
pub struct ProbabilityView {
    pub value: f64,
    pub log10: f64,
}

impl From<Probability> for ProbabilityView {
    fn from(p: Probability) -> Self {
        ProbabilityView {
            value: p.value(),
            log10: p.log10_value(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RatesView {
    pub epsilon: f64,
    pub pcon_lb: ProbabilityView,
    pub pcon_ub: ProbabilityView,
    pub pers_lb: ProbabilityView,
    pub pers_ub: ProbabilityView,
    /// False when the lower confusion bound exceeds the upper one.
    pub bounds_ordered: bool,
}

#[derive(Debug, Serialize)]
pub struct ComputeReport {
    pub config: SystemConfig,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "Es")]
    pub symbol_energy: f64,
    pub ebn0_db: f64,
    pub delta2: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub distance: DistanceBounds,
    pub rates: RatesView,
    pub feasible: bool,
}

impl ComputeReport {
    pub fn new(op: &OperatingPoint) -> Self {
        let r = &op.rates;
        ComputeReport {
            config: op.config,
            energy: op.total_energy,
            symbol_energy: op.config.symbol_energy(),
            ebn0_db: op.config.ebn0_db(),
            delta2: op.distance.delta2,
            radius: op.radius,
            distance: op.distance,
            rates: RatesView {
                epsilon: r.epsilon.value(),
                pcon_lb: r.pcon_lb.into(),
                pcon_ub: r.pcon_ub.into(),
                pers_lb: r.pers_lb.into(),
                pers_ub: r.pers_ub.into(),
                bounds_ordered: r.ordered(),
            },
            feasible: r.feasible,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CodebookInfo {
    pub constellation: fbl_bounds::Constellation,
    pub words: usize,
    pub real_dimension: usize,
    #[serde(rename = "Es")]
    pub symbol_energy: f64,
    pub requested_min_distance: u32,
    pub min_hamming_distance: u32,
    pub seed: u64,
}

/// Empirical rates set against the analytic bounds.
#[derive(Debug, Serialize)]
pub struct SimulationChecks {
    pub error_ci_contains_epsilon: bool,
    pub confusion_within_upper_bound: bool,
    /// Informational: random codebooks need not follow the neighbour-count
    /// estimate, so this is reported rather than required.
    pub confusion_at_least_lower_bound: bool,
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub codebook: CodebookInfo,
    /// Decision radius used by the simulated decoder.
    #[serde(rename = "R")]
    pub radius: f64,
    pub summary: TrialSummary,
    pub bounds: ComputeReport,
    pub checks: SimulationChecks,
}

#[derive(Debug, Serialize)]
pub struct SimulateRow {
    pub trials: u64,
    pub seed: u64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub n_correct: u64,
    pub n_confusion: u64,
    pub n_erasure: u64,
    pub n_overlap_events: u64,
    pub error_rate: f64,
    pub error_lo: f64,
    pub error_hi: f64,
    pub confusion_rate: f64,
    pub confusion_lo: f64,
    pub confusion_hi: f64,
    pub erasure_rate: f64,
    pub erasure_lo: f64,
    pub erasure_hi: f64,
    pub log10_pcon_lb: f64,
    pub log10_pcon_ub: f64,
    pub error_ci_contains_epsilon: bool,
    pub confusion_within_upper_bound: bool,
}

impl SimulateRow {
    pub fn new(report: &SimulateReport) -> Self {
        let s = &report.summary;
        SimulateRow {
            trials: s.trials,
            seed: s.seed,
            radius: report.radius,
            n_correct: s.n_correct,
            n_confusion: s.n_confusion,
            n_erasure: s.n_erasure,
            n_overlap_events: s.n_overlap_events,
            error_rate: s.error.rate,
            error_lo: s.error.lower,
            error_hi: s.error.upper,
            confusion_rate: s.confusion.rate,
            confusion_lo: s.confusion.lower,
            confusion_hi: s.confusion.upper,
            erasure_rate: s.erasure.rate,
            erasure_lo: s.erasure.lower,
            erasure_hi: s.erasure.upper,
            log10_pcon_lb: report.bounds.rates.pcon_lb.log10,
            log10_pcon_ub: report.bounds.rates.pcon_ub.log10,
            error_ci_contains_epsilon: report.checks.error_ci_contains_epsilon,
            confusion_within_upper_bound: report.checks.confusion_within_upper_bound,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<fbl_bounds::verify::SuiteReport>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use fbl_bounds::bounds::evaluate;
    use fbl_bounds::EnergySpec;

    const CSV_COLUMNS: [&str; 15] = [
        "axis_value",
        "M",
        "n",
        "k",
        "epsilon",
        "sigma2",
        "E",
        "R",
        "dmin_min",
        "dmin_max",
        "log10_pcon_lb",
        "log10_pcon_ub",
        "pers_lb",
        "pers_ub",
        "feasible",
    ];

    #[test]
    fn bound_row_header_order() {
        let cfg = SystemConfig::new(2, 32, 16, 0.05, 0.5, EnergySpec::EbN0Db(0.0)).unwrap();
        let op = evaluate(&cfg).unwrap();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(BoundRow::new(Some(32.0), &op)).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header, CSV_COLUMNS.join(","));
    }
}
