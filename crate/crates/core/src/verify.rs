//! Property suites for the monotonicity and extremum results, evaluated on
//! fixed default grids. Every grid point becomes one [`Check`], so a report
//! shows exactly where a property holds and where it breaks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{decision_radius, evaluate, p_pair, OperatingPoint};
use crate::distance::{
    dmin_lower, dmin_upper, lambda_bound, lambda_bound_asymptotic, lambda_threshold_k, EnergySpec,
    SystemConfig,
};
use crate::error::{Error, Result};
use crate::sim::{gen_codebook, radius_sweep, Constellation};

/// Relative offset used for the left limit `E_i⁻`.
pub const LEFT_LIMIT: f64 = 1e-12;
/// Relative tolerance for equal local maxima.
pub const EQUAL_MAXIMA_TOL: f64 = 1e-9;
/// Finite differences smaller than this fraction of the value carry no sign.
pub const SIGN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma2,
    Lemma3,
    Lemma4,
    Lemma5,
    Thm1,
    Thm4,
    Thm5,
    Thm6,
    Thm7,
    Cor1,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Lemma4,
        Suite::Lemma5,
        Suite::Thm1,
        Suite::Thm4,
        Suite::Thm5,
        Suite::Thm6,
        Suite::Thm7,
        Suite::Cor1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::Lemma5 => "lemma5",
            Suite::Thm1 => "thm1",
            Suite::Thm4 => "thm4",
            Suite::Thm5 => "thm5",
            Suite::Thm6 => "thm6",
            Suite::Thm7 => "thm7",
            Suite::Cor1 => "cor1",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Lemma2 => "pairwise confusion probability is decreasing and convex in D for D >= 2R",
            Suite::Lemma3 => "largest achievable minimum distance is nondecreasing in n",
            Suite::Lemma4 => "largest achievable minimum distance is at most lambda*n",
            Suite::Lemma5 => "n-free lambda is below 1/M once k exceeds the threshold",
            Suite::Thm1 => "with common random numbers, error and erasure fall and confusion rises with R",
            Suite::Thm4 => "confusion lower bound is decreasing and convex in E",
            Suite::Thm5 => "confusion lower bound decreases in n while the largest distance is constant",
            Suite::Thm6 => "confusion upper bound jumps at E_i = 4R^2/i and decreases between jumps",
            Suite::Thm7 => "confusion upper bound decreases in n while the smallest distance is constant",
            Suite::Cor1 => "upper-bound maxima at E_i are equal; minima at E_i- decrease as E grows",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite `{s}`")))
    }
}

/// One grid point of a suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub values: BTreeMap<String, f64>,
    pub passed: bool,
}

impl Check {
    fn new(label: impl Into<String>, passed: bool, values: &[(&str, f64)]) -> Self {
        Check {
            label: label.into(),
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub description: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        SuiteReport {
            suite,
            description: suite.description().to_string(),
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Lemma2 => lemma2()?,
        Suite::Lemma3 => lemma3()?,
        Suite::Lemma4 => lemma4()?,
        Suite::Lemma5 => lemma5(),
        Suite::Thm1 => thm1()?,
        Suite::Thm4 => thm4()?,
        Suite::Thm5 => blocklength_suite(Distance::Largest)?,
        Suite::Thm6 => thm6()?,
        Suite::Thm7 => blocklength_suite(Distance::Smallest)?,
        Suite::Cor1 => cor1()?,
    };
    Ok(SuiteReport::new(suite, checks))
}

pub fn run_all() -> Result<Vec<SuiteReport>> {
    Suite::ALL.into_iter().map(run_suite).collect()
}

fn reference_config(n: u32, k: u32, energy: EnergySpec) -> Result<SystemConfig> {
    SystemConfig::new(2, n, k, 0.05, 0.5, energy)
}

fn lemma2() -> Result<Vec<Check>> {
    let points: Vec<(u32, f64, f64)> = [4u32, 16, 64]
        .into_iter()
        .flat_map(|n| {
            let r = decision_radius(n, 1.0, 0.05).expect("valid radius arguments");
            (0..=20).map(move |j| (n, r, 2.0 * r * (1.0 + 0.1 * j as f64)))
        })
        .collect();
    points
        .into_par_iter()
        .map(|(n, r, d)| {
            let h = 1e-3 * d;
            let ln = |x: f64| p_pair(n, 1.0, r, x).map(|p| p.probability.log_value());
            let (lo, mid, hi) = (ln(d - h)?, ln(d)?, ln(d + h)?);
            let (a, b) = (hi - mid, lo - mid);
            // f(D±h)/f(D) - 1, so both differences are taken relative to f(D).
            let first = a.exp_m1() - b.exp_m1();
            let second = a.exp_m1() + b.exp_m1();
            let decreasing = first < 0.0 || first.abs() <= SIGN_FLOOR;
            let convex = second > 0.0 || second.abs() <= SIGN_FLOOR;
            Ok(Check::new(
                format!("n={n} D/R={:.2}", d / r),
                decreasing && convex,
                &[
                    ("n", n as f64),
                    ("R", r),
                    ("D", d),
                    ("log_p_pair", mid),
                    ("first_difference_rel", first),
                    ("second_difference_rel", second),
                ],
            ))
        })
        .collect()
}

fn lemma3() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for k in [8u32, 16] {
        for n in k..k + 200 {
            let (a, b) = (dmin_upper(2, n, k)?, dmin_upper(2, n + 1, k)?);
            checks.push(Check::new(
                format!("M=2 k={k} n={n}"),
                b >= a,
                &[("k", k as f64), ("n", n as f64), ("dmin_max", a as f64), ("dmin_max_next", b as f64)],
            ));
        }
    }
    Ok(checks)
}

fn lemma4() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for k in [8u32, 16] {
        let top = (k + 200).min((1u32 << k) - 1);
        for n in k..=top {
            let d = dmin_upper(2, n, k)? as f64;
            let lambda = lambda_bound(2, k, n);
            let cap = 1.0 + 1.0 / n as f64;
            checks.push(Check::new(
                format!("M=2 k={k} n={n}"),
                d <= lambda * n as f64 && lambda < cap,
                &[("k", k as f64), ("n", n as f64), ("dmin_max", d), ("lambda", lambda), ("lambda_cap", cap)],
            ));
        }
    }
    Ok(checks)
}

fn lemma5() -> Vec<Check> {
    let mut checks = Vec::new();
    for m in [2u32, 4, 8] {
        let threshold = lambda_threshold_k(m);
        for k in 1..=64u32 {
            if (k as f64) <= threshold {
                continue;
            }
            let lambda = lambda_bound_asymptotic(m, k);
            checks.push(Check::new(
                format!("M={m} k={k}"),
                lambda < 1.0 / m as f64,
                &[("M", m as f64), ("k", k as f64), ("lambda", lambda), ("k_threshold", threshold)],
            ));
        }
    }
    checks
}

/// Default codebook and seed for the common-random-number radius sweep.
pub const THM1_TRIALS: u64 = 100_000;
pub const THM1_SEED: u64 = 20_240_917;

fn thm1() -> Result<Vec<Check>> {
    let (n, k, sigma2) = (16u32, 8u32, 0.5);
    let sigma = f64::sqrt(sigma2);
    let cfg = SystemConfig::new(2, n, k, 0.05, sigma2, EnergySpec::EbN0Db(3.0))?;
    let cb = gen_codebook(2, n, k, Constellation::Antipodal, cfg.symbol_energy(), 1, THM1_SEED)?;
    let epsilons = [0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001];
    let radii: Vec<f64> = epsilons
        .iter()
        .map(|&e| decision_radius(cb.dim() as u32, sigma, e))
        .collect::<Result<_>>()?;
    let sweep = radius_sweep(&cb, sigma, &radii, THM1_TRIALS, THM1_SEED)?;
    Ok(sweep
        .windows(2)
        .zip(radii.windows(2))
        .map(|(s, r)| {
            let (a, b) = (&s[0], &s[1]);
            let errors = |t: &crate::sim::TrialSummary| t.n_confusion + t.n_erasure;
            Check::new(
                format!("R {:.4} -> {:.4}", r[0], r[1]),
                errors(b) <= errors(a) && b.n_erasure <= a.n_erasure && b.n_confusion >= a.n_confusion,
                &[
                    ("R", r[0]),
                    ("R_next", r[1]),
                    ("errors", errors(a) as f64),
                    ("errors_next", errors(b) as f64),
                    ("erasures", a.n_erasure as f64),
                    ("erasures_next", b.n_erasure as f64),
                    ("confusions", a.n_confusion as f64),
                    ("confusions_next", b.n_confusion as f64),
                ],
            )
        })
        .collect())
}

/// `b/a − 1` from two log values.
fn rel_change(ln_a: f64, ln_b: f64) -> f64 {
    (ln_b - ln_a).exp_m1()
}

fn thm4() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (n, k) in [(32u32, 16u32), (62, 32)] {
        let grid: Vec<f64> = (0..=30).map(|j| -3.0 + 0.5 * j as f64).collect();
        let points: Vec<OperatingPoint> = grid
            .par_iter()
            .map(|&db| evaluate(&reference_config(n, k, EnergySpec::EbN0Db(db))?))
            .collect::<Result<_>>()?;
        for w in points.windows(3) {
            let (e0, e1, e2) = (w[0].total_energy, w[1].total_energy, w[2].total_energy);
            let (l0, l1, l2) = (
                w[0].rates.pcon_lb.log_value(),
                w[1].rates.pcon_lb.log_value(),
                w[2].rates.pcon_lb.log_value(),
            );
            // Values scaled by f(E1); convex iff the chord slopes increase.
            let s_left = (1.0 - (l0 - l1).exp()) / (e1 - e0);
            let s_right = ((l2 - l1).exp() - 1.0) / (e2 - e1);
            let decreasing = l2 < l1 && l1 < l0;
            let convex = s_right > s_left;
            checks.push(Check::new(
                format!("({n},{k}) E={e1:.4}"),
                decreasing && convex,
                &[
                    ("n", n as f64),
                    ("k", k as f64),
                    ("E", e1),
                    ("log10_pcon_lb", w[1].rates.pcon_lb.log10_value()),
                    ("rel_change_next", rel_change(l1, l2)),
                    ("chord_slope_left_rel", s_left),
                    ("chord_slope_right_rel", s_right),
                ],
            ));
        }
    }
    Ok(checks)
}

#[derive(Clone, Copy)]
enum Distance {
    Largest,
    Smallest,
}

/// Points of the blocklength sweeps: M = 2, ε = 0.05, σ² = 0.5,
/// Eb/N0 = 0 dB, k ∈ {16, 32}, n from k + 1 to 128.
pub fn blocklength_sweep(k: u32) -> Result<Vec<OperatingPoint>> {
    ((k + 1)..=128)
        .into_par_iter()
        .map(|n| evaluate(&reference_config(n, k, EnergySpec::EbN0Db(0.0))?))
        .collect()
}

fn blocklength_suite(which: Distance) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for k in [16u32, 32] {
        let sweep = blocklength_sweep(k)?;
        let pairs: Vec<(&OperatingPoint, &OperatingPoint)> = sweep
            .windows(2)
            .map(|w| (&w[0], &w[1]))
            .filter(|(a, b)| match which {
                Distance::Largest => a.distance.dmin_max == b.distance.dmin_max,
                Distance::Smallest => a.distance.dmin_min == b.distance.dmin_min,
            })
            .collect();
        let rows: Vec<Check> = pairs
            .into_par_iter()
            .map(|(a, b)| blocklength_check(which, a, b))
            .collect::<Result<_>>()?;
        checks.extend(rows);
    }
    Ok(checks)
}

fn blocklength_check(which: Distance, a: &OperatingPoint, b: &OperatingPoint) -> Result<Check> {
    let (n, k) = (a.config.n, a.config.k);
    let sigma = a.config.sigma();
    let (d, euclid, bound_a, bound_b) = match which {
        Distance::Largest => (a.distance.dmin_max, a.distance.euclid_max, a.rates.pcon_lb, b.rates.pcon_lb),
        Distance::Smallest => (a.distance.dmin_min, a.distance.euclid_min, a.rates.pcon_ub, b.rates.pcon_ub),
    };
    let pair_now = p_pair(n, sigma, a.radius, euclid)?.probability.log_value();
    let pair_next = p_pair(n + 1, sigma, b.radius, euclid)?.probability.log_value();
    // Same step with the radius held at its value for n, for comparison.
    let pair_next_fixed = p_pair(n + 1, sigma, a.radius, euclid)?.probability.log_value();
    let mut values = vec![
        ("k", k as f64),
        ("n", n as f64),
        ("distance", d as f64),
        ("log10_bound", bound_a.log10_value()),
        ("log10_bound_next", bound_b.log10_value()),
        ("pair_ratio", (pair_next - pair_now).exp()),
        ("pair_ratio_fixed_radius", (pair_next_fixed - pair_now).exp()),
        ("feasible", f64::from(u8::from(a.distance.feasible && b.distance.feasible))),
    ];
    if let Distance::Largest = which {
        let count_ratio = (n as f64 + 1.0) / ((n as f64 + 1.0 - d as f64) * a.config.m as f64);
        values.push(("count_ratio", count_ratio));
    }
    let label = match which {
        Distance::Largest => format!("k={k} n={n} dmin_max={d}"),
        Distance::Smallest => format!("k={k} n={n} dmin_min={d}"),
    };
    Ok(Check::new(label, bound_b.log_value() < bound_a.log_value(), &values))
}

/// Upper bound and smallest distance at total energy `e` for the (32, 16)
/// code of the energy suites.
fn ub_at(e: f64) -> Result<(f64, u64)> {
    let cfg = reference_config(32, 16, EnergySpec::Total(e))?;
    let op = evaluate(&cfg)?;
    Ok((op.rates.pcon_ub.log_value(), op.distance.dmin_min))
}

/// `4R²/δ²` for the (32, 16) energy suites, i.e. `E_1`.
fn first_jump() -> Result<f64> {
    let cfg = reference_config(32, 16, EnergySpec::Total(1.0))?;
    let r = cfg.radius()?;
    Ok(4.0 * r * r)
}

fn thm6() -> Result<Vec<Check>> {
    let e1 = first_jump()?;
    let jumps: Vec<Check> = (1..=12u64)
        .into_par_iter()
        .map(|i| {
            let ei = e1 / i as f64;
            let at = dmin_lower(&reference_config(32, 16, EnergySpec::Total(ei))?)?;
            let left = dmin_lower(&reference_config(32, 16, EnergySpec::Total(ei * (1.0 - LEFT_LIMIT)))?)?;
            Ok(Check::new(
                format!("jump at E_{i}"),
                at == i && left == i + 1,
                &[("i", i as f64), ("E_i", ei), ("dmin_at", at as f64), ("dmin_left", left as f64)],
            ))
        })
        .collect::<Result<_>>()?;
    let decreasing: Vec<Check> = (1..=12u64)
        .into_par_iter()
        .map(|i| {
            let lo = e1 / i as f64;
            let hi = if i == 1 { 4.0 * e1 } else { e1 / (i - 1) as f64 } * (1.0 - 1e-9);
            let grid: Vec<f64> = (0..=20).map(|j| lo * (hi / lo).powf(j as f64 / 20.0)).collect();
            let values: Vec<(f64, u64)> = grid.iter().map(|&e| ub_at(e)).collect::<Result<_>>()?;
            let constant = values.iter().all(|v| v.1 == i);
            let strictly = values.windows(2).all(|w| w[1].0 < w[0].0);
            let first = values[0].0 / std::f64::consts::LN_10;
            let last = values[values.len() - 1].0 / std::f64::consts::LN_10;
            Ok(Check::new(
                format!("interval dmin_min={i}"),
                constant && strictly,
                &[
                    ("i", i as f64),
                    ("E_low", lo),
                    ("E_high", hi),
                    ("log10_ub_low", first),
                    ("log10_ub_high", last),
                ],
            ))
        })
        .collect::<Result<_>>()?;
    Ok(jumps.into_iter().chain(decreasing).collect())
}

fn cor1() -> Result<Vec<Check>> {
    let e1 = first_jump()?;
    let rows: Vec<(u64, f64, f64)> = (1..=12u64)
        .into_par_iter()
        .map(|i| {
            let ei = e1 / i as f64;
            Ok((i, ub_at(ei)?.0, ub_at(ei * (1.0 - LEFT_LIMIT))?.0))
        })
        .collect::<Result<_>>()?;
    let reference = rows[0].1;
    let mut checks = Vec::new();
    for &(i, max, min) in &rows {
        let spread = rel_change(reference, max).abs();
        checks.push(Check::new(
            format!("maximum at E_{i}"),
            spread <= EQUAL_MAXIMA_TOL && min < max,
            &[
                ("i", i as f64),
                ("log10_max", max / std::f64::consts::LN_10),
                ("log10_min_left", min / std::f64::consts::LN_10),
                ("rel_diff_to_first_max", spread),
            ],
        ));
    }
    // E_{i+1} < E_i: walking up in energy means walking down in i.
    for w in rows.windows(2) {
        let (lower_e, higher_e) = (&w[1], &w[0]);
        checks.push(Check::new(
            format!("minimum at E_{}- vs E_{}-", lower_e.0, higher_e.0),
            higher_e.2 < lower_e.2,
            &[
                ("i_lower_energy", lower_e.0 as f64),
                ("i_higher_energy", higher_e.0 as f64),
                ("log10_min_lower_energy", lower_e.2 / std::f64::consts::LN_10),
                ("log10_min_higher_energy", higher_e.2 / std::f64::consts::LN_10),
            ],
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("thm9".parse::<Suite>().is_err());
    }

    #[test]
    fn combinatorial_suites_pass() {
        for s in [Suite::Lemma3, Suite::Lemma4, Suite::Lemma5] {
            let report = run_suite(s).unwrap();
            assert!(report.passed, "{s}: {:?}", report.failures().next());
        }
    }
}
