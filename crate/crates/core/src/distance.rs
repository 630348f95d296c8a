//! System configuration and minimum-distance bounds.
//!
//! A no-list decoder needs every pair of codewords at least `2R` apart, which
//! gives the smallest admissible minimum Hamming distance `⌈4R²/δ²⌉`. The
//! Hamming (sphere-packing) bound caps the largest achievable one for an
//! `M^k`-word code of length `n`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bounds::decision_radius;
use crate::error::{Error, Result};
use crate::specfun::{ln_add_exp, ln_binomial_unchecked};

/// Blocklengths up to which Hamming volumes are summed in exact integers.
pub const EXACT_VOLUME_LIMIT: u32 = 512;
/// Relative band around `r·ln M` inside which a log-domain comparison is
/// re-done exactly.
const VOLUME_GUARD: f64 = 1e-12;
/// Relative slack when taking the ceiling of `4R²/δ²`, so that ratios which
/// are integers up to rounding are not pushed to the next integer.
const CEIL_GUARD: f64 = 1e-14;

/// How the transmit energy is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergySpec {
    /// Energy per symbol `E_s`; `E = n·E_s`.
    PerSymbol(f64),
    /// Total codeword energy `E`.
    Total(f64),
    /// `E_b/N_0` in dB with `N_0 = 2σ²` and `E_b = E/k`.
    EbN0Db(f64),
}

/// Squared Euclidean distance contributed by one differing symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceUnit {
    /// `δ² = E`, the Hamming-to-Euclidean map `D = √(E·d)`.
    #[default]
    TotalEnergy,
    /// Binary antipodal symbols `±√E_s`: `δ² = 4E_s`.
    Antipodal,
    /// Orthogonal symbols of energy `E_s`: `δ² = 2E_s`.
    Orthogonal,
}

impl std::str::FromStr for DistanceUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total-energy" | "total_energy" => Ok(DistanceUnit::TotalEnergy),
            "antipodal" => Ok(DistanceUnit::Antipodal),
            "orthogonal" => Ok(DistanceUnit::Orthogonal),
            other => Err(Error::InvalidConfig(format!("unknown distance unit `{other}`"))),
        }
    }
}

/// Parameters shared by every bound: alphabet size `M`, blocklength `n`,
/// payload length `k`, error budget `ε`, per-dimension noise variance `σ²`
/// and the energy specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub epsilon: f64,
    pub sigma2: f64,
    pub energy: EnergySpec,
    #[serde(default)]
    pub distance_unit: DistanceUnit,
}

impl SystemConfig {
    pub fn new(m: u32, n: u32, k: u32, epsilon: f64, sigma2: f64, energy: EnergySpec) -> Result<Self> {
        let cfg = SystemConfig {
            m,
            n,
            k,
            epsilon,
            sigma2,
            energy,
            distance_unit: DistanceUnit::TotalEnergy,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidConfig(format!("alphabet size M must be at least 2, got {}", self.m)));
        }
        if self.n < 1 {
            return Err(Error::InvalidConfig("blocklength n must be at least 1".into()));
        }
        if self.k < 1 || self.k > self.n {
            return Err(Error::InvalidConfig(format!(
                "payload length k must satisfy 1 <= k <= n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidConfig(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(Error::InvalidConfig(format!("sigma2 must be positive, got {}", self.sigma2)));
        }
        match self.energy {
            EnergySpec::PerSymbol(v) | EnergySpec::Total(v) if !(v > 0.0) || !v.is_finite() => {
                Err(Error::InvalidConfig(format!("energy must be positive, got {v}")))
            }
            EnergySpec::EbN0Db(db) if !db.is_finite() => {
                Err(Error::InvalidConfig(format!("Eb/N0 must be finite, got {db}")))
            }
            _ => Ok(()),
        }
    }

    pub fn with_distance_unit(mut self, unit: DistanceUnit) -> Self {
        self.distance_unit = unit;
        self
    }

    pub fn with_blocklength(mut self, n: u32) -> Self {
        self.n = n;
        self
    }

    pub fn with_energy(mut self, energy: EnergySpec) -> Self {
        self.energy = energy;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Total codeword energy `E`.
    pub fn total_energy(&self) -> f64 {
        match self.energy {
            EnergySpec::PerSymbol(es) => self.n as f64 * es,
            EnergySpec::Total(e) => e,
            EnergySpec::EbN0Db(db) => self.k as f64 * 10f64.powf(db / 10.0) * 2.0 * self.sigma2,
        }
    }

    pub fn symbol_energy(&self) -> f64 {
        self.total_energy() / self.n as f64
    }

    /// `E_b/N_0` in dB implied by the configured energy.
    pub fn ebn0_db(&self) -> f64 {
        10.0 * (self.total_energy() / (self.k as f64 * 2.0 * self.sigma2)).log10()
    }

    pub fn redundancy(&self) -> u32 {
        self.n - self.k
    }

    /// Squared Euclidean distance per differing symbol under the configured unit.
    pub fn delta2(&self) -> f64 {
        match self.distance_unit {
            DistanceUnit::TotalEnergy => self.total_energy(),
            DistanceUnit::Antipodal => 4.0 * self.symbol_energy(),
            DistanceUnit::Orthogonal => 2.0 * self.symbol_energy(),
        }
    }

    /// Decision radius `R(ε)` of this configuration.
    pub fn radius(&self) -> Result<f64> {
        decision_radius(self.n, self.sigma(), self.epsilon)
    }
}

/// Smallest admissible and largest achievable minimum Hamming distance,
/// with their Euclidean images `√(δ²·d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceBounds {
    pub dmin_min: u64,
    pub dmin_max: u64,
    pub euclid_min: f64,
    pub euclid_max: f64,
    pub delta2: f64,
    /// False when no `M^k`-word code can keep its decision spheres disjoint.
    pub feasible: bool,
}

fn check_volume_args(m: u32, n: u32, t: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::domain("hamming_volume", format!("M must be at least 2, got {m}")));
    }
    if t > n {
        return Err(Error::domain("hamming_volume", format!("t = {t} exceeds n = {n}")));
    }
    Ok(())
}

/// Exact Hamming ball volume `V_n(t) = Σ_{l≤t} C(n,l)(M−1)^l`.
pub fn hamming_volume_exact(m: u32, n: u32, t: u32) -> Result<BigUint> {
    check_volume_args(m, n, t)?;
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for l in 1..=t {
        // C(n,l)(M-1)^l from C(n,l-1)(M-1)^{l-1}; the division is exact.
        term = term * (n - l + 1) * (m - 1) / l;
        total += &term;
    }
    Ok(total)
}

fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = (v >> shift).to_u64().expect("shifted value fits in 64 bits") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_volume_term(m: u32, n: u32, l: u32) -> f64 {
    ln_binomial_unchecked(n as u64, l as u64) + l as f64 * ((m - 1) as f64).ln()
}

fn ln_volume_lse(m: u32, n: u32, t: u32) -> f64 {
    (0..=t).fold(f64::NEG_INFINITY, |acc, l| ln_add_exp(acc, ln_volume_term(m, n, l)))
}

/// `ln V_n(t)`: exact integer summation up to `n = 512`, log-sum-exp beyond.
pub fn hamming_volume_log(m: u32, n: u32, t: u32) -> Result<f64> {
    check_volume_args(m, n, t)?;
    if n <= EXACT_VOLUME_LIMIT {
        Ok(ln_biguint(&hamming_volume_exact(m, n, t)?))
    } else {
        Ok(ln_volume_lse(m, n, t))
    }
}

/// Largest achievable minimum Hamming distance of an `M^k`-word code of
/// length `n`: `2·min{t : V_n(t) > M^{n−k}}`.
pub fn dmin_upper(m: u32, n: u32, k: u32) -> Result<u64> {
    if m < 2 {
        return Err(Error::domain("dmin_upper", format!("M must be at least 2, got {m}")));
    }
    if k < 1 || k > n {
        return Err(Error::domain("dmin_upper", format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let r = n - k;
    if n <= EXACT_VOLUME_LIMIT {
        Ok(dmin_upper_exact(m, n, r))
    } else {
        Ok(dmin_upper_log(m, n, r))
    }
}

fn dmin_upper_exact(m: u32, n: u32, r: u32) -> u64 {
    let target = BigUint::from(m).pow(r);
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    if total > target {
        return 0;
    }
    for l in 1..=n {
        term = term * (n - l + 1) * (m - 1) / l;
        total += &term;
        if total > target {
            return 2 * l as u64;
        }
    }
    unreachable!("V_n(n) = M^n always exceeds M^(n-k) for k >= 1")
}

fn dmin_upper_log(m: u32, n: u32, r: u32) -> u64 {
    let ln_target = r as f64 * (m as f64).ln();
    let band = VOLUME_GUARD * ln_target.abs().max(1.0);
    let mut ln_v = f64::NEG_INFINITY;
    for t in 0..=n {
        ln_v = ln_add_exp(ln_v, ln_volume_term(m, n, t));
        let exceeds = if (ln_v - ln_target).abs() <= band {
            let v = hamming_volume_exact(m, n, t).expect("t <= n");
            v > BigUint::from(m).pow(r)
        } else {
            ln_v > ln_target
        };
        if exceeds {
            return 2 * t as u64;
        }
    }
    unreachable!("V_n(n) = M^n always exceeds M^(n-k) for k >= 1")
}

/// `⌈ratio⌉`, treating ratios within rounding of an integer as that integer,
/// and never below 1.
pub(crate) fn guarded_ceil(ratio: f64) -> u64 {
    let nearest = ratio.round();
    let d = if (ratio - nearest).abs() <= CEIL_GUARD * ratio.abs().max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    d.max(1.0) as u64
}

/// Smallest admissible minimum Hamming distance `⌈4R²(ε)/δ²⌉` (`δ² = E` in
/// the default distance unit).
pub fn dmin_lower(cfg: &SystemConfig) -> Result<u64> {
    cfg.validate()?;
    let r = cfg.radius()?;
    Ok(min_hamming_for_radius(r, cfg.delta2()))
}

/// Smallest Hamming distance `d` with `δ² d ≥ 4R²`, i.e. decision spheres
/// of radius `R` that do not overlap.
pub fn min_hamming_for_radius(radius: f64, delta2: f64) -> u64 {
    guarded_ceil(4.0 * radius * radius / delta2)
}

/// Euclidean distance `√(δ²·d)` of codewords at Hamming distance `d`.
pub fn euclid_from_hamming(d: u64, delta2: f64) -> f64 {
    (delta2 * d as f64).sqrt()
}

pub fn distance_bounds(cfg: &SystemConfig) -> Result<DistanceBounds> {
    let dmin_min = dmin_lower(cfg)?;
    let dmin_max = dmin_upper(cfg.m, cfg.n, cfg.k)?;
    let delta2 = cfg.delta2();
    Ok(DistanceBounds {
        dmin_min,
        dmin_max,
        euclid_min: euclid_from_hamming(dmin_min, delta2),
        euclid_max: euclid_from_hamming(dmin_max, delta2),
        delta2,
        feasible: dmin_min <= dmin_max,
    })
}

/// M-ary entropy `H_M(δ) = δ log_M(M−1) − δ log_M δ − (1−δ) log_M(1−δ)`.
pub fn entropy_m(m: u32, delta: f64) -> f64 {
    let ln_m = (m as f64).ln();
    let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    (delta * ((m - 1) as f64).ln() - xlogx(delta) - xlogx(1.0 - delta)) / ln_m
}

/// Inverse of `H_M` on its increasing branch `[0, (M−1)/M]`, by bisection.
/// Arguments outside `[0, 1]` are clamped.
pub fn entropy_m_inverse(m: u32, y: f64) -> f64 {
    let top = (m - 1) as f64 / m as f64;
    let y = y.clamp(0.0, 1.0);
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return top;
    }
    let (mut lo, mut hi) = (0.0, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if entropy_m(m, mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `λ` with `d_max(n) ≤ λ n`, for `k ≤ n ≤ M^k − 1`:
/// `2 H_M⁻¹(1 − (k − log_M(n+1))/n) + 1/n`.
pub fn lambda_bound(m: u32, k: u32, n: u32) -> f64 {
    let nf = n as f64;
    let log_m_n1 = (nf + 1.0).ln() / (m as f64).ln();
    let arg = 1.0 - (k as f64 - log_m_n1) / nf;
    2.0 * entropy_m_inverse(m, arg) + 1.0 / nf
}

/// The `n`-free variant `2 H_M⁻¹(1/(k+1))`, below `1/M` once `k` exceeds
/// [`lambda_threshold_k`].
pub fn lambda_bound_asymptotic(m: u32, k: u32) -> f64 {
    2.0 * entropy_m_inverse(m, 1.0 / (k as f64 + 1.0))
}

/// `2M / log_M(2M²) − 1`.
pub fn lambda_threshold_k(m: u32) -> f64 {
    let mf = m as f64;
    2.0 * mf / ((2.0 * mf * mf).ln() / mf.ln()) - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference_cfg(n: u32, k: u32) -> SystemConfig {
        SystemConfig::new(2, n, k, 0.05, 0.5, EnergySpec::EbN0Db(0.0)).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::new(1, 8, 4, 0.05, 0.5, EnergySpec::Total(1.0)).is_err());
        assert!(SystemConfig::new(2, 8, 9, 0.05, 0.5, EnergySpec::Total(1.0)).is_err());
        assert!(SystemConfig::new(2, 8, 0, 0.05, 0.5, EnergySpec::Total(1.0)).is_err());
        assert!(SystemConfig::new(2, 8, 4, 0.0, 0.5, EnergySpec::Total(1.0)).is_err());
        assert!(SystemConfig::new(2, 8, 4, 1.0, 0.5, EnergySpec::Total(1.0)).is_err());
        assert!(SystemConfig::new(2, 8, 4, 0.05, -0.5, EnergySpec::Total(1.0)).is_err());
        assert!(SystemConfig::new(2, 8, 4, 0.05, 0.5, EnergySpec::PerSymbol(0.0)).is_err());
        assert!(SystemConfig::new(2, 8, 4, 0.05, 0.5, EnergySpec::EbN0Db(f64::NAN)).is_err());
    }

    #[test]
    fn energy_mappings() {
        let cfg = reference_cfg(32, 16);
        assert_relative_eq!(cfg.total_energy(), 16.0, max_relative = 1e-15);
        assert_relative_eq!(cfg.ebn0_db(), 0.0, epsilon = 1e-12);
        let cfg = cfg.with_energy(EnergySpec::EbN0Db(10.0));
        assert_relative_eq!(cfg.total_energy(), 160.0, max_relative = 1e-14);
        let cfg = cfg.with_energy(EnergySpec::PerSymbol(2.0));
        assert_relative_eq!(cfg.total_energy(), 64.0);
        assert_eq!(cfg.redundancy(), 16);
        assert_relative_eq!(cfg.with_distance_unit(DistanceUnit::Antipodal).delta2(), 8.0);
        assert_relative_eq!(cfg.with_distance_unit(DistanceUnit::Orthogonal).delta2(), 4.0);
        assert_relative_eq!(cfg.delta2(), 64.0);
    }

    #[test]
    fn hamming_volume_values() {
        assert_eq!(hamming_volume_log(3, 10, 0).unwrap(), 0.0);
        assert_relative_eq!(hamming_volume_log(2, 7, 1).unwrap(), 8f64.ln(), max_relative = 1e-15);
        assert_eq!(hamming_volume_exact(2, 7, 2).unwrap(), BigUint::from(29u32));
        for &(m, n) in &[(2u32, 7u32), (3, 20), (5, 100), (2, 512), (4, 700)] {
            let full = hamming_volume_log(m, n, n).unwrap();
            assert_relative_eq!(full, n as f64 * (m as f64).ln(), max_relative = 1e-12);
        }
        assert!(hamming_volume_log(2, 5, 6).is_err());
        assert!(hamming_volume_log(1, 5, 2).is_err());
    }

    #[test]
    fn exact_and_log_sum_volumes_agree() {
        for &(m, n) in &[(2u32, 40u32), (2, 300), (4, 128), (7, 60)] {
            for t in (0..=n).step_by(7) {
                let exact = ln_biguint(&hamming_volume_exact(m, n, t).unwrap());
                let lse = ln_volume_lse(m, n, t);
                assert_relative_eq!(exact, lse, max_relative = 1e-12, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn dmin_upper_values() {
        assert_eq!(dmin_upper(2, 7, 4).unwrap(), 4);
        for m in 2..=8 {
            for n in 1..=40 {
                assert_eq!(dmin_upper(m, n, n).unwrap(), 2, "M = {m}, n = {n}");
            }
        }
        assert_eq!(dmin_upper(2, 32, 16).unwrap(), 10);
        assert_eq!(dmin_upper(2, 62, 32).unwrap(), 16);
        assert!(dmin_upper(2, 4, 5).is_err());
        assert!(dmin_upper(2, 4, 0).is_err());
    }

    #[test]
    fn dmin_upper_log_path_matches_exact() {
        for &(m, k) in &[(2u32, 16u32), (2, 100), (3, 50)] {
            for n in [k + 1, k + 37, 520, 700] {
                if n < k {
                    continue;
                }
                assert_eq!(dmin_upper_exact(m, n, n - k), dmin_upper_log(m, n, n - k), "M = {m}, k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn dmin_upper_nondecreasing_in_blocklength() {
        for &m in &[2u32, 3, 4] {
            for &k in &[1u32, 4, 8, 16] {
                let mut previous = 0;
                for n in k..=k + 200 {
                    let d = dmin_upper(m, n, k).unwrap();
                    assert!(d >= previous, "M = {m}, k = {k}, n = {n}");
                    assert_eq!(d % 2, 0);
                    previous = d;
                }
            }
        }
    }

    #[test]
    fn dmin_lower_values() {
        let cfg = reference_cfg(32, 16);
        let r = cfg.radius().unwrap();
        // 4R²/E from the 50-digit oracle: 5.774282440034808826
        assert_relative_eq!(4.0 * r * r / 16.0, 5.774_282_440_034_808_826, max_relative = 1e-13);
        assert_eq!(dmin_lower(&cfg).unwrap(), 6);
        let big = cfg.with_energy(EnergySpec::Total(4.0 * r * r * 1.5));
        assert_eq!(dmin_lower(&big).unwrap(), 1);
        let exact = cfg.with_energy(EnergySpec::Total(4.0 * r * r / 3.0));
        assert_eq!(dmin_lower(&exact).unwrap(), 3);
        let just_below = cfg.with_energy(EnergySpec::Total(4.0 * r * r / 3.0 * (1.0 - 1e-12)));
        assert_eq!(dmin_lower(&just_below).unwrap(), 4);
    }

    #[test]
    fn dmin_lower_monotone_in_energy_and_blocklength() {
        let base = reference_cfg(32, 16);
        let mut previous = u64::MAX;
        for i in 0..200 {
            let e = 0.5 * 1.05f64.powi(i);
            let d = dmin_lower(&base.with_energy(EnergySpec::Total(e))).unwrap();
            assert!(d <= previous);
            previous = d;
        }
        // R(ε) grows with n, so at fixed E the lower bound can only grow.
        let mut previous = 0;
        for n in 16..=256 {
            let d = dmin_lower(&base.with_blocklength(n).with_energy(EnergySpec::Total(16.0))).unwrap();
            assert!(d >= previous, "n = {n}");
            previous = d;
        }
    }

    #[test]
    fn euclidean_conversion() {
        assert_eq!(euclid_from_hamming(0, 5.0), 0.0);
        assert_eq!(euclid_from_hamming(4, 9.0), 6.0);
        assert_relative_eq!(euclid_from_hamming(3, 16.0), 48f64.sqrt());
        let b = distance_bounds(&reference_cfg(32, 16)).unwrap();
        assert_eq!((b.dmin_min, b.dmin_max), (6, 10));
        assert!(b.feasible);
        assert_relative_eq!(b.euclid_min, 96f64.sqrt());
        assert_relative_eq!(b.euclid_max, 160f64.sqrt());
        let infeasible = distance_bounds(&reference_cfg(17, 16)).unwrap();
        assert!(!infeasible.feasible);
        assert!(infeasible.dmin_min > infeasible.dmin_max);
    }

    #[test]
    fn entropy_values() {
        for m in 2..10 {
            assert_eq!(entropy_m(m, 0.0), 0.0);
            let top = (m - 1) as f64 / m as f64;
            assert_relative_eq!(entropy_m(m, top), 1.0, max_relative = 1e-14);
            assert_eq!(entropy_m_inverse(m, 0.0), 0.0);
            assert_relative_eq!(entropy_m_inverse(m, 1.0), top);
        }
        assert_relative_eq!(entropy_m(2, 0.5), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn entropy_inverse_round_trip() {
        for m in [2u32, 3, 4, 8, 16] {
            for i in 0..=100 {
                let y = i as f64 / 100.0;
                let back = entropy_m(m, entropy_m_inverse(m, y));
                assert!((back - y).abs() <= 1e-10, "M = {m}, y = {y}");
            }
        }
    }

    #[test]
    fn lambda_bounds_dominate_hamming_bound() {
        for m in [2u32, 3] {
            for k in 1..=12u32 {
                let n_max = (m as u64).pow(k).saturating_sub(1).min(k as u64 + 150) as u32;
                for n in k + 1..=n_max {
                    let lambda = lambda_bound(m, k, n);
                    let cap = 2.0 * (m - 1) as f64 / m as f64 + 1.0 / n as f64;
                    assert!(lambda < cap + 1e-15, "M = {m}, k = {k}, n = {n}");
                    let d = dmin_upper(m, n, k).unwrap() as f64;
                    assert!(d <= lambda * n as f64 + 1e-9, "M = {m}, k = {k}, n = {n}: {d} > {}", lambda * n as f64);
                }
            }
        }
    }

    #[test]
    fn lambda_bound_misses_uncoded_and_small_quaternary_cases() {
        // With no redundancy the threshold rule still returns 2, above λn.
        assert_eq!(dmin_upper(2, 2, 2).unwrap(), 2);
        assert!(lambda_bound(2, 2, 2) * 2.0 < 2.0);
        assert!(lambda_bound(3, 5, 5) * 5.0 < 2.0);
        assert_eq!(dmin_upper(4, 5, 3).unwrap(), 4);
        assert!(lambda_bound(4, 3, 5) * 5.0 < 4.0);
    }

    #[test]
    fn asymptotic_lambda_below_inverse_alphabet() {
        for m in [2u32, 4, 8] {
            let threshold = lambda_threshold_k(m);
            for k in 1..=200u32 {
                if (k as f64) > threshold {
                    assert!(lambda_bound_asymptotic(m, k) < 1.0 / m as f64, "M = {m}, k = {k}");
                }
            }
        }
        assert_relative_eq!(lambda_threshold_k(2), 4.0 / 3.0 - 1.0, max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn guarded_ceil_is_ceil_away_from_integers(x in 0.0f64..1e6) {
            let frac = x - x.floor();
            prop_assume!(frac > 1e-9 && frac < 1.0 - 1e-9);
            prop_assert_eq!(guarded_ceil(x), (x.ceil() as u64).max(1));
        }
    }
}
