//! Decision radius, pairwise confusion probability and the confusion and
//! erasure rate bounds built from them.
//!
//! Every quantity is formed in the log domain first. Confusion bounds at
//! long blocklengths sit far below the smallest normal `f64`.

use serde::{Deserialize, Serialize};

use crate::distance::{distance_bounds, DistanceBounds, SystemConfig};
use crate::error::{Error, Result};
use crate::geometry::{cap_shape, ln_cap_fraction};
use crate::quadrature::{integrate, Tolerance};
use crate::specfun::{
    chi_cdf, chi_inv_cdf, chi_log_pdf_unchecked, chi_sf, ln_add_exp, ln_binomial_unchecked, ln_diff_exp,
    ln_gamma, ln_normal_sf, Probability,
};

/// Points used to locate the integrand maximum before scaling.
const SCAN_POINTS: usize = 257;

/// Decision radius `R(ε) = σ F⁻¹_χn(1 − ε)`.
pub fn decision_radius(n: u32, sigma: f64, epsilon: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain("decision_radius", format!("sigma must be positive, got {sigma}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain("decision_radius", format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(sigma * chi_inv_cdf(n, 1.0 - epsilon)?)
}

/// Block error probability `P(‖w‖ ≥ R)` of a decision sphere of radius `R`.
pub fn bler_from_radius(n: u32, sigma: f64, radius: f64) -> Result<Probability> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain("bler_from_radius", format!("sigma must be positive, got {sigma}")));
    }
    if !(radius >= 0.0) {
        return Err(Error::domain("bler_from_radius", format!("radius must be non-negative, got {radius}")));
    }
    if radius.is_infinite() {
        return Ok(Probability::ZERO);
    }
    chi_sf(n, radius / sigma)
}

/// Result of the pairwise confusion integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairProbability {
    pub probability: Probability,
    /// Quadrature error estimate relative to the value.
    pub relative_error: f64,
    pub evaluations: usize,
    /// True when quadrature stopped at its depth limit on some panel.
    pub depth_limited: bool,
}

impl PairProbability {
    fn exact(probability: Probability) -> Self {
        PairProbability {
            probability,
            relative_error: 0.0,
            evaluations: 0,
            depth_limited: false,
        }
    }

    /// True when the value is positive but below the smallest `f64`.
    pub fn underflows(&self) -> bool {
        self.probability.underflows()
    }
}

/// Probability that isotropic Gaussian noise of per-dimension deviation `σ`
/// lands inside the radius-`R` ball around a point at distance `D`, i.e.
/// `P(‖w − Δ‖ ≤ R)` with `‖Δ‖ = D`.
///
/// Conditioning on the noise norm `σu` leaves the surface fraction of the
/// sphere of that radius which lies inside the ball, so the probability is
/// the chi density weighted by the cap fraction over
/// `u ∈ [|D − R|/σ, (D + R)/σ]`, plus the chi mass below `(R − D)/σ` when
/// the ball swallows the origin. The window is mapped through
/// `u = c − h cos φ`, which absorbs the square-root behaviour of the cap
/// fraction at both ends, and the integrand is rescaled by its maximum so
/// that values far below `f64` range keep full relative precision.
pub fn p_pair(n: u32, sigma: f64, radius: f64, distance: f64) -> Result<PairProbability> {
    if n == 0 {
        return Err(Error::domain("p_pair", "dimension must be at least 1"));
    }
    for (name, v) in [("sigma", sigma), ("R", radius), ("D", distance)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain("p_pair", format!("{name} must be positive and finite, got {v}")));
        }
    }
    if n == 1 {
        let lo = ln_normal_sf((distance - radius) / sigma);
        let hi = ln_normal_sf((distance + radius) / sigma);
        return Ok(PairProbability::exact(Probability::from_log(ln_diff_exp(lo, hi))));
    }

    let inner = if radius > distance {
        chi_cdf(n, (radius - distance) / sigma)?.log_value()
    } else {
        f64::NEG_INFINITY
    };

    let u_lo = (distance - radius).abs() / sigma;
    let u_hi = (distance + radius) / sigma;
    let centre = 0.5 * (u_lo + u_hi);
    let half = 0.5 * (u_hi - u_lo);
    let nf = n as f64;
    let lg = ln_gamma(nf / 2.0);
    let log_integrand = |phi: f64| -> f64 {
        let (s, c) = phi.sin_cos();
        let u = centre - half * c;
        if !(u > 0.0) || s <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let cap = cap_shape(sigma * u, distance, radius);
        chi_log_pdf_unchecked(nf, lg, u) + ln_cap_fraction(n, cap) + (half * s).ln()
    };

    let pi = std::f64::consts::PI;
    let scale = (1..SCAN_POINTS)
        .map(|i| log_integrand(pi * i as f64 / SCAN_POINTS as f64))
        .fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        let flagged = PairProbability {
            probability: Probability::from_log(inner),
            relative_error: 0.0,
            evaluations: SCAN_POINTS - 1,
            depth_limited: false,
        };
        return Ok(flagged);
    }

    let integral = integrate(|phi| (log_integrand(phi) - scale).exp(), 0.0, pi, Tolerance::default());
    let ln_partial = if integral.value > 0.0 {
        scale + integral.value.ln()
    } else {
        f64::NEG_INFINITY
    };
    let relative_error = if integral.value > 0.0 {
        integral.error_estimate / integral.value
    } else {
        0.0
    };
    Ok(PairProbability {
        probability: Probability::from_log(ln_add_exp(inner, ln_partial)),
        relative_error,
        evaluations: integral.evaluations + SCAN_POINTS - 1,
        depth_limited: integral.depth_limited,
    })
}

/// Confusion and erasure rate bounds at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBounds {
    pub epsilon: Probability,
    pub pcon_lb: Probability,
    pub pcon_ub: Probability,
    pub pers_lb: Probability,
    pub pers_ub: Probability,
    pub feasible: bool,
}

impl RateBounds {
    /// True when the lower confusion bound does not exceed the upper one.
    pub fn ordered(&self) -> bool {
        self.pcon_lb.log_value() <= self.pcon_ub.log_value()
    }
}

/// `ln(M^k − 1)`, or `-inf` for `k = 0`.
fn ln_codewords_minus_one(m: u32, k: u32) -> f64 {
    if k == 0 {
        return f64::NEG_INFINITY;
    }
    let ln_size = k as f64 * (m as f64).ln();
    ln_size + (-(-ln_size).exp()).ln_1p()
}

/// Union bound `(M^k − 1)·P_pair`, clamped to 1. A single codeword (`k = 0`)
/// cannot be confused and gives 0.
pub fn union_bound(m: u32, k: u32, pair: Probability) -> Probability {
    Probability::from_log(ln_codewords_minus_one(m, k) + pair.log_value())
}

/// Neighbour-count estimate
/// `C(n, d)(M−1)^d / M^{n−k} · P_pair(√(δ² d))` at `d = d_max`.
pub fn p_con_lb(cfg: &SystemConfig) -> Result<Probability> {
    cfg.validate()?;
    let dist = distance_bounds(cfg)?;
    lower_bound_with(cfg, &dist, cfg.radius()?)
}

fn lower_bound_with(cfg: &SystemConfig, dist: &DistanceBounds, radius: f64) -> Result<Probability> {
    let d = dist.dmin_max;
    if d > cfg.n as u64 {
        return Ok(Probability::ZERO);
    }
    let pair = p_pair(cfg.n, cfg.sigma(), radius, dist.euclid_max)?;
    let ln_count = ln_binomial_unchecked(cfg.n as u64, d) + d as f64 * ((cfg.m - 1) as f64).ln()
        - cfg.redundancy() as f64 * (cfg.m as f64).ln();
    Ok(Probability::from_log(ln_count + pair.probability.log_value()))
}

/// Union bound `(M^k − 1)·P_pair(√(δ² d_min))` at `d_min = d_min^min`.
pub fn p_con_ub(cfg: &SystemConfig) -> Result<Probability> {
    cfg.validate()?;
    let dist = distance_bounds(cfg)?;
    upper_bound_with(cfg, &dist, cfg.radius()?)
}

fn upper_bound_with(cfg: &SystemConfig, dist: &DistanceBounds, radius: f64) -> Result<Probability> {
    let pair = p_pair(cfg.n, cfg.sigma(), radius, dist.euclid_min)?;
    Ok(union_bound(cfg.m, cfg.k, pair.probability))
}

fn assemble(epsilon: f64, pcon_lb: Probability, pcon_ub: Probability, feasible: bool) -> RateBounds {
    RateBounds {
        epsilon: Probability::from_value(epsilon),
        pcon_lb,
        pcon_ub,
        pers_lb: Probability::from_value((epsilon - pcon_ub.value()).max(0.0)),
        pers_ub: Probability::from_value(epsilon - pcon_lb.value()),
        feasible,
    }
}

/// Confusion bounds together with the erasure bounds they imply:
/// `P_ers ≤ ε − P_con^LB` and `P_ers ≥ max(0, ε − P_con^UB)`.
pub fn p_ers_bounds(cfg: &SystemConfig) -> Result<RateBounds> {
    Ok(evaluate(cfg)?.rates)
}

/// Everything computed for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub config: SystemConfig,
    pub total_energy: f64,
    pub radius: f64,
    pub distance: DistanceBounds,
    pub rates: RateBounds,
}

pub fn evaluate(cfg: &SystemConfig) -> Result<OperatingPoint> {
    cfg.validate()?;
    let radius = cfg.radius()?;
    let distance = distance_bounds(cfg)?;
    let lb = lower_bound_with(cfg, &distance, radius)?;
    let ub = upper_bound_with(cfg, &distance, radius)?;
    Ok(OperatingPoint {
        config: *cfg,
        total_energy: cfg.total_energy(),
        radius,
        distance,
        rates: assemble(cfg.epsilon, lb, ub, distance.feasible),
    })
}
