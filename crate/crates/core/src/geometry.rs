//! Hypersphere cap geometry.
//!
//! A noise vector of norm `r` lies on a sphere around the sent codeword; the
//! part of that sphere inside the decision ball (radius `R`) of a codeword at
//! distance `D` is a spherical cap of half-angle `θ`. The probability of
//! landing in that cap, given the norm, is the cap's share of the sphere's
//! surface `Ω_n(θ) = ∫₀^θ sin^{n-2}φ dφ / ∫₀^π sin^{n-2}φ dφ`.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::specfun::{ln_gamma, ln_inc_beta, Probability, LN_SQRT_PI};

/// Half-angle of a spherical cap, in radians within `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CapAngle(f64);

impl CapAngle {
    pub const EMPTY: CapAngle = CapAngle(0.0);
    pub const FULL: CapAngle = CapAngle(PI);

    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::domain("CapAngle::new", format!("theta must lie in [0, π], got {theta}")));
        }
        Ok(CapAngle(theta))
    }

    pub fn theta(self) -> f64 {
        self.0
    }
}

/// `sin²θ` and `cos θ` of a cap, kept separately so small caps keep precision.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CapShape {
    pub sin2: f64,
    pub cos: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Cap {
    Empty,
    Full,
    Partial(CapShape),
}

/// Intersection of the sphere of radius `r` about the origin with the ball
/// of radius `big_r` centred at distance `d`.
pub(crate) fn cap_shape(r: f64, d: f64, big_r: f64) -> Cap {
    if r + d <= big_r {
        return Cap::Full;
    }
    if r <= (d - big_r).abs() || r >= d + big_r {
        // r < R - D was handled above, so what remains is a miss.
        return Cap::Empty;
    }
    // 1 - c² factored as (1 - c)(1 + c), free of cancellation near c = ±1.
    let sin2 = (big_r - r + d) * (big_r + r - d) * (r + d - big_r) * (r + d + big_r)
        / (4.0 * r * r * d * d);
    let cos = ((r * r + d * d - big_r * big_r) / (2.0 * r * d)).clamp(-1.0, 1.0);
    Cap::Partial(CapShape {
        sin2: sin2.clamp(0.0, 1.0),
        cos,
    })
}

/// Cap angle `θ = arccos((r² + D² − R²) / (2 r D))` for a noise norm `r`.
///
/// Outside the intersecting regime the cap is empty (`θ = 0`), except when
/// the whole sphere sits inside the ball (`R ≥ D + r`), which gives `θ = π`.
pub fn cap_angle(noise_norm: f64, d: f64, big_r: f64) -> Result<CapAngle> {
    if !(d > 0.0) {
        return Err(Error::domain("cap_angle", format!("D must be positive, got {d}")));
    }
    if !(big_r > 0.0) {
        return Err(Error::domain("cap_angle", format!("R must be positive, got {big_r}")));
    }
    if !(noise_norm >= 0.0) {
        return Err(Error::domain("cap_angle", format!("noise norm must be non-negative, got {noise_norm}")));
    }
    Ok(match cap_shape(noise_norm, d, big_r) {
        Cap::Empty => CapAngle::EMPTY,
        Cap::Full => CapAngle::FULL,
        Cap::Partial(shape) => CapAngle(shape.sin2.sqrt().atan2(shape.cos)),
    })
}

fn check_dimension(function: &'static str, n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(function, format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// Cap fraction `Ω_n(θ)` through the regularized incomplete beta function:
/// `½ I_{sin²θ}((n−1)/2, ½)` for `θ ≤ π/2`, mirrored for `θ > π/2`.
pub fn angle_fraction(n: u32, theta: CapAngle) -> Result<Probability> {
    check_dimension("angle_fraction", n)?;
    let t = theta.theta();
    if t == 0.0 {
        return Ok(Probability::ZERO);
    }
    if t == PI {
        return Ok(Probability::ONE);
    }
    let (s, c) = t.sin_cos();
    Ok(Probability::from_log(ln_angle_fraction(
        n,
        CapShape { sin2: s * s, cos: c },
    )))
}

pub(crate) fn ln_angle_fraction(n: u32, shape: CapShape) -> f64 {
    let a = (n as f64 - 1.0) / 2.0;
    let ln_i = ln_inc_beta(a, 0.5, shape.sin2, shape.cos * shape.cos);
    if shape.cos >= 0.0 {
        ln_i - LN_2
    } else {
        (-0.5 * ln_i.exp()).ln_1p()
    }
}

pub(crate) fn ln_cap_fraction(n: u32, cap: Cap) -> f64 {
    match cap {
        Cap::Empty => f64::NEG_INFINITY,
        Cap::Full => 0.0,
        Cap::Partial(shape) => ln_angle_fraction(n, shape),
    }
}

/// Cap fraction by direct adaptive quadrature of `sin^{n−2}`, normalised by
/// the same quadrature over `[0, π]`.
pub fn angle_fraction_quadrature(n: u32, theta: CapAngle) -> Result<f64> {
    check_dimension("angle_fraction_quadrature", n)?;
    let exponent = (n - 2) as i32;
    let f = |phi: f64| phi.sin().powi(exponent);
    let tol = Tolerance {
        relative: 1e-14,
        ..Tolerance::default()
    };
    let t = theta.theta();
    // Integrate over the shorter side of π/2 and use the mirror symmetry.
    let half = integrate(f, 0.0, FRAC_PI_2, tol).value;
    let partial = if t <= FRAC_PI_2 {
        integrate(f, 0.0, t, tol).value
    } else {
        2.0 * half - integrate(f, 0.0, PI - t, tol).value
    };
    Ok(partial / (2.0 * half))
}

/// `dΩ_n/dθ = C_n sin^{n−2}θ` with `C_n = Γ(n/2) / (√π Γ((n−1)/2))`.
pub fn angle_fraction_derivative(n: u32, theta: CapAngle) -> Result<f64> {
    check_dimension("angle_fraction_derivative", n)?;
    let nf = n as f64;
    let ln_c = ln_gamma(nf / 2.0) - LN_SQRT_PI - ln_gamma((nf - 1.0) / 2.0);
    Ok((ln_c + (nf - 2.0) * theta.theta().sin().ln()).exp())
}
