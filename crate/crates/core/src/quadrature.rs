//! Adaptive Gauss-Legendre quadrature.
//!
//! A panel is integrated with a fixed Legendre rule; it is accepted when the
//! sum over its two halves agrees with the whole-panel estimate, otherwise
//! both halves are refined recursively.

use std::sync::OnceLock;

/// Nodes in the base Legendre rule.
pub const BASE_NODES: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Relative tolerance on the total.
    pub relative: f64,
    /// Absolute floor below which panel disagreements are ignored.
    pub absolute: f64,
    /// Maximum bisection depth.
    pub max_depth: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            relative: 1e-9,
            absolute: 1e-320,
            max_depth: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the accepted panel disagreements.
    pub error_estimate: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
    /// True when some panel stopped at `max_depth` without meeting tolerance.
    pub depth_limited: bool,
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// found by Newton iteration on `P_n` from the Chebyshev-like initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn base_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(BASE_NODES))
}

/// The base rule's nodes mapped onto `[a, b]`.
pub fn panel_nodes(a: f64, b: f64) -> impl Iterator<Item = f64> {
    let (nodes, _) = base_rule();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    nodes.iter().map(move |&x| mid + half * x)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = base_rule();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

struct State {
    evaluations: usize,
    error: f64,
    depth_limited: bool,
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    global_abs: f64,
    tol: &Tolerance,
    depth: u32,
    state: &mut State,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = panel(f, a, mid);
    let right = panel(f, mid, b);
    state.evaluations += 2 * BASE_NODES;
    let halves = left + right;
    let diff = (halves - whole).abs();
    let allowed = (tol.relative * halves.abs()).max(global_abs).max(tol.absolute);
    if diff <= allowed {
        state.error += diff;
        return halves;
    }
    if depth >= tol.max_depth {
        state.error += diff;
        state.depth_limited = true;
        return halves;
    }
    refine(f, a, mid, left, global_abs, tol, depth + 1, state)
        + refine(f, mid, b, right, global_abs, tol, depth + 1, state)
}

/// Integrates `f` over `[a, b]`.
///
/// A panel is accepted once its halves agree with it to within the larger of
/// `relative · |panel|`, `relative · |first estimate of the total|` and the
/// absolute floor; the middle term keeps negligible panels from being
/// refined to the depth limit.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Integral {
    if a == b {
        return Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            depth_limited: false,
        };
    }
    let whole = panel(&f, a, b);
    let mut state = State {
        evaluations: BASE_NODES,
        error: 0.0,
        depth_limited: false,
    };
    let global_abs = tol.relative * whole.abs();
    let value = refine(&f, a, b, whole, global_abs, &tol, 1, &mut state);
    Integral {
        value,
        error_estimate: state.error,
        evaluations: state.evaluations,
        depth_limited: state.depth_limited,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-15);
        // degree 9 is the highest exact degree for 5 nodes
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert_relative_eq!(integral, 2.0 / 9.0, max_relative = 1e-14);
        let (_, w64) = gauss_legendre(64);
        assert_relative_eq!(w64.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn smooth_integrands() {
        let r = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, Tolerance::default());
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-13);
        assert!(!r.depth_limited);
        let r = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, Tolerance::default());
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn endpoint_singularity_is_refined() {
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, Tolerance::default());
        assert_relative_eq!(r.value, 2.0 / 3.0, max_relative = 1e-9);
        assert!(r.evaluations > BASE_NODES);
    }

    #[test]
    fn narrow_peak() {
        let w = 1e-3;
        let f = |x: f64| (-(x - 0.3) * (x - 0.3) / (2.0 * w * w)).exp();
        let r = integrate(f, 0.0, 10.0, Tolerance::default());
        let exact = w * (2.0 * std::f64::consts::PI).sqrt();
        assert_relative_eq!(r.value, exact, max_relative = 1e-9);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, Tolerance::default()).value, 0.0);
    }
}
