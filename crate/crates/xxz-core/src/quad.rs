//! One-dimensional quadrature rules on complex contour segments and
//! deterministic tensor-product integration.
//!
//! Correlator integrands are analytic on their contours, so the rules here
//! are the spectrally convergent ones: Gauss-Legendre on straight segments
//! (real or shifted into the complex plane), midpoint/trapezoid on periodic
//! intervals and on circles for residue extraction.
//!
//! `integrate_nd` sums the tensor product with a fixed pairwise reduction
//! tree, so parallel and sequential evaluation agree bitwise.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hard cap on tensor-product dimension.
pub const DIM_CAP: usize = 4;

/// Contour segment specification.
#[derive(Debug, Clone)]
pub enum Descriptor {
    /// Straight line from `a` to `b` (either may be complex).
    Segment { a: C64, b: C64 },
    /// Periodic interval `[center-half_width, center+half_width)` traversed
    /// once; the rule is the midpoint/trapezoid rule, spectrally accurate for
    /// integrands with that period.
    Periodic { center: C64, half_width: f64 },
    /// Counterclockwise circle for `∮ f dz`.
    Circle { center: C64, radius: f64 },
}

/// Nodes and weights for one contour segment; weights carry the complex
/// line element so that `∫ f = Σ w_i f(z_i)`.
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub nodes: Vec<C64>,
    pub weights: Vec<C64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ 1 dz`, i.e. the summed weights (total displacement of the segment).
    pub fn total_weight(&self) -> C64 {
        self.weights.iter().sum()
    }

    /// Concatenate several segments into one composite contour.
    pub fn chain<I: IntoIterator<Item = QuadRule>>(parts: I) -> QuadRule {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for p in parts {
            nodes.extend(p.nodes);
            weights.extend(p.weights);
        }
        QuadRule { nodes, weights }
    }
}

pub fn make_rule(desc: &Descriptor, n: usize) -> Result<QuadRule> {
    if n < 2 {
        return Err(Error::BadDescriptor {
            reason: format!("need at least 2 points, got {n}"),
        });
    }
    match *desc {
        Descriptor::Segment { a, b } => {
            if (b - a).norm() == 0.0 {
                return Err(Error::BadDescriptor {
                    reason: "degenerate segment".into(),
                });
            }
            let (x, w) = gauss_legendre(n);
            let mid = (a + b) / 2.0;
            let half = (b - a) / 2.0;
            Ok(QuadRule {
                nodes: x.iter().map(|&t| mid + half * t).collect(),
                weights: w.iter().map(|&t| half * t).collect(),
            })
        }
        Descriptor::Periodic { center, half_width } => {
            if half_width <= 0.0 {
                return Err(Error::BadDescriptor {
                    reason: "periodic interval needs positive half width".into(),
                });
            }
            let step = 2.0 * half_width / n as f64;
            let nodes = (0..n)
                .map(|j| center + C64::new(-half_width + (j as f64 + 0.5) * step, 0.0))
                .collect();
            Ok(QuadRule {
                nodes,
                weights: vec![C64::new(step, 0.0); n],
            })
        }
        Descriptor::Circle { center, radius } => {
            if radius <= 0.0 {
                return Err(Error::BadDescriptor {
                    reason: "circle needs positive radius".into(),
                });
            }
            let step = 2.0 * std::f64::consts::PI / n as f64;
            let mut nodes = Vec::with_capacity(n);
            let mut weights = Vec::with_capacity(n);
            for j in 0..n {
                let phi = j as f64 * step;
                let e = C64::new(0.0, phi).exp();
                nodes.push(center + radius * e);
                weights.push(C64::new(0.0, radius * step) * e);
            }
            Ok(QuadRule { nodes, weights })
        }
    }
}

/// Gauss-Legendre nodes/weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product integral of `f` over the given rules.
///
/// `parallel` is honored only when the crate is built with the `parallel`
/// feature; either way the summation tree is fixed, so results are bitwise
/// reproducible.
pub fn integrate_nd<F>(rules: &[QuadRule], parallel: bool, f: F) -> Result<C64>
where
    F: Fn(&[C64]) -> C64 + Sync,
{
    integrate_nd_indexed(rules, parallel, |_, x| f(x))
}

/// Same as [`integrate_nd`] but the integrand also receives the per-dimension
/// node indices, so callers can look up cached per-node data.
pub fn integrate_nd_indexed<F>(rules: &[QuadRule], parallel: bool, f: F) -> Result<C64>
where
    F: Fn(&[usize], &[C64]) -> C64 + Sync,
{
    let m = rules.len();
    if m == 0 || m > DIM_CAP {
        return Err(Error::DimensionCap { m, cap: DIM_CAP });
    }
    let total: usize = rules.iter().map(QuadRule::len).product();
    if total == 0 {
        return Err(Error::BadDescriptor {
            reason: "empty quadrature rule".into(),
        });
    }
    let term = |flat: usize| -> C64 {
        let mut idx = [0usize; DIM_CAP];
        let mut nodes = [C64::new(0.0, 0.0); DIM_CAP];
        let mut rem = flat;
        let mut w = C64::new(1.0, 0.0);
        // row-major: last dimension fastest
        for d in (0..m).rev() {
            let n = rules[d].len();
            let j = rem % n;
            rem /= n;
            idx[d] = j;
            nodes[d] = rules[d].nodes[j];
            w *= rules[d].weights[j];
        }
        w * f(&idx[..m], &nodes[..m])
    };
    Ok(reduce_range(0, total, parallel, &term))
}

const LEAF: usize = 64;
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 4096;

/// Fixed-shape pairwise reduction over `[lo, hi)`; the split points depend
/// only on the range, never on thread scheduling.
fn reduce_range<F>(lo: usize, hi: usize, parallel: bool, term: &F) -> C64
where
    F: Fn(usize) -> C64 + Sync,
{
    let len = hi - lo;
    if len <= LEAF {
        let vals: Vec<C64> = (lo..hi).map(term).collect();
        return pairwise(&vals);
    }
    let mid = lo + len / 2;
    #[cfg(feature = "parallel")]
    {
        if parallel && len >= PAR_THRESHOLD {
            let (a, b) = rayon::join(
                || reduce_range(lo, mid, parallel, term),
                || reduce_range(mid, hi, parallel, term),
            );
            return a + b;
        }
    }
    let _ = parallel;
    reduce_range(lo, mid, parallel, term) + reduce_range(mid, hi, parallel, term)
}

fn pairwise(v: &[C64]) -> C64 {
    match v.len() {
        0 => C64::new(0.0, 0.0),
        1 => v[0],
        2 => v[0] + v[1],
        n => pairwise(&v[..n / 2]) + pairwise(&v[n / 2..]),
    }
}
