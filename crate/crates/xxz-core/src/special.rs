//! Jacobi theta functions with nome `q = e^{-ζ}`, the q-product constants,
//! and the two closed-form determinants of the density matrix: the
//! trigonometric Cauchy determinant (massless) and the elliptic one
//! (massive).
//!
//! Theta conventions: `ϑ₁(x) = 2 Σ (-1)^n q^{(n+1/2)^2} sin((2n+1)x)` and so
//! on, quasi-periods `π` and `iζ` (so the density `ϑ₃/ϑ₄` ratio has periods
//! `π` and `2iζ`).

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Nome and truncation policy for the theta series.
#[derive(Debug, Clone)]
pub struct ThetaParams {
    pub q: f64,
    /// Target tail size; a term index `n` is kept while the explicit tail
    /// bound `q^{(n+1/2)^2} e^{(2n+1)|Im x|}` exceeds it.
    pub tail: f64,
    pub max_terms: usize,
}

impl ThetaParams {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) || q == 0.0 {
            return Err(Error::InvalidParams {
                reason: format!("nome q={q} must lie in (0,1)"),
            });
        }
        Ok(Self {
            q,
            tail: 1e-16,
            max_terms: 256,
        })
    }

    pub fn from_zeta(zeta: f64) -> Result<Self> {
        Self::new((-zeta).exp())
    }
}

/// `ϑ₁(x, q)`, odd.
pub fn theta1(x: C64, tp: &ThetaParams) -> Result<C64> {
    theta_half(x, tp, true)
}

/// `ϑ₂(x, q)`, even.
pub fn theta2(x: C64, tp: &ThetaParams) -> Result<C64> {
    theta_half(x, tp, false)
}

/// `ϑ₃(x, q)`, even.
pub fn theta3(x: C64, tp: &ThetaParams) -> Result<C64> {
    theta_int(x, tp, false)
}

/// `ϑ₄(x, q)`, even.
pub fn theta4(x: C64, tp: &ThetaParams) -> Result<C64> {
    theta_int(x, tp, true)
}

fn theta_half(x: C64, tp: &ThetaParams, odd: bool) -> Result<C64> {
    let lnq = tp.q.ln();
    let im = x.im.abs();
    let mut sum = C64::new(0.0, 0.0);
    for n in 0..tp.max_terms {
        let nf = n as f64;
        let expo = (nf + 0.5) * (nf + 0.5) * lnq + (2.0 * nf + 1.0) * im;
        let coeff = ((nf + 0.5) * (nf + 0.5) * lnq).exp();
        let arg = (2.0 * nf + 1.0) * x;
        let term = if odd {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s * coeff * arg.sin()
        } else {
            coeff * arg.cos()
        };
        sum += term;
        if expo.exp() < tp.tail && n >= 2 {
            return Ok(2.0 * sum);
        }
    }
    Err(Error::Convergence {
        context: "theta series",
    })
}

fn theta_int(x: C64, tp: &ThetaParams, alternating: bool) -> Result<C64> {
    let lnq = tp.q.ln();
    let im = x.im.abs();
    let mut sum = C64::new(1.0, 0.0);
    for n in 1..tp.max_terms {
        let nf = n as f64;
        let expo = nf * nf * lnq + 2.0 * nf * im;
        let coeff = (nf * nf * lnq).exp();
        let s = if alternating && n % 2 == 1 { -1.0 } else { 1.0 };
        sum += 2.0 * s * coeff * (2.0 * nf * x).cos();
        if expo.exp() < tp.tail && n >= 2 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        context: "theta series",
    })
}

/// `ϑ₁'(0) = 2 q^{1/4} ∏ (1-q^{2n})^3`.
pub fn theta1_prime0(q: f64) -> f64 {
    let (p0, _) = q_products(q);
    2.0 * q.powf(0.25) * p0.powi(3)
}

/// `(∏ (1-q^{2n}), ∏ (1+q^{2n}))`, truncated once `q^{2n} < 1e-18`.
pub fn q_products(q: f64) -> (f64, f64) {
    let mut p_minus = 1.0;
    let mut p_plus = 1.0;
    let mut q2n = q * q;
    while q2n > 1e-18 {
        p_minus *= 1.0 - q2n;
        p_plus *= 1.0 + q2n;
        q2n *= q * q;
    }
    (p_minus, p_plus)
}

/// `g_m = ∏((1-q^{2n})/(1+q^{2n}))^2 [2 q^{1/4} ∏(1-q^{2n})^3]^{m-1}`.
pub fn g_m(m: usize, q: f64) -> f64 {
    let (p0, pp) = q_products(q);
    (p0 / pp).powi(2) * theta1_prime0(q).powi(m as i32 - 1)
}

/// `C_m = (i/2π)^m g_m`, the Liouville constant of the elliptic determinant.
pub fn c_m(m: usize, q: f64) -> C64 {
    let f = C64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI));
    f.powu(m as u32) * g_m(m, q)
}

/// Massless closed form for `det S` with `S_ab = ρ̃(λ_a - ξ_b + η/2)`:
/// `(i/2ζ)^m ∏_{k<l} sinh(π/ζ (ξ_k-ξ_l)) ∏_{a>b} sinh(π/ζ (λ_a-λ_b)) /
///  ∏_{a,k} sinh(π/ζ (λ_a-ξ_k))`.
pub fn cauchy_det_massless(lams: &[C64], xis: &[C64], zeta: f64) -> Result<C64> {
    let m = lams.len();
    assert_eq!(m, xis.len());
    let k = std::f64::consts::PI / zeta;
    let mut num = C64::new(1.0, 0.0);
    for a in 0..m {
        for b in 0..a {
            num *= (k * (lams[a] - lams[b])).sinh();
            num *= (k * (xis[b] - xis[a])).sinh();
        }
    }
    let mut den = C64::new(1.0, 0.0);
    for &l in lams {
        for &x in xis {
            let s = (k * (l - x)).sinh();
            if s.norm() < crate::model::POLE_TOL {
                return Err(Error::Pole {
                    context: "cauchy_det_massless",
                    tol: crate::model::POLE_TOL,
                });
            }
            den *= s;
        }
    }
    let pref = C64::new(0.0, 1.0 / (2.0 * zeta)).powu(m as u32);
    Ok(pref * num / den)
}

/// Elliptic closed form for `det S̃` with `S̃_ij = ρ(α_i - β_j - iζ/2)`
/// (massive regime, real `α`-variables):
/// `C_m ∏_{j<k} ϑ₁(α_j-α_k)ϑ₁(β_k-β_j) / ∏_{j,k} ϑ₁(α_j-β_k) · ϑ₂(Σ(α_j-β_j))`.
pub fn elliptic_det_massive(alphas: &[C64], betas: &[C64], tp: &ThetaParams) -> Result<C64> {
    let m = alphas.len();
    assert_eq!(m, betas.len());
    let mut num = C64::new(1.0, 0.0);
    for j in 0..m {
        for k in (j + 1)..m {
            num *= theta1(alphas[j] - alphas[k], tp)?;
            num *= theta1(betas[k] - betas[j], tp)?;
        }
    }
    let mut den = C64::new(1.0, 0.0);
    for &a in alphas {
        for &b in betas {
            let t = theta1(a - b, tp)?;
            if t.norm() < crate::model::POLE_TOL {
                return Err(Error::Pole {
                    context: "elliptic_det_massive",
                    tol: crate::model::POLE_TOL,
                });
            }
            den *= t;
        }
    }
    let total: C64 = alphas.iter().zip(betas).map(|(&a, &b)| a - b).sum();
    Ok(c_m(m, tp.q) * num / den * theta2(total, tp)?)
}

/// LU determinant of a small dense complex matrix; the oracle side of the
/// closed-form identities.
pub fn lu_det(mat: DMatrix<C64>) -> C64 {
    mat.lu().determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn tp(q: f64) -> ThetaParams {
        ThetaParams::new(q).unwrap()
    }

    #[test]
    fn frozen_reference_values() {
        // mpmath jtheta(n, 0.37+0.21i, 0.24)
        let x = C64::new(0.37, 0.21);
        let p = tp(0.24);
        let vals = [
            theta1(x, &p).unwrap(),
            theta2(x, &p).unwrap(),
            theta3(x, &p).unwrap(),
            theta4(x, &p).unwrap(),
        ];
        let want = [
            C64::new(0.430789874063347907, 0.251890249338861349),
            C64::new(1.3770952995906158, -0.155979134025959925),
            C64::new(1.38701161274971026, -0.146202275609832428),
            C64::new(0.614641776036817338, 0.133748112615737874),
        ];
        for (v, w) in vals.iter().zip(want) {
            assert!((v - w).norm() < 1e-14);
        }
        assert_abs_diff_eq!(theta1_prime0(0.24), 1.15929662173707131, epsilon = 1e-14);
    }

    #[test]
    fn parity_and_periodicity() {
        let p = tp(0.31);
        let xs = [C64::new(0.4, 0.12), C64::new(-1.2, -0.3), C64::new(2.0, 0.05)];
        for &x in &xs {
            assert!((theta1(x, &p).unwrap() + theta1(-x, &p).unwrap()).norm() < 1e-13);
            assert!((theta2(x, &p).unwrap() - theta2(-x, &p).unwrap()).norm() < 1e-13);
            assert!((theta3(x, &p).unwrap() - theta3(-x, &p).unwrap()).norm() < 1e-13);
            assert!((theta4(x, &p).unwrap() - theta4(-x, &p).unwrap()).norm() < 1e-13);
            let pi = C64::new(PI, 0.0);
            assert!((theta1(x + pi, &p).unwrap() + theta1(x, &p).unwrap()).norm() < 1e-13);
            assert!((theta2(x + pi, &p).unwrap() + theta2(x, &p).unwrap()).norm() < 1e-13);
            assert!((theta3(x + pi, &p).unwrap() - theta3(x, &p).unwrap()).norm() < 1e-13);
            assert!((theta4(x + pi, &p).unwrap() - theta4(x, &p).unwrap()).norm() < 1e-13);
        }
        assert!(theta1(C64::new(0.0, 0.0), &p).unwrap().norm() < 1e-15);
    }

    #[test]
    fn quasi_periodicity_in_the_imaginary_period() {
        // theta1(x + i zeta) = -e^{zeta} e^{-2ix} theta1(x) for q = e^{-zeta}
        let zeta = 1.1;
        let p = tp((-zeta as f64).exp());
        let x = C64::new(0.3, -0.2);
        let lhs = theta1(x + C64::new(0.0, zeta), &p).unwrap();
        let rhs = -(zeta.exp()) * (C64::new(0.0, -2.0) * x).exp() * theta1(x, &p).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        let lhs2 = theta2(x + C64::new(0.0, zeta), &p).unwrap();
        let rhs2 = (zeta.exp()) * (C64::new(0.0, -2.0) * x).exp() * theta2(x, &p).unwrap();
        assert!((lhs2 - rhs2).norm() < 1e-12 * rhs2.norm());
    }

    #[test]
    fn c_m_recursion() {
        let q = 0.27;
        let (p0, _) = q_products(q);
        let step = C64::new(0.0, q.powf(0.25) / PI) * p0.powi(3);
        for m in 2..=5 {
            let ratio = c_m(m, q) / c_m(m - 1, q);
            assert!((ratio - step).norm() < 1e-13 * step.norm());
        }
    }

    #[test]
    fn cauchy_det_matches_lu_and_is_antisymmetric() {
        let zeta = PI / 3.0;
        // rho_tilde(lam - xi + eta/2) = (i/2 zeta) / sinh(pi/zeta (lam - xi))
        let dens = |l: C64, x: C64| {
            C64::new(0.0, 1.0 / (2.0 * zeta)) / ((PI / zeta) * (l - x)).sinh()
        };
        let lams = [C64::new(0.3, -0.4), C64::new(-0.7, -0.55), C64::new(1.1, -0.55)];
        let xis = [
            C64::new(0.05, -0.5),
            C64::new(-0.6, -0.51),
            C64::new(0.8, -0.62),
        ];
        for m in 1..=3usize {
            let mat = DMatrix::from_fn(m, m, |a, b| dens(lams[a], xis[b]));
            let lu = lu_det(mat);
            let cf = cauchy_det_massless(&lams[..m], &xis[..m], zeta).unwrap();
            assert!((lu - cf).norm() < 1e-10 * cf.norm().max(1e-30));
        }
        // swapping two lambda rows flips the sign
        let swapped = [lams[1], lams[0], lams[2]];
        let a = cauchy_det_massless(&lams, &xis, zeta).unwrap();
        let b = cauchy_det_massless(&swapped, &xis, zeta).unwrap();
        assert!((a + b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn m1_cauchy_det_is_the_shifted_density() {
        // at m=1 the closed form reduces to rho(lam - xi - i zeta/2) directly
        let zeta = 0.9;
        let l = C64::new(0.37, -0.2);
        let x = C64::new(0.11, -0.45);
        let cf = cauchy_det_massless(&[l], &[x], zeta).unwrap();
        let arg = l - x - C64::new(0.0, zeta / 2.0);
        let rho = 1.0 / (2.0 * zeta * (PI * arg / zeta).cosh());
        assert!((cf - rho).norm() < 1e-13 * rho.norm());
    }
}
