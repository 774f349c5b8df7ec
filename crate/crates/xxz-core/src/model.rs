//! Model parameters and the elementary scalar functions of the XXZ chain.
//!
//! Everything downstream (finite-chain operators, Bethe equations, densities,
//! correlator integrands) is written in terms of the two regimes collected
//! here:
//!
//! * massless, `-1 < Δ < 1`: `Δ = cos ζ`, `η = -iζ` with `ζ ∈ (0, π)`;
//! * massive, `Δ > 1`: `Δ = cosh ζ`, `η = -ζ`, elliptic nome `q = e^{-ζ}`.
//!
//! Real rapidity variables are `α = λ` (massless) and `α = iλ` (massive).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance below which `|sinh(·)|` counts as a pole hit.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `-1 < Δ < 1`, gapless.
    Massless,
    /// `Δ > 1`, gapped at zero field.
    Massive,
}

/// Chain and coupling data; the single owner of `Δ`, `ζ`, `η`, `q`, `h` and
/// the inhomogeneities `ξ_k`.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub delta: f64,
    pub regime: Regime,
    /// `ζ > 0` in both regimes (`Δ = cos ζ` massless, `Δ = cosh ζ` massive).
    pub zeta: f64,
    /// Magnetic field `h ≥ 0`.
    pub h: f64,
    /// Chain length `M`.
    pub sites: usize,
    /// Number of down spins `N` of the Bethe state of interest.
    pub n_down: usize,
    /// Site inhomogeneities `ξ_k`; all equal to `η/2` in the homogeneous chain.
    pub xi: Vec<C64>,
}

impl ModelParams {
    /// Homogeneous chain: every `ξ_k = η/2`.
    pub fn new(delta: f64, h: f64, sites: usize, n_down: usize) -> Result<Self> {
        let (regime, zeta) = classify(delta)?;
        if h < 0.0 {
            return Err(Error::InvalidParams {
                reason: format!("magnetic field h={h} must be >= 0"),
            });
        }
        if 2 * n_down > sites {
            return Err(Error::InvalidParams {
                reason: format!("N={n_down} exceeds M/2 with M={sites}"),
            });
        }
        let eta = eta_of(regime, zeta);
        let xi = vec![eta / 2.0; sites];
        Ok(Self {
            delta,
            regime,
            zeta,
            h,
            sites,
            n_down,
            xi,
        })
    }

    /// Same chain with explicit inhomogeneities.  The `β_k` (equal to `ξ_k`
    /// massless, `iξ_k` massive) must sit in the strip `-ζ < Im β_k < 0`.
    pub fn with_inhomogeneities(mut self, xi: Vec<C64>) -> Result<Self> {
        if xi.len() != self.sites {
            return Err(Error::InvalidParams {
                reason: format!("need M={} inhomogeneities, got {}", self.sites, xi.len()),
            });
        }
        for &x in &xi {
            let beta_im = match self.regime {
                Regime::Massless => x.im,
                Regime::Massive => (C64::i() * x).im,
            };
            if beta_im <= -self.zeta || beta_im >= 0.0 {
                return Err(Error::InvalidParams {
                    reason: format!("inhomogeneity {x} outside the strip -zeta < Im beta < 0"),
                });
            }
        }
        self.xi = xi;
        Ok(self)
    }

    pub fn eta(&self) -> C64 {
        eta_of(self.regime, self.zeta)
    }

    /// Elliptic nome `q = e^{-ζ}` (massive regime).
    pub fn nome(&self) -> f64 {
        (-self.zeta).exp()
    }

    /// True when every `ξ_k` equals `η/2` to machine accuracy.
    pub fn is_homogeneous(&self) -> bool {
        let half_eta = self.eta() / 2.0;
        self.xi.iter().all(|&x| (x - half_eta).norm() < 1e-14)
    }

    /// Real offsets `r_k` with `ξ_k = η/2 + r_k`, used by the Bethe solver for
    /// chains with a real inhomogeneity spread.
    pub fn real_offsets(&self) -> Result<Vec<f64>> {
        let half_eta = self.eta() / 2.0;
        self.xi
            .iter()
            .map(|&x| {
                let r = x - half_eta;
                if r.im.abs() > 1e-12 {
                    Err(Error::InvalidParams {
                        reason: "inhomogeneity spread is not real".into(),
                    })
                } else {
                    Ok(r.re)
                }
            })
            .collect()
    }
}

fn classify(delta: f64) -> Result<(Regime, f64)> {
    if delta <= -1.0 {
        return Err(Error::InvalidParams {
            reason: format!("delta={delta} <= -1: ferromagnetic regime is out of scope"),
        });
    }
    if delta > 1.0 {
        Ok((Regime::Massive, delta.acosh()))
    } else if delta < 1.0 {
        Ok((Regime::Massless, delta.acos()))
    } else {
        // The isotropic point sits on the regime boundary; finite-chain
        // diagonalization accepts it but the thermodynamic formulas (all
        // carrying 1/zeta) do not.
        Ok((Regime::Massless, 0.0))
    }
}

fn eta_of(regime: Regime, zeta: f64) -> C64 {
    match regime {
        Regime::Massless => C64::new(0.0, -zeta),
        Regime::Massive => C64::new(-zeta, 0.0),
    }
}

/// `a(λ) = 1`, the vacuum eigenvalue of `A(λ)`.
pub fn a_fn(_lambda: C64) -> C64 {
    C64::new(1.0, 0.0)
}

/// `b(λ,μ) = sinh(λ-μ) / sinh(λ-μ+η)`.
pub fn b_fn(lambda: C64, mu: C64, eta: C64) -> Result<C64> {
    let den = (lambda - mu + eta).sinh();
    if den.norm() < POLE_TOL {
        return Err(Error::Pole {
            context: "b(lambda,mu)",
            tol: POLE_TOL,
        });
    }
    Ok((lambda - mu).sinh() / den)
}

/// `c(λ,μ) = sinh η / sinh(λ-μ+η)`.
pub fn c_fn(lambda: C64, mu: C64, eta: C64) -> Result<C64> {
    let den = (lambda - mu + eta).sinh();
    if den.norm() < POLE_TOL {
        return Err(Error::Pole {
            context: "c(lambda,mu)",
            tol: POLE_TOL,
        });
    }
    Ok(eta.sinh() / den)
}

/// `d(λ) = ∏_k b(λ, ξ_k)`, the vacuum eigenvalue of `D(λ)`.
pub fn d_fn(lambda: C64, params: &ModelParams) -> Result<C64> {
    let eta = params.eta();
    let mut prod = C64::new(1.0, 0.0);
    for &xi in &params.xi {
        prod *= b_fn(lambda, xi, eta)?;
    }
    Ok(prod)
}

/// Bare momentum derivative `p₀'(α)`, real and positive on the ground-state
/// support in both regimes.
pub fn p0_prime(alpha: f64, regime: Regime, zeta: f64) -> f64 {
    match regime {
        Regime::Massless => {
            let s = (zeta / 2.0).sin();
            zeta.sin() / (alpha.sinh().powi(2) + s * s)
        }
        Regime::Massive => {
            let s = (zeta / 2.0).sinh();
            zeta.sinh() / (alpha.sin().powi(2) + s * s)
        }
    }
}

/// `p₀'` at a complex argument (needed on shifted contours).
pub fn p0_prime_c(alpha: C64, regime: Regime, zeta: f64) -> C64 {
    let half = C64::new(0.0, zeta / 2.0);
    match regime {
        Regime::Massless => zeta.sin() / ((alpha + half).sinh() * (alpha - half).sinh()),
        Regime::Massive => zeta.sinh() / ((alpha + half).sin() * (alpha - half).sin()),
    }
}

/// Lieb kernel `K(α)`; even, and π-periodic in the massive regime.
pub fn kernel_k(alpha: f64, regime: Regime, zeta: f64) -> f64 {
    match regime {
        Regime::Massless => {
            (2.0 * zeta).sin()
                / (2.0 * std::f64::consts::PI * (alpha.sinh().powi(2) + zeta.sin().powi(2)))
        }
        Regime::Massive => {
            (2.0 * zeta).sinh()
                / (2.0 * std::f64::consts::PI * (alpha.sin().powi(2) + zeta.sinh().powi(2)))
        }
    }
}

/// Kernel at a complex argument.
pub fn kernel_k_c(alpha: C64, regime: Regime, zeta: f64) -> C64 {
    let shift = C64::new(0.0, zeta);
    let tau = C64::new(2.0 * std::f64::consts::PI, 0.0);
    match regime {
        Regime::Massless => {
            (2.0 * zeta).sin() / (tau * (alpha + shift).sinh() * (alpha - shift).sinh())
        }
        Regime::Massive => {
            (2.0 * zeta).sinh() / (tau * (alpha + shift).sin() * (alpha - shift).sin())
        }
    }
}

/// Bare one-particle energy `ε₀(α) = h - 2 sin ζ p₀'(α)` (massless) or
/// `h - 2 sinh ζ p₀'(α)` (massive).
pub fn bare_energy(alpha: f64, regime: Regime, zeta: f64, h: f64) -> f64 {
    let pref = match regime {
        Regime::Massless => 2.0 * zeta.sin(),
        Regime::Massive => 2.0 * zeta.sinh(),
    };
    h - pref * p0_prime(alpha, regime, zeta)
}

/// Field at which the ground state saturates to all spins up.
pub fn saturation_field(delta: f64) -> f64 {
    4.0 * (1.0 + delta)
}

/// Continuity-corrected bare momentum `p₀(α)`, odd, `p₀(0) = 0`.
///
/// Massless: `2 atan(tanh α · cot ζ/2)` on the real line.  Massive: the same
/// expression with `tan`/`coth`, continued through `α = ±π/2` so that it keeps
/// increasing by `2π` per period.
pub fn bare_momentum(alpha: f64, regime: Regime, zeta: f64) -> f64 {
    match regime {
        Regime::Massless => 2.0 * (alpha.tanh() * (zeta / 2.0).tan().recip()).atan(),
        Regime::Massive => {
            let k = (alpha / std::f64::consts::PI).round();
            let a0 = alpha - k * std::f64::consts::PI;
            2.0 * (a0.tan() / (zeta / 2.0).tanh()).atan() + 2.0 * std::f64::consts::PI * k
        }
    }
}

/// Continuous odd scattering phase `θ(α)`; `θ' = -2π K`.
///
/// In the massive regime the argument is `α_j - α_k` and the expression is
/// continuous for `|α| < π`.
pub fn theta_phase(alpha: f64, regime: Regime, zeta: f64) -> f64 {
    match regime {
        Regime::Massless => {
            -std::f64::consts::PI
                - 2.0 * (-alpha.cosh() * zeta.sin()).atan2(alpha.sinh() * zeta.cos())
        }
        Regime::Massive => -2.0 * (zeta.cosh() * alpha.sin()).atan2(zeta.sinh() * alpha.cos()),
    }
}

/// `d^b p₀ / dα^b` at a complex argument, `b ≥ 1`, from the partial-fraction
/// form `p₀' = -i [coth(α - iζ/2) - coth(α + iζ/2)]` (massless; `cot` in the
/// massive regime) and the derivative polynomials of `coth`/`cot`.
pub fn p0_derivative(order: usize, alpha: C64, regime: Regime, zeta: f64) -> Result<C64> {
    assert!(order >= 1, "p0_derivative needs order >= 1");
    let half = C64::new(0.0, zeta / 2.0);
    let (lo, hi) = (alpha - half, alpha + half);
    let guard = |z: C64, ctx| {
        if z.norm() < POLE_TOL {
            Err(Error::Pole {
                context: ctx,
                tol: POLE_TOL,
            })
        } else {
            Ok(())
        }
    };
    let val = match regime {
        Regime::Massless => {
            guard(lo.sinh(), "p0 derivative")?;
            guard(hi.sinh(), "p0 derivative")?;
            let poly = coth_derivative_poly(order - 1);
            eval_poly(&poly, lo.cosh() / lo.sinh()) - eval_poly(&poly, hi.cosh() / hi.sinh())
        }
        Regime::Massive => {
            guard(lo.sin(), "p0 derivative")?;
            guard(hi.sin(), "p0 derivative")?;
            let poly = cot_derivative_poly(order - 1);
            eval_poly(&poly, lo.cos() / lo.sin()) - eval_poly(&poly, hi.cos() / hi.sin())
        }
    };
    Ok(-C64::i() * val)
}

/// Coefficients of the polynomial `P_n(u)` with `d^n coth(x)/dx^n = P_n(coth x)`;
/// `P_0 = u`, `P_{n+1} = (1 - u^2) P_n'`.
fn coth_derivative_poly(n: usize) -> Vec<f64> {
    let mut p = vec![0.0, 1.0];
    for _ in 0..n {
        p = compose_step(&p, -1.0);
    }
    p
}

/// Same for `cot`: `Q_{n+1} = -(1 + u^2) Q_n'`.
fn cot_derivative_poly(n: usize) -> Vec<f64> {
    let mut p = vec![0.0, 1.0];
    for _ in 0..n {
        let q = compose_step(&p, 1.0);
        p = q.into_iter().map(|c| -c).collect();
    }
    p
}

/// `(1 + sign·u^2) P'(u)` on coefficient vectors.
fn compose_step(p: &[f64], sign: f64) -> Vec<f64> {
    let mut dp = vec![0.0; p.len().max(2) - 1];
    for (k, &c) in p.iter().enumerate().skip(1) {
        dp[k - 1] = c * k as f64;
    }
    let mut out = vec![0.0; dp.len() + 2];
    for (k, &c) in dp.iter().enumerate() {
        out[k] += c;
        out[k + 2] += sign * c;
    }
    out
}

fn eval_poly(p: &[f64], u: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn regime_classification() {
        let p = ModelParams::new(0.5, 0.0, 8, 4).unwrap();
        assert_eq!(p.regime, Regime::Massless);
        assert_abs_diff_eq!(p.zeta, (0.5f64).acos(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.eta().im, -p.zeta, epsilon = 1e-15);

        let p = ModelParams::new(2.0, 0.0, 8, 4).unwrap();
        assert_eq!(p.regime, Regime::Massive);
        assert_abs_diff_eq!(p.zeta, (2.0f64).acosh(), epsilon = 1e-15);
        assert!(p.nome() > 0.0 && p.nome() < 1.0);

        assert!(ModelParams::new(-1.5, 0.0, 8, 4).is_err());
        assert!(ModelParams::new(0.5, 0.0, 8, 5).is_err());
    }

    #[test]
    fn b_and_c_special_values() {
        let eta = C64::new(-0.5, 0.0);
        let l = C64::new(0.3, 0.0);
        assert_abs_diff_eq!(b_fn(l, l, eta).unwrap().norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (c_fn(l, l, eta).unwrap() - 1.0).norm(),
            0.0,
            epsilon = 1e-15
        );
        // frozen high-precision value of sinh(0.2)/sinh(-0.3)
        let b = b_fn(l, C64::new(0.1, 0.0), eta).unwrap();
        assert_abs_diff_eq!(b.re, -0.66115791582225393957, epsilon = 1e-15);
        assert_abs_diff_eq!(b.im, 0.0, epsilon = 1e-15);
        // pole detection
        assert!(b_fn(l, l + C64::new(0.5, 0.0), eta).is_err());
    }

    #[test]
    fn d_vanishes_on_inhomogeneities_and_is_a_product_of_b() {
        let xi = vec![C64::new(-0.2, -0.1), C64::new(-0.3, -0.05)];
        let p = ModelParams::new(0.3, 0.0, 2, 1)
            .unwrap()
            .with_inhomogeneities(xi.clone())
            .unwrap();
        assert!(d_fn(xi[0], &p).unwrap().norm() < 1e-14);
        let l = C64::new(0.17, -0.3);
        let want =
            b_fn(l, xi[0], p.eta()).unwrap() * b_fn(l, xi[1], p.eta()).unwrap();
        assert_abs_diff_eq!((d_fn(l, &p).unwrap() - want).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((a_fn(l) - 1.0).norm(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn kernel_frozen_value_and_symmetry() {
        // K(0), massless, zeta = pi/3: sin(2 zeta) / (2 pi sin^2 zeta)
        let z = PI / 3.0;
        assert_abs_diff_eq!(
            kernel_k(0.0, Regime::Massless, z),
            0.18377629847393068,
            epsilon = 1e-15
        );
        for regime in [Regime::Massless, Regime::Massive] {
            let zeta = match regime {
                Regime::Massless => 1.1,
                Regime::Massive => 0.9,
            };
            for i in 0..20 {
                let a = -2.0 + 0.21 * i as f64;
                assert_abs_diff_eq!(
                    kernel_k(a, regime, zeta),
                    kernel_k(-a, regime, zeta),
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn massive_functions_are_pi_periodic() {
        let zeta = 0.8;
        for i in 0..25 {
            let a = -1.5 + 0.13 * i as f64;
            assert!(
                (kernel_k(a + PI, Regime::Massive, zeta) - kernel_k(a, Regime::Massive, zeta))
                    .abs()
                    < 1e-12
            );
            assert!(
                (p0_prime(a + PI, Regime::Massive, zeta) - p0_prime(a, Regime::Massive, zeta))
                    .abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn bare_energy_frozen_value() {
        // massive, h=0, zeta=1: -2 sinh(1) p0'(0) with p0'(0) = sinh(1)/sinh^2(1/2)
        assert_abs_diff_eq!(
            bare_energy(0.0, Regime::Massive, 1.0, 0.0),
            -10.172322539260975,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            p0_prime(0.0, Regime::Massive, 1.0),
            4.3279068274773057,
            epsilon = 1e-13
        );
    }

    #[test]
    fn momentum_and_phase_are_odd_and_consistent_with_derivatives() {
        for (regime, zeta) in [(Regime::Massless, 1.0), (Regime::Massive, 0.7)] {
            let hstep = 1e-5;
            for i in 0..15 {
                let a = -1.3 + 0.19 * i as f64;
                assert_abs_diff_eq!(
                    bare_momentum(a, regime, zeta),
                    -bare_momentum(-a, regime, zeta),
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    theta_phase(a, regime, zeta),
                    -theta_phase(-a, regime, zeta),
                    epsilon = 1e-12
                );
                // p0' and -2 pi K are the derivatives of p0 and theta
                let dp = (bare_momentum(a + hstep, regime, zeta)
                    - bare_momentum(a - hstep, regime, zeta))
                    / (2.0 * hstep);
                assert_abs_diff_eq!(dp, p0_prime(a, regime, zeta), epsilon = 1e-6);
                let dt = (theta_phase(a + hstep, regime, zeta)
                    - theta_phase(a - hstep, regime, zeta))
                    / (2.0 * hstep);
                assert_abs_diff_eq!(
                    dt,
                    -2.0 * PI * kernel_k(a, regime, zeta),
                    epsilon = 1e-6
                );
            }
        }
    }

    #[test]
    fn p0_derivative_matches_p0_prime_and_finite_differences() {
        for (regime, zeta) in [(Regime::Massless, 0.9), (Regime::Massive, 1.1)] {
            let a = C64::new(0.4, -0.1);
            let d1 = p0_derivative(1, a, regime, zeta).unwrap();
            assert_abs_diff_eq!((d1 - p0_prime_c(a, regime, zeta)).norm(), 0.0, epsilon = 1e-12);
            // d^2 p0 via central differences of the closed-form p0'
            let h = 1e-5;
            let num = (p0_prime_c(a + h, regime, zeta) - p0_prime_c(a - h, regime, zeta))
                / (2.0 * h);
            let d2 = p0_derivative(2, a, regime, zeta).unwrap();
            assert!((d2 - num).norm() < 1e-6);
            let num3 = (p0_derivative(2, a + h, regime, zeta).unwrap()
                - p0_derivative(2, a - h, regime, zeta).unwrap())
                / (2.0 * h);
            let d3 = p0_derivative(3, a, regime, zeta).unwrap();
            assert!((d3 - num3).norm() < 1e-5);
        }
    }

    #[test]
    fn r_matrix_unitarity() {
        use nalgebra::DMatrix;
        let mut rng_state = 88172645463325252u64;
        let mut next = move || {
            // xorshift, plenty for test sampling
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for (regime, zeta) in [(Regime::Massless, 0.75), (Regime::Massive, 1.2)] {
            let eta = eta_of(regime, zeta);
            for _ in 0..50 {
                let l = C64::new(next(), next());
                let m = C64::new(next(), next());
                let r1 = r_matrix(l, m, eta);
                let r2 = r_matrix(m, l, eta);
                let prod = &r1 * &r2;
                let id = DMatrix::<C64>::identity(4, 4);
                assert!((prod - id).norm() < 1e-10);
            }
        }
    }

    fn r_matrix(l: C64, m: C64, eta: C64) -> nalgebra::DMatrix<C64> {
        let b = b_fn(l, m, eta).unwrap();
        let c = c_fn(l, m, eta).unwrap();
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        nalgebra::DMatrix::from_row_slice(
            4,
            4,
            &[
                one, z, z, z, //
                z, b, c, z, //
                z, c, b, z, //
                z, z, z, one,
            ],
        )
    }
}
