//! Ground-state rapidity densities in the thermodynamic limit: closed forms
//! at zero field, Nyström solution of the Lieb equation at finite field,
//! Fermi boundary, critical field and the derivative densities entering the
//! field-case correlator determinants.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{
    self, bare_energy, kernel_k, kernel_k_c, p0_derivative, p0_prime, ModelParams, Regime,
    POLE_TOL,
};
use crate::quad::gauss_legendre;
use crate::special::{q_products, theta3, theta4, ThetaParams};

/// Zero-field ground-state density `ρ(α)` at a complex argument.
///
/// Massless: `1 / (2ζ cosh(πα/ζ))`.  Massive: the elliptic continuation
/// `(1/2π) ∏((1-q^{2n})/(1+q^{2n}))^2 ϑ₃(α)/ϑ₄(α)`.
pub fn density_closed_form(alpha: C64, regime: Regime, zeta: f64) -> Result<C64> {
    match regime {
        Regime::Massless => {
            let c = (std::f64::consts::PI * alpha / zeta).cosh();
            if c.norm() < POLE_TOL {
                return Err(Error::Pole {
                    context: "density_closed_form",
                    tol: POLE_TOL,
                });
            }
            Ok(1.0 / (2.0 * zeta * c))
        }
        Regime::Massive => {
            let tp = ThetaParams::from_zeta(zeta)?;
            let t4 = theta4(alpha, &tp)?;
            if t4.norm() < POLE_TOL {
                return Err(Error::Pole {
                    context: "density_closed_form",
                    tol: POLE_TOL,
                });
            }
            let (p0, pp) = q_products(tp.q);
            Ok((p0 / pp).powi(2) / (2.0 * std::f64::consts::PI) * theta3(alpha, &tp)? / t4)
        }
    }
}

/// Massive-regime density as the Fourier series `(1/2π) Σ e^{2inα}/cosh nζ`;
/// only converges for `|Im α| < ζ/2`, kept as a cross-check of the elliptic
/// form.
pub fn density_fourier_massive(alpha: f64, zeta: f64) -> f64 {
    let mut sum = 1.0;
    let mut n = 1.0f64;
    loop {
        let c = 1.0 / (n * zeta).cosh();
        sum += 2.0 * c * (2.0 * n * alpha).cos();
        if c < 1e-17 {
            break;
        }
        n += 1.0;
    }
    sum / (2.0 * std::f64::consts::PI)
}

/// `ρ̃(λ)`: the density in the `λ` variables, `ρ(λ)` massless and `iρ(iλ)`
/// massive.
pub fn rho_tilde(lambda: C64, regime: Regime, zeta: f64) -> Result<C64> {
    match regime {
        Regime::Massless => density_closed_form(lambda, regime, zeta),
        Regime::Massive => Ok(C64::i() * density_closed_form(C64::i() * lambda, regime, zeta)?),
    }
}

/// Inhomogeneous density `ρ̃_tot(λ) = (1/M) Σ_k ρ̃(λ - ξ_k + η/2)`.
pub fn rho_tilde_tot(lambda: C64, params: &ModelParams) -> Result<C64> {
    let half_eta = params.eta() / 2.0;
    let mut sum = C64::new(0.0, 0.0);
    for &xi in &params.xi {
        sum += rho_tilde(lambda - xi + half_eta, params.regime, params.zeta)?;
    }
    Ok(sum / params.sites as f64)
}

/// Critical field of the massive regime,
/// `h_c = (2/π) sinh ζ Σ_n (-1)^n / cosh nζ`.
pub fn critical_field(zeta: f64) -> f64 {
    let mut sum = 1.0;
    let mut n = 1.0f64;
    loop {
        let t = 2.0 * (if (n as i64) % 2 == 0 { 1.0 } else { -1.0 }) / (n * zeta).cosh();
        sum += t;
        if t.abs() < 1e-16 || n > 1e6 {
            break;
        }
        n += 1.0;
    }
    2.0 / std::f64::consts::PI * zeta.sinh() * sum
}

#[derive(Debug, Clone, Copy)]
pub struct LiebOptions {
    pub n_grid: usize,
    /// Highest derivative density `ρ_{h,b}` to tabulate (`b = 1..=b_max`).
    pub b_max: usize,
}

impl Default for LiebOptions {
    fn default() -> Self {
        Self {
            n_grid: 256,
            b_max: 4,
        }
    }
}

/// Nyström solution of the Lieb equation on `[-Λ_h, Λ_h]` together with the
/// dressed energy and the derivative densities.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    pub regime: Regime,
    pub zeta: f64,
    pub h: f64,
    /// Fermi boundary; `f64::INFINITY` for the massless zero-field line.
    pub lambda_f: f64,
    /// Half-length of the actual grid (`= lambda_f` when finite).
    pub support: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub rho: Vec<f64>,
    pub eps: Vec<f64>,
    /// `rho_b[b-1]` holds `ρ_{h,b}` on the grid.
    pub rho_b: Vec<Vec<f64>>,
    /// False when the field does not change the ground state
    /// (massive `h ≤ h_c`, or `h = 0`).
    pub field_active: bool,
}

impl DensityProfile {
    /// Natural Nyström extension of `ρ_h` to (complex) arguments inside the
    /// analyticity strip.
    pub fn rho_at(&self, lam: C64) -> Result<C64> {
        self.extend(lam, &self.rho, 1)
    }

    /// Extension of `ρ_{h,b}`.
    pub fn rho_b_at(&self, b: usize, lam: C64) -> Result<C64> {
        assert!(b >= 1 && b <= self.rho_b.len());
        self.extend(lam, &self.rho_b[b - 1], b)
    }

    fn extend(&self, lam: C64, values: &[f64], order: usize) -> Result<C64> {
        if self.nodes.is_empty() {
            return Ok(C64::new(0.0, 0.0));
        }
        let fact: f64 = (1..order).map(|k| k as f64).product();
        let rhs = p0_derivative(order, lam, self.regime, self.zeta)?
            / (2.0 * std::f64::consts::PI * fact);
        let mut conv = C64::new(0.0, 0.0);
        for ((&x, &w), &v) in self.nodes.iter().zip(&self.weights).zip(values) {
            conv += w * kernel_k_c(lam - C64::new(x, 0.0), self.regime, self.zeta) * v;
        }
        Ok(rhs - conv)
    }

    /// Dressed energy at a real argument via the same extension.
    pub fn eps_at(&self, lam: f64) -> f64 {
        let mut conv = 0.0;
        for ((&x, &w), &e) in self.nodes.iter().zip(&self.weights).zip(&self.eps) {
            conv += w * kernel_k(lam - x, self.regime, self.zeta) * e;
        }
        bare_energy(lam, self.regime, self.zeta, self.h) - conv
    }

    /// Fraction of down spins `∫ ρ_h`.
    pub fn down_density(&self) -> f64 {
        self.weights.iter().zip(&self.rho).map(|(w, r)| w * r).sum()
    }

    /// `⟨σ^z⟩ = 1 - 2 ∫ ρ_h`.
    pub fn magnetization(&self) -> f64 {
        1.0 - 2.0 * self.down_density()
    }

    /// Residual of the Lieb equation at an off-grid real point.
    pub fn lieb_residual(&self, lam: f64) -> f64 {
        let mut conv = 0.0;
        for ((&x, &w), &r) in self.nodes.iter().zip(&self.weights).zip(&self.rho) {
            conv += w * kernel_k(lam - x, self.regime, self.zeta) * r;
        }
        let rho_here = self
            .rho_at(C64::new(lam, 0.0))
            .map(|v| v.re)
            .unwrap_or(f64::NAN);
        rho_here + conv - p0_prime(lam, self.regime, self.zeta) / (2.0 * std::f64::consts::PI)
    }
}

/// Solve the ground-state density problem at field `h ≥ 0`.
///
/// Massless `h = 0` solves on a truncated line (cutoff where the closed-form
/// density falls below `1e-14`).  Massive `h ≤ h_c` returns the zero-field
/// profile with `field_active = false`.
pub fn solve_lieb(params: &ModelParams, opts: &LiebOptions) -> Result<DensityProfile> {
    let regime = params.regime;
    let zeta = params.zeta;
    if zeta == 0.0 {
        return Err(Error::InvalidParams {
            reason: "thermodynamic formulas need zeta > 0 (delta != 1)".into(),
        });
    }
    let h = if params.h < 1e-12 { 0.0 } else { params.h };
    match regime {
        Regime::Massless => {
            if h == 0.0 {
                let cut = zeta / std::f64::consts::PI * (1.0 / (2.0 * zeta * 1e-14)).acosh();
                let mut p = solve_on_interval(regime, zeta, 0.0, cut, opts)?;
                p.lambda_f = f64::INFINITY;
                p.field_active = false;
                return Ok(p);
            }
            if h >= model::saturation_field(params.delta) {
                return Ok(saturated(regime, zeta, h));
            }
            let lam = find_fermi_boundary(regime, zeta, h, 60.0)?;
            solve_on_interval(regime, zeta, h, lam, opts)
        }
        Regime::Massive => {
            let hc = critical_field(zeta);
            if h <= hc {
                // field below the gap: ground state and density unchanged
                let mut p = solve_on_interval(
                    regime,
                    zeta,
                    h,
                    std::f64::consts::PI / 2.0,
                    opts,
                )?;
                p.field_active = false;
                p.rho = p
                    .nodes
                    .iter()
                    .map(|&x| {
                        density_closed_form(C64::new(x, 0.0), regime, zeta)
                            .map(|v| v.re)
                    })
                    .collect::<Result<_>>()?;
                return Ok(p);
            }
            if h >= model::saturation_field(params.delta) {
                return Ok(saturated(regime, zeta, h));
            }
            let lam = find_fermi_boundary(regime, zeta, h, std::f64::consts::PI / 2.0)?;
            solve_on_interval(regime, zeta, h, lam, opts)
        }
    }
}

fn saturated(regime: Regime, zeta: f64, h: f64) -> DensityProfile {
    DensityProfile {
        regime,
        zeta,
        h,
        lambda_f: 0.0,
        support: 0.0,
        nodes: Vec::new(),
        weights: Vec::new(),
        rho: Vec::new(),
        eps: Vec::new(),
        rho_b: Vec::new(),
        field_active: true,
    }
}

/// Fermi boundary from `ε_h(Λ_h) = 0` by bisection on the outer parameter.
pub fn find_fermi_boundary(regime: Regime, zeta: f64, h: f64, lam_max: f64) -> Result<f64> {
    let n_scan = 96;
    let g = |lam: f64| -> f64 { dressed_energy_endpoint(regime, zeta, h, lam, n_scan) };
    let mut lo = 1e-8;
    if g(lo) > 0.0 {
        // Fermi sea collapsed: saturation
        return Ok(0.0);
    }
    let mut hi = lam_max;
    if g(hi) < 0.0 {
        return Err(Error::NoFermiBoundary {
            h,
            h_c: critical_field(zeta),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn dressed_energy_endpoint(regime: Regime, zeta: f64, h: f64, lam: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let nodes: Vec<f64> = x.iter().map(|&t| t * lam).collect();
    let weights: Vec<f64> = w.iter().map(|&t| t * lam).collect();
    let eps = nystrom_solve(regime, zeta, &nodes, &weights, &|a| {
        bare_energy(a, regime, zeta, h)
    });
    // evaluate at the endpoint through the equation itself
    let mut conv = 0.0;
    for ((&xj, &wj), &ej) in nodes.iter().zip(&weights).zip(&eps) {
        conv += wj * kernel_k(lam - xj, regime, zeta) * ej;
    }
    bare_energy(lam, regime, zeta, h) - conv
}

fn nystrom_solve(
    regime: Regime,
    zeta: f64,
    nodes: &[f64],
    weights: &[f64],
    rhs: &dyn Fn(f64) -> f64,
) -> Vec<f64> {
    let rhs_vals: Vec<f64> = nodes.iter().map(|&x| rhs(x)).collect();
    nystrom_solve_tabulated(regime, zeta, nodes, weights, &rhs_vals)
}

fn nystrom_solve_tabulated(
    regime: Regime,
    zeta: f64,
    nodes: &[f64],
    weights: &[f64],
    rhs: &[f64],
) -> Vec<f64> {
    let n = nodes.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let k = kernel_k(nodes[i] - nodes[j], regime, zeta) * weights[j];
            a[(i, j)] = if i == j { 1.0 + k } else { k };
        }
    }
    let b = DVector::from_column_slice(rhs);
    a.lu()
        .solve(&b)
        .expect("Lieb operator is well-conditioned")
        .iter()
        .copied()
        .collect()
}

fn solve_on_interval(
    regime: Regime,
    zeta: f64,
    h: f64,
    lam: f64,
    opts: &LiebOptions,
) -> Result<DensityProfile> {
    let (x, w) = gauss_legendre(opts.n_grid);
    let nodes: Vec<f64> = x.iter().map(|&t| t * lam).collect();
    let weights: Vec<f64> = w.iter().map(|&t| t * lam).collect();
    let tau = 2.0 * std::f64::consts::PI;
    let rho = nystrom_solve(regime, zeta, &nodes, &weights, &|a| {
        p0_prime(a, regime, zeta) / tau
    });
    let eps = nystrom_solve(regime, zeta, &nodes, &weights, &|a| {
        bare_energy(a, regime, zeta, h)
    });
    let mut rho_b = vec![rho.clone()];
    for b in 2..=opts.b_max {
        let fact: f64 = (1..b).map(|k| k as f64).product();
        let vals: Vec<f64> = nodes
            .iter()
            .map(|&a| {
                p0_derivative(b, C64::new(a, 0.0), regime, zeta).map(|v| v.re / (tau * fact))
            })
            .collect::<Result<_>>()?;
        rho_b.push(nystrom_solve_tabulated(regime, zeta, &nodes, &weights, &vals));
    }
    Ok(DensityProfile {
        regime,
        zeta,
        h,
        lambda_f: lam,
        support: lam,
        nodes,
        weights,
        rho,
        eps,
        rho_b,
        field_active: h > 0.0,
    })
}
