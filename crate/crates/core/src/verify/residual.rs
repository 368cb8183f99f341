//! Finite-difference residual of φ'' + (λ₀ + λ₁s + λ₂s²)φ = 0.

use serde::Serialize;

use crate::eigenfunctions::Eigenfunction;
use crate::fields::{lambdas, CaseId};
use crate::grid::GridSpec;
use crate::spectrum::{GammaParams, ON_SHELL_TOL};

use super::VerifyError;

pub const ODE_RESIDUAL_TOL: f64 = 1e-6;

/// Step as a fraction of the local length scale.
const STEP_FRACTION: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    /// max |residual| / max |λ₀φ|. On shell (λ₀ ≈ 0) the reference is
    /// max (|λ₀| + |λ₁s| + |λ₂s²|)|φ| instead.
    pub rel_norm: f64,
    pub pass: bool,
    /// φ vanished on the whole grid, so the residual says nothing.
    pub degenerate: bool,
}

fn five_point<F: FnMut(f64) -> Result<f64, VerifyError>>(f: &mut F, x: f64, h: f64) -> Result<f64, VerifyError> {
    let (m2, m1, c, p1, p2) = (f(x - 2.0 * h)?, f(x - h)?, f(x)?, f(x + h)?, f(x + 2.0 * h)?);
    Ok((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h))
}

/// Second derivative by the 5-point stencil with one Richardson step.
pub fn second_derivative<F: FnMut(f64) -> Result<f64, VerifyError>>(mut f: F, x: f64, h: f64) -> Result<f64, VerifyError> {
    let coarse = five_point(&mut f, x, h)?;
    let fine = five_point(&mut f, x, 0.5 * h)?;
    Ok((16.0 * fine - coarse) / 15.0)
}

pub fn ode_residual(ef: &Eigenfunction, grid: &GridSpec) -> Result<ResidualReport, VerifyError> {
    ode_residual_at(ef, ef.energy, grid)
}

/// Residual of `ef` against the couplings at `energy`, which need not be the
/// energy the wavefunction was built from.
pub fn ode_residual_at(ef: &Eigenfunction, energy: f64, grid: &GridSpec) -> Result<ResidualReport, VerifyError> {
    grid.validate_strict(ef.case)?;
    let l = lambdas(&ef.params, energy);
    let alpha = ef.params.alpha;
    let xs = grid.samples();
    let mut residuals = Vec::with_capacity(xs.len());
    let mut values = Vec::with_capacity(xs.len());
    let mut scales = Vec::with_capacity(xs.len());
    let mut phi = |x: f64| ef.eval(x).map_err(VerifyError::from);
    for &x in &xs {
        let s = ef.case.profile(alpha, x);
        let scale = l.coupling_scale(s);
        let natural = match ef.case {
            CaseId::I => 1.0 / alpha,
            _ => x,
        };
        let len = if scale > 0.0 { natural.min(scale.sqrt().recip()) } else { natural };
        let d2 = second_derivative(&mut phi, x, STEP_FRACTION * len)?;
        let value = phi(x)?;
        residuals.push(d2 + l.coupling(s) * value);
        values.push(value);
        scales.push(scale);
    }
    let on_shell = l.lambda0.abs() <= ON_SHELL_TOL * ef.params.mass_shell().max(energy * energy);
    let reference = values
        .iter()
        .zip(&scales)
        .map(|(v, sc)| if on_shell { sc * v.abs() } else { (l.lambda0 * v).abs() })
        .fold(0.0f64, f64::max);
    let max_res = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let degenerate = reference == 0.0;
    let rel_norm = if degenerate { 0.0 } else { max_res / reference };
    Ok(ResidualReport {
        grid: xs,
        residuals,
        rel_norm,
        pass: !degenerate && rel_norm <= ODE_RESIDUAL_TOL,
        degenerate,
    })
}

/// A grid covering the region where `ef` is appreciable.
pub fn default_grid(ef: &Eigenfunction, points: usize) -> Result<GridSpec, VerifyError> {
    let alpha = ef.params.alpha;
    let l = lambdas(&ef.params, ef.energy);
    let nf = ef.n as f64;
    let bad = |what: &str| VerifyError::NotBound(format!("case {}: {what}", ef.case));
    let (lo, hi) = match (ef.case, ef.gammas) {
        (CaseId::I, GammaParams::Kummer { gamma0, gamma2, .. }) => {
            if !(gamma0 > 0.0 && gamma2 > 0.0) {
                return Err(bad("needs gamma0, gamma2 > 0"));
            }
            let t_star = l.lambda1 / (2.0 * l.lambda2.abs());
            let x_mid = if t_star > 0.0 && t_star.is_finite() { -t_star.ln() / alpha } else { 0.0 };
            let x_lo = -((25.0 + 2.0 * nf) / gamma2).ln() / alpha;
            (x_lo.min(x_mid - 1.0 / alpha), x_mid + (25.0 + 2.0 * nf) / (alpha * gamma0))
        }
        (CaseId::II, GammaParams::Kummer { gamma0, gamma2, .. }) => {
            if !(gamma0 > 0.0) {
                return Err(bad("needs gamma0 > 0"));
            }
            let big_n = nf + gamma2 + 1.0;
            (1e-3 / (alpha * gamma0), (2.0 * big_n + 25.0) / (alpha * gamma0))
        }
        (CaseId::IIIa | CaseId::IIIb, _) => {
            if !(l.lambda2 > 0.0) {
                return Err(bad("needs lambda2 > 0"));
            }
            let factor = if ef.case == CaseId::IIIa { 1.0 } else { 4.0 };
            let c = factor * l.lambda2.sqrt() / (alpha * alpha);
            (c / 40.0, 40.0 * c)
        }
        (CaseId::IVa | CaseId::IVb, _) => {
            if !(l.lambda0 > 0.0) {
                return Err(bad("needs lambda0 > 0"));
            }
            let k = l.lambda0.sqrt();
            (0.05 / k, 40.0 / k)
        }
        _ => return Err(bad("exponents do not match the case")),
    };
    Ok(GridSpec::new(lo, hi, points))
}
