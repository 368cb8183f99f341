//! Shooting-method eigenvalues for Cases I and II.
//!
//! Both ends start on the decaying asymptotic branch and are integrated
//! toward an interior matching point. The mismatch is the Wronskian of the
//! two unit-normalized solutions, i.e. the sine of their Prüfer angle
//! difference. It is continuous in E and changes sign at every eigenvalue.

use crate::fields::{lambdas, CaseId, PhysicalParams};
use crate::spectrum::energy_levels;

use super::ode::{integrate_linear, StepperOptions};
use super::VerifyError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    pub stepper: StepperOptions,
    /// Bisection stops once the bracket is this narrow relative to |E|.
    pub energy_rel_tol: f64,
    pub max_bisections: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            stepper: StepperOptions::default(),
            energy_rel_tol: 1e-10,
            max_bisections: 200,
        }
    }
}

/// Integration layout at one trial energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingSetup {
    pub x_left: f64,
    pub x_match: f64,
    pub x_right: f64,
    pub left_state: [f64; 2],
    pub right_state: [f64; 2],
    /// Wavenumber used to weigh φ' against φ.
    pub k: f64,
}

fn not_bound(case: CaseId, energy: f64, why: &str) -> VerifyError {
    VerifyError::NotBound(format!("case {case} at E = {energy}: {why}"))
}

pub fn shooting_setup(case: CaseId, params: &PhysicalParams, n: u32, energy: f64) -> Result<ShootingSetup, VerifyError> {
    let l = lambdas(params, energy);
    let alpha = params.alpha;
    let nf = n as f64;
    if l.tilde_lambda0 >= 0.0 {
        return Err(not_bound(case, energy, "lambda0 >= 0, no decay at large x2"));
    }
    let gamma0 = (-l.tilde_lambda0).sqrt();
    match case {
        CaseId::I => {
            if l.tilde_lambda2 >= 0.0 {
                return Err(not_bound(case, energy, "lambda2 >= 0, no decay at negative x2"));
            }
            let gamma2 = (-l.tilde_lambda2).sqrt();
            let t_star = l.lambda1 / (2.0 * l.lambda2.abs());
            // φ ~ exp(−γ₂t) t^p for large t
            let p = l.tilde_lambda1 / (2.0 * gamma2) - 0.5;
            let gt_star = if t_star > 0.0 { gamma2 * t_star } else { 0.0 };
            let t_left = (40.0f64).max(2.0 * gt_star + 30.0).max(4.0 * nf + 40.0) / gamma2;
            let x_left = -t_left.ln() / alpha;
            let x_match = if t_star > 0.0 && t_star.is_finite() {
                (-t_star.ln() / alpha).max(x_left + 1.0 / alpha)
            } else {
                x_left + 1.0 / alpha
            };
            let x_right = x_match.max(0.0) + (30.0 + 2.0 * nf) / (alpha * gamma0) + 10.0 / alpha;
            let s_match = (-alpha * x_match).exp();
            let k = l.coupling_scale(s_match).sqrt().max(alpha * gamma0).max(alpha);
            Ok(ShootingSetup {
                x_left,
                x_match,
                x_right,
                left_state: [1.0, alpha * (gamma2 * t_left - p)],
                right_state: [1.0, -alpha * gamma0],
                k,
            })
        }
        CaseId::II => {
            let inner = 0.25 - l.tilde_lambda2;
            if inner < 0.0 {
                return Err(not_bound(case, energy, "1/4 - lambda2~ < 0, fall to the centre"));
            }
            let gamma2 = -0.5 + inner.sqrt();
            let big_n = l.tilde_lambda1 / (2.0 * gamma0);
            let x_left = 1e-6 / (alpha * gamma0);
            let x_match = (gamma2 + 1.0) / (alpha * gamma0);
            let x_right = (30.0f64).max(4.0 * big_n + 20.0).max(4.0 * nf + 30.0) / (alpha * gamma0);
            let t_right = alpha * x_right;
            Ok(ShootingSetup {
                x_left,
                x_match,
                x_right: x_right.max(2.0 * x_match),
                left_state: [1.0, (gamma2 + 1.0) / x_left],
                right_state: [1.0, alpha * (-gamma0 + big_n / t_right)],
                k: alpha * gamma0,
            })
        }
        _ => Err(VerifyError::UnsupportedCase(case)),
    }
}

/// Normalized Wronskian mismatch at trial energy `energy`.
pub fn matching_function(
    case: CaseId,
    params: &PhysicalParams,
    n: u32,
    energy: f64,
    opts: &StepperOptions,
) -> Result<f64, VerifyError> {
    let setup = shooting_setup(case, params, n, energy)?;
    let l = lambdas(params, energy);
    let alpha = params.alpha;
    let w = |x: f64| l.coupling(case.profile(alpha, x));
    let left = integrate_linear(w, setup.x_left, setup.x_match, setup.left_state, setup.k, opts)?;
    let right = integrate_linear(w, setup.x_right, setup.x_match, setup.right_state, setup.k, opts)?;
    Ok((left[0] * right[1] - left[1] * right[0]) / setup.k)
}

/// Eigenvalue of Case I or II inside `bracket`, by bisection on the
/// matching function.
pub fn shoot_eigenvalue(case: CaseId, params: &PhysicalParams, n: u32, bracket: (f64, f64)) -> Result<f64, VerifyError> {
    shoot_eigenvalue_with(case, params, n, bracket, &ShootOptions::default())
}

pub fn shoot_eigenvalue_with(
    case: CaseId,
    params: &PhysicalParams,
    n: u32,
    bracket: (f64, f64),
    opts: &ShootOptions,
) -> Result<f64, VerifyError> {
    if !case.is_kummer() {
        return Err(VerifyError::UnsupportedCase(case));
    }
    params.validate().map_err(|e| VerifyError::NotBound(e.to_string()))?;
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let mismatch = |e: f64| matching_function(case, params, n, e, &opts.stepper);
    if lo == hi {
        return Err(VerifyError::NoSignChange { lo, hi });
    }
    let mut f_lo = mismatch(lo)?;
    let f_hi = mismatch(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(VerifyError::NoSignChange { lo, hi });
    }
    for _ in 0..opts.max_bisections {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= opts.energy_rel_tol * mid.abs() || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = mismatch(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A bracket around `energy` that excludes every other valid closed-form
/// level of nearby n, clipped to the bound-state window |E| < M.
pub fn closed_form_bracket(case: CaseId, params: &PhysicalParams, n: u32, energy: f64) -> (f64, f64) {
    let mut others = Vec::new();
    for k in 0..=n + 5 {
        if let Ok(level) = energy_levels(case, params, k) {
            for (e, _) in level.valid_branches() {
                if e.to_bits() != energy.to_bits() {
                    others.push(e);
                }
            }
        }
    }
    let mass = params.mass_shell().sqrt();
    let gap = others.iter().map(|e| (e - energy).abs()).fold(f64::INFINITY, f64::min);
    let half = if gap.is_finite() { 0.4 * gap } else { 0.1 * mass.max(energy.abs()) };
    let edge = mass * (1.0 - 1e-9);
    ((energy - half).max(-edge), (energy + half).min(edge))
}

/// Sub-intervals of `[e_lo, e_hi]` where the matching function changes sign,
/// found on a uniform scan. Energies where the setup fails are skipped.
pub fn scan_brackets(
    case: CaseId,
    params: &PhysicalParams,
    n: u32,
    range: (f64, f64),
    samples: usize,
) -> Vec<(f64, f64)> {
    let opts = StepperOptions::default();
    let samples = samples.max(2);
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..samples {
        let e = range.0 + (range.1 - range.0) * i as f64 / (samples - 1) as f64;
        let Ok(v) = matching_function(case, params, n, e, &opts) else {
            prev = None;
            continue;
        };
        if let Some((pe, pv)) = prev {
            if (pv > 0.0) != (v > 0.0) {
                out.push((pe, e));
            }
        }
        prev = Some((e, v));
    }
    out
}
