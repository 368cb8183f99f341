//! Bound-state wavefunctions φ(x₂).
//!
//! The full solution is `Ψ = exp(i(p₁x₁ + p₃x₃ − Et)) φ(x₂)`; only the
//! transverse factor φ is materialized here. Case I/II wavefunctions are
//! Kummer polynomials times exponential and power prefactors, Case III/IV
//! wavefunctions are `√x₂ · J_ν(·)` up to the undetermined constant, which is
//! carried as `norm_constant`.

use serde::Serialize;
use thiserror::Error;

use crate::fields::{lambdas, CaseId, PhysicalParams};
use crate::quad::{integrate, QuadError, QuadOptions};
use crate::specfun::{bessel_j, kummer_1f1, ln_gamma, SpecfunError};
use crate::spectrum::{energy_levels, GammaParams, SpectrumError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("x2 = {x2} is outside the domain of case {case}")]
    Domain { case: CaseId, x2: f64 },
    #[error("level n = {n} of case {case} has no valid {branch:?} branch")]
    InvalidLevel { case: CaseId, n: u32, branch: Branch },
    #[error("case {case} is not evaluated by {routine}")]
    WrongFamily { case: CaseId, routine: &'static str },
    #[error("Bessel argument needs {what} > 0, got {value}")]
    Reality { what: &'static str, value: f64 },
    #[error("non-normalizable: ∫|φ|² diverges for case {case}, n = {n}")]
    NonNormalizable { case: CaseId, n: u32 },
}

/// Which closed-form branch to build from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenfunction {
    pub case: CaseId,
    pub n: u32,
    pub params: PhysicalParams,
    pub energy: f64,
    pub gammas: GammaParams,
    pub norm_constant: f64,
}

impl Eigenfunction {
    /// Builds the eigenfunction of a validated level, unnormalized.
    pub fn new(case: CaseId, params: &PhysicalParams, n: u32, branch: Branch) -> Result<Self, EigenError> {
        let level = energy_levels(case, params, n)?;
        let picked = match branch {
            Branch::Plus if level.valid_plus => level.gammas_plus.map(|g| (level.e_plus, g)),
            Branch::Minus if level.valid_minus => level.e_minus.zip(level.gammas_minus),
            _ => None,
        };
        let (energy, gammas) = picked.ok_or(EigenError::InvalidLevel { case, n, branch })?;
        Ok(Self {
            case,
            n,
            params: *params,
            energy,
            gammas,
            norm_constant: 1.0,
        })
    }

    /// First valid branch of level n, plus before minus.
    pub fn first_valid(case: CaseId, params: &PhysicalParams, n: u32) -> Result<Self, EigenError> {
        Self::new(case, params, n, Branch::Plus).or_else(|_| Self::new(case, params, n, Branch::Minus))
    }

    /// Assembles an eigenfunction without checking the quantization rule.
    /// Meant for oracles that need off-shell or hand-picked exponents.
    pub fn from_parts_unchecked(
        case: CaseId,
        n: u32,
        params: PhysicalParams,
        energy: f64,
        gammas: GammaParams,
    ) -> Self {
        Self {
            case,
            n,
            params,
            energy,
            gammas,
            norm_constant: 1.0,
        }
    }

    pub fn with_norm_constant(&self, norm_constant: f64) -> Self {
        Self {
            norm_constant,
            ..*self
        }
    }

    pub fn eval(&self, x2: f64) -> Result<f64, EigenError> {
        if self.case.is_kummer() {
            phi_kummer(self, x2)
        } else {
            phi_bessel(self, x2)
        }
    }

    pub fn sample(&self, xs: &[f64]) -> Result<Vec<f64>, EigenError> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    pub fn normalize(&self) -> Result<Self, EigenError> {
        normalize(self)
    }
}

fn kummer_gammas(ef: &Eigenfunction) -> Result<(f64, f64), EigenError> {
    match ef.gammas {
        GammaParams::Kummer { gamma0, gamma2, .. } => Ok((gamma0, gamma2)),
        GammaParams::Bessel { .. } => Err(EigenError::WrongFamily {
            case: ef.case,
            routine: "phi_kummer",
        }),
    }
}

/// Case I and II wavefunctions.
pub fn phi_kummer(ef: &Eigenfunction, x2: f64) -> Result<f64, EigenError> {
    if !ef.case.is_kummer() {
        return Err(EigenError::WrongFamily {
            case: ef.case,
            routine: "phi_kummer",
        });
    }
    if !ef.case.in_domain(x2) {
        return Err(EigenError::Domain { case: ef.case, x2 });
    }
    let (gamma0, gamma2) = kummer_gammas(ef)?;
    let alpha = ef.params.alpha;
    let a = -(ef.n as f64);
    // every exponential and the gamma normalization go into one exponent
    let (log_prefactor, b, z) = match ef.case {
        CaseId::I => {
            let t = (-alpha * x2).exp();
            let b = 2.0 * gamma0 + 1.0;
            (-gamma2 * t - gamma0 * alpha * x2 - ln_gamma(b)?, b, 2.0 * gamma2 * t)
        }
        _ => {
            let t = alpha * x2;
            let b = 2.0 * (gamma2 + 1.0);
            (-gamma0 * t + (gamma2 + 1.0) * t.ln() - ln_gamma(b)?, b, 2.0 * gamma0 * t)
        }
    };
    // the polynomial grows at most like z^n
    let poly_log_bound = ef.n as f64 * z.abs().max(1.0).ln();
    if log_prefactor == f64::NEG_INFINITY || log_prefactor + poly_log_bound < -745.0 {
        return Ok(0.0);
    }
    let poly = kummer_1f1(a, b, z)?;
    Ok(ef.norm_constant * log_prefactor.exp() * poly)
}

/// Order and argument of the Bessel factor at `x2`.
fn bessel_order_and_arg(ef: &Eigenfunction, x2: f64) -> Result<(f64, f64), EigenError> {
    let l = lambdas(&ef.params, ef.energy);
    let n = ef.n as f64;
    let a2 = ef.params.alpha * ef.params.alpha;
    let need = |what: &'static str, value: f64| {
        if value > 0.0 {
            Ok(value.sqrt())
        } else {
            Err(EigenError::Reality { what, value })
        }
    };
    Ok(match ef.case {
        CaseId::IIIa => (n - 0.5, need("lambda2", l.lambda2)? / (a2 * x2)),
        CaseId::IIIb => (n - 1.0, 4.0 * need("lambda2", l.lambda2)? / (a2 * x2)),
        CaseId::IVa => (n - 0.5, need("lambda0", l.lambda0)? * x2),
        CaseId::IVb => (n - 1.0, need("lambda0", l.lambda0)? * x2),
        _ => {
            return Err(EigenError::WrongFamily {
                case: ef.case,
                routine: "phi_bessel",
            })
        }
    })
}

/// Case III and IV wavefunctions.
pub fn phi_bessel(ef: &Eigenfunction, x2: f64) -> Result<f64, EigenError> {
    if ef.case.is_kummer() {
        return Err(EigenError::WrongFamily {
            case: ef.case,
            routine: "phi_bessel",
        });
    }
    if !ef.case.in_domain(x2) {
        return Err(EigenError::Domain { case: ef.case, x2 });
    }
    let (order, arg) = bessel_order_and_arg(ef, x2)?;
    Ok(ef.norm_constant * x2.sqrt() * bessel_j(order, arg)?)
}

/// Number of strict sign changes in a sampled function. Exact zeros are
/// skipped.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

const TAIL_REL_TOL: f64 = 1e-14;
const MAX_PANELS: usize = 200;
const DIVERGENCE_RUN: usize = 6;

/// Rough centre and width of the region where φ lives, used to seed the
/// panel walk.
fn core_region(ef: &Eigenfunction) -> Result<(f64, f64), EigenError> {
    let alpha = ef.params.alpha;
    let probe: Vec<f64> = match ef.case {
        CaseId::I => {
            let (gamma0, gamma2) = kummer_gammas(ef)?;
            let lo = -(200.0 / gamma2.max(1e-3)).ln() / alpha;
            let hi = (40.0 / gamma0.max(1e-3)).max(1.0) / alpha;
            (0..=800).map(|i| lo + (hi - lo) * i as f64 / 800.0).collect()
        }
        _ => (0..=800)
            .map(|i| 10f64.powf(-6.0 + 12.0 * i as f64 / 800.0) / alpha)
            .collect(),
    };
    let mut best = (probe[0], 0.0f64);
    for &x in &probe {
        let v = ef.eval(x)?.abs();
        if v > best.1 {
            best = (x, v);
        }
    }
    let width = match ef.case {
        CaseId::I => 1.0 / alpha,
        _ => best.0,
    };
    Ok((best.0, width))
}

fn panel_opts(scale: f64) -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-16 * scale,
        rel_tol: 1e-13,
        max_subdivisions: 20_000,
    }
}

/// Walks panels away from `start` in one direction until the contributions
/// die off (Ok(sum)) or stop shrinking (Err).
fn tail_integral<F>(mut density: F, start: f64, mut panel: impl FnMut(f64, usize) -> f64, scale: f64) -> Result<Option<f64>, EigenError>
where
    F: FnMut(f64) -> f64,
{
    let mut sum = 0.0;
    let mut prev_piece = f64::INFINITY;
    let mut growing_run = 0;
    let mut quiet_run = 0;
    let mut edge = start;
    for k in 0..MAX_PANELS {
        let next = panel(edge, k);
        let piece = integrate(&mut density, edge.min(next), edge.max(next), &panel_opts(scale + sum))?.value;
        sum += piece;
        edge = next;
        if piece <= TAIL_REL_TOL * (scale + sum) {
            quiet_run += 1;
            if quiet_run >= 2 {
                return Ok(Some(sum));
            }
        } else {
            quiet_run = 0;
        }
        if piece >= 0.9 * prev_piece && piece > TAIL_REL_TOL * (scale + sum) {
            growing_run += 1;
            if growing_run >= DIVERGENCE_RUN {
                return Ok(None);
            }
        } else {
            growing_run = 0;
        }
        prev_piece = piece;
        if edge == 0.0 || !edge.is_finite() {
            return Ok(Some(sum));
        }
    }
    Ok(None)
}

/// ∫|φ|² over the case domain, or `None` when the integral diverges.
pub fn norm_squared(ef: &Eigenfunction) -> Result<Option<f64>, EigenError> {
    let (centre, width) = core_region(ef)?;
    let mut err = None;
    let mut density = |x: f64| match ef.eval(x) {
        Ok(v) => v * v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    };
    let (lo, hi) = match ef.case {
        CaseId::I => (centre - width, centre + width),
        _ => (0.5 * centre, 2.0 * centre),
    };
    let core = integrate(&mut density, lo, hi, &panel_opts(0.0))?.value;
    let (upper, lower) = match ef.case {
        CaseId::I => {
            let up = tail_integral(&mut density, hi, |e, k| e + width * 2f64.powi(k as i32), core)?;
            let down = tail_integral(&mut density, lo, |e, k| e - width * 2f64.powi(k as i32), core)?;
            (up, down)
        }
        _ => {
            let up = tail_integral(&mut density, hi, |e, _| 2.0 * e, core)?;
            let down = tail_integral(&mut density, lo, |e, _| 0.5 * e, core)?;
            (up, down)
        }
    };
    if let Some(e) = err {
        return Err(e);
    }
    Ok(match (upper, lower) {
        (Some(u), Some(d)) => Some(core + u + d),
        _ => None,
    })
}

/// Rescales `ef` so that ∫|φ|² dx₂ = 1 over its domain.
pub fn normalize(ef: &Eigenfunction) -> Result<Eigenfunction, EigenError> {
    let base = ef.with_norm_constant(1.0);
    match norm_squared(&base)? {
        Some(total) if total > 0.0 && total.is_finite() => Ok(base.with_norm_constant(total.sqrt().recip())),
        _ => Err(EigenError::NonNormalizable { case: ef.case, n: ef.n }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma_fn;

    fn case_i_params() -> PhysicalParams {
        PhysicalParams {
            q: 1.0,
            m: 1.0,
            p1: 2.0,
            p3: 0.0,
            alpha: 1.0,
            beta0: 0.0,
            beta1: 1.0,
        }
    }

    fn hand_kummer(case: CaseId, n: u32, gamma0: f64, gamma2: f64) -> Eigenfunction {
        Eigenfunction::from_parts_unchecked(
            case,
            n,
            case_i_params(),
            0.0,
            GammaParams::Kummer {
                gamma0,
                gamma1_sq: 0.0,
                gamma2,
            },
        )
    }

    #[test]
    fn case_i_ground_state_closed_form() {
        let ef = hand_kummer(CaseId::I, 0, 1.5, 1.0);
        for &x in &[-2.0f64, 0.0, 0.7, 3.0] {
            let t = (-x).exp();
            let expect = (-t).exp() * (-1.5 * x).exp() / gamma_fn(4.0).unwrap();
            let got = phi_kummer(&ef, x).unwrap();
            assert!((got - expect).abs() <= 1e-14 * expect.abs());
        }
    }

    #[test]
    fn case_i_first_excited_at_origin() {
        // e^{-1} 1F1(-1; 4; 2)/Γ(4) = e^{-1} (1/2)/6
        let ef = hand_kummer(CaseId::I, 1, 1.5, 1.0);
        let expect = (-1.0f64).exp() * 0.5 / 6.0;
        assert!((phi_kummer(&ef, 0.0).unwrap() - expect).abs() < 1e-16);
    }

    #[test]
    fn case_ii_vanishes_at_origin() {
        let ef = hand_kummer(CaseId::II, 0, 0.8, 0.3);
        let v = phi_kummer(&ef, 1e-12).unwrap();
        assert!(v.abs() < 1e-15);
        assert!(phi_kummer(&ef, 0.0).is_err());
    }

    #[test]
    fn case_i_far_left_underflows_to_zero() {
        let ef = hand_kummer(CaseId::I, 3, 1.5, 1.0);
        assert_eq!(phi_kummer(&ef, -800.0).unwrap(), 0.0);
        assert!(phi_kummer(&ef, 400.0).unwrap().abs() < 1e-250);
    }

    #[test]
    fn family_mismatch() {
        let ef = hand_kummer(CaseId::I, 0, 1.5, 1.0);
        assert!(matches!(phi_bessel(&ef, 1.0), Err(EigenError::WrongFamily { .. })));
    }

    #[test]
    fn ivb_ground_behaves_like_sqrt_x() {
        let p = PhysicalParams {
            q: 1.0,
            m: 0.01,
            p1: 0.0,
            p3: 0.0,
            alpha: 2.0,
            beta0: 1.0,
            beta1: 1.0,
        };
        let ef = Eigenfunction::new(CaseId::IVb, &p, 1, Branch::Plus).unwrap();
        let x = 1e-8;
        assert!((phi_bessel(&ef, x).unwrap() / x.sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn iva_first_level_matches_sine_form() {
        // λ₀ = 1 picked by hand: √x J_{1/2}(x) at x = π/2 is √(π/2)·2/π
        let p = PhysicalParams {
            q: 1.0,
            m: 0.0,
            p1: 0.0,
            p3: 0.0,
            alpha: 1.0,
            beta0: 1.0,
            beta1: 1.0,
        };
        let ef = Eigenfunction::from_parts_unchecked(CaseId::IVa, 1, p, 1.0, GammaParams::Bessel { gamma1: 0.0 });
        let x = std::f64::consts::FRAC_PI_2;
        let expect = x.sqrt() * 2.0 / std::f64::consts::PI;
        assert!((phi_bessel(&ef, x).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn iiia_large_x_limits() {
        // n = 1 tends to a constant, n = 2 decays like 1/x
        let p = PhysicalParams {
            q: 1.0,
            m: 0.0,
            p1: 0.0,
            p3: 0.0,
            alpha: 1.0,
            beta0: 2.0,
            beta1: 1.0,
        };
        let lam2 = 3.0f64;
        let c = lam2.sqrt();
        let ef1 = Eigenfunction::from_parts_unchecked(CaseId::IIIa, 1, p, 0.0, GammaParams::Bessel { gamma1: 1.0 });
        let limit = (2.0 * c / std::f64::consts::PI).sqrt();
        assert!((phi_bessel(&ef1, 1e6).unwrap() - limit).abs() < 1e-6);
        let ef2 = Eigenfunction::from_parts_unchecked(CaseId::IIIa, 2, p, 0.0, GammaParams::Bessel { gamma1: 2.0 });
        assert!(phi_bessel(&ef2, 1e6).unwrap().abs() < 1e-5);
    }

    #[test]
    fn sign_changes() {
        assert_eq!(count_sign_changes(&[1.0, 0.0, -1.0, -2.0, 0.0, 3.0]), 2);
        assert_eq!(count_sign_changes(&[0.0, 0.0]), 0);
    }

    #[test]
    fn normalize_case_i_ground() {
        let ef = hand_kummer(CaseId::I, 0, 1.5, 1.0);
        let normed = normalize(&ef).unwrap();
        let r = integrate(
            |x| normed.eval(x).unwrap().powi(2),
            -20.0,
            40.0,
            &QuadOptions::tol(1e-14, 1e-13),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn normalize_is_scale_free() {
        let ef = hand_kummer(CaseId::II, 2, 0.6, 0.4);
        let a = normalize(&ef).unwrap();
        let b = normalize(&ef.with_norm_constant(2.0)).unwrap();
        for &x in &[0.3, 1.0, 4.0, 9.0] {
            assert_eq!(a.eval(x).unwrap(), b.eval(x).unwrap());
        }
    }

    #[test]
    fn iva_is_not_normalizable() {
        let p = PhysicalParams {
            q: 1.0,
            m: 0.3,
            p1: 0.5,
            p3: 0.0,
            alpha: 1.0,
            beta0: 1.0,
            beta1: 1.0,
        };
        for n in 2..4 {
            let ef = Eigenfunction::new(CaseId::IVa, &p, n, Branch::Plus).unwrap();
            assert!(matches!(normalize(&ef), Err(EigenError::NonNormalizable { .. })));
        }
    }
}
