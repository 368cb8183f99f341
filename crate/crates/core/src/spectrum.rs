//! Closed-form bound-state energies for the six field profiles.
//!
//! Every closed form gives one or two candidate energies. A candidate is only
//! marked valid after a round trip: recompute the couplings at that energy,
//! rebuild the γ exponents, and check the quantization rule of the case plus
//! the side conditions the reduction needs. Invalid branches are kept in the
//! result with a note explaining why.

use serde::Serialize;
use thiserror::Error;

use crate::fields::{lambdas, CaseId, FieldsError, Lambdas, PhysicalParams};

/// Largest |quantization residual| accepted for a valid branch.
pub const QUANTIZATION_TOL: f64 = 1e-10;
/// Case III on-shell tolerance, relative to p₁² + p₃² + m².
pub const ON_SHELL_TOL: f64 = 1e-8;
/// Case IV tolerance on |β₀² − β₁²| / max(β₀², β₁²).
pub const NULL_COUPLING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Fields(#[from] FieldsError),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("division by zero: {0}")]
    Division(String),
    #[error("complex exponent: {0}")]
    Reality(String),
    #[error("quantum number n = {n} is not admissible for case {case}")]
    QuantumNumber { case: CaseId, n: u32 },
}

/// Exponents of the substitution φ = t^γ f(t).
///
/// For the Kummer cases the couplings fix γ₀ and γ₂ (both real and
/// nonnegative at a bound state) and γ₁² = −λ̃₁. At a bound state λ̃₁ > 0, so
/// γ₁ itself is imaginary; the quantization rules only ever use γ₁², which
/// is what gets stored. The Bessel cases have a single active exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaParams {
    Kummer { gamma0: f64, gamma1_sq: f64, gamma2: f64 },
    Bessel { gamma1: f64 },
}

impl GammaParams {
    /// (γ₀, γ₁ or γ₁², γ₂) for tabular output. Bessel cases report zeros
    /// for the inactive slots.
    pub fn columns(&self) -> [f64; 3] {
        match *self {
            GammaParams::Kummer {
                gamma0,
                gamma1_sq,
                gamma2,
            } => [gamma0, gamma1_sq, gamma2],
            GammaParams::Bessel { gamma1 } => [0.0, gamma1, 0.0],
        }
    }
}

/// Exponents at given couplings.
pub fn gammas_from_lambdas(case: CaseId, l: &Lambdas) -> Result<GammaParams, SpectrumError> {
    let sqrt_nonneg = |v: f64, what: &str| {
        if v >= 0.0 {
            Ok(v.sqrt())
        } else {
            Err(SpectrumError::Reality(format!("{what} = {v} < 0")))
        }
    };
    match case {
        CaseId::I => Ok(GammaParams::Kummer {
            gamma0: sqrt_nonneg(-l.tilde_lambda0, "-λ̃₀")?,
            gamma1_sq: -l.tilde_lambda1,
            gamma2: sqrt_nonneg(-l.tilde_lambda2, "-λ̃₂")?,
        }),
        CaseId::II => Ok(GammaParams::Kummer {
            gamma0: sqrt_nonneg(-l.tilde_lambda0, "-λ̃₀")?,
            gamma1_sq: -l.tilde_lambda1,
            gamma2: -0.5 + sqrt_nonneg(0.25 - l.tilde_lambda2, "1/4 - λ̃₂")?,
        }),
        // λ̃₁ = -γ(γ + m₁ - 1) with γ = -γ₁, solved for the root that the
        // quantization rule selects
        CaseId::IIIa => Ok(GammaParams::Bessel {
            gamma1: 0.5 + sqrt_nonneg(0.25 - l.tilde_lambda1, "1/4 - λ̃₁")?,
        }),
        CaseId::IIIb => Ok(GammaParams::Bessel {
            gamma1: 0.25 + sqrt_nonneg(0.0625 - l.tilde_lambda1, "1/16 - λ̃₁")?,
        }),
        CaseId::IVa => Ok(GammaParams::Bessel {
            gamma1: -0.5 + sqrt_nonneg(0.25 - l.tilde_lambda1, "1/4 - λ̃₁")?,
        }),
        CaseId::IVb => Ok(GammaParams::Bessel {
            gamma1: -0.25 + sqrt_nonneg(0.0625 - l.tilde_lambda1, "1/16 - λ̃₁")?,
        }),
    }
}

/// Exponents at energy `energy`.
pub fn gamma_params(case: CaseId, params: &PhysicalParams, energy: f64) -> Result<GammaParams, SpectrumError> {
    gammas_from_lambdas(case, &lambdas(params, energy))
}

/// Left-hand side of the case's quantization rule minus n.
///
/// Returns NaN when the exponents do not belong to the case family.
pub fn quantization_residual(case: CaseId, n: u32, gammas: &GammaParams) -> f64 {
    let n = n as f64;
    match (case, *gammas) {
        (
            CaseId::I,
            GammaParams::Kummer {
                gamma0,
                gamma1_sq,
                gamma2,
            },
        ) => -gamma1_sq / (2.0 * gamma2) - (2.0 * gamma0 + 1.0) / 2.0 - n,
        (
            CaseId::II,
            GammaParams::Kummer {
                gamma0,
                gamma1_sq,
                gamma2,
            },
        ) => -gamma1_sq / (2.0 * gamma0) - (gamma2 + 1.0) - n,
        (CaseId::IIIa, GammaParams::Bessel { gamma1 }) => gamma1 - n,
        (CaseId::IIIb, GammaParams::Bessel { gamma1 }) => 2.0 * gamma1 + 0.5 - n,
        (CaseId::IVa, GammaParams::Bessel { gamma1 }) => gamma1 + 1.0 - n,
        (CaseId::IVb, GammaParams::Bessel { gamma1 }) => 2.0 * gamma1 + 1.5 - n,
        _ => f64::NAN,
    }
}

/// Per-case combinations that enter the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseDerived {
    /// β₀/β₁ (NaN when β₁ = 0).
    pub kappa: f64,
    /// Λ of the Kummer closed forms; NaN for the Bessel cases.
    pub big_lambda: f64,
    /// p₁² + p₃² + m².
    pub mass_shell: f64,
}

pub fn case_derived(case: CaseId, params: &PhysicalParams, n: u32) -> CaseDerived {
    let kappa = if params.beta1 != 0.0 {
        params.beta0 / params.beta1
    } else {
        f64::NAN
    };
    let nf = n as f64;
    let big_lambda = match case {
        CaseId::I => params.alpha * (nf + 0.5) * (1.0 - kappa * kappa).sqrt() - params.p1,
        CaseId::II => {
            let (_, b1) = params.beta_prime(case);
            let q = params.q;
            nf + 0.5 + (0.25 + q * q * b1 * b1 * (1.0 - kappa * kappa)).sqrt()
        }
        _ => f64::NAN,
    };
    CaseDerived {
        kappa,
        big_lambda,
        mass_shell: params.mass_shell(),
    }
}

/// Both candidate energies from the closed form of `case`. The Bessel cases
/// have a single energy, returned as `(e, None)`. A negative discriminant
/// gives NaN energies rather than an error.
pub fn closed_form_energies(
    case: CaseId,
    params: &PhysicalParams,
    n: u32,
) -> Result<(f64, Option<f64>), SpectrumError> {
    params.validate()?;
    if n < case.min_n() {
        return Err(SpectrumError::QuantumNumber { case, n });
    }
    let nf = n as f64;
    let q = params.q;
    let m2 = params.mass_shell();
    match case {
        CaseId::I => {
            if params.beta1 == 0.0 {
                return Err(SpectrumError::Constraint("case I needs beta1 != 0".into()));
            }
            let d = case_derived(case, params, n);
            if d.kappa.abs() >= 1.0 {
                return Err(SpectrumError::Constraint(format!(
                    "case I needs |kappa| < 1, got kappa = {}",
                    d.kappa
                )));
            }
            let (k, big_l) = (d.kappa, d.big_lambda);
            let disc = (k * k - 1.0) * (big_l * big_l - m2);
            let root = if disc >= 0.0 { disc.sqrt() } else { f64::NAN };
            Ok((-k * big_l + root, Some(-k * big_l - root)))
        }
        CaseId::II => {
            let (b0, b1) = params.beta_prime(case);
            let inner = 0.25 + q * q * (b1 * b1 - b0 * b0);
            if inner < 0.0 {
                return Err(SpectrumError::Reality(format!(
                    "1/4 + q²(β′₁² − β′₀²) = {inner} < 0"
                )));
            }
            // κβ′₁ = β′₀, written out so β₁ = 0 needs no special case
            let big_l = nf + 0.5 + inner.sqrt();
            let qb0_sq = q * q * b0 * b0;
            let den = big_l * big_l + qb0_sq;
            let rad = m2 * (big_l * big_l + qb0_sq) - q * q * b1 * b1 * params.p1 * params.p1;
            let root = if rad >= 0.0 { big_l * rad.sqrt() } else { f64::NAN };
            let centre = q * q * b0 * b1 * params.p1;
            Ok(((centre + root) / den, Some((centre - root) / den)))
        }
        CaseId::IIIa | CaseId::IVa => {
            let (b0, b1) = bessel_beta_primes(case, params)?;
            Ok(((2.0 * q * b1 * params.p1 + nf * (nf - 1.0)) / (2.0 * q * b0), None))
        }
        CaseId::IIIb | CaseId::IVb => {
            let (b0, b1) = bessel_beta_primes(case, params)?;
            let shift = (nf - 1.0) * (nf - 1.0) - 0.25;
            Ok(((2.0 * q * b1 * params.p1 + shift) / (2.0 * q * b0), None))
        }
    }
}

fn bessel_beta_primes(case: CaseId, params: &PhysicalParams) -> Result<(f64, f64), SpectrumError> {
    let (b0, b1) = params.beta_prime(case);
    if b0 == 0.0 || params.q == 0.0 {
        return Err(SpectrumError::Division(format!(
            "case {case} needs q·β′₀ != 0"
        )));
    }
    Ok((b0, b1))
}

/// Outcome of validating one candidate energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchCheck {
    pub valid: bool,
    pub gammas: Option<GammaParams>,
    pub residual: f64,
    pub notes: Vec<String>,
}

/// Round-trip validation of a single energy.
pub fn check_branch(case: CaseId, params: &PhysicalParams, n: u32, energy: f64) -> BranchCheck {
    let mut notes = Vec::new();
    if !energy.is_finite() {
        notes.push("no real energy".to_string());
        return BranchCheck {
            valid: false,
            gammas: None,
            residual: f64::NAN,
            notes,
        };
    }
    let l = lambdas(params, energy);
    let gammas = match gammas_from_lambdas(case, &l) {
        Ok(g) => g,
        Err(e) => {
            notes.push(e.to_string());
            return BranchCheck {
                valid: false,
                gammas: None,
                residual: f64::NAN,
                notes,
            };
        }
    };
    let residual = quantization_residual(case, n, &gammas);
    let mut valid = residual.abs() <= QUANTIZATION_TOL;
    if !valid {
        notes.push(format!("quantization residual {residual:.3e}"));
    }

    match (case, gammas) {
        (CaseId::I, GammaParams::Kummer { gamma0, gamma2, .. }) => {
            if !(gamma0 > 0.0 && gamma2 > 0.0) {
                valid = false;
                notes.push(format!("not bound: gamma0 = {gamma0}, gamma2 = {gamma2}"));
            }
            let d = case_derived(case, params, n);
            let sign = d.kappa * energy + d.big_lambda;
            if sign > 0.0 {
                valid = false;
                notes.push(format!("kappa*E + Lambda = {sign:.3e} > 0"));
            }
        }
        (CaseId::II, GammaParams::Kummer { gamma0, .. }) => {
            if !(gamma0 > 0.0) {
                valid = false;
                notes.push(format!("not bound: gamma0 = {gamma0}"));
            }
        }
        (CaseId::IIIa | CaseId::IIIb, _) => {
            let tol = ON_SHELL_TOL * params.mass_shell();
            if l.lambda0.abs() > tol {
                valid = false;
                notes.push(format!(
                    "off shell: |lambda0| = {:.3e} > {:.3e}",
                    l.lambda0.abs(),
                    tol
                ));
            }
            if !(l.lambda2 > 0.0) {
                valid = false;
                notes.push(format!("lambda2 = {} must be > 0 (needs beta0² > beta1²)", l.lambda2));
            }
        }
        (CaseId::IVa | CaseId::IVb, _) => {
            let b0sq = params.beta0 * params.beta0;
            let b1sq = params.beta1 * params.beta1;
            let mismatch = (b0sq - b1sq).abs() / b0sq.max(b1sq);
            if !(mismatch <= NULL_COUPLING_TOL) {
                valid = false;
                notes.push(format!("lambda2 != 0: |b0²-b1²|/max = {mismatch:.3e}"));
            }
            if !(l.lambda0 > 0.0) {
                valid = false;
                notes.push(format!("lambda0 = {:.3e} must be > 0", l.lambda0));
            }
        }
        _ => {}
    }
    BranchCheck {
        valid,
        gammas: Some(gammas),
        residual,
        notes,
    }
}

/// Energies of level `n` with validity flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyResult {
    pub case: CaseId,
    pub n: u32,
    pub e_plus: f64,
    pub e_minus: Option<f64>,
    pub valid_plus: bool,
    pub valid_minus: bool,
    pub gammas_plus: Option<GammaParams>,
    pub gammas_minus: Option<GammaParams>,
    pub residual_plus: f64,
    pub residual_minus: Option<f64>,
    pub diagnostics: Vec<String>,
}

impl EnergyResult {
    pub fn any_valid(&self) -> bool {
        self.valid_plus || self.valid_minus
    }

    /// Valid energies with their exponents, plus branch first.
    pub fn valid_branches(&self) -> Vec<(f64, GammaParams)> {
        let mut out = Vec::new();
        if self.valid_plus {
            if let Some(g) = self.gammas_plus {
                out.push((self.e_plus, g));
            }
        }
        if self.valid_minus {
            if let (Some(e), Some(g)) = (self.e_minus, self.gammas_minus) {
                out.push((e, g));
            }
        }
        out
    }
}

/// Level `n` of `case`: closed form, then round-trip validation per branch.
pub fn energy_levels(case: CaseId, params: &PhysicalParams, n: u32) -> Result<EnergyResult, SpectrumError> {
    let (e_plus, e_minus) = closed_form_energies(case, params, n)?;
    let plus = check_branch(case, params, n, e_plus);
    let minus = e_minus.map(|e| check_branch(case, params, n, e));

    let mut diagnostics = Vec::new();
    let tag = if case.is_kummer() { "+: " } else { "" };
    diagnostics.extend(plus.notes.iter().map(|s| format!("{tag}{s}")));
    if let Some(m) = &minus {
        diagnostics.extend(m.notes.iter().map(|s| format!("-: {s}")));
    }
    match (case, n) {
        (CaseId::IIIa | CaseId::IVa, 1) => {
            diagnostics.push("n = 1: lambda1 = 0, near-degenerate configuration".to_string())
        }
        (CaseId::IVb, 1) => diagnostics.push("n = 1: gamma1 = -1/4 < 0".to_string()),
        _ => {}
    }

    Ok(EnergyResult {
        case,
        n,
        e_plus,
        e_minus,
        valid_plus: plus.valid,
        valid_minus: minus.as_ref().is_some_and(|m| m.valid),
        gammas_plus: plus.gammas,
        gammas_minus: minus.as_ref().and_then(|m| m.gammas),
        residual_plus: plus.residual,
        residual_minus: minus.as_ref().map(|m| m.residual),
        diagnostics,
    })
}

/// True iff IIIa/IVa and IIIb/IVb give bit-identical energies for `params`.
pub fn degeneracy_check(params: &PhysicalParams, n: u32) -> bool {
    let e = |case| closed_form_energies(case, params, n).map(|(e, _)| e.to_bits());
    match (e(CaseId::IIIa), e(CaseId::IVa), e(CaseId::IIIb), e(CaseId::IVb)) {
        (Ok(a3), Ok(a4), Ok(b3), Ok(b4)) => a3 == a4 && b3 == b4,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_case_i() -> PhysicalParams {
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

    #[test]
    fn gamma_examples() {
        let l = Lambdas::from_raw(-4.0, -1.0, -1.0, 1.0);
        match gammas_from_lambdas(CaseId::I, &l).unwrap() {
            GammaParams::Kummer { gamma0, .. } => assert_eq!(gamma0, 2.0),
            _ => unreachable!(),
        }
        let l = Lambdas::from_raw(-1.0, 1.0, 0.0, 1.0);
        match gammas_from_lambdas(CaseId::II, &l).unwrap() {
            GammaParams::Kummer { gamma2, .. } => assert_eq!(gamma2, 0.0),
            _ => unreachable!(),
        }
        let l = Lambdas::from_raw(-1.0, 1.0, -0.75, 1.0);
        match gammas_from_lambdas(CaseId::II, &l).unwrap() {
            GammaParams::Kummer { gamma2, .. } => assert_eq!(gamma2, 0.5),
            _ => unreachable!(),
        }
    }

    #[test]
    fn gamma_reality_errors() {
        let l = Lambdas::from_raw(1.0, 1.0, -1.0, 1.0);
        assert!(matches!(
            gammas_from_lambdas(CaseId::I, &l),
            Err(SpectrumError::Reality(_))
        ));
        let l = Lambdas::from_raw(-1.0, 1.0, 1.0, 1.0);
        assert!(gammas_from_lambdas(CaseId::I, &l).is_err());
        assert!(gammas_from_lambdas(CaseId::II, &l).is_err());
        let l = Lambdas::from_raw(0.0, 1.0, 0.0, 1.0);
        assert!(gammas_from_lambdas(CaseId::IIIb, &l).is_err());
    }

    #[test]
    fn residual_examples() {
        // γ₁² = -2γ₂(n + 1/2 + γ₀)
        let (g0, g2, n) = (0.7, 1.3, 2);
        let g = GammaParams::Kummer {
            gamma0: g0,
            gamma1_sq: -2.0 * g2 * (n as f64 + 0.5 + g0),
            gamma2: g2,
        };
        assert!(quantization_residual(CaseId::I, n, &g).abs() < 1e-15);

        for n in 1..5 {
            let g = GammaParams::Bessel { gamma1: n as f64 - 1.0 };
            assert_eq!(quantization_residual(CaseId::IVa, n, &g), 0.0);
        }

        let g = GammaParams::Kummer {
            gamma0: 1.0,
            gamma1_sq: 3.0,
            gamma2: 0.0,
        };
        for n in 0..4 {
            assert_eq!(quantization_residual(CaseId::II, n, &g), -1.5 - 1.0 - n as f64);
        }
        assert!(quantization_residual(CaseId::IIIa, 1, &g).is_nan());
    }

    #[test]
    fn case_i_worked_example() {
        let p = worked_case_i();
        let d = case_derived(CaseId::I, &p, 0);
        assert_eq!(d.big_lambda, -1.5);
        let r = energy_levels(CaseId::I, &p, 0).unwrap();
        assert!((r.e_plus - 2.75f64.sqrt()).abs() < 1e-15);
        assert!((r.e_minus.unwrap() + 2.75f64.sqrt()).abs() < 1e-15);
        assert!((r.e_plus - 1.658_312_4).abs() < 1e-7);
        assert!(r.valid_plus && r.valid_minus, "{:?}", r.diagnostics);
        match r.gammas_plus.unwrap() {
            GammaParams::Kummer { gamma0, gamma2, .. } => {
                assert!((gamma0 - 1.5).abs() < 1e-14);
                assert!((gamma2 - 1.0).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn case_i_kappa_zero_reduction() {
        let p = PhysicalParams {
            q: 0.8,
            m: 1.2,
            p1: 3.0,
            p3: 0.4,
            alpha: 0.7,
            beta0: 0.0,
            beta1: 2.0,
        };
        for n in 0..3 {
            let big_l = p.alpha * (n as f64 + 0.5) - p.p1;
            let e = (p.mass_shell() - big_l * big_l).sqrt();
            let r = energy_levels(CaseId::I, &p, n).unwrap();
            assert!((r.e_plus - e).abs() < 1e-14);
        }
    }

    #[test]
    fn case_i_levels_past_the_well_are_flagged() {
        let p = worked_case_i();
        // n = 2 gives Λ = 0.5 > 0, so κE + Λ > 0 on both branches
        let r = energy_levels(CaseId::I, &p, 2).unwrap();
        assert!(!r.any_valid());
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn case_i_kappa_constraint() {
        let mut p = worked_case_i();
        p.beta0 = 1.0;
        assert!(matches!(
            energy_levels(CaseId::I, &p, 0),
            Err(SpectrumError::Constraint(_))
        ));
        p.beta1 = 0.0;
        assert!(energy_levels(CaseId::I, &p, 0).is_err());
    }

    #[test]
    fn bessel_case_examples() {
        let p = PhysicalParams {
            q: 1.3,
            m: 0.0,
            p1: 0.9,
            p3: 0.0,
            alpha: 1.4,
            beta0: 2.0,
            beta1: 0.5,
        };
        let (b0, b1) = p.beta_prime(CaseId::IIIa);
        let e = closed_form_energies(CaseId::IIIa, &p, 1).unwrap().0;
        assert!((e - p.p1 * b1 / b0).abs() < 1e-15);

        // q = 1, β′₀ = β′₁ = 1, p₁ = 1: (2 − 1/4)/2
        let p = PhysicalParams {
            q: 1.0,
            m: 0.0,
            p1: 1.0,
            p3: 0.0,
            alpha: 2.0,
            beta0: 1.0,
            beta1: 1.0,
        };
        assert_eq!(p.beta_prime(CaseId::IVb), (1.0, 1.0));
        assert_eq!(closed_form_energies(CaseId::IVb, &p, 1).unwrap().0, 0.875);
    }

    #[test]
    fn bessel_cases_need_nonzero_beta0_and_n_ge_1() {
        let p = PhysicalParams {
            q: 1.0,
            m: 0.0,
            p1: 1.0,
            p3: 0.0,
            alpha: 1.0,
            beta0: 0.0,
            beta1: 1.0,
        };
        assert!(matches!(
            energy_levels(CaseId::IIIa, &p, 1),
            Err(SpectrumError::Division(_))
        ));
        let p = PhysicalParams { beta0: 1.0, ..p };
        assert!(matches!(
            energy_levels(CaseId::IVb, &p, 0),
            Err(SpectrumError::QuantumNumber { .. })
        ));
    }

    #[test]
    fn degeneracy_examples() {
        let p = PhysicalParams {
            q: 0.9,
            m: 0.3,
            p1: 0.4,
            p3: 0.1,
            alpha: 1.7,
            beta0: 1.1,
            beta1: -0.6,
        };
        assert!(degeneracy_check(&p, 2));
        assert!(degeneracy_check(&p, 3));
        let a = closed_form_energies(CaseId::IIIa, &p, 1).unwrap().0;
        let b = closed_form_energies(CaseId::IIIb, &p, 1).unwrap().0;
        assert_ne!(a, b);
    }

    #[test]
    fn case_iii_needs_on_shell_energy() {
        // E_2 = (2qβ′₁p₁ + 2)/(2qβ′₀) = 0.25 + 0.5 = 0.75 with α = 1
        let mut p = PhysicalParams {
            q: 1.0,
            m: 0.0,
            p1: 0.5,
            p3: 0.0,
            alpha: 1.0,
            beta0: 2.0,
            beta1: 1.0,
        };
        let r = energy_levels(CaseId::IIIa, &p, 2).unwrap();
        assert_eq!(r.e_plus, 0.75);
        assert!(!r.valid_plus);
        assert!(r.diagnostics.iter().any(|d| d.contains("off shell")));
        p.m = (0.75f64 * 0.75 - 0.25).sqrt();
        let r = energy_levels(CaseId::IIIa, &p, 2).unwrap();
        assert!(r.valid_plus, "{:?}", r.diagnostics);
    }

    #[test]
    fn case_iv_needs_null_lambda2() {
        let mut p = PhysicalParams {
            q: 1.0,
            m: 0.3,
            p1: 0.5,
            p3: 0.0,
            alpha: 1.0,
            beta0: 1.0,
            beta1: 1.0,
        };
        let r = energy_levels(CaseId::IVa, &p, 2).unwrap();
        assert!(r.valid_plus, "{:?}", r.diagnostics);
        p.beta1 = 0.9;
        let r = energy_levels(CaseId::IVa, &p, 2).unwrap();
        assert!(!r.valid_plus);
        assert!(r.diagnostics.iter().any(|d| d.contains("lambda2")));
    }
}
