//! The change of variables x₂ → t and the case symmetries.
//!
//! With `dt/dx₂ = ±α t^{m₁}`, `s = t^{m₂}` and `φ = t^γ f(t)`:
//!
//! ```text
//! φ'' + (λ₀ + λ₁s + λ₂s²)φ
//!   = α² t^γ [ t^{2m₁} f'' + (2γ + m₁) t^{2m₁−1} f'
//!              + (γ(γ + m₁ − 1) t^{2m₁−2} + λ̃₀ + λ̃₁t^{m₂} + λ̃₂t^{2m₂}) f ]
//! ```

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::fields::{CaseId, Lambdas};

use super::VerifyError;

const STEP_FRACTION: f64 = 2e-3;

/// `t f'' + c₁ f' + (c₂ + c₃ t) f = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedODE {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl ReducedODE {
    /// Left-hand side on `f` at `t`, derivatives by finite differences.
    pub fn apply<F: FnMut(f64) -> f64>(&self, mut f: F, t: f64) -> f64 {
        let h = STEP_FRACTION * t.abs().clamp(f64::MIN_POSITIVE, 1.0);
        let (d1, d2) = derivatives(&mut f, t, h);
        t * d2 + self.c1 * d1 + (self.c2 + self.c3 * t) * f(t)
    }
}

/// Values for the symbols appearing in the reduced coefficient tuples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolPoint {
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma: f64,
    pub tilde_lambda0: f64,
    pub tilde_lambda2: f64,
}

impl SymbolPoint {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        Self {
            gamma0: rng.gen_range(0.0..5.0),
            gamma1: rng.gen_range(0.0..5.0),
            gamma2: rng.gen_range(0.0..5.0),
            gamma: rng.gen_range(-5.0..5.0),
            tilde_lambda0: rng.gen_range(-5.0..5.0),
            tilde_lambda2: rng.gen_range(-5.0..5.0),
        }
    }
}

pub fn reduced_ode(case: CaseId, p: &SymbolPoint) -> ReducedODE {
    let (c1, c2, c3) = match case {
        CaseId::I => (-(2.0 * p.gamma0 - 1.0), -p.gamma1 * p.gamma1, -p.gamma2 * p.gamma2),
        CaseId::II => (-2.0 * p.gamma2, -p.gamma1 * p.gamma1, -p.gamma0 * p.gamma0),
        CaseId::IIIa => (2.0 * (p.gamma + 1.0), 0.0, p.tilde_lambda2),
        CaseId::IIIb => (2.0 * (p.gamma + 0.75), p.tilde_lambda2, 0.0),
        CaseId::IVa => (2.0 * p.gamma, 0.0, p.tilde_lambda0),
        CaseId::IVb => (2.0 * (p.gamma + 0.25), p.tilde_lambda0, 0.0),
    };
    ReducedODE { c1, c2, c3 }
}

/// A relabelling of symbols that should carry one case's tuple onto
/// another's.
#[derive(Debug, Clone, Copy)]
pub struct Substitution {
    pub name: &'static str,
    pub source: CaseId,
    pub target: CaseId,
    pub apply: fn(&SymbolPoint) -> SymbolPoint,
}

impl Substitution {
    pub fn identity(case: CaseId) -> Self {
        Self {
            name: "identity",
            source: case,
            target: case,
            apply: |p| *p,
        }
    }

    /// Whether the substituted source tuple equals the target tuple at `p`,
    /// up to a few rounding units.
    pub fn holds_at(&self, p: &SymbolPoint) -> bool {
        let a = reduced_ode(self.source, &(self.apply)(p));
        let b = reduced_ode(self.target, p);
        let close = |x: f64, y: f64| (x - y).abs() <= 16.0 * f64::EPSILON * x.abs().max(y.abs()).max(1.0);
        close(a.c1, b.c1) && close(a.c2, b.c2) && close(a.c3, b.c3)
    }
}

pub const SUBSTITUTIONS: [Substitution; 3] = [
    Substitution {
        name: "gamma2 -> gamma0, gamma0 -> gamma2 + 1/2",
        source: CaseId::I,
        target: CaseId::II,
        apply: |p| SymbolPoint {
            gamma0: p.gamma2 + 0.5,
            gamma2: p.gamma0,
            ..*p
        },
    },
    Substitution {
        name: "gamma -> gamma - 1, lambda2~ -> lambda0~",
        source: CaseId::IIIa,
        target: CaseId::IVa,
        apply: |p| SymbolPoint {
            gamma: p.gamma - 1.0,
            tilde_lambda2: p.tilde_lambda0,
            ..*p
        },
    },
    Substitution {
        name: "gamma -> gamma - 1/2, lambda2~ -> lambda0~",
        source: CaseId::IIIb,
        target: CaseId::IVb,
        apply: |p| SymbolPoint {
            gamma: p.gamma - 0.5,
            tilde_lambda2: p.tilde_lambda0,
            ..*p
        },
    },
];

pub const SYMMETRY_SEED: u64 = 0x5eed_0004;

/// All three substitutions at 20 seeded random symbol points.
pub fn symmetry_check() -> bool {
    symmetry_check_with(&mut StdRng::seed_from_u64(SYMMETRY_SEED), 20)
}

pub fn symmetry_check_with<R: Rng>(rng: &mut R, points: usize) -> bool {
    (0..points).all(|_| {
        let p = SymbolPoint::random(rng);
        SUBSTITUTIONS.iter().all(|s| s.holds_at(&p))
    })
}

/// First and second derivative, 5-point stencils with one Richardson step.
fn derivatives<F: FnMut(f64) -> f64>(f: &mut F, t: f64, h: f64) -> (f64, f64) {
    let mut stencil = |h: f64| {
        let (m2, m1, c, p1, p2) = (f(t - 2.0 * h), f(t - h), f(t), f(t + h), f(t + 2.0 * h));
        (
            (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
            (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h),
        )
    };
    let (a1, a2) = stencil(h);
    let (b1, b2) = stencil(0.5 * h);
    ((16.0 * b1 - a1) / 15.0, (16.0 * b2 - a2) / 15.0)
}

/// The bracketed t-space operator on `f` together with the sum of the
/// magnitudes of its terms.
pub fn t_space_operator<F: FnMut(f64) -> f64>(
    case: CaseId,
    lambdas: &Lambdas,
    gamma: f64,
    mut f: F,
    t: f64,
) -> Result<(f64, f64), VerifyError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(VerifyError::SingularPoint { t });
    }
    let (m1, m2) = case.reduction_exponents();
    let h = STEP_FRACTION * t.min(1.0);
    let (d1, d2) = derivatives(&mut f, t, h);
    let value = f(t);
    let terms = [
        t.powf(2.0 * m1) * d2,
        (2.0 * gamma + m1) * t.powf(2.0 * m1 - 1.0) * d1,
        gamma * (gamma + m1 - 1.0) * t.powf(2.0 * m1 - 2.0) * value,
        lambdas.tilde_lambda0 * value,
        lambdas.tilde_lambda1 * t.powf(m2) * value,
        lambdas.tilde_lambda2 * t.powf(2.0 * m2) * value,
    ];
    Ok((terms.iter().sum(), terms.iter().map(|v| v.abs()).sum()))
}

/// Relative mismatch between the x₂-space operator applied to
/// `φ = t^γ test_f(t)` and `α² t^γ` times the t-space operator on `test_f`,
/// both evaluated at the point with transformed coordinate `t`.
pub fn reduction_residual<F: Fn(f64) -> f64>(
    case: CaseId,
    alpha: f64,
    lambdas: &Lambdas,
    gamma: f64,
    test_f: F,
    t: f64,
) -> Result<f64, VerifyError> {
    let (t_value, t_scale) = t_space_operator(case, lambdas, gamma, &test_f, t)?;
    let x = case.x_of_t(alpha, t);
    if !case.in_domain(x) {
        return Err(VerifyError::SingularPoint { t });
    }
    let phi = |x: f64| {
        let tx = case.t_of_x(alpha, x);
        tx.powf(gamma) * test_f(tx)
    };
    let (m1, _) = case.reduction_exponents();
    // one unit of t spans 1/(α t^{m₁}) in x₂
    let dx_dt = 1.0 / (alpha * t.powf(m1));
    let natural = match case {
        CaseId::I => 1.0 / alpha,
        _ => x,
    };
    let h = STEP_FRACTION * natural.min(dx_dt * t.min(1.0));
    let mut phi_mut = phi;
    let (_, d2) = derivatives(&mut phi_mut, x, h);
    let x_value = d2 + lambdas.coupling(case.profile(alpha, x)) * phi(x);
    let prefactor = alpha * alpha * t.powf(gamma);
    let diff = (x_value - prefactor * t_value).abs();
    let scale = prefactor.abs() * t_scale;
    Ok(if scale > 0.0 { diff / scale } else { diff })
}
