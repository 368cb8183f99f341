//! Physical parameters, the six field profiles and the couplings of the
//! reduced one-dimensional equation
//!
//! ```text
//! φ''(x₂) + (λ₀ + λ₁ s(x₂) + λ₂ s(x₂)²) φ(x₂) = 0
//! ```
//!
//! The four-potential is `(A₀, A₁, 0, 0) = (β₀ s(x₂), β₁ s(x₂), 0, 0)`. Field
//! strengths are always obtained by differentiating `s` analytically.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldsError {
    #[error("x2 = {x2} is outside the domain of case {case}")]
    Domain { case: CaseId, x2: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown case '{0}' (expected I, II, IIIa, IIIb, IVa or IVb)")]
    UnknownCase(String),
}

/// Charge, mass, transverse momenta and field constants in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub q: f64,
    pub m: f64,
    pub p1: f64,
    pub p3: f64,
    pub alpha: f64,
    pub beta0: f64,
    pub beta1: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<(), FieldsError> {
        let all = [
            ("q", self.q),
            ("m", self.m),
            ("p1", self.p1),
            ("p3", self.p3),
            ("alpha", self.alpha),
            ("beta0", self.beta0),
            ("beta1", self.beta1),
        ];
        if let Some((name, v)) = all.iter().find(|(_, v)| !v.is_finite()) {
            return Err(FieldsError::InvalidParams(format!("{name} must be finite, got {v}")));
        }
        if self.m < 0.0 {
            return Err(FieldsError::InvalidParams(format!("m must be >= 0, got {}", self.m)));
        }
        // only α² enters the reduced equations, so the sign is fixed to +
        if !(self.alpha > 0.0) {
            return Err(FieldsError::InvalidParams(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// p₁² + p₃² + m².
    pub fn mass_shell(&self) -> f64 {
        self.p1 * self.p1 + self.p3 * self.p3 + self.m * self.m
    }

    /// (β′₀, β′₁) in the convention of `case`.
    pub fn beta_prime(&self, case: CaseId) -> (f64, f64) {
        let f = case.beta_prime_factor(self.alpha);
        (f * self.beta0, f * self.beta1)
    }
}

/// The six field profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    I,
    II,
    IIIa,
    IIIb,
    IVa,
    IVb,
}

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId::I,
        CaseId::II,
        CaseId::IIIa,
        CaseId::IIIb,
        CaseId::IVa,
        CaseId::IVb,
    ];

    /// Exponents (m₁, m₂) of `dt/dx₂ = α t^{m₁}` and `s = t^{m₂}`.
    pub fn reduction_exponents(self) -> (f64, f64) {
        match self {
            CaseId::I => (1.0, 1.0),
            CaseId::II => (0.0, -1.0),
            CaseId::IIIa => (2.0, 2.0),
            CaseId::IIIb => (1.5, 1.0),
            CaseId::IVa => (0.0, -2.0),
            CaseId::IVb => (0.5, -1.0),
        }
    }

    /// Whether the eigenfunctions are Kummer-type (I, II) or Bessel-type.
    pub fn is_kummer(self) -> bool {
        matches!(self, CaseId::I | CaseId::II)
    }

    /// Lowest admissible quantum number.
    pub fn min_n(self) -> u32 {
        if self.is_kummer() {
            0
        } else {
            1
        }
    }

    pub fn in_domain(self, x2: f64) -> bool {
        match self {
            CaseId::I => x2.is_finite(),
            _ => x2.is_finite() && x2 > 0.0,
        }
    }

    fn check_domain(self, x2: f64) -> Result<(), FieldsError> {
        if self.in_domain(x2) {
            Ok(())
        } else {
            Err(FieldsError::Domain { case: self, x2 })
        }
    }

    /// Factor f with β′ᵢ = f βᵢ.
    pub fn beta_prime_factor(self, alpha: f64) -> f64 {
        match self {
            CaseId::I => 1.0,
            CaseId::II => 1.0 / alpha,
            CaseId::IIIa | CaseId::IVa => 1.0 / (alpha * alpha),
            CaseId::IIIb | CaseId::IVb => 4.0 / (alpha * alpha),
        }
    }

    /// The transformed variable t(x₂), taking α > 0.
    pub fn t_of_x(self, alpha: f64, x2: f64) -> f64 {
        match self {
            CaseId::I => (-alpha * x2).exp(),
            CaseId::II | CaseId::IVa => alpha * x2,
            CaseId::IIIa => 1.0 / (alpha * x2),
            CaseId::IIIb => 4.0 / (alpha * alpha * x2 * x2),
            CaseId::IVb => 0.25 * alpha * alpha * x2 * x2,
        }
    }

    /// Inverse of [`CaseId::t_of_x`] on the case domain.
    pub fn x_of_t(self, alpha: f64, t: f64) -> f64 {
        match self {
            CaseId::I => -t.ln() / alpha,
            CaseId::II | CaseId::IVa => t / alpha,
            CaseId::IIIa => 1.0 / (alpha * t),
            CaseId::IIIb => 2.0 / (alpha * t.sqrt()),
            CaseId::IVb => 2.0 * t.sqrt() / alpha,
        }
    }

    /// Profile s(x₂) = t^{m₂}.
    pub fn profile(self, alpha: f64, x2: f64) -> f64 {
        match self {
            CaseId::I => (-alpha * x2).exp(),
            CaseId::II => 1.0 / (alpha * x2),
            CaseId::IIIa | CaseId::IVa => 1.0 / (alpha * alpha * x2 * x2),
            CaseId::IIIb | CaseId::IVb => 4.0 / (alpha * alpha * x2 * x2),
        }
    }

    /// ds/dx₂.
    pub fn profile_derivative(self, alpha: f64, x2: f64) -> f64 {
        let s = self.profile(alpha, x2);
        match self {
            CaseId::I => -alpha * s,
            CaseId::II => -s / x2,
            _ => -2.0 * s / x2,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::IIIa => "IIIa",
            CaseId::IIIb => "IIIb",
            CaseId::IVa => "IVa",
            CaseId::IVb => "IVb",
        };
        f.write_str(s)
    }
}

impl FromStr for CaseId {
    type Err = FieldsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL
            .iter()
            .copied()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| FieldsError::UnknownCase(s.to_string()))
    }
}

/// Couplings λ₀, λ₁, λ₂ and their α²-scaled versions λ̃ᵢ = λᵢ/α².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lambdas {
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub tilde_lambda0: f64,
    pub tilde_lambda1: f64,
    pub tilde_lambda2: f64,
}

impl Lambdas {
    pub fn from_raw(lambda0: f64, lambda1: f64, lambda2: f64, alpha: f64) -> Self {
        let a2 = alpha * alpha;
        Self {
            lambda0,
            lambda1,
            lambda2,
            tilde_lambda0: lambda0 / a2,
            tilde_lambda1: lambda1 / a2,
            tilde_lambda2: lambda2 / a2,
        }
    }

    /// λ₀ + λ₁ s + λ₂ s².
    pub fn coupling(&self, s: f64) -> f64 {
        self.lambda0 + s * (self.lambda1 + s * self.lambda2)
    }

    /// |λ₀| + |λ₁ s| + |λ₂ s²|, the local size of the coupling.
    pub fn coupling_scale(&self, s: f64) -> f64 {
        self.lambda0.abs() + (self.lambda1 * s).abs() + (self.lambda2 * s * s).abs()
    }
}

/// Couplings at energy `energy`.
pub fn lambdas(params: &PhysicalParams, energy: f64) -> Lambdas {
    let q = params.q;
    let lambda0 = energy * energy - params.mass_shell();
    let lambda1 = 2.0 * q * (params.beta1 * params.p1 - energy * params.beta0);
    let lambda2 = q * q * (params.beta0 * params.beta0 - params.beta1 * params.beta1);
    Lambdas::from_raw(lambda0, lambda1, lambda2, params.alpha)
}

/// (A₀, A₁) at `x2`.
pub fn potential(case: CaseId, params: &PhysicalParams, x2: f64) -> Result<(f64, f64), FieldsError> {
    case.check_domain(x2)?;
    let s = case.profile(params.alpha, x2);
    Ok((params.beta0 * s, params.beta1 * s))
}

/// Potentials and field magnitudes at one point. `e_mag` is along x̂₂ and
/// `b_mag` along x̂₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub x2: f64,
    pub e_mag: f64,
    pub b_mag: f64,
    pub a0: f64,
    pub a1: f64,
}

/// E = -dA₀/dx₂ and B = (∇×A)₃ = -dA₁/dx₂.
pub fn em_fields(case: CaseId, params: &PhysicalParams, x2: f64) -> Result<FieldSample, FieldsError> {
    let (a0, a1) = potential(case, params, x2)?;
    let ds = case.profile_derivative(params.alpha, x2);
    Ok(FieldSample {
        x2,
        e_mag: -params.beta0 * ds,
        b_mag: -params.beta1 * ds,
        a0,
        a1,
    })
}
