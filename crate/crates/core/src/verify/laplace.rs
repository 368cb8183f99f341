//! Numerical Laplace transforms and convolutions.

use crate::quad::{integrate, QuadOptions};
use crate::specfun::{gamma_fn, kummer_1f1};

use super::VerifyError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceOptions {
    pub rel_tol: f64,
    /// Absolute tolerance in units of the integrand's peak times 1/y.
    pub abs_tol: f64,
    /// Truncate once |e^{−yt} f(t)| falls below this fraction of the peak.
    pub tail_cut: f64,
}

impl Default for LaplaceOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            tail_cut: 1e-16,
        }
    }
}

const PROBE_MIN: i32 = -24;
const PROBE_MAX: i32 = 90;
const QUIET_PROBES: usize = 3;

/// χ(y) = ∫₀^∞ e^{−yt} f(t) dt.
pub fn laplace_forward<F: FnMut(f64) -> f64>(f: F, y: f64) -> Result<f64, VerifyError> {
    laplace_forward_with(f, y, &LaplaceOptions::default())
}

pub fn laplace_forward_with<F: FnMut(f64) -> f64>(mut f: F, y: f64, opts: &LaplaceOptions) -> Result<f64, VerifyError> {
    let mut g = move |t: f64| {
        let v = f(t);
        if v == 0.0 {
            0.0
        } else {
            v * (-y * t).exp()
        }
    };
    let tau = if y != 0.0 { 1.0 / y.abs() } else { 1.0 };
    // geometric probe for the peak and the point where the tail is negligible
    let mut peak = 0.0f64;
    let mut quiet = 0;
    let mut cut = None;
    for k in PROBE_MIN..=PROBE_MAX {
        let t = tau * 2f64.powi(k);
        let v = g(t).abs();
        if !v.is_finite() {
            return Err(VerifyError::Divergence(format!("integrand not finite at t = {t}")));
        }
        if v > peak {
            peak = v;
            quiet = 0;
        } else if v < opts.tail_cut * peak {
            quiet += 1;
            if quiet >= QUIET_PROBES {
                cut = Some(k - QUIET_PROBES as i32 + 1);
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if peak == 0.0 {
        return Ok(0.0);
    }
    let last = cut.ok_or_else(|| VerifyError::Divergence(format!("e^(-{y} t) f(t) does not decay")))?;
    let quad = QuadOptions {
        abs_tol: opts.abs_tol * peak * tau,
        rel_tol: opts.rel_tol,
        max_subdivisions: 10_000,
    };
    let mut edges = vec![0.0];
    edges.extend((PROBE_MIN..=last).map(|k| tau * 2f64.powi(k)));
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += integrate(&mut g, w[0], w[1], &quad)?.value;
    }
    Ok(total)
}

/// (G ∗ H)(t) = ∫₀^t G(t − τ) H(τ) dτ.
pub fn convolve<G: FnMut(f64) -> f64, H: FnMut(f64) -> f64>(mut g: G, mut h: H, t: f64) -> Result<f64, VerifyError> {
    let opts = QuadOptions::tol(1e-14, 1e-12);
    Ok(integrate(|tau| g(t - tau) * h(tau), 0.0, t, &opts)?.value)
}

/// Time-domain member of the Kummer transform pair,
/// `e^{−γ₂t} t^{a−n−1} ₁F₁(−n; a−n; 2γ₂t) / Γ(a−n)`.
pub fn kummer_pair_density(a: f64, n: u32, gamma2: f64, t: f64) -> Result<f64, VerifyError> {
    let c = a - n as f64;
    if c <= 0.0 {
        return Err(VerifyError::Divergence(format!("a - n = {c} must be positive")));
    }
    let poly = kummer_1f1(-(n as f64), c, 2.0 * gamma2 * t)?;
    Ok((-gamma2 * t).exp() * t.powf(c - 1.0) * poly / gamma_fn(c)?)
}

/// Transform-domain member, `(y + γ₂)^{−a} (y − γ₂)^{n}`.
pub fn kummer_pair_transform(a: f64, n: u32, gamma2: f64, y: f64) -> f64 {
    (y + gamma2).powf(-a) * (y - gamma2).powi(n as i32)
}
