//! Gamma, Kummer ₁F₁ and Bessel J kernels.
//!
//! Everything the eigenfunctions evaluate goes through this module. The
//! kernels only need to cover the argument classes that appear in the bound
//! state formulas: integer and half-integer gamma arguments (plus general
//! positive reals), ₁F₁ with a nonpositive-integer first parameter, and
//! Bessel functions of integer or half-integer order on the positive axis.

pub mod compensated;

use std::f64::consts::PI;

use thiserror::Error;

use compensated::{DoubleDouble, KahanSum};

const SQRT_PI: f64 = 1.772_453_850_905_516;
const INT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("pole at {arg} (argument is a nonpositive integer)")]
    Pole { arg: f64 },
    #[error("series did not converge within {max_terms} terms")]
    Divergence { max_terms: usize },
    #[error("series for J_{nu}({x}) loses too much precision (peak term {peak:e})")]
    PrecisionLoss { nu: f64, x: f64, peak: f64 },
    #[error("argument out of domain: {0}")]
    Domain(String),
}

/// Stopping rule for the open-ended series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesAccuracy {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesAccuracy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self, SpecfunError> {
        if !(rel_tol > 0.0) {
            return Err(SpecfunError::Domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(SpecfunError::Domain("max_terms must be at least 1".into()));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesAccuracy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-16,
            max_terms: 200,
        }
    }
}

fn nearest_int(x: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() < INT_TOL && r.abs() < 1e15 {
        Some(r as i64)
    } else {
        None
    }
}

fn is_nonpositive_int(x: f64) -> bool {
    matches!(nearest_int(x), Some(k) if k <= 0)
}

// g = 7, n = 9 Lanczos set
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(xm1: f64) -> f64 {
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (xm1 + i as f64);
    }
    acc
}

/// Γ(x). Positive integers and positive half-integers take an exact
/// product path; everything else goes through the Lanczos sum, with the
/// reflection formula below 1/2.
pub fn gamma_fn(x: f64) -> Result<f64, SpecfunError> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if is_nonpositive_int(x) {
        return Err(SpecfunError::Pole { arg: x });
    }
    if let Some(k) = nearest_int(x) {
        if (1..=171).contains(&k) {
            let mut prod = 1.0;
            for j in 2..k {
                prod *= j as f64;
            }
            return Ok(prod);
        }
    }
    if let Some(k) = nearest_int(x - 0.5) {
        if (0..=170).contains(&k) {
            // Γ(k + 1/2) = (1/2)(3/2)...(k - 1/2) √π
            let mut prod = SQRT_PI;
            for j in 0..k {
                prod *= j as f64 + 0.5;
            }
            return Ok(prod);
        }
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        return Ok(PI / (s * gamma_fn(1.0 - x)?));
    }
    if x > 171.7 {
        return Ok(f64::INFINITY);
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(xm1 + 0.5) * (-t).exp() * lanczos_sum(xm1))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0) {
        return Err(SpecfunError::Domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    if x < 100.0 {
        return Ok(gamma_fn(x)?.ln());
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (xm1 + 0.5) * t.ln() - t + lanczos_sum(xm1).ln())
}

/// ₁F₁(a; b; z) with the default stopping rule.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64, SpecfunError> {
    kummer_1f1_with(a, b, z, &SeriesAccuracy::default())
}

/// ₁F₁(a; b; z) = Σ (a)_k / (b)_k z^k / k!.
///
/// When `a` is a nonpositive integer -n the sum is the degree-n polynomial;
/// it is evaluated term by term in double-double so the only error left is
/// the final rounding. Otherwise the series is summed until the terms drop
/// below `acc.rel_tol` of the running sum.
pub fn kummer_1f1_with(a: f64, b: f64, z: f64, acc: &SeriesAccuracy) -> Result<f64, SpecfunError> {
    let poly_degree = match nearest_int(a) {
        Some(k) if k <= 0 => Some((-k) as usize),
        _ => None,
    };

    if is_nonpositive_int(b) {
        let b_int = nearest_int(b).unwrap_or(0);
        match poly_degree {
            Some(n) if (n as i64) < -b_int => {}
            _ => return Err(SpecfunError::Pole { arg: b }),
        }
    }

    if let Some(n) = poly_degree {
        return Ok(kummer_polynomial(n, b, z));
    }

    let mut sum = KahanSum::new();
    sum.add(1.0);
    let mut term = 1.0;
    let mut quiet = 0;
    for k in 0..acc.max_terms {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum.add(term);
        if term.abs() <= acc.rel_tol * sum.value().abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(SpecfunError::Divergence {
        max_terms: acc.max_terms,
    })
}

fn kummer_polynomial(n: usize, b: f64, z: f64) -> f64 {
    let a = -(n as f64);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    for k in 0..n {
        let kf = k as f64;
        // a + k is an exact small integer, b + k is kept exact in double-double
        let num = DoubleDouble::from_f64(a + kf) * z;
        let den = (DoubleDouble::from_f64(b) + DoubleDouble::from_f64(kf)) * (kf + 1.0);
        term = term * num / den;
        sum += term;
    }
    sum.to_f64()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Order {
    Integer(usize),
    HalfInteger(usize),
    General,
}

fn classify_order(nu: f64) -> Order {
    if let Some(k) = nearest_int(nu) {
        return Order::Integer(k as usize);
    }
    if let Some(k) = nearest_int(nu - 0.5) {
        return Order::HalfInteger(k as usize);
    }
    Order::General
}

const SERIES_MAX_X: f64 = 8.0;
const HANKEL_MIN_X: f64 = 25.0;
const SERIES_PEAK_BUDGET: f64 = 1e6;

/// J_ν(x) for ν ≥ 0 and x ≥ 0.
///
/// Small arguments use the ascending series with compensated summation.
/// Past that, half-integer orders go through the trigonometric closed form
/// of the spherical Bessel functions, and integer orders use Miller's
/// backward recurrence or, for large x, the Hankel expansion. General orders
/// only have the series and fail with `PrecisionLoss` once cancellation in
/// the series would eat more than ~10 digits.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    if !(nu >= 0.0) {
        return Err(SpecfunError::Domain(format!("bessel_j needs nu >= 0, got {nu}")));
    }
    if !(x >= 0.0) {
        return Err(SpecfunError::Domain(format!("bessel_j needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    match classify_order(nu) {
        Order::HalfInteger(l) => {
            if x < (l as f64 + 1.0).max(1.0) {
                bessel_series(nu, x)
            } else {
                Ok(half_integer_upward(l, x))
            }
        }
        Order::Integer(n) => {
            if x <= SERIES_MAX_X {
                bessel_series(nu, x)
            } else if x < HANKEL_MIN_X.max((n * n) as f64) {
                Ok(integer_miller(n, x))
            } else {
                Ok(hankel_asymptotic(n as f64, x))
            }
        }
        Order::General => bessel_series(nu, x),
    }
}

fn bessel_series(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    let half = 0.5 * x;
    let mut term = if nu == 0.0 {
        1.0
    } else {
        (nu * half.ln() - ln_gamma(nu + 1.0)?).exp()
    };
    let q = half * half;
    let mut sum = KahanSum::new();
    sum.add(term);
    let mut peak = term.abs();
    let max_terms = SeriesAccuracy::default().max_terms;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= -q / ((kf + 1.0) * (kf + 1.0 + nu));
        sum.add(term);
        peak = peak.max(term.abs());
        if kf > half && term.abs() <= 1e-17 * peak {
            if peak > SERIES_PEAK_BUDGET {
                return Err(SpecfunError::PrecisionLoss { nu, x, peak });
            }
            return Ok(sum.value());
        }
    }
    Err(SpecfunError::Divergence { max_terms })
}

// J_{l+1/2}(x) = sqrt(2x/π) j_l(x), upward recurrence is stable for x > l
fn half_integer_upward(l: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let prefactor = (2.0 * x / PI).sqrt();
    if l == 0 {
        return prefactor * j0;
    }
    let mut prev = j0;
    let mut cur = s / (x * x) - c / x;
    for k in 1..l {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    prefactor * cur
}

fn integer_miller(n: usize, x: f64) -> f64 {
    let top = n.max(x.ceil() as usize);
    let mut m = top + 20 + (40.0 * top as f64).sqrt() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    const BIG: f64 = 1e200;
    let mut j_next = 0.0; // J_{k+1}
    let mut j_cur = 1e-30; // J_k, starting at k = m
    let mut even_sum = if m >= 2 { j_cur } else { 0.0 };
    let mut result = if m == n { j_cur } else { 0.0 };
    for k in (1..=m).rev() {
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let idx = k - 1;
        if idx == n {
            result = j_cur;
        }
        if idx >= 2 && idx % 2 == 0 {
            even_sum += j_cur;
        }
        if j_cur.abs() > BIG {
            let s = 1.0 / BIG;
            j_cur *= s;
            j_next *= s;
            even_sum *= s;
            result *= s;
        }
    }
    let norm = j_cur + 2.0 * even_sum;
    result / norm
}

fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = KahanSum::new();
    let mut q = KahanSum::new();
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    p.add(1.0);
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= last || next.abs() < 1e-17 {
            break;
        }
        last = next.abs();
        term = next;
        // a_k / x^k with sign (-1)^{floor(k/2)} split into P (even k) and Q (odd k)
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p.add(sign * term);
        } else {
            q.add(sign * term);
        }
    }
    // cos(x - φ) and sin(x - φ) by angle addition to keep x exact
    let phase = (0.5 * nu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_w = cx * cp + sx * sp;
    let sin_w = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p.value() * cos_w - q.value() * sin_w)
}
