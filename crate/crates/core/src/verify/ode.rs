//! Dormand–Prince 5(4) stepper for φ'' = −w(x) φ.
//!
//! The state is rescaled to unit size after every accepted step; only the
//! direction of (φ, φ') matters to the callers, and positive rescaling keeps
//! signs intact.

use super::VerifyError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperOptions {
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for StepperOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-11,
            max_steps: 2_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus the embedded fourth-order ones
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Size of (φ, φ') with φ' measured in units of `k`.
fn weighted_norm(y: [f64; 2], k: f64) -> f64 {
    y[0].hypot(y[1] / k)
}

/// Integrates φ'' = −w(x)φ from `x0` to `x1` (either direction) and returns
/// the end state scaled to unit weighted norm. `k` is the wavenumber used to
/// weigh φ' against φ.
pub fn integrate_linear<W: FnMut(f64) -> f64>(
    mut w: W,
    x0: f64,
    x1: f64,
    y0: [f64; 2],
    k: f64,
    opts: &StepperOptions,
) -> Result<[f64; 2], VerifyError> {
    let mut rhs = |x: f64, y: [f64; 2]| [y[1], -w(x) * y[0]];
    let span = x1 - x0;
    let dir = span.signum();
    let n0 = weighted_norm(y0, k);
    let mut y = [y0[0] / n0, y0[1] / n0];
    if span == 0.0 {
        return Ok(y);
    }
    let mut x = x0;
    let mut h = dir * (0.01 / k).min(span.abs() / 16.0);
    let mut k1 = rhs(x, y);
    let mut steps = 0;
    while dir * (x1 - x) > 0.0 {
        if steps >= opts.max_steps {
            return Err(VerifyError::StiffIntegration { x, steps });
        }
        steps += 1;
        if dir * (x + h - x1) > 0.0 {
            h = x1 - x;
        }
        let mut ks = [[0.0; 2]; 7];
        ks[0] = k1;
        for i in 1..7 {
            let mut yi = y;
            for (j, kj) in ks.iter().enumerate().take(i) {
                yi[0] += h * A[i][j] * kj[0];
                yi[1] += h * A[i][j] * kj[1];
            }
            ks[i] = rhs(x + C[i] * h, yi);
            if i == 6 {
                // FSAL: the last stage sits at the proposed new state
                let err = [
                    h * E.iter().zip(&ks).map(|(e, kk)| e * kk[0]).sum::<f64>(),
                    h * E.iter().zip(&ks).map(|(e, kk)| e * kk[1]).sum::<f64>(),
                ];
                let scale = weighted_norm(y, k).max(weighted_norm(yi, k));
                let ratio = weighted_norm(err, k) / (opts.rel_tol * scale);
                if !ratio.is_finite() {
                    return Err(VerifyError::StiffIntegration { x, steps });
                }
                if ratio <= 1.0 {
                    x += h;
                    let norm = weighted_norm(yi, k);
                    y = [yi[0] / norm, yi[1] / norm];
                    k1 = [ks[6][0] / norm, ks[6][1] / norm];
                }
                let factor = if ratio == 0.0 {
                    5.0
                } else {
                    (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
                };
                h *= factor;
                if (h.abs() <= f64::EPSILON * x.abs().max(1.0)) && dir * (x1 - x) > 0.0 {
                    return Err(VerifyError::StiffIntegration { x, steps });
                }
            }
        }
    }
    Ok(y)
}
