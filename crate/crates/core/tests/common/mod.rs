//! Parameter sets shared by the acceptance run and the integration tests.
#![allow(dead_code)]

use kg_spectra::fields::{CaseId, PhysicalParams};

pub fn params(q: f64, m: f64, p1: f64, p3: f64, alpha: f64, beta0: f64, beta1: f64) -> PhysicalParams {
    PhysicalParams {
        q,
        m,
        p1,
        p3,
        alpha,
        beta0,
        beta1,
    }
}

/// α=1, β₀=0, β₁=1, p₁=2, p₃=0, m=1, q=1.
pub fn worked_set() -> PhysicalParams {
    params(1.0, 1.0, 2.0, 0.0, 1.0, 0.0, 1.0)
}

pub fn case_i_sets() -> Vec<PhysicalParams> {
    vec![
        worked_set(),
        params(1.0, 1.0, 3.0, 0.5, 0.5, 0.3, 1.0),
        params(2.0, 0.5, 4.0, 0.0, 1.0, -0.4, 0.8),
        params(1.0, 2.0, 3.0, 0.0, 0.7, 0.5, 1.0),
    ]
}

pub fn case_ii_sets() -> Vec<PhysicalParams> {
    vec![
        params(1.0, 1.0, 1.0, 0.0, 1.0, 0.5, 1.0),
        params(1.0, 1.0, 0.0, 0.0, 1.0, 0.4, 0.0),
        params(1.0, 2.0, 0.5, 0.3, 2.0, 1.0, 0.5),
        params(1.0, 1.5, 1.0, 0.2, 0.5, -0.6, 1.2),
    ]
}

/// Case III levels are on shell only for one n at a time, so the mass is
/// chosen per level: m = sqrt(E_n² − p₁² − p₃²).
pub fn on_shell(case: CaseId, base: PhysicalParams, n: u32) -> PhysicalParams {
    let (e, _) = kg_spectra::spectrum::closed_form_energies(case, &base, n).unwrap();
    let m2 = e * e - base.p1 * base.p1 - base.p3 * base.p3;
    assert!(m2 >= 0.0, "level {n} of {case} cannot be put on shell");
    PhysicalParams { m: m2.sqrt(), ..base }
}

/// (case, params, n) for every level used by the eigenfunction checks.
pub fn bessel_levels() -> Vec<(CaseId, PhysicalParams, u32)> {
    let mut out = Vec::new();
    // IIIa n = 1 is on shell only at E = 0, which needs p₁ = p₃ = m = 0
    out.push((CaseId::IIIa, params(1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 1.0), 1));
    let iiia = params(1.0, 0.0, 0.5, 0.0, 1.0, 2.0, 1.0);
    for n in 2..=4 {
        out.push((CaseId::IIIa, on_shell(CaseId::IIIa, iiia, n), n));
    }
    let iiib = params(1.0, 0.0, 0.0, 0.0, 2.0, 2.0, 1.0);
    for n in 1..=4 {
        out.push((CaseId::IIIb, on_shell(CaseId::IIIb, iiib, n), n));
    }
    // IVa n = 1 has E = p₁ and therefore λ₀ ≤ 0 for every parameter choice
    let iva = params(1.0, 0.3, -1.0, 0.2, 1.0, 0.1, 0.1);
    for n in 2..=4 {
        out.push((CaseId::IVa, iva, n));
    }
    let ivb = params(1.0, 0.3, -1.0, 0.2, 2.0, 0.1, 0.1);
    for n in 1..=4 {
        out.push((CaseId::IVb, ivb, n));
    }
    out
}

pub fn run_config_json(case: CaseId, p: &PhysicalParams, n_min: u32, n_max: u32, grid: (f64, f64, usize)) -> String {
    serde_json::json!({
        "case": case,
        "q": p.q,
        "m": p.m,
        "p1": p.p1,
        "p3": p.p3,
        "alpha": p.alpha,
        "beta0": p.beta0,
        "beta1": p.beta1,
        "n_min": n_min,
        "n_max": n_max,
        "grid": { "x_min": grid.0, "x_max": grid.1, "points": grid.2 },
    })
    .to_string()
}

/// `verify` configs that should all pass.
pub fn verify_acceptance_configs() -> Vec<(String, String)> {
    let mut out = vec![
        (
            "case_i_worked".to_string(),
            run_config_json(CaseId::I, &worked_set(), 0, 1, (-5.0, 10.0, 50)),
        ),
        (
            "case_i_tilted".to_string(),
            run_config_json(CaseId::I, &case_i_sets()[1], 0, 2, (-5.0, 10.0, 50)),
        ),
        (
            "case_ii".to_string(),
            run_config_json(CaseId::II, &case_ii_sets()[0], 0, 2, (0.01, 20.0, 50)),
        ),
    ];
    let iiia = on_shell(CaseId::IIIa, params(1.0, 0.0, 0.5, 0.0, 1.0, 2.0, 1.0), 2);
    out.push(("case_iiia_n2".into(), run_config_json(CaseId::IIIa, &iiia, 2, 2, (0.1, 10.0, 50))));
    let iiib = on_shell(CaseId::IIIb, params(1.0, 0.0, 0.0, 0.0, 2.0, 2.0, 1.0), 3);
    out.push(("case_iiib_n3".into(), run_config_json(CaseId::IIIb, &iiib, 3, 3, (0.1, 10.0, 50))));
    out.push((
        "case_iva".into(),
        run_config_json(CaseId::IVa, &params(1.0, 0.3, -1.0, 0.2, 1.0, 0.1, 0.1), 2, 4, (0.1, 10.0, 50)),
    ));
    out.push((
        "case_ivb".into(),
        run_config_json(CaseId::IVb, &params(1.0, 0.3, -1.0, 0.2, 2.0, 0.1, 0.1), 1, 4, (0.1, 10.0, 50)),
    ));
    out
}

/// ₁F₁(−n; b; z) summed exactly in rationals. Every f64 is a dyadic
/// rational, so the only rounding is the final conversion.
pub fn exact_kummer_polynomial(n: u32, b: f64, z: f64) -> f64 {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    let b = BigRational::from_float(b).unwrap();
    let z = BigRational::from_float(z).unwrap();
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for k in 0..=n {
        sum += &term;
        let kk = BigRational::from_integer(BigInt::from(k));
        let a_k = BigRational::from_integer(BigInt::from(k as i64 - n as i64));
        term = term * a_k * &z / ((&b + &kk) * (kk + BigRational::one()));
    }
    sum.to_f64().unwrap()
}

/// J₁(1) from its Taylor series, summed exactly to 40 terms.
pub fn exact_j1_at_one() -> f64 {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};

    // J₁(1) = Σ (−1)^k / (k! (k+1)! 2^{2k+1})
    let mut sum = BigRational::zero();
    let mut fact_k = BigInt::from(1);
    for k in 0..40u32 {
        if k > 0 {
            fact_k *= BigInt::from(k);
        }
        let fact_k1 = &fact_k * BigInt::from(k + 1);
        let den = &fact_k * fact_k1 * (BigInt::from(1) << (2 * k + 1));
        let term = BigRational::new(BigInt::from(if k % 2 == 0 { 1 } else { -1 }), den);
        sum += term;
    }
    sum.to_f64().unwrap()
}
