//! Annihilators of a space of linear forms and of its `2n`-th power.
//!
//! For `U` of dimension `n` with basis `u_1, ..., u_n`, the power `U^{2n}`
//! is spanned by the single element `w = u_1^2 ... u_n^2` (cubes vanish, so
//! every product of `2n` forms from `U` is a multiple of `w`). This reduction
//! is checked separately by [`power_span_matches`].
//!
//! Part A: `ms_i(U) >= 4i - 2 + 2k` for all `i` implies
//! `kr_k(U^{2n}) = im_k(U)`.
//! Part B: `ms_i(U) >= 4i - 3 + 2k` for all `i` implies
//! `kr_{2n-2+k}(U) = im_{2n-2+k}(U^{2n})`.

use serde_json::{json, Value};

use super::{witness_str, witness_usize, CheckOutcome, Instance, Result, Tally, Verdict, VerifyError};
use crate::algebra::{annihilator_k, ideal_component_k, product, Element, GradedSubspace};
use crate::ff::Field;
use crate::format::{format_matrix, parse_matrix};
use crate::formspace::{projective_points, LinearFormSpace};
use crate::rng::SplitMix64;

/// Largest graded piece (in monomials) either side of a comparison may use.
pub const MAX_COORDINATES: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part7 {
    A,
    B,
}

impl Part7 {
    pub fn id(self) -> &'static str {
        match self {
            Part7::A => "thm7.A",
            Part7::B => "thm7.B",
        }
    }

    fn letter(self) -> &'static str {
        match self {
            Part7::A => "A",
            Part7::B => "B",
        }
    }
}

/// Lower bounds on `(ms_1, ..., ms_n)` required by the chosen part.
pub fn theorem7_required(n: usize, k: usize, part: Part7) -> Vec<usize> {
    (1..=n)
        .map(|i| match part {
            Part7::A => 4 * i - 2 + 2 * k,
            Part7::B => 4 * i - 3 + 2 * k,
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

fn guard(m: usize, degree: usize) -> Result<()> {
    let size = binomial(m, degree);
    if size > MAX_COORDINATES {
        return Err(VerifyError::Precondition(format!(
            "degree-{degree} piece of the {m}-variable algebra has {size} monomials, cap is {MAX_COORDINATES}"
        )));
    }
    Ok(())
}

/// `u_1^2 ... u_n^2` over the basis of `U`.
fn square_product(u: &LinearFormSpace) -> Element {
    let squares: Vec<Element> = u.forms().iter().map(|f| f * f).collect();
    product(u.field(), u.num_vars(), &squares)
}

/// `(kr, im)` for the chosen part, evaluated regardless of the hypothesis.
pub fn theorem7_sides(
    u: &LinearFormSpace,
    k: usize,
    part: Part7,
) -> Result<(GradedSubspace, GradedSubspace)> {
    let n = u.dim();
    let m = u.num_vars();
    if n == 0 {
        return Err(VerifyError::Precondition("U must be nonzero".into()));
    }
    let w = square_product(u);
    let forms = u.forms();
    Ok(match part {
        Part7::A => {
            guard(m, k)?;
            guard(m, (k + 2 * n).min(m))?;
            (annihilator_k(&[w], k)?, ideal_component_k(&forms, k)?)
        }
        Part7::B => {
            let d = 2 * n - 2 + k;
            guard(m, d)?;
            guard(m, (d + 1).min(m))?;
            (annihilator_k(&forms, d)?, ideal_component_k(&[w], d)?)
        }
    })
}

fn witness(u: &LinearFormSpace, k: usize, part: Part7) -> Value {
    json!({"k": k, "part": part.letter(), "basis": format_matrix(&u.to_matrix())})
}

/// One instance. Vacuous when the `ms` hypothesis fails.
pub fn check_theorem7(u: &LinearFormSpace, k: usize, part: Part7) -> Result<CheckOutcome> {
    let n = u.dim();
    let params = json!({
        "field": u.field().name(),
        "m": u.num_vars(),
        "n": n,
        "k": k,
        "basis": format_matrix(&u.to_matrix()),
    });
    let mut tally = Tally::new(part.id(), params);
    let profile = u.ms_profile()?;
    let required = theorem7_required(n, k, part);
    let met = profile.iter().zip(&required).all(|(a, b)| a >= b);
    let mut details = json!({"ms_profile": profile, "required": required});
    if !met {
        tally.record(Instance::Skipped);
        return Ok(tally.finish(Some(details)));
    }
    let (kr, im) = theorem7_sides(u, k, part)?;
    details["kr_dim"] = json!(kr.dim());
    details["im_dim"] = json!(im.dim());
    tally.record(if kr.equal(&im)? {
        Instance::Held
    } else {
        Instance::Failed(witness(u, k, part))
    });
    Ok(tally.finish(Some(details)))
}

pub(super) fn replay(w: &Value) -> Result<bool> {
    let k = witness_usize(w, "k")?;
    let part = match witness_str(w, "part")? {
        "A" => Part7::A,
        "B" => Part7::B,
        other => return Err(VerifyError::Witness(format!("unknown part {other:?}"))),
    };
    let u = LinearFormSpace::from_matrix(&parse_matrix(witness_str(w, "basis")?)?)?;
    let (kr, im) = theorem7_sides(&u, k, part)?;
    Ok(!kr.equal(&im)?)
}

/// Draws before a random trial gives up looking for a space that meets the
/// hypothesis.
const COVERING_ATTEMPTS: usize = 1000;

/// One seeded trial over GF(3): `m` uniform in `m_min..=m_max`, then a random
/// `n`-dimensional space meeting the hypothesis of `part` (vacuous when none
/// turns up).
pub fn theorem7_random_trial(
    n: usize,
    k: usize,
    part: Part7,
    m_range: (usize, usize),
    seed: u64,
    trial: u64,
) -> Result<CheckOutcome> {
    let (m_min, m_max) = m_range;
    if n == 0 || m_min < n || m_max < m_min {
        return Err(VerifyError::Precondition(format!(
            "need 1 <= n <= m_min <= m_max, got n={n}, m in {m_min}..={m_max}"
        )));
    }
    let mut rng = SplitMix64::for_trial(seed, trial);
    let m = rng.range_inclusive(m_min as u64, m_max as u64) as usize;
    let required = theorem7_required(n, k, part);
    let mut outcome = match random_covering_space(Field::gf3(), m, &required, COVERING_ATTEMPTS, &mut rng)? {
        Some(u) => check_theorem7(&u, k, part)?,
        None => {
            let mut tally = Tally::new(part.id(), json!({"field": "gf3", "m": m, "n": n, "k": k}));
            tally.record(Instance::Skipped);
            tally.finish(Some(json!({"required": required, "note": "no covering space drawn"})))
        }
    };
    outcome.params["seed"] = json!(seed);
    outcome.params["trial"] = json!(trial);
    Ok(outcome)
}

/// Every single form over GF(3) in `m` variables (first nonzero coefficient
/// 1), aggregated. Forms failing the hypothesis count as skipped.
pub fn check_theorem7_exhaustive_n1(m: usize, k: usize, part: Part7) -> Result<CheckOutcome> {
    if m == 0 || m > 8 {
        return Err(VerifyError::Precondition(format!("need 1 <= m <= 8, got {m}")));
    }
    let field = Field::gf3();
    let forms = projective_points(field, m);
    let mut tally = Tally::new(part.id(), json!({"field": "gf3", "m": m, "n": 1, "k": k, "exhaustive": true}));
    for c in &forms {
        let u = LinearFormSpace::new(field, m, vec![c.clone()])?;
        let o = check_theorem7(&u, k, part)?;
        tally.record(match (o.verdict, o.counterexample) {
            (Verdict::Fail, Some(w)) => Instance::Failed(w),
            (Verdict::Vacuous, _) => Instance::Skipped,
            _ => Instance::Held,
        });
    }
    Ok(tally.finish(Some(json!({"forms": forms.len()}))))
}

/// One seeded instance of the span reduction: `n` uniform in `1..=2`, `m`
/// uniform in `2n..=max_vars`, and `samples` random products.
pub fn power_span_trial(max_vars: usize, samples: usize, seed: u64, trial: u64) -> Result<bool> {
    if max_vars < 4 {
        return Err(VerifyError::Precondition("need at least 4 variables".into()));
    }
    let mut rng = SplitMix64::for_trial(seed, trial);
    let n = rng.range_inclusive(1, 2) as usize;
    let m = rng.range_inclusive(2 * n as u64, max_vars as u64) as usize;
    let u = random_space(Field::gf3(), n, m, &mut rng);
    power_span_matches(&u, samples, &mut rng)
}

/// Uniform `n`-dimensional space of forms in `m` variables, by rejection.
pub fn random_space(field: Field, n: usize, m: usize, rng: &mut SplitMix64) -> LinearFormSpace {
    assert!(n >= 1 && n <= m, "need 1 <= n <= m");
    loop {
        let mat = rng.matrix(field, n, m);
        if mat.rank() == n {
            return LinearFormSpace::from_matrix(&mat).expect("full rank");
        }
    }
}

/// A random space whose `ms` profile dominates `required`, or `None` after
/// `attempts` rejected draws.
pub fn random_covering_space(
    field: Field,
    m: usize,
    required: &[usize],
    attempts: usize,
    rng: &mut SplitMix64,
) -> Result<Option<LinearFormSpace>> {
    for _ in 0..attempts {
        let u = random_space(field, required.len(), m, rng);
        if u.covers(required)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Whether `samples` random products of `2n` elements of `U` span the same
/// degree-`2n` subspace as `u_1^2 ... u_n^2`.
pub fn power_span_matches(u: &LinearFormSpace, samples: usize, rng: &mut SplitMix64) -> Result<bool> {
    let field = u.field();
    let (n, m) = (u.dim(), u.num_vars());
    if 2 * n > m {
        // A_{2n} = 0
        return Ok(true);
    }
    let products: Vec<Element> = (0..samples)
        .map(|_| {
            let factors: Vec<Element> = (0..2 * n)
                .map(|_| {
                    let c: Vec<u8> = (0..n).map(|_| rng.scalar(field)).collect();
                    Element::linear(field, &u.combination(&c))
                })
                .collect();
            product(field, m, &factors)
        })
        .collect();
    let sampled = GradedSubspace::span(field, m, 2 * n, &products)?;
    let single = GradedSubspace::span(field, m, 2 * n, &[square_product(u)])?;
    Ok(sampled.equal(&single)?)
}
