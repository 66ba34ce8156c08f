//! Annihilators of a linear form and of its square.
//!
//! Part 1: `kr_k(u) = im_k(u^2)` when `|supp(u)| >= 2k+1`.
//! Part 2: `kr_k(u^2) = im_k(u)` when `|supp(u)| >= 2k+2`.

use serde_json::{json, Value};

use super::{witness_str, witness_usize, Instance, Result, Tally, VerifyError};
use crate::algebra::{annihilator_k, ideal_component_k, AlgebraError, Element, GradedSubspace};
use crate::ff::Field;
use crate::formspace::projective_points;

const EXHAUSTIVE_MAX_VARS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part5 {
    One,
    Two,
}

impl Part5 {
    fn id(self) -> &'static str {
        match self {
            Part5::One => "thm5.1",
            Part5::Two => "thm5.2",
        }
    }

    fn min_support(self, k: usize) -> usize {
        match self {
            Part5::One => 2 * k + 1,
            Part5::Two => 2 * k + 2,
        }
    }
}

/// `(kr, im)` for the chosen part, evaluated regardless of the hypothesis.
pub fn theorem5_sides(u: &Element, k: usize, part: Part5) -> Result<(GradedSubspace, GradedSubspace)> {
    if u.degrees().iter().any(|&d| d != 1) {
        return Err(AlgebraError::NotLinear.into());
    }
    let u2 = u * u;
    Ok(match part {
        Part5::One => (
            annihilator_k(std::slice::from_ref(u), k)?,
            ideal_component_k(&[u2], k)?,
        ),
        Part5::Two => (
            annihilator_k(&[u2], k)?,
            ideal_component_k(std::slice::from_ref(u), k)?,
        ),
    })
}

fn witness(u: &Element, k: usize, part: Part5) -> Value {
    let part = match part {
        Part5::One => 1,
        Part5::Two => 2,
    };
    json!({"field": u.field().name(), "m": u.num_vars(), "k": k, "part": part, "u": u.to_string()})
}

/// Evaluate one part on one instance.
fn instance(u: &Element, k: usize, part: Part5) -> Result<(Instance, Value)> {
    let supp = u.support().len();
    let met = supp >= part.min_support(k);
    if !met && k > u.num_vars() {
        return Ok((Instance::Skipped, json!({"hypothesis": "unmet"})));
    }
    let (kr, im) = theorem5_sides(u, k, part)?;
    let equal = kr.equal(&im)?;
    let details = json!({
        "hypothesis": if met { "met" } else { "unmet" },
        "kr_dim": kr.dim(),
        "im_dim": im.dim(),
        "equal": equal,
    });
    let result = if !met {
        Instance::Skipped
    } else if equal {
        Instance::Held
    } else {
        Instance::Failed(witness(u, k, part))
    };
    Ok((result, details))
}

/// Both parts at one `(u, k)`. A part whose support hypothesis fails is
/// reported as vacuous; its details still record whether the two sides
/// happen to agree.
pub fn check_theorem5(u: &Element, k: usize) -> Result<Vec<super::CheckOutcome>> {
    let mut out = Vec::with_capacity(2);
    for part in [Part5::One, Part5::Two] {
        let params = json!({
            "field": u.field().name(),
            "m": u.num_vars(),
            "k": k,
            "u": u.to_string(),
            "support": u.support().len(),
        });
        let mut tally = Tally::new(part.id(), params);
        let (result, details) = instance(u, k, part)?;
        tally.record(result);
        out.push(tally.finish(Some(details)));
    }
    Ok(out)
}

/// Every linear form over GF(3) in `m` variables with first nonzero
/// coefficient 1, and every `1 <= k <= k_max`. Returns one aggregate per part.
pub fn check_theorem5_exhaustive(m: usize, k_max: usize) -> Result<Vec<super::CheckOutcome>> {
    if m == 0 || m > EXHAUSTIVE_MAX_VARS {
        return Err(VerifyError::Precondition(format!(
            "exhaustive check needs 1 <= m <= {EXHAUSTIVE_MAX_VARS}, got {m}"
        )));
    }
    let field = Field::gf3();
    let forms = projective_points(field, m);
    let mut out = Vec::with_capacity(2);
    for part in [Part5::One, Part5::Two] {
        let params = json!({"field": field.name(), "m": m, "k_max": k_max});
        let mut tally = Tally::new(part.id(), params);
        for coeffs in &forms {
            let u = Element::linear(field, coeffs);
            let supp = u.support().len();
            for k in 1..=k_max {
                if supp < part.min_support(k) {
                    tally.record(Instance::Skipped);
                    continue;
                }
                let (kr, im) = theorem5_sides(&u, k, part)?;
                tally.record(if kr.equal(&im)? {
                    Instance::Held
                } else {
                    Instance::Failed(witness(&u, k, part))
                });
            }
        }
        out.push(tally.finish(Some(json!({"forms": forms.len()}))));
    }
    Ok(out)
}

pub(super) fn replay(w: &Value) -> Result<bool> {
    let field = Field::by_name(witness_str(w, "field")?)?;
    let m = witness_usize(w, "m")?;
    let k = witness_usize(w, "k")?;
    let u = Element::parse(field, m, witness_str(w, "u")?)?;
    let part = match witness_usize(w, "part")? {
        1 => Part5::One,
        2 => Part5::Two,
        p => return Err(VerifyError::Witness(format!("unknown part {p}"))),
    };
    let (kr, im) = theorem5_sides(&u, k, part)?;
    Ok(!kr.equal(&im)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{replay as replay_outcome, Verdict};

    fn form(coeffs: &[u8]) -> Element {
        Element::linear(Field::gf3(), coeffs)
    }

    #[test]
    fn three_variable_example() {
        let out = check_theorem5(&form(&[1, 1, 1]), 1).unwrap();
        assert_eq!(out[0].verdict, Verdict::Pass);
        assert_eq!(out[0].details.as_ref().unwrap()["kr_dim"], 0);
        assert_eq!(out[1].verdict, Verdict::Vacuous);
    }

    #[test]
    fn four_variable_part_two() {
        let out = check_theorem5(&form(&[1, 1, 1, 1]), 1).unwrap();
        assert_eq!(out[1].verdict, Verdict::Pass);
        assert_eq!(out[1].details.as_ref().unwrap()["kr_dim"], 1);
    }

    #[test]
    fn tightness_witness() {
        let u = form(&[1, 1]);
        let out = check_theorem5(&u, 1).unwrap();
        assert_eq!(out[0].verdict, Verdict::Vacuous);
        assert_eq!(out[0].details.as_ref().unwrap()["equal"], false);
        let (kr, im) = theorem5_sides(&u, 1, Part5::One).unwrap();
        assert!(kr.contains(&form(&[1, 2])).unwrap());
        assert!(im.is_zero());
    }

    #[test]
    fn exhaustive_small() {
        let out = check_theorem5_exhaustive(3, 1).unwrap();
        assert_eq!(out[0].verdict, Verdict::Pass);
        assert_eq!(out[0].details.as_ref().unwrap()["forms"], 13);
        assert_eq!(out[0].stats.instances, 4);
        assert_eq!(out[1].verdict, Verdict::Vacuous);
        let out = check_theorem5_exhaustive(2, 1).unwrap();
        assert!(out.iter().all(|o| o.verdict == Verdict::Vacuous));
        assert!(check_theorem5_exhaustive(8, 1).is_err());
    }

    #[test]
    fn replaying_an_out_of_hypothesis_witness() {
        let mut o = check_theorem5(&form(&[1, 1]), 1).unwrap().remove(0);
        o.counterexample = Some(witness(&form(&[1, 1]), 1, Part5::One));
        assert!(replay_outcome(&o).unwrap());
        o.counterexample = Some(witness(&form(&[1, 1, 1]), 1, Part5::One));
        assert!(!replay_outcome(&o).unwrap());
    }
}
