//! Chains of subspaces covering tails of a sequence.

use serde_json::{json, Value};

use super::{witness_str, witness_usizes, CheckOutcome, Instance, Result, Tally};
use crate::ff::Field;
use crate::format::{format_matrix, parse_matrix};
use crate::formspace::{lemma6_chain, LinearFormSpace};
use crate::rng::SplitMix64;

/// Whether `chain` is `U_0 ⊂ ... ⊂ U_n ⊆ U` with `dim U_k = k` and `U_k`
/// covering the last `k` entries of `seq`. Returns a description of the
/// first violated property.
fn chain_defect(u: &LinearFormSpace, seq: &[usize], chain: &[LinearFormSpace]) -> Result<Option<String>> {
    let n = u.dim();
    if chain.len() != n + 1 {
        return Ok(Some(format!("chain has {} members, expected {}", chain.len(), n + 1)));
    }
    let top = u.embed(chain[n].field())?;
    for (k, space) in chain.iter().enumerate() {
        if space.dim() != k {
            return Ok(Some(format!("U_{k} has dimension {}", space.dim())));
        }
        if let Some(next) = chain.get(k + 1) {
            if !space.basis().iter().all(|r| next.contains_row(r)) {
                return Ok(Some(format!("U_{k} is not contained in U_{}", k + 1)));
            }
        }
        if !space.covers(&seq[n - k..])? {
            return Ok(Some(format!("U_{k} does not cover its tail")));
        }
    }
    if !chain[n].basis().iter().all(|r| top.contains_row(r)) {
        return Ok(Some(format!("U_{n} is not contained in U")));
    }
    Ok(None)
}

fn witness(u: &LinearFormSpace, seq: &[usize]) -> Value {
    json!({"basis": format_matrix(&u.to_matrix()), "seq": seq})
}

/// Build the chain and verify it independently. Fails when no field up to
/// GF(27) yields a chain or when the returned chain is defective.
pub fn check_lemma6(u: &LinearFormSpace, seq: &[usize]) -> Result<CheckOutcome> {
    let params = json!({
        "field": u.field().name(),
        "m": u.num_vars(),
        "n": u.dim(),
        "seq": seq,
        "basis": format_matrix(&u.to_matrix()),
    });
    let mut tally = Tally::new("lemma6", params);
    let outcome = lemma6_chain(u, seq)?;
    let mut details = json!({"attempts": outcome.attempts, "field": outcome.field()});
    match &outcome.chain {
        None => tally.record(Instance::Failed(witness(u, seq))),
        Some(chain) => match chain_defect(u, seq, chain)? {
            None => tally.record(Instance::Held),
            Some(defect) => {
                details["defect"] = json!(defect);
                tally.record(Instance::Failed(witness(u, seq)));
            }
        },
    }
    Ok(tally.finish(Some(details)))
}

pub(super) fn replay(w: &Value) -> Result<bool> {
    let u = LinearFormSpace::from_matrix(&parse_matrix(witness_str(w, "basis")?)?)?;
    let seq = witness_usizes(w, "seq")?;
    let outcome = lemma6_chain(&u, &seq)?;
    Ok(match &outcome.chain {
        None => true,
        Some(chain) => chain_defect(&u, &seq, chain)?.is_some(),
    })
}

/// A random space over GF(3) with `1 <= dim <= max_dim` in
/// `dim..=max_vars` variables, together with its own `ms` profile.
pub fn random_lemma6_space(
    max_dim: usize,
    max_vars: usize,
    rng: &mut SplitMix64,
) -> Result<(LinearFormSpace, Vec<usize>)> {
    let n = rng.range_inclusive(1, max_dim as u64) as usize;
    let m = rng.range_inclusive(n as u64, max_vars as u64) as usize;
    let u = super::random_space(Field::gf3(), n, m, rng);
    let profile = u.ms_profile()?;
    Ok((u, profile))
}

/// One seeded instance from [`random_lemma6_space`], checked against its own
/// profile.
pub fn lemma6_random_trial(max_dim: usize, max_vars: usize, seed: u64, trial: u64) -> Result<CheckOutcome> {
    let mut rng = SplitMix64::for_trial(seed, trial);
    let (u, seq) = random_lemma6_space(max_dim, max_vars, &mut rng)?;
    let mut o = check_lemma6(&u, &seq)?;
    o.params["seed"] = json!(seed);
    o.params["trial"] = json!(trial);
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{replay as replay_outcome, Verdict};

    fn space(rows: &[&[u8]]) -> LinearFormSpace {
        LinearFormSpace::new(Field::gf3(), rows[0].len(), rows.iter().map(|r| r.to_vec()).collect())
            .unwrap()
    }

    #[test]
    fn two_blocks() {
        let u = space(&[&[1, 1, 0, 0, 0, 0], &[0, 0, 1, 1, 1, 1]]);
        let o = check_lemma6(&u, &[2, 6]).unwrap();
        assert_eq!(o.verdict, Verdict::Pass);
        assert_eq!(o.details.unwrap()["field"], "gf3");
    }

    #[test]
    fn one_dimensional() {
        let u = space(&[&[1, 2, 0, 1]]);
        assert_eq!(check_lemma6(&u, &[3]).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn escalation_is_recorded() {
        let u = space(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]);
        let o = check_lemma6(&u, &[3, 4]).unwrap();
        assert_eq!(o.verdict, Verdict::Pass);
        assert_eq!(o.details.unwrap()["field"], "gf9");
    }

    #[test]
    fn defects_are_detected() {
        let u = space(&[&[1, 1, 0, 0, 0, 0], &[0, 0, 1, 1, 1, 1]]);
        let mut chain = lemma6_chain(&u, &[2, 6]).unwrap().chain.unwrap();
        assert!(chain_defect(&u, &[2, 6], &chain).unwrap().is_none());
        chain[1] = space(&[&[1, 1, 0, 0, 0, 0]]);
        assert!(chain_defect(&u, &[2, 6], &chain).unwrap().is_some());
        chain.pop();
        assert!(chain_defect(&u, &[2, 6], &chain).unwrap().is_some());
    }

    #[test]
    fn random_instances_and_replay() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..10 {
            let (u, seq) = random_lemma6_space(3, 8, &mut rng).unwrap();
            let mut o = check_lemma6(&u, &seq).unwrap();
            assert_eq!(o.verdict, Verdict::Pass, "{o:?}");
            o.counterexample = Some(witness(&u, &seq));
            assert!(!replay_outcome(&o).unwrap());
        }
    }
}
