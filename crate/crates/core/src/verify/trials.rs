//! Randomized and exhaustive trials on stacks of nonsingular blocks.
//!
//! * `thm3`: four nonsingular `n x n` blocks over GF(3), band repeated twice,
//!   has full perrank; for `n <= 3` the band's row space also satisfies
//!   `ms_i >= 4i`.
//! * `cor4`: the columns of the same four blocks form an additive basis of
//!   `Z_3^n`.
//! * `conj2`: `p` nonsingular blocks over GF(p), band repeated `p - 1` times,
//!   has full perrank. This is open for `p >= 5`, so a pass only means no
//!   counterexample was found.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{
    witness_strs, witness_usize, witness_usizes, CheckOutcome, Instance, Result, Tally,
    VerifyError,
};
use crate::additive::{
    columns, corollary4_trial, random_nonsingular, ReachableSet, TrialOptions, TrialReport,
    VectorZp, Witness,
};
use crate::ff::Field;
use crate::format::{format_matrix, parse_matrix};
use crate::formspace::LinearFormSpace;
use crate::matrix::MatrixF;
use crate::perrank::{full_perrank, stack_matrix, ROW_PRODUCT_MAX_VARS};
use crate::rng::{stream_seed, SplitMix64};

/// Largest block size for the four-block check (`4n` row-product variables).
pub const MAIN_THEOREM_MAX_N: usize = ROW_PRODUCT_MAX_VARS / 4;
/// Largest block size for which the `ms` bound is also checked.
const MS_BOUND_MAX_N: usize = 3;

/// Aggregate per-instance outcomes into one. Instances keep their own
/// verdicts: failures count as evaluated, vacuous ones as skipped.
pub fn summarize(statement: &str, params: Value, outcomes: &[CheckOutcome], start: Instant) -> CheckOutcome {
    let mut tally = Tally::new(statement, params).started_at(start);
    for o in outcomes {
        tally.record(match (&o.verdict, &o.counterexample) {
            (super::Verdict::Fail, Some(w)) => Instance::Failed(w.clone()),
            (super::Verdict::Vacuous, _) => Instance::Skipped,
            _ => Instance::Held,
        });
    }
    tally.finish(None)
}

/// The row space of `(B_1 B_2 ... B_r)`.
fn band_space(blocks: &[MatrixF]) -> Result<LinearFormSpace> {
    let band = stack_matrix(blocks, 1)?;
    Ok(LinearFormSpace::from_matrix(&band)?)
}

fn ms_bound_defect(blocks: &[MatrixF]) -> Result<(Vec<usize>, bool)> {
    let profile = band_space(blocks)?.ms_profile()?;
    let ok = profile.iter().enumerate().all(|(i, &ms)| ms >= 4 * (i + 1));
    Ok((profile, ok))
}

fn four_block_instance(blocks: &[MatrixF], n: usize) -> Result<(Instance, Value)> {
    let full = full_perrank(&stack_matrix(blocks, 2)?)?;
    let mut details = json!({"full_perrank": full});
    let mut ok = full;
    if n <= MS_BOUND_MAX_N {
        let (profile, bound) = ms_bound_defect(blocks)?;
        details["ms_profile"] = json!(profile);
        ok &= bound;
    }
    let instance = if ok {
        Instance::Held
    } else {
        Instance::Failed(json!({"matrices": blocks.iter().map(format_matrix).collect::<Vec<_>>()}))
    };
    Ok((instance, details))
}

fn check_main_n(n: usize) -> Result<()> {
    if n == 0 || n > MAIN_THEOREM_MAX_N {
        return Err(VerifyError::Precondition(format!(
            "block size must be in 1..={MAIN_THEOREM_MAX_N}, got {n}"
        )));
    }
    Ok(())
}

/// One seeded trial of the four-block check. Trial `t` under `seed` draws
/// the same four blocks as [`corollary4_trial`].
pub fn main_theorem_trial(n: usize, seed: u64, trial: u64) -> Result<CheckOutcome> {
    check_main_n(n)?;
    let field = Field::gf3();
    let mut rng = SplitMix64::for_trial(seed, trial);
    let blocks: Vec<MatrixF> = (0..4).map(|_| random_nonsingular(n, field, &mut rng)).collect();
    let params = json!({"n": n, "seed": seed, "trial": trial, "stream_seed": stream_seed(seed, trial)});
    let mut tally = Tally::new("thm3", params);
    let (instance, details) = four_block_instance(&blocks, n)?;
    tally.record(instance);
    Ok(tally.finish(Some(details)))
}

/// Trials `0..trials`, evaluated concurrently and returned in index order.
pub fn main_theorem_trials(n: usize, trials: u64, seed: u64) -> Result<Vec<CheckOutcome>> {
    check_main_n(n)?;
    (0..trials).into_par_iter().map(|t| main_theorem_trial(n, seed, t)).collect()
}

pub fn check_main_theorem(n: usize, trials: u64, seed: u64) -> Result<CheckOutcome> {
    let start = Instant::now();
    let outcomes = main_theorem_trials(n, trials, seed)?;
    Ok(summarize("thm3", json!({"n": n, "trials": trials, "seed": seed}), &outcomes, start))
}

/// All 16 quadruples of nonzero scalars at `n = 1`.
pub fn main_theorem_exhaustive_n1() -> Result<CheckOutcome> {
    let field = Field::gf3();
    let mut tally = Tally::new("thm3", json!({"n": 1, "exhaustive": true}));
    for code in 0..16u32 {
        let blocks: Vec<MatrixF> = (0..4)
            .map(|j| MatrixF::new(field, 1, 1, vec![1 + ((code >> j) & 1) as u8]))
            .collect::<std::result::Result<_, _>>()?;
        tally.record(four_block_instance(&blocks, 1)?.0);
    }
    Ok(tally.finish(None))
}

pub(super) fn replay_main(w: &Value) -> Result<bool> {
    let blocks = parse_blocks(w)?;
    let n = blocks.first().map_or(0, MatrixF::rows);
    check_main_n(n)?;
    Ok(matches!(four_block_instance(&blocks, n)?.0, Instance::Failed(_)))
}

fn parse_blocks(w: &Value) -> Result<Vec<MatrixF>> {
    witness_strs(w, "matrices")?
        .iter()
        .map(|t| Ok(parse_matrix(t)?))
        .collect()
}

/// Reports for trials `0..trials` in index order.
pub fn corollary4_reports(n: usize, trials: u64, seed: u64, opts: TrialOptions) -> Result<Vec<TrialReport>> {
    if n == 0 {
        return Err(VerifyError::Precondition("dimension must be positive".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|t| Ok(corollary4_trial(n, seed, t, opts)?))
        .collect()
}

fn report_witness(r: &TrialReport) -> Value {
    let mut w = json!({"matrices": r.matrices});
    if let Witness::Unreachable(t) = &r.witness {
        w["unreachable"] = json!(t);
    }
    w
}

/// Aggregate over seeded trials; also returns the per-trial reports.
pub fn check_corollary4(
    n: usize,
    trials: u64,
    seed: u64,
    opts: TrialOptions,
) -> Result<(CheckOutcome, Vec<TrialReport>)> {
    let start = Instant::now();
    let reports = corollary4_reports(n, trials, seed, opts)?;
    let params = json!({
        "n": n,
        "trials": trials,
        "seed": seed,
        "targets": opts.targets,
        "check_perrank": opts.check_perrank,
    });
    let mut tally = Tally::new("cor4", params).started_at(start);
    let mut certificates = 0usize;
    for r in &reports {
        if let Witness::Certificates(c) = &r.witness {
            certificates += c.len();
        }
        tally.record(if r.passed() {
            Instance::Held
        } else {
            Instance::Failed(report_witness(r))
        });
    }
    Ok((tally.finish(Some(json!({"certificates": certificates}))), reports))
}

pub(super) fn replay_corollary4(w: &Value) -> Result<bool> {
    let blocks = parse_blocks(w)?;
    let field = Field::gf3();
    let n = blocks.first().map_or(0, MatrixF::rows);
    let mut vs = Vec::new();
    for b in &blocks {
        vs.extend(columns(b)?);
    }
    let reach = ReachableSet::build(field, n, &vs)?;
    if w.get("unreachable").is_some() {
        let coords: Vec<u8> = witness_usizes(w, "unreachable")?.iter().map(|&c| c as u8).collect();
        let target = VectorZp::new(field, coords)?;
        return Ok(!reach.contains(&target));
    }
    if !reach.is_full() {
        return Ok(true);
    }
    Ok(4 * n <= ROW_PRODUCT_MAX_VARS && !full_perrank(&stack_matrix(&blocks, 2)?)?)
}

fn check_conj2_params(p: usize, n: usize) -> Result<Field> {
    let field = match p {
        3 => Field::gf3(),
        5 => Field::gf5(),
        _ => return Err(VerifyError::Precondition(format!("p must be 3 or 5, got {p}"))),
    };
    if n == 0 || p * n > ROW_PRODUCT_MAX_VARS {
        return Err(VerifyError::Precondition(format!(
            "need 1 <= n and p*n <= {ROW_PRODUCT_MAX_VARS}, got p={p}, n={n}"
        )));
    }
    Ok(field)
}

fn conj2_instance(blocks: &[MatrixF], p: usize) -> Result<Instance> {
    Ok(if full_perrank(&stack_matrix(blocks, p - 1)?)? {
        Instance::Held
    } else {
        Instance::Failed(json!({
            "p": p,
            "matrices": blocks.iter().map(format_matrix).collect::<Vec<_>>(),
        }))
    })
}

const CONJ2_CRITERION: &str = "no counterexample found";

pub fn conjecture2_trial(p: usize, n: usize, seed: u64, trial: u64) -> Result<CheckOutcome> {
    let field = check_conj2_params(p, n)?;
    let mut rng = SplitMix64::for_trial(seed, trial);
    let blocks: Vec<MatrixF> = (0..p).map(|_| random_nonsingular(n, field, &mut rng)).collect();
    let params = json!({"p": p, "n": n, "seed": seed, "trial": trial, "stream_seed": stream_seed(seed, trial)});
    let mut tally = Tally::new("conj2", params);
    tally.record(conj2_instance(&blocks, p)?);
    Ok(tally.finish(Some(json!({"criterion": CONJ2_CRITERION}))))
}

pub fn conjecture2_trials(p: usize, n: usize, trials: u64, seed: u64) -> Result<Vec<CheckOutcome>> {
    check_conj2_params(p, n)?;
    (0..trials).into_par_iter().map(|t| conjecture2_trial(p, n, seed, t)).collect()
}

/// Every tuple of `p` nonzero scalars at `n = 1`.
pub fn conjecture2_exhaustive_n1(p: usize) -> Result<CheckOutcome> {
    let field = check_conj2_params(p, 1)?;
    let mut tally = Tally::new("conj2", json!({"p": p, "n": 1, "exhaustive": true}));
    let total = (p - 1).pow(p as u32);
    for mut code in 0..total {
        let blocks: Vec<MatrixF> = (0..p)
            .map(|_| {
                let v = 1 + (code % (p - 1)) as u8;
                code /= p - 1;
                MatrixF::new(field, 1, 1, vec![v])
            })
            .collect::<std::result::Result<_, _>>()?;
        tally.record(conj2_instance(&blocks, p)?);
    }
    Ok(tally.finish(Some(json!({"criterion": CONJ2_CRITERION}))))
}

pub(super) fn replay_conjecture2(w: &Value) -> Result<bool> {
    let p = witness_usize(w, "p")?;
    let blocks = parse_blocks(w)?;
    Ok(!full_perrank(&stack_matrix(&blocks, p - 1)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{replay, Verdict};

    #[test]
    fn exhaustive_n1() {
        let o = main_theorem_exhaustive_n1().unwrap();
        assert_eq!((o.verdict, o.stats.instances), (Verdict::Pass, 16));
    }

    #[test]
    fn trials_pass_and_record_ms() {
        let outcomes = main_theorem_trials(2, 20, 7).unwrap();
        for o in &outcomes {
            assert_eq!(o.verdict, Verdict::Pass);
            let profile = &o.details.as_ref().unwrap()["ms_profile"];
            assert!(profile[0].as_u64().unwrap() >= 4);
            assert!(profile[1].as_u64().unwrap() >= 8);
        }
        let again = main_theorem_trials(2, 20, 7).unwrap();
        let strip = |v: &[CheckOutcome]| -> Vec<String> {
            v.iter().map(|o| o.clone().without_timing().to_json()).collect()
        };
        assert_eq!(strip(&outcomes), strip(&again));
        let agg = check_main_theorem(2, 20, 7).unwrap();
        assert_eq!((agg.verdict, agg.stats.instances), (Verdict::Pass, 20));
    }

    #[test]
    fn ms_bound_on_identity_blocks() {
        let f = Field::gf3();
        let i = MatrixF::identity(f, 2);
        let (profile, ok) = ms_bound_defect(&[i.clone(), i.clone(), i.clone(), i]).unwrap();
        assert_eq!(profile, vec![4, 8]);
        assert!(ok);
    }

    #[test]
    fn replay_of_a_synthetic_failure() {
        let f = Field::gf3();
        let one = MatrixF::identity(f, 1);
        let zero = MatrixF::zeros(f, 1, 1);
        let blocks = vec![one.clone(), zero.clone(), zero.clone(), zero];
        let (instance, _) = four_block_instance(&blocks, 1).unwrap();
        let Instance::Failed(w) = instance else { panic!("expected failure") };
        let mut o = main_theorem_exhaustive_n1().unwrap();
        o.statement = "thm3".into();
        o.counterexample = Some(w);
        assert!(replay(&o).unwrap());
        let good = json!({"matrices": vec![format_matrix(&one); 4]});
        o.counterexample = Some(good);
        assert!(!replay(&o).unwrap());
    }

    #[test]
    fn corollary4_aggregate() {
        let opts = TrialOptions { targets: 20, check_perrank: true };
        let (o, reports) = check_corollary4(3, 30, 1, opts).unwrap();
        assert_eq!(o.verdict, Verdict::Pass);
        assert_eq!(reports.len(), 30);
        assert_eq!(o.details.as_ref().unwrap()["certificates"], 600);
        let zero = MatrixF::zeros(Field::gf3(), 1, 1);
        let mut failing = o.clone();
        failing.statement = "cor4".into();
        failing.counterexample = Some(json!({
            "matrices": vec![format_matrix(&zero); 4],
            "unreachable": [1],
        }));
        assert!(replay(&failing).unwrap());
    }

    #[test]
    fn conjecture2_small() {
        let o = conjecture2_exhaustive_n1(3).unwrap();
        assert_eq!((o.verdict, o.stats.instances), (Verdict::Pass, 8));
        let o = conjecture2_exhaustive_n1(5).unwrap();
        assert_eq!(o.stats.instances, 1024);
        assert_eq!(o.details.unwrap()["criterion"], CONJ2_CRITERION);
        for o in conjecture2_trials(3, 2, 20, 4).unwrap() {
            assert_eq!(o.verdict, Verdict::Pass);
        }
        assert!(conjecture2_trial(7, 1, 0, 0).is_err());
        assert!(conjecture2_trial(5, 5, 0, 0).is_err());
    }
}
