//! Executable checks of the statements about the squarefree algebra, the
//! four-block stack and additive bases.
//!
//! Every check produces a [`CheckOutcome`] with one of three verdicts:
//!
//! * `pass`: the claim was evaluated on at least one instance and held
//!   everywhere;
//! * `fail`: some instance violated the claim, and `counterexample` carries
//!   a witness that [`replay`] re-evaluates from scratch;
//! * `vacuous`: no instance met the hypotheses, so nothing was tested.
//!
//! `passed` is true only for `pass`, and a counterexample is present exactly
//! when the verdict is `fail`.

mod lemma6;
mod theorem5;
mod theorem7;
mod trials;

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::additive::AdditiveError;
use crate::algebra::AlgebraError;
use crate::ff::FieldError;
use crate::format::ParseError;
use crate::formspace::FormSpaceError;
use crate::matrix::MatrixError;
use crate::perrank::PerrankError;

pub use lemma6::{check_lemma6, lemma6_random_trial, random_lemma6_space};
pub use theorem5::{check_theorem5, check_theorem5_exhaustive, theorem5_sides, Part5};
pub use theorem7::{
    check_theorem7, check_theorem7_exhaustive_n1, power_span_matches, power_span_trial,
    random_covering_space, random_space, theorem7_random_trial, theorem7_required, theorem7_sides,
    Part7, MAX_COORDINATES,
};
pub use trials::{
    check_corollary4, check_main_theorem, conjecture2_exhaustive_n1, conjecture2_trial,
    conjecture2_trials, corollary4_reports, main_theorem_exhaustive_n1, main_theorem_trial,
    main_theorem_trials, summarize, MAIN_THEOREM_MAX_N,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    FormSpace(#[from] FormSpaceError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Perrank(#[from] PerrankError),
    #[error(transparent)]
    Additive(#[from] AdditiveError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Precondition(String),
    #[error("malformed witness: {0}")]
    Witness(String),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Instances on which the claim was evaluated.
    pub instances: u64,
    /// Instances whose hypotheses were not met.
    pub skipped: u64,
    /// Wall-clock time. Not covered by the determinism contract.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub statement: String,
    pub params: Value,
    pub verdict: Verdict,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    pub stats: Stats,
}

impl CheckOutcome {
    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn without_timing(mut self) -> Self {
        self.stats.elapsed_ms = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("outcomes serialize")
    }
}

/// Result of evaluating one instance.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Instance {
    Held,
    Skipped,
    Failed(Value),
}

/// Running tally that becomes a [`CheckOutcome`].
pub(crate) struct Tally {
    statement: String,
    params: Value,
    held: u64,
    skipped: u64,
    counterexample: Option<Value>,
    start: Instant,
}

impl Tally {
    pub(crate) fn new(statement: &str, params: Value) -> Self {
        Tally {
            statement: statement.into(),
            params,
            held: 0,
            skipped: 0,
            counterexample: None,
            start: Instant::now(),
        }
    }

    pub(crate) fn started_at(mut self, start: Instant) -> Self {
        self.start = start;
        self
    }

    /// Record an instance. Only the first failure is kept as the witness.
    pub(crate) fn record(&mut self, instance: Instance) {
        match instance {
            Instance::Held => self.held += 1,
            Instance::Skipped => self.skipped += 1,
            Instance::Failed(w) => {
                self.held += 1;
                self.counterexample.get_or_insert(w);
            }
        }
    }

    pub(crate) fn finish(self, details: Option<Value>) -> CheckOutcome {
        let verdict = if self.counterexample.is_some() {
            Verdict::Fail
        } else if self.held == 0 {
            Verdict::Vacuous
        } else {
            Verdict::Pass
        };
        CheckOutcome {
            statement: self.statement,
            params: self.params,
            verdict,
            passed: verdict == Verdict::Pass,
            counterexample: self.counterexample,
            details,
            stats: Stats {
                instances: self.held,
                skipped: self.skipped,
                elapsed_ms: Some(self.start.elapsed().as_millis() as u64),
            },
        }
    }
}

pub(crate) fn witness_str<'a>(w: &'a Value, key: &str) -> Result<&'a str> {
    w.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| VerifyError::Witness(format!("missing string field {key:?}")))
}

pub(crate) fn witness_usize(w: &Value, key: &str) -> Result<usize> {
    w.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| VerifyError::Witness(format!("missing integer field {key:?}")))
}

pub(crate) fn witness_usizes(w: &Value, key: &str) -> Result<Vec<usize>> {
    w.get(key)
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(|v| v.as_u64().map(|x| x as usize)).collect())
        .ok_or_else(|| VerifyError::Witness(format!("missing integer list {key:?}")))
}

pub(crate) fn witness_strs(w: &Value, key: &str) -> Result<Vec<String>> {
    w.get(key)
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(|v| v.as_str().map(String::from)).collect())
        .ok_or_else(|| VerifyError::Witness(format!("missing string list {key:?}")))
}

/// Re-evaluate the counterexample of a failed outcome from its serialized
/// form. Returns `true` when the failure reproduces. The claim is evaluated
/// directly, without re-checking hypotheses, so a witness can also be used
/// to demonstrate what goes wrong outside them.
pub fn replay(outcome: &CheckOutcome) -> Result<bool> {
    let w = outcome
        .counterexample
        .as_ref()
        .ok_or_else(|| VerifyError::Witness("outcome has no counterexample".into()))?;
    match outcome.statement.as_str() {
        "thm5.1" | "thm5.2" => theorem5::replay(w),
        "thm7.A" | "thm7.B" => theorem7::replay(w),
        "lemma6" => lemma6::replay(w),
        "thm3" => trials::replay_main(w),
        "cor4" => trials::replay_corollary4(w),
        "conj2" => trials::replay_conjecture2(w),
        other => Err(VerifyError::Witness(format!("unknown statement {other:?}"))),
    }
}
