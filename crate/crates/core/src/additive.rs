//! Additive bases of `Z_p^n`.
//!
//! A multiset of vectors is an additive basis when every vector of the space
//! is a sum of a sub-multiset (all coefficients 0 or 1). [`ReachableSet`]
//! decides this with a subset-sum dynamic program over all `p^n` states and
//! keeps, for every reached state, the index of the vector that first reached
//! it. Following those parent pointers yields a 0/1 certificate in which
//! every vector is used at most once.

use serde::Serialize;
use thiserror::Error;

use crate::ff::Field;
use crate::format::format_matrix;
use crate::matrix::MatrixF;
use crate::perrank::{full_perrank, stack_matrix, PerrankError, ROW_PRODUCT_MAX_VARS};
use crate::rng::{stream_seed, SplitMix64};

/// Default state budget: `3^14`.
pub const DEFAULT_MAX_STATES: usize = 4_782_969;

const UNREACHED: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdditiveError {
    #[error("additive bases need a prime field, got {0}")]
    NotPrimeField(String),
    #[error("vector {index} has dimension {got}, expected {expected}")]
    Dimension { index: usize, got: usize, expected: usize },
    #[error("p^n = {states} states exceeds the budget {budget}")]
    Budget { states: u128, budget: usize },
    #[error("certificate for {target:?} does not sum to its target")]
    BadCertificate { target: Vec<u8> },
    #[error(transparent)]
    Perrank(#[from] PerrankError),
}

/// A vector of `Z_p^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct VectorZp {
    #[serde(skip)]
    field: Field,
    coords: Vec<u8>,
}

impl VectorZp {
    pub fn new(field: Field, coords: Vec<u8>) -> Result<Self, AdditiveError> {
        if !field.is_prime_field() {
            return Err(AdditiveError::NotPrimeField(field.name().into()));
        }
        assert!(coords.iter().all(|&c| field.contains(c)), "non-canonical coordinate");
        Ok(VectorZp { field, coords })
    }

    pub fn zero(field: Field, n: usize) -> Self {
        VectorZp { field, coords: vec![0; n] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn add(&self, other: &VectorZp) -> VectorZp {
        let f = self.field;
        VectorZp {
            field: f,
            coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }
}

/// The columns of a matrix as vectors.
pub fn columns(m: &MatrixF) -> Result<Vec<VectorZp>, AdditiveError> {
    (0..m.cols()).map(|c| VectorZp::new(m.field(), m.column(c))).collect()
}

/// Sum of the vectors selected by 0/1 coefficients.
pub fn sum_selected(field: Field, n: usize, vs: &[VectorZp], coeffs: &[u8]) -> VectorZp {
    vs.iter()
        .zip(coeffs)
        .filter(|(_, &c)| c == 1)
        .fold(VectorZp::zero(field, n), |acc, (v, _)| acc.add(v))
}

/// Subset sums of an ordered multiset of vectors, with parent pointers.
#[derive(Debug, Clone)]
pub struct ReachableSet {
    field: Field,
    n: usize,
    vectors: Vec<VectorZp>,
    /// For each state index: the vector that first reached it, `ROOT` for
    /// the zero state, `UNREACHED` otherwise.
    parent: Vec<u32>,
    reached: usize,
}

impl ReachableSet {
    pub fn build(field: Field, n: usize, vs: &[VectorZp]) -> Result<Self, AdditiveError> {
        Self::build_with_budget(field, n, vs, DEFAULT_MAX_STATES)
    }

    pub fn build_with_budget(
        field: Field,
        n: usize,
        vs: &[VectorZp],
        budget: usize,
    ) -> Result<Self, AdditiveError> {
        if !field.is_prime_field() {
            return Err(AdditiveError::NotPrimeField(field.name().into()));
        }
        for (index, v) in vs.iter().enumerate() {
            if v.dim() != n || v.field != field {
                return Err(AdditiveError::Dimension { index, got: v.dim(), expected: n });
            }
        }
        let p = field.order();
        let states = (p as u128).pow(n as u32);
        if states > budget as u128 {
            return Err(AdditiveError::Budget { states, budget });
        }
        let total = states as usize;
        let mut parent = vec![UNREACHED; total];
        parent[0] = ROOT;
        let mut order: Vec<u32> = vec![0];
        // states split as hi * lo_size + lo, each half shifted by table lookup
        let lo_digits = n / 2;
        let lo_size = p.pow(lo_digits as u32);
        for (idx, v) in vs.iter().enumerate() {
            if order.len() == total {
                break;
            }
            let lo_shift = shift_table(field, &v.coords[..lo_digits]);
            let hi_shift = shift_table(field, &v.coords[lo_digits..]);
            let snapshot = order.len();
            for pos in 0..snapshot {
                let s = order[pos] as usize;
                let t = hi_shift[s / lo_size] as usize * lo_size + lo_shift[s % lo_size] as usize;
                if parent[t] == UNREACHED {
                    parent[t] = idx as u32;
                    order.push(t as u32);
                }
            }
        }
        Ok(ReachableSet { field, n, vectors: vs.to_vec(), parent, reached: order.len() })
    }

    pub fn num_reached(&self) -> usize {
        self.reached
    }

    pub fn num_states(&self) -> usize {
        self.parent.len()
    }

    pub fn is_full(&self) -> bool {
        self.reached == self.parent.len()
    }

    fn index_of(&self, v: &[u8]) -> usize {
        let p = self.field.order();
        v.iter().rev().fold(0, |acc, &c| acc * p + c as usize)
    }

    fn vector_at(&self, mut index: usize) -> VectorZp {
        let p = self.field.order();
        let coords = (0..self.n)
            .map(|_| {
                let c = index % p;
                index /= p;
                c as u8
            })
            .collect();
        VectorZp { field: self.field, coords }
    }

    pub fn contains(&self, target: &VectorZp) -> bool {
        target.dim() == self.n && self.parent[self.index_of(&target.coords)] != UNREACHED
    }

    /// Smallest unreachable vector in index order (first coordinate least
    /// significant), if any.
    pub fn first_unreachable(&self) -> Option<VectorZp> {
        self.parent
            .iter()
            .position(|&p| p == UNREACHED)
            .map(|i| self.vector_at(i))
    }

    /// 0/1 coefficients over the input order summing to `target`, or `None`
    /// when it is unreachable. The certificate is re-checked by summation.
    pub fn express(&self, target: &VectorZp) -> Result<Option<Vec<u8>>, AdditiveError> {
        if target.dim() != self.n {
            return Err(AdditiveError::Dimension { index: 0, got: target.dim(), expected: self.n });
        }
        let f = self.field;
        let mut coeffs = vec![0u8; self.vectors.len()];
        let mut cur = target.coords.clone();
        loop {
            let idx = self.index_of(&cur);
            match self.parent[idx] {
                UNREACHED => return Ok(None),
                ROOT => break,
                i => {
                    let i = i as usize;
                    coeffs[i] = 1;
                    for (c, &v) in cur.iter_mut().zip(&self.vectors[i].coords) {
                        *c = f.sub(*c, v);
                    }
                }
            }
        }
        if sum_selected(f, self.n, &self.vectors, &coeffs) != *target {
            return Err(AdditiveError::BadCertificate { target: target.coords.clone() });
        }
        Ok(Some(coeffs))
    }
}

/// `t -> t + shift` on base-p digit strings of length `shift.len()`, as a
/// table over digit-string indices.
fn shift_table(field: Field, shift: &[u8]) -> Vec<u32> {
    let p = field.order();
    let size = p.pow(shift.len() as u32);
    (0..size)
        .map(|mut idx| {
            let mut out = 0usize;
            let mut place = 1usize;
            for &s in shift {
                let d = (idx % p) as u8;
                idx /= p;
                out += field.add(d, s) as usize * place;
                place *= p;
            }
            out as u32
        })
        .collect()
}

pub fn is_additive_basis(field: Field, n: usize, vs: &[VectorZp]) -> Result<bool, AdditiveError> {
    Ok(ReachableSet::build(field, n, vs)?.is_full())
}

pub fn express(field: Field, vs: &[VectorZp], target: &VectorZp) -> Result<Option<Vec<u8>>, AdditiveError> {
    ReachableSet::build(field, target.dim(), vs)?.express(target)
}

/// Uniform nonsingular `n x n` matrix by rejection sampling.
pub fn random_nonsingular(n: usize, field: Field, rng: &mut SplitMix64) -> MatrixF {
    assert!(n >= 1, "dimension must be positive");
    loop {
        let m = rng.matrix(field, n, n);
        if m.is_nonsingular() {
            return m;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub target: Vec<u8>,
    pub coefficients: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Certificates(Vec<Certificate>),
    Unreachable(Vec<u8>),
}

/// Outcome of one randomized four-basis trial over GF(3).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub trial: u64,
    pub stream_seed: u64,
    pub n: usize,
    /// `P, R, S, T` in the matrix text format.
    pub matrices: Vec<String>,
    /// `None` when the row-product check was skipped or exceeds the
    /// variable cap.
    pub full_perrank: Option<bool>,
    pub additive_basis: bool,
    pub witness: Witness,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.additive_basis && self.full_perrank != Some(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOptions {
    /// Random targets to certify when the union is an additive basis.
    pub targets: usize,
    /// Also decide full perrank of the doubled `(P R S T)` stack (`4n` variables).
    pub check_perrank: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions { targets: 20, check_perrank: true }
    }
}

/// Draw four nonsingular `n x n` matrices over GF(3) from the stream of
/// trial `trial` under `seed`, then test the additive-basis property of their
/// column union and, optionally, full perrank of the doubled stack.
pub fn corollary4_trial(
    n: usize,
    seed: u64,
    trial: u64,
    opts: TrialOptions,
) -> Result<TrialReport, AdditiveError> {
    let field = Field::gf3();
    let mut rng = SplitMix64::for_trial(seed, trial);
    let blocks: Vec<MatrixF> = (0..4).map(|_| random_nonsingular(n, field, &mut rng)).collect();
    let full = if opts.check_perrank && 4 * n <= ROW_PRODUCT_MAX_VARS {
        Some(full_perrank(&stack_matrix(&blocks, 2)?)?)
    } else {
        None
    };
    let mut vs = Vec::with_capacity(4 * n);
    for b in &blocks {
        vs.extend(columns(b)?);
    }
    let reach = ReachableSet::build(field, n, &vs)?;
    let witness = match reach.first_unreachable() {
        Some(v) => Witness::Unreachable(v.coords),
        None => {
            let mut certs = Vec::with_capacity(opts.targets);
            for _ in 0..opts.targets {
                let target = VectorZp::new(field, (0..n).map(|_| rng.scalar(field)).collect())?;
                let coefficients = reach.express(&target)?.expect("full reachable set");
                certs.push(Certificate { target: target.coords, coefficients });
            }
            Witness::Certificates(certs)
        }
    };
    Ok(TrialReport {
        seed,
        trial,
        stream_seed: stream_seed(seed, trial),
        n,
        matrices: blocks.iter().map(format_matrix).collect(),
        full_perrank: full,
        additive_basis: reach.is_full(),
        witness,
    })
}
