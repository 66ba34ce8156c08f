//! Subspaces of a single graded component `A_k`.
//!
//! A [`GradedSubspace`] is stored as a reduced row-echelon basis in the
//! coordinates given by [`degree_monomials`] (canonical monomial order), so
//! two subspaces are equal exactly when their bases are identical.

use std::collections::HashMap;

use super::{degree_monomials, AlgebraError, Element, Monomial, MAX_VARS};
use crate::ff::Field;
use crate::matrix::{nullspace, rref};

/// Largest coordinate count the generic (inhomogeneous) ideal path accepts.
const INHOMOGENEOUS_MAX_VARS: usize = 10;

#[derive(Clone, PartialEq, Eq)]
pub struct GradedSubspace {
    field: Field,
    num_vars: usize,
    degree: usize,
    basis: Vec<Vec<u8>>,
}

impl std::fmt::Debug for GradedSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.basis_elements().iter().map(|e| e.to_string()).collect();
        write!(
            f,
            "GradedSubspace<{}, m={}, k={}>{{{}}}",
            self.field,
            self.num_vars,
            self.degree,
            gens.join(", ")
        )
    }
}

fn check_degree(num_vars: usize, degree: usize) -> Result<(), AlgebraError> {
    if num_vars > MAX_VARS {
        return Err(AlgebraError::TooManyVars(num_vars));
    }
    if degree > num_vars {
        return Err(AlgebraError::DegreeOutOfRange { degree, num_vars });
    }
    Ok(())
}

fn coordinate_index(monos: &[Monomial]) -> HashMap<Monomial, usize> {
    monos.iter().enumerate().map(|(i, &m)| (m, i)).collect()
}

impl GradedSubspace {
    pub fn zero(field: Field, num_vars: usize, degree: usize) -> Result<Self, AlgebraError> {
        check_degree(num_vars, degree)?;
        Ok(GradedSubspace { field, num_vars, degree, basis: Vec::new() })
    }

    /// All of `A_k`.
    pub fn full(field: Field, num_vars: usize, degree: usize) -> Result<Self, AlgebraError> {
        check_degree(num_vars, degree)?;
        let n = degree_monomials(num_vars, degree).len();
        let basis = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Ok(GradedSubspace { field, num_vars, degree, basis })
    }

    /// Span of coordinate vectors (length `C(num_vars, degree)`).
    pub fn from_vectors(
        field: Field,
        num_vars: usize,
        degree: usize,
        mut vectors: Vec<Vec<u8>>,
    ) -> Result<Self, AlgebraError> {
        check_degree(num_vars, degree)?;
        let n = degree_monomials(num_vars, degree).len();
        if vectors.iter().any(|v| v.len() != n || v.iter().any(|&c| !field.contains(c))) {
            return Err(AlgebraError::Mismatch(
                format!("vectors of length {n} over {field}"),
                "malformed coordinate vectors".into(),
            ));
        }
        rref(field, &mut vectors);
        Ok(GradedSubspace { field, num_vars, degree, basis: vectors })
    }

    /// Span of the degree-`degree` components of `elements`.
    pub fn span(
        field: Field,
        num_vars: usize,
        degree: usize,
        elements: &[Element],
    ) -> Result<Self, AlgebraError> {
        check_degree(num_vars, degree)?;
        let monos = degree_monomials(num_vars, degree);
        let index = coordinate_index(&monos);
        let mut vectors = Vec::with_capacity(elements.len());
        for e in elements {
            if e.field() != field || e.num_vars() != num_vars {
                return Err(AlgebraError::Mismatch(
                    format!("{field}[{num_vars} vars]"),
                    format!("{}[{} vars]", e.field(), e.num_vars()),
                ));
            }
            let mut v = vec![0u8; monos.len()];
            for (m, c) in e.terms().filter(|(m, _)| m.degree() == degree) {
                v[index[&m]] = c;
            }
            vectors.push(v);
        }
        rref(field, &mut vectors);
        Ok(GradedSubspace { field, num_vars, degree, basis: vectors })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        degree_monomials(self.num_vars, self.degree).len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduced row-echelon basis vectors.
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        let monos = degree_monomials(self.num_vars, self.degree);
        self.basis
            .iter()
            .map(|v| {
                Element::from_terms(
                    self.field,
                    self.num_vars,
                    monos.iter().zip(v).map(|(&m, &c)| (m, c)),
                )
            })
            .collect()
    }

    fn check_same_ambient(&self, other: &GradedSubspace) -> Result<(), AlgebraError> {
        if self.field != other.field
            || self.num_vars != other.num_vars
            || self.degree != other.degree
        {
            return Err(AlgebraError::Mismatch(
                format!("A_{} over {}[{} vars]", self.degree, self.field, self.num_vars),
                format!("A_{} over {}[{} vars]", other.degree, other.field, other.num_vars),
            ));
        }
        Ok(())
    }

    /// Subspace equality (identical reduced bases).
    pub fn equal(&self, other: &GradedSubspace) -> Result<bool, AlgebraError> {
        self.check_same_ambient(other)?;
        Ok(self.basis == other.basis)
    }

    pub fn is_subspace_of(&self, other: &GradedSubspace) -> Result<bool, AlgebraError> {
        self.check_same_ambient(other)?;
        let mut rows = other.basis.clone();
        rows.extend(self.basis.iter().cloned());
        Ok(rref(self.field, &mut rows).len() == other.dim())
    }

    /// Whether the degree-`k` element `e` lies in the subspace. Elements with
    /// terms outside degree `k` are never members (except zero).
    pub fn contains(&self, e: &Element) -> Result<bool, AlgebraError> {
        if e.is_zero() {
            return Ok(true);
        }
        if e.field() != self.field || e.num_vars() != self.num_vars {
            return Err(AlgebraError::Mismatch(
                format!("{}[{} vars]", self.field, self.num_vars),
                format!("{}[{} vars]", e.field(), e.num_vars()),
            ));
        }
        if e.degrees() != [self.degree] {
            return Ok(false);
        }
        let single = GradedSubspace::span(self.field, self.num_vars, self.degree, &[e.clone()])?;
        single.is_subspace_of(self)
    }
}

fn check_generators(gens: &[Element]) -> Result<Option<(Field, usize)>, AlgebraError> {
    let Some(first) = gens.first() else { return Ok(None) };
    for g in gens {
        if g.field() != first.field() || g.num_vars() != first.num_vars() {
            return Err(AlgebraError::Mismatch(
                format!("{}[{} vars]", first.field(), first.num_vars()),
                format!("{}[{} vars]", g.field(), g.num_vars()),
            ));
        }
    }
    Ok(Some((first.field(), first.num_vars())))
}

/// `{f in A_k : f * g = 0 for every g in gens}`.
///
/// Computed as the common kernel of the multiplication maps `A_k -> A`. When
/// `k + deg(g) > m` the map is zero and contributes no constraint, so the
/// result is all of `A_k`. With no generators the ambient algebra is unknown;
/// pass at least one (possibly zero) element.
pub fn annihilator_k(gens: &[Element], k: usize) -> Result<GradedSubspace, AlgebraError> {
    let (field, m) = check_generators(gens)?
        .ok_or_else(|| AlgebraError::Parse("annihilator of an empty generator list".into()))?;
    check_degree(m, k)?;
    let sources = degree_monomials(m, k);
    // one constraint row per (generator, target monomial)
    let mut rows: HashMap<(usize, Monomial), Vec<u8>> = HashMap::new();
    for (gi, g) in gens.iter().enumerate() {
        for (col, &s) in sources.iter().enumerate() {
            for (t, c) in g.terms() {
                if let Some(target) = s.times(t) {
                    let row = rows.entry((gi, target)).or_insert_with(|| vec![0; sources.len()]);
                    row[col] = field.add(row[col], c);
                }
            }
        }
    }
    let rows: Vec<Vec<u8>> = rows.into_values().collect();
    let kernel = nullspace(field, &rows, sources.len());
    GradedSubspace::from_vectors(field, m, k, kernel)
}

/// Degree-`k` slice of the ideal generated by `gens`.
///
/// For homogeneous generators this is the span of `g * h` over monomials `h`
/// of degree `k - deg(g)`. Inhomogeneous generators fall back to computing
/// the whole ideal as a subspace of `A` and intersecting with `A_k`, which is
/// limited to small variable counts.
pub fn ideal_component_k(gens: &[Element], k: usize) -> Result<GradedSubspace, AlgebraError> {
    let (field, m) = check_generators(gens)?
        .ok_or_else(|| AlgebraError::Parse("ideal of an empty generator list".into()))?;
    check_degree(m, k)?;
    let gens: Vec<&Element> = gens.iter().filter(|g| !g.is_zero()).collect();
    if gens.iter().all(|g| g.is_homogeneous()) {
        let mut products = Vec::new();
        for g in gens {
            let d = g.degree().expect("nonzero");
            if d > k {
                continue;
            }
            for h in degree_monomials(m, k - d) {
                let p = g * &Element::monomial(field, m, h, 1);
                if !p.is_zero() {
                    products.push(p);
                }
            }
        }
        return GradedSubspace::span(field, m, k, &products);
    }
    if m > INHOMOGENEOUS_MAX_VARS {
        return Err(AlgebraError::TooLarge(format!(
            "ideal of inhomogeneous generators needs m <= {INHOMOGENEOUS_MAX_VARS}, got {m}"
        )));
    }
    // Coordinates of all of A, with the A_k block last: rows of the reduced
    // basis whose pivot falls in that block span the intersection with A_k.
    let mut order: Vec<Monomial> = (0..=m)
        .filter(|&d| d != k)
        .flat_map(|d| degree_monomials(m, d))
        .collect();
    let outside = order.len();
    order.extend(degree_monomials(m, k));
    let index = coordinate_index(&order);
    let mut rows = Vec::new();
    for g in gens {
        for h in (0..=m).flat_map(|d| degree_monomials(m, d)) {
            let p = g * &Element::monomial(field, m, h, 1);
            if p.is_zero() {
                continue;
            }
            let mut v = vec![0u8; order.len()];
            for (mono, c) in p.terms() {
                v[index[&mono]] = c;
            }
            rows.push(v);
        }
    }
    let pivots = rref(field, &mut rows);
    let slice: Vec<Vec<u8>> = rows
        .into_iter()
        .zip(pivots)
        .filter(|&(_, p)| p >= outside)
        .map(|(r, _)| r[outside..].to_vec())
        .collect();
    GradedSubspace::from_vectors(field, m, k, slice)
}
