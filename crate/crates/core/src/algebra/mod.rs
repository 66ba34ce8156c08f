//! The squarefree algebra `k[x_1, ..., x_m] / (x_1^2, ..., x_m^2)`.
//!
//! Every monomial is a set of variables, so an [`Element`] is a sparse map
//! from variable sets to nonzero coefficients. The product of two monomials
//! vanishes whenever their sets intersect.
//!
//! Variables are 0-based in the Rust API; the text form writes them 1-based
//! (`x1` is variable 0).
//!
//! Graded-subspace linear algebra (annihilators and ideal components in a
//! fixed degree) lives in [`subspace`].

mod subspace;
mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::ff::{Field, Scalar};

pub use subspace::{annihilator_k, ideal_component_k, GradedSubspace};

/// Hard cap on the number of variables; monomials are `u32` bitsets.
pub const MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("elements live in different algebras ({0} vs {1})")]
    Mismatch(String, String),
    #[error("variable index {index} out of range for {num_vars} variables")]
    VarOutOfRange { index: usize, num_vars: usize },
    #[error("{0} variables exceeds the cap of {MAX_VARS}")]
    TooManyVars(usize),
    #[error("x{} does not occur in the divisor", .0 + 1)]
    InvalidDivisor(usize),
    #[error("expected a linear form")]
    NotLinear,
    #[error("degree {degree} exceeds the number of variables {num_vars}")]
    DegreeOutOfRange { degree: usize, num_vars: usize },
    #[error("coordinate space too large: {0}")]
    TooLarge(String),
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// A squarefree monomial, stored as a bitset of variables.
///
/// Ordered lexicographically on the sorted list of variable indices, so
/// `1 < x1 < x1*x2 < x1*x2*x3 < x1*x3 < x2 < ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_mask(mask: u32) -> Self {
        Monomial(mask)
    }

    pub fn var(i: usize) -> Self {
        Monomial(1 << i)
    }

    pub fn from_vars(vars: &[usize]) -> Self {
        Monomial(vars.iter().fold(0, |m, &v| m | (1 << v)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, var: usize) -> bool {
        self.0 >> var & 1 == 1
    }

    pub fn is_disjoint(self, other: Monomial) -> bool {
        self.0 & other.0 == 0
    }

    pub fn vars(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            (m != 0).then(|| {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                v
            })
        })
    }

    pub fn without(self, var: usize) -> Self {
        Monomial(self.0 & !(1 << var))
    }

    pub fn with(self, var: usize) -> Self {
        Monomial(self.0 | (1 << var))
    }

    /// Product of two monomials, `None` when they share a variable.
    pub fn times(self, other: Monomial) -> Option<Monomial> {
        self.is_disjoint(other).then_some(Monomial(self.0 | other.0))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        // first differing position in the sorted variable lists
        let d = (self.0 ^ other.0).trailing_zeros();
        let above = !((2u64 << d) - 1) as u32;
        let self_less = if self.0 >> d & 1 == 1 {
            other.0 & above != 0
        } else {
            self.0 & above == 0
        };
        if self_less {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let names: Vec<String> = self.vars().map(|v| format!("x{}", v + 1)).collect();
        f.write_str(&names.join("*"))
    }
}

/// All monomials of degree `k` in `m` variables, in canonical order.
pub fn degree_monomials(m: usize, k: usize) -> Vec<Monomial> {
    fn rec(start: usize, m: usize, left: usize, acc: u32, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial(acc));
            return;
        }
        for v in start..=m - left {
            rec(v + 1, m, left - 1, acc | (1 << v), out);
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(0, m, k, 0, &mut out);
    }
    out
}

/// An element of the squarefree algebra in `num_vars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    field: Field,
    num_vars: usize,
    terms: BTreeMap<Monomial, u8>,
}

impl Element {
    pub fn zero(field: Field, num_vars: usize) -> Self {
        assert!(num_vars <= MAX_VARS, "{num_vars} variables exceeds cap {MAX_VARS}");
        Element { field, num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, num_vars: usize, c: u8) -> Self {
        Self::monomial(field, num_vars, Monomial::ONE, c)
    }

    pub fn one(field: Field, num_vars: usize) -> Self {
        Self::constant(field, num_vars, 1)
    }

    /// The variable `x_{i+1}` (0-based `i`).
    pub fn var(field: Field, num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable {i} out of range");
        Self::monomial(field, num_vars, Monomial::var(i), 1)
    }

    pub fn monomial(field: Field, num_vars: usize, mono: Monomial, c: u8) -> Self {
        let mut e = Self::zero(field, num_vars);
        assert!(mono.mask() >> num_vars == 0, "monomial uses variables beyond {num_vars}");
        assert!(field.contains(c));
        if c != 0 {
            e.terms.insert(mono, c);
        }
        e
    }

    /// The linear form `sum_j coeffs[j] * x_{j+1}`.
    pub fn linear(field: Field, coeffs: &[u8]) -> Self {
        let mut e = Self::zero(field, coeffs.len());
        for (j, &c) in coeffs.iter().enumerate() {
            assert!(field.contains(c));
            if c != 0 {
                e.terms.insert(Monomial::var(j), c);
            }
        }
        e
    }

    /// Build from arbitrary (monomial, coefficient) pairs, summing repeats.
    pub fn from_terms<I>(field: Field, num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u8)>,
    {
        let mut e = Self::zero(field, num_vars);
        for (mono, c) in terms {
            assert!(mono.mask() >> num_vars == 0, "monomial uses variables beyond {num_vars}");
            e.add_term(mono, c);
        }
        e
    }

    fn add_term(&mut self, mono: Monomial, c: u8) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v = f.add(*v, c);
                if *v == 0 {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, u8)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, mono: Monomial) -> u8 {
        self.terms.get(&mono).copied().unwrap_or(0)
    }

    /// Highest degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Degrees with at least one term, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Keep only the terms of degree `k`.
    pub fn graded_component(&self, k: usize) -> Element {
        Element {
            field: self.field,
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    /// Variables with nonzero quotient, i.e. the support of a linear form.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_vars)
            .filter(|&v| self.terms.keys().any(|m| m.contains(v)))
            .collect()
    }

    fn check_compatible(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.field != other.field || self.num_vars != other.num_vars {
            return Err(AlgebraError::Mismatch(
                format!("{}[{} vars]", self.field, self.num_vars),
                format!("{}[{} vars]", other.field, other.num_vars),
            ));
        }
        Ok(())
    }

    fn check_var(&self, var: usize) -> Result<(), AlgebraError> {
        if var >= self.num_vars {
            return Err(AlgebraError::VarOutOfRange { index: var, num_vars: self.num_vars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check_compatible(other)?;
        let f = self.field;
        let mut acc: HashMap<Monomial, u8> = HashMap::new();
        for (&ma, &ca) in &self.terms {
            for (&mb, &cb) in &other.terms {
                if let Some(m) = ma.times(mb) {
                    let slot = acc.entry(m).or_insert(0);
                    *slot = f.add(*slot, f.mul(ca, cb));
                }
            }
        }
        Ok(Element {
            field: f,
            num_vars: self.num_vars,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }

    fn neg_ref(&self) -> Element {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u8) -> Element {
        let f = self.field;
        Element {
            field: f,
            num_vars: self.num_vars,
            terms: if c == 0 {
                BTreeMap::new()
            } else {
                self.terms.iter().map(|(&m, &v)| (m, f.mul(v, c))).collect()
            },
        }
    }

    pub fn pow(&self, e: u32) -> Element {
        let mut acc = Element::one(self.field, self.num_vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `E_var`: drop every term containing the variable.
    pub fn eliminate(&self, var: usize) -> Result<Element, AlgebraError> {
        self.check_var(var)?;
        Ok(Element {
            field: self.field,
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.contains(var))
                .map(|(&m, &c)| (m, c))
                .collect(),
        })
    }

    /// `∂_var`: the formal quotient on division by the variable.
    pub fn quotient(&self, var: usize) -> Result<Element, AlgebraError> {
        self.check_var(var)?;
        Ok(Element {
            field: self.field,
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.contains(var))
                .map(|(&m, &c)| (m.without(var), c))
                .collect(),
        })
    }

    /// Remainder of dividing `self` by the linear form `u` with respect to
    /// `var`: `E f - c^{-1} (∂ f)(E u)` where `c = ∂_var u`.
    ///
    /// The result has no term containing `var`, and `self - result` is a
    /// multiple of `u`.
    pub fn reduce_by(&self, u: &Element, var: usize) -> Result<Element, AlgebraError> {
        self.check_compatible(u)?;
        self.check_var(var)?;
        if u.degree().is_some_and(|d| d != 1) || !u.is_homogeneous() {
            return Err(AlgebraError::NotLinear);
        }
        let c = u.coefficient(Monomial::var(var));
        let c_inv = self.field.inv(c).ok_or(AlgebraError::InvalidDivisor(var))?;
        let e_f = self.eliminate(var)?;
        let d_f = self.quotient(var)?;
        let e_u = u.eliminate(var)?;
        Ok(&e_f - &(&d_f * &e_u).scale(c_inv))
    }

    /// Re-embed into an algebra with more variables.
    pub fn with_num_vars(&self, num_vars: usize) -> Result<Element, AlgebraError> {
        if num_vars > MAX_VARS {
            return Err(AlgebraError::TooManyVars(num_vars));
        }
        if self.terms.keys().any(|m| m.mask() >> num_vars != 0) {
            return Err(AlgebraError::VarOutOfRange { index: num_vars, num_vars });
        }
        Ok(Element { num_vars, ..self.clone() })
    }

    /// Coefficient of `var` as a [`Scalar`] (useful for linear forms).
    pub fn linear_coefficient(&self, var: usize) -> Scalar {
        Scalar::new(self.field, self.coefficient(Monomial::var(var))).expect("canonical")
    }
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("incompatible elements")
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).expect("incompatible elements")
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("incompatible elements")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.neg_ref()
    }
}

/// Product of a sequence of elements; `one` for an empty sequence.
pub fn product<'a, I>(field: Field, num_vars: usize, factors: I) -> Element
where
    I: IntoIterator<Item = &'a Element>,
{
    let mut acc = Element::one(field, num_vars);
    for f in factors {
        acc = &acc * f;
        if acc.is_zero() {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf3() -> Field {
        Field::gf3()
    }

    fn el(m: usize, s: &str) -> Element {
        Element::parse(gf3(), m, s).unwrap()
    }

    #[test]
    fn monomial_order_is_lex_on_sorted_sets() {
        let order = ["1", "x1", "x1*x2", "x1*x2*x3", "x1*x3", "x2", "x2*x3", "x3"];
        let monos: Vec<Monomial> = order
            .iter()
            .map(|s| el(3, s).terms().next().unwrap().0)
            .collect();
        for w in monos.windows(2) {
            assert!(w[0] < w[1], "{:?} < {:?}", w[0], w[1]);
        }
        let mut shuffled = monos.clone();
        shuffled.reverse();
        shuffled.sort();
        assert_eq!(shuffled, monos);
    }

    #[test]
    fn degree_monomials_are_sorted_and_counted() {
        let d = degree_monomials(5, 2);
        assert_eq!(d.len(), 10);
        assert!(d.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(degree_monomials(3, 4), vec![]);
        assert_eq!(degree_monomials(3, 0), vec![Monomial::ONE]);
    }

    #[test]
    fn addition_examples() {
        assert_eq!(&el(2, "x1 + x2") + &el(2, "2*x2"), el(2, "x1"));
        let f = el(3, "x1 + x2*x3");
        assert_eq!(&f + &Element::zero(gf3(), 3), f);
        assert_eq!(&el(2, "x1*x2") + &el(2, "x1*x2"), el(2, "2*x1*x2"));
    }

    #[test]
    fn multiplication_examples() {
        let u = el(2, "x1 + x2");
        assert_eq!(&u * &u, el(2, "2*x1*x2"));
        let w = el(3, "x1 + x2 + x3");
        assert!(w.pow(3).is_zero());
        let f = el(3, "1 + x1*x3");
        assert_eq!(&f * &Element::one(gf3(), 3), f);
    }

    #[test]
    fn operator_examples() {
        let f = el(3, "x1*x2 + x1*x3 + x2*x3");
        assert_eq!(f.eliminate(0).unwrap(), el(3, "x2*x3"));
        assert_eq!(f.quotient(0).unwrap(), el(3, "x2 + x3"));
        assert_eq!(el(3, "2").eliminate(0).unwrap(), el(3, "2"));
        assert!(el(2, "x1*x2").eliminate(1).unwrap().is_zero());
        assert!(el(3, "x2*x3").quotient(0).unwrap().is_zero());
        assert_eq!(el(1, "x1").quotient(0).unwrap(), el(1, "1"));
        assert!(matches!(
            f.eliminate(3),
            Err(AlgebraError::VarOutOfRange { index: 3, num_vars: 3 })
        ));
        assert!(f.quotient(7).is_err());
    }

    #[test]
    fn reduce_examples() {
        let u = el(2, "x1 + x2");
        let r = el(2, "x1").reduce_by(&u, 0).unwrap();
        assert_eq!(r, el(2, "2*x2"));
        assert_eq!(&el(2, "x1") - &r, u);

        let f = el(3, "x2 + x2*x3");
        assert_eq!(f.reduce_by(&el(3, "x1 + x3"), 0).unwrap(), f);

        assert!(el(2, "x1*x2").reduce_by(&el(2, "x1"), 0).unwrap().is_zero());

        assert_eq!(
            el(2, "x1").reduce_by(&el(2, "x2"), 0),
            Err(AlgebraError::InvalidDivisor(0))
        );
        assert_eq!(
            el(2, "x1").reduce_by(&el(2, "x1*x2"), 0),
            Err(AlgebraError::NotLinear)
        );
    }

    #[test]
    fn graded_component_examples() {
        let f = el(2, "1 + x1 + x1*x2");
        assert_eq!(f.graded_component(1), el(2, "x1"));
        let h = el(3, "x1*x2 + 2*x2*x3");
        assert_eq!(h.graded_component(2), h);
        assert!(f.graded_component(3).is_zero());
    }

    #[test]
    fn mismatch_errors() {
        let a = el(2, "x1");
        let b = el(3, "x1");
        assert!(matches!(a.try_add(&b), Err(AlgebraError::Mismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(AlgebraError::Mismatch(..))));
        let c = Element::var(Field::gf9(), 2, 0);
        assert!(a.try_mul(&c).is_err());
    }

    #[test]
    fn support_of_linear_form() {
        assert_eq!(el(5, "x1 + 2*x4").support(), vec![0, 3]);
        assert!(Element::zero(gf3(), 4).support().is_empty());
    }
}
