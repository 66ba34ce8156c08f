//! Arithmetic in small finite fields.
//!
//! A [`FieldSpec`] holds the full addition and multiplication tables of a
//! field with at most [`MAX_ORDER`] elements. Elements are encoded as `u8`
//! values: for a prime field the value is the residue itself, for an
//! extension GF(p^d) the value `c_0 + c_1 p + ... + c_{d-1} p^{d-1}` encodes
//! the polynomial `c_0 + c_1 t + ... + c_{d-1} t^{d-1}` modulo the defining
//! polynomial. Prime-field residues therefore keep the same encoding when a
//! prime field is embedded in one of its extensions.
//!
//! Containers (matrices, algebra elements) store raw `u8` values next to a
//! [`Field`] handle and call the raw methods on the handle. [`Scalar`] is the
//! checked, self-describing value type for APIs that pass single elements.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use thiserror::Error;

/// Largest supported field order; keeps the operation tables tiny.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(u64),
    #[error("modulus must be monic of degree 1..=3, got coefficients {0:?}")]
    BadModulus(Vec<u8>),
    #[error("modulus {0:?} is reducible over GF({1})")]
    Reducible(Vec<u8>, u8),
    #[error("scalars belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} is not a canonical element of {field}")]
    OutOfRange { value: u64, field: String },
    #[error("cannot parse {text:?} as an element of {field}")]
    Parse { text: String, field: String },
    #[error("unknown field name {0:?} (expected gf3, gf5, gf7, gf9 or gf27)")]
    UnknownName(String),
}

/// Operation tables and parameters of one finite field.
pub struct FieldSpec {
    name: String,
    characteristic: u8,
    degree: u8,
    /// Monic defining polynomial, lowest coefficient first. `[0, 1]` for prime fields.
    modulus: Vec<u8>,
    order: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("name", &self.name)
            .field("characteristic", &self.characteristic)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn poly_eval(coeffs: &[u8], x: u32, p: u32) -> u32 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| (acc * x + c as u32) % p)
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u8) -> Result<Self, FieldError> {
        if !is_prime(p as u32) {
            return Err(FieldError::NotPrime(p as u32));
        }
        if p as usize > MAX_ORDER {
            return Err(FieldError::TooLarge(p as u64));
        }
        Ok(Self::build(format!("gf{p}"), p, vec![0, 1]))
    }

    /// GF(p^d) defined by a monic `modulus` of degree `d` (lowest coefficient
    /// first). Irreducibility is checked exhaustively; for `d <= 3` a
    /// polynomial is irreducible iff it has no root in GF(p).
    pub fn extension(p: u8, modulus: &[u8]) -> Result<Self, FieldError> {
        if !is_prime(p as u32) {
            return Err(FieldError::NotPrime(p as u32));
        }
        let degree = modulus.len().saturating_sub(1);
        if !(1..=3).contains(&degree)
            || modulus[degree] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::BadModulus(modulus.to_vec()));
        }
        let order = (p as u64).pow(degree as u32);
        if order > MAX_ORDER as u64 {
            return Err(FieldError::TooLarge(order));
        }
        if degree == 1 {
            return Self::prime(p);
        }
        if (0..p as u32).any(|x| poly_eval(modulus, x, p as u32) == 0) {
            return Err(FieldError::Reducible(modulus.to_vec(), p));
        }
        Ok(Self::build(format!("gf{order}"), p, modulus.to_vec()))
    }

    fn build(name: String, p: u8, modulus: Vec<u8>) -> Self {
        let degree = (modulus.len() - 1) as u8;
        let order = (p as usize).pow(degree as u32);
        let pw = p as usize;
        let decode = |v: usize| -> Vec<usize> {
            let mut v = v;
            (0..degree)
                .map(|_| {
                    let c = v % pw;
                    v /= pw;
                    c
                })
                .collect()
        };
        let encode = |c: &[usize]| -> u8 { c.iter().rev().fold(0, |acc, &x| acc * pw + x) as u8 };

        let mut add = vec![0u8; order * order];
        let mut mul = vec![0u8; order * order];
        for a in 0..order {
            let ca = decode(a);
            for b in 0..order {
                let cb = decode(b);
                let sum: Vec<usize> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % pw).collect();
                add[a * order + b] = encode(&sum);

                let d = degree as usize;
                let mut prod = vec![0usize; 2 * d];
                for i in 0..d {
                    for j in 0..d {
                        prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % pw;
                    }
                }
                // reduce t^e for e >= d using the monic modulus
                for e in (d..2 * d).rev() {
                    let c = prod[e];
                    if c == 0 {
                        continue;
                    }
                    prod[e] = 0;
                    for (i, &m) in modulus[..d].iter().enumerate() {
                        let sub = c * m as usize % pw;
                        prod[e - d + i] = (prod[e - d + i] + pw - sub) % pw;
                    }
                }
                mul[a * order + b] = encode(&prod[..d]);
            }
        }
        let mut neg = vec![0u8; order];
        let mut inv = vec![0u8; order];
        for a in 0..order {
            for b in 0..order {
                if add[a * order + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * order + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        FieldSpec {
            name,
            characteristic: p,
            degree,
            modulus,
            order,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }
}

/// Cheap copyable handle to a field's tables.
#[derive(Clone, Copy)]
pub struct Field(&'static FieldSpec);

static GF3: OnceLock<FieldSpec> = OnceLock::new();
static GF5: OnceLock<FieldSpec> = OnceLock::new();
static GF7: OnceLock<FieldSpec> = OnceLock::new();
static GF9: OnceLock<FieldSpec> = OnceLock::new();
static GF27: OnceLock<FieldSpec> = OnceLock::new();

/// Default defining polynomial of GF(9): t^2 + 1.
pub const GF9_MODULUS: [u8; 3] = [1, 0, 1];
/// Default defining polynomial of GF(27): t^3 - t + 1.
pub const GF27_MODULUS: [u8; 4] = [1, 2, 0, 1];

impl Field {
    pub fn gf3() -> Self {
        Field(GF3.get_or_init(|| FieldSpec::prime(3).expect("3 is prime")))
    }

    pub fn gf5() -> Self {
        Field(GF5.get_or_init(|| FieldSpec::prime(5).expect("5 is prime")))
    }

    pub fn gf7() -> Self {
        Field(GF7.get_or_init(|| FieldSpec::prime(7).expect("7 is prime")))
    }

    pub fn gf9() -> Self {
        Field(GF9.get_or_init(|| {
            FieldSpec::extension(3, &GF9_MODULUS).expect("t^2+1 is irreducible over GF(3)")
        }))
    }

    pub fn gf27() -> Self {
        Field(GF27.get_or_init(|| {
            FieldSpec::extension(3, &GF27_MODULUS).expect("t^3-t+1 is irreducible over GF(3)")
        }))
    }

    /// The prime field GF(p) for the supported primes 3, 5, 7.
    pub fn prime(p: u8) -> Result<Self, FieldError> {
        match p {
            3 => Ok(Self::gf3()),
            5 => Ok(Self::gf5()),
            7 => Ok(Self::gf7()),
            _ => Err(FieldError::UnknownName(format!("gf{p}"))),
        }
    }

    /// Look up a field by its text-format name (`gf3`, `gf5`, `gf7`, `gf9`, `gf27`).
    pub fn by_name(name: &str) -> Result<Self, FieldError> {
        match name {
            "gf3" => Ok(Self::gf3()),
            "gf5" => Ok(Self::gf5()),
            "gf7" => Ok(Self::gf7()),
            "gf9" => Ok(Self::gf9()),
            "gf27" => Ok(Self::gf27()),
            _ => Err(FieldError::UnknownName(name.to_string())),
        }
    }

    /// Promote a user-built spec to a `'static` handle. The spec is leaked;
    /// intended for a handful of long-lived fields.
    pub fn leak(spec: FieldSpec) -> Self {
        Field(Box::leak(Box::new(spec)))
    }

    pub fn spec(self) -> &'static FieldSpec {
        self.0
    }

    pub fn name(self) -> &'static str {
        &self.0.name
    }

    #[inline]
    pub fn order(self) -> usize {
        self.0.order
    }

    #[inline]
    pub fn characteristic(self) -> u8 {
        self.0.characteristic
    }

    pub fn degree(self) -> u8 {
        self.0.degree
    }

    pub fn is_prime_field(self) -> bool {
        self.0.degree == 1
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.order + b as usize]
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        self.0.mul[a as usize * self.0.order + b as usize]
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.0.inv[a as usize])
    }

    pub fn pow(self, a: u8, mut e: u64) -> u8 {
        let mut base = a;
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under Z -> GF(p) -> this field.
    pub fn from_int(self, n: i64) -> u8 {
        n.rem_euclid(self.characteristic() as i64) as u8
    }

    pub fn contains(self, value: u8) -> bool {
        (value as usize) < self.order()
    }

    /// All elements in encoding order.
    pub fn elements(self) -> impl Iterator<Item = u8> {
        (0..self.order()).map(|v| v as u8)
    }

    /// Coefficients of `value` over the prime field, lowest power first.
    pub fn coefficients(self, value: u8) -> Vec<u8> {
        let p = self.characteristic();
        let mut v = value;
        (0..self.degree())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// Canonical text of an element: the residue for prime fields, and
    /// `c0+c1*t+c2*t^2` with zero terms and unit coefficients omitted for
    /// extensions (`0` for zero).
    pub fn format(self, value: u8) -> String {
        if self.is_prime_field() {
            return value.to_string();
        }
        let terms: Vec<String> = self
            .coefficients(value)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| match (e, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (e, 1) => format!("t^{e}"),
                (e, c) => format!("{c}*t^{e}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Parse canonical element text (see [`Field::format`]). Extension terms
    /// may appear in any order but each power at most once; coefficients must
    /// be canonical residues `1..p-1`.
    pub fn parse(self, text: &str) -> Result<u8, FieldError> {
        let err = || FieldError::Parse {
            text: text.to_string(),
            field: self.name().to_string(),
        };
        let p = self.characteristic() as u64;
        if self.is_prime_field() {
            if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let v: u64 = text.parse().map_err(|_| err())?;
            if v >= p {
                return Err(FieldError::OutOfRange {
                    value: v,
                    field: self.name().to_string(),
                });
            }
            return Ok(v as u8);
        }
        if text == "0" {
            return Ok(0);
        }
        let mut coeffs = vec![None; self.degree() as usize];
        for term in text.split('+') {
            let (coeff, power) = match term.split_once('*') {
                Some((c, rest)) => (Some(c), Some(rest)),
                None if term.starts_with('t') => (None, Some(term)),
                None => (Some(term), None),
            };
            let c = match coeff {
                Some(c) => {
                    if c.is_empty() || !c.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(err());
                    }
                    let v: u64 = c.parse().map_err(|_| err())?;
                    if v == 0 || v >= p {
                        return Err(FieldError::OutOfRange {
                            value: v,
                            field: self.name().to_string(),
                        });
                    }
                    v as u8
                }
                None => 1,
            };
            let e = match power {
                None => 0,
                Some("t") => 1,
                Some(s) => match s.strip_prefix("t^") {
                    Some(e) => e.parse::<usize>().map_err(|_| err())?,
                    None => return Err(err()),
                },
            };
            if e >= coeffs.len() || coeffs[e].is_some() {
                return Err(err());
            }
            coeffs[e] = Some(c);
        }
        Ok(coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * p + c.unwrap_or(0) as u64) as u8)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
            || (self.0.characteristic == other.0.characteristic
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.characteristic.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.name)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

/// A field element that knows its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: Field,
    value: u8,
}

impl Scalar {
    pub fn new(field: Field, value: u8) -> Result<Self, FieldError> {
        if !field.contains(value) {
            return Err(FieldError::OutOfRange {
                value: value as u64,
                field: field.name().to_string(),
            });
        }
        Ok(Scalar { field, value })
    }

    pub fn zero(field: Field) -> Self {
        Scalar { field, value: 0 }
    }

    pub fn one(field: Field) -> Self {
        Scalar { field, value: 1 }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn value(&self) -> u8 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Scalar) -> Result<Field, FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(
                self.field.name().to_string(),
                other.field.name().to_string(),
            ));
        }
        Ok(self.field)
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        let f = self.same_field(other)?;
        Ok(Scalar { field: f, value: f.add(self.value, other.value) })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        let f = self.same_field(other)?;
        Ok(Scalar { field: f, value: f.sub(self.value, other.value) })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        let f = self.same_field(other)?;
        Ok(Scalar { field: f, value: f.mul(self.value, other.value) })
    }

    pub fn neg(&self) -> Scalar {
        Scalar { field: self.field, value: self.field.neg(self.value) }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        let value = self.field.inv(self.value).ok_or(FieldError::DivisionByZero)?;
        Ok(Scalar { field: self.field, value })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> Scalar {
        Scalar { field: self.field, value: self.field.pow(self.value, e) }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.field.name(), self.field.format(self.value))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(field: Field, v: u8) -> Scalar {
        Scalar::new(field, v).unwrap()
    }

    fn all_fields() -> Vec<Field> {
        vec![Field::gf3(), Field::gf5(), Field::gf7(), Field::gf9(), Field::gf27()]
    }

    #[test]
    fn small_prime_arithmetic() {
        let f3 = Field::gf3();
        let f5 = Field::gf5();
        assert_eq!(s(f3, 2).add(&s(f3, 2)).unwrap(), s(f3, 1));
        let one = s(f3, 1);
        assert!(one.add(&one).unwrap().add(&one).unwrap().is_zero());
        assert_eq!(s(f5, 4).add(&s(f5, 3)).unwrap(), s(f5, 2));
        assert_eq!(s(f3, 2).mul(&s(f3, 2)).unwrap(), s(f3, 1));
        assert_eq!(s(f3, 0).mul(&s(f3, 2)).unwrap(), s(f3, 0));
        assert_eq!(s(f3, 2).inv().unwrap(), s(f3, 2));
        assert_eq!(s(f3, 1).inv().unwrap(), s(f3, 1));
        assert_eq!(s(f5, 3).inv().unwrap(), s(f5, 2));
    }

    #[test]
    fn gf9_t_squared_is_minus_one() {
        let f9 = Field::gf9();
        let t = f9.parse("t").unwrap();
        assert_eq!(t, 3);
        assert_eq!(f9.mul(t, t), 2);
        assert_eq!(f9.format(f9.mul(t, t)), "2");
    }

    #[test]
    fn gf27_modulus_relation() {
        // t^3 = t - 1 = t + 2
        let f = Field::gf27();
        let t = f.parse("t").unwrap();
        let t3 = f.pow(t, 3);
        assert_eq!(t3, f.parse("2+t").unwrap());
    }

    #[test]
    fn errors() {
        let f3 = Field::gf3();
        let f5 = Field::gf5();
        assert_eq!(s(f3, 0).inv(), Err(FieldError::DivisionByZero));
        assert!(matches!(
            s(f3, 1).add(&s(f5, 1)),
            Err(FieldError::FieldMismatch(..))
        ));
        assert!(matches!(s(f3, 1).mul(&s(f5, 1)), Err(FieldError::FieldMismatch(..))));
        assert!(Scalar::new(f3, 3).is_err());
        assert!(matches!(FieldSpec::prime(9), Err(FieldError::NotPrime(9))));
        // t^2 + 2 = (t-1)(t+1) over GF(3)
        assert!(matches!(
            FieldSpec::extension(3, &[2, 0, 1]),
            Err(FieldError::Reducible(..))
        ));
        assert!(FieldSpec::extension(3, &[1, 0, 2]).is_err());
        assert!(Field::by_name("gf4").is_err());
    }

    #[test]
    fn default_moduli_are_irreducible() {
        assert!(FieldSpec::extension(3, &GF9_MODULUS).is_ok());
        assert!(FieldSpec::extension(3, &GF27_MODULUS).is_ok());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in [Field::gf3(), Field::gf5(), Field::gf9(), Field::gf27()] {
            let q = f.order() as u8;
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "{f} inverse of {a}");
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_times_one_is_zero() {
        for f in all_fields() {
            let sum = (0..f.characteristic()).fold(0u8, |acc, _| f.add(acc, 1));
            assert_eq!(sum, 0, "{f}");
        }
    }

    #[test]
    fn frobenius_in_characteristic_three() {
        for f in [Field::gf3(), Field::gf9(), Field::gf27()] {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.pow(f.add(a, b), 3), f.add(f.pow(a, 3), f.pow(b, 3)));
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for f in all_fields() {
            for a in f.elements() {
                assert_eq!(f.parse(&f.format(a)).unwrap(), a, "{f} {}", f.format(a));
            }
        }
        let f9 = Field::gf9();
        assert_eq!(f9.format(f9.parse("2*t+1").unwrap()), "1+2*t");
        assert!(f9.parse("t^2").is_err());
        assert!(f9.parse("3").is_err());
        assert!(f9.parse("1+1").is_err());
        assert!(Field::gf3().parse("3").is_err());
        assert!(Field::gf3().parse("").is_err());
    }

    #[test]
    fn prime_field_embeds_in_extensions() {
        let (f3, f9, f27) = (Field::gf3(), Field::gf9(), Field::gf27());
        for a in f3.elements() {
            for b in f3.elements() {
                assert_eq!(f9.add(a, b), f3.add(a, b));
                assert_eq!(f9.mul(a, b), f3.mul(a, b));
                assert_eq!(f27.add(a, b), f3.add(a, b));
                assert_eq!(f27.mul(a, b), f3.mul(a, b));
            }
        }
    }
}
