//! Text form of algebra elements.
//!
//! ```text
//! element := "0" | term (sep term)*        sep := " + " | " - "
//! term    := scalar | [scalar "*"] var ("*" var)*
//! scalar  := digits | "(" field-text ")"
//! var     := "x" digits                     (1-based)
//! ```
//!
//! Output lists terms in canonical monomial order, omits a unit coefficient
//! on non-constant terms, and parenthesizes extension-field coefficients
//! that are not plain residues. The parser also accepts `-` separators, arbitrary
//! whitespace, integer scalars of any size (reduced mod p) and repeated
//! variables (which make the term vanish).

use std::fmt;

use super::{AlgebraError, Element, Monomial};
use crate::ff::Field;

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let field = self.field();
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| {
                let mut coeff = field.format(c);
                if !coeff.bytes().all(|b| b.is_ascii_digit()) {
                    coeff = format!("({coeff})");
                }
                if m == Monomial::ONE {
                    coeff
                } else if c == 1 {
                    format!("{m:?}")
                } else {
                    format!("{coeff}*{m:?}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element<{}, {}>({})", self.field(), self.num_vars(), self)
    }
}

impl Element {
    /// Parse the text form in the algebra with `num_vars` variables over `field`.
    pub fn parse(field: Field, num_vars: usize, text: &str) -> Result<Element, AlgebraError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(AlgebraError::Parse("empty input".into()));
        }
        let mut out = Element::zero(field, num_vars);
        for (negative, term) in split_terms(&compact)? {
            let (mono, coeff) = parse_term(field, num_vars, term)?;
            let Some(mono) = mono else { continue };
            let c = if negative { field.neg(coeff) } else { coeff };
            out.add_term(mono, c);
        }
        Ok(out)
    }
}

fn split_terms(s: &str) -> Result<Vec<(bool, &str)>, AlgebraError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let bytes = s.as_bytes();
    if bytes[0] == b'-' || bytes[0] == b'+' {
        negative = bytes[0] == b'-';
        start = 1;
    }
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                out.push((negative, &s[start..i]));
                negative = b == b'-';
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(AlgebraError::Parse(format!("unbalanced ')' in {s:?}")));
        }
    }
    if depth != 0 {
        return Err(AlgebraError::Parse(format!("unbalanced '(' in {s:?}")));
    }
    out.push((negative, &s[start..]));
    if let Some((_, t)) = out.iter().find(|(_, t)| t.is_empty()) {
        return Err(AlgebraError::Parse(format!("empty term {t:?} in {s:?}")));
    }
    Ok(out)
}

/// Returns `(None, _)` when a repeated variable makes the term vanish.
fn parse_term(
    field: Field,
    num_vars: usize,
    term: &str,
) -> Result<(Option<Monomial>, u8), AlgebraError> {
    let mut coeff = 1u8;
    let mut mono = Some(Monomial::ONE);
    for factor in split_factors(term)? {
        if let Some(idx) = factor.strip_prefix('x') {
            let i: usize = idx
                .parse()
                .map_err(|_| AlgebraError::Parse(format!("bad variable {factor:?}")))?;
            if i == 0 || i > num_vars {
                return Err(AlgebraError::VarOutOfRange { index: i.saturating_sub(1), num_vars });
            }
            mono = mono.and_then(|m| m.times(Monomial::var(i - 1)));
        } else if let Some(inner) = factor.strip_prefix('(').and_then(|f| f.strip_suffix(')')) {
            let c = field
                .parse(inner)
                .map_err(|e| AlgebraError::Parse(e.to_string()))?;
            coeff = field.mul(coeff, c);
        } else if !factor.is_empty() && factor.bytes().all(|b| b.is_ascii_digit()) {
            let n: u64 = factor
                .parse()
                .map_err(|_| AlgebraError::Parse(format!("bad integer {factor:?}")))?;
            let c = field.from_int((n % field.characteristic() as u64) as i64);
            coeff = field.mul(coeff, c);
        } else {
            return Err(AlgebraError::Parse(format!("bad factor {factor:?}")));
        }
    }
    Ok((mono, coeff))
}

fn split_factors(term: &str) -> Result<Vec<&str>, AlgebraError> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, b) in term.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                out.push(&term[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&term[start..]);
    if out.iter().any(|f| f.is_empty()) {
        return Err(AlgebraError::Parse(format!("empty factor in {term:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_canonical() {
        let f = Field::gf3();
        let e = Element::parse(f, 3, "x3 + 2*x2*x1").unwrap();
        assert_eq!(e.to_string(), "2*x1*x2 + x3");
        assert_eq!(Element::zero(f, 2).to_string(), "0");
        assert_eq!(Element::parse(f, 2, "1 - x1").unwrap().to_string(), "1 + 2*x1");
    }

    #[test]
    fn extension_coefficients_are_parenthesized() {
        let f9 = Field::gf9();
        let e = Element::parse(f9, 2, "(1+t)*x1 + (t)*x2").unwrap();
        assert_eq!(e.to_string(), "(1+t)*x1 + (t)*x2");
        assert_eq!(Element::parse(f9, 2, &e.to_string()).unwrap(), e);
    }

    #[test]
    fn repeated_variables_vanish() {
        let f = Field::gf3();
        assert!(Element::parse(f, 2, "x1*x1").unwrap().is_zero());
        assert_eq!(Element::parse(f, 2, "x1*x1 + x2").unwrap().to_string(), "x2");
    }

    #[test]
    fn parse_errors() {
        let f = Field::gf3();
        assert!(Element::parse(f, 2, "").is_err());
        assert!(Element::parse(f, 2, "x3").is_err());
        assert!(Element::parse(f, 2, "x0").is_err());
        assert!(Element::parse(f, 2, "x1 +").is_err());
        assert!(Element::parse(f, 2, "y1").is_err());
        assert!(Element::parse(f, 2, "(1").is_err());
        assert!(Element::parse(f, 2, "x1**x2").is_err());
    }
}
