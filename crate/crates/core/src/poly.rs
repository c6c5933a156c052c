//! Sparse multivariate polynomials, their raw arithmetic over the ambient
//! polynomial ring, and the text syntax.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::{Coeff, Field};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};

/// A polynomial as a list of terms sorted strictly decreasing in the ring
/// order, with no zero coefficients. The zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    pub(crate) terms: Vec<(Monomial, Coeff)>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    /// Highest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    /// True if the polynomial is a nonzero constant.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Coefficient of the constant monomial, if present.
    pub fn constant_term(&self) -> Option<&Coeff> {
        self.terms.last().filter(|(m, _)| m.is_one()).map(|(_, c)| c)
    }

    pub(crate) fn nvars(&self) -> Option<usize> {
        self.terms.first().map(|(m, _)| m.nvars())
    }

    /// Build from unsorted terms, combining duplicates and dropping zeros.
    pub fn from_terms(field: &Field, order: MonomialOrder, mut terms: Vec<(Monomial, Coeff)>) -> Polynomial {
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = field.add(&last.1, &c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !field.is_zero(c));
        Polynomial { terms: out }
    }

    pub fn constant(field: &Field, nvars: usize, c: Coeff) -> Polynomial {
        if field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(Monomial::one(nvars), c)] }
        }
    }

    pub fn term(field: &Field, m: Monomial, c: Coeff) -> Polynomial {
        if field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Re-sort under another order (e.g. after changing rings).
    pub fn resorted(&self, order: MonomialOrder) -> Polynomial {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { terms }
    }

    /// Append `extra` variables with zero exponent.
    pub fn extended(&self, extra: usize) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.extended(extra), c.clone())).collect() }
    }
}

/// `f + c * m * g` in the ambient polynomial ring.
pub(crate) fn add_scaled(
    field: &Field,
    order: MonomialOrder,
    f: &Polynomial,
    c: &Coeff,
    m: &Monomial,
    g: &Polynomial,
) -> Polynomial {
    let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
    let mut i = 0;
    let mut gi = g.terms.iter().map(|(gm, gc)| (gm.mul(m), field.mul(gc, c))).peekable();
    while i < f.terms.len() || gi.peek().is_some() {
        let take_f = match (f.terms.get(i), gi.peek()) {
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some((fm, _)), Some((gm, _))) => order.cmp(fm, gm),
            (None, None) => unreachable!(),
        };
        match take_f {
            Ordering::Greater => {
                out.push(f.terms[i].clone());
                i += 1;
            }
            Ordering::Less => out.push(gi.next().unwrap()),
            Ordering::Equal => {
                let (gm, gc) = gi.next().unwrap();
                let s = field.add(&f.terms[i].1, &gc);
                if !field.is_zero(&s) {
                    out.push((gm, s));
                }
                i += 1;
            }
        }
    }
    Polynomial { terms: out }
}

pub(crate) fn add(field: &Field, order: MonomialOrder, f: &Polynomial, g: &Polynomial) -> Polynomial {
    match g.nvars() {
        None => f.clone(),
        Some(n) => add_scaled(field, order, f, &field.one(), &Monomial::one(n), g),
    }
}

pub(crate) fn sub(field: &Field, order: MonomialOrder, f: &Polynomial, g: &Polynomial) -> Polynomial {
    match g.nvars() {
        None => f.clone(),
        Some(n) => add_scaled(field, order, f, &field.from_i64(-1), &Monomial::one(n), g),
    }
}

pub(crate) fn scale(field: &Field, f: &Polynomial, c: &Coeff) -> Polynomial {
    if field.is_zero(c) {
        return Polynomial::zero();
    }
    Polynomial { terms: f.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect() }
}

pub(crate) fn mul(field: &Field, order: MonomialOrder, f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (small, big) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let mut acc = Polynomial::zero();
    for (m, c) in &small.terms {
        acc = add_scaled(field, order, &acc, c, m, big);
    }
    acc
}

/// Upper bound on the number of terms the parser will materialize.
pub const MAX_PARSE_TERMS: usize = 100_000;
const MAX_PARSE_EXPONENT: u64 = 1 << 16;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
    field: Field,
    order: MonomialOrder,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn check_size(&self, p: &Polynomial) -> Result<()> {
        if p.len() > MAX_PARSE_TERMS {
            return self.err("polynomial too large");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Polynomial> {
        self.depth += 1;
        if self.depth > 200 {
            return self.err("expression nested too deeply");
        }
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = add(&self.field, self.order, &acc, &t);
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = sub(&self.field, self.order, &acc, &t);
                }
                _ => break,
            }
            self.check_size(&acc)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = mul(&self.field, self.order, &acc, &f);
                    self.check_size(&acc)?;
                }
                b'/' => {
                    self.pos += 1;
                    let f = self.unary()?;
                    if !f.is_unit_constant() {
                        return self.err("division only by nonzero constants");
                    }
                    let inv = self.field.inv(&f.terms[0].1);
                    acc = scale(&self.field, &acc, &inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.depth += 1;
                if self.depth > 200 {
                    return self.err("expression nested too deeply");
                }
                let f = self.unary()?;
                self.depth -= 1;
                Ok(scale(&self.field, &f, &self.field.from_i64(-1)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected exponent");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let e: u64 = match text.parse() {
            Ok(e) if e <= MAX_PARSE_EXPONENT => e,
            _ => return self.err("exponent too large"),
        };
        let n = self.vars.len();
        if base.len() == 1 {
            let (m, c) = &base.terms[0];
            let exps = m
                .exponents()
                .iter()
                .map(|x| (*x as u64).checked_mul(e).filter(|v| *v <= u32::MAX as u64).map(|v| v as u32))
                .collect::<Option<Vec<u32>>>();
            let Some(exps) = exps else { return self.err("exponent overflow") };
            if exps.iter().map(|x| *x as u64).sum::<u64>() > u32::MAX as u64 {
                return self.err("exponent overflow");
            }
            let coeff = pow_coeff(&self.field, c, e);
            return Ok(Polynomial::term(&self.field, Monomial::new(exps), coeff));
        }
        if base.is_zero() {
            return Ok(if e == 0 { Polynomial::constant(&self.field, n, self.field.one()) } else { base });
        }
        let mut acc = Polynomial::constant(&self.field, n, self.field.one());
        for _ in 0..e {
            acc = mul(&self.field, self.order, &acc, &base);
            self.check_size(&acc)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: BigInt = text.parse().expect("digits");
                let c = self
                    .field
                    .from_rational(&BigRational::from_integer(v))
                    .expect("integers embed in every field");
                Ok(Polynomial::constant(&self.field, n, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(Polynomial::term(&self.field, Monomial::var(n, i, 1), self.field.one())),
                    None => {
                        self.pos = start;
                        Err(Error::UnknownVariable(name.to_string()))
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn pow_coeff(field: &Field, c: &Coeff, mut e: u64) -> Coeff {
    let mut base = c.clone();
    let mut acc = field.one();
    while e > 0 {
        if e & 1 == 1 {
            acc = field.mul(&acc, &base);
        }
        base = field.mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Parse a polynomial over the ambient ring with the given variables. The
/// result is sorted but not reduced modulo any quotient.
pub fn parse_polynomial(text: &str, vars: &[String], field: Field, order: MonomialOrder) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars, field, order, depth: 0 };
    let f = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Print in the syntax accepted by [`parse_polynomial`].
pub fn format_polynomial(f: &Polynomial, vars: &[String], field: &Field) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in f.terms.iter().enumerate() {
        let (neg, mag) = field.signed_repr(c);
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| if *e == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], e) })
            .collect();
        if mono.is_empty() {
            out.push_str(&mag);
        } else {
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&mono.join("*"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn difference_of_squares() {
        let v = vars(&["x", "y"]);
        let k = Field::Rational;
        let f = parse_polynomial("(x+y)*(x-y)", &v, k, MonomialOrder::Grevlex).unwrap();
        assert_eq!(format_polynomial(&f, &v, &k), "x^2 - y^2");
    }

    #[test]
    fn case_sensitive_variables() {
        let v = vars(&["x", "X"]);
        let k = Field::Prime(7);
        let f = parse_polynomial("X^2*x + 3", &v, k, MonomialOrder::Lex).unwrap();
        assert_eq!(format_polynomial(&f, &v, &k), "x*X^2 + 3");
        assert_eq!(
            parse_polynomial("y", &v, k, MonomialOrder::Lex),
            Err(Error::UnknownVariable("y".into()))
        );
    }

    #[test]
    fn rational_coefficients_print_and_parse() {
        let v = vars(&["x"]);
        let k = Field::Rational;
        let f = parse_polynomial("3/4*x - 1/2", &v, k, MonomialOrder::Grevlex).unwrap();
        let s = format_polynomial(&f, &v, &k);
        assert_eq!(s, "3/4*x - 1/2");
        assert_eq!(parse_polynomial(&s, &v, k, MonomialOrder::Grevlex).unwrap(), f);
    }

    #[test]
    fn malformed_inputs_are_errors() {
        let v = vars(&["x"]);
        for bad in ["", "x +", "(x", "x^", "x/x", "x $", "2x"] {
            assert!(parse_polynomial(bad, &v, Field::Prime(5), MonomialOrder::Grevlex).is_err(), "{bad}");
        }
    }

    #[test]
    fn huge_powers_are_rejected() {
        let v = vars(&["x", "y", "z"]);
        assert!(parse_polynomial("(x+y+z)^4000", &v, Field::Prime(5), MonomialOrder::Grevlex).is_err());
        assert!(parse_polynomial("x^99999999999", &v, Field::Prime(5), MonomialOrder::Grevlex).is_err());
    }

    fn arb_poly(field: Field) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((proptest::collection::vec(0u32..4, 3), -20i64..20), 0..6).prop_map(
            move |ts| {
                let terms = ts.into_iter().map(|(e, c)| (Monomial::new(e), field.from_i64(c))).collect();
                Polynomial::from_terms(&field, MonomialOrder::Grevlex, terms)
            },
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_poly(Field::Prime(32003)), g in arb_poly(Field::Rational)) {
            let v = vars(&["x", "y", "z"]);
            for (p, k) in [(f, Field::Prime(32003)), (g, Field::Rational)] {
                let s = format_polynomial(&p, &v, &k);
                prop_assert_eq!(parse_polynomial(&s, &v, k, MonomialOrder::Grevlex).unwrap(), p);
            }
        }
    }
}
