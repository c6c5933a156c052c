//! Monomials and monomial orders.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// An exponent vector. The total degree is cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        let degree = exps
            .iter()
            .try_fold(0u32, |acc, &e| acc.checked_add(e))
            .expect("exponent overflow");
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial { exps: vec![0; nvars], degree: 0 }
    }

    /// The monomial `x_var^exp`.
    pub fn var(nvars: usize, var: usize, exp: u32) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[var] = exp;
        Monomial { exps, degree: exp }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Product; panics on exponent overflow.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("exponent overflow")
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b)?);
        }
        Some(Monomial { exps, degree: self.degree.checked_add(other.degree)? })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: Vec<u32> = other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect();
        Some(Monomial { exps, degree: other.degree - self.degree })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    /// Exponent vector with an extra trailing variable of exponent zero.
    pub fn extended(&self, extra: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.extend(std::iter::repeat(0).take(extra));
        Monomial { exps, degree: self.degree }
    }

    /// Apply a permutation of variables: variable `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut exps = vec![0; self.exps.len()];
        for (i, e) in self.exps.iter().enumerate() {
            exps[perm[i]] = *e;
        }
        Monomial { exps, degree: self.degree }
    }
}

/// A multiplicative well-order on monomials. Variable precedence is
/// declaration order (`x_0 > x_1 > ...`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Grevlex on the first `split` variables, ties broken by grevlex on the rest.
    /// Eliminates the first block.
    Block(usize),
}

fn grevlex(a: &[u32], b: &[u32], da: u32, db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex(&a.exps, &b.exps, a.degree, b.degree),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Block(split) => {
                let s = (*split).min(a.exps.len());
                let (a1, a2) = a.exps.split_at(s);
                let (b1, b2) = b.exps.split_at(s);
                let d = |v: &[u32]| v.iter().sum::<u32>();
                grevlex(a1, b1, d(a1), d(b1)).then_with(|| grevlex(a2, b2, d(a2), d(b2)))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Grevlex => "grevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Block(s) => format!("block({s})"),
        }
    }
}

/// Checked comparison of two monomials.
pub fn compare_monomials(a: &Monomial, b: &Monomial, order: MonomialOrder) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::DimensionMismatch { expected: a.nvars(), found: b.nvars() });
    }
    Ok(order.cmp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(compare_monomials(&m(&[2, 1]), &m(&[1, 2]), o).unwrap(), Ordering::Greater);
        // xy > zw in x>y>z>w
        assert_eq!(o.cmp(&m(&[1, 1, 0, 0]), &m(&[0, 0, 1, 1])), Ordering::Greater);
    }

    #[test]
    fn lex_examples() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[3, 2]), &m(&[3, 2])), Ordering::Equal);
    }

    #[test]
    fn length_mismatch_is_error() {
        assert!(compare_monomials(&m(&[1]), &m(&[1, 0]), MonomialOrder::Lex).is_err());
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = MonomialOrder::Block(1);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 1])), Ordering::Greater);
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn overflow_is_hard_error() {
        let a = m(&[u32::MAX, 0]);
        let _ = a.mul(&m(&[1, 0]));
    }

    fn orders() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Grevlex),
            Just(MonomialOrder::Lex),
            (0usize..4).prop_map(MonomialOrder::Block)
        ]
    }

    fn mono3() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..5, 3).prop_map(Monomial::new)
    }

    proptest! {
        #[test]
        fn order_is_multiplicative_and_total(o in orders(), a in mono3(), b in mono3(), c in mono3()) {
            let ab = o.cmp(&a, &b);
            prop_assert_eq!(ab, o.cmp(&b, &a).reverse());
            prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), ab);
            prop_assert_ne!(o.cmp(&a, &Monomial::one(3)), Ordering::Less);
            prop_assert_eq!(ab == Ordering::Equal, a == b);
        }

        #[test]
        fn mul_then_divide_is_identity(a in mono3(), b in mono3()) {
            let p = a.mul(&b);
            prop_assert_eq!(b.quotient_of(&p), Some(a));
        }
    }
}
