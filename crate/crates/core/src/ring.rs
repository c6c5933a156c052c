//! Quotient rings `R = P/J` of polynomial rings. Elements of `R` are stored
//! as normal forms modulo the reduced Gröbner basis of `J`.

use std::fmt;
use std::sync::Arc;

use crate::coeff::{Coeff, Field};
use crate::error::{Error, Result};
use crate::groebner::engine::{self, ModuleOrder, SVec};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{self, Polynomial};

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    vars: Vec<String>,
    field: Field,
    order: MonomialOrder,
    quotient: Vec<Polynomial>,
    quotient_gb: Vec<Polynomial>,
    gb_vecs: Vec<SVec>,
}

/// A ring `K[vars]/J`. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.vars == other.0.vars
                && self.0.field == other.0.field
                && self.0.order == other.0.order
                && self.0.quotient_gb == other.0.quotient_gb)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.0.field, self.0.vars.join(","))?;
        if !self.0.quotient_gb.is_empty() {
            let gens: Vec<String> = self.0.quotient_gb.iter().map(|g| self.format(g)).collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}

impl Ring {
    /// Build `K[vars]/⟨quotient⟩`. The quotient generators are taken in the
    /// ambient ring.
    pub fn new(vars: Vec<String>, field: Field, order: MonomialOrder, quotient: Vec<Polynomial>) -> Result<Ring> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Precondition(format!("duplicate variable `{v}`")));
            }
        }
        let n = vars.len();
        for q in &quotient {
            if let Some(m) = q.nvars() {
                if m != n {
                    return Err(Error::DimensionMismatch { expected: n, found: m });
                }
            }
        }
        let morder = ModuleOrder::top(order);
        let vecs: Vec<SVec> = quotient.iter().map(|q| SVec::from_components(&morder, std::slice::from_ref(q))).collect();
        let gb_vecs = engine::groebner(field, morder, &vecs, vec![0], true);
        let quotient_gb = gb_vecs.iter().map(|v| v.to_components(1, order).remove(0)).collect();
        Ok(Ring(Arc::new(RingData { vars, field, order, quotient, quotient_gb, gb_vecs })))
    }

    /// The polynomial ring `K[vars]` itself.
    pub fn polynomial(vars: &[&str], field: Field, order: MonomialOrder) -> Ring {
        Ring::new(vars.iter().map(|s| s.to_string()).collect(), field, order, Vec::new()).expect("no quotient")
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.0.order
    }

    pub fn quotient(&self) -> &[Polynomial] {
        &self.0.quotient
    }

    /// Reduced Gröbner basis of `J`.
    pub fn quotient_gb(&self) -> &[Polynomial] {
        &self.0.quotient_gb
    }

    pub(crate) fn quotient_gb_vecs(&self) -> &[SVec] {
        &self.0.gb_vecs
    }

    /// True when `J = ⟨1⟩`.
    pub fn is_zero_ring(&self) -> bool {
        self.0.quotient_gb.iter().any(|g| g.is_unit_constant())
    }

    /// True when `J` is generated by homogeneous polynomials (standard grading).
    pub fn is_graded(&self) -> bool {
        self.0.quotient_gb.iter().all(|g| g.is_homogeneous())
    }

    /// The ambient polynomial ring `P`.
    pub fn ambient(&self) -> Ring {
        if self.0.quotient.is_empty() {
            return self.clone();
        }
        Ring::new(self.0.vars.clone(), self.0.field, self.0.order, Vec::new()).expect("no quotient")
    }

    /// `R/⟨extra⟩`, with `extra` given as elements of `R`.
    pub fn quotient_by(&self, extra: &[Polynomial]) -> Result<Ring> {
        let mut q = self.0.quotient.clone();
        q.extend(extra.iter().filter(|f| !f.is_zero()).cloned());
        Ring::new(self.0.vars.clone(), self.0.field, self.0.order, q)
    }

    /// `R[name]`, the new variable last. The monomial order keeps its kind.
    pub fn adjoin_variable(&self, name: &str) -> Result<Ring> {
        let mut vars = self.0.vars.clone();
        vars.push(name.to_string());
        let q = self.0.quotient.iter().map(|f| f.extended(1).resorted(self.0.order)).collect();
        Ring::new(vars, self.0.field, self.0.order, q)
    }

    /// Image of an element of `R` in `R[t]` (see [`Ring::adjoin_variable`]).
    pub fn extend_element(&self, f: &Polynomial, target: &Ring) -> Polynomial {
        let extra = target.nvars() - self.nvars();
        target.normal_form(&f.extended(extra).resorted(target.order()))
    }

    /// Same polynomial viewed in a ring over the same variables.
    pub fn transfer(&self, f: &Polynomial, target: &Ring) -> Polynomial {
        debug_assert_eq!(self.nvars(), target.nvars());
        target.normal_form(&f.resorted(target.order()))
    }

    pub fn check(&self, f: &Polynomial) -> Result<()> {
        match f.nvars() {
            Some(n) if n != self.nvars() => Err(Error::RingMismatch),
            _ => Ok(()),
        }
    }

    fn morder(&self) -> ModuleOrder {
        ModuleOrder::top(self.0.order)
    }

    /// Canonical representative modulo `J`.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        if self.0.gb_vecs.is_empty() || f.is_zero() {
            return f.clone();
        }
        let a = engine::Arith { field: self.0.field, order: self.morder() };
        let v = SVec::from_components(&self.morder(), std::slice::from_ref(f));
        a.reduce(&v, &self.0.gb_vecs).to_components(1, self.0.order).remove(0)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero()
    }

    pub fn one(&self) -> Polynomial {
        self.normal_form(&Polynomial::constant(&self.0.field, self.nvars(), self.0.field.one()))
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        self.normal_form(&Polynomial::constant(&self.0.field, self.nvars(), self.0.field.from_i64(c)))
    }

    pub fn from_coeff(&self, c: Coeff) -> Polynomial {
        self.normal_form(&Polynomial::constant(&self.0.field, self.nvars(), c))
    }

    pub fn var(&self, i: usize) -> Polynomial {
        self.normal_form(&Polynomial::term(&self.0.field, Monomial::var(self.nvars(), i, 1), self.0.field.one()))
    }

    pub fn monomial(&self, m: Monomial, c: Coeff) -> Polynomial {
        self.normal_form(&Polynomial::term(&self.0.field, m, c))
    }

    pub fn add(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        poly::add(&self.0.field, self.0.order, f, g)
    }

    pub fn sub(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        poly::sub(&self.0.field, self.0.order, f, g)
    }

    pub fn neg(&self, f: &Polynomial) -> Polynomial {
        poly::scale(&self.0.field, f, &self.0.field.from_i64(-1))
    }

    pub fn scale(&self, f: &Polynomial, c: &Coeff) -> Polynomial {
        poly::scale(&self.0.field, f, c)
    }

    /// Product in `R` (normal form of the product in `P`).
    pub fn mul(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        if f.is_zero() || g.is_zero() {
            return Polynomial::zero();
        }
        self.normal_form(&poly::mul(&self.0.field, self.0.order, f, g))
    }

    /// Product in the ambient ring, no reduction.
    pub fn mul_ambient(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        poly::mul(&self.0.field, self.0.order, f, g)
    }

    /// Checked product.
    pub fn product(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.mul(f, g))
    }

    pub fn pow(&self, f: &Polynomial, n: u32) -> Polynomial {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, f);
        }
        acc
    }

    pub fn leading_term(&self, f: &Polynomial) -> Result<(Monomial, Coeff)> {
        self.check(f)?;
        f.leading().cloned().ok_or(Error::ZeroPolynomial)
    }

    /// Parse and reduce.
    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        let f = poly::parse_polynomial(text, &self.0.vars, self.0.field, self.0.order)?;
        Ok(self.normal_form(&f))
    }

    pub fn format(&self, f: &Polynomial) -> String {
        poly::format_polynomial(f, &self.0.vars, &self.0.field)
    }
}

/// `f·g` in `ring`, as a canonical representative.
pub fn poly_product(f: &Polynomial, g: &Polynomial, ring: &Ring) -> Result<Polynomial> {
    ring.product(f, g)
}

/// Order-maximal term of `f`.
pub fn leading_term(f: &Polynomial, order: MonomialOrder) -> Result<(Monomial, Coeff)> {
    let mut terms = f.terms().to_vec();
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    terms.into_iter().next().ok_or(Error::ZeroPolynomial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex1() -> Ring {
        let p = Ring::polynomial(&["x", "y", "z", "w"], Field::Prime(32003), MonomialOrder::Grevlex);
        let j = p.parse("x*y - z*w").unwrap();
        Ring::new(p.vars().to_vec(), p.field(), p.order(), vec![j]).unwrap()
    }

    #[test]
    fn product_in_hypersurface() {
        let r = ex1();
        let xy = poly_product(&r.var(0), &r.var(1), &r).unwrap();
        assert_eq!(r.format(&xy), "z*w");
    }

    #[test]
    fn product_examples() {
        let r = Ring::polynomial(&["x", "y"], Field::Rational, MonomialOrder::Grevlex);
        let f = r.parse("x+y").unwrap();
        let g = r.parse("x-y").unwrap();
        assert_eq!(r.format(&r.mul(&f, &g)), "x^2 - y^2");
        assert!(r.mul(&f, &r.zero()).is_zero());
    }

    #[test]
    fn leading_terms() {
        let r = Ring::polynomial(&["x", "y"], Field::Prime(101), MonomialOrder::Grevlex);
        let f = r.parse("x^2*y + x*y^2").unwrap();
        let (m, c) = leading_term(&f, MonomialOrder::Grevlex).unwrap();
        assert_eq!(m.exponents(), &[2, 1]);
        assert_eq!(c, Coeff::Fp(1));
        let (m, c) = r.leading_term(&r.parse("3*x").unwrap()).unwrap();
        assert_eq!((m.exponents(), c), (&[1u32, 0][..], Coeff::Fp(3)));
        assert_eq!(r.leading_term(&r.zero()), Err(Error::ZeroPolynomial));
        let p = ex1().ambient();
        let (m, c) = p.leading_term(&p.parse("x*y - z*w").unwrap()).unwrap();
        assert_eq!((m.exponents(), c), (&[1u32, 1, 0, 0][..], Coeff::Fp(1)));
    }

    #[test]
    fn ring_mismatch() {
        let r2 = Ring::polynomial(&["x", "y"], Field::Prime(101), MonomialOrder::Grevlex);
        let r3 = Ring::polynomial(&["x", "y", "z"], Field::Prime(101), MonomialOrder::Grevlex);
        let f = r3.parse("z").unwrap();
        assert_eq!(r2.product(&f, &r2.one()), Err(Error::RingMismatch));
    }

    fn small(r: Ring) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, 4), -9i64..9), 0..5).prop_map(move |ts| {
            let terms = ts.into_iter().map(|(e, c)| (Monomial::new(e), r.field().from_i64(c))).collect();
            r.normal_form(&Polynomial::from_terms(&r.field(), r.order(), terms))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn commutative_associative(f in small(ex1()), g in small(ex1()), h in small(ex1())) {
            let r = ex1();
            prop_assert_eq!(r.mul(&f, &g), r.mul(&g, &f));
            prop_assert_eq!(r.mul(&r.mul(&f, &g), &h), r.mul(&f, &r.mul(&g, &h)));
            prop_assert_eq!(r.add(&r.add(&f, &g), &h), r.add(&f, &r.add(&g, &h)));
        }

        #[test]
        fn quotient_elements_are_zero(f in small(ex1()), g in small(ex1())) {
            let r = ex1();
            let rel = r.ambient().parse("x*y - z*w").unwrap();
            let in_j = r.mul_ambient(&f, &rel);
            prop_assert!(r.normal_form(&in_j).is_zero());
            prop_assert_eq!(r.normal_form(&r.add(&g, &in_j)), g.clone());
            prop_assert_eq!(r.mul(&g, &r.normal_form(&in_j)), r.zero());
        }
    }
}
