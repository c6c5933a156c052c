//! Ideals, Gröbner bases, submodules of free modules, syzygies and Krull
//! dimension. Computations over `R = P/J` run in `P` with `J` added to every
//! generating set.

pub mod engine;
mod dim;
mod syzygy;

pub use dim::krull_dim;
pub use syzygy::{irredundant, syzygy_basis, syzygy_basis_graded};

use crate::coeff::Field;
use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;
use engine::{Arith, ModuleOrder, SVec};

/// A column of a matrix over `R`, i.e. an element of a free module.
pub type FreeVector = Vec<Polynomial>;

/// An ideal of a ring `R = P/J`, given by generators in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
}

impl Ideal {
    /// Generators are reduced; zeros and duplicates are dropped.
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Ideal {
        let mut out: Vec<Polynomial> = Vec::new();
        for g in gens {
            let g = ring.normal_form(&g);
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ideal { ring: ring.clone(), gens: out }
    }

    pub fn parse(ring: &Ring, gens: &[&str]) -> Result<Ideal> {
        let gens = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring, gens))
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::new(ring, vec![ring.one()])
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal { ring: ring.clone(), gens: Vec::new() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Reduced Gröbner basis of the preimage of the ideal in `P`.
    pub fn groebner_basis(&self) -> GroebnerBasis {
        groebner_basis(self)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        normal_form(f, &self.groebner_basis()).is_zero()
    }

    pub fn is_proper(&self) -> bool {
        !self.groebner_basis().elements.iter().any(|g| g.is_unit_constant())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(self.ring.mul(a, b));
            }
        }
        Ideal::new(&self.ring, g)
    }

    /// `self ⊆ other`, tested on generators.
    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        let gb = other.groebner_basis();
        self.gens.iter().all(|g| normal_form(g, &gb).is_zero())
    }

    /// `R/I` as a ring.
    pub fn quotient_ring(&self) -> Result<Ring> {
        self.ring.quotient_by(&self.gens)
    }

    pub fn display(&self) -> String {
        let g: Vec<String> = self.gens.iter().map(|g| self.ring.format(g)).collect();
        format!("({})", g.join(", "))
    }
}

/// A reduced Gröbner basis in the ambient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub field: Field,
    pub order: MonomialOrder,
    pub elements: Vec<Polynomial>,
    vecs: Vec<SVec>,
}

impl GroebnerBasis {
    /// Reduced basis of the ideal generated by `gens` in the ambient ring.
    pub fn compute(field: Field, order: MonomialOrder, gens: &[Polynomial]) -> GroebnerBasis {
        let mo = ModuleOrder::top(order);
        let vecs: Vec<SVec> = gens.iter().map(|g| SVec::from_components(&mo, std::slice::from_ref(g))).collect();
        let vecs = engine::groebner(field, mo, &vecs, vec![0], true);
        let elements = vecs.iter().map(|v| v.to_components(1, order).remove(0)).collect();
        GroebnerBasis { field, order, elements, vecs }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, self)
    }
}

/// Remainder of full division of `f` by a Gröbner basis.
pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Polynomial {
    if f.is_zero() || basis.vecs.is_empty() {
        return f.clone();
    }
    let mo = ModuleOrder::top(basis.order);
    let a = Arith { field: basis.field, order: mo };
    let v = SVec::from_components(&mo, std::slice::from_ref(f));
    a.reduce(&v, &basis.vecs).to_components(1, basis.order).remove(0)
}

/// Reduced basis of `⟨gens⟩ + J` under the ring's order.
pub fn groebner_basis(ideal: &Ideal) -> GroebnerBasis {
    let ring = ideal.ring();
    let mut gens: Vec<Polynomial> = ring.quotient_gb().to_vec();
    gens.extend(ideal.gens().iter().cloned());
    GroebnerBasis::compute(ring.field(), ring.order(), &gens)
}

/// `I^n`: all `n`-fold products of generators, deduplicated. `I^0 = ⟨1⟩`.
pub fn ideal_power(ideal: &Ideal, n: u32) -> Ideal {
    let ring = ideal.ring();
    if n == 0 {
        return Ideal::unit(ring);
    }
    let mut current: Vec<(usize, Polynomial)> = ideal.gens().iter().cloned().enumerate().collect();
    for _ in 1..n {
        let mut next: Vec<(usize, Polynomial)> = Vec::new();
        for (last, f) in &current {
            for (j, g) in ideal.gens().iter().enumerate().skip(*last) {
                let p = ring.mul(f, g);
                if !p.is_zero() {
                    next.push((j, p));
                }
            }
        }
        // different multisets can give the same product; keep the smallest
        // resume index so no product is lost
        let mut dedup: Vec<(usize, Polynomial)> = Vec::new();
        for (j, p) in next {
            match dedup.iter_mut().find(|(_, q)| *q == p) {
                Some(e) => e.0 = e.0.min(j),
                None => dedup.push((j, p)),
            }
        }
        current = dedup;
    }
    Ideal::new(ring, current.into_iter().map(|(_, p)| p).collect())
}

/// Gröbner basis of a submodule of `R^rank`, including `J·R^rank`, so that
/// normal forms are canonical representatives modulo the submodule.
#[derive(Debug, Clone)]
pub struct SubmoduleGb {
    ring: Ring,
    rank: usize,
    order: ModuleOrder,
    basis: Vec<SVec>,
}

impl SubmoduleGb {
    pub fn new(ring: &Ring, rank: usize, columns: &[FreeVector]) -> SubmoduleGb {
        let order = ModuleOrder::top(ring.order());
        let mut gens: Vec<SVec> = columns.iter().map(|c| SVec::from_components(&order, c)).collect();
        gens.extend(quotient_multiples(ring, &order, 0, rank));
        let basis = engine::groebner(ring.field(), order, &gens, vec![0; rank], false);
        SubmoduleGb { ring: ring.clone(), rank, order, basis }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn reduce(&self, v: &[Polynomial]) -> Result<FreeVector> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: v.len() });
        }
        let a = Arith { field: self.ring.field(), order: self.order };
        let r = a.reduce(&SVec::from_components(&self.order, v), &self.basis);
        Ok(r.to_components(self.rank, self.ring.order()))
    }

    pub fn contains(&self, v: &[Polynomial]) -> bool {
        self.reduce(v).map(|r| r.iter().all(|p| p.is_zero())).unwrap_or(false)
    }

    /// True when the submodule is all of `R^rank`.
    pub fn is_everything(&self) -> bool {
        (0..self.rank).all(|c| {
            let mut e = vec![Polynomial::zero(); self.rank];
            e[c] = self.ring.one();
            self.contains(&e)
        })
    }

    /// Basis elements as columns (in `P`).
    pub fn elements(&self) -> Vec<FreeVector> {
        self.basis.iter().map(|v| v.to_components(self.rank, self.ring.order())).collect()
    }
}

/// `g·e_c` for every `g` in the quotient basis and `c` in `[from, to)`.
pub(crate) fn quotient_multiples(ring: &Ring, order: &ModuleOrder, from: usize, to: usize) -> Vec<SVec> {
    let mut out = Vec::new();
    for c in from..to {
        for g in ring.quotient_gb_vecs() {
            let mut v = g.clone();
            for t in &mut v.terms {
                t.comp = c;
            }
            v.terms.sort_by(|a, b| order.cmp(&b.mono, b.comp, &a.mono, a.comp));
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use proptest::prelude::*;

    fn qxy() -> Ring {
        Ring::polynomial(&["x", "y"], Field::Rational, MonomialOrder::Grevlex)
    }

    fn fmt_gb(r: &Ring, gb: &GroebnerBasis) -> Vec<String> {
        gb.elements.iter().map(|g| r.format(g)).collect()
    }

    #[test]
    fn normal_form_examples() {
        let r = qxy();
        let gb = Ideal::parse(&r, &["x^2 - y"]).unwrap().groebner_basis();
        assert_eq!(r.format(&normal_form(&r.parse("x^2").unwrap(), &gb)), "y");
        let r4 = Ring::polynomial(&["x", "y", "z", "w"], Field::Prime(32003), MonomialOrder::Grevlex);
        let gb = Ideal::parse(&r4, &["x*y - z*w"]).unwrap().groebner_basis();
        assert_eq!(r4.format(&normal_form(&r4.parse("x*y").unwrap(), &gb)), "z*w");
        let member = r4.parse("(x*y - z*w)*(x + w^3)").unwrap();
        assert!(normal_form(&member, &gb).is_zero());
    }

    #[test]
    fn groebner_examples() {
        let r = qxy();
        let gb = Ideal::parse(&r, &["x^2 - y^2", "x^2 + y^2"]).unwrap().groebner_basis();
        assert_eq!(fmt_gb(&r, &gb), vec!["y^2", "x^2"]);
        let r4 = Ring::polynomial(&["x", "y", "z", "w"], Field::Prime(32003), MonomialOrder::Grevlex);
        let gb = Ideal::parse(&r4, &["x*y - z*w"]).unwrap().groebner_basis();
        assert_eq!(fmt_gb(&r4, &gb), vec!["x*y - z*w"]);
        let gb = Ideal::parse(&r, &["x", "x"]).unwrap().groebner_basis();
        assert_eq!(fmt_gb(&r, &gb), vec!["x"]);
        let gb = Ideal::parse(&r, &["x + 1", "x"]).unwrap().groebner_basis();
        assert_eq!(fmt_gb(&r, &gb), vec!["1"]);
    }

    #[test]
    fn power_examples() {
        let r = qxy();
        let m = Ideal::parse(&r, &["x", "y"]).unwrap();
        let sq = ideal_power(&m, 2);
        let mut s: Vec<String> = sq.gens().iter().map(|g| r.format(g)).collect();
        s.sort();
        assert_eq!(s, vec!["x*y", "x^2", "y^2"]);
        assert_eq!(ideal_power(&m, 0).gens(), &[r.one()]);
        let x = Ideal::parse(&r, &["x"]).unwrap();
        assert_eq!(r.format(&ideal_power(&x, 5).gens()[0]), "x^5");
    }

    fn s_poly_reduces(r: &Ring, gb: &GroebnerBasis) -> bool {
        let k = r.field();
        for (i, f) in gb.elements.iter().enumerate() {
            for g in &gb.elements[i + 1..] {
                let (fm, fc) = f.leading().unwrap().clone();
                let (gm, gc) = g.leading().unwrap().clone();
                let l = fm.lcm(&gm);
                let a = r.mul_ambient(f, &Polynomial::term(&k, fm.quotient_of(&l).unwrap(), k.inv(&fc)));
                let b = r.mul_ambient(g, &Polynomial::term(&k, gm.quotient_of(&l).unwrap(), k.inv(&gc)));
                if !normal_form(&r.sub(&a, &b), gb).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    fn arb_ideal() -> impl Strategy<Value = Vec<Vec<(Vec<u32>, i64)>>> {
        proptest::collection::vec(
            proptest::collection::vec((proptest::collection::vec(0u32..3, 3), -3i64..4), 1..4),
            1..4,
        )
    }

    fn build(r: &Ring, raw: Vec<Vec<(Vec<u32>, i64)>>) -> Vec<Polynomial> {
        raw.into_iter()
            .map(|ts| {
                let terms = ts.into_iter().map(|(e, c)| (Monomial::new(e), r.field().from_i64(c))).collect();
                Polynomial::from_terms(&r.field(), r.order(), terms)
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn buchberger_criterion_holds(raw in arb_ideal()) {
            let r = Ring::polynomial(&["x", "y", "z"], Field::Prime(32003), MonomialOrder::Grevlex);
            let gens = build(&r, raw);
            let gb = GroebnerBasis::compute(r.field(), r.order(), &gens);
            prop_assert!(s_poly_reduces(&r, &gb));
            for g in &gens {
                prop_assert!(normal_form(g, &gb).is_zero());
                let nf = normal_form(g, &gb);
                prop_assert_eq!(normal_form(&nf, &gb), nf);
            }
            // reduced: no term divisible by another leading term
            for (i, f) in gb.elements.iter().enumerate() {
                for (j, g) in gb.elements.iter().enumerate() {
                    if i != j {
                        let lm = &g.leading().unwrap().0;
                        prop_assert!(f.terms().iter().all(|(m, _)| !lm.divides(m)));
                    }
                }
            }
        }

        #[test]
        fn normal_form_difference_is_member(raw in arb_ideal(), fraw in arb_ideal()) {
            let r = Ring::polynomial(&["x", "y", "z"], Field::Prime(32003), MonomialOrder::Lex);
            let gb = GroebnerBasis::compute(r.field(), r.order(), &build(&r, raw));
            for f in build(&r, fraw) {
                let nf = normal_form(&f, &gb);
                prop_assert!(normal_form(&r.sub(&f, &nf), &gb).is_zero());
                prop_assert_eq!(normal_form(&nf, &gb), nf);
            }
        }

        #[test]
        fn power_is_multiplicative(a in 0u32..3, b in 0u32..3) {
            let r = Ring::polynomial(&["x", "y", "z"], Field::Prime(32003), MonomialOrder::Grevlex);
            let i = Ideal::parse(&r, &["x + y", "y*z", "z^2 - x"]).unwrap();
            let lhs = ideal_power(&i, a + b);
            let rhs = ideal_power(&i, a).product(&ideal_power(&i, b));
            prop_assert!(lhs.is_subset_of(&rhs));
            prop_assert!(rhs.is_subset_of(&lhs));
        }
    }
}
