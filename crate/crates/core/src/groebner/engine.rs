//! Buchberger's algorithm on sparse vectors of a free module over the
//! ambient polynomial ring. Ideals are the rank-one case.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use crate::coeff::{Coeff, Field};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;

/// Term order on `monomial * e_component`.
///
/// Term-over-position: monomials are compared first, then lower component
/// indices win. With `head > 0` every term in components `< head` beats every
/// term in the remaining components, which turns the order into an
/// elimination order for the first `head` components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleOrder {
    pub mono: MonomialOrder,
    pub head: usize,
}

impl ModuleOrder {
    pub fn top(mono: MonomialOrder) -> ModuleOrder {
        ModuleOrder { mono, head: 0 }
    }

    pub fn eliminating(mono: MonomialOrder, head: usize) -> ModuleOrder {
        ModuleOrder { mono, head }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, ac: usize, b: &Monomial, bc: usize) -> Ordering {
        if self.head > 0 {
            let (ha, hb) = (ac < self.head, bc < self.head);
            if ha != hb {
                return ha.cmp(&hb);
            }
        }
        self.mono.cmp(a, b).then_with(|| bc.cmp(&ac))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VTerm {
    pub mono: Monomial,
    pub comp: usize,
    pub coeff: Coeff,
}

/// A vector of a free module, terms sorted strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SVec {
    pub terms: Vec<VTerm>,
}

impl SVec {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    /// Pack polynomial components into one vector.
    pub fn from_components(order: &ModuleOrder, comps: &[Polynomial]) -> SVec {
        let mut terms: Vec<VTerm> = comps
            .iter()
            .enumerate()
            .flat_map(|(c, p)| {
                p.terms().iter().map(move |(m, k)| VTerm { mono: m.clone(), comp: c, coeff: k.clone() })
            })
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.mono, b.comp, &a.mono, a.comp));
        SVec { terms }
    }

    /// Same as `from_components` with every component index shifted by `offset`.
    pub fn from_components_at(order: &ModuleOrder, comps: &[Polynomial], offset: usize) -> SVec {
        let mut v = SVec::from_components(order, comps);
        for t in &mut v.terms {
            t.comp += offset;
        }
        v.terms.sort_by(|a, b| order.cmp(&b.mono, b.comp, &a.mono, a.comp));
        v
    }

    /// Split into `rank` polynomial components, sorted under `mono`.
    pub fn to_components(&self, rank: usize, mono: MonomialOrder) -> Vec<Polynomial> {
        let mut out: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            out[t.comp].push((t.mono.clone(), t.coeff.clone()));
        }
        out.into_iter()
            .map(|mut ts| {
                ts.sort_by(|a, b| mono.cmp(&b.0, &a.0));
                Polynomial { terms: ts }
            })
            .collect()
    }

    /// Restrict to components in `range`, re-indexed from zero.
    pub fn slice_components(&self, from: usize, to: usize) -> SVec {
        SVec {
            terms: self
                .terms
                .iter()
                .filter(|t| t.comp >= from && t.comp < to)
                .map(|t| VTerm { mono: t.mono.clone(), comp: t.comp - from, coeff: t.coeff.clone() })
                .collect(),
        }
    }
}

/// Arithmetic on [`SVec`] for a fixed field and order.
#[derive(Debug, Clone, Copy)]
pub struct Arith {
    pub field: Field,
    pub order: ModuleOrder,
}

impl Arith {
    /// `f[start..] + c * m * g`.
    fn add_scaled_from(&self, f: &[VTerm], c: &Coeff, m: &Monomial, g: &[VTerm]) -> Vec<VTerm> {
        let field = &self.field;
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut i = 0;
        let mut gi = g
            .iter()
            .map(|t| VTerm { mono: t.mono.mul(m), comp: t.comp, coeff: field.mul(&t.coeff, c) })
            .peekable();
        loop {
            let ord = match (f.get(i), gi.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(a), Some(b)) => self.order.cmp(&a.mono, a.comp, &b.mono, b.comp),
            };
            match ord {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => out.push(gi.next().unwrap()),
                Ordering::Equal => {
                    let b = gi.next().unwrap();
                    let s = field.add(&f[i].coeff, &b.coeff);
                    if !field.is_zero(&s) {
                        out.push(VTerm { mono: b.mono, comp: b.comp, coeff: s });
                    }
                    i += 1;
                }
            }
        }
        out
    }

    pub fn add_scaled(&self, f: &SVec, c: &Coeff, m: &Monomial, g: &SVec) -> SVec {
        if self.field.is_zero(c) {
            return f.clone();
        }
        SVec { terms: self.add_scaled_from(&f.terms, c, m, &g.terms) }
    }

    pub fn add(&self, f: &SVec, g: &SVec) -> SVec {
        match g.lead() {
            None => f.clone(),
            Some(t) => self.add_scaled(f, &self.field.one(), &Monomial::one(t.mono.nvars()), g),
        }
    }

    pub fn sub(&self, f: &SVec, g: &SVec) -> SVec {
        match g.lead() {
            None => f.clone(),
            Some(t) => self.add_scaled(f, &self.field.from_i64(-1), &Monomial::one(t.mono.nvars()), g),
        }
    }

    /// Multiply by a polynomial scalar.
    pub fn mul_poly(&self, p: &Polynomial, g: &SVec) -> SVec {
        let mut acc = SVec::default();
        for (m, c) in p.terms() {
            acc = self.add_scaled(&acc, c, m, g);
        }
        acc
    }

    pub fn monic(&self, mut f: SVec) -> SVec {
        if let Some(t) = f.terms.first() {
            if !self.field.is_one(&t.coeff) {
                let inv = self.field.inv(&t.coeff);
                for t in &mut f.terms {
                    t.coeff = self.field.mul(&t.coeff, &inv);
                }
            }
        }
        f
    }

    fn find_divisor<'b>(&self, t: &VTerm, basis: &'b [SVec]) -> Option<&'b SVec> {
        basis.iter().find(|g| {
            let l = &g.terms[0];
            l.comp == t.comp && l.mono.divides(&t.mono)
        })
    }

    /// Full reduction: no term of the result is divisible by a leading term
    /// of `basis`. Basis elements must be monic.
    pub fn reduce(&self, f: &SVec, basis: &[SVec]) -> SVec {
        let mut cur = f.terms.clone();
        let mut start = 0;
        let neg_one = self.field.from_i64(-1);
        while start < cur.len() {
            let t = &cur[start];
            match self.find_divisor(t, basis) {
                Some(g) => {
                    let q = g.terms[0].mono.quotient_of(&t.mono).unwrap();
                    let c = self.field.mul(&t.coeff, &neg_one);
                    let mut next = cur[..start].to_vec();
                    next.extend(self.add_scaled_from(&cur[start..], &c, &q, &g.terms));
                    cur = next;
                }
                None => start += 1,
            }
        }
        SVec { terms: cur }
    }

    /// Reduce only while the leading term is divisible.
    pub fn reduce_top(&self, f: &SVec, basis: &[SVec]) -> SVec {
        let mut cur = f.clone();
        let neg_one = self.field.from_i64(-1);
        while let Some(t) = cur.terms.first() {
            match self.find_divisor(t, basis) {
                Some(g) => {
                    let q = g.terms[0].mono.quotient_of(&t.mono).unwrap();
                    let c = self.field.mul(&t.coeff, &neg_one);
                    cur = SVec { terms: self.add_scaled_from(&cur.terms, &c, &q, &g.terms) };
                }
                None => break,
            }
        }
        cur
    }

    pub fn spoly(&self, f: &SVec, g: &SVec) -> SVec {
        let (lf, lg) = (&f.terms[0], &g.terms[0]);
        let l = lf.mono.lcm(&lg.mono);
        let mf = lf.mono.quotient_of(&l).unwrap();
        let mg = lg.mono.quotient_of(&l).unwrap();
        let cf = self.field.inv(&lf.coeff);
        let cg = self.field.neg(&self.field.inv(&lg.coeff));
        let a = self.add_scaled(&SVec::default(), &cf, &mf, f);
        self.add_scaled(&a, &cg, &mg, g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: i64,
    degree: u32,
    j: usize,
    i: usize,
}

/// Incremental Buchberger state. Elements can be added one at a time and the
/// basis completed at any point, so membership can be decided between
/// insertions.
#[derive(Debug, Clone)]
pub struct Builder {
    pub arith: Arith,
    shifts: Vec<i64>,
    basis: Vec<SVec>,
    sugar: Vec<i64>,
    queue: BTreeSet<PairKey>,
    pending: HashSet<(usize, usize)>,
    /// Apply the coprime-leading-monomial criterion (valid for ideals only).
    product_criterion: bool,
}

impl Builder {
    pub fn new(field: Field, order: ModuleOrder, shifts: Vec<i64>, product_criterion: bool) -> Builder {
        Builder {
            arith: Arith { field, order },
            shifts,
            basis: Vec::new(),
            sugar: Vec::new(),
            queue: BTreeSet::new(),
            pending: HashSet::new(),
            product_criterion,
        }
    }

    fn shift(&self, comp: usize) -> i64 {
        self.shifts.get(comp).copied().unwrap_or(0)
    }

    fn sugar_of(&self, f: &SVec) -> i64 {
        f.terms.iter().map(|t| t.mono.degree() as i64 + self.shift(t.comp)).max().unwrap_or(0)
    }

    pub fn elements(&self) -> &[SVec] {
        &self.basis
    }

    /// Insert without completing. Returns false if `f` top-reduces to zero
    /// against the current elements.
    pub fn insert(&mut self, f: SVec) -> bool {
        let s = self.sugar_of(&f);
        let h = self.arith.reduce_top(&f, &self.basis);
        if h.is_zero() {
            return false;
        }
        self.push(h, s);
        true
    }

    fn push(&mut self, h: SVec, sugar: i64) {
        let h = self.arith.monic(h);
        let j = self.basis.len();
        let (hm, hc) = (h.terms[0].mono.clone(), h.terms[0].comp);
        for (i, g) in self.basis.iter().enumerate() {
            let (gm, gc) = (&g.terms[0].mono, g.terms[0].comp);
            if gc != hc {
                continue;
            }
            if self.product_criterion && gm.is_coprime(&hm) {
                continue;
            }
            let l = gm.lcm(&hm);
            let si = self.sugar[i] + (l.degree() - gm.degree()) as i64;
            let sj = sugar + (l.degree() - hm.degree()) as i64;
            self.queue.insert(PairKey { sugar: si.max(sj), degree: l.degree(), j, i });
            self.pending.insert((i, j));
        }
        self.basis.push(h);
        self.sugar.push(sugar);
    }

    fn chain_criterion(&self, i: usize, j: usize) -> bool {
        let (fi, fj) = (&self.basis[i].terms[0], &self.basis[j].terms[0]);
        let l = fi.mono.lcm(&fj.mono);
        self.basis.iter().enumerate().any(|(k, g)| {
            if k == i || k == j {
                return false;
            }
            let t = &g.terms[0];
            t.comp == fi.comp
                && t.mono.divides(&l)
                && !self.pending.contains(&(i.min(k), i.max(k)))
                && !self.pending.contains(&(j.min(k), j.max(k)))
        })
    }

    /// Process every pending pair.
    pub fn complete(&mut self) {
        while let Some(key) = self.queue.pop_first() {
            let (i, j) = (key.i, key.j);
            self.pending.remove(&(i, j));
            if self.chain_criterion(i, j) {
                continue;
            }
            let s = self.arith.spoly(&self.basis[i], &self.basis[j]);
            let h = self.arith.reduce_top(&s, &self.basis);
            if !h.is_zero() {
                self.push(h, key.sugar);
            }
        }
    }

    /// Reduced basis sorted increasingly by leading term.
    pub fn reduced(&self) -> Vec<SVec> {
        let order = self.arith.order;
        let n = self.basis.len();
        let mut keep = Vec::new();
        for i in 0..n {
            let ti = &self.basis[i].terms[0];
            let redundant = (0..n).any(|k| {
                if k == i {
                    return false;
                }
                let tk = &self.basis[k].terms[0];
                tk.comp == ti.comp && tk.mono.divides(&ti.mono) && (tk.mono != ti.mono || k < i)
            });
            if !redundant {
                keep.push(self.basis[i].clone());
            }
        }
        let mut out: Vec<SVec> = (0..keep.len())
            .map(|i| {
                let others: Vec<SVec> =
                    keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g.clone()).collect();
                let head = SVec { terms: vec![keep[i].terms[0].clone()] };
                let tail = SVec { terms: keep[i].terms[1..].to_vec() };
                let tail = self.arith.reduce(&tail, &others);
                self.arith.add(&head, &tail)
            })
            .collect();
        out.sort_by(|a, b| {
            let (x, y) = (&a.terms[0], &b.terms[0]);
            order.cmp(&x.mono, x.comp, &y.mono, y.comp)
        });
        out
    }
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn groebner(field: Field, order: ModuleOrder, gens: &[SVec], shifts: Vec<i64>, product_criterion: bool) -> Vec<SVec> {
    let mut b = Builder::new(field, order, shifts, product_criterion);
    let mut sorted: Vec<&SVec> = gens.iter().filter(|g| !g.is_zero()).collect();
    sorted.sort_by_key(|g| b.sugar_of(g));
    for g in sorted {
        b.insert(g.clone());
    }
    b.complete();
    b.reduced()
}
