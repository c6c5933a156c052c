//! Syzygies over `R = P/J` by elimination: the columns are extended by unit
//! vectors in a tail block, `J` times every basis vector is added, and the
//! tail parts of basis elements with no head terms generate the syzygies.

use super::engine::{self, Builder, ModuleOrder, SVec, VTerm};
use super::{quotient_multiples, FreeVector};
use crate::monomial::Monomial;
use crate::ring::Ring;

/// Generators of the kernel of `R^k -> R^rank` given by `columns`.
///
/// The result is irredundant: no returned vector lies in the span of the
/// ones before it.
pub fn syzygy_basis(columns: &[FreeVector], rank: usize, ring: &Ring) -> Vec<FreeVector> {
    syz(columns, rank, ring, vec![0; rank], vec![0; columns.len()])
}

/// Same as [`syzygy_basis`] for homogeneous columns, where `row_degrees` are
/// the degrees of the target basis and `col_degrees` the degrees of the
/// columns. The result is a minimal homogeneous generating set.
pub fn syzygy_basis_graded(
    columns: &[FreeVector],
    rank: usize,
    ring: &Ring,
    row_degrees: &[i64],
    col_degrees: &[i64],
) -> Vec<FreeVector> {
    syz(columns, rank, ring, row_degrees.to_vec(), col_degrees.to_vec())
}

fn syz(columns: &[FreeVector], rank: usize, ring: &Ring, head: Vec<i64>, tail: Vec<i64>) -> Vec<FreeVector> {
    let k = columns.len();
    if k == 0 {
        return Vec::new();
    }
    let order = ModuleOrder::eliminating(ring.order(), rank);
    let n = ring.nvars();
    let mut gens: Vec<SVec> = Vec::with_capacity(k);
    for (l, col) in columns.iter().enumerate() {
        let mut v = SVec::from_components(&order, col);
        v.terms.push(VTerm { mono: Monomial::one(n), comp: rank + l, coeff: ring.field().one() });
        v.terms.sort_by(|a, b| order.cmp(&b.mono, b.comp, &a.mono, a.comp));
        gens.push(v);
    }
    gens.extend(quotient_multiples(ring, &order, 0, rank + k));
    let mut shifts = head;
    shifts.extend(tail.iter().copied());
    let gb = engine::groebner(ring.field(), order, &gens, shifts, false);

    let tail_order = ModuleOrder::top(ring.order());
    let mut found: Vec<(i64, SVec)> = Vec::new();
    for g in &gb {
        if g.terms[0].comp < rank {
            continue;
        }
        let comps: Vec<_> = g.slice_components(rank, rank + k).to_components(k, ring.order());
        let comps: Vec<_> = comps.iter().map(|p| ring.normal_form(p)).collect();
        if comps.iter().all(|p| p.is_zero()) {
            continue;
        }
        let v = SVec::from_components(&tail_order, &comps);
        let deg = v.terms.iter().map(|t| t.mono.degree() as i64 + tail[t.comp]).max().unwrap();
        found.push((deg, v));
    }
    found.sort_by_key(|(d, _)| *d);

    let mut builder = Builder::new(ring.field(), tail_order, tail.clone(), false);
    for q in quotient_multiples(ring, &tail_order, 0, k) {
        builder.insert(q);
    }
    builder.complete();
    let mut out = Vec::new();
    for (_, v) in found {
        if builder.insert(v.clone()) {
            builder.complete();
            out.push(v.to_components(k, ring.order()));
        }
    }
    out
}

/// Indices of an irredundant subset of `gens` spanning the same submodule
/// modulo `base` (and `J`). Generators are visited by increasing degree, so
/// for homogeneous input the kept set is a minimal generating set.
pub fn irredundant(
    ring: &Ring,
    rank: usize,
    gens: &[FreeVector],
    degrees: &[i64],
    base: &[FreeVector],
    row_degrees: &[i64],
) -> Vec<usize> {
    let order = ModuleOrder::top(ring.order());
    let mut builder = Builder::new(ring.field(), order, row_degrees.to_vec(), false);
    for q in quotient_multiples(ring, &order, 0, rank) {
        builder.insert(q);
    }
    for b in base {
        builder.insert(SVec::from_components(&order, b));
    }
    builder.complete();
    let mut idx: Vec<usize> = (0..gens.len()).collect();
    idx.sort_by_key(|i| degrees[*i]);
    let mut keep = Vec::new();
    for i in idx {
        if builder.insert(SVec::from_components(&order, &gens[i])) {
            builder.complete();
            keep.push(i);
        }
    }
    keep.sort_unstable();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::groebner::SubmoduleGb;
    use crate::monomial::MonomialOrder;
    use crate::poly::Polynomial;

    fn apply(ring: &Ring, columns: &[FreeVector], rank: usize, s: &[Polynomial]) -> Vec<Polynomial> {
        (0..rank)
            .map(|r| {
                columns.iter().zip(s).fold(Polynomial::zero(), |acc, (c, a)| ring.add(&acc, &ring.mul(&c[r], a)))
            })
            .collect()
    }

    #[test]
    fn koszul_relation() {
        let r = Ring::polynomial(&["x", "y"], Field::Prime(32003), MonomialOrder::Grevlex);
        let cols = vec![vec![r.var(0)], vec![r.var(1)]];
        let s = syzygy_basis(&cols, 1, &r);
        assert_eq!(s.len(), 1);
        let v: Vec<String> = s[0].iter().map(|p| r.format(p)).collect();
        assert!(v == ["y", "-x"] || v == ["-y", "x"], "{v:?}");
    }

    #[test]
    fn nonzerodivisor_has_no_syzygy() {
        let r = Ring::polynomial(&["x", "y"], Field::Prime(32003), MonomialOrder::Grevlex);
        let cols = vec![vec![r.parse("x^2 + y").unwrap()]];
        assert!(syzygy_basis(&cols, 1, &r).is_empty());
    }

    #[test]
    fn nilpotent_in_quotient() {
        let p = Ring::polynomial(&["x"], Field::Prime(32003), MonomialOrder::Grevlex);
        let r = p.quotient_by(&[p.parse("x^2").unwrap()]).unwrap();
        let s = syzygy_basis(&[vec![r.var(0)]], 1, &r);
        assert_eq!(s.len(), 1);
        assert_eq!(r.format(&s[0][0]), "x");
    }

    /// Degree-bounded brute force: every kernel element with entries of
    /// degree at most one lies in the span of the computed syzygies.
    #[test]
    fn syzygies_are_complete_on_bounded_kernel() {
        let p = Ring::polynomial(&["x", "y", "z"], Field::Prime(5), MonomialOrder::Grevlex);
        let r = p.quotient_by(&[p.parse("x*y").unwrap()]).unwrap();
        let cols = vec![vec![r.var(0), r.var(2)], vec![r.var(1), r.zero()], vec![r.zero(), r.var(1)]];
        let syz = syzygy_basis(&cols, 2, &r);
        for s in &syz {
            assert!(apply(&r, &cols, 2, s).iter().all(|p| p.is_zero()));
        }
        let span = SubmoduleGb::new(&r, 3, &syz);
        // candidate entries: linear forms with coefficients in {0,1,4} over 1,x,y,z
        let basis = [r.one(), r.var(0), r.var(1), r.var(2)];
        let coeffs = [0i64, 1, 4];
        let mut entries = Vec::new();
        for a in coeffs {
            for b in coeffs {
                for c in coeffs {
                    let f = [a, b, c]
                        .iter()
                        .zip(&basis[1..])
                        .fold(Polynomial::zero(), |acc, (k, v)| r.add(&acc, &r.scale(v, &r.field().from_i64(*k))));
                    entries.push(f);
                }
            }
        }
        let mut checked = 0;
        for a in &entries {
            for b in &entries {
                for c in &entries {
                    let s = vec![a.clone(), b.clone(), c.clone()];
                    if apply(&r, &cols, 2, &s).iter().all(|p| p.is_zero()) {
                        assert!(span.contains(&s));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 1);
    }
}
