//! Invariants of localizations `M_p` computed without localizing: Bass and
//! Betti numbers are generic ranks over the domain `R/p` of `Ext(R/p, M)`
//! and `Tor(R/p, M)`.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groebner::{krull_dim, Ideal};
use crate::homalg::{ext_from_resolution, resolve, tor_from_resolution, FreeResolution};
use crate::modpres::{base_change_to, is_zero_module, PresentedModule};
use crate::poly::Polynomial;
use crate::ring::Ring;

const DOMAIN_SAMPLES: usize = 24;

/// A prime of `R`, asserted by the caller and spot-checked on construction.
#[derive(Clone)]
pub struct PrimeIdeal(Arc<PrimeData>);

struct PrimeData {
    ideal: Ideal,
    quotient: Ring,
    height: OnceLock<i64>,
    resolution: Mutex<Option<FreeResolution>>,
}

impl fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeIdeal({})", self.0.ideal.display())
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.0.ideal.is_subset_of(&other.0.ideal) && other.0.ideal.is_subset_of(&self.0.ideal)
    }
}

impl PrimeIdeal {
    /// Fails on the unit ideal, or when a sampled product of nonzero
    /// elements of `R/p` vanishes.
    pub fn new(ideal: Ideal) -> Result<PrimeIdeal> {
        if !ideal.is_proper() {
            return Err(Error::ImproperIdeal);
        }
        let quotient = ideal.quotient_ring()?;
        spot_check_domain(&quotient)?;
        Ok(PrimeIdeal(Arc::new(PrimeData {
            ideal,
            quotient,
            height: OnceLock::new(),
            resolution: Mutex::new(None),
        })))
    }

    pub fn parse(ring: &Ring, gens: &[&str]) -> Result<PrimeIdeal> {
        PrimeIdeal::new(Ideal::parse(ring, gens)?)
    }

    /// The homogeneous maximal ideal generated by all variables.
    pub fn irrelevant(ring: &Ring) -> Result<PrimeIdeal> {
        PrimeIdeal::new(Ideal::new(ring, (0..ring.nvars()).map(|i| ring.var(i)).collect()))
    }

    pub fn ideal(&self) -> &Ideal {
        &self.0.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.0.ideal.ring()
    }

    /// `R/p`.
    pub fn residue_domain(&self) -> &Ring {
        &self.0.quotient
    }

    pub fn display(&self) -> String {
        self.0.ideal.display()
    }

    /// `dim R - dim R/p`, an upper bound for the height of `p`.
    pub fn height_upper(&self) -> i64 {
        *self.0.height.get_or_init(|| {
            let ring = self.ring();
            krull_dim(&Ideal::zero(ring)) - krull_dim(&self.0.ideal)
        })
    }

    /// A resolution of `R/p` of length at least `length`, shared by all callers.
    pub fn resolution(&self, length: usize) -> FreeResolution {
        let mut slot = self.0.resolution.lock().unwrap_or_else(|e| e.into_inner());
        match slot.as_mut() {
            Some(res) if res.length() >= length => {}
            Some(res) => res.extend_to(length),
            None => *slot = Some(resolve(&PresentedModule::cyclic(&self.0.ideal), length)),
        }
        slot.as_ref().unwrap().clone()
    }
}

fn random_element(ring: &Ring, rng: &mut ChaCha8Rng) -> Polynomial {
    let mut f = ring.zero();
    for _ in 0..3 {
        let mut t = ring.constant(rng.gen_range(1..50));
        for _ in 0..rng.gen_range(0..3) {
            if ring.nvars() > 0 {
                t = ring.mul(&t, &ring.var(rng.gen_range(0..ring.nvars())));
            }
        }
        f = ring.add(&f, &t);
    }
    f
}

fn spot_check_domain(d: &Ring) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let gens: Vec<Polynomial> = (0..d.nvars()).map(|i| d.var(i)).filter(|v| !v.is_zero()).collect();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            if d.mul(a, b).is_zero() {
                return Err(Error::Precondition("ideal is not prime: zero divisors modulo p".into()));
            }
        }
    }
    for _ in 0..DOMAIN_SAMPLES {
        let a = random_element(d, &mut rng);
        let b = random_element(d, &mut rng);
        if !a.is_zero() && !b.is_zero() && d.mul(&a, &b).is_zero() {
            return Err(Error::Precondition("ideal is not prime: zero divisors modulo p".into()));
        }
    }
    Ok(())
}

/// Value of pd, id, depth or grade of a localization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DimensionValue {
    Finite(usize),
    InfiniteCertified,
    NoVanishingInWindow(usize),
    ZeroModule,
}

impl DimensionValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            DimensionValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for DimensionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionValue::Finite(v) => write!(f, "{v}"),
            DimensionValue::InfiniteCertified => write!(f, "infinite"),
            DimensionValue::NoVanishingInWindow(w) => write!(f, "no-vanishing-in-window:{w}"),
            DimensionValue::ZeroModule => write!(f, "zero-module"),
        }
    }
}

/// Rank over the fraction field of the domain `ring` of a matrix given by
/// rows. Fraction-free elimination, preferring constant pivots.
pub fn matrix_rank(ring: &Ring, mut rows: Vec<Vec<Polynomial>>) -> usize {
    let k = ring.field();
    let mut rank = 0;
    loop {
        rows.retain(|r| r.iter().any(|p| !p.is_zero()));
        let mut best: Option<(usize, usize, (bool, usize, u32))> = None;
        for (ri, row) in rows.iter().enumerate() {
            for (ci, e) in row.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let key = (!e.is_unit_constant(), e.len(), e.degree().unwrap_or(0));
                if best.as_ref().map_or(true, |b| key < b.2) {
                    best = Some((ri, ci, key));
                }
            }
        }
        let Some((pr, pc, _)) = best else { return rank };
        let pivot_row = rows.swap_remove(pr);
        let a = pivot_row[pc].clone();
        let constant = a.is_unit_constant();
        for row in rows.iter_mut() {
            let b = row[pc].clone();
            if b.is_zero() {
                continue;
            }
            if constant {
                let f = ring.scale(&b, &k.inv(&a.terms()[0].1));
                for (e, p) in row.iter_mut().zip(&pivot_row) {
                    *e = ring.sub(e, &ring.mul(&f, p));
                }
            } else {
                for (e, p) in row.iter_mut().zip(&pivot_row) {
                    *e = ring.sub(&ring.mul(&a, e), &ring.mul(&b, p));
                }
                normalize_row(ring, row);
            }
            debug_assert!(row[pc].is_zero());
        }
        for row in rows.iter_mut() {
            row.remove(pc);
        }
        rank += 1;
    }
}

/// Divide by the leading coefficient of the first nonzero entry.
fn normalize_row(ring: &Ring, row: &mut [Polynomial]) {
    if let Some(p) = row.iter().find(|p| !p.is_zero()) {
        let inv = ring.field().inv(&p.terms()[0].1);
        for e in row.iter_mut() {
            *e = ring.scale(e, &inv);
        }
    }
}

/// `gens(M) - rank(relations)` for `M` over a domain.
pub fn generic_rank(m: &PresentedModule) -> usize {
    m.gens() - matrix_rank(m.ring(), m.relations().rows())
}

/// `μ^i(p, M) = dim_κ(p) Ext^i(κ(p), M_p)`.
pub fn bass_number(i: usize, p: &PrimeIdeal, m: &PresentedModule) -> Result<usize> {
    check_ring(p, m)?;
    let ext = ext_from_resolution(i, &p.resolution(i + 1), m)?;
    Ok(generic_rank(&base_change_to(&ext, p.residue_domain())))
}

/// `β_i(p, M) = dim_κ(p) Tor_i(κ(p), M_p)`.
pub fn betti_number(i: usize, p: &PrimeIdeal, m: &PresentedModule) -> Result<usize> {
    check_ring(p, m)?;
    if i == 0 {
        return Ok(fiber_rank(p, m));
    }
    let tor = tor_from_resolution(i, &p.resolution(i + 1), m)?;
    Ok(generic_rank(&base_change_to(&tor, p.residue_domain())))
}

fn check_ring(p: &PrimeIdeal, m: &PresentedModule) -> Result<()> {
    if p.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// `dim κ(p) ⊗ M`, zero iff `M_p = 0`.
fn fiber_rank(p: &PrimeIdeal, m: &PresentedModule) -> usize {
    generic_rank(&base_change_to(m, p.residue_domain()))
}

/// True iff `M_p = 0`.
pub fn vanishes_at(p: &PrimeIdeal, m: &PresentedModule) -> Result<bool> {
    check_ring(p, m)?;
    Ok(fiber_rank(p, m) == 0)
}

/// `dim R - dim R/p`.
pub fn height_upper(p: &PrimeIdeal) -> i64 {
    p.height_upper()
}

/// Least `i` with `μ^i(p, M) ≠ 0`, searched up to the height bound.
pub fn depth_at(p: &PrimeIdeal, m: &PresentedModule) -> Result<DimensionValue> {
    if vanishes_at(p, m)? {
        return Ok(DimensionValue::ZeroModule);
    }
    let bound = p.height_upper().max(0) as usize;
    for i in 0..=bound {
        if bass_number(i, p, m)? != 0 {
            return Ok(DimensionValue::Finite(i));
        }
    }
    Ok(DimensionValue::NoVanishingInWindow(bound))
}

/// Projective dimension of `M_p`. Betti numbers are computed through
/// `min(window, h + 1)` where `h` bounds the height of `p`: a zero at `z`
/// gives `Finite(z - 1)`; a nonzero `β_{h+1}` exceeds the Auslander-Buchsbaum
/// bound `pd ≤ depth R_p ≤ h` and certifies infinite projective dimension.
pub fn pd_at(p: &PrimeIdeal, m: &PresentedModule, window: usize) -> Result<DimensionValue> {
    if vanishes_at(p, m)? {
        return Ok(DimensionValue::ZeroModule);
    }
    let h = p.height_upper().max(0) as usize;
    let top = window.min(h + 1);
    for i in 1..=top {
        if betti_number(i, p, m)? == 0 {
            return Ok(DimensionValue::Finite(i - 1));
        }
    }
    if top == h + 1 {
        Ok(DimensionValue::InfiniteCertified)
    } else {
        Ok(DimensionValue::NoVanishingInWindow(window))
    }
}

/// Injective dimension of `M_p`: infinite iff `μ^s(p, M) ≠ 0` for
/// `s = h + 1`, otherwise equal to `depth R_p`.
pub fn id_at(p: &PrimeIdeal, m: &PresentedModule) -> Result<DimensionValue> {
    if vanishes_at(p, m)? {
        return Ok(DimensionValue::ZeroModule);
    }
    let s = p.height_upper().max(0) as usize + 1;
    if bass_number(s, p, m)? != 0 {
        return Ok(DimensionValue::InfiniteCertified);
    }
    depth_at(p, &PresentedModule::free(m.ring(), 1))
}

/// Least `i` with `Ext^i(R/J, M) ≠ 0`; `ZeroModule` when `M = JM`.
pub fn grade_of(j: &Ideal, m: &PresentedModule) -> Result<DimensionValue> {
    if j.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    if !j.is_proper() || is_zero_module(&crate::modpres::base_change_quotient(m, j)?) {
        return Ok(DimensionValue::ZeroModule);
    }
    let bound = krull_dim(&Ideal::zero(m.ring())).max(0) as usize;
    let res = resolve(&PresentedModule::cyclic(j), bound + 1);
    for i in 0..=bound {
        if !is_zero_module(&ext_from_resolution(i, &res, m)?) {
            return Ok(DimensionValue::Finite(i));
        }
    }
    Ok(DimensionValue::NoVanishingInWindow(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::matrix::Matrix;
    use crate::monomial::MonomialOrder;

    fn poly(vars: &[&str]) -> Ring {
        Ring::polynomial(vars, Field::Prime(32003), MonomialOrder::Grevlex)
    }

    fn mat(r: &Ring, rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|row| row.iter().map(|s| r.parse(s).unwrap()).collect()).collect()).unwrap()
    }

    #[test]
    fn generic_rank_examples() {
        let r = poly(&["x"]);
        assert_eq!(generic_rank(&PresentedModule::free(&r, 3)), 3);
        assert_eq!(generic_rank(&PresentedModule::new(&r, 1, mat(&r, &[&["x"]])).unwrap()), 0);
        assert_eq!(generic_rank(&PresentedModule::new(&r, 2, mat(&r, &[&["x", "0"], &["0", "1"]])).unwrap()), 0);
        let s = poly(&["x", "y"]);
        let m = mat(&s, &[&["x", "y", "x*y"], &["y", "x", "y^2"]]);
        assert_eq!(matrix_rank(&s, m.rows()), 2);
        let m = mat(&s, &[&["x", "x*y"], &["y", "y^2"]]);
        assert_eq!(matrix_rank(&s, m.rows()), 1);
    }

    #[test]
    fn improper_and_non_prime() {
        let r = poly(&["x", "y"]);
        assert!(matches!(PrimeIdeal::parse(&r, &["1"]), Err(Error::ImproperIdeal)));
        assert!(PrimeIdeal::parse(&r, &["x*y"]).is_err());
        assert!(PrimeIdeal::parse(&r, &["x^2"]).is_err());
        assert!(PrimeIdeal::parse(&r, &["x - y^2"]).is_ok());
    }

    #[test]
    fn bass_numbers() {
        let r = poly(&["x", "y"]);
        let m = PrimeIdeal::irrelevant(&r).unwrap();
        let rr = PresentedModule::free(&r, 1);
        let mu: Vec<usize> = (0..3).map(|i| bass_number(i, &m, &rr).unwrap()).collect();
        assert_eq!(mu, vec![0, 0, 1]);
        let rp = PresentedModule::cyclic(m.ideal());
        assert_eq!(bass_number(0, &m, &rp).unwrap(), 1);
        for n in 1..=3u32 {
            let q = PresentedModule::cyclic(&crate::groebner::ideal_power(m.ideal(), n));
            assert_eq!(bass_number(0, &m, &q).unwrap(), n as usize);
        }
        let px = PrimeIdeal::parse(&r, &["x"]).unwrap();
        assert_eq!(bass_number(1, &px, &rr).unwrap(), 1);
        assert_eq!(bass_number(0, &px, &PresentedModule::cyclic(px.ideal())).unwrap(), 1);
    }

    #[test]
    fn betti_numbers() {
        let r = poly(&["x", "y"]);
        let m = PrimeIdeal::irrelevant(&r).unwrap();
        let k = PresentedModule::cyclic(m.ideal());
        let b: Vec<usize> = (0..4).map(|i| betti_number(i, &m, &k).unwrap()).collect();
        assert_eq!(b, vec![1, 2, 1, 0]);
        assert_eq!(betti_number(0, &m, &PresentedModule::free(&r, 1)).unwrap(), 1);
        for n in 1..=4u32 {
            let q = PresentedModule::cyclic(&crate::groebner::ideal_power(m.ideal(), n));
            assert_eq!(betti_number(1, &m, &q).unwrap(), n as usize + 1);
        }
    }

    #[test]
    fn heights() {
        let r = poly(&["x", "y"]);
        assert_eq!(PrimeIdeal::parse(&r, &["x", "y"]).unwrap().height_upper(), 2);
        let p = poly(&["x", "y", "z"]);
        let s = p.quotient_by(&[p.parse("x^2*y").unwrap(), p.parse("x^2*z").unwrap()]).unwrap();
        assert_eq!(PrimeIdeal::parse(&s, &["y", "z"]).unwrap().height_upper(), 1);
        let q = poly(&["x", "y", "z", "w"]);
        let h = q.quotient_by(&[q.parse("x*y - z*w").unwrap()]).unwrap();
        assert_eq!(PrimeIdeal::parse(&h, &["x", "w"]).unwrap().height_upper(), 1);
    }

    #[test]
    fn depths_and_dimensions() {
        let r = poly(&["x", "y"]);
        let m = PrimeIdeal::irrelevant(&r).unwrap();
        let rr = PresentedModule::free(&r, 1);
        let k = PresentedModule::cyclic(m.ideal());
        assert_eq!(depth_at(&m, &rr).unwrap(), DimensionValue::Finite(2));
        assert_eq!(depth_at(&m, &k).unwrap(), DimensionValue::Finite(0));
        assert_eq!(id_at(&m, &k).unwrap(), DimensionValue::Finite(2));
        assert_eq!(pd_at(&m, &rr, 4).unwrap(), DimensionValue::Finite(0));
        assert_eq!(pd_at(&m, &k, 4).unwrap(), DimensionValue::Finite(2));
        let px = PrimeIdeal::parse(&r, &["x"]).unwrap();
        let ry = PresentedModule::cyclic(&Ideal::parse(&r, &["y"]).unwrap());
        assert_eq!(depth_at(&px, &ry).unwrap(), DimensionValue::ZeroModule);
        assert_eq!(pd_at(&px, &ry, 3).unwrap(), DimensionValue::ZeroModule);
    }

    #[test]
    fn grades() {
        let r = poly(&["x", "y", "z"]);
        let j = Ideal::parse(&r, &["y", "z"]).unwrap();
        assert_eq!(grade_of(&j, &PresentedModule::free(&r, 1)).unwrap(), DimensionValue::Finite(2));
        let s = poly(&["x"]);
        let x = Ideal::parse(&s, &["x"]).unwrap();
        assert_eq!(grade_of(&x, &PresentedModule::free(&s, 1)).unwrap(), DimensionValue::Finite(1));
        assert_eq!(grade_of(&x, &PresentedModule::cyclic(&x)).unwrap(), DimensionValue::Finite(0));
        assert_eq!(grade_of(&Ideal::unit(&s), &PresentedModule::free(&s, 1)).unwrap(), DimensionValue::ZeroModule);
    }
}
