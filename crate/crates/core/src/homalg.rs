//! Free resolutions, their graded minimization, and Ext/Tor as homology of
//! `Hom(F, M)` and `F ⊗ M`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Coeff, Field};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::modpres::{column_degree, homology_at, ComplexAt, ModuleMorphism, PresentedModule};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::groebner::{syzygy_basis, syzygy_basis_graded};

/// `... -> F_2 --d_2--> F_1 --d_1--> F_0`, with `coker d_1 = module`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeResolution {
    pub module: PresentedModule,
    /// `differentials[i]` is `d_{i+1}`, a `rank(F_i) × rank(F_{i+1})` matrix.
    pub differentials: Vec<Matrix>,
    pub minimal: bool,
    /// Degrees of the basis of each `F_i`, when graded.
    pub degrees: Option<Vec<Vec<i64>>>,
}

impl FreeResolution {
    pub fn ring(&self) -> &Ring {
        self.module.ring()
    }

    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    /// `rank(F_0), ..., rank(F_L)`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![self.module_rank0()];
        r.extend(self.differentials.iter().map(|d| d.ncols()));
        r
    }

    fn module_rank0(&self) -> usize {
        self.differentials.first().map(|d| d.nrows()).unwrap_or(self.module.gens())
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks()[i]
    }

    /// `d_i` for `1 <= i <= length`.
    pub fn differential(&self, i: usize) -> &Matrix {
        &self.differentials[i - 1]
    }

    pub fn is_graded(&self) -> bool {
        self.degrees.is_some()
    }

    /// Truncate to the first `length` differentials.
    pub fn truncated(&self, length: usize) -> FreeResolution {
        let mut r = self.clone();
        r.differentials.truncate(length);
        if let Some(d) = &mut r.degrees {
            d.truncate(length + 1);
        }
        r
    }

    /// Compute further syzygies until the length is at least `length`.
    pub fn extend_to(&mut self, length: usize) {
        let ring = self.ring().clone();
        while self.differentials.len() < length {
            let last = self.differentials.last().expect("resolutions start with d_1");
            let rows = last.ncols();
            let next = match &mut self.degrees {
                Some(deg) => {
                    let rd = deg[deg.len() - 2].clone();
                    let cd = deg[deg.len() - 1].clone();
                    let syz = syzygy_basis_graded(last.columns(), last.nrows(), &ring, &rd, &cd);
                    let nd: Vec<i64> =
                        syz.iter().map(|c| column_degree(c, &cd).flatten().unwrap_or(0)).collect();
                    deg.push(nd);
                    syz
                }
                None => syzygy_basis(last.columns(), last.nrows(), &ring),
            };
            self.differentials.push(Matrix::from_columns(rows, next).expect("shape"));
        }
    }
}

/// Iterated syzygies of the presentation of `m`, `length` differentials.
pub fn free_resolution(m: &PresentedModule, length: usize) -> FreeResolution {
    let degrees = m.degrees().map(|d| vec![d.to_vec()]);
    let mut res = FreeResolution { module: m.clone(), differentials: Vec::new(), minimal: false, degrees };
    if length == 0 {
        return res;
    }
    res.differentials.push(m.relations().clone());
    if let Some(d) = &mut res.degrees {
        d.push(m.relation_degrees().expect("graded module has homogeneous relations"));
    }
    res.extend_to(length);
    res
}

/// Cancel unit entries until none remain. Requires a graded resolution.
pub fn minimize_resolution(res: &FreeResolution) -> Result<FreeResolution> {
    if !res.is_graded() || !res.ring().is_graded() {
        return Err(Error::Unsupported("minimization needs a graded resolution".into()));
    }
    let ring = res.ring().clone();
    let k = ring.field();
    let mut ds = res.differentials.clone();
    let mut degs = res.degrees.clone().unwrap();
    'outer: loop {
        for i in 0..ds.len() {
            let d = &ds[i];
            let pivot = (0..d.ncols())
                .flat_map(|c| (0..d.nrows()).map(move |r| (r, c)))
                .find(|(r, c)| d.get(*r, *c).is_unit_constant());
            let Some((pr, pc)) = pivot else { continue };
            let u_inv = k.inv(&d.get(pr, pc).terms()[0].1);
            let rows: Vec<usize> = (0..d.nrows()).filter(|r| *r != pr).collect();
            let cols: Vec<usize> = (0..d.ncols()).filter(|c| *c != pc).collect();
            let mut next = Matrix::zero(rows.len(), cols.len());
            for (nc, &c) in cols.iter().enumerate() {
                let factor = ring.scale(d.get(pr, c), &u_inv);
                for (nr, &r) in rows.iter().enumerate() {
                    let v = ring.sub(d.get(r, c), &ring.mul(d.get(r, pc), &factor));
                    next.set(nr, nc, v);
                }
            }
            ds[i] = next;
            if i > 0 {
                let prev = &ds[i - 1];
                let keep: Vec<usize> = (0..prev.ncols()).filter(|c| *c != pr).collect();
                ds[i - 1] = prev.select_columns(&keep);
            }
            if i + 1 < ds.len() {
                let nxt = &ds[i + 1];
                let keep: Vec<usize> = (0..nxt.nrows()).filter(|r| *r != pc).collect();
                ds[i + 1] = nxt.select_rows(&keep);
            }
            degs[i].remove(pr);
            degs[i + 1].remove(pc);
            continue 'outer;
        }
        break;
    }
    let f0 = degs[0].clone();
    let module = match ds.first() {
        Some(d1) => PresentedModule::graded(&ring, f0, d1.clone())?,
        None => res.module.clone(),
    };
    Ok(FreeResolution { module, differentials: ds, minimal: true, degrees: Some(degs) })
}

/// Resolution of `m` through `length`, minimized when graded. One extra
/// step is computed so the last rank is minimal as well.
pub fn resolve(m: &PresentedModule, length: usize) -> FreeResolution {
    if m.is_graded() && m.ring().is_graded() {
        let full = free_resolution(m, length + 1);
        minimize_resolution(&full).expect("graded").truncated(length)
    } else {
        free_resolution(m, length)
    }
}

fn hom_degrees(res: &FreeResolution, m: &PresentedModule, j: usize) -> Option<Vec<i64>> {
    let fd = res.degrees.as_ref()?.get(j)?;
    let md = m.degrees()?;
    Some(fd.iter().flat_map(|f| md.iter().map(move |d| d - f)).collect())
}

fn tensor_degrees(res: &FreeResolution, m: &PresentedModule, j: usize) -> Option<Vec<i64>> {
    let fd = res.degrees.as_ref()?.get(j)?;
    let md = m.degrees()?;
    Some(fd.iter().flat_map(|f| md.iter().map(move |d| d + f)).collect())
}

fn graded_power(m: &PresentedModule, copies: usize, degrees: Option<Vec<i64>>) -> PresentedModule {
    let p = m.power(copies).ungraded();
    match degrees {
        Some(d) => p.clone().with_grading(d).unwrap_or(p),
        None => p,
    }
}

/// `Hom(F_j, M) = M^{rank F_j}`.
fn hom_term(res: &FreeResolution, m: &PresentedModule, j: usize) -> PresentedModule {
    graded_power(m, res.rank(j), hom_degrees(res, m, j))
}

fn tensor_term(res: &FreeResolution, m: &PresentedModule, j: usize) -> PresentedModule {
    graded_power(m, res.rank(j), tensor_degrees(res, m, j))
}

/// `Ext^i(res.module, M)` from a resolution of length at least `i + 1`.
pub fn ext_from_resolution(i: usize, res: &FreeResolution, m: &PresentedModule) -> Result<PresentedModule> {
    if res.length() < i + 1 {
        return Err(Error::Precondition(format!("resolution of length {} too short for Ext^{i}", res.length())));
    }
    if res.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    let a = m.gens();
    let ring = m.ring();
    let here = hom_term(res, m, i);
    let next = hom_term(res, m, i + 1);
    let outgoing = ModuleMorphism::induced(here.clone(), next, res.differential(i + 1).transpose().kron_identity(a));
    let incoming = if i == 0 {
        let zero = PresentedModule::free(ring, 0);
        ModuleMorphism::induced(zero, here, Matrix::zero(a * res.rank(0), 0))
    } else {
        let prev = hom_term(res, m, i - 1);
        ModuleMorphism::induced(prev, here, res.differential(i).transpose().kron_identity(a))
    };
    Ok(homology_at(&ComplexAt::trusted(incoming, outgoing)))
}

/// `Tor_i(res.module, M)` from a resolution of length at least `i + 1`.
pub fn tor_from_resolution(i: usize, res: &FreeResolution, m: &PresentedModule) -> Result<PresentedModule> {
    if res.length() < i + 1 {
        return Err(Error::Precondition(format!("resolution of length {} too short for Tor_{i}", res.length())));
    }
    if res.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    let a = m.gens();
    let ring = m.ring();
    let here = tensor_term(res, m, i);
    let above = tensor_term(res, m, i + 1);
    let incoming = ModuleMorphism::induced(above, here.clone(), res.differential(i + 1).kron_identity(a));
    let outgoing = if i == 0 {
        let zero = PresentedModule::free(ring, 0);
        ModuleMorphism::induced(here, zero, Matrix::zero(0, a * res.rank(0)))
    } else {
        let below = tensor_term(res, m, i - 1);
        ModuleMorphism::induced(here, below, res.differential(i).kron_identity(a))
    };
    Ok(homology_at(&ComplexAt::trusted(incoming, outgoing)))
}

/// `Ext^i_R(N, M)`, resolving `N`.
pub fn ext_module(i: usize, n: &PresentedModule, m: &PresentedModule) -> Result<PresentedModule> {
    ext_from_resolution(i, &resolve(n, i + 1), m)
}

/// `Tor_i^R(N, M)`, resolving `N`.
pub fn tor_module(i: usize, n: &PresentedModule, m: &PresentedModule) -> Result<PresentedModule> {
    tor_from_resolution(i, &resolve(n, i + 1), m)
}

/// If `J = (f)` is principal and two consecutive square differentials
/// `A = d_k`, `B = d_{k+1}` without constant terms satisfy `A·B = f·C` and
/// `B·A = f·C'` in the ambient ring with `C`, `C'` invertible constant
/// matrices, the resolution continues 2-periodically forever. Returns the
/// first such `k`.
pub fn periodicity_certificate(res: &FreeResolution) -> Option<usize> {
    let ring = res.ring();
    let gb = ring.quotient_gb();
    if gb.len() != 1 {
        return None;
    }
    let f = &gb[0];
    for k in 1..res.length() {
        let (a, b) = (res.differential(k), res.differential(k + 1));
        let n = a.nrows();
        if n == 0 || a.ncols() != n || b.nrows() != n || b.ncols() != n {
            continue;
        }
        let no_constants = |m: &Matrix| m.columns().iter().flatten().all(|p| p.constant_term().is_none());
        if !no_constants(a) || !no_constants(b) {
            continue;
        }
        if factor_through(ring, a, b, f) && factor_through(ring, b, a, f) {
            return Some(k);
        }
    }
    None
}

/// `a·b = f·C` in the ambient ring with `C` an invertible constant matrix.
fn factor_through(ring: &Ring, a: &Matrix, b: &Matrix, f: &Polynomial) -> bool {
    let k = ring.field();
    let n = a.nrows();
    let (fl, fc) = f.leading().unwrap().clone();
    let mut c = vec![vec![k.zero(); n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut e = Polynomial::zero();
            for t in 0..a.ncols() {
                e = ring.add(&e, &ring.mul_ambient(a.get(i, t), b.get(t, j)));
            }
            if e.is_zero() {
                continue;
            }
            let (el, ec) = e.leading().unwrap().clone();
            if el != fl {
                return false;
            }
            let s = k.div(&ec, &fc);
            if !ring.sub(&e, &ring.scale(f, &s)).is_zero() {
                return false;
            }
            *cell = s;
        }
    }
    constant_rank(k, c) == n
}

/// Rank of a matrix of field elements.
fn constant_rank(k: Field, mut rows: Vec<Vec<Coeff>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|r| !k.is_zero(&rows[*r][col])) else { continue };
        rows.swap(rank, p);
        let inv = k.inv(&rows[rank][col]);
        for r in 0..rows.len() {
            if r != rank && !k.is_zero(&rows[r][col]) {
                let factor = k.mul(&rows[r][col], &inv);
                for cc in 0..ncols {
                    let v = k.sub(&rows[r][cc], &k.mul(&factor, &rows[rank][cc]));
                    rows[r][cc] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Null space basis of a matrix of field elements with `n` columns.
fn constant_kernel(k: Field, mut rows: Vec<Vec<Coeff>>, n: usize) -> Vec<Vec<Coeff>> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|r| !k.is_zero(&rows[*r][col])) else { continue };
        rows.swap(rank, p);
        let inv = k.inv(&rows[rank][col]);
        for e in rows[rank].iter_mut() {
            *e = k.mul(e, &inv);
        }
        for r in 0..rows.len() {
            if r != rank && !k.is_zero(&rows[r][col]) {
                let factor = rows[r][col].clone();
                for cc in 0..n {
                    let v = k.sub(&rows[r][cc], &k.mul(&factor, &rows[rank][cc]));
                    rows[r][cc] = v;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); n];
            v[f] = k.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(&rows[r][f]);
            }
            v
        })
        .collect()
}

/// Constant invertible matrices `U_0, ..., U_L` with `a_i U_i = U_{i-1} b_i`
/// for every `i`, i.e. an isomorphism of the complexes `b -> a` given by
/// changes of basis. Candidates are random combinations of the solution
/// space (fixed seed); a returned chain is always verified.
pub fn constant_chain_isomorphism(ring: &Ring, a: &[Matrix], b: &[Matrix]) -> Option<Vec<Vec<Vec<Coeff>>>> {
    if a.len() != b.len() || a.is_empty() {
        return None;
    }
    let k = ring.field();
    let mut ranks = vec![a[0].nrows()];
    for (x, y) in a.iter().zip(b) {
        if x.nrows() != y.nrows() || x.ncols() != y.ncols() || x.nrows() != *ranks.last().unwrap() {
            return None;
        }
        ranks.push(x.ncols());
    }
    let mut offsets = vec![0];
    for r in &ranks {
        offsets.push(offsets.last().unwrap() + r * r);
    }
    let n = *offsets.last().unwrap();
    let var = |j: usize, r: usize, c: usize| offsets[j] + r * ranks[j] + c;
    let mut equations: Vec<Vec<Coeff>> = Vec::new();
    for i in 1..ranks.len() {
        let (ai, bi) = (&a[i - 1], &b[i - 1]);
        for r in 0..ranks[i - 1] {
            for c in 0..ranks[i] {
                // (a_i U_i)[r][c] - (U_{i-1} b_i)[r][c], collected by monomial
                let mut by_mono: std::collections::HashMap<crate::monomial::Monomial, Vec<Coeff>> =
                    std::collections::HashMap::new();
                let mut add = |p: &Polynomial, v: usize, negate: bool| {
                    for (m, co) in p.terms() {
                        let row = by_mono.entry(m.clone()).or_insert_with(|| vec![k.zero(); n]);
                        let co = if negate { k.neg(co) } else { co.clone() };
                        row[v] = k.add(&row[v], &co);
                    }
                };
                for t in 0..ranks[i] {
                    add(ai.get(r, t), var(i, t, c), false);
                }
                for t in 0..ranks[i - 1] {
                    add(bi.get(t, c), var(i - 1, r, t), true);
                }
                equations.extend(by_mono.into_values());
            }
        }
    }
    let basis = constant_kernel(k, equations, n);
    if basis.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4a1);
    for _ in 0..16 {
        let mut sol = vec![k.zero(); n];
        for v in &basis {
            let lambda = k.from_i64(rng.gen_range(1..30000));
            for (s, x) in sol.iter_mut().zip(v) {
                *s = k.add(s, &k.mul(&lambda, x));
            }
        }
        let us: Vec<Vec<Vec<Coeff>>> = (0..ranks.len())
            .map(|j| (0..ranks[j]).map(|r| (0..ranks[j]).map(|c| sol[var(j, r, c)].clone()).collect()).collect())
            .collect();
        if us.iter().zip(&ranks).all(|(u, r)| constant_rank(k, u.clone()) == *r)
            && verify_chain(ring, a, b, &us)
        {
            return Some(us);
        }
    }
    None
}

fn verify_chain(ring: &Ring, a: &[Matrix], b: &[Matrix], us: &[Vec<Vec<Coeff>>]) -> bool {
    let as_matrix = |u: &Vec<Vec<Coeff>>| {
        let rows = u.iter().map(|r| r.iter().map(|c| ring.from_coeff(c.clone())).collect()).collect();
        if u.is_empty() {
            Matrix::zero(0, 0)
        } else {
            Matrix::from_rows(rows).expect("square")
        }
    };
    (1..us.len()).all(|i| {
        let left = a[i - 1].mul(ring, &as_matrix(&us[i]));
        let right = as_matrix(&us[i - 1]).mul(ring, &b[i - 1]);
        matches!((left, right), (Ok(l), Ok(r)) if l == r)
    })
}

/// Display normalization: every column scaled so its first nonzero entry
/// is monic, then columns and rows sorted by their rendering.
pub fn normalized(ring: &Ring, m: &Matrix) -> Matrix {
    let k = ring.field();
    let mut cols: Vec<Vec<Polynomial>> = m
        .columns()
        .iter()
        .map(|c| match c.iter().find(|p| !p.is_zero()) {
            Some(p) => {
                let inv = k.inv(&p.terms()[0].1);
                c.iter().map(|e| ring.scale(e, &inv)).collect()
            }
            None => c.clone(),
        })
        .collect();
    let key = |c: &Vec<Polynomial>| c.iter().map(|p| ring.format(p)).collect::<Vec<_>>();
    cols.sort_by_key(key);
    let mut rows = Matrix::from_columns(m.nrows(), cols).expect("shape").rows();
    rows.sort_by_key(|r| r.iter().map(|p| ring.format(p)).collect::<Vec<_>>());
    if rows.is_empty() {
        return Matrix::zero(0, m.ncols());
    }
    Matrix::from_rows(rows).expect("rectangular")
}

/// Aligned rendering of every differential.
pub fn render_resolution(res: &FreeResolution, normalize: bool) -> String {
    let ring = res.ring();
    let mut out = String::new();
    let ranks = res.ranks();
    out.push_str(&format!("ranks: {:?}\n", ranks));
    for (i, d) in res.differentials.iter().enumerate() {
        out.push_str(&format!("d{} : R^{} -> R^{}\n", i + 1, ranks[i + 1], ranks[i]));
        let shown = if normalize { normalized(ring, d) } else { d.clone() };
        out.push_str(&shown.render(ring));
    }
    out
}
