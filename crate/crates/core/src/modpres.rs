//! Finitely presented modules `coker(F_1 -> F_0)` over `R`, morphisms
//! between them, kernels, homology, and base change to `R/p`.

use crate::error::{Error, Result};
use crate::groebner::{irredundant, syzygy_basis, syzygy_basis_graded, FreeVector, Ideal, SubmoduleGb};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::ring::Ring;

/// Degree of a homogeneous column given the degrees of the target basis.
/// `None` if some entry is inhomogeneous or the entries disagree.
pub(crate) fn column_degree(col: &[Polynomial], row_degrees: &[i64]) -> Option<Option<i64>> {
    let mut deg = None;
    for (p, d) in col.iter().zip(row_degrees) {
        if p.is_zero() {
            continue;
        }
        if !p.is_homogeneous() {
            return None;
        }
        let e = p.degree().unwrap() as i64 + d;
        match deg {
            None => deg = Some(e),
            Some(x) if x != e => return None,
            _ => {}
        }
    }
    Some(deg)
}

fn column_degrees(cols: &[FreeVector], row_degrees: &[i64]) -> Option<Vec<i64>> {
    cols.iter().map(|c| column_degree(c, row_degrees).map(|d| d.unwrap_or(0))).collect()
}

/// `M = coker(relations)` with `gens` generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedModule {
    ring: Ring,
    gens: usize,
    relations: Matrix,
    degrees: Option<Vec<i64>>,
}

impl PresentedModule {
    /// Entries are reduced and zero relations dropped. No grading.
    pub fn new(ring: &Ring, gens: usize, relations: Matrix) -> Result<PresentedModule> {
        if relations.nrows() != gens {
            return Err(Error::DimensionMismatch { expected: gens, found: relations.nrows() });
        }
        let red = relations.reduced(ring);
        let keep: Vec<usize> =
            (0..red.ncols()).filter(|c| red.column(*c).iter().any(|p| !p.is_zero())).collect();
        Ok(PresentedModule { ring: ring.clone(), gens, relations: red.select_columns(&keep), degrees: None })
    }

    /// Graded module with the given generator degrees. Fails unless every
    /// relation is homogeneous and the ring is graded.
    pub fn graded(ring: &Ring, degrees: Vec<i64>, relations: Matrix) -> Result<PresentedModule> {
        let m = PresentedModule::new(ring, degrees.len(), relations)?;
        m.with_grading(degrees)
    }

    pub fn with_grading(mut self, degrees: Vec<i64>) -> Result<PresentedModule> {
        if degrees.len() != self.gens {
            return Err(Error::DimensionMismatch { expected: self.gens, found: degrees.len() });
        }
        if !self.ring.is_graded() || column_degrees(self.relations.columns(), &degrees).is_none() {
            return Err(Error::Precondition("relations are not homogeneous".into()));
        }
        self.degrees = Some(degrees);
        Ok(self)
    }

    /// Attach the grading with all generators in degree zero when possible.
    pub fn try_grade(self) -> PresentedModule {
        if self.degrees.is_some() {
            return self;
        }
        let zeros = vec![0; self.gens];
        self.clone().with_grading(zeros).unwrap_or(self)
    }

    pub fn ungraded(mut self) -> PresentedModule {
        self.degrees = None;
        self
    }

    pub fn free(ring: &Ring, rank: usize) -> PresentedModule {
        PresentedModule::new(ring, rank, Matrix::zero(rank, 0)).expect("shape").try_grade()
    }

    /// `R/I`.
    pub fn cyclic(ideal: &Ideal) -> PresentedModule {
        let rel = Matrix::from_rows(vec![ideal.gens().to_vec()]).expect("one row");
        let rel = if ideal.gens().is_empty() { Matrix::zero(1, 0) } else { rel };
        PresentedModule::new(ideal.ring(), 1, rel).expect("shape").try_grade()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn degrees(&self) -> Option<&[i64]> {
        self.degrees.as_deref()
    }

    pub fn is_graded(&self) -> bool {
        self.degrees.is_some()
    }

    /// Degrees of the relation columns, when graded.
    pub fn relation_degrees(&self) -> Option<Vec<i64>> {
        self.degrees.as_ref().and_then(|d| column_degrees(self.relations.columns(), d))
    }

    pub fn direct_sum(&self, other: &PresentedModule) -> Result<PresentedModule> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let m = PresentedModule::new(&self.ring, self.gens + other.gens, self.relations.direct_sum(&other.relations))?;
        Ok(match (&self.degrees, &other.degrees) {
            (Some(a), Some(b)) => m.with_grading(a.iter().chain(b).copied().collect())?,
            _ => m,
        })
    }

    /// `M^copies`, generators ordered copy-major.
    pub fn power(&self, copies: usize) -> PresentedModule {
        let rel = self.relations.block_diagonal(copies);
        let degrees = self.degrees.as_ref().map(|d| d.iter().cycle().take(d.len() * copies).copied().collect());
        PresentedModule { ring: self.ring.clone(), gens: self.gens * copies, relations: rel, degrees }
    }

    pub fn submodule_gb(&self) -> SubmoduleGb {
        SubmoduleGb::new(&self.ring, self.gens, self.relations.columns())
    }

    /// Same presentation over another ring on the same variables, or on
    /// extra trailing variables.
    pub fn transferred(&self, target: &Ring) -> PresentedModule {
        let rel = self.relations.transferred(&self.ring, target);
        let m = PresentedModule::new(target, self.gens, rel).expect("shape");
        match &self.degrees {
            Some(d) => m.clone().with_grading(d.clone()).unwrap_or(m),
            None => m,
        }
    }

    pub fn display(&self) -> String {
        format!("coker {}x{} over {}\n{}", self.gens, self.relations.ncols(), self.ring, self.relations.render(&self.ring))
    }
}

/// `coker(a)`.
pub fn cokernel_presentation(ring: &Ring, a: &Matrix) -> PresentedModule {
    PresentedModule::new(ring, a.nrows(), a.clone()).expect("shape").try_grade()
}

/// A map of presented modules given on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMorphism {
    pub source: PresentedModule,
    pub target: PresentedModule,
    /// `target.gens × source.gens`.
    pub matrix: Matrix,
}

impl ModuleMorphism {
    pub fn new(source: PresentedModule, target: PresentedModule, matrix: Matrix) -> Result<ModuleMorphism> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch);
        }
        if matrix.nrows() != target.gens {
            return Err(Error::DimensionMismatch { expected: target.gens, found: matrix.nrows() });
        }
        if matrix.ncols() != source.gens {
            return Err(Error::DimensionMismatch { expected: source.gens, found: matrix.ncols() });
        }
        let matrix = matrix.reduced(&source.ring);
        let gb = target.submodule_gb();
        for rel in source.relations.columns() {
            if !gb.contains(&matrix.apply(&source.ring, rel)) {
                return Err(Error::IllDefinedMorphism);
            }
        }
        Ok(ModuleMorphism { source, target, matrix })
    }

    /// Construction without the well-definedness check, for maps induced by
    /// functors where it holds by construction.
    pub(crate) fn induced(source: PresentedModule, target: PresentedModule, matrix: Matrix) -> ModuleMorphism {
        debug_assert_eq!(matrix.nrows(), target.gens);
        debug_assert_eq!(matrix.ncols(), source.gens);
        let matrix = matrix.reduced(&source.ring);
        ModuleMorphism { source, target, matrix }
    }

    /// Identity on generators; requires the source relations to hold in the target.
    pub fn canonical(source: PresentedModule, target: PresentedModule) -> Result<ModuleMorphism> {
        let id = Matrix::identity(source.ring(), source.gens());
        ModuleMorphism::new(source, target, id)
    }

    pub fn ring(&self) -> &Ring {
        &self.source.ring
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        let m = other.matrix.mul(self.ring(), &self.matrix)?;
        ModuleMorphism::new(self.source.clone(), other.target.clone(), m)
    }

    pub fn is_zero(&self) -> bool {
        let gb = self.target.submodule_gb();
        self.matrix.columns().iter().all(|c| gb.contains(c))
    }

    /// Degree-zero homogeneous map between graded modules.
    fn is_graded(&self) -> bool {
        match (&self.source.degrees, &self.target.degrees) {
            (Some(s), Some(t)) => match column_degrees(self.matrix.columns(), t) {
                Some(cd) => self
                    .matrix
                    .columns()
                    .iter()
                    .zip(cd.iter().zip(s))
                    .all(|(c, (d, sd))| c.iter().all(|p| p.is_zero()) || d == sd),
                None => false,
            },
            _ => false,
        }
    }
}

/// Generators of `{u in R^rows : sum u_j cols_j = 0}`, with degrees when graded.
fn syzygies(ring: &Ring, rows: usize, cols: &[FreeVector], degrees: Option<(&[i64], &[i64])>) -> Vec<FreeVector> {
    match degrees {
        Some((rd, cd)) => syzygy_basis_graded(cols, rows, ring, rd, cd),
        None => syzygy_basis(cols, rows, ring),
    }
}

/// Presentation of `(span(gens) + span(base)) / span(base)` inside `R^rank`.
/// Returns the module and the kept generators (as columns of `R^rank`).
fn subquotient(
    ring: &Ring,
    rank: usize,
    gens: Vec<FreeVector>,
    gen_degrees: Option<Vec<i64>>,
    base: &[FreeVector],
    base_degrees: Option<Vec<i64>>,
    row_degrees: Option<&[i64]>,
) -> (PresentedModule, Vec<FreeVector>) {
    let zeros_g = vec![0; gens.len()];
    let zeros_r = vec![0; rank];
    let keep = irredundant(
        ring,
        rank,
        &gens,
        gen_degrees.as_deref().unwrap_or(&zeros_g),
        base,
        row_degrees.unwrap_or(&zeros_r),
    );
    let kept: Vec<FreeVector> = keep.iter().map(|i| gens[*i].clone()).collect();
    let kept_deg: Option<Vec<i64>> = gen_degrees.as_ref().map(|d| keep.iter().map(|i| d[*i]).collect());
    let k = kept.len();
    let mut cols = kept.clone();
    cols.extend(base.iter().cloned());
    let graded = match (&kept_deg, &base_degrees, row_degrees) {
        (Some(a), Some(b), Some(r)) => Some((r.to_vec(), a.iter().chain(b).copied().collect::<Vec<i64>>())),
        _ => None,
    };
    let syz = syzygies(ring, rank, &cols, graded.as_ref().map(|(r, c)| (r.as_slice(), c.as_slice())));
    let rel_cols: Vec<FreeVector> =
        syz.into_iter().map(|s| s[..k].to_vec()).filter(|c| c.iter().any(|p| !p.is_zero())).collect();
    let rel = Matrix::from_columns(k, rel_cols).expect("shape");
    let m = PresentedModule::new(ring, k, rel).expect("shape");
    let m = match kept_deg {
        Some(d) if graded.is_some() => m.clone().with_grading(d).unwrap_or(m),
        _ => m,
    };
    (m, kept)
}

/// Generators of the preimage of `im(target relations)` under `φ`, in the
/// source free module, with their degrees when `φ` is graded.
fn kernel_generators(phi: &ModuleMorphism) -> (Vec<FreeVector>, Option<Vec<i64>>) {
    let s = phi.source.gens;
    let t = phi.target.gens;
    let mut cols: Vec<FreeVector> = phi.matrix.columns().to_vec();
    cols.extend(phi.target.relations.columns().iter().cloned());
    let graded = phi.is_graded();
    let deg_info = if graded {
        let t_deg = phi.target.degrees.clone().unwrap();
        let mut c_deg = phi.source.degrees.clone().unwrap();
        c_deg.extend(phi.target.relation_degrees().unwrap());
        Some((t_deg, c_deg))
    } else {
        None
    };
    let syz = syzygies(phi.ring(), t, &cols, deg_info.as_ref().map(|(a, b)| (a.as_slice(), b.as_slice())));
    let gens: Vec<FreeVector> =
        syz.into_iter().map(|v| v[..s].to_vec()).filter(|c| c.iter().any(|p| !p.is_zero())).collect();
    let degrees = if graded {
        let sd = phi.source.degrees.as_ref().unwrap();
        column_degrees(&gens, sd)
    } else {
        None
    };
    (gens, degrees)
}

/// `ker φ` with its inclusion into the source.
pub fn kernel_of_morphism(phi: &ModuleMorphism) -> Result<(PresentedModule, ModuleMorphism)> {
    let ring = phi.ring();
    let (gens, degrees) = kernel_generators(phi);
    let src = &phi.source;
    let (module, kept) = subquotient(
        ring,
        src.gens,
        gens,
        degrees,
        src.relations.columns(),
        src.relation_degrees(),
        src.degrees(),
    );
    let incl = Matrix::from_columns(src.gens, kept)?;
    let inclusion = ModuleMorphism::new(module.clone(), src.clone(), incl)?;
    Ok((module, inclusion))
}

/// A spot `W --incoming--> X --outgoing--> Y` of a complex.
#[derive(Debug, Clone)]
pub struct ComplexAt {
    pub incoming: ModuleMorphism,
    pub outgoing: ModuleMorphism,
}

impl ComplexAt {
    pub fn new(incoming: ModuleMorphism, outgoing: ModuleMorphism) -> Result<ComplexAt> {
        if incoming.target != outgoing.source {
            return Err(Error::Precondition("maps do not compose".into()));
        }
        if !incoming.then(&outgoing).map(|c| c.is_zero()).unwrap_or(false) {
            return Err(Error::NotAComplex);
        }
        Ok(ComplexAt { incoming, outgoing })
    }
}

impl ComplexAt {
    /// Skip the composition check.
    pub(crate) fn trusted(incoming: ModuleMorphism, outgoing: ModuleMorphism) -> ComplexAt {
        ComplexAt { incoming, outgoing }
    }
}

/// `ker(outgoing) / im(incoming)`.
pub fn homology_at(c: &ComplexAt) -> PresentedModule {
    let x = &c.outgoing.source;
    let (gens, degrees) = kernel_generators(&c.outgoing);
    let mut base: Vec<FreeVector> = c.incoming.matrix.columns().to_vec();
    base.extend(x.relations.columns().iter().cloned());
    let base_degrees = if c.incoming.is_graded() {
        x.relation_degrees().map(|rd| {
            let mut d = c.incoming.source.degrees.clone().unwrap();
            d.extend(rd);
            d
        })
    } else {
        None
    };
    subquotient(x.ring(), x.gens, gens, degrees, &base, base_degrees, x.degrees()).0
}

/// True iff the relations span the whole free module.
pub fn is_zero_module(m: &PresentedModule) -> bool {
    m.gens == 0 || m.submodule_gb().is_everything()
}

/// `M ⊗ R/p` presented over `R/p`.
pub fn base_change_quotient(m: &PresentedModule, p: &Ideal) -> Result<PresentedModule> {
    if p.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    if !p.is_proper() {
        return Err(Error::ImproperIdeal);
    }
    let target = p.quotient_ring()?;
    Ok(m.transferred(&target))
}

/// Same as [`base_change_quotient`] when `R/p` is already built.
pub fn base_change_to(m: &PresentedModule, quotient: &Ring) -> PresentedModule {
    m.transferred(quotient)
}
