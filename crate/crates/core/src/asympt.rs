//! The family `M/I^nM`: presentations, invariant series over a window of
//! `n`, stabilization, eventual polynomials, finiteness loci, and the Bass
//! number formula for flat extensions `R -> R[t]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groebner::{ideal_power, krull_dim, Ideal};
use crate::localinv::{
    bass_number, betti_number, depth_at, grade_of, id_at, pd_at, DimensionValue, PrimeIdeal,
};
use crate::matrix::Matrix;
use crate::modpres::{homology_at, is_zero_module, kernel_of_morphism, ComplexAt, ModuleMorphism, PresentedModule};
use crate::ring::Ring;

/// Exact rational coefficients of fitted polynomials.
pub type Rational = BigRational;

/// `M/I^nM`: the relations of `M` together with `I^n e_c` for every generator.
pub fn power_quotient(m: &PresentedModule, i: &Ideal, n: u32) -> Result<PresentedModule> {
    if m.ring() != i.ring() {
        return Err(Error::RingMismatch);
    }
    let ring = m.ring();
    let pow = ideal_power(i, n);
    let a = m.gens();
    let mut cols = m.relations().columns().to_vec();
    for c in 0..a {
        for g in pow.gens() {
            let mut v = vec![ring.zero(); a];
            v[c] = g.clone();
            cols.push(v);
        }
    }
    let q = PresentedModule::new(ring, a, Matrix::from_columns(a, cols)?)?;
    Ok(match m.degrees() {
        Some(d) => q.clone().with_grading(d.to_vec()).unwrap_or(q),
        None => q,
    })
}

/// The products `g·e_c`, `g` running over generators of `I^n`, as a free
/// module with its map to `M/I^{n+1}M`.
fn piece_map(m: &PresentedModule, i: &Ideal, n: u32) -> Result<ModuleMorphism> {
    let ring = m.ring();
    let pow = ideal_power(i, n);
    let a = m.gens();
    let target = power_quotient(m, i, n + 1)?;
    let mut cols = Vec::new();
    let mut degrees = Vec::new();
    for c in 0..a {
        for g in pow.gens() {
            let mut v = vec![ring.zero(); a];
            v[c] = g.clone();
            cols.push(v);
            if let (Some(d), true) = (m.degrees(), g.is_homogeneous()) {
                degrees.push(d[c] + g.degree().unwrap() as i64);
            }
        }
    }
    let k = cols.len();
    let mut source = PresentedModule::free(ring, k).ungraded();
    if degrees.len() == k && target.is_graded() {
        source = source.with_grading(degrees)?;
    }
    ModuleMorphism::new(source, target, Matrix::from_columns(a, cols)?)
}

/// `I^nM/I^{n+1}M`, generated by the products of generators of `I^n` with
/// those of `M`.
pub fn graded_piece(m: &PresentedModule, i: &Ideal, n: u32) -> Result<PresentedModule> {
    let phi = piece_map(m, i, n)?;
    let (_, inclusion) = kernel_of_morphism(&phi)?;
    let free = phi.source.clone();
    let q = PresentedModule::new(m.ring(), free.gens(), inclusion.matrix.clone())?;
    Ok(match free.degrees() {
        Some(d) => q.clone().with_grading(d.to_vec()).unwrap_or(q),
        None => q,
    })
}

/// `0 -> I^nM/I^{n+1}M -> M/I^{n+1}M -> M/I^nM -> 0`: composite zero,
/// exact in the middle, left map injective.
pub fn exact_sequence_check(m: &PresentedModule, i: &Ideal, n: u32) -> Result<bool> {
    let piece = graded_piece(m, i, n)?;
    let mid = power_quotient(m, i, n + 1)?;
    let right = power_quotient(m, i, n)?;
    let products = piece_map(m, i, n)?.matrix;
    let left = ModuleMorphism::new(piece, mid.clone(), products)?;
    let proj = ModuleMorphism::canonical(mid, right)?;
    let complex = match ComplexAt::new(left.clone(), proj) {
        Ok(c) => c,
        Err(Error::NotAComplex) => return Ok(false),
        Err(e) => return Err(e),
    };
    let (ker, _) = kernel_of_morphism(&left)?;
    Ok(is_zero_module(&homology_at(&complex)) && is_zero_module(&ker))
}

/// Which invariant a series tracks.
#[derive(Debug, Clone, PartialEq)]
pub enum Invariant {
    Bass(usize),
    Betti(usize),
    Pd,
    Id,
    Depth,
    Grade(Ideal),
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Bass(i) => write!(f, "bass({i})"),
            Invariant::Betti(i) => write!(f, "betti({i})"),
            Invariant::Pd => write!(f, "pd"),
            Invariant::Id => write!(f, "id"),
            Invariant::Depth => write!(f, "depth"),
            Invariant::Grade(j) => write!(f, "grade({})", j.display()),
        }
    }
}

impl Invariant {
    fn needs_prime(&self) -> bool {
        !matches!(self, Invariant::Grade(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesValue {
    Count(usize),
    Dim(DimensionValue),
}

impl SeriesValue {
    pub fn count(self) -> Option<usize> {
        match self {
            SeriesValue::Count(v) => Some(v),
            SeriesValue::Dim(DimensionValue::Finite(v)) => Some(v),
            SeriesValue::Dim(_) => None,
        }
    }
}

impl fmt::Display for SeriesValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesValue::Count(v) => write!(f, "{v}"),
            SeriesValue::Dim(d) => write!(f, "{d}"),
        }
    }
}

/// Values of an invariant of `M/I^nM` for `n` in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSeries {
    pub invariant: Invariant,
    pub prime: Option<PrimeIdeal>,
    pub n_min: u32,
    pub values: Vec<SeriesValue>,
}

impl InvariantSeries {
    pub fn n_max(&self) -> u32 {
        self.n_min + self.values.len() as u32 - 1
    }

    pub fn get(&self, n: u32) -> Option<SeriesValue> {
        n.checked_sub(self.n_min).and_then(|k| self.values.get(k as usize)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, SeriesValue)> + '_ {
        self.values.iter().enumerate().map(|(k, v)| (self.n_min + k as u32, *v))
    }

    /// Restriction to a sub-window.
    pub fn window(&self, range: RangeInclusive<u32>) -> InvariantSeries {
        let values = range.clone().filter_map(|n| self.get(n)).collect();
        InvariantSeries { values, n_min: *range.start().max(&self.n_min), ..self.clone() }
    }
}

/// Shared state for a grid of computations on `M/I^nM`: the quotients are
/// built once per `n` and the resolutions of `R/p` once per prime.
pub struct Lab {
    module: PresentedModule,
    ideal: Ideal,
    s_max: usize,
    quotients: Mutex<BTreeMap<u32, PresentedModule>>,
}

impl Lab {
    pub fn new(module: PresentedModule, ideal: Ideal) -> Result<Lab> {
        if module.ring() != ideal.ring() {
            return Err(Error::RingMismatch);
        }
        let s_max = default_s_max(module.ring());
        Ok(Lab { module, ideal, s_max, quotients: Mutex::new(BTreeMap::new()) })
    }

    pub fn with_s_max(mut self, s_max: usize) -> Lab {
        self.s_max = s_max;
        self
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn module(&self) -> &PresentedModule {
        &self.module
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.module.ring()
    }

    /// `M/I^nM`, computed at most once per `n` from the caller's view: a
    /// racing second computation is discarded in favour of the first insert.
    pub fn power_quotient(&self, n: u32) -> Result<PresentedModule> {
        if let Some(q) = self.quotients.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
            return Ok(q.clone());
        }
        let q = power_quotient(&self.module, &self.ideal, n)?;
        let mut map = self.quotients.lock().unwrap_or_else(|e| e.into_inner());
        Ok(map.entry(n).or_insert(q).clone())
    }

    pub fn value(&self, invariant: &Invariant, p: Option<&PrimeIdeal>, n: u32) -> Result<SeriesValue> {
        let q = self.power_quotient(n)?;
        let need = || p.ok_or_else(|| Error::Precondition(format!("{invariant} needs a prime")));
        Ok(match invariant {
            Invariant::Bass(i) => SeriesValue::Count(bass_number(*i, need()?, &q)?),
            Invariant::Betti(i) => SeriesValue::Count(betti_number(*i, need()?, &q)?),
            Invariant::Pd => SeriesValue::Dim(pd_at(need()?, &q, self.s_max)?),
            Invariant::Id => SeriesValue::Dim(id_at(need()?, &q)?),
            Invariant::Depth => SeriesValue::Dim(depth_at(need()?, &q)?),
            Invariant::Grade(j) => SeriesValue::Dim(grade_of(j, &q)?),
        })
    }

    pub fn series(&self, invariant: &Invariant, p: Option<&PrimeIdeal>, range: RangeInclusive<u32>) -> Result<InvariantSeries> {
        if range.is_empty() || *range.start() < 1 {
            return Err(Error::Precondition("window must be a nonempty range starting at n >= 1".into()));
        }
        if invariant.needs_prime() && p.is_none() {
            return Err(Error::Precondition(format!("{invariant} needs a prime")));
        }
        if let Some(p) = p {
            if p.ring() != self.ring() {
                return Err(Error::RingMismatch);
            }
        }
        let ns: Vec<u32> = range.clone().collect();
        let values = ns.par_iter().map(|&n| self.value(invariant, p, n)).collect::<Result<Vec<_>>>()?;
        Ok(InvariantSeries { invariant: invariant.clone(), prime: p.cloned(), n_min: *range.start(), values })
    }

    pub fn loci(&self, primes: &[PrimeIdeal], n: u32) -> Result<Vec<Locus>> {
        primes
            .par_iter()
            .map(|p| {
                Ok(match self.value(&Invariant::Id, Some(p), n)? {
                    SeriesValue::Dim(DimensionValue::Finite(_)) => Locus::Finite,
                    SeriesValue::Dim(DimensionValue::InfiniteCertified) => Locus::Infinite,
                    SeriesValue::Dim(DimensionValue::ZeroModule) => Locus::Zero,
                    _ => Locus::Undetermined,
                })
            })
            .collect()
    }
}

/// `krull_dim(J) + 1`, one past the dimension of `R`.
pub fn default_s_max(ring: &Ring) -> usize {
    (krull_dim(&Ideal::zero(ring)) + 1).max(0) as usize
}

pub fn invariant_series(
    m: &PresentedModule,
    i: &Ideal,
    invariant: &Invariant,
    p: Option<&PrimeIdeal>,
    range: RangeInclusive<u32>,
) -> Result<InvariantSeries> {
    Lab::new(m.clone(), i.clone())?.series(invariant, p, range)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationReport {
    /// Smallest `k` with a constant tail on the window, if the last two agree.
    pub stable_index: Option<u32>,
    pub stable_value: Option<SeriesValue>,
    pub window: (u32, u32),
}

pub fn detect_stabilization(series: &InvariantSeries) -> StabilizationReport {
    let window = (series.n_min, series.n_max());
    let v = &series.values;
    let last = *v.last().expect("nonempty series");
    if v.len() >= 2 && v[v.len() - 2] != last {
        return StabilizationReport { stable_index: None, stable_value: None, window };
    }
    let run = v.iter().rev().take_while(|x| **x == last).count();
    let k = series.n_min + (v.len() - run) as u32;
    StabilizationReport { stable_index: Some(k), stable_value: Some(last), window }
}

/// `φ(n) = Σ c_j n^j` agreeing with the series on `[onset, validated_through]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FittedPolynomial {
    /// Ascending powers of `n`.
    pub coefficients: Vec<BigRational>,
    pub onset: u32,
    pub validated_through: u32,
}

impl FittedPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, n: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(n));
        self.coefficients.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Rendering such as `n + 1` or `1/2*n^2 - 3`.
    pub fn display(&self) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (j, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigRational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            let var = match j {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{j}"),
            };
            let text = if var.is_empty() {
                a.to_string()
            } else if a.is_one() {
                var
            } else {
                format!("{a}*{var}")
            };
            parts.push((neg, text));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (neg, t)) in parts.into_iter().enumerate() {
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&t);
        }
        out
    }
}

/// Held-out points required beyond the interpolation nodes.
pub const HELD_OUT: u32 = 2;

/// Minimal degree first, then minimal onset. Interpolation on
/// `[n0, n0 + d]` must reproduce every later value in the window.
pub fn fit_eventual_polynomial(series: &InvariantSeries, max_degree: usize) -> Result<Option<FittedPolynomial>> {
    let values: Vec<i64> = series
        .values
        .iter()
        .map(|v| v.count().map(|c| c as i64))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Precondition("series has non-finite values".into()))?;
    if values.len() < max_degree + 3 {
        return Err(Error::Precondition(format!(
            "window of {} values is too small for degree {max_degree}; need {}",
            values.len(),
            max_degree + 3
        )));
    }
    let n_max = series.n_max();
    for d in 0..=max_degree as u32 {
        let mut n0 = series.n_min;
        while n0 + d + HELD_OUT <= n_max {
            let nodes: Vec<(i64, i64)> =
                (n0..=n0 + d).map(|n| (n as i64, values[(n - series.n_min) as usize])).collect();
            let coefficients = interpolate(&nodes);
            let fit = FittedPolynomial { coefficients, onset: n0, validated_through: n_max };
            let ok = (n0..=n_max)
                .all(|n| fit.eval(n as i64) == BigRational::from_integer(values[(n - series.n_min) as usize].into()));
            if ok {
                return Ok(Some(fit));
            }
            n0 += 1;
        }
    }
    Ok(None)
}

/// Power-basis coefficients of the interpolating polynomial, via Newton's
/// divided differences, trailing zeros trimmed.
fn interpolate(points: &[(i64, i64)]) -> Vec<BigRational> {
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let xs: Vec<BigRational> = points.iter().map(|p| q(p.0)).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|p| q(p.1)).collect();
    for level in 1..points.len() {
        for k in (level..points.len()).rev() {
            dd[k] = (&dd[k] - &dd[k - 1]) / (&xs[k] - &xs[k - level]);
        }
    }
    // Horner on the Newton form
    let mut coeffs = vec![BigRational::zero(); points.len()];
    for k in (0..points.len()).rev() {
        // coeffs = coeffs * (n - x_k) + dd[k]
        let mut next = vec![BigRational::zero(); points.len()];
        for j in 0..points.len() {
            if j + 1 < points.len() {
                next[j + 1] += &coeffs[j];
            }
            next[j] -= &coeffs[j] * &xs[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Locus {
    Finite,
    Infinite,
    Zero,
    Undetermined,
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Locus::Finite => "finite",
            Locus::Infinite => "infinite",
            Locus::Zero => "zero",
            Locus::Undetermined => "undetermined",
        })
    }
}

/// Finiteness of `id (M/I^nM)_p` at each prime.
pub fn loci_table(m: &PresentedModule, i: &Ideal, primes: &[PrimeIdeal], n: u32) -> Result<Vec<Locus>> {
    Lab::new(m.clone(), i.clone())?.loci(primes, n)
}

/// Supported flat extensions `R -> S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    /// `S = R`, `q = p`.
    Identity,
    /// `S = R[t]` with `q = pS + (t)` when `with_variable`, else `q = pS`.
    Polynomial { variable: String, with_variable: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseChangeReport {
    /// `μ_S^n(q, M ⊗ S)` for `n = 0..=s_max`.
    pub lhs: Vec<usize>,
    /// `Σ_{a+b=n} μ_R^a(p, M) μ_{S/pS}^b(q/pS, S/pS)`.
    pub rhs: Vec<usize>,
    pub holds: bool,
}

/// Evaluate both sides of the Bass number formula for a flat local
/// extension, for `n = 0..=s_max` (default `dim S`).
pub fn base_change_check(
    m: &PresentedModule,
    p: &PrimeIdeal,
    extension: &Extension,
    s_max: Option<usize>,
) -> Result<BaseChangeReport> {
    let r = m.ring();
    if p.ring() != r {
        return Err(Error::RingMismatch);
    }
    let (s, ms, q) = match extension {
        Extension::Identity => (r.clone(), m.clone(), p.clone()),
        Extension::Polynomial { variable, with_variable } => {
            let s = r.adjoin_variable(variable)?;
            let ms = m.transferred(&s);
            let mut gens: Vec<_> = p.ideal().gens().iter().map(|g| r.extend_element(g, &s)).collect();
            if *with_variable {
                gens.push(s.var(s.nvars() - 1));
            }
            (s.clone(), ms, PrimeIdeal::new(Ideal::new(&s, gens))?)
        }
    };
    let p_s: Vec<_> = p.ideal().gens().iter().map(|g| if s.nvars() == r.nvars() { g.clone() } else { r.extend_element(g, &s) }).collect();
    let fiber = s.quotient_by(&p_s)?;
    let q_bar = PrimeIdeal::new(Ideal::new(&fiber, q.ideal().gens().iter().map(|g| s.transfer(g, &fiber)).collect()))?;
    let s_max = s_max.unwrap_or_else(|| krull_dim(&Ideal::zero(&s)).max(0) as usize);
    let idx: Vec<usize> = (0..=s_max).collect();
    let lhs = idx.par_iter().map(|&n| bass_number(n, &q, &ms)).collect::<Result<Vec<_>>>()?;
    let base = idx.par_iter().map(|&a| bass_number(a, p, m)).collect::<Result<Vec<_>>>()?;
    let fib_free = PresentedModule::free(&fiber, 1);
    let fib = idx.par_iter().map(|&b| bass_number(b, &q_bar, &fib_free)).collect::<Result<Vec<_>>>()?;
    let rhs: Vec<usize> = idx.iter().map(|&n| (0..=n).map(|a| base[a] * fib[n - a]).sum()).collect();
    let holds = lhs == rhs;
    Ok(BaseChangeReport { lhs, rhs, holds })
}
