use bassline_core::groebner::ideal_power;
use bassline_core::homalg::{ext_from_resolution, free_resolution, resolve, tor_module, ext_module, FreeResolution};
use bassline_core::localinv::{
    bass_number, betti_number, generic_rank, id_at, matrix_rank, pd_at, DimensionValue, PrimeIdeal,
};
use bassline_core::matrix::Matrix;
use bassline_core::modpres::{base_change_to, homology_at, is_zero_module, ComplexAt, ModuleMorphism, PresentedModule};
use bassline_core::{Field, Ideal, MonomialOrder, Polynomial, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u32 = 32003;

fn poly(vars: &[&str]) -> Ring {
    Ring::polynomial(vars, Field::Prime(P), MonomialOrder::Grevlex)
}

fn random_form(r: &Ring, degree: i64, rng: &mut ChaCha8Rng) -> Polynomial {
    if degree < 0 {
        return r.zero();
    }
    let mut f = r.zero();
    for _ in 0..rng.gen_range(0..3) {
        let mut t = r.constant(rng.gen_range(-5..6));
        for _ in 0..degree {
            t = r.mul(&t, &r.var(rng.gen_range(0..r.nvars())));
        }
        f = r.add(&f, &t);
    }
    f
}

/// Graded module with at most three generators.
fn random_module(r: &Ring, rng: &mut ChaCha8Rng) -> PresentedModule {
    let gens = rng.gen_range(1..=3);
    let degrees: Vec<i64> = (0..gens).map(|_| rng.gen_range(0..2)).collect();
    let ncols = rng.gen_range(1..=3);
    let cols: Vec<Vec<Polynomial>> = (0..ncols)
        .map(|_| {
            let e = rng.gen_range(1..3) + 1;
            degrees.iter().map(|d| random_form(r, e - d, rng)).collect()
        })
        .collect();
    PresentedModule::graded(r, degrees, Matrix::from_columns(gens, cols).unwrap()).unwrap()
}

fn fiber(m: &PresentedModule, p: &PrimeIdeal) -> usize {
    generic_rank(&base_change_to(m, p.residue_domain()))
}

/// dim H_i(F ⊗ κ(p)) from a resolution of M, all ranks over Frac(R/p).
fn betti_by_resolving_module(res: &FreeResolution, p: &PrimeIdeal, i: usize) -> usize {
    let d = p.residue_domain();
    let rank = |j: usize| -> usize {
        if j == 0 || j > res.length() {
            return 0;
        }
        matrix_rank(d, res.differential(j).transferred(res.ring(), d).rows())
    };
    res.rank(i) - rank(i) - rank(i + 1)
}

fn assert_exact(res: &FreeResolution) {
    let r = res.ring();
    for i in 1..res.length() {
        let free = |j: usize| PresentedModule::free(r, res.rank(j)).ungraded();
        let incoming = ModuleMorphism::new(free(i + 1), free(i), res.differential(i + 1).clone()).unwrap();
        let outgoing = ModuleMorphism::new(free(i), free(i - 1), res.differential(i).clone()).unwrap();
        let h = homology_at(&ComplexAt::new(incoming, outgoing).unwrap());
        assert!(is_zero_module(&h), "homology at F_{i}");
    }
}

fn det(r: &Ring, m: &[Vec<Polynomial>]) -> Polynomial {
    if m.is_empty() {
        return r.one();
    }
    let mut total = r.zero();
    for c in 0..m.len() {
        let minor: Vec<Vec<Polynomial>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, p)| p.clone()).collect()).collect();
        let term = r.mul(&m[0][c], &det(r, &minor));
        total = if c % 2 == 0 { r.add(&total, &term) } else { r.sub(&total, &term) };
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest size of a nonzero minor.
fn rank_by_minors(r: &Ring, rows: &[Vec<Polynomial>]) -> usize {
    let (nr, nc) = (rows.len(), rows.first().map_or(0, |x| x.len()));
    for k in (1..=nr.min(nc)).rev() {
        for rs in subsets(nr, k) {
            for cs in subsets(nc, k) {
                let m: Vec<Vec<Polynomial>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                if !det(r, &m).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

#[test]
fn rank_matches_minor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let plane = poly(&["x", "y"]);
    let a = poly(&["x", "y", "z"]);
    // K[x,y,z]/(x^2 - yz) is a domain
    let cone = a.quotient_by(&[a.parse("x^2 - y*z").unwrap()]).unwrap();
    for r in [&plane, &cone] {
        for _ in 0..25 {
            let nr = rng.gen_range(1..4);
            let nc = rng.gen_range(1..4);
            let mut rows: Vec<Vec<Polynomial>> =
                (0..nr).map(|_| (0..nc).map(|_| random_form(r, rng.gen_range(0..3), &mut rng)).collect()).collect();
            if nr > 1 && rng.gen_bool(0.5) {
                // force a dependent row
                let c = r.constant(rng.gen_range(1..7));
                rows[nr - 1] = rows[0].iter().map(|p| r.mul(p, &c)).collect();
            }
            assert_eq!(matrix_rank(r, rows.clone()), rank_by_minors(r, &rows));
        }
    }
}

/// dim_K of the socle of K[x,y]/m^n by linear algebra on monomials.
fn socle_dimension(n: u32) -> usize {
    let basis: Vec<(u32, u32)> = (0..n).flat_map(|d| (0..=d).map(move |a| (a, d - a))).collect();
    let idx = |e: (u32, u32)| basis.iter().position(|b| *b == e);
    // rows: coordinates of x*b and y*b for every basis element b
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for shift in [(1, 0), (0, 1)] {
        for out in &basis {
            let row: Vec<i64> = basis
                .iter()
                .map(|b| i64::from(idx((b.0 + shift.0, b.1 + shift.1)) == Some(idx(*out).unwrap())))
                .collect();
            rows.push(row);
        }
    }
    let r = poly(&["x"]);
    let prow: Vec<Vec<Polynomial>> = rows.iter().map(|row| row.iter().map(|v| r.constant(*v)).collect()).collect();
    basis.len() - matrix_rank(&r, prow)
}

#[test]
fn bass_zero_of_power_quotients_matches_socle() {
    let r = poly(&["x", "y"]);
    let m = PrimeIdeal::irrelevant(&r).unwrap();
    for n in 1..=4 {
        let q = PresentedModule::cyclic(&ideal_power(m.ideal(), n));
        assert_eq!(bass_number(0, &m, &q).unwrap(), socle_dimension(n));
        assert_eq!(socle_dimension(n), n as usize);
        // n + 1 monomials of degree n generate m^n minimally
        assert_eq!(betti_number(1, &m, &q).unwrap(), (0..=n).count());
    }
}

#[test]
fn koszul_values() {
    let r = poly(&["x", "y"]);
    let m = PrimeIdeal::irrelevant(&r).unwrap();
    let k = PresentedModule::cyclic(m.ideal());
    let rr = PresentedModule::free(&r, 1);
    for i in 0..=2 {
        let binom = [1, 2, 1][i];
        assert_eq!(betti_number(i, &m, &k).unwrap(), binom);
        assert_eq!(bass_number(i, &m, &rr).unwrap(), usize::from(i == 2));
        assert_eq!(fiber(&ext_module(i, &k, &k).unwrap(), &m), binom);
    }
}

#[test]
fn tor_balance_on_random_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r = poly(&["x", "y"]);
    let primes = [
        PrimeIdeal::irrelevant(&r).unwrap(),
        PrimeIdeal::parse(&r, &["x"]).unwrap(),
        PrimeIdeal::new(Ideal::zero(&r)).unwrap(),
    ];
    for _ in 0..5 {
        let a = random_module(&r, &mut rng);
        let b = random_module(&r, &mut rng);
        for i in 0..=2 {
            let ab = tor_module(i, &a, &b).unwrap();
            let ba = tor_module(i, &b, &a).unwrap();
            for p in &primes {
                assert_eq!(fiber(&ab, p), fiber(&ba, p), "Tor_{i} at {}", p.display());
            }
        }
    }
}

#[test]
fn betti_numbers_agree_with_resolving_the_module() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let r = poly(&["x", "y"]);
    let primes = [PrimeIdeal::irrelevant(&r).unwrap(), PrimeIdeal::parse(&r, &["y"]).unwrap()];
    for _ in 0..5 {
        let m = random_module(&r, &mut rng);
        let res = free_resolution(&m, 4);
        assert_exact(&res);
        for p in &primes {
            for i in 0..=2 {
                assert_eq!(betti_number(i, p, &m).unwrap(), betti_by_resolving_module(&res, p, i));
            }
        }
    }
}

#[test]
fn ext_independent_of_resolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let r = poly(&["x", "y"]);
    let m = PrimeIdeal::irrelevant(&r).unwrap();
    let gen = PrimeIdeal::new(Ideal::zero(&r)).unwrap();
    for _ in 0..3 {
        let n = random_module(&r, &mut rng);
        let target = random_module(&r, &mut rng);
        let raw = free_resolution(&n, 3);
        let min = resolve(&n, 3);
        for i in 0..=2 {
            let a = ext_from_resolution(i, &raw, &target).unwrap();
            let b = ext_from_resolution(i, &min, &target).unwrap();
            assert_eq!(fiber(&a, &m), fiber(&b, &m));
            assert_eq!(fiber(&a, &gen), fiber(&b, &gen));
        }
    }
}

#[test]
fn direct_sum_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = poly(&["x", "y"]);
    let m = PrimeIdeal::irrelevant(&r).unwrap();
    for _ in 0..3 {
        let n = random_module(&r, &mut rng);
        let a = random_module(&r, &mut rng);
        let b = random_module(&r, &mut rng);
        let sum = a.direct_sum(&b).unwrap();
        for i in 0..=1 {
            let e = |x: &PresentedModule| fiber(&ext_module(i, &n, x).unwrap(), &m);
            assert_eq!(e(&sum), e(&a) + e(&b));
            let t = |x: &PresentedModule| fiber(&tor_module(i, &n, x).unwrap(), &m);
            assert_eq!(t(&sum), t(&a) + t(&b));
        }
    }
}

#[test]
fn betti_specialization_along_chains() {
    let r = poly(&["x", "y"]);
    let x = PrimeIdeal::parse(&r, &["x"]).unwrap();
    let m = PrimeIdeal::irrelevant(&r).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut modules = vec![PresentedModule::cyclic(&Ideal::parse(&r, &["x^2", "x*y"]).unwrap())];
    modules.extend((0..3).map(|_| random_module(&r, &mut rng)));
    for md in &modules {
        for i in 0..=4 {
            assert!(betti_number(i, &x, md).unwrap() <= betti_number(i, &m, md).unwrap());
        }
    }
    // Bass numbers shift by the height of q/p = 1 along (x) ⊆ (x, y)
    for md in &modules {
        for i in 0..=1 {
            assert!(bass_number(i, &x, md).unwrap() <= bass_number(i + 1, &m, md).unwrap());
        }
    }
}

#[test]
fn bass_numbers_shift_by_dimension() {
    let r = poly(&["x", "y"]);
    let x = PrimeIdeal::parse(&r, &["x"]).unwrap();
    let m = PrimeIdeal::irrelevant(&r).unwrap();
    let rr = PresentedModule::free(&r, 1);
    assert_eq!(bass_number(1, &x, &rr).unwrap(), 1);
    assert_eq!(bass_number(2, &m, &rr).unwrap(), 1);
    // Ext^1(R/x, R) ≅ R/x is free over R/(x): generic rank equals generator count
    let e = base_change_to(&ext_module(1, &PresentedModule::cyclic(x.ideal()), &rr).unwrap(), x.residue_domain());
    assert_eq!(generic_rank(&e), e.gens());
}

#[test]
fn dimension_consistency() {
    let p3 = poly(&["x", "y", "z"]);
    let emb = p3.quotient_by(&[p3.parse("x^2*y").unwrap(), p3.parse("x^2*z").unwrap()]).unwrap();
    let p4 = poly(&["x", "y", "z", "w"]);
    let hyp = p4.quotient_by(&[p4.parse("x*y - z*w").unwrap()]).unwrap();
    let cases: Vec<(Ring, Vec<&str>, Vec<&str>)> = vec![
        (emb.clone(), vec!["x", "y"], vec!["x^2"]),
        (emb.clone(), vec!["x", "y", "z"], vec!["x"]),
        (hyp.clone(), vec!["x", "w"], vec!["w", "x^2"]),
        (hyp.clone(), vec!["x", "y", "z", "w"], vec!["w"]),
        (poly(&["x", "y"]), vec!["x", "y"], vec!["x*y"]),
    ];
    for (r, p, m) in cases {
        let p = PrimeIdeal::parse(&r, &p).unwrap();
        let m = PresentedModule::cyclic(&Ideal::parse(&r, &m).unwrap());
        let h = p.height_upper() as usize;
        if let DimensionValue::Finite(v) = id_at(&p, &m).unwrap() {
            assert_ne!(bass_number(v, &p, &m).unwrap(), 0);
            for i in v + 1..=h + 1 {
                assert_eq!(bass_number(i, &p, &m).unwrap(), 0);
            }
        }
        if let DimensionValue::Finite(v) = pd_at(&p, &m, h + 1).unwrap() {
            assert_ne!(betti_number(v, &p, &m).unwrap(), 0);
            assert_eq!(betti_number(v + 1, &p, &m).unwrap(), 0);
        }
    }
}

#[test]
fn random_resolutions_are_exact_and_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let r = poly(&["x", "y"]);
    for _ in 0..4 {
        let m = random_module(&r, &mut rng);
        let res = resolve(&m, 3);
        assert_exact(&res);
        for d in &res.differentials {
            assert!(d.columns().iter().flatten().all(|p| p.constant_term().is_none()));
        }
    }
}
