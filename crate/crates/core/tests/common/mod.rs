//! Fixture generators and independent oracles shared by the integration
//! tests. Everything here is computed from first principles (integer
//! arithmetic on exponent vectors) rather than through the library's own
//! transforms.
#![allow(dead_code)]

use donaldson::algebra::{GaussianRational, Monomial, MultiPoly, TruncSeries, Vars};
use donaldson::lattice::{CohClass, Lattice, ManifoldData};
use donaldson::series::{DonaldsonSeries, OneCycleWord, Sector, SeriesFlags, TermMap};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Gr = GaussianRational;

pub fn gr(s: &str) -> Gr {
    s.parse().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn det(g: &[Vec<i64>]) -> i64 {
    let n = g.len();
    if n == 1 {
        return g[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = g[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * g[0][j] * det(&minor)
        })
        .sum()
}

pub fn pair(g: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    let n = g.len();
    (0..n).map(|a| (0..n).map(|b| u[a] * g[a][b] * v[b]).sum::<i64>()).sum()
}

/// `d0 − d` from `2d0 = −2w² − 3(1 − b1 + b⁺)` and `2d = deg2z`.
pub fn d0_minus_d(s: &DonaldsonSeries) -> i64 {
    let m = s.manifold();
    let w = s.w().coords();
    let twice_d0 = -2 * pair(m.lattice.gram(), w, w) - 3 * (1 - m.b1 as i64 + m.bplus as i64);
    (twice_d0 - s.zword().deg2z()) / 2
}

pub fn i_pow(k: i64) -> Gr {
    match k.rem_euclid(4) {
        0 => Gr::one(),
        1 => Gr::i(),
        2 => -Gr::one(),
        _ => -Gr::i(),
    }
}

pub fn manifold(name: &str, gram: Vec<Vec<i64>>) -> ManifoldData {
    ManifoldData::new(name, Lattice::with_gram(gram).unwrap(), 0, 3).unwrap()
}

pub fn random_gram(r: &mut impl Rng, rank: usize) -> Vec<Vec<i64>> {
    loop {
        let mut g = vec![vec![0i64; rank]; rank];
        for a in 0..rank {
            g[a][a] = *[-2, -1, 1, 2].choose(r).unwrap();
            for b in 0..a {
                let x = if r.gen_bool(0.4) { *[-1, 1].choose(r).unwrap() } else { 0 };
                g[a][b] = x;
                g[b][a] = x;
            }
        }
        if det(&g) != 0 {
            return g;
        }
    }
}

pub fn random_coeff(r: &mut impl Rng) -> Gr {
    let mut num = 0;
    while num == 0 {
        num = r.gen_range(-5i64..=5);
    }
    let re = Gr::frac(num, r.gen_range(1i64..=3));
    if r.gen_bool(0.25) {
        &re + &Gr::i().scale_int(r.gen_range(-3i64..=3))
    } else {
        re
    }
}

/// Nonzero polynomial in `t1..tn, lambda` of total degree ≤ `deg`.
pub fn random_poly(r: &mut impl Rng, rank: usize, deg: u32) -> MultiPoly {
    let vars = Vars::series(rank);
    let monos = Monomial::up_to_degree(rank + 1, deg);
    loop {
        let mut p = MultiPoly::zero(vars.clone());
        for m in &monos {
            if r.gen_bool(if m.degree() == 0 { 0.8 } else { 0.3 }) {
                p.add_term(m.clone(), random_coeff(r));
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn constant(rank: usize, c: Gr) -> MultiPoly {
    MultiPoly::constant(Vars::series(rank), c)
}

/// `pairs` classes, none zero, no two equal or opposite.
pub fn random_classes(r: &mut impl Rng, rank: usize, pairs: usize, coords: &[i64]) -> Vec<CohClass> {
    let mut out: Vec<CohClass> = Vec::new();
    while out.len() < pairs {
        let k = CohClass::new((0..rank).map(|_| *coords.choose(r).unwrap()).collect());
        if k.is_zero() || out.iter().any(|x| *x == k || *x == k.neg()) {
            continue;
        }
        out.push(k);
    }
    out
}

fn random_w(r: &mut impl Rng, rank: usize) -> CohClass {
    CohClass::new((0..rank).map(|_| r.gen_range(-1i64..=1)).collect())
}

/// Arbitrary two-sector series: classes `±K` with independent polynomials,
/// and either a symmetrized Minus sector or an unrelated one.
pub fn random_general(r: &mut impl Rng, rank: usize, pairs: usize, deg: u32) -> DonaldsonSeries {
    let gram = random_gram(r, rank);
    let m = manifold("R", gram);
    let w = random_w(r, rank);
    let classes = random_classes(r, rank, pairs, &[-3, -2, -1, 0, 1, 2, 3]);
    let mut terms = TermMap::new();
    for k in &classes {
        terms.insert((Sector::Plus, k.clone()), random_poly(r, rank, deg));
        terms.insert((Sector::Plus, k.neg()), random_poly(r, rank, deg));
    }
    let symmetrize = r.gen_bool(0.5);
    if !symmetrize {
        for k in &classes {
            for k in [k.clone(), k.neg()] {
                if r.gen_bool(0.6) {
                    terms.insert((Sector::Minus, k), random_poly(r, rank, deg));
                }
            }
        }
    }
    let s = DonaldsonSeries::from_map(m, w, OneCycleWord::empty(), terms, SeriesFlags::default()).unwrap();
    let s = if symmetrize { s.symmetrize().unwrap() } else { s };
    s.canonicalize()
}

/// `p(−t, λ)` computed on exponent vectors.
pub fn reflect_t(p: &MultiPoly) -> MultiPoly {
    let n = p.nvars() - 1;
    MultiPoly::from_terms(
        p.vars().clone(),
        p.terms().map(|(m, c)| {
            let odd = m.exponents()[..n].iter().sum::<u32>() % 2 == 1;
            (m.clone(), if odd { -c } else { c.clone() })
        }),
    )
}

/// Pair-closed, symmetrized series: `p_{−K}(t, λ) = (−1)^{d0−d} p_K(−t, λ)`.
pub fn random_pair_closed(r: &mut impl Rng, rank: usize, pairs: usize, deg: u32) -> DonaldsonSeries {
    let gram = random_gram(r, rank);
    let m = manifold("P", gram);
    let w = random_w(r, rank);
    let probe = DonaldsonSeries::zero(m.clone(), w.clone(), OneCycleWord::empty()).unwrap();
    let sign = if d0_minus_d(&probe) % 2 == 0 { Gr::one() } else { -Gr::one() };
    let mut terms = TermMap::new();
    for k in random_classes(r, rank, pairs, &[-3, -2, -1, 0, 1, 2, 3]) {
        let p = random_poly(r, rank, deg);
        terms.insert((Sector::Plus, k.neg()), reflect_t(&p).scale(&sign));
        terms.insert((Sector::Plus, k), p);
    }
    DonaldsonSeries::from_map(m, w, OneCycleWord::empty(), terms, SeriesFlags::default())
        .unwrap()
        .symmetrize()
        .unwrap()
        .canonicalize()
}

/// Strong simple type on a diagonal ±1 lattice: characteristic classes
/// (odd coordinates) with constant coefficients, Minus by symmetrize.
pub fn random_sst(r: &mut impl Rng, rank: usize, pairs: usize) -> DonaldsonSeries {
    let diag: Vec<i64> = (0..rank).map(|_| *[-1, 1].choose(r).unwrap()).collect();
    let m = ManifoldData::new("S", Lattice::diagonal(&diag).unwrap(), 0, 3).unwrap();
    let w = random_w(r, rank);
    let mut km = Vec::new();
    for k in random_classes(r, rank, pairs, &[-3, -1, 1, 3]) {
        let a = Gr::from_int(*[-3, -2, -1, 1, 2, 3].choose(r).unwrap());
        km.push((k.neg(), a.clone()));
        km.push((k, a));
    }
    DonaldsonSeries::from_km_form(&km, m, w, OneCycleWord::empty()).unwrap()
}

/// Truncated `Σ_k c_k x^{k}` in variable `var` of `vars`, from Taylor
/// coefficients `coeff(k)`.
pub fn taylor(vars: &Vars, var: usize, cutoff: u32, lambda_cutoff: u32, coeff: impl Fn(u32) -> Gr) -> TruncSeries {
    let n = vars.len();
    TruncSeries::from_terms(
        vars.clone(),
        cutoff,
        lambda_cutoff,
        (0..=cutoff)
            .map(|k| {
                let mut e = vec![0; n];
                e[var] = k;
                (Monomial::from_exponents(&e), coeff(k))
            })
            .filter(|(_, c)| !c.is_zero()),
    )
}

pub fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// Adds a zero exponent for a new variable at `pos`.
pub fn widen(p: &MultiPoly, pos: usize, vars: &Vars) -> MultiPoly {
    MultiPoly::from_terms(
        vars.clone(),
        p.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.insert(pos, 0);
            (Monomial::from_exponents(&e), c.clone())
        }),
    )
}
