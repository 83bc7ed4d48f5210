//! Exact recovery of the structured form from a truncated expansion.
//!
//! The pipeline for [`recover_structure`]:
//! 1. separate the `e^{±2λ}` sectors with a confluent fit in `λ`;
//! 2. divide out `e^{±Q/2}`, and rotate the Minus sector by `t ↦ −𝐢t` so
//!    its frequencies become real integers;
//! 3. recover each sector as `Σ h_f(t, λ) e^{f·t}` from its derivative
//!    moments (see `moments`);
//! 4. turn frequency vectors `f = gram·K` into classes and check the
//!    re-expansion against every input coefficient.

mod modp;
mod moments;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{GaussianRational, Matrix, Monomial, MultiPoly, TruncSeries, UniPoly, Vars};
use crate::error::{Error, Result};
use crate::lattice::{CohClass, Lattice, ManifoldData};
use crate::series::{DonaldsonSeries, OneCycleWord, Sector, SeriesFlags};

type Gr = GaussianRational;

/// Samples `F = Σ_k samples[k] s^k` to be written as `Σ_j P_j(s) e^{μ_j s}`
/// with `deg P_j < N_j`. Samples may be polynomials in other variables.
#[derive(Clone, Debug)]
pub struct FitProblem {
    pub samples: Vec<MultiPoly>,
    pub eigenvalues: Vec<(Gr, u32)>,
}

impl FitProblem {
    pub fn new(samples: Vec<MultiPoly>, eigenvalues: Vec<(Gr, u32)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("no samples".into()));
        }
        for s in &samples[1..] {
            s.vars().check_same(samples[0].vars())?;
        }
        for (i, (mu, n)) in eigenvalues.iter().enumerate() {
            if *n == 0 {
                return Err(Error::InvalidInput("multiplicities must be at least 1".into()));
            }
            if eigenvalues[..i].iter().any(|(nu, _)| nu == mu) {
                return Err(Error::InvalidInput(format!("repeated eigenvalue {mu}")));
            }
        }
        let total: u32 = eigenvalues.iter().map(|(_, n)| n).sum();
        if (samples.len() as u32) < total {
            return Err(Error::InsufficientDepth(format!("{} samples for {total} unknowns", samples.len())));
        }
        Ok(FitProblem { samples, eigenvalues })
    }

    /// Splits `f` by powers of variable `var`; the depth is the λ cutoff
    /// for `lambda` and the total cutoff otherwise.
    pub fn from_series(f: &TruncSeries, var: usize, eigenvalues: Vec<(Gr, u32)>) -> Result<Self> {
        let vars = f.vars();
        if var >= vars.len() {
            return Err(Error::InvalidInput(format!("no variable with index {var}")));
        }
        let is_lambda = vars.has_lambda() && var + 1 == vars.len();
        let depth = if is_lambda { f.lambda_cutoff() } else { f.cutoff() };
        let rest: Vec<&str> =
            vars.names().iter().enumerate().filter(|(i, _)| *i != var).map(|(_, n)| n.as_str()).collect();
        let rest = Vars::new(&rest);
        let mut samples = vec![MultiPoly::zero(rest.clone()); depth as usize + 1];
        for (m, c) in f.terms() {
            let mut e = m.exponents().to_vec();
            let k = e.remove(var) as usize;
            samples[k].add_term(Monomial::from_exponents(&e), c.clone());
        }
        Self::new(samples, eigenvalues)
    }
}

fn factorial(k: u32) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, x| acc * x)
}

/// `[s^k] s^m e^{μ s} = μ^{k−m}/(k−m)!`.
fn confluent_entry(mu: &Gr, k: u32, m: u32) -> Gr {
    if k < m {
        return Gr::zero();
    }
    &mu.pow(k - m) / &Gr::from_real(BigRational::from_integer(factorial(k - m)))
}

fn confluent_columns(eigs: &[(Gr, u32)]) -> Vec<(usize, u32)> {
    eigs.iter().enumerate().flat_map(|(j, (_, n))| (0..*n).map(move |m| (j, m))).collect()
}

/// Solves the square system on the first rows and checks the rest; returns
/// `P_j` as coefficient lists in `s`.
pub fn fit_exponential_sum(prob: &FitProblem) -> Result<Vec<Vec<MultiPoly>>> {
    let vars = prob.samples[0].vars().clone();
    let cols = confluent_columns(&prob.eigenvalues);
    let l = cols.len();
    let entry = |k: usize, c: usize| {
        let (j, m) = cols[c];
        confluent_entry(&prob.eigenvalues[j].0, k as u32, m)
    };
    let unknowns: Vec<MultiPoly> = if l == 0 {
        Vec::new()
    } else {
        let a = Matrix::from_rows((0..l).map(|k| (0..l).map(|c| entry(k, c)).collect()).collect());
        let inv = a.inverse().ok_or_else(|| Error::InvariantViolation("confluent system is singular".into()))?;
        (0..l)
            .map(|c| {
                let mut acc = MultiPoly::zero(vars.clone());
                for k in 0..l {
                    if !inv[(c, k)].is_zero() {
                        acc = &acc + &prob.samples[k].scale(&inv[(c, k)]);
                    }
                }
                acc
            })
            .collect()
    };
    for k in l..prob.samples.len() {
        let mut model = MultiPoly::zero(vars.clone());
        for (c, u) in unknowns.iter().enumerate() {
            let e = entry(k, c);
            if !e.is_zero() {
                model = &model + &u.scale(&e);
            }
        }
        if model != prob.samples[k] {
            return Err(Error::Inconsistent { index: k });
        }
    }
    let mut out: Vec<Vec<MultiPoly>> = prob.eigenvalues.iter().map(|_| Vec::new()).collect();
    for ((j, _), u) in cols.iter().zip(unknowns) {
        out[*j].push(u);
    }
    Ok(out)
}

/// Minimal linear recurrence of `a_0, …, a_{n−1}` as the characteristic
/// polynomial `x^L + c_1 x^{L−1} + … + c_L`.
fn berlekamp_massey(a: &[Gr]) -> (UniPoly, usize) {
    let mut c = vec![Gr::one()];
    let mut b = vec![Gr::one()];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut bd = Gr::one();
    for n in 0..a.len() {
        let mut d = a[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &(&c[i] * &a[n - i]);
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = &d / &bd;
        let old = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, Gr::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + shift] -= &(&coef * bi);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = old;
            bd = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, Gr::zero());
    c.reverse();
    (UniPoly::new(c), l)
}

/// Frequencies and multiplicities of a one-variable exponential polynomial,
/// searched on the Gaussian integers `a + b𝐢` with `|a|, |b| ≤ bound`.
pub fn detect_frequencies(f: &TruncSeries, bound: i64) -> Result<Vec<(Gr, u32)>> {
    let vars = f.vars();
    let t_vars = vars.len() - usize::from(vars.has_lambda());
    if t_vars != 1 {
        return Err(Error::InvalidInput("frequency detection needs a one-variable series".into()));
    }
    let n = f.cutoff() as usize + 1;
    let mut a = vec![Gr::zero(); n];
    for (m, c) in f.terms() {
        if vars.has_lambda() && m.exp(1) > 0 {
            continue;
        }
        let k = m.exp(0);
        a[k as usize] = c * &Gr::from_real(BigRational::from_integer(factorial(k)));
    }
    let (poly, l) = berlekamp_massey(&a);
    // one coefficient beyond the 2L that fix the recurrence must confirm it
    if l > 0 && 2 * l >= n {
        return Err(Error::InsufficientDepth(format!("recurrence of order {l} is not confirmed by {n} coefficients")));
    }
    let mut rest = poly;
    let mut out = Vec::new();
    'grid: for re in -bound..=bound {
        for im in -bound..=bound {
            if rest.degree() == 0 {
                break 'grid;
            }
            let mu = &Gr::from_int(re) + &Gr::i().scale_int(im);
            let (m, cof) = rest.root_multiplicity(&mu);
            if m > 0 {
                out.push((mu, m));
                rest = cof;
            }
        }
    }
    if rest.degree() > 0 {
        return Err(Error::FrequencyOutsideGrid(format!(
            "{} root(s) are not Gaussian integers with parts bounded by {bound}",
            rest.degree()
        )));
    }
    Ok(out)
}

/// Coefficient-level comparison of a re-expansion with its input.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ResidualReport {
    pub checked: usize,
    pub nonzero: usize,
}

#[derive(Clone, Debug)]
pub struct Recovery {
    pub series: DonaldsonSeries,
    pub residual: ResidualReport,
}

/// A-priori frequency bounds `|(gram·K)_j| ≤ coord_bound · Σ_k |gram_jk|` for
/// classes with coordinates bounded by `coord_bound`.
pub fn default_bounds(l: &Lattice, coord_bound: i64) -> Vec<i64> {
    l.gram().iter().map(|row| coord_bound * row.iter().map(|x| x.abs()).sum::<i64>()).collect()
}

fn quadratic(l: &Lattice, vars: &Vars, scale: Gr) -> MultiPoly {
    let n = l.rank();
    let mut q = MultiPoly::zero(vars.clone());
    for a in 0..n {
        for b in 0..n {
            let g = l.gram()[a][b];
            if g != 0 {
                let mut m = Monomial::one(n + 1);
                m.set_exp(a, m.exp(a) + 1);
                m.set_exp(b, m.exp(b) + 1);
                q.add_term(m, &Gr::frac(g, 2) * &scale);
            }
        }
    }
    q
}

/// `G = e^{2λ} A + e^{−2λ} B` with `A, B` polynomial in `λ`; returns `(A, B)`.
fn split_lambda(g: &TruncSeries) -> Result<(TruncSeries, TruncSeries)> {
    let vars = g.vars().clone();
    let lam = vars.len() - 1;
    let depth = g.lambda_cutoff() + 1;
    for n in 1.. {
        if 2 * n > depth {
            return Err(Error::InsufficientDepth(format!(
                "lambda cutoff {} cannot separate the sectors",
                g.lambda_cutoff()
            )));
        }
        let prob = FitProblem::from_series(g, lam, vec![(Gr::from_int(2), n), (Gr::from_int(-2), n)])?;
        match fit_exponential_sum(&prob) {
            Ok(parts) => {
                let build = |coeffs: &[MultiPoly]| {
                    let mut terms = Vec::new();
                    for (k, p) in coeffs.iter().enumerate() {
                        for (m, c) in p.terms() {
                            let mut e = m.exponents().to_vec();
                            e.push(k as u32);
                            terms.push((Monomial::from_exponents(&e), c.clone()));
                        }
                    }
                    TruncSeries::from_terms(vars.clone(), g.cutoff(), n - 1, terms)
                };
                return Ok((build(&parts[0]), build(&parts[1])));
            }
            Err(Error::Inconsistent { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

fn layers(s: &TruncSeries, rank: usize) -> moments::Layers {
    let n = s.lambda_cutoff() as usize + 1;
    let mut layers = vec![HashMap::new(); n];
    for (m, c) in s.terms() {
        let e = m.exponents();
        layers[e[rank] as usize].insert(e[..rank].to_vec(), c.clone());
    }
    moments::Layers { rank, cutoff: s.cutoff(), layers }
}

fn assemble(
    comps: Vec<moments::Component>,
    l: &Lattice,
    vars: &Vars,
    rotate: Option<&[Gr]>,
) -> Result<BTreeMap<CohClass, MultiPoly>> {
    let mut out = BTreeMap::new();
    for c in comps {
        let k = l.class_from_pairings(&c.freq)?;
        let mut p = MultiPoly::zero(vars.clone());
        for (lam, poly) in c.polys.iter().enumerate() {
            for (e, coef) in poly {
                let mut e = e.clone();
                e.push(lam as u32);
                p.add_term(Monomial::from_exponents(&e), coef.clone());
            }
        }
        if let Some(f) = rotate {
            p = p.scale_vars(f);
        }
        if !p.is_zero() {
            out.insert(k, p);
        }
    }
    Ok(out)
}

/// Recovers the structured series whose expansion is `g`.
pub fn recover_structure(
    g: &TruncSeries,
    manifold: ManifoldData,
    w: CohClass,
    zword: OneCycleWord,
    bounds: &[i64],
) -> Result<Recovery> {
    let rank = manifold.rank();
    let vars = Vars::series(rank);
    g.vars().check_same(&vars)?;
    if bounds.len() != rank {
        return Err(Error::RankMismatch { expected: rank, got: bounds.len() });
    }
    let l = manifold.lattice.clone();

    let mut plus = BTreeMap::new();
    let mut minus = BTreeMap::new();
    if !g.is_zero() {
        let (a, b) = split_lambda(g)?;
        let lc = a.lambda_cutoff();
        let a = a.mul(&TruncSeries::exp(&quadratic(&l, &vars, Gr::from_int(-1)), g.cutoff(), lc)?)?;
        let b = b.mul(&TruncSeries::exp(&quadratic(&l, &vars, Gr::one()), g.cutoff(), lc)?)?;
        let mut rot = vec![-Gr::i(); rank];
        rot.push(Gr::one());
        let b = b.scale_vars(&rot);
        let (pa, pb) =
            rayon::join(|| moments::recover(&layers(&a, rank), bounds), || moments::recover(&layers(&b, rank), bounds));
        let mut back = vec![Gr::i(); rank];
        back.push(Gr::one());
        plus = assemble(pa?, &l, &vars, None)?;
        minus = assemble(pb?, &l, &vars, Some(&back))?;
    }

    let mut terms = BTreeMap::new();
    for (k, p) in plus {
        terms.insert((Sector::Plus, k), p);
    }
    for (k, p) in minus {
        terms.insert((Sector::Minus, k), p);
    }
    let series = DonaldsonSeries::from_map(manifold, w, zword, terms, SeriesFlags::default())?.canonicalize();
    let residual = residual(&series, g)?;
    if residual.nonzero > 0 {
        let diff = series.expand(g.cutoff(), g.lambda_cutoff())?.sub(g)?;
        let first = diff.terms().next().map(|(m, _)| m.to_key()).unwrap_or_default();
        return Err(Error::Residual { count: residual.nonzero, first });
    }
    Ok(Recovery { series, residual })
}

/// Compares `expand(series)` with `g` coefficient by coefficient.
pub fn residual(series: &DonaldsonSeries, g: &TruncSeries) -> Result<ResidualReport> {
    let e = series.expand(g.cutoff(), g.lambda_cutoff())?;
    let diff = e.sub(g)?;
    let rank = series.rank();
    let positions = Monomial::up_to_degree(rank, g.cutoff()).len() * (g.lambda_cutoff() as usize + 1);
    Ok(ResidualReport { checked: positions, nonzero: diff.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(s: &str) -> Gr {
        s.parse().unwrap()
    }

    fn one_var(name: &str, coeffs: &[Gr]) -> TruncSeries {
        let vars = Vars::new(&[name]);
        TruncSeries::from_terms(
            vars,
            coeffs.len() as u32 - 1,
            0,
            coeffs.iter().enumerate().map(|(k, c)| (Monomial::from_exponents(&[k as u32]), c.clone())),
        )
    }

    /// Taylor coefficients of `Σ_j P_j(s) e^{μ_j s}` through `s^depth`.
    fn sample(parts: &[(Gr, Vec<Gr>)], depth: u32) -> Vec<Gr> {
        (0..=depth)
            .map(|k| {
                let mut acc = Gr::zero();
                for (mu, p) in parts {
                    for (m, c) in p.iter().enumerate() {
                        acc += &(c * &confluent_entry(mu, k, m as u32));
                    }
                }
                acc
            })
            .collect()
    }

    fn constant_samples(xs: &[Gr]) -> Vec<MultiPoly> {
        let v = Vars::new::<&str>(&[]);
        xs.iter().map(|x| MultiPoly::constant(v.clone(), x.clone())).collect()
    }

    fn constants(ps: &[MultiPoly]) -> Vec<Gr> {
        ps.iter().map(|p| p.constant_term()).collect()
    }

    #[test]
    fn fit_cosh() {
        let f = sample(&[(gr("2"), vec![gr("1")]), (gr("-2"), vec![gr("1")])], 5);
        let prob = FitProblem::new(constant_samples(&f), vec![(gr("-2"), 2), (gr("0"), 2), (gr("2"), 2)]).unwrap();
        let p = fit_exponential_sum(&prob).unwrap();
        assert_eq!(constants(&p[0]), vec![gr("1"), gr("0")]);
        assert_eq!(constants(&p[1]), vec![gr("0"), gr("0")]);
        assert_eq!(constants(&p[2]), vec![gr("1"), gr("0")]);
    }

    #[test]
    fn fit_confluent_imaginary() {
        let f = sample(&[(gr("2*i"), vec![gr("0"), gr("1")])], 3);
        let prob = FitProblem::new(constant_samples(&f), vec![(gr("2*i"), 2)]).unwrap();
        let p = fit_exponential_sum(&prob).unwrap();
        assert_eq!(constants(&p[0]), vec![gr("0"), gr("1")]);
    }

    #[test]
    fn fit_reports_first_inconsistent_coefficient() {
        let f = sample(&[(gr("1"), vec![gr("1")])], 4);
        let prob = FitProblem::new(constant_samples(&f), vec![(gr("0"), 1)]).unwrap();
        assert!(matches!(fit_exponential_sum(&prob), Err(Error::Inconsistent { index: 1 })));
    }

    #[test]
    fn fit_residual_covers_every_row() {
        // consistent on the first rows, broken only in the last one
        let mut f = sample(&[(gr("3"), vec![gr("2"), gr("-1")])], 9);
        f[9] = &f[9] + &gr("1/1000");
        let prob = FitProblem::new(constant_samples(&f), vec![(gr("3"), 2)]).unwrap();
        assert!(matches!(fit_exponential_sum(&prob), Err(Error::Inconsistent { index: 9 })));
    }

    #[test]
    fn detect_examples() {
        let f = one_var("s", &sample(&[(gr("2"), vec![gr("1")]), (gr("-2"), vec![gr("1")])], 8));
        let mut got = detect_frequencies(&f, 3).unwrap();
        got.sort_by_key(|(m, _)| m.to_string());
        assert_eq!(got, vec![(gr("-2"), 1), (gr("2"), 1)]);

        let f = one_var("s", &[gr("1"), gr("1"), gr("0"), gr("0"), gr("0"), gr("0")]);
        assert_eq!(detect_frequencies(&f, 2).unwrap(), vec![(gr("0"), 2)]);

        let f = one_var("s", &sample(&[(gr("1+2*i"), vec![gr("1"), gr("3")]), (gr("-3*i"), vec![gr("5")])], 10));
        let mut got = detect_frequencies(&f, 3).unwrap();
        got.sort_by_key(|(m, _)| m.to_string());
        assert_eq!(got, vec![(gr("-3*i"), 1), (gr("1+2*i"), 2)]);
    }

    #[test]
    fn detect_rejects_off_grid_and_short_data() {
        let f = one_var("s", &sample(&[(gr("3/2"), vec![gr("1")])], 6));
        assert!(matches!(detect_frequencies(&f, 4), Err(Error::FrequencyOutsideGrid(_))));
        let f =
            one_var("s", &sample(&[(gr("1"), vec![gr("1")]), (gr("2"), vec![gr("1")]), (gr("3"), vec![gr("1")])], 3));
        assert!(matches!(detect_frequencies(&f, 4), Err(Error::InsufficientDepth(_))));
    }

    #[test]
    fn detect_is_odd_under_reflection() {
        let parts = [(gr("2"), vec![gr("1"), gr("1")]), (gr("-1*i"), vec![gr("3")])];
        let f = sample(&parts, 10);
        let reflected: Vec<Gr> = f.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect();
        let mut a = detect_frequencies(&one_var("s", &f), 3).unwrap();
        let mut b: Vec<(Gr, u32)> =
            detect_frequencies(&one_var("s", &reflected), 3).unwrap().into_iter().map(|(m, n)| (-m, n)).collect();
        a.sort_by_key(|(m, _)| m.to_string());
        b.sort_by_key(|(m, _)| m.to_string());
        assert_eq!(a, b);
    }

    fn round_trip(gram: Vec<Vec<i64>>, terms: Vec<(Sector, Vec<i64>, Vec<(Vec<u32>, &str)>)>, cutoff: u32, lcut: u32) {
        let rank = gram.len();
        let m = ManifoldData::new("X", Lattice::with_gram(gram).unwrap(), 0, 3).unwrap();
        let terms = terms.into_iter().map(|(s, k, p)| {
            let p =
                MultiPoly::from_terms(Vars::series(rank), p.iter().map(|(e, c)| (Monomial::from_exponents(e), gr(c))));
            crate::series::SeriesTerm::new(s, CohClass::new(k), p)
        });
        let s =
            DonaldsonSeries::new(m.clone(), CohClass::zero(rank), OneCycleWord::empty(), terms, SeriesFlags::default())
                .unwrap()
                .canonicalize();
        let g = s.expand(cutoff, lcut).unwrap();
        let bounds = default_bounds(&m.lattice, 3);
        let r = recover_structure(&g, m, CohClass::zero(rank), OneCycleWord::empty(), &bounds).unwrap();
        assert_eq!(r.series, s);
        assert_eq!(r.residual.nonzero, 0);
        assert!(r.residual.checked > 0);
    }

    #[test]
    fn recovers_symmetric_pair() {
        round_trip(
            vec![vec![1, 0], vec![0, -1]],
            vec![
                (Sector::Plus, vec![1, 1], vec![(vec![0, 0, 0], "3")]),
                (Sector::Plus, vec![-1, 1], vec![(vec![0, 0, 0], "-1/2")]),
                (Sector::Minus, vec![1, 1], vec![(vec![0, 0, 0], "5*i")]),
            ],
            12,
            5,
        );
    }

    #[test]
    fn recovers_polynomial_coefficients_with_lambda() {
        round_trip(
            vec![vec![2, 1], vec![1, -2]],
            vec![
                (Sector::Plus, vec![1, 0], vec![(vec![1, 0, 0], "1"), (vec![0, 0, 1], "2")]),
                (Sector::Plus, vec![-1, 1], vec![(vec![0, 0, 0], "7")]),
                (Sector::Minus, vec![0, 1], vec![(vec![0, 1, 0], "1+1*i")]),
            ],
            12,
            5,
        );
    }

    #[test]
    fn zero_series_recovers_to_zero() {
        round_trip(vec![vec![-1]], vec![], 6, 3);
    }
}
