//! Insertions of point and surface classes into a structured series.
//!
//! Every operator here acts term by term: on a Plus term the point class is
//! `∂λ` conjugated by `e^{2λ}`, i.e. `p ↦ 2p + ∂λ p`, and a surface class `v`
//! is the directional derivative conjugated by `e^{Q/2 + K·t}`. The *reduced*
//! surface insertion additionally conjugates away the `Q(t, v)` cross term,
//! which makes `(D_j − β)` exactly nilpotent on the class with `K·e_j = β`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{GaussianRational, Monomial, MultiPoly, Vars};
use crate::error::{Error, Result};
use crate::lattice::{CohClass, Lattice};
use crate::series::{DonaldsonSeries, Sector, SeriesFlags};

type Gr = GaussianRational;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SurfaceMode {
    Raw,
    Reduced,
}

impl SurfaceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceMode::Raw => "raw",
            SurfaceMode::Reduced => "reduced",
        }
    }
}

impl std::str::FromStr for SurfaceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(SurfaceMode::Raw),
            "reduced" => Ok(SurfaceMode::Reduced),
            _ => Err(Error::Parse(format!("unknown surface mode {s:?}"))),
        }
    }
}

/// One factor `(x − c)^power` or `(v − c)^power`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Factor {
    Point { c: Gr, power: u32 },
    Surface { v: CohClass, c: Gr, mode: SurfaceMode, power: u32 },
}

impl Factor {
    pub fn point(c: Gr, power: u32) -> Self {
        Factor::Point { c, power }
    }

    pub fn reduced(v: CohClass, c: Gr, power: u32) -> Self {
        Factor::Surface { v, c, mode: SurfaceMode::Reduced, power }
    }

    pub fn power(&self) -> u32 {
        match self {
            Factor::Point { power, .. } | Factor::Surface { power, .. } => *power,
        }
    }
}

/// An element of the even part of the insertion algebra, written as a scaled
/// product of shifted point and surface classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvenElement {
    pub factors: Vec<Factor>,
    pub scale: Gr,
}

impl EvenElement {
    pub fn identity() -> Self {
        EvenElement { factors: Vec::new(), scale: Gr::one() }
    }

    pub fn new(factors: Vec<Factor>, scale: Gr) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::InvalidInput("even element has zero scale".into()));
        }
        Ok(EvenElement { factors, scale })
    }
}

/// `Q(t·, v) = Σ_j t_j (e_j·v)` as a polynomial in the series variables.
fn q_linear(l: &Lattice, v: &CohClass, vars: &Vars) -> Result<MultiPoly> {
    let n = l.rank();
    let mut out = MultiPoly::zero(vars.clone());
    for (j, c) in l.pairings_with_basis(v)?.into_iter().enumerate() {
        if c != 0 {
            out.add_term(Monomial::var(n + 1, j), Gr::from_int(c));
        }
    }
    Ok(out)
}

/// `2p + ∂λ p` (Plus) or `−2q + ∂λ q` (Minus), minus `c·p`.
fn point_once(sector: Sector, p: &MultiPoly, c: &Gr) -> MultiPoly {
    let lam = p.nvars() - 1;
    let eig = &Gr::from_int(2 * sector.sign()) - c;
    &p.scale(&eig) + &p.partial(lam)
}

struct SurfaceCtx {
    vcoords: Vec<i64>,
    q: MultiPoly,
}

fn surface_once(sector: Sector, kv: i64, ctx: &SurfaceCtx, mode: SurfaceMode, p: &MultiPoly, c: &Gr) -> MultiPoly {
    let eig = match sector {
        Sector::Plus => Gr::from_int(kv),
        Sector::Minus => Gr::i().scale_int(kv),
    };
    let mut out = &p.scale(&(&eig - c)) + &p.directional(&ctx.vcoords);
    if mode == SurfaceMode::Raw {
        let cross = &ctx.q * p;
        out = match sector {
            Sector::Plus => &out + &cross,
            Sector::Minus => &out - &cross,
        };
    }
    out
}

fn derived_flags(s: &DonaldsonSeries, terms: &BTreeMap<(Sector, CohClass), MultiPoly>) -> SeriesFlags {
    SeriesFlags {
        characteristic: s.flags().characteristic,
        symmetric: false,
        sst: s.flags().sst && terms.values().all(|p| p.as_constant().is_some()),
    }
}

fn map_terms<F>(s: &DonaldsonSeries, mut f: F) -> Result<DonaldsonSeries>
where
    F: FnMut(Sector, &CohClass, &MultiPoly) -> Result<MultiPoly>,
{
    let mut terms = BTreeMap::new();
    for (sector, k, p) in s.terms() {
        let q = f(sector, k, p)?;
        if !q.is_zero() {
            terms.insert((sector, k.clone()), q);
        }
    }
    let flags = derived_flags(s, &terms);
    s.rebuild(terms, flags)
}

pub fn insert_point(s: &DonaldsonSeries) -> Result<DonaldsonSeries> {
    map_terms(s, |sector, _, p| Ok(point_once(sector, p, &Gr::zero())))
}

pub fn insert_surface(s: &DonaldsonSeries, v: &CohClass, mode: SurfaceMode) -> Result<DonaldsonSeries> {
    let l = &s.manifold().lattice;
    let ctx = SurfaceCtx { vcoords: v.coords().to_vec(), q: q_linear(l, v, &s.vars())? };
    map_terms(s, |sector, k, p| {
        let kv = l.pairing(k, v)?;
        Ok(surface_once(sector, kv, &ctx, mode, p, &Gr::zero()))
    })
}

/// `(x² − 4)` applied once.
pub fn simple_type_operator(s: &DonaldsonSeries) -> Result<DonaldsonSeries> {
    let xx = insert_point(&insert_point(s)?)?;
    let mut terms: BTreeMap<(Sector, CohClass), MultiPoly> =
        xx.terms().map(|(sec, k, p)| ((sec, k.clone()), p.clone())).collect();
    let four = Gr::from_int(4);
    for (sector, k, p) in s.terms() {
        let e = terms.entry((sector, k.clone())).or_insert_with(|| MultiPoly::zero(p.vars().clone()));
        *e = &*e - &p.scale(&four);
    }
    let flags = derived_flags(s, &terms);
    s.rebuild(terms, flags)
}

/// `1 + max λ-degree`, or 0 for the zero series.
pub fn finite_type_order_closed_form(s: &DonaldsonSeries) -> u32 {
    let lam = s.rank();
    s.terms().map(|(_, _, p)| p.degree_in(lam).unwrap_or(0) + 1).max().unwrap_or(0)
}

/// Least `n` with `(x² − 4)^n S = 0`, found by applying the operator.
pub fn finite_type_order(s: &DonaldsonSeries) -> Result<u32> {
    let bound = finite_type_order_closed_form(s);
    let mut cur = s.clone();
    let mut n = 0;
    while !cur.is_zero() {
        if n > bound {
            return Err(Error::InvariantViolation("(x² − 4) failed to lower the λ-degree".into()));
        }
        cur = simple_type_operator(&cur)?;
        n += 1;
    }
    if n != bound {
        return Err(Error::InvariantViolation(format!("operator order {n} disagrees with closed form {bound}")));
    }
    Ok(n)
}

/// Order at most one, and the one-cycle word either empty or covered by the
/// manifold's strong-simple-type flag.
pub fn is_sst_shape(s: &DonaldsonSeries) -> Result<bool> {
    Ok(finite_type_order(s)? <= 1 && (s.zword().is_empty() || s.manifold().sst))
}

pub fn apply_even(s: &DonaldsonSeries, e: &EvenElement) -> Result<DonaldsonSeries> {
    let l = &s.manifold().lattice;
    let vars = s.vars();
    let mut ctxs = Vec::with_capacity(e.factors.len());
    for f in &e.factors {
        ctxs.push(match f {
            Factor::Surface { v, .. } => {
                if v.rank() != s.rank() {
                    return Err(Error::RankMismatch { expected: s.rank(), got: v.rank() });
                }
                Some(SurfaceCtx { vcoords: v.coords().to_vec(), q: q_linear(l, v, &vars)? })
            }
            Factor::Point { .. } => None,
        });
    }
    map_terms(s, |sector, k, p| {
        let mut cur = p.clone();
        for (f, ctx) in e.factors.iter().zip(&ctxs) {
            match f {
                Factor::Point { c, power } => {
                    for _ in 0..*power {
                        cur = point_once(sector, &cur, c);
                    }
                }
                Factor::Surface { v, c, mode, power } => {
                    let kv = l.pairing(k, v)?;
                    let ctx = ctx.as_ref().expect("surface context");
                    for _ in 0..*power {
                        cur = surface_once(sector, kv, ctx, *mode, &cur, c);
                    }
                }
            }
            if cur.is_zero() {
                break;
            }
        }
        Ok(cur.scale(&e.scale))
    })
}

/// An even element sending `S` to the single term `(Plus, K, 1)`.
pub fn isolating_element(s: &DonaldsonSeries, k: &CohClass) -> Result<EvenElement> {
    let l = &s.manifold().lattice;
    let rank = s.rank();
    if k.rank() != rank {
        return Err(Error::RankMismatch { expected: rank, got: k.rank() });
    }
    if s.poly(Sector::Plus, k).is_none() {
        return Err(Error::NotBasicClass(k.coords().to_vec()));
    }
    let n = 1 + s.terms().map(|(_, _, p)| p.degree().unwrap_or(0)).max().unwrap_or(0);
    let target = l.pairings_with_basis(k)?;

    let mut factors = Vec::new();
    for (j, &kj) in target.iter().enumerate() {
        let mut betas: Vec<i64> = s
            .sector_terms(Sector::Plus)
            .filter(|(other, _)| *other != k)
            .map(|(other, _)| l.pairings_with_basis(other).map(|f| f[j]))
            .collect::<Result<_>>()?;
        betas.retain(|b| *b != kj);
        betas.sort_unstable();
        betas.dedup();
        for b in betas {
            factors.push(Factor::reduced(CohClass::basis(rank, j), Gr::from_int(b), n));
        }
    }
    if s.sector_terms(Sector::Minus).next().is_some() {
        factors.push(Factor::point(Gr::from_int(-2), n));
    }

    let separated = apply_even(s, &EvenElement { factors: factors.clone(), scale: Gr::one() })?;
    let single: Vec<_> = separated.terms().collect();
    let p = match single.as_slice() {
        [(Sector::Plus, kk, p)] if *kk == k => (*p).clone(),
        _ => {
            return Err(Error::Isolation(
                k.coords().to_vec(),
                format!("{} terms survive the separating shifts", single.len()),
            ))
        }
    };

    // Differentiate away the top monomial; nothing else survives.
    let (top, _) = p.terms().last().expect("nonzero polynomial");
    let top = top.clone();
    for (j, &kj) in target.iter().enumerate() {
        let a = top.exp(j);
        if a > 0 {
            factors.push(Factor::reduced(CohClass::basis(rank, j), Gr::from_int(kj), a));
        }
    }
    let b = top.exp(rank);
    if b > 0 {
        factors.push(Factor::point(Gr::from_int(2), b));
    }
    let reduced = apply_even(s, &EvenElement { factors: factors.clone(), scale: Gr::one() })?;
    let c = reduced
        .poly(Sector::Plus, k)
        .and_then(|p| p.as_constant())
        .filter(|_| reduced.terms().count() == 1)
        .ok_or_else(|| Error::Isolation(k.coords().to_vec(), "normalization left a non-constant".into()))?;
    let scale = c.inv().expect("nonzero constant");
    let e = EvenElement::new(factors, scale)?;

    let check = apply_even(s, &e)?;
    let ok = check.terms().count() == 1 && check.poly(Sector::Plus, k).and_then(|p| p.as_constant()) == Some(Gr::one());
    if !ok {
        return Err(Error::Isolation(k.coords().to_vec(), "verification failed".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ManifoldData;
    use crate::series::{OneCycleWord, SeriesTerm};

    fn gr(s: &str) -> Gr {
        s.parse().unwrap()
    }

    fn poly(rank: usize, terms: &[(&[u32], &str)]) -> MultiPoly {
        MultiPoly::from_terms(Vars::series(rank), terms.iter().map(|(e, c)| (Monomial::from_exponents(e), gr(c))))
    }

    fn series(gram: Vec<Vec<i64>>, terms: Vec<(Sector, Vec<i64>, MultiPoly)>) -> DonaldsonSeries {
        let rank = gram.len();
        let m = ManifoldData::new("t", Lattice::with_gram(gram).unwrap(), 0, 3).unwrap();
        DonaldsonSeries::new(
            m,
            CohClass::zero(rank),
            OneCycleWord::empty(),
            terms.into_iter().map(|(s, k, p)| SeriesTerm::new(s, CohClass::new(k), p)),
            SeriesFlags::default(),
        )
        .unwrap()
    }

    fn only(s: &DonaldsonSeries) -> MultiPoly {
        let t: Vec<_> = s.terms().collect();
        assert_eq!(t.len(), 1);
        t[0].2.clone()
    }

    #[test]
    fn point_insertion_examples() {
        let s = series(vec![vec![1]], vec![(Sector::Plus, vec![1], poly(1, &[(&[0, 0], "1")]))]);
        assert_eq!(only(&insert_point(&s).unwrap()), poly(1, &[(&[0, 0], "2")]));
        let s = series(vec![vec![1]], vec![(Sector::Plus, vec![1], poly(1, &[(&[0, 1], "1")]))]);
        assert_eq!(only(&insert_point(&s).unwrap()), poly(1, &[(&[0, 1], "2"), (&[0, 0], "1")]));
        let s = series(vec![vec![1]], vec![(Sector::Minus, vec![1], poly(1, &[(&[0, 0], "1")]))]);
        assert_eq!(only(&insert_point(&s).unwrap()), poly(1, &[(&[0, 0], "-2")]));
    }

    #[test]
    fn surface_insertion_examples() {
        // gram [2], K = (3): Q(t, e1) = 2 t1 and K·e1 = 6
        let v = CohClass::new(vec![1]);
        let s = series(vec![vec![2]], vec![(Sector::Plus, vec![3], poly(1, &[(&[0, 0], "1")]))]);
        assert_eq!(
            only(&insert_surface(&s, &v, SurfaceMode::Raw).unwrap()),
            poly(1, &[(&[1, 0], "2"), (&[0, 0], "6")])
        );
        assert_eq!(only(&insert_surface(&s, &v, SurfaceMode::Reduced).unwrap()), poly(1, &[(&[0, 0], "6")]));
        let s = series(vec![vec![2]], vec![(Sector::Minus, vec![3], poly(1, &[(&[0, 0], "1")]))]);
        assert_eq!(
            only(&insert_surface(&s, &v, SurfaceMode::Raw).unwrap()),
            poly(1, &[(&[1, 0], "-2"), (&[0, 0], "6*i")])
        );
    }

    #[test]
    fn finite_type_order_examples() {
        let zero = series(vec![vec![1]], vec![]);
        assert_eq!(finite_type_order(&zero).unwrap(), 0);
        assert!(is_sst_shape(&zero).unwrap());
        let sst = series(
            vec![vec![1]],
            vec![
                (Sector::Plus, vec![1], poly(1, &[(&[0, 0], "1")])),
                (Sector::Minus, vec![1], poly(1, &[(&[0, 0], "-1")])),
            ],
        );
        assert_eq!(finite_type_order(&sst).unwrap(), 1);
        assert!(is_sst_shape(&sst).unwrap());
        let l2 = series(vec![vec![1]], vec![(Sector::Plus, vec![1], poly(1, &[(&[0, 2], "1")]))]);
        assert_eq!(finite_type_order(&l2).unwrap(), 3);
        let l1 = series(vec![vec![1]], vec![(Sector::Plus, vec![1], poly(1, &[(&[0, 1], "1")]))]);
        assert!(!is_sst_shape(&l1).unwrap());
    }

    #[test]
    fn even_element_examples() {
        let s = series(
            vec![vec![1]],
            vec![
                (Sector::Plus, vec![1], poly(1, &[(&[0, 0], "1")])),
                (Sector::Minus, vec![1], poly(1, &[(&[0, 0], "1")])),
            ],
        );
        assert_eq!(apply_even(&s, &EvenElement::identity()).unwrap(), s);
        let kill_plus = EvenElement::new(vec![Factor::point(gr("2"), 1)], Gr::one()).unwrap();
        let r = apply_even(&s, &kill_plus).unwrap();
        assert_eq!(r.terms().map(|(sec, _, _)| sec).collect::<Vec<_>>(), vec![Sector::Minus]);
        let kill_minus = EvenElement::new(vec![Factor::point(gr("-2"), 1)], Gr::one()).unwrap();
        let r = apply_even(&s, &kill_minus).unwrap();
        assert_eq!(r.terms().map(|(sec, _, _)| sec).collect::<Vec<_>>(), vec![Sector::Plus]);
    }

    #[test]
    fn isolation_examples() {
        // K1·e1 = 2, K2·e1 = 0 on gram diag(1, -1): K1 = (2, 0), K2 = (0, 1)
        let s = series(
            vec![vec![1, 0], vec![0, -1]],
            vec![
                (Sector::Plus, vec![2, 0], poly(2, &[(&[0, 0, 0], "3")])),
                (Sector::Plus, vec![0, 1], poly(2, &[(&[0, 0, 0], "5")])),
                (Sector::Minus, vec![2, 0], poly(2, &[(&[0, 0, 0], "1")])),
            ],
        );
        let k1 = CohClass::new(vec![2, 0]);
        let e = isolating_element(&s, &k1).unwrap();
        assert!(e.factors.contains(&Factor::reduced(CohClass::basis(2, 0), gr("0"), 1)));
        assert!(e.factors.contains(&Factor::point(gr("-2"), 1)));
        // (D1 - 0) contributes 2, (x + 2) contributes 4 on the Plus term
        assert_eq!(e.scale, gr("1/24"));
        let r = apply_even(&s, &e).unwrap();
        assert_eq!(only(&r), MultiPoly::one(Vars::series(2)));
        assert!(isolating_element(&s, &CohClass::new(vec![1, 1])).is_err());

        let single = series(vec![vec![1]], vec![(Sector::Plus, vec![1], poly(1, &[(&[0, 0], "7")]))]);
        let e = isolating_element(&single, &CohClass::new(vec![1])).unwrap();
        assert!(e.factors.is_empty());
        assert_eq!(e.scale, gr("1/7"));
    }

    #[test]
    fn isolation_with_polynomial_coefficients() {
        let s = series(
            vec![vec![1, 0], vec![0, -1]],
            vec![
                (Sector::Plus, vec![1, 1], poly(2, &[(&[1, 0, 0], "1"), (&[0, 0, 1], "2")])),
                (Sector::Plus, vec![-1, -1], poly(2, &[(&[1, 0, 0], "1"), (&[0, 0, 1], "-2")])),
                (Sector::Minus, vec![1, 1], poly(2, &[(&[0, 1, 0], "1*i"), (&[0, 0, 0], "1")])),
            ],
        );
        for k in [vec![1, 1], vec![-1, -1]] {
            let k = CohClass::new(k);
            let r = apply_even(&s, &isolating_element(&s, &k).unwrap()).unwrap();
            assert_eq!(r.poly(Sector::Plus, &k), Some(&MultiPoly::one(Vars::series(2))));
            assert_eq!(r.terms().count(), 1);
        }
    }
}
