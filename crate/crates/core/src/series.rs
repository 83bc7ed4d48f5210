//! The two-sector structured Donaldson series.
//!
//! A Plus term `(K, p)` stands for `e^{Q(t)/2 + 2λ} p(t, λ) e^{K·t}` and a Minus
//! term `(K, q)` for `e^{-Q(t)/2 - 2λ} q(t, λ) e^{i K·t}`, where `t` are the
//! coordinates of `D = Σ t_j e_j` in the lattice basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{GaussianRational, Monomial, MultiPoly, TruncSeries, Vars, LAMBDA};
use crate::error::{Error, Result};
use crate::lattice::{self, CohClass, DimensionData, ManifoldData};

type Gr = GaussianRational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sector {
    Plus,
    Minus,
}

impl Sector {
    pub fn as_str(self) -> &'static str {
        match self {
            Sector::Plus => "plus",
            Sector::Minus => "minus",
        }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        match self {
            Sector::Plus => 1,
            Sector::Minus => -1,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(Sector::Plus),
            "minus" => Ok(Sector::Minus),
            _ => Err(Error::Parse(format!("unknown sector {s:?}"))),
        }
    }
}

/// Labels of the `H_1` classes multiplied into `z`; each has degree 3.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OneCycleWord {
    labels: Vec<String>,
    deg2z: i64,
}

impl OneCycleWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidInput(format!("duplicate cycle label {l:?}")));
            }
        }
        let deg2z = 3 * labels.len() as i64;
        Ok(OneCycleWord { labels, deg2z })
    }

    /// Checks the stored degree against the labels.
    pub fn from_parts(labels: Vec<String>, deg2z: i64) -> Result<Self> {
        let w = Self::new(labels)?;
        if w.deg2z != deg2z {
            return Err(Error::InvalidInput(format!(
                "deg2z = {deg2z} but {} one-cycles have degree {}",
                w.labels.len(),
                w.deg2z
            )));
        }
        Ok(w)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `deg(z) = 2d`.
    pub fn deg2z(&self) -> i64 {
        self.deg2z
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn with_cycle(&self, label: &str) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        Self::new(labels)
    }
}

/// Structural claims a series makes about itself; each is verified on
/// construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SeriesFlags {
    /// Every class is characteristic.
    pub characteristic: bool,
    /// The Minus sector is the symmetrize image of the Plus sector.
    pub symmetric: bool,
    /// Every polynomial is a constant.
    pub sst: bool,
}

/// One term of a series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesTerm {
    pub sector: Sector,
    pub class: CohClass,
    pub poly: MultiPoly,
}

impl SeriesTerm {
    pub fn new(sector: Sector, class: CohClass, poly: MultiPoly) -> Self {
        SeriesTerm { sector, class, poly }
    }
}

pub type TermMap = BTreeMap<(Sector, CohClass), MultiPoly>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DonaldsonSeries {
    manifold: ManifoldData,
    w: CohClass,
    zword: OneCycleWord,
    terms: TermMap,
    flags: SeriesFlags,
}

impl DonaldsonSeries {
    /// Builds and validates a series. Zero polynomials are dropped; a repeated
    /// `(sector, K)` is an error.
    pub fn new(
        manifold: ManifoldData,
        w: CohClass,
        zword: OneCycleWord,
        terms: impl IntoIterator<Item = SeriesTerm>,
        flags: SeriesFlags,
    ) -> Result<Self> {
        let rank = manifold.rank();
        if w.rank() != rank {
            return Err(Error::RankMismatch { expected: rank, got: w.rank() });
        }
        let vars = Vars::series(rank);
        let mut map = TermMap::new();
        for t in terms {
            if t.class.rank() != rank {
                return Err(Error::RankMismatch { expected: rank, got: t.class.rank() });
            }
            t.poly.vars().check_same(&vars)?;
            if map.contains_key(&(t.sector, t.class.clone())) {
                return Err(Error::InvalidInput(format!("duplicate {} term for class {:?}", t.sector, t.class)));
            }
            if !t.poly.is_zero() {
                map.insert((t.sector, t.class), t.poly);
            }
        }
        let s = DonaldsonSeries { manifold, w, zword, terms: map, flags };
        s.validate()?;
        Ok(s)
    }

    pub fn zero(manifold: ManifoldData, w: CohClass, zword: OneCycleWord) -> Result<Self> {
        let flags = SeriesFlags { characteristic: true, symmetric: true, sst: true };
        Self::new(manifold, w, zword, Vec::new(), flags)
    }

    /// Same data, new terms and flags (re-validated).
    pub(crate) fn rebuild(&self, terms: TermMap, flags: SeriesFlags) -> Result<Self> {
        Self::from_map(self.manifold.clone(), self.w.clone(), self.zword.clone(), terms, flags)
    }

    pub fn from_map(
        manifold: ManifoldData,
        w: CohClass,
        zword: OneCycleWord,
        terms: TermMap,
        flags: SeriesFlags,
    ) -> Result<Self> {
        let terms = terms.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let s = DonaldsonSeries { manifold, w, zword, terms, flags };
        s.validate()?;
        Ok(s)
    }

    /// Same series with every flag that its terms actually satisfy.
    pub fn canonicalize(&self) -> DonaldsonSeries {
        let l = &self.manifold.lattice;
        let characteristic = self.terms.keys().all(|(_, k)| l.is_characteristic(k).unwrap_or(false));
        let sst = self.terms.values().all(|p| p.as_constant().is_some());
        let minus: BTreeMap<CohClass, MultiPoly> =
            self.sector_terms(Sector::Minus).map(|(k, p)| (k.clone(), p.clone())).collect();
        let symmetric = self.minus_from_plus().map(|img| img == minus).unwrap_or(false);
        let mut out = self.clone();
        out.flags = SeriesFlags { characteristic, symmetric, sst };
        out
    }

    fn validate(&self) -> Result<()> {
        let l = &self.manifold.lattice;
        if self.flags.characteristic {
            for (_, k) in self.terms.keys() {
                if !l.is_characteristic(k)? {
                    return Err(Error::InvariantViolation(format!("class {k:?} is not characteristic")));
                }
            }
        }
        if self.flags.sst {
            for ((s, k), p) in &self.terms {
                if p.as_constant().is_none() {
                    return Err(Error::InvariantViolation(format!(
                        "{s} term {k:?} is not constant but sst is claimed"
                    )));
                }
            }
        }
        if self.flags.symmetric {
            let image = self.minus_from_plus()?;
            let minus: BTreeMap<CohClass, MultiPoly> = self
                .terms
                .iter()
                .filter(|((s, _), _)| *s == Sector::Minus)
                .map(|((_, k), p)| (k.clone(), p.clone()))
                .collect();
            if image != minus {
                return Err(Error::InvariantViolation(
                    "Minus sector is not the symmetrize image of the Plus sector".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn manifold(&self) -> &ManifoldData {
        &self.manifold
    }

    pub fn w(&self) -> &CohClass {
        &self.w
    }

    pub fn zword(&self) -> &OneCycleWord {
        &self.zword
    }

    pub fn flags(&self) -> SeriesFlags {
        self.flags
    }

    pub fn rank(&self) -> usize {
        self.manifold.rank()
    }

    /// `t1, …, tn, lambda`.
    pub fn vars(&self) -> Vars {
        Vars::series(self.rank())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All terms in canonical order: Plus before Minus, classes ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Sector, &CohClass, &MultiPoly)> {
        self.terms.iter().map(|((s, k), p)| (*s, k, p))
    }

    pub fn sector_terms(&self, sector: Sector) -> impl Iterator<Item = (&CohClass, &MultiPoly)> {
        self.terms.iter().filter(move |((s, _), _)| *s == sector).map(|((_, k), p)| (k, p))
    }

    pub fn poly(&self, sector: Sector, k: &CohClass) -> Option<&MultiPoly> {
        self.terms.get(&(sector, k.clone()))
    }

    pub fn dimension(&self) -> Result<DimensionData> {
        lattice::d0_mod4(&self.manifold, &self.w, self.zword.deg2z())
    }

    /// Term-wise sum of two series over the same manifold, `w` and `z`.
    /// The result makes no structural claims.
    pub fn union(&self, other: &DonaldsonSeries) -> Result<DonaldsonSeries> {
        if self.manifold != other.manifold || self.w != other.w || self.zword != other.zword {
            return Err(Error::InvalidInput("series live over different data".into()));
        }
        let mut terms = self.terms.clone();
        for (key, p) in &other.terms {
            let e = terms.entry(key.clone()).or_insert_with(|| MultiPoly::zero(p.vars().clone()));
            *e = &*e + p;
        }
        self.rebuild(terms, SeriesFlags::default())
    }

    /// Exact truncated expansion in `t1…tn, λ`.
    pub fn expand(&self, cutoff: u32, lambda_cutoff: u32) -> Result<TruncSeries> {
        let dirs: Vec<CohClass> = (0..self.rank()).map(|j| CohClass::basis(self.rank(), j)).collect();
        let names: Vec<String> = (1..=self.rank()).map(|j| format!("t{j}")).collect();
        self.expand_along(&dirs, &names, cutoff, lambda_cutoff, None)
    }

    /// Expansion of one sector only.
    pub fn expand_sector(&self, sector: Sector, cutoff: u32, lambda_cutoff: u32) -> Result<TruncSeries> {
        let dirs: Vec<CohClass> = (0..self.rank()).map(|j| CohClass::basis(self.rank(), j)).collect();
        let names: Vec<String> = (1..=self.rank()).map(|j| format!("t{j}")).collect();
        self.expand_along(&dirs, &names, cutoff, lambda_cutoff, Some(sector))
    }

    /// Expansion of the series restricted to `D = Σ_k u_k dirs[k]`, in the
    /// variables `names…, lambda`.
    pub fn expand_along(
        &self,
        dirs: &[CohClass],
        names: &[String],
        cutoff: u32,
        lambda_cutoff: u32,
        only: Option<Sector>,
    ) -> Result<TruncSeries> {
        assert_eq!(dirs.len(), names.len());
        let l = &self.manifold.lattice;
        for d in dirs {
            if d.rank() != self.rank() {
                return Err(Error::RankMismatch { expected: self.rank(), got: d.rank() });
            }
        }
        let mut all: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        all.push(LAMBDA);
        let target = Vars::new(&all);
        let m = dirs.len();

        let mut quad = MultiPoly::zero(target.clone());
        for a in 0..m {
            for b in 0..m {
                let q = l.pairing(&dirs[a], &dirs[b])?;
                if q != 0 {
                    let mut mono = Monomial::one(m + 1);
                    mono.set_exp(a, mono.exp(a) + 1);
                    mono.set_exp(b, mono.exp(b) + 1);
                    quad.add_term(mono, Gr::frac(q, 2));
                }
            }
        }

        // images of t_j, then λ
        let rank = self.rank();
        let mut images: Vec<MultiPoly> = (0..rank)
            .map(|j| {
                let mut p = MultiPoly::zero(target.clone());
                for (k, d) in dirs.iter().enumerate() {
                    if d.coords()[j] != 0 {
                        p.add_term(Monomial::var(m + 1, k), Gr::from_int(d.coords()[j]));
                    }
                }
                p
            })
            .collect();
        images.push(MultiPoly::var(target.clone(), m));
        let identity = m == rank && dirs.iter().enumerate().all(|(k, d)| *d == CohClass::basis(rank, k));

        let lambda_exp = |sector: Sector| -> Result<TruncSeries> {
            let p = MultiPoly::var(target.clone(), m).scale(&Gr::from_int(2 * sector.sign()));
            TruncSeries::exp(&p, cutoff, lambda_cutoff)
        };
        let lam_plus = lambda_exp(Sector::Plus)?;
        let lam_minus = lambda_exp(Sector::Minus)?;

        let work: Vec<(&(Sector, CohClass), &MultiPoly)> =
            self.terms.iter().filter(|((s, _), _)| only.map(|o| o == *s).unwrap_or(true)).collect();
        let parts: Vec<Result<TruncSeries>> = work
            .par_iter()
            .map(|&((sector, k), p)| {
                let sign = Gr::from_int(sector.sign());
                let unit = match sector {
                    Sector::Plus => Gr::one(),
                    Sector::Minus => Gr::i(),
                };
                let mut g = quad.scale(&sign);
                for (a, d) in dirs.iter().enumerate() {
                    let kd = l.pairing(k, d)?;
                    if kd != 0 {
                        g.add_term(Monomial::var(m + 1, a), unit.scale_int(kd));
                    }
                }
                let base = TruncSeries::exp(&g, cutoff, lambda_cutoff)?;
                let lam = match sector {
                    Sector::Plus => &lam_plus,
                    Sector::Minus => &lam_minus,
                };
                let poly = if identity { p.with_vars(target.clone()) } else { p.substitute(&target, &images)? };
                base.mul(lam)?.mul_poly(&poly)
            })
            .collect();
        let mut acc = TruncSeries::zero(target, cutoff, lambda_cutoff);
        for part in parts {
            acc = acc.add(&part?)?;
        }
        Ok(acc)
    }

    /// The Minus sector determined by the Plus sector:
    /// `q_K(t, λ) = i^{d - d0} p_K(i t, -λ)`.
    pub fn minus_from_plus(&self) -> Result<BTreeMap<CohClass, MultiPoly>> {
        let dim = self.dimension()?;
        let unit = Gr::i_pow(-dim.d0_minus_d);
        let mut factors = vec![Gr::i(); self.rank()];
        factors.push(-Gr::one());
        Ok(self.sector_terms(Sector::Plus).map(|(k, p)| (k.clone(), p.scale_vars(&factors).scale(&unit))).collect())
    }

    /// Replaces the Minus sector by the image of the Plus sector.
    pub fn symmetrize(&self) -> Result<DonaldsonSeries> {
        let image = self.minus_from_plus()?;
        let mut terms: TermMap =
            self.terms.iter().filter(|((s, _), _)| *s == Sector::Plus).map(|(k, p)| (k.clone(), p.clone())).collect();
        for (k, q) in image {
            terms.insert((Sector::Minus, k), q);
        }
        let flags = SeriesFlags { symmetric: true, ..self.flags };
        self.rebuild(terms, flags)
    }

    /// Whether the expansion obeys `G(i t, -λ) = i^{d0-d} G(t, λ)` through the
    /// given cutoffs.
    pub fn check_expansion_identity(&self, cutoff: u32, lambda_cutoff: u32) -> Result<bool> {
        let dim = self.dimension()?;
        let g = self.expand(cutoff, lambda_cutoff)?;
        let mut factors = vec![Gr::i(); self.rank()];
        factors.push(-Gr::one());
        Ok(g.scale_vars(&factors) == g.scale(&Gr::i_pow(dim.d0_minus_d)))
    }

    /// Checks that Plus classes come in pairs `±K` with
    /// `p_{-K}(-t, λ) = (-1)^{d0-d} p_K(t, λ)`.
    pub fn check_pair_structure(&self) -> Result<PairReport> {
        let dim = self.dimension()?;
        let sign = lattice::sign(dim.d0_minus_d);
        let mut factors = vec![-Gr::one(); self.rank()];
        factors.push(Gr::one());
        let mut violations = Vec::new();
        for (k, p) in self.sector_terms(Sector::Plus) {
            let neg = k.neg();
            match self.poly(Sector::Plus, &neg) {
                None => violations.push(PairViolation::MissingPartner(k.clone())),
                Some(q) => {
                    if q.scale_vars(&factors) != p.scale(&sign) {
                        violations.push(PairViolation::Mismatch(k.clone()));
                    }
                }
            }
        }
        Ok(PairReport { violations })
    }

    /// Plus-sector classes with their (nonzero) polynomials.
    pub fn basic_classes(&self) -> Vec<(CohClass, MultiPoly)> {
        self.sector_terms(Sector::Plus).map(|(k, p)| (k.clone(), p.clone())).collect()
    }

    /// Smallest genus allowed by `2g - 2 ≥ S² + |K·S|` over all basic classes.
    pub fn min_genus(&self, surf: &CohClass) -> Result<u32> {
        let l = &self.manifold.lattice;
        let s2 = l.square(surf)?;
        if surf.is_zero() {
            return Err(Error::InvalidInput("surface class is zero".into()));
        }
        if s2 < 0 {
            return Err(Error::InvalidInput(format!("surface has negative square {s2}")));
        }
        if !self.flags.sst {
            return Err(Error::NotSimpleType);
        }
        let mut worst = 0i64;
        for (k, _) in self.sector_terms(Sector::Plus) {
            worst = worst.max(l.pairing(k, surf)?.abs());
        }
        let need = s2 + worst + 2;
        Ok(((need + 1) / 2).max(0) as u32)
    }

    /// The pairs `(K_i, a_i)` of `D((1 + x/2) e^{tD}) = e^{Q/2} Σ (-1)^{(K_i·w + w²)/2} a_i e^{K_i}`.
    pub fn to_km_form(&self) -> Result<Vec<(CohClass, Gr)>> {
        if !self.flags.sst {
            return Err(Error::NotSimpleType);
        }
        let l = &self.manifold.lattice;
        let mut out = Vec::new();
        for (k, p) in self.sector_terms(Sector::Plus) {
            let c = p.as_constant().ok_or(Error::NotSimpleType)?;
            let e = lattice::km_exponent(l, k, &self.w)?;
            out.push((k.clone(), &c.scale_int(2) * &lattice::sign(e)));
        }
        Ok(out)
    }

    /// Inverse of [`to_km_form`](Self::to_km_form): Plus coefficients
    /// `½ (-1)^{(K·w + w²)/2} a`, Minus sector by symmetrize.
    pub fn from_km_form(
        km: &[(CohClass, Gr)],
        manifold: ManifoldData,
        w: CohClass,
        zword: OneCycleWord,
    ) -> Result<DonaldsonSeries> {
        let vars = Vars::series(manifold.rank());
        let mut terms = TermMap::new();
        let mut characteristic = true;
        for (k, a) in km {
            let e = lattice::km_exponent(&manifold.lattice, k, &w)?;
            characteristic &= manifold.lattice.is_characteristic(k)?;
            let c = &(a * &lattice::sign(e)) * &Gr::frac(1, 2);
            let key = (Sector::Plus, k.clone());
            if terms.contains_key(&key) {
                return Err(Error::InvalidInput(format!("duplicate class {k:?}")));
            }
            terms.insert(key, MultiPoly::constant(vars.clone(), c));
        }
        let flags = SeriesFlags { characteristic, symmetric: false, sst: true };
        Self::from_map(manifold, w, zword, terms, flags)?.symmetrize()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PairViolation {
    /// No Plus term with class `-K`.
    MissingPartner(CohClass),
    /// `p_{-K}(-t, λ) ≠ (-1)^{d0-d} p_K(t, λ)`.
    Mismatch(CohClass),
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PairReport {
    pub violations: Vec<PairViolation>,
}

impl PairReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn gr(s: &str) -> Gr {
        s.parse().unwrap()
    }

    fn manifold(gram: Vec<Vec<i64>>, b1: u32, bplus: u32) -> ManifoldData {
        ManifoldData::new("test", Lattice::with_gram(gram).unwrap(), b1, bplus).unwrap()
    }

    fn poly(rank: usize, terms: &[(&[u32], &str)]) -> MultiPoly {
        MultiPoly::from_terms(Vars::series(rank), terms.iter().map(|(e, c)| (Monomial::from_exponents(e), gr(c))))
    }

    fn single(m: ManifoldData, w: Vec<i64>, terms: Vec<SeriesTerm>) -> DonaldsonSeries {
        DonaldsonSeries::new(m, CohClass::new(w), OneCycleWord::empty(), terms, SeriesFlags::default()).unwrap()
    }

    fn series_1d(s: &TruncSeries) -> Vec<(String, Gr)> {
        s.terms().map(|(m, c)| (m.to_key(), c.clone())).collect()
    }

    #[test]
    fn expand_plus_lambda_only() {
        let m = manifold(vec![vec![0]], 0, 3);
        let s =
            single(m, vec![0], vec![SeriesTerm::new(Sector::Plus, CohClass::new(vec![0]), poly(1, &[(&[0, 0], "1")]))]);
        let e = s.expand(0, 2).unwrap();
        assert_eq!(series_1d(&e), vec![("0,0".into(), gr("1")), ("0,1".into(), gr("2")), ("0,2".into(), gr("2"))]);
    }

    #[test]
    fn expand_plus_class_on_unimodular_form() {
        // gram [1]: e^{t²/2 + t} = 1 + t + t² + 2/3 t³ + …
        let m = manifold(vec![vec![1]], 0, 3);
        let s =
            single(m, vec![0], vec![SeriesTerm::new(Sector::Plus, CohClass::new(vec![1]), poly(1, &[(&[0, 0], "1")]))]);
        let e = s.expand(3, 0).unwrap();
        assert_eq!(
            series_1d(&e),
            vec![("0,0".into(), gr("1")), ("1,0".into(), gr("1")), ("2,0".into(), gr("1")), ("3,0".into(), gr("2/3"))]
        );
    }

    #[test]
    fn expand_degenerate_form_ignores_class() {
        // on gram [0] every class pairs to zero with t
        let m = manifold(vec![vec![0]], 0, 3);
        let s =
            single(m, vec![0], vec![SeriesTerm::new(Sector::Plus, CohClass::new(vec![1]), poly(1, &[(&[0, 0], "1")]))]);
        assert_eq!(series_1d(&s.expand(3, 0).unwrap()), vec![("0,0".into(), gr("1"))]);
    }

    #[test]
    fn expand_minus_is_imaginary_exponential() {
        // gram [-1] and K = (-1): -Q/2 = t²/2, i K·t = i t  => e^{t²/2 + i t}
        let m = manifold(vec![vec![-1]], 0, 3);
        let s = single(
            m,
            vec![0],
            vec![SeriesTerm::new(Sector::Minus, CohClass::new(vec![-1]), poly(1, &[(&[0, 0], "1")]))],
        );
        let e = s.expand(2, 0).unwrap();
        // 1 + i t + (1/2 - 1/2) t²
        assert_eq!(series_1d(&e), vec![("0,0".into(), gr("1")), ("1,0".into(), gr("1*i"))]);
    }

    fn sym_fixture(p: MultiPoly, d0_minus_d_target: i64) -> DonaldsonSeries {
        // rank 1, gram [1]; pick w and b+ so that d0 - d hits the target
        // d0 = -w² - 3/2(1 + b+) with b1 = 0; b+ = 3 gives d0 = -w² - 6
        let m = manifold(vec![vec![1]], 0, 3);
        let w = match d0_minus_d_target.rem_euclid(4) {
            2 => 0, // d0 = -6
            3 => 1, // d0 = -7
            _ => panic!("unsupported"),
        };
        single(m, vec![w], vec![SeriesTerm::new(Sector::Plus, CohClass::new(vec![1]), p)])
    }

    #[test]
    fn symmetrize_examples() {
        // d0 - d = -6: i^{6} = -1
        let s = sym_fixture(poly(1, &[(&[0, 0], "1")]), 2).symmetrize().unwrap();
        assert_eq!(s.poly(Sector::Minus, &CohClass::new(vec![1])).unwrap(), &poly(1, &[(&[0, 0], "-1")]));
        // p = t: q = -(i t)
        let s = sym_fixture(poly(1, &[(&[1, 0], "1")]), 2).symmetrize().unwrap();
        assert_eq!(s.poly(Sector::Minus, &CohClass::new(vec![1])).unwrap(), &poly(1, &[(&[1, 0], "-1*i")]));
        // p = λ, d - d0 = 6 ≡ -2: q = (-1)(-λ) = λ
        let s = sym_fixture(poly(1, &[(&[0, 1], "1")]), 2).symmetrize().unwrap();
        assert_eq!(s.poly(Sector::Minus, &CohClass::new(vec![1])).unwrap(), &poly(1, &[(&[0, 1], "1")]));
        assert!(s.flags().symmetric);
        assert_eq!(s.symmetrize().unwrap(), s);
    }

    #[test]
    fn symmetrize_unit_case_d0_minus_d_zero() {
        // b+ = 3, b1 = 0, w² = -6 is impossible in rank 1 with gram [1];
        // use gram [-1] and w = (0) with b1 = 2, b+ = 3: d0 = -3/2·2 = -3, then z with one cycle: d = 3/2 → no.
        // instead b1 = 0, b+ = 3, gram diag(-1,-1,...) : w² = -6 via w = (1,1,2) in diag(-1,-1,-1)
        let m = ManifoldData::new("t", Lattice::diagonal(&[-1, -1, -1]).unwrap(), 0, 3).unwrap();
        let k = CohClass::new(vec![1, 1, 1]);
        let s = DonaldsonSeries::new(
            m,
            CohClass::new(vec![1, 1, 2]),
            OneCycleWord::empty(),
            vec![SeriesTerm::new(Sector::Plus, k.clone(), poly(3, &[(&[0, 0, 0, 0], "1")]))],
            SeriesFlags::default(),
        )
        .unwrap();
        assert_eq!(s.dimension().unwrap().d0_minus_d, 0);
        let s = s.symmetrize().unwrap();
        assert_eq!(s.poly(Sector::Minus, &k).unwrap(), &poly(3, &[(&[0, 0, 0, 0], "1")]));
    }

    #[test]
    fn pair_structure_examples() {
        let m = manifold(vec![vec![1]], 0, 3); // w = 0: d0 - d = -6, even
        let k = CohClass::new(vec![1]);
        let mk = |a: &str, b: MultiPoly| {
            single(
                m.clone(),
                vec![0],
                vec![
                    SeriesTerm::new(Sector::Plus, k.clone(), poly(1, &[(&[0, 0], a)])),
                    SeriesTerm::new(Sector::Plus, k.neg(), b),
                ],
            )
        };
        assert!(mk("1", poly(1, &[(&[0, 0], "1")])).check_pair_structure().unwrap().passes());
        assert!(!mk("1", poly(1, &[(&[0, 0], "-1")])).check_pair_structure().unwrap().passes());
        let odd = single(
            m.clone(),
            vec![0],
            vec![
                SeriesTerm::new(Sector::Plus, k.clone(), poly(1, &[(&[1, 0], "1")])),
                SeriesTerm::new(Sector::Plus, k.neg(), poly(1, &[(&[1, 0], "-1")])),
            ],
        );
        assert!(odd.check_pair_structure().unwrap().passes());
        let lonely = single(m, vec![0], vec![SeriesTerm::new(Sector::Plus, k.clone(), poly(1, &[(&[0, 0], "1")]))]);
        assert_eq!(lonely.check_pair_structure().unwrap().violations, vec![PairViolation::MissingPartner(k)]);
    }

    #[test]
    fn basic_classes_examples() {
        let m = manifold(vec![vec![1]], 0, 3);
        let z = DonaldsonSeries::zero(m.clone(), CohClass::new(vec![0]), OneCycleWord::empty()).unwrap();
        assert!(z.basic_classes().is_empty());
        let k = CohClass::new(vec![1]);
        let s = single(
            m,
            vec![0],
            vec![
                SeriesTerm::new(Sector::Plus, k.clone(), poly(1, &[(&[0, 0], "1")])),
                SeriesTerm::new(Sector::Plus, k.neg(), poly(1, &[(&[0, 0], "1")])),
                SeriesTerm::new(Sector::Minus, CohClass::new(vec![3]), poly(1, &[(&[0, 0], "1")])),
            ],
        );
        let classes: Vec<CohClass> = s.basic_classes().into_iter().map(|(k, _)| k).collect();
        assert_eq!(classes, vec![k.neg(), k]);
    }

    fn sst_with_classes(gram: Vec<Vec<i64>>, classes: &[Vec<i64>]) -> DonaldsonSeries {
        let rank = gram.len();
        let m = manifold(gram, 0, 3);
        let terms = classes
            .iter()
            .map(|k| SeriesTerm::new(Sector::Plus, CohClass::new(k.clone()), MultiPoly::one(Vars::series(rank))))
            .collect::<Vec<_>>();
        DonaldsonSeries::new(
            m,
            CohClass::zero(rank),
            OneCycleWord::empty(),
            terms,
            SeriesFlags { sst: true, ..Default::default() },
        )
        .unwrap()
    }

    #[test]
    fn min_genus_examples() {
        // K = 0 only, S² = 2
        let s = sst_with_classes(vec![vec![2]], &[vec![0]]);
        assert_eq!(s.min_genus(&CohClass::new(vec![1])).unwrap(), 2);
        // max |K·S| = 3, S² = 1
        let s = sst_with_classes(vec![vec![1]], &[vec![3], vec![-3]]);
        assert_eq!(s.min_genus(&CohClass::new(vec![1])).unwrap(), 3);
        // no classes, S² = 0 (hyperbolic plane, S = e1)
        let s = sst_with_classes(vec![vec![0, 1], vec![1, 0]], &[]);
        assert_eq!(s.min_genus(&CohClass::new(vec![1, 0])).unwrap(), 1);
        // negative square and zero class are rejected
        let s = sst_with_classes(vec![vec![-1]], &[]);
        assert!(s.min_genus(&CohClass::new(vec![1])).is_err());
        assert!(s.min_genus(&CohClass::new(vec![0])).is_err());
    }

    #[test]
    fn km_form_round_trip_and_signs() {
        // single (K = 0, a = 1), w = 0
        let m = ManifoldData::new("t", Lattice::diagonal(&[1, -1]).unwrap(), 0, 3).unwrap();
        let zero = CohClass::zero(2);
        let s =
            DonaldsonSeries::from_km_form(&[(zero.clone(), gr("1"))], m.clone(), zero.clone(), OneCycleWord::empty())
                .unwrap();
        let half = poly(2, &[(&[0, 0, 0], "1/2")]);
        assert_eq!(s.poly(Sector::Plus, &zero).unwrap(), &half);
        let d0 = s.dimension().unwrap().d0().unwrap();
        assert_eq!(d0, -6);
        assert_eq!(s.poly(Sector::Minus, &zero).unwrap(), &half.scale(&Gr::i_pow(-d0)));
        assert_eq!(s.to_km_form().unwrap(), vec![(zero, gr("1"))]);

        // gram diag(1,-1), K = (1,1), w = (1,0): (K·w + w²)/2 = 1 → sign -1
        let w = CohClass::new(vec![1, 0]);
        let k = CohClass::new(vec![1, 1]);
        assert_eq!(lattice::km_exponent(&m.lattice, &k, &w).unwrap(), 1);
        let s = DonaldsonSeries::from_km_form(&[(k.clone(), gr("1"))], m.clone(), w, OneCycleWord::empty()).unwrap();
        assert_eq!(s.poly(Sector::Plus, &k).unwrap(), &poly(2, &[(&[0, 0, 0], "-1/2")]));
        assert!(s.flags().characteristic);

        // non-integral exponent
        let bad = DonaldsonSeries::from_km_form(
            &[(CohClass::zero(2), gr("1"))],
            m,
            CohClass::new(vec![1, 0]),
            OneCycleWord::empty(),
        );
        assert!(matches!(bad, Err(Error::NonIntegralExponent(_))));
    }

    #[test]
    fn declared_flags_are_checked() {
        let m = manifold(vec![vec![1, 0], vec![0, -1]], 0, 3);
        let bad_char = DonaldsonSeries::new(
            m.clone(),
            CohClass::zero(2),
            OneCycleWord::empty(),
            vec![SeriesTerm::new(Sector::Plus, CohClass::new(vec![0, 1]), MultiPoly::one(Vars::series(2)))],
            SeriesFlags { characteristic: true, ..Default::default() },
        );
        assert!(matches!(bad_char, Err(Error::InvariantViolation(_))));
        let bad_sst = DonaldsonSeries::new(
            m,
            CohClass::zero(2),
            OneCycleWord::empty(),
            vec![SeriesTerm::new(Sector::Plus, CohClass::new(vec![1, 1]), MultiPoly::var(Vars::series(2), 2))],
            SeriesFlags { sst: true, ..Default::default() },
        );
        assert!(matches!(bad_sst, Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn one_cycle_word_degree() {
        let z = OneCycleWord::new(vec!["d1".into(), "d2".into()]).unwrap();
        assert_eq!(z.deg2z(), 6);
        assert!(OneCycleWord::from_parts(vec!["d1".into()], 2).is_err());
        assert!(z.with_cycle("d1").is_err());
    }
}
