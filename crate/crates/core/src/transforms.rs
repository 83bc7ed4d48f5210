//! Blow-up and blow-down, changing `w`, and the `S¹×S³` connected sum.
//!
//! Structured rewrites act on the Plus sector; the Minus sector is always
//! regenerated by [`DonaldsonSeries::symmetrize`] afterwards.

use std::collections::BTreeMap;

use crate::algebra::{GaussianRational, Monomial, MultiPoly, Vars};
use crate::error::{Error, Result};
use crate::lattice::{self, CohClass, ManifoldData};
use crate::series::{DonaldsonSeries, Sector, SeriesFlags};

type Gr = GaussianRational;

const BLOWUP_SUFFIX: &str = "#-CP2";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BlowupVariant {
    /// Same `w`: the `cosh E` factor.
    Cosh,
    /// `w + E`: the `−sinh E` factor.
    Sinh,
}

impl std::str::FromStr for BlowupVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosh" => Ok(BlowupVariant::Cosh),
            "sinh" => Ok(BlowupVariant::Sinh),
            _ => Err(Error::Parse(format!("unknown blow-up variant {s:?}"))),
        }
    }
}

/// Inserts a fresh variable (exponent 0) at position `pos`.
fn insert_var(p: &MultiPoly, pos: usize, vars: &Vars) -> MultiPoly {
    MultiPoly::from_terms(
        vars.clone(),
        p.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.insert(pos, 0);
            (Monomial::from_exponents(&e), c.clone())
        }),
    )
}

/// Sets variable `pos` to zero and removes it.
fn drop_var(p: &MultiPoly, pos: usize, vars: &Vars) -> MultiPoly {
    MultiPoly::from_terms(
        vars.clone(),
        p.terms().filter(|(m, _)| m.exp(pos) == 0).map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.remove(pos);
            (Monomial::from_exponents(&e), c.clone())
        }),
    )
}

fn require_sst(s: &DonaldsonSeries) -> Result<()> {
    if s.flags().sst {
        Ok(())
    } else {
        Err(Error::NotSimpleType)
    }
}

fn plus_only(terms: BTreeMap<CohClass, MultiPoly>) -> BTreeMap<(Sector, CohClass), MultiPoly> {
    terms.into_iter().map(|(k, p)| ((Sector::Plus, k), p)).collect()
}

/// Blow-up at one point: classes `K ± E` with half the coefficient, signed
/// according to `variant`.
pub fn blow_up(s: &DonaldsonSeries, variant: BlowupVariant) -> Result<DonaldsonSeries> {
    require_sst(s)?;
    let m = s.manifold();
    let rank = m.rank();
    let mut target = m.clone();
    target.lattice = m.lattice.with_exceptional();
    target.name = format!("{}{BLOWUP_SUFFIX}", m.name);
    let e_coord = match variant {
        BlowupVariant::Cosh => 0,
        BlowupVariant::Sinh => 1,
    };
    let w = s.w().extended(e_coord);
    let vars = Vars::series(rank + 1);
    let half = Gr::frac(1, 2);
    let mut terms = BTreeMap::new();
    for (k, p) in s.sector_terms(Sector::Plus) {
        let p = insert_var(p, rank, &vars).scale(&half);
        let (plus_e, minus_e) = match variant {
            BlowupVariant::Cosh => (p.clone(), p),
            BlowupVariant::Sinh => (-&p, p),
        };
        terms.insert(k.extended(1), plus_e);
        terms.insert(k.extended(-1), minus_e);
    }
    let flags = SeriesFlags { symmetric: false, ..s.flags() };
    DonaldsonSeries::from_map(target, w, s.zword().clone(), plus_only(terms), flags)?.symmetrize()
}

/// `∂/∂r|_{r=0}` of the series evaluated at `tD + rE` with `D ⟂ E`, restricted
/// to the orthogonal complement of `E`.
pub fn blow_down_derivative(s: &DonaldsonSeries, e_index: usize) -> Result<DonaldsonSeries> {
    let m = s.manifold();
    let rank = m.rank();
    if e_index >= rank {
        return Err(Error::InvalidInput(format!("exceptional index {e_index} out of range")));
    }
    let e = CohClass::basis(rank, e_index);
    if m.lattice.square(&e)? != -1 {
        return Err(Error::InvalidLattice(format!(
            "{} has square {}, expected -1",
            m.lattice.labels()[e_index],
            m.lattice.square(&e)?
        )));
    }
    let mut target = m.clone();
    target.lattice = m.lattice.without_orthogonal(e_index)?;
    if let Some(base) = m.name.strip_suffix(BLOWUP_SUFFIX) {
        target.name = base.to_string();
    }
    let vars = Vars::series(rank - 1);
    let mut terms: BTreeMap<(Sector, CohClass), MultiPoly> = BTreeMap::new();
    for (sector, k, p) in s.terms() {
        let ke = m.lattice.pairing(k, &e)?;
        let unit = match sector {
            Sector::Plus => Gr::from_int(ke),
            Sector::Minus => Gr::i().scale_int(ke),
        };
        let d = &p.scale(&unit) + &p.partial(e_index);
        let d = drop_var(&d, e_index, &vars);
        let key = (sector, k.without(e_index));
        let entry = terms.entry(key).or_insert_with(|| MultiPoly::zero(vars.clone()));
        *entry = &*entry + &d;
    }
    terms.retain(|_, p| !p.is_zero());

    let w = s.w().without(e_index);
    let mut characteristic = true;
    for (_, k) in terms.keys() {
        characteristic &= target.lattice.is_characteristic(k)?;
    }
    let sst = s.flags().sst && terms.values().all(|p| p.as_constant().is_some());
    let draft = DonaldsonSeries::from_map(
        target.clone(),
        w.clone(),
        s.zword().clone(),
        terms.clone(),
        SeriesFlags { characteristic, symmetric: false, sst },
    )?;
    let minus: BTreeMap<CohClass, MultiPoly> =
        draft.sector_terms(Sector::Minus).map(|(k, p)| (k.clone(), p.clone())).collect();
    let symmetric = s.flags().symmetric && draft.minus_from_plus()? == minus;
    DonaldsonSeries::from_map(target, w, s.zword().clone(), terms, SeriesFlags { characteristic, symmetric, sst })
}

/// Moves the series to `w′`, multiplying each Plus coefficient by
/// `(−1)^{(K·(w+w′) + w² + w′²)/2}`.
pub fn recolor(s: &DonaldsonSeries, w2: &CohClass) -> Result<DonaldsonSeries> {
    require_sst(s)?;
    let l = &s.manifold().lattice;
    if w2.rank() != s.rank() {
        return Err(Error::RankMismatch { expected: s.rank(), got: w2.rank() });
    }
    let w = s.w();
    let mut terms = BTreeMap::new();
    for (k, p) in s.sector_terms(Sector::Plus) {
        lattice::km_exponent(l, k, w)?;
        lattice::km_exponent(l, k, w2)?;
        let e = l.pairing(k, &w.add(w2))? + l.square(w)? + l.square(w2)?;
        // both halves are integral, so e is even
        terms.insert(k.clone(), p.scale(&lattice::sign(e / 2)));
    }
    let flags = SeriesFlags { symmetric: false, ..s.flags() };
    DonaldsonSeries::from_map(s.manifold().clone(), w2.clone(), s.zword().clone(), plus_only(terms), flags)?
        .symmetrize()
}

/// The global rule `D^{w+2α} = (−1)^{α²} D^w`.
pub fn shift_w_by_even(s: &DonaldsonSeries, alpha: &CohClass) -> Result<DonaldsonSeries> {
    let l = &s.manifold().lattice;
    let sign = lattice::sign(l.square(alpha)?);
    let terms = s.terms().map(|(sec, k, p)| ((sec, k.clone()), p.scale(&sign))).collect();
    let w = s.w().add(&alpha.scale(2));
    DonaldsonSeries::from_map(s.manifold().clone(), w, s.zword().clone(), terms, s.flags())
}

/// Connected sum with `S¹×S³`: same terms, one more `H_1` label, `b1 + 1`, and
/// the manifold no longer of strong simple type.
pub fn connect_sum_s1s3(s: &DonaldsonSeries, cycle: &str) -> Result<DonaldsonSeries> {
    let zword = s.zword().with_cycle(cycle)?;
    let m = s.manifold();
    let target = ManifoldData {
        name: format!("{}#S1xS3", m.name),
        lattice: m.lattice.clone(),
        b1: m.b1 + 1,
        bplus: m.bplus,
        sst: false,
    };
    let terms = s.terms().map(|(sec, k, p)| ((sec, k.clone()), p.clone())).collect();
    DonaldsonSeries::from_map(target, s.w().clone(), zword, terms, s.flags())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::series::{OneCycleWord, SeriesTerm};

    fn gr(s: &str) -> Gr {
        s.parse().unwrap()
    }

    fn km(gram: &[i64], w: Vec<i64>, classes: &[(Vec<i64>, &str)]) -> DonaldsonSeries {
        let m = ManifoldData::new("X", Lattice::diagonal(gram).unwrap(), 0, 3).unwrap();
        let km: Vec<_> = classes.iter().map(|(k, a)| (CohClass::new(k.clone()), gr(a))).collect();
        DonaldsonSeries::from_km_form(&km, m, CohClass::new(w), OneCycleWord::empty()).unwrap()
    }

    fn plus(s: &DonaldsonSeries) -> Vec<(Vec<i64>, Gr)> {
        s.sector_terms(Sector::Plus).map(|(k, p)| (k.coords().to_vec(), p.as_constant().unwrap())).collect()
    }

    #[test]
    fn blow_up_examples() {
        let s = km(&[1, -1], vec![0, 0], &[(vec![1, 1], "2")]);
        let a = plus(&s)[0].1.clone();
        let c = blow_up(&s, BlowupVariant::Cosh).unwrap();
        let half = &a * &gr("1/2");
        assert_eq!(plus(&c), vec![(vec![1, 1, -1], half.clone()), (vec![1, 1, 1], half.clone())]);
        assert_eq!(c.manifold().lattice.labels().last().unwrap(), "E1");
        assert!(c.flags().symmetric);
        let sh = blow_up(&s, BlowupVariant::Sinh).unwrap();
        assert_eq!(plus(&sh), vec![(vec![1, 1, -1], half.clone()), (vec![1, 1, 1], -&half)]);
        assert_eq!(sh.w().coords(), &[0, 0, 1]);

        let m = s.manifold().clone();
        let z = DonaldsonSeries::zero(m, CohClass::zero(2), OneCycleWord::empty()).unwrap();
        assert!(blow_up(&z, BlowupVariant::Cosh).unwrap().is_zero());
    }

    #[test]
    fn blow_down_inverts_sinh_blow_up() {
        let s = km(
            &[1, -1],
            vec![0, 0],
            &[(vec![1, 1], "2"), (vec![-1, -1], "2"), (vec![3, 1], "-1"), (vec![-3, -1], "-1")],
        );
        let b = blow_up(&s, BlowupVariant::Sinh).unwrap();
        let d = blow_down_derivative(&b, 2).unwrap();
        assert_eq!(d, s);
        // the cosh variant has vanishing derivative
        let c = blow_up(&s, BlowupVariant::Cosh).unwrap();
        assert!(blow_down_derivative(&c, 2).unwrap().is_zero());
    }

    #[test]
    fn blow_down_rejects_non_exceptional() {
        let s = km(&[1, -1], vec![0, 0], &[(vec![1, 1], "2")]);
        assert!(blow_down_derivative(&s, 0).is_err());
    }

    #[test]
    fn recolor_examples() {
        let s = km(&[1, -1], vec![1, 0], &[(vec![1, 1], "1"), (vec![-1, -1], "1")]);
        let r = recolor(&s, &CohClass::new(vec![0, 1])).unwrap();
        // (K·(1,1) + 1 − 1)/2 = 0 for K = (1,1)
        assert_eq!(plus(&r)[1], (vec![1, 1], plus(&s)[1].1.clone()));
        assert_eq!(recolor(&r, s.w()).unwrap(), s);
        // km coefficients do not change
        assert_eq!(r.to_km_form().unwrap(), s.to_km_form().unwrap());
    }

    #[test]
    fn recolor_by_even_class_matches_global_rule() {
        let s =
            km(&[1, -1, -1], vec![1, 0, 0], &[(vec![1, 1, 1], "1"), (vec![-1, -1, -1], "1"), (vec![3, 1, -1], "5")]);
        for alpha in [vec![1, 0, 0], vec![0, 1, 1], vec![1, 2, -1]] {
            let alpha = CohClass::new(alpha);
            let target = s.w().add(&alpha.scale(2));
            assert_eq!(recolor(&s, &target).unwrap(), shift_w_by_even(&s, &alpha).unwrap());
        }
    }

    #[test]
    fn connected_sum_bookkeeping() {
        let s = km(&[1, -1], vec![0, 0], &[(vec![1, 1], "1"), (vec![-1, -1], "1")]);
        let t = connect_sum_s1s3(&s, "delta").unwrap();
        assert_eq!(t.manifold().b1, 1);
        assert!(!t.manifold().sst);
        assert_eq!(t.zword().deg2z(), 3);
        assert_eq!(t.basic_classes(), s.basic_classes());
        assert_eq!(t.dimension().unwrap().d0_minus_d, s.dimension().unwrap().d0_minus_d);
        let t2 = connect_sum_s1s3(&t, "delta2").unwrap();
        assert_eq!(t2.zword().labels().len(), 2);
        assert!(connect_sum_s1s3(&t, "delta").is_err());
    }

    #[test]
    fn non_sst_input_is_rejected() {
        let m = ManifoldData::new("X", Lattice::diagonal(&[1]).unwrap(), 0, 3).unwrap();
        let s = DonaldsonSeries::new(
            m,
            CohClass::zero(1),
            OneCycleWord::empty(),
            vec![SeriesTerm::new(Sector::Plus, CohClass::new(vec![1]), MultiPoly::var(Vars::series(1), 1))],
            SeriesFlags::default(),
        )
        .unwrap();
        assert!(matches!(blow_up(&s, BlowupVariant::Cosh), Err(Error::NotSimpleType)));
        assert!(matches!(recolor(&s, &CohClass::zero(1)), Err(Error::NotSimpleType)));
    }
}
