//! Built-in synthetic fixtures. They are validated only by internal
//! invariants and do not stand for any particular manifold.

use crate::algebra::{GaussianRational, Monomial, MultiPoly, Vars};
use crate::error::Result;
use crate::lattice::{CohClass, Lattice, ManifoldData};
use crate::series::{DonaldsonSeries, OneCycleWord, Sector, SeriesFlags, TermMap};
use crate::transforms::{blow_up, connect_sum_s1s3, BlowupVariant};

type Gr = GaussianRational;

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub series: DonaldsonSeries,
}

fn manifold(name: &str, diag: &[i64]) -> ManifoldData {
    ManifoldData::new(name, Lattice::diagonal(diag).expect("diagonal lattice"), 0, 3).expect("b+ > 1")
}

fn km(name: &str, diag: &[i64], classes: &[(&[i64], i64)]) -> Result<DonaldsonSeries> {
    let m = manifold(name, diag);
    let mut km = Vec::new();
    for (k, a) in classes {
        km.push((CohClass::new(k.to_vec()), Gr::from_int(*a)));
        km.push((CohClass::new(k.iter().map(|x| -x).collect()), Gr::from_int(*a)));
    }
    let rank = diag.len();
    DonaldsonSeries::from_km_form(&km, m, CohClass::zero(rank), OneCycleWord::empty())
}

fn two_class() -> Result<DonaldsonSeries> {
    km("X2", &[1, -1], &[(&[1, 1], 1)])
}

fn lambda_squared() -> Result<DonaldsonSeries> {
    let m = manifold("Xlambda", &[1, -1]);
    let vars = Vars::series(2);
    let p = MultiPoly::from_terms(
        vars,
        [
            (Monomial::from_exponents(&[0, 0, 0]), Gr::frac(1, 2)),
            (Monomial::from_exponents(&[0, 0, 2]), Gr::from_int(1)),
        ],
    );
    let mut terms = TermMap::new();
    terms.insert((Sector::Plus, CohClass::new(vec![1, 1])), p.clone());
    terms.insert((Sector::Plus, CohClass::new(vec![-1, -1])), p);
    let s = DonaldsonSeries::from_map(m, CohClass::zero(2), OneCycleWord::empty(), terms, SeriesFlags::default())?;
    Ok(s.symmetrize()?.canonicalize())
}

/// All fixtures in catalog order.
pub fn catalog() -> Result<Vec<Fixture>> {
    let two = two_class()?;
    Ok(vec![
        Fixture {
            name: "zero",
            description: "zero series on diag(1,-1)",
            series: DonaldsonSeries::zero(manifold("X0", &[1, -1]), CohClass::zero(2), OneCycleWord::empty())?,
        },
        Fixture {
            name: "two-class",
            description: "simple type, basic classes ±(1,1) on diag(1,-1)",
            series: two.clone(),
        },
        Fixture {
            name: "two-class-cosh",
            description: "cosh blow-up of two-class",
            series: blow_up(&two, BlowupVariant::Cosh)?,
        },
        Fixture {
            name: "two-class-sinh",
            description: "sinh blow-up of two-class",
            series: blow_up(&two, BlowupVariant::Sinh)?,
        },
        Fixture {
            name: "lambda-squared",
            description: "finite type of order 3: polynomials 1/2 + lambda^2 at ±(1,1)",
            series: lambda_squared()?,
        },
        Fixture {
            name: "s1s3-sum",
            description: "two-class summed with S1xS3 along the cycle a",
            series: connect_sum_s1s3(&two, "a")?,
        },
        Fixture {
            name: "rank4",
            description: "simple type, basic classes ±(1,1,1,1) and ±(1,-1,1,3) on diag(1,1,-1,-1)",
            series: km("X4", &[1, 1, -1, -1], &[(&[1, 1, 1, 1], 1), (&[1, -1, 1, 3], 3)])?,
        },
    ])
}

pub fn fixture(name: &str) -> Result<Option<DonaldsonSeries>> {
    Ok(catalog()?.into_iter().find(|f| f.name == name).map(|f| f.series))
}
