//! Integer intersection lattices, classes in them and characteristic vectors.
//!
//! The lattice models `H_2(X; Z)` modulo torsion with its intersection form.
//! Cohomology classes are identified with lattice vectors by Poincaré duality,
//! so every dot product `u·v` is `uᵀ · gram · v`.

use std::collections::HashSet;
use std::fmt;

use crate::algebra::{GaussianRational, Matrix};
use crate::error::{Error, Result};

/// An integer vector in a lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohClass(Vec<i64>);

impl CohClass {
    pub fn new(coords: Vec<i64>) -> Self {
        CohClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        CohClass(vec![0; rank])
    }

    /// The basis vector `e_i`.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        CohClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &CohClass) -> CohClass {
        assert_eq!(self.rank(), o.rank());
        CohClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &CohClass) -> CohClass {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CohClass {
        CohClass(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> CohClass {
        CohClass(self.0.iter().map(|a| a * k).collect())
    }

    /// Appends a coordinate (used when a lattice grows by one summand).
    pub fn extended(&self, value: i64) -> CohClass {
        let mut v = self.0.clone();
        v.push(value);
        CohClass(v)
    }

    /// Drops coordinate `i`.
    pub fn without(&self, i: usize) -> CohClass {
        let mut v = self.0.clone();
        v.remove(i);
        CohClass(v)
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for CohClass {
    fn from(v: Vec<i64>) -> Self {
        CohClass(v)
    }
}

/// Symmetric integer bilinear form on `Z^n` with named basis vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl Lattice {
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::InvalidLattice("rank must be at least 1".into()));
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidLattice("gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice(format!("gram matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        if labels.len() != n {
            return Err(Error::InvalidLattice(format!("{} labels for rank {n}", labels.len())));
        }
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != n {
            return Err(Error::InvalidLattice("labels are not distinct".into()));
        }
        Ok(Lattice { gram, labels })
    }

    /// Lattice with default labels `e1, …, en`.
    pub fn with_gram(gram: Vec<Vec<i64>>) -> Result<Self> {
        let labels = (1..=gram.len()).map(|i| format!("e{i}")).collect();
        Self::new(gram, labels)
    }

    /// `diag(entries)`.
    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect();
        Self::with_gram(gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn check(&self, u: &CohClass) -> Result<()> {
        if u.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: u.rank() });
        }
        Ok(())
    }

    /// `uᵀ · gram · v`.
    pub fn pairing(&self, u: &CohClass, v: &CohClass) -> Result<i64> {
        self.check(u)?;
        self.check(v)?;
        let mut acc = 0i64;
        for (i, ui) in u.coords().iter().enumerate() {
            if *ui == 0 {
                continue;
            }
            for (j, vj) in v.coords().iter().enumerate() {
                acc += ui * self.gram[i][j] * vj;
            }
        }
        Ok(acc)
    }

    pub fn square(&self, u: &CohClass) -> Result<i64> {
        self.pairing(u, u)
    }

    /// The pairings `u·e_j` with every basis vector.
    pub fn pairings_with_basis(&self, u: &CohClass) -> Result<Vec<i64>> {
        self.check(u)?;
        Ok((0..self.rank()).map(|j| u.coords().iter().enumerate().map(|(i, ui)| ui * self.gram[i][j]).sum()).collect())
    }

    /// `K·x ≡ x² (mod 2)` for all `x`; checking the basis suffices because
    /// `x ↦ x² mod 2` is additive.
    pub fn is_characteristic(&self, k: &CohClass) -> Result<bool> {
        let f = self.pairings_with_basis(k)?;
        Ok(f.iter().enumerate().all(|(j, kj)| (kj - self.gram[j][j]).rem_euclid(2) == 0))
    }

    /// The class `K` with prescribed pairings `K·e_j = f_j`, if it is integral.
    pub fn class_from_pairings(&self, f: &[i64]) -> Result<CohClass> {
        let n = self.rank();
        if f.len() != n {
            return Err(Error::RankMismatch { expected: n, got: f.len() });
        }
        let g = Matrix::from_rows(
            self.gram.iter().map(|r| r.iter().map(|&x| GaussianRational::from_int(x)).collect()).collect(),
        );
        let rhs = Matrix::from_columns(&[f.iter().map(|&x| GaussianRational::from_int(x)).collect()]);
        let sol = g.solve(&rhs).ok_or_else(|| {
            Error::InvalidLattice("degenerate form: classes are not determined by their pairings".into())
        })?;
        let mut coords = Vec::with_capacity(n);
        for i in 0..n {
            let v = &sol[(i, 0)];
            let int = v
                .to_integer()
                .ok_or_else(|| Error::FrequencyOutsideGrid(format!("pairings {f:?} give a non-integral class")))?;
            coords.push(i64::try_from(int).map_err(|_| Error::InvalidInput("class coordinate overflow".into()))?);
        }
        Ok(CohClass(coords))
    }

    /// `self ⊕ ⟨E⟩` with `E² = -1`, labelled with the first unused `E{k}`.
    pub fn with_exceptional(&self) -> Lattice {
        let n = self.rank();
        let mut gram: Vec<Vec<i64>> = self
            .gram
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(0);
                r
            })
            .collect();
        let mut last = vec![0; n + 1];
        last[n] = -1;
        gram.push(last);
        let mut k = 1;
        let label = loop {
            let cand = format!("E{k}");
            if !self.labels.contains(&cand) {
                break cand;
            }
            k += 1;
        };
        let mut labels = self.labels.clone();
        labels.push(label);
        Lattice { gram, labels }
    }

    /// Removes basis vector `i`, which must be orthogonal to all the others.
    pub fn without_orthogonal(&self, i: usize) -> Result<Lattice> {
        let n = self.rank();
        if n < 2 {
            return Err(Error::InvalidLattice("cannot remove the only basis vector".into()));
        }
        if (0..n).any(|j| j != i && self.gram[i][j] != 0) {
            return Err(Error::InvalidInput(format!(
                "basis vector {} is not orthogonal to the rest of the lattice",
                self.labels[i]
            )));
        }
        let gram =
            (0..n).filter(|&r| r != i).map(|r| (0..n).filter(|&c| c != i).map(|c| self.gram[r][c]).collect()).collect();
        let labels = (0..n).filter(|&r| r != i).map(|r| self.labels[r].clone()).collect();
        Lattice::new(gram, labels)
    }
}

/// What the series needs to know about the underlying 4-manifold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ManifoldData {
    pub name: String,
    pub lattice: Lattice,
    pub b1: u32,
    pub bplus: u32,
    /// Manifold-level strong simple type record; cleared by connected sum
    /// with `S¹×S³`.
    pub sst: bool,
}

impl ManifoldData {
    pub fn new(name: impl Into<String>, lattice: Lattice, b1: u32, bplus: u32) -> Result<Self> {
        if bplus < 2 {
            return Err(Error::InvalidInput(format!("b+ must be > 1, got {bplus}")));
        }
        Ok(ManifoldData { name: name.into(), lattice, b1, bplus, sst: true })
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }
}

/// `d0 = -w² - (3/2)(1 - b1 + b+)` together with `d0 - d` reduced mod 4.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DimensionData {
    /// `2·d0`, an integer.
    pub twice_d0: i64,
    /// `d0 - d`, an integer by the parity precondition.
    pub d0_minus_d: i64,
}

impl DimensionData {
    pub fn d0_minus_d_mod4(&self) -> i64 {
        self.d0_minus_d.rem_euclid(4)
    }

    /// `d0` itself when it is an integer.
    pub fn d0(&self) -> Option<i64> {
        (self.twice_d0 % 2 == 0).then_some(self.twice_d0 / 2)
    }
}

/// Computes `d0` and `d0 - d` for `deg(z) = deg2z` (= `2d`).
pub fn d0_mod4(m: &ManifoldData, w: &CohClass, deg2z: i64) -> Result<DimensionData> {
    let w2 = m.lattice.square(w)?;
    let twice_d0 = -2 * w2 - 3 * (1 - m.b1 as i64 + m.bplus as i64);
    let diff = twice_d0 - deg2z;
    if diff % 2 != 0 {
        return Err(Error::Parity { twice_d0, deg2z });
    }
    Ok(DimensionData { twice_d0, d0_minus_d: diff / 2 })
}

/// `(K·w + w²)/2` when integral.
pub fn km_exponent(l: &Lattice, k: &CohClass, w: &CohClass) -> Result<i64> {
    let num = l.pairing(k, w)? + l.square(w)?;
    if num % 2 != 0 {
        return Err(Error::NonIntegralExponent(format!("(K·w + w²)/2 = {num}/2")));
    }
    Ok(num / 2)
}

/// `(-1)^k` as a Gaussian rational.
pub(crate) fn sign(k: i64) -> GaussianRational {
    if k.rem_euclid(2) == 0 {
        GaussianRational::from_int(1)
    } else {
        GaussianRational::from_int(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag11() -> Lattice {
        Lattice::diagonal(&[1, -1]).unwrap()
    }

    fn hyp() -> Lattice {
        Lattice::with_gram(vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn c(v: &[i64]) -> CohClass {
        CohClass::new(v.to_vec())
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(diag11().pairing(&c(&[1, 0]), &c(&[0, 1])).unwrap(), 0);
        assert_eq!(diag11().pairing(&c(&[2, 1]), &c(&[2, 1])).unwrap(), 3);
        assert_eq!(hyp().pairing(&c(&[1, 1]), &c(&[1, 1])).unwrap(), 2);
        assert!(diag11().pairing(&c(&[1]), &c(&[1, 0])).is_err());
    }

    #[test]
    fn characteristic_examples() {
        assert!(diag11().is_characteristic(&c(&[1, 1])).unwrap());
        assert!(!diag11().is_characteristic(&c(&[0, 1])).unwrap());
        assert!(hyp().is_characteristic(&c(&[0, 0])).unwrap());
    }

    #[test]
    fn lattice_validation() {
        assert!(Lattice::with_gram(vec![]).is_err());
        assert!(Lattice::with_gram(vec![vec![1, 2], vec![3, 1]]).is_err());
        assert!(Lattice::new(vec![vec![1, 0], vec![0, 1]], vec!["a".into(), "a".into()]).is_err());
        assert!(ManifoldData::new("x", diag11(), 0, 1).is_err());
    }

    #[test]
    fn dimension_examples() {
        // w² = -1 realized as w = e2 in diag(1, -1)
        let m = ManifoldData::new("x", diag11(), 0, 3).unwrap();
        let d = d0_mod4(&m, &c(&[0, 1]), 0).unwrap();
        assert_eq!(d.d0(), Some(-5));
        assert_eq!(d.d0_minus_d_mod4(), 3);

        let m = ManifoldData::new("x", diag11(), 1, 2).unwrap();
        let d = d0_mod4(&m, &c(&[0, 0]), 0).unwrap();
        assert_eq!(d.d0(), Some(-3));
        assert_eq!(d.d0_minus_d_mod4(), 1);

        // 2·d0 = -6 is even, deg(z) = 1 is odd: d0 - d is half-integral
        assert!(matches!(d0_mod4(&m, &c(&[0, 0]), 1), Err(Error::Parity { .. })));
        // with b1 = 0, b+ = 2 the half-integral d0 = -9/2 pairs with deg(z) = 1
        let m = ManifoldData::new("x", diag11(), 0, 2).unwrap();
        let d = d0_mod4(&m, &c(&[0, 0]), 1).unwrap();
        assert_eq!(d.d0(), None);
        assert_eq!(d.d0_minus_d, -5);
    }

    #[test]
    fn class_from_pairings_inverts_the_form() {
        let l = Lattice::with_gram(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let k = c(&[2, -3]);
        let f = l.pairings_with_basis(&k).unwrap();
        assert_eq!(l.class_from_pairings(&f).unwrap(), k);
        let l2 = Lattice::diagonal(&[2]).unwrap();
        assert!(l2.class_from_pairings(&[1]).is_err());
    }

    fn arb_lattice_and_vectors() -> impl Strategy<Value = (Lattice, Vec<i64>, Vec<i64>, Vec<i64>)> {
        (1usize..=4).prop_flat_map(|n| {
            (
                prop::collection::vec(-3i64..=3, n * n),
                prop::collection::vec(-4i64..=4, n),
                prop::collection::vec(-4i64..=4, n),
                prop::collection::vec(-4i64..=4, n),
            )
                .prop_map(move |(raw, u, v, x)| {
                    let gram = (0..n).map(|i| (0..n).map(|j| raw[i.min(j) * n + i.max(j)]).collect()).collect();
                    (Lattice::with_gram(gram).unwrap(), u, v, x)
                })
        })
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_bilinear((l, u, v, x) in arb_lattice_and_vectors()) {
            let (u, v, x) = (CohClass::new(u), CohClass::new(v), CohClass::new(x));
            prop_assert_eq!(l.pairing(&u, &v).unwrap(), l.pairing(&v, &u).unwrap());
            prop_assert_eq!(
                l.pairing(&u.add(&x), &v).unwrap(),
                l.pairing(&u, &v).unwrap() + l.pairing(&x, &v).unwrap()
            );
            prop_assert_eq!(l.pairing(&u.scale(3), &v).unwrap(), 3 * l.pairing(&u, &v).unwrap());
        }

        #[test]
        fn characteristic_vectors_form_a_coset((l, k, x, _y) in arb_lattice_and_vectors()) {
            let k = CohClass::new(k);
            let shifted = k.add(&CohClass::new(x).scale(2));
            prop_assert_eq!(l.is_characteristic(&k).unwrap(), l.is_characteristic(&shifted).unwrap());
        }

        #[test]
        fn characteristic_test_agrees_with_brute_force((l, k, _x, _y) in arb_lattice_and_vectors()) {
            let k = CohClass::new(k);
            let n = l.rank();
            let mut brute = true;
            for mask in 0..(1u32 << n) {
                let x = CohClass::new((0..n).map(|i| ((mask >> i) & 1) as i64).collect());
                if (l.pairing(&k, &x).unwrap() - l.square(&x).unwrap()).rem_euclid(2) != 0 {
                    brute = false;
                }
            }
            prop_assert_eq!(l.is_characteristic(&k).unwrap(), brute);
        }
    }
}
