use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector of a monomial. Ordered graded-lexicographically: total
/// degree first, then the exponent vectors lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    /// The monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree over the first `k` variables.
    pub fn degree_prefix(&self, k: usize) -> u32 {
        self.0[..k].iter().sum()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        self.0[i] = e;
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    /// Comma-separated exponents, the wire form used by the JSON documents.
    pub fn to_key(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        parts.join(",")
    }

    pub fn from_key(key: &str, nvars: usize) -> Result<Self> {
        let exps: std::result::Result<SmallVec<[u32; 6]>, _> = key.split(',').map(|s| s.parse::<u32>()).collect();
        let exps = exps.map_err(|_| Error::Parse(format!("invalid exponent vector {key:?}")))?;
        if exps.len() != nvars {
            return Err(Error::Parse(format!("exponent vector {key:?} has {} entries, expected {nvars}", exps.len())));
        }
        Ok(Monomial(exps))
    }

    /// All exponent vectors in `nvars` variables of total degree exactly `d`,
    /// in ascending monomial order.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(left);
                out.push(Monomial::from_exponents(prefix));
                prefix.pop();
                return;
            }
            for e in 0..=left {
                prefix.push(e);
                rec(nvars, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
        out.sort();
        out
    }

    /// All exponent vectors of total degree at most `d`, ascending.
    pub fn up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Self::of_degree(nvars, k)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_key())
    }
}

/// Ordered variable names shared by polynomials and series.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// `t1, …, tn, lambda`: the variables of a Donaldson series on a rank-`n` lattice.
    pub fn series(rank: usize) -> Self {
        let mut names: Vec<String> = (1..=rank).map(|j| format!("t{j}")).collect();
        names.push(LAMBDA.to_string());
        Vars(names.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// True when the last variable is the point-class variable `lambda`.
    pub fn has_lambda(&self) -> bool {
        self.0.last().map(|s| s == LAMBDA).unwrap_or(false)
    }

    pub fn check_same(&self, other: &Vars) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::VariableMismatch { left: self.0.to_vec(), right: other.0.to_vec() })
        }
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Name of the point-class variable.
pub const LAMBDA: &str = "lambda";
