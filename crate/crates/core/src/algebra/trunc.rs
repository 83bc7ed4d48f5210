use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{GaussianRational, Monomial, MultiPoly, Vars};
use crate::error::{Error, Result};

/// Power series truncated at total degree `cutoff` in the ordinary variables,
/// with an independent cutoff for a trailing `lambda` variable when present.
///
/// Every ring operation returns exactly the truncation of the untruncated
/// result.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    vars: Vars,
    cutoff: u32,
    lambda_cutoff: u32,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl TruncSeries {
    pub fn zero(vars: Vars, cutoff: u32, lambda_cutoff: u32) -> Self {
        let lambda_cutoff = if vars.has_lambda() { lambda_cutoff } else { 0 };
        TruncSeries { vars, cutoff, lambda_cutoff, terms: BTreeMap::new() }
    }

    pub fn one(vars: Vars, cutoff: u32, lambda_cutoff: u32) -> Self {
        let mut s = Self::zero(vars, cutoff, lambda_cutoff);
        let m = Monomial::one(s.vars.len());
        s.add_term(m, GaussianRational::one());
        s
    }

    /// Truncation of a polynomial.
    pub fn from_poly(p: &MultiPoly, cutoff: u32, lambda_cutoff: u32) -> Self {
        let mut s = Self::zero(p.vars().clone(), cutoff, lambda_cutoff);
        for (m, c) in p.terms() {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    /// Builds a series from raw terms; terms outside the cutoffs are dropped.
    pub fn from_terms<I>(vars: Vars, cutoff: u32, lambda_cutoff: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut s = Self::zero(vars, cutoff, lambda_cutoff);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// `Σ_k p^k / k!`, truncated.
    pub fn exp(p: &MultiPoly, cutoff: u32, lambda_cutoff: u32) -> Result<Self> {
        if !p.constant_term().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let mut sum = Self::one(p.vars().clone(), cutoff, lambda_cutoff);
        let mut term = sum.clone();
        let mut k = 1i64;
        loop {
            term = term.mul_poly(p)?.scale(&GaussianRational::frac(1, k));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
            k += 1;
        }
        Ok(sum)
    }

    fn t_vars(&self) -> usize {
        if self.vars.has_lambda() {
            self.vars.len() - 1
        } else {
            self.vars.len()
        }
    }

    /// Whether `m` lies inside this series' cutoffs.
    pub fn admits(&self, m: &Monomial) -> bool {
        let nt = self.t_vars();
        m.degree_prefix(nt) <= self.cutoff && (nt == self.vars.len() || m.exp(nt) <= self.lambda_cutoff)
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() || !self.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn lambda_cutoff(&self) -> u32 {
        self.lambda_cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> + Clone {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// The stored terms as a polynomial (forgetting the cutoffs).
    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(self.vars.clone(), self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    fn check_compatible(&self, o: &TruncSeries) -> Result<()> {
        self.vars.check_same(&o.vars)?;
        if self.cutoff != o.cutoff || self.lambda_cutoff != o.lambda_cutoff {
            return Err(Error::CutoffMismatch(self.cutoff, self.lambda_cutoff, o.cutoff, o.lambda_cutoff));
        }
        Ok(())
    }

    pub fn add(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TruncSeries {
        self.scale(&-GaussianRational::one())
    }

    pub fn scale(&self, c: &GaussianRational) -> TruncSeries {
        let mut out = Self::zero(self.vars.clone(), self.cutoff, self.lambda_cutoff);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        out
    }

    /// Truncated product.
    pub fn mul(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.check_compatible(o)?;
        Ok(self.mul_terms(o.terms.iter()))
    }

    /// Truncated product with a polynomial.
    pub fn mul_poly(&self, p: &MultiPoly) -> Result<TruncSeries> {
        self.vars.check_same(p.vars())?;
        Ok(self.mul_terms(p.terms()))
    }

    fn mul_terms<'a, I>(&self, other: I) -> TruncSeries
    where
        I: Iterator<Item = (&'a Monomial, &'a GaussianRational)> + Clone,
    {
        let nt = self.t_vars();
        let has_l = nt < self.vars.len();
        let mut out = Self::zero(self.vars.clone(), self.cutoff, self.lambda_cutoff);
        let other: Vec<(&Monomial, &GaussianRational, u32, u32)> = other
            .map(|(m, c)| {
                let l = if has_l { m.exp(nt) } else { 0 };
                (m, c, m.degree_prefix(nt), l)
            })
            .filter(|&(_, _, d, l)| d <= self.cutoff && l <= self.lambda_cutoff)
            .collect();
        for (ma, ca) in &self.terms {
            let da = ma.degree_prefix(nt);
            let la = if has_l { ma.exp(nt) } else { 0 };
            for &(mb, cb, db, lb) in &other {
                if da + db > self.cutoff || la + lb > self.lambda_cutoff {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Re-truncates at smaller cutoffs.
    pub fn truncate(&self, cutoff: u32, lambda_cutoff: u32) -> TruncSeries {
        let mut out = Self::zero(self.vars.clone(), cutoff.min(self.cutoff), lambda_cutoff.min(self.lambda_cutoff));
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// `∂/∂x_i`. The result is valid one degree lower in the grading of `x_i`.
    pub fn partial(&self, i: usize) -> Result<TruncSeries> {
        let is_lambda = i == self.t_vars();
        let (cut, lcut) = if is_lambda {
            if self.lambda_cutoff == 0 {
                return Err(Error::InsufficientCutoff("lambda cutoff is 0".into()));
            }
            (self.cutoff, self.lambda_cutoff - 1)
        } else {
            if self.cutoff == 0 {
                return Err(Error::InsufficientCutoff("cutoff is 0".into()));
            }
            (self.cutoff - 1, self.lambda_cutoff)
        };
        let p = self.to_poly().partial(i);
        Ok(TruncSeries::from_poly(&p, cut, lcut))
    }

    /// `f(c_0 x_0, …)`.
    pub fn scale_vars(&self, factors: &[GaussianRational]) -> TruncSeries {
        TruncSeries::from_poly(&self.to_poly().scale_vars(factors), self.cutoff, self.lambda_cutoff)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {}, lambda^{})", self.to_poly(), self.cutoff + 1, self.lambda_cutoff + 1)
    }
}
