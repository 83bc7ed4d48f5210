use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{GaussianRational, Monomial, Vars};
use crate::error::Result;

/// Sparse multivariate polynomial with Gaussian-rational coefficients.
///
/// Terms are kept in graded-lex order and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(vars: Vars) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: GaussianRational) -> Self {
        let mut p = Self::zero(vars);
        let one = Monomial::one(p.vars.len());
        p.add_term(one, c);
        p
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, GaussianRational::one())
    }

    /// The variable `x_i`.
    pub fn var(vars: Vars, i: usize) -> Self {
        let mut p = Self::zero(vars);
        let m = Monomial::var(p.vars.len(), i);
        p.add_term(m, GaussianRational::one());
        p
    }

    pub fn from_terms<I>(vars: Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c·m` in place, pruning a resulting zero.
    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        debug_assert_eq!(m.nvars(), self.vars.len());
        if c.is_zero() {
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

    pub fn nvars(&self) -> usize {
        self.vars.len()
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

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::one(self.nvars()))
    }

    /// Constant value when the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 if self.terms.keys().next().map(|m| m.degree()) == Some(0) => self.terms.values().next().cloned(),
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(i)).max()
    }

    /// Total degree over the first `k` variables.
    pub fn degree_prefix(&self, k: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_prefix(k)).max()
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.vars.check_same(&other.vars)?;
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.vars.clone());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.set_exp(i, e - 1);
            out.add_term(m2, c.scale_int(e as i64));
        }
        out
    }

    /// Directional derivative `Σ_i dir_i ∂/∂x_i` over the listed variables.
    pub fn directional(&self, dir: &[i64]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (i, &d) in dir.iter().enumerate() {
            if d != 0 {
                let part = self.partial(i).scale(&GaussianRational::from_int(d));
                for (m, c) in part.terms {
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    /// `p(c_0 x_0, …, c_{n-1} x_{n-1})`.
    pub fn scale_vars(&self, factors: &[GaussianRational]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for (i, f) in factors.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    coeff = &coeff * &f.pow(e);
                }
            }
            out.add_term(m.clone(), coeff);
        }
        out
    }

    /// Substitutes `x_i ↦ images[i]`; all images share the target variables.
    pub fn substitute(&self, target: &Vars, images: &[MultiPoly]) -> Result<MultiPoly> {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        for img in images {
            img.vars.check_same(target)?;
        }
        let mut powers: Vec<Vec<MultiPoly>> =
            images.iter().map(|img| vec![MultiPoly::one(target.clone()), img.clone()]).collect();
        let mut out = MultiPoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut acc = MultiPoly::constant(target.clone(), c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    acc = &acc * &powers[i][e];
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Drops every term whose monomial fails `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Rebinds the same exponent data to a new variable list of equal length.
    pub fn with_vars(&self, vars: Vars) -> MultiPoly {
        assert_eq!(vars.len(), self.vars.len());
        MultiPoly { vars, terms: self.terms.clone() }
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.checked_add(o).expect("variable mismatch in polynomial add")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.checked_mul(o).expect("variable mismatch in polynomial mul")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.vars.names()[i])?,
                    _ => write!(f, "*{}^{e}", self.vars.names()[i])?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
