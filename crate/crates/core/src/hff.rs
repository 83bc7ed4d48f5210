//! Reduced and effective Fukaya–Floer rings of `Σ×S¹` and the differential
//! operators they impose on restricted generating functions.
//!
//! With `α = 2∂/∂s` and `β = −4∂/∂λ`, an `α`-eigenvalue `μ` becomes the
//! `∂s`-eigenvalue `μ/2` and a `β`-eigenvalue `ν` the `∂λ`-eigenvalue `−ν/4`.

use num_traits::{One, Zero};

use crate::algebra::{GaussianRational, Monomial, MultiPoly, TruncSeries, Vars, LAMBDA};
use crate::error::{Error, Result};

type Gr = GaussianRational;

/// `c0 + c1·t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearInT {
    pub c0: Gr,
    pub c1: Gr,
}

impl LinearInT {
    pub fn new(c0: Gr, c1: Gr) -> Self {
        LinearInT { c0, c1 }
    }

    pub fn constant(c0: Gr) -> Self {
        LinearInT { c0, c1: Gr::zero() }
    }

    fn scale(&self, k: &Gr) -> Self {
        LinearInT { c0: &self.c0 * k, c1: &self.c1 * k }
    }
}

impl std::fmt::Display for LinearInT {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.c0.is_zero(), self.c1.is_zero()) {
            (_, true) => write!(f, "{}", self.c0),
            (true, false) => write!(f, "({})*t", self.c1),
            (false, false) => write!(f, "{} + ({})*t", self.c0, self.c1),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectrumEntry {
    pub r: i64,
    pub alpha: LinearInT,
    pub beta: Gr,
    /// `γ` acts nilpotently on every summand.
    pub gamma_nilpotent: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HffSpectrum {
    pub genus: u32,
    pub nilpotency: u32,
    pub entries: Vec<SpectrumEntry>,
}

/// Eigenvalues of `(α, β, γ)` on the summands `r = −(g−1), …, g−1`.
pub fn spectrum(genus: u32, nilpotency: u32) -> Result<HffSpectrum> {
    if genus < 1 {
        return Err(Error::InvalidInput("genus must be at least 1".into()));
    }
    if nilpotency < 1 {
        return Err(Error::InvalidInput("nilpotency order must be at least 1".into()));
    }
    let g = genus as i64;
    let entries = (-(g - 1)..=g - 1)
        .map(|r| {
            let (alpha, beta) = if r % 2 == 0 {
                (LinearInT::new(Gr::i().scale_int(4 * r), Gr::from_int(-2)), Gr::from_int(8))
            } else {
                (LinearInT::new(Gr::from_int(4 * r), Gr::from_int(2)), Gr::from_int(-8))
            };
            SpectrumEntry { r, alpha, beta, gamma_nilpotent: true }
        })
        .collect();
    Ok(HffSpectrum { genus, nilpotency, entries })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OpVar {
    S,
    Lambda,
}

impl OpVar {
    pub fn as_str(self) -> &'static str {
        match self {
            OpVar::S => "s",
            OpVar::Lambda => "lambda",
        }
    }
}

/// `(∂_var − eigenvalue)^mult`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpFactor {
    pub var: OpVar,
    pub eigenvalue: LinearInT,
    pub mult: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AnnihilatorOp {
    pub factors: Vec<OpFactor>,
}

impl AnnihilatorOp {
    pub fn total_mult(&self, var: OpVar) -> u32 {
        self.factors.iter().filter(|f| f.var == var).map(|f| f.mult).sum()
    }

    pub fn eigenvalues(&self, var: OpVar) -> Vec<&LinearInT> {
        self.factors.iter().filter(|f| f.var == var).map(|f| &f.eigenvalue).collect()
    }

    pub fn compose(&self, other: &AnnihilatorOp) -> AnnihilatorOp {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        AnnihilatorOp { factors }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Annihilators {
    pub plus: AnnihilatorOp,
    pub minus: AnnihilatorOp,
    pub combined: AnnihilatorOp,
}

/// `∂s`-eigenvalue `2r + t·dΣ` (odd `r`) or `2r𝐢 − t·dΣ` (even `r`).
fn s_eigenvalue(entry: &SpectrumEntry, dsigma: i64) -> LinearInT {
    // α/2 with t rescaled by D·Σ; the t-coefficient of α is ±2
    let half = Gr::frac(1, 2);
    let a = entry.alpha.scale(&half);
    LinearInT::new(a.c0, a.c1.scale_int(dsigma))
}

fn lambda_factor(beta: i64, mult: u32) -> OpFactor {
    // ∂λ-eigenvalue −β/4
    OpFactor { var: OpVar::Lambda, eigenvalue: LinearInT::constant(Gr::frac(-beta, 4)), mult }
}

fn s_factors(genus: u32, nilpotency: u32, dsigma: i64, odd: bool) -> Result<Vec<OpFactor>> {
    let sp = spectrum(genus, nilpotency)?;
    Ok(sp
        .entries
        .iter()
        .filter(|e| (e.r % 2 != 0) == odd)
        .map(|e| OpFactor { var: OpVar::S, eigenvalue: s_eigenvalue(e, dsigma), mult: nilpotency })
        .collect())
}

/// The Plus and Minus operators and their product.
pub fn annihilators(genus: u32, nilpotency: u32, dsigma: i64) -> Result<Annihilators> {
    let mut plus = s_factors(genus, nilpotency, dsigma, true)?;
    plus.push(lambda_factor(-8, nilpotency));
    let mut minus = s_factors(genus, nilpotency, dsigma, false)?;
    minus.push(lambda_factor(8, nilpotency));
    let plus = AnnihilatorOp { factors: plus };
    let minus = AnnihilatorOp { factors: minus };
    let combined = plus.compose(&minus);
    Ok(Annihilators { plus, minus, combined })
}

/// The sharper relations satisfied by `D^w + D^{w+Σ}` when `w·Σ` is odd:
/// `(∂λ+2)^N ∏_{r odd}(∂s − (2r + t·dΣ))^N` and `(∂λ−2)^N ∏_{r even}(∂s − (2r𝐢 − t·dΣ))^N`.
pub fn gluing_relations(genus: u32, nilpotency: u32, dsigma: i64) -> Result<(AnnihilatorOp, AnnihilatorOp)> {
    let mut odd = s_factors(genus, nilpotency, dsigma, true)?;
    odd.push(lambda_factor(8, nilpotency));
    let mut even = s_factors(genus, nilpotency, dsigma, false)?;
    even.push(lambda_factor(-8, nilpotency));
    Ok((AnnihilatorOp { factors: odd }, AnnihilatorOp { factors: even }))
}

fn index_of(vars: &Vars, name: &str) -> Result<usize> {
    vars.index_of(name).ok_or_else(|| Error::InvalidInput(format!("series has no variable {name:?}")))
}

/// Applies `op` to `f`, a truncated series in `t, s, lambda` (the `t`
/// variable may be absent when every eigenvalue is constant).
pub fn apply_op(f: &TruncSeries, op: &AnnihilatorOp) -> Result<TruncSeries> {
    let vars = f.vars().clone();
    let s_mult = op.total_mult(OpVar::S);
    let l_mult = op.total_mult(OpVar::Lambda);
    if s_mult > 0 && f.cutoff() <= s_mult {
        return Err(Error::InsufficientCutoff(format!(
            "cutoff {} does not exceed the s-multiplicity {s_mult}",
            f.cutoff()
        )));
    }
    if l_mult > 0 && (!vars.has_lambda() || f.lambda_cutoff() < l_mult) {
        return Err(Error::InsufficientCutoff(format!(
            "lambda cutoff {} is below the λ-multiplicity {l_mult}",
            f.lambda_cutoff()
        )));
    }
    let s_idx = if s_mult > 0 { Some(index_of(&vars, "s")?) } else { None };
    let t_poly = vars.index_of("t").map(|i| MultiPoly::var(vars.clone(), i));
    let mut cur = f.clone();
    for factor in &op.factors {
        let idx = match factor.var {
            OpVar::S => s_idx.expect("s variable"),
            OpVar::Lambda => index_of(&vars, LAMBDA)?,
        };
        let c0 = &factor.eigenvalue.c0;
        let c1 = &factor.eigenvalue.c1;
        let shift = if c1.is_zero() {
            MultiPoly::constant(vars.clone(), c0.clone())
        } else {
            let t = t_poly
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("eigenvalue depends on t but the series has no t".into()))?;
            &MultiPoly::constant(vars.clone(), c0.clone()) + &t.scale(c1)
        };
        for _ in 0..factor.mult {
            let d = cur.partial(idx)?;
            let base = cur.truncate(d.cutoff(), d.lambda_cutoff());
            cur = d.sub(&base.mul_poly(&shift)?)?;
        }
    }
    Ok(cur)
}

/// Whether `op` kills `f` up to the cutoff that remains valid after
/// differentiation.
pub fn check_annihilated(f: &TruncSeries, op: &AnnihilatorOp) -> Result<bool> {
    Ok(apply_op(f, op)?.is_zero())
}

/// `⊕_r C[[t]][A, B, C]/(A^N, B^N, C^N)` with `α = μ_α(r) + A`,
/// `β = μ_β(r) + B`, `γ = C` on summand `r`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EffectiveRing {
    spectrum: HffSpectrum,
    t_cutoff: u32,
    vars: Vars,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElement {
    genus: u32,
    nilpotency: u32,
    t_cutoff: u32,
    components: Vec<MultiPoly>,
}

impl EffectiveRing {
    pub fn new(genus: u32, nilpotency: u32, t_cutoff: u32) -> Result<Self> {
        Ok(EffectiveRing { spectrum: spectrum(genus, nilpotency)?, t_cutoff, vars: Vars::new(&["t", "A", "B", "C"]) })
    }

    pub fn spectrum(&self) -> &HffSpectrum {
        &self.spectrum
    }

    fn element(&self, f: impl Fn(&SpectrumEntry) -> MultiPoly) -> RingElement {
        let comps = self.spectrum.entries.iter().map(|e| self.reduce(&f(e))).collect();
        RingElement {
            genus: self.spectrum.genus,
            nilpotency: self.spectrum.nilpotency,
            t_cutoff: self.t_cutoff,
            components: comps,
        }
    }

    fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        reduce(p, self.spectrum.nilpotency, self.t_cutoff)
    }

    fn lin(&self, l: &LinearInT) -> MultiPoly {
        &MultiPoly::constant(self.vars.clone(), l.c0.clone()) + &MultiPoly::var(self.vars.clone(), 0).scale(&l.c1)
    }

    pub fn scalar(&self, c: Gr) -> RingElement {
        self.element(|_| MultiPoly::constant(self.vars.clone(), c.clone()))
    }

    pub fn one(&self) -> RingElement {
        self.scalar(Gr::one())
    }

    pub fn zero(&self) -> RingElement {
        self.scalar(Gr::zero())
    }

    /// The formal variable `t`.
    pub fn t(&self) -> RingElement {
        self.element(|_| MultiPoly::var(self.vars.clone(), 0))
    }

    pub fn alpha(&self) -> RingElement {
        self.element(|e| &self.lin(&e.alpha) + &MultiPoly::var(self.vars.clone(), 1))
    }

    pub fn beta(&self) -> RingElement {
        self.element(|e| {
            &MultiPoly::constant(self.vars.clone(), e.beta.clone()) + &MultiPoly::var(self.vars.clone(), 2)
        })
    }

    pub fn gamma(&self) -> RingElement {
        self.element(|_| MultiPoly::var(self.vars.clone(), 3))
    }

    /// `α − μ_α(r)` on each summand.
    pub fn alpha_shifted(&self) -> RingElement {
        self.element(|_| MultiPoly::var(self.vars.clone(), 1))
    }

    /// `β − μ_β(r)` on each summand.
    pub fn beta_shifted(&self) -> RingElement {
        self.element(|_| MultiPoly::var(self.vars.clone(), 2))
    }
}

fn reduce(p: &MultiPoly, n: u32, t_cutoff: u32) -> MultiPoly {
    p.filter_terms(|m: &Monomial| m.exp(0) <= t_cutoff && (1..4).all(|i| m.exp(i) < n))
}

impl RingElement {
    fn check(&self, o: &RingElement) -> Result<()> {
        if (self.genus, self.nilpotency, self.t_cutoff) != (o.genus, o.nilpotency, o.t_cutoff) {
            return Err(Error::InvalidInput("ring elements have different parameters".into()));
        }
        Ok(())
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        let components = self.components.iter().zip(&o.components).map(|(a, b)| a + b).collect();
        Ok(RingElement { components, ..self.clone() })
    }

    pub fn sub(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        let components = self.components.iter().zip(&o.components).map(|(a, b)| a - b).collect();
        Ok(RingElement { components, ..self.clone() })
    }

    pub fn mul(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        let components = self
            .components
            .iter()
            .zip(&o.components)
            .map(|(a, b)| reduce(&(a * b), self.nilpotency, self.t_cutoff))
            .collect();
        Ok(RingElement { components, ..self.clone() })
    }

    pub fn pow(&self, k: u32) -> RingElement {
        let vars = self.components[0].vars().clone();
        let mut acc = RingElement { components: vec![MultiPoly::one(vars); self.components.len()], ..self.clone() };
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }
}
