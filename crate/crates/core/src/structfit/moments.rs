//! Recovery of `H(t) = Σ_f h_f(t) e^{f·t}` (several layers `H_k` sharing the
//! frequencies) from Taylor coefficients.
//!
//! The derivatives `∂^β H_k` span a finite-dimensional space `V` on which the
//! `∂_j` act with joint eigenvalues `f`. Functions in `V` are represented by
//! their Taylor coefficients up to degree `d1`, so the columns `∂^β H_k`
//! with `|β| ≤ d2` form a Hankel-type matrix. Once the column rank stops
//! growing (`|β| ≤ d2 − 1` already spans), multiplication matrices for the
//! `∂_j` are read off, split into joint generalized eigenspaces, and each
//! `H_k` is projected onto them.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::modp::{Fp2, FpMatrix};
use crate::algebra::{GaussianRational, Matrix, Monomial};
use crate::error::{Error, Result};

type Gr = GaussianRational;

/// Taylor data of the layers `H_0, …, H_{n−1}` in `rank` variables, valid
/// through total degree `cutoff`.
pub(crate) struct Layers {
    pub rank: usize,
    pub cutoff: u32,
    pub layers: Vec<HashMap<Vec<u32>, Gr>>,
}

/// One recovered exponential: frequency vector and the polynomial
/// coefficient of each layer (exponent vector → coefficient).
pub(crate) struct Component {
    pub freq: Vec<i64>,
    pub polys: Vec<Vec<(Vec<u32>, Gr)>>,
}

fn factorial_ratio(sum: &[u32], alpha: &[u32]) -> u128 {
    let mut f: u128 = 1;
    for (&s, &a) in sum.iter().zip(alpha) {
        for x in (a + 1)..=s {
            f *= x as u128;
        }
    }
    f
}

fn add_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

struct Hankel {
    rows: Vec<Vec<u32>>,
    /// `(β, k)`, graded in `β`; entries are `[t^α] ∂^β H_k`.
    cols: Vec<(Vec<u32>, usize)>,
    low: usize,
}

impl Hankel {
    fn new(data: &Layers, d1: u32, d2: u32) -> Self {
        let n = data.rank;
        let rows = Monomial::up_to_degree(n, d1).iter().map(|m| m.exponents().to_vec()).collect();
        let mut cols = Vec::new();
        let mut low = 0;
        for b in Monomial::up_to_degree(n, d2) {
            for k in 0..data.layers.len() {
                cols.push((b.exponents().to_vec(), k));
                if b.degree() < d2 {
                    low += 1;
                }
            }
        }
        Hankel { rows, cols, low }
    }

    fn modular(&self, reduced: &[HashMap<Vec<u32>, Fp2>]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.rows.len(), self.cols.len());
        for (i, alpha) in self.rows.iter().enumerate() {
            for (j, (beta, k)) in self.cols.iter().enumerate() {
                let s = add_exps(alpha, beta);
                if let Some(c) = reduced[*k].get(&s) {
                    m.set(i, j, c.mul(Fp2::from_u128(factorial_ratio(&s, alpha))));
                }
            }
        }
        m
    }

    fn col_index(&self) -> HashMap<(Vec<u32>, usize), usize> {
        self.cols.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect()
    }
}

/// Result of one attempt at a given `d2`.
enum Attempt {
    Done(Vec<Component>),
    Retry(Option<Error>),
}

pub(crate) fn recover(data: &Layers, bounds: &[i64]) -> Result<Vec<Component>> {
    if data.layers.iter().all(|l| l.values().all(|c| c.is_zero())) {
        return Ok(Vec::new());
    }
    let mut reduced = Vec::with_capacity(data.layers.len());
    for layer in &data.layers {
        let mut r = HashMap::new();
        for (e, c) in layer {
            let v = Fp2::reduce(c).ok_or_else(|| {
                Error::InvariantViolation("coefficient denominator divisible by the working prime".into())
            })?;
            if !v.is_zero() {
                r.insert(e.clone(), v);
            }
        }
        reduced.push(r);
    }
    let mut first_error = None;
    for d2 in 1..=data.cutoff {
        match attempt(data, &reduced, bounds, data.cutoff - d2, d2)? {
            Attempt::Done(c) => return Ok(c),
            Attempt::Retry(e) => {
                if first_error.is_none() {
                    first_error = e;
                }
            }
        }
    }
    Err(first_error.unwrap_or_else(|| {
        Error::InsufficientDepth(format!(
            "no derivative order up to {} gives a consistent exponential model",
            data.cutoff
        ))
    }))
}

fn attempt(data: &Layers, reduced: &[HashMap<Vec<u32>, Fp2>], bounds: &[i64], d1: u32, d2: u32) -> Result<Attempt> {
    let n = data.rank;
    let h = Hankel::new(data, d1, d2);
    let hm = h.modular(reduced);
    let low: Vec<usize> = (0..h.low).collect();
    let basis = hm.select_cols(&low).pivot_columns();
    // a rank capped by the number of rows is not evidence of flatness
    if basis.is_empty() || basis.len() != hm.rank() || basis.len() >= h.rows.len() {
        return Ok(Attempt::Retry(None));
    }
    let r = basis.len();
    let basis_mod = hm.select_cols(&basis);
    let pivot_rows = basis_mod.transpose().pivot_columns();
    if pivot_rows.len() != r {
        return Ok(Attempt::Retry(None));
    }
    let s = basis_mod.select_rows(&pivot_rows);

    // multiplication matrices of ∂_j in the pivot basis
    let index = h.col_index();
    let mut ops = Vec::with_capacity(n);
    for j in 0..n {
        let shifted: Vec<usize> = basis
            .iter()
            .map(|&c| {
                let (beta, k) = &h.cols[c];
                let mut b = beta.clone();
                b[j] += 1;
                index[&(b, *k)]
            })
            .collect();
        let target = hm.select_cols(&shifted);
        let Some(x) = s.solve(&target.select_rows(&pivot_rows)) else {
            return Ok(Attempt::Retry(None));
        };
        if !basis_mod.times_equals(&x, &target) {
            return Ok(Attempt::Retry(None));
        }
        ops.push(x);
    }

    let parts = match split(&ops, bounds) {
        Ok(p) => p,
        Err(e) => return Ok(Attempt::Retry(Some(e))),
    };

    // coordinates of each H_k = ∂^0 H_k in the eigenspace bases
    let zero = vec![0u32; n];
    let layer_cols: Vec<usize> = (0..data.layers.len()).map(|k| index[&(zero.clone(), k)]).collect();
    let Some(coords) = s.solve(&hm.select_cols(&layer_cols).select_rows(&pivot_rows)) else {
        return Ok(Attempt::Retry(None));
    };
    let mut big = parts[0].1.clone();
    for (_, u) in &parts[1..] {
        big = big.hcat(u);
    }
    let Some(y) = big.solve(&coords) else {
        return Ok(Attempt::Retry(None));
    };

    // monomial supports of each h_f, read off modulo p
    let mut supports = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for (freq, u) in &parts {
        let dim = u.cols();
        let rows: Vec<usize> = (offset..offset + dim).collect();
        offset += dim;
        let taylor = basis_mod.mul(&u.mul(&y.select_rows(&rows)));
        let mut support: Vec<Vec<u32>> = Vec::new();
        for k in 0..data.layers.len() {
            let phi: Vec<(&Vec<u32>, Fp2)> =
                h.rows.iter().enumerate().map(|(i, a)| (a, taylor.get(i, k))).filter(|(_, c)| !c.is_zero()).collect();
            for e in strip_exponential_mod(&phi, freq, d1) {
                if !support.contains(&e) {
                    support.push(e);
                }
            }
        }
        support.sort();
        supports.push(support);
    }

    let freqs: Vec<Vec<i64>> = parts.into_iter().map(|(f, _)| f).collect();
    let Some(comps) = solve_on_support(data, &freqs, &supports) else {
        return Ok(Attempt::Retry(None));
    };
    if residual_ok(data, &comps) {
        Ok(Attempt::Done(comps))
    } else {
        Ok(Attempt::Retry(None))
    }
}

/// `x^k / k!` for `k = 0..=cutoff`, one table per coordinate of `c`.
fn power_tables(c: &[i64], cutoff: u32) -> Vec<Vec<Gr>> {
    c.iter()
        .map(|&x| {
            let mut t = vec![Gr::one()];
            for k in 1..=cutoff {
                let prev = t[k as usize - 1].clone();
                t.push(&prev * &Gr::frac(x, k as i64));
            }
            t
        })
        .collect()
}

fn table_coeff(tables: &[Vec<Gr>], e: &[u32]) -> Gr {
    let mut acc = Gr::one();
    for (t, &k) in tables.iter().zip(e) {
        if k > 0 {
            acc = &acc * &t[k as usize];
        }
    }
    acc
}

/// Coefficients of `e^{c·t}` for the given exponent vector.
#[cfg(test)]
fn exp_coeff(c: &[i64], e: &[u32]) -> Gr {
    let cutoff = e.iter().copied().max().unwrap_or(0);
    table_coeff(&power_tables(c, cutoff), e)
}

/// Support of `trunc_{deg}(φ · e^{−f·t})`, computed modulo `p`.
fn strip_exponential_mod(phi: &[(&Vec<u32>, Fp2)], freq: &[i64], deg: u32) -> Vec<Vec<u32>> {
    let n = freq.len();
    let tables: Vec<Vec<Fp2>> = freq
        .iter()
        .map(|&f| {
            let mut t = vec![Fp2::ONE];
            for k in 1..=deg {
                let step = Fp2::from_i64(-f).mul(Fp2::from_i64(k as i64).inv());
                t.push(t[k as usize - 1].mul(step));
            }
            t
        })
        .collect();
    let mut acc: HashMap<Vec<u32>, Fp2> = HashMap::new();
    for (a, c) in phi {
        let da: u32 = a.iter().sum();
        for g in Monomial::up_to_degree(n, deg - da) {
            let mut v = *c;
            for (t, &k) in tables.iter().zip(g.exponents()) {
                v = v.mul(t[k as usize]);
            }
            let slot = acc.entry(add_exps(a, g.exponents())).or_insert(Fp2::ZERO);
            *slot = slot.add(v);
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, _)| e).collect()
}

/// Exact coefficients of `h_f` on the given supports: a square system on
/// rows chosen modulo `p`, solved for all layers at once.
fn solve_on_support(data: &Layers, freqs: &[Vec<i64>], supports: &[Vec<Vec<u32>>]) -> Option<Vec<Component>> {
    let rows: Vec<Vec<u32>> =
        Monomial::up_to_degree(data.rank, data.cutoff).iter().map(|m| m.exponents().to_vec()).collect();
    let cols: Vec<(usize, &Vec<u32>)> =
        supports.iter().enumerate().flat_map(|(f, s)| s.iter().map(move |b| (f, b))).collect();
    let tables: Vec<Vec<Vec<Gr>>> = freqs.iter().map(|f| power_tables(f, data.cutoff)).collect();
    let entry = |alpha: &[u32], (f, beta): (usize, &Vec<u32>)| -> Option<Gr> {
        if alpha.iter().zip(beta.iter()).any(|(a, b)| a < b) {
            return None;
        }
        let g: Vec<u32> = alpha.iter().zip(beta.iter()).map(|(a, b)| a - b).collect();
        Some(table_coeff(&tables[f], &g))
    };

    let mut m = FpMatrix::zeros(cols.len(), rows.len());
    for (i, alpha) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            if let Some(v) = entry(alpha, c) {
                m.set(j, i, Fp2::reduce(&v)?);
            }
        }
    }
    let chosen = m.pivot_columns();
    if chosen.len() != cols.len() {
        return None;
    }
    let a = Matrix::from_rows(
        chosen.iter().map(|&i| cols.iter().map(|&c| entry(&rows[i], c).unwrap_or_else(Gr::zero)).collect()).collect(),
    );
    let b = Matrix::from_rows(
        chosen
            .iter()
            .map(|&i| data.layers.iter().map(|l| l.get(&rows[i]).cloned().unwrap_or_else(Gr::zero)).collect())
            .collect(),
    );
    let x = a.solve(&b)?;

    let mut comps: Vec<Component> =
        freqs.iter().map(|f| Component { freq: f.clone(), polys: vec![Vec::new(); data.layers.len()] }).collect();
    for (j, &(f, beta)) in cols.iter().enumerate() {
        for k in 0..data.layers.len() {
            if !x[(j, k)].is_zero() {
                comps[f].polys[k].push((beta.clone(), x[(j, k)].clone()));
            }
        }
    }
    Some(comps)
}

/// Re-expands `Σ h_f e^{f·t}` through the cutoff and compares every layer.
fn residual_ok(data: &Layers, comps: &[Component]) -> bool {
    let n = data.rank;
    let tables: Vec<Vec<Vec<Gr>>> = comps.iter().map(|c| power_tables(&c.freq, data.cutoff)).collect();
    for (k, layer) in data.layers.iter().enumerate() {
        let mut acc: HashMap<Vec<u32>, Gr> = HashMap::new();
        for (comp, t) in comps.iter().zip(&tables) {
            for (a, c) in &comp.polys[k] {
                let da: u32 = a.iter().sum();
                if da > data.cutoff {
                    return false;
                }
                for g in Monomial::up_to_degree(n, data.cutoff - da) {
                    let v = c * &table_coeff(t, g.exponents());
                    let slot = acc.entry(add_exps(a, g.exponents())).or_insert_with(Gr::zero);
                    *slot += &v;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        let want: HashMap<&Vec<u32>, &Gr> = layer.iter().filter(|(_, c)| !c.is_zero()).collect();
        if acc.len() != want.len() || acc.iter().any(|(e, c)| want.get(e) != Some(&c)) {
            return false;
        }
    }
    true
}

/// Joint generalized eigenspaces of commuting matrices whose eigenvalues are
/// integers with `|f_j| ≤ bounds[j]`; each space is returned as a column
/// basis together with its frequency vector.
fn split(ops: &[FpMatrix], bounds: &[i64]) -> Result<Vec<(Vec<i64>, FpMatrix)>> {
    let r = ops[0].rows();
    let mut parts = vec![(Vec::new(), FpMatrix::identity(r))];
    for (j, x) in ops.iter().enumerate() {
        let mut next = Vec::new();
        for (freq, u) in parts {
            let xu = x.mul(&u);
            let rows = u.transpose().pivot_columns();
            let y = u
                .select_rows(&rows)
                .solve(&xu.select_rows(&rows))
                .ok_or_else(|| Error::InvariantViolation("eigenspace basis is singular".into()))?;
            if !u.times_equals(&y, &xu) {
                return Err(Error::InvariantViolation("derivative operators do not commute".into()));
            }
            let dim = y.rows();
            let mut found = 0;
            for mu in -bounds[j]..=bounds[j] {
                let w = y.shift(Fp2::from_i64(mu)).pow(dim as u32).kernel();
                if w.cols() > 0 {
                    found += w.cols();
                    let mut f = freq.clone();
                    f.push(mu);
                    next.push((f, u.mul(&w)));
                }
            }
            if found != dim {
                return Err(Error::FrequencyOutsideGrid(format!(
                    "direction {}: {} eigenvalue(s) are not integers in [-{}, {}]",
                    j + 1,
                    dim - found,
                    bounds[j],
                    bounds[j]
                )));
            }
        }
        parts = next;
    }
    Ok(parts)
}
