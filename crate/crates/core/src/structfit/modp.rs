//! Arithmetic in `F_p[i] = F_{p²}` with `p = 2^61 − 1`.
//!
//! Since `p ≡ 3 (mod 4)`, `x² + 1` is irreducible and Gaussian rationals
//! whose denominators avoid `p` reduce homomorphically into a field. Ranks
//! and pivot positions are found here and then confirmed exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::GaussianRational;

const P: u64 = (1 << 61) - 1;

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn mul(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let lo = (x as u64) & P;
    let hi = (x >> 61) as u64;
    add(lo, hi)
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let r = n.mod_floor(&BigInt::from(P));
    r.to_u64().expect("reduced value fits")
}

/// An element `a + b i` of `F_{p²}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Fp2(u64, u64);

impl Fp2 {
    pub const ZERO: Fp2 = Fp2(0, 0);
    pub const ONE: Fp2 = Fp2(1, 0);

    pub fn from_i64(x: i64) -> Fp2 {
        let v = x.unsigned_abs() % P;
        Fp2(if x < 0 { sub(0, v) } else { v }, 0)
    }

    pub fn from_u128(x: u128) -> Fp2 {
        Fp2((x % P as u128) as u64, 0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0 && self.1 == 0
    }

    /// `None` if a denominator is divisible by `p`.
    pub fn reduce(x: &GaussianRational) -> Option<Fp2> {
        let part = |r: &num_rational::BigRational| -> Option<u64> {
            if r.is_zero() {
                return Some(0);
            }
            let d = reduce_int(r.denom());
            if d == 0 {
                return None;
            }
            let n = reduce_int(&r.numer().abs());
            let v = mul(n, inv(d));
            Some(if r.is_negative() { sub(0, v) } else { v })
        };
        Some(Fp2(part(x.re())?, part(x.im())?))
    }

    pub fn add(self, o: Fp2) -> Fp2 {
        Fp2(add(self.0, o.0), add(self.1, o.1))
    }

    pub fn sub(self, o: Fp2) -> Fp2 {
        Fp2(sub(self.0, o.0), sub(self.1, o.1))
    }

    pub fn mul(self, o: Fp2) -> Fp2 {
        Fp2(sub(mul(self.0, o.0), mul(self.1, o.1)), add(mul(self.0, o.1), mul(self.1, o.0)))
    }

    pub fn neg(self) -> Fp2 {
        Fp2(sub(0, self.0), sub(0, self.1))
    }

    pub fn inv(self) -> Fp2 {
        let n = add(mul(self.0, self.0), mul(self.1, self.1));
        let ni = inv(n);
        Fp2(mul(self.0, ni), sub(0, mul(self.1, ni)))
    }
}

/// Row-major dense matrix over `F_{p²}`.
#[derive(Clone, Debug)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fp2>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, data: vec![Fp2::ZERO; rows * cols] }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fp2) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> Fp2 {
        self.data[i * self.cols + j]
    }

    pub fn select_cols(&self, idx: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn identity(n: usize) -> FpMatrix {
        let mut m = FpMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fp2::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            out.data[ii * self.cols..(ii + 1) * self.cols]
                .copy_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        out
    }

    pub fn hcat(&self, o: &FpMatrix) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..o.cols {
                out.set(i, self.cols + j, o.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, o: &FpMatrix) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).add(a.mul(o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self − μ·I`.
    pub fn shift(&self, mu: Fp2) -> FpMatrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.set(i, i, self.get(i, i).sub(mu));
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> FpMatrix {
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Reduced row echelon form and its pivot columns.
    fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let pinv = m.get(row, col).inv();
            for j in col..m.cols {
                let v = m.get(row, j).mul(pinv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col);
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(r, j).sub(f.mul(m.get(row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Pivot columns of the reduced row echelon form.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Column basis of the null space.
    pub fn kernel(&self) -> FpMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FpMatrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, Fp2::ONE);
            for (i, &p) in pivots.iter().enumerate() {
                out.set(p, k, r.get(i, f).neg());
            }
        }
        out
    }

    /// `X` with `self · X = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &FpMatrix) -> Option<FpMatrix> {
        let n = self.rows;
        if self.cols != n {
            return None;
        }
        let (r, pivots) = self.hcat(rhs).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = FpMatrix::zeros(n, rhs.cols);
        for i in 0..n {
            for j in 0..rhs.cols {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Whether `self · x = rhs` for the given `x`.
    pub fn times_equals(&self, x: &FpMatrix, rhs: &FpMatrix) -> bool {
        for i in 0..self.rows {
            for j in 0..x.cols {
                let mut acc = Fp2::ZERO;
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = acc.add(a.mul(x.get(k, j)));
                    }
                }
                if acc != rhs.get(i, j) {
                    return false;
                }
            }
        }
        true
    }
}
