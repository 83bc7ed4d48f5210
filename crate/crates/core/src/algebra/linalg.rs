//! Dense exact linear algebra over the Gaussian rationals.
//!
//! Elimination picks the first nonzero pivot in row order, so every result is
//! a deterministic function of the input.

use num_traits::{One, Zero};

use super::GaussianRational;

type Gr = GaussianRational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gr>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Gr::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Gr::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gr>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_columns(cols: &[Vec<Gr>]) -> Self {
        let c = cols.len();
        let r = cols.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Gr> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(idx.len(), self.cols);
        for (a, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m[(a, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (b, &j) in idx.iter().enumerate() {
                m[(i, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Gr]) -> Vec<Gr> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Gr::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// `self - μ·I`.
    pub fn shift(&self, mu: &Gr) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] = &m[(i, i)] - mu;
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = &m[(r, j)] * &inv;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let d = &f * &m[(r, j)];
                        m[(i, j)] -= &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Indices of a maximal independent set of columns (first-found order).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Indices of a maximal independent set of rows (first-found order).
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().rref().1
    }

    /// Solves `self · X = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let (red, piv) = self.hcat(rhs).rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let mut x = Matrix::zeros(n, rhs.cols);
        for i in 0..n {
            for j in 0..rhs.cols {
                x[(i, j)] = red[(i, n + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        self.solve(&Matrix::identity(self.rows))
    }

    /// Basis of the right kernel, one vector per column of the result.
    pub fn kernel(&self) -> Matrix {
        let (red, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = Gr::one();
            for (r, &p) in piv.iter().enumerate() {
                basis[(p, k)] = -&red[(r, f)];
            }
        }
        basis
    }

    pub fn pow(&self, k: u32) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Characteristic polynomial `det(x·I - self)` via reduction to upper
    /// Hessenberg form.
    pub fn charpoly(&self) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| !h[(i, j)].is_zero()) else {
                continue;
            };
            h.swap_rows(p, j + 1);
            h.swap_cols(p, j + 1);
            let piv = h[(j + 1, j)].clone();
            for r in j + 2..n {
                if h[(r, j)].is_zero() {
                    continue;
                }
                let u = &h[(r, j)] / &piv;
                for c in 0..n {
                    if !h[(j + 1, c)].is_zero() {
                        let d = &u * &h[(j + 1, c)];
                        h[(r, c)] -= &d;
                    }
                }
                for rr in 0..n {
                    if !h[(rr, r)].is_zero() {
                        let d = &u * &h[(rr, r)];
                        h[(rr, j + 1)] += &d;
                    }
                }
            }
        }
        let mut p: Vec<UniPoly> = vec![UniPoly::one()];
        for m in 0..n {
            let lin = UniPoly::new(vec![-&h[(m, m)], Gr::one()]);
            let mut next = lin.mul(&p[m]);
            let mut prod = Gr::one();
            for i in (0..m).rev() {
                prod = &prod * &h[(i + 1, i)];
                if prod.is_zero() {
                    break;
                }
                let c = &h[(i, m)] * &prod;
                if !c.is_zero() {
                    next = next.sub(&p[i].scale(&c));
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Gr;
    fn index(&self, (i, j): (usize, usize)) -> &Gr {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Gr {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense univariate polynomial, coefficients from low to high degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly(Vec<Gr>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Gr>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn one() -> Self {
        UniPoly(vec![Gr::one()])
    }

    pub fn coeffs(&self) -> &[Gr] {
        &self.0
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, x: &Gr) -> Gr {
        let mut acc = Gr::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Gr) -> UniPoly {
        UniPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        let z = Gr::zero();
        UniPoly::new((0..n).map(|k| self.0.get(k).unwrap_or(&z) - o.0.get(k).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![Gr::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder by `x - root`.
    pub fn deflate(&self, root: &Gr) -> (UniPoly, Gr) {
        if self.0.is_empty() {
            return (UniPoly(Vec::new()), Gr::zero());
        }
        let n = self.0.len();
        let mut q = vec![Gr::zero(); n - 1];
        let mut carry = Gr::zero();
        for k in (0..n).rev() {
            let v = &self.0[k] + &(&carry * root);
            if k == 0 {
                return (UniPoly::new(q), v);
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Multiplicity of `root` and the cofactor left after removing it.
    pub fn root_multiplicity(&self, root: &Gr) -> (u32, UniPoly) {
        let mut p = self.clone();
        let mut mult = 0;
        while p.degree() > 0 {
            let (q, r) = p.deflate(root);
            if !r.is_zero() {
                break;
            }
            p = q;
            mult += 1;
        }
        (mult, p)
    }
}
