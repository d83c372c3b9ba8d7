//! Dense exact linear algebra over a `Field` (Q or a number field):
//! reduced row echelon form, kernels, presentation solving and
//! characteristic polynomials. No floating point anywhere.

use crate::nf::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<F: Field> {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<F::Elem>,
}

impl<F: Field> Mat<F> {
    pub fn zero(f: &F, nrows: usize, ncols: usize) -> Self {
        Mat { nrows, ncols, data: vec![f.zero(); nrows * ncols] }
    }
    pub fn identity(f: &F, n: usize) -> Self {
        let mut m = Mat::zero(f, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = f.one();
        }
        m
    }
    pub fn from_rows(f: &F, rows: Vec<Vec<F::Elem>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols);
            data.extend(r);
        }
        let _ = f;
        Mat { nrows, ncols, data }
    }
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.ncols + j]
    }
    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut F::Elem {
        &mut self.data[i * self.ncols + j]
    }
    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }
    pub fn transpose(&self, f: &F) -> Self {
        let mut t = Mat::zero(f, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }
    pub fn matmul(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut out = Mat::zero(f, self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.at(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.at(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let t = f.mul(a, b);
                    *out.at_mut(i, j) = f.add(out.at(i, j), &t);
                }
            }
        }
        out
    }
    pub fn apply(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.ncols {
                    if !f.is_zero(self.at(i, j)) && !f.is_zero(&v[j]) {
                        acc = f.add(&acc, &f.mul(self.at(i, j), &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, f: &F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.ncols {
            if r >= self.nrows {
                break;
            }
            // find pivot
            let mut pr = None;
            for i in r..self.nrows {
                if !f.is_zero(self.at(i, c)) {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            // swap rows
            if pr != r {
                for j in 0..self.ncols {
                    self.data.swap(r * self.ncols + j, pr * self.ncols + j);
                }
            }
            // scale row r
            let inv = f.inv(self.at(r, c));
            for j in c..self.ncols {
                *self.at_mut(r, j) = f.mul(self.at(r, j), &inv);
            }
            // eliminate
            for i in 0..self.nrows {
                if i == r || f.is_zero(self.at(i, c)) {
                    continue;
                }
                let factor = self.at(i, c).clone();
                for j in c..self.ncols {
                    let t = f.mul(&factor, self.at(r, j));
                    *self.at_mut(i, j) = f.sub(self.at(i, j), &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right kernel {v : Mv = 0}.
    pub fn kernel(&self, f: &F) -> Vec<Vec<F::Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().cloned().collect();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![f.zero(); self.ncols];
            v[fc] = f.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.at(ri, fc));
            }
            basis.push(v);
        }
        basis
    }

    /// Rank of the matrix.
    pub fn rank(&self, f: &F) -> usize {
        let mut m = self.clone();
        m.rref(f).len()
    }

    /// Characteristic polynomial det(xI - A) by the Hessenberg method,
    /// coefficients low-to-high (monic, length n+1).
    pub fn charpoly(&self, f: &F) -> Vec<F::Elem> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        if n == 0 {
            return vec![f.one()];
        }
        // reduce to Hessenberg form by similarity transforms
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            // find nonzero entry below subdiagonal
            let mut piv = None;
            for i in c + 1..n {
                if !f.is_zero(h.at(i, c)) {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            if piv != c + 1 {
                // swap rows and columns piv <-> c+1
                for j in 0..n {
                    h.data.swap(piv * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + piv, i * n + c + 1);
                }
            }
            let inv = f.inv(h.at(c + 1, c));
            for i in c + 2..n {
                if f.is_zero(h.at(i, c)) {
                    continue;
                }
                let factor = f.mul(h.at(i, c), &inv);
                // row_i -= factor * row_{c+1}
                for j in 0..n {
                    let t = f.mul(&factor, h.at(c + 1, j));
                    *h.at_mut(i, j) = f.sub(h.at(i, j), &t);
                }
                // col_{c+1} += factor * col_i  (similarity)
                for r in 0..n {
                    let t = f.mul(&factor, h.at(r, i));
                    *h.at_mut(r, c + 1) = f.add(h.at(r, c + 1), &t);
                }
            }
        }
        // charpoly of Hessenberg matrix by the recurrence
        // p_0 = 1, p_k = (x - h[k-1][k-1]) p_{k-1}
        //              - sum_{i=1..k-1} h[k-1-i][k-1] (prod subdiag) p_{k-1-i}
        let mut polys: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
        for k in 1..=n {
            // (x - h[k-1][k-1]) * p_{k-1}
            let prev = &polys[k - 1];
            let mut pk = vec![f.zero(); k + 1];
            for (i, c) in prev.iter().enumerate() {
                pk[i + 1] = f.add(&pk[i + 1], c);
                let t = f.mul(h.at(k - 1, k - 1), c);
                pk[i] = f.sub(&pk[i], &t);
            }
            let mut subprod = f.one();
            for i in 1..k {
                subprod = f.mul(&subprod, h.at(k - i, k - i - 1));
                if f.is_zero(&subprod) {
                    break;
                }
                let coeff = f.mul(&subprod, h.at(k - 1 - i, k - 1));
                if f.is_zero(&coeff) {
                    continue;
                }
                for (j, c) in polys[k - 1 - i].iter().enumerate() {
                    let t = f.mul(&coeff, c);
                    pk[j] = f.sub(&pk[j], &t);
                }
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }
}

/// Solve a presentation: given relation rows over `ngens` generators,
/// return (basis generator indices, expression of every generator as a
/// vector over that basis).
pub fn solve_presentation<F: Field>(f: &F, relations: Vec<Vec<F::Elem>>, ngens: usize) -> (Vec<usize>, Vec<Vec<F::Elem>>) {
    let mut m = Mat::from_rows(f, relations);
    if m.nrows == 0 {
        m = Mat::zero(f, 0, ngens);
    }
    assert_eq!(m.ncols, ngens);
    let pivots = m.rref(f);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().cloned().collect();
    let basis: Vec<usize> = (0..ngens).filter(|c| !pivot_set.contains(c)).collect();
    let basis_pos: std::collections::HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut expr = vec![vec![f.zero(); basis.len()]; ngens];
    for &b in &basis {
        expr[b][basis_pos[&b]] = f.one();
    }
    for (ri, &pc) in pivots.iter().enumerate() {
        // pivot generator = -sum over free columns of entry * free gen
        for (&b, &bp) in basis_pos.iter() {
            let c = m.at(ri, b);
            if !f.is_zero(c) {
                expr[pc][bp] = f.neg(c);
            }
        }
    }
    (basis, expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::{q_from_i64, QQ};

    #[test]
    fn rref_kernel() {
        let f = QQ;
        // x + y + z = 0, x - z = 0  => kernel spanned by (1, -2, 1)
        let m = Mat::from_rows(
            &f,
            vec![
                vec![q_from_i64(1), q_from_i64(1), q_from_i64(1)],
                vec![q_from_i64(1), q_from_i64(0), q_from_i64(-1)],
            ],
        );
        let k = m.kernel(&f);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // check Mv = 0
        assert!(m.apply(&f, v).iter().all(|c| f.is_zero(c)));
    }

    #[test]
    fn charpoly_2x2() {
        let f = QQ;
        let m = Mat::from_rows(
            &f,
            vec![vec![q_from_i64(2), q_from_i64(1)], vec![q_from_i64(1), q_from_i64(2)]],
        );
        // char poly (x-1)(x-3) = x^2 - 4x + 3
        let cp = m.charpoly(&f);
        assert_eq!(cp, vec![q_from_i64(3), q_from_i64(-4), q_from_i64(1)]);
    }

    #[test]
    fn charpoly_companion() {
        let f = QQ;
        // companion matrix of x^3 - 2x - 5
        let m = Mat::from_rows(
            &f,
            vec![
                vec![q_from_i64(0), q_from_i64(0), q_from_i64(5)],
                vec![q_from_i64(1), q_from_i64(0), q_from_i64(2)],
                vec![q_from_i64(0), q_from_i64(1), q_from_i64(0)],
            ],
        );
        let cp = m.charpoly(&f);
        assert_eq!(cp, vec![q_from_i64(-5), q_from_i64(-2), q_from_i64(0), q_from_i64(1)]);
    }

    #[test]
    fn presentation_solving() {
        let f = QQ;
        // gens a,b,c with relation a + b = 0: basis {b, c}, a = -b
        let (basis, expr) = solve_presentation(&f, vec![vec![q_from_i64(1), q_from_i64(1), q_from_i64(0)]], 3);
        assert_eq!(basis, vec![1, 2]);
        assert_eq!(expr[0], vec![q_from_i64(-1), q_from_i64(0)]);
        assert_eq!(expr[1], vec![q_from_i64(1), q_from_i64(0)]);
    }
}
