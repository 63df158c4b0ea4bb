//! Dense matrices and state vectors over a generic exact field.
//!
//! Spin-chain convention: basis states of N sites are indexed by bit
//! patterns with site 1 at the most significant position. Bit 0 means an up
//! spin, bit 1 a down spin. Every module in the crate shares this layout.

use super::Field;
use crate::{Error, Result};

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![F::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zero(dim);
        for i in 0..dim {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim);
            data.extend(r);
        }
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Matrix::<F>::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn apply(&self, v: &StateVector<F>) -> StateVector<F> {
        assert_eq!(self.dim, v.data.len());
        let mut out = vec![F::zero(); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = &self[(i, j)];
                if a.is_zero() || v.data[j].is_zero() {
                    continue;
                }
                out[i] = out[i].add(&a.mul(&v.data[j]));
            }
        }
        StateVector {
            n_sites: v.n_sites,
            data: out,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// `Some(c)` when the matrix equals `c · 1`.
    pub fn as_scalar_multiple_of_identity(&self) -> Option<F> {
        let c = self[(0, 0)].clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expect = if i == j { c.clone() } else { F::zero() };
                if self[(i, j)] != expect {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Partial transpose over one tensor factor of a 4×4 two-site operator.
    pub fn partial_transpose_first(&self) -> Self {
        assert_eq!(self.dim, 4);
        let mut out = Matrix::zero(4);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        // (a,b),(c,d) <- (c,b),(a,d)
                        out[(a * 2 + b, c * 2 + d)] = self[(c * 2 + b, a * 2 + d)].clone();
                    }
                }
            }
        }
        out
    }

    /// Embeds a one-site operator at `site` (1-based) into N sites.
    pub fn embed_one_site(gate: &Matrix<F>, site: usize, n_sites: usize) -> Matrix<F> {
        assert_eq!(gate.dim, 2);
        let dim = 1usize << n_sites;
        let shift = n_sites - site;
        let mut out = Matrix::<F>::zero(dim);
        for idx in 0..dim {
            let b = (idx >> shift) & 1;
            for (nb, row) in [(0usize, 0usize), (1, 1)] {
                let g = &gate[(row, b)];
                if g.is_zero() {
                    continue;
                }
                let j = (idx & !(1 << shift)) | (nb << shift);
                out[(j, idx)] = out[(j, idx)].add(g);
            }
        }
        out
    }

    /// Embeds a two-site gate acting on ordered sites (a, b), 1-based and
    /// distinct, into N sites. The gate's first tensor factor is site `a`.
    pub fn embed_two_site(gate: &Matrix<F>, site_a: usize, site_b: usize, n_sites: usize) -> Matrix<F> {
        assert_eq!(gate.dim, 4);
        assert_ne!(site_a, site_b);
        let dim = 1usize << n_sites;
        let sa = n_sites - site_a;
        let sb = n_sites - site_b;
        let mut out = Matrix::<F>::zero(dim);
        for idx in 0..dim {
            let ba = (idx >> sa) & 1;
            let bb = (idx >> sb) & 1;
            let col = ba * 2 + bb;
            let base = idx & !(1 << sa) & !(1 << sb);
            for row in 0..4 {
                let g = &gate[(row, col)];
                if g.is_zero() {
                    continue;
                }
                let j = base | ((row >> 1) << sa) | ((row & 1) << sb);
                out[(j, idx)] = out[(j, idx)].add(g);
            }
        }
        out
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` for singular input.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Matrix::<F>::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            for j in 0..n {
                let tmp = a[(col, j)].clone();
                a[(col, j)] = a[(piv, j)].clone();
                a[(piv, j)] = tmp;
                let tmp = inv[(col, j)].clone();
                inv[(col, j)] = inv[(piv, j)].clone();
                inv[(piv, j)] = tmp;
            }
            let p = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = a[(col, j)].mul(&p);
                inv[(col, j)] = inv[(col, j)].mul(&p);
            }
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    for j in 0..n {
                        let d = a[(col, j)].mul(&f);
                        a[(r, j)] = a[(r, j)].sub(&d);
                        let d = inv[(col, j)].mul(&f);
                        inv[(r, j)] = inv[(r, j)].sub(&d);
                    }
                }
            }
        }
        Some(inv)
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.dim + j]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.dim + j]
    }
}

/// Vector over the 2^N spin basis, paired by transposition without complex
/// conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<F: Field> {
    pub n_sites: usize,
    pub data: Vec<F>,
}

impl<F: Field> StateVector<F> {
    pub fn zero(n_sites: usize) -> Self {
        StateVector {
            n_sites,
            data: vec![F::zero(); 1 << n_sites],
        }
    }

    /// Basis state with down spins exactly at the 1-based `positions`.
    pub fn basis_index(n_sites: usize, positions: &[usize]) -> usize {
        let mut idx = 0usize;
        for &p in positions {
            assert!((1..=n_sites).contains(&p));
            idx |= 1 << (n_sites - p);
        }
        idx
    }

    /// Down-spin positions of a basis index, ascending.
    pub fn down_positions(n_sites: usize, idx: usize) -> Vec<usize> {
        (1..=n_sites).filter(|p| idx & (1 << (n_sites - p)) != 0).collect()
    }

    pub fn set(&mut self, positions: &[usize], value: F) {
        let i = Self::basis_index(self.n_sites, positions);
        self.data[i] = value;
    }

    pub fn get(&self, positions: &[usize]) -> &F {
        &self.data[Self::basis_index(self.n_sites, positions)]
    }

    pub fn scale(&self, c: &F) -> Self {
        StateVector {
            n_sites: self.n_sites,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n_sites, other.n_sites);
        StateVector {
            n_sites: self.n_sites,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Transpose pairing Σ φ_s ψ_s.
    pub fn dot(&self, other: &Self) -> F {
        assert_eq!(self.n_sites, other.n_sites);
        let mut acc = F::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            if !a.is_zero() && !b.is_zero() {
                acc = acc.add(&a.mul(b));
            }
        }
        acc
    }
}

/// Solves `A x = b` exactly; errors when A is singular.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<Vec<F>> {
    let n = a.dim();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut row: Vec<F> = (0..n).map(|j| a[(i, j)].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::SingularPoint("singular linear system".into()))?;
        m.swap(col, piv);
        let p = m[col][col].inv().ok_or(Error::DivisionByZero)?;
        for x in m[col].iter_mut() {
            *x = x.mul(&p);
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let d = m[col][c].mul(&f);
                    m[r][c] = m[r][c].sub(&d);
                }
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint, Rational};

    #[test]
    fn embed_two_site_matches_kronecker_structure() {
        // exchange gate on sites (1,2) of 3 sites swaps the first two bits
        let mut p = Matrix::<Rational>::zero(4);
        p[(0, 0)] = rint(1);
        p[(1, 2)] = rint(1);
        p[(2, 1)] = rint(1);
        p[(3, 3)] = rint(1);
        let big = Matrix::embed_two_site(&p, 1, 2, 3);
        // |↓↑↑⟩ (idx 100b = 4) ↦ |↑↓↑⟩ (idx 010b = 2)
        let mut v = StateVector::zero(3);
        v.set(&[1], rint(1));
        let w = big.apply(&v);
        assert_eq!(*w.get(&[2]), rint(1));
        assert_eq!(*w.get(&[1]), rint(0));
    }

    #[test]
    fn index_conventions() {
        assert_eq!(StateVector::<Rational>::basis_index(3, &[1]), 4);
        assert_eq!(StateVector::<Rational>::basis_index(3, &[3]), 1);
        assert_eq!(StateVector::<Rational>::down_positions(3, 5), vec![1, 3]);
    }

    #[test]
    fn inverse_and_solve() {
        let a = Matrix::from_rows(vec![
            vec![rint(2), rint(1)],
            vec![rint(1), rint(1)],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let x = solve(&a, &[rint(3), rint(2)]).unwrap();
        assert_eq!(x, vec![rint(1), rint(1)]);
        let singular = Matrix::from_rows(vec![
            vec![rint(1), rint(2)],
            vec![rint(2), rint(4)],
        ]);
        assert!(singular.inverse().is_none());
        let _ = rat(1, 2);
    }
}
