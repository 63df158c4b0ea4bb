//! Six-vertex lattice operators over a generic exact field: R-, Ř- and
//! K-matrices, the double-row transfer matrix, scattering operators and
//! local spin operators.
//!
//! Basis conventions are shared with [`crate::exact::linalg`]: site 1 is the
//! most significant bit, bit 0 is an up spin. Generic-parameter identities
//! are verified by exact evaluation at random rational points; the
//! deformation parameter is taken as q = v² and the boundary shift as
//! s = v³, so s⁴ = q⁶ holds identically without root extraction.

use crate::exact::linalg::{Matrix, StateVector};
use crate::exact::{bracket, Field};
use crate::{Error, Result};

/// Sign branch of β̄ in β̄²β²q² = 1.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum BetaBarSign {
    Plus,
    Minus,
}

impl BetaBarSign {
    pub fn apply<F: Field>(self, x: F) -> F {
        match self {
            BetaBarSign::Plus => x,
            BetaBarSign::Minus => x.neg(),
        }
    }
}

/// Model parameters. The constraints s⁴ = q⁶ and β̄²β²q² = 1 hold exactly by
/// construction; `v` is present for generic runs (q = v², s = v³) and feeds
/// the half-integer powers of q in the braid-limit identities.
#[derive(Clone, Debug)]
pub struct ModelParams<F: Field> {
    pub q: F,
    pub s: F,
    pub beta: F,
    pub betabar: F,
    pub v: Option<F>,
}

impl<F: Field> ModelParams<F> {
    /// Generic parameterisation q = v², s = v³.
    pub fn generic(v: F, beta: F, sign: BetaBarSign) -> Result<Self> {
        let q = v.mul(&v);
        let s = q.mul(&v);
        Self::with_qs(q, s, beta, sign, Some(v))
    }

    /// Same q = v² but s = i·v³, the branch with s² = −q³; `imag` must
    /// square to −1 in F.
    pub fn generic_imag_s(v: F, imag: F, beta: F, sign: BetaBarSign) -> Result<Self> {
        let q = v.mul(&v);
        let s = imag.mul(&q.mul(&v));
        Self::with_qs(q, s, beta, sign, Some(v))
    }

    /// Special point: q a primitive cube root of unity, s = 1.
    pub fn special_point(q: F, beta: F, sign: BetaBarSign) -> Result<Self> {
        Self::with_qs(q, F::one(), beta, sign, None)
    }

    fn with_qs(q: F, s: F, beta: F, sign: BetaBarSign, v: Option<F>) -> Result<Self> {
        let qb = q.mul(&beta);
        let betabar = sign.apply(qb.inv().ok_or(Error::DivisionByZero)?);
        let p = ModelParams { q, s, beta, betabar, v };
        p.validate()?;
        Ok(p)
    }

    /// Checks s⁴ = q⁶ and β̄²β²q² = 1.
    pub fn validate(&self) -> Result<()> {
        let s4 = self.s.pow(4).ok_or(Error::DivisionByZero)?;
        let q6 = self.q.pow(6).ok_or(Error::DivisionByZero)?;
        if s4 != q6 {
            return Err(Error::SingularPoint("s^4 != q^6".into()));
        }
        let lhs = self
            .betabar
            .mul(&self.betabar)
            .mul(&self.beta.mul(&self.beta))
            .mul(&self.q.mul(&self.q));
        if lhs != F::one() {
            return Err(Error::SingularPoint("betabar^2 beta^2 q^2 != 1".into()));
        }
        Ok(())
    }

    /// Same q, s and v with a replaced boundary parameter (β̄ rebuilt on the
    /// plus branch).
    pub fn with_beta(&self, beta: F) -> Result<Self> {
        Self::with_qs(self.q.clone(), self.s.clone(), beta, BetaBarSign::Plus, self.v.clone())
    }

    /// The boundary field combination x = −[qβ]/[β].
    pub fn x(&self) -> Result<F> {
        let num = bracket(&self.q.mul(&self.beta))?;
        let den = bracket(&self.beta)?;
        num.div(&den).map(|r| r.neg()).ok_or(Error::DivisionByZero)
    }
}

/// Parameters of the transfer matrix. Every entry of the double-row object
/// depends on the boundary parameters only through their squares, which is
/// what allows rational-x runs over the cyclotomic field where β itself has
/// no square root.
#[derive(Clone, Debug)]
pub struct TransferParams<F: Field> {
    pub q: F,
    pub beta_sq: F,
    pub betabar_sq: F,
}

impl<F: Field> TransferParams<F> {
    pub fn from_model(p: &ModelParams<F>) -> Self {
        TransferParams {
            q: p.q.clone(),
            beta_sq: p.beta.mul(&p.beta),
            betabar_sq: p.betabar.mul(&p.betabar),
        }
    }

    /// Special point at a requested x: β² = (x + q²)/(x + q) solves
    /// x = −[qβ]/[β] when q³ = 1, and β̄² = 1/(β²q²).
    pub fn special_from_x(q: &F, x: &F) -> Result<Self> {
        let q2 = q.mul(q);
        let beta_sq = x
            .add(&q2)
            .div(&x.add(q))
            .ok_or_else(|| Error::SingularPoint("x + q = 0".into()))?;
        let betabar_sq = beta_sq.mul(&q.mul(q)).inv().ok_or(Error::DivisionByZero)?;
        Ok(TransferParams {
            q: q.clone(),
            beta_sq,
            betabar_sq,
        })
    }
}

/// The six-vertex R-matrix with weights a = [qz]/[q/z], b = [z]/[q/z],
/// c = [q]/[q/z]; `R(1)` is the permutation matrix.
pub fn r_matrix<F: Field>(z: &F, q: &F) -> Result<Matrix<F>> {
    let den = bracket(&q.div(z).ok_or(Error::DivisionByZero)?)?;
    let di = den
        .inv()
        .ok_or_else(|| Error::SingularPoint("[q/z] = 0 in R(z)".into()))?;
    let a = bracket(&q.mul(z))?.mul(&di);
    let b = bracket(z)?.mul(&di);
    let c = bracket(q)?.mul(&di);
    let o = F::zero;
    Ok(Matrix::from_rows(vec![
        vec![a.clone(), o(), o(), o()],
        vec![o(), b.clone(), c.clone(), o()],
        vec![o(), c, b, o()],
        vec![o(), o(), o(), a],
    ]))
}

/// Ř(z) = P·R(z), the braid form.
pub fn rcheck_matrix<F: Field>(z: &F, q: &F) -> Result<Matrix<F>> {
    Ok(permutation_2sites().mul(&r_matrix(z, q)?))
}

/// The two-site permutation operator P.
pub fn permutation_2sites<F: Field>() -> Matrix<F> {
    let o = F::zero;
    let l = F::one;
    Matrix::from_rows(vec![
        vec![l(), o(), o(), o()],
        vec![o(), o(), l(), o()],
        vec![o(), l(), o(), o()],
        vec![o(), o(), o(), l()],
    ])
}

/// Diagonal reflection matrix K(z; b) = diag(1, [bz]/[b/z]).
pub fn k_matrix<F: Field>(z: &F, b: &F) -> Result<Matrix<F>> {
    let num = bracket(&b.mul(z))?;
    let den = bracket(&b.div(z).ok_or(Error::DivisionByZero)?)?;
    let entry = num
        .div(&den)
        .ok_or_else(|| Error::SingularPoint("[b/z] = 0 in K(z)".into()))?;
    let o = F::zero;
    Ok(Matrix::from_rows(vec![vec![F::one(), o()], vec![o(), entry]]))
}

/// K-matrix from the squared boundary parameter:
/// [bz]/[b/z] = (b²z² − 1)/(b² − z²).
pub fn k_matrix_from_sq<F: Field>(z: &F, b_sq: &F) -> Result<Matrix<F>> {
    let z2 = z.mul(z);
    let num = b_sq.mul(&z2).sub(&F::one());
    let den = b_sq.sub(&z2);
    let entry = num
        .div(&den)
        .ok_or_else(|| Error::SingularPoint("b^2 = z^2 in K(z)".into()))?;
    let o = F::zero;
    Ok(Matrix::from_rows(vec![vec![F::one(), o()], vec![o(), entry]]))
}

/// Left-to-right factor list of the double-row transfer matrix on the
/// (N+1)-site space with the auxiliary space as site 1.
fn transfer_factors<F: Field>(
    z: &F,
    zs: &[F],
    params: &TransferParams<F>,
) -> Result<Vec<Matrix<F>>> {
    let n = zs.len();
    let big = n + 1;
    let mut factors: Vec<Matrix<F>> = Vec::with_capacity(2 * n + 2);
    let k_out = k_matrix_from_sq(&params.q.mul(z), &params.betabar_sq)?;
    factors.push(Matrix::embed_one_site(&k_out, 1, big));
    for i in (1..=n).rev() {
        let arg = z.div(&zs[i - 1]).ok_or(Error::DivisionByZero)?;
        let r = r_matrix(&arg, &params.q)?;
        factors.push(Matrix::embed_two_site(&r, 1, i + 1, big));
    }
    let k_in = k_matrix_from_sq(z, &params.beta_sq)?;
    factors.push(Matrix::embed_one_site(&k_in, 1, big));
    for i in 1..=n {
        let arg = z.mul(&zs[i - 1]);
        let r = r_matrix(&arg, &params.q)?;
        factors.push(Matrix::embed_two_site(&r, 1, i + 1, big));
    }
    Ok(factors)
}

/// Double-row transfer matrix T(z | z₁..z_N) as a dense 2^N × 2^N matrix.
pub fn transfer_matrix<F: Field>(z: &F, zs: &[F], params: &TransferParams<F>) -> Result<Matrix<F>> {
    let n = zs.len();
    let factors = transfer_factors(z, zs, params)?;
    let big_dim = 1usize << (n + 1);
    let mut acc = Matrix::<F>::identity(big_dim);
    for f in factors.iter().rev() {
        acc = f.mul(&acc);
    }
    // partial trace over the auxiliary site (most significant bit)
    let dim = 1usize << n;
    let mut out = Matrix::<F>::zero(dim);
    for a in 0..2usize {
        for r in 0..dim {
            for c in 0..dim {
                let v = &acc[(a * dim + r, a * dim + c)];
                if !v.is_zero() {
                    out[(r, c)] = out[(r, c)].add(v);
                }
            }
        }
    }
    Ok(out)
}

/// Applies T(z | z₁..z_N) to a state without materialising the matrix.
pub fn transfer_apply<F: Field>(
    z: &F,
    zs: &[F],
    params: &TransferParams<F>,
    state: &StateVector<F>,
) -> Result<StateVector<F>> {
    let n = zs.len();
    assert_eq!(state.n_sites, n);
    let factors = transfer_factors(z, zs, params)?;
    let dim = 1usize << n;
    let mut out = StateVector::<F>::zero(n);
    for a in 0..2usize {
        let mut big = StateVector::<F>::zero(n + 1);
        for (idx, val) in state.data.iter().enumerate() {
            big.data[a * dim + idx] = val.clone();
        }
        for f in factors.iter().rev() {
            big = f.apply(&big);
        }
        for idx in 0..dim {
            out.data[idx] = out.data[idx].add(&big.data[a * dim + idx]);
        }
    }
    Ok(out)
}

/// Transfer-matrix eigenvalue Λ_N(z) = −[qβz]/[q²βz], expressed through β².
pub fn lambda_eigenvalue<F: Field>(z: &F, params: &TransferParams<F>) -> Result<F> {
    let q = &params.q;
    let bz2 = params.beta_sq.mul(&z.mul(z));
    // −[qβz]/[q²βz] = −q(q²β²z² − 1)/(q⁴β²z² − 1)
    let num = q.mul(q).mul(&bz2).sub(&F::one());
    let den = q.pow(4).ok_or(Error::DivisionByZero)?.mul(&bz2).sub(&F::one());
    num.mul(q)
        .div(&den)
        .map(|r| r.neg())
        .ok_or_else(|| Error::SingularPoint("[q^2 beta z] = 0".into()))
}

/// The same eigenvalue as the auxiliary-space trace tr₀(K₀(qz;β̄)K₀(z;β)).
pub fn lambda_trace_form<F: Field>(z: &F, params: &TransferParams<F>) -> Result<F> {
    let k1 = k_matrix_from_sq(&params.q.mul(z), &params.betabar_sq)?;
    let k2 = k_matrix_from_sq(z, &params.beta_sq)?;
    let prod = k1.mul(&k2);
    Ok(prod[(0, 0)].add(&prod[(1, 1)]))
}

/// Scattering operator S⁽ⁱ⁾: the ordered Ř/K factor product transporting the
/// i-th spectral parameter around the strip. `i` is 1-based.
pub fn scattering_operator<F: Field>(i: usize, zs: &[F], params: &ModelParams<F>) -> Result<Matrix<F>> {
    scattering_operator_mutated(i, zs, params, false)
}

/// Variant with a deliberate defect (scaled K₁ argument) for harness
/// self-tests; `mutate = false` gives the genuine operator.
pub fn scattering_operator_mutated<F: Field>(
    i: usize,
    zs: &[F],
    params: &ModelParams<F>,
    mutate: bool,
) -> Result<Matrix<F>> {
    let n = zs.len();
    assert!((1..=n).contains(&i));
    let zi = &zs[i - 1];
    let q = &params.q;
    let s2 = params.s.mul(&params.s);
    let s2zi = s2.mul(zi);
    let mut factors: Vec<Matrix<F>> = Vec::new();
    // reversed product over j = i−1 .. 1 of Ř_{j,j+1}(s²z_i/z_j)
    for j in (1..i).rev() {
        let arg = s2zi.div(&zs[j - 1]).ok_or(Error::DivisionByZero)?;
        factors.push(Matrix::embed_two_site(&rcheck_matrix(&arg, q)?, j, j + 1, n));
    }
    let k1_arg = if mutate { s2zi.add(&s2zi) } else { s2zi.clone() };
    factors.push(Matrix::embed_one_site(&k_matrix(&k1_arg, &params.beta)?, 1, n));
    // forward product over j = 1 .. i−1 of Ř_{j,j+1}(s²z_i·z_j)
    for j in 1..i {
        let arg = s2zi.mul(&zs[j - 1]);
        factors.push(Matrix::embed_two_site(&rcheck_matrix(&arg, q)?, j, j + 1, n));
    }
    // forward product over j = i .. N−1 of Ř_{j,j+1}(s²z_i·z_{j+1})
    for j in i..n {
        let arg = s2zi.mul(&zs[j]);
        factors.push(Matrix::embed_two_site(&rcheck_matrix(&arg, q)?, j, j + 1, n));
    }
    let kn = k_matrix(&params.s.mul(zi), &params.s.mul(&params.betabar))?;
    factors.push(Matrix::embed_one_site(&kn, n, n));
    // reversed product over j = N−1 .. i of Ř_{j,j+1}(z_i/z_{j+1})
    for j in (i..n).rev() {
        let arg = zi.div(&zs[j]).ok_or(Error::DivisionByZero)?;
        factors.push(Matrix::embed_two_site(&rcheck_matrix(&arg, q)?, j, j + 1, n));
    }
    let mut acc = Matrix::<F>::identity(1 << n);
    for f in factors.iter().rev() {
        acc = f.mul(&acc);
    }
    Ok(acc)
}

/// Magnetisation operator M = ½ Σ σᶻᵢ (diagonal).
pub fn magnetisation<F: Field>(n_sites: usize) -> Matrix<F> {
    let dim = 1usize << n_sites;
    let half = F::one().div(&F::from_i64(2)).unwrap();
    let mut m = Matrix::<F>::zero(dim);
    for idx in 0..dim {
        let downs = (idx as u32).count_ones() as i64;
        m[(idx, idx)] = F::from_i64(n_sites as i64 - 2 * downs).mul(&half);
    }
    m
}

/// Spin-reversal operator R = ∏ σˣᵢ.
pub fn spin_reversal<F: Field>(n_sites: usize) -> Matrix<F> {
    let dim = 1usize << n_sites;
    let mask = dim - 1;
    let mut m = Matrix::<F>::zero(dim);
    for idx in 0..dim {
        m[(idx ^ mask, idx)] = F::one();
    }
    m
}

/// Parity operator P reverses the order of the sites.
pub fn parity_operator<F: Field>(n_sites: usize) -> Matrix<F> {
    let dim = 1usize << n_sites;
    let mut m = Matrix::<F>::zero(dim);
    for idx in 0..dim {
        let mut rev = 0usize;
        for b in 0..n_sites {
            if idx & (1 << b) != 0 {
                rev |= 1 << (n_sites - 1 - b);
            }
        }
        m[(rev, idx)] = F::one();
    }
    m
}

/// Insertion operator Θᵢˢ: V^N → V^{N+1}, placing a fixed spin at slot i
/// (1-based, i ≤ N+1).
pub fn theta_insert<F: Field>(i: usize, down: bool, state: &StateVector<F>) -> StateVector<F> {
    let n = state.n_sites;
    assert!((1..=n + 1).contains(&i));
    let mut out = StateVector::<F>::zero(n + 1);
    for (idx, val) in state.data.iter().enumerate() {
        if val.is_zero() {
            continue;
        }
        let high_bits = idx >> (n + 1 - i);
        let low_mask = (1usize << (n + 1 - i)) - 1;
        let low_bits = idx & low_mask;
        let new_idx = (high_bits << (n + 2 - i)) | ((down as usize) << (n + 1 - i)) | low_bits;
        out.data[new_idx] = val.clone();
    }
    out
}

pub fn sigma_x<F: Field>(site: usize, n_sites: usize) -> Matrix<F> {
    let o = F::zero;
    let l = F::one;
    let g = Matrix::from_rows(vec![vec![o(), l()], vec![l(), o()]]);
    Matrix::embed_one_site(&g, site, n_sites)
}

pub fn sigma_z<F: Field>(site: usize, n_sites: usize) -> Matrix<F> {
    let o = F::zero;
    let g = Matrix::from_rows(vec![vec![F::one(), o()], vec![o(), F::one().neg()]]);
    Matrix::embed_one_site(&g, site, n_sites)
}

/// σʸ needs an imaginary unit in the field.
pub fn sigma_y<F: Field>(imag: &F, site: usize, n_sites: usize) -> Matrix<F> {
    let o = F::zero;
    let g = Matrix::from_rows(vec![vec![o(), imag.neg()], vec![imag.clone(), o()]]);
    Matrix::embed_one_site(&g, site, n_sites)
}

/// Divided difference δf(z, w) = ([qw/z]f(w,z) − [q]f(z,w)) / [z/w].
/// Pointwise evaluation only; z = ±w is rejected.
pub fn divided_difference<F: Field>(
    f: &mut dyn FnMut(&F, &F) -> Result<F>,
    q: &F,
    z: &F,
    w: &F,
) -> Result<F> {
    let den = bracket(&z.div(w).ok_or(Error::DivisionByZero)?)?;
    let den_inv = den
        .inv()
        .ok_or_else(|| Error::SingularPoint("z = ±w in divided difference".into()))?;
    let swapped = f(w, z)?;
    let straight = f(z, w)?;
    let lead = bracket(&q.mul(w).div(z).ok_or(Error::DivisionByZero)?)?;
    Ok(lead.mul(&swapped).sub(&bracket(q)?.mul(&straight)).mul(&den_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint, Cyc12, Rational};
    use crate::sampling::Sampler;

    fn embed3<F: Field>(g: &Matrix<F>, a: usize, b: usize) -> Matrix<F> {
        Matrix::embed_two_site(g, a, b, 3)
    }

    #[test]
    fn r_at_one_is_permutation() {
        let q = rat(3, 5);
        let r = r_matrix(&rint(1), &q).unwrap();
        assert_eq!(r, permutation_2sites());
    }

    #[test]
    fn unitarity_at_random_points() {
        let mut s = Sampler::new(100, 1, 0, 0);
        let mut done = 0;
        while done < 20 {
            let q = s.rational();
            let z = s.rational();
            let (Ok(r1), Ok(r2)) = (r_matrix(&z, &q), r_matrix(&z.recip(), &q)) else {
                continue;
            };
            assert_eq!(r1.mul(&r2), Matrix::identity(4));
            done += 1;
        }
    }

    #[test]
    fn yang_baxter_both_forms() {
        let mut s = Sampler::new(101, 1, 0, 0);
        let mut done = 0;
        while done < 20 {
            let v = s.rational();
            let q = &v * &v;
            let z = s.rational();
            let w = s.rational();
            let zw = &z / &w;
            let (Ok(rzw), Ok(rz), Ok(rw)) = (r_matrix(&zw, &q), r_matrix(&z, &q), r_matrix(&w, &q))
            else {
                continue;
            };
            let lhs = embed3(&rzw, 1, 2).mul(&embed3(&rz, 1, 3)).mul(&embed3(&rw, 2, 3));
            let rhs = embed3(&rw, 2, 3).mul(&embed3(&rz, 1, 3)).mul(&embed3(&rzw, 1, 2));
            assert_eq!(lhs, rhs);
            let (Ok(czw), Ok(cz), Ok(cw)) = (
                rcheck_matrix(&zw, &q),
                rcheck_matrix(&z, &q),
                rcheck_matrix(&w, &q),
            ) else {
                continue;
            };
            let lhs = embed3(&czw, 1, 2).mul(&embed3(&cz, 2, 3)).mul(&embed3(&cw, 1, 2));
            let rhs = embed3(&cw, 2, 3).mul(&embed3(&cz, 1, 2)).mul(&embed3(&czw, 2, 3));
            assert_eq!(lhs, rhs);
            done += 1;
        }
    }

    #[test]
    fn crossing_relations_over_cyc12() {
        let mut s = Sampler::new(102, 1, 0, 0);
        let imag = Cyc12::i();
        let mut done = 0;
        while done < 10 {
            let q = Cyc12::from_rat(&s.rational());
            let z = Cyc12::from_rat(&s.rational());
            let run = || -> Result<()> {
                let r = r_matrix(&z, &q)?;
                let qz = bracket(&q.div(&z).ok_or(Error::DivisionByZero)?)?;
                let q2z = bracket(&q.mul(&q).mul(&z))?;
                let sx = sigma_x::<Cyc12>(1, 2);
                let sy = sigma_y::<Cyc12>(&imag, 1, 2);
                let sz = sigma_z::<Cyc12>(1, 2);
                let rt = r.partial_transpose_first();
                let arg = q.mul(&z).inv().ok_or(Error::DivisionByZero)?.neg();
                let rx = r_matrix(&arg, &q)?;
                assert_eq!(sx.mul(&rt).mul(&sx).scale(&qz), rx.scale(&q2z.neg()));
                let arg = q.mul(&z).inv().ok_or(Error::DivisionByZero)?;
                let ry = r_matrix(&arg, &q)?;
                assert_eq!(sy.mul(&rt).mul(&sy).scale(&qz), ry.scale(&q2z.neg()));
                let rz = r_matrix(&z.neg(), &q)?;
                assert_eq!(sz.mul(&r).mul(&sz), rz);
                Ok(())
            };
            if run().is_ok() {
                done += 1;
            }
        }
    }

    #[test]
    fn k_matrix_examples_and_boundary_ybe() {
        let b = rat(5, 3);
        assert_eq!(k_matrix(&rint(1), &b).unwrap(), Matrix::identity(2));
        assert_eq!(k_matrix(&rint(-1), &b).unwrap(), Matrix::identity(2));
        // z = i over Cyc12 gives diag(1, −1) = σᶻ for any b
        let k = k_matrix(&Cyc12::i(), &Cyc12::from_rat(&b)).unwrap();
        assert_eq!(k, sigma_z::<Cyc12>(1, 1));
        let z = rat(7, 4);
        assert_eq!(k_matrix(&z, &b).unwrap(), k_matrix_from_sq(&z, &(&b * &b)).unwrap());
        // boundary Yang-Baxter on V²
        let mut s = Sampler::new(103, 1, 0, 0);
        let mut done = 0;
        while done < 10 {
            let v = s.rational();
            let q = &v * &v;
            let (z, w, b) = (s.rational(), s.rational(), s.rational());
            let build = || -> Result<(Matrix<Rational>, Matrix<Rational>)> {
                let r1 = Matrix::embed_two_site(&r_matrix(&(&z / &w), &q)?, 1, 2, 2);
                let rz = Matrix::embed_two_site(&r_matrix(&(&z * &w), &q)?, 1, 2, 2);
                let k1 = Matrix::embed_one_site(&k_matrix(&z, &b)?, 1, 2);
                let k2 = Matrix::embed_one_site(&k_matrix(&w, &b)?, 2, 2);
                Ok((r1.mul(&k1).mul(&rz).mul(&k2), k2.mul(&rz).mul(&k1).mul(&r1)))
            };
            if let Ok((lhs, rhs)) = build() {
                assert_eq!(lhs, rhs);
                done += 1;
            }
        }
    }

    #[test]
    fn k_trace_identity() {
        // tr_{0̄}(K_{0̄}(qz;b) R_{0̄0}(z²) P_{0̄0}) = ([q²z²][b/z]/([z²/q][qz/b])) K₀(z;b)
        let mut s = Sampler::new(104, 1, 0, 0);
        let mut done = 0;
        while done < 10 {
            let (q, z, b) = (s.rational(), s.rational(), s.rational());
            let run = || -> Result<()> {
                let k = Matrix::embed_one_site(&k_matrix(&(&q * &z), &b)?, 1, 2);
                let r = Matrix::embed_two_site(&r_matrix(&(&z * &z), &q)?, 1, 2, 2);
                let p = permutation_2sites::<Rational>();
                let prod = k.mul(&r).mul(&p);
                let mut tr = Matrix::<Rational>::zero(2);
                for a in 0..2 {
                    for i in 0..2 {
                        for j in 0..2 {
                            let val = prod[(a * 2 + i, a * 2 + j)].clone();
                            tr[(i, j)] = tr[(i, j)].add(&val);
                        }
                    }
                }
                let scale = bracket(&(&q * &q * &z * &z))?
                    .mul(&bracket(&(&b / &z))?)
                    .div(&bracket(&(&z * &z / &q))?.mul(&bracket(&(&q * &z / &b))?))
                    .ok_or(Error::DivisionByZero)?;
                assert_eq!(tr, k_matrix(&z, &b)?.scale(&scale));
                Ok(())
            };
            if run().is_ok() {
                done += 1;
            }
        }
    }

    #[test]
    fn transfer_symmetry_and_commutation() {
        let mut s = Sampler::new(105, 1, 0, 0);
        let mut done = 0;
        while done < 6 {
            let v = s.rational();
            let beta = s.rational();
            let Ok(params) = ModelParams::generic(v, beta, BetaBarSign::Plus) else { continue };
            let tp = TransferParams::from_model(&params);
            let zs = s.distinct_points(2);
            let z = s.rational();
            let w = s.rational();
            let run = || -> Result<()> {
                let t1 = transfer_matrix(&z, &zs, &tp)?;
                let t2 = transfer_matrix(&z.clone().neg(), &zs, &tp)?;
                assert_eq!(t1, t2);
                let zs3 = [zs[0].clone(), zs[1].clone(), w.clone()];
                let ta = transfer_matrix(&z, &zs3, &tp)?;
                let tb = transfer_matrix(&w, &zs3, &tp)?;
                assert!(ta.commutator(&tb).is_zero());
                Ok(())
            };
            if run().is_ok() {
                done += 1;
            }
        }
    }

    #[test]
    fn transfer_inversion_relation() {
        // T(1/(qz)) = [β/z][β̄/(qz)]/([β̄z][qβz]) ∏ᵢ [qzᵢ/z][q/(zzᵢ)]/([q²z/zᵢ][q²zzᵢ]) T(z)
        let mut s = Sampler::new(106, 1, 0, 0);
        let mut done = 0;
        while done < 4 {
            let v = s.rational();
            let beta = s.rational();
            let Ok(params) = ModelParams::generic(v, beta.clone(), BetaBarSign::Plus) else {
                continue;
            };
            let tp = TransferParams::from_model(&params);
            let zs = s.distinct_points(2);
            let z = s.rational();
            let q = params.q.clone();
            let betabar = params.betabar.clone();
            let run = || -> Result<()> {
                let lhs = transfer_matrix(&(&q * &z).recip(), &zs, &tp)?;
                let mut scale = bracket(&(&beta / &z))?
                    .mul(&bracket(&(&betabar / (&q * &z)))?)
                    .div(&bracket(&(&betabar * &z))?.mul(&bracket(&(&q * &beta * &z))?))
                    .ok_or(Error::DivisionByZero)?;
                for zi in &zs {
                    let f = bracket(&(&q * zi / &z))?
                        .mul(&bracket(&(&q / (&z * zi)))?)
                        .div(&bracket(&(&q * &q * &z / zi))?.mul(&bracket(&(&q * &q * &z * zi))?))
                        .ok_or(Error::DivisionByZero)?;
                    scale = scale.mul(&f);
                }
                assert_eq!(lhs, transfer_matrix(&z, &zs, &tp)?.scale(&scale));
                Ok(())
            };
            if run().is_ok() {
                done += 1;
            }
        }
    }

    #[test]
    fn transfer_scalar_at_fourth_roots_over_cyc12() {
        // z⁴ = 1 ⇒ T(z) = ([q²][β̄/z]/([q][β̄/(qz)])) · 1, N ≤ 4
        let q = Cyc12::q();
        let mut s = Sampler::new(107, 1, 0, 0);
        let beta = Cyc12::from_rat(&s.rational());
        let params = ModelParams::special_point(q.clone(), beta, BetaBarSign::Plus).unwrap();
        let tp = TransferParams::from_model(&params);
        let betabar = params.betabar.clone();
        for n in 1..=4usize {
            let zs: Vec<Cyc12> = s
                .distinct_points(n)
                .into_iter()
                .map(|r| Cyc12::from_rat(&r))
                .collect();
            for z in [Cyc12::one(), Cyc12::one().neg(), Cyc12::i(), Cyc12::i().neg()] {
                let t = transfer_matrix(&z, &zs, &tp).unwrap();
                let scale = bracket(&q.mul(&q))
                    .unwrap()
                    .mul(&bracket(&betabar.div(&z).unwrap()).unwrap())
                    .div(
                        &bracket(&q)
                            .unwrap()
                            .mul(&bracket(&betabar.div(&q.mul(&z)).unwrap()).unwrap()),
                    )
                    .unwrap();
                assert_eq!(t.as_scalar_multiple_of_identity(), Some(scale));
            }
        }
    }

    #[test]
    fn transfer_apply_matches_matrix() {
        let mut s = Sampler::new(108, 1, 0, 0);
        let v = s.rational();
        let beta = s.rational();
        let params = ModelParams::generic(v, beta, BetaBarSign::Plus).unwrap();
        let tp = TransferParams::from_model(&params);
        let zs = s.distinct_points(3);
        let z = s.rational();
        let t = transfer_matrix(&z, &zs, &tp).unwrap();
        let mut state = StateVector::<Rational>::zero(3);
        for (i, item) in state.data.iter_mut().enumerate() {
            *item = rat(i as i64 + 1, 3);
        }
        assert_eq!(t.apply(&state), transfer_apply(&z, &zs, &tp, &state).unwrap());
    }

    #[test]
    fn scattering_compatibility() {
        // S^(i)(.., s²z_j, ..) S^(j)(..) = S^(j)(.., s²z_i, ..) S^(i)(..) at N = 2
        let mut s = Sampler::new(109, 1, 0, 0);
        let mut done = 0;
        while done < 5 {
            let v = s.rational();
            let beta = s.rational();
            let Ok(params) = ModelParams::generic(v, beta, BetaBarSign::Plus) else { continue };
            let zs = s.distinct_points(2);
            let s2 = params.s.mul(&params.s);
            let run = || -> Result<()> {
                let s1 = scattering_operator(1, &zs, &params)?;
                let s2op = scattering_operator(2, &zs, &params)?;
                let zs_shift2 = [zs[0].clone(), s2.mul(&zs[1])];
                let zs_shift1 = [s2.mul(&zs[0]), zs[1].clone()];
                let lhs = scattering_operator(1, &zs_shift2, &params)?.mul(&s2op);
                let rhs = scattering_operator(2, &zs_shift1, &params)?.mul(&s1);
                assert_eq!(lhs, rhs);
                Ok(())
            };
            if run().is_ok() {
                done += 1;
            }
        }
    }

    #[test]
    fn transfer_equals_scaled_scattering_at_special_point() {
        // q = ζ⁴, s = 1: T(z_i | ..) = −([qβz_i]/[q²βz_i]) S^(i)
        let q = Cyc12::q();
        let mut s = Sampler::new(112, 1, 0, 0);
        let mut done = 0;
        while done < 3 {
            let beta = Cyc12::from_rat(&s.rational());
            let Ok(params) = ModelParams::special_point(q.clone(), beta, BetaBarSign::Plus) else {
                continue;
            };
            let tp = TransferParams::from_model(&params);
            let zs: Vec<Cyc12> = s
                .distinct_points(3)
                .into_iter()
                .map(|r| Cyc12::from_rat(&r))
                .collect();
            let run = || -> Result<()> {
                for i in 1..=3usize {
                    let t = transfer_matrix(&zs[i - 1], &zs, &tp)?;
                    let sc = scattering_operator(i, &zs, &params)?;
                    let lam = lambda_eigenvalue(&zs[i - 1], &tp)?;
                    assert_eq!(t, sc.scale(&lam));
                }
                Ok(())
            };
            if run().is_ok() {
                done += 1;
            }
        }
    }

    #[test]
    fn n1_scattering_is_a_product_of_two_k_matrices() {
        let mut s = Sampler::new(113, 1, 0, 0);
        let v = s.rational();
        let beta = s.rational();
        let params = ModelParams::generic(v, beta.clone(), BetaBarSign::Plus).unwrap();
        let z1 = s.rational();
        let zs = [z1.clone()];
        let got = scattering_operator(1, &zs, &params).unwrap();
        let s2z = params.s.mul(&params.s).mul(&z1);
        let expect = k_matrix(&s2z, &params.beta)
            .unwrap()
            .mul(&k_matrix(&params.s.mul(&z1), &params.s.mul(&params.betabar)).unwrap());
        assert_eq!(got, expect);
    }

    #[test]
    fn lambda_trace_form_matches_closed_form() {
        let q = Cyc12::q();
        let mut s = Sampler::new(110, 1, 0, 0);
        for _ in 0..10 {
            let beta = Cyc12::from_rat(&s.rational());
            for sign in [BetaBarSign::Plus, BetaBarSign::Minus] {
                let Ok(params) = ModelParams::special_point(q.clone(), beta.clone(), sign) else {
                    continue;
                };
                let tp = TransferParams::from_model(&params);
                let z = Cyc12::from_rat(&s.rational());
                let (Ok(a), Ok(b)) = (lambda_eigenvalue(&z, &tp), lambda_trace_form(&z, &tp)) else {
                    continue;
                };
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn local_operator_examples() {
        let m = magnetisation::<Rational>(2);
        let mut v = StateVector::<Rational>::zero(2);
        v.set(&[2], rint(1));
        assert!(m.apply(&v).is_zero());
        let p = parity_operator::<Rational>(3);
        let mut v = StateVector::<Rational>::zero(3);
        v.set(&[2, 3], rint(1));
        let w = p.apply(&v);
        assert_eq!(*w.get(&[1, 2]), rint(1));
        let mut v = StateVector::<Rational>::zero(2);
        v.set(&[1, 2], rint(1));
        let w = theta_insert(2, false, &v);
        assert_eq!(*w.get(&[1, 3]), rint(1));
        let r = spin_reversal::<Rational>(2);
        let mut v = StateVector::<Rational>::zero(2);
        v.set(&[2], rint(1));
        assert_eq!(*r.apply(&v).get(&[1]), rint(1));
    }

    #[test]
    fn divided_difference_constant_and_involution() {
        let mut s = Sampler::new(111, 1, 0, 0);
        let q = s.rational();
        let c = s.rational();
        let z = s.rational();
        let w = s.rational();
        let mut f = |_: &Rational, _: &Rational| -> Result<Rational> { Ok(c.clone()) };
        let got = divided_difference(&mut f, &q, &z, &w).unwrap();
        let expect = c
            .mul(&bracket(&(&q * &w / &z)).unwrap().sub(&bracket(&q).unwrap()))
            .div(&bracket(&(&z / &w)).unwrap())
            .unwrap();
        assert_eq!(got, expect);
        // δ² = id on a non-symmetric function
        let mut done = 0;
        while done < 10 {
            let q = s.rational();
            let z = s.rational();
            let w = s.rational();
            let g = |a: &Rational, b: &Rational| -> Result<Rational> {
                Ok(a.mul(a).add(&b.mul(&rat(3, 7))))
            };
            let run = || -> Result<Rational> {
                let mut dg = |x: &Rational, y: &Rational| -> Result<Rational> {
                    let mut gg = |a: &Rational, b: &Rational| g(a, b);
                    divided_difference(&mut gg, &q, x, y)
                };
                divided_difference(&mut dg, &q, &z, &w)
            };
            if let Ok(val) = run() {
                assert_eq!(val, g(&z, &w).unwrap());
                done += 1;
            }
        }
    }
}
