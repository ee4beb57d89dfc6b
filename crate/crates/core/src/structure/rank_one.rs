//! Rank-one spanning families and the companion-matrix witness for spaces
//! containing every zero-diagonal matrix.

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::matrix::Matrix;
use crate::subspace::MatSubspace;
use crate::upoly::Poly;

/// E_ij for i ≠ j, and E₁₁ + E₁ᵢ + Eᵢ₁ + Eᵢᵢ for i ≥ 2 (signs vanish in
/// characteristic 2). Each member has rank 1 and trace 0.
pub fn sl_rank_one_family(f: &FieldSpec, n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(Matrix::unit(f, n, n, i, j));
            }
        }
    }
    for i in 1..n {
        let m = [(0, 0), (0, i), (i, 0), (i, i)]
            .iter()
            .fold(Matrix::zeros(f, n, n), |acc, &(r, c)| acc.add(&Matrix::unit(f, n, n, r, c)).expect("n x n"));
        out.push(m);
    }
    out
}

/// Matrices with zero diagonal.
pub fn zero_diagonal(f: &FieldSpec, n: usize) -> MatSubspace {
    let gens: Vec<Matrix> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| Matrix::unit(f, n, n, i, j)).collect();
    MatSubspace::span(f, n, n, &gens).expect("n x n")
}

/// Companion matrix of t^{n−3}(t − α)(t − β)(t − α − β) for the first pair
/// of distinct nonzero α, β: trace zero, so its diagonal is zero, and it has
/// at least three distinct eigenvalues in F.
pub fn diagonal_zero_witness(f: &FieldSpec, n: usize) -> Result<Matrix> {
    if n < 3 {
        return Err(Error::Precondition("needs n >= 3".into()));
    }
    if f.q() < 4 {
        return Err(Error::Precondition("needs two distinct nonzero elements".into()));
    }
    let (alpha, beta) = (Fq(1), Fq(2));
    let r = Poly::from_roots(f, &[alpha, beta, alpha + beta]).mul(&Poly::monomial(f, n - 3))?;
    Matrix::companion(&r)
}
