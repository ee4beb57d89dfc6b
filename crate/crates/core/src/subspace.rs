//! Subspaces of F^m and of matrix spaces, held in canonical echelon form,
//! with deterministic index-addressable enumeration of elements, projective
//! points and Grassmannians.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::matrix::{nullspace_rows, rref_rows, Matrix};

/// A subspace of F^m with a reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct VecSubspace {
    ambient: usize,
    basis: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
    field: FieldSpec,
}

impl std::fmt::Debug for VecSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<u32>> = self.basis.iter().map(|r| r.iter().map(|x| x.code()).collect()).collect();
        write!(f, "VecSubspace(m={}, {:?})", self.ambient, rows)
    }
}

pub(crate) fn dot(f: &FieldSpec, a: &[Fq], b: &[Fq]) -> Fq {
    a.iter().zip(b).fold(Fq::ZERO, |acc, (&x, &y)| acc + f.mul(x, y))
}

/// acc += c·v
pub(crate) fn axpy(f: &FieldSpec, acc: &mut [Fq], c: Fq, v: &[Fq]) {
    if c.is_zero() {
        return;
    }
    for (a, &x) in acc.iter_mut().zip(v) {
        *a += f.mul(c, x);
    }
}

/// Base-q digits of `index`, most significant first.
fn digits(mut index: u64, q: u64, len: usize) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; len];
    for slot in out.iter_mut().rev() {
        *slot = Fq((index % q) as u16);
        index /= q;
    }
    out
}

/// q^e, or `None` on overflow.
pub fn checked_pow(q: u64, e: usize) -> Option<u64> {
    q.checked_pow(u32::try_from(e).ok()?)
}

/// Number of d-dimensional subspaces of GF(q)^m.
pub fn gaussian_binomial(m: usize, d: usize, q: u64) -> Option<u64> {
    if d > m {
        return Some(0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num = num.checked_mul(u128::from(checked_pow(q, m - i)?) - 1)?;
        den = den.checked_mul(u128::from(checked_pow(q, i + 1)?) - 1)?;
    }
    u64::try_from(num / den).ok()
}

/// Number of projective points of GF(q)^m.
pub fn projective_count(m: usize, q: u64) -> Option<u64> {
    Some((checked_pow(q, m)? - 1) / (q - 1))
}

/// The `index`-th projective point of GF(q)^m: points are grouped by the
/// position of their leading 1, earliest position first; the free tail is
/// read as base-q digits.
pub fn projective_point(field: &FieldSpec, m: usize, mut index: u64) -> Vec<Fq> {
    let q = u64::from(field.q());
    for lead in 0..m {
        let block = checked_pow(q, m - 1 - lead).expect("projective index range");
        if index < block {
            let mut v = vec![Fq::ZERO; m];
            v[lead] = Fq::ONE;
            v[lead + 1..].copy_from_slice(&digits(index, q, m - 1 - lead));
            return v;
        }
        index -= block;
    }
    panic!("projective index out of range");
}

impl VecSubspace {
    /// Canonical span of the given vectors.
    pub fn span(field: &FieldSpec, ambient: usize, vectors: &[Vec<Fq>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::ShapeMismatch(format!("vector of length {} in F^{ambient}", v.len())));
        }
        Ok(Self::span_unchecked(field, ambient, vectors.to_vec()))
    }

    pub(crate) fn span_unchecked(field: &FieldSpec, ambient: usize, mut rows: Vec<Vec<Fq>>) -> Self {
        let pivots = rref_rows(field, &mut rows);
        VecSubspace { ambient, basis: rows, pivots, field: field.clone() }
    }

    pub fn zero(field: &FieldSpec, ambient: usize) -> Self {
        VecSubspace { ambient, basis: Vec::new(), pivots: Vec::new(), field: field.clone() }
    }

    pub fn full(field: &FieldSpec, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| unit_vector(ambient, i)).collect();
        VecSubspace { ambient, basis, pivots: (0..ambient).collect(), field: field.clone() }
    }

    /// Uniformly random vectors until the requested dimension is reached.
    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, ambient: usize, dim: usize, rng: &mut R) -> Self {
        assert!(dim <= ambient, "dimension exceeds ambient");
        let mut s = Self::zero(field, ambient);
        while s.dim() < dim {
            let v: Vec<Fq> = (0..ambient).map(|_| field.random(rng)).collect();
            if !s.contains(&v) {
                let mut rows = s.basis.clone();
                rows.push(v);
                s = Self::span_unchecked(field, ambient, rows);
            }
        }
        s
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis rows.
    pub fn basis(&self) -> &[Vec<Fq>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_compatible(&self, other: &VecSubspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(Error::ShapeMismatch(format!("ambient {} vs {}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    /// Remainder of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[Fq]) -> Vec<Fq> {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p];
            axpy(&self.field, &mut r, c, row);
        }
        r
    }

    pub fn contains(&self, v: &[Fq]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` in the canonical basis, if it is a member.
    pub fn coordinates(&self, v: &[Fq]) -> Option<Vec<Fq>> {
        self.contains(v).then(|| self.pivots.iter().map(|&p| v[p]).collect())
    }

    /// Σ c_i b_i.
    pub fn combine(&self, coeffs: &[Fq]) -> Vec<Fq> {
        let mut v = vec![Fq::ZERO; self.ambient];
        for (row, &c) in self.basis.iter().zip(coeffs) {
            axpy(&self.field, &mut v, c, row);
        }
        v
    }

    pub fn is_subspace_of(&self, other: &VecSubspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &VecSubspace) -> Result<VecSubspace> {
        self.check_compatible(other)?;
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::span_unchecked(&self.field, self.ambient, rows))
    }

    /// Zassenhaus intersection: reduce [u | u] and [v | 0]; rows with a
    /// vanishing left half carry the intersection on the right.
    pub fn intersect(&self, other: &VecSubspace) -> Result<VecSubspace> {
        self.check_compatible(other)?;
        let m = self.ambient;
        let mut rows: Vec<Vec<Fq>> = self
            .basis
            .iter()
            .map(|u| u.iter().chain(u).copied().collect())
            .chain(other.basis.iter().map(|v| v.iter().copied().chain(std::iter::repeat_n(Fq::ZERO, m)).collect()))
            .collect();
        rref_rows(&self.field, &mut rows);
        let inter = rows
            .into_iter()
            .filter(|r| r[..m].iter().all(|x| x.is_zero()))
            .map(|r| r[m..].to_vec())
            .collect();
        Ok(Self::span_unchecked(&self.field, m, inter))
    }

    /// {φ : φ·v = 0 for all v in the space}, in the same coordinates.
    pub fn annihilator(&self) -> VecSubspace {
        let kernel = nullspace_rows(&self.field, &self.basis, self.ambient);
        Self::span_unchecked(&self.field, self.ambient, kernel)
    }

    /// Coordinates outside the pivot set: a chart for the quotient F^m / self.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Quotient projection in the complement chart; its kernel is exactly self.
    pub fn project(&self, v: &[Fq]) -> Vec<Fq> {
        let r = self.reduce(v);
        self.complement_coords().into_iter().map(|c| r[c]).collect()
    }

    /// q^dim, or `None` on overflow.
    pub fn element_count(&self) -> Option<u64> {
        checked_pow(u64::from(self.field.q()), self.dim())
    }

    /// The `index`-th element: coefficients are the base-q digits of the
    /// index, most significant on the first basis vector.
    pub fn element(&self, index: u64) -> Vec<Fq> {
        self.combine(&digits(index, u64::from(self.field.q()), self.dim()))
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<Fq>> + '_ {
        let count = self.element_count().expect("element count overflow");
        (0..count).map(move |i| self.element(i))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Fq> {
        let c: Vec<Fq> = (0..self.dim()).map(|_| self.field.random(rng)).collect();
        self.combine(&c)
    }

    pub fn projective_count(&self) -> Option<u64> {
        projective_count(self.dim(), u64::from(self.field.q()))
    }

    /// The `index`-th projective point of the space (leading coefficient 1).
    pub fn projective_point(&self, index: u64) -> Vec<Fq> {
        self.combine(&projective_point(&self.field, self.dim(), index))
    }

    pub fn projective_points(&self) -> impl Iterator<Item = Vec<Fq>> + '_ {
        let count = self.projective_count().expect("projective count overflow");
        (0..count).map(move |i| self.projective_point(i))
    }
}

pub fn unit_vector(m: usize, i: usize) -> Vec<Fq> {
    let mut v = vec![Fq::ZERO; m];
    v[i] = Fq::ONE;
    v
}

/// Deterministic index-addressable enumeration of all d-dimensional
/// subspaces of F^m: echelon pivot sets in lexicographic order, each followed
/// by its q^(free entries) members.
#[derive(Clone, Debug)]
pub struct Grassmannian {
    field: FieldSpec,
    d: usize,
    m: usize,
    blocks: Vec<GrassBlock>,
    count: u64,
}

#[derive(Clone, Debug)]
struct GrassBlock {
    start: u64,
    size: u64,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
}

impl Grassmannian {
    /// `None` when the count overflows u64.
    pub fn new(field: &FieldSpec, d: usize, m: usize) -> Option<Self> {
        let q = u64::from(field.q());
        let mut blocks = Vec::new();
        let mut start = 0u64;
        if d <= m {
            for pivots in combinations(m, d) {
                let free: Vec<(usize, usize)> = pivots
                    .iter()
                    .enumerate()
                    .flat_map(|(r, &p)| (p + 1..m).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                    .collect();
                let size = checked_pow(q, free.len())?;
                blocks.push(GrassBlock { start, size, pivots, free });
                start = start.checked_add(size)?;
            }
        }
        Some(Grassmannian { field: field.clone(), d, m, blocks, count: start })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn get(&self, index: u64) -> VecSubspace {
        assert!(index < self.count, "grassmannian index out of range");
        let bi = self.blocks.partition_point(|b| b.start + b.size <= index);
        let b = &self.blocks[bi];
        let q = u64::from(self.field.q());
        let vals = digits(index - b.start, q, b.free.len());
        let mut basis: Vec<Vec<Fq>> = b.pivots.iter().map(|&p| unit_vector(self.m, p)).collect();
        for (&(r, c), &v) in b.free.iter().zip(&vals) {
            basis[r][c] = v;
        }
        VecSubspace { ambient: self.m, basis, pivots: b.pivots.clone(), field: self.field.clone() }
    }

    pub fn iter(&self) -> impl Iterator<Item = VecSubspace> + '_ {
        (0..self.count).map(move |i| self.get(i))
    }

    pub fn dim(&self) -> usize {
        self.d
    }
}

/// All d-subsets of 0..m in lexicographic order.
pub fn combinations(m: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, d, &mut Vec::new(), &mut out);
    out
}

/// A linear space of rows×cols matrices, stored as a subspace of the
/// row-major flattening.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatSubspace {
    rows: usize,
    cols: usize,
    space: VecSubspace,
}

impl MatSubspace {
    pub fn span(field: &FieldSpec, rows: usize, cols: usize, mats: &[Matrix]) -> Result<Self> {
        let mut flat = Vec::with_capacity(mats.len());
        for m in mats {
            if m.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch(format!(
                    "{}x{} matrix in a space of {rows}x{cols} matrices",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != field {
                return Err(Error::FieldMismatch);
            }
            flat.push(m.entries().to_vec());
        }
        Ok(MatSubspace { rows, cols, space: VecSubspace::span_unchecked(field, rows * cols, flat) })
    }

    pub fn from_space(rows: usize, cols: usize, space: VecSubspace) -> Result<Self> {
        if space.ambient() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "ambient {} for {rows}x{cols} matrices",
                space.ambient()
            )));
        }
        Ok(MatSubspace { rows, cols, space })
    }

    pub fn zero(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        MatSubspace { rows, cols, space: VecSubspace::zero(field, rows * cols) }
    }

    pub fn full(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        MatSubspace { rows, cols, space: VecSubspace::full(field, rows * cols) }
    }

    pub fn field(&self) -> &FieldSpec {
        self.space.field()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &VecSubspace {
        &self.space
    }

    pub fn basis(&self) -> Vec<Matrix> {
        self.space
            .basis()
            .iter()
            .map(|b| Matrix::from_flat(self.field(), self.rows, self.cols, b))
            .collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.shape() == self.shape() && self.space.contains(m.entries())
    }

    pub fn is_subspace_of(&self, other: &MatSubspace) -> bool {
        self.shape() == other.shape() && self.space.is_subspace_of(&other.space)
    }

    fn check_shape(&self, other: &MatSubspace) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{} matrices",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &MatSubspace) -> Result<MatSubspace> {
        self.check_shape(other)?;
        Ok(MatSubspace { space: self.space.sum(&other.space)?, ..self.clone() })
    }

    pub fn intersect(&self, other: &MatSubspace) -> Result<MatSubspace> {
        self.check_shape(other)?;
        Ok(MatSubspace { space: self.space.intersect(&other.space)?, ..self.clone() })
    }

    /// Add one matrix to the spanning set.
    pub fn with(&self, m: &Matrix) -> Result<MatSubspace> {
        self.sum(&MatSubspace::span(self.field(), self.rows, self.cols, std::slice::from_ref(m))?)
    }

    /// {N : tr(N M) = 0 for all M}, a space of cols×rows matrices.
    pub fn trace_orthogonal(&self) -> MatSubspace {
        // tr(NM) = Σ N_ij M_ji, the flattened dot product of N with Mᵀ
        let transposed: Vec<Vec<Fq>> = self.basis().iter().map(|m| m.transpose().into_entries()).collect();
        let t = VecSubspace::span_unchecked(self.field(), self.rows * self.cols, transposed);
        MatSubspace { rows: self.cols, cols: self.rows, space: t.annihilator() }
    }

    pub fn transpose(&self) -> MatSubspace {
        let mats: Vec<Matrix> = self.basis().iter().map(Matrix::transpose).collect();
        MatSubspace::span(self.field(), self.cols, self.rows, &mats).expect("shapes agree")
    }

    /// {A M : M in the space}.
    pub fn left_mul(&self, a: &Matrix) -> Result<MatSubspace> {
        let mats = self.basis().iter().map(|m| a.mul(m)).collect::<Result<Vec<_>>>()?;
        MatSubspace::span(self.field(), a.rows(), self.cols, &mats)
    }

    /// {M B : M in the space}.
    pub fn right_mul(&self, b: &Matrix) -> Result<MatSubspace> {
        let mats = self.basis().iter().map(|m| m.mul(b)).collect::<Result<Vec<_>>>()?;
        MatSubspace::span(self.field(), self.rows, b.cols(), &mats)
    }

    /// {P M P⁻¹ : M in the space}.
    pub fn conjugate(&self, p: &Matrix) -> Result<MatSubspace> {
        let pinv = p.inverse()?;
        self.left_mul(p)?.right_mul(&pinv)
    }

    /// The image space {M x : M in the space} in F^rows.
    pub fn apply(&self, x: &[Fq]) -> Result<VecSubspace> {
        let images = self.basis().iter().map(|m| m.mul_vec(x)).collect::<Result<Vec<_>>>()?;
        Ok(VecSubspace::span_unchecked(self.field(), self.rows, images))
    }

    pub fn element_count(&self) -> Option<u64> {
        self.space.element_count()
    }

    pub fn element(&self, index: u64) -> Matrix {
        Matrix::from_flat(self.field(), self.rows, self.cols, &self.space.element(index))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix {
        Matrix::from_flat(self.field(), self.rows, self.cols, &self.space.random_element(rng))
    }

    /// Random subspace of the given dimension.
    pub fn random_subspace<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> MatSubspace {
        let mut s = MatSubspace::zero(self.field(), self.rows, self.cols);
        while s.dim() < dim {
            s = s.with(&self.random_element(rng)).expect("same shape");
        }
        s
    }
}
