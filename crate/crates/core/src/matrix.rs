//! Dense matrices over GF(2^k).

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::upoly::Poly;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
    field: FieldSpec,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduce `rows` (each of equal length) to reduced row-echelon form in place,
/// dropping zero rows. Returns the pivot column of each remaining row.
pub fn rref_rows(field: &FieldSpec, rows: &mut Vec<Vec<Fq>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        if inv != Fq::ONE {
            for x in rows[r][c..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor.is_zero() {
                continue;
            }
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x += field.mul(factor, y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right kernel {x : A x = 0} for A given by its rows over
/// `ncols` unknowns. Each basis vector has a 1 at one free column.
pub fn nullspace_rows(field: &FieldSpec, rows: &[Vec<Fq>], ncols: usize) -> Vec<Vec<Fq>> {
    let mut reduced = rows.to_vec();
    let pivots = rref_rows(field, &mut reduced);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Fq::ZERO; ncols];
            v[free] = Fq::ONE;
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = row[free];
            }
            v
        })
        .collect()
}

impl Matrix {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Fq>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.code() >= field.q()) {
            return Err(Error::InvalidElement { code: bad.code(), q: field.q() });
        }
        Ok(Matrix { rows, cols, data, field: field.clone() })
    }

    pub fn from_codes(field: &FieldSpec, rows: usize, cols: usize, codes: &[u32]) -> Result<Self> {
        let data = codes.iter().map(|&c| field.element(c)).collect::<Result<Vec<_>>>()?;
        Self::new(field, rows, cols, data)
    }

    /// Build from nested rows of codes; all rows must have equal length.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let codes: Vec<u32> = rows.iter().flatten().copied().collect();
        Self::from_codes(field, rows.len(), cols, &codes)
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Fq::ZERO; rows * cols], field: field.clone() }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    /// Matrix unit E_{i,j} (0-based indices).
    pub fn unit(field: &FieldSpec, rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        m.set(i, j, Fq::ONE);
        m
    }

    pub fn from_fn(field: &FieldSpec, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Fq) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data, field: field.clone() }
    }

    /// Reshape a flattened row-major vector.
    pub fn from_flat(field: &FieldSpec, rows: usize, cols: usize, flat: &[Fq]) -> Self {
        assert_eq!(flat.len(), rows * cols, "flat vector length");
        Matrix { rows, cols, data: flat.to_vec(), field: field.clone() }
    }

    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix { rows, cols, data, field: field.clone() }
    }

    /// Uniform element of GL_n by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(field: &FieldSpec, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// Permutation matrix sending e_j to e_{perm[j]}.
    pub fn permutation(field: &FieldSpec, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, Fq::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Fq] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Fq> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Fq> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    fn check_same(&self, other: &Matrix, what: &str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other, "add")?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn scale(&self, c: Fq) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += f.mul(a, other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, x: &[Fq]) -> Result<Vec<Fq>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(Fq::ZERO, |acc, (&a, &b)| acc + f.mul(a, b)))
            .collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, phi: &[Fq]) -> Result<Vec<Fq>> {
        if phi.len() != self.rows {
            return Err(Error::ShapeMismatch(format!("row vector of length {} for {} rows", phi.len(), self.rows)));
        }
        let f = &self.field;
        Ok((0..self.cols)
            .map(|j| (0..self.rows).fold(Fq::ZERO, |acc, i| acc + f.mul(phi[i], self.get(i, j))))
            .collect())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Result<Fq> {
        let n = self.require_square()?;
        Ok((0..n).fold(Fq::ZERO, |acc, i| acc + self.get(i, i)))
    }

    /// Rows as vectors, for the echelon routines.
    pub fn to_rows(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_rows(&self.field, &mut rows);
        let mut out = Matrix::zeros(&self.field, self.rows, self.cols);
        for (i, r) in rows.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(r);
        }
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : M x = 0}.
    pub fn nullspace(&self) -> Vec<Vec<Fq>> {
        nullspace_rows(&self.field, &self.to_rows(), self.cols)
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<Fq> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut a = self.data.clone();
        let mut det = Fq::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i * n + c].is_zero()) else {
                return Ok(Fq::ZERO);
            };
            if p != c {
                for j in 0..n {
                    a.swap(c * n + j, p * n + j);
                }
            }
            let pivot = a[c * n + c];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for i in c + 1..n {
                let factor = f.mul(a[i * n + c], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.mul(factor, a[c * n + j]);
                    a[i * n + j] += v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut rows: Vec<Vec<Fq>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Fq::ONE } else { Fq::ZERO }));
                r
            })
            .collect();
        let pivots = rref_rows(f, &mut rows);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let data = rows.iter().flat_map(|r| r[n..].to_vec()).collect();
        Ok(Matrix { rows: n, cols: n, data, field: f.clone() })
    }

    /// `p · self · p⁻¹`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Matrix> {
        let pinv = p.inverse()?;
        p.mul(self)?.mul(&pinv)
    }

    /// Characteristic polynomial det(tI + M), via Hessenberg reduction.
    pub fn char_poly(&self) -> Result<Poly> {
        self.char_poly_hessenberg()
    }

    /// Reduce to upper Hessenberg form by similarity (with row/column pivoting),
    /// then expand along the subdiagonal.
    pub fn char_poly_hessenberg(&self) -> Result<Poly> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut h = self.data.clone();
        hessenberg_in_place(f, &mut h, n);
        Ok(Poly::new(f, hessenberg_char_coeffs(f, &h, n)))
    }

    /// Division-free characteristic polynomial (Berkowitz).
    pub fn char_poly_berkowitz(&self) -> Result<Poly> {
        let n = self.require_square()?;
        let f = &self.field;
        if n == 0 {
            return Ok(Poly::one(f));
        }
        // v holds coefficients of the trailing principal submatrix, highest degree first
        let mut v = vec![Fq::ONE, self.get(n - 1, n - 1)];
        for k in (0..n - 1).rev() {
            let m = n - k;
            let a = self.get(k, k);
            let r: Vec<Fq> = (k + 1..n).map(|j| self.get(k, j)).collect();
            let mut c: Vec<Fq> = (k + 1..n).map(|i| self.get(i, k)).collect();
            // Toeplitz column: 1, a, R C, R A1 C, ...
            let mut col = vec![Fq::ONE, a];
            for _ in 1..m {
                col.push(r.iter().zip(&c).fold(Fq::ZERO, |acc, (&x, &y)| acc + f.mul(x, y)));
                c = (k + 1..n)
                    .map(|i| (k + 1..n).zip(&c).fold(Fq::ZERO, |acc, (j, &y)| acc + f.mul(self.get(i, j), y)))
                    .collect();
            }
            let mut next = vec![Fq::ZERO; m + 1];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, &vj) in v.iter().enumerate().take(i + 1) {
                    *slot += f.mul(col[i - j], vj);
                }
            }
            v = next;
        }
        v.reverse();
        Ok(Poly::new(f, v))
    }

    /// Least-degree monic annihilator, as the lcm of the Krylov annihilators
    /// of the standard basis vectors.
    pub fn min_poly(&self) -> Result<Poly> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut acc = Poly::one(f);
        for i in 0..n {
            let mut e = vec![Fq::ZERO; n];
            e[i] = Fq::ONE;
            let ann = self.krylov_annihilator(e);
            let g = acc.gcd(&ann)?;
            acc = acc.mul(&ann)?.divrem(&g)?.0;
        }
        Ok(acc)
    }

    fn krylov_annihilator(&self, v: Vec<Fq>) -> Poly {
        let n = self.rows;
        let f = &self.field;
        let mut krylov = vec![v];
        loop {
            let d = krylov.len();
            let next = self.mul_vec(&krylov[d - 1]).expect("square");
            krylov.push(next);
            // columns are the Krylov vectors; a kernel vector gives the relation
            let rows: Vec<Vec<Fq>> = (0..n).map(|i| krylov.iter().map(|k| k[i]).collect()).collect();
            let kernel = nullspace_rows(f, &rows, krylov.len());
            if let Some(rel) = kernel.first() {
                // the first dependency: the relation involves the last vector
                return Poly::new(f, rel.clone()).monic();
            }
        }
    }

    /// Companion matrix: ones on the subdiagonal, last column a_0..a_{n-1}.
    pub fn companion(r: &Poly) -> Result<Matrix> {
        let n = match r.degree() {
            Some(d) if d >= 1 && r.is_monic() => d,
            _ => return Err(Error::NotMonic),
        };
        let f = r.field();
        let mut m = Matrix::zeros(f, n, n);
        for i in 1..n {
            m.set(i, i - 1, Fq::ONE);
        }
        for i in 0..n {
            // -a_i = a_i in characteristic 2
            m.set(i, n - 1, r.coeff(i));
        }
        Ok(m)
    }

    /// The rank-one operator x ↦ φ(x) y, i.e. the matrix y·φ.
    pub fn tensor(field: &FieldSpec, phi: &[Fq], y: &[Fq]) -> Matrix {
        Matrix::from_fn(field, y.len(), phi.len(), |i, j| field.mul(y[i], phi[j]))
    }

    /// m_{i,j} = 0 for i > j+1 and every subdiagonal entry nonzero.
    pub fn is_regular_hessenberg(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        (0..n).all(|i| (0..n).all(|j| i <= j + 1 || self.get(i, j).is_zero()))
            && (1..n).all(|i| !self.get(i, i - 1).is_zero())
    }

    /// Copy `block` into position (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(&self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }
}

/// Similarity reduction of an n×n row-major buffer to upper Hessenberg form.
pub(crate) fn hessenberg_in_place(f: &FieldSpec, h: &mut [Fq], n: usize) {
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h[i * n + j].is_zero()) else {
            continue;
        };
        if p != j + 1 {
            let s = j + 1;
            for c in 0..n {
                h.swap(p * n + c, s * n + c);
            }
            for r in 0..n {
                h.swap(r * n + p, r * n + s);
            }
        }
        let inv = f.inv(h[(j + 1) * n + j]).expect("nonzero pivot");
        for i in j + 2..n {
            let u = f.mul(h[i * n + j], inv);
            if u.is_zero() {
                continue;
            }
            // row_i -= u row_{j+1}, then col_{j+1} += u col_i
            for c in 0..n {
                let v = f.mul(u, h[(j + 1) * n + c]);
                h[i * n + c] += v;
            }
            for r in 0..n {
                let v = f.mul(u, h[r * n + i]);
                h[r * n + j + 1] += v;
            }
        }
    }
}

/// Characteristic polynomial coefficients (lowest degree first) of an upper
/// Hessenberg matrix, by the standard three-term style recurrence.
pub(crate) fn hessenberg_char_coeffs(f: &FieldSpec, h: &[Fq], n: usize) -> Vec<Fq> {
    // p[k] = char poly of the leading k×k block
    let mut p: Vec<Vec<Fq>> = Vec::with_capacity(n + 1);
    p.push(vec![Fq::ONE]);
    for k in 1..=n {
        let kk = k - 1;
        // (t + h_kk) p_{k-1}
        let prev = &p[k - 1];
        let mut cur = vec![Fq::ZERO; k + 1];
        for (d, &c) in prev.iter().enumerate() {
            cur[d + 1] += c;
            cur[d] += f.mul(h[kk * n + kk], c);
        }
        // + sum_i h_{i,k} (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
        let mut prod = Fq::ONE;
        for i in (0..kk).rev() {
            prod = f.mul(prod, h[(i + 1) * n + i]);
            if prod.is_zero() {
                break;
            }
            let coef = f.mul(h[i * n + kk], prod);
            if coef.is_zero() {
                continue;
            }
            for (d, &c) in p[i].iter().enumerate() {
                cur[d] += f.mul(coef, c);
            }
        }
        p.push(cur);
    }
    p.pop().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const W: Fq = Fq(2);

    fn m(f: &FieldSpec, rows: &[Vec<u32>]) -> Matrix {
        Matrix::from_rows(f, rows).unwrap()
    }

    /// det(tI + M) by Laplace expansion over the polynomial ring.
    fn cofactor_char_poly(a: &Matrix) -> Poly {
        let f = a.field();
        let n = a.rows();
        let entries: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = Poly::constant(f, a.get(i, j));
                        if i == j {
                            c.add(&Poly::monomial(f, 1)).unwrap()
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        fn laplace(f: &FieldSpec, m: &[Vec<Poly>]) -> Poly {
            if m.is_empty() {
                return Poly::one(f);
            }
            let mut acc = Poly::zero(f);
            for j in 0..m.len() {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                acc = acc.add(&m[0][j].mul(&laplace(f, &minor)).unwrap()).unwrap();
            }
            acc
        }
        laplace(f, &entries)
    }

    #[test]
    fn basic_scalars() {
        let f = FieldSpec::gf4();
        assert_eq!(Matrix::zeros(&f, 3, 3).rank(), 0);
        for n in 1..5 {
            assert_eq!(Matrix::identity(&f, n).det().unwrap(), Fq::ONE);
        }
        // ω·ω + 1·1 = ω²+1 = ω
        let a = m(&f, &[vec![2, 1], vec![1, 2]]);
        let cofactor = f.mul(W, W) + Fq::ONE;
        assert_eq!(a.det().unwrap(), cofactor);
        assert_eq!(cofactor, W);
    }

    #[test]
    fn shape_errors() {
        let f = FieldSpec::gf4();
        let a = Matrix::zeros(&f, 2, 3);
        assert!(matches!(a.mul(&a), Err(Error::ShapeMismatch(_))));
        assert!(matches!(a.trace(), Err(Error::NotSquare { .. })));
        assert!(matches!(a.char_poly(), Err(Error::NotSquare { .. })));
        assert!(matches!(Matrix::new(&f, 2, 2, vec![Fq::ZERO; 3]), Err(Error::ShapeMismatch(_))));
        assert_eq!(Matrix::zeros(&f, 2, 2).inverse().unwrap_err(), Error::Singular);
    }

    #[test]
    fn char_poly_examples() {
        let f = FieldSpec::gf4();
        let r = Poly::new(&f, vec![Fq::ONE, W, Fq::ZERO, Fq::ONE]);
        let c = Matrix::companion(&r).unwrap();
        assert_eq!(c.char_poly().unwrap(), r);
        assert_eq!(c.char_poly_berkowitz().unwrap(), r);
        for n in 1..5 {
            let expected = Poly::from_roots(&f, &vec![Fq::ONE; n]);
            assert_eq!(Matrix::identity(&f, n).char_poly().unwrap(), expected);
        }
    }

    #[test]
    fn char_poly_matches_cofactor_oracle() {
        let f = FieldSpec::gf4();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..400 {
            let n = 1 + i % 4;
            let a = Matrix::random(&f, n, n, &mut rng);
            let oracle = cofactor_char_poly(&a);
            assert_eq!(a.char_poly_hessenberg().unwrap(), oracle, "{a}");
            assert_eq!(a.char_poly_berkowitz().unwrap(), oracle, "{a}");
        }
    }

    #[test]
    fn char_poly_paths_agree_on_structured_inputs() {
        // sparse matrices exercise the pivoting branches of the reduction
        let f = FieldSpec::gf8();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for i in 0..2000 {
            let n = 1 + i % 7;
            let mut a = Matrix::random(&f, n, n, &mut rng);
            for x in a.data.iter_mut() {
                if rng.random_bool(0.6) {
                    *x = Fq::ZERO;
                }
            }
            assert_eq!(a.char_poly_hessenberg().unwrap(), a.char_poly_berkowitz().unwrap(), "{a}");
        }
    }

    #[test]
    fn char_poly_transpose_exhaustive_n2() {
        let f = FieldSpec::gf4();
        for code in 0..256u32 {
            let codes: Vec<u32> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
            let a = Matrix::from_codes(&f, 2, 2, &codes).unwrap();
            assert_eq!(a.char_poly().unwrap(), a.transpose().char_poly().unwrap());
            assert_eq!(a.char_poly().unwrap(), a.char_poly_berkowitz().unwrap());
        }
    }

    #[test]
    fn companion_layout() {
        let f = FieldSpec::gf4();
        let r = Poly::from_codes(&f, &[1, 1, 1]).unwrap();
        assert_eq!(Matrix::companion(&r).unwrap(), m(&f, &[vec![0, 1], vec![1, 1]]));
        let t = Poly::monomial(&f, 1);
        assert_eq!(Matrix::companion(&t).unwrap(), m(&f, &[vec![0]]));
        assert_eq!(Matrix::companion(&Poly::from_codes(&f, &[1, 2]).unwrap()).unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn companion_round_trip_exhaustive_gf4() {
        let f = FieldSpec::gf4();
        for d in 1..=4u32 {
            for idx in 0..4u32.pow(d) {
                let mut codes: Vec<u32> = (0..d).map(|i| (idx >> (2 * i)) & 3).collect();
                codes.push(1);
                let r = Poly::from_codes(&f, &codes).unwrap();
                let c = Matrix::companion(&r).unwrap();
                assert_eq!(c.char_poly().unwrap(), r);
                assert_eq!(c.min_poly().unwrap(), r);
                assert!(c.is_regular_hessenberg());
            }
        }
    }

    #[test]
    fn min_poly_examples() {
        let f = FieldSpec::gf4();
        for n in 1..5 {
            assert_eq!(Matrix::zeros(&f, n, n).min_poly().unwrap(), Poly::monomial(&f, 1));
            assert_eq!(Matrix::identity(&f, n).min_poly().unwrap(), Poly::linear(&f, Fq::ONE));
        }
        let e12 = Matrix::unit(&f, 3, 3, 0, 1);
        assert!(e12.mul(&e12).unwrap().is_zero());
        assert_eq!(e12.min_poly().unwrap(), Poly::monomial(&f, 2));
    }

    #[test]
    fn tensor_examples() {
        let f = FieldSpec::gf8();
        let e = |i: usize| {
            let mut v = vec![Fq::ZERO; 3];
            v[i] = Fq::ONE;
            v
        };
        let t = Matrix::tensor(&f, &e(0), &e(1));
        assert_eq!(t, Matrix::unit(&f, 3, 3, 1, 0));
        assert_eq!(t.trace().unwrap(), Fq::ZERO);
        assert_eq!(Matrix::tensor(&f, &e(0), &e(0)).trace().unwrap(), Fq::ONE);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let phi: Vec<Fq> = (0..4).map(|_| f.random(&mut rng)).collect();
            let y: Vec<Fq> = (0..4).map(|_| f.random(&mut rng)).collect();
            let dot = phi.iter().zip(&y).fold(Fq::ZERO, |a, (&p, &q)| a + f.mul(p, q));
            assert_eq!(Matrix::tensor(&f, &phi, &y).trace().unwrap(), dot);
        }
    }

    #[test]
    fn conjugation() {
        let f = FieldSpec::gf4();
        let e12 = Matrix::unit(&f, 2, 2, 0, 1);
        assert_eq!(e12.conjugate(&Matrix::identity(&f, 2)).unwrap(), e12);
        let swap = Matrix::permutation(&f, &[1, 0]);
        assert_eq!(e12.conjugate(&swap).unwrap(), Matrix::unit(&f, 2, 2, 1, 0));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..1000 {
            let n = 1 + i % 5;
            let a = Matrix::random(&f, n, n, &mut rng);
            let p = Matrix::random_invertible(&f, n, &mut rng);
            assert_eq!(a.conjugate(&p).unwrap().char_poly().unwrap(), a.char_poly().unwrap());
        }
    }

    #[test]
    fn regular_hessenberg_predicate() {
        let f = FieldSpec::gf4();
        assert!(m(&f, &[vec![1, 2, 3], vec![1, 0, 0], vec![0, 2, 1]]).is_regular_hessenberg());
        assert!(!m(&f, &[vec![1, 2, 3], vec![0, 0, 0], vec![0, 2, 1]]).is_regular_hessenberg());
        assert!(!m(&f, &[vec![1, 2, 3], vec![1, 0, 0], vec![1, 2, 1]]).is_regular_hessenberg());
    }

    proptest! {
        #[test]
        fn min_poly_divides_char_poly_and_annihilates(codes in prop::collection::vec(0u32..4, 16)) {
            let f = FieldSpec::gf4();
            let a = Matrix::from_codes(&f, 4, 4, &codes).unwrap();
            let mp = a.min_poly().unwrap();
            let cp = a.char_poly().unwrap();
            prop_assert!(cp.rem(&mp).unwrap().is_zero());
            // Horner evaluation of mp at a
            let mut acc = Matrix::zeros(&f, 4, 4);
            for &c in mp.coeffs().iter().rev() {
                acc = acc.mul(&a).unwrap().add(&Matrix::identity(&f, 4).scale(c)).unwrap();
            }
            prop_assert!(acc.is_zero());
        }

        #[test]
        fn inverse_round_trip(codes in prop::collection::vec(0u32..8, 9)) {
            let f = FieldSpec::gf8();
            let a = Matrix::from_codes(&f, 3, 3, &codes).unwrap();
            match a.inverse() {
                Ok(inv) => prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&f, 3)),
                Err(_) => prop_assert_eq!(a.det().unwrap(), Fq::ZERO),
            }
        }

        #[test]
        fn rank_plus_nullity(codes in prop::collection::vec(0u32..4, 12)) {
            let f = FieldSpec::gf4();
            let a = Matrix::from_codes(&f, 3, 4, &codes).unwrap();
            let kernel = a.nullspace();
            prop_assert_eq!(a.rank() + kernel.len(), 4);
            for v in kernel {
                prop_assert!(a.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
            }
        }
    }
}
