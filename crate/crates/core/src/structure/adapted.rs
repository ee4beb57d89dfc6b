//! Adapted and weakly adapted vectors of a space of endomorphisms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::json::codes;
use crate::matrix::{nullspace_rows, Matrix};
use crate::par;
use crate::subspace::{projective_count, projective_point, unit_vector, MatSubspace, VecSubspace};

/// x^⊥ ⊗ x: the trace-zero operators with range in F·x.
pub fn line_tensors(field: &FieldSpec, x: &[Fq]) -> MatSubspace {
    let n = x.len();
    let phis = nullspace_rows(field, &[x.to_vec()], n);
    let gens: Vec<Matrix> = phis.iter().map(|phi| Matrix::tensor(field, phi, x)).collect();
    MatSubspace::span(field, n, n, &gens).expect("n x n tensors")
}

/// V* ⊗ x: all operators with range in F·x.
pub fn range_tensors(field: &FieldSpec, x: &[Fq]) -> MatSubspace {
    let n = x.len();
    let gens: Vec<Matrix> = (0..n).map(|i| Matrix::tensor(field, &unit_vector(n, i), x)).collect();
    MatSubspace::span(field, n, n, &gens).expect("n x n tensors")
}

/// dim(S ∩ T) = dim T − rank of T's basis modulo S.
pub(crate) fn meet_dim(s: &MatSubspace, t: &MatSubspace) -> usize {
    let residues: Vec<Vec<Fq>> = t.space().basis().iter().map(|b| s.space().reduce(b)).collect();
    t.dim() - VecSubspace::span_unchecked(s.field(), s.rows() * s.cols(), residues).dim()
}

/// dim(S ∩ (x^⊥ ⊗ x)).
pub fn tensor_meet_dim(s: &MatSubspace, x: &[Fq]) -> usize {
    meet_dim(s, &line_tensors(s.field(), x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Adaptedness {
    /// The intersection is zero.
    Adapted,
    /// The intersection is a line (weakly adapted but not adapted).
    WeaklyAdapted,
    Neither,
}

impl Adaptedness {
    pub fn from_dim(d: usize) -> Self {
        match d {
            0 => Adaptedness::Adapted,
            1 => Adaptedness::WeaklyAdapted,
            _ => Adaptedness::Neither,
        }
    }

    /// Weak adaptedness in the inclusive sense (dimension at most 1).
    pub fn is_weakly_adapted(self) -> bool {
        self != Adaptedness::Neither
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointClass {
    pub index: u64,
    pub point: Vec<u32>,
    pub intersection_dim: usize,
    pub class: Adaptedness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdaptedScanReport {
    pub space: String,
    pub n: usize,
    pub projective_points: u64,
    pub adapted: u64,
    pub weakly_adapted: u64,
    pub neither: u64,
    pub points: Vec<PointClass>,
}

impl AdaptedScanReport {
    /// Representatives of the projective points that are not adapted.
    pub fn non_adapted<'a>(&'a self, field: &'a FieldSpec) -> impl Iterator<Item = Vec<Fq>> + 'a {
        self.points
            .iter()
            .filter(|p| p.class != Adaptedness::Adapted)
            .map(move |p| p.point.iter().map(|&c| field.element(c).expect("own codes")).collect())
    }
}

/// Classify every projective point of F^n.
pub fn adapted_scan(s: &MatSubspace, id: &str) -> Result<AdaptedScanReport> {
    if !s.is_square() {
        return Err(Error::NotSquare { rows: s.rows(), cols: s.cols() });
    }
    let n = s.rows();
    let field = s.field();
    let count = projective_count(n, u64::from(field.q()))
        .ok_or_else(|| Error::Precondition("projective point count overflows".into()))?;
    let points = par::map_indices(count, |i| {
        let x = projective_point(field, n, i);
        let d = tensor_meet_dim(s, &x);
        PointClass { index: i, point: codes(&x), intersection_dim: d, class: Adaptedness::from_dim(d) }
    });
    let tally = |c| points.iter().filter(|p| p.class == c).count() as u64;
    Ok(AdaptedScanReport {
        space: id.to_string(),
        n,
        projective_points: count,
        adapted: tally(Adaptedness::Adapted),
        weakly_adapted: tally(Adaptedness::WeaklyAdapted),
        neither: tally(Adaptedness::Neither),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{full, hurdle_template, nt, seeded};
    use proptest::prelude::*;

    /// Oracle: enumerate the whole space and count members that are
    /// trace-zero with range inside F·x.
    fn brute_meet_size(s: &MatSubspace, x: &[Fq]) -> u64 {
        let f = s.field();
        let n = s.rows();
        let on_line = |v: &[Fq]| {
            // v ∈ F·x
            let nz = x.iter().position(|c| !c.is_zero()).unwrap();
            let c = f.div(v[nz], x[nz]).unwrap();
            v.iter().zip(x).all(|(&a, &b)| a == f.mul(c, b))
        };
        (0..s.element_count().unwrap())
            .filter(|&i| {
                let m = s.element(i);
                m.trace().unwrap().is_zero() && (0..n).all(|j| on_line(&m.col(j)))
            })
            .count() as u64
    }

    #[test]
    fn nt3_examples() {
        let f = FieldSpec::gf4();
        let s = nt(&f, 3);
        let e = |i| unit_vector(3, i);
        assert_eq!(tensor_meet_dim(&s, &e(2)), 0);
        assert_eq!(tensor_meet_dim(&s, &e(0)), 2);
        let r = adapted_scan(&s, "nt3").unwrap();
        assert_eq!(r.projective_points, 21);
        assert_eq!(r.adapted + r.weakly_adapted + r.neither, 21);
        for p in &r.points {
            let x: Vec<Fq> = p.point.iter().map(|&c| Fq(c as u16)).collect();
            assert_eq!(4u64.pow(p.intersection_dim as u32), brute_meet_size(&s, &x));
        }
    }

    #[test]
    fn hurdles_and_full_space_have_no_adapted_points() {
        let f = FieldSpec::gf4();
        let r = adapted_scan(&hurdle_template(&f, 4).unwrap(), "hurdle").unwrap();
        assert_eq!((r.projective_points, r.adapted), (85, 0));
        let r = adapted_scan(&full(&f, 3), "full").unwrap();
        assert_eq!(r.adapted, 0);
        assert!(r.points.iter().all(|p| p.intersection_dim == 2));
    }

    #[test]
    fn range_tensors_have_dimension_n() {
        let f = FieldSpec::gf8();
        let x = vec![Fq(3), Fq(0), Fq(5)];
        assert_eq!(range_tensors(&f, &x).dim(), 3);
        assert_eq!(line_tensors(&f, &x).dim(), 2);
        assert!(line_tensors(&f, &x).is_subspace_of(&range_tensors(&f, &x)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn scan_is_similarity_covariant(seed in any::<u64>(), dim in 1usize..7) {
            let f = FieldSpec::gf4();
            let mut rng = seeded(seed);
            let s = full(&f, 3).random_subspace(dim, &mut rng);
            let p = Matrix::random_invertible(&f, 3, &mut rng);
            let t = s.conjugate(&p).unwrap();
            let count = projective_count(3, 4).unwrap();
            for i in 0..count {
                let x = projective_point(&f, 3, i);
                let px = p.mul_vec(&x).unwrap();
                prop_assert_eq!(tensor_meet_dim(&s, &x), tensor_meet_dim(&t, &px));
            }
        }
    }
}
