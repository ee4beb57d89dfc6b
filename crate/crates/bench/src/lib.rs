//! Fixed, seeded inputs shared by the benchmarks.

use boundspec::constructions::{hurdle_template, seeded, sl2_join_nt};
use boundspec::{FieldSpec, MatSubspace, Matrix, Poly};

pub fn gf4() -> FieldSpec {
    FieldSpec::gf4()
}

pub fn random_matrices(f: &FieldSpec, n: usize, count: usize, seed: u64) -> Vec<Matrix> {
    let mut rng = seeded(seed);
    (0..count).map(|_| Matrix::random(f, n, n, &mut rng)).collect()
}

/// sl₂ joined with NT₂: 65 536 elements.
pub fn joint_space(f: &FieldSpec) -> MatSubspace {
    sl2_join_nt(f, 4).expect("n = 4")
}

/// The n = 4 hurdle template under a fixed random change of basis.
pub fn conjugated_hurdle(f: &FieldSpec, n: usize, seed: u64) -> MatSubspace {
    let q = Matrix::random_invertible(f, n, &mut seeded(seed));
    hurdle_template(f, n).expect("n >= 2").conjugate(&q).expect("invertible")
}

/// A regular Hessenberg 3×3 matrix and a target with the same trace.
pub fn choice_instance(f: &FieldSpec) -> (Matrix, Poly) {
    let m = Matrix::from_rows(f, &[vec![1, 2, 3], vec![1, 0, 1], vec![0, 2, 1]]).expect("3x3");
    let tr = m.trace().expect("square").code();
    let r = Poly::from_codes(f, &[1, 3, tr, 1]).expect("codes in range");
    (m, r)
}
