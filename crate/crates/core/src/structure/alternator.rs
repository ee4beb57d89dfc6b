//! Alternators: right-nondegenerate bilinear forms b on U × V with
//! b(x, f(x)) = 0 for every f in an operator space T ⊆ Hom(U, V).
//!
//! A form is stored by its Gram matrix B (dim U × dim V), b(x, y) = xᵀ B y.
//! Then b(x, f(x)) = xᵀ (B F) x, and over a field with more than two
//! elements this vanishes identically iff B F is alternating.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::matrix::{nullspace_rows, Matrix};
use crate::par;
use crate::spectra::{CheckConfig, CheckMode};
use crate::subspace::{MatSubspace, VecSubspace};

fn is_alternating(m: &Matrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| m.get(i, i).is_zero() && (i + 1..n).all(|j| m.get(i, j) == m.get(j, i)))
}

/// b(x, f(x)) = 0 for all f ∈ T, checked on a basis of T.
pub fn annihilates(t: &MatSubspace, gram: &Matrix) -> bool {
    gram.shape() == (t.cols(), t.rows()) && t.basis().iter().all(|f| is_alternating(&gram.mul(f).expect("shapes agree")))
}

/// b(−, y) ≠ 0 for every nonzero y.
pub fn is_right_nondegenerate(gram: &Matrix) -> bool {
    gram.rank() == gram.cols()
}

/// All Gram matrices B with B F alternating for every F in T, flattened
/// row-major (dim U × dim V).
pub fn alternator_solutions(t: &MatSubspace) -> VecSubspace {
    let field = t.field();
    let (v, u) = t.shape();
    let unknowns = u * v;
    let mut eqs = Vec::new();
    for f in t.basis() {
        // (B F)_{ij} = Σ_k B_{ik} F_{kj}
        let coeff_row = |i: usize, j: usize| {
            let mut row = vec![Fq::ZERO; unknowns];
            for k in 0..v {
                row[i * v + k] = f.get(k, j);
            }
            row
        };
        for i in 0..u {
            eqs.push(coeff_row(i, i));
            for j in i + 1..u {
                let mut r = coeff_row(i, j);
                for (a, b) in r.iter_mut().zip(coeff_row(j, i)) {
                    *a += b;
                }
                eqs.push(r);
            }
        }
    }
    let sols = nullspace_rows(field, &eqs, unknowns);
    VecSubspace::span(field, unknowns, &sols).expect("length matches")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AlternatorSearch {
    Found { index: u64, solution_dim: usize, mode: CheckMode, gram: Matrix },
    None { solution_dim: usize, mode: CheckMode },
    Budget { solution_dim: usize, required: Option<u64>, budget: u64 },
}

impl AlternatorSearch {
    pub fn gram(&self) -> Option<&Matrix> {
        match self {
            AlternatorSearch::Found { gram, .. } => Some(gram),
            _ => None,
        }
    }
}

/// Solve for the alternating condition, then look for a right-nondegenerate
/// member of the solution space: all members in echelon-coordinate order when
/// they fit the budget, seeded samples otherwise.
pub fn find_alternator(t: &MatSubspace, cfg: &CheckConfig) -> Result<AlternatorSearch> {
    let field = t.field();
    if field.q() <= 2 {
        return Err(Error::Precondition("alternator solving needs |F| > 2".into()));
    }
    let (v, u) = t.shape();
    let sols = alternator_solutions(t);
    let solution_dim = sols.dim();
    let as_gram = |flat: &[Fq]| Matrix::from_flat(field, u, v, flat);
    if u < v {
        // rank B ≤ dim U < dim V
        return Ok(AlternatorSearch::None { solution_dim, mode: CheckMode::Exhaustive { count: 0 } });
    }
    let count = sols.element_count();
    let (mode, hit) = match count {
        Some(c) if c <= cfg.budget => {
            let hit = par::first_hit(c, |i| {
                let b = as_gram(&sols.element(i));
                is_right_nondegenerate(&b).then_some(b)
            });
            (CheckMode::Exhaustive { count: c }, hit)
        }
        _ if cfg.samples == 0 => {
            return Ok(AlternatorSearch::Budget { solution_dim, required: count, budget: cfg.budget });
        }
        _ => {
            let hit = par::first_sampled_hit(cfg.samples, cfg.seed, |rng| {
                let b = as_gram(&sols.random_element(rng));
                is_right_nondegenerate(&b).then_some(b)
            });
            (CheckMode::Sampled { samples: cfg.samples, seed: cfg.seed }, hit)
        }
    };
    Ok(match hit {
        Some((index, gram)) => AlternatorSearch::Found { index, solution_dim, mode, gram },
        None => AlternatorSearch::None { solution_dim, mode },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{alts, k_matrix, mats_p, seeded};
    use crate::gf::FieldSpec;

    fn random_alternating_invertible(f: &crate::gf::FieldSpec, n: usize, seed: u64) -> Matrix {
        let mut rng = seeded(seed);
        loop {
            let m = alts(f, n).random_element(&mut rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// Oracle: evaluate b(x, f(x)) at every x ∈ F^u for every basis f.
    fn vanishes_pointwise(t: &MatSubspace, gram: &Matrix) -> bool {
        let f = t.field();
        VecSubspace::full(f, t.cols()).elements().all(|x| {
            t.basis().iter().all(|m| {
                let fx = m.mul_vec(&x).unwrap();
                crate::subspace::dot(f, &x, &gram.mul_vec(&fx).unwrap()).is_zero()
            })
        })
    }

    #[test]
    fn identity_pairing_for_alternating_operators() {
        let f = FieldSpec::gf4();
        let t = alts(&f, 3);
        assert!(annihilates(&t, &Matrix::identity(&f, 3)));
        let found = find_alternator(&t, &CheckConfig::default()).unwrap();
        let g = found.gram().unwrap();
        assert!(is_right_nondegenerate(g) && vanishes_pointwise(&t, g));
    }

    #[test]
    fn symmetric_times_p_has_alternator_p() {
        let f = FieldSpec::gf4();
        for seed in 0..4 {
            let p = random_alternating_invertible(&f, 4, seed);
            let s = mats_p(&f, 4, &p).unwrap();
            let perp = s.trace_orthogonal();
            assert!(annihilates(&perp, &p));
            let found = find_alternator(&perp, &CheckConfig::default()).unwrap();
            let g = found.gram().unwrap();
            assert!(is_right_nondegenerate(g) && vanishes_pointwise(&perp, g));
        }
    }

    #[test]
    fn scalar_line() {
        let f = FieldSpec::gf4();
        let line = |n| MatSubspace::span(&f, n, n, &[Matrix::identity(&f, n)]).unwrap();
        // B itself must be alternating: nondegenerate ones exist only in even size
        assert!(matches!(find_alternator(&line(3), &CheckConfig::default()).unwrap(), AlternatorSearch::None { solution_dim: 3, .. }));
        let found = find_alternator(&line(4), &CheckConfig::default()).unwrap();
        assert!(annihilates(&line(4), found.gram().unwrap()));
        assert!(annihilates(&line(4), &k_matrix(&f, 2)));
    }

    #[test]
    fn solution_space_matches_pointwise_oracle() {
        let f = FieldSpec::gf4();
        let mut rng = seeded(9);
        for _ in 0..10 {
            let t = MatSubspace::full(&f, 2, 3).random_subspace(2, &mut rng);
            let sols = alternator_solutions(&t);
            for flat in sols.elements() {
                assert!(vanishes_pointwise(&t, &Matrix::from_flat(&f, 3, 2, &flat)));
            }
            // members outside the solution space fail somewhere
            for _ in 0..20 {
                let b = Matrix::random(&f, 3, 2, &mut rng);
                assert_eq!(sols.contains(b.entries()), vanishes_pointwise(&t, &b));
            }
        }
    }

    #[test]
    fn small_fields_are_rejected() {
        let f = FieldSpec::gf2();
        assert!(find_alternator(&alts(&f, 2), &CheckConfig::default()).is_err());
    }
}
