//! Block structure of a hurdle relative to its codimension-2 subspace G:
//! in a basis starting with a basis of G every member reads [[K, ?], [0, s]].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::matrix::Matrix;
use crate::par;
use crate::spectra::{check_space, CheckConfig, CheckMode, SpecPredicate};
use crate::structure::hurdle::HurdleCertificate;
use crate::structure::LemmaVerdict;
use crate::subspace::{unit_vector, MatSubspace, VecSubspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingMode {
    /// At most one nonzero eigenvalue in F.
    OneStar,
    /// At most two eigenvalues in F.
    Two,
}

impl SplittingMode {
    pub fn predicate(self) -> SpecPredicate {
        match self {
            SplittingMode::OneStar => SpecPredicate::star(1),
            SplittingMode::Two => SpecPredicate::spec(2),
        }
    }
}

/// Columns: a basis of G, then standard vectors completing it.
pub fn adapted_basis(g: &VecSubspace) -> Matrix {
    let n = g.ambient();
    let mut cols: Vec<Vec<Fq>> = g.basis().to_vec();
    let mut span = g.clone();
    for i in 0..n {
        let e = unit_vector(n, i);
        if !span.contains(&e) {
            span = span.sum(&VecSubspace::span(g.field(), n, &[e.clone()]).expect("length n")).expect("same ambient");
            cols.push(e);
        }
    }
    Matrix::from_fn(g.field(), n, n, |i, j| cols[j][i])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub mode: SplittingMode,
    pub check_mode: Option<CheckMode>,
    #[serde(flatten)]
    pub verdict: LemmaVerdict,
}

/// Which of the four conclusions fails for one member already written in
/// the adapted basis.
fn clause_failure(m: &Matrix, k: usize, mode: SplittingMode) -> Option<&'static str> {
    let n = m.rows();
    if !m.block(k, 0, n - k, k).is_zero() {
        return Some("a: G is not invariant");
    }
    let kb = m.block(0, 0, k, k);
    let s = m.block(k, k, n - k, n - k);
    let chi = kb.char_poly().expect("square");
    let in_field = chi.count_roots_in_field().expect("nonzero");
    let b_ok = match mode {
        SplittingMode::OneStar => chi.count_nonzero_roots_in_field().expect("nonzero") == 0,
        SplittingMode::Two => in_field <= 1,
    };
    if !b_ok {
        return Some("b: induced block on G has too many eigenvalues in F");
    }
    let tr_s = s.trace().expect("square");
    if !tr_s.is_zero() && in_field > 0 {
        return Some("c: quotient trace nonzero but the block on G has an eigenvalue in F");
    }
    if kb.is_zero() && !tr_s.is_zero() {
        return Some("d: block on G vanishes but the quotient trace is nonzero");
    }
    None
}

/// Validate that the certificate fits S and that S satisfies the mode's
/// predicate; then check (a) on a basis and (a)–(d) on every member
/// (exhaustively within budget, seeded samples beyond it).
pub fn splitting_check(s: &MatSubspace, cert: &HurdleCertificate, mode: SplittingMode, cfg: &CheckConfig) -> Result<SplittingReport> {
    if !s.is_square() {
        return Err(Error::NotSquare { rows: s.rows(), cols: s.cols() });
    }
    let n = s.rows();
    let report = |check_mode, verdict| Ok(SplittingReport { mode, check_mode, verdict });
    if n < 3 {
        return report(None, LemmaVerdict::violation("n must be at least 3"));
    }
    if !cert.is_valid_for(s) {
        return report(None, LemmaVerdict::violation("certificate tensors are not all in S"));
    }
    let v = check_space(s, &mode.predicate(), cfg, "splitting")?;
    if !v.holds() {
        return report(Some(v.mode), LemmaVerdict::violation(format!("S is not {}", mode.predicate())));
    }
    let q = adapted_basis(&cert.g);
    let qinv = q.inverse()?;
    let k = n - 2;
    let field = s.field();
    let local = |flat: &[Fq]| qinv.mul(&Matrix::from_flat(field, n, n, flat)).and_then(|m| m.mul(&q)).expect("n x n");
    for b in s.basis() {
        let m = qinv.mul(&b)?.mul(&q)?;
        if !m.block(k, 0, 2, k).is_zero() {
            return report(Some(v.mode), LemmaVerdict::fails_at_matrix("a: G is not invariant", &b));
        }
    }
    let space = s.space();
    let hit = match v.mode {
        CheckMode::Exhaustive { count } => par::first_hit(count, |i| {
            let flat = space.element(i);
            clause_failure(&local(&flat), k, mode).map(|c| (c, flat))
        }),
        CheckMode::Sampled { samples, seed } => par::first_sampled_hit(samples, seed, |rng| {
            let flat = space.random_element(rng);
            clause_failure(&local(&flat), k, mode).map(|c| (c, flat))
        }),
    };
    let verdict = match hit {
        Some((_, (clause, flat))) => LemmaVerdict::fails_at_matrix(clause, &Matrix::from_flat(field, n, n, &flat)),
        None => LemmaVerdict::Holds,
    };
    report(Some(v.mode), verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{hurdle_template, joint, nt, seeded, sl};
    use crate::gf::FieldSpec;

    fn last_two(f: &FieldSpec, n: usize) -> HurdleCertificate {
        HurdleCertificate::new(VecSubspace::span(f, n, &[unit_vector(n, n - 2), unit_vector(n, n - 1)]).unwrap()).unwrap()
    }

    #[test]
    fn sl2_join_sl2_satisfies_all_clauses() {
        let f = FieldSpec::gf4();
        let s = joint(&sl(&f, 2), &sl(&f, 2)).unwrap();
        let r = splitting_check(&s, &last_two(&f, 4), SplittingMode::Two, &CheckConfig::default()).unwrap();
        assert_eq!(r.verdict, LemmaVerdict::Holds);
        assert_eq!(r.check_mode, Some(CheckMode::Exhaustive { count: 1 << 20 }));
    }

    #[test]
    fn template_in_both_modes() {
        let f = FieldSpec::gf4();
        for n in 3..=4 {
            let t = hurdle_template(&f, n).unwrap();
            for mode in [SplittingMode::OneStar, SplittingMode::Two] {
                let r = splitting_check(&t, &last_two(&f, n), mode, &CheckConfig::default()).unwrap();
                assert!(r.verdict.holds(), "{r:?}");
            }
        }
    }

    #[test]
    fn nilpotent_joint_with_sl2_is_one_star() {
        let f = FieldSpec::gf4();
        let s = joint(&nt(&f, 2), &sl(&f, 2)).unwrap();
        let r = splitting_check(&s, &last_two(&f, 4), SplittingMode::OneStar, &CheckConfig::default()).unwrap();
        assert!(r.verdict.holds());
    }

    #[test]
    fn violations_are_not_failures() {
        let f = FieldSpec::gf4();
        let r = splitting_check(&nt(&f, 3), &last_two(&f, 3), SplittingMode::Two, &CheckConfig::default()).unwrap();
        assert!(matches!(r.verdict, LemmaVerdict::HypothesisViolation { .. }));
        let full = MatSubspace::full(&f, 3, 3);
        let r = splitting_check(&full, &last_two(&f, 3), SplittingMode::Two, &CheckConfig::default()).unwrap();
        assert!(matches!(r.verdict, LemmaVerdict::HypothesisViolation { .. }));
    }

    #[test]
    fn conjugated_instances() {
        let f = FieldSpec::gf4();
        let mut rng = seeded(4);
        let s = joint(&sl(&f, 2), &sl(&f, 2)).unwrap();
        for _ in 0..3 {
            let q = Matrix::random_invertible(&f, 4, &mut rng);
            let c = s.conjugate(&q).unwrap();
            let cert = last_two(&f, 4).conjugated(&q).unwrap();
            let cfg = CheckConfig { budget: 1 << 12, samples: 20_000, seed: 1 };
            let r = splitting_check(&c, &cert, SplittingMode::Two, &cfg).unwrap();
            assert!(r.verdict.holds());
        }
    }

    #[test]
    fn adapted_basis_starts_with_g() {
        let f = FieldSpec::gf4();
        let mut rng = seeded(6);
        let g = VecSubspace::random(&f, 5, 3, &mut rng);
        let q = adapted_basis(&g);
        assert_eq!(q.rank(), 5);
        for j in 0..3 {
            assert!(g.contains(&q.col(j)));
        }
    }
}
