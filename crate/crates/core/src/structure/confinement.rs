//! Where the non-adapted vectors of a 2-spec space can live when the space
//! contains certain families of rank-one or low-rank operators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::matrix::{nullspace_rows, Matrix};
use crate::spectra::{check_element, check_space, CheckConfig, SpecPredicate, DEFAULT_BUDGET};
use crate::structure::adapted::adapted_scan;
use crate::structure::hurdle::detect_hurdle;
use crate::structure::LemmaVerdict;
use crate::subspace::{dot, projective_count, projective_point, unit_vector, MatSubspace, VecSubspace};

fn require_two_spec(s: &MatSubspace, cfg: &CheckConfig) -> Result<Option<LemmaVerdict>> {
    let v = check_space(s, &SpecPredicate::spec(2), cfg, "instance")?;
    Ok((!v.holds()).then(|| LemmaVerdict::violation("S is not 2-spec")))
}

fn non_adapted(s: &MatSubspace) -> Result<Vec<Vec<Fq>>> {
    let field = s.field().clone();
    Ok(adapted_scan(s, "instance")?.non_adapted(&field).collect())
}

/// φ ⊗ V ⊆ S and S 2-spec ⇒ every non-adapted vector lies in ker φ.
pub fn confinement_first(s: &MatSubspace, phi: &[Fq], cfg: &CheckConfig) -> Result<LemmaVerdict> {
    let n = s.rows();
    if !s.is_square() || phi.len() != n {
        return Err(Error::ShapeMismatch("form and space sizes differ".into()));
    }
    let f = s.field();
    if n < 3 {
        return Ok(LemmaVerdict::violation("n must be at least 3"));
    }
    if phi.iter().all(|c| c.is_zero()) {
        return Ok(LemmaVerdict::violation("φ is zero"));
    }
    if (0..n).any(|i| !s.contains(&Matrix::tensor(f, phi, &unit_vector(n, i)))) {
        return Ok(LemmaVerdict::violation("φ ⊗ V is not contained in S"));
    }
    if let Some(v) = require_two_spec(s, cfg)? {
        return Ok(v);
    }
    Ok(match non_adapted(s)?.into_iter().find(|x| !dot(f, phi, x).is_zero()) {
        Some(x) => LemmaVerdict::fails_at_point("non-adapted vector outside ker φ", &x),
        None => LemmaVerdict::Holds,
    })
}

/// Trace-zero operators vanishing on G with range in H.
pub fn kill_g_into_h(f: &FieldSpec, g: &VecSubspace, h: &VecSubspace) -> MatSubspace {
    let n = g.ambient();
    let forms = g.annihilator();
    let gens: Vec<Matrix> = forms
        .basis()
        .iter()
        .flat_map(|phi| h.basis().iter().map(move |y| Matrix::tensor(f, phi, y)))
        .collect();
    let traces: Vec<Fq> = gens.iter().map(|m| m.trace().expect("square")).collect();
    let members: Vec<Matrix> = nullspace_rows(f, &[traces], gens.len())
        .iter()
        .map(|c| c.iter().zip(&gens).fold(Matrix::zeros(f, n, n), |acc, (&ci, g)| acc.add(&g.scale(ci)).expect("n x n")))
        .collect();
    MatSubspace::span(f, n, n, &members).expect("n x n")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum SecondBranch {
    Hurdle,
    /// Linear form cutting out the extra hyperplane H′.
    Hyperplane { index: u64, form: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecondReport {
    #[serde(flatten)]
    pub verdict: LemmaVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<SecondBranch>,
}

/// S 2-spec containing every trace-zero operator that kills G (codim 2) and
/// maps into H (a hyperplane with G ⊄ H) ⇒ S is a hurdle, or some hyperplane
/// H′ has all non-adapted vectors in G ∪ H ∪ H′.
pub fn confinement_second(s: &MatSubspace, g: &VecSubspace, h: &VecSubspace, cfg: &CheckConfig) -> Result<SecondReport> {
    let n = s.rows();
    let f = s.field();
    let done = |verdict| Ok(SecondReport { verdict, branch: None });
    if !s.is_square() || g.ambient() != n || h.ambient() != n {
        return Err(Error::ShapeMismatch("subspaces and space sizes differ".into()));
    }
    if n < 3 {
        return done(LemmaVerdict::violation("n must be at least 3"));
    }
    if g.dim() + 2 != n || h.dim() + 1 != n {
        return done(LemmaVerdict::violation("G must have codimension 2 and H codimension 1"));
    }
    if g.is_subspace_of(h) {
        return done(LemmaVerdict::violation("G is contained in H"));
    }
    if !kill_g_into_h(f, g, h).is_subspace_of(s) {
        return done(LemmaVerdict::violation("S misses a trace-zero operator killing G with range in H"));
    }
    if let Some(v) = require_two_spec(s, cfg)? {
        return done(v);
    }
    if detect_hurdle(s, DEFAULT_BUDGET)?.certificate().is_some() {
        return Ok(SecondReport { verdict: LemmaVerdict::Holds, branch: Some(SecondBranch::Hurdle) });
    }
    let rest: Vec<Vec<Fq>> = non_adapted(s)?.into_iter().filter(|x| !g.contains(x) && !h.contains(x)).collect();
    let count = projective_count(n, u64::from(f.q())).expect("small n");
    for index in 0..count {
        let psi = projective_point(f, n, index);
        if rest.iter().all(|x| dot(f, &psi, x).is_zero()) {
            return Ok(SecondReport {
                verdict: LemmaVerdict::Holds,
                branch: Some(SecondBranch::Hyperplane { index, form: crate::json::codes(&psi) }),
            });
        }
    }
    done(LemmaVerdict::Fails {
        reason: "no hyperplane collects the non-adapted vectors outside G ∪ H".into(),
        matrix: None,
        point: rest.first().map(|x| crate::json::codes(x)),
    })
}

/// The six-parameter family: rows 2..4 and columns 1..3 read
/// [[a, λ, y], [b, x, λ], [c, b, a]], everything else zero.
pub fn third_template(f: &FieldSpec, n: usize) -> Result<MatSubspace> {
    if n < 4 {
        return Err(Error::Precondition("template needs n >= 4".into()));
    }
    let e = |cells: &[(usize, usize)]| {
        cells.iter().fold(Matrix::zeros(f, n, n), |acc, &(i, j)| acc.add(&Matrix::unit(f, n, n, i, j)).expect("n x n"))
    };
    let gens = [
        e(&[(1, 0), (3, 2)]),
        e(&[(1, 1), (2, 2)]),
        e(&[(1, 2)]),
        e(&[(2, 0), (3, 1)]),
        e(&[(2, 1)]),
        e(&[(3, 0)]),
    ];
    MatSubspace::span(f, n, n, &gens)
}

/// The two hyperplanes {x₁ = 0} and {x₃ = 0}.
pub fn third_hyperplanes(x: &[Fq]) -> bool {
    x[0].is_zero() || x[2].is_zero()
}

/// M 2-spec containing the template family (n ≥ 5) ⇒ every non-adapted
/// vector has x₁ = 0 or x₃ = 0.
pub fn confinement_third(m: &MatSubspace, cfg: &CheckConfig) -> Result<LemmaVerdict> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if n < 5 {
        return Ok(LemmaVerdict::violation("n must be at least 5"));
    }
    if !third_template(m.field(), n)?.is_subspace_of(m) {
        return Ok(LemmaVerdict::violation("M does not contain the template family"));
    }
    if let Some(v) = require_two_spec(m, cfg)? {
        return Ok(v);
    }
    Ok(match non_adapted(m)?.into_iter().find(|x| !third_hyperplanes(x)) {
        Some(x) => LemmaVerdict::fails_at_point("non-adapted vector outside both hyperplanes", &x),
        None => LemmaVerdict::Holds,
    })
}

/// A ∈ Mat₃ of rank 1 and trace 0 with A + (N ⊕ 0) 2-spec for all N ∈ sl₂
/// ⇒ the last row or the last column of A is zero.
pub fn lastblock_check(a: &Matrix) -> Result<LemmaVerdict> {
    if a.shape() != (3, 3) {
        return Err(Error::ShapeMismatch("lastblock instances are 3x3".into()));
    }
    let f = a.field();
    if a.rank() != 1 || !a.trace()?.is_zero() {
        return Ok(LemmaVerdict::violation("A must have rank 1 and trace 0"));
    }
    let sl2 = crate::constructions::sl(f, 2);
    let two = SpecPredicate::spec(2);
    for i in 0..sl2.element_count().expect("small") {
        let mut shift = Matrix::zeros(f, 3, 3);
        shift.set_block(0, 0, &sl2.element(i));
        if !check_element(&a.add(&shift)?, &two)? {
            return Ok(LemmaVerdict::violation("some A + (N ⊕ 0) is not 2-spec"));
        }
    }
    let last_col_zero = (0..3).all(|i| a.get(i, 2).is_zero());
    let last_row_zero = (0..3).all(|j| a.get(2, j).is_zero());
    Ok(if last_col_zero || last_row_zero {
        LemmaVerdict::Holds
    } else {
        LemmaVerdict::fails_at_matrix("last row and last column are both nonzero", a)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LastblockAudit {
    pub candidates: u64,
    pub meeting_hypotheses: u64,
    pub holds: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Matrix>,
}

/// Every rank-1 trace-0 matrix of Mat₃(F).
pub fn lastblock_audit(f: &FieldSpec) -> Result<LastblockAudit> {
    let all = MatSubspace::full(f, 3, 3);
    let count = all.element_count().ok_or_else(|| Error::Precondition("field too large".into()))?;
    let verdicts = crate::par::map_indices(count, |i| {
        let a = all.element(i);
        (a.rank() == 1 && a.trace().expect("square").is_zero()).then(|| (lastblock_check(&a).expect("3x3"), a))
    });
    let mut audit = LastblockAudit { candidates: 0, meeting_hypotheses: 0, holds: 0, failures: 0, first_failure: None };
    for (v, a) in verdicts.into_iter().flatten() {
        audit.candidates += 1;
        match v {
            LemmaVerdict::Holds => {
                audit.meeting_hypotheses += 1;
                audit.holds += 1;
            }
            LemmaVerdict::Fails { .. } => {
                audit.meeting_hypotheses += 1;
                audit.failures += 1;
                audit.first_failure.get_or_insert(a);
            }
            _ => {}
        }
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{joint, nt, seeded, sl};

    fn first_column_space(f: &FieldSpec, t: &MatSubspace) -> MatSubspace {
        let n = t.rows() + 1;
        let mut gens: Vec<Matrix> = (0..n).map(|i| Matrix::unit(f, n, n, i, 0)).collect();
        for b in t.basis() {
            let mut m = Matrix::zeros(f, n, n);
            m.set_block(1, 1, &b);
            gens.push(m);
        }
        MatSubspace::span(f, n, n, &gens).unwrap()
    }

    #[test]
    fn first_confinement_instances() {
        let f = FieldSpec::gf4();
        let mut rng = seeded(12);
        let s = first_column_space(&f, &sl(&f, 2));
        let e1 = unit_vector(3, 0);
        assert_eq!(confinement_first(&s, &e1, &CheckConfig::default()).unwrap(), LemmaVerdict::Holds);
        let q = Matrix::random_invertible(&f, 3, &mut rng);
        let phi = q.inverse().unwrap().vec_mul(&e1).unwrap();
        let c = s.conjugate(&q).unwrap();
        assert_eq!(confinement_first(&c, &phi, &CheckConfig::default()).unwrap(), LemmaVerdict::Holds);
        let bad = confinement_first(&MatSubspace::full(&f, 3, 3), &e1, &CheckConfig::default()).unwrap();
        assert!(matches!(bad, LemmaVerdict::HypothesisViolation { .. }));
    }

    #[test]
    fn second_confinement_on_hurdle_and_generated_space() {
        let f = FieldSpec::gf4();
        let n = 3;
        let g = VecSubspace::span(&f, n, &[unit_vector(n, 0)]).unwrap();
        let h = VecSubspace::span(&f, n, &[unit_vector(n, 1), unit_vector(n, 2)]).unwrap();
        let base = kill_g_into_h(&f, &g, &h);
        assert_eq!(base.dim(), 2 * (n - 1) - 1);
        let r = confinement_second(&base, &g, &h, &CheckConfig::default()).unwrap();
        assert!(r.verdict.holds(), "{r:?}");
        let hurdle = joint(&nt(&f, 1), &sl(&f, 2)).unwrap();
        let r = confinement_second(&hurdle, &g, &h, &CheckConfig::default()).unwrap();
        assert_eq!(r.branch, Some(SecondBranch::Hurdle));
    }

    #[test]
    fn third_template_shape_and_instance() {
        let f = FieldSpec::gf4();
        let t = third_template(&f, 5).unwrap();
        assert_eq!(t.dim(), 6);
        assert_eq!(confinement_third(&t, &CheckConfig::default()).unwrap(), LemmaVerdict::Holds);
        assert!(matches!(confinement_third(&third_template(&f, 4).unwrap(), &CheckConfig::default()).unwrap(), LemmaVerdict::HypothesisViolation { .. }));
    }

    #[test]
    fn lastblock_examples() {
        let f = FieldSpec::gf4();
        // E₁₃ has a nonzero last column but a zero last row
        assert_eq!(lastblock_check(&Matrix::unit(&f, 3, 3, 0, 2)).unwrap(), LemmaVerdict::Holds);
        assert!(matches!(lastblock_check(&Matrix::identity(&f, 3)).unwrap(), LemmaVerdict::HypothesisViolation { .. }));
    }
}
