//! Whether a family of proper subspaces covers F^n, and whether a
//! homogeneous polynomial function vanishing off such a union must be zero.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::json::codes;
use crate::matrix::nullspace_rows;
use crate::par;
use crate::subspace::{checked_pow, projective_count, projective_point, VecSubspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CoverOutcome {
    Uncovered { index: u64, point: Vec<u32> },
    Covers,
    Budget { required: Option<u64>, budget: u64 },
}

fn ambient_of(family: &[VecSubspace]) -> Result<usize> {
    let n = family.first().map(VecSubspace::ambient).ok_or_else(|| Error::Precondition("empty family".into()))?;
    if family.iter().any(|s| s.ambient() != n) {
        return Err(Error::ShapeMismatch("family members live in different ambients".into()));
    }
    Ok(n)
}

/// First projective point of F^n outside every member.
pub fn covering_check(family: &[VecSubspace], budget: u64) -> Result<CoverOutcome> {
    let n = ambient_of(family)?;
    let field = family[0].field();
    let count = match projective_count(n, u64::from(field.q())) {
        Some(c) if c <= budget => c,
        c => return Ok(CoverOutcome::Budget { required: c, budget }),
    };
    let hit = par::first_hit(count, |i| {
        let x = projective_point(field, n, i);
        (!family.iter().any(|s| s.contains(&x))).then_some(x)
    });
    Ok(match hit {
        Some((index, x)) => CoverOutcome::Uncovered { index, point: codes(&x) },
        None => CoverOutcome::Covers,
    })
}

/// Dimension profile required of a covering family with parameter r:
/// r members of each dimension 1..n−2 and r + 1 hyperplanes, with |F| > r.
pub fn covering_hypotheses(family: &[VecSubspace], r: usize) -> std::result::Result<(), String> {
    let n = ambient_of(family).map_err(|e| e.to_string())?;
    let q = family[0].field().q() as usize;
    if q <= r {
        return Err(format!("|F| = {q} must exceed r = {r}"));
    }
    if family.len() != (n - 1) * r + 1 {
        return Err(format!("family has {} members, expected {}", family.len(), (n - 1) * r + 1));
    }
    for d in 1..n {
        let want = if d == n - 1 { r + 1 } else { r };
        let have = family.iter().filter(|s| s.dim() == d).count();
        if have != want {
            return Err(format!("{have} members of dimension {d}, expected {want}"));
        }
    }
    Ok(())
}

/// Random family with the covering profile.
pub fn random_covering_family<R: Rng + ?Sized>(f: &FieldSpec, n: usize, r: usize, rng: &mut R) -> Vec<VecSubspace> {
    let mut out = Vec::new();
    for d in 1..n {
        let reps = if d == n - 1 { r + 1 } else { r };
        for _ in 0..reps {
            out.push(VecSubspace::random(f, n, d, rng));
        }
    }
    out
}

/// A homogeneous polynomial in n variables, as exponent vector ↦ coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    field: FieldSpec,
    n: usize,
    d: usize,
    terms: BTreeMap<Vec<u32>, Fq>,
}

/// Exponent vectors of the degree-d monomials in n variables, in
/// lexicographic order (highest power of x_1 first).
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(i + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, n, d as u32, &mut Vec::new(), &mut out);
    }
    out
}

impl HomPoly {
    pub fn new(field: &FieldSpec, n: usize, d: usize, terms: BTreeMap<Vec<u32>, Fq>) -> Result<Self> {
        for e in terms.keys() {
            if e.len() != n || e.iter().sum::<u32>() as usize != d {
                return Err(Error::Precondition(format!("monomial {e:?} is not of degree {d} in {n} variables")));
            }
        }
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(HomPoly { field: field.clone(), n, d, terms })
    }

    pub fn zero(field: &FieldSpec, n: usize, d: usize) -> Self {
        HomPoly { field: field.clone(), n, d, terms: BTreeMap::new() }
    }

    /// Coefficients listed against `monomials(n, d)`.
    pub fn from_coeffs(field: &FieldSpec, n: usize, d: usize, coeffs: &[Fq]) -> Self {
        let terms = monomials(n, d).into_iter().zip(coeffs.iter().copied()).filter(|(_, c)| !c.is_zero()).collect();
        HomPoly { field: field.clone(), n, d, terms }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn is_zero_polynomial(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[Fq]) -> Fq {
        self.terms.iter().fold(Fq::ZERO, |acc, (e, &c)| {
            let mono = e.iter().zip(x).fold(c, |m, (&k, &xi)| self.field.mul(m, self.field.pow(xi, u64::from(k))));
            acc + mono
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VanishingVerdict {
    /// Hypotheses hold and p is the zero function.
    Holds,
    HypothesisViolation {
        clause: String,
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        point: Option<Vec<u32>>,
    },
    /// Hypotheses hold but p takes a nonzero value.
    Fails { point: Vec<u32>, value: u32 },
    Budget { required: Option<u64>, budget: u64 },
}

impl VanishingVerdict {
    fn violation(clause: &str, reason: String, point: Option<&[Fq]>) -> Self {
        VanishingVerdict::HypothesisViolation { clause: clause.into(), reason, point: point.map(codes) }
    }
}

/// Check the family-size hypotheses and that p vanishes off the union, then
/// require p to vanish everywhere. Members must be nonzero proper subspaces.
pub fn vanishing_check(p: &HomPoly, family: &[VecSubspace], budget: u64) -> Result<VanishingVerdict> {
    let field = &p.field;
    let n = p.n;
    let q = field.q() as usize;
    if family.iter().any(|s| s.ambient() != n || s.field() != field) {
        return Err(Error::ShapeMismatch("family must live in the polynomial's space".into()));
    }
    if p.d == 0 || q < p.d {
        return Ok(VanishingVerdict::violation("degree", format!("need 1 <= d <= |F|, got d = {}", p.d), None));
    }
    if let Some(s) = family.iter().find(|s| s.dim() == 0 || s.dim() >= n) {
        return Ok(VanishingVerdict::violation("members", format!("member of dimension {} is not a nonzero proper subspace", s.dim()), None));
    }
    for j in 1..n.saturating_sub(1) {
        let have = family.iter().filter(|s| s.dim() == j).count();
        if have > q - 1 {
            return Ok(VanishingVerdict::violation("i", format!("{have} members of dimension {j}, at most {}", q - 1), None));
        }
    }
    let hyper = family.iter().filter(|s| s.dim() + 1 == n).count();
    if hyper + p.d > q {
        return Ok(VanishingVerdict::violation("ii", format!("{hyper} hyperplanes, at most {}", q - p.d), None));
    }
    let count = match checked_pow(q as u64, n) {
        Some(c) if c <= budget => c,
        c => return Ok(VanishingVerdict::Budget { required: c, budget }),
    };
    let all = VecSubspace::full(field, n);
    let off_union = par::first_hit(count, |i| {
        let x = all.element(i);
        (!family.iter().any(|s| s.contains(&x)) && !p.eval(&x).is_zero()).then_some(x)
    });
    if let Some((_, x)) = off_union {
        return Ok(VanishingVerdict::violation("iii", "p is nonzero outside the union".into(), Some(&x)));
    }
    Ok(match par::first_hit(count, |i| {
        let x = all.element(i);
        let v = p.eval(&x);
        (!v.is_zero()).then_some((x, v))
    }) {
        Some((_, (x, v))) => VanishingVerdict::Fails { point: codes(&x), value: v.code() },
        None => VanishingVerdict::Holds,
    })
}

/// Basis (as coefficient vectors against `monomials(n, d)`) of the
/// homogeneous degree-d polynomials vanishing at every point of F^n outside
/// the union of the family.
pub fn polys_vanishing_off(field: &FieldSpec, n: usize, d: usize, family: &[VecSubspace]) -> Vec<Vec<Fq>> {
    let monos = monomials(n, d);
    let rows: Vec<Vec<Fq>> = VecSubspace::full(field, n)
        .elements()
        .filter(|x| !family.iter().any(|s| s.contains(x)))
        .map(|x| {
            monos
                .iter()
                .map(|e| e.iter().zip(&x).fold(Fq::ONE, |m, (&k, &xi)| field.mul(m, field.pow(xi, u64::from(k)))))
                .collect()
        })
        .collect();
    nullspace_rows(field, &rows, monos.len())
}

/// Random family meeting the size hypotheses for degree d: at most |F| − 1
/// members of each dimension 1..n−2 and at most |F| − d hyperplanes.
pub fn random_vanishing_family<R: Rng + ?Sized>(f: &FieldSpec, n: usize, d: usize, rng: &mut R) -> Vec<VecSubspace> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    for j in 1..n {
        let cap = if j + 1 == n { q.saturating_sub(d) } else { q - 1 };
        let reps = rng.random_range(0..=cap);
        for _ in 0..reps {
            out.push(VecSubspace::random(f, n, j, rng));
        }
    }
    out
}
