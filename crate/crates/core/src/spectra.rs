//! Bounded-spectrum predicates on matrices and on whole matrix spaces.
//!
//! Counts come from the characteristic polynomial: it has the same root set
//! as the minimal polynomial, and it is cheaper to compute.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::json::MatrixJson;
use crate::matrix::{hessenberg_char_coeffs, hessenberg_in_place, Matrix};
use crate::par;
use crate::subspace::MatSubspace;
use crate::upoly::Poly;

/// Default number of objects an exhaustive pass may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumProfile {
    pub char_poly: Poly,
    pub distinct_in_field: usize,
    pub distinct_nonzero_in_field: usize,
    pub distinct_in_closure: usize,
    pub distinct_nonzero_in_closure: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootDomain {
    InField,
    InClosure,
}

/// One of the four properties "at most k distinct eigenvalues", counted in F
/// or in its closure, with or without the eigenvalue 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpecPredicate {
    pub domain: RootDomain,
    pub exclude_zero: bool,
    pub k: usize,
}

impl SpecPredicate {
    pub fn new(domain: RootDomain, exclude_zero: bool, k: usize) -> Self {
        SpecPredicate { domain, exclude_zero, k }
    }

    pub fn spec(k: usize) -> Self {
        Self::new(RootDomain::InField, false, k)
    }

    pub fn bar(k: usize) -> Self {
        Self::new(RootDomain::InClosure, false, k)
    }

    pub fn star(k: usize) -> Self {
        Self::new(RootDomain::InField, true, k)
    }

    pub fn bar_star(k: usize) -> Self {
        Self::new(RootDomain::InClosure, true, k)
    }

    pub fn count(&self, p: &SpectrumProfile) -> usize {
        match (self.domain, self.exclude_zero) {
            (RootDomain::InField, false) => p.distinct_in_field,
            (RootDomain::InField, true) => p.distinct_nonzero_in_field,
            (RootDomain::InClosure, false) => p.distinct_in_closure,
            (RootDomain::InClosure, true) => p.distinct_nonzero_in_closure,
        }
    }

    pub fn holds_for(&self, p: &SpectrumProfile) -> bool {
        self.count(p) <= self.k
    }

    /// Count only what this predicate needs from a characteristic polynomial.
    fn count_poly(&self, chi: &Poly) -> usize {
        let c = match self.domain {
            RootDomain::InField => chi.count_roots_in_field(),
            RootDomain::InClosure => chi.count_roots_in_closure(),
        }
        .expect("characteristic polynomial is monic");
        c - usize::from(self.exclude_zero && chi.coeff(0).is_zero())
    }

    /// Parse a form such as `2bar*-spec`; a missing bound (`bar*-spec`) takes
    /// `default_k`.
    pub fn parse_with_default(text: &str, default_k: Option<usize>) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognized predicate `{text}`"));
        let body = text.trim().strip_suffix("-spec").ok_or_else(bad)?;
        let digits: String = body.chars().take_while(char::is_ascii_digit).collect();
        let rest = &body[digits.len()..];
        let k = if digits.is_empty() { default_k.ok_or_else(bad)? } else { digits.parse().map_err(|_| bad())? };
        let (domain, exclude_zero) = match rest {
            "" => (RootDomain::InField, false),
            "*" => (RootDomain::InField, true),
            "bar" => (RootDomain::InClosure, false),
            "bar*" => (RootDomain::InClosure, true),
            _ => return Err(bad()),
        };
        Ok(Self::new(domain, exclude_zero, k))
    }
}

impl fmt::Display for SpecPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.domain == RootDomain::InClosure { "bar" } else { "" };
        let star = if self.exclude_zero { "*" } else { "" };
        write!(f, "{}{bar}{star}-spec", self.k)
    }
}

impl FromStr for SpecPredicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_default(s, None)
    }
}

impl Serialize for SpecPredicate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Characteristic polynomial of an n×n row-major buffer.
pub(crate) fn char_poly_flat(field: &FieldSpec, n: usize, entries: &[Fq]) -> Poly {
    let mut h = entries.to_vec();
    hessenberg_in_place(field, &mut h, n);
    Poly::new(field, hessenberg_char_coeffs(field, &h, n))
}

pub fn profile(m: &Matrix) -> Result<SpectrumProfile> {
    let chi = m.char_poly()?;
    Ok(profile_of_poly(chi))
}

pub fn profile_of_poly(chi: Poly) -> SpectrumProfile {
    let zero_root = usize::from(chi.coeff(0).is_zero());
    let in_field = chi.count_roots_in_field().expect("nonzero polynomial");
    let in_closure = chi.count_roots_in_closure().expect("nonzero polynomial");
    SpectrumProfile {
        distinct_in_field: in_field,
        distinct_nonzero_in_field: in_field - zero_root,
        distinct_in_closure: in_closure,
        distinct_nonzero_in_closure: in_closure - zero_root,
        char_poly: chi,
    }
}

pub fn check_element(m: &Matrix, pred: &SpecPredicate) -> Result<bool> {
    let chi = m.char_poly()?;
    Ok(pred.count_poly(&chi) <= pred.k)
}

/// True iff every odd-degree coefficient vanishes.
pub fn is_even_poly(f: &Poly) -> bool {
    f.is_even()
}

/// True iff the minimal polynomial is t^a (t + 1)^b for some a, b.
pub fn min_poly_is_zero_one_form(m: &Matrix) -> Result<bool> {
    let f = m.field();
    let mut mp = m.min_poly()?;
    for factor in [Poly::monomial(f, 1), Poly::linear(f, Fq::ONE)] {
        loop {
            let (q, r) = mp.divrem(&factor)?;
            if !r.is_zero() {
                break;
            }
            mp = q;
        }
    }
    Ok(mp.degree() == Some(0))
}

/// Limits shared by every exhaustive-or-sampled check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CheckConfig {
    pub budget: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { budget: DEFAULT_BUDGET, samples: 1_000_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive { count: u64 },
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Position in the enumeration or sample stream.
    pub index: u64,
    pub matrix: MatrixJson,
    pub char_poly: String,
    pub distinct_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails { witness: Witness },
    Budget { required: Option<u64>, budget: u64 },
}

impl Outcome {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceVerdict {
    pub space: String,
    pub predicate: SpecPredicate,
    pub dim: usize,
    pub mode: CheckMode,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl SpaceVerdict {
    pub fn holds(&self) -> bool {
        self.outcome.holds()
    }
}

fn witness(s: &MatSubspace, pred: &SpecPredicate, index: u64, m: Matrix) -> Witness {
    let chi = m.char_poly().expect("square");
    let distinct_count = pred.count_poly(&chi);
    debug_assert!(distinct_count > pred.k && s.contains(&m));
    Witness { index, matrix: MatrixJson::from(&m), char_poly: chi.to_string(), distinct_count }
}

/// Check a predicate on every element of a square matrix space: exhaustively
/// when the space fits the budget, otherwise on seeded uniform samples.
pub fn check_space(s: &MatSubspace, pred: &SpecPredicate, cfg: &CheckConfig, id: &str) -> Result<SpaceVerdict> {
    if !s.is_square() {
        return Err(Error::NotSquare { rows: s.rows(), cols: s.cols() });
    }
    let n = s.rows();
    let field = s.field();
    let space = s.space();
    let fails = |flat: &[Fq]| pred.count_poly(&char_poly_flat(field, n, flat)) > pred.k;
    let count = s.element_count();
    let (mode, hit) = match count {
        Some(c) if c <= cfg.budget => {
            let hit = par::first_hit(c, |i| {
                let v = space.element(i);
                fails(&v).then_some(v)
            });
            (CheckMode::Exhaustive { count: c }, hit)
        }
        _ if cfg.samples == 0 => {
            return Ok(SpaceVerdict {
                space: id.to_string(),
                predicate: *pred,
                dim: s.dim(),
                mode: CheckMode::Sampled { samples: 0, seed: cfg.seed },
                outcome: Outcome::Budget { required: count, budget: cfg.budget },
            });
        }
        _ => {
            let hit = par::first_sampled_hit(cfg.samples, cfg.seed, |rng| {
                let v = space.random_element(rng);
                fails(&v).then_some(v)
            });
            (CheckMode::Sampled { samples: cfg.samples, seed: cfg.seed }, hit)
        }
    };
    let outcome = match hit {
        None => Outcome::Holds,
        Some((index, v)) => Outcome::Fails { witness: witness(s, pred, index, Matrix::from_flat(field, n, n, &v)) },
    };
    Ok(SpaceVerdict { space: id.to_string(), predicate: *pred, dim: s.dim(), mode, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::VecSubspace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const W: Fq = Fq(2);

    /// Trace-zero 2×2 matrices; in characteristic 2 this contains I.
    fn sl2(f: &FieldSpec) -> MatSubspace {
        let gens = [Matrix::unit(f, 2, 2, 0, 1), Matrix::unit(f, 2, 2, 1, 0), Matrix::identity(f, 2)];
        MatSubspace::span(f, 2, 2, &gens).unwrap()
    }

    fn nt(f: &FieldSpec, n: usize) -> MatSubspace {
        let gens: Vec<Matrix> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| Matrix::unit(f, n, n, i, j))
            .collect();
        MatSubspace::span(f, n, n, &gens).unwrap()
    }

    #[test]
    fn profile_examples() {
        let f = FieldSpec::gf4();
        let z = profile(&Matrix::zeros(&f, 3, 3)).unwrap();
        assert_eq!((z.distinct_in_field, z.distinct_nonzero_in_field), (1, 0));
        let i = profile(&Matrix::identity(&f, 3)).unwrap();
        assert_eq!((i.distinct_in_field, i.distinct_nonzero_in_field), (1, 1));
        let m = Matrix::from_rows(&f, &[vec![0, 2], vec![1, 0]]).unwrap();
        let p = profile(&m).unwrap();
        // t² + ω = (t + ω + 1)²
        let root = Poly::linear(&f, Fq(3));
        assert_eq!(p.char_poly, root.mul(&root).unwrap());
        assert_eq!(p.distinct_in_closure, 1);
        assert!(p.distinct_in_field <= p.distinct_in_closure);
    }

    #[test]
    fn predicate_text_forms() {
        for s in ["1-spec", "1bar-spec", "2*-spec", "1bar*-spec"] {
            assert_eq!(s.parse::<SpecPredicate>().unwrap().to_string(), s);
        }
        assert_eq!(SpecPredicate::parse_with_default("bar*-spec", Some(3)).unwrap(), SpecPredicate::bar_star(3));
        assert!("bar-spec".parse::<SpecPredicate>().is_err());
        assert!("2-spek".parse::<SpecPredicate>().is_err());
        assert!("2x-spec".parse::<SpecPredicate>().is_err());
    }

    #[test]
    fn sl2_is_one_spec() {
        let f = FieldSpec::gf4();
        let s = sl2(&f);
        assert_eq!(s.dim(), 3);
        let cfg = CheckConfig::default();
        for pred in [SpecPredicate::spec(1), SpecPredicate::bar(1)] {
            let v = check_space(&s, &pred, &cfg, "sl2").unwrap();
            assert!(v.holds());
            assert_eq!(v.mode, CheckMode::Exhaustive { count: 64 });
        }
    }

    #[test]
    fn nilpotent_space_has_no_nonzero_eigenvalue() {
        let f = FieldSpec::gf4();
        let v = check_space(&nt(&f, 3), &SpecPredicate::bar_star(0), &CheckConfig::default(), "nt3").unwrap();
        assert!(v.holds());
        assert_eq!(v.mode, CheckMode::Exhaustive { count: 64 });
    }

    #[test]
    fn full_space_fails_with_reverifying_witness() {
        let f = FieldSpec::gf4();
        let s = MatSubspace::full(&f, 2, 2);
        let v = check_space(&s, &SpecPredicate::spec(1), &CheckConfig::default(), "mat2").unwrap();
        let Outcome::Fails { witness } = &v.outcome else { panic!("expected failure") };
        let m = witness.matrix.to_matrix(&f).unwrap();
        assert!(s.contains(&m));
        assert!(!check_element(&m, &SpecPredicate::spec(1)).unwrap());
        // element 1 is diag(0, 1): the last basis vector E_22 with coefficient 1
        assert_eq!(s.element(witness.index), m);
        assert_eq!(witness.index, 1);
        assert_eq!(m, Matrix::unit(&f, 2, 2, 1, 1));
    }

    #[test]
    fn sampled_and_budget_modes() {
        let f = FieldSpec::gf4();
        let s = MatSubspace::full(&f, 3, 3);
        let tight = CheckConfig { budget: 10, samples: 1000, seed: 4 };
        let v = check_space(&s, &SpecPredicate::spec(1), &tight, "mat3").unwrap();
        assert_eq!(v.mode, CheckMode::Sampled { samples: 1000, seed: 4 });
        let Outcome::Fails { witness } = &v.outcome else { panic!("expected failure") };
        assert!(!check_element(&witness.matrix.to_matrix(&f).unwrap(), &SpecPredicate::spec(1)).unwrap());
        let none = CheckConfig { budget: 10, samples: 0, seed: 4 };
        let v = check_space(&s, &SpecPredicate::spec(1), &none, "mat3").unwrap();
        assert!(matches!(v.outcome, Outcome::Budget { .. }));
        // a holding space stays holding in sampled mode
        let v = check_space(&nt(&f, 4), &SpecPredicate::bar_star(0), &tight, "nt4").unwrap();
        assert!(v.holds());
    }

    #[test]
    fn closure_bound_at_degree_always_holds_and_is_monotone() {
        let f = FieldSpec::gf8();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for i in 0..2000 {
            let n = 1 + i % 5;
            let m = Matrix::random(&f, n, n, &mut rng);
            assert!(check_element(&m, &SpecPredicate::bar(n)).unwrap());
            let p = profile(&m).unwrap();
            for k in 0..n {
                for pred in [SpecPredicate::spec(k), SpecPredicate::bar(k), SpecPredicate::star(k), SpecPredicate::bar_star(k)] {
                    if pred.holds_for(&p) {
                        let looser = SpecPredicate { k: k + 1, ..pred };
                        assert!(looser.holds_for(&p));
                    }
                    assert_eq!(pred.holds_for(&p), check_element(&m, &pred).unwrap());
                }
            }
        }
    }

    #[test]
    fn binary_zero_one_form_matches_closure_counts() {
        let f = FieldSpec::gf2();
        let full = VecSubspace::full(&f, 9);
        for v in full.elements() {
            let m = Matrix::from_flat(&f, 3, 3, &v);
            assert_eq!(
                min_poly_is_zero_one_form(&m).unwrap(),
                check_element(&m, &SpecPredicate::bar_star(1)).unwrap(),
                "{m}"
            );
        }
    }

    #[test]
    fn char_poly_and_min_poly_root_sets_agree() {
        for f in [FieldSpec::gf2(), FieldSpec::gf4()] {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for i in 0..500 {
                let n = 1 + i % 3;
                let m = Matrix::random(&f, n, n, &mut rng);
                let cp = m.char_poly().unwrap().radical().unwrap();
                let mp = m.min_poly().unwrap().radical().unwrap();
                assert_eq!(cp, mp);
            }
        }
    }

    #[test]
    fn even_poly_examples() {
        let f = FieldSpec::gf4();
        assert!(is_even_poly(&Poly::new(&f, vec![Fq::ONE, Fq::ZERO, W, Fq::ZERO, Fq::ONE])));
        assert!(!is_even_poly(&Poly::monomial(&f, 3)));
    }
}
