//! Seeded instance generators and runners for the structural statements.
//! Each trial draws its instance from its own random stream, validates the
//! hypotheses, then checks the conclusion.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{alts, binom, full, hurdle_template, joint, line_nt_sl_nt, nt, sl};
use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::json::MatrixJson;
use crate::matrix::Matrix;
use crate::par;
use crate::spectra::{check_element, check_space, CheckConfig, SpecPredicate};
use crate::structure::adapted::{meet_dim, range_tensors};
use crate::structure::confinement::{
    confinement_first, confinement_second, confinement_third, kill_g_into_h, lastblock_audit, third_template,
};
use crate::structure::covering::{
    covering_check, covering_hypotheses, polys_vanishing_off, random_covering_family, random_vanishing_family,
    vanishing_check, CoverOutcome, HomPoly, VanishingVerdict,
};
use crate::structure::hurdle::{detect_hurdle, HurdleCertificate};
use crate::structure::rank_one::{diagonal_zero_witness, sl_rank_one_family, zero_diagonal};
use crate::structure::splitting::{splitting_check, SplittingMode};
use crate::structure::transitivity::{find_intransitivity_veil, orbit_dim, transitive_rank, VeilSearch};
use crate::structure::LemmaVerdict;
use crate::subspace::{unit_vector, MatSubspace, VecSubspace};

pub const LEMMAS: &[&str] = &[
    "trace-ortho-1",
    "trace-ortho-2",
    "transrank",
    "covering",
    "vanishing",
    "splitting",
    "hurdle-dim",
    "confinement-first",
    "confinement-second",
    "confinement-third",
    "lastblock",
    "sl-rank1-span",
    "diagonal-zero",
    "intransitive-bounds",
];

#[derive(Clone, Debug)]
pub struct LemmaConfig {
    pub field: FieldSpec,
    pub n: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    /// Limits for the element scans done while validating hypotheses.
    pub check: CheckConfig,
}

impl LemmaConfig {
    pub fn new(field: FieldSpec, trials: u64, seed: u64) -> Self {
        LemmaConfig { field, n: None, trials, seed, check: CheckConfig { budget: 1 << 18, samples: 20_000, seed } }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialFailure {
    pub trial: u64,
    #[serde(flatten)]
    pub verdict: LemmaVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub field: String,
    pub seed: u64,
    pub trials: u64,
    pub holds: u64,
    pub hypothesis_violations: u64,
    pub failures: u64,
    pub budget_exceeded: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<TrialFailure>,
    /// Matrices the statement asserts to exist, where it asserts any.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<MatrixJson>,
}

impl LemmaReport {
    /// No conclusion failed, nothing was cut short, and something was checked.
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.budget_exceeded == 0 && self.holds > 0
    }

    fn tally(lemma: &str, cfg: &LemmaConfig, verdicts: Vec<LemmaVerdict>) -> Self {
        let mut r = LemmaReport {
            lemma: lemma.to_string(),
            field: cfg.field.name(),
            seed: cfg.seed,
            trials: verdicts.len() as u64,
            holds: 0,
            hypothesis_violations: 0,
            failures: 0,
            budget_exceeded: 0,
            first_failure: None,
            witnesses: Vec::new(),
        };
        for (trial, v) in verdicts.into_iter().enumerate() {
            match &v {
                LemmaVerdict::Holds => r.holds += 1,
                LemmaVerdict::HypothesisViolation { .. } => r.hypothesis_violations += 1,
                LemmaVerdict::Budget { .. } => r.budget_exceeded += 1,
                LemmaVerdict::Fails { .. } => {
                    r.failures += 1;
                    r.first_failure.get_or_insert(TrialFailure { trial: trial as u64, verdict: v });
                }
            }
        }
        r
    }
}

fn equality(lhs: usize, rhs: usize, what: &str) -> LemmaVerdict {
    if lhs == rhs {
        LemmaVerdict::Holds
    } else {
        LemmaVerdict::Fails { reason: format!("{what}: {lhs} != {rhs}"), matrix: None, point: None }
    }
}

fn nonzero_vector(f: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<Fq> {
    loop {
        let v: Vec<Fq> = (0..n).map(|_| f.random(rng)).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// Add random members of `ambient` to `base` until `extra` more dimensions
/// are reached (or `ambient` is exhausted).
fn extend_within(base: &MatSubspace, ambient: &MatSubspace, extra: usize, rng: &mut ChaCha8Rng) -> MatSubspace {
    let target = (base.dim() + extra).min(ambient.dim());
    let mut s = base.clone();
    while s.dim() < target {
        s = s.with(&ambient.random_element(rng)).expect("same shape");
    }
    s
}

/// Add up to `extra` random matrices one at a time, keeping each only if the
/// space stays 2-spec (exhaustive check).
fn grow_two_spec(base: &MatSubspace, extra: usize, attempts: usize, rng: &mut ChaCha8Rng) -> MatSubspace {
    let two = SpecPredicate::spec(2);
    let cfg = CheckConfig { budget: u64::MAX, samples: 0, seed: 0 };
    let mut s = base.clone();
    let mut added = 0;
    for _ in 0..attempts {
        if added == extra {
            break;
        }
        let m = Matrix::random(s.field(), s.rows(), s.cols(), rng);
        let t = s.with(&m).expect("same shape");
        if t.dim() > s.dim() && check_space(&t, &two, &cfg, "grow").map(|v| v.holds()).unwrap_or(false) {
            s = t;
            added += 1;
        }
    }
    s
}

fn last_two(f: &FieldSpec, n: usize) -> HurdleCertificate {
    let p = VecSubspace::span(f, n, &[unit_vector(n, n - 2), unit_vector(n, n - 1)]).expect("length n");
    HurdleCertificate::new(p).expect("plane")
}

fn trace_ortho_1(f: &FieldSpec, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let u = rng.random_range(1..=3);
    let v = rng.random_range(1..=3);
    let s = MatSubspace::full(f, v, u).random_subspace(rng.random_range(0..=u * v), rng);
    let v0 = VecSubspace::random(f, v, rng.random_range(0..=v), rng);
    // Hom(U, V₀): matrices whose columns lie in V₀
    let into_v0: Vec<Matrix> =
        v0.basis().iter().flat_map(|b| (0..u).map(move |j| Matrix::tensor(f, &unit_vector(u, j), b))).collect();
    let hom = MatSubspace::span(f, v, u, &into_v0).expect("v x u");
    let left = s.intersect(&hom).expect("same shape").dim();
    let b0 = Matrix::from_fn(f, v, v0.dim(), |i, j| v0.basis()[j][i]);
    let restricted: Vec<Matrix> = s.trace_orthogonal().basis().iter().map(|w| w.mul(&b0).expect("shapes")).collect();
    let right = MatSubspace::span(f, u, v0.dim(), &restricted).expect("u x d").dim();
    equality(left + right, u * v0.dim(), "dim(S ∩ Hom(U,V0)) + dim(S⊥|V0) vs dim U · dim V0")
}

fn trace_ortho_2(f: &FieldSpec, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let u = rng.random_range(1..=3);
    let v = rng.random_range(1..=3);
    let s = MatSubspace::full(f, v, u).random_subspace(rng.random_range(0..=u * v), rng);
    let u0 = VecSubspace::random(f, u, rng.random_range(0..=u), rng);
    // operators U → V vanishing on U₀: rows in the annihilator of U₀
    let forms = u0.annihilator();
    let killing: Vec<Matrix> =
        forms.basis().iter().flat_map(|psi| (0..v).map(move |i| Matrix::tensor(f, psi, &unit_vector(v, i)))).collect();
    let s_u0 = s.intersect(&MatSubspace::span(f, v, u, &killing).expect("v x u")).expect("same shape").dim();
    let pi = Matrix::from_fn(f, forms.dim(), u, |i, j| forms.basis()[i][j]);
    let projected: Vec<Matrix> = s.trace_orthogonal().basis().iter().map(|w| pi.mul(w).expect("shapes")).collect();
    let right = MatSubspace::span(f, forms.dim(), v, &projected).expect("shape").dim();
    equality(s_u0 + right, v * (u - u0.dim()), "dim S_U0 + dim πS⊥ vs dim V · codim U0")
}

fn transrank(f: &FieldSpec, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let n = rng.random_range(2..=4);
    let s = full(f, n).random_subspace(rng.random_range(0..=n * n), rng);
    let x = nonzero_vector(f, n, rng);
    equality(orbit_dim(&s.trace_orthogonal(), &x), n - meet_dim(&s, &range_tensors(f, &x)), "dim(S⊥x) vs n − dim(S ∩ V*⊗x)")
}

fn covering(f: &FieldSpec, n: Option<usize>, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let n = n.unwrap_or_else(|| rng.random_range(2..=4));
    let r = f.q() as usize - 1;
    let fam = random_covering_family(f, n, r, rng);
    if let Err(e) = covering_hypotheses(&fam, r) {
        return LemmaVerdict::violation(e);
    }
    match covering_check(&fam, 1 << 24) {
        Ok(CoverOutcome::Uncovered { .. }) => LemmaVerdict::Holds,
        Ok(CoverOutcome::Covers) => LemmaVerdict::Fails { reason: "family covers the space".into(), matrix: None, point: None },
        Ok(CoverOutcome::Budget { required, budget }) => LemmaVerdict::Budget { required, budget },
        Err(e) => LemmaVerdict::violation(e.to_string()),
    }
}

fn vanishing(f: &FieldSpec, n: Option<usize>, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let n = n.unwrap_or_else(|| rng.random_range(2..=3));
    let d = rng.random_range(1..=3usize.min(f.q() as usize));
    let fam = random_vanishing_family(f, n, d, rng);
    let basis = polys_vanishing_off(f, n, d, &fam);
    // every vanishing-off polynomial, and a random combination of them
    let mut candidates: Vec<HomPoly> = basis.iter().map(|c| HomPoly::from_coeffs(f, n, d, c)).collect();
    let mix = basis.iter().fold(vec![Fq::ZERO; basis.first().map_or(0, Vec::len)], |mut acc, c| {
        let k = f.random(rng);
        for (a, &x) in acc.iter_mut().zip(c) {
            *a += f.mul(k, x);
        }
        acc
    });
    candidates.push(if mix.is_empty() { HomPoly::zero(f, n, d) } else { HomPoly::from_coeffs(f, n, d, &mix) });
    for p in &candidates {
        match vanishing_check(p, &fam, 1 << 24) {
            Ok(VanishingVerdict::Holds) => {}
            Ok(VanishingVerdict::Fails { point, value }) => {
                return LemmaVerdict::Fails { reason: format!("p takes value {value}"), matrix: None, point: Some(point) }
            }
            Ok(VanishingVerdict::HypothesisViolation { clause, reason, .. }) => {
                return LemmaVerdict::violation(format!("clause {clause}: {reason}"))
            }
            Ok(VanishingVerdict::Budget { required, budget }) => return LemmaVerdict::Budget { required, budget },
            Err(e) => return LemmaVerdict::violation(e.to_string()),
        }
    }
    LemmaVerdict::Holds
}

/// A hurdle inside sl₂ ∨ sl₂ (2-spec) or NT₂ ∨ sl₂ (1*-spec) containing the
/// template, conjugated by a random invertible matrix.
fn splitting(f: &FieldSpec, trial: u64, cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let (ambient, mode) = if trial % 2 == 0 {
        (joint(&sl(f, 2), &sl(f, 2)).expect("square"), SplittingMode::Two)
    } else {
        (joint(&nt(f, 2), &sl(f, 2)).expect("square"), SplittingMode::OneStar)
    };
    let base = hurdle_template(f, 4).expect("n = 4");
    let s = extend_within(&base, &ambient, rng.random_range(0..=2), rng);
    let q = Matrix::random_invertible(f, 4, rng);
    let s = s.conjugate(&q).expect("invertible");
    let cert = last_two(f, 4).conjugated(&q).expect("invertible");
    match splitting_check(&s, &cert, mode, cfg) {
        Ok(r) => r.verdict,
        Err(e) => LemmaVerdict::violation(e.to_string()),
    }
}

/// Bound on the dimension of a hurdle by predicate and size.
pub fn hurdle_dim_bound(n: usize, mode: SplittingMode) -> usize {
    match mode {
        SplittingMode::OneStar => binom(n, 2) + 2,
        SplittingMode::Two if n == 4 => binom(n, 2) + 4,
        SplittingMode::Two => binom(n, 2) + 3,
    }
}

fn hurdle_dim(f: &FieldSpec, trial: u64, cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let n = [3, 4, 5][(trial / 2 % 3) as usize];
    let mode = if trial % 2 == 0 { SplittingMode::OneStar } else { SplittingMode::Two };
    let ambient = match mode {
        SplittingMode::OneStar => joint(&nt(f, n - 2), &sl(f, 2)).expect("square"),
        SplittingMode::Two if n == 4 => joint(&sl(f, 2), &sl(f, 2)).expect("square"),
        SplittingMode::Two => line_nt_sl_nt(f, n, n - 2).expect("k = n - 2"),
    };
    let base = hurdle_template(f, n).expect("n >= 2");
    let extra = if n == 5 { rng.random_range(0..=1) } else { rng.random_range(0..=3) };
    let s = extend_within(&base, &ambient, extra, rng).conjugate(&Matrix::random_invertible(f, n, rng)).expect("invertible");
    match detect_hurdle(&s, 1 << 24) {
        Ok(h) if h.certificate().is_some() => {}
        _ => return LemmaVerdict::violation("not a hurdle"),
    }
    match check_space(&s, &mode.predicate(), cfg, "hurdle") {
        Ok(v) if v.holds() => {}
        _ => return LemmaVerdict::violation(format!("not {}", mode.predicate())),
    }
    let bound = hurdle_dim_bound(n, mode);
    if s.dim() <= bound {
        LemmaVerdict::Holds
    } else {
        LemmaVerdict::Fails { reason: format!("dimension {} exceeds {bound}", s.dim()), matrix: None, point: None }
    }
}

/// {first column arbitrary} + (0 ⊕ T) with T 1-spec, conjugated.
fn confinement_first_trial(f: &FieldSpec, n: Option<usize>, cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let n = n.unwrap_or_else(|| rng.random_range(3..=4));
    let m = n - 1;
    let one_spec = if m == 2 && rng.random_bool(0.5) { sl(f, 2) } else { nt(f, m).with(&Matrix::identity(f, m)).expect("m x m") };
    let t = one_spec.random_subspace(rng.random_range(0..=one_spec.dim()), rng);
    let mut gens: Vec<Matrix> = (0..n).map(|i| Matrix::unit(f, n, n, i, 0)).collect();
    for b in t.basis() {
        let mut g = Matrix::zeros(f, n, n);
        g.set_block(1, 1, &b);
        gens.push(g);
    }
    let s = MatSubspace::span(f, n, n, &gens).expect("n x n");
    let q = Matrix::random_invertible(f, n, rng);
    let phi = q.inverse().expect("invertible").vec_mul(&unit_vector(n, 0)).expect("length n");
    confinement_first(&s.conjugate(&q).expect("invertible"), &phi, cfg).unwrap_or_else(|e| LemmaVerdict::violation(e.to_string()))
}

fn confinement_second_trial(f: &FieldSpec, n: Option<usize>, cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let n = n.unwrap_or_else(|| rng.random_range(3..=4));
    let g = VecSubspace::random(f, n, n - 2, rng);
    let h = loop {
        let h = VecSubspace::random(f, n, n - 1, rng);
        if !g.is_subspace_of(&h) {
            break h;
        }
    };
    let s = grow_two_spec(&kill_g_into_h(f, &g, &h), rng.random_range(0..=2), 6, rng);
    confinement_second(&s, &g, &h, cfg).map(|r| r.verdict).unwrap_or_else(|e| LemmaVerdict::violation(e.to_string()))
}

fn confinement_third_trial(f: &FieldSpec, n: Option<usize>, cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let n = n.unwrap_or(5);
    let base = match third_template(f, n) {
        Ok(t) => t,
        Err(e) => return LemmaVerdict::violation(e.to_string()),
    };
    let m = grow_two_spec(&base, rng.random_range(0..=1), 2, rng);
    confinement_third(&m, cfg).unwrap_or_else(|e| LemmaVerdict::violation(e.to_string()))
}

/// Subspaces of the alternating matrices are intransitive; when no nonzero
/// veil exists and |F| ≥ n the dimension bounds must hold.
fn intransitive_bounds(f: &FieldSpec, n: Option<usize>, rng: &mut ChaCha8Rng) -> LemmaVerdict {
    let n = n.unwrap_or_else(|| rng.random_range(3..=4));
    if (f.q() as usize) < n {
        return LemmaVerdict::violation("|F| < n");
    }
    let a = alts(f, n);
    let t = a.random_subspace(rng.random_range(1..=a.dim()), rng);
    match find_intransitivity_veil(&t, 1 << 24) {
        Ok(VeilSearch::PrimitivelyIntransitive) => {}
        Ok(VeilSearch::Budget { required, budget }) => return LemmaVerdict::Budget { required, budget },
        Ok(_) => return LemmaVerdict::violation("not primitively intransitive"),
        Err(e) => return LemmaVerdict::violation(e.to_string()),
    }
    let trk = transitive_rank(&t).expect("square").trk;
    let bound = if trk + 1 < n { binom(n - 1, 2) } else { binom(n, 2) };
    if t.dim() <= bound {
        LemmaVerdict::Holds
    } else {
        LemmaVerdict::Fails { reason: format!("dimension {} exceeds {bound} at trk {trk}", t.dim()), matrix: None, point: None }
    }
}

fn per_trial(cfg: &LemmaConfig, f: impl Fn(u64, &mut ChaCha8Rng) -> LemmaVerdict + Sync) -> Vec<LemmaVerdict> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = par::chunk_rng(cfg.seed, t);
            f(t, &mut rng)
        })
        .collect()
}

pub fn run_lemma(name: &str, cfg: &LemmaConfig) -> Result<LemmaReport> {
    let f = &cfg.field;
    let n = cfg.n;
    let check = &cfg.check;
    let needs_large = |min: u32| {
        if f.q() < min {
            Err(Error::Precondition(format!("{name} needs |F| >= {min}")))
        } else {
            Ok(())
        }
    };
    let verdicts = match name {
        "trace-ortho-1" => per_trial(cfg, |_, r| trace_ortho_1(f, r)),
        "trace-ortho-2" => per_trial(cfg, |_, r| trace_ortho_2(f, r)),
        "transrank" => per_trial(cfg, |_, r| transrank(f, r)),
        "covering" => per_trial(cfg, |_, r| covering(f, n, r)),
        "vanishing" => per_trial(cfg, |_, r| vanishing(f, n, r)),
        "splitting" => {
            needs_large(4)?;
            per_trial(cfg, |t, r| splitting(f, t, check, r))
        }
        "hurdle-dim" => {
            needs_large(4)?;
            per_trial(cfg, |t, r| hurdle_dim(f, t, check, r))
        }
        "confinement-first" => per_trial(cfg, |_, r| confinement_first_trial(f, n, check, r)),
        "confinement-second" => per_trial(cfg, |_, r| confinement_second_trial(f, n, check, r)),
        "confinement-third" => per_trial(cfg, |_, r| confinement_third_trial(f, n, check, r)),
        "intransitive-bounds" => {
            needs_large(4)?;
            per_trial(cfg, |_, r| intransitive_bounds(f, n, r))
        }
        "lastblock" => {
            let a = lastblock_audit(f)?;
            let mut v = vec![LemmaVerdict::Holds; a.holds as usize];
            v.extend((0..a.candidates - a.meeting_hypotheses).map(|_| LemmaVerdict::violation("hypotheses fail")));
            if let Some(m) = &a.first_failure {
                v.push(LemmaVerdict::fails_at_matrix("last row and column nonzero", m));
            }
            v
        }
        "sl-rank1-span" => {
            let sizes: Vec<usize> = n.map_or((2..=6).collect(), |n| vec![n]);
            sizes
                .into_iter()
                .map(|n| {
                    let fam = sl_rank_one_family(f, n);
                    let ok = fam.iter().all(|m| m.rank() == 1 && m.trace().map(|t| t.is_zero()).unwrap_or(false))
                        && MatSubspace::span(f, n, n, &fam).map(|s| s == sl(f, n)).unwrap_or(false);
                    if ok {
                        LemmaVerdict::Holds
                    } else {
                        LemmaVerdict::Fails { reason: format!("family fails at n = {n}"), matrix: None, point: None }
                    }
                })
                .collect()
        }
        "diagonal-zero" => {
            needs_large(4)?;
            let sizes: Vec<usize> = n.map_or((3..=5).collect(), |n| vec![n]);
            let mut witnesses = Vec::new();
            let verdicts = sizes
                .into_iter()
                .map(|n| match diagonal_zero_witness(f, n) {
                    Ok(w) if zero_diagonal(f, n).contains(&w) && !check_element(&w, &SpecPredicate::spec(2)).unwrap_or(true) => {
                        witnesses.push(MatrixJson::from(&w));
                        LemmaVerdict::Holds
                    }
                    Ok(w) => LemmaVerdict::fails_at_matrix("witness is not a valid counterexample", &w),
                    Err(e) => LemmaVerdict::violation(e.to_string()),
                })
                .collect();
            let mut r = LemmaReport::tally(name, cfg, verdicts);
            r.witnesses = witnesses;
            return Ok(r);
        }
        other => return Err(Error::Parse(format!("unknown lemma {other:?}; expected one of {}", LEMMAS.join(", ")))),
    };
    Ok(LemmaReport::tally(name, cfg, verdicts))
}
