//! The acceptance suite: construction dimensions, spec verification,
//! polynomial parity, binary-field checks, lemma harnesses, the choice audit,
//! structural procedures, the alternator round trip, the confinement
//! instance, and cross-worker determinism.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{alts, b2m, case_iv_n6, catalogue, full, hurdle_template, joint, k_matrix, line_nt_sl_nt, mats_p, nt, seeded, sl, sl2_join_nt, syms, ut};
use crate::error::Result;
use crate::gf::FieldSpec;
use crate::harness::{run_lemma, LemmaConfig};
use crate::matrix::Matrix;
use crate::par;
use crate::report::deterministic_json;
use crate::spectra::{check_space, is_even_poly, min_poly_is_zero_one_form, check_element, CheckConfig, CheckMode, SpaceVerdict, SpecPredicate};
use crate::structure::adapted::adapted_scan;
use crate::structure::alternator::{annihilates, find_alternator, is_right_nondegenerate};
use crate::structure::choice::choice_audit;
use crate::structure::confinement::{confinement_third, lastblock_audit, third_hyperplanes, third_template};
use crate::structure::hurdle::{detect_hurdle, HurdleSearch};
use crate::structure::transitivity::transitive_rank;
use crate::subspace::MatSubspace;

/// Harness trials per lemma required by the suite.
pub const MIN_TRIALS: u64 = 200;
/// Samples required wherever a space is checked by sampling.
pub const MIN_SAMPLES: u64 = 1_000_000;
/// Samples for the parity check on the larger space.
pub const PARITY_SAMPLES: u64 = 100_000;
pub const DETERMINISM_WORKERS: [usize; 3] = [1, 4, 8];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub budget: u64,
    pub samples: u64,
    pub trials: u64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig { seed: 0, budget: crate::spectra::DEFAULT_BUDGET, samples: MIN_SAMPLES, trials: MIN_TRIALS }
    }
}

impl AcceptanceConfig {
    fn check(&self) -> CheckConfig {
        CheckConfig { budget: self.budget, samples: self.samples, seed: self.seed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl Criterion {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcceptanceReport {
    pub config: AcceptanceConfig,
    pub field: String,
    pub criteria: Vec<Criterion>,
    pub passed: u32,
    pub failed: u32,
}

impl AcceptanceReport {
    fn push(&mut self, c: Criterion) {
        if c.passed {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.criteria.push(c);
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn criterion(&self, id: u32) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.0.push(Check { name: name.into(), passed, detail });
    }

    fn space(&mut self, name: impl Into<String>, v: Result<SpaceVerdict>, require: impl Fn(&CheckMode) -> bool) {
        match v {
            Ok(v) => {
                let ok = v.holds() && require(&v.mode);
                self.add(name, ok, serde_json::to_value(&v).expect("serializes"));
            }
            Err(e) => self.add(name, false, json!({ "error": e.to_string() })),
        }
    }
}

fn timed(id: u32, title: &str, body: impl FnOnce(&mut Checks)) -> Criterion {
    let start = Instant::now();
    let mut checks = Checks(Vec::new());
    body(&mut checks);
    let passed = !checks.0.is_empty() && checks.0.iter().all(|c| c.passed);
    Criterion { id, title: title.into(), passed, checks: checks.0, elapsed_ms: start.elapsed().as_millis() as u64 }
}

fn exhaustive(m: &CheckMode) -> bool {
    matches!(m, CheckMode::Exhaustive { .. })
}

fn dimensions(f: &FieldSpec) -> Criterion {
    timed(1, "construction dimensions", |c| match catalogue(f) {
        Ok(entries) => {
            for e in entries {
                let chk = e.check();
                c.add(e.name.clone(), chk.dim == chk.expected_dim, json!({ "dim": chk.dim, "expected": chk.expected_dim }));
            }
        }
        Err(e) => c.add("catalogue", false, json!({ "error": e.to_string() })),
    })
}

fn exhaustive_specs(f: &FieldSpec, cfg: &CheckConfig) -> Criterion {
    timed(2, "exhaustive spec verification", |c| {
        c.space("sl(2) 1-spec", check_space(&sl(f, 2), &SpecPredicate::spec(1), cfg, "sl(2)"), exhaustive);
        c.space("sl(2) 1bar-spec", check_space(&sl(f, 2), &SpecPredicate::bar(1), cfg, "sl(2)"), exhaustive);
        for n in 1..=4 {
            c.space(format!("nt({n}) 0bar*-spec"), check_space(&nt(f, n), &SpecPredicate::bar_star(0), cfg, "nt"), exhaustive);
        }
        match sl2_join_nt(f, 4) {
            Ok(s) => c.space("joint(sl(2),nt(2)) 1bar*-spec", check_space(&s, &SpecPredicate::bar_star(1), cfg, "sl2_join_nt(4)"), exhaustive),
            Err(e) => c.add("joint(sl(2),nt(2))", false, json!({ "error": e.to_string() })),
        }
        match joint(&sl(f, 2), &sl(f, 2)) {
            Ok(s) => c.space("joint(sl(2),sl(2)) 2bar-spec", check_space(&s, &SpecPredicate::bar(2), cfg, "joint(sl(2),sl(2))"), exhaustive),
            Err(e) => c.add("joint(sl(2),sl(2))", false, json!({ "error": e.to_string() })),
        }
        match b2m(f, 2) {
            Ok(s) => c.space("b2m(2) 2bar-spec", check_space(&s, &SpecPredicate::bar(2), cfg, "b2m(2)"), exhaustive),
            Err(e) => c.add("b2m(2)", false, json!({ "error": e.to_string() })),
        }
    })
}

fn sampled_specs(f: &FieldSpec, cfg: &CheckConfig) -> Criterion {
    // these spaces are checked by sampling even when an exhaustive pass would fit
    let cfg = CheckConfig { budget: 0, ..*cfg };
    let enough = |m: &CheckMode| matches!(m, CheckMode::Sampled { samples, .. } if *samples >= MIN_SAMPLES);
    timed(3, "sampled spec verification", |c| {
        let cases: [(&str, Result<MatSubspace>, SpecPredicate); 3] = [
            ("joint(sl(2),nt(3)) 1bar*-spec", sl2_join_nt(f, 5), SpecPredicate::bar_star(1)),
            ("line_plus(joint(nt(1),sl(2),nt(2))) 2bar-spec", line_nt_sl_nt(f, 5, 1), SpecPredicate::bar(2)),
            ("case_iv_n6 2bar-spec", Ok(case_iv_n6(f)), SpecPredicate::bar(2)),
        ];
        for (name, s, pred) in cases {
            match s {
                Ok(s) => c.space(name, check_space(&s, &pred, &cfg, name), enough),
                Err(e) => c.add(name, false, json!({ "error": e.to_string() })),
            }
        }
    })
}

/// Count elements of `s` with a characteristic polynomial that has an odd
/// term: all of them when `samples` is None.
fn odd_char_polys(s: &MatSubspace, samples: Option<(u64, u64)>) -> (u64, Value) {
    let n = s.rows();
    let odd = |m: Matrix| !is_even_poly(&m.char_poly().expect("square"));
    match (samples, s.element_count()) {
        (None, Some(count)) => (par::count_matching(count, |i| odd(s.element(i))), json!({ "mode": "exhaustive", "count": count, "n": n })),
        (Some((samples, seed)), _) => {
            let hits = par::map_chunks(samples, |chunk, r| {
                let mut rng = par::chunk_rng(seed, chunk);
                r.filter(|_| odd(s.random_element(&mut rng))).count() as u64
            });
            (hits.into_iter().sum(), json!({ "mode": "sampled", "samples": samples, "seed": seed, "n": n }))
        }
        (None, None) => (u64::MAX, json!({ "error": "space too large to enumerate" })),
    }
}

fn even_char_poly(f: &FieldSpec, cfg: &CheckConfig) -> Criterion {
    timed(4, "even characteristic polynomials", |c| {
        for field in [f.clone(), FieldSpec::gf8()] {
            match b2m(&field, 1) {
                Ok(s) => {
                    let (odd, mut detail) = odd_char_polys(&s, None);
                    detail["odd"] = json!(odd);
                    c.add(format!("b2m(1) over {}", field.name()), odd == 0, detail);
                }
                Err(e) => c.add("b2m(1)", false, json!({ "error": e.to_string() })),
            }
        }
        match b2m(f, 2) {
            Ok(s) => {
                let (odd, mut detail) = odd_char_polys(&s, Some((PARITY_SAMPLES.max(cfg.samples / 10), cfg.seed)));
                detail["odd"] = json!(odd);
                c.add(format!("b2m(2) over {}", f.name()), odd == 0, detail);
            }
            Err(e) => c.add("b2m(2)", false, json!({ "error": e.to_string() })),
        }
    })
}

fn binary_field(cfg: &CheckConfig) -> Criterion {
    let f2 = FieldSpec::gf2();
    timed(5, "binary field", |c| {
        for n in 1..=4 {
            let s = ut(&f2, n);
            let dim_ok = s.dim() == n * (n + 1) / 2;
            c.add(format!("ut({n}) dim"), dim_ok, json!({ "dim": s.dim(), "expected": n * (n + 1) / 2 }));
            c.space(format!("ut({n}) 1bar*-spec"), check_space(&s, &SpecPredicate::bar_star(1), cfg, "ut"), exhaustive);
        }
        let all = full(&f2, 3);
        let count = all.element_count().expect("512");
        let disagree = par::count_matching(count, |i| {
            let m = all.element(i);
            min_poly_is_zero_one_form(&m).expect("square") != check_element(&m, &SpecPredicate::bar_star(1)).expect("square")
        });
        c.add("minimal polynomial form vs closure count on Mat(3, GF(2))", disagree == 0, json!({ "matrices": count, "disagreements": disagree }));
    })
}

fn lemma_suite(f: &FieldSpec, cfg: &AcceptanceConfig) -> Criterion {
    timed(6, "lemma harnesses", |c| {
        let names = ["trace-ortho-1", "trace-ortho-2", "transrank", "covering", "vanishing", "confinement-first", "splitting", "hurdle-dim"];
        let lc = LemmaConfig {
            check: CheckConfig { budget: cfg.budget.min(1 << 18), samples: cfg.samples.min(20_000), seed: cfg.seed },
            ..LemmaConfig::new(f.clone(), cfg.trials, cfg.seed)
        };
        for name in names {
            match run_lemma(name, &lc) {
                Ok(r) => c.add(name, r.passed() && r.trials >= MIN_TRIALS, serde_json::to_value(&r).expect("serializes")),
                Err(e) => c.add(name, false, json!({ "error": e.to_string() })),
            }
        }
        match run_lemma("diagonal-zero", &lc) {
            Ok(r) => c.add("diagonal-zero", r.holds == 3 && r.trials == 3, serde_json::to_value(&r).expect("serializes")),
            Err(e) => c.add("diagonal-zero", false, json!({ "error": e.to_string() })),
        }
    })
}

fn choice(f: &FieldSpec, cfg: &CheckConfig) -> Criterion {
    timed(7, "choice audit", |c| match choice_audit(f, 3, cfg) {
        Ok(a) => c.add("regular Hessenberg 3x3, all targets, p in {1, 2}", a.unsolved == 0 && a.errors == 0 && a.solves > 0, serde_json::to_value(&a).expect("serializes")),
        Err(e) => c.add("choice audit", false, json!({ "error": e.to_string() })),
    })
}

fn structure(f: &FieldSpec, cfg: &AcceptanceConfig) -> Criterion {
    const CONJUGATES: usize = 20;
    timed(8, "structure procedures", |c| {
        let mut rng = seeded(cfg.seed);
        for n in 3..=5 {
            let template = hurdle_template(f, n).expect("n >= 2");
            let mut spaces = vec![template.clone()];
            for _ in 0..CONJUGATES {
                spaces.push(template.conjugate(&Matrix::random_invertible(f, n, &mut rng)).expect("invertible"));
            }
            let (mut found, mut zero_adapted) = (0, 0);
            let mut first_miss = None;
            for (i, s) in spaces.iter().enumerate() {
                let ok = matches!(detect_hurdle(s, cfg.budget), Ok(h) if h.certificate().is_some_and(|cert| cert.is_valid_for(s)));
                if ok {
                    found += 1;
                    if adapted_scan(s, "hurdle").map(|r| r.adapted == 0).unwrap_or(false) {
                        zero_adapted += 1;
                    }
                } else {
                    first_miss.get_or_insert(i);
                }
            }
            c.add(format!("hurdle({n}) and {CONJUGATES} conjugates certified"), found == spaces.len(), json!({ "spaces": spaces.len(), "certified": found, "first_miss": first_miss }));
            c.add(format!("hurdle({n}) family has no adapted points"), zero_adapted == spaces.len(), json!({ "spaces": spaces.len(), "zero_adapted": zero_adapted }));
        }
        let negatives: [(&str, Result<MatSubspace>); 3] = [("nt(3)", Ok(nt(f, 3))), ("sl(3)", Ok(sl(f, 3))), ("b2m(2)", b2m(f, 2))];
        for (name, s) in negatives {
            match s.and_then(|s| detect_hurdle(&s, cfg.budget)) {
                Ok(h) => c.add(format!("{name} is not a hurdle"), matches!(h, HurdleSearch::None { .. }), serde_json::to_value(&h).expect("serializes")),
                Err(e) => c.add(format!("{name} is not a hurdle"), false, json!({ "error": e.to_string() })),
            }
        }
        for n in 1..=5 {
            let a = transitive_rank(&nt(f, n)).map(|t| t.trk);
            let b = transitive_rank(&full(f, n)).map(|t| t.trk);
            c.add(format!("trk(nt({n})) = {}", n - 1), a.as_ref().ok() == Some(&(n - 1)), json!({ "trk": a.ok() }));
            c.add(format!("trk(full({n})) = {n}"), b.as_ref().ok() == Some(&n), json!({ "trk": b.ok() }));
        }
    })
}

fn random_alternating_invertible(f: &FieldSpec, n: usize, rng: &mut impl Rng) -> Matrix {
    let a = alts(f, n);
    loop {
        let p = a.random_element(rng);
        if p.rank() == n {
            return p;
        }
    }
}

fn alternator_round_trip(f: &FieldSpec, cfg: &AcceptanceConfig) -> Criterion {
    const FORMS: usize = 20;
    timed(9, "alternator round trip", |c| {
        let mut rng = seeded(cfg.seed ^ 0x9e37_79b9);
        let mut ok = 0;
        let mut first_bad = None;
        for i in 0..FORMS {
            let p = random_alternating_invertible(f, 4, &mut rng);
            let good = mats_p(f, 4, &p).ok().and_then(|s| {
                let t = s.trace_orthogonal();
                let found = find_alternator(&t, &cfg.check()).ok()?;
                let g = found.gram()?;
                Some(is_right_nondegenerate(g) && annihilates(&t, g))
            });
            if good == Some(true) {
                ok += 1;
            } else {
                first_bad.get_or_insert((i, p));
            }
        }
        c.add(format!("{FORMS} random invertible alternating forms at n = 4"), ok == FORMS, json!({ "forms": FORMS, "recovered": ok, "first_bad": first_bad }));
        let k = k_matrix(f, 2);
        let eq = b2m(f, 2).ok().zip(k.inverse().ok().and_then(|ki| syms(f, 4).left_mul(&ki).ok())).map(|(b, m)| b == m);
        c.add("b2m(2) = K^-1 syms(4)", eq == Some(true), json!({ "equal": eq }));
    })
}

fn third_confinement(f: &FieldSpec, cfg: &CheckConfig) -> Criterion {
    timed(10, "third confinement instance and last-block audit", |c| {
        match third_template(f, 5) {
            Ok(m) => {
                match adapted_scan(&m, "third_template(5)") {
                    Ok(scan) => {
                        let outside: Vec<Vec<u32>> = scan
                            .non_adapted(f)
                            .filter(|x| !third_hyperplanes(x))
                            .map(|x| crate::json::codes(&x))
                            .collect();
                        let non_adapted = scan.weakly_adapted + scan.neither;
                        c.add("non-adapted points lie on x1 = 0 or x3 = 0", outside.is_empty(), json!({
                            "dim": m.dim(), "projective_points": scan.projective_points, "non_adapted": non_adapted, "outside": outside }));
                    }
                    Err(e) => c.add("adapted scan", false, json!({ "error": e.to_string() })),
                }
                match confinement_third(&m, cfg) {
                    Ok(v) => c.add("template meets the hypotheses and the conclusion", v.holds(), serde_json::to_value(&v).expect("serializes")),
                    Err(e) => c.add("third confinement", false, json!({ "error": e.to_string() })),
                }
            }
            Err(e) => c.add("third template", false, json!({ "error": e.to_string() })),
        }
        match lastblock_audit(f) {
            Ok(a) => c.add("last-block audit over Mat(3)", a.failures == 0 && a.holds > 0, serde_json::to_value(&a).expect("serializes")),
            Err(e) => c.add("last-block audit", false, json!({ "error": e.to_string() })),
        }
    })
}

/// Criteria 1 to 10 in the current thread pool.
pub fn run_criteria(f: &FieldSpec, cfg: &AcceptanceConfig) -> AcceptanceReport {
    let check = cfg.check();
    let mut report = AcceptanceReport { config: cfg.clone(), field: f.name(), criteria: Vec::new(), passed: 0, failed: 0 };
    report.push(dimensions(f));
    report.push(exhaustive_specs(f, &check));
    report.push(sampled_specs(f, &check));
    report.push(even_char_poly(f, &check));
    report.push(binary_field(&check));
    report.push(lemma_suite(f, cfg));
    report.push(choice(f, &check));
    report.push(structure(f, cfg));
    report.push(alternator_round_trip(f, cfg));
    report.push(third_confinement(f, &check));
    report
}

/// Criteria 1 to 10 once per worker count, plus the determinism criterion
/// comparing the runs. The first run is returned.
pub fn run_acceptance(f: &FieldSpec, cfg: &AcceptanceConfig, workers: &[usize]) -> AcceptanceReport {
    let runs: Vec<AcceptanceReport> = workers.iter().map(|&w| par::with_workers(w, || run_criteria(f, cfg))).collect();
    let start = Instant::now();
    let reference = runs.first().map(deterministic_json);
    let mismatched: Vec<usize> =
        workers.iter().zip(&runs).filter(|(_, r)| Some(deterministic_json(*r)) != reference).map(|(&w, _)| w).collect();
    let mut report = runs.into_iter().next().expect("at least one worker count");
    report.push(Criterion {
        id: 11,
        title: "determinism across worker counts".into(),
        passed: workers.len() > 1 && mismatched.is_empty(),
        checks: vec![Check {
            name: "reports identical without timings".into(),
            passed: workers.len() > 1 && mismatched.is_empty(),
            detail: json!({ "workers": workers, "mismatched": mismatched }),
        }],
        elapsed_ms: start.elapsed().as_millis() as u64,
    });
    report
}
