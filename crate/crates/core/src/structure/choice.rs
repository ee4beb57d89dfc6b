//! Solving for a top-right block R that gives a regular Hessenberg matrix a
//! prescribed characteristic polynomial.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::matrix::{rref_rows, Matrix};
use crate::par;
use crate::spectra::CheckMode;
use crate::subspace::checked_pow;
use crate::upoly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ChoiceOutcome {
    Found { block: Matrix },
    None,
    Budget { required: Option<u64>, budget: u64 },
}

impl ChoiceOutcome {
    pub fn block(&self) -> Option<&Matrix> {
        match self {
            ChoiceOutcome::Found { block } => Some(block),
            _ => None,
        }
    }
}

/// M + [[0, R], [0, 0]] with R of shape p × (n − p).
pub fn with_block(m: &Matrix, r: &Matrix, p: usize) -> Matrix {
    let mut out = m.clone();
    for i in 0..r.rows() {
        for j in 0..r.cols() {
            out.set(i, p + j, m.get(i, p + j) + r.get(i, j));
        }
    }
    out
}

fn coeffs(chi: &Poly, n: usize) -> Vec<Fq> {
    (0..n).map(|d| chi.coeff(d)).collect()
}

fn validate(m: &Matrix, r: &Poly, p: usize) -> Result<()> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_regular_hessenberg() {
        return Err(Error::Precondition("M must be regular Hessenberg".into()));
    }
    if !r.is_monic() || r.degree() != Some(n) {
        return Err(Error::Precondition(format!("target must be monic of degree {n}")));
    }
    if p == 0 || p >= n {
        return Err(Error::Precondition(format!("split index must lie in 1..{n}")));
    }
    if r.trace() != m.trace()? {
        return Err(Error::Precondition("trace of the target differs from tr M".into()));
    }
    Ok(())
}

/// p = 1: R is a row added to the first row of M, and χ is affine in it.
fn solve_row(m: &Matrix, r: &Poly) -> Result<Option<Matrix>> {
    let f = m.field();
    let n = m.rows();
    let base = coeffs(&m.char_poly()?, n);
    let target = coeffs(r, n);
    let deltas = (1..n)
        .map(|j| {
            let mut e = Matrix::zeros(f, 1, n - 1);
            e.set(0, j - 1, Fq::ONE);
            let c = coeffs(&with_block(m, &e, 1).char_poly()?, n);
            Ok(c.iter().zip(&base).map(|(&a, &b)| a - b).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    // one equation per coefficient: Σ_j R_j δ_j[k] = target[k] − base[k]
    let mut rows: Vec<Vec<Fq>> = (0..n)
        .map(|k| deltas.iter().map(|d| d[k]).chain(std::iter::once(target[k] - base[k])).collect())
        .collect();
    let pivots = rref_rows(f, &mut rows);
    if pivots.contains(&(n - 1)) {
        return Ok(None);
    }
    let mut block = Matrix::zeros(f, 1, n - 1);
    for (row, &pc) in rows.iter().zip(&pivots) {
        block.set(0, pc, row[n - 1]);
    }
    Ok(Some(block))
}

/// Find R with χ(M + [[0, R], [0, 0]]) = r. p = 1 is solved linearly;
/// larger p searches all q^{p(n−p)} blocks in base-q order within `budget`.
/// Every returned block has been re-verified.
pub fn choice_solve(m: &Matrix, r: &Poly, p: usize, budget: u64) -> Result<ChoiceOutcome> {
    validate(m, r, p)?;
    let f = m.field();
    let n = m.rows();
    let found = if p == 1 {
        solve_row(m, r)?
    } else {
        let cells = p * (n - p);
        let count = match checked_pow(u64::from(f.q()), cells) {
            Some(c) if c <= budget => c,
            c => return Ok(ChoiceOutcome::Budget { required: c, budget }),
        };
        let q = u64::from(f.q());
        par::first_hit(count, |i| {
            let mut idx = i;
            let mut block = Matrix::zeros(f, p, n - p);
            for cell in (0..cells).rev() {
                block.set(cell / (n - p), cell % (n - p), Fq((idx % q) as u16));
                idx /= q;
            }
            (with_block(m, &block, p).char_poly().ok()? == *r).then_some(block)
        })
        .map(|(_, b)| b)
    };
    match found {
        Some(block) if with_block(m, &block, p).char_poly()? == *r => Ok(ChoiceOutcome::Found { block }),
        Some(_) => Err(Error::Precondition("solved block failed re-verification".into())),
        None => Ok(ChoiceOutcome::None),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceAudit {
    pub n: usize,
    pub mode: CheckMode,
    pub matrices: u64,
    pub solves: u64,
    pub unsolved: u64,
    pub errors: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_unsolved: Option<ChoiceCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceCase {
    pub matrix: Matrix,
    pub target: String,
    pub p: usize,
}

/// Number of regular Hessenberg n × n matrices over GF(q).
pub fn regular_hessenberg_count(n: usize, q: u64) -> Option<u64> {
    checked_pow(q, n * (n + 1) / 2)?.checked_mul(checked_pow(q - 1, n.saturating_sub(1))?)
}

/// The `index`-th regular Hessenberg matrix: the upper triangle (row-major)
/// in base q, then the subdiagonal in base q − 1 shifted to nonzero codes.
pub fn regular_hessenberg(f: &FieldSpec, n: usize, mut index: u64) -> Matrix {
    let q = u64::from(f.q());
    let mut m = Matrix::zeros(f, n, n);
    for i in (1..n).rev() {
        m.set(i, i - 1, Fq((index % (q - 1) + 1) as u16));
        index /= q - 1;
    }
    let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    for &(i, j) in upper.iter().rev() {
        m.set(i, j, Fq((index % q) as u16));
        index /= q;
    }
    m
}

/// Every monic degree-n polynomial with the given trace, in base-q order of
/// the low coefficients.
pub fn targets_with_trace(f: &FieldSpec, n: usize, trace: Fq, index: u64) -> Poly {
    let q = u64::from(f.q());
    let mut c = vec![Fq::ZERO; n + 1];
    let mut idx = index;
    for slot in c.iter_mut().take(n - 1) {
        *slot = Fq((idx % q) as u16);
        idx /= q;
    }
    c[n - 1] = trace;
    c[n] = Fq::ONE;
    Poly::new(f, c)
}

/// Run the solver on every regular Hessenberg matrix (or on `cfg.samples`
/// seeded ones when the case count exceeds the budget), every target with
/// matching trace, and every split index.
pub fn choice_audit(f: &FieldSpec, n: usize, cfg: &crate::spectra::CheckConfig) -> Result<ChoiceAudit> {
    if n < 2 {
        return Err(Error::Precondition("choice audit needs n >= 2".into()));
    }
    let q = u64::from(f.q());
    let per = checked_pow(q, n - 1).ok_or_else(|| Error::Precondition("target count overflows".into()))?;
    let total = regular_hessenberg_count(n, q);
    let (mode, count) = match total.and_then(|t| t.checked_mul(per)) {
        Some(c) if c <= cfg.budget => (CheckMode::Exhaustive { count: total.expect("fits") }, total.expect("fits")),
        _ => (CheckMode::Sampled { samples: cfg.samples, seed: cfg.seed }, cfg.samples),
    };
    let sampled = matches!(mode, CheckMode::Sampled { .. });
    let results = par::map_chunks(count, |chunk, range| {
        let mut rng = par::chunk_rng(cfg.seed, chunk);
        let mut solves = 0u64;
        let mut unsolved = 0u64;
        let mut errors = 0u64;
        let mut first = None;
        for i in range {
            let idx = if sampled { rand::Rng::random_range(&mut rng, 0..total.unwrap_or(u64::MAX)) } else { i };
            let m = regular_hessenberg(f, n, idx);
            let tr = m.trace().expect("square");
            for t in 0..per {
                let r = targets_with_trace(f, n, tr, t);
                for p in 1..n {
                    solves += 1;
                    match choice_solve(&m, &r, p, u64::MAX) {
                        Ok(ChoiceOutcome::Found { .. }) => {}
                        Ok(_) => {
                            unsolved += 1;
                            first.get_or_insert(ChoiceCase { matrix: m.clone(), target: r.to_string(), p });
                        }
                        Err(_) => errors += 1,
                    }
                }
            }
        }
        (solves, unsolved, errors, first)
    });
    let mut audit = ChoiceAudit { n, mode, matrices: count, solves: 0, unsolved: 0, errors: 0, first_unsolved: None };
    for (s, u, e, first) in results {
        audit.solves += s;
        audit.unsolved += u;
        audit.errors += e;
        if audit.first_unsolved.is_none() {
            audit.first_unsolved = first;
        }
    }
    Ok(audit)
}
