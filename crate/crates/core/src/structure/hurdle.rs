//! Hurdles: spaces containing every trace-zero operator that kills a fixed
//! codimension-2 subspace G, equivalently every φ⊗y with φ in a fixed plane
//! P of the dual and φ(y) = 0.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::matrix::{nullspace_rows, Matrix};
use crate::par;
use crate::subspace::{unit_vector, Grassmannian, MatSubspace, VecSubspace};

/// A dual plane P (rows are linear forms) together with G = °P.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurdleCertificate {
    pub p: VecSubspace,
    pub g: VecSubspace,
}

impl HurdleCertificate {
    pub fn new(p: VecSubspace) -> Result<Self> {
        if p.dim() != 2 {
            return Err(Error::Precondition(format!("a hurdle plane has dimension 2, got {}", p.dim())));
        }
        let g = p.annihilator();
        Ok(HurdleCertificate { p, g })
    }

    pub fn n(&self) -> usize {
        self.p.ambient()
    }

    /// The space every hurdle with this plane must contain.
    pub fn required_space(&self) -> MatSubspace {
        hurdle_space(self.p.field(), &self.p)
    }

    pub fn is_valid_for(&self, s: &MatSubspace) -> bool {
        s.shape() == (self.n(), self.n()) && self.required_space().is_subspace_of(s)
    }

    /// Certificate for Q S Q⁻¹: forms transform as φ ↦ φ Q⁻¹.
    pub fn conjugated(&self, q: &Matrix) -> Result<Self> {
        let qinv = q.inverse()?;
        let rows = self.p.basis().iter().map(|phi| qinv.vec_mul(phi)).collect::<Result<Vec<_>>>()?;
        Self::new(VecSubspace::span(self.p.field(), self.n(), &rows)?)
    }
}

/// {M : every row of M lies in P, tr M = 0}, the span of the tensors φ⊗y
/// with φ ∈ P and φ(y) = 0. Its dimension is 2n − 1.
pub fn hurdle_space(field: &FieldSpec, p: &VecSubspace) -> MatSubspace {
    let n = p.ambient();
    let gens: Vec<Matrix> = p
        .basis()
        .iter()
        .flat_map(|phi| (0..n).map(move |r| Matrix::tensor(field, phi, &unit_vector(n, r))))
        .collect();
    let traces: Vec<Fq> = gens.iter().map(|g| g.trace().expect("square")).collect();
    let combos = nullspace_rows(field, &[traces], gens.len());
    let members: Vec<Matrix> = combos
        .iter()
        .map(|c| {
            c.iter().zip(&gens).fold(Matrix::zeros(field, n, n), |acc, (&ci, g)| acc.add(&g.scale(ci)).expect("same shape"))
        })
        .collect();
    MatSubspace::span(field, n, n, &members).expect("n x n")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HurdleSearch {
    Found { index: u64, planes: u64, certificate: HurdleCertificate },
    None { planes: u64 },
    Budget { required: Option<u64>, budget: u64 },
}

impl HurdleSearch {
    pub fn certificate(&self) -> Option<&HurdleCertificate> {
        match self {
            HurdleSearch::Found { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}

/// Scan the dual planes in Grassmannian order and return the first one whose
/// required tensors all lie in S.
pub fn detect_hurdle(s: &MatSubspace, budget: u64) -> Result<HurdleSearch> {
    if !s.is_square() {
        return Err(Error::NotSquare { rows: s.rows(), cols: s.cols() });
    }
    let n = s.rows();
    if n < 2 {
        return Err(Error::Precondition("hurdles need n >= 2".into()));
    }
    let field = s.field();
    let grass = match Grassmannian::new(field, 2, n) {
        Some(g) if g.count() <= budget => g,
        g => return Ok(HurdleSearch::Budget { required: g.map(|g| g.count()), budget }),
    };
    let planes = grass.count();
    if s.dim() < 2 * n - 1 {
        return Ok(HurdleSearch::None { planes });
    }
    let hit = par::first_hit(planes, |i| {
        let p = grass.get(i);
        hurdle_space(field, &p).is_subspace_of(s).then_some(p)
    });
    Ok(match hit {
        Some((index, p)) => HurdleSearch::Found { index, planes, certificate: HurdleCertificate::new(p)? },
        None => HurdleSearch::None { planes },
    })
}
