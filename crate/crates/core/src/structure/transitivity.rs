//! Transitive rank and intransitivity veils of operator spaces Hom(U, V),
//! with matrices of shape dim V × dim U.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::json::codes;
use crate::par;
use crate::subspace::{projective_count, projective_point, Grassmannian, MatSubspace, VecSubspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitiveRank {
    pub trk: usize,
    pub target_dim: usize,
    /// First projective point (in enumeration order) attaining the maximum.
    pub index: u64,
    pub attained_at: Vec<u32>,
}

fn source_points(t: &MatSubspace) -> Result<u64> {
    projective_count(t.cols(), u64::from(t.field().q()))
        .ok_or_else(|| Error::Precondition("projective point count overflows".into()))
}

/// dim(T x).
pub fn orbit_dim(t: &MatSubspace, x: &[Fq]) -> usize {
    t.apply(x).expect("x has the source dimension").dim()
}

pub fn transitive_rank(t: &MatSubspace) -> Result<TransitiveRank> {
    let field = t.field();
    let m = t.cols();
    let target_dim = t.rows();
    let count = source_points(t)?;
    if count == 0 {
        return Ok(TransitiveRank { trk: 0, target_dim, index: 0, attained_at: Vec::new() });
    }
    let point = |i| projective_point(field, m, i);
    let (index, trk) = match par::first_hit(count, |i| (orbit_dim(t, &point(i)) == target_dim).then_some(())) {
        Some((i, ())) => (i, target_dim),
        None => {
            let dims = par::map_indices(count, |i| orbit_dim(t, &point(i)));
            let best = *dims.iter().max().expect("nonempty");
            (dims.iter().position(|&d| d == best).expect("max exists") as u64, best)
        }
    };
    Ok(TransitiveRank { trk, target_dim, index, attained_at: codes(&point(index)) })
}

/// T x ≠ V for every x.
pub fn is_intransitive(t: &MatSubspace) -> Result<bool> {
    Ok(transitive_rank(t)?.trk < t.rows())
}

/// Whether π_W ∘ T is intransitive, π_W : V → V/W.
pub fn quotient_is_intransitive(t: &MatSubspace, w: &VecSubspace) -> Result<bool> {
    let field = t.field();
    let count = source_points(t)?;
    let full = t.rows();
    Ok(par::first_hit(count, |i| {
        let x = projective_point(field, t.cols(), i);
        let image = t.apply(&x).expect("shape");
        (image.sum(w).expect("same ambient").dim() == full).then_some(())
    })
    .is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum VeilSearch {
    /// A nonzero proper subspace of greatest dimension keeping the quotient intransitive.
    Veil { index: u64, veil: VecSubspace },
    /// T is intransitive and no nonzero veil exists.
    PrimitivelyIntransitive,
    Transitive,
    Budget { required: Option<u64>, budget: u64 },
}

/// Scan subspaces W of V by decreasing dimension (Grassmannian order inside
/// each dimension); the first W with π_W T intransitive is the veil.
/// `budget` bounds the number of (subspace, point) pairs visited.
pub fn find_intransitivity_veil(t: &MatSubspace, budget: u64) -> Result<VeilSearch> {
    if t.rows() == 0 {
        return Err(Error::Precondition("target space must be nonzero".into()));
    }
    if !is_intransitive(t)? {
        return Ok(VeilSearch::Transitive);
    }
    let field = t.field();
    let points = source_points(t)?;
    let mut required: Option<u64> = Some(0);
    let mut grasses = Vec::new();
    for d in (1..t.rows()).rev() {
        let g = Grassmannian::new(field, d, t.rows());
        required = match (&g, required) {
            (Some(g), Some(r)) => g.count().checked_mul(points).and_then(|c| c.checked_add(r)),
            _ => None,
        };
        grasses.extend(g);
    }
    match required {
        Some(r) if r <= budget => {}
        _ => return Ok(VeilSearch::Budget { required, budget }),
    }
    for g in &grasses {
        for index in 0..g.count() {
            let w = g.get(index);
            if quotient_is_intransitive(t, &w)? {
                return Ok(VeilSearch::Veil { index, veil: w });
            }
        }
    }
    Ok(VeilSearch::PrimitivelyIntransitive)
}
