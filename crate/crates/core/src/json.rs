//! JSON forms of matrices and matrix subspaces (entries as decimal codes).

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::matrix::Matrix;
use crate::subspace::{MatSubspace, VecSubspace};

pub fn codes(v: &[Fq]) -> Vec<u32> {
    v.iter().map(|x| x.code()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub shape: [usize; 2],
    pub basis: Vec<MatrixJson>,
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson { rows: m.rows(), cols: m.cols(), entries: m.entries().iter().map(|x| x.code()).collect() }
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

#[derive(Serialize)]
struct VecSubspaceJson {
    ambient: usize,
    dim: usize,
    basis: Vec<Vec<u32>>,
}

impl Serialize for VecSubspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VecSubspaceJson { ambient: self.ambient(), dim: self.dim(), basis: self.basis().iter().map(|b| codes(b)).collect() }
            .serialize(s)
    }
}

impl MatrixJson {
    pub fn to_matrix(&self, field: &FieldSpec) -> Result<Matrix> {
        Matrix::from_codes(field, self.rows, self.cols, &self.entries)
    }
}

impl From<&MatSubspace> for SubspaceJson {
    fn from(s: &MatSubspace) -> Self {
        SubspaceJson { shape: [s.rows(), s.cols()], basis: s.basis().iter().map(MatrixJson::from).collect() }
    }
}

impl SubspaceJson {
    /// Load and canonicalize.
    pub fn to_subspace(&self, field: &FieldSpec) -> Result<MatSubspace> {
        let mats = self.basis.iter().map(|m| m.to_matrix(field)).collect::<Result<Vec<_>>>()?;
        MatSubspace::span(field, self.shape[0], self.shape[1], &mats)
    }
}

pub fn parse_subspace(text: &str, field: &FieldSpec) -> Result<MatSubspace> {
    let js: SubspaceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    js.to_subspace(field)
}

pub fn parse_matrix(text: &str, field: &FieldSpec) -> Result<Matrix> {
    let js: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    js.to_matrix(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let f = FieldSpec::gf4();
        let m = Matrix::from_rows(&f, &[vec![0, 1], vec![2, 3]]).unwrap();
        let text = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
        assert_eq!(text, r#"{"rows":2,"cols":2,"entries":[0,1,2,3]}"#);
        assert_eq!(parse_matrix(&text, &f).unwrap(), m);
        assert!(parse_matrix(r#"{"rows":1,"cols":1,"entries":[4]}"#, &f).is_err());
        assert!(parse_matrix("nope", &f).is_err());
    }

    #[test]
    fn subspace_is_canonicalized_on_load() {
        let f = FieldSpec::gf4();
        let text = r#"{"shape":[2,2],"basis":[
            {"rows":2,"cols":2,"entries":[1,1,0,0]},
            {"rows":2,"cols":2,"entries":[0,1,0,0]},
            {"rows":2,"cols":2,"entries":[1,0,0,0]}]}"#;
        let s = parse_subspace(text, &f).unwrap();
        assert_eq!(s.dim(), 2);
        let back = SubspaceJson::from(&s);
        assert_eq!(back.basis[0].entries, vec![1, 0, 0, 0]);
        assert_eq!(back.to_subspace(&f).unwrap(), s);
        assert!(s.contains(&Matrix::from_flat(&f, 2, 2, &[Fq(2), Fq(3), Fq::ZERO, Fq::ZERO])));
    }
}
