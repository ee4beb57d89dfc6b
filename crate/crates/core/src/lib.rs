pub mod error;
pub mod gf;
pub mod upoly;
pub mod matrix;
pub mod subspace;
pub mod par;
pub mod json;
pub mod spectra;
pub mod constructions;
pub mod structure;
pub mod harness;
pub mod report;
pub mod acceptance;

pub use error::{Error, Result};
pub use gf::{FieldSpec, Fq};
pub use matrix::Matrix;
pub use spectra::{check_space, CheckConfig, SpecPredicate};
pub use subspace::{MatSubspace, VecSubspace};
pub use upoly::Poly;
