//! Finite fields, polynomials, exact linear algebra and linear codes, with
//! twisted Reed-Solomon codes and their Schur squares, duals and
//! self-orthogonality.

pub mod codes;
pub mod constructions;
pub mod gf;
pub mod gtrs;
pub mod linalg;
pub mod poly;

pub use codes::{ClassTag, CodeClass, DistanceLimits, DistanceReport, LinearCode, Strategy};
pub use constructions::{Construction, ConstructionSpec, SelfOrthWitness};
pub use gf::{make_field, Elem, FieldCtx, FieldSpec};
pub use gtrs::{EvalConfig, Regime};
pub use linalg::Matrix;
pub use poly::{Poly, SpaceBasis, TwistParams};
