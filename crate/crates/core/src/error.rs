use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("bad signature: {0}")]
    Signature(String),
    #[error("digit count mismatch: {digits} angle digits for {tets} tetrahedra")]
    DigitCount { digits: usize, tets: usize },
    #[error("non-involutive gluing at tetrahedron {tet} face {face}")]
    NonInvolutive { tet: usize, face: u8 },
    #[error("triangulation is not orientable")]
    NonOrientable,
    #[error("angle-sum violation: {0}")]
    AngleSum(String),
    #[error("not transverse taut: coorientation conflict at tetrahedron {0}")]
    NotTransverse(usize),
    #[error("not veering: colour conflict in tetrahedron {tet}")]
    NotVeering { tet: usize },
    #[error("cusp is not a torus: V - E + F = {0}")]
    NonTorusCusp(i64),
    #[error("ladder decomposition failed: {0}")]
    Ladder(String),
    #[error("curve is not carried: {0}")]
    NotCarried(String),
    #[error("zero homology class has no slope")]
    ZeroClass,
    #[error("basis is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("PL map error: {0}")]
    Pl(String),
    #[error("leaf hit an integer height at branch {branch}; retry from a perturbed seed")]
    IntegerHeight { branch: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("census: {0}")]
    Census(String),
}

pub type Result<T> = std::result::Result<T, Error>;
