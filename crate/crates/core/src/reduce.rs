//! Singular-B reduction (stub while scaffolding).
pub struct MatrixPair;
pub struct ReducedPair;
pub struct ClassLabel;
