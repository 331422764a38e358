//! Congruence decisions (stub while scaffolding).
pub struct CongruenceCertificate;
pub struct PairInvariants;
