//! C ABI (stub while scaffolding).
