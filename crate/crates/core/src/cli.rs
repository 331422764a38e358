//! CLI document formats (stub while scaffolding).
