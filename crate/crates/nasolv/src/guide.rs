//! Book chapters compiled as doc-tests (placeholder).
