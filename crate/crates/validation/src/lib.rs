//! Acceptance checks for the gravred workspace; see `tests/acceptance.rs`.
