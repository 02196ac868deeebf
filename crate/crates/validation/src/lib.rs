//! Acceptance criteria for `hilbert-lab`; see `tests/acceptance.rs`.
