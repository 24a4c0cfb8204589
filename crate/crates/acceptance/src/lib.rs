//! Acceptance checks live in `tests/acceptance.rs` and run with
//! `cargo test -p chirpjrc-xcheck --test acceptance`.
