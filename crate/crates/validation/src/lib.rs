//! Holds the acceptance suite (`cargo test -p spinpump-validation --test acceptance`).
//! The crate has no library code of its own.
