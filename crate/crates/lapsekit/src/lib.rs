//! Lapse-risk modeling toolkit for life-insurance portfolios.
//!
//! The crate bundles four binary classifiers (gradient tree boosting, a
//! soft-margin RBF SVM trained by SMO, CART with cost-complexity pruning,
//! and logistic regression), an economic valuation layer that turns
//! confusion matrices into customer-lifetime-value based retention gains,
//! a profit-target regression mode that optimizes the gain directly, and a
//! cross-validated evaluation protocol with grid-search tuners.
//!
//! Portfolios are either read from CSV or drawn from a seeded synthetic
//! generator with a configurable planted signal, so the whole pipeline is
//! reproducible end to end from a single root seed.
//!
//! With the `parallel` feature (default) folds, grid points and split
//! searches run on a rayon pool; without it everything runs sequentially.
//! Results are bit-identical either way: every parallel reduction is
//! order-independent and every worker derives its own RNG stream.

pub mod boosting;
pub mod cart;
pub mod economics;
mod error;
pub mod evaluation;
pub mod linear;
pub mod model_io;
pub mod par;
pub mod portfolio;
pub mod svm;

pub use error::{Error, Result};
