//! Exact combinatorial backbone of genus-zero symplectic field theory.
//!
//! The crate models the bookkeeping layer of SFT compactifications without any
//! analysis: decorated trees and their contractions, level structures and the
//! maximally leveled enumeration, cobordism star labels, smooth refinements
//! coming from corner blow-ups, degree and index arithmetic, formal orientation
//! lines, label-level flow-category strata and a rational contact homology
//! chain complex.
//!
//! All arithmetic is exact (`num-bigint` / `num-rational`); no floating point is
//! used anywhere.

pub mod blowup;
pub mod cobordism;
pub mod error;
pub mod flowcat;
pub mod gen;
pub mod grading;
pub mod homology;
pub mod levels;
pub mod linalg;
pub mod orbit;
pub mod poset;
pub mod rational;
pub mod signs;
pub mod trees;

pub use error::{Error, Result};
pub use orbit::{OrbitUniverse, Parity, ReebOrbit};
pub use rational::Q;
pub use trees::{DecoratedForest, DecoratedTree, Dir};
