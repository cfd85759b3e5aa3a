//! Product sets in finite groups and on the circle: classification of
//! critical pairs, reductions to cyclic and dihedral models, and the
//! relative (slice-wise) analysis.
//!
//! All measures are exact rationals.

pub mod acceptance;
pub mod bits;
pub mod catalog;
pub mod dyson;
pub mod group;
pub mod hom;
pub mod rational;
pub mod reduction;
pub mod relative;
pub mod subgroup;
pub mod subset;
pub mod survey;
pub mod sweep;
pub mod torus;

pub use catalog::{parse_group, small_groups};
pub use group::{FiniteGroup, GroupRef};
pub use hom::Homomorphism;
pub use rational::{BigQ, Q};
pub use subgroup::Subgroup;
pub use subset::{classify_pair, product_set, GroupSubset, PairClass, PairTag, Side};
