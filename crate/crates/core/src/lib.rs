//! Word maps, random walks and generation statistics on small finite groups.
//!
//! The crate is organized bottom-up:
//!
//! * [`groups`]: finite groups with dense element indices (cyclic, dihedral,
//!   symmetric, alternating, `SL(2,p)`, `PSL(2,p)`, Cayley tables, quotients
//!   and direct powers) plus structural queries.
//! * [`words`]: free-group words, sampling, abelianization, gcd and Bezout
//!   certificates, proper-power detection and evaluation.
//! * [`measure`]: exact and sampled pushforward distributions of word maps.
//! * [`lattice`]: the simple random walk on `Z^d`, its exact laws modulo
//!   prime powers and gcd tail statistics.
//! * [`group_walks`]: random walks on finite groups, cyclic obstructions and
//!   walks on direct powers.
//! * [`generation`]: generating tuples, Hall counts and lifting through
//!   central quotients.
//! * [`harness`]: the experiment runner behind the `wordlab` binary.
//!
//! Data-parallel loops go through [`exec`], which uses rayon when the
//! `parallel` feature is on and falls back to a sequential loop otherwise.
//! Results never depend on the number of worker threads.

pub mod error;
pub mod exec;
pub mod generation;
pub mod group_walks;
pub mod groups;
pub mod harness;
pub mod lattice;
pub mod measure;
pub mod rng;
pub mod words;

pub use error::{Error, Result};
pub use groups::{Group, GroupElement, GroupSpec};
pub use words::{AbelianVector, SamplingModel, Word};
