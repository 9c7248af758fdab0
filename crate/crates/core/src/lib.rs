//! Core algorithms for permutation-based interconnection networks: graph
//! family generators, split transforms, closed-form connectivity values, cut
//! certificates, an exhaustive exact oracle for h-super (edge-)connectivity,
//! and isomorphism checking.
//!
//! The crate is `no_std` (with `alloc`) and does no I/O; file formats, the
//! CLI and thread-parallel drivers live in the companion `starkit` crate.
//! All operations are deterministic: one lexicographic order rules vertex
//! numbering, tie-breaking and witnesses.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cuts;
pub mod error;
pub mod formulas;
pub mod iso;
pub mod oracle;
pub mod perm;
pub mod split;
pub mod topology;

pub use error::{Error, Result};
pub use perm::{Arrangement, Parity};
pub use topology::{EdgeKind, Family, FamilyTag, Graph};

/// Which connectivity measure an oracle run or formula refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Vertex version (minimum h-vertex-cut size).
    Kappa,
    /// Edge version (minimum h-edge-cut size).
    Lambda,
}

impl Measure {
    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Kappa => "kappa",
            Measure::Lambda => "lambda",
        }
    }

    pub fn from_str(s: &str) -> Option<Measure> {
        match s {
            "kappa" => Some(Measure::Kappa),
            "lambda" => Some(Measure::Lambda),
            _ => None,
        }
    }
}

impl core::fmt::Display for Measure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}
