//! Grafting calculus, Schwarzian oracles and framed PSL(2,ℂ) representations
//! for meromorphic projective structures on punctured surfaces.

pub mod error;
pub mod framed;
pub mod grafting;
pub mod moebius;
pub mod schema;
pub mod schwarzian;
pub mod surfaces;
pub mod tolerance;

pub use error::{Error, Result};

/// The guide's snippets, compiled and run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/moebius.md")]
    mod moebius {}
    #[doc = include_str!("../../../book/src/grafting.md")]
    mod grafting {}
    #[doc = include_str!("../../../book/src/schwarzian.md")]
    mod schwarzian {}
    #[doc = include_str!("../../../book/src/surfaces.md")]
    mod surfaces {}
    #[doc = include_str!("../../../book/src/framed.md")]
    mod framed {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
