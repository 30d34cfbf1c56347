//! The guide's chapters, included so that `cargo test` runs their listings.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/momentum-map.md")]
pub mod momentum_map {}

#[doc = include_str!("../../../book/src/fock-algebra.md")]
pub mod fock_algebra {}

#[doc = include_str!("../../../book/src/dynamics.md")]
pub mod dynamics {}

#[doc = include_str!("../../../book/src/liouville.md")]
pub mod liouville {}

#[doc = include_str!("../../../book/src/optics.md")]
pub mod optics {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
