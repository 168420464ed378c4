pub mod ebasis;
pub mod error;
pub mod examples;
pub mod io;
pub mod laurent;
pub mod lusztig;
pub mod qtorus;
pub mod seed;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/laurent.md")]
    mod laurent {}
    #[doc = include_str!("../../../book/src/torus.md")]
    mod torus {}
    #[doc = include_str!("../../../book/src/seeds.md")]
    mod seeds {}
    #[doc = include_str!("../../../book/src/standard-basis.md")]
    mod standard_basis {}
    #[doc = include_str!("../../../book/src/triangular-basis.md")]
    mod triangular_basis {}
    #[doc = include_str!("../../../book/src/mutation.md")]
    mod mutation {}
    #[doc = include_str!("../../../book/src/kronecker.md")]
    mod kronecker {}
    #[doc = include_str!("../../../book/src/crystal.md")]
    mod crystal {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
