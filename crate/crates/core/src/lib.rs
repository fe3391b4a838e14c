pub mod coords;
pub mod error;
pub mod export;
pub mod farfield;
pub mod patterns;
pub mod scenarios;
pub mod scene;
pub mod waves;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/coordinates.md")]
    mod coordinates {}
    #[doc = include_str!("../../../book/src/waves.md")]
    mod waves {}
    #[doc = include_str!("../../../book/src/farfield.md")]
    mod farfield {}
    #[doc = include_str!("../../../book/src/patterns.md")]
    mod patterns {}
    #[doc = include_str!("../../../book/src/export.md")]
    mod export {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
}
