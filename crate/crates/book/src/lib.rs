//! The chapters of the guide under `book/`, compiled as doc tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}

#[doc = include_str!("../../../book/src/densities.md")]
pub mod densities {}

#[doc = include_str!("../../../book/src/scattering.md")]
pub mod scattering {}

#[doc = include_str!("../../../book/src/lyapunov.md")]
pub mod lyapunov {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
