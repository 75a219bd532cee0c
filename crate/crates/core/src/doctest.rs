// Each book chapter becomes the doc comment of an empty module so that
// `cargo test --doc` runs its code blocks against this crate.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[doc = include_str!("../../../book/src/sets.md")]
mod sets {}
#[doc = include_str!("../../../book/src/functionals.md")]
mod functionals {}
#[doc = include_str!("../../../book/src/stationarity.md")]
mod stationarity {}
#[doc = include_str!("../../../book/src/optimizer.md")]
mod optimizer {}
#[doc = include_str!("../../../book/src/verification.md")]
mod verification {}
