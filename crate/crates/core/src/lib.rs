#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exact;
pub mod conjecture;
pub mod hodge;
pub mod oracle;
pub mod ordinariness;
pub mod polytope;

pub use error::{Error, Result};
