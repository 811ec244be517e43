pub mod canon;
pub mod error;
pub mod exact;
pub mod f2;
pub mod galois;
pub mod localarith;
pub mod groupmod;
pub mod pencil;
pub mod report;
pub mod selmersim;

pub use error::{Error, Result};
