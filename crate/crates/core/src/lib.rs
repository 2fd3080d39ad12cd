pub mod cli;
pub mod cohomtree;
pub mod cosheafside;
pub mod dualbridge;
pub mod error;
pub mod finab;
pub mod random;
pub mod ringmod;
pub mod sheafside;
pub mod stone;

pub use error::{Error, Result};
