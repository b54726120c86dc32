//! Integers, the residue ring Z/nZ and the number theory around it.

pub mod cornacchia;
pub mod factor;
pub mod residue;
pub mod sqrt;

pub use cornacchia::{cornacchia, cornacchia_with_root};
pub use factor::{is_perfect_power, small_divisor_search, trial_division};
pub use residue::{Residue, ResidueRing};
pub use sqrt::{jacobi, sqrt_mod};
