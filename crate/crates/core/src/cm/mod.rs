//! Complex multiplication: finding a curve with a rational torsion point of
//! suitable order, then running a criterion on it.

pub mod hilbert;
pub mod poly;
pub mod search;
pub mod certificate;
pub mod prove;

pub use certificate::{check_certificate, verify_certificate, Certificate, CriterionKind};
pub use prove::{prove_prime, ProveConfig, ProveReport};
pub use search::{find_cm_parameters, CmParameters};
