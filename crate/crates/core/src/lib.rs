//! Exact point counting for the curves `y^(p^k) + y = x^(p^(kt) + 1)` over
//! every extension of F_p, together with their L-polynomials, Weil spectra
//! and L-polynomial divisibility.

pub mod cli;
pub mod closed;
pub mod counting;
pub mod curve;
pub mod error;
pub mod field;
pub mod lpoly;
pub mod morphisms;
pub mod par;
pub mod verify;

pub use closed::{count_closed, Deviation};
pub use counting::{Budgets, CountRecord, Method};
pub use curve::CurveParams;
pub use error::{Error, Result};
pub use field::{build_field, FieldElement, FieldSpec, Sign};
pub use par::Exec;
