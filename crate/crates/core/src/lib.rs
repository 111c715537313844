//! Exact lattice Kuhn-Munkres over Laurent series fields, and the tropical
//! invariants of point configurations in the affine building it computes.

pub mod error;
pub mod field;
pub mod invariants;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod precision;
pub mod series;
pub mod slir;
pub mod tropkm;
pub mod webs;

pub use error::{Error, Result};
pub use field::{FieldConfig, Scalar};
pub use lattice::{Coweight, Flavor, Lattice};
pub use matrix::SeriesMatrix;
pub use series::{parse_series, Series, Valuation};
