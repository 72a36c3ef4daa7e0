//! Exact-arithmetic engine for the recursive Q-curvature formulas: integer
//! compositions and their multiplicities, a free operator algebra, the
//! factorization polynomials `pi_{2N}`, truncated power series, the round
//! sphere model and the Q recursion itself.

pub mod combinatorics;
pub mod error;
pub mod free_algebra;
pub mod golden;
pub mod multipoly;
pub mod pi;
pub mod poly_text;
pub mod qformula;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod sphere;
pub mod suites;
pub mod unipoly;

pub use combinatorics::Composition;
pub use error::{AlgebraError, Result};
pub use free_algebra::{NcPoly, Word};
pub use multipoly::{Alphabet, MultiPoly};
pub use pi::PiPolynomial;
pub use qformula::{derive_q_formula, Format, QFormula};
pub use report::{CheckRecord, Report, Status};
pub use scalar::Scalar;
pub use series::TruncSeries;
pub use sphere::SphereContext;
pub use suites::{Suite, VerifyConfig};
pub use unipoly::UniPoly;
