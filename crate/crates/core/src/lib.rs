//! Kubo-Mori geometry of finite quantum state spaces.
//!
//! The crate evaluates the scalar curvature of the Kubo-Mori (canonical
//! correlation) metric from a spectrum, splits it into the summand groups
//! used in monotonicity arguments, and provides the majorisation machinery
//! and sweep harness needed to test monotonicity claims numerically.
//!
//! ```
//! use km_core::{curvature, Spectrum};
//!
//! let s = Spectrum::new(vec![0.5, 0.5]).unwrap();
//! assert!((curvature::scal(&s) + 1.5).abs() < 1e-12);
//! ```

pub mod conjecture;
pub mod curvature;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod states;

mod series;

pub use conjecture::{ClaimClass, GroupedTermTask, InequalitySpec, SweepReport, Verdict};
pub use curvature::{BasisElement, CurvatureBreakdown, SubtermName};
pub use error::{Error, Result};
pub use kernels::EvalPolicy;
pub use linalg::CMatrix;
pub use oracle::{Chart, ChartKind};
pub use states::{DensityMatrix, GibbsPath, MajorisationChain, Spectrum, TangentVector};
