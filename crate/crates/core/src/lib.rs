//! Exponential sums Σ f(n) e(F(n)) with multiplicative coefficients f and
//! real polynomial phases F: evaluators, the hyperbola partition, Vinogradov
//! counters, polynomial congruences, Dirichlet characters and joint
//! equidistribution experiments.

pub mod arith;
pub mod characters;
pub mod congruence;
pub mod equidist;
pub mod error;
pub mod multfunc;
pub mod numeric;
pub mod partition;
pub mod phase;
pub mod vinogradov;
pub mod weylsum;

pub use arith::{FactoredInteger, PrimeSieve};
pub use characters::{CharGroup, DirichletCharacter};
pub use congruence::{IntPoly, RootTable};
pub use error::{Error, Result};
pub use multfunc::MultiplicativeFunction;
pub use partition::{PartitionScheme, Rectangle};
pub use phase::{FracFixed, PolyPhase, RationalApprox};
