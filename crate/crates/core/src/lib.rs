//! Complexity analysis of open-cards (double-dummy) trick-taking play.
//!
//! * [`engine`]: rules, deals, the successor function, random playouts.
//! * [`bounds`]: exact closed-form bounds on state-space and game-tree size.
//! * [`estimator`]: Monte Carlo branching profiles and unbiased tree-size estimates.
//! * [`oracle`]: exhaustive enumeration on tiny parametrizations.

pub mod bounds;
pub mod count;
pub mod engine;
pub mod estimator;
pub mod oracle;
mod parallel;
pub mod rng;
pub mod stats;

pub use count::BigCount;
pub use engine::{Card, CardSet, Deal, EngineError, GameParams, PlayState, PlayoutTrace};
pub use stats::MomentAccumulator;
