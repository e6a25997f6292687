//! Restart schemes for first-order convex optimization.
//!
//! Sharpness of the minimizers (a Łojasiewicz-type growth condition
//! `μ·d(x, X*)^r ≤ f(x) − f*`) lets simple restart schemes turn accelerated
//! methods into linearly or polynomially faster ones. This crate provides
//!
//! * the inner solvers ([`solvers`]): backtracking gradient descent,
//!   Nesterov's accelerated gradient method and the Universal Fast Gradient
//!   Method, all with warm-startable Lipschitz estimates;
//! * the restart meta-schemes ([`restarts`]): scheduled restarts, Hölder
//!   scheduled restarts with decaying accuracy targets, restarts on a
//!   termination criterion, the logarithmic grid search over schedules and
//!   the monotone function-value heuristic;
//! * closed-form convergence envelopes ([`bounds`]) so empirical traces can be
//!   checked against their guarantees;
//! * test problems with known regularity and dataset loaders ([`problems`]).

pub mod bounds;
mod error;
pub mod oracle;
pub mod problems;
pub mod regularity;
pub mod restarts;
pub mod solvers;

pub use error::{Error, Result};
pub use oracle::{FnOracle, ProximalOracle};
pub use regularity::{derive_conditioning, DerivedConditioning, RegularityParams};
pub use solvers::{Trace, TraceEntry};

/// Dense real vector used for every iterate.
pub type Point = ndarray::Array1<f64>;
