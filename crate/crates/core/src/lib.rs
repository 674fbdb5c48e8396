//! Calculus on time scales: delta derivatives and integrals, repeated
//! integration, and Riemann-Liouville fractional operators built on the
//! `(t - sigma(s))^(alpha - 1)` kernel.
//!
//! A [`TimeScale`] is a finite union of closed intervals and isolated
//! points. Functions on it implement [`ScaleFunction`]; plain closures and
//! parsed [`Expr`] values both do.
//!
//! ```
//! use tempus::{frac_integral, FracOptions, FracOrder, TimeScale};
//!
//! let z = TimeScale::integers(0, 5).unwrap();
//! let one = |_: f64| 1.0;
//! let v = frac_integral(&one, &z, 0.0, 3.0, FracOrder::new(2.0).unwrap(), &FracOptions::default());
//! assert_eq!(v.unwrap(), 3.0);
//! ```

pub mod delta_calc;
pub mod error;
pub mod expr;
pub mod fractional;
pub mod parallel;
pub mod quadrature;
pub mod timescale;
pub mod verify;

pub use delta_calc::{
    delta_derivative, delta_integral, repeated_integral, Fallible, Labelled, ScaleFunction,
};
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use fractional::{
    binomial_expanded_g, caputo_derivative, caputo_derivative_detailed, frac_integral,
    frac_integral_detailed, frac_integral_sweep, gamma, iterated_delta_derivative, rl_derivative,
    rl_derivative_detailed, FracOptions, FracOrder, FracValue, KernelVariant, ZeroPowerPolicy,
};
pub use parallel::Execution;
pub use quadrature::QuadratureConfig;
pub use timescale::{Generator, PointClass, ScaleSpec, Segment, TimeScale};
