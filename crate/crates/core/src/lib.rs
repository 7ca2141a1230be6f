//! Two-dimensional discrete-time quantum walk with a two-qubit Bell-basis
//! coin: exact simulation, closed-form amplitudes, entanglement and Rényi
//! measures, tail fits, and the continuum Dirac limit.

pub mod asymptotics;
pub mod closed_form;
pub mod coin;
pub mod continuum;
pub mod error;
pub mod hypergeometric;
pub mod linalg;
pub mod measures;
pub mod presets;
pub mod quadrature;
pub mod walk;

pub use coin::{build_coin, build_coin_from_bell, CoinMatrix, CoinParams};
pub use error::{Result, WalkError};
pub use walk::{initial_state, simulate, step, Evolution, SpinVector, WalkState};
