//! Small self-contained constructions: the diagonal argument, Collatz
//! trajectories, Thue-Morse words, rational brackets for computable reals
//! and the practical scaling law.

pub mod collatz;
pub mod diagonal;
pub mod reals;
pub mod scaling;
pub mod words;

pub use collatz::{collatz_steps, collatz_verify_range, CollatzError, CollatzOutcome, RangeReport};
pub use diagonal::{diagonal, BitTable, TableError};
pub use reals::{computable_real_bounds, sqrt2_approximator, RealBoundsError};
pub use scaling::{scaling_nmax, ScalingError, ScalingLaw};
pub use words::{is_cube_free, is_cube_free_naive, thue_morse, thue_morse_doubling, Cube, WordError, MAX_THUE_MORSE_K};
