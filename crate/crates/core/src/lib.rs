//! Computability and algorithmic-information workbench.
//!
//! Machine models ([`tm`], [`universal`], [`chaitin`]), their textual form
//! ([`mdl`]), prefix-free codes ([`prefix`]), budgeted estimators for
//! complexity and halting probability ([`ait`]), Busy Beaver enumeration
//! ([`beaver`]), small constructions ([`explorations`]) and empirical scaling
//! ([`profiler`]).

pub mod ait;
pub mod beaver;
pub mod bits;
pub mod chaitin;
pub mod dyadic;
pub mod explorations;
pub mod mdl;
pub mod prefix;
pub mod profiler;
pub mod tm;
pub mod universal;

pub use bits::BitString;
pub use dyadic::DyadicRational;
pub use tm::{Certificate, Halt, Machine, Move, Next, Rule, RunOutcome, Symbol};
