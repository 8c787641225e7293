//! Theorem constants, per-instance verification and seeded sweeps.

pub mod constants;
mod report;
pub mod sweep;
pub mod verify;

pub use constants::{constants, TheoremConstants};
pub use report::{le_outward, BoundReport, TheoremId, Verdict, OUTWARD_TOLERANCE};
pub use sweep::{verify_sweep, SweepConfig, SweepInstance, SweepSummary, Tally};
pub use verify::{residual_constant, verify, VerifyInput, VerifyParams};
