//! Crate-wide error type.

use std::io;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve bound must be at least {min}, got {got}")]
    BoundTooSmall { got: u64, min: u64 },

    #[error("segment size must be at least {min}, got {got}")]
    DeltaTooSmall { got: u64, min: u64 },

    #[error("segment [{left}, {right}] is invalid: need 2 <= left <= right")]
    InvalidSegment { left: u64, right: u64 },

    #[error("base primes reach {have} but the segment ending at {right} needs them up to {need}")]
    InsufficientBasePrimes { have: u64, need: u64, right: u64 },

    #[error("start must be at least {min}, got {got}")]
    StartTooSmall { got: u64, min: u64 },

    #[error("start {got} exceeds the supported ceiling of 2^60")]
    StartTooLarge { got: u64 },

    #[error("interval [{lo}, {lo}+{delta}) is outside the supported quadratic-form range")]
    IntervalOutOfRange { lo: u64, delta: u64 },

    #[error("interval is still being sieved; it must reach the done phase first")]
    NotDone,

    #[error("snapshot is malformed: {0}")]
    MalformedSnapshot(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
