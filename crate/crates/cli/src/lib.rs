//! Library surface of the sievekit CLI, split out so the command logic and
//! the output encodings are testable without spawning the binary.

pub mod commands;
pub mod output;

pub use commands::{
    cmd_bench, cmd_count, cmd_factor, cmd_primes, cmd_profile, EngineArg, FormatArg, UsageError,
};
pub use output::{write_text, Bitmap, BITMAP_MAGIC};
