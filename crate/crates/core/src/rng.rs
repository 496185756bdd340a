//! Project-wide deterministic PRNG choice.
//!
//! Every random draw in the workspace comes from a ChaCha8 stream seeded via
//! `seed_from_u64`, so a 64-bit seed fully determines all behavior and the
//! stream is identical across platforms. Golden test files depend on this;
//! do not swap the generator.

pub use rand_chacha::ChaCha8Rng as SimRng;

/// Domain separation tags so independent streams (channel loss vs. sensor
/// noise) can be derived from one run seed without interfering.
pub const CHANNEL_STREAM_TAG: u64 = 0x6368616e;
pub const NOISE_STREAM_TAG: u64 = 0x6e6f6973;
