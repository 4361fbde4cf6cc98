//! Memory caps for anything that materializes a dense operator.

use crate::error::{Error, Result};

/// Environment variable overriding [`Limits::max_bytes`].
pub const MEM_CAP_ENV: &str = "TOEPLIPZ_MEM_CAP_BYTES";

pub const DEFAULT_MAX_BYTES: u64 = 2 * 1024 * 1024 * 1024;
pub const DEFAULT_MAX_STRUCTURED_DIM: usize = 4096;

/// Caps consulted before allocating dense matrices or large work buffers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Upper bound on the bytes a single dense allocation may take.
    pub max_bytes: u64,
    /// Largest `n` for which an `n x n` structured matrix may be materialized.
    pub max_structured_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_bytes: DEFAULT_MAX_BYTES,
            max_structured_dim: DEFAULT_MAX_STRUCTURED_DIM,
        }
    }
}

impl Limits {
    /// Defaults, with `max_bytes` taken from `TOEPLIPZ_MEM_CAP_BYTES` when it parses.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(bytes) = std::env::var(MEM_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            limits.max_bytes = bytes;
        }
        limits
    }

    pub fn with_max_bytes(mut self, max_bytes: u64) -> Self {
        self.max_bytes = max_bytes;
        self
    }

    /// Fails when `count` elements of `elem_bytes` each would exceed the byte cap.
    pub fn check_elements(&self, what: &'static str, count: u128, elem_bytes: u128) -> Result<()> {
        let required = count.saturating_mul(elem_bytes);
        if required > self.max_bytes as u128 {
            return Err(Error::CapExceeded {
                what,
                required,
                cap: self.max_bytes,
            });
        }
        Ok(())
    }

    pub fn check_structured_dim(&self, n: usize) -> Result<()> {
        if n > self.max_structured_dim {
            return Err(Error::CapExceeded {
                what: "structured materialization",
                required: (n as u128) * (n as u128) * 16,
                cap: (self.max_structured_dim as u64).pow(2) * 16,
            });
        }
        Ok(())
    }
}
