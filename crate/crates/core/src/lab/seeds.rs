//! Seed splitting.
//!
//! Every random stream of an experiment is derived from the single manifest seed:
//!
//! ```text
//! stream_seed = splitmix64(master_seed XOR fnv1a64(stream_label))
//! ```
//!
//! with the labels `"sequence"`, `"target"` and `"holder"`. Explicit per-stream
//! seeds in a config take precedence over derived ones.

use serde::{Deserialize, Serialize};

pub const SEQUENCE: &str = "sequence";
pub const TARGET: &str = "target";
pub const HOLDER: &str = "holder";

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, label: &str) -> u64 {
    splitmix64(master ^ fnv1a64(label.as_bytes()))
}

/// Seeds actually used by a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedSeeds {
    pub master: u64,
    pub sequence: u64,
    pub target: u64,
    pub holder: u64,
}

impl ResolvedSeeds {
    pub fn from_master(master: u64) -> Self {
        ResolvedSeeds {
            master,
            sequence: derive_seed(master, SEQUENCE),
            target: derive_seed(master, TARGET),
            holder: derive_seed(master, HOLDER),
        }
    }
}
