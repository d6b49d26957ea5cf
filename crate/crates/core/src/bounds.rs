use serde::{Deserialize, Serialize};

/// Search limits shared by every bounded procedure. Serialized into every
/// report that depends on them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    /// Number of enumerator objects probed in procedural categories.
    pub probes: usize,
    /// Hard stage cap for the cone saturation chain.
    pub depth: usize,
    /// Candidate-assignment budget for isomorphism searches.
    pub iso_budget: u64,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { probes: 16, depth: 4, iso_budget: 1_000_000, seed: 0 }
    }
}

impl Bounds {
    pub fn with_probes(mut self, probes: usize) -> Self {
        self.probes = probes;
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
