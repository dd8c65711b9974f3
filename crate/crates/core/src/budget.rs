use serde::{Deserialize, Serialize};

/// Search limits shared by the exhaustive routines.
///
/// Every routine that would otherwise have to truncate its search returns
/// [`Error::Budget`](crate::Error::Budget) instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest square size for which full argmin sets are computed.
    pub max_det_size: usize,
    /// Sizes up to this bound use plain enumeration of `m!` permutations.
    pub exhaustive_det_size: usize,
    /// Cap on the number of optimal permutations returned by the assignment route.
    pub max_optima: usize,
    /// Node limit of the generator search behind Barvinok rank.
    pub barvinok_nodes: u64,
    /// Largest `n` for which the Birkhoff graph on `n!` vertices is built.
    pub max_birkhoff_n: usize,
    /// Largest leaf count for split enumeration (`2^(d+n)` subsets).
    pub max_leaves: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_det_size: 8,
            exhaustive_det_size: 8,
            max_optima: 1_000_000,
            barvinok_nodes: 5_000_000,
            max_birkhoff_n: 6,
            max_leaves: 14,
        }
    }
}

impl Budget {
    /// Budget with every limit multiplied by `factor` where that makes sense.
    pub fn scaled(factor: u64) -> Self {
        let b = Budget::default();
        Budget {
            max_optima: b.max_optima.saturating_mul(factor as usize),
            barvinok_nodes: b.barvinok_nodes.saturating_mul(factor),
            ..b
        }
    }
}
