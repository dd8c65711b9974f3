//! Rank-two geometry: bicolored trees, splits and tropical Plücker vectors.

mod bicoloring;
mod plucker;
mod split;
mod tree;

pub use bicoloring::{
    admissible_bicoloring, all_binary_topologies, cherry_count, count_bicolorings, count_bicolorings_brute_force,
    elementary_splits, insert_leaf, AttachPoint, Bicoloring,
};
pub use plucker::{
    bicolored_reading, first_four_point_violation, four_point_check, plucker_from_tree, project_plucker,
    tree_from_plucker, PlueckerVector,
};
pub use split::{split_matrix, split_weight, splits_compatible, LeafNames, Split, MAX_LEAVES};
pub use tree::{bicolored_tree_from_matrix, positivity_rank2, BicoloredTree, PhyloTree, TreeGraph};

pub fn is_caterpillar(tree: &BicoloredTree) -> bool {
    tree.is_caterpillar()
}
