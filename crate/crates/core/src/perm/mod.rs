//! Self-contained permutation-group engine: stabiliser chains, orbits,
//! cores, solvability, coset actions, overgroups and regular subgroups.

mod group;
mod permutation;
mod search;

pub use group::{PermutationGroup, StabChain};
pub use permutation::Permutation;
pub use search::{
    core_info, core_subgroup, coset_action, overgroups_up_to, regular_subgroup_search,
    CosetAction, RegularFlavor, RegularSearchOutcome, DEFAULT_COSET_INDEX_CAP,
    DEFAULT_OVERGROUP_INDEX_CAP, DEFAULT_REGULAR_SEARCH_BUDGET,
};
