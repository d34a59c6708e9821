//! Permutation groups and the group-level shadows of exceptional
//! extensions: arithmetic group `A`, geometric group `G ⊴ A`, a Frobenius
//! coset generating `A / G`, and the point stabilizers `A1`, `G1`.

mod corpus;
mod lattice;
mod orbits;
mod perm;
mod triple;

pub use corpus::{all_subgroups, transitive_groups, triple_corpus, CorpusOptions};
pub use lattice::{aut_trivial, galois_obstruction, intermediate_subgroups, subext_check, SubextReport};
pub use orbits::{
    burnside_common_orbits, check_cyclic_quotient, common_orbits_direct, count_equiv, quotient_generators, CountReport,
};
pub use perm::{close_group, orbits, Action, OnPairs, OnPoints, Perm, PermGroup, GROUP_CAP};
pub use triple::{
    is_exceptional_triple, nt_ram_battery, t_ram_equiv, validate_triple, ExcTriple, NtRamReport, TRamReport,
    TripleDiagnostics, TripleSpec,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("not a permutation: {0:?}")]
    InvalidPerm(Vec<u32>),
    #[error("permutation of degree {found} where degree {expected} was expected")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group order exceeds cap {cap}")]
    GroupTooLarge { cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("element does not generate the quotient")]
    NotGenerator,
    #[error("quotient is not cyclic")]
    NotCyclic,
    #[error("action is not transitive")]
    NotTransitive,
    #[error("fixed-point sum {total} is not divisible by {order}")]
    NonIntegralCount { total: usize, order: usize },
    #[error("invalid triple: {0} failed")]
    InvalidTriple(String),
    #[error("subgroup does not lie between the point stabilizer and the whole group")]
    NotIntermediate,
}
