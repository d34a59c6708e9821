//! Small exhaustive corpora of triples built from subgroup lattices.

use std::collections::HashSet;

use super::lattice::overgroups;
use super::orbits::quotient_generators;
use super::perm::{Perm, PermGroup};
use super::triple::ExcTriple;
use super::GroupError;

/// Every subgroup of `group`, sorted by order then elements.
pub fn all_subgroups(group: &PermGroup, cap: usize) -> Result<Vec<PermGroup>, GroupError> {
    // one generator per cyclic subgroup is enough to reach every subgroup
    let mut cyclic_seen = HashSet::new();
    let mut choices = Vec::new();
    for g in group.elements() {
        if g.is_identity() {
            continue;
        }
        let c = PermGroup::trivial(group.degree()).join(g, cap)?;
        if cyclic_seen.insert(c.elements().to_vec()) {
            choices.push(g.clone());
        }
    }
    overgroups(&PermGroup::trivial(group.degree()), &choices, cap)
}

fn relabelings(n: usize) -> Vec<Perm> {
    PermGroup::symmetric(n, usize::MAX).expect("no cap").elements().to_vec()
}

/// Least conjugate element list, used to identify groups up to relabeling.
fn conjugacy_key(g: &PermGroup, relabel: &[Perm]) -> Vec<Perm> {
    relabel
        .iter()
        .map(|pi| {
            let mut els: Vec<Perm> = g.elements().iter().map(|x| x.conjugate_by(pi)).collect();
            els.sort();
            els
        })
        .min()
        .expect("nonempty")
}

/// Transitive subgroups of `S_n`, one per conjugacy class, sorted by order.
pub fn transitive_groups(n: usize, cap: usize) -> Result<Vec<PermGroup>, GroupError> {
    let sym = PermGroup::symmetric(n, cap)?;
    let relabel = relabelings(n);
    let mut keys = HashSet::new();
    let mut out = Vec::new();
    for g in all_subgroups(&sym, cap)? {
        if g.is_transitive() && keys.insert(conjugacy_key(&g, &relabel)) {
            out.push(g);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusOptions {
    pub max_degree: usize,
    /// Keep only triples with `G` transitive.
    pub totally_ramified: bool,
    pub cap: usize,
}

/// Every triple `(A, G, frob)` with `A` a transitive group of degree at
/// most `max_degree` (up to conjugacy), `G ⊴ A` with `A/G` cyclic, and one
/// `frob` (the least element) per generating coset of `G`.
pub fn triple_corpus(opts: CorpusOptions) -> Result<Vec<ExcTriple>, GroupError> {
    let mut out = Vec::new();
    for n in 1..=opts.max_degree {
        for a in transitive_groups(n, opts.cap)? {
            for g in all_subgroups(&a, opts.cap)? {
                if !g.is_normal_in(&a) || (opts.totally_ramified && !g.is_transitive()) {
                    continue;
                }
                let mut frobs: Vec<Perm> =
                    quotient_generators(&a, &g).map(|s| g.left_coset(s).swap_remove(0)).collect();
                frobs.sort();
                frobs.dedup();
                for f in frobs {
                    out.push(ExcTriple::from_groups(a.clone(), g.clone(), f, 0)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::perm::GROUP_CAP;

    #[test]
    fn subgroup_counts() {
        let s3 = PermGroup::symmetric(3, GROUP_CAP).unwrap();
        assert_eq!(all_subgroups(&s3, GROUP_CAP).unwrap().len(), 6);
        let s4 = PermGroup::symmetric(4, GROUP_CAP).unwrap();
        assert_eq!(all_subgroups(&s4, GROUP_CAP).unwrap().len(), 30);
    }

    #[test]
    fn transitive_group_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| transitive_groups(n, GROUP_CAP).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 5]);
    }

    #[test]
    fn corpus_is_valid() {
        let opts = CorpusOptions { max_degree: 4, totally_ramified: true, cap: GROUP_CAP };
        let corpus = triple_corpus(opts).unwrap();
        assert!(!corpus.is_empty());
        for t in &corpus {
            assert!(crate::group::validate_triple(t).all_pass(), "{t:?}");
        }
    }
}
