//! Intermediate subgroups `A1 ≤ B ≤ A` and the sub-extension checks built
//! on them.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::perm::{Perm, PermGroup};
use super::triple::{is_exceptional_triple, validate_triple, ExcTriple};
use super::GroupError;

/// Least element of each left coset `r·sub` of `sub` in `group`.
fn transversal(group: &PermGroup, sub: &PermGroup) -> Vec<Perm> {
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for g in group.elements() {
        let coset = sub.left_coset(g);
        if seen.insert(coset[0].clone()) {
            reps.push(coset[0].clone());
        }
    }
    reps
}

/// All subgroups of `group` containing `bottom`, reached by repeatedly
/// joining one element of `choices`; sorted by order, then elements.
pub(crate) fn overgroups(bottom: &PermGroup, choices: &[Perm], cap: usize) -> Result<Vec<PermGroup>, GroupError> {
    let mut seen: HashSet<Vec<Perm>> = HashSet::from([bottom.elements().to_vec()]);
    let mut found = vec![bottom.clone()];
    let mut queue = VecDeque::from([bottom.clone()]);
    while let Some(b) = queue.pop_front() {
        for r in choices {
            if b.contains(r) {
                continue;
            }
            let c = b.join(r, cap)?;
            if seen.insert(c.elements().to_vec()) {
                found.push(c.clone());
                queue.push_back(c);
            }
        }
    }
    found.sort_by(|x, y| x.order().cmp(&y.order()).then_with(|| x.elements().cmp(y.elements())));
    Ok(found)
}

/// Every `B` with `A1 ≤ B ≤ A`.
pub fn intermediate_subgroups(t: &ExcTriple, cap: usize) -> Result<Vec<PermGroup>, GroupError> {
    let a1 = t.arith_stabilizer();
    overgroups(&a1, &transversal(t.arith(), &a1), cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubextReport {
    /// `[B : A1]`, the degree of the upper piece.
    pub upper_degree: usize,
    /// `[A : B]`, the degree of the lower piece.
    pub lower_degree: usize,
    pub whole: bool,
    pub upper: bool,
    pub lower: bool,
    /// `whole == (upper && lower)`.
    pub holds: bool,
}

/// The action of each generator on `blocks`, numbered by position.
fn restrict(gens: &[Perm], blocks: &[Vec<usize>], block_of: &[usize]) -> Vec<Perm> {
    gens.iter()
        .map(|g| {
            let images = blocks.iter().map(|b| block_of[g.apply(b[0])] as u32).collect();
            Perm::from_images(images).expect("action on a block system")
        })
        .collect()
}

fn restrict_one(g: &Perm, blocks: &[Vec<usize>], block_of: &[usize]) -> Perm {
    restrict(std::slice::from_ref(g), blocks, block_of).pop().expect("one generator")
}

/// Splits the extension at `B` and checks that it is exceptional exactly
/// when both pieces are.
///
/// The lower piece is `A` acting on the blocks `a·Δ`, where `Δ` is the
/// `B`-orbit of the base point; the upper piece is `B` acting on `Δ`.
pub fn subext_check(t: &ExcTriple, b: &PermGroup, cap: usize) -> Result<SubextReport, GroupError> {
    validate_triple(t).check_totally_ramified()?;
    let a1 = t.arith_stabilizer();
    if !a1.is_subgroup_of(b) || !b.is_subgroup_of(t.arith()) {
        return Err(GroupError::NotIntermediate);
    }
    let n = t.degree();

    let mut delta: Vec<usize> = b.elements().iter().map(|g| g.apply(t.base())).collect();
    delta.sort_unstable();
    delta.dedup();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![usize::MAX; n];
    for a in t.arith().elements() {
        let mut blk: Vec<usize> = delta.iter().map(|&x| a.apply(x)).collect();
        blk.sort_unstable();
        if block_of[blk[0]] == usize::MAX {
            for &x in &blk {
                block_of[x] = usize::MAX - 1;
            }
            blocks.push(blk);
        }
    }
    // base block first, then by least point
    blocks.sort_by_key(|blk| (!blk.contains(&t.base()), blk[0]));
    for (i, blk) in blocks.iter().enumerate() {
        for &x in blk {
            block_of[x] = i;
        }
    }
    let lower = ExcTriple::new(
        blocks.len(),
        &restrict(t.arith().gens(), &blocks, &block_of),
        &restrict(t.geom().gens(), &blocks, &block_of),
        restrict_one(t.frob(), &blocks, &block_of),
        0,
        cap,
    )?;

    let mut points = vec![t.base()];
    points.extend(delta.iter().copied().filter(|&x| x != t.base()));
    let singletons: Vec<Vec<usize>> = points.iter().map(|&x| vec![x]).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &x) in points.iter().enumerate() {
        index[x] = i;
    }
    let b_geom = b.intersection(t.geom());
    let frob_b = t
        .frob_coset()
        .into_iter()
        .find(|x| b.contains(x))
        .ok_or_else(|| GroupError::InvalidTriple("frob_meets_intermediate".into()))?;
    let upper = ExcTriple::new(
        points.len(),
        &restrict(b.gens(), &singletons, &index),
        &restrict(b_geom.gens(), &singletons, &index),
        restrict_one(&frob_b, &singletons, &index),
        0,
        cap,
    )?;

    let whole = is_exceptional_triple(t)?;
    let upper_exc = is_exceptional_triple(&upper)?;
    let lower_exc = is_exceptional_triple(&lower)?;
    Ok(SubextReport {
        upper_degree: upper.degree(),
        lower_degree: lower.degree(),
        whole,
        upper: upper_exc,
        lower: lower_exc,
        holds: whole == (upper_exc && lower_exc),
    })
}

/// No `B` with `A1 ≤ B ⊴ A` other than `A` itself.
pub fn galois_obstruction(t: &ExcTriple, cap: usize) -> Result<bool, GroupError> {
    let subs = intermediate_subgroups(t, cap)?;
    Ok(subs.iter().all(|b| b.order() == t.arith().order() || !b.is_normal_in(t.arith())))
}

/// `N_A(A1) = A1`.
pub fn aut_trivial(t: &ExcTriple) -> bool {
    let a1 = t.arith_stabilizer();
    t.arith().elements().iter().filter(|g| a1.is_normalized_by(g)).count() == a1.order()
}
