//! Common orbits of a group and a normal subgroup with cyclic quotient.

use serde::Serialize;

use super::perm::{orbits, Action, OnPairs, Perm, PermGroup};
use super::GroupError;

/// Checks `sub ⊴ group` with `group / sub` cyclic and generated by
/// `sigma · sub`.
pub fn check_cyclic_quotient(group: &PermGroup, sub: &PermGroup, sigma: &Perm) -> Result<(), GroupError> {
    if !sub.is_normal_in(group) {
        return Err(GroupError::NotNormal);
    }
    if !group.contains(sigma) || sub.coset_order(sigma) != group.order() / sub.order() {
        return Err(GroupError::NotGenerator);
    }
    Ok(())
}

/// Elements `σ` of `group` with `group = ⟨sub, σ⟩`, for `sub ⊴ group`.
pub fn quotient_generators<'a>(group: &'a PermGroup, sub: &'a PermGroup) -> impl Iterator<Item = &'a Perm> {
    let index = group.order() / sub.order();
    group.elements().iter().filter(move |s| sub.coset_order(s) == index)
}

/// Number of `H1`-orbits that are also `H2`-orbits, by averaging fixed
/// points over the generating coset `σ H2`.
pub fn burnside_common_orbits<A: Action>(
    h1: &PermGroup,
    h2: &PermGroup,
    sigma: &Perm,
    action: &A,
) -> Result<usize, GroupError> {
    check_cyclic_quotient(h1, h2, sigma)?;
    let total: usize = h2.elements().iter().map(|h| action.fixed_count(&sigma.compose(h))).sum();
    if !total.is_multiple_of(h2.order()) {
        return Err(GroupError::NonIntegralCount { total, order: h2.order() });
    }
    Ok(total / h2.order())
}

/// `H1`-orbits that are single `H2`-orbits, computed from both orbit
/// partitions directly.
pub fn common_orbits_direct<A: Action>(h1: &PermGroup, h2: &PermGroup, action: &A) -> Vec<Vec<usize>> {
    let small = orbits(h2.gens(), action);
    orbits(h1.gens(), action).into_iter().filter(|o| small.contains(o)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    /// The diagonal is the unique common orbit on `T × T`.
    pub diagonal_unique: bool,
    /// Every `σ` with `H1 = ⟨H2, σ⟩` has exactly one fixed point.
    pub unique_fixed: bool,
    pub at_most_one_fixed: bool,
    pub at_least_one_fixed: bool,
    pub agreement: bool,
}

/// Evaluates the four equivalent fixed-point conditions for
/// `H2 ⊴ H1` with cyclic quotient and `H2` transitive on `T`.
pub fn count_equiv<A: Action + Copy>(h1: &PermGroup, h2: &PermGroup, action: A) -> Result<CountReport, GroupError> {
    if !h2.is_normal_in(h1) {
        return Err(GroupError::NotNormal);
    }
    let gens: Vec<&Perm> = quotient_generators(h1, h2).collect();
    if gens.is_empty() {
        return Err(GroupError::NotCyclic);
    }
    if !h2.is_transitive_on(&action) {
        return Err(GroupError::NotTransitive);
    }
    let common = common_orbits_direct(h1, h2, &OnPairs(action));
    let diagonal: Vec<usize> = (0..action.size()).map(|i| i * action.size() + i).collect();
    let diagonal_unique = common == [diagonal];
    let fixed: Vec<usize> = gens.iter().map(|s| action.fixed_count(s)).collect();
    let unique_fixed = fixed.iter().all(|&c| c == 1);
    let at_most_one_fixed = fixed.iter().all(|&c| c <= 1);
    let at_least_one_fixed = fixed.iter().all(|&c| c >= 1);
    let items = [diagonal_unique, unique_fixed, at_most_one_fixed, at_least_one_fixed];
    Ok(CountReport {
        diagonal_unique,
        unique_fixed,
        at_most_one_fixed,
        at_least_one_fixed,
        agreement: items.iter().all(|&b| b == items[0]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::perm::{close_group, OnPoints, GROUP_CAP};

    fn s3() -> PermGroup {
        PermGroup::symmetric(3, GROUP_CAP).unwrap()
    }

    fn c3() -> PermGroup {
        close_group(3, &[Perm::cycle(3, &[0, 1, 2])], GROUP_CAP).unwrap()
    }

    #[test]
    fn burnside_examples() {
        let t1 = PermGroup::trivial(1);
        assert_eq!(burnside_common_orbits(&t1, &t1, &Perm::identity(1), &OnPoints(1)), Ok(1));

        let tau = Perm::cycle(3, &[0, 1]);
        assert_eq!(burnside_common_orbits(&s3(), &c3(), &tau, &OnPoints(3)), Ok(1));
        assert_eq!(common_orbits_direct(&s3(), &c3(), &OnPoints(3)), vec![vec![0, 1, 2]]);

        assert_eq!(burnside_common_orbits(&c3(), &c3(), &Perm::identity(3), &OnPoints(3)), Ok(1));
        assert_eq!(common_orbits_direct(&c3(), &c3(), &OnPoints(3)).len(), 1);
    }

    #[test]
    fn burnside_errors() {
        let tau = Perm::cycle(3, &[0, 1]);
        let t = close_group(3, std::slice::from_ref(&tau), GROUP_CAP).unwrap();
        assert_eq!(burnside_common_orbits(&s3(), &t, &tau, &OnPoints(3)), Err(GroupError::NotNormal));
        // a 3-cycle lies in A_3, so it does not generate S_3 / A_3
        let rho = Perm::cycle(3, &[0, 1, 2]);
        assert_eq!(burnside_common_orbits(&s3(), &c3(), &rho, &OnPoints(3)), Err(GroupError::NotGenerator));
    }

    #[test]
    fn count_examples() {
        // S_3 over A_3: transpositions each fix one point
        let r = count_equiv(&s3(), &c3(), OnPoints(3)).unwrap();
        assert!(r.agreement && r.unique_fixed);
        // translations mod 3 over themselves: identity fixes 3, shifts fix 0
        let r = count_equiv(&c3(), &c3(), OnPoints(3)).unwrap();
        assert!(r.agreement && !r.diagonal_unique && !r.at_least_one_fixed);
        let t1 = PermGroup::trivial(1);
        let r = count_equiv(&t1, &t1, OnPoints(1)).unwrap();
        assert!(r.agreement && r.unique_fixed);
        let triv = PermGroup::trivial(3);
        assert_eq!(count_equiv(&c3(), &triv, OnPoints(3)), Err(GroupError::NotTransitive));
    }
}
