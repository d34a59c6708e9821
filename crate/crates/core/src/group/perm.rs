use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// Default cap on the order of an enumerated group.
pub const GROUP_CAP: usize = 100_000;

/// A permutation of `0..n` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return Err(GroupError::InvalidPerm(images));
            }
            seen[i as usize] = true;
        }
        Ok(Perm(images))
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[0]` on `0..n`.
    pub fn cycle(n: usize, c: &[u32]) -> Perm {
        let mut img: Vec<u32> = (0..n as u32).collect();
        for (i, &x) in c.iter().enumerate() {
            img[x as usize] = c[(i + 1) % c.len()];
        }
        Perm::from_images(img).expect("valid cycle")
    }

    /// `i -> (a*i + c) mod n`.
    pub fn affine(n: usize, a: u64, c: u64) -> Perm {
        let n64 = n as u64;
        Perm((0..n64).map(|i| ((a * i + c) % n64) as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `by ∘ self ∘ by^{-1}`.
    pub fn conjugate_by(&self, by: &Perm) -> Perm {
        by.compose(self).compose(&by.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn pow(&self, e: usize) -> Perm {
        (0..e).fold(Perm::identity(self.degree()), |acc, _| acc.compose(self))
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &j)| i as u32 == j).count()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A set on which permutations of `0..n` act.
pub trait Action {
    fn size(&self) -> usize;
    fn act(&self, g: &Perm, x: usize) -> usize;

    fn fixed_count(&self, g: &Perm) -> usize {
        (0..self.size()).filter(|&x| self.act(g, x) == x).count()
    }
}

/// The natural action on `0..n`.
#[derive(Clone, Copy, Debug)]
pub struct OnPoints(pub usize);

impl Action for OnPoints {
    fn size(&self) -> usize {
        self.0
    }

    fn act(&self, g: &Perm, x: usize) -> usize {
        g.apply(x)
    }

    fn fixed_count(&self, g: &Perm) -> usize {
        g.fixed_points()
    }
}

/// The diagonal action on ordered pairs of another action's domain;
/// `(i, j)` is encoded as `i * size + j`.
#[derive(Clone, Copy, Debug)]
pub struct OnPairs<A>(pub A);

impl<A: Action> Action for OnPairs<A> {
    fn size(&self) -> usize {
        self.0.size() * self.0.size()
    }

    fn act(&self, g: &Perm, x: usize) -> usize {
        let s = self.0.size();
        self.0.act(g, x / s) * s + self.0.act(g, x % s)
    }
}

/// A finite permutation group with its full element list. Equality compares
/// element sets, not generators.
#[derive(Clone)]
pub struct PermGroup {
    n: usize,
    gens: Vec<Perm>,
    /// Sorted.
    elements: Vec<Perm>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

impl std::hash::Hash for PermGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.elements.hash(state);
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(n={}, order={}, gens={:?})", self.n, self.elements.len(), self.gens)
    }
}

/// Breadth-first closure of `gens` under composition.
pub fn close_group(n: usize, gens: &[Perm], cap: usize) -> Result<PermGroup, GroupError> {
    for g in gens {
        if g.degree() != n {
            return Err(GroupError::DegreeMismatch { expected: n, found: g.degree() });
        }
    }
    let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let h = g.compose(&e);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(GroupError::GroupTooLarge { cap });
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort();
    Ok(PermGroup { n, gens, elements })
}

impl PermGroup {
    pub fn trivial(n: usize) -> PermGroup {
        PermGroup { n, gens: Vec::new(), elements: vec![Perm::identity(n)] }
    }

    pub fn symmetric(n: usize, cap: usize) -> Result<PermGroup, GroupError> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::cycle(n, &[0, 1]));
            gens.push(Perm::cycle(n, &(0..n as u32).collect::<Vec<_>>()));
        }
        close_group(n, &gens, cap)
    }

    /// Wraps a set already closed under composition, choosing a small
    /// generating set greedily.
    pub fn from_elements(n: usize, mut elements: Vec<Perm>) -> PermGroup {
        elements.sort();
        elements.dedup();
        let mut gens = Vec::new();
        let mut current = PermGroup::trivial(n);
        for e in &elements {
            if !current.contains(e) {
                gens.push(e.clone());
                current = close_group(n, &gens, usize::MAX).expect("no cap");
            }
        }
        debug_assert_eq!(current.elements, elements, "element set is not a group");
        PermGroup { n, gens, elements }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.n == other.n && self.gens.iter().all(|g| other.contains(g))
    }

    /// `self ⊴ other`.
    pub fn is_normal_in(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other)
            && other.gens.iter().all(|a| self.gens.iter().all(|g| self.contains(&g.conjugate_by(a))))
    }

    /// Whether `g` normalizes `self`.
    pub fn is_normalized_by(&self, g: &Perm) -> bool {
        self.gens.iter().all(|h| self.contains(&h.conjugate_by(g)))
    }

    pub fn stabilizer(&self, point: usize) -> PermGroup {
        let els = self.elements.iter().filter(|g| g.apply(point) == point).cloned().collect();
        PermGroup::from_elements(self.n, els)
    }

    pub fn intersection(&self, other: &PermGroup) -> PermGroup {
        let els = self.elements.iter().filter(|g| other.contains(g)).cloned().collect();
        PermGroup::from_elements(self.n, els)
    }

    /// `⟨self, extra⟩`.
    pub fn join(&self, extra: &Perm, cap: usize) -> Result<PermGroup, GroupError> {
        let mut gens = self.gens.clone();
        gens.push(extra.clone());
        close_group(self.n, &gens, cap)
    }

    /// Least `j >= 1` with `g^j ∈ self`.
    pub fn coset_order(&self, g: &Perm) -> usize {
        let mut cur = g.clone();
        let mut j = 1;
        while !self.contains(&cur) {
            cur = cur.compose(g);
            j += 1;
        }
        j
    }

    /// The coset `g ∘ self`, sorted.
    pub fn left_coset(&self, g: &Perm) -> Vec<Perm> {
        let mut c: Vec<Perm> = self.elements.iter().map(|h| g.compose(h)).collect();
        c.sort();
        c
    }

    /// The coset `self ∘ g`, sorted.
    pub fn right_coset(&self, g: &Perm) -> Vec<Perm> {
        let mut c: Vec<Perm> = self.elements.iter().map(|h| h.compose(g)).collect();
        c.sort();
        c
    }

    pub fn orbits<A: Action>(&self, action: &A) -> Vec<Vec<usize>> {
        orbits(&self.gens, action)
    }

    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits(&OnPoints(self.n))
    }

    pub fn is_transitive(&self) -> bool {
        self.point_orbits().len() == 1
    }

    pub fn is_transitive_on<A: Action>(&self, action: &A) -> bool {
        self.orbits(action).len() == 1
    }
}

/// Orbits of the group generated by `gens`; each orbit sorted, orbits
/// ordered by least element.
pub fn orbits<A: Action>(gens: &[Perm], action: &A) -> Vec<Vec<usize>> {
    let size = action.size();
    let mut label = vec![usize::MAX; size];
    let mut out = Vec::new();
    for start in 0..size {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in gens {
                let y = action.act(g, x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_examples() {
        let c3 = Perm::cycle(3, &[0, 1, 2]);
        assert_eq!(close_group(3, std::slice::from_ref(&c3), GROUP_CAP).unwrap().order(), 3);
        let s3 = close_group(3, &[c3, Perm::cycle(3, &[0, 1])], GROUP_CAP).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(close_group(1, &[], GROUP_CAP).unwrap().order(), 1);
        assert_eq!(PermGroup::symmetric(5, GROUP_CAP).unwrap().order(), 120);
        assert_eq!(PermGroup::symmetric(6, 100), Err(GroupError::GroupTooLarge { cap: 100 }));
    }

    #[test]
    fn perm_algebra() {
        let a = Perm::cycle(4, &[0, 1, 2]);
        let b = Perm::cycle(4, &[2, 3]);
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.compose(&b).apply(3), 0);
        assert_eq!(a.pow(3), Perm::identity(4));
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert_eq!(Perm::affine(5, 2, 1).images(), &[1, 3, 0, 2, 4]);
    }

    #[test]
    fn orbit_structure() {
        let g = close_group(5, &[Perm::cycle(5, &[0, 2]), Perm::cycle(5, &[1, 3, 4])], GROUP_CAP).unwrap();
        assert_eq!(g.point_orbits(), vec![vec![0, 2], vec![1, 3, 4]]);
        assert!(!g.is_transitive());
        let pairs = g.orbits(&OnPairs(OnPoints(5)));
        assert_eq!(pairs.iter().map(Vec::len).sum::<usize>(), 25);
    }

    #[test]
    fn subgroups_and_normality() {
        let s3 = PermGroup::symmetric(3, GROUP_CAP).unwrap();
        let a3 = close_group(3, &[Perm::cycle(3, &[0, 1, 2])], GROUP_CAP).unwrap();
        let t = close_group(3, &[Perm::cycle(3, &[0, 1])], GROUP_CAP).unwrap();
        assert!(a3.is_normal_in(&s3));
        assert!(t.is_subgroup_of(&s3) && !t.is_normal_in(&s3));
        assert_eq!(s3.stabilizer(2), t);
        assert_eq!(s3.intersection(&a3), a3);
        assert_eq!(a3.coset_order(&Perm::cycle(3, &[0, 1])), 2);
    }
}
