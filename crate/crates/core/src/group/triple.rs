use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::orbits::{common_orbits_direct, quotient_generators};
use super::perm::{close_group, OnPairs, OnPoints, Perm, PermGroup};
use super::GroupError;

/// Arithmetic group `A`, geometric group `G`, a Frobenius element whose
/// coset `frob·G` generates `A / G`, and the base point fixed by `A1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcTriple {
    n: usize,
    arith: PermGroup,
    geom: PermGroup,
    frob: Perm,
    base: usize,
}

/// On-disk form of a triple; permutations in 0-indexed one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleSpec {
    pub n: usize,
    #[serde(rename = "gens_A")]
    pub gens_a: Vec<Vec<u32>>,
    #[serde(rename = "gens_G")]
    pub gens_g: Vec<Vec<u32>>,
    pub frob: Vec<u32>,
    #[serde(default)]
    pub base: usize,
}

fn to_perm(n: usize, images: &[u32]) -> Result<Perm, GroupError> {
    let p = Perm::from_images(images.to_vec())?;
    if p.degree() != n {
        return Err(GroupError::DegreeMismatch { expected: n, found: p.degree() });
    }
    Ok(p)
}

impl ExcTriple {
    /// Closes both generating sets. Structural conditions are checked by
    /// [`validate_triple`], not here.
    pub fn new(
        n: usize,
        gens_a: &[Perm],
        gens_g: &[Perm],
        frob: Perm,
        base: usize,
        cap: usize,
    ) -> Result<ExcTriple, GroupError> {
        let arith = close_group(n, gens_a, cap)?;
        let geom = close_group(n, gens_g, cap)?;
        ExcTriple::from_groups(arith, geom, frob, base)
    }

    pub fn from_groups(arith: PermGroup, geom: PermGroup, frob: Perm, base: usize) -> Result<ExcTriple, GroupError> {
        let n = arith.degree();
        if geom.degree() != n {
            return Err(GroupError::DegreeMismatch { expected: n, found: geom.degree() });
        }
        if frob.degree() != n {
            return Err(GroupError::DegreeMismatch { expected: n, found: frob.degree() });
        }
        if n == 0 || base >= n {
            return Err(GroupError::InvalidTriple("base".into()));
        }
        Ok(ExcTriple { n, arith, geom, frob, base })
    }

    pub fn from_spec(spec: &TripleSpec, cap: usize) -> Result<ExcTriple, GroupError> {
        let n = spec.n;
        let ga = spec.gens_a.iter().map(|g| to_perm(n, g)).collect::<Result<Vec<_>, _>>()?;
        let gg = spec.gens_g.iter().map(|g| to_perm(n, g)).collect::<Result<Vec<_>, _>>()?;
        ExcTriple::new(n, &ga, &gg, to_perm(n, &spec.frob)?, spec.base, cap)
    }

    /// Sorted, deduplicated generators and the least element of `frob·G`.
    pub fn canonical_spec(&self) -> TripleSpec {
        let gens = |g: &PermGroup| {
            let mut v: Vec<Vec<u32>> = g.gens().iter().map(|p| p.images().to_vec()).collect();
            v.sort();
            v.dedup();
            v
        };
        TripleSpec {
            n: self.n,
            gens_a: gens(&self.arith),
            gens_g: gens(&self.geom),
            frob: self.frob_coset()[0].images().to_vec(),
            base: self.base,
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn arith(&self) -> &PermGroup {
        &self.arith
    }

    pub fn geom(&self) -> &PermGroup {
        &self.geom
    }

    pub fn frob(&self) -> &Perm {
        &self.frob
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// `A1`, the stabilizer of the base point in `A`.
    pub fn arith_stabilizer(&self) -> PermGroup {
        self.arith.stabilizer(self.base)
    }

    /// `G1 = G ∩ A1`.
    pub fn geom_stabilizer(&self) -> PermGroup {
        self.geom.stabilizer(self.base)
    }

    /// `Φ = frob·G`, sorted.
    pub fn frob_coset(&self) -> Vec<Perm> {
        self.geom.left_coset(&self.frob)
    }

    /// Transports the triple along the relabeling `pi` of the points.
    pub fn relabel(&self, pi: &Perm) -> Result<ExcTriple, GroupError> {
        let conj = |g: &PermGroup| g.gens().iter().map(|h| h.conjugate_by(pi)).collect::<Vec<_>>();
        let cap = self.arith.order().max(1);
        ExcTriple::new(
            self.n,
            &conj(&self.arith),
            &conj(&self.geom),
            self.frob.conjugate_by(pi),
            pi.apply(self.base),
            cap,
        )
    }

    /// Replaces `frob` by another element of `A`.
    pub fn with_frob(&self, frob: Perm) -> ExcTriple {
        ExcTriple { frob, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleDiagnostics {
    pub geom_in_arith: bool,
    pub geom_normal: bool,
    pub frob_in_arith: bool,
    pub cyclic_quotient: bool,
    pub arith_transitive: bool,
    /// `G` transitive, equivalently the extension is totally ramified.
    pub totally_ramified: bool,
}

impl TripleDiagnostics {
    fn structural(&self) -> [(&'static str, bool); 5] {
        [
            ("geom_in_arith", self.geom_in_arith),
            ("geom_normal", self.geom_normal),
            ("frob_in_arith", self.frob_in_arith),
            ("cyclic_quotient", self.cyclic_quotient),
            ("arith_transitive", self.arith_transitive),
        ]
    }

    /// Everything except total ramification.
    pub fn check(&self) -> Result<(), GroupError> {
        match self.structural().iter().find(|(_, ok)| !ok) {
            Some((name, _)) => Err(GroupError::InvalidTriple(name.to_string())),
            None => Ok(()),
        }
    }

    pub fn check_totally_ramified(&self) -> Result<(), GroupError> {
        self.check()?;
        if !self.totally_ramified {
            return Err(GroupError::InvalidTriple("totally_ramified".into()));
        }
        Ok(())
    }

    pub fn all_pass(&self) -> bool {
        self.check_totally_ramified().is_ok()
    }
}

pub fn validate_triple(t: &ExcTriple) -> TripleDiagnostics {
    let geom_in_arith = t.geom.is_subgroup_of(&t.arith);
    let geom_normal = t.geom.is_normal_in(&t.arith);
    let frob_in_arith = t.arith.contains(&t.frob);
    let cyclic_quotient =
        geom_normal && frob_in_arith && t.geom.coset_order(&t.frob) == t.arith.order() / t.geom.order();
    TripleDiagnostics {
        geom_in_arith,
        geom_normal,
        frob_in_arith,
        cyclic_quotient,
        arith_transitive: t.arith.is_transitive(),
        totally_ramified: t.geom.is_transitive(),
    }
}

/// The five equivalent forms of total ramification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TRamReport {
    /// `[A : A1] = [G : G1]`.
    pub index_eq: bool,
    /// `[A1 : G1] = [A : G]`.
    pub stabilizer_index_eq: bool,
    /// `A1` meets every coset of `G`.
    pub image_full: bool,
    /// `G/G1 -> A/A1` is onto.
    pub coset_map_onto: bool,
    pub geom_transitive: bool,
    pub agreement: bool,
}

/// Requires `G ≤ A`; transitivity of `G` is what is being tested.
pub fn t_ram_equiv(t: &ExcTriple) -> TRamReport {
    let (a, g) = (&t.arith, &t.geom);
    let a1 = t.arith_stabilizer();
    let g1 = t.geom_stabilizer();
    let index_eq = a.order() / a1.order() == g.order() / g1.order();
    let stabilizer_index_eq = a1.order() / g1.order() == a.order() / g.order();
    let mut cosets: Vec<Perm> = a1.elements().iter().map(|x| g.left_coset(x).swap_remove(0)).collect();
    cosets.sort();
    cosets.dedup();
    let image_full = cosets.len() == a.order() / g.order();
    let mut images: Vec<usize> = g.elements().iter().map(|x| x.apply(t.base)).collect();
    images.sort_unstable();
    images.dedup();
    let coset_map_onto =
        images.len() == a.orbits(&OnPoints(t.n)).into_iter().find(|o| o.contains(&t.base)).map_or(0, |o| o.len());
    let geom_transitive = g.is_transitive();
    let items = [index_eq, stabilizer_index_eq, image_full, coset_map_onto, geom_transitive];
    TRamReport {
        index_eq,
        stabilizer_index_eq,
        image_full,
        coset_map_onto,
        geom_transitive,
        agreement: items.iter().all(|&b| b == items[0]),
    }
}

/// The fourteen group-level forms of exceptionality, keyed by item number
/// 2 through 15.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NtRamReport {
    pub items: BTreeMap<u8, bool>,
    pub agreement: bool,
}

impl NtRamReport {
    /// The common value, if all items agree.
    pub fn value(&self) -> Option<bool> {
        self.agreement.then(|| self.items.values().next().copied().unwrap_or(true))
    }
}

fn fixed_counts<'a>(elems: impl IntoIterator<Item = &'a Perm>) -> Vec<usize> {
    elems.into_iter().map(Perm::fixed_points).collect()
}

fn exactly_one(c: &[usize]) -> bool {
    c.iter().all(|&x| x == 1)
}

fn at_most_one(c: &[usize]) -> bool {
    c.iter().all(|&x| x <= 1)
}

fn at_least_one(c: &[usize]) -> bool {
    c.iter().all(|&x| x >= 1)
}

fn diagonal_unique(a: &PermGroup, g: &PermGroup, n: usize) -> bool {
    let diagonal: Vec<usize> = (0..n).map(|i| i * n + i).collect();
    common_orbits_direct(a, g, &OnPairs(OnPoints(n))) == [diagonal]
}

pub fn nt_ram_battery(t: &ExcTriple) -> Result<NtRamReport, GroupError> {
    validate_triple(t).check_totally_ramified()?;
    let n = t.n;
    let (a, g) = (&t.arith, &t.geom);
    let a1 = t.arith_stabilizer();
    let g1 = t.geom_stabilizer();
    let phi = t.frob_coset();
    let phi_l: Vec<Perm> = phi.iter().filter(|s| a1.contains(s)).cloned().collect();

    // one conjugate σ A1 σ^{-1} per left coset σ A1
    let mut conjugates: Vec<(bool, PermGroup)> = Vec::new();
    let mut seen_cosets: Vec<Vec<Perm>> = Vec::new();
    for s in a.elements() {
        let coset = a1.left_coset(s);
        if seen_cosets.contains(&coset) {
            continue;
        }
        seen_cosets.push(coset);
        let els: Vec<Perm> = a1.elements().iter().map(|x| x.conjugate_by(s)).collect();
        conjugates.push((a1.contains(s), PermGroup::from_elements(n, els)));
    }

    let mut items = BTreeMap::new();
    items.insert(2, common_orbits_direct(&a1, &g1, &OnPoints(n)) == [vec![t.base]]);
    items.insert(3, diagonal_unique(a, g, n));
    items.insert(4, conjugates.iter().filter(|(inside, _)| !inside).all(|(_, c)| phi_l.iter().all(|x| !c.contains(x))));
    items.insert(5, phi.iter().all(|x| conjugates.iter().any(|(_, c)| c.contains(x))));

    let gen_a = fixed_counts(quotient_generators(a, g));
    items.insert(6, exactly_one(&gen_a));
    items.insert(7, at_most_one(&gen_a));
    items.insert(8, at_least_one(&gen_a));

    let fix_phi = fixed_counts(&phi);
    items.insert(9, exactly_one(&fix_phi));
    items.insert(10, at_most_one(&fix_phi));
    items.insert(11, at_least_one(&fix_phi));

    let gen_a1 = fixed_counts(quotient_generators(&a1, &g1));
    items.insert(12, exactly_one(&gen_a1));
    items.insert(13, at_most_one(&gen_a1));

    let fix_phi_l = fixed_counts(&phi_l);
    items.insert(14, exactly_one(&fix_phi_l));
    items.insert(15, at_most_one(&fix_phi_l));

    let first = items[&2];
    let agreement = items.values().all(|&b| b == first);
    Ok(NtRamReport { items, agreement })
}

/// The diagonal is the unique common orbit of `A` and `G` on pairs.
pub fn is_exceptional_triple(t: &ExcTriple) -> Result<bool, GroupError> {
    validate_triple(t).check()?;
    Ok(diagonal_unique(&t.arith, &t.geom, t.n))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::group::perm::GROUP_CAP;

    /// `S = Z/n`, `G` the translations, `frob: i -> q i`.
    pub(crate) fn affine(n: usize, q: u64) -> ExcTriple {
        let shift = Perm::affine(n, 1, 1 % n as u64);
        let frob = Perm::affine(n, q % n as u64, 0);
        ExcTriple::new(n, &[shift.clone(), frob.clone()], &[shift], frob, 0, GROUP_CAP).unwrap()
    }

    #[test]
    fn affine_batteries() {
        let r = nt_ram_battery(&affine(3, 5)).unwrap();
        assert_eq!(r.items.len(), 14);
        assert_eq!(r.value(), Some(true));
        let r = nt_ram_battery(&affine(3, 7)).unwrap();
        assert_eq!(r.value(), Some(false));
        assert_eq!(nt_ram_battery(&affine(1, 2)).unwrap().value(), Some(true));
        assert!(is_exceptional_triple(&affine(3, 5)).unwrap());
        assert!(!is_exceptional_triple(&affine(3, 7)).unwrap());
        assert!(is_exceptional_triple(&affine(1, 2)).unwrap());
    }

    #[test]
    fn diagnostics() {
        assert!(validate_triple(&affine(3, 5)).all_pass());
        assert!(validate_triple(&affine(1, 2)).all_pass());
        let s3 = PermGroup::symmetric(3, GROUP_CAP).unwrap();
        let t = ExcTriple::from_groups(s3, PermGroup::trivial(3), Perm::cycle(3, &[0, 1]), 0).unwrap();
        let d = validate_triple(&t);
        assert!(d.geom_normal && !d.totally_ramified);
        // S_3 is not cyclic, so no element generates S_3 / 1
        assert_eq!(d.check(), Err(GroupError::InvalidTriple("cyclic_quotient".into())));
        assert!(matches!(nt_ram_battery(&t), Err(GroupError::InvalidTriple(_))));
    }

    #[test]
    fn t_ram_examples() {
        assert!(t_ram_equiv(&affine(3, 5)).geom_transitive);
        assert!(t_ram_equiv(&affine(3, 5)).agreement);
        let s3 = PermGroup::symmetric(3, GROUP_CAP).unwrap();
        let a3 = close_group(3, &[Perm::cycle(3, &[0, 1, 2])], GROUP_CAP).unwrap();
        let r = t_ram_equiv(&ExcTriple::from_groups(s3.clone(), a3, Perm::cycle(3, &[0, 1]), 0).unwrap());
        assert!(r.agreement && r.index_eq);
        let r = t_ram_equiv(&ExcTriple::from_groups(s3, PermGroup::trivial(3), Perm::identity(3), 0).unwrap());
        assert!(r.agreement && !r.index_eq && !r.geom_transitive);
    }

    #[test]
    fn relabel_and_conjugate_frob() {
        let t = affine(5, 2);
        let pi = Perm::cycle(5, &[0, 3, 1]);
        let u = t.relabel(&pi).unwrap();
        assert_eq!(u.base(), 3);
        assert_eq!(nt_ram_battery(&t).unwrap(), nt_ram_battery(&u).unwrap());
        let a = &t.arith().elements()[7];
        let v = t.with_frob(t.frob().conjugate_by(a));
        assert_eq!(nt_ram_battery(&t).unwrap(), nt_ram_battery(&v).unwrap());
    }

    #[test]
    fn spec_round_trip() {
        let t = affine(4, 3);
        let spec = t.canonical_spec();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"gens_A\""));
        let back: TripleSpec = serde_json::from_str(&json).unwrap();
        let u = ExcTriple::from_spec(&back, GROUP_CAP).unwrap();
        assert_eq!(u.arith(), t.arith());
        assert_eq!(u.frob_coset(), t.frob_coset());
        assert!(serde_json::from_str::<TripleSpec>("{\"n\":2}").is_err());
    }
}
