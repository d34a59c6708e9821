//! Tame and wild parts of totally ramified extensions of `F_q((x))`, and
//! the Kummer model of the tame part as an affine action on `Z/n`.

use serde::Serialize;

use crate::field::{field_of_order, gcd, FFElem, Field, FieldError};
use crate::group::{close_group, is_exceptional_triple, ExcTriple, GroupError, Perm, GROUP_CAP};
use crate::laurent::{nth_root_one_unit, LaurentError, LaurentSeries};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TameError {
    #[error("n = {n} and q = {q} are not coprime")]
    NotCoprime { n: u64, q: u64 },
    #[error("order {r} is divisible by the characteristic {p}")]
    WildOrder { r: u64, p: u64 },
    #[error("relation has valuation {found}, expected {expected}")]
    NotTotallyRamifiedShape { expected: i64, found: i64 },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `(m, l)` with `n = m p^l` and `p ∤ m`.
pub fn tame_wild_split(n: u64, p: u64) -> (u64, u32) {
    assert!(n >= 1 && p >= 2);
    let (mut m, mut l) = (n, 0);
    while m % p == 0 {
        m /= p;
        l += 1;
    }
    (m, l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TameExtensionModel {
    pub n: u64,
    pub q: u64,
    pub m: u64,
    pub wild_exp: u32,
}

impl TameExtensionModel {
    pub fn new(n: u64, q: u64) -> Result<TameExtensionModel, TameError> {
        let (p, _) = crate::field::prime_power(q)?;
        let (m, wild_exp) = tame_wild_split(n, p);
        Ok(TameExtensionModel { n, q, m, wild_exp })
    }

    pub fn is_tame(&self) -> bool {
        self.wild_exp == 0
    }
}

/// `z = x^n · unit` with the unit's leading coefficient scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinRelation {
    pub n: u64,
    pub unit: LaurentSeries,
    /// The factor applied to `z`.
    pub scalar: FFElem,
}

impl EisensteinRelation {
    /// `x^n · unit`.
    pub fn z(&self) -> LaurentSeries {
        self.unit.shift(self.n as i64)
    }
}

/// Rescales `z = x^n u(x)` by `u(0)^{-1}`.
pub fn eisenstein_normalize(z: &LaurentSeries, n: u64) -> Result<EisensteinRelation, TameError> {
    if z.is_zero() || z.valuation() != n as i64 {
        return Err(TameError::NotTotallyRamifiedShape { expected: n as i64, found: z.valuation() });
    }
    let scalar = z.leading().inverse().expect("nonzero leading coefficient");
    Ok(EisensteinRelation { n, unit: z.shift(-(n as i64)).scale(&scalar), scalar })
}

/// `y = x^{p^l} · unit^{1/m}`, so that `y^m = z`.
pub fn tame_uniformizer(rel: &EisensteinRelation) -> Result<LaurentSeries, TameError> {
    let p = rel.unit.field().characteristic();
    let (m, l) = tame_wild_split(rel.n, p);
    let root = nth_root_one_unit(&rel.unit, m)?;
    Ok(root.shift(p.pow(l) as i64))
}

/// The constant series `c` with `c^r = 1`, in element order.
pub fn roots_of_unity_constant(r: u64, field: &Field, precision: usize) -> Result<Vec<LaurentSeries>, TameError> {
    let p = field.characteristic();
    if r == 0 || r.is_multiple_of(p) {
        return Err(TameError::WildOrder { r, p });
    }
    field.check_enumerable(crate::field::ENUMERATION_CAP)?;
    Ok(field
        .elements()
        .filter(|c| !c.is_zero() && c.pow(r as u128).is_one())
        .map(|c| LaurentSeries::constant(c, precision))
        .collect())
}

/// The roots `ζ^i y` of `X^n - z` indexed by `i ∈ Z/n`: `G` is the
/// translations `i -> i + 1` and Frobenius is `i -> q i`.
pub fn tame_monodromy_triple(n: u64, q: u64) -> Result<ExcTriple, TameError> {
    if n == 0 || gcd(n, q) != 1 {
        return Err(TameError::NotCoprime { n, q });
    }
    let size = n as usize;
    let shift = Perm::affine(size, 1, 1 % n);
    let frob = Perm::affine(size, q % n, 0);
    let geom = close_group(size, std::slice::from_ref(&shift), GROUP_CAP)?;
    let arith = close_group(size, &[shift, frob.clone()], GROUP_CAP)?;
    Ok(ExcTriple::from_groups(arith, geom, frob, 0)?)
}

/// The four equivalent forms of exceptionality for a tame totally ramified
/// extension of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoprimeReport {
    pub n: u64,
    pub q: u64,
    /// Exceptional model triple; `gcd(n, q-1) = 1`; no nontrivial `n`-th
    /// root of unity in `F_q`; no divisor `d > 1` of `n` dividing `q - 1`.
    pub items: [bool; 4],
    pub agree: bool,
}

impl CoprimeReport {
    pub fn value(&self) -> Option<bool> {
        self.agree.then_some(self.items[0])
    }
}

pub fn coprime_battery(n: u64, q: u64) -> Result<CoprimeReport, TameError> {
    let triple = tame_monodromy_triple(n, q)?;
    let exceptional = is_exceptional_triple(&triple)?;
    let gcd_one = gcd(n, q - 1) == 1;
    let field = field_of_order(q)?;
    let mut no_roots = true;
    for c in field.elements().filter(|c| !c.is_zero() && !c.is_one()) {
        if n.is_multiple_of(c.mult_order()?) {
            no_roots = false;
            break;
        }
    }
    let no_divisor = !(2..=n).any(|d| n.is_multiple_of(d) && (q - 1).is_multiple_of(d));
    let items = [exceptional, gcd_one, no_roots, no_divisor];
    Ok(CoprimeReport { n, q, items, agree: items.iter().all(|&b| b == items[0]) })
}

/// Model triples for all `n ≤ max_n` coprime to each `q`.
pub fn tame_triples(max_n: u64, qs: &[u64]) -> Result<Vec<(u64, u64, ExcTriple)>, TameError> {
    let mut out = Vec::new();
    for &q in qs {
        for n in (1..=max_n).filter(|&n| gcd(n, q) == 1) {
            out.push((n, q, tame_monodromy_triple(n, q)?));
        }
    }
    Ok(out)
}
