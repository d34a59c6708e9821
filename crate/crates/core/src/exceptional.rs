//! Deciding exceptionality of rational maps over `F_q`.
//!
//! A nonconstant `f` of (separable) degree `d` is exceptional iff it
//! permutes `P^1(F_{q^k})` for some `k` with `q^k >= d^4`. The decision
//! scans a window of consecutive `k` starting at the least such `k`; its
//! width is the Jacobsthal function of `lcm(1..d)`, so the window always
//! contains a `k` coprime to the constant-field degree of the Galois
//! closure. An exceptional map is bijective at every such `k`, which makes
//! a window with no bijective `k` a certificate of non-exceptionality.

use std::borrow::Cow;
use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{self, embed, gcd, lcm, make_field, FFElem, Field, FieldEmbedding, FieldError};
use crate::poly::Poly;
use crate::ratfunc::{separable_core, ProjPoint, RatFunc};

/// Largest separable degree for which a completeness window is computed.
pub const MAX_WINDOW_DEGREE: usize = 12;

/// Default cap on the number of census candidates.
pub const CENSUS_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExcError {
    #[error("the map is constant")]
    ConstantMap,
    #[error("degree {0} exceeds the census cap of {MAX_WINDOW_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("field of order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u128, cap: u64 },
    #[error("census of {count} candidates exceeds the cap {cap}")]
    TooManyCandidates { count: u128, cap: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Least `k >= 1` with `q^k >= d^4` (or `q^k > d^4` when `strict`).
pub fn min_k(q: u64, d: u64, strict: bool) -> u32 {
    let bound = (d as u128).pow(4);
    let mut k = 1;
    let mut qk = q as u128;
    while qk < bound || (strict && qk == bound) {
        qk *= q as u128;
        k += 1;
    }
    k
}

/// `lcm(1, 2, ..., d)`.
pub fn lcm_upto(d: usize) -> u64 {
    (1..=d as u64).fold(1, lcm)
}

/// Jacobsthal function of `lcm(1..d)`: the least `w` such that any `w`
/// consecutive integers contain one coprime to `lcm(1..d)`.
pub fn jacobsthal_window(d: usize) -> Result<u32, ExcError> {
    if d == 0 || d > MAX_WINDOW_DEGREE {
        return Err(ExcError::DegreeTooLarge(d));
    }
    let l = lcm_upto(d);
    // largest cyclic gap between consecutive residues coprime to l
    let mut prev = None;
    let mut first = 0;
    let mut widest = 1;
    for r in 0..l {
        if gcd(r, l) == 1 {
            match prev {
                None => first = r,
                Some(p) => widest = widest.max(r - p),
            }
            prev = Some(r);
        }
    }
    if let Some(p) = prev {
        widest = widest.max(first + l - p);
    }
    Ok(widest as u32)
}

/// `F_{q^k}` together with the embedding of the base field.
#[derive(Clone, Debug)]
pub struct Extension {
    pub k: u32,
    pub embedding: FieldEmbedding,
}

impl Extension {
    pub fn new(base: &Field, k: u32, cap: u64) -> Result<Extension, ExcError> {
        let order = (base.order() as u128).pow(k);
        if order > cap as u128 {
            return Err(ExcError::CapExceeded { order, cap });
        }
        let big = make_field(base.characteristic(), base.degree() * k as usize)?;
        Ok(Extension { k, embedding: embed(base, &big)? })
    }

    pub fn field(&self) -> &Field {
        self.embedding.dst()
    }
}

/// Two distinct points of `P^1(F_{q^k})` with the same image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub k: u32,
    pub a: ProjPoint,
    pub b: ProjPoint,
    pub image: ProjPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bijectivity {
    Bijective,
    Collision(Collision),
}

impl Bijectivity {
    pub fn is_bijective(&self) -> bool {
        matches!(self, Bijectivity::Bijective)
    }
}

/// Scans `P^1(F_{q^k})` in enumeration order and reports the first repeated
/// image.
pub fn bijectivity_on(f: &RatFunc, ext: &Extension) -> Bijectivity {
    let fe = f.embed(&ext.embedding);
    let big = ext.field();
    let n = big.order();
    let mut seen = vec![u32::MAX; n as usize + 1];
    for i in 0..=n {
        let x = ProjPoint::from_index(big, i);
        let y = fe.eval_proj(&x);
        let slot = &mut seen[y.index(big) as usize];
        if *slot != u32::MAX {
            let a = ProjPoint::from_index(big, *slot as u64);
            return Bijectivity::Collision(Collision { k: ext.k, a, b: x, image: y });
        }
        *slot = i as u32;
    }
    Bijectivity::Bijective
}

/// Whether `f` permutes `P^1(F_{q^k})`.
pub fn is_bijective_on(f: &RatFunc, k: u32, cap: u64) -> Result<Bijectivity, ExcError> {
    if f.is_constant() {
        return Err(ExcError::ConstantMap);
    }
    Ok(bijectivity_on(f, &Extension::new(f.field(), k, cap)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DecideOptions {
    /// Require `q^k > d^4` instead of `q^k >= d^4`.
    pub strict_bound: bool,
    /// Scan this many `k` instead of the Jacobsthal width.
    pub window_override: Option<u32>,
    pub cap: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { strict_bound: false, window_override: None, cap: field::ENUMERATION_CAP }
    }
}

/// The range of `k` scanned for a map and how it was derived.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub start: u32,
    /// Width that guarantees completeness.
    pub sound_width: u32,
    /// Width actually scanned.
    pub width: u32,
    pub lcm: u64,
    pub strict_bound: bool,
}

impl Window {
    pub fn for_degree(q: u64, d: usize, opts: &DecideOptions) -> Result<Window, ExcError> {
        let sound_width = jacobsthal_window(d)?;
        Ok(Window {
            start: min_k(q, d as u64, opts.strict_bound),
            sound_width,
            width: opts.window_override.unwrap_or(sound_width).max(1),
            lcm: lcm_upto(d),
            strict_bound: opts.strict_bound,
        })
    }

    pub fn ks(&self) -> impl Iterator<Item = u32> {
        self.start..self.start + self.width
    }

    pub fn is_sound(&self) -> bool {
        self.width >= self.sound_width
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ExceptionalityVerdict {
    Exceptional { witness_k: u32 },
    NotExceptional { scanned_k: Vec<u32>, collision: Collision },
    Inconclusive { scanned_k: Vec<u32> },
}

impl ExceptionalityVerdict {
    pub fn is_exceptional(&self) -> bool {
        matches!(self, ExceptionalityVerdict::Exceptional { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ExceptionalityVerdict::Exceptional { .. } => "exceptional",
            ExceptionalityVerdict::NotExceptional { .. } => "not_exceptional",
            ExceptionalityVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// A verdict together with the data it was derived from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    #[serde(flatten)]
    pub verdict: ExceptionalityVerdict,
    /// Degree of the separable core `g` with `f = g(x^{p^e})`.
    pub core_degree: usize,
    pub frobenius_exp: u32,
    pub window: Window,
}

/// Decides maps over one base field, reusing prebuilt extensions.
pub struct Decider {
    base: Field,
    opts: DecideOptions,
    towers: BTreeMap<u32, Extension>,
}

impl Decider {
    pub fn new(base: &Field, opts: DecideOptions) -> Decider {
        Decider { base: base.clone(), opts, towers: BTreeMap::new() }
    }

    pub fn options(&self) -> &DecideOptions {
        &self.opts
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn window(&self, core_degree: usize) -> Result<Window, ExcError> {
        Window::for_degree(self.base.order(), core_degree, &self.opts)
    }

    /// Builds every extension needed for maps of the given separable degree.
    pub fn prepare(&mut self, core_degree: usize) -> Result<(), ExcError> {
        for k in self.window(core_degree)?.ks() {
            if !self.towers.contains_key(&k) {
                self.towers.insert(k, Extension::new(&self.base, k, self.opts.cap)?);
            }
        }
        Ok(())
    }

    fn extension(&self, k: u32) -> Result<Cow<'_, Extension>, ExcError> {
        match self.towers.get(&k) {
            Some(e) => Ok(Cow::Borrowed(e)),
            None => Ok(Cow::Owned(Extension::new(&self.base, k, self.opts.cap)?)),
        }
    }

    pub fn decide(&self, f: &RatFunc) -> Result<Decision, ExcError> {
        if f.is_constant() {
            return Err(ExcError::ConstantMap);
        }
        let (core, frobenius_exp) = separable_core(f);
        let core_degree = core.degree();
        let window = self.window(core_degree)?;
        let mut scanned = Vec::new();
        let mut last = None;
        for k in window.ks() {
            scanned.push(k);
            // the Frobenius factor is bijective everywhere, so f and its
            // core agree; scanning f keeps witnesses about f itself
            match bijectivity_on(f, &*self.extension(k)?) {
                Bijectivity::Bijective => {
                    return Ok(Decision {
                        verdict: ExceptionalityVerdict::Exceptional { witness_k: k },
                        core_degree,
                        frobenius_exp,
                        window,
                    })
                }
                Bijectivity::Collision(c) => last = Some(c),
            }
        }
        let verdict = if window.is_sound() {
            ExceptionalityVerdict::NotExceptional { scanned_k: scanned, collision: last.expect("window is nonempty") }
        } else {
            ExceptionalityVerdict::Inconclusive { scanned_k: scanned }
        };
        Ok(Decision { verdict, core_degree, frobenius_exp, window })
    }
}

/// Decides whether `f` is exceptional.
pub fn is_exceptional(f: &RatFunc, opts: &DecideOptions) -> Result<Decision, ExcError> {
    Decider::new(f.field(), *opts).decide(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamEntry {
    pub point: ProjPoint,
    pub e: usize,
    /// `gcd(e, q - 1)`.
    pub gcd: u64,
}

/// Ramification indices at every point of `P^1(F_q)`.
pub fn ramification_profile(f: &RatFunc) -> Result<Vec<RamEntry>, ExcError> {
    if f.is_constant() {
        return Err(ExcError::ConstantMap);
    }
    let q1 = f.field().order() - 1;
    Ok(ProjPoint::all(f.field())
        .map(|point| {
            let e = f.ram_index(&point).expect("nonconstant map");
            RamEntry { gcd: gcd(e as u64, q1), point, e }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcwReport {
    pub decision: Decision,
    pub profile: Vec<RamEntry>,
    /// For exceptional maps: every rational ramification index is coprime
    /// to `q - 1`. Vacuously true otherwise.
    pub pass: bool,
}

/// Ramification profile over `P^1(F_q)` checked against the coprimality
/// conclusion for exceptional maps.
pub fn check_gcw(f: &RatFunc, opts: &DecideOptions) -> Result<GcwReport, ExcError> {
    let decision = is_exceptional(f, opts)?;
    let profile = ramification_profile(f)?;
    let pass = !decision.verdict.is_exceptional() || profile.iter().all(|r| r.gcd == 1);
    Ok(GcwReport { decision, profile, pass })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Monic with constant term 0.
    MonicZeroConstant,
    /// Every polynomial of exact degree `n`.
    Full,
}

impl Normalization {
    pub fn describe(&self) -> &'static str {
        match self {
            Normalization::MonicZeroConstant => "monic, constant term 0",
            Normalization::Full => "all polynomials of exact degree n",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusOptions {
    pub decide: DecideOptions,
    pub normalization: Normalization,
    pub census_cap: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            decide: DecideOptions::default(),
            normalization: Normalization::MonicZeroConstant,
            census_cap: CENSUS_CAP,
        }
    }
}

/// The polynomials enumerated by a census, in a fixed order.
#[derive(Clone, Debug)]
pub struct Census {
    field: Field,
    n: usize,
    normalization: Normalization,
    count: u64,
}

impl Census {
    pub fn new(field: &Field, n: usize, normalization: Normalization, cap: u64) -> Result<Census, ExcError> {
        if n == 0 {
            return Err(ExcError::ConstantMap);
        }
        let q = field.order() as u128;
        let count = match normalization {
            Normalization::MonicZeroConstant => q.pow(n as u32 - 1),
            Normalization::Full => (q - 1) * q.pow(n as u32),
        };
        if count > cap as u128 {
            return Err(ExcError::TooManyCandidates { count, cap });
        }
        Ok(Census { field: field.clone(), n, normalization, count: count as u64 })
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Candidate `index`; lower-degree coefficients vary fastest.
    pub fn candidate(&self, index: u64) -> RatFunc {
        let f = &self.field;
        let q = f.order();
        let mut coeffs = vec![f.zero(); self.n + 1];
        let mut rest = index;
        match self.normalization {
            Normalization::MonicZeroConstant => {
                coeffs[self.n] = f.one();
                for c in coeffs[1..self.n].iter_mut() {
                    *c = f.element(rest % q);
                    rest /= q;
                }
            }
            Normalization::Full => {
                for c in coeffs[..self.n].iter_mut() {
                    *c = f.element(rest % q);
                    rest /= q;
                }
                coeffs[self.n] = f.element(rest + 1);
            }
        }
        RatFunc::polynomial(Poly::new(f, coeffs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gcds {
    /// `gcd(n, q - 1)`.
    pub degree: u64,
    /// Largest `gcd(e, q - 1)` over the rational ramification profile.
    pub max_ram: u64,
}

/// One census candidate with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateRow {
    pub index: u64,
    pub poly: String,
    #[serde(flatten)]
    pub decision: Decision,
    pub ram_profile: Vec<RamEntry>,
    pub gcds: Gcds,
}

impl CandidateRow {
    pub fn is_exceptional(&self) -> bool {
        self.decision.verdict.is_exceptional()
    }

    /// Why this row would break the coprimality conclusions, if it does.
    pub fn violation(&self) -> Option<String> {
        if !self.is_exceptional() {
            return None;
        }
        if self.gcds.degree != 1 {
            return Some(format!("exceptional of degree with gcd(n, q-1) = {}", self.gcds.degree));
        }
        self.ram_profile
            .iter()
            .find(|r| r.gcd != 1)
            .map(|r| format!("ramification index {} at {} not coprime to q-1", r.e, r.point))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub poly: String,
    pub reason: String,
}

/// Evaluates one census candidate.
pub fn census_row(decider: &Decider, index: u64, f: &RatFunc) -> Result<CandidateRow, ExcError> {
    let decision = decider.decide(f)?;
    let ram_profile = ramification_profile(f)?;
    let q1 = f.field().order() - 1;
    let gcds =
        Gcds { degree: gcd(f.degree() as u64, q1), max_ram: ram_profile.iter().map(|r| r.gcd).max().unwrap_or(1) };
    Ok(CandidateRow { index, poly: f.to_string(), decision, ram_profile, gcds })
}

/// Separable degrees that candidates of degree `n` can have.
pub fn core_degrees(p: u64, n: usize) -> Vec<usize> {
    let mut out = vec![n];
    let mut d = n;
    while d.is_multiple_of(p as usize) {
        d /= p as usize;
        out.push(d);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub q: u64,
    pub n: usize,
    pub normalization: Normalization,
    pub total_candidates: u64,
    pub rows: Vec<CandidateRow>,
    pub elapsed_ms: u128,
    pub violations: Vec<Violation>,
}

impl ScanReport {
    pub fn exceptional(&self) -> impl Iterator<Item = &CandidateRow> {
        self.rows.iter().filter(|r| r.is_exceptional())
    }
}

/// Builds a decider with every extension a degree-`n` census needs.
pub fn census_decider(field: &Field, n: usize, opts: &DecideOptions) -> Result<Decider, ExcError> {
    let mut decider = Decider::new(field, *opts);
    for d in core_degrees(field.characteristic(), n) {
        decider.prepare(d)?;
    }
    Ok(decider)
}

/// Wall clock for scan reports; reads 0 where the platform has no clock.
struct Stopwatch(#[cfg(not(target_family = "wasm"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Stopwatch {
        Stopwatch(
            #[cfg(not(target_family = "wasm"))]
            std::time::Instant::now(),
        )
    }

    fn elapsed_ms(&self) -> u128 {
        #[cfg(not(target_family = "wasm"))]
        return self.0.elapsed().as_millis();
        #[cfg(target_family = "wasm")]
        0
    }
}

/// Classifies every normalized degree-`n` polynomial over `F_q` and checks
/// each exceptional find against the coprimality conclusions.
pub fn carlitz_wan_scan(q: u64, n: usize, opts: &CensusOptions) -> Result<ScanReport, ExcError> {
    let start = Stopwatch::start();
    let field = field::field_of_order(q)?;
    let census = Census::new(&field, n, opts.normalization, opts.census_cap)?;
    let decider = census_decider(&field, n, &opts.decide)?;
    #[cfg(feature = "parallel")]
    let indices = (0..census.len()).into_par_iter();
    #[cfg(not(feature = "parallel"))]
    let indices = 0..census.len();
    let rows = indices.map(|i| census_row(&decider, i, &census.candidate(i))).collect::<Result<Vec<_>, _>>()?;
    let violations = rows
        .iter()
        .filter_map(|r| r.violation().map(|reason| Violation { index: r.index, poly: r.poly.clone(), reason }))
        .collect();
    Ok(ScanReport {
        q,
        n,
        normalization: opts.normalization,
        total_candidates: census.len(),
        rows,
        elapsed_ms: start.elapsed_ms(),
        violations,
    })
}

/// `c * f(a x + b) + d` for the affine-equivalence checks.
pub fn affine_conjugate(f: &RatFunc, a: &FFElem, b: &FFElem, c: &FFElem, d: &FFElem) -> RatFunc {
    let inner = Poly::new(f.field(), vec![b.clone(), a.clone()]);
    f.compose_poly(&inner).affine_post(c, d)
}
