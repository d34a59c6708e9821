//! Prime-power finite fields `F_{p^n}` with a canonical defining polynomial.
//!
//! Elements are dense coefficient vectors over `F_p` (constant term first),
//! reduced modulo the field's modulus. Every field of a given `(p, n)` uses
//! the lexicographically least monic irreducible polynomial, compared with
//! the constant term as the most significant coordinate, so towers are
//! reproducible without external tables.
//!
//! The same lexicographic convention orders elements: [`FFElem::index`]
//! is the rank of an element in that order, and enumeration-bearing code
//! walks fields by index.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Largest extension degree accepted by [`make_field`].
pub const MAX_FIELD_DEGREE: usize = 24;

/// Largest field cardinality accepted by [`make_field`]. Keeps every
/// coefficient product inside a `u64`.
pub const MAX_FIELD_ORDER: u64 = 1 << 32;

/// Cardinality cap for operations that enumerate every element of a field.
pub const ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field GF({p}^{n}) exceeds the size budget")]
    DegreeTooLarge { p: u64, n: usize },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("no embedding of GF({src}) into GF({dst})")]
    NoEmbedding { src: u64, dst: u64 },
    #[error("field of order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
}

/// Description of `F_{p^n}`: characteristic, degree and defining polynomial.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldDesc {
    p: u64,
    n: usize,
    /// Monic, constant term first, length `n + 1`.
    modulus: Vec<u64>,
    order: u64,
}

/// Shared handle to a [`FieldDesc`]. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldDesc>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.n)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.order)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `m`, ascending.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Splits a prime power `q = p^e` into `(p, e)`.
pub fn prime_power(q: u64) -> Result<(u64, usize), FieldError> {
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    let p = fs[0];
    let mut e = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        e += 1;
    }
    Ok((p, e))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Decodes a lexicographic rank into coefficients (index 0 most significant).
fn decode(mut index: u64, p: u64, n: usize) -> Vec<u64> {
    let mut c = vec![0; n];
    for slot in c.iter_mut().rev() {
        *slot = index % p;
        index /= p;
    }
    c
}

fn encode(c: &[u64], p: u64) -> u64 {
    c.iter().fold(0, |acc, &x| acc * p + x)
}

/// Remainder of `a` modulo the monic `m` over `F_p`; both constant term first.
fn rem_monic(a: &mut Vec<u64>, m: &[u64], p: u64) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let c = a.pop().unwrap();
        if c != 0 {
            let shift = a.len() - dm;
            for (j, &mj) in m[..dm].iter().enumerate() {
                a[shift + j] = (a[shift + j] + (p - c) * mj) % p;
            }
        }
    }
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let n = m.len() - 1;
    if n == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    for deg in 1..=n / 2 {
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let mut d = decode(idx, p, deg);
            d.push(1);
            let mut r = m.to_vec();
            rem_monic(&mut r, &d, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Builds `F_{p^n}` with the lexicographically least monic irreducible modulus.
pub fn make_field(p: u64, n: usize) -> Result<Field, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let too_large = FieldError::DegreeTooLarge { p, n };
    if n == 0 || n > MAX_FIELD_DEGREE {
        return Err(too_large);
    }
    let order = (p as u128).pow(n as u32);
    if order > MAX_FIELD_ORDER as u128 {
        return Err(too_large);
    }
    let order = order as u64;
    for idx in 0..order {
        let mut m = decode(idx, p, n);
        m.push(1);
        if is_irreducible(&m, p) {
            return Ok(Field(Arc::new(FieldDesc { p, n, modulus: m, order })));
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Convenience: the field with `q` elements.
pub fn field_of_order(q: u64) -> Result<Field, FieldError> {
    let (p, e) = prime_power(q)?;
    make_field(p, e)
}

impl Field {
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.0
    }

    pub fn zero(&self) -> FFElem {
        FFElem { field: self.clone(), coeffs: vec![0; self.0.n] }
    }

    pub fn one(&self) -> FFElem {
        self.from_int(1)
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> FFElem {
        let mut e = self.zero();
        e.coeffs[0] = v.rem_euclid(self.0.p as i64) as u64;
        e
    }

    /// The class of `X` modulo the defining polynomial.
    pub fn generator(&self) -> FFElem {
        let mut c = vec![0; self.0.n];
        if self.0.n == 1 {
            c[0] = (self.0.p - self.0.modulus[0]) % self.0.p;
        } else {
            c[1] = 1;
        }
        FFElem { field: self.clone(), coeffs: c }
    }

    /// Reduces an arbitrary coefficient vector (constant term first).
    pub fn from_coeffs(&self, mut coeffs: Vec<u64>) -> FFElem {
        let p = self.0.p;
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        rem_monic(&mut coeffs, &self.0.modulus, p);
        coeffs.resize(self.0.n, 0);
        FFElem { field: self.clone(), coeffs }
    }

    /// The element of lexicographic rank `index`.
    pub fn element(&self, index: u64) -> FFElem {
        debug_assert!(index < self.0.order);
        FFElem { field: self.clone(), coeffs: decode(index, self.0.p, self.0.n) }
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.0.order).map(move |i| self.element(i))
    }

    pub fn check_enumerable(&self, cap: u64) -> Result<(), FieldError> {
        if self.0.order > cap {
            Err(FieldError::CapExceeded { order: self.0.order, cap })
        } else {
            Ok(())
        }
    }

    fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let FieldDesc { p, n, modulus, .. } = &*self.0;
        let (p, n) = (*p, *n);
        if n == 1 {
            return vec![a[0] * b[0] % p];
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        rem_monic(&mut prod, modulus, p);
        prod.resize(n, 0);
        prod
    }

    /// Inverse by the extended Euclidean algorithm over `F_p[X]`.
    fn inv_raw(&self, a: &[u64]) -> Vec<u64> {
        let p = self.0.p;
        let trim = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        // invariant: s * a == r (mod modulus)
        let mut r0 = self.0.modulus.clone();
        let mut r1 = a.to_vec();
        trim(&mut r1);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while r1.len() > 1 {
            // r0 = quot * r1 + rem
            let lead_inv = inv_mod(*r1.last().unwrap(), p);
            let mut rem = r0.clone();
            let mut quot = vec![0u64; rem.len().saturating_sub(r1.len()) + 1];
            while rem.len() >= r1.len() {
                let c = rem.last().unwrap() * lead_inv % p;
                let shift = rem.len() - r1.len();
                quot[shift] = c;
                for (j, &bj) in r1.iter().enumerate() {
                    rem[shift + j] = (rem[shift + j] + (p - c) * bj % p) % p;
                }
                rem.pop();
                trim(&mut rem);
                if rem.is_empty() {
                    break;
                }
            }
            // s2 = s0 - quot * s1
            let mut s2 = vec![0u64; (quot.len() + s1.len()).max(s0.len())];
            for (i, &x) in s0.iter().enumerate() {
                s2[i] = x;
            }
            for (i, &qi) in quot.iter().enumerate() {
                for (j, &sj) in s1.iter().enumerate() {
                    s2[i + j] = (s2[i + j] + (p - qi * sj % p)) % p;
                }
            }
            trim(&mut s2);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant
        let c = inv_mod(r1[0], p);
        let mut out: Vec<u64> = s1.iter().map(|&x| x * c % p).collect();
        rem_monic(&mut out, &self.0.modulus, p);
        out.resize(self.0.n, 0);
        out
    }
}

/// An element of a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FFElem {
    field: Field,
    coeffs: Vec<u64>,
}

impl std::hash::Hash for FFElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Arithmetic operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn field_arith(a: &FFElem, b: &FFElem, op: ArithOp) -> Result<FFElem, FieldError> {
    if a.field != b.field {
        return Err(FieldError::FieldMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl FFElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Rank in the lexicographic element order.
    pub fn index(&self) -> u64 {
        encode(&self.coeffs, self.field.0.p)
    }

    pub fn inverse(&self) -> Result<FFElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.field.0.p;
        let coeffs =
            if self.field.0.n == 1 { vec![inv_mod(self.coeffs[0], p)] } else { self.field.inv_raw(&self.coeffs) };
        Ok(FFElem { field: self.field.clone(), coeffs })
    }

    pub fn checked_div(&self, other: &FFElem) -> Result<FFElem, FieldError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut e: u128) -> FFElem {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Least `r >= 1` with `self^r = 1`.
    pub fn mult_order(&self) -> Result<u64, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let mut r = self.field.order() - 1;
        for l in prime_factors(r) {
            while r.is_multiple_of(l) && self.pow((r / l) as u128).is_one() {
                r /= l;
            }
        }
        Ok(r)
    }

    fn zip(&self, other: &FFElem, f: impl Fn(u64, u64) -> u64) -> FFElem {
        assert!(self.field == other.field, "field mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        FFElem { field: self.field.clone(), coeffs }
    }
}

/// Free-function form of [`FFElem::mult_order`].
pub fn mult_order(a: &FFElem) -> Result<u64, FieldError> {
    a.mult_order()
}

impl Add for &FFElem {
    type Output = FFElem;
    fn add(self, rhs: &FFElem) -> FFElem {
        let p = self.field.0.p;
        self.zip(rhs, |a, b| (a + b) % p)
    }
}

impl Sub for &FFElem {
    type Output = FFElem;
    fn sub(self, rhs: &FFElem) -> FFElem {
        let p = self.field.0.p;
        self.zip(rhs, |a, b| (a + p - b) % p)
    }
}

impl Mul for &FFElem {
    type Output = FFElem;
    fn mul(self, rhs: &FFElem) -> FFElem {
        assert!(self.field == rhs.field, "field mismatch");
        let coeffs = self.field.mul_raw(&self.coeffs, &rhs.coeffs);
        FFElem { field: self.field.clone(), coeffs }
    }
}

impl Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FFElem { field: self.field.clone(), coeffs }
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints as a polynomial in `t`, highest power first, e.g. `2*t+1`.
impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string("t"))
    }
}

impl FFElem {
    /// Renders the element as a polynomial in `var`.
    pub fn to_poly_string(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// An embedding `F_{p^m} -> F_{p^{mk}}` determined by the image of the
/// source generator.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    src: Field,
    dst: Field,
    gen_image: FFElem,
    /// `gen_image^i` for `i < src.degree()`.
    powers: Vec<FFElem>,
}

impl FieldEmbedding {
    pub fn src(&self) -> &Field {
        &self.src
    }

    pub fn dst(&self) -> &Field {
        &self.dst
    }

    pub fn gen_image(&self) -> &FFElem {
        &self.gen_image
    }

    pub fn apply(&self, a: &FFElem) -> FFElem {
        assert!(a.field == self.src, "element is not in the embedding source");
        if self.src.degree() == 1 {
            return self.dst.from_int(a.coeffs[0] as i64);
        }
        let mut acc = self.dst.zero();
        for (c, pw) in a.coeffs.iter().zip(&self.powers) {
            if *c != 0 {
                acc = &acc + &(pw * &self.dst.from_int(*c as i64));
            }
        }
        acc
    }
}

/// Evaluates an `F_p`-coefficient polynomial (constant first) at `x`.
fn eval_prime_poly(coeffs: &[u64], x: &FFElem) -> FFElem {
    let f = x.field();
    coeffs.iter().rev().fold(f.zero(), |acc, &c| &(&acc * x) + &f.from_int(c as i64))
}

/// A primitive element of `field`: the least element in lexicographic order
/// whose multiplicative order is `|field| - 1`.
pub fn primitive_element(field: &Field) -> FFElem {
    let m = field.order() - 1;
    let fs = prime_factors(m);
    (1..field.order())
        .map(|i| field.element(i))
        .find(|g| fs.iter().all(|&l| !g.pow((m / l) as u128).is_one()))
        .expect("the multiplicative group is cyclic")
}

/// Embeds `src` into `dst` sending the source generator to its least root
/// in `dst`.
pub fn embed(src: &Field, dst: &Field) -> Result<FieldEmbedding, FieldError> {
    let no = FieldError::NoEmbedding { src: src.order(), dst: dst.order() };
    if src.characteristic() != dst.characteristic() || !dst.degree().is_multiple_of(src.degree()) {
        return Err(no);
    }
    let gen_image = if src.degree() == 1 {
        dst.from_int(src.generator().coeffs[0] as i64)
    } else {
        // Roots of the source modulus lie in the subfield of order |src|,
        // which a power of a primitive element generates.
        let g = primitive_element(dst);
        let sub_units = src.order() - 1;
        let h = g.pow(((dst.order() - 1) / sub_units) as u128);
        let mut cur = dst.one();
        let mut best: Option<FFElem> = None;
        for _ in 0..sub_units {
            if eval_prime_poly(src.modulus(), &cur).is_zero() && best.as_ref().is_none_or(|b| cur.index() < b.index()) {
                best = Some(cur.clone());
            }
            cur = &cur * &h;
        }
        best.ok_or(no)?
    };
    let mut powers = Vec::with_capacity(src.degree());
    let mut cur = dst.one();
    for _ in 0..src.degree() {
        powers.push(cur.clone());
        cur = &cur * &gen_image;
    }
    Ok(FieldEmbedding { src: src.clone(), dst: dst.clone(), gen_image, powers })
}
