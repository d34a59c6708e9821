//! Dense univariate polynomials over a finite field.

use std::fmt;

use crate::field::{FFElem, Field, FieldEmbedding};

/// Coefficients constant term first with no trailing zeros; the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FFElem>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FFElem>) -> Poly {
        while coeffs.last().is_some_and(FFElem::is_zero) {
            coeffs.pop();
        }
        assert!(coeffs.iter().all(|c| c.field() == field), "coefficient field mismatch");
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: FFElem) -> Poly {
        let field = c.field().clone();
        Poly::new(&field, vec![c])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field.one())
    }

    /// The monomial `c * X^e`.
    pub fn monomial(c: FFElem, e: usize) -> Poly {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); e];
        coeffs.push(c);
        Poly::new(&field, coeffs)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    /// From integer coefficients, constant term first.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> FFElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<&FFElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(FFElem::is_one)
    }

    pub fn eval(&self, x: &FFElem) -> FFElem {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn scale(&self, c: &FFElem) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(&self.field), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.coeffs[dd].inverse().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            if !c.is_zero() {
                let shift = top - dd;
                for (j, dj) in d.coeffs.iter().enumerate() {
                    rem[shift + j] = &rem[shift + j] - &(&c * dj);
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        (Poly::new(&self.field, quot), Poly::new(&self.field, rem))
    }

    /// Divides by the leading coefficient. The zero polynomial is returned
    /// unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.inverse().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &self.field.from_int(i as i64)).collect(),
        )
    }

    /// Multiplicity of `a` as a root; `None` for the zero polynomial.
    pub fn root_multiplicity(&self, a: &FFElem) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut cur = self.coeffs.clone();
        let mut m = 0;
        loop {
            // synthetic division by (X - a)
            let mut q = vec![self.field.zero(); cur.len() - 1];
            let mut acc = self.field.zero();
            for i in (0..cur.len()).rev() {
                acc = &(&acc * a) + &cur[i];
                if i > 0 {
                    q[i - 1] = acc.clone();
                }
            }
            if !acc.is_zero() {
                return Some(m);
            }
            m += 1;
            cur = q;
        }
    }

    /// `X^len * self(1/X)`; requires `len >= deg`.
    pub fn reversed(&self, len: usize) -> Poly {
        let mut c = self.coeffs.clone();
        c.resize(len + 1, self.field.zero());
        c.reverse();
        Poly::new(&self.field, c)
    }

    /// Whether every nonzero coefficient sits at an exponent divisible by `k`.
    pub fn is_in_powers_of(&self, k: usize) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| c.is_zero() || i % k == 0)
    }

    /// `g` with `self = g(X^k)`; requires [`Poly::is_in_powers_of`].
    pub fn deflate(&self, k: usize) -> Poly {
        debug_assert!(self.is_in_powers_of(k));
        Poly::new(&self.field, self.coeffs.iter().step_by(k).cloned().collect())
    }

    /// `self(X^k)`.
    pub fn inflate(&self, k: usize) -> Poly {
        let mut c = vec![self.field.zero(); self.deg0() * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Poly::new(&self.field, c)
    }

    /// Substitutes `other` for `X`.
    pub fn compose(&self, other: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(&self.field), |acc, c| acc.mul(other).add(&Poly::constant(c.clone())))
    }

    /// Applies a field embedding to every coefficient.
    pub fn embed(&self, emb: &FieldEmbedding) -> Poly {
        Poly::new(emb.dst(), self.coeffs.iter().map(|c| emb.apply(c)).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `x^3+(t+1)*x+2`: highest degree first; extension coefficients are
/// written in `t`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let cs = c.to_string();
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            match (i, c.is_one()) {
                (0, _) => f.write_str(&cs)?,
                (_, true) => f.write_str(&mono)?,
                _ => write!(f, "{cs}*{mono}")?,
            }
        }
        Ok(())
    }
}
