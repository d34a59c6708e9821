//! Rational functions on the projective line and their ramification.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{FFElem, Field, FieldEmbedding};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("the map is constant")]
    ConstantMap,
    #[error("numerator and denominator live in different fields")]
    FieldMismatch,
    #[error("point is not defined over the function's field")]
    PointFieldMismatch,
}

/// A point of `P^1` over some finite field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ProjPoint {
    Finite(FFElem),
    Infinity,
}

impl ProjPoint {
    /// Rank in the enumeration order of `P^1(F)`: field elements by index,
    /// then infinity.
    pub fn index(&self, field: &Field) -> u64 {
        match self {
            ProjPoint::Finite(a) => a.index(),
            ProjPoint::Infinity => field.order(),
        }
    }

    pub fn from_index(field: &Field, index: u64) -> ProjPoint {
        if index == field.order() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(field.element(index))
        }
    }

    /// Every point of `P^1(F)` in enumeration order.
    pub fn all(field: &Field) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..=field.order()).map(move |i| ProjPoint::from_index(field, i))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(a) => write!(f, "{a}"),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `num / den` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, RatFuncError> {
        if num.field() != den.field() {
            return Err(RatFuncError::FieldMismatch);
        }
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (num, den) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let lead = den.leading().expect("nonzero").inverse().expect("nonzero");
        Ok(RatFunc { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn polynomial(p: Poly) -> RatFunc {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn embed(&self, emb: &FieldEmbedding) -> RatFunc {
        RatFunc { num: self.num.embed(emb), den: self.den.embed(emb) }
    }

    /// `f(1/T)`, as a rational function of `T`.
    pub fn at_infinity_chart(&self) -> RatFunc {
        let d = self.degree();
        RatFunc::new(self.num.reversed(d), self.den.reversed(d)).expect("denominator stays nonzero")
    }

    /// Image of a finite point.
    fn eval_finite(&self, a: &FFElem) -> ProjPoint {
        let d = self.den.eval(a);
        if d.is_zero() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(self.num.eval(a).checked_div(&d).expect("nonzero"))
        }
    }

    /// Evaluates the map at a point of `P^1` over the function's own field.
    pub fn eval_proj(&self, x: &ProjPoint) -> ProjPoint {
        match x {
            ProjPoint::Finite(a) => self.eval_finite(a),
            ProjPoint::Infinity => self.at_infinity_chart().eval_finite(&self.field().zero()),
        }
    }

    /// Ramification index at `a`: the valuation at `a` of `f - f(a)`, or of
    /// `1/f` at a pole. Infinity goes through the chart `X = 1/T`.
    pub fn ram_index(&self, a: &ProjPoint) -> Result<usize, RatFuncError> {
        if self.is_constant() {
            return Err(RatFuncError::ConstantMap);
        }
        match a {
            ProjPoint::Finite(a) => {
                if a.field() != self.field() {
                    return Err(RatFuncError::PointFieldMismatch);
                }
                Ok(self.ram_index_finite(a))
            }
            ProjPoint::Infinity => Ok(self.at_infinity_chart().ram_index_finite(&self.field().zero())),
        }
    }

    fn ram_index_finite(&self, a: &FFElem) -> usize {
        let fiber = match self.eval_finite(a) {
            ProjPoint::Infinity => self.den.clone(),
            ProjPoint::Finite(b) => self.fiber_poly(&b),
        };
        fiber.root_multiplicity(a).expect("nonconstant map has nonzero fiber polynomial")
    }

    /// `num - b * den`, whose roots are the finite preimages of `b`.
    pub fn fiber_poly(&self, b: &FFElem) -> Poly {
        self.num.sub(&self.den.scale(b))
    }

    /// `g(X^k)` as a rational function.
    pub fn inflate(&self, k: usize) -> RatFunc {
        RatFunc::new(self.num.inflate(k), self.den.inflate(k)).expect("nonzero denominator")
    }

    /// `self(g(X))` for a polynomial `g`.
    pub fn compose_poly(&self, g: &Poly) -> RatFunc {
        RatFunc::new(self.num.compose(g), self.den.compose(g)).expect("nonzero denominator")
    }

    /// `c * self + b`.
    pub fn affine_post(&self, c: &FFElem, b: &FFElem) -> RatFunc {
        RatFunc::new(self.num.scale(c).add(&self.den.scale(b)), self.den.clone()).expect("nonzero denominator")
    }
}

/// Writes `f = g(X^{p^e})` with `g` separable and `e` maximal.
pub fn separable_core(f: &RatFunc) -> (RatFunc, u32) {
    let p = f.field().characteristic() as usize;
    let mut g = f.clone();
    let mut e = 0;
    while !g.is_constant() && g.num.is_in_powers_of(p) && g.den.is_in_powers_of(p) {
        g = RatFunc { num: g.num.deflate(p), den: g.den.deflate(p) };
        e += 1;
    }
    (g, e)
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `num` for polynomials, otherwise `num/den` with parentheses around
/// multi-term parts.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if s.contains('+') || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}
