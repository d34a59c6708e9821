//! Truncated Laurent series over `F_q((t))`.

use std::fmt;

use crate::field::{FFElem, Field};

pub const DEFAULT_PRECISION: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("series over different fields")]
    FieldMismatch,
    #[error("series is not a unit (valuation {0})")]
    NotAUnit(i64),
    #[error("root of order {m} is wild in characteristic {p}")]
    WildRoot { m: u64, p: u64 },
    #[error("series is not a 1-unit")]
    NotOneUnit,
    #[error("precision must be positive")]
    ZeroPrecision,
}

/// `Σ coeffs[i] t^(valuation + i) + O(t^(valuation + precision))`.
///
/// The leading coefficient is nonzero unless every known coefficient is
/// zero.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    valuation: i64,
    coeffs: Vec<FFElem>,
}

impl LaurentSeries {
    /// Pads or truncates `coeffs` to `precision` and moves leading zeros into
    /// the valuation.
    pub fn new(
        field: &Field,
        valuation: i64,
        mut coeffs: Vec<FFElem>,
        precision: usize,
    ) -> Result<LaurentSeries, LaurentError> {
        if precision == 0 {
            return Err(LaurentError::ZeroPrecision);
        }
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(LaurentError::FieldMismatch);
        }
        coeffs.resize(precision, field.zero());
        Ok(LaurentSeries::normalized(field, valuation, coeffs))
    }

    fn normalized(field: &Field, mut valuation: i64, mut coeffs: Vec<FFElem>) -> LaurentSeries {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        if let Some(k) = lead.filter(|&k| k > 0) {
            coeffs.drain(..k);
            valuation += k as i64;
        }
        LaurentSeries { field: field.clone(), valuation, coeffs }
    }

    pub fn constant(c: FFElem, precision: usize) -> LaurentSeries {
        let field = c.field().clone();
        LaurentSeries::new(&field, 0, vec![c], precision.max(1)).expect("positive precision")
    }

    pub fn one(field: &Field, precision: usize) -> LaurentSeries {
        LaurentSeries::constant(field.one(), precision)
    }

    /// `c t^e`.
    pub fn monomial(c: FFElem, e: i64, precision: usize) -> LaurentSeries {
        let field = c.field().clone();
        LaurentSeries::new(&field, e, vec![c], precision.max(1)).expect("positive precision")
    }

    /// From integer coefficients of `t^valuation, t^(valuation+1), ...`.
    pub fn from_ints(
        field: &Field,
        valuation: i64,
        coeffs: &[i64],
        precision: usize,
    ) -> Result<LaurentSeries, LaurentError> {
        LaurentSeries::new(field, valuation, coeffs.iter().map(|&c| field.from_int(c)).collect(), precision)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Number of known coefficients from the valuation on.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent of the first unknown coefficient.
    pub fn absolute_precision(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FFElem::is_zero)
    }

    /// Coefficient of `t^e`; zero below the valuation, `None` past the
    /// precision.
    pub fn coeff(&self, e: i64) -> Option<FFElem> {
        if e < self.valuation {
            return Some(self.field.zero());
        }
        self.coeffs.get((e - self.valuation) as usize).cloned()
    }

    pub fn leading(&self) -> &FFElem {
        &self.coeffs[0]
    }

    fn check_field(&self, other: &LaurentSeries) -> Result<(), LaurentError> {
        if self.field != other.field {
            return Err(LaurentError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries, LaurentError> {
        self.check_field(other)?;
        let v = self.valuation.min(other.valuation);
        let end = self.absolute_precision().min(other.absolute_precision());
        let coeffs = (v..end).map(|e| &self.coeff(e).expect("known") + &other.coeff(e).expect("known")).collect();
        Ok(LaurentSeries::normalized(&self.field, v, coeffs))
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries, LaurentError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FFElem) -> LaurentSeries {
        LaurentSeries::normalized(&self.field, self.valuation, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: i64) -> LaurentSeries {
        LaurentSeries { valuation: self.valuation + e, ..self.clone() }
    }

    /// Keeps at most `precision` coefficients.
    pub fn truncate(&self, precision: usize) -> LaurentSeries {
        let mut s = self.clone();
        s.coeffs.truncate(precision.max(1));
        s
    }

    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries, LaurentError> {
        self.check_field(other)?;
        let prec = self.precision().min(other.precision());
        let mut out = vec![self.field.zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(prec - i).enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(LaurentSeries::normalized(&self.field, self.valuation + other.valuation, out))
    }

    pub fn pow(&self, mut e: u64) -> LaurentSeries {
        let mut acc = LaurentSeries::one(&self.field, self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Inverse of a valuation-0 series by coefficient recursion.
    pub fn invert_unit(&self) -> Result<LaurentSeries, LaurentError> {
        if self.valuation != 0 || self.is_zero() {
            return Err(LaurentError::NotAUnit(self.valuation));
        }
        let a0_inv = self.coeffs[0].inverse().expect("nonzero leading coefficient");
        let mut b: Vec<FFElem> = vec![a0_inv.clone()];
        for k in 1..self.precision() {
            let mut s = self.field.zero();
            for i in 1..=k {
                s = &s + &(&self.coeffs[i] * &b[k - i]);
            }
            b.push(-&(&s * &a0_inv));
        }
        Ok(LaurentSeries::normalized(&self.field, 0, b))
    }

    /// Inverse of any nonzero series.
    pub fn inverse(&self) -> Result<LaurentSeries, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::NotAUnit(self.valuation));
        }
        Ok(self.shift(-self.valuation).invert_unit()?.shift(-self.valuation))
    }

    /// Whether both agree on every coefficient either of them knows.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        self.field == other.field && self.sub(other).is_ok_and(|d| d.is_zero())
    }
}

/// The `m`-th root of a 1-unit with leading coefficient 1, solved one
/// coefficient at a time: `m b_k = u_k - [t^k] (Σ_{i<k} b_i t^i)^m`.
pub fn nth_root_one_unit(u: &LaurentSeries, m: u64) -> Result<LaurentSeries, LaurentError> {
    let p = u.field.characteristic();
    if m == 0 || m.is_multiple_of(p) {
        return Err(LaurentError::WildRoot { m, p });
    }
    if u.valuation != 0 || !u.coeffs[0].is_one() {
        return Err(LaurentError::NotOneUnit);
    }
    let field = &u.field;
    let m_inv = field.from_int((m % p) as i64).inverse().expect("p does not divide m");
    let prec = u.precision();
    let mut b = vec![field.one()];
    for k in 1..prec {
        // [t^k] w^m for w = Σ_{i<k} b_i t^i, truncated after t^k
        let w = LaurentSeries { field: field.clone(), valuation: 0, coeffs: b.clone() }.padded(k + 1);
        let ck = w.pow(m).coeff(k as i64).expect("within precision");
        b.push(&(&u.coeffs[k] - &ck) * &m_inv);
    }
    Ok(LaurentSeries::normalized(field, 0, b))
}

impl LaurentSeries {
    fn padded(mut self, len: usize) -> LaurentSeries {
        self.coeffs.resize(len, self.field.zero());
        self
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(t^{})", self.absolute_precision())
    }
}

/// `t^-1 + 2 + (g+1)*t^3`: ascending exponents; extension coefficients are
/// written in `g`.
impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let e = self.valuation + i as i64;
            let cs = c.to_poly_string("g");
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            let mono = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            match (e, c.is_one()) {
                (0, _) => f.write_str(&cs)?,
                (_, true) => f.write_str(&mono)?,
                _ => write!(f, "{cs}*{mono}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
