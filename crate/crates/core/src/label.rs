//! Refined labels and their field arithmetic.
//!
//! A refined label `L_a` at resolution `m` stands for the real value
//! `a/(m+1)`. Indices are exact rationals, so every field operation is exact;
//! roots and non-integer powers leave the rationals and return [`ApproxLabel`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{FlarlError, Result};
use crate::rational::{self, format_sig, powi, to_f64, Rational};

/// Default relative tolerance for approximate labels.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Number of interior labels. The identity label is `L_{m+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution(u32);

impl Resolution {
    pub fn new(m: i64) -> Result<Self> {
        if m < 1 || m >= u32::MAX as i64 {
            return Err(FlarlError::InvalidResolution(m));
        }
        Ok(Resolution(m as u32))
    }

    pub fn m(self) -> u32 {
        self.0
    }

    /// `m + 1`, the index of the identity label.
    pub fn unit_index(self) -> u64 {
        self.0 as u64 + 1
    }

    pub fn scale(self) -> Rational {
        Rational::from_integer(BigInt::from(self.unit_index()))
    }

    pub(crate) fn check(self, other: Resolution) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(FlarlError::ResolutionMismatch { left: self.0, right: other.0 })
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}", self.0)
    }
}

/// Image of a label under the canonical isomorphism onto the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealImage(pub Rational);

impl RealImage {
    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for RealImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::render(&self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactLabel {
    index: Rational,
    res: Resolution,
}

impl ExactLabel {
    pub fn new(index: Rational, res: Resolution) -> Self {
        ExactLabel { index, res }
    }

    pub fn int(index: i64, res: Resolution) -> Self {
        ExactLabel::new(rational::int(index), res)
    }

    pub fn zero(res: Resolution) -> Self {
        ExactLabel::new(Rational::zero(), res)
    }

    /// `L_{m+1}`, the multiplicative identity.
    pub fn unit(res: Resolution) -> Self {
        ExactLabel::new(res.scale(), res)
    }

    pub fn index(&self) -> &Rational {
        &self.index
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn is_zero(&self) -> bool {
        self.index.is_zero()
    }

    /// Membership in `L_Z`.
    pub fn has_integer_index(&self) -> bool {
        self.index.is_integer()
    }

    pub fn to_real(&self) -> RealImage {
        RealImage(&self.index / self.res.scale())
    }

    pub fn from_real(r: &RealImage, res: Resolution) -> Self {
        ExactLabel::new(&r.0 * res.scale(), res)
    }

    /// Shorthand for `from_real` on a bare rational.
    pub fn from_value(r: &Rational, res: Resolution) -> Self {
        ExactLabel::new(r * res.scale(), res)
    }

    pub fn add(&self, other: &ExactLabel) -> Result<ExactLabel> {
        self.res.check(other.res)?;
        Ok(ExactLabel::new(&self.index + &other.index, self.res))
    }

    pub fn sub(&self, other: &ExactLabel) -> Result<ExactLabel> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExactLabel {
        ExactLabel::new(-&self.index, self.res)
    }

    /// `L_a × L_b = L_{ab/(m+1)}`.
    pub fn mul(&self, other: &ExactLabel) -> Result<ExactLabel> {
        self.res.check(other.res)?;
        Ok(ExactLabel::new(&self.index * &other.index / self.res.scale(), self.res))
    }

    /// `(L_a)^{-1} = L_{(m+1)^2/a}`.
    pub fn inv(&self) -> Result<ExactLabel> {
        if self.is_zero() {
            return Err(FlarlError::DivisionByZeroLabel);
        }
        let s = self.res.scale();
        Ok(ExactLabel::new(&s * &s / &self.index, self.res))
    }

    pub fn div(&self, other: &ExactLabel) -> Result<ExactLabel> {
        self.res.check(other.res)?;
        self.mul(&other.inv()?)
    }

    /// `α L_a = L_{αa}`.
    pub fn scale(&self, alpha: &Rational) -> ExactLabel {
        ExactLabel::new(alpha * &self.index, self.res)
    }

    pub fn scalar_div(&self, beta: &Rational) -> Result<ExactLabel> {
        if beta.is_zero() {
            return Err(FlarlError::DivisionByZeroScalar);
        }
        Ok(self.scale(&beta.recip()))
    }

    /// `L_a + α = L_{a + α(m+1)}`.
    pub fn mixed_add(&self, alpha: &Rational) -> ExactLabel {
        ExactLabel::new(&self.index + alpha * self.res.scale(), self.res)
    }

    /// `L_a − α`.
    pub fn mixed_sub(&self, alpha: &Rational) -> ExactLabel {
        self.mixed_add(&-alpha)
    }

    /// `α − L_a = L_{α(m+1) − a}`.
    pub fn mixed_rsub(&self, alpha: &Rational) -> ExactLabel {
        self.mixed_add(&-alpha).neg()
    }

    /// `α ÷ L_a = L_{α(m+1)^2/a}`.
    pub fn mixed_div_rev(alpha: &Rational, a: &ExactLabel) -> Result<ExactLabel> {
        if a.is_zero() {
            return Err(FlarlError::DivisionByZeroLabel);
        }
        let s = a.res.scale();
        Ok(ExactLabel::new(alpha * &s * &s / &a.index, a.res))
    }

    /// `(L_a)^p = L_{a^p/(m+1)^{p-1}}` for integer `p`; `p = 0` gives `L_{m+1}`.
    pub fn pow(&self, p: i64) -> Result<ExactLabel> {
        if p == 0 {
            return Ok(ExactLabel::unit(self.res));
        }
        if p < 0 && self.is_zero() {
            return Err(FlarlError::DivisionByZeroLabel);
        }
        let num = powi(&self.index, p).map_err(|_| FlarlError::DivisionByZeroLabel)?;
        let den = powi(&self.res.scale(), p - 1)?;
        Ok(ExactLabel::new(num / den, self.res))
    }

    /// k-th root, `k >= 2`. Odd roots of negative labels are real and allowed.
    pub fn root(&self, k: u32) -> Result<ApproxLabel> {
        if k < 2 {
            return Err(FlarlError::DomainError(format!("root order must be at least 2, got {k}")));
        }
        if self.index.is_negative() && k.is_multiple_of(2) {
            return Err(FlarlError::NegativeEvenRoot);
        }
        let r = to_f64(self.to_real().value());
        let root = r.signum() * r.abs().powf(1.0 / k as f64);
        ApproxLabel::from_value(root, self.res)
    }

    /// `(L_a)^{L_b}` with real exponent `p = b/(m+1)`.
    pub fn vector_pow(&self, exponent: &ExactLabel) -> Result<ApproxLabel> {
        self.res.check(exponent.res)?;
        let p = exponent.to_real().0;
        self.real_pow(&p)
    }

    /// The `L_b`-th root of `L_a`, i.e. `L_a` raised to `(m+1)/b`.
    pub fn vector_root(&self, order: &ExactLabel) -> Result<ApproxLabel> {
        self.res.check(order.res)?;
        if order.is_zero() {
            return Err(FlarlError::DivisionByZeroLabel);
        }
        let p = self.res.scale() / &order.index;
        self.real_pow(&p)
    }

    fn real_pow(&self, p: &Rational) -> Result<ApproxLabel> {
        if p.is_integer() {
            if let Some(e) = num_traits::ToPrimitive::to_i64(p.numer()) {
                return Ok(ApproxLabel::from_exact(&self.pow(e)?));
            }
        }
        if !self.index.is_positive() {
            return Err(FlarlError::DomainError(format!(
                "base {self} must be positive for the non-integer exponent {}",
                rational::render(p)
            )));
        }
        let v = to_f64(self.to_real().value()).powf(to_f64(p));
        ApproxLabel::from_value(v, self.res)
    }

    /// `[L_a, L_b] = L_a×L_b − L_b×L_a`, identically `L_0`.
    pub fn lie_bracket(&self, other: &ExactLabel) -> Result<ExactLabel> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Parses the canonical rendering `L<num>` / `L<num>/<den>`, or `0` for `L0`.
    pub fn parse(text: &str, res: Resolution) -> Result<ExactLabel> {
        let s = text.trim();
        if s == "0" {
            return Ok(ExactLabel::zero(res));
        }
        let body = s
            .strip_prefix('L')
            .ok_or_else(|| FlarlError::parse(0, format!("expected a label like `L3`, found `{s}`")))?;
        if body.contains('.') {
            return Err(FlarlError::parse(1, format!("label index must be p or p/q, found `{s}`")));
        }
        let index = rational::parse_rational(body).map_err(|_| FlarlError::parse(1, format!("invalid label `{s}`")))?;
        Ok(ExactLabel::new(index, res))
    }
}

impl fmt::Display for ExactLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", rational::render(&self.index))
    }
}

/// A label whose index left the rationals (roots, real powers).
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxLabel {
    index: f64,
    res: Resolution,
    tol: f64,
}

impl ApproxLabel {
    pub fn new(index: f64, res: Resolution) -> Result<Self> {
        if !index.is_finite() {
            return Err(FlarlError::DomainError(format!("non-finite label index {index}")));
        }
        Ok(ApproxLabel { index, res, tol: DEFAULT_TOL })
    }

    /// Label whose real image is `value`.
    pub fn from_value(value: f64, res: Resolution) -> Result<Self> {
        ApproxLabel::new(value * res.unit_index() as f64, res)
    }

    pub fn from_exact(l: &ExactLabel) -> Self {
        ApproxLabel { index: to_f64(l.index()), res: l.res, tol: DEFAULT_TOL }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn index(&self) -> f64 {
        self.index
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn real(&self) -> f64 {
        self.index / self.res.unit_index() as f64
    }

    /// `|index − exact| <= tol · max(1, |exact|)`, same resolution required.
    pub fn approx_eq(&self, exact: &ExactLabel) -> bool {
        if self.res != exact.res {
            return false;
        }
        let e = to_f64(exact.index());
        (self.index - e).abs() <= self.tol * e.abs().max(1.0)
    }

    /// Nearest rational with denominator at most `max_den` that matches within tolerance.
    pub fn snap(&self, max_den: i64) -> Option<ExactLabel> {
        for d in 1..=max_den {
            let n = (self.index * d as f64).round();
            if n.abs() > 9.0e15 {
                return None;
            }
            let cand = ExactLabel::new(Rational::new(BigInt::from(n as i64), BigInt::from(d)), self.res);
            if self.approx_eq(&cand) {
                return Some(cand);
            }
        }
        None
    }
}

impl fmt::Display for ApproxLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L~{}", format_sig(self.index, 12))
    }
}

/// Either an exact label or an approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyLabel {
    Exact(ExactLabel),
    Approx(ApproxLabel),
}

impl AnyLabel {
    pub fn resolution(&self) -> Resolution {
        match self {
            AnyLabel::Exact(l) => l.resolution(),
            AnyLabel::Approx(l) => l.resolution(),
        }
    }

    pub fn real_f64(&self) -> f64 {
        match self {
            AnyLabel::Exact(l) => to_f64(l.to_real().value()),
            AnyLabel::Approx(l) => l.real(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnyLabel::Exact(_))
    }

    /// `real=` rendering: exact rational, or 12 significant digits.
    pub fn render_real(&self) -> String {
        match self {
            AnyLabel::Exact(l) => l.to_real().to_string(),
            AnyLabel::Approx(l) => format_sig(l.real(), 12),
        }
    }
}

impl fmt::Display for AnyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyLabel::Exact(l) => l.fmt(f),
            AnyLabel::Approx(l) => l.fmt(f),
        }
    }
}

pub(crate) fn check_all<'a>(res: Resolution, labels: impl IntoIterator<Item = &'a ExactLabel>) -> Result<()> {
    labels.into_iter().try_for_each(|l| res.check(l.resolution()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(n: i64) -> Resolution {
        Resolution::new(n).unwrap()
    }

    fn l(n: i64, d: i64, res: Resolution) -> ExactLabel {
        ExactLabel::new(rat(n, d), res)
    }

    #[test]
    fn resolution_bounds() {
        assert!(Resolution::new(0).is_err());
        assert_eq!(m(4).unit_index(), 5);
        assert_eq!(ExactLabel::unit(m(4)), ExactLabel::int(5, m(4)));
    }

    #[test]
    fn real_image_examples() {
        let r = m(4);
        assert_eq!(ExactLabel::zero(r).to_real().0, int(0));
        assert_eq!(ExactLabel::int(5, r).to_real().0, int(1));
        assert_eq!(l(6, 5, r).to_real().0, rat(6, 25));
        assert_eq!(ExactLabel::from_value(&int(1), r), ExactLabel::int(5, r));
        assert_eq!(ExactLabel::from_value(&rat(6, 25), r), l(6, 5, r));
        assert_eq!(ExactLabel::from_value(&int(-3), m(1)), ExactLabel::int(-6, m(1)));
    }

    #[test]
    fn add_neg_examples() {
        let r = m(4);
        let a = ExactLabel::int(2, r);
        assert_eq!(a.add(&ExactLabel::int(3, r)).unwrap(), ExactLabel::int(5, r));
        assert_eq!(a.add(&ExactLabel::zero(r)).unwrap(), a);
        assert_eq!(ExactLabel::int(7, r).add(&ExactLabel::int(-7, r)).unwrap(), ExactLabel::zero(r));
        assert_eq!(ExactLabel::int(3, r).neg(), ExactLabel::int(-3, r));
        assert_eq!(ExactLabel::zero(r).neg(), ExactLabel::zero(r));
        assert_eq!(l(7, 2, r).neg().neg(), l(7, 2, r));
        let err = a.add(&ExactLabel::int(2, m(3))).unwrap_err();
        assert_eq!(err.name(), "ResolutionMismatch");
    }

    #[test]
    fn mul_inv_div_examples() {
        let r = m(4);
        let two = ExactLabel::int(2, r);
        let three = ExactLabel::int(3, r);
        assert_eq!(two.mul(&three).unwrap(), l(6, 5, r));
        assert_eq!(three.mul(&ExactLabel::unit(r)).unwrap(), three);
        assert_eq!(two.mul(&ExactLabel::zero(r)).unwrap(), ExactLabel::zero(r));
        assert_eq!(two.inv().unwrap(), l(25, 2, r));
        assert_eq!(two.mul(&l(25, 2, r)).unwrap(), ExactLabel::unit(r));
        assert_eq!(ExactLabel::unit(r).inv().unwrap(), ExactLabel::unit(r));
        assert_eq!(three.div(&two).unwrap(), l(15, 2, r));
        assert_eq!(ExactLabel::zero(r).inv().unwrap_err(), FlarlError::DivisionByZeroLabel);
    }

    #[test]
    fn scalar_and_mixed_examples() {
        let r = m(4);
        let two = ExactLabel::int(2, r);
        assert_eq!(two.scale(&int(3)), ExactLabel::int(6, r));
        assert_eq!(l(7, 3, r).scale(&int(-1)), l(-7, 3, r));
        assert_eq!(ExactLabel::int(6, r).scalar_div(&int(3)).unwrap(), two);
        assert_eq!(two.scalar_div(&int(0)).unwrap_err(), FlarlError::DivisionByZeroScalar);
        assert_eq!(two.mixed_add(&int(1)), ExactLabel::int(7, r));
        assert_eq!(two.mixed_rsub(&int(1)), ExactLabel::int(3, r));
        assert_eq!(two.mixed_add(&int(0)), two);
        let five = ExactLabel::unit(r);
        assert_eq!(ExactLabel::mixed_div_rev(&int(3), &five).unwrap(), ExactLabel::int(15, r));
        assert_eq!(ExactLabel::mixed_div_rev(&int(2), &five).unwrap(), ExactLabel::int(10, r));
        assert_eq!(ExactLabel::mixed_div_rev(&int(0), &two).unwrap(), ExactLabel::zero(r));
        assert!(ExactLabel::mixed_div_rev(&int(1), &ExactLabel::zero(r)).is_err());
    }

    #[test]
    fn power_examples() {
        assert_eq!(ExactLabel::int(4, m(1)).pow(2).unwrap(), ExactLabel::int(8, m(1)));
        let two = ExactLabel::int(2, m(4));
        assert_eq!(two.pow(-1).unwrap(), l(25, 2, m(4)));
        assert_eq!(two.pow(1).unwrap(), two);
        assert_eq!(two.pow(0).unwrap(), ExactLabel::unit(m(4)));
        assert_eq!(ExactLabel::zero(m(4)).pow(-2).unwrap_err(), FlarlError::DivisionByZeroLabel);
    }

    #[test]
    fn root_examples() {
        assert!(ApproxLabel::from_exact(&ExactLabel::int(4, m(3))).approx_eq(&ExactLabel::int(4, m(3))));
        assert!(ExactLabel::int(4, m(3)).root(2).unwrap().approx_eq(&ExactLabel::int(4, m(3))));
        assert!(ExactLabel::int(5, m(4)).root(2).unwrap().approx_eq(&ExactLabel::int(5, m(4))));
        assert_eq!(ExactLabel::int(-2, m(4)).root(2).unwrap_err(), FlarlError::NegativeEvenRoot);
        // odd root of a negative label stays real: f_R(L_-40) = -8 at m=4
        assert!(ExactLabel::int(-40, m(4)).root(3).unwrap().approx_eq(&ExactLabel::int(-10, m(4))));
    }

    #[test]
    fn vector_power_and_root_examples() {
        let r = m(1);
        assert!(ExactLabel::int(8, r).vector_pow(&ExactLabel::int(4, r)).unwrap().approx_eq(&ExactLabel::int(32, r)));
        assert!(ExactLabel::int(6, r).vector_pow(&ExactLabel::int(2, r)).unwrap().approx_eq(&ExactLabel::int(6, r)));
        let a = l(7, 3, m(4));
        assert!(a.vector_pow(&ExactLabel::unit(m(4))).unwrap().approx_eq(&a));
        assert!(ExactLabel::int(32, r).vector_root(&ExactLabel::int(4, r)).unwrap().approx_eq(&ExactLabel::int(8, r)));
        assert!(a.vector_root(&ExactLabel::unit(m(4))).unwrap().approx_eq(&a));
        assert_eq!(
            ExactLabel::int(4, r).vector_root(&ExactLabel::zero(r)).unwrap_err(),
            FlarlError::DivisionByZeroLabel
        );
        // f_R exponent 1/2 on a negative base
        let err = ExactLabel::int(-2, r).vector_pow(&ExactLabel::int(1, r)).unwrap_err();
        assert_eq!(err.name(), "DomainError");
        // integer exponent on a negative base is fine: (-1)^2 = 1
        assert!(ExactLabel::int(-2, r).vector_pow(&ExactLabel::int(4, r)).unwrap().approx_eq(&ExactLabel::int(2, r)));
    }

    #[test]
    fn lie_bracket_vanishes() {
        let r = m(4);
        let z = ExactLabel::zero(r);
        assert_eq!(ExactLabel::int(2, r).lie_bracket(&ExactLabel::int(3, r)).unwrap(), z);
        assert_eq!(l(7, 2, r).lie_bracket(&l(7, 2, r)).unwrap(), z);
        assert_eq!(z.lie_bracket(&ExactLabel::int(7, r)).unwrap(), z);
    }

    #[test]
    fn canonical_rendering() {
        let r = m(4);
        assert_eq!(l(-7, 2, r).to_string(), "L-7/2");
        assert_eq!(l(6, 3, r).to_string(), "L2");
        assert_eq!(ExactLabel::parse("L-7/2", r).unwrap(), l(-7, 2, r));
        assert_eq!(ExactLabel::parse("0", r).unwrap(), ExactLabel::zero(r));
        assert!(ExactLabel::parse("L1.5", r).is_err());
        assert!(ExactLabel::parse("3", r).is_err());
        assert!(ExactLabel::parse("L", r).is_err());
    }

    #[test]
    fn approx_tolerance_is_relative() {
        let r = m(4);
        let big = ExactLabel::int(1_000_000, r);
        let near = ApproxLabel::new(1_000_000.000_5, r).unwrap();
        assert!(near.approx_eq(&big));
        let far = ApproxLabel::new(1_000_000.01, r).unwrap();
        assert!(!far.approx_eq(&big));
        assert!(ApproxLabel::new(f64::NAN, r).is_err());
        assert_eq!(ApproxLabel::new(2.5, r).unwrap().snap(10), Some(l(5, 2, r)));
    }
}
