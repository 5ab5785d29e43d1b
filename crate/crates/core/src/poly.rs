//! The polynomial ring `L_R[x]` with label coefficients.
//!
//! The indeterminate `x` is the monic linear polynomial with leading
//! coefficient `L_{m+1}`, so coefficientwise `f_R` is a ring isomorphism onto
//! rational polynomials. Arithmetic here is done with label operations; only
//! rendering and root isolation look at the image.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{FlarlError, Result};
use crate::label::{check_all, ExactLabel, Resolution};
use crate::rational::{self, factorial, Rational};

/// Degree of a polynomial; the zero polynomial sits below every integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelPoly {
    coeffs: Vec<ExactLabel>,
    res: Resolution,
}

impl LabelPoly {
    /// Coefficients lowest degree first; trailing zeros are stripped.
    pub fn new(coeffs: Vec<ExactLabel>, res: Resolution) -> Result<Self> {
        check_all(res, &coeffs)?;
        Ok(LabelPoly::normalized(coeffs, res))
    }

    fn normalized(mut coeffs: Vec<ExactLabel>, res: Resolution) -> Self {
        while coeffs.last().is_some_and(ExactLabel::is_zero) {
            coeffs.pop();
        }
        LabelPoly { coeffs, res }
    }

    pub fn from_indices(indices: &[i64], res: Resolution) -> Self {
        LabelPoly::normalized(indices.iter().map(|&i| ExactLabel::int(i, res)).collect(), res)
    }

    pub fn zero(res: Resolution) -> Self {
        LabelPoly { coeffs: Vec::new(), res }
    }

    pub fn constant(c: ExactLabel) -> Self {
        let res = c.resolution();
        LabelPoly::normalized(vec![c], res)
    }

    /// The constant polynomial `L_{m+1}`, the ring identity.
    pub fn one(res: Resolution) -> Self {
        LabelPoly::constant(ExactLabel::unit(res))
    }

    /// The indeterminate `x`.
    pub fn x(res: Resolution) -> Self {
        LabelPoly { coeffs: vec![ExactLabel::zero(res), ExactLabel::unit(res)], res }
    }

    /// `x − L_c`.
    pub fn linear_factor(c: &ExactLabel) -> Self {
        let res = c.resolution();
        LabelPoly { coeffs: vec![c.neg(), ExactLabel::unit(res)], res }
    }

    /// `c·x^k`.
    pub fn monomial(c: ExactLabel, k: usize) -> Self {
        let res = c.resolution();
        let mut coeffs = vec![ExactLabel::zero(res); k];
        coeffs.push(c);
        LabelPoly::normalized(coeffs, res)
    }

    pub fn from_real(coeffs: &[Rational], res: Resolution) -> Self {
        LabelPoly::normalized(coeffs.iter().map(|c| ExactLabel::from_value(c, res)).collect(), res)
    }

    pub fn to_real(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|c| c.to_real().0).collect()
    }

    pub fn coeffs(&self) -> &[ExactLabel] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, `L_0` past the degree.
    pub fn coeff(&self, i: usize) -> ExactLabel {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ExactLabel::zero(self.res))
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading(&self) -> Option<&ExactLabel> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(&ExactLabel::unit(self.res))
    }

    pub fn add(&self, other: &LabelPoly) -> Result<Self> {
        self.res.check(other.res)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect::<Result<_>>()?;
        Ok(LabelPoly::normalized(coeffs, self.res))
    }

    pub fn neg(&self) -> Self {
        LabelPoly { coeffs: self.coeffs.iter().map(ExactLabel::neg).collect(), res: self.res }
    }

    pub fn sub(&self, other: &LabelPoly) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        LabelPoly::normalized(self.coeffs.iter().map(|c| c.scale(alpha)).collect(), self.res)
    }

    /// Coefficientwise label product with a constant label.
    pub fn label_scale(&self, c: &ExactLabel) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| c.mul(a)).collect::<Result<_>>()?;
        Ok(LabelPoly::normalized(coeffs, self.res))
    }

    /// Convolution with `label_mul` / `label_add`.
    pub fn mul(&self, other: &LabelPoly) -> Result<Self> {
        self.res.check(other.res)?;
        if self.is_zero() || other.is_zero() {
            return Ok(LabelPoly::zero(self.res));
        }
        let mut coeffs = vec![ExactLabel::zero(self.res); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(LabelPoly::normalized(coeffs, self.res))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        (0..n).try_fold(LabelPoly::one(self.res), |acc, _| acc.mul(self))
    }

    /// `Σ coeff_i × (L_c)^i`.
    pub fn eval(&self, c: &ExactLabel) -> Result<ExactLabel> {
        self.res.check(c.resolution())?;
        let mut acc = self.coeff(0);
        for (i, a) in self.coeffs.iter().enumerate().skip(1) {
            acc = acc.add(&a.mul(&c.pow(i as i64)?)?)?;
        }
        Ok(acc)
    }

    /// Euclidean division: `self = d·q + r` with `r = 0` or `deg r < deg d`.
    pub fn divmod(&self, d: &LabelPoly) -> Result<(LabelPoly, LabelPoly)> {
        self.res.check(d.res)?;
        let Some(lead) = d.leading() else {
            return Err(FlarlError::ZeroPolynomialDivisor);
        };
        let dd = d.coeffs.len() - 1;
        let mut r = self.clone();
        let mut q = vec![ExactLabel::zero(self.res); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Degree::Finite(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let k = dr - dd;
            let t = r.leading().expect("nonzero").div(lead)?;
            let step = LabelPoly::monomial(t.clone(), k).mul(d)?;
            q[k] = t;
            r = r.sub(&step)?;
            debug_assert!(r.degree() < Degree::Finite(dr));
        }
        Ok((LabelPoly::normalized(q, self.res), r))
    }

    pub fn rem(&self, d: &LabelPoly) -> Result<LabelPoly> {
        Ok(self.divmod(d)?.1)
    }

    /// Divides by the leading coefficient so it becomes `L_{m+1}`.
    pub fn monic(&self) -> Result<LabelPoly> {
        let lead = self.leading().ok_or(FlarlError::ZeroPolynomial)?;
        let inv = lead.inv()?;
        self.label_scale(&inv)
    }

    /// Coefficient of `x^{i−1}` is `i · coeff_i`.
    pub fn derivative(&self) -> LabelPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&rational::int(i as i64)))
            .collect();
        LabelPoly::normalized(coeffs, self.res)
    }

    pub fn nth_derivative(&self, k: usize) -> LabelPoly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// `d | self`.
    pub fn is_divisible_by(&self, d: &LabelPoly) -> Result<bool> {
        Ok(self.rem(d)?.is_zero())
    }

    /// `deg gcd(f, f′) = 0`.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(FlarlError::ZeroPolynomial);
        }
        if self.degree() == Degree::Finite(0) {
            return Ok(true);
        }
        let g = poly_gcd(&[self.clone(), self.derivative()])?;
        Ok(g.degree() == Degree::Finite(0))
    }

    /// Irreducibility over the rational image, decided for degree ≤ 3.
    ///
    /// Degree 2 and 3 polynomials are irreducible iff they have no rational
    /// root; higher degrees return `None` unless a rational root is found.
    pub fn is_irreducible(&self) -> Result<Option<bool>> {
        match self.degree() {
            Degree::NegInf => Err(FlarlError::ZeroPolynomial),
            Degree::Finite(0) => Ok(Some(false)),
            Degree::Finite(1) => Ok(Some(true)),
            Degree::Finite(d) => {
                let has_root = !crate::roots::rational_roots(&self.to_real()).is_empty();
                if has_root {
                    Ok(Some(false))
                } else if d <= 3 {
                    Ok(Some(true))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// Text form `L<r0> + L<r1> x + L<r2> x^2`, zero coefficients omitted.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "L0".to_string();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c} x"),
                _ => format!("{c} x^{i}"),
            })
            .collect();
        terms.join(" + ")
    }

    /// The real-image polynomial, e.g. `2/5 - x + 1/5 x^3`.
    pub fn render_real(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.to_real().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mag = c.abs();
            let coef = match i {
                0 => rational::render(&mag),
                _ if mag.is_one() => String::new(),
                _ => format!("{} ", rational::render(&mag)),
            };
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let sign = match (out.is_empty(), c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            out.push_str(&format!("{sign}{coef}{var}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn parse(text: &str, res: Resolution) -> Result<Self> {
        let mut coeffs: Vec<ExactLabel> = Vec::new();
        let mut pos = 0;
        for term in text.split('+') {
            let t = term.trim();
            let start = pos + term.len() - term.trim_start().len();
            pos += term.len() + 1;
            if t.is_empty() {
                return Err(FlarlError::parse(start, "empty term"));
            }
            let mut parts = t.split_whitespace();
            let coeff_tok = parts.next().expect("nonempty");
            let (coeff, power_tok) = if coeff_tok.starts_with('x') {
                (ExactLabel::unit(res), Some(coeff_tok))
            } else {
                let c = ExactLabel::parse(coeff_tok, res).map_err(|_| FlarlError::parse(start, format!("bad coefficient `{coeff_tok}`")))?;
                (c, parts.next())
            };
            if parts.next().is_some() {
                return Err(FlarlError::parse(start, format!("malformed term `{t}`")));
            }
            let power = match power_tok {
                None => 0,
                Some("x") => 1,
                Some(p) => p
                    .strip_prefix("x^")
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| FlarlError::parse(start, format!("bad power `{p}`")))?,
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, ExactLabel::zero(res));
            }
            coeffs[power] = coeffs[power].add(&coeff)?;
        }
        Ok(LabelPoly::normalized(coeffs, res))
    }

    /// Polynomial file: `m=<int>` header then the text form.
    pub fn to_file_string(&self) -> String {
        format!("m={}\n{}\n", self.res.m(), self.render())
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| FlarlError::parse(0, "empty polynomial file"))?;
        let res = crate::linalg::parse_m_header(header)?;
        let body = lines.next().ok_or_else(|| FlarlError::parse(0, "missing polynomial line"))?;
        if lines.next().is_some() {
            return Err(FlarlError::parse(0, "polynomial file has more than one polynomial line"));
        }
        LabelPoly::parse(body, res)
    }
}

impl fmt::Display for LabelPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Monic generator of the ideal generated by `ps`.
pub fn poly_gcd(ps: &[LabelPoly]) -> Result<LabelPoly> {
    let mut nonzero = ps.iter().filter(|p| !p.is_zero());
    let Some(first) = nonzero.next() else {
        return Err(FlarlError::AllZeroInputs);
    };
    let mut g = first.clone();
    for p in nonzero {
        g.res.check(p.res)?;
        let mut a = g;
        let mut b = p.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        g = a;
    }
    g.monic()
}

/// `(L_a + L_b)^n` as the `n+1` terms `L_{C(n,t) a^{n−t} b^t/(m+1)^{n−1}}`.
pub fn binomial_expand(a: &ExactLabel, b: &ExactLabel, n: u32) -> Result<Vec<ExactLabel>> {
    let res = a.resolution();
    res.check(b.resolution())?;
    let scale = rational::powi(&res.scale(), n as i64 - 1)?;
    (0..=n)
        .map(|t| {
            let idx = rational::binomial(n as u64, t as u64)
                * rational::powi(a.index(), (n - t) as i64)?
                * rational::powi(b.index(), t as i64)?
                / &scale;
            Ok(ExactLabel::new(idx, res))
        })
        .collect()
}

/// Taylor coefficients `D^k f(L_c) / k!` about `L_c`.
pub fn taylor(f: &LabelPoly, c: &ExactLabel) -> Result<Vec<ExactLabel>> {
    f.res.check(c.resolution())?;
    let n = f.coeffs.len().max(1);
    let mut d = f.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        out.push(d.eval(c)?.scalar_div(&factorial(k as u64))?);
        d = d.derivative();
    }
    Ok(out)
}

/// `Σ t_k (x − L_c)^k`, the inverse of [`taylor`].
pub fn taylor_recombine(terms: &[ExactLabel], c: &ExactLabel) -> Result<LabelPoly> {
    let res = c.resolution();
    let base = LabelPoly::linear_factor(c);
    let mut acc = LabelPoly::zero(res);
    let mut power = LabelPoly::one(res);
    for t in terms {
        acc = acc.add(&power.label_scale(t)?)?;
        power = power.mul(&base)?;
    }
    Ok(acc)
}

/// Multiplicity of `L_c` as a root: least `r` with `D^r f(L_c) ≠ 0`.
pub fn root_multiplicity(f: &LabelPoly, c: &ExactLabel) -> Result<usize> {
    if f.is_zero() {
        return Err(FlarlError::ZeroPolynomial);
    }
    f.res.check(c.resolution())?;
    let mut d = f.clone();
    let mut r = 0;
    while d.eval(c)?.is_zero() {
        r += 1;
        d = d.derivative();
    }
    debug_assert_eq!(Ok(r), root_multiplicity_by_division(f, c));
    Ok(r)
}

/// Same quantity, by dividing out `x − L_c` until the remainder is nonzero.
pub fn root_multiplicity_by_division(f: &LabelPoly, c: &ExactLabel) -> Result<usize> {
    if f.is_zero() {
        return Err(FlarlError::ZeroPolynomial);
    }
    let factor = LabelPoly::linear_factor(c);
    let mut g = f.clone();
    let mut r = 0;
    loop {
        let (q, rem) = g.divmod(&factor)?;
        if !rem.is_zero() {
            return Ok(r);
        }
        r += 1;
        g = q;
    }
}

/// Membership of `f` in the principal ideal `d·L_R[x]`.
pub fn divides(d: &LabelPoly, f: &LabelPoly) -> Result<bool> {
    f.is_divisible_by(d)
}
