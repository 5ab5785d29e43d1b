//! Decision procedures for set, semigroup and group vector spaces of labels.
//!
//! Spaces are given by finite presentations: explicit members, coordinate
//! support patterns, or both. Scalars come from a [`ScalarDomain`] with exact
//! membership. The real line is modelled by the rationals.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{FlarlError, Result};
use crate::label::{ExactLabel, Resolution};
use crate::linalg::{parse_m_header, LabelMatrix};
use crate::poly::LabelPoly;
use crate::rational::{parse_rational, render, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraicClass {
    Set,
    Semigroup,
    Group,
}

impl fmt::Display for AlgebraicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraicClass::Set => "set",
            AlgebraicClass::Semigroup => "semigroup",
            AlgebraicClass::Group => "group",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarDomain {
    FiniteSet(Vec<Rational>),
    /// `kZ⁺ ∪ {0}`.
    ScaledNonNegIntegers(Rational),
    /// `kZ`.
    ScaledIntegers(Rational),
    NonNegRationals,
    AllRationals,
    UnionOf(Vec<ScalarDomain>),
}

/// A parsed domain plus whether it was written as `R` and replaced by `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainSpec {
    pub domain: ScalarDomain,
    pub reals_as_rationals: bool,
}

fn is_integer_multiple(q: &Rational, k: &Rational) -> bool {
    (q / k).is_integer()
}

/// Calkin–Wilf order of the positive rationals: 1, 1/2, 2, 1/3, 3/2, …
pub fn calkin_wilf(count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let mut q = Rational::one();
    for _ in 0..count {
        out.push(q.clone());
        let fl = q.floor();
        q = (fl.clone() + fl - &q + Rational::one()).recip();
    }
    out
}

impl ScalarDomain {
    pub fn contains(&self, q: &Rational) -> bool {
        match self {
            ScalarDomain::FiniteSet(v) => v.contains(q),
            ScalarDomain::ScaledNonNegIntegers(k) => !q.is_negative() && is_integer_multiple(q, k),
            ScalarDomain::ScaledIntegers(k) => is_integer_multiple(q, k),
            ScalarDomain::NonNegRationals => !q.is_negative(),
            ScalarDomain::AllRationals => true,
            ScalarDomain::UnionOf(parts) => parts.iter().any(|d| d.contains(q)),
        }
    }

    pub fn class(&self) -> AlgebraicClass {
        match self {
            ScalarDomain::FiniteSet(v) if v.iter().all(Zero::is_zero) && !v.is_empty() => AlgebraicClass::Group,
            ScalarDomain::FiniteSet(_) => AlgebraicClass::Set,
            ScalarDomain::ScaledNonNegIntegers(_) | ScalarDomain::NonNegRationals => AlgebraicClass::Semigroup,
            ScalarDomain::ScaledIntegers(_) | ScalarDomain::AllRationals => AlgebraicClass::Group,
            ScalarDomain::UnionOf(parts) if parts.len() == 1 => parts[0].class(),
            ScalarDomain::UnionOf(_) => AlgebraicClass::Set,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            ScalarDomain::FiniteSet(_) => true,
            ScalarDomain::UnionOf(parts) => parts.iter().all(ScalarDomain::is_finite),
            _ => false,
        }
    }

    /// Deterministic members: every element of a finite domain, otherwise the
    /// first `count` elements of a fixed enumeration (zero first where present).
    pub fn samples(&self, count: usize) -> Vec<Rational> {
        let out = match self {
            ScalarDomain::FiniteSet(v) => v.clone(),
            ScalarDomain::ScaledNonNegIntegers(k) => (0..count).map(|i| k * Rational::from_integer(i.into())).collect(),
            ScalarDomain::ScaledIntegers(k) => (0..count)
                .map(|i| {
                    let n = Rational::from_integer(i.div_ceil(2).into());
                    if i % 2 == 1 {
                        k * n
                    } else {
                        -(k * n)
                    }
                })
                .collect(),
            ScalarDomain::NonNegRationals => {
                let mut v = vec![Rational::zero()];
                v.extend(calkin_wilf(count.saturating_sub(1)));
                v
            }
            ScalarDomain::AllRationals => {
                let mut v = vec![Rational::zero()];
                for q in calkin_wilf(count / 2 + 1) {
                    v.push(-q.clone());
                    v.push(q);
                }
                v.truncate(count.max(1));
                v
            }
            ScalarDomain::UnionOf(parts) => {
                let lists: Vec<Vec<Rational>> = parts.iter().map(|p| p.samples(count)).collect();
                let mut v: Vec<Rational> = Vec::new();
                for i in 0..lists.iter().map(Vec::len).max().unwrap_or(0) {
                    for l in &lists {
                        if let Some(q) = l.get(i) {
                            if !v.contains(q) {
                                v.push(q.clone());
                            }
                        }
                    }
                }
                if !self.is_finite() {
                    v.truncate(count);
                }
                v
            }
        };
        if self.is_finite() {
            out
        } else {
            out.into_iter().take(count).collect()
        }
    }

    /// Parses `{0,1}`, `3Z+0`, `5Z`, `Q+0`, `Q`, `R` and unions joined by `|`.
    pub fn parse(text: &str) -> Result<DomainSpec> {
        let mut reals = false;
        let mut parts = Vec::new();
        let mut pos = 0;
        for piece in text.split('|') {
            let start = pos + piece.len() - piece.trim_start().len();
            pos += piece.len() + 1;
            let (d, r) = parse_atom(piece.trim(), start)?;
            reals |= r;
            parts.push(d);
        }
        let domain = if parts.len() == 1 { parts.pop().expect("one part") } else { ScalarDomain::UnionOf(parts) };
        Ok(DomainSpec { domain, reals_as_rationals: reals })
    }
}

fn parse_atom(t: &str, start: usize) -> Result<(ScalarDomain, bool)> {
    let bad = |msg: String| FlarlError::parse(start, msg);
    match t {
        "" => return Err(bad("empty scalar domain".into())),
        "Q" => return Ok((ScalarDomain::AllRationals, false)),
        "R" => return Ok((ScalarDomain::AllRationals, true)),
        "Q+0" => return Ok((ScalarDomain::NonNegRationals, false)),
        _ => {}
    }
    if let Some(inner) = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let mut v: Vec<Rational> = Vec::new();
        for tok in inner.split(',').filter(|s| !s.trim().is_empty()) {
            let q = parse_rational(tok.trim()).map_err(|_| bad(format!("bad set member `{}`", tok.trim())))?;
            if !v.contains(&q) {
                v.push(q);
            }
        }
        return Ok((ScalarDomain::FiniteSet(v), false));
    }
    let (body, nonneg) = match t.strip_suffix("Z+0") {
        Some(b) => (b, true),
        None => match t.strip_suffix('Z') {
            Some(b) => (b, false),
            None => return Err(bad(format!("unknown scalar domain `{t}`"))),
        },
    };
    let k = if body.is_empty() { Rational::one() } else { parse_rational(body).map_err(|_| bad(format!("bad multiplier `{body}`")))? };
    if !k.is_positive() {
        return Err(bad(format!("multiplier must be positive in `{t}`")));
    }
    Ok((if nonneg { ScalarDomain::ScaledNonNegIntegers(k) } else { ScalarDomain::ScaledIntegers(k) }, false))
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mult = |k: &Rational| if k.is_one() { String::new() } else { render(k) };
        match self {
            ScalarDomain::FiniteSet(v) => write!(f, "{{{}}}", v.iter().map(render).collect::<Vec<_>>().join(",")),
            ScalarDomain::ScaledNonNegIntegers(k) => write!(f, "{}Z+0", mult(k)),
            ScalarDomain::ScaledIntegers(k) => write!(f, "{}Z", mult(k)),
            ScalarDomain::NonNegRationals => f.write_str("Q+0"),
            ScalarDomain::AllRationals => f.write_str("Q"),
            ScalarDomain::UnionOf(parts) => {
                write!(f, "{}", parts.iter().map(ToString::to_string).collect::<Vec<_>>().join("|"))
            }
        }
    }
}

pub fn domain_contains(s: &ScalarDomain, q: &Rational) -> bool {
    s.contains(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeKind {
    Matrix,
    Poly,
}

/// Shape of a member. Polynomials are one shape regardless of degree; `rows`
/// is the number of coefficient slots a pattern provides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub kind: ShapeKind,
    pub rows: usize,
    pub cols: usize,
}

impl Shape {
    pub fn matrix(rows: usize, cols: usize) -> Self {
        Shape { kind: ShapeKind::Matrix, rows, cols }
    }

    pub fn poly(slots: usize) -> Self {
        Shape { kind: ShapeKind::Poly, rows: slots, cols: 1 }
    }

    fn key(&self) -> (ShapeKind, usize, usize) {
        match self.kind {
            ShapeKind::Matrix => (self.kind, self.rows, self.cols),
            ShapeKind::Poly => (self.kind, 0, 0),
        }
    }

    fn cells(&self) -> BTreeSet<(usize, usize)> {
        (0..self.rows).flat_map(|i| (0..self.cols).map(move |j| (i, j))).collect()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ShapeKind::Matrix => write!(f, "mat {}x{}", self.rows, self.cols),
            ShapeKind::Poly => write!(f, "poly {}", self.rows),
        }
    }
}

/// A member of a heterogeneous family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Matrix(LabelMatrix),
    Poly(LabelPoly),
}

impl From<LabelMatrix> for Element {
    fn from(m: LabelMatrix) -> Self {
        Element::Matrix(m)
    }
}

impl From<LabelPoly> for Element {
    fn from(p: LabelPoly) -> Self {
        Element::Poly(p)
    }
}

impl Element {
    pub fn resolution(&self) -> Resolution {
        match self {
            Element::Matrix(m) => m.resolution(),
            Element::Poly(p) => p.resolution(),
        }
    }

    pub fn kind(&self) -> ShapeKind {
        match self {
            Element::Matrix(_) => ShapeKind::Matrix,
            Element::Poly(_) => ShapeKind::Poly,
        }
    }

    pub fn scale(&self, s: &Rational) -> Element {
        match self {
            Element::Matrix(m) => Element::Matrix(m.scale(s)),
            Element::Poly(p) => Element::Poly(p.scale(s)),
        }
    }

    /// Coordinates with their labels; for polynomials the coordinate is `(exponent, 0)`.
    fn coordinates(&self) -> Vec<((usize, usize), ExactLabel)> {
        match self {
            Element::Matrix(m) => (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| ((i, j), m.get(i, j).clone())))
                .collect(),
            Element::Poly(p) => p.coeffs().iter().enumerate().map(|(i, c)| ((i, 0), c.clone())).collect(),
        }
    }

    fn support(&self) -> BTreeSet<(usize, usize)> {
        self.coordinates().into_iter().filter(|(_, l)| !l.is_zero()).map(|(c, _)| c).collect()
    }

    /// Same shape, so that `x = s·y` can be asked at all.
    fn comparable(&self, other: &Element) -> bool {
        match (self, other) {
            (Element::Matrix(a), Element::Matrix(b)) => a.shape() == b.shape(),
            (Element::Poly(_), Element::Poly(_)) => true,
            _ => false,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Element::Matrix(m) => m.is_zero(),
            Element::Poly(p) => p.is_zero(),
        }
    }

    fn label_at(&self, c: (usize, usize)) -> ExactLabel {
        match self {
            Element::Matrix(m) => m.get(c.0, c.1).clone(),
            Element::Poly(p) => p.coeff(c.0),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Element::Matrix(m) => {
                let rows: Vec<String> = (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                format!("mat {}x{}: {}", m.rows(), m.cols(), rows.join(" / "))
            }
            Element::Poly(p) => format!("poly: {}", p.render()),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Every element of `shape` whose nonzero coordinates lie in `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPattern {
    pub shape: Shape,
    pub support: BTreeSet<(usize, usize)>,
}

impl SupportPattern {
    pub fn new(shape: Shape, support: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let support: BTreeSet<_> = support.into_iter().collect();
        if let Some(&(i, j)) = support.iter().find(|(i, j)| *i >= shape.rows || *j >= shape.cols) {
            return Err(FlarlError::ShapeMismatch(format!("coordinate ({i},{j}) outside {shape}")));
        }
        Ok(SupportPattern { shape, support })
    }

    pub fn full(shape: Shape) -> Self {
        SupportPattern { support: shape.cells(), shape }
    }

    /// Polynomials of degree at most `degree`.
    pub fn poly_up_to(degree: usize) -> Self {
        SupportPattern::full(Shape::poly(degree + 1))
    }

    pub fn accepts(&self, e: &Element) -> bool {
        let fits = match (e, self.shape.kind) {
            (Element::Matrix(m), ShapeKind::Matrix) => m.shape() == (self.shape.rows, self.shape.cols),
            (Element::Poly(_), ShapeKind::Poly) => true,
            _ => false,
        };
        fits && e.support().is_subset(&self.support)
    }

    /// A representative member with distinct nonzero values on the support.
    pub fn generic_member(&self, res: Resolution) -> Element {
        let values = calkin_wilf(self.support.len());
        match self.shape.kind {
            ShapeKind::Matrix => {
                let mut m = vec![ExactLabel::zero(res); self.shape.rows * self.shape.cols];
                for ((i, j), v) in self.support.iter().zip(values) {
                    m[i * self.shape.cols + j] = ExactLabel::new(v, res);
                }
                Element::Matrix(LabelMatrix::new(self.shape.rows, self.shape.cols, m, res).expect("shape"))
            }
            ShapeKind::Poly => {
                let mut c = vec![ExactLabel::zero(res); self.shape.rows];
                for ((i, _), v) in self.support.iter().zip(values) {
                    c[*i] = ExactLabel::new(v, res);
                }
                Element::Poly(LabelPoly::new(c, res).expect("resolution"))
            }
        }
    }

    pub fn zero_member(&self, res: Resolution) -> Element {
        match self.shape.kind {
            ShapeKind::Matrix => Element::Matrix(LabelMatrix::zero(self.shape.rows, self.shape.cols, res)),
            ShapeKind::Poly => Element::Poly(LabelPoly::zero(res)),
        }
    }

    pub fn render(&self) -> String {
        if self.support == self.shape.cells() {
            return format!("pattern {}: *", self.shape);
        }
        let rows: Vec<String> = (0..self.shape.rows)
            .map(|i| {
                (0..self.shape.cols)
                    .map(|j| if self.support.contains(&(i, j)) { "1" } else { "0" })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        format!("pattern {}: {}", self.shape, rows.join(" / "))
    }
}

/// A finitely presented family: explicit members plus support patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub elements: Vec<Element>,
    pub patterns: Vec<SupportPattern>,
    pub res: Resolution,
}

impl Family {
    pub fn finite(elements: Vec<Element>, res: Resolution) -> Result<Self> {
        elements.iter().try_for_each(|e| res.check(e.resolution()))?;
        Ok(Family { elements, patterns: Vec::new(), res })
    }

    pub fn patterns(patterns: Vec<SupportPattern>, res: Resolution) -> Self {
        Family { elements: Vec::new(), patterns, res }
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.iter().any(|m| m == e) || self.patterns.iter().any(|p| p.accepts(e))
    }

    /// Members exercised by the closure check.
    pub fn test_vectors(&self) -> Vec<Element> {
        let mut out = self.elements.clone();
        for p in &self.patterns {
            out.push(p.zero_member(self.res));
            out.push(p.generic_member(self.res));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureViolation {
    pub scalar: Rational,
    pub vector: Element,
    pub image: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub scalars_checked: usize,
    pub vectors_checked: usize,
    pub violation: Option<ClosureViolation>,
}

impl ClosureReport {
    pub fn closed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `s·v ∈ V` for sampled scalars and every test vector; stops at the first violation.
pub fn closure_check(v: &Family, s: &ScalarDomain, samples: usize) -> ClosureReport {
    let scalars = s.samples(samples.max(1));
    let vectors = v.test_vectors();
    for q in &scalars {
        for x in &vectors {
            let image = x.scale(q);
            if !v.contains(&image) {
                return ClosureReport {
                    scalars_checked: scalars.len(),
                    vectors_checked: vectors.len(),
                    violation: Some(ClosureViolation { scalar: q.clone(), vector: x.clone(), image }),
                };
            }
        }
    }
    ClosureReport { scalars_checked: scalars.len(), vectors_checked: vectors.len(), violation: None }
}

/// The unique `s` with `x = s·y` when `y ≠ 0`, checked exactly and against `S`.
fn witness(x: &Element, y: &Element, s: &ScalarDomain) -> Option<Rational> {
    if y.is_zero() {
        // x = s·0 forces x = 0; any member of S then witnesses it.
        return if x.is_zero() { s.samples(1).into_iter().next() } else { None };
    }
    let (c, yl) = y.coordinates().into_iter().find(|(_, l)| !l.is_zero())?;
    let ratio = x.label_at(c).index() / yl.index();
    if y.scale(&ratio) != *x {
        return None;
    }
    s.contains(&ratio).then_some(ratio)
}

/// A scalar `s ∈ S` with `x = s·y`, or else `s′ ∈ S` with `y = s′·x`.
pub fn pairwise_dependent(x: &Element, y: &Element, s: &ScalarDomain) -> Option<Rational> {
    if x.resolution() != y.resolution() || !x.comparable(y) {
        return None;
    }
    witness(x, y, s).or_else(|| witness(y, x, s))
}

/// No ordered pair of distinct members is dependent.
pub fn independent_set_check(b: &[Element], s: &ScalarDomain) -> bool {
    (0..b.len()).all(|i| (0..b.len()).all(|j| i == j || pairwise_dependent(&b[i], &b[j], s).is_none()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionKind {
    /// No shape in common: disjoint as sets.
    Empty,
    /// Shared shapes with disjoint supports: only the zero of that shape is common.
    ZeroOnly,
    Nontrivial,
}

impl fmt::Display for IntersectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntersectionKind::Empty => "empty",
            IntersectionKind::ZeroOnly => "zero-only",
            IntersectionKind::Nontrivial => "nontrivial",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyClass {
    DirectSum,
    Sum,
    Neither,
}

impl fmt::Display for FamilyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyClass::DirectSum => "direct-sum",
            FamilyClass::Sum => "sum",
            FamilyClass::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub pairs: Vec<(usize, usize, IntersectionKind)>,
    pub covers: bool,
    pub class: FamilyClass,
}

type Supports = std::collections::BTreeMap<(ShapeKind, usize, usize), BTreeSet<(usize, usize)>>;

fn supports(f: &Family) -> Result<Supports> {
    if !f.elements.is_empty() {
        return Err(FlarlError::DomainError("intersection reports need pattern-described parts".into()));
    }
    let mut map = Supports::new();
    for p in &f.patterns {
        map.entry(p.shape.key()).or_default().extend(p.support.iter().copied());
    }
    Ok(map)
}

/// Pairwise support intersections of the parts and whether their union covers `ambient`.
pub fn family_intersection_report(parts: &[Family], ambient: &Family) -> Result<FamilyReport> {
    parts.iter().try_for_each(|p| ambient.res.check(p.res))?;
    let sup: Vec<Supports> = parts.iter().map(supports).collect::<Result<_>>()?;
    let amb = supports(ambient)?;
    let mut pairs = Vec::new();
    for i in 0..sup.len() {
        for j in i + 1..sup.len() {
            let mut kind = IntersectionKind::Empty;
            for (key, a) in &sup[i] {
                if let Some(b) = sup[j].get(key) {
                    if a.intersection(b).next().is_some() {
                        kind = IntersectionKind::Nontrivial;
                        break;
                    }
                    kind = IntersectionKind::ZeroOnly;
                }
            }
            pairs.push((i, j, kind));
        }
    }
    let mut union = Supports::new();
    for s in &sup {
        for (k, v) in s {
            union.entry(*k).or_default().extend(v.iter().copied());
        }
    }
    let inside = union.iter().all(|(k, v)| amb.get(k).is_some_and(|a| v.is_subset(a)));
    if !inside {
        return Err(FlarlError::ShapeMismatch("a part reaches outside the ambient family".into()));
    }
    let covers = amb.iter().all(|(k, a)| union.get(k).is_some_and(|v| a.is_subset(v)));
    let disjoint = pairs.iter().all(|p| p.2 != IntersectionKind::Nontrivial);
    let class = match (covers, disjoint) {
        (true, true) => FamilyClass::DirectSum,
        (true, false) => FamilyClass::Sum,
        _ => FamilyClass::Neither,
    };
    Ok(FamilyReport { pairs, covers, class })
}

/// A family file: `m=` header, then optional `ambient` / `part` section markers,
/// each followed by `mat RxC: …`, `poly: …` or `pattern …: …` lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDoc {
    pub res: Resolution,
    pub ambient: Option<Family>,
    pub parts: Vec<Family>,
}

impl FamilyDoc {
    /// All members of every part, for closure and independence checks.
    pub fn merged(&self) -> Family {
        let mut f = Family::patterns(Vec::new(), self.res);
        for p in &self.parts {
            f.elements.extend(p.elements.iter().cloned());
            f.patterns.extend(p.patterns.iter().cloned());
        }
        f
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| FlarlError::parse(0, "empty family file"))?;
        let res = parse_m_header(header)?;
        let mut ambient: Option<Family> = None;
        let mut parts: Vec<Family> = Vec::new();
        let mut in_ambient = false;
        for (ln, raw) in lines {
            let line = raw.trim();
            let err = |msg: String| FlarlError::parse(ln + 1, format!("line {}: {msg}", ln + 1));
            match line {
                "ambient" => {
                    in_ambient = true;
                    ambient.get_or_insert_with(|| Family::patterns(Vec::new(), res));
                    continue;
                }
                "part" => {
                    in_ambient = false;
                    parts.push(Family::patterns(Vec::new(), res));
                    continue;
                }
                _ => {}
            }
            let target = if in_ambient {
                ambient.as_mut().expect("ambient section")
            } else {
                if parts.is_empty() {
                    parts.push(Family::patterns(Vec::new(), res));
                }
                parts.last_mut().expect("a part")
            };
            let (head, body) = line.split_once(':').ok_or_else(|| err("expected `<kind>: <data>`".into()))?;
            let head: Vec<&str> = head.split_whitespace().collect();
            match head.as_slice() {
                ["poly"] => {
                    let p = LabelPoly::parse(body.trim(), res).map_err(|_| err(format!("bad polynomial `{}`", body.trim())))?;
                    target.elements.push(Element::Poly(p));
                }
                ["mat", dims] => {
                    let (r, c) = parse_dims(dims).ok_or_else(|| err(format!("bad dimensions `{dims}`")))?;
                    let toks: Vec<&str> = body.split_whitespace().filter(|t| *t != "/").collect();
                    if toks.len() != r * c {
                        return Err(err(format!("{} labels for a {r}x{c} matrix", toks.len())));
                    }
                    let entries = toks
                        .iter()
                        .map(|t| ExactLabel::parse(t, res).map_err(|_| err(format!("bad label `{t}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    target.elements.push(Element::Matrix(LabelMatrix::new(r, c, entries, res)?));
                }
                ["pattern", kind, dims] => {
                    let shape = match *kind {
                        "mat" => parse_dims(dims).map(|(r, c)| Shape::matrix(r, c)),
                        "poly" => dims.parse::<usize>().ok().filter(|n| *n > 0).map(Shape::poly),
                        _ => None,
                    }
                    .ok_or_else(|| err(format!("bad pattern shape `{kind} {dims}`")))?;
                    target.patterns.push(parse_mask(shape, body).ok_or_else(|| err(format!("bad mask `{}`", body.trim())))?);
                }
                _ => return Err(err(format!("unknown entry `{}`", head.join(" ")))),
            }
        }
        Ok(FamilyDoc { res, ambient, parts })
    }
}

fn parse_dims(s: &str) -> Option<(usize, usize)> {
    let (r, c) = s.split_once('x')?;
    let (r, c) = (r.parse().ok()?, c.parse().ok()?);
    (r > 0 && c > 0).then_some((r, c))
}

fn parse_mask(shape: Shape, body: &str) -> Option<SupportPattern> {
    let toks: Vec<&str> = body.split_whitespace().filter(|t| *t != "/").collect();
    if toks == ["*"] {
        return Some(SupportPattern::full(shape));
    }
    if toks.len() != shape.rows * shape.cols {
        return None;
    }
    let mut support = Vec::new();
    for (k, t) in toks.iter().enumerate() {
        match *t {
            "1" => support.push((k / shape.cols, k % shape.cols)),
            "0" => {}
            _ => return None,
        }
    }
    SupportPattern::new(shape, support).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m4() -> Resolution {
        Resolution::new(4).unwrap()
    }

    fn row(v: &[i64]) -> Element {
        Element::Matrix(LabelMatrix::from_indices(1, v.len(), v, m4()).unwrap())
    }

    fn dom(s: &str) -> ScalarDomain {
        ScalarDomain::parse(s).unwrap().domain
    }

    #[test]
    fn domain_membership() {
        let d = dom("3Z+0");
        assert!(d.contains(&int(6)));
        assert!(!d.contains(&int(2)));
        assert!(d.contains(&int(0)));
        assert!(!d.contains(&int(-3)));
        assert!(dom("5Z").contains(&int(-10)));
        assert!(dom("Q+0").contains(&rat(1, 3)));
        assert!(!dom("Q+0").contains(&rat(-1, 3)));
        assert!(dom("{0,1}").contains(&int(1)));
        assert!(dom("3Z+0|5Z+0").contains(&int(5)));
        assert!(!dom("3Z+0|5Z+0").contains(&int(8)));
        assert!(ScalarDomain::parse("R").unwrap().reals_as_rationals);
        assert!(ScalarDomain::parse("7W").is_err());
    }

    #[test]
    fn domain_classes_and_display() {
        assert_eq!(dom("3Z+0").class(), AlgebraicClass::Semigroup);
        assert_eq!(dom("5Z").class(), AlgebraicClass::Group);
        assert_eq!(dom("{0,1}").class(), AlgebraicClass::Set);
        assert_eq!(dom("3Z+0|5Z+0").class(), AlgebraicClass::Set);
        for s in ["{0,1/2}", "3Z+0", "5Z", "Q+0", "Q", "Z+0", "3Z+0|5Z"] {
            assert_eq!(dom(s).to_string(), s);
        }
    }

    #[test]
    fn samples_are_members() {
        for s in ["3Z+0", "5Z", "Q+0", "Q", "3Z+0|Q+0", "{0,1}"] {
            let d = dom(s);
            let v = d.samples(20);
            assert!(!v.is_empty());
            assert!(v.iter().all(|q| d.contains(q)), "{s}");
        }
        assert_eq!(calkin_wilf(5), vec![int(1), rat(1, 2), int(2), rat(1, 3), rat(3, 2)]);
    }

    #[test]
    fn pairwise_examples() {
        assert_eq!(pairwise_dependent(&row(&[2, 4]), &row(&[1, 2]), &dom("Z+0")), Some(int(2)));
        assert_eq!(pairwise_dependent(&row(&[2, 4]), &row(&[1, 3]), &dom("Q")), None);
        assert_eq!(pairwise_dependent(&row(&[1, 2]), &row(&[2, 4]), &dom("3Z+0")), None);
        // reversed roles find s' = 2 with y = 2x
        assert_eq!(pairwise_dependent(&row(&[1, 2]), &row(&[2, 4]), &dom("Z+0")), Some(int(2)));
    }

    #[test]
    fn independence_examples() {
        let s = dom("3Z+0");
        assert!(independent_set_check(&[row(&[1, 2])], &s));
        let square = Element::Matrix(LabelMatrix::from_indices(2, 2, &[1, 2, 3, 4], m4()).unwrap());
        let column = Element::Matrix(LabelMatrix::from_indices(4, 1, &[1, 2, 3, 4], m4()).unwrap());
        assert!(independent_set_check(&[column, row(&[1, 2, 3]), square], &s));
        assert!(!independent_set_check(&[row(&[1, 2]), row(&[2, 4])], &dom("Z+0")));
    }

    #[test]
    fn closure_examples() {
        let r = m4();
        let pat = Family::patterns(vec![SupportPattern::new(Shape::matrix(1, 3), [(0, 0), (0, 2)]).unwrap()], r);
        assert!(closure_check(&pat, &dom("Q+0"), 25).closed());
        let v = row(&[1, 2]);
        let just_v = Family::finite(vec![v.clone()], r).unwrap();
        let rep = closure_check(&just_v, &dom("{0,1}"), 1);
        assert_eq!(rep.violation.unwrap().scalar, int(0));
        let with_zero = Family::finite(vec![v.clone(), row(&[0, 0])], r).unwrap();
        assert!(closure_check(&with_zero, &dom("{0,1}"), 1).closed());
        let pair = Family::finite(vec![v.clone(), v.scale(&int(2))], r).unwrap();
        let rep = closure_check(&pair, &dom("{3}"), 1);
        assert_eq!(rep.violation.unwrap().image, v.scale(&int(3)));
    }

    fn three_shape_split() -> (Vec<Family>, Family) {
        let r = m4();
        let a = SupportPattern::full(Shape::matrix(2, 2));
        let p = SupportPattern::poly_up_to(8);
        let row8 = SupportPattern::full(Shape::matrix(1, 8));
        let parts = vec![
            Family::patterns(vec![a.clone()], r),
            Family::patterns(vec![p.clone()], r),
            Family::patterns(vec![row8.clone()], r),
        ];
        (parts, Family::patterns(vec![a, p, row8], r))
    }

    #[test]
    fn three_shape_split_is_direct() {
        let (parts, amb) = three_shape_split();
        let rep = family_intersection_report(&parts, &amb).unwrap();
        assert_eq!(rep.class, FamilyClass::DirectSum);
        assert!(rep.pairs.iter().all(|p| p.2 == IntersectionKind::Empty));
    }

    #[test]
    fn overlapping_split_is_only_a_sum() {
        let r = m4();
        let m24 = SupportPattern::full(Shape::matrix(2, 4));
        let m53 = SupportPattern::full(Shape::matrix(5, 3));
        let poly = |d: usize| SupportPattern::new(Shape::poly(5), (0..=d).map(|i| (i, 0))).unwrap();
        let parts = vec![
            Family::patterns(vec![poly(3), m24.clone()], r),
            Family::patterns(vec![poly(2), m53.clone()], r),
            Family::patterns(vec![poly(4), m24.clone()], r),
        ];
        let amb = Family::patterns(vec![poly(4), m24, m53], r);
        let rep = family_intersection_report(&parts, &amb).unwrap();
        assert!(rep.covers);
        assert_eq!(rep.class, FamilyClass::Sum);
    }

    #[test]
    fn single_part_and_zero_only_overlap() {
        let r = m4();
        let full = SupportPattern::full(Shape::matrix(1, 3));
        let amb = Family::patterns(vec![full.clone()], r);
        let rep = family_intersection_report(std::slice::from_ref(&amb), &amb).unwrap();
        assert_eq!(rep.class, FamilyClass::DirectSum);
        let first = SupportPattern::new(Shape::matrix(1, 3), [(0, 0)]).unwrap();
        let rest = SupportPattern::new(Shape::matrix(1, 3), [(0, 1), (0, 2)]).unwrap();
        let rep = family_intersection_report(&[Family::patterns(vec![first.clone()], r), Family::patterns(vec![rest], r)], &amb).unwrap();
        assert_eq!(rep.pairs[0].2, IntersectionKind::ZeroOnly);
        assert_eq!(rep.class, FamilyClass::DirectSum);
        let rep = family_intersection_report(&[Family::patterns(vec![first], r)], &amb).unwrap();
        assert_eq!(rep.class, FamilyClass::Neither);
    }

    #[test]
    fn family_file() {
        let text = "m=4\nambient\npattern mat 2x2: *\npattern poly 9: *\npart\npattern mat 2x2: 1 1 / 0 1\npart\nmat 1x2: L2 L4\npoly: L1 + L2 x\n";
        let doc = FamilyDoc::parse(text).unwrap();
        assert_eq!(doc.parts.len(), 2);
        assert_eq!(doc.parts[0].patterns[0].support.len(), 3);
        assert_eq!(doc.parts[1].elements[0], row(&[2, 4]));
        assert_eq!(doc.parts[0].patterns[0].render(), "pattern mat 2x2: 1 1 / 0 1");
        assert_eq!(doc.parts[1].elements[0].render(), "mat 1x2: L2 L4");
        assert!(FamilyDoc::parse("m=4\nmat 2x2: L1\n").unwrap_err().is_parse_error());
    }
}
