//! The ordinary-label chain `L_0 < L_1 < … < L_{m+1}` as a lattice.
//!
//! Join is max and meet is min. Matrices and polynomials over the chain use
//! these entrywise; scaling is either by the semifield `{0, 1}` or by meet
//! with a label.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{FlarlError, Result};
use crate::label::Resolution;
use crate::linalg::parse_shape_line;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdLabel {
    i: u32,
    res: Resolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Join,
    Meet,
}

impl OrdLabel {
    pub fn new(i: i64, res: Resolution) -> Result<Self> {
        let top = res.m() + 1;
        if i < 0 || i > top as i64 {
            return Err(FlarlError::OrdinalOutOfRange { index: i, top });
        }
        Ok(OrdLabel { i: i as u32, res })
    }

    pub fn bottom(res: Resolution) -> Self {
        OrdLabel { i: 0, res }
    }

    pub fn top(res: Resolution) -> Self {
        OrdLabel { i: res.m() + 1, res }
    }

    pub fn index(self) -> u32 {
        self.i
    }

    pub fn resolution(self) -> Resolution {
        self.res
    }

    pub fn is_bottom(self) -> bool {
        self.i == 0
    }

    pub fn join(self, other: OrdLabel) -> Result<OrdLabel> {
        self.res.check(other.res)?;
        Ok(OrdLabel { i: self.i.max(other.i), res: self.res })
    }

    pub fn meet(self, other: OrdLabel) -> Result<OrdLabel> {
        self.res.check(other.res)?;
        Ok(OrdLabel { i: self.i.min(other.i), res: self.res })
    }

    pub fn apply(self, op: LatticeOp, other: OrdLabel) -> Result<OrdLabel> {
        match op {
            LatticeOp::Join => self.join(other),
            LatticeOp::Meet => self.meet(other),
        }
    }

    /// Every label of the chain, bottom first.
    pub fn all(res: Resolution) -> impl Iterator<Item = OrdLabel> {
        (0..=res.m() + 1).map(move |i| OrdLabel { i, res })
    }

    pub fn parse(text: &str, res: Resolution) -> Result<Self> {
        let t = text.trim();
        let digits = t.strip_prefix('L').ok_or_else(|| FlarlError::parse(0, format!("expected `L<int>`, got `{t}`")))?;
        let i: i64 = digits.parse().map_err(|_| FlarlError::parse(1, format!("ordinary label index must be an integer: `{t}`")))?;
        OrdLabel::new(i, res).map_err(|_| FlarlError::parse(1, format!("`{t}` outside L0..L{}", res.m() + 1)))
    }
}

impl fmt::Display for OrdLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<OrdLabel>,
    res: Resolution,
}

impl OrdMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<OrdLabel>, res: Resolution) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(FlarlError::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        entries.iter().try_for_each(|e| res.check(e.res))?;
        Ok(OrdMatrix { rows, cols, entries, res })
    }

    pub fn from_indices(rows: usize, cols: usize, idx: &[i64], res: Resolution) -> Result<Self> {
        let entries = idx.iter().map(|&i| OrdLabel::new(i, res)).collect::<Result<_>>()?;
        OrdMatrix::new(rows, cols, entries, res)
    }

    pub fn bottom(rows: usize, cols: usize, res: Resolution) -> Self {
        OrdMatrix { rows, cols, entries: vec![OrdLabel::bottom(res); rows * cols], res }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn entries(&self) -> &[OrdLabel] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> OrdLabel {
        self.entries[i * self.cols + j]
    }

    /// Scaling by the semifield `{0, 1}`.
    pub fn scale01(&self, s: bool) -> Self {
        if s {
            self.clone()
        } else {
            OrdMatrix::bottom(self.rows, self.cols, self.res)
        }
    }

    /// Scaling over the chain itself: entrywise meet with `s`.
    pub fn meet_scale(&self, s: OrdLabel) -> Result<Self> {
        let entries = self.entries.iter().map(|e| s.meet(*e)).collect::<Result<_>>()?;
        Ok(OrdMatrix { rows: self.rows, cols: self.cols, entries, res: self.res })
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("m={} kind=ord\nrows={} cols={}\n", self.res.m(), self.rows, self.cols);
        for r in self.entries.chunks(self.cols.max(1)) {
            let row: Vec<String> = r.iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| FlarlError::parse(0, "empty ordinary-label file"))?;
        let res = parse_ord_header(header)?;
        let (rows, cols) = parse_shape_line(lines.next().map(|(_, l)| l))?;
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (ln, line) = lines.next().ok_or_else(|| FlarlError::parse(0, format!("expected {rows} rows, found {r}")))?;
            let row: Vec<&str> = line.split_whitespace().collect();
            if row.len() != cols {
                return Err(FlarlError::parse(ln + 1, format!("line {} has {} entries, expected {cols}", ln + 1, row.len())));
            }
            for tok in row {
                entries.push(OrdLabel::parse(tok, res).map_err(|_| FlarlError::parse(ln + 1, format!("bad ordinary label `{tok}` on line {}", ln + 1)))?);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(FlarlError::parse(ln + 1, format!("unexpected content on line {}", ln + 1)));
        }
        OrdMatrix::new(rows, cols, entries, res)
    }
}

impl fmt::Display for OrdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.entries.chunks(self.cols.max(1)) {
            let row: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn parse_ord_header(line: &str) -> Result<Resolution> {
    let res = crate::linalg::parse_m_header(line)?;
    if !line.split_whitespace().any(|t| t == "kind=ord") {
        return Err(FlarlError::parse(0, "ordinary-label files need the `m=<int> kind=ord` header"));
    }
    Ok(res)
}

/// Entrywise join or meet.
pub fn ord_mat_op(op: LatticeOp, a: &OrdMatrix, b: &OrdMatrix) -> Result<OrdMatrix> {
    a.res.check(b.res)?;
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(FlarlError::ShapeMismatch(format!("{}x{} vs {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| x.apply(op, *y)).collect::<Result<_>>()?;
    Ok(OrdMatrix { rows: a.rows, cols: a.cols, entries, res: a.res })
}

/// Polynomial with ordinary-label coefficients; trailing `L_0` terms are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrdPoly {
    coeffs: Vec<OrdLabel>,
    res: Resolution,
}

impl OrdPoly {
    pub fn new(mut coeffs: Vec<OrdLabel>, res: Resolution) -> Result<Self> {
        coeffs.iter().try_for_each(|c| res.check(c.res))?;
        while coeffs.last().is_some_and(|c| c.is_bottom()) {
            coeffs.pop();
        }
        Ok(OrdPoly { coeffs, res })
    }

    pub fn from_indices(idx: &[i64], res: Resolution) -> Result<Self> {
        let coeffs = idx.iter().map(|&i| OrdLabel::new(i, res)).collect::<Result<_>>()?;
        OrdPoly::new(coeffs, res)
    }

    /// Sparse constructor from `(exponent, index)` pairs; repeated exponents are joined.
    pub fn from_terms(terms: &[(usize, i64)], res: Resolution) -> Result<Self> {
        let deg = terms.iter().map(|t| t.0).max().map_or(0, |d| d + 1);
        let mut coeffs = vec![OrdLabel::bottom(res); deg];
        for &(e, i) in terms {
            coeffs[e] = coeffs[e].join(OrdLabel::new(i, res)?)?;
        }
        OrdPoly::new(coeffs, res)
    }

    pub fn zero(res: Resolution) -> Self {
        OrdPoly { coeffs: Vec::new(), res }
    }

    pub fn constant(c: OrdLabel) -> Self {
        OrdPoly::new(vec![c], c.res).expect("single resolution")
    }

    pub fn coeffs(&self) -> &[OrdLabel] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> OrdLabel {
        self.coeffs.get(i).copied().unwrap_or(OrdLabel::bottom(self.res))
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn render(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_bottom())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c} x"),
                _ => format!("{c} x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "L0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Parses `L9 + L1 x + L0 x^2`; repeated exponents are joined.
    pub fn parse(text: &str, res: Resolution) -> Result<Self> {
        let mut terms = Vec::new();
        let mut pos = 0;
        for term in text.split('+') {
            let start = pos + term.len() - term.trim_start().len();
            pos += term.len() + 1;
            let mut parts = term.split_whitespace();
            let c = parts.next().ok_or_else(|| FlarlError::parse(start, "empty term"))?;
            let c = OrdLabel::parse(c, res).map_err(|e| match e {
                FlarlError::ParseError { msg, .. } => FlarlError::parse(start, msg),
                other => other,
            })?;
            let e = match parts.next() {
                None => 0,
                Some("x") => 1,
                Some(p) => p
                    .strip_prefix("x^")
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| FlarlError::parse(start, format!("bad power `{p}`")))?,
            };
            if parts.next().is_some() {
                return Err(FlarlError::parse(start, format!("malformed term `{}`", term.trim())));
            }
            terms.push((e, c.index() as i64));
        }
        OrdPoly::from_terms(&terms, res)
    }

    pub fn to_file_string(&self) -> String {
        format!("m={} kind=ord\n{}\n", self.res.m(), self.render())
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| FlarlError::parse(0, "empty ordinary polynomial file"))?;
        let res = parse_ord_header(header)?;
        let body = lines.next().ok_or_else(|| FlarlError::parse(0, "missing polynomial line"))?;
        if lines.next().is_some() {
            return Err(FlarlError::parse(0, "more than one polynomial line"));
        }
        OrdPoly::parse(body, res)
    }
}

impl fmt::Display for OrdPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Coefficientwise join.
pub fn ord_poly_add(p: &OrdPoly, q: &OrdPoly) -> Result<OrdPoly> {
    p.res.check(q.res)?;
    let n = p.coeffs.len().max(q.coeffs.len());
    let coeffs = (0..n).map(|i| p.coeff(i).join(q.coeff(i))).collect::<Result<_>>()?;
    OrdPoly::new(coeffs, p.res)
}

/// Exponent of the cross term `x^i ∩ x^j`: the constant term acts as identity, otherwise min.
pub fn combine_exponents(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, j) => j,
        (i, 0) => i,
        (i, j) => i.min(j),
    }
}

/// Cross-term product: `a_i x^i ∩ b_j x^j = (a_i ∩ b_j) x^{combine(i,j)}`, collected by join.
pub fn ord_poly_meet_product(p: &OrdPoly, q: &OrdPoly) -> Result<OrdPoly> {
    p.res.check(q.res)?;
    let n = p.coeffs.len().max(q.coeffs.len());
    let mut coeffs = vec![OrdLabel::bottom(p.res); n];
    for (i, a) in p.coeffs.iter().enumerate() {
        for (j, b) in q.coeffs.iter().enumerate() {
            let e = combine_exponents(i, j);
            coeffs[e] = coeffs[e].join(a.meet(*b)?)?;
        }
    }
    OrdPoly::new(coeffs, p.res)
}

/// Vectors with exactly one nonzero coordinate: the join-irreducibles of `L̃^n`.
pub fn minimal_generating_set(n: usize, res: Resolution) -> Vec<OrdMatrix> {
    let mut out = Vec::with_capacity(n * (res.m() as usize + 1));
    for k in 0..n {
        for l in OrdLabel::all(res).skip(1) {
            let mut entries = vec![OrdLabel::bottom(res); n];
            entries[k] = l;
            out.push(OrdMatrix { rows: n, cols: 1, entries, res });
        }
    }
    out
}

/// Basis count for `n` coordinates when `L_0` entries are admitted.
pub fn paper_basis_count(n: usize, res: Resolution) -> usize {
    n * (res.m() as usize + 2)
}

/// Everything reachable from `gens` by `{0,1}`-scaling and joins.
pub fn join_closure(gens: &[OrdMatrix], rows: usize, cols: usize, res: Resolution) -> Result<BTreeSet<OrdMatrix>> {
    let mut set = BTreeSet::new();
    set.insert(OrdMatrix::bottom(rows, cols, res));
    for g in gens {
        let new: Vec<OrdMatrix> = set.iter().map(|v| ord_mat_op(LatticeOp::Join, v, g)).collect::<Result<_>>()?;
        set.extend(new);
    }
    Ok(set)
}

/// Every vector in `L̃^n`, in lexicographic index order.
pub fn all_vectors(n: usize, res: Resolution) -> Vec<OrdMatrix> {
    let base = res.m() as usize + 2;
    let total = base.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut entries = vec![OrdLabel::bottom(res); n];
            for e in entries.iter_mut().rev() {
                *e = OrdLabel { i: (code % base) as u32, res };
                code /= base;
            }
            OrdMatrix { rows: n, cols: 1, entries, res }
        })
        .collect()
}

/// Exhaustive check of the chain-lattice laws at resolution `m`, including distributivity.
pub fn chain_lattice_check(res: Resolution) -> bool {
    let all: Vec<OrdLabel> = OrdLabel::all(res).collect();
    let j = |a: OrdLabel, b: OrdLabel| a.join(b).expect("same m");
    let mt = |a: OrdLabel, b: OrdLabel| a.meet(b).expect("same m");
    let bottom = OrdLabel::bottom(res);
    let top = OrdLabel::top(res);
    for &a in &all {
        if j(a, a) != a || mt(a, a) != a || j(a, bottom) != a || mt(a, top) != a {
            return false;
        }
        for &b in &all {
            let comparable = a <= b || b <= a;
            let order_matches = (a <= b) == (j(a, b) == b) && (a <= b) == (mt(a, b) == a);
            if !comparable || !order_matches || j(a, b) != j(b, a) || mt(a, b) != mt(b, a) {
                return false;
            }
            if j(a, mt(a, b)) != a || mt(a, j(a, b)) != a {
                return false;
            }
            for &c in &all {
                if j(j(a, b), c) != j(a, j(b, c)) || mt(mt(a, b), c) != mt(a, mt(b, c)) {
                    return false;
                }
                if j(a, mt(b, c)) != mt(j(a, b), j(a, c)) || mt(a, j(b, c)) != j(mt(a, b), mt(a, c)) {
                    return false;
                }
            }
        }
    }
    true
}
