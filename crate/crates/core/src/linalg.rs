//! Vectors, matrices, subspaces and linear maps over the label field.
//!
//! Every elimination runs on the rational image [`RatMatrix`] and the result
//! is pulled back through `from_real`. Subspaces keep a reduced
//! column-echelon basis, so two subspaces are equal iff their bases are.

use std::fmt;

use num_traits::Zero;

use crate::error::{FlarlError, Result};
use crate::image::RatMatrix;
use crate::label::{check_all, ApproxLabel, ExactLabel, Resolution};
use crate::rational::Rational;

/// Row-major matrix of labels sharing one resolution.
///
/// A column vector is the `cols == 1` case. Empty dimensions are allowed in
/// memory (a zero subspace has a basis with no columns) but not in files.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactLabel>,
    res: Resolution,
}

pub type LabelVector = LabelMatrix;

impl LabelMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactLabel>, res: Resolution) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(FlarlError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        check_all(res, &entries)?;
        Ok(LabelMatrix { rows, cols, entries, res })
    }

    /// Matrix of integer label indices, row-major.
    pub fn from_indices(rows: usize, cols: usize, indices: &[i64], res: Resolution) -> Result<Self> {
        let entries = indices.iter().map(|&i| ExactLabel::int(i, res)).collect();
        LabelMatrix::new(rows, cols, entries, res)
    }

    pub fn column_vector(entries: Vec<ExactLabel>, res: Resolution) -> Result<Self> {
        let n = entries.len();
        LabelMatrix::new(n, 1, entries, res)
    }

    pub fn zero(rows: usize, cols: usize, res: Resolution) -> Self {
        LabelMatrix { rows, cols, entries: vec![ExactLabel::zero(res); rows * cols], res }
    }

    /// `L_{m+1}` on the diagonal, `L_0` elsewhere.
    pub fn identity(n: usize, res: Resolution) -> Self {
        let mut m = LabelMatrix::zero(n, n, res);
        for i in 0..n {
            m.entries[i * n + i] = ExactLabel::unit(res);
        }
        m
    }

    pub fn from_real(image: &RatMatrix, res: Resolution) -> Self {
        let entries = image.data().iter().map(|v| ExactLabel::from_value(v, res)).collect();
        LabelMatrix { rows: image.rows(), cols: image.cols(), entries, res }
    }

    pub fn to_real(&self) -> RatMatrix {
        let data = self.entries.iter().map(|l| l.to_real().0).collect();
        RatMatrix::new(self.rows, self.cols, data).expect("shape is consistent")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn entries(&self) -> &[ExactLabel] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactLabel {
        &self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> LabelVector {
        let entries = (0..self.rows).map(|i| self.get(i, j).clone()).collect();
        LabelMatrix { rows: self.rows, cols: 1, entries, res: self.res }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactLabel::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_same_shape(&self, other: &LabelMatrix) -> Result<()> {
        self.res.check(other.res)?;
        if self.shape() != other.shape() {
            return Err(FlarlError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &LabelMatrix, f: impl Fn(&ExactLabel, &ExactLabel) -> Result<ExactLabel>) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(LabelMatrix { rows: self.rows, cols: self.cols, entries, res: self.res })
    }

    pub fn add(&self, other: &LabelMatrix) -> Result<Self> {
        self.zip_with(other, ExactLabel::add)
    }

    pub fn sub(&self, other: &LabelMatrix) -> Result<Self> {
        self.zip_with(other, ExactLabel::sub)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        let entries = self.entries.iter().map(|l| l.scale(alpha)).collect();
        LabelMatrix { rows: self.rows, cols: self.cols, entries, res: self.res }
    }

    /// Entrywise label product with a single label.
    pub fn label_scale(&self, c: &ExactLabel) -> Result<Self> {
        let entries = self.entries.iter().map(|l| c.mul(l)).collect::<Result<_>>()?;
        Ok(LabelMatrix { rows: self.rows, cols: self.cols, entries, res: self.res })
    }

    /// Matrix product built from `label_mul` and `label_add`.
    pub fn mul(&self, other: &LabelMatrix) -> Result<Self> {
        self.res.check(other.res)?;
        if self.cols != other.rows {
            return Err(FlarlError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ExactLabel::zero(self.res);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(LabelMatrix { rows: self.rows, cols: other.cols, entries, res: self.res })
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        LabelMatrix { rows: self.cols, cols: self.rows, entries, res: self.res }
    }

    /// Flattens to a `rows·cols` column vector, row-major.
    pub fn vectorize(&self) -> LabelVector {
        LabelMatrix { rows: self.entries.len(), cols: 1, entries: self.entries.clone(), res: self.res }
    }

    pub fn hcat(&self, other: &LabelMatrix) -> Result<Self> {
        self.res.check(other.res)?;
        if self.rows != other.rows {
            return Err(FlarlError::ShapeMismatch("row counts differ".into()));
        }
        Ok(LabelMatrix::from_real(&self.to_real().hcat(&other.to_real()), self.res))
    }

    /// Determinant, pulled back from the rational image.
    pub fn determinant(&self) -> Result<ExactLabel> {
        let d = self.to_real().determinant()?;
        Ok(ExactLabel::from_value(&d, self.res))
    }

    /// Label Matrix File text: `m=`, `rows= cols=`, then one line per row.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("m={}\nrows={} cols={}\n", self.res.m(), self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| FlarlError::parse(0, "empty matrix file"))?;
        let res = parse_m_header(header)?;
        if header.contains("kind=") {
            return Err(FlarlError::parse(0, "expected a refined-label matrix file, found a `kind=` header"));
        }
        let (rows, cols) = parse_shape_line(lines.next().map(|(_, l)| l))?;
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| FlarlError::parse(0, format!("expected {rows} rows, found {r}")))?;
            let row: Vec<&str> = line.split_whitespace().collect();
            if row.len() != cols {
                return Err(FlarlError::parse(ln + 1, format!("line {} has {} entries, expected {cols}", ln + 1, row.len())));
            }
            for tok in row {
                entries.push(ExactLabel::parse(tok, res).map_err(|_| FlarlError::parse(ln + 1, format!("bad label `{tok}` on line {}", ln + 1)))?);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(FlarlError::parse(ln + 1, format!("unexpected content on line {}", ln + 1)));
        }
        LabelMatrix::new(rows, cols, entries, res)
    }
}

pub(crate) fn parse_m_header(line: &str) -> Result<Resolution> {
    let tok = line
        .split_whitespace()
        .find_map(|t| t.strip_prefix("m="))
        .ok_or_else(|| FlarlError::parse(0, "missing `m=<int>` header"))?;
    let m: i64 = tok.parse().map_err(|_| FlarlError::parse(2, format!("invalid resolution `{tok}`")))?;
    Resolution::new(m).map_err(|_| FlarlError::parse(2, format!("resolution must be >= 1, got {m}")))
}

pub(crate) fn parse_shape_line(line: Option<&str>) -> Result<(usize, usize)> {
    let line = line.ok_or_else(|| FlarlError::parse(0, "missing `rows=<r> cols=<c>` line"))?;
    let mut rows = None;
    let mut cols = None;
    for tok in line.split_whitespace() {
        if let Some(v) = tok.strip_prefix("rows=") {
            rows = v.parse::<usize>().ok();
        } else if let Some(v) = tok.strip_prefix("cols=") {
            cols = v.parse::<usize>().ok();
        }
    }
    match (rows, cols) {
        (Some(r), Some(c)) if r > 0 && c > 0 => Ok((r, c)),
        _ => Err(FlarlError::parse(0, format!("invalid shape line `{line}`"))),
    }
}

impl fmt::Display for LabelMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A subspace of the coordinate space of dimension `ambient`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: LabelMatrix,
}

impl Subspace {
    /// Span of the given image vectors, canonicalized.
    fn from_image(ambient: usize, vectors: &[Vec<Rational>], res: Resolution) -> Self {
        let rowwise = RatMatrix::from_columns(ambient, vectors).transpose();
        let (r, pivots) = rowwise.rref();
        let basis_cols: Vec<Vec<Rational>> = (0..pivots.len())
            .map(|i| (0..ambient).map(|j| r.get(i, j).clone()).collect())
            .collect();
        let basis = LabelMatrix::from_real(&RatMatrix::from_columns(ambient, &basis_cols), res);
        Subspace { ambient, basis }
    }

    /// Column span of `m`.
    pub fn span(m: &LabelMatrix) -> Self {
        Subspace::from_image(m.rows, &m.to_real().columns(), m.res)
    }

    pub fn zero(ambient: usize, res: Resolution) -> Self {
        Subspace { ambient, basis: LabelMatrix::zero(ambient, 0, res) }
    }

    pub fn full(ambient: usize, res: Resolution) -> Self {
        Subspace { ambient, basis: LabelMatrix::identity(ambient, res) }
    }

    /// Subspace of vectors supported on the given coordinates (0-based).
    pub fn coordinates(ambient: usize, coords: &[usize], res: Resolution) -> Self {
        let mut coords = coords.to_vec();
        coords.sort_unstable();
        coords.dedup();
        let vectors: Vec<Vec<Rational>> = coords
            .iter()
            .map(|&c| {
                let mut v = vec![Rational::zero(); ambient];
                v[c] = Rational::from_integer(1.into());
                v
            })
            .collect();
        Subspace::from_image(ambient, &vectors, res)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &LabelMatrix {
        &self.basis
    }

    pub fn resolution(&self) -> Resolution {
        self.basis.res
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Hypersubspace predicate: codimension one.
    pub fn is_hyperspace(&self) -> bool {
        self.ambient > 0 && self.dim() + 1 == self.ambient
    }

    fn image_basis(&self) -> RatMatrix {
        self.basis.to_real()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        self.resolution().check(other.resolution())?;
        if self.ambient != other.ambient {
            return Err(FlarlError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn contains(&self, v: &LabelVector) -> Result<bool> {
        self.resolution().check(v.res)?;
        if v.cols != 1 || v.rows != self.ambient {
            return Err(FlarlError::AmbientMismatch { left: self.ambient, right: v.rows * v.cols });
        }
        Ok(self.contains_image(&v.to_real().column(0)))
    }

    fn contains_image(&self, v: &[Rational]) -> bool {
        if self.is_zero() {
            return v.iter().all(Zero::is_zero);
        }
        self.image_basis().solve(v).is_some()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut vectors = self.image_basis().columns();
        vectors.extend(other.image_basis().columns());
        Ok(Subspace::from_image(self.ambient, &vectors, self.resolution()))
    }

    /// Intersection via the null space of `[A | −B]`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient, self.resolution()));
        }
        let a = self.image_basis();
        let b = other.image_basis();
        let stacked = a.hcat(&b.scale(&-Rational::from_integer(1.into())));
        let vectors: Vec<Vec<Rational>> = stacked
            .null_space()
            .iter()
            .map(|xy| a.mul_vec(&xy[..a.cols()]))
            .collect();
        Ok(Subspace::from_image(self.ambient, &vectors, self.resolution()))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.image_basis().columns().iter().all(|c| other.contains_image(c)))
    }
}

fn check_parts(parts: &[Subspace], ambient: usize) -> Result<()> {
    for p in parts {
        if p.ambient != ambient {
            return Err(FlarlError::AmbientMismatch { left: ambient, right: p.ambient });
        }
        if let Some(first) = parts.first() {
            first.resolution().check(p.resolution())?;
        }
    }
    Ok(())
}

fn sum_all(parts: &[Subspace], ambient: usize) -> Result<Option<Subspace>> {
    let Some(first) = parts.first() else {
        return Ok(None);
    };
    let mut acc = Subspace::zero(ambient, first.resolution());
    for p in parts {
        acc = acc.sum(p)?;
    }
    Ok(Some(acc))
}

/// `Σ dim W_i = dim(Σ W_i) = ambient`.
pub fn is_direct_sum(parts: &[Subspace], ambient: usize) -> Result<bool> {
    check_parts(parts, ambient)?;
    let Some(total) = sum_all(parts, ambient)? else {
        return Ok(ambient == 0);
    };
    let dims: usize = parts.iter().map(Subspace::dim).sum();
    Ok(dims == total.dim() && total.dim() == ambient)
}

/// Independence by the criterion `W_j ∩ (W_1 + … + W_{j−1}) = {0}` for every j.
pub fn is_independent(parts: &[Subspace]) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    check_parts(parts, first.ambient)?;
    let mut acc = first.clone();
    for w in &parts[1..] {
        if !w.intersection(&acc)?.is_zero() {
            return Ok(false);
        }
        acc = acc.sum(w)?;
    }
    Ok(true)
}

/// Every pair meets only in the zero vector.
pub fn pairwise_trivial(parts: &[Subspace]) -> Result<bool> {
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            if !a.intersection(b)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The parts sum to the whole ambient space.
pub fn covers(parts: &[Subspace], ambient: usize) -> Result<bool> {
    check_parts(parts, ambient)?;
    Ok(sum_all(parts, ambient)?.is_some_and(|s| s.dim() == ambient) || (parts.is_empty() && ambient == 0))
}

pub fn rank(a: &LabelMatrix) -> usize {
    a.to_real().rank()
}

pub fn null_space(a: &LabelMatrix) -> Subspace {
    Subspace::from_image(a.cols, &a.to_real().null_space(), a.res)
}

pub fn col_space(a: &LabelMatrix) -> Subspace {
    Subspace::span(a)
}

/// Linear map acting on coordinate vectors: `target_dim × source_dim` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    matrix: LabelMatrix,
}

impl LinearMap {
    pub fn new(matrix: LabelMatrix) -> Self {
        LinearMap { matrix }
    }

    /// Map sending source coordinate `j` to `columns[j]` (image vectors in label form).
    pub fn from_column_images(target_dim: usize, columns: &[LabelVector], res: Resolution) -> Result<Self> {
        let mut m = LabelMatrix::zero(target_dim, 0, res);
        for c in columns {
            m = m.hcat(c)?;
        }
        Ok(LinearMap::new(m))
    }

    pub fn matrix(&self) -> &LabelMatrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn apply(&self, v: &LabelVector) -> Result<LabelVector> {
        self.matrix.mul(v)
    }

    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap::new(self.matrix.mul(&inner.matrix)?))
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix)
    }

    pub fn nullity(&self) -> usize {
        self.source_dim() - self.rank()
    }

    pub fn null_space(&self) -> Subspace {
        null_space(&self.matrix)
    }

    pub fn range(&self) -> Subspace {
        col_space(&self.matrix)
    }

    /// Transpose map on the dual: `(Tᵗ g)(α) = g(Tα)`.
    pub fn transpose(&self) -> LinearMap {
        LinearMap::new(self.matrix.transpose())
    }

    /// `T(W) ⊆ W`, checked on the basis of `W`.
    pub fn is_invariant(&self, w: &Subspace) -> Result<bool> {
        self.matrix.res.check(w.resolution())?;
        if self.source_dim() != w.ambient || self.target_dim() != w.ambient {
            return Err(FlarlError::AmbientMismatch { left: w.ambient, right: self.source_dim() });
        }
        let t = self.matrix.to_real();
        Ok(w.image_basis().columns().iter().all(|c| w.contains_image(&t.mul_vec(c))))
    }
}

/// Projection onto `range` along `nullsp`: `E = B·diag(I, 0)·B⁻¹` with `B = [range | nullsp]`.
pub fn projection(range: &Subspace, nullsp: &Subspace) -> Result<LinearMap> {
    range.check_compatible(nullsp)?;
    let n = range.ambient;
    if !is_direct_sum(&[range.clone(), nullsp.clone()], n)? {
        return Err(FlarlError::NotDirectSum);
    }
    let b = range.image_basis().hcat(&nullsp.image_basis());
    let b_inv = b.inverse().ok_or(FlarlError::NotDirectSum)?;
    let mut keep = RatMatrix::zeros(n, n);
    for i in 0..range.dim() {
        keep.set(i, i, Rational::from_integer(1.into()));
    }
    let e = b.mul(&keep)?.mul(&b_inv)?;
    Ok(LinearMap::new(LabelMatrix::from_real(&e, range.resolution())))
}

/// Coordinate functionals vanishing on `w`, as a subspace of the dual coordinate space.
pub fn annihilator(w: &Subspace) -> Subspace {
    if w.is_zero() {
        return Subspace::full(w.ambient, w.resolution());
    }
    let functionals = w.image_basis().transpose().null_space();
    Subspace::from_image(w.ambient, &functionals, w.resolution())
}

pub fn map_transpose(t: &LinearMap) -> LinearMap {
    t.transpose()
}

/// Distance between two points of the refined plane: `√L_{(t²+s²)/(m+1)}`.
pub fn plane_distance(p: (&ExactLabel, &ExactLabel), q: (&ExactLabel, &ExactLabel)) -> Result<ApproxLabel> {
    let t = p.0.sub(q.0)?;
    let s = p.1.sub(q.1)?;
    let sq = t.pow(2)?.add(&s.pow(2)?)?;
    sq.root(2)
}
