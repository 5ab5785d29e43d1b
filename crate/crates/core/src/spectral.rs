//! Characteristic values, characteristic and minimal polynomials, T-conductors.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{FlarlError, Result};
use crate::image::RatMatrix;
use crate::label::{AnyLabel, ApproxLabel, ExactLabel, Resolution, DEFAULT_TOL};
use crate::linalg::{LabelMatrix, LabelVector, LinearMap, Subspace};
use crate::poly::LabelPoly;
use crate::rational::{exact_sqrt, int, to_f64, Rational};
use crate::roots::{real_roots, RootValue};

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: AnyLabel,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub char_poly: LabelPoly,
    pub eigenvalues: Vec<Eigenvalue>,
    pub minimal_poly: LabelPoly,
    /// Degree of the characteristic polynomial not accounted for by real eigenvalues.
    pub nonreal_count: usize,
}

impl SpectralReport {
    pub fn no_real_eigenvalues(&self) -> bool {
        self.eigenvalues.is_empty() && self.nonreal_count > 0
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("char_poly: {} real={}\n", self.char_poly.render(), self.char_poly.render_real());
        for e in &self.eigenvalues {
            out.push_str(&format!(
                "eigenvalue: {} real={} multiplicity={} {}\n",
                e.value,
                e.value.render_real(),
                e.multiplicity,
                if e.value.is_exact() { "exact" } else { "approx" }
            ));
        }
        if self.no_real_eigenvalues() {
            out.push_str("NoRealEigenvalues\n");
        } else if self.nonreal_count > 0 {
            out.push_str(&format!("nonreal: {}\n", self.nonreal_count));
        }
        out.push_str(&format!("minimal_poly: {} real={}\n", self.minimal_poly.render(), self.minimal_poly.render_real()));
        out
    }

    pub fn to_json(&self) -> Value {
        let eig: Vec<Value> = self
            .eigenvalues
            .iter()
            .map(|e| {
                json!({
                    "label": e.value.to_string(),
                    "real": e.value.render_real(),
                    "exact": e.value.is_exact(),
                    "multiplicity": e.multiplicity,
                })
            })
            .collect();
        json!({
            "m": self.char_poly.resolution().m(),
            "char_poly": self.char_poly.render(),
            "char_poly_real": self.char_poly.render_real(),
            "eigenvalues": eig,
            "no_real_eigenvalues": self.no_real_eigenvalues(),
            "nonreal_count": self.nonreal_count,
            "minimal_poly": self.minimal_poly.render(),
            "minimal_poly_real": self.minimal_poly.render_real(),
        })
    }

    /// Reissues approximate eigenvalues with a different tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        for e in &mut self.eigenvalues {
            if let AnyLabel::Approx(a) = &e.value {
                e.value = AnyLabel::Approx(a.clone().with_tol(tol));
            }
        }
        self
    }
}

fn require_square(a: &LabelMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(FlarlError::NonSquareMatrix { rows: a.rows(), cols: a.cols() })
    }
}

/// `det(xI − A)` computed on the image and pulled back; leading coefficient `L_{m+1}`.
pub fn char_poly(a: &LabelMatrix) -> Result<LabelPoly> {
    require_square(a)?;
    Ok(LabelPoly::from_real(&a.to_real().char_poly()?, a.resolution()))
}

/// `Σ coeff_i ⊗ A^i`, coefficients acting by entrywise label product.
pub fn eval_poly_at_matrix(p: &LabelPoly, a: &LabelMatrix) -> Result<LabelMatrix> {
    require_square(a)?;
    let res = a.resolution();
    res.check(p.resolution())?;
    let n = a.rows();
    let mut acc = LabelMatrix::zero(n, n, res);
    let mut power = LabelMatrix::identity(n, res);
    for (i, c) in p.coeffs().iter().enumerate() {
        if i > 0 {
            power = power.mul(a)?;
        }
        if !c.is_zero() {
            acc = acc.add(&power.label_scale(c)?)?;
        }
    }
    Ok(acc)
}

/// First `k` with `v_k ∈ span(v_0..v_{k-1}) + extra`; returns the monic relation
/// `v_k − Σ c_i v_i` as image coefficients, lowest degree first.
fn first_dependence(
    dim: usize,
    mut next: impl FnMut(&[Rational]) -> Vec<Rational>,
    start: Vec<Rational>,
    extra: &[Vec<Rational>],
    limit: usize,
) -> Vec<Rational> {
    let mut seq: Vec<Vec<Rational>> = Vec::new();
    let mut current = start;
    for _ in 0..=limit {
        let mut cols = seq.clone();
        cols.extend_from_slice(extra);
        let sys = RatMatrix::from_columns(dim, &cols);
        if let Some(x) = sys.solve(&current) {
            let mut g: Vec<Rational> = x[..seq.len()].iter().map(|c| -c).collect();
            g.push(Rational::one());
            return g;
        }
        let following = next(&current);
        seq.push(current);
        current = following;
    }
    unreachable!("a dependence appears within dim+1 steps")
}

/// Monic generator of the annihilating ideal of `A`, via the first linear
/// dependence among `I, A, A², …` in the image.
pub fn minimal_poly(a: &LabelMatrix) -> Result<LabelPoly> {
    require_square(a)?;
    let img = a.to_real();
    let n = a.rows();
    let start = RatMatrix::identity(n).data().to_vec();
    let next = |v: &[Rational]| {
        let m = RatMatrix::new(n, n, v.to_vec()).expect("square");
        img.mul(&m).expect("square").data().to_vec()
    };
    let g = first_dependence(n * n, next, start, &[], n);
    Ok(LabelPoly::from_real(&g, a.resolution()))
}

/// Monic least-degree `g` with `g(T)α ∈ W`.
pub fn t_conductor(t: &LinearMap, alpha: &LabelVector, w: &Subspace) -> Result<LabelPoly> {
    let n = t.source_dim();
    if t.target_dim() != n {
        return Err(FlarlError::NonSquareMatrix { rows: t.target_dim(), cols: n });
    }
    if alpha.rows() != n || alpha.cols() != 1 {
        return Err(FlarlError::AmbientMismatch { left: n, right: alpha.rows() });
    }
    if w.ambient_dim() != n {
        return Err(FlarlError::AmbientMismatch { left: n, right: w.ambient_dim() });
    }
    let res = t.matrix().resolution();
    res.check(alpha.resolution())?;
    res.check(w.resolution())?;
    let img = t.matrix().to_real();
    let extra = w.basis().to_real().columns();
    let g = first_dependence(n, |v| img.mul_vec(v), alpha.to_real().column(0), &extra, n);
    Ok(LabelPoly::from_real(&g, res))
}

/// Whether `A − L_c·I` is singular.
pub fn is_eigenvalue(a: &LabelMatrix, c: &ExactLabel) -> Result<bool> {
    require_square(a)?;
    a.resolution().check(c.resolution())?;
    let n = a.rows();
    let shifted = a.to_real().sub(&RatMatrix::identity(n).scale(&c.to_real().0));
    Ok(shifted.rank() < n)
}

fn approx(x: f64, res: Resolution) -> AnyLabel {
    AnyLabel::Approx(ApproxLabel::from_value(x, res).expect("finite root").with_tol(DEFAULT_TOL))
}

/// Quadratic formula on the image of a 2×2 matrix.
pub fn eigen2x2(a: &LabelMatrix) -> Result<SpectralReport> {
    require_square(a)?;
    if a.rows() != 2 {
        return Err(FlarlError::WrongSize { expected: "2x2".into(), found: format!("{}x{}", a.rows(), a.cols()) });
    }
    let res = a.resolution();
    let img = a.to_real();
    let tr = img.trace();
    let det = img.determinant()?;
    let disc = &tr * &tr - int(4) * &det;
    let two = int(2);
    let mut eigenvalues = Vec::new();
    let mut nonreal_count = 0;
    if disc.is_zero() {
        eigenvalues.push(Eigenvalue { value: AnyLabel::Exact(ExactLabel::from_value(&(&tr / &two), res)), multiplicity: 2 });
    } else if disc.is_negative() {
        nonreal_count = 2;
    } else if let Some(s) = exact_sqrt(&disc) {
        for r in [(&tr - &s) / &two, (&tr + &s) / &two] {
            eigenvalues.push(Eigenvalue { value: AnyLabel::Exact(ExactLabel::from_value(&r, res)), multiplicity: 1 });
        }
    } else {
        let s = to_f64(&disc).sqrt();
        let t = to_f64(&tr);
        for r in [(t - s) / 2.0, (t + s) / 2.0] {
            eigenvalues.push(Eigenvalue { value: approx(r, res), multiplicity: 1 });
        }
    }
    Ok(SpectralReport { char_poly: char_poly(a)?, eigenvalues, minimal_poly: minimal_poly(a)?, nonreal_count })
}

/// Spectral report for any square matrix; roots come from exact isolation of the image char poly.
pub fn spectral_report(a: &LabelMatrix) -> Result<SpectralReport> {
    let cp = char_poly(a)?;
    let res = a.resolution();
    let roots = real_roots(&cp.to_real());
    let real_total: usize = roots.iter().map(|r| r.multiplicity).sum();
    let eigenvalues = roots
        .into_iter()
        .map(|r| Eigenvalue {
            value: match r.value {
                RootValue::Exact(q) => AnyLabel::Exact(ExactLabel::from_value(&q, res)),
                RootValue::Approx(x) => approx(x, res),
            },
            multiplicity: r.multiplicity,
        })
        .collect();
    Ok(SpectralReport { char_poly: cp, eigenvalues, minimal_poly: minimal_poly(a)?, nonreal_count: a.rows() - real_total })
}
