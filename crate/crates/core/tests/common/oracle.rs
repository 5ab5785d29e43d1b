//! Independent rational-image reference implementations and random inputs.
//!
//! Nothing here calls into the library's elimination or polynomial code, so
//! agreement with it is evidence rather than tautology.
#![allow(dead_code)]

use flarl::{ExactLabel, LabelMatrix, LabelPoly, Rational, Resolution};
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub type P = Vec<Rational>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn trim(mut p: P) -> P {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn add(a: &[Rational], b: &[Rational]) -> P {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

pub fn sub(a: &[Rational], b: &[Rational]) -> P {
    let neg: P = b.iter().map(|c| -c).collect();
    add(a, &neg)
}

pub fn mul(a: &[Rational], b: &[Rational]) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut pw = Rational::one();
    for c in p {
        acc += c * &pw;
        pw *= x;
    }
    acc
}

pub fn divrem(f: &[Rational], d: &[Rational]) -> (P, P) {
    let d = trim(d.to_vec());
    assert!(!d.is_empty(), "oracle divisor must be nonzero");
    let mut r = trim(f.to_vec());
    let mut quo = vec![Rational::zero(); r.len().saturating_sub(d.len()) + 1];
    while r.len() >= d.len() {
        let shift = r.len() - d.len();
        let t = r.last().unwrap() / d.last().unwrap();
        let mut term = vec![Rational::zero(); shift];
        term.push(t.clone());
        quo[shift] = t;
        r = sub(&r, &mul(&term, &d));
    }
    (trim(quo), r)
}

pub fn gcd_monic(a: &[Rational], b: &[Rational]) -> P {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = divrem(&a, &b).1;
        a = b;
        b = r;
    }
    let lead = a.last().expect("not both zero").clone();
    a.into_iter().map(|c| c / &lead).collect()
}

/// `det` of a matrix with polynomial entries, by first-row Laplace expansion.
pub fn det_poly(m: &[Vec<P>]) -> P {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: P = Vec::new();
    for j in 0..n {
        let minor: Vec<Vec<P>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = mul(&m[0][j], &det_poly(&minor));
        acc = if j % 2 == 0 { add(&acc, &term) } else { sub(&acc, &term) };
    }
    acc
}

/// `det(xI − A)` by cofactor expansion.
pub fn char_poly(a: &[Vec<Rational>]) -> P {
    let n = a.len();
    let m: Vec<Vec<P>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -a[i][j].clone();
                    if i == j {
                        trim(vec![c, Rational::one()])
                    } else {
                        trim(vec![c])
                    }
                })
                .collect()
        })
        .collect();
    det_poly(&m)
}

/// Rank by elimination with largest-magnitude pivots.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).filter(|&i| !m[i][c].is_zero()).max_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs())) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

pub fn image_rows(m: &LabelMatrix) -> Vec<Vec<Rational>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_real().0).collect()).collect()
}

pub fn image_poly(p: &LabelPoly) -> P {
    p.coeffs().iter().map(|c| c.to_real().0).collect()
}

/// Rational with numerator in `-span..=span` and denominator in `1..=den`.
pub fn rand_rational(rng: &mut impl Rng, span: i64, den: i64) -> Rational {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

pub fn rand_nonzero(rng: &mut impl Rng, span: i64, den: i64) -> Rational {
    loop {
        let r = rand_rational(rng, span, den);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn rand_label(rng: &mut impl Rng, res: Resolution) -> ExactLabel {
    ExactLabel::new(rand_rational(rng, 40, 12), res)
}

pub fn rand_nonzero_label(rng: &mut impl Rng, res: Resolution) -> ExactLabel {
    ExactLabel::new(rand_nonzero(rng, 40, 12), res)
}

pub fn rand_matrix(rng: &mut impl Rng, rows: usize, cols: usize, res: Resolution) -> LabelMatrix {
    let entries = (0..rows * cols).map(|_| ExactLabel::new(rand_rational(rng, 9, 4), res)).collect();
    LabelMatrix::new(rows, cols, entries, res).unwrap()
}

/// Random matrix of the given rank (at most), as a product of two random factors.
pub fn rand_low_rank(rng: &mut impl Rng, rows: usize, cols: usize, rank: usize, res: Resolution) -> LabelMatrix {
    if rank == 0 {
        return LabelMatrix::zero(rows, cols, res);
    }
    let a = rand_matrix(rng, rows, rank, res);
    let b = rand_matrix(rng, rank, cols, res);
    LabelMatrix::from_real(&a.to_real().mul(&b.to_real()).unwrap(), res)
}

pub fn rand_poly(rng: &mut impl Rng, max_deg: usize, res: Resolution) -> LabelPoly {
    let deg = rng.gen_range(0..=max_deg);
    let mut c: Vec<ExactLabel> = (0..deg).map(|_| ExactLabel::new(rand_rational(rng, 20, 6), res)).collect();
    c.push(ExactLabel::new(rand_nonzero(rng, 20, 6), res));
    LabelPoly::new(c, res).unwrap()
}
