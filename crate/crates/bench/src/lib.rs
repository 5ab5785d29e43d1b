//! Seeded inputs shared by the benchmarks.

use flarl::{ExactLabel, LabelMatrix, LabelPoly, Rational, Resolution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rational(rng: &mut impl Rng, span: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-span..=span).into(), rng.gen_range(1..=den).into())
}

pub fn label(rng: &mut impl Rng, res: Resolution) -> ExactLabel {
    ExactLabel::new(rational(rng, 40, 12), res)
}

pub fn matrix(rng: &mut impl Rng, n: usize, res: Resolution) -> LabelMatrix {
    let entries = (0..n * n).map(|_| ExactLabel::new(rational(rng, 9, 4), res)).collect();
    LabelMatrix::new(n, n, entries, res).expect("square shape")
}

/// Polynomial of exactly degree `deg`.
pub fn poly(rng: &mut impl Rng, deg: usize, res: Resolution) -> LabelPoly {
    let mut c: Vec<ExactLabel> = (0..deg).map(|_| ExactLabel::new(rational(rng, 20, 6), res)).collect();
    let lead = loop {
        let q = rational(rng, 20, 6);
        if q != Rational::from_integer(0.into()) {
            break q;
        }
    };
    c.push(ExactLabel::new(lead, res));
    LabelPoly::new(c, res).expect("shared resolution")
}
