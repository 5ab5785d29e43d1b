//! Real-root isolation for rational polynomials.
//!
//! Squarefree splitting (Yun) gives multiplicities; each squarefree factor is
//! isolated with a Sturm sequence and refined by exact bisection. A rational
//! root `p/q` of a primitive integer polynomial with leading coefficient `a`
//! has `a·p/q` integral, so once an isolating interval is narrower than `1/a`
//! two integer candidates decide rationality exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{to_f64, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum RootValue {
    Exact(Rational),
    Approx(f64),
}

impl RootValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            RootValue::Exact(r) => to_f64(r),
            RootValue::Approx(x) => *x,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub value: RootValue,
    pub multiplicity: usize,
}

type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn deriv(p: &[Rational]) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
}

fn divrem(f: &[Rational], d: &[Rational]) -> (Poly, Poly) {
    let d = trim(d.to_vec());
    let lead = d.last().expect("nonzero divisor").clone();
    let mut r = trim(f.to_vec());
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - d.len() + 1];
    while r.len() >= d.len() && !r.is_empty() {
        let k = r.len() - d.len();
        let t = r.last().unwrap() / &lead;
        for (j, c) in d.iter().enumerate() {
            r[k + j] -= &t * c;
        }
        q[k] = t;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: Poly) -> Poly {
    let lead = p.last().expect("nonzero").clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = divrem(&a, &b).1;
        a = b;
        b = r;
    }
    monic(a)
}

/// Yun's algorithm: `f = Π s_i^i` with each `s_i` squarefree and monic.
fn squarefree_factors(f: &[Rational]) -> Vec<(Poly, usize)> {
    let f = monic(trim(f.to_vec()));
    if f.len() <= 1 {
        return Vec::new();
    }
    let fp = deriv(&f);
    let a0 = gcd(&f, &fp);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&fp, &a0).0;
    let mut d = trim(sub(&c, &deriv(&b)));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = if d.is_empty() { monic(b.clone()) } else { gcd(&b, &d) };
        let nb = divrem(&b, &a).0;
        let nc = if d.is_empty() { Vec::new() } else { divrem(&d, &a).0 };
        if a.len() > 1 {
            out.push((a, i));
        }
        d = trim(sub(&nc, &deriv(&nb)));
        b = nb;
        i += 1;
    }
    out
}

fn sub(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect()
}

fn sturm_chain(p: &[Rational]) -> Vec<Poly> {
    let mut chain = vec![trim(p.to_vec()), deriv(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = divrem(&chain[n - 2], &chain[n - 1]).1;
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn variations(chain: &[Poly], x: &Rational) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| {
            let v = eval(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Integer polynomial proportional to `p` with coprime coefficients; returns the leading coefficient.
fn primitive_lead(p: &[Rational]) -> BigInt {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    (ints.last().expect("nonzero") / g).abs()
}

fn cauchy_bound(p: &[Rational]) -> Rational {
    let lead = p.last().expect("nonzero").abs();
    let max = p[..p.len() - 1].iter().map(|c| c.abs() / &lead).fold(Rational::zero(), |a, b| if b > a { b } else { a });
    max + Rational::one()
}

/// Distinct real roots of a squarefree polynomial, ascending.
fn isolate_squarefree(p: &[Rational]) -> Vec<RootValue> {
    if p.len() <= 1 {
        return Vec::new();
    }
    let chain = sturm_chain(p);
    let b = cauchy_bound(p);
    let mut stack = vec![(-b.clone(), b)];
    let mut intervals = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let k = variations(&chain, &lo) - variations(&chain, &hi);
        match k {
            0 => {}
            1 => intervals.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    intervals.sort_by(|a, b| a.0.cmp(&b.0));
    let lead = primitive_lead(p);
    intervals.into_iter().map(|(lo, hi)| refine(p, lo, hi, &lead)).collect()
}

/// Exactly one root in `(lo, hi]`.
fn refine(p: &[Rational], mut lo: Rational, mut hi: Rational, lead: &BigInt) -> RootValue {
    let two = Rational::from_integer(2.into());
    let lead_r = Rational::from_integer(lead.clone());
    let threshold = lead_r.recip();
    let mut checked_rational = false;
    let sign = |x: &Rational| {
        let v = eval(p, x);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    };
    let s_hi = sign(&hi);
    if s_hi == 0 {
        return RootValue::Exact(hi);
    }
    for _ in 0..4000 {
        let width = &hi - &lo;
        if !checked_rational && width < threshold {
            checked_rational = true;
            let a = (&lo * &lead_r).floor().to_integer();
            let b = (&hi * &lead_r).ceil().to_integer();
            let mut k = a;
            while k <= b {
                let cand = Rational::new(k.clone(), lead.clone());
                if cand > lo && cand <= hi && sign(&cand) == 0 {
                    return RootValue::Exact(cand);
                }
                k += 1;
            }
        }
        if checked_rational {
            let mid = to_f64(&((&lo + &hi) / &two));
            if to_f64(&width) <= 1e-15 * mid.abs().max(1.0) {
                return RootValue::Approx(mid);
            }
        }
        let mid = (&lo + &hi) / &two;
        let s = sign(&mid);
        if s == 0 {
            return RootValue::Exact(mid);
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RootValue::Approx(to_f64(&((lo + hi) / two)))
}

/// Real roots with multiplicity, ascending.
pub fn real_roots(coeffs: &[Rational]) -> Vec<RealRoot> {
    let p = trim(coeffs.to_vec());
    let mut out: Vec<RealRoot> = squarefree_factors(&p)
        .into_iter()
        .flat_map(|(s, mult)| {
            isolate_squarefree(&s)
                .into_iter()
                .map(move |value| RealRoot { value, multiplicity: mult })
        })
        .collect();
    out.sort_by(|a, b| a.value.to_f64().total_cmp(&b.value.to_f64()));
    out
}

/// Distinct rational roots, ascending.
pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    real_roots(coeffs)
        .into_iter()
        .filter_map(|r| match r.value {
            RootValue::Exact(q) => Some(q),
            RootValue::Approx(_) => None,
        })
        .collect()
}
