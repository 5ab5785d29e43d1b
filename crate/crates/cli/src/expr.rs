//! Label expressions: `L2 * (L3 + 1)`, `inv(L2)`, `root(L4, 3)`, `L2 ^ -1`.
//!
//! Error positions are 1-based columns of the expression as echoed in
//! quotes, so column 1 is the opening quote, the first character sits in
//! column 2 and running off the end points at the closing quote.

use std::fmt;

use flarl::{ApproxLabel, ExactLabel, FlarlError, Rational, Resolution, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Inv,
    Root,
    Vpow,
    Vroot,
    Mixadd,
    Mixdiv,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "inv" => Func::Inv,
            "root" => Func::Root,
            "vpow" => Func::Vpow,
            "vroot" => Func::Vroot,
            "mixadd" => Func::Mixadd,
            "mixdiv" => Func::Mixdiv,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Inv => "inv",
            Func::Root => "root",
            Func::Vpow => "vpow",
            Func::Vroot => "vroot",
            Func::Mixadd => "mixadd",
            Func::Mixdiv => "mixdiv",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Inv => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Label(ExactLabel),
    Scalar(Rational),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Label(Rational),
    Number(Rational),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

fn col(offset: usize) -> usize {
    offset + 2
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c == b'L' && i + 1 < b.len() && (b[i + 1].is_ascii_digit() || b[i + 1] == b'-') {
            let mut j = i + 1;
            if b[j] == b'-' {
                j += 1;
            }
            let end = digits(j);
            if end == j {
                return Err(FlarlError::ParseError { pos: col(start), msg: "label needs an index".into() });
            }
            j = end;
            if j + 1 < b.len() && b[j] == b'/' && b[j + 1].is_ascii_digit() {
                j = digits(j + 1);
            }
            let index = flarl::rational::parse_rational(&text[i + 1..j])
                .map_err(|_| FlarlError::ParseError { pos: col(start), msg: format!("bad label `{}`", &text[i..j]) })?;
            out.push((Tok::Label(index), start));
            i = j;
        } else if c.is_ascii_digit() {
            let mut j = digits(i);
            if j + 1 < b.len() && b[j] == b'.' && b[j + 1].is_ascii_digit() {
                j = digits(j + 1);
            }
            let value = flarl::rational::parse_rational(&text[i..j])
                .map_err(|_| FlarlError::ParseError { pos: col(start), msg: format!("bad number `{}`", &text[i..j]) })?;
            out.push((Tok::Number(value), start));
            i = j;
        } else if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < b.len() && (b[j].is_ascii_alphanumeric() || b[j] == b'_') {
                j += 1;
            }
            out.push((Tok::Ident(text[i..j].to_string()), start));
            i = j;
        } else {
            let tok = match c {
                b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                _ => {
                    let ch = text[i..].chars().next().expect("in bounds");
                    return Err(FlarlError::ParseError { pos: col(start), msg: format!("unexpected character `{ch}`") });
                }
            };
            out.push((tok, start));
            i += 1;
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    res: Resolution,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        col(self.toks[self.at].1)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(FlarlError::ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Op('^') {
            self.bump();
            let neg = match self.peek() {
                Tok::Op('-') => {
                    self.bump();
                    true
                }
                Tok::Op('+') => {
                    self.bump();
                    false
                }
                _ => false,
            };
            let e = match self.peek().clone() {
                Tok::Number(n) if n.is_integer() => n.numer().to_i64(),
                _ => return self.fail("exponent must be an integer literal"),
            };
            let Some(e) = e else {
                return self.fail("exponent out of range");
            };
            self.bump();
            base = Expr::Pow(Box::new(base), if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Label(i) => Ok(Expr::Label(ExactLabel::new(i, self.res))),
            Tok::Number(n) => Ok(Expr::Scalar(n)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let f = Func::lookup(&name).ok_or(FlarlError::UnknownFunction(name.clone()))?;
                self.expect(Tok::LParen, "`(` after function name")?;
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                if args.len() != f.arity() {
                    return Err(FlarlError::ParseError {
                        pos,
                        msg: format!("{} takes {} argument(s), got {}", f.name(), f.arity(), args.len()),
                    });
                }
                Ok(Expr::Call(f, args))
            }
            Tok::End => Err(FlarlError::ParseError { pos, msg: "unexpected end of expression".into() }),
            t => Err(FlarlError::ParseError { pos, msg: format!("unexpected {}", describe(&t)) }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Op(c) => format!("`{c}`"),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        _ => "token".into(),
    }
}

pub fn parse_expression(text: &str, res: Resolution) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, at: 0, res };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let msg = format!("unexpected {} after expression", describe(p.peek()));
        return p.fail(msg);
    }
    Ok(e)
}

/// Exact decimal digits of a rational whose denominator has only factors 2 and 5.
fn decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let mut count = |p: u32| {
        let p = BigInt::from(p);
        let mut n = 0;
        while (&den % &p).is_zero() {
            den /= &p;
            n += 1;
        }
        n
    };
    let places = count(2).max(count(5));
    if den != BigInt::from(1) {
        return None;
    }
    let scaled = r.abs() * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = format!("{:0>width$}", scaled.to_integer().to_string(), width = places + 1);
    let (whole, frac) = digits.split_at(digits.len() - places);
    let sign = if r.is_negative() { "-" } else { "" };
    Some(if places == 0 { format!("{sign}{whole}") } else { format!("{sign}{whole}.{frac}") })
}

fn is_atom(e: &Expr) -> bool {
    matches!(e, Expr::Label(_) | Expr::Scalar(_) | Expr::Call(..))
}

fn wrap(e: &Expr) -> String {
    if is_atom(e) {
        e.to_string()
    } else {
        format!("({e})")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Label(l) => write!(f, "{l}"),
            Expr::Scalar(q) => match decimal(q) {
                Some(s) => f.write_str(&s),
                None => write!(f, "({} / {})", q.numer(), q.denom()),
            },
            Expr::Neg(e) => write!(f, "-{}", wrap(e)),
            Expr::Bin(op, a, b) => write!(f, "{} {} {}", wrap(a), op.symbol(), wrap(b)),
            Expr::Pow(a, e) => write!(f, "{} ^ {e}", wrap(a)),
            Expr::Call(func, args) => {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{}({})", func.name(), args.join(", "))
            }
        }
    }
}

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Label(ExactLabel),
    Scalar(Rational),
    Approx(ApproxLabel),
}

impl Value {
    /// Scalars are reported as the label with the same real image.
    pub fn into_label(self, res: Resolution) -> flarl::AnyLabel {
        match self {
            Value::Label(l) => flarl::AnyLabel::Exact(l),
            Value::Scalar(q) => flarl::AnyLabel::Exact(ExactLabel::from_value(&q, res)),
            Value::Approx(a) => flarl::AnyLabel::Approx(a),
        }
    }
}

fn approx_operand() -> FlarlError {
    FlarlError::DomainError("approximate labels cannot be combined further".into())
}

fn exact(v: Value) -> Result<ExactLabel> {
    match v {
        Value::Label(l) => Ok(l),
        Value::Scalar(_) => Err(FlarlError::DomainError("expected a label, found a scalar".into())),
        Value::Approx(_) => Err(approx_operand()),
    }
}

fn small_int(v: Value) -> Result<u32> {
    match v {
        Value::Scalar(q) if q.is_integer() => {
            q.numer().to_u32().ok_or_else(|| FlarlError::DomainError("root order out of range".into()))
        }
        _ => Err(FlarlError::DomainError("root order must be a positive integer scalar".into())),
    }
}

fn binary(op: BinOp, a: Value, b: Value) -> Result<Value> {
    use Value::*;
    Ok(match (a, b) {
        (Approx(_), _) | (_, Approx(_)) => return Err(approx_operand()),
        (Label(x), Label(y)) => Label(match op {
            BinOp::Add => x.add(&y)?,
            BinOp::Sub => x.sub(&y)?,
            BinOp::Mul => x.mul(&y)?,
            BinOp::Div => x.div(&y)?,
        }),
        (Label(x), Scalar(q)) => Label(match op {
            BinOp::Add => x.mixed_add(&q),
            BinOp::Sub => x.mixed_sub(&q),
            BinOp::Mul => x.scale(&q),
            BinOp::Div => x.scalar_div(&q)?,
        }),
        (Scalar(q), Label(x)) => Label(match op {
            BinOp::Add => x.mixed_add(&q),
            BinOp::Sub => x.mixed_rsub(&q),
            BinOp::Mul => x.scale(&q),
            BinOp::Div => ExactLabel::mixed_div_rev(&q, &x)?,
        }),
        (Scalar(p), Scalar(q)) => Scalar(match op {
            BinOp::Add => p + q,
            BinOp::Sub => p - q,
            BinOp::Mul => p * q,
            BinOp::Div => {
                if q.is_zero() {
                    return Err(FlarlError::DivisionByZeroScalar);
                }
                p / q
            }
        }),
    })
}

pub fn evaluate(e: &Expr) -> Result<Value> {
    Ok(match e {
        Expr::Label(l) => Value::Label(l.clone()),
        Expr::Scalar(q) => Value::Scalar(q.clone()),
        Expr::Neg(a) => match evaluate(a)? {
            Value::Label(l) => Value::Label(l.neg()),
            Value::Scalar(q) => Value::Scalar(-q),
            Value::Approx(_) => return Err(approx_operand()),
        },
        Expr::Bin(op, a, b) => binary(*op, evaluate(a)?, evaluate(b)?)?,
        Expr::Pow(a, p) => match evaluate(a)? {
            Value::Label(l) => Value::Label(l.pow(*p)?),
            Value::Scalar(q) => Value::Scalar(flarl::rational::powi(&q, *p)?),
            Value::Approx(_) => return Err(approx_operand()),
        },
        Expr::Call(f, args) => {
            let mut vals = args.iter().map(evaluate).collect::<Result<Vec<_>>>()?.into_iter();
            let mut next = || vals.next().expect("arity checked by the parser");
            match f {
                Func::Inv => Value::Label(exact(next())?.inv()?),
                Func::Root => {
                    let l = exact(next())?;
                    Value::Approx(l.root(small_int(next())?)?)
                }
                Func::Vpow => {
                    let l = exact(next())?;
                    Value::Approx(l.vector_pow(&exact(next())?)?)
                }
                Func::Vroot => {
                    let l = exact(next())?;
                    Value::Approx(l.vector_root(&exact(next())?)?)
                }
                Func::Mixadd | Func::Mixdiv => {
                    let (a, b) = (next(), next());
                    let (q, l) = match (a, b) {
                        (Value::Scalar(q), Value::Label(l)) | (Value::Label(l), Value::Scalar(q)) if *f == Func::Mixadd => (q, l),
                        (Value::Scalar(q), Value::Label(l)) => (q, l),
                        (Value::Approx(_), _) | (_, Value::Approx(_)) => return Err(approx_operand()),
                        _ => {
                            return Err(FlarlError::DomainError(format!("{} takes a scalar and a label", f.name())));
                        }
                    };
                    Value::Label(if *f == Func::Mixadd { l.mixed_add(&q) } else { ExactLabel::mixed_div_rev(&q, &l)? })
                }
            }
        }
    })
}

pub fn eval_str(text: &str, res: Resolution) -> Result<Value> {
    evaluate(&parse_expression(text, res)?)
}
