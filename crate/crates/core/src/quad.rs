//! Exact real quadratic irrationals (a + b*sqrt(d))/c, their continued
//! fraction expansions with exact period detection, and the Pell equation
//! w^2 - D v^2 = +-4.

use std::collections::HashMap;
use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::{perfect_sqrt, Rat};

/// (a + b*sqrt(d))/c in canonical form: c > 0, gcd(a, b, c) = 1, d >= 0
/// squarefree (square factors folded into b), and b = 0 implies d = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Split n >= 0 as s^2 * f with f squarefree; returns (s, f).
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut f = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= f {
        let p2 = &p * &p;
        while (&f % &p2).is_zero() {
            f /= &p2;
            s *= &p;
        }
        p += 1;
    }
    (s, f)
}

impl QuadIrr {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Invalid("zero denominator in quadratic irrational".into()));
        }
        if d.is_negative() {
            return Err(Error::NegativeDiscriminant);
        }
        let mut q = QuadIrr { a, b, c, d };
        q.normalize();
        Ok(q)
    }

    pub fn from_int(n: i64) -> Self {
        QuadIrr {
            a: BigInt::from(n),
            b: BigInt::zero(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn from_rat(r: &Rat) -> Self {
        QuadIrr::new(r.numer().clone(), BigInt::zero(), r.denom().clone(), BigInt::zero())
            .expect("rational always valid")
    }

    pub fn sqrt_of(n: u64) -> Self {
        QuadIrr::new(BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::from(n))
            .expect("sqrt of nonnegative integer")
    }

    fn normalize(&mut self) {
        if self.c.is_negative() {
            self.a = -self.a.clone();
            self.b = -self.b.clone();
            self.c = -self.c.clone();
        }
        if !self.d.is_zero() {
            let (s, f) = square_part(&self.d);
            self.b *= s;
            self.d = f;
        }
        if self.d.is_one() {
            self.a += self.b.clone();
            self.b = BigInt::zero();
            self.d = BigInt::zero();
        }
        if self.b.is_zero() {
            self.d = BigInt::zero();
        }
        if self.d.is_zero() && !self.b.is_zero() {
            self.b = BigInt::zero();
        }
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
        }
        if self.a.is_zero() && self.b.is_zero() {
            self.c = BigInt::one();
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(Rat::new(self.a.clone(), self.c.clone()))
        } else {
            None
        }
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn conjugate(&self) -> Self {
        QuadIrr {
            a: self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign: -1, 0, or +1.
    pub fn sign(&self) -> i32 {
        sign_of(&self.a, &self.b, &self.d)
    }

    fn compatible(&self, other: &Self) -> Result<BigInt> {
        if self.b.is_zero() {
            return Ok(other.d.clone());
        }
        if other.b.is_zero() || self.d == other.d {
            return Ok(self.d.clone());
        }
        Err(Error::Invalid(format!(
            "mixed radicands sqrt({}) and sqrt({})",
            self.d, other.d
        )))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.compatible(other)?;
        QuadIrr::new(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        )
    }

    pub fn neg(&self) -> Self {
        QuadIrr {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.compatible(other)?;
        QuadIrr::new(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            d,
        )
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Invalid("division by zero".into()));
        }
        // 1/((a + b sqrt d)/c) = c (a - b sqrt d) / (a^2 - b^2 d)
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        QuadIrr::new(&self.c * &self.a, -(&self.c * &self.b), norm, self.d.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn sub_int(&self, n: &BigInt) -> Self {
        QuadIrr {
            a: &self.a - n * &self.c,
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<std::cmp::Ordering> {
        use std::cmp::Ordering;
        let diff = self.sub(other)?;
        Ok(match diff.sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        // b sqrt(d) lies in [s, s+1) for b >= 0, (-(s+1), -s] for b < 0,
        // with s = isqrt(b^2 d); seed from that and correct exactly.
        let s = (&self.b * &self.b * &self.d).sqrt();
        let num_lo = if self.b.is_negative() {
            &self.a - &s - BigInt::one()
        } else {
            &self.a + &s
        };
        let mut q = num_lo.div_floor(&self.c);
        // exact correction: ensure q <= x < q + 1
        while sign_of(&(&self.a - &q * &self.c), &self.b, &self.d) < 0 {
            q -= 1;
        }
        loop {
            let q1 = &q + BigInt::one();
            if sign_of(&(&self.a - &q1 * &self.c), &self.b, &self.d) < 0 {
                break;
            }
            q = q1;
        }
        q
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (a + b * d.sqrt()) / c
    }
}

/// Sign of a + b*sqrt(d).
fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> i32 {
    let sa = match a.sign() {
        num::bigint::Sign::Minus => -1,
        num::bigint::Sign::NoSign => 0,
        num::bigint::Sign::Plus => 1,
    };
    if b.is_zero() {
        return sa;
    }
    if b.is_positive() {
        if sa >= 0 {
            return 1;
        }
        // compare b^2 d vs a^2
        let lhs = b * b * d;
        let rhs = a * a;
        return match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => -1,
        };
    }
    -sign_of(&-a.clone(), &-b.clone(), d)
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            if self.c.is_one() {
                return write!(f, "{}", self.a);
            }
            return write!(f, "{}/{}", self.a, self.c);
        }
        let core = if self.a.is_zero() {
            if self.b.is_one() {
                format!("sqrt({})", self.d)
            } else {
                format!("{}*sqrt({})", self.b, self.d)
            }
        } else if self.b.is_one() {
            format!("{}+sqrt({})", self.a, self.d)
        } else if self.b == BigInt::from(-1) {
            format!("{}-sqrt({})", self.a, self.d)
        } else if self.b.is_positive() {
            format!("{}+{}*sqrt({})", self.a, self.b, self.d)
        } else {
            format!("{}{}*sqrt({})", self.a, self.b, self.d)
        };
        if self.c.is_one() {
            write!(f, "{core}")
        } else {
            write!(f, "({core})/{}", self.c)
        }
    }
}

// ---- expression parser (CLI input like "(3+sqrt(5))/2" or "1/sqrt3") ----

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).map_or(false, |b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<QuadIrr> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QuadIrr> {
        let mut acc = self.factor()?;
        while let Some(op) = self.peek() {
            match op {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?)?;
                }
                b'/' => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QuadIrr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b's') => {
                let rest = &self.src[self.pos..];
                if !rest.starts_with(b"sqrt") {
                    return Err(self.err("expected 'sqrt'"));
                }
                self.pos += 4;
                let arg = if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let v = self.expr()?;
                    if self.peek() != Some(b')') {
                        return Err(self.err("expected ')'"));
                    }
                    self.pos += 1;
                    v
                } else {
                    self.integer()?
                };
                let n = arg
                    .as_rat()
                    .filter(|r| r.is_integer() && !r.numer().is_negative())
                    .ok_or_else(|| self.err("sqrt argument must be a nonnegative integer"))?;
                QuadIrr::new(BigInt::zero(), BigInt::one(), BigInt::one(), n.to_integer())
            }
            Some(c) if c.is_ascii_digit() => self.integer(),
            _ => Err(self.err("expected a number, sqrt, or '('")),
        }
    }

    fn integer(&mut self) -> Result<QuadIrr> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).map_or(false, |b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
        QuadIrr::new(n, BigInt::zero(), BigInt::one(), BigInt::zero())
    }
}

/// Parse an arithmetic expression over integers and square roots, e.g.
/// "(3+sqrt(5))/2", "1/sqrt3", "7/3".
pub fn parse_quadirr(s: &str) -> Result<QuadIrr> {
    let mut p = ExprParser {
        src: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

// ---- continued fractions ----

/// Eventually periodic continued fraction [c_0; c_1, ..., (e_0, ..., e_{m-1})].
/// The period is empty exactly for rational inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Evaluate with `n` copies of the period unrolled, as a rational.
    pub fn eval(&self, n: usize) -> Rat {
        let mut digits: Vec<BigInt> = self.preperiod.clone();
        for _ in 0..n {
            digits.extend(self.period.iter().cloned());
        }
        let mut acc: Option<Rat> = None;
        for d in digits.iter().rev() {
            let dr = Rat::from(d.clone());
            acc = Some(match acc {
                None => dr,
                Some(prev) => {
                    if prev.is_zero() {
                        dr
                    } else {
                        dr + prev.recip()
                    }
                }
            });
        }
        acc.unwrap_or_else(Rat::zero)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre: Vec<String> = self.preperiod.iter().map(|d| d.to_string()).collect();
        let per: Vec<String> = self.period.iter().map(|d| d.to_string()).collect();
        match (pre.split_first(), per.is_empty()) {
            (Some((c0, rest)), true) => {
                if rest.is_empty() {
                    write!(f, "[{c0}]")
                } else {
                    write!(f, "[{c0};{}]", rest.join(","))
                }
            }
            (Some((c0, rest)), false) => {
                if rest.is_empty() {
                    write!(f, "[{c0};({})]", per.join(","))
                } else {
                    write!(f, "[{c0};{},({})]", rest.join(","), per.join(","))
                }
            }
            (None, _) => write!(f, "[;({})]", per.join(",")),
        }
    }
}

/// Exact continued fraction expansion; the period is found by repetition of
/// the reduced quadratic-irrational state.
pub fn cf_expand(theta: &QuadIrr) -> ContinuedFraction {
    let mut digits: Vec<BigInt> = Vec::new();
    let mut seen: HashMap<QuadIrr, usize> = HashMap::new();
    let mut x = theta.clone();
    loop {
        if let Some(&j) = seen.get(&x) {
            let period = digits.split_off(j);
            return ContinuedFraction {
                preperiod: digits,
                period,
            };
        }
        seen.insert(x.clone(), digits.len());
        let n = x.floor();
        digits.push(n.clone());
        let frac = x.sub_int(&n);
        if frac.is_zero() {
            return ContinuedFraction {
                preperiod: digits,
                period: vec![],
            };
        }
        x = frac.inv().expect("nonzero fractional part");
    }
}

/// Convergent data of preperiod and period, with the degenerate conventions
/// for empty and length-1 blocks: the last two convergents of the block, or
/// the seeds 1/0 and 0/1 when the block is too short.
#[derive(Clone, Debug)]
pub struct CFMatrices {
    pub c: BigInt,
    pub g: BigInt,
    pub c_prime: BigInt,
    pub g_prime: BigInt,
    pub e: BigInt,
    pub f: BigInt,
    pub e_prime: BigInt,
    pub f_prime: BigInt,
}

/// Last two convergents (p/q, p'/q') of a digit block, starting from the
/// standard seeds p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1.
fn block_convergents(digits: &[BigInt]) -> (BigInt, BigInt, BigInt, BigInt) {
    let mut p_prev = BigInt::zero();
    let mut q_prev = BigInt::one();
    let mut p = BigInt::one();
    let mut q = BigInt::zero();
    for d in digits {
        let p_next = d * &p + &p_prev;
        let q_next = d * &q + &q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    (p, q, p_prev, q_prev)
}

pub fn cf_matrices(cf: &ContinuedFraction) -> Result<CFMatrices> {
    if cf.period.is_empty() {
        return Err(Error::RationalInput);
    }
    let (c, g, c_prime, g_prime) = block_convergents(&cf.preperiod);
    let (e, f, e_prime, f_prime) = block_convergents(&cf.period);
    let m = CFMatrices {
        c,
        g,
        c_prime,
        g_prime,
        e,
        f,
        e_prime,
        f_prime,
    };
    let det1: BigInt = &m.c * &m.g_prime - &m.c_prime * &m.g;
    let det2: BigInt = &m.e * &m.f_prime - &m.e_prime * &m.f;
    debug_assert!(det1.abs().is_one() && det2.abs().is_one());
    Ok(m)
}

// ---- Pell's equation ----

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub w: BigInt,
    pub v: BigInt,
    /// +4 or -4.
    pub sign: i8,
}

/// Fundamental (minimal v, then minimal w) solution of w^2 - D v^2 = +-4.
pub fn pell_solve(d: &BigInt) -> Result<PellSolution> {
    if !d.is_positive() {
        return Err(Error::Invalid("Pell requires D > 0".into()));
    }
    if perfect_sqrt(d).is_some() {
        return Err(Error::SquareD);
    }
    let four = BigInt::from(4);
    let mut v = BigInt::one();
    let cap = BigInt::from(20_000_000u64);
    while v <= cap {
        let dv2 = d * &v * &v;
        if dv2 > four {
            if let Some(w) = perfect_sqrt(&(&dv2 - &four)) {
                return Ok(PellSolution { w, v, sign: -4 });
            }
        }
        if let Some(w) = perfect_sqrt(&(&dv2 + &four)) {
            return Ok(PellSolution { w, v, sign: 4 });
        }
        v += 1;
    }
    Err(Error::Invalid(format!("no Pell solution for D={d} below search cap")))
}
