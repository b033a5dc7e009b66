//! Integer Laurent polynomials: parsing, primitivity, products, GCD,
//! resultant matrices and Bezout cofactors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, solve_rational};
use crate::rat::Rat;

/// An integer-coefficient polynomial in `z` admitting negative exponents.
///
/// Invariant: the coefficient map stores no zero entries. The zero polynomial
/// (empty support) is representable but rejected by [`LaurentPoly::parse`];
/// most operations require nontrivial input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_pairs(&[(0, 1)])
    }

    pub fn from_coeffs(coeffs: BTreeMap<i64, BigInt>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LaurentPoly { coeffs }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut m: BTreeMap<i64, BigInt> = BTreeMap::new();
        for &(e, c) in pairs {
            let entry = m.entry(e).or_insert_with(BigInt::zero);
            *entry += BigInt::from(c);
        }
        Self::from_coeffs(m)
    }

    /// Monomial c * z^e.
    pub fn monomial(c: BigInt, e: i64) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        LaurentPoly { coeffs: m }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let p: LaurentPoly = text.parse()?;
        if p.is_zero() {
            return Err(Error::Parse {
                pos: 0,
                msg: "polynomial must be nontrivial".into(),
            });
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, BigInt> {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Lowest exponent h (support must be nonempty).
    pub fn low(&self) -> i64 {
        *self.coeffs.keys().next().expect("nontrivial polynomial")
    }

    /// Highest exponent n (support must be nonempty).
    pub fn high(&self) -> i64 {
        *self.coeffs.keys().next_back().expect("nontrivial polynomial")
    }

    /// Degree of z^{-h} P, i.e. high - low.
    pub fn span(&self) -> usize {
        if self.is_zero() {
            0
        } else {
            (self.high() - self.low()) as usize
        }
    }

    /// GCD of the absolute coefficient values.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divide out the content and normalize the sign so the coefficient of
    /// the highest exponent is positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.coeffs[&self.high()].is_negative() {
            c = -c;
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, v / &c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, -v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.coeffs.clone();
        for (&e, v) in &other.coeffs {
            let entry = m.entry(e).or_insert_with(BigInt::zero);
            *entry += v;
        }
        Self::from_coeffs(m)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &other.coeffs {
                let entry = m.entry(e1 + e2).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        Self::from_coeffs(m)
    }

    /// Multiply by z^d.
    pub fn shifted(&self, d: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e + d, v.clone())).collect(),
        }
    }

    /// Dense nonnegative-exponent form: coefficients of z^{-h} P in ascending
    /// order, together with the recorded shift h.
    pub fn to_dense(&self) -> (Vec<BigInt>, i64) {
        assert!(!self.is_zero());
        let h = self.low();
        let n = self.high();
        let mut v = vec![BigInt::zero(); (n - h + 1) as usize];
        for (&e, c) in &self.coeffs {
            v[(e - h) as usize] = c.clone();
        }
        (v, h)
    }

    pub fn from_dense(v: &[BigInt], shift: i64) -> Self {
        let mut m = BTreeMap::new();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                m.insert(i as i64 + shift, c.clone());
            }
        }
        LaurentPoly { coeffs: m }
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&e, c)| z.powi(e as i32) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&e, c) in &self.coeffs {
            let p = if e >= 0 {
                num::pow::pow(x.clone(), e as usize)
            } else {
                num::pow::pow(x.clone(), (-e) as usize).recip()
            };
            acc += p * Rat::from(c.clone());
        }
        acc
    }

    /// JSON object {exponent: coefficient} with string keys and values.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(e, c)| (e.to_string(), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.coeffs.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match e {
                0 => write!(f, "{}", mag)?,
                1 => {
                    if mag.is_one() {
                        write!(f, "z")?;
                    } else {
                        write!(f, "{}z", mag)?;
                    }
                }
                _ => {
                    if mag.is_one() {
                        write!(f, "z^{}", e)?;
                    } else {
                        write!(f, "{}z^{}", mag, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser {
            chars: s.char_indices().collect(),
            pos: 0,
        }
        .parse()
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        let pos = self
            .chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.chars.last().map(|&(i, c)| i + c.len_utf8()).unwrap_or(0));
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let mut s = String::new();
        if matches!(self.peek(), Some('+') | Some('-')) {
            s.push(self.bump().unwrap());
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        if s.is_empty() || s == "+" || s == "-" {
            return Err(self.err("expected an integer"));
        }
        s.parse().map_err(|_| self.err("invalid integer"))
    }

    fn parse(&mut self) -> Result<LaurentPoly> {
        let mut m: BTreeMap<i64, BigInt> = BTreeMap::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty input"));
        }
        let mut first = true;
        while self.peek().is_some() {
            let mut sign = BigInt::one();
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                }
                Some('-') => {
                    self.bump();
                    sign = -sign;
                }
                Some(_) if first => {}
                _ => return Err(self.err("expected '+' or '-' between terms")),
            }
            first = false;
            self.skip_ws();
            let coeff = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.integer()?
            } else {
                BigInt::one()
            };
            self.skip_ws();
            let exp = if self.peek() == Some('z') {
                self.bump();
                if self.peek() == Some('^') {
                    self.bump();
                    let e = self.integer()?;
                    e.to_i64().ok_or_else(|| self.err("exponent out of range"))?
                } else {
                    1
                }
            } else {
                // a bare coefficient term; the digits were mandatory
                if coeff.is_one() && !matches!(self.chars.get(self.pos.wrapping_sub(1)), Some(&(_, c)) if c.is_ascii_digit())
                {
                    return Err(self.err("expected a coefficient or 'z'"));
                }
                0
            };
            let entry = m.entry(exp).or_insert_with(BigInt::zero);
            *entry += sign * coeff;
            self.skip_ws();
        }
        Ok(LaurentPoly::from_coeffs(m))
    }
}

// ---- dense rational polynomial helpers (ascending coefficients) ----

pub(crate) fn rvec_trim(v: &mut Vec<Rat>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn rvec_from_int(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|c| Rat::from(c.clone())).collect()
}

/// Remainder of dense rational polynomial division.
pub(crate) fn rvec_rem(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut r = num.to_vec();
    rvec_trim(&mut r);
    let mut d = den.to_vec();
    rvec_trim(&mut d);
    assert!(!d.is_empty(), "division by zero polynomial");
    let lead = d.last().unwrap().clone();
    while r.len() >= d.len() {
        let k = r.len() - d.len();
        let f = r.last().unwrap() / &lead;
        for (i, dc) in d.iter().enumerate() {
            let t = dc * &f;
            r[k + i] = &r[k + i] - t;
        }
        r.pop();
        rvec_trim(&mut r);
    }
    r
}

/// Quotient of exact dense rational polynomial division (remainder must vanish).
pub(crate) fn rvec_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut r = num.to_vec();
    rvec_trim(&mut r);
    let mut d = den.to_vec();
    rvec_trim(&mut d);
    assert!(!d.is_empty(), "division by zero polynomial");
    let lead = d.last().unwrap().clone();
    let mut q = vec![Rat::zero(); r.len().saturating_sub(d.len()) + 1];
    while r.len() >= d.len() {
        let k = r.len() - d.len();
        let f = r.last().unwrap() / &lead;
        q[k] = f.clone();
        for (i, dc) in d.iter().enumerate() {
            let t = dc * &f;
            r[k + i] = &r[k + i] - t;
        }
        r.pop();
        rvec_trim(&mut r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub(crate) fn rvec_derivative(v: &[Rat]) -> Vec<Rat> {
    let mut d: Vec<Rat> = v
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rat::from(BigInt::from(i)))
        .collect();
    rvec_trim(&mut d);
    d
}

/// Monic GCD of dense rational polynomials via the Euclidean algorithm.
pub(crate) fn rvec_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    rvec_trim(&mut r0);
    rvec_trim(&mut r1);
    while !r1.is_empty() {
        let r = rvec_rem(&r0, &r1);
        r0 = r1;
        r1 = r;
    }
    if let Some(lead) = r0.last().cloned() {
        for c in &mut r0 {
            *c = &*c / &lead;
        }
    }
    r0
}

/// Clear denominators and take the primitive part of a dense rational
/// polynomial, as an integer Laurent polynomial with lowest exponent 0.
pub(crate) fn rvec_to_primitive(v: &[Rat]) -> LaurentPoly {
    let mut v = v.to_vec();
    rvec_trim(&mut v);
    if v.is_empty() {
        return LaurentPoly::zero();
    }
    let mut den = BigInt::one();
    for c in &v {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * Rat::from(den.clone())).to_integer())
        .collect();
    LaurentPoly::from_dense(&ints, 0).primitive_part()
}

// ---- GCD / resultant / Bezout ----

/// GCD over Q[z, z^-1], returned as a primitive integer polynomial with
/// lowest exponent 0 and positive leading coefficient.
pub fn poly_gcd(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    assert!(!p.is_zero() && !q.is_zero());
    let (pd, _) = p.to_dense();
    let (qd, _) = q.to_dense();
    let g = rvec_gcd(&rvec_from_int(&pd), &rvec_from_int(&qd));
    rvec_to_primitive(&g)
}

/// The resultant matrix and its determinant for the nonnegative-exponent
/// forms z^{-h}P, z^{-h'}Q.
#[derive(Clone, Debug)]
pub struct ResultantInfo {
    pub matrix: Vec<Vec<BigInt>>,
    pub delta: BigInt,
    pub shift_p: i64,
    pub shift_q: i64,
}

pub fn resultant(p: &LaurentPoly, q: &LaurentPoly) -> ResultantInfo {
    let (pd, hp) = p.to_dense();
    let (qd, hq) = q.to_dense();
    let n = pd.len() - 1;
    let m = qd.len() - 1;
    let size = n + m;
    let mut matrix = vec![vec![BigInt::zero(); size]; size];
    for i in 0..m {
        for (j, c) in pd.iter().enumerate() {
            matrix[i][i + j] = c.clone();
        }
    }
    for i in 0..n {
        for (j, c) in qd.iter().enumerate() {
            matrix[m + i][i + j] = c.clone();
        }
    }
    let delta = det_bareiss(&matrix);
    ResultantInfo {
        matrix,
        delta,
        shift_p: hp,
        shift_q: hq,
    }
}

/// Integer cofactors A, B with A*P + B*Q = delta (as Laurent polynomials).
pub fn bezout(p: &LaurentPoly, q: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly, BigInt)> {
    let info = resultant(p, q);
    if info.delta.is_zero() {
        return Err(Error::NotCoprime);
    }
    let size = info.matrix.len();
    let (pd, hp) = p.to_dense();
    let (qd, hq) = q.to_dense();
    let n = pd.len() - 1;
    let m = qd.len() - 1;
    if size == 0 {
        // both polynomials are constants +-c; P/c is already a unit
        let a = LaurentPoly::monomial(info.delta.clone() / p.coeff(p.low()), -hp);
        return Ok((a, LaurentPoly::zero(), info.delta));
    }
    // Solve M^T c = delta * e_0 over the rationals; entries of M^{-1} lie in
    // Z/delta, so c is integral.
    let at: Vec<Vec<Rat>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| Rat::from(info.matrix[j][i].clone()))
                .collect()
        })
        .collect();
    let mut rhs = vec![Rat::zero(); size];
    rhs[0] = Rat::from(info.delta.clone());
    let sol = solve_rational(&at, &rhs).expect("regular resultant matrix");
    let ints: Vec<BigInt> = sol
        .iter()
        .map(|c| {
            assert!(c.denom().is_one(), "Bezout cofactors must be integral");
            c.to_integer()
        })
        .collect();
    let a = LaurentPoly::from_dense(&ints[..m], 0).shifted(-hp);
    let b = LaurentPoly::from_dense(&ints[m..m + n], 0).shifted(-hq);
    Ok((a, b, info.delta))
}
