//! Two-sided streams with componentwise addition and convolution product.
//!
//! Three representations are supported: exact finite support over the
//! rationals, symbolic geometric tails (for convolution inverses), and
//! error-bounded float windows. Exact results are produced whenever both
//! operands are exact.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::rat::{parse_rat, rat_to_string, to_f64, Rat};

/// Default half-width used when a convolution has no natural finite range.
const DEFAULT_HALF_WINDOW: i64 = 25;

/// Exact stream with finitely many nonzero rational entries.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FiniteSupport {
    entries: BTreeMap<i64, Rat>,
}

impl FiniteSupport {
    pub fn new(entries: BTreeMap<i64, Rat>) -> Self {
        FiniteSupport {
            entries: entries.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_pairs(pairs: &[(i64, Rat)]) -> Self {
        let mut m: BTreeMap<i64, Rat> = BTreeMap::new();
        for (i, v) in pairs {
            let e = m.entry(*i).or_insert_with(Rat::zero);
            *e += v;
        }
        Self::new(m)
    }

    pub fn entries(&self) -> &BTreeMap<i64, Rat> {
        &self.entries
    }

    pub fn entry(&self, n: i64) -> Rat {
        self.entries.get(&n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        match (self.entries.keys().next(), self.entries.keys().next_back()) {
            (Some(&lo), Some(&hi)) => Some((lo, hi)),
            _ => None,
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut m = self.entries.clone();
        for (&i, v) in &other.entries {
            let e = m.entry(i).or_insert_with(Rat::zero);
            *e += v;
        }
        Self::new(m)
    }

    fn negate(&self) -> Self {
        FiniteSupport {
            entries: self.entries.iter().map(|(&i, v)| (i, -v.clone())).collect(),
        }
    }

    fn shift(&self, d: i64) -> Self {
        FiniteSupport {
            entries: self
                .entries
                .iter()
                .map(|(&i, v)| (i - d, v.clone()))
                .collect(),
        }
    }

    fn convolve(&self, other: &Self) -> Self {
        let mut m: BTreeMap<i64, Rat> = BTreeMap::new();
        for (&i, a) in &self.entries {
            for (&j, b) in &other.entries {
                let e = m.entry(i + j).or_insert_with(Rat::zero);
                *e += a * b;
            }
        }
        Self::new(m)
    }

    fn l1(&self) -> f64 {
        self.entries.values().map(|v| to_f64(&v.abs())).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Entries at indices >= start, ratio root^{-1}, |root| > 1.
    Causal,
    /// Entries at indices <= start, ratio root, |root| < 1.
    Anticausal,
}

/// One geometric tail: entry at offset t >= 0 from `start` (outward) is
/// `poly(t) * root^{-t}` (causal) or `poly(t) * root^{t}` (anticausal),
/// where `poly(t) = sum_j poly[j] t^j`.
#[derive(Clone, Debug)]
pub struct Tail {
    pub root: Complex64,
    pub poly: Vec<Complex64>,
    pub side: Side,
    pub start: i64,
}

impl Tail {
    /// Decay ratio rho < 1 per step outward.
    fn rho(&self) -> f64 {
        match self.side {
            Side::Causal => 1.0 / self.root.norm(),
            Side::Anticausal => self.root.norm(),
        }
    }

    /// Distance of |root| from the unit circle.
    pub fn margin(&self) -> f64 {
        (self.root.norm() - 1.0).abs()
    }

    fn poly_abs(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut tp = 1.0;
        for c in &self.poly {
            acc += c.norm() * tp;
            tp *= t;
        }
        acc
    }

    fn eval(&self, n: i64) -> Complex64 {
        let t = match self.side {
            Side::Causal => n - self.start,
            Side::Anticausal => self.start - n,
        };
        if t < 0 {
            return Complex64::new(0.0, 0.0);
        }
        let tf = t as f64;
        let mut p = Complex64::new(0.0, 0.0);
        let mut tp = Complex64::new(1.0, 0.0);
        for c in &self.poly {
            p += c * tp;
            tp *= Complex64::new(tf, 0.0);
        }
        let ratio = match self.side {
            Side::Causal => self.root.inv(),
            Side::Anticausal => self.root,
        };
        p * ratio.powf(tf)
    }

    /// First offset from which |poly(t) * rho^t| is nonincreasing.
    fn monotone_from(&self) -> i64 {
        let rho = self.rho();
        let d = self.poly.len().saturating_sub(1) as f64;
        if d == 0.0 {
            return 0;
        }
        let mut t = 1i64;
        while ((t as f64 + 1.0) / t as f64).powf(d) * rho >= 1.0 {
            t += 1;
            if t > 1_000_000 {
                break;
            }
        }
        t
    }

    /// Upper bound on sup_{t >= from} of the absolute entry.
    fn sup_bound(&self, from: i64) -> f64 {
        let from = from.max(0);
        let rho = self.rho();
        let t_mono = self.monotone_from().max(from);
        let mut best: f64 = 0.0;
        for t in from..=t_mono {
            best = best.max(self.poly_abs(t as f64) * rho.powi(t as i32));
        }
        best
    }

    /// Upper bound on sum_{t >= from} of the absolute entries.
    fn sum_bound(&self, from: i64) -> f64 {
        let from = from.max(0);
        let rho = self.rho();
        let t_mono = self.monotone_from().max(from);
        let mut acc = 0.0;
        for t in from..t_mono {
            acc += self.poly_abs(t as f64) * rho.powi(t as i32);
        }
        let d = self.poly.len().saturating_sub(1) as f64;
        let r = rho * ((t_mono as f64 + 1.0) / (t_mono as f64).max(1.0)).powf(d);
        let head = self.poly_abs(t_mono as f64) * rho.powi(t_mono as i32);
        if r < 1.0 {
            acc + head / (1.0 - r)
        } else {
            f64::INFINITY
        }
    }
}

/// Finite part plus symbolic geometric tails; the canonical representation
/// of a hyperbolic convolution inverse.
#[derive(Clone, Debug)]
pub struct GeometricTails {
    pub finite: FiniteSupport,
    pub tails: Vec<Tail>,
}

impl GeometricTails {
    /// Smallest distance of any tail root from the unit circle.
    pub fn margin(&self) -> f64 {
        self.tails
            .iter()
            .map(|t| t.margin())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn entry(&self, n: i64) -> f64 {
        let mut acc = Complex64::new(to_f64(&self.finite.entry(n)), 0.0);
        for t in &self.tails {
            acc += t.eval(n);
        }
        acc.re
    }

    fn check_summable(&self) -> Result<()> {
        for t in &self.tails {
            let ok = match t.side {
                Side::Causal => t.root.norm() > 1.0,
                Side::Anticausal => t.root.norm() < 1.0,
            };
            if !ok || t.margin() <= 0.0 {
                return Err(Error::NonSummable);
            }
        }
        Ok(())
    }

    /// Sup bound on |entries| outside [lo, hi].
    fn outside_bound(&self, lo: i64, hi: i64) -> f64 {
        let mut b: f64 = 0.0;
        for (&i, v) in self.finite.entries() {
            if i < lo || i > hi {
                b = b.max(to_f64(&v.abs()));
            }
        }
        for t in &self.tails {
            match t.side {
                Side::Causal => {
                    // entries below lo (down to start) and above hi
                    for n in t.start.max(lo.saturating_sub(0) - 0)..lo {
                        if n >= t.start {
                            b = b.max(t.eval(n).norm());
                        }
                    }
                    b = b.max(t.sup_bound(hi + 1 - t.start));
                }
                Side::Anticausal => {
                    for n in (hi + 1)..=t.start {
                        b = b.max(t.eval(n).norm());
                    }
                    b = b.max(t.sup_bound(t.start - (lo - 1)));
                }
            }
        }
        b
    }

    fn l1(&self) -> f64 {
        self.finite.l1() + self.tails.iter().map(|t| t.sum_bound(0)).sum::<f64>()
    }
}

/// Float window: values per index on [lo, hi], a sup bound on every omitted
/// entry, and a uniform error bound on the stored values.
#[derive(Clone, Debug)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    pub values: Vec<f64>,
    pub tail_bound: f64,
    pub err: f64,
}

impl Window {
    pub fn new(lo: i64, hi: i64, values: Vec<f64>, tail_bound: f64) -> Self {
        assert!(lo <= hi && values.len() == (hi - lo + 1) as usize);
        assert!(tail_bound >= 0.0);
        Window {
            lo,
            hi,
            values,
            tail_bound,
            err: 0.0,
        }
    }

    pub fn value(&self, n: i64) -> Option<f64> {
        if n < self.lo || n > self.hi {
            None
        } else {
            Some(self.values[(n - self.lo) as usize])
        }
    }
}

/// A two-sided stream in one of three representations.
#[derive(Clone, Debug)]
pub enum Stream {
    Finite(FiniteSupport),
    Tails(GeometricTails),
    Window(Window),
}

impl Stream {
    /// The convolution identity I = (0^inf; 1, 0^inf).
    pub fn identity() -> Self {
        Stream::Finite(FiniteSupport::from_pairs(&[(0, Rat::from(
            num::BigInt::from(1),
        ))]))
    }

    pub fn zero() -> Self {
        Stream::Finite(FiniteSupport::default())
    }

    pub fn from_poly(p: &LaurentPoly) -> Self {
        Stream::Finite(FiniteSupport::new(
            p.coeffs()
                .iter()
                .map(|(&e, c)| (e, Rat::from(c.clone())))
                .collect(),
        ))
    }

    pub fn as_finite(&self) -> Option<&FiniteSupport> {
        match self {
            Stream::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub fn add(&self, other: &Stream) -> Result<Stream> {
        use Stream::*;
        Ok(match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.add(b)),
            (Finite(a), Tails(b)) | (Tails(b), Finite(a)) => Tails(GeometricTails {
                finite: b.finite.add(a),
                tails: b.tails.clone(),
            }),
            (Tails(a), Tails(b)) => {
                let mut tails = a.tails.clone();
                tails.extend(b.tails.clone());
                Tails(GeometricTails {
                    finite: a.finite.add(&b.finite),
                    tails,
                })
            }
            (a, b) => {
                // at least one Window: result is a Window on the union range
                let (wa, wb) = (a.natural_range(), b.natural_range());
                let lo = wa.0.min(wb.0);
                let hi = wa.1.max(wb.1);
                let x = a.window_of(lo, hi, f64::EPSILON)?;
                let y = b.window_of(lo, hi, f64::EPSILON)?;
                let values = x
                    .values
                    .iter()
                    .zip(&y.values)
                    .map(|(u, v)| u + v)
                    .collect();
                Window(crate::stream::Window {
                    lo,
                    hi,
                    values,
                    tail_bound: x.tail_bound + y.tail_bound,
                    err: x.err + y.err,
                })
            }
        })
    }

    pub fn negate(&self) -> Stream {
        match self {
            Stream::Finite(a) => Stream::Finite(a.negate()),
            Stream::Tails(a) => Stream::Tails(GeometricTails {
                finite: a.finite.negate(),
                tails: a
                    .tails
                    .iter()
                    .map(|t| Tail {
                        poly: t.poly.iter().map(|c| -c).collect(),
                        ..t.clone()
                    })
                    .collect(),
            }),
            Stream::Window(w) => Stream::Window(Window {
                values: w.values.iter().map(|v| -v).collect(),
                ..w.clone()
            }),
        }
    }

    /// (shift(a, d))_n = a_{n+d}.
    pub fn shift(&self, d: i64) -> Stream {
        match self {
            Stream::Finite(a) => Stream::Finite(a.shift(d)),
            Stream::Tails(a) => Stream::Tails(GeometricTails {
                finite: a.finite.shift(d),
                tails: a
                    .tails
                    .iter()
                    .map(|t| Tail {
                        start: t.start - d,
                        ..t.clone()
                    })
                    .collect(),
            }),
            Stream::Window(w) => Stream::Window(Window {
                lo: w.lo - d,
                hi: w.hi - d,
                ..w.clone()
            }),
        }
    }

    fn natural_range(&self) -> (i64, i64) {
        match self {
            Stream::Finite(a) => a.support().unwrap_or((0, 0)),
            Stream::Window(w) => (w.lo, w.hi),
            Stream::Tails(a) => {
                let mut lo = i64::MAX;
                let mut hi = i64::MIN;
                for t in &a.tails {
                    match t.side {
                        Side::Causal => {
                            lo = lo.min(t.start);
                            hi = hi.max(t.start + DEFAULT_HALF_WINDOW);
                        }
                        Side::Anticausal => {
                            hi = hi.max(t.start);
                            lo = lo.min(t.start - DEFAULT_HALF_WINDOW);
                        }
                    }
                }
                if let Some((flo, fhi)) = a.finite.support() {
                    lo = lo.min(flo);
                    hi = hi.max(fhi);
                }
                if lo > hi {
                    (-DEFAULT_HALF_WINDOW, DEFAULT_HALF_WINDOW)
                } else {
                    (lo, hi)
                }
            }
        }
    }

    /// Convolution product. Exact when both operands are finitely supported;
    /// symbolic when one operand is finitely supported and the other carries
    /// geometric tails; a float window otherwise.
    pub fn convolve(&self, other: &Stream) -> Result<Stream> {
        use Stream::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a.convolve(b))),
            (Finite(a), Tails(b)) | (Tails(b), Finite(a)) => {
                b.check_summable()?;
                Ok(Tails(convolve_finite_tails(a, b)))
            }
            (Finite(a), Window(w)) | (Window(w), Finite(a)) => {
                convolve_finite_window(a, w).map(Window)
            }
            (Window(_), Window(_)) => Err(Error::NonSummable),
            (a, b) => {
                let (la, ha) = a.natural_range();
                let (lb, hb) = b.natural_range();
                convolve_window(a, b, la + lb, ha + hb, 1e-12).map(Window)
            }
        }
    }

    /// Evaluate the stream on [lo, hi] as a float window with a certified
    /// tail bound.
    pub fn window_of(&self, lo: i64, hi: i64, precision: f64) -> Result<Window> {
        if lo > hi || precision <= 0.0 {
            return Err(Error::Invalid("window requires lo <= hi, precision > 0".into()));
        }
        match self {
            Stream::Finite(a) => {
                let values = (lo..=hi).map(|n| to_f64(&a.entry(n))).collect();
                let tail_bound = a
                    .entries()
                    .iter()
                    .filter(|(&i, _)| i < lo || i > hi)
                    .map(|(_, v)| to_f64(&v.abs()))
                    .fold(0.0, f64::max);
                Ok(Window {
                    lo,
                    hi,
                    values,
                    tail_bound,
                    err: 0.0,
                })
            }
            Stream::Tails(a) => {
                a.check_summable()?;
                let values = (lo..=hi).map(|n| a.entry(n)).collect();
                Ok(Window {
                    lo,
                    hi,
                    values,
                    tail_bound: a.outside_bound(lo, hi),
                    err: 1e-13 * (1.0 + a.l1()),
                })
            }
            Stream::Window(w) => {
                // widening pads with zeros; the padded entries are only known
                // up to the stored tail bound, which joins the error term
                let widened = lo < w.lo || hi > w.hi;
                let values: Vec<f64> = (lo..=hi).map(|n| w.value(n).unwrap_or(0.0)).collect();
                let dropped = w
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| {
                        let n = w.lo + *i as i64;
                        n < lo || n > hi
                    })
                    .map(|(_, v)| v.abs())
                    .fold(0.0, f64::max);
                Ok(Window {
                    lo,
                    hi,
                    values,
                    tail_bound: w.tail_bound.max(dropped),
                    err: if widened { w.err + w.tail_bound } else { w.err },
                })
            }
        }
    }

    /// Compare two streams entrywise on a window, within `tol` plus the
    /// accumulated window error and tail bounds.
    pub fn agrees_on(&self, other: &Stream, lo: i64, hi: i64, tol: f64) -> Result<bool> {
        if let (Stream::Finite(a), Stream::Finite(b)) = (self, other) {
            return Ok((lo..=hi).all(|n| a.entry(n) == b.entry(n)));
        }
        let p = tol.max(f64::MIN_POSITIVE);
        let wa = self.window_of(lo, hi, p)?;
        let wb = other.window_of(lo, hi, p)?;
        let slack = tol + wa.err + wb.err;
        Ok(wa
            .values
            .iter()
            .zip(&wb.values)
            .all(|(x, y)| (x - y).abs() <= slack))
    }

    // ---- serialization ----

    pub fn to_json(&self) -> Value {
        match self {
            Stream::Finite(a) => {
                let entries: serde_json::Map<String, Value> = a
                    .entries()
                    .iter()
                    .map(|(i, v)| (i.to_string(), Value::String(rat_to_string(v))))
                    .collect();
                json!({ "kind": "finite_support", "entries": entries })
            }
            Stream::Tails(a) => {
                let finite: serde_json::Map<String, Value> = a
                    .finite
                    .entries()
                    .iter()
                    .map(|(i, v)| (i.to_string(), Value::String(rat_to_string(v))))
                    .collect();
                let tails: Vec<Value> = a
                    .tails
                    .iter()
                    .map(|t| {
                        json!({
                            "root": [t.root.re, t.root.im],
                            "poly": t.poly.iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>(),
                            "side": match t.side { Side::Causal => "causal", Side::Anticausal => "anticausal" },
                            "start": t.start,
                        })
                    })
                    .collect();
                json!({ "kind": "geometric_tails", "finite": finite, "tails": tails })
            }
            Stream::Window(w) => json!({
                "kind": "window",
                "lo": w.lo,
                "hi": w.hi,
                "values": w.values,
                "tail_bound": w.tail_bound,
                "err": w.err,
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Stream> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: msg.into(),
        };
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing kind"))?;
        let parse_entries = |v: &Value| -> Result<FiniteSupport> {
            let obj = v.as_object().ok_or_else(|| bad("entries must be a map"))?;
            let mut m = BTreeMap::new();
            for (k, val) in obj {
                let idx: i64 = k.parse().map_err(|_| bad("bad index"))?;
                let s = val.as_str().ok_or_else(|| bad("entry must be a string"))?;
                m.insert(idx, parse_rat(s)?);
            }
            Ok(FiniteSupport::new(m))
        };
        match kind {
            "finite_support" => Ok(Stream::Finite(parse_entries(
                v.get("entries").ok_or_else(|| bad("missing entries"))?,
            )?)),
            "geometric_tails" => {
                let finite = parse_entries(v.get("finite").ok_or_else(|| bad("missing finite"))?)?;
                let mut tails = Vec::new();
                for t in v
                    .get("tails")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing tails"))?
                {
                    let c2 = |v: &Value| -> Result<Complex64> {
                        let a = v.as_array().ok_or_else(|| bad("complex must be [re, im]"))?;
                        Ok(Complex64::new(
                            a[0].as_f64().unwrap_or(f64::NAN),
                            a[1].as_f64().unwrap_or(f64::NAN),
                        ))
                    };
                    let side = match t.get("side").and_then(Value::as_str) {
                        Some("causal") => Side::Causal,
                        Some("anticausal") => Side::Anticausal,
                        _ => return Err(bad("bad side")),
                    };
                    tails.push(Tail {
                        root: c2(t.get("root").ok_or_else(|| bad("missing root"))?)?,
                        poly: t
                            .get("poly")
                            .and_then(Value::as_array)
                            .ok_or_else(|| bad("missing poly"))?
                            .iter()
                            .map(c2)
                            .collect::<Result<_>>()?,
                        side,
                        start: t
                            .get("start")
                            .and_then(Value::as_i64)
                            .ok_or_else(|| bad("missing start"))?,
                    });
                }
                Ok(Stream::Tails(GeometricTails { finite, tails }))
            }
            "window" => {
                let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| bad("lo"))?;
                let hi = v.get("hi").and_then(Value::as_i64).ok_or_else(|| bad("hi"))?;
                let values: Vec<f64> = v
                    .get("values")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("values"))?
                    .iter()
                    .map(|x| x.as_f64().unwrap_or(f64::NAN))
                    .collect();
                let mut w = Window::new(
                    lo,
                    hi,
                    values,
                    v.get("tail_bound").and_then(Value::as_f64).unwrap_or(0.0),
                );
                w.err = v.get("err").and_then(Value::as_f64).unwrap_or(0.0);
                Ok(Stream::Window(w))
            }
            _ => Err(bad("unknown stream kind")),
        }
    }
}

/// Map geometric tails through a finitely supported stream: each monomial
/// c z^d shifts every tail start by d and scales its coefficients.
fn convolve_finite_tails(a: &FiniteSupport, b: &GeometricTails) -> GeometricTails {
    let finite = a.convolve(&b.finite);
    let mut tails = Vec::new();
    for (&d, c) in a.entries() {
        let cf = Complex64::new(to_f64(c), 0.0);
        for t in &b.tails {
            tails.push(Tail {
                root: t.root,
                poly: t.poly.iter().map(|p| p * cf).collect(),
                side: t.side,
                start: t.start + d,
            });
        }
    }
    GeometricTails { finite, tails }
}

fn convolve_finite_window(a: &FiniteSupport, w: &Window) -> Result<Window> {
    let (alo, ahi) = a.support().ok_or(Error::WindowTooShort).unwrap_or((0, 0));
    if a.is_zero() {
        return Ok(Window::new(w.lo, w.hi, vec![0.0; w.values.len()], 0.0));
    }
    // (a x w)_n needs w_{n-d} for every d in supp(a)
    let lo = w.lo + ahi;
    let hi = w.hi + alo;
    if lo > hi {
        return Err(Error::WindowTooShort);
    }
    let scale = a.l1();
    let mut values = Vec::with_capacity((hi - lo + 1) as usize);
    for n in lo..=hi {
        let mut acc = 0.0;
        for (&d, c) in a.entries() {
            acc += to_f64(c) * w.value(n - d).unwrap();
        }
        values.push(acc);
    }
    let mut out = Window::new(lo, hi, values, w.tail_bound * scale);
    out.err = w.err * scale;
    Ok(out)
}

/// Convolution evaluated directly on a window; both operands must be
/// absolutely summable (geometric tails) or paired with one.
pub fn convolve_window(a: &Stream, b: &Stream, lo: i64, hi: i64, precision: f64) -> Result<Window> {
    let (ga, gb) = match (a, b) {
        (Stream::Tails(x), Stream::Tails(y)) => {
            x.check_summable()?;
            y.check_summable()?;
            (x, y)
        }
        _ => return Err(Error::NonSummable),
    };
    // truncate the i-sum; remainder <= sup|b| * l1-tail of a outside [-T, T]
    let sup_b = {
        let (nlo, nhi) = b.natural_range();
        let w = b.window_of(nlo, nhi, precision)?;
        w.values.iter().fold(w.tail_bound, |m, v| m.max(v.abs()))
    };
    let mut half = 2 * DEFAULT_HALF_WINDOW + hi.abs().max(lo.abs());
    let mut rem = f64::INFINITY;
    while half < 100_000 {
        rem = ga
            .tails
            .iter()
            .map(|t| t.sum_bound(half - t.start.abs()))
            .sum::<f64>()
            * sup_b;
        if rem < precision / 2.0 || rem == 0.0 {
            break;
        }
        half *= 2;
    }
    let mut values = Vec::with_capacity((hi - lo + 1) as usize);
    for n in lo..=hi {
        let mut acc = 0.0;
        for i in -half..=half {
            let ai = ga.entry(i);
            if ai != 0.0 {
                acc += ai * gb.entry(n - i);
            }
        }
        values.push(acc);
    }
    let mut w = Window::new(lo, hi, values, ga.l1() * sup_b);
    w.err = rem + 1e-12 * (1.0 + ga.l1() * gb.l1());
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn fs(pairs: &[(i64, i64)]) -> Stream {
        Stream::Finite(FiniteSupport::from_pairs(
            &pairs
                .iter()
                .map(|&(i, v)| (i, rat_int(v)))
                .collect::<Vec<_>>(),
        ))
    }

    #[test]
    fn finite_convolution_is_polynomial_multiplication() {
        // (1 - z) x (1 + z) = 1 - z^2 entrywise
        let a = fs(&[(0, 1), (1, -1)]);
        let b = fs(&[(0, 1), (1, 1)]);
        let c = a.convolve(&b).unwrap();
        let f = c.as_finite().unwrap();
        assert_eq!(f.entry(0), rat_int(1));
        assert_eq!(f.entry(1), rat_int(0));
        assert_eq!(f.entry(2), rat_int(-1));
    }

    #[test]
    fn identity_is_two_sided() {
        let a = fs(&[(-2, 3), (0, 1), (5, -7)]);
        let i = Stream::identity();
        for r in [a.convolve(&i).unwrap(), i.convolve(&a).unwrap()] {
            assert!(r.agrees_on(&a, -10, 10, 0.0).unwrap());
        }
    }

    #[test]
    fn truncated_geometric_inverse_of_one_minus_z() {
        // (1 - z) x (1, 1, ..., 1 on [0, N]) agrees with I on [0, N]
        let n = 12;
        let ones = Stream::Finite(FiniteSupport::from_pairs(
            &(0..=n).map(|i| (i, rat_int(1))).collect::<Vec<_>>(),
        ));
        let p = fs(&[(0, 1), (1, -1)]);
        let prod = p.convolve(&ones).unwrap();
        assert!(prod.agrees_on(&Stream::identity(), 0, n, 0.0).unwrap());
    }

    #[test]
    fn add_negate_group() {
        let a = fs(&[(0, 1), (3, -2)]);
        let z = a.add(&a.negate()).unwrap();
        assert!(z.as_finite().unwrap().is_zero());
        let b = fs(&[(0, 2)]);
        let s = fs(&[(0, 1)]).add(&b).unwrap();
        assert_eq!(s.as_finite().unwrap().entry(0), rat_int(3));
    }

    #[test]
    fn shift_examples() {
        let i = Stream::identity();
        let s = i.shift(1);
        assert_eq!(s.as_finite().unwrap().entry(-1), rat_int(1));
        let a = fs(&[(0, 5), (2, 7)]);
        assert!(a
            .shift(1)
            .shift(-1)
            .agrees_on(&a, -5, 5, 0.0)
            .unwrap());
        // window shift moves the range and keeps the tail bound
        let w = Stream::Window(Window::new(0, 3, vec![1.0, 2.0, 3.0, 4.0], 0.5));
        if let Stream::Window(sw) = w.shift(2) {
            assert_eq!((sw.lo, sw.hi), (-2, 1));
            assert_eq!(sw.tail_bound, 0.5);
        } else {
            panic!("expected window");
        }
    }

    #[test]
    fn shift_commutes_with_convolve() {
        let a = fs(&[(0, 1), (1, -3), (2, 1)]);
        let b = fs(&[(-1, 2), (4, 5)]);
        let lhs = a.convolve(&b).unwrap().shift(3);
        let rhs = a.shift(3).convolve(&b).unwrap();
        assert!(lhs.agrees_on(&rhs, -10, 10, 0.0).unwrap());
    }

    #[test]
    fn window_of_finite_and_slicing() {
        let a = Stream::Finite(FiniteSupport::from_pairs(&[(0, rat(1, 2))]));
        let w = a.window_of(-1, 1, 1e-12).unwrap();
        assert_eq!(w.values, vec![0.0, 0.5, 0.0]);
        assert_eq!(w.tail_bound, 0.0);

        let big = Stream::Window(Window::new(-2, 2, vec![5.0, 1.0, 2.0, 3.0, 4.0], 0.1));
        let narrow = big.window_of(-1, 1, 1e-12).unwrap();
        assert_eq!(narrow.values, vec![1.0, 2.0, 3.0]);
        // sliced-off |5.0| enters the tail bound
        assert_eq!(narrow.tail_bound, 5.0);
    }

    #[test]
    fn geometric_tail_window() {
        // inverse of (z - 2): entries -2^{-1-n} for n >= 0
        let t = GeometricTails {
            finite: FiniteSupport::default(),
            tails: vec![Tail {
                root: Complex64::new(2.0, 0.0),
                poly: vec![Complex64::new(-0.5, 0.0)],
                side: Side::Causal,
                start: 0,
            }],
        };
        let s = Stream::Tails(t);
        let w = s.window_of(0, 3, 1e-12).unwrap();
        let expect = [-0.5, -0.25, -0.125, -0.0625];
        for (v, e) in w.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12);
        }
        assert!(w.tail_bound <= 0.03125 + 1e-12 && w.tail_bound > 0.0);
    }

    #[test]
    fn window_plus_finite_takes_union_range() {
        let w = Stream::Window(Window::new(0, 3, vec![1.0; 4], 0.25));
        let f = fs(&[(-2, 1), (1, 1)]);
        if let Stream::Window(sum) = w.add(&f).unwrap() {
            assert_eq!((sum.lo, sum.hi), (-2, 3));
            assert!((sum.value(-2).unwrap() - 1.0).abs() < 1e-12);
            assert!((sum.value(1).unwrap() - 2.0).abs() < 1e-12);
            assert_eq!(sum.tail_bound, 0.25);
        } else {
            panic!("expected window");
        }
    }

    #[test]
    fn window_convolve_window_is_rejected() {
        let w1 = Stream::Window(Window::new(0, 1, vec![1.0, 1.0], 0.5));
        let w2 = Stream::Window(Window::new(0, 1, vec![1.0, 1.0], 0.5));
        assert!(matches!(w1.convolve(&w2), Err(Error::NonSummable)));
    }

    #[test]
    fn serialization_round_trip_is_lossless_for_finite_support() {
        let a = Stream::Finite(FiniteSupport::from_pairs(&[
            (-3, rat(22, 7)),
            (0, rat(-1, 2)),
            (9, rat_int(4)),
        ]));
        let v = a.to_json();
        let b = Stream::from_json(&v).unwrap();
        match (&a, &b) {
            (Stream::Finite(x), Stream::Finite(y)) => assert_eq!(x, y),
            _ => panic!("round trip changed representation"),
        }
    }
}
