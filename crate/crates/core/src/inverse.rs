//! Absolutely summable convolution inverses of hyperbolic polynomials.
//!
//! Writing P = z^h Q with Q(0) != 0, the inverse is the z^{-h} shift of the
//! partial-fraction expansion of 1/Q: each root outside the unit circle
//! contributes a causal geometric tail, each root inside an anticausal one,
//! and a root of multiplicity m a polynomial-times-geometric tail of degree
//! m - 1. Monomials invert exactly to a rational finite-support stream.

use num::complex::Complex64;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::rat::{rat_int, Rat};
use crate::roots::{find_roots, is_hyperbolic, ModulusSide};
use crate::stream::{FiniteSupport, GeometricTails, Side, Stream, Tail};

/// Default tolerance for the hyperbolicity gate.
pub const HYPERBOLIC_TOL: f64 = 1e-9;

/// Taylor coefficients of a complex polynomial at `w`, low order first.
fn taylor_at(coeffs: &[Complex64], w: Complex64) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // one synthetic division by (z - w); remainder is the k-th coefficient
        for i in (k..n - 1).rev() {
            let t = c[i + 1] * w;
            c[i] += t;
        }
        out.push(c[k]);
    }
    out
}

/// First `n` coefficients of the reciprocal power series of `r` (r[0] != 0).
fn series_inverse(r: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0); n];
    let r0 = r[0];
    g[0] = r0.inv();
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 1..=k {
            if s < r.len() {
                acc += r[s] * g[k - s];
            }
        }
        g[k] = -acc / r0;
    }
    g
}

/// Coefficients (in t) of binomial(t + j - 1, j - 1), degree j - 1.
fn binomial_poly(j: usize) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for s in 1..j {
        let mut q = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            q[k] += c * Complex64::new(s as f64, 0.0);
            q[k + 1] += c;
        }
        p = q;
    }
    let fact: f64 = (1..j).map(|s| s as f64).product();
    for c in &mut p {
        *c /= fact;
    }
    p
}

/// The absolutely summable inverse of a hyperbolic polynomial, as symbolic
/// geometric tails (exact finite support when P is a monomial).
pub fn inverse(p: &LaurentPoly, precision: f64) -> Result<Stream> {
    let hyp = is_hyperbolic(p, HYPERBOLIC_TOL)?;
    if !hyp.hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let (dense, h) = p.to_dense();
    if dense.len() == 1 {
        // c z^h inverts exactly to (1/c) z^{-h}
        let c = Rat::from(dense[0].clone());
        let fs = FiniteSupport::from_pairs(&[(-h, rat_int(1) / c)]);
        return Ok(Stream::Tails(GeometricTails {
            finite: fs,
            tails: vec![],
        }));
    }
    let root_precision = (precision * 1e-3).min(1e-12).max(1e-15);
    let rs = find_roots(p, root_precision)?;
    let q: Vec<Complex64> = dense
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    let mut tails = Vec::new();
    for r in &rs.roots {
        let w = r.value;
        let m = r.multiplicity;
        // Taylor of Q at w; drop the first m (vanishing) coefficients to get
        // the Taylor expansion of R = Q / (z - w)^m
        let qt = taylor_at(&q, w);
        let rt = &qt[m..];
        let g = series_inverse(rt, m);
        for j in 1..=m {
            let a = g[m - j]; // coefficient of 1/(z - w)^j
            if a.norm() == 0.0 {
                continue;
            }
            let bp = binomial_poly(j);
            match r.modulus_side {
                ModulusSide::Outside => {
                    // a/(z-w)^j = a (-1)^j sum_t C(t+j-1, j-1) w^{-j-t} z^t
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    let scale = a * Complex64::new(sign, 0.0) * w.powi(-(j as i32));
                    tails.push(Tail {
                        root: w,
                        poly: bp.iter().map(|c| c * scale).collect(),
                        side: Side::Causal,
                        start: -h,
                    });
                }
                ModulusSide::Inside => {
                    // a/(z-w)^j = a sum_t C(t+j-1, j-1) w^t z^{-j-t}
                    tails.push(Tail {
                        root: w,
                        poly: bp.iter().map(|c| c * a).collect(),
                        side: Side::Anticausal,
                        start: -(j as i64) - h,
                    });
                }
            }
        }
    }
    Ok(Stream::Tails(GeometricTails {
        finite: FiniteSupport::default(),
        tails,
    }))
}

/// Check that `P x inv` agrees with the identity stream on [lo, hi].
pub fn verify_inverse(p: &LaurentPoly, inv: &Stream, lo: i64, hi: i64, tol: f64) -> Result<bool> {
    let prod = Stream::from_poly(p).convolve(inv)?;
    prod.agrees_on(&Stream::identity(), lo, hi, tol)
}
