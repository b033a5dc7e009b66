//! Structure of the zero set Omega_P: its dimension, the resultant-bounded
//! intersection with Omega_Q, the factor criterion, and the direct-sum
//! decomposition Omega_{PxQ} = Omega_P + Omega_Q for coprime factors.
//!
//! Statements about bi-infinite sequences are verified on finite windows:
//! membership always means the convolution vanishes mod 1 at every index it
//! fully determines, and each convolution states its window shrinkage.

use num::bigint::BigInt;
use num::{Signed, Zero};

use crate::dynamics::TorusSeq;
use crate::error::{Error, Result};
use crate::poly::{bezout, resultant, LaurentPoly};
use crate::rat::{mod1, rat, Rat};

/// dim Omega_P = n - h, the exponent span of P.
pub fn dim_omega(p: &LaurentPoly) -> i64 {
    p.high() - p.low()
}

/// Convolution (P x x)_n when every index it references lies in the window
/// (always, for periodic x).
fn conv_at(p: &LaurentPoly, x: &TorusSeq, n: i64) -> Option<Rat> {
    let mut acc = Rat::zero();
    for (&j, c) in p.coeffs() {
        acc += Rat::from(c.clone()) * x.at(n - j)?;
    }
    Some(acc)
}

/// Indices n at which P x x is fully determined by a non-periodic window.
fn determined_range(p: &LaurentPoly, x: &TorusSeq) -> Option<(i64, i64)> {
    let lo = x.start + p.high();
    let hi = x.start + x.values.len() as i64 - 1 + p.low();
    (lo <= hi).then_some((lo, hi))
}

/// Window membership in Omega_P: P x x vanishes mod 1 wherever determined.
pub fn is_member(p: &LaurentPoly, x: &TorusSeq) -> bool {
    if x.periodic {
        let m = x.values.len() as i64;
        return (0..m).all(|n| conv_at(p, x, n).map(|v| v.is_integer()).unwrap_or(false));
    }
    match determined_range(p, x) {
        None => true, // too short to test anything
        Some((lo, hi)) => (lo..=hi).all(|n| {
            conv_at(p, x, n)
                .map(|v| v.is_integer())
                .unwrap_or(false)
        }),
    }
}

/// Constructive check that every grid point of (i/grid)^k extends to an
/// orbit window: true iff k does not exceed dim Omega_P (and the constraints
/// on the overdetermined coordinates hold for every seed otherwise).
pub fn dim_check(p: &LaurentPoly, k: usize, grid: u64) -> Result<bool> {
    if k == 0 || grid < 1 {
        return Err(Error::Invalid("k >= 1 and grid >= 1 required".into()));
    }
    let total = (grid as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > 1 << 20 {
        return Err(Error::Invalid("grid^k exceeds the search budget".into()));
    }
    let (dense, _) = p.to_dense();
    let d = dense.len() - 1;
    let q: Vec<Rat> = dense.iter().map(|c| Rat::from(c.clone())).collect();
    for s in 0..total {
        let mut t = s;
        let seed: Vec<Rat> = (0..k)
            .map(|_| {
                let v = rat((t % grid as u128) as i64, grid as i64);
                t /= grid as u128;
                v
            })
            .collect();
        if d == 0 {
            // Omega of a constant c is the (1/c)-grid
            if seed.iter().any(|v| !(v * &q[0]).is_integer()) {
                return Ok(false);
            }
            continue;
        }
        // extend: free choices through index d-1, then solve ascending; the
        // overdetermined seed coordinates (n in [d, k)) become checks
        let len = k.max(d) + 2;
        let mut x: Vec<Rat> = seed;
        for n in x.len()..len {
            if n < d {
                x.push(Rat::zero());
                continue;
            }
            let mut rest = Rat::zero();
            for (j, qj) in q.iter().enumerate().skip(1).take(d) {
                rest += qj * &x[n - j];
            }
            let c = mod1(&-rest);
            x.push(mod1(&(c / &q[0])));
        }
        for n in d..k {
            let mut acc = Rat::zero();
            for (j, qj) in q.iter().enumerate().take(d + 1) {
                acc += qj * &x[n - j];
            }
            if !acc.is_integer() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All sequences over the (1/|Delta|)-grid on the window annihilated by both
/// P and Q; complete there, since common zeros have coordinates in
/// (1/Delta)Z/Z.
pub fn enumerate_common_zeros(
    p: &LaurentPoly,
    q: &LaurentPoly,
    window: (i64, i64),
) -> Result<Vec<TorusSeq>> {
    let delta = resultant(p, q).delta;
    if delta.is_zero() {
        return Err(Error::NotCoprime);
    }
    let d = delta
        .abs()
        .to_string()
        .parse::<u64>()
        .map_err(|_| Error::Invalid("resultant too large to enumerate".into()))?;
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Invalid("empty window".into()));
    }
    let len = (hi - lo + 1) as usize;
    if (d as f64).powi(len as i32) > 2f64.powi(24) {
        return Err(Error::Invalid("Delta^len exceeds the search budget".into()));
    }
    let mut out = Vec::new();
    let mut current: Vec<Rat> = Vec::with_capacity(len);
    // depth-first over grid values with constraint pruning as soon as a
    // convolution index becomes fully determined
    fn dfs(
        p: &LaurentPoly,
        q: &LaurentPoly,
        d: u64,
        lo: i64,
        len: usize,
        current: &mut Vec<Rat>,
        out: &mut Vec<TorusSeq>,
    ) {
        if current.len() == len {
            out.push(
                TorusSeq::new(lo, current.clone(), false).expect("grid values lie in [0,1)"),
            );
            return;
        }
        let placed_hi = lo + current.len() as i64; // index being placed
        for i in 0..d {
            current.push(rat(i as i64, d as i64));
            let ok = [p, q].iter().all(|poly| {
                // constraints whose topmost referenced index is placed_hi
                let n = placed_hi + poly.low();
                if n - poly.high() < lo {
                    return true;
                }
                let mut acc = Rat::zero();
                let mut determined = true;
                for (&j, c) in poly.coeffs() {
                    let idx = (n - j - lo) as usize;
                    if idx >= current.len() {
                        determined = false;
                        break;
                    }
                    acc += Rat::from(c.clone()) * &current[idx];
                }
                !determined || acc.is_integer()
            });
            if ok {
                dfs(p, q, d, lo, len, current, out);
            }
            current.pop();
        }
    }
    dfs(p, q, d, lo, len, &mut current, &mut out);
    Ok(out)
}

/// Theorem-3(iii) style check: D (Q x xi) vanishes mod 1 on the checkable
/// window of every sample.
pub fn factor_check(p: &LaurentPoly, q: &LaurentPoly, samples: &[TorusSeq], d: &BigInt) -> bool {
    let _ = p; // samples are presumed Omega_P members; P itself is not reused
    samples.iter().all(|x| {
        if x.periodic {
            let m = x.values.len() as i64;
            (0..m).all(|n| {
                conv_at(q, x, n)
                    .map(|v| (v * Rat::from(d.clone())).is_integer())
                    .unwrap_or(true)
            })
        } else {
            match determined_range(q, x) {
                None => true,
                Some((lo, hi)) => (lo..=hi).all(|n| {
                    conv_at(q, x, n)
                        .map(|v| (v * Rat::from(d.clone())).is_integer())
                        .unwrap_or(true)
                }),
            }
        }
    })
}

/// Direct-sum decomposition witness: u + v = Delta x mod 1 with u in
/// Omega_P and v in Omega_Q on the verifiable window.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionWitness {
    pub u: TorusSeq,
    pub v: TorusSeq,
    pub scale: BigInt,
}

/// Convolve a Laurent polynomial against a torus window mod 1, shrinking
/// the window to the determined indices (no shrinkage for periodic x).
fn convolve_torus(t: &LaurentPoly, x: &TorusSeq) -> Result<TorusSeq> {
    if t.is_zero() {
        return TorusSeq::new(
            x.start,
            vec![Rat::zero(); x.values.len()],
            x.periodic,
        );
    }
    if x.periodic {
        let m = x.values.len() as i64;
        let values: Vec<Rat> = (0..m)
            .map(|n| mod1(&conv_at(t, x, n).expect("periodic always determined")))
            .collect();
        return TorusSeq::new(x.start, values, true);
    }
    let (lo, hi) = determined_range(t, x).ok_or(Error::WindowTooShort)?;
    let values: Vec<Rat> = (lo..=hi)
        .map(|n| mod1(&conv_at(t, x, n).expect("determined range")))
        .collect();
    TorusSeq::new(lo, values, false)
}

/// Split x in Omega_{PxQ} via the Bezout cofactors: u = (Delta - P A) x x,
/// v = (Delta - Q B) x x, so that u + v = Delta x mod 1.
pub fn decompose(p: &LaurentPoly, q: &LaurentPoly, x: &TorusSeq) -> Result<DecompositionWitness> {
    let (a, b, delta) = bezout(p, q)?;
    let prod = p.mul(q);
    if !is_member(&prod, x) {
        return Err(Error::Invalid("sample is not a zero of the product".into()));
    }
    let dc = LaurentPoly::monomial(delta.clone(), 0);
    let tu = dc.add(&p.mul(&a).neg());
    let tv = dc.add(&q.mul(&b).neg());
    let u = convolve_torus(&tu, x)?;
    let v = convolve_torus(&tv, x)?;
    // align on the common window for non-periodic inputs
    if !x.periodic {
        let lo = u.start.max(v.start);
        let hi = (u.start + u.values.len() as i64 - 1).min(v.start + v.values.len() as i64 - 1);
        if lo > hi {
            return Err(Error::WindowTooShort);
        }
        let clip = |s: &TorusSeq| -> TorusSeq {
            let off = (lo - s.start) as usize;
            let n = (hi - lo + 1) as usize;
            TorusSeq::new(lo, s.values[off..off + n].to_vec(), false).expect("subwindow")
        };
        return Ok(DecompositionWitness {
            u: clip(&u),
            v: clip(&v),
            scale: delta,
        });
    }
    Ok(DecompositionWitness { u, v, scale: delta })
}

/// Conjugacy evidence for Omega_{QxR} = Omega_Q (+) Omega_R when the
/// resultant is a unit: the decomposition map is additive, shift-commuting,
/// and injective on the samples.
pub fn conjugacy_check(q: &LaurentPoly, r: &LaurentPoly, samples: &[TorusSeq]) -> Result<bool> {
    let delta = resultant(q, r).delta;
    if delta.abs() != BigInt::from(1) {
        return Err(Error::NotUnimodular(delta.to_string()));
    }
    let add = |x: &TorusSeq, y: &TorusSeq| -> Option<TorusSeq> {
        if x.periodic != y.periodic || x.start != y.start || x.values.len() != y.values.len() {
            return None;
        }
        let values = x
            .values
            .iter()
            .zip(&y.values)
            .map(|(a, b)| mod1(&(a + b)))
            .collect();
        TorusSeq::new(x.start, values, x.periodic).ok()
    };
    for x in samples {
        let w = decompose(q, r, x)?;
        if !is_member(q, &w.u) || !is_member(r, &w.v) {
            return Ok(false);
        }
        // injectivity: u = v = 0 forces x = 0 on the witness window
        if w.u.values.iter().all(|t| t.is_zero()) && w.v.values.iter().all(|t| t.is_zero()) {
            let zero = x
                .values
                .iter()
                .enumerate()
                .all(|(i, t)| w.u.at(x.start + i as i64).is_none() || t.is_zero());
            if !zero {
                return Ok(false);
            }
        }
        // shift equivariance
        let xs = x.shifted(1);
        let ws = decompose(q, r, &xs)?;
        if ws.u.values != w.u.values || ws.v.values != w.v.values {
            return Ok(false);
        }
    }
    // additivity on pairs
    for x in samples {
        for y in samples {
            let Some(s) = add(x, y) else { continue };
            if !is_member(&q.mul(r), &s) {
                continue;
            }
            let wx = decompose(q, r, x)?;
            let wy = decompose(q, r, y)?;
            let ws = decompose(q, r, &s)?;
            let (Some(ux), Some(uy)) = (align(&wx.u, &ws.u), align(&wy.u, &ws.u)) else {
                continue;
            };
            let sum = add(&ux, &uy).expect("aligned");
            if sum.values != ws.u.values {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Restrict `s` to the window of `to` (None if it does not cover it).
fn align(s: &TorusSeq, to: &TorusSeq) -> Option<TorusSeq> {
    let values: Option<Vec<Rat>> = (0..to.values.len())
        .map(|i| s.at(to.start + i as i64).cloned())
        .collect();
    TorusSeq::new(to.start, values?, to.periodic).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{entropy_exact, orbit_cycle};

    fn parse(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    /// A window of the Omega_{z-base} member x_n = {c base^{-n}} (the
    /// convolution (P x x)_n = x_{n-1} - base x_n vanishes exactly).
    fn geometric_sample(c: Rat, base: u32, lo: i64, len: usize) -> TorusSeq {
        let v = (0..len)
            .map(|i| {
                let n = lo + i as i64;
                let p = Rat::from(BigInt::from(base).pow(n.unsigned_abs() as u32));
                mod1(&if n >= 0 { c.clone() / p } else { c.clone() * p })
            })
            .collect();
        TorusSeq::new(lo, v, false).unwrap()
    }

    use crate::rat::rat;

    #[test]
    fn dim_examples() {
        assert_eq!(dim_omega(&parse("z^2-3z+1")), 2);
        assert_eq!(dim_omega(&parse("z^2-2z")), 1);
        assert_eq!(dim_omega(&parse("1")), 0);
        // additivity for coprime factors
        let p = parse("z-2");
        let q = parse("z-3");
        assert_eq!(dim_omega(&p.mul(&q)), dim_omega(&p) + dim_omega(&q));
    }

    #[test]
    fn dim_check_constructive() {
        let p = parse("z^2-3z+1");
        assert!(dim_check(&p, 2, 8).unwrap());
        assert!(!dim_check(&p, 3, 2).unwrap());
        assert!(!dim_check(&parse("1"), 1, 2).unwrap());
        // the shifted example z(z-2) has dimension 1
        let p = parse("z^2-2z");
        assert!(dim_check(&p, 1, 8).unwrap());
        assert!(!dim_check(&p, 2, 2).unwrap());
    }

    #[test]
    fn common_zeros_examples() {
        let zs = enumerate_common_zeros(&parse("z-2"), &parse("z-3"), (0, 4)).unwrap();
        assert_eq!(zs.len(), 1);
        assert!(zs[0].values.iter().all(|v| v.is_zero()));

        let zs = enumerate_common_zeros(&parse("z-1"), &parse("z+1"), (0, 4)).unwrap();
        assert_eq!(zs.len(), 2);
        let consts: Vec<&Rat> = zs.iter().map(|s| &s.values[0]).collect();
        assert!(zs
            .iter()
            .all(|s| s.values.iter().all(|v| v == &s.values[0])));
        assert!(consts.contains(&&rat(0, 1)));
        assert!(consts.contains(&&rat(1, 2)));

        assert!(matches!(
            enumerate_common_zeros(&parse("z-2"), &parse("z-2"), (0, 3)),
            Err(Error::NotCoprime)
        ));
        // denominators always divide Delta
        let zs = enumerate_common_zeros(&parse("z-1"), &parse("z-3"), (0, 3)).unwrap();
        for s in &zs {
            for v in &s.values {
                assert!((v * rat(2, 1)).is_integer());
            }
        }
    }

    #[test]
    fn factor_check_directions() {
        let p = parse("z-2");
        let big = p.mul(&parse("z-3"));
        let x = geometric_sample(rat(4, 7), 2, 0, 8);
        assert!(is_member(&p, &x));
        // P | Q with D = 1
        assert!(factor_check(&p, &big, &[x.clone()], &BigInt::from(1)));
        // coprime Q = z-3 fails for all small D
        for d in 1..=6 {
            assert!(!factor_check(&p, &parse("z-3"), &[x.clone()], &BigInt::from(d)));
        }
        // zero sample is vacuous
        let zero = TorusSeq::new(0, vec![rat(0, 1); 6], false).unwrap();
        assert!(factor_check(&p, &parse("z-3"), &[zero], &BigInt::from(1)));
    }

    #[test]
    fn decompose_doubling_tripling() {
        let p = parse("z-2");
        let q = parse("z-3");
        // x = u + v with u_n = {4/7 2^{-n}} in Omega_P, v_n = {2/5 3^{-n}}
        // in Omega_Q; Delta = 1 so the witness recovers the parts exactly
        let len = 10usize;
        let us = geometric_sample(rat(4, 7), 2, 0, len);
        let vs = geometric_sample(rat(2, 5), 3, 0, len);
        let values: Vec<Rat> = us
            .values
            .iter()
            .zip(&vs.values)
            .map(|(u, v)| mod1(&(u + v)))
            .collect();
        let x = TorusSeq::new(0, values, false).unwrap();
        assert!(is_member(&p.mul(&q), &x));
        let w = decompose(&p, &q, &x).unwrap();
        assert_eq!(w.scale, BigInt::from(1));
        assert!(is_member(&p, &w.u));
        assert!(is_member(&q, &w.v));
        // u + v = Delta x on the witness window
        for (i, (uv, vv)) in w.u.values.iter().zip(&w.v.values).enumerate() {
            let n = w.u.start + i as i64;
            let want = mod1(&(x.at(n).unwrap() * Rat::from(w.scale.clone())));
            assert_eq!(mod1(&(uv + vv)), want, "index {n}");
        }
    }

    #[test]
    fn decompose_zero_and_guards() {
        let p = parse("z-2");
        let q = parse("z-3");
        let zero = TorusSeq::new(0, vec![rat(0, 1); 8], false).unwrap();
        let w = decompose(&p, &q, &zero).unwrap();
        assert!(w.u.values.iter().all(|v| v.is_zero()));
        assert!(w.v.values.iter().all(|v| v.is_zero()));
        assert!(matches!(
            decompose(&p, &p, &zero),
            Err(Error::NotCoprime)
        ));
        // a non-member is rejected
        let junk = TorusSeq::new(0, vec![rat(1, 3); 8], false).unwrap();
        assert!(decompose(&p, &q, &junk).is_err());
    }

    #[test]
    fn decompose_periodic_orbit() {
        // product of the golden quadratic with z-3... needs |a_0|=1 for
        // orbit generation, so use the quadratic alone times (z-1)? z-1 is
        // not hyperbolic but membership doesn't care; keep it simple with
        // P = z^2-3z+1 and Q = z - 3 (Delta != 0)
        let p = parse("z^2-3z+1");
        let q = parse("z-3");
        assert!(!resultant(&p, &q).delta.is_zero());
        let x = orbit_cycle(&p, &[rat(0, 1), rat(1, 2)]).unwrap();
        // x is in Omega_P, hence in Omega_{PQ}
        let w = decompose(&p, &q, &x).unwrap();
        assert!(w.u.periodic && w.v.periodic);
        assert!(is_member(&p, &w.u));
        assert!(is_member(&q, &w.v));
    }

    #[test]
    fn conjugacy_and_entropy_additivity() {
        let q = parse("z-2");
        let r = parse("z-3");
        let samples = vec![
            TorusSeq::new(0, vec![rat(0, 1); 8], false).unwrap(),
            geometric_sample(rat(4, 7), 2, 0, 8),
            geometric_sample(rat(2, 5), 3, 0, 8),
        ];
        assert!(conjugacy_check(&q, &r, &samples).unwrap());
        assert!(matches!(
            conjugacy_check(&parse("z-1"), &parse("z+1"), &[]),
            Err(Error::NotUnimodular(_))
        ));
        // entropy additivity: log 2 + log 3 = log 6
        let hq = entropy_exact(&parse("2z-1")).unwrap(); // log 2
        let hr = entropy_exact(&parse("3z-1")).unwrap(); // log 3
        let hqr = entropy_exact(&parse("2z-1").mul(&parse("3z-1"))).unwrap();
        assert!((hqr - (hq + hr)).abs() < 1e-9);
    }
}
