//! Certified complex root finding and hyperbolicity testing.
//!
//! Multiplicities are determined exactly by squarefree decomposition over the
//! rationals (Yun's algorithm), so clustering heuristics are only needed for
//! seeding. Each squarefree factor is solved by companion-matrix eigenvalues
//! refined with Newton iteration; the a posteriori bound
//! `|z - root| <= deg * |S(z)/S'(z)|` certifies an error disk per root.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{rvec_derivative, rvec_div_exact, rvec_from_int, rvec_gcd, rvec_trim, LaurentPoly};
use crate::rat::{to_f64, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusSide {
    Inside,
    Outside,
}

#[derive(Clone, Debug)]
pub struct CertifiedRoot {
    pub value: Complex64,
    pub error_radius: f64,
    pub multiplicity: usize,
    pub modulus_side: ModulusSide,
}

impl CertifiedRoot {
    /// Distance of |value| from the unit circle, minus the error radius.
    pub fn circle_clearance(&self) -> f64 {
        (self.value.norm() - 1.0).abs() - self.error_radius
    }
}

/// All roots of `z^{-h} P`, with `h` the lowest exponent of `P`.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<CertifiedRoot>,
    pub leading_coeff: BigInt,
    pub low_exponent: i64,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Hyperbolicity {
    pub hyperbolic: bool,
    /// min over roots of | |root| - 1 |; infinite when there are no roots.
    pub margin: f64,
}

/// Squarefree decomposition f = prod_i out[i].1 ^ out[i].0 over Q (Yun).
fn squarefree_parts(f: &[Rat]) -> Vec<(usize, Vec<Rat>)> {
    let mut f = f.to_vec();
    rvec_trim(&mut f);
    assert!(f.len() >= 2);
    let df = rvec_derivative(&f);
    let g = rvec_gcd(&f, &df);
    if g.len() <= 1 {
        return vec![(1, f)];
    }
    let mut out = Vec::new();
    let mut b = rvec_div_exact(&f, &g);
    let c = rvec_div_exact(&df, &g);
    let db = rvec_derivative(&b);
    let mut d: Vec<Rat> = sub(&c, &db);
    let mut i = 1usize;
    while b.len() > 1 {
        let a = rvec_gcd(&b, &d);
        if a.len() > 1 {
            out.push((i, a.clone()));
        }
        b = rvec_div_exact(&b, &a);
        let q = rvec_div_exact(&d, &a);
        let db = rvec_derivative(&b);
        d = sub(&q, &db);
        i += 1;
    }
    out
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        v[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        v[i] -= c;
    }
    rvec_trim(&mut v);
    v
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Eigenvalues of the companion matrix of a monic degree-d polynomial given
/// by its d low-order coefficients, as Newton seeds.
fn companion_seeds(monic: &[f64]) -> Vec<Complex64> {
    let d = monic.len();
    if d == 0 {
        return vec![];
    }
    if d == 1 {
        return vec![Complex64::new(-monic[0], 0.0)];
    }
    let mut m = nalgebra::DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -monic[i];
    }
    m.complex_eigenvalues()
        .iter()
        .map(|e| Complex64::new(e.re, e.im))
        .collect()
}

/// Roots of one squarefree rational polynomial, certified to `precision`.
fn roots_of_squarefree(s: &[Rat], precision: f64) -> Result<Vec<(Complex64, f64)>> {
    let d = s.len() - 1;
    let lead = s.last().unwrap();
    let monic_f: Vec<f64> = s[..d].iter().map(|c| to_f64(&(c / lead))).collect();
    let cf: Vec<Complex64> = s.iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect();
    let dcf: Vec<Complex64> = (1..=d)
        .map(|i| Complex64::new(i as f64, 0.0) * cf[i])
        .collect();
    let mut out = Vec::with_capacity(d);
    for seed in companion_seeds(&monic_f) {
        let mut z = seed;
        let mut radius = f64::INFINITY;
        for _ in 0..80 {
            let fp = horner(&dcf, z);
            if fp.norm() == 0.0 {
                break;
            }
            let step = horner(&cf, z) / fp;
            radius = d as f64 * step.norm();
            if radius <= precision * 0.25 || step.norm() < 1e-17 * (1.0 + z.norm()) {
                z -= step;
                let fp2 = horner(&dcf, z);
                if fp2.norm() > 0.0 {
                    radius = d as f64 * (horner(&cf, z) / fp2).norm();
                }
                break;
            }
            z -= step;
        }
        if !(radius <= precision) {
            return Err(Error::RootIsolationFailure);
        }
        // real polynomials have conjugate-symmetric roots; snap tiny
        // imaginary parts born from eigenvalue noise
        if z.im.abs() <= radius.max(1e-14 * (1.0 + z.norm())) && z.im != 0.0 {
            let zr = Complex64::new(z.re, 0.0);
            let fp = horner(&dcf, zr);
            if fp.norm() > 0.0 {
                let r2 = d as f64 * (horner(&cf, zr) / fp).norm();
                if r2 <= precision {
                    out.push((zr, r2.max(1e-300)));
                    continue;
                }
            }
        }
        out.push((z, radius.max(1e-300)));
    }
    Ok(out)
}

/// All complex roots of `z^{-h} P` with certified error disks.
pub fn find_roots(p: &LaurentPoly, precision: f64) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::Invalid("find_roots requires a nontrivial polynomial".into()));
    }
    if !(precision > 0.0) {
        return Err(Error::Invalid("precision must be positive".into()));
    }
    let (dense, h) = p.to_dense();
    let leading = dense.last().cloned().unwrap_or_else(BigInt::one);
    if dense.len() == 1 {
        return Ok(RootSet {
            roots: vec![],
            leading_coeff: leading,
            low_exponent: h,
        });
    }
    let f = rvec_from_int(&dense);
    let mut roots = Vec::new();
    for (mult, s) in squarefree_parts(&f) {
        for (value, error_radius) in roots_of_squarefree(&s, precision)? {
            let modulus_side = if value.norm() < 1.0 {
                ModulusSide::Inside
            } else {
                ModulusSide::Outside
            };
            roots.push(CertifiedRoot {
                value,
                error_radius,
                multiplicity: mult,
                modulus_side,
            });
        }
    }
    roots.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap()
    });
    Ok(RootSet {
        roots,
        leading_coeff: leading,
        low_exponent: h,
    })
}

/// Decide whether no root lies within `tol` of the unit circle.
///
/// Returns `Err(Indeterminate)` when some certified disk straddles the tol
/// band, so the caller can distinguish "provably on the circle" from "not yet
/// resolved at this precision".
pub fn is_hyperbolic(p: &LaurentPoly, tol: f64) -> Result<Hyperbolicity> {
    let precision = (tol * 1e-4).min(1e-10).max(1e-15);
    let rs = find_roots(p, precision)?;
    let mut margin = f64::INFINITY;
    let mut hyperbolic = true;
    for r in &rs.roots {
        let dist = (r.value.norm() - 1.0).abs();
        margin = margin.min(dist);
        if dist - r.error_radius > tol {
            continue; // certifiably clear of the band
        }
        if dist + r.error_radius <= tol {
            hyperbolic = false; // certifiably within the band
        } else {
            return Err(Error::Indeterminate);
        }
    }
    Ok(Hyperbolicity { hyperbolic, margin })
}

/// Exact check for rational roots on the unit circle (z = 1 or z = -1).
pub fn vanishes_at_unit_rational(p: &LaurentPoly) -> bool {
    let one = Rat::one();
    p.eval_rat(&one).is_zero() || p.eval_rat(&-one).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn parse(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    #[test]
    fn quadratic_golden_roots() {
        // z^2 - 3z + 1 has roots (3 +- sqrt 5)/2
        let rs = find_roots(&parse("z^2-3z+1"), 1e-12).unwrap();
        assert_eq!(rs.degree(), 2);
        let sqrt5 = 5f64.sqrt();
        let expect = [(3.0 - sqrt5) / 2.0, (3.0 + sqrt5) / 2.0];
        for (r, e) in rs.roots.iter().zip(expect) {
            assert!((r.value - Complex64::new(e, 0.0)).norm() < 1e-12);
            assert_eq!(r.multiplicity, 1);
        }
        assert_eq!(rs.roots[0].modulus_side, ModulusSide::Inside);
        assert_eq!(rs.roots[1].modulus_side, ModulusSide::Outside);
    }

    #[test]
    fn symmetric_pair() {
        // -3z^2 + 1 has roots +-1/sqrt(3)
        let rs = find_roots(&parse("-3z^2+1"), 1e-12).unwrap();
        let t = 1.0 / 3f64.sqrt();
        assert!((rs.roots[0].value - Complex64::new(-t, 0.0)).norm() < 1e-12);
        assert!((rs.roots[1].value - Complex64::new(t, 0.0)).norm() < 1e-12);
        assert_eq!(rs.leading_coeff, BigInt::from(-3));
    }

    #[test]
    fn monomial_has_no_roots_after_shift() {
        let rs = find_roots(&parse("z^2"), 1e-12).unwrap();
        assert!(rs.roots.is_empty());
        assert_eq!(rs.low_exponent, 2);
    }

    #[test]
    fn repeated_roots_found_exactly() {
        // (z-2)^3 (z+1)
        let p = parse("z-2");
        let cube = p.mul(&p).mul(&p).mul(&parse("z+1"));
        let rs = find_roots(&cube, 1e-10).unwrap();
        assert_eq!(rs.degree(), 4);
        let two = rs
            .roots
            .iter()
            .find(|r| (r.value - Complex64::new(2.0, 0.0)).norm() < 1e-9)
            .unwrap();
        assert_eq!(two.multiplicity, 3);
        let minus1 = rs
            .roots
            .iter()
            .find(|r| (r.value - Complex64::new(-1.0, 0.0)).norm() < 1e-9)
            .unwrap();
        assert_eq!(minus1.multiplicity, 1);
    }

    #[test]
    fn complex_conjugate_roots() {
        // z^2 + 1 has roots +-i
        let rs = find_roots(&parse("z^2+1"), 1e-12).unwrap();
        for r in &rs.roots {
            assert!((r.value.norm() - 1.0).abs() < 1e-12);
            assert!(r.value.re.abs() < 1e-10);
        }
    }

    #[test]
    fn hyperbolicity_verdicts() {
        let h = is_hyperbolic(&parse("z^2-3z+1"), 1e-9).unwrap();
        assert!(h.hyperbolic);
        assert!((h.margin - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-9);

        let h = is_hyperbolic(&parse("z-1"), 1e-9).unwrap();
        assert!(!h.hyperbolic);

        let h = is_hyperbolic(&parse("-3z^2+1"), 1e-9).unwrap();
        assert!(h.hyperbolic);

        // z^2 + 1 has both roots on the circle
        let h = is_hyperbolic(&parse("z^2+1"), 1e-9).unwrap();
        assert!(!h.hyperbolic);

        // monomials are trivially hyperbolic
        let h = is_hyperbolic(&parse("2z^3"), 1e-9).unwrap();
        assert!(h.hyperbolic);
        assert_eq!(h.margin, f64::INFINITY);
    }

    #[test]
    fn squarefree_structure() {
        // f = (z-1)^2 (z+3)
        let f = vec![rat(3, 1), rat(-5, 1), rat(1, 1), rat(1, 1)];
        let parts = squarefree_parts(&f);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 1);
        assert_eq!(parts[0].1.len(), 2); // z + 3 up to scale
        assert_eq!(parts[1].0, 2);
        assert_eq!(parts[1].1.len(), 2); // z - 1 up to scale
    }
}
