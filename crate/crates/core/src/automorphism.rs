//! The strong automorphism group Saut_P: integer matrices of determinant
//! +-1 commuting with the companion matrix of P, acting blockwise on
//! orbits. For k = 2 the group is classified through the discriminant
//! D = a_1^2 - 4 a_2: infinite cyclic for D nonsquare (generator built from
//! the continued fraction of a root, cross-checked against Pell's
//! equation), cyclic of order 2 for D = 4, trivial for other positive
//! squares, and infinite cyclic again in the degenerate case D = 0.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{One, Signed, ToPrimitive, Zero};

use crate::dynamics::{form3, TorusSeq};
use crate::error::{Error, Result};
use crate::linalg::det_bareiss;
use crate::poly::LaurentPoly;
use crate::quad::{cf_expand, cf_matrices, pell_solve, QuadIrr};
use crate::rat::{mod1, Rat};
use crate::roots::find_roots;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn mat_identity(k: usize) -> IntMatrix {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let k = a.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_neg(a: &IntMatrix) -> IntMatrix {
    a.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect()
}

/// Inverse of a 2x2 integer matrix with determinant +-1.
fn mat2_inv(a: &IntMatrix) -> IntMatrix {
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    let inv = vec![
        vec![a[1][1].clone(), -a[0][1].clone()],
        vec![-a[1][0].clone(), a[0][0].clone()],
    ];
    if det == BigInt::one() {
        inv
    } else {
        debug_assert_eq!(det, BigInt::from(-1));
        mat_neg(&inv)
    }
}

fn square_matrix(b: &IntMatrix, k: usize) -> bool {
    b.len() == k && b.iter().all(|r| r.len() == k)
}

/// The companion matrix M_P of P in normal form: subdiagonal identity
/// shifted up, last row (-a_k, ..., -a_1).
pub fn companion(p: &LaurentPoly) -> Result<IntMatrix> {
    let f = form3(p)?;
    let k = f.k();
    let mut m = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k - 1 {
        m[i][i + 1] = BigInt::one();
    }
    for j in 0..k {
        m[k - 1][j] = -f.a[k - 1 - j].clone();
    }
    Ok(m)
}

/// B belongs to Saut_P iff det B = +-1 and B commutes with M_P.
pub fn is_saut(b: &IntMatrix, p: &LaurentPoly) -> Result<bool> {
    let m = companion(p)?;
    let k = m.len();
    if !square_matrix(b, k) {
        return Ok(false);
    }
    let det = det_bareiss(b);
    if det.abs() != BigInt::one() {
        return Ok(false);
    }
    Ok(mat_mul(b, &m) == mat_mul(&m, b))
}

/// Blockwise action of B on an orbit window or periodic orbit:
/// (y_n, ..., y_{n+k-1})^T = B (x_n, ..., x_{n+k-1})^T mod 1 for every
/// admissible n, with overlap consistency enforced.
pub fn apply_automorphism(b: &IntMatrix, p: &LaurentPoly, x: &TorusSeq) -> Result<TorusSeq> {
    if !is_saut(b, p)? {
        return Err(Error::Invalid("matrix is not a strong automorphism of P".into()));
    }
    let k = b.len();
    let len = x.values.len();
    if len < k {
        return Err(Error::WindowTooShort);
    }
    let block_at = |n: usize| -> Vec<Rat> {
        // block (x_n, ..., x_{n+k-1}) with cyclic indexing when periodic
        (0..k)
            .map(|i| {
                let idx = if x.periodic { (n + i) % len } else { n + i };
                x.values[idx].clone()
            })
            .collect()
    };
    let apply_block = |xs: &[Rat]| -> Vec<Rat> {
        (0..k)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, xv) in xs.iter().enumerate() {
                    acc += Rat::from(b[i][j].clone()) * xv;
                }
                mod1(&acc)
            })
            .collect()
    };
    let positions = if x.periodic { len } else { len - k + 1 };
    let mut y: Vec<Option<Rat>> = vec![None; len];
    for n in 0..positions {
        let yb = apply_block(&block_at(n));
        for (i, v) in yb.into_iter().enumerate() {
            let idx = if x.periodic { (n + i) % len } else { n + i };
            match &y[idx] {
                None => y[idx] = Some(v),
                Some(old) => {
                    if *old != v {
                        return Err(Error::InconsistentWindow(x.start + idx as i64));
                    }
                }
            }
        }
    }
    TorusSeq::new(
        x.start,
        y.into_iter().map(|v| v.expect("all indices covered")).collect(),
        x.periodic,
    )
}

/// Eigenvalues of B paired to the roots of P via the shared eigenvectors
/// (theta^k, ..., theta)^T: lambda = sum_j b_{0j} theta^{-j}. Exact
/// quadratic irrationals when k = 2 and D >= 0, floats otherwise.
#[derive(Clone, Debug)]
pub struct EigenData {
    /// (root, eigenvalue) pairs as floats.
    pub pairs: Vec<(Complex64, Complex64)>,
    /// Exact pairs in the quadratic case.
    pub exact: Option<Vec<(QuadIrr, QuadIrr)>>,
    /// Whether the product of the eigenvalues is +-1 (exact when available).
    pub unit_product: bool,
}

pub fn saut_eigendata(b: &IntMatrix, p: &LaurentPoly) -> Result<EigenData> {
    if !is_saut(b, p)? {
        return Err(Error::Invalid("matrix is not a strong automorphism of P".into()));
    }
    let f = form3(p)?;
    let k = f.k();
    let det = det_bareiss(b);
    if k == 2 {
        let a1 = &f.a[0];
        let a2 = &f.a[1];
        let d: BigInt = a1 * a1 - BigInt::from(4) * a2;
        if d.is_zero() {
            return Err(Error::RepeatedRoots);
        }
        if !d.is_negative() {
            let mut exact = Vec::new();
            let mut prod = QuadIrr::from_int(1);
            for s in [BigInt::one(), -BigInt::one()] {
                let theta =
                    QuadIrr::new(-a1.clone(), s, BigInt::from(2) * a2, d.clone())?;
                let lam = QuadIrr::new(b[0][0].clone(), BigInt::zero(), BigInt::one(), BigInt::zero())?
                    .add(
                        &QuadIrr::new(
                            b[0][1].clone(),
                            BigInt::zero(),
                            BigInt::one(),
                            BigInt::zero(),
                        )?
                        .mul(&theta.inv()?)?,
                    )?;
                prod = prod.mul(&lam)?;
                exact.push((theta, lam));
            }
            let unit = prod.as_rat().map(|r| r == Rat::from(det.clone()))
                .unwrap_or(false)
                && det.abs() == BigInt::one();
            let pairs = exact
                .iter()
                .map(|(t, l)| {
                    (
                        Complex64::new(t.to_f64(), 0.0),
                        Complex64::new(l.to_f64(), 0.0),
                    )
                })
                .collect();
            return Ok(EigenData {
                pairs,
                exact: Some(exact),
                unit_product: unit,
            });
        }
    }
    // float path: pair each root of P with lambda = sum_j b0j theta^{-j}
    let rs = find_roots(p, 1e-12)?;
    if rs.roots.iter().any(|r| r.multiplicity > 1) {
        return Err(Error::RepeatedRoots);
    }
    let mut pairs = Vec::new();
    let mut prod = Complex64::new(1.0, 0.0);
    for r in &rs.roots {
        let th = r.value;
        let mut lam = Complex64::new(0.0, 0.0);
        for (j, row0) in b[0].iter().enumerate() {
            lam += Complex64::new(row0.to_f64().unwrap_or(f64::NAN), 0.0) * th.powi(-(j as i32));
        }
        prod *= lam;
        pairs.push((th, lam));
    }
    Ok(EigenData {
        pairs,
        exact: None,
        unit_product: (prod.norm() - 1.0).abs() < 1e-6 && det.abs() == BigInt::one(),
    })
}

/// Classification of Saut_P / {+-I} for quadratic P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SautClass {
    InfiniteCyclic { generator: IntMatrix },
    CyclicOrder2 { generator: IntMatrix },
    Trivial,
}

/// Deterministic representative among {+-T^{+-1}}: upper-right entry
/// positive, then trace >= 0, then lexicographically smallest.
fn canonical_generator(t: &IntMatrix) -> IntMatrix {
    let inv = mat2_inv(t);
    let mut cands = vec![t.clone(), mat_neg(t), inv.clone(), mat_neg(&inv)];
    let flat = |m: &IntMatrix| -> Vec<BigInt> { m.iter().flatten().cloned().collect() };
    cands.sort_by_key(&flat);
    let best = cands
        .iter()
        .filter(|m| m[0][1].is_positive() && !(&m[0][0] + &m[1][1]).is_negative())
        .chain(cands.iter().filter(|m| m[0][1].is_positive()))
        .chain(cands.iter())
        .next()
        .expect("nonempty candidate set");
    best.clone()
}

/// Discriminant D = a_1^2 - 4 a_2 of a quadratic P in normal form.
pub fn saut_discriminant(p: &LaurentPoly) -> Result<BigInt> {
    let f = form3(p)?;
    if f.k() != 2 {
        return Err(Error::UnsupportedDegree(f.k()));
    }
    Ok(&f.a[0] * &f.a[0] - BigInt::from(4) * &f.a[1])
}

pub fn saut_group(p: &LaurentPoly) -> Result<SautClass> {
    let f = form3(p)?;
    if f.k() != 2 {
        return Err(Error::UnsupportedDegree(f.k()));
    }
    let a1 = f.a[0].clone();
    let a2 = f.a[1].clone();
    let d: BigInt = &a1 * &a1 - BigInt::from(4) * &a2;
    if d.is_negative() {
        return Err(Error::NegativeDiscriminant);
    }
    if d.is_zero() {
        // a_1 = 2c; generator (1+c, 1; -c^2, 1-c)
        let c: BigInt = &a1 / 2;
        let gen = vec![
            vec![BigInt::one() + &c, BigInt::one()],
            vec![-(&c * &c), BigInt::one() - &c],
        ];
        let gen = canonical_generator(&gen);
        debug_assert!(is_saut(&gen, p)?);
        return Ok(SautClass::InfiniteCyclic { generator: gen });
    }
    if let Some(s) = crate::rat::perfect_sqrt(&d) {
        if s == BigInt::from(2) {
            // D = 4: order-2 generator (a, 1; -a^2+1, -a), a = a_1/2
            let a: BigInt = &a1 / 2;
            let gen = vec![
                vec![a.clone(), BigInt::one()],
                vec![BigInt::one() - &a * &a, -a.clone()],
            ];
            let gen = canonical_generator(&gen);
            debug_assert!(is_saut(&gen, p)?);
            debug_assert_eq!(mat_mul(&gen, &gen), mat_identity(2));
            return Ok(SautClass::CyclicOrder2 { generator: gen });
        }
        return Ok(SautClass::Trivial);
    }
    // D > 0 nonsquare: generator from the continued fraction of a root,
    // theta = (-a_1 + sqrt(D)) / (2 a_2) oriented to the positive branch
    let s = if a2.is_positive() {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let theta = QuadIrr::new(-a1.clone(), s, BigInt::from(2) * &a2, d.clone())?;
    let cf = cf_expand(&theta);
    let m = cf_matrices(&cf)?;
    let a_mat = vec![
        vec![m.c.clone(), m.c_prime.clone()],
        vec![m.g.clone(), m.g_prime.clone()],
    ];
    let e_mat = vec![
        vec![m.e.clone(), m.e_prime.clone()],
        vec![m.f.clone(), m.f_prime.clone()],
    ];
    let t = mat_mul(&mat_mul(&a_mat, &e_mat), &mat2_inv(&a_mat));
    let gen = canonical_generator(&t);
    if !is_saut(&gen, p)? {
        return Err(Error::Invalid(
            "continued-fraction generator failed the Saut predicate".into(),
        ));
    }
    // Pell cross-check: w = |2p - a_1 p'|, v = |p'| must be the fundamental
    // solution of w^2 - D v^2 = +-4
    let w = (BigInt::from(2) * &gen[0][0] - &a1 * &gen[0][1]).abs();
    let v = gen[0][1].abs();
    let pell = pell_solve(&d)?;
    if pell.w != w || pell.v != v {
        return Err(Error::Invalid(format!(
            "generator (w, v) = ({w}, {v}) is not the fundamental Pell solution ({}, {})",
            pell.w, pell.v
        )));
    }
    Ok(SautClass::InfiniteCyclic { generator: gen })
}

/// All Saut elements of the Eq.-(10) shape (p, p'; -a_2 p', p - a_1 p')
/// with 1 <= p' <= bound, found by solving w^2 = D p'^2 +- 4 exactly.
pub fn search_saut_elements(p: &LaurentPoly, bound: u64) -> Result<Vec<IntMatrix>> {
    let f = form3(p)?;
    if f.k() != 2 {
        return Err(Error::UnsupportedDegree(f.k()));
    }
    let a1 = f.a[0].clone();
    let a2 = f.a[1].clone();
    let d: BigInt = &a1 * &a1 - BigInt::from(4) * &a2;
    let four = BigInt::from(4);
    let mut out = Vec::new();
    for pp in 1..=bound {
        let pp = BigInt::from(pp);
        let dv2 = &d * &pp * &pp;
        for target in [&dv2 - &four, &dv2 + &four] {
            if target.is_negative() {
                continue;
            }
            let Some(w) = crate::rat::perfect_sqrt(&target) else {
                continue;
            };
            let mut ws = vec![w.clone()];
            if !w.is_zero() {
                ws.push(-w);
            }
            for w in ws {
                let two_p = &w + &a1 * &pp;
                if (&two_p % 2i32).is_zero() {
                    let pv: BigInt = two_p / 2;
                    let b = vec![
                        vec![pv.clone(), pp.clone()],
                        vec![-(&a2 * &pp), &pv - &a1 * &pp],
                    ];
                    if !out.contains(&b) {
                        out.push(b);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::orbit;
    use crate::rat::rat;

    fn parse(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    fn mat(rows: &[[i64; 2]; 2]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn companion_examples() {
        assert_eq!(companion(&parse("z^2-3z+1")).unwrap(), mat(&[[0, 1], [-1, 3]]));
        assert_eq!(companion(&parse("z^2-2z+1")).unwrap(), mat(&[[0, 1], [-1, 2]]));
        assert_eq!(companion(&parse("-3z^2+1")).unwrap(), mat(&[[0, 1], [3, 0]]));
        assert!(matches!(
            companion(&parse("z-2")),
            Err(Error::UnsupportedConstantTerm(_))
        ));
    }

    #[test]
    fn is_saut_examples() {
        let p = parse("z^2-3z+1");
        assert!(is_saut(&mat(&[[-1, 1], [-1, 2]]), &p).unwrap());
        assert!(is_saut(&mat_identity(2), &p).unwrap());
        assert!(!is_saut(&mat(&[[1, 1], [0, 1]]), &p).unwrap());
        // determinant 2 is rejected even if it commutes
        assert!(!is_saut(&mat(&[[2, 0], [0, 2]]), &p).unwrap());
    }

    #[test]
    fn apply_blocks_match_worked_example() {
        let p = parse("z^2-3z+1");
        let b = mat(&[[-1, 1], [-1, 2]]);
        let x = orbit(&p, &[rat(1, 7), rat(3, 7)], 4, 0, 0).unwrap();
        let y = apply_automorphism(&b, &p, &x).unwrap();
        let (x0, x1) = (rat(1, 7), rat(3, 7));
        assert_eq!(y.values[0], mod1(&(-&x0 + &x1)));
        assert_eq!(y.values[1], mod1(&(-&x0 + rat(2, 1) * &x1)));
        assert_eq!(y.values[2], mod1(&(rat(-2, 1) * &x0 + rat(5, 1) * &x1)));
        // identity acts trivially
        let id = apply_automorphism(&mat_identity(2), &p, &x).unwrap();
        assert_eq!(id.values, x.values);
    }

    #[test]
    fn apply_rejects_non_orbit() {
        let p = parse("z^2-3z+1");
        let b = mat(&[[-1, 1], [-1, 2]]);
        let x = TorusSeq::new(0, vec![rat(0, 1), rat(1, 2), rat(1, 3)], false).unwrap();
        assert!(matches!(
            apply_automorphism(&b, &p, &x),
            Err(Error::InconsistentWindow(_))
        ));
    }

    #[test]
    fn apply_group_law_and_periodic() {
        let p = parse("z^2-3z+1");
        let b = mat(&[[-1, 1], [-1, 2]]);
        let b2 = mat_mul(&b, &b);
        let x = crate::dynamics::orbit_cycle(&p, &[rat(0, 1), rat(1, 2)]).unwrap();
        let once = apply_automorphism(&b, &p, &x).unwrap();
        let twice = apply_automorphism(&b, &p, &once).unwrap();
        let direct = apply_automorphism(&b2, &p, &x).unwrap();
        assert_eq!(twice, direct);
        assert!(twice.periodic);
    }

    #[test]
    fn eigendata_worked_examples() {
        // (2, -1; -3, 2) on -3z^2+1: lambda = 2 -+ sqrt3
        let p = parse("-3z^2+1");
        let b = mat(&[[2, -1], [-3, 2]]);
        let e = saut_eigendata(&b, &p).unwrap();
        assert!(e.unit_product);
        let exact = e.exact.unwrap();
        let mut vals: Vec<f64> = exact.iter().map(|(_, l)| l.to_f64()).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - (2.0 - 3f64.sqrt())).abs() < 1e-12);
        assert!((vals[1] - (2.0 + 3f64.sqrt())).abs() < 1e-12);

        // Example-2 generator: lambda = (1 -+ sqrt5)/2, product -1 = det
        let p = parse("z^2-3z+1");
        let b = mat(&[[-1, 1], [-1, 2]]);
        let e = saut_eigendata(&b, &p).unwrap();
        assert!(e.unit_product);
        let exact = e.exact.unwrap();
        let s5 = 5f64.sqrt();
        let mut vals: Vec<f64> = exact.iter().map(|(_, l)| l.to_f64()).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - (1.0 - s5) / 2.0).abs() < 1e-12);
        assert!((vals[1] - (1.0 + s5) / 2.0).abs() < 1e-12);

        // identity: all eigenvalues 1
        let e = saut_eigendata(&mat_identity(2), &p).unwrap();
        for (_, l) in e.exact.unwrap() {
            assert_eq!(l.as_rat(), Some(rat(1, 1)));
        }

        // repeated roots are a typed error
        assert!(matches!(
            saut_eigendata(&mat_identity(2), &parse("z^2-2z+1")),
            Err(Error::RepeatedRoots)
        ));
    }

    #[test]
    fn saut_group_classification() {
        // D = 5: infinite cyclic with the Example-2 generator
        match saut_group(&parse("z^2-3z+1")).unwrap() {
            SautClass::InfiniteCyclic { generator } => {
                assert_eq!(generator, mat(&[[-1, 1], [-1, 2]]));
            }
            c => panic!("unexpected class {c:?}"),
        }
        // D = 12: infinite cyclic, canonical pick within {+-(2,-1;-3,2)^{+-1}}
        match saut_group(&parse("-3z^2+1")).unwrap() {
            SautClass::InfiniteCyclic { generator } => {
                assert_eq!(generator, mat(&[[2, 1], [3, 2]]));
                assert!(is_saut(&generator, &parse("-3z^2+1")).unwrap());
            }
            c => panic!("unexpected class {c:?}"),
        }
        // D = 0: infinite cyclic with generator (0, 1; -1, 2)
        match saut_group(&parse("z^2-2z+1")).unwrap() {
            SautClass::InfiniteCyclic { generator } => {
                assert_eq!(generator, mat(&[[0, 1], [-1, 2]]));
            }
            c => panic!("unexpected class {c:?}"),
        }
        // D = 4: cyclic of order 2
        match saut_group(&parse("3z^2+4z+1")).unwrap() {
            SautClass::CyclicOrder2 { generator } => {
                assert_eq!(generator, mat(&[[2, 1], [-3, -2]]));
                assert_eq!(mat_mul(&generator, &generator), mat_identity(2));
            }
            c => panic!("unexpected class {c:?}"),
        }
        // D = 9 (square, not 4): trivial
        assert_eq!(saut_group(&parse("4z^2+5z+1")).unwrap(), SautClass::Trivial);
        // degree and discriminant guards
        assert!(matches!(
            saut_group(&parse("z^3-3z+1")),
            Err(Error::UnsupportedDegree(3))
        ));
        assert!(matches!(
            saut_group(&parse("z^2+z+1")),
            Err(Error::NegativeDiscriminant)
        ));
    }

    #[test]
    fn generator_minimality_by_search() {
        // trivial class: no Eq.-(10) elements up to p' = 50
        assert!(search_saut_elements(&parse("4z^2+5z+1"), 50).unwrap().is_empty());
        // D = 5: the p' = 1 solutions contain the canonical generator
        let els = search_saut_elements(&parse("z^2-3z+1"), 1).unwrap();
        assert!(els.contains(&mat(&[[-1, 1], [-1, 2]])));
        for b in &els {
            assert!(is_saut(b, &parse("z^2-3z+1")).unwrap());
        }
        // D = 12: nothing below the generator's p' = 1 (vacuous) and the
        // generator itself shows up at the Pell minimum
        let els = search_saut_elements(&parse("-3z^2+1"), 1).unwrap();
        assert!(els.contains(&mat(&[[2, 1], [3, 2]])));
    }
}
