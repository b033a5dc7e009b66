//! The torus dynamical system attached to P: orbit generation, symbolic
//! coding onto the finite alphabet K_P, admissibility of code words, and
//! topological entropy (exact and estimated).
//!
//! Exact rational arithmetic is the default. Periodic code words decode by
//! solving the wraparound linear system exactly; finite words over (sub-)
//! quadratic P decode through exact quadratic irrationals, and everything
//! else falls back to float windows with tail bounds and a three-valued
//! admissibility verdict.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::solve_rational;
use crate::poly::LaurentPoly;
use crate::quad::QuadIrr;
use crate::rat::{mod1, rat_int, Rat};
use crate::roots::{find_roots, is_hyperbolic};
use crate::stream::{FiniteSupport, Stream, Window};

/// A window (or one period) of a torus-valued sequence; every coordinate
/// lies in [0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSeq {
    pub start: i64,
    pub values: Vec<Rat>,
    /// When set, `values` is one period of a bi-infinite periodic sequence:
    /// x_n = values[(n - start) mod len].
    pub periodic: bool,
}

impl TorusSeq {
    pub fn new(start: i64, values: Vec<Rat>, periodic: bool) -> Result<Self> {
        for v in &values {
            if v.is_negative() || *v >= rat_int(1) {
                return Err(Error::Invalid(format!("torus coordinate {v} outside [0,1)")));
            }
        }
        Ok(TorusSeq {
            start,
            values,
            periodic,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at absolute index n (None outside a non-periodic window).
    pub fn at(&self, n: i64) -> Option<&Rat> {
        let m = self.values.len() as i64;
        if m == 0 {
            return None;
        }
        if self.periodic {
            Some(&self.values[(n - self.start).rem_euclid(m) as usize])
        } else if n >= self.start && n < self.start + m {
            Some(&self.values[(n - self.start) as usize])
        } else {
            None
        }
    }

    pub fn shifted(&self, d: i64) -> Self {
        TorusSeq {
            start: self.start - d,
            values: self.values.clone(),
            periodic: self.periodic,
        }
    }
}

/// A window (or one period) of a real-valued sequence, without the [0,1)
/// constraint; produced by decode.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSeq {
    pub start: i64,
    pub values: Vec<Rat>,
    pub periodic: bool,
}

impl RealSeq {
    pub fn at(&self, n: i64) -> Option<&Rat> {
        let m = self.values.len() as i64;
        if m == 0 {
            return None;
        }
        if self.periodic {
            Some(&self.values[(n - self.start).rem_euclid(m) as usize])
        } else if n >= self.start && n < self.start + m {
            Some(&self.values[(n - self.start) as usize])
        } else {
            None
        }
    }

    /// Reinterpret as a torus sequence if every value lies in [0, 1).
    pub fn into_torus(self) -> Result<TorusSeq> {
        TorusSeq::new(self.start, self.values, self.periodic)
    }
}

/// The coding alphabet K_P = {k_*, ..., k^*}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub k_star: i64,
    pub k_star_hi: i64,
}

impl Alphabet {
    pub fn contains(&self, letter: i64) -> bool {
        letter >= self.k_star && letter <= self.k_star_hi
    }

    pub fn size(&self) -> usize {
        (self.k_star_hi - self.k_star + 1) as usize
    }
}

/// A symbolic word: one period of a bi-infinite periodic word, or a finite
/// word implicitly extended by zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeWord {
    pub letters: Vec<i64>,
    pub periodic: bool,
}

impl CodeWord {
    pub fn periodic(letters: Vec<i64>) -> Self {
        CodeWord {
            letters,
            periodic: true,
        }
    }

    pub fn finite(letters: Vec<i64>) -> Self {
        CodeWord {
            letters,
            periodic: false,
        }
    }

    /// Equality of periodic words up to cyclic rotation.
    pub fn cyclic_eq(&self, other: &CodeWord) -> bool {
        if !self.periodic || !other.periodic || self.letters.len() != other.letters.len() {
            return self == other;
        }
        let m = self.letters.len();
        (0..m).any(|r| (0..m).all(|i| self.letters[(i + r) % m] == other.letters[i]))
    }
}

/// P in the normal form with constant coefficient 1 after a z^{-h} shift and
/// optional global sign flip: z^{-h}(+-P) = 1 + a_1 z + ... + a_k z^k.
#[derive(Clone, Debug)]
pub struct Form3 {
    /// a_1, ..., a_k.
    pub a: Vec<BigInt>,
    pub shift: i64,
    pub flipped: bool,
}

impl Form3 {
    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn leading(&self) -> &BigInt {
        self.a.last().expect("k >= 1")
    }
}

pub fn form3(p: &LaurentPoly) -> Result<Form3> {
    let (mut dense, h) = p.to_dense();
    if dense.len() < 2 {
        return Err(Error::UnsupportedConstantTerm(
            "normal form requires degree >= 1 after shift".into(),
        ));
    }
    let flipped = match dense[0].to_i64() {
        Some(1) => false,
        Some(-1) => true,
        _ => {
            return Err(Error::UnsupportedConstantTerm(format!(
                "constant coefficient {} (must be +-1)",
                dense[0]
            )))
        }
    };
    if flipped {
        for c in &mut dense {
            *c = -c.clone();
        }
    }
    Ok(Form3 {
        a: dense[1..].to_vec(),
        shift: h,
        flipped,
    })
}

/// K_P from the positive and negative coefficient sums.
pub fn alphabet(p: &LaurentPoly) -> Alphabet {
    let mut neg = BigInt::zero();
    let mut pos = BigInt::zero();
    for c in p.coeffs().values() {
        if c.is_negative() {
            neg += c;
        } else {
            pos += c;
        }
    }
    let k_star = (neg + BigInt::one()).min(BigInt::zero());
    let k_hi = (pos - BigInt::one()).max(BigInt::zero());
    Alphabet {
        k_star: k_star.to_i64().expect("alphabet fits i64"),
        k_star_hi: k_hi.to_i64().expect("alphabet fits i64"),
    }
}

/// One forward step of the order-k recursion x_n = -a_1 x_{n-1} - ... -
/// a_k x_{n-k} mod 1, applied to the last k values of `vals`.
fn forward_step(a: &[BigInt], vals: &[Rat]) -> Rat {
    let n = vals.len();
    let mut acc = Rat::zero();
    for (i, ai) in a.iter().enumerate() {
        acc -= Rat::from(ai.clone()) * &vals[n - 1 - i];
    }
    mod1(&acc)
}

/// Extend an orbit of P through `steps_fwd` forward and `steps_back`
/// backward steps from a length-k seed; backward steps pick the residue
/// `branch` among the |a_k| preimages.
pub fn orbit(
    p: &LaurentPoly,
    seed: &[Rat],
    steps_fwd: usize,
    steps_back: usize,
    branch: usize,
) -> Result<TorusSeq> {
    let f = form3(p)?;
    let k = f.k();
    if seed.len() != k {
        return Err(Error::Invalid(format!("seed must have length k = {k}")));
    }
    let ak = f.leading().clone();
    let ak_abs = ak
        .abs()
        .to_usize()
        .ok_or_else(|| Error::Invalid("leading coefficient too large".into()))?;
    if steps_back > 0 && branch >= ak_abs {
        return Err(Error::BranchOutOfRange {
            branch: branch as u64,
            count: ak_abs as u64,
        });
    }
    let mut vals: Vec<Rat> = seed.iter().map(mod1).collect();
    for _ in 0..steps_fwd {
        let next = forward_step(&f.a, &vals);
        vals.push(next);
    }
    // backward: {a_k x_n} = c with c determined by the k values above
    let akr = Rat::from(ak);
    let branch_r = rat_int(branch as i64);
    for _ in 0..steps_back {
        let mut acc = vals[k - 1].clone(); // x_{n+k}
        for (i, ai) in f.a.iter().take(k - 1).enumerate() {
            acc += Rat::from(ai.clone()) * &vals[k - 2 - i];
        }
        let c = mod1(&-acc);
        let x = mod1(&((c + &branch_r) / &akr));
        vals.insert(0, x);
    }
    TorusSeq::new(-(steps_back as i64), vals, false)
}

/// Follow the forward orbit of a rational seed until the k-state repeats and
/// return the cycle as a periodic sequence (aligned to absolute indices).
pub fn orbit_cycle(p: &LaurentPoly, seed: &[Rat]) -> Result<TorusSeq> {
    let f = form3(p)?;
    let k = f.k();
    if seed.len() != k {
        return Err(Error::Invalid(format!("seed must have length k = {k}")));
    }
    let mut vals: Vec<Rat> = seed.iter().map(mod1).collect();
    let mut seen: HashMap<Vec<Rat>, usize> = HashMap::new();
    loop {
        let state: Vec<Rat> = vals[vals.len() - k..].to_vec();
        let pos = vals.len() - k;
        if let Some(&first) = seen.get(&state) {
            let m = pos - first;
            let cycle = vals[first..first + m].to_vec();
            return TorusSeq::new(first as i64, cycle, true);
        }
        seen.insert(state, pos);
        let next = forward_step(&f.a, &vals);
        vals.push(next);
        if vals.len() > 40_000_000 {
            return Err(Error::Invalid("orbit cycle search exceeded state budget".into()));
        }
    }
}

/// A code word plus the absolute index of its first letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedWord {
    pub word: CodeWord,
    pub start: i64,
}

/// The coding delta_i = sum_j p_j {x_{i-j}}; exact, with letters in K_P for
/// genuine orbits. Periodic words are aligned to residue 0 mod the period.
pub fn encode(p: &LaurentPoly, x: &TorusSeq) -> Result<EncodedWord> {
    let lo = p.low();
    let hi = p.high();
    let letter_at = |i: i64| -> Result<i64> {
        let mut acc = Rat::zero();
        for (&j, c) in p.coeffs() {
            let xv = x
                .at(i - j)
                .ok_or_else(|| Error::Invalid("window too short for coding".into()))?;
            acc += Rat::from(c.clone()) * xv;
        }
        if !acc.is_integer() {
            return Err(Error::NotAnOrbit(format!("delta_{i} = {acc} is not an integer")));
        }
        acc.to_integer()
            .to_i64()
            .ok_or_else(|| Error::Invalid("letter exceeds i64".into()))
    };
    if x.periodic {
        let m = x.values.len() as i64;
        let letters: Vec<i64> = (0..m).map(letter_at).collect::<Result<_>>()?;
        Ok(EncodedWord {
            word: CodeWord::periodic(letters),
            start: 0,
        })
    } else {
        let s = x.start + hi;
        let e = x.start + x.values.len() as i64 - 1 + lo;
        if s > e {
            return Err(Error::WindowTooShort);
        }
        let letters: Vec<i64> = (s..=e).map(letter_at).collect::<Result<_>>()?;
        Ok(EncodedWord {
            word: CodeWord::finite(letters),
            start: s,
        })
    }
}

/// Decode result: exact rational sequence (periodic path) or a float window
/// with tail bound (finite path).
#[derive(Clone, Debug)]
pub enum DecodeResult {
    Exact(RealSeq),
    Approx(Window),
}

/// Exact unique bounded solution of Q x y = delta for an m-periodic delta
/// (delta_n = letters[n mod m]): propagate affine forms of the d unknown
/// initial values and close up with the periodicity equations.
fn solve_periodic(q: &[BigInt], letters: &[i64]) -> Result<Vec<Rat>> {
    let d = q.len() - 1;
    let m = letters.len();
    let q0 = Rat::from(q[0].clone());
    // affine forms y_n = c_n . u + b_n for n in [0, m + d)
    let mut forms: Vec<(Vec<Rat>, Rat)> = Vec::with_capacity(m + d);
    for j in 0..d.min(m + d) {
        let mut c = vec![Rat::zero(); d];
        c[j] = Rat::one();
        forms.push((c, Rat::zero()));
    }
    for n in d..m + d {
        // (Q x y)_n = sum_j q_j y_{n-j} = delta_n  =>  solve for y_n
        let mut c = vec![Rat::zero(); d];
        let mut b = Rat::from(BigInt::from(letters[n % m]));
        for j in 1..=d {
            let (cj, bj) = &forms[n - j];
            let qj = Rat::from(q[j].clone());
            for t in 0..d {
                c[t] -= &qj * &cj[t];
            }
            b -= qj * bj;
        }
        for t in 0..d {
            c[t] = &c[t] / &q0;
        }
        b /= &q0;
        forms.push((c, b));
    }
    // periodicity: y_{m+j} = y_j for j = 0..d
    let mut mat = vec![vec![Rat::zero(); d]; d];
    let mut rhs = vec![Rat::zero(); d];
    for j in 0..d {
        let (c, b) = &forms[m + j];
        for t in 0..d {
            mat[j][t] = c[t].clone();
        }
        mat[j][j] -= Rat::one();
        rhs[j] = -b.clone();
    }
    let u = solve_rational(&mat, &rhs)
        .ok_or_else(|| Error::Invalid("wraparound system singular (root of unity?)".into()))?;
    // regenerate the full period from the solved initial block
    let mut y: Vec<Rat> = u;
    for n in d..m.max(d) {
        let mut b = Rat::from(BigInt::from(letters[n % m]));
        for j in 1..=d {
            let idx = n - j;
            let prev = y[idx].clone();
            b -= Rat::from(q[j].clone()) * prev;
        }
        y.push(b / &q0);
    }
    y.truncate(m.max(d));
    if m < d {
        // the period is m but we solved d unknowns; fold down
        let folded: Vec<Rat> = (0..m).map(|j| y[j].clone()).collect();
        return Ok(folded);
    }
    Ok(y)
}

/// x = P^{-1} x delta. Periodic words decode exactly; finite words produce a
/// float window over `window`.
pub fn decode(
    p: &LaurentPoly,
    delta: &CodeWord,
    window: (i64, i64),
    precision: f64,
) -> Result<DecodeResult> {
    let hyp = is_hyperbolic(p, crate::inverse::HYPERBOLIC_TOL)?;
    if !hyp.hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let (dense, h) = p.to_dense();
    if delta.periodic {
        if delta.letters.is_empty() {
            return Err(Error::Invalid("empty periodic word".into()));
        }
        let m = delta.letters.len() as i64;
        let y = solve_periodic(&dense, &delta.letters)?;
        // x_n = y_{n+h}: rotate by the monomial shift
        let values: Vec<Rat> = (0..m)
            .map(|r| y[((r + h).rem_euclid(m)) as usize].clone())
            .collect();
        Ok(DecodeResult::Exact(RealSeq {
            start: 0,
            values,
            periodic: true,
        }))
    } else {
        let fs = FiniteSupport::from_pairs(
            &delta
                .letters
                .iter()
                .enumerate()
                .map(|(i, &l)| (i as i64, rat_int(l)))
                .collect::<Vec<_>>(),
        );
        let inv = crate::inverse::inverse(p, precision)?;
        let x = Stream::Finite(fs).convolve(&inv)?;
        Ok(DecodeResult::Approx(x.window_of(
            window.0,
            window.1,
            precision.max(f64::MIN_POSITIVE),
        )?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Boundary,
}

/// Exact entries of the inverse of a (sub)quadratic Q with simple roots, as
/// quadratic irrationals; supports the exact finite-word admissibility path.
struct QuadInverse {
    /// (root, residue, causal) per simple root; causal iff |root| > 1.
    parts: Vec<(QuadIrr, QuadIrr, bool)>,
}

impl QuadInverse {
    fn build(dense: &[BigInt]) -> Option<QuadInverse> {
        let one = QuadIrr::from_int(1);
        match dense.len() {
            2 => {
                // q1 z + q0: root -q0/q1, residue 1/q1
                let q0 = QuadIrr::new(dense[0].clone(), BigInt::zero(), BigInt::one(), BigInt::zero()).ok()?;
                let q1 = QuadIrr::new(dense[1].clone(), BigInt::zero(), BigInt::one(), BigInt::zero()).ok()?;
                let root = q0.neg().div(&q1).ok()?;
                let res = one.div(&q1).ok()?;
                let causal = root.mul(&root).ok()?.cmp_exact(&one).ok()? == std::cmp::Ordering::Greater;
                Some(QuadInverse {
                    parts: vec![(root, res, causal)],
                })
            }
            3 => {
                let d: BigInt = &dense[1] * &dense[1] - BigInt::from(4) * &dense[2] * &dense[0];
                if !d.is_positive() {
                    return None; // repeated or complex roots: float path
                }
                let two_q2 = BigInt::from(2) * &dense[2];
                let th1 = QuadIrr::new(-dense[1].clone(), BigInt::one(), two_q2.clone(), d.clone()).ok()?;
                let th2 = QuadIrr::new(-dense[1].clone(), -BigInt::one(), two_q2, d).ok()?;
                // 1/Q = A/(z-th1) - A/(z-th2), A = 1/(q2 (th1 - th2))
                let q2 = QuadIrr::new(dense[2].clone(), BigInt::zero(), BigInt::one(), BigInt::zero()).ok()?;
                let a = one.div(&q2.mul(&th1.sub(&th2).ok()?).ok()?).ok()?;
                let mut parts = Vec::new();
                for (th, res) in [(th1, a.clone()), (th2, a.neg())] {
                    let causal =
                        th.mul(&th).ok()?.cmp_exact(&one).ok()? == std::cmp::Ordering::Greater;
                    parts.push((th, res, causal));
                }
                Some(QuadInverse { parts })
            }
            _ => None,
        }
    }

    /// Entry m of Q^{-1}: causal roots contribute -R th^{-1-m} for m >= 0,
    /// anticausal ones R th^{-1-m} for m <= -1.
    fn entry(&self, m: i64) -> QuadIrr {
        let mut acc = QuadIrr::from_int(0);
        for (th, res, causal) in &self.parts {
            let use_it = if *causal { m >= 0 } else { m <= -1 };
            if !use_it {
                continue;
            }
            // th^{-1-m}
            let e = -1 - m;
            let base = if e >= 0 {
                th.clone()
            } else {
                th.inv().expect("root nonzero")
            };
            let mut pw = QuadIrr::from_int(1);
            for _ in 0..e.abs() {
                pw = pw.mul(&base).expect("same field");
            }
            let term = res.mul(&pw).expect("same field");
            acc = if *causal {
                acc.sub(&term).expect("same field")
            } else {
                acc.add(&term).expect("same field")
            };
        }
        acc
    }
}

/// Theorem-2 admissibility: delta is a valid code word iff P^{-1} x delta
/// lands in [0,1)^Z. Exact for periodic words and for finite words over
/// (sub)quadratic P with simple real roots; three-valued otherwise.
pub fn is_admissible(p: &LaurentPoly, delta: &CodeWord, precision: f64) -> Result<Verdict> {
    let k = alphabet(p);
    if delta.letters.iter().any(|&l| !k.contains(l)) {
        return Ok(Verdict::No);
    }
    let hyp = is_hyperbolic(p, crate::inverse::HYPERBOLIC_TOL)?;
    if !hyp.hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    if delta.periodic {
        match decode(p, delta, (0, 0), precision)? {
            DecodeResult::Exact(seq) => {
                let ok = seq
                    .values
                    .iter()
                    .all(|v| !v.is_negative() && *v < rat_int(1));
                Ok(if ok { Verdict::Yes } else { Verdict::No })
            }
            DecodeResult::Approx(_) => unreachable!("periodic decode is exact"),
        }
    } else {
        if delta.letters.iter().all(|&l| l == 0) {
            return Ok(Verdict::Yes);
        }
        let (dense, h) = p.to_dense();
        if let Some(qi) = QuadInverse::build(&dense) {
            // x_n = sum_i delta_i Qinv_{n - i + h}; pure-tail monotonicity
            // makes the window [i_min-2, i_max+2] decisive (see tails note)
            let i_min = 0i64;
            let i_max = delta.letters.len() as i64 - 1;
            let one = QuadIrr::from_int(1);
            for n in i_min - 2..=i_max + 2 {
                let mut x = QuadIrr::from_int(0);
                for (i, &l) in delta.letters.iter().enumerate() {
                    if l == 0 {
                        continue;
                    }
                    let term = QuadIrr::from_int(l).mul(&qi.entry(n - i as i64 + h));
                    x = x.add(&term.expect("same field")).expect("same field");
                }
                if x.sign() < 0 || x.cmp_exact(&one).map_err(|_| Error::Indeterminate)?
                    != std::cmp::Ordering::Less
                {
                    return Ok(Verdict::No);
                }
            }
            return Ok(Verdict::Yes);
        }
        // float fallback
        let n = delta.letters.len() as i64;
        let w = match decode(p, delta, (-n - 30, 2 * n + 30), precision)? {
            DecodeResult::Approx(w) => w,
            DecodeResult::Exact(_) => unreachable!("finite decode is windowed"),
        };
        let slack = w.err + precision;
        let mut boundary = false;
        for v in &w.values {
            if *v < -slack || *v >= 1.0 + slack {
                return Ok(Verdict::No);
            }
            if *v < slack || *v >= 1.0 - slack {
                boundary = true;
            }
        }
        if w.tail_bound > 0.0 {
            boundary = true; // cannot certify the sign of the far tail
        }
        Ok(if boundary { Verdict::Boundary } else { Verdict::Yes })
    }
}

/// Exact topological entropy: sum of -log|theta| over roots inside the unit
/// circle (equivalently log of companion eigenvalues outside).
pub fn entropy_exact(p: &LaurentPoly) -> Result<f64> {
    form3(p)?; // enforce the normal-form precondition
    let rs = find_roots(p, 1e-13)?;
    Ok(rs
        .roots
        .iter()
        .filter(|r| r.value.norm() < 1.0)
        .map(|r| -(r.value.norm().ln()) * r.multiplicity as f64)
        .sum())
}

#[derive(Clone, Copy, Debug)]
pub struct EntropyPoint {
    pub n: usize,
    pub count: u64,
    /// `(1/n) log count` — converges slowly, from above, since the word count
    /// grows like `C * e^{h n}` with `C > 1`.
    pub estimate: f64,
    /// `log(count_n / count_{n-1})` — the growth-rate estimator; cancels the
    /// constant `C` and settles near the entropy within a few letters.
    pub gap: f64,
}

/// Word-counting entropy estimate: sweep every seed of the (1/grid)-lattice
/// on [0,1)^k, emit the first `word_len` letters of each forward orbit, and
/// count distinct words per length. The sweep over all seeds subsumes
/// backward branching, since every reachable k-state is itself a seed.
pub fn entropy_estimate(p: &LaurentPoly, word_len: usize, grid: u64) -> Result<Vec<EntropyPoint>> {
    let f = form3(p)?;
    let k = f.k();
    if grid < 2 {
        return Err(Error::Invalid("grid must be >= 2".into()));
    }
    if word_len == 0 || word_len > 24 {
        return Err(Error::Invalid("word_len must be in 1..=24".into()));
    }
    let seeds = (grid as u128).checked_pow(k as u32).ok_or_else(|| {
        Error::Invalid("grid^k overflows".into())
    })?;
    if seeds > 1u128 << 26 {
        return Err(Error::Invalid(format!(
            "grid^k = {seeds} seeds is beyond the sweep budget"
        )));
    }
    let a: Vec<i64> = f
        .a
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| Error::Invalid("coefficient exceeds i64".into())))
        .collect::<Result<_>>()?;
    // letters lie in the normalized alphabet; offset to nonnegative packing
    let norm = LaurentPoly::from_dense(
        &std::iter::once(BigInt::one())
            .chain(f.a.iter().cloned())
            .collect::<Vec<_>>(),
        0,
    );
    let alpha = alphabet(&norm);
    let base = alpha.size() as u64;
    let g = grid as i128;
    let total = seeds as u64;
    let n_chunks = 256u64;
    let chunk = total.div_ceil(n_chunks);
    let sets: Vec<Vec<std::collections::HashSet<u64>>> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let mut local: Vec<std::collections::HashSet<u64>> =
                (0..word_len).map(|_| Default::default()).collect();
            let lo = ci * chunk;
            let hi = ((ci + 1) * chunk).min(total);
            let mut xs: Vec<i128> = vec![0; k + word_len];
            for s in lo..hi {
                // unpack seed digits base `grid`
                let mut t = s;
                for x in xs.iter_mut().take(k) {
                    *x = (t % grid) as i128;
                    t /= grid;
                }
                // forward recursion on numerators mod grid, collecting letters
                let mut packed = 0u64;
                for step in 0..word_len {
                    let n = k + step;
                    let mut acc: i128 = 0;
                    for (i, &ai) in a.iter().enumerate() {
                        acc -= ai as i128 * xs[n - 1 - i];
                    }
                    let num = acc.rem_euclid(g);
                    xs[n] = num;
                    // letter delta_n = x_n - (unreduced value) = (num - acc)/g
                    let letter = ((num - acc) / g) as i64;
                    debug_assert!(alpha.contains(letter), "letter {letter} outside alphabet");
                    packed = packed * base + (letter - alpha.k_star) as u64;
                    local[step].insert(packed);
                }
            }
            local
        })
        .collect();
    let mut merged: Vec<std::collections::HashSet<u64>> =
        (0..word_len).map(|_| Default::default()).collect();
    for local in sets {
        for (m, l) in merged.iter_mut().zip(local) {
            m.extend(l);
        }
    }
    let mut prev = 1u64;
    Ok(merged
        .iter()
        .enumerate()
        .map(|(i, set)| {
            let n = i + 1;
            let count = set.len() as u64;
            let gap = (count as f64 / prev as f64).ln();
            prev = count;
            EntropyPoint {
                n,
                count,
                estimate: (count as f64).ln() / n as f64,
                gap,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn parse(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    fn seq(vals: &[Rat]) -> Vec<Rat> {
        vals.to_vec()
    }

    #[test]
    fn alphabet_examples() {
        assert_eq!(
            alphabet(&parse("z^2-3z+1")),
            Alphabet {
                k_star: -2,
                k_star_hi: 1
            }
        );
        assert_eq!(
            alphabet(&parse("z-2")),
            Alphabet {
                k_star: -1,
                k_star_hi: 0
            }
        );
        assert_eq!(
            alphabet(&parse("-3z^2+1")),
            Alphabet {
                k_star: -2,
                k_star_hi: 0
            }
        );
    }

    #[test]
    fn orbit_golden_examples() {
        let p = parse("z^2-3z+1");
        let zero = orbit(&p, &seq(&[rat(0, 1), rat(0, 1)]), 6, 0, 0).unwrap();
        assert!(zero.values.iter().all(|v| v.is_zero()));

        let o = orbit(&p, &seq(&[rat(0, 1), rat(1, 2)]), 7, 0, 0).unwrap();
        let expect = [
            rat(0, 1),
            rat(1, 2),
            rat(1, 2),
            rat(0, 1),
            rat(1, 2),
            rat(1, 2),
            rat(0, 1),
            rat(1, 2),
            rat(1, 2),
        ];
        assert_eq!(o.values, expect.to_vec());
    }

    #[test]
    fn orbit_with_tripling() {
        // -3z^2+1: x_{n+2} = {3 x_n}
        let p = parse("-3z^2+1");
        let o = orbit(&p, &seq(&[rat(1, 4), rat(0, 1)]), 6, 0, 0).unwrap();
        let expect = [
            rat(1, 4),
            rat(0, 1),
            rat(3, 4),
            rat(0, 1),
            rat(1, 4),
            rat(0, 1),
            rat(3, 4),
            rat(0, 1),
        ];
        assert_eq!(o.values, expect.to_vec());
    }

    #[test]
    fn backward_branches() {
        // -3z^2+1 backward: {3 x_n} = x_{n+2}; three branches
        let p = parse("-3z^2+1");
        let seed = seq(&[rat(3, 4), rat(0, 1)]);
        let mut firsts = Vec::new();
        for b in 0..3 {
            let o = orbit(&p, &seed, 0, 2, b).unwrap();
            assert_eq!(o.start, -2);
            // forward consistency of the extended window
            let f = form3(&p).unwrap();
            for n in 0..o.values.len() - 2 {
                let nx = forward_step(&f.a, &o.values[n..n + 2]);
                assert_eq!(nx, o.values[n + 2]);
            }
            firsts.push(o.values[0].clone());
        }
        firsts.dedup();
        assert_eq!(firsts.len(), 3);
        assert!(matches!(
            orbit(&p, &seed, 0, 1, 3),
            Err(Error::BranchOutOfRange { .. })
        ));
    }

    #[test]
    fn form3_rejects_bad_constant() {
        assert!(matches!(
            form3(&parse("z-2")),
            Err(Error::UnsupportedConstantTerm(_))
        ));
        // sign flip: -1 + z normalizes with flipped = true
        let f = form3(&parse("z-1")).unwrap();
        assert!(f.flipped);
        assert_eq!(f.a, vec![BigInt::from(-1)]);
    }

    #[test]
    fn encode_period3_orbit() {
        let p = parse("z^2-3z+1");
        let x = orbit_cycle(&p, &seq(&[rat(0, 1), rat(1, 2)])).unwrap();
        assert_eq!(x.values.len(), 3);
        let e = encode(&p, &x).unwrap();
        assert!(e.word.periodic);
        assert!(e
            .word
            .cyclic_eq(&CodeWord::periodic(vec![-1, -1, 1])));
        // every letter is in the alphabet
        let k = alphabet(&p);
        assert!(e.word.letters.iter().all(|&l| k.contains(l)));
    }

    #[test]
    fn encode_shift_equivariance() {
        let p = parse("z^2-3z+1");
        let x = orbit(&p, &seq(&[rat(1, 7), rat(3, 7)]), 9, 0, 0).unwrap();
        let e = encode(&p, &x).unwrap();
        let xs = x.shifted(2);
        let es = encode(&p, &xs).unwrap();
        assert_eq!(e.word.letters, es.word.letters);
        assert_eq!(es.start, e.start - 2);
    }

    #[test]
    fn decode_round_trip_period3() {
        let p = parse("z^2-3z+1");
        let x = orbit_cycle(&p, &seq(&[rat(0, 1), rat(1, 2)])).unwrap();
        let e = encode(&p, &x).unwrap();
        match decode(&p, &e.word, (0, 0), 1e-12).unwrap() {
            DecodeResult::Exact(y) => {
                for n in -5..10 {
                    assert_eq!(y.at(n), x.at(n), "index {n}");
                }
            }
            _ => panic!("expected exact decode"),
        }
    }

    #[test]
    fn decode_round_trip_random_rational() {
        let p = parse("z^2-3z+1");
        let x = orbit_cycle(&p, &seq(&[rat(2, 9), rat(5, 9)])).unwrap();
        let e = encode(&p, &x).unwrap();
        match decode(&p, &e.word, (0, 0), 1e-12).unwrap() {
            DecodeResult::Exact(y) => {
                for n in 0..(2 * x.values.len() as i64) {
                    assert_eq!(y.at(n), x.at(n), "index {n}");
                }
            }
            _ => panic!("expected exact decode"),
        }
    }

    #[test]
    fn admissibility_verdicts() {
        let p = parse("z^2-3z+1");
        // zero word
        assert_eq!(
            is_admissible(&p, &CodeWord::periodic(vec![0]), 1e-12).unwrap(),
            Verdict::Yes
        );
        // the encode example
        assert_eq!(
            is_admissible(&p, &CodeWord::periodic(vec![-1, -1, 1]), 1e-12).unwrap(),
            Verdict::Yes
        );
        // constant (1,1,1): decodes to the constant -1, out of the torus
        assert_eq!(
            is_admissible(&p, &CodeWord::periodic(vec![1, 1, 1]), 1e-12).unwrap(),
            Verdict::No
        );
        // out-of-alphabet letters are immediately inadmissible
        assert_eq!(
            is_admissible(&p, &CodeWord::periodic(vec![5]), 1e-12).unwrap(),
            Verdict::No
        );
        // finite zero word
        assert_eq!(
            is_admissible(&p, &CodeWord::finite(vec![0, 0]), 1e-12).unwrap(),
            Verdict::Yes
        );
        // non-hyperbolic P is a typed error
        assert!(matches!(
            is_admissible(&parse("z-1"), &CodeWord::periodic(vec![0]), 1e-12),
            Err(Error::NotHyperbolic)
        ));
    }

    #[test]
    fn finite_word_exact_path() {
        let p = parse("z^2-3z+1");
        // single letter -1: x = -(inverse), whose entries are all positive
        // (1/sqrt5 scale) and below 1: admissible
        let v = is_admissible(&p, &CodeWord::finite(vec![-1]), 1e-12).unwrap();
        assert_eq!(v, Verdict::Yes);
        // single letter 1: x = inverse, all entries negative: not admissible
        let v = is_admissible(&p, &CodeWord::finite(vec![1]), 1e-12).unwrap();
        assert_eq!(v, Verdict::No);
    }

    #[test]
    fn entropy_exact_values() {
        let h = entropy_exact(&parse("z^2-3z+1")).unwrap();
        assert!((h - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-9);
        let h = entropy_exact(&parse("-3z^2+1")).unwrap();
        assert!((h - 3f64.ln()).abs() < 1e-9);
        let h = entropy_exact(&parse("z^2-2z+1")).unwrap();
        assert!(h.abs() < 1e-9);
        assert!(matches!(
            entropy_exact(&parse("z-2")),
            Err(Error::UnsupportedConstantTerm(_))
        ));
    }

    #[test]
    fn entropy_estimate_small_grid() {
        let p = parse("z^2-3z+1");
        let pts = entropy_estimate(&p, 4, 64).unwrap();
        assert_eq!(pts.len(), 4);
        // all four letters occur at n = 1
        assert_eq!(pts[0].count, 4);
        // submultiplicativity
        for w in pts.windows(2) {
            assert!(w[1].count >= w[0].count);
        }
        let h = entropy_exact(&p).unwrap();
        // one-sided: (1/n) log N_n >= h
        assert!(pts[3].estimate >= h - 1e-9);
    }

    #[test]
    fn entropy_estimate_tripling_is_exact() {
        // -3z^2+1 over a power-of-two grid: letters are ternary digits and
        // every pattern occurs, so the estimate equals log 3 exactly
        let pts = entropy_estimate(&parse("-3z^2+1"), 6, 256).unwrap();
        assert!((pts[5].estimate - 3f64.ln()).abs() < 1e-12);
    }
}
