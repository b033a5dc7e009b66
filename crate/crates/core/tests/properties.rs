use num::bigint::BigInt;
use num::Zero;
use proptest::prelude::*;

use streamzeros::dynamics::{alphabet, encode, orbit};
use streamzeros::poly::{bezout, poly_gcd, resultant};
use streamzeros::rat::rat;
use streamzeros::stream::FiniteSupport;
use streamzeros::{LaurentPoly, Stream};

fn finite_stream() -> impl Strategy<Value = Stream> {
    prop::collection::vec((-6i64..=6, -9i64..=9, 1i64..=9), 0..6).prop_map(|terms| {
        let pairs: Vec<_> = terms.into_iter().map(|(e, n, d)| (e, rat(n, d))).collect();
        Stream::Finite(FiniteSupport::from_pairs(&pairs))
    })
}

fn small_poly() -> impl Strategy<Value = LaurentPoly> {
    (1usize..=4, prop::collection::vec(-9i64..=9, 5))
        .prop_filter_map("nonzero with nonzero leading", |(deg, cs)| {
            let mut dense: Vec<BigInt> = cs[..=deg].iter().map(|&c| BigInt::from(c)).collect();
            if dense[deg].is_zero() {
                dense[deg] = BigInt::from(1);
            }
            if dense.iter().all(|c| c.is_zero()) {
                return None;
            }
            Some(LaurentPoly::from_dense(&dense, 0))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn convolution_ring_laws(a in finite_stream(), b in finite_stream(), c in finite_stream()) {
        let ab = a.convolve(&b).unwrap();
        let ba = b.convolve(&a).unwrap();
        prop_assert_eq!(ab.as_finite(), ba.as_finite());
        let abc1 = ab.convolve(&c).unwrap();
        let abc2 = a.convolve(&b.convolve(&c).unwrap()).unwrap();
        prop_assert_eq!(abc1.as_finite(), abc2.as_finite());
        let ai = a.convolve(&Stream::identity()).unwrap();
        prop_assert_eq!(ai.as_finite(), a.as_finite());
    }

    #[test]
    fn shift_is_a_group_action(a in finite_stream(), d1 in -5i64..=5, d2 in -5i64..=5) {
        let s1 = a.shift(d1).shift(d2);
        let s2 = a.shift(d1 + d2);
        prop_assert_eq!(s1.as_finite(), s2.as_finite());
        let zero_shift = a.shift(0);
        prop_assert_eq!(zero_shift.as_finite(), a.as_finite());
    }

    #[test]
    fn shift_commutes_with_convolution(a in finite_stream(), b in finite_stream(), d in -5i64..=5) {
        let lhs = a.shift(d).convolve(&b).unwrap();
        let rhs = a.convolve(&b).unwrap().shift(d);
        prop_assert_eq!(lhs.as_finite(), rhs.as_finite());
    }

    #[test]
    fn resultant_vanishes_iff_gcd_nontrivial(p in small_poly(), q in small_poly()) {
        let delta = resultant(&p, &q).delta;
        let unit_gcd = poly_gcd(&p, &q).span() == 0;
        prop_assert_eq!(!delta.is_zero(), unit_gcd);
    }

    #[test]
    fn bezout_identity_holds(p in small_poly(), q in small_poly()) {
        if let Ok((a, b, delta)) = bezout(&p, &q) {
            let lhs = a.mul(&p).add(&b.mul(&q));
            prop_assert_eq!(lhs, LaurentPoly::monomial(delta, 0));
        }
    }

    #[test]
    fn encode_letters_stay_in_alphabet(n0 in 0i64..40, n1 in 0i64..40, d in 1i64..=40) {
        let p = LaurentPoly::parse("z^2-3z+1").unwrap();
        let x = orbit(&p, &[rat(n0 % d, d), rat(n1 % d, d)], 10, 0, 0).unwrap();
        let e = encode(&p, &x).unwrap();
        let k = alphabet(&p);
        prop_assert!(e.word.letters.iter().all(|&l| k.contains(l)));
    }

    #[test]
    fn encode_is_shift_equivariant(n0 in 0i64..30, n1 in 0i64..30, d in 1i64..=30, s in -4i64..=4) {
        let p = LaurentPoly::parse("z^2-3z+1").unwrap();
        let x = orbit(&p, &[rat(n0 % d, d), rat(n1 % d, d)], 10, 0, 0).unwrap();
        let e = encode(&p, &x).unwrap();
        let es = encode(&p, &x.shifted(s)).unwrap();
        prop_assert_eq!(&e.word.letters, &es.word.letters);
        prop_assert_eq!(es.start, e.start - s);
    }
}
