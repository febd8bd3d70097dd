//! Cross-module structural properties: oracle equivalences, algebra axioms,
//! transform identities, and parser error hygiene. Randomized parts use a
//! fixed seed so failures reproduce.

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use itercalc::derivations::partial;
use itercalc::ncalgebra::{alphabet_01z, words_up_to, NcPoly, Word};
use itercalc::parse::parse_expr;
use itercalc::products::{shuffle, shuffle_perm_oracle, stuffle};
use itercalc::ratfield::Poly;
use itercalc::transforms::{gamma_star, phi, tau_z, tau_z_via_mobius};
use itercalc::verify::standard_gradings;
use itercalc::{Error, GradingMap, MobiusMap, ProjPoint, RatFun};

fn rf(n: i64) -> RatFun {
    RatFun::from_int(n)
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::new(
        (0..=deg)
            .map(|_| BigRational::from(BigInt::from(rng.gen_range(-5i64..=5))))
            .collect(),
    )
}

fn random_ratfun(rng: &mut ChaCha8Rng) -> RatFun {
    loop {
        let den = random_poly(rng, 2);
        if den.is_zero() {
            continue;
        }
        return RatFun::new(random_poly(rng, 2), den).unwrap();
    }
}

fn random_nonzero_ratfun(rng: &mut ChaCha8Rng) -> RatFun {
    loop {
        let f = random_ratfun(rng);
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_mobius(rng: &mut ChaCha8Rng) -> MobiusMap {
    loop {
        let entry = |rng: &mut ChaCha8Rng| rf(rng.gen_range(-3i64..=3));
        if let Ok(m) = MobiusMap::new(entry(rng), entry(rng), entry(rng), entry(rng)) {
            return m;
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &[RatFun], max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word(
        (0..len)
            .map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone())
            .collect(),
    )
}

fn random_ncpoly(rng: &mut ChaCha8Rng, alphabet: &[RatFun]) -> NcPoly {
    let mut a = NcPoly::zero();
    for _ in 0..rng.gen_range(0..=4) {
        a.add_term(
            random_word(rng, alphabet, 3),
            BigInt::from(rng.gen_range(-4i64..=4)),
        );
    }
    a
}

#[test]
fn bracket_is_a_homomorphism_with_sign_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut gradings = standard_gradings();
    gradings.push(GradingMap::AtPoint("1/2".parse().unwrap()));
    for _ in 0..1000 {
        let x = random_nonzero_ratfun(&mut rng);
        let y = random_nonzero_ratfun(&mut rng);
        for g in &gradings {
            assert_eq!(
                g.bracket(&(&x * &y)),
                g.bracket(&x) + g.bracket(&y),
                "bracket not additive at x={}, y={}, g={}",
                x,
                y,
                g
            );
            assert_eq!(g.bracket(&-&x), g.bracket(&x));
        }
    }
}

#[test]
fn mobius_apply_is_a_group_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..500 {
        let g1 = random_mobius(&mut rng);
        let g2 = random_mobius(&mut rng);
        let p = if rng.gen_bool(0.1) {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(random_ratfun(&mut rng))
        };
        assert_eq!(
            g1.apply(&g2.apply(&p)),
            g1.compose(&g2).apply(&p),
            "action failed at p={:?}",
            p
        );
    }
}

#[test]
fn canonicalization_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..500 {
        let f = random_ratfun(&mut rng);
        let again = RatFun::new(f.numerator().clone(), f.denominator().clone()).unwrap();
        assert_eq!(again, f);
        assert_eq!(again.numerator(), f.numerator());
        assert_eq!(again.denominator(), f.denominator());
    }
}

#[test]
fn nc_mul_associative_and_unital() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let alphabet = alphabet_01z();
    let one = NcPoly::one();
    for _ in 0..200 {
        let a = random_ncpoly(&mut rng, &alphabet);
        let b = random_ncpoly(&mut rng, &alphabet);
        let c = random_ncpoly(&mut rng, &alphabet);
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &one, a);
        assert_eq!(&one * &a, a);
    }
}

#[test]
fn shuffle_matches_permutation_oracle_deg7() {
    let alphabet = alphabet_01z();
    let us = words_up_to(&alphabet, 0, 7);
    us.par_iter().for_each(|u| {
        for v in words_up_to(&alphabet, 0, 7 - u.len()) {
            let recursive = shuffle(&NcPoly::from_word(u.clone()), &NcPoly::from_word(v.clone()));
            assert_eq!(
                recursive,
                shuffle_perm_oracle(u, &v),
                "oracle mismatch at u={}, v={}",
                u,
                v
            );
        }
    });
}

#[test]
fn shuffle_commutative_and_associative() {
    let alphabet = alphabet_01z();
    for u in words_up_to(&alphabet, 0, 3) {
        let up = NcPoly::from_word(u.clone());
        for v in words_up_to(&alphabet, 0, 3) {
            let vp = NcPoly::from_word(v.clone());
            assert_eq!(shuffle(&up, &vp), shuffle(&vp, &up));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..200 {
        let u = NcPoly::from_word(random_word(&mut rng, &alphabet, 2));
        let v = NcPoly::from_word(random_word(&mut rng, &alphabet, 2));
        let w = NcPoly::from_word(random_word(&mut rng, &alphabet, 2));
        assert_eq!(shuffle(&shuffle(&u, &v), &w), shuffle(&u, &shuffle(&v, &w)));
    }
}

#[test]
fn stuffle_absorbs_leading_zero_letter() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let alphabet = alphabet_01z();
    let e0 = NcPoly::letter(rf(0));
    for _ in 0..200 {
        let u = NcPoly::from_word(random_word(&mut rng, &alphabet, 3));
        let v = match random_word(&mut rng, &alphabet, 3) {
            w if w.is_empty() => continue,
            w => NcPoly::from_word(w),
        };
        assert_eq!(stuffle(&(&e0 * &u), &v), &e0 * &stuffle(&u, &v));
    }
}

#[test]
fn partial_vanishes_on_z_free_words() {
    let alphabet_01 = vec![rf(0), rf(1)];
    let (s, t) = (rf(0), rf(1));
    for w in words_up_to(&alphabet_01, 0, 5) {
        for c in [0i64, 1] {
            let out = partial(&GradingMap::at_int(c), &s, &t, &NcPoly::from_word(w.clone()));
            assert!(out.is_zero(), "partial at c={} nonzero on {}", c, w);
        }
    }
}

#[test]
fn partial_drops_degree_by_one() {
    let alphabet = alphabet_01z();
    let (s, t) = (rf(0), rf(1));
    for w in words_up_to(&alphabet, 1, 4) {
        for g in standard_gradings() {
            let out = partial(&g, &s, &t, &NcPoly::from_word(w.clone()));
            for (ow, _) in out.terms() {
                assert_eq!(ow.len(), w.len() - 1);
            }
        }
    }
}

#[test]
fn tau_z_involution_and_factorization_deg6() {
    let alphabet = alphabet_01z();
    let words = words_up_to(&alphabet, 0, 6);
    words.par_iter().for_each(|w| {
        let a = NcPoly::from_word(w.clone());
        let t1 = tau_z(&a).unwrap();
        assert_eq!(tau_z(&t1).unwrap(), a, "involution failed on {}", w);
        assert_eq!(t1, tau_z_via_mobius(&a), "factorization failed on {}", w);
    });
}

#[test]
fn tau_z_is_anti_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let alphabet = alphabet_01z();
    for _ in 0..200 {
        let u = NcPoly::from_word(random_word(&mut rng, &alphabet, 3));
        let v = NcPoly::from_word(random_word(&mut rng, &alphabet, 3));
        assert_eq!(
            tau_z(&(&u * &v)).unwrap(),
            &tau_z(&v).unwrap() * &tau_z(&u).unwrap()
        );
    }
}

#[test]
fn gamma_star_functorial_when_avoiding_infinity() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let alphabet = alphabet_01z();
    let mut checked = 0;
    let mut skipped = 0;
    while checked < 200 {
        let g1 = random_mobius(&mut rng);
        let g2 = random_mobius(&mut rng);
        let w = random_word(&mut rng, &alphabet, 3);
        // exclude cases where any letter (or the base point at infinity)
        // passes through infinity at either stage
        let mut points: Vec<ProjPoint> = w
            .letters()
            .iter()
            .map(|l| ProjPoint::Finite(l.clone()))
            .collect();
        points.push(ProjPoint::Infinity);
        let hits_infinity = points.iter().any(|p| {
            let mid = g2.apply(p);
            mid == ProjPoint::Infinity || g1.apply(&mid) == ProjPoint::Infinity
        });
        if hits_infinity {
            skipped += 1;
            continue;
        }
        let a = NcPoly::from_word(w);
        assert_eq!(
            gamma_star(&g1, &gamma_star(&g2, &a)),
            gamma_star(&g1.compose(&g2), &a)
        );
        checked += 1;
    }
    println!("functoriality: {} checked, {} skipped (hit infinity)", checked, skipped);
}

#[test]
fn phi_intertwines_partial_with_swapped_endpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let alphabet = alphabet_01z();
    for _ in 0..200 {
        let a = random_ncpoly(&mut rng, &alphabet);
        let x = rf(rng.gen_range(-2i64..=2));
        let y = rf(rng.gen_range(-2i64..=2));
        for g in standard_gradings() {
            assert_eq!(
                phi(&partial(&g, &x, &y, &a)),
                partial(&g, &y, &x, &phi(&a)),
                "intertwine failed at x={}, y={}, g={}, a={}",
                x,
                y,
                g,
                a
            );
        }
    }
}

#[test]
fn syntax_errors_carry_in_range_offsets() {
    let cases = [
        "e[", "e[1", "e[1]e", "2*", "e[1] +", "e[z]]", "z", "(e[1])", "e[1/0]x",
        "--3", "e[)", "y[1,1]", "1 2",
    ];
    for text in cases {
        match parse_expr(text) {
            Ok(_) => panic!("'{}' unexpectedly parsed", text),
            Err(Error::SyntaxError { offset, .. }) => {
                assert!(offset <= text.len(), "offset {} out of range for '{}'", offset, text)
            }
            Err(other) => panic!("'{}' gave non-syntax error {:?}", text, other),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let chars: Vec<char> = "e[]01z+-*/^ ,y".chars().collect();
    for _ in 0..500 {
        let len = rng.gen_range(1..=12);
        let text: String = (0..len).map(|_| chars[rng.gen_range(0..chars.len())]).collect();
        if let Err(Error::SyntaxError { offset, .. }) = parse_expr(&text) {
            assert!(offset <= text.len(), "offset {} out of range for '{}'", offset, text);
        }
    }
}
