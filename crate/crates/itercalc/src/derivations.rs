//! The algebraic differential operators: the bracket-weighted
//! letter-deleting derivation with boundary pair (s,t), its Kronecker-delta
//! specialization on the {0,1,z} alphabet, and the free-choice
//! reformulation used in proofs.

use num::BigInt;

use crate::error::{Error, Result};
use crate::ncalgebra::{NcPoly, Word};
use crate::ratfield::{GradingMap, RatFun};

fn partial_word(g: &GradingMap, s: &RatFun, t: &RatFun, w: &Word) -> NcPoly {
    let n = w.len();
    let mut out = NcPoly::zero();
    let letter = |i: usize| -> &RatFun {
        // boundary convention (a_0, a_{n+1}) = (s, t)
        if i == 0 {
            s
        } else if i == n + 1 {
            t
        } else {
            &w.letters()[i - 1]
        }
    };
    for i in 1..=n {
        let fwd = g.bracket(&(letter(i + 1) - letter(i)));
        let back = g.bracket(&(letter(i) - letter(i - 1)));
        let coeff = fwd - back;
        if coeff != 0 {
            out.add_term(w.delete(i - 1), BigInt::from(coeff));
        }
    }
    out
}

/// The derivation `partial^{s,t}`: linear extension of
/// `sum_i ([a_{i+1} - a_i] - [a_i - a_{i-1}]) * (delete letter i)`.
pub fn partial(g: &GradingMap, s: &RatFun, t: &RatFun, a: &NcPoly) -> NcPoly {
    let mut out = NcPoly::zero();
    for (w, c) in a.terms() {
        out = &out + &partial_word(g, s, t, w).scale(c);
    }
    out
}

fn set_eq(x: &RatFun, y: &RatFun, p: &RatFun, q: &RatFun) -> bool {
    // {x, y} == {p, q} as sets
    if x == y {
        p == q && x == p
    } else {
        (x == p && y == q) || (x == q && y == p)
    }
}

/// The specialized derivation on the {0,1,z} alphabet: Kronecker deltas on
/// the unordered pairs {a_i, a_{i+1}} against {z, c}, with boundary (0, 1).
/// Implemented directly from the delta formula, independently of `partial`.
pub fn partial_zc(c: u8, a: &NcPoly) -> Result<NcPoly> {
    assert!(c <= 1, "c must be 0 or 1");
    let zero = RatFun::from_int(0);
    let one = RatFun::from_int(1);
    let z = RatFun::var();
    let cc = RatFun::from_int(c as i64);
    let mut out = NcPoly::zero();
    for (w, coeff) in a.terms() {
        for l in w.letters() {
            if l != &zero && l != &one && l != &z {
                return Err(Error::UnsupportedLetter(l.to_string()));
            }
        }
        let n = w.len();
        let letter = |i: usize| -> &RatFun {
            if i == 0 {
                &zero
            } else if i == n + 1 {
                &one
            } else {
                &w.letters()[i - 1]
            }
        };
        for i in 1..=n {
            let fwd = set_eq(letter(i), letter(i + 1), &z, &cc) as i64;
            let back = set_eq(letter(i - 1), letter(i), &z, &cc) as i64;
            let delta = fwd - back;
            if delta != 0 {
                out.add_term(w.delete(i - 1), coeff * BigInt::from(delta));
            }
        }
    }
    Ok(out)
}

/// The free-choice form of the derivation: `f` is any integer map on
/// `{0..n}` agreeing with the bracket `[a_{i+1} - a_i]` wherever the
/// consecutive letters differ. The precondition is checked, not trusted.
pub fn partial_with_f(
    g: &GradingMap,
    s: &RatFun,
    t: &RatFun,
    w: &Word,
    f: &[i64],
) -> Result<NcPoly> {
    let n = w.len();
    assert_eq!(f.len(), n + 1, "f must be defined on 0..=n");
    let letter = |i: usize| -> &RatFun {
        if i == 0 {
            s
        } else if i == n + 1 {
            t
        } else {
            &w.letters()[i - 1]
        }
    };
    for i in 0..=n {
        if letter(i) != letter(i + 1) {
            let expected = g.bracket(&(letter(i + 1) - letter(i)));
            if f[i] != expected {
                return Err(Error::InvalidF(i));
            }
        }
    }
    let mut out = NcPoly::zero();
    for i in 1..=n {
        let coeff = f[i] - f[i - 1];
        if coeff != 0 {
            out.add_term(w.delete(i - 1), BigInt::from(coeff));
        }
    }
    if n >= 1 {
        if s == letter(1) && f[0] != 0 {
            out.add_term(w.delete(0), BigInt::from(f[0]));
        }
        if letter(n) == t && f[n] != 0 {
            out.add_term(w.delete(n - 1), BigInt::from(-f[n]));
        }
    }
    Ok(out)
}
