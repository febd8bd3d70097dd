//! Mobius pullback on the algebra, the sign anti-automorphism, the duality
//! map on the {0,1,z} alphabet, and the boundary defect epsilon_gamma.

use num::BigInt;

use crate::error::{Error, Result};
use crate::ncalgebra::{NcPoly, Word};
use crate::ratfield::{GradingMap, MobiusMap, ProjPoint, RatFun};

/// The fixed matrix gamma_z = (z, -z; 1, -z) whose pullback factors the
/// duality map.
pub fn gamma_z() -> MobiusMap {
    let z = RatFun::var();
    MobiusMap::new(z.clone(), -&z, RatFun::one(), -&z).expect("det = z(1-z) != 0")
}

fn point_poly(p: &ProjPoint) -> NcPoly {
    // e_infinity := 0
    match p {
        ProjPoint::Finite(x) => NcPoly::letter(x.clone()),
        ProjPoint::Infinity => NcPoly::zero(),
    }
}

/// Pullback along gamma: the algebra map extending
/// `e_x -> e_{gamma(x)} - e_{gamma(inf)}`, with e_infinity = 0.
pub fn gamma_star(gamma: &MobiusMap, a: &NcPoly) -> NcPoly {
    let at_inf = point_poly(&gamma.apply(&ProjPoint::Infinity));
    let mut out = NcPoly::zero();
    for (w, c) in a.terms() {
        let mut acc = NcPoly::one();
        for letter in w.letters() {
            let img = &point_poly(&gamma.apply(&ProjPoint::Finite(letter.clone()))) - &at_inf;
            acc = &acc * &img;
        }
        out = &out + &acc.scale(c);
    }
    out
}

/// The anti-automorphism `phi(e_x) = -e_x`: reverse each word and flip the
/// sign by the word length.
pub fn phi(a: &NcPoly) -> NcPoly {
    let mut out = NcPoly::zero();
    for (w, c) in a.terms() {
        let mut letters = w.letters().to_vec();
        letters.reverse();
        let sign = if w.len() % 2 == 0 { 1 } else { -1 };
        out.add_term(Word(letters), c * BigInt::from(sign));
    }
    out
}

fn tau_letter(x: &RatFun) -> Result<NcPoly> {
    let zero = RatFun::from_int(0);
    let one = RatFun::from_int(1);
    let z = RatFun::var();
    if x == &zero {
        Ok(&NcPoly::letter(z) - &NcPoly::letter(one))
    } else if x == &one {
        Ok(&NcPoly::letter(z) - &NcPoly::letter(zero))
    } else if x == &z {
        Ok(NcPoly::letter(z))
    } else {
        Err(Error::UnsupportedLetter(x.to_string()))
    }
}

/// The duality map: the anti-automorphism on the {0,1,z} alphabet with
/// `tau(e_0) = e_z - e_1`, `tau(e_1) = e_z - e_0`, `tau(e_z) = e_z`.
/// Direct substitution-with-reversal; see `tau_z_via_mobius` for the
/// independent factorized route.
pub fn tau_z(a: &NcPoly) -> Result<NcPoly> {
    let mut out = NcPoly::zero();
    for (w, c) in a.terms() {
        let mut acc = NcPoly::one();
        for letter in w.letters().iter().rev() {
            acc = &acc * &tau_letter(letter)?;
        }
        out = &out + &acc.scale(c);
    }
    Ok(out)
}

/// The duality map computed as `phi . gamma_z^*`; must agree with `tau_z`.
pub fn tau_z_via_mobius(a: &NcPoly) -> NcPoly {
    phi(&gamma_star(&gamma_z(), a))
}

/// `epsilon_gamma(x) = [det gamma] - 2[c x + d]`.
pub fn epsilon_gamma(gamma: &MobiusMap, g: &GradingMap, x: &RatFun) -> i64 {
    let (_, _, c, d) = gamma.entries();
    let cx_d = &(c * x) + d;
    g.bracket(&gamma.det()) - 2 * g.bracket(&cx_d)
}
