//! Exact arithmetic in F = Q(z): reduced rational functions, grading
//! homomorphisms F^x -> Z with the bracket [.], and the projective line
//! with its Mobius action.

mod poly;

pub use poly::Poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, One};

use crate::error::{Error, Result};

/// An element of Q(z) in canonical form: gcd(num, den) = 1, den monic,
/// zero stored as 0/1. Structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Canonicalize `num / den`. Errors on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (mut num, r) = num.div_rem(&g);
        debug_assert!(r.is_zero());
        let (mut den, r) = den.div_rem(&g);
        debug_assert!(r.is_zero());
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFun { num, den })
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    /// The variable `z`.
    pub fn var() -> Self {
        RatFun {
            num: Poly::var(),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RatFun {
            num: Poly::from_int(n),
            den: Poly::one(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        RatFun {
            num: Poly::constant(q),
            den: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.den.clone(), self.num.clone())
    }

    /// Floating evaluation at `z0`. Errors when `z0` is (numerically) a pole.
    pub fn eval(&self, z0: Complex64) -> Result<Complex64> {
        let d = self.den.eval_c(z0);
        let scale = self.den.coeff_scale() * z0.norm().max(1.0).powi(self.den.degree() as i32);
        if d.norm() <= 1e-12 * scale.max(1.0) {
            return Err(Error::PoleAtEvaluationPoint);
        }
        Ok(self.num.eval_c(z0) / d)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        let num = &self.num * &rhs.num;
        RatFun::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        assert!(!rhs.is_zero(), "division by zero RatFun");
        let num = &self.num * &rhs.den;
        RatFun::new(num, &self.den * &rhs.num).expect("nonzero denominator")
    }
}

impl RatFun {
    pub fn checked_div(&self, rhs: &RatFun) -> Result<RatFun> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }
}

// Deterministic total order used for term display: numerator degree,
// then denominator degree, then coefficient sequences.
impl Ord for RatFun {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .cmp(&other.num)
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::format_ratfun(self))
    }
}

/// A point of P^1(F) = F U {infinity}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(RatFun),
    Infinity,
}

impl ProjPoint {
    pub fn finite(&self) -> Option<&RatFun> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

/// A homomorphism F^x -> Z realized as a valuation (or the trivial map),
/// with the bracket [.] extended by [0] = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradingMap {
    /// Order of vanishing at z = alpha.
    AtPoint(BigRational),
    /// deg(den) - deg(num).
    AtInfinity,
    /// Everything maps to 0.
    Trivial,
}

impl GradingMap {
    pub fn at_int(n: i64) -> Self {
        GradingMap::AtPoint(BigRational::from(BigInt::from(n)))
    }

    /// The bracket [x]: the grading on nonzero x, and 0 at x = 0.
    pub fn bracket(&self, x: &RatFun) -> i64 {
        if x.is_zero() {
            return 0;
        }
        match self {
            GradingMap::AtPoint(alpha) => {
                let n = x.numerator().root_multiplicity(alpha) as i64;
                let d = x.denominator().root_multiplicity(alpha) as i64;
                n - d
            }
            GradingMap::AtInfinity => {
                x.denominator().degree() as i64 - x.numerator().degree() as i64
            }
            GradingMap::Trivial => 0,
        }
    }
}

impl fmt::Display for GradingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingMap::AtPoint(a) => write!(f, "at:{}", a),
            GradingMap::AtInfinity => write!(f, "inf"),
            GradingMap::Trivial => write!(f, "trivial"),
        }
    }
}

/// An invertible 2x2 matrix over F acting on P^1(F) by x -> (ax+b)/(cx+d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap {
    a: RatFun,
    b: RatFun,
    c: RatFun,
    d: RatFun,
}

impl MobiusMap {
    pub fn new(a: RatFun, b: RatFun, c: RatFun, d: RatFun) -> Result<Self> {
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: RatFun::one(),
            b: RatFun::zero(),
            c: RatFun::zero(),
            d: RatFun::one(),
        }
    }

    pub fn entries(&self) -> (&RatFun, &RatFun, &RatFun, &RatFun) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn det(&self) -> RatFun {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        match p {
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(&self.a / &self.c)
                }
            }
            ProjPoint::Finite(x) => {
                let den = &(&self.c * x) + &self.d;
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    let num = &(&self.a * x) + &self.b;
                    ProjPoint::Finite(&num / &den)
                }
            }
        }
    }

    /// The adjugate; acts as the inverse transformation on P^1(F).
    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// Matrix product; (g1 * g2)(x) = g1(g2(x)).
    pub fn compose(&self, rhs: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }
}
