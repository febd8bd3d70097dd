//! Text grammar for rational functions, algebra expressions and matrices:
//! canonical formatters plus hand-written recursive-descent parsers with
//! byte-accurate error offsets.
//!
//! Rational functions: integers, the variable `z`, `+ - * / ^`, parens.
//! Expressions: integer-coefficient sums of words `e[<ratfun>]...`.
//! H-expressions: the same with letters `y[k,<ratfun>]`.
//! Matrices: `a,b;c,d` with rational-function entries.

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ncalgebra::{NcPoly, Word};
use crate::products::{HLetter, HPoly, HWord};
use crate::ratfield::{GradingMap, MobiusMap, Poly, RatFun};

// ---------------------------------------------------------------------------
// Formatting

fn monomial_string(c: &BigRational, k: usize) -> String {
    if k == 0 {
        return c.to_string();
    }
    let var = if k == 1 {
        "z".to_string()
    } else {
        format!("z^{}", k)
    };
    if c.is_one() {
        var
    } else if (-c).is_one() {
        format!("-{}", var)
    } else {
        format!("{}*{}", c, var)
    }
}

fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            out.push_str(&monomial_string(c, k));
        } else if c.is_negative() {
            out.push_str(" - ");
            out.push_str(&monomial_string(&-c, k));
        } else {
            out.push_str(" + ");
            out.push_str(&monomial_string(c, k));
        }
    }
    out
}

/// True when the polynomial renders as a single product-free token chain
/// that binds tighter than `/`: a positive integer or a power `z^k`.
fn safe_denominator(p: &Poly) -> bool {
    let nonzero: Vec<_> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    match nonzero.as_slice() {
        [(0, c)] => c.is_positive() && c.is_integer(),
        [(_, c)] => c.is_one(),
        _ => false,
    }
}

/// True when the polynomial is a single monomial with positive coefficient,
/// so it can prefix `/` without parentheses.
fn safe_numerator(p: &Poly) -> bool {
    let nonzero: Vec<_> = p.coeffs().iter().filter(|c| !c.is_zero()).collect();
    nonzero.len() == 1 && nonzero[0].is_positive()
}

/// Canonical text for a rational function; `parse_ratfun` inverts it.
pub fn format_ratfun(f: &RatFun) -> String {
    if f.denominator().is_one() {
        return format_poly(f.numerator());
    }
    let num = if safe_numerator(f.numerator()) {
        format_poly(f.numerator())
    } else {
        format!("({})", format_poly(f.numerator()))
    };
    let den = if safe_denominator(f.denominator()) {
        format_poly(f.denominator())
    } else {
        format!("({})", format_poly(f.denominator()))
    };
    format!("{}/{}", num, den)
}

fn format_word(w: &Word) -> String {
    w.letters()
        .iter()
        .map(|l| format!("e[{}]", format_ratfun(l)))
        .collect()
}

fn join_terms(pieces: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (negative, body) in pieces {
        if out.is_empty() {
            if negative {
                out.push('-');
            }
            out.push_str(&body);
        } else {
            out.push_str(if negative { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    out
}

/// Canonical text for an algebra element, terms in descending canonical
/// word order; `parse_expr` inverts it.
pub fn format_expr(a: &NcPoly) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<_> = a.terms().collect();
    let pieces = terms
        .into_iter()
        .rev()
        .map(|(w, c)| {
            let mag = c.abs();
            let body = if w.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                format_word(w)
            } else {
                format!("{}*{}", mag, format_word(w))
            };
            (c.is_negative(), body)
        })
        .collect();
    join_terms(pieces)
}

/// Canonical text for an h^1 element; `parse_hexpr` inverts it.
pub fn format_hexpr(a: &HPoly) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<_> = a.terms().collect();
    let pieces = terms
        .into_iter()
        .rev()
        .map(|(w, c)| {
            let mag = c.abs();
            let word: String = w
                .0
                .iter()
                .map(|l| format!("y[{},{}]", l.k, format_ratfun(&l.a)))
                .collect();
            let body = if w.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                word
            } else {
                format!("{}*{}", mag, word)
            };
            (c.is_negative(), body)
        })
        .collect();
    join_terms(pieces)
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::SyntaxError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected '{}'", c as char)),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer");
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    // ratfun := sum; sum := product (('+'|'-') product)*
    fn ratfun(&mut self) -> Result<RatFun> {
        let mut acc = self.rat_product()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.rat_product()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.rat_product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    // product := unary (('*'|'/') unary)*
    fn rat_product(&mut self) -> Result<RatFun> {
        let mut acc = self.rat_unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.rat_unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let rhs = self.rat_unary()?;
                if rhs.is_zero() {
                    return Err(Error::ZeroDenominator).map_err(|_| Error::SyntaxError {
                        offset: at,
                        message: "division by zero".into(),
                    });
                }
                acc = &acc / &rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    // unary := '-' unary | power; power := atom ('^' integer)?
    fn rat_unary(&mut self) -> Result<RatFun> {
        if self.eat(b'-') {
            return Ok(-&self.rat_unary()?);
        }
        let base = self.rat_atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let exp = self.integer()?;
            let exp: u32 = match exp.try_into() {
                Ok(e) => e,
                Err(_) => {
                    return Err(Error::SyntaxError {
                        offset: at,
                        message: "exponent too large".into(),
                    })
                }
            };
            let mut acc = RatFun::one();
            for _ in 0..exp {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn rat_atom(&mut self) -> Result<RatFun> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(RatFun::var())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.ratfun()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFun::from_rational(BigRational::from(n)))
            }
            _ => self.err("expected 'z', an integer, or '('"),
        }
    }

    // expr := ['-'] exprterm (('+'|'-') exprterm)*
    fn expr(&mut self) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            let (w, c) = self.expr_term()?;
            out.add_term(w, c * BigInt::from(sign));
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(out);
            }
        }
    }

    // exprterm := integer ['*' word] | word
    fn expr_term(&mut self) -> Result<(Word, BigInt)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.integer()?;
                if self.eat(b'*') {
                    Ok((self.word()?, coeff))
                } else {
                    Ok((Word::empty(), coeff))
                }
            }
            Some(b'e') => Ok((self.word()?, BigInt::one())),
            _ => self.err("expected an integer or a word"),
        }
    }

    // word := ('e' '[' ratfun ']')+
    fn word(&mut self) -> Result<Word> {
        let mut letters = Vec::new();
        while self.peek() == Some(b'e') {
            self.pos += 1;
            self.expect(b'[')?;
            letters.push(self.ratfun()?);
            self.expect(b']')?;
        }
        if letters.is_empty() {
            return self.err("expected a word");
        }
        Ok(Word(letters))
    }

    fn hexpr(&mut self) -> Result<HPoly> {
        let mut out = HPoly::zero();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            let (w, c) = self.hexpr_term()?;
            out.add_term(w, c * BigInt::from(sign));
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(out);
            }
        }
    }

    fn hexpr_term(&mut self) -> Result<(HWord, BigInt)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.integer()?;
                if self.eat(b'*') {
                    Ok((self.hword()?, coeff))
                } else {
                    Ok((HWord::empty(), coeff))
                }
            }
            Some(b'y') => Ok((self.hword()?, BigInt::one())),
            _ => self.err("expected an integer or a word"),
        }
    }

    // hword := ('y' '[' integer ',' ratfun ']')+
    fn hword(&mut self) -> Result<HWord> {
        let mut letters = Vec::new();
        while self.peek() == Some(b'y') {
            self.pos += 1;
            self.expect(b'[')?;
            let at = self.pos;
            let k = self.integer()?;
            let k: u32 = match k.try_into() {
                Ok(k) if k >= 1 => k,
                _ => {
                    return Err(Error::SyntaxError {
                        offset: at,
                        message: "weight k must be a positive integer".into(),
                    })
                }
            };
            self.expect(b',')?;
            let at = self.pos;
            let a = self.ratfun()?;
            if a.is_zero() {
                return Err(Error::SyntaxError {
                    offset: at,
                    message: "letter y[k,a] requires a != 0".into(),
                });
            }
            self.expect(b']')?;
            letters.push(HLetter::new(k, a));
        }
        if letters.is_empty() {
            return self.err("expected a word");
        }
        Ok(HWord(letters))
    }

    fn finish<T>(&mut self, value: T) -> Result<T> {
        if self.at_end() {
            Ok(value)
        } else {
            self.err("unexpected trailing input")
        }
    }
}

/// Parse a rational function.
pub fn parse_ratfun(text: &str) -> Result<RatFun> {
    let mut p = Parser::new(text);
    let v = p.ratfun()?;
    p.finish(v)
}

/// Parse an algebra expression.
pub fn parse_expr(text: &str) -> Result<NcPoly> {
    let mut p = Parser::new(text);
    let v = p.expr()?;
    p.finish(v)
}

/// Parse an h^1 expression.
pub fn parse_hexpr(text: &str) -> Result<HPoly> {
    let mut p = Parser::new(text);
    let v = p.hexpr()?;
    p.finish(v)
}

/// Parse a matrix `a,b;c,d` with rational-function entries.
pub fn parse_mobius(text: &str) -> Result<MobiusMap> {
    let offset_err = |message: &str| Error::SyntaxError {
        offset: 0,
        message: message.into(),
    };
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 2 {
        return Err(offset_err("expected two rows separated by ';'"));
    }
    let mut entries = Vec::with_capacity(4);
    let mut base = 0;
    for row in &rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 2 {
            return Err(offset_err("expected two entries per row separated by ','"));
        }
        for cell in cells {
            entries.push(parse_ratfun(cell).map_err(|e| match e {
                Error::SyntaxError { offset, message } => Error::SyntaxError {
                    offset: base + offset,
                    message,
                },
                other => other,
            })?);
            base += cell.len() + 1;
        }
    }
    let d = entries.pop().unwrap();
    let c = entries.pop().unwrap();
    let b = entries.pop().unwrap();
    let a = entries.pop().unwrap();
    MobiusMap::new(a, b, c, d)
}

/// Parse a grading descriptor: `at:<rational>`, `inf`, or `trivial`.
pub fn parse_grading(text: &str) -> Result<GradingMap> {
    let text = text.trim();
    if text == "inf" {
        return Ok(GradingMap::AtInfinity);
    }
    if text == "trivial" {
        return Ok(GradingMap::Trivial);
    }
    if let Some(rest) = text.strip_prefix("at:") {
        let alpha: BigRational = rest.trim().parse().map_err(|_| Error::SyntaxError {
            offset: 3,
            message: "expected a rational number after 'at:'".into(),
        })?;
        return Ok(GradingMap::AtPoint(alpha));
    }
    Err(Error::SyntaxError {
        offset: 0,
        message: "expected 'at:<rational>', 'inf', or 'trivial'".into(),
    })
}

/// Parse a complex number: `-1`, `2.5`, `0.5+0.5i`, `-1.5i`, `i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    let bad = || Error::SyntaxError {
        offset: 0,
        message: format!("invalid complex number '{}'", s),
    };
    if s.is_empty() {
        return Err(bad());
    }
    let bytes = s.as_bytes();
    let mut split = None;
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-')
            && !matches!(bytes[i - 1], b'e' | b'E')
        {
            split = Some(i);
        }
    }
    let part = |p: &str, imag: bool| -> Result<f64> {
        let p = if imag {
            p.strip_suffix('i').ok_or_else(bad)?
        } else {
            p
        };
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => Ok(Complex64::new(part(&s[..i], false)?, part(&s[i..], true)?)),
        None => {
            if s.ends_with('i') {
                Ok(Complex64::new(0.0, part(s, true)?))
            } else {
                Ok(Complex64::new(part(s, false)?, 0.0))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(n: i64) -> RatFun {
        RatFun::from_int(n)
    }

    #[test]
    fn ratfun_examples() {
        let z = RatFun::var();
        assert_eq!(parse_ratfun("(z-1)/z").unwrap(), &(&z - &rf(1)) / &z);
        assert_eq!(parse_ratfun("z^2+1").unwrap(), &(&z * &z) + &rf(1));
        assert_eq!(parse_ratfun("-3").unwrap(), rf(-3));
        assert_eq!(parse_ratfun("1/2*z").unwrap(), &z / &rf(2));
        assert_eq!(
            parse_ratfun("1/0"),
            Err(Error::SyntaxError {
                offset: 2,
                message: "division by zero".into()
            })
        );
        assert!(matches!(
            parse_ratfun("z +"),
            Err(Error::SyntaxError { offset: 3, .. })
        ));
    }

    #[test]
    fn expr_examples() {
        let e1e0 = NcPoly::from_word(Word(vec![rf(1), rf(0)]));
        assert_eq!(parse_expr("e[1]e[0]").unwrap(), e1e0);
        let a = parse_expr("2*e[z] - e[(z-1)/z]").unwrap();
        let mut expect = NcPoly::letter(RatFun::var()).scale_i64(2);
        expect = &expect - &NcPoly::letter(&(&RatFun::var() - &rf(1)) / &RatFun::var());
        assert_eq!(a, expect);
        assert_eq!(parse_expr("0").unwrap(), NcPoly::zero());
        assert_eq!(parse_expr("-2").unwrap(), NcPoly::one().scale_i64(-2));
        assert!(matches!(
            parse_expr("e[1/0]"),
            Err(Error::SyntaxError { .. })
        ));
        assert!(matches!(parse_expr("e[1]?"), Err(Error::SyntaxError { .. })));
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_expr(&NcPoly::zero()), "0");
        let z = RatFun::var();
        let a = &NcPoly::from_word(Word(vec![z.clone(), z.clone()]))
            - &NcPoly::from_word(Word(vec![z.clone(), rf(0)]));
        assert_eq!(format_expr(&a), "e[z]e[z] - e[z]e[0]");
        let tau = crate::transforms::tau_z(&NcPoly::from_word(Word(vec![rf(1), rf(0)]))).unwrap();
        assert_eq!(
            format_expr(&tau),
            "e[z]e[z] - e[z]e[0] - e[1]e[z] + e[1]e[0]"
        );
    }

    #[test]
    fn hexpr_examples() {
        let h = parse_hexpr("y[2,1]y[1,-1]").unwrap();
        let w = HWord(vec![HLetter::new(2, rf(1)), HLetter::new(1, rf(-1))]);
        assert_eq!(h, HPoly::from_word(w));
        assert_eq!(parse_hexpr(&format_hexpr(&h)).unwrap(), h);
        assert!(matches!(
            parse_hexpr("y[0,1]"),
            Err(Error::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_hexpr("y[1,0]"),
            Err(Error::SyntaxError { .. })
        ));
    }

    #[test]
    fn mobius_examples() {
        let m = parse_mobius("z,-z;1,-z").unwrap();
        assert_eq!(m, crate::transforms::gamma_z());
        assert_eq!(parse_mobius("1,1;1,1"), Err(Error::SingularMatrix));
        assert!(matches!(parse_mobius("1,2,3;4"), Err(Error::SyntaxError { .. })));
    }

    #[test]
    fn grading_examples() {
        assert_eq!(parse_grading("inf").unwrap(), GradingMap::AtInfinity);
        assert_eq!(parse_grading("trivial").unwrap(), GradingMap::Trivial);
        assert_eq!(parse_grading("at:0").unwrap(), GradingMap::at_int(0));
        assert_eq!(
            parse_grading("at:1/2").unwrap(),
            GradingMap::AtPoint("1/2".parse().unwrap())
        );
        assert!(parse_grading("at:z").is_err());
    }

    #[test]
    fn complex_examples() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(parse_complex("0.5+0.5i").unwrap(), c(0.5, 0.5));
        assert_eq!(parse_complex("-1.5i").unwrap(), c(0.0, -1.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1e-3").unwrap(), c(1e-3, 0.0));
        assert!(parse_complex("nope").is_err());
    }

    fn arb_ratfun() -> impl Strategy<Value = RatFun> {
        (
            prop::collection::vec(-9i64..=9, 1..4),
            prop::collection::vec(-9i64..=9, 1..4),
        )
            .prop_filter_map("zero denominator", |(n, d)| {
                let int = |x: i64| BigRational::from_integer(BigInt::from(x));
                let num = Poly::new(n.into_iter().map(int).collect());
                let den = Poly::new(d.into_iter().map(int).collect());
                if den.is_zero() {
                    None
                } else {
                    Some(RatFun::new(num, den).unwrap())
                }
            })
    }

    proptest! {
        #[test]
        fn ratfun_round_trip(f in arb_ratfun()) {
            let text = format_ratfun(&f);
            prop_assert_eq!(parse_ratfun(&text).unwrap(), f);
        }

        #[test]
        fn expr_round_trip(
            terms in prop::collection::vec(
                (prop::collection::vec(0u8..3, 0..4), -5i64..=5),
                0..5,
            )
        ) {
            let mut a = NcPoly::zero();
            for (letters, c) in terms {
                let w = Word(
                    letters
                        .into_iter()
                        .map(|l| match l {
                            0 => RatFun::from_int(0),
                            1 => RatFun::from_int(1),
                            _ => RatFun::var(),
                        })
                        .collect(),
                );
                a.add_term(w, BigInt::from(c));
            }
            let text = format_expr(&a);
            prop_assert_eq!(parse_expr(&text).unwrap(), a);
        }
    }
}
