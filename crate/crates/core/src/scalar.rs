//! Exact scalars: rationals and elements of a real quadratic field `Q(sqrt(d))`.
//!
//! A whole computation uses one field, fixed when the input is parsed. Values
//! are kept canonical: rationals in lowest terms with positive denominator
//! (enforced by `BigRational`), and a quadratic value with zero irrational
//! part collapses to the rational variant, so structural equality is numeric
//! equality.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The scalar field of a computation: `Q` or `Q(sqrt(d))` with `d` square-free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Quadratic { d: u64 },
}

impl Field {
    /// A quadratic field `Q(sqrt(d))`; `d` must be >= 2 and square-free.
    pub fn quadratic(d: u64) -> Result<Field, FieldError> {
        if d < 2 {
            return Err(FieldError::NotSquareFree { d });
        }
        let mut p: u64 = 2;
        while p.checked_mul(p).is_some_and(|pp| pp <= d) {
            if d.is_multiple_of(p * p) {
                return Err(FieldError::NotSquareFree { d });
            }
            p += 1;
        }
        Ok(Field::Quadratic { d })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotSquareFree { d: u64 },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotSquareFree { d } => {
                write!(f, "radicand {d} is not a square-free integer >= 2")
            }
        }
    }
}

/// An exact scalar: a rational number or `a + b*sqrt(d)` with `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Quadratic {
        a: BigRational,
        b: BigRational,
        d: u64,
    },
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `p/q` as a scalar; panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rational(r: BigRational) -> Scalar {
        Scalar::Rational(r)
    }

    /// `a + b*sqrt(d)`, collapsing to the rational variant when `b == 0`.
    pub fn quadratic(a: BigRational, b: BigRational, d: u64) -> Scalar {
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::Quadratic { a, b, d }
        }
    }

    /// `b*sqrt(d)` convenience constructor used by tests and fixtures.
    pub fn sqrt_term(b: i64, d: u64) -> Scalar {
        Scalar::quadratic(
            BigRational::zero(),
            BigRational::from_integer(BigInt::from(b)),
            d,
        )
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quadratic { .. } => false,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    /// The radicand this value actually uses, if any.
    pub fn radicand(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Quadratic { d, .. } => Some(*d),
        }
    }

    /// Rational and irrational components `(a, b)` of `a + b*sqrt(d)`.
    pub fn components(&self) -> (BigRational, BigRational) {
        match self {
            Scalar::Rational(r) => (r.clone(), BigRational::zero()),
            Scalar::Quadratic { a, b, .. } => (a.clone(), b.clone()),
        }
    }

    /// Exact sign of the real number, in {-1, 0, +1}.
    ///
    /// For `a + b*sqrt(d)` with mixed signs the sign equals
    /// `sign(a) * sign(a^2 - d*b^2)` because multiplying by the conjugate
    /// `a - b*sqrt(d)` (which has the sign of `a` in the mixed case) keeps
    /// the sign of the product `a^2 - d*b^2`.
    pub fn sign(&self) -> i32 {
        match self {
            Scalar::Rational(r) => rat_sign(r),
            Scalar::Quadratic { a, b, d } => {
                let sa = rat_sign(a);
                let sb = rat_sign(b);
                if sa == sb || sa == 0 {
                    // sa == 0 means pure sqrt term: sign is sign(b)
                    if sa == 0 {
                        sb
                    } else {
                        sa
                    }
                } else if sb == 0 {
                    sa
                } else {
                    let norm = a * a - BigRational::from_integer(BigInt::from(*d)) * b * b;
                    sa * rat_sign(&norm)
                }
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                assert!(!r.is_zero(), "division by zero scalar");
                Scalar::Rational(r.recip())
            }
            Scalar::Quadratic { a, b, d } => {
                // 1/(a+b*sqrt(d)) = (a - b*sqrt(d)) / (a^2 - d*b^2)
                let norm = a * a - BigRational::from_integer(BigInt::from(*d)) * b * b;
                assert!(!norm.is_zero(), "division by zero scalar");
                Scalar::quadratic(a / &norm, -(b / &norm), *d)
            }
        }
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn common_radicand(x: &Scalar, y: &Scalar) -> Option<u64> {
    match (x.radicand(), y.radicand()) {
        (None, None) => None,
        (Some(d), None) | (None, Some(d)) => Some(d),
        (Some(d1), Some(d2)) => {
            assert_eq!(
                d1, d2,
                "scalars from different quadratic fields in one computation"
            );
            Some(d1)
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match common_radicand(self, rhs) {
            None => match (self, rhs) {
                (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
                _ => unreachable!(),
            },
            Some(d) => {
                let (xa, xb) = self.components();
                let (ya, yb) = rhs.components();
                Scalar::quadratic(xa + ya, xb + yb, d)
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic { a, b, d } => Scalar::Quadratic {
                a: -a,
                b: -b,
                d: *d,
            },
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match common_radicand(self, rhs) {
            None => match (self, rhs) {
                (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
                _ => unreachable!(),
            },
            Some(d) => {
                let (xa, xb) = self.components();
                let (ya, yb) = rhs.components();
                let dd = BigRational::from_integer(BigInt::from(d));
                Scalar::quadratic(&xa * &ya + &(&xb * &yb) * &dd, &xa * &yb + &xb * &ya, d)
            }
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

macro_rules! forward_value_binop {
    ($Op:ident, $op:ident) => {
        impl $Op for Scalar {
            type Output = Scalar;
            fn $op(self, rhs: Scalar) -> Scalar {
                (&self).$op(&rhs)
            }
        }
        impl $Op<&Scalar> for Scalar {
            type Output = Scalar;
            fn $op(self, rhs: &Scalar) -> Scalar {
                (&self).$op(rhs)
            }
        }
    };
}
forward_value_binop!(Add, add);
forward_value_binop!(Sub, sub);
forward_value_binop!(Mul, mul);
forward_value_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// Numeric order; both values must live in one field.
    fn cmp(&self, other: &Scalar) -> Ordering {
        match (self - other).sign() {
            0 => Ordering::Equal,
            s if s < 0 => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write_rat(f, r),
            Scalar::Quadratic { a, b, d } => {
                if a.is_zero() {
                    write_sqrt_term(f, b, *d)
                } else {
                    write_rat(f, a)?;
                    if b.is_positive() {
                        write!(f, " + ")?;
                        write_sqrt_term(f, b, *d)
                    } else {
                        write!(f, " - ")?;
                        write_sqrt_term(f, &-b, *d)
                    }
                }
            }
        }
    }
}

fn write_rat(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_sqrt_term(f: &mut fmt::Formatter<'_>, b: &BigRational, d: u64) -> fmt::Result {
    if b.is_one() {
        write!(f, "sqrt({d})")
    } else if (-b).is_one() {
        write!(f, "-sqrt({d})")
    } else {
        write_rat(f, b)?;
        write!(f, "*sqrt({d})")
    }
}

/// Error from [`Scalar::parse`], carrying the byte offset of the problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ScalarParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: &str) -> Result<T, ScalarParseError> {
        Err(ScalarParseError {
            offset: self.pos,
            message: String::from(message),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt, ScalarParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a digit");
        }
        let s = core::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    /// `p` or `p/q`, unsigned.
    fn parse_rational(&mut self) -> Result<BigRational, ScalarParseError> {
        let numer = self.parse_uint()?;
        self.skip_ws();
        if self.eat(b'/') {
            self.skip_ws();
            let denom = self.parse_uint()?;
            if denom.is_zero() {
                return self.err("zero denominator");
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    fn parse_sqrt(&mut self) -> Result<u64, ScalarParseError> {
        for c in b"sqrt" {
            if !self.eat(*c) {
                return self.err("expected sqrt(...)");
            }
        }
        self.skip_ws();
        if !self.eat(b'(') {
            return self.err("expected '(' after sqrt");
        }
        self.skip_ws();
        let d = self.parse_uint()?;
        self.skip_ws();
        if !self.eat(b')') {
            return self.err("expected ')'");
        }
        let d: u64 = match d.try_into() {
            Ok(v) => v,
            Err(_) => return self.err("radicand too large"),
        };
        Ok(d)
    }

    /// One signed term: a rational, `sqrt(d)`, or `rational * sqrt(d)`.
    fn parse_term(&mut self) -> Result<(BigRational, Option<u64>), ScalarParseError> {
        let mut sign = BigRational::one();
        self.skip_ws();
        if self.eat(b'-') {
            sign = -sign;
        } else {
            let _ = self.eat(b'+');
        }
        self.skip_ws();
        match self.peek() {
            Some(b's') => {
                let d = self.parse_sqrt()?;
                Ok((sign, Some(d)))
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.parse_rational()?;
                self.skip_ws();
                if self.eat(b'*') {
                    self.skip_ws();
                    let d = self.parse_sqrt()?;
                    Ok((sign * r, Some(d)))
                } else {
                    Ok((sign * r, None))
                }
            }
            _ => self.err("expected a number or sqrt(...)"),
        }
    }
}

impl Scalar {
    /// Parse the textual scalar form used by every file format.
    ///
    /// Rationals are `"p"` or `"p/q"`; quadratic values are a sum of an
    /// optional rational term and an optional `c*sqrt(d)` term, e.g.
    /// `"1/2 - 2/3*sqrt(3)"`. Whitespace is insignificant and parsing
    /// round-trips with `Display` exactly.
    pub fn parse(input: &str, field: Field) -> Result<Scalar, ScalarParseError> {
        let mut p = Parser {
            bytes: input.as_bytes(),
            pos: 0,
        };
        let mut rat = BigRational::zero();
        let mut irr = BigRational::zero();
        let mut radicand: Option<u64> = None;
        let mut terms = 0usize;
        loop {
            let (coeff, d) = p.parse_term()?;
            terms += 1;
            if terms > 2 {
                return p.err("too many terms");
            }
            match d {
                None => rat += coeff,
                Some(d) => {
                    match field {
                        Field::Rational => {
                            return p.err("sqrt term not allowed in a rational-field document")
                        }
                        Field::Quadratic { d: fd } if fd != d => {
                            return p.err("radicand differs from the document field")
                        }
                        _ => {}
                    }
                    if radicand.replace(d).is_some() {
                        return p.err("more than one sqrt term");
                    }
                    irr += coeff;
                }
            }
            p.skip_ws();
            match p.peek() {
                None => break,
                Some(b'+') | Some(b'-') => continue,
                Some(_) => return p.err("unexpected trailing input"),
            }
        }
        match radicand {
            None => Ok(Scalar::Rational(rat)),
            Some(d) => Ok(Scalar::quadratic(rat, irr, d)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, q_: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q_))
    }

    #[test]
    fn sign_of_zero_and_rationals() {
        assert_eq!(Scalar::zero().sign(), 0);
        assert_eq!(Scalar::from_ratio(5, 2).sign(), 1);
        assert_eq!(Scalar::from_ratio(-5, 2).sign(), -1);
    }

    #[test]
    fn sign_of_mixed_quadratic() {
        // 1 - (2/3)*sqrt(3): compare 1 against 3*(2/3)^2 = 4/3, so negative.
        let x = Scalar::quadratic(q(1, 1), q(-2, 3), 3);
        assert_eq!(x.sign(), -1);
        // 2 - sqrt(3) > 0
        let y = Scalar::quadratic(q(2, 1), q(-1, 1), 3);
        assert_eq!(y.sign(), 1);
        // -sqrt(5) < 0
        assert_eq!(Scalar::sqrt_term(-1, 5).sign(), -1);
    }

    #[test]
    fn quadratic_multiplication_rule() {
        // (1 + sqrt(2)) * (3 - 2*sqrt(2)) = 3 - 4 + (3 - 2)sqrt(2) = -1 + sqrt(2)
        let x = Scalar::quadratic(q(1, 1), q(1, 1), 2);
        let y = Scalar::quadratic(q(3, 1), q(-2, 1), 2);
        assert_eq!(&x * &y, Scalar::quadratic(q(-1, 1), q(1, 1), 2));
    }

    #[test]
    fn quadratic_collapses_to_rational() {
        let x = Scalar::quadratic(q(1, 1), q(1, 1), 2);
        let y = Scalar::quadratic(q(1, 1), q(-1, 1), 2);
        assert_eq!(&x + &y, Scalar::from_int(2));
        assert!((&x + &y).is_rational());
    }

    #[test]
    fn division_round_trips() {
        let x = Scalar::quadratic(q(5, 3), q(-7, 2), 11);
        let y = Scalar::quadratic(q(1, 2), q(2, 1), 11);
        let z = &(&x / &y) * &y;
        assert_eq!(z, x);
    }

    #[test]
    fn parse_rationals() {
        let f = Field::Rational;
        assert_eq!(Scalar::parse("5", f).unwrap(), Scalar::from_int(5));
        assert_eq!(
            Scalar::parse("-5/10", f).unwrap(),
            Scalar::from_ratio(-1, 2)
        );
        assert_eq!(
            Scalar::parse("  7 / 3 ", f).unwrap(),
            Scalar::from_ratio(7, 3)
        );
        assert!(Scalar::parse("1/0", f).is_err());
        assert!(Scalar::parse("sqrt(2)", f).is_err());
        assert!(Scalar::parse("", f).is_err());
        assert!(Scalar::parse("1 + 2 + 3", f).is_err());
    }

    #[test]
    fn parse_quadratics() {
        let f = Field::quadratic(3).unwrap();
        assert_eq!(
            Scalar::parse("sqrt(3)", f).unwrap(),
            Scalar::sqrt_term(1, 3)
        );
        assert_eq!(
            Scalar::parse("-sqrt(3)", f).unwrap(),
            Scalar::sqrt_term(-1, 3)
        );
        assert_eq!(
            Scalar::parse("1/2 - 2/3 * sqrt(3)", f).unwrap(),
            Scalar::quadratic(q(1, 2), q(-2, 3), 3)
        );
        assert_eq!(
            Scalar::parse("-2/3*sqrt(3) + 1/2", f).unwrap(),
            Scalar::quadratic(q(1, 2), q(-2, 3), 3)
        );
        assert!(Scalar::parse("sqrt(2)", f).is_err());
        assert!(Scalar::parse("sqrt(3) + sqrt(3)", f).is_err());
    }

    #[test]
    fn field_validation() {
        assert!(Field::quadratic(3).is_ok());
        assert!(Field::quadratic(10).is_ok());
        assert!(Field::quadratic(4).is_err());
        assert!(Field::quadratic(12).is_err());
        assert!(Field::quadratic(1).is_err());
        assert!(Field::quadratic(0).is_err());
    }

    #[test]
    fn parse_error_offsets() {
        let e = Scalar::parse("1/2 + wat", Field::Rational).unwrap_err();
        assert_eq!(e.offset, 6);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (
            any::<i32>(),
            1u32..200,
            any::<i32>(),
            1u32..200,
            prop::bool::ANY,
        )
            .prop_map(|(an, ad, bn, bd, quad)| {
                let a = q(an as i64, ad as i64);
                if quad {
                    Scalar::quadratic(a, q(bn as i64, bd as i64), 5)
                } else {
                    Scalar::Rational(a)
                }
            })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(x in arb_scalar()) {
            let s = alloc::format!("{x}");
            let field = Field::quadratic(5).unwrap();
            let back = Scalar::parse(&s, field).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn sign_is_multiplicative(x in arb_scalar(), y in arb_scalar()) {
            prop_assert_eq!((&x * &y).sign(), x.sign() * y.sign());
        }

        #[test]
        fn cmp_matches_difference_sign(x in arb_scalar(), y in arb_scalar()) {
            let ord = x.cmp(&y);
            let s = (&x - &y).sign();
            prop_assert_eq!(ord == core::cmp::Ordering::Less, s < 0);
            prop_assert_eq!(ord == core::cmp::Ordering::Equal, s == 0);
        }
    }
}
