//! Exact scalars: arbitrary-precision rationals and polar values whose
//! phase is a rational fraction of a full turn.
//!
//! Phases are kept in turns (1 turn = 2π) rather than radians so that the
//! phases occurring in rank-one completions stay exact rationals; π never
//! appears numerically.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Small rational constant `n/d`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, an integer, or a plain decimal literal into an exact rational.
///
/// Decimal literals convert exactly: `1.1718` becomes `5859/5000`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return None;
        }
        let mut digits = String::with_capacity(int_digits.len() + frac_part.len());
        digits.push_str(int_digits);
        digits.push_str(frac_part);
        if digits.is_empty() {
            return None;
        }
        let numer: BigInt = digits.parse().ok()?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Some(Rational::new(BigInt::from(sign) * numer, denom));
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    match x.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            // Too large for f64: take the top 64 bits and scale by 2^shift.
            let bits = x.bits();
            let shift = bits - 64;
            let top = (x >> shift).to_f64().expect("64-bit value fits f64");
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Natural log of a strictly positive rational, robust to huge numerators.
pub fn rational_ln(r: &Rational) -> f64 {
    assert!(r.is_positive(), "rational_ln requires a positive argument");
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// `f64` value of a rational (may round).
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let s = if r.is_negative() { -1.0 } else { 1.0 };
        s * (ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())).exp()
    })
}

/// `r^e` for a signed big-integer exponent; `r` must be nonzero.
pub fn rational_pow(r: &Rational, e: &BigInt) -> Rational {
    assert!(!r.is_zero());
    let exp = e
        .magnitude()
        .to_u64()
        .expect("exponent magnitude fits u64");
    let base = if e.is_negative() { r.recip() } else { r.clone() };
    let mut acc = Rational::one();
    let mut sq = base;
    let mut k = exp;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &sq;
        }
        k >>= 1;
        if k > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// An angle in turns, reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseTurns(Rational);

impl PhaseTurns {
    /// Reduces an arbitrary rational angle into `[0, 1)`.
    pub fn new(turns: Rational) -> Self {
        let f = turns.floor();
        PhaseTurns(turns - f)
    }

    pub fn zero() -> Self {
        PhaseTurns(Rational::zero())
    }

    /// Half a turn, i.e. multiplication by −1.
    pub fn half() -> Self {
        PhaseTurns(rat(1, 2))
    }

    pub fn as_turns(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True for phases 0 and 1/2: the value lies on the real axis.
    pub fn is_real(&self) -> bool {
        self.0.is_zero() || self.0 == rat(1, 2)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }
}

impl Add for &PhaseTurns {
    type Output = PhaseTurns;
    fn add(self, rhs: &PhaseTurns) -> PhaseTurns {
        PhaseTurns::new(&self.0 + &rhs.0)
    }
}

impl Sub for &PhaseTurns {
    type Output = PhaseTurns;
    fn sub(self, rhs: &PhaseTurns) -> PhaseTurns {
        PhaseTurns::new(&self.0 - &rhs.0)
    }
}

impl Neg for &PhaseTurns {
    type Output = PhaseTurns;
    fn neg(self) -> PhaseTurns {
        PhaseTurns::new(-&self.0)
    }
}

impl fmt::Display for PhaseTurns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl fmt::Debug for PhaseTurns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A nonzero complex value in polar form with exact magnitude and phase.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolarScalar {
    magnitude: Rational,
    phase: PhaseTurns,
}

impl PolarScalar {
    /// Builds a polar scalar; the magnitude must be strictly positive.
    pub fn new(magnitude: Rational, phase: PhaseTurns) -> Option<Self> {
        magnitude
            .is_positive()
            .then_some(PolarScalar { magnitude, phase })
    }

    pub fn one() -> Self {
        PolarScalar {
            magnitude: Rational::one(),
            phase: PhaseTurns::zero(),
        }
    }

    /// A signed real as a polar value; zero yields `None`.
    pub fn from_real(value: &Rational) -> Option<Self> {
        if value.is_zero() {
            None
        } else if value.is_positive() {
            PolarScalar::new(value.clone(), PhaseTurns::zero())
        } else {
            PolarScalar::new(-value, PhaseTurns::half())
        }
    }

    pub fn magnitude(&self) -> &Rational {
        &self.magnitude
    }

    pub fn phase(&self) -> &PhaseTurns {
        &self.phase
    }

    pub fn is_real(&self) -> bool {
        self.phase.is_real()
    }

    /// The signed rational value when the phase is 0 or 1/2.
    pub fn as_signed_real(&self) -> Option<Rational> {
        if self.phase.is_zero() {
            Some(self.magnitude.clone())
        } else if self.phase.is_real() {
            Some(-&self.magnitude)
        } else {
            None
        }
    }

    pub fn conjugate(&self) -> Self {
        PolarScalar {
            magnitude: self.magnitude.clone(),
            phase: -&self.phase,
        }
    }
}

impl fmt::Display for PolarScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase.is_zero() {
            write!(f, "{}", format_rational(&self.magnitude))
        } else if self.phase.is_real() {
            write!(f, "-{}", format_rational(&self.magnitude))
        } else {
            write!(
                f,
                "{}@{}",
                format_rational(&self.magnitude),
                format_rational(self.phase.as_turns())
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-7"), Some(rat_int(-7)));
        assert_eq!(parse_rational("1.1718"), Some(rat(11718, 10000)));
        assert_eq!(parse_rational("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("2/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1.2.3"), None);
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&rat(-8, 2)), "-4");
    }

    #[test]
    fn phase_reduces_into_unit_interval() {
        assert_eq!(PhaseTurns::new(rat(7, 3)).as_turns(), &rat(1, 3));
        assert_eq!(PhaseTurns::new(rat(-1, 4)).as_turns(), &rat(3, 4));
        assert!(PhaseTurns::new(rat_int(5)).is_zero());
        assert!(PhaseTurns::half().is_real());
        assert!(!PhaseTurns::new(rat(1, 3)).is_real());
    }

    #[test]
    fn phase_arithmetic_is_exact() {
        let a = PhaseTurns::new(rat(2, 3));
        let b = PhaseTurns::new(rat(2, 3));
        assert_eq!((&a + &b).as_turns(), &rat(1, 3));
        assert_eq!((-&a).as_turns(), &rat(1, 3));
    }

    #[test]
    fn polar_rejects_nonpositive_magnitude() {
        assert!(PolarScalar::new(rat_int(0), PhaseTurns::zero()).is_none());
        assert!(PolarScalar::new(rat_int(-1), PhaseTurns::zero()).is_none());
        assert!(PolarScalar::from_real(&rat_int(0)).is_none());
    }

    #[test]
    fn negative_reals_get_half_turn() {
        let v = PolarScalar::from_real(&rat_int(-3)).unwrap();
        assert_eq!(v.magnitude(), &rat_int(3));
        assert_eq!(v.phase(), &PhaseTurns::half());
        assert_eq!(v.as_signed_real(), Some(rat_int(-3)));
    }

    #[test]
    fn rational_ln_handles_huge_values() {
        let big = Rational::from_integer(BigInt::from(2).pow(4000));
        let ln = rational_ln(&big);
        assert!((ln - 4000.0 * std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn rational_pow_signed_exponents() {
        assert_eq!(rational_pow(&rat(2, 3), &BigInt::from(3)), rat(8, 27));
        assert_eq!(rational_pow(&rat(2, 3), &BigInt::from(-2)), rat(9, 4));
        assert_eq!(rational_pow(&rat(5, 7), &BigInt::from(0)), rat_int(1));
    }
}
