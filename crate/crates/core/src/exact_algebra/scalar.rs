//! Elements of ℚ and of real quadratic fields ℚ(√d).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// `rational + surd·√disc` with `disc` square-free.
///
/// `disc == 0` marks a pure rational; the surd part is then zero. Values
/// from two different nonzero discriminants never meet in this crate, and
/// mixing them in arithmetic panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    rational: BigRational,
    surd: BigRational,
    disc: u32,
}

fn is_square_free(d: u32) -> bool {
    let mut k = 2u32;
    while k.saturating_mul(k) <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn join_disc(a: u32, b: u32) -> u32 {
    match (a, b) {
        (0, d) | (d, 0) => d,
        (a, b) if a == b => a,
        (a, b) => panic!("scalars from incompatible fields Q(sqrt({a})) and Q(sqrt({b}))"),
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `num/den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactScalar { rational: r, surd: BigRational::zero(), disc: 0 }
    }

    /// `a + b·√d`. Rejects discriminants that are not square-free.
    pub fn quadratic(a: BigRational, b: BigRational, d: u32) -> Result<Self, AlgebraError> {
        if d == 0 || d == 1 {
            let r = if d == 1 { a + b } else { a };
            return Ok(Self::from_rational(r));
        }
        if !is_square_free(d) {
            return Err(AlgebraError::NotSquareFree(d));
        }
        Ok(ExactScalar { rational: a, surd: b, disc: d }.normalized())
    }

    /// `√d` itself.
    pub fn sqrt_of(d: u32) -> Result<Self, AlgebraError> {
        Self::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    fn normalized(mut self) -> Self {
        if self.surd.is_zero() {
            self.disc = 0;
        }
        self
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn discriminant(&self) -> u32 {
        self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.surd.is_zero() && self.rational.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.disc == 0
    }

    /// The value as a rational, if it is one.
    pub fn to_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn to_i64(&self) -> Option<i64> {
        let r = self.to_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Galois conjugate `a − b√d`.
    pub fn conjugate(&self) -> Self {
        ExactScalar { rational: self.rational.clone(), surd: -&self.surd, disc: self.disc }
    }

    /// Field norm `a² − d·b²` (a rational).
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(BigInt::from(self.disc));
        &self.rational * &self.rational - d * &self.surd * &self.surd
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.surd.is_zero() {
            return Some(Self::from_rational(self.rational.recip()));
        }
        let n = self.norm();
        Some(
            ExactScalar {
                rational: &self.rational / &n,
                surd: -(&self.surd / &n),
                disc: self.disc,
            }
            .normalized(),
        )
    }

    /// Sign under the real embedding with `√d > 0`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rational);
        let sb = sign_of(&self.surd);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with d·b²
        let lhs = &self.rational * &self.rational;
        let rhs = BigRational::from_integer(BigInt::from(self.disc)) * &self.surd * &self.surd;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Approximate value; only for diagnostics.
    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        let b = self.surd.to_f64().unwrap_or(f64::NAN);
        a + b * (self.disc as f64).sqrt()
    }

    /// Canonical text: `3`, `-1/2`, `(1/4 + 1/4*sqrt(5))`, `(-sqrt(5))`.
    pub fn to_text(&self) -> String {
        if self.surd.is_zero() {
            return fmt_rational(&self.rational);
        }
        let surd = if self.surd.abs().is_one() {
            format!("sqrt({})", self.disc)
        } else {
            format!("{}*sqrt({})", fmt_rational(&self.surd.abs()), self.disc)
        };
        if self.rational.is_zero() {
            if self.surd.is_negative() {
                format!("(-{surd})")
            } else {
                format!("({surd})")
            }
        } else {
            let op = if self.surd.is_negative() { '-' } else { '+' };
            format!("({} {op} {surd})", fmt_rational(&self.rational))
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_i64(v)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(v: BigRational) -> Self {
        Self::from_rational(v)
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order under the fixed real embedding.
impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.disc != 0 && other.disc != 0 && self.disc != other.disc {
            return self.disc.cmp(&other.disc);
        }
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        if rhs.surd.is_zero() {
            return ExactScalar {
                rational: &self.rational + &rhs.rational,
                surd: self.surd.clone(),
                disc: self.disc,
            };
        }
        let disc = join_disc(self.disc, rhs.disc);
        ExactScalar {
            rational: &self.rational + &rhs.rational,
            surd: &self.surd + &rhs.surd,
            disc,
        }
        .normalized()
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        if rhs.surd.is_zero() {
            return ExactScalar {
                rational: &self.rational - &rhs.rational,
                surd: self.surd.clone(),
                disc: self.disc,
            };
        }
        let disc = join_disc(self.disc, rhs.disc);
        ExactScalar {
            rational: &self.rational - &rhs.rational,
            surd: &self.surd - &rhs.surd,
            disc,
        }
        .normalized()
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        match (self.surd.is_zero(), rhs.surd.is_zero()) {
            (true, true) => ExactScalar::from_rational(&self.rational * &rhs.rational),
            (true, false) => ExactScalar {
                rational: &self.rational * &rhs.rational,
                surd: &self.rational * &rhs.surd,
                disc: rhs.disc,
            }
            .normalized(),
            (false, true) => ExactScalar {
                rational: &self.rational * &rhs.rational,
                surd: &self.surd * &rhs.rational,
                disc: self.disc,
            }
            .normalized(),
            (false, false) => {
                let disc = join_disc(self.disc, rhs.disc);
                let d = BigRational::from_integer(BigInt::from(disc));
                ExactScalar {
                    rational: &self.rational * &rhs.rational + d * &self.surd * &rhs.surd,
                    surd: &self.rational * &rhs.surd + &self.surd * &rhs.rational,
                    disc,
                }
                .normalized()
            }
        }
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { rational: -&self.rational, surd: -&self.surd, disc: self.disc }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        if rhs.surd.is_zero() {
            self.rational += &rhs.rational;
        } else {
            self.disc = join_disc(self.disc, rhs.disc);
            self.rational += &rhs.rational;
            self.surd += &rhs.surd;
            if self.surd.is_zero() {
                self.disc = 0;
            }
        }
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        if rhs.surd.is_zero() {
            self.rational -= &rhs.rational;
        } else {
            self.disc = join_disc(self.disc, rhs.disc);
            self.rational -= &rhs.rational;
            self.surd -= &rhs.surd;
            if self.surd.is_zero() {
                self.disc = 0;
            }
        }
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> ExactScalar {
        // golden ratio (1 + √5)/2
        ExactScalar::quadratic(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()), 5)
            .unwrap()
    }

    #[test]
    fn golden_ratio_identity() {
        let p = phi();
        // φ² = φ + 1
        assert_eq!(&p * &p, &p + &ExactScalar::one());
        assert!(p.signum() > 0);
        assert!((p.to_f64() - 1.618_033_988_75).abs() < 1e-9);
    }

    #[test]
    fn inverse_normalizes_to_one() {
        let p = phi();
        let q = &p - &ExactScalar::from_i64(3);
        assert_eq!(&q * &q.inv().unwrap(), ExactScalar::one());
        assert!(ExactScalar::zero().inv().is_none());
    }

    #[test]
    fn surd_cancellation_drops_discriminant() {
        let s = ExactScalar::sqrt_of(5).unwrap();
        let z = &s - &s;
        assert!(z.is_zero());
        assert_eq!(z.discriminant(), 0);
        assert_eq!(&s * &s, ExactScalar::from_i64(5));
        assert!((&s * &s).is_rational());
    }

    #[test]
    fn rejects_non_square_free() {
        assert!(ExactScalar::sqrt_of(12).is_err());
        assert_eq!(ExactScalar::sqrt_of(1).unwrap(), ExactScalar::one());
    }

    #[test]
    fn sign_with_mixed_parts() {
        // 2 - √5 < 0, 3 - √5 > 0
        let s = ExactScalar::sqrt_of(5).unwrap();
        assert_eq!((&ExactScalar::from_i64(2) - &s).signum(), -1);
        assert_eq!((&ExactScalar::from_i64(3) - &s).signum(), 1);
        assert!(ExactScalar::from_i64(2) < s);
    }

    #[test]
    fn text_forms() {
        assert_eq!(ExactScalar::ratio(-1, 2).to_text(), "-1/2");
        assert_eq!(phi().to_text(), "(1/2 + 1/2*sqrt(5))");
        assert_eq!((-ExactScalar::sqrt_of(5).unwrap()).to_text(), "(-sqrt(5))");
    }
}
