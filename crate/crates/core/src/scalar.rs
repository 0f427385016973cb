//! Exact scalars: prime fields F_p for small p, and arbitrary-precision
//! rationals. There are no floats anywhere in this crate.
//!
//! A scalar carries its field with it, so mixing fields fails fast instead of
//! silently corrupting a table.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Field {
    /// F_p, p a small prime.
    Prime(u32),
    /// Arbitrary-precision rationals.
    Rational,
}

fn is_small_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if !is_small_prime(p) || p > 46337 {
            // 46337^2 < 2^32, so products of residues fit in u64 comfortably.
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp { p: *p, v: 0 },
            Field::Rational => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Prime(p) => {
                let m = (n % *p as i64 + *p as i64) as u64 % *p as u64;
                Scalar::Fp { p: *p, v: m as u32 }
            }
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Inverse of n!, needed by the symmetrized curvature. Char 0 only.
    pub fn inv_factorial(&self, n: u64) -> Result<Scalar> {
        match self {
            Field::Rational => {
                let mut f = BigInt::one();
                for k in 2..=n {
                    f *= BigInt::from(k);
                }
                Ok(Scalar::Rat(BigRational::new(BigInt::one(), f)))
            }
            Field::Prime(p) => Err(Error::CharZeroRequired(format!(
                "1/{}! requested over F_{}",
                n, p
            ))),
        }
    }

    /// Parses an exact integer or fraction literal: "7", "-3", "2/5".
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in scalar {:?}", s)))?;
        let den: BigInt = den_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in scalar {:?}", s)))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in scalar {:?}", s)));
        }
        match self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let red = |x: &BigInt| -> u32 {
                    let m = ((x % &pb) + &pb) % &pb;
                    m.to_u32().expect("residue fits")
                };
                let n = Scalar::Fp { p: *p, v: red(&num) };
                let d = Scalar::Fp { p: *p, v: red(&den) };
                if d.is_zero() {
                    return Err(Error::Parse(format!(
                        "denominator of {:?} vanishes in F_{}",
                        s, p
                    )));
                }
                Ok(n.mul(&d.inv().expect("nonzero residue")))
            }
        }
    }

    /// All elements of a finite field, in canonical order. None over Q.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Some((0..*p).map(|v| Scalar::Fp { p: *p, v }).collect()),
            Field::Rational => None,
        }
    }

    pub fn nonzero_elements(&self) -> Option<Vec<Scalar>> {
        self.elements().map(|mut v| {
            v.remove(0);
            v
        })
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{}", p),
            Field::Rational => write!(f, "Q"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Fp { p: u32, v: u32 },
    Rat(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { p, .. } => Field::Prime(*p),
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    fn same_prime(&self, other: &Scalar) -> (u32, u64, u64) {
        match (self, other) {
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) => {
                assert_eq!(p, q, "scalars from different prime fields");
                (*p, *v as u64, *w as u64)
            }
            _ => panic!("mixed scalar backends"),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let (p, a, b) = self.same_prime(other);
                Scalar::Fp { p, v: ((a + b) % p as u64) as u32 }
            }
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: if *v == 0 { 0 } else { p - v } },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => {
                let (p, a, b) = self.same_prime(other);
                Scalar::Fp { p, v: ((a * b) % p as u64) as u32 }
            }
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        match self {
            Scalar::Rat(a) => Ok(Scalar::Rat(a.recip())),
            Scalar::Fp { p, v } => {
                // extended Euclid on (v, p)
                let (mut r0, mut r1) = (*v as i64, *p as i64);
                let (mut s0, mut s1) = (1i64, 0i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                assert_eq!(r0, 1, "prime field inverse must exist");
                let m = ((s0 % *p as i64) + *p as i64) as u64 % *p as u64;
                Ok(Scalar::Fp { p: *p, v: m as u32 })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Exact sign flip by parity, the ubiquitous Koszul helper.
    pub fn negate_if(&self, flag: bool) -> Scalar {
        if flag {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Canonical literal accepted back by `Field::parse`.
    pub fn literal(&self) -> String {
        match self {
            Scalar::Fp { v, .. } => format!("{}", v),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) => (p, v).cmp(&(q, w)),
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Fp { .. }, Scalar::Rat(_)) => Ordering::Less,
            (Scalar::Rat(_), Scalar::Fp { .. }) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

/// Parity of an integer degree, for Koszul signs.
pub fn odd(degree: i32) -> bool {
    degree.rem_euclid(2) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_validation() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(3).is_ok());
        assert!(Field::prime(101).is_ok());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(91).is_err()); // 7 * 13
    }

    #[test]
    fn parse_round_trip() {
        let q = Field::Rational;
        for s in ["0", "7", "-3", "2/5", "-11/13"] {
            let x = q.parse(s).unwrap();
            assert_eq!(q.parse(&x.literal()).unwrap(), x);
        }
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("-1").unwrap(), f5.from_i64(4));
        assert_eq!(f5.parse("1/2").unwrap(), f5.from_i64(3)); // 2 * 3 = 6 = 1
        assert!(f5.parse("1/5").is_err());
    }

    #[test]
    fn inv_factorial_is_exact() {
        let q = Field::Rational;
        let x = q.inv_factorial(4).unwrap();
        assert_eq!(x.literal(), "1/24");
        assert!(Field::prime(3).unwrap().inv_factorial(2).is_err());
    }

    fn arb_fp(p: u32) -> impl Strategy<Value = Scalar> {
        (0..p).prop_map(move |v| Scalar::Fp { p, v })
    }

    fn arb_rat() -> impl Strategy<Value = Scalar> {
        (-40i64..40, 1i64..20).prop_map(|(n, d)| {
            Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
        })
    }

    proptest! {
        #[test]
        fn f7_field_axioms(a in arb_fp(7), b in arb_fp(7), c in arb_fp(7)) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&a.neg()), Field::prime(7).unwrap().zero());
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inv().unwrap()), Field::prime(7).unwrap().one());
            }
        }

        #[test]
        fn rational_field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if !b.is_zero() {
                prop_assert_eq!(a.div(&b).unwrap().mul(&b), a);
            }
        }
    }
}
