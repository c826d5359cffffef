//! Rational numbers that stay on machine integers until they overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug)]
pub enum Rat {
    Small(Ratio<i128>),
    Big(BigRational),
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::Small(Ratio::from_integer(0))
    }

    pub fn one() -> Rat {
        Rat::Small(Ratio::from_integer(1))
    }

    pub fn int(n: i64) -> Rat {
        Rat::Small(Ratio::from_integer(n as i128))
    }

    /// Panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Rat {
        Rat::Small(Ratio::new(n as i128, d as i128))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_zero(),
            Rat::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_one(),
            Rat::Big(r) => r.is_one(),
        }
    }

    fn big(&self) -> BigRational {
        match self {
            Rat::Small(r) => BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rat::Big(r) => r.clone(),
        }
    }

    fn shrink(r: BigRational) -> Rat {
        match (r.numer().to_i128(), r.denom().to_i128()) {
            // keep some headroom so products of two small values rarely overflow
            (Some(n), Some(d)) if n.unsigned_abs() < (1u128 << 100) && d < (1i128 << 100) => {
                Rat::Small(Ratio::new_raw(n, d))
            }
            _ => Rat::Big(r),
        }
    }

    pub fn add(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(r) = checked_add(a, b) {
                return Rat::Small(r);
            }
        }
        Rat::shrink(self.big() + o.big())
    }

    pub fn sub(&self, o: &Rat) -> Rat {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(r) = checked_mul(a, b) {
                return Rat::Small(r);
            }
        }
        Rat::shrink(self.big() * o.big())
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(r) => match r.numer().checked_neg() {
                Some(n) => Rat::Small(Ratio::new_raw(n, *r.denom())),
                None => Rat::Big(-self.big()),
            },
            Rat::Big(r) => Rat::Big(-r),
        }
    }

    /// `None` for zero.
    pub fn inv(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rat::Small(r) => {
                let (n, d) = (*r.numer(), *r.denom());
                if n < 0 {
                    match (d.checked_neg(), n.checked_neg()) {
                        (Some(a), Some(b)) => Rat::Small(Ratio::new_raw(a, b)),
                        _ => Rat::shrink(self.big().recip()),
                    }
                } else {
                    Rat::Small(Ratio::new_raw(d, n))
                }
            }
            Rat::Big(r) => Rat::shrink(r.recip()),
        })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Rat::Big(r) => {
                let n = r.numer().to_f64().unwrap_or(f64::NAN);
                let d = r.denom().to_f64().unwrap_or(f64::NAN);
                if n.is_finite() && d.is_finite() {
                    n / d
                } else {
                    // scale down both sides before converting
                    let bits = r.numer().bits().max(r.denom().bits()) as i64 - 900;
                    let s = bits.max(0) as usize;
                    let n = (r.numer() >> s).to_f64().unwrap_or(0.0);
                    let d = (r.denom() >> s).to_f64().unwrap_or(1.0);
                    n / d
                }
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_integer(),
            Rat::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rat::Small(r) => r.numer().signum() as i32,
            Rat::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    /// Integer value when the rational is an integer that fits in `i128`.
    pub fn to_i128(&self) -> Option<i128> {
        if !self.is_integer() {
            return None;
        }
        match self {
            Rat::Small(r) => Some(*r.numer()),
            Rat::Big(r) => r.numer().to_i128(),
        }
    }

    pub fn parse(s: &str) -> Option<Rat> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::shrink(BigRational::new(n, d)))
        } else {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::shrink(BigRational::from_integer(n)))
        }
    }

    /// The rational cube root, when there is one.
    pub fn cbrt(&self) -> Option<Rat> {
        let b = self.big();
        let (n, d) = (b.numer().cbrt(), b.denom().cbrt());
        let r = BigRational::new(n, d);
        if &r * &r * &r == b {
            Some(Rat::shrink(r))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

fn checked_add(a: &Ratio<i128>, b: &Ratio<i128>) -> Option<Ratio<i128>> {
    let (an, ad, bn, bd) = (*a.numer(), *a.denom(), *b.numer(), *b.denom());
    if ad == bd {
        let n = an.checked_add(bn)?;
        return Some(reduce(n, ad));
    }
    let g = ad.gcd(&bd);
    let l = (ad / g).checked_mul(bd)?;
    let n = an.checked_mul(l / ad)?.checked_add(bn.checked_mul(l / bd)?)?;
    Some(reduce(n, l))
}

fn checked_mul(a: &Ratio<i128>, b: &Ratio<i128>) -> Option<Ratio<i128>> {
    let (an, ad, bn, bd) = (*a.numer(), *a.denom(), *b.numer(), *b.denom());
    if an == 0 || bn == 0 {
        return Some(Ratio::from_integer(0));
    }
    let g1 = an.gcd(&bd);
    let g2 = bn.gcd(&ad);
    let n = (an / g1).checked_mul(bn / g2)?;
    let d = (ad / g2).checked_mul(bd / g1)?;
    Some(Ratio::new_raw(n, d))
}

fn reduce(n: i128, d: i128) -> Ratio<i128> {
    if n == 0 {
        return Ratio::from_integer(0);
    }
    let g = n.gcd(&d);
    Ratio::new_raw(n / g, d / g)
}

impl PartialEq for Rat {
    fn eq(&self, o: &Rat) -> bool {
        match (self, o) {
            (Rat::Small(a), Rat::Small(b)) => a == b,
            _ => self.big() == o.big(),
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Rat) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rat {
    fn cmp(&self, o: &Rat) -> Ordering {
        match (self, o) {
            (Rat::Small(a), Rat::Small(b)) => a.cmp(b),
            _ => self.big().cmp(&o.big()),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Rat::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes() {
        let big = Rat::int(i64::MAX);
        let sq = big.mul(&big).mul(&big);
        assert!(matches!(sq, Rat::Big(_)));
        let back = sq.mul(&big.inv().unwrap()).mul(&big.inv().unwrap());
        assert_eq!(back, big);
        assert!(matches!(back, Rat::Small(_)));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(Rat::parse("6/4").unwrap().to_string(), "3/2");
        assert_eq!(Rat::parse("-7").unwrap(), Rat::int(-7));
        assert!(Rat::parse("1/0").is_none());
    }

    #[test]
    fn arithmetic() {
        let a = Rat::frac(1, 3);
        let b = Rat::frac(1, 6);
        assert_eq!(a.add(&b), Rat::frac(1, 2));
        assert_eq!(a.sub(&b), b);
        assert_eq!(a.mul(&b), Rat::frac(1, 18));
        assert_eq!(Rat::frac(-2, 5).inv().unwrap(), Rat::frac(-5, 2));
    }
}
