//! Gaussian rationals: pairs `re + im·i` of exact rationals.
//!
//! These are the scalars of the complex matrix models; every inner
//! product and bracket computed over them is exact.

use crate::scalar::{rat, Rat};
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat {
            re: rat(0),
            im: rat(0),
        }
    }

    pub fn one() -> Self {
        GaussRat {
            re: rat(1),
            im: rat(0),
        }
    }

    pub fn i() -> Self {
        GaussRat {
            re: rat(0),
            im: rat(1),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        GaussRat { re: r, im: rat(0) }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::from_rat(rat(n))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        GaussRat {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(GaussRat {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(
                f,
                "{}{}{}i",
                self.re,
                if self.im < rat(0) { "" } else { "+" },
                self.im
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn field_identities() {
        let a = GaussRat::new(ratio(1, 2), ratio(-3, 4));
        let b = GaussRat::new(ratio(2, 5), ratio(7, 3));
        let prod = &a * &b;
        assert_eq!(&prod * &b.inv().unwrap(), a);
        assert_eq!(&(&a * &a.conj()).im, &rat(0));
        // i^2 = -1
        assert_eq!(&GaussRat::i() * &GaussRat::i(), GaussRat::from_int(-1));
    }
}
