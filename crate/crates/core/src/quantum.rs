//! Angular quantum numbers of the radial problem.

use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    /// Half-integer `twice / 2`.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    /// Twice the value.
    pub const fn twice(self) -> i32 {
        self.0
    }

    /// Value as `f64`.
    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// `true` for 1/2, 3/2, ... and their negatives.
    pub const fn is_odd_half(self) -> bool {
        self.0 % 2 != 0
    }

    /// Total angular momentum `j >= 1/2` from an odd `twice`.
    pub fn total_j(twice: i32) -> Result<Self> {
        if twice <= 0 || twice % 2 == 0 {
            return Err(Error::InvalidParameter {
                name: "j",
                reason: "must be a positive half-odd integer (1/2, 3/2, ...)",
            });
        }
        Ok(HalfInt(twice))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts decimals (`0.5`, `+1.5`, `-0.5`) and fractions (`1/2`, `-3/2`).
    fn from_str(s: &str) -> Result<Self> {
        const BAD: Error = Error::InvalidParameter {
            name: "half-integer",
            reason: "expected a decimal like 1.5 or a fraction like 3/2",
        };
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().trim_start_matches('+').parse().map_err(|_| BAD)?;
            return match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(BAD),
            };
        }
        let x: f64 = s.trim_start_matches('+').parse().map_err(|_| BAD)?;
        let twice = 2.0 * x;
        if !twice.is_finite() || libm::fabs(twice - libm::round(twice)) > 1e-9 || libm::fabs(twice) > 1e6 {
            return Err(BAD);
        }
        Ok(HalfInt(libm::round(twice) as i32))
    }
}

/// Spin projection `s = +-1/2` entering `l = j - s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    /// `s = +1/2`
    Up,
    /// `s = -1/2`
    Down,
}

impl Spin {
    /// `+1` or `-1`.
    pub const fn sign(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    /// `s` as a half-integer.
    pub const fn half(self) -> HalfInt {
        HalfInt(self.sign())
    }

    /// `s` as `f64`.
    pub fn value(self) -> f64 {
        0.5 * f64::from(self.sign())
    }

    /// Spin from its half-integer value.
    pub fn from_half(h: HalfInt) -> Result<Self> {
        match h.twice() {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            _ => Err(Error::InvalidParameter {
                name: "s",
                reason: "must be +1/2 or -1/2",
            }),
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Spin::from_half(s.parse()?)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spin::Up => f.write_str("+1/2"),
            Spin::Down => f.write_str("-1/2"),
        }
    }
}

/// `(s, j, n)` with the derived `k = s(2j+1)` and principal number `N = 2n + j - s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    /// Spin projection.
    pub s: Spin,
    /// Total angular momentum.
    pub j: HalfInt,
    /// Radial quantum number.
    pub n: u32,
}

impl QuantumNumbers {
    /// Validated constructor.
    pub fn new(s: Spin, j: HalfInt, n: u32) -> Result<Self> {
        HalfInt::total_j(j.twice())?;
        Ok(QuantumNumbers { s, j, n })
    }

    /// Spin-orbit quantum number `k = s(2j+1)`; never zero, `|k| = j + 1/2`.
    pub fn k(&self) -> i32 {
        k_of(self.s, self.j)
    }

    /// Orbital quantum number `l = j - s`.
    pub fn l(&self) -> u32 {
        ((self.j.twice() - self.s.sign()) / 2) as u32
    }

    /// Principal quantum number `N = 2n + j - s`.
    pub fn principal(&self) -> u32 {
        2 * self.n + self.l()
    }

    /// Radial number recovered from a principal number, if consistent.
    pub fn n_from_principal(s: Spin, j: HalfInt, principal: u32) -> Result<u32> {
        let l = ((j.twice() - s.sign()) / 2) as u32;
        if principal < l || !(principal - l).is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "N",
                reason: "must satisfy N = 2n + j - s for some n >= 0",
            });
        }
        Ok((principal - l) / 2)
    }
}

/// `k = s(2j+1)`.
pub fn k_of(s: Spin, j: HalfInt) -> i32 {
    s.sign() * ((j.twice() + 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!("0.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(1));
        assert_eq!("1/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(1));
        assert_eq!("+0.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(1));
        assert_eq!("-3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-3));
        assert_eq!("2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(4));
        assert!("0.3".parse::<HalfInt>().is_err());
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("abc".parse::<HalfInt>().is_err());
    }

    #[test]
    fn k_and_principal() {
        let j = HalfInt::from_twice(3);
        let up = QuantumNumbers::new(Spin::Up, j, 2).unwrap();
        assert_eq!(up.k(), 2);
        assert_eq!(up.l(), 1);
        assert_eq!(up.principal(), 5);
        let down = QuantumNumbers::new(Spin::Down, j, 2).unwrap();
        assert_eq!(down.k(), -2);
        assert_eq!(down.l(), 2);
        assert_eq!(down.principal(), 6);
        assert_eq!(QuantumNumbers::n_from_principal(Spin::Down, j, 6).unwrap(), 2);
        assert!(QuantumNumbers::n_from_principal(Spin::Down, j, 5).is_err());
    }

    #[test]
    fn rejects_integer_j() {
        assert!(QuantumNumbers::new(Spin::Up, HalfInt::from_twice(2), 0).is_err());
        assert!(QuantumNumbers::new(Spin::Up, HalfInt::from_twice(-1), 0).is_err());
    }
}
