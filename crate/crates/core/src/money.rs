//! Currency amounts.
//!
//! Every amount in the crate is expressed in QUINTILLION galactic dollars
//! (written `Q`). One `Q` is a thousand QUADRILLION, so the per-bank figures
//! quoted in quadrillions (`0.333 Q`, `0.002 Q`) stay readable.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

use serde::{Deserialize, Serialize};

/// An amount in QUINTILLION dollars.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Money(pub f64);

impl Money {
    pub const ZERO: Money = Money(0.0);

    /// Amount given directly in QUINTILLIONS.
    pub const fn q(value: f64) -> Self {
        Money(value)
    }

    pub fn from_quadrillions(value: f64) -> Self {
        Money(value / 1e3)
    }

    pub fn from_sextillions(value: f64) -> Self {
        Money(value * 1e3)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn quadrillions(self) -> f64 {
        self.0 * 1e3
    }

    pub fn max(self, other: Money) -> Money {
        Money(self.0.max(other.0))
    }

    pub fn min(self, other: Money) -> Money {
        Money(self.0.min(other.0))
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Mul<f64> for Money {
    type Output = Money;
    fn mul(self, rhs: f64) -> Money {
        Money(self.0 * rhs)
    }
}

impl Mul<Money> for f64 {
    type Output = Money;
    fn mul(self, rhs: Money) -> Money {
        Money(self * rhs.0)
    }
}

impl Div<f64> for Money {
    type Output = Money;
    fn div(self, rhs: f64) -> Money {
        Money(self.0 / rhs)
    }
}

/// Ratio of two amounts.
impl Div for Money {
    type Output = f64;
    fn div(self, rhs: Money) -> f64 {
        self.0 / rhs.0
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        Money(iter.map(|m| m.0).sum())
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(precision) = f.precision() {
            write!(f, "{:.*} Q", precision, self.0)
        } else {
            write!(f, "{} Q", self.0)
        }
    }
}
