//! Scalar abstraction shared by the polynomial and germ code.
//!
//! Everything in this crate is exact, so the trait is implemented for the
//! rationals and for the cubic number field only.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactnum::{Nf, Rational};

/// An exact field usable as a polynomial coefficient.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_integer(n: i64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn checked_inv(&self) -> Option<Self>;

    /// True when the textual form needs parentheses as a product factor.
    fn is_compound(&self) -> bool;
}

impl Scalar for Rational {
    fn from_integer(n: i64) -> Self {
        Rational::from_integer(n.into())
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn is_compound(&self) -> bool {
        false
    }
}

impl Scalar for Nf {
    fn from_integer(n: i64) -> Self {
        Nf::from_int(n)
    }

    fn from_rational(q: &Rational) -> Self {
        Nf::from_rational(q.clone())
    }

    fn checked_inv(&self) -> Option<Self> {
        self.inv().ok()
    }

    fn is_compound(&self) -> bool {
        self.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
    }
}
