//! The ring abstraction expressions are evaluated over.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// A commutative ring with the elementary functions the expression language
/// exposes. Implemented for `f64` and [`Jet`](crate::jets::Jet).
///
/// The elementary functions assume their argument is in domain; callers
/// check [`Scalar::value`] first.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// The order-0 value.
    fn value(&self) -> f64;
    /// A constant with the same shape as `self`.
    fn lift_const(&self, c: f64) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tan(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powf(&self, e: f64) -> Self;
    /// Whether two elements can be combined arithmetically.
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn lift_const(&self, c: f64) -> Self {
        c
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn tan(&self) -> Self {
        f64::tan(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn powf(&self, e: f64) -> Self {
        f64::powf(*self, e)
    }
}

/// `base^e` by repeated squaring, so reals and jets follow the same
/// multiplication sequence.
pub fn pow_by_squaring<S: Scalar>(base: S, mut e: u32) -> S {
    let mut result = base.lift_const(1.0);
    if e == 0 {
        return result;
    }
    let mut acc = base;
    let mut first = true;
    loop {
        if e & 1 == 1 {
            result = if first {
                first = false;
                acc.clone()
            } else {
                result * acc.clone()
            };
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        acc = acc.clone() * acc;
    }
    result
}
