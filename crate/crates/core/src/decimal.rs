//! Arbitrary-precision natural numbers stored as base-10 digits.
//!
//! Digits are little-endian: index 0 is the units place. Zero is the empty
//! digit sequence, and no value ever carries a leading zero at its highest
//! index.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Rejected decimal text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseDecimalError {
    #[error("empty number")]
    Empty,
    #[error("invalid character {found:?} at byte {index}")]
    InvalidDigit { index: usize, found: char },
}

/// `a - b` was requested with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("subtraction underflow: {minuend} - {subtrahend}")]
pub struct Underflow {
    pub minuend: DecimalNatural,
    pub subtrahend: DecimalNatural,
}

/// Non-negative integer with positional decimal digit access.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct DecimalNatural {
    digits: Vec<u8>,
}

impl DecimalNatural {
    pub fn zero() -> Self {
        Self { digits: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_digit(1)
    }

    /// Single-digit value. Panics if `d > 9`.
    pub fn from_digit(d: u8) -> Self {
        assert!(d <= 9, "digit out of range: {d}");
        let mut n = Self { digits: vec![d] };
        n.normalize();
        n
    }

    /// Builds a value from little-endian digits, stripping high zeros.
    /// Returns `None` if any element exceeds 9.
    pub fn from_le_digits(digits: impl Into<Vec<u8>>) -> Option<Self> {
        let digits = digits.into();
        if digits.iter().any(|&d| d > 9) {
            return None;
        }
        let mut n = Self { digits };
        n.normalize();
        Some(n)
    }

    /// Parses bare decimal text: ASCII digits only, leading zeros allowed.
    pub fn from_decimal_string(s: &str) -> Result<Self, ParseDecimalError> {
        if s.is_empty() {
            return Err(ParseDecimalError::Empty);
        }
        if let Some((index, found)) = s.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
            return Err(ParseDecimalError::InvalidDigit { index, found });
        }
        let mut n = Self {
            digits: s.bytes().rev().map(|b| b - b'0').collect(),
        };
        n.normalize();
        Ok(n)
    }

    /// Little-endian digits. Empty for zero.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Number of significant digits; zero has none.
    pub fn digit_count(&self) -> usize {
        self.digits.len()
    }

    /// Index of the most significant digit, `None` for zero.
    pub fn top_index(&self) -> Option<usize> {
        self.digits.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at place `i`; places beyond the top digit read as 0.
    pub fn digit_at(&self, i: usize) -> u8 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    /// The value as a `u64`, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        self.digits.iter().rev().try_fold(0u64, |acc, &d| {
            acc.checked_mul(10)?.checked_add(u64::from(d))
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Underflow> {
        if *self < *other {
            return Err(Underflow {
                minuend: self.clone(),
                subtrahend: other.clone(),
            });
        }
        let mut out = Vec::with_capacity(self.digits.len());
        let mut borrow = 0i8;
        for (i, &d) in self.digits.iter().enumerate() {
            let mut v = d as i8 - other.digit_at(i) as i8 - borrow;
            borrow = 0;
            if v < 0 {
                v += 10;
                borrow = 1;
            }
            out.push(v as u8);
        }
        debug_assert_eq!(borrow, 0);
        let mut n = Self { digits: out };
        n.normalize();
        Ok(n)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.digits.len().max(other.digits.len());
        let mut out = Vec::with_capacity(len + 1);
        let mut carry = 0u8;
        for i in 0..len {
            let v = self.digit_at(i) + other.digit_at(i) + carry;
            out.push(v % 10);
            carry = v / 10;
        }
        if carry > 0 {
            out.push(carry);
        }
        Self { digits: out }
    }

    /// `self * 10 + d`: appends `d` below the units place (a bring-down).
    pub fn add_digit_shifted(&self, d: u8) -> Self {
        assert!(d <= 9, "digit out of range: {d}");
        if self.is_zero() {
            return Self::from_digit(d);
        }
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.push(d);
        digits.extend_from_slice(&self.digits);
        Self { digits }
    }

    /// `self * 10^places`.
    pub fn shift_left(&self, places: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut digits = vec![0; places];
        digits.extend_from_slice(&self.digits);
        Self { digits }
    }

    /// `floor(self / 10^places)`.
    pub fn shift_right(&self, places: usize) -> Self {
        Self {
            digits: self.digits.get(places..).unwrap_or_default().to_vec(),
        }
    }

    pub fn multiply_small(&self, m: u32) -> Self {
        if m == 0 || self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.digits.len() + 10);
        let mut carry = 0u64;
        for &d in &self.digits {
            let v = u64::from(d) * u64::from(m) + carry;
            out.push((v % 10) as u8);
            carry = v / 10;
        }
        while carry > 0 {
            out.push((carry % 10) as u8);
            carry /= 10;
        }
        Self { digits: out }
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc = vec![0u32; self.digits.len() + other.digits.len()];
        for (i, &a) in self.digits.iter().enumerate() {
            for (j, &b) in other.digits.iter().enumerate() {
                acc[i + j] += u32::from(a) * u32::from(b);
            }
            // keep cells small enough that the next row cannot overflow
            let mut carry = 0;
            for cell in acc.iter_mut().skip(i) {
                let v = *cell + carry;
                *cell = v % 10;
                carry = v / 10;
            }
        }
        let mut n = Self {
            digits: acc.into_iter().map(|v| v as u8).collect(),
        };
        n.normalize();
        n
    }

    /// `self^e` for `e` in {2, 3}.
    pub fn power_small(&self, e: u32) -> Self {
        match e {
            2 => self.mul(self),
            3 => self.mul(self).mul(self),
            _ => panic!("power_small supports exponents 2 and 3, got {e}"),
        }
    }

    /// `floor(self / divisor)` by long division. Panics on a zero divisor.
    pub fn div_floor(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero");
        let mut quotient = vec![0u8; self.digits.len()];
        let mut rem = Self::zero();
        for (i, &d) in self.digits.iter().enumerate().rev() {
            rem = rem.add_digit_shifted(d);
            let mut q = 0;
            while rem >= *divisor {
                rem = rem
                    .checked_sub(divisor)
                    .expect("rem >= divisor was just checked");
                q += 1;
            }
            quotient[i] = q;
        }
        let mut n = Self { digits: quotient };
        n.normalize();
        n
    }

    fn normalize(&mut self) {
        while self.digits.last() == Some(&0) {
            self.digits.pop();
        }
    }
}

impl From<u64> for DecimalNatural {
    fn from(mut v: u64) -> Self {
        let mut digits = Vec::new();
        while v > 0 {
            digits.push((v % 10) as u8);
            v /= 10;
        }
        Self { digits }
    }
}

impl FromStr for DecimalNatural {
    type Err = ParseDecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_decimal_string(s)
    }
}

impl Ord for DecimalNatural {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digits
            .len()
            .cmp(&other.digits.len())
            .then_with(|| self.digits.iter().rev().cmp(other.digits.iter().rev()))
    }
}

impl PartialOrd for DecimalNatural {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DecimalNatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.pad("0");
        }
        let s: String = self.digits.iter().rev().map(|&d| char::from(b'0' + d)).collect();
        f.pad(&s)
    }
}

impl fmt::Debug for DecimalNatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DecimalNatural({self})")
    }
}

impl serde::Serialize for DecimalNatural {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
