//! Truncated multivariate power series over arbitrary-precision integers.
//!
//! A [`TruncatedSeries`] lives in the quotient ring `Z[t_1, ..., t_k] / I` where
//! `I` is the ideal generated by `t_i^(c_i + 1)` for the per-variable caps `c_i`.
//! Every product is reduced modulo `I` as it is formed, so intermediate results
//! never grow past the grid `[0, c_1] x ... x [0, c_k]`.
//!
//! Terms are kept in a sparse ordered map. Zero coefficients are never stored,
//! which makes structural equality coincide with ring equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series shapes differ: caps {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<u32>, right: Vec<u32> },
    #[error("multi-index {index:?} does not fit caps {caps:?}")]
    IndexOutOfCaps { index: Vec<u32>, caps: Vec<u32> },
    #[error("constant term {constant} is not 1, series is not invertible here")]
    NotInvertible { constant: BigInt },
}

/// Exponent vector of a monomial `t_1^e_1 ... t_k^e_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// The index with a single 1 in position `var`.
    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn fits(&self, caps: &[u32]) -> bool {
        self.0.len() == caps.len() && self.0.iter().zip(caps).all(|(e, c)| e <= c)
    }

    /// Componentwise sum, or `None` if some entry overflows its cap.
    fn checked_add(&self, other: &MultiIndex, caps: &[u32]) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(caps.len());
        for ((a, b), cap) in self.0.iter().zip(&other.0).zip(caps) {
            let s = a + b;
            if s > *cap {
                return None;
            }
            out.push(s);
        }
        Some(MultiIndex(out))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Sparse truncated power series with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    caps: Vec<u32>,
    terms: BTreeMap<MultiIndex, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(caps: Vec<u32>) -> Self {
        TruncatedSeries {
            caps,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(caps: Vec<u32>) -> Self {
        Self::constant(caps, BigInt::one())
    }

    pub fn constant(caps: Vec<u32>, c: BigInt) -> Self {
        let mut s = Self::zero(caps);
        let idx = MultiIndex::zero(s.nvars());
        s.insert(idx, c);
        s
    }

    /// `constant + sum_i linear[i] * t_i`.
    ///
    /// Panics if `linear.len()` differs from the number of caps.
    pub fn affine(caps: Vec<u32>, constant: BigInt, linear: &[BigInt]) -> Self {
        assert_eq!(caps.len(), linear.len(), "one linear coefficient per variable");
        let mut s = Self::constant(caps, constant);
        for (var, c) in linear.iter().enumerate() {
            if s.caps[var] > 0 {
                let idx = MultiIndex::unit(s.nvars(), var);
                s.insert(idx, c.clone());
            }
        }
        s
    }

    /// Builds a series from arbitrary terms. Terms above the caps are
    /// discarded (they vanish in the quotient ring); duplicate indices add up.
    pub fn from_terms<I>(caps: Vec<u32>, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (MultiIndex, BigInt)>,
    {
        let mut s = Self::zero(caps);
        for (idx, c) in terms {
            if idx.len() != s.nvars() {
                return Err(SeriesError::IndexOutOfCaps {
                    index: idx.0,
                    caps: s.caps.clone(),
                });
            }
            if idx.fits(&s.caps) {
                s.insert(idx, c);
            }
        }
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigInt)> {
        self.terms.iter()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&MultiIndex::zero(self.nvars()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Result<BigInt, SeriesError> {
        if !m.fits(&self.caps) {
            return Err(SeriesError::IndexOutOfCaps {
                index: m.0.clone(),
                caps: self.caps.clone(),
            });
        }
        Ok(self.terms.get(m).cloned().unwrap_or_default())
    }

    /// Coefficient of the top monomial `t_1^c_1 ... t_k^c_k`.
    pub fn top_coefficient(&self) -> BigInt {
        self.terms
            .get(&MultiIndex(self.caps.clone()))
            .cloned()
            .unwrap_or_default()
    }

    fn insert(&mut self, idx: MultiIndex, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_shape(&self, other: &Self) -> Result<(), SeriesError> {
        if self.caps != other.caps {
            return Err(SeriesError::ShapeMismatch {
                left: self.caps.clone(),
                right: other.caps.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.insert(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.insert(idx.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.caps.clone());
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some(idx) = ia.checked_add(ib, &self.caps) {
                    out.insert(idx, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.caps.clone());
        }
        TruncatedSeries {
            caps: self.caps.clone(),
            terms: self.terms.iter().map(|(i, v)| (i.clone(), v * c)).collect(),
        }
    }

    /// Inverse of a series with constant term 1, computed as the truncated
    /// geometric series `sum_j (-P)^j` where `self = 1 + P`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let constant = self.constant_term();
        if !constant.is_one() {
            return Err(SeriesError::NotInvertible { constant });
        }
        let one = Self::one(self.caps.clone());
        // -P = 1 - self
        let neg_p = &one - self;
        let mut acc = one.clone();
        let mut term = one;
        // P is nilpotent: P^j = 0 once j exceeds the total cap degree.
        loop {
            term = &term * &neg_p;
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Integer power with truncation. Negative exponents go through
    /// [`TruncatedSeries::inverse`] and require a constant term of 1.
    pub fn pow(&self, exponent: i64) -> Result<Self, SeriesError> {
        let base = if exponent < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut result = Self::one(self.caps.clone());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(result)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mag = c.abs();
            let is_const = idx.0.iter().all(|&e| e == 0);
            if is_const || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            let mut first = is_const || !mag.is_one();
            for (var, &e) in idx.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if first {
                    write!(f, "*")?;
                }
                first = true;
                if e == 1 {
                    write!(f, "t{}", var + 1)?;
                } else {
                    write!(f, "t{}^{e}", var + 1)?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        /// Panics if the operands have different caps; use the `try_` form to
        /// get a [`SeriesError`] instead.
        impl<'a> $trait<&'a TruncatedSeries> for &'a TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
                self.$try(rhs).expect("series operands must share caps")
            }
        }

        impl $trait for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&BigInt::from(-1))
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn t1(caps: Vec<u32>, c0: i64, c1: i64) -> TruncatedSeries {
        TruncatedSeries::affine(caps, big(c0), &[big(c1)])
    }

    #[test]
    fn multiplying_by_one_is_identity() {
        let caps = vec![2, 3];
        let a = TruncatedSeries::affine(caps.clone(), big(1), &[big(5), big(-7)]).pow(3).unwrap();
        let one = TruncatedSeries::one(caps);
        assert_eq!(&a * &one, a);
    }

    #[test]
    fn difference_of_squares_truncates() {
        let p = t1(vec![2], 1, 1);
        let m = t1(vec![2], 1, -1);
        let prod = &p * &m;
        let expected = TruncatedSeries::from_terms(
            vec![2],
            [(MultiIndex::new(vec![0]), big(1)), (MultiIndex::new(vec![2]), big(-1))],
        )
        .unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn cross_term_of_square() {
        // (1 + 2 t1 + t2)^2: t1*t2 arises from 2*(2 t1)(t2).
        let s = TruncatedSeries::affine(vec![1, 1], big(1), &[big(2), big(1)]);
        let sq = &s * &s;
        assert_eq!(sq.coefficient(&MultiIndex::new(vec![1, 1])).unwrap(), big(4));
    }

    #[test]
    fn geometric_inverse() {
        let s = t1(vec![2], 1, 1).pow(-1).unwrap();
        let expected = TruncatedSeries::from_terms(
            vec![2],
            [
                (MultiIndex::new(vec![0]), big(1)),
                (MultiIndex::new(vec![1]), big(-1)),
                (MultiIndex::new(vec![2]), big(1)),
            ],
        )
        .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn multinomial_cube() {
        // 3! * 4 * 4
        let s = TruncatedSeries::affine(vec![1, 1], big(1), &[big(4), big(4)]).pow(3).unwrap();
        assert_eq!(s.coefficient(&MultiIndex::new(vec![1, 1])).unwrap(), big(96));
    }

    #[test]
    fn odd_theta_genus_two_input() {
        let a = t1(vec![1], 1, 2).pow(-1).unwrap();
        let b = t1(vec![1], 1, 4).pow(2).unwrap();
        assert_eq!((&a * &b).coefficient(&MultiIndex::new(vec![1])).unwrap(), big(6));
    }

    #[test]
    fn coefficient_lookups() {
        let one = TruncatedSeries::one(vec![3]);
        assert_eq!(one.coefficient(&MultiIndex::zero(1)).unwrap(), big(1));
        let flex = t1(vec![1], 1, 9);
        assert_eq!(flex.coefficient(&MultiIndex::new(vec![1])).unwrap(), big(9));
        for d in 0..7u32 {
            let s = t1(vec![d], 1, 1).pow(i64::from(d)).unwrap();
            assert_eq!(s.coefficient(&MultiIndex::new(vec![d])).unwrap(), big(1));
        }
    }

    #[test]
    fn out_of_caps_index_is_rejected() {
        let s = TruncatedSeries::one(vec![1, 1]);
        assert!(matches!(
            s.coefficient(&MultiIndex::new(vec![2, 0])),
            Err(SeriesError::IndexOutOfCaps { .. })
        ));
        assert!(s.coefficient(&MultiIndex::new(vec![0])).is_err());
    }

    #[test]
    fn mismatched_caps_are_rejected() {
        let a = TruncatedSeries::one(vec![1]);
        let b = TruncatedSeries::one(vec![2]);
        assert!(matches!(a.try_mul(&b), Err(SeriesError::ShapeMismatch { .. })));
        let c = TruncatedSeries::one(vec![1, 1]);
        assert!(a.try_add(&c).is_err());
    }

    #[test]
    fn negative_power_needs_unit_constant() {
        let s = t1(vec![2], 2, 1);
        assert!(matches!(s.pow(-1), Err(SeriesError::NotInvertible { .. })));
        // positive powers are fine for any constant term
        assert_eq!(s.pow(2).unwrap().constant_term(), big(4));
    }

    #[test]
    fn zero_terms_are_not_stored() {
        let s = t1(vec![2], 1, 1);
        let diff = &s - &s;
        assert!(diff.is_zero());
        assert_eq!(diff, TruncatedSeries::zero(vec![2]));
    }

    #[test]
    fn display_is_readable() {
        let s = TruncatedSeries::affine(vec![1, 1], big(1), &[big(-2), big(1)]);
        assert_eq!(s.to_string(), "1 + t2 - 2*t1");
    }
}
