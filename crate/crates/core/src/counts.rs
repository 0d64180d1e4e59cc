//! de Jonquières counts, Brill–Noether arithmetic and the diagonal class.
//!
//! With `A = 1 + sum a_i t_i` and `B = 1 + sum a_i^2 t_i`, the virtual number
//! of de Jonquières divisors of a zero-dimensional problem is the coefficient
//! of `t_1^d_1 ... t_k^d_k` in `B^g * A^(d-r-g)`. That coefficient counts
//! ordered tuples `(D_1, ..., D_k)`; [`dejonquieres_count`] divides out the
//! permutations of identical parts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{MultiIndex, SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("expected dimension is {0}, counts need it to be 0")]
    NonzeroExpectedDimension(i64),
    #[error("ordered count {ordered} is not divisible by symmetry factor {factor}")]
    SymmetryMismatch { ordered: BigInt, factor: BigInt },
    #[error("diagonal class coefficient of x^{x} theta^{theta} is not integral")]
    NonIntegral { x: u32, theta: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A counting problem: genus, series dimension and degree, plus the
/// coefficient vector `mu1` and degree vector `mu2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DJProblem {
    pub g: u32,
    pub r: u32,
    pub d: u32,
    pub mu1: Vec<u32>,
    pub mu2: Vec<u32>,
}

impl DJProblem {
    pub fn new(g: u32, r: u32, d: u32, mu1: Vec<u32>, mu2: Vec<u32>) -> Result<Self, CountError> {
        let p = DJProblem { g, r, d, mu1, mu2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), CountError> {
        if self.mu1.len() != self.mu2.len() {
            return Err(CountError::Invalid(format!(
                "mu1 has {} parts but mu2 has {}",
                self.mu1.len(),
                self.mu2.len()
            )));
        }
        if self.mu1.iter().chain(&self.mu2).any(|&x| x == 0) {
            return Err(CountError::Invalid("all parts must be positive".into()));
        }
        let weight: u64 = self
            .mu1
            .iter()
            .zip(&self.mu2)
            .map(|(&a, &m)| u64::from(a) * u64::from(m))
            .sum();
        if weight != u64::from(self.d) {
            return Err(CountError::Invalid(format!(
                "sum a_i d_i = {weight} but d = {}",
                self.d
            )));
        }
        if self.k() as u64 > u64::from(self.d) {
            return Err(CountError::Invalid("more parts than the degree".into()));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.mu1.len()
    }

    /// `N = sum d_i`, the total degree of the divisors `D_i`.
    pub fn n(&self) -> u32 {
        self.mu2.iter().sum()
    }

    /// Index of speciality `s = g - d + r`.
    pub fn speciality(&self) -> i64 {
        i64::from(self.g) - i64::from(self.d) + i64::from(self.r)
    }

    pub fn parts(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.mu1.iter().copied().zip(self.mu2.iter().copied())
    }

    fn monomial(&self) -> MultiIndex {
        MultiIndex::new(self.mu2.clone())
    }

    /// `1 + sum a_i^power t_i`, truncated at `t_i^d_i`.
    fn base_series(&self, power: u32) -> TruncatedSeries {
        let linear: Vec<BigInt> = self.mu1.iter().map(|&a| BigInt::from(a).pow(power)).collect();
        TruncatedSeries::affine(self.mu2.clone(), BigInt::one(), &linear)
    }
}

/// `rho(g, r, d) = g - (r+1)(g-d+r)`.
pub fn brill_noether(g: u32, r: u32, d: u32) -> i64 {
    let (g, r, d) = (i64::from(g), i64::from(r), i64::from(d));
    g - (r + 1) * (g - d + r)
}

/// `N - d + r`.
pub fn expected_dimension(p: &DJProblem) -> i64 {
    i64::from(p.n()) - i64::from(p.d) + i64::from(p.r)
}

/// Product of `m!` over the multiplicities `m` of the distinct pairs
/// `(a_i, d_i)`. Panics if the vectors have different lengths.
pub fn symmetry_factor(mu1: &[u32], mu2: &[u32]) -> BigInt {
    assert_eq!(mu1.len(), mu2.len(), "mu1 and mu2 must have equal length");
    let mut mult: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for pair in mu1.iter().copied().zip(mu2.iter().copied()) {
        *mult.entry(pair).or_default() += 1;
    }
    mult.values().map(|&m| factorial(m)).product()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Coefficient of `t^mu2` in `B^b_exp * A^a_exp`.
fn mixed_coefficient(p: &DJProblem, a_exp: i64, b_exp: i64) -> Result<BigInt, CountError> {
    let a = p.base_series(1).pow(a_exp)?;
    let b = p.base_series(2).pow(b_exp)?;
    Ok((&a * &b).coefficient(&p.monomial())?)
}

/// Number of ordered tuples `(D_1..D_k)`. Requires expected dimension 0.
pub fn dejonquieres_count_ordered(p: &DJProblem) -> Result<BigInt, CountError> {
    p.validate()?;
    let e = expected_dimension(p);
    if e != 0 {
        return Err(CountError::NonzeroExpectedDimension(e));
    }
    let a_exp = i64::from(p.d) - i64::from(p.r) - i64::from(p.g);
    mixed_coefficient(p, a_exp, i64::from(p.g))
}

/// Number of unordered de Jonquières divisors.
pub fn dejonquieres_count(p: &DJProblem) -> Result<BigInt, CountError> {
    let ordered = dejonquieres_count_ordered(p)?;
    let factor = symmetry_factor(&p.mu1, &p.mu2);
    let (q, rem) = ordered.div_rem(&factor);
    if !rem.is_zero() {
        return Err(CountError::SymmetryMismatch { ordered, factor });
    }
    Ok(q)
}

/// Coefficient of `t^mu2` in the class restricted to a linear series,
/// `A^(N-g) * B^g`.
pub fn restricted_class_coefficient(p: &DJProblem) -> Result<BigInt, CountError> {
    p.validate()?;
    let a_exp = i64::from(p.n()) - i64::from(p.g);
    mixed_coefficient(p, a_exp, i64::from(p.g))
}

/// Non-emptiness from positivity of the restricted class.
pub fn existence_check(p: &DJProblem) -> bool {
    if p.validate().is_err() || expected_dimension(p) < 0 {
        return false;
    }
    restricted_class_coefficient(p).is_ok_and(|c| c.is_positive())
}

/// Class of the image of `C_d1 x ... x C_dk` in `C_d`, written in the
/// monomials `x^i * theta^a / a!`.
///
/// Each coefficient is a series in the `t_i`; only the coefficient of the top
/// monomial `t^mu2` is the geometric class, but the whole truncated series is
/// kept so that restrictions and comparisons can be made term by term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalClass {
    caps: Vec<u32>,
    terms: BTreeMap<(u32, u32), TruncatedSeries>,
}

impl FormalClass {
    /// Coefficient of `x^x * theta^theta / theta!`.
    pub fn divided_coefficient(&self, x: u32, theta: u32) -> TruncatedSeries {
        self.terms
            .get(&(x, theta))
            .cloned()
            .unwrap_or_else(|| TruncatedSeries::zero(self.caps.clone()))
    }

    /// Coefficient of `x^x * theta^theta` in the ordinary monomial basis.
    /// These need not be integers.
    pub fn coefficient(&self, x: u32, theta: u32) -> BTreeMap<MultiIndex, BigRational> {
        let denom = factorial(theta);
        self.divided_coefficient(x, theta)
            .terms()
            .map(|(m, c)| (m.clone(), BigRational::new(c.clone(), denom.clone())))
            .collect()
    }

    /// The part surviving `theta = 0`.
    pub fn restrict_theta_zero(&self) -> BTreeMap<u32, TruncatedSeries> {
        self.terms
            .iter()
            .filter(|((_, th), _)| *th == 0)
            .map(|((x, _), s)| (*x, s.clone()))
            .collect()
    }

    /// `(x-power, theta-power)` pairs with a nonzero coefficient.
    pub fn monomials(&self) -> impl Iterator<Item = &(u32, u32)> {
        self.terms.keys()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }
}

/// The diagonal class
/// `sum_{a>=b} (-1)^(a+b) / (b!(a-b)!) A^(N-g+b) B^(g-b) x^(d-N-a) theta^a`.
///
/// Multiplying the `theta^a` coefficient by `a!` turns the weights into
/// binomials `C(a, b)`; the binomials are formed as rationals and checked
/// for integrality before they enter the integer series.
pub fn diagonal_class(g: u32, d: u32, mu1: &[u32], mu2: &[u32]) -> Result<FormalClass, CountError> {
    let p = DJProblem {
        g,
        r: 0,
        d,
        mu1: mu1.to_vec(),
        mu2: mu2.to_vec(),
    };
    p.validate()?;
    let n = p.n();
    let caps = p.mu2.clone();
    let a_series = p.base_series(1);
    let b_series = p.base_series(2);
    let (g64, n64) = (i64::from(g), i64::from(n));
    let mut terms = BTreeMap::new();
    for a in 0..=(d - n) {
        let mut acc = TruncatedSeries::zero(caps.clone());
        let a_fact = BigRational::from_integer(factorial(a));
        for b in 0..=a {
            let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
            let weight = a_fact.clone()
                / BigRational::from_integer(factorial(b) * factorial(a - b))
                * BigRational::from_integer(BigInt::from(sign));
            if !weight.is_integer() {
                return Err(CountError::NonIntegral { x: d - n - a, theta: a });
            }
            let term = &a_series.pow(n64 - g64 + i64::from(b))? * &b_series.pow(g64 - i64::from(b))?;
            acc = &acc + &term.scale(&weight.to_integer());
        }
        if !acc.is_zero() {
            terms.insert((d - n - a, a), acc);
        }
    }
    Ok(FormalClass { caps, terms })
}
