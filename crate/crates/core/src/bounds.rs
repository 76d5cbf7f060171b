//! Exact bounds on crossings, sequence length and Reidemeister moves along
//! monotonic unknotting sequences.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("need at least one maximum (b >= 1), got b = {0}")]
    NoMaxima(u64),
    #[error("complexity must be at least 2, got {0}")]
    ComplexityTooSmall(u64),
}

/// `M = 2b + cr`.
pub fn bound_m(b: u64, cr: u64) -> Result<u64, BoundError> {
    if b < 1 {
        return Err(BoundError::NoMaxima(b));
    }
    Ok(2 * b + cr)
}

/// `(M - 2)^2`: no diagram of complexity at most `M` has more crossings.
pub fn bound_max_crossings(m: u64) -> Result<u64, BoundError> {
    check(m)?;
    Ok((m - 2) * (m - 2))
}

fn check(n: u64) -> Result<(), BoundError> {
    if n < 2 {
        Err(BoundError::ComplexityTooSmall(n))
    } else {
        Ok(())
    }
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// `n [(n-1)!]^2 / 2`, the count bound for distinct arc-presentations of
/// complexity `n`.
pub fn bound_n(n: u64) -> Result<BigUint, BoundError> {
    check(n)?;
    Ok(term(n))
}

fn term(i: u64) -> BigUint {
    let f = factorial(i - 1);
    (&f * &f * i) >> 1
}

/// `sum_{i=2}^{n} i [(i-1)!]^2 / 2`.
pub fn bound_sequence_length(n: u64) -> Result<BigUint, BoundError> {
    check(n)?;
    // Running factorial keeps this linear in n.
    let mut total = BigUint::zero();
    let mut fact = BigUint::one();
    for i in 2..=n {
        fact *= i - 1;
        total += (&fact * &fact * i) >> 1;
    }
    Ok(total)
}

/// `(M - 2) * sum_{i=2}^{M} i [(i-1)!]^2 / 2`.
pub fn bound_reidemeister_total(m: u64) -> Result<BigUint, BoundError> {
    Ok(bound_sequence_length(m)? * (m - 2))
}

/// Largest summand of the sequence-length sum, `M [(M-1)!]^2` before halving
/// (the form in which the Reidemeister total is usually quoted).
pub fn largest_summand(m: u64) -> Result<BigUint, BoundError> {
    check(m)?;
    let f = factorial(m - 1);
    Ok(&f * &f * m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub b: Option<u64>,
    pub cr: Option<u64>,
    pub m: u64,
    pub max_crossings_bound: u64,
    pub sequence_length_bound: BigUint,
    pub reidemeister_total_bound: BigUint,
    pub n_bound: BigUint,
}

impl BoundReport {
    pub fn from_morse(b: u64, cr: u64) -> Result<Self, BoundError> {
        let mut r = Self::from_complexity(bound_m(b, cr)?)?;
        r.b = Some(b);
        r.cr = Some(cr);
        Ok(r)
    }

    pub fn from_complexity(m: u64) -> Result<Self, BoundError> {
        Ok(BoundReport {
            b: None,
            cr: None,
            m,
            max_crossings_bound: bound_max_crossings(m)?,
            sequence_length_bound: bound_sequence_length(m)?,
            reidemeister_total_bound: bound_reidemeister_total(m)?,
            n_bound: bound_n(m)?,
        })
    }
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let (Some(b), Some(cr)) = (self.b, self.cr) {
            writeln!(f, "b={b}")?;
            writeln!(f, "cr={cr}")?;
        }
        writeln!(f, "M={}", self.m)?;
        writeln!(f, "max_crossings_bound={}", self.max_crossings_bound)?;
        writeln!(f, "sequence_length_bound={}", self.sequence_length_bound)?;
        writeln!(f, "reidemeister_total_bound={}", self.reidemeister_total_bound)?;
        writeln!(f, "N_bound={}", self.n_bound)
    }
}
