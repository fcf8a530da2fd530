//! Gap amplification by products of variable-disjoint copies, and the
//! exact gap parameters that go with it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::SparsePoly;
use crate::ring::RingElement;
use crate::{Error, Result};

/// `d` disjoint copies of a base polynomial multiplied together.
///
/// Copy `k` (0-based) occupies variables `[k*N', (k+1)*N')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplifiedInstance {
    polynomial: SparsePoly,
    base: SparsePoly,
    copies: usize,
    base_circuit_size: Option<usize>,
}

pub fn copy_names(base: &SparsePoly, copies: usize) -> Vec<String> {
    (0..copies)
        .flat_map(|k| base.names().iter().map(move |n| format!("{n}__c{k}")))
        .collect()
}

/// Multiplies `copies` renamed copies of `base`, refusing when the product
/// could exceed `term_cap` terms.
pub fn amplify(base: &SparsePoly, copies: usize, term_cap: usize) -> Result<AmplifiedInstance> {
    if copies == 0 {
        return Err(Error::Precondition("copy count must be at least 1".into()));
    }
    let bound = (base.sparsity() as u128).checked_pow(copies as u32).unwrap_or(u128::MAX);
    if bound > term_cap as u128 {
        return Err(Error::TermCapExceeded { needed: bound, cap: term_cap });
    }
    let factors: Vec<SparsePoly> = (0..copies).map(|_| base.clone()).collect();
    let polynomial = product_of_copies(base, &factors)?;
    Ok(AmplifiedInstance { polynomial, base: base.clone(), copies, base_circuit_size: None })
}

fn product_of_copies(base: &SparsePoly, factors: &[SparsePoly]) -> Result<SparsePoly> {
    let nb = base.nvars();
    let total = nb * factors.len();
    let mut acc = SparsePoly::constant(base.ring(), total, base.ring().one())?;
    for (k, f) in factors.iter().enumerate() {
        acc = acc.mul(&f.embed(total, k * nb)?)?;
    }
    acc.with_names(copy_names(base, factors.len()))
}

impl AmplifiedInstance {
    /// Reassembles an instance read back from storage.
    pub fn from_parts(polynomial: SparsePoly, base: SparsePoly, copies: usize) -> Result<Self> {
        if polynomial.nvars() != base.nvars() * copies {
            return Err(Error::ArityMismatch { expected: base.nvars() * copies, got: polynomial.nvars() });
        }
        Ok(AmplifiedInstance { polynomial, base, copies, base_circuit_size: None })
    }

    /// Records the circuit size of the base for size bookkeeping.
    pub fn with_base_circuit_size(mut self, s: usize) -> Self {
        self.base_circuit_size = Some(s);
        self
    }

    pub fn polynomial(&self) -> &SparsePoly {
        &self.polynomial
    }

    pub fn base(&self) -> &SparsePoly {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn base_nvars(&self) -> usize {
        self.base.nvars()
    }

    pub fn copy_layout(&self) -> Vec<Range<usize>> {
        let n = self.base.nvars();
        (0..self.copies).map(|k| k * n..(k + 1) * n).collect()
    }

    /// `s*d + 1`: a product gate over `d` copies of a size-`s` circuit.
    pub fn circuit_size(&self) -> Option<usize> {
        self.base_circuit_size.map(|s| s * self.copies + 1)
    }

    /// `sigma^d`; the exact sparsity over integral domains.
    pub fn expected_sparsity(&self) -> u128 {
        (self.base.sparsity() as u128).pow(self.copies as u32)
    }

    /// Shifts each copy by its own vector, multiplying the shifted factors.
    /// Equal to shifting the product by the concatenated vector.
    pub fn shift(&self, per_copy: &[Vec<RingElement>]) -> Result<SparsePoly> {
        if per_copy.len() != self.copies {
            return Err(Error::ArityMismatch { expected: self.copies, got: per_copy.len() });
        }
        let factors = per_copy
            .iter()
            .map(|a| self.base.shift(a))
            .collect::<Result<Vec<_>>>()?;
        product_of_copies(&self.base, &factors)
    }
}

/// `alpha = (4 - delta) / (3 + epsilon + 1/m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapAlpha {
    pub alpha: BigRational,
    /// False when `alpha <= 1`, i.e. the parameters give no gap.
    pub has_gap: bool,
}

fn in_unit_interval(v: &BigRational) -> bool {
    *v >= BigRational::zero() && *v < BigRational::one()
}

pub fn gap_alpha(epsilon: &BigRational, delta: &BigRational, m: u64) -> Result<GapAlpha> {
    if !in_unit_interval(epsilon) || !in_unit_interval(delta) {
        return Err(Error::Precondition("epsilon and delta must lie in [0, 1)".into()));
    }
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let num = int(4) - delta;
    let den = int(3) + epsilon + BigRational::new(BigInt::one(), BigInt::from(m));
    let alpha = num / den;
    let has_gap = alpha > BigRational::one();
    Ok(GapAlpha { alpha, has_gap })
}

/// Smallest `d` with `(sigma/(sigma-1))^d >= target`.
pub fn choose_d(sigma: usize, target: &BigRational) -> Result<u32> {
    if sigma <= 1 {
        return Err(Error::NoAmplification(sigma));
    }
    if *target <= BigRational::one() {
        return Err(Error::Precondition("target gap must exceed 1".into()));
    }
    let ratio = BigRational::new(BigInt::from(sigma), BigInt::from(sigma - 1));
    let mut power = ratio.clone();
    let mut d = 1u32;
    while power < *target {
        power *= &ratio;
        d += 1;
    }
    Ok(d)
}

/// Thresholds of an amplified gap instance: YES instances reach at most
/// `t_yes` monomials under some shift, NO instances keep at least `t_no`
/// under every shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapParams {
    pub epsilon: Option<BigRational>,
    pub delta: Option<BigRational>,
    pub m: Option<u64>,
    pub alpha: BigRational,
    pub d: u32,
    pub t_yes: BigInt,
    pub t_no: BigInt,
}

fn rat_pow(v: &BigRational, d: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..d {
        acc *= v;
    }
    acc
}

impl GapParams {
    /// Max-3Lin variant: `t_yes = ((3+eps)m + 1)^d` (all monomials) and
    /// `t_no = ((4-delta)m)^d` (non-constant monomials), so that
    /// `t_no = alpha^d * t_yes` before rounding.
    pub fn max3lin(epsilon: &BigRational, delta: &BigRational, m: u64, d: u32) -> Result<Self> {
        let GapAlpha { alpha, .. } = gap_alpha(epsilon, delta, m)?;
        let mr = BigRational::from_integer(BigInt::from(m));
        let yes_base = (BigRational::from_integer(BigInt::from(3)) + epsilon) * &mr + BigRational::one();
        let yes = rat_pow(&yes_base, d);
        let no = rat_pow(&alpha, d) * &yes;
        Ok(GapParams {
            epsilon: Some(epsilon.clone()),
            delta: Some(delta.clone()),
            m: Some(m),
            alpha,
            d,
            t_yes: yes.floor().to_integer(),
            t_no: no.ceil().to_integer(),
        })
    }

    /// Nullstellensatz variant: `alpha = sigma/(sigma-1)`, `t_yes = (sigma-1)^d`,
    /// `t_no = sigma^d`.
    pub fn hn(sigma: usize, d: u32) -> Result<Self> {
        if sigma <= 1 {
            return Err(Error::NoAmplification(sigma));
        }
        let alpha = BigRational::new(BigInt::from(sigma), BigInt::from(sigma - 1));
        let yes = BigRational::from_integer(BigInt::from(sigma - 1).pow(d));
        let no = rat_pow(&alpha, d) * &yes;
        Ok(GapParams {
            epsilon: None,
            delta: None,
            m: None,
            alpha,
            d,
            t_yes: yes.to_integer(),
            t_no: no.ceil().to_integer(),
        })
    }
}
