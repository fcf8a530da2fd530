//! Canonical sparse multivariate polynomials.
//!
//! A [`SparsePoly`] maps exponent vectors to nonzero coefficients. Zero
//! coefficients are stripped by every constructor and operation, so
//! [`SparsePoly::sparsity`] is always the exact monomial count.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Range;

use crate::ring::{binomial, RingElement, RingSpec};
use crate::{Error, Result};

/// Exponent vector, one entry per catalog variable.
///
/// Ordered graded-lexicographically: first by total degree, then by the
/// exponent of the first variable, then the second, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// `x_i` in a catalog of `nvars` variables.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Total degree restricted to the variables in `vars`.
    pub fn degree_in(&self, vars: Range<usize>) -> u32 {
        self.0[vars].iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Variables with multiplicity, highest index first.
    pub fn factors_descending(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate().rev() {
            out.extend(core::iter::repeat_n(i, e as usize));
        }
        out
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over a [`RingSpec`] in a positional variable catalog.
///
/// Variable names are display metadata and do not take part in equality.
#[derive(Debug, Clone)]
pub struct SparsePoly {
    ring: RingSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, RingElement>,
    names: Vec<String>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

impl SparsePoly {
    pub fn zero(ring: RingSpec, nvars: usize) -> Self {
        SparsePoly { ring, nvars, terms: BTreeMap::new(), names: default_names(nvars) }
    }

    pub fn constant(ring: RingSpec, nvars: usize, c: RingElement) -> Result<Self> {
        let mut p = Self::zero(ring, nvars);
        p.add_term(Monomial::one(nvars), c)?;
        Ok(p)
    }

    /// The polynomial `x_i`.
    pub fn var(ring: RingSpec, nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::IndexOutOfRange { index: i, len: nvars });
        }
        let mut p = Self::zero(ring, nvars);
        p.terms.insert(Monomial::var(nvars, i), ring.one());
        Ok(p)
    }

    /// Sums the given terms; repeated exponent vectors are merged.
    pub fn from_terms<I>(ring: RingSpec, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, RingElement)>,
    {
        let mut p = Self::zero(ring, nvars);
        for (e, c) in terms {
            p.add_term(Monomial::new(e), c)?;
        }
        Ok(p)
    }

    /// Convenience constructor over `ring` from small integer coefficients.
    pub fn from_int_terms(ring: RingSpec, nvars: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(
            ring,
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), RingElement::from_i64(ring, *c))),
        )
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: names.len() });
        }
        self.names = names;
        Ok(self)
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: RingElement) -> Result<()> {
        self.ring.check_same(c.ring())?;
        if m.nvars() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: m.nvars() });
        }
        self.add_term_unchecked(m, c);
        Ok(())
    }

    fn add_term_unchecked(&mut self, m: Monomial, c: RingElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Terms in graded-lexicographic descending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &RingElement)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> RingElement {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> RingElement {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Number of monomials with nonzero coefficient.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    /// Number of monomials of total degree at least one.
    pub fn nonconstant_sparsity(&self) -> usize {
        self.terms.keys().filter(|m| !m.is_constant()).count()
    }

    /// Maximum total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    /// The sum of the terms of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: u32) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        SparsePoly { ring: self.ring, nvars: self.nvars, terms, names: self.names.clone() }
    }

    fn check_compatible(&self, other: &SparsePoly) -> Result<()> {
        self.ring.check_same(other.ring)?;
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term_unchecked(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        SparsePoly { ring: self.ring, nvars: self.nvars, terms, names: self.names.clone() }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &RingElement) -> Result<SparsePoly> {
        self.ring.check_same(c.ring())?;
        let mut out = SparsePoly { terms: BTreeMap::new(), ..self.clone() };
        for (m, v) in &self.terms {
            out.add_term_unchecked(m.clone(), v * c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = SparsePoly { terms: BTreeMap::new(), ..self.clone() };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term_unchecked(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    fn check_point(&self, point: &[RingElement]) -> Result<()> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        for v in point {
            self.ring.check_same(v.ring())?;
        }
        Ok(())
    }

    pub fn eval(&self, point: &[RingElement]) -> Result<RingElement> {
        self.check_point(point)?;
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// `P(X + a)`, by binomial expansion of every term.
    pub fn shift(&self, a: &[RingElement]) -> Result<SparsePoly> {
        self.check_point(a)?;
        let mut out = SparsePoly { terms: BTreeMap::new(), ..self.clone() };
        // Per variable, the expansion of (x + a)^e as (k, C(e,k) a^(e-k)).
        let mut factors: Vec<Vec<(u32, RingElement)>> = Vec::new();
        for (m, c) in &self.terms {
            factors.clear();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let ai = &a[i];
                let row: Vec<(u32, RingElement)> = if ai.is_zero() {
                    vec![(e, self.ring.one())]
                } else {
                    (0..=e)
                        .map(|k| {
                            let b = RingElement::from_bigint(self.ring, &binomial(e, k));
                            (k, &b * &ai.pow(e - k))
                        })
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                };
                factors.push(row);
            }
            let vars: Vec<usize> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, _)| i)
                .collect();
            expand_product(&vars, &factors, self.nvars, c, &mut out);
        }
        Ok(out)
    }

    /// Upper bound on the terms any shift can produce.
    pub fn shift_bound(&self) -> u128 {
        self.terms
            .keys()
            .map(|m| m.exponents().iter().fold(1u128, |acc, &e| acc.saturating_mul(e as u128 + 1)))
            .fold(0u128, u128::saturating_add)
    }

    /// Re-homes this polynomial into a catalog of `total` variables, mapping
    /// variable `i` to `offset + i`.
    pub fn embed(&self, total: usize, offset: usize) -> Result<SparsePoly> {
        if offset + self.nvars > total {
            return Err(Error::ArityMismatch { expected: total, got: offset + self.nvars });
        }
        let mut out = SparsePoly::zero(self.ring, total);
        for (m, c) in &self.terms {
            let mut e = vec![0; total];
            e[offset..offset + self.nvars].copy_from_slice(m.exponents());
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub(crate) fn set_names_unchecked(&mut self, names: Vec<String>) {
        debug_assert_eq!(names.len(), self.nvars);
        self.names = names;
    }
}

fn expand_product(
    vars: &[usize],
    factors: &[Vec<(u32, RingElement)>],
    nvars: usize,
    coeff: &RingElement,
    out: &mut SparsePoly,
) {
    let mut idx = vec![0usize; factors.len()];
    loop {
        let mut e = vec![0u32; nvars];
        let mut c = coeff.clone();
        for (f, (&v, &j)) in factors.iter().zip(vars.iter().zip(&idx)) {
            let (k, ref w) = f[j];
            e[v] = k;
            c = &c * w;
        }
        out.add_term_unchecked(Monomial(e), c);

        // odometer over the per-variable choices
        let mut pos = factors.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < factors[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn ints(ring: RingSpec, v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| RingElement::from_i64(ring, x)).collect()
    }

    fn poly(ring: RingSpec, nvars: usize, terms: &[(&[u32], i64)]) -> SparsePoly {
        SparsePoly::from_int_terms(ring, nvars, terms).unwrap()
    }

    #[test]
    fn sparsity_examples() {
        assert_eq!(SparsePoly::zero(z(), 1).sparsity(), 0);
        let p = poly(z(), 1, &[(&[2], 1), (&[1], 2), (&[0], 1)]);
        assert_eq!(p.sparsity(), 3);
        let cancel = poly(z(), 1, &[(&[2], 1)]).add(&poly(z(), 1, &[(&[2], -1)])).unwrap();
        assert_eq!(cancel.sparsity(), 0);
    }

    #[test]
    fn nonconstant_sparsity_examples() {
        assert_eq!(poly(z(), 1, &[(&[1], 1), (&[0], 1)]).nonconstant_sparsity(), 1);
        assert_eq!(poly(z(), 1, &[(&[0], 5)]).nonconstant_sparsity(), 0);
        // y1 y4 + y1 + 1
        let p = poly(z(), 4, &[(&[1, 0, 0, 1], 1), (&[1, 0, 0, 0], 1), (&[0, 0, 0, 0], 1)]);
        assert_eq!(p.nonconstant_sparsity(), 2);
    }

    #[test]
    fn shift_examples() {
        let p = poly(z(), 1, &[(&[2], 1), (&[1], 2), (&[0], 1)]);
        assert_eq!(p.shift(&ints(z(), &[0])).unwrap(), p);
        let shifted = p.shift(&ints(z(), &[-1])).unwrap();
        assert_eq!(shifted, poly(z(), 1, &[(&[2], 1)]));
        assert_eq!(shifted.sparsity(), 1);

        let q = poly(z(), 1, &[(&[2], 1), (&[1], -2)]);
        assert_eq!(q.shift(&ints(z(), &[1])).unwrap(), poly(z(), 1, &[(&[2], 1), (&[0], -1)]));
    }

    #[test]
    fn shift_rejects_bad_vectors() {
        let p = poly(z(), 2, &[(&[1, 1], 1)]);
        assert!(matches!(p.shift(&ints(z(), &[1])), Err(Error::ArityMismatch { .. })));
        let q = RingSpec::Rationals;
        assert!(matches!(p.shift(&ints(q, &[1, 1])), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn mul_examples() {
        let a = poly(z(), 1, &[(&[1], 1), (&[0], 1)]);
        let b = poly(z(), 1, &[(&[1], 1), (&[0], -1)]);
        assert_eq!(a.mul(&b).unwrap(), poly(z(), 1, &[(&[2], 1), (&[0], -1)]));

        let x1 = poly(z(), 2, &[(&[1, 0], 1), (&[0, 0], 1)]);
        let y1 = poly(z(), 2, &[(&[0, 1], 1), (&[0, 0], 1)]);
        let prod = x1.mul(&y1).unwrap();
        assert_eq!(prod.sparsity(), 4);

        // (2x + 3)(2y + 3) over Z_6: the 6x and 6y terms vanish.
        let z6 = RingSpec::modular(6).unwrap();
        let a = poly(z6, 2, &[(&[1, 0], 2), (&[0, 0], 3)]);
        let b = poly(z6, 2, &[(&[0, 1], 2), (&[0, 0], 3)]);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod, poly(z6, 2, &[(&[1, 1], 4), (&[0, 0], 3)]));
        assert_eq!(prod.sparsity(), 2);
    }

    #[test]
    fn mul_rejects_ring_mismatch() {
        let a = poly(z(), 1, &[(&[1], 1)]);
        let b = poly(RingSpec::Rationals, 1, &[(&[1], 1)]);
        assert!(matches!(a.mul(&b), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn eval_examples() {
        let p = poly(z(), 1, &[(&[2], 1), (&[0], -1)]);
        assert!(p.eval(&ints(z(), &[1])).unwrap().is_zero());
        let c = poly(z(), 2, &[(&[0, 0], 7)]);
        assert_eq!(c.eval(&ints(z(), &[3, -4])).unwrap(), RingElement::from_i64(z(), 7));
        let f5 = RingSpec::prime_field(5).unwrap();
        let cube = poly(f5, 1, &[(&[3], 1)]);
        assert_eq!(cube.eval(&ints(f5, &[2])).unwrap(), RingElement::from_i64(f5, 3));
        assert!(cube.eval(&ints(f5, &[1, 2])).is_err());
    }

    #[test]
    fn add_and_degree() {
        let p = poly(z(), 2, &[(&[2, 1], 1), (&[1, 0], 1)]);
        assert!(p.add(&p.neg()).unwrap().is_zero());
        assert_eq!(p.degree(), 3);
        assert_eq!(SparsePoly::zero(z(), 3).degree(), 0);
    }

    #[test]
    fn terms_iterate_in_graded_lex_descending_order() {
        let p = poly(z(), 2, &[(&[0, 0], 1), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], 1), (&[0, 2], 1)]);
        let order: Vec<Vec<u32>> = p.terms().map(|(m, _)| m.exponents().to_vec()).collect();
        assert_eq!(order, [vec![1, 1], vec![0, 2], vec![1, 0], vec![0, 1], vec![0, 0]]);
    }

    #[test]
    fn factors_descending_lists_multiplicity() {
        let m = Monomial::new(vec![3, 0, 1]);
        assert_eq!(m.factors_descending(), [2, 0, 0, 0]);
    }

    #[test]
    fn embed_moves_variables() {
        let p = poly(z(), 2, &[(&[1, 1], 3)]);
        let e = p.embed(5, 2).unwrap();
        assert_eq!(e, poly(z(), 5, &[(&[0, 0, 1, 1, 0], 3)]));
        assert!(p.embed(3, 2).is_err());
    }

    #[test]
    fn shift_bound_counts_binomial_terms() {
        let p = SparsePoly::from_int_terms(RingSpec::Integers, 2, &[(&[2, 1], 1), (&[0, 0], 4)]).unwrap();
        assert_eq!(p.shift_bound(), 7);
        let a = [RingElement::from_i64(RingSpec::Integers, 1), RingElement::from_i64(RingSpec::Integers, 1)];
        assert!(p.shift(&a).unwrap().sparsity() as u128 <= p.shift_bound());
    }
}
