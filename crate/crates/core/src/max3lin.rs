//! Max-3Lin systems and their encoding as a quadratic polynomial whose
//! post-shift linear coefficients mirror which equations are satisfied.
//!
//! For `m` rows over `n` variables, with `w = max(2n, 2m)`:
//!
//! ```text
//! Q = sum_{i,j} C[i][j] * y_i * y_j + sum_i e_i * y_i + e_0
//! ```
//!
//! where `C` holds the coefficient matrix `A` in its top-right block and
//! `e` holds the row constants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Monomial, SparsePoly};
use crate::ring::{RingElement, RingSpec};
use crate::{Error, Result};

/// `c1*x[j1] + c2*x[j2] + c3*x[j3] + b = 0`, indices 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub vars: [usize; 3],
    pub coeffs: [RingElement; 3],
    pub b: RingElement,
}

impl Row {
    pub fn eval(&self, x: &[RingElement]) -> RingElement {
        (0..3).fold(self.b.clone(), |acc, k| &acc + &(&self.coeffs[k] * &x[self.vars[k]]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Max3LinSystem {
    ring: RingSpec,
    n: usize,
    rows: Vec<Row>,
}

impl Max3LinSystem {
    pub fn new(ring: RingSpec, n: usize, rows: Vec<Row>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            let [a, b, c] = row.vars;
            if a == b || a == c || b == c {
                return Err(Error::InvalidRow { row: r, reason: "variable indices must be distinct" });
            }
            if row.vars.iter().any(|&v| v >= n) {
                return Err(Error::InvalidRow { row: r, reason: "variable index out of range" });
            }
            for c in row.coeffs.iter().chain(core::iter::once(&row.b)) {
                ring.check_same(c.ring())?;
            }
            if row.coeffs.iter().any(RingElement::is_zero) {
                return Err(Error::InvalidRow { row: r, reason: "coefficients must be nonzero" });
            }
        }
        Ok(Max3LinSystem { ring, n, rows })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// `max(2n, 2m)`.
    pub fn w(&self) -> usize {
        2 * self.n.max(self.m())
    }

    fn check_assignment(&self, x: &[RingElement]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: x.len() });
        }
        x.iter().try_for_each(|v| self.ring.check_same(v.ring()))
    }

    pub fn count_satisfied(&self, x: &[RingElement]) -> Result<usize> {
        self.check_assignment(x)?;
        Ok(self.rows.iter().filter(|r| r.eval(x).is_zero()).count())
    }

    /// The shift vector carrying `x` in its last `n` coordinates.
    pub fn embed_assignment(&self, x: &[RingElement]) -> Result<Vec<RingElement>> {
        self.check_assignment(x)?;
        let mut a = alloc::vec![self.ring.zero(); self.w() - self.n];
        a.extend_from_slice(x);
        Ok(a)
    }

    /// The last `n` coordinates of a shift vector.
    pub fn project(&self, a: &[RingElement]) -> Result<Vec<RingElement>> {
        if a.len() != self.w() {
            return Err(Error::ArityMismatch { expected: self.w(), got: a.len() });
        }
        Ok(a[self.w() - self.n..].to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QsInstance {
    polynomial: SparsePoly,
    c: BTreeMap<(usize, usize), RingElement>,
    e: Vec<RingElement>,
    e0: RingElement,
    source: Max3LinSystem,
}

pub fn build_q_s(l: &Max3LinSystem, e0: &RingElement) -> Result<QsInstance> {
    let ring = l.ring();
    ring.check_same(e0.ring())?;
    let w = l.w();
    let offset = w - l.n();

    let mut c: BTreeMap<(usize, usize), RingElement> = BTreeMap::new();
    for (i, row) in l.rows().iter().enumerate() {
        for k in 0..3 {
            let key = (i, offset + row.vars[k]);
            let v = match c.remove(&key) {
                Some(old) => &old + &row.coeffs[k],
                None => row.coeffs[k].clone(),
            };
            if !v.is_zero() {
                c.insert(key, v);
            }
        }
    }
    let mut e = alloc::vec![ring.zero(); w];
    for (i, row) in l.rows().iter().enumerate() {
        e[i] = row.b.clone();
    }

    let mut terms: Vec<(Vec<u32>, RingElement)> = Vec::with_capacity(c.len() + w + 1);
    for (&(i, j), v) in &c {
        let mut exps = alloc::vec![0u32; w];
        exps[i] += 1;
        exps[j] += 1;
        terms.push((exps, v.clone()));
    }
    for (i, v) in e.iter().enumerate() {
        terms.push((Monomial::var(w, i).exponents().to_vec(), v.clone()));
    }
    terms.push((alloc::vec![0; w], e0.clone()));
    let names = (1..=w).map(|i| format!("y{i}")).collect();
    let polynomial = SparsePoly::from_terms(ring, w, terms)?.with_names(names)?;

    Ok(QsInstance { polynomial, c, e, e0: e0.clone(), source: l.clone() })
}

impl QsInstance {
    pub fn polynomial(&self) -> &SparsePoly {
        &self.polynomial
    }

    pub fn w(&self) -> usize {
        self.e.len()
    }

    /// Entry of the full `w x w` matrix, 0-based.
    pub fn c(&self, i: usize, j: usize) -> RingElement {
        self.c.get(&(i, j)).cloned().unwrap_or_else(|| self.source.ring().zero())
    }

    /// Nonzero entries of `C`.
    pub fn c_entries(&self) -> impl Iterator<Item = (usize, usize, &RingElement)> + '_ {
        self.c.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn e(&self) -> &[RingElement] {
        &self.e
    }

    pub fn e0(&self) -> &RingElement {
        &self.e0
    }

    pub fn source(&self) -> &Max3LinSystem {
        &self.source
    }

    /// Coefficient of `y_i` (0-based) in `Q(Y + a)`:
    /// `e_i + sum_j a_j (C[i][j] + C[j][i])`.
    pub fn shifted_linear_coeff(&self, a: &[RingElement], i: usize) -> Result<RingElement> {
        let w = self.w();
        if a.len() != w {
            return Err(Error::ArityMismatch { expected: w, got: a.len() });
        }
        if i >= w {
            return Err(Error::IndexOutOfRange { index: i, len: w });
        }
        let ring = self.source.ring();
        a.iter().try_for_each(|v| ring.check_same(v.ring()))?;
        let mut acc = self.e[i].clone();
        for (&(r, col), v) in &self.c {
            if r == i {
                acc = &acc + &(v * &a[col]);
            }
            if col == i {
                acc = &acc + &(v * &a[r]);
            }
        }
        Ok(acc)
    }
}

/// Output of the instance generator, with the bookkeeping that makes it
/// reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedMax3Lin {
    pub system: Max3LinSystem,
    pub seed: u64,
    pub planted: Option<Vec<RingElement>>,
    pub noise: usize,
}

/// Largest absolute coefficient drawn over infinite rings.
pub const INFINITE_COEFF_BOUND: i64 = 3;

fn sample_nonzero<R: Rng>(ring: RingSpec, rng: &mut R) -> RingElement {
    match ring.modulus() {
        Some(q) => RingElement::from_i64(ring, rng.gen_range(1..q) as i64),
        None => {
            let mag = rng.gen_range(1..=INFINITE_COEFF_BOUND);
            RingElement::from_i64(ring, if rng.gen_bool(0.5) { mag } else { -mag })
        }
    }
}

fn sample_any<R: Rng>(ring: RingSpec, rng: &mut R) -> RingElement {
    match ring.modulus() {
        Some(q) => RingElement::from_i64(ring, rng.gen_range(0..q) as i64),
        None => RingElement::from_i64(ring, rng.gen_range(-INFINITE_COEFF_BOUND..=INFINITE_COEFF_BOUND)),
    }
}

/// Random system with `m` rows over `n` variables. When `planted`, a
/// recorded assignment satisfies exactly `m - noise` rows.
pub fn gen_max3lin(
    n: usize,
    m: usize,
    ring: RingSpec,
    planted: bool,
    noise: usize,
    seed: u64,
) -> Result<GeneratedMax3Lin> {
    ring.validate()?;
    if n < 3 {
        return Err(Error::Precondition("at least 3 variables are needed".into()));
    }
    if noise > m {
        return Err(Error::Precondition("noise count exceeds row count".into()));
    }
    if noise > 0 && !planted {
        return Err(Error::Precondition("noise requires a planted assignment".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignment: Option<Vec<RingElement>> =
        planted.then(|| (0..n).map(|_| sample_any(ring, &mut rng)).collect());
    let noisy: Vec<usize> = if noise > 0 { index::sample(&mut rng, m, noise).into_vec() } else { Vec::new() };

    let mut rows = Vec::with_capacity(m);
    for r in 0..m {
        let mut vars = [0usize; 3];
        for (slot, v) in vars.iter_mut().zip(index::sample(&mut rng, n, 3)) {
            *slot = v;
        }
        vars.sort_unstable();
        let coeffs = [
            sample_nonzero(ring, &mut rng),
            sample_nonzero(ring, &mut rng),
            sample_nonzero(ring, &mut rng),
        ];
        let b = match &assignment {
            Some(x) => {
                let lhs = (0..3).fold(ring.zero(), |acc, k| &acc + &(&coeffs[k] * &x[vars[k]]));
                let b = -lhs;
                if noisy.contains(&r) {
                    &b + &sample_nonzero(ring, &mut rng)
                } else {
                    b
                }
            }
            None => sample_any(ring, &mut rng),
        };
        rows.push(Row { vars, coeffs, b });
    }
    Ok(GeneratedMax3Lin { system: Max3LinSystem::new(ring, n, rows)?, seed, planted: assignment, noise })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn f(p: u64) -> RingSpec {
        RingSpec::prime_field(p).unwrap()
    }

    fn el(ring: RingSpec, v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| RingElement::from_i64(ring, x)).collect()
    }

    fn row(ring: RingSpec, vars: [usize; 3], c: [i64; 3], b: i64) -> Row {
        Row {
            vars,
            coeffs: [
                RingElement::from_i64(ring, c[0]),
                RingElement::from_i64(ring, c[1]),
                RingElement::from_i64(ring, c[2]),
            ],
            b: RingElement::from_i64(ring, b),
        }
    }

    fn single() -> Max3LinSystem {
        Max3LinSystem::new(f(2), 3, vec![row(f(2), [0, 1, 2], [1, 1, 1], 1)]).unwrap()
    }

    #[test]
    fn q_s_single_row() {
        let inst = build_q_s(&single(), &f(2).one()).unwrap();
        assert_eq!(inst.w(), 6);
        let want = SparsePoly::from_int_terms(
            f(2),
            6,
            &[
                (&[1, 0, 0, 1, 0, 0], 1),
                (&[1, 0, 0, 0, 1, 0], 1),
                (&[1, 0, 0, 0, 0, 1], 1),
                (&[1, 0, 0, 0, 0, 0], 1),
                (&[0, 0, 0, 0, 0, 0], 1),
            ],
        )
        .unwrap();
        assert_eq!(inst.polynomial(), &want);
        assert_eq!(inst.polynomial().sparsity(), 5);
        assert_eq!(inst.c(0, 3), f(2).one());
        assert!(inst.c(3, 0).is_zero());
    }

    #[test]
    fn q_s_degenerate_and_f3() {
        let empty = Max3LinSystem::new(f(2), 1, vec![]).unwrap();
        let inst = build_q_s(&empty, &f(2).one()).unwrap();
        assert_eq!(inst.w(), 2);
        assert!(inst.polynomial().is_constant());
        assert_eq!(inst.polynomial().constant_term(), f(2).one());

        let l = Max3LinSystem::new(
            f(3),
            3,
            vec![row(f(3), [0, 1, 2], [1, 2, 1], 0), row(f(3), [0, 1, 2], [2, 2, 1], 1)],
        )
        .unwrap();
        let inst = build_q_s(&l, &f(3).one()).unwrap();
        assert_eq!(inst.w(), 6);
        assert!(inst.polynomial().sparsity() <= 9);
    }

    #[test]
    fn shifted_coefficient_examples() {
        let inst = build_q_s(&single(), &f(2).one()).unwrap();
        let a = el(f(2), &[0, 0, 0, 1, 0, 0]);
        assert!(inst.shifted_linear_coeff(&a, 0).unwrap().is_zero());
        let zero = el(f(2), &[0; 6]);
        assert_eq!(inst.shifted_linear_coeff(&zero, 0).unwrap(), f(2).one());
        assert!(inst.shifted_linear_coeff(&a, 4).unwrap().is_zero());
        assert!(inst.shifted_linear_coeff(&a, 6).is_err());
        assert!(inst.shifted_linear_coeff(&a[..5], 0).is_err());
    }

    #[test]
    fn satisfaction_and_embedding() {
        let l = single();
        assert_eq!(l.count_satisfied(&el(f(2), &[1, 0, 0])).unwrap(), 1);
        assert_eq!(l.count_satisfied(&el(f(2), &[0, 0, 0])).unwrap(), 0);
        assert!(l.count_satisfied(&el(f(2), &[0, 0])).is_err());
        let x = el(f(2), &[1, 0, 0]);
        let a = l.embed_assignment(&x).unwrap();
        assert_eq!(a, el(f(2), &[0, 0, 0, 1, 0, 0]));
        assert_eq!(l.project(&a).unwrap(), x);
    }

    #[test]
    fn row_validation() {
        assert!(Max3LinSystem::new(f(2), 3, vec![row(f(2), [0, 0, 2], [1, 1, 1], 0)]).is_err());
        assert!(Max3LinSystem::new(f(2), 3, vec![row(f(2), [0, 1, 3], [1, 1, 1], 0)]).is_err());
        assert!(Max3LinSystem::new(f(2), 3, vec![row(f(2), [0, 1, 2], [1, 0, 1], 0)]).is_err());
    }

    #[test]
    fn generator_contract() {
        for ring in [f(2), f(3), RingSpec::modular(6).unwrap(), RingSpec::Integers] {
            for noise in 0..3 {
                let g = gen_max3lin(5, 6, ring, true, noise, 42).unwrap();
                let x = g.planted.as_ref().unwrap();
                assert_eq!(g.system.count_satisfied(x).unwrap(), 6 - noise);
                assert_eq!(g, gen_max3lin(5, 6, ring, true, noise, 42).unwrap());
            }
        }
        assert!(gen_max3lin(2, 1, f(2), true, 0, 0).is_err());
        assert!(gen_max3lin(3, 1, f(2), true, 2, 0).is_err());
        let free = gen_max3lin(4, 3, f(3), false, 0, 9).unwrap();
        assert!(free.planted.is_none());
        assert_eq!(free.system.m(), 3);
    }
}
