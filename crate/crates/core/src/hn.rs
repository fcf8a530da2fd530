//! The W-linear degree-3 polynomial whose sparsifying shifts correspond to
//! solutions of a normalized quadratized system, and the conversions
//! between the two.
//!
//! Given a normalized system `g_1 = 0, ..., g_t = 0` over `x_1..x_N` where
//! only `g_1` has a constant term, the instance is
//!
//! ```text
//! P = w_1 * g_1 + sum_{i>=2} w_i * (gamma * g_i + x_0 + x_1 + ... + x_N)
//! ```
//!
//! over the catalog `x_0, x_1..x_N, w_1..w_t` (in that positional order).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::poly::SparsePoly;
use crate::quadratize::{
    is_normalized, normalize_constants, quadratize_circuits, quadratize_sparse, EquationSystem,
    ExtensionRecipe, Normalization, Quadratized,
};
use crate::ring::{RingElement, RingSpec};
use crate::{Error, Result};

/// The default non-unit: 2 over the integers.
pub fn default_gamma() -> RingElement {
    RingElement::from_i64(RingSpec::Integers, 2)
}

/// Variable bookkeeping for a built instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionWitnessMap {
    pub gamma: RingElement,
    /// Position of `x_0`.
    pub x0: usize,
    /// Positions of `x_1..x_N`.
    pub xprime: Vec<usize>,
    /// Positions of `w_1..w_t`.
    pub wvars: Vec<usize>,
    /// Index of the constant-bearing equation in the normalized system.
    pub g1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnInstance {
    polynomial: SparsePoly,
    witness: ReductionWitnessMap,
    system: EquationSystem,
}

/// Checks `ring` is an integral domain that is not a field. Integers are the
/// only such ring the toolkit supports.
pub fn require_non_field_domain(ring: RingSpec) -> Result<()> {
    if ring == RingSpec::Integers {
        Ok(())
    } else {
        Err(Error::UnsupportedDomain(ring))
    }
}

/// Builds the instance from a normalized system.
pub fn build_instance(system: &EquationSystem, gamma: &RingElement) -> Result<HnInstance> {
    let ring = system.ring();
    require_non_field_domain(ring)?;
    ring.check_same(gamma.ring())?;
    if gamma.is_zero() || gamma.is_unit() {
        return Err(Error::InvalidGamma(format!("{gamma}")));
    }
    if !is_normalized(system) {
        return Err(Error::Precondition(
            "system must have exactly one constant-bearing equation, listed first".into(),
        ));
    }

    let n = system.nvars();
    let t = system.equations().len();
    let total = n + 1 + t;
    let w = |i: usize| n + 1 + i;

    let mut sum_x = SparsePoly::zero(ring, total);
    for k in 0..=n {
        sum_x = sum_x.add(&SparsePoly::var(ring, total, k)?)?;
    }

    let mut p = SparsePoly::zero(ring, total);
    for (i, g) in system.equations().iter().enumerate() {
        let g = g.embed(total, 1)?;
        let factor = if i == 0 { g } else { g.scale(gamma)?.add(&sum_x)? };
        p = p.add(&SparsePoly::var(ring, total, w(i))?.mul(&factor)?)?;
    }

    let mut names: Vec<String> = Vec::with_capacity(total);
    names.push("x0".into());
    names.extend(system.vars().iter().map(|v| v.name.clone()));
    names.extend((1..=t).map(|i| format!("w{i}")));
    let polynomial = p.with_names(names)?;

    let witness = ReductionWitnessMap {
        gamma: gamma.clone(),
        x0: 0,
        xprime: (1..=n).collect(),
        wvars: (0..t).map(w).collect(),
        g1: 0,
    };
    Ok(HnInstance { polynomial, witness, system: system.clone() })
}

impl HnInstance {
    pub fn polynomial(&self) -> &SparsePoly {
        &self.polynomial
    }

    pub fn witness(&self) -> &ReductionWitnessMap {
        &self.witness
    }

    pub fn gamma(&self) -> &RingElement {
        &self.witness.gamma
    }

    /// The normalized system the instance encodes.
    pub fn system(&self) -> &EquationSystem {
        &self.system
    }

    pub fn sigma(&self) -> usize {
        self.polynomial.sparsity()
    }

    /// `N`, the number of system variables.
    pub fn n(&self) -> usize {
        self.witness.xprime.len()
    }

    /// `t`, the number of equations.
    pub fn t(&self) -> usize {
        self.witness.wvars.len()
    }

    /// `(t-1)(N+1) + sum_i s'_i`, an upper bound on the sparsity.
    pub fn sparsity_bound(&self) -> usize {
        let s: usize = self.system.equations().iter().map(SparsePoly::sparsity).sum();
        (self.t().saturating_sub(1)) * (self.n() + 1) + s
    }

    /// Shifts the `x_0..x_N` block by `b`, leaving `W` unshifted.
    pub fn shift_x(&self, b: &[RingElement]) -> Result<SparsePoly> {
        let n1 = self.n() + 1;
        if b.len() != n1 {
            return Err(Error::ArityMismatch { expected: n1, got: b.len() });
        }
        let mut full = b.to_vec();
        full.resize(self.polynomial.nvars(), self.polynomial.ring().zero());
        self.polynomial.shift(&full)
    }

    /// Maps a solution `a` of the system to `(-sum a, a_1, ..., a_N)`.
    pub fn solution_to_shift(&self, a: &[RingElement]) -> Result<Vec<RingElement>> {
        if !self.system.check_solution(a)? {
            return Err(Error::NotASolution);
        }
        let ring = self.polynomial.ring();
        let sum = a.iter().fold(ring.zero(), |acc, v| &acc + v);
        let mut b = Vec::with_capacity(a.len() + 1);
        b.push(-sum);
        b.extend_from_slice(a);
        Ok(b)
    }

    /// Recovers the solution from a zero-sum sparsifying shift.
    pub fn shift_to_solution(&self, b: &[RingElement]) -> Result<Vec<RingElement>> {
        let n1 = self.n() + 1;
        if b.len() != n1 {
            return Err(Error::ArityMismatch { expected: n1, got: b.len() });
        }
        if !is_zero_sum(b) {
            return Err(Error::ShiftStructure);
        }
        let before = self.sigma();
        let after = self.shift_x(b)?.sparsity();
        if after >= before {
            return Err(Error::NoReduction { before, after });
        }
        let a = b[1..].to_vec();
        if !self.system.check_solution(&a)? {
            return Err(Error::InternalConsistency(
                "a sparsifying zero-sum shift did not yield a solution".into(),
            ));
        }
        Ok(a)
    }

    /// True when every monomial has exactly one `W` variable, to the first power.
    pub fn is_w_linear(&self) -> bool {
        let w = &self.witness.wvars;
        let range = match (w.first(), w.last()) {
            (Some(&a), Some(&b)) => a..b + 1,
            _ => return self.polynomial.is_zero(),
        };
        self.polynomial.terms().all(|(m, _)| m.degree_in(range.clone()) == 1)
    }
}

/// Whether `b_0 = -(b_1 + ... + b_N)`.
pub fn is_zero_sum(b: &[RingElement]) -> bool {
    match b.first() {
        None => true,
        Some(b0) => b.iter().skip(1).fold(b0.clone(), |acc, v| &acc + v).is_zero(),
    }
}

/// A polynomial system in either input representation.
#[derive(Debug, Clone, Copy)]
pub enum SystemInput<'a> {
    Sparse(&'a EquationSystem),
    Circuits { circuits: &'a [Circuit], names: &'a [String] },
}

impl SystemInput<'_> {
    pub fn ring(&self) -> Result<RingSpec> {
        match self {
            SystemInput::Sparse(s) => Ok(s.ring()),
            SystemInput::Circuits { circuits, .. } => circuits
                .first()
                .map(Circuit::ring)
                .ok_or_else(|| Error::Precondition("no circuits given".into())),
        }
    }

    pub fn x_count(&self) -> usize {
        match self {
            SystemInput::Sparse(s) => s.nvars(),
            SystemInput::Circuits { names, .. } => names.len(),
        }
    }

    pub fn quadratize(&self) -> Result<Quadratized> {
        match self {
            SystemInput::Sparse(s) => quadratize_sparse(s),
            SystemInput::Circuits { circuits, names } => quadratize_circuits(circuits, names),
        }
    }

    /// Whether `a` (over the original variables) solves the input system.
    pub fn is_solution(&self, a: &[RingElement]) -> Result<bool> {
        match self {
            SystemInput::Sparse(s) => s.check_solution(a),
            SystemInput::Circuits { circuits, .. } => {
                for c in circuits.iter() {
                    if !c.eval(a)?.is_zero() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// A built instance together with the recipe extending original-variable
/// assignments to the full system catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnReduction {
    pub instance: HnInstance,
    pub recipe: ExtensionRecipe,
}

impl HnReduction {
    /// Extends an assignment of the original variables and maps it to a shift.
    pub fn shift_for(&self, x_values: &[RingElement]) -> Result<Vec<RingElement>> {
        let full = self.recipe.extend(x_values)?;
        self.instance.solution_to_shift(&full)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HnOutcome {
    Instance(HnReduction),
    /// The lowered system has no constant term; the zero vector solves it.
    TriviallySolvable { certificate: Vec<RingElement> },
}

/// Quadratize, normalize and build the instance.
pub fn reduce(input: SystemInput<'_>, gamma: &RingElement) -> Result<HnOutcome> {
    let ring = input.ring()?;
    require_non_field_domain(ring)?;
    let Quadratized { system, recipe } = input.quadratize()?;
    match normalize_constants(&system)? {
        Normalization::TriviallySolvable(_) => Ok(HnOutcome::TriviallySolvable {
            certificate: (0..input.x_count()).map(|_| ring.zero()).collect(),
        }),
        Normalization::Normalized(t) => {
            let instance = build_instance(&t, gamma)?;
            Ok(HnOutcome::Instance(HnReduction { instance, recipe }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn ints(v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| RingElement::from_i64(z(), x)).collect()
    }

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> SparsePoly {
        SparsePoly::from_int_terms(z(), nvars, terms).unwrap()
    }

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    fn single() -> EquationSystem {
        EquationSystem::raw(z(), names(1), vec![p(1, &[(&[1], 1), (&[0], -1)])]).unwrap()
    }

    fn two_eq() -> EquationSystem {
        EquationSystem::raw(
            z(),
            names(2),
            vec![p(2, &[(&[1, 0], 1), (&[0, 0], -1)]), p(2, &[(&[0, 1], 1), (&[2, 0], -1)])],
        )
        .unwrap()
    }

    #[test]
    fn single_equation_instance() {
        let inst = build_instance(&single(), &default_gamma()).unwrap();
        // catalog x0 x1 w1
        assert_eq!(inst.polynomial(), &p(3, &[(&[0, 1, 1], 1), (&[0, 0, 1], -1)]));
        assert_eq!(inst.sigma(), 2);
        assert!(inst.is_w_linear());
    }

    #[test]
    fn two_equation_instance_merges_linear_terms() {
        let inst = build_instance(&two_eq(), &default_gamma()).unwrap();
        // catalog x0 x1 x2 w1 w2
        let want = p(5, &[
            (&[0, 1, 0, 1, 0], 1),
            (&[0, 0, 0, 1, 0], -1),
            (&[0, 2, 0, 0, 1], -2),
            (&[1, 0, 0, 0, 1], 1),
            (&[0, 1, 0, 0, 1], 1),
            (&[0, 0, 1, 0, 1], 3),
        ]);
        assert_eq!(inst.polynomial(), &want);
        assert_eq!(inst.sigma(), 6);
        assert_eq!(inst.sparsity_bound(), 7);
        assert!(inst.polynomial().degree() <= 3);
    }

    #[test]
    fn fields_are_rejected() {
        let f5 = RingSpec::prime_field(5).unwrap();
        let s = EquationSystem::raw(f5, names(1), vec![SparsePoly::from_int_terms(f5, 1, &[(&[1], 1), (&[0], 1)]).unwrap()])
            .unwrap();
        let g = RingElement::from_i64(f5, 2);
        assert!(matches!(build_instance(&s, &g), Err(Error::UnsupportedDomain(_))));
        assert!(matches!(
            reduce(SystemInput::Sparse(&s), &g),
            Err(Error::UnsupportedDomain(_))
        ));
    }

    #[test]
    fn gamma_is_validated() {
        for g in [0, 1, -1] {
            let g = RingElement::from_i64(z(), g);
            assert!(matches!(build_instance(&single(), &g), Err(Error::InvalidGamma(_))));
        }
        assert!(build_instance(&single(), &RingElement::from_i64(z(), -3)).is_ok());
    }

    #[test]
    fn unnormalized_system_is_rejected() {
        let s = EquationSystem::raw(
            z(),
            names(2),
            vec![p(2, &[(&[1, 0], 1), (&[0, 0], 2)]), p(2, &[(&[0, 1], 1), (&[0, 0], 3)])],
        )
        .unwrap();
        assert!(matches!(build_instance(&s, &default_gamma()), Err(Error::Precondition(_))));
    }

    #[test]
    fn solution_to_shift_examples() {
        let inst = build_instance(&single(), &default_gamma()).unwrap();
        let b = inst.solution_to_shift(&ints(&[1])).unwrap();
        assert_eq!(b, ints(&[-1, 1]));
        let shifted = inst.shift_x(&b).unwrap();
        assert_eq!(shifted, p(3, &[(&[0, 1, 1], 1)]));

        let inst = build_instance(&two_eq(), &default_gamma()).unwrap();
        let b = inst.solution_to_shift(&ints(&[1, 1])).unwrap();
        assert_eq!(b, ints(&[-2, 1, 1]));
        let shifted = inst.shift_x(&b).unwrap();
        let want = p(5, &[
            (&[0, 1, 0, 1, 0], 1),
            (&[0, 2, 0, 0, 1], -2),
            (&[0, 1, 0, 0, 1], -3),
            (&[0, 0, 1, 0, 1], 3),
            (&[1, 0, 0, 0, 1], 1),
        ]);
        assert_eq!(shifted, want);
        assert_eq!(shifted.sparsity(), 5);

        assert!(matches!(inst.solution_to_shift(&ints(&[0, 0])), Err(Error::NotASolution)));
    }

    #[test]
    fn shift_to_solution_examples() {
        let inst = build_instance(&single(), &default_gamma()).unwrap();
        assert_eq!(inst.shift_to_solution(&ints(&[-1, 1])).unwrap(), ints(&[1]));
        assert!(matches!(
            inst.shift_to_solution(&ints(&[0, 0])),
            Err(Error::NoReduction { before: 2, after: 2 })
        ));
        assert!(matches!(inst.shift_to_solution(&ints(&[5, 1])), Err(Error::ShiftStructure)));
        assert!(matches!(inst.shift_to_solution(&ints(&[5])), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn reduce_cubic_system() {
        let s = EquationSystem::raw(z(), names(3), vec![p(3, &[(&[1, 1, 1], 1), (&[0, 0, 0], -1)])])
            .unwrap();
        let HnOutcome::Instance(r) = reduce(SystemInput::Sparse(&s), &default_gamma()).unwrap() else {
            panic!("expected an instance");
        };
        assert_eq!(r.instance.t(), 4);
        assert_eq!(r.instance.n(), 6);
        assert_eq!(r.instance.polynomial().nvars(), 7 + 4);
        assert!(r.instance.is_w_linear());

        let b = r.shift_for(&ints(&[1, 1, 1])).unwrap();
        assert_eq!(r.instance.shift_x(&b).unwrap().sparsity(), r.instance.sigma() - 1);
    }

    #[test]
    fn reduce_homogeneous_system_is_trivial() {
        let s = EquationSystem::raw(z(), names(2), vec![p(2, &[(&[1, 0], 1), (&[0, 1], -1)])]).unwrap();
        let out = reduce(SystemInput::Sparse(&s), &default_gamma()).unwrap();
        assert_eq!(out, HnOutcome::TriviallySolvable { certificate: ints(&[0, 0]) });
    }

    #[test]
    fn reduce_constant_system() {
        let s = EquationSystem::raw(z(), names(1), vec![p(1, &[(&[0], 2)])]).unwrap();
        let HnOutcome::Instance(r) = reduce(SystemInput::Sparse(&s), &default_gamma()).unwrap() else {
            panic!("expected an instance");
        };
        assert_eq!(r.instance.system().equations()[0].constant_term(), RingElement::from_i64(z(), 2));
        assert_eq!(r.instance.sigma(), 1);
    }

    #[test]
    fn zero_sum_check() {
        assert!(is_zero_sum(&ints(&[-3, 1, 2])));
        assert!(!is_zero_sum(&ints(&[3, 1, 2])));
        assert!(is_zero_sum(&ints(&[0])));
    }
}
