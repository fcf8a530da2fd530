//! Brute-force oracles: minimum sparsity over a finite family of shifts,
//! least solutions of systems, and Max-3Lin optima.
//!
//! Every search enumerates a [`PointSpace`] by mixed-radix index, so any
//! contiguous index range can be scanned on its own and the partial
//! reports merged. Merging keeps the smallest value and, among equal
//! values, the lexicographically least point, which makes the result
//! independent of how the space was split.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::ops::Range;

use num_bigint::BigInt;

use crate::hn::{reduce, HnOutcome, HnReduction, SystemInput};
use crate::max3lin::{build_q_s, Max3LinSystem};
use crate::poly::SparsePoly;
use crate::quadratize::EquationSystem;
use crate::ring::{RingElement, RingSpec};
use crate::{Error, Result, DEFAULT_POINT_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainMode {
    /// Every element of a finite ring.
    ExhaustiveFinite,
    /// Integers in `[-B, B]`, over the integers or rationals.
    IntegerBox(u64),
    /// Rationals `n/d` with `n` and `d` in the given inclusive ranges, `d > 0`.
    RationalGrid { num: (i64, i64), den: (u64, u64) },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    None,
    /// The first coordinate is minus the sum of the others.
    ZeroSumFirstCoordinate,
    /// Only the last `n` coordinates may be nonzero.
    SupportedOnLastN(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchDomain {
    pub mode: DomainMode,
    pub restriction: Restriction,
    /// When set, only the first `k` coordinates are varied and the rest stay
    /// zero. The restriction applies within those `k`.
    pub leading: Option<usize>,
    pub point_cap: u64,
}

impl SearchDomain {
    pub fn new(mode: DomainMode) -> Self {
        SearchDomain { mode, restriction: Restriction::None, leading: None, point_cap: DEFAULT_POINT_CAP }
    }

    pub fn exhaustive() -> Self {
        Self::new(DomainMode::ExhaustiveFinite)
    }

    pub fn integer_box(b: u64) -> Self {
        Self::new(DomainMode::IntegerBox(b))
    }

    pub fn restricted(mut self, r: Restriction) -> Self {
        self.restriction = r;
        self
    }

    pub fn leading(mut self, k: usize) -> Self {
        self.leading = Some(k);
        self
    }

    pub fn with_point_cap(mut self, cap: u64) -> Self {
        self.point_cap = cap;
        self
    }

    /// Sorted candidate values for one coordinate.
    pub fn values(&self, ring: RingSpec) -> Result<Vec<RingElement>> {
        match &self.mode {
            DomainMode::ExhaustiveFinite => match ring.elements() {
                Some(it) => Ok(it.collect()),
                None => Err(Error::UnsupportedDomain(ring)),
            },
            DomainMode::IntegerBox(b) => {
                if !matches!(ring, RingSpec::Integers | RingSpec::Rationals) {
                    return Err(Error::UnsupportedDomain(ring));
                }
                let b = i64::try_from(*b).map_err(|_| Error::Precondition("box bound too large".into()))?;
                Ok((-b..=b).map(|v| RingElement::from_i64(ring, v)).collect())
            }
            DomainMode::RationalGrid { num, den } => {
                if ring != RingSpec::Rationals {
                    return Err(Error::UnsupportedDomain(ring));
                }
                if den.0 == 0 || den.0 > den.1 || num.0 > num.1 {
                    return Err(Error::Precondition("empty or invalid rational grid".into()));
                }
                let mut vals = Vec::new();
                for d in den.0..=den.1 {
                    for n in num.0..=num.1 {
                        vals.push(RingElement::from_ratio(ring, &BigInt::from(n), &BigInt::from(d))?);
                    }
                }
                vals.sort();
                vals.dedup();
                Ok(vals)
            }
        }
    }

    /// Whether the enumeration covers the whole ring per coordinate.
    pub fn is_complete(&self) -> bool {
        matches!(self.mode, DomainMode::ExhaustiveFinite)
    }
}

/// The enumerable set of points a domain describes in a given dimension.
#[derive(Debug, Clone)]
pub struct PointSpace {
    ring: RingSpec,
    dim: usize,
    values: Vec<RingElement>,
    free: Vec<usize>,
    dependent: Option<usize>,
    size: u128,
    complete: bool,
}

impl PointSpace {
    pub fn new(ring: RingSpec, dim: usize, dom: &SearchDomain) -> Result<Self> {
        let values = dom.values(ring)?;
        let active = dom.leading.unwrap_or(dim);
        if active > dim {
            return Err(Error::Precondition(format!("{active} leading coordinates requested of {dim}")));
        }
        let (free, dependent): (Vec<usize>, Option<usize>) = match dom.restriction {
            Restriction::None => ((0..active).collect(), None),
            Restriction::ZeroSumFirstCoordinate if active == 0 => (Vec::new(), None),
            Restriction::ZeroSumFirstCoordinate => ((1..active).collect(), Some(0)),
            Restriction::SupportedOnLastN(n) if n > active => {
                return Err(Error::Precondition(format!("support of {n} exceeds {active} coordinates")));
            }
            Restriction::SupportedOnLastN(n) => ((active - n..active).collect(), None),
        };
        let mut size: u128 = 1;
        for _ in &free {
            size = size.saturating_mul(values.len() as u128);
        }
        if size > dom.point_cap as u128 {
            return Err(Error::PointCapExceeded { needed: size, cap: dom.point_cap });
        }
        Ok(PointSpace { ring, dim, values, free, dependent, size, complete: dom.is_complete() })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of indices; some may be filtered out when a dependent
    /// coordinate leaves the value set.
    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    /// Points with index in `range`, in index order.
    pub fn points(&self, range: Range<u128>) -> PointIter<'_> {
        let end = range.end.min(self.size);
        let start = range.start.min(end);
        let base = self.values.len() as u128;
        let mut digits = alloc::vec![0usize; self.free.len()];
        let mut rest = start;
        for d in digits.iter_mut().rev() {
            *d = (rest % base) as usize;
            rest /= base;
        }
        PointIter { space: self, digits, next: start, end }
    }
}

pub struct PointIter<'a> {
    space: &'a PointSpace,
    digits: Vec<usize>,
    next: u128,
    end: u128,
}

impl Iterator for PointIter<'_> {
    type Item = Vec<RingElement>;

    fn next(&mut self) -> Option<Vec<RingElement>> {
        let s = self.space;
        while self.next < self.end {
            let mut point = alloc::vec![s.ring.zero(); s.dim];
            for (&pos, &d) in s.free.iter().zip(&self.digits) {
                point[pos] = s.values[d].clone();
            }
            self.next += 1;
            for d in self.digits.iter_mut().rev() {
                *d += 1;
                if *d < s.values.len() {
                    break;
                }
                *d = 0;
            }
            match s.dependent {
                None => return Some(point),
                Some(pos) => {
                    let sum = point.iter().fold(s.ring.zero(), |acc, v| &acc + v);
                    let v = -sum;
                    if s.values.binary_search(&v).is_ok() {
                        point[pos] = v;
                        return Some(point);
                    }
                }
            }
        }
        None
    }
}

type Best<K> = Option<(K, Vec<RingElement>)>;

fn keep_better<K: Ord>(best: &mut Best<K>, cand: (K, Vec<RingElement>)) {
    let replace = match best {
        None => true,
        Some((k, p)) => (&cand.0, &cand.1) < (&*k, &*p),
    };
    if replace {
        *best = Some(cand);
    }
}

fn scan<K: Ord>(
    space: &PointSpace,
    range: Range<u128>,
    mut score: impl FnMut(&[RingElement]) -> Result<Option<K>>,
) -> Result<(Best<K>, u64)> {
    let mut best = None;
    let mut points = 0u64;
    for p in space.points(range) {
        points += 1;
        if let Some(k) = score(&p)? {
            keep_better(&mut best, (k, p));
        }
    }
    Ok((best, points))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Total,
    Nonconstant,
}

impl Metric {
    pub fn measure(self, p: &SparsePoly) -> usize {
        match self {
            Metric::Total => p.sparsity(),
            Metric::Nonconstant => p.nonconstant_sparsity(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub min_sparsity: Option<usize>,
    pub witness: Option<Vec<RingElement>>,
    pub points: u64,
    pub complete: bool,
}

impl SearchReport {
    fn from_best(best: Best<usize>, points: u64, complete: bool) -> Self {
        let (min_sparsity, witness) = match best {
            Some((k, p)) => (Some(k), Some(p)),
            None => (None, None),
        };
        SearchReport { min_sparsity, witness, points, complete }
    }

    fn best(self) -> Best<usize> {
        self.min_sparsity.zip(self.witness)
    }

    pub fn merge(self, other: SearchReport) -> SearchReport {
        let (points, complete) = (self.points + other.points, self.complete && other.complete);
        let mut best = self.best();
        if let Some(c) = other.best() {
            keep_better(&mut best, c);
        }
        SearchReport::from_best(best, points, complete)
    }
}

pub fn search_min_sparsity_range(
    p: &SparsePoly,
    space: &PointSpace,
    metric: Metric,
    range: Range<u128>,
) -> Result<SearchReport> {
    let (best, points) = scan(space, range, |a| Ok(Some(metric.measure(&p.shift(a)?))))?;
    Ok(SearchReport::from_best(best, points, space.complete()))
}

pub fn search_min_sparsity(p: &SparsePoly, dom: &SearchDomain, metric: Metric) -> Result<SearchReport> {
    let space = PointSpace::new(p.ring(), p.nvars(), dom)?;
    search_min_sparsity_range(p, &space, metric, 0..space.size())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub solution: Option<Vec<RingElement>>,
    pub points: u64,
    pub complete: bool,
}

impl SolveReport {
    pub fn merge(self, other: SolveReport) -> SolveReport {
        let solution = match (self.solution, other.solution) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        SolveReport { solution, points: self.points + other.points, complete: self.complete && other.complete }
    }
}

pub fn solve_system_range(s: SystemInput<'_>, space: &PointSpace, range: Range<u128>) -> Result<SolveReport> {
    let (best, points) = scan(space, range, |a| Ok(s.is_solution(a)?.then_some(())))?;
    Ok(SolveReport { solution: best.map(|(_, p)| p), points, complete: space.complete() })
}

/// The lexicographically least solution in the domain, if any.
pub fn solve_system(s: &EquationSystem, dom: &SearchDomain) -> Result<SolveReport> {
    let space = PointSpace::new(s.ring(), s.nvars(), dom)?;
    solve_system_range(SystemInput::Sparse(s), &space, 0..space.size())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxsatReport {
    pub max_satisfied: Option<usize>,
    pub witness: Option<Vec<RingElement>>,
    pub points: u64,
    pub complete: bool,
}

impl MaxsatReport {
    fn best(self) -> Best<Reverse<usize>> {
        self.max_satisfied.map(Reverse).zip(self.witness)
    }

    fn from_best(best: Best<Reverse<usize>>, points: u64, complete: bool) -> Self {
        let (max_satisfied, witness) = match best {
            Some((Reverse(k), p)) => (Some(k), Some(p)),
            None => (None, None),
        };
        MaxsatReport { max_satisfied, witness, points, complete }
    }

    pub fn merge(self, other: MaxsatReport) -> MaxsatReport {
        let (points, complete) = (self.points + other.points, self.complete && other.complete);
        let mut best = self.best();
        if let Some(c) = other.best() {
            keep_better(&mut best, c);
        }
        MaxsatReport::from_best(best, points, complete)
    }
}

pub fn maxsat_range(l: &Max3LinSystem, space: &PointSpace, range: Range<u128>) -> Result<MaxsatReport> {
    let (best, points) = scan(space, range, |x| Ok(Some(Reverse(l.count_satisfied(x)?))))?;
    Ok(MaxsatReport::from_best(best, points, space.complete()))
}

pub fn maxsat(l: &Max3LinSystem, dom: &SearchDomain) -> Result<MaxsatReport> {
    let space = PointSpace::new(l.ring(), l.n(), dom)?;
    maxsat_range(l, &space, 0..space.size())
}

/// Outcome of checking one direction of the solution/shift correspondence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DirectionTally {
    /// Solutions found, or sparsifying shifts found.
    pub hits: u64,
    pub points: u64,
    pub violations: Vec<String>,
}

impl DirectionTally {
    pub fn merge(mut self, other: DirectionTally) -> DirectionTally {
        self.hits += other.hits;
        self.points += other.points;
        self.violations.extend(other.violations);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnRoundtripReport {
    /// Present when the system reduces to one without constants.
    pub certificate: Option<Vec<RingElement>>,
    pub sigma: usize,
    pub solutions: DirectionTally,
    pub shifts: DirectionTally,
}

impl HnRoundtripReport {
    pub fn violations(&self) -> impl Iterator<Item = &String> {
        self.solutions.violations.iter().chain(&self.shifts.violations)
    }

    pub fn consistent(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Box enumeration for the round trip: solutions over the original
/// variables, and zero-sum shifts over `x_0..x_N` with `W` unshifted.
pub struct HnRoundtripPlan<'a> {
    pub input: SystemInput<'a>,
    pub reduction: HnReduction,
    pub solution_space: PointSpace,
    pub shift_space: PointSpace,
}

pub enum HnRoundtripStart<'a> {
    Trivial(HnRoundtripReport),
    Plan(HnRoundtripPlan<'a>),
}

pub fn plan_hn_roundtrip<'a>(
    input: SystemInput<'a>,
    gamma: &RingElement,
    box_bound: u64,
    point_cap: u64,
) -> Result<HnRoundtripStart<'a>> {
    let reduction = match reduce(input, gamma)? {
        HnOutcome::TriviallySolvable { certificate } => {
            return Ok(HnRoundtripStart::Trivial(HnRoundtripReport {
                certificate: Some(certificate),
                sigma: 0,
                solutions: DirectionTally::default(),
                shifts: DirectionTally::default(),
            }));
        }
        HnOutcome::Instance(r) => r,
    };
    let ring = input.ring()?;
    let dom = SearchDomain::integer_box(box_bound).with_point_cap(point_cap);
    let solution_space = PointSpace::new(ring, input.x_count(), &dom)?;
    let inst = &reduction.instance;
    let shift_dom = dom
        .restricted(Restriction::ZeroSumFirstCoordinate)
        .leading(inst.n() + 1);
    let shift_space = PointSpace::new(ring, inst.n() + 1, &shift_dom)?;
    Ok(HnRoundtripStart::Plan(HnRoundtripPlan { input, reduction, solution_space, shift_space }))
}

fn render(v: &[RingElement]) -> String {
    let parts: Vec<String> = v.iter().map(|e| format!("{e}")).collect();
    parts.join(",")
}

impl HnRoundtripPlan<'_> {
    /// Every in-box solution must map to a shift leaving exactly `sigma - 1` terms.
    pub fn check_solutions(&self, range: Range<u128>) -> Result<DirectionTally> {
        let inst = &self.reduction.instance;
        let sigma = inst.sigma();
        let mut tally = DirectionTally::default();
        for x in self.solution_space.points(range) {
            tally.points += 1;
            if !self.input.is_solution(&x)? {
                continue;
            }
            tally.hits += 1;
            let after = match self.reduction.shift_for(&x) {
                Ok(b) => inst.shift_x(&b)?.sparsity(),
                Err(e) => {
                    tally.violations.push(format!("solution ({}) has no shift: {e}", render(&x)));
                    continue;
                }
            };
            if after + 1 != sigma {
                tally
                    .violations
                    .push(format!("solution ({}) shifts to {after} terms, not {}", render(&x), sigma - 1));
            }
        }
        Ok(tally)
    }

    /// Every in-box zero-sum sparsifying shift must yield a solution.
    pub fn check_shifts(&self, range: Range<u128>) -> Result<DirectionTally> {
        let inst = &self.reduction.instance;
        let sigma = inst.sigma();
        let xs = self.input.x_count();
        let mut tally = DirectionTally::default();
        for b in self.shift_space.points(range) {
            tally.points += 1;
            if inst.shift_x(&b)?.sparsity() >= sigma {
                continue;
            }
            tally.hits += 1;
            match inst.shift_to_solution(&b) {
                Ok(a) => {
                    if !self.input.is_solution(&a[..xs])? {
                        tally
                            .violations
                            .push(format!("shift ({}) projects to a non-solution", render(&b)));
                    }
                }
                Err(e) => tally.violations.push(format!("shift ({}) fails: {e}", render(&b))),
            }
        }
        Ok(tally)
    }

    pub fn report(&self, solutions: DirectionTally, shifts: DirectionTally) -> HnRoundtripReport {
        HnRoundtripReport { certificate: None, sigma: self.reduction.instance.sigma(), solutions, shifts }
    }
}

pub fn verify_hn_roundtrip(
    input: SystemInput<'_>,
    gamma: &RingElement,
    box_bound: u64,
) -> Result<HnRoundtripReport> {
    match plan_hn_roundtrip(input, gamma, box_bound, DEFAULT_POINT_CAP)? {
        HnRoundtripStart::Trivial(r) => Ok(r),
        HnRoundtripStart::Plan(plan) => {
            let sol = plan.check_solutions(0..plan.solution_space.size())?;
            let sh = plan.check_shifts(0..plan.shift_space.size())?;
            Ok(plan.report(sol, sh))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Max3LinReport {
    pub m: usize,
    pub min_nonconstant: SearchReport,
    pub maxsat: MaxsatReport,
}

impl Max3LinReport {
    /// `4m - maxsat`.
    pub fn expected(&self) -> Option<usize> {
        self.maxsat.max_satisfied.map(|k| 4 * self.m - k)
    }

    pub fn holds(&self) -> bool {
        self.min_nonconstant.min_sparsity.is_some() && self.min_nonconstant.min_sparsity == self.expected()
    }
}

/// The spaces the Max-3Lin check enumerates: all shifts of `Q_S`, and all
/// assignments.
pub fn max3lin_spaces(l: &Max3LinSystem, point_cap: u64) -> Result<(SparsePoly, PointSpace, PointSpace)> {
    if !l.ring().is_finite() {
        return Err(Error::UnsupportedDomain(l.ring()));
    }
    let q = build_q_s(l, &l.ring().one())?;
    let dom = SearchDomain::exhaustive().with_point_cap(point_cap);
    let shifts = PointSpace::new(l.ring(), q.w(), &dom)?;
    let assignments = PointSpace::new(l.ring(), l.n(), &dom)?;
    Ok((q.polynomial().clone(), shifts, assignments))
}

/// Compares the exhaustive minimum nonconstant sparsity of `Q_S` (with
/// `e_0 = 1`) against `4m - maxsat`.
pub fn verify_max3lin(l: &Max3LinSystem) -> Result<Max3LinReport> {
    let (q, shifts, assignments) = max3lin_spaces(l, DEFAULT_POINT_CAP)?;
    let min_nonconstant = search_min_sparsity_range(&q, &shifts, Metric::Nonconstant, 0..shifts.size())?;
    let maxsat = maxsat_range(l, &assignments, 0..assignments.size())?;
    Ok(Max3LinReport { m: l.m(), min_nonconstant, maxsat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hn::default_gamma;
    use crate::max3lin::Row;
    use alloc::vec;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn ints(ring: RingSpec, v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| RingElement::from_i64(ring, x)).collect()
    }

    fn system(nvars: usize, eqs: &[&[(&[u32], i64)]]) -> EquationSystem {
        let names = (1..=nvars).map(|i| format!("x{i}")).collect();
        let eqs = eqs.iter().map(|t| SparsePoly::from_int_terms(z(), nvars, t).unwrap()).collect();
        EquationSystem::raw(z(), names, eqs).unwrap()
    }

    fn f2_row(vars: [usize; 3], b: i64) -> Row {
        let f2 = RingSpec::prime_field(2).unwrap();
        Row { vars, coeffs: [f2.one(), f2.one(), f2.one()], b: RingElement::from_i64(f2, b) }
    }

    #[test]
    fn box_search_examples() {
        let p = SparsePoly::from_int_terms(z(), 1, &[(&[2], 1), (&[1], 2), (&[0], 1)]).unwrap();
        let r = search_min_sparsity(&p, &SearchDomain::integer_box(2), Metric::Total).unwrap();
        assert_eq!(r.min_sparsity, Some(1));
        assert_eq!(r.witness, Some(ints(z(), &[-1])));
        assert_eq!(r.points, 5);
        assert!(!r.complete);

        let c = SparsePoly::from_int_terms(z(), 2, &[(&[0, 0], 7)]).unwrap();
        let r = search_min_sparsity(&c, &SearchDomain::integer_box(1), Metric::Total).unwrap();
        assert_eq!(r.min_sparsity, Some(1));
        assert_eq!(r.witness, Some(ints(z(), &[-1, -1])));
    }

    #[test]
    fn exhaustive_q_s_example() {
        let f2 = RingSpec::prime_field(2).unwrap();
        let l = Max3LinSystem::new(f2, 3, vec![f2_row([0, 1, 2], 1)]).unwrap();
        let q = build_q_s(&l, &f2.one()).unwrap();
        let r = search_min_sparsity(q.polynomial(), &SearchDomain::exhaustive(), Metric::Nonconstant).unwrap();
        assert_eq!(r.min_sparsity, Some(3));
        assert_eq!(r.points, 64);
        assert!(r.complete);
        let w = r.witness.unwrap();
        assert_eq!(q.polynomial().shift(&w).unwrap().nonconstant_sparsity(), 3);
    }

    #[test]
    fn domain_guards() {
        let p = SparsePoly::from_int_terms(z(), 1, &[(&[1], 1)]).unwrap();
        assert!(matches!(
            search_min_sparsity(&p, &SearchDomain::exhaustive(), Metric::Total),
            Err(Error::UnsupportedDomain(_))
        ));
        let f3 = RingSpec::prime_field(3).unwrap();
        let q = SparsePoly::from_int_terms(f3, 1, &[(&[1], 1)]).unwrap();
        assert!(search_min_sparsity(&q, &SearchDomain::integer_box(1), Metric::Total).is_err());
        let big = SparsePoly::from_int_terms(z(), 8, &[(&[1, 0, 0, 0, 0, 0, 0, 0], 1)]).unwrap();
        let dom = SearchDomain::integer_box(10).with_point_cap(1000);
        assert!(search_min_sparsity(&big, &dom, Metric::Total).unwrap_err().is_cap_exceeded());
    }

    #[test]
    fn restrictions_shape_points() {
        let dom = SearchDomain::integer_box(1).restricted(Restriction::ZeroSumFirstCoordinate);
        let space = PointSpace::new(z(), 3, &dom).unwrap();
        let pts: Vec<_> = space.points(0..space.size()).collect();
        assert_eq!(pts.len(), 7);
        assert!(pts.iter().all(|p| crate::hn::is_zero_sum(p)));

        let dom = SearchDomain::integer_box(1).restricted(Restriction::SupportedOnLastN(1)).leading(2);
        let space = PointSpace::new(z(), 4, &dom).unwrap();
        let pts: Vec<_> = space.points(0..space.size()).collect();
        assert_eq!(pts, vec![ints(z(), &[0, -1, 0, 0]), ints(z(), &[0, 0, 0, 0]), ints(z(), &[0, 1, 0, 0])]);
    }

    #[test]
    fn partitioned_scans_agree() {
        let p = SparsePoly::from_int_terms(z(), 2, &[(&[2, 0], 1), (&[0, 1], 3), (&[1, 0], 2), (&[0, 0], 1)])
            .unwrap();
        let dom = SearchDomain::integer_box(2);
        let whole = search_min_sparsity(&p, &dom, Metric::Total).unwrap();
        let space = PointSpace::new(z(), 2, &dom).unwrap();
        let parts = [0..7, 7..8, 8..25];
        let merged = parts
            .iter()
            .map(|r| search_min_sparsity_range(&p, &space, Metric::Total, r.clone()).unwrap())
            .reduce(SearchReport::merge)
            .unwrap();
        assert_eq!(whole, merged);
    }

    #[test]
    fn rational_grid() {
        let q = RingSpec::Rationals;
        let dom = SearchDomain::new(DomainMode::RationalGrid { num: (-1, 1), den: (1, 2) });
        assert_eq!(dom.values(q).unwrap().len(), 5);
        assert!(dom.values(z()).is_err());
        let p = SparsePoly::from_int_terms(q, 1, &[(&[1], 2), (&[0], 1)]).unwrap();
        let r = search_min_sparsity(&p, &dom, Metric::Total).unwrap();
        assert_eq!(r.min_sparsity, Some(1));
        assert_eq!(format!("{}", r.witness.unwrap()[0]), "-1/2");
    }

    #[test]
    fn solve_examples() {
        let s = system(1, &[&[(&[1], 1), (&[0], -1)]]);
        assert_eq!(solve_system(&s, &SearchDomain::integer_box(2)).unwrap().solution, Some(ints(z(), &[1])));
        let s = system(1, &[&[(&[2], 1), (&[0], 1)]]);
        assert_eq!(solve_system(&s, &SearchDomain::integer_box(3)).unwrap().solution, None);
        let s = system(3, &[&[(&[1, 1, 1], 1), (&[0, 0, 0], -1)]]);
        assert_eq!(
            solve_system(&s, &SearchDomain::integer_box(1)).unwrap().solution,
            Some(ints(z(), &[-1, -1, 1]))
        );
    }

    #[test]
    fn maxsat_examples() {
        let f2 = RingSpec::prime_field(2).unwrap();
        let l = Max3LinSystem::new(f2, 3, vec![f2_row([0, 1, 2], 1)]).unwrap();
        assert_eq!(maxsat(&l, &SearchDomain::exhaustive()).unwrap().max_satisfied, Some(1));
        let l = Max3LinSystem::new(f2, 3, vec![f2_row([0, 1, 2], 0), f2_row([0, 1, 2], 1)]).unwrap();
        assert_eq!(maxsat(&l, &SearchDomain::exhaustive()).unwrap().max_satisfied, Some(1));
    }

    #[test]
    fn hn_roundtrip_examples() {
        let s = system(1, &[&[(&[1], 1), (&[0], -1)]]);
        let r = verify_hn_roundtrip(SystemInput::Sparse(&s), &default_gamma(), 2).unwrap();
        assert!(r.consistent());
        assert_eq!((r.solutions.hits, r.shifts.hits), (1, 1));

        let s = system(1, &[&[(&[2], 1), (&[0], 1)]]);
        let r = verify_hn_roundtrip(SystemInput::Sparse(&s), &default_gamma(), 2).unwrap();
        assert!(r.consistent());
        assert_eq!((r.solutions.hits, r.shifts.hits), (0, 0));

        let s = system(2, &[&[(&[1, 1], 1)]]);
        let r = verify_hn_roundtrip(SystemInput::Sparse(&s), &default_gamma(), 2).unwrap();
        assert_eq!(r.certificate, Some(ints(z(), &[0, 0])));
        assert!(r.consistent());
    }

    #[test]
    fn max3lin_identity_examples() {
        let f2 = RingSpec::prime_field(2).unwrap();
        let one = Max3LinSystem::new(f2, 3, vec![f2_row([0, 1, 2], 1)]).unwrap();
        let r = verify_max3lin(&one).unwrap();
        assert_eq!((r.min_nonconstant.min_sparsity, r.expected()), (Some(3), Some(3)));
        assert!(r.holds());

        let two = Max3LinSystem::new(f2, 3, vec![f2_row([0, 1, 2], 0), f2_row([0, 1, 2], 1)]).unwrap();
        let r = verify_max3lin(&two).unwrap();
        assert_eq!(r.min_nonconstant.min_sparsity, Some(7));
        assert!(r.holds());

        let empty = Max3LinSystem::new(f2, 1, vec![]).unwrap();
        let r = verify_max3lin(&empty).unwrap();
        assert_eq!(r.min_nonconstant.min_sparsity, Some(0));
        assert!(r.holds());
    }
}
