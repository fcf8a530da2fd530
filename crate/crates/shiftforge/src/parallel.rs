//! Splits an enumeration into contiguous index ranges, scans them on scoped
//! threads and merges the partial results in range order.

use std::ops::Range;
use std::thread;

use shiftforge_core::hn::SystemInput;
use shiftforge_core::max3lin::Max3LinSystem;
use shiftforge_core::quadratize::EquationSystem;
use shiftforge_core::search::{
    max3lin_spaces, maxsat_range, plan_hn_roundtrip, search_min_sparsity_range, solve_system_range,
    HnRoundtripReport, HnRoundtripStart, Max3LinReport, MaxsatReport, Metric, PointSpace, SearchDomain,
    SearchReport, SolveReport,
};
use shiftforge_core::{Result, RingElement, SparsePoly};

/// `parts` contiguous ranges covering `0..size`, none empty unless `size == 0`.
pub fn split(size: u128, parts: usize) -> Vec<Range<u128>> {
    let parts = (parts.max(1) as u128).min(size.max(1));
    let (q, r) = (size / parts, size % parts);
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = 0;
    for i in 0..parts {
        let len = q + u128::from(i < r);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// Runs `f` on every range of the split, returning results in range order.
pub fn map_ranges<R, F>(size: u128, jobs: usize, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(Range<u128>) -> Result<R> + Sync,
{
    let ranges = split(size, jobs);
    if ranges.len() == 1 {
        return Ok(vec![f(ranges[0].clone())?]);
    }
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = ranges.into_iter().map(|r| s.spawn(move || f(r))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
            .collect()
    })
}

fn fold<R>(parts: Vec<R>, merge: impl Fn(R, R) -> R) -> R {
    let mut it = parts.into_iter();
    let first = it.next().expect("split always yields a range");
    it.fold(first, merge)
}

pub fn search_min_sparsity(p: &SparsePoly, dom: &SearchDomain, metric: Metric, jobs: usize) -> Result<SearchReport> {
    let space = PointSpace::new(p.ring(), p.nvars(), dom)?;
    search_space(p, &space, metric, jobs)
}

pub fn search_space(p: &SparsePoly, space: &PointSpace, metric: Metric, jobs: usize) -> Result<SearchReport> {
    let parts = map_ranges(space.size(), jobs, |r| search_min_sparsity_range(p, space, metric, r))?;
    Ok(fold(parts, SearchReport::merge))
}

pub fn solve(input: SystemInput<'_>, nvars: usize, dom: &SearchDomain, jobs: usize) -> Result<SolveReport> {
    let space = PointSpace::new(input.ring()?, nvars, dom)?;
    let parts = map_ranges(space.size(), jobs, |r| solve_system_range(input, &space, r))?;
    Ok(fold(parts, SolveReport::merge))
}

pub fn solve_system(s: &EquationSystem, dom: &SearchDomain, jobs: usize) -> Result<SolveReport> {
    solve(SystemInput::Sparse(s), s.nvars(), dom, jobs)
}

pub fn maxsat(l: &Max3LinSystem, dom: &SearchDomain, jobs: usize) -> Result<MaxsatReport> {
    let space = PointSpace::new(l.ring(), l.n(), dom)?;
    maxsat_space(l, &space, jobs)
}

fn maxsat_space(l: &Max3LinSystem, space: &PointSpace, jobs: usize) -> Result<MaxsatReport> {
    let parts = map_ranges(space.size(), jobs, |r| maxsat_range(l, space, r))?;
    Ok(fold(parts, MaxsatReport::merge))
}

pub fn verify_hn_roundtrip(
    input: SystemInput<'_>,
    gamma: &RingElement,
    box_bound: u64,
    point_cap: u64,
    jobs: usize,
) -> Result<HnRoundtripReport> {
    let plan = match plan_hn_roundtrip(input, gamma, box_bound, point_cap)? {
        HnRoundtripStart::Trivial(r) => return Ok(r),
        HnRoundtripStart::Plan(p) => p,
    };
    let sol = map_ranges(plan.solution_space.size(), jobs, |r| plan.check_solutions(r))?;
    let sh = map_ranges(plan.shift_space.size(), jobs, |r| plan.check_shifts(r))?;
    Ok(plan.report(fold(sol, |a, b| a.merge(b)), fold(sh, |a, b| a.merge(b))))
}

pub fn verify_max3lin(l: &Max3LinSystem, point_cap: u64, jobs: usize) -> Result<Max3LinReport> {
    let (q, shifts, assignments) = max3lin_spaces(l, point_cap)?;
    let min_nonconstant = search_space(&q, &shifts, Metric::Nonconstant, jobs)?;
    let maxsat = maxsat_space(l, &assignments, jobs)?;
    Ok(Max3LinReport { m: l.m(), min_nonconstant, maxsat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use shiftforge_core::RingSpec;

    #[test]
    fn split_covers_exactly() {
        for size in [0u128, 1, 5, 17, 100] {
            for parts in [1usize, 2, 3, 8, 200] {
                let rs = split(size, parts);
                assert_eq!(rs.first().unwrap().start, 0);
                assert_eq!(rs.last().unwrap().end, size);
                assert!(rs.windows(2).all(|w| w[0].end == w[1].start));
                assert!(size == 0 || rs.iter().all(|r| !r.is_empty()));
            }
        }
    }

    #[test]
    fn parallel_equals_serial() {
        let p = SparsePoly::from_int_terms(
            RingSpec::Integers,
            3,
            &[(&[2, 0, 0], 1), (&[1, 1, 0], 2), (&[0, 0, 1], -3), (&[0, 0, 0], 5)],
        )
        .unwrap();
        let dom = SearchDomain::integer_box(2);
        let serial = search_min_sparsity(&p, &dom, Metric::Total, 1).unwrap();
        for jobs in [2, 3, 4, 7] {
            assert_eq!(search_min_sparsity(&p, &dom, Metric::Total, jobs).unwrap(), serial);
        }
    }
}
