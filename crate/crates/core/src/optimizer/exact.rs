//! Exact cardinality-constrained placement by depth-first branch and bound.
//!
//! Subsets are grown in increasing candidate rank, so leaves are visited in
//! lexicographic order. At a node with `r` slots left the bound combines two
//! relaxations: coverage is submodular, so the `r` largest marginal coverage
//! gains over-estimate what any completion can add to F1's covered pairs;
//! F2 is modular, so the `r` largest remaining gains over-estimate F2.

use super::greedy::greedy_ranks;
use super::{check_weight, ObjectiveValues, OptimizerError, Placement, PlacementProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Enumerate every subset instead of branching when there are at most
    /// this many candidates.
    pub exhaustive_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { exhaustive_threshold: 12 }
    }
}

struct Incumbent {
    scalar: f64,
    secondary: f64,
    ranks: Vec<usize>,
}

impl Incumbent {
    fn new(values: ObjectiveValues, ranks: Vec<usize>) -> Self {
        Incumbent {
            scalar: values.scalar,
            secondary: secondary_key(&values),
            ranks,
        }
    }

    fn offer(&mut self, values: ObjectiveValues, ranks: &[usize]) {
        let key = (values.scalar, secondary_key(&values));
        let better = match key.0.total_cmp(&self.scalar).then(key.1.total_cmp(&self.secondary)) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => ranks < self.ranks.as_slice(),
            std::cmp::Ordering::Greater => false,
        };
        if better {
            self.scalar = key.0;
            self.secondary = key.1;
            self.ranks = ranks.to_vec();
        }
    }

    /// A bound only prunes when it is clearly worse, so equal-scalar
    /// subsets still reach the tie-break.
    fn beats(&self, bound: f64) -> bool {
        bound > self.scalar + 1e-9 * (1.0 + self.scalar.abs())
    }
}

/// At W = 1 the scalar ignores F2 and at W = 0 it ignores F1. Equal-scalar
/// placements are first separated by the ignored objective so that the
/// winner is never dominated; the id order decides after that.
pub(super) fn secondary_key(values: &ObjectiveValues) -> f64 {
    if values.w == 1.0 {
        -values.f2
    } else if values.w == 0.0 {
        values.f1
    } else {
        0.0
    }
}

pub fn solve_exact(
    problem: &PlacementProblem,
    p: usize,
    w: f64,
    opts: SolverOptions,
) -> Result<(Placement, ObjectiveValues), OptimizerError> {
    check_weight(w)?;
    problem.check_p(p)?;
    if problem.candidates.len() <= opts.exhaustive_threshold {
        return solve_exhaustive(problem, p, w);
    }

    let seed = greedy_ranks(problem, p, w);
    let mut best = Incumbent::new(problem.evaluate_ranks(&seed, w), seed);
    let mut search = Search {
        problem,
        p,
        w,
        chosen: Vec::with_capacity(p),
    };
    let covered = vec![0u64; problem.rel.words_per_row()];
    search.descend(0, &covered, 0.0, &mut best);

    let values = problem.evaluate_ranks(&best.ranks, w);
    Ok((problem.placement_of(&best.ranks), values))
}

struct Search<'a, 'p> {
    problem: &'a PlacementProblem<'p>,
    p: usize,
    w: f64,
    chosen: Vec<usize>,
}

impl Search<'_, '_> {
    fn descend(&mut self, start: usize, covered: &[u64], f2: f64, best: &mut Incumbent) {
        let problem = self.problem;
        let c = problem.candidates.len();
        let left = self.p - self.chosen.len();
        if left == 0 {
            let values = problem.evaluate_ranks(&self.chosen, self.w);
            best.offer(values, &self.chosen);
            return;
        }
        if c - start < left {
            return;
        }

        let uncovered = problem.uncovered_count(covered);
        let mut cover_gains: Vec<usize> = Vec::with_capacity(c - start);
        let mut f2_gains: Vec<f64> = Vec::with_capacity(c - start);
        for r in start..c {
            let j = problem.candidates[r];
            let fresh: usize = problem
                .rel
                .sensor_row(j)
                .iter()
                .zip(covered)
                .map(|(row, cov)| (row & !cov).count_ones() as usize)
                .sum();
            cover_gains.push(fresh);
            f2_gains.push(problem.gains[j]);
        }
        if best.beats(self.bound(uncovered, f2, left, &mut cover_gains, &mut f2_gains)) {
            return;
        }

        let mut next = vec![0u64; covered.len()];
        for r in start..=(c - left) {
            let j = problem.candidates[r];
            for ((n, cov), row) in next.iter_mut().zip(covered).zip(problem.rel.sensor_row(j)) {
                *n = cov | row;
            }
            self.chosen.push(r);
            self.descend(r + 1, &next, f2 + problem.gains[j], best);
            self.chosen.pop();
        }
    }

    fn bound(&self, uncovered: usize, f2: f64, left: usize, cover: &mut [usize], gains: &mut [f64]) -> f64 {
        cover.sort_unstable_by(|a, b| b.cmp(a));
        gains.sort_unstable_by(|a, b| b.total_cmp(a));
        let reachable: usize = cover[..left].iter().sum();
        let f1_lb = uncovered.saturating_sub(reachable) as f64 / self.problem.normaliser;
        let f2_ub = gains[..left].iter().fold(f2, |acc, g| acc + g);
        self.w * f1_lb - (1.0 - self.w) * f2_ub
    }
}

/// Enumerates all C(candidates, p) subsets.
pub fn solve_exhaustive(
    problem: &PlacementProblem,
    p: usize,
    w: f64,
) -> Result<(Placement, ObjectiveValues), OptimizerError> {
    check_weight(w)?;
    problem.check_p(p)?;
    let c = problem.candidates.len();
    let mut ranks: Vec<usize> = (0..p).collect();
    let mut best = Incumbent::new(problem.evaluate_ranks(&ranks, w), ranks.clone());
    loop {
        best.offer(problem.evaluate_ranks(&ranks, w), &ranks);
        // next combination in lexicographic order
        let Some(k) = (0..p).rev().find(|&k| ranks[k] < c - p + k) else {
            break;
        };
        ranks[k] += 1;
        for m in k + 1..p {
            ranks[m] = ranks[m - 1] + 1;
        }
    }
    let values = problem.evaluate_ranks(&best.ranks, w);
    Ok((problem.placement_of(&best.ranks), values))
}
