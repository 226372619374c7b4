use super::{check_weight, ObjectiveValues, OptimizerError, Placement, PlacementProblem};

/// p rounds, each adding the candidate whose inclusion gives the smallest
/// scalar objective; ties go to the smallest id.
pub fn solve_greedy(
    problem: &PlacementProblem,
    p: usize,
    w: f64,
) -> Result<(Placement, ObjectiveValues), OptimizerError> {
    check_weight(w)?;
    problem.check_p(p)?;
    let ranks = greedy_ranks(problem, p, w);
    Ok((problem.placement_of(&ranks), problem.evaluate_ranks(&ranks, w)))
}

/// Sorted candidate ranks picked greedily. Caller checks `p`.
pub(super) fn greedy_ranks(problem: &PlacementProblem, p: usize, w: f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(p);
    let mut trial: Vec<usize> = Vec::with_capacity(p);
    for _ in 0..p {
        let mut best: Option<(f64, usize)> = None;
        for r in 0..problem.candidates.len() {
            if chosen.contains(&r) {
                continue;
            }
            trial.clear();
            trial.extend_from_slice(&chosen);
            let at = trial.partition_point(|&x| x < r);
            trial.insert(at, r);
            let scalar = problem.evaluate_ranks(&trial, w).scalar;
            if best.map_or(true, |(b, _)| scalar < b) {
                best = Some((scalar, r));
            }
        }
        let (_, r) = best.expect("enough candidates");
        let at = chosen.partition_point(|&x| x < r);
        chosen.insert(at, r);
    }
    chosen
}
