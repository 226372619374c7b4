use std::collections::BTreeMap;

use super::exact::{solve_exact, SolverOptions};
use super::{ObjectiveValues, OptimizerError, Placement, PlacementProblem};
use crate::network::NodeId;

/// One maximal run of consecutive grid weights sharing an optimal placement.
/// `values` are evaluated at `w_high`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoRecord {
    pub w_low: f64,
    pub w_high: f64,
    pub placement: Placement,
    pub values: ObjectiveValues,
}

/// Ascending weights 0..=1. When 1/step is an integer m the points are k/m,
/// which avoids drift from repeated addition.
pub fn weight_grid(step: f64) -> Result<Vec<f64>, OptimizerError> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(OptimizerError::InvalidArgument(format!("grid step {step} outside (0, 0.5]")));
    }
    let m = (1.0 / step).round();
    if (m * step - 1.0).abs() < 1e-9 {
        let m = m as usize;
        return Ok((0..=m).map(|k| k as f64 / m as f64).collect());
    }
    let mut grid: Vec<f64> = (0..)
        .map(|k| k as f64 * step)
        .take_while(|&w| w < 1.0 - 1e-12)
        .collect();
    grid.push(1.0);
    Ok(grid)
}

/// Solves the scalarised problem exactly on every grid weight and merges
/// runs of identical placements. Records come in descending weight order.
pub fn pareto_sweep(
    problem: &PlacementProblem,
    p: usize,
    step: f64,
    opts: SolverOptions,
) -> Result<Vec<ParetoRecord>, OptimizerError> {
    let grid = weight_grid(step)?;
    let mut records: Vec<ParetoRecord> = Vec::new();
    for &w in grid.iter().rev() {
        let (placement, values) = solve_exact(problem, p, w, opts)?;
        match records.last_mut() {
            Some(last) if last.placement == placement => last.w_low = w,
            _ => records.push(ParetoRecord {
                w_low: w,
                w_high: w,
                placement,
                values,
            }),
        }
    }
    Ok(records)
}

/// The p nodes occurring in the most records, ties by smaller id, returned
/// sorted by id.
pub fn most_frequent(records: &[ParetoRecord], p: usize) -> Vec<NodeId> {
    let mut counts: BTreeMap<&NodeId, usize> = BTreeMap::new();
    for rec in records {
        for id in rec.placement.ids() {
            *counts.entry(id).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&NodeId, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut top: Vec<NodeId> = ranked.into_iter().take(p).map(|(id, _)| id.clone()).collect();
    top.sort();
    top
}
