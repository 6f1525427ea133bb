use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::model::{LpModel, Sense, VarKind};
use super::simplex::solve_relaxation;
use super::{base_bounds, SolveResult, SolveStatus, SolverOptions, INTEGRALITY_TOL};

struct Node {
    /// Relaxation objective in minimization form.
    bound: f64,
    seq: u64,
    bounds: Vec<(f64, f64)>,
    relaxation: SolveResult,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap is a max-heap: smallest bound first, then oldest node.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Best-first branch-and-bound on the most fractional binary.
pub(crate) fn branch_and_bound(model: &LpModel, opts: &SolverOptions) -> SolveResult {
    let sign = match model.objective().sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let binaries: Vec<usize> = model
        .variables()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VarKind::Binary)
        .map(|(i, _)| i)
        .collect();

    let root_bounds = base_bounds(model);
    let root = solve_relaxation(model, &root_bounds, opts);
    let mut iterations = root.iterations;
    if root.status != SolveStatus::Optimal {
        return root;
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Node {
        bound: sign * root.objective,
        seq,
        bounds: root_bounds,
        relaxation: root,
    });
    let mut nodes = 0u64;
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let prune = |bound: f64, inc: &Option<(f64, Vec<f64>)>| {
        inc.as_ref()
            .is_some_and(|(best, _)| bound >= best - 1e-9 * (1.0 + best.abs()))
    };

    while let Some(node) = heap.pop() {
        if prune(node.bound, &incumbent) {
            continue;
        }
        let x = &node.relaxation.values;
        let frac = |i: usize| (x[i] - x[i].round()).abs();

        if binaries.iter().all(|&i| frac(i) <= INTEGRALITY_TOL) {
            // Snap binaries and re-solve the continuous part so the point is
            // exactly consistent with the rounded values.
            let mut fixed = node.bounds.clone();
            for &i in &binaries {
                let v = x[i].round();
                fixed[i] = (v, v);
            }
            let polished = solve_relaxation(model, &fixed, opts);
            iterations += polished.iterations;
            if polished.status == SolveStatus::Optimal {
                let obj = sign * polished.objective;
                if !prune(obj, &incumbent) {
                    incumbent = Some((obj, polished.values));
                }
                continue;
            }
        }

        let Some(&var) = binaries
            .iter()
            .filter(|&&i| frac(i) > 0.0 && node.bounds[i].0 != node.bounds[i].1)
            .min_by(|&&a, &&b| (x[a] - 0.5).abs().total_cmp(&(x[b] - 0.5).abs()).then(a.cmp(&b)))
        else {
            continue;
        };

        for value in [x[var].round(), 1.0 - x[var].round()] {
            if nodes >= opts.max_nodes {
                return finish(model, incumbent, SolveStatus::NodeLimit, iterations, nodes);
            }
            nodes += 1;
            let mut bounds = node.bounds.clone();
            bounds[var] = (value, value);
            let relaxation = solve_relaxation(model, &bounds, opts);
            iterations += relaxation.iterations;
            match relaxation.status {
                SolveStatus::Optimal => {
                    let bound = sign * relaxation.objective;
                    if !prune(bound, &incumbent) {
                        seq += 1;
                        heap.push(Node {
                            bound,
                            seq,
                            bounds,
                            relaxation,
                        });
                    }
                }
                SolveStatus::Infeasible => {}
                _ => return finish(model, incumbent, relaxation.status, iterations, nodes),
            }
        }
    }

    let status = if incumbent.is_some() {
        SolveStatus::Optimal
    } else {
        SolveStatus::Infeasible
    };
    finish(model, incumbent, status, iterations, nodes)
}

fn finish(
    model: &LpModel,
    incumbent: Option<(f64, Vec<f64>)>,
    status: SolveStatus,
    iterations: u64,
    nodes: u64,
) -> SolveResult {
    match incumbent {
        Some((_, values)) => SolveResult {
            status,
            objective: model.objective().value(&values),
            values,
            iterations,
            nodes,
        },
        None => SolveResult {
            status,
            values: Vec::new(),
            objective: f64::NAN,
            iterations,
            nodes,
        },
    }
}
