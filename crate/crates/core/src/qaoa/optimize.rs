//! Derivative-free minimization by linear approximation on a simplex, in the
//! spirit of COBYLA without constraints.
//!
//! The method keeps `n + 1` points whose differences span the search space.
//! Each iteration fits the linear interpolant through them and either steps
//! a distance `ρ` downhill from the best point or, when the simplex has grown
//! too wide or too flat for the model to be trusted, replaces one vertex to
//! restore its geometry. A failed downhill step halves `ρ`. The run ends when
//! `ρ` falls below the convergence tolerance or the iteration budget is spent.
//!
//! Building the starting simplex costs `n + 1` evaluations and is not counted
//! as an iteration; every later evaluation is one iteration.

use super::ansatz::{Backend, QaoaEvaluator};
use super::params::AnsatzParams;
use crate::error::Result;
use crate::qubo::Qubo;

/// Iteration budget applied when `max_iterations` is 0.
pub const DEFAULT_MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// 0 selects [`DEFAULT_MAX_ITERATIONS`]; 1 is the one-iteration mode.
    pub max_iterations: usize,
    /// Final trust-region radius.
    pub convergence_tol: f64,
    /// Initial trust-region radius.
    pub initial_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 0,
            convergence_tol: 1e-4,
            initial_step: 1.0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_max_iterations(max_iterations: usize) -> Self {
        Self {
            max_iterations,
            ..Self::default()
        }
    }

    pub fn one_iteration() -> Self {
        Self::with_max_iterations(1)
    }

    pub fn effective_max_iterations(&self) -> usize {
        if self.max_iterations == 0 {
            DEFAULT_MAX_ITERATIONS
        } else {
            self.max_iterations
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub f_initial: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// The trust region shrank below the tolerance before the budget ran out.
    pub converged: bool,
    /// Best objective seen after each iteration.
    pub history: Vec<f64>,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn argmin(vals: &[f64]) -> usize {
    let mut b = 0;
    for (i, &v) in vals.iter().enumerate() {
        if v < vals[b] {
            b = i;
        }
    }
    b
}

/// Solves `A g = r` by Gaussian elimination with partial pivoting. Rows are
/// pre-scaled to unit length; `None` when a pivot drops below `1e-8`.
fn solve(mut a: Vec<Vec<f64>>, mut r: Vec<f64>) -> Option<Vec<f64>> {
    let n = r.len();
    for i in 0..n {
        let s = a[i].iter().map(|v| v * v).sum::<f64>().sqrt();
        if s == 0.0 {
            return None;
        }
        a[i].iter_mut().for_each(|v| *v /= s);
        r[i] /= s;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-8 {
            return None;
        }
        a.swap(col, piv);
        r.swap(col, piv);
        for row in (col + 1)..n {
            let m = a[row][col] / a[col][col];
            if m != 0.0 {
                for k in col..n {
                    a[row][k] -= m * a[col][k];
                }
                r[row] -= m * r[col];
            }
        }
    }
    let mut g = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|k| a[i][k] * g[k]).sum();
        g[i] = (r[i] - s) / a[i][i];
    }
    Some(g)
}

/// Component of `v` orthogonal to the span of `basis`, by modified
/// Gram-Schmidt.
fn orthogonal_residual(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut u = b.clone();
        for o in &ortho {
            let d: f64 = u.iter().zip(o).map(|(x, y)| x * y).sum();
            u.iter_mut().zip(o).for_each(|(x, y)| *x -= d * y);
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            u.iter_mut().for_each(|x| *x /= norm);
            ortho.push(u);
        }
    }
    let mut r = v.to_vec();
    for o in &ortho {
        let d: f64 = r.iter().zip(o).map(|(x, y)| x * y).sum();
        r.iter_mut().zip(o).for_each(|(x, y)| *x -= d * y);
    }
    r
}

/// Minimizes `f` from `x0`. Non-finite objective values count as `+∞`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    cfg: &OptimizerConfig,
) -> MinimizeOutcome {
    let n = x0.len();
    let max_it = cfg.effective_max_iterations();
    let rho_end = cfg.convergence_tol.max(f64::MIN_POSITIVE);
    let mut rho = cfg.initial_step.max(rho_end);
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut pts = vec![x0.to_vec()];
    let mut vals = vec![eval(x0)];
    let f_initial = vals[0];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += rho;
        vals.push(eval(&p));
        pts.push(p);
    }
    let mut evaluations = n + 1;
    let mut iterations = 0;
    let mut converged = false;
    let mut history = Vec::new();

    if n == 0 {
        return MinimizeOutcome {
            x: pts.swap_remove(0),
            f: f_initial,
            f_initial,
            iterations,
            evaluations,
            converged: true,
            history,
        };
    }

    while iterations < max_it {
        if rho < rho_end {
            converged = true;
            break;
        }
        let b = argmin(&vals);
        let others: Vec<usize> = (0..=n).filter(|&i| i != b).collect();
        let edges: Vec<Vec<f64>> = others
            .iter()
            .map(|&i| pts[i].iter().zip(&pts[b]).map(|(x, y)| x - y).collect())
            .collect();
        let (far_pos, far_dist) = others
            .iter()
            .enumerate()
            .map(|(k, &i)| (k, dist(&pts[i], &pts[b])))
            .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let diffs: Vec<f64> = others.iter().map(|&i| vals[i] - vals[b]).collect();
        let grad = if vals.iter().all(|v| v.is_finite()) {
            solve(edges.clone(), diffs)
        } else {
            None
        };

        let geometry_target = match &grad {
            None => {
                // Replace the vertex least independent of the others.
                let mut worst = (0, f64::INFINITY);
                for k in 0..n {
                    let rest: Vec<Vec<f64>> = (0..n)
                        .filter(|&m| m != k)
                        .map(|m| edges[m].clone())
                        .collect();
                    let len = edges[k].iter().map(|x| x * x).sum::<f64>().sqrt();
                    let res = orthogonal_residual(&edges[k], &rest);
                    let r = res.iter().map(|x| x * x).sum::<f64>().sqrt() / len.max(1e-300);
                    let r = if vals[others[k]].is_finite() { r } else { -1.0 };
                    if r < worst.1 {
                        worst = (k, r);
                    }
                }
                Some(worst.0)
            }
            Some(_) if far_dist > 2.0 * rho => Some(far_pos),
            Some(_) => None,
        };

        if let Some(k) = geometry_target {
            let rest: Vec<Vec<f64>> = (0..n).filter(|&m| m != k).map(|m| edges[m].clone()).collect();
            let mut dir = orthogonal_residual(&edges[k], &rest);
            let mut norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-9 * edges[k].iter().map(|x| x.abs()).sum::<f64>().max(1e-300) {
                // Fall back to the coordinate axis with the largest residual.
                let mut best = (vec![0.0; n], 0.0);
                for axis in 0..n {
                    let mut e = vec![0.0; n];
                    e[axis] = 1.0;
                    let r = orthogonal_residual(&e, &rest);
                    let rn = r.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if rn > best.1 {
                        best = (r, rn);
                    }
                }
                dir = best.0;
                norm = best.1;
            }
            let p: Vec<f64> = pts[b]
                .iter()
                .zip(&dir)
                .map(|(x, d)| x + rho * d / norm)
                .collect();
            let v = eval(&p);
            if !v.is_finite() {
                rho /= 2.0;
            }
            pts[others[k]] = p;
            vals[others[k]] = v;
        } else {
            let g = grad.expect("model available");
            let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(gn > 0.0) || !gn.is_finite() {
                rho /= 2.0;
                continue;
            }
            let xt: Vec<f64> = pts[b]
                .iter()
                .zip(&g)
                .map(|(x, d)| x - rho * d / gn)
                .collect();
            let ft = eval(&xt);
            if ft < vals[b] {
                let k = others
                    .iter()
                    .copied()
                    .max_by(|&i, &j| dist(&pts[i], &xt).total_cmp(&dist(&pts[j], &xt)))
                    .expect("n ≥ 1");
                pts[k] = xt;
                vals[k] = ft;
            } else {
                if far_dist > rho {
                    pts[others[far_pos]] = xt;
                    vals[others[far_pos]] = ft;
                }
                rho /= 2.0;
            }
        }
        evaluations += 1;
        iterations += 1;
        history.push(vals[argmin(&vals)]);
    }
    if iterations >= max_it && rho < rho_end {
        converged = true;
    }
    let b = argmin(&vals);
    MinimizeOutcome {
        x: pts.swap_remove(b),
        f: vals[b],
        f_initial,
        iterations,
        evaluations,
        converged,
        history,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub params: AnsatzParams,
    pub objective: f64,
    pub initial_objective: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub history: Vec<f64>,
}

/// Minimizes the objective of `evaluator` over the `2p` angles.
pub fn optimize_with(
    evaluator: &QaoaEvaluator,
    init: &AnsatzParams,
    cfg: &OptimizerConfig,
) -> OptimizeResult {
    let out = minimize(
        |x| {
            let p = AnsatzParams::from_slice(x).expect("length preserved by the optimizer");
            evaluator.objective(&p)
        },
        &init.to_vec(),
        cfg,
    );
    OptimizeResult {
        params: AnsatzParams::from_slice(&out.x).expect("length preserved by the optimizer"),
        objective: out.f,
        initial_objective: out.f_initial,
        iterations: out.iterations,
        evaluations: out.evaluations,
        converged: out.converged,
        history: out.history,
    }
}

/// Exact-backend parameter optimization for `qubo`.
pub fn optimize_params(
    qubo: &Qubo,
    init: &AnsatzParams,
    cfg: &OptimizerConfig,
) -> Result<OptimizeResult> {
    let ev = QaoaEvaluator::new(qubo, Backend::Exact)?;
    Ok(optimize_with(&ev, init, cfg))
}
