//! Dense two-phase primal simplex with Bland's rule.
//!
//! All variables are implicitly nonnegative. The solver is deterministic:
//! entering and leaving variables are always the lowest eligible index.

use std::fmt;

/// Constraint residual tolerance for reporting a point as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Entries below this magnitude are never pivoted on.
pub const PIVOT_TOL: f64 = 1e-12;
/// Reduced costs below this are treated as non-improving.
const COST_TOL: f64 = 1e-10;
/// Residuals above this after a solve are reported as numerical failure.
const RESIDUAL_FAIL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::NumericalFailure => "numerical failure",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    /// Shadow price of each constraint: the rate of change of the optimal
    /// objective per unit increase of its right-hand side. Empty unless
    /// optimal.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        LpProblem { sense, objective, constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width must match variable count");
        assert!(rhs.is_finite(), "bounds must be finite");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Adds a constraint from sparse `(variable, coefficient)` terms.
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) {
        let mut coeffs = vec![0.0; self.num_vars()];
        for &(j, a) in terms {
            coeffs[j] += a;
        }
        self.add(coeffs, relation, rhs);
    }

    /// Largest constraint violation of `x` (including negativity).
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            let viol = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// The dual program, rewritten so that every dual variable is nonnegative.
    ///
    /// Dual variables of equality rows are split into a difference of two
    /// nonnegative variables, and sign-restricted ones are negated. At
    /// optimality both programs have the same value.
    pub fn dual(&self) -> LpProblem {
        // Sign of each dual variable in the textbook dual: +1 nonnegative,
        // -1 nonpositive, 0 free.
        let sign = |rel: Relation| match (self.sense, rel) {
            (Sense::Max, Relation::Le) | (Sense::Min, Relation::Ge) => 1.0,
            (Sense::Max, Relation::Ge) | (Sense::Min, Relation::Le) => -1.0,
            (_, Relation::Eq) => 0.0,
        };
        // Columns of the rewritten dual: (row, multiplier).
        let mut cols = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            match sign(c.relation) {
                0.0 => {
                    cols.push((i, 1.0));
                    cols.push((i, -1.0));
                }
                s => cols.push((i, s)),
            }
        }
        let dual_sense = match self.sense {
            Sense::Max => Sense::Min,
            Sense::Min => Sense::Max,
        };
        let objective = cols.iter().map(|&(i, s)| s * self.constraints[i].rhs).collect();
        let mut dual = LpProblem::new(dual_sense, objective);
        let relation = match self.sense {
            Sense::Max => Relation::Ge,
            Sense::Min => Relation::Le,
        };
        for j in 0..self.num_vars() {
            let coeffs = cols.iter().map(|&(i, s)| s * self.constraints[i].coeffs[j]).collect();
            dual.add(coeffs, relation, self.objective[j]);
        }
        dual
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    rows: usize,
    width: usize, // number of columns excluding rhs
    data: Vec<f64>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    iterations: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.width + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width + 1;
        let p = self.data[r * w + c];
        for j in 0..w {
            self.data[r * w + j] /= p;
        }
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.iterations += 1;
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for a maximization objective.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r = cost.to_vec();
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (j, rj) in r.iter_mut().enumerate() {
                    *rj -= cb * self.at(i, j);
                }
            }
        }
        r
    }

    /// Runs Bland-rule simplex iterations maximizing `cost`.
    fn optimize(&mut self, cost: &[f64], allow: impl Fn(usize) -> bool, limit: usize) -> LpStatus {
        let mut reduced = self.reduced_costs(cost);
        loop {
            if self.iterations >= limit {
                return LpStatus::NumericalFailure;
            }
            let Some(c) = (0..self.width).find(|&j| allow(j) && reduced[j] > COST_TOL) else {
                return LpStatus::Optimal;
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..self.rows {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    let better = match best {
                        None => true,
                        Some((br, _, bb)) => {
                            ratio < br - 1e-12 || (ratio <= br + 1e-12 && self.basis[i] < bb)
                        }
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let Some((_, r, _)) = best else {
                return LpStatus::Unbounded;
            };
            self.pivot(r, c);
            let f = reduced[c];
            if f != 0.0 {
                for (j, rj) in reduced.iter_mut().enumerate() {
                    *rj -= f * self.at(r, j);
                }
                reduced[c] = 0.0;
            }
        }
    }
}

/// Solves `p` with the two-phase simplex method.
pub fn lp_solve(p: &LpProblem) -> LpSolution {
    let n = p.num_vars();
    let m = p.constraints.len();
    let fail = |status, iterations| LpSolution {
        status,
        objective: f64::NAN,
        x: Vec::new(),
        duals: Vec::new(),
        iterations,
    };

    // Row normalization so that every right-hand side is nonnegative.
    let mut flips = Vec::with_capacity(m);
    let mut rels = Vec::with_capacity(m);
    for c in &p.constraints {
        let flip = if c.rhs < 0.0 { -1.0 } else { 1.0 };
        let rel = match (c.relation, flip < 0.0) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (r, _) => r,
        };
        flips.push(flip);
        rels.push(rel);
    }
    let n_slack = rels.iter().filter(|r| **r != Relation::Eq).count();
    let n_art = rels.iter().filter(|r| **r != Relation::Le).count();
    let width = n + n_slack + n_art;
    let mut kinds = vec![ColKind::Structural; n];
    kinds.extend(std::iter::repeat_n(ColKind::Slack, n_slack));
    kinds.extend(std::iter::repeat_n(ColKind::Artificial, n_art));

    let mut data = vec![0.0; m * (width + 1)];
    let mut basis = vec![0; m];
    let mut identity_col = vec![0; m];
    let (mut next_slack, mut next_art) = (n, n + n_slack);
    for (i, c) in p.constraints.iter().enumerate() {
        let row = &mut data[i * (width + 1)..(i + 1) * (width + 1)];
        for (j, &a) in c.coeffs.iter().enumerate() {
            row[j] = flips[i] * a;
        }
        row[width] = flips[i] * c.rhs;
        match rels[i] {
            Relation::Le => {
                row[next_slack] = 1.0;
                basis[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
        }
        identity_col[i] = basis[i];
    }
    let mut t = Tableau { rows: m, width, data, basis, kinds, iterations: 0 };
    let limit = 200_000 + 50 * (m + width);

    // Phase 1: drive the artificial variables to zero.
    if n_art > 0 {
        let cost: Vec<f64> = t
            .kinds
            .iter()
            .map(|k| if *k == ColKind::Artificial { -1.0 } else { 0.0 })
            .collect();
        match t.optimize(&cost, |_| true, limit) {
            LpStatus::Optimal => {}
            LpStatus::Unbounded => unreachable!("phase one objective is bounded by zero"),
            other => return fail(other, t.iterations),
        }
        let infeas: f64 = (0..m)
            .filter(|&i| t.kinds[t.basis[i]] == ColKind::Artificial)
            .map(|i| t.rhs(i))
            .sum();
        if infeas > FEASIBILITY_TOL * (1.0 + m as f64) {
            return fail(LpStatus::Infeasible, t.iterations);
        }
        // Pivot remaining zero-level artificials out where possible; rows
        // where that fails are redundant and keep their artificial.
        for i in 0..m {
            if t.kinds[t.basis[i]] == ColKind::Artificial {
                let col = (0..width)
                    .filter(|&j| t.kinds[j] != ColKind::Artificial)
                    .max_by(|&a, &b| t.at(i, a).abs().total_cmp(&t.at(i, b).abs()));
                if let Some(j) = col {
                    if t.at(i, j).abs() > 1e-9 {
                        t.pivot(i, j);
                    }
                }
            }
        }
    }

    // Phase 2.
    let sense_sign = if p.sense == Sense::Max { 1.0 } else { -1.0 };
    let mut cost = vec![0.0; width];
    for (j, &c) in p.objective.iter().enumerate() {
        cost[j] = sense_sign * c;
    }
    let kinds = t.kinds.clone();
    let status = t.optimize(&cost, |j| kinds[j] != ColKind::Artificial, limit);
    if status != LpStatus::Optimal {
        return fail(status, t.iterations);
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    if p.max_residual(&x) > RESIDUAL_FAIL {
        return fail(LpStatus::NumericalFailure, t.iterations);
    }
    let duals = (0..m)
        .map(|i| {
            let y: f64 = (0..m).map(|k| cost[t.basis[k]] * t.at(k, identity_col[i])).sum();
            sense_sign * flips[i] * y
        })
        .collect();
    LpSolution {
        status: LpStatus::Optimal,
        objective: p.value(&x),
        x,
        duals,
        iterations: t.iterations,
    }
}
