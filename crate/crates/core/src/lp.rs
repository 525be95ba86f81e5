//! Exact two-phase simplex for `max c·x` subject to `a·x ≤ β`, with `x` free.
//!
//! Free variables are pivoted into the basis first and never leave; the
//! slacks then carry the ordinary simplex with Bland's rule. An optimal
//! basis therefore corresponds to a vertex whenever the constraint rows
//! span the ambient space.

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, QVector};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: QVector,
    /// Rows `(a, β)` meaning `a·x ≤ β`.
    pub constraints: Vec<(QVector, Rational)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub vertex: Option<QVector>,
    pub value: Option<Rational>,
    /// Indices of constraints tight at `vertex`.
    pub active_set: Vec<usize>,
    /// Nonnegative dual multipliers on tight rows with `Σ yᵢ aᵢ = c`.
    pub multipliers: Vec<(usize, Rational)>,
}

impl LpOutcome {
    fn without_solution(status: LpStatus) -> Self {
        LpOutcome { status, vertex: None, value: None, active_set: Vec::new(), multipliers: Vec::new() }
    }
}

impl LinearProgram {
    pub fn new(objective: QVector) -> Self {
        LinearProgram { objective, constraints: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, a: QVector, beta: Rational) {
        assert_eq!(a.len(), self.dim(), "constraint dimension mismatch");
        self.constraints.push((a, beta));
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|(a, b)| dot(a, x) <= *b)
    }

    pub fn maximize(&self) -> LpOutcome {
        maximize(self)
    }
}

struct Tableau {
    // Row i reads: Σ_k t[i][k]·var_k = rhs[i], with var basis[i] basic.
    t: Vec<QVector>,
    rhs: QVector,
    basis: Vec<usize>,
    // Reduced costs and the current objective value: z = zval + Σ cost_k·var_k.
    cost: QVector,
    zval: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, k: usize) {
        let inv = self.t[r][k].recip();
        if !inv.is_one() {
            for x in self.t[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            self.rhs[r] = &self.rhs[r] * &inv;
        }
        let prow = self.t[r].clone();
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for i in 0..self.t.len() {
            if i == r || self.t[i][k].is_zero() {
                continue;
            }
            let f = self.t[i][k].clone();
            for &j in &nz {
                let v = &self.t[i][j] - &(&f * &prow[j]);
                self.t[i][j] = v;
            }
            self.rhs[i] = &self.rhs[i] - &(&f * &prhs);
        }
        if !self.cost[k].is_zero() {
            let f = self.cost[k].clone();
            for &j in &nz {
                let v = &self.cost[j] - &(&f * &prow[j]);
                self.cost[j] = v;
            }
            self.zval = &self.zval + &(&f * &prhs);
        }
        self.basis[r] = k;
    }

    fn set_objective(&mut self, c: &[Rational]) {
        self.cost = c.to_vec();
        self.zval = Rational::zero();
        for i in 0..self.t.len() {
            let b = self.basis[i];
            if self.cost[b].is_zero() {
                continue;
            }
            let f = self.cost[b].clone();
            for j in 0..self.cost.len() {
                if !self.t[i][j].is_zero() {
                    let v = &self.cost[j] - &(&f * &self.t[i][j]);
                    self.cost[j] = v;
                }
            }
            self.zval = &self.zval + &(&f * &self.rhs[i]);
        }
    }

    /// Bland's rule over the columns in `allowed`; rows in `fixed` never leave.
    /// Returns false on unboundedness.
    fn run(&mut self, allowed: &[bool], fixed: &[bool]) -> bool {
        loop {
            let Some(k) = (0..self.cost.len()).find(|&k| allowed[k] && self.cost[k].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if fixed[i] || !self.t[i][k].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.t[i][k];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, k);
        }
    }
}

pub fn maximize(lp: &LinearProgram) -> LpOutcome {
    let n = lp.dim();
    let m = lp.constraints.len();
    // Columns: x (0..n), slacks (n..n+m), auxiliary (n+m).
    let width = n + m + 1;
    let aux = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (a, _)) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); width];
        row[..n].clone_from_slice(a);
        row[n + i] = Rational::one();
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        rhs: lp.constraints.iter().map(|(_, b)| b.clone()).collect(),
        basis: (n..n + m).collect(),
        cost: vec![Rational::zero(); width],
        zval: Rational::zero(),
    };

    let mut fixed = vec![false; m];
    let mut free_dirs = Vec::new();
    for j in 0..n {
        match (0..m).find(|&i| !fixed[i] && !tab.t[i][j].is_zero()) {
            Some(r) => {
                tab.pivot(r, j);
                fixed[r] = true;
            }
            None => free_dirs.push(j),
        }
    }

    // Phase 1: one auxiliary column shifts every slack row.
    if let Some(r0) = (0..m)
        .filter(|&i| !fixed[i] && tab.rhs[i].is_negative())
        .min_by(|&a, &b| tab.rhs[a].cmp(&tab.rhs[b]).then(a.cmp(&b)))
    {
        for i in 0..m {
            if !fixed[i] {
                tab.t[i][aux] = -Rational::one();
            }
        }
        let mut c1 = vec![Rational::zero(); width];
        c1[aux] = -Rational::one();
        tab.set_objective(&c1);
        tab.pivot(r0, aux);
        let allowed: Vec<bool> = (0..width).map(|k| k >= n).collect();
        tab.run(&allowed, &fixed);
        if tab.zval.is_negative() {
            return LpOutcome::without_solution(LpStatus::Infeasible);
        }
        if let Some(r) = tab.basis.iter().position(|&b| b == aux) {
            // Degenerate: the auxiliary sits at zero; swap it for any slack.
            match (n..n + m).find(|&k| !tab.t[r][k].is_zero()) {
                Some(k) => tab.pivot(r, k),
                None => {
                    // The row is redundant; retire it permanently.
                    fixed[r] = true;
                }
            }
        }
        for row in tab.t.iter_mut() {
            row[aux] = Rational::zero();
        }
    }

    let mut c2 = vec![Rational::zero(); width];
    c2[..n].clone_from_slice(&lp.objective);
    tab.set_objective(&c2);
    if free_dirs.iter().any(|&j| !tab.cost[j].is_zero()) {
        return LpOutcome::without_solution(LpStatus::Unbounded);
    }
    let allowed: Vec<bool> = (0..width).map(|k| k >= n && k < aux).collect();
    if !tab.run(&allowed, &fixed) {
        return LpOutcome::without_solution(LpStatus::Unbounded);
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs[i].clone();
        }
    }
    let active_set: Vec<usize> =
        lp.constraints.iter().enumerate().filter(|(_, (a, b))| dot(a, &x) == *b).map(|(i, _)| i).collect();
    let multipliers: Vec<(usize, Rational)> = (0..m)
        .filter(|&i| !tab.basis.contains(&(n + i)) && !tab.cost[n + i].is_zero())
        .map(|i| (i, -&tab.cost[n + i]))
        .collect();
    let value = dot(&lp.objective, &x);
    LpOutcome { status: LpStatus::Optimal, vertex: Some(x), value: Some(value), active_set, multipliers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, QMatrix};
    use crate::rational::q;
    use proptest::prelude::*;

    fn lp(c: &[i64], rows: &[(&[i64], i64)]) -> LinearProgram {
        let mut p = LinearProgram::new(qvec(c));
        for (a, b) in rows {
            p.push(qvec(a), q(*b, 1));
        }
        p
    }

    fn check_certificate(p: &LinearProgram, out: &LpOutcome) {
        let x = out.vertex.as_ref().unwrap();
        assert!(p.is_feasible_point(x));
        let mut recon = vec![Rational::zero(); p.dim()];
        for (i, y) in &out.multipliers {
            assert!(y.is_positive());
            assert!(out.active_set.contains(i));
            for j in 0..p.dim() {
                recon[j] += &(y * &p.constraints[*i].0[j]);
            }
        }
        assert_eq!(recon, p.objective);
    }

    #[test]
    fn square() {
        let p = lp(&[1, 1], &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)]);
        let out = p.maximize();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.vertex, Some(qvec(&[1, 1])));
        assert_eq!(out.value, Some(q(2, 1)));
        assert_eq!(out.active_set, vec![0, 2]);
        check_certificate(&p, &out);
    }

    #[test]
    fn infeasible_and_unbounded() {
        assert_eq!(lp(&[1], &[(&[-1], -1), (&[1], 0)]).maximize().status, LpStatus::Infeasible);
        assert_eq!(lp(&[1], &[(&[-1], 0)]).maximize().status, LpStatus::Unbounded);
        assert_eq!(lp(&[1, 0], &[(&[1, 0], 1)]).maximize().status, LpStatus::Optimal);
        assert_eq!(lp(&[0, 1], &[(&[1, 0], 1)]).maximize().status, LpStatus::Unbounded);
        assert_eq!(lp(&[0, 1], &[(&[1, 0], 1), (&[-1, 0], -2)]).maximize().status, LpStatus::Infeasible);
    }

    #[test]
    fn phase_one_needed() {
        // x ≥ 2, y ≥ 3, x + y ≤ 10; maximise x.
        let p = lp(&[1, 0], &[(&[-1, 0], -2), (&[0, -1], -3), (&[1, 1], 10)]);
        let out = p.maximize();
        assert_eq!(out.vertex, Some(qvec(&[7, 3])));
        check_certificate(&p, &out);
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // The apex of a square pyramid has four tight facets in dimension 3.
        let p = lp(
            &[0, 0, 1],
            &[(&[1, 0, 1], 1), (&[-1, 0, 1], 1), (&[0, 1, 1], 1), (&[0, -1, 1], 1), (&[0, 0, -1], 0)],
        );
        let out = p.maximize();
        assert_eq!(out.vertex, Some(qvec(&[0, 0, 1])));
        assert_eq!(out.active_set, vec![0, 1, 2, 3]);
        check_certificate(&p, &out);
    }

    #[test]
    fn deterministic() {
        let p = lp(&[3, 2, 1], &[(&[1, 1, 1], 4), (&[1, 0, 0], 2), (&[0, 0, 1], 3), (&[-1, -1, -1], 0), (&[0, 1, 0], 3)]);
        assert_eq!(p.maximize(), p.maximize());
    }

    proptest! {
        #[test]
        fn optimum_is_certified_vertex(
            c in proptest::collection::vec(-5i64..=5, 3),
            rows in proptest::collection::vec((proptest::collection::vec(-4i64..=4, 3), 0i64..=6), 0..10),
        ) {
            // A bounding box keeps every instance feasible and bounded.
            let mut p = LinearProgram::new(qvec(&c));
            for j in 0..3 {
                let mut e = vec![0; 3];
                e[j] = 1;
                p.push(qvec(&e), q(5, 1));
                e[j] = -1;
                p.push(qvec(&e), q(5, 1));
            }
            for (a, b) in &rows {
                p.push(qvec(a), q(*b, 1));
            }
            let out = p.maximize();
            prop_assert_eq!(out.status, LpStatus::Optimal);
            check_certificate(&p, &out);
            let tight: Vec<QVector> = out.active_set.iter().map(|&i| p.constraints[i].0.clone()).collect();
            prop_assert_eq!(QMatrix::from_rows(tight).rank(), 3);
        }
    }
}
