//! Exact linear programming over the rationals.
//!
//! Two-phase primal simplex on a dense tableau with Bland's rule. All
//! variables are nonnegative. Optimal solutions carry a dual vector that
//! [`verify_certificate`] checks against the original data with no tolerance.

#![allow(clippy::needless_range_loop)]

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<Rational>,
}

impl LpInstance {
    pub fn maximize(objective: Vec<Rational>) -> Self {
        LpInstance {
            sense: Sense::Maximize,
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        LpInstance {
            sense: Sense::Minimize,
            ..Self::maximize(objective)
        }
    }

    pub fn with_row(mut self, row: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
        self.push_row(row, rel, rhs);
        self
    }

    pub fn push_row(&mut self, row: Vec<Rational>, rel: Relation, rhs: Rational) {
        self.rows.push(row);
        self.relations.push(rel);
        self.rhs.push(rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::Empty("LP has no variables"));
        }
        if self.relations.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::Dimension {
                expected: self.rows.len(),
                got: self.relations.len().min(self.rhs.len()),
            });
        }
        for row in &self.rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// `value`, `primal` and `dual` are meaningful only when `status` is optimal;
/// otherwise they are zero / empty.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Rational,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> Self {
        LpSolution {
            status,
            value: Rational::zero(),
            primal: Vec::new(),
            dual: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let delta = &f * &prow[j];
                row[j] -= delta;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Bland's rule. Returns false when the problem is unbounded.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.width).find(|&j| allowed[j] && self.obj[j].is_negative());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

pub fn solve_lp(lp: &LpInstance) -> Result<LpSolution> {
    lp.check_shape()?;
    let n = lp.num_vars();
    let m = lp.num_rows();
    // Internally always maximize.
    let cost: Vec<Rational> = match lp.sense {
        Sense::Maximize => lp.objective.clone(),
        Sense::Minimize => lp.objective.iter().map(|c| -c).collect(),
    };

    // Normalize to nonnegative right-hand sides.
    let mut flipped = vec![false; m];
    let mut rels = lp.relations.clone();
    for i in 0..m {
        if lp.rhs[i].is_negative() {
            flipped[i] = true;
            rels[i] = match rels[i] {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    // Column layout: originals, then one slack/surplus per inequality, then
    // one artificial per Ge/Eq row.
    let mut slack_col = vec![None; m];
    let mut art_col = vec![None; m];
    let mut width = n;
    for i in 0..m {
        if rels[i] != Relation::Eq {
            slack_col[i] = Some(width);
            width += 1;
        }
    }
    for i in 0..m {
        if rels[i] != Relation::Le {
            art_col[i] = Some(width);
            width += 1;
        }
    }
    let is_art: Vec<bool> = {
        let mut v = vec![false; width];
        for c in art_col.iter().flatten() {
            v[*c] = true;
        }
        v
    };

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if flipped[i] { -Rational::one() } else { Rational::one() };
        let mut row = vec![Rational::zero(); width + 1];
        for j in 0..n {
            if !lp.rows[i][j].is_zero() {
                row[j] = &lp.rows[i][j] * &sign;
            }
        }
        row[width] = &lp.rhs[i] * &sign;
        if let Some(s) = slack_col[i] {
            row[s] = if rels[i] == Relation::Le {
                Rational::one()
            } else {
                -Rational::one()
            };
        }
        match art_col[i] {
            Some(a) => {
                row[a] = Rational::one();
                basis.push(a);
            }
            None => basis.push(slack_col[i].expect("Le row has a slack")),
        }
        rows.push(row);
    }

    // Phase one: maximize -sum(artificials).
    let mut obj = vec![Rational::zero(); width + 1];
    for i in 0..m {
        if art_col[i].is_some() {
            for j in 0..=width {
                if (j == width || !is_art[j]) && !rows[i][j].is_zero() {
                    obj[j] -= &rows[i][j];
                }
            }
        }
    }
    let mut tab = Tableau {
        rows,
        obj,
        basis,
        width,
    };
    let everything = vec![true; width];
    if art_col.iter().any(Option::is_some) {
        tab.optimize(&everything);
        if tab.obj[width].is_negative() {
            return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
        }
        // Drive zero-valued artificials out of the basis where possible.
        for r in 0..m {
            if is_art[tab.basis[r]] {
                if let Some(c) = (0..width).find(|&j| !is_art[j] && !tab.rows[r][j].is_zero()) {
                    tab.pivot(r, c);
                }
            }
        }
    }

    // Phase two.
    let mut obj = vec![Rational::zero(); width + 1];
    for j in 0..n {
        obj[j] = -&cost[j];
    }
    for r in 0..m {
        let b = tab.basis[r];
        if b < n && !cost[b].is_zero() {
            for j in 0..=width {
                if !tab.rows[r][j].is_zero() {
                    obj[j] += &cost[b] * &tab.rows[r][j];
                }
            }
        }
    }
    tab.obj = obj;
    let allowed: Vec<bool> = is_art.iter().map(|a| !a).collect();
    if !tab.optimize(&allowed) {
        return Ok(LpSolution::without_optimum(LpStatus::Unbounded));
    }

    let mut primal = vec![Rational::zero(); n];
    for r in 0..m {
        if tab.basis[r] < n {
            primal[tab.basis[r]] = tab.rhs(r).clone();
        }
    }
    let dual: Vec<Rational> = (0..m)
        .map(|i| {
            let unit = art_col[i].or(slack_col[i]).expect("every row has a unit column");
            // A surplus column is -e_i, so the row's unit column is the artificial.
            let y = tab.obj[unit].clone();
            let y = if flipped[i] { -y } else { y };
            match lp.sense {
                Sense::Maximize => y,
                Sense::Minimize => -y,
            }
        })
        .collect();
    let value = dot(&lp.objective, &primal);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        primal,
        dual,
    })
}

/// Checks primal feasibility, dual feasibility and zero duality gap exactly.
pub fn verify_certificate(lp: &LpInstance, sol: &LpSolution) -> Result<bool> {
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpStatus("not optimal"));
    }
    lp.check_shape()?;
    let n = lp.num_vars();
    let m = lp.num_rows();
    if sol.primal.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: sol.primal.len(),
        });
    }
    if sol.dual.len() != m {
        return Err(Error::Dimension {
            expected: m,
            got: sol.dual.len(),
        });
    }
    let x = &sol.primal;
    let y = &sol.dual;
    if x.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    for i in 0..m {
        let lhs = dot(&lp.rows[i], x);
        let ok = match lp.relations[i] {
            Relation::Le => lhs <= lp.rhs[i],
            Relation::Ge => lhs >= lp.rhs[i],
            Relation::Eq => lhs == lp.rhs[i],
        };
        if !ok {
            return Ok(false);
        }
    }
    // Dual sign conventions; a minimization flips both.
    let max = lp.sense == Sense::Maximize;
    for i in 0..m {
        let ok = match lp.relations[i] {
            Relation::Eq => true,
            Relation::Le => (max && !y[i].is_negative()) || (!max && !y[i].is_positive()),
            Relation::Ge => (max && !y[i].is_positive()) || (!max && !y[i].is_negative()),
        };
        if !ok {
            return Ok(false);
        }
    }
    for j in 0..n {
        let col: Rational = (0..m).map(|i| &lp.rows[i][j] * &y[i]).sum();
        let ok = if max {
            col >= lp.objective[j]
        } else {
            col <= lp.objective[j]
        };
        if !ok {
            return Ok(false);
        }
    }
    let primal_value = dot(&lp.objective, x);
    let dual_value = dot(&lp.rhs, y);
    Ok(primal_value == dual_value && primal_value == sol.value)
}

/// Solves and asserts the certificate on every optimal outcome.
pub(crate) fn solve_certified(lp: &LpInstance) -> Result<LpSolution> {
    let sol = solve_lp(lp)?;
    if sol.is_optimal() {
        assert!(
            verify_certificate(lp, &sol)?,
            "simplex produced an invalid optimality certificate"
        );
    }
    Ok(sol)
}

/// `min c·x` subject to `A x ≥ b`, `x ≤ u`, `x ≥ 0` with nonnegative integer `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringInstance {
    pub matrix: Vec<Vec<u64>>,
    pub demand: Vec<Rational>,
    pub cost: Vec<Rational>,
    pub upper: Vec<u64>,
}

impl CoveringInstance {
    fn validate(&self) -> Result<()> {
        let m = self.cost.len();
        if self.upper.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: self.upper.len(),
            });
        }
        if self.matrix.len() != self.demand.len() {
            return Err(Error::Dimension {
                expected: self.demand.len(),
                got: self.matrix.len(),
            });
        }
        if let Some(row) = self.matrix.iter().find(|r| r.len() != m) {
            return Err(Error::Dimension {
                expected: m,
                got: row.len(),
            });
        }
        if self.cost.iter().any(|c| !c.is_positive()) {
            return Err(Error::InvalidNetwork("covering costs must be positive".into()));
        }
        if self.demand.iter().any(Signed::is_negative) {
            return Err(Error::InvalidNetwork("covering demands must be nonnegative".into()));
        }
        Ok(())
    }

    /// The covering rows come first, then one `x(j) ≤ u(j)` row per column.
    pub fn to_lp(&self) -> Result<LpInstance> {
        self.validate()?;
        let m = self.cost.len();
        let mut lp = LpInstance::minimize(self.cost.clone());
        for (row, b) in self.matrix.iter().zip(&self.demand) {
            let row = row.iter().map(|&a| Rational::from_integer((a as i64).into())).collect();
            lp.push_row(row, Relation::Ge, b.clone());
        }
        for j in 0..m {
            let mut row = vec![Rational::zero(); m];
            row[j] = Rational::one();
            lp.push_row(
                row,
                Relation::Le,
                Rational::from_integer((self.upper[j] as i64).into()),
            );
        }
        Ok(lp)
    }
}

/// Exact covering oracle (approximation factor one).
pub fn solve_covering_box(inst: &CoveringInstance) -> Result<LpSolution> {
    solve_certified(&inst.to_lp()?)
}
