use super::{LinearProgram, LpOutcome, LpSolution, Relation, Sense};
use crate::num::{Field, Mode};

/// Exact Bland pivoting never cycles; this only trips if float round-off
/// makes the sign tests inconsistent.
const MAX_PIVOTS: usize = 1_000_000;

/// Column kinds of the internal standard form
/// `max c·z, A z = b, z >= 0, b >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<F> {
    /// Constraint rows, each `ncols + 1` wide (last entry is the rhs).
    rows: Vec<Vec<F>>,
    /// Reduced costs, last entry is minus the objective value.
    obj: Vec<F>,
    basis: Vec<usize>,
    kinds: Vec<Column>,
    /// Which original standard-form row each tableau row came from.
    origin: Vec<usize>,
}

impl<F: Field> Tableau<F> {
    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width();
        let piv = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x = x.over(&piv);
        }
        self.rows[row][col] = F::one();
        let prow = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col].clone();
            if factor.is_zero() && F::MODE == Mode::Exact {
                continue;
            }
            for (x, p) in r.iter_mut().zip(&prow) {
                x.sub_mul_assign(&factor, p);
            }
            r[col] = F::zero();
        }
        let factor = self.obj[col].clone();
        for (x, p) in self.obj.iter_mut().zip(&prow) {
            x.sub_mul_assign(&factor, p);
        }
        self.obj[col] = F::zero();
        if F::MODE == Mode::Float {
            for r in self.rows.iter_mut() {
                snap(r);
                let rhs = &mut r[w];
                if rhs.to_f64() < 0.0 {
                    *rhs = F::zero();
                }
            }
            snap(&mut self.obj);
        }
        self.basis[row] = col;
    }

    /// Bland's rule: lowest-index improving column. Ties in the ratio test
    /// go to the lowest basic variable index; in float mode they first go
    /// to the largest pivot element, until the pivot count suggests cycling.
    fn run(&mut self, allowed: impl Fn(usize) -> bool) -> Result<(), Unbounded> {
        let w = self.width();
        let stable_budget = 50 * (w + self.rows.len());
        for step in 0..MAX_PIVOTS {
            let Some(col) = (0..w).find(|&j| allowed(j) && self.obj[j].is_positive()) else {
                return Ok(());
            };
            let candidates: Vec<(usize, F)> = self
                .rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col].is_positive())
                .map(|(i, r)| (i, r[w].over(&r[col])))
                .collect();
            let Some(min) = candidates.iter().map(|(_, q)| q).min_by(|a, b| a.partial_cmp(b).expect("finite ratios"))
            else {
                return Err(Unbounded);
            };
            let tied = candidates.iter().filter(|(_, q)| q.approx_eq(min)).map(|(i, _)| *i);
            let row = if F::MODE == Mode::Float && step < stable_budget {
                tied.max_by(|&a, &b| {
                    let (pa, pb) = (self.rows[a][col].to_f64(), self.rows[b][col].to_f64());
                    pa.total_cmp(&pb).then(self.basis[b].cmp(&self.basis[a]))
                })
            } else {
                tied.min_by_key(|&i| self.basis[i])
            }
            .expect("the minimum is among the candidates");
            self.pivot(row, col);
        }
        panic!("simplex exceeded {MAX_PIVOTS} pivots");
    }

    fn price(&mut self, cost: &[F]) {
        let w = self.width();
        let mut obj: Vec<F> = cost.to_vec();
        obj.push(F::zero());
        for (r, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() && F::MODE == Mode::Exact {
                continue;
            }
            for (d, a) in obj.iter_mut().zip(r.iter()) {
                d.sub_mul_assign(cb, a);
            }
        }
        for &b in &self.basis {
            obj[b] = F::zero();
        }
        debug_assert_eq!(obj.len(), w + 1);
        self.obj = obj;
    }
}

fn snap<F: Field>(v: &mut [F]) {
    for x in v.iter_mut() {
        if x.to_f64().abs() < 1e-13 {
            *x = F::zero();
        }
    }
}

struct Unbounded;

pub(super) fn solve<F: Field>(lp: &LinearProgram<F>) -> LpOutcome<F> {
    let n = lp.num_vars();

    // Shift x = lower + z and turn finite upper bounds into rows.
    let mut rows: Vec<(Vec<F>, Relation, F)> = Vec::new();
    for c in &lp.constraints {
        let rhs = c.rhs.minus(&F::dot(&c.coeffs, &lp.lower));
        rows.push((c.coeffs.clone(), c.relation, rhs));
    }
    let mut upper_row = vec![None; n];
    for (j, u) in lp.upper.iter().enumerate() {
        if let Some(u) = u {
            let mut coeffs = vec![F::zero(); n];
            coeffs[j] = F::one();
            upper_row[j] = Some(rows.len());
            rows.push((coeffs, Relation::Le, u.minus(&lp.lower[j])));
        }
    }
    let k = rows.len();

    let mut flipped = vec![false; k];
    for (i, (coeffs, rel, rhs)) in rows.iter_mut().enumerate() {
        let negative = match F::MODE {
            Mode::Exact => rhs.is_negative(),
            Mode::Float => rhs.to_f64() < 0.0,
        };
        if negative {
            for a in coeffs.iter_mut() {
                *a = a.negated();
            }
            *rhs = rhs.negated();
            *rel = rel.flipped();
            flipped[i] = true;
        }
    }

    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = n + slack_count + art_count;
    let mut kinds = vec![Column::Structural; n];
    kinds.extend(std::iter::repeat_n(Column::Slack, slack_count));
    kinds.extend(std::iter::repeat_n(Column::Artificial, art_count));

    let mut tab_rows = Vec::with_capacity(k);
    let mut basis = Vec::with_capacity(k);
    // The column that starts out basic in each row; at the end its reduced
    // cost is minus that row's dual.
    let mut initial = Vec::with_capacity(k);
    let (mut next_slack, mut next_art) = (n, n + slack_count);
    for (coeffs, rel, rhs) in &rows {
        let mut r: Vec<F> = coeffs.clone();
        r.resize(width + 1, F::zero());
        r[width] = rhs.clone();
        match rel {
            Relation::Le => {
                r[next_slack] = F::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                r[next_slack] = F::one().negated();
                next_slack += 1;
                r[next_art] = F::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                r[next_art] = F::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        initial.push(*basis.last().expect("pushed"));
        tab_rows.push(r);
    }

    let mut tab = Tableau { rows: tab_rows, obj: Vec::new(), basis, kinds, origin: (0..k).collect() };

    if art_count > 0 {
        let cost: Vec<F> = tab
            .kinds
            .iter()
            .map(|kind| if *kind == Column::Artificial { F::one().negated() } else { F::zero() })
            .collect();
        tab.price(&cost);
        if tab.run(|_| true).is_err() {
            unreachable!("phase one objective is bounded above by zero");
        }
        // obj[width] holds minus the phase one value.
        if tab.obj[width].is_positive() {
            return LpOutcome::Infeasible;
        }
        drive_out_artificials(&mut tab);
    }

    let sign = match lp.sense {
        Sense::Maximize => F::one(),
        Sense::Minimize => F::one().negated(),
    };
    let mut cost: Vec<F> = lp.objective.iter().map(|c| c.times(&sign)).collect();
    cost.resize(width, F::zero());
    tab.price(&cost);
    let kinds = tab.kinds.clone();
    if tab.run(|j| kinds[j] != Column::Artificial).is_err() {
        return LpOutcome::Unbounded;
    }

    let mut z = vec![F::zero(); width];
    for (r, &b) in tab.rows.iter().zip(&tab.basis) {
        z[b] = r[width].clone();
    }
    let x: Vec<F> = (0..n).map(|j| lp.lower[j].plus(&z[j])).collect();

    let mut row_duals = vec![F::zero(); k];
    for &i in &tab.origin {
        let y = tab.obj[initial[i]].negated();
        row_duals[i] = if flipped[i] { y.negated() } else { y };
    }
    let duals = row_duals[..lp.constraints.len()].to_vec();
    let upper_duals = upper_row
        .iter()
        .map(|r| r.map_or_else(F::zero, |i| row_duals[i].clone()))
        .collect();

    let mut basis = tab.basis.clone();
    basis.sort_unstable();
    LpOutcome::Optimal(LpSolution { value: lp.objective_value(&x), x, basis, duals, upper_duals })
}

/// After a successful phase one, pivots zero-level artificials out of the
/// basis; rows where that is impossible are redundant and get dropped.
fn drive_out_artificials<F: Field>(tab: &mut Tableau<F>) {
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.kinds[tab.basis[i]] != Column::Artificial {
            i += 1;
            continue;
        }
        let candidates = (0..tab.width()).filter(|&j| tab.kinds[j] != Column::Artificial && !tab.rows[i][j].is_zero());
        // A tiny pivot here would amplify round-off in every other row.
        let col = match F::MODE {
            Mode::Exact => candidates.min(),
            Mode::Float => candidates.max_by(|&a, &b| {
                tab.rows[i][a].to_f64().abs().total_cmp(&tab.rows[i][b].to_f64().abs()).then(b.cmp(&a))
            }),
        };
        match col {
            Some(j) => {
                tab.pivot(i, j);
                i += 1;
            }
            None => {
                tab.rows.remove(i);
                tab.basis.remove(i);
                tab.origin.remove(i);
            }
        }
    }
}
