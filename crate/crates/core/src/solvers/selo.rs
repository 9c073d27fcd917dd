use super::{check_scale, Concept, PointSet, SearchStats, SolveReport, Witness};
use crate::deviation::verify_mixed;
use crate::error::Result;
use crate::game::{Game, Payoffs, SisPartition};
use crate::linalg::{Added, Echelon};
use crate::lp::{vertices_of_bounded, LinearProgram, LpOutcome, Polytope, Relation};
use crate::num::Field;
use crate::profile::MixedProfile;

/// Default bound on `rows + cols` for the exponential searches.
pub const DEFAULT_SIZE_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeloStrategy {
    /// Visit every point of the column simplex cut out by the hyperplanes
    /// `σ2(c) = 0` and `u1(r,σ2) = u1(r',σ2)` for rows sharing a SIS, and
    /// solve one LP over `σ1` at each.
    #[default]
    Arrangement,
    /// For every support pair `(R, C)`, by total size and then
    /// lexicographically: enumerate the vertices of
    /// `P2 = {σ2 on C : rows of R are best in their SIS}` and solve one LP
    /// over `P1 = {σ1 on R : columns of C are best responses}` per vertex.
    SupportEnumeration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeloOptions<F> {
    /// Stop as soon as this value is reached; the SESLO value is always a
    /// valid choice.
    pub upper_bound: Option<F>,
    pub strategy: SeloStrategy,
    /// Limit on `rows + cols`.
    pub size_limit: usize,
    /// Ignore `size_limit`.
    pub allow_large: bool,
}

impl<F> Default for SeloOptions<F> {
    fn default() -> Self {
        Self { upper_bound: None, strategy: SeloStrategy::default(), size_limit: DEFAULT_SIZE_LIMIT, allow_large: false }
    }
}

/// Best mixed profile without undetectable beneficial deviations.
pub fn solve_selo<F: Field>(game: &Game, options: &SeloOptions<F>) -> Result<SolveReport<F>> {
    check_scale(game, options.size_limit, options.allow_large)?;
    let pay = game.payoffs::<F>();
    let mut search = Search::new(options.upper_bound.clone());
    match options.strategy {
        SeloStrategy::Arrangement => arrangement(&pay, game.partition(), &mut search),
        SeloStrategy::SupportEnumeration => support_enumeration(&pay, game.partition(), &mut search),
    }
    search.finish(game, Concept::Selo)
}

/// Running maximum; the first profile attaining it is kept.
pub(super) struct Search<F> {
    upper_bound: Option<F>,
    best: Option<(F, MixedProfile<F>)>,
    pub stats: SearchStats,
}

impl<F: Field> Search<F> {
    pub fn new(upper_bound: Option<F>) -> Self {
        Self { upper_bound, best: None, stats: SearchStats::default() }
    }

    /// True if nothing better than `bound` can improve the incumbent.
    fn dominated(&self, bound: &F) -> bool {
        self.best.as_ref().is_some_and(|(v, _)| v.geq(bound))
    }

    fn offer(&mut self, value: F, profile: MixedProfile<F>) {
        if self.best.as_ref().is_none_or(|(v, _)| value.minus(v).is_positive()) {
            self.best = Some((value, profile));
        }
    }

    fn done(&mut self) -> bool {
        let reached = match (&self.upper_bound, &self.best) {
            (Some(ub), Some((v, _))) => v.geq(ub),
            _ => false,
        };
        if reached {
            self.stats.stopped_early = true;
        }
        reached
    }

    pub fn finish(self, game: &Game, concept: Concept) -> Result<SolveReport<F>> {
        let (value, profile) = self.best.unwrap_or_else(|| {
            unreachable!("a Nash equilibrium always exists and satisfies every SELO condition")
        });
        let verifier_passed = verify_mixed(game, &profile)?.passed;
        Ok(SolveReport { concept, value, witness: Witness::Mixed(profile), verifier_passed, stats: self.stats })
    }
}

/// Rows that are best responses to `sigma2` within their SIS.
fn sis_best_rows<F: Field>(pay: &Payoffs<F>, part: &SisPartition, sigma2: &[F]) -> (Vec<usize>, Vec<F>) {
    let values: Vec<F> = (0..pay.rows()).map(|r| F::dot(pay.u1.row(r), sigma2)).collect();
    let rows = (0..pay.rows())
        .filter(|&r| part.cell_containing(r).iter().all(|&r2| values[r].geq(&values[r2])))
        .collect();
    (rows, values)
}

/// `max Σ σ1(r)·gain(r)` over `σ1` supported on `rows` such that every
/// column of `best_cols` is a best response. Returns the full-length `σ1`.
fn row_program<F: Field>(
    pay: &Payoffs<F>,
    rows: &[usize],
    gains: &[F],
    best_cols: &[usize],
    stats: &mut SearchStats,
) -> Option<(F, Vec<F>)> {
    let n = pay.cols();
    let objective = rows.iter().map(|&r| gains[r].clone()).collect();
    let mut lp = LinearProgram::maximize(objective);
    lp.push(vec![F::one(); rows.len()], Relation::Eq, F::one());
    let diff = |c: usize, c2: usize| -> Vec<F> {
        rows.iter().map(|&r| pay.u2.get(r, c).minus(pay.u2.get(r, c2))).collect()
    };
    let anchor = best_cols[0];
    for &c in &best_cols[1..] {
        lp.push(diff(c, anchor), Relation::Eq, F::zero());
    }
    for c in (0..n).filter(|c| !best_cols.contains(c)) {
        lp.push(diff(anchor, c), Relation::Ge, F::zero());
    }
    stats.lps_solved += 1;
    let sol = lp.solve().optimal()?;
    let mut sigma1 = vec![F::zero(); pay.rows()];
    for (&r, x) in rows.iter().zip(sol.x) {
        sigma1[r] = x;
    }
    Some((sol.value, sigma1))
}

fn arrangement<F: Field>(pay: &Payoffs<F>, part: &SisPartition, search: &mut Search<F>) {
    let n = pay.cols();
    let mut hyperplanes: Vec<Vec<F>> =
        (0..n).map(|c| (0..n).map(|j| if j == c { F::one() } else { F::zero() }).collect()).collect();
    for (r, r2) in part.same_cell_pairs() {
        hyperplanes.push((0..n).map(|c| pay.u1.get(r, c).minus(pay.u1.get(r2, c))).collect());
    }
    let Added::Independent(base) = Echelon::new(n).add(&vec![F::one(); n], &F::one()) else {
        unreachable!("a single nonzero equation is independent")
    };
    let mut seen = PointSet::new();
    let mut visit = |v: Vec<F>, search: &mut Search<F>| -> bool {
        if v.iter().any(Field::is_negative) {
            return true;
        }
        let v: Vec<F> = v.into_iter().map(|x| if x.is_positive() { x } else { F::zero() }).collect();
        if !seen.insert(&v) {
            return true;
        }
        search.stats.vertices_examined += 1;
        search.stats.supports_examined += 1;
        let (rows, values) = sis_best_rows(pay, part, &v);
        let bound = rows.iter().map(|&r| &values[r]).fold(None::<&F>, |acc, x| match acc {
            Some(a) if a.geq(x) => Some(a),
            _ => Some(x),
        });
        if bound.is_some_and(|b| search.dominated(b)) {
            return true;
        }
        let support: Vec<usize> = (0..n).filter(|&c| v[c].is_positive()).collect();
        if let Some((value, sigma1)) = row_program(pay, &rows, &values, &support, &mut search.stats) {
            let profile = MixedProfile::new(sigma1, v).expect("LP solutions are distributions");
            search.offer(value, profile);
        }
        !search.done()
    };
    if base.is_full() {
        if let Some(v) = base.solution() {
            visit(v, search);
        }
        return;
    }
    dfs(&base, &hyperplanes, 0, search, &mut visit);
}

/// Depth-first search over sets of independent hyperplanes; `visit` gets
/// each fully determined point and returns false to stop.
fn dfs<F: Field>(
    ech: &Echelon<F>,
    hyperplanes: &[Vec<F>],
    start: usize,
    search: &mut Search<F>,
    visit: &mut impl FnMut(Vec<F>, &mut Search<F>) -> bool,
) -> bool {
    let needed = ech.dim() - ech.rank();
    if hyperplanes.len() - start < needed {
        return true;
    }
    let zero = F::zero();
    for i in start..hyperplanes.len() {
        if let Added::Independent(next) = ech.add(&hyperplanes[i], &zero) {
            let go_on = if next.is_full() {
                visit(next.solution().expect("full rank"), search)
            } else {
                dfs(&next, hyperplanes, i + 1, search, visit)
            };
            if !go_on {
                return false;
            }
        }
    }
    true
}

fn subsets(len: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..1 << len).map(move |mask| (0..len).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Support pairs ordered by total size, then lexicographically.
pub(super) fn support_pairs(m: usize, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let rows: Vec<Vec<usize>> = subsets(m).collect();
    let cols: Vec<Vec<usize>> = subsets(n).collect();
    let mut pairs: Vec<(Vec<usize>, Vec<usize>)> =
        rows.iter().flat_map(|r| cols.iter().map(move |c| (r.clone(), c.clone()))).collect();
    pairs.sort_by(|a, b| (a.0.len() + a.1.len(), &a.0, &a.1).cmp(&(b.0.len() + b.1.len(), &b.0, &b.1)));
    pairs
}

pub(super) fn support_enumeration<F: Field>(pay: &Payoffs<F>, part: &SisPartition, search: &mut Search<F>) {
    let (m, n) = (pay.rows(), pay.cols());
    for (rows, cols) in support_pairs(m, n) {
        search.stats.supports_examined += 1;
        let k = cols.len();
        let mut p2 = Polytope::new(k);
        p2.add_constraint(vec![F::one(); k], Relation::Eq, F::one()).expect("width k");
        for &r in &rows {
            for &r2 in part.cell_containing(r).iter().filter(|&&r2| r2 != r) {
                let coeffs = cols.iter().map(|&c| pay.u1.get(r, c).minus(pay.u1.get(r2, c))).collect();
                p2.add_constraint(coeffs, Relation::Ge, F::zero()).expect("width k");
            }
        }
        for vertex in vertices_of_bounded(&p2) {
            search.stats.vertices_examined += 1;
            let mut sigma2 = vec![F::zero(); n];
            for (&c, x) in cols.iter().zip(vertex) {
                sigma2[c] = x;
            }
            let values: Vec<F> = (0..m).map(|r| F::dot(pay.u1.row(r), &sigma2)).collect();
            let bound = rows.iter().map(|&r| &values[r]).fold(None::<&F>, |acc, x| match acc {
                Some(a) if a.geq(x) => Some(a),
                _ => Some(x),
            });
            if bound.is_some_and(|b| search.dominated(b)) {
                continue;
            }
            match row_program_full(pay, &rows, &values, &cols, &mut search.stats) {
                Some((value, sigma1)) => {
                    let profile = MixedProfile::new(sigma1, sigma2).expect("LP solutions are distributions");
                    search.offer(value, profile);
                    if search.done() {
                        return;
                    }
                }
                // P1 does not depend on the vertex.
                None => break,
            }
        }
    }
}

/// P1 with every column of `cols` required to be a best response.
fn row_program_full<F: Field>(
    pay: &Payoffs<F>,
    rows: &[usize],
    gains: &[F],
    cols: &[usize],
    stats: &mut SearchStats,
) -> Option<(F, Vec<F>)> {
    let n = pay.cols();
    let objective = rows.iter().map(|&r| gains[r].clone()).collect();
    let mut lp = LinearProgram::maximize(objective);
    lp.push(vec![F::one(); rows.len()], Relation::Eq, F::one());
    for &c in cols {
        for c2 in (0..n).filter(|&c2| c2 != c) {
            let coeffs = rows.iter().map(|&r| pay.u2.get(r, c).minus(pay.u2.get(r, c2))).collect();
            lp.push(coeffs, Relation::Ge, F::zero());
        }
    }
    stats.lps_solved += 1;
    let sol = match lp.solve() {
        LpOutcome::Optimal(sol) => sol,
        _ => return None,
    };
    let mut sigma1 = vec![F::zero(); pay.rows()];
    for (&r, x) in rows.iter().zip(sol.x) {
        sigma1[r] = x;
    }
    Some((sol.value, sigma1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::generators::{gen_example, Example};
    use crate::num::{ratio, Rational};

    fn both(game: &Game) -> (Rational, Rational) {
        let a = solve_selo::<Rational>(game, &SeloOptions::default()).unwrap();
        let opts = SeloOptions { strategy: SeloStrategy::SupportEnumeration, ..SeloOptions::default() };
        let b = solve_selo::<Rational>(game, &opts).unwrap();
        assert!(a.verifier_passed && b.verifier_passed);
        (a.value, b.value)
    }

    #[test]
    fn commitment_example_partitions() {
        let g = gen_example(Example::Commitment4x2);
        assert_eq!(both(&g), (ratio(7, 2), ratio(7, 2)));
        let single = g.with_partition(SisPartition::singletons(4)).unwrap();
        assert_eq!(both(&single), (ratio(13, 2), ratio(13, 2)));
        let one = g.with_partition(SisPartition::one_cell(4)).unwrap();
        assert_eq!(both(&one), (ratio(2, 1), ratio(2, 1)));
    }

    #[test]
    fn signaling_example_has_no_uncorrelated_gain() {
        let g = gen_example(Example::Signaling5x4);
        assert_eq!(both(&g), (ratio(1, 1), ratio(1, 1)));
    }

    #[test]
    fn upper_bound_stops_early() {
        let g = gen_example(Example::Commitment4x2);
        let opts = SeloOptions { upper_bound: Some(ratio(7, 2)), ..SeloOptions::default() };
        let rep = solve_selo::<Rational>(&g, &opts).unwrap();
        assert_eq!(rep.value, ratio(7, 2));
        assert!(rep.stats.stopped_early);
    }

    #[test]
    fn scale_guard() {
        let rows: Vec<Vec<i64>> = vec![vec![0; 8]; 8];
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let g = Game::from_ints(&refs, &refs, vec![(0..8).collect()]).unwrap();
        let err = solve_selo::<Rational>(&g, &SeloOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ScaleGuardExceeded { rows: 8, cols: 8, limit: 14 }));
        let opts = SeloOptions { allow_large: true, ..SeloOptions::default() };
        assert_eq!(solve_selo::<Rational>(&g, &opts).unwrap().value, ratio(0, 1));
    }

    #[test]
    fn pairs_are_ordered() {
        let pairs = support_pairs(2, 2);
        assert_eq!(pairs.len(), 9);
        assert_eq!(pairs[0], (vec![0], vec![0]));
        assert_eq!(pairs[1], (vec![0], vec![1]));
        assert_eq!(pairs[4], (vec![0], vec![0, 1]));
        assert_eq!(pairs.last().unwrap(), &(vec![0, 1], vec![0, 1]));
    }
}
