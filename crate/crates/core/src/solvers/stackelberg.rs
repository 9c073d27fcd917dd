use super::{Concept, SearchStats, SolveReport, Witness};
use crate::deviation::verify_mixed;
use crate::error::{Error, Result};
use crate::game::{Game, SisPartition};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::num::Field;
use crate::profile::{unit, MixedProfile};

/// Full-commitment Stackelberg value with ties broken in the row player's
/// favor: for every column `c*`, maximize `u1(σ1, c*)` over the `σ1` that
/// make `c*` a best response, and keep the best column (the first one on
/// ties). The game's partition is ignored.
pub fn solve_stackelberg<F: Field>(game: &Game) -> Result<SolveReport<F>> {
    let pay = game.payoffs::<F>();
    let (m, n) = (pay.rows(), pay.cols());
    let mut stats = SearchStats::default();
    let mut best: Option<(F, Vec<F>, usize)> = None;
    for target in 0..n {
        let objective = (0..m).map(|r| pay.u1.get(r, target).clone()).collect();
        let mut lp = LinearProgram::maximize(objective);
        lp.push(vec![F::one(); m], Relation::Eq, F::one());
        for c in (0..n).filter(|&c| c != target) {
            let coeffs = (0..m).map(|r| pay.u2.get(r, target).minus(pay.u2.get(r, c))).collect();
            lp.push(coeffs, Relation::Ge, F::zero());
        }
        stats.lps_solved += 1;
        stats.supports_examined += 1;
        if let LpOutcome::Optimal(sol) = lp.solve() {
            if best.as_ref().is_none_or(|(v, _, _)| sol.value.minus(v).is_positive()) {
                best = Some((sol.value, sol.x, target));
            }
        }
    }
    let (value, sigma1, target) =
        best.ok_or_else(|| Error::Internal("no column is a best response to anything".into()))?;
    let profile = MixedProfile::new(sigma1, unit(n, target))?;
    let singletons = game.with_partition(SisPartition::singletons(m))?;
    let verifier_passed = verify_mixed(&singletons, &profile)?.passed;
    Ok(SolveReport { concept: Concept::Stackelberg, value, witness: Witness::Mixed(profile), verifier_passed, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example, Example};
    use crate::num::{ratio, Rational};

    #[test]
    fn commitment_example() {
        let rep = solve_stackelberg::<Rational>(&gen_example(Example::Commitment4x2)).unwrap();
        assert_eq!(rep.value, ratio(13, 2));
        let Witness::Mixed(p) = &rep.witness else { panic!() };
        assert_eq!(p.sigma1(), &[ratio(1, 2), ratio(1, 2), ratio(0, 1), ratio(0, 1)]);
        assert_eq!(p.sigma2(), &[ratio(1, 1), ratio(0, 1)]);
        assert!(rep.verifier_passed);
    }

    #[test]
    fn one_by_one() {
        let g = Game::from_ints(&[&[5]], &[&[7]], vec![vec![0]]).unwrap();
        assert_eq!(solve_stackelberg::<Rational>(&g).unwrap().value, ratio(5, 1));
    }
}
