use super::{Concept, SearchStats, SolveReport, Witness};
use crate::deviation::verify_correlated;
use crate::error::{Error, Result};
use crate::game::{Game, Matrix, SisPartition};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::num::Field;
use crate::profile::CorrelatedProfile;

/// The program over `p(r,c)`, indexed `r·n + c`:
///
/// ```text
/// maximize   Σ u1(r,c) p(r,c)
/// subject to Σ p(r,c) = 1,  p >= 0
///            Σ_c (u1(r',c) − u1(r,c)) p(r,c) <= 0   for r ≠ r' in one SIS
///            Σ_r (u2(r,c') − u2(r,c)) p(r,c) <= 0   for c ≠ c'
/// ```
pub(crate) fn seslo_program<F: Field>(game: &Game) -> LinearProgram<F> {
    let pay = game.payoffs::<F>();
    let (m, n) = (pay.rows(), pay.cols());
    let idx = |r: usize, c: usize| r * n + c;
    let mut lp = LinearProgram::maximize(pay.u1.as_slice().to_vec());
    lp.push(vec![F::one(); m * n], Relation::Eq, F::one());
    for cell in game.partition().cells() {
        for &r in cell {
            for &r2 in cell.iter().filter(|&&r2| r2 != r) {
                let mut coeffs = vec![F::zero(); m * n];
                for c in 0..n {
                    coeffs[idx(r, c)] = pay.u1.get(r2, c).minus(pay.u1.get(r, c));
                }
                lp.push(coeffs, Relation::Le, F::zero());
            }
        }
    }
    for c in 0..n {
        for c2 in (0..n).filter(|&c2| c2 != c) {
            let mut coeffs = vec![F::zero(); m * n];
            for r in 0..m {
                coeffs[idx(r, c)] = pay.u2.get(r, c2).minus(pay.u2.get(r, c));
            }
            lp.push(coeffs, Relation::Le, F::zero());
        }
    }
    lp
}

/// Best correlated profile without undetectable beneficial deviations when
/// the mediator reveals the row recommendation after play.
pub fn solve_seslo<F: Field>(game: &Game) -> Result<SolveReport<F>> {
    solve_program(game, Concept::Seslo)
}

/// Correlated equilibrium maximizing the row player's utility: the SESLO
/// of the game with a single SIS.
pub fn solve_max_ce<F: Field>(game: &Game) -> Result<SolveReport<F>> {
    let one_cell = game.with_partition(SisPartition::one_cell(game.num_rows()))?;
    solve_program(&one_cell, Concept::MaxCe)
}

fn solve_program<F: Field>(game: &Game, concept: Concept) -> Result<SolveReport<F>> {
    let lp = seslo_program::<F>(game);
    let sol = match lp.solve() {
        LpOutcome::Optimal(sol) => sol,
        other => {
            return Err(Error::Internal(format!(
                "{concept} program reported {:?}; every game has a correlated equilibrium",
                other.status()
            )))
        }
    };
    let (m, n) = (game.num_rows(), game.num_cols());
    let mut x = sol.x.into_iter();
    let p = Matrix::from_fn(m, n, |_, _| x.next().expect("m·n variables"));
    let profile = CorrelatedProfile::new(p)?;
    let verifier_passed = verify_correlated(game, &profile)?.passed;
    Ok(SolveReport {
        concept,
        value: sol.value,
        witness: Witness::Correlated(profile),
        verifier_passed,
        stats: SearchStats { lps_solved: 1, ..SearchStats::default() },
    })
}
