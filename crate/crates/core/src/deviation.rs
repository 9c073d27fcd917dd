//! Undetectable deviations.
//!
//! A profile has no undetectable beneficial deviation when the column
//! player only plays best responses and the row player cannot profit by
//! swapping a recommended row for another one the column player could not
//! tell apart from it. What "could not tell apart" means depends on the
//! [`SignalModel`].
//!
//! All gains reported here are expected-utility gains: the probability of
//! the deviating recommendation is folded in, so a mixed profile and its
//! embedding as a correlated profile report identical numbers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::game::{Game, Matrix, Payoffs};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::num::Field;
use crate::profile::{conditional_sis_given_column, CorrelatedProfile, MixedProfile};

pub use crate::profile::embed_mixed_as_correlated;

/// What the column player (or an auditor) learns about the row player's
/// recommendation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalModel {
    /// The row recommendation is revealed after play, so only swaps inside
    /// the recommended row's SIS go unnoticed.
    PublicReveal,
    /// The row recommendation is never revealed; a deviation only has to
    /// keep the SIS distribution seen alongside each column signal.
    NoReveal,
    /// As [`SignalModel::NoReveal`], and the row player also knows the
    /// column's signal when choosing how to deviate.
    RowKnowsColumnSignal,
}

impl SignalModel {
    pub const ALL: [SignalModel; 3] =
        [SignalModel::PublicReveal, SignalModel::NoReveal, SignalModel::RowKnowsColumnSignal];

    pub fn name(self) -> &'static str {
        match self {
            SignalModel::PublicReveal => "public-reveal",
            SignalModel::NoReveal => "no-reveal",
            SignalModel::RowKnowsColumnSignal => "row-knows",
        }
    }

    fn per_column(self) -> bool {
        self == SignalModel::RowKnowsColumnSignal
    }
}

impl fmt::Display for SignalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignalModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "public-reveal" => Ok(SignalModel::PublicReveal),
            "no-reveal" => Ok(SignalModel::NoReveal),
            "row-knows" | "row-knows-column-signal" => Ok(SignalModel::RowKnowsColumnSignal),
            other => Err(Error::Parse(format!("unknown signal model `{other}`"))),
        }
    }
}

/// Outcome of checking a profile for undetectable beneficial deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport<F> {
    pub passed: bool,
    /// Largest gain of the column player from replacing a recommended
    /// column `c` by `c'`; never negative.
    pub max_column_gain: F,
    /// Largest gain of the row player from replacing a recommended row `r`
    /// by `r'` in the same SIS; never negative.
    pub max_row_gain: F,
    /// `(c, c')` attaining a positive column gain.
    pub column_witness: Option<(usize, usize)>,
    /// `(r, r')` attaining a positive row gain.
    pub row_witness: Option<(usize, usize)>,
}

struct Best<F> {
    gain: F,
    at: Option<(usize, usize)>,
}

impl<F: Field> Best<F> {
    fn new() -> Self {
        Self { gain: F::zero(), at: None }
    }

    fn offer(&mut self, gain: F, at: (usize, usize)) {
        if gain.minus(&self.gain).is_positive() {
            self.gain = gain;
            self.at = Some(at);
        }
    }
}

fn report<F: Field>(column: Best<F>, row: Best<F>) -> VerifyReport<F> {
    let passed = !column.gain.is_positive() && !row.gain.is_positive();
    VerifyReport {
        passed,
        max_column_gain: column.gain,
        max_row_gain: row.gain,
        column_witness: column.at,
        row_witness: row.at,
    }
}

/// Checks a mixed profile: every column in the support of `σ2` must be a
/// best response to `σ1`, and every row in the support of `σ1` must be a
/// best response to `σ2` among the rows of its SIS.
pub fn verify_mixed<F: Field>(game: &Game, profile: &MixedProfile<F>) -> Result<VerifyReport<F>> {
    let pay = game.payoffs::<F>();
    check_mixed_dims(&pay, profile)?;
    let (s1, s2) = (profile.sigma1(), profile.sigma2());
    let col_values: Vec<F> = (0..pay.cols()).map(|c| column_value(&pay.u2, s1, c)).collect();
    let row_values: Vec<F> = (0..pay.rows()).map(|r| F::dot(pay.u1.row(r), s2)).collect();

    let mut column = Best::new();
    for (c, w) in s2.iter().enumerate().filter(|(_, w)| w.is_positive()) {
        for (c2, v) in col_values.iter().enumerate() {
            column.offer(w.times(&v.minus(&col_values[c])), (c, c2));
        }
    }
    let mut row = Best::new();
    for (r, w) in s1.iter().enumerate().filter(|(_, w)| w.is_positive()) {
        for &r2 in game.partition().cell_containing(r) {
            row.offer(w.times(&row_values[r2].minus(&row_values[r])), (r, r2));
        }
    }
    Ok(report(column, row))
}

fn column_value<F: Field>(u2: &Matrix<F>, sigma1: &[F], c: usize) -> F {
    let mut acc = F::zero();
    for (r, w) in sigma1.iter().enumerate() {
        acc.add_mul_assign(w, u2.get(r, c));
    }
    acc
}

fn check_mixed_dims<F: Field>(pay: &Payoffs<F>, profile: &MixedProfile<F>) -> Result<()> {
    if profile.sigma1().len() != pay.rows() || profile.sigma2().len() != pay.cols() {
        return Err(Error::DimensionMismatch(format!(
            "profile is {}x{} but game is {}x{}",
            profile.sigma1().len(),
            profile.sigma2().len(),
            pay.rows(),
            pay.cols()
        )));
    }
    Ok(())
}

fn check_joint_dims<F: Field>(game: &Game, profile: &CorrelatedProfile<F>) -> Result<()> {
    if profile.num_rows() != game.num_rows() || profile.num_cols() != game.num_cols() {
        return Err(Error::DimensionMismatch(format!(
            "profile is {}x{} but game is {}x{}",
            profile.num_rows(),
            profile.num_cols(),
            game.num_rows(),
            game.num_cols()
        )));
    }
    Ok(())
}

/// Checks a correlated profile with the unnormalized linear tests:
/// `Σ_r p(r,c)(u2(r,c') − u2(r,c)) <= 0` for all column pairs and
/// `Σ_c p(r,c)(u1(r',c) − u1(r,c)) <= 0` for all row pairs sharing a SIS.
pub fn verify_correlated<F: Field>(game: &Game, profile: &CorrelatedProfile<F>) -> Result<VerifyReport<F>> {
    check_joint_dims(game, profile)?;
    let pay = game.payoffs::<F>();
    let (m, n) = (pay.rows(), pay.cols());
    let p = profile.matrix();

    let mut column = Best::new();
    for c in 0..n {
        for c2 in 0..n {
            let mut gain = F::zero();
            for r in 0..m {
                gain.add_mul_assign(p.get(r, c), &pay.u2.get(r, c2).minus(pay.u2.get(r, c)));
            }
            column.offer(gain, (c, c2));
        }
    }
    let mut row = Best::new();
    for r in 0..m {
        for &r2 in game.partition().cell_containing(r) {
            let mut gain = F::zero();
            for c in 0..n {
                gain.add_mul_assign(p.get(r, c), &pay.u1.get(r2, c).minus(pay.u1.get(r, c)));
            }
            row.offer(gain, (r, r2));
        }
    }
    Ok(report(column, row))
}

/// A stochastic relabeling of row recommendations.
///
/// `delta[k]` is an `m × m` row-stochastic matrix whose row `r` is the
/// distribution of the row actually played when `r` is recommended. Plans
/// for [`SignalModel::RowKnowsColumnSignal`] hold one matrix per column
/// signal; the other models hold a single matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationPlan<F> {
    model: SignalModel,
    delta: Vec<Matrix<F>>,
    gain: F,
}

impl<F: Field> DeviationPlan<F> {
    /// Validates `delta` against `profile` under `model` and computes its
    /// expected gain.
    pub fn new(
        game: &Game,
        profile: &CorrelatedProfile<F>,
        model: SignalModel,
        delta: Vec<Matrix<F>>,
    ) -> Result<Self> {
        check_joint_dims(game, profile)?;
        let mut plan = Self { model, delta, gain: F::zero() };
        plan.validate(game, profile)?;
        plan.gain = plan.evaluate(game, profile)?;
        Ok(plan)
    }

    pub fn model(&self) -> SignalModel {
        self.model
    }

    pub fn gain(&self) -> &F {
        &self.gain
    }

    /// Distribution of the played row given recommendation `(row, col)`.
    pub fn distribution(&self, row: usize, col: usize) -> &[F] {
        let k = if self.model.per_column() { col } else { 0 };
        self.delta[k].row(row)
    }

    pub fn matrices(&self) -> &[Matrix<F>] {
        &self.delta
    }

    /// The joint distribution of (played row, column signal).
    pub fn apply(&self, profile: &CorrelatedProfile<F>) -> Result<CorrelatedProfile<F>> {
        let (m, n) = (profile.num_rows(), profile.num_cols());
        let mut out = Matrix::from_fn(m, n, |_, _| F::zero());
        for r in 0..m {
            for c in 0..n {
                let mass = profile.get(r, c);
                if mass.is_zero() {
                    continue;
                }
                for (r2, d) in self.distribution(r, c).iter().enumerate() {
                    let cell = out.get_mut(r2, c);
                    cell.add_mul_assign(mass, d);
                }
            }
        }
        CorrelatedProfile::new(out)
    }

    /// Row player's expected utility gain from following the plan.
    pub fn evaluate(&self, game: &Game, profile: &CorrelatedProfile<F>) -> Result<F> {
        check_joint_dims(game, profile)?;
        let pay = game.payoffs::<F>();
        let deviated = self.apply(profile)?;
        Ok(F::dot(pay.u1.as_slice(), deviated.matrix().as_slice())
            .minus(&F::dot(pay.u1.as_slice(), profile.matrix().as_slice())))
    }

    /// Checks stochasticity and the model's undetectability condition.
    pub fn validate(&self, game: &Game, profile: &CorrelatedProfile<F>) -> Result<()> {
        let (m, n) = (game.num_rows(), game.num_cols());
        let expected = if self.model.per_column() { n } else { 1 };
        if self.delta.len() != expected || self.delta.iter().any(|d| d.rows() != m || d.cols() != m) {
            return Err(Error::InvalidPlan(format!(
                "{} plans need {expected} matrices of size {m}x{m}",
                self.model
            )));
        }
        for (k, d) in self.delta.iter().enumerate() {
            for r in 0..m {
                let dist = d.row(r);
                if dist.iter().any(Field::is_negative) || !F::sum(dist).approx_eq(&F::one()) {
                    return Err(Error::InvalidPlan(format!("row {r} of matrix {k} is not a distribution")));
                }
            }
        }
        match self.model {
            SignalModel::PublicReveal => {
                let part = game.partition();
                for r in 0..m {
                    let cell = part.cell_of(r);
                    let leak = self.delta[0]
                        .row(r)
                        .iter()
                        .enumerate()
                        .find(|(r2, d)| part.cell_of(*r2) != cell && !d.is_zero());
                    if let Some((r2, _)) = leak {
                        return Err(Error::InvalidPlan(format!("row {r} is sent to row {r2} in another SIS")));
                    }
                }
            }
            SignalModel::NoReveal | SignalModel::RowKnowsColumnSignal => {
                let deviated = self.apply(profile)?;
                for c in 0..n {
                    let before = conditional_sis_given_column(profile, game.partition(), c);
                    let after = conditional_sis_given_column(&deviated, game.partition(), c);
                    let same = match (&before, &after) {
                        (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| x.approx_eq(y)),
                        (None, None) => true,
                        _ => false,
                    };
                    if !same {
                        return Err(Error::InvalidPlan(format!(
                            "the SIS distribution seen with column signal {c} changes"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The maximum-gain undetectable deviation from `profile` under `model`,
/// found by one linear program over the plan's entries. Recommendations
/// that are never sent are left unchanged.
pub fn find_deviation<F: Field>(
    game: &Game,
    profile: &CorrelatedProfile<F>,
    model: SignalModel,
) -> Result<DeviationPlan<F>> {
    check_joint_dims(game, profile)?;
    let pay = game.payoffs::<F>();
    let (m, n) = (game.num_rows(), game.num_cols());
    let part = game.partition();
    let p = profile.matrix();
    let row_mass = profile.row_marginal();
    let col_mass = profile.col_marginal();

    // Free sources: (matrix index, source row). A source is free when its
    // recommendation is actually sent.
    let sources: Vec<(usize, usize)> = if model.per_column() {
        (0..n).flat_map(|c| (0..m).map(move |r| (c, r))).filter(|&(c, r)| p.get(r, c).is_positive()).collect()
    } else {
        (0..m).filter(|&r| row_mass[r].is_positive()).map(|r| (0, r)).collect()
    };
    // Variables: (source index, target row) pairs allowed by the model.
    let mut vars: Vec<(usize, usize)> = Vec::new();
    for (s, &(_, r)) in sources.iter().enumerate() {
        for r2 in 0..m {
            if model != SignalModel::PublicReveal || part.cell_of(r2) == part.cell_of(r) {
                vars.push((s, r2));
            }
        }
    }
    // Mass of recommendation (r, c) that source s controls.
    let weight = |s: usize, c: usize| -> F {
        let (k, r) = sources[s];
        if model.per_column() && k != c {
            F::zero()
        } else {
            p.get(r, c).clone()
        }
    };

    let objective: Vec<F> = vars
        .iter()
        .map(|&(s, r2)| {
            let mut acc = F::zero();
            for c in 0..n {
                acc.add_mul_assign(&weight(s, c), pay.u1.get(r2, c));
            }
            acc
        })
        .collect();
    let mut lp = LinearProgram::maximize(objective);
    for s in 0..sources.len() {
        let coeffs = vars.iter().map(|&(vs, _)| if vs == s { F::one() } else { F::zero() }).collect();
        lp.push(coeffs, Relation::Eq, F::one());
    }
    if model != SignalModel::PublicReveal {
        for c in (0..n).filter(|&c| col_mass[c].is_positive()) {
            for cell in part.cells() {
                let coeffs = vars
                    .iter()
                    .map(|&(s, r2)| if part.cell_of(r2) == part.cell_of(cell[0]) { weight(s, c) } else { F::zero() })
                    .collect();
                let target = F::sum(cell.iter().map(|&r| p.get(r, c)));
                lp.push(coeffs, Relation::Eq, target);
            }
        }
    }
    let solution = match lp.solve() {
        LpOutcome::Optimal(sol) => sol,
        other => {
            return Err(Error::Internal(format!(
                "deviation program is {:?} although the identity plan is feasible",
                other.status()
            )))
        }
    };

    let count = if model.per_column() { n } else { 1 };
    let mut delta: Vec<Matrix<F>> =
        (0..count).map(|_| Matrix::from_fn(m, m, |i, j| if i == j { F::one() } else { F::zero() })).collect();
    for &(k, r) in &sources {
        for r2 in 0..m {
            *delta[k].get_mut(r, r2) = F::zero();
        }
    }
    for (&(s, r2), x) in vars.iter().zip(&solution.x) {
        let (k, r) = sources[s];
        *delta[k].get_mut(r, r2) = x.clone();
    }
    let plan = DeviationPlan { model, delta, gain: F::zero() };
    let gain = plan.evaluate(game, profile)?;
    Ok(DeviationPlan { gain, ..plan })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::SisPartition;
    use crate::generators::{gen_example, signaling_profile, weak_signaling_profile, Example};
    use crate::num::{ratio, Rational};

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn mixed(s1: &[(i64, i64)], s2: &[(i64, i64)]) -> MixedProfile<Rational> {
        let v = |s: &[(i64, i64)]| s.iter().map(|&(a, b)| q(a, b)).collect();
        MixedProfile::new(v(s1), v(s2)).unwrap()
    }

    #[test]
    fn mixed_examples() {
        let g = gen_example(Example::Commitment4x2);
        let cd = mixed(&[(0, 1), (0, 1), (1, 2), (1, 2)], &[(1, 2), (1, 2)]);
        assert!(verify_mixed(&g, &cd).unwrap().passed);

        let ab = mixed(&[(1, 2), (1, 2), (0, 1), (0, 1)], &[(1, 1), (0, 1)]);
        let rep = verify_mixed(&g, &ab).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.max_row_gain, q(1, 2));
        assert_eq!(rep.row_witness, Some((1, 0)));

        for cells in [vec![vec![0, 1], vec![2, 3]], vec![vec![0, 1, 2, 3]], vec![vec![0], vec![1], vec![2], vec![3]]] {
            let g = g.with_partition(SisPartition::new(cells, 4).unwrap()).unwrap();
            assert!(verify_mixed(&g, &MixedProfile::<Rational>::pure(4, 2, 0, 1)).unwrap().passed);
        }
    }

    #[test]
    fn correlated_examples() {
        let g = gen_example(Example::Signaling5x4);
        let p = signaling_profile();
        assert!(verify_correlated(&g, &p).unwrap().passed);
        let singletons = g.with_partition(SisPartition::singletons(5)).unwrap();
        assert!(verify_correlated(&singletons, &p).unwrap().passed);

        let shapley = gen_example(Example::Shapley);
        let off_diagonal = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
        let ce = CorrelatedProfile::<Rational>::uniform_over(3, 3, &off_diagonal).unwrap();
        assert!(verify_correlated(&shapley, &ce).unwrap().passed);
    }

    #[test]
    fn explicit_no_reveal_plan_gains_one_third() {
        let g = gen_example(Example::WeakSignaling6x4);
        let p = weak_signaling_profile();
        let h = q(1, 2);
        let mut d = Matrix::from_fn(6, 6, |_, _| q(0, 1));
        // a,b,c stay with probability 1/2 and otherwise go to e,f,d
        for (r, other) in [(0, 4), (1, 5), (2, 3)] {
            *d.get_mut(r, r) = h.clone();
            *d.get_mut(r, other) = h.clone();
        }
        // d,e,f jump to c,a,b
        for (r, target) in [(3, 2), (4, 0), (5, 1)] {
            *d.get_mut(r, target) = q(1, 1);
        }
        let plan = DeviationPlan::new(&g, &p, SignalModel::NoReveal, vec![d.clone()]).unwrap();
        assert_eq!(*plan.gain(), q(1, 3));
        assert!(matches!(
            DeviationPlan::new(&g, &p, SignalModel::PublicReveal, vec![d]),
            Err(Error::InvalidPlan(_))
        ));
    }

    #[test]
    fn deviation_finder_examples() {
        let g6 = gen_example(Example::WeakSignaling6x4);
        let p6 = weak_signaling_profile();
        assert_eq!(*find_deviation(&g6, &p6, SignalModel::PublicReveal).unwrap().gain(), q(0, 1));
        let nr = find_deviation(&g6, &p6, SignalModel::NoReveal).unwrap();
        assert!(*nr.gain() >= q(1, 3));

        let g5 = gen_example(Example::Signaling5x4);
        let p5 = signaling_profile();
        let rk = find_deviation(&g5, &p5, SignalModel::RowKnowsColumnSignal).unwrap();
        assert_eq!(*rk.gain(), q(4, 1));
        rk.validate(&g5, &p5).unwrap();
    }

    #[test]
    fn identity_plan_is_required_to_be_stochastic() {
        let g = gen_example(Example::Shapley);
        let p = CorrelatedProfile::<Rational>::uniform_over(3, 3, &[(0, 0)]).unwrap();
        let bad = Matrix::from_fn(3, 3, |_, _| q(1, 2));
        assert!(matches!(
            DeviationPlan::new(&g, &p, SignalModel::NoReveal, vec![bad]),
            Err(Error::InvalidPlan(_))
        ));
    }

    #[test]
    fn models_parse() {
        for model in SignalModel::ALL {
            assert_eq!(model.name().parse::<SignalModel>().unwrap(), model);
        }
        assert_eq!("ROW_KNOWS_COLUMN_SIGNAL".parse::<SignalModel>().unwrap(), SignalModel::RowKnowsColumnSignal);
        assert!("loud".parse::<SignalModel>().is_err());
    }
}
