//! Mixed and correlated profiles, utilities, and SIS marginals.

use crate::error::{Error, Result};
use crate::game::{Game, Matrix, Payoffs, SisPartition};
use crate::num::{Field, Mode};

/// Checks a probability vector: entries nonnegative, total exactly one in
/// exact mode. In float mode, entries within tolerance of zero are clamped
/// and the vector is renormalized.
fn normalize<F: Field>(mut v: Vec<F>, what: &str) -> Result<Vec<F>> {
    if v.is_empty() {
        return Err(Error::InvalidProfile(format!("{what} is empty")));
    }
    if let Some(i) = v.iter().position(|x| x.is_negative()) {
        return Err(Error::InvalidProfile(format!("{what}[{i}] = {} is negative", v[i])));
    }
    let total = F::sum(&v);
    if !total.approx_eq(&F::one()) {
        return Err(Error::InvalidProfile(format!("{what} sums to {total}, not 1")));
    }
    if F::MODE == Mode::Float {
        for x in v.iter_mut() {
            if x.to_f64() < 0.0 {
                *x = F::zero();
            }
        }
        let total = F::sum(&v);
        for x in v.iter_mut() {
            *x = x.over(&total);
        }
    }
    Ok(v)
}

/// A pair of independent mixed strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile<F> {
    sigma1: Vec<F>,
    sigma2: Vec<F>,
}

impl<F: Field> MixedProfile<F> {
    pub fn new(sigma1: Vec<F>, sigma2: Vec<F>) -> Result<Self> {
        Ok(Self { sigma1: normalize(sigma1, "sigma1")?, sigma2: normalize(sigma2, "sigma2")? })
    }

    pub fn pure(num_rows: usize, num_cols: usize, row: usize, col: usize) -> Self {
        Self { sigma1: unit(num_rows, row), sigma2: unit(num_cols, col) }
    }

    pub fn sigma1(&self) -> &[F] {
        &self.sigma1
    }

    pub fn sigma2(&self) -> &[F] {
        &self.sigma2
    }

    fn check_dims(&self, m: usize, n: usize) -> Result<()> {
        if self.sigma1.len() != m || self.sigma2.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "profile is {}x{} but game is {m}x{n}",
                self.sigma1.len(),
                self.sigma2.len()
            )));
        }
        Ok(())
    }
}

pub(crate) fn unit<F: Field>(len: usize, at: usize) -> Vec<F> {
    (0..len).map(|i| if i == at { F::one() } else { F::zero() }).collect()
}

/// Joint distribution over action pairs; the signal to each player is the
/// action they are recommended.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedProfile<F> {
    p: Matrix<F>,
}

impl<F: Field> CorrelatedProfile<F> {
    pub fn new(p: Matrix<F>) -> Result<Self> {
        let (m, n) = (p.rows(), p.cols());
        let flat = normalize(p.as_slice().to_vec(), "p")?;
        let mut it = flat.into_iter();
        Ok(Self { p: Matrix::from_fn(m, n, |_, _| it.next().expect("sized")) })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Uniform distribution over the listed `(row, col)` atoms.
    pub fn uniform_over(num_rows: usize, num_cols: usize, atoms: &[(usize, usize)]) -> Result<Self> {
        let weight = F::one().over(&F::from_int(atoms.len() as i64));
        let mut p = Matrix::from_fn(num_rows, num_cols, |_, _| F::zero());
        for &(r, c) in atoms {
            if r >= num_rows || c >= num_cols {
                return Err(Error::DimensionMismatch(format!("atom ({r},{c}) out of range")));
            }
            let cell = p.get_mut(r, c);
            *cell = cell.plus(&weight);
        }
        Self::new(p)
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.p
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        self.p.get(r, c)
    }

    pub fn num_rows(&self) -> usize {
        self.p.rows()
    }

    pub fn num_cols(&self) -> usize {
        self.p.cols()
    }

    pub fn row_marginal(&self) -> Vec<F> {
        (0..self.p.rows()).map(|r| F::sum(self.p.row(r))).collect()
    }

    pub fn col_marginal(&self) -> Vec<F> {
        (0..self.p.cols())
            .map(|c| {
                let mut acc = F::zero();
                for r in 0..self.p.rows() {
                    acc = acc.plus(self.p.get(r, c));
                }
                acc
            })
            .collect()
    }

    fn check_dims(&self, m: usize, n: usize) -> Result<()> {
        if self.p.rows() != m || self.p.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "profile is {}x{} but game is {m}x{n}",
                self.p.rows(),
                self.p.cols()
            )));
        }
        Ok(())
    }
}

/// `(σ1ᵀ u1 σ2, σ1ᵀ u2 σ2)`.
pub fn expected_utilities<F: Field>(game: &Game, profile: &MixedProfile<F>) -> Result<(F, F)> {
    mixed_utilities(&game.payoffs(), profile)
}

pub fn mixed_utilities<F: Field>(pay: &Payoffs<F>, profile: &MixedProfile<F>) -> Result<(F, F)> {
    profile.check_dims(pay.rows(), pay.cols())?;
    let mut v1 = F::zero();
    let mut v2 = F::zero();
    for (r, s1) in profile.sigma1.iter().enumerate() {
        if s1.is_zero() && F::MODE == Mode::Exact {
            continue;
        }
        let a = F::dot(pay.u1.row(r), &profile.sigma2);
        let b = F::dot(pay.u2.row(r), &profile.sigma2);
        v1.add_mul_assign(s1, &a);
        v2.add_mul_assign(s1, &b);
    }
    Ok((v1, v2))
}

/// `(Σ u1(r,c) p(r,c), Σ u2(r,c) p(r,c))`.
pub fn correlated_utilities<F: Field>(game: &Game, profile: &CorrelatedProfile<F>) -> Result<(F, F)> {
    joint_utilities(&game.payoffs(), profile)
}

pub fn joint_utilities<F: Field>(pay: &Payoffs<F>, profile: &CorrelatedProfile<F>) -> Result<(F, F)> {
    profile.check_dims(pay.rows(), pay.cols())?;
    let p = profile.p.as_slice();
    Ok((F::dot(pay.u1.as_slice(), p), F::dot(pay.u2.as_slice(), p)))
}

/// Mass each SIS receives, in canonical cell order.
pub fn sis_mass<F: Field>(row_marginal: &[F], partition: &SisPartition) -> Vec<F> {
    partition
        .cells()
        .iter()
        .map(|cell| {
            let mut acc = F::zero();
            for &r in cell {
                acc = acc.plus(&row_marginal[r]);
            }
            acc
        })
        .collect()
}

/// Distribution over SISes given that the column player was told to play
/// `col`; `None` when that recommendation is never sent.
pub fn conditional_sis_given_column<F: Field>(
    profile: &CorrelatedProfile<F>,
    partition: &SisPartition,
    col: usize,
) -> Option<Vec<F>> {
    let column: Vec<F> = (0..profile.num_rows()).map(|r| profile.get(r, col).clone()).collect();
    let total = F::sum(&column);
    if total.is_zero() {
        return None;
    }
    Some(sis_mass(&column, partition).into_iter().map(|x| x.over(&total)).collect())
}

/// Outer product `σ(r,c) = σ1(r)σ2(c)`.
pub fn embed_mixed_as_correlated<F: Field>(profile: &MixedProfile<F>) -> CorrelatedProfile<F> {
    let p = Matrix::from_fn(profile.sigma1.len(), profile.sigma2.len(), |r, c| {
        profile.sigma1[r].times(&profile.sigma2[c])
    });
    CorrelatedProfile { p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example, Example};
    use crate::num::{ratio, Rational};

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn half_a_half_d_against_half_a_half_b() {
        let g = gen_example(Example::Commitment4x2);
        let prof = MixedProfile::new(
            vec![q(1, 2), q(0, 1), q(0, 1), q(1, 2)],
            vec![q(1, 2), q(1, 2)],
        )
        .unwrap();
        let (u1, _) = expected_utilities(&g, &prof).unwrap();
        assert_eq!(u1, q(7, 2));
        assert_eq!(sis_mass(prof.sigma1(), g.partition()), vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn pure_profile_reads_the_table() {
        let g = gen_example(Example::Commitment4x2);
        let prof = MixedProfile::<Rational>::pure(4, 2, 0, 1);
        assert_eq!(expected_utilities(&g, &prof).unwrap(), (q(2, 1), q(1, 1)));
        for r in 0..4 {
            for c in 0..2 {
                let prof = MixedProfile::<Rational>::pure(4, 2, r, c);
                let got = expected_utilities(&g, &prof).unwrap();
                assert_eq!(got, (g.u1().get(r, c).clone(), g.u2().get(r, c).clone()));
            }
        }
    }

    #[test]
    fn nine_atom_profiles() {
        let g = gen_example(Example::Signaling5x4);
        let p = crate::generators::signaling_profile();
        assert_eq!(correlated_utilities(&g, &p).unwrap().0, q(19, 3));

        let g6 = gen_example(Example::WeakSignaling6x4);
        let p6 = crate::generators::weak_signaling_profile();
        assert_eq!(correlated_utilities(&g6, &p6).unwrap().0, q(2, 1));

        let point = CorrelatedProfile::<Rational>::uniform_over(5, 4, &[(4, 3)]).unwrap();
        assert_eq!(correlated_utilities(&g, &point).unwrap().0, q(1, 1));
    }

    #[test]
    fn conditional_sis_on_weak_signaling_profile() {
        let g = gen_example(Example::WeakSignaling6x4);
        let p = crate::generators::weak_signaling_profile();
        for col in 0..3 {
            assert_eq!(
                conditional_sis_given_column(&p, g.partition(), col),
                Some(vec![q(2, 3), q(1, 3)])
            );
        }
        assert_eq!(conditional_sis_given_column(&p, g.partition(), 3), None);
    }

    #[test]
    fn sis_mass_examples() {
        let uniform = vec![q(1, 4); 4];
        let rr = SisPartition::round_robin(4, 2).unwrap();
        assert_eq!(sis_mass(&uniform, &rr), vec![q(1, 2), q(1, 2)]);
        let point: Vec<Rational> = unit(3, 0);
        assert_eq!(sis_mass(&point, &SisPartition::singletons(3)), vec![q(1, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn invalid_profiles_are_rejected() {
        assert!(MixedProfile::new(vec![q(1, 2), q(1, 3)], vec![q(1, 1)]).is_err());
        assert!(MixedProfile::new(vec![q(3, 2), q(-1, 2)], vec![q(1, 1)]).is_err());
        assert!(MixedProfile::<Rational>::new(vec![], vec![q(1, 1)]).is_err());
        let g = gen_example(Example::Commitment4x2);
        let wrong = MixedProfile::new(vec![q(1, 1)], vec![q(1, 1)]).unwrap();
        assert!(matches!(expected_utilities(&g, &wrong), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn float_profiles_are_renormalized() {
        let p = MixedProfile::new(vec![0.5 + 4e-10, 0.5, -1e-10], vec![1.0]).unwrap();
        assert_eq!(p.sigma1()[2], 0.0);
        assert!((p.sigma1().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(MixedProfile::new(vec![0.5, 0.49], vec![1.0]).is_err());
    }

    #[test]
    fn embedding_examples() {
        let shapley_uniform = MixedProfile::new(vec![q(1, 3); 3], vec![q(1, 3); 3]).unwrap();
        let e = embed_mixed_as_correlated(&shapley_uniform);
        assert!(e.matrix().as_slice().iter().all(|x| *x == q(1, 9)));

        let mixed = MixedProfile::new(
            vec![q(1, 2), q(0, 1), q(0, 1), q(1, 2)],
            vec![q(1, 2), q(1, 2)],
        )
        .unwrap();
        let e = embed_mixed_as_correlated(&mixed);
        let atoms = e.matrix().as_slice().iter().filter(|x| **x == q(1, 4)).count();
        assert_eq!(atoms, 4);

        let pure = embed_mixed_as_correlated(&MixedProfile::<Rational>::pure(4, 2, 0, 1));
        assert_eq!(pure, CorrelatedProfile::uniform_over(4, 2, &[(0, 1)]).unwrap());
    }
}
