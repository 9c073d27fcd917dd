//! Incremental reduced row echelon form for small dense systems.

use crate::num::{Field, Mode};

/// Outcome of adding an equation to an [`Echelon`].
pub(crate) enum Added<F> {
    /// The equation was independent; here is the enlarged system.
    Independent(Echelon<F>),
    /// The equation is implied by the current system.
    Redundant,
    /// The equation contradicts the current system.
    Inconsistent,
}

/// A set of linearly independent equations `a·x = b` over `dim` unknowns,
/// kept in reduced row echelon form.
#[derive(Debug, Clone)]
pub(crate) struct Echelon<F> {
    dim: usize,
    /// `(pivot column, coefficients ++ [rhs])`, pivot entry normalized to 1.
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    fn reduce(&self, coeffs: &[F], rhs: &F) -> Vec<F> {
        let mut row: Vec<F> = coeffs.to_vec();
        row.push(rhs.clone());
        for (pivot, prow) in &self.rows {
            let factor = row[*pivot].clone();
            if factor.is_zero() {
                row[*pivot] = F::zero();
                continue;
            }
            for (x, p) in row.iter_mut().zip(prow) {
                x.sub_mul_assign(&factor, p);
            }
            row[*pivot] = F::zero();
        }
        row
    }

    pub fn add(&self, coeffs: &[F], rhs: &F) -> Added<F> {
        debug_assert_eq!(coeffs.len(), self.dim);
        let mut row = self.reduce(coeffs, rhs);
        // Largest magnitude pivot keeps float mode stable; exact mode only
        // needs a nonzero entry.
        let pivot = match F::MODE {
            Mode::Exact => row[..self.dim].iter().position(|x| !x.is_zero()),
            Mode::Float => {
                let (idx, best) = row[..self.dim]
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (i, x.to_f64().abs()))
                    .fold((usize::MAX, 0.0_f64), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
                (idx != usize::MAX && best > PIVOT_TOL).then_some(idx)
            }
        };
        let Some(pivot) = pivot else {
            return if row[self.dim].is_zero() { Added::Redundant } else { Added::Inconsistent };
        };
        let scale = row[pivot].clone();
        for x in row.iter_mut() {
            *x = x.over(&scale);
        }
        row[pivot] = F::one();
        let mut rows = Vec::with_capacity(self.rows.len() + 1);
        for (p, prow) in &self.rows {
            let factor = prow[pivot].clone();
            if factor.is_zero() {
                let mut prow = prow.clone();
                prow[pivot] = F::zero();
                rows.push((*p, prow));
                continue;
            }
            let mut updated = prow.clone();
            for (x, r) in updated.iter_mut().zip(&row) {
                x.sub_mul_assign(&factor, r);
            }
            updated[pivot] = F::zero();
            rows.push((*p, updated));
        }
        rows.push((pivot, row));
        Added::Independent(Self { dim: self.dim, rows })
    }

    /// Unique solution of a full-rank system.
    pub fn solution(&self) -> Option<Vec<F>> {
        if !self.is_full() {
            return None;
        }
        let mut x = vec![F::zero(); self.dim];
        for (pivot, row) in &self.rows {
            x[*pivot] = row[self.dim].clone();
        }
        Some(x)
    }
}

/// Float-mode threshold below which a reduced coefficient counts as zero
/// when choosing a pivot.
const PIVOT_TOL: f64 = 1e-9;
