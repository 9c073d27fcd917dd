//! Games, SIS partitions and payoff matrices.

use std::fmt;

use crate::error::{Error, Result};
use crate::num::{Field, Rational};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { rows: nrows, cols: ncols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

/// Partition of the rows into subsets of indistinguishable strategies.
///
/// Canonical form: each cell sorted, cells ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SisPartition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl SisPartition {
    pub fn new(cells: Vec<Vec<usize>>, num_rows: usize) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; num_rows];
        let mut cells: Vec<Vec<usize>> = cells
            .into_iter()
            .map(|mut cell| {
                cell.sort_unstable();
                cell
            })
            .collect();
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::PartitionInvalid("empty cell".into()));
            }
        }
        cells.sort_by_key(|cell| cell[0]);
        for (k, cell) in cells.iter().enumerate() {
            for &r in cell {
                if r >= num_rows {
                    return Err(Error::PartitionInvalid(format!(
                        "row {r} out of range for {num_rows} rows"
                    )));
                }
                if cell_of[r] != usize::MAX {
                    return Err(Error::PartitionInvalid(format!("row {r} appears twice")));
                }
                cell_of[r] = k;
            }
        }
        if let Some(r) = cell_of.iter().position(|&k| k == usize::MAX) {
            return Err(Error::PartitionInvalid(format!("row {r} is not assigned to any cell")));
        }
        Ok(Self { cells, cell_of })
    }

    /// Every row distinguishable (full commitment).
    pub fn singletons(num_rows: usize) -> Self {
        Self {
            cells: (0..num_rows).map(|r| vec![r]).collect(),
            cell_of: (0..num_rows).collect(),
        }
    }

    /// All rows indistinguishable (no commitment).
    pub fn one_cell(num_rows: usize) -> Self {
        Self { cells: vec![(0..num_rows).collect()], cell_of: vec![0; num_rows] }
    }

    /// Cell `k` holds the rows `i` with `i mod count == k`.
    pub fn round_robin(num_rows: usize, count: usize) -> Result<Self> {
        if count == 0 || count > num_rows {
            return Err(Error::InvalidParams(format!(
                "SIS count {count} must lie in [1, {num_rows}]"
            )));
        }
        let cells = (0..count).map(|k| (k..num_rows).step_by(count).collect()).collect();
        Self::new(cells, num_rows)
    }

    pub fn num_rows(&self) -> usize {
        self.cell_of.len()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, row: usize) -> usize {
        self.cell_of[row]
    }

    pub fn cell_containing(&self, row: usize) -> &[usize] {
        &self.cells[self.cell_of[row]]
    }

    /// True iff every cell of `self` lies inside some cell of `coarse`.
    pub fn is_refinement_of(&self, coarse: &SisPartition) -> Result<bool> {
        if self.num_rows() != coarse.num_rows() {
            return Err(Error::UniverseMismatch(self.num_rows(), coarse.num_rows()));
        }
        Ok(self.cells.iter().all(|cell| {
            let target = coarse.cell_of(cell[0]);
            cell.iter().all(|&r| coarse.cell_of(r) == target)
        }))
    }

    /// Unordered pairs of distinct rows sharing a cell.
    pub fn same_cell_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells.iter().flat_map(|cell| {
            cell.iter()
                .enumerate()
                .flat_map(move |(i, &a)| cell[i + 1..].iter().map(move |&b| (a, b)))
        })
    }
}

impl fmt::Display for SisPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, cell) in self.cells.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str("{")?;
            for (i, r) in cell.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{r}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// `is_refinement(fine, coarse)`.
pub fn is_refinement(fine: &SisPartition, coarse: &SisPartition) -> Result<bool> {
    fine.is_refinement_of(coarse)
}

/// Unvalidated game description, as read from a file.
#[derive(Debug, Clone, Default)]
pub struct RawGame {
    pub u1: Vec<Vec<Rational>>,
    pub u2: Vec<Vec<Rational>>,
    pub partition: Vec<Vec<usize>>,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
}

/// Two-player normal-form game whose row player's strategies are
/// partitioned into SISes. Payoffs are always stored exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    u1: Matrix<Rational>,
    u2: Matrix<Rational>,
    partition: SisPartition,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

/// Payoff matrices converted into a numeric mode.
#[derive(Debug, Clone)]
pub struct Payoffs<F> {
    pub u1: Matrix<F>,
    pub u2: Matrix<F>,
}

impl<F: Field> Payoffs<F> {
    pub fn rows(&self) -> usize {
        self.u1.rows()
    }

    pub fn cols(&self) -> usize {
        self.u1.cols()
    }
}

pub fn validate_game(raw: RawGame) -> Result<Game> {
    if raw.u1.is_empty() || raw.u1[0].is_empty() {
        return Err(Error::EmptyGame);
    }
    let u1 = Matrix::from_rows(raw.u1)?;
    let u2 = Matrix::from_rows(raw.u2)?;
    if u1.rows() != u2.rows() || u1.cols() != u2.cols() {
        return Err(Error::DimensionMismatch(format!(
            "u1 is {}x{} but u2 is {}x{}",
            u1.rows(),
            u1.cols(),
            u2.rows(),
            u2.cols()
        )));
    }
    let partition = SisPartition::new(raw.partition, u1.rows())?;
    check_labels(raw.row_labels.as_deref(), u1.rows(), "row")?;
    check_labels(raw.col_labels.as_deref(), u1.cols(), "column")?;
    Ok(Game { u1, u2, partition, row_labels: raw.row_labels, col_labels: raw.col_labels })
}

fn check_labels(labels: Option<&[String]>, expected: usize, what: &str) -> Result<()> {
    match labels {
        Some(l) if l.len() != expected => Err(Error::DimensionMismatch(format!(
            "{} {what} labels for {expected} {what}s",
            l.len()
        ))),
        _ => Ok(()),
    }
}

impl Game {
    pub fn new(u1: Vec<Vec<Rational>>, u2: Vec<Vec<Rational>>, partition: Vec<Vec<usize>>) -> Result<Self> {
        validate_game(RawGame { u1, u2, partition, row_labels: None, col_labels: None })
    }

    /// Convenience constructor from integer payoffs.
    pub fn from_ints(u1: &[&[i64]], u2: &[&[i64]], partition: Vec<Vec<usize>>) -> Result<Self> {
        let conv = |m: &[&[i64]]| -> Vec<Vec<Rational>> {
            m.iter().map(|row| row.iter().map(|&v| Rational::from_int(v)).collect()).collect()
        };
        Self::new(conv(u1), conv(u2), partition)
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self> {
        check_labels(Some(&rows), self.num_rows(), "row")?;
        check_labels(Some(&cols), self.num_cols(), "column")?;
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        Ok(self)
    }

    /// Same payoffs, different partition.
    pub fn with_partition(&self, partition: SisPartition) -> Result<Self> {
        if partition.num_rows() != self.num_rows() {
            return Err(Error::UniverseMismatch(partition.num_rows(), self.num_rows()));
        }
        Ok(Self { partition, ..self.clone() })
    }

    pub fn num_rows(&self) -> usize {
        self.u1.rows()
    }

    pub fn num_cols(&self) -> usize {
        self.u1.cols()
    }

    pub fn u1(&self) -> &Matrix<Rational> {
        &self.u1
    }

    pub fn u2(&self) -> &Matrix<Rational> {
        &self.u2
    }

    pub fn partition(&self) -> &SisPartition {
        &self.partition
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn row_name(&self, r: usize) -> String {
        self.row_labels.as_ref().map_or_else(|| r.to_string(), |l| l[r].clone())
    }

    pub fn col_name(&self, c: usize) -> String {
        self.col_labels.as_ref().map_or_else(|| c.to_string(), |l| l[c].clone())
    }

    pub fn payoffs<F: Field>(&self) -> Payoffs<F> {
        Payoffs { u1: self.u1.map(F::from_rational), u2: self.u2.map(F::from_rational) }
    }

    pub fn to_raw(&self) -> RawGame {
        RawGame {
            u1: self.u1.to_rows(),
            u2: self.u2.to_rows(),
            partition: self.partition.cells().to_vec(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }
}
