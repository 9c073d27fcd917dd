use super::{Constraint, LinearProgram, LpOutcome, Relation};
use crate::error::{Error, Result};
use crate::linalg::{Added, Echelon};
use crate::num::Field;

/// `coeffs·x = rhs` as `(coeffs, rhs)`.
type Hyperplane<F> = (Vec<F>, F);

/// `{x : constraints hold, lower <= x <= upper}`; lower bounds default to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope<F> {
    constraints: Vec<Constraint<F>>,
    lower: Vec<F>,
    upper: Vec<Option<F>>,
}

impl<F: Field> Polytope<F> {
    pub fn new(dim: usize) -> Self {
        Self { constraints: Vec::new(), lower: vec![F::zero(); dim], upper: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn constraints(&self) -> &[Constraint<F>] {
        &self.constraints
    }

    pub fn add_constraint(&mut self, coeffs: Vec<F>, relation: Relation, rhs: F) -> Result<&mut Self> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "constraint has {} coefficients in dimension {}",
                coeffs.len(),
                self.dim()
            )));
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(self)
    }

    pub fn set_bounds(&mut self, var: usize, lower: F, upper: Option<F>) -> Result<&mut Self> {
        if var >= self.dim() {
            return Err(Error::DimensionMismatch(format!("no coordinate {var}")));
        }
        self.lower[var] = lower;
        self.upper[var] = upper;
        Ok(self)
    }

    pub fn contains(&self, x: &[F]) -> bool {
        x.len() == self.dim()
            && self.constraints.iter().all(|c| c.is_satisfied(x))
            && x.iter().zip(&self.lower).all(|(v, l)| v.geq(l))
            && x.iter().zip(&self.upper).all(|(v, u)| u.as_ref().is_none_or(|u| u.geq(v)))
    }

    /// The linear program optimizing `objective` over this polytope.
    pub fn program(&self, objective: Vec<F>, maximize: bool) -> LinearProgram<F> {
        let mut lp = if maximize {
            LinearProgram::maximize(objective)
        } else {
            LinearProgram::minimize(objective)
        };
        lp.constraints = self.constraints.clone();
        lp.lower = self.lower.clone();
        lp.upper = self.upper.clone();
        lp
    }

    /// Every hyperplane that can be tight at a vertex, as `(coeffs, rhs)`.
    fn tight_candidates(&self) -> (Vec<Hyperplane<F>>, Vec<Hyperplane<F>>) {
        let d = self.dim();
        let mut equalities = Vec::new();
        let mut inequalities = Vec::new();
        for c in &self.constraints {
            let target = if c.relation == Relation::Eq { &mut equalities } else { &mut inequalities };
            target.push((c.coeffs.clone(), c.rhs.clone()));
        }
        let unit = |j: usize| -> Vec<F> { (0..d).map(|i| if i == j { F::one() } else { F::zero() }).collect() };
        for j in 0..d {
            inequalities.push((unit(j), self.lower[j].clone()));
            if let Some(u) = &self.upper[j] {
                inequalities.push((unit(j), u.clone()));
            }
        }
        (equalities, inequalities)
    }
}

/// All vertices of a bounded polytope, each reported once, in discovery
/// order. Returns an empty list for an empty polytope.
pub fn enumerate_vertices<F: Field>(poly: &Polytope<F>) -> Result<Vec<Vec<F>>> {
    // Lower bounds are finite, so the polytope is bounded iff every
    // coordinate is bounded above.
    for j in 0..poly.dim() {
        let mut objective = vec![F::zero(); poly.dim()];
        objective[j] = F::one();
        match poly.program(objective, true).solve() {
            LpOutcome::Infeasible => return Ok(Vec::new()),
            LpOutcome::Unbounded => return Err(Error::UnboundedPolytope),
            LpOutcome::Optimal(_) => {}
        }
    }
    Ok(vertices_of_bounded(poly))
}

/// Vertex enumeration without the boundedness check: every subset of
/// tight constraints that pins down a unique point is solved exactly and
/// kept if feasible.
pub(crate) fn vertices_of_bounded<F: Field>(poly: &Polytope<F>) -> Vec<Vec<F>> {
    let d = poly.dim();
    let (equalities, inequalities) = poly.tight_candidates();
    let mut base = Echelon::new(d);
    for (a, b) in &equalities {
        match base.add(a, b) {
            Added::Independent(next) => base = next,
            Added::Redundant => {}
            Added::Inconsistent => return Vec::new(),
        }
    }
    let mut found: Vec<Vec<F>> = Vec::new();
    let mut visit = |x: Vec<F>| {
        if poly.contains(&x) && !found.iter().any(|v| same_point(v, &x)) {
            found.push(x);
        }
    };
    if base.is_full() {
        if let Some(x) = base.solution() {
            visit(x);
        }
        return found;
    }
    search(&base, &inequalities, 0, &mut visit);
    found
}

fn search<F: Field>(
    ech: &Echelon<F>,
    hyperplanes: &[Hyperplane<F>],
    start: usize,
    visit: &mut impl FnMut(Vec<F>),
) {
    let needed = ech.dim() - ech.rank();
    if hyperplanes.len() - start < needed {
        return;
    }
    for i in start..hyperplanes.len() {
        let (a, b) = &hyperplanes[i];
        if let Added::Independent(next) = ech.add(a, b) {
            if next.is_full() {
                if let Some(x) = next.solution() {
                    visit(x);
                }
            } else {
                search(&next, hyperplanes, i + 1, visit);
            }
        }
    }
}

pub(crate) fn same_point<F: Field>(a: &[F], b: &[F]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}
