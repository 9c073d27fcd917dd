//! Linear programming in exact or float arithmetic.
//!
//! [`LinearProgram::solve`] runs a dense two-phase simplex with Bland's
//! pivoting rule, so results are deterministic and the exact mode always
//! terminates. Every optimal outcome carries dual values that can be
//! re-checked against the program with [`LinearProgram::check_certificate`].

mod simplex;
mod vertex;

use std::fmt;

pub use vertex::{enumerate_vertices, Polytope};
pub(crate) use vertex::{same_point, vertices_of_bounded};

use crate::error::{Error, Result};
use crate::num::{rational_from_f64, Field, Mode, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub relation: Relation,
    pub rhs: F,
}

impl<F: Field> Constraint<F> {
    /// `rhs - coeffs·x`
    pub fn slack(&self, x: &[F]) -> F {
        self.rhs.minus(&F::dot(&self.coeffs, x))
    }

    pub fn is_satisfied(&self, x: &[F]) -> bool {
        let s = self.slack(x);
        match self.relation {
            Relation::Le => !s.is_negative(),
            Relation::Ge => !s.is_positive(),
            Relation::Eq => s.is_zero(),
        }
    }
}

/// `optimize objective·x` subject to linear constraints and per-variable
/// bounds `lower_j <= x_j <= upper_j` (lower defaults to 0, upper to none).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<F> {
    sense: Sense,
    objective: Vec<F>,
    constraints: Vec<Constraint<F>>,
    lower: Vec<F>,
    upper: Vec<Option<F>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// An optimal basic solution.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<F> {
    pub value: F,
    pub x: Vec<F>,
    /// Basic columns of the internal standard form, sorted.
    pub basis: Vec<usize>,
    /// One multiplier per constraint, for the maximization form of the
    /// program (the objective is negated for `Minimize`).
    pub duals: Vec<F>,
    /// Multipliers of the finite upper bounds (zero where there is none).
    pub upper_duals: Vec<F>,
}

impl LpSolution<Rational> {
    fn map<G>(&self, f: impl Fn(&Rational) -> G) -> LpSolution<G> {
        LpSolution {
            value: f(&self.value),
            x: self.x.iter().map(&f).collect(),
            basis: self.basis.clone(),
            duals: self.duals.iter().map(&f).collect(),
            upper_duals: self.upper_duals.iter().map(&f).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<F> {
    Optimal(LpSolution<F>),
    Infeasible,
    Unbounded,
}

impl<F> LpOutcome<F> {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn optimal(self) -> Option<LpSolution<F>> {
        match self {
            LpOutcome::Optimal(sol) => Some(sol),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateError(pub String);

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "optimality certificate rejected: {}", self.0)
    }
}

impl std::error::Error for CertificateError {}

impl<F: Field> LinearProgram<F> {
    pub fn new(sense: Sense, objective: Vec<F>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            lower: vec![F::zero(); n],
            upper: vec![None; n],
        }
    }

    pub fn maximize(objective: Vec<F>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn minimize(objective: Vec<F>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[F] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<F>] {
        &self.constraints
    }

    pub fn lower_bounds(&self) -> &[F] {
        &self.lower
    }

    pub fn upper_bounds(&self) -> &[Option<F>] {
        &self.upper
    }

    pub fn add_constraint(&mut self, coeffs: Vec<F>, relation: Relation, rhs: F) -> Result<&mut Self> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "constraint has {} coefficients for {} variables",
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(self)
    }

    /// Panicking variant for internally built programs whose shape is
    /// correct by construction.
    pub(crate) fn push(&mut self, coeffs: Vec<F>, relation: Relation, rhs: F) {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn set_bounds(&mut self, var: usize, lower: F, upper: Option<F>) -> Result<&mut Self> {
        if var >= self.num_vars() {
            return Err(Error::DimensionMismatch(format!("no variable {var}")));
        }
        self.lower[var] = lower;
        self.upper[var] = upper;
        Ok(self)
    }

    /// In float mode an optimum whose certificate does not check out is
    /// recomputed exactly from the same data.
    pub fn solve(&self) -> LpOutcome<F> {
        let outcome = simplex::solve(self);
        if F::MODE == Mode::Float {
            if let LpOutcome::Optimal(sol) = &outcome {
                if self.check_certificate(sol).is_err() {
                    if let Some(exact) = self.to_exact() {
                        return match simplex::solve(&exact) {
                            LpOutcome::Optimal(sol) => LpOutcome::Optimal(sol.map(F::from_rational)),
                            LpOutcome::Infeasible => LpOutcome::Infeasible,
                            LpOutcome::Unbounded => LpOutcome::Unbounded,
                        };
                    }
                }
            }
        }
        outcome
    }

    /// The same program over exact rationals; `None` if an entry is not
    /// finite.
    fn to_exact(&self) -> Option<LinearProgram<Rational>> {
        let exact = |x: &F| match x.to_scalar() {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(f) => rational_from_f64(f).ok(),
        };
        let all = |v: &[F]| v.iter().map(exact).collect::<Option<Vec<_>>>();
        Some(LinearProgram {
            sense: self.sense,
            objective: all(&self.objective)?,
            constraints: self
                .constraints
                .iter()
                .map(|c| Some(Constraint { coeffs: all(&c.coeffs)?, relation: c.relation, rhs: exact(&c.rhs)? }))
                .collect::<Option<_>>()?,
            lower: all(&self.lower)?,
            upper: self.upper.iter().map(|u| u.as_ref().map_or(Some(None), |u| exact(u).map(Some))).collect::<Option<_>>()?,
        })
    }

    pub fn objective_value(&self, x: &[F]) -> F {
        F::dot(&self.objective, x)
    }

    pub fn is_feasible(&self, x: &[F]) -> bool {
        x.len() == self.num_vars()
            && self.constraints.iter().all(|c| c.is_satisfied(x))
            && x.iter().zip(&self.lower).all(|(v, l)| v.geq(l))
            && x.iter().zip(&self.upper).all(|(v, u)| u.as_ref().is_none_or(|u| u.geq(v)))
    }

    /// Verifies primal feasibility, dual feasibility and complementary
    /// slackness of `sol`, which together certify optimality.
    pub fn check_certificate(&self, sol: &LpSolution<F>) -> Result<(), CertificateError> {
        let fail = |msg: String| Err(CertificateError(msg));
        let n = self.num_vars();
        if sol.x.len() != n || sol.duals.len() != self.constraints.len() || sol.upper_duals.len() != n {
            return fail("certificate has the wrong shape".into());
        }
        if !self.objective_value(&sol.x).approx_eq(&sol.value) {
            return fail(format!("value {} differs from objective·x", sol.value));
        }
        let sign = match self.sense {
            Sense::Maximize => F::one(),
            Sense::Minimize => F::one().negated(),
        };
        let mut reduced: Vec<F> = self.objective.iter().map(|c| c.times(&sign)).collect();
        for (i, (con, y)) in self.constraints.iter().zip(&sol.duals).enumerate() {
            let s = con.slack(&sol.x);
            let (primal_ok, dual_ok) = match con.relation {
                Relation::Le => (!s.is_negative(), !y.is_negative()),
                Relation::Ge => (!s.is_positive(), !y.is_positive()),
                Relation::Eq => (s.is_zero(), true),
            };
            if !primal_ok {
                return fail(format!("constraint {i} violated (slack {s})"));
            }
            if !dual_ok {
                return fail(format!("dual {i} = {y} has the wrong sign"));
            }
            if !y.times(&s).is_zero() {
                return fail(format!("complementary slackness fails on constraint {i}"));
            }
            for (d, a) in reduced.iter_mut().zip(&con.coeffs) {
                d.sub_mul_assign(y, a);
            }
        }
        for (j, (x, w)) in sol.x.iter().zip(&sol.upper_duals).enumerate() {
            if !x.geq(&self.lower[j]) {
                return fail(format!("x{j} below its lower bound"));
            }
            match &self.upper[j] {
                Some(u) => {
                    if !u.geq(x) {
                        return fail(format!("x{j} above its upper bound"));
                    }
                    if w.is_negative() || !w.times(&u.minus(x)).is_zero() {
                        return fail(format!("upper-bound multiplier of x{j} is inconsistent"));
                    }
                }
                None if !w.is_zero() => {
                    return fail(format!("x{j} has no upper bound but a nonzero multiplier"));
                }
                None => {}
            }
            let d = reduced[j].minus(w);
            if d.is_positive() {
                return fail(format!("reduced cost of x{j} is {d} > 0"));
            }
            if !d.times(&x.minus(&self.lower[j])).is_zero() {
                return fail(format!("complementary slackness fails on x{j}"));
            }
        }
        Ok(())
    }

    /// Converts the program into another numeric mode.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> LinearProgram<G> {
        LinearProgram {
            sense: self.sense,
            objective: self.objective.iter().map(&f).collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint {
                    coeffs: c.coeffs.iter().map(&f).collect(),
                    relation: c.relation,
                    rhs: f(&c.rhs),
                })
                .collect(),
            lower: self.lower.iter().map(&f).collect(),
            upper: self.upper.iter().map(|u| u.as_ref().map(&f)).collect(),
        }
    }
}

/// `solve_lp`: the numeric mode is the program's field type.
pub fn solve_lp<F: Field>(lp: &LinearProgram<F>) -> LpOutcome<F> {
    lp.solve()
}
