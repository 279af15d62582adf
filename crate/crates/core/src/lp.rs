//! Parameterized LPs extracted from normalized, clamped Linear-FIXP
//! circuits.
//!
//! Max gate `i` (in the order of [`order_max_gates`]) contributes the row
//! `x_i - sum_{j<i} alpha_j x_j >= sum_l gamma_l lambda_l + delta`, where the
//! right-hand side of `x_i >= L_i(x, lambda)` is the gate's nonzero operand.
//! Rows and output indices are 0-based throughout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{MathError, RatMatrix, RatVector, Rational};
use crate::fixp::{order_max_gates, FixpCircuit, FixpError, Gate, GateRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error(transparent)]
    Circuit(#[from] FixpError),
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("constraint matrix must be square lower triangular with unit diagonal")]
    NotUnitLowerTriangular,
    #[error("expected a parameter vector of dimension {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("inconsistent LP dimensions: {0}")]
    Shape(String),
    #[error("structural property {property} fails: {detail}")]
    Property { property: &'static str, detail: String },
}

/// An affine expression over earlier max-gate variables and the parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinExpr {
    pub x: BTreeMap<usize, Rational>,
    pub lambda: Vec<Rational>,
    pub constant: Rational,
}

impl LinExpr {
    fn zero(k: usize) -> Self {
        LinExpr {
            x: BTreeMap::new(),
            lambda: vec![Rational::zero(); k],
            constant: Rational::zero(),
        }
    }

    fn plus(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (j, v) in &other.x {
            let e = out.x.entry(*j).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                out.x.remove(j);
            }
        }
        for (a, b) in out.lambda.iter_mut().zip(&other.lambda) {
            *a += b;
        }
        out.constant += &other.constant;
        out
    }

    fn scaled(&self, c: &Rational) -> LinExpr {
        if c.is_zero() {
            return LinExpr::zero(self.lambda.len());
        }
        LinExpr {
            x: self.x.iter().map(|(j, v)| (*j, v * c)).collect(),
            lambda: self.lambda.iter().map(|v| v * c).collect(),
            constant: &self.constant * c,
        }
    }
}

/// The constraint system `A x >= U lambda + b`, `x >= 0` of a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpConstraints {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub a: RatMatrix,
    pub b: RatVector,
    pub u: RatMatrix,
    pub output_rows: Vec<usize>,
    /// The circuit gate behind each LP variable.
    pub max_gates: Vec<GateRef>,
    /// `L_i` for every row.
    pub rows: Vec<LinExpr>,
}

/// Extract `A`, `b` and `U = [u^1 .. u^k]` from a normalized, clamped circuit.
pub fn build_constraints(c: &FixpCircuit) -> Result<LpConstraints, LpError> {
    let order = order_max_gates(c)?;
    let k = c.k();
    let m = order.len();
    let mut var_of = vec![usize::MAX; c.gates().len()];
    for (i, &g) in order.iter().enumerate() {
        var_of[g] = i;
    }

    let mut exprs: Vec<LinExpr> = Vec::with_capacity(c.gates().len());
    let mut rows: Vec<Option<LinExpr>> = vec![None; m];
    for (idx, g) in c.gates().iter().enumerate() {
        let e = match g {
            Gate::Input { i } => {
                let mut e = LinExpr::zero(k);
                e.lambda[*i] = Rational::one();
                e
            }
            Gate::Const { v } => {
                let mut e = LinExpr::zero(k);
                e.constant = v.clone();
                e
            }
            Gate::Add { a, b } => exprs[*a].plus(&exprs[*b]),
            Gate::MulC { c: coef, a } => exprs[*a].scaled(coef),
            Gate::Max { a, b } => {
                let operand = if c.is_zero_const(*a) { *b } else { *a };
                rows[var_of[idx]] = Some(exprs[operand].clone());
                let mut e = LinExpr::zero(k);
                e.x.insert(var_of[idx], Rational::one());
                e
            }
        };
        exprs.push(e);
    }
    let rows: Vec<LinExpr> = rows
        .into_iter()
        .map(|r| r.expect("every ordered max gate produced a row"))
        .collect();

    let mut a = RatMatrix::identity(m);
    let mut b = RatVector::zeros(m);
    let mut u = RatMatrix::zeros(m, k);
    for (i, row) in rows.iter().enumerate() {
        for (&j, v) in &row.x {
            if j >= i {
                return Err(LpError::Property {
                    property: "triangularity",
                    detail: format!("row {i} depends on variable {j}"),
                });
            }
            a[(i, j)] = -v;
        }
        for l in 0..k {
            u[(i, l)] = row.lambda[l].clone();
        }
        b[i] = row.constant.clone();
    }
    let n = m - 2 * k;
    Ok(LpConstraints {
        m,
        k,
        n,
        a,
        b,
        u,
        output_rows: (0..k).map(|l| n + 2 * l + 1).collect(),
        max_gates: order,
        rows,
    })
}

/// Cost vector `c` and bound vector `beta` for a unit lower-triangular `A`.
pub fn construct_cost(a: &RatMatrix) -> Result<(RatVector, RatVector), LpError> {
    if !a.is_unit_lower_triangular() {
        return Err(LpError::NotUnitLowerTriangular);
    }
    let m = a.rows();
    let mut c = RatVector::zeros(m);
    let mut beta = RatVector::zeros(m);
    for i in (0..m).rev() {
        let s: Rational = (i + 1..m).map(|j| a[(j, i)].abs() * &beta[j]).sum();
        c[i] = &s + &Rational::one();
        beta[i] = &c[i] + &s;
    }
    Ok((c, beta))
}

/// `min c^T x` subject to `A x >= U lambda + b`, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParamLp")]
pub struct ParamLp {
    m: usize,
    k: usize,
    n: usize,
    #[serde(rename = "A")]
    a: RatMatrix,
    b: RatVector,
    #[serde(rename = "U")]
    u: RatMatrix,
    c: RatVector,
    beta: RatVector,
    output_rows: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    max_gates: Vec<GateRef>,
}

#[derive(Deserialize)]
struct RawParamLp {
    m: usize,
    k: usize,
    n: usize,
    #[serde(rename = "A")]
    a: RatMatrix,
    b: RatVector,
    #[serde(rename = "U")]
    u: RatMatrix,
    c: RatVector,
    beta: RatVector,
    output_rows: Vec<usize>,
    #[serde(default)]
    max_gates: Vec<GateRef>,
}

impl TryFrom<RawParamLp> for ParamLp {
    type Error = LpError;
    fn try_from(r: RawParamLp) -> Result<Self, LpError> {
        let lp = ParamLp {
            m: r.m,
            k: r.k,
            n: r.n,
            a: r.a,
            b: r.b,
            u: r.u,
            c: r.c,
            beta: r.beta,
            output_rows: r.output_rows,
            max_gates: r.max_gates,
        };
        lp.check_shapes()?;
        Ok(lp)
    }
}

/// A failed Karush-Kuhn-Tucker condition, by 0-based row or column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", content = "index", rename_all = "snake_case")]
pub enum KktViolation {
    PrimalSign(usize),
    PrimalFeasibility(usize),
    DualSign(usize),
    DualFeasibility(usize),
    /// `y_i (A x - U lambda - b)_i != 0`.
    RowComplementarity(usize),
    /// `x_i (A^T y - c)_i != 0`.
    ColumnComplementarity(usize),
}

impl ParamLp {
    pub fn from_constraints(cons: LpConstraints) -> Result<Self, LpError> {
        let (c, beta) = construct_cost(&cons.a)?;
        let lp = ParamLp {
            m: cons.m,
            k: cons.k,
            n: cons.n,
            a: cons.a,
            b: cons.b,
            u: cons.u,
            c,
            beta,
            output_rows: cons.output_rows,
            max_gates: cons.max_gates,
        };
        lp.check_shapes()?;
        Ok(lp)
    }

    /// Constraints, cost and bound vectors for a normalized, clamped circuit.
    pub fn from_circuit(circuit: &FixpCircuit) -> Result<Self, LpError> {
        Self::from_constraints(build_constraints(circuit)?)
    }

    fn check_shapes(&self) -> Result<(), LpError> {
        let m = self.m;
        let bad = |s: String| Err(LpError::Shape(s));
        if self.a.shape() != (m, m) {
            return bad(format!("A is {:?}, expected {m}x{m}", self.a.shape()));
        }
        if self.u.shape() != (m, self.k) {
            return bad(format!("U is {:?}, expected {m}x{}", self.u.shape(), self.k));
        }
        if self.b.dim() != m || self.c.dim() != m || self.beta.dim() != m {
            return bad("b, c and beta must have dimension m".into());
        }
        if self.n + 2 * self.k != m {
            return bad(format!("n + 2k = {} but m = {m}", self.n + 2 * self.k));
        }
        if self.output_rows.len() != self.k || self.output_rows.iter().any(|&r| r >= m) {
            return bad("output rows must name k rows of A".into());
        }
        if !self.a.is_unit_lower_triangular() {
            return Err(LpError::NotUnitLowerTriangular);
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatVector {
        &self.b
    }

    pub fn u(&self) -> &RatMatrix {
        &self.u
    }

    /// Column `l` of `U`.
    pub fn u_col(&self, l: usize) -> RatVector {
        self.u.col(l)
    }

    pub fn c(&self) -> &RatVector {
        &self.c
    }

    pub fn beta(&self) -> &RatVector {
        &self.beta
    }

    pub fn output_rows(&self) -> &[usize] {
        &self.output_rows
    }

    pub fn max_gates(&self) -> &[GateRef] {
        &self.max_gates
    }

    fn check_arity(&self, lambda: &[Rational]) -> Result<(), LpError> {
        if lambda.len() != self.k {
            return Err(LpError::ArityMismatch {
                expected: self.k,
                got: lambda.len(),
            });
        }
        Ok(())
    }

    /// `U lambda + b`.
    pub fn rhs(&self, lambda: &[Rational]) -> Result<RatVector, LpError> {
        self.check_arity(lambda)?;
        let ul = self.u.mul_vec(&RatVector::new(lambda.to_vec()))?;
        Ok(ul.add(&self.b)?)
    }

    /// The unique optimum, by the recursion `x_i = max{0, L_i}`.
    pub fn solve(&self, lambda: &[Rational]) -> Result<RatVector, LpError> {
        let rhs = self.rhs(lambda)?;
        let mut x = RatVector::zeros(self.m);
        for i in 0..self.m {
            let mut li = rhs[i].clone();
            for j in 0..i {
                if !self.a[(i, j)].is_zero() && !x[j].is_zero() {
                    li -= &self.a[(i, j)] * &x[j];
                }
            }
            x[i] = Rational::max_of(&Rational::zero(), &li);
        }
        Ok(x)
    }

    /// Dual solution built backwards: `y_r = 0` if `x_r = 0`, else
    /// `y_r = c_r - sum_{j>r} a_jr y_j`.
    pub fn construct_dual(&self, x: &RatVector) -> Result<RatVector, LpError> {
        if x.dim() != self.m {
            return Err(LpError::Shape(format!("x has dimension {}", x.dim())));
        }
        let mut y = RatVector::zeros(self.m);
        for r in (0..self.m).rev() {
            if x[r].is_zero() {
                continue;
            }
            let s: Rational = (r + 1..self.m).map(|j| &self.a[(j, r)] * &y[j]).sum();
            y[r] = &self.c[r] - &s;
        }
        Ok(y)
    }

    /// Every failed primal/dual feasibility and complementary slackness
    /// condition; empty iff `(x, y)` is an optimal primal-dual pair.
    pub fn check_kkt(
        &self,
        lambda: &[Rational],
        x: &RatVector,
        y: &RatVector,
    ) -> Result<Vec<KktViolation>, LpError> {
        if x.dim() != self.m || y.dim() != self.m {
            return Err(LpError::Shape("x and y must have dimension m".into()));
        }
        let rhs = self.rhs(lambda)?;
        let slack = self.a.mul_vec(x)?.sub(&rhs)?;
        let reduced = self.a.vec_mul(y)?.sub(&self.c)?;
        let mut out = Vec::new();
        for i in 0..self.m {
            if x[i].is_negative() {
                out.push(KktViolation::PrimalSign(i));
            }
            if slack[i].is_negative() {
                out.push(KktViolation::PrimalFeasibility(i));
            }
            if y[i].is_negative() {
                out.push(KktViolation::DualSign(i));
            }
            if reduced[i].is_positive() {
                out.push(KktViolation::DualFeasibility(i));
            }
            if !(&y[i] * &slack[i]).is_zero() {
                out.push(KktViolation::RowComplementarity(i));
            }
            if !(&x[i] * &reduced[i]).is_zero() {
                out.push(KktViolation::ColumnComplementarity(i));
            }
        }
        Ok(out)
    }

    /// `F^lp(lambda)`: the output rows of the LP optimum.
    pub fn eval_flp(&self, lambda: &[Rational]) -> Result<RatVector, LpError> {
        let x = self.solve(lambda)?;
        Ok(self.output_rows.iter().map(|&r| x[r].clone()).collect())
    }

    /// Check the structural properties of the clamp rows and the cost
    /// vector; returns the first failure.
    pub fn check_properties(&self) -> Result<(), LpError> {
        let fail = |property, detail: String| Err(LpError::Property { property, detail });
        for (l, &o) in self.output_rows.iter().enumerate() {
            if o != self.n + 2 * l + 1 {
                return fail("P1", format!("output {l} sits in row {o}"));
            }
            for j in 0..self.m {
                let want = if j + 1 == o || j == o { 1 } else { 0 };
                if self.a[(o, j)] != want {
                    return fail("P1", format!("row {o} of A has {} at column {j}", self.a[(o, j)]));
                }
            }
            if !self.b[o].is_one() {
                return fail("P1", format!("b[{o}] = {}", self.b[o]));
            }
            if let Some(l2) = (0..self.k).find(|&l2| !self.u[(o, l2)].is_zero()) {
                return fail("P1", format!("u^{l2} is nonzero in row {o}"));
            }
            if let Some(i) = (0..self.m).find(|&i| i != o && !self.a[(i, o)].is_zero()) {
                return fail("P2", format!("column {o} of A is nonzero in row {i}"));
            }
            if !self.c[o].is_one() {
                return fail("P3", format!("c[{o}] = {}", self.c[o]));
            }
        }
        if self.m > 0 && (!self.c[self.m - 1].is_one() || !self.beta[self.m - 1].is_one()) {
            return fail("P3", "last cost and bound entries must be 1".into());
        }
        if let Some(i) = (0..self.m).find(|&i| self.c[i] < 1 || !self.beta[i].is_positive()) {
            return fail("P3", format!("c[{i}] = {} is below 1", self.c[i]));
        }
        Ok(())
    }

    /// Total bit size of `A`, `b`, `U`, `c` and `beta`.
    pub fn bit_size(&self) -> u64 {
        let v = |v: &RatVector| v.iter().map(Rational::bit_size).sum::<u64>();
        self.a.bit_size() + self.u.bit_size() + v(&self.b) + v(&self.c) + v(&self.beta)
    }

    /// The explicit size budget `8 (m + k + 1)^2 size^2` for a circuit of
    /// the given size.
    pub fn size_budget(&self, circuit_size: u64) -> u64 {
        let d = (self.m + self.k + 1) as u64;
        8 * d * d * circuit_size * circuit_size
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::fixp::{clamp_outputs, normalize_max_zero, CircuitBuilder};

    fn one_minus_lp() -> (FixpCircuit, ParamLp) {
        let mut b = CircuitBuilder::new(1);
        let o = b.one_minus(b.input(0));
        let c = normalize_max_zero(&clamp_outputs(&b.build(vec![o]).unwrap()).unwrap()).unwrap();
        let lp = ParamLp::from_circuit(&c).unwrap();
        (c, lp)
    }

    #[test]
    fn worked_constraints() {
        let (_, lp) = one_minus_lp();
        assert_eq!(*lp.a(), RatMatrix::from_int_rows(&[&[1, 0], &[1, 1]]));
        assert_eq!(*lp.b(), RatVector::from_ints(&[0, 1]));
        assert_eq!(lp.u_col(0), RatVector::from_ints(&[1, 0]));
        assert_eq!(*lp.c(), RatVector::from_ints(&[2, 1]));
        assert_eq!(*lp.beta(), RatVector::from_ints(&[3, 1]));
        assert_eq!(lp.output_rows(), &[1]);
        lp.check_properties().unwrap();
    }

    #[test]
    fn cost_construction() {
        let (c, beta) = construct_cost(&RatMatrix::identity(1)).unwrap();
        assert_eq!((c, beta), (RatVector::from_ints(&[1]), RatVector::from_ints(&[1])));
        let a = RatMatrix::from_int_rows(&[&[1, 0, 0], &[2, 1, 0], &[-1, 3, 1]]);
        let (c, beta) = construct_cost(&a).unwrap();
        assert_eq!(c, RatVector::from_ints(&[16, 4, 1]));
        assert_eq!(beta, RatVector::from_ints(&[31, 7, 1]));
        assert!(construct_cost(&RatMatrix::from_int_rows(&[&[2]])).is_err());
    }

    #[test]
    fn worked_solutions_and_dual() {
        let (_, lp) = one_minus_lp();
        assert_eq!(lp.solve(&[rat(3, 4)]).unwrap().to_vec(), vec![rat(3, 4), rat(1, 4)]);
        let half = [rat(1, 2)];
        let x = lp.solve(&half).unwrap();
        assert_eq!(x.to_vec(), vec![rat(1, 2), rat(1, 2)]);
        let y = lp.construct_dual(&x).unwrap();
        assert_eq!(y, RatVector::from_ints(&[1, 1]));
        assert!(lp.check_kkt(&half, &x, &y).unwrap().is_empty());
        assert_eq!(lp.eval_flp(&half).unwrap().to_vec(), vec![rat(1, 2)]);
        let far = lp.eval_flp(&[rat(2, 1)]).unwrap();
        assert!(far[0] >= 0 && far[0] <= 1);
    }

    #[test]
    fn kkt_rejects_perturbations() {
        let (_, lp) = one_minus_lp();
        let lambda = [rat(1, 2)];
        let x = lp.solve(&lambda).unwrap();
        let y = lp.construct_dual(&x).unwrap();
        let mut bumped = x.clone();
        bumped[0] += Rational::one();
        assert!(!lp.check_kkt(&lambda, &bumped, &y).unwrap().is_empty());
        let v = lp.check_kkt(&lambda, &x, &RatVector::zeros(2)).unwrap();
        assert!(v.contains(&KktViolation::ColumnComplementarity(0)));
    }

    #[test]
    fn zero_variables_get_zero_duals() {
        let (_, lp) = one_minus_lp();
        let x = lp.solve(&[rat(-1, 1)]).unwrap();
        assert!(x[0].is_zero());
        assert!(lp.construct_dual(&x).unwrap()[0].is_zero());
    }

    #[test]
    fn json_round_trip() {
        let (_, lp) = one_minus_lp();
        let text = serde_json::to_string(&lp).unwrap();
        assert!(text.contains("\"A\":[[\"1\",\"0\"],[\"1\",\"1\"]]"));
        let back: ParamLp = serde_json::from_str(&text).unwrap();
        assert_eq!(back, lp);
    }
}
