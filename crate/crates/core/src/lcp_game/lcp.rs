use serde::{Deserialize, Serialize};

use super::{LcpGameError, NormalizedSystem};
use crate::exactmath::{RatMatrix, RatVector, Rational};
use crate::lp::ParamLp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LcpKind {
    /// `z = (x, y)` with `M = [[0, H^T], [-H', 0]]` and `q = (1, -b)`.
    LcpC,
    /// `z = x` with `M = -A'` and `q = -b`.
    Direct,
    Generic,
}

/// The problem `M z <= q`, `z >= 0`, `z_i (M z - q)_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcpInstance {
    #[serde(rename = "M")]
    pub m: RatMatrix,
    pub q: RatVector,
    #[serde(rename = "form")]
    pub kind: LcpKind,
    /// Positions in `z` whose values are the fixed-point coordinates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub output_rows: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", content = "index", rename_all = "snake_case")]
pub enum LcpViolation {
    Sign(usize),
    Feasibility(usize),
    Complementarity(usize),
}

impl LcpInstance {
    pub fn generic(m: RatMatrix, q: RatVector) -> Result<Self, LcpGameError> {
        if !m.is_square() || m.rows() != q.dim() {
            return Err(LcpGameError::Precondition(format!(
                "LCP matrix {:?} with vector of dimension {}",
                m.shape(),
                q.dim()
            )));
        }
        Ok(LcpInstance {
            m,
            q,
            kind: LcpKind::Generic,
            output_rows: vec![],
        })
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// Every failed sign, feasibility or complementarity condition.
    pub fn check(&self, z: &RatVector) -> Result<Vec<LcpViolation>, LcpGameError> {
        if z.dim() != self.dim() {
            return Err(LcpGameError::Precondition(format!(
                "vector of dimension {} for an LCP of dimension {}",
                z.dim(),
                self.dim()
            )));
        }
        let w = self.m.mul_vec(z)?.sub(&self.q)?;
        let mut out = Vec::new();
        for i in 0..self.dim() {
            if z[i].is_negative() {
                out.push(LcpViolation::Sign(i));
            }
            if w[i].is_positive() {
                out.push(LcpViolation::Feasibility(i));
            }
            if !(&z[i] * &w[i]).is_zero() {
                out.push(LcpViolation::Complementarity(i));
            }
        }
        Ok(out)
    }

    pub fn is_solution(&self, z: &RatVector) -> Result<bool, LcpGameError> {
        Ok(self.check(z)?.is_empty())
    }

    /// Fixed-point coordinates read off a solution.
    pub fn extract_lambda(&self, z: &RatVector) -> RatVector {
        self.output_rows.iter().map(|&r| z[r].clone()).collect()
    }
}

pub fn build_lcp_c(ns: &NormalizedSystem) -> Result<LcpInstance, LcpGameError> {
    let m = ns.m();
    let zero = RatMatrix::zeros(m, m);
    let ht = ns.h.transpose();
    let neg_hp = ns.hp.neg();
    let mat = RatMatrix::from_blocks(&[vec![&zero, &ht], vec![&neg_hp, &zero]])?;
    let mut q = RatVector::filled(m, Rational::one()).into_inner();
    q.extend(ns.b.iter().map(|v| -v));
    Ok(LcpInstance {
        m: mat,
        q: RatVector::new(q),
        kind: LcpKind::LcpC,
        output_rows: ns.output_rows().to_vec(),
    })
}

/// `A' = A - sum_l u^l e_{o_l}^T`, the constraint matrix with each
/// parameter replaced by its output variable.
pub(crate) fn a_prime(lp: &ParamLp) -> Result<RatMatrix, LcpGameError> {
    let mut ap = lp.a().clone();
    for (l, &o) in lp.output_rows().iter().enumerate() {
        let v = RatVector::unit(lp.m(), o);
        ap = ap.sub(&RatMatrix::outer(&lp.u_col(l), &v))?;
    }
    Ok(ap)
}

pub fn build_direct_lcp(lp: &ParamLp) -> Result<LcpInstance, LcpGameError> {
    let ap = a_prime(lp)?;
    Ok(LcpInstance {
        m: ap.neg(),
        q: lp.b().iter().map(|v| -v).collect(),
        kind: LcpKind::Direct,
        output_rows: lp.output_rows().to_vec(),
    })
}

/// Evidence that a nonzero `z` does not solve `M z <= q`, `z >= 0`,
/// `z^T (M z - q) = 0` for the `LCP_C` matrix and a positive `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", content = "index", rename_all = "snake_case")]
pub enum SemimonotoneViolation {
    /// `(M z)_i > q_i`.
    Feasibility(usize),
    /// `z_i > 0` while `(M z)_i < q_i`.
    Complementarity(usize),
}

pub fn semimonotone_witness(
    ns: &NormalizedSystem,
    z: &RatVector,
    q: &RatVector,
) -> Result<SemimonotoneViolation, LcpGameError> {
    let lcp = build_lcp_c(ns)?;
    let n = lcp.dim();
    if z.dim() != n || q.dim() != n {
        return Err(LcpGameError::Precondition(format!(
            "z and q must have dimension {n}"
        )));
    }
    if !z.is_nonnegative() || z.is_zero() {
        return Err(LcpGameError::Precondition("z must be nonnegative and nonzero".into()));
    }
    if q.iter().any(|v| !v.is_positive()) {
        return Err(LcpGameError::Precondition("q must be strictly positive".into()));
    }
    let mz = lcp.m.mul_vec(z)?;
    if let Some(i) = (0..n).find(|&i| mz[i] > q[i]) {
        return Ok(SemimonotoneViolation::Feasibility(i));
    }
    if let Some(i) = (0..n).find(|&i| z[i].is_positive() && mz[i] < q[i]) {
        return Ok(SemimonotoneViolation::Complementarity(i));
    }
    Err(LcpGameError::LemmaFalsified(format!(
        "nonzero z = {z} solves the LCP_C system with q = {q}"
    )))
}
