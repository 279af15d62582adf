use super::LcpGameError;
use crate::exactmath::{RatMatrix, RatVector};
use crate::lp::ParamLp;

/// The LP with its cost vector folded into the columns:
/// `H_ij = A_ij / c_j` and `H' = H - sum_l u^l v^l^T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedSystem {
    pub h: RatMatrix,
    pub hp: RatMatrix,
    /// Columns `v^l`, each the unit vector at output row `l` scaled by the
    /// reciprocal of its cost.
    pub v: RatMatrix,
    pub b: RatVector,
    pub lp: ParamLp,
}

impl NormalizedSystem {
    pub fn m(&self) -> usize {
        self.lp.m()
    }

    pub fn k(&self) -> usize {
        self.lp.k()
    }

    pub fn output_rows(&self) -> &[usize] {
        self.lp.output_rows()
    }
}

pub fn normalize(lp: &ParamLp) -> Result<NormalizedSystem, LcpGameError> {
    let (m, k) = (lp.m(), lp.k());
    let c = lp.c();
    for (l, &o) in lp.output_rows().iter().enumerate() {
        if !c[o].is_one() {
            return Err(LcpGameError::Property {
                property: "P3",
                detail: format!("cost of output row {o} (output {l}) is {}", c[o]),
            });
        }
    }
    if let Some(j) = (0..m).find(|&j| !c[j].is_positive()) {
        return Err(LcpGameError::Property {
            property: "P3",
            detail: format!("cost {j} is not positive"),
        });
    }
    let mut h = lp.a().clone();
    for j in 0..m {
        let inv = c[j].recip()?;
        for i in 0..m {
            if !h[(i, j)].is_zero() {
                h[(i, j)] *= &inv;
            }
        }
    }
    let mut v = RatMatrix::zeros(m, k);
    let mut hp = h.clone();
    for (l, &o) in lp.output_rows().iter().enumerate() {
        v[(o, l)] = c[o].recip()?;
        let ul = lp.u_col(l);
        let outer = RatMatrix::outer(&ul, &v.col(l));
        hp = hp.sub(&outer)?;
    }
    let ns = NormalizedSystem {
        h,
        hp,
        v,
        b: lp.b().clone(),
        lp: lp.clone(),
    };
    check_p4(&ns)?;
    Ok(ns)
}

/// Column `o` of `H` is the unit vector at `o`, and row `o` of `H'` reads
/// `x_{o-1} / c_{o-1} + x_o` for every output row `o`.
fn check_p4(ns: &NormalizedSystem) -> Result<(), LcpGameError> {
    let m = ns.m();
    let c = ns.lp.c();
    for &o in ns.output_rows() {
        for i in 0..m {
            let want = if i == o { 1 } else { 0 };
            if ns.h[(i, o)] != want {
                return Err(LcpGameError::Property {
                    property: "P4",
                    detail: format!("H[{i}][{o}] = {}", ns.h[(i, o)]),
                });
            }
        }
        if o == 0 {
            return Err(LcpGameError::Property {
                property: "P4",
                detail: "an output row has no inner clamp row before it".into(),
            });
        }
        let inner = c[o - 1].recip()?;
        for j in 0..m {
            let ok = if j == o {
                ns.hp[(o, j)].is_one()
            } else if j + 1 == o {
                ns.hp[(o, j)] == inner
            } else {
                ns.hp[(o, j)].is_zero()
            };
            if !ok {
                return Err(LcpGameError::Property {
                    property: "P4",
                    detail: format!("H'[{o}][{j}] = {}", ns.hp[(o, j)]),
                });
            }
        }
    }
    Ok(())
}

/// `x'_j = x_j c_j`.
pub fn scale_solution(lp: &ParamLp, x: &RatVector) -> Result<RatVector, LcpGameError> {
    if x.dim() != lp.m() {
        return Err(LcpGameError::Precondition(format!(
            "vector of dimension {} for an LP with {} variables",
            x.dim(),
            lp.m()
        )));
    }
    Ok(x.iter().zip(lp.c().iter()).map(|(a, c)| a * c).collect())
}

/// `x_j = x'_j / c_j`.
pub fn unscale_solution(lp: &ParamLp, xp: &RatVector) -> Result<RatVector, LcpGameError> {
    if xp.dim() != lp.m() {
        return Err(LcpGameError::Precondition(format!(
            "vector of dimension {} for an LP with {} variables",
            xp.dim(),
            lp.m()
        )));
    }
    Ok(xp.iter().zip(lp.c().iter()).map(|(a, c)| a / c).collect())
}
