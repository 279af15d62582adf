use serde::Serialize;

use super::{CompileError, CompiledFunction, SamplingParams};
use crate::brouwer::{increment, is_panchromatic, BoolCircuit};
use crate::exactmath::{RatVector, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Well,
    Poor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositionClass {
    pub coords: Vec<Position>,
}

impl PositionClass {
    pub fn is_well(&self) -> bool {
        self.coords.iter().all(|&c| c == Position::Well)
    }
}

/// `a = t + eps` with `t` an integer and `1 - 1/L^2 < eps < 1`.
pub fn is_poor(a: &Rational, l: u64) -> bool {
    let l = Rational::integer(l as i64);
    let window = Rational::one() - (&l * &l).recip().expect("L > 0");
    a.fract_part() > window
}

pub fn classify_position(p: &[Rational], l: u64) -> PositionClass {
    PositionClass {
        coords: p
            .iter()
            .map(|a| if is_poor(a, l) { Position::Poor } else { Position::Well })
            .collect(),
    }
}

/// `p^j = p + (j - 1)/L (1, ..., 1)` for `j = 1..=sample_count`.
pub fn sample_points(p: &[Rational], params: &SamplingParams) -> Vec<RatVector> {
    let inv_l = params.l_rational().recip().expect("L > 0");
    (0..params.sample_count)
        .map(|j| {
            let off = Rational::integer(j as i64) * &inv_l;
            p.iter().map(|c| c + &off).collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub point: RatVector,
    pub position: PositionClass,
    /// `pi(p^j)`, the componentwise largest grid integer below the sample.
    pub cell: Vec<u64>,
    /// Color of `cell`, for well-positioned samples.
    pub color: Option<usize>,
    pub increment: RatVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplexExtraction {
    pub samples: Vec<Sample>,
    pub poor_count: usize,
    pub increment_sum: RatVector,
    /// Sorted cells of the well-positioned samples.
    pub simplex: Vec<Vec<u64>>,
}

impl SimplexExtraction {
    /// The strict form of the sampling condition: increments cancel exactly.
    pub fn increments_cancel(&self) -> bool {
        self.increment_sum.is_zero()
    }
}

fn cell_of(p: &RatVector, max: u64) -> Result<Vec<u64>, CompileError> {
    p.iter()
        .map(|c| {
            let f = c.floor();
            if f < 0.into() {
                return Err(CompileError::Domain(format!("negative coordinate {c}")));
            }
            let f: u64 = f.try_into().unwrap_or(u64::MAX);
            Ok(f.min(max))
        })
        .collect()
}

/// The set `{pi(p^j) | p^j well positioned}` for the samples around the
/// grid-scale point `p`, given the increment `r^j` of every sample. Well
/// samples must carry `e^{g(pi(p^j))}`; poor ones any vector of norm at most
/// 1. Fails unless `||sum r^j|| < 1` and the set is panchromatic.
pub fn simplex_from_samples(
    cb: &BoolCircuit,
    params: &SamplingParams,
    p: &RatVector,
    increments: &[RatVector],
) -> Result<SimplexExtraction, CompileError> {
    let grid = cb.grid();
    let k = grid.k;
    if p.dim() != k || increments.len() != params.sample_count {
        return Err(CompileError::Domain(format!(
            "point of dimension {} with {} increments",
            p.dim(),
            increments.len()
        )));
    }
    let one = Rational::one();
    let mut samples = Vec::with_capacity(params.sample_count);
    let mut poor_count = 0;
    let mut sum = RatVector::zeros(k);
    for (point, r) in sample_points(p, params).into_iter().zip(increments) {
        let position = classify_position(&point, params.l);
        let cell = cell_of(&point, grid.max_coord())?;
        let color = if position.is_well() {
            let c = cb.color(&cell)?;
            let zeta: RatVector = increment(c, k).into_iter().map(Rational::integer).collect();
            if *r != zeta {
                return Err(CompileError::LemmaFalsified(format!(
                    "well-positioned sample {point} has increment {r}, expected {zeta}"
                )));
            }
            Some(c)
        } else {
            poor_count += 1;
            if r.inf_norm() > one {
                return Err(CompileError::LemmaFalsified(format!(
                    "poorly positioned sample {point} has increment {r} of norm above 1"
                )));
            }
            None
        };
        sum = sum.add(r)?;
        samples.push(Sample {
            point,
            position,
            cell,
            color,
            increment: r.clone(),
        });
    }
    if poor_count > k {
        return Err(CompileError::SamplingBound { poor: poor_count, k });
    }
    if sum.inf_norm() >= one {
        return Err(CompileError::NotPanchromatic(format!(
            "sum of sampled increments {sum} has norm at least 1"
        )));
    }
    let mut simplex: Vec<Vec<u64>> = samples
        .iter()
        .filter(|s| s.color.is_some())
        .map(|s| s.cell.clone())
        .collect();
    simplex.sort();
    simplex.dedup();
    if !is_panchromatic(cb, &simplex)? {
        return Err(CompileError::NotPanchromatic(format!(
            "well-positioned cells {simplex:?} are not panchromatic"
        )));
    }
    Ok(SimplexExtraction {
        samples,
        poor_count,
        increment_sum: sum,
        simplex,
    })
}

fn check_domain(cf: &CompiledFunction, p: &[Rational]) -> Result<(), CompileError> {
    let top = cf.domain_max();
    if p.len() != cf.grid().k || p.iter().any(|c| c.is_negative() || *c > top) {
        return Err(CompileError::Domain(format!(
            "point of dimension {} outside [0, {top}]^{}",
            p.len(),
            cf.grid().k
        )));
    }
    Ok(())
}

/// `||p - F(p)||_inf <= eps`, exactly.
pub fn check_approx_fixed_point(
    cf: &CompiledFunction,
    p: &[Rational],
    eps: &Rational,
) -> Result<bool, CompileError> {
    check_domain(cf, p)?;
    let f = cf.circuit.evaluate(p)?;
    let d = RatVector::new(p.to_vec()).sub(&f)?;
    Ok(d.inf_norm() <= *eps)
}

/// `1/L` in grid units, divided by the range scale for shrunk functions.
pub fn approx_epsilon(cf: &CompiledFunction) -> Rational {
    (cf.params.l_rational() * &cf.scale).recip().expect("positive")
}

/// Panchromatic simplex around an approximate fixed point of `cf`.
pub fn extract_panchromatic_simplex(
    p: &[Rational],
    cf: &CompiledFunction,
) -> Result<SimplexExtraction, CompileError> {
    check_domain(cf, p)?;
    let eps = approx_epsilon(cf);
    let eval = cf.circuit.evaluate_trace(p)?;
    let dist = RatVector::new(p.to_vec()).sub(&eval.outputs)?.inf_norm();
    if dist > eps {
        return Err(CompileError::NotApproxFixedPoint { distance: dist, eps });
    }
    let increments: Vec<RatVector> = cf
        .increments
        .iter()
        .map(|r| r.iter().map(|&g| eval.trace[g].clone()).collect())
        .collect();
    let grid_point: RatVector = p.iter().map(|c| c * &cf.scale).collect();
    simplex_from_samples(&cf.source, &cf.params, &grid_point, &increments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brouwer::{make_example_coloring, Grid};
    use crate::compiler::compile;
    use crate::exactmath::rat;

    #[test]
    fn positions() {
        let l = 32;
        assert!(classify_position(&[rat(1, 2), rat(1, 2)], l).is_well());
        let a = Rational::integer(2) - rat(1, 3 * 32 * 32);
        assert!(is_poor(&a, l));
        assert!(!is_poor(&Rational::integer(2), l));
        let edge = Rational::integer(2) - rat(1, 32 * 32);
        assert!(!is_poor(&edge, l));
    }

    #[test]
    fn grid_points_fail_the_precondition() {
        let inst = make_example_coloring(Grid::new(2, 2).unwrap()).unwrap();
        let cf = compile(&inst.circuit, SamplingParams::default_for(2)).unwrap();
        let eps = approx_epsilon(&cf);
        let p: Vec<Rational> = inst.known_cube.iter().map(|&c| Rational::integer(c as i64)).collect();
        assert!(!check_approx_fixed_point(&cf, &p, &eps).unwrap());
        assert!(matches!(
            extract_panchromatic_simplex(&p, &cf),
            Err(CompileError::NotApproxFixedPoint { .. })
        ));
    }

    #[test]
    fn one_colored_samples_are_not_panchromatic() {
        let inst = make_example_coloring(Grid::new(2, 2).unwrap()).unwrap();
        let params = SamplingParams::default_for(2);
        let p = RatVector::new(vec![rat(1, 8), rat(1, 8)]);
        let incs: Vec<RatVector> = (0..16).map(|_| RatVector::from_ints(&[0, 1])).collect();
        assert!(matches!(
            simplex_from_samples(&inst.circuit, &params, &p, &incs),
            Err(CompileError::NotPanchromatic(_))
        ));
    }
}
