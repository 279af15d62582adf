//! Search for approximate fixed points inside a given unit cube.
//!
//! Points are written `p_t = q_t + 1 - a_t/L - theta_t`, so coordinate `t`
//! of sample `j` leaves cell `q_t` right after `j = a_t`. With
//! `theta_t = 1/(2L)` every sample is well positioned; with
//! `theta_t < 1/L^2` sample `a_t` is poorly positioned. Crossing patterns
//! are ranked by how far their well-positioned increments are from
//! cancelling, then evaluated exactly.

use super::{approx_epsilon, CompileError, CompiledFunction};
use crate::brouwer::increment;
use crate::exactmath::{RatVector, Rational};

/// Exact evaluations tried before giving up.
const EVALUATION_BUDGET: usize = 3000;
/// Offsets tried inside each poor window.
const WINDOW_STEPS: i64 = 16;

struct Pattern {
    score: i64,
    idx: usize,
    pmask: usize,
}

/// Well-positioned increment sum of a crossing pattern. Sample `j` lies in
/// the cell reached after crossing every coordinate `t` with `a_t < j`.
fn well_sum(a: &[usize], pmask: usize, s: usize, colors: &[usize], k: usize) -> Vec<i64> {
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&t| a[t]);
    let mut sum = vec![0i64; k];
    let mut add = |mask: usize, count: i64| {
        for (x, d) in sum.iter_mut().zip(increment(colors[mask], k)) {
            *x += d * count;
        }
    };
    let mut mask = 0usize;
    let mut start = 0usize;
    for &t in &order {
        add(mask, (a[t] + 1 - start) as i64);
        if pmask >> t & 1 == 1 {
            add(mask, -1);
        }
        mask |= 1 << t;
        start = a[t] + 1;
    }
    add(mask, (s - start) as i64);
    sum
}

fn decode(idx: usize, span: usize, k: usize) -> Vec<usize> {
    (0..k).map(|t| 1 + (idx / span.pow(t as u32)) % span).collect()
}

/// Distinct crossing samples, ranked by the distance of the well sum from
/// zero, then by the number of poor samples that must absorb it.
fn patterns(s: usize, k: usize, colors: &[usize]) -> Vec<Pattern> {
    let span = s - 1;
    let total = span.pow(k as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let a = decode(idx, span, k);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() < k {
            continue;
        }
        for pmask in 0..(1usize << k) {
            let n_poor = pmask.count_ones() as i64;
            let sum = well_sum(&a, pmask, s, colors, k);
            let norm = sum.iter().map(|x| x.abs()).max().unwrap_or(0);
            if norm > n_poor {
                continue;
            }
            out.push(Pattern {
                score: 2 * norm + n_poor,
                idx,
                pmask,
            });
        }
    }
    out.sort_by_key(|p| (p.score, p.idx, p.pmask));
    out
}

/// A point of the compiled function's domain within the approximation
/// bound of its image, found inside the cube with lowest corner `cube`, or
/// `None` if the search budget runs out.
pub fn locate_approx_fixed_point(
    cf: &CompiledFunction,
    cube: &[u64],
) -> Result<Option<RatVector>, CompileError> {
    let grid = cf.grid();
    let k = grid.k;
    if cube.len() != k || cube.iter().any(|&c| c >= grid.max_coord()) {
        return Err(CompileError::Domain(format!("{cube:?} is not a cube corner")));
    }
    let colors: Vec<usize> = (0..1usize << k)
        .map(|mask| {
            let v: Vec<u64> = (0..k).map(|t| cube[t] + (mask >> t & 1) as u64).collect();
            cf.source.color(&v)
        })
        .collect::<Result<_, _>>()?;
    let s = cf.params.sample_count;
    let l = cf.params.l_rational();
    let inv_l = l.recip().expect("L > 0");
    let inv_l2 = (&l * &l).recip().expect("L > 0");
    let well_theta = &inv_l / Rational::integer(2);
    let eps = approx_epsilon(cf);

    let mut budget = EVALUATION_BUDGET;
    for pat in patterns(s, k, &colors) {
        let a = decode(pat.idx, s - 1, k);
        let poor_coords: Vec<usize> = (0..k).filter(|&t| pat.pmask >> t & 1 == 1).collect();
        let combos = (WINDOW_STEPS - 1).pow(poor_coords.len() as u32);
        for c in 0..combos {
            if budget == 0 {
                return Ok(None);
            }
            budget -= 1;
            let mut theta = vec![well_theta.clone(); k];
            for (i, &t) in poor_coords.iter().enumerate() {
                let step = 1 + (c / (WINDOW_STEPS - 1).pow(i as u32)) % (WINDOW_STEPS - 1);
                theta[t] = &inv_l2 * Rational::new(step, WINDOW_STEPS);
            }
            let p: Vec<Rational> = (0..k)
                .map(|t| {
                    let grid_coord = Rational::integer(cube[t] as i64 + 1)
                        - Rational::integer(a[t] as i64) * &inv_l
                        - &theta[t];
                    grid_coord / &cf.scale
                })
                .collect();
            let f = cf.circuit.evaluate(&p)?;
            let dist = RatVector::new(p.clone()).sub(&f)?.inf_norm();
            if dist <= eps {
                return Ok(Some(RatVector::new(p)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brouwer::{make_example_coloring, Grid};
    use crate::compiler::{compile, extract_panchromatic_simplex, shrink_range, SamplingParams};

    #[test]
    fn finds_and_extracts_in_2d() {
        let inst = make_example_coloring(Grid::new(2, 2).unwrap()).unwrap();
        let cf = compile(&inst.circuit, SamplingParams::default_for(2)).unwrap();
        let p = locate_approx_fixed_point(&cf, &inst.known_cube)
            .unwrap()
            .expect("candidate in the planted cube");
        let ex = extract_panchromatic_simplex(&p, &cf).unwrap();
        assert_eq!(ex.simplex.len(), 3);

        let sh = shrink_range(&cf).unwrap();
        let p = locate_approx_fixed_point(&sh, &inst.known_cube).unwrap().unwrap();
        assert!(extract_panchromatic_simplex(&p, &sh).is_ok());
    }
}
