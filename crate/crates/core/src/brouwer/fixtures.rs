use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{require_valid, BoolCircuit, BrouwerError};

/// Every panchromatic unit cube, by lowest corner, and every panchromatic
/// simplex inside one, as a sorted point list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fixtures {
    pub cubes: Vec<Vec<u64>>,
    pub simplices: Vec<Vec<Vec<u64>>>,
}

impl Fixtures {
    pub fn contains_simplex(&self, points: &[Vec<u64>]) -> bool {
        let mut sorted = points.to_vec();
        sorted.sort();
        self.simplices.binary_search(&sorted).is_ok()
    }
}

fn cube_vertices(corner: &[u64]) -> Vec<Vec<u64>> {
    let k = corner.len();
    (0..(1u64 << k))
        .map(|m| (0..k).map(|i| corner[i] + ((m >> i) & 1)).collect())
        .collect()
}

/// Exhaustive scan of a validated circuit.
pub fn brute_force_fixtures(cb: &BoolCircuit) -> Result<Fixtures, BrouwerError> {
    let grid = cb.grid();
    grid.check_exhaustive()?;
    require_valid(cb)?;
    let k = grid.k;
    let per_cube: Vec<(Vec<u64>, Vec<Vec<Vec<u64>>>)> = (0..grid.point_count())
        .into_par_iter()
        .filter_map(|idx| {
            let corner = grid.point(idx);
            if corner.iter().any(|&c| c == grid.max_coord()) {
                return None;
            }
            let mut by_color: Vec<Vec<Vec<u64>>> = vec![vec![]; k + 1];
            for v in cube_vertices(&corner) {
                let c = cb.color(&v).expect("validated circuit");
                by_color[c].push(v);
            }
            if by_color.iter().any(Vec::is_empty) {
                return None;
            }
            let mut simplices: Vec<Vec<Vec<u64>>> = vec![vec![]];
            for choices in &by_color {
                simplices = simplices
                    .into_iter()
                    .flat_map(|s| {
                        choices.iter().map(move |v| {
                            let mut t = s.clone();
                            t.push(v.clone());
                            t
                        })
                    })
                    .collect();
            }
            for s in simplices.iter_mut() {
                s.sort();
            }
            Some((corner, simplices))
        })
        .collect();
    let mut simplices = BTreeSet::new();
    let mut cubes = Vec::with_capacity(per_cube.len());
    for (corner, s) in per_cube {
        cubes.push(corner);
        simplices.extend(s);
    }
    Ok(Fixtures {
        cubes,
        simplices: simplices.into_iter().collect(),
    })
}

/// `k + 1` accommodated points carrying all `k + 1` colors.
pub fn is_panchromatic(cb: &BoolCircuit, points: &[Vec<u64>]) -> Result<bool, BrouwerError> {
    let k = cb.grid().k;
    if points.len() != k + 1 {
        return Ok(false);
    }
    for i in 0..k {
        let lo = points.iter().map(|p| p[i]).min().unwrap_or(0);
        let hi = points.iter().map(|p| p[i]).max().unwrap_or(0);
        if hi > lo + 1 {
            return Ok(false);
        }
    }
    let mut seen = vec![false; k + 1];
    for p in points {
        let c = cb.color(p)?;
        if seen[c] {
            return Ok(false);
        }
        seen[c] = true;
    }
    Ok(true)
}
