use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{BoolCircuit, BoolGate, BrouwerError, Grid};

/// A valid mapping circuit together with one panchromatic simplex known by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrouwerInstance {
    pub circuit: BoolCircuit,
    /// Lowest corner of a cube containing `known_simplex`.
    pub known_cube: Vec<u64>,
    /// `k + 1` points of distinct colors, listed by color.
    pub known_simplex: Vec<Vec<u64>>,
}

struct BoolBuilder {
    gates: Vec<BoolGate>,
}

impl BoolBuilder {
    fn push(&mut self, g: BoolGate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    fn and(&mut self, a: usize, b: usize) -> usize {
        self.push(BoolGate::And { a, b })
    }

    fn or(&mut self, a: usize, b: usize) -> usize {
        self.push(BoolGate::Or { a, b })
    }

    fn not(&mut self, a: usize) -> usize {
        self.push(BoolGate::Not { a })
    }

    fn all(&mut self, terms: &[usize]) -> usize {
        match terms.split_first() {
            None => self.push(BoolGate::Const { v: true }),
            Some((&f, rest)) => rest.iter().fold(f, |acc, &t| self.and(acc, t)),
        }
    }

    fn any(&mut self, terms: &[usize]) -> usize {
        match terms.split_first() {
            None => self.push(BoolGate::Const { v: false }),
            Some((&f, rest)) => rest.iter().fold(f, |acc, &t| self.or(acc, t)),
        }
    }
}

/// The circuit coloring every boundary point by the boundary rule, every
/// listed interior point by its listed color and every other point 0.
pub fn coloring_circuit(
    grid: Grid,
    exceptions: &[(Vec<u64>, usize)],
) -> Result<BoolCircuit, BrouwerError> {
    let k = grid.k;
    for (p, color) in exceptions {
        grid.check(p)?;
        if grid.is_boundary(p) {
            return Err(BrouwerError::NotInterior { point: p.clone() });
        }
        if *color > k {
            return Err(BrouwerError::BadColor { color: *color, k });
        }
    }
    let bits = grid.input_bits();
    let mut b = BoolBuilder {
        gates: (0..bits).map(|bit| BoolGate::Input { bit }).collect(),
    };
    let negs: Vec<usize> = (0..bits).map(|i| b.not(i)).collect();
    let zero: Vec<usize> = (0..k)
        .map(|c| {
            let lits: Vec<usize> = (0..grid.n).map(|j| negs[c * grid.n + j]).collect();
            b.all(&lits)
        })
        .collect();
    let mut minterms: Vec<(usize, usize)> = Vec::new();
    for (p, color) in exceptions {
        let lits: Vec<usize> = grid
            .encode(p)
            .iter()
            .enumerate()
            .map(|(i, &on)| if on { i } else { negs[i] })
            .collect();
        minterms.push((b.all(&lits), *color));
    }

    let any_zero = b.any(&zero);
    let all_minterms: Vec<usize> = minterms.iter().map(|m| m.0).collect();
    let any_exception = b.any(&all_minterms);
    let no_zero = b.not(any_zero);
    let no_exception = b.not(any_exception);
    let excepted_zero: Vec<usize> = minterms.iter().filter(|m| m.1 == 0).map(|m| m.0).collect();
    let excepted_zero = b.any(&excepted_zero);
    let default_zero = b.and(no_zero, no_exception);
    let is_zero = b.or(default_zero, excepted_zero);

    let mut outputs = Vec::with_capacity(2 * k);
    for i in 0..k {
        // Color i + 1 on the boundary: p_i = 0 and no later coordinate is 0.
        let mut lits = vec![zero[i]];
        for &z in &zero[i + 1..] {
            lits.push(b.not(z));
        }
        let by_rule = b.all(&lits);
        let listed: Vec<usize> = minterms
            .iter()
            .filter(|m| m.1 == i + 1)
            .map(|m| m.0)
            .collect();
        let listed = b.any(&listed);
        outputs.push(b.or(by_rule, listed));
        outputs.push(is_zero);
    }
    BoolCircuit::new(grid, b.gates, outputs)
}

fn instance_at(circuit: BoolCircuit, cube: Vec<u64>) -> Result<BrouwerInstance, BrouwerError> {
    let k = cube.len();
    let mut known_simplex: Vec<Option<Vec<u64>>> = vec![None; k + 1];
    for corner in 0..(1u64 << k) {
        let v: Vec<u64> = (0..k).map(|i| cube[i] + ((corner >> i) & 1)).collect();
        let c = circuit.color(&v)?;
        known_simplex[c].get_or_insert(v);
    }
    let known_simplex = known_simplex
        .into_iter()
        .map(|v| v.expect("planted cube is panchromatic"))
        .collect();
    Ok(BrouwerInstance {
        circuit,
        known_cube: cube,
        known_simplex,
    })
}

/// A coloring with a planted chain in the interior cube at `corner`: the
/// vertex reached after stepping along `order[0..=i]` gets color
/// `order[i] + 1`, every other vertex of the cube color 0. `extra` lists
/// further interior exceptions; points inside the cube or repeated are
/// skipped.
pub fn planted_coloring(
    grid: Grid,
    corner: &[u64],
    order: &[usize],
    extra: &[(Vec<u64>, usize)],
) -> Result<BrouwerInstance, BrouwerError> {
    let k = grid.k;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if corner.len() != k || sorted != (0..k).collect::<Vec<_>>() {
        return Err(BrouwerError::BadGrid { k, n: grid.n });
    }
    let in_cube = |p: &[u64]| (0..k).all(|i| p[i] == corner[i] || p[i] == corner[i] + 1);
    let mut point = corner.to_vec();
    let mut exceptions = Vec::with_capacity(k + extra.len());
    for &i in order {
        point[i] += 1;
        exceptions.push((point.clone(), i + 1));
    }
    for (p, c) in extra {
        if !in_cube(p) && !exceptions.iter().any(|(q, _)| q == p) {
            exceptions.push((p.clone(), *c));
        }
    }
    instance_at(coloring_circuit(grid, &exceptions)?, corner.to_vec())
}

/// A deterministic valid coloring. For `n >= 2` the cube at `(1, ..., 1)`
/// holds a planted chain `c, c + e_1, c + e_1 + e_2, ...` colored
/// `0, 1, 2, ...`; for `n = 1` the known cube is the one at the origin.
pub fn make_example_coloring(grid: Grid) -> Result<BrouwerInstance, BrouwerError> {
    let k = grid.k;
    if grid.n >= 2 {
        let order: Vec<usize> = (0..k).collect();
        planted_coloring(grid, &vec![1; k], &order, &[])
    } else {
        instance_at(coloring_circuit(grid, &[])?, vec![0; k])
    }
}

/// A seeded random coloring for `n >= 2`: a planted chain at a random
/// interior cube in a random coordinate order, plus `extra` random interior
/// exceptions elsewhere.
pub fn random_planted_coloring<R: Rng + ?Sized>(
    rng: &mut R,
    grid: Grid,
    extra: usize,
) -> Result<BrouwerInstance, BrouwerError> {
    let k = grid.k;
    if grid.n < 2 {
        return Err(BrouwerError::BadGrid { k, n: grid.n });
    }
    let top = grid.max_coord();
    let corner: Vec<u64> = (0..k).map(|_| rng.gen_range(1..top - 1)).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let extra: Vec<(Vec<u64>, usize)> = (0..extra)
        .map(|_| {
            let p: Vec<u64> = (0..k).map(|_| rng.gen_range(1..top)).collect();
            (p, rng.gen_range(0..=k))
        })
        .collect();
    planted_coloring(grid, &corner, &order, &extra)
}
