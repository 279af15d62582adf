//! Discrete Brouwer instances: grids, Boolean mapping circuits, colorings
//! and brute-force search for panchromatic cubes and simplices.
//!
//! Colors are `0..=k`; coordinate indices in the boundary rule are 1-based,
//! so `g(p) = max{i | p_i = 0}` names coordinate `i` as color `i`.

mod coloring;
mod fixtures;

pub use coloring::{
    coloring_circuit, make_example_coloring, planted_coloring, random_planted_coloring,
    BrouwerInstance,
};
pub use fixtures::{brute_force_fixtures, is_panchromatic, Fixtures};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `k * n` accepted by the exhaustive scans.
pub const EXHAUSTIVE_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrouwerError {
    #[error("grid needs k >= 1 and 1 <= n <= 32, got k = {k}, n = {n}")]
    BadGrid { k: usize, n: usize },
    #[error("grid has {bits} input bits, above the exhaustive limit {cap}")]
    GridTooLarge { bits: usize, cap: usize },
    #[error("point {point:?} is outside the grid")]
    OutOfGrid { point: Vec<u64> },
    #[error("the step from {point:?} leaves the grid")]
    StepLeavesGrid { point: Vec<u64> },
    #[error("output bits {bits:?} match no case")]
    IllegalPattern { bits: Vec<bool> },
    #[error("gate {gate} refers to gate {target}, which does not precede it")]
    ForwardRef { gate: usize, target: usize },
    #[error("gate {gate} reads input bit {bit} of {bits}")]
    BadInput { gate: usize, bit: usize, bits: usize },
    #[error("expected {expected} outputs, got {got}")]
    OutputCount { expected: usize, got: usize },
    #[error("output {index} refers to missing gate {target}")]
    BadOutput { index: usize, target: usize },
    #[error("circuit is not a valid Brouwer-mapping circuit ({count} violating points)")]
    Invalid { count: usize },
    #[error("point {point:?} is not an interior point")]
    NotInterior { point: Vec<u64> },
    #[error("color {color} is out of range for k = {k}")]
    BadColor { color: usize, k: usize },
}

/// `{0, ..., 2^n - 1}^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub k: usize,
    pub n: usize,
}

impl Grid {
    pub fn new(k: usize, n: usize) -> Result<Self, BrouwerError> {
        if k == 0 || n == 0 || n > 32 {
            return Err(BrouwerError::BadGrid { k, n });
        }
        Ok(Grid { k, n })
    }

    /// `2^n - 1`.
    pub fn max_coord(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn input_bits(&self) -> usize {
        self.k * self.n
    }

    pub fn contains(&self, p: &[u64]) -> bool {
        p.len() == self.k && p.iter().all(|&c| c <= self.max_coord())
    }

    pub fn check(&self, p: &[u64]) -> Result<(), BrouwerError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(BrouwerError::OutOfGrid { point: p.to_vec() })
        }
    }

    pub fn is_boundary(&self, p: &[u64]) -> bool {
        p.iter().any(|&c| c == 0 || c == self.max_coord())
    }

    /// The color forced on a boundary point, or `None` for interior points.
    pub fn boundary_color(&self, p: &[u64]) -> Option<usize> {
        if !self.is_boundary(p) {
            return None;
        }
        Some((0..self.k).rev().find(|&i| p[i] == 0).map_or(0, |i| i + 1))
    }

    /// Fail unless the exhaustive scans can cover this grid.
    pub fn check_exhaustive(&self) -> Result<(), BrouwerError> {
        if self.input_bits() > EXHAUSTIVE_BITS {
            return Err(BrouwerError::GridTooLarge {
                bits: self.input_bits(),
                cap: EXHAUSTIVE_BITS,
            });
        }
        Ok(())
    }

    pub fn point_count(&self) -> u64 {
        1u64 << self.input_bits()
    }

    /// The point whose bit encoding, read as one binary number, is `index`.
    pub fn point(&self, index: u64) -> Vec<u64> {
        let mask = self.max_coord();
        (0..self.k)
            .map(|c| (index >> ((self.k - 1 - c) * self.n)) & mask)
            .collect()
    }

    /// Every grid point in increasing encoding order.
    pub fn points(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.point_count()).map(move |i| self.point(i))
    }

    /// Bits of `p`, coordinate 1 first, each coordinate most significant bit
    /// first.
    pub fn encode(&self, p: &[u64]) -> Vec<bool> {
        p.iter()
            .flat_map(|&c| (0..self.n).rev().map(move |j| (c >> j) & 1 == 1))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum BoolGate {
    Input { bit: usize },
    Const { v: bool },
    And { a: usize, b: usize },
    Or { a: usize, b: usize },
    Not { a: usize },
}

impl BoolGate {
    pub fn operands(&self) -> Vec<usize> {
        match *self {
            BoolGate::Input { .. } | BoolGate::Const { .. } => vec![],
            BoolGate::And { a, b } | BoolGate::Or { a, b } => vec![a, b],
            BoolGate::Not { a } => vec![a],
        }
    }
}

/// A circuit with `k * n` input bits and outputs
/// `(D+_1, D-_1, ..., D+_k, D-_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBoolCircuit", into = "RawBoolCircuit")]
pub struct BoolCircuit {
    grid: Grid,
    gates: Vec<BoolGate>,
    outputs: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawBoolCircuit {
    k: usize,
    n: usize,
    gates: Vec<BoolGate>,
    outputs: Vec<usize>,
}

impl TryFrom<RawBoolCircuit> for BoolCircuit {
    type Error = BrouwerError;
    fn try_from(r: RawBoolCircuit) -> Result<Self, BrouwerError> {
        BoolCircuit::new(Grid::new(r.k, r.n)?, r.gates, r.outputs)
    }
}

impl From<BoolCircuit> for RawBoolCircuit {
    fn from(c: BoolCircuit) -> Self {
        RawBoolCircuit {
            k: c.grid.k,
            n: c.grid.n,
            gates: c.gates,
            outputs: c.outputs,
        }
    }
}

impl BoolCircuit {
    pub fn new(grid: Grid, gates: Vec<BoolGate>, outputs: Vec<usize>) -> Result<Self, BrouwerError> {
        let bits = grid.input_bits();
        for (idx, g) in gates.iter().enumerate() {
            if let BoolGate::Input { bit } = *g {
                if bit >= bits {
                    return Err(BrouwerError::BadInput { gate: idx, bit, bits });
                }
            }
            if let Some(&target) = g.operands().iter().find(|&&t| t >= idx) {
                return Err(BrouwerError::ForwardRef { gate: idx, target });
            }
        }
        if outputs.len() != 2 * grid.k {
            return Err(BrouwerError::OutputCount {
                expected: 2 * grid.k,
                got: outputs.len(),
            });
        }
        if let Some((index, &target)) = outputs.iter().enumerate().find(|(_, &o)| o >= gates.len())
        {
            return Err(BrouwerError::BadOutput { index, target });
        }
        Ok(BoolCircuit {
            grid,
            gates,
            outputs,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn gates(&self) -> &[BoolGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Inputs plus outputs plus gates.
    pub fn size(&self) -> u64 {
        (self.grid.input_bits() + self.outputs.len() + self.gates.len()) as u64
    }

    /// Output bits at an already encoded input.
    pub fn eval_bits(&self, input: &[bool]) -> Vec<bool> {
        let mut vals: Vec<bool> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                BoolGate::Input { bit } => input[bit],
                BoolGate::Const { v } => v,
                BoolGate::And { a, b } => vals[a] && vals[b],
                BoolGate::Or { a, b } => vals[a] || vals[b],
                BoolGate::Not { a } => !vals[a],
            };
            vals.push(v);
        }
        self.outputs.iter().map(|&o| vals[o]).collect()
    }

    pub fn eval(&self, p: &[u64]) -> Result<Vec<bool>, BrouwerError> {
        self.grid.check(p)?;
        Ok(self.eval_bits(&self.grid.encode(p)))
    }

    pub fn color(&self, p: &[u64]) -> Result<usize, BrouwerError> {
        decode_case(&self.eval(p)?)
    }

    /// `H(p) = p + e^{g(p)}`; an error if the step leaves the grid.
    pub fn discrete_map(&self, p: &[u64]) -> Result<Vec<u64>, BrouwerError> {
        let inc = increment(self.color(p)?, self.grid.k);
        let q: Vec<i64> = p.iter().zip(&inc).map(|(&c, &d)| c as i64 + d).collect();
        if q.iter().any(|&c| c < 0 || c as u64 > self.grid.max_coord()) {
            return Err(BrouwerError::StepLeavesGrid { point: p.to_vec() });
        }
        Ok(q.into_iter().map(|c| c as u64).collect())
    }
}

/// Color of a `2k`-bit output pattern.
pub fn decode_case(bits: &[bool]) -> Result<usize, BrouwerError> {
    let illegal = || BrouwerError::IllegalPattern {
        bits: bits.to_vec(),
    };
    if bits.is_empty() || bits.len() % 2 != 0 {
        return Err(illegal());
    }
    let k = bits.len() / 2;
    if (0..k).all(|i| !bits[2 * i] && bits[2 * i + 1]) {
        return Ok(0);
    }
    let set: Vec<usize> = (0..2 * k).filter(|&b| bits[b]).collect();
    match set.as_slice() {
        [b] if b % 2 == 0 => Ok(b / 2 + 1),
        _ => Err(illegal()),
    }
}

/// The output pattern of a color.
pub fn encode_case(color: usize, k: usize) -> Vec<bool> {
    (0..2 * k)
        .map(|b| {
            if color == 0 {
                b % 2 == 1
            } else {
                b == 2 * (color - 1)
            }
        })
        .collect()
}

/// `e^0 = (-1, ..., -1)` and `e^i` the unit vector at coordinate `i`.
pub fn increment(color: usize, k: usize) -> Vec<i64> {
    (0..k)
        .map(|i| match color {
            0 => -1,
            c if c == i + 1 => 1,
            _ => 0,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ViolationReason {
    IllegalPattern { bits: Vec<bool> },
    BoundaryRule { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointViolation {
    pub point: Vec<u64>,
    #[serde(flatten)]
    pub reason: ViolationReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub grid: Grid,
    pub points_checked: u64,
    pub violations: Vec<PointViolation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of the case condition at every point and the boundary
/// rule on the boundary.
pub fn validate_circuit(cb: &BoolCircuit) -> Result<ValidityReport, BrouwerError> {
    let grid = cb.grid();
    grid.check_exhaustive()?;
    let violations: Vec<PointViolation> = (0..grid.point_count())
        .into_par_iter()
        .filter_map(|idx| {
            let p = grid.point(idx);
            let bits = cb.eval_bits(&grid.encode(&p));
            let reason = match (decode_case(&bits), grid.boundary_color(&p)) {
                (Err(_), _) => ViolationReason::IllegalPattern { bits },
                (Ok(got), Some(expected)) if got != expected => {
                    ViolationReason::BoundaryRule { expected, got }
                }
                _ => return None,
            };
            Some(PointViolation { point: p, reason })
        })
        .collect();
    Ok(ValidityReport {
        grid,
        points_checked: grid.point_count(),
        violations,
    })
}

/// Validate and return an error summarizing any violation.
pub fn require_valid(cb: &BoolCircuit) -> Result<(), BrouwerError> {
    let report = validate_circuit(cb)?;
    if report.is_valid() {
        Ok(())
    } else {
        Err(BrouwerError::Invalid {
            count: report.violations.len(),
        })
    }
}
