//! Compile a discrete Brouwer instance into a Linear-FIXP circuit whose
//! fixed points sit in panchromatic cubes, and read panchromatic simplices
//! back out of approximate fixed points.

mod gadgets;
mod locate;
mod position;

pub use gadgets::{extract_bits_gadget, simulate_bool};
pub use locate::locate_approx_fixed_point;
pub use position::{
    approx_epsilon, check_approx_fixed_point, classify_position, extract_panchromatic_simplex, is_poor,
    sample_points, simplex_from_samples, Position, PositionClass, Sample, SimplexExtraction,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brouwer::{require_valid, BoolCircuit, BrouwerError, Grid};
use crate::exactmath::{MathError, Rational};
use crate::fixp::{CircuitBuilder, FixpCircuit, FixpError, Fragment, GateRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Brouwer(#[from] BrouwerError),
    #[error(transparent)]
    Circuit(#[from] FixpError),
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("invalid sampling parameters: {0}")]
    BadParams(String),
    #[error("range is already shrunk")]
    AlreadyShrunk,
    #[error("compiled circuit has size {size}, above the budget {budget}")]
    Budget { size: u64, budget: u64 },
    #[error("point outside the domain: {0}")]
    Domain(String),
    #[error("point is at distance {distance} from its image, above {eps}")]
    NotApproxFixedPoint { distance: Rational, eps: Rational },
    #[error("{poor} poorly positioned samples, more than k = {k}")]
    SamplingBound { poor: usize, k: usize },
    #[error("samples do not give a panchromatic simplex: {0}")]
    NotPanchromatic(String),
    #[error("lemma falsified: {0}")]
    LemmaFalsified(String),
}

/// Sample spacing `1/L` and the number of samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingParams {
    #[serde(rename = "L")]
    pub l: u64,
    pub sample_count: usize,
}

impl SamplingParams {
    /// `max(16, k^4)`.
    pub fn sample_count_for(k: usize) -> usize {
        16.max(k.pow(4))
    }

    /// The smallest power of two above `max(16, k^4 + 1)`.
    pub fn default_for(k: usize) -> Self {
        let floor = 16u64.max(k.pow(4) as u64 + 1);
        let mut l = 1u64;
        while l <= floor {
            l *= 2;
        }
        SamplingParams {
            l,
            sample_count: Self::sample_count_for(k),
        }
    }

    /// Check the invariants for a source circuit of dimension `k` and size
    /// `source_size`.
    pub fn validate(&self, k: usize, source_size: u64) -> Result<(), CompileError> {
        let bad = |m: String| Err(CompileError::BadParams(m));
        if !self.l.is_power_of_two() {
            return bad(format!("L = {} is not a power of two", self.l));
        }
        let floor = 16u64.max(k.pow(4) as u64);
        if self.l <= floor {
            return bad(format!("L = {} must exceed {floor}", self.l));
        }
        if self.sample_count != Self::sample_count_for(k) {
            return bad(format!(
                "sample count {} differs from {}",
                self.sample_count,
                Self::sample_count_for(k)
            ));
        }
        let cap = source_size.saturating_mul(source_size).saturating_mul(64);
        if self.l > cap {
            return bad(format!("L = {} exceeds size^2 * 64 = {cap}", self.l));
        }
        Ok(())
    }

    pub fn l_rational(&self) -> Rational {
        Rational::integer(self.l as i64)
    }
}

/// Sidecar document written next to a compiled circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileMeta {
    pub source_grid: Grid,
    #[serde(rename = "L")]
    pub l: u64,
    pub sample_count: usize,
    pub shrunk: bool,
}

/// A compiled function with the gates that hold each sample's increment,
/// indexed `[sample][coordinate]`, and the averaged increment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledFunction {
    pub circuit: FixpCircuit,
    pub source: BoolCircuit,
    pub params: SamplingParams,
    pub shrunk: bool,
    /// Inputs are multiplied by this before reaching the grid-scale circuit.
    pub scale: Rational,
    pub increments: Vec<Vec<GateRef>>,
    pub average: Vec<GateRef>,
}

impl CompiledFunction {
    pub fn grid(&self) -> Grid {
        self.source.grid()
    }

    pub fn meta(&self) -> CompileMeta {
        CompileMeta {
            source_grid: self.grid(),
            l: self.params.l,
            sample_count: self.params.sample_count,
            shrunk: self.shrunk,
        }
    }

    /// Upper end of the domain in each coordinate.
    pub fn domain_max(&self) -> Rational {
        Rational::integer(self.grid().max_coord() as i64) / &self.scale
    }
}

/// Size bound asserted on every compiled circuit: linear in the sample
/// count times (source size plus bit-extraction cost).
pub fn size_budget(cb: &BoolCircuit, params: &SamplingParams) -> u64 {
    let g = cb.grid();
    let (k, n) = (g.k as u64, g.n as u64);
    let l_bits = 64 - params.l.leading_zeros() as u64;
    let per_sample = 8 * cb.size() + 16 * k * n * (n + 4 * l_bits + 8);
    params.sample_count as u64 * per_sample + 64 * k * (n + l_bits + 8)
}

/// Build `F: [0, 2^n - 1]^k -> [0, 2^n - 1]^k` from a valid mapping circuit.
pub fn compile(cb: &BoolCircuit, params: SamplingParams) -> Result<CompiledFunction, CompileError> {
    let grid = cb.grid();
    let k = grid.k;
    params.validate(k, cb.size())?;
    require_valid(cb)?;

    let mut b = CircuitBuilder::new(k);
    let sim = simulate_bool(cb);
    let inv_l = params.l_rational().recip().expect("L > 0");
    let mut increments = Vec::with_capacity(params.sample_count);
    for j in 0..params.sample_count {
        let offset = Rational::integer(j as i64) * &inv_l;
        let mut bits = Vec::with_capacity(grid.input_bits());
        for t in 0..k {
            let pt = if j == 0 {
                b.input(t)
            } else {
                b.add_const(b.input(t), offset.clone())
            };
            bits.extend(gadgets::emit_extract_bits(&mut b, pt, grid.n, params.l));
        }
        let deltas = b.append_fragment(&sim, &bits);
        let r: Vec<GateRef> = (0..k)
            .map(|t| {
                let d = b.sub(deltas[2 * t], deltas[2 * t + 1]);
                b.clamp(d, Rational::integer(-1), Rational::one())
            })
            .collect();
        increments.push(r);
    }
    let inv_s = Rational::new(1, params.sample_count as i64);
    let top = Rational::integer(grid.max_coord() as i64);
    let mut average = Vec::with_capacity(k);
    let mut outputs = Vec::with_capacity(k);
    for t in 0..k {
        let terms: Vec<GateRef> = increments.iter().map(|r| r[t]).collect();
        let total = b.sum(&terms);
        let r = b.mulc(inv_s.clone(), total);
        average.push(r);
        let moved = b.add(b.input(t), r);
        let hi = b.constant(top.clone());
        let capped = b.min(moved, hi);
        let lo = b.constant(Rational::zero());
        outputs.push(b.max(capped, lo));
    }
    let circuit = b.build(outputs)?;
    let budget = size_budget(cb, &params);
    if circuit.size() > budget {
        return Err(CompileError::Budget {
            size: circuit.size(),
            budget,
        });
    }
    Ok(CompiledFunction {
        circuit,
        source: cb.clone(),
        params,
        shrunk: false,
        scale: Rational::one(),
        increments,
        average,
    })
}

/// `F'(lambda) = F((2^n - 1) lambda) / (2^n - 1)` on `[0, 1]^k`.
pub fn shrink_range(cf: &CompiledFunction) -> Result<CompiledFunction, CompileError> {
    if cf.shrunk {
        return Err(CompileError::AlreadyShrunk);
    }
    let k = cf.grid().k;
    let m = Rational::integer(cf.grid().max_coord() as i64);
    let inv_m = m.recip().expect("positive side");
    let inner = &cf.circuit;
    let tracked: Vec<GateRef> = inner
        .outputs()
        .iter()
        .chain(cf.increments.iter().flatten())
        .chain(cf.average.iter())
        .copied()
        .collect();
    let frag = Fragment {
        inputs: k,
        gates: inner.gates().to_vec(),
        outputs: tracked,
    };
    let mut b = CircuitBuilder::new(k);
    let scaled: Vec<GateRef> = (0..k).map(|t| b.mulc(m.clone(), b.input(t))).collect();
    let mapped = b.append_fragment(&frag, &scaled);
    let (outs, rest) = mapped.split_at(k);
    let outputs: Vec<GateRef> = outs.iter().map(|&o| b.mulc(inv_m.clone(), o)).collect();
    let (incs, avg) = rest.split_at(rest.len() - k);
    let increments = incs.chunks(k).map(<[GateRef]>::to_vec).collect();
    Ok(CompiledFunction {
        circuit: b.build(outputs)?,
        source: cf.source.clone(),
        params: cf.params,
        shrunk: true,
        scale: m,
        increments,
        average: avg.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brouwer::make_example_coloring;
    use crate::exactmath::{rat, RatVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fixture_2d() -> CompiledFunction {
        let inst = make_example_coloring(Grid::new(2, 2).unwrap()).unwrap();
        compile(&inst.circuit, SamplingParams::default_for(2)).unwrap()
    }

    fn grid_point(p: &[u64]) -> RatVector {
        p.iter().map(|&c| Rational::integer(c as i64)).collect()
    }

    #[test]
    fn default_params() {
        assert_eq!(SamplingParams::default_for(2), SamplingParams { l: 32, sample_count: 16 });
        assert_eq!(SamplingParams::default_for(3), SamplingParams { l: 128, sample_count: 81 });
        assert!(SamplingParams { l: 16, sample_count: 16 }.validate(2, 100).is_err());
        assert!(SamplingParams { l: 48, sample_count: 16 }.validate(2, 100).is_err());
        assert!(SamplingParams { l: 32, sample_count: 15 }.validate(2, 100).is_err());
        assert!(SamplingParams { l: 1 << 20, sample_count: 16 }.validate(2, 10).is_err());
    }

    #[test]
    fn grid_restriction_2d() {
        let cf = fixture_2d();
        let grid = cf.grid();
        for p in grid.points() {
            let want = cf.source.discrete_map(&p).unwrap();
            assert_eq!(cf.circuit.evaluate(&grid_point(&p)).unwrap(), grid_point(&want));
        }
        assert_eq!(
            cf.circuit.evaluate(&grid_point(&[0, 0])).unwrap(),
            grid_point(&[0, 1])
        );
    }

    #[test]
    fn outputs_stay_in_range() {
        let cf = fixture_2d();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let top = Rational::integer(3);
        for _ in 0..40 {
            let p: RatVector = (0..2).map(|_| rat(rng.gen_range(-200..500), 97)).collect();
            for v in cf.circuit.evaluate(&p).unwrap().iter() {
                assert!(!v.is_negative() && *v <= top);
            }
        }
    }

    #[test]
    fn shrink_is_conjugation() {
        let cf = fixture_2d();
        let sh = shrink_range(&cf).unwrap();
        assert!(matches!(shrink_range(&sh), Err(CompileError::AlreadyShrunk)));
        assert_eq!(sh.scale, Rational::integer(3));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let lam: RatVector = (0..2).map(|_| rat(rng.gen_range(0..=60), 60)).collect();
            let big: RatVector = lam.iter().map(|v| v * &sh.scale).collect();
            let f = cf.circuit.evaluate(&big).unwrap();
            let want: RatVector = f.iter().map(|v| v / &sh.scale).collect();
            assert_eq!(sh.circuit.evaluate(&lam).unwrap(), want);
            let ti = cf.circuit.evaluate_trace(&big).unwrap();
            let ts = sh.circuit.evaluate_trace(&lam).unwrap();
            for (a, b) in cf.increments.iter().flatten().zip(sh.increments.iter().flatten()) {
                assert_eq!(ti.trace[*a], ts.trace[*b]);
            }
        }
    }

    #[test]
    fn size_within_budget() {
        let cf = fixture_2d();
        assert!(cf.circuit.size() <= size_budget(&cf.source, &cf.params));
        assert_eq!(cf.increments.len(), 16);
    }
}
