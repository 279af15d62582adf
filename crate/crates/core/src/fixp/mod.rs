//! Linear-FIXP circuits: DAGs of input, constant, addition,
//! multiplication-by-constant and binary max gates.

mod builder;
pub mod examples;
mod passes;
pub mod random;

pub use builder::CircuitBuilder;
pub use passes::{clamp_outputs, normalize_max_zero, order_max_gates};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{RatVector, Rational};

pub type GateRef = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixpError {
    #[error("expected {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("gate {gate} references gate {target}, which is not earlier in the sequence")]
    ForwardRef { gate: usize, target: usize },
    #[error("gate {gate} reads input {input} but the circuit has {k} inputs")]
    BadInput { gate: usize, input: usize, k: usize },
    #[error("output {index} refers to missing gate {target}")]
    BadOutput { index: usize, target: usize },
    #[error("circuit has {k} inputs but {outputs} outputs")]
    OutputCount { k: usize, outputs: usize },
    #[error("circuit outputs are already clamped")]
    AlreadyClamped,
    #[error("circuit outputs are not clamped")]
    NotClamped,
    #[error("max gate {0} has no zero constant operand")]
    NotNormalized(usize),
    #[error("invalid clamp metadata: {0}")]
    BadClampMeta(String),
    #[error("max-gate ordering violates the DAG: gate {later} must precede gate {earlier}")]
    MaxOrder { earlier: usize, later: usize },
}

/// One gate of a Linear-FIXP circuit. Operands are indices of strictly
/// earlier gates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Gate {
    Input { i: usize },
    Const { v: Rational },
    Add { a: GateRef, b: GateRef },
    #[serde(rename = "mulc")]
    MulC { c: Rational, a: GateRef },
    Max { a: GateRef, b: GateRef },
}

impl Gate {
    pub fn operands(&self) -> Vec<GateRef> {
        match *self {
            Gate::Input { .. } | Gate::Const { .. } => vec![],
            Gate::MulC { a, .. } => vec![a],
            Gate::Add { a, b } | Gate::Max { a, b } => vec![a, b],
        }
    }

    pub fn is_max(&self) -> bool {
        matches!(self, Gate::Max { .. })
    }

    fn remap(&self, f: impl Fn(GateRef) -> GateRef) -> Gate {
        match self {
            Gate::Input { i } => Gate::Input { i: *i },
            Gate::Const { v } => Gate::Const { v: v.clone() },
            Gate::Add { a, b } => Gate::Add { a: f(*a), b: f(*b) },
            Gate::MulC { c, a } => Gate::MulC {
                c: c.clone(),
                a: f(*a),
            },
            Gate::Max { a, b } => Gate::Max { a: f(*a), b: f(*b) },
        }
    }
}

/// An inner/outer max-gate pair realizing `max{0, -1*max{-1, -1*tau}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClampPair {
    pub inner: GateRef,
    pub outer: GateRef,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircuitMeta {
    #[serde(default)]
    pub max_zero_normalized: bool,
    #[serde(default)]
    pub outputs_clamped: bool,
    /// One pair per output when `outputs_clamped` is set.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clamp_pairs: Vec<ClampPair>,
}

impl CircuitMeta {
    fn is_default(&self) -> bool {
        *self == CircuitMeta::default()
    }
}

/// A validated Linear-FIXP circuit with `k` inputs and `k` outputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct FixpCircuit {
    k: usize,
    gates: Vec<Gate>,
    outputs: Vec<GateRef>,
    #[serde(skip_serializing_if = "CircuitMeta::is_default")]
    meta: CircuitMeta,
}

#[derive(Deserialize)]
struct RawCircuit {
    k: usize,
    gates: Vec<Gate>,
    outputs: Vec<GateRef>,
    #[serde(default)]
    meta: CircuitMeta,
}

impl TryFrom<RawCircuit> for FixpCircuit {
    type Error = FixpError;
    fn try_from(raw: RawCircuit) -> Result<Self, FixpError> {
        FixpCircuit::with_meta(raw.k, raw.gates, raw.outputs, raw.meta)
    }
}

/// Gate values from one evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    /// Value of every gate, indexed like the gate list.
    pub trace: Vec<Rational>,
    pub outputs: RatVector,
}

impl FixpCircuit {
    pub fn new(k: usize, gates: Vec<Gate>, outputs: Vec<GateRef>) -> Result<Self, FixpError> {
        Self::with_meta(k, gates, outputs, CircuitMeta::default())
    }

    pub fn with_meta(
        k: usize,
        gates: Vec<Gate>,
        outputs: Vec<GateRef>,
        meta: CircuitMeta,
    ) -> Result<Self, FixpError> {
        if outputs.len() != k {
            return Err(FixpError::OutputCount {
                k,
                outputs: outputs.len(),
            });
        }
        check_gates(k, &gates, &outputs)?;
        let c = FixpCircuit {
            k,
            gates,
            outputs,
            meta,
        };
        c.check_meta()?;
        Ok(c)
    }

    fn check_meta(&self) -> Result<(), FixpError> {
        if self.meta.max_zero_normalized {
            if let Some(i) = self.unnormalized_max() {
                return Err(FixpError::NotNormalized(i));
            }
        }
        if !self.meta.outputs_clamped {
            if !self.meta.clamp_pairs.is_empty() {
                return Err(FixpError::BadClampMeta(
                    "clamp pairs present on an unclamped circuit".into(),
                ));
            }
            return Ok(());
        }
        if self.meta.clamp_pairs.len() != self.k {
            return Err(FixpError::BadClampMeta(format!(
                "{} clamp pairs for {} outputs",
                self.meta.clamp_pairs.len(),
                self.k
            )));
        }
        for (l, pair) in self.meta.clamp_pairs.iter().enumerate() {
            let ok = |g: GateRef| g < self.gates.len() && self.gates[g].is_max();
            if !ok(pair.inner) || !ok(pair.outer) || pair.inner >= pair.outer {
                return Err(FixpError::BadClampMeta(format!(
                    "pair {l} is not an ordered pair of max gates"
                )));
            }
            if self.outputs[l] != pair.outer {
                return Err(FixpError::BadClampMeta(format!(
                    "output {l} is not the outer gate of its clamp pair"
                )));
            }
        }
        Ok(())
    }

    fn unnormalized_max(&self) -> Option<GateRef> {
        (0..self.gates.len()).find(|&i| match self.gates[i] {
            Gate::Max { a, b } => !self.is_zero_const(a) && !self.is_zero_const(b),
            _ => false,
        })
    }

    pub(crate) fn is_zero_const(&self, g: GateRef) -> bool {
        matches!(&self.gates[g], Gate::Const { v } if v.is_zero())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[GateRef] {
        &self.outputs
    }

    pub fn meta(&self) -> &CircuitMeta {
        &self.meta
    }

    pub fn is_normalized(&self) -> bool {
        self.meta.max_zero_normalized
    }

    pub fn is_clamped(&self) -> bool {
        self.meta.outputs_clamped
    }

    pub fn max_gates(&self) -> Vec<GateRef> {
        (0..self.gates.len()).filter(|&i| self.gates[i].is_max()).collect()
    }

    pub fn evaluate_trace(&self, lambda: &[Rational]) -> Result<Evaluation, FixpError> {
        if lambda.len() != self.k {
            return Err(FixpError::ArityMismatch {
                expected: self.k,
                got: lambda.len(),
            });
        }
        let trace = run_gates(&self.gates, lambda);
        let outputs = self.outputs.iter().map(|&o| trace[o].clone()).collect();
        Ok(Evaluation { trace, outputs })
    }

    pub fn evaluate(&self, lambda: &[Rational]) -> Result<RatVector, FixpError> {
        Ok(self.evaluate_trace(lambda)?.outputs)
    }

    /// `k` + number of gates + bit size of every constant and coefficient.
    pub fn size(&self) -> u64 {
        let consts: u64 = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Const { v } => v.bit_size(),
                Gate::MulC { c, .. } => c.bit_size(),
                _ => 0,
            })
            .sum();
        self.k as u64 + self.gates.len() as u64 + consts
    }
}

fn check_gates(k: usize, gates: &[Gate], outputs: &[GateRef]) -> Result<(), FixpError> {
    for (idx, g) in gates.iter().enumerate() {
        if let Gate::Input { i } = g {
            if *i >= k {
                return Err(FixpError::BadInput {
                    gate: idx,
                    input: *i,
                    k,
                });
            }
        }
        if let Some(&target) = g.operands().iter().find(|&&t| t >= idx) {
            return Err(FixpError::ForwardRef { gate: idx, target });
        }
    }
    if let Some((index, &target)) = outputs.iter().enumerate().find(|(_, &o)| o >= gates.len()) {
        return Err(FixpError::BadOutput { index, target });
    }
    Ok(())
}

fn run_gates(gates: &[Gate], inputs: &[Rational]) -> Vec<Rational> {
    let mut vals: Vec<Rational> = Vec::with_capacity(gates.len());
    for g in gates {
        let v = match g {
            Gate::Input { i } => inputs[*i].clone(),
            Gate::Const { v } => v.clone(),
            Gate::Add { a, b } => &vals[*a] + &vals[*b],
            Gate::MulC { c, a } => c * &vals[*a],
            Gate::Max { a, b } => Rational::max_of(&vals[*a], &vals[*b]),
        };
        vals.push(v);
    }
    vals
}

/// A gate program with an arbitrary number of inputs and outputs, used for
/// gadgets that are later spliced into full circuits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub inputs: usize,
    pub gates: Vec<Gate>,
    pub outputs: Vec<GateRef>,
}

impl Fragment {
    pub fn evaluate(&self, inputs: &[Rational]) -> Result<RatVector, FixpError> {
        if inputs.len() != self.inputs {
            return Err(FixpError::ArityMismatch {
                expected: self.inputs,
                got: inputs.len(),
            });
        }
        let trace = run_gates(&self.gates, inputs);
        Ok(self.outputs.iter().map(|&o| trace[o].clone()).collect())
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{q, rat};

    fn identity() -> FixpCircuit {
        FixpCircuit::new(1, vec![Gate::Input { i: 0 }], vec![0]).unwrap()
    }

    #[test]
    fn evaluates_identity() {
        let out = identity().evaluate(&[rat(1, 2)]).unwrap();
        assert_eq!(out, RatVector::new(vec![rat(1, 2)]));
    }

    #[test]
    fn max_with_zero() {
        let c = FixpCircuit::new(
            1,
            vec![
                Gate::Input { i: 0 },
                Gate::Const { v: q("0") },
                Gate::Const { v: q("-1") },
                Gate::Max { a: 1, b: 2 },
            ],
            vec![3],
        )
        .unwrap();
        assert_eq!(c.evaluate(&[rat(7, 1)]).unwrap()[0], Rational::zero());
    }

    #[test]
    fn arity_is_checked() {
        assert_eq!(
            identity().evaluate(&[rat(1, 2), rat(1, 3)]),
            Err(FixpError::ArityMismatch {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn forward_refs_are_rejected() {
        let err = FixpCircuit::new(
            1,
            vec![Gate::Add { a: 0, b: 1 }, Gate::Input { i: 0 }],
            vec![1],
        )
        .unwrap_err();
        assert_eq!(err, FixpError::ForwardRef { gate: 0, target: 0 });
        assert!(FixpCircuit::new(1, vec![Gate::Input { i: 1 }], vec![0]).is_err());
        assert!(FixpCircuit::new(1, vec![Gate::Input { i: 0 }], vec![3]).is_err());
        assert!(FixpCircuit::new(2, vec![Gate::Input { i: 0 }], vec![0]).is_err());
    }

    #[test]
    fn size_counts_inputs_gates_and_constant_bits() {
        assert_eq!(identity().size(), 2);
        let c = FixpCircuit::new(
            1,
            vec![Gate::Input { i: 0 }, Gate::Const { v: rat(1, 2) }],
            vec![1],
        )
        .unwrap();
        // one input, two gates, and 1 bit + 2 bits for the constant
        assert_eq!(c.size(), 1 + 2 + (1 + 2));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"k":1,"gates":[{"op":"input","i":0},{"op":"const","v":"1"},
            {"op":"mulc","c":"-1","a":0},{"op":"add","a":1,"b":2},
            {"op":"max","a":0,"b":3}],"outputs":[4]}"#;
        let c: FixpCircuit = serde_json::from_str(text).unwrap();
        assert_eq!(c.evaluate(&[rat(1, 4)]).unwrap()[0], rat(3, 4));
        let back: FixpCircuit = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"k":1,"gates":[{"op":"add","a":0,"b":0}],"outputs":[0]}"#;
        assert!(serde_json::from_str::<FixpCircuit>(bad).is_err());
    }
}
