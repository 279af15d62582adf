use std::collections::HashMap;

use super::{FixpCircuit, FixpError, Fragment, Gate, GateRef};
use crate::exactmath::Rational;

/// Incremental construction of gate programs. Constants are shared, so
/// asking twice for the same value returns the same gate.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    inputs: Vec<GateRef>,
    gates: Vec<Gate>,
    consts: HashMap<Rational, GateRef>,
}

impl CircuitBuilder {
    /// Start a program whose first `inputs` gates are the inputs in order.
    pub fn new(inputs: usize) -> Self {
        let gates = (0..inputs).map(|i| Gate::Input { i }).collect();
        CircuitBuilder {
            inputs: (0..inputs).collect(),
            gates,
            consts: HashMap::new(),
        }
    }

    pub fn input(&self, i: usize) -> GateRef {
        self.inputs[i]
    }

    pub fn inputs(&self) -> &[GateRef] {
        &self.inputs
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn push(&mut self, g: Gate) -> GateRef {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn constant(&mut self, v: Rational) -> GateRef {
        if let Some(&g) = self.consts.get(&v) {
            return g;
        }
        let g = self.push(Gate::Const { v: v.clone() });
        self.consts.insert(v, g);
        g
    }

    pub fn add(&mut self, a: GateRef, b: GateRef) -> GateRef {
        self.push(Gate::Add { a, b })
    }

    pub fn mulc(&mut self, c: Rational, a: GateRef) -> GateRef {
        self.push(Gate::MulC { c, a })
    }

    pub fn max(&mut self, a: GateRef, b: GateRef) -> GateRef {
        self.push(Gate::Max { a, b })
    }

    pub fn neg(&mut self, a: GateRef) -> GateRef {
        self.mulc(Rational::integer(-1), a)
    }

    pub fn sub(&mut self, a: GateRef, b: GateRef) -> GateRef {
        let nb = self.neg(b);
        self.add(a, nb)
    }

    pub fn add_const(&mut self, a: GateRef, v: Rational) -> GateRef {
        let c = self.constant(v);
        self.add(a, c)
    }

    /// `min{a, b}` as `-max{-a, -b}`.
    pub fn min(&mut self, a: GateRef, b: GateRef) -> GateRef {
        let na = self.neg(a);
        let nb = self.neg(b);
        let m = self.max(na, nb);
        self.neg(m)
    }

    /// `1 - a`.
    pub fn one_minus(&mut self, a: GateRef) -> GateRef {
        let na = self.neg(a);
        self.add_const(na, Rational::one())
    }

    /// `min{max{a, lo}, hi}`.
    pub fn clamp(&mut self, a: GateRef, lo: Rational, hi: Rational) -> GateRef {
        let lo = self.constant(lo);
        let m = self.max(a, lo);
        let hi = self.constant(hi);
        self.min(m, hi)
    }

    /// Sum of several gates as a chain of additions; zero for an empty list.
    pub fn sum(&mut self, terms: &[GateRef]) -> GateRef {
        match terms.split_first() {
            None => self.constant(Rational::zero()),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &t| self.add(acc, t)),
        }
    }

    /// Splice a fragment in, wiring its inputs to `args`. Returns the gates
    /// corresponding to the fragment's outputs.
    pub fn append_fragment(&mut self, frag: &Fragment, args: &[GateRef]) -> Vec<GateRef> {
        assert_eq!(args.len(), frag.inputs, "fragment arity");
        let mut map: Vec<GateRef> = Vec::with_capacity(frag.gates.len());
        for g in &frag.gates {
            let r = match g {
                Gate::Input { i } => args[*i],
                Gate::Const { v } => self.constant(v.clone()),
                other => {
                    let remapped = other.remap(|x| map[x]);
                    self.push(remapped)
                }
            };
            map.push(r);
        }
        frag.outputs.iter().map(|&o| map[o]).collect()
    }

    pub fn build(self, outputs: Vec<GateRef>) -> Result<FixpCircuit, FixpError> {
        FixpCircuit::new(self.inputs.len(), self.gates, outputs)
    }

    pub fn build_fragment(self, outputs: Vec<GateRef>) -> Fragment {
        Fragment {
            inputs: self.inputs.len(),
            gates: self.gates,
            outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn constants_are_shared() {
        let mut b = CircuitBuilder::new(1);
        let c1 = b.constant(rat(1, 2));
        let c2 = b.constant(rat(2, 4));
        assert_eq!(c1, c2);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn min_and_one_minus() {
        let mut b = CircuitBuilder::new(2);
        let (x, y) = (b.input(0), b.input(1));
        let m = b.min(x, y);
        let o = b.one_minus(m);
        let c = b.build(vec![m, o]).unwrap();
        let out = c.evaluate(&[rat(1, 3), rat(3, 4)]).unwrap();
        assert_eq!(out.to_vec(), vec![rat(1, 3), rat(2, 3)]);
    }

    #[test]
    fn fragments_splice() {
        let mut f = CircuitBuilder::new(1);
        let x = f.input(0);
        let d = f.add(x, x);
        let frag = f.build_fragment(vec![d]);

        let mut b = CircuitBuilder::new(2);
        let s = b.add(b.input(0), b.input(1));
        let out = b.append_fragment(&frag, &[s]);
        let c = b.build(vec![out[0], s]).unwrap();
        assert_eq!(c.evaluate(&[rat(1, 2), rat(1, 3)]).unwrap()[0], rat(5, 3));
    }
}
