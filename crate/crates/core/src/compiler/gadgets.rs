use crate::brouwer::{BoolCircuit, BoolGate};
use crate::exactmath::Rational;
use crate::fixp::{CircuitBuilder, Fragment, GateRef};

/// Emit the bit-extraction loop on `x`: for `i = n-1` down to `0`,
/// `b_i = min{max{(x - 2^i) L^2 + 1, 0}, 1}` and `x -= 2^i b_i`. Returns
/// `(b_{n-1}, ..., b_0)`.
pub(crate) fn emit_extract_bits(
    b: &mut CircuitBuilder,
    x: GateRef,
    n: usize,
    l: u64,
) -> Vec<GateRef> {
    let l2 = Rational::integer(l as i64) * Rational::integer(l as i64);
    let mut x = x;
    let mut bits = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let p = Rational::pow2(i as u32);
        let scaled = b.mulc(l2.clone(), x);
        let t = b.add_const(scaled, Rational::one() - &p * &l2);
        let bit = b.clamp(t, Rational::zero(), Rational::one());
        let step = b.mulc(-p, bit);
        x = b.add(x, step);
        bits.push(bit);
    }
    bits
}

/// One real input, `n` outputs: the bits of the integer part, most
/// significant first, exact on well-positioned inputs in `[0, 2^n)`.
pub fn extract_bits_gadget(n: usize, l: u64) -> Fragment {
    let mut b = CircuitBuilder::new(1);
    let x = b.input(0);
    let bits = emit_extract_bits(&mut b, x, n, l);
    b.build_fragment(bits)
}

pub(crate) fn emit_simulation(
    b: &mut CircuitBuilder,
    cb: &BoolCircuit,
    inputs: &[GateRef],
) -> Vec<GateRef> {
    let mut map: Vec<GateRef> = Vec::with_capacity(cb.gates().len());
    for g in cb.gates() {
        let r = match *g {
            BoolGate::Input { bit } => inputs[bit],
            BoolGate::Const { v } => b.constant(if v { Rational::one() } else { Rational::zero() }),
            BoolGate::And { a, b: c } => b.min(map[a], map[c]),
            BoolGate::Or { a, b: c } => b.max(map[a], map[c]),
            BoolGate::Not { a } => b.one_minus(map[a]),
        };
        map.push(r);
    }
    cb.outputs().iter().map(|&o| map[o]).collect()
}

/// The Boolean circuit over `[0, 1]` with AND as min, OR as max and NOT as
/// `1 - x`.
pub fn simulate_bool(cb: &BoolCircuit) -> Fragment {
    let mut b = CircuitBuilder::new(cb.grid().input_bits());
    let inputs = b.inputs().to_vec();
    let outs = emit_simulation(&mut b, cb, &inputs);
    b.build_fragment(outs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brouwer::{make_example_coloring, Grid};
    use crate::exactmath::{q, rat};
    use proptest::prelude::*;

    fn bits_of(t: u64, n: usize) -> Vec<Rational> {
        (0..n)
            .rev()
            .map(|j| Rational::integer(((t >> j) & 1) as i64))
            .collect()
    }

    #[test]
    fn extract_bits_examples() {
        let g = extract_bits_gadget(2, 32);
        assert_eq!(g.evaluate(&[Rational::zero()]).unwrap().to_vec(), bits_of(0, 2));
        let g3 = extract_bits_gadget(3, 32);
        assert_eq!(g3.evaluate(&[q("21/4")]).unwrap().to_vec(), bits_of(5, 3));
        let a = Rational::integer(3) - rat(1, 2 * 32 * 32);
        assert_eq!(
            g.evaluate(&[a]).unwrap().to_vec(),
            vec![Rational::one(), rat(1, 2)]
        );
    }

    #[test]
    fn simulation_matches_boolean_evaluation() {
        for (k, n) in [(2, 2), (3, 2)] {
            let grid = Grid::new(k, n).unwrap();
            let cb = make_example_coloring(grid).unwrap().circuit;
            let sim = simulate_bool(&cb);
            for p in grid.points() {
                let bits = grid.encode(&p);
                let real: Vec<Rational> = bits
                    .iter()
                    .map(|&v| if v { Rational::one() } else { Rational::zero() })
                    .collect();
                let got = sim.evaluate(&real).unwrap();
                let want: Vec<Rational> = cb
                    .eval_bits(&bits)
                    .iter()
                    .map(|&v| if v { Rational::one() } else { Rational::zero() })
                    .collect();
                assert_eq!(got.to_vec(), want);
            }
        }
    }

    #[test]
    fn simulated_gates() {
        let grid = Grid::new(1, 2).unwrap();
        let gates = vec![
            BoolGate::Input { bit: 0 },
            BoolGate::Input { bit: 1 },
            BoolGate::And { a: 0, b: 1 },
            BoolGate::Not { a: 0 },
        ];
        let cb = BoolCircuit::new(grid, gates, vec![2, 3]).unwrap();
        let sim = simulate_bool(&cb);
        let one = Rational::one();
        assert_eq!(
            sim.evaluate(&[one.clone(), one.clone()]).unwrap().to_vec(),
            vec![one.clone(), Rational::zero()]
        );
        let out = sim.evaluate(&[rat(1, 3), rat(3, 4)]).unwrap();
        assert_eq!(out.to_vec(), vec![rat(1, 3), rat(2, 3)]);
    }

    proptest! {
        #[test]
        fn extract_bits_outputs_stay_in_unit_interval(num in -5000i64..5000, den in 1i64..400) {
            let g = extract_bits_gadget(3, 32);
            for b in g.evaluate(&[rat(num, den)]).unwrap().iter() {
                prop_assert!(!b.is_negative() && *b <= Rational::one());
            }
        }

        #[test]
        fn simulation_stays_in_unit_interval(xs in proptest::collection::vec(0i64..=12, 4)) {
            let cb = make_example_coloring(Grid::new(2, 2).unwrap()).unwrap().circuit;
            let sim = simulate_bool(&cb);
            let input: Vec<Rational> = xs.iter().map(|&x| rat(x, 12)).collect();
            for v in sim.evaluate(&input).unwrap().iter() {
                prop_assert!(!v.is_negative() && *v <= Rational::one());
            }
        }
    }
}
