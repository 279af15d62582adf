//! Small named circuits used as pipeline fixtures.

use super::{CircuitBuilder, FixpCircuit};
use crate::exactmath::Rational;

pub const NAMES: &[&str] = &[
    "one_minus",
    "swap",
    "shift_up",
    "shift_down",
    "max_floor",
    "contraction",
    "rotate",
    "max_pair",
    "expand",
];

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// The unclamped circuit registered under `name`.
pub fn named(name: &str) -> Option<FixpCircuit> {
    let k = match name {
        "swap" | "rotate" | "max_pair" => 2,
        _ if NAMES.contains(&name) => 1,
        _ => return None,
    };
    let mut b = CircuitBuilder::new(k);
    let outputs = match name {
        // 1 - x
        "one_minus" => vec![b.one_minus(b.input(0))],
        // (x2, x1)
        "swap" => {
            let (x1, x2) = (b.input(0), b.input(1));
            let z = b.constant(Rational::zero());
            vec![b.add(x2, z), b.add(x1, z)]
        }
        // x + 1, saturating at the top
        "shift_up" => vec![b.add_const(b.input(0), Rational::one())],
        // -x - 1, saturating at the bottom
        "shift_down" => {
            let n = b.neg(b.input(0));
            vec![b.add_const(n, Rational::integer(-1))]
        }
        // max{1/3, 1 - x}
        "max_floor" => {
            let o = b.one_minus(b.input(0));
            let c = b.constant(r(1, 3));
            vec![b.max(c, o)]
        }
        // x/2 + 1/4
        "contraction" => {
            let h = b.mulc(r(1, 2), b.input(0));
            vec![b.add_const(h, r(1, 4))]
        }
        // (1 - x2, x1)
        "rotate" => {
            let o = b.one_minus(b.input(1));
            let z = b.constant(Rational::zero());
            vec![o, b.add(b.input(0), z)]
        }
        // (max{x1/2, x2}, 1/3)
        "max_pair" => {
            let h = b.mulc(r(1, 2), b.input(0));
            let m = b.max(h, b.input(1));
            vec![m, b.constant(r(1, 3))]
        }
        // 3x - 1
        "expand" => {
            let t = b.mulc(Rational::integer(3), b.input(0));
            vec![b.add_const(t, Rational::integer(-1))]
        }
        _ => unreachable!("name checked above"),
    };
    Some(b.build(outputs).expect("example circuits are well formed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for n in NAMES {
            let c = named(n).unwrap();
            assert_eq!(c.outputs().len(), c.k());
        }
        assert!(named("nope").is_none());
    }
}
