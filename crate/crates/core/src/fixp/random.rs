//! Seeded generators of small random circuits and parameter vectors.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{clamp_outputs, normalize_max_zero, CircuitBuilder, FixpCircuit, GateRef};
use crate::exactmath::{RatVector, Rational};

#[derive(Debug, Clone, Copy)]
pub struct RandomCircuitParams {
    pub k: usize,
    /// Max gates before clamping.
    pub max_gates: usize,
    /// Additional add / scale gates mixed in between max gates.
    pub linear_ops: usize,
    /// Upper bound on `bits(numerator) + bits(denominator)` for constants.
    pub const_bits: u64,
}

impl Default for RandomCircuitParams {
    fn default() -> Self {
        RandomCircuitParams {
            k: 1,
            max_gates: 2,
            linear_ops: 4,
            const_bits: 8,
        }
    }
}

/// A random rational whose bit size stays within `bits`.
pub fn random_constant<R: Rng + ?Sized>(rng: &mut R, bits: u64) -> Rational {
    loop {
        let num = rng.gen_range(-15i64..=15);
        let den = rng.gen_range(1i64..=15);
        let v = Rational::new(num, den);
        if v.bit_size() <= bits {
            return v;
        }
    }
}

/// A random rational in `[lo, hi]` with denominator at most `max_den`.
pub fn random_rational_in<R: Rng + ?Sized>(
    rng: &mut R,
    lo: &Rational,
    hi: &Rational,
    max_den: i64,
) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let t = Rational::new(rng.gen_range(0..=den), den);
    lo + &(&t * &(hi - lo))
}

/// A random parameter vector of dimension `k`; roughly one coordinate in
/// four is drawn from outside `[0, 1]`.
pub fn random_lambda<R: Rng + ?Sized>(rng: &mut R, k: usize) -> RatVector {
    (0..k)
        .map(|_| {
            if rng.gen_bool(0.25) {
                random_rational_in(rng, &Rational::integer(-3), &Rational::integer(4), 12)
            } else {
                random_rational_in(rng, &Rational::zero(), &Rational::one(), 12)
            }
        })
        .collect()
}

/// A random unclamped circuit with exactly `params.max_gates` max gates.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, params: &RandomCircuitParams) -> FixpCircuit {
    let mut b = CircuitBuilder::new(params.k);
    let mut pool: Vec<GateRef> = b.inputs().to_vec();
    let c = b.constant(random_constant(rng, params.const_bits));
    pool.push(c);

    let mut ops: Vec<bool> = std::iter::repeat(true)
        .take(params.max_gates)
        .chain(std::iter::repeat(false).take(params.linear_ops))
        .collect();
    ops.shuffle(rng);
    for is_max in ops {
        let a = *pool.choose(rng).expect("pool is nonempty");
        let g = if is_max {
            let rhs = if rng.gen_bool(0.3) {
                b.constant(random_constant(rng, params.const_bits))
            } else {
                *pool.choose(rng).expect("pool is nonempty")
            };
            b.max(a, rhs)
        } else {
            match rng.gen_range(0..3) {
                0 => {
                    let rhs = *pool.choose(rng).expect("pool is nonempty");
                    b.add(a, rhs)
                }
                1 => b.mulc(random_constant(rng, params.const_bits), a),
                _ => b.add_const(a, random_constant(rng, params.const_bits)),
            }
        };
        pool.push(g);
    }

    // Favor recently created gates as outputs so most of the circuit is live.
    let outputs = (0..params.k)
        .map(|_| {
            let tail = pool.len().min(3);
            pool[pool.len() - 1 - rng.gen_range(0..tail)]
        })
        .collect();
    b.build(outputs).expect("generator emits well-formed circuits")
}

/// A random circuit that has been clamped and max-zero normalized, ready
/// for the LP construction.
pub fn random_reducible_circuit<R: Rng + ?Sized>(
    rng: &mut R,
    params: &RandomCircuitParams,
) -> FixpCircuit {
    let raw = random_circuit(rng, params);
    let clamped = clamp_outputs(&raw).expect("fresh circuit is unclamped");
    normalize_max_zero(&clamped).expect("normalization of a valid circuit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_circuits_have_requested_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let params = RandomCircuitParams {
                k: 2,
                max_gates: 3,
                ..Default::default()
            };
            let c = random_circuit(&mut rng, &params);
            assert_eq!(c.max_gates().len(), 3);
            let r = random_reducible_circuit(&mut rng, &params);
            assert_eq!(r.max_gates().len(), 3 + 4);
            assert!(r.is_normalized() && r.is_clamped());
        }
    }

    #[test]
    fn constants_respect_bit_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert!(random_constant(&mut rng, 8).bit_size() <= 8);
        }
    }
}
