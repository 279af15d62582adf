use super::{CircuitMeta, ClampPair, FixpCircuit, FixpError, Gate, GateRef};
use crate::exactmath::Rational;

/// Clamp every output to `[0, 1]` as `max{0, -1*max{-1, -1*tau}}`.
///
/// The constants `-1` and `0` are appended once and shared by all outputs;
/// each output then costs four gates: the negation of `tau`, the inner max,
/// its negation and the outer max.
pub fn clamp_outputs(c: &FixpCircuit) -> Result<FixpCircuit, FixpError> {
    if c.is_clamped() {
        return Err(FixpError::AlreadyClamped);
    }
    let mut gates = c.gates.clone();
    let mut push = |g: Gate| {
        gates.push(g);
        gates.len() - 1
    };
    let minus_one = push(Gate::Const {
        v: Rational::integer(-1),
    });
    let zero = push(Gate::Const { v: Rational::zero() });
    let mut outputs = Vec::with_capacity(c.k);
    let mut pairs = Vec::with_capacity(c.k);
    for &tau in &c.outputs {
        let neg_tau = push(Gate::MulC {
            c: Rational::integer(-1),
            a: tau,
        });
        let inner = push(Gate::Max {
            a: minus_one,
            b: neg_tau,
        });
        let neg_inner = push(Gate::MulC {
            c: Rational::integer(-1),
            a: inner,
        });
        let outer = push(Gate::Max {
            a: zero,
            b: neg_inner,
        });
        outputs.push(outer);
        pairs.push(ClampPair { inner, outer });
    }
    let meta = CircuitMeta {
        max_zero_normalized: false,
        outputs_clamped: true,
        clamp_pairs: pairs,
    };
    FixpCircuit::with_meta(c.k, gates, outputs, meta)
}

/// Rewrite every max gate without a zero-constant operand using
/// `max{a, b} = max{0, b - a} + a`.
///
/// When one operand is a constant it plays the role of `a`. A single shared
/// `Const(0)` is placed at the front of the gate list. Circuits that need no
/// rewriting are returned unchanged apart from the flag.
pub fn normalize_max_zero(c: &FixpCircuit) -> Result<FixpCircuit, FixpError> {
    let needs_rewrite = c.unnormalized_max().is_some();
    if !needs_rewrite {
        let mut meta = c.meta.clone();
        meta.max_zero_normalized = true;
        return FixpCircuit::with_meta(c.k, c.gates.clone(), c.outputs.clone(), meta);
    }

    let mut gates = vec![Gate::Const { v: Rational::zero() }];
    let zero = 0;
    // Value-carrying replacement of each old gate, and the max gate standing
    // in for each old max gate.
    let mut value_of: Vec<GateRef> = Vec::with_capacity(c.gates.len());
    let mut max_of: Vec<Option<GateRef>> = Vec::with_capacity(c.gates.len());
    for (idx, g) in c.gates.iter().enumerate() {
        let mapped = g.remap(|x| value_of[x]);
        let rewrite = match *g {
            Gate::Max { a, b } => !c.is_zero_const(a) && !c.is_zero_const(b),
            _ => false,
        };
        if !rewrite {
            gates.push(mapped);
            let r = gates.len() - 1;
            value_of.push(r);
            max_of.push(g.is_max().then_some(r));
            continue;
        }
        let Gate::Max { a, b } = *g else { unreachable!() };
        let is_const = |x: GateRef| matches!(c.gates[x], Gate::Const { .. });
        let (base, other) = if is_const(a) || !is_const(b) { (a, b) } else { (b, a) };
        let (base, other) = (value_of[base], value_of[other]);
        debug_assert!(base < gates.len() && other < gates.len(), "gate {idx}");
        gates.push(Gate::MulC {
            c: Rational::integer(-1),
            a: base,
        });
        let neg_base = gates.len() - 1;
        gates.push(Gate::Add {
            a: other,
            b: neg_base,
        });
        let diff = gates.len() - 1;
        gates.push(Gate::Max { a: zero, b: diff });
        let m = gates.len() - 1;
        gates.push(Gate::Add { a: m, b: base });
        value_of.push(gates.len() - 1);
        max_of.push(Some(m));
    }

    let outputs = c.outputs.iter().map(|&o| value_of[o]).collect();
    let clamp_pairs = c
        .meta
        .clamp_pairs
        .iter()
        .map(|p| ClampPair {
            inner: max_of[p.inner].expect("clamp inner is a max gate"),
            outer: max_of[p.outer].expect("clamp outer is a max gate"),
        })
        .collect::<Vec<_>>();
    let clamped = c.is_clamped();
    // An outer clamp gate always has a zero operand, so it is never
    // rewritten and still carries the output value.
    if clamped {
        for (l, p) in clamp_pairs.iter().enumerate() {
            if value_of[c.outputs[l]] != p.outer {
                return Err(FixpError::BadClampMeta(format!(
                    "outer clamp gate of output {l} was rewritten"
                )));
            }
        }
    }
    let meta = CircuitMeta {
        max_zero_normalized: true,
        outputs_clamped: clamped,
        clamp_pairs,
    };
    FixpCircuit::with_meta(c.k, gates, outputs, meta)
}

/// Order the max gates: non-clamp gates by ascending index, then the clamp
/// pairs (inner before outer) for outputs 1..k.
pub fn order_max_gates(c: &FixpCircuit) -> Result<Vec<GateRef>, FixpError> {
    if !c.is_clamped() {
        return Err(FixpError::NotClamped);
    }
    if let Some(g) = c.unnormalized_max() {
        return Err(FixpError::NotNormalized(g));
    }
    let clamp: std::collections::HashSet<GateRef> = c
        .meta
        .clamp_pairs
        .iter()
        .flat_map(|p| [p.inner, p.outer])
        .collect();
    let mut order: Vec<GateRef> = c
        .max_gates()
        .into_iter()
        .filter(|g| !clamp.contains(g))
        .collect();
    for p in &c.meta.clamp_pairs {
        order.push(p.inner);
        order.push(p.outer);
    }

    let mut pos = vec![usize::MAX; c.gates.len()];
    for (i, &g) in order.iter().enumerate() {
        pos[g] = i;
    }
    // latest[g]: greatest position among max gates feeding g through
    // non-max gates, or None.
    let mut latest: Vec<Option<(usize, GateRef)>> = vec![None; c.gates.len()];
    for (idx, g) in c.gates.iter().enumerate() {
        let mut best: Option<(usize, GateRef)> = None;
        for op in g.operands() {
            let cand = if c.gates[op].is_max() {
                Some((pos[op], op))
            } else {
                latest[op]
            };
            best = best.max(cand);
        }
        if g.is_max() {
            if let Some((p, src)) = best {
                if p >= pos[idx] {
                    return Err(FixpError::MaxOrder {
                        earlier: idx,
                        later: src,
                    });
                }
            }
        }
        latest[idx] = best;
    }
    Ok(order)
}
