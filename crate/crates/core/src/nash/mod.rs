//! Exact Nash equilibrium checking and computation for small games.

mod lemke;
mod support;

pub use lemke::lemke_howson;
pub use support::{
    enumerate_ne, enumerate_ne_with, enumerate_symmetric_ne, enumerate_symmetric_ne_with,
    Enumeration, EnumerationOptions, SymmetricCertificate,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{MathError, RatMatrix, RatVector, Rational};
use crate::fixp::{FixpCircuit, FixpError};
use crate::lcp_game::BimatrixGame;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NashError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Circuit(#[from] FixpError),
    #[error("game is {rows}x{cols}, above the enumeration cap {cap}")]
    DimensionTooLarge { rows: usize, cols: usize, cap: usize },
    #[error("profile dimensions ({x}, {y}) do not fit a {rows}x{cols} game")]
    Shape { x: usize, y: usize, rows: usize, cols: usize },
    #[error("label {label} is out of range for a game with {labels} labels")]
    BadLabel { label: usize, labels: usize },
    #[error("complementary pivoting hit a ray after dropping label {label}")]
    Ray { label: usize },
    #[error("solver returned a profile that fails the equilibrium check: {0:?}")]
    NotEquilibrium(Vec<NeViolation>),
}

/// A mixed strategy for each player. For the constructed games the last
/// coordinate of `x` is `s` and the last coordinate of `y` is `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile {
    pub x: RatVector,
    pub y: RatVector,
}

impl Profile {
    pub fn new(x: RatVector, y: RatVector) -> Self {
        Profile { x, y }
    }

    /// Probability of the first player's last strategy.
    pub fn s(&self) -> &Rational {
        self.x.last().expect("nonempty strategy")
    }

    /// Probability of the second player's last strategy.
    pub fn t(&self) -> &Rational {
        self.y.last().expect("nonempty strategy")
    }
}

/// A failed condition of the best-response characterization. Players are
/// numbered 1 and 2, strategies from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum NeViolation {
    /// Negative entries or a sum other than 1.
    NotDistribution { player: u8 },
    /// A pure strategy pays strictly more than the equilibrium payoff.
    Deviation { player: u8, strategy: usize },
    /// A strategy in the support pays strictly less than the payoff.
    Slack { player: u8, strategy: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeReport {
    pub pi1: Rational,
    pub pi2: Rational,
    pub violations: Vec<NeViolation>,
}

impl NeReport {
    pub fn is_equilibrium(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NeCertificate {
    pub profile: Profile,
    pub pi1: Rational,
    pub pi2: Rational,
    pub support_x: Vec<usize>,
    pub support_y: Vec<usize>,
}

fn is_distribution(v: &RatVector) -> bool {
    v.is_nonnegative() && v.sum().is_one()
}

fn best_response_violations(
    player: u8,
    strategy: &RatVector,
    payoffs: &RatVector,
    pi: &Rational,
    out: &mut Vec<NeViolation>,
) {
    for i in 0..payoffs.dim() {
        if payoffs[i] > *pi {
            out.push(NeViolation::Deviation {
                player,
                strategy: i,
            });
        } else if strategy[i].is_positive() && payoffs[i] < *pi {
            out.push(NeViolation::Slack {
                player,
                strategy: i,
            });
        }
    }
}

/// Exact check of `(A y)_i <= pi_1`, `x_i ((A y)_i - pi_1) = 0` and the
/// column-player analogue, with `pi_1 = x^T A y` and `pi_2 = x^T B y`.
pub fn check_ne(game: &BimatrixGame, profile: &Profile) -> Result<NeReport, NashError> {
    let (rows, cols) = (game.rows(), game.cols());
    if profile.x.dim() != rows || profile.y.dim() != cols {
        return Err(NashError::Shape {
            x: profile.x.dim(),
            y: profile.y.dim(),
            rows,
            cols,
        });
    }
    let ay = game.a.mul_vec(&profile.y)?;
    let xb = game.b.vec_mul(&profile.x)?;
    let pi1 = profile.x.dot(&ay)?;
    let pi2 = xb.dot(&profile.y)?;
    let mut violations = Vec::new();
    for (player, v) in [(1u8, &profile.x), (2u8, &profile.y)] {
        if !is_distribution(v) {
            violations.push(NeViolation::NotDistribution { player });
        }
    }
    best_response_violations(1, &profile.x, &ay, &pi1, &mut violations);
    best_response_violations(2, &profile.y, &xb, &pi2, &mut violations);
    Ok(NeReport {
        pi1,
        pi2,
        violations,
    })
}

/// Exact check that `(x, x)` is an equilibrium of `(S, S^T)`.
pub fn check_symmetric_ne(s: &RatMatrix, x: &RatVector) -> Result<NeReport, NashError> {
    if !s.is_square() || x.dim() != s.rows() {
        return Err(NashError::Shape {
            x: x.dim(),
            y: x.dim(),
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let sx = s.mul_vec(x)?;
    let pi = x.dot(&sx)?;
    let mut violations = Vec::new();
    if !is_distribution(x) {
        violations.push(NeViolation::NotDistribution { player: 1 });
    }
    best_response_violations(1, x, &sx, &pi, &mut violations);
    Ok(NeReport {
        pi1: pi.clone(),
        pi2: pi,
        violations,
    })
}

/// `evaluate(circuit, lambda) == lambda`, exactly.
pub fn check_fixed_point(circuit: &FixpCircuit, lambda: &[Rational]) -> Result<bool, NashError> {
    let out = circuit.evaluate(lambda)?;
    Ok(&out[..] == lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::fixp::CircuitBuilder;

    pub(crate) fn matching_pennies() -> BimatrixGame {
        let a = RatMatrix::from_int_rows(&[&[1, -1], &[-1, 1]]);
        BimatrixGame::new(a.clone(), a.neg()).unwrap()
    }

    fn half() -> RatVector {
        RatVector::new(vec![rat(1, 2), rat(1, 2)])
    }

    #[test]
    fn matching_pennies_checks() {
        let g = matching_pennies();
        assert!(check_ne(&g, &Profile::new(half(), half())).unwrap().is_equilibrium());
        let pure = Profile::new(RatVector::from_ints(&[1, 0]), half());
        let r = check_ne(&g, &pure).unwrap();
        assert!(!r.is_equilibrium());
        assert!(r.violations.contains(&NeViolation::Deviation {
            player: 2,
            strategy: 1
        }));
    }

    #[test]
    fn symmetric_checks() {
        let zero = RatMatrix::zeros(3, 3);
        let x = RatVector::new(vec![rat(1, 3), rat(1, 6), rat(1, 2)]);
        assert!(check_symmetric_ne(&zero, &x).unwrap().is_equilibrium());
        let s = RatMatrix::from_int_rows(&[&[-1, 1, 1], &[-1, -1, 2], &[0, 0, 1]]);
        let x = RatVector::new(vec![rat(1, 4), rat(1, 4), rat(1, 2)]);
        assert!(check_symmetric_ne(&s, &x).unwrap().is_equilibrium());
        let r = check_symmetric_ne(&s, &RatVector::from_ints(&[1, 0, 0])).unwrap();
        assert_eq!(r.pi1, rat(-1, 1));
        assert!(r.violations.contains(&NeViolation::Deviation {
            player: 1,
            strategy: 2
        }));
    }

    #[test]
    fn non_distributions_are_rejected() {
        let g = matching_pennies();
        let p = Profile::new(RatVector::from_ints(&[1, 1]), half());
        assert!(check_ne(&g, &p)
            .unwrap()
            .violations
            .contains(&NeViolation::NotDistribution { player: 1 }));
    }

    #[test]
    fn fixed_points() {
        let mut b = CircuitBuilder::new(1);
        let o = b.one_minus(b.input(0));
        let c = b.build(vec![o]).unwrap();
        assert!(check_fixed_point(&c, &[rat(1, 2)]).unwrap());
        assert!(!check_fixed_point(&c, &[rat(1, 3)]).unwrap());

        let b = CircuitBuilder::new(2);
        let (x, y) = (b.input(0), b.input(1));
        let swap = b.build(vec![y, x]).unwrap();
        assert!(check_fixed_point(&swap, &[rat(1, 3), rat(1, 3)]).unwrap());
        assert!(!check_fixed_point(&swap, &[rat(1, 3), rat(1, 2)]).unwrap());
    }
}
