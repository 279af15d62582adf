use rayon::prelude::*;
use serde::Serialize;

use super::{check_ne, check_symmetric_ne, NashError, NeCertificate, Profile};
use crate::exactmath::{RatMatrix, RatVector, Rational};
use crate::lcp_game::BimatrixGame;

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    /// Largest number of strategies per player.
    pub cap: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { cap: 12 }
    }
}

/// Equilibria found by support enumeration.
///
/// `degenerate` is set when some support system was singular but
/// consistent, or when an equilibrium strategy has more pure best responses
/// than the opposing support size. The list is then the set of equilibria
/// that are unique on their support pair, not necessarily every equilibrium.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration<T> {
    pub equilibria: Vec<T>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SymmetricCertificate {
    pub x: RatVector,
    pub pi: Rational,
    pub support: Vec<usize>,
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

enum SideSolution {
    Unique(RatVector, Rational),
    /// Singular system that still has solutions.
    Degenerate,
    None,
}

/// Solve for a mixed strategy `p` supported on `own` that makes the
/// opponent indifferent over `other`: `sum_{j in own} pay(i, j) p_j = pi`
/// for `i` in `other`, and `sum p_j = 1`.
fn indifference(
    pay: impl Fn(usize, usize) -> Rational,
    own: &[usize],
    other: &[usize],
) -> SideSolution {
    let s = own.len();
    debug_assert_eq!(s, other.len());
    let mut m = RatMatrix::zeros(s + 1, s + 1);
    let mut rhs = RatVector::zeros(s + 1);
    for (r, &i) in other.iter().enumerate() {
        for (c, &j) in own.iter().enumerate() {
            m[(r, c)] = pay(i, j);
        }
        m[(r, s)] = Rational::integer(-1);
    }
    for c in 0..s {
        m[(s, c)] = Rational::one();
    }
    rhs[s] = Rational::one();
    match m.solve_square(&rhs).expect("square system") {
        Some(sol) => {
            let pi = sol[s].clone();
            let p: RatVector = sol.iter().take(s).cloned().collect();
            if p.iter().all(Rational::is_positive) {
                SideSolution::Unique(p, pi)
            } else {
                SideSolution::None
            }
        }
        None => {
            let mut aug = RatMatrix::zeros(s + 1, s + 2);
            for r in 0..=s {
                for c in 0..=s {
                    aug[(r, c)] = m[(r, c)].clone();
                }
                aug[(r, s + 1)] = rhs[r].clone();
            }
            if aug.rank() == m.rank() {
                SideSolution::Degenerate
            } else {
                SideSolution::None
            }
        }
    }
}

fn spread(dim: usize, support: &[usize], vals: &RatVector) -> RatVector {
    let mut v = RatVector::zeros(dim);
    for (k, &i) in support.iter().enumerate() {
        v[i] = vals[k].clone();
    }
    v
}

fn count_best(payoffs: &RatVector, pi: &Rational) -> usize {
    payoffs.iter().filter(|p| *p == pi).count()
}

struct PairOutcome {
    cert: Option<NeCertificate>,
    degenerate: bool,
}

fn try_pair(game: &BimatrixGame, rows_i: &[usize], cols_j: &[usize]) -> PairOutcome {
    let (r, c) = (game.rows(), game.cols());
    let y = indifference(|i, j| game.a[(i, j)].clone(), cols_j, rows_i);
    let (yv, pi1) = match y {
        SideSolution::Unique(v, p) => (spread(c, cols_j, &v), p),
        SideSolution::Degenerate => {
            return PairOutcome {
                cert: None,
                degenerate: true,
            }
        }
        SideSolution::None => {
            return PairOutcome {
                cert: None,
                degenerate: false,
            }
        }
    };
    let ay = game.a.mul_vec(&yv).expect("shapes agree");
    if ay.iter().any(|v| *v > pi1) {
        return PairOutcome {
            cert: None,
            degenerate: false,
        };
    }
    let x = indifference(|j, i| game.b[(i, j)].clone(), rows_i, cols_j);
    let (xv, pi2) = match x {
        SideSolution::Unique(v, p) => (spread(r, rows_i, &v), p),
        SideSolution::Degenerate => {
            return PairOutcome {
                cert: None,
                degenerate: true,
            }
        }
        SideSolution::None => {
            return PairOutcome {
                cert: None,
                degenerate: false,
            }
        }
    };
    let xb = game.b.vec_mul(&xv).expect("shapes agree");
    if xb.iter().any(|v| *v > pi2) {
        return PairOutcome {
            cert: None,
            degenerate: false,
        };
    }
    let degenerate =
        count_best(&ay, &pi1) > cols_j.len() || count_best(&xb, &pi2) > rows_i.len();
    PairOutcome {
        cert: Some(NeCertificate {
            profile: Profile::new(xv, yv),
            pi1,
            pi2,
            support_x: rows_i.to_vec(),
            support_y: cols_j.to_vec(),
        }),
        degenerate,
    }
}

pub fn enumerate_ne(game: &BimatrixGame) -> Result<Enumeration<NeCertificate>, NashError> {
    enumerate_ne_with(game, EnumerationOptions::default())
}

/// Support enumeration over all pairs of equal-size supports, in
/// lexicographic order of (size, row support, column support).
pub fn enumerate_ne_with(
    game: &BimatrixGame,
    opts: EnumerationOptions,
) -> Result<Enumeration<NeCertificate>, NashError> {
    let (r, c) = (game.rows(), game.cols());
    if r > opts.cap || c > opts.cap {
        return Err(NashError::DimensionTooLarge {
            rows: r,
            cols: c,
            cap: opts.cap,
        });
    }
    let pairs: Vec<(Vec<usize>, Vec<usize>)> = (1..=r.min(c))
        .flat_map(|s| {
            let cols = subsets(c, s);
            subsets(r, s)
                .into_iter()
                .flat_map(move |i| cols.clone().into_iter().map(move |j| (i.clone(), j)))
        })
        .collect();
    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|(i, j)| try_pair(game, i, j))
        .collect();
    let degenerate = outcomes.iter().any(|o| o.degenerate);
    let equilibria: Vec<NeCertificate> = outcomes.into_iter().filter_map(|o| o.cert).collect();
    for e in &equilibria {
        let report = check_ne(game, &e.profile)?;
        if !report.is_equilibrium() {
            return Err(NashError::NotEquilibrium(report.violations));
        }
    }
    Ok(Enumeration {
        equilibria,
        degenerate,
    })
}

pub fn enumerate_symmetric_ne(
    s: &RatMatrix,
) -> Result<Enumeration<SymmetricCertificate>, NashError> {
    enumerate_symmetric_ne_with(s, EnumerationOptions::default())
}

/// Symmetric support enumeration: for each support `I`, solve
/// `(S x)_i = pi` on `I` with `x` a distribution supported on `I`.
pub fn enumerate_symmetric_ne_with(
    s: &RatMatrix,
    opts: EnumerationOptions,
) -> Result<Enumeration<SymmetricCertificate>, NashError> {
    let n = s.rows();
    if !s.is_square() {
        return Err(NashError::Shape {
            x: n,
            y: n,
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    if n > opts.cap {
        return Err(NashError::DimensionTooLarge {
            rows: n,
            cols: n,
            cap: opts.cap,
        });
    }
    let supports: Vec<Vec<usize>> = (1..=n).flat_map(|k| subsets(n, k)).collect();
    let outcomes: Vec<(Option<SymmetricCertificate>, bool)> = supports
        .par_iter()
        .map(|sup| match indifference(|i, j| s[(i, j)].clone(), sup, sup) {
            SideSolution::Unique(v, pi) => {
                let x = spread(n, sup, &v);
                let sx = s.mul_vec(&x).expect("shapes agree");
                if sx.iter().any(|v| *v > pi) {
                    return (None, false);
                }
                let degenerate = count_best(&sx, &pi) > sup.len();
                let cert = SymmetricCertificate {
                    x,
                    pi,
                    support: sup.clone(),
                };
                (Some(cert), degenerate)
            }
            SideSolution::Degenerate => (None, true),
            SideSolution::None => (None, false),
        })
        .collect();
    let degenerate = outcomes.iter().any(|o| o.1);
    let equilibria: Vec<SymmetricCertificate> = outcomes.into_iter().filter_map(|o| o.0).collect();
    for e in &equilibria {
        let report = check_symmetric_ne(s, &e.x)?;
        if !report.is_equilibrium() {
            return Err(NashError::NotEquilibrium(report.violations));
        }
    }
    Ok(Enumeration {
        equilibria,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::nash::tests::matching_pennies;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn matching_pennies_has_one_equilibrium() {
        let e = enumerate_ne(&matching_pennies()).unwrap();
        assert_eq!(e.equilibria.len(), 1);
        assert!(!e.degenerate);
        let half = RatVector::new(vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(e.equilibria[0].profile, Profile::new(half.clone(), half));
    }

    #[test]
    fn zero_game_is_degenerate() {
        let z = RatMatrix::zeros(2, 2);
        let g = BimatrixGame::new(z.clone(), z.clone()).unwrap();
        assert!(enumerate_ne(&g).unwrap().degenerate);
        assert!(enumerate_symmetric_ne(&z).unwrap().degenerate);
    }

    #[test]
    fn rock_paper_scissors_is_uniform() {
        let s = RatMatrix::from_int_rows(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]]);
        let e = enumerate_symmetric_ne(&s).unwrap();
        assert_eq!(e.equilibria.len(), 1);
        assert_eq!(e.equilibria[0].x, RatVector::filled(3, rat(1, 3)));
    }

    #[test]
    fn cap_is_enforced() {
        let z = RatMatrix::zeros(3, 3);
        let g = BimatrixGame::new(z.clone(), z).unwrap();
        assert!(matches!(
            enumerate_ne_with(&g, EnumerationOptions { cap: 2 }),
            Err(NashError::DimensionTooLarge { .. })
        ));
    }
}
