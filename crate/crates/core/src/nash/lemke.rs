use std::cmp::Ordering;

use super::{check_ne, NashError, NeCertificate, Profile};
use crate::exactmath::{RatMatrix, RatVector, Rational};
use crate::lcp_game::BimatrixGame;

/// A dense tableau whose columns are indexed by label, plus a right-hand side.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns that formed the starting basis, in order, used to break ties.
    lex_cols: Vec<usize>,
}

impl Tableau {
    /// The row leaving when `col` enters, chosen by the lexicographic
    /// minimum ratio rule.
    fn leaving_row(&self, col: usize) -> Option<usize> {
        let key = |r: usize| -> Vec<Rational> {
            let p = &self.rows[r][col];
            std::iter::once(&self.rhs[r])
                .chain(self.lex_cols.iter().map(|&c| &self.rows[r][c]))
                .map(|v| v / p)
                .collect()
        };
        (0..self.rows.len())
            .filter(|&r| self.rows[r][col].is_positive())
            .map(|r| (key(r), r))
            .min_by(|a, b| cmp_lex(&a.0, &b.0))
            .map(|(_, r)| r)
    }

    /// Pivot `col` into the basis and return the label that left.
    fn pivot(&mut self, col: usize) -> Option<usize> {
        let r = self.leaving_row(col)?;
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        self.rhs[r] = &self.rhs[r] / &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = &*v - &(&f * pv);
                }
            }
            self.rhs[i] = &self.rhs[i] - &(&f * &prhs);
        }
        Some(std::mem::replace(&mut self.basis[r], col))
    }

    fn value(&self, label: usize) -> Rational {
        self.basis
            .iter()
            .position(|&b| b == label)
            .map(|r| self.rhs[r].clone())
            .unwrap_or_else(Rational::zero)
    }
}

fn cmp_lex(a: &[Rational], b: &[Rational]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Add a constant so that every entry is at least 1.
fn make_positive(m: &RatMatrix) -> RatMatrix {
    let min = m.entries().iter().min().cloned().unwrap_or_else(Rational::zero);
    let shift = Rational::one() - min;
    m.map(|v| v + &shift)
}

/// Complementary pivoting from the artificial equilibrium with label
/// `dropped_label` dropped. Labels `0..rows` are the first player's pure
/// strategies and `rows..rows+cols` the second player's.
pub fn lemke_howson(game: &BimatrixGame, dropped_label: usize) -> Result<NeCertificate, NashError> {
    let (m, n) = (game.rows(), game.cols());
    let labels = m + n;
    if dropped_label >= labels {
        return Err(NashError::BadLabel {
            label: dropped_label,
            labels,
        });
    }
    let a = make_positive(&game.a);
    let b = make_positive(&game.b);

    // P: B^T x + s = 1, x carries labels 0..m and s carries m..m+n.
    let p_rows = (0..n)
        .map(|j| {
            let mut row = vec![Rational::zero(); labels];
            for i in 0..m {
                row[i] = b[(i, j)].clone();
            }
            row[m + j] = Rational::one();
            row
        })
        .collect();
    let mut p = Tableau {
        rows: p_rows,
        rhs: vec![Rational::one(); n],
        basis: (m..labels).collect(),
        lex_cols: (m..labels).collect(),
    };
    // Q: r + A y = 1, r carries labels 0..m and y carries m..m+n.
    let q_rows = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); labels];
            row[i] = Rational::one();
            for j in 0..n {
                row[m + j] = a[(i, j)].clone();
            }
            row
        })
        .collect();
    let mut q = Tableau {
        rows: q_rows,
        rhs: vec![Rational::one(); m],
        basis: (0..m).collect(),
        lex_cols: (0..m).collect(),
    };

    let mut entering = dropped_label;
    let mut in_p = dropped_label < m;
    loop {
        let t = if in_p { &mut p } else { &mut q };
        let left = t
            .pivot(entering)
            .ok_or(NashError::Ray { label: dropped_label })?;
        if left == dropped_label {
            break;
        }
        entering = left;
        in_p = !in_p;
    }

    let x: RatVector = (0..m).map(|i| p.value(i)).collect();
    let y: RatVector = (m..labels).map(|j| q.value(j)).collect();
    let (sx, sy) = (x.sum(), y.sum());
    let x: RatVector = x.iter().map(|v| v / &sx).collect();
    let y: RatVector = y.iter().map(|v| v / &sy).collect();
    let profile = Profile::new(x, y);
    let report = check_ne(game, &profile)?;
    if !report.is_equilibrium() {
        return Err(NashError::NotEquilibrium(report.violations));
    }
    Ok(NeCertificate {
        support_x: profile.x.support(),
        support_y: profile.y.support(),
        profile,
        pi1: report.pi1,
        pi2: report.pi2,
    })
}
