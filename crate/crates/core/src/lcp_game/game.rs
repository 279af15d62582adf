use serde::{Deserialize, Serialize};

use super::lcp::a_prime;
use super::{LcpGameError, NormalizedSystem};
use crate::exactmath::{RatMatrix, RatVector, Rational};
use crate::lp::ParamLp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    #[serde(rename = "rank_k_plus_1")]
    RankKPlus1,
    Symmetric,
    Imitation,
}

/// What is needed to read fixed points back out of a constructed game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameMeta {
    pub m: usize,
    pub k: usize,
    pub c: RatVector,
    pub output_rows: Vec<usize>,
    pub kind: GameKind,
}

/// A two-player game; `a` pays the row player and `b` the column player.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGame", into = "RawGame")]
pub struct BimatrixGame {
    pub a: RatMatrix,
    pub b: RatMatrix,
    pub meta: Option<GameMeta>,
}

#[derive(Serialize, Deserialize)]
struct RawGame {
    rows: usize,
    cols: usize,
    #[serde(rename = "A")]
    a: RatMatrix,
    #[serde(rename = "B")]
    b: RatMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<GameMeta>,
}

impl TryFrom<RawGame> for BimatrixGame {
    type Error = LcpGameError;
    fn try_from(r: RawGame) -> Result<Self, LcpGameError> {
        if r.a.shape() != (r.rows, r.cols) {
            return Err(LcpGameError::Precondition(format!(
                "A is {:?} but the game declares {}x{}",
                r.a.shape(),
                r.rows,
                r.cols
            )));
        }
        BimatrixGame::with_meta(r.a, r.b, r.meta)
    }
}

impl From<BimatrixGame> for RawGame {
    fn from(g: BimatrixGame) -> Self {
        RawGame {
            rows: g.a.rows(),
            cols: g.a.cols(),
            a: g.a,
            b: g.b,
            meta: g.meta,
        }
    }
}

impl BimatrixGame {
    pub fn new(a: RatMatrix, b: RatMatrix) -> Result<Self, LcpGameError> {
        Self::with_meta(a, b, None)
    }

    pub fn with_meta(
        a: RatMatrix,
        b: RatMatrix,
        meta: Option<GameMeta>,
    ) -> Result<Self, LcpGameError> {
        if a.shape() != b.shape() || a.rows() == 0 || a.cols() == 0 {
            return Err(LcpGameError::Precondition(format!(
                "payoff matrices {:?} and {:?} must share a nonempty shape",
                a.shape(),
                b.shape()
            )));
        }
        Ok(BimatrixGame { a, b, meta })
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// `rank(A + B)`.
    pub fn rank(&self) -> usize {
        self.a.add(&self.b).expect("shapes agree").rank()
    }
}

/// A symmetric game `(S, S^T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricGame {
    pub s: RatMatrix,
    pub meta: Option<GameMeta>,
}

impl SymmetricGame {
    pub fn new(s: RatMatrix) -> Result<Self, LcpGameError> {
        if !s.is_square() || s.rows() == 0 {
            return Err(LcpGameError::Precondition(format!(
                "symmetric game matrix must be square, got {:?}",
                s.shape()
            )));
        }
        Ok(SymmetricGame { s, meta: None })
    }

    pub fn dim(&self) -> usize {
        self.s.rows()
    }

    /// The game as the bimatrix pair `(S, S^T)`.
    pub fn to_bimatrix(&self) -> BimatrixGame {
        BimatrixGame {
            a: self.s.clone(),
            b: self.s.transpose(),
            meta: self.meta.clone(),
        }
    }

    /// Recover a symmetric game from `(S, S^T)`.
    pub fn from_bimatrix(g: &BimatrixGame) -> Result<Self, LcpGameError> {
        if g.b != g.a.transpose() {
            return Err(LcpGameError::Precondition(
                "second payoff matrix is not the transpose of the first".into(),
            ));
        }
        let mut s = SymmetricGame::new(g.a.clone())?;
        s.meta = g.meta.clone();
        Ok(s)
    }
}

fn meta_of(lp: &ParamLp, kind: GameKind) -> GameMeta {
    GameMeta {
        m: lp.m(),
        k: lp.k(),
        c: lp.c().clone(),
        output_rows: lp.output_rows().to_vec(),
        kind,
    }
}

/// `A~ = [[H^T, 0], [0^T, 1]]`, `B~ = [[-H'^T, 0], [b^T + 1^T, 1]]`.
pub fn build_game(ns: &NormalizedSystem) -> Result<BimatrixGame, LcpGameError> {
    let m = ns.m();
    let zero_col = RatMatrix::zeros(m, 1);
    let zero_row = RatMatrix::zeros(1, m);
    let one = RatMatrix::identity(1);
    let ht = ns.h.transpose();
    let a = RatMatrix::from_blocks(&[vec![&ht, &zero_col], vec![&zero_row, &one]])?;
    let neg_hpt = ns.hp.transpose().neg();
    let b_row = RatMatrix::new(1, m, ns.b.iter().map(|v| v + &Rational::one()).collect())?;
    let b = RatMatrix::from_blocks(&[vec![&neg_hpt, &zero_col], vec![&b_row, &one]])?;

    if !a.is_upper_triangular()? {
        return Err(LcpGameError::Property {
            property: "triangularity",
            detail: "first payoff matrix is not upper triangular".into(),
        });
    }
    let game = BimatrixGame::with_meta(a, b, Some(meta_of(&ns.lp, GameKind::RankKPlus1)))?;
    let rank = game.rank();
    if rank > ns.k() + 1 {
        return Err(LcpGameError::Property {
            property: "rank",
            detail: format!("rank(A+B) = {rank} exceeds k + 1 = {}", ns.k() + 1),
        });
    }
    Ok(game)
}

/// `S = [[-A', b + 1], [0^T, 1]]`.
pub fn build_symmetric_game(lp: &ParamLp) -> Result<SymmetricGame, LcpGameError> {
    let m = lp.m();
    let ap = a_prime(lp)?;
    let neg_ap = ap.neg();
    let b1 = RatMatrix::new(m, 1, lp.b().iter().map(|v| v + &Rational::one()).collect())?;
    let zero_row = RatMatrix::zeros(1, m);
    let one = RatMatrix::identity(1);
    let s = RatMatrix::from_blocks(&[vec![&neg_ap, &b1], vec![&zero_row, &one]])?;
    Ok(SymmetricGame {
        s,
        meta: Some(meta_of(lp, GameKind::Symmetric)),
    })
}

/// `S = [[0, A], [B^T, 0]]`; symmetric equilibria of `(S, S^T)` restrict
/// to equilibria of `(A, B)`.
pub fn symmetrize(a: &RatMatrix, b: &RatMatrix) -> Result<SymmetricGame, LcpGameError> {
    if a.shape() != b.shape() {
        return Err(LcpGameError::Precondition(format!(
            "payoff matrices {:?} and {:?} differ in shape",
            a.shape(),
            b.shape()
        )));
    }
    let (r, c) = a.shape();
    let zr = RatMatrix::zeros(r, r);
    let zc = RatMatrix::zeros(c, c);
    let bt = b.transpose();
    let s = RatMatrix::from_blocks(&[vec![&zr, a], vec![&bt, &zc]])?;
    SymmetricGame::new(s)
}

/// The game `(S, I)`.
pub fn imitation_game(s: &SymmetricGame) -> BimatrixGame {
    let mut meta = s.meta.clone();
    if let Some(m) = meta.as_mut() {
        m.kind = GameKind::Imitation;
    }
    BimatrixGame {
        a: s.s.clone(),
        b: RatMatrix::identity(s.dim()),
        meta,
    }
}
