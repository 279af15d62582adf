//! From parameterized LPs to linear complementarity problems and bimatrix
//! games, and the maps carrying equilibria back to fixed points.

mod game;
mod lcp;
mod maps;
mod system;

pub use game::{
    build_game, build_symmetric_game, imitation_game, symmetrize, BimatrixGame, GameKind,
    GameMeta, SymmetricGame,
};
pub use lcp::{
    build_direct_lcp, build_lcp_c, semimonotone_witness, LcpInstance, LcpKind, LcpViolation,
    SemimonotoneViolation,
};
pub use maps::{
    game_to_fixed_point, lcp_to_ne, lcp_to_symne, ne_to_lcp, symmetric_to_fixed_point,
    symne_to_lcp,
};
pub use system::{normalize, scale_solution, unscale_solution, NormalizedSystem};

use thiserror::Error;

use crate::exactmath::MathError;
use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcpGameError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("structural property {property} fails: {detail}")]
    Property { property: &'static str, detail: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A condition that the reduction proves impossible was observed; on a
    /// concrete instance this means a construction bug.
    #[error("lemma falsified: {0}")]
    LemmaFalsified(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, RatMatrix, RatVector};
    use crate::fixp::{clamp_outputs, normalize_max_zero, CircuitBuilder};
    use crate::lp::ParamLp;
    use crate::nash::{check_ne, check_symmetric_ne, enumerate_ne, enumerate_symmetric_ne, Profile};

    fn worked_lp() -> ParamLp {
        let mut b = CircuitBuilder::new(1);
        let o = b.one_minus(b.input(0));
        let c = normalize_max_zero(&clamp_outputs(&b.build(vec![o]).unwrap()).unwrap()).unwrap();
        ParamLp::from_circuit(&c).unwrap()
    }

    fn v(entries: &[(i64, i64)]) -> RatVector {
        entries.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    fn worked_profile() -> Profile {
        Profile::new(v(&[(2, 5), (1, 5), (2, 5)]), v(&[(1, 3), (1, 3), (1, 3)]))
    }

    #[test]
    fn normalized_system() {
        let ns = normalize(&worked_lp()).unwrap();
        let h = RatMatrix::new(2, 2, v(&[(1, 2), (0, 1), (1, 2), (1, 1)]).into_inner()).unwrap();
        let hp = RatMatrix::new(2, 2, v(&[(1, 2), (-1, 1), (1, 2), (1, 1)]).into_inner()).unwrap();
        assert_eq!(ns.h, h);
        assert_eq!(ns.hp, hp);
    }

    #[test]
    fn worked_game() {
        let g = build_game(&normalize(&worked_lp()).unwrap()).unwrap();
        let a = RatMatrix::new(
            3,
            3,
            v(&[(1, 2), (1, 2), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (1, 1)]).into_inner(),
        )
        .unwrap();
        let b = RatMatrix::new(
            3,
            3,
            v(&[(-1, 2), (-1, 2), (0, 1), (1, 1), (-1, 1), (0, 1), (1, 1), (2, 1), (1, 1)])
                .into_inner(),
        )
        .unwrap();
        assert_eq!(g.a, a);
        assert_eq!(g.b, b);
        assert_eq!(g.rank(), 2);
        assert!(check_ne(&g, &worked_profile()).unwrap().is_equilibrium());
        let all = enumerate_ne(&g).unwrap();
        assert!(!all.equilibria.is_empty());
        for e in &all.equilibria {
            assert_eq!(e.profile.x, worked_profile().x);
            let lambda = game_to_fixed_point(&e.profile, g.meta.as_ref().unwrap()).unwrap();
            assert_eq!(lambda, v(&[(1, 2)]));
        }
    }

    #[test]
    fn ne_lcp_round_trip() {
        let ns = normalize(&worked_lp()).unwrap();
        let (x, y) = ne_to_lcp(&worked_profile()).unwrap();
        assert_eq!(x, v(&[(1, 1), (1, 2)]));
        assert_eq!(y, v(&[(1, 1), (1, 1)]));
        let lcp = build_lcp_c(&ns).unwrap();
        let z: RatVector = x.iter().chain(y.iter()).cloned().collect();
        assert!(lcp.is_solution(&z).unwrap());
        assert_eq!(lcp_to_ne(&x, &y), worked_profile());
    }

    #[test]
    fn zero_s_is_an_alarm() {
        let p = Profile::new(v(&[(1, 1), (0, 1)]), v(&[(1, 2), (1, 2)]));
        assert!(matches!(ne_to_lcp(&p), Err(LcpGameError::LemmaFalsified(_))));
        assert!(matches!(
            symne_to_lcp(&v(&[(1, 1), (0, 1)])),
            Err(LcpGameError::LemmaFalsified(_))
        ));
    }

    #[test]
    fn worked_symmetric_game() {
        let lp = worked_lp();
        let s = build_symmetric_game(&lp).unwrap();
        assert_eq!(s.s, RatMatrix::from_int_rows(&[&[-1, 1, 1], &[-1, -1, 2], &[0, 0, 1]]));
        let direct = build_direct_lcp(&lp).unwrap();
        assert_eq!(direct.m, RatMatrix::from_int_rows(&[&[-1, 1], &[-1, -1]]));
        let all = enumerate_symmetric_ne(&s.s).unwrap();
        let want = v(&[(1, 4), (1, 4), (1, 2)]);
        assert_eq!(all.equilibria.len(), 1);
        assert_eq!(all.equilibria[0].x, want);
        let x = symne_to_lcp(&want).unwrap();
        assert_eq!(x, v(&[(1, 2), (1, 2)]));
        assert!(direct.is_solution(&x).unwrap());
        assert_eq!(lcp_to_symne(&x), want);
        let meta = s.meta.as_ref().unwrap();
        assert_eq!(symmetric_to_fixed_point(&want, meta).unwrap(), v(&[(1, 2)]));
    }

    #[test]
    fn imitation_second_player_matches_symmetric() {
        let s = build_symmetric_game(&worked_lp()).unwrap();
        let g = imitation_game(&s);
        assert_eq!(g.b, RatMatrix::identity(3));
        let sym = enumerate_symmetric_ne(&s.s).unwrap();
        let imit = enumerate_ne(&g).unwrap();
        let mut ys: Vec<RatVector> = imit.equilibria.iter().map(|e| e.profile.y.clone()).collect();
        ys.dedup();
        let xs: Vec<RatVector> = sym.equilibria.iter().map(|e| e.x.clone()).collect();
        assert_eq!(ys, xs);
        for y in &ys {
            assert!(check_symmetric_ne(&s.s, y).unwrap().is_equilibrium());
        }
    }

    #[test]
    fn symmetrized_worked_game() {
        let g = build_game(&normalize(&worked_lp()).unwrap()).unwrap();
        let s = symmetrize(&g.a, &g.b).unwrap();
        assert_eq!(s.dim(), 6);
        assert_eq!(s.s.add(&s.s.transpose()).unwrap().rank(), 4);
        let zero = symmetrize(&RatMatrix::zeros(2, 2), &RatMatrix::zeros(2, 2)).unwrap();
        assert_eq!(zero.s, RatMatrix::zeros(4, 4));
    }

    #[test]
    fn semimonotone_on_worked_system() {
        let ns = normalize(&worked_lp()).unwrap();
        let q = RatVector::from_ints(&[1, 1, 1, 1]);
        for z in [[1, 0, 0, 0], [0, 0, 1, 1], [1, 1, 1, 1], [0, 3, 0, 0]] {
            assert!(semimonotone_witness(&ns, &RatVector::from_ints(&z), &q).is_ok());
        }
    }

    #[test]
    fn game_json_uses_kind_names() {
        let g = build_game(&normalize(&worked_lp()).unwrap()).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"rank_k_plus_1\""));
        let back: BimatrixGame = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
