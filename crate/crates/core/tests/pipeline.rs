use nashforge::exactmath::{RatVector, Rational};
use nashforge::fixp::examples::named;
use nashforge::lcp_game::{game_to_fixed_point, symmetric_to_fixed_point, symmetrize};
use nashforge::nash::{
    check_fixed_point, check_symmetric_ne, enumerate_ne, enumerate_symmetric_ne, lemke_howson,
};
use nashforge::pipeline::Reduction;
use nashforge::verify::symmetrized_profile;

fn v(xs: &[(i64, i64)]) -> RatVector {
    xs.iter().map(|&(n, d)| Rational::new(n, d)).collect()
}

/// Fixed-point sets worked out by hand for the isolated cases.
fn known(name: &str) -> Vec<RatVector> {
    match name {
        "one_minus" | "max_floor" | "contraction" => vec![v(&[(1, 2)])],
        "shift_up" => vec![v(&[(1, 1)])],
        "shift_down" => vec![v(&[(0, 1)])],
        // 3x - 1 = x at 1/2; clamping also fixes both ends.
        "expand" => vec![v(&[(0, 1)]), v(&[(1, 2)]), v(&[(1, 1)])],
        "rotate" => vec![v(&[(1, 2), (1, 2)])],
        "max_pair" => vec![v(&[(1, 3), (1, 3)])],
        _ => unreachable!(),
    }
}

const ISOLATED: &[&str] = &[
    "one_minus",
    "shift_up",
    "shift_down",
    "max_floor",
    "contraction",
    "expand",
    "rotate",
    "max_pair",
];

fn rank_game_lambdas(red: &Reduction) -> Vec<RatVector> {
    let meta = red.game.meta.as_ref().unwrap();
    let en = enumerate_ne(&red.game).unwrap();
    let mut out: Vec<RatVector> = en
        .equilibria
        .iter()
        .map(|e| {
            assert!(e.profile.s().is_positive() && e.profile.t().is_positive());
            game_to_fixed_point(&e.profile, meta).unwrap()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[test]
fn known_sets_agree_with_a_scan() {
    for name in ISOLATED.iter().filter(|n| named(n).unwrap().k() == 1) {
        let c = Reduction::from_circuit(&named(name).unwrap()).unwrap().circuit;
        let hits: Vec<RatVector> = (0..=120)
            .map(|j| v(&[(j, 120)]))
            .filter(|l| check_fixed_point(&c, l).unwrap())
            .collect();
        assert_eq!(hits, known(name), "{name}");
    }
}

#[test]
fn rank_game_equilibria_recover_fixed_points() {
    for name in ISOLATED {
        let red = Reduction::from_circuit(&named(name).unwrap()).unwrap();
        assert!(red.game.rows() <= 12, "{name}");
        let got = rank_game_lambdas(&red);
        assert_eq!(got, known(name), "{name}");
        for l in &got {
            assert!(check_fixed_point(&red.circuit, l).unwrap());
        }
    }
}

#[test]
fn symmetric_and_imitation_paths_agree() {
    for name in ISOLATED {
        let red = Reduction::from_circuit(&named(name).unwrap()).unwrap();
        let sym = red.symmetric().unwrap();
        let meta = sym.meta.clone().unwrap();
        let en = enumerate_symmetric_ne(&sym.s).unwrap();
        let mut got: Vec<RatVector> = en
            .equilibria
            .iter()
            .map(|e| {
                assert!(e.x[e.x.dim() - 1].is_positive());
                symmetric_to_fixed_point(&e.x, &meta).unwrap()
            })
            .collect();
        got.sort();
        got.dedup();
        assert_eq!(got, known(name), "{name}");

        let mut ys: Vec<RatVector> = enumerate_ne(&red.imitation().unwrap())
            .unwrap()
            .equilibria
            .into_iter()
            .map(|e| e.profile.y)
            .collect();
        let mut xs: Vec<RatVector> = en.equilibria.into_iter().map(|e| e.x).collect();
        ys.sort();
        ys.dedup();
        xs.sort();
        assert_eq!(ys, xs, "{name}");
    }
}

#[test]
fn swap_continuum_gives_diagonal_points() {
    let red = Reduction::from_circuit(&named("swap").unwrap()).unwrap();
    let en = enumerate_ne(&red.game).unwrap();
    assert!(en.degenerate);
    let lambdas = rank_game_lambdas(&red);
    assert!(!lambdas.is_empty());
    for l in &lambdas {
        assert_eq!(l[0], l[1]);
        assert!(check_fixed_point(&red.circuit, l).unwrap());
    }
    assert!(lambdas.contains(&v(&[(0, 1), (0, 1)])));
    assert!(lambdas.contains(&v(&[(1, 1), (1, 1)])));
}

#[test]
fn lemke_howson_lands_in_the_enumerated_set() {
    let red = Reduction::from_circuit(&named("one_minus").unwrap()).unwrap();
    let c = lemke_howson(&red.game, 0).unwrap();
    assert_eq!(c.profile.x, v(&[(2, 5), (1, 5), (2, 5)]));
    for name in ISOLATED {
        let red = Reduction::from_circuit(&named(name).unwrap()).unwrap();
        let firsts: Vec<RatVector> = enumerate_ne(&red.game)
            .unwrap()
            .equilibria
            .into_iter()
            .map(|e| e.profile.x)
            .collect();
        for label in 0..red.game.rows() + red.game.cols() {
            let c = lemke_howson(&red.game, label).unwrap();
            assert!(firsts.contains(&c.profile.x), "{name} label {label}");
        }
    }
}

#[test]
fn equilibria_embed_in_the_symmetrized_game() {
    let mut embedded = 0;
    for name in ISOLATED {
        let red = Reduction::from_circuit(&named(name).unwrap()).unwrap();
        let s = symmetrize(&red.game.a, &red.game.b).unwrap();
        for e in enumerate_ne(&red.game).unwrap().equilibria {
            let Some(z) = symmetrized_profile(&e.profile, &e.pi1, &e.pi2) else {
                continue;
            };
            assert!(check_symmetric_ne(&s.s, &z).unwrap().is_equilibrium(), "{name}");
            embedded += 1;
        }
    }
    assert!(embedded >= ISOLATED.len());
}
