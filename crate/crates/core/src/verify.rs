//! Instance-level check batteries with machine-readable PASS/FAIL reports.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::brouwer::{brute_force_fixtures, BoolCircuit};
use crate::compiler::{
    approx_epsilon, compile, extract_panchromatic_simplex, locate_approx_fixed_point,
    shrink_range, CompiledFunction, SamplingParams,
};
use crate::exactmath::{RatMatrix, RatVector, Rational};
use crate::fixp::random::{random_lambda, random_rational_in};
use crate::fixp::FixpCircuit;
use crate::lcp_game::{
    game_to_fixed_point, lcp_to_ne, ne_to_lcp, semimonotone_witness, symmetrize, symne_to_lcp,
    BimatrixGame, GameKind, GameMeta,
};
use crate::nash::{
    check_fixed_point, check_ne, check_symmetric_ne, enumerate_ne, enumerate_symmetric_ne,
    lemke_howson, Profile,
};
use crate::pipeline::Reduction;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of cases the check ran on.
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// The first failing case, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub mode: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Distinct fixed points read back from equilibria.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<RatVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extraction: Option<Value>,
}

impl VerifyReport {
    fn new(mode: &str) -> Self {
        VerifyReport {
            mode: mode.to_string(),
            passed: true,
            checks: Vec::new(),
            lambdas: Vec::new(),
            extraction: None,
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.checks.iter().all(|c| c.passed);
        self.lambdas.sort();
        self.lambdas.dedup();
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Accumulates cases for named checks, keeping the first failure of each.
#[derive(Default)]
struct Tally {
    order: Vec<String>,
    checks: BTreeMap<String, Check>,
}

impl Tally {
    fn record(&mut self, name: &str, outcome: Result<(), (String, Value)>) {
        let entry = self.checks.entry(name.to_string()).or_insert_with(|| {
            self.order.push(name.to_string());
            Check {
                name: name.to_string(),
                passed: true,
                cases: 0,
                detail: None,
                witness: None,
            }
        });
        entry.cases += 1;
        if let Err((detail, witness)) = outcome {
            if entry.passed {
                entry.passed = false;
                entry.detail = Some(detail);
                entry.witness = Some(witness);
            }
        }
    }

    fn ok(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> (String, Value)) {
        self.record(name, if ok { Ok(()) } else { Err(detail()) });
    }

    fn into_report(mut self, report: &mut VerifyReport) {
        for name in self.order {
            if let Some(c) = self.checks.remove(&name) {
                report.checks.push(c);
            }
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Equilibria of a constructed game, checked and mapped back to fixed
/// points. `red` enables the LCP and circuit checks.
fn equilibrium_checks(
    tally: &mut Tally,
    report: &mut VerifyReport,
    game: &BimatrixGame,
    red: Option<&Reduction>,
) -> Result<(), Error> {
    let meta = game.meta.as_ref();
    let kind = meta.map(|m| m.kind);
    let profiles: Vec<Profile> = if kind == Some(GameKind::Symmetric) {
        let en = enumerate_symmetric_ne(&game.a)?;
        tally.ok("nondegenerate", !en.degenerate, || {
            ("support systems are singular".into(), Value::Null)
        });
        en.equilibria
            .into_iter()
            .map(|c| Profile::new(c.x.clone(), c.x))
            .collect()
    } else {
        let en = enumerate_ne(game)?;
        tally.ok("nondegenerate", !en.degenerate, || {
            ("support systems are singular".into(), Value::Null)
        });
        en.equilibria.into_iter().map(|c| c.profile).collect()
    };
    tally.ok("equilibria_exist", !profiles.is_empty(), || {
        ("enumeration found no equilibrium".into(), Value::Null)
    });

    for (i, p) in profiles.iter().enumerate() {
        let ne = if kind == Some(GameKind::Symmetric) {
            check_symmetric_ne(&game.a, &p.x)?
        } else {
            check_ne(game, p)?
        };
        tally.ok("best_response", ne.is_equilibrium(), || {
            (
                format!("equilibrium {i} violates {:?}", ne.violations),
                json!({ "equilibrium": i, "violations": to_value(&ne.violations) }),
            )
        });
        let Some(meta) = meta else { continue };
        let witness = || json!({ "equilibrium": i, "profile": to_value(p) });
        match meta.kind {
            GameKind::RankKPlus1 => match ne_to_lcp(p) {
                Ok((x, y)) => {
                    tally.record("s_and_t_positive", Ok(()));
                    if let Some(red) = red {
                        let z: RatVector = x.iter().chain(y.iter()).cloned().collect();
                        let lcp = red.lcp()?;
                        let v = lcp.check(&z)?;
                        tally.ok("lcp_solution", v.is_empty(), || {
                            (format!("(x, y) violates {v:?}"), witness())
                        });
                        tally.ok("lcp_to_ne_inverse", lcp_to_ne(&x, &y) == *p, || {
                            ("lcp_to_ne does not invert ne_to_lcp".into(), witness())
                        });
                    }
                }
                Err(e) => tally.record("s_and_t_positive", Err((e.to_string(), witness()))),
            },
            GameKind::Symmetric | GameKind::Imitation => {
                let z = if meta.kind == GameKind::Symmetric { &p.x } else { &p.y };
                match symne_to_lcp(z) {
                    Ok(x) => {
                        tally.record("t_positive", Ok(()));
                        if let Some(red) = red {
                            let v = red.direct_lcp()?.check(&x)?;
                            tally.ok("lcp_solution", v.is_empty(), || {
                                (format!("x violates {v:?}"), witness())
                            });
                        }
                    }
                    Err(e) => tally.record("t_positive", Err((e.to_string(), witness()))),
                }
            }
        }
        if let Ok(lambda) = game_to_fixed_point(p, meta) {
            if let Some(red) = red {
                let fp = check_fixed_point(&red.circuit, &lambda)?;
                tally.ok("fixed_point", fp, || {
                    (format!("F({lambda}) != {lambda}"), json!({ "equilibrium": i, "lambda": to_value(&lambda) }))
                });
            }
            report.lambdas.push(lambda);
        }
    }

    if kind != Some(GameKind::Symmetric) && game.rows() == game.cols() {
        let firsts: Vec<&RatVector> = profiles.iter().map(|p| &p.x).collect();
        match lemke_howson(game, 0) {
            Ok(c) => tally.ok("lemke_howson_agrees", firsts.contains(&&c.profile.x), || {
                (
                    "Lemke-Howson equilibrium is not in the enumerated set".into(),
                    to_value(&c.profile),
                )
            }),
            Err(e) => tally.record("lemke_howson_agrees", Err((e.to_string(), Value::Null))),
        }
    }
    Ok(())
}

/// Equilibria of the rank game built from `circuit`, their LCP images and
/// the fixed points they encode.
pub fn roundtrip_circuit(circuit: &FixpCircuit) -> Result<VerifyReport, Error> {
    let red = Reduction::from_circuit(circuit)?;
    let mut report = VerifyReport::new("roundtrip");
    let mut tally = Tally::default();
    equilibrium_checks(&mut tally, &mut report, &red.game, Some(&red))?;
    tally.into_report(&mut report);
    Ok(report.finish())
}

fn expected_game(red: &Reduction, kind: GameKind) -> Result<BimatrixGame, Error> {
    Ok(match kind {
        GameKind::RankKPlus1 => red.game.clone(),
        GameKind::Symmetric => red.symmetric()?.to_bimatrix(),
        GameKind::Imitation => red.imitation()?,
    })
}

fn structure_checks(tally: &mut Tally, game: &BimatrixGame, meta: &GameMeta) -> Result<(), Error> {
    let k = meta.k;
    if meta.kind == GameKind::RankKPlus1 {
        let tri = game.a.is_upper_triangular()?;
        tally.ok("game_triangular", tri, || {
            ("first payoff matrix is not upper triangular".into(), Value::Null)
        });
        let rank = game.rank();
        tally.ok("game_rank", rank <= k + 1, || {
            (format!("rank(A+B) = {rank} exceeds k + 1 = {}", k + 1), json!({ "rank": rank }))
        });
        let s = symmetrize(&game.a, &game.b)?;
        let srank = s.s.add(&s.s.transpose())?.rank();
        tally.ok("symmetrized_rank", srank <= 2 * (k + 1), || {
            (
                format!("rank(S+S^T) = {srank} exceeds 2(k + 1) = {}", 2 * (k + 1)),
                json!({ "rank": srank }),
            )
        });
    }
    if meta.kind == GameKind::Imitation {
        let id = game.b == RatMatrix::identity(game.rows());
        tally.ok("imitation_identity", id, || {
            ("second payoff matrix is not the identity".into(), Value::Null)
        });
    }
    if meta.kind == GameKind::Symmetric {
        let sym = game.b == game.a.transpose();
        tally.ok("symmetric_pair", sym, || {
            ("second payoff matrix is not the transpose of the first".into(), Value::Null)
        });
    }
    Ok(())
}

/// Checks of a game document: structure, equilibria, and, when the source
/// circuit is given, agreement with a fresh reduction and exact fixed points.
pub fn verify_game(
    game: &BimatrixGame,
    circuit: Option<&FixpCircuit>,
    mode: &str,
) -> Result<VerifyReport, Error> {
    let mut report = VerifyReport::new(mode);
    let mut tally = Tally::default();
    let red = circuit.map(Reduction::from_circuit).transpose()?;
    if let Some(meta) = &game.meta {
        structure_checks(&mut tally, game, meta)?;
        if let Some(red) = &red {
            let want = expected_game(red, meta.kind)?;
            let diff = first_difference(&want, game);
            tally.ok("game_matches_circuit", diff.is_none(), || {
                let (m, i, j) = diff.expect("difference found");
                (format!("entry ({i}, {j}) of {m} differs from the reduction"), json!({ "matrix": m, "row": i, "col": j }))
            });
        }
    } else {
        tally.record(
            "reduction_metadata",
            Err(("game carries no reduction metadata".into(), Value::Null)),
        );
    }
    equilibrium_checks(&mut tally, &mut report, game, red.as_ref())?;
    tally.into_report(&mut report);
    Ok(report.finish())
}

fn first_difference(want: &BimatrixGame, got: &BimatrixGame) -> Option<(&'static str, usize, usize)> {
    if want.a.shape() != got.a.shape() {
        return Some(("A", want.rows(), want.cols()));
    }
    for (name, w, g) in [("A", &want.a, &got.a), ("B", &want.b, &got.b)] {
        for i in 0..w.rows() {
            for j in 0..w.cols() {
                if w[(i, j)] != g[(i, j)] {
                    return Some((name, i, j));
                }
            }
        }
    }
    if want.meta != got.meta {
        return Some(("meta", 0, 0));
    }
    None
}

#[derive(Debug, Clone, Copy)]
pub struct LemmaOptions {
    pub seed: u64,
    /// Random parameter vectors for the LP checks.
    pub lambda_trials: usize,
    /// Random `(z, q)` pairs for the semimonotonicity check.
    pub semimonotone_trials: usize,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions {
            seed: 0,
            lambda_trials: 10,
            semimonotone_trials: 1000,
        }
    }
}

/// A random nonnegative nonzero vector with roughly half its entries zero.
pub fn random_nonzero_nonnegative<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> RatVector {
    let hi = Rational::integer(3);
    loop {
        let z: RatVector = (0..dim)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Rational::zero()
                } else {
                    random_rational_in(rng, &Rational::zero(), &hi, 7)
                }
            })
            .collect();
        if !z.is_zero() {
            return z;
        }
    }
}

/// A random vector with entries in `(0, 3]`.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> RatVector {
    (0..dim)
        .map(|_| {
            let den = rng.gen_range(1..=7i64);
            Rational::new(rng.gen_range(1..=3 * den), den)
        })
        .collect()
}

/// `(alpha x, beta y)` with `beta pi1 = alpha pi2`: the symmetric profile of
/// `[[0, A], [B^T, 0]]` induced by an equilibrium of `(A, B)`, when the two
/// payoffs share a sign.
pub fn symmetrized_profile(p: &Profile, pi1: &Rational, pi2: &Rational) -> Option<RatVector> {
    let total = pi1 + pi2;
    let (alpha, beta) = if pi1.is_zero() && pi2.is_zero() {
        (Rational::new(1, 2), Rational::new(1, 2))
    } else if total.is_zero() || (pi1.is_positive() && pi2.is_negative()) || (pi1.is_negative() && pi2.is_positive()) {
        return None;
    } else {
        ((pi1 / &total), (pi2 / &total))
    };
    Some(p.x.scale(&alpha).iter().chain(p.y.scale(&beta).iter()).cloned().collect())
}

/// LP, KKT, structural, semimonotonicity and path-agreement checks for the
/// reduction of `circuit`.
pub fn lemmas_circuit(circuit: &FixpCircuit, opts: &LemmaOptions) -> Result<VerifyReport, Error> {
    let red = Reduction::from_circuit(circuit)?;
    let mut report = VerifyReport::new("lemmas");
    let mut tally = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let k = red.lp.k();

    let props = red.lp.check_properties();
    tally.ok("lp_properties", props.is_ok(), || {
        (props.as_ref().err().map(ToString::to_string).unwrap_or_default(), Value::Null)
    });

    for _ in 0..opts.lambda_trials {
        let lambda = random_lambda(&mut rng, k);
        let x = red.lp.solve(&lambda)?;
        let trace = red.circuit.evaluate_trace(&lambda)?;
        let mismatch = red
            .lp
            .max_gates()
            .iter()
            .enumerate()
            .find(|&(i, &g)| x[i] != trace.trace[g])
            .map(|(i, _)| i);
        let w = || json!({ "lambda": to_value(&lambda) });
        tally.ok("lp_matches_circuit", mismatch.is_none(), || {
            (format!("LP row {} differs from its max gate", mismatch.unwrap_or(0)), w())
        });
        let flp = red.lp.eval_flp(&lambda)?;
        tally.ok("flp_matches_circuit", flp == trace.outputs, || {
            (format!("F^lp = {flp} but F = {}", trace.outputs), w())
        });
        let y = red.lp.construct_dual(&x)?;
        let v = red.lp.check_kkt(&lambda, &x, &y)?;
        tally.ok("kkt", v.is_empty(), || (format!("violations {v:?}"), w()));
        let above = (0..y.dim()).find(|&i| y[i] > red.lp.beta()[i]);
        tally.ok("dual_below_beta", above.is_none(), || {
            (format!("y[{}] exceeds beta", above.unwrap_or(0)), w())
        });
    }

    if let Some(meta) = &red.game.meta {
        structure_checks(&mut tally, &red.game, meta)?;
    }

    let dim = red.lcp()?.dim();
    for _ in 0..opts.semimonotone_trials {
        let z = random_nonzero_nonnegative(&mut rng, dim);
        let q = random_positive(&mut rng, dim);
        let r = semimonotone_witness(&red.system, &z, &q);
        tally.ok("semimonotone", r.is_ok(), || {
            (
                r.as_ref().err().map(ToString::to_string).unwrap_or_default(),
                json!({ "z": to_value(&z), "q": to_value(&q) }),
            )
        });
    }

    let rank_ne = enumerate_ne(&red.game)?;
    let meta = red.game.meta.clone().expect("reduction games carry metadata");
    let mut from_rank: Vec<RatVector> = rank_ne
        .equilibria
        .iter()
        .filter_map(|c| game_to_fixed_point(&c.profile, &meta).ok())
        .collect();
    let sym = red.symmetric()?;
    let sym_ne = enumerate_symmetric_ne(&sym.s)?;
    let sym_meta = sym.meta.clone().expect("reduction games carry metadata");
    let mut from_sym: Vec<RatVector> = sym_ne
        .equilibria
        .iter()
        .filter_map(|c| crate::lcp_game::symmetric_to_fixed_point(&c.x, &sym_meta).ok())
        .collect();
    for v in [&mut from_rank, &mut from_sym] {
        v.sort();
        v.dedup();
    }
    tally.ok("symmetric_agreement", from_rank == from_sym, || {
        (
            "rank game and symmetric game give different fixed points".into(),
            json!({ "rank": to_value(&from_rank), "symmetric": to_value(&from_sym) }),
        )
    });
    let imit = enumerate_ne(&red.imitation()?)?;
    let mut ys: Vec<RatVector> = imit.equilibria.iter().map(|c| c.profile.y.clone()).collect();
    let mut xs: Vec<RatVector> = sym_ne.equilibria.iter().map(|c| c.x.clone()).collect();
    for v in [&mut ys, &mut xs] {
        v.sort();
        v.dedup();
    }
    tally.ok("imitation_agreement", ys == xs, || {
        (
            "imitation second-player strategies differ from the symmetric equilibria".into(),
            json!({ "imitation": to_value(&ys), "symmetric": to_value(&xs) }),
        )
    });

    let s = symmetrize(&red.game.a, &red.game.b)?;
    for (i, c) in rank_ne.equilibria.iter().enumerate() {
        let Some(z) = symmetrized_profile(&c.profile, &c.pi1, &c.pi2) else {
            continue;
        };
        let r = check_symmetric_ne(&s.s, &z)?;
        tally.ok("symmetrization_embedding", r.is_equilibrium(), || {
            (format!("embedded equilibrium {i} violates {:?}", r.violations), json!({ "z": to_value(&z) }))
        });
    }

    tally.into_report(&mut report);
    report.lambdas = from_rank;
    Ok(report.finish())
}

fn grid_restriction(tally: &mut Tally, cf: &CompiledFunction) -> Result<(), Error> {
    for p in cf.grid().points() {
        let want: RatVector = cf
            .source
            .discrete_map(&p)?
            .iter()
            .map(|&c| Rational::integer(c as i64) / &cf.scale)
            .collect();
        let at: Vec<Rational> = p.iter().map(|&c| Rational::integer(c as i64) / &cf.scale).collect();
        let got = cf.circuit.evaluate(&at)?;
        tally.ok("grid_restriction", got == want, || {
            (format!("F differs from the discrete map at {p:?}"), json!({ "point": p }))
        });
    }
    Ok(())
}

/// Compile `cb`, check it against the discrete map on the grid, locate an
/// approximate fixed point and extract a panchromatic simplex from it.
pub fn approx_brouwer(
    cb: &BoolCircuit,
    params: SamplingParams,
    shrink: bool,
) -> Result<VerifyReport, Error> {
    let mut report = VerifyReport::new("approx");
    let mut tally = Tally::default();
    let mut cf = compile(cb, params)?;
    if shrink {
        cf = shrink_range(&cf)?;
    }
    grid_restriction(&mut tally, &cf)?;
    let fixtures = brute_force_fixtures(cb)?;
    let mut found = None;
    for cube in &fixtures.cubes {
        if let Some(p) = locate_approx_fixed_point(&cf, cube)? {
            found = Some(p);
            break;
        }
    }
    tally.ok("approx_fixed_point_found", found.is_some(), || {
        ("no candidate met the approximation bound".into(), Value::Null)
    });
    if let Some(p) = found {
        let eps = approx_epsilon(&cf);
        let dist = RatVector::new(p.to_vec()).sub(&cf.circuit.evaluate(&p)?)?.inf_norm();
        match extract_panchromatic_simplex(&p, &cf) {
            Ok(ex) => {
                tally.record("sampling_extraction", Ok(()));
                let known = fixtures.contains_simplex(&ex.simplex);
                tally.ok("simplex_in_fixtures", known, || {
                    ("extracted simplex is not among the brute-force fixtures".into(), to_value(&ex.simplex))
                });
                report.extraction = Some(json!({
                    "point": to_value(&p),
                    "distance": to_value(&dist),
                    "eps": to_value(&eps),
                    "poor_count": ex.poor_count,
                    "increment_sum": to_value(&ex.increment_sum),
                    "increments_cancel": ex.increments_cancel(),
                    "simplex": to_value(&ex.simplex),
                }));
            }
            Err(e) => tally.record(
                "sampling_extraction",
                Err((e.to_string(), json!({ "point": to_value(&p) }))),
            ),
        }
    }
    tally.into_report(&mut report);
    Ok(report.finish())
}
