//! Command-line driver: every stage reads and writes versioned JSON documents.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use nashforge::brouwer::{
    brute_force_fixtures, make_example_coloring, validate_circuit, BoolCircuit, Grid,
};
use nashforge::compiler::{compile, shrink_range, SamplingParams};
use nashforge::exactmath::{RatVector, Rational};
use nashforge::fixp::{examples, FixpCircuit};
use nashforge::formats::{
    from_document, ne_entries, peek_kind, to_document, ArtifactKind, NeReportDoc,
};
use nashforge::lcp_game::{symmetrize, BimatrixGame, GameKind};
use nashforge::nash::{enumerate_ne, lemke_howson, NeCertificate};
use nashforge::pipeline::Reduction;
use nashforge::verify::{
    approx_brouwer, lemmas_circuit, roundtrip_circuit, verify_game, LemmaOptions, VerifyReport,
};

const EXIT_INTERNAL: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_ALARM: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nashforge",
    version,
    about = "Exact Brouwer / Linear-FIXP / game reductions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a Brouwer mapping circuit into a Linear-FIXP circuit.
    Compile {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Metadata sidecar; defaults to `<output>.meta.json`.
        #[arg(long)]
        meta: Option<PathBuf>,
        /// Rescale domain and range to the unit cube.
        #[arg(long)]
        shrink: bool,
        /// Sample spacing denominator; a power of two.
        #[arg(long = "L")]
        l: Option<u64>,
        /// Also check the compiled function against the discrete map on
        /// every grid point.
        #[arg(long)]
        check: bool,
    },
    /// Build an LP, LCP or game from a Linear-FIXP circuit.
    Reduce {
        input: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a check battery and print a PASS/FAIL report.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "roundtrip")]
        mode: Mode,
        /// Source circuit, for checking a game document against it.
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random parameter vectors for the LP checks.
        #[arg(long, default_value_t = 10)]
        lambda_trials: usize,
        /// Random pairs for the semimonotonicity check.
        #[arg(long, default_value_t = 1000)]
        semimonotone_trials: usize,
        /// Approx mode: shrink the compiled range.
        #[arg(long)]
        shrink: bool,
        #[arg(long = "L")]
        l: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute equilibria of a game.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "enumerate")]
        method: Method,
        /// Dropped label for Lemke-Howson, 0-based.
        #[arg(long, default_value_t = 0)]
        label: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force panchromatic cubes and simplices of a Brouwer circuit.
    Oracle {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a Linear-FIXP circuit at a point.
    Eval {
        input: PathBuf,
        /// Comma-separated rationals, e.g. `1/2,1/3`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the stages listed in a pipeline manifest, in order.
    Run { manifest: PathBuf },
    /// Write a built-in example document.
    Fixture {
        #[command(subcommand)]
        which: FixtureKind,
    },
}

#[derive(Subcommand)]
enum FixtureKind {
    /// A valid Brouwer mapping circuit with a planted panchromatic cube.
    Brouwer {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A named Linear-FIXP circuit.
    Circuit {
        #[arg(long)]
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Target {
    Lp,
    Lcp,
    Game,
    Symmetric,
    Imitation,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Roundtrip,
    Lemmas,
    Approx,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Enumerate,
    Lh,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<nashforge::Error>() {
            Some(e) if e.is_lemma_alarm() => EXIT_ALARM,
            Some(e) if e.is_validation() => EXIT_VALIDATION,
            Some(_) => EXIT_INTERNAL,
            None if error.downcast_ref::<std::io::Error>().is_some() => EXIT_VALIDATION,
            None => EXIT_INTERNAL,
        };
        Failure { code, error }
    }
}

fn lib<T, E: Into<nashforge::Error>>(r: Result<T, E>) -> anyhow::Result<T> {
    r.map_err(|e| anyhow::Error::new(e.into()))
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_doc<T: serde::de::DeserializeOwned>(kind: ArtifactKind, path: &Path) -> anyhow::Result<T> {
    let text = read(path)?;
    lib(from_document(kind, &text)).with_context(|| format!("parsing {}", path.display()))
}

fn emit<T: Serialize>(kind: ArtifactKind, body: &T, output: Option<&Path>) -> anyhow::Result<()> {
    let text = lib(to_document(kind, body))?;
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_lambda(s: &str) -> anyhow::Result<Vec<Rational>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Rational>()
                .map_err(|e| anyhow::Error::new(nashforge::Error::from(e)))
        })
        .collect()
}

fn sampling_params(k: usize, l: Option<u64>) -> SamplingParams {
    let mut p = SamplingParams::default_for(k);
    if let Some(l) = l {
        p.l = l;
    }
    p
}

fn read_brouwer(path: &Path) -> Result<BoolCircuit, Failure> {
    let cb: BoolCircuit = read_doc(ArtifactKind::BrouwerCircuit, path)?;
    let report = lib(validate_circuit(&cb))?;
    if !report.is_valid() {
        eprintln!(
            "{}",
            serde_json::to_string_pretty(&report).unwrap_or_default()
        );
        return Err(Failure {
            code: EXIT_VALIDATION,
            error: anyhow!(
                "{} violates the boundary rules at {} points",
                path.display(),
                report.violations.len()
            ),
        });
    }
    Ok(cb)
}

fn cmd_compile(
    input: &Path,
    output: &Path,
    meta: Option<&Path>,
    shrink: bool,
    l: Option<u64>,
    check: bool,
) -> Result<(), Failure> {
    let cb = read_brouwer(input)?;
    let mut cf = lib(compile(&cb, sampling_params(cb.grid().k, l)))?;
    if shrink {
        cf = lib(shrink_range(&cf))?;
    }
    emit(ArtifactKind::Circuit, &cf.circuit, Some(output))?;
    let meta_path = meta
        .map(Path::to_path_buf)
        .unwrap_or_else(|| output.with_extension("meta.json"));
    emit(ArtifactKind::CompileMeta, &cf.meta(), Some(&meta_path))?;
    let mut summary = json!({
        "gates": cf.circuit.gates().len(),
        "size": cf.circuit.size(),
        "meta": meta_path.display().to_string(),
    });
    if check {
        let mut bad = Vec::new();
        for p in cf.grid().points() {
            let at: Vec<Rational> = p
                .iter()
                .map(|&c| Rational::integer(c as i64) / &cf.scale)
                .collect();
            let want: RatVector = lib(cb.discrete_map(&p))?
                .iter()
                .map(|&c| Rational::integer(c as i64) / &cf.scale)
                .collect();
            if lib(cf.circuit.evaluate(&at))? != want {
                bad.push(p);
            }
        }
        summary["grid_restriction"] = json!(if bad.is_empty() { "PASS" } else { "FAIL" });
        if !bad.is_empty() {
            summary["mismatches"] = json!(bad);
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).unwrap_or_default()
            );
            return Err(Failure {
                code: EXIT_ALARM,
                error: anyhow!("compiled function differs from the discrete map"),
            });
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).unwrap_or_default()
    );
    Ok(())
}

#[derive(Serialize)]
struct InvariantCheck {
    name: &'static str,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn invariant(name: &'static str, passed: bool, detail: Option<String>) -> InvariantCheck {
    InvariantCheck {
        name,
        passed,
        detail,
    }
}

fn cmd_reduce(input: &Path, target: Target, output: &Path) -> Result<(), Failure> {
    let circuit: FixpCircuit = read_doc(ArtifactKind::Circuit, input)?;
    let red = lib(Reduction::from_circuit(&circuit))?;
    let k = red.lp.k();
    let mut checks = Vec::new();
    let props = red.lp.check_properties();
    checks.push(invariant(
        "P1-P3",
        props.is_ok(),
        props.err().map(|e| e.to_string()),
    ));
    // Normalization asserts P4 and fails otherwise.
    checks.push(invariant("P4", true, None));
    let tri = lib(red.game.a.is_upper_triangular())?;
    checks.push(invariant("game_triangular", tri, None));
    let rank = red.game.rank();
    checks.push(invariant(
        "game_rank",
        rank <= k + 1,
        Some(format!("rank(A+B) = {rank}, bound k + 1 = {}", k + 1)),
    ));
    let sym = lib(symmetrize(&red.game.a, &red.game.b))?;
    let srank = lib(sym.s.add(&sym.s.transpose()))?.rank();
    checks.push(invariant(
        "symmetrized_rank",
        srank <= 2 * (k + 1),
        Some(format!(
            "rank(S+S^T) = {srank}, bound 2(k + 1) = {}",
            2 * (k + 1)
        )),
    ));
    let dims = match target {
        Target::Lp => {
            emit(ArtifactKind::ParamLp, &red.lp, Some(output))?;
            json!({ "m": red.lp.m(), "k": k, "n": red.lp.n() })
        }
        Target::Lcp => {
            let lcp = lib(red.lcp())?;
            emit(ArtifactKind::Lcp, &lcp, Some(output))?;
            json!({ "dim": lcp.dim() })
        }
        Target::Game => {
            emit(ArtifactKind::Game, &red.game, Some(output))?;
            json!({ "rows": red.game.rows(), "cols": red.game.cols() })
        }
        Target::Symmetric => {
            let g = lib(red.symmetric())?.to_bimatrix();
            emit(ArtifactKind::Game, &g, Some(output))?;
            json!({ "rows": g.rows(), "cols": g.cols() })
        }
        Target::Imitation => {
            let g = lib(red.imitation())?;
            emit(ArtifactKind::Game, &g, Some(output))?;
            json!({ "rows": g.rows(), "cols": g.cols() })
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    let report = json!({ "passed": passed, "dimensions": dims, "invariants": checks });
    emit(ArtifactKind::ReduceReport, &report, None)?;
    if !passed {
        return Err(Failure {
            code: EXIT_ALARM,
            error: anyhow!("an invariant of the reduction fails"),
        });
    }
    Ok(())
}

struct VerifyArgs<'a> {
    input: &'a Path,
    mode: Mode,
    circuit: Option<&'a Path>,
    opts: LemmaOptions,
    shrink: bool,
    l: Option<u64>,
}

fn cmd_verify(a: &VerifyArgs) -> Result<VerifyReport, Failure> {
    let text = read(a.input)?;
    let declared = lib(peek_kind(&text))?;
    let mode_name = match a.mode {
        Mode::Roundtrip => "roundtrip",
        Mode::Lemmas => "lemmas",
        Mode::Approx => "approx",
    };
    if a.mode == Mode::Approx {
        let cb = read_brouwer(a.input)?;
        let params = sampling_params(cb.grid().k, a.l);
        return Ok(lib(approx_brouwer(&cb, params, a.shrink))?);
    }
    let source = match a.circuit {
        Some(p) => Some(read_doc::<FixpCircuit>(ArtifactKind::Circuit, p)?),
        None => None,
    };
    let as_game = match declared {
        Some(ArtifactKind::Game) => true,
        Some(ArtifactKind::Circuit) => false,
        Some(other) => {
            return Err(Failure {
                code: EXIT_VALIDATION,
                error: anyhow!("cannot verify a {} document", other.name()),
            })
        }
        None => serde_json::from_str::<Value>(&text)
            .map(|v| v.get("A").is_some())
            .unwrap_or(false),
    };
    if as_game {
        let game: BimatrixGame = lib(from_document(ArtifactKind::Game, &text))?;
        let mut report = lib(verify_game(&game, source.as_ref(), mode_name))?;
        if a.mode == Mode::Lemmas {
            if let Some(c) = &source {
                let extra = lib(lemmas_circuit(c, &a.opts))?;
                report.checks.extend(extra.checks);
                report.passed = report.checks.iter().all(|c| c.passed);
            }
        }
        return Ok(report);
    }
    let circuit: FixpCircuit = lib(from_document(ArtifactKind::Circuit, &text))?;
    Ok(match a.mode {
        Mode::Roundtrip => lib(roundtrip_circuit(&circuit))?,
        _ => lib(lemmas_circuit(&circuit, &a.opts))?,
    })
}

fn verify_and_report(a: &VerifyArgs, output: Option<&Path>) -> Result<(), Failure> {
    let report = cmd_verify(a)?;
    emit(ArtifactKind::VerifyReport, &report, output)?;
    for c in report.failures() {
        eprintln!("FAIL {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
    }
    if !report.passed {
        return Err(Failure {
            code: EXIT_ALARM,
            error: anyhow!("verification failed"),
        });
    }
    Ok(())
}

fn ne_report(game: &BimatrixGame, certs: &[NeCertificate], degenerate: bool) -> NeReportDoc {
    NeReportDoc {
        degenerate,
        equilibria: ne_entries(game, certs),
    }
}

fn cmd_solve(
    input: &Path,
    method: Method,
    label: usize,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let game: BimatrixGame = read_doc(ArtifactKind::Game, input)?;
    let doc = match method {
        Method::Enumerate => {
            if game.meta.as_ref().map(|m| m.kind) == Some(GameKind::Symmetric) {
                let en = lib(nashforge::nash::enumerate_symmetric_ne(&game.a))?;
                let certs: Vec<NeCertificate> = en
                    .equilibria
                    .into_iter()
                    .map(|c| NeCertificate {
                        profile: nashforge::nash::Profile::new(c.x.clone(), c.x),
                        pi1: c.pi.clone(),
                        pi2: c.pi,
                        support_x: c.support.clone(),
                        support_y: c.support,
                    })
                    .collect();
                ne_report(&game, &certs, en.degenerate)
            } else {
                let en = lib(enumerate_ne(&game))?;
                ne_report(&game, &en.equilibria, en.degenerate)
            }
        }
        Method::Lh => {
            let c = lib(lemke_howson(&game, label))?;
            ne_report(&game, &[c], false)
        }
    };
    emit(ArtifactKind::NeReport, &doc, output)?;
    Ok(())
}

fn cmd_oracle(input: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let cb = read_brouwer(input)?;
    let f = lib(brute_force_fixtures(&cb))?;
    emit(ArtifactKind::Fixtures, &f, output)?;
    Ok(())
}

fn cmd_eval(input: &Path, lambda: &str, output: Option<&Path>) -> Result<(), Failure> {
    let circuit: FixpCircuit = read_doc(ArtifactKind::Circuit, input)?;
    let lambda = parse_lambda(lambda)?;
    let out = lib(circuit.evaluate(&lambda))?;
    let fixed = out[..] == lambda[..];
    let doc = json!({ "lambda": lambda, "outputs": out, "fixed_point": fixed });
    emit(ArtifactKind::Evaluation, &doc, output)?;
    Ok(())
}

fn cmd_fixture(which: &FixtureKind) -> Result<(), Failure> {
    match which {
        FixtureKind::Brouwer { k, n, output } => {
            let inst = lib(make_example_coloring(lib(Grid::new(*k, *n))?))?;
            emit(
                ArtifactKind::BrouwerCircuit,
                &inst.circuit,
                output.as_deref(),
            )?;
        }
        FixtureKind::Circuit { name, output } => {
            let Some(c) = examples::named(name) else {
                return Err(Failure {
                    code: EXIT_VALIDATION,
                    error: anyhow!(
                        "unknown circuit {name:?}; known: {}",
                        examples::NAMES.join(", ")
                    ),
                });
            };
            emit(ArtifactKind::Circuit, &c, output.as_deref())?;
        }
    }
    Ok(())
}

fn default_lambda_trials() -> usize {
    10
}

fn default_semimonotone_trials() -> usize {
    1000
}

/// One stage of a pipeline manifest; paths are relative to the manifest.
#[derive(Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Stage {
    Compile {
        input: PathBuf,
        output: PathBuf,
        meta: Option<PathBuf>,
        #[serde(default)]
        shrink: bool,
        #[serde(rename = "L")]
        l: Option<u64>,
        #[serde(default)]
        check: bool,
    },
    Reduce {
        input: PathBuf,
        target: Target,
        output: PathBuf,
    },
    Verify {
        input: PathBuf,
        #[serde(default = "default_mode")]
        mode: Mode,
        circuit: Option<PathBuf>,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_lambda_trials")]
        lambda_trials: usize,
        #[serde(default = "default_semimonotone_trials")]
        semimonotone_trials: usize,
        #[serde(default)]
        shrink: bool,
        #[serde(rename = "L")]
        l: Option<u64>,
        output: Option<PathBuf>,
    },
    Solve {
        input: PathBuf,
        #[serde(default = "default_method")]
        method: Method,
        #[serde(default)]
        label: usize,
        output: Option<PathBuf>,
    },
    Oracle {
        input: PathBuf,
        output: Option<PathBuf>,
    },
    Eval {
        input: PathBuf,
        lambda: String,
        output: Option<PathBuf>,
    },
}

fn default_mode() -> Mode {
    Mode::Roundtrip
}

fn default_method() -> Method {
    Method::Enumerate
}

#[derive(Deserialize)]
struct Manifest {
    stages: Vec<Stage>,
}

impl Stage {
    fn name(&self) -> &'static str {
        match self {
            Stage::Compile { .. } => "compile",
            Stage::Reduce { .. } => "reduce",
            Stage::Verify { .. } => "verify",
            Stage::Solve { .. } => "solve",
            Stage::Oracle { .. } => "oracle",
            Stage::Eval { .. } => "eval",
        }
    }

    fn input(&self) -> &Path {
        match self {
            Stage::Compile { input, .. }
            | Stage::Reduce { input, .. }
            | Stage::Verify { input, .. }
            | Stage::Solve { input, .. }
            | Stage::Oracle { input, .. }
            | Stage::Eval { input, .. } => input,
        }
    }

    fn output(&self) -> Option<&Path> {
        match self {
            Stage::Compile { output, .. } | Stage::Reduce { output, .. } => Some(output),
            Stage::Verify { output, .. }
            | Stage::Solve { output, .. }
            | Stage::Oracle { output, .. }
            | Stage::Eval { output, .. } => output.as_deref(),
        }
    }

    fn accepts(&self) -> &'static [ArtifactKind] {
        use ArtifactKind as K;
        match self {
            Stage::Compile { .. } | Stage::Oracle { .. } => &[K::BrouwerCircuit],
            Stage::Verify {
                mode: Mode::Approx, ..
            } => &[K::BrouwerCircuit],
            Stage::Verify { .. } => &[K::Game, K::Circuit],
            Stage::Reduce { .. } | Stage::Eval { .. } => &[K::Circuit],
            Stage::Solve { .. } => &[K::Game],
        }
    }

    fn produces(&self) -> ArtifactKind {
        use ArtifactKind as K;
        match self {
            Stage::Compile { .. } => K::Circuit,
            Stage::Reduce {
                target: Target::Lp, ..
            } => K::ParamLp,
            Stage::Reduce {
                target: Target::Lcp,
                ..
            } => K::Lcp,
            Stage::Reduce { .. } => K::Game,
            Stage::Verify { .. } => K::VerifyReport,
            Stage::Solve { .. } => K::NeReport,
            Stage::Oracle { .. } => K::Fixtures,
            Stage::Eval { .. } => K::Evaluation,
        }
    }
}

/// Every stage after the first must read a file written by an earlier
/// stage, of a kind it accepts.
fn check_chain(stages: &[Stage]) -> anyhow::Result<()> {
    if stages.is_empty() {
        return Err(anyhow!("the manifest lists no stages"));
    }
    for (i, st) in stages.iter().enumerate().skip(1) {
        let upstream = stages[..i]
            .iter()
            .rev()
            .find(|u| u.output() == Some(st.input()))
            .ok_or_else(|| {
                anyhow!(
                    "stage {i} ({}) reads {}, which no earlier stage writes",
                    st.name(),
                    st.input().display()
                )
            })?;
        if !st.accepts().contains(&upstream.produces()) {
            return Err(anyhow!(
                "stage {i} ({}) cannot read the {} written by {}",
                st.name(),
                upstream.produces().name(),
                upstream.name()
            ));
        }
    }
    Ok(())
}

fn cmd_run(manifest: &Path) -> Result<(), Failure> {
    let text = read(manifest)?;
    let m: Manifest = serde_json::from_str(&text)
        .map_err(|e| validation(anyhow!("parsing {}: {e}", manifest.display())))?;
    check_chain(&m.stages).map_err(validation)?;
    let base = manifest.parent().unwrap_or(Path::new(""));
    let at = |p: &Path| base.join(p);
    let opt = |p: &Option<PathBuf>| p.as_deref().map(at);
    for (i, st) in m.stages.iter().enumerate() {
        eprintln!("stage {i}: {}", st.name());
        match st {
            Stage::Compile {
                input,
                output,
                meta,
                shrink,
                l,
                check,
            } => cmd_compile(
                &at(input),
                &at(output),
                opt(meta).as_deref(),
                *shrink,
                *l,
                *check,
            )?,
            Stage::Reduce {
                input,
                target,
                output,
            } => cmd_reduce(&at(input), *target, &at(output))?,
            Stage::Verify {
                input,
                mode,
                circuit,
                seed,
                lambda_trials,
                semimonotone_trials,
                shrink,
                l,
                output,
            } => {
                let input = at(input);
                let circuit = opt(circuit);
                let args = VerifyArgs {
                    input: &input,
                    mode: *mode,
                    circuit: circuit.as_deref(),
                    opts: LemmaOptions {
                        seed: *seed,
                        lambda_trials: *lambda_trials,
                        semimonotone_trials: *semimonotone_trials,
                    },
                    shrink: *shrink,
                    l: *l,
                };
                verify_and_report(&args, opt(output).as_deref())?
            }
            Stage::Solve {
                input,
                method,
                label,
                output,
            } => cmd_solve(&at(input), *method, *label, opt(output).as_deref())?,
            Stage::Oracle { input, output } => cmd_oracle(&at(input), opt(output).as_deref())?,
            Stage::Eval {
                input,
                lambda,
                output,
            } => cmd_eval(&at(input), lambda, opt(output).as_deref())?,
        }
    }
    Ok(())
}

fn validation(error: anyhow::Error) -> Failure {
    Failure {
        code: EXIT_VALIDATION,
        error,
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compile {
            input,
            output,
            meta,
            shrink,
            l,
            check,
        } => cmd_compile(&input, &output, meta.as_deref(), shrink, l, check),
        Command::Reduce {
            input,
            target,
            output,
        } => cmd_reduce(&input, target, &output),
        Command::Verify {
            input,
            mode,
            circuit,
            seed,
            lambda_trials,
            semimonotone_trials,
            shrink,
            l,
            output,
        } => {
            let args = VerifyArgs {
                input: &input,
                mode,
                circuit: circuit.as_deref(),
                opts: LemmaOptions {
                    seed,
                    lambda_trials,
                    semimonotone_trials,
                },
                shrink,
                l,
            };
            verify_and_report(&args, output.as_deref())
        }
        Command::Solve {
            input,
            method,
            label,
            output,
        } => cmd_solve(&input, method, label, output.as_deref()),
        Command::Oracle { input, output } => cmd_oracle(&input, output.as_deref()),
        Command::Eval {
            input,
            lambda,
            output,
        } => cmd_eval(&input, &lambda, output.as_deref()),
        Command::Run { manifest } => cmd_run(&manifest),
        Command::Fixture { which } => cmd_fixture(&which),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_lists_parse() {
        let l = parse_lambda("1/2, -3,0").unwrap();
        assert_eq!(
            l,
            vec![Rational::new(1, 2), Rational::integer(-3), Rational::zero()]
        );
        assert!(parse_lambda("x").is_err());
    }

    fn stages(text: &str) -> Vec<Stage> {
        serde_json::from_str::<Manifest>(text).unwrap().stages
    }

    #[test]
    fn manifest_chain_is_checked() {
        let ok = stages(
            r#"{"stages":[
                {"command":"reduce","input":"c.json","target":"game","output":"g.json"},
                {"command":"solve","input":"g.json"},
                {"command":"verify","input":"g.json","circuit":"c.json"}]}"#,
        );
        assert!(check_chain(&ok).is_ok());
        let dangling = stages(
            r#"{"stages":[
                {"command":"reduce","input":"c.json","target":"game","output":"g.json"},
                {"command":"solve","input":"other.json"}]}"#,
        );
        assert!(check_chain(&dangling)
            .unwrap_err()
            .to_string()
            .contains("no earlier stage"));
        let wrong = stages(
            r#"{"stages":[
                {"command":"reduce","input":"c.json","target":"lp","output":"lp.json"},
                {"command":"solve","input":"lp.json"}]}"#,
        );
        assert!(check_chain(&wrong)
            .unwrap_err()
            .to_string()
            .contains("param_lp"));
        assert!(check_chain(&[]).is_err());
    }

    #[test]
    fn exit_codes_follow_error_classes() {
        let alarm = anyhow::Error::new(nashforge::Error::LcpGame(
            nashforge::lcp_game::LcpGameError::LemmaFalsified("s = 0".into()),
        ));
        assert_eq!(Failure::from(alarm).code, EXIT_ALARM);
        let bad = anyhow::Error::new(nashforge::Error::Brouwer(
            nashforge::brouwer::BrouwerError::BadGrid { k: 0, n: 0 },
        ));
        assert_eq!(Failure::from(bad).code, EXIT_VALIDATION);
        assert_eq!(Failure::from(anyhow!("other")).code, EXIT_INTERNAL);
    }
}
