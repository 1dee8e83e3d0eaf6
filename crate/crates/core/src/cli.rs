//! The `vassterm` command line. [`run`] parses arguments and returns the exit
//! code together with the captured output.
//!
//! Exit codes: 0 Linear or success, 1 NotLinear or invalid certificate,
//! 2 UnsupportedStructure, 3 input error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::decision::{
    angelic_optimal_strategy, decide, demonic_optimal_strategy, validate_ranking_certificate, Evidence, Mode,
    RankingCertificate, Verdict, VerdictTag,
};
use crate::graph::{classify_structure, mec_decomposition, MecDecomposition};
use crate::model::{parse_model, Config, VassMdp};
use crate::models;
use crate::oracle::{increment_witnesses, MdStrategy, DEFAULT_STRATEGY_CAP};
use crate::rational::{format_rational, format_vector};
use crate::scheme::{build_scheme, NonnegCombination, SchemeBuilder, SchemeStrategy};
use crate::sim::{compile_script, estimate_statistics, ScriptedStrategy, SimConfig, SizeExpr, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_LINEAR: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Demonic,
    Angelic,
}

#[derive(Debug, Parser)]
#[command(name = "vassterm", version, about = "Termination complexity of VASS MDPs")]
pub struct Cli {
    /// Output encoding of reports.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Maximum number of worker threads for simulations.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether termination time is linear.
    Analyze {
        model: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Write the ranking certificate here when the verdict is Linear.
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    /// Check a ranking certificate against a model.
    Certify { model: PathBuf, certificate: PathBuf },
    /// Simulate a strategy over a grid of sizes and write CSV statistics.
    Simulate(SimulateArgs),
    /// Print the maximal end component decomposition.
    Mec { model: PathBuf },
    /// Enumerate MD strategies and print every distinct increment.
    Increments {
        model: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP)]
        cap: u64,
    },
    /// Print the scheme for a given n together with its constants.
    Scheme {
        model: PathBuf,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub model: PathBuf,
    /// md:<file> | scheme | script:<file> | angelic-opt | demonic-opt
    #[arg(long)]
    pub strategy: String,
    /// Comma-separated grid of sizes n.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    /// term>=EXPR or msafe=EXPR, e.g. term>=L^2, term>=n^1.5, msafe=8n.
    #[arg(long)]
    pub event: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    /// Censoring horizon as an expression in n.
    #[arg(long, default_value = "64n^2")]
    pub horizon: String,
    /// Start state id (default: first declared state, or p_1 for schemes).
    #[arg(long)]
    pub start_state: Option<String>,
    /// Initial value of every counter as an expression in n.
    #[arg(long, default_value = "n")]
    pub start_size: String,
    /// Fit the exponent on the whole grid instead of its largest half.
    #[arg(long)]
    pub fit_all: bool,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let started = Instant::now();
    let result = match &cli.command {
        Command::Analyze {
            model,
            mode,
            emit_certificate,
        } => cmd_analyze(model, *mode, emit_certificate.as_deref()),
        Command::Certify { model, certificate } => cmd_certify(model, certificate),
        Command::Simulate(args) => cmd_simulate(args, cli.jobs),
        Command::Mec { model } => cmd_mec(model),
        Command::Increments { model, cap } => cmd_increments(model, *cap),
        Command::Scheme { model, n } => cmd_scheme(model, *n),
    };
    match result {
        Ok((code, report)) => Outcome {
            code,
            stdout: render(&report, cli.format),
            stderr: format!("time: {:.3} ms\n", started.elapsed().as_secs_f64() * 1e3),
        },
        Err(message) => Outcome::input_error(message),
    }
}

/// Reads a model file; a missing path whose file stem names a shipped model
/// (`a1`, `a2`, `fig4`, `countdown`) loads that model instead.
pub fn load_model(path: &Path) -> Result<VassMdp, String> {
    match std::fs::read_to_string(path) {
        Ok(text) => parse_model(&text).map_err(|e| format!("{}: {e}", path.display())),
        Err(err) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            models::builtin(stem).ok_or_else(|| format!("{}: {err}", path.display()))
        }
    }
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Canonical => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            if let Value::Object(map) = report {
                for (k, v) in map {
                    render_entry(&mut out, k, v);
                }
            }
            out
        }
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render_entry(out: &mut String, key: &str, v: &Value) {
    if let Some(s) = scalar_text(v) {
        out.push_str(&format!("{key}: {s}\n"));
        return;
    }
    match v {
        Value::Array(items) => {
            let scalars: Option<Vec<String>> = items.iter().map(scalar_text).collect();
            match scalars {
                Some(s) => out.push_str(&format!("{key}: [{}]\n", s.join(", "))),
                None => {
                    for (i, item) in items.iter().enumerate() {
                        render_entry(out, &format!("{key}[{i}]"), item);
                    }
                }
            }
        }
        Value::Object(map) => {
            for (k, v2) in map {
                render_entry(out, &format!("{key}.{k}"), v2);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

fn set_of(model: &VassMdp, states: &[usize]) -> String {
    let ids: Vec<&str> = states.iter().map(|&s| model.state_id(s)).collect();
    format!("{{{}}}", ids.join(","))
}

fn certificate_json(cert: &RankingCertificate) -> Value {
    json!({
        "kind": "certificate",
        "w": cert.w.iter().map(format_rational).collect::<Vec<_>>(),
        "slack": format_rational(&cert.slack),
        "z": cert.potentials.iter().map(|(k, v)| (k.clone(), Value::String(format_rational(v)))).collect::<Map<_, _>>(),
    })
}

fn combination_json(model: &VassMdp, combo: &NonnegCombination) -> Value {
    json!({
        "kind": "combination",
        "a": combo.items.iter().map(|i| i.coefficient).collect::<Vec<_>>(),
        "sum": format_vector(&combo.weighted_sum()),
        "items": combo.items.iter().map(|i| json!({
            "a": i.coefficient,
            "j": format_vector(&i.value),
            "bscc": set_of(model, &i.bscc),
            "strategy": i.strategy.describe(model),
        })).collect::<Vec<_>>(),
    })
}

fn evidence_json(model: &VassMdp, decomp: &MecDecomposition, evidence: &Evidence) -> Value {
    match evidence {
        Evidence::Certificate(c) => certificate_json(c),
        Evidence::Combination(c) => combination_json(model, c),
        Evidence::CounterPayoffs(ps) => json!({
            "kind": "min_mean_payoff",
            "counters": ps.iter().enumerate().map(|(k, p)| json!({
                "counter": k + 1,
                "value": format_rational(&p.value),
            })).collect::<Vec<_>>(),
        }),
        Evidence::Cycle(cycle) => json!({
            "kind": "mec_cycle",
            "cycle": cycle.iter().map(|&m| decomp.describe_mec(model, m)).collect::<Vec<_>>().join(" -> "),
        }),
        Evidence::PerMec => json!({ "kind": "per_mec" }),
    }
}

fn complexity(v: &Verdict) -> &'static str {
    match (v.tag, v.mode) {
        (VerdictTag::Linear, _) => "Θ(n)",
        (VerdictTag::NotLinear, Mode::Demonic) => "Ω(n²)",
        (VerdictTag::NotLinear, Mode::Angelic) => "not O(n)",
        (VerdictTag::UnsupportedStructure, _) => "undecided",
    }
}

/// The structured analysis report.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub model: String,
    pub digest: String,
    pub mode: String,
    pub structure: String,
    pub verdict: String,
    pub complexity: String,
    pub evidence: Value,
    pub certificate_path: Option<String>,
    pub mecs: Vec<Value>,
}

pub fn analysis_report(model: &VassMdp, name: &str, verdict: &Verdict) -> AnalysisReport {
    let decomp = mec_decomposition(model);
    let mecs = verdict
        .per_mec
        .iter()
        .map(|m| {
            let sub = model.restrict(&decomp.mecs[m.mec]).model;
            json!({
                "mec": m.mec,
                "states": format!("{{{}}}", m.states.join(",")),
                "verdict": m.verdict.tag.to_string(),
                "evidence": evidence_json(&sub, &decomp, &m.verdict.evidence),
            })
        })
        .collect();
    AnalysisReport {
        model: name.to_string(),
        digest: model.digest(),
        mode: verdict.mode.to_string(),
        structure: verdict.structure.to_string(),
        verdict: verdict.tag.to_string(),
        complexity: complexity(verdict).to_string(),
        evidence: evidence_json(model, &decomp, &verdict.evidence),
        certificate_path: None,
        mecs,
    }
}

fn exit_for(tag: VerdictTag) -> i32 {
    match tag {
        VerdictTag::Linear => EXIT_OK,
        VerdictTag::NotLinear => EXIT_NOT_LINEAR,
        VerdictTag::UnsupportedStructure => EXIT_UNSUPPORTED,
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

type CmdResult = Result<(i32, Value), String>;

fn cmd_analyze(path: &Path, mode: ModeArg, emit: Option<&Path>) -> CmdResult {
    let model = load_model(path)?;
    let mode = match mode {
        ModeArg::Demonic => Mode::Demonic,
        ModeArg::Angelic => Mode::Angelic,
    };
    let verdict = decide(&model, mode);
    let mut report = analysis_report(&model, &path.display().to_string(), &verdict);
    if let Some(out) = emit {
        if verdict.tag == VerdictTag::Linear {
            // whole-model certificate, or one file per MEC for DAG-like models
            if let Evidence::Certificate(c) = &verdict.evidence {
                write_file(out, &c.to_json())?;
                report.certificate_path = Some(out.display().to_string());
            } else {
                let mut written = Vec::new();
                for m in &verdict.per_mec {
                    if let Evidence::Certificate(c) = &m.verdict.evidence {
                        let file = out.with_extension(format!("mec{}.json", m.mec));
                        write_file(&file, &c.to_json())?;
                        written.push(file.display().to_string());
                    }
                }
                if !written.is_empty() {
                    report.certificate_path = Some(written.join(", "));
                }
            }
        }
    }
    Ok((exit_for(verdict.tag), serde_json::to_value(report).expect("report serializes")))
}

fn cmd_certify(model_path: &Path, cert_path: &Path) -> CmdResult {
    let model = load_model(model_path)?;
    let text = std::fs::read_to_string(cert_path).map_err(|e| format!("{}: {e}", cert_path.display()))?;
    let cert = RankingCertificate::from_json(&text).map_err(|e| format!("{}: {e}", cert_path.display()))?;
    Ok(match validate_ranking_certificate(&model, &cert) {
        Ok(()) => (
            EXIT_OK,
            json!({ "model": model_path.display().to_string(), "certificate": "valid" }),
        ),
        Err(v) => (
            EXIT_NOT_LINEAR,
            json!({
                "model": model_path.display().to_string(),
                "certificate": "invalid",
                "violation": v.to_string(),
            }),
        ),
    })
}

fn cmd_mec(path: &Path) -> CmdResult {
    let model = load_model(path)?;
    let d = mec_decomposition(&model);
    let class = classify_structure(&model, &d);
    let report = json!({
        "model": path.display().to_string(),
        "structure": class.tag.to_string(),
        "mecs": (0..d.mecs.len()).map(|m| d.describe_mec(&model, m)).collect::<Vec<_>>(),
        "transient": set_of(&model, &d.transient),
        "edges": d.mec_graph.iter().map(|(a, b)| format!("{a} -> {b}")).collect::<Vec<_>>(),
        "self_reentrant": d.self_reentrant.iter().copied().collect::<Vec<_>>(),
        "bottom": class.bottom,
        "cycle": class.cycle.as_ref().map(|c| c.iter().map(|&m| d.describe_mec(&model, m)).collect::<Vec<_>>().join(" -> ")),
    });
    Ok((EXIT_OK, report))
}

fn cmd_increments(path: &Path, cap: u64) -> CmdResult {
    let model = load_model(path)?;
    let incs = increment_witnesses(&model, cap).map_err(|e| e.to_string())?;
    let report = json!({
        "model": path.display().to_string(),
        "count": incs.len(),
        "increments": incs.iter().map(|i| json!({
            "value": format_vector(&i.value),
            "bscc": set_of(&model, &i.bscc),
            "strategy": i.strategy.describe(&model),
        })).collect::<Vec<_>>(),
    });
    Ok((EXIT_OK, report))
}

fn cmd_scheme(path: &Path, n: u64) -> CmdResult {
    let model = load_model(path)?;
    let builder = SchemeBuilder::for_model(&model).map_err(|e| e.to_string())?;
    let scheme = build_scheme(&builder.combination, &builder.constants, n).map_err(|e| e.to_string())?;
    let c = &builder.constants;
    let report = json!({
        "model": path.display().to_string(),
        "combination": combination_json(&model, &builder.combination),
        "anchors": c.anchors.iter().map(|&s| model.state_id(s).to_string()).collect::<Vec<_>>(),
        "constants": {
            "xi": format_rational(&c.xi),
            "min_update": c.min_update,
            "x_min": format_rational(&c.x_min),
            "lambda": format_rational(&c.lambda),
            "denominator": c.denominator,
        },
        "n": n,
        "length": scheme.length,
        "cycle": scheme.cycle_skeleton(),
        "increment_steps": scheme.increment_steps(),
        "switches": scheme.switch_count(),
    });
    Ok((EXIT_OK, report))
}

fn read_md_strategy(model: &VassMdp, path: &Path) -> Result<MdStrategy, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let map: BTreeMap<String, String> =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut strategy = MdStrategy {
        choice: vec![None; model.num_states()],
    };
    for (from, to) in &map {
        let s = model.state_index(from).ok_or_else(|| format!("unknown state {from}"))?;
        let t = model.state_index(to).ok_or_else(|| format!("unknown state {to}"))?;
        let tr = model
            .outgoing(s)
            .iter()
            .copied()
            .find(|&x| model.transition(x).target == t)
            .ok_or_else(|| format!("no transition from {from} to {to}"))?;
        strategy.choice[s] = Some(tr);
    }
    if let Some(s) = model.nondeterministic_states().find(|&s| strategy.choice[s].is_none()) {
        return Err(format!("MD strategy has no choice for state {}", model.state_id(s)));
    }
    Ok(strategy)
}

fn cmd_simulate(args: &SimulateArgs, jobs: Option<usize>) -> CmdResult {
    let model = load_model(&args.model)?;
    let horizon: SizeExpr = args.horizon.parse().map_err(|e: crate::sim::event::ExprError| e.to_string())?;
    let size: SizeExpr = args.start_size.parse().map_err(|e: crate::sim::event::ExprError| e.to_string())?;
    let event = args
        .event
        .as_deref()
        .map(str::parse)
        .transpose()
        .map_err(|e: crate::sim::event::ExprError| e.to_string())?;
    let named_start = args
        .start_state
        .as_deref()
        .map(|id| model.state_index(id).ok_or_else(|| format!("unknown start state {id}")))
        .transpose()?;
    let start_for = |state: usize, n: u64, length: Option<u64>| -> Result<Config, String> {
        let v = size.eval_floor(n, length).map_err(|e| e.to_string())? as i64;
        Ok(Config::uniform(state, model.dimension(), v))
    };
    let mut cfg = SimConfig::new(args.n.clone(), args.trials, args.seed);
    cfg.horizon = horizon;
    cfg.event = event;
    cfg.jobs = jobs;

    let strategy_name = args.strategy.as_str();
    let stats = if strategy_name == "scheme" {
        let builder = SchemeBuilder::for_model(&model).map_err(|e| e.to_string())?;
        cfg.scheme_denominator = Some(builder.constants.denominator);
        let state = named_start.unwrap_or(builder.constants.anchors[0]);
        let mut plans = BTreeMap::new();
        for &n in &args.n {
            plans.insert(n, builder.plan(&model, n).map_err(|e| e.to_string())?.1);
        }
        let starts: BTreeMap<u64, Config> = args
            .n
            .iter()
            .map(|&n| Ok((n, start_for(state, n, cfg.length(n))?)))
            .collect::<Result<_, String>>()?;
        let factory = |n: u64| -> Result<(Box<dyn Strategy>, Config), String> {
            Ok((Box::new(SchemeStrategy::new(Arc::clone(&plans[&n]))), starts[&n].clone()))
        };
        estimate_statistics(&model, &factory, &cfg)
    } else {
        let state = named_start.unwrap_or(0);
        let starts: BTreeMap<u64, Config> = args
            .n
            .iter()
            .map(|&n| Ok((n, start_for(state, n, None)?)))
            .collect::<Result<_, String>>()?;
        if let Some(file) = strategy_name.strip_prefix("script:") {
            let text = std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?;
            let script = ScriptedStrategy::parse(&text).map_err(|e| e.to_string())?;
            let compiled = compile_script(&model, &script).map_err(|e| e.to_string())?;
            let factory = |n: u64| -> Result<(Box<dyn Strategy>, Config), String> {
                Ok((Box::new(compiled.clone()), starts[&n].clone()))
            };
            estimate_statistics(&model, &factory, &cfg)
        } else {
            let md = match strategy_name {
                "demonic-opt" => demonic_optimal_strategy(&model).map_err(|e| e.to_string())?,
                "angelic-opt" => angelic_optimal_strategy(&model).map_err(|e| e.to_string())?,
                other => match other.strip_prefix("md:") {
                    Some(file) => read_md_strategy(&model, Path::new(file))?,
                    None => return Err(format!("unknown strategy {other:?}")),
                },
            };
            let factory = |n: u64| -> Result<(Box<dyn Strategy>, Config), String> {
                Ok((Box::new(md.clone()), starts[&n].clone()))
            };
            estimate_statistics(&model, &factory, &cfg)
        }
    }
    .map_err(|e| e.to_string())?;

    write_file(&args.out, &stats.to_csv())?;
    let exponent = if args.fit_all {
        crate::sim::fit_exponent(&stats.points())
    } else {
        stats.fitted_exponent()
    };
    let report = json!({
        "model": args.model.display().to_string(),
        "strategy": args.strategy,
        "seed": args.seed,
        "trials": args.trials,
        "horizon": stats.horizon,
        "rows": stats.rows.len(),
        "csv": args.out.display().to_string(),
        "exponent": exponent.map(|e| format!("{e:.4}")).ok(),
        "event": stats.event,
        "event_freq": stats.rows.iter().filter_map(|r| r.event_freq).map(|f| format!("{f:.4}")).collect::<Vec<_>>(),
        "event_trend_nondecreasing": stats.event_trend_nondecreasing(),
    });
    Ok((EXIT_OK, report))
}
