//! Command-line front end. [`run`] takes the arguments and output streams
//! and returns the exit code: 0 success, 1 verification failure, 2 usage or
//! input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dagcat::diagram::{to_dot, to_svg, DiagramJson};
use dagcat::distsem::{
    ingest_corpus, sentence_meaning, similarity, stored_vector, tokenize, tokenize_line,
    vector_store, ContextConfig, Lexicon, VectorStore,
};
use dagcat::dsl;
use dagcat::pregroup::{format_type, parse_type, reduce_to, Convention, SimpleType};
use dagcat::protocols::{
    bayes_invert, swapping_control, swapping_demo, teleportation_demo, Channel, Prior,
    ProtocolReport,
};
use dagcat::rewrite::{check_equal_by_rewriting, normalize, parse_rules, Ruleset, Verdict};
use dagcat::shipped;
use dagcat::tensor::{
    equal_tensors, interpret, AnyModel, CompareMode, Model, Semiring, TensorValue, DEFAULT_TOL,
};
use dagcat::{Diagram, Signature};

#[derive(Parser, Debug)]
#[command(name = "dagcat", version, about = "Typed string diagrams: rewrite, evaluate, render")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ModelOpt {
    /// Model JSON file, or the name of a shipped model
    /// (qubit, qutrit, relations, stochastic).
    #[arg(long)]
    model: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct RewriteOpts {
    /// Extra rules (JSON list) on top of the built-in ones.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Rewrite step budget.
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a diagram file and summarise it.
    Parse {
        file: PathBuf,
        #[command(flatten)]
        model: ModelOpt,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a diagram to normal form.
    Normalize {
        file: PathBuf,
        #[command(flatten)]
        model: ModelOpt,
        #[command(flatten)]
        rewrite: RewriteOpts,
        /// Write the normal form as diagram JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a diagram as a tensor, optionally comparing with another.
    Eval {
        file: PathBuf,
        #[command(flatten)]
        model: ModelOpt,
        /// Compare against this diagram.
        #[arg(long)]
        against: Option<PathBuf>,
        /// Compare up to a nonzero scalar.
        #[arg(long)]
        up_to_scalar: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Decide equality of two diagrams by rewriting (and by tensors when a
    /// model is given).
    CheckEq {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        model: ModelOpt,
        #[command(flatten)]
        rewrite: RewriteOpts,
        #[arg(long)]
        json: bool,
    },
    /// Render a diagram as Graphviz DOT or SVG.
    Render {
        file: PathBuf,
        #[command(flatten)]
        model: ModelOpt,
        #[arg(short, long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pregroup grammar tools.
    Grammar {
        #[command(subcommand)]
        command: GrammarCommand,
    },
    /// Compute the meaning vector of a sentence.
    Sentence {
        text: String,
        /// Lexicon JSON (defaults to the shipped one).
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Nonneg-real model supplying word tensors and `not_box`.
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Corpus tools.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Inner product of two stored meaning vectors.
    Similarity {
        first: String,
        second: String,
        #[arg(long)]
        vectors: PathBuf,
    },
    /// Run a protocol check.
    Demo {
        #[command(subcommand)]
        command: DemoCommand,
    },
}

#[derive(Subcommand, Debug)]
enum GrammarCommand {
    /// Check that a type string (or, with --lexicon, a sentence) reduces to
    /// the target.
    Check {
        input: String,
        #[arg(long, default_value = "s")]
        target: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::Plain)]
        convention: ConventionArg,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCommand {
    /// Count co-occurrences and write meaning vectors.
    Build {
        corpus: PathBuf,
        /// Context words, one per line, plus `window = k`.
        #[arg(long)]
        context: PathBuf,
        /// Vector store to write.
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the raw counts.
        #[arg(long)]
        counts: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum DemoCommand {
    /// Teleportation through each unitary, with its correction.
    Teleportation {
        #[command(flatten)]
        model: ModelOpt,
        /// Unitary to teleport through (default: every unitary of the model).
        #[arg(long)]
        unitary: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Entanglement swapping.
    Swap {
        #[command(flatten)]
        model: ModelOpt,
        #[arg(long)]
        unitary: Option<String>,
        /// Run the negative control with the cap on the wrong pair.
        #[arg(long)]
        misrouted: bool,
        #[arg(long)]
        json: bool,
    },
    /// Bayesian inversion of a channel against a prior.
    Bayes {
        /// JSON probability vector (default: the worked example).
        #[arg(long)]
        prior: Option<PathBuf>,
        /// JSON matrix, rows indexed by input (default: the worked example).
        #[arg(long)]
        channel: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Dot,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConventionArg {
    Plain,
    Mirrored,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Plain => Convention::Plain,
            ConventionArg::Mirrored => Convention::Mirrored,
        }
    }
}

/// Verification outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

macro_rules! with_model {
    ($m:expr, $v:ident => $body:expr) => {
        match $m {
            AnyModel::Complex($v) => $body,
            AnyModel::Real($v) => $body,
            AnyModel::Boolean($v) => $body,
        }
    };
}

/// Run the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Status::Pass) => 0,
        Ok(Status::Fail) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// A model file, or a shipped model by name.
fn load_model(arg: &str) -> Result<AnyModel> {
    let path = Path::new(arg);
    if !path.exists() && shipped::MODELS.iter().any(|(n, _)| *n == arg) {
        return Ok(shipped::model(arg)?);
    }
    AnyModel::from_json_str(&read(path)?)
        .with_context(|| format!("in model {}", path.display()))
}

fn optional_model(opt: &ModelOpt) -> Result<Option<AnyModel>> {
    opt.model.as_deref().map(load_model).transpose()
}

/// A diagram from JSON (`.json`) or the text language, resolved against
/// `base`. Returns the signature the file ends up using.
fn load_diagram(path: &Path, base: &Signature) -> Result<(Signature, Diagram)> {
    let text = read(path)?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    let loaded = if is_json {
        let j: DiagramJson = serde_json::from_str(&text)
            .map_err(|e| anyhow!("{}: not a diagram: {e}", path.display()))?;
        let mut sig = base.clone();
        sig.merge(&j.signature()?)?;
        let d = j.to_diagram(&sig)?;
        (sig, d)
    } else {
        dsl::load(&text, base).map_err(|e| anyhow!("{}:{e}", path.display()))?
    };
    Ok(loaded)
}

fn base_signature(model: &Option<AnyModel>) -> Signature {
    model
        .as_ref()
        .map_or_else(Signature::new, |m| m.signature().clone())
}

fn ruleset(sig: &Signature, opts: &RewriteOpts) -> Result<Ruleset> {
    let mut merged = sig.clone();
    let mut rules = shipped::ruleset(sig)?;
    if let Some(p) = &opts.rules {
        let extra = parse_rules(&read(p)?, &mut merged)
            .with_context(|| format!("in rules {}", p.display()))?;
        rules.extend(extra);
    }
    Ok(rules)
}

fn types_text(d: &Diagram) -> (String, String) {
    let show = |ts: Vec<dagcat::WireType>| {
        let v: Vec<&str> = ts.iter().map(|t| t.name()).collect();
        format!("[{}]", v.join(", "))
    };
    (show(d.input_types()), show(d.output_types()))
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status> {
    match cmd {
        Command::Parse { file, model, json } => {
            let model = optional_model(&model)?;
            let (sig, d) = load_diagram(&file, &base_signature(&model))?;
            if json {
                writeln!(out, "{}", DiagramJson::from_diagram(&d, Some(&sig)).to_string_pretty())?;
            } else {
                let (ins, outs) = types_text(&d);
                writeln!(out, "inputs: {ins}")?;
                writeln!(out, "outputs: {outs}")?;
                writeln!(out, "nodes: {}", d.node_count())?;
                writeln!(out, "edges: {}", d.edge_count())?;
                writeln!(out, "loops: {}", d.circles().len())?;
                writeln!(out, "canonical hash: {}", d.canonical_form().hash())?;
            }
            Ok(Status::Pass)
        }
        Command::Normalize {
            file,
            model,
            rewrite,
            output,
            json,
        } => {
            let model = optional_model(&model)?;
            let (sig, d) = load_diagram(&file, &base_signature(&model))?;
            let rules = ruleset(&sig, &rewrite)?;
            let (nf, trace) = normalize(&d, &rules, rewrite.max_steps);
            if let Some(p) = output {
                write_file(&p, &DiagramJson::from_diagram(&nf, Some(&sig)).to_string_pretty())?;
            }
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&trace.to_json())?)?;
            } else {
                for (i, s) in trace.steps.iter().enumerate() {
                    writeln!(out, "{:>4}. {} -> {}", i + 1, s.rule, &s.hash[..12.min(s.hash.len())])?;
                }
                let (ins, outs) = types_text(&nf);
                writeln!(
                    out,
                    "normal form: {ins} -> {outs}, {} nodes, {} edges, {} loops",
                    nf.node_count(),
                    nf.edge_count(),
                    nf.circles().len()
                )?;
                writeln!(out, "canonical hash: {}", trace.final_hash)?;
                if trace.up_to_scalar() {
                    writeln!(out, "dropped scalars: {}", trace.scalars.join(", "))?;
                }
            }
            if trace.exhausted {
                writeln!(err, "step budget of {} exhausted", rewrite.max_steps)?;
                return Ok(Status::Fail);
            }
            Ok(Status::Pass)
        }
        Command::Eval {
            file,
            model,
            against,
            up_to_scalar,
            tol,
            json,
        } => {
            let m = model
                .model
                .as_deref()
                .map(load_model)
                .transpose()?
                .ok_or_else(|| anyhow!("eval needs --model"))?;
            let base = m.signature().clone();
            let (_, d) = load_diagram(&file, &base)?;
            let other = against.map(|p| load_diagram(&p, &base)).transpose()?;
            let mode = if up_to_scalar {
                CompareMode::UpToScalar
            } else {
                CompareMode::Exact
            };
            with_model!(&m, m => eval(m, &d, other.map(|o| o.1), mode, tol, json, out))
        }
        Command::CheckEq {
            left,
            right,
            model,
            rewrite,
            json,
        } => {
            let model = optional_model(&model)?;
            let base = base_signature(&model);
            let (mut sig, a) = load_diagram(&left, &base)?;
            let (sig_b, b) = load_diagram(&right, &base)?;
            sig.merge(&sig_b)?;
            let rules = ruleset(&sig, &rewrite)?;
            let check = check_equal_by_rewriting(&a, &b, &rules, rewrite.max_steps)?;
            let tensor = match &model {
                Some(m) => Some(with_model!(m, m => compare(m, &a, &b, check.verdict)?)),
                None => None,
            };
            let ok = check.verdict != Verdict::Unknown
                && tensor.as_ref().is_none_or(|t| t["equal"] == json!(true));
            if json {
                let v = json!({
                    "verdict": check.verdict,
                    "equal": ok,
                    "tensor": tensor,
                    "left": check.left.to_json(),
                    "right": check.right.to_json(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            } else {
                writeln!(out, "rewrite verdict: {}", check.verdict)?;
                writeln!(
                    out,
                    "steps: {} left, {} right",
                    check.left.steps.len(),
                    check.right.steps.len()
                )?;
                if let Some(t) = &tensor {
                    writeln!(out, "tensor verdict: {}", if t["equal"] == json!(true) { "equal" } else { "not equal" })?;
                }
                writeln!(out, "{}", if ok { "EQUAL" } else { "NOT SHOWN EQUAL" })?;
            }
            Ok(Status::from_bool(ok))
        }
        Command::Render {
            file,
            model,
            format,
            output,
        } => {
            let model = optional_model(&model)?;
            let (_, d) = load_diagram(&file, &base_signature(&model))?;
            let name = file
                .file_stem()
                .map_or("diagram".to_string(), |s| s.to_string_lossy().into_owned());
            let text = match format {
                Format::Dot => to_dot(&d, &name),
                Format::Svg => to_svg(&d),
            };
            match output {
                Some(p) => write_file(&p, &text)?,
                None => write!(out, "{text}")?,
            }
            Ok(Status::Pass)
        }
        Command::Grammar {
            command:
                GrammarCommand::Check {
                    input,
                    target,
                    convention,
                    lexicon,
                    json,
                },
        } => grammar_check(&input, &target, convention.into(), lexicon.as_deref(), json, out),
        Command::Sentence {
            text,
            lexicon,
            model,
            json,
        } => {
            let lex = match &lexicon {
                Some(p) => Lexicon::from_json_str(&read(p)?)
                    .with_context(|| format!("in lexicon {}", p.display()))?,
                None => shipped::lexicon()?,
            };
            let words = tokenize_line(&text);
            let reduction = lex.parse(&words)?;
            let m: Model<f64> = match model.as_deref().map(load_model).transpose()? {
                Some(AnyModel::Real(m)) => m,
                Some(other) => bail!("sentence models must be nonneg-real, not {}", other.semiring()),
                None => lex.model()?,
            };
            let v = sentence_meaning(&words, &lex, &reduction, &m)?;
            if json {
                let j = json!({
                    "sentence": words.join(" "),
                    "type": format_type(&reduction.types),
                    "pairs": reduction.pairs,
                    "meaning": v.data(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&j)?)?;
            } else {
                writeln!(out, "{}", fmt_vector(v.data()))?;
            }
            Ok(Status::Pass)
        }
        Command::Corpus {
            command:
                CorpusCommand::Build {
                    corpus,
                    context,
                    output,
                    counts,
                },
        } => {
            let config = ContextConfig::parse(&read(&context)?)?;
            let lines = tokenize(&read(&corpus)?);
            let model = ingest_corpus(&lines, &config);
            if model.is_empty() {
                writeln!(err, "warning: the corpus has no tokens")?;
            }
            let store = vector_store(&model);
            write_file(&output, &serde_json::to_string_pretty(&store)?)?;
            if let Some(p) = counts {
                write_file(&p, &serde_json::to_string_pretty(&model)?)?;
            }
            let zero = store.values().filter(|v| v.iter().all(|&x| x == 0.0)).count();
            writeln!(
                out,
                "{} tokens, {} words, {} context words, window {}; {} words never near a context word",
                model.token_count,
                store.len(),
                config.words.len(),
                config.window,
                zero
            )?;
            Ok(Status::Pass)
        }
        Command::Similarity {
            first,
            second,
            vectors,
        } => {
            let store: VectorStore = serde_json::from_str(&read(&vectors)?)
                .with_context(|| format!("in vector store {}", vectors.display()))?;
            let u = stored_vector(&store, &first)?;
            let v = stored_vector(&store, &second)?;
            writeln!(out, "{}", similarity(&u, &v)?)?;
            Ok(Status::Pass)
        }
        Command::Demo { command } => demo(command, out),
    }
}

fn fmt_vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", parts.join(", "))
}

fn tensor_json<S: Semiring>(t: &TensorValue<S>) -> Value {
    t.to_json()
}

fn eval<S: Semiring>(
    m: &Model<S>,
    d: &Diagram,
    other: Option<Diagram>,
    mode: CompareMode,
    tol: f64,
    json: bool,
    out: &mut dyn Write,
) -> Result<Status> {
    let t = interpret(d, m)?;
    let Some(o) = other else {
        if json {
            writeln!(out, "{}", serde_json::to_string_pretty(&json!({"semiring": S::NAME, "tensor": tensor_json(&t)}))?)?;
        } else {
            writeln!(out, "shape: {:?}", t.shape())?;
            writeln!(out, "data: {}", serde_json::to_string(&tensor_json(&t)["data"])?)?;
        }
        return Ok(Status::Pass);
    };
    let u = interpret(&o, m)?;
    let cmp = equal_tensors(&t, &u, mode, tol)?;
    let scalar = cmp.scalar.map(Semiring::to_json);
    if json {
        let j = json!({
            "semiring": S::NAME,
            "mode": mode,
            "tolerance": tol,
            "equal": cmp.equal,
            "scalar": scalar,
            "deviation": cmp.deviation,
            "tensor": tensor_json(&t),
            "against": tensor_json(&u),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&j)?)?;
    } else {
        writeln!(out, "shape: {:?}", t.shape())?;
        writeln!(out, "data: {}", serde_json::to_string(&tensor_json(&t)["data"])?)?;
        writeln!(
            out,
            "{} ({mode:?}, tol {tol:e}, scalar {}, deviation {:.3e})",
            if cmp.equal { "EQUAL" } else { "NOT EQUAL" },
            scalar.map_or("none".into(), |s| s.to_string()),
            cmp.deviation
        )?;
    }
    Ok(Status::from_bool(cmp.equal))
}

/// Tensor comparison matching a rewrite verdict: exact unless rewriting
/// dropped scalars.
fn compare<S: Semiring>(m: &Model<S>, a: &Diagram, b: &Diagram, v: Verdict) -> Result<Value> {
    let mode = if v == Verdict::EqualExact {
        CompareMode::Exact
    } else {
        CompareMode::UpToScalar
    };
    let cmp = equal_tensors(&interpret(a, m)?, &interpret(b, m)?, mode, DEFAULT_TOL)?;
    Ok(json!({
        "mode": mode,
        "tolerance": DEFAULT_TOL,
        "equal": cmp.equal,
        "scalar": cmp.scalar.map(Semiring::to_json),
        "deviation": cmp.deviation,
    }))
}

fn grammar_check(
    input: &str,
    target: &str,
    convention: Convention,
    lexicon: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Result<Status> {
    let (words, types) = match lexicon {
        Some(p) => {
            let lex = Lexicon::from_json_str(&read(p)?)
                .with_context(|| format!("in lexicon {}", p.display()))?;
            let words = tokenize_line(input);
            let types = lex.types_of(&words)?;
            (Some(words), types)
        }
        None => (None, parse_type(input, convention)?),
    };
    let goal = SimpleType::base(target);
    let r = reduce_to(&types, &goal);
    if json {
        let j = json!({
            "input": input,
            "words": words,
            "type": format_type(&types),
            "target": target,
            "reduces": r.is_some(),
            "pairs": r.as_ref().map(|r| &r.pairs),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&j)?)?;
    } else {
        match &r {
            Some(r) => {
                writeln!(out, "{} reduces to {target}", format_type(&types))?;
                let pairs: Vec<String> = r.pairs.iter().map(|(p, q)| format!("{p}-{q}")).collect();
                writeln!(out, "contractions: {}", pairs.join(" "))?;
            }
            None => writeln!(out, "{} does not reduce to {target}", format_type(&types))?,
        }
    }
    Ok(Status::from_bool(r.is_some()))
}

fn report(reports: &[ProtocolReport], json: bool, out: &mut dyn Write) -> Result<Status> {
    if json {
        let v: Vec<Value> = reports.iter().map(ProtocolReport::to_json).collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        for r in reports {
            writeln!(out, "{}", r.to_text())?;
        }
    }
    Ok(Status::from_bool(reports.iter().all(ProtocolReport::passed)))
}

/// Unitaries `Q → Q` of a model, in declaration order.
fn single_wire_unitaries(sig: &Signature) -> Vec<String> {
    sig.unitaries()
        .into_iter()
        .filter(|g| g.inputs.len() == 1 && g.outputs == g.inputs)
        .map(|g| g.name.clone())
        .collect()
}

fn demo(cmd: DemoCommand, out: &mut dyn Write) -> Result<Status> {
    match cmd {
        DemoCommand::Teleportation {
            model,
            unitary,
            json,
        } => {
            let m = load_model(model.model.as_deref().unwrap_or("qubit"))?;
            let names = if unitary.is_empty() {
                single_wire_unitaries(m.signature())
            } else {
                unitary
            };
            if names.is_empty() {
                bail!("the model has no unitaries to teleport through");
            }
            let reports = names
                .iter()
                .map(|f| Ok(with_model!(&m, m => teleportation_demo(m, f)?)))
                .collect::<Result<Vec<_>>>()?;
            report(&reports, json, out)
        }
        DemoCommand::Swap {
            model,
            unitary,
            misrouted,
            json,
        } => {
            let m = load_model(model.model.as_deref().unwrap_or("qubit"))?;
            let f = match unitary {
                Some(f) => f,
                None => single_wire_unitaries(m.signature())
                    .into_iter()
                    .find(|n| n != "I")
                    .ok_or_else(|| anyhow!("the model has no unitary for the measurement"))?,
            };
            let r = if misrouted {
                with_model!(&m, m => swapping_control(m, &f)?)
            } else {
                with_model!(&m, m => swapping_demo(m, &f)?)
            };
            report(&[r], json, out)
        }
        DemoCommand::Bayes {
            prior,
            channel,
            json,
        } => {
            let p: Prior = match prior {
                Some(path) => serde_json::from_str(&read(&path)?)
                    .with_context(|| format!("in prior {}", path.display()))?,
                None => Prior::new(vec![0.25, 0.75])?,
            };
            let c: Channel = match channel {
                Some(path) => serde_json::from_str(&read(&path)?)
                    .with_context(|| format!("in channel {}", path.display()))?,
                None => Channel::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]])?,
            };
            let inv = bayes_invert(&p, &c)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&inv)?)?;
            } else {
                writeln!(out, "marginal q(y): {}", fmt_vector(&inv.marginal))?;
                for (y, row) in inv.posterior.iter().enumerate() {
                    writeln!(out, "B(.|y={y}): {}", fmt_vector(row))?;
                }
                writeln!(out, "paths agree to {:.3e}", inv.deviation)?;
                if !inv.unsupported.is_empty() {
                    writeln!(out, "unsupported evidence: {:?}", inv.unsupported)?;
                }
            }
            Ok(Status::Pass)
        }
    }
}
