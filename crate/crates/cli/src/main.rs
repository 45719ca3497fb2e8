//! `fibra`: batch front end for the fibra-core computations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fibra_core::amalgam::TreeOfGroups;
use fibra_core::dpd::{classify_ml, is_toric, DpdPresentation};
use fibra_core::fiber_tower::{build_tower, classify_star_components, extended_divisor, BlowupSpec, Center};
use fibra_core::formal_series::{default_truncation, Field, Series};
use fibra_core::puiseux::{pui_of_center, pui_of_point};
use fibra_core::stabilizer::{aut_report, fiber_stabilizer, torus_part, Fibration};
use fibra_core::weighted_graphs::{contraction_order, ml_class, revert, standardize, WeightedTree, Zigzag};
use fibra_core::{Error, REPORT_VERSION};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    ZigzagStandardize,
    ZigzagRevert,
    ZigzagMl,
    FiberBuild,
    FiberGraph,
    PuiseuxPoint,
    StabFiber,
    AutReport,
    DpdClassify,
    AmalgamNf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    Rational,
    Radical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Parser, Debug)]
#[command(name = "fibra", version, about = "Invariants of A1-fibrations given as blowup towers")]
struct Cli {
    command: Command,
    /// A path to a JSON file, or the JSON itself.
    input: String,
    #[arg(long, value_enum, default_value = "rational")]
    field: FieldArg,
    /// Order to which sample arcs are expanded.
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Schema(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Schema(m),
            e => Failure::Compute(e),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Schema(_) => 2,
            Failure::Compute(Error::ExtensionRequired { .. }) => 4,
            Failure::Compute(_) => 3,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Schema(m) => json!({"error": "schema", "detail": m}),
            Failure::Compute(e @ Error::ExtensionRequired { k, value }) => json!({
                "error": e.code(),
                "detail": e.to_string(),
                "radical": {"k": k, "value": value},
                "hint": "rerun with --field radical",
            }),
            Failure::Compute(e) => json!({"error": e.code(), "detail": e.to_string()}),
        }
    }
}

type Out = std::result::Result<String, Failure>;

fn read_input(s: &str) -> std::result::Result<Value, Failure> {
    let t = s.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        s.to_string()
    } else {
        std::fs::read_to_string(s).map_err(|e| Failure::Schema(format!("cannot read {s}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Schema(e.to_string()))
}

fn parse<T: DeserializeOwned>(v: &Value, what: &str) -> std::result::Result<T, Failure> {
    serde_json::from_value(v.clone()).map_err(|e| Failure::Schema(format!("{what}: {e}")))
}

/// Accepts `[w0, ...]` as well as the bracketed `[[w0, ...]]`.
fn zigzag(v: &Value) -> std::result::Result<Zigzag, Failure> {
    match v.as_array() {
        Some(a) if a.len() == 1 && a[0].is_array() => parse(&a[0], "zigzag"),
        _ => parse(v, "zigzag"),
    }
}

/// A tower is either a bare blowup spec or a fibration with a single fiber.
fn tower(v: &Value) -> std::result::Result<BlowupSpec, Failure> {
    match v.get("fibers") {
        Some(f) => {
            let mut fibers: Vec<BlowupSpec> = parse(f, "fibers")?;
            if fibers.len() != 1 {
                return Err(Failure::Schema("expected exactly one fiber".into()));
            }
            Ok(fibers.remove(0))
        }
        None => parse(v, "blowup spec"),
    }
}

fn with_version(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("version".into(), json!(REPORT_VERSION));
    }
    v
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(v: Value) -> Out {
    Ok(pretty(&with_version(v)))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run(cli: &Cli) -> Out {
    let input = read_input(&cli.input)?;
    let field = match cli.field {
        FieldArg::Rational => Field::Rational,
        FieldArg::Radical => Field::Radical,
    };
    let dot = cli.format == Format::Dot;
    let dot_unsupported = || Failure::Schema(format!("{:?} has no DOT output", cli.command));
    match cli.command {
        Command::ZigzagStandardize => {
            let z = zigzag(&input)?;
            let s = standardize(&z)?;
            if dot {
                return Ok(s.form.to_tree().to_dot());
            }
            emit(json!({
                "input": z,
                "form": s.form,
                "notation": s.form.to_string(),
                "reversed_form": s.reversed_form,
                "log": s.log,
            }))
        }
        Command::ZigzagRevert => {
            let z = zigzag(&input)?;
            let r = revert(&z)?;
            if dot {
                return Ok(r.to_tree().to_dot());
            }
            emit(json!({"input": z, "form": r, "notation": r.to_string()}))
        }
        Command::ZigzagMl => {
            if dot {
                return Err(dot_unsupported());
            }
            let minimal = input.get("minimal").and_then(Value::as_bool).unwrap_or(false);
            let tree = if let Some(t) = input.get("tree") {
                parse::<WeightedTree>(t, "tree")?
            } else if input.is_array() {
                zigzag(&input)?.to_tree()
            } else {
                parse::<WeightedTree>(&input, "tree")?
            };
            tree.validate()?;
            let class = ml_class(&tree, minimal)?;
            emit(json!({"ml": class}))
        }
        Command::FiberBuild => {
            let model = build_tower(&tower(&input)?)?;
            if dot {
                return Ok(model.tree().to_dot());
            }
            let order = contraction_order(&model.tree(), model.section_attach)?;
            emit(json!({
                "model": model,
                "multiplicities": model.components.iter().map(|c| c.multiplicity).collect::<Vec<_>>(),
                "self_intersection": model.self_intersection().to_string(),
                "rooted_chain": model.is_rooted_chain(),
                "contraction_order": order,
            }))
        }
        Command::FiberGraph => {
            let model = build_tower(&tower(&input)?)?;
            let Some(b) = input.get("boundary") else {
                let t = model.tree();
                return if dot { Ok(t.to_dot()) } else { emit(json!({"tree": t})) };
            };
            let ext = extended_divisor(&model, &zigzag(b)?)?;
            if dot {
                return Ok(ext.tree.to_dot());
            }
            let stars: Vec<Value> =
                classify_star_components(&ext).into_iter().map(|(i, c)| json!({"spine_index": i, "class": c})).collect();
            emit(json!({"extended_divisor": ext, "star_components": stars}))
        }
        Command::PuiseuxPoint => {
            if dot {
                return Err(dot_unsupported());
            }
            let model = build_tower(&tower(&input)?)?;
            let w = match (input.get("point"), input.get("component")) {
                (Some(p), _) => pui_of_point(&model, &parse::<Center>(p, "point")?, field)?,
                (None, Some(k)) => {
                    let k = k.as_u64().ok_or_else(|| Failure::Schema("component must be an index".into()))? as usize;
                    pui_of_center(&model, k, field)?
                }
                (None, None) => return Err(Failure::Schema("need \"point\" or \"component\"".into())),
            };
            let order = cli.truncation.unwrap_or_else(|| default_truncation(w.d as usize, w.n as usize));
            let x = Series::var(order).pow(w.n as usize);
            let y = w.psi.to_series(order);
            emit(json!({
                "space": w,
                "multiplicity": w.multiplicity(),
                "sample_arc": {"x": x.to_poly(), "y": y.to_poly(), "order": order},
            }))
        }
        Command::StabFiber => {
            if dot {
                return Err(dot_unsupported());
            }
            let model = build_tower(&tower(&input)?)?;
            let desc = fiber_stabilizer(&model, field)?;
            let torus = torus_part(&desc)?;
            emit(json!({
                "stabilizer": desc,
                "ab_relations": desc.ab_relations(),
                "torus": torus,
                "rooted_chain": model.is_rooted_chain(),
            }))
        }
        Command::AutReport => {
            if dot {
                return Err(dot_unsupported());
            }
            let fib: Fibration = if input.get("fibers").is_some() {
                parse(&input, "fibration")?
            } else {
                Fibration { base: Default::default(), fibers: vec![parse(&input, "blowup spec")?] }
            };
            Ok(pretty(&to_value(&aut_report(&fib, field)?)))
        }
        Command::DpdClassify => {
            if dot {
                return Err(dot_unsupported());
            }
            let p: DpdPresentation = parse(&input, "presentation")?;
            p.validate()?;
            let toric = match is_toric(&p) {
                Ok(t) => Some(t),
                Err(Error::WrongKind(_)) => None,
                Err(e) => return Err(e.into()),
            };
            emit(json!({"kind": p.kind(), "ml": classify_ml(&p)?, "toric": toric}))
        }
        Command::AmalgamNf => {
            if dot {
                return Err(dot_unsupported());
            }
            #[derive(Deserialize)]
            struct Job {
                tree: Value,
                #[serde(default)]
                word: Option<Value>,
                #[serde(default)]
                words: Vec<Value>,
            }
            let job: Job = parse(&input, "amalgam job")?;
            let t = TreeOfGroups::from_json(&job.tree)?;
            let mut parts = job.words;
            parts.extend(job.word);
            if parts.is_empty() {
                return Err(Failure::Schema("need \"word\" or \"words\"".into()));
            }
            let mut w = t.normal_form(&t.word_from_json(&parts[0])?)?;
            for p in &parts[1..] {
                w = t.mul(&w, &t.word_from_json(p)?)?;
            }
            emit(json!({"normal_form": t.word_to_json(&w), "length": w.len()}))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("{}", json!({"error": "io", "detail": e.to_string()}));
                    return ExitCode::from(3);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.exit_code())
        }
    }
}
