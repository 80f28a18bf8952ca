//! `dgk`: batch front-end. Every run prints one JSON envelope
//! `{"status","data","report"}` on stdout and exits 0 (ok / true),
//! 1 (checked and false) or 2 (input or structural error).

use clap::{Parser, Subcommand, ValueEnum};
use dgk_core::constructions::{
    affine_delta, factorized_delta, ring_unit_delta, x3_delta, FactorizedGroupData, FactorizedGroupJson,
};
use dgk_core::delta::{
    check_delta_morphism, check_iki_kik, find_isomorphism, trivial_delta, validate_delta, DeltaGroupoid,
    DeltaGroupoidData, DeltaMorphism, DeltaMorphismData, IsoSearch,
};
use dgk_core::finite_ring::{parse_ring, parse_ring_list, FiniteRing, FiniteRingData, DEFAULT_CORPUS};
use dgk_core::groupoid::{validate_groupoid_data, Groupoid, GroupoidData, GroupoidMorphism};
use dgk_core::homs::{hom_signature, HomBudget};
use dgk_core::presented::{
    named_presentation, simplify, universal_property_check, universal_ring, verify_certificate_pair, CertificatePair,
    CertificatePairData, NamedPresentation, PresentationData, PresentedRing, DEFAULT_STEP_BOUND,
};
use dgk_core::report::ValidationReport;
use dgk_core::topo::{functor_g, simply_connected_model, validate_topp_model, ToppModel, ToppModelData};
use dgk_core::Error;
use serde::Serialize;
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dgk", version, about = "Δ-groupoids, their universal rings, and models of topological pairs")]
struct Cli {
    /// Node budget for ring hom enumeration.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Node cap for the isomorphism search.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Worker threads for hom counting.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Also write the envelope's data to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write the envelope's report lines to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Groupoid,
    Delta,
    Model,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a groupoid, Δ-groupoid or model read from stdin or --file.
    Validate {
        kind: Kind,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Build a Δ-groupoid.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Build a model of a topological pair.
    Model {
        #[command(subcommand)]
        what: ModelKind,
    },
    /// Check a Δ-groupoid morphism given as {"domain","codomain","object_map","element_map"}.
    MorphismCheck {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Search for an isomorphism between the input Δ-groupoid and another one.
    IsoCheck {
        /// `x3:n`, `ring-unit:<ring>`, `affine:<ring>`, or a JSON file.
        #[arg(long)]
        against: String,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Compute the Δ-groupoid of a model.
    GCompute {
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Universal ring of a Δ-groupoid, simplified, with certificates.
    Ring {
        /// `x3:n`, `ring-unit:<ring>`, `affine:<ring>`, or a JSON file; stdin if absent.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        rings: Option<String>,
    },
    /// Hom counts from a presentation into a ring corpus.
    HomCount {
        /// `z`, `zero`, `zfree<k>`, `localized-zfree<k>`, or a JSON file; stdin if absent.
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long)]
        rings: Option<String>,
    },
    /// Check the universal property of the input Δ-groupoid's ring.
    UniversalCheck {
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        rings: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Re-check a certificate pair emitted by `ring`.
    CertCheck {
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Construct {
    X3 {
        #[arg(long)]
        n: usize,
    },
    RingUnit {
        #[arg(long)]
        ring: String,
    },
    Affine {
        #[arg(long)]
        ring: String,
    },
    /// From {"group","g_plus","theta"}.
    Factorized {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// `(G, ∅, 1_∅)` for the groupoid read from stdin or --file.
    Trivial {
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ModelKind {
    SimplyConnected {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Serialize)]
struct Envelope {
    status: &'static str,
    data: Value,
    report: Vec<String>,
}

struct Outcome {
    ok: bool,
    data: Value,
    report: Vec<String>,
}

impl Outcome {
    fn ok(data: Value, report: Vec<String>) -> Self {
        Outcome { ok: true, data, report }
    }
    fn verdict(ok: bool, data: Value, report: Vec<String>) -> Self {
        Outcome { ok, data, report }
    }
}

/// Errors that are reported with exit code 2.
struct Failure {
    code: &'static str,
    message: String,
    lines: Vec<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let lines = match &e {
            Error::Structural(issues) => issues.iter().map(ToString::to_string).collect(),
            _ => Vec::new(),
        };
        Failure { code: e.code(), message: e.to_string(), lines }
    }
}

fn input_failure(message: impl Into<String>) -> Failure {
    Failure { code: "input", message: message.into(), lines: Vec::new() }
}

type Run = std::result::Result<Outcome, Failure>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Reads JSON from a file or stdin; an envelope is unwrapped to its data.
fn read_json(file: Option<&Path>) -> std::result::Result<Value, Failure> {
    let text = match file {
        Some(p) => std::fs::read_to_string(p).map_err(|e| input_failure(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| input_failure(e.to_string()))?;
            s
        }
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure {
        code: "parse",
        message: e.to_string(),
        lines: Vec::new(),
    })?;
    match v {
        Value::Object(ref m) if m.contains_key("status") && m.contains_key("data") => {
            if m["status"] == "error" {
                return Err(input_failure("input envelope carries an error"));
            }
            Ok(m["data"].clone())
        }
        _ => Ok(v),
    }
}

fn parse_as<T: serde::de::DeserializeOwned>(v: Value) -> std::result::Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure { code: "parse", message: e.to_string(), lines: Vec::new() })
}

fn ring_arg(s: &str) -> std::result::Result<FiniteRing, Failure> {
    if s.ends_with(".json") {
        let data: FiniteRingData = parse_as(read_json(Some(Path::new(s)))?)?;
        let label = Path::new(s).file_stem().and_then(|x| x.to_str()).unwrap_or("table").to_string();
        Ok(FiniteRing::from_data(&data)?.with_label(label))
    } else {
        Ok(parse_ring(s)?)
    }
}

fn corpus(rings: Option<&str>) -> std::result::Result<Vec<FiniteRing>, Failure> {
    let env = std::env::var("DGK_RING_CORPUS").ok();
    let list = rings.or(env.as_deref()).unwrap_or(DEFAULT_CORPUS);
    Ok(parse_ring_list(list)?)
}

fn delta_literal(s: &str) -> std::result::Result<DeltaGroupoid, Failure> {
    if let Some(n) = s.strip_prefix("x3:") {
        let n: usize = n.parse().map_err(|_| input_failure(format!("bad size in {s:?}")))?;
        Ok(x3_delta(n))
    } else if let Some(r) = s.strip_prefix("ring-unit:") {
        Ok(ring_unit_delta(&ring_arg(r)?))
    } else if let Some(r) = s.strip_prefix("affine:") {
        Ok(affine_delta(&ring_arg(r)?))
    } else {
        read_delta(Some(Path::new(s)))
    }
}

fn read_delta(file: Option<&Path>) -> std::result::Result<DeltaGroupoid, Failure> {
    let data: DeltaGroupoidData = parse_as(read_json(file)?)?;
    Ok(DeltaGroupoid::from_data(&data)?)
}

fn read_presentation(v: Value) -> std::result::Result<PresentedRing, Failure> {
    let v = match v {
        Value::Object(ref m) if m.contains_key("presentation") => m["presentation"].clone(),
        _ => v,
    };
    let data: PresentationData = parse_as(v)?;
    Ok(PresentedRing::from_data(&data)?)
}

fn report_outcome(rep: &ValidationReport) -> Run {
    if !rep.structural.is_empty() {
        return Err(Failure { code: "structural", message: "input is malformed".into(), lines: rep.lines() });
    }
    Ok(Outcome::verdict(rep.is_valid(), to_value(rep), rep.lines()))
}

fn run(cli: &Cli) -> Run {
    let budget = cli.budget.map(|nodes| HomBudget { nodes }).unwrap_or_default();
    let mut iso = IsoSearch::default();
    if let Some(c) = cli.cap {
        iso.node_cap = c;
    }
    match &cli.cmd {
        Cmd::Validate { kind, file } => {
            let v = read_json(file.as_deref())?;
            match kind {
                Kind::Groupoid => report_outcome(&validate_groupoid_data(&parse_as::<GroupoidData>(v)?)),
                Kind::Delta => {
                    let d = DeltaGroupoid::from_data(&parse_as(v)?)?;
                    let mut out = report_outcome(&validate_delta(&d))?;
                    let iki = check_iki_kik(&d);
                    out.report.push(format!("iki = kik: {iki}"));
                    out.ok &= iki;
                    Ok(out)
                }
                Kind::Model => {
                    let m = ToppModel::from_data(&parse_as::<ToppModelData>(v)?)?;
                    report_outcome(&validate_topp_model(&m))
                }
            }
        }
        Cmd::Construct { what } => {
            let d = match what {
                Construct::X3 { n } => x3_delta(*n),
                Construct::RingUnit { ring } => ring_unit_delta(&ring_arg(ring)?),
                Construct::Affine { ring } => affine_delta(&ring_arg(ring)?),
                Construct::Factorized { file } => {
                    let data: FactorizedGroupJson = parse_as(read_json(file.as_deref())?)?;
                    factorized_delta(&FactorizedGroupData::from_json(&data)?)?
                }
                Construct::Trivial { file } => {
                    let data: GroupoidData = parse_as(read_json(file.as_deref())?)?;
                    trivial_delta(&Groupoid::from_data(&data)?)
                }
            };
            let g = d.groupoid();
            let lines =
                vec![format!("{} objects, {} elements, |h| = {}", g.num_objects(), g.num_elements(), d.h().len())];
            Ok(Outcome::ok(to_value(&d.to_data()), lines))
        }
        Cmd::Model { what } => match what {
            ModelKind::SimplyConnected { n } => {
                if *n == 0 {
                    return Err(input_failure("n must be at least 1"));
                }
                let m = simply_connected_model(*n);
                let lines = vec![format!(
                    "{} points, |a_sub| = {}, {} long arcs",
                    m.p.num_objects(),
                    m.a_sub.len(),
                    m.long_arcs.len()
                )];
                Ok(Outcome::ok(to_value(&m.to_data()), lines))
            }
        },
        Cmd::MorphismCheck { file } => {
            let data: DeltaMorphismData = parse_as(read_json(file.as_deref())?)?;
            let dom = DeltaGroupoid::from_data(&data.domain)?;
            let cod = DeltaGroupoid::from_data(&data.codomain)?;
            let map = GroupoidMorphism::from_data(&data.map, dom.groupoid(), cod.groupoid())?;
            let issues = check_delta_morphism(&dom, &cod, &DeltaMorphism { map });
            let lines = issues.iter().map(ToString::to_string).collect();
            Ok(Outcome::verdict(issues.is_empty(), json!({"is_morphism": issues.is_empty(), "issues": issues}), lines))
        }
        Cmd::IsoCheck { against, file } => {
            let d1 = read_delta(file.as_deref())?;
            let d2 = delta_literal(against)?;
            let found = find_isomorphism(&d1, &d2, iso)?;
            let map = found.as_ref().map(|f| to_value(&f.map.to_data(d1.groupoid(), d2.groupoid())));
            let line = format!("isomorphic: {}", found.is_some());
            Ok(Outcome::verdict(found.is_some(), json!({"isomorphic": found.is_some(), "map": map}), vec![line]))
        }
        Cmd::GCompute { model } => {
            let m = ToppModel::from_data(&parse_as(read_json(model.as_deref())?)?)?;
            let out = functor_g(&m)?;
            Ok(Outcome::verdict(out.report.passed(), to_value(&out.delta.to_data()), out.report.lines()))
        }
        Cmd::Ring { delta, rings } => {
            let d = match delta {
                Some(s) => delta_literal(s)?,
                None => read_delta(None)?,
            };
            let original = universal_ring(&d);
            let s = simplify(&original);
            let checked = verify_certificate_pair(&s.certificates, DEFAULT_STEP_BOUND);
            let corpus = corpus(rings.as_deref())?;
            let before = hom_signature(&original, &corpus, budget, cli.jobs);
            let after = hom_signature(&s.ring, &corpus, budget, cli.jobs)?;
            let preserved = match &before {
                Ok(b) => Value::Bool(*b == after),
                Err(_) => Value::Null,
            };
            let mut lines = s.ring.describe();
            lines.push(match &checked {
                Ok(()) => "certificates: valid".to_string(),
                Err(f) => format!("certificates: invalid at {f}"),
            });
            lines.push(match &before {
                Ok(b) => format!("signature preserved: {}", *b == after),
                Err(e) => format!("signature of the unsimplified ring not computed: {e}"),
            });
            let ok = checked.is_ok() && preserved != Value::Bool(false);
            let labels: Vec<&str> = corpus.iter().map(|r| r.label()).collect();
            let data = json!({
                "universal": s.certificates.forward.source.to_data(),
                "presentation": s.ring.to_data(),
                "certificates": s.certificates.to_data(),
                "certificates_valid": checked.is_ok(),
                "rings": labels,
                "signature": after,
                "signature_preserved": preserved,
            });
            Ok(Outcome::verdict(ok, data, lines))
        }
        Cmd::HomCount { presentation, rings } => {
            let p = match presentation.as_deref() {
                Some(s) if s.ends_with(".json") => read_presentation(read_json(Some(Path::new(s)))?)?,
                Some(s) => named_presentation(&NamedPresentation::parse(s)?)?,
                None => read_presentation(read_json(None)?)?,
            };
            let corpus = corpus(rings.as_deref())?;
            let counts = hom_signature(&p, &corpus, budget, cli.jobs)?;
            let labels: Vec<&str> = corpus.iter().map(|r| r.label()).collect();
            let lines = labels.iter().zip(&counts).map(|(l, c)| format!("{l}: {c}")).collect();
            Ok(Outcome::ok(json!({"rings": labels, "counts": counts}), lines))
        }
        Cmd::UniversalCheck { ring, rings, file } => {
            let d = read_delta(file.as_deref())?;
            let targets = match ring {
                Some(r) => vec![ring_arg(r)?],
                None => corpus(rings.as_deref())?,
            };
            let mut results = Vec::new();
            let mut lines = Vec::new();
            for r in &targets {
                let c = universal_property_check(&d, r, budget)?;
                lines.push(format!("{}: {} morphisms, {} homs, holds: {}", r.label(), c.morphisms, c.homs, c.holds));
                results.push(json!({"ring": r.label(), "result": c}));
            }
            let ok = results.iter().all(|v| v["result"]["holds"] == true);
            Ok(Outcome::verdict(ok, Value::Array(results), lines))
        }
        Cmd::CertCheck { file } => {
            let v = read_json(file.as_deref())?;
            let v = match v {
                Value::Object(ref m) if m.contains_key("certificates") => m["certificates"].clone(),
                _ => v,
            };
            let pair = CertificatePair::from_data(&parse_as::<CertificatePairData>(v)?)?;
            let res = verify_certificate_pair(&pair, DEFAULT_STEP_BOUND);
            let line = match &res {
                Ok(()) => "certificates: valid".to_string(),
                Err(f) => format!("certificates: invalid at {f}"),
            };
            Ok(Outcome::verdict(res.is_ok(), json!({"valid": res.is_ok(), "failure": res.err()}), vec![line]))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (env, code) = match run(&cli) {
        Ok(o) => (
            Envelope { status: if o.ok { "ok" } else { "false" }, data: o.data, report: o.report },
            if o.ok { 0 } else { 1 },
        ),
        Err(f) => {
            let mut report = vec![f.message.clone()];
            report.extend(f.lines);
            (Envelope { status: "error", data: json!({"code": f.code, "message": f.message}), report }, 2)
        }
    };
    let write = |path: &Option<PathBuf>, text: String| -> std::io::Result<()> {
        match path {
            Some(p) => std::fs::write(p, text),
            None => Ok(()),
        }
    };
    let side_effects = write(&cli.out, serde_json::to_string_pretty(&env.data).expect("json") + "\n")
        .and_then(|()| write(&cli.report, env.report.join("\n") + "\n"));
    // A closed stdout (e.g. piped into `head`) is not an error of ours.
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&env).expect("json"));
    if let Err(e) = side_effects {
        eprintln!("dgk: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
