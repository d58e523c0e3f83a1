use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use catop_core::fincat::{check_well_defined, BUILTIN_SMCS};
use catop_core::{
    builtin_smc, categorify, check_equivalence, check_smc_axioms, check_surjective_up_to, choose_section,
    dot_only_signature, enumerate_terms, generated_suboperad, parse_term, roundtrip_rs, roundtrip_sr,
    signature_from_json, smc_to_qalgebra, standard_comm_signature, ternary_comm_signature, unbiased_signature,
    xor_generators, and_or_generators, end_operad, check_operad_axioms, AlgebraBudget, Budget, CatBudget, CatqError,
    CheckReport, EffectiveOperad, FnTable, GeneratedOperad, Signature, SignatureError, SmcStructure, Symbol,
    TerminalOperad,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "catop", version, about = "Operads, their categorifications, and symmetric monoidal categories")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    config: Config,
}

#[derive(Args, Clone)]
struct Config {
    /// terminal | end2 | xor-gen | and-or-gen | path to a generators JSON file
    #[arg(long, global = true, default_value = "terminal")]
    operad: String,
    /// std-comm | ternary-comm | dot-only | unbiased | xor-gen | and-or-gen | path to a signature JSON file
    #[arg(long, global = true)]
    sig: Option<String>,
    /// Second signature, for `equiv`
    #[arg(long, global = true)]
    sig2: Option<String>,
    #[arg(long, global = true, default_value_t = 3)]
    arity_cap: usize,
    #[arg(long, global = true, default_value_t = 3)]
    depth_cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// z3-discrete | perm-groupoid-N | z2-hexagon | path to an SMC JSON file
    #[arg(long, global = true)]
    smc: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Is there a canonical arrow between two terms?
    Iso { term1: String, term2: String },
    /// List the terms of one arity
    Enum {
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Check the operad axioms of --operad
    Axioms {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Is every operation reached by a term of the signature?
    SigCheck,
    /// Choose a term for every operation
    Section,
    /// Are the categorifications for --sig and --sig2 equivalent?
    Equiv,
    /// Round trips between symmetric monoidal structures and algebras
    Roundtrip,
    /// Check the symmetric monoidal axioms
    SmcCheck,
    /// List the operations of --operad
    Carriers,
    /// Print a built-in symmetric monoidal structure as JSON
    ExportSmc,
}

enum Status {
    Pass,
    Fail,
    Incomparable,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn code(&self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Incomparable => 2,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Incomparable => "not comparable",
        }
    }
}

struct Outcome {
    status: Status,
    text: String,
    json: Value,
}

impl Outcome {
    fn new(status: Status, text: impl Display, json: Value) -> Self {
        Outcome {
            status,
            text: text.to_string(),
            json,
        }
    }

    fn report(r: &CheckReport) -> Self {
        Outcome::new(Status::of(r.passed()), r, serde_json::to_value(r).expect("serializable"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.config.format;
    match run(cli.verb, &cli.config) {
        Ok(out) => {
            match format {
                Format::Text => print!("{}", with_newline(&out.text)),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"status": out.status.label(), "result": out.json}))
                        .expect("serializable")
                ),
            }
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            match format {
                Format::Text => eprintln!("error: {e:#}"),
                Format::Json => println!("{}", json!({"status": "input error", "error": format!("{e:#}")})),
            }
            ExitCode::from(3)
        }
    }
}

fn with_newline(s: &str) -> String {
    if s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}

fn run(verb: Verb, cfg: &Config) -> Result<Outcome> {
    match verb {
        Verb::Roundtrip => return roundtrip(cfg),
        Verb::SmcCheck => return Ok(Outcome::report(&check_smc_axioms(&load_smc(cfg)?))),
        Verb::ExportSmc => {
            let s = load_smc(cfg)?;
            return Ok(Outcome::new(Status::Pass, s.to_json(), serde_json::from_str(&s.to_json())?));
        }
        _ => {}
    }
    match cfg.operad.as_str() {
        "terminal" => with_operad(verb, cfg, TerminalOperad, standard_comm_signature()),
        "end2" => {
            let end = end_operad(2, cfg.arity_cap);
            let sig = unbiased_signature(end.clone(), cfg.arity_cap)?;
            with_operad(verb, cfg, end, sig)
        }
        "xor-gen" | "and-or-gen" => {
            let (op, sig) = generated(&cfg.operad, cfg)?;
            with_operad(verb, cfg, op, sig)
        }
        path => {
            let gens = read_generators(path)?;
            let (op, sig) = generated_suboperad(gens.0, gens.1, cfg.arity_cap, cfg.depth_cap)?;
            with_operad(verb, cfg, op, sig)
        }
    }
}

fn generated(name: &str, cfg: &Config) -> Result<(GeneratedOperad, Signature<GeneratedOperad>)> {
    let gens = match name {
        "xor-gen" => xor_generators(),
        "and-or-gen" => and_or_generators(),
        _ => bail!("unknown generated operad {name}"),
    };
    Ok(generated_suboperad(2, gens, cfg.arity_cap, cfg.depth_cap)?)
}

/// `{"size": n, "generators": [{"name", "arity", "table"}]}`
fn read_generators(path: &str) -> Result<(usize, Vec<(Symbol, FnTable)>)> {
    let src = std::fs::read_to_string(path).with_context(|| format!("unknown operad {path}"))?;
    let v: Value = serde_json::from_str(&src).context("invalid generators JSON")?;
    let size = v["size"].as_u64().ok_or_else(|| anyhow!("missing \"size\""))? as usize;
    let gens = v["generators"]
        .as_array()
        .ok_or_else(|| anyhow!("missing \"generators\""))?
        .iter()
        .map(|g| {
            let name = g["name"].as_str().ok_or_else(|| anyhow!("generator without a name"))?;
            let arity = g["arity"].as_u64().ok_or_else(|| anyhow!("generator {name} without an arity"))? as usize;
            let table = FnTable::from_json(size, arity, &g["table"])?;
            Ok((Symbol::new(name, arity), table))
        })
        .collect::<Result<_>>()?;
    Ok((size, gens))
}

trait Resolve: EffectiveOperad + Clone + 'static {
    fn builtin(name: &str, cfg: &Config) -> Result<Option<Signature<Self>>>;
}

impl Resolve for TerminalOperad {
    fn builtin(name: &str, _: &Config) -> Result<Option<Signature<Self>>> {
        Ok(match name {
            "std-comm" => Some(standard_comm_signature()),
            "ternary-comm" => Some(ternary_comm_signature()),
            "dot-only" => Some(dot_only_signature()),
            _ => None,
        })
    }
}

impl Resolve for GeneratedOperad {
    fn builtin(name: &str, cfg: &Config) -> Result<Option<Signature<Self>>> {
        match name {
            "xor-gen" | "and-or-gen" => Ok(Some(generated(name, cfg)?.1)),
            _ => Ok(None),
        }
    }
}

impl Resolve for catop_core::EndOperad {
    fn builtin(_: &str, _: &Config) -> Result<Option<Signature<Self>>> {
        Ok(None)
    }
}

fn resolve_sig<P: Resolve>(default: &Signature<P>, name: Option<&str>, cfg: &Config) -> Result<Signature<P>> {
    let Some(name) = name else {
        return Ok(default.clone());
    };
    let p = default.target();
    if name == "unbiased" {
        return Ok(unbiased_signature(p.clone(), cfg.arity_cap)?);
    }
    if let Some(sig) = P::builtin(name, cfg)? {
        return Ok(sig);
    }
    if Path::new(name).is_file() {
        let src = std::fs::read_to_string(name)?;
        return Ok(signature_from_json(p.clone(), &src)?);
    }
    bail!("unknown signature {name} for operad {}", p.name())
}

fn budget(cfg: &Config) -> CatBudget {
    CatBudget {
        seed: cfg.seed,
        ..CatBudget::new(cfg.arity_cap, cfg.depth_cap)
    }
}

fn with_operad<P: Resolve>(verb: Verb, cfg: &Config, p: P, default: Signature<P>) -> Result<Outcome> {
    match verb {
        Verb::Iso { term1, term2 } => {
            let q = categorify(resolve_sig(&default, cfg.sig.as_deref(), cfg)?);
            let t1 = parse_term(&term1)?;
            let t2 = parse_term(&term2)?;
            match q.hom(&t1, &t2) {
                Ok(Some(a)) => Ok(Outcome::new(
                    Status::Pass,
                    format!("canonical isomorphism exists: {a}"),
                    json!({"arrow": a}),
                )),
                Ok(None) => Ok(Outcome::new(
                    Status::Fail,
                    format!(
                        "no arrow: {t1} evaluates to {}, {t2} to {}",
                        q.eval(&t1)?,
                        q.eval(&t2)?
                    ),
                    json!({"arrow": null, "source": t1.to_string(), "target": t2.to_string()}),
                )),
                Err(e @ CatqError::NotComparable { .. }) => Ok(Outcome::new(
                    Status::Incomparable,
                    e.to_string(),
                    json!({"error": e.to_string()}),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Verb::Enum { arity } => {
            let sig = resolve_sig(&default, cfg.sig.as_deref(), cfg)?;
            let n = arity.unwrap_or(cfg.arity_cap);
            let terms: Vec<String> = enumerate_terms(sig.symbols(), n, cfg.depth_cap)
                .iter()
                .map(ToString::to_string)
                .collect();
            Ok(Outcome::new(Status::Pass, terms.join("\n"), json!({"arity": n, "terms": terms})))
        }
        Verb::Axioms { samples } => {
            let b = Budget::exhaustive(cfg.arity_cap).with_random(samples, cfg.arity_cap + 2, cfg.seed);
            Ok(Outcome::report(&check_operad_axioms(&p, &b)))
        }
        Verb::SigCheck => {
            let sig = resolve_sig(&default, cfg.sig.as_deref(), cfg)?;
            let r = check_surjective_up_to(&sig, cfg.arity_cap, cfg.depth_cap)?;
            Ok(Outcome::new(Status::of(r.covered()), &r, serde_json::to_value(&r)?))
        }
        Verb::Section => {
            let sig = resolve_sig(&default, cfg.sig.as_deref(), cfg)?;
            match choose_section(&sig, cfg.arity_cap, cfg.depth_cap) {
                Ok(s) => {
                    let rows: Vec<(String, String)> =
                        s.entries().iter().map(|(k, t)| (k.to_string(), t.to_string())).collect();
                    let text = rows.iter().map(|(k, t)| format!("{k} ↦ {t}")).collect::<Vec<_>>().join("\n");
                    Ok(Outcome::new(Status::Pass, text, json!(rows)))
                }
                Err(e @ SignatureError::Uncovered { .. }) => {
                    Ok(Outcome::new(Status::Fail, format!("no section: {e}"), json!({"error": e.to_string()})))
                }
                Err(e) => Err(e.into()),
            }
        }
        Verb::Equiv => {
            let s1 = resolve_sig(&default, cfg.sig.as_deref(), cfg)?;
            let s2 = resolve_sig(&default, Some(cfg.sig2.as_deref().ok_or_else(|| anyhow!("equiv needs --sig2"))?), cfg)?;
            let (q1, q2) = (categorify(s1), categorify(s2));
            match check_equivalence(&q1, &q2, &budget(cfg)) {
                Ok(r) => Ok(Outcome::new(Status::of(r.equivalent()), &r, serde_json::to_value(&r)?)),
                Err(e @ CatqError::Incomparable { .. }) => Ok(Outcome::new(
                    Status::Incomparable,
                    format!("not comparable: {e}"),
                    json!({"error": e.to_string()}),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Verb::Carriers => {
            let mut text = Vec::new();
            let mut rows = Vec::new();
            for n in 0..=cfg.arity_cap {
                let c = p
                    .carrier(n)
                    .ok_or_else(|| anyhow!("arity {n} is not enumerable for {}", p.name()))?;
                let elems: Vec<String> = c.iter().map(ToString::to_string).collect();
                text.push(format!("{n}: {}", elems.join(" ")));
                rows.push(json!({"arity": n, "elements": elems}));
            }
            Ok(Outcome::new(Status::Pass, text.join("\n"), json!(rows)))
        }
        Verb::Roundtrip | Verb::SmcCheck | Verb::ExportSmc => unreachable!("handled before operad resolution"),
    }
}

fn load_smc(cfg: &Config) -> Result<SmcStructure> {
    let name = cfg.smc.as_deref().ok_or_else(|| anyhow!("--smc is required"))?;
    if Path::new(name).is_file() {
        let src = std::fs::read_to_string(name)?;
        return Ok(SmcStructure::from_json(&src)?);
    }
    let stem = name.strip_suffix(".json").unwrap_or(name);
    builtin_smc(stem).ok_or_else(|| {
        anyhow!(
            "unknown structure {name}; built-ins are {} or a JSON file",
            BUILTIN_SMCS.join(", ")
        )
    })
}

fn roundtrip(cfg: &Config) -> Result<Outcome> {
    let s = load_smc(cfg)?;
    let axioms = check_smc_axioms(&s);
    if !axioms.passed() {
        return Ok(Outcome::report(&axioms));
    }
    let b = AlgebraBudget {
        arity_cap: cfg.arity_cap,
        depth_cap: cfg.depth_cap,
        seed: cfg.seed,
        ..AlgebraBudget::default()
    };
    let mut report = CheckReport::new(format!("round trips on {}", s.name));
    report.merge(roundtrip_rs(&s)?);
    report.merge(roundtrip_sr(&smc_to_qalgebra(s.clone())?, &b)?);
    report.merge(check_well_defined(&s, &b));
    Ok(Outcome::report(&report))
}
