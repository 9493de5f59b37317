use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sl2lab::algebra::{parse_rational_function, Field, Place};
use sl2lab::cocycle::{pairing_matrix_with, phi, PhiOptions, DEFAULT_THRESHOLD};
use sl2lab::complex::{Chain, ProductVertex};
use sl2lab::dot::{ball_dot, chain_dot};
use sl2lab::group::{d_power, Matrix2, RingSpec, Unipotent};
use sl2lab::io;
use sl2lab::tree::{act, distance, line_vertex, TreeVertex};
use sl2lab::verify::{run_all, run_one, Certificate, VerifyConfig, Verdict};

#[derive(Parser)]
#[command(name = "sl2lab", version, about = "Trees, cycles and cocycles for SL2 over Laurent polynomial rings")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Config {
    /// Field backend: q or fp:<p>.
    #[arg(long, global = true, default_value = "q")]
    field: Field,
    /// Coefficient ring J; must match the field.
    #[arg(long, global = true, value_enum)]
    ring: Option<RingArg>,
    /// Cells with a vertex below this beta_rho are dropped from Phi_n.
    #[arg(long, global = true, default_value_t = DEFAULT_THRESHOLD, allow_negative_numbers = true)]
    threshold: i64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Word-ball radius for the group searches.
    #[arg(long, global = true, default_value_t = 2)]
    word_radius: usize,
    /// Sample count for the sampled certificates.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z,
    Fp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Valuation of a rational function at zero or infinity.
    Val {
        #[arg(long, default_value = "zero")]
        place: Place,
        expr: String,
    },
    /// Distance between two vertices of one tree.
    Dist { a: String, b: String },
    /// Apply a matrix to a vertex, a product vertex or a chain.
    Act { matrix: String, target: String },
    /// phi_n of a chain file ("-" for stdin).
    Phi { n: i64, chain: String },
    /// Pairing of Phi_{m+2}, ..., Phi_{m+2k} against B_{m+2}, ..., B_{m+2k}.
    Pairing { m: i64, k: usize },
    /// Run one certificate, or "all".
    Verify { tag: String },
    /// DOT output.
    Render {
        #[command(subcommand)]
        what: Render,
    },
}

#[derive(Subcommand)]
enum Render {
    /// A ball in one tree (finite fields only).
    Ball {
        center: String,
        #[arg(long, default_value_t = 2)]
        radius: u64,
    },
    /// The support of a chain file projected to one factor.
    Chain {
        file: String,
        #[arg(long, default_value = "zero")]
        place: Place,
    },
}

enum Output {
    Done(String),
    /// The run completed but its check did not pass.
    Failed(String),
}

impl Config {
    fn ring(&self) -> Result<RingSpec> {
        match (self.ring, self.field) {
            (None | Some(RingArg::Z), Field::Rationals) => Ok(RingSpec::Integers),
            (None | Some(RingArg::Fp), Field::Prime(p)) => Ok(RingSpec::PrimeField(p)),
            (Some(RingArg::Z), f) => bail!("ring z needs --field q, got {f}"),
            (Some(RingArg::Fp), _) => bail!("ring fp needs --field fp:<p>"),
        }
    }

    fn validate(&self) -> Result<()> {
        self.ring()?;
        if self.word_radius == 0 || self.samples == 0 {
            bail!("--word-radius and --samples must be positive");
        }
        Ok(())
    }

    fn phi_options(&self) -> PhiOptions {
        PhiOptions { threshold: self.threshold, ..PhiOptions::default() }
    }

    fn verify_config(&self) -> Result<VerifyConfig> {
        Ok(VerifyConfig {
            ring: self.ring()?,
            seed: self.seed,
            threshold: self.threshold,
            word_radius: self.word_radius,
            samples: self.samples,
            ..VerifyConfig::default()
        })
    }
}

fn read_source(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    let path = arg.strip_prefix('@').unwrap_or(arg);
    fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
}

/// `@path` reads JSON from a file; anything else is JSON text.
fn json_arg(arg: &str) -> Result<Value> {
    let text = if arg.starts_with('@') { read_source(arg)? } else { arg.to_string() };
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in '{arg}'"))
}

/// `line:<place>:<s>` or a JSON vertex.
fn vertex_arg(arg: &str, field: Field) -> Result<TreeVertex> {
    if let Some(rest) = arg.strip_prefix("line:") {
        let (place, s) = rest.split_once(':').ok_or_else(|| anyhow!("expected line:<place>:<s>, got '{arg}'"))?;
        let place: Place = place.parse().map_err(|e: String| anyhow!(e))?;
        let s: i64 = s.parse().with_context(|| format!("bad line parameter '{s}'"))?;
        return Ok(line_vertex(place, s, field));
    }
    Ok(io::vertex_from_json(&json_arg(arg)?, field)?)
}

/// `id`, `d:<k>` for `D^k`, `u:<expr>` for `(1 expr; 0 1)`, or a JSON matrix.
fn matrix_arg(arg: &str, field: Field) -> Result<Matrix2> {
    if arg == "id" {
        return Ok(Matrix2::identity(field));
    }
    if let Some(k) = arg.strip_prefix("d:") {
        return Ok(d_power(field, k.parse().with_context(|| format!("bad power '{k}'"))?));
    }
    if let Some(expr) = arg.strip_prefix("u:") {
        return Ok(Unipotent(parse_rational_function(expr, field)?).matrix());
    }
    Ok(io::matrix_from_json(&json_arg(arg)?, field)?)
}

fn chain_file(arg: &str, field: Field) -> Result<Chain> {
    let v: Value = serde_json::from_str(&read_source(arg)?).with_context(|| format!("malformed JSON in {arg}"))?;
    Ok(io::chain_from_json(&v, field)?)
}

fn emit(format: Format, value: Value, text: impl FnOnce() -> String) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&value)?),
        Format::Text => Ok(text()),
        Format::Dot => bail!("--format dot is only available for render"),
    }
}

fn certificate_line(c: &Certificate) -> String {
    let mut line = format!("{:<20} {}", c.lemma, c.verdict);
    for note in &c.notes {
        line.push_str(&format!("\n  {note}"));
    }
    line
}

fn run(cli: &Cli) -> Result<Output> {
    let cfg = &cli.config;
    cfg.validate()?;
    let field = cfg.field;
    let done = |s: String| Ok(Output::Done(s));
    match &cli.cmd {
        Command::Val { place, expr } => {
            let v = parse_rational_function(expr, field)?.valuation(*place);
            let value = match v.finite() {
                Some(k) => json!(k),
                None => json!("+inf"),
            };
            done(emit(cfg.format, json!({"place": place, "valuation": value}), || v.to_string())?)
        }
        Command::Dist { a, b } => {
            let d = distance(&vertex_arg(a, field)?, &vertex_arg(b, field)?)?;
            done(emit(cfg.format, json!({"distance": d}), || d.to_string())?)
        }
        Command::Act { matrix, target } => {
            let g = matrix_arg(matrix, field)?;
            let out = if target.starts_with("line:") {
                let v = act(&g, &vertex_arg(target, field)?);
                emit(cfg.format, io::vertex_to_json(&v), || v.to_string())?
            } else {
                let v = json_arg(target)?;
                if v.is_array() {
                    let c = io::chain_from_json(&v, field)?.act(&g);
                    emit(cfg.format, io::chain_to_json(&c), || {
                        c.iter().map(|(cell, a)| format!("{a}  {cell}")).collect::<Vec<_>>().join("\n")
                    })?
                } else if v.get("place").is_some() {
                    let w = act(&g, &io::vertex_from_json(&v, field)?);
                    emit(cfg.format, io::vertex_to_json(&w), || w.to_string())?
                } else {
                    let p: ProductVertex = io::point_from_json(&v, field)?.act(&g);
                    emit(cfg.format, io::point_to_json(&p), || format!("{} x {}", p.inf(), p.zero()))?
                }
            };
            done(out)
        }
        Command::Phi { n, chain } => {
            let value = phi(*n, &chain_file(chain, field)?);
            done(emit(cfg.format, json!({"n": n, "value": value.to_string()}), || value.to_string())?)
        }
        Command::Pairing { m, k } => {
            if *k == 0 {
                bail!("k must be positive");
            }
            let indices: Vec<i64> = (1..=*k as i64).map(|i| m + 2 * i).collect();
            let report = pairing_matrix_with(&indices, cfg.ring()?, &cfg.phi_options())?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let text = emit(cfg.format, io::pairing_to_json(&report), || {
                let mut lines = vec![format!("indices: {:?}", report.indices)];
                for row in &report.matrix {
                    lines.push(row.iter().map(ToString::to_string).collect::<Vec<_>>().join("\t"));
                }
                lines.push(format!("triangular: {}", Verdict::of(report.triangular)));
                lines.push(format!("rank: {}", report.rank));
                lines.join("\n")
            })?;
            if report.triangular && report.rank == indices.len() {
                done(text)
            } else {
                Ok(Output::Failed(text))
            }
        }
        Command::Verify { tag } => {
            let vc = cfg.verify_config()?;
            let (certs, value) = if tag == "all" {
                let certs = run_all(&vc)?;
                let value = serde_json::to_value(&certs)?;
                (certs, value)
            } else {
                let c = run_one(tag, &vc)?;
                let value = serde_json::to_value(&c)?;
                (vec![c], value)
            };
            let text = emit(cfg.format, value, || certs.iter().map(certificate_line).collect::<Vec<_>>().join("\n"))?;
            if certs.iter().all(Certificate::passed) {
                done(text)
            } else {
                Ok(Output::Failed(text))
            }
        }
        Command::Render { what } => {
            if cfg.format == Format::Json {
                bail!("render produces DOT; use --format dot or text");
            }
            match what {
                Render::Ball { center, radius } => done(ball_dot(&vertex_arg(center, field)?, *radius)?),
                Render::Chain { file, place } => done(chain_dot(&chain_file(file, field)?, *place)),
            }
        }
    }
}

fn write(cli: &Cli, text: &str) -> Result<()> {
    let text = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
    match &cli.config.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| match out {
        Output::Done(text) => write(&cli, &text).map(|_| true),
        Output::Failed(text) => write(&cli, &text).map(|_| false),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
