use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use adlv_core::components::component_report;
use adlv_core::sigma::newton_point;
use adlv_core::{DatumSpec, RootDatum};
use adlv_lab::grid::{GridEntry, GridRef};
use adlv_lab::report::text_table;
use adlv_lab::{checkers, context, replay, run_checker, run_suite, CheckReport, CheckerConfig, LabError, Status, Suite, SweepMode};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "adlv", version, about = "Affine Weyl group combinatorics and lemma checking")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Summarize a root datum given as a JSON file or a label such as `A1xA1`.
    Datum { spec: String },
    /// List `Adm(λ)`.
    Adm {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Newton and Kottwitz points of an element.
    Newton {
        #[arg(long)]
        elem: String,
        #[arg(long, default_value = "id")]
        sigma: String,
        /// Defaults to `A_n` with `n` the number of translation coordinates.
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// The connected-component report for `(λ, b)`.
    Components {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, default_value = "id")]
        sigma: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        b: String,
    },
    /// Run one checker; append `~negate` or `~drop` for a mutated twin.
    Check {
        lemma_id: String,
        #[arg(long = "type")]
        ty: Option<String>,
        #[arg(long, default_value = "id")]
        sigma: String,
        /// Repeatable; defaults to all dominant λ up to `--max-height`.
        #[arg(long)]
        lambda: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_height: i64,
        #[arg(long, default_value_t = 10)]
        length_bound: usize,
        /// Named grid used when `--type` is absent.
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.1)]
        sample_rate: f64,
        #[arg(long)]
        hypothesis_q: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a suite file.
    Suite {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the counterexamples stored in a JSON check report.
    Replay { report: PathBuf },
    /// List registered checkers and their twins.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

fn parse_ints(s: &str) -> Result<Vec<i64>, LabError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| LabError::ConfigParse(format!("`{s}`: {e}"))))
        .collect()
}

fn load_datum(spec: &str) -> Result<RootDatum, LabError> {
    if std::path::Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)?;
        let ds: DatumSpec = serde_json::from_str(&text).map_err(|e| LabError::ConfigParse(e.to_string()))?;
        Ok(RootDatum::new(&ds)?)
    } else {
        Ok(RootDatum::from_label(spec)?)
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), LabError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(text.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn check_exit(r: &CheckReport) -> ExitCode {
    match r.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Vacuous => {
            eprintln!("warning: {} had no hypothesis hits", r.lemma_id);
            ExitCode::SUCCESS
        }
        _ => ExitCode::FAILURE,
    }
}

fn run(cli: Cli) -> Result<ExitCode, LabError> {
    match cli.cmd {
        Cmd::Datum { spec } => {
            let d = load_datum(&spec)?;
            let simple: Vec<String> = (0..d.num_simple_affine()).map(|s| d.s_name(s)).collect();
            let v = json!({
                "label": d.label(),
                "rank": d.rank(),
                "cartan": d.cartan(),
                "roots": d.num_roots(),
                "weyl_order": d.weyl_order(),
                "simple_affine": simple,
                "pi1_divisors": d.pi1().divisors(),
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Cmd::Adm { ty, lambda, format } => {
            let d = context::datum(&ty)?;
            let l = parse_ints(&lambda)?;
            let adm = context::adm(&ty, &l)?;
            let elems: Vec<String> = adm.iter().map(|x| d.format_elem(x)).collect();
            match format {
                Format::Json => {
                    let v = json!({"datum": ty, "lambda": l, "size": adm.len(), "elements": elems});
                    println!("{}", serde_json::to_string_pretty(&v).unwrap());
                }
                Format::Text => {
                    println!("|Adm({l:?})| = {}", adm.len());
                    for (x, e) in adm.iter().zip(&elems) {
                        println!("{:>3}  {e}", d.length(x));
                    }
                }
            }
        }
        Cmd::Newton { elem, sigma, ty } => {
            let ty = match ty {
                Some(t) => t,
                None => {
                    let inner = elem.split_once('[').and_then(|(_, r)| r.split_once(']')).map(|(a, _)| a.to_string());
                    let n = inner.map(|s| s.split(',').count()).unwrap_or(1);
                    format!("A{n}")
                }
            };
            let f = context::frobenius(&ty, &sigma)?;
            let x = f.datum().parse_elem(&elem)?;
            let nk = newton_point(&f, &x);
            let v = json!({"datum": ty, "sigma": sigma, "elem": f.datum().format_elem(&x), "newton": nk.newton, "nu": nk.nu, "kottwitz": nk.kottwitz, "m": nk.m});
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Cmd::Components { ty, sigma, lambda, b } => {
            let f = context::frobenius(&ty, &sigma)?;
            let d = f.datum();
            let l = d.coords(&parse_ints(&lambda)?);
            let b = d.parse_elem(&b)?;
            let r = component_report(&f, &l, &b)?;
            println!("{}", serde_json::to_string_pretty(&r).unwrap());
        }
        Cmd::Check {
            lemma_id,
            ty,
            sigma,
            lambda,
            max_height,
            length_bound,
            grid,
            cap,
            seed,
            mode,
            sample_rate,
            hypothesis_q,
            format,
            out,
        } => {
            let grid = match ty {
                Some(t) => {
                    let mut e = GridEntry::new(&t, &sigma).with_height(max_height).with_length(length_bound);
                    if !lambda.is_empty() {
                        e = e.with_lambdas(lambda.iter().map(|s| parse_ints(s)).collect::<Result<_, _>>()?);
                    }
                    GridRef::Inline(vec![e])
                }
                None => GridRef::Named(grid),
            };
            let cfg = CheckerConfig {
                lemma_id,
                grid,
                instance_cap: cap,
                seed,
                mode: match mode {
                    ModeArg::Exhaustive => SweepMode::Exhaustive,
                    ModeArg::Sampled => SweepMode::Sampled,
                },
                sample_rate,
                hypothesis_q,
            };
            let start = Instant::now();
            let r = run_checker(&cfg)?;
            eprintln!("elapsed {:.2}s", start.elapsed().as_secs_f64());
            match format {
                Format::Json => emit(&format!("{}\n", r.to_json()), &out)?,
                Format::Text => emit(&text_table(std::slice::from_ref(&r)), &out)?,
            }
            return Ok(check_exit(&r));
        }
        Cmd::Suite { file, format, out } => {
            let s = Suite::load(&file)?;
            let start = Instant::now();
            let r = run_suite(&s)?;
            eprintln!("elapsed {:.2}s", start.elapsed().as_secs_f64());
            match format {
                Format::Json => emit(&format!("{}\n", r.to_json()), &out)?,
                Format::Text => emit(&r.to_text(), &out)?,
            }
            return Ok(if r.ok { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Cmd::Replay { report } => {
            let text = std::fs::read_to_string(&report)?;
            let r: CheckReport = serde_json::from_str(&text).map_err(|e| LabError::ConfigParse(e.to_string()))?;
            let res = replay(&r)?;
            let mut text = String::new();
            for (c, ok) in r.counterexamples.iter().zip(&res) {
                text.push_str(&format!("{} {}\n", if *ok { "reproduced" } else { "NOT reproduced" }, serde_json::to_string(&c.witness).unwrap()));
            }
            emit(&text, &None)?;
            return Ok(if res.iter().all(|&b| b) { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Cmd::List => {
            let mut text = String::new();
            for c in checkers::registry() {
                let twins: Vec<&str> = c.twins.iter().map(|m| m.suffix()).collect();
                text.push_str(&format!("{:<18} {:<12} {:<22} {}\n", c.id, c.group, twins.join(" "), c.quote));
            }
            emit(&text, &None)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
