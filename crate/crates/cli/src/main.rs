//! `udtfs`: generate set systems, inspect them, and build and check
//! defining certificates for their types.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use udtfs_core::certificate::votes_for;
use udtfs_core::io;
use udtfs_core::rational;
use udtfs_core::{
    compress_all, count_types_check, decode, eval_exists, eval_forall, isolate, make_template,
    min_teaching_set, t_budget, BitRow, Certificate, Compressor, Error, PipelineConfig, SetSystem,
    TypeOverA,
};
use udtfs_corpus::{parse_spec_list, run_experiment, write_csv, ExperimentConfig, FamilySpec};

#[derive(Parser)]
#[command(name = "udtfs", version, about = "Defining certificates for types over finite set systems")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on the adaptive tuple size.
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// Solve games exactly.
    #[arg(long, global = true, conflicts_with = "approx_lp")]
    exact_lp: bool,
    /// Solve games by multiplicative weights.
    #[arg(long, global = true)]
    approx_lp: bool,
    /// Certified gap for the approximate solver, as p/q.
    #[arg(long, global = true, default_value = "1/48")]
    tolerance: String,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a system from a spec such as `intervals(5)` or `random(10,6)@1`.
    Gen {
        spec: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the structured (JSON) format.
        #[arg(long)]
        json: bool,
    },
    /// VC dimension, a shattered witness, and the dual VC dimension.
    Vcdim { file: PathBuf },
    /// The dual system.
    Dual {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A teaching set by k-isolation.
    Isolate {
        file: PathBuf,
        /// Also report the brute-force minimum for the same row.
        #[arg(long)]
        oracle: bool,
    },
    /// Compress one type into a certificate.
    Compress {
        file: PathBuf,
        /// A row index or a 0/1 string.
        #[arg(long = "type")]
        type_: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate against a system.
    Verify {
        file: PathBuf,
        cert: PathBuf,
        /// Expected type (row index or 0/1 string).
        #[arg(long = "type")]
        type_: Option<String>,
    },
    /// Compress every type and fit one template.
    Template {
        file: PathBuf,
        #[arg(long)]
        all_types: bool,
    },
    /// Run the pipeline on every spec of a file and write CSV.
    Experiment {
        specfile: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Fill the runtime_ms column.
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Verification(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) | Error::Unsatisfiable => Failure::Input(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> CliResult<SetSystem> {
    Ok(io::parse_auto(&read(path)?)?)
}

fn emit(text: &str, output: Option<&Path>) -> CliResult {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_type(s: &SetSystem, spec: &str) -> CliResult<TypeOverA> {
    // a 0/1 string of full width is a trace, anything else a row index
    let is_bits = spec.len() == s.n_columns() && spec.chars().all(|c| c == '0' || c == '1');
    if !is_bits {
        let i: usize = spec
            .parse()
            .map_err(|_| Failure::Input(format!("bad type {spec:?}")))?;
        return Ok(s.type_of_row(i)?);
    }
    let bits = BitRow::parse(spec).ok_or_else(|| Failure::Input(format!("bad type {spec:?}")))?;
    Ok(s.type_of(&bits)?)
}

fn pipeline_config(g: &Global) -> CliResult<PipelineConfig> {
    let solver = if g.exact_lp {
        "exact-lp"
    } else if g.approx_lp {
        "approx-mwu"
    } else {
        "auto"
    };
    Ok(PipelineConfig {
        solver: solver.into(),
        tolerance: rational::parse(&g.tolerance)?,
        max_n: g.max_n,
        seed: g.seed,
    })
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> CliResult {
    let g = &cli.global;
    match cli.command {
        Command::Gen { spec, output, json } => {
            let spec: FamilySpec = spec.parse()?;
            let s = spec.generate()?;
            let text = if json { io::to_json(&s) + "\n" } else { io::to_text(&s) };
            emit(&text, output.as_deref())
        }
        Command::Vcdim { file } => {
            let s = load(&file)?;
            let w = s.vc_witness();
            println!("vc {}", w.len());
            println!("witness {:?}", w.as_slice());
            println!("dual_vc {}", s.dual().vc_dim());
            Ok(())
        }
        Command::Dual { file, output } => {
            let s = load(&file)?;
            emit(&io::to_text(&s.dual()), output.as_deref())
        }
        Command::Isolate { file, oracle } => {
            let s = load(&file)?;
            let ts = isolate(&s);
            print!("{}", json(&ts));
            println!("budget t({}) = {}", s.vc_dim(), t_budget(s.vc_dim()));
            if oracle {
                let min = min_teaching_set(&s, ts.concept)?;
                println!("oracle {:?} (size {})", min.as_slice(), min.len());
            }
            Ok(())
        }
        Command::Compress { file, type_, output } => {
            let s = load(&file)?;
            let p = parse_type(&s, &type_)?;
            let c = Compressor::new(&s, pipeline_config(g)?)?.compress(&p)?;
            eprintln!(
                "N {} pool {} value {} m {} k_max {} margin {}",
                c.n_used,
                c.pool_size(),
                rational::format(&c.game.value),
                c.certificate.m(),
                c.certificate.k_max(),
                rational::format(&c.committee.margin)
            );
            emit(&(c.certificate.to_json() + "\n"), output.as_deref())
        }
        Command::Verify { file, cert, type_ } => {
            let s = load(&file)?;
            let cert = Certificate::from_json(&s, &read(&cert)?)?;
            let m = cert.m();
            println!("m {m}");
            println!("k_max {}", cert.k_max());
            let mut ok = true;
            for a in 0..s.n_columns() {
                let ones = votes_for(&cert, a);
                let (e, f) = (eval_exists(&cert, a), eval_forall(&s, &cert, a));
                let winning = if e { ones } else { m - ones };
                let strict = 2 * winning > m;
                ok &= e == f && strict;
                println!(
                    "column {} exists {} forall {} margin {}",
                    s.columns()[a],
                    u8::from(e),
                    u8::from(f),
                    rational::format(&rational::ratio(winning as i64, m as i64))
                );
            }
            let decoded = decode(&s, &cert);
            match &decoded {
                Ok(t) => println!("decoded {} (row {})", t.bits, t.realizer),
                Err(e) => {
                    println!("decoded: {e}");
                    ok = false;
                }
            }
            if let (Some(spec), Ok(t)) = (type_, &decoded) {
                let expected = parse_type(&s, &spec)?;
                if expected.bits != t.bits {
                    println!("expected {}", expected.bits);
                    ok = false;
                }
            }
            println!("status {}", if ok { "pass" } else { "fail" });
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification("certificate check failed".into()))
            }
        }
        Command::Template { file, all_types } => {
            if !all_types {
                return Err(Failure::Input("template needs --all-types".into()));
            }
            let s = load(&file)?;
            let summary = compress_all(&s, pipeline_config(g)?)?;
            let (template, _) = make_template(&s, &summary.certificates)?;
            print!("{}", json(&template));
            let report = count_types_check(&s, template.k_param)?;
            println!(
                "types {} <= {}^{}: {}",
                report.distinct_rows, report.columns, report.k_param, report.counting_holds
            );
            println!(
                "shattered {:?}: {} traces = 2^{}: {}",
                report.witness.as_slice(),
                report.witness_traces,
                report.vc,
                report.shatter_holds
            );
            if report.holds() {
                Ok(())
            } else {
                Err(Failure::Verification("type counting failed".into()))
            }
        }
        Command::Experiment { specfile, output, timings } => {
            let specs = parse_spec_list(&read(&specfile)?)?;
            let config = ExperimentConfig {
                pipeline: pipeline_config(g)?,
                timings,
            };
            let records = run_experiment(&specs, &config);
            let mut buf = Vec::new();
            write_csv(&records, &mut buf)?;
            emit(&String::from_utf8(buf).expect("csv is utf-8"), output.as_deref())?;
            let failed: Vec<_> = records.iter().filter(|r| !r.passed()).collect();
            for r in &failed {
                eprintln!("{}: {}", r.family, r.reason);
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{} system(s) failed", failed.len())))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(2)
        }
    }
}
