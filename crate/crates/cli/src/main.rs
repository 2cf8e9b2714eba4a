use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use cutpath::certify::{self, BoundParams, Certificate, QConfig, Verdict};
use cutpath::flips::{greedy_maximize, DEFAULT_MAX_STEPS};
use cutpath::oracle::{count_arrangements, gamma_exact};
use cutpath::rational::{self, Rational};
use cutpath::{generators, Analysis, CellComplex, Exec, WiringDiagram};

#[derive(Parser)]
#[command(name = "cutpath", version, about = "Cutpaths of pseudoline arrangements")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    OddEven,
    Bubblesort,
    Ai,
    Stacked,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Svg,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated wiring diagram.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        /// Base arrangement for the stacked family.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a file holds a valid wiring diagram.
    Validate { file: PathBuf },
    /// Exact number of cutpaths.
    Count {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cutpath lemma checks or zone complexities.
    #[command(group(ArgGroup::new("what").required(true).args(["lemmas", "zones"])))]
    Stats {
        file: PathBuf,
        #[arg(long)]
        lemmas: bool,
        #[arg(long)]
        zones: bool,
    },
    /// Count all marked arrangements of n lines.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Also find the maximum number of cutpaths.
        #[arg(long)]
        gamma: bool,
    },
    /// Greedy triangle-flip search.
    Flips {
        file: PathBuf,
        #[arg(long, required = true)]
        greedy: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Where to write the final diagram.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the branch and bound and write its certificate.
    Certify {
        #[arg(long, default_value = "1.29915")]
        threshold: String,
        #[arg(long, default_value = "0.01")]
        tangent_step: String,
        #[arg(long, default_value_t = 48)]
        precision_bits: u32,
        #[arg(long, default_value_t = 64)]
        depth_cap: usize,
        /// Zone constant; anything but 3/2 gives an exploratory run.
        #[arg(long, default_value = "3/2")]
        zone: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Independently re-check a certificate.
    VerifyCert { file: PathBuf },
    /// Export a diagram as DOT, SVG or JSON.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Validation(String),
    Certification(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Certification(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Certification(m) | Failure::Io(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<WiringDiagram, Failure> {
    let text = read(path)?;
    WiringDiagram::parse_wd(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn parse_rational(flag: &str, s: &str) -> Result<Rational, Failure> {
    rational::parse(s).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

fn need(flag: &str, v: Option<usize>) -> Result<usize, Failure> {
    match v {
        Some(x) if x >= 1 => Ok(x),
        Some(_) => Err(Failure::Usage(format!("--{flag} must be at least 1"))),
        None => Err(Failure::Usage(format!("--{flag} is required for this family"))),
    }
}

fn run(cli: Cli) -> Outcome {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match cli.command {
        Command::Gen {
            family,
            n,
            i,
            base,
            out,
        } => {
            let d = match family {
                Family::OddEven => generators::odd_even_arrangement(need("n", n)?),
                Family::Bubblesort => generators::bubblesort_arrangement(need("n", n)?),
                Family::Ai => generators::build_ai(need("i", i)?),
                Family::Stacked => {
                    let base = base.ok_or_else(|| Failure::Usage("--base is required for stacked".into()))?;
                    generators::stacked_lower_bound(need("n", n)?, &load(&base)?)
                }
            };
            emit(out.as_deref(), &d.to_wd())
        }
        Command::Validate { file } => {
            let d = load(&file)?;
            println!("ok: {} pseudolines, {} swaps", d.n(), d.swaps().len());
            Ok(())
        }
        Command::Count { file, json } => {
            let d = load(&file)?;
            let c = cutpath::count_cutpaths(&CellComplex::build(&d));
            if json {
                println!("{}", serde_json::json!({ "n": d.n(), "count": c.to_string() }));
            } else {
                println!("{c}");
            }
            Ok(())
        }
        Command::Stats { file, lemmas, zones } => {
            let d = load(&file)?;
            if zones {
                let r = CellComplex::build(&d).zone_report();
                println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            }
            if lemmas {
                let r = Analysis::new(&d)
                    .verify_lemmas()
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
                if !r.all_passed() {
                    return Err(Failure::Validation("a lemma check failed".into()));
                }
            }
            Ok(())
        }
        Command::Enumerate { n, gamma } => {
            if gamma {
                let g = gamma_exact(n, exec).map_err(|e| Failure::Usage(e.to_string()))?;
                println!("n\tclasses\tgamma_n\tmaximizers");
                println!("{}\t{}\t{}\t{}", g.n, g.classes, g.gamma, g.maximizers);
                print!("{}", g.maximizer.to_wd());
            } else {
                let c = count_arrangements(n, exec).map_err(|e| Failure::Usage(e.to_string()))?;
                println!("n\tclasses");
                println!("{n}\t{c}");
            }
            Ok(())
        }
        Command::Flips {
            file,
            greedy: _,
            max_steps,
            out,
        } => {
            let d = load(&file)?;
            let (end, trace) = greedy_maximize(&d, max_steps, exec);
            println!("{}", serde_json::to_string_pretty(&trace).expect("trace serializes"));
            if let Some(p) = out {
                emit(Some(&p), &end.to_wd())?;
            }
            Ok(())
        }
        Command::Certify {
            threshold,
            tangent_step,
            precision_bits,
            depth_cap,
            zone,
            out,
        } => {
            let step = parse_rational("tangent-step", &tangent_step)?;
            let config = QConfig {
                tangent_cs: certify::tangent_grid(&step).map_err(|e| Failure::Usage(e.to_string()))?,
                precision_bits,
                zone: parse_rational("zone", &zone)?,
            };
            let params = BoundParams {
                threshold: parse_rational("threshold", &threshold)?,
                depth_cap,
                config,
                exec,
            };
            let cert = certify::certify(&params).map_err(|e| Failure::Certification(e.to_string()))?;
            emit(Some(&out), &cert.to_json())?;
            println!(
                "verdict {:?}: {} nodes, max depth {}",
                cert.verdict, cert.totals.nodes, cert.totals.max_depth
            );
            if cert.verdict != Verdict::Success {
                return Err(Failure::Certification("bisection hit the depth cap".into()));
            }
            match certify::exponent_report(&cert) {
                Ok(r) => println!("{r}"),
                Err(e) => println!("{e}"),
            }
            Ok(())
        }
        Command::VerifyCert { file } => {
            let cert = Certificate::from_json(&read(&file)?).map_err(|e| Failure::Validation(e.to_string()))?;
            let defects =
                certify::verify_certificate(&cert, exec).map_err(|e| Failure::Certification(e.to_string()))?;
            if !defects.is_empty() {
                for d in &defects {
                    eprintln!("{d}");
                }
                return Err(Failure::Certification(format!("{} defects", defects.len())));
            }
            println!("certificate ok: {} nodes re-checked", cert.totals.nodes);
            let r = certify::exponent_report(&cert).map_err(|e| Failure::Certification(e.to_string()))?;
            println!("{r}");
            Ok(())
        }
        Command::Export { file, format, out } => {
            let d = load(&file)?;
            let text = match format {
                Format::Dot => CellComplex::build(&d).to_dot(),
                Format::Json => serde_json::to_string_pretty(&d).expect("diagram serializes") + "\n",
                Format::Svg => cutpath::render::render_svg(&d).map_err(|e| Failure::Usage(e.to_string()))?,
            };
            emit(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
