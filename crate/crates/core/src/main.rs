use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use torus_dml::analyzer::{analyze, parse_component, run_reduction, Params, Problem, StructureReport};
use torus_dml::dynamics::{iterate_exact, on_curve_exact, on_curve_modular};
use torus_dml::lrs::{parse_q, solve_eq_const, solve_eq_parith, Lrs, SearchBounds};
use torus_dml::Error;

#[derive(Parser)]
#[command(name = "torus-dml", version, about = "Return sets of monomial-affine maps on G_m^N over F_p(t)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// exact scan bound
    #[arg(long)]
    nmax: Option<u64>,
    /// modular verification horizon
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    modular_degree: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// largest exponent step tried when fitting p-arithmetic sequences
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl Common {
    fn params(&self, problem: &Problem) -> Params {
        let mut p = problem.params();
        if let Some(x) = self.nmax {
            p.nmax = x;
        }
        if let Some(x) = self.horizon {
            p.horizon = x as u64;
        }
        if let Some(x) = self.modular_degree {
            p.modular.degree = x;
        }
        if let Some(x) = self.trials {
            p.modular.trials = x;
        }
        if let Some(x) = self.seed {
            p.modular.seed = x;
        }
        if let Some(x) = self.kmax {
            p.kmax = x;
        }
        p
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact scan, structure fit and modular verification
    Analyze {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Certified answer from the F-sets listed in the problem file
    Reduce {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print Φⁿ(α)
    Iterate {
        spec: PathBuf,
        #[arg(long)]
        n: u64,
        /// additive coordinates instead of exact rational functions
        #[arg(long)]
        lattice: bool,
    },
    /// Decide whether Φⁿ(α) lies on V
    Member {
        spec: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        modular: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Index-set algebra
    Seq {
        #[command(subcommand)]
        op: SeqOp,
    },
    /// Linear recurrence equations
    Lrs {
        #[command(subcommand)]
        op: LrsOp,
    },
}

#[derive(Subcommand)]
enum SeqOp {
    /// Intersect components given as JSON, e.g. '{"type":"ap","m":8,"l":1}'
    Intersect { sets: Vec<String> },
}

#[derive(Subcommand)]
enum LrsOp {
    /// Solve u_n = c, or u_n = a p^{km} + b with --parith a,b,k,p
    Solve {
        /// '{"coeffs":["-1","-1"],"init":["0","1"]}'
        lrs: String,
        #[arg(long, conflicts_with = "parith")]
        c: Option<String>,
        /// a,b,k,p
        #[arg(long, allow_hyphen_values = true)]
        parith: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
        #[arg(long, default_value_t = 60)]
        m_max: u32,
    },
}

enum Failure {
    Input(String),
    CrossCheck(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CrossCheck(m) => Failure::CrossCheck(m),
            e => Failure::Input(e.to_string()),
        }
    }
}

fn load(path: &PathBuf) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(Problem::from_json(&text)?)
}

fn emit_report(r: &StructureReport, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(r).unwrap()),
        Format::Text => print!("{}", r.to_text()),
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap());
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { spec, common } => {
            let problem = load(&spec)?;
            let report = analyze(&problem, &common.params(&problem))?;
            emit_report(&report, common.format);
        }
        Command::Reduce { spec, common } => {
            let problem = load(&spec)?;
            let report = run_reduction(&problem, &common.params(&problem))?;
            emit_report(&report, common.format);
        }
        Command::Iterate { spec, n, lattice } => {
            let problem = load(&spec)?;
            if lattice {
                let v = problem.lattice()?;
                let rep = v.orbit_point(&problem.phi, n);
                let primes: Vec<String> = v.basis.primes().iter().map(ToString::to_string).collect();
                emit(&json!({ "n": n, "primes": primes, "torsion_generator": v.basis.torsion_generator(), "rep": rep }));
            } else {
                let x = iterate_exact(&problem.phi, &problem.alpha, n)?;
                let coords: Vec<String> = x.coords().iter().map(ToString::to_string).collect();
                emit(&json!({ "n": n, "point": coords }));
            }
        }
        Command::Member { spec, n, modular, common } => {
            let problem = load(&spec)?;
            if modular {
                let params = common.params(&problem);
                let v = problem.lattice()?;
                let rep = v.orbit_point(&problem.phi, n);
                let out = on_curve_modular(&problem.curve, &rep, &v.basis, &params.modular)?;
                emit(&json!({ "n": n, "method": "modular", "outcome": out }));
            } else {
                let x = iterate_exact(&problem.phi, &problem.alpha, n)?;
                emit(&json!({ "n": n, "method": "exact", "hit": on_curve_exact(&problem.curve, &x)? }));
            }
        }
        Command::Seq { op: SeqOp::Intersect { sets } } => {
            if sets.is_empty() {
                return Err(Failure::Input("nothing to intersect".into()));
            }
            let mut acc = None;
            for s in &sets {
                let v: Value = serde_json::from_str(s).map_err(|e| Failure::Input(format!("{s}: {e}")))?;
                let set = parse_component(&v)?;
                acc = Some(match acc {
                    None => set,
                    Some(a) => torus_dml::seq::IndexSet::intersect(&a, &set),
                });
            }
            let out = acc.unwrap().canonicalize();
            emit(&json!({ "result": out, "text": out.to_string() }));
        }
        Command::Lrs { op: LrsOp::Solve { lrs, c, parith, n_max, m_max } } => {
            let u: Lrs = serde_json::from_str(&lrs).map_err(|e| Failure::Input(format!("recurrence: {e}")))?;
            let bounds = SearchBounds { n_max, m_max };
            let (set, status) = match (c, parith) {
                (Some(c), None) => solve_eq_const(&u, &parse_q(&c)?, &bounds),
                (None, Some(v)) => {
                    let v: Vec<&str> = v.split(',').collect();
                    if v.len() != 4 {
                        return Err(Failure::Input("--parith takes a,b,k,p".into()));
                    }
                    let k: u32 = v[2].trim().parse().map_err(|_| Failure::Input(format!("bad k: {}", v[2])))?;
                    let p: u64 = v[3].trim().parse().map_err(|_| Failure::Input(format!("bad p: {}", v[3])))?;
                    torus_dml::fp::Fp::new(p)?;
                    solve_eq_parith(&u, &parse_q(v[0])?, &parse_q(v[1])?, k, p, &bounds)?
                }
                _ => return Err(Failure::Input("give --c or --parith".into())),
            };
            emit(&json!({ "result": set, "text": set.to_string(), "status": status }));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // usage mistakes are input errors; 2 is reserved for cross-check failures
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::CrossCheck(m)) => {
            eprintln!("cross-check failed: {m}");
            ExitCode::from(2)
        }
    }
}
