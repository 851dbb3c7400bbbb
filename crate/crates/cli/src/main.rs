use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use valdist_core::dominance::{self, ConditionKind};
use valdist_core::equation::{Equation, OperatorKind};
use valdist_core::grid::Grid;
use valdist_core::harness::{self, Overrides, Scenario};
use valdist_core::nevanlinna::{self, Target};
use valdist_core::order_reduction::build_ck;
use valdist_core::solvers::{self, GrowthOptions};
use valdist_core::{Domain, FunctionExpr};

/// Value-distribution checks for linear differential, difference and
/// q-difference equations.
#[derive(Parser)]
#[command(name = "valdist", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// quadrature / integration tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// radius grid, e.g. ratio:2:1.15:25, lin:5:30:16, disc:4:28:4
    #[arg(long)]
    grid: Option<String>,
    /// fraction of tail values dropped by the trimmed estimates
    #[arg(long)]
    trim: Option<f64>,
    /// seed for random sample points
    #[arg(long)]
    seed: Option<u64>,
    /// output directory (run) or file (other commands)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file or a built-in scenario by name
    Run {
        /// scenario file or catalogue name; omit with --all
        target: Option<String>,
        /// run every built-in scenario into <out>/<name>
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
    /// List the built-in scenarios, or print one as TOML
    Examples {
        #[arg(long)]
        show: Option<String>,
    },
    /// Growth functionals of a single function
    Analyze {
        #[arg(short, long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value = "plane")]
        domain: String,
        /// deficiency targets (numbers or inf)
        #[arg(long, allow_hyphen_values = true)]
        target: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute report.txt from the CSVs of an output directory and compare
    Verify { dir: PathBuf },
    /// Print the constants of the order-reduction identity as `k; l0,...,lp; K`
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
    },
    /// Growth of a numerical solution of a differential equation (CSV)
    Solve {
        /// coefficients A0, A1, ... (repeat the flag)
        #[arg(short, long = "coef", allow_hyphen_values = true, required = true)]
        coef: Vec<String>,
        /// real initial values f(0), f'(0), ...; all ones by default
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        ic: Vec<f64>,
        #[arg(long, default_value = "plane")]
        domain: String,
        /// write per-ray samples (theta,r,log_abs_f) to this file
        #[arg(long)]
        dump_rays: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Dominance index search (CSV)
    Dominance {
        #[arg(short, long = "coef", allow_hyphen_values = true, required = true)]
        coef: Vec<String>,
        #[arg(long, default_value = "characteristic")]
        kind: String,
        #[arg(long, default_value = "plane")]
        domain: String,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_domain(s: &str) -> Result<Domain> {
    match s {
        "plane" => Ok(Domain::Plane),
        "disc" => Ok(Domain::Disc),
        _ => bail!("unknown domain '{s}' (plane or disc)"),
    }
}

fn grid_of(c: &Common, domain: Domain) -> Result<Grid> {
    let g = match &c.grid {
        Some(g) => Grid::parse(g)?,
        None => Grid::default_for(domain),
    };
    if !g.fits(domain) {
        bail!("grid radii do not fit the {domain} domain");
    }
    Ok(g)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exprs(list: &[String], domain: Domain) -> Result<Vec<FunctionExpr>> {
    list.iter()
        .enumerate()
        .map(|(i, s)| FunctionExpr::parse_in(s, domain).with_context(|| format!("coefficient {i}")))
        .collect()
}

fn load(target: &str) -> Result<Scenario> {
    let path = Path::new(target);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {target}"))?;
        return Ok(Scenario::from_toml(&text)?);
    }
    harness::catalogue_scenario(target).ok_or_else(|| anyhow!("no scenario file or built-in scenario named '{target}'"))
}

fn overrides(c: &Common) -> Overrides {
    Overrides { tol: c.tol, grid: c.grid.clone(), trim: c.trim, seed: c.seed }
}

fn run_one(s: Scenario, dir: &Path) -> Result<bool> {
    let rep = harness::run(&s, dir)?;
    print!("{}", rep.text);
    eprintln!("wrote {}", dir.display());
    Ok(rep.passed())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { target, all, common } => {
            if all {
                let root = common.out.clone().unwrap_or_else(|| PathBuf::from("out"));
                let mut ok = true;
                for (name, _) in harness::examples_catalogue() {
                    let mut s = harness::catalogue_scenario(name).expect("built-in");
                    overrides(&common).apply(&mut s);
                    ok &= run_one(s, &root.join(name))?;
                }
                return Ok(ok);
            }
            let target = target.ok_or_else(|| anyhow!("give a scenario file or name, or --all"))?;
            let mut s = load(&target)?;
            overrides(&common).apply(&mut s);
            let dir = harness::output_dir(&s, common.out.as_deref());
            run_one(s, &dir)
        }
        Cmd::Examples { show } => {
            match show {
                Some(name) => {
                    print!("{}", harness::catalogue_toml(&name).ok_or_else(|| anyhow!("no built-in scenario '{name}'"))?)
                }
                None => {
                    for (name, summary) in harness::examples_catalogue() {
                        println!("{name:<18} {summary}");
                    }
                }
            }
            Ok(true)
        }
        Cmd::Analyze { f, domain, target, common } => {
            let domain = parse_domain(&domain)?;
            let f = FunctionExpr::parse_in(&f, domain)?;
            let grid = grid_of(&common, domain)?;
            let tol = common.tol.unwrap_or(1e-8);
            let trim = common.trim.unwrap_or(0.1);
            let series = nevanlinna::growth_series(&f, grid.radii(), grid.spec(), tol)?;
            emit(&common.out, &series.to_csv())?;
            match f.domain() {
                Domain::Plane => {
                    let h = nevanlinna::hyper_order(&series);
                    eprintln!("hyper-order estimate {:.4e}{}", h.estimate, if h.low_confidence { " (low confidence)" } else { "" });
                }
                Domain::Disc => {
                    let a = nevanlinna::admissibility_index(&f, grid.radii(), nevanlinna::DEFAULT_ADMISSIBILITY_THRESHOLD, tol)?;
                    eprintln!("admissibility index {:.4e} ({})", a.index, if a.admissible { "admissible" } else { "not admissible" });
                }
            }
            for t in target {
                let a = match t.as_str() {
                    "inf" => Target::Infinity,
                    x => Target::Finite(C::new(x.parse().with_context(|| format!("target '{x}'"))?, 0.0)),
                };
                let d = nevanlinna::deficiency(&f, a, grid.radii(), tol, trim)?;
                eprintln!("deficiency of {a}: {:.4e}", d.liminf.trimmed);
            }
            Ok(true)
        }
        Cmd::Verify { dir } => {
            let rep = harness::verify(&dir)?;
            println!("report.txt matches the CSVs in {}", dir.display());
            Ok(rep.passed())
        }
        Cmd::Reduce { n, p } => {
            if p >= n {
                bail!("need p < n");
            }
            print!("{}", build_ck(n, p).to_text());
            Ok(true)
        }
        Cmd::Solve { coef, ic, domain, dump_rays, common } => {
            let domain = parse_domain(&domain)?;
            let eq = Equation::new(OperatorKind::Derivative, exprs(&coef, domain)?);
            let ic: Vec<C> = if ic.is_empty() {
                vec![C::new(1.0, 0.0); coef.len()]
            } else {
                ic.iter().map(|&x| C::new(x, 0.0)).collect()
            };
            let grid = grid_of(&common, domain)?;
            let mut opts = GrowthOptions::default();
            if let Some(t) = common.tol {
                opts.ray_tol = t;
            }
            let g = solvers::solution_growth(&eq, &ic, grid.radii(), grid.spec(), opts)?;
            emit(&common.out, &g.series.to_csv())?;
            if let Some(p) = dump_rays {
                std::fs::write(&p, solvers::ray_dump_csv(&g.rays)).with_context(|| format!("writing {}", p.display()))?;
            }
            if !g.converged {
                eprintln!("warning: m(r) did not converge in the number of rays");
            }
            Ok(true)
        }
        Cmd::Dominance { coef, kind, domain, common } => {
            let domain = parse_domain(&domain)?;
            let a = exprs(&coef, domain)?;
            let kind = ConditionKind::parse(&kind).ok_or_else(|| anyhow!("unknown condition kind '{kind}'"))?;
            let grid = grid_of(&common, domain)?;
            let rep = dominance::find_p(&a, kind, grid.radii(), common.trim.unwrap_or(0.1), common.tol.unwrap_or(1e-8))?;
            emit(&common.out, &rep.to_csv())?;
            match rep.selected {
                Some(p) => eprintln!("selected p = {p}"),
                None => eprintln!("no index satisfies the condition"),
            }
            Ok(true)
        }
    }
}
