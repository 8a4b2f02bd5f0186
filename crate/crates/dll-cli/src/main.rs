//! `dll`: command-line front end for the proof engine.
//!
//! Exit codes: 0 success, 1 a logical refutation (failed check, exhausted
//! search, countermodel), 2 usage or input errors.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dll_core::cutelim::{eliminate_cuts_logged, CutError, DEFAULT_BUDGET};
use dll_core::kernel::{check, is_cut_free, parse_proof, parse_skeleton, write_proof, CheckReport, Derivation};
use dll_core::reconstruct::reconstruct;
use dll_core::render::{render, Format};
use dll_core::search::{backward_search, deadlock_report, DeadEnd, LoopKey, SearchConfig, SearchOutcome};
use dll_core::semantics::{countermodel, default_pool, FiniteLattice, Valuation};
use dll_core::syntax::{parse_formula, parse_sequent, parse_term, Formula, Sequent, Structure};
use dll_core::translate::{axiom_derivation, axiom_sequent, close_identity, tau_pre, tau_suc, AxiomName};

#[derive(Parser)]
#[command(
    name = "dll",
    version,
    about = "Proof engine for a multi-type display calculus of lattice logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula, term or sequent and print its normal form and sort.
    Parse {
        text: String,
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
    },
    /// Check a proof file (`-` reads stdin).
    Check {
        file: String,
        /// Accept HYP leaves.
        #[arg(long)]
        allow_hyp: bool,
        /// Fail when the derivation uses a cut.
        #[arg(long)]
        cut_free: bool,
    },
    /// Translate a lattice formula into a term of sort L.
    Translate {
        formula: String,
        /// Precedent translation (default).
        #[arg(long, conflicts_with = "suc")]
        pre: bool,
        /// Succedent translation.
        #[arg(long)]
        suc: bool,
    },
    /// Print the translated sequent of an axiom instance, or its derivation.
    Axiom {
        name: String,
        params: Vec<String>,
        #[arg(long)]
        derive: bool,
    },
    /// Bounded backward proof search.
    Prove {
        sequent: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_nodes: usize,
        /// Key loops on exact sequents instead of modulo associativity and exchange.
        #[arg(long)]
        exact: bool,
        /// Allow analytic cuts on subterms of the goal.
        #[arg(long)]
        cut: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Proof)]
        format: OutFormat,
        /// Dead ends listed after an exhausted search (0 lists all).
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Eliminate the cuts of a proof file; the step log goes to stderr.
    Cutelim {
        file: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Validity of a sequent over finite lattices.
    Semantics {
        sequent: String,
        /// A named lattice (chainN, m3, n5) or a JSON lattice file instead of the pool.
        #[arg(long)]
        lattice: Option<String>,
        /// Largest lattice in the pool (default: DLL_POOL_MAX or 5).
        #[arg(long)]
        pool_max: Option<usize>,
    },
    /// Non-derivability of distributivity: search, dead ends and countermodel.
    Report {
        #[arg(default_values_t = ["p".to_string(), "q".to_string(), "r".to_string()])]
        params: Vec<String>,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Dead ends listed (0 lists all).
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Re-check the golden proof files and every generated axiom derivation.
    Corpus {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Render a proof file as an indented tree or a LaTeX document.
    Render {
        file: String,
        #[arg(long, value_enum, default_value_t = RenderFormat::Text)]
        format: RenderFormat,
    },
    /// Rebuild a proof file from a skeleton whose rule labels may be missing.
    Reconstruct { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Auto,
    Formula,
    Term,
    Sequent,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Proof,
    Text,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Text,
    Latex,
}

/// A logical refutation, reported with exit code 1.
#[derive(Debug)]
struct Refuted;

impl std::fmt::Display for Refuted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("refuted")
    }
}

impl std::error::Error for Refuted {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Refuted>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Parse { text, kind } => parse(&text, kind),
        Command::Check {
            file,
            allow_hyp,
            cut_free,
        } => {
            let d = load_proof(&file)?;
            match check(&d, allow_hyp) {
                CheckReport::Ok if cut_free && !is_cut_free(&d) => {
                    eprintln!("FAILED: the derivation uses cut");
                    Err(Refuted.into())
                }
                CheckReport::Ok => {
                    println!("OK {} ({} inferences, height {})", d.conclusion, d.size(), d.height());
                    Ok(())
                }
                CheckReport::Failed(f) => {
                    eprintln!("FAILED {f}");
                    Err(Refuted.into())
                }
            }
        }
        Command::Translate { formula, suc, .. } => {
            let a = formula_arg(&formula)?;
            println!("{}", if suc { tau_suc(&a) } else { tau_pre(&a) });
            Ok(())
        }
        Command::Axiom { name, params, derive } => {
            let n: AxiomName = name.parse()?;
            let ps = params.iter().map(|p| formula_arg(p)).collect::<Result<Vec<_>>>()?;
            if derive {
                print!("{}", write_proof(&axiom_derivation(n, &ps)?));
            } else {
                println!("{}", axiom_sequent(n, &ps)?);
            }
            Ok(())
        }
        Command::Prove {
            sequent,
            depth,
            max_nodes,
            exact,
            cut,
            format,
            limit,
        } => {
            let goal = sequent_arg(&sequent)?;
            let cfg = SearchConfig {
                max_depth: depth,
                max_nodes,
                loop_key: if exact { LoopKey::Exact } else { LoopKey::ModuloAE },
                allow_cut: cut,
                ..SearchConfig::default()
            };
            prove(&goal, &cfg, format, limit)
        }
        Command::Cutelim { file, budget } => {
            let d = load_proof(&file)?;
            if let CheckReport::Failed(f) = check(&d, false) {
                bail!("input does not check: {f}");
            }
            let (out, log) = eliminate_cuts_logged(&d, budget);
            for line in &log {
                eprintln!("{line}");
            }
            match out {
                Ok(r) => {
                    eprintln!("{} steps; {} -> {} inferences", log.len(), d.size(), r.size());
                    print!("{}", write_proof(&r));
                    Ok(())
                }
                Err(CutError::BudgetExceeded { budget, partial }) => {
                    eprintln!("BUDGET EXCEEDED after {budget} steps; partial derivation follows");
                    print!("{}", write_proof(&partial));
                    Err(Refuted.into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Semantics {
            sequent,
            lattice,
            pool_max,
        } => {
            let s = sequent_arg(&sequent)?;
            let pool = match lattice {
                Some(l) => vec![lattice_arg(&l)?],
                None => default_pool(pool_max),
            };
            match countermodel(&s, &pool) {
                None => {
                    println!("VALID on all {} lattices", pool.len());
                    Ok(())
                }
                Some((l, v)) => {
                    println!("COUNTERMODEL {}", describe(&l, &v));
                    Err(Refuted.into())
                }
            }
        }
        Command::Report { params, depth, limit } => report(&params, depth, limit),
        Command::Corpus { dir } => corpus(dir),
        Command::Render { file, format } => {
            let d = load_proof(&file)?;
            let f = match format {
                RenderFormat::Text => Format::Text,
                RenderFormat::Latex => Format::Latex,
            };
            print!("{}", render(&d, f));
            Ok(())
        }
        Command::Reconstruct { file } => {
            let skel = parse_skeleton(&read_input(&file)?)?;
            let d = reconstruct(&skel, &mut |s| close_identity(s))?;
            print!("{}", write_proof(&d));
            Ok(())
        }
    }
}

fn read_input(file: &str) -> Result<String> {
    if file == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(file).with_context(|| format!("reading {file}"))
    }
}

fn load_proof(file: &str) -> Result<Derivation> {
    Ok(parse_proof(&read_input(file)?)?)
}

fn formula_arg(text: &str) -> Result<Formula> {
    parse_formula(text).with_context(|| format!("formula `{text}`"))
}

fn sequent_arg(text: &str) -> Result<Sequent> {
    parse_sequent(text).with_context(|| format!("sequent `{text}`"))
}

fn lattice_arg(name: &str) -> Result<FiniteLattice> {
    if Path::new(name).is_file() {
        return Ok(FiniteLattice::from_json(&fs::read_to_string(name)?)?);
    }
    Ok(FiniteLattice::by_name(name)?)
}

fn describe(l: &FiniteLattice, v: &Valuation) -> String {
    let vals: Vec<String> = v.iter().map(|(a, &i)| format!("{a}={}", l.elements[i])).collect();
    format!("on {} ({} elements): {}", l.name, l.size(), vals.join(", "))
}

fn parse(text: &str, kind: Kind) -> Result<()> {
    let sequent = || parse_sequent(text).map(|s| format!("sequent {s} : {:?}", s.sort()));
    let formula = || parse_formula(text).map(|a| format!("formula {a}"));
    let term = || parse_term(text).map(|t| format!("term {t} : {:?}", t.sort()));
    let line = match kind {
        Kind::Sequent => sequent()?,
        Kind::Formula => formula()?,
        Kind::Term => term()?,
        Kind::Auto if text.contains("|-") => sequent()?,
        Kind::Auto => match formula() {
            Ok(l) => l,
            Err(_) => term()?,
        },
    };
    println!("{line}");
    Ok(())
}

fn prove(goal: &Sequent, cfg: &SearchConfig, format: OutFormat, limit: usize) -> Result<()> {
    match backward_search(goal, cfg) {
        SearchOutcome::Proved(d, stats) => {
            eprintln!("PROVED ({} nodes, {} inferences)", stats.nodes, d.size());
            print!(
                "{}",
                match format {
                    OutFormat::Proof => write_proof(&d),
                    OutFormat::Text => render(&d, Format::Text),
                    OutFormat::Latex => render(&d, Format::Latex),
                }
            );
            Ok(())
        }
        SearchOutcome::Exhausted(_, stats) => {
            println!(
                "EXHAUSTED at depth {} ({} nodes, {} cut off by depth)",
                cfg.max_depth, stats.nodes, stats.depth_cut
            );
            list_dead_ends(&deadlock_report(goal, cfg), limit);
            match countermodel(goal, &default_pool(None)) {
                Some((l, v)) => println!("COUNTERMODEL {}", describe(&l, &v)),
                None => println!("NO COUNTERMODEL in the pool"),
            }
            Err(Refuted.into())
        }
        SearchOutcome::ResourceOut(stats) => {
            println!("RESOURCE-OUT after {} nodes", stats.nodes);
            Err(Refuted.into())
        }
    }
}

/// Dead ends whose sides are formulas, possibly under one structural
/// connective, come first and largest first: they show which step of the
/// goal fails. The rest follow, smallest first.
fn list_dead_ends(dead: &[DeadEnd], limit: usize) {
    let mut sorted: Vec<&DeadEnd> = dead.iter().collect();
    let simple = |s: &Structure| match s {
        Structure::Leaf(_) => true,
        Structure::Circ(_, a) | Structure::Bullet(a) => matches!(**a, Structure::Leaf(_)),
        _ => false,
    };
    sorted.sort_by_key(|d| {
        let s = &d.sequent;
        if simple(&s.left) && simple(&s.right) {
            (0, usize::MAX - s.size())
        } else {
            (1, s.size())
        }
    });
    let shown = if limit == 0 {
        sorted.len()
    } else {
        limit.min(sorted.len())
    };
    println!("{} dead ends", dead.len());
    for d in &sorted[..shown] {
        println!("{d}");
    }
    if shown < sorted.len() {
        println!("... {} more (--limit 0 lists all)", sorted.len() - shown);
    }
}

/// Exit 0 when search fails, the report is non-empty and a countermodel
/// exists, i.e. every part of the non-derivability argument holds.
fn report(params: &[String], depth: usize, limit: usize) -> Result<()> {
    let ps = params.iter().map(|p| formula_arg(p)).collect::<Result<Vec<_>>>()?;
    let goal = axiom_sequent(AxiomName::CD1, &ps)?;
    println!("goal {goal}");
    let cfg = SearchConfig::with_depth(depth);
    let outcome = backward_search(&goal, &cfg);
    let stats = outcome.stats().clone();
    let exhausted = matches!(outcome, SearchOutcome::Exhausted(..));
    println!(
        "search {} at depth {depth} ({} nodes, {} cut off by depth)",
        match outcome {
            SearchOutcome::Proved(..) => "PROVED",
            SearchOutcome::Exhausted(..) => "EXHAUSTED",
            SearchOutcome::ResourceOut(..) => "RESOURCE-OUT",
        },
        stats.nodes,
        stats.depth_cut
    );
    let dead = deadlock_report(&goal, &cfg);
    list_dead_ends(&dead, limit);
    let cm = countermodel(&goal, &default_pool(None));
    match &cm {
        Some((l, v)) => println!("COUNTERMODEL {}", describe(l, v)),
        None => println!("NO COUNTERMODEL in the pool"),
    }
    if exhausted && !dead.is_empty() && cm.is_some() {
        Ok(())
    } else {
        Err(Refuted.into())
    }
}

fn corpus(dir: Option<PathBuf>) -> Result<()> {
    let dir = dir.unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../dll-core/tests/golden"));
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "proof"));
    files.sort();
    let mut failures = 0;
    let mut total = 0;
    let mut verdict = |name: String, ok: bool, detail: String| {
        total += 1;
        if ok {
            println!("PASS {name}");
        } else {
            failures += 1;
            println!("FAIL {name}: {detail}");
        }
    };
    for f in &files {
        let name = f.file_name().unwrap_or_default().to_string_lossy().into_owned();
        match fs::read_to_string(f)
            .map_err(anyhow::Error::from)
            .and_then(|t| Ok(parse_proof(&t)?))
        {
            Ok(d) => {
                let r = check(&d, false);
                let detail = match &r {
                    CheckReport::Failed(e) => e.to_string(),
                    CheckReport::Ok => String::new(),
                };
                verdict(name, r.is_ok(), detail);
            }
            Err(e) => verdict(name, false, e.to_string()),
        }
    }
    let atoms = ["p", "q", "r"].map(|a| parse_formula(a).expect("atom"));
    for n in AxiomName::ALL {
        if n == AxiomName::CD1 {
            continue;
        }
        let ps = &atoms[..n.arity()];
        let name = format!(
            "{}({})",
            n.name(),
            ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
        );
        match axiom_derivation(n, ps) {
            Ok(d) => {
                let ok = check(&d, false).is_ok() && is_cut_free(&d);
                verdict(name, ok, "generated derivation does not check".into());
            }
            Err(e) => verdict(name, false, e.to_string()),
        }
    }
    println!("{} of {total} passed", total - failures);
    if failures == 0 {
        Ok(())
    } else {
        Err(Refuted.into())
    }
}
