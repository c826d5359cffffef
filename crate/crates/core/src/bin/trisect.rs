use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use trisect_core::bracket::{cross_check, invariant_with, stabilization_bracket, trisection_bracket, Backend, BracketConfig, Normalized};
use trisect_core::diagram::{catalog, Diagram, Kind, CATALOG};
use trisect_core::group::{GSet, Group};
use trisect_core::labelcount::{count_admissible, group_count_invariant, WeakConfig};
use trisect_core::moves::{apply_all, parse_moves};
use trisect_core::scalar::fmt_complex;
use trisect_core::selftest;
use trisect_core::triplet::{Color, HopfTriplet};
use trisect_core::{Error, Scalar};

#[derive(Parser)]
#[command(name = "trisect", version, about = "Trisection diagrams and their Hopf-algebraic invariants")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Clone)]
struct Opts {
    /// kashaev:n=<n>, group:C=<group>,B=<group> or file:<path>
    #[arg(long, global = true)]
    triplet: Option<String>,
    /// Group acting on the left (counting invariant and weak triplets)
    #[arg(long = "C", global = true)]
    c: Option<String>,
    /// Group acting on the right
    #[arg(long = "B", global = true)]
    b: Option<String>,
    /// point, cosets:<subgroup generators> or a JSON action table (inline or a path)
    #[arg(long = "M", global = true, default_value = "point")]
    m: String,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Tolerance for float comparisons
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Arith::Exact)]
    backend: Arith,
    /// Bracket evaluator
    #[arg(long, global = true, value_enum, default_value_t = Evaluator::Element)]
    evaluator: Evaluator,
    /// Report all three cube-root branches of the invariant
    #[arg(long, global = true)]
    all_roots: bool,
    /// Largest intermediate tensor, in entries
    #[arg(long, global = true)]
    cap: Option<u128>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Arith {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Evaluator {
    Element,
    Rep,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a diagram file or catalog entry
    Validate {
        diagram: String,
        /// Accept surface diagrams that are not trisection diagrams
        #[arg(long)]
        surface: bool,
    },
    /// List the built-in diagrams, or print one as JSON
    Catalog { name: Option<String> },
    /// Evaluate a bracket, an invariant or a labelling count
    Eval {
        #[arg(value_enum)]
        what: EvalKind,
        diagram: String,
        /// Boundary label for counts on diagrams with a disc removed
        #[arg(long)]
        boundary: Option<String>,
    },
    /// Apply a JSON list of moves and print the resulting diagram
    Moves {
        #[command(subcommand)]
        action: MovesCmd,
    },
    /// Check the Hopf axioms, pairings and integrals of a triplet
    Axioms,
    /// Compare the element and representation evaluators
    Crosscheck { diagram: String },
    /// Run the acceptance suite
    Selftest {
        /// Perturb one pairing; the triplet criterion must then fail
        #[arg(long)]
        inject_fault: bool,
        /// Run only these criteria
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalKind {
    Bracket,
    Invariant,
    Count,
}

#[derive(Subcommand)]
enum MovesCmd {
    Apply {
        diagram: String,
        /// JSON file with one move or a list of moves
        moves: String,
        /// Write the result here instead of stdout
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
    },
}

enum Fail {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Domain(e)
    }
}

type Out = Result<(), Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail::Usage(msg.into())
}

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn load_diagram(arg: &str, strict: bool) -> Result<Diagram, Error> {
    match catalog(arg) {
        Some(d) => Ok(d),
        None => Diagram::from_json(&read(arg)?, strict),
    }
}

/// Syntax problems are usage errors; unreadable or malformed files are domain errors.
fn spec_error(spec: &str, e: Error) -> Fail {
    match e {
        Error::Parse(m) if !spec.contains("file:") => usage(m),
        e => Fail::Domain(e),
    }
}

fn parse_group(spec: &str) -> Result<Group, Fail> {
    Group::from_spec(spec).map_err(|e| spec_error(spec, e))
}

/// Splits on commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let (mut depth, mut start, mut out) = (0i32, 0, Vec::new());
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.into_iter().filter(|p| !p.is_empty()).collect()
}

fn weak_config(opts: &Opts) -> Result<WeakConfig, Fail> {
    let (c, b) = match (&opts.c, &opts.b) {
        (Some(c), Some(b)) => (parse_group(c)?, parse_group(b)?),
        _ => return Err(usage("--C and --B are required")),
    };
    let m = opts.m.trim();
    if m == "point" {
        return Ok(WeakConfig::point(c, b));
    }
    if let Some(gens) = m.strip_prefix("cosets:") {
        return Ok(WeakConfig::cosets(c, b, &split_top(gens))?);
    }
    let text = if m.starts_with('{') { m.to_string() } else { read(m)? };
    let k = WeakConfig::k_group(&c, &b);
    Ok(WeakConfig::new(c, b, GSet::from_json(Arc::clone(&k), &text)?)?)
}

fn bracket_config(opts: &Opts) -> Result<BracketConfig, Fail> {
    let spec = opts.triplet.as_deref().ok_or_else(|| usage("--triplet is required"))?;
    let mut t = HopfTriplet::from_spec(spec).map_err(|e| spec_error(spec, e))?;
    if opts.backend == Arith::Float {
        t = t.to_float();
    }
    let mut cfg = BracketConfig::new(t).with_backend(match opts.evaluator {
        Evaluator::Element => Backend::Element,
        Evaluator::Rep => Backend::Rep,
    });
    if let Some(cap) = opts.cap {
        cfg = cfg.with_cap(cap);
    }
    if let Some(tol) = opts.tol {
        cfg.tol = tol;
    }
    Ok(cfg)
}

fn scalar_json(s: &Scalar) -> Value {
    let z = s.to_complex();
    json!({ "exact": s.is_exact().then(|| s.render()), "decimal": fmt_complex(z) })
}

fn normalized_json(v: &Normalized, all_roots: bool) -> Value {
    let mut out = json!({
        "value": scalar_json(&v.value),
        "base": scalar_json(&v.base),
        "exponent": format!("{}/3", v.exp),
        "exact": v.exact().map(|x| x.render()),
        "decimal": fmt_complex(v.to_complex()),
    });
    if all_roots {
        out["branches"] = v.branches().iter().map(|z| Value::String(fmt_complex(*z))).collect();
    }
    out
}

fn print_normalized(v: &Normalized, all_roots: bool) {
    println!("{}", v.render());
    if all_roots {
        for (i, z) in v.branches().iter().enumerate() {
            println!("  branch {i}: {}", fmt_complex(*z));
        }
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn validate(diagram: &str, surface: bool, opts: &Opts) -> Out {
    let d = load_diagram(diagram, false)?;
    let report = d.validate(!surface);
    if opts.json {
        let violations: Vec<Value> = report.violations.iter().map(|v| json!({ "rule": v.rule, "detail": v.detail })).collect();
        emit(&json!({ "ok": report.is_ok(), "genus": d.genus, "violations": violations }));
    } else if report.is_ok() {
        println!("ok: genus {}, {} curves, {} crossings", d.genus, d.curves.len(), d.crossings.len());
    } else {
        for v in &report.violations {
            println!("{}: {}", v.rule, v.detail);
        }
    }
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidDiagram(format!("{} violation(s)", report.violations.len())).into())
    }
}

fn show_catalog(name: Option<&str>, opts: &Opts) -> Out {
    match name {
        None if opts.json => emit(&json!(CATALOG)),
        None => {
            for n in CATALOG {
                let d = catalog(n).expect("catalog entry");
                println!("{n:8} genus {}", d.genus);
            }
        }
        Some(n) => {
            let d = catalog(n).ok_or_else(|| usage(format!("unknown catalog entry '{n}' (known: {})", CATALOG.join(", "))))?;
            println!("{}", d.to_json_string());
        }
    }
    Ok(())
}

fn eval(what: EvalKind, diagram: &str, boundary: Option<&str>, opts: &Opts) -> Out {
    match what {
        EvalKind::Bracket => {
            let cfg = bracket_config(opts)?;
            let d = load_diagram(diagram, false)?;
            let b = trisection_bracket(&d, &cfg)?;
            if opts.json {
                emit(&json!({ "triplet": cfg.triplet.name, "genus": d.genus, "bracket": scalar_json(&b) }));
            } else {
                println!("{}", b.render());
            }
        }
        EvalKind::Invariant => {
            let cfg = bracket_config(opts)?;
            let d = load_diagram(diagram, true)?;
            let st = stabilization_bracket(&cfg)?;
            let v = invariant_with(&d, &cfg, &st)?;
            if opts.json {
                emit(&json!({ "triplet": cfg.triplet.name, "genus": d.genus, "invariant": normalized_json(&v, opts.all_roots) }));
            } else {
                print_normalized(&v, opts.all_roots);
            }
        }
        EvalKind::Count => {
            let cfg = weak_config(opts)?;
            let d = load_diagram(diagram, false)?;
            if d.kind == Kind::Disc {
                let label = match boundary {
                    None => None,
                    Some(p) => Some(
                        cfg.m.points().iter().position(|q| q == p).ok_or_else(|| usage(format!("unknown boundary label '{p}' (labels: {})", cfg.m.points().join(", "))))?,
                    ),
                };
                let l = count_admissible(&d, &cfg, label)?;
                if opts.json {
                    emit(&json!({ "l": l.to_string() }));
                } else {
                    println!("l={l}");
                }
                return Ok(());
            }
            if boundary.is_some() {
                return Err(usage("--boundary needs a diagram with a disc removed"));
            }
            let (l, v) = group_count_invariant(&d, &cfg)?;
            if opts.json {
                emit(&json!({ "l": l.to_string(), "invariant": normalized_json(&v, opts.all_roots) }));
            } else {
                println!("l={l}, invariant={}", v.render());
            }
        }
    }
    Ok(())
}

fn moves_apply(diagram: &str, moves: &str, output: Option<&Path>) -> Out {
    let d = load_diagram(diagram, false)?;
    let ms = parse_moves(&read(moves)?)?;
    let text = apply_all(&d, &ms)?.to_json_string();
    match output {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn axioms(opts: &Opts) -> Out {
    let t = if opts.triplet.is_some() {
        bracket_config(opts)?.triplet
    } else if opts.c.is_some() {
        let w = weak_config(opts)?;
        Arc::new(HopfTriplet::weak(&w.c, &w.b, &w.m)?)
    } else {
        return Err(usage("give --triplet, or --C and --B for a weak triplet"));
    };
    let mut rows = Vec::new();
    for c in Color::ALL {
        let h = t.algebra(c);
        let report = h.check_axioms();
        let integral = h.check_integral(&t.integrals[c.index()]);
        rows.push(json!({
            "color": c.name(),
            "dim": h.dim(),
            "axioms": report.all_passed(),
            "failures": report.failures(),
            "integral": integral.passed(),
        }));
    }
    let weak = t.algebras.iter().any(|h| h.is_weak());
    let (pairings_ok, cyclic) = if weak {
        (None, t.check_cyclic())
    } else {
        let r = t.check();
        (Some(r.pairings.iter().chain(&r.inverses).all(|x| x.passed())), r.cyclic)
    };
    let ok = rows.iter().all(|r| r["axioms"] == true && r["integral"] == true) && pairings_ok != Some(false) && cyclic.passed();
    if opts.json {
        emit(&json!({
            "triplet": t.name,
            "algebras": rows,
            "pairings": pairings_ok,
            "cyclic": { "passed": cyclic.passed(), "exact": cyclic.exact, "max_abs": cyclic.max_abs },
            "passed": ok,
        }));
    } else {
        println!("{}", t.name);
        for r in &rows {
            println!(
                "  {:5} dim {:3}  axioms {}  integral {}",
                r["color"].as_str().unwrap_or(""),
                r["dim"],
                if r["axioms"] == true { "ok" } else { "FAIL" },
                if r["integral"] == true { "ok" } else { "FAIL" }
            );
        }
        match pairings_ok {
            Some(p) => println!("  pairings {}", if p { "ok" } else { "FAIL" }),
            None => println!("  pairings skipped (weak)"),
        }
        println!("  cyclic identity {} (residual {:e})", if cyclic.passed() { "ok" } else { "FAIL" }, cyclic.max_abs);
    }
    if ok {
        Ok(())
    } else {
        Err(Error::AxiomViolation(format!("{} fails its checks", t.name)).into())
    }
}

fn crosscheck(diagram: &str, opts: &Opts) -> Out {
    let cfg = bracket_config(opts)?;
    let d = load_diagram(diagram, false)?;
    let r = cross_check(&d, &cfg)?;
    if opts.json {
        emit(&json!({
            "element": scalar_json(&r.element),
            "rep": scalar_json(&r.rep),
            "equal": r.equal,
            "ratio": r.ratio.as_ref().map(scalar_json),
            "per_genus": r.per_genus.map(fmt_complex),
        }));
    } else {
        println!("element: {}", r.element.render());
        println!("rep:     {}", r.rep.render());
        match (&r.ratio, r.per_genus) {
            _ if r.equal => println!("agree"),
            (Some(q), Some(z)) => println!("differ by {} ({} per handle)", q.render(), fmt_complex(z)),
            (Some(q), None) => println!("differ by {}", q.render()),
            _ => println!("differ"),
        }
    }
    if r.equal {
        Ok(())
    } else {
        Err(Error::Incompatible("evaluators disagree".into()).into())
    }
}

fn run_selftest(inject_fault: bool, only: Vec<usize>, opts: &Opts) -> Out {
    if let Some(bad) = only.iter().find(|&&i| i == 0 || i > selftest::NAMES.len()) {
        return Err(usage(format!("no criterion {bad}")));
    }
    let outcomes = selftest::run(&selftest::Options { inject_fault, only });
    if opts.json {
        emit(&selftest::report_json(&outcomes));
    } else {
        for o in &outcomes {
            println!("{}", selftest::report_line(o));
        }
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::AxiomViolation(format!("failed: {}", failed.join(", "))).into())
    }
}

fn init_threads() -> Result<(), Fail> {
    let Ok(v) = std::env::var("TRISECT_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| usage(format!("TRISECT_THREADS={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage(e.to_string()))
}

fn dispatch(cli: Cli) -> Out {
    init_threads()?;
    let opts = &cli.opts;
    match cli.cmd {
        Cmd::Validate { diagram, surface } => validate(&diagram, surface, opts),
        Cmd::Catalog { name } => show_catalog(name.as_deref(), opts),
        Cmd::Eval { what, diagram, boundary } => eval(what, &diagram, boundary.as_deref(), opts),
        Cmd::Moves { action: MovesCmd::Apply { diagram, moves, output } } => moves_apply(&diagram, &moves, output.as_deref()),
        Cmd::Axioms => axioms(opts),
        Cmd::Crosscheck { diagram } => crosscheck(&diagram, opts),
        Cmd::Selftest { inject_fault, only } => run_selftest(inject_fault, only, opts),
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
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
