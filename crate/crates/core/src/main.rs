use std::io::{IsTerminal, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tatg::attach::realize_mixed;
use tatg::construct::{
    blow_up, fit_metric, make_circle, make_counterexample, make_kpq, realize_periodic, relative_from_capped, FitOutcome,
};
use tatg::error::Error;
use tatg::format::Document;
use tatg::mixed::{
    check_mixed_tat, dual_graph, level_permutation, mixed_safe_walk, non_regular2, screw_numbers, MixedVerdict,
};
use tatg::q::{self, Q};
use tatg::ribbon::{surface_invariants, validate, RibbonGraph};
use tatg::metric::Metric;
use tatg::tat::{check_signed_tat, check_tat, compute_sigma, fdtc, fdtc_pure, SigmaMode, Verdict};
use tatg::walk::{safe_walk_from, Point, Sign};

#[derive(Parser)]
#[command(name = "tatg", version, about = "Metric ribbon graphs with the tete-a-tete property")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that the document describes a valid (relative, filtered) ribbon graph
    Validate { file: Option<String> },
    /// Euler characteristic, genus, boundary count and the face list
    Invariants { file: Option<String> },
    /// Check the tete-a-tete property
    Check {
        file: Option<String>,
        /// walk length for the pure property (default 1)
        #[arg(long)]
        ell: Option<String>,
        /// check the mixed property of the filtration and delta map
        #[arg(long)]
        mixed: bool,
    },
    /// The induced automorphism of the graph
    Sigma {
        file: Option<String>,
        #[arg(long)]
        ell: Option<String>,
    },
    /// Fractional Dehn twist coefficient per boundary face
    Fdtc {
        file: Option<String>,
        #[arg(long)]
        ell: Option<String>,
    },
    /// Screw numbers of a filtered graph
    Screws { file: Option<String> },
    /// Dual graph of the level decomposition
    Dual { file: Option<String> },
    /// Trace a safe walk
    Walk {
        file: Option<String>,
        /// start point, `e3:1/4` or `v2`
        #[arg(long)]
        from: String,
        /// starting dart (1-based); needed at a vertex
        #[arg(long)]
        dart: Option<usize>,
        /// `+` or `-`
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
        #[arg(long, default_value = "1")]
        len: String,
        /// mixed walk through the filtration
        #[arg(long)]
        mixed: bool,
    },
    /// Print a generated graph
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
    /// Blow up the orbit of a vertex into relative boundary cycles
    Blowup {
        file: Option<String>,
        /// vertex id, `v3`
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        eps: String,
    },
    /// Fit edge lengths to prescribed coefficients, `--rot F1=1/2`
    Fit {
        file: Option<String>,
        #[arg(long = "rot")]
        rot: Vec<String>,
    },
    /// Realize the `[orbit-spec]` section as a signed graph
    Realize {
        file: Option<String>,
        /// blow up the lifts of this special point (1-based)
        #[arg(long)]
        point: Option<usize>,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Assemble the `[spec-tree]` section into a mixed graph
    Attach { file: Option<String> },
}

#[derive(Subcommand)]
enum Gen {
    Kpq {
        p: usize,
        q: usize,
        #[arg(long, default_value = "1/2")]
        len: String,
    },
    Circle { total: String },
    #[command(name = "non-regular2")]
    NonRegular2,
    Counterexample,
}

/// Exit 1 carries a message that is printed as a machine line.
enum Failure {
    Fails(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PropertyDoesNotHold(_) | Error::PostCheckFailed(_) | Error::VertexLanding { .. } => {
                Failure::Fails(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Out = Result<(), Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn color() -> bool {
    match std::env::var("TATG_COLOR").as_deref() {
        Ok("never") => false,
        _ => std::io::stdout().is_terminal(),
    }
}

/// Machine line; colored only on a terminal.
fn verdict_line(text: &str, good: bool) {
    if color() {
        let c = if good { 32 } else { 31 };
        println!("\x1b[{c}m{text}\x1b[0m");
    } else {
        println!("{text}");
    }
}

fn read(file: &Option<String>) -> Result<Document, Failure> {
    let text = match file.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| input(format!("stdin: {e}")))?;
            s
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| input(format!("{p}: {e}")))?,
    };
    Ok(Document::parse(&text)?)
}

fn rational(s: &str) -> Result<Q, Failure> {
    q::parse(s).ok_or_else(|| input(format!("not a rational number: '{s}'")))
}

fn parse_id(s: &str, prefix: char, count: usize) -> Result<usize, Failure> {
    s.strip_prefix(prefix)
        .and_then(|t| t.parse::<usize>().ok())
        .filter(|&k| k >= 1 && k <= count)
        .map(|k| k - 1)
        .ok_or_else(|| input(format!("unknown id '{s}'")))
}

fn graph(doc: &Document) -> Result<(RibbonGraph, Metric), Failure> {
    let g = doc.graph()?;
    let m = doc.metric();
    m.check_positive()?;
    Ok((g, m))
}

fn report(v: &Verdict) -> Out {
    match v {
        Verdict::Holds => {
            verdict_line("TAT HOLDS", true);
            Ok(())
        }
        Verdict::Fails(w) => {
            if let Some(c) = &w.clause {
                println!("clause {c}");
            }
            verdict_line(&format!("TAT FAILS witness={}", w.describe()), false);
            Err(Failure::Fails(String::new()))
        }
    }
}

fn signed(doc: &Document) -> bool {
    !doc.signs.is_empty()
}

fn cmd_validate(file: &Option<String>) -> Out {
    let doc = read(file)?;
    if !doc.has_graph() {
        if let Some(spec) = &doc.orbit_spec {
            let r = realize_periodic(spec)?;
            println!("VALID orbit-spec genus={} order={}", r.genus, spec.order);
        } else if let Some(tree) = &doc.spec_tree {
            let r = realize_mixed(tree)?;
            println!("VALID spec-tree pieces={} depth={}", tree.pieces.len(), r.depth.iter().max().unwrap_or(&0));
        } else {
            return Err(input("document has no graph, orbit-spec or spec-tree"));
        }
        return Ok(());
    }
    let (g, m) = graph(&doc)?;
    let res = if doc.levels.is_empty() {
        validate(&g, Some(&doc.rel()))
    } else {
        doc.filtered().and_then(|fg| {
            fg.validate()?;
            if !doc.deltas.is_empty() {
                doc.delta(&fg)?.check(&fg)?;
            }
            Ok(())
        })
    };
    if let Err(e) = res {
        println!("INVALID {e}");
        return Err(Failure::Fails(String::new()));
    }
    println!("VALID vertices={} edges={} faces={}", g.vertex_count(), m.0.len(), g.faces().len());
    Ok(())
}

fn cmd_invariants(file: &Option<String>) -> Out {
    let doc = read(file)?;
    let (g, m) = graph(&doc)?;
    let rel = doc.rel();
    let inv = surface_invariants(&g, Some(&rel))?;
    let signs = doc.signs(&g);
    for (f, face) in g.faces().iter().enumerate() {
        let darts: Vec<String> = face.iter().map(|d| (d + 1).to_string()).collect();
        let kind = if inv.a_faces[f] { "A".to_string() } else { format!("sign {}", Sign::from_i8(signs.0[f]).symbol()) };
        println!("F{}: darts {} len {} {}", f + 1, darts.join(" "), q::fmt(&m.face_length(face)), kind);
    }
    println!(
        "INVARIANTS vertices={} edges={} chi={} genus={} boundaries={}",
        inv.vertices, inv.edges, inv.chi, inv.genus, inv.boundaries
    );
    Ok(())
}

fn cmd_check(file: &Option<String>, ell: &Option<String>, mixed: bool) -> Out {
    let doc = read(file)?;
    if mixed {
        let fg = doc.filtered()?;
        let delta = doc.delta(&fg)?;
        return match check_mixed_tat(&fg, &delta)? {
            MixedVerdict::Holds => report(&Verdict::Holds),
            MixedVerdict::Fails(w) => report(&Verdict::Fails(w)),
        };
    }
    let (g, m) = graph(&doc)?;
    let rel = doc.rel();
    let v = match ell {
        Some(l) => check_tat(&g, &m, Some(&rel), rational(l)?)?,
        None if signed(&doc) => check_signed_tat(&g, &m, Some(&rel), &doc.signs(&g))?,
        None => check_tat(&g, &m, Some(&rel), Q::from_integer(1))?,
    };
    report(&v)
}

fn cmd_sigma(file: &Option<String>, ell: &Option<String>) -> Out {
    let doc = read(file)?;
    let (g, m) = graph(&doc)?;
    let rel = doc.rel();
    let signs = doc.signs(&g);
    let mode = match ell {
        Some(l) => SigmaMode::Pure(rational(l)?),
        None if signed(&doc) => SigmaMode::Signed(&signs),
        None => SigmaMode::Pure(Q::from_integer(1)),
    };
    let s = compute_sigma(&g, &m, Some(&rel), mode)?;
    println!("unit {}", q::fmt(&s.unit()));
    match s.vertex_orbits() {
        Some(orbits) => {
            for o in orbits {
                let vs: Vec<String> = o.iter().map(|v| format!("v{}", v + 1)).collect();
                println!("vertex orbit {}", vs.join(" "));
            }
        }
        None => println!("vertex orbits leave the vertex set"),
    }
    if let Some(ep) = s.edge_perm() {
        let es: Vec<String> = ep.iter().enumerate().map(|(e, f)| format!("e{}>e{}", e + 1, f + 1)).collect();
        println!("edges {}", es.join(" "));
    }
    println!("SIGMA order={}", s.order());
    Ok(())
}

fn cmd_fdtc(file: &Option<String>, ell: &Option<String>) -> Out {
    let doc = read(file)?;
    let (g, m) = graph(&doc)?;
    let rel = doc.rel();
    let cs = match ell {
        Some(l) => fdtc_pure(&g, &m, Some(&rel), rational(l)?)?,
        None if signed(&doc) => fdtc(&g, &m, Some(&rel), &doc.signs(&g))?,
        None => fdtc_pure(&g, &m, Some(&rel), Q::from_integer(1))?,
    };
    let parts: Vec<String> =
        cs.iter().enumerate().filter_map(|(f, c)| c.map(|c| format!("F{}={}", f + 1, q::fmt(&c)))).collect();
    println!("FDTC {}", parts.join(" "));
    Ok(())
}

fn cmd_screws(file: &Option<String>) -> Out {
    let doc = read(file)?;
    let fg = doc.filtered()?;
    let delta = doc.delta(&fg)?;
    if let MixedVerdict::Fails(w) = check_mixed_tat(&fg, &delta)? {
        println!("mixed property fails at {}", w.describe());
        return Err(Failure::Fails(String::new()));
    }
    for i in 1..=fg.depth() {
        let lp = level_permutation(&fg, &delta, i)?;
        for (j, o) in lp.orbits.iter().enumerate() {
            println!("orbit level={i} orbit={} alpha={} cycle_length={}", j + 1, o.len(), q::fmt(&lp.cycles[o[0]].length));
        }
    }
    let screws = screw_numbers(&fg, &delta)?;
    if screws.is_empty() {
        println!("SCREW none");
    }
    for s in screws {
        println!("SCREW level={} orbit={} value={}", s.level, s.orbit + 1, q::fmt(&s.value));
    }
    Ok(())
}

fn cmd_dual(file: &Option<String>) -> Out {
    let doc = read(file)?;
    let fg = doc.filtered()?;
    let delta = doc.delta(&fg)?;
    let d = dual_graph(&fg, &delta)?;
    for (k, (l, c)) in d.vertices.iter().enumerate() {
        println!("piece {} level={l} component={}", k + 1, c + 1);
    }
    for (a, b) in &d.edges {
        println!("edge {} {}", a + 1, b + 1);
    }
    println!(
        "DUAL vertices={} edges={} tree={}",
        d.vertices.len(),
        d.edges.len(),
        if d.is_tree() { "yes" } else { "no" }
    );
    Ok(())
}

fn parse_point(g: &RibbonGraph, m: &Metric, s: &str) -> Result<Point, Failure> {
    if let Some((e, t)) = s.split_once(':') {
        let e = parse_id(e, 'e', g.edge_count())?;
        let t = rational(t)?;
        if t < Q::from_integer(0) || t > m.len(e) {
            return Err(input(format!("offset {} outside e{}", q::fmt(&t), e + 1)));
        }
        Ok(Point::canonical(g, m, 2 * e, t))
    } else {
        Ok(Point::Vertex(parse_id(s, 'v', g.vertex_count())?))
    }
}

fn cmd_walk(file: &Option<String>, from: &str, dart: Option<usize>, sign: &str, len: &str, mixed: bool) -> Out {
    let doc = read(file)?;
    let (g, m) = graph(&doc)?;
    let start = parse_point(&g, &m, from)?;
    let dart = match dart {
        Some(d) if d >= 1 && d <= g.dart_count() => Some(d - 1),
        Some(d) => return Err(input(format!("unknown dart {d}"))),
        None => None,
    };
    if mixed {
        let fg = doc.filtered()?;
        let delta = doc.delta(&fg)?;
        let t = mixed_safe_walk(&fg, &delta, start, dart)?;
        for s in &t.stages {
            println!("stage level={} length={}", s.level, q::fmt(&s.length));
            for (d, off) in &s.steps {
                println!("  dart {} enter {}", d + 1, q::fmt(off));
            }
        }
        println!("END point={} order={} total={}", t.endpoint.describe(), t.order, q::fmt(&t.total));
        return Ok(());
    }
    let sign = match sign {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        _ => return Err(input(format!("sign must be + or -, found '{sign}'"))),
    };
    let t = safe_walk_from(&g, &m, start, dart, sign, rational(len)?)?;
    for (d, off) in &t.steps {
        println!("dart {} enter {}", d + 1, q::fmt(off));
    }
    println!("END point={} total={}", t.endpoint.describe(), q::fmt(&t.total));
    Ok(())
}

fn cmd_gen(what: &Gen) -> Out {
    let doc = match what {
        Gen::Kpq { p, q: qq, len } => {
            if *p < 1 || *qq < 1 {
                return Err(input("p and q must be positive"));
            }
            let l = rational(len)?;
            if l <= Q::from_integer(0) {
                return Err(input("length must be positive"));
            }
            let (g, m) = make_kpq(*p, *qq, l);
            Document::from_graph(Some(&format!("k{p}{qq}")), &g, &m, None, None)
        }
        Gen::Circle { total } => {
            let l = rational(total)?;
            if l <= Q::from_integer(0) {
                return Err(input("length must be positive"));
            }
            let (g, m) = make_circle(l);
            Document::from_graph(Some("circle"), &g, &m, None, None)
        }
        Gen::NonRegular2 => {
            let (fg, delta) = non_regular2();
            Document::from_filtered(Some("non-regular2"), &fg, &delta)?
        }
        Gen::Counterexample => {
            let (g, m) = make_counterexample();
            Document::from_graph(Some("counterexample"), &g, &m, None, None)
        }
    };
    print!("{}", doc.serialize());
    Ok(())
}

fn cmd_blowup(file: &Option<String>, vertex: &str, eps: &str) -> Out {
    let doc = read(file)?;
    let (g, m) = graph(&doc)?;
    let v = parse_id(vertex, 'v', g.vertex_count())?;
    let rel = doc.rel();
    let signs = doc.signs(&g);
    let b = blow_up(&g, &m, Some(&rel), if signed(&doc) { Some(&signs) } else { None }, v, rational(eps)?)?;
    let name = doc.name.as_ref().map(|n| format!("{n}-blowup"));
    let out = Document::from_graph(name.as_deref(), &b.graph, &b.metric, Some(&b.rel), Some(&b.signs));
    print!("{}", out.serialize());
    Ok(())
}

fn cmd_fit(file: &Option<String>, rot: &[String]) -> Out {
    let doc = read(file)?;
    let g = doc.graph()?;
    let rel = doc.rel();
    let signs = doc.signs(&g);
    let mut targets = vec![None; g.faces().len()];
    for r in rot {
        let (f, v) = r.split_once('=').ok_or_else(|| input(format!("expected F<k>=<value>, found '{r}'")))?;
        let f = parse_id(f.trim(), 'F', targets.len())?;
        targets[f] = Some(rational(v.trim())?);
    }
    match fit_metric(&g, Some(&rel), &signs, &targets)? {
        FitOutcome::Feasible(m) => {
            let mut out = doc.clone();
            out.lengths = m.0;
            print!("{}", out.serialize());
            println!("# FIT FEASIBLE");
            Ok(())
        }
        FitOutcome::FeasibleNotTat(m, w) => {
            let ls: Vec<String> = m.0.iter().enumerate().map(|(e, l)| format!("e{}={}", e + 1, q::fmt(l))).collect();
            println!("lengths {}", ls.join(" "));
            verdict_line(&format!("FIT FEASIBLE-NOT-TAT witness={}", w.describe()), false);
            Err(Failure::Fails(String::new()))
        }
        FitOutcome::Infeasible(c) => {
            let fm: Vec<String> = c.face_multipliers.iter().enumerate().map(|(f, x)| format!("F{}:{}", f + 1, q::fmt(x))).collect();
            let em: Vec<String> = c.edge_multipliers.iter().enumerate().map(|(e, x)| format!("e{}:{}", e + 1, q::fmt(x))).collect();
            println!("face multipliers {}", fm.join(" "));
            println!("edge multipliers {}", em.join(" "));
            println!("forced sum {}", q::fmt(&c.constant));
            let z: Vec<String> = c.forced_zero.iter().map(|e| format!("e{}", e + 1)).collect();
            verdict_line(&format!("FIT INFEASIBLE forced_zero={}", z.join(",")), false);
            Err(Failure::Fails(String::new()))
        }
    }
}

fn cmd_realize(file: &Option<String>, point: Option<usize>, eps: &Option<String>) -> Out {
    let doc = read(file)?;
    let spec = doc.orbit_spec.as_ref().ok_or_else(|| input("document has no [orbit-spec] section"))?;
    let r = realize_periodic(spec)?;
    let name = doc.name.clone().unwrap_or_else(|| "realized".into());
    let out = match point {
        None => Document::from_graph(Some(&name), &r.graph, &r.metric, None, Some(&r.signs)),
        Some(k) => {
            let eps = eps.as_deref().map(rational).transpose()?;
            let b = relative_from_capped(&r, k.checked_sub(1).ok_or_else(|| input("points are 1-based"))?, eps)?;
            Document::from_graph(Some(&name), &b.graph, &b.metric, Some(&b.rel), Some(&b.signs))
        }
    };
    print!("{}", out.serialize());
    eprintln!("realized genus={} vertices={} edges={}", r.genus, r.graph.vertex_count(), r.graph.edge_count());
    Ok(())
}

fn cmd_attach(file: &Option<String>) -> Out {
    let doc = read(file)?;
    let tree = doc.spec_tree.as_ref().ok_or_else(|| input("document has no [spec-tree] section"))?;
    let mr = realize_mixed(tree)?;
    let name = doc.name.clone().unwrap_or_else(|| "attached".into());
    let out = Document::from_filtered(Some(&name), &mr.mixed.fg, &mr.mixed.delta)?;
    print!("{}", out.serialize());
    for (k, p) in tree.pieces.iter().enumerate() {
        eprintln!("piece {} level={} alpha={} delta={}", p.name, mr.depth[k], mr.alpha[k], q::fmt(&mr.delta[k]));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(file),
        Cmd::Invariants { file } => cmd_invariants(file),
        Cmd::Check { file, ell, mixed } => cmd_check(file, ell, *mixed),
        Cmd::Sigma { file, ell } => cmd_sigma(file, ell),
        Cmd::Fdtc { file, ell } => cmd_fdtc(file, ell),
        Cmd::Screws { file } => cmd_screws(file),
        Cmd::Dual { file } => cmd_dual(file),
        Cmd::Walk { file, from, dart, sign, len, mixed } => cmd_walk(file, from, *dart, sign, len, *mixed),
        Cmd::Gen { what } => cmd_gen(what),
        Cmd::Blowup { file, vertex, eps } => cmd_blowup(file, vertex, eps),
        Cmd::Fit { file, rot } => cmd_fit(file, rot),
        Cmd::Realize { file, point, eps } => cmd_realize(file, *point, eps),
        Cmd::Attach { file } => cmd_attach(file),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Fails(msg)) => {
            if !msg.is_empty() {
                println!("FAILS {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
