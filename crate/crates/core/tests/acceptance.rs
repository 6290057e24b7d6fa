//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! All arithmetic is exact rational arithmetic, so every comparison below
//! is an equality; there is no floating tolerance anywhere. Each criterion
//! must also finish within `TIME_LIMIT`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_integer::Integer;

use tatg::attach::{example_thm_tree, realize_mixed};
use tatg::construct::{blow_up, fit_metric, make_circle, make_counterexample, make_kpq, realize_periodic, FitOutcome};
use tatg::format::Document;
use tatg::mixed::{check_mixed_tat, dual_graph, level_permutation, non_regular2, screw_numbers, MixedVerdict};
use tatg::q::{int, q, Q};
use tatg::ribbon::{edge_of, surface_invariants};
use tatg::tat::{check_signed_tat, check_tat, compute_sigma, fdtc, SigmaMode, Signs};

const TIME_LIMIT: Duration = Duration::from_secs(5);

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Check {
    for p in 2..=6usize {
        for qq in 2..=6usize {
            let (g, _) = make_kpq(p, qq, q(1, 2));
            let inv = surface_invariants(&g, None).map_err(|e| e.to_string())?;
            let d = p.gcd(&qq);
            let genus = ((p - 1) * (qq - 1) + 1 - d) / 2;
            ensure(inv.boundaries == d && inv.genus == genus, || {
                format!("K{p},{qq}: b={} g={}, expected b={d} g={genus}", inv.boundaries, inv.genus)
            })?;
        }
    }
    Ok(())
}

fn c2() -> Check {
    let (g, _) = make_kpq(2, 3, q(1, 2));
    let inv = surface_invariants(&g, None).map_err(|e| e.to_string())?;
    ensure(inv.boundaries == 1 && inv.genus == 1, || format!("b={} g={}", inv.boundaries, inv.genus))
}

fn c3() -> Check {
    for p in 2..=6usize {
        for qq in 2..=6usize {
            let (g, m) = make_kpq(p, qq, q(1, 2));
            let v = check_tat(&g, &m, None, int(1)).map_err(|e| e.to_string())?;
            ensure(v.holds(), || format!("K{p},{qq}: {v:?}"))?;
            let s = compute_sigma(&g, &m, None, SigmaMode::Pure(int(1))).map_err(|e| e.to_string())?;
            ensure(s.order() == p.lcm(&qq) as u64, || format!("K{p},{qq}: order {}", s.order()))?;
            let orbits = s.vertex_orbits().ok_or("sigma leaves the vertex set")?;
            let mut sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
            sizes.sort_unstable();
            let mut want = vec![p, qq];
            want.sort_unstable();
            ensure(sizes == want, || format!("K{p},{qq}: vertex orbits {sizes:?}"))?;
        }
    }
    Ok(())
}

fn c4() -> Check {
    for (l, expect) in [(int(2), true), (int(1), true), (q(2, 3), true), (int(3), false), (q(5, 2), false)] {
        let (g, m) = make_circle(l);
        let v = check_tat(&g, &m, None, int(1)).map_err(|e| e.to_string())?;
        ensure(v.holds() == expect, || format!("L={l}: {v:?}, expected holds={expect}"))?;
        ensure((int(2) / l).is_integer() == expect, || format!("L={l}: criterion table is inconsistent"))?;
    }
    Ok(())
}

fn c5() -> Check {
    let (g, _) = make_counterexample();
    let signs = Signs::all(&g, None, 1);
    let targets = vec![Some(q(1, 2)); g.faces().len()];
    let out = fit_metric(&g, None, &signs, &targets).map_err(|e| e.to_string())?;
    let FitOutcome::Infeasible(c) = out else {
        return Err(format!("expected Infeasible, got {out:?}"));
    };
    ensure(c.forced_zero == vec![2], || format!("forced zero {:?}, expected e3", c.forced_zero))?;
    // recombine the face equations: sum_f y_f (sum of lengths on f) = sum_f y_f / R_f
    let mut lambda = vec![int(0); g.edge_count()];
    let mut constant = int(0);
    for (f, face) in g.faces().iter().enumerate() {
        for &d in face {
            lambda[edge_of(d)] += c.face_multipliers[f];
        }
        constant += c.face_multipliers[f] / q(1, 2);
    }
    ensure(lambda == c.edge_multipliers, || format!("multipliers {lambda:?} vs {:?}", c.edge_multipliers))?;
    ensure(constant == c.constant && constant == int(0), || format!("forced sum {constant}"))?;
    ensure(lambda.iter().all(|x| *x >= int(0)) && lambda[2] > int(0), || format!("lambda {lambda:?}"))
}

fn c6() -> Check {
    let suite = common::realize_suite();
    ensure(suite.len() >= 10, || "fewer than 10 specs".into())?;
    let mut covered = [false; 5];
    for (label, spec) in &suite {
        let r = realize_periodic(spec).map_err(|e| format!("{label}: {e}"))?;
        let v = check_signed_tat(&r.graph, &r.metric, None, &r.signs).map_err(|e| format!("{label}: {e}"))?;
        ensure(v.holds(), || format!("{label}: {v:?}"))?;
        let coeffs = fdtc(&r.graph, &r.metric, None, &r.signs).map_err(|e| format!("{label}: {e}"))?;
        for (f, c) in coeffs.iter().enumerate() {
            let (rr, s) = spec.boundaries[r.boundary_of_face[f]];
            let want = rr * int(s as i128);
            ensure(*c == Some(want), || format!("{label}: F{} has {c:?}, target {want}", f + 1))?;
        }
        let rs: Vec<Q> = spec.boundaries.iter().map(|b| b.0).collect();
        match (spec.genus, rs.len()) {
            (0, 1) => covered[0] = true,
            (0, 2) if rs[0] == rs[1] => covered[1] = true,
            (0, 2) => covered[2] = true,
            (0, _) => covered[3] = true,
            _ => covered[4] = true,
        }
    }
    ensure(covered.iter().all(|&c| c), || format!("coverage {covered:?}"))
}

fn c7() -> Check {
    let mut graphs = Vec::new();
    let dir = format!("{}/../../corpus", env!("CARGO_MANIFEST_DIR"));
    let mut files: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.filter_map(|e| e.ok()).collect();
    files.sort_by_key(|e| e.path());
    for f in files {
        let text = std::fs::read_to_string(f.path()).map_err(|e| e.to_string())?;
        let doc = Document::parse(&text).map_err(|e| format!("{:?}: {e}", f.path()))?;
        if doc.has_graph() && doc.signs.is_empty() && doc.levels.is_empty() && doc.relative.is_empty() {
            graphs.push((f.file_name().to_string_lossy().to_string(), doc.graph().unwrap(), doc.metric()));
        }
    }
    for p in 2..=6 {
        for qq in 2..=6 {
            let (g, m) = make_kpq(p, qq, q(1, 2));
            graphs.push((format!("K{p},{qq}"), g, m));
        }
    }
    let mut blown = 0;
    for (name, g, m) in graphs {
        if !check_tat(&g, &m, None, int(1)).map_err(|e| e.to_string())?.holds() {
            continue;
        }
        for v in 0..g.vertex_count() {
            let min = g.rotation(v).iter().map(|&d| m.dart_len(d)).min().unwrap();
            let b = blow_up(&g, &m, None, None, v, min / int(4)).map_err(|e| format!("{name} v{}: {e}", v + 1))?;
            let verdict = check_tat(&b.graph, &b.metric, Some(&b.rel), int(1)).map_err(|e| e.to_string())?;
            ensure(verdict.holds(), || format!("{name} blown up at v{}: {verdict:?}", v + 1))?;
            blown += 1;
        }
    }
    ensure(blown > 0, || "no passing corpus graph".into())
}

fn c8() -> Check {
    let (fg, delta) = non_regular2();
    ensure(delta.0 == vec![vec![int(1)], vec![q(1, 6)]], || format!("delta {:?}", delta.0))?;
    let lv = fg.level(1).map_err(|e| e.to_string())?;
    ensure(lv.components.len() == 1, || "level 1 is disconnected".into())?;
    // nine edges of length 1/12, three of them split at their midpoints
    let mut lens: Vec<Q> = lv.parent_edges(0).iter().map(|&e| fg.metric.len(e)).collect();
    lens.sort();
    let mut want = vec![q(1, 24); 6];
    want.extend(vec![q(1, 12); 6]);
    ensure(lens == want, || format!("level 1 lengths {lens:?}"))?;
    let v = check_mixed_tat(&fg, &delta).map_err(|e| e.to_string())?;
    ensure(v == MixedVerdict::Holds, || format!("{v:?}"))?;
    let lp = level_permutation(&fg, &delta, 1).map_err(|e| e.to_string())?;
    ensure(lp.alphas() == vec![3], || format!("alphas {:?}", lp.alphas()))?;
    let s = screw_numbers(&fg, &delta).map_err(|e| e.to_string())?;
    ensure(s.len() == 1 && s[0].value == int(-1), || format!("screws {s:?}"))?;
    let d = dual_graph(&fg, &delta).map_err(|e| e.to_string())?;
    ensure(d.vertices.len() == 2 && d.edges.len() == 3 && !d.is_tree(), || format!("dual {d:?}"))
}

fn c9() -> Check {
    let r = realize_mixed(&example_thm_tree()).map_err(|e| e.to_string())?;
    let (fg, delta) = (&r.mixed.fg, &r.mixed.delta);
    ensure(delta.0[0] == vec![int(1)], || format!("delta_0 {:?}", delta.0[0]))?;
    let lp = level_permutation(fg, delta, 1).map_err(|e| e.to_string())?;
    ensure(lp.alphas() == vec![2], || format!("alphas {:?}", lp.alphas()))?;
    let len = lp.cycles[lp.orbits[0][0]].length;
    // delta_1 = -s * length / alpha with s = -1
    ensure(r.delta[1] == len / int(2) && r.delta[1] == q(1, 18), || format!("delta_1 {} from length {len}", r.delta[1]))?;
    let v = check_mixed_tat(fg, delta).map_err(|e| e.to_string())?;
    ensure(v == MixedVerdict::Holds, || format!("{v:?}"))?;
    let d = dual_graph(fg, delta).map_err(|e| e.to_string())?;
    ensure(d.is_tree(), || format!("dual {d:?}"))?;
    let s = screw_numbers(fg, delta).map_err(|e| e.to_string())?;
    ensure(s.len() == 1 && s[0].value == int(-1), || format!("screws {s:?}"))
}

fn c10() -> Check {
    let mut total = 0;
    for (name, cases, check) in common::property_suite() {
        check(cases).map_err(|e| format!("{name}: {e}"))?;
        total += cases;
    }
    ensure(total >= 10_000, || format!("only {total} cases"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("K_{p,q} boundary count and genus, 2 <= p,q <= 6", c1),
        ("K_{2,3} is a once-punctured torus", c2),
        ("K_{p,q} tat, sigma order lcm(p,q), vertex orbits p and q", c3),
        ("circle holds iff L = 2/n", c4),
        ("counterexample fit is infeasible, forcing e3 = 0", c5),
        ("periodic realizations reproduce their coefficients", c6),
        ("blow-ups of passing corpus graphs pass the relative check", c7),
        ("non-regular2: holds, alpha 3, screw -1, dual not a tree", c8),
        ("example_thm: delta_1 = 1/18, holds, tree, screw -1", c9),
        ("property suites, 10^4 cases", c10),
    ];
    let mut failed = 0;
    for (i, (desc, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        let res = res.and_then(|()| ensure(took < TIME_LIMIT, || format!("took {took:?}")));
        match res {
            Ok(()) => println!("criterion {}: PASS ({desc}) [{:.2}s]", i + 1, took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL ({desc}) {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
