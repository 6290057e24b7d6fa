//! Generators and property checks shared by the property suite and the
//! acceptance runner.
#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use tatg::attach::{example_thm_tree, realize_mixed, SpecTree};
use tatg::construct::{blow_up, make_circle, make_kpq, realize_periodic, OrbitSpec};
use tatg::format::Document;
use tatg::metric::{Metric, UnitSubdivision};
use tatg::mixed::{check_mixed_tat, mixed_safe_walk, non_regular2, DeltaMap, FilteredGraph};
use tatg::perm;
use tatg::q::{int, q, Q};
use tatg::ribbon::{rev, Relative, RibbonGraph};
use tatg::tat::{check_tat, compute_sigma, fixes_some_edge_dart, SigmaMode, Signs, Verdict};
use tatg::twist::{screw_from_linearization, AnnulusTwist};
use tatg::walk::{safe_walk, Point, Sign};

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_global_rejects: 1_000_000, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn spec(genus: usize, order: usize, b: &[(Q, i8)], points: &[u64]) -> OrbitSpec {
    OrbitSpec { genus, order, boundaries: b.to_vec(), points: points.to_vec(), handles: vec![] }
}

/// Periodic data: (label, spec). Covers genus 0 with one, two (equal and
/// unequal coefficients) and three boundaries, and genus 1 and 2.
pub fn realize_suite() -> Vec<(&'static str, OrbitSpec)> {
    vec![
        ("g0 r1 n2", spec(0, 2, &[(q(1, 2), 1)], &[1, 0])),
        ("g0 r1 n3", spec(0, 3, &[(q(1, 3), 1)], &[2, 2])),
        ("g0 r1 n6", spec(0, 6, &[(q(1, 6), 1)], &[2, 5])),
        ("g0 r1 n2 negative", spec(0, 2, &[(q(1, 2), -1)], &[1, 0])),
        ("g0 r2 equal", spec(0, 2, &[(q(1, 2), 1), (q(1, 2), 1)], &[0])),
        ("g0 r2 opposite signs", spec(0, 2, &[(q(1, 2), 1), (q(1, 2), -1)], &[0])),
        ("g0 r2 unequal", spec(0, 2, &[(q(1, 2), 1), (q(3, 2), 1)], &[0])),
        ("g0 r2 unequal n3", spec(0, 3, &[(q(1, 3), 1), (q(2, 3), 1)], &[0])),
        ("g0 r3 n3", spec(0, 3, &[(q(1, 3), 1), (q(1, 3), 1), (q(1, 3), 1)], &[])),
        ("g0 r3 n4", spec(0, 4, &[(q(1, 4), 1), (q(1, 4), 1), (q(1, 4), -1)], &[1])),
        ("g0 r4 n2", spec(0, 2, &[(q(1, 2), 1), (q(1, 2), 1), (q(3, 2), 1), (q(1, 2), 1)], &[0, 0])),
        ("g1 r1 n1", spec(1, 1, &[(int(9), 1)], &[])),
        ("g1 r1 n3", spec(1, 3, &[(q(1, 3), 1)], &[1])),
        ("g1 r1 n5", spec(1, 5, &[(q(2, 5), 1)], &[3])),
        ("g1 r2 n2", spec(1, 2, &[(q(1, 2), 1), (q(1, 2), 1)], &[])),
        ("g2 r1 n2", spec(2, 2, &[(q(1, 2), 1)], &[1])),
    ]
}

/// A graph with the tete-a-tete property and its data.
#[derive(Clone, Debug)]
pub struct Inst {
    pub label: String,
    pub g: RibbonGraph,
    pub m: Metric,
    pub rel: Relative,
    /// signed property; `None` means pure with walk length 1
    pub signs: Option<Signs>,
}

impl Inst {
    pub fn mode(&self) -> SigmaMode<'_> {
        match &self.signs {
            Some(s) => SigmaMode::Signed(s),
            None => SigmaMode::Pure(int(1)),
        }
    }
}

fn plain(label: String, (g, m): (RibbonGraph, Metric)) -> Inst {
    Inst { label, g, m, rel: Relative::default(), signs: None }
}

pub fn realized() -> &'static Vec<Inst> {
    static CELL: OnceLock<Vec<Inst>> = OnceLock::new();
    CELL.get_or_init(|| {
        realize_suite()
            .into_iter()
            .map(|(l, s)| (l, realize_periodic(&s).unwrap_or_else(|e| panic!("{l}: {e}"))))
            .map(|(l, r)| Inst {
                label: l.to_string(),
                g: r.graph,
                m: r.metric,
                rel: Relative::default(),
                signs: Some(r.signs),
            })
            .collect()
    })
}

pub fn mixed_suite() -> &'static Vec<(String, FilteredGraph, DeltaMap)> {
    static CELL: OnceLock<Vec<(String, FilteredGraph, DeltaMap)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let (fg, d) = non_regular2();
        let mut out = vec![("non-regular2".to_string(), fg, d)];
        let mut trees: Vec<(&str, SpecTree)> = vec![("example-thm", example_thm_tree())];
        for name in ["depth_two", "two_orbits"] {
            let path = format!("{}/../../corpus/{name}.tatg", env!("CARGO_MANIFEST_DIR"));
            let text = std::fs::read_to_string(path).expect("corpus file");
            let doc = Document::parse(&text).expect("corpus parses");
            trees.push((if name == "depth_two" { "depth-two" } else { "two-orbits" }, doc.spec_tree.unwrap()));
        }
        for (n, t) in trees {
            let r = realize_mixed(&t).expect("spec tree realizes");
            out.push((n.to_string(), r.mixed.fg, r.mixed.delta));
        }
        out
    })
}

const LENS: [(i128, i128); 7] = [(1, 2), (1, 1), (1, 3), (2, 3), (3, 2), (1, 4), (1, 6)];

fn len_strategy() -> impl Strategy<Value = Q> {
    prop::sample::select(LENS.to_vec()).prop_map(|(a, b)| q(a, b))
}

/// Arbitrary connected ribbon graph with up to five edges and lengths from a small set.
pub fn random_graph() -> impl Strategy<Value = (RibbonGraph, Metric)> {
    (1usize..=5)
        .prop_flat_map(|m| {
            let darts: Vec<usize> = (0..2 * m).collect();
            (
                Just(darts).prop_shuffle(),
                prop::collection::vec(0usize..=m, 2 * m),
                prop::collection::vec(len_strategy(), m),
            )
        })
        .prop_filter_map("connected", |(order, label, lens)| {
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); label.len()];
            for (i, &d) in order.iter().enumerate() {
                groups[label[i]].push(d);
            }
            groups.retain(|g| !g.is_empty());
            let g = RibbonGraph::from_rotations(groups).ok()?;
            g.is_connected().then(|| (g, Metric(lens)))
        })
}

/// Graphs from the families that carry the property, including blow-ups.
pub fn tat_instance() -> impl Strategy<Value = Inst> {
    let kpq = (2usize..=5, 2usize..=5, 1i128..=3)
        .prop_map(|(a, b, k)| plain(format!("K{a},{b} len 1/{}", 2 * k), make_kpq(a, b, q(1, 2 * k))));
    let circle = (1i128..=6).prop_map(|n| plain(format!("circle 2/{n}"), make_circle(q(2, n))));
    let blown = (2usize..=4, 2usize..=4, 0usize..8, prop::bool::ANY).prop_map(|(a, b, v, small)| {
        let (g, m) = make_kpq(a, b, q(1, 2));
        let v = v % (a + b);
        let eps = if small { q(1, 16) } else { q(1, 8) };
        let bu = blow_up(&g, &m, None, None, v, eps).expect("blow-up of K_{p,q}");
        Inst {
            label: format!("K{a},{b} blown up at v{}", v + 1),
            g: bu.graph,
            m: bu.metric,
            rel: bu.rel,
            signs: None,
        }
    });
    let n = realized().len();
    let periodic = (0..n).prop_map(|i| realized()[i].clone());
    prop_oneof![kpq, circle, blown, periodic]
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn refined_rel(sub: &UnitSubdivision, rel: &Relative) -> Vec<bool> {
    sub.refine_relative(rel).edge_mask(sub.graph.edge_count())
}

/// sigma is a permutation of the refined darts commuting with `rev` and `nu`,
/// preserving valency, with finite order.
pub fn prop_sigma(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&tat_instance(), |inst| {
            let s = compute_sigma(&inst.g, &inst.m, Some(&inst.rel), inst.mode())
                .map_err(|e| fail(format!("{}: {e}", inst.label)))?;
            let rg = &s.sub.graph;
            let p = &s.perm;
            prop_assert!(perm::is_permutation(p));
            for x in 0..rg.dart_count() {
                prop_assert_eq!(p[rev(x)], rev(p[x]), "{}: rev at {}", inst.label, x);
                prop_assert_eq!(p[rg.nu(x)], rg.nu(p[x]), "{}: nu at {}", inst.label, x);
                prop_assert_eq!(rg.valency(rg.tail(p[x])), rg.valency(rg.tail(x)));
            }
            let o = s.order();
            prop_assert!(o >= 1);
            prop_assert!(perm::is_identity(&s.power(o)));
            for k in 1..o {
                prop_assert!(!perm::is_identity(&s.power(k)));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// A power of sigma that fixes a dart of a non-A edge is the identity.
pub fn prop_sigma_fix(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&tat_instance(), |inst| {
            let s = compute_sigma(&inst.g, &inst.m, Some(&inst.rel), inst.mode())
                .map_err(|e| fail(format!("{}: {e}", inst.label)))?;
            let a = refined_rel(&s.sub, &inst.rel);
            for k in 1..=s.order() {
                let pk = s.power(k);
                if fixes_some_edge_dart(&pk, &a) {
                    prop_assert!(perm::is_identity(&pk), "{}: sigma^{} fixes a dart", inst.label, k);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// walk(a + b) = walk(b) after walk(a), with the direction carried through.
pub fn prop_walk_additivity(cases: u32) -> Result<(), String> {
    let strat = (random_graph(), 0usize..10, 0i128..12, prop::bool::ANY, 0i128..24, 0i128..24);
    runner(cases)
        .run(&strat, |((g, m), d, t, plus, a, b)| {
            let d = d % g.dart_count();
            let t = m.dart_len(d) * q(t, 11);
            let sign = if plus { Sign::Plus } else { Sign::Minus };
            let (a, b) = (q(a, 6), q(b, 4));
            let whole = safe_walk(&g, &m, d, t, sign, a + b);
            let first = safe_walk(&g, &m, d, t, sign, a);
            let second = safe_walk(&g, &m, first.end_dart, first.end_offset, sign, b);
            prop_assert_eq!(whole.endpoint, second.endpoint);
            prop_assert_eq!((whole.end_dart, whole.end_offset), (second.end_dart, second.end_offset));
            prop_assert_eq!(first.total + second.total, whole.total);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Sampling oracle: on every unit piece, at two interior offsets, the
/// positive walks leaving in the two directions end at the same point.
pub fn sampled_tat(g: &RibbonGraph, m: &Metric, ell: Q) -> bool {
    let mut all: Vec<Q> = m.0.clone();
    all.push(ell);
    let unit = tatg::q::gcd_all(all.iter());
    for e in 0..g.edge_count() {
        let len = m.len(e);
        let pieces = tatg::q::div_exact(len, unit).unwrap();
        for j in 0..pieces {
            for frac in [q(1, 4), q(1, 3)] {
                let t = unit * (int(j) + frac);
                let w1 = safe_walk(g, m, 2 * e, t, Sign::Plus, ell);
                let w2 = safe_walk(g, m, 2 * e + 1, len - t, Sign::Plus, ell);
                if w1.endpoint != w2.endpoint {
                    return false;
                }
            }
        }
    }
    true
}

pub fn prop_oracle(cases: u32) -> Result<(), String> {
    let tat_family = tat_instance().prop_filter("pure", |i| i.signs.is_none() && i.rel.is_empty()).prop_map(|i| (i.g, i.m));
    let perturbed = (2usize..=4, 2usize..=4, 0usize..16, len_strategy()).prop_map(|(a, b, e, l)| {
        let (g, mut m) = make_kpq(a, b, q(1, 2));
        m.0[e % (a * b)] = l;
        (g, m)
    });
    let graphs = prop_oneof![random_graph(), tat_family, perturbed];
    let ells = prop::sample::select(vec![int(1), q(1, 2), q(2, 3), int(2)]);
    let counts = std::cell::Cell::new((0u32, 0u32));
    let res = runner(cases).run(&(graphs, ells), |((g, m), ell)| {
        match check_tat(&g, &m, None, ell) {
            Ok(v) => {
                let oracle = sampled_tat(&g, &m, ell);
                let (h, f) = counts.get();
                counts.set(if oracle { (h + 1, f) } else { (h, f + 1) });
                prop_assert_eq!(v.holds(), oracle, "verdict {:?} on {:?} {:?}", v, g.rotations(), m.0);
                if let Verdict::Fails(w) = v {
                    // the witness point itself disagrees
                    let t = w.offset;
                    let a = safe_walk(&g, &m, 2 * w.edge, t, Sign::Plus, ell);
                    let b = safe_walk(&g, &m, 2 * w.edge + 1, m.len(w.edge) - t, Sign::Plus, ell);
                    prop_assert_ne!(a.endpoint, b.endpoint);
                }
            }
            Err(_) => {}
        }
        Ok(())
    });
    res.map_err(|e| e.to_string())?;
    let (h, f) = counts.get();
    // both verdicts must be well represented
    if h < cases / 10 || f < cases / 10 {
        return Err(format!("unbalanced sample: {h} holding, {f} failing"));
    }
    Ok(())
}

/// For sampled interior points of passing mixed graphs, the walks in the
/// two directions have order equal to the level of the point and equal length.
pub fn prop_mix(cases: u32) -> Result<(), String> {
    let n = mixed_suite().len();
    runner(cases)
        .run(&(0..n, 0usize..1000, 1i128..97), |(i, e, k)| {
            let (name, fg, delta) = &mixed_suite()[i];
            let a = fg.rel.edge_mask(fg.graph.edge_count());
            let e = e % fg.graph.edge_count();
            if a[e] {
                return Ok(());
            }
            let t = fg.metric.len(e) * q(k, 97);
            let start = Point::Edge { dart: 2 * e, offset: t };
            let gamma = mixed_safe_walk(fg, delta, start, None).map_err(|x| fail(format!("{name}: {x}")))?;
            let omega = mixed_safe_walk(fg, delta, start, Some(2 * e + 1)).map_err(|x| fail(format!("{name}: {x}")))?;
            let c = fg.edge_level(e);
            prop_assert_eq!(gamma.order, c, "{}: e{} order", name, e + 1);
            prop_assert_eq!(omega.order, c);
            prop_assert_eq!(gamma.total, omega.total);
            prop_assert_eq!(gamma.endpoint, omega.endpoint);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// A filtration of depth zero with delta_0 = l is the pure property with walk length l.
pub fn prop_depth_zero(cases: u32) -> Result<(), String> {
    let ells = prop::sample::select(vec![int(1), q(1, 2), q(2, 3), int(2), q(1, 3)]);
    runner(cases)
        .run(&(random_graph(), ells), |((g, m), ell)| {
            let pure = check_tat(&g, &m, None, ell);
            let comps = g.components().len();
            let fg = FilteredGraph::plain(g, m, Relative::default());
            let mixed = check_mixed_tat(&fg, &DeltaMap(vec![vec![ell; comps]]));
            match (pure, mixed) {
                (Ok(p), Ok(x)) => prop_assert_eq!(p.holds(), x.holds()),
                (Err(_), Err(_)) => {}
                (p, x) => return Err(fail(format!("pure {p:?} but mixed {x:?}"))),
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn prop_twist(cases: u32) -> Result<(), String> {
    let r = || (-12i128..12, 1i128..7).prop_map(|(a, b)| q(a, b));
    let tw = move || (r(), r()).prop_map(|(m, c)| AnnulusTwist::new(m, c));
    runner(cases)
        .run(&(tw(), tw(), tw(), r(), r(), 1i64..6, -5i64..6), |(a, b, c, x, t, n, e)| {
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!(a * AnnulusTwist::identity(), a);
            prop_assert_eq!(a * a.invert(), AnnulusTwist::identity());
            let (x1, t1) = b.apply(x, t);
            prop_assert_eq!(a.apply(x1, t1), (a * b).apply(x, t));
            prop_assert_eq!(screw_from_linearization(1, 1, int(1)).unwrap(), int(-1));
            prop_assert_eq!(screw_from_linearization(e, n, x).unwrap(), -q(e as i128, n as i128) * x);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn random_document() -> impl Strategy<Value = Document> {
    let n = realize_suite().len();
    (
        random_graph(),
        prop::option::of("[a-z][a-z0-9-]{0,8}"),
        prop::collection::vec((0usize..8, prop::sample::select(vec![1i8, -1, 0])), 0..3),
        prop::collection::vec(prop::collection::vec(0usize..8, 1..4), 0..3),
        prop::collection::vec(len_strategy(), 3),
        prop::option::of(0..n),
        prop::bool::ANY,
    )
        .prop_map(|((g, m), name, signs, levels, dvals, spec, tree)| {
            let mut doc = Document::from_graph(name.as_deref(), &g, &m, None, None);
            let nf = g.faces().len();
            let mut signs: Vec<(usize, i8)> = signs.into_iter().map(|(f, s)| (f % nf, s)).collect();
            signs.sort_unstable();
            signs.dedup_by_key(|x| x.0);
            doc.signs = signs;
            let me = g.edge_count();
            doc.levels = levels.into_iter().map(|l| l.into_iter().map(|e| e % me).collect()).collect();
            for (k, l) in doc.levels.iter().enumerate() {
                doc.deltas.push((k + 1, l[0], dvals[k]));
            }
            doc.orbit_spec = spec.map(|i| realize_suite()[i].1.clone());
            if tree {
                doc.spec_tree = Some(example_thm_tree());
            }
            doc
        })
}

pub fn prop_format(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&random_document(), |doc| {
            let text = doc.serialize();
            let back = Document::parse(&text).map_err(|e| fail(format!("{e} in\n{text}")))?;
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.serialize(), text);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// (name, cases, check). The cases add up to 10^4.
pub fn property_suite() -> Vec<(&'static str, u32, fn(u32) -> Result<(), String>)> {
    vec![
        ("sigma isometry, order, cyclic orders", 1500, prop_sigma),
        ("sigma power fixing a dart is the identity", 1000, prop_sigma_fix),
        ("walk additivity", 1500, prop_walk_additivity),
        ("dart criterion agrees with sampling", 2500, prop_oracle),
        ("mixed walk order and length", 1000, prop_mix),
        ("depth-zero mixed equals pure", 1500, prop_depth_zero),
        ("twist algebra", 500, prop_twist),
        ("format round trip", 500, prop_format),
    ]
}
