//! Filtered graphs and mixed safe walks.
//!
//! A mixed walk from a point of level `c` runs one safe walk per level
//! `0..=c`, stage `i` having length `delta_i` of the component of level `i`
//! it starts in. On the unit subdivision each stage is a power of the
//! successor map of that level's induced ribbon graph, so the whole check
//! reduces to dart arithmetic at a symbolic offset.

use num_traits::Zero;

use crate::build::Builder;
use crate::construct::make_kpq;
use crate::error::{Error, Result};
use crate::metric::{common_unit, subdivide, Metric, UnitSubdivision};
use crate::perm;
use crate::q::{self, q, Q};
use crate::ribbon::{a_face_mask, edge_of, induced_subgraph_ribbon, rev, validate, Relative, RibbonGraph, SubRibbon};
use crate::tat::Witness;
use crate::walk::{safe_walk, Point, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredGraph {
    pub graph: RibbonGraph,
    pub metric: Metric,
    pub rel: Relative,
    /// edge masks of levels 1..=d; level 0 is the whole graph
    pub levels: Vec<Vec<bool>>,
}

/// One value per level and per component of that level, components ordered
/// as in `FilteredGraph::level_components`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMap(pub Vec<Vec<Q>>);

/// A level's induced ribbon graph on the original edges.
#[derive(Clone, Debug)]
pub struct Level {
    pub sub: SubRibbon,
    /// component index per sub edge
    pub comp: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// A cycles inside this level, in sub darts
    pub rel: Relative,
}

impl Level {
    /// Parent edges of component `k`.
    pub fn parent_edges(&self, k: usize) -> Vec<usize> {
        self.components[k].iter().map(|&j| self.sub.edge_map[j]).collect()
    }

    pub fn component_of_parent(&self, e: usize) -> Option<usize> {
        self.sub.sub_edge[e].map(|j| self.comp[j])
    }

    pub fn non_a_faces(&self) -> Vec<usize> {
        let a = a_face_mask(&self.sub.graph, Some(&self.rel));
        (0..a.len()).filter(|&f| !a[f]).collect()
    }
}

impl FilteredGraph {
    pub fn plain(graph: RibbonGraph, metric: Metric, rel: Relative) -> Self {
        FilteredGraph { graph, metric, rel, levels: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn in_level(&self, i: usize, e: usize) -> bool {
        i == 0 || self.levels[i - 1][e]
    }

    /// Largest `i` with edge `e` in level `i`.
    pub fn edge_level(&self, e: usize) -> usize {
        (1..=self.depth()).rev().find(|&i| self.levels[i - 1][e]).unwrap_or(0)
    }

    pub fn vertex_level(&self, v: usize) -> usize {
        self.graph.rotation(v).iter().map(|&d| self.edge_level(edge_of(d))).max().unwrap_or(0)
    }

    /// Cycles of A lying in level `i`.
    pub fn a_level(&self, i: usize) -> Relative {
        Relative::new(
            self.rel
                .cycles
                .iter()
                .filter(|c| c.iter().all(|&d| self.in_level(i, edge_of(d))))
                .cloned()
                .collect(),
        )
    }

    pub fn level(&self, i: usize) -> Result<Level> {
        let keep: Vec<bool> = (0..self.graph.edge_count()).map(|e| self.in_level(i, e)).collect();
        let sub = induced_subgraph_ribbon(&self.graph, &keep)?;
        let comp = sub.graph.component_of_edges();
        let components = sub.graph.components();
        let rel = Relative::new(
            self.a_level(i)
                .cycles
                .iter()
                .map(|c| c.iter().map(|&d| sub.to_sub(d).expect("cycle inside level")).collect())
                .collect(),
        );
        Ok(Level { sub, comp, components, rel })
    }

    pub fn levels_all(&self) -> Result<Vec<Level>> {
        (0..=self.depth()).map(|i| self.level(i)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        validate(&self.graph, Some(&self.rel))?;
        let m = self.graph.edge_count();
        for (i, lv) in self.levels.iter().enumerate() {
            if lv.len() != m {
                return Err(Error::MalformedPermutation(format!("level {} mask has {} entries", i + 1, lv.len())));
            }
            if i > 0 && (0..m).any(|e| lv[e] && !self.levels[i - 1][e]) {
                return Err(Error::MalformedPermutation(format!("level {} is not inside level {}", i + 1, i)));
            }
        }
        for c in &self.rel.cycles {
            for i in 1..=self.depth() {
                let inside = c.iter().filter(|&&d| self.in_level(i, edge_of(d))).count();
                if inside != 0 && inside != c.len() {
                    return Err(Error::RelativeIncompatibility {
                        vertex: self.graph.tail(c[0]) + 1,
                        reason: format!("A cycle crosses the boundary of level {i}"),
                    });
                }
            }
        }
        for i in 1..=self.depth() {
            let lv = self.level(i)?;
            if let Some(v) = (0..lv.sub.graph.vertex_count()).find(|&v| lv.sub.graph.valency(v) == 1) {
                return Err(Error::UnivalentVertex { vertex: lv.sub.vertex_map[v] + 1 });
            }
        }
        Ok(())
    }
}

impl DeltaMap {
    /// Builds the map from `(level, member edge, value)` entries.
    pub fn from_entries(fg: &FilteredGraph, entries: &[(usize, usize, Q)]) -> Result<DeltaMap> {
        let levels = fg.levels_all()?;
        let mut out: Vec<Vec<Option<Q>>> = levels.iter().map(|l| vec![None; l.components.len()]).collect();
        for &(i, e, v) in entries {
            let lv = levels.get(i).ok_or_else(|| Error::MalformedPermutation(format!("no level {i}")))?;
            let k = lv
                .component_of_parent(e)
                .ok_or_else(|| Error::MalformedPermutation(format!("edge e{} is not in level {i}", e + 1)))?;
            if out[i][k].is_some_and(|old| old != v) {
                return Err(Error::MalformedPermutation(format!("two deltas for the component of e{} at level {i}", e + 1)));
            }
            out[i][k] = Some(v);
        }
        let mut values = Vec::new();
        for (i, row) in out.into_iter().enumerate() {
            let mut r = Vec::new();
            for (k, v) in row.into_iter().enumerate() {
                match v {
                    Some(v) => r.push(v),
                    None if i == 0 => {
                        let e = levels[0].parent_edges(k)[0];
                        return Err(Error::MalformedPermutation(format!("no delta 0 for the component of e{}", e + 1)));
                    }
                    None => r.push(Q::zero()),
                }
            }
            values.push(r);
        }
        let d = DeltaMap(values);
        d.check(fg)?;
        Ok(d)
    }

    /// `(level, smallest member edge, value)` in canonical order.
    pub fn entries(&self, fg: &FilteredGraph) -> Result<Vec<(usize, usize, Q)>> {
        let levels = fg.levels_all()?;
        let mut out = Vec::new();
        for (i, lv) in levels.iter().enumerate() {
            for k in 0..lv.components.len() {
                let e = *lv.parent_edges(k).iter().min().unwrap();
                out.push((i, e, self.0[i][k]));
            }
        }
        Ok(out)
    }

    pub fn check(&self, fg: &FilteredGraph) -> Result<()> {
        let levels = fg.levels_all()?;
        if self.0.len() != levels.len() {
            return Err(Error::MalformedPermutation(format!("{} delta levels for depth {}", self.0.len(), fg.depth())));
        }
        for (i, lv) in levels.iter().enumerate() {
            if self.0[i].len() != lv.components.len() {
                return Err(Error::MalformedPermutation(format!("level {i} has {} components", lv.components.len())));
            }
            for &v in &self.0[i] {
                if v < Q::zero() || (i == 0 && v.is_zero()) {
                    return Err(Error::MalformedPermutation(format!("delta {} at level {i} out of range", q::fmt(&v))));
                }
            }
        }
        Ok(())
    }

    /// Every value, for the common unit.
    pub fn values(&self) -> Vec<Q> {
        self.0.iter().flatten().copied().filter(|v| !v.is_zero()).collect()
    }
}

/// Dart-level mixed map on the unit subdivision.
pub(crate) struct MixedCore {
    pub sub: UnitSubdivision,
    /// refined level graphs
    levels: Vec<SubRibbon>,
    /// stage length in units per level, per refined sub edge
    steps: Vec<Vec<i64>>,
    /// level of every refined edge
    pub edge_level: Vec<usize>,
    pub a_edge: Vec<bool>,
    pub a_dart: Vec<bool>,
    /// refined A edges per level
    pub a_level_edge: Vec<Vec<bool>>,
}

impl MixedCore {
    pub fn new(fg: &FilteredGraph, delta: &DeltaMap) -> Result<MixedCore> {
        fg.metric.check_positive()?;
        delta.check(fg)?;
        let u = common_unit(&fg.metric, &delta.values());
        let sub = subdivide(&fg.graph, &fg.metric, u).map_err(|e| match e {
            Error::IncommensurableLengths => Error::IncommensurableData,
            other => other,
        })?;
        let mut levels = Vec::new();
        let mut steps = Vec::new();
        let mut a_level_edge = Vec::new();
        for i in 0..=fg.depth() {
            let orig = fg.level(i)?;
            let keep: Vec<bool> = sub.parent_edge.iter().map(|&e| fg.in_level(i, e)).collect();
            let lv = induced_subgraph_ribbon(&sub.graph, &keep)?;
            let st = lv
                .edge_map
                .iter()
                .map(|&r| {
                    let k = orig.component_of_parent(sub.parent_edge[r]).expect("edge in level");
                    q::div_exact(delta.0[i][k], u).expect("unit divides delta") as i64
                })
                .collect();
            levels.push(lv);
            steps.push(st);
            let a_mask = fg.a_level(i).edge_mask(fg.graph.edge_count());
            a_level_edge.push(sub.refine_edge_mask(&a_mask));
        }
        let edge_level = sub.parent_edge.iter().map(|&e| fg.edge_level(e)).collect();
        let rrel = sub.refine_relative(&fg.rel);
        let a_edge = rrel.edge_mask(sub.graph.edge_count());
        let a_dart = rrel.dart_mask(sub.graph.dart_count());
        Ok(MixedCore { sub, levels, steps, edge_level, a_edge, a_dart, a_level_edge })
    }

    /// Stage `i` from refined dart `x`, or `None` when `x` is not in level `i`.
    pub fn stage(&self, i: usize, x: usize) -> Option<usize> {
        let lv = &self.levels[i];
        let sx = lv.to_sub(x)?;
        let n = self.steps[i][edge_of(sx)];
        Some(lv.to_parent(lv.graph.shift(sx, n)))
    }

    /// Runs stages `0..=upto`; returns the end dart and the last stage run.
    pub fn run(&self, x: usize, upto: usize) -> (usize, usize) {
        let mut cur = x;
        let mut order = 0;
        for i in 0..=upto {
            if i > 0 && self.edge_level[edge_of(cur)] < i {
                break;
            }
            cur = self.stage(i, cur).expect("dart in level");
            order = i;
        }
        (cur, order)
    }

    pub fn level_graph(&self, i: usize) -> &SubRibbon {
        &self.levels[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MixedVerdict {
    Holds,
    Fails(Witness),
}

impl MixedVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MixedVerdict::Holds)
    }
}

pub fn check_mixed_tat(fg: &FilteredGraph, delta: &DeltaMap) -> Result<MixedVerdict> {
    let core = MixedCore::new(fg, delta)?;
    let rg = &core.sub.graph;
    let fail = |x: usize, clause: &str| {
        let (edge, offset) = core.sub.midpoint(x, &fg.metric);
        MixedVerdict::Fails(Witness { edge, offset, clause: Some(clause.into()) })
    };
    for x in 0..rg.dart_count() {
        let e = edge_of(x);
        let c = core.edge_level[e];
        if core.a_edge[e] {
            if core.a_dart[x] {
                let (m, o) = core.run(x, c);
                if o != c {
                    return Ok(fail(x, "II"));
                }
                if !core.a_level_edge[c][edge_of(m)] {
                    return Ok(fail(x, "III"));
                }
            }
            continue;
        }
        let (m, o) = core.run(x, c);
        if o != c || core.edge_level[edge_of(m)] != c {
            return Ok(fail(x, "II"));
        }
        let (m2, _) = core.run(rev(x), c);
        if m2 != rev(m) {
            return Ok(fail(x, "I"));
        }
    }
    Ok(MixedVerdict::Holds)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub level: usize,
    pub component: usize,
    pub length: Q,
    /// darts of the full graph, each with its entry offset
    pub steps: Vec<(usize, Q)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedWalkTrace {
    pub start: Point,
    pub stages: Vec<Stage>,
    pub order: usize,
    pub total: Q,
    pub end_dart: usize,
    pub end_offset: Q,
    pub endpoint: Point,
    pub endpoint_level: usize,
}

fn run_walk(fg: &FilteredGraph, delta: &DeltaMap, d: usize, t: Q) -> Result<MixedWalkTrace> {
    delta.check(fg)?;
    let g = &fg.graph;
    let start = Point::canonical(g, &fg.metric, d, t);
    if let Point::Vertex(_) = start {
        return Err(Error::MissingDirection);
    }
    let c = fg.edge_level(edge_of(d));
    let (mut cd, mut ct) = (d, t);
    let mut stages = Vec::new();
    for i in 0..=c {
        if i > 0 {
            if ct.is_zero() || ct == fg.metric.dart_len(cd) {
                let v = if ct.is_zero() { g.tail(cd) } else { g.head(cd) };
                if g.rotation(v).iter().any(|&x| fg.in_level(i, edge_of(x))) {
                    return Err(Error::VertexLanding { stage: i, vertex: v + 1 });
                }
                break;
            }
            if !fg.in_level(i, edge_of(cd)) {
                break;
            }
        }
        let lv = fg.level(i)?;
        let sm = Metric(lv.sub.edge_map.iter().map(|&e| fg.metric.len(e)).collect());
        let sd = lv.sub.to_sub(cd).expect("dart in level");
        let k = lv.comp[edge_of(sd)];
        let len = delta.0[i][k];
        let tr = safe_walk(&lv.sub.graph, &sm, sd, ct, Sign::Plus, len);
        cd = lv.sub.to_parent(tr.end_dart);
        ct = tr.end_offset;
        stages.push(Stage {
            level: i,
            component: k,
            length: len,
            steps: tr.steps.iter().map(|&(x, o)| (lv.sub.to_parent(x), o)).collect(),
        });
    }
    let endpoint = Point::canonical(g, &fg.metric, cd, ct);
    let endpoint_level = match endpoint {
        Point::Vertex(v) => fg.vertex_level(v),
        Point::Edge { dart, .. } => fg.edge_level(edge_of(dart)),
    };
    Ok(MixedWalkTrace {
        start,
        order: stages.len() - 1,
        total: stages.iter().map(|s| s.length).sum(),
        stages,
        end_dart: cd,
        end_offset: ct,
        endpoint,
        endpoint_level,
    })
}

/// Mixed walk from an interior point, starting along `dart` (default: the
/// forward dart of the edge).
pub fn mixed_safe_walk(fg: &FilteredGraph, delta: &DeltaMap, start: Point, dart: Option<usize>) -> Result<MixedWalkTrace> {
    match start {
        Point::Vertex(_) => Err(Error::MissingDirection),
        Point::Edge { dart: e, offset } => match dart {
            Some(d) if d == rev(e) => run_walk(fg, delta, d, fg.metric.dart_len(d) - offset),
            _ => run_walk(fg, delta, e, offset),
        },
    }
}

/// Mixed walk from a point of A, stage 0 along the orientation of A.
pub fn boundary_mixed_safe_walk(fg: &FilteredGraph, delta: &DeltaMap, edge: usize, offset: Q) -> Result<MixedWalkTrace> {
    let darts = fg.rel.dart_mask(fg.graph.dart_count());
    let d = if darts[2 * edge] {
        2 * edge
    } else if darts[2 * edge + 1] {
        2 * edge + 1
    } else {
        return Err(Error::NotOnA { edge: edge + 1 });
    };
    let t = if d == 2 * edge { offset } else { fg.metric.len(edge) - offset };
    run_walk(fg, delta, d, t)
}

/// Boundary cycle of a level: a non-A face of its induced ribbon graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCycle {
    pub level: usize,
    /// component of the level containing the cycle
    pub component: usize,
    /// darts of the full graph
    pub darts: Vec<usize>,
    pub length: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPermutation {
    pub level: usize,
    pub cycles: Vec<LevelCycle>,
    /// image index of each cycle
    pub perm: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
}

impl LevelPermutation {
    pub fn alphas(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.len()).collect()
    }
}

fn require_holds(fg: &FilteredGraph, delta: &DeltaMap) -> Result<()> {
    if let MixedVerdict::Fails(w) = check_mixed_tat(fg, delta)? {
        return Err(Error::PropertyDoesNotHold(format!(
            "mixed walks fail clause {} at {}",
            w.clause.clone().unwrap_or_default(),
            w.describe()
        )));
    }
    Ok(())
}

fn level_cycles(fg: &FilteredGraph, i: usize) -> Result<(Level, Vec<usize>, Vec<LevelCycle>)> {
    let lv = fg.level(i)?;
    let faces = lv.non_a_faces();
    let cycles = faces
        .iter()
        .map(|&f| {
            let darts: Vec<usize> = lv.sub.graph.faces()[f].iter().map(|&x| lv.sub.to_parent(x)).collect();
            LevelCycle {
                level: i,
                component: lv.comp[edge_of(lv.sub.graph.faces()[f][0])],
                length: fg.metric.face_length(&darts),
                darts,
            }
        })
        .collect();
    Ok((lv, faces, cycles))
}

/// Action of stages `0..i` on the boundary cycles of level `i >= 1`.
pub fn level_permutation(fg: &FilteredGraph, delta: &DeltaMap, i: usize) -> Result<LevelPermutation> {
    if i == 0 || i > fg.depth() {
        return Err(Error::PropertyDoesNotHold(format!("no level {i} to permute")));
    }
    require_holds(fg, delta)?;
    let core = MixedCore::new(fg, delta)?;
    let (lv, faces, cycles) = level_cycles(fg, i)?;
    let rl = core.level_graph(i);
    // refined level face -> original level face
    let face_index: Vec<usize> = {
        let mut idx = vec![usize::MAX; lv.sub.graph.faces().len()];
        for (k, &f) in faces.iter().enumerate() {
            idx[f] = k;
        }
        idx
    };
    let orig_face = |rx: usize| -> usize {
        let od = core.sub.original_dart(rl.to_parent(rx));
        lv.sub.graph.face_of(lv.sub.to_sub(od).expect("level dart"))
    };
    let mut perm_out = vec![usize::MAX; cycles.len()];
    for rf in rl.graph.faces() {
        let src = face_index[orig_face(rf[0])];
        if src == usize::MAX {
            continue;
        }
        let image = |x: usize| -> Result<usize> {
            let (m, o) = core.run(rl.to_parent(x), i - 1);
            if o != i - 1 {
                return Err(Error::PropertyDoesNotHold(format!("level {i} dart leaves the level early")));
            }
            rl.to_sub(m).ok_or_else(|| Error::PropertyDoesNotHold(format!("level {i} dart leaves the level")))
        };
        let first = image(rf[0])?;
        let mut want = first;
        for &x in rf {
            if image(x)? != want {
                return Err(Error::PropertyDoesNotHold(format!("level {i} cycles are not mapped isometrically")));
            }
            want = rl.graph.succ(want);
        }
        let dst = face_index[orig_face(first)];
        if dst == usize::MAX {
            return Err(Error::PropertyDoesNotHold(format!("level {i} cycle lands on A")));
        }
        perm_out[src] = dst;
    }
    if !perm::is_permutation(&perm_out) {
        return Err(Error::PropertyDoesNotHold(format!("level {i} cycles are not permuted")));
    }
    let orbits = perm::cycles(&perm_out);
    Ok(LevelPermutation { level: i, cycles, perm: perm_out, orbits })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Screw {
    pub level: usize,
    pub orbit: usize,
    pub alpha: usize,
    pub value: Q,
}

/// `-(sum of delta over the orbit) / (length of one cycle)` per orbit.
pub fn screw_numbers(fg: &FilteredGraph, delta: &DeltaMap) -> Result<Vec<Screw>> {
    let mut out = Vec::new();
    for i in 1..=fg.depth() {
        let lp = level_permutation(fg, delta, i)?;
        for (j, orbit) in lp.orbits.iter().enumerate() {
            let sum: Q = orbit.iter().map(|&c| delta.0[i][lp.cycles[c].component]).sum();
            out.push(Screw { level: i, orbit: j, alpha: orbit.len(), value: -sum / lp.cycles[orbit[0]].length });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    /// (level, component)
    pub vertices: Vec<(usize, usize)>,
    /// vertex index pairs, one per boundary cycle of a level >= 1
    pub edges: Vec<(usize, usize)>,
    /// pieces equal to a piece one level up
    pub degenerate: Vec<usize>,
}

impl DualGraph {
    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.vertices.len() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

pub fn dual_graph(fg: &FilteredGraph, delta: &DeltaMap) -> Result<DualGraph> {
    require_holds(fg, delta)?;
    let levels = fg.levels_all()?;
    let mut vertices = Vec::new();
    let mut index = Vec::new();
    for (i, lv) in levels.iter().enumerate() {
        index.push(vertices.len());
        for k in 0..lv.components.len() {
            vertices.push((i, k));
        }
    }
    let mut edges = Vec::new();
    let mut degenerate = Vec::new();
    for i in 1..levels.len() {
        let (_, _, cycles) = level_cycles(fg, i)?;
        for c in &cycles {
            let e = levels[i].parent_edges(c.component)[0];
            let below = levels[i - 1].component_of_parent(e).expect("nested levels");
            edges.push((index[i] + c.component, index[i - 1] + below));
        }
        for k in 0..levels[i].components.len() {
            let mut mine = levels[i].parent_edges(k);
            let e = mine[0];
            let below = levels[i - 1].component_of_parent(e).unwrap();
            let mut theirs = levels[i - 1].parent_edges(below);
            mine.sort_unstable();
            theirs.sort_unstable();
            if mine == theirs {
                degenerate.push(index[i] + k);
            }
        }
    }
    Ok(DualGraph { vertices, edges, degenerate })
}

/// Full summary for reports.
#[derive(Clone, Debug)]
pub struct TwistSummary {
    pub permutations: Vec<LevelPermutation>,
    pub screws: Vec<Screw>,
    pub dual: DualGraph,
    /// `delta_0 / length` per non-A face of level 0
    pub outer_fdtc: Vec<(Vec<usize>, Q)>,
}

pub fn twist_summary(fg: &FilteredGraph, delta: &DeltaMap) -> Result<TwistSummary> {
    let permutations = (1..=fg.depth()).map(|i| level_permutation(fg, delta, i)).collect::<Result<Vec<_>>>()?;
    let screws = screw_numbers(fg, delta)?;
    let dual = dual_graph(fg, delta)?;
    let (_, _, cycles) = level_cycles(fg, 0)?;
    let outer_fdtc = cycles.iter().map(|c| (c.darts.clone(), delta.0[0][c.component] / c.length)).collect();
    Ok(TwistSummary { permutations, screws, dual, outer_fdtc })
}

/// K_{3,3} with edges pi/12 and a tripod of pi/4 legs hung from the
/// midpoints of the edges at `a_0`, `a_1`, `a_2` towards `b_0`; level 1 is
/// the K_{3,3} part, `delta = (1, 1/6)`.
pub fn non_regular2() -> (FilteredGraph, DeltaMap) {
    let (g, m) = make_kpq(3, 3, q(1, 12));
    let mut b = Builder::from_graph(&g, &m);
    let z = b.vertex();
    let mut mids = Vec::new();
    for i in 0..3 {
        let e = 3 * i;
        let (w, _) = b.split_edge(e, q(1, 24));
        mids.push(w);
    }
    for &w in &mids {
        let beta = b.edge(q(1, 4));
        b.rot[z].push(2 * beta);
        b.rot[w].insert(1, 2 * beta + 1);
    }
    let fin = b.finish().expect("valid rotation");
    let blue: Vec<bool> = fin.metric.0.iter().map(|l| *l == q(1, 4)).collect();
    let fg = FilteredGraph {
        graph: fin.graph,
        metric: fin.metric,
        rel: Relative::default(),
        levels: vec![blue.iter().map(|b| !b).collect()],
    };
    let delta = DeltaMap(vec![vec![Q::from_integer(1)], vec![q(1, 6)]]);
    (fg, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tat::check_tat;

    #[test]
    fn non_regular2_holds() {
        let (fg, delta) = non_regular2();
        fg.validate().unwrap();
        assert_eq!(check_mixed_tat(&fg, &delta).unwrap(), MixedVerdict::Holds);
        let lp = level_permutation(&fg, &delta, 1).unwrap();
        assert_eq!(lp.alphas(), vec![3]);
        let s = screw_numbers(&fg, &delta).unwrap();
        assert_eq!(s[0].value, Q::from_integer(-1));
        let d = dual_graph(&fg, &delta).unwrap();
        assert_eq!((d.vertices.len(), d.edges.len(), d.is_tree()), (2, 3, false));
    }

    #[test]
    fn non_regular2_other_delta_fails() {
        let (fg, _) = non_regular2();
        let delta = DeltaMap(vec![vec![Q::from_integer(1)], vec![q(1, 5)]]);
        assert!(!check_mixed_tat(&fg, &delta).unwrap().holds());
    }

    #[test]
    fn depth_zero_collapse() {
        let (g, m) = make_kpq(2, 3, q(1, 2));
        let fg = FilteredGraph::plain(g.clone(), m.clone(), Relative::default());
        for l in [q(1, 1), q(1, 2), q(3, 2)] {
            let delta = DeltaMap(vec![vec![l]]);
            assert_eq!(check_mixed_tat(&fg, &delta).unwrap().holds(), check_tat(&g, &m, None, l).unwrap().holds());
        }
    }

    #[test]
    fn order_of_a_walk() {
        let (fg, delta) = non_regular2();
        let e = (0..fg.graph.edge_count()).find(|&e| fg.edge_level(e) == 1).unwrap();
        let tr = mixed_safe_walk(&fg, &delta, Point::Edge { dart: 2 * e, offset: q(1, 100) }, None).unwrap();
        assert_eq!(tr.order, 1);
        assert_eq!(tr.total, q(7, 6));
        assert_eq!(tr.endpoint_level, 1);
    }
}
