//! Attaching periodic pieces along orbits of relative circles.
//!
//! Each circle `C'_k` of an orbit at the deepest level is removed and the
//! boundary face of a copy of the child takes its place. A point of `C'_k`
//! at position `x` (from the tail of the cycle's first dart) goes to
//! position `x - theta_k` of the child face; the offsets are chosen so that
//! the base map `C'_k -> C'_{k+1}` followed by the new stage of length
//! `delta` is the identity in child coordinates, except on the last step,
//! which must be a walk length for which the child is tete-a-tete.

use num_traits::Zero;

use crate::build::Builder;
use crate::construct::blowup::blow_up;
use crate::construct::realize::{realize_periodic, OrbitSpec};
use crate::error::{Error, Result};
use crate::metric::{common_unit, Metric};
use crate::mixed::{boundary_mixed_safe_walk, check_mixed_tat, DeltaMap, FilteredGraph, MixedVerdict};
use crate::q::{self, Q};
use crate::ribbon::{a_face_mask, edge_of, rev, validate_relative, Relative, RibbonGraph};
use crate::tat::{check_tat, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGraph {
    pub fg: FilteredGraph,
    pub delta: DeltaMap,
}

/// Relative tat graph with a single non-A face, glued along that face.
#[derive(Clone, Debug)]
pub struct ChildPiece {
    pub graph: RibbonGraph,
    pub metric: Metric,
    pub rel: Relative,
}

#[derive(Clone, Debug)]
pub struct Attachment {
    /// index in the base relative structure of one circle of the orbit
    pub cycle: usize,
    pub child: ChildPiece,
    pub screw: Q,
    /// expected orbit size
    pub alpha: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Attached {
    pub mixed: MixedGraph,
    /// base cycles of each orbit, in orbit order
    pub orbits: Vec<Vec<usize>>,
    pub deltas: Vec<Q>,
    /// new cycle index of every child cycle: `[attachment][copy][cycle]`
    pub child_cycles: Vec<Vec<Vec<usize>>>,
    /// new index of every base cycle that survives
    pub base_cycles: Vec<Option<usize>>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidAttachment(msg.into())
}

fn modulo(x: Q, m: Q) -> Q {
    q::modulo(x, m)
}

fn cycle_length(metric: &Metric, c: &[usize]) -> Q {
    c.iter().map(|&d| metric.dart_len(d)).sum()
}

/// Cycle and position along it of a point on an orientation dart.
fn locate(rel: &Relative, metric: &Metric, d: usize, t: Q) -> Option<(usize, Q)> {
    for (j, c) in rel.cycles.iter().enumerate() {
        let mut s = Q::zero();
        for &x in c {
            if x == d {
                return Some((j, s + t));
            }
            s += metric.dart_len(x);
        }
    }
    None
}

/// Orbit of cycle `j` under the boundary mixed map, with the rotation
/// amount `tau` of each step.
fn orbit(base: &MixedGraph, j: usize, lambda: Q) -> Result<(Vec<usize>, Vec<Q>)> {
    let fg = &base.fg;
    let u = common_unit(&fg.metric, &base.delta.values());
    let r = u / Q::from_integer(2);
    let ncyc = fg.rel.cycles.len();
    let mut cycles = vec![j];
    let mut taus = Vec::new();
    let mut cur = j;
    loop {
        let a0 = fg.rel.cycles[cur][0];
        let e = edge_of(a0);
        let off = if a0 % 2 == 0 { r } else { fg.metric.len(e) - r };
        let tr = boundary_mixed_safe_walk(fg, &base.delta, e, off)?;
        let (next, y) = locate(&fg.rel, &fg.metric, tr.end_dart, tr.end_offset)
            .ok_or_else(|| invalid(format!("boundary walk from circle {} leaves A", cur + 1)))?;
        if cycle_length(&fg.metric, &fg.rel.cycles[next]) != lambda {
            return Err(invalid(format!("circles {} and {} differ in length", j + 1, next + 1)));
        }
        taus.push(modulo(y - r, lambda));
        if next == j {
            break;
        }
        if cycles.contains(&next) || cycles.len() > ncyc {
            return Err(invalid(format!("circle {} is not on a closed orbit", j + 1)));
        }
        cycles.push(next);
        cur = next;
    }
    Ok((cycles, taus))
}

struct Surgery {
    b: Builder,
    level: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

impl Surgery {
    fn edge(&mut self, len: Q, level: usize) -> usize {
        let e = self.b.edge(len);
        self.level.push(level);
        e
    }

    /// Splits edge `e` at `t` from its tail, keeping every dart list in `extra`
    /// and every cycle consistent.
    fn split(&mut self, e: usize, t: Q, extra: &mut Vec<usize>) -> (usize, usize) {
        let (w, f) = self.b.split_edge(e, t);
        self.level.push(self.level[e]);
        let fix = |list: &mut Vec<usize>| {
            let mut out = Vec::with_capacity(list.len() + 1);
            for &x in list.iter() {
                if x == 2 * e {
                    out.extend([2 * e, 2 * f]);
                } else if x == 2 * e + 1 {
                    out.extend([2 * f + 1, 2 * e + 1]);
                } else {
                    out.push(x);
                }
            }
            *list = out;
        };
        for c in self.cycles.iter_mut() {
            fix(c);
        }
        fix(extra);
        (w, f)
    }

    /// Cuts two segments of length `eps / 2` off the end of blue dart `d`
    /// at its tail; returns the dart now leaving the tail.
    fn connectors(&mut self, d: usize, eps: Q, extra: &mut Vec<usize>) -> usize {
        let e = edge_of(d);
        let half = eps / Q::from_integer(2);
        if d % 2 == 0 {
            let (_, f1) = self.split(e, half, extra);
            self.split(f1, half, extra);
            d
        } else {
            let l = self.b.len[e];
            let (_, f) = self.split(e, l - half, extra);
            self.split(e, l - eps, extra);
            2 * f + 1
        }
    }
}

pub fn attach_level(base: &MixedGraph, atts: &[Attachment]) -> Result<Attached> {
    let fg = &base.fg;
    let d = fg.depth();
    let a_top = fg.a_level(d);
    struct Plan {
        orbit: Vec<usize>,
        taus: Vec<Q>,
        lambda: Q,
        delta: Q,
        face: Vec<usize>,
    }
    let mut plans = Vec::new();
    let mut used = vec![false; fg.rel.cycles.len()];
    for (ai, a) in atts.iter().enumerate() {
        if a.screw >= Q::zero() {
            return Err(invalid(format!("attachment {} has screw {}, which must be negative", ai + 1, q::fmt(&a.screw))));
        }
        let c = fg.rel.cycles.get(a.cycle).ok_or_else(|| invalid(format!("no circle {}", a.cycle + 1)))?;
        if !a_top.cycles.contains(c) {
            return Err(invalid(format!("circle {} is not at level {d}", a.cycle + 1)));
        }
        let lambda = cycle_length(&fg.metric, c);
        let (orb, taus) = orbit(base, a.cycle, lambda)?;
        if let Some(want) = a.alpha {
            if want != orb.len() {
                return Err(Error::SpecOrbitMismatch(format!(
                    "circle {} has an orbit of {} circles, expected {want}",
                    a.cycle + 1,
                    orb.len()
                )));
            }
        }
        for &j in &orb {
            if used[j] {
                return Err(invalid(format!("circle {} is attached twice", j + 1)));
            }
            used[j] = true;
        }
        let ch = &a.child;
        validate_relative(&ch.graph, &ch.rel)?;
        let amask = a_face_mask(&ch.graph, Some(&ch.rel));
        let faces: Vec<usize> = (0..amask.len()).filter(|&f| !amask[f]).collect();
        if faces.len() != 1 {
            return Err(Error::LengthMismatch(format!("child {} has {} non-A faces, expected one", ai + 1, faces.len())));
        }
        let face = ch.graph.faces()[faces[0]].clone();
        let fl = ch.metric.face_length(&face);
        if fl != lambda {
            return Err(Error::LengthMismatch(format!(
                "child {} face has length {}, circle {} has {}",
                ai + 1,
                q::fmt(&fl),
                a.cycle + 1,
                q::fmt(&lambda)
            )));
        }
        let alpha = Q::from_integer(orb.len() as i128);
        plans.push(Plan { delta: -a.screw * lambda / alpha, orbit: orb, taus, lambda, face });
    }

    let mut extra_lengths: Vec<Q> = base.delta.values();
    for (p, a) in plans.iter().zip(atts) {
        extra_lengths.push(p.delta);
        extra_lengths.push(p.lambda);
        extra_lengths.extend(a.child.metric.0.iter().copied());
    }
    let unit = common_unit(&fg.metric, &extra_lengths);
    let eps = unit / Q::from_integer(4);

    let mut s = Surgery {
        b: Builder::from_graph(&fg.graph, &fg.metric),
        level: (0..fg.graph.edge_count()).map(|e| fg.edge_level(e)).collect(),
        cycles: fg.rel.cycles.clone(),
    };
    let ncyc0 = fg.rel.cycles.len();
    // builder edge standing in for each removed circle edge
    let mut stand_in = vec![None; fg.graph.edge_count()];
    // child cycle indices (in `s.cycles`) per attachment and copy
    let mut child_cycle_ix: Vec<Vec<Vec<usize>>> = Vec::new();
    // first builder edge of every copy, per attachment
    let mut copy_edges: Vec<Vec<usize>> = Vec::new();

    for (p, a) in plans.iter().zip(atts) {
        let ch = &a.child;
        let alpha = p.orbit.len();
        let mut theta = unit / Q::from_integer(2);
        let mut per_copy = Vec::new();
        let mut firsts = Vec::new();
        for (k, &j) in p.orbit.iter().enumerate() {
            let emap: Vec<usize> = ch.metric.0.iter().map(|&l| s.edge(l, d + 1)).collect();
            let md = |x: usize| 2 * emap[edge_of(x)] + (x & 1);
            for v in 0..ch.graph.vertex_count() {
                let nv = s.b.vertex();
                s.b.rot[nv] = ch.graph.rotation(v).iter().map(|&x| md(x)).collect();
            }
            let mut ix = Vec::new();
            for c in &ch.rel.cycles {
                ix.push(s.cycles.len());
                s.cycles.push(c.iter().map(|&x| md(x)).collect());
            }
            per_copy.push(ix);
            firsts.push(emap[0]);
            let mut face: Vec<usize> = p.face.iter().map(|&x| md(x)).collect();

            let circle = s.cycles[j].clone();
            for &x in &circle {
                stand_in[edge_of(x)] = Some(emap[0]);
            }
            // vertices of the circle with their positions
            let mut stops = Vec::new();
            let mut pos = Q::zero();
            for (i, &a_in) in circle.iter().enumerate() {
                pos += s.b.len[edge_of(a_in)];
                let a_out = circle[(i + 1) % circle.len()];
                stops.push((s.b.tail(rev(a_in)), a_in, a_out, modulo(pos, p.lambda)));
            }
            for (w, a_in, a_out, x) in stops {
                let r = &mut s.b.rot[w];
                let at = r.iter().position(|&y| y == rev(a_in)).expect("circle dart");
                r.rotate_left(at);
                if r[r.len() - 1] != a_out {
                    return Err(invalid(format!("circle {} is not compatible at v{}", j + 1, w + 1)));
                }
                let nblue = r.len() - 2;
                let mut blues = Vec::new();
                for bi in 0..nblue {
                    let dart = s.b.rot[w][1 + bi];
                    blues.push(s.connectors(dart, eps, &mut face));
                }
                let y = modulo(x - theta, p.lambda);
                let (h, before, after) = split_face(&mut s, &mut face, y)?;
                s.b.kill_vertex(w);
                let mut rot = vec![rev(before)];
                rot.extend(blues);
                rot.push(after);
                s.b.rot[h] = rot;
            }
            for &x in &circle {
                s.b.kill_edge(edge_of(x));
            }
            if k + 1 < alpha {
                theta += p.taus[k] + p.delta;
            } else {
                let rho = modulo(theta + p.taus[k] + p.delta - unit / Q::from_integer(2), p.lambda);
                if !rho.is_zero() && check_tat(&ch.graph, &ch.metric, Some(&ch.rel), rho)? != Verdict::Holds {
                    return Err(invalid(format!(
                        "the orbit of circle {} returns with a shift of {}, which the child does not realize",
                        a.cycle + 1,
                        q::fmt(&rho)
                    )));
                }
            }
        }
        child_cycle_ix.push(per_copy);
        copy_edges.push(firsts);
    }

    let removed: Vec<bool> = (0..s.cycles.len()).map(|c| c < ncyc0 && used[c]).collect();
    let fin = s.b.finish()?;
    let mut new_index = vec![None; s.cycles.len()];
    let mut cycles = Vec::new();
    for (c, cyc) in s.cycles.iter().enumerate() {
        if !removed[c] {
            new_index[c] = Some(cycles.len());
            cycles.push(cyc.iter().map(|&x| fin.dart(x)).collect::<Vec<_>>());
        }
    }
    let m = fin.graph.edge_count();
    let mut lev = vec![0; m];
    for (e, id) in fin.edge_id.iter().enumerate() {
        if let Some(id) = id {
            lev[*id] = s.level[e];
        }
    }
    let new_fg = FilteredGraph {
        graph: fin.graph,
        metric: fin.metric,
        rel: Relative::new(cycles),
        levels: (1..=d + 1).map(|i| lev.iter().map(|&l| l >= i).collect()).collect(),
    };
    new_fg.validate()?;

    let old_levels = fg.levels_all()?;
    let new_levels = new_fg.levels_all()?;
    let mut values: Vec<Vec<Option<Q>>> = new_levels.iter().map(|l| vec![None; l.components.len()]).collect();
    let assign = |i: usize, e_new: usize, v: Q, values: &mut Vec<Vec<Option<Q>>>| -> Result<()> {
        let k = new_levels[i].component_of_parent(e_new).expect("edge in level");
        match values[i][k] {
            Some(old) if old != v => Err(invalid(format!("level {i} merges components with different deltas"))),
            _ => {
                values[i][k] = Some(v);
                Ok(())
            }
        }
    };
    for (i, lv) in old_levels.iter().enumerate() {
        for k in 0..lv.components.len() {
            for e in lv.parent_edges(k) {
                let rep = match fin.edge_id[e] {
                    Some(x) => Some(x),
                    None => stand_in[e].and_then(|b| fin.edge_id[b]),
                };
                if let Some(x) = rep {
                    assign(i, x, base.delta.0[i][k], &mut values)?;
                }
            }
        }
    }
    for (p, firsts) in plans.iter().zip(&copy_edges) {
        for &b in firsts {
            assign(d + 1, fin.edge_id[b].expect("child edge"), p.delta, &mut values)?;
        }
    }
    let mut delta_rows = Vec::new();
    for (i, row) in values.into_iter().enumerate() {
        let mut r = Vec::new();
        for v in row {
            r.push(v.ok_or_else(|| invalid(format!("a level {i} component has no delta")))?);
        }
        delta_rows.push(r);
    }
    let delta = DeltaMap(delta_rows);
    if let MixedVerdict::Fails(w) = check_mixed_tat(&new_fg, &delta)? {
        return Err(Error::PostCheckFailed(format!(
            "clause {} at {}",
            w.clause.clone().unwrap_or_default(),
            w.describe()
        )));
    }
    Ok(Attached {
        mixed: MixedGraph { fg: new_fg, delta },
        orbits: plans.iter().map(|p| p.orbit.clone()).collect(),
        deltas: plans.iter().map(|p| p.delta).collect(),
        child_cycles: child_cycle_ix
            .iter()
            .map(|copies| copies.iter().map(|ix| ix.iter().map(|&c| new_index[c].unwrap()).collect()).collect())
            .collect(),
        base_cycles: (0..ncyc0).map(|c| new_index[c]).collect(),
    })
}

/// New vertex at position `y` of the face word `face`; returns it with the
/// face darts arriving at and leaving it.
fn split_face(s: &mut Surgery, face: &mut Vec<usize>, y: Q) -> Result<(usize, usize, usize)> {
    let mut start = Q::zero();
    for i in 0..face.len() {
        let x = face[i];
        let e = edge_of(x);
        let l = s.b.len[e];
        if y > start && y < start + l {
            let along = y - start;
            return Ok(if x % 2 == 0 {
                let (h, f) = s.split(e, along, face);
                (h, 2 * e, 2 * f)
            } else {
                let (h, f) = s.split(e, l - along, face);
                (h, 2 * f + 1, 2 * e + 1)
            });
        }
        if y == start {
            break;
        }
        start += l;
    }
    Err(invalid(format!("attachment point {} falls on a vertex", q::fmt(&y))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecPiece {
    pub name: String,
    pub spec: OrbitSpec,
    /// parent piece and the index of its special point
    pub parent: Option<(usize, usize)>,
    pub screw: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecTree {
    pub pieces: Vec<SpecPiece>,
}

#[derive(Clone, Debug)]
pub struct MixedRealization {
    pub mixed: MixedGraph,
    /// level of each piece
    pub depth: Vec<usize>,
    pub alpha: Vec<usize>,
    pub delta: Vec<Q>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidOrbitSpec(msg.into())
}

/// Face length of a one-boundary piece.
fn piece_lambda(spec: &OrbitSpec) -> Result<Q> {
    match spec.boundaries.as_slice() {
        [(r, 1)] => Ok(Q::from_integer(1) / (*r * Q::from_integer(spec.order as i128))),
        _ => Err(bad("an attached piece needs exactly one boundary with sign +")),
    }
}

pub fn realize_mixed(tree: &SpecTree) -> Result<MixedRealization> {
    let np = tree.pieces.len();
    if np == 0 || tree.pieces[0].parent.is_some() {
        return Err(bad("the first piece must be the root"));
    }
    let root = &tree.pieces[0].spec;
    if root.boundaries.iter().any(|&(_, s)| s != 1) {
        return Err(bad("every boundary of the root needs sign +"));
    }
    let mut depth = vec![0usize; np];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); np];
    for (i, p) in tree.pieces.iter().enumerate().skip(1) {
        let (par, pt) = p.parent.ok_or_else(|| bad(format!("piece {} has no parent", p.name)))?;
        if par >= i {
            return Err(bad(format!("piece {} must follow its parent", p.name)));
        }
        if pt >= tree.pieces[par].spec.points.len() {
            return Err(bad(format!("piece {} hangs from a missing point", p.name)));
        }
        if children[par].iter().any(|&c| tree.pieces[c].parent.unwrap().1 == pt) {
            return Err(bad(format!("two pieces hang from point {} of {}", pt + 1, tree.pieces[par].name)));
        }
        if p.screw >= Q::zero() {
            return Err(bad(format!("piece {} needs a negative screw", p.name)));
        }
        depth[i] = depth[par] + 1;
        children[par].push(i);
    }

    // realize and blow up every piece at the points its children use
    let mut pieces = Vec::with_capacity(np);
    // cycle index (in the piece) and orbit size of each child's circles
    let mut circle = vec![(0usize, 0usize); np];
    for i in 0..np {
        let r = realize_periodic(&tree.pieces[i].spec)?;
        let mut g = r.graph.clone();
        let mut m = r.metric.clone();
        let mut rel = Relative::default();
        let mut signs = r.signs.clone();
        let mut vid: Vec<Option<usize>> = (0..g.vertex_count()).map(Some).collect();
        for &c in &children[i] {
            let pt = tree.pieces[c].parent.unwrap().1;
            let v = vid[r.point_lifts[pt][0]].expect("lift survives");
            let p = Q::from_integer(g.valency(v) as i128);
            let eps = piece_lambda(&tree.pieces[c].spec)? / (p * Q::from_integer(2));
            let bu = blow_up(&g, &m, Some(&rel), Some(&signs), v, eps)?;
            circle[c] = (bu.new_cycles[0], bu.orbit.len());
            vid = vid.iter().map(|x| x.and_then(|x| bu.vertex_id[x])).collect();
            g = bu.graph;
            m = bu.metric;
            rel = bu.rel;
            signs = bu.signs;
        }
        pieces.push(ChildPiece { graph: g, metric: m, rel });
    }

    let root_piece = &pieces[0];
    let fg0 = FilteredGraph::plain(root_piece.graph.clone(), root_piece.metric.clone(), root_piece.rel.clone());
    let comps = root_piece.graph.components().len();
    let mut mixed = MixedGraph { fg: fg0, delta: DeltaMap(vec![vec![Q::from_integer(1); comps]]) };
    // current cycle index of each piece's circle and its expected orbit size
    let mut cycle_now: Vec<Option<usize>> = vec![None; np];
    let mut alpha = vec![1usize; np];
    let mut delta = vec![Q::from_integer(1); np];
    for &c in &children[0] {
        cycle_now[c] = Some(circle[c].0);
        alpha[c] = circle[c].1;
    }
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    for t in 1..=max_depth {
        let at: Vec<usize> = (0..np).filter(|&i| depth[i] == t).collect();
        let atts: Vec<Attachment> = at
            .iter()
            .map(|&i| Attachment {
                cycle: cycle_now[i].expect("parent attached"),
                child: pieces[i].clone(),
                screw: tree.pieces[i].screw,
                alpha: Some(alpha[i]),
            })
            .collect();
        let res = attach_level(&mixed, &atts)?;
        for (ai, &i) in at.iter().enumerate() {
            delta[i] = res.deltas[ai];
            for &c in &children[i] {
                cycle_now[c] = Some(res.child_cycles[ai][0][circle[c].0]);
                alpha[c] = alpha[i] * circle[c].1;
            }
        }
        mixed = res.mixed;
    }
    Ok(MixedRealization { mixed, depth, alpha, delta })
}

/// The depth-one example: a disk of order 2 (coefficient 1/2) with a
/// central branch point and a marked point whose two lifts carry copies of
/// a genus-one piece of coefficient 9, attached with screw -1.
pub fn example_thm_tree() -> SpecTree {
    SpecTree {
        pieces: vec![
            SpecPiece {
                name: "root".into(),
                spec: OrbitSpec {
                    genus: 0,
                    order: 2,
                    boundaries: vec![(Q::new(1, 2), 1)],
                    points: vec![1, 0],
                    handles: vec![],
                },
                parent: None,
                screw: Q::zero(),
            },
            SpecPiece {
                name: "torus".into(),
                spec: OrbitSpec { genus: 1, order: 1, boundaries: vec![(Q::from_integer(9), 1)], points: vec![], handles: vec![] },
                parent: Some((0, 1)),
                screw: Q::from_integer(-1),
            },
        ],
    }
}
