//! Quotient spines for periodic realizations.
//!
//! Every spine is described by its face words; `RibbonGraph::from_faces`
//! recovers the rotation. Lengths are in units of pi, `lambda[i]` is the
//! required length of the face of boundary `i`.

use num_traits::Zero;

use crate::build::Builder;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::q::Q;
use crate::ribbon::RibbonGraph;

#[derive(Clone, Debug)]
pub struct Spine {
    pub graph: RibbonGraph,
    pub metric: Metric,
    /// vertex carrying each special point
    pub point_vertex: Vec<usize>,
    /// a dart on the face of each boundary
    pub boundary_dart: Vec<usize>,
    /// `solve_edges[i]` has one side on boundary `i` and one on a later boundary
    pub solve_edges: Vec<usize>,
    /// (a, b) edges per handle
    pub handle_edges: Vec<(usize, usize)>,
    /// boundaries in solving order: `solve_edges[j]` lies on the faces of
    /// `order[j]` and `order[j + 1]`
    pub order: Vec<usize>,
}

struct Words {
    lens: Vec<Q>,
    faces: Vec<Vec<usize>>,
}

impl Words {
    fn new() -> Self {
        Words { lens: Vec::new(), faces: Vec::new() }
    }

    fn edge(&mut self, len: Q) -> usize {
        self.lens.push(len);
        self.lens.len() - 1
    }
}

fn p(e: usize) -> usize {
    2 * e
}

fn m(e: usize) -> usize {
    2 * e + 1
}

fn qi(n: usize) -> Q {
    Q::from_integer(n as i128)
}

/// Assembles the graph; `subdivide` lists (edge, vertices to add evenly)
/// in builder ids, `fixed` lists point vertices given by darts (tail).
struct Assembly {
    builder: Builder,
    point_vertex: Vec<usize>,
}

impl Assembly {
    fn new(w: &Words) -> Result<(Self, RibbonGraph)> {
        let g = RibbonGraph::from_faces(&w.faces)?;
        let b = Builder::from_graph(&g, &Metric(w.lens.clone()));
        Ok((Assembly { builder: b, point_vertex: Vec::new() }, g))
    }

    /// Adds `k` evenly spaced vertices on edge `e` and records them as points.
    fn points_on(&mut self, e: usize, k: usize) {
        if k == 0 {
            return;
        }
        let step = self.builder.len[e] / qi(k + 1);
        let mut cur = e;
        for _ in 0..k {
            let (w, f) = self.builder.split_edge(cur, step);
            self.point_vertex.push(w);
            cur = f;
        }
    }

    fn finish(mut self, boundary_dart: Vec<usize>, solve_edges: Vec<usize>, handle_edges: Vec<(usize, usize)>) -> Result<Spine> {
        self.builder.split_loops();
        let fin = self.builder.finish()?;
        Ok(Spine {
            order: (0..boundary_dart.len()).collect(),
            point_vertex: self.point_vertex.iter().map(|&v| fin.vertex_id[v].unwrap()).collect(),
            boundary_dart: boundary_dart.iter().map(|&d| fin.dart(d)).collect(),
            solve_edges: solve_edges.iter().map(|&e| fin.edge_id[e].unwrap()).collect(),
            handle_edges: handle_edges.iter().map(|&(a, b)| (fin.edge_id[a].unwrap(), fin.edge_id[b].unwrap())).collect(),
            graph: fin.graph,
            metric: fin.metric,
        })
    }
}

/// Spine for genus `g >= 1` with `r` boundaries and `k` points on `b_1`.
pub fn genus_positive(g: usize, lambda: &[Q], k: usize) -> Result<Spine> {
    let r = lambda.len();
    let l = lambda.iter().copied().fold(lambda[0], Q::min) / qi(4);
    let mut w = Words::new();
    let b1 = w.edge(l);
    let residual = lambda[r - 1] - l * qi(2);
    let mut c = Vec::with_capacity(r);
    for i in 0..r {
        let len = if i + 1 < r {
            (lambda[i] - l * qi(2)) / qi(2)
        } else if g >= 2 {
            residual / qi(4)
        } else {
            residual / qi(2)
        };
        c.push(w.edge(len));
    }
    let chords: Vec<usize> = (0..r.saturating_sub(1)).map(|_| w.edge(l)).collect();
    let mut handles = vec![(c[r - 1], b1)];
    let mut d_word = Vec::new();
    for _ in 1..g {
        let hl = residual / qi(8 * (g - 1));
        let (a, b) = (w.edge(hl), w.edge(hl));
        handles.push((a, b));
        d_word.extend([p(a), p(b), m(a), m(b)]);
    }
    if r == 1 {
        let mut f = vec![p(c[0]), p(b1), m(c[0]), m(b1)];
        f.extend(&d_word);
        w.faces.push(f);
    } else {
        w.faces.push(vec![p(b1), m(c[0]), p(chords[0]), p(c[0])]);
        for i in 1..r - 1 {
            w.faces.push(vec![m(c[i]), p(chords[i]), p(c[i]), m(chords[i - 1])]);
        }
        let mut f = vec![m(c[r - 1]), m(b1)];
        f.extend(&d_word);
        f.extend([p(c[r - 1]), m(chords[r - 2])]);
        w.faces.push(f);
    }
    let boundary_dart: Vec<usize> = w.faces.iter().map(|f| f[0]).collect();
    let (mut asm, _) = Assembly::new(&w)?;
    asm.points_on(b1, k);
    asm.finish(boundary_dart, chords, handles)
}

/// Folded-disk spine: `top[j]`, `bottom[j]` are the c-coordinates of the
/// chord ends `T_j`, `B_j`; `half` is the length of `c`. Region `i` is the
/// face of boundary `order[i]`.
fn fold(half: Q, top: &[Q], bottom: &[Q], chord: Q) -> Result<(Assembly, Vec<usize>, Vec<usize>, Vec<usize>)> {
    let r = top.len() + 1;
    let mut cuts: Vec<Q> = vec![Q::zero(), half];
    cuts.extend(top.iter().copied());
    cuts.extend(bottom.iter().copied());
    cuts.sort();
    cuts.dedup();
    let mut w = Words::new();
    let segs: Vec<usize> = cuts.windows(2).map(|x| w.edge(x[1] - x[0])).collect();
    let chords: Vec<usize> = (0..r - 1).map(|_| w.edge(chord)).collect();
    let idx = |y: Q| cuts.iter().position(|&c| c == y).unwrap();
    let up = |a: Q, b: Q| -> Vec<usize> { (idx(a)..idx(b)).map(|s| p(segs[s])).collect() };
    let down = |a: Q, b: Q| -> Vec<usize> { (idx(b)..idx(a)).rev().map(|s| m(segs[s])).collect() };
    if r == 1 {
        let mut f = up(Q::zero(), half);
        f.extend(down(half, Q::zero()));
        w.faces.push(f);
    } else {
        let mut f = down(bottom[0], Q::zero());
        f.extend(up(Q::zero(), top[0]));
        f.push(p(chords[0]));
        w.faces.push(f);
        for i in 1..r - 1 {
            let mut f = up(top[i - 1], top[i]);
            f.push(p(chords[i]));
            f.extend(down(bottom[i], bottom[i - 1]));
            f.push(m(chords[i - 1]));
            w.faces.push(f);
        }
        let mut f = up(top[r - 2], half);
        f.extend(down(half, bottom[r - 2]));
        f.push(m(chords[r - 2]));
        w.faces.push(f);
    }
    let boundary_dart = w.faces.iter().map(|f| f[0]).collect();
    let (asm, _) = Assembly::new(&w)?;
    Ok((asm, boundary_dart, chords, segs))
}

/// Genus-0 spine. `lambda` per boundary, `k` special points.
pub fn genus_zero(lambda: &[Q], k: usize) -> Result<Spine> {
    let r = lambda.len();
    let two = qi(2);
    if r == 1 {
        if k < 2 {
            return Err(Error::InvalidOrbitSpec("genus 0 with one boundary needs at least two branch or marked points (disk)".into()));
        }
        let (mut asm, bd, chords, segs) = fold(lambda[0] / two, &[], &[], Q::zero())?;
        let q1 = asm.builder.tail(p(segs[0]));
        let q2 = asm.builder.tail(m(segs[segs.len() - 1]));
        asm.point_vertex = vec![q1, q2];
        asm.points_on(segs[0], k - 2);
        return asm.finish(bd, chords, vec![]);
    }
    if r == 2 {
        if k == 0 {
            return Err(Error::InvalidOrbitSpec("genus 0 with two boundaries needs a branch or marked point (cylinder)".into()));
        }
        if lambda[0] == lambda[1] {
            let half = lambda[0] / two;
            let (mut asm, bd, chords, segs) = fold(half, &[Q::zero()], &[half], half)?;
            // region 1 is the bottom side: boundary 1 keeps it
            asm.points_on(segs[0], k);
            return asm.finish(bd, chords, vec![]);
        }
        return lollipop(lambda, k);
    }
    if k >= 2 {
        let l = lambda.iter().copied().fold(lambda[0], Q::min) / qi(4);
        let mut t = Vec::with_capacity(r - 1);
        let mut y = (lambda[0] - l) / two;
        t.push(y);
        for i in 1..r - 1 {
            y += (lambda[i] - l * two) / two;
            t.push(y);
        }
        let half = y + (lambda[r - 1] - l) / two;
        let (mut asm, bd, chords, segs) = fold(half, &t, &t, l)?;
        let q1 = asm.builder.tail(p(segs[0]));
        let q2 = asm.builder.tail(m(segs[segs.len() - 1]));
        asm.point_vertex = vec![q1, q2];
        asm.points_on(segs[0], k - 2);
        return asm.finish(bd, chords, vec![]);
    }
    repositioned(lambda, k)
}

/// `r > 2` with at most one point: the chords reach both ends of `c`, so
/// no univalent vertex needs a branch point. The two shortest boundaries
/// take the end regions.
fn repositioned(lambda: &[Q], k: usize) -> Result<Spine> {
    let r = lambda.len();
    let two = qi(2);
    let mut by_len: Vec<usize> = (0..r).collect();
    by_len.sort_by(|&x, &y| lambda[x].cmp(&lambda[y]).then(x.cmp(&y)));
    let (a, b) = (by_len[0], by_len[1]);
    let middle: Vec<usize> = (0..r).filter(|&i| i != a && i != b).collect();
    let mut order = vec![a];
    order.extend(&middle);
    order.push(b);
    let others: Q = middle.iter().map(|&i| lambda[i]).sum();
    let gap = if lambda[a] > lambda[b] { lambda[a] - lambda[b] } else { lambda[b] - lambda[a] };
    let l = (lambda[a] / qi(4)).min((others - gap) / qi(4 * (r - 2)));
    let s: Q = middle.iter().map(|&i| lambda[i] - l * two).sum();
    let x = (lambda[a] - lambda[b] + s) / two;
    let a1 = lambda[a] - l;
    let mut top = vec![Q::zero()];
    let mut bottom = vec![a1];
    for &i in &middle {
        let room = lambda[i] - l * two;
        let ai = room * x / s;
        top.push(top[top.len() - 1] + ai);
        bottom.push(bottom[bottom.len() - 1] + room - ai);
    }
    let half = bottom[bottom.len() - 1];
    debug_assert_eq!(half - top[top.len() - 1], lambda[b] - l);
    let (mut asm, bd, chords, segs) = fold(half, &top, &bottom, l)?;
    asm.points_on(segs[0], k);
    let mut spine = asm.finish(bd, chords, vec![])?;
    // regions were laid out in `order`; chord `j` separates regions j, j+1
    let mut boundary_dart = vec![0; r];
    for (region, &bnd) in order.iter().enumerate() {
        boundary_dart[bnd] = spine.boundary_dart[region];
    }
    spine.boundary_dart = boundary_dart;
    spine.order = order;
    Ok(spine)
}

/// `r = 2` with different lengths: a loop (the shorter boundary inside)
/// with a tail whose free end is the first point.
fn lollipop(lambda: &[Q], k: usize) -> Result<Spine> {
    let two = qi(2);
    let (inner, outer) = if lambda[0] < lambda[1] { (0, 1) } else { (1, 0) };
    let mut w = Words::new();
    let l1 = w.edge(lambda[inner] / two);
    let l2 = w.edge(lambda[inner] / two);
    let c = w.edge((lambda[outer] - lambda[inner]) / two);
    w.faces.push(vec![p(l1), p(l2)]);
    w.faces.push(vec![m(l2), m(l1), p(c), m(c)]);
    let (mut asm, _) = Assembly::new(&w)?;
    let tip = asm.builder.tail(m(c));
    asm.point_vertex = vec![tip];
    asm.points_on(c, k - 1);
    let mut bd = vec![0; 2];
    bd[inner] = p(l1);
    bd[outer] = m(l2);
    let mut spine = asm.finish(bd, vec![l1], vec![])?;
    spine.order = vec![inner, outer];
    Ok(spine)
}
