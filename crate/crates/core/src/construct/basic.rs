use crate::metric::Metric;
use crate::q::Q;
use crate::ribbon::RibbonGraph;

/// Complete bipartite graph. Vertices `a_0..a_{p-1}` then `b_0..b_{q-1}`;
/// edge `i*q + j` runs from `a_i` to `b_j`. Both sides list their
/// neighbours in increasing order, so `S+` maps the dart of `(i, j)` two
/// steps later to the dart of `(i+1, j+1)`.
pub fn make_kpq(p: usize, q: usize, len: Q) -> (RibbonGraph, Metric) {
    assert!(p >= 1 && q >= 1, "p and q must be positive");
    let mut rot = Vec::with_capacity(p + q);
    for i in 0..p {
        rot.push((0..q).map(|j| 2 * (i * q + j)).collect());
    }
    for j in 0..q {
        rot.push((0..p).map(|i| 2 * (i * q + j) + 1).collect());
    }
    let g = RibbonGraph::from_rotations(rot).expect("bipartite rotation is valid");
    (g, Metric::uniform(p * q, len))
}

/// Circle of the given total length as two edges between two vertices.
pub fn make_circle(total: Q) -> (RibbonGraph, Metric) {
    let g = RibbonGraph::from_rotations(vec![vec![0, 3], vec![1, 2]]).expect("circle rotation is valid");
    (g, Metric::uniform(2, total / Q::from_integer(2)))
}

/// One vertex with three unit loops whose two faces run over
/// `e1 e2` and `e1 e2 e3 e3`. The rotation is the first one, in
/// lexicographic order, with that face structure.
pub fn make_counterexample() -> (RibbonGraph, Metric) {
    fn perms(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let d = rest.remove(i);
            cur.push(d);
            perms(rest, cur, out);
            cur.pop();
            rest.insert(i, d);
        }
    }
    let mut all = Vec::new();
    perms(&mut (1..6).collect(), &mut vec![0], &mut all);
    for rot in all {
        let g = RibbonGraph::from_rotations(vec![rot]).expect("one-vertex rotation is valid");
        let mut counts: Vec<[usize; 3]> = g
            .faces()
            .iter()
            .map(|f| {
                let mut c = [0; 3];
                for &d in f {
                    c[d / 2] += 1;
                }
                c
            })
            .collect();
        counts.sort_unstable();
        if counts == [[1, 1, 0], [1, 1, 2]] {
            return (g, Metric::uniform(3, Q::from_integer(1)));
        }
    }
    unreachable!("some rotation has the required faces")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_faces() {
        let (g, _) = make_counterexample();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.faces().len(), 2);
    }
}
