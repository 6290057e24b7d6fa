//! Cyclic voltage covers of ribbon graphs.
//!
//! Sheet `s` of the forward dart of edge `k` is cover dart `2(kn + s)`; its
//! reverse lands on sheet `s + v(k)`. At a vertex the rotation climbs by the
//! vertex voltage when it wraps past its last listed dart.

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::ribbon::{edge_of, rev, RibbonGraph};

#[derive(Clone, Debug)]
pub struct Cover {
    pub graph: RibbonGraph,
    pub metric: Metric,
    pub sheets: usize,
    /// cover vertices over each base vertex
    pub vertex_lifts: Vec<Vec<usize>>,
}

fn md(x: i64, n: usize) -> usize {
    x.rem_euclid(n as i64) as usize
}

/// Voltage carried by dart `d`.
pub fn dart_voltage(volt: &[i64], d: usize) -> i64 {
    if d % 2 == 0 {
        volt[edge_of(d)]
    } else {
        -volt[edge_of(d)]
    }
}

/// Sheet increment around every face of the base, with wrap voltages `wrap`.
pub fn face_voltages(g: &RibbonGraph, volt: &[i64], wrap: &[i64]) -> Vec<i64> {
    g.faces()
        .iter()
        .map(|f| {
            f.iter()
                .map(|&x| {
                    let y = rev(x);
                    let v = g.tail(y);
                    let r = g.rotation(v);
                    let jump = if r[r.len() - 1] == y { wrap[v] } else { 0 };
                    dart_voltage(volt, x) + jump
                })
                .sum()
        })
        .collect()
}

pub fn lift(g: &RibbonGraph, metric: &Metric, n: usize, volt: &[i64], wrap: &[i64]) -> Result<Cover> {
    let cd = |d: usize, s: i64| -> usize {
        let k = edge_of(d);
        if d % 2 == 0 {
            2 * (k * n + md(s, n))
        } else {
            2 * (k * n + md(s - volt[k], n)) + 1
        }
    };
    let mut nu = vec![0usize; 2 * n * g.edge_count()];
    for v in 0..g.vertex_count() {
        let r = g.rotation(v);
        for s in 0..n as i64 {
            for i in 0..r.len() {
                let (next, shift) = if i + 1 < r.len() { (r[i + 1], 0) } else { (r[0], wrap[v]) };
                nu[cd(r[i], s)] = cd(next, s + shift);
            }
        }
    }
    let graph = RibbonGraph::from_nu(nu)?;
    if !graph.is_connected() {
        return Err(Error::DisconnectedCover);
    }
    let mut lens = Vec::with_capacity(n * g.edge_count());
    for k in 0..g.edge_count() {
        for _ in 0..n {
            lens.push(metric.len(k));
        }
    }
    let vertex_lifts = (0..g.vertex_count())
        .map(|v| {
            let d = g.rotation(v)[0];
            let mut vs: Vec<usize> = (0..n as i64).map(|s| graph.tail(cd(d, s))).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect();
    Ok(Cover { graph, metric: Metric(lens), sheets: n, vertex_lifts })
}

/// Base face of a cover dart.
pub fn base_dart(cover_dart: usize, n: usize) -> usize {
    2 * (edge_of(cover_dart) / n) + (cover_dart & 1)
}

/// Deck transformation: shift every sheet by one.
pub fn deck(n: usize, edges: usize) -> Vec<usize> {
    (0..2 * n * edges)
        .map(|x| {
            let e = edge_of(x);
            let (k, s) = (e / n, e % n);
            2 * (k * n + (s + 1) % n) + (x & 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::int;

    #[test]
    fn circle_double_cover() {
        let g = RibbonGraph::from_rotations(vec![vec![0, 3], vec![1, 2]]).unwrap();
        let m = Metric::uniform(2, int(1));
        let c = lift(&g, &m, 2, &[1, 0], &[0, 0]).unwrap();
        assert_eq!(c.graph.vertex_count(), 4);
        assert_eq!(c.graph.faces().len(), 2);
        assert!(c.graph.is_connected());
        let fv = face_voltages(&g, &[1, 0], &[0, 0]);
        assert_eq!(fv.iter().map(|x| x.rem_euclid(2)).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn trivial_voltage_disconnects() {
        let g = RibbonGraph::from_rotations(vec![vec![0, 3], vec![1, 2]]).unwrap();
        let m = Metric::uniform(2, int(1));
        assert!(matches!(lift(&g, &m, 3, &[0, 0], &[0, 0]), Err(Error::DisconnectedCover)));
    }
}
