//! Mutable rotation-system editing used by the constructions.

use crate::error::Result;
use crate::metric::Metric;
use crate::q::Q;
use crate::ribbon::RibbonGraph;

#[derive(Clone, Debug, Default)]
pub struct Builder {
    pub rot: Vec<Vec<usize>>,
    pub len: Vec<Q>,
    pub dead_vertex: Vec<bool>,
    pub dead_edge: Vec<bool>,
}

/// Result of `Builder::finish`: id maps from builder ids to graph ids.
pub struct Finished {
    pub graph: RibbonGraph,
    pub metric: Metric,
    pub edge_id: Vec<Option<usize>>,
    pub vertex_id: Vec<Option<usize>>,
}

impl Finished {
    pub fn dart(&self, d: usize) -> usize {
        2 * self.edge_id[d / 2].expect("live edge") + (d & 1)
    }
}

impl Builder {
    pub fn from_graph(g: &RibbonGraph, metric: &Metric) -> Self {
        Builder {
            rot: g.rotations().to_vec(),
            len: metric.0.clone(),
            dead_vertex: vec![false; g.vertex_count()],
            dead_edge: vec![false; g.edge_count()],
        }
    }

    pub fn vertex(&mut self) -> usize {
        self.rot.push(Vec::new());
        self.dead_vertex.push(false);
        self.rot.len() - 1
    }

    pub fn edge(&mut self, len: Q) -> usize {
        self.len.push(len);
        self.dead_edge.push(false);
        self.len.len() - 1
    }

    pub fn kill_vertex(&mut self, v: usize) {
        self.dead_vertex[v] = true;
        self.rot[v].clear();
    }

    pub fn kill_edge(&mut self, e: usize) {
        self.dead_edge[e] = true;
    }

    /// Vertex whose rotation holds dart `d`.
    pub fn tail(&self, d: usize) -> usize {
        self.rot.iter().position(|r| r.contains(&d)).expect("dart is placed")
    }

    pub fn replace_dart(&mut self, old: usize, new: usize) {
        for r in self.rot.iter_mut() {
            for x in r.iter_mut() {
                if *x == old {
                    *x = new;
                    return;
                }
            }
        }
        panic!("dart {old} not placed");
    }

    /// Cuts edge `e` at distance `t` from its tail. Edge `e` keeps the tail
    /// part; the returned edge runs from the new vertex to the old head.
    pub fn split_edge(&mut self, e: usize, t: Q) -> (usize, usize) {
        let total = self.len[e];
        assert!(t > Q::from_integer(0) && t < total, "split point must be interior");
        let f = self.edge(total - t);
        self.len[e] = t;
        self.replace_dart(2 * e + 1, 2 * f + 1);
        let w = self.vertex();
        self.rot[w] = vec![2 * e + 1, 2 * f];
        (w, f)
    }

    /// Splits every loop at its midpoint.
    pub fn split_loops(&mut self) {
        let m = self.len.len();
        for e in 0..m {
            if self.dead_edge[e] {
                continue;
            }
            if self.tail(2 * e) == self.tail(2 * e + 1) {
                let half = self.len[e] / Q::from_integer(2);
                self.split_edge(e, half);
            }
        }
    }

    pub fn finish(&self) -> Result<Finished> {
        let mut edge_id = vec![None; self.len.len()];
        let mut lens = Vec::new();
        for e in 0..self.len.len() {
            if !self.dead_edge[e] {
                edge_id[e] = Some(lens.len());
                lens.push(self.len[e]);
            }
        }
        let mut vertex_id = vec![None; self.rot.len()];
        let mut rot = Vec::new();
        for (v, r) in self.rot.iter().enumerate() {
            if self.dead_vertex[v] {
                continue;
            }
            vertex_id[v] = Some(rot.len());
            rot.push(
                r.iter()
                    .map(|&d| 2 * edge_id[d / 2].expect("dart of a live edge") + (d & 1))
                    .collect::<Vec<_>>(),
            );
        }
        let graph = RibbonGraph::from_rotations(rot)?;
        Ok(Finished { graph, metric: Metric(lens), edge_id, vertex_id })
    }
}
