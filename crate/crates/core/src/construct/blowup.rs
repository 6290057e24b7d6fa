use num_traits::Zero;

use crate::build::Builder;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::q::{self, Q};
use crate::ribbon::{a_face_mask, edge_of, Relative, RibbonGraph};
use crate::tat::{compute_sigma, SigmaMode, Signs};

#[derive(Clone, Debug)]
pub struct BlowUp {
    pub graph: RibbonGraph,
    pub metric: Metric,
    pub rel: Relative,
    pub signs: Signs,
    /// blown-up vertices (ids in the input graph)
    pub orbit: Vec<usize>,
    /// indices of the new cycles in `rel`
    pub new_cycles: Vec<usize>,
    /// new id of every surviving input vertex
    pub vertex_id: Vec<Option<usize>>,
}

/// Replaces every vertex of the sigma-orbit of `v` by an oriented circle of
/// new A-edges of length `2 eps`, shortening the incident edges by `eps`.
/// Without `signs` the pure property with walk length pi is used.
pub fn blow_up(
    g: &RibbonGraph,
    metric: &Metric,
    rel: Option<&Relative>,
    signs: Option<&Signs>,
    v: usize,
    eps: Q,
) -> Result<BlowUp> {
    let rel0 = rel.cloned().unwrap_or_default();
    let a_edge = rel0.edge_mask(g.edge_count());
    if g.rotation(v).iter().any(|&d| a_edge[edge_of(d)]) {
        return Err(Error::VertexOnA { vertex: v + 1 });
    }
    let signs0 = signs.cloned().unwrap_or_else(|| Signs::all(g, rel, 1));
    let sigma = compute_sigma(g, metric, rel, SigmaMode::Signed(&signs0))?;
    let orbits = sigma
        .vertex_orbits()
        .ok_or_else(|| Error::PropertyDoesNotHold("sigma does not preserve the vertex set".into()))?;
    let orbit = orbits.into_iter().find(|o| o.contains(&v)).expect("every vertex has an orbit");
    for &w in &orbit {
        for &d in g.rotation(w) {
            if eps <= Q::zero() || eps * Q::from_integer(2) >= metric.dart_len(d) {
                return Err(Error::EpsilonTooLarge { eps: q::fmt(&eps), edge: edge_of(d) + 1 });
            }
        }
    }
    let mut b = Builder::from_graph(g, metric);
    let mut cycles = rel0.cycles.clone();
    let mut new_cycles = Vec::new();
    for &w in &orbit {
        let ds = g.rotation(w).to_vec();
        let p = ds.len();
        let ws: Vec<usize> = (0..p).map(|_| b.vertex()).collect();
        let arcs: Vec<usize> = (0..p).map(|_| b.edge(eps * Q::from_integer(2))).collect();
        for i in 0..p {
            let prev = arcs[(i + p - 1) % p];
            b.rot[ws[i]] = vec![2 * prev + 1, ds[i], 2 * arcs[i]];
            b.len[edge_of(ds[i])] -= eps;
        }
        b.kill_vertex(w);
        let mut cyc: Vec<usize> = arcs.iter().map(|&a| 2 * a).collect();
        if p == 1 {
            let (_, f) = b.split_edge(arcs[0], eps);
            cyc.push(2 * f);
        }
        new_cycles.push(cycles.len());
        cycles.push(cyc);
    }
    let fin = b.finish()?;
    let rel1 = Relative::new(cycles.iter().map(|c| c.iter().map(|&d| fin.dart(d)).collect()).collect());
    let a1 = a_face_mask(&fin.graph, Some(&rel1));
    let m_old = g.dart_count();
    let mut signs1 = Vec::with_capacity(fin.graph.faces().len());
    for (f, c) in fin.graph.faces().iter().enumerate() {
        if a1[f] {
            signs1.push(0);
            continue;
        }
        // original edges keep their ids, so an old dart identifies the old face
        let s = c
            .iter()
            .find(|&&d| d < m_old)
            .map(|&d| signs0.0[g.face_of(d)])
            .unwrap_or(1);
        signs1.push(s);
    }
    Ok(BlowUp {
        graph: fin.graph,
        metric: fin.metric,
        rel: rel1,
        signs: Signs(signs1),
        orbit,
        new_cycles,
        vertex_id: fin.vertex_id[..g.vertex_count()].to_vec(),
    })
}
