//! Periodic realizations from orbit data.
//!
//! The quotient orbifold is given by its genus, the order `n`, one
//! `(R, sign)` per boundary, the rotation voltages of the special points and
//! optionally the handle voltages. A quotient spine is lifted through a
//! cyclic voltage cover whose boundary voltages make every boundary lift to
//! a single face of length `1 / R`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::construct::blowup::{blow_up, BlowUp};
use crate::construct::cover::{self, face_voltages, lift};
use crate::construct::spine::{self, Spine};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::q::{self, Q};
use crate::ribbon::RibbonGraph;
use crate::tat::{check_signed_tat, fdtc, Signs, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSpec {
    pub genus: usize,
    pub order: usize,
    /// `(R, sign)` per boundary; sign 0 means the walk is constant there
    pub boundaries: Vec<(Q, i8)>,
    /// rotation voltage of each special point; 0 marks a regular point
    pub points: Vec<u64>,
    /// `(alpha, beta)` per handle, or empty for all zero
    pub handles: Vec<(u64, u64)>,
}

#[derive(Clone, Debug)]
pub struct Realized {
    pub graph: RibbonGraph,
    pub metric: Metric,
    pub signs: Signs,
    /// boundary index of every face
    pub boundary_of_face: Vec<usize>,
    /// cover vertices over each special point
    pub point_lifts: Vec<Vec<usize>>,
    /// deck generator as a dart permutation
    pub deck: Vec<usize>,
    pub genus: usize,
    pub quotient: Spine,
    pub voltages: Vec<i64>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidOrbitSpec(msg.into())
}

fn inverse_mod(a: i64, n: i64) -> Option<i64> {
    let e = a.extended_gcd(&n);
    (e.gcd == 1).then(|| e.x.rem_euclid(n))
}

impl OrbitSpec {
    /// Face lengths and face voltages demanded by the data.
    fn targets(&self) -> Result<(Vec<Q>, Vec<i64>)> {
        let n = self.order;
        if n == 0 {
            return Err(bad("order must be positive"));
        }
        if self.boundaries.is_empty() {
            return Err(bad("at least one boundary is needed"));
        }
        if !self.handles.is_empty() && self.handles.len() != self.genus {
            return Err(bad(format!("{} handle voltages for genus {}", self.handles.len(), self.genus)));
        }
        let mut lambda = Vec::new();
        let mut w = Vec::new();
        for (i, &(r, s)) in self.boundaries.iter().enumerate() {
            match s {
                0 => {
                    if !r.is_zero() {
                        return Err(bad(format!("boundary {} has sign 0 but R = {}", i + 1, q::fmt(&r))));
                    }
                    if n != 1 {
                        return Err(bad(format!("boundary {} has sign 0, which needs order 1", i + 1)));
                    }
                    lambda.push(Q::one());
                    w.push(0);
                }
                1 | -1 => {
                    if r <= Q::zero() {
                        return Err(bad(format!("boundary {} needs R > 0", i + 1)));
                    }
                    let m = r * Q::from_integer(n as i128);
                    if !m.is_integer() {
                        return Err(bad(format!("boundary {}: n R = {} is not an integer", i + 1, q::fmt(&m))));
                    }
                    let m = *m.numer() as i64;
                    let inv = inverse_mod(m.rem_euclid(n as i64), n as i64)
                        .ok_or_else(|| bad(format!("boundary {}: n R = {m} is not prime to n = {n}", i + 1)))?;
                    lambda.push(Q::one() / (r * Q::from_integer(n as i128)));
                    w.push((s as i64 * inv).rem_euclid(n as i64));
                }
                _ => return Err(bad(format!("boundary {} has sign {s}", i + 1))),
            }
        }
        let total: i64 = w.iter().sum();
        let branch: i64 = self.points.iter().map(|&p| p as i64).sum();
        if (total - branch).rem_euclid(n as i64) != 0 {
            return Err(bad(format!(
                "boundary voltages sum to {} but point voltages to {} (mod {n})",
                total.rem_euclid(n as i64),
                branch.rem_euclid(n as i64)
            )));
        }
        Ok((lambda, w))
    }

    /// Genus of the cover by Riemann-Hurwitz, or an error when negative.
    pub fn cover_genus(&self) -> Result<usize> {
        let n = self.order as i64;
        let r = self.boundaries.len() as i64;
        let chi = 2 - 2 * self.genus as i64 - r;
        let defect: i64 = self.points.iter().map(|&w| n - (w as i64).gcd(&n)).sum();
        let cover_chi = n * chi - defect;
        let twice = 2 - r - cover_chi;
        if twice < 0 || twice % 2 != 0 {
            return Err(bad(format!("cover Euler characteristic {cover_chi} is impossible")));
        }
        Ok((twice / 2) as usize)
    }
}

pub fn realize_periodic(spec: &OrbitSpec) -> Result<Realized> {
    let (lambda, targets) = spec.targets()?;
    let expected_genus = spec.cover_genus()?;
    let n = spec.order;
    let sp = if spec.genus >= 1 {
        spine::genus_positive(spec.genus, &lambda, spec.points.len())?
    } else {
        spine::genus_zero(&lambda, spec.points.len())?
    };
    let g = &sp.graph;
    let mut wrap = vec![0i64; g.vertex_count()];
    for (i, &v) in sp.point_vertex.iter().enumerate() {
        wrap[v] = spec.points[i] as i64 % n as i64;
    }
    let mut volt = vec![0i64; g.edge_count()];
    for (k, &(a, b)) in sp.handle_edges.iter().enumerate() {
        if let Some(&(x, y)) = spec.handles.get(k) {
            volt[a] = x as i64 % n as i64;
            volt[b] = y as i64 % n as i64;
        }
    }
    let face_of_boundary: Vec<usize> = sp.boundary_dart.iter().map(|&d| g.face_of(d)).collect();
    for (j, &e) in sp.solve_edges.iter().enumerate() {
        let bnd = sp.order[j];
        let f = face_of_boundary[bnd];
        let coef: i64 = g.faces()[f]
            .iter()
            .map(|&x| if x == 2 * e { 1 } else if x == 2 * e + 1 { -1 } else { 0 })
            .sum();
        debug_assert!(coef == 1 || coef == -1);
        let cur = face_voltages(g, &volt, &wrap)[f];
        volt[e] = (volt[e] + coef * (targets[bnd] - cur)).rem_euclid(n as i64);
    }
    let fv = face_voltages(g, &volt, &wrap);
    for (b, &f) in face_of_boundary.iter().enumerate() {
        if (fv[f] - targets[b]).rem_euclid(n as i64) != 0 {
            return Err(Error::PostCheckFailed(format!("boundary {} voltage {} != {}", b + 1, fv[f], targets[b])));
        }
    }
    let cv = lift(g, &sp.metric, n, &volt, &wrap)?;
    let cg = cv.graph;
    let mut boundary_of_base = vec![usize::MAX; g.faces().len()];
    for (b, &f) in face_of_boundary.iter().enumerate() {
        boundary_of_base[f] = b;
    }
    let boundary_of_face: Vec<usize> = cg
        .faces()
        .iter()
        .map(|f| boundary_of_base[g.face_of(cover::base_dart(f[0], n))])
        .collect();
    let signs = Signs(boundary_of_face.iter().map(|&b| spec.boundaries[b].1).collect());

    if cg.faces().len() != spec.boundaries.len() {
        return Err(Error::PostCheckFailed(format!(
            "{} faces for {} boundaries",
            cg.faces().len(),
            spec.boundaries.len()
        )));
    }
    let rh: usize = wrap.iter().map(|&w| (w as usize).gcd(&n)).sum();
    if cg.vertex_count() != rh {
        return Err(Error::PostCheckFailed(format!("{} cover vertices, Riemann-Hurwitz gives {rh}", cg.vertex_count())));
    }
    let chi = cg.euler_characteristic();
    let twice = 2 - chi - cg.faces().len() as i64;
    if twice != 2 * expected_genus as i64 {
        return Err(Error::PostCheckFailed(format!("cover genus {}/2, expected {expected_genus}", twice)));
    }
    if let Verdict::Fails(w) = check_signed_tat(&cg, &cv.metric, None, &signs)? {
        return Err(Error::PostCheckFailed(format!("signed walks differ at {}", w.describe())));
    }
    let coeff = fdtc(&cg, &cv.metric, None, &signs)?;
    for (f, c) in coeff.iter().enumerate() {
        let (r, s) = spec.boundaries[boundary_of_face[f]];
        let want = r * Q::from_integer(s as i128);
        if *c != Some(want) {
            return Err(Error::PostCheckFailed(format!("face F{} coefficient differs from {}", f + 1, q::fmt(&want))));
        }
    }
    Ok(Realized {
        deck: cover::deck(n, g.edge_count()),
        graph: cg,
        metric: cv.metric,
        signs,
        boundary_of_face,
        point_lifts: sp.point_vertex.iter().map(|&v| cv.vertex_lifts[v].clone()).collect(),
        genus: expected_genus,
        voltages: volt,
        quotient: sp,
    })
}

/// Blows up the lifts of special point `point`, turning the realization
/// into a relative one. The default `eps` is a quarter of the shortest edge.
pub fn relative_from_capped(r: &Realized, point: usize, eps: Option<Q>) -> Result<BlowUp> {
    let lifts = r
        .point_lifts
        .get(point)
        .ok_or_else(|| bad(format!("no special point {}", point + 1)))?;
    let eps = eps.unwrap_or_else(|| r.metric.0.iter().copied().fold(r.metric.0[0], Q::min) / Q::from_integer(4));
    blow_up(&r.graph, &r.metric, None, Some(&r.signs), lifts[0], eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::{int, q};

    fn spec(genus: usize, n: usize, b: &[(Q, i8)], points: &[u64]) -> OrbitSpec {
        OrbitSpec { genus, order: n, boundaries: b.to_vec(), points: points.to_vec(), handles: vec![] }
    }

    #[test]
    fn torus_one_boundary() {
        let r = realize_periodic(&spec(1, 1, &[(int(9), 1)], &[])).unwrap();
        assert_eq!(r.genus, 1);
        assert_eq!(r.graph.faces().len(), 1);
    }

    #[test]
    fn segment_double_cover() {
        let r = realize_periodic(&spec(0, 2, &[(q(1, 2), 1)], &[1, 0])).unwrap();
        assert_eq!(r.genus, 0);
        assert_eq!(r.point_lifts[1].len(), 2);
        assert_eq!(r.graph.vertex_count(), 3);
    }

    #[test]
    fn genus_zero_shapes() {
        for (b, pts) in [
            (vec![(int(1), 1), (int(1), 1)], vec![0u64]),
            (vec![(int(1), 1), (int(2), 1)], vec![0]),
            (vec![(int(3), 1), (int(1), -1)], vec![0, 0]),
            (vec![(int(1), 1), (int(2), 1), (int(3), 1)], vec![]),
            (vec![(int(1), 1), (int(2), 1), (int(3), 1), (int(5), -1)], vec![0]),
            (vec![(int(1), 1), (int(2), 1), (int(3), 1)], vec![0, 0, 0]),
        ] {
            let r = realize_periodic(&spec(0, 1, &b, &pts)).unwrap();
            assert_eq!(r.genus, 0);
        }
    }

    #[test]
    fn higher_genus_cyclic() {
        let r = realize_periodic(&spec(2, 3, &[(q(1, 3), 1), (q(2, 3), -1)], &[2])).unwrap();
        assert_eq!(r.graph.faces().len(), 2);
        let r = realize_periodic(&spec(1, 5, &[(q(2, 5), 1)], &[3])).unwrap();
        assert_eq!(r.graph.faces().len(), 1);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(realize_periodic(&spec(0, 1, &[(int(1), 1)], &[])).is_err());
        assert!(realize_periodic(&spec(0, 2, &[(q(1, 2), 1)], &[0, 0])).is_err());
        assert!(realize_periodic(&spec(0, 2, &[(int(0), 0)], &[1, 1])).is_err());
        assert!(realize_periodic(&spec(1, 4, &[(q(1, 2), 1)], &[])).is_err());
    }
}
