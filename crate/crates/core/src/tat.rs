//! Tete-a-tete checks.
//!
//! After cutting every edge into pieces of the common unit `u` and writing
//! `N = l / u`, the walk of length `l` from offset `t` in `(0, u)` on a unit
//! dart `d` ends at offset `t` on `T(d) = (S+)^N (d)`. The walk from the
//! same point on the other side starts at offset `u - t` on `rev(d)`, so the
//! two endpoints agree for every interior `t` exactly when
//! `T(rev d) = rev T(d)`. The other match (`T(rev d) = T(d)` with
//! `t = u - t`) only happens at `t = u/2` and is not the property.

use num_traits::One;

use crate::error::{Error, Result};
use crate::metric::{common_unit, subdivide, Metric, UnitSubdivision};
use crate::perm;
use crate::q::{self, Q};
use crate::ribbon::{a_face_mask, edge_of, rev, Relative, RibbonGraph};

/// Failure location: a midpoint of an original edge, offset along its forward dart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub edge: usize,
    pub offset: Q,
    pub clause: Option<String>,
}

impl Witness {
    pub fn describe(&self) -> String {
        format!("e{}:{}", self.edge + 1, q::fmt(&self.offset))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Sign per face of the graph (A-faces carry 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signs(pub Vec<i8>);

impl Signs {
    pub fn all(g: &RibbonGraph, rel: Option<&Relative>, s: i8) -> Signs {
        let a = a_face_mask(g, rel);
        Signs(a.iter().map(|&is_a| if is_a { 0 } else { s }).collect())
    }
}

pub(crate) struct Core {
    pub sub: UnitSubdivision,
    pub t: Vec<usize>,
    pub a_edge: Vec<bool>,
    pub a_dart: Vec<bool>,
}

fn face_signs_checked(g: &RibbonGraph, rel: Option<&Relative>, signs: &[i8]) -> Result<Vec<bool>> {
    let a = a_face_mask(g, rel);
    if signs.len() != g.faces().len() {
        return Err(Error::PropertyDoesNotHold(format!(
            "{} signs given for {} faces",
            signs.len(),
            g.faces().len()
        )));
    }
    if let Some(f) = (0..a.len()).find(|&f| a[f] && signs[f] != 0) {
        return Err(Error::SignOnAFace { face: f + 1 });
    }
    Ok(a)
}

pub(crate) fn core(g: &RibbonGraph, metric: &Metric, rel: Option<&Relative>, ell: Q, signs: &[i8]) -> Result<Core> {
    metric.check_positive()?;
    face_signs_checked(g, rel, signs)?;
    let u = common_unit(metric, &[ell]);
    let n = q::div_exact(ell, u).ok_or(Error::IncommensurableLengths)? as i64;
    let sub = subdivide(g, metric, u)?;
    let rg = &sub.graph;
    let empty = Relative::default();
    let rrel = sub.refine_relative(rel.unwrap_or(&empty));
    let a_dart = rrel.dart_mask(rg.dart_count());
    let a_edge = rrel.edge_mask(rg.edge_count());
    let face_sign: Vec<i8> = rg
        .faces()
        .iter()
        .map(|f| signs[g.face_of(sub.original_dart(f[0]))])
        .collect();
    let t = (0..rg.dart_count())
        .map(|x| {
            if a_dart[rev(x)] {
                let y = rev(x);
                rev(rg.shift(y, face_sign[rg.face_of(y)] as i64 * n))
            } else {
                rg.shift(x, face_sign[rg.face_of(x)] as i64 * n)
            }
        })
        .collect();
    Ok(Core { sub, t, a_edge, a_dart })
}

fn witness(core: &Core, metric: &Metric, x: usize, clause: Option<&str>) -> Witness {
    let (edge, offset) = core.sub.midpoint(x, metric);
    Witness { edge, offset, clause: clause.map(String::from) }
}

fn verdict(core: &Core, metric: &Metric) -> Verdict {
    let rg = &core.sub.graph;
    for x in 0..rg.dart_count() {
        if core.a_edge[edge_of(x)] {
            if core.a_dart[x] && !core.a_edge[edge_of(core.t[x])] {
                return Verdict::Fails(witness(core, metric, x, Some("A")));
            }
        } else if core.t[rev(x)] != rev(core.t[x]) {
            return Verdict::Fails(witness(core, metric, x, None));
        }
    }
    Verdict::Holds
}

/// Pure (or relative) property for walks of length `ell`.
pub fn check_tat(g: &RibbonGraph, metric: &Metric, rel: Option<&Relative>, ell: Q) -> Result<Verdict> {
    let signs = Signs::all(g, rel, 1);
    let c = core(g, metric, rel, ell, &signs.0)?;
    Ok(verdict(&c, metric))
}

/// Signed property; walks have length pi.
pub fn check_signed_tat(g: &RibbonGraph, metric: &Metric, rel: Option<&Relative>, signs: &Signs) -> Result<Verdict> {
    let c = core(g, metric, rel, Q::one(), &signs.0)?;
    Ok(verdict(&c, metric))
}

#[derive(Clone, Debug)]
pub struct SigmaMap {
    pub sub: UnitSubdivision,
    /// permutation of the refined darts
    pub perm: Vec<usize>,
    /// graph is a single circle; sigma is a rotation of it
    pub circle: bool,
    original_vertices: usize,
    original_edges: usize,
}

pub enum SigmaMode<'a> {
    Pure(Q),
    Signed(&'a Signs),
}

pub fn compute_sigma(g: &RibbonGraph, metric: &Metric, rel: Option<&Relative>, mode: SigmaMode) -> Result<SigmaMap> {
    let (ell, signs) = match mode {
        SigmaMode::Pure(l) => (l, Signs::all(g, rel, 1)),
        SigmaMode::Signed(s) => (Q::one(), s.clone()),
    };
    let c = core(g, metric, rel, ell, &signs.0)?;
    if let Verdict::Fails(w) = verdict(&c, metric) {
        return Err(Error::PropertyDoesNotHold(format!("walk endpoints differ at {}", w.describe())));
    }
    let circle = g.is_connected() && (0..g.vertex_count()).all(|v| g.valency(v) == 2);
    Ok(SigmaMap {
        sub: c.sub,
        perm: c.t,
        circle,
        original_vertices: g.vertex_count(),
        original_edges: g.edge_count(),
    })
}

impl SigmaMap {
    pub fn order(&self) -> u64 {
        sigma_order(self)
    }

    pub fn unit(&self) -> Q {
        self.sub.unit
    }

    /// Image of every refined vertex.
    pub fn vertex_perm(&self) -> Vec<usize> {
        let rg = &self.sub.graph;
        (0..rg.vertex_count()).map(|v| rg.tail(self.perm[rg.rotation(v)[0]])).collect()
    }

    /// Orbits of the original vertices, when sigma preserves that set.
    pub fn vertex_orbits(&self) -> Option<Vec<Vec<usize>>> {
        let p = self.vertex_perm();
        let orbits: Vec<Vec<usize>> = perm::cycles(&p).into_iter().filter(|c| c[0] < self.original_vertices).collect();
        if orbits.iter().flatten().all(|&v| v < self.original_vertices) {
            Some(orbits)
        } else {
            None
        }
    }

    /// Image of every original edge, when sigma maps whole edges to whole edges.
    pub fn edge_perm(&self) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.original_edges);
        for e in 0..self.original_edges {
            let ps = &self.sub.pieces[2 * e];
            let img: Vec<usize> = ps.iter().map(|&x| self.perm[x]).collect();
            let (d, j) = self.sub.origin[img[0]];
            if j != 0 || self.sub.pieces[d] != img {
                return None;
            }
            out.push(edge_of(d));
        }
        Some(out)
    }

    pub fn power(&self, k: u64) -> Vec<usize> {
        perm::power(&self.perm, k)
    }
}

pub fn sigma_order(s: &SigmaMap) -> u64 {
    perm::order(&s.perm)
}

/// Coefficient per face: `sign * pi / length`; `None` on A-faces.
pub fn fdtc(g: &RibbonGraph, metric: &Metric, rel: Option<&Relative>, signs: &Signs) -> Result<Vec<Option<Q>>> {
    if let Verdict::Fails(w) = check_signed_tat(g, metric, rel, signs)? {
        return Err(Error::PropertyDoesNotHold(format!("signed walks differ at {}", w.describe())));
    }
    let a = a_face_mask(g, rel);
    Ok(g.faces()
        .iter()
        .enumerate()
        .map(|(f, c)| if a[f] { None } else { Some(Q::from_integer(signs.0[f] as i128) / metric.face_length(c)) })
        .collect())
}

/// Coefficients `ell / length` for the pure property with walk length `ell`.
pub fn fdtc_pure(g: &RibbonGraph, metric: &Metric, rel: Option<&Relative>, ell: Q) -> Result<Vec<Option<Q>>> {
    if let Verdict::Fails(w) = check_tat(g, metric, rel, ell)? {
        return Err(Error::PropertyDoesNotHold(format!("walks differ at {}", w.describe())));
    }
    let a = a_face_mask(g, rel);
    Ok(g.faces()
        .iter()
        .enumerate()
        .map(|(f, c)| if a[f] { None } else { Some(ell / metric.face_length(c)) })
        .collect())
}

/// Same combinatorics with lengths divided by `m`; its sigma is sigma^m.
pub fn power_tat(g: &RibbonGraph, metric: &Metric, m: i64) -> Result<(RibbonGraph, Metric)> {
    if m <= 0 {
        return Err(Error::PropertyDoesNotHold(format!("power {m} must be positive")));
    }
    if let Verdict::Fails(w) = check_tat(g, metric, None, Q::one())? {
        return Err(Error::PropertyDoesNotHold(format!("walks differ at {}", w.describe())));
    }
    Ok((g.clone(), metric.scaled(Q::new(1, m as i128))))
}

/// Helper for fixed-point statements: does `p` fix some dart of a non-A edge?
pub fn fixes_some_edge_dart(p: &[usize], a_edge: &[bool]) -> bool {
    (0..p.len()).any(|x| !a_edge[edge_of(x)] && p[x] == x)
}

pub fn zero_signs(g: &RibbonGraph) -> Signs {
    Signs(vec![0; g.faces().len()])
}

