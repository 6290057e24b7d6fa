//! Edge lengths from target boundary coefficients.
//!
//! The system is `length(face i) = pi / R_i` for signed faces and `x_e > 0`.
//! Equalities are eliminated by Gauss-Jordan, the remaining strict
//! inequalities by Fourier-Motzkin with multiplier tracking, so an empty
//! system comes with a certificate `lambda >= 0` over the positivity
//! constraints such that `sum lambda_e x_e` is a constant `<= 0` on every
//! solution of the equalities.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::q::Q;
use crate::ribbon::{edge_of, Relative, RibbonGraph};
use crate::tat::{check_signed_tat, Signs, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// multiplier per face equation (zero for unsigned faces)
    pub face_multipliers: Vec<Q>,
    /// multiplier per positivity constraint
    pub edge_multipliers: Vec<Q>,
    /// value of `sum lambda_e x_e` forced by the equations
    pub constant: Q,
    /// edges whose positivity is contradicted
    pub forced_zero: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitOutcome {
    Feasible(Metric),
    Infeasible(Certificate),
    FeasibleNotTat(Metric, Witness),
}

#[derive(Clone, Debug)]
struct Ineq {
    a: Vec<Q>,
    c: Q,
    mult: Vec<Q>,
}

/// Reduced row echelon form of `[m | rhs]`; returns pivot columns and the
/// row-operation matrix (rows of the result as combinations of input rows).
fn rref(m: &mut Vec<Vec<Q>>, rhs: &mut Vec<Q>) -> (Vec<usize>, Vec<Vec<Q>>) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut ops: Vec<Vec<Q>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        rhs.swap(r, p);
        ops.swap(r, p);
        let inv = Q::one() / m[r][c];
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        rhs[r] *= inv;
        for x in ops[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
                let v = rhs[r];
                rhs[i] -= f * v;
                for j in 0..rows {
                    let v = ops[r][j];
                    ops[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (pivots, ops)
}

/// Some solution of `m x = rhs`, free variables zero.
fn solve(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let (pivots, _) = rref(&mut m, &mut rhs);
    for i in pivots.len()..rhs.len() {
        if !rhs[i].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i];
    }
    Some(x)
}

fn normalize(iq: &mut Ineq) {
    if let Some(s) = iq.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        let inv = Q::one() / s;
        for x in iq.a.iter_mut() {
            *x *= inv;
        }
        iq.c *= inv;
        for x in iq.mult.iter_mut() {
            *x *= inv;
        }
    }
}

fn dedup(list: Vec<Ineq>) -> Vec<Ineq> {
    let mut out: Vec<Ineq> = Vec::new();
    for mut iq in list {
        normalize(&mut iq);
        if iq.a.iter().all(|x| x.is_zero()) && iq.c > Q::zero() {
            continue;
        }
        match out.iter_mut().find(|o| o.a == iq.a) {
            // same direction: the larger constant is implied by the smaller
            Some(o) => {
                if iq.c < o.c {
                    *o = iq;
                }
            }
            None => out.push(iq),
        }
    }
    out
}

enum Fm {
    Solution(Vec<Q>),
    Empty(Vec<Q>, Q),
}

/// Strict system `a.f + c > 0` in `k` variables.
fn fourier_motzkin(k: usize, system: Vec<Ineq>) -> Fm {
    let mut stages: Vec<Vec<Ineq>> = Vec::new();
    let mut cur = dedup(system);
    for j in 0..k {
        stages.push(cur.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for iq in cur {
            if iq.a[j] > Q::zero() {
                pos.push(iq);
            } else if iq.a[j] < Q::zero() {
                neg.push(iq);
            } else {
                rest.push(iq);
            }
        }
        for p in &pos {
            for n in &neg {
                let (sp, sn) = (-n.a[j], p.a[j]);
                rest.push(Ineq {
                    a: p.a.iter().zip(&n.a).map(|(x, y)| *x * sp + *y * sn).collect(),
                    c: p.c * sp + n.c * sn,
                    mult: p.mult.iter().zip(&n.mult).map(|(x, y)| *x * sp + *y * sn).collect(),
                });
            }
        }
        cur = dedup(rest);
    }
    if let Some(bad) = cur.iter().find(|iq| iq.c <= Q::zero()) {
        return Fm::Empty(bad.mult.clone(), bad.c);
    }
    let mut f = vec![Q::zero(); k];
    for j in (0..k).rev() {
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for iq in &stages[j] {
            let r: Q = iq.c + (j + 1..k).map(|i| iq.a[i] * f[i]).sum::<Q>();
            if iq.a[j] > Q::zero() {
                let b = -r / iq.a[j];
                lo = Some(lo.map_or(b, |x: Q| x.max(b)));
            } else if iq.a[j] < Q::zero() {
                let b = r / -iq.a[j];
                hi = Some(hi.map_or(b, |x: Q| x.min(b)));
            }
        }
        f[j] = match (lo, hi) {
            (Some(l), Some(h)) => (l + h) / Q::from_integer(2),
            (Some(l), None) => l + Q::one(),
            (None, Some(h)) => h - Q::one(),
            (None, None) => Q::one(),
        };
    }
    Fm::Solution(f)
}

/// `targets[f]` is `R_f` for faces with a nonzero sign.
pub fn fit_metric(g: &RibbonGraph, rel: Option<&Relative>, signs: &Signs, targets: &[Option<Q>]) -> Result<FitOutcome> {
    let m = g.edge_count();
    let nf = g.faces().len();
    if signs.0.len() != nf || targets.len() != nf {
        return Err(Error::MalformedTargets(format!("expected {nf} faces")));
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut row_face = Vec::new();
    for f in 0..nf {
        if signs.0[f] == 0 {
            continue;
        }
        let r = targets[f].ok_or_else(|| Error::MalformedTargets(format!("face F{} has no target", f + 1)))?;
        if r <= Q::zero() {
            return Err(Error::MalformedTargets(format!("face F{} has target {}", f + 1, r)));
        }
        let mut row = vec![Q::zero(); m];
        for &d in &g.faces()[f] {
            row[edge_of(d)] += Q::one();
        }
        rows.push(row);
        rhs.push(Q::one() / r);
        row_face.push(f);
    }
    let x = if rows.is_empty() {
        vec![Q::one(); m]
    } else {
        match solve_positive(&rows, &rhs, m) {
            Ok(x) => x,
            Err((lambda, constant)) => {
                let y = certificate_faces(&rows, &lambda, &rhs, constant);
                let mut face_multipliers = vec![Q::zero(); nf];
                for (i, &f) in row_face.iter().enumerate() {
                    face_multipliers[f] = y[i];
                }
                let forced_zero = (0..m).filter(|&e| !lambda[e].is_zero()).collect();
                return Ok(FitOutcome::Infeasible(Certificate {
                    face_multipliers,
                    edge_multipliers: lambda,
                    constant,
                    forced_zero,
                }));
            }
        }
    };
    let metric = Metric(x);
    match check_signed_tat(g, &metric, rel, signs)? {
        Verdict::Holds => Ok(FitOutcome::Feasible(metric)),
        Verdict::Fails(w) => Ok(FitOutcome::FeasibleNotTat(metric, w)),
    }
}

/// Face multipliers `y` with `A^T y = lambda`; for an inconsistent system
/// (`lambda = 0`) a combination with `y.b < 0`.
fn certificate_faces(rows: &[Vec<Q>], lambda: &[Q], rhs: &[Q], constant: Q) -> Vec<Q> {
    let k = rows.len();
    let m = lambda.len();
    let at: Vec<Vec<Q>> = (0..m).map(|e| (0..k).map(|i| rows[i][e]).collect()).collect();
    if lambda.iter().any(|x| !x.is_zero()) {
        if let Some(y) = solve(at, lambda.to_vec()) {
            return y;
        }
    }
    // inconsistent equalities: a left null vector of A with y.b != 0
    let mut mm = rows.to_vec();
    let mut r = rhs.to_vec();
    let (pivots, ops) = rref(&mut mm, &mut r);
    for i in pivots.len()..k {
        if !r[i].is_zero() {
            let s = if r[i] > Q::zero() { -Q::one() } else { Q::one() };
            return ops[i].iter().map(|x| *x * s).collect();
        }
    }
    let _ = constant;
    vec![Q::zero(); k]
}

/// Positive solution, or `(lambda, constant)` proving there is none.
fn solve_positive(rows: &[Vec<Q>], rhs: &[Q], m: usize) -> std::result::Result<Vec<Q>, (Vec<Q>, Q)> {
    let mut a = rows.to_vec();
    let mut b = rhs.to_vec();
    let (pivots, _) = rref(&mut a, &mut b);
    let rank = pivots.len();
    if (rank..b.len()).any(|i| !b[i].is_zero()) {
        return Err((vec![Q::zero(); m], -Q::one()));
    }
    // minimum-norm solution x = R^T w with (R R^T) w = b
    let r: Vec<Vec<Q>> = a[..rank].to_vec();
    let gram: Vec<Vec<Q>> = (0..rank)
        .map(|i| (0..rank).map(|j| (0..m).map(|e| r[i][e] * r[j][e]).sum()).collect())
        .collect();
    if let Some(w) = solve(gram, b[..rank].to_vec()) {
        let x: Vec<Q> = (0..m).map(|e| (0..rank).map(|i| r[i][e] * w[i]).sum()).collect();
        if x.iter().all(|v| *v > Q::zero()) {
            return Ok(x);
        }
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    let k = free.len();
    let mut sys = Vec::with_capacity(m);
    for e in 0..m {
        let mut mult = vec![Q::zero(); m];
        mult[e] = Q::one();
        let mut coef = vec![Q::zero(); k];
        let c;
        if let Some(i) = pivots.iter().position(|&p| p == e) {
            // x_e = b_i - sum a_ij x_j over free j
            for (jj, &j) in free.iter().enumerate() {
                coef[jj] = -a[i][j];
            }
            c = b[i];
        } else {
            coef[free.iter().position(|&j| j == e).unwrap()] = Q::one();
            c = Q::zero();
        }
        sys.push(Ineq { a: coef, c, mult });
    }
    match fourier_motzkin(k, sys) {
        Fm::Solution(f) => {
            let mut x = vec![Q::zero(); m];
            for (jj, &j) in free.iter().enumerate() {
                x[j] = f[jj];
            }
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = b[i] - free.iter().enumerate().map(|(jj, &j)| a[i][j] * f[jj]).sum::<Q>();
            }
            Ok(x)
        }
        Fm::Empty(lambda, c) => Err((lambda, c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::make_kpq;
    use crate::q::{int, q};

    #[test]
    fn k23_uniform() {
        let (g, _) = make_kpq(2, 3, int(1));
        let out = fit_metric(&g, None, &Signs(vec![1]), &[Some(q(1, 6))]).unwrap();
        assert_eq!(out, FitOutcome::Feasible(Metric::uniform(6, q(1, 2))));
    }

    #[test]
    fn vacuous() {
        let (g, _) = make_kpq(2, 3, int(1));
        let out = fit_metric(&g, None, &Signs(vec![0]), &[None]).unwrap();
        assert_eq!(out, FitOutcome::Feasible(Metric::uniform(6, int(1))));
    }

    #[test]
    fn malformed() {
        let (g, _) = make_kpq(2, 3, int(1));
        assert!(matches!(
            fit_metric(&g, None, &Signs(vec![1]), &[Some(int(0))]),
            Err(Error::MalformedTargets(_))
        ));
    }
}
