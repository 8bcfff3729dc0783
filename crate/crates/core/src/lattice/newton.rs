//! Newton polyhedra `conv(generators) + R^n_{>=0}`.
//!
//! Membership has two independent decision procedures: a feasibility LP in
//! convex-combination weights (primal), and the finite list of supporting
//! inequalities `<w, x> >= min_i <w, alpha_i>` over candidate facet normals
//! `w >= 0` (dual). Both are exact.

use std::fmt;
use std::sync::OnceLock;

use super::exponent::Exponent;
use super::ideal::MonomialIdeal;
use super::lp::{lp_solve, LinearProgram, LpOutcome, MAX_LP_VARIABLES};
use super::rational::Rational;
use crate::error::{Error, Result};

/// `<normal, x> >= offset` holds on the whole polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

pub struct NewtonPolyhedron {
    dim: usize,
    generators: Vec<Exponent>,
    vertices: OnceLock<Vec<Exponent>>,
    facets: OnceLock<Vec<Facet>>,
}

impl Clone for NewtonPolyhedron {
    fn clone(&self) -> Self {
        NewtonPolyhedron {
            dim: self.dim,
            generators: self.generators.clone(),
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
        }
    }
}

impl fmt::Debug for NewtonPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NewtonPolyhedron")
            .field("dim", &self.dim)
            .field("generators", &self.generators)
            .finish()
    }
}

impl NewtonPolyhedron {
    pub fn new(dim: usize, generators: Vec<Exponent>) -> Result<NewtonPolyhedron> {
        if dim == 0 {
            return Err(Error::validation("Newton polyhedron dimension must be >= 1"));
        }
        if generators.is_empty() {
            return Err(Error::validation("Newton polyhedron needs at least one generator"));
        }
        for g in &generators {
            g.check_dim(dim, "Newton generator")?;
        }
        let mut generators = generators;
        generators.sort();
        generators.dedup();
        Ok(NewtonPolyhedron {
            dim,
            generators,
            vertices: OnceLock::new(),
            facets: OnceLock::new(),
        })
    }

    pub fn from_ideal(ideal: &MonomialIdeal) -> NewtonPolyhedron {
        NewtonPolyhedron::new(ideal.dim(), ideal.exponents()).expect("ideal is well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    /// `min_i <w, alpha_i>` over the generators.
    pub fn support(&self, w: &[Rational]) -> Rational {
        self.generators
            .iter()
            .map(|g| g.dot(w))
            .min()
            .expect("nonempty")
    }

    /// Vertices, i.e. the generators not lying in the polyhedron of the others.
    pub fn vertices(&self) -> &[Exponent] {
        self.vertices.get_or_init(|| compute_vertices(&self.generators))
    }

    pub fn facets(&self) -> &[Facet] {
        self.facets
            .get_or_init(|| enumerate_facets(self.dim, self.vertices()))
    }

    pub fn contains(&self, beta: &Exponent) -> Result<bool> {
        self.contains_primal(beta)
    }

    /// Feasibility LP: `mu >= 0, sum mu = 1, sum mu_i v_i <= beta` over vertices.
    pub fn contains_primal(&self, beta: &Exponent) -> Result<bool> {
        beta.check_dim(self.dim, "Newton membership")?;
        let verts = self.vertices();
        if verts.iter().any(|v| beta.dominates(v)) {
            return Ok(true);
        }
        in_hull_plus_orthant(verts, beta)
    }

    /// Checks every candidate facet inequality.
    pub fn contains_dual(&self, beta: &Exponent) -> Result<bool> {
        beta.check_dim(self.dim, "Newton membership")?;
        Ok(self
            .facets()
            .iter()
            .all(|f| beta.dot(&f.normal) >= f.offset))
    }

    /// Both decisions; a disagreement is reported as a verification error.
    pub fn contains_checked(&self, beta: &Exponent) -> Result<bool> {
        let p = self.contains_primal(beta)?;
        let d = self.contains_dual(beta)?;
        if p != d {
            return Err(Error::Verification {
                check: "newton-primal-dual".into(),
                detail: format!("primal says {p}, dual says {d} for {beta}"),
            });
        }
        Ok(p)
    }
}

/// Whether `beta` lies in `conv(points) + R^n_{>=0}`, by one feasibility LP.
pub(crate) fn in_hull_plus_orthant(points: &[Exponent], beta: &Exponent) -> Result<bool> {
    let k = points.len();
    if k > MAX_LP_VARIABLES {
        return Err(Error::Capacity {
            what: "Newton membership generators".into(),
            limit: MAX_LP_VARIABLES,
            requested: k,
        });
    }
    let n = beta.dim();
    let mut lp = LinearProgram::minimize(vec![Rational::zero(); k]);
    lp.push_eq(vec![Rational::one(); k], Rational::one());
    for j in 0..n {
        let row = points.iter().map(|p| -&p[j]).collect();
        lp.push_geq(row, -&beta[j]);
    }
    Ok(matches!(lp_solve(&lp)?, LpOutcome::Optimal(_)))
}

/// Positive weight directions used to seed the vertex set: the argmin of
/// a positive linear functional is always a vertex (after lex tie-break).
fn seed_directions(n: usize) -> Vec<Vec<Rational>> {
    const LEVELS: [i64; 4] = [1, 3, 10, 40];
    let mut out = Vec::new();
    let total = LEVELS.len().pow(n as u32).min(256);
    for code in 0..total {
        let mut c = code;
        let w = (0..n)
            .map(|_| {
                let v = LEVELS[c % LEVELS.len()];
                c /= LEVELS.len();
                Rational::from_integer(v)
            })
            .collect();
        out.push(w);
    }
    out
}

fn compute_vertices(points: &[Exponent]) -> Vec<Exponent> {
    if points.len() <= 1 {
        return points.to_vec();
    }
    let n = points[0].dim();
    let mut is_vertex = vec![false; points.len()];
    for w in seed_directions(n) {
        let mut best: Option<(usize, Rational)> = None;
        for (i, p) in points.iter().enumerate() {
            let v = p.dot(&w);
            // points are sorted, so the first minimizer is the lex-smallest
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((i, v));
            }
        }
        is_vertex[best.expect("nonempty").0] = true;
    }
    let mut verts: Vec<Exponent> = points
        .iter()
        .zip(&is_vertex)
        .filter(|(_, &v)| v)
        .map(|(p, _)| p.clone())
        .collect();
    let mut alive: Vec<bool> = vec![true; points.len()];
    for (i, p) in points.iter().enumerate() {
        if is_vertex[i] {
            continue;
        }
        let covered = verts.iter().any(|v| p.dominates(v))
            || in_hull_plus_orthant(&verts, p).unwrap_or(false);
        if covered {
            alive[i] = false;
            continue;
        }
        if separate_from_rest(points, &alive, i) {
            verts.push(p.clone());
            is_vertex[i] = true;
        } else {
            alive[i] = false;
        }
    }
    verts.sort();
    verts
}

/// Decides whether `points[idx]` is a vertex of the Newton polyhedron of the
/// alive points, by cutting planes on `max_{w in simplex} min_q <w, q - p>`.
fn separate_from_rest(points: &[Exponent], alive: &[bool], idx: usize) -> bool {
    let p = &points[idx];
    let n = p.dim();
    let big = p.iter().cloned().fold(Rational::zero(), Rational::max) + Rational::one();
    let others: Vec<&Exponent> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx && alive[i])
        .map(|(_, q)| q)
        .collect();
    if others.is_empty() {
        return true;
    }
    let diff = |q: &Exponent| -> Vec<Rational> { (0..n).map(|j| &q[j] - &p[j]).collect() };
    let mut active: Vec<Vec<Rational>> = Vec::new();
    // Start from the point closest to p in the all-ones direction.
    let ones = vec![Rational::one(); n];
    let first = others
        .iter()
        .min_by(|a, b| a.dot(&ones).cmp(&b.dot(&ones)))
        .expect("nonempty");
    active.push(diff(first));
    loop {
        // variables (w_1..w_n, s'), s = s' - big
        let mut obj = vec![Rational::zero(); n + 1];
        obj[n] = Rational::one();
        let mut lp = LinearProgram::maximize(obj);
        let mut simplex_row = vec![Rational::one(); n + 1];
        simplex_row[n] = Rational::zero();
        lp.push_eq(simplex_row, Rational::one());
        for d in &active {
            let mut row = d.clone();
            row.push(-Rational::one());
            lp.push_geq(row, -&big);
        }
        let out = match lp_solve(&lp) {
            Ok(LpOutcome::Optimal(o)) => o,
            _ => return false,
        };
        let s = &out.value - &big;
        if !s.is_positive() {
            return false;
        }
        let w = &out.point[..n];
        let (worst, val) = others
            .iter()
            .map(|q| {
                let d = diff(q);
                let v: Rational = d.iter().zip(w).map(|(a, b)| a * b).sum();
                (d, v)
            })
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty");
        if val.is_positive() {
            return true;
        }
        if active.contains(&worst) {
            // Cannot happen for an exact optimum; treat as not separable.
            return false;
        }
        active.push(worst);
    }
}

/// Exact solve of the null vector of `n-1` vectors in `Q^n` via cofactors.
fn null_vector(rows: &[Vec<Rational>], n: usize) -> Vec<Rational> {
    (0..n)
        .map(|skip| {
            let minor: Vec<Vec<Rational>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != skip)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let d = determinant(minor);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

pub(crate) fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= &t;
            }
        }
    }
    det
}

/// Scales a nonzero vector to the primitive form with first nonzero entry
/// positive, so equal directions compare equal.
fn normalize_direction(v: Vec<Rational>) -> Vec<Rational> {
    let first = v.iter().find(|x| !x.is_zero()).cloned().expect("nonzero");
    let scale = first.abs().recip();
    v.into_iter().map(|x| x * &scale).collect()
}

fn choose(k: usize, from: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..from {
            cur.push(i);
            rec(i + 1, k, from, cur, out);
            cur.pop();
        }
    }
    rec(0, k, from, &mut cur, &mut out);
    out
}

/// Candidate facet normals: hyperplanes spanned by edge directions between
/// vertices and recession directions `e_j`, kept when they are nonnegative.
/// The list contains every facet (plus possibly some other valid supports).
fn enumerate_facets(n: usize, verts: &[Exponent]) -> Vec<Facet> {
    let mut normals: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            e
        })
        .collect();
    if n >= 2 {
        for base in verts {
            let mut dirs: Vec<Vec<Rational>> = verts
                .iter()
                .filter(|v| *v > base)
                .map(|v| (0..n).map(|j| &v[j] - &base[j]).collect())
                .collect();
            for j in 0..n {
                let mut e = vec![Rational::zero(); n];
                e[j] = Rational::one();
                dirs.push(e);
            }
            for pick in choose(n - 1, dirs.len()) {
                let rows: Vec<Vec<Rational>> = pick.iter().map(|&i| dirs[i].clone()).collect();
                let w = null_vector(&rows, n);
                if w.iter().all(Rational::is_zero) {
                    continue;
                }
                let w = if w.iter().any(Rational::is_positive) {
                    w
                } else {
                    w.into_iter().map(|x| -x).collect()
                };
                if w.iter().any(Rational::is_negative) {
                    continue;
                }
                normals.push(normalize_direction(w));
            }
        }
    }
    normals.sort();
    normals.dedup();
    normals
        .into_iter()
        .map(|w| {
            let offset = verts.iter().map(|v| v.dot(&w)).min().expect("nonempty");
            Facet { normal: w, offset }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[i64]) -> Exponent {
        Exponent::from_ints(v).unwrap()
    }

    fn poly(gens: &[&[i64]]) -> NewtonPolyhedron {
        NewtonPolyhedron::new(gens[0].len(), gens.iter().map(|g| e(g)).collect()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let n = poly(&[&[2, 0], &[0, 3]]);
        assert!(n.contains_checked(&e(&[1, 2])).unwrap());
        assert!(!n.contains_checked(&e(&[0, 0])).unwrap());
        assert!(!n.contains_checked(&e(&[1, 1])).unwrap());
        let m = poly(&[&[1, 0]]);
        assert!(m.contains_checked(&e(&[1, 0])).unwrap());
    }

    #[test]
    fn vertices_drop_interior_points() {
        let n = poly(&[&[4, 0], &[2, 2], &[0, 4], &[3, 3], &[1, 3]]);
        assert_eq!(n.vertices(), &[e(&[0, 4]), e(&[4, 0])]);
        let m = poly(&[&[4, 0], &[1, 1], &[0, 4]]);
        assert_eq!(m.vertices().len(), 3);
    }

    #[test]
    fn dimension_mismatch() {
        let n = poly(&[&[2, 0], &[0, 3]]);
        assert!(matches!(n.contains(&e(&[1, 1, 1])), Err(Error::Validation(_))));
    }

    #[test]
    fn three_dim_facets() {
        let n = poly(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        assert!(n.facets().iter().any(|f| f.normal.iter().all(|x| *x == Rational::one())));
        assert!(n.contains_checked(&e(&[1, 1, 0])).unwrap());
        assert!(!n.contains_checked(&e(&[1, 0, 0])).unwrap());
    }
}
