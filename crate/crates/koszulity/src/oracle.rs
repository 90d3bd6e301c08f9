//! Independent baseline computations for cross-checking the engine.
//!
//! Everything here is deliberately self-contained: monomials are enumerated
//! by a direct bigraded search and ranks are taken by dense rational
//! Gaussian elimination, with no use of the word/presentation machinery or
//! the sparse echelon code that the engine itself runs on. Agreement between
//! the two routes is therefore evidence, not bookkeeping.

use crate::constructions::RawPoly;
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;

/// Exponent vectors over variables with bidegrees (count, weight) summing to
/// exactly (w, d). Every variable must consume at least one unit of one of
/// the two budgets, otherwise enumeration would not terminate.
pub fn bigraded_monomials(specs: &[(i32, i32)], w: i32, d: i32) -> Result<Vec<Vec<u32>>> {
    for (c, wt) in specs {
        if *c < 0 || *wt < 0 || (*c == 0 && *wt == 0) {
            return Err(Error::Scenario(format!(
                "variable bidegree ({c},{wt}) must be nonnegative and nonzero"
            )));
        }
    }
    let mut out = Vec::new();
    if w < 0 || d < 0 {
        return Ok(out);
    }
    let mut cur = vec![0u32; specs.len()];
    fn rec(
        specs: &[(i32, i32)],
        i: usize,
        w: i32,
        d: i32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if i == specs.len() {
            if w == 0 && d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let (c, wt) = specs[i];
        let mut e = 0u32;
        loop {
            let used_w = c * e as i32;
            let used_d = wt * e as i32;
            if used_w > w || used_d > d {
                break;
            }
            cur[i] = e;
            rec(specs, i + 1, w - used_w, d - used_d, cur, out);
            cur[i] = 0;
            e += 1;
        }
    }
    rec(specs, 0, w, d, &mut cur, &mut out);
    out.sort();
    Ok(out)
}

/// Monomials in the base ring alone at weighted degree d.
pub fn ring_monomials(weights: &[i32], d: i32) -> Result<Vec<Vec<u32>>> {
    let specs: Vec<(i32, i32)> = weights.iter().map(|w| (0, *w)).collect();
    bigraded_monomials(&specs, 0, d)
}

/// A graded piece of a polynomial ring modulo a spanned subspace, with the
/// reduced row echelon data kept so vectors can be expressed in quotient
/// coordinates.
#[derive(Debug)]
pub struct SpanQuotient {
    pub monos: Vec<Vec<u32>>,
    rows: Vec<Vec<BigRational>>,
    pub pivots: Vec<usize>,
    /// indices into `monos` forming a monomial basis of the quotient
    pub basis: Vec<usize>,
}

impl SpanQuotient {
    pub fn new(monos: Vec<Vec<u32>>, span: Vec<Vec<BigRational>>) -> SpanQuotient {
        let ncols = monos.len();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for mut r in span {
            debug_assert_eq!(r.len(), ncols);
            for (row, p) in rows.iter().zip(&pivots) {
                if !r[*p].is_zero() {
                    let c = r[*p].clone();
                    for j in 0..ncols {
                        let sub = &c * &row[j];
                        r[j] -= sub;
                    }
                }
            }
            if let Some(p) = (0..ncols).find(|j| !r[*j].is_zero()) {
                let inv = r[p].clone();
                for x in r.iter_mut() {
                    *x /= inv.clone();
                }
                rows.push(r);
                pivots.push(p);
            }
        }
        // back-eliminate to reduced form so reduce() is a single pass
        for i in (0..rows.len()).rev() {
            for j in i + 1..rows.len() {
                let p = pivots[j];
                if !rows[i][p].is_zero() {
                    let c = rows[i][p].clone();
                    let rj = rows[j].clone();
                    for (x, y) in rows[i].iter_mut().zip(&rj) {
                        let sub = &c * y;
                        *x -= sub;
                    }
                }
            }
        }
        let basis = (0..ncols).filter(|j| !pivots.contains(j)).collect();
        SpanQuotient { monos, rows, pivots, basis }
    }

    pub fn dim(&self) -> usize {
        self.monos.len() - self.pivots.len()
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        self.monos.binary_search_by(|m| m.as_slice().cmp(exp)).ok()
    }

    /// Express a vector (coordinates over `monos`) in quotient coordinates
    /// (over `basis`).
    pub fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        debug_assert_eq!(v.len(), self.monos.len());
        for (row, p) in self.rows.iter().zip(&self.pivots) {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    let sub = &c * y;
                    *x -= sub;
                }
            }
        }
        self.basis.iter().map(|b| v[*b].clone()).collect()
    }
}

fn weighted_deg(weights: &[i32], exp: &[u32]) -> i32 {
    weights.iter().zip(exp).map(|(w, e)| w * *e as i32).sum()
}

/// Degree-d piece of R/(s_1..s_r) for a weighted polynomial ring.
pub fn ring_quotient(weights: &[i32], sections: &[RawPoly], d: i32) -> Result<SpanQuotient> {
    let monos = ring_monomials(weights, d)?;
    let mut span = Vec::new();
    for s in sections {
        let e = s
            .first()
            .map(|(exp, _)| weighted_deg(weights, exp))
            .unwrap_or(0);
        for m in ring_monomials(weights, d - e)? {
            let mut row = vec![BigRational::zero(); monos.len()];
            for (exp, c) in s {
                let prod: Vec<u32> = m.iter().zip(exp).map(|(a, b)| a + b).collect();
                let idx = monos
                    .binary_search(&prod)
                    .map_err(|_| Error::Internal("product monomial missing".into()))?;
                row[idx] += c;
            }
            span.push(row);
        }
    }
    Ok(SpanQuotient::new(monos, span))
}

pub fn ring_quotient_dims(
    weights: &[i32],
    sections: &[RawPoly],
    dmax: i32,
) -> Result<Vec<usize>> {
    (0..=dmax)
        .map(|d| Ok(ring_quotient(weights, sections, d)?.dim()))
        .collect()
}

/// The (w, d) piece of Sym(E) / (W) where E has one generator y_i per
/// section, of bidegree (1, dmax - e_i), and W = sum s_i y_i. Variables are
/// ordered x_1..x_n, y_1..y_r; exponent vectors have length n + r.
pub fn sym_quotient(
    weights: &[i32],
    sections: &[RawPoly],
    dmax: i32,
    w: i32,
    d: i32,
) -> Result<SpanQuotient> {
    let n = weights.len();
    let es: Vec<i32> = sections
        .iter()
        .map(|s| {
            s.first()
                .map(|(exp, _)| weighted_deg(weights, exp))
                .unwrap_or(0)
        })
        .collect();
    let mut specs: Vec<(i32, i32)> = weights.iter().map(|wt| (0, *wt)).collect();
    for e in &es {
        specs.push((1, dmax - e));
    }
    let monos = bigraded_monomials(&specs, w, d)?;
    // W has bidegree (1, dmax); multiples come from the (w-1, d-dmax) piece
    let mut span = Vec::new();
    for m in bigraded_monomials(&specs, w - 1, d - dmax)? {
        let mut row = vec![BigRational::zero(); monos.len()];
        for (i, s) in sections.iter().enumerate() {
            for (exp, c) in s {
                let mut prod = m.clone();
                for (j, e) in exp.iter().enumerate() {
                    prod[j] += e;
                }
                prod[n + i] += 1;
                let idx = monos
                    .binary_search(&prod)
                    .map_err(|_| Error::Internal("section multiple missing".into()))?;
                row[idx] += c;
            }
        }
        span.push(row);
    }
    Ok(SpanQuotient::new(monos, span))
}

pub fn sym_quotient_dim(
    weights: &[i32],
    sections: &[RawPoly],
    dmax: i32,
    w: i32,
    d: i32,
) -> Result<usize> {
    Ok(sym_quotient(weights, sections, dmax, w, d)?.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q_from_i64;

    fn raw(terms: &[(&[u32], i64)]) -> RawPoly {
        terms
            .iter()
            .map(|(e, c)| (e.to_vec(), q_from_i64(*c)))
            .collect()
    }

    #[test]
    fn monomial_counts_match_closed_forms() {
        // k[x,y,z] standard grading: dim_d = (d+1)(d+2)/2
        for d in 0..6 {
            let m = ring_monomials(&[1, 1, 1], d).unwrap();
            assert_eq!(m.len() as i32, (d + 1) * (d + 2) / 2);
        }
        // weighted k[x(1), y(2)]: dims 1,1,2,2,3
        let dims: Vec<usize> = (0..5)
            .map(|d| ring_monomials(&[1, 2], d).unwrap().len())
            .collect();
        assert_eq!(dims, vec![1, 1, 2, 2, 3]);
        // zero-bidegree variables are rejected
        assert!(bigraded_monomials(&[(0, 0)], 0, 0).is_err());
    }

    #[test]
    fn cubic_cone_dimensions() {
        // k[x,y,z]/(x^3+y^3+z^3): dims 1,3,6,9,12,15,...
        let s = raw(&[(&[3, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 3], 1)]);
        let dims = ring_quotient_dims(&[1, 1, 1], &[s], 5).unwrap();
        assert_eq!(dims, vec![1, 3, 6, 9, 12, 15]);
    }

    #[test]
    fn crossing_axes_dimensions() {
        // k[x1,x2]/(x1 x2): dims 1,2,2,2,...
        let s = raw(&[(&[1, 1], 1)]);
        let dims = ring_quotient_dims(&[1, 1], &[s], 4).unwrap();
        assert_eq!(dims, vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn complete_intersection_point() {
        // k[x1,x2]/(x1,x2) = k
        let s1 = raw(&[(&[1, 0], 1)]);
        let s2 = raw(&[(&[0, 1], 1)]);
        let dims = ring_quotient_dims(&[1, 1], &[s1, s2], 3).unwrap();
        assert_eq!(dims, vec![1, 0, 0, 0]);
    }

    #[test]
    fn sym_quotient_crossing_axes() {
        // one section x1 x2 of degree 2: Sym(E) = R[y], W = x1 x2 y;
        // at w = 1 the quotient has dims 1,2,2,2 over d (y carries d-weight 0)
        let s = raw(&[(&[1, 1], 1)]);
        let dims: Vec<usize> = (0..4)
            .map(|d| sym_quotient_dim(&[1, 1], &[s.clone()], 2, 1, d).unwrap())
            .collect();
        assert_eq!(dims, vec![1, 2, 2, 2]);
        // at w = 0 nothing is quotiented: plain ring dimensions
        let dims0: Vec<usize> = (0..4)
            .map(|d| sym_quotient_dim(&[1, 1], &[s.clone()], 2, 0, d).unwrap())
            .collect();
        assert_eq!(dims0, vec![1, 2, 3, 4]);
    }

    #[test]
    fn quotient_coordinates_kill_exactly_the_ideal() {
        // fermat cubic at d = 3: s itself reduces to zero, x^3 does not
        let s = raw(&[(&[3, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 3], 1)]);
        let q = ring_quotient(&[1, 1, 1], &[s], 3).unwrap();
        assert_eq!(q.dim(), 9);
        let mut v = vec![BigRational::zero(); q.monos.len()];
        for exp in [[3u32, 0, 0], [0, 3, 0], [0, 0, 3]] {
            v[q.index_of(&exp).unwrap()] = q_from_i64(1);
        }
        assert!(q.reduce(v).iter().all(|c| c.is_zero()));
        let mut v2 = vec![BigRational::zero(); q.monos.len()];
        v2[q.index_of(&[3, 0, 0]).unwrap()] = q_from_i64(1);
        assert!(q.reduce(v2).iter().any(|c| !c.is_zero()));
    }
}
