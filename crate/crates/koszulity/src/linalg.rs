//! Exact linear algebra over the active field.
//!
//! Matrices are stored column-major and sparse because differentials send
//! each basis vector to a handful of targets. Ranks come from an incremental
//! echelon structure with pivots chosen by smallest coefficient bit-length;
//! small rational matrices additionally go through fraction-free (Bareiss)
//! elimination over integers, and the two paths are cross-checked in tests.
//! Kernel vectors are always verified against the matrix before being
//! returned.

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sorted (index, nonzero coefficient) pairs.
pub type SparseVec = Vec<(u32, Scalar)>;

pub fn sv_get(v: &[(u32, Scalar)], i: u32) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |(j, _)| *j).ok().map(|p| &v[p].1)
}

/// v - c * w for sorted sparse vectors.
pub fn sv_axpy(v: &[(u32, Scalar)], c: &Scalar, w: &[(u32, Scalar)]) -> SparseVec {
    let mut out = SparseVec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < v.len() || j < w.len() {
        match (v.get(i), w.get(j)) {
            (Some((vi, vc)), Some((wj, wc))) => {
                if vi < wj {
                    out.push((*vi, vc.clone()));
                    i += 1;
                } else if wj < vi {
                    let x = c.mul(wc).neg();
                    if !x.is_zero() {
                        out.push((*wj, x));
                    }
                    j += 1;
                } else {
                    let x = vc.sub(&c.mul(wc));
                    if !x.is_zero() {
                        out.push((*vi, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((vi, vc)), None) => {
                out.push((*vi, vc.clone()));
                i += 1;
            }
            (None, Some((wj, wc))) => {
                let x = c.mul(wc).neg();
                if !x.is_zero() {
                    out.push((*wj, x));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

pub fn sv_scale(v: &[(u32, Scalar)], c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x.mul(c))).collect()
}

pub fn sv_add(v: &[(u32, Scalar)], w: &[(u32, Scalar)]) -> SparseVec {
    let mut out = SparseVec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < v.len() || j < w.len() {
        match (v.get(i), w.get(j)) {
            (Some((vi, vc)), Some((wj, wc))) => {
                if vi < wj {
                    out.push((*vi, vc.clone()));
                    i += 1;
                } else if wj < vi {
                    out.push((*wj, wc.clone()));
                    j += 1;
                } else {
                    let x = vc.add(wc);
                    if !x.is_zero() {
                        out.push((*vi, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((vi, vc)), None) => {
                out.push((*vi, vc.clone()));
                i += 1;
            }
            (None, Some((wj, wc))) => {
                out.push((*wj, wc.clone()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Incremental row space with unit pivots. Rows keep zeros at all pivots of
/// earlier rows, so a single in-order pass reduces any vector.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: Vec<u32>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon { rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        for (row, p) in self.rows.iter().zip(&self.pivots) {
            if let Some(c) = sv_get(&v, *p) {
                let c = c.clone();
                v = sv_axpy(&v, &c, row);
            }
        }
        v
    }

    /// Returns true when the vector enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        // pivot: smallest bit-size, ties by smallest index
        let (pi, _) = v
            .iter()
            .enumerate()
            .min_by_key(|(_, (idx, c))| (c.bit_size(), *idx))
            .expect("nonempty");
        let pivot_idx = v[pi].0;
        let inv = v[pi].1.inv().expect("nonzero pivot");
        v = sv_scale(&v, &inv);
        self.rows.push(v);
        self.pivots.push(pivot_idx);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Full back-elimination: afterwards every row vanishes at every other
    /// row's pivot. Needed before reading off kernels.
    fn back_eliminate(&mut self) {
        for i in (0..self.rows.len()).rev() {
            for j in i + 1..self.rows.len() {
                let p = self.pivots[j];
                if let Some(c) = sv_get(&self.rows[i], p) {
                    let c = c.clone();
                    self.rows[i] = sv_axpy(&self.rows[i], &c, &self.rows[j]);
                }
            }
        }
    }
}

impl Default for Echelon {
    fn default() -> Self {
        Echelon::new()
    }
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub kind: FieldKind,
    columns: Vec<SparseVec>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, kind: FieldKind) -> Mat {
        Mat { rows, cols, kind, columns: vec![Vec::new(); cols] }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        if v.is_zero() {
            return;
        }
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&(r as u32), |(i, _)| *i) {
            Ok(p) => col[p].1 = v,
            Err(p) => col.insert(p, (r as u32, v)),
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        if v.is_zero() {
            return;
        }
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&(r as u32), |(i, _)| *i) {
            Ok(p) => {
                let s = col[p].1.add(v);
                if s.is_zero() {
                    col.remove(p);
                } else {
                    col[p].1 = s;
                }
            }
            Err(p) => col.insert(p, (r as u32, v.clone())),
        }
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    /// Matrix–vector product; the vector is indexed by columns.
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in x {
            acc = sv_axpy(&acc, &c.neg(), &self.columns[*j as usize]);
        }
        acc
    }

    /// self ∘ other as a matrix product (other's columns fed through self).
    pub fn compose(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "composition shape mismatch");
        let mut out = Mat::zero(self.rows, other.cols, self.kind);
        for j in 0..other.cols {
            out.columns[j] = self.apply(&other.columns[j]);
        }
        out
    }

    pub fn rows_sparse(&self) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                rows[*i as usize].push((j as u32, v.clone()));
            }
        }
        rows
    }

    pub fn rank(&self) -> usize {
        if self.kind == FieldKind::Rational && self.rows <= 64 && self.cols <= 64 {
            return self.rank_fraction_free();
        }
        let mut ech = Echelon::new();
        for col in &self.columns {
            ech.insert(col.clone());
        }
        ech.rank()
    }

    /// Bareiss elimination over integers after clearing denominators
    /// row-wise (row scaling preserves rank).
    fn rank_fraction_free(&self) -> usize {
        use num_integer::Integer;
        let mut row_entries: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                row_entries[*i as usize].push((j, v));
            }
        }
        let mut dense: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, entries) in row_entries.iter().enumerate() {
            let mut lcm = BigInt::one();
            for (_, v) in entries {
                let Scalar::Rat(q) = v else {
                    unreachable!("fraction-free path is rational-only")
                };
                lcm = lcm.lcm(q.denom());
            }
            for (j, v) in entries {
                let Scalar::Rat(q) = v else { unreachable!() };
                dense[i][*j] = q.numer() * (&lcm / q.denom());
            }
        }
        bareiss_rank(dense)
    }

    /// Basis of {x : A x = 0}, each vector verified.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let one = self.kind.one();
        let mut ech = Echelon::new();
        for row in self.rows_sparse() {
            ech.insert(row);
        }
        ech.back_eliminate();
        let mut is_pivot = vec![false; self.cols];
        for p in ech.pivots() {
            is_pivot[*p as usize] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut x: SparseVec = vec![(f as u32, one.clone())];
            for (row, p) in ech.rows.iter().zip(ech.pivots()) {
                if let Some(c) = sv_get(row, f as u32) {
                    let entry = c.neg();
                    match x.binary_search_by_key(p, |(i, _)| *i) {
                        Ok(_) => unreachable!("pivot collides with free column"),
                        Err(pos) => x.insert(pos, (*p, entry)),
                    }
                }
            }
            assert!(self.apply(&x).is_empty(), "kernel vector fails verification");
            basis.push(x);
        }
        basis
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

/// Rank by fraction-free Gaussian elimination; consumes a dense integer
/// matrix. Pivots are chosen by smallest bit length for growth control.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut col_order: Vec<usize> = (0..cols).collect();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for step in 0..rows.min(cols) {
        // find pivot among m[step..][col_order[step..]]
        let mut best: Option<(u64, usize, usize)> = None;
        for i in step..rows {
            for (cj, &j) in col_order.iter().enumerate().skip(step) {
                if !m[i][j].is_zero() {
                    let bits = m[i][j].magnitude().bits();
                    if best.map(|(b, _, _)| bits < b).unwrap_or(true) {
                        best = Some((bits, i, cj));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap(step, pi);
        col_order.swap(step, pj);
        rank += 1;
        let pc = col_order[step];
        let pivot = m[step][pc].clone();
        let pivot_row = m[step].clone();
        for row in m.iter_mut().skip(step + 1) {
            if row.iter().all(|x| x.is_zero()) {
                continue;
            }
            let factor = row[pc].clone();
            for &j in &col_order[step..] {
                let val = (&pivot * &row[j] - &factor * &pivot_row[j]) / &prev;
                row[j] = val;
            }
        }
        prev = pivot;
    }
    rank
}

/// Shared sanity check for paired differentials: out ∘ in == 0.
pub fn composes_to_zero(out: &Mat, inc: &Mat) -> bool {
    out.compose(inc).is_zero()
}

/// Rank of the span of a set of vectors.
pub fn span_rank(vecs: &[SparseVec]) -> usize {
    let mut ech = Echelon::new();
    for v in vecs {
        ech.insert(v.clone());
    }
    ech.rank()
}

/// dim ker(out) - rank(in): cohomology dimension at a slice, assuming
/// out ∘ in == 0 was checked separately.
pub fn cohomology_dim(dim: usize, out: Option<&Mat>, inc: Option<&Mat>) -> Result<usize> {
    let rank_out = out.map(|m| m.rank()).unwrap_or(0);
    let rank_in = inc.map(|m| m.rank()).unwrap_or(0);
    let ker = dim - rank_out;
    if rank_in > ker {
        return Err(Error::Internal(format!(
            "image rank {rank_in} exceeds kernel dim {ker}; differential does not square to zero"
        )));
    }
    Ok(ker - rank_in)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q_from_i64;

    fn qs(v: i64) -> Scalar {
        Scalar::Rat(q_from_i64(v))
    }

    fn mat_from_rows(rows: &[&[i64]], kind: FieldKind) -> Mat {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Mat::zero(r, c, kind);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v != 0 {
                    m.set(i, j, kind.scalar(&q_from_i64(*v)).unwrap());
                }
            }
        }
        m
    }

    #[test]
    fn rank_and_kernel_frozen_example() {
        // [[1,2],[2,4]] has rank 1 and kernel spanned by (2,-1)
        let m = mat_from_rows(&[&[1, 2], &[2, 4]], FieldKind::Rational);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // kernel vector is proportional to (2,-1): x0 + 2*x1 = 0
        let v = &k[0];
        let x0 = sv_get(v, 0).cloned().unwrap_or(qs(0));
        let x1 = sv_get(v, 1).cloned().unwrap_or(qs(0));
        assert!(x0.add(&x1.mul(&qs(2))).is_zero());
        assert!(!x1.is_zero());
    }

    #[test]
    fn rank_paths_agree() {
        let rows: Vec<Vec<i64>> = vec![
            vec![2, 0, -1, 3],
            vec![4, 0, -2, 6],
            vec![0, 5, 1, 0],
            vec![2, 5, 0, 3],
        ];
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let mq = mat_from_rows(&refs, FieldKind::Rational);
        let mp = mat_from_rows(&refs, FieldKind::Fp(1_048_583));
        // row3 = row0 + row2, row1 = 2*row0: rank 2
        assert_eq!(mq.rank(), 2);
        assert_eq!(mp.rank(), 2);
        // bareiss on the dense integer matrix agrees
        let dense: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|v| BigInt::from(*v)).collect())
            .collect();
        assert_eq!(bareiss_rank(dense), 2);
        assert_eq!(mq.kernel_dim(), 2);
        for v in mq.kernel_basis() {
            assert!(mq.apply(&v).is_empty());
        }
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![(0, qs(1)), (1, qs(2))]));
        assert!(e.insert(vec![(1, qs(1)), (2, qs(1))]));
        assert!(!e.insert(vec![(0, qs(2)), (1, qs(6)), (2, qs(2))])); // 2*v1 + 2*v2
        assert!(e.contains(vec![(0, qs(1)), (1, qs(3)), (2, qs(1))]));
        assert!(!e.contains(vec![(2, qs(1))]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn cohomology_dim_consistency() {
        // complex 0 -> k^2 --[1,1]--> k -> 0 at the middle slot
        let out = mat_from_rows(&[&[1, 1]], FieldKind::Rational);
        let dim = cohomology_dim(2, Some(&out), None).unwrap();
        assert_eq!(dim, 1);
        let inc = mat_from_rows(&[&[1], &[-1]], FieldKind::Rational);
        let dim = cohomology_dim(2, Some(&out), Some(&inc)).unwrap();
        assert_eq!(dim, 0);
    }

    #[test]
    fn compose_detects_nonzero() {
        let a = mat_from_rows(&[&[1, 0], &[0, 1]], FieldKind::Rational);
        let b = mat_from_rows(&[&[0, 1], &[0, 0]], FieldKind::Rational);
        assert!(!composes_to_zero(&a, &b));
        let c = mat_from_rows(&[&[0, 1], &[0, 0]], FieldKind::Rational);
        let d = mat_from_rows(&[&[1, 0], &[0, 0]], FieldKind::Rational);
        // c∘d has column0 = c*e0 = (0,0)? d e0 = (1,0) -> c(1,0) = (0,0); d e1 = 0
        assert!(composes_to_zero(&c, &d));
    }
}
