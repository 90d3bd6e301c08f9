//! Materialization: turning a free dg module into exact matrices on a finite
//! set of tridegrees, and everything computed from those matrices.
//!
//! A slice at tridegree τ is the list of basis elements `word · generator`
//! of that degree, in a deterministic order (generators in declaration
//! order, words in enumeration order). The differential between two adjacent
//! slices is a sparse matrix over the active field. Cohomology dimensions
//! are only reported at tridegrees whose both h-neighbours were also
//! materialized; w and d never need trimming because the differential
//! preserves them.

use crate::algebra::Word;
use crate::dgmodule::{FreeDgModule, ModTerms, ModuleMap};
use crate::error::{Error, Result};
use crate::field::FieldKind;
use crate::grading::{Tri, Window};
use crate::linalg::{cohomology_dim, Echelon, Mat, SparseVec};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Deterministic error selection for parallel maps: the first error in input
/// order wins, regardless of scheduling.
fn collect_det<T: Send>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(v.len());
    for r in v {
        out.push(r?);
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BasisElt {
    pub gen: usize,
    pub word: Word,
}

#[derive(Clone, Debug, Default)]
pub struct Slice {
    pub basis: Vec<BasisElt>,
    index: BTreeMap<(usize, Word), usize>,
}

impl Slice {
    fn from_basis(basis: Vec<BasisElt>) -> Slice {
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| ((b.gen, b.word.clone()), i))
            .collect();
        Slice { basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn find(&self, gen: usize, word: &Word) -> Option<usize> {
        self.index.get(&(gen, word.clone())).copied()
    }
}

#[derive(Debug)]
pub struct Materialized {
    pub name: String,
    pub kind: FieldKind,
    pub slices: BTreeMap<Tri, Slice>,
    /// mats[τ]: slice(τ) → slice(τ + (1,0,0)); present iff both slices are.
    pub mats: BTreeMap<Tri, Mat>,
}

impl Materialized {
    /// Materialize `module` on an explicit tridegree set. Every requested
    /// tridegree must lie inside the module's validity region.
    pub fn build(
        module: &FreeDgModule,
        tris: &[Tri],
        kind: FieldKind,
        cap: usize,
    ) -> Result<Materialized> {
        for t in tris {
            if !module.validity.covers(*t) {
                return Err(Error::WindowTooSmall(format!(
                    "{}: tridegree {t} outside construction validity",
                    module.name
                )));
            }
        }
        let mut uniq: Vec<Tri> = tris.to_vec();
        uniq.sort();
        uniq.dedup();
        let slices_vec = collect_det(
            uniq.par_iter()
                .map(|t| -> Result<(Tri, Slice)> {
                    let mut basis = Vec::new();
                    for (g, spec) in module.gens.iter().enumerate() {
                        let words = module.algebra.monomials_of(t.sub(spec.deg), cap)?;
                        for w in words {
                            basis.push(BasisElt { gen: g, word: w });
                            if basis.len() > cap {
                                return Err(Error::Resource { h: t.h, w: t.w, d: t.d, cap });
                            }
                        }
                    }
                    Ok((*t, Slice::from_basis(basis)))
                })
                .collect::<Vec<_>>(),
        )?;
        let slices: BTreeMap<Tri, Slice> = slices_vec.into_iter().collect();
        let mat_keys: Vec<Tri> = slices
            .keys()
            .filter(|t| slices.contains_key(&t.add(Tri::DIFF)))
            .copied()
            .collect();
        let mats_vec = collect_det(
            mat_keys
                .par_iter()
                .map(|t| -> Result<(Tri, Mat)> {
                    let src = &slices[t];
                    let tgt = &slices[&t.add(Tri::DIFF)];
                    let mut m = Mat::zero(tgt.dim(), src.dim(), kind);
                    for (col, b) in src.basis.iter().enumerate() {
                        let terms = module.diff_of_basis(&b.word, b.gen);
                        fill_column(&mut m, col, &terms, tgt, kind, &module.name)?;
                    }
                    Ok((*t, m))
                })
                .collect::<Vec<_>>(),
        )?;
        Ok(Materialized {
            name: module.name.clone(),
            kind,
            slices,
            mats: mats_vec.into_iter().collect(),
        })
    }

    pub fn dim_at(&self, t: Tri) -> Option<usize> {
        self.slices.get(&t).map(|s| s.dim())
    }

    /// Verify d ∘ d = 0 wherever two consecutive matrices exist.
    pub fn check_d_squared(&self) -> Result<()> {
        for (t, m) in &self.mats {
            if let Some(next) = self.mats.get(&t.add(Tri::DIFF)) {
                if !next.compose(m).is_zero() {
                    return Err(Error::Presentation(format!(
                        "{}: d² != 0 out of tridegree {t}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Tridegrees where both h-neighbours were materialized.
    pub fn safe_tris(&self) -> Vec<Tri> {
        self.slices
            .keys()
            .filter(|t| {
                self.slices.contains_key(&t.add(Tri::DIFF))
                    && self.slices.contains_key(&t.sub(Tri::DIFF))
            })
            .copied()
            .collect()
    }

    pub fn cohomology_dim_at(&self, t: Tri) -> Result<usize> {
        let dim = self
            .slices
            .get(&t)
            .ok_or_else(|| Error::Internal(format!("{}: no slice at {t}", self.name)))?
            .dim();
        let out = self.mats.get(&t);
        let inc = self.mats.get(&t.sub(Tri::DIFF));
        if self.slices.contains_key(&t.add(Tri::DIFF)) && out.is_none() && dim > 0 {
            return Err(Error::Internal(format!("{}: missing out-matrix at {t}", self.name)));
        }
        cohomology_dim(dim, out, inc)
    }

    /// Cohomology table over the safe tridegrees (or a subset).
    pub fn cohomology_table(&self) -> Result<CohomTable> {
        let region = self.safe_tris();
        let dims = collect_det(
            region
                .par_iter()
                .map(|t| self.cohomology_dim_at(*t).map(|d| (*t, d)))
                .collect::<Vec<_>>(),
        )?;
        let mut table = CohomTable::new(&self.name);
        for (t, d) in dims {
            table.insert(t, d);
        }
        Ok(table)
    }

    /// Representatives of cohomology classes at τ plus the echelon of the
    /// incoming image (for membership tests against boundaries).
    pub fn cohomology_reps(&self, t: Tri) -> Result<(Vec<SparseVec>, Echelon)> {
        let slice = self
            .slices
            .get(&t)
            .ok_or_else(|| Error::Internal(format!("{}: no slice at {t}", self.name)))?;
        let mut image = Echelon::new();
        if let Some(inc) = self.mats.get(&t.sub(Tri::DIFF)) {
            for j in 0..inc.cols {
                image.insert(inc.column(j).clone());
            }
        }
        let kernel: Vec<SparseVec> = match self.mats.get(&t) {
            Some(out) => out.kernel_basis(),
            None => {
                // no outgoing matrix: only valid if the next slice is absent
                // because the window ends; treat whole slice as kernel
                (0..slice.dim())
                    .map(|i| vec![(i as u32, self.kind.one())])
                    .collect()
            }
        };
        let mut reps = Vec::new();
        let mut extended = image.clone();
        for v in kernel {
            let residual = extended.reduce(v.clone());
            if !residual.is_empty() {
                extended.insert(residual);
                reps.push(v);
            }
        }
        Ok((reps, image))
    }

    /// Assemble from explicit slice dimensions with zero differential
    /// (used for quotient presentations whose basis is a list of labels).
    pub fn from_labels(
        name: &str,
        kind: FieldKind,
        labelled: BTreeMap<Tri, usize>,
    ) -> Materialized {
        let mut slices = BTreeMap::new();
        for (t, n) in &labelled {
            let basis = (0..*n)
                .map(|i| BasisElt { gen: i, word: Word::one() })
                .collect();
            slices.insert(*t, Slice::from_basis(basis));
        }
        let mut mats = BTreeMap::new();
        let keys: Vec<Tri> = slices.keys().copied().collect();
        for t in &keys {
            let next = t.add(Tri::DIFF);
            if slices.contains_key(&next) {
                mats.insert(*t, Mat::zero(slices[&next].dim(), slices[t].dim(), kind));
            }
        }
        Materialized { name: name.to_string(), kind, slices, mats }
    }
}

fn fill_column(
    m: &mut Mat,
    col: usize,
    terms: &ModTerms,
    tgt: &Slice,
    kind: FieldKind,
    ctx: &str,
) -> Result<()> {
    for (w, g, c) in terms {
        let row = tgt.find(*g, w).ok_or_else(|| {
            Error::Internal(format!(
                "{ctx}: differential target (gen {g}) missing from slice — enumeration incomplete"
            ))
        })?;
        m.add_to(row, col, &kind.scalar(c)?);
    }
    Ok(())
}

/// Exact dimension table, with the region on which it is meaningful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomTable {
    pub name: String,
    pub dims: BTreeMap<Tri, usize>,
    pub region: std::collections::BTreeSet<Tri>,
}

impl CohomTable {
    pub fn new(name: &str) -> CohomTable {
        CohomTable {
            name: name.to_string(),
            dims: BTreeMap::new(),
            region: Default::default(),
        }
    }

    pub fn insert(&mut self, t: Tri, dim: usize) {
        self.region.insert(t);
        if dim > 0 {
            self.dims.insert(t, dim);
        }
    }

    pub fn dim(&self, t: Tri) -> usize {
        self.dims.get(&t).copied().unwrap_or(0)
    }

    pub fn restricted(&self, win: &Window) -> CohomTable {
        let mut out = CohomTable::new(&self.name);
        for t in &self.region {
            if win.contains(*t) {
                out.insert(*t, self.dim(*t));
            }
        }
        out
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// First mismatch between two tables on the intersection of their
    /// regions; None means they agree everywhere both are defined.
    pub fn first_mismatch(&self, other: &CohomTable) -> Option<(Tri, usize, usize)> {
        for t in self.region.intersection(&other.region) {
            let (a, b) = (self.dim(*t), other.dim(*t));
            if a != b {
                return Some((*t, a, b));
            }
        }
        None
    }

    pub fn common_region_size(&self, other: &CohomTable) -> usize {
        self.region.intersection(&other.region).count()
    }

    /// Nonzero entries h-concentrated in degree zero?
    pub fn concentrated_in_h(&self, h: i32) -> Option<Tri> {
        self.dims.keys().find(|t| t.h != h).copied()
    }
}

/// A map materialized on slices: per-τ matrices slice_src(τ) → slice_tgt(τ + deg).
#[derive(Debug)]
pub struct WMap {
    pub name: String,
    pub deg: Tri,
    pub mats: BTreeMap<Tri, Mat>,
}

impl WMap {
    pub fn build(
        f: &ModuleMap,
        src_mod: &FreeDgModule,
        src: &Materialized,
        tgt: &Materialized,
    ) -> Result<WMap> {
        let keys: Vec<Tri> = src
            .slices
            .keys()
            .filter(|t| tgt.slices.contains_key(&t.add(f.deg)))
            .copied()
            .collect();
        let mats_vec = collect_det(
            keys.par_iter()
                .map(|t| -> Result<(Tri, Mat)> {
                    let s = &src.slices[t];
                    let g = &tgt.slices[&t.add(f.deg)];
                    let mut m = Mat::zero(g.dim(), s.dim(), src.kind);
                    for (col, b) in s.basis.iter().enumerate() {
                        let terms = f.map_of_basis(src_mod, &b.word, b.gen);
                        fill_column(&mut m, col, &terms, g, src.kind, &f.name)?;
                    }
                    Ok((*t, m))
                })
                .collect::<Vec<_>>(),
        )?;
        Ok(WMap { name: f.name.clone(), deg: f.deg, mats: mats_vec.into_iter().collect() })
    }

    /// Left multiplication by an algebra element as a windowed map M → M.
    pub fn mult_by(
        elem: &crate::algebra::Poly,
        elem_deg: Tri,
        module: &FreeDgModule,
        src: &Materialized,
        tgt: &Materialized,
        name: &str,
    ) -> Result<WMap> {
        let keys: Vec<Tri> = src
            .slices
            .keys()
            .filter(|t| tgt.slices.contains_key(&t.add(elem_deg)))
            .copied()
            .collect();
        let mats_vec = collect_det(
            keys.par_iter()
                .map(|t| -> Result<(Tri, Mat)> {
                    let s = &src.slices[t];
                    let g = &tgt.slices[&t.add(elem_deg)];
                    let mut m = Mat::zero(g.dim(), s.dim(), src.kind);
                    for (col, b) in s.basis.iter().enumerate() {
                        let terms = module.mult_basis(elem, &b.word, b.gen);
                        fill_column(&mut m, col, &terms, g, src.kind, name)?;
                    }
                    Ok((*t, m))
                })
                .collect::<Vec<_>>(),
        )?;
        Ok(WMap { name: name.to_string(), deg: elem_deg, mats: mats_vec.into_iter().collect() })
    }

    /// Matrix-level chain identity d∘f = (-1)^{deg.h} f∘d at every τ where
    /// all four matrices exist.
    pub fn check_chain(&self, src: &Materialized, tgt: &Materialized) -> Result<()> {
        let sign_flip = self.deg.h.rem_euclid(2) == 1;
        for (t, f_t) in &self.mats {
            let (Some(d_src), Some(f_next), Some(d_tgt)) = (
                src.mats.get(t),
                self.mats.get(&t.add(Tri::DIFF)),
                tgt.mats.get(&t.add(self.deg)),
            ) else {
                continue;
            };
            let lhs = d_tgt.compose(f_t);
            let mut rhs = f_next.compose(d_src);
            if sign_flip {
                rhs = rhs.scale_neg();
            }
            if lhs != rhs {
                return Err(Error::Presentation(format!(
                    "{}: chain identity fails at {t}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Rank of the induced map on cohomology at τ (classes of src at τ to
    /// classes of tgt at τ+deg).
    pub fn induced_rank(&self, t: Tri, src: &Materialized, tgt: &Materialized) -> Result<usize> {
        let (reps, _) = src.cohomology_reps(t)?;
        let (_, image_tgt) = tgt.cohomology_reps(t.add(self.deg))?;
        let m = self.mats.get(&t).ok_or_else(|| {
            Error::Internal(format!("{}: no matrix at {t}", self.name))
        })?;
        let mut ech = image_tgt;
        let mut rank = 0;
        for v in reps {
            if ech.insert(m.apply(&v)) {
                rank += 1;
            }
        }
        Ok(rank)
    }
}

/// Mapping cone of a degree-zero windowed map: slice(τ) = src(τ+1) ⊕ tgt(τ),
/// differential [[-d_src, 0], [f, d_tgt]].
pub fn cone_of_wmap(f: &WMap, src: &Materialized, tgt: &Materialized, name: &str) -> Materialized {
    assert_eq!(f.deg, Tri::ZERO, "cone needs a degree-zero map");
    let kind = src.kind;
    let mut slices = BTreeMap::new();
    for (t, tslice) in &tgt.slices {
        let Some(sslice) = src.slices.get(&t.add(Tri::DIFF)) else { continue };
        let mut basis: Vec<BasisElt> = Vec::with_capacity(sslice.dim() + tslice.dim());
        // src part first, tagged by generator offset so labels stay unique
        basis.extend(sslice.basis.iter().map(|b| BasisElt {
            gen: b.gen,
            word: b.word.clone(),
        }));
        basis.extend(tslice.basis.iter().map(|b| BasisElt {
            gen: b.gen + (1 << 20),
            word: b.word.clone(),
        }));
        slices.insert(*t, Slice::from_basis(basis));
    }
    let mut mats = BTreeMap::new();
    for t in slices.keys() {
        let next = t.add(Tri::DIFF);
        if !slices.contains_key(&next) {
            continue;
        }
        let s_here = src.slices[&t.add(Tri::DIFF)].dim();
        let t_here = tgt.slices[t].dim();
        let s_next = src.slices[&next.add(Tri::DIFF)].dim();
        let t_next = tgt.slices[&next].dim();
        let mut m = Mat::zero(s_next + t_next, s_here + t_here, kind);
        if let Some(ds) = src.mats.get(&t.add(Tri::DIFF)) {
            copy_block(&mut m, ds, 0, 0, true);
        }
        if let Some(dt) = tgt.mats.get(t) {
            copy_block(&mut m, dt, s_next, s_here, false);
        }
        if let Some(ft) = f.mats.get(&t.add(Tri::DIFF)) {
            copy_block(&mut m, ft, s_next, 0, false);
        }
        mats.insert(*t, m);
    }
    Materialized { name: name.to_string(), kind, slices, mats }
}

fn copy_block(dst: &mut Mat, blk: &Mat, row_off: usize, col_off: usize, negate: bool) {
    for j in 0..blk.cols {
        for (i, v) in blk.column(j) {
            let val = if negate { v.neg() } else { v.clone() };
            dst.add_to(*i as usize + row_off, j + col_off, &val);
        }
    }
}

impl Mat {
    fn scale_neg(&self) -> Mat {
        let mut out = Mat::zero(self.rows, self.cols, self.kind);
        for j in 0..self.cols {
            for (i, v) in self.column(j) {
                out.set(*i as usize, j, v.neg());
            }
        }
        out
    }
}
