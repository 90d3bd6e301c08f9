//! Inverting the degree-(2,-1,-D) central variable t.
//!
//! A tridegree (h,w,d) reduces to (u,v) = (h+2w, d-wD), both preserved by
//! t-multiplication; depth k means w = -k. The localized object's piece at
//! (u,v) is the colimit over depth of the slices
//!     deep(u,v,k) = (u+2k, -k, v-kD)
//! along t. For a finitely generated free module the deep slice dimensions
//! are eventually constant in k: a basis monomial x^g xi^b t^m g_j at
//! deep(u,v,k) has m = k + (u - h_j - |b|)/2 and an x-part of pinned
//! weighted degree, so each (b,j) channel switches on permanently once
//! m ≥ 0 and contributes a constant count. All channels are on from
//!     k_struct = max_j ceil((h_j + r_fiber - u_min)/2),
//! which is where the certificates below start: past it, equal consecutive
//! dimensions plus an injective chain-level t-map mean the tower is constant
//! forever, not just at the inspected pair.

use crate::algebra::{Poly, Presentation};
use crate::complex::{CohomTable, Materialized, WMap};
use crate::dgmodule::FreeDgModule;
use crate::error::{Error, Result};
use crate::field::FieldKind;
use crate::grading::{tri, Tri};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Rectangle of reduced degrees (u, v).
#[derive(Debug, Clone, Copy)]
pub struct ReducedWindow {
    pub u_min: i32,
    pub u_max: i32,
    pub v_min: i32,
    pub v_max: i32,
}

impl ReducedWindow {
    pub fn new(u: (i32, i32), v: (i32, i32)) -> Result<ReducedWindow> {
        if u.0 > u.1 || v.0 > v.1 {
            return Err(Error::Scenario(format!(
                "empty reduced window u={:?} v={:?}",
                u, v
            )));
        }
        Ok(ReducedWindow { u_min: u.0, u_max: u.1, v_min: v.0, v_max: v.1 })
    }

    pub fn pairs(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for u in self.u_min..=self.u_max {
            for v in self.v_min..=self.v_max {
                out.push((u, v));
            }
        }
        out
    }

    fn padded_pairs(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for u in self.u_min - 1..=self.u_max + 1 {
            for v in self.v_min..=self.v_max {
                out.push((u, v));
            }
        }
        out
    }
}

pub fn deep_tri(u: i32, v: i32, k: i32, dmax: i32) -> Tri {
    tri(u + 2 * k, -k, v - k * dmax)
}

/// (u, v, depth) of a tridegree.
pub fn reduced_of(t: Tri, dmax: i32) -> (i32, i32, i32) {
    (t.h + 2 * t.w, t.d - t.w * dmax, -t.w)
}

/// Depth past which every (generator, fiber-subset) channel of a deep slice
/// is active, so consecutive-depth agreement certifies the whole tail.
pub fn structural_depth(module: &FreeDgModule, rwin: &ReducedWindow) -> i32 {
    let r_fiber = module.algebra.gens.len() - module.algebra.n_base;
    let mut k = 0i32;
    for g in &module.gens {
        let need = g.deg.h + r_fiber as i32 - (rwin.u_min - 1);
        k = k.max((need + 1).div_euclid(2));
    }
    k.max(1)
}

/// Dimension table over reduced degrees, certified at a depth.
#[derive(Debug, Clone)]
pub struct ReducedTable {
    pub name: String,
    pub dims: BTreeMap<(i32, i32), usize>,
    pub depth: i32,
}

impl ReducedTable {
    pub fn from_pairs(name: &str, entries: &[((i32, i32), usize)]) -> ReducedTable {
        let mut dims = BTreeMap::new();
        for (k, v) in entries {
            if *v > 0 {
                dims.insert(*k, *v);
            }
        }
        ReducedTable { name: name.to_string(), dims, depth: 0 }
    }

    pub fn dim(&self, u: i32, v: i32) -> usize {
        self.dims.get(&(u, v)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    /// First (u,v) in the window where the tables disagree.
    pub fn first_mismatch(
        &self,
        other: &ReducedTable,
        rwin: &ReducedWindow,
    ) -> Option<((i32, i32), usize, usize)> {
        for p in rwin.pairs() {
            let a = self.dim(p.0, p.1);
            let b = other.dim(p.0, p.1);
            if a != b {
                return Some((p, a, b));
            }
        }
        None
    }
}

#[derive(Debug)]
pub enum StabOutcome {
    Stable { table: ReducedTable, certificate: StabCertificate },
    Unstable { depth_tried: i32, reason: String },
}

#[derive(Debug)]
pub struct StabCertificate {
    pub depth: i32,
    /// pairs (u,v) whose chain-level slices were matched, including padding
    pub pairs_checked: usize,
    /// true once the t-map between consecutive depths was square + full rank
    pub chain_bijective: bool,
}

fn t_gen_of(alg: &Presentation) -> Result<(usize, Tri)> {
    for (i, g) in alg.gens.iter().enumerate() {
        if g.name == "t" {
            return Ok((i, g.deg));
        }
    }
    Err(Error::Presentation(format!(
        "{}: algebra has no generator named t",
        alg.name
    )))
}

/// Deep slices for the given depths, with one column of u-padding so that
/// cohomology is safe on the window interior.
pub fn depth_tris(rwin: &ReducedWindow, depths: &[i32], dmax: i32) -> Vec<Tri> {
    let mut out = Vec::new();
    for k in depths {
        for u in rwin.u_min - 1..=rwin.u_max + 1 {
            for v in rwin.v_min..=rwin.v_max {
                out.push(deep_tri(u, v, *k, dmax));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Localize by chain-level stabilization: find a depth where consecutive
/// deep slices are isomorphic complexes via t (equal dimensions, full-rank
/// commuting t-matrices), then read the cohomology of the stable slice.
/// Starts at the structural depth, so success certifies the entire tail.
pub fn localize(
    module: &FreeDgModule,
    dmax: i32,
    rwin: &ReducedWindow,
    extra_depth: i32,
    kind: FieldKind,
    cap: usize,
) -> Result<StabOutcome> {
    let (t_id, t_deg) = t_gen_of(&module.algebra)?;
    let t_poly = Poly::gen(t_id);
    let k0 = structural_depth(module, rwin);
    let mut last_reason = String::new();
    for k in k0..=k0 + extra_depth {
        let tris = depth_tris(rwin, &[k, k + 1], dmax);
        let mat = Materialized::build(module, &tris, kind, cap)?;
        mat.check_d_squared()?;
        let tmap = WMap::mult_by(&t_poly, t_deg, module, &mat, &mat, "t.")?;
        tmap.check_chain(&mat, &mat)?;
        let mut ok = true;
        let mut pairs = 0usize;
        'outer: for (u, v) in rwin.padded_pairs() {
            let a = deep_tri(u, v, k, dmax);
            let b = deep_tri(u, v, k + 1, dmax);
            let da = mat.dim_at(a).unwrap_or(0);
            let db = mat.dim_at(b).unwrap_or(0);
            if da != db {
                last_reason =
                    format!("chain dims differ at (u,v)=({u},{v}): {da} vs {db} at depth {k}");
                ok = false;
                break 'outer;
            }
            if da > 0 {
                let m = tmap.mats.get(&a).ok_or_else(|| {
                    Error::Internal(format!("missing t-matrix at {a}"))
                })?;
                if m.rank() != da {
                    last_reason = format!(
                        "t-map not bijective at (u,v)=({u},{v}) depth {k} (dim {da})"
                    );
                    ok = false;
                    break 'outer;
                }
            }
            pairs += 1;
        }
        if !ok {
            continue;
        }
        let mut table = ReducedTable {
            name: format!("{}[t^-1]", module.name),
            dims: BTreeMap::new(),
            depth: k,
        };
        for (u, v) in rwin.pairs() {
            let h = mat.cohomology_dim_at(deep_tri(u, v, k, dmax))?;
            if h > 0 {
                table.dims.insert((u, v), h);
            }
        }
        return Ok(StabOutcome::Stable {
            table,
            certificate: StabCertificate {
                depth: k,
                pairs_checked: pairs,
                chain_bijective: true,
            },
        });
    }
    Ok(StabOutcome::Unstable { depth_tried: k0 + extra_depth + 1, reason: last_reason })
}

/// Certificate that the cone of the unit map (a shallow slice mapping into
/// the localized object by t-powers) is t-torsion: every cohomology class
/// at depth 0 either survives to the stable depth or is annihilated by a
/// recorded power of t. `missed` lists stable classes not reached from
/// weight zero; it is empty exactly when the weight-zero classes generate
/// the localization, which holds when the sections form a regular sequence
/// but can genuinely fail otherwise (Koszul-pattern classes of negative
/// reduced degree have no weight-zero antecedent).
#[derive(Debug)]
pub struct SupportReport {
    /// (shallow tridegree, number of classes dying at this step, step N):
    /// at each step the span of the pushed classes is compared against the
    /// boundaries one level deeper, and the rank drop is the count of
    /// classes annihilated by t^N. Counting spans rather than individual
    /// basis vectors matters: for a non-monomial section the torsion
    /// subspace is in general position and contains no basis vector.
    pub exponents: Vec<(Tri, usize, u32)>,
    pub survivors: usize,
    pub max_exponent: u32,
    /// per reduced degree: stable classes not hit by any shallow class
    pub missed: Vec<((i32, i32), usize)>,
    pub stable_depth: i32,
}

impl SupportReport {
    pub fn surjective(&self) -> bool {
        self.missed.is_empty()
    }
}

pub fn unit_support(
    module: &FreeDgModule,
    dmax: i32,
    rwin: &ReducedWindow,
    stable_depth: i32,
    kind: FieldKind,
    cap: usize,
) -> Result<SupportReport> {
    let (t_id, t_deg) = t_gen_of(&module.algebra)?;
    let t_poly = Poly::gen(t_id);
    let depths: Vec<i32> = (0..=stable_depth).collect();
    let tris = depth_tris(rwin, &depths, dmax);
    let mat = Materialized::build(module, &tris, kind, cap)?;
    mat.check_d_squared()?;
    let tmap = WMap::mult_by(&t_poly, t_deg, module, &mat, &mat, "t.")?;
    tmap.check_chain(&mat, &mat)?;
    let mut exponents = Vec::new();
    let mut survivors = 0usize;
    let mut max_exponent = 0u32;
    let mut missed = Vec::new();
    for (u, v) in rwin.pairs() {
        let shallow = deep_tri(u, v, 0, dmax);
        let (reps, _) = mat.cohomology_reps(shallow)?;
        // Walk the whole span down the tower. At each step the pushed
        // vectors that stay independent of the deeper boundaries form a
        // basis of the surviving image; the rank drop is the number of
        // classes whose torsion exponent is exactly this step.
        let mut alive: Vec<crate::linalg::SparseVec> = reps;
        for j in 1..=stable_depth {
            if alive.is_empty() {
                break;
            }
            let prev = deep_tri(u, v, j - 1, dmax);
            let here = deep_tri(u, v, j, dmax);
            let m = tmap
                .mats
                .get(&prev)
                .ok_or_else(|| Error::Internal(format!("missing t-matrix at {prev}")))?;
            let (_, boundaries) = mat.cohomology_reps(here)?;
            let mut ech = boundaries;
            let mut next_alive = Vec::new();
            let before = alive.len();
            for vvec in alive {
                let pushed = m.apply(&vvec);
                if ech.insert(pushed.clone()) {
                    next_alive.push(pushed);
                }
            }
            let died = before - next_alive.len();
            if died > 0 {
                exponents.push((shallow, died, j as u32));
                max_exponent = max_exponent.max(j as u32);
            }
            alive = next_alive;
        }
        survivors += alive.len();
        // surjectivity onto the stable classes
        let stable_tri = deep_tri(u, v, stable_depth, dmax);
        let hdim = mat.cohomology_dim_at(stable_tri)?;
        let hit = alive.len();
        if hit < hdim {
            missed.push(((u, v), hdim - hit));
        }
    }
    Ok(SupportReport { exponents, survivors, max_exponent, missed, stable_depth })
}

/// The nonpositive-weight part of a materialization (a direct summand of
/// complexes, since the differential preserves weight). Localization only
/// ever inspects slices of negative weight, so this truncation must leave
/// every deep slice untouched — `deep_slices_agree` certifies that.
pub fn truncate_nonpositive(mat: &Materialized) -> Materialized {
    let slices: BTreeMap<Tri, _> = mat
        .slices
        .iter()
        .filter(|(t, _)| t.w <= 0)
        .map(|(t, s)| (*t, s.clone()))
        .collect();
    let mats = mat
        .mats
        .iter()
        .filter(|(t, _)| t.w <= 0 && slices.contains_key(&t.add(Tri::DIFF)))
        .map(|(t, m)| (*t, m.clone()))
        .collect();
    Materialized {
        name: format!("{}|w<=0", mat.name),
        kind: mat.kind,
        slices,
        mats,
    }
}

/// Counit-style certificate: the truncated object has the same deep slices
/// and differentials as the original at every inspected depth ≥ 1.
pub fn deep_slices_agree(
    original: &Materialized,
    truncated: &Materialized,
    rwin: &ReducedWindow,
    depth: i32,
    dmax: i32,
) -> Result<()> {
    for (u, v) in rwin.pairs() {
        for k in 1..=depth {
            let t = deep_tri(u, v, k, dmax);
            let a = original.dim_at(t);
            let b = truncated.dim_at(t);
            if a != b {
                return Err(Error::Presentation(format!(
                    "truncation changed deep slice at {t}: {a:?} vs {b:?}"
                )));
            }
            match (original.mats.get(&t), truncated.mats.get(&t)) {
                (Some(x), Some(y)) if x != y => {
                    return Err(Error::Presentation(format!(
                        "truncation changed differential at {t}"
                    )));
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Regraded tridegree: (h, w, d) -> (h + 2w, w, d).
pub fn mu_tri(t: Tri) -> Tri {
    tri(t.h + 2 * t.w, t.w, t.d)
}

pub fn mu_inv_tri(t: Tri) -> Tri {
    tri(t.h - 2 * t.w, t.w, t.d)
}

/// Regrade an algebra presentation by mu. Base generators (weight 0) are
/// unchanged; each fiber generator moves h by twice its weight. The
/// differential polynomials are reused verbatim and revalidated, so a
/// non-functorial regrading would fail construction.
pub fn mu_presentation(p: &Presentation) -> Result<Arc<Presentation>> {
    let gens: Vec<crate::algebra::GenSpec> = p
        .gens
        .iter()
        .map(|g| crate::algebra::GenSpec {
            name: g.name.clone(),
            deg: mu_tri(g.deg),
        })
        .collect();
    let fiber: Vec<(crate::algebra::GenSpec, Poly)> = gens[p.n_base..]
        .iter()
        .cloned()
        .zip(p.diff[p.n_base..].iter().cloned())
        .collect();
    Ok(Arc::new(Presentation::new(
        &format!("mu({})", p.name),
        gens[..p.n_base].to_vec(),
        fiber,
    )?))
}

/// Regrade a module: generator degrees move by mu, entries are reused and
/// revalidated over the regraded algebra. A windowed module stays windowed
/// with its validity region sheared along.
pub fn mu_module(m: &FreeDgModule, mu_alg: &Arc<Presentation>) -> Result<FreeDgModule> {
    use crate::dgmodule::Validity;
    let validity = match m.validity {
        Validity::Full => Validity::Full,
        Validity::Window(w) => Validity::Sheared(w),
        Validity::Sheared(_) => {
            return Err(Error::Presentation(format!(
                "mu regrade of {}: already sheared once",
                m.name
            )))
        }
    };
    let gens: Vec<crate::dgmodule::ModGen> = m
        .gens
        .iter()
        .map(|g| crate::dgmodule::ModGen {
            name: g.name.clone(),
            deg: mu_tri(g.deg),
        })
        .collect();
    FreeDgModule::new(
        &format!("mu({})", m.name),
        Arc::clone(mu_alg),
        gens,
        m.diff.clone(),
        validity,
    )
}

/// Reindex a cohomology table along mu: the regraded module's dimension at
/// mu(t) must equal the original's at t.
pub fn mu_table(t: &CohomTable, name: &str) -> CohomTable {
    let mut out = CohomTable::new(name);
    for tr in &t.region {
        out.insert(mu_tri(*tr), t.dim(*tr));
    }
    out
}
