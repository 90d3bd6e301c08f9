//! The objects attached to a tuple of weighted-homogeneous sections:
//! the section algebra B, its dual algebra A, the Koszul complex of the
//! tuple, the two duality functors between module categories over B and A,
//! and an independently-signed resolution of the zero locus used to
//! cross-check the functor output.
//!
//! Degree conventions (differential always (1,0,0)):
//!   x_i  (0, 0, wt_i)   even   base
//!   y_i  (0, 1, D-e_i)  even   d(eps) = Σ s_i y_i
//!   eps  (-1, 1, D)     odd
//!   xi_i (1, -1, e_i-D) odd    d(xi_i) = t s_i
//!   t    (2, -1, -D)    even
//!
//! The functors produce free modules on *duals* of monomial basis elements
//! of the input. Those duals form an infinite set; we keep exactly the ones
//! whose slices can intersect a requested window (weights of the output
//! algebra's fiber monomials have one sign, so reachability gives finite
//! bounds). Entries between kept generators are exact; dropped generators
//! never meet the window, so materializations inside it are exact as well.

use crate::algebra::{GenSpec, Poly, Presentation, Word};
use crate::dgmodule::{FreeDgModule, ModGen, Validity};
use crate::error::{Error, Result};
use crate::grading::{tri, Tri, Window};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug)]
pub struct SectionData {
    pub n: usize,
    pub weights: Vec<i32>,
    pub r: usize,
    /// weighted degree of each section
    pub degs: Vec<i32>,
    /// max of degs
    pub dmax: i32,
    pub base: Arc<Presentation>,
    /// sections as polynomials in the base variables
    pub sections: Vec<Poly>,
}

pub type RawPoly = Vec<(Vec<u32>, BigRational)>;

impl SectionData {
    pub fn new(weights: &[i32], raw_sections: &[RawPoly]) -> Result<SectionData> {
        if weights.is_empty() {
            return Err(Error::Scenario("need at least one base variable".into()));
        }
        if weights.iter().any(|w| *w < 1) {
            return Err(Error::Scenario("x-weights must be positive".into()));
        }
        if raw_sections.is_empty() {
            return Err(Error::Scenario("need at least one section".into()));
        }
        let n = weights.len();
        let base_gens: Vec<GenSpec> = weights
            .iter()
            .enumerate()
            .map(|(i, w)| GenSpec { name: format!("x{}", i + 1), deg: tri(0, 0, *w) })
            .collect();
        let base = Arc::new(Presentation::new("R", base_gens, vec![])?);
        let mut sections = Vec::new();
        let mut degs = Vec::new();
        for (k, raw) in raw_sections.iter().enumerate() {
            let mut p = Poly::zero();
            for (exps, c) in raw {
                if exps.len() != n {
                    return Err(Error::Scenario(format!(
                        "section {}: exponent vector length {} != {}",
                        k + 1,
                        exps.len(),
                        n
                    )));
                }
                let word = Word(
                    exps.iter()
                        .enumerate()
                        .filter(|(_, e)| **e > 0)
                        .map(|(i, e)| (i as u32, *e))
                        .collect(),
                );
                p.add_term(word, c.clone());
            }
            if p.is_zero() {
                return Err(Error::Scenario(format!("section {} is zero", k + 1)));
            }
            let mut deg = None;
            for w in p.terms.keys() {
                let d = base.word_deg(w).d;
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => {
                        return Err(Error::Scenario(format!(
                            "section {} is not weighted-homogeneous ({e} vs {d})",
                            k + 1
                        )));
                    }
                    _ => {}
                }
            }
            let deg = deg.unwrap();
            if deg < 1 {
                return Err(Error::Scenario(format!(
                    "section {} has nonpositive degree {deg}",
                    k + 1
                )));
            }
            degs.push(deg);
            sections.push(p);
        }
        let dmax = *degs.iter().max().unwrap();
        Ok(SectionData {
            n,
            weights: weights.to_vec(),
            r: raw_sections.len(),
            degs,
            dmax,
            base,
            sections,
        })
    }

    fn base_gen_specs(&self) -> Vec<GenSpec> {
        self.base.gens.to_vec()
    }

    /// Append one extra generator (exponent 1) to every term of a base
    /// polynomial; sound because base words commute with everything even.
    fn times_gen(&self, p: &Poly, gen_id: usize) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &p.terms {
            let mut factors = w.0.clone();
            factors.push((gen_id as u32, 1));
            factors.sort();
            out.add_term(Word(factors), c.clone());
        }
        out
    }

    /// B = Sym(y_1..y_r) ⊗ Λ(eps) over the base, d(eps) = Σ s_i y_i.
    pub fn section_algebra(&self) -> Result<Arc<Presentation>> {
        let mut fiber = Vec::new();
        for (i, e) in self.degs.iter().enumerate() {
            fiber.push((
                GenSpec {
                    name: format!("y{}", i + 1),
                    deg: tri(0, 1, self.dmax - e),
                },
                Poly::zero(),
            ));
        }
        let mut w = Poly::zero();
        for (i, s) in self.sections.iter().enumerate() {
            w = w.add(&self.times_gen(s, self.n + i));
        }
        fiber.push((
            GenSpec { name: "eps".into(), deg: tri(-1, 1, self.dmax) },
            w,
        ));
        Ok(Arc::new(Presentation::new("B", self.base_gen_specs(), fiber)?))
    }

    /// A = Λ(xi_1..xi_r) ⊗ k[t] over the base, d(xi_i) = t s_i.
    pub fn dual_algebra(&self) -> Result<Arc<Presentation>> {
        let mut fiber = Vec::new();
        let t_id = self.n + self.r;
        for (i, e) in self.degs.iter().enumerate() {
            fiber.push((
                GenSpec {
                    name: format!("xi{}", i + 1),
                    deg: tri(1, -1, e - self.dmax),
                },
                self.times_gen(&self.sections[i], t_id),
            ));
        }
        fiber.push((
            GenSpec { name: "t".into(), deg: tri(2, -1, -self.dmax) },
            Poly::zero(),
        ));
        Ok(Arc::new(Presentation::new("A", self.base_gen_specs(), fiber)?))
    }

    /// Koszul complex of the section tuple over the base ring: generators
    /// indexed by subsets (bitmask order), alternating-sign differential.
    pub fn koszul_complex(&self) -> Result<FreeDgModule> {
        let r = self.r;
        let mut gens = Vec::new();
        for mask in 0u32..(1 << r) {
            let mut deg = Tri::ZERO;
            let mut name = String::from("k[");
            for i in 0..r {
                if mask & (1 << i) != 0 {
                    deg = deg.add(tri(-1, 0, self.degs[i]));
                    name.push_str(&format!("{}", i + 1));
                }
            }
            name.push(']');
            gens.push(ModGen { name, deg });
        }
        let mut diff = BTreeMap::new();
        for mask in 1u32..(1 << r) {
            for i in 0..r {
                if mask & (1 << i) == 0 {
                    continue;
                }
                let below = (mask & ((1 << i) - 1)).count_ones();
                let sign = if below % 2 == 0 { 1 } else { -1 };
                let tgt = (mask & !(1 << i)) as usize;
                diff.insert((tgt, mask as usize), self.sections[i].scale_i64(sign));
            }
        }
        FreeDgModule::new("K", Arc::clone(&self.base), gens, diff, Validity::Full)
    }
}

/// A dual generator retained by a functor: dual of `fiber · g_j` where
/// `fiber` is a monomial in the inner algebra's fiber variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct DualGen {
    j: usize,
    fiber: Word,
}

/// Can a dual generator of degree `deg`, multiplied by monomials of the
/// first functor's output algebra (fiber weights ≤ 0), reach the window?
fn reaches_via_negative(sd: &SectionData, deg: Tri, win: &Window) -> bool {
    if deg.w < win.w_min || deg.h > win.h_max {
        return false;
    }
    let slack = win.h_max - deg.h;
    let m_max = slack / 2;
    // most negative d a companion monomial can contribute
    let d_drop: i32 = sd.degs.iter().map(|e| e - sd.dmax).sum::<i32>() - m_max * sd.dmax;
    deg.d <= win.d_max - d_drop
}

/// Can a dual generator of degree `deg`, multiplied by monomials of the
/// second functor's output algebra (fiber weights ≥ 0, h ∈ {-1, 0}), reach
/// the window?
fn reaches_via_positive(deg: Tri, win: &Window) -> bool {
    deg.w <= win.w_max
        && deg.h >= win.h_min
        && deg.h <= win.h_max + 1
        && deg.d <= win.d_max
}

/// Is an inner dual generator of degree `deg` needed to build the second
/// functor exactly on `win`? True when some xi^b t^m companion makes the
/// composed dual reach the window.
fn needed_for_second(sd: &SectionData, deg: Tri, win: &Window) -> bool {
    let mut gaps: Vec<i32> = sd.degs.iter().map(|e| sd.dmax - e).collect();
    gaps.sort();
    for k in 0..=sd.r {
        let kk = k as i32;
        let sum_min: i32 = gaps[..k].iter().sum();
        // composed dual degree: (-(kk+2m) - deg.h, kk + m - deg.w, mD + Σ(D-e) - deg.d)
        // h-window: -(kk+2m) - deg.h ∈ [h_min, h_max+1]
        let lo_h = ceil_div(-deg.h - (win.h_max + 1) - kk, 2);
        let hi_h = (-deg.h - win.h_min - kk).div_euclid(2);
        // weight ceiling: kk + m - deg.w ≤ w_max
        let hi_w = win.w_max + deg.w - kk;
        // d ceiling: mD + sum_min - deg.d ≤ d_max
        let hi_d = (win.d_max + deg.d - sum_min).div_euclid(sd.dmax);
        let lo = lo_h.max(0);
        let hi = hi_h.min(hi_w).min(hi_d);
        if lo <= hi {
            return true;
        }
    }
    false
}

fn ceil_div(a: i32, b: i32) -> i32 {
    (a + b - 1).div_euclid(b)
}

pub struct FunctorWindows {
    /// window on which the output will be materialized directly
    pub direct: Window,
    /// also keep generators needed to run the opposite functor exactly here
    pub composite: Option<Window>,
}

/// First duality functor: modules over B to modules over A.
/// `m` must be fully presented. Output generators are duals of
/// `y^a eps^c · g_j`; the differential is the transposed inner differential
/// plus contraction terms xi_i·(remove y_i) and t·(remove eps).
pub fn koszul_f(
    sd: &SectionData,
    m: &FreeDgModule,
    a_alg: &Arc<Presentation>,
    wins: &FunctorWindows,
) -> Result<FreeDgModule> {
    if m.validity != Validity::Full {
        return Err(Error::Presentation(format!(
            "koszul_f: {} must be fully presented",
            m.name
        )));
    }
    let n = sd.n;
    let eps_id = n + sd.r;
    let mut duals: Vec<(DualGen, Tri)> = Vec::new();
    for (j, g) in m.gens.iter().enumerate() {
        for c in 0..=1i32 {
            // |a| bound from the weight floors of both predicates
            let mut amax = -wins.direct.w_min - c - g.deg.w;
            if let Some(cw) = &wins.composite {
                amax = amax.max(cw.w_max - c - g.deg.w);
            }
            if amax < 0 {
                continue;
            }
            let mut prefix: Vec<u32> = Vec::new();
            enumerate_exponents(sd.r, amax as u32, &mut prefix, &mut |a| {
                let mut fdeg = tri(-c, a.iter().sum::<u32>() as i32 + c, c * sd.dmax);
                for (i, ai) in a.iter().enumerate() {
                    fdeg.d += *ai as i32 * (sd.dmax - sd.degs[i]);
                }
                let dual_deg = fdeg.add(g.deg).neg();
                let mut keep = reaches_via_negative(sd, dual_deg, &wins.direct);
                if !keep {
                    if let Some(cw) = &wins.composite {
                        keep = needed_for_second(sd, dual_deg, cw);
                    }
                }
                if keep {
                    let mut word: Vec<(u32, u32)> = a
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| **e > 0)
                        .map(|(i, e)| ((n + i) as u32, *e))
                        .collect();
                    if c == 1 {
                        word.push((eps_id as u32, 1));
                    }
                    duals.push((DualGen { j, fiber: Word(word) }, dual_deg));
                }
            });
        }
    }
    build_dual_module(
        sd,
        m,
        a_alg,
        duals,
        &format!("F({})", m.name),
        Validity::Window(wins.direct),
        &|fiber: &Word, gen_odd: bool| {
            // contractions: remove one y_i → coefficient xi_i; remove eps → t
            // (ids coincide across the two algebras); removing the odd eps
            // slot over an odd inner generator costs a sign
            let mut out = Vec::new();
            for (g, _) in &fiber.0 {
                let gid = *g as usize;
                if gid >= n && gid < eps_id {
                    let tgt = fiber.remove_one(gid).unwrap();
                    out.push((tgt, gid, 1i64));
                } else if gid == eps_id {
                    let tgt = fiber.remove_one(gid).unwrap();
                    let sign = if gen_odd { -1 } else { 1 };
                    out.push((tgt, gid, sign));
                }
            }
            out
        },
    )
}

/// Second duality functor: modules over A to modules over B. The input may
/// be a truncated output of the first functor; in that case it must have
/// been built with a composite budget covering `win`.
pub fn koszul_g(
    sd: &SectionData,
    m: &FreeDgModule,
    b_alg: &Arc<Presentation>,
    win: Window,
) -> Result<FreeDgModule> {
    let n = sd.n;
    let t_id = n + sd.r;
    let mut duals: Vec<(DualGen, Tri)> = Vec::new();
    for (j, g) in m.gens.iter().enumerate() {
        for mask in 0u32..(1 << sd.r) {
            let mut fdeg = Tri::ZERO;
            for i in 0..sd.r {
                if mask & (1 << i) != 0 {
                    fdeg = fdeg.add(tri(1, -1, sd.degs[i] - sd.dmax));
                }
            }
            // dual h = -(fdeg.h + 2m) - g.deg.h must stay ≥ h_min
            let m_cap = (-win.h_min - g.deg.h - fdeg.h).div_euclid(2);
            if m_cap < 0 {
                continue;
            }
            for mm in 0..=m_cap {
                let full = fdeg.add(tri(2, -1, -sd.dmax).scale(mm));
                let dual_deg = full.add(g.deg).neg();
                if !reaches_via_positive(dual_deg, &win) {
                    continue;
                }
                let mut word: Vec<(u32, u32)> = Vec::new();
                for i in 0..sd.r {
                    if mask & (1 << i) != 0 {
                        word.push(((n + i) as u32, 1));
                    }
                }
                if mm > 0 {
                    word.push((t_id as u32, mm as u32));
                }
                duals.push((DualGen { j, fiber: Word(word) }, dual_deg));
            }
        }
    }
    build_dual_module(
        sd,
        m,
        b_alg,
        duals,
        &format!("G({})", m.name),
        Validity::Window(win),
        &|fiber: &Word, gen_odd: bool| {
            // contractions: remove one xi_i → coefficient y_i, signed by the
            // remaining odd slots xi_k (k > i) plus the inner generator's
            // parity (xi is odd); remove t → eps (t is even, no sign)
            let mut out = Vec::new();
            for (g, _) in &fiber.0 {
                let gid = *g as usize;
                if gid >= n && gid < t_id {
                    let tgt = fiber.remove_one(gid).unwrap();
                    let mut crossings = tgt
                        .0
                        .iter()
                        .filter(|(h, _)| (*h as usize) < t_id && *h > *g)
                        .count();
                    if gen_odd {
                        crossings += 1;
                    }
                    let sign = if crossings % 2 == 0 { 1 } else { -1 };
                    out.push((tgt, gid, sign));
                } else if gid == t_id {
                    let tgt = fiber.remove_one(gid).unwrap();
                    out.push((tgt, gid, 1i64));
                }
            }
            out
        },
    )
}

fn enumerate_exponents(
    r: usize,
    total_max: u32,
    prefix: &mut Vec<u32>,
    f: &mut dyn FnMut(&[u32]),
) {
    if prefix.len() == r {
        f(prefix);
        return;
    }
    let used: u32 = prefix.iter().sum();
    for e in 0..=(total_max - used) {
        prefix.push(e);
        enumerate_exponents(r, total_max, prefix, f);
        prefix.pop();
    }
}

/// Shared assembly for both functors: given the kept duals, build the output
/// module with transposed-differential entries plus contraction entries.
fn build_dual_module(
    sd: &SectionData,
    m: &FreeDgModule,
    out_alg: &Arc<Presentation>,
    mut duals: Vec<(DualGen, Tri)>,
    name: &str,
    validity: Validity,
    contract: &dyn Fn(&Word, bool) -> Vec<(Word, usize, i64)>,
) -> Result<FreeDgModule> {
    duals.sort();
    duals.dedup();
    let index: BTreeMap<DualGen, usize> = duals
        .iter()
        .enumerate()
        .map(|(i, (d, _))| (d.clone(), i))
        .collect();
    let gens: Vec<ModGen> = duals
        .iter()
        .map(|(d, deg)| {
            let fiber_name = if d.fiber.is_one() {
                "1".to_string()
            } else {
                d.fiber
                    .0
                    .iter()
                    .map(|(g, e)| {
                        let nm = &m.algebra.gens[*g as usize].name;
                        if *e == 1 {
                            nm.clone()
                        } else {
                            format!("{nm}^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            };
            ModGen {
                name: format!("({}|{})*", fiber_name, m.gens[d.j].name),
                deg: *deg,
            }
        })
        .collect();
    let n_base = sd.n;
    let mut diff: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
    // transposed differential: each kept dual, as a target, receives entries
    // from the duals of the basis elements its underlying element maps to,
    // with sign -(-1)^{source parity}
    for (tgt_idx, (dg, _)) in duals.iter().enumerate() {
        let terms = m.diff_of_basis(&dg.fiber, dg.j);
        for (word, i, q) in terms {
            let (xpart, fiber) = word.split_base(n_base);
            let Some(&src_idx) = index.get(&DualGen { j: i, fiber }) else {
                continue;
            };
            let src_h = duals[src_idx].1.h;
            let sign = if src_h.rem_euclid(2) == 0 { -1 } else { 1 };
            let coeff = Poly::from_word(xpart, q).scale_i64(sign);
            add_entry(&mut diff, (tgt_idx, src_idx), &coeff);
        }
    }
    // contraction terms
    for (src_idx, (dg, _)) in duals.iter().enumerate() {
        let gen_odd = m.gens[dg.j].deg.h.rem_euclid(2) == 1;
        for (tgt_fiber, out_gen, sign) in contract(&dg.fiber, gen_odd) {
            let Some(&tgt_idx) = index.get(&DualGen { j: dg.j, fiber: tgt_fiber }) else {
                continue;
            };
            let coeff = Poly::gen(out_gen).scale_i64(sign);
            add_entry(&mut diff, (tgt_idx, src_idx), &coeff);
        }
    }
    FreeDgModule::new(name, Arc::clone(out_alg), gens, diff, validity)
}

fn add_entry(diff: &mut BTreeMap<(usize, usize), Poly>, key: (usize, usize), p: &Poly) {
    if p.is_zero() {
        return;
    }
    let entry = diff.entry(key).or_insert_with(Poly::zero);
    *entry = entry.add(p);
    if entry.is_zero() {
        diff.remove(&key);
    }
}

/// Independent resolution of the zero-locus structure sheaf as a module
/// over A: generators shadow monomials eta^a theta^c with
/// d(eta_i) = xi_i - s_i theta and d(theta) = t. Signs are derived by
/// Leibniz, giving integer multiplicities; entirely separate from the
/// functor construction, so the two can cross-check each other.
pub fn structure_resolution_over_a(
    sd: &SectionData,
    a_alg: &Arc<Presentation>,
    win: Window,
) -> Result<FreeDgModule> {
    let n = sd.n;
    let t_id = n + sd.r;
    let amax = (-win.w_min).max(0) as u32;
    let mut gens_list: Vec<(Vec<u32>, u32)> = Vec::new();
    let mut prefix = Vec::new();
    enumerate_exponents(sd.r, amax, &mut prefix, &mut |a| {
        for c in 0..=1u32 {
            if a.iter().sum::<u32>() + c <= amax {
                gens_list.push((a.to_vec(), c));
            }
        }
    });
    gens_list.sort();
    let index: BTreeMap<(Vec<u32>, u32), usize> = gens_list
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();
    let gens: Vec<ModGen> = gens_list
        .iter()
        .map(|(a, c)| {
            let mut deg = Tri::ZERO;
            for (i, ai) in a.iter().enumerate() {
                deg = deg.add(tri(0, -1, sd.degs[i] - sd.dmax).scale(*ai as i32));
            }
            deg = deg.add(tri(1, -1, -sd.dmax).scale(*c as i32));
            let mut nm = String::from("res[");
            for (i, ai) in a.iter().enumerate() {
                if *ai > 0 {
                    nm.push_str(&format!("n{}^{}", i + 1, ai));
                }
            }
            if *c == 1 {
                nm.push('q');
            }
            nm.push(']');
            ModGen { name: nm, deg }
        })
        .collect();
    let mut diff: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
    for (src, (a, c)) in gens_list.iter().enumerate() {
        for i in 0..sd.r {
            if a[i] == 0 {
                continue;
            }
            let mut a_less = a.clone();
            a_less[i] -= 1;
            let mult = a[i] as i64;
            if let Some(&tgt) = index.get(&(a_less.clone(), *c)) {
                add_entry(&mut diff, (tgt, src), &Poly::gen(n + i).scale_i64(mult));
            }
            if *c == 0 {
                if let Some(&tgt) = index.get(&(a_less, 1)) {
                    add_entry(&mut diff, (tgt, src), &sd.sections[i].scale_i64(-mult));
                }
            }
        }
        if *c == 1 {
            if let Some(&tgt) = index.get(&(a.clone(), 0)) {
                add_entry(&mut diff, (tgt, src), &Poly::gen(t_id));
            }
        }
    }
    let module = FreeDgModule::new(
        "ResOX",
        Arc::clone(a_alg),
        gens,
        diff,
        Validity::Window(win),
    )?;
    // the kept generator set is closed under every entry (each entry lowers
    // |a| + c), so the symbolic d² identity holds despite the truncation
    module.check_d_squared_symbolic()?;
    Ok(module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Materialized;
    use crate::dgmodule::ModuleMap;
    use crate::field::{q_from_i64, FieldKind};

    fn sd_one_section() -> SectionData {
        // n=1, s = (x), weight 1
        SectionData::new(&[1], &[vec![(vec![1], q_from_i64(1))]]).unwrap()
    }

    fn sd_two_sections() -> SectionData {
        // n=2, s = (x1, x2)
        SectionData::new(
            &[1, 1],
            &[
                vec![(vec![1, 0], q_from_i64(1))],
                vec![(vec![0, 1], q_from_i64(1))],
            ],
        )
        .unwrap()
    }

    #[test]
    fn section_data_validation() {
        assert!(SectionData::new(&[1], &[vec![]]).is_err()); // zero section
        // inhomogeneous: x1 + x1^2
        assert!(SectionData::new(
            &[1],
            &[vec![(vec![1], q_from_i64(1)), (vec![2], q_from_i64(1))]]
        )
        .is_err());
        // homogeneous under weights (1,2): x1^2 + x2
        assert!(SectionData::new(
            &[1, 2],
            &[vec![(vec![2, 0], q_from_i64(1)), (vec![0, 1], q_from_i64(1))]]
        )
        .is_ok());
        let sd = sd_one_section();
        assert_eq!(sd.dmax, 1);
        assert_eq!(sd.degs, vec![1]);
    }

    #[test]
    fn algebras_have_locked_degree_tables() {
        let sd = sd_one_section();
        let b = sd.section_algebra().unwrap();
        assert_eq!(b.gens[1].deg, tri(0, 1, 0)); // y1: D - e = 0
        assert_eq!(b.gens[2].deg, tri(-1, 1, 1)); // eps
        assert_eq!(b.display(&b.diff[2]), "x1*y1");
        let a = sd.dual_algebra().unwrap();
        assert_eq!(a.gens[1].deg, tri(1, -1, 0)); // xi1: e - D = 0
        assert_eq!(a.gens[2].deg, tri(2, -1, -1)); // t
        assert_eq!(a.display(&a.diff[1]), "x1*t");
    }

    #[test]
    fn dual_algebra_exterior_identity() {
        // d(xi1 xi2) = x1 t xi2 - x2 t xi1 for s = (x1, x2)
        let sd = sd_two_sections();
        let a = sd.dual_algebra().unwrap();
        let xi1 = a.gen_id("xi1").unwrap();
        let xi2 = a.gen_id("xi2").unwrap();
        let w = Word(vec![(xi1 as u32, 1), (xi2 as u32, 1)]);
        let d = a.apply_diff(&Poly::from_word(w, q_from_i64(1)));
        let t = a.gen_id("t").unwrap() as u32;
        let mut expect = Poly::zero();
        expect.add_term(Word(vec![(0, 1), (xi2 as u32, 1), (t, 1)]), q_from_i64(1));
        expect.add_term(Word(vec![(1, 1), (xi1 as u32, 1), (t, 1)]), q_from_i64(-1));
        assert_eq!(d, expect);
    }

    #[test]
    fn koszul_complex_alternating_signs() {
        let sd = sd_two_sections();
        let k = sd.koszul_complex().unwrap(); // validates d² symbolically
        // subsets in bitmask order: {}, {1}, {2}, {1,2}
        // d(k[12]) = s1·k[2] - s2·k[1]
        assert_eq!(k.diff.get(&(2, 3)).unwrap(), &sd.sections[0]);
        assert_eq!(k.diff.get(&(1, 3)).unwrap(), &sd.sections[1].scale_i64(-1));
    }

    #[test]
    fn f_of_b_golden_identity() {
        // H(F(B)) must be the base ring in cohomological degree 0: the dual
        // of the section algebra resolves the zero-section structure sheaf.
        let sd = sd_one_section();
        let b = sd.section_algebra().unwrap();
        let a = sd.dual_algebra().unwrap();
        let m = FreeDgModule::rank_one(Arc::clone(&b), "B");
        let win = Window::new((-2, 3), (-4, 1), (0, 3)).unwrap();
        let f = koszul_f(&sd, &m, &a, &FunctorWindows { direct: win, composite: None })
            .unwrap();
        let tris: Vec<Tri> = win.iter().collect();
        let mat = Materialized::build(&f, &tris, FieldKind::Rational, 100_000).unwrap();
        mat.check_d_squared().unwrap();
        let table = mat.cohomology_table().unwrap();
        for t in &table.region {
            let expect = if t.h == 0 && t.w == 0 { 1 } else { 0 };
            assert_eq!(table.dim(*t), expect, "H(F(B)) at {t}");
        }
        assert!(table.total() >= 3, "window should show several base degrees");
    }

    #[test]
    fn structure_resolution_cross_checks_functor() {
        let sd = sd_one_section();
        let a = sd.dual_algebra().unwrap();
        let win = Window::new((-2, 3), (-4, 1), (0, 3)).unwrap();
        let res = structure_resolution_over_a(&sd, &a, win).unwrap();
        let tris: Vec<Tri> = win.iter().collect();
        let mat = Materialized::build(&res, &tris, FieldKind::Rational, 100_000).unwrap();
        mat.check_d_squared().unwrap();
        let table = mat.cohomology_table().unwrap();
        for t in &table.region {
            let expect = if t.h == 0 && t.w == 0 { 1 } else { 0 };
            assert_eq!(table.dim(*t), expect, "H(res) at {t}");
        }
    }

    #[test]
    fn composite_recovers_section_algebra_cohomology() {
        // G(F(B)) table == H(B) table on a small shared window
        let sd = sd_one_section();
        let b = sd.section_algebra().unwrap();
        let a = sd.dual_algebra().unwrap();
        let m = FreeDgModule::rank_one(Arc::clone(&b), "B");
        let gwin = Window::new((-2, 2), (0, 2), (0, 2)).unwrap();
        let fwin = Window::new((-2, 3), (-4, 1), (0, 3)).unwrap();
        let f = koszul_f(
            &sd,
            &m,
            &a,
            &FunctorWindows { direct: fwin, composite: Some(gwin) },
        )
        .unwrap();
        let g = koszul_g(&sd, &f, &b, gwin).unwrap();
        let tris: Vec<Tri> = gwin.iter().collect();
        let gmat = Materialized::build(&g, &tris, FieldKind::Rational, 100_000).unwrap();
        gmat.check_d_squared().unwrap();
        let gtable = gmat.cohomology_table().unwrap();
        let bmat = Materialized::build(&m, &tris, FieldKind::Rational, 100_000).unwrap();
        let btable = bmat.cohomology_table().unwrap();
        assert_eq!(gtable.first_mismatch(&btable), None);
        assert!(gtable.common_region_size(&btable) > 4);
        // H(B) is the symmetric algebra modulo the section row: at weight 1
        // only the bare y survives
        assert_eq!(btable.dim(tri(0, 1, 0)), 1);
    }

    #[test]
    fn composite_two_sections_squares_to_zero() {
        // two sections exercise the multi-slot contraction crossings and the
        // odd-slot/odd-generator sign simultaneously
        let sd = sd_two_sections();
        let b = sd.section_algebra().unwrap();
        let a = sd.dual_algebra().unwrap();
        let m = FreeDgModule::rank_one(Arc::clone(&b), "B");
        let gwin = Window::new((-3, 2), (0, 2), (0, 2)).unwrap();
        let fwin = Window::new((-2, 3), (-3, 1), (0, 2)).unwrap();
        let f = koszul_f(
            &sd,
            &m,
            &a,
            &FunctorWindows { direct: fwin, composite: Some(gwin) },
        )
        .unwrap();
        let ftris: Vec<Tri> = fwin.iter().collect();
        let fmat = Materialized::build(&f, &ftris, FieldKind::Rational, 200_000).unwrap();
        fmat.check_d_squared().unwrap();
        let g = koszul_g(&sd, &f, &b, gwin).unwrap();
        let gtris: Vec<Tri> = gwin.iter().collect();
        let gmat = Materialized::build(&g, &gtris, FieldKind::Rational, 200_000).unwrap();
        gmat.check_d_squared().unwrap();
        let gtable = gmat.cohomology_table().unwrap();
        let btable = Materialized::build(&m, &gtris, FieldKind::Rational, 200_000)
            .unwrap()
            .cohomology_table()
            .unwrap();
        assert_eq!(gtable.first_mismatch(&btable), None);
    }

    #[test]
    fn functor_respects_chain_maps() {
        // F applied to the cone of y1: B(-1) → B gives a module whose
        // materialized differential still squares to zero
        let sd = sd_one_section();
        let b = sd.section_algebra().unwrap();
        let a = sd.dual_algebra().unwrap();
        let m = FreeDgModule::rank_one(Arc::clone(&b), "B");
        let m_tw = m.twist(-1);
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), Poly::gen(sd.n)); // y1
        let f_map = ModuleMap::new("y1*", &m_tw, &m, Tri::ZERO, entries).unwrap();
        let c = crate::dgmodule::cone(&f_map, &m_tw, &m, "cone(y1)").unwrap();
        let win = Window::new((-2, 2), (-3, 1), (0, 2)).unwrap();
        let fc = koszul_f(&sd, &c, &a, &FunctorWindows { direct: win, composite: None })
            .unwrap();
        let tris: Vec<Tri> = win.iter().collect();
        let mat = Materialized::build(&fc, &tris, FieldKind::Rational, 100_000).unwrap();
        mat.check_d_squared().unwrap();
    }
}
