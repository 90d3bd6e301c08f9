//! Free dg modules over a presentation, and degree-zero machinery on them:
//! shifts, twists, cones, direct sums, duals over the base ring.
//!
//! A module is a finite list of generators with tridegrees plus a
//! differential matrix with entries in the algebra. Truncated constructions
//! (the duality functors produce those) carry a validity window: inside it
//! the generator list is complete for materialization, outside it nothing is
//! claimed. Symbolic d² = 0 is only meaningful for fully presented modules;
//! truncated ones get checked at the materialized level instead.
//!
//! Index convention everywhere: `diff[(t, s)]` is the coefficient of `g_t`
//! in `d(g_s)`.

use crate::algebra::{Poly, Presentation, Word};
use crate::error::{Error, Result};
use crate::grading::{tri, Tri, Window};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct ModGen {
    pub name: String,
    pub deg: Tri,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validity {
    Full,
    Window(Window),
    /// Image of a box under the weight shear (h, w, d) -> (h + 2w, w, d):
    /// the validity region of a regraded windowed module. Not a box, so it
    /// gets its own membership test.
    Sheared(Window),
}

impl Validity {
    pub fn covers(&self, t: Tri) -> bool {
        match self {
            Validity::Full => true,
            Validity::Window(w) => w.contains(t),
            Validity::Sheared(w) => w.contains(tri(t.h - 2 * t.w, t.w, t.d)),
        }
    }

    fn translate(&self, off: Tri) -> Validity {
        match self {
            Validity::Full => Validity::Full,
            Validity::Window(w) => Validity::Window(w.translate(off)),
            // shear(box.translate(o')) with o' chosen so the images line up
            Validity::Sheared(w) => {
                Validity::Sheared(w.translate(tri(off.h - 2 * off.w, off.w, off.d)))
            }
        }
    }

    fn intersect(&self, other: &Validity) -> Validity {
        match (self, other) {
            (Validity::Full, v) => *v,
            (v, Validity::Full) => *v,
            (Validity::Window(a), Validity::Window(b)) => Validity::Window(a.intersect(b)),
            (Validity::Sheared(a), Validity::Sheared(b)) => Validity::Sheared(a.intersect(b)),
            // a box meeting a sheared box is neither; claim nothing, which
            // is always sound for a validity region
            _ => Validity::Window(Window {
                h_min: 0,
                h_max: -1,
                w_min: 0,
                w_max: -1,
                d_min: 0,
                d_max: -1,
            }),
        }
    }

    fn reflect(&self) -> Validity {
        let flip = |w: &Window| Window {
            h_min: -w.h_max,
            h_max: -w.h_min,
            w_min: -w.w_max,
            w_max: -w.w_min,
            d_min: -w.d_max,
            d_max: -w.d_min,
        };
        match self {
            Validity::Full => Validity::Full,
            Validity::Window(w) => Validity::Window(flip(w)),
            Validity::Sheared(w) => Validity::Sheared(flip(w)),
        }
    }
}

/// Terms of a module element in basis form: (algebra word, generator, coeff).
pub type ModTerms = Vec<(Word, usize, BigRational)>;

#[derive(Debug, Clone)]
pub struct FreeDgModule {
    pub name: String,
    pub algebra: Arc<Presentation>,
    pub gens: Vec<ModGen>,
    pub diff: BTreeMap<(usize, usize), Poly>,
    pub validity: Validity,
}

impl FreeDgModule {
    pub fn new(
        name: &str,
        algebra: Arc<Presentation>,
        gens: Vec<ModGen>,
        diff: BTreeMap<(usize, usize), Poly>,
        validity: Validity,
    ) -> Result<FreeDgModule> {
        let m = FreeDgModule { name: name.to_string(), algebra, gens, diff, validity };
        m.check_degrees()?;
        if m.validity == Validity::Full {
            m.check_d_squared_symbolic()?;
        }
        Ok(m)
    }

    /// The algebra as a rank-one free module over itself: the generator is
    /// closed, and the algebra differential enters through word expansion.
    pub fn rank_one(algebra: Arc<Presentation>, name: &str) -> FreeDgModule {
        FreeDgModule {
            name: name.to_string(),
            algebra,
            gens: vec![ModGen { name: "e".into(), deg: Tri::ZERO }],
            diff: BTreeMap::new(),
            validity: Validity::Full,
        }
    }

    fn check_degrees(&self) -> Result<()> {
        for ((t, s), p) in &self.diff {
            if *t >= self.gens.len() || *s >= self.gens.len() {
                return Err(Error::Presentation(format!(
                    "{}: differential entry ({t},{s}) out of range",
                    self.name
                )));
            }
            let want = self.gens[*s].deg.add(Tri::DIFF).sub(self.gens[*t].deg);
            for w in p.terms.keys() {
                let got = self.algebra.word_deg(w);
                if got != want {
                    return Err(Error::Degree(format!(
                        "{}: entry {}<-{} term degree {}, want {}",
                        self.name, self.gens[*t].name, self.gens[*s].name, got, want
                    )));
                }
            }
        }
        Ok(())
    }

    fn entry_parity_odd(&self, t: usize, s: usize) -> bool {
        let d = self.gens[s].deg.add(Tri::DIFF).sub(self.gens[t].deg);
        !d.is_even()
    }

    /// d² = 0 as polynomial identities. Exact and global; requires a
    /// complete generator list.
    pub fn check_d_squared_symbolic(&self) -> Result<()> {
        // group entries by source for the quadratic term
        let mut by_source: BTreeMap<usize, Vec<(usize, &Poly)>> = BTreeMap::new();
        for ((t, s), p) in &self.diff {
            by_source.entry(*s).or_default().push((*t, p));
        }
        let empty: Vec<(usize, &Poly)> = Vec::new();
        for s in 0..self.gens.len() {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for (m, e_ms) in by_source.get(&s).unwrap_or(&empty) {
                // d_alg applied to the entry
                let d_e = self.algebra.apply_diff(e_ms);
                if !d_e.is_zero() {
                    acc.entry(*m)
                        .and_modify(|p| *p = p.add(&d_e))
                        .or_insert(d_e);
                }
                let sign = if self.entry_parity_odd(*m, s) { -1 } else { 1 };
                for (t2, e_tm) in by_source.get(m).unwrap_or(&empty) {
                    let prod = self.algebra.mul(e_ms, e_tm).scale_i64(sign);
                    if !prod.is_zero() {
                        acc.entry(*t2)
                            .and_modify(|p| *p = p.add(&prod))
                            .or_insert(prod);
                    }
                }
            }
            for (t, p) in acc {
                if !p.is_zero() {
                    return Err(Error::Presentation(format!(
                        "{}: d²(g_{}) has component {} on g_{}",
                        self.name,
                        self.gens[s].name,
                        self.algebra.display(&p),
                        self.gens[t].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Differential of the basis element `u · g_j` in basis terms.
    pub fn diff_of_basis(&self, u: &Word, j: usize) -> ModTerms {
        let mut acc: BTreeMap<(usize, Word), BigRational> = BTreeMap::new();
        let du = self.algebra.apply_diff(&Poly::from_word(u.clone(), one()));
        for (w, c) in &du.terms {
            add_acc(&mut acc, j, w.clone(), c.clone());
        }
        let u_odd = self.algebra.word_is_odd(u);
        let sign = if u_odd { -1i64 } else { 1 };
        for ((t, s), e) in &self.diff {
            if *s != j {
                continue;
            }
            let prod = self
                .algebra
                .mul(&Poly::from_word(u.clone(), one()), e)
                .scale_i64(sign);
            for (w, c) in &prod.terms {
                add_acc(&mut acc, *t, w.clone(), c.clone());
            }
        }
        flatten(acc)
    }

    /// Left multiplication by an algebra element on a basis element.
    pub fn mult_basis(&self, a: &Poly, u: &Word, j: usize) -> ModTerms {
        let prod = self.algebra.mul(a, &Poly::from_word(u.clone(), one()));
        prod.terms
            .into_iter()
            .map(|(w, c)| (w, j, c))
            .collect()
    }

    pub fn translated(&self, off: Tri, name: &str) -> FreeDgModule {
        let flip = off.h.rem_euclid(2) == 1;
        let gens = self
            .gens
            .iter()
            .map(|g| ModGen { name: g.name.clone(), deg: g.deg.add(off) })
            .collect();
        let diff = self
            .diff
            .iter()
            .map(|(k, p)| (*k, if flip { p.scale_i64(-1) } else { p.clone() }))
            .collect();
        FreeDgModule {
            name: name.to_string(),
            algebra: Arc::clone(&self.algebra),
            gens,
            diff,
            validity: self.validity.translate(off),
        }
    }

    /// shift(M, m): cohomology at h reads off the old table at h + m.
    pub fn shift(&self, m: i32) -> FreeDgModule {
        self.translated(tri(-m, 0, 0), &format!("{}[{}]", self.name, m))
    }

    /// twist(M, n): weight-w content reads off the old table at w + n.
    pub fn twist(&self, n: i32) -> FreeDgModule {
        self.translated(tri(0, -n, 0), &format!("{}({})", self.name, n))
    }

    pub fn direct_sum(&self, other: &FreeDgModule, name: &str) -> Result<FreeDgModule> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(Error::Presentation(format!(
                "direct sum of modules over different algebras: {} vs {}",
                self.name, other.name
            )));
        }
        let off = self.gens.len();
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().map(|g| ModGen {
            name: format!("{}'", g.name),
            deg: g.deg,
        }));
        let mut diff = self.diff.clone();
        for ((t, s), p) in &other.diff {
            diff.insert((*t + off, *s + off), p.clone());
        }
        FreeDgModule::new(
            name,
            Arc::clone(&self.algebra),
            gens,
            diff,
            self.validity.intersect(&other.validity),
        )
    }

    /// Dual over the base ring; only for modules over a purely even base
    /// presentation (no fiber generators).
    pub fn graded_dual(&self) -> Result<FreeDgModule> {
        if self.algebra.n_base != self.algebra.gens.len() {
            return Err(Error::Presentation(format!(
                "{}: graded dual requires a base-ring presentation",
                self.name
            )));
        }
        let gens: Vec<ModGen> = self
            .gens
            .iter()
            .map(|g| ModGen { name: format!("{}v", g.name), deg: g.deg.neg() })
            .collect();
        let mut diff = BTreeMap::new();
        for ((i, j), p) in &self.diff {
            // d'(g_i∨) gains (-1)^(h_i + 1) * entry(i, j) on g_j∨
            let sign = if self.gens[*i].deg.is_even() { -1 } else { 1 };
            let q = p.scale_i64(sign);
            if !q.is_zero() {
                diff.insert((*j, *i), q);
            }
        }
        FreeDgModule::new(
            &format!("{}v", self.name),
            Arc::clone(&self.algebra),
            gens,
            diff,
            self.validity.reflect(),
        )
    }
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

fn add_acc(acc: &mut BTreeMap<(usize, Word), BigRational>, gen: usize, w: Word, c: BigRational) {
    use std::collections::btree_map::Entry;
    use num_traits::Zero;
    if c.is_zero() {
        return;
    }
    match acc.entry((gen, w)) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

fn flatten(acc: BTreeMap<(usize, Word), BigRational>) -> ModTerms {
    acc.into_iter().map(|((g, w), c)| (w, g, c)).collect()
}

#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub name: String,
    pub deg: Tri,
    pub entries: BTreeMap<(usize, usize), Poly>,
}

impl ModuleMap {
    /// f(g_s) = Σ_t entries[(t, s)] · g_t, of tridegree `deg`.
    pub fn new(
        name: &str,
        src: &FreeDgModule,
        tgt: &FreeDgModule,
        deg: Tri,
        entries: BTreeMap<(usize, usize), Poly>,
    ) -> Result<ModuleMap> {
        if !Arc::ptr_eq(&src.algebra, &tgt.algebra) {
            return Err(Error::Presentation(format!(
                "map {name} between modules over different algebras"
            )));
        }
        for ((t, s), p) in &entries {
            if *t >= tgt.gens.len() || *s >= src.gens.len() {
                return Err(Error::Presentation(format!("map {name}: entry out of range")));
            }
            let want = src.gens[*s].deg.add(deg).sub(tgt.gens[*t].deg);
            for w in p.terms.keys() {
                let got = src.algebra.word_deg(w);
                if got != want {
                    return Err(Error::Degree(format!(
                        "map {name}: entry {t}<-{s} has term degree {got}, want {want}"
                    )));
                }
            }
        }
        Ok(ModuleMap { name: name.to_string(), deg, entries })
    }

    /// d ∘ f = (-1)^{deg.h} f ∘ d as polynomial identities.
    pub fn check_chain_map(&self, src: &FreeDgModule, tgt: &FreeDgModule) -> Result<()> {
        let f_odd = self.deg.h.rem_euclid(2) == 1;
        let mut by_source_f: BTreeMap<usize, Vec<(usize, &Poly)>> = BTreeMap::new();
        for ((t, s), p) in &self.entries {
            by_source_f.entry(*s).or_default().push((*t, p));
        }
        let mut by_source_d: BTreeMap<usize, Vec<(usize, &Poly)>> = BTreeMap::new();
        for ((t, s), p) in &src.diff {
            by_source_d.entry(*s).or_default().push((*t, p));
        }
        let mut by_source_dt: BTreeMap<usize, Vec<(usize, &Poly)>> = BTreeMap::new();
        for ((t, s), p) in &tgt.diff {
            by_source_dt.entry(*s).or_default().push((*t, p));
        }
        let empty: Vec<(usize, &Poly)> = Vec::new();
        let alg = &src.algebra;
        for s in 0..src.gens.len() {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            // d(f(g_s)): derivative of entries + entries into target diff
            for (m, f_ms) in by_source_f.get(&s).unwrap_or(&empty) {
                let d_f = alg.apply_diff(f_ms);
                if !d_f.is_zero() {
                    acc.entry(*m).and_modify(|p| *p = p.add(&d_f)).or_insert(d_f);
                }
                let f_ms_odd = {
                    let d = src.gens[s].deg.add(self.deg).sub(tgt.gens[*m].deg);
                    !d.is_even()
                };
                let sign = if f_ms_odd { -1 } else { 1 };
                for (t2, e_tm) in by_source_dt.get(m).unwrap_or(&empty) {
                    let prod = alg.mul(f_ms, e_tm).scale_i64(sign);
                    if !prod.is_zero() {
                        acc.entry(*t2).and_modify(|p| *p = p.add(&prod)).or_insert(prod);
                    }
                }
            }
            // minus (-1)^{|f|} f(d(g_s))
            for (m, e_ms) in by_source_d.get(&s).unwrap_or(&empty) {
                let e_odd = {
                    let d = src.gens[s].deg.add(Tri::DIFF).sub(src.gens[*m].deg);
                    !d.is_even()
                };
                // Koszul sign from moving f past the coefficient
                let mut sign = if e_odd && f_odd { -1i64 } else { 1 };
                if f_odd {
                    sign = -sign; // the global (-1)^{|f|}
                }
                sign = -sign; // subtraction
                for (t2, f_tm) in by_source_f.get(m).unwrap_or(&empty) {
                    let prod = alg.mul(e_ms, f_tm).scale_i64(sign);
                    if !prod.is_zero() {
                        acc.entry(*t2).and_modify(|p| *p = p.add(&prod)).or_insert(prod);
                    }
                }
            }
            for (t, p) in acc {
                if !p.is_zero() {
                    return Err(Error::Presentation(format!(
                        "map {}: not a chain map, defect {} on {} from {}",
                        self.name,
                        alg.display(&p),
                        tgt.gens[t].name,
                        src.gens[s].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// f applied to the basis element `u · g_j`, with the Koszul sign from
    /// moving f (of parity deg.h) past `u`.
    pub fn map_of_basis(&self, src: &FreeDgModule, u: &Word, j: usize) -> ModTerms {
        let f_odd = self.deg.h.rem_euclid(2) == 1;
        let u_odd = src.algebra.word_is_odd(u);
        let sign = if f_odd && u_odd { -1i64 } else { 1 };
        let mut acc: BTreeMap<(usize, Word), BigRational> = BTreeMap::new();
        for ((t, s), f_ts) in &self.entries {
            if *s != j {
                continue;
            }
            let prod = src
                .algebra
                .mul(&Poly::from_word(u.clone(), one()), f_ts)
                .scale_i64(sign);
            for (w, c) in &prod.terms {
                add_acc(&mut acc, *t, w.clone(), c.clone());
            }
        }
        flatten(acc)
    }

    /// Identity-shaped map between modules with identical generator tables.
    pub fn identity(src: &FreeDgModule, tgt: &FreeDgModule, name: &str) -> Result<ModuleMap> {
        if src.gens.len() != tgt.gens.len() {
            return Err(Error::Presentation(format!(
                "identity map {name}: generator counts differ"
            )));
        }
        let mut entries = BTreeMap::new();
        for i in 0..src.gens.len() {
            entries.insert((i, i), Poly::one());
        }
        ModuleMap::new(name, src, tgt, Tri::ZERO, entries)
    }
}

/// cone(f) = src[1] ⊕ tgt with differential [[-d_src, 0], [f, d_tgt]].
/// Requires a degree-zero chain map.
pub fn cone(f: &ModuleMap, src: &FreeDgModule, tgt: &FreeDgModule, name: &str) -> Result<FreeDgModule> {
    if f.deg != Tri::ZERO {
        return Err(Error::Presentation(format!(
            "cone over map {} of nonzero degree {}",
            f.name, f.deg
        )));
    }
    f.check_chain_map(src, tgt)?;
    let shifted = src.shift(1);
    let off = shifted.gens.len();
    let mut gens = shifted.gens.clone();
    gens.extend(tgt.gens.iter().map(|g| ModGen {
        name: format!("{}'", g.name),
        deg: g.deg,
    }));
    let mut diff: BTreeMap<(usize, usize), Poly> = shifted.diff.clone();
    for ((t, s), p) in &tgt.diff {
        diff.insert((*t + off, *s + off), p.clone());
    }
    for ((t, s), p) in &f.entries {
        diff.insert((*t + off, *s), p.clone());
    }
    FreeDgModule::new(
        name,
        Arc::clone(&src.algebra),
        gens,
        diff,
        shifted.validity.intersect(&tgt.validity),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GenSpec;
    use crate::field::q_from_i64;

    fn base_ring() -> Arc<Presentation> {
        Arc::new(
            Presentation::new(
                "R",
                vec![GenSpec { name: "x".into(), deg: tri(0, 0, 1) }],
                vec![],
            )
            .unwrap(),
        )
    }

    fn koszul_of_x(r: &Arc<Presentation>) -> FreeDgModule {
        let gens = vec![
            ModGen { name: "1".into(), deg: Tri::ZERO },
            ModGen { name: "k".into(), deg: tri(-1, 0, 1) },
        ];
        let mut diff = BTreeMap::new();
        diff.insert((0, 1), Poly::gen(0)); // d(k) = x·1
        FreeDgModule::new("K", Arc::clone(r), gens, diff, Validity::Full).unwrap()
    }

    #[test]
    fn degree_validation_rejects_bad_entry() {
        let r = base_ring();
        let gens = vec![
            ModGen { name: "1".into(), deg: Tri::ZERO },
            ModGen { name: "k".into(), deg: tri(-1, 0, 2) }, // wrong d for x entry
        ];
        let mut diff = BTreeMap::new();
        diff.insert((0, 1), Poly::gen(0));
        assert!(FreeDgModule::new("bad", r, gens, diff, Validity::Full).is_err());
    }

    #[test]
    fn cone_of_multiplication_is_koszul_complex() {
        let r = base_ring();
        let tgt = FreeDgModule::rank_one(Arc::clone(&r), "R");
        let src = tgt.translated(tri(0, 0, 1), "R{d+1}");
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), Poly::gen(0));
        let f = ModuleMap::new("mx", &src, &tgt, Tri::ZERO, entries).unwrap();
        let c = cone(&f, &src, &tgt, "cone(x)").unwrap();
        let k = koszul_of_x(&r);
        assert_eq!(c.gens.len(), 2);
        assert_eq!(c.gens[0].deg, k.gens[1].deg); // shifted source = k-generator
        assert_eq!(c.gens[1].deg, k.gens[0].deg);
        // single entry, equal to x (possibly up to the shift sign)
        let e = c.diff.get(&(1, 0)).unwrap();
        assert_eq!(e, &Poly::gen(0));
    }

    #[test]
    fn double_dual_negates_differential() {
        let r = base_ring();
        let k = koszul_of_x(&r);
        let dual = k.graded_dual().unwrap();
        // dual gens at negated degrees
        assert_eq!(dual.gens[0].deg, Tri::ZERO);
        assert_eq!(dual.gens[1].deg, tri(1, 0, -1));
        // d(1∨) = -x·k∨
        assert_eq!(dual.diff.get(&(1, 0)).unwrap(), &Poly::gen(0).scale_i64(-1));
        let dd = dual.graded_dual().unwrap();
        assert_eq!(dd.gens[0].deg, k.gens[0].deg);
        assert_eq!(dd.gens[1].deg, k.gens[1].deg);
        // double dual flips the sign of d relative to the original
        assert_eq!(
            dd.diff.get(&(0, 1)).unwrap(),
            &k.diff.get(&(0, 1)).unwrap().scale_i64(-1)
        );
    }

    #[test]
    fn chain_map_check_catches_defect() {
        let r = base_ring();
        let k = koszul_of_x(&r);
        // valid: multiplication by x^2 on K
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), Poly::from_word(Word(vec![(0, 2)]), q_from_i64(1)));
        entries.insert((1, 1), Poly::from_word(Word(vec![(0, 2)]), q_from_i64(1)));
        let f = ModuleMap::new("x2", &k, &k.translated(tri(0, 0, -2), "K'"), Tri::ZERO, entries)
            .unwrap();
        f.check_chain_map(&k, &k.translated(tri(0, 0, -2), "K'")).unwrap();
        // invalid: send k -> k, 1 -> 0 (defect x on the unit path)
        let mut entries = BTreeMap::new();
        entries.insert((1, 1), Poly::one());
        let g = ModuleMap::new("broken", &k, &k, Tri::ZERO, entries).unwrap();
        assert!(g.check_chain_map(&k, &k).is_err());
    }

    #[test]
    fn shift_twist_translate_tables_and_signs() {
        let r = base_ring();
        let k = koszul_of_x(&r);
        let s = k.shift(1);
        assert_eq!(s.gens[0].deg, tri(-1, 0, 0));
        assert_eq!(s.gens[1].deg, tri(-2, 0, 1));
        assert_eq!(s.diff.get(&(0, 1)).unwrap(), &Poly::gen(0).scale_i64(-1));
        let s2 = s.shift(-1);
        assert_eq!(s2.gens[0].deg, k.gens[0].deg);
        assert_eq!(s2.diff.get(&(0, 1)).unwrap(), k.diff.get(&(0, 1)).unwrap());
        let t = k.twist(2);
        assert_eq!(t.gens[0].deg, tri(0, -2, 0));
        assert_eq!(t.diff.get(&(0, 1)).unwrap(), k.diff.get(&(0, 1)).unwrap());
    }

    #[test]
    fn direct_sum_block_structure() {
        let r = base_ring();
        let k = koszul_of_x(&r);
        let s = k.direct_sum(&k.shift(1), "K+K[1]").unwrap();
        assert_eq!(s.gens.len(), 4);
        assert!(s.diff.contains_key(&(0, 1)));
        assert!(s.diff.contains_key(&(2, 3)));
        assert_eq!(s.diff.len(), 2);
    }

    #[test]
    fn diff_of_basis_leibniz() {
        let r = base_ring();
        let k = koszul_of_x(&r);
        // d(x²·k) = x³·1
        let terms = k.diff_of_basis(&Word(vec![(0, 2)]), 1);
        assert_eq!(terms.len(), 1);
        let (w, g, c) = &terms[0];
        assert_eq!(w, &Word(vec![(0, 3)]));
        assert_eq!(*g, 0);
        assert_eq!(c, &q_from_i64(1));
    }
}
