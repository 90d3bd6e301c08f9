//! Graded-commutative dg algebra presentations and exact symbolic arithmetic.
//!
//! A `Presentation` lists generators with tridegrees and a differential on
//! each generator (extended as a derivation). The first `n_base` generators
//! are the even polynomial base variables `x_i` sitting in degree (0, 0, wt);
//! all other generators are required to carry internal weight +1 or -1, with
//! one sign per presentation. That uniform-sign rule is what makes windowed
//! monomial enumeration finite: the fiber part of a monomial is pinned by
//! |w| and the base part by the leftover x-degree.
//!
//! Words are kept sorted by generator id; the Koszul sign of a reordering is
//! computed at multiplication time. Odd generators square to zero.

use crate::error::{Error, Result};
use crate::grading::{tri, Tri};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub name: String,
    pub deg: Tri,
}

impl GenSpec {
    pub fn is_odd(&self) -> bool {
        !self.deg.is_even()
    }
}

/// A monomial: sorted (generator id, exponent > 0) pairs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(pub Vec<(u32, u32)>);

impl Word {
    pub fn one() -> Word {
        Word(Vec::new())
    }

    pub fn gen(id: usize) -> Word {
        Word(vec![(id as u32, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp_of(&self, id: usize) -> u32 {
        self.0
            .iter()
            .find(|(g, _)| *g == id as u32)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn total_exp(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Split into (base part, fiber part) at the presentation's base cutoff.
    /// Base generators sort first, so no reordering sign arises.
    pub fn split_base(&self, n_base: usize) -> (Word, Word) {
        let cut = self.0.partition_point(|(g, _)| (*g as usize) < n_base);
        (Word(self.0[..cut].to_vec()), Word(self.0[cut..].to_vec()))
    }

    /// Remove one copy of generator `id`; None if absent. No sign: callers
    /// only divide by even generators or account for the sign themselves.
    pub fn remove_one(&self, id: usize) -> Option<Word> {
        let pos = self.0.iter().position(|(g, _)| *g == id as u32)?;
        let mut v = self.0.clone();
        if v[pos].1 == 1 {
            v.remove(pos);
        } else {
            v[pos].1 -= 1;
        }
        Some(Word(v))
    }
}

/// Exact linear combination of words.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    pub terms: BTreeMap<Word, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::from_word(Word::one(), BigRational::from_integer(1.into()))
    }

    pub fn gen(id: usize) -> Poly {
        Poly::from_word(Word::gen(id), BigRational::from_integer(1.into()))
    }

    pub fn from_word(w: Word, c: BigRational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
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

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn scale_i64(&self, k: i64) -> Poly {
        self.scale(&BigRational::from_integer(k.into()))
    }

    pub fn coeff_of(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Group terms by fiber monomial; values are base-ring polynomials.
    pub fn decompose_fiber(&self, n_base: usize) -> BTreeMap<Word, Poly> {
        let mut out: BTreeMap<Word, Poly> = BTreeMap::new();
        for (w, c) in &self.terms {
            let (base, fiber) = w.split_base(n_base);
            out.entry(fiber).or_default().add_term(base, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

/// Build a canonical word (with sign) from an unsorted factor sequence.
/// Returns None when an odd generator repeats.
pub fn normalize_factors(factors: &[u32], odd: &[bool]) -> Option<(Word, i64)> {
    let mut sign = 1i64;
    let mut sorted: Vec<u32> = Vec::with_capacity(factors.len());
    for &g in factors {
        // insertion sort, counting odd-odd transpositions
        let mut pos = sorted.len();
        while pos > 0 && sorted[pos - 1] > g {
            if odd[sorted[pos - 1] as usize] && odd[g as usize] {
                sign = -sign;
            }
            pos -= 1;
        }
        sorted.insert(pos, g);
    }
    let mut word: Vec<(u32, u32)> = Vec::new();
    for g in sorted {
        match word.last_mut() {
            Some((last, e)) if *last == g => {
                if odd[g as usize] {
                    return None;
                }
                *e += 1;
            }
            _ => word.push((g, 1)),
        }
    }
    Some((Word(word), sign))
}

#[derive(Debug)]
pub struct Presentation {
    pub name: String,
    pub gens: Vec<GenSpec>,
    pub n_base: usize,
    pub diff: Vec<Poly>,
}

impl Presentation {
    /// `base` variables come first; their differentials are zero.
    pub fn new(
        name: &str,
        base: Vec<GenSpec>,
        fiber: Vec<(GenSpec, Poly)>,
    ) -> Result<Presentation> {
        let n_base = base.len();
        let mut gens = base;
        let mut diff = vec![Poly::zero(); n_base];
        for (g, dg) in fiber {
            gens.push(g);
            diff.push(dg);
        }
        let pres = Presentation { name: name.to_string(), gens, n_base, diff };
        pres.validate()?;
        Ok(pres)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gens.iter().enumerate() {
            if i < self.n_base {
                if g.deg.h != 0 || g.deg.w != 0 || g.deg.d <= 0 {
                    return Err(Error::Presentation(format!(
                        "{}: base generator {} must sit in (0,0,wt>0), got {}",
                        self.name, g.name, g.deg
                    )));
                }
            } else if g.deg.w.abs() != 1 {
                return Err(Error::Presentation(format!(
                    "{}: fiber generator {} must have weight ±1, got {}",
                    self.name, g.name, g.deg
                )));
            }
        }
        let signs: Vec<i32> = self.gens[self.n_base..].iter().map(|g| g.deg.w).collect();
        if signs.iter().any(|s| *s != signs[0]) {
            return Err(Error::Presentation(format!(
                "{}: fiber generators mix weight signs",
                self.name
            )));
        }
        for (i, dg) in self.diff.iter().enumerate() {
            let want = self.gens[i].deg.add(Tri::DIFF);
            for w in dg.terms.keys() {
                let got = self.word_deg(w);
                if got != want {
                    return Err(Error::Degree(format!(
                        "{}: d({}) has a term of degree {}, want {}",
                        self.name, self.gens[i].name, got, want
                    )));
                }
            }
        }
        for (i, dg) in self.diff.iter().enumerate() {
            let dd = self.apply_diff(dg);
            if !dd.is_zero() {
                return Err(Error::Presentation(format!(
                    "{}: d^2({}) = {} != 0",
                    self.name,
                    self.gens[i].name,
                    self.display(&dd)
                )));
            }
        }
        Ok(())
    }

    pub fn fiber_weight_sign(&self) -> i32 {
        self.gens.get(self.n_base).map(|g| g.deg.w).unwrap_or(0)
    }

    pub fn gen_id(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn word_deg(&self, w: &Word) -> Tri {
        let mut t = Tri::ZERO;
        for (g, e) in &w.0 {
            t = t.add(self.gens[*g as usize].deg.scale(*e as i32));
        }
        t
    }

    pub fn word_is_odd(&self, w: &Word) -> bool {
        !self.word_deg(w).is_even()
    }

    /// Render a word with this presentation's generator names, `1` for the
    /// empty word.
    pub fn show_word(&self, w: &Word) -> String {
        if w.is_one() {
            return "1".into();
        }
        w.0.iter()
            .map(|(g, e)| {
                let name = &self.gens[*g as usize].name;
                if *e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Render a polynomial with signs folded into the separators, unit
    /// coefficients suppressed, and words named by this presentation.
    pub fn show_poly(&self, p: &Poly) -> String {
        if p.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in p.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if w.is_one() {
                abs.to_string()
            } else if abs.is_one() {
                self.show_word(w)
            } else {
                format!("{abs}*{}", self.show_word(w))
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    /// Product of two canonical words with Koszul sign; None if an odd
    /// generator squares.
    pub fn word_mul(&self, a: &Word, b: &Word) -> Option<(Word, i64)> {
        // merge sorted factor lists; sign counts odd-of-b passing odd-of-a
        // with larger id
        let mut sign = 1i64;
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(a.0.len() + b.0.len());
        let mut odd_tail_of_a: Vec<(u32, u32)> = Vec::new(); // odd gens of a, ascending
        for (g, e) in &a.0 {
            if self.gens[*g as usize].is_odd() {
                odd_tail_of_a.push((*g, *e));
            }
        }
        for (g, _e) in &b.0 {
            if self.gens[*g as usize].is_odd() {
                // crossings with odd factors of a having id > g; odd
                // exponents never exceed 1 in a canonical word
                let crossings: u32 = odd_tail_of_a
                    .iter()
                    .filter(|(ga, _)| *ga > *g)
                    .map(|(_, ea)| *ea)
                    .sum();
                if crossings % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.0.len() || j < b.0.len() {
            let take_a = match (a.0.get(i), b.0.get(j)) {
                (Some((ga, _)), Some((gb, _))) => ga <= gb,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!(),
            };
            let (g, e) = if take_a {
                let v = a.0[i];
                i += 1;
                v
            } else {
                let v = b.0[j];
                j += 1;
                v
            };
            match out.last_mut() {
                Some((last, acc)) if *last == g => {
                    if self.gens[g as usize].is_odd() {
                        return None;
                    }
                    *acc += e;
                }
                _ => out.push((g, e)),
            }
        }
        Some((Word(out), sign))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                if let Some((w, s)) = self.word_mul(wa, wb) {
                    out.add_term(w, ca * cb * BigRational::from_integer(s.into()));
                }
            }
        }
        out
    }

    /// Derivation extension of the generator differentials.
    pub fn apply_diff(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &p.terms {
            let dw = self.word_diff(w);
            out = out.add(&dw.scale(c));
        }
        out
    }

    fn word_diff(&self, w: &Word) -> Poly {
        let mut out = Poly::zero();
        for (idx, (g, e)) in w.0.iter().enumerate() {
            let dg = &self.diff[*g as usize];
            if dg.is_zero() {
                continue;
            }
            let g_odd = self.gens[*g as usize].is_odd();
            for copy in 0..*e {
                // prefix = factors before this copy
                let mut prefix = Word(w.0[..idx].to_vec());
                if copy > 0 {
                    prefix.0.push((*g, copy));
                }
                let mut suffix = Word(Vec::new());
                let remaining = e - copy - 1;
                if remaining > 0 {
                    suffix.0.push((*g, remaining));
                }
                suffix.0.extend_from_slice(&w.0[idx + 1..]);
                let prefix_odd = self.word_is_odd(&prefix);
                let sign = if prefix_odd { -1 } else { 1 };
                let _ = g_odd; // odd gens always have e == 1, handled uniformly
                let left = Poly::from_word(prefix, BigRational::from_integer(sign.into()));
                let piece = self.mul(&self.mul(&left, dg), &Poly::from_word(
                    suffix,
                    BigRational::from_integer(1.into()),
                ));
                out = out.add(&piece);
            }
        }
        out
    }

    /// All words of exactly the target tridegree, in a deterministic
    /// (exponent-lexicographic) order. Errors if the count exceeds `cap`.
    pub fn monomials_of(&self, target: Tri, cap: usize) -> Result<Vec<Word>> {
        let sign = self.fiber_weight_sign();
        let n_fiber = self.gens.len() - self.n_base;
        if n_fiber == 0 || sign == 0 {
            if target.w != 0 || target.h != 0 {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            let mut scratch = Vec::new();
            self.enumerate_base_into(target.d, &[], &mut scratch, &mut out, target, cap)?;
            return Ok(out);
        }
        let count = target.w * sign;
        if count < 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut fiber: Vec<(u32, u32)> = Vec::new();
        self.enumerate_fiber(
            self.n_base,
            count as u32,
            tri(target.h, 0, target.d),
            &mut fiber,
            &mut out,
            target,
            cap,
        )?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_fiber(
        &self,
        gen: usize,
        remaining_count: u32,
        remaining: Tri, // h and d still to realize (w folded into the count)
        fiber: &mut Vec<(u32, u32)>,
        out: &mut Vec<Word>,
        target: Tri,
        cap: usize,
    ) -> Result<()> {
        if gen == self.gens.len() {
            if remaining_count != 0 || remaining.h != 0 || remaining.d < 0 {
                return Ok(());
            }
            let mut scratch: Vec<(u32, u32)> = Vec::new();
            self.enumerate_base_into(remaining.d, fiber, &mut scratch, out, target, cap)?;
            return Ok(());
        }
        let spec = &self.gens[gen];
        let max_e = if spec.is_odd() { remaining_count.min(1) } else { remaining_count };
        for e in 0..=max_e {
            if e > 0 {
                fiber.push((gen as u32, e));
            }
            let used = spec.deg.scale(e as i32);
            self.enumerate_fiber(
                gen + 1,
                remaining_count - e,
                tri(remaining.h - used.h, 0, remaining.d - used.d),
                fiber,
                out,
                target,
                cap,
            )?;
            if e > 0 {
                fiber.pop();
            }
        }
        Ok(())
    }

    /// Append base exponent vectors of weighted degree `d` in front of the
    /// fixed fiber part, pushing completed words into `out`.
    fn enumerate_base_into(
        &self,
        d: i32,
        fiber: &[(u32, u32)],
        scratch: &mut Vec<(u32, u32)>,
        out: &mut Vec<Word>,
        target: Tri,
        cap: usize,
    ) -> Result<()> {
        fn rec(
            pres: &Presentation,
            gen: usize,
            d: i32,
            fiber: &[(u32, u32)],
            scratch: &mut Vec<(u32, u32)>,
            out: &mut Vec<Word>,
            target: Tri,
            cap: usize,
        ) -> Result<()> {
            if d == 0 && gen <= pres.n_base {
                let mut word: Vec<(u32, u32)> = scratch.clone();
                word.extend_from_slice(fiber);
                if out.len() >= cap {
                    return Err(Error::Resource {
                        h: target.h,
                        w: target.w,
                        d: target.d,
                        cap,
                    });
                }
                out.push(Word(word));
                return Ok(());
            }
            if gen >= pres.n_base || d < 0 {
                return Ok(());
            }
            let wt = pres.gens[gen].deg.d;
            let max_e = d / wt;
            for e in 0..=max_e {
                if e > 0 {
                    scratch.push((gen as u32, e as u32));
                }
                rec(pres, gen + 1, d - e * wt, fiber, scratch, out, target, cap)?;
                if e > 0 {
                    scratch.pop();
                }
            }
            Ok(())
        }
        if d < 0 {
            return Ok(());
        }
        rec(self, 0, d, fiber, scratch, out, target, cap)
    }

    pub fn display(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (w, c) in &p.terms {
            let mut s = String::new();
            if w.is_one() {
                s.push_str(&c.to_string());
            } else {
                if c != &BigRational::from_integer(1.into()) {
                    if c == &BigRational::from_integer((-1).into()) {
                        s.push('-');
                    } else {
                        s.push_str(&format!("{c}*"));
                    }
                }
                let factors: Vec<String> = w
                    .0
                    .iter()
                    .map(|(g, e)| {
                        let name = &self.gens[*g as usize].name;
                        if *e == 1 {
                            name.clone()
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
                s.push_str(&factors.join("*"));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q_from_i64;

    fn exterior_two() -> Presentation {
        // base x1, x2 (weight 1); odd a with d(a) = x1*b; even b closed
        let x1 = GenSpec { name: "x1".into(), deg: tri(0, 0, 1) };
        let x2 = GenSpec { name: "x2".into(), deg: tri(0, 0, 1) };
        let a = GenSpec { name: "a".into(), deg: tri(1, 1, 1) };
        let b = GenSpec { name: "b".into(), deg: tri(2, 1, 0) };
        Presentation::new(
            "E",
            vec![x1, x2],
            vec![
                (a, Poly::from_word(Word(vec![(0, 1), (3, 1)]), q_from_i64(1))),
                (b, Poly::zero()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rendering_uses_generator_names_and_folds_signs() {
        let e = exterior_two();
        let mut p = Poly::from_word(Word(vec![(0, 2), (2, 1)]), q_from_i64(-3));
        p = p.add(&Poly::from_word(Word::one(), q_from_i64(1)));
        p = p.add(&Poly::from_word(Word::gen(3), q_from_i64(1)));
        assert_eq!(e.show_poly(&p), "1 - 3*x1^2*a + b");
        assert_eq!(e.show_poly(&Poly::zero()), "0");
    }

    #[test]
    fn odd_square_is_zero_and_even_commutes() {
        let e = exterior_two();
        let a = Poly::gen(2);
        assert!(e.mul(&a, &a).is_zero());
        let b = Poly::gen(3); // even: h = 2
        assert_eq!(e.mul(&a, &b), e.mul(&b, &a));
        let odd = vec![false, false, true, false];
        assert!(normalize_factors(&[2, 2], &odd).is_none());
    }

    #[test]
    fn normalize_factors_counts_transpositions() {
        // two odd generators 1 and 2: swapping them flips the sign
        let odd = vec![false, true, true];
        let (w, s) = normalize_factors(&[2, 1], &odd).unwrap();
        assert_eq!(w, Word(vec![(1, 1), (2, 1)]));
        assert_eq!(s, -1);
        let (w, s) = normalize_factors(&[1, 2], &odd).unwrap();
        assert_eq!(w, Word(vec![(1, 1), (2, 1)]));
        assert_eq!(s, 1);
    }

    #[test]
    fn derivation_leibniz_on_product() {
        // d(x2*a) = x2*d(a); d(a*b) = d(a)*b
        let e = exterior_two();
        let xa = e.mul(&Poly::gen(1), &Poly::gen(2));
        assert_eq!(e.apply_diff(&xa), e.mul(&Poly::gen(1), &e.diff[2].clone()));
        let ab = e.mul(&Poly::gen(2), &Poly::gen(3));
        assert_eq!(e.apply_diff(&ab), e.mul(&e.diff[2].clone(), &Poly::gen(3)));
        // d^2 vanishes on a random-ish element
        let mix = xa.add(&ab).add(&Poly::gen(2).scale(&q_from_i64(7)));
        assert!(e.apply_diff(&e.apply_diff(&mix)).is_zero());
    }

    #[test]
    fn monomial_enumeration_by_tridegree() {
        let e = exterior_two();
        // degree (0,0,2): x1^2, x1*x2, x2^2
        let m = e.monomials_of(tri(0, 0, 2), 100).unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.contains(&Word(vec![(0, 2)])));
        assert!(m.contains(&Word(vec![(0, 1), (1, 1)])));
        // degree (1,1,1): a alone
        let m = e.monomials_of(tri(1, 1, 1), 100).unwrap();
        assert_eq!(m, vec![Word(vec![(2, 1)])]);
        // degree (3,2,1): a*b
        let m = e.monomials_of(tri(3, 2, 1), 100).unwrap();
        assert_eq!(m, vec![Word(vec![(2, 1), (3, 1)])]);
        // impossible weight
        assert!(e.monomials_of(tri(0, -1, 0), 100).unwrap().is_empty());
    }

    #[test]
    fn enumeration_cap_reports_tridegree() {
        let e = exterior_two();
        let err = e.monomials_of(tri(0, 0, 5), 3).unwrap_err();
        match err {
            Error::Resource { h, w, d, cap } => {
                assert_eq!((h, w, d, cap), (0, 0, 5, 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
