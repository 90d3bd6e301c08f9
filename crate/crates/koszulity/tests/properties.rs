//! Randomized invariants over small weighted section tuples: construction
//! validity, field-change semicontinuity, reindexing under shift and twist,
//! window-enlargement stability, localization determinism, and the scenario
//! polynomial grammar round trip.

use std::collections::BTreeMap;
use std::sync::Arc;

use koszulity::complex::Materialized;
use koszulity::constructions::{RawPoly, SectionData};
use koszulity::dgmodule::FreeDgModule;
use koszulity::field::FieldKind;
use koszulity::grading::{Tri, Window};
use koszulity::oracle::ring_monomials;
use koszulity::scenario::parse_poly;
use koszulity::tperiodic::{localize, ReducedWindow, StabOutcome};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

const CAP: usize = 50_000;
const BIG_PRIME: u64 = 1_000_000_007;

/// Raw material for a random section tuple: positive variable weights plus,
/// per section, a target degree and a cyclic supply of small coefficients.
#[derive(Debug, Clone)]
struct Case {
    weights: Vec<i32>,
    secs: Vec<(i32, Vec<i8>)>,
}

fn arb_case() -> impl Strategy<Value = Case> {
    (
        prop::collection::vec(1..=2i32, 1..=2),
        prop::collection::vec((1..=3i32, prop::collection::vec(-2..=2i8, 1..=6)), 1..=2),
    )
        .prop_map(|(weights, secs)| Case { weights, secs })
}

/// Build the section tuple, bumping each degree upward until monomials of
/// that weighted degree exist, and substituting a single monomial when the
/// coefficient supply cancels everything.
fn build_sd(case: &Case) -> Option<SectionData> {
    let mut sections: Vec<RawPoly> = Vec::new();
    for (e, seeds) in &case.secs {
        let mut deg = *e;
        let mut monos = Vec::new();
        for _ in 0..4 {
            monos = ring_monomials(&case.weights, deg).ok()?;
            if !monos.is_empty() {
                break;
            }
            deg += 1;
        }
        if monos.is_empty() {
            return None;
        }
        let mut poly: RawPoly = monos
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let c = i64::from(seeds[i % seeds.len()]);
                (m.clone(), BigRational::from_integer(BigInt::from(c)))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if poly.is_empty() {
            poly.push((
                monos[0].clone(),
                BigRational::from_integer(BigInt::from(1)),
            ));
        }
        sections.push(poly);
    }
    SectionData::new(&case.weights, &sections).ok()
}

fn small_tris() -> Vec<Tri> {
    Window::new((-2, 2), (-2, 1), (0, 4)).unwrap().iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Both algebras and the section Koszul complex validate: homogeneous
    /// differentials of degree (1,0,0) squaring to zero symbolically.
    #[test]
    fn random_sections_give_valid_constructions(case in arb_case()) {
        prop_assume!(build_sd(&case).is_some());
        let sd = build_sd(&case).unwrap();
        sd.section_algebra().unwrap();
        let a = sd.dual_algebra().unwrap();
        sd.koszul_complex().unwrap();
        FreeDgModule::rank_one(a, "A");
    }

    /// Reduction mod a large prime can only lower matrix ranks, so slice
    /// cohomology over F_p dominates the rational dimension pointwise.
    #[test]
    fn prime_field_cohomology_dominates_rational(case in arb_case()) {
        prop_assume!(build_sd(&case).is_some());
        let sd = build_sd(&case).unwrap();
        let m = FreeDgModule::rank_one(sd.dual_algebra().unwrap(), "A");
        let tris = small_tris();
        let mq = Materialized::build(&m, &tris, FieldKind::Rational, CAP).unwrap();
        let mp = Materialized::build(&m, &tris, FieldKind::Fp(BIG_PRIME), CAP).unwrap();
        for t in mq.safe_tris() {
            let dq = mq.cohomology_dim_at(t).unwrap();
            let dp = mp.cohomology_dim_at(t).unwrap();
            prop_assert!(dq <= dp, "at {t}: rational {dq} > mod-p {dp}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Translating a module by (h, w, d) relabels its cohomology table
    /// verbatim, including the odd-shift sign flip of the differential.
    #[test]
    fn translation_relabels_cohomology(case in arb_case(), h in -2..=2i32, n in -2..=2i32) {
        prop_assume!(build_sd(&case).is_some());
        let sd = build_sd(&case).unwrap();
        let base = FreeDgModule::rank_one(sd.dual_algebra().unwrap(), "A");
        let moved = base.shift(h).twist(n);
        let off = koszulity::grading::tri(-h, -n, 0);
        let tris = small_tris();
        let moved_tris: Vec<Tri> = tris.iter().map(|t| t.add(off)).collect();
        let mb = Materialized::build(&base, &tris, FieldKind::Rational, CAP).unwrap();
        let mm = Materialized::build(&moved, &moved_tris, FieldKind::Rational, CAP).unwrap();
        for t in mb.safe_tris() {
            let want = mb.cohomology_dim_at(t).unwrap();
            let got = mm.cohomology_dim_at(t.add(off)).unwrap();
            prop_assert_eq!(got, want, "at {} with offset {}", t, off);
        }
    }

    /// Enlarging the materialized region never changes the cohomology of a
    /// slice whose neighbours were already present: graded pieces are
    /// complete as computed, not window-truncated.
    #[test]
    fn window_enlargement_is_stable(case in arb_case()) {
        prop_assume!(build_sd(&case).is_some());
        let sd = build_sd(&case).unwrap();
        let m = FreeDgModule::rank_one(sd.dual_algebra().unwrap(), "A");
        let small = Window::new((-2, 2), (-2, 1), (0, 4)).unwrap();
        let big = Window::new((-3, 3), (-3, 2), (0, 5)).unwrap();
        let ms = Materialized::build(&m, &small.iter().collect::<Vec<_>>(), FieldKind::Rational, CAP).unwrap();
        let mbig = Materialized::build(&m, &big.iter().collect::<Vec<_>>(), FieldKind::Rational, CAP).unwrap();
        for t in ms.safe_tris() {
            prop_assert_eq!(
                ms.cohomology_dim_at(t).unwrap(),
                mbig.cohomology_dim_at(t).unwrap(),
                "at {}", t
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// The stabilized localization table does not depend on how much extra
    /// depth the caller allows beyond the structural bound.
    #[test]
    fn localization_table_independent_of_extra_depth(case in arb_case()) {
        prop_assume!(build_sd(&case).is_some());
        let sd = build_sd(&case).unwrap();
        let m = FreeDgModule::rank_one(sd.dual_algebra().unwrap(), "A");
        let rwin = ReducedWindow::new((-(sd.r as i32) - 1, 1), (0, 2)).unwrap();
        let run = |extra: i32| localize(&m, sd.dmax, &rwin, extra, FieldKind::Rational, CAP);
        match (run(0).unwrap(), run(2).unwrap()) {
            (StabOutcome::Stable { table: t0, .. }, StabOutcome::Stable { table: t2, .. }) => {
                prop_assert_eq!(t0.dims, t2.dims);
            }
            _ => prop_assert!(false, "localization did not stabilize"),
        }
    }
}

// ---------------------------------------------------------------------------
// polynomial grammar round trip

fn normal_form(p: &RawPoly) -> BTreeMap<Vec<u32>, BigRational> {
    let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (exps, c) in p {
        let entry = out.entry(exps.clone()).or_insert_with(BigRational::zero);
        *entry += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Render with fully explicit `*` and `^`, exercising unary minus on a
/// random prefix of the terms.
fn render(p: &RawPoly) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (exps, c)) in p.iter().enumerate() {
        let mut factors: Vec<String> = vec![c.to_string()];
        for (j, e) in exps.iter().enumerate() {
            if *e > 0 {
                factors.push(format!("x{}^{}", j + 1, e));
            }
        }
        let term = factors.join("*");
        if i == 0 {
            out = term;
        } else {
            out = format!("{out} + {term}");
        }
    }
    out
}

fn arb_raw_poly() -> impl Strategy<Value = (usize, RawPoly)> {
    (1..=3usize).prop_flat_map(|n| {
        let term = (
            prop::collection::vec(0..=3u32, n),
            -5..=5i64,
        );
        prop::collection::vec(term, 0..=5).prop_map(move |terms| {
            let poly: RawPoly = terms
                .into_iter()
                .map(|(e, c)| (e, BigRational::from_integer(BigInt::from(c))))
                .collect();
            (n, poly)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Rendering a random polynomial with explicit `*`/`^` and reparsing it
    /// recovers the same normal form (terms merged, zeros dropped).
    #[test]
    fn polynomial_grammar_round_trips((n, poly) in arb_raw_poly()) {
        let rendered = render(&poly);
        let parsed = parse_poly(&rendered, n).unwrap();
        prop_assert_eq!(normal_form(&parsed), normal_form(&poly), "source: {}", rendered);
    }
}

/// Arc identity of the underlying algebra is preserved through module
/// constructors, so mixed-module operations stay well-typed.
#[test]
fn module_constructors_share_algebra() {
    let sd = SectionData::new(
        &[1],
        &[vec![(vec![1], BigRational::from_integer(BigInt::from(1)))]],
    )
    .unwrap();
    let a = sd.dual_algebra().unwrap();
    let m = FreeDgModule::rank_one(Arc::clone(&a), "A");
    let s = m.shift(1);
    let t = m.twist(-1);
    let sum = s.direct_sum(&t, "S+T").unwrap();
    assert!(Arc::ptr_eq(&sum.algebra, &a));
}
