//! Apply the two duality functors in sequence and verify that the round
//! trip preserves the cohomology table on the common window.
//!
//! The forward functor turns a module over the section algebra into one
//! over the dual algebra by dualizing the free resolution windowwise; the
//! backward functor returns. Run with `cargo run --example duality_roundtrip`.

use koszulity::complex::Materialized;
use koszulity::constructions::{koszul_f, koszul_g, FunctorWindows, SectionData};
use koszulity::dgmodule::FreeDgModule;
use koszulity::field::FieldKind;
use koszulity::grading::Window;
use koszulity::scenario::parse_poly;

fn main() -> koszulity::Result<()> {
    let weights = vec![1, 1];
    let sections = vec![parse_poly("x1*x2", weights.len())?];
    let sd = SectionData::new(&weights, &sections)?;
    let b_alg = sd.section_algebra()?;
    let a_alg = sd.dual_algebra()?;
    let b_one = FreeDgModule::rank_one(b_alg.clone(), "B");

    // windows: the duals live in negative weight, the return trip back in
    // nonnegative weight
    let gwin = Window::new((-2, 2), (0, 2), (0, 4))?;
    let fwin = Window::new((-3, 3), (-6, 1), (-2 * sd.dmax - 1, 4))?;
    let fb = koszul_f(&sd, &b_one, &a_alg, &FunctorWindows { direct: fwin, composite: Some(gwin) })?;
    println!(
        "F(B): {} generators over {} on {fwin}",
        fb.gens.len(),
        a_alg.name
    );
    let gfb = koszul_g(&sd, &fb, &b_alg, gwin)?;
    println!("G(F(B)): {} generators over {}", gfb.gens.len(), b_alg.name);

    let tris: Vec<_> = gwin.iter().collect();
    let mat_b = Materialized::build(&b_one, &tris, FieldKind::Rational, 100_000)?;
    let mat_rt = Materialized::build(&gfb, &tris, FieldKind::Rational, 100_000)?;
    mat_rt.check_d_squared()?;
    let tb = mat_b.cohomology_table()?;
    let trt = mat_rt.cohomology_table()?;

    match tb.first_mismatch(&trt) {
        None => println!(
            "round trip agrees with the identity on {} common tridegrees",
            tb.common_region_size(&trt)
        ),
        Some((t, a, b)) => println!("MISMATCH at {t}: original {a}, round trip {b}"),
    }

    println!("\nnonzero entries of the round-trip table:");
    for (t, dim) in &trt.dims {
        if *dim > 0 {
            println!("  H at {t} = {dim}");
        }
    }
    Ok(())
}
