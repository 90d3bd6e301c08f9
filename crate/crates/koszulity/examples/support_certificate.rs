//! Certify that the cone of the localization unit is torsion: walk every
//! weight-zero cohomology class down the t-tower and record either the
//! power of t that kills it or its survival into the periodic range.
//!
//! For the cubic, the classes that die are exactly the multiples of the
//! section — a subspace in general position, visible only to span-level
//! accounting. Run with `cargo run --example support_certificate`.

use koszulity::constructions::SectionData;
use koszulity::dgmodule::FreeDgModule;
use koszulity::field::FieldKind;
use koszulity::scenario::parse_poly;
use koszulity::tperiodic::{localize, unit_support, ReducedWindow, StabOutcome};

fn main() -> koszulity::Result<()> {
    let weights = vec![1, 1, 1];
    let sections = vec![parse_poly("x1^3 + x2^3 + x3^3", weights.len())?];
    let sd = SectionData::new(&weights, &sections)?;
    let a = FreeDgModule::rank_one(sd.dual_algebra()?, "A");
    let rwin = ReducedWindow::new((-2, 1), (0, 5))?;

    let depth = match localize(&a, sd.dmax, &rwin, 3, FieldKind::Rational, 200_000)? {
        StabOutcome::Stable { certificate, .. } => certificate.depth,
        StabOutcome::Unstable { depth_tried, reason } => {
            println!("no stable depth up to {depth_tried}: {reason}");
            return Ok(());
        }
    };

    let rep = unit_support(&a, sd.dmax, &rwin, depth, FieldKind::Rational, 200_000)?;
    println!("torsion profile of the unit cone (stable depth {depth}):");
    for (shallow, died, step) in &rep.exponents {
        println!("  {died} classes at {shallow} annihilated by t^{step}");
    }
    let torsion: usize = rep.exponents.iter().map(|(_, n, _)| n).sum();
    println!(
        "\n{} torsion classes in total, maximal exponent {}",
        torsion, rep.max_exponent
    );
    println!("{} classes survive into the periodic range", rep.survivors);
    if rep.surjective() {
        println!("every stable class is reached from weight zero");
    } else {
        for ((u, v), n) in &rep.missed {
            println!("  {n} stable classes at (u={u}, v={v}) have no weight-zero antecedent");
        }
    }
    Ok(())
}
