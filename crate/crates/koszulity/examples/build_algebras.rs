//! Construct the two dual dg algebras and the section Koszul complex for a
//! weighted section tuple, and print their generators and differentials.
//!
//! The input is the cubic x1^3 + x2^3 + x3^3 over three weight-one
//! variables. Run with `cargo run --example build_algebras`.

use koszulity::constructions::SectionData;
use koszulity::scenario::parse_poly;

fn main() -> koszulity::Result<()> {
    let weights = vec![1, 1, 1];
    let sections = vec![parse_poly("x1^3 + x2^3 + x3^3", weights.len())?];
    let sd = SectionData::new(&weights, &sections)?;
    println!(
        "base: {} variables, section degrees {:?}, top degree {}",
        sd.n, sd.degs, sd.dmax
    );

    for alg in [sd.section_algebra()?, sd.dual_algebra()?] {
        println!("\nalgebra {}", alg.name);
        for (i, g) in alg.gens.iter().enumerate() {
            let parity = if g.is_odd() { "odd" } else { "even" };
            let d = &alg.diff[i];
            if d.is_zero() {
                println!("  {:4} {}  {parity}, closed", g.name, g.deg);
            } else {
                println!(
                    "  {:4} {}  {parity}, d({}) = {}",
                    g.name,
                    g.deg,
                    g.name,
                    alg.show_poly(d)
                );
            }
        }
    }

    // The Koszul complex of the section tuple: one generator per subset of
    // the sections, differential by alternating contraction.
    let k = sd.koszul_complex()?;
    println!("\nmodule {} over {}", k.name, k.algebra.name);
    for (j, g) in k.gens.iter().enumerate() {
        let terms: Vec<String> = k
            .diff
            .iter()
            .filter(|((_, s), _)| *s == j)
            .map(|((t, _), p)| format!("({})*{}", k.algebra.show_poly(p), k.gens[*t].name))
            .collect();
        if terms.is_empty() {
            println!("  {:8} {}  closed", g.name, g.deg);
        } else {
            println!("  {:8} {}  d = {}", g.name, g.deg, terms.join(" + "));
        }
    }
    Ok(())
}
