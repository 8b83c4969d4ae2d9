//! Permanent spectra for growing d, against the rank-structured certificate.

use fpspectra::{make_field, parse_set_spec, per_rank_structured, per_spectrum, SpectrumOptions};

fn main() -> fpspectra::Result<()> {
    let ctx = make_field(101)?;
    let a = parse_set_spec(ctx, "random:size=3,seed=11")?;
    println!("A = {{{a}}}");
    for d in 2..=5 {
        let exact = per_spectrum(&a, d, &SpectrumOptions::unlimited())?;
        let cert = per_rank_structured(&a, d)?;
        assert!(cert.subset.is_subset(&exact.values));
        println!(
            "d={d}: |P_d| = {:>3}   certificate {:>3}  via {}",
            exact.card(),
            cert.card(),
            cert.formula
        );
    }
    Ok(())
}
