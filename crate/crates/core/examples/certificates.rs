//! Chain certificates: lower bounds on f_d(A) without enumerating M_d(A).
//!
//!     cargo run --release --example certificates -- 10007 22

use fpspectra::{chain_certificate, gen_set, make_field, SetFamilySpec, SpectrumKind};

fn main() -> fpspectra::Result<()> {
    let mut args = std::env::args().skip(1);
    let p = args.next().and_then(|s| s.parse().ok()).unwrap_or(10007);
    let size = args.next().and_then(|s| s.parse().ok()).unwrap_or(22);

    let ctx = make_field(p)?;
    let a = gen_set(ctx, &SetFamilySpec::random(size, 1))?;
    for target in [SpectrumKind::Det, SpectrumKind::Per] {
        for d in 2..=8 {
            let c = chain_certificate(&a, d, target)?;
            // The formula re-evaluates to the same set from the bindings alone.
            assert_eq!(c.reevaluate()?, c.subset);
            println!(
                "{target:?} d={d}: {:>6} values, cost {:>9}  {}",
                c.card(),
                c.cost,
                c.formula
            );
        }
    }
    Ok(())
}
