//! Point-line incidences and the sum-product bridge.

use fpspectra::incidence::{
    check_incidence_bound, check_sum_product_bridge, GridPoints, LineFamily,
};
use fpspectra::{gen_set, make_field, SetFamilySpec};

fn main() -> fpspectra::Result<()> {
    let ctx = make_field(1009)?;
    let a = gen_set(ctx, &SetFamilySpec::random(12, 5))?;

    // (A+A) x AA against the lines y = s(x - b), s in A, b in A.
    let grid = GridPoints::new(a.sumset(&a)?, a.product_set(&a)?)?;
    let lines = LineFamily::new(&a, &a)?;
    let r = check_incidence_bound(&grid, &lines)?;
    println!(
        "I = {} on {}x{} points and {} lines; rhs {:.1}, ratio {:.3}, hypotheses ok: {}",
        r.incidences, r.p1, r.p2, r.lines, r.rhs, r.ratio, r.hypothesis_ok
    );

    let b = check_sum_product_bridge(&a, &a, &a)?;
    println!(
        "|A+A||AA| = {} vs |A|^2.4 = {:.1}; I = {} >= {}",
        b.measured, b.bound, b.incidences, b.incidence_lower
    );
    Ok(())
}
