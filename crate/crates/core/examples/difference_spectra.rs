//! F_2 and G_2: spectra of X - Y for 2x2 matrices X, Y over A.

use fpspectra::{diff_det_spectrum_f2, diff_per_spectrum_g2, gen_set, make_field, SetFamilySpec};

fn main() -> fpspectra::Result<()> {
    let ctx = make_field(1009)?;
    println!(
        "{:>4} {:>6} {:>6} {:>10}",
        "|A|", "|F2|", "|G2|", "|A|^1.77"
    );
    for size in [3, 5, 8, 12, 18] {
        let a = gen_set(ctx, &SetFamilySpec::random(size, 42))?;
        let f2 = diff_det_spectrum_f2(&a)?;
        let g2 = diff_per_spectrum_g2(&a)?;
        let bound = (size as f64).powf(7.0 / 4.0 + 1.0 / 60.0);
        println!("{size:>4} {:>6} {:>6} {bound:>10.1}", f2.len(), g2.len());
    }
    Ok(())
}
