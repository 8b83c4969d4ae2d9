//! Parsing and evaluating set expressions over F_p.
//!
//!     cargo run --example set_expressions -- "(A-A)*(A-A) - A*A" 101 random:size=6,seed=7

use fpspectra::setexpr::{eval_expr_with_stats, Env};
use fpspectra::{make_field, parse_expr, parse_set_spec};

fn main() -> fpspectra::Result<()> {
    let mut args = std::env::args().skip(1);
    let src = args.next().unwrap_or_else(|| "A*A - A*A + 2#B".into());
    let p = args.next().and_then(|s| s.parse().ok()).unwrap_or(101);
    let a_spec = args.next().unwrap_or_else(|| "interval:size=5".into());

    let ctx = make_field(p)?;
    let mut env = Env::new();
    env.insert("A".into(), parse_set_spec(ctx, &a_spec)?);
    env.insert("B".into(), parse_set_spec(ctx, "geometric:size=4,ratio=3")?);

    let ast = parse_expr(&src)?;
    println!("parsed:  {ast}");
    for (name, set) in &env {
        println!("{name} = {{{set}}}");
    }
    let (value, stats) = eval_expr_with_stats(&ast, &env, ctx)?;
    println!(
        "|value| = {}  ({} pairwise ops)",
        value.len(),
        stats.pair_ops
    );
    println!("{value}");

    // Errors carry byte offsets.
    if let Err(e) = parse_expr("A + * B") {
        println!("bad input: {e}");
    }
    Ok(())
}
