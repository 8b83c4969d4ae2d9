//! Prime-field contexts: construction, arithmetic, inverses.

use fpspectra::{make_field, Error};

fn main() -> fpspectra::Result<()> {
    let f = make_field(10007)?;
    let x = 1234;
    let inv = f.inv(x)?;
    println!("{x}^-1 = {inv} mod {}  (check: {})", f.p(), f.mul(x, inv));
    println!("2^10006 = {}", f.pow(2, 10006));
    println!("-5 reduces to {}", f.reduce(-5));
    println!("22! = {}", f.factorial(22));

    for p in [9, 2, 1 << 31] {
        match make_field(p) {
            Err(e @ (Error::NotPrime(_) | Error::Overflow(_))) => println!("p = {p}: {e}"),
            other => println!("p = {p}: unexpected {other:?}"),
        }
    }
    Ok(())
}
