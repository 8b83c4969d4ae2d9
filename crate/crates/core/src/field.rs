//! Arithmetic in the prime field `F_p` for odd primes `p < 2^31`.
//!
//! Residues are stored as `u64` in `[0, p)`. Because `p < 2^31`, the product of
//! two residues fits in 64 bits and every operation reduces with a single `%`.

use crate::error::{Error, Result};

/// Upper bound (exclusive) on supported moduli.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Validated odd prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    p: u64,
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::Overflow(p));
        }
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldCtx { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// `n! mod p`.
    pub fn factorial(&self, n: u64) -> u64 {
        (1..=n).fold(1 % self.p, |acc, k| self.mul(acc, k % self.p))
    }
}

/// Free-function constructor mirroring [`FieldCtx::new`].
pub fn make_field(p: u64) -> Result<FieldCtx> {
    FieldCtx::new(p)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    // The first twelve primes are a witness set valid for all n < 3.3 * 10^24.
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
    }

    #[test]
    fn constructor_accepts_odd_primes_only() {
        assert_eq!(make_field(7).unwrap().p(), 7);
        assert_eq!(make_field(9), Err(Error::NotPrime(9)));
        assert_eq!(make_field(2), Err(Error::NotPrime(2)));
        assert_eq!(make_field(1), Err(Error::NotPrime(1)));
        assert_eq!(make_field(1 << 31), Err(Error::Overflow(1 << 31)));
        assert!(make_field(2_147_483_647).is_ok());
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        // strong pseudoprimes to several small bases
        for n in [
            3_215_031_751u64,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
        ] {
            assert!(!is_prime(n));
        }
    }

    #[test]
    fn small_examples() {
        let f = make_field(7).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3).unwrap(), 5);
        assert_eq!(f.inv(0), Err(Error::DivisionByZero));
        assert_eq!(make_field(5).unwrap().pow(2, 4), 1);
        assert_eq!(f.factorial(3), 6);
        assert_eq!(f.factorial(7), 0);
        assert_eq!(f.reduce(-2), 5);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [3u64, 5, 7, 101, 1009] {
            let f = make_field(p).unwrap();
            for a in 0..p {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.pow(a, p - 1), 1);
                }
            }
        }
    }

    #[test]
    fn fermat_for_larger_prime() {
        let f = make_field(9973).unwrap();
        assert!((1..9973).all(|a| f.pow(a, 9972) == 1));
    }
}
