//! Scan presets: what each scan measures, the exponent it is compared
//! against, and the `|A| ≤ p^θ` window in which the statement applies.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exponent = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    /// `f_2(A) ≫ |A|^{3/2}` for `|A| ≤ p^{2/3}`.
    Thm1i,
    /// Even `d ≥ 4`: `f_d(A) ≳ |A|^{3 + 1/45 - 137/(45·2^{d/2})}`.
    Thm1ii,
    /// `f_3(A) ≫ |A|^{7/4}` for `|A| ≤ p^{4/7}`.
    Thm2i,
    /// Odd `d ≥ 5`: `f_d(A) ≳ |A|^{5/2 + 1/90 - 137/(45·2^{(d+1)/2})}`.
    Thm2ii,
    /// `g_2(A) ≫ |A|^{3/2}` for `|A| ≤ p^{2/3}`.
    Thm3,
    /// `g_d(A) ≫ |A|^{2 - 1/6 - (1/3)(2/5)^{d-2}}` for `|A| ≤ p^{1/2}`.
    Thm4,
    /// `|F_2(A)|, |G_2(A)| ≳ |A|^{7/4 + 1/60}` for `|A| ≤ p^{9/16}`.
    Thm5,
    /// `f_d(A) ≳ min(|A|^4, p)`.
    Conj1,
    /// `g_d(A) ≥ min(|A|^2, p)`.
    Conj2,
    /// Grid incidence bound on the `(A+A) × AA` configuration.
    Lemma7,
    /// `|A+B||AC| ≫ |A|^{8/5}|B|^{2/5}|C|^{2/5}` with `B = C = A`.
    Lemma8,
    /// `|A^d||dA| ≫ |A|^{8/3 - (2/3)(2/5)^{d-1}}`.
    Lemma9,
    /// `|A-A|^{18}|AA|^9 ≳ |A|^{32}`, reported as a 27th root.
    Lemma11,
    /// Largest `D_d(A, t)` over `t ≠ 0` against `|A|^{d²}/p`.
    Dist2,
}

pub const ALL_PRESETS: [Preset; 14] = [
    Preset::Thm1i,
    Preset::Thm1ii,
    Preset::Thm2i,
    Preset::Thm2ii,
    Preset::Thm3,
    Preset::Thm4,
    Preset::Thm5,
    Preset::Conj1,
    Preset::Conj2,
    Preset::Lemma7,
    Preset::Lemma8,
    Preset::Lemma9,
    Preset::Lemma11,
    Preset::Dist2,
];

/// How the `bound` column is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRule {
    /// `|A|^θ`
    Power(Exponent),
    /// `min(|A|^θ, p)`
    PowerClamped(Exponent),
    /// `|A|^{d²} / p`
    Equidistributed,
    /// `|P_1|^{3/4}|P_2|^{1/2}|L|^{3/4} + |L|`, evaluated on the configuration.
    IncidenceRhs,
}

/// Size hypothesis as a comparison between `|A|` and `p^θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    AtMost(Exponent),
    AtLeast(Exponent),
    None,
}

fn r(n: i64, d: i64) -> Exponent {
    Ratio::new(n, d)
}

fn pow2(k: usize) -> i64 {
    1i64 << k
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Thm1i => "thm1i",
            Preset::Thm1ii => "thm1ii",
            Preset::Thm2i => "thm2i",
            Preset::Thm2ii => "thm2ii",
            Preset::Thm3 => "thm3",
            Preset::Thm4 => "thm4",
            Preset::Thm5 => "thm5",
            Preset::Conj1 => "conj1",
            Preset::Conj2 => "conj2",
            Preset::Lemma7 => "lemma7",
            Preset::Lemma8 => "lemma8",
            Preset::Lemma9 => "lemma9",
            Preset::Lemma11 => "lemma11",
            Preset::Dist2 => "dist2",
        }
    }

    pub fn default_dim(self) -> usize {
        match self {
            Preset::Thm2i | Preset::Thm4 | Preset::Conj2 | Preset::Lemma9 => 3,
            Preset::Thm1ii | Preset::Conj1 => 4,
            Preset::Thm2ii => 5,
            _ => 2,
        }
    }

    /// Whether the preset reads `d` at all; the others always report `d = 2`.
    pub fn uses_dim(self) -> bool {
        matches!(
            self,
            Preset::Thm1ii
                | Preset::Thm2ii
                | Preset::Thm4
                | Preset::Conj1
                | Preset::Conj2
                | Preset::Lemma9
                | Preset::Dist2
        )
    }

    pub fn check_dim(self, d: usize) -> Result<()> {
        let ok = match self {
            Preset::Thm1ii => d >= 4 && d.is_multiple_of(2),
            Preset::Thm2ii => d >= 5 && d % 2 == 1,
            Preset::Thm4 => d >= 3,
            Preset::Thm1i
            | Preset::Thm3
            | Preset::Thm5
            | Preset::Lemma7
            | Preset::Lemma8
            | Preset::Lemma11 => d == 2,
            Preset::Thm2i => d == 3,
            _ => d >= 2,
        };
        if ok && d <= crate::spectra::MAX_DIM {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(format!(
                "preset {} does not accept d = {d}",
                self.name()
            )))
        }
    }

    pub fn bound_rule(self, d: usize) -> BoundRule {
        let di = d as i64;
        match self {
            Preset::Thm1i | Preset::Thm3 => BoundRule::Power(r(3, 2)),
            Preset::Thm1ii => BoundRule::Power(r(3, 1) + r(1, 45) - r(137, 45 * pow2(d / 2))),
            Preset::Thm2i => BoundRule::Power(r(7, 4)),
            Preset::Thm2ii => {
                BoundRule::Power(r(5, 2) + r(1, 90) - r(137, 45 * pow2(d.div_ceil(2))))
            }
            Preset::Thm4 => {
                BoundRule::Power(r(2, 1) - r(1, 6) - r(1, 3) * r(2, 5).pow(di as i32 - 2))
            }
            Preset::Thm5 => BoundRule::Power(r(7, 4) + r(1, 60)),
            Preset::Conj1 => BoundRule::PowerClamped(r(4, 1)),
            Preset::Conj2 => BoundRule::PowerClamped(r(2, 1)),
            Preset::Lemma7 => BoundRule::IncidenceRhs,
            Preset::Lemma8 => BoundRule::Power(r(8, 5) + r(2, 5) + r(2, 5)),
            Preset::Lemma9 => BoundRule::Power(r(8, 3) - r(2, 3) * r(2, 5).pow(di as i32 - 1)),
            Preset::Lemma11 => BoundRule::Power(r(32, 27)),
            Preset::Dist2 => BoundRule::Equidistributed,
        }
    }

    pub fn window(self, d: usize) -> Window {
        match self {
            Preset::Thm1i | Preset::Thm3 => Window::AtMost(r(2, 3)),
            Preset::Thm1ii => {
                let k = pow2(d / 2);
                Window::AtMost(r(45 * k, 136 * k - 137))
            }
            Preset::Thm2i => Window::AtMost(r(4, 7)),
            Preset::Thm2ii => {
                let k = pow2((d - 1) / 2);
                Window::AtMost(r(45 * k, 136 * k - 137))
            }
            Preset::Thm4 | Preset::Lemma8 | Preset::Lemma9 => Window::AtMost(r(1, 2)),
            Preset::Thm5 | Preset::Lemma11 => Window::AtMost(r(9, 16)),
            Preset::Dist2 => Window::AtLeast(r(d as i64, 2 * d as i64 - 1)),
            Preset::Conj1 | Preset::Conj2 | Preset::Lemma7 => Window::None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_PRESETS
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown preset `{s}`")))
    }
}

/// Exact test of `n ≤ p^θ` (as `n^den ≤ p^num`) for `θ ≥ 0`.
pub fn at_most_power(n: u64, p: u64, theta: Exponent) -> bool {
    let (num, den) = (*theta.numer(), *theta.denom());
    if num < 0 {
        return n == 0;
    }
    BigUint::from(n).pow(den as u32) <= BigUint::from(p).pow(num as u32)
}

pub fn window_holds(window: Window, n: u64, p: u64) -> bool {
    match window {
        Window::AtMost(theta) => at_most_power(n, p, theta),
        Window::AtLeast(theta) => {
            let (num, den) = (*theta.numer() as u32, *theta.denom() as u32);
            BigUint::from(n).pow(den) >= BigUint::from(p).pow(num)
        }
        Window::None => true,
    }
}

/// Largest `n ≤ target` with `n ≤ p^θ`.
pub fn clamp_to_window(target: u64, p: u64, window: Window) -> u64 {
    match window {
        Window::AtMost(theta) => {
            let guess = (p as f64).powf(to_f64(theta)).floor() as u64 + 1;
            let mut n = guess.min(target);
            while n > 1 && !at_most_power(n, p, theta) {
                n -= 1;
            }
            n
        }
        _ => target,
    }
}

/// `⌈p^θ⌉`, exactly: the least `n` with `n^den ≥ p^num`.
pub fn ceil_power(p: u64, theta: Exponent) -> u64 {
    let (num, den) = (*theta.numer() as u32, *theta.denom() as u32);
    let target = BigUint::from(p).pow(num);
    let reaches = |n: u64| BigUint::from(n).pow(den) >= target;
    let mut n = ((p as f64).powf(to_f64(theta)).floor() as u64).max(1);
    while !reaches(n) {
        n += 1;
    }
    while n > 1 && reaches(n - 1) {
        n -= 1;
    }
    n
}

pub fn to_f64(theta: Exponent) -> f64 {
    theta.numer().to_f64().unwrap_or(0.0) / theta.denom().to_f64().unwrap_or(1.0)
}

/// `|A|^θ`, with `0^θ = 0` and `n^0 = 1`.
pub fn power(n: usize, theta: Exponent) -> f64 {
    if theta.is_zero() {
        return 1.0;
    }
    if n == 1 || theta.is_one() {
        return n as f64;
    }
    (n as f64).powf(to_f64(theta))
}
