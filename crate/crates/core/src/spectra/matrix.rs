use crate::error::{Error, Result};
use crate::field::FieldCtx;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

/// A square matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixView {
    ctx: FieldCtx,
    d: usize,
    entries: Vec<u64>,
}

impl MatrixView {
    /// Entries are reduced mod p.
    pub fn new(ctx: FieldCtx, d: usize, entries: Vec<u64>) -> Result<Self> {
        check_dim(d)?;
        if entries.len() != d * d {
            return Err(Error::ConfigInvalid(format!(
                "a {d}x{d} matrix needs {} entries, got {}",
                d * d,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|x| x % ctx.p()).collect();
        Ok(MatrixView { ctx, d, entries })
    }

    pub fn identity(ctx: FieldCtx, d: usize) -> Result<Self> {
        Self::new(
            ctx,
            d,
            (0..d * d).map(|i| u64::from(i % (d + 1) == 0)).collect(),
        )
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.d + j]
    }

    pub fn transpose(&self) -> MatrixView {
        let d = self.d;
        let entries = (0..d * d)
            .map(|k| self.entries[(k % d) * d + k / d])
            .collect();
        MatrixView {
            ctx: self.ctx,
            d,
            entries,
        }
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(d))
    }
}

pub fn det_value(m: &MatrixView) -> u64 {
    let mut work = m.entries.clone();
    det_in_place(m.ctx, m.d, &mut work)
}

pub fn per_value(m: &MatrixView) -> u64 {
    per_ryser(m.ctx, m.d, &m.entries)
}

/// Determinant of the `n x n` row-major matrix in `a` by Gaussian elimination
/// over `F_p`, pivoting on the first nonzero entry of each column. Destroys `a`.
pub(crate) fn det_in_place(f: FieldCtx, n: usize, a: &mut [u64]) -> u64 {
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for k in col..n {
                a.swap(piv * n + k, col * n + k);
            }
            det = f.neg(det);
        }
        let pv = a[col * n + col];
        det = f.mul(det, pv);
        let inv = f.inv(pv).expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = f.mul(a[r * n + col], inv);
            if factor == 0 {
                continue;
            }
            for k in col..n {
                let sub = f.mul(factor, a[col * n + k]);
                a[r * n + k] = f.sub(a[r * n + k], sub);
            }
        }
    }
    det
}

/// Permanent by Ryser's formula with Gray-code subset order:
/// `per(A) = (-1)^n Σ_{S ⊆ [n]} (-1)^{|S|} Π_i Σ_{j ∈ S} a_ij`.
pub(crate) fn per_ryser(f: FieldCtx, n: usize, a: &[u64]) -> u64 {
    if n == 0 {
        return 1 % f.p();
    }
    let mut row_sums = vec![0u64; n];
    let mut total = 0u64;
    let mut gray = 0u64;
    for k in 1u64..(1 << n) {
        let next = k ^ (k >> 1);
        let j = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << j) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s = if adding {
                f.add(*s, a[i * n + j])
            } else {
                f.sub(*s, a[i * n + j])
            };
        }
        gray = next;
        let prod = row_sums.iter().fold(1u64, |acc, &s| f.mul(acc, s));
        if gray.count_ones() % 2 == 1 {
            total = f.sub(total, prod);
        } else {
            total = f.add(total, prod);
        }
    }
    if n % 2 == 1 {
        f.neg(total)
    } else {
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::{Rng, SeedableRng};

    /// Definitional oracle: signed sum over all permutations.
    pub(crate) fn leibniz(f: FieldCtx, n: usize, a: &[u64], signed: bool) -> u64 {
        fn rec(
            f: FieldCtx,
            n: usize,
            a: &[u64],
            row: usize,
            used: &mut Vec<bool>,
            perm: &mut Vec<usize>,
            signed: bool,
        ) -> u64 {
            if row == n {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| perm[i] > perm[j])
                    .count();
                let prod = (0..n).fold(1, |acc, i| f.mul(acc, a[i * n + perm[i]]));
                return if signed && inversions % 2 == 1 {
                    f.neg(prod)
                } else {
                    prod
                };
            }
            let mut total = 0;
            for c in 0..n {
                if !used[c] {
                    used[c] = true;
                    perm.push(c);
                    total = f.add(total, rec(f, n, a, row + 1, used, perm, signed));
                    perm.pop();
                    used[c] = false;
                }
            }
            total
        }
        rec(f, n, a, 0, &mut vec![false; n], &mut Vec::new(), signed)
    }

    #[test]
    fn worked_examples() {
        let f7 = make_field(7).unwrap();
        let f5 = make_field(5).unwrap();
        let f11 = make_field(11).unwrap();
        assert_eq!(det_value(&MatrixView::identity(f7, 3).unwrap()), 1);
        assert_eq!(
            det_value(&MatrixView::new(f5, 2, vec![1, 1, 1, 1]).unwrap()),
            0
        );
        assert_eq!(
            det_value(&MatrixView::new(f7, 2, vec![1, 2, 3, 4]).unwrap()),
            5
        );
        assert_eq!(
            per_value(&MatrixView::new(f5, 2, vec![1, 1, 1, 1]).unwrap()),
            2
        );
        assert_eq!(
            per_value(&MatrixView::new(f11, 2, vec![1, 2, 3, 4]).unwrap()),
            10
        );
        assert_eq!(per_value(&MatrixView::identity(f7, 4).unwrap()), 1);
        assert_eq!(per_value(&MatrixView::new(f7, 3, vec![1; 9]).unwrap()), 6);
    }

    #[test]
    fn rejects_bad_shapes() {
        let f = make_field(7).unwrap();
        assert_eq!(
            MatrixView::new(f, 1, vec![1]),
            Err(Error::DimensionOutOfRange(1))
        );
        assert_eq!(
            MatrixView::new(f, 9, vec![0; 81]),
            Err(Error::DimensionOutOfRange(9))
        );
        assert!(MatrixView::new(f, 2, vec![1, 2, 3]).is_err());
    }

    #[test]
    fn matches_leibniz_on_random_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for &p in &[3u64, 7, 101, 65_521] {
            let f = make_field(p).unwrap();
            for d in 2..=5 {
                for _ in 0..200 {
                    let entries: Vec<u64> = (0..d * d).map(|_| rng.gen_range(0..p)).collect();
                    let m = MatrixView::new(f, d, entries.clone()).unwrap();
                    assert_eq!(det_value(&m), leibniz(f, d, &entries, true));
                    assert_eq!(per_value(&m), leibniz(f, d, &entries, false));
                    assert_eq!(det_value(&m.transpose()), det_value(&m));
                    assert_eq!(per_value(&m.transpose()), per_value(&m));
                }
            }
        }
    }

    #[test]
    fn small_minors() {
        let f = make_field(7).unwrap();
        assert_eq!(per_ryser(f, 1, &[4]), 4);
        assert_eq!(per_ryser(f, 0, &[]), 1);
    }
}
