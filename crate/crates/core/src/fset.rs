//! Subsets of `F_p` as occupancy bit-vectors, and the set families used in
//! experiments.
//!
//! All composite-set kernels live here. Sumsets are word-parallel: `S + T` is
//! the union over `s` of `T` rotated by `s`, and rotation of a `p`-bit vector
//! is two shifted ORs. Product sets have no such shortcut and scatter
//! element by element.

use std::collections::HashMap;
use std::fmt;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::rng::rng_from_seed;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpSet {
    ctx: FieldCtx,
    words: Vec<u64>,
    card: usize,
}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpSet(p={}, {{{}}})", self.ctx.p(), self)
    }
}

/// Comma-separated residues in ascending order, the same format the literal parser reads.
impl fmt::Display for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FpSet {
    pub fn empty(ctx: FieldCtx) -> Self {
        let n = (ctx.p() as usize).div_ceil(WORD);
        FpSet {
            ctx,
            words: vec![0; n],
            card: 0,
        }
    }

    pub fn full(ctx: FieldCtx) -> Self {
        let mut s = Self::empty(ctx);
        s.words.iter_mut().for_each(|w| *w = !0);
        s.clear_tail();
        s.card = ctx.p() as usize;
        s
    }

    pub fn singleton(ctx: FieldCtx, x: u64) -> Self {
        let mut s = Self::empty(ctx);
        s.insert(x % ctx.p());
        s
    }

    /// Builds a set from arbitrary integers, reducing each mod `p`. Duplicates collapse.
    pub fn from_reduced<I: IntoIterator<Item = u64>>(ctx: FieldCtx, items: I) -> Self {
        let mut s = Self::empty(ctx);
        for x in items {
            s.insert(x % ctx.p());
        }
        s
    }

    /// Builds a set from residues that must already lie in `[0, p)` and be distinct.
    pub fn from_elements(ctx: FieldCtx, items: &[u64]) -> Result<Self> {
        let mut s = Self::empty(ctx);
        for &x in items {
            if x >= ctx.p() {
                return Err(Error::BadSetLiteral(format!(
                    "{x} is not a residue mod {}",
                    ctx.p()
                )));
            }
            if !s.insert(x) {
                return Err(Error::BadSetLiteral(format!("duplicate element {x}")));
            }
        }
        Ok(s)
    }

    #[inline]
    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.card
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.card as u64 == self.ctx.p()
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        x < self.ctx.p() && self.words[x as usize / WORD] >> (x as usize % WORD) & 1 == 1
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn min_element(&self) -> Option<u64> {
        self.iter().next()
    }

    /// Returns true if `x` was newly inserted. `x` must be `< p`.
    pub(crate) fn insert(&mut self, x: u64) -> bool {
        debug_assert!(x < self.ctx.p());
        let (w, b) = (x as usize / WORD, x as usize % WORD);
        let fresh = self.words[w] >> b & 1 == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.card += 1;
        }
        fresh
    }

    pub(crate) fn remove(&mut self, x: u64) {
        if self.contains(x) {
            self.words[x as usize / WORD] &= !(1 << (x as usize % WORD));
            self.card -= 1;
        }
    }

    /// In-place union with a set over the same field.
    pub(crate) fn or_assign(&mut self, other: &FpSet) {
        debug_assert_eq!(self.ctx, other.ctx);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
        self.recount();
    }

    fn recount(&mut self) {
        self.card = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    fn clear_tail(&mut self) {
        let p = self.ctx.p() as usize;
        if !p.is_multiple_of(WORD) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (p % WORD)) - 1;
            }
        }
    }

    pub fn check_ctx(&self, other: &FpSet) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::CtxMismatch(self.ctx.p(), other.ctx.p()));
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &FpSet) -> bool {
        self.ctx == other.ctx
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &FpSet) -> Result<FpSet> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        out.or_assign(other);
        Ok(out)
    }

    pub fn intersect(&self, other: &FpSet) -> Result<FpSet> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
        out.recount();
        Ok(out)
    }

    /// `{λa : a ∈ self}`.
    pub fn dilate(&self, lambda: u64) -> FpSet {
        let f = self.ctx;
        let lambda = lambda % f.p();
        if lambda == 1 {
            return self.clone();
        }
        let mut out = FpSet::empty(f);
        if lambda == 0 {
            if !self.is_empty() {
                out.insert(0);
            }
            return out;
        }
        for x in self.iter() {
            out.insert(f.mul(lambda, x));
        }
        out
    }

    /// `{-a : a ∈ self}`.
    pub fn negate(&self) -> FpSet {
        let f = self.ctx;
        let mut out = FpSet::empty(f);
        for x in self.iter() {
            out.insert(f.neg(x));
        }
        out
    }

    /// `{a + t : a ∈ self}`.
    pub fn translate(&self, t: u64) -> FpSet {
        let mut out = FpSet::empty(self.ctx);
        or_rotated(
            &mut out.words,
            &self.words,
            (t % self.ctx.p()) as usize,
            self.ctx.p() as usize,
        );
        out.recount();
        out
    }

    /// Sumset `{s + t}`.
    pub fn sumset(&self, other: &FpSet) -> Result<FpSet> {
        self.check_ctx(other)?;
        let (small, big) = if self.card <= other.card {
            (self, other)
        } else {
            (other, self)
        };
        let p = self.ctx.p() as usize;
        let mut out = FpSet::empty(self.ctx);
        for s in small.iter() {
            or_rotated(&mut out.words, &big.words, s as usize, p);
            // cheap fullness probe: only recount when the last word is saturated
            if out.words.iter().all(|&w| w == !0 || w == tail_mask(p)) {
                out.recount();
                if out.is_full() {
                    return Ok(out);
                }
            }
        }
        out.recount();
        Ok(out)
    }

    /// Difference set `{s - t}`.
    pub fn difference_set(&self, other: &FpSet) -> Result<FpSet> {
        self.check_ctx(other)?;
        self.sumset(&other.negate())
    }

    /// Product set `{s · t}`.
    pub fn product_set(&self, other: &FpSet) -> Result<FpSet> {
        self.check_ctx(other)?;
        let f = self.ctx;
        let (small, big) = if self.card <= other.card {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = FpSet::empty(f);
        for s in small.iter() {
            if s == 0 {
                if !big.is_empty() {
                    out.insert(0);
                }
                continue;
            }
            for t in big.iter() {
                out.insert(f.mul(s, t));
            }
            if out.is_full() {
                break;
            }
        }
        Ok(out)
    }
}

fn tail_mask(p: usize) -> u64 {
    if p.is_multiple_of(WORD) {
        !0
    } else {
        (1u64 << (p % WORD)) - 1
    }
}

/// `dst |= rotate(src, s)` where bit `i` of `src` lands on bit `(i + s) mod p`.
pub(crate) fn or_rotated(dst: &mut [u64], src: &[u64], s: usize, p: usize) {
    debug_assert!(s < p);
    if s == 0 {
        for (d, x) in dst.iter_mut().zip(src) {
            *d |= *x;
        }
        return;
    }
    or_shift_up(dst, src, s);
    if let Some(last) = dst.last_mut() {
        *last &= tail_mask(p);
    }
    or_shift_down(dst, src, p - s);
}

/// `dst |= src << k` (towards higher bit indices), truncated at the vector length.
fn or_shift_up(dst: &mut [u64], src: &[u64], k: usize) {
    let n = dst.len();
    let (ws, bs) = (k / WORD, k % WORD);
    if ws >= n {
        return;
    }
    if bs == 0 {
        for i in ws..n {
            dst[i] |= src[i - ws];
        }
    } else {
        dst[ws] |= src[0] << bs;
        for (j, d) in dst[ws + 1..].iter_mut().enumerate() {
            *d |= (src[j + 1] << bs) | (src[j] >> (WORD - bs));
        }
    }
}

/// `dst |= src >> k` (towards lower bit indices).
fn or_shift_down(dst: &mut [u64], src: &[u64], k: usize) {
    let n = dst.len();
    let (ws, bs) = (k / WORD, k % WORD);
    if ws >= n {
        return;
    }
    if bs == 0 {
        for i in 0..n - ws {
            dst[i] |= src[i + ws];
        }
    } else {
        for (i, d) in dst[..n - ws].iter_mut().enumerate() {
            let j = i + ws;
            let hi = if j + 1 < n {
                src[j + 1] << (WORD - bs)
            } else {
                0
            };
            *d |= (src[j] >> bs) | hi;
        }
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some((self.idx * WORD + b) as u64);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a FpSet {
    type Item = u64;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// How a set is generated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetFamily {
    /// Uniform `size`-subset of `F_p`, drawn by a seeded partial Fisher-Yates shuffle.
    Random,
    /// `{start, start+1, …, start+size-1}` mod p. The interval `[a+1, a+b]` is
    /// `start = a+1, size = b`; the symmetric interval `[-H, H]` is
    /// `start = p-H, size = 2H+1`.
    Interval { start: u64 },
    /// `{start · ratio^i : 0 ≤ i < size}`; repeats collapse, so the result may be smaller than `size`.
    Geometric { start: u64, ratio: u64 },
    /// Fixed residues; `size` is ignored.
    Explicit(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamilySpec {
    pub family: SetFamily,
    pub size: usize,
    pub seed: u64,
}

impl SetFamilySpec {
    pub fn random(size: usize, seed: u64) -> Self {
        SetFamilySpec {
            family: SetFamily::Random,
            size,
            seed,
        }
    }

    pub fn interval(start: u64, size: usize) -> Self {
        SetFamilySpec {
            family: SetFamily::Interval { start },
            size,
            seed: 0,
        }
    }

    /// `[-h, h]` in signed representatives, canonicalized to residues.
    pub fn centered(ctx: FieldCtx, h: u64) -> Self {
        Self::interval(ctx.reduce(-(h as i64)), 2 * h as usize + 1)
    }

    pub fn geometric(start: u64, ratio: u64, size: usize) -> Self {
        SetFamilySpec {
            family: SetFamily::Geometric { start, ratio },
            size,
            seed: 0,
        }
    }

    pub fn explicit(elements: Vec<u64>) -> Self {
        let size = elements.len();
        SetFamilySpec {
            family: SetFamily::Explicit(elements),
            size,
            seed: 0,
        }
    }

    /// The same family with a different target size and seed.
    pub fn with_size_seed(&self, size: usize, seed: u64) -> Self {
        SetFamilySpec {
            family: self.family.clone(),
            size,
            seed,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.family {
            SetFamily::Random => "random",
            SetFamily::Interval { .. } => "interval",
            SetFamily::Geometric { .. } => "geometric",
            SetFamily::Explicit(_) => "explicit",
        }
    }
}

pub fn gen_set(ctx: FieldCtx, spec: &SetFamilySpec) -> Result<FpSet> {
    let p = ctx.p();
    if !matches!(spec.family, SetFamily::Explicit(_)) && spec.size as u64 > p {
        return Err(Error::SizeTooLarge { size: spec.size, p });
    }
    match &spec.family {
        SetFamily::Random => {
            let mut rng = rng_from_seed(spec.seed);
            // sparse Fisher-Yates: positions not in `moved` hold their own index
            let mut moved: HashMap<u64, u64> = HashMap::with_capacity(spec.size * 2);
            let mut out = FpSet::empty(ctx);
            for i in 0..spec.size as u64 {
                let j = rng.gen_range(i..p);
                let at_j = moved.get(&j).copied().unwrap_or(j);
                let at_i = moved.get(&i).copied().unwrap_or(i);
                moved.insert(j, at_i);
                out.insert(at_j);
            }
            Ok(out)
        }
        SetFamily::Interval { start } => Ok(FpSet::from_reduced(
            ctx,
            (0..spec.size as u64).map(|i| (start % p) + i),
        )),
        SetFamily::Geometric { start, ratio } => {
            if ratio % p == 0 {
                return Err(Error::BadRatio);
            }
            let mut out = FpSet::empty(ctx);
            let mut x = start % p;
            for _ in 0..spec.size {
                out.insert(x);
                x = ctx.mul(x, ratio % p);
            }
            Ok(out)
        }
        SetFamily::Explicit(elems) => FpSet::from_elements(ctx, elems),
    }
}

/// Parses a set literal such as `0,1,4` (whitespace ignored, duplicates rejected).
pub fn parse_set_literal(ctx: FieldCtx, src: &str) -> Result<FpSet> {
    let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::BadSetLiteral("empty set literal".into()));
    }
    let elems = cleaned
        .split(',')
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| Error::BadSetLiteral(format!("`{tok}` is not a nonnegative integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    FpSet::from_elements(ctx, &elems)
}

/// Parses a generator spec `kind:key=value,...` into a [`SetFamilySpec`].
///
/// Kinds: `random:size=N[,seed=S]`, `interval:size=N[,start=A]`,
/// `centered:h=H`, `geometric:size=N[,start=A][,ratio=R]`, `explicit:0,1,4`.
pub fn parse_family_spec(ctx: FieldCtx, src: &str) -> Result<SetFamilySpec> {
    let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let (kind, params) = cleaned
        .split_once(':')
        .ok_or_else(|| Error::BadSetLiteral(format!("`{src}` has no `kind:` prefix")))?;
    if kind == "explicit" {
        return Ok(SetFamilySpec::explicit(
            parse_set_literal(ctx, params)?.to_vec(),
        ));
    }
    let mut kv = HashMap::new();
    for item in params.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::BadSetLiteral(format!("`{item}` is not key=value")))?;
        let v: u64 = v
            .parse()
            .map_err(|_| Error::BadSetLiteral(format!("`{v}` is not a nonnegative integer")))?;
        kv.insert(k.to_string(), v);
    }
    let get = |k: &str| kv.get(k).copied();
    let need = |k: &str| get(k).ok_or_else(|| Error::BadSetLiteral(format!("{kind} needs `{k}=`")));
    let spec = match kind {
        "random" => SetFamilySpec::random(need("size")? as usize, get("seed").unwrap_or(0)),
        "interval" => SetFamilySpec::interval(get("start").unwrap_or(1), need("size")? as usize),
        "centered" => SetFamilySpec::centered(ctx, need("h")?),
        "geometric" => SetFamilySpec::geometric(
            get("start").unwrap_or(1),
            get("ratio").unwrap_or(2),
            need("size")? as usize,
        ),
        other => return Err(Error::BadSetLiteral(format!("unknown set kind `{other}`"))),
    };
    Ok(spec)
}

/// Parses either a literal (`0,1,4`) or a generator spec (`random:size=8,seed=1`).
pub fn parse_set_spec(ctx: FieldCtx, src: &str) -> Result<FpSet> {
    if src.contains(':') {
        gen_set(ctx, &parse_family_spec(ctx, src)?)
    } else {
        parse_set_literal(ctx, src)
    }
}
