//! Weights a ∈ (p^{-r}Z)^k and the partitions P_a indexing basis elements.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Polynomial algebra F_p[T_1..T_k] or its Laurent localization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Polynomial,
    Laurent,
}

impl Base {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "polynomial" | "poly" => Ok(Base::Polynomial),
            "laurent" => Ok(Base::Laurent),
            _ => Err(Error::Parse(format!("unknown base {s:?}"))),
        }
    }
}

/// a(i) = nums[i] / p^den with den minimal, so den = u(a).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    p: u64,
    den: u32,
    nums: Vec<i64>,
}

pub(crate) fn vp(mut x: i64, p: u64) -> u32 {
    let p = p as i64;
    let mut v = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

impl Weight {
    pub fn new(p: u64, nums: Vec<i64>, den: u32) -> Self {
        let mut w = Weight { p, den, nums };
        w.normalize();
        w
    }

    pub fn integral(p: u64, nums: Vec<i64>) -> Self {
        Weight::new(p, nums, 0)
    }

    pub fn zero(p: u64, k: usize) -> Self {
        Weight { p, den: 0, nums: vec![0; k] }
    }

    fn normalize(&mut self) {
        let p = self.p as i64;
        while self.den > 0 && self.nums.iter().all(|n| n % p == 0) {
            for n in self.nums.iter_mut() {
                *n /= p;
            }
            self.den -= 1;
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.nums.len()
    }

    pub fn u(&self) -> u32 {
        self.den
    }

    pub fn numerators(&self) -> &[i64] {
        &self.nums
    }

    pub fn is_integral(&self) -> bool {
        self.den == 0
    }

    pub fn is_zero_at(&self, i: usize) -> bool {
        self.nums[i] == 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nums.iter().all(|n| *n >= 0)
    }

    /// ν_p(a(i)), None for a(i) = 0.
    pub fn nu_at(&self, i: usize) -> Option<i32> {
        (self.nums[i] != 0).then(|| vp(self.nums[i], self.p) as i32 - self.den as i32)
    }

    /// ν(a|_I); None when a vanishes on I.
    pub fn nu_on(&self, idx: &[usize]) -> Option<i32> {
        idx.iter().filter_map(|i| self.nu_at(*i)).min()
    }

    pub fn nu(&self) -> Option<i32> {
        self.nu_on(&(0..self.k()).collect::<Vec<_>>())
    }

    /// a(i) p^e, which must be an integer.
    pub fn times_p_pow(&self, i: usize, e: i32) -> Result<i64> {
        let shift = e - self.den as i32;
        let p = self.p as i64;
        if shift >= 0 {
            Ok(self.nums[i] * p.pow(shift as u32))
        } else {
            let q = p.pow((-shift) as u32);
            if self.nums[i] % q != 0 {
                return Err(Error::Invalid(format!("{self} times p^{e} is not integral")));
            }
            Ok(self.nums[i] / q)
        }
    }

    /// p^e a.
    pub fn scale(&self, e: i32) -> Weight {
        let p = self.p as i64;
        if e >= 0 {
            let drop = (e as u32).min(self.den);
            let mul = p.pow(e as u32 - drop);
            Weight::new(self.p, self.nums.iter().map(|n| n * mul).collect(), self.den - drop)
        } else {
            Weight::new(self.p, self.nums.clone(), self.den + (-e) as u32)
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        let den = self.den.max(other.den);
        let p = self.p as i64;
        let nums = self
            .nums
            .iter()
            .zip(&other.nums)
            .map(|(a, b)| a * p.pow(den - self.den) + b * p.pow(den - other.den))
            .collect();
        Weight::new(self.p, nums, den)
    }

    /// The integral weight p^{u(a)} a as integers.
    pub fn integral_lift(&self) -> Vec<i64> {
        self.nums.clone()
    }

    fn cmp_at(&self, other: &Weight, i: usize) -> Ordering {
        let p = self.p as i128;
        let lhs = self.nums[i] as i128 * p.pow(other.den);
        let rhs = other.nums[i] as i128 * p.pow(self.den);
        lhs.cmp(&rhs)
    }

    pub fn max_entry_exceeds(&self, cap: i64) -> bool {
        let q = (self.p as i64).pow(self.den);
        self.nums.iter().any(|n| n.abs() > cap * q)
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k()
            .cmp(&other.k())
            .then_with(|| (0..self.k()).map(|i| self.cmp_at(other, i)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_entry(n: i64, p: u64, den: u32) -> String {
    if n == 0 {
        return "0".into();
    }
    let v = vp(n, p).min(den);
    let q = (p as i64).pow(den - v);
    let n = n / (p as i64).pow(v);
    if q == 1 {
        n.to_string()
    } else {
        format!("{n}/{q}")
    }
}

impl Weight {
    pub fn entries(&self) -> Vec<String> {
        self.nums.iter().map(|n| fmt_entry(*n, self.p, self.den)).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.entries().join(", "))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

const WEIGHT_LIMIT: usize = 2_000_000;

/// All weights with entries in p^{-r}Z ∩ [0, cap] (or [-cap, cap] for Laurent), in lexicographic order.
pub fn enumerate_weights(p: u64, k: usize, r: u32, cap: i64, base: Base) -> Result<Vec<Weight>> {
    let q = (p as i64).checked_pow(r).ok_or_else(|| Error::ResourceCap(format!("p^{r} overflows")))?;
    let hi = cap.checked_mul(q).ok_or_else(|| Error::ResourceCap("degree cap overflows".into()))?;
    let lo = match base {
        Base::Polynomial => 0,
        Base::Laurent => -hi,
    };
    let per = (hi - lo + 1).max(0) as usize;
    let total = per.checked_pow(k as u32).filter(|t| *t <= WEIGHT_LIMIT);
    let total = total.ok_or_else(|| Error::ResourceCap(format!("{per}^{k} weights exceed {WEIGHT_LIMIT}")))?;
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![lo; k];
    for _ in 0..total {
        out.push(Weight::new(p, cur.clone(), r));
        for slot in cur.iter_mut().rev() {
            if *slot < hi {
                *slot += 1;
                break;
            }
            *slot = lo;
        }
    }
    Ok(out)
}

/// (I_0, I_1, ..., I_n) with 0-based indices; I_0 may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl WeightPartition {
    /// Number of differential blocks, which is the form degree.
    pub fn degree(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn i0(&self) -> &[usize] {
        &self.blocks[0]
    }

    /// Greatest j with ν(a|_{I_j}) < 0, or 0.
    pub fn rho1(&self, w: &Weight) -> usize {
        (1..self.blocks.len()).filter(|j| matches!(w.nu_on(&self.blocks[*j]), Some(v) if v < 0)).max().unwrap_or(0)
    }

    /// Greatest j with ν(a|_{I_j}) < ∞, or 0.
    pub fn rho2(&self, w: &Weight) -> usize {
        (1..self.blocks.len()).filter(|j| w.nu_on(&self.blocks[*j]).is_some()).max().unwrap_or(0)
    }

    /// The blocks after I_0, with the first one moved into I_0.
    pub fn shift_down(&self) -> Option<WeightPartition> {
        if !self.blocks[0].is_empty() || self.blocks.len() < 2 {
            return None;
        }
        Some(WeightPartition { blocks: self.blocks[1..].to_vec() })
    }

    /// I_0 becomes the first differential block behind an empty I_0.
    pub fn shift_up(&self) -> Option<WeightPartition> {
        if self.blocks[0].is_empty() {
            return None;
        }
        let mut blocks = vec![Vec::new()];
        blocks.extend(self.blocks.iter().cloned());
        Some(WeightPartition { blocks })
    }

    /// 1-based listing such as ({1}, {2,3}) or (∅, {1}).
    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                if b.is_empty() {
                    "∅".to_string()
                } else {
                    format!("{{{}}}", b.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

impl Serialize for WeightPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
        one_based.serialize(s)
    }
}

/// The total order ⪯_a: by valuation (zero entries last), then by index.
pub fn order(w: &Weight) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..w.k()).collect();
    idx.sort_by_key(|i| (w.nu_at(*i).map_or((1, 0), |v| (0, v)), *i));
    idx
}

/// Whether `part` satisfies the three conditions for a, and for the polynomial base also
/// carries no block on which a vanishes.
pub fn is_admissible(w: &Weight, part: &WeightPartition, base: Base) -> bool {
    let ord = order(w);
    let pos = |i: usize| ord.iter().position(|j| *j == i).unwrap_or(usize::MAX);
    let mut seen: Vec<usize> = part.blocks.iter().flatten().copied().collect();
    seen.sort_unstable();
    if seen != (0..w.k()).collect::<Vec<_>>() || part.blocks[1..].iter().any(|b| b.is_empty()) {
        return false;
    }
    let key = |i: usize| w.nu_at(i).map_or(i64::MAX, i64::from);
    for pair in part.blocks.windows(2) {
        for x in &pair[0] {
            for y in &pair[1] {
                if key(*x) > key(*y) || pos(*x) >= pos(*y) {
                    return false;
                }
            }
        }
    }
    base == Base::Laurent || part.blocks[1..].iter().all(|b| w.nu_on(b).is_some())
}

/// P_a: every way of cutting the ⪯_a-sorted indices into I_0 and nonempty consecutive blocks,
/// sorted by degree.
pub fn partitions_pa(w: &Weight, base: Base) -> Vec<WeightPartition> {
    let ord = order(w);
    let k = ord.len();
    let mut out = Vec::new();
    for l0 in 0..=k {
        let rest = &ord[l0..];
        let gaps = rest.len().saturating_sub(1);
        let shapes: Vec<u64> = if rest.is_empty() { vec![0] } else { (0..1u64 << gaps).collect() };
        for cuts in shapes {
            let mut blocks = vec![ord[..l0].to_vec()];
            let mut cur = Vec::new();
            for (t, i) in rest.iter().enumerate() {
                cur.push(*i);
                if t == rest.len() - 1 || cuts >> t & 1 == 1 {
                    blocks.push(std::mem::take(&mut cur));
                }
            }
            let part = WeightPartition { blocks };
            if is_admissible(w, &part, base) {
                out.push(part);
            }
        }
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    out
}

/// The partitions of P_a in a given degree.
pub fn partitions_of_degree(w: &Weight, base: Base, degree: usize) -> Vec<WeightPartition> {
    partitions_pa(w, base).into_iter().filter(|p| p.degree() == degree).collect()
}
