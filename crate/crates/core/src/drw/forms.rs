//! Forms c T^a dlog T_J written in the dlog basis, indexed per weight by bitmasks J.

use std::collections::BTreeMap;

use super::weight::{Base, Weight, WeightPartition};
use crate::error::{Error, Result};

/// Coefficients on dlog T_J, keyed by the bitmask of J.
pub type FormVec = BTreeMap<u32, i128>;

/// Indices J may range over: supp(a) for polynomials, everything for Laurent.
pub fn allowed_mask(w: &Weight, base: Base) -> u32 {
    (0..w.k())
        .filter(|i| base == Base::Laurent || !w.is_zero_at(*i))
        .fold(0, |m, i| m | 1 << i)
}

/// The masks J ⊆ allowed with |J| = i, in increasing order.
pub fn dlog_basis(w: &Weight, base: Base, i: usize) -> Vec<u32> {
    let allowed = allowed_mask(w, base);
    (0..1u32 << w.k()).filter(|m| m & !allowed == 0 && m.count_ones() as usize == i).collect()
}

/// dlog T_j ∧ dlog T_J = sign · dlog T_{J ∪ j}; zero when j ∈ J.
pub fn wedge_sign(j: usize, mask: u32) -> i128 {
    if mask >> j & 1 == 1 {
        return 0;
    }
    if (mask & ((1 << j) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// dlog T_J ∧ dlog T_K = sign · dlog T_{J ∪ K}.
pub fn wedge_masks(a: u32, b: u32) -> i128 {
    if a & b != 0 {
        return 0;
    }
    let mut sign = 1;
    let mut rest = a;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        // moving dlog T_j past the indices of b that are smaller than j
        if (b & ((1 << j) - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
    }
    sign
}

pub fn wedge(x: &FormVec, y: &FormVec) -> FormVec {
    let mut out = FormVec::new();
    for (ma, ca) in x {
        for (mb, cb) in y {
            let s = wedge_masks(*ma, *mb);
            if s != 0 {
                *out.entry(ma | mb).or_insert(0) += s * ca * cb;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// d at an integral weight b: T^b dlog T_J ↦ Σ_{j∉J} b_j T^b dlog T_j ∧ dlog T_J.
pub fn d_integral(b: &[i64], x: &FormVec) -> FormVec {
    let mut out = FormVec::new();
    for (m, c) in x {
        for (j, bj) in b.iter().enumerate() {
            let s = wedge_sign(j, *m);
            if s != 0 && *bj != 0 {
                *out.entry(m | 1 << j).or_insert(0) += s * *bj as i128 * c;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// p^U times the matrix of d from degree i to i+1 at weight a, with U = u(a).
/// Rows follow `dlog_basis(a, i+1)`, columns `dlog_basis(a, i)`.
pub fn d_matrix_scaled(w: &Weight, base: Base, i: usize) -> Vec<Vec<i128>> {
    let src = dlog_basis(w, base, i);
    let dst = dlog_basis(w, base, i + 1);
    let num = w.integral_lift();
    let mut rows = vec![vec![0i128; src.len()]; dst.len()];
    for (c, m) in src.iter().enumerate() {
        let img = d_integral(&num, &FormVec::from([(*m, 1)]));
        for (mask, v) in img {
            if let Some(r) = dst.iter().position(|x| *x == mask) {
                rows[r][c] = v;
            }
        }
    }
    rows
}

/// The 1-form attached to a block: Σ_{i∈I} a(i) p^{-ν(a|_I)} dlog T_i, or dlog ∏ T_i when a
/// vanishes on I.
pub fn block_form(w: &Weight, block: &[usize]) -> Result<FormVec> {
    let mut out = FormVec::new();
    match w.nu_on(block) {
        None => {
            for i in block {
                out.insert(1 << i, 1);
            }
        }
        Some(v) => {
            for i in block {
                let c = w.times_p_pow(*i, -v)?;
                if c != 0 {
                    out.insert(1 << i, c as i128);
                }
            }
        }
    }
    Ok(out)
}

/// The form representing e(1, a, I_0, ..., I_n): p^{u_0} ∧_j ω_j with u_0 = max(0, -ν(a|_{I_0}))
/// when I_0 is nonempty.
pub fn lz_form(w: &Weight, part: &WeightPartition) -> Result<FormVec> {
    let i0 = part.i0();
    let u0 = if i0.is_empty() { 0 } else { w.nu_on(i0).map_or(0, |v| (-v).max(0)) };
    let mut acc = FormVec::from([(0u32, (w.p() as i128).pow(u0 as u32))]);
    for b in &part.blocks[1..] {
        acc = wedge(&acc, &block_form(w, b)?);
    }
    if acc.is_empty() {
        return Err(Error::Invalid(format!("partition {} of {w} gives the zero form", part.label())));
    }
    Ok(acc)
}

/// Coordinates of a form in the given mask order.
pub fn to_coords(x: &FormVec, masks: &[u32]) -> Result<Vec<i128>> {
    let mut v = vec![0; masks.len()];
    for (m, c) in x {
        let pos = masks
            .iter()
            .position(|y| y == m)
            .ok_or_else(|| Error::Invalid(format!("dlog mask {m:#b} outside the basis")))?;
        v[pos] = *c;
    }
    Ok(v)
}

pub fn from_coords(v: &[i128], masks: &[u32]) -> FormVec {
    masks.iter().zip(v).filter(|(_, c)| **c != 0).map(|(m, c)| (*m, *c)).collect()
}

/// Human-readable T^a dlog T_J.
pub fn mask_label(mask: u32) -> String {
    if mask == 0 {
        return String::new();
    }
    let parts: Vec<String> = (0..32).filter(|i| mask >> i & 1 == 1).map(|i| format!("dlogT{}", i + 1)).collect();
    parts.join("∧")
}
