//! Linear algebra over the chain ring Z/p^N.
//!
//! Submodules of (Z/p^N)^k are kept in Howell form: a row echelon form with
//! pivots normalized to powers of p and closed under the "multiply a pivot row
//! by p^(N-v)" saturation. Two generating sets span the same submodule iff
//! their Howell forms coincide, and membership is decided by plain reduction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The residue ring Z/p^N with N small enough that p^N fits in 64 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zpn {
    pub p: u64,
    pub n: u32,
    modulus: u128,
}

impl Zpn {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::Invalid(format!("p = {p} is not a prime")));
        }
        let mut m: u128 = 1;
        for _ in 0..n {
            m = m
                .checked_mul(p as u128)
                .filter(|m| *m <= u64::MAX as u128)
                .ok_or_else(|| Error::ResourceCap(format!("p^N = {p}^{n} exceeds 64 bits")))?;
        }
        Ok(Zpn { p, n, modulus: m })
    }

    #[inline]
    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    #[inline]
    pub fn reduce_i128(&self, x: i128) -> u128 {
        x.rem_euclid(self.modulus as i128) as u128
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        (a + b) % self.modulus
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        (a + self.modulus - b) % self.modulus
    }

    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        (self.modulus - a) % self.modulus
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        (a * b) % self.modulus
    }

    pub fn pow_p(&self, k: u32) -> u128 {
        if k >= self.n {
            return 0;
        }
        (self.p as u128).pow(k)
    }

    /// p-adic valuation, with `n` standing in for the valuation of zero.
    pub fn val(&self, a: u128) -> u32 {
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        let mut a = a;
        let p = self.p as u128;
        while a % p == 0 {
            a /= p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u128) -> bool {
        self.n == 0 || a % self.p as u128 != 0
    }

    pub fn inv(&self, a: u128) -> Option<u128> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, (a % self.modulus) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce_i128(t0))
    }

    /// Split a nonzero residue as p^v * u with u a unit.
    fn split(&self, a: u128) -> (u32, u128) {
        let v = self.val(a);
        (v, a / (self.p as u128).pow(v))
    }
}

/// Dense matrix over Z/p^N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrixModPN {
    pub ring: Zpn,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u128>,
}

impl IntMatrixModPN {
    pub fn zeros(ring: Zpn, rows: usize, cols: usize) -> Self {
        IntMatrixModPN { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows_i128(ring: Zpn, rows: &[Vec<i128>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(ring, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::LengthMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, ring.reduce_i128(*x));
            }
        }
        Ok(m)
    }

    pub fn from_rows(ring: Zpn, rows: &[Vec<u128>], cols: usize) -> Result<Self> {
        let rows: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| *x as i128).collect()).collect();
        Self::from_rows_i128(ring, &rows, cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u128) {
        self.data[i * self.cols + j] = x % self.ring.modulus();
    }

    pub fn row(&self, i: usize) -> Vec<u128> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<u128> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[u128]) -> Vec<u128> {
        let r = self.ring;
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| r.add(acc, r.mul(self.get(i, j), x[j]))))
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = self.ring;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = r.add(out.get(i, j), r.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0)
    }

    /// Solve `M x = b`; the first solution found with left-to-right pivoting.
    pub fn howell_solve(&self, b: &[u128]) -> Result<Vec<u128>> {
        if b.len() != self.rows {
            return Err(Error::LengthMismatch(format!("rhs has {} entries, matrix has {} rows", b.len(), self.rows)));
        }
        let gens: Vec<Vec<u128>> = (0..self.cols).map(|j| self.column(j)).collect();
        let span = TrackedSpan::new(self.ring, self.rows, &gens);
        span.express(b).ok_or(Error::NoSolution)
    }

    /// Generators (in Howell form) of the right kernel {x : M x = 0}.
    pub fn kernel(&self) -> Vec<Vec<u128>> {
        let gens: Vec<Vec<u128>> = (0..self.cols).map(|j| self.column(j)).collect();
        TrackedSpan::new(self.ring, self.rows, &gens).relations()
    }

    /// Elementary divisor exponents of the row span (Smith form).
    pub fn smith_exponents(&self) -> Vec<u32> {
        let rows: Vec<Vec<u128>> = (0..self.rows).map(|i| self.row(i)).collect();
        smith_exponents(self.ring, &rows, self.cols)
    }
}

fn reduce_row(r: Zpn, v: &mut [u128]) {
    for x in v.iter_mut() {
        *x %= r.modulus();
    }
}

fn axpy(r: Zpn, target: &mut [u128], q: u128, src: &[u128]) {
    // target -= q * src
    if q == 0 {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t = r.sub(*t, r.mul(q, *s));
    }
}

/// Howell form of the row span of `rows` (each of length `ncols`).
pub fn howell_form(r: Zpn, rows: &[Vec<u128>], ncols: usize) -> Vec<Vec<u128>> {
    howell_with_pivots(r, rows, ncols, ncols).into_iter().map(|(row, _)| row).collect()
}

/// Howell form where pivots are only searched in the first `pivot_cols`
/// columns; rows whose leading part vanishes are kept after the pivot rows,
/// themselves in Howell form with respect to the remaining columns.
fn howell_with_pivots(r: Zpn, rows: &[Vec<u128>], ncols: usize, pivot_cols: usize) -> Vec<(Vec<u128>, Option<(usize, u32)>)> {
    let mut pool: Vec<Vec<u128>> = rows
        .iter()
        .map(|row| {
            let mut v = row.clone();
            v.resize(ncols, 0);
            reduce_row(r, &mut v);
            v
        })
        .filter(|v| v.iter().any(|x| *x != 0))
        .collect();
    let mut out: Vec<(Vec<u128>, Option<(usize, u32)>)> = Vec::new();
    for c in 0..ncols {
        let mut best: Option<(usize, u32)> = None;
        for (i, row) in pool.iter().enumerate() {
            if row[c] != 0 {
                let v = r.val(row[c]);
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                }
            }
        }
        let Some((i, v)) = best else { continue };
        let mut piv = pool.remove(i);
        let (_, unit) = r.split(piv[c]);
        let uinv = r.inv(unit).expect("unit part is invertible");
        for x in piv.iter_mut() {
            *x = r.mul(*x, uinv);
        }
        let pv = (r.p as u128).pow(v);
        for row in pool.iter_mut() {
            if row[c] != 0 {
                let q = row[c] / pv;
                axpy(r, row, q, &piv);
            }
        }
        pool.retain(|row| row.iter().any(|x| *x != 0));
        if v > 0 {
            let s = r.pow_p(r.n - v);
            let sat: Vec<u128> = piv.iter().map(|x| r.mul(*x, s)).collect();
            if sat.iter().any(|x| *x != 0) {
                pool.push(sat);
            }
        }
        // canonical: reduce earlier rows above this pivot into [0, p^v)
        for (row, _) in out.iter_mut() {
            if row[c] >= pv {
                let q = row[c] / pv;
                axpy(r, row, q, &piv);
            }
        }
        let tag = if c < pivot_cols { Some((c, v)) } else { None };
        out.push((piv, tag));
        if pool.is_empty() {
            break;
        }
    }
    out
}

/// A generating set together with a Howell basis that remembers how each
/// basis row is expressed through the generators.
#[derive(Clone, Debug)]
pub struct TrackedSpan {
    ring: Zpn,
    dim: usize,
    ngens: usize,
    // (left part in ambient coords | right part in generator coords), pivot
    rows: Vec<(Vec<u128>, Option<(usize, u32)>)>,
}

impl TrackedSpan {
    pub fn new(ring: Zpn, dim: usize, gens: &[Vec<u128>]) -> Self {
        let ngens = gens.len();
        let aug: Vec<Vec<u128>> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut v = g.clone();
                v.resize(dim, 0);
                v.extend((0..ngens).map(|j| u128::from(i == j)));
                v
            })
            .collect();
        let rows = howell_with_pivots(ring, &aug, dim + ngens, dim);
        TrackedSpan { ring, dim, ngens, rows }
    }

    /// Express `b` as a combination of the generators, if it lies in the span.
    pub fn express(&self, b: &[u128]) -> Option<Vec<u128>> {
        let r = self.ring;
        let mut v: Vec<u128> = b.iter().map(|x| x % r.modulus()).collect();
        v.resize(self.dim, 0);
        v.extend(std::iter::repeat(0).take(self.ngens));
        for (row, piv) in &self.rows {
            let Some((c, pv)) = piv else { continue };
            if v[*c] == 0 {
                continue;
            }
            let step = (r.p as u128).pow(*pv);
            if v[*c] % step != 0 {
                return None;
            }
            let q = v[*c] / step;
            axpy(r, &mut v, q, row);
        }
        if v[..self.dim].iter().any(|x| *x != 0) {
            return None;
        }
        Some(v[self.dim..].iter().map(|x| r.neg(*x)).collect())
    }

    pub fn contains(&self, b: &[u128]) -> bool {
        self.express(b).is_some()
    }

    /// Relations among the generators: a Howell basis of the kernel of
    /// (c_1..c_k) -> sum c_i g_i.
    pub fn relations(&self) -> Vec<Vec<u128>> {
        let rel: Vec<Vec<u128>> = self
            .rows
            .iter()
            .filter(|(row, piv)| piv.is_none() && row[..self.dim].iter().all(|x| *x == 0))
            .map(|(row, _)| row[self.dim..].to_vec())
            .collect();
        howell_form(self.ring, &rel, self.ngens)
    }

    /// The Howell basis of the span itself.
    pub fn basis(&self) -> Vec<Vec<u128>> {
        self.rows
            .iter()
            .filter(|(_, piv)| piv.is_some())
            .map(|(row, _)| row[..self.dim].to_vec())
            .collect()
    }
}

/// A submodule of (Z/p^N)^dim, stored as its Howell form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub ring: Zpn,
    pub dim: usize,
    basis: Vec<Vec<u128>>,
}

impl Submodule {
    pub fn new(ring: Zpn, dim: usize, gens: &[Vec<u128>]) -> Self {
        Submodule { ring, dim, basis: howell_form(ring, gens, dim) }
    }

    pub fn zero(ring: Zpn, dim: usize) -> Self {
        Submodule { ring, dim, basis: Vec::new() }
    }

    pub fn full(ring: Zpn, dim: usize) -> Self {
        let gens: Vec<Vec<u128>> = (0..dim).map(|i| unit_vec(dim, i)).collect();
        Self::new(ring, dim, &gens)
    }

    pub fn basis(&self) -> &[Vec<u128>] {
        &self.basis
    }

    pub fn contains(&self, v: &[u128]) -> bool {
        TrackedSpan::new(self.ring, self.dim, &self.basis).contains(v)
    }

    pub fn contains_module(&self, other: &Submodule) -> bool {
        let span = TrackedSpan::new(self.ring, self.dim, &self.basis);
        other.basis.iter().all(|v| span.contains(v))
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        Submodule::new(self.ring, self.dim, &g)
    }

    pub fn intersect(&self, other: &Submodule) -> Submodule {
        let r = self.ring;
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().map(|v| v.iter().map(|x| r.neg(*x)).collect::<Vec<_>>()));
        let rel = TrackedSpan::new(r, self.dim, &gens).relations();
        let k = self.basis.len();
        let out: Vec<Vec<u128>> = rel
            .iter()
            .map(|c| {
                let mut acc = vec![0u128; self.dim];
                for (ci, b) in c[..k].iter().zip(&self.basis) {
                    for (a, x) in acc.iter_mut().zip(b) {
                        *a = r.add(*a, r.mul(*ci, *x));
                    }
                }
                acc
            })
            .collect();
        Submodule::new(r, self.dim, &out)
    }

    /// Multiply every element by a scalar.
    pub fn scale(&self, s: u128) -> Submodule {
        let r = self.ring;
        let g: Vec<Vec<u128>> = self.basis.iter().map(|v| v.iter().map(|x| r.mul(*x, s)).collect()).collect();
        Submodule::new(r, self.dim, &g)
    }

    /// Image under `x -> M x` where `M` has `dim` columns.
    pub fn image(&self, m: &IntMatrixModPN) -> Submodule {
        let g: Vec<Vec<u128>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Submodule::new(self.ring, m.rows, &g)
    }

    /// Preimage of `target` under `x -> M x`, intersected with this module.
    pub fn preimage_within(&self, m: &IntMatrixModPN, target: &Submodule) -> Submodule {
        let r = self.ring;
        // combinations c of (basis images, target basis) summing to zero
        let mut gens: Vec<Vec<u128>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        let k = gens.len();
        gens.extend(target.basis.iter().map(|v| v.iter().map(|x| r.neg(*x)).collect::<Vec<_>>()));
        let rel = TrackedSpan::new(r, m.rows, &gens).relations();
        let out: Vec<Vec<u128>> = rel
            .iter()
            .map(|c| {
                let mut acc = vec![0u128; self.dim];
                for (ci, b) in c[..k].iter().zip(&self.basis) {
                    for (a, x) in acc.iter_mut().zip(b) {
                        *a = r.add(*a, r.mul(*ci, *x));
                    }
                }
                acc
            })
            .collect();
        Submodule::new(r, self.dim, &out)
    }

    /// Length (log_p of the cardinality).
    pub fn length(&self) -> u32 {
        self.basis.iter().map(|row| {
            let lead = row.iter().find(|x| **x != 0).copied().unwrap_or(0);
            self.ring.n - self.ring.val(lead)
        }).sum()
    }

    /// Invariants of `self / sub` as exponents e with summands Z/p^e
    /// (sorted ascending, zero exponents dropped). `sub` must be contained in `self`.
    pub fn quotient_invariants(&self, sub: &Submodule) -> Result<Vec<u32>> {
        let r = self.ring;
        let span = TrackedSpan::new(r, self.dim, &self.basis);
        let t = self.basis.len();
        let mut rels = span.relations();
        for y in &sub.basis {
            let c = span
                .express(y)
                .ok_or_else(|| Error::Invalid("quotient by a module that is not a submodule".into()))?;
            rels.push(c);
        }
        let ex = smith_exponents(r, &rels, t);
        let mut inv: Vec<u32> = ex.iter().map(|e| *e).filter(|e| *e > 0).collect();
        let missing = t - ex.len();
        inv.extend(std::iter::repeat(r.n).take(missing));
        // ex holds valuations of diagonal entries; F/rel ~ sum Z/p^v
        inv.sort_unstable();
        Ok(inv)
    }
}

pub fn unit_vec(dim: usize, i: usize) -> Vec<u128> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// Valuations of the nonzero Smith diagonal of the row span of `rows`.
/// A row space of rank s yields s entries; columns without a pivot are omitted.
pub fn smith_exponents(r: Zpn, rows: &[Vec<u128>], ncols: usize) -> Vec<u32> {
    let mut a: Vec<Vec<u128>> = rows
        .iter()
        .map(|row| {
            let mut v = row.clone();
            v.resize(ncols, 0);
            reduce_row(r, &mut v);
            v
        })
        .collect();
    let nrows = a.len();
    let mut out = Vec::new();
    let mut k = 0;
    while k < nrows.min(ncols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if *x != 0 {
                    let v = r.val(*x);
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        a.swap(k, bi);
        for row in a.iter_mut() {
            row.swap(k, bj);
        }
        let (_, unit) = r.split(a[k][k]);
        let uinv = r.inv(unit).expect("unit");
        for x in a[k].iter_mut() {
            *x = r.mul(*x, uinv);
        }
        let pv = (r.p as u128).pow(v);
        let pivot_row = a[k].clone();
        for i in (k + 1)..nrows {
            if a[i][k] != 0 {
                let q = a[i][k] / pv;
                axpy(r, &mut a[i], q, &pivot_row);
            }
        }
        // column operations: clear the pivot row to the right
        for j in (k + 1)..ncols {
            if a[k][j] != 0 {
                let q = a[k][j] / pv;
                for row in a.iter_mut() {
                    let s = r.mul(q, row[k]);
                    row[j] = r.sub(row[j], s);
                }
            }
        }
        out.push(v);
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, n: u32) -> Zpn {
        Zpn::new(p, n).unwrap()
    }

    #[test]
    fn solve_scalar_examples() {
        let r = z(2, 2);
        let m = IntMatrixModPN::from_rows(r, &[vec![2]], 1).unwrap();
        assert_eq!(m.howell_solve(&[2]).unwrap(), vec![1]);
        assert_eq!(m.howell_solve(&[1]), Err(Error::NoSolution));
    }

    #[test]
    fn kernel_of_two_mod_four() {
        let r = z(2, 2);
        let m = IntMatrixModPN::from_rows(r, &[vec![2]], 1).unwrap();
        let k = m.kernel();
        assert_eq!(k, vec![vec![2]]);
    }

    #[test]
    fn howell_saturation_is_applied() {
        // span of (2, 1) over Z/4 contains 2*(2,1) = (0, 2)
        let r = z(2, 2);
        let h = howell_form(r, &[vec![2, 1]], 2);
        assert_eq!(h, vec![vec![2, 1], vec![0, 2]]);
        let s = Submodule::new(r, 2, &[vec![2, 1]]);
        assert!(s.contains(&[0, 2]));
        assert!(!s.contains(&[0, 1]));
        assert_eq!(s.length(), 2);
    }

    #[test]
    fn quotient_invariants_of_cyclic_modules() {
        let r = z(2, 3);
        let full = Submodule::full(r, 2);
        let sub = Submodule::new(r, 2, &[vec![2, 0], vec![0, 4]]);
        assert_eq!(full.quotient_invariants(&sub).unwrap(), vec![1, 2]);
        let zero = Submodule::zero(r, 2);
        assert_eq!(full.quotient_invariants(&zero).unwrap(), vec![3, 3]);
    }

    #[test]
    fn intersection_and_preimage() {
        let r = z(3, 2);
        let a = Submodule::new(r, 2, &[vec![1, 0]]);
        let b = Submodule::new(r, 2, &[vec![3, 3], vec![0, 3]]);
        let i = a.intersect(&b);
        assert_eq!(i, Submodule::new(r, 2, &[vec![3, 0]]));
        let m = IntMatrixModPN::from_rows(r, &[vec![3, 0], vec![0, 1]], 2).unwrap();
        let pre = Submodule::full(r, 2).preimage_within(&m, &Submodule::zero(r, 2));
        assert_eq!(pre, Submodule::new(r, 2, &[vec![3, 0]]));
    }

    #[test]
    fn inverse_mod_prime_power() {
        let r = z(3, 4);
        for a in 1..81u128 {
            match r.inv(a) {
                Some(b) => assert_eq!(r.mul(a, b), 1),
                None => assert_eq!(a % 3, 0),
            }
        }
    }

    fn all_vectors(m: u128, len: usize) -> Vec<Vec<u128>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out.into_iter().flat_map(|v| (0..m).map(move |x| { let mut w = v.clone(); w.push(x); w })).collect();
        }
        out
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn solve_agrees_with_exhaustive_search(
            rows in 1usize..4,
            cols in 1usize..4,
            entries in prop::collection::vec(0u128..8, 9),
            rhs in prop::collection::vec(0u128..8, 3),
        ) {
            let r = z(2, 3);
            let data: Vec<Vec<u128>> = (0..rows).map(|i| entries[i * 3..i * 3 + cols].to_vec()).collect();
            let m = IntMatrixModPN::from_rows(r, &data, cols).unwrap();
            let b = &rhs[..rows];
            let brute = all_vectors(8, cols).into_iter().find(|x| m.mul_vec(x) == b);
            match m.howell_solve(b) {
                Ok(x) => prop_assert_eq!(m.mul_vec(&x), b.to_vec()),
                Err(_) => prop_assert!(brute.is_none()),
            }
            prop_assert_eq!(brute.is_some(), m.howell_solve(b).is_ok());
            let ker = Submodule::new(r, cols, &m.kernel());
            let brute_ker: Vec<Vec<u128>> = all_vectors(8, cols).into_iter().filter(|x| m.mul_vec(x).iter().all(|y| *y == 0)).collect();
            prop_assert_eq!(2u64.pow(ker.length()) as usize, brute_ker.len());
            for v in &brute_ker {
                prop_assert!(ker.contains(v));
            }
        }

        #[test]
        fn quotient_order_matches_count(entries in prop::collection::vec(0u128..8, 6)) {
            let r = z(2, 3);
            let gens = vec![entries[0..3].to_vec(), entries[3..6].to_vec()];
            let s = Submodule::new(r, 3, &gens);
            let members = all_vectors(8, 3).into_iter().filter(|v| s.contains(v)).count();
            let inv = Submodule::full(r, 3).quotient_invariants(&s).unwrap();
            let order: u32 = inv.iter().sum();
            prop_assert_eq!(members * 2usize.pow(order), 512);
        }
    }
}
