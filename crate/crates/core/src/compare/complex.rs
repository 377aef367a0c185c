//! Finite cochain complexes of free Z/p^N-modules, graded by weight, and the de Rham complex of
//! (Z/p^n)[T_1..T_k] as the crystalline backend.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{IntMatrixModPN, Submodule, Zpn};
use crate::error::{Error, Result};

/// C^0 → C^1 → ... with `maps[i]: C^i → C^{i+1}` stored with dims[i+1] rows.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub zr: Zpn,
    pub dims: Vec<usize>,
    pub maps: Vec<IntMatrixModPN>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub degree: usize,
    /// e_1 ≤ e_2 ≤ ... with H ≅ ⊕ Z/p^{e_j}.
    pub invariants: Vec<u32>,
    pub length: u32,
}

impl CochainComplex {
    pub fn new(zr: Zpn, dims: Vec<usize>, maps: Vec<IntMatrixModPN>) -> Result<Self> {
        if maps.len() + 1 != dims.len() {
            return Err(Error::LengthMismatch(format!("{} maps for {} terms", maps.len(), dims.len())));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.cols != dims[i] || m.rows != dims[i + 1] || m.ring != zr {
                return Err(Error::LengthMismatch(format!("map {i} has shape {}x{}", m.rows, m.cols)));
            }
        }
        Ok(CochainComplex { zr, dims, maps })
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dd_zero(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn cycles(&self, i: usize) -> Submodule {
        match self.maps.get(i) {
            Some(m) => Submodule::new(self.zr, self.dims[i], &m.kernel()),
            None => Submodule::full(self.zr, self.dims[i]),
        }
    }

    pub fn boundaries(&self, i: usize) -> Submodule {
        if i == 0 {
            return Submodule::zero(self.zr, self.dims[0]);
        }
        let m = &self.maps[i - 1];
        let gens: Vec<Vec<u128>> = (0..m.cols).map(|j| m.column(j)).collect();
        Submodule::new(self.zr, self.dims[i], &gens)
    }

    pub fn cohomology(&self, i: usize) -> Result<Cohomology> {
        let (z, b) = (self.cycles(i), self.boundaries(i));
        let invariants = z.quotient_invariants(&b)?;
        Ok(Cohomology { degree: i, length: invariants.iter().sum(), invariants })
    }

    /// C ⊗ Z/p^m for m ≤ N.
    pub fn reduce(&self, m: u32) -> Result<CochainComplex> {
        if m == 0 || m > self.zr.n {
            return Err(Error::Invalid(format!("cannot reduce Z/p^{} to Z/p^{m}", self.zr.n)));
        }
        let zq = Zpn::new(self.zr.p, m)?;
        let maps = self
            .maps
            .iter()
            .map(|a| {
                let mut b = IntMatrixModPN::zeros(zq, a.rows, a.cols);
                for i in 0..a.rows {
                    for j in 0..a.cols {
                        b.set(i, j, a.get(i, j) % zq.modulus());
                    }
                }
                b
            })
            .collect();
        CochainComplex::new(zq, self.dims.clone(), maps)
    }
}

/// A family of complexes indexed by integral weights.
#[derive(Clone, Debug)]
pub struct WeightedCochainComplex {
    pub p: u64,
    pub n: u32,
    pub pieces: BTreeMap<Vec<i64>, CochainComplex>,
}

impl WeightedCochainComplex {
    pub fn dd_zero(&self) -> bool {
        self.pieces.values().all(|c| c.dd_zero())
    }
}

/// Subsets of `supp` of size i as bitmasks, ascending.
fn subsets(supp: u32, i: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0..=supp).filter(|j| j & !supp == 0 && j.count_ones() as usize == i).collect();
    out.sort_unstable();
    out
}

/// The weight-m part of Ω^•_{(Z/p^n)[T]}: basis T^{m - e_J} dT_J over J ⊆ supp(m), and
/// d(T^{m-e_J} dT_J) = Σ_{l ∉ J} m_l T^{m-e_J-e_l} dT_l ∧ dT_J.
pub fn de_rham_piece(p: u64, n: u32, m: &[i64]) -> Result<CochainComplex> {
    let zr = Zpn::new(p, n)?;
    let k = m.len();
    let supp: u32 = m.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| 1u32 << i).sum();
    let bases: Vec<Vec<u32>> = (0..=k).map(|i| subsets(supp, i)).collect();
    let mut maps = Vec::with_capacity(k);
    for i in 0..k {
        let (src, dst) = (&bases[i], &bases[i + 1]);
        let mut a = IntMatrixModPN::zeros(zr, dst.len(), src.len());
        for (col, &j) in src.iter().enumerate() {
            for l in 0..k {
                if j & (1 << l) != 0 || m[l] == 0 {
                    continue;
                }
                let target = j | (1 << l);
                let row = dst.binary_search(&target).expect("target subset");
                // moving dT_l past the dT_j with j < l
                let sign = if (j & ((1u32 << l) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                a.set(row, col, zr.reduce_i128(sign * m[l] as i128));
            }
        }
        maps.push(a);
    }
    CochainComplex::new(zr, bases.iter().map(|b| b.len()).collect(), maps)
}

/// Coordinates of the weight-m de Rham basis, in the order used by [`de_rham_piece`].
pub fn de_rham_basis(m: &[i64], i: usize) -> Vec<u32> {
    let supp: u32 = m.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| 1u32 << i).sum();
    subsets(supp, i)
}

#[derive(Clone, Debug, Serialize)]
pub struct BackendEntry {
    pub weight: Vec<i64>,
    pub cohomology: Vec<Cohomology>,
}

#[derive(Clone, Debug)]
pub struct CrystallineBackend {
    pub complex: WeightedCochainComplex,
    pub entries: Vec<BackendEntry>,
}

/// H^i of Ω^•_{(Z/p^n)[T_1..T_vars]} for every weight with entries at most `cap`. Non-integral
/// weights do not occur here; on the de Rham–Witt side they form an acyclic complex.
pub fn crystalline_backend(p: u64, vars: usize, n: u32, cap: i64) -> Result<CrystallineBackend> {
    if vars == 0 || vars > 8 {
        return Err(Error::ResourceCap(format!("{vars} variables outside 1..=8")));
    }
    let count = (cap as u128 + 1).checked_pow(vars as u32).unwrap_or(u128::MAX);
    if cap < 0 || count > 200_000 {
        return Err(Error::ResourceCap(format!("{count} weights for cap {cap}")));
    }
    let mut pieces = BTreeMap::new();
    let mut entries = Vec::new();
    let mut m = vec![0i64; vars];
    loop {
        let c = de_rham_piece(p, n, &m)?;
        let cohomology = (0..=vars).map(|i| c.cohomology(i)).collect::<Result<Vec<_>>>()?;
        entries.push(BackendEntry { weight: m.clone(), cohomology });
        pieces.insert(m.clone(), c);
        // odometer over [0, cap]^vars
        let mut idx = 0;
        while idx < vars && m[idx] == cap {
            m[idx] = 0;
            idx += 1;
        }
        if idx == vars {
            break;
        }
        m[idx] += 1;
    }
    Ok(CrystallineBackend { complex: WeightedCochainComplex { p, n, pieces }, entries })
}
