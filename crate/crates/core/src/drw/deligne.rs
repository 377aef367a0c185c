//! The integral-forms model: E ⊂ Ω_{Q_p[T^{1/p^∞}]} of forms with ω and dω integral in the dlog
//! basis, and W_nΩ = E / (V^n E + dV^n E) computed weight by weight.

use num_integer::Integer;
use serde::Serialize;

use super::forms::{d_matrix_scaled, dlog_basis, lz_form, to_coords, FormVec};
use super::weight::{partitions_of_degree, Base, Weight, WeightPartition};
use crate::algebra::{IntMatrixModPN, Submodule, TrackedSpan, Zpn};
use crate::error::{Error, Result};

/// Integer generators of E^i_a inside Z^N (N = number of dlog masks).
pub fn e_lattice(w: &Weight, base: Base, i: usize) -> Result<Vec<Vec<i128>>> {
    let n = dlog_basis(w, base, i).len();
    let u = w.u();
    let p = w.p() as i128;
    let mut gens = Vec::new();
    if u == 0 {
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            gens.push(e);
        }
        return Ok(gens);
    }
    // {c : p^U D c ≡ 0 mod p^U}
    let zr = Zpn::new(w.p(), u)?;
    let d = d_matrix_scaled(w, base, i);
    let m = IntMatrixModPN::from_rows_i128(zr, &d, n)?;
    for k in m.kernel() {
        gens.push(k.iter().map(|x| *x as i128).collect());
    }
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = p.pow(u);
        gens.push(e);
    }
    Ok(gens)
}

/// d applied exactly to an integer vector of E^i at weight a; the result is integral.
fn d_exact(w: &Weight, base: Base, i: usize, c: &[i128]) -> Result<Vec<i128>> {
    let d = d_matrix_scaled(w, base, i);
    let q = (w.p() as i128).pow(w.u());
    d.iter()
        .map(|row| {
            let s: i128 = row.iter().zip(c).map(|(a, b)| a * b).sum();
            if s % q != 0 {
                return Err(Error::Invalid(format!("form at {w} is not in E")));
            }
            Ok(s / q)
        })
        .collect()
}

/// E^i_a / (V^n E + dV^n E)^i_a as submodules of (Z/p^M)^N with M large enough to be exact.
#[derive(Clone, Debug)]
pub struct DeligneQuotient {
    pub weight: Weight,
    pub degree: usize,
    pub level: u32,
    pub masks: Vec<u32>,
    pub zr: Zpn,
    pub e: Submodule,
    pub sub: Submodule,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientSummary {
    pub weight: Weight,
    pub degree: usize,
    pub length: u32,
    pub invariants: Vec<u32>,
}

pub fn deligne_quotient(w: &Weight, base: Base, i: usize, n: u32) -> Result<DeligneQuotient> {
    if n == 0 {
        return Err(Error::Invalid("level must be positive".into()));
    }
    let masks = dlog_basis(w, base, i);
    let dim = masks.len();
    // E ⊇ p^U Z^N and V^n E ⊇ p^{max(n, U)} Z^N
    let zr = Zpn::new(w.p(), n.max(w.u()))?;
    let red = |v: &[i128]| -> Vec<u128> { v.iter().map(|x| zr.reduce_i128(*x)).collect() };
    let e_gens: Vec<Vec<u128>> = e_lattice(w, base, i)?.iter().map(|v| red(v)).collect();
    let e = Submodule::new(zr, dim, &e_gens);

    let pn = (w.p() as i128).pow(n);
    let big = w.scale(n as i32);
    let mut sub_gens: Vec<Vec<u128>> = e_lattice(&big, base, i)?
        .iter()
        .map(|v| red(&v.iter().map(|x| x * pn).collect::<Vec<_>>()))
        .collect();
    if i > 0 {
        // d(V^n c) at weight a equals d c at weight p^n a
        for c in e_lattice(&big, base, i - 1)? {
            sub_gens.push(red(&d_exact(&big, base, i - 1, &c)?));
        }
    }
    let sub = Submodule::new(zr, dim, &sub_gens);
    if !e.contains_module(&sub) {
        return Err(Error::Invalid(format!("V^n E + dV^n E not inside E at {w}")));
    }
    Ok(DeligneQuotient { weight: w.clone(), degree: i, level: n, masks, zr, e, sub })
}

impl DeligneQuotient {
    pub fn length(&self) -> u32 {
        self.e.length() - self.sub.length()
    }

    pub fn invariants(&self) -> Result<Vec<u32>> {
        self.e.quotient_invariants(&self.sub)
    }

    pub fn summary(&self) -> Result<QuotientSummary> {
        Ok(QuotientSummary {
            weight: self.weight.clone(),
            degree: self.degree,
            length: self.length(),
            invariants: self.invariants()?,
        })
    }

    fn reduce(&self, v: &[i128]) -> Vec<u128> {
        v.iter().map(|x| self.zr.reduce_i128(*x)).collect()
    }

    pub fn contains_form(&self, x: &FormVec) -> Result<bool> {
        Ok(self.e.contains(&self.reduce(&to_coords(x, &self.masks)?)))
    }

    pub fn is_zero_class(&self, x: &FormVec) -> Result<bool> {
        Ok(self.sub.contains(&self.reduce(&to_coords(x, &self.masks)?)))
    }

    /// The basis representatives e(1, a, P) in this weight and degree.
    pub fn basis_forms(&self, base: Base) -> Result<Vec<(WeightPartition, FormVec)>> {
        partitions_of_degree(&self.weight, base, self.degree)
            .into_iter()
            .map(|p| lz_form(&self.weight, &p).map(|f| (p, f)))
            .collect()
    }

    /// Coordinates of the class of x on the basis representatives, modulo p^{n-u(a)}.
    pub fn coordinates(&self, base: Base, x: &FormVec) -> Result<Vec<(WeightPartition, u128)>> {
        let forms = self.basis_forms(base)?;
        let mut gens: Vec<Vec<u128>> = Vec::new();
        for (_, f) in &forms {
            gens.push(self.reduce(&to_coords(f, &self.masks)?));
        }
        gens.extend(self.sub.basis().iter().cloned());
        let span = TrackedSpan::new(self.zr, self.masks.len(), &gens);
        let c = span.express(&self.reduce(&to_coords(x, &self.masks)?)).ok_or(Error::NoSolution)?;
        let m = self.coefficient_modulus();
        Ok(forms.into_iter().zip(c).map(|((p, _), v)| (p, v % m)).filter(|(_, v)| *v != 0).collect())
    }

    pub fn coefficient_modulus(&self) -> u128 {
        (self.weight.p() as u128).pow(self.level.saturating_sub(self.weight.u()))
    }
}

/// Per-weight comparison of the quotient with the basis indexed by P_a.
#[derive(Clone, Debug, Serialize)]
pub struct BasisIsoCheck {
    pub weight: Weight,
    pub degree: usize,
    pub quotient_length: u32,
    pub basis_count: usize,
    pub coefficient_length: u32,
    /// The representatives lie in E and generate E modulo V^nE + dV^nE.
    pub generates: bool,
    /// p^{n-u} kills every representative in the quotient.
    pub annihilated: bool,
    pub pass: bool,
}

/// The map ⊕ Z/p^{n-u(a)} → E/(V^nE + dV^nE) sending the generators to the representatives is
/// an isomorphism iff it is well defined, surjective, and the lengths agree.
pub fn basis_iso_check(w: &Weight, base: Base, i: usize, n: u32) -> Result<BasisIsoCheck> {
    let q = deligne_quotient(w, base, i, n)?;
    let coeff_len = n.saturating_sub(w.u());
    let forms = if coeff_len == 0 { Vec::new() } else { q.basis_forms(base)? };
    let mut gens: Vec<Vec<u128>> = Vec::new();
    let mut inside = true;
    let mut annihilated = true;
    let scale = (w.p() as i128).pow(coeff_len);
    for (_, f) in &forms {
        inside &= q.contains_form(f)?;
        let killed: FormVec = f.iter().map(|(m, c)| (*m, c * scale)).collect();
        annihilated &= q.is_zero_class(&killed)?;
        gens.push(q.reduce(&to_coords(f, &q.masks)?));
    }
    let span = Submodule::new(q.zr, q.masks.len(), &gens).sum(&q.sub);
    let generates = inside && span.contains_module(&q.e);
    let quotient_length = q.length();
    let pass = generates && annihilated && quotient_length == forms.len() as u32 * coeff_len;
    Ok(BasisIsoCheck {
        weight: w.clone(),
        degree: i,
        quotient_length,
        basis_count: forms.len(),
        coefficient_length: coeff_len,
        generates,
        annihilated,
        pass,
    })
}

/// Generators of E^0 and E^1 in one variable: p^{u(k)} T^k and T^k dlog T.
pub fn one_variable_generators(w: &Weight) -> Result<(Vec<i128>, Vec<i128>)> {
    if w.k() != 1 {
        return Err(Error::Invalid("one-variable weights only".into()));
    }
    let e0 = e_lattice(w, Base::Polynomial, 0)?;
    let e1 = e_lattice(w, Base::Polynomial, 1)?;
    let g0 = e0.iter().fold(0i128, |g, v| g.gcd(&v[0]));
    let g1 = e1.iter().fold(0i128, |g, v| g.gcd(&v[0]));
    Ok((vec![g0], if e1.is_empty() { Vec::new() } else { vec![g1] }))
}

#[derive(Clone, Debug, Serialize)]
pub struct OneVariablePiece {
    pub weight: Weight,
    pub degree: usize,
    pub invariants: Vec<u32>,
    pub expected: Vec<u32>,
    /// gcd of the generators of E^degree_a in the T^a dlog T coordinate.
    pub generator: Option<i128>,
    pub expected_generator: Option<i128>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneVariableReport {
    pub p: u64,
    pub n: u32,
    pub cap: i64,
    pub pieces: Vec<OneVariablePiece>,
    /// E^i/(V^nE + dV^nE) vanishes for i = 2, 3 at every weight.
    pub higher_degrees_zero: bool,
    pub pass: bool,
}

/// W_n(F_p[T]) and W_nΩ^1 weight by weight: Z/p^n generated by [T]^a and [T]^a dlog [T] at
/// integral a > 0, Z/p^n at a = 0 in degree 0 only, and Z/p^{n-u(a)} generated by V^u[T^{p^u a}]
/// and dV^u[T^{p^u a}] at non-integral a.
pub fn one_variable_decomposition(p: u64, n: u32, cap: i64) -> Result<OneVariableReport> {
    let mut pieces = Vec::new();
    let mut higher_degrees_zero = true;
    for w in super::weight::enumerate_weights(p, 1, n, cap, Base::Polynomial)? {
        let u = w.u();
        let (g0, g1) = one_variable_generators(&w)?;
        let zero = w.numerators().iter().all(|x| *x == 0);
        let len = n.saturating_sub(u);
        for degree in 0..=1 {
            let expected = if len == 0 || (zero && degree == 1) { Vec::new() } else { vec![len] };
            let (generator, expected_generator) = match degree {
                0 => (g0.first().copied(), Some((p as i128).pow(u))),
                _ => (g1.first().copied(), if zero { None } else { Some(1) }),
            };
            let invariants = deligne_quotient(&w, Base::Polynomial, degree, n)?.invariants()?;
            let pass = invariants == expected && generator == expected_generator;
            pieces.push(OneVariablePiece { weight: w.clone(), degree, invariants, expected, generator, expected_generator, pass });
        }
        for degree in 2..=3 {
            higher_degrees_zero &= dlog_basis(&w, Base::Polynomial, degree).is_empty();
        }
    }
    let pass = higher_degrees_zero && pieces.iter().all(|x| x.pass);
    Ok(OneVariableReport { p, n, cap, pieces, higher_degrees_zero, pass })
}
