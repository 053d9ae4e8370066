//! Monomial matrices over roots of unity, optionally antiunitary, and their
//! projective classes.
//!
//! A [`MonomialElement`] maps `e_j ↦ phases[j]·e_{perm[j]}`; with `conj` set it
//! acts as `v ↦ M·v̄`. Products follow `(A, ε)(B, δ) = (A·σ^ε(B), ε ⊕ δ)` where
//! `σ` negates every phase.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::RootOfUnity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Complex,
    Real,
    Quaternion,
}

/// Equality, ordering and hashing compare the matrix and `conj` only; the flavor is a tag.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawMonomial", into = "RawMonomial")]
pub struct MonomialElement {
    perm: Vec<usize>,
    phases: Vec<RootOfUnity>,
    conj: bool,
    flavor: Flavor,
}

impl MonomialElement {
    fn key(&self) -> (&[usize], &[RootOfUnity], bool) {
        (&self.perm, &self.phases, self.conj)
    }
}

impl PartialEq for MonomialElement {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for MonomialElement {}

impl std::hash::Hash for MonomialElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for MonomialElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonomialElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMonomial {
    dim: usize,
    perm: Vec<usize>,
    phases: Vec<RootOfUnity>,
    #[serde(default)]
    conj: bool,
    #[serde(default = "default_flavor")]
    flavor: Flavor,
}

fn default_flavor() -> Flavor {
    Flavor::Complex
}

impl TryFrom<RawMonomial> for MonomialElement {
    type Error = Error;

    fn try_from(r: RawMonomial) -> Result<Self> {
        if r.perm.len() != r.dim || r.phases.len() != r.dim {
            return Err(Error::Invalid(format!(
                "dim {} but perm has {} entries and phases {}",
                r.dim,
                r.perm.len(),
                r.phases.len()
            )));
        }
        MonomialElement::new(r.perm, r.phases, r.conj, r.flavor)
    }
}

impl From<MonomialElement> for RawMonomial {
    fn from(m: MonomialElement) -> Self {
        RawMonomial { dim: m.dim(), perm: m.perm, phases: m.phases, conj: m.conj, flavor: m.flavor }
    }
}

fn check_perm(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

impl MonomialElement {
    pub fn new(perm: Vec<usize>, phases: Vec<RootOfUnity>, conj: bool, flavor: Flavor) -> Result<Self> {
        if perm.is_empty() {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if perm.len() != phases.len() {
            return Err(Error::DimensionMismatch(format!(
                "perm has {} entries, phases {}",
                perm.len(),
                phases.len()
            )));
        }
        check_perm(&perm)?;
        let m = MonomialElement { perm, phases, conj, flavor };
        m.check_flavor()?;
        Ok(m)
    }

    fn raw(perm: Vec<usize>, phases: Vec<RootOfUnity>, conj: bool, flavor: Flavor) -> Self {
        debug_assert_eq!(perm.len(), phases.len());
        MonomialElement { perm, phases, conj, flavor }
    }

    fn check_flavor(&self) -> Result<()> {
        match self.flavor {
            Flavor::Complex => Ok(()),
            Flavor::Real => {
                if self.conj || self.phases.iter().any(|p| p.as_sign().is_none()) {
                    Err(Error::FlavorMismatch("real elements need ±1 phases and no conjugation".into()))
                } else {
                    Ok(())
                }
            }
            Flavor::Quaternion => {
                if self.dim() % 2 != 0 || self.conj {
                    return Err(Error::FlavorMismatch(
                        "quaternion elements need even dimension and no conjugation".into(),
                    ));
                }
                let j = quaternion_structure(self.dim() / 2);
                let lhs = self.as_complex().mul(&j)?;
                let rhs = j.mul(&self.as_complex().conj_entries())?;
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(Error::FlavorMismatch("matrix does not commute with the quaternionic structure".into()))
                }
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::raw((0..n).collect(), vec![RootOfUnity::ONE; n], false, Flavor::Complex)
    }

    pub fn scalar(n: usize, z: RootOfUnity) -> Self {
        Self::raw((0..n).collect(), vec![z; n], false, Flavor::Complex)
    }

    pub fn diagonal(phases: Vec<RootOfUnity>) -> Self {
        let n = phases.len();
        Self::raw((0..n).collect(), phases, false, Flavor::Complex)
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, vec![RootOfUnity::ONE; n], false, Flavor::Complex)
    }

    /// Diagonal `±1` matrix with `-1` where `negative[j]` is set.
    pub fn signs(negative: &[bool]) -> Self {
        let ph = negative.iter().map(|&b| RootOfUnity::from_sign(b)).collect();
        Self::diagonal(ph).into_flavor_unchecked(Flavor::Real)
    }

    /// Complex conjugation `v ↦ v̄` on `ℂ^n`.
    pub fn tau(n: usize) -> Self {
        let mut m = Self::identity(n);
        m.conj = true;
        m
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[RootOfUnity] {
        &self.phases
    }

    pub fn conj(&self) -> bool {
        self.conj
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn with_flavor(mut self, flavor: Flavor) -> Result<Self> {
        self.flavor = flavor;
        self.check_flavor()?;
        Ok(self)
    }

    fn into_flavor_unchecked(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }

    /// The same matrix tagged as a plain complex element.
    pub fn as_complex(&self) -> Self {
        let mut m = self.clone();
        m.flavor = Flavor::Complex;
        m
    }

    /// Entrywise complex conjugate of the matrix part (`σ`).
    pub fn conj_entries(&self) -> Self {
        let mut m = self.clone();
        for p in &mut m.phases {
            *p = p.conj();
        }
        m
    }

    pub fn scaled(&self, z: RootOfUnity) -> Self {
        let mut m = self.clone();
        for p in &mut m.phases {
            *p *= z;
        }
        m
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    fn product_flavor(a: Flavor, b: Flavor) -> Result<Flavor> {
        use Flavor::*;
        match (a, b) {
            (x, y) if x == y => Ok(x),
            (Complex, _) | (_, Complex) => Ok(Complex),
            (Real, Quaternion) | (Quaternion, Real) => Err(Error::FlavorMismatch(
                "cannot multiply real and quaternion-embedded elements".into(),
            )),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let flavor = Self::product_flavor(self.flavor, other.flavor)?;
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut phases = vec![RootOfUnity::ONE; n];
        for j in 0..n {
            let k = other.perm[j];
            let b = if self.conj { other.phases[j].conj() } else { other.phases[j] };
            perm[j] = self.perm[k];
            phases[j] = b * self.phases[k];
        }
        Ok(Self::raw(perm, phases, self.conj ^ other.conj, flavor))
    }

    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut phases = vec![RootOfUnity::ONE; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            phases[self.perm[j]] = self.phases[j].inv();
        }
        let inv = Self::raw(perm, phases, self.conj, self.flavor);
        if self.conj {
            inv.conj_entries()
        } else {
            inv
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.dim()).into_flavor_unchecked(self.flavor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            base = base.mul(&base).expect("same shape");
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_value() == Some(RootOfUnity::ONE)
    }

    /// The scalar `λ` if this element is `λ·I` (unitary part only).
    pub fn scalar_value(&self) -> Option<RootOfUnity> {
        if self.conj || self.perm.iter().enumerate().any(|(j, &p)| p != j) {
            return None;
        }
        let z = self.phases[0];
        self.phases.iter().all(|&p| p == z).then_some(z)
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| p == j)
    }

    /// `a·b·a⁻¹·b⁻¹`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.mul(&self.inverse())?.mul(&other.inverse())
    }

    /// Kronecker product `a ⊗ b` on the index `i·dim(b) + j`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.conj || other.conj {
            return Err(Error::Invalid("Kronecker product of antiunitary elements".into()));
        }
        let (da, db) = (self.dim(), other.dim());
        let mut perm = vec![0; da * db];
        let mut phases = vec![RootOfUnity::ONE; da * db];
        for i in 0..da {
            for j in 0..db {
                perm[i * db + j] = self.perm[i] * db + other.perm[j];
                phases[i * db + j] = self.phases[i] * other.phases[j];
            }
        }
        let flavor = if self.flavor == Flavor::Real && other.flavor == Flavor::Real {
            Flavor::Real
        } else {
            Flavor::Complex
        };
        Ok(Self::raw(perm, phases, false, flavor))
    }

    /// Block-diagonal sum of the given elements.
    pub fn direct_sum(blocks: &[MonomialElement]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Invalid("empty direct sum".into()));
        }
        if blocks.iter().any(|b| b.conj) {
            return Err(Error::Invalid("direct sum of antiunitary elements".into()));
        }
        let mut perm = Vec::new();
        let mut phases = Vec::new();
        let mut off = 0;
        for b in blocks {
            perm.extend(b.perm.iter().map(|&p| p + off));
            phases.extend_from_slice(&b.phases);
            off += b.dim();
        }
        let flavor = if blocks.iter().all(|b| b.flavor == Flavor::Real) { Flavor::Real } else { Flavor::Complex };
        Ok(Self::raw(perm, phases, false, flavor))
    }

    /// Phases at the fixed points of the permutation; their sum is the trace.
    pub fn diagonal_entries(&self) -> impl Iterator<Item = RootOfUnity> + '_ {
        self.perm.iter().enumerate().filter(|(j, &p)| p == *j).map(move |(j, _)| self.phases[j])
    }

    /// Dense complex matrix of the linear part (ignoring `conj`).
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            m[(self.perm[j], j)] = self.phases[j].to_complex();
        }
        m
    }
}

impl fmt::Display for MonomialElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for j in 0..self.dim() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}->{}:{}", j, self.perm[j], self.phases[j])?;
        }
        write!(f, "]{}", if self.conj { "·τ" } else { "" })
    }
}

/// Standard complex structure on `ℂ^{2n}`: blocks `[[0,-1],[1,0]]` on `(2c, 2c+1)`.
pub fn quaternion_structure(n: usize) -> MonomialElement {
    let mut perm = vec![0; 2 * n];
    let mut phases = vec![RootOfUnity::ONE; 2 * n];
    for c in 0..n {
        perm[2 * c] = 2 * c + 1;
        perm[2 * c + 1] = 2 * c;
        phases[2 * c + 1] = RootOfUnity::MINUS_ONE;
    }
    MonomialElement::raw(perm, phases, false, Flavor::Complex)
}

/// `diag{I_b, ω_n I_b, …, ω_n^{n-1} I_b}`.
pub fn clock(n: usize, block: usize) -> MonomialElement {
    assert!(n > 0 && block > 0);
    let phases = (0..n * block).map(|j| RootOfUnity::new((j / block) as i64, n as u64)).collect();
    MonomialElement::diagonal(phases)
}

/// Cyclic block shift with identity blocks on the superdiagonal and bottom-left corner.
pub fn shift(n: usize, block: usize) -> MonomialElement {
    assert!(n > 0 && block > 0);
    let d = n * block;
    let perm = (0..d).map(|j| (j + d - block) % d).collect();
    MonomialElement::raw(perm, vec![RootOfUnity::ONE; d], false, Flavor::Complex)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedMatrix {
    /// `diag(-I_p, I_q)`
    Ipq(usize, usize),
    /// `[[0, I_n], [-I_n, 0]]`
    J(usize),
    /// `[[0, I_n], [I_n, 0]]`
    Jprime(usize),
    /// The 4×4 block matrix with `I_n, -I_n, I_n, -I_n` on the antidiagonal.
    K(usize),
}

pub fn named_matrix(name: NamedMatrix) -> MonomialElement {
    let m = match name {
        NamedMatrix::Ipq(p, q) => {
            let neg: Vec<bool> = (0..p + q).map(|j| j < p).collect();
            MonomialElement::signs(&neg)
        }
        NamedMatrix::J(n) => block_perm(n, &[(1, 0, true), (0, 1, false)]),
        NamedMatrix::Jprime(n) => block_perm(n, &[(1, 0, false), (0, 1, false)]),
        NamedMatrix::K(n) => block_perm(n, &[(3, 0, true), (2, 1, false), (1, 2, true), (0, 3, false)]),
    };
    m.into_flavor_unchecked(Flavor::Real)
}

/// Block permutation with identity blocks: column block `c` lands in row block
/// `r`, negated if `neg`; given as `(r, c, neg)` indexed by column block.
fn block_perm(n: usize, blocks: &[(usize, usize, bool)]) -> MonomialElement {
    let nb = blocks.len();
    let mut perm = vec![0; nb * n];
    let mut phases = vec![RootOfUnity::ONE; nb * n];
    for &(r, c, neg) in blocks {
        for j in 0..n {
            perm[c * n + j] = r * n + j;
            phases[c * n + j] = RootOfUnity::from_sign(neg);
        }
    }
    MonomialElement::raw(perm, phases, false, Flavor::Complex)
}

/// A unit quaternion of the form `z` or `z·j` with `z` a root of unity in `ℂ ⊂ ℍ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuaternionUnit {
    pub z: RootOfUnity,
    pub j: bool,
}

impl QuaternionUnit {
    pub const ONE: QuaternionUnit = QuaternionUnit { z: RootOfUnity::ONE, j: false };
    pub const I: QuaternionUnit = QuaternionUnit { z: RootOfUnity::I, j: false };
    pub const J: QuaternionUnit = QuaternionUnit { z: RootOfUnity::ONE, j: true };
    pub const K: QuaternionUnit = QuaternionUnit { z: RootOfUnity::I, j: true };

    pub fn neg(self) -> Self {
        QuaternionUnit { z: self.z * RootOfUnity::MINUS_ONE, j: self.j }
    }

    /// Quaternion product, using `j·z = z̄·j`.
    pub fn mul(self, o: Self) -> Self {
        match (self.j, o.j) {
            (false, _) => QuaternionUnit { z: self.z * o.z, j: o.j },
            (true, false) => QuaternionUnit { z: self.z * o.z.conj(), j: true },
            (true, true) => QuaternionUnit { z: self.z * o.z.conj() * RootOfUnity::MINUS_ONE, j: false },
        }
    }

    /// Image in `M_2(ℂ)`: `z ↦ diag(z, z̄)`, `z·j ↦ [[0, -z], [z̄, 0]]`, as
    /// `(perm, phases)` of a 2×2 monomial matrix.
    fn embed(self) -> ([usize; 2], [RootOfUnity; 2]) {
        if self.j {
            ([1, 0], [self.z.conj(), self.z * RootOfUnity::MINUS_ONE])
        } else {
            ([0, 1], [self.z, self.z.conj()])
        }
    }

    /// Real components `(a, b, c, d)` of `a + bi + cj + dk`, when the unit is one of `±1, ±i, ±j, ±k`.
    fn real_components(self) -> Option<[i8; 4]> {
        let s = |z: RootOfUnity| -> Option<(usize, i8)> {
            match (z.num(), z.den()) {
                (0, 1) => Some((0, 1)),
                (1, 2) => Some((0, -1)),
                (1, 4) => Some((1, 1)),
                (3, 4) => Some((1, -1)),
                _ => None,
            }
        };
        let (idx, sign) = s(self.z)?;
        let mut out = [0i8; 4];
        // z·j with z = i gives k; z = 1 gives j.
        let slot = if self.j { 2 + idx } else { idx };
        out[slot] = sign;
        Some(out)
    }
}

/// A monomial matrix over `ℍ`: `e_c ↦ e_{perm[c]}·units[c]` (entry `(perm[c], c) = units[c]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionMonomial {
    pub perm: Vec<usize>,
    pub units: Vec<QuaternionUnit>,
}

impl QuaternionMonomial {
    pub fn new(perm: Vec<usize>, units: Vec<QuaternionUnit>) -> Result<Self> {
        if perm.is_empty() || perm.len() != units.len() {
            return Err(Error::Invalid("malformed quaternion monomial".into()));
        }
        check_perm(&perm)?;
        Ok(QuaternionMonomial { perm, units })
    }

    pub fn scalar(n: usize, u: QuaternionUnit) -> Self {
        QuaternionMonomial { perm: (0..n).collect(), units: vec![u; n] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.dim() != o.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim(), o.dim())));
        }
        let perm = (0..o.dim()).map(|c| self.perm[o.perm[c]]).collect();
        let units = (0..o.dim()).map(|c| self.units[o.perm[c]].mul(o.units[c])).collect();
        Ok(QuaternionMonomial { perm, units })
    }

    /// Image in `U(2n)` under the interleaved embedding (quaternion coordinate `c` ↔ `2c, 2c+1`).
    pub fn embed(&self) -> MonomialElement {
        let n = self.dim();
        let mut perm = vec![0; 2 * n];
        let mut phases = vec![RootOfUnity::ONE; 2 * n];
        for c in 0..n {
            let (p, ph) = self.units[c].embed();
            for s in 0..2 {
                perm[2 * c + s] = 2 * self.perm[c] + p[s];
                phases[2 * c + s] = ph[s];
            }
        }
        MonomialElement::raw(perm, phases, false, Flavor::Quaternion)
    }

    /// Image in `O(4n)` under `φ(A+iB+jC+kD)`, block-major in the four real components.
    pub fn phi(&self) -> Result<MonomialElement> {
        // Block pattern of φ for each unit: entry [R][C] = (unit index, sign).
        const PAT: [[(usize, i8); 4]; 4] = [
            [(0, 1), (2, 1), (1, 1), (3, 1)],
            [(2, -1), (0, 1), (3, 1), (1, -1)],
            [(1, -1), (3, -1), (0, 1), (2, 1)],
            [(3, -1), (1, 1), (2, -1), (0, 1)],
        ];
        let n = self.dim();
        let mut perm = vec![usize::MAX; 4 * n];
        let mut phases = vec![RootOfUnity::ONE; 4 * n];
        for c in 0..n {
            let comps = self.units[c]
                .real_components()
                .ok_or_else(|| Error::Invalid("φ needs entries in {±1, ±i, ±j, ±k}".into()))?;
            let r = self.perm[c];
            for (rb, row) in PAT.iter().enumerate() {
                for (cb, &(u, sign)) in row.iter().enumerate() {
                    let v = comps[u] * sign;
                    if v != 0 {
                        perm[cb * n + c] = rb * n + r;
                        phases[cb * n + c] = RootOfUnity::from_sign(v < 0);
                    }
                }
            }
        }
        debug_assert!(perm.iter().all(|&p| p != usize::MAX));
        Ok(MonomialElement::raw(perm, phases, false, Flavor::Real))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuaternionScalar {
    I(usize),
    J(usize),
    K(usize),
}

/// Complex image of `iI`, `jI` or `kI` in `Sp(n) ⊂ U(2n)`.
pub fn quaternion_embed(q: QuaternionScalar) -> MonomialElement {
    let (n, u) = match q {
        QuaternionScalar::I(n) => (n, QuaternionUnit::I),
        QuaternionScalar::J(n) => (n, QuaternionUnit::J),
        QuaternionScalar::K(n) => (n, QuaternionUnit::K),
    };
    QuaternionMonomial::scalar(n, u).embed()
}

/// The scalar subgroup a projective class is taken modulo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    /// All scalars: `PU(n)` and its twisted extension.
    FullCircle,
    /// `⟨-I⟩`: `O(n)/⟨-I⟩`, `Sp(n)/⟨-I⟩`.
    PlusMinus,
    /// `U(n)/⟨-I⟩ ⋊ ⟨τ⟩`; `[iI]` is a genuine element, not absorbed.
    Lifted,
}

/// A monomial element modulo the scalars of its [`Center`], stored in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveElement {
    rep: MonomialElement,
    center: Center,
}

impl ProjectiveElement {
    pub fn new(rep: MonomialElement, center: Center) -> Self {
        let rep = match center {
            Center::FullCircle => {
                let z = rep.phases[0].inv();
                rep.scaled(z)
            }
            Center::PlusMinus | Center::Lifted => {
                if 2 * rep.phases[0].num() >= rep.phases[0].den() {
                    rep.scaled(RootOfUnity::MINUS_ONE)
                } else {
                    rep
                }
            }
        };
        ProjectiveElement { rep, center }
    }

    pub fn identity(n: usize, center: Center) -> Self {
        Self::new(MonomialElement::identity(n), center)
    }

    pub fn rep(&self) -> &MonomialElement {
        &self.rep
    }

    pub fn center(&self) -> Center {
        self.center
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.center != o.center {
            return Err(Error::Invalid(format!("center {:?} vs {:?}", self.center, o.center)));
        }
        Ok(())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        Ok(Self::new(self.rep.mul(&o.rep)?, self.center))
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.rep.inverse(), self.center)
    }

    pub fn is_identity(&self) -> bool {
        match self.rep.scalar_value() {
            None => false,
            Some(z) => match self.center {
                Center::FullCircle => true,
                Center::PlusMinus | Center::Lifted => z.as_sign().is_some(),
            },
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::new(self.rep.pow(e), self.center)
    }
}

/// The scalar `λ` with `ABA⁻¹B⁻¹ = λI`.
pub fn commutator_scalar(a: &ProjectiveElement, b: &ProjectiveElement) -> Result<RootOfUnity> {
    a.compatible(b)?;
    a.rep.commutator(&b.rep)?.scalar_value().ok_or(Error::NotScalarCommutator)
}
