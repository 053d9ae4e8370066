//! Conjugacy-class invariants of closed abelian subgroups satisfying `dim 𝔤₀^F = dim F`:
//! enumeration, canonical representatives, classification, maximality and Weyl orders.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian::GroupStructure;
use crate::error::{Error, Result};
use crate::f2msms::{
    enumerate_classes_of, enumerate_twisted_classes, invert, normal_basis, twisted_complement, F2Space, Model,
    Msms, MsmsJson, Vector,
};
use crate::monomial::{clock, named_matrix, quaternion_embed, shift, MonomialElement, NamedMatrix, QuaternionScalar};
use crate::pairing::{
    bf_from_part, block_square_signs, finite_part, kernel_m, symplectic_reduction, table_of, BfData, FinitePart,
    PairingTable,
};
use crate::presentation::{AbelianPresentation, Circle, Family};
use crate::twisted::lift_twisted;

/// Invariant data shared by the orthogonal, symplectic and twisted families.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockInvariant {
    pub n: usize,
    pub k: usize,
    pub s0: usize,
    pub s1: usize,
    /// Block dimensions of `B_F` (quaternionic dimensions for `Sp(n)/⟨-I⟩`), ascending.
    pub bf_blocks: Vec<usize>,
    /// `F₂`-rank of `B_F F₀ / F₀`.
    pub bf_rank: usize,
    /// The refinements in canonical form on the standard space.
    pub msms: MsmsJson,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ClassInvariant {
    Pu { n: usize, seq: Vec<u64> },
    Po(BlockInvariant),
    Psp(BlockInvariant),
    Twisted(BlockInvariant),
}

impl ClassInvariant {
    pub fn family(&self) -> Family {
        match self {
            ClassInvariant::Pu { .. } => Family::Pu,
            ClassInvariant::Po(_) => Family::Po,
            ClassInvariant::Psp(_) => Family::Psp,
            ClassInvariant::Twisted(_) => Family::Twisted,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ClassInvariant::Pu { n, .. } => *n,
            ClassInvariant::Po(b) | ClassInvariant::Psp(b) | ClassInvariant::Twisted(b) => b.n,
        }
    }

    pub fn blocks(&self) -> Option<&BlockInvariant> {
        match self {
            ClassInvariant::Pu { .. } => None,
            ClassInvariant::Po(b) | ClassInvariant::Psp(b) | ClassInvariant::Twisted(b) => Some(b),
        }
    }

    fn from_blocks(family: Family, b: BlockInvariant) -> Self {
        match family {
            Family::Po => ClassInvariant::Po(b),
            Family::Psp => ClassInvariant::Psp(b),
            Family::Twisted => ClassInvariant::Twisted(b),
            Family::Pu => unreachable!("pu has no block invariant"),
        }
    }

    /// Torus rank plus one for `PU(n)`: `n / Π nᵢ`.
    pub fn pu_torus_size(&self) -> Option<usize> {
        match self {
            ClassInvariant::Pu { n, seq } => Some(n / seq.iter().product::<u64>() as usize),
            _ => None,
        }
    }

    /// Check the family relations and the shape of the refinements.
    pub fn validate(&self) -> Result<()> {
        match self {
            ClassInvariant::Pu { n, seq } => {
                if *n == 0 {
                    return Err(Error::Invalid("n must be positive".into()));
                }
                if seq.iter().any(|&x| x < 2) || seq.windows(2).any(|w| w[0] % w[1] != 0) {
                    return Err(Error::Invalid(format!("{seq:?} is not a divisor chain of integers ≥ 2")));
                }
                let p: u64 = seq.iter().product();
                if *n as u64 % p != 0 {
                    return Err(Error::Invalid(format!("Π nᵢ = {p} does not divide n = {n}")));
                }
                Ok(())
            }
            ClassInvariant::Po(b) | ClassInvariant::Psp(b) | ClassInvariant::Twisted(b) => {
                let family = self.family();
                let dim = b.k.checked_mul(2).filter(|&d| d < 32).ok_or_else(|| Error::Invalid("k too large".into()))?;
                let unit = 1usize << b.k;
                let ok = match family {
                    Family::Psp if b.k == 0 => b.s0 == 0 && b.s1 == b.n,
                    Family::Psp => (unit / 2) * b.s0 + unit * b.s1 == b.n,
                    _ => unit * b.s0 + 2 * unit * b.s1 == b.n,
                };
                if !ok {
                    return Err(Error::Invalid(format!(
                        "(k, s0, s1) = ({}, {}, {}) does not fit {family} of degree {}",
                        b.k, b.s0, b.s1, b.n
                    )));
                }
                if family == Family::Twisted && b.n < 2 {
                    return Err(Error::Invalid("twisted family needs n ≥ 2".into()));
                }
                let m = Msms::try_from(&b.msms)?;
                let space_dim = if family == Family::Twisted { dim + 1 } else { dim };
                if m.space != F2Space::standard(b.k, space_dim - dim)? {
                    return Err(Error::Invalid("msms must live on the standard space".into()));
                }
                if m.s() != b.s0 {
                    return Err(Error::Invalid(format!("msms has {} refinements, expected s0 = {}", m.s(), b.s0)));
                }
                let model = family_model(family, b.k)?;
                let target = model.msms()?;
                for &mu in m.mus() {
                    let one = Msms::new(m.space.clone(), vec![mu])?;
                    if !one.is_isomorphic(&target)? {
                        return Err(Error::Invalid(format!("refinement is not of the {model:?} type")));
                    }
                }
                if family == Family::Twisted && twisted_complement(&m).is_none() {
                    return Err(Error::Invalid("refinements have no common plus-type complement".into()));
                }
                if m != m.canonical()? {
                    return Err(Error::Invalid("msms is not in canonical form".into()));
                }
                Ok(())
            }
        }
    }
}

/// The single-refinement model each block refinement must be isomorphic to.
pub fn family_model(family: Family, k: usize) -> Result<Model> {
    match family {
        Family::Po => Ok(Model::Plus(k)),
        Family::Psp if k == 0 => Ok(Model::Plus(0)),
        Family::Psp => Ok(Model::Minus(k)),
        Family::Twisted => Ok(Model::Twisted(k)),
        Family::Pu => Err(Error::FamilyMismatch("pu has no refinements".into())),
    }
}

/// All chains `n₁, …, n_s` with `nᵢ ≥ 2`, `n_{i+1} | nᵢ` and `Π nᵢ | n`.
pub fn divisor_chains(n: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, bound: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(cur.clone());
        for d in 2..=rest {
            if rest % d == 0 && bound % d == 0 {
                cur.push(d);
                go(rest / d, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn block_dims(family: Family, k: usize, s0: usize, s1: usize) -> Vec<usize> {
    let unit = if family == Family::Psp { (1usize << k) / 2 } else { 1 << k };
    let big = if family == Family::Psp { 1 << k } else { 2 << k };
    let mut v = vec![unit; s0];
    v.extend(std::iter::repeat(big).take(s1));
    v.sort_unstable();
    v
}

/// Every invariant of the family at degree `n`, sorted by JSON encoding.
///
/// For the block families this covers the stratum where `B_F` has full rank
/// `max(s0 − 1, 0)`, which contains every maximal abelian subgroup.
pub fn enumerate_invariants(family: Family, n: usize) -> Result<Vec<ClassInvariant>> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let mut out = Vec::new();
    match family {
        Family::Pu => {
            for seq in divisor_chains(n as u64) {
                out.push(ClassInvariant::Pu { n, seq });
            }
        }
        Family::Twisted if n < 2 => return Err(Error::Invalid("twisted family needs n ≥ 2".into())),
        _ => {
            if family == Family::Psp {
                let torus = Msms::new(F2Space::standard(0, 0)?, vec![])?;
                out.push(ClassInvariant::Psp(BlockInvariant {
                    n,
                    k: 0,
                    s0: 0,
                    s1: n,
                    bf_blocks: vec![1; n],
                    bf_rank: 0,
                    msms: MsmsJson::from(&torus),
                }));
            }
            let kmin = if family == Family::Psp { 1 } else { 0 };
            let mut k = kmin;
            loop {
                let (unit, big) = match family {
                    Family::Psp => (1usize << (k - 1), 1usize << k),
                    _ => (1usize << k, 2usize << k),
                };
                if unit > n {
                    break;
                }
                let space_dim = 2 * k + usize::from(family == Family::Twisted);
                if space_dim > crate::f2msms::MAX_DIM {
                    return Err(Error::BoundExceeded(format!("k = {k} needs an F₂ space of dimension {space_dim}")));
                }
                for s1 in 0..=n / big {
                    let rest = n - s1 * big;
                    if rest % unit != 0 {
                        continue;
                    }
                    let s0 = rest / unit;
                    for m in msms_classes(family, k, s0)? {
                        out.push(ClassInvariant::from_blocks(
                            family,
                            BlockInvariant {
                                n,
                                k,
                                s0,
                                s1,
                                bf_blocks: block_dims(family, k, s0, s1),
                                bf_rank: s0.saturating_sub(1),
                                msms: MsmsJson::from(&m),
                            },
                        ));
                    }
                }
                k += 1;
            }
        }
    }
    let mut keyed: Vec<(String, ClassInvariant)> =
        out.into_iter().map(|inv| (serde_json::to_string(&inv).expect("serializable"), inv)).collect();
    keyed.sort();
    keyed.dedup_by(|a, b| a.0 == b.0);
    Ok(keyed.into_iter().map(|(_, inv)| inv).collect())
}

fn msms_classes(family: Family, k: usize, s0: usize) -> Result<Vec<Msms>> {
    if family == Family::Twisted {
        return enumerate_twisted_classes(k, s0);
    }
    let model = family_model(family, k)?;
    if s0 == 0 {
        return Ok(vec![Msms::new(model.space()?, vec![])?]);
    }
    Ok(enumerate_classes_of(model, s0)?.into_iter().map(|c| c.representative).collect())
}

fn kron_all(factors: &[MonomialElement]) -> Result<MonomialElement> {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.kron(f)?;
    }
    Ok(acc)
}

/// `clock`/`shift` on tensor factor `pos` of `ℂ^{d₀} ⊗ ⋯`.
fn on_factor(dims: &[usize], pos: usize, x: &MonomialElement) -> Result<MonomialElement> {
    let factors: Vec<MonomialElement> =
        dims.iter().enumerate().map(|(i, &d)| if i == pos { x.clone() } else { MonomialElement::identity(d) }).collect();
    kron_all(&factors)
}

fn pu_rep(n: usize, seq: &[u64]) -> Result<AbelianPresentation> {
    let m = n / seq.iter().product::<u64>() as usize;
    let mut dims: Vec<usize> = seq.iter().map(|&d| d as usize).collect();
    dims.push(m);
    let mut gens = Vec::new();
    for (i, &d) in seq.iter().enumerate() {
        gens.push(on_factor(&dims, i, &clock(d as usize, 1))?);
        gens.push(on_factor(&dims, i, &shift(d as usize, 1))?);
    }
    // one phase circle per slot of the last factor but one
    let torus = (0..m.saturating_sub(1))
        .map(|c| Circle::Phase { weights: (0..n).filter(|j| j % m == c).map(|j| (j, 1)).collect() })
        .collect();
    AbelianPresentation::new(Family::Pu, n, gens, torus)
}

/// Images of the standard basis `x_1, y_1, …` on `ℝ^{2^k}`: `x_j ↦ I_{1,1}` and
/// `y_j ↦ J′_1` on tensor factor `j`, realizing `plus(k)`.
fn real_basis(k: usize) -> Result<Vec<MonomialElement>> {
    let dims = vec![2; k];
    let x = named_matrix(NamedMatrix::Ipq(1, 1));
    let y = named_matrix(NamedMatrix::Jprime(1));
    let mut out = Vec::new();
    for j in 0..k {
        out.push(on_factor(&dims, j, &x)?);
        out.push(on_factor(&dims, j, &y)?);
    }
    Ok(out)
}

/// Images of the standard basis on `ℍ^{2^{k-1}·extra}` as complex matrices, realizing
/// `minus(k)`: real factors for the first `k − 1` pairs, `x_k ↦ iI`, `y_k ↦ jI`.
fn quaternion_basis(k: usize, extra: usize) -> Result<Vec<MonomialElement>> {
    let m = (1usize << (k - 1)) * extra;
    let two = MonomialElement::identity(2);
    let tail = MonomialElement::identity(extra).kron(&two)?;
    let mut out = Vec::new();
    for r in real_basis(k - 1)? {
        out.push(r.kron(&tail)?.as_complex());
    }
    out.push(quaternion_embed(QuaternionScalar::I(m)).as_complex());
    out.push(quaternion_embed(QuaternionScalar::J(m)).as_complex());
    Ok(out)
}

/// `ρ(w)` for `w ∈ V`: the ordered product of basis images over the bits of `w`.
fn word(basis: &[MonomialElement], dim: usize, w: Vector) -> Result<MonomialElement> {
    let mut acc = MonomialElement::identity(dim);
    for (i, b) in basis.iter().enumerate() {
        if w >> i & 1 == 1 {
            acc = acc.mul(b)?;
        }
    }
    Ok(acc)
}

/// Images of the standard basis under a representation whose squares realize `mu`.
fn twisted_basis(basis: &[MonomialElement], dim: usize, k: usize, mu: Vector, model: Model) -> Result<Vec<MonomialElement>> {
    let space = F2Space::standard(k, 0)?;
    let g = normal_basis(&space, mu)?;
    debug_assert_eq!(space.pullback(mu, &g), model.refinement()?);
    let h = invert(&g);
    h.iter().map(|&w| word(basis, dim, w)).collect()
}

fn sign_block(dims: &[usize], which: usize) -> MonomialElement {
    let neg: Vec<bool> =
        dims.iter().enumerate().flat_map(|(b, &d)| std::iter::repeat(b == which).take(d)).collect();
    MonomialElement::signs(&neg)
}

/// An explicit presentation realizing the invariant.
pub fn canonical_rep(inv: &ClassInvariant) -> Result<AbelianPresentation> {
    inv.validate()?;
    let b = match inv {
        ClassInvariant::Pu { n, seq } => return pu_rep(*n, seq),
        ClassInvariant::Po(b) | ClassInvariant::Psp(b) | ClassInvariant::Twisted(b) => b,
    };
    let family = inv.family();
    let k = b.k;
    let msms = Msms::try_from(&b.msms)?;
    // refinements on the nondegenerate part, in standard coordinates
    let (mus, flavor_complex): (Vec<Vector>, bool) = match family {
        Family::Twisted => {
            let f = twisted_complement(&msms).ok_or_else(|| Error::Invalid("no plus-type complement".into()))?;
            let r: Vector = 1 << (2 * k);
            // w_i = e_i + f(e_i)·r spans the complement
            let w: Vec<Vector> = (0..2 * k).map(|i| (1 << i) ^ if f >> i & 1 == 1 { r } else { 0 }).collect();
            (msms.mus().iter().map(|&mu| msms.space.pullback(mu, &w)).collect(), true)
        }
        Family::Psp => (msms.mus().to_vec(), true),
        _ => (msms.mus().to_vec(), false),
    };
    let psp = family == Family::Psp;
    let dim = family.matrix_dim(b.n);
    let mut gens: Vec<MonomialElement> = Vec::new();
    let mut torus = Vec::new();
    if psp && k == 0 {
        for c in 0..b.n {
            torus.push(Circle::Phase { weights: vec![(2 * c, 1), (2 * c + 1, -1)] });
        }
        return AbelianPresentation::new(family, b.n, gens, torus);
    }
    let small = if psp { 2 << (k - 1) } else { 1 << k };
    let (std_small, std_big) = if psp {
        (quaternion_basis(k, 1)?, quaternion_basis(k, 2)?)
    } else {
        let r = real_basis(k)?;
        let two = MonomialElement::identity(2);
        let big = r.iter().map(|x| x.kron(&two)).collect::<Result<Vec<_>>>()?;
        (r, big)
    };
    let model = family_model(if family == Family::Twisted { Family::Po } else { family }, k)?;
    let per_block: Vec<Vec<MonomialElement>> = mus
        .iter()
        .map(|&mu| if k == 0 { Ok(vec![]) } else { twisted_basis(&std_small, small, k, mu, model) })
        .collect::<Result<_>>()?;
    let mut dims = vec![small; b.s0];
    dims.extend(std::iter::repeat(2 * small).take(b.s1));
    for i in 0..2 * k {
        let mut parts: Vec<MonomialElement> = per_block.iter().map(|bl| bl[i].clone()).collect();
        parts.extend(std::iter::repeat(std_big[i].clone()).take(b.s1));
        gens.push(MonomialElement::direct_sum(&parts)?);
    }
    for j in 0..b.s0.saturating_sub(1) {
        gens.push(sign_block(&dims, j));
    }
    let base = small * b.s0;
    for c in 0..b.s1 {
        let off = base + c * 2 * small;
        let pairs = if psp {
            // rotate quaternionic coordinates 2i and 2i+1 of the block
            (0..small / 2).flat_map(|i| [(off + 4 * i, off + 4 * i + 2), (off + 4 * i + 1, off + 4 * i + 3)]).collect()
        } else {
            (0..small).map(|i| (off + 2 * i, off + 2 * i + 1)).collect()
        };
        torus.push(Circle::Rotation { pairs });
    }
    if flavor_complex {
        gens = gens.into_iter().map(|g| g.as_complex()).collect();
    }
    if family == Family::Twisted {
        gens.insert(0, MonomialElement::tau(dim));
    }
    AbelianPresentation::new(family, b.n, gens, torus)
}

/// Compute the invariant of a presentation.
///
/// The result classifies `F` when `F` satisfies `dim 𝔤₀^F = dim F`; otherwise it is
/// only the measured tuple.
pub fn classify(f: &AbelianPresentation, cap: usize) -> Result<ClassInvariant> {
    match f.family() {
        Family::Pu => {
            let t = table_of(&finite_part(f, cap)?)?;
            Ok(ClassInvariant::Pu { n: f.n(), seq: symplectic_reduction(&t)?.seq })
        }
        Family::Po | Family::Psp => {
            let fp = finite_part(f, cap)?;
            let t = table_of(&fp)?;
            let bf = bf_from_part(&fp, &|c| t.in_radical(c))?;
            let (q, st) = t.quotient(&kernel_m(&t))?;
            let b = block_invariant(f, &fp, &t, &bf, &q, &st)?;
            Ok(ClassInvariant::from_blocks(f.family(), b))
        }
        Family::Twisted => {
            let lifted = lift_twisted(f, cap)?;
            let fp = lifted.unitary_part(cap)?;
            let t = table_of(&fp)?;
            let ker = lifted.ker_nu(&fp, &t)?;
            let bf = bf_from_part(&fp, &|c| ker.contains(c))?;
            let sub: Vec<Vec<u64>> = ker.into_iter().collect();
            let (q, st) = t.quotient(&sub)?;
            let b = block_invariant(f, &fp, &t, &bf, &q, &st)?;
            Ok(ClassInvariant::Twisted(b))
        }
    }
}

fn block_invariant(
    f: &AbelianPresentation,
    fp: &FinitePart,
    t: &PairingTable,
    bf: &BfData,
    q: &PairingTable,
    st: &GroupStructure,
) -> Result<BlockInvariant> {
    let family = f.family();
    if q.invariant_factors.iter().any(|&d| d != 2) {
        return Err(Error::Undetermined("the quotient by the kernel is not an elementary abelian 2-group".into()));
    }
    let gram: Vec<Vector> = q
        .m_matrix
        .iter()
        .map(|row| row.iter().enumerate().fold(0, |acc, (j, z)| acc | (Vector::from(!z.is_one()) << j)))
        .collect();
    let space = F2Space::new(q.rank(), gram)?;
    let k = space.rank() / 2;
    let expect_radical = usize::from(family == Family::Twisted);
    if space.radical_dim() != expect_radical {
        return Err(Error::Undetermined(format!(
            "the pairing on the quotient has a {}-dimensional radical",
            space.radical_dim()
        )));
    }
    let reps: Vec<MonomialElement> = st
        .basis
        .iter()
        .map(|w| {
            let c: Vec<u64> =
                w.iter().zip(&t.invariant_factors).map(|(&x, &d)| x.rem_euclid(d as i64) as u64).collect();
            Ok(fp.representative(&c)?.rep().clone())
        })
        .collect::<Result<_>>()?;
    let dim = f.matrix_dim();
    let turns: Vec<MonomialElement> = f.torus().iter().map(|c| c.quarter_turn(dim)).collect();
    let small = 1usize << k;
    let unit = if family == Family::Psp { 2 } else { 1 };
    let mut bf_blocks = Vec::new();
    let mut mus: Vec<Vector> = Vec::new();
    let turn_signs: Vec<Vec<Option<i8>>> =
        turns.iter().map(|qt| block_square_signs(qt, &bf.products, &bf.blocks)).collect::<Result<_>>()?;
    let rep_signs: Vec<Vec<Option<i8>>> =
        reps.iter().map(|a| block_square_signs(a, &bf.products, &bf.blocks)).collect::<Result<_>>()?;
    for (b, block) in bf.blocks.iter().enumerate() {
        bf_blocks.push(block.dim / unit);
        if turn_signs.iter().any(|signs| signs[b] == Some(-1)) {
            continue;
        }
        if block.dim % small != 0 {
            return Err(Error::Undetermined(format!("B_F block of dimension {} is not a multiple of {small}", block.dim)));
        }
        let mut vals: Vector = 0;
        for (i, signs) in rep_signs.iter().enumerate() {
            match signs[b] {
                Some(1) => {}
                Some(_) => vals |= 1 << i,
                None => return Err(Error::Undetermined("a square is not ±1 on a B_F block".into())),
            }
        }
        for _ in 0..block.dim / small {
            mus.push(vals);
        }
    }
    bf_blocks.sort_unstable();
    let s0 = mus.len();
    let msms = Msms::new(space, mus)?.standardized()?.canonical()?;
    Ok(BlockInvariant {
        n: f.n(),
        k,
        s0,
        s1: f.dim_f(),
        bf_blocks,
        bf_rank: bf.rank_mod_f0,
        msms: MsmsJson::from(&msms),
    })
}

/// Maximality from the invariant and the measured `rank(ker m / F₀)`.
pub fn is_maximal(inv: &ClassInvariant, rank_kerm_mod_f0: usize) -> bool {
    let Some(b) = inv.blocks() else { return true };
    let full = b.s0.saturating_sub(1);
    if rank_kerm_mod_f0 < full {
        return false;
    }
    if (b.s0, b.s1) != (2, 0) {
        return rank_kerm_mod_f0 == full;
    }
    // elementary abelian exactly when the two refinements agree
    let mus = &b.msms.mus;
    mus.len() == 2 && mus[0] != mus[1] && rank_kerm_mod_f0 == full
}

/// One composition factor of the Weyl group with its order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylFactor {
    pub name: String,
    #[serde(serialize_with = "as_decimal")]
    pub order: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylDescription {
    pub family: Family,
    pub factors: Vec<WeylFactor>,
    /// Product of the factor orders along the exact sequence.
    #[serde(serialize_with = "as_decimal")]
    pub total_order: BigUint,
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

fn pow(base: &BigUint, e: usize) -> BigUint {
    (0..e).fold(BigUint::from(1u32), |acc, _| acc * base)
}

/// Largest `|V|` for which `|Sp(V)|` is counted by enumerating `V`.
pub const SP_BRUTE_LIMIT: u128 = 10_000;

fn chain_size(seq: &[u64]) -> u128 {
    seq.iter().map(|&d| (d as u128) * (d as u128)).product()
}

/// Elements of exact order `e` in `⊕ (ℤ/nᵢ)²`, by enumeration.
fn count_order_enumerated(seq: &[u64], e: u64) -> u128 {
    let factors: Vec<u64> = seq.iter().flat_map(|&d| [d, d]).collect();
    crate::abelian::all_coords(&factors)
        .filter(|c| c.iter().zip(&factors).fold(1u64, |acc, (&a, &d)| acc.lcm(&(d / a.gcd(&d)))) == e)
        .count() as u128
}

fn mobius(mut n: u64) -> i128 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

/// Elements of exact order `e`, by Möbius inversion of `#{x : x^d = 1} = Π gcd(d, nᵢ)²`.
fn count_order_formula(seq: &[u64], e: u64) -> BigUint {
    let mut pos = BigUint::from(0u32);
    let mut neg = BigUint::from(0u32);
    for d in (1..=e).filter(|d| e % d == 0) {
        let mu = mobius(e / d);
        if mu == 0 {
            continue;
        }
        let term = seq.iter().fold(BigUint::from(1u32), |acc, &n| {
            let g = d.gcd(&n);
            acc * BigUint::from(g) * BigUint::from(g)
        });
        if mu > 0 {
            pos += term;
        } else {
            neg += term;
        }
    }
    pos - neg
}

/// `|Sp(V)|` for `V = ⊕ (ℤ/nᵢ)²` with its standard form, peeling off one hyperbolic
/// pair at a time: the pairs `(a, b)` with `m(a, b) = ω_{n₁}^{-1}` form one orbit,
/// of size `#{a : ord a = n₁}·|V|/n₁`.
pub fn symplectic_order(seq: &[u64]) -> BigUint {
    let mut total = BigUint::from(1u32);
    for i in 0..seq.len() {
        let rest = &seq[i..];
        let size = chain_size(rest);
        let count = if size <= SP_BRUTE_LIMIT {
            big(count_order_enumerated(rest, rest[0]))
        } else {
            count_order_formula(rest, rest[0])
        };
        total = total * count * big(size / rest[0] as u128);
    }
    total
}

/// The same order with the element counts taken from the closed formula only.
pub fn symplectic_order_formula(seq: &[u64]) -> BigUint {
    let mut total = BigUint::from(1u32);
    for i in 0..seq.len() {
        let rest = &seq[i..];
        total = total * count_order_formula(rest, rest[0]) * big(chain_size(rest) / rest[0] as u128);
    }
    total
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `|Sp(2k, ℤ/q)| = Π_{p^e ∥ q} p^{(e−1)k(2k+1)} · p^{k²} Π_{i=1}^{k} (p^{2i} − 1)`.
pub fn symplectic_order_homogeneous(q: u64, k: usize) -> BigUint {
    let mut total = BigUint::from(1u32);
    for (p, e) in prime_powers(q) {
        let p = BigUint::from(p);
        total *= pow(&p, (e as usize - 1) * k * (2 * k + 1) + k * k);
        for i in 1..=k {
            total *= pow(&p, 2 * i) - BigUint::from(1u32);
        }
    }
    total
}

/// Composition factors of `W(F) = N(F)/C(F)` and their product.
pub fn weyl_description(inv: &ClassInvariant) -> Result<WeylDescription> {
    inv.validate()?;
    let family = inv.family();
    let mut factors = Vec::new();
    match inv {
        ClassInvariant::Pu { n, seq } => {
            let m = n / seq.iter().product::<u64>() as usize;
            let v = big(chain_size(seq));
            factors.push(WeylFactor { name: format!("Hom(V, U(1)^{m}/Z_{m})"), order: pow(&v, m - 1) });
            factors.push(WeylFactor { name: format!("S_{m}"), order: factorial(m) });
            factors.push(WeylFactor { name: format!("Sp(V), V = {seq:?}"), order: symplectic_order(seq) });
        }
        ClassInvariant::Po(b) | ClassInvariant::Psp(b) | ClassInvariant::Twisted(b) => {
            let msms = Msms::try_from(&b.msms)?;
            let blocks = b.s0 + b.s1;
            let b_rank = blocks.saturating_sub(1);
            let hom_rank = msms.space.dim();
            factors.push(WeylFactor {
                name: format!("Hom((Z/2)^{hom_rank}, B_F = (Z/2)^{b_rank})"),
                order: pow(&BigUint::from(2u32), hom_rank * b_rank),
            });
            let sym = msms.multiplicities().iter().fold(BigUint::from(1u32), |acc, &a| acc * factorial(a));
            factors.push(WeylFactor { name: "S_mu".into(), order: sym });
            factors.push(WeylFactor { name: "Aut(V, m, mu)".into(), order: big(msms.aut_order()?) });
            factors.push(WeylFactor {
                name: format!("(Z/2)^{s} x S_{s}", s = b.s1),
                order: pow(&BigUint::from(2u32), b.s1) * factorial(b.s1),
            });
        }
    }
    let total_order = factors.iter().fold(BigUint::from(1u32), |acc, f| acc * &f.order);
    Ok(WeylDescription { family, factors, total_order })
}

/// Whether every prime dividing `n` divides `m`, i.e. `n | m^k` for some `k`.
pub fn quotient_predicate(n: u64, m: u64) -> Result<bool> {
    if n == 0 || m == 0 || n % m != 0 {
        return Err(Error::Invalid(format!("{m} does not divide {n}")));
    }
    Ok(prime_powers(n).iter().all(|&(p, _)| m % p == 0))
}

/// Measured 2-rank of `ker m / F₀` (of `ker ν′ / F₀` for the twisted family).
pub fn kernel_rank(f: &AbelianPresentation, cap: usize) -> Result<usize> {
    let (t, ker): (PairingTable, Vec<Vec<u64>>) = match f.family() {
        Family::Twisted => {
            let l = lift_twisted(f, cap)?;
            let fp = l.unitary_part(cap)?;
            let t = table_of(&fp)?;
            let ker = l.ker_nu(&fp, &t)?.into_iter().collect();
            (t, ker)
        }
        Family::Pu => return Err(Error::FamilyMismatch("kernel rank is defined for po, psp and twisted".into())),
        _ => {
            let t = table_of(&finite_part(f, cap)?)?;
            let ker = t.radical();
            (t, ker)
        }
    };
    let two_torsion = ker.iter().filter(|x| t.element_order(x) <= 2).count();
    Ok(two_torsion.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pu(n: usize, seq: &[u64]) -> ClassInvariant {
        ClassInvariant::Pu { n, seq: seq.to_vec() }
    }

    #[test]
    fn pu_enumeration_examples() {
        let seqs = |n| -> Vec<Vec<u64>> {
            enumerate_invariants(Family::Pu, n)
                .unwrap()
                .into_iter()
                .map(|i| match i {
                    ClassInvariant::Pu { seq, .. } => seq,
                    _ => unreachable!(),
                })
                .collect()
        };
        let mut four = seqs(4);
        four.sort();
        assert_eq!(four, vec![vec![], vec![2], vec![2, 2], vec![4]]);
        assert_eq!(seqs(6).len(), 4);
        assert_eq!(seqs(1), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn pauli_round_trip() {
        let f = canonical_rep(&pu(2, &[2])).unwrap();
        assert_eq!(f.generators(), &[clock(2, 1), shift(2, 1)]);
        assert_eq!(classify(&f, 1000).unwrap(), pu(2, &[2]));
        let json = serde_json::to_string(&pu(8, &[4, 2])).unwrap();
        assert_eq!(json, r#"{"family":"pu","n":8,"seq":[4,2]}"#);
    }

    #[test]
    fn po_h2_example() {
        let f = AbelianPresentation::new(
            Family::Po,
            2,
            vec![named_matrix(NamedMatrix::Ipq(1, 1)), named_matrix(NamedMatrix::Jprime(1))],
            vec![],
        )
        .unwrap();
        let inv = classify(&f, 1000).unwrap();
        let b = inv.blocks().unwrap();
        assert_eq!((b.k, b.s0, b.s1, b.bf_rank), (1, 1, 0, 0));
        assert_eq!(b.bf_blocks, vec![2]);
        assert_eq!(Msms::try_from(&b.msms).unwrap().defects(), vec![2]);
        let rep = canonical_rep(&inv).unwrap();
        assert_eq!(classify(&rep, 1000).unwrap(), inv);
        assert_eq!(weyl_description(&inv).unwrap().total_order, BigUint::from(2u32));
    }

    #[test]
    fn psp_examples() {
        let invs = enumerate_invariants(Family::Psp, 1).unwrap();
        assert_eq!(invs.len(), 2);
        let h = invs.iter().find(|i| i.blocks().unwrap().k == 1).unwrap();
        let rep = canonical_rep(h).unwrap();
        assert_eq!(
            rep.generators(),
            &[quaternion_embed(QuaternionScalar::I(1)).as_complex(), quaternion_embed(QuaternionScalar::J(1)).as_complex()]
        );
        let torus = invs.iter().find(|i| i.blocks().unwrap().k == 0).unwrap();
        let b = classify(&canonical_rep(torus).unwrap(), 1000).unwrap();
        assert_eq!((b.blocks().unwrap().s0, b.blocks().unwrap().s1), (0, 1));
    }

    #[test]
    fn round_trips_small() {
        for family in [Family::Po, Family::Psp, Family::Twisted] {
            for n in 2..=8 {
                for inv in enumerate_invariants(family, n).unwrap() {
                    if inv.blocks().unwrap().k > 2 {
                        continue;
                    }
                    let rep = canonical_rep(&inv).unwrap();
                    let got = classify(&rep, 1_000_000).unwrap();
                    assert_eq!(got, inv, "{family} n = {n}");
                }
            }
        }
    }

    #[test]
    fn weyl_orders() {
        let o = |inv: &ClassInvariant| weyl_description(inv).unwrap().total_order;
        assert_eq!(o(&pu(2, &[2])), BigUint::from(6u32));
        assert_eq!(o(&pu(3, &[3])), BigUint::from(24u32));
        for n in 1..=5usize {
            assert_eq!(o(&pu(n, &[])), factorial(n));
        }
    }

    #[test]
    fn symplectic_orders_agree() {
        for q in 2..=12u64 {
            for k in 1..=3usize {
                let seq = vec![q; k];
                let h = symplectic_order_homogeneous(q, k);
                assert_eq!(symplectic_order_formula(&seq), h, "q = {q}, k = {k}");
                if chain_size(&seq) <= SP_BRUTE_LIMIT {
                    assert_eq!(symplectic_order(&seq), h);
                }
            }
        }
        assert_eq!(symplectic_order(&[2, 2, 2, 2]), BigUint::from(47_377_612_800u64));
        assert_eq!(symplectic_order(&[4, 2]), symplectic_order_formula(&[4, 2]));
    }

    #[test]
    fn quotient_predicate_examples() {
        assert!(quotient_predicate(4, 2).unwrap());
        assert!(!quotient_predicate(6, 2).unwrap());
        assert!(quotient_predicate(12, 12).unwrap());
        assert!(quotient_predicate(4, 3).is_err());
    }

    #[test]
    fn maximality_rules() {
        let mut invs = enumerate_invariants(Family::Po, 4).unwrap();
        invs.retain(|i| {
            let b = i.blocks().unwrap();
            (b.s0, b.s1) == (2, 0)
        });
        assert_eq!(invs.len(), 2);
        let verdicts: Vec<bool> = invs.iter().map(|i| is_maximal(i, 1)).collect();
        assert!(verdicts.contains(&true) && verdicts.contains(&false));
        for inv in &invs {
            assert!(!is_maximal(inv, 0));
        }
    }
}
