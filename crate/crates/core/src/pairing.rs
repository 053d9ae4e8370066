//! The commutator pairing `m` on `F/F₀`, its radical, the 2-group `B_F`, the
//! map `ν`, and the greedy symplectic reduction that extracts `(n₁, …, n_s)`.

use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;

use crate::abelian::{all_coords, Closure, GroupStructure, Lattice};
use crate::cyclotomic::RootSum;
use crate::error::{Error, Result};
use crate::monomial::{commutator_scalar, Center, MonomialElement, ProjectiveElement};
use crate::presentation::{torus_contains, torus_sqrt, AbelianPresentation, Circle, Family};
use crate::roots::RootOfUnity;

/// The closure of the finite generators, with the quotient by its torus part.
#[derive(Clone, Debug)]
pub struct FinitePart {
    pub closure: Closure,
    /// Structure of the quotient by the elements lying in the torus, i.e. `F/F₀`.
    pub quotient: GroupStructure,
    pub in_torus: Vec<bool>,
    pub circles: Vec<Circle>,
}

impl FinitePart {
    pub fn new(gens: &[MonomialElement], circles: &[Circle], dim: usize, center: Center, cap: usize) -> Result<Self> {
        let all: Vec<ProjectiveElement> = gens.iter().map(|g| ProjectiveElement::new(g.clone(), center)).collect();
        let closure = Closure::new(all, dim, center, cap)?;
        let mut lattice: Lattice = closure.lattice.clone();
        let mut in_torus = vec![false; closure.len()];
        for (k, x) in closure.elements.iter().enumerate() {
            if torus_contains(circles, x.rep(), center) {
                in_torus[k] = true;
                if !lattice.contains(&closure.words[k]) {
                    lattice.insert(&closure.words[k]);
                }
            }
        }
        let quotient = lattice.structure()?;
        Ok(FinitePart { closure, quotient, in_torus, circles: circles.to_vec() })
    }

    /// Coordinates in `F/F₀` of closure element `k`.
    pub fn coords_of(&self, k: usize) -> Vec<u64> {
        self.quotient.coords(&self.closure.words[k])
    }

    /// A representative of the `F/F₀` class with the given coordinates.
    pub fn representative(&self, coords: &[u64]) -> Result<ProjectiveElement> {
        self.closure.evaluate(&self.quotient.word(coords))
    }
}

/// Generators of the unitary part `H_F` of a twisted presentation: unitary generators,
/// `g·u⁻¹` for the other antiunitary ones, and `u²`.
pub fn unitary_part_generators(gens: &[MonomialElement]) -> Result<Vec<MonomialElement>> {
    let Some(ui) = gens.iter().position(|g| g.conj()) else {
        return Ok(gens.to_vec());
    };
    let u = &gens[ui];
    let uinv = u.inverse();
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if i == ui {
            out.push(u.mul(u)?);
        } else if g.conj() {
            out.push(g.mul(&uinv)?);
        } else {
            out.push(g.clone());
        }
    }
    Ok(out)
}

/// A finite abelian group `⊕ ℤ/d_i` with an antisymmetric bimultiplicative form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingTable {
    pub invariant_factors: Vec<u64>,
    pub m_matrix: Vec<Vec<RootOfUnity>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<RootOfUnity>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<Vec<i8>>>,
}

impl PairingTable {
    pub fn new(invariant_factors: Vec<u64>, m_matrix: Vec<Vec<RootOfUnity>>) -> Result<Self> {
        let r = invariant_factors.len();
        if m_matrix.len() != r || m_matrix.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("m matrix does not match the group rank".into()));
        }
        for i in 0..r {
            if !m_matrix[i][i].is_one() {
                return Err(Error::Invalid(format!("m(b{i}, b{i}) ≠ 1")));
            }
            for j in 0..r {
                if m_matrix[i][j] * m_matrix[j][i] != RootOfUnity::ONE {
                    return Err(Error::Invalid(format!("m is not antisymmetric at ({i}, {j})")));
                }
                if invariant_factors[i] % m_matrix[i][j].order() != 0 {
                    return Err(Error::Invalid(format!("m(b{i}, ·) is not well defined on ℤ/{}", invariant_factors[i])));
                }
            }
        }
        Ok(PairingTable { invariant_factors, m_matrix, nu: None, mu: None })
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        all_coords(&self.invariant_factors)
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.invariant_factors).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn scale(&self, x: &[u64], c: u64) -> Vec<u64> {
        x.iter().zip(&self.invariant_factors).map(|(a, d)| (a * (c % d)) % d).collect()
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.invariant_factors).fold(1, |acc, (&a, &d)| acc.lcm(&(d / a.gcd(&d))))
    }

    /// `m(x, y) = Π m_ij^{x_i y_j}`.
    pub fn pair(&self, x: &[u64], y: &[u64]) -> RootOfUnity {
        let mut acc = RootOfUnity::ONE;
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b != 0 {
                    acc *= self.m_matrix[i][j].pow((a * b) as i64);
                }
            }
        }
        acc
    }

    fn unit(&self, i: usize) -> Vec<u64> {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        e
    }

    pub fn in_radical(&self, x: &[u64]) -> bool {
        (0..self.rank()).all(|j| self.pair(x, &self.unit(j)).is_one())
    }

    /// All elements of `ker m`.
    pub fn radical(&self) -> Vec<Vec<u64>> {
        self.elements().filter(|x| self.in_radical(x)).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().len() == 1
    }

    /// Quotient by the subgroup generated by `sub` (which must lie in the radical),
    /// with the structure describing coordinates of the old group in the new basis.
    pub fn quotient(&self, sub: &[Vec<u64>]) -> Result<(PairingTable, GroupStructure)> {
        let r = self.rank();
        let mut l = Lattice::new(r);
        for i in 0..r {
            let mut v = vec![0i64; r];
            v[i] = self.invariant_factors[i] as i64;
            l.insert(&v);
        }
        for s in sub {
            if !self.in_radical(s) {
                return Err(Error::Invalid("quotient by a subgroup outside ker m".into()));
            }
            l.insert(&s.iter().map(|&x| x as i64).collect::<Vec<_>>());
        }
        let st = l.structure()?;
        let basis: Vec<Vec<u64>> = st
            .basis
            .iter()
            .map(|w| w.iter().zip(&self.invariant_factors).map(|(&x, &d)| x.rem_euclid(d as i64) as u64).collect())
            .collect();
        let m = basis.iter().map(|a| basis.iter().map(|b| self.pair(a, b)).collect()).collect();
        Ok((PairingTable::new(st.factors.clone(), m)?, st))
    }

    /// `(A/ker m, m)`, together with the projection coordinates.
    pub fn nondegenerate_quotient(&self) -> Result<(PairingTable, GroupStructure)> {
        self.quotient(&self.radical())
    }

    /// `m(x, x) = 1`, antisymmetry and well-definedness on `⊕ ℤ/d_i`. Since `pair`
    /// extends `m_matrix` bimultiplicatively, these reduce to conditions on the basis.
    pub fn check_axioms(&self) -> Result<()> {
        let d = &self.invariant_factors;
        for i in 0..self.rank() {
            if !self.m_matrix[i][i].is_one() {
                return Err(Error::Invalid("m(x, x) ≠ 1".into()));
            }
            for j in 0..self.rank() {
                let z = self.m_matrix[i][j];
                if z * self.m_matrix[j][i] != RootOfUnity::ONE {
                    return Err(Error::Invalid("m is not antisymmetric".into()));
                }
                if d[i] % z.order() != 0 || d[j] % z.order() != 0 {
                    return Err(Error::Invalid("m is not bimultiplicative on the invariant factors".into()));
                }
            }
        }
        Ok(())
    }
}

/// Output of the greedy symplectic splitting: the sequence and the hyperbolic pairs used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub seq: Vec<u64>,
    /// Pairs `(x_i, y_i)` in coordinates of the nondegenerate quotient, with `m(x_i, y_i) = ω_{n_i}^{-1}`.
    pub pairs: Vec<(Vec<u64>, Vec<u64>)>,
    /// The nondegenerate quotient the pairs live in.
    pub table: PairingTable,
}

/// Split off hyperbolic pairs of maximal pairing order until the form is exhausted.
pub fn symplectic_reduction(t: &PairingTable) -> Result<Reduction> {
    let (q, _) = t.nondegenerate_quotient()?;
    let mut current: Vec<Vec<u64>> = q.elements().collect();
    let mut seq = Vec::new();
    let mut pairs = Vec::new();
    loop {
        let exponent = current.iter().map(|x| q.element_order(x)).max().unwrap_or(1);
        if exponent == 1 {
            break;
        }
        // lexicographically first pair of maximal order; nondegeneracy makes the
        // maximum equal to the exponent of the current subgroup
        let mut found = None;
        'outer: for x in &current {
            for y in &current {
                if q.pair(x, y).order() == exponent {
                    found = Some((x.clone(), y.clone()));
                    break 'outer;
                }
            }
        }
        let (x, y) = found.ok_or_else(|| Error::Invalid("pairing degenerate on a complement".into()))?;
        let n1 = exponent;
        let e = q.pair(&x, &y).exponent_in(n1).expect("order divides n1") as i64;
        let inv = (e.extended_gcd(&(n1 as i64)).x).rem_euclid(n1 as i64);
        let c = ((n1 as i64 - inv) % n1 as i64) as u64;
        let y = q.scale(&y, c);
        debug_assert_eq!(q.pair(&x, &y), RootOfUnity::omega(n1).inv());
        let rest: Vec<Vec<u64>> =
            current.iter().filter(|z| q.pair(z, &x).is_one() && q.pair(z, &y).is_one()).cloned().collect();
        // ⟨x, y⟩ ∩ rest = 1
        let rest_set: HashSet<&Vec<u64>> = rest.iter().collect();
        for a in 0..n1 {
            for b in 0..n1 {
                let z = q.add(&q.scale(&x, a), &q.scale(&y, b));
                if (a, b) != (0, 0) && rest_set.contains(&z) {
                    return Err(Error::Invalid("hyperbolic pair meets its complement".into()));
                }
            }
        }
        if rest.len() as u64 * n1 * n1 != current.len() as u64 {
            return Err(Error::Invalid("hyperbolic pair and complement do not span".into()));
        }
        seq.push(n1);
        pairs.push((x, y));
        current = rest;
    }
    Ok(Reduction { seq, pairs, table: q })
}

/// The finite part of `F` (or of `H_F` for the twisted family) with its `m`-table.
pub fn finite_part(f: &AbelianPresentation, cap: usize) -> Result<FinitePart> {
    let gens = match f.family() {
        Family::Twisted => unitary_part_generators(f.generators())?,
        _ => f.generators().to_vec(),
    };
    FinitePart::new(&gens, f.torus(), f.matrix_dim(), f.center(), cap)
}

pub fn table_of(fp: &FinitePart) -> Result<PairingTable> {
    let basis: Vec<ProjectiveElement> =
        fp.quotient.basis.iter().map(|w| fp.closure.evaluate(w)).collect::<Result<_>>()?;
    let mut m = Vec::new();
    for a in &basis {
        let mut row = Vec::new();
        for b in &basis {
            row.push(commutator_scalar(a, b)?);
        }
        m.push(row);
    }
    PairingTable::new(fp.quotient.factors.clone(), m)
}

/// `m` on `F/F₀` (on `H_F/F₀` for the twisted family).
pub fn build_pairing(f: &AbelianPresentation, cap: usize) -> Result<PairingTable> {
    table_of(&finite_part(f, cap)?)
}

/// Generators of `ker m`, as coordinate vectors on the table's basis.
pub fn kernel_m(t: &PairingTable) -> Vec<Vec<u64>> {
    let rad = t.radical();
    let mut gens: Vec<Vec<u64>> = Vec::new();
    let mut span: HashSet<Vec<u64>> = HashSet::from([vec![0; t.rank()]]);
    for x in rad {
        if span.contains(&x) {
            continue;
        }
        gens.push(x.clone());
        let mut frontier: Vec<Vec<u64>> = span.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            let y = t.add(&s, &x);
            if span.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    gens
}

/// A joint eigenspace of `B_F`, by its sign character on the chosen basis of lifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub character: Vec<i8>,
    /// Complex dimension of the eigenspace.
    pub dim: usize,
}

/// The subgroup `B_F` together with its block decomposition.
#[derive(Clone, Debug)]
pub struct BfData {
    /// Every element of `B_F` realized in the finite part, as a lift `A` with `A² = I`.
    pub elements: Vec<MonomialElement>,
    /// Exactly commuting lifts forming an `F₂`-basis of the realized `B_F`.
    pub basis: Vec<MonomialElement>,
    /// `F₂`-rank of the image of `B_F` in `F/F₀`.
    pub rank_mod_f0: usize,
    /// Whether `B_F F₀ ⊇ ker m`, i.e. the kernel is realized by monomial lifts.
    pub covers_kernel: bool,
    pub blocks: Vec<Block>,
    /// `A_S` for every subset `S` of `basis`, indexed by bitmask.
    pub products: Vec<MonomialElement>,
}

fn is_involution(a: &MonomialElement) -> bool {
    a.mul(a).map(|s| s.is_identity()).unwrap_or(false)
}

/// `B_F` from the finite part: elements of `ker m` all of whose lifts square to `I`.
///
/// `kernel` decides membership in the relevant kernel (`ker m`, or `ker ν` for
/// the twisted family) from `F/F₀` coordinates.
pub fn bf_from_part(fp: &FinitePart, kernel: &dyn Fn(&[u64]) -> bool) -> Result<BfData> {
    let mut elements = Vec::new();
    let mut images: HashSet<Vec<u64>> = HashSet::new();
    for (k, x) in fp.closure.elements.iter().enumerate() {
        let c = fp.coords_of(k);
        if !kernel(&c) {
            continue;
        }
        // both lifts ±A square to A², so one check covers both; otherwise correct
        // A by a torus element t with t² = A⁻²
        let a = x.rep();
        let lift = if is_involution(a) {
            Some(a.clone())
        } else {
            let inv_sq = a.mul(a)?.inverse();
            torus_sqrt(&fp.circles, &inv_sq).map(|t| a.mul(&t)).transpose()?
        };
        if let Some(b) = lift {
            elements.push(b);
            images.insert(c);
        }
    }
    // torus involutions lie in F₀ ⊂ ker m and split the blocks further
    let dim = fp.closure.elements[0].dim();
    elements.extend(fp.circles.iter().map(|c| c.half_turn(dim)));
    let kernel_size = all_coords(&fp.quotient.factors).filter(|c| kernel(c)).count();
    let covers_kernel = images.len() == kernel_size;
    let rank_mod_f0 = images.len().trailing_zeros() as usize;
    // F₂-basis of the realized B_F modulo the center
    let center = fp.closure.elements[0].center();
    let mut basis: Vec<MonomialElement> = Vec::new();
    let mut span: HashSet<ProjectiveElement> = HashSet::from([fp.closure.elements[0].clone()]);
    for a in &elements {
        let pa = ProjectiveElement::new(a.clone(), center);
        if span.contains(&pa) {
            continue;
        }
        let old: Vec<ProjectiveElement> = span.iter().cloned().collect();
        for s in old {
            span.insert(s.mul(&pa)?);
        }
        basis.push(a.clone());
    }
    let products = subset_products(&basis, dim)?;
    let blocks = eigenspaces_from_products(&products, basis.len())?;
    Ok(BfData { elements, basis, rank_mod_f0, covers_kernel, blocks, products })
}

/// Products `A_S = Π_{i∈S} A_i` over all subsets, indexed by bitmask.
fn subset_products(basis: &[MonomialElement], dim: usize) -> Result<Vec<MonomialElement>> {
    let mut prods = vec![MonomialElement::identity(dim)];
    for a in basis {
        let mut next = Vec::with_capacity(prods.len());
        for p in &prods {
            next.push(p.mul(a)?);
        }
        prods.extend(next);
    }
    Ok(prods)
}

/// Joint eigenspaces of commuting involutions, dimensions via the character formula.
pub fn joint_eigenspaces(basis: &[MonomialElement], dim: usize) -> Result<Vec<Block>> {
    eigenspaces_from_products(&subset_products(basis, dim)?, basis.len())
}

fn walsh_hadamard<T>(v: &mut [T], mut butterfly: impl FnMut(&mut T, &mut T)) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (lo, hi) = v.split_at_mut(j + h);
                butterfly(&mut lo[j], &mut hi[0]);
            }
        }
        h *= 2;
    }
}

fn eigenspaces_from_products(prods: &[MonomialElement], r: usize) -> Result<Vec<Block>> {
    // traces of involutions are integers: fixed points carry phases ±1
    let mut tr: Vec<i64> = prods
        .iter()
        .map(|p| p.diagonal_entries().map(|z| z.as_sign().map(i64::from).unwrap_or(0)).sum())
        .collect();
    // Walsh–Hadamard transform gives Σ_S χ(S) tr(A_S)
    walsh_hadamard(&mut tr, |a, b| {
        let (x, y) = (*a, *b);
        *a = x + y;
        *b = x - y;
    });
    let mut blocks = Vec::new();
    for (mask, &s) in tr.iter().enumerate() {
        if s % (1 << r) != 0 || s < 0 {
            return Err(Error::Invalid("non-integral eigenspace dimension".into()));
        }
        let d = (s >> r) as usize;
        if d > 0 {
            let character = (0..r).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            blocks.push(Block { character, dim: d });
        }
    }
    Ok(blocks)
}

/// `μ(x)` on a block: the scalar `A²` restricted to the eigenspace, when it is `±1`.
pub fn block_square_sign(a: &MonomialElement, basis: &[MonomialElement], block: &Block) -> Result<Option<i8>> {
    let prods = subset_products(basis, a.dim())?;
    Ok(block_square_signs(a, &prods, std::slice::from_ref(block))?[0])
}

/// [`block_square_sign`] on every block at once, given the subset products `A_S`.
///
/// `tr(A² P_χ) = 2^{-r} Σ_S χ(S) tr(A² A_S)` for all `χ` is one Walsh–Hadamard
/// transform of exact traces written over `ℤ[ζ_N]`.
pub fn block_square_signs(a: &MonomialElement, prods: &[MonomialElement], blocks: &[Block]) -> Result<Vec<Option<i8>>> {
    let a2 = a.mul(a)?;
    let shifted: Vec<MonomialElement> = prods.iter().map(|p| a2.mul(p)).collect::<Result<_>>()?;
    let order = shifted.iter().flat_map(|p| p.diagonal_entries()).fold(1u64, |acc, z| acc.lcm(&z.order()));
    let mut traces: Vec<Vec<i64>> = shifted
        .iter()
        .map(|p| {
            let mut t = vec![0i64; order as usize];
            for z in p.diagonal_entries() {
                t[z.exponent_in(order).expect("order divides lcm") as usize] += 1;
            }
            t
        })
        .collect();
    walsh_hadamard(&mut traces, |x, y| {
        for (a, b) in x.iter_mut().zip(y.iter_mut()) {
            let (u, v) = (*a, *b);
            *a = u + v;
            *b = u - v;
        }
    });
    let r = prods.len().trailing_zeros() as usize;
    blocks
        .iter()
        .map(|block| {
            let mask: usize = block.character.iter().enumerate().filter(|(_, &c)| c < 0).map(|(i, _)| 1 << i).sum();
            let coeffs = traces.get(mask).ok_or_else(|| Error::DimensionMismatch("block character".into()))?;
            let mut sum = RootSum::new();
            for (e, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    sum.add(RootOfUnity::new(e as i64, order), c);
                }
            }
            let scale = (block.dim as i64) << r;
            Ok(match sum.as_integer() {
                Some(t) if t == scale => Some(1),
                Some(t) if t == -scale => Some(-1),
                _ => None,
            })
        })
        .collect()
}

/// `B_F` for `O(n)/⟨-I⟩` and `Sp(n)/⟨-I⟩`.
pub fn compute_bf(f: &AbelianPresentation, cap: usize) -> Result<BfData> {
    match f.family() {
        Family::Po | Family::Psp => {
            let fp = finite_part(f, cap)?;
            let t = table_of(&fp)?;
            bf_from_part(&fp, &|c| t.in_radical(c))
        }
        Family::Twisted => {
            let lifted = crate::twisted::lift_twisted(f, cap)?;
            lifted.bf(cap)
        }
        Family::Pu => Err(Error::FamilyMismatch("B_F is defined for po, psp and twisted".into())),
    }
}

/// `ν(A)` with `u A u⁻¹ = ν(A)·A`, for a lift `A` commuting projectively with everything.
pub fn nu_value(u: &MonomialElement, a: &MonomialElement) -> Result<RootOfUnity> {
    if !u.conj() {
        return Err(Error::Invalid("ν needs an antiunitary element".into()));
    }
    u.mul(a)?.mul(&u.inverse())?.mul(&a.inverse())?.scalar_value().ok_or(Error::NotScalarCommutator)
}
