//! Multi-symplectic metric spaces over `F₂`: an alternating form `m` with several
//! compatible quadratic refinements `μ_i`, i.e. `μ(x+y) = μ(x) + μ(y) + m(x, y)`.
//!
//! Vectors are bitmasks over a fixed basis. A refinement is stored by its values on
//! the basis (bit `i` set ⇔ `μ(e_i) = -1`), which determines it uniquely. In the
//! standard basis bit `2j` is `x_{j+1}`, bit `2j+1` is `y_{j+1}`, and a radical
//! vector, when present, is the last bit.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 12;

pub type Vector = u16;

fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

/// `F₂^dim` with a symmetric, zero-diagonal Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Space {
    dim: usize,
    gram: Vec<Vector>,
    /// `B(x) = Σ_{i<j} x_i x_j m(e_i, e_j)` for every vector.
    cross: Vec<u8>,
}

impl F2Space {
    pub fn new(dim: usize, gram: Vec<Vector>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::BoundExceeded(format!("F₂ dimension {dim} exceeds {MAX_DIM}")));
        }
        if gram.len() != dim {
            return Err(Error::DimensionMismatch("gram rows".into()));
        }
        for i in 0..dim {
            if gram[i] >> dim != 0 || gram[i] >> i & 1 == 1 {
                return Err(Error::Invalid("gram matrix must have zero diagonal".into()));
            }
            for j in 0..dim {
                if (gram[i] >> j & 1) != (gram[j] >> i & 1) {
                    return Err(Error::Invalid("gram matrix must be symmetric".into()));
                }
            }
        }
        let mut cross = vec![0u8; 1 << dim];
        for x in 1..(1usize << dim) {
            let low = x.trailing_zeros() as usize;
            let rest = x & (x - 1);
            // B(e_low + rest) = B(rest) + m(e_low, rest)
            cross[x] = cross[rest] ^ parity((gram[low] as u32) & rest as u32);
        }
        Ok(F2Space { dim, gram, cross })
    }

    /// `k` hyperbolic pairs followed by `radical` radical vectors.
    pub fn standard(k: usize, radical: usize) -> Result<Self> {
        let dim = 2 * k + radical;
        let mut gram = vec![0; dim];
        for j in 0..k {
            gram[2 * j] = 1 << (2 * j + 1);
            gram[2 * j + 1] = 1 << (2 * j);
        }
        Self::new(dim, gram)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &[Vector] {
        &self.gram
    }

    pub fn size(&self) -> usize {
        1 << self.dim
    }

    pub fn pair(&self, x: Vector, y: Vector) -> u8 {
        let mut acc = 0u32;
        let mut x = x;
        while x != 0 {
            let i = x.trailing_zeros() as usize;
            acc ^= (self.gram[i] & y) as u32;
            x &= x - 1;
        }
        parity(acc)
    }

    pub fn radical(&self) -> Vec<Vector> {
        (0..self.size() as Vector).filter(|&x| (0..self.dim).all(|i| self.pair(x, 1 << i) == 0)).collect()
    }

    pub fn radical_dim(&self) -> usize {
        self.radical().len().trailing_zeros() as usize
    }

    pub fn rank(&self) -> usize {
        self.dim - self.radical_dim()
    }

    /// `q(x)` additively, for a refinement with basis values `vals`.
    pub fn q(&self, vals: Vector, x: Vector) -> u8 {
        parity((x & vals) as u32) ^ self.cross[x as usize]
    }

    /// `Σ_x (-1)^{q(x)}`.
    pub fn defect(&self, vals: Vector) -> i64 {
        (0..self.size() as Vector).map(|x| if self.q(vals, x) == 0 { 1 } else { -1 }).sum()
    }

    /// All refinements compatible with `m` (one per choice of basis values).
    pub fn refinements(&self) -> impl Iterator<Item = Vector> {
        0..(1 << self.dim) as Vector
    }

    /// Pullback `μ ∘ g` of a refinement under a linear map given by basis images.
    pub fn pullback(&self, vals: Vector, g: &[Vector]) -> Vector {
        let mut out = 0;
        for (i, &gi) in g.iter().enumerate() {
            out |= (self.q(vals, gi) as Vector) << i;
        }
        out
    }

    pub fn apply(g: &[Vector], x: Vector) -> Vector {
        let mut out = 0;
        let mut x = x;
        while x != 0 {
            let i = x.trailing_zeros() as usize;
            out ^= g[i];
            x &= x - 1;
        }
        out
    }

    pub fn compose(g: &[Vector], h: &[Vector]) -> Vec<Vector> {
        // (g ∘ h)(e_i) = g(h(e_i))
        h.iter().map(|&v| Self::apply(g, v)).collect()
    }

    pub fn identity_map(&self) -> Vec<Vector> {
        (0..self.dim).map(|i| 1 << i).collect()
    }

    pub fn preserves_form(&self, g: &[Vector]) -> bool {
        g.len() == self.dim
            && span_basis(g).len() == self.dim
            && (0..self.dim).all(|i| (0..self.dim).all(|j| self.pair(g[i], g[j]) == self.pair(1 << i, 1 << j)))
    }

    /// A basis `x_1, y_1, …, x_k, y_k, r_1, …, r_t` in standard form, as vectors of `V`.
    pub fn adapted_basis(&self) -> Vec<Vector> {
        let mut rest: Vec<Vector> = (0..self.dim).map(|i| 1 << i).collect();
        let mut out = Vec::with_capacity(self.dim);
        loop {
            let hit = (0..rest.len())
                .flat_map(|i| (i + 1..rest.len()).map(move |j| (i, j)))
                .find(|&(i, j)| self.pair(rest[i], rest[j]) == 1);
            let Some((i, j)) = hit else { break };
            let (a, b) = (rest[i], rest[j]);
            rest.remove(j);
            rest.remove(i);
            for w in rest.iter_mut() {
                let (wa, wb) = (self.pair(*w, a), self.pair(*w, b));
                if wb == 1 {
                    *w ^= a;
                }
                if wa == 1 {
                    *w ^= b;
                }
            }
            out.push(a);
            out.push(b);
        }
        out.extend(rest);
        out
    }

    /// Generators of `Aut(V, m)`. In an adapted basis these are all transvections
    /// `x ↦ x + m(x, v)·v`, the shears `x ↦ x + m(x, a)·r` into the radical, and
    /// elementary maps inside the radical.
    pub fn automorphism_generators(&self) -> Vec<Vec<Vector>> {
        let basis = self.adapted_basis();
        let inv = invert(&basis);
        let rank = self.rank();
        let std = F2Space::standard(rank / 2, self.dim - rank).expect("same dimension");
        let rad_bits: Vec<usize> = (rank..self.dim).collect();
        let mut gens: Vec<Vec<Vector>> = Vec::new();
        let ident = std.identity_map();
        for v in 1..(1 << rank) as Vector {
            gens.push((0..self.dim).map(|i| (1 << i) ^ if std.pair(1 << i, v) == 1 { v } else { 0 }).collect());
        }
        for a in 0..rank {
            for &r in &rad_bits {
                let mut g = ident.clone();
                g[a ^ 1] ^= 1 << r;
                gens.push(g);
            }
        }
        for &r in &rad_bits {
            for &s in &rad_bits {
                if r != s {
                    let mut g = ident.clone();
                    g[r] ^= 1 << s;
                    gens.push(g);
                }
            }
        }
        // g ↦ P g P⁻¹, with P sending standard coordinates to the adapted basis
        gens.into_iter()
            .map(|g| {
                (0..self.dim)
                    .map(|i| Self::apply(&basis, Self::apply(&g, inv[i])))
                    .collect()
            })
            .collect()
    }

    /// `|Aut(V, m)| = |Sp(rank)|·|GL(t)|·2^{rank·t}` with `t` the radical dimension.
    pub fn automorphism_order(&self) -> u128 {
        let t = self.radical_dim() as u32;
        let k = (self.rank() / 2) as u32;
        sp2_order(k) * gl2_order(t) * (1u128 << (2 * k * t))
    }
}

fn span_basis(vs: &[Vector]) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    let mut span = vec![0 as Vector];
    for &v in vs {
        if span.contains(&v) {
            continue;
        }
        let old = span.clone();
        span.extend(old.iter().map(|&s| s ^ v));
        basis.push(v);
    }
    basis
}

/// Inverse of an invertible map given by basis images.
pub fn invert(g: &[Vector]) -> Vec<Vector> {
    let n = g.len();
    // rows: [g(e_i) | e_i], reduced until the left half is the identity
    let mut rows: Vec<(Vector, Vector)> = g.iter().enumerate().map(|(i, &v)| (v, 1 << i)).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| rows[r].0 >> col & 1 == 1).expect("map is invertible");
        rows.swap(col, p);
        for r in 0..n {
            if r != col && rows[r].0 >> col & 1 == 1 {
                rows[r].0 ^= rows[col].0;
                rows[r].1 ^= rows[col].1;
            }
        }
    }
    rows.into_iter().map(|(_, w)| w).collect()
}

/// `|Sp(2k, F₂)| = 2^{k²} Π_{i=1}^{k} (4^i − 1)`.
pub fn sp2_order(k: u32) -> u128 {
    let mut o: u128 = 1 << (k * k);
    for i in 1..=k {
        o *= (1u128 << (2 * i)) - 1;
    }
    o
}

/// `|GL(t, F₂)|`.
pub fn gl2_order(t: u32) -> u128 {
    let mut o: u128 = 1;
    for i in 0..t {
        o *= (1u128 << t) - (1u128 << i);
    }
    o
}

/// Named single-refinement models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model", content = "k")]
pub enum Model {
    /// Nondegenerate, rank `2k`, defect `+2^k`.
    Plus(usize),
    /// Nondegenerate, rank `2k`, defect `-2^k`.
    Minus(usize),
    /// Rank `2k` plus a radical vector `r` with `μ(r) = +1`.
    Radical1Plus(usize),
    /// Rank `2k` plus a radical vector `r` with `μ(r) = -1`.
    Twisted(usize),
}

impl Model {
    pub fn k(self) -> usize {
        match self {
            Model::Plus(k) | Model::Minus(k) | Model::Radical1Plus(k) | Model::Twisted(k) => k,
        }
    }

    pub fn space(self) -> Result<F2Space> {
        match self {
            Model::Plus(k) | Model::Minus(k) => F2Space::standard(k, 0),
            Model::Radical1Plus(k) | Model::Twisted(k) => F2Space::standard(k, 1),
        }
    }

    /// Basis values of the model refinement.
    pub fn refinement(self) -> Result<Vector> {
        Ok(match self {
            Model::Plus(_) | Model::Radical1Plus(_) => 0,
            Model::Minus(k) => {
                if k == 0 {
                    return Err(Error::Invalid("minus(0) does not exist".into()));
                }
                0b11 << (2 * (k - 1))
            }
            Model::Twisted(k) => 1 << (2 * k),
        })
    }

    pub fn msms(self) -> Result<Msms> {
        Ok(Msms { space: self.space()?, mus: vec![self.refinement()?] })
    }
}

pub fn standard_model(tag: Model) -> Result<Msms> {
    tag.msms()
}

/// `(V, m, {μ_1, …, μ_s})` with the refinements kept as a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Msms {
    pub space: F2Space,
    mus: Vec<Vector>,
}

impl Msms {
    pub fn new(space: F2Space, mut mus: Vec<Vector>) -> Result<Self> {
        if mus.iter().any(|&m| m >> space.dim() != 0) {
            return Err(Error::Invalid("refinement has values outside the basis".into()));
        }
        mus.sort_unstable();
        Ok(Msms { space, mus })
    }

    pub fn mus(&self) -> &[Vector] {
        &self.mus
    }

    pub fn s(&self) -> usize {
        self.mus.len()
    }

    pub fn defects(&self) -> Vec<i64> {
        self.mus.iter().map(|&m| self.space.defect(m)).collect()
    }

    fn act(&self, state: &[Vector], g: &[Vector]) -> Vec<Vector> {
        let mut v: Vec<Vector> = state.iter().map(|&m| self.space.pullback(m, g)).collect();
        v.sort_unstable();
        v
    }

    /// Orbit of the multiset under `Aut(V, m)` with BFS parent links `(parent, generator)`.
    fn orbit(&self, cap: usize) -> Result<(Vec<Vec<Vector>>, Vec<Option<(usize, usize)>>, Vec<Vec<Vector>>)> {
        let gens = self.space.automorphism_generators();
        let mut seen: HashMap<Vec<Vector>, usize> = HashMap::from([(self.mus.clone(), 0)]);
        let mut states = vec![self.mus.clone()];
        let mut parent = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let next = self.act(&states[i], g);
                if !seen.contains_key(&next) {
                    if states.len() >= cap {
                        return Err(Error::BoundExceeded(format!("orbit larger than {cap}")));
                    }
                    seen.insert(next.clone(), states.len());
                    states.push(next);
                    parent.push(Some((i, gi)));
                    queue.push_back(states.len() - 1);
                }
            }
        }
        Ok((states, parent, gens))
    }

    pub fn orbit_size(&self) -> Result<usize> {
        Ok(self.orbit(orbit_cap())?.0.len())
    }

    /// Lexicographically least multiset in the orbit.
    pub fn canonical(&self) -> Result<Msms> {
        let (states, _, _) = self.orbit(orbit_cap())?;
        let min = states.into_iter().min().expect("orbit is nonempty");
        Ok(Msms { space: self.space.clone(), mus: min })
    }

    /// `|Aut(V, m, μ⃗)|`: the stabilizer of the multiset, by orbit–stabilizer.
    pub fn aut_order(&self) -> Result<u128> {
        Ok(self.space.automorphism_order() / self.orbit_size()? as u128)
    }

    /// A map `g ∈ Aut(V, m)` with `{μ ∘ g : μ ∈ self} = other`, if one exists.
    pub fn isomorphism(&self, other: &Msms) -> Result<Option<Vec<Vector>>> {
        if self.space != other.space || self.s() != other.s() {
            return Ok(None);
        }
        let (states, parent, gens) = self.orbit(orbit_cap())?;
        let Some(mut i) = states.iter().position(|s| *s == other.mus) else {
            return Ok(None);
        };
        // the state reached is μ ∘ g_1 ∘ g_2 ∘ … along the path
        let mut path = Vec::new();
        while let Some((p, g)) = parent[i] {
            path.push(g);
            i = p;
        }
        let mut map = self.space.identity_map();
        for &g in path.iter().rev() {
            map = F2Space::compose(&map, &gens[g]);
        }
        Ok(Some(map))
    }

    pub fn is_isomorphic(&self, other: &Msms) -> Result<bool> {
        Ok(self.isomorphism(other)?.is_some())
    }

    /// The same structure written in an adapted basis, on [`F2Space::standard`].
    pub fn standardized(&self) -> Result<Msms> {
        let basis = self.space.adapted_basis();
        let rank = self.space.rank();
        let std = F2Space::standard(rank / 2, self.space.dim() - rank)?;
        let mus = self.mus.iter().map(|&mu| self.space.pullback(mu, &basis)).collect();
        Msms::new(std, mus)
    }

    /// Sign vectors of the refinements on the basis (`+1`/`-1`).
    pub fn sign_vectors(&self) -> Vec<Vec<i8>> {
        self.mus
            .iter()
            .map(|&m| (0..self.space.dim()).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    }

    /// Multiplicities `a_μ` of equal refinements.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        let mut prev = None;
        for &m in &self.mus {
            if prev == Some(m) {
                *out.last_mut().expect("nonempty") += 1;
            } else {
                out.push(1);
                prev = Some(m);
            }
        }
        out
    }
}

fn orbit_cap() -> usize {
    crate::abelian::default_cap()
}

/// JSON form: `{dim, gram: bit rows, mus: sign vectors}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MsmsJson {
    pub dim: usize,
    pub gram: Vec<Vec<u8>>,
    pub mus: Vec<Vec<i8>>,
}

impl From<&Msms> for MsmsJson {
    fn from(m: &Msms) -> Self {
        let d = m.space.dim();
        MsmsJson {
            dim: d,
            gram: m.space.gram().iter().map(|&row| (0..d).map(|j| (row >> j & 1) as u8).collect()).collect(),
            mus: m.sign_vectors(),
        }
    }
}

impl TryFrom<&MsmsJson> for Msms {
    type Error = Error;

    fn try_from(j: &MsmsJson) -> Result<Self> {
        let gram = j
            .gram
            .iter()
            .map(|row| {
                if row.len() != j.dim || row.iter().any(|&b| b > 1) {
                    return Err(Error::Invalid("gram rows must be 0/1 vectors of length dim".into()));
                }
                Ok(row.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as Vector) << i)))
            })
            .collect::<Result<Vec<_>>>()?;
        let space = F2Space::new(j.dim, gram)?;
        let mus = j
            .mus
            .iter()
            .map(|v| {
                if v.len() != j.dim || v.iter().any(|&s| s != 1 && s != -1) {
                    return Err(Error::Invalid("refinements must be ±1 vectors of length dim".into()));
                }
                Ok(v.iter().enumerate().fold(0, |acc, (i, &s)| acc | (((s < 0) as Vector) << i)))
            })
            .collect::<Result<Vec<_>>>()?;
        Msms::new(space, mus)
    }
}

/// One isomorphism class of `s`-tuples.
#[derive(Clone, Debug)]
pub struct ClassCount {
    pub representative: Msms,
    /// Number of ordered tuples in the class.
    pub tuples: u128,
    pub aut_order: u128,
}

fn multinomial(mults: &[usize]) -> u128 {
    let s: usize = mults.iter().sum();
    let mut r: u128 = (1..=s as u128).product();
    for &m in mults {
        r /= (1..=m as u128).product::<u128>();
    }
    r
}

/// Orbits of `s`-multisets drawn from `allowed` under `Aut(V, m)`, by union–find
/// over the multiset set.
pub fn classes_of_multisets(space: &F2Space, allowed: &[Vector], s: usize) -> Result<Vec<ClassCount>> {
    let p = allowed.len();
    let count = binomial((p + s).saturating_sub(1) as u128, s as u128);
    let cap = orbit_cap() as u128;
    if count > cap {
        return Err(Error::BoundExceeded(format!("{count} multisets exceed the cap {cap}")));
    }
    let mut states: Vec<Vec<Vector>> = Vec::new();
    multisets(allowed, s, 0, &mut Vec::new(), &mut states);
    let index: HashMap<Vec<Vector>, usize> = states.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut uf: Vec<usize> = (0..states.len()).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let gens = space.automorphism_generators();
    for (i, st) in states.iter().enumerate() {
        for g in &gens {
            let mut img: Vec<Vector> = st.iter().map(|&m| space.pullback(m, g)).collect();
            img.sort_unstable();
            let j = *index
                .get(&img)
                .ok_or_else(|| Error::Invalid("allowed refinements are not Aut(V, m)-stable".into()))?;
            let (a, b) = (find(&mut uf, i), find(&mut uf, j));
            if a != b {
                uf[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<(usize, u128, usize)> = Vec::new(); // (min state index, tuples, size)
    let mut root_pos: HashMap<usize, usize> = HashMap::new();
    for i in 0..states.len() {
        let r = find(&mut uf, i);
        let mults = Msms { space: space.clone(), mus: states[i].clone() }.multiplicities();
        let t = multinomial(&mults);
        match root_pos.get(&r) {
            Some(&c) => {
                classes[c].1 += t;
                classes[c].2 += 1;
            }
            None => {
                root_pos.insert(r, classes.len());
                classes.push((i, t, 1));
            }
        }
    }
    // states are generated in lexicographic order, so the first member of each class is its least
    let total = space.automorphism_order();
    Ok(classes
        .into_iter()
        .map(|(i, tuples, size)| ClassCount {
            representative: Msms { space: space.clone(), mus: states[i].clone() },
            tuples,
            aut_order: total / size as u128,
        })
        .collect())
}

fn multisets(items: &[Vector], s: usize, start: usize, cur: &mut Vec<Vector>, out: &mut Vec<Vec<Vector>>) {
    if cur.len() == s {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        multisets(items, s, i, cur, out);
        cur.pop();
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// All refinements of `space` isomorphic to the model refinement.
pub fn refinements_like(model: Model) -> Result<(F2Space, Vec<Vector>)> {
    let space = model.space()?;
    let one = model.msms()?;
    let (states, _, _) = one.orbit(orbit_cap())?;
    let mut v: Vec<Vector> = states.into_iter().map(|s| s[0]).collect();
    v.sort_unstable();
    Ok((space, v))
}

/// Classes of `(V, m, μ_1, …, μ_s)` with every `μ_i ≅ plus(k)`.
pub fn enumerate_classes(k: usize, s: usize) -> Result<Vec<ClassCount>> {
    enumerate_classes_of(Model::Plus(k), s)
}

/// Classes of `s`-tuples of refinements each isomorphic to `model`.
pub fn enumerate_classes_of(model: Model, s: usize) -> Result<Vec<ClassCount>> {
    let (space, allowed) = refinements_like(model)?;
    classes_of_multisets(&space, &allowed, s)
}

/// Twisted-family classes: tuples on `plus(k) ⊕ ⟨r⟩` with `μ_i(r) = -1` that restrict
/// to plus-type refinements on a common complement of the radical.
pub fn enumerate_twisted_classes(k: usize, s: usize) -> Result<Vec<Msms>> {
    let space = F2Space::standard(k, 1)?;
    let r_bit: Vector = 1 << (2 * k);
    let mut out: Vec<Msms> = Vec::new();
    for c in enumerate_classes(k, s)? {
        let ext: Vec<Vector> = c.representative.mus().iter().map(|&m| m | r_bit).collect();
        let canon = Msms::new(space.clone(), ext)?.canonical()?;
        if !out.contains(&canon) {
            out.push(canon);
        }
    }
    out.sort_by(|a, b| a.mus.cmp(&b.mus));
    Ok(out)
}

/// A functional `f` with `f(r) = 1` whose kernel is a complement of the
/// (one-dimensional) radical on which every refinement is plus-type, provided
/// every refinement is negative on the radical.
pub fn twisted_complement(m: &Msms) -> Option<Vector> {
    let sp = &m.space;
    let rad = sp.radical();
    if rad.len() != 2 {
        return None;
    }
    let r = rad[1];
    if m.mus.iter().any(|&mu| sp.q(mu, r) == 0) {
        return None;
    }
    let plus = 1i64 << (sp.rank() / 2);
    (0..sp.size() as Vector).filter(|&f| parity((f & r) as u32) == 1).find(|&f| {
        m.mus.iter().all(|&mu| {
            (0..sp.size() as Vector)
                .filter(|&x| parity((x & f) as u32) == 0)
                .map(|x| if sp.q(mu, x) == 0 { 1 } else { -1 })
                .sum::<i64>()
                == plus
        })
    })
}

pub fn twisted_realizable(m: &Msms) -> bool {
    twisted_complement(m).is_some()
}

/// A symplectic basis `x'_j, y'_j` with `μ(x'_j) = μ(y'_j) = +1`, except that the
/// last pair has `(-1, -1)` when `μ` has negative defect. Returned as basis images.
pub fn normal_basis(space: &F2Space, mu: Vector) -> Result<Vec<Vector>> {
    if space.radical_dim() != 0 {
        return Err(Error::Invalid("normal basis needs a nondegenerate form".into()));
    }
    let k = space.dim() / 2;
    let target = if space.defect(mu) > 0 { 0 } else { Model::Minus(k).refinement()? };
    let model = Msms::new(space.clone(), vec![target])?;
    let here = Msms::new(space.clone(), vec![mu])?;
    // g with μ ∘ g = target: the images g(e_i) form the wanted basis
    here.isomorphism(&model)?.ok_or_else(|| Error::Invalid("refinement not isomorphic to a model".into()))
}

/// Brute-force check of the defect identity for a pair of compatible refinements:
/// `defe(V′, μ₁) = (defe(V, μ₁) + defe(V, μ₂)) / 2` on `V′ = ker(μ₂ μ₁⁻¹)`.
pub fn defect_identity_holds(space: &F2Space, mu1: Vector, mu2: Vector) -> bool {
    let lhs2: i64 = 2 * (0..space.size() as Vector)
        .filter(|&x| space.q(mu1, x) == space.q(mu2, x))
        .map(|x| if space.q(mu1, x) == 0 { 1 } else { -1 })
        .sum::<i64>();
    lhs2 == space.defect(mu1) + space.defect(mu2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defects_of_small_forms() {
        let v = F2Space::standard(1, 0).unwrap();
        assert_eq!(v.defect(0b00), 2);
        assert_eq!(v.defect(0b11), -2);
        assert_eq!(v.defect(0b01), 2);
        let z = F2Space::standard(0, 0).unwrap();
        assert_eq!(z.defect(0), 1);
    }

    #[test]
    fn positive_and_negative_counts() {
        for k in 1..=3usize {
            let v = F2Space::standard(k, 0).unwrap();
            let pos = v.refinements().filter(|&m| v.defect(m) > 0).count();
            let neg = v.refinements().filter(|&m| v.defect(m) < 0).count();
            assert_eq!(pos, (1 << (2 * k - 1)) + (1 << (k - 1)));
            assert_eq!(neg, (1 << (2 * k - 1)) - (1 << (k - 1)));
            assert!(v.refinements().all(|m| v.defect(m).abs() == 1 << k));
        }
    }

    #[test]
    fn compatibility_rule() {
        let v = F2Space::standard(2, 1).unwrap();
        for mu in v.refinements() {
            for x in 0..v.size() as Vector {
                for y in 0..v.size() as Vector {
                    assert_eq!(v.q(mu, x ^ y), v.q(mu, x) ^ v.q(mu, y) ^ v.pair(x, y));
                }
            }
        }
    }

    #[test]
    fn models() {
        assert_eq!(Model::Plus(1).msms().unwrap().defects(), vec![2]);
        assert_eq!(Model::Minus(2).msms().unwrap().defects(), vec![-4]);
        assert_eq!(Model::Plus(0).msms().unwrap().defects(), vec![1]);
        let t = Model::Twisted(1).msms().unwrap();
        assert_eq!(t.space.radical_dim(), 1);
        assert_eq!(t.space.q(t.mus()[0], 1 << 2), 1);
        let r = Model::Radical1Plus(1).msms().unwrap();
        assert_eq!(r.space.defect(r.mus()[0]), 4);
    }

    #[test]
    fn isomorphism_tests() {
        let p = Model::Plus(1).msms().unwrap();
        let m = Model::Minus(1).msms().unwrap();
        assert!(!p.is_isomorphic(&m).unwrap());
        let pp = Msms::new(p.space.clone(), vec![0, 0]).unwrap();
        assert!(pp.is_isomorphic(&pp).unwrap());
        // (+,+) is conjugate to (+,-)
        let q = Msms::new(p.space.clone(), vec![0b10]).unwrap();
        let g = p.isomorphism(&q).unwrap().unwrap();
        assert!(p.space.preserves_form(&g));
        assert_eq!(p.space.pullback(0, &g), 0b10);
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(Model::Plus(1).msms().unwrap().aut_order().unwrap(), 2);
        assert_eq!(F2Space::standard(1, 0).unwrap().automorphism_order(), 6);
        assert_eq!(F2Space::standard(0, 0).unwrap().automorphism_order(), 1);
        assert_eq!(sp2_order(4), 47_377_612_800);
        assert_eq!(gl2_order(2), 6);
    }

    #[test]
    fn generators_generate_sp4_and_aut_of_degenerate() {
        // orbit of a nonzero vector is everything nonzero; orbit-stabilizer with
        // refinements reproduces the group orders
        let v = F2Space::standard(2, 0).unwrap();
        let (_, plus) = refinements_like(Model::Plus(2)).unwrap();
        assert_eq!(plus.len(), 10);
        let m = Msms::new(v.clone(), vec![0]).unwrap();
        assert_eq!(m.aut_order().unwrap() * 10, 720);
        let w = F2Space::standard(1, 1).unwrap();
        assert_eq!(w.automorphism_order(), 6 * 4);
        for g in w.automorphism_generators() {
            assert!(w.preserves_form(&g));
        }
        // a form in a scrambled basis: x₁ = e0+e2, y₁ = e1, r = e2
        let v = F2Space::new(3, vec![0b010, 0b101, 0b010]).unwrap();
        assert_eq!(v.radical(), vec![0, 0b101]);
        let gens = v.automorphism_generators();
        assert!(gens.iter().all(|g| v.preserves_form(g)));
        let m = Msms::new(v.clone(), vec![0]).unwrap();
        let orbit = m.orbit_size().unwrap() as u128;
        assert_eq!(m.aut_order().unwrap() * orbit, 24);
        let mut seen = std::collections::HashSet::from([1 as Vector]);
        let mut frontier = vec![1 as Vector];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = F2Space::apply(g, x);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        // e0 is not radical, so its orbit is all six non-radical vectors
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn class_counts() {
        let count = |k, s| enumerate_classes(k, s).unwrap().len();
        assert_eq!(count(1, 1), 1);
        assert_eq!(count(1, 2), 2);
        assert_eq!(count(2, 2), 2);
        assert_eq!(count(2, 3), 4);
        for (k, s) in [(1usize, 2usize), (2, 2), (2, 3), (1, 3)] {
            let p = (1u128 << (2 * k - 1)) + (1 << (k - 1));
            let total: u128 = enumerate_classes(k, s).unwrap().iter().map(|c| c.tuples).sum();
            assert_eq!(total, p.pow(s as u32));
        }
    }

    #[test]
    fn witness_tuple_is_a_distinct_class() {
        let v = F2Space::standard(2, 0).unwrap();
        // basis order x1, y1, x2, y2; μ₂ has y2 = -1, μ₃ has y1 = -1
        let w = Msms::new(v.clone(), vec![0, 1 << 3, 1 << 1]).unwrap();
        let classes = enumerate_classes(2, 3).unwrap();
        let hits: Vec<_> =
            classes.iter().filter(|c| c.representative.is_isomorphic(&w).unwrap()).collect();
        assert_eq!(hits.len(), 1);
        let mut ms = w.mus().to_vec();
        ms.dedup();
        assert_eq!(ms.len(), 3);
    }

    #[test]
    fn defect_identity_small() {
        for k in 0..=2usize {
            let v = F2Space::standard(k, 0).unwrap();
            for a in v.refinements() {
                for b in v.refinements() {
                    if a != b {
                        assert!(defect_identity_holds(&v, a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn normal_basis_realizes_model() {
        let v = F2Space::standard(2, 0).unwrap();
        for mu in v.refinements() {
            let g = normal_basis(&v, mu).unwrap();
            assert!(v.preserves_form(&g));
            let want = if v.defect(mu) > 0 { 0 } else { 0b1100 };
            assert_eq!(v.pullback(mu, &g), want);
        }
    }

    #[test]
    fn twisted_classes_small() {
        assert_eq!(enumerate_twisted_classes(0, 3).unwrap().len(), 1);
        let t = enumerate_twisted_classes(1, 2).unwrap();
        assert!(!t.is_empty());
        for m in &t {
            assert!(twisted_realizable(m));
        }
    }

    #[test]
    fn json_roundtrip() {
        let m = Msms::new(F2Space::standard(1, 1).unwrap(), vec![0b100, 0b110]).unwrap();
        let j = MsmsJson::from(&m);
        assert_eq!(Msms::try_from(&j).unwrap(), m);
    }
}
