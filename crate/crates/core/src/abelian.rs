//! Finite abelian groups: relation lattices, Smith normal form, and
//! breadth-first closure of commuting projective generators.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::monomial::{Center, ProjectiveElement};

/// Default element cap for closures; overridden by `MAXAB_CAP`.
pub const DEFAULT_CAP: usize = 1_000_000;

pub fn default_cap() -> usize {
    std::env::var("MAXAB_CAP").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_CAP)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        // a = q b + r  →  g = x b + y r = y a + (x - q y) b
        let q = a.div_euclid(b);
        (g, y, x - q * y)
    }
}

/// A sublattice of `ℤ^dim` kept in Hermite normal form.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Option<Vec<i128>>>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice { dim, rows: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, v: &[i64]) {
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        assert_eq!(v.len(), self.dim);
        for p in 0..self.dim {
            if v[p] == 0 {
                continue;
            }
            match self.rows[p].take() {
                None => {
                    if v[p] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    self.rows[p] = Some(v);
                    self.reduce();
                    return;
                }
                Some(r) => {
                    let (g, a, b) = ext_gcd(r[p], v[p]);
                    let (rp, vp) = (r[p] / g, v[p] / g);
                    let new_r: Vec<i128> = r.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
                    let new_v: Vec<i128> = r.iter().zip(&v).map(|(x, y)| rp * y - vp * x).collect();
                    self.rows[p] = Some(new_r);
                    v = new_v;
                    self.reduce();
                    self.reduce_vec(&mut v);
                }
            }
        }
    }

    fn reduce_vec(&self, v: &mut [i128]) {
        for j in 0..self.dim {
            if let Some(r) = &self.rows[j] {
                let q = v[j].div_euclid(r[j]);
                if q != 0 {
                    for (x, y) in v.iter_mut().zip(r) {
                        *x -= q * y;
                    }
                }
            }
        }
    }

    fn reduce(&mut self) {
        for p in 0..self.dim {
            let Some(mut row) = self.rows[p].take() else { continue };
            for j in p + 1..self.dim {
                if let Some(r) = &self.rows[j] {
                    let q = row[j].div_euclid(r[j]);
                    if q != 0 {
                        for (x, y) in row.iter_mut().zip(r) {
                            *x -= q * y;
                        }
                    }
                }
            }
            self.rows[p] = Some(row);
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for p in 0..self.dim {
            if w[p] == 0 {
                continue;
            }
            match &self.rows[p] {
                None => return false,
                Some(r) => {
                    if w[p] % r[p] != 0 {
                        return false;
                    }
                    let q = w[p] / r[p];
                    for (x, y) in w.iter_mut().zip(r) {
                        *x -= q * y;
                    }
                }
            }
        }
        true
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.iter().all(Option::is_some)
    }

    /// Index `[ℤ^dim : L]`, when finite.
    pub fn index(&self) -> Option<u128> {
        let mut d: u128 = 1;
        for r in &self.rows {
            d = d.checked_mul(r.as_ref()?.iter().find(|&&x| x != 0).map(|x| x.unsigned_abs())?)?;
        }
        Some(d)
    }

    fn matrix(&self) -> Vec<Vec<i128>> {
        let mut m: Vec<Vec<i128>> = self.rows.iter().flatten().cloned().collect();
        while m.len() < self.dim {
            m.push(vec![0; self.dim]);
        }
        m
    }

    /// Smith form of `ℤ^dim / L` (requires full rank).
    pub fn structure(&self) -> Result<GroupStructure> {
        if !self.is_full_rank() {
            return Err(Error::Invalid("relation lattice is not of full rank (group is infinite)".into()));
        }
        Ok(GroupStructure::from_relations(self.matrix()))
    }
}

/// `ℤ^r / L ≅ ⊕ ℤ/d_i` with explicit change of basis.
///
/// `coords(x) = x·V mod d` and the `i`-th basis element is row `i` of `V⁻¹`.
#[derive(Clone, Debug)]
pub struct GroupStructure {
    /// Invariant factors `d_1 | d_2 | …`, all `> 1`.
    pub factors: Vec<u64>,
    v: Vec<Vec<i128>>,
    /// Columns of `V` kept (those with `d > 1`), aligned with `factors`.
    keep: Vec<usize>,
    /// Basis words, rows of `V⁻¹` for kept indices.
    pub basis: Vec<Vec<i64>>,
}

impl GroupStructure {
    fn from_relations(mut a: Vec<Vec<i128>>) -> Self {
        let n = a.len();
        let mut v: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
        let mut vinv = v.clone();
        for t in 0..n {
            loop {
                // pivot: smallest nonzero |entry| in the trailing block
                let mut best: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..n {
                        if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else { break };
                a.swap(t, bi);
                if bj != t {
                    for row in a.iter_mut() {
                        row.swap(t, bj);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, bj);
                    }
                    vinv.swap(t, bj);
                }
                if a[t][t] < 0 {
                    for row in a.iter_mut() {
                        row[t] = -row[t];
                    }
                    for row in v.iter_mut() {
                        row[t] = -row[t];
                    }
                    vinv[t].iter_mut().for_each(|x| *x = -*x);
                }
                let p = a[t][t];
                let mut clean = true;
                for i in t + 1..n {
                    let q = a[i][t].div_euclid(p);
                    if q != 0 {
                        let rt = a[t].clone();
                        for (x, y) in a[i].iter_mut().zip(&rt) {
                            *x -= q * y;
                        }
                    }
                    clean &= a[i][t] == 0;
                }
                for j in t + 1..n {
                    let q = a[t][j].div_euclid(p);
                    if q != 0 {
                        // col_j -= q·col_t ; V likewise ; V⁻¹ row_t += q·row_j
                        for row in a.iter_mut() {
                            row[j] -= q * row[t];
                        }
                        for row in v.iter_mut() {
                            row[j] -= q * row[t];
                        }
                        let rj = vinv[j].clone();
                        for (x, y) in vinv[t].iter_mut().zip(&rj) {
                            *x += q * y;
                        }
                    }
                    clean &= a[t][j] == 0;
                }
                if !clean {
                    continue;
                }
                // divisibility: fold a violating row into row t and retry
                let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        let ri = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(&ri) {
                            *x += y;
                        }
                    }
                    None => break,
                }
            }
        }
        let mut factors = Vec::new();
        let mut keep = Vec::new();
        let mut basis = Vec::new();
        for t in 0..n {
            let d = a[t][t].unsigned_abs();
            if d != 1 {
                factors.push(d as u64);
                keep.push(t);
                basis.push(vinv[t].iter().map(|&x| x as i64).collect());
            }
        }
        GroupStructure { factors, v, keep, basis }
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Coordinates of a word in the invariant-factor basis.
    pub fn coords(&self, word: &[i64]) -> Vec<u64> {
        self.keep
            .iter()
            .zip(&self.factors)
            .map(|(&t, &d)| {
                let s: i128 = word.iter().zip(&self.v).map(|(&x, row)| x as i128 * row[t]).sum();
                s.rem_euclid(d as i128) as u64
            })
            .collect()
    }

    /// Word (in the original generators) of an element given by coordinates.
    pub fn word(&self, coords: &[u64]) -> Vec<i64> {
        let r = self.v.len();
        let mut w = vec![0i64; r];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (x, y) in w.iter_mut().zip(b) {
                *x += *c as i64 * y;
            }
        }
        w
    }
}

/// Iterate all coordinate vectors of `⊕ ℤ/d_i` in lexicographic order.
pub fn all_coords(factors: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    let total: u128 = factors.iter().map(|&d| d as u128).product();
    (0..total).map(move |mut k| {
        let mut c = vec![0u64; factors.len()];
        for i in (0..factors.len()).rev() {
            let d = factors[i] as u128;
            c[i] = (k % d) as u64;
            k /= d;
        }
        c
    })
}

/// Closure of commuting projective generators, with words and the full relation lattice.
#[derive(Clone, Debug)]
pub struct Closure {
    pub gens: Vec<ProjectiveElement>,
    pub elements: Vec<ProjectiveElement>,
    pub words: Vec<Vec<i64>>,
    index: HashMap<ProjectiveElement, usize>,
    pub lattice: Lattice,
}

impl Closure {
    pub fn new(gens: Vec<ProjectiveElement>, dim: usize, center: Center, cap: usize) -> Result<Self> {
        let r = gens.len();
        let mut lattice = Lattice::new(r);
        let id = ProjectiveElement::identity(dim, center);
        let mut elements = vec![id.clone()];
        let mut words = vec![vec![0i64; r]];
        let mut index = HashMap::from([(id, 0usize)]);
        // H_i = ⟨g_1, …, g_i⟩ is H_{i-1}·{1, g_i, …, g_i^{e-1}} with e the order of g_i
        // modulo H_{i-1}; the relations e·δ_i − word(g_i^e) span the whole lattice
        for (i, g) in gens.iter().enumerate() {
            if g.dim() != dim || g.center() != center {
                return Err(Error::DimensionMismatch(format!("generator {i} has the wrong shape")));
            }
            let base = elements.len();
            let mut x = g.clone();
            let mut e: i64 = 1;
            let j = loop {
                if let Some(&j) = index.get(&x) {
                    break j;
                }
                e += 1;
                if base.saturating_mul(e as usize) > cap {
                    return Err(Error::CapExceeded(cap));
                }
                x = x.mul(g)?;
            };
            let mut rel: Vec<i64> = words[j].iter().map(|w| -w).collect();
            rel[i] += e;
            lattice.insert(&rel);
            for layer in 1..e as usize {
                for k in 0..base {
                    let src = (layer - 1) * base + k;
                    let y = elements[src].mul(g)?;
                    let mut w = words[src].clone();
                    w[i] += 1;
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                    words.push(w);
                }
            }
        }
        debug_assert_eq!(lattice.index(), Some(elements.len() as u128));
        Ok(Closure { gens, elements, words, index, lattice })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn lookup(&self, x: &ProjectiveElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// The element `Π g_i^{w_i}`.
    pub fn evaluate(&self, word: &[i64]) -> Result<ProjectiveElement> {
        let mut acc = self.elements[0].clone();
        for (g, &e) in self.gens.iter().zip(word) {
            let base = if e < 0 { g.inverse() } else { g.clone() };
            acc = acc.mul(&base.pow(e.unsigned_abs()))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{clock, shift, MonomialElement};
    use proptest::prelude::*;

    #[test]
    fn smith_of_small_lattices() {
        let mut l = Lattice::new(2);
        l.insert(&[4, 0]);
        l.insert(&[0, 6]);
        let s = l.structure().unwrap();
        assert_eq!(s.factors, vec![2, 12]);
        let mut l = Lattice::new(3);
        l.insert(&[2, 0, 0]);
        l.insert(&[0, 2, 0]);
        l.insert(&[0, 0, 3]);
        l.insert(&[1, 1, 0]);
        assert_eq!(l.structure().unwrap().factors, vec![6]);
        assert_eq!(l.index(), Some(6));
    }

    #[test]
    fn pauli_closure() {
        let fc = Center::FullCircle;
        let gens = vec![ProjectiveElement::new(clock(2, 1), fc), ProjectiveElement::new(shift(2, 1), fc)];
        let c = Closure::new(gens, 2, fc, 100).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.lattice.structure().unwrap().factors, vec![2, 2]);
    }

    #[test]
    fn cap_is_enforced() {
        let fc = Center::PlusMinus;
        let g = ProjectiveElement::new(clock(7, 1), fc);
        assert_eq!(Closure::new(vec![g], 7, fc, 3).unwrap_err(), Error::CapExceeded(3));
    }

    #[test]
    fn evaluate_matches_words() {
        let fc = Center::FullCircle;
        let gens = vec![
            ProjectiveElement::new(clock(4, 2), fc),
            ProjectiveElement::new(shift(4, 2), fc),
            ProjectiveElement::new(MonomialElement::identity(4).kron(&clock(2, 1)).unwrap(), fc),
        ];
        let c = Closure::new(gens, 8, fc, 1000).unwrap();
        assert_eq!(c.len(), 32);
        for (x, w) in c.elements.iter().zip(&c.words) {
            assert_eq!(&c.evaluate(w).unwrap(), x);
        }
    }

    proptest! {
        #[test]
        fn smith_coords_roundtrip(
            rels in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 0..4),
            diag in prop::collection::vec(1i64..9, 3),
        ) {
            let mut l = Lattice::new(3);
            for (i, &d) in diag.iter().enumerate() {
                let mut v = vec![0; 3];
                v[i] = d;
                l.insert(&v);
            }
            for r in &rels {
                l.insert(r);
            }
            let s = l.structure().unwrap();
            prop_assert_eq!(Some(s.order()), l.index());
            for w in 1..s.factors.len() {
                prop_assert_eq!(s.factors[w] % s.factors[w - 1], 0);
            }
            for r in &rels {
                prop_assert!(s.coords(r).iter().all(|&c| c == 0));
            }
            for c in all_coords(&s.factors) {
                prop_assert_eq!(s.coords(&s.word(&c)), c);
            }
        }
    }
}
