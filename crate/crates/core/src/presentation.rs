//! Abelian subgroups given by commuting monomial generators and symbolic circles.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{commutator_scalar, Center, Flavor, MonomialElement, ProjectiveElement};
use crate::roots::RootOfUnity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `PU(n)`
    Pu,
    /// `O(n)/⟨-I⟩`
    Po,
    /// `Sp(n)/⟨-I⟩`, realized in `U(2n)`
    Psp,
    /// `PU(n) ⋊ ⟨τ₀⟩`
    Twisted,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Pu, Family::Po, Family::Psp, Family::Twisted];

    pub fn center(self) -> Center {
        match self {
            Family::Pu | Family::Twisted => Center::FullCircle,
            Family::Po | Family::Psp => Center::PlusMinus,
        }
    }

    /// Size of the matrices realizing the degree-`n` group.
    pub fn matrix_dim(self, n: usize) -> usize {
        match self {
            Family::Psp => 2 * n,
            _ => n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Pu => "pu",
            Family::Po => "po",
            Family::Psp => "psp",
            Family::Twisted => "twisted",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pu" => Ok(Family::Pu),
            "po" => Ok(Family::Po),
            "psp" => Ok(Family::Psp),
            "twisted" => Ok(Family::Twisted),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Sparse matrix whose nonzero entries are roots of unity.
pub type SparseMatrix = BTreeMap<(usize, usize), RootOfUnity>;

/// Image of the matrix unit `v·E_ij` under `X ↦ A X A⁻¹` (or `A X̄ A⁻¹` when antiunitary).
pub fn adjoint_entry(g: &MonomialElement, i: usize, j: usize, v: RootOfUnity) -> (usize, usize, RootOfUnity) {
    let (p, a) = (g.perm(), g.phases());
    let v = if g.conj() { v.conj() } else { v };
    (p[i], p[j], a[i] * v * a[j].conj())
}

pub fn adjoint_sparse(g: &MonomialElement, x: &SparseMatrix) -> SparseMatrix {
    x.iter()
        .map(|(&(i, j), &v)| {
            let (a, b, w) = adjoint_entry(g, i, j, v);
            ((a, b), w)
        })
        .collect()
}

/// A one-parameter circle subgroup `exp(θ·t)`, given by its generator `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Circle {
    /// `t = Σ (E_ba − E_ab)` over disjoint coordinate pairs `(a, b)`.
    Rotation { pairs: Vec<(usize, usize)> },
    /// `t = Σ i·w_j E_jj` with weights `w_j = ±1`.
    Phase { weights: Vec<(usize, i8)> },
}

impl Circle {
    pub fn support(&self) -> Vec<usize> {
        match self {
            Circle::Rotation { pairs } => pairs.iter().flat_map(|&(a, b)| [a, b]).collect(),
            Circle::Phase { weights } => weights.iter().map(|&(j, _)| j).collect(),
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let s = self.support();
        if s.is_empty() {
            return Err(Error::Invalid("empty circle".into()));
        }
        let mut seen = vec![false; dim];
        for &j in &s {
            if j >= dim || seen[j] {
                return Err(Error::Invalid(format!("circle support {s:?} is out of range or repeats")));
            }
            seen[j] = true;
        }
        if let Circle::Phase { weights } = self {
            if weights.iter().any(|&(_, w)| w != 1 && w != -1) {
                return Err(Error::Invalid("phase circle weights must be ±1".into()));
            }
        }
        Ok(())
    }

    /// The Lie algebra generator `t` as a sparse matrix.
    pub fn generator(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new();
        match self {
            Circle::Rotation { pairs } => {
                for &(a, b) in pairs {
                    m.insert((b, a), RootOfUnity::ONE);
                    m.insert((a, b), RootOfUnity::MINUS_ONE);
                }
            }
            Circle::Phase { weights } => {
                for &(j, w) in weights {
                    m.insert((j, j), if w > 0 { RootOfUnity::I } else { RootOfUnity::MINUS_I });
                }
            }
        }
        m
    }

    pub fn generator_dense(&self, dim: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(dim, dim);
        for ((i, j), v) in self.generator() {
            m[(i, j)] = v.to_complex();
        }
        m
    }

    /// `exp(π/2 · t)`, the element of order four on the circle.
    pub fn quarter_turn(&self, dim: usize) -> MonomialElement {
        let mut perm: Vec<usize> = (0..dim).collect();
        let mut phases = vec![RootOfUnity::ONE; dim];
        match self {
            Circle::Rotation { pairs } => {
                for &(a, b) in pairs {
                    perm[a] = b;
                    perm[b] = a;
                    phases[b] = RootOfUnity::MINUS_ONE;
                }
            }
            Circle::Phase { weights } => {
                for &(j, w) in weights {
                    phases[j] = if w > 0 { RootOfUnity::I } else { RootOfUnity::MINUS_I };
                }
            }
        }
        MonomialElement::new(perm, phases, false, Flavor::Complex).expect("valid quarter turn")
    }
}

impl Circle {
    /// `exp(π · t)`: `-1` on the support.
    pub fn half_turn(&self, dim: usize) -> MonomialElement {
        let q = self.quarter_turn(dim);
        q.mul(&q).expect("same shape")
    }
}

/// A monomial `t` in the torus with `t² = y` exactly, if `y` lies in the torus and
/// such a root is monomial (rotation angles must be `0` or `π`).
pub fn torus_sqrt(circles: &[Circle], y: &MonomialElement) -> Option<MonomialElement> {
    if y.conj() {
        return None;
    }
    let n = y.dim();
    let (p, ph) = (y.perm(), y.phases());
    let owner = owners(circles, n);
    if (0..n).any(|j| owner[j].is_none() && (p[j] != j || !ph[j].is_one())) {
        return None;
    }
    let mut t = MonomialElement::identity(n);
    for circle in circles {
        match circle {
            Circle::Rotation { pairs } => {
                let &(a, b) = pairs.first()?;
                if p[a] != a || p[b] != b || ph[a] != ph[b] {
                    return None;
                }
                if ph[a] == RootOfUnity::MINUS_ONE {
                    t = t.mul(&circle.quarter_turn(n)).ok()?;
                } else if !ph[a].is_one() {
                    return None;
                }
            }
            Circle::Phase { weights } => {
                let &(j0, w0) = weights.first()?;
                let z = if w0 > 0 { ph[j0] } else { ph[j0].conj() };
                let r = z.sqrt();
                let mut phases = vec![RootOfUnity::ONE; n];
                for &(j, w) in weights {
                    phases[j] = if w > 0 { r } else { r.conj() };
                }
                t = t.mul(&MonomialElement::diagonal(phases)).ok()?;
            }
        }
    }
    (t.mul(&t).ok()? == *y).then_some(t)
}

/// Whether `x` lies in `λ·T` for a scalar `λ` of the center and `T` the torus of `circles`.
pub fn torus_contains(circles: &[Circle], x: &MonomialElement, center: Center) -> bool {
    if x.conj() {
        return false;
    }
    let n = x.dim();
    let candidates: Vec<RootOfUnity> = match center {
        Center::PlusMinus | Center::Lifted => vec![RootOfUnity::ONE, RootOfUnity::MINUS_ONE],
        Center::FullCircle => {
            let mut c = Vec::new();
            let owner = owners(circles, n);
            for j in 0..n {
                c.push(x.phases()[j]);
                c.push(x.phases()[j] * RootOfUnity::MINUS_ONE);
                if owner[j].is_none() {
                    break;
                }
            }
            for circle in circles {
                if let Circle::Phase { weights } = circle {
                    for a in weights {
                        for b in weights {
                            if a.1 == -b.1 {
                                let s = (x.phases()[a.0] * x.phases()[b.0]).sqrt();
                                c.push(s);
                                c.push(s * RootOfUnity::MINUS_ONE);
                            }
                        }
                    }
                }
            }
            c.sort();
            c.dedup();
            c
        }
    };
    candidates.into_iter().any(|l| in_torus(circles, &x.scaled(l.inv())))
}

fn owners(circles: &[Circle], n: usize) -> Vec<Option<usize>> {
    let mut owner = vec![None; n];
    for (c, circle) in circles.iter().enumerate() {
        for j in circle.support() {
            owner[j] = Some(c);
        }
    }
    owner
}

fn in_torus(circles: &[Circle], y: &MonomialElement) -> bool {
    let n = y.dim();
    let (p, ph) = (y.perm(), y.phases());
    let owner = owners(circles, n);
    for j in 0..n {
        if owner[j].is_none() && (p[j] != j || !ph[j].is_one()) {
            return false;
        }
    }
    for circle in circles {
        match circle {
            Circle::Rotation { pairs } => {
                // each pair block must be the same monomial rotation R(θ)
                let mut theta: Option<u8> = None;
                for &(a, b) in pairs {
                    let t = if p[a] == a && p[b] == b && ph[a] == ph[b] {
                        match ph[a].as_sign() {
                            Some(1) => 0,
                            Some(_) => 2,
                            None => return false,
                        }
                    } else if p[a] == b && p[b] == a && ph[a] * ph[b] == RootOfUnity::MINUS_ONE {
                        match ph[a].as_sign() {
                            Some(1) => 1,
                            Some(_) => 3,
                            None => return false,
                        }
                    } else {
                        return false;
                    };
                    if *theta.get_or_insert(t) != t {
                        return false;
                    }
                }
            }
            Circle::Phase { weights } => {
                let mut z: Option<RootOfUnity> = None;
                for &(j, w) in weights {
                    if p[j] != j {
                        return false;
                    }
                    let zj = if w > 0 { ph[j] } else { ph[j].conj() };
                    if *z.get_or_insert(zj) != zj {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A closed abelian subgroup: finite generators times the torus of `torus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct AbelianPresentation {
    family: Family,
    n: usize,
    generators: Vec<MonomialElement>,
    torus: Vec<Circle>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    family: Family,
    n: usize,
    #[serde(default)]
    generators: Vec<MonomialElement>,
    #[serde(default)]
    torus: Vec<Circle>,
}

impl TryFrom<RawPresentation> for AbelianPresentation {
    type Error = Error;

    fn try_from(r: RawPresentation) -> Result<Self> {
        AbelianPresentation::new(r.family, r.n, r.generators, r.torus)
    }
}

impl From<AbelianPresentation> for RawPresentation {
    fn from(p: AbelianPresentation) -> Self {
        RawPresentation { family: p.family, n: p.n, generators: p.generators, torus: p.torus }
    }
}

impl AbelianPresentation {
    pub fn new(family: Family, n: usize, generators: Vec<MonomialElement>, torus: Vec<Circle>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("degree must be positive".into()));
        }
        let dim = family.matrix_dim(n);
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator {i} has size {} but {family} of degree {n} needs {dim}",
                    g.dim()
                )));
            }
            match family {
                Family::Pu if g.conj() => {
                    return Err(Error::FlavorMismatch(format!("generator {i} is antiunitary in pu")));
                }
                Family::Po if g.conj() || g.phases().iter().any(|p| p.as_sign().is_none()) => {
                    return Err(Error::FlavorMismatch(format!("generator {i} is not a real matrix")));
                }
                Family::Psp => {
                    g.clone().with_flavor(Flavor::Quaternion).map_err(|_| {
                        Error::FlavorMismatch(format!("generator {i} does not commute with the quaternionic structure"))
                    })?;
                }
                _ => {}
            }
        }
        let mut used = vec![false; dim];
        for c in &torus {
            c.validate(dim)?;
            for j in c.support() {
                if used[j] {
                    return Err(Error::Invalid("torus circles must have disjoint supports".into()));
                }
                used[j] = true;
            }
            let t = c.generator();
            match family {
                Family::Po if matches!(c, Circle::Phase { .. }) => {
                    return Err(Error::FlavorMismatch("po tori must be rotation circles".into()));
                }
                Family::Psp => {
                    if symplectic_involution(&t, n) != t {
                        return Err(Error::FlavorMismatch("circle generator is not in sp(n)".into()));
                    }
                }
                _ => {}
            }
            for (i, g) in generators.iter().enumerate() {
                if adjoint_sparse(g, &t) != t {
                    return Err(Error::NotAbelian(format!("generator {i} does not centralize a torus circle")));
                }
            }
        }
        let p = AbelianPresentation { family, n, generators, torus };
        let pg = p.projective_generators();
        for a in 0..pg.len() {
            for b in a + 1..pg.len() {
                commutator_scalar(&pg[a], &pg[b])
                    .map_err(|_| Error::NotAbelian(format!("generators {a} and {b} do not commute projectively")))?;
            }
        }
        Ok(p)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix_dim(&self) -> usize {
        self.family.matrix_dim(self.n)
    }

    pub fn generators(&self) -> &[MonomialElement] {
        &self.generators
    }

    pub fn torus(&self) -> &[Circle] {
        &self.torus
    }

    /// `dim F`, the number of circle factors.
    pub fn dim_f(&self) -> usize {
        self.torus.len()
    }

    pub fn center(&self) -> Center {
        self.family.center()
    }

    pub fn projective_generators(&self) -> Vec<ProjectiveElement> {
        self.generators.iter().map(|g| ProjectiveElement::new(g.clone(), self.center())).collect()
    }

    pub fn quarter_turns(&self) -> Vec<MonomialElement> {
        self.torus.iter().map(|c| c.quarter_turn(self.matrix_dim())).collect()
    }

    /// A copy with generator `i` removed.
    pub fn without_generator(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.generators.remove(i);
        p
    }

    pub fn with_generators(&self, generators: Vec<MonomialElement>) -> Result<Self> {
        Self::new(self.family, self.n, generators, self.torus.clone())
    }
}

/// `X ↦ -J Xᵀ J⁻¹`, whose fixed points in `gl(2n, ℂ)` are the complexified `sp(n)`.
pub fn symplectic_involution(x: &SparseMatrix, n: usize) -> SparseMatrix {
    let j = crate::monomial::quaternion_structure(n);
    x.iter()
        .map(|(&(a, b), &v)| {
            // -J E_ba J⁻¹ = -(J e_b)(J e_a)^*
            let (p, ph) = (j.perm(), j.phases());
            ((p[b], p[a]), v * RootOfUnity::MINUS_ONE * ph[b] * ph[a].conj())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{clock, named_matrix, shift, NamedMatrix};

    #[test]
    fn rejects_noncommuting_generators() {
        let g = vec![
            MonomialElement::signs(&[true, false, false]),
            MonomialElement::permutation(vec![1, 0, 2]).unwrap(),
        ];
        assert!(matches!(AbelianPresentation::new(Family::Po, 3, g, vec![]), Err(Error::NotAbelian(_))));
    }

    #[test]
    fn rejects_torus_not_centralized() {
        let g = vec![MonomialElement::signs(&[true, false])];
        let t = vec![Circle::Rotation { pairs: vec![(0, 1)] }];
        assert!(AbelianPresentation::new(Family::Po, 2, g, t).is_err());
    }

    #[test]
    fn quarter_turn_lies_on_torus() {
        let circles = vec![Circle::Rotation { pairs: vec![(0, 1), (2, 3)] }];
        let q = circles[0].quarter_turn(4);
        assert!(torus_contains(&circles, &q, Center::PlusMinus));
        assert!(torus_contains(&circles, &q.pow(2), Center::PlusMinus));
        let half = MonomialElement::signs(&[true, true, false, false]);
        assert!(!torus_contains(&circles, &half, Center::PlusMinus));
        let phase = vec![Circle::Phase { weights: vec![(0, 1), (1, -1)] }];
        let d = MonomialElement::diagonal(vec![RootOfUnity::new(1, 8), RootOfUnity::new(7, 8)]);
        assert!(torus_contains(&phase, &d, Center::PlusMinus));
        let d2 = MonomialElement::diagonal(vec![RootOfUnity::new(1, 8), RootOfUnity::new(1, 8)]);
        assert!(!torus_contains(&phase, &d2, Center::PlusMinus));
        assert!(torus_contains(&phase, &d2, Center::FullCircle));
    }

    #[test]
    fn pu_torus_membership_uses_scalars() {
        // classes {0,1} and {2,3}; the first is a circle, the second absorbs the scalar
        let circles = vec![Circle::Phase { weights: vec![(0, 1), (1, 1)] }];
        let x = MonomialElement::diagonal(vec![
            RootOfUnity::new(1, 3),
            RootOfUnity::new(1, 3),
            RootOfUnity::new(1, 5),
            RootOfUnity::new(1, 5),
        ]);
        assert!(torus_contains(&circles, &x, Center::FullCircle));
        assert!(!torus_contains(&circles, &x, Center::PlusMinus));
        assert!(!torus_contains(&circles, &clock(4, 1), Center::FullCircle));
    }

    #[test]
    fn json_roundtrip() {
        let p = AbelianPresentation::new(Family::Pu, 2, vec![clock(2, 1), shift(2, 1)], vec![]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: AbelianPresentation = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let bad = s.replace("\"n\":2", "\"n\":3");
        assert!(serde_json::from_str::<AbelianPresentation>(&bad).is_err());
    }

    #[test]
    fn symplectic_torus_is_validated() {
        let ok = vec![Circle::Phase { weights: vec![(0, 1), (1, -1)] }];
        assert!(AbelianPresentation::new(Family::Psp, 1, vec![], ok).is_ok());
        let bad = vec![Circle::Phase { weights: vec![(0, 1), (1, 1)] }];
        assert!(AbelianPresentation::new(Family::Psp, 1, vec![], bad).is_err());
        let j2 = named_matrix(NamedMatrix::J(1));
        assert!(AbelianPresentation::new(Family::Po, 2, vec![j2], vec![]).is_ok());
    }
}
