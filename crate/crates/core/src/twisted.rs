//! Lifting abelian subgroups of `PU(n) ⋊ ⟨τ₀⟩` to `U(n)/⟨-I⟩ ⋊ ⟨τ⟩`.

use std::collections::HashSet;

use serde::Serialize;

use crate::abelian::{all_coords, Closure};
use crate::error::{Error, Result};
use crate::monomial::{Center, MonomialElement, ProjectiveElement};
use crate::pairing::{bf_from_part, nu_value, table_of, unitary_part_generators, BfData, FinitePart, PairingTable};
use crate::presentation::{AbelianPresentation, Circle, Family};
use crate::roots::RootOfUnity;

/// An abelian subgroup `F′` of `U(n)/⟨-I⟩ ⋊ ⟨τ⟩` containing `[iI]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftedPresentation {
    pub n: usize,
    /// `[iI]` first, then the antiunitary `u`, then rescaled unitary generators.
    pub generators: Vec<MonomialElement>,
    pub torus: Vec<Circle>,
}

impl LiftedPresentation {
    pub fn u(&self) -> &MonomialElement {
        self.generators.iter().find(|g| g.conj()).expect("lift has an antiunitary generator")
    }

    pub fn projective_generators(&self) -> Vec<ProjectiveElement> {
        self.generators.iter().map(|g| ProjectiveElement::new(g.clone(), Center::Lifted)).collect()
    }

    /// Finite part of the unitary subgroup `H_{F′}`.
    pub fn unitary_part(&self, cap: usize) -> Result<FinitePart> {
        let h = unitary_part_generators(&self.generators)?;
        FinitePart::new(&h, &self.torus, self.n, Center::Lifted, cap)
    }

    /// `m′` on `H_{F′}/F₀`, with `ν′` on its basis.
    pub fn pairing(&self, cap: usize) -> Result<PairingTable> {
        let fp = self.unitary_part(cap)?;
        let mut t = table_of(&fp)?;
        let nu = fp
            .quotient
            .basis
            .iter()
            .map(|w| nu_value(self.u(), fp.closure.evaluate(w)?.rep()))
            .collect::<Result<Vec<_>>>()?;
        t.nu = Some(nu);
        Ok(t)
    }

    /// Coordinates (in `H_{F′}/F₀`) of `ker ν′ = {x ∈ ker m′ : ν′(x) = 1}`.
    pub fn ker_nu(&self, fp: &FinitePart, t: &PairingTable) -> Result<HashSet<Vec<u64>>> {
        let mut out = HashSet::new();
        for c in all_coords(&fp.quotient.factors) {
            if t.in_radical(&c) && nu_value(self.u(), fp.representative(&c)?.rep())?.is_one() {
                out.insert(c);
            }
        }
        Ok(out)
    }

    /// `B = {A ∈ ker ν′ : A² = I}` with its blocks.
    pub fn bf(&self, cap: usize) -> Result<BfData> {
        let fp = self.unitary_part(cap)?;
        let t = table_of(&fp)?;
        let ker = self.ker_nu(&fp, &t)?;
        bf_from_part(&fp, &|c| ker.contains(c))
    }
}

/// Lift `F ⊄ PU(n)` to an abelian `F′` with `π′(F′) = F` and `F′ ∩ scalars = ⟨[iI]⟩`.
pub fn lift_twisted(f: &AbelianPresentation, cap: usize) -> Result<LiftedPresentation> {
    if f.family() != Family::Twisted {
        return Err(Error::FamilyMismatch("lifting applies to the twisted family".into()));
    }
    let n = f.n();
    let u = f
        .generators()
        .iter()
        .find(|g| g.conj())
        .cloned()
        .ok_or_else(|| Error::Invalid("F lies in PU(n): no antiunitary generator".into()))?;
    let uinv = u.inverse();
    let mut gens = vec![MonomialElement::scalar(n, RootOfUnity::I), u.clone()];
    let mut seen_u = false;
    for g in f.generators() {
        if g.conj() && !seen_u && *g == u {
            seen_u = true;
            continue;
        }
        let x = if g.conj() { g.mul(&uinv)? } else { g.clone() };
        // u x u⁻¹ x⁻¹ = κ; then λ = √κ makes u(λx)u⁻¹ = λ̄κx = λx
        let kappa = u.mul(&x)?.mul(&uinv)?.mul(&x.inverse())?.scalar_value().ok_or(Error::NotScalarCommutator)?;
        gens.push(x.scaled(kappa.sqrt()));
    }
    let lifted = LiftedPresentation { n, generators: gens, torus: f.torus().to_vec() };
    verify_lift(f, &lifted, cap)?;
    Ok(lifted)
}

/// Check abelianness in `Ũ`, the scalar intersection, and `π′(F′) = F`.
pub fn verify_lift(f: &AbelianPresentation, lifted: &LiftedPresentation, cap: usize) -> Result<()> {
    let pg = lifted.projective_generators();
    for a in 0..pg.len() {
        for b in a + 1..pg.len() {
            let c = pg[a].rep().commutator(pg[b].rep())?;
            if c.scalar_value().and_then(|z| z.as_sign()).is_none() {
                return Err(Error::NotAbelian(format!("lifted generators {a} and {b} do not commute in Ũ")));
            }
        }
    }
    let closure = Closure::new(pg, lifted.n, Center::Lifted, cap)?;
    let scalars: Vec<RootOfUnity> =
        closure.elements.iter().filter_map(|x| x.rep().scalar_value()).collect();
    let expected: HashSet<RootOfUnity> = [RootOfUnity::ONE, RootOfUnity::I].into();
    if scalars.len() != 2 || scalars.iter().collect::<HashSet<_>>() != expected.iter().collect() {
        return Err(Error::Invalid(format!("lift meets the scalars in {scalars:?}, not ⟨[iI]⟩")));
    }
    let image: HashSet<ProjectiveElement> =
        closure.elements.iter().map(|x| ProjectiveElement::new(x.rep().clone(), Center::FullCircle)).collect();
    let base = Closure::new(f.projective_generators(), f.n(), Center::FullCircle, cap)?;
    let base_set: HashSet<ProjectiveElement> = base.elements.into_iter().collect();
    if image != base_set {
        return Err(Error::Invalid("π′(F′) differs from F".into()));
    }
    Ok(())
}
