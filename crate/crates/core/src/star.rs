//! Dimension of the fixed subalgebra `𝔤₀^F` and the check `dim 𝔤₀^F = dim F`.
//!
//! Both paths work in the complexification inside `gl(N, ℂ)`. A generator `A` acts by
//! `X ↦ A X A⁻¹`, an antiunitary `A∘σ` by `X ↦ −A Xᵀ A⁻¹` (the complex-linear
//! extension of `X ↦ A X̄ A⁻¹` on `𝔲(N)`). The real form is cut out by `θ(X) = −Xᵀ`
//! for `𝔰𝔬(n)` and `θ_J(X) = −J Xᵀ J⁻¹` for `𝔰𝔭(n)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::{canonical_rep, ClassInvariant};
use crate::error::{Error, Result};
use crate::monomial::{quaternion_structure, MonomialElement};
use crate::presentation::{AbelianPresentation, Family};
use crate::roots::RootOfUnity;

/// Singular values at or below this count as zero on the floating path.
pub const FLOAT_THRESHOLD: f64 = 1e-9;

/// Largest matrix size the floating path accepts (it works on `N² × N²` operators).
pub const FLOAT_MAX_DIM: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact-rational")]
    Exact,
    #[serde(rename = "floating")]
    Floating,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedAlgebraReport {
    pub family: Family,
    pub n: usize,
    #[serde(rename = "dim_F")]
    pub dim_f: usize,
    pub dim_fixed: usize,
    pub method: Method,
    /// Largest residual norm of the computed fixed vectors (zero on the exact path).
    pub residual: f64,
    pub star: bool,
}

/// A monomial map on the basis `E_ij` of `gl(N)`: `E_b ↦ c_b E_{π(b)}`.
struct BasisMap {
    target: Vec<usize>,
    coeff: Vec<RootOfUnity>,
}

fn unitary_action(a: &MonomialElement) -> BasisMap {
    let n = a.dim();
    let (p, ph) = (a.perm(), a.phases());
    let mut target = vec![0; n * n];
    let mut coeff = vec![RootOfUnity::ONE; n * n];
    for i in 0..n {
        for j in 0..n {
            let b = i * n + j;
            if a.conj() {
                // -A E_ji A⁻¹
                target[b] = p[j] * n + p[i];
                coeff[b] = RootOfUnity::MINUS_ONE * ph[j] * ph[i].conj();
            } else {
                target[b] = p[i] * n + p[j];
                coeff[b] = ph[i] * ph[j].conj();
            }
        }
    }
    BasisMap { target, coeff }
}

/// `θ(X) = −S Xᵀ S⁻¹` for a real monomial `S` (identity for `𝔰𝔬`, `J` for `𝔰𝔭`).
fn involution(s: &MonomialElement) -> BasisMap {
    let n = s.dim();
    let (p, ph) = (s.perm(), s.phases());
    let mut target = vec![0; n * n];
    let mut coeff = vec![RootOfUnity::ONE; n * n];
    for i in 0..n {
        for j in 0..n {
            target[i * n + j] = p[j] * n + p[i];
            coeff[i * n + j] = RootOfUnity::MINUS_ONE * ph[j] * ph[i].conj();
        }
    }
    BasisMap { target, coeff }
}

fn operators(f: &AbelianPresentation) -> Vec<MonomialElement> {
    let mut ops: Vec<MonomialElement> = f.generators().to_vec();
    ops.extend(f.quarter_turns());
    ops
}

fn real_form(f: &AbelianPresentation) -> Option<MonomialElement> {
    match f.family() {
        Family::Po => Some(MonomialElement::identity(f.matrix_dim())),
        Family::Psp => Some(quaternion_structure(f.n())),
        _ => None,
    }
}

/// Exact `dim_ℝ 𝔤₀^F`: every circle is replaced by its quarter turn (same
/// centralizer, since all `ad t` eigenvalues lie in `{0, ±i, ±2i}`), and the fixed
/// space of the resulting monomial operators is one dimension per orbit of basis
/// matrices with a consistent phase assignment.
pub fn fixed_dim_exact(f: &AbelianPresentation) -> Result<usize> {
    let n = f.matrix_dim();
    let mut maps: Vec<BasisMap> = operators(f).iter().map(unitary_action).collect();
    if let Some(s) = real_form(f) {
        maps.push(involution(&s));
    }
    let d = n * n;
    let mut value: Vec<Option<RootOfUnity>> = vec![None; d];
    let mut consistent: Vec<bool> = Vec::new();
    for root in 0..d {
        if value[root].is_some() {
            continue;
        }
        let mut ok = true;
        value[root] = Some(RootOfUnity::ONE);
        let mut stack = vec![root];
        while let Some(b) = stack.pop() {
            let x = value[b].expect("visited");
            for m in &maps {
                let t = m.target[b];
                let y = x * m.coeff[b];
                match value[t] {
                    None => {
                        value[t] = Some(y);
                        stack.push(t);
                    }
                    Some(z) if z != y => ok = false,
                    _ => {}
                }
            }
        }
        consistent.push(ok);
    }
    let mut dim = consistent.iter().filter(|&&c| c).count();
    if real_form(f).is_none() {
        // gl = sl ⊕ ℂI as modules; drop the identity if it is fixed
        let identity_fixed = maps.iter().all(|m| {
            (0..n).all(|i| {
                let t = m.target[i * n + i];
                t / n == t % n && m.coeff[i * n + i].is_one()
            })
        });
        if identity_fixed {
            dim -= 1;
        }
    }
    Ok(dim)
}

fn dense_action(m: &BasisMap, d: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for b in 0..d {
        out[(m.target[b], b)] += m.coeff[b].to_complex();
    }
    for b in 0..d {
        out[(b, b)] -= Complex64::new(1.0, 0.0);
    }
    out
}

/// `X ↦ tX − Xt` on the row-major vectorization.
fn ad_matrix(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = t.nrows();
    let mut out = DMatrix::<Complex64>::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let col = i * n + j;
            // t E_ij = Σ_r t_ri E_rj, E_ij t = Σ_c t_jc E_ic
            for r in 0..n {
                out[(r * n + j, col)] += t[(r, i)];
            }
            for c in 0..n {
                out[(i * n + c, col)] -= t[(j, c)];
            }
        }
    }
    out
}

/// Orthonormal basis of the common kernel, one operator at a time.
fn common_kernel(ops: &[DMatrix<Complex64>], d: usize) -> (DMatrix<Complex64>, f64) {
    let mut k = DMatrix::<Complex64>::identity(d, d);
    for op in ops {
        if k.ncols() == 0 {
            break;
        }
        let rk = op * &k;
        let c = rk.ncols();
        let padded = if rk.nrows() < c {
            let mut p = DMatrix::<Complex64>::zeros(c, c);
            p.view_mut((0, 0), (rk.nrows(), c)).copy_from(&rk);
            p
        } else {
            rk
        };
        let svd = padded.svd(false, true);
        let vt = svd.v_t.expect("requested");
        let null: Vec<usize> =
            svd.singular_values.iter().enumerate().filter(|(_, &s)| s <= FLOAT_THRESHOLD).map(|(i, _)| i).collect();
        let mut nb = DMatrix::<Complex64>::zeros(c, null.len());
        for (col, &i) in null.iter().enumerate() {
            for r in 0..c {
                nb[(r, col)] = vt[(i, r)].conj();
            }
        }
        k = &k * nb;
    }
    let residual = ops.iter().map(|op| (op * &k).norm()).fold(0.0, f64::max);
    (k, residual)
}

/// Floating `dim_ℝ 𝔤₀^F` from the genuine circle generators, by singular values.
pub fn fixed_dim_float(f: &AbelianPresentation) -> Result<(usize, f64)> {
    let n = f.matrix_dim();
    if n > FLOAT_MAX_DIM {
        return Err(Error::BoundExceeded(format!("floating verifier is limited to matrices of size {FLOAT_MAX_DIM}")));
    }
    let d = n * n;
    let mut ops: Vec<DMatrix<Complex64>> = Vec::new();
    for c in f.torus() {
        ops.push(ad_matrix(&c.generator_dense(n)));
    }
    for g in f.generators() {
        ops.push(dense_action(&unitary_action(g), d));
    }
    match real_form(f) {
        Some(s) => ops.push(dense_action(&involution(&s), d)),
        None => {
            let mut tr = DMatrix::<Complex64>::zeros(1, d);
            for i in 0..n {
                tr[(0, i * n + i)] = Complex64::new(1.0, 0.0);
            }
            ops.push(tr);
        }
    }
    let (k, residual) = common_kernel(&ops, d);
    Ok((k.ncols(), residual))
}

/// `dim 𝔤₀^F` with the chosen method.
pub fn fixed_dim(f: &AbelianPresentation, method: Method) -> Result<FixedAlgebraReport> {
    let (dim_fixed, residual) = match method {
        Method::Exact => (fixed_dim_exact(f)?, 0.0),
        Method::Floating => fixed_dim_float(f)?,
    };
    Ok(FixedAlgebraReport {
        family: f.family(),
        n: f.n(),
        dim_f: f.dim_f(),
        dim_fixed,
        method,
        residual,
        star: dim_fixed == f.dim_f(),
    })
}

/// Build the canonical representative and check `dim 𝔤₀^F = dim F` exactly.
pub fn verify_star(inv: &ClassInvariant) -> Result<FixedAlgebraReport> {
    fixed_dim(&canonical_rep(inv)?, Method::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::enumerate_invariants;
    use crate::monomial::{clock, named_matrix, shift, NamedMatrix};
    use crate::presentation::Circle;

    /// Direct real solve: a real basis of `𝔲(N)`, the real-form and fixed-point
    /// conditions written as real linear maps, and the kernel by singular values.
    fn real_solve(f: &AbelianPresentation) -> usize {
        let n = f.matrix_dim();
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let mut basis: Vec<DMatrix<Complex64>> = Vec::new();
        for a in 0..n {
            let mut x = DMatrix::zeros(n, n);
            x[(a, a)] = i;
            basis.push(x);
            for b in a + 1..n {
                let mut x = DMatrix::zeros(n, n);
                x[(a, b)] = one;
                x[(b, a)] = -one;
                basis.push(x);
                let mut y = DMatrix::zeros(n, n);
                y[(a, b)] = i;
                y[(b, a)] = i;
                basis.push(y);
            }
        }
        let conj = |x: &DMatrix<Complex64>| x.map(|z| z.conj());
        let mut conditions: Vec<Box<dyn Fn(&DMatrix<Complex64>) -> DMatrix<Complex64>>> = Vec::new();
        match f.family() {
            Family::Po => conditions.push(Box::new(move |x| x.map(|z| Complex64::new(0.0, z.im)))),
            Family::Psp => {
                let j = quaternion_structure(f.n()).to_dense();
                let jinv = j.adjoint();
                conditions.push(Box::new(move |x| &j * conj(x) * &jinv - x));
            }
            _ => conditions.push(Box::new(|x| DMatrix::from_element(1, 1, x.trace()))),
        }
        for g in f.generators() {
            let a = g.to_dense();
            let ainv = a.adjoint();
            if g.conj() {
                conditions.push(Box::new(move |x| &a * conj(x) * &ainv - x));
            } else {
                conditions.push(Box::new(move |x| &a * x * &ainv - x));
            }
        }
        for c in f.torus() {
            let t = c.generator_dense(n);
            conditions.push(Box::new(move |x| &t * x - x * &t));
        }
        let mut rows: Vec<Vec<f64>> = vec![Vec::new(); basis.len()];
        for cond in &conditions {
            for (k, b) in basis.iter().enumerate() {
                for z in cond(b).iter() {
                    rows[k].push(z.re);
                    rows[k].push(z.im);
                }
            }
        }
        let m = DMatrix::from_fn(rows[0].len(), basis.len(), |r, c| rows[c][r]);
        let padded = if m.nrows() < m.ncols() { m.clone().resize(m.ncols(), m.ncols(), 0.0) } else { m };
        let svd = padded.svd(false, false);
        svd.singular_values.iter().filter(|&&s| s <= 1e-9).count()
    }

    fn both(f: &AbelianPresentation) -> usize {
        let e = fixed_dim_exact(f).unwrap();
        let (fl, res) = fixed_dim_float(f).unwrap();
        assert_eq!(e, fl, "exact and floating disagree on {f:?}");
        assert!(res < 1e-9);
        e
    }

    #[test]
    fn spec_examples() {
        let torus = AbelianPresentation::new(
            Family::Pu,
            3,
            vec![],
            vec![Circle::Phase { weights: vec![(0, 1)] }, Circle::Phase { weights: vec![(1, 1)] }],
        )
        .unwrap();
        assert_eq!(both(&torus), 2);
        let pauli = AbelianPresentation::new(Family::Pu, 2, vec![clock(2, 1), shift(2, 1)], vec![]).unwrap();
        assert_eq!(both(&pauli), 0);
        assert_eq!(both(&pauli.without_generator(1)), 1);
        let h2 = AbelianPresentation::new(
            Family::Po,
            4,
            vec![named_matrix(NamedMatrix::Ipq(2, 2)), named_matrix(NamedMatrix::Jprime(2))],
            vec![],
        )
        .unwrap();
        let r = fixed_dim(&h2, Method::Exact).unwrap();
        assert_eq!((r.dim_fixed, r.star), (1, false));
    }

    #[test]
    fn real_solve_agrees_small() {
        for family in [Family::Pu, Family::Po, Family::Psp, Family::Twisted] {
            for n in 1..=4 {
                let Ok(invs) = enumerate_invariants(family, n) else { continue };
                for inv in invs {
                    let f = canonical_rep(&inv).unwrap();
                    if f.matrix_dim() > 4 {
                        continue;
                    }
                    let e = both(&f);
                    assert_eq!(e, real_solve(&f), "{inv:?}");
                    for i in 0..f.generators().len() {
                        let g = f.without_generator(i);
                        assert_eq!(both(&g), real_solve(&g));
                        assert!(both(&g) >= e);
                    }
                }
            }
        }
    }

    #[test]
    fn po_eight_example() {
        let invs = enumerate_invariants(Family::Po, 8).unwrap();
        let inv = invs
            .iter()
            .find(|i| {
                let b = i.blocks().unwrap();
                (b.k, b.s0, b.s1) == (1, 2, 1)
            })
            .unwrap();
        let r = verify_star(inv).unwrap();
        assert!(r.star);
        assert_eq!(r.dim_fixed, 1);
        assert_eq!(both(&canonical_rep(inv).unwrap()), 1);
    }

    #[test]
    fn report_json() {
        let pauli = AbelianPresentation::new(Family::Pu, 2, vec![clock(2, 1), shift(2, 1)], vec![]).unwrap();
        let j = serde_json::to_value(fixed_dim(&pauli, Method::Exact).unwrap()).unwrap();
        assert_eq!(j["dim_F"], 0);
        assert_eq!(j["method"], "exact-rational");
        assert_eq!(j["star"], true);
    }
}
