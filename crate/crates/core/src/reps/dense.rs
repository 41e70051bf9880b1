//! Weight modules given by explicit matrices: validation, characters,
//! weight and weight-space decompositions, and splitting into irreducibles.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::heisenberg::{GPrime, HElem, HeisenbergGroup};
use super::linalg::{random_monomial, CycMatrix, Vector};
use super::monomial::{
    build_irrep, coset_rep, count_irreps, KernelCharacter, MonomialRep, Section,
};
use crate::abelian::GroupElement;
use crate::error::{Result, ThetaError};
use crate::roots::{CycField, CycJson, CycNumber, QmodZ};

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A module over the Heisenberg group: the scalar action as a sum of
/// weight projectors, `ρ(α) = Σ_n e(nα) F_n`, and matrices `X_i`, `Y_i` for
/// the generators of `K₁` and `K₂`. Then
/// `ρ(α, x, w) = ρ(α − ⟨x, w⟩) · X^x · Y^w`.
#[derive(Clone, Debug)]
pub struct DenseRep {
    heis: HeisenbergGroup,
    field: Arc<CycField>,
    dim: usize,
    scalar: Vec<(i64, CycMatrix)>,
    k1: Vec<CycMatrix>,
    k2: Vec<CycMatrix>,
}

fn invalid(msg: impl Into<String>) -> ThetaError {
    ThetaError::InvalidModule(msg.into())
}

impl DenseRep {
    /// Checks the defining relations of the Heisenberg group:
    /// `F_n` orthogonal idempotents summing to `I` and commuting with
    /// everything, `X_i^{d_i} = Y_i^{d_i} = I`, each half commutative, and
    /// `X_i Y_j = ρ(δ_ij / d_i) Y_j X_i`.
    pub fn new(
        heis: &HeisenbergGroup,
        field: &Arc<CycField>,
        mut scalar: Vec<(i64, CycMatrix)>,
        k1: Vec<CycMatrix>,
        k2: Vec<CycMatrix>,
    ) -> Result<Self> {
        let ty = heis.ty();
        let e = heis.exponent();
        if !field.level().is_multiple_of(e) {
            return Err(invalid(format!(
                "field level {} is not a multiple of the exponent {e}",
                field.level()
            )));
        }
        let p = ty.rank();
        if k1.len() != p || k2.len() != p {
            return Err(invalid(format!("need {p} matrices for each half of K")));
        }
        let dim = scalar.first().map(|s| s.1.rows()).unwrap_or(0);
        let all = scalar.iter().map(|s| &s.1).chain(&k1).chain(&k2);
        for m in all {
            if m.rows() != dim || m.cols() != dim {
                return Err(invalid("matrices of inconsistent size"));
            }
            if m.field().level() != field.level() {
                return Err(invalid("matrices over different fields"));
            }
        }
        scalar.sort_by_key(|s| s.0);
        if scalar.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("repeated weight in the scalar action"));
        }
        let rep = DenseRep {
            heis: heis.clone(),
            field: Arc::clone(field),
            dim,
            scalar,
            k1,
            k2,
        };
        rep.check_relations()?;
        Ok(rep)
    }

    fn check_relations(&self) -> Result<()> {
        let id = CycMatrix::identity(&self.field, self.dim);
        let zero = CycMatrix::zeros(&self.field, self.dim, self.dim);
        let mut total = zero.clone();
        for (i, (n, f)) in self.scalar.iter().enumerate() {
            if f.is_zero() {
                return Err(invalid(format!("empty weight-{n} component")));
            }
            total = total.add(f);
            for (m, g) in &self.scalar[i..] {
                let prod = f.mul(g);
                let want = if n == m { f } else { &zero };
                if prod != *want {
                    return Err(invalid(format!(
                        "weight projectors {n}, {m} are not orthogonal idempotents"
                    )));
                }
            }
            for (j, m) in self.k1.iter().chain(&self.k2).enumerate() {
                if f.mul(m) != m.mul(f) {
                    return Err(invalid(format!(
                        "weight-{n} projector does not commute with generator {j}"
                    )));
                }
            }
        }
        if total != id {
            return Err(invalid("scalar action is not a Laurent polynomial (projectors do not sum to 1)"));
        }
        let ty = self.heis.ty();
        for (i, &d) in ty.divisors().iter().enumerate() {
            if !self.k1[i].pow(d).is_identity() || !self.k2[i].pow(d).is_identity() {
                return Err(invalid(format!("generator {i} does not have order dividing {d}")));
            }
            for j in 0..ty.rank() {
                if j > i {
                    if self.k1[i].mul(&self.k1[j]) != self.k1[j].mul(&self.k1[i]) {
                        return Err(invalid(format!("X_{i} and X_{j} do not commute")));
                    }
                    if self.k2[i].mul(&self.k2[j]) != self.k2[j].mul(&self.k2[i]) {
                        return Err(invalid(format!("Y_{i} and Y_{j} do not commute")));
                    }
                }
                let c = if i == j { QmodZ::new(1, d as i64) } else { QmodZ::ZERO };
                let lhs = self.k1[i].mul(&self.k2[j]);
                let rhs = self.scalar_matrix(c)?.mul(&self.k2[j]).mul(&self.k1[i]);
                if lhs != rhs {
                    return Err(invalid(format!("X_{i} Y_{j} ≠ e({c}) Y_{j} X_{i}")));
                }
            }
        }
        Ok(())
    }

    /// A module on which every scalar acts with weight `n`.
    pub fn homogeneous(
        heis: &HeisenbergGroup,
        field: &Arc<CycField>,
        n: i64,
        k1: Vec<CycMatrix>,
        k2: Vec<CycMatrix>,
    ) -> Result<Self> {
        let dim = k1.first().or(k2.first()).map(|m| m.rows()).unwrap_or(0);
        DenseRep::new(heis, field, vec![(n, CycMatrix::identity(field, dim))], k1, k2)
    }

    /// Reads the weights off the matrix `s` of the scalar `1/e`: `s` must
    /// satisfy `s^e = 1`, and weights are reported in `[0, e)`.
    pub fn from_scalar_generator(
        heis: &HeisenbergGroup,
        field: &Arc<CycField>,
        s: &CycMatrix,
        k1: Vec<CycMatrix>,
        k2: Vec<CycMatrix>,
    ) -> Result<Self> {
        let e = heis.exponent();
        if !field.level().is_multiple_of(e) {
            return Err(invalid("field does not contain the e-th roots of unity"));
        }
        if !s.pow(e).is_identity() {
            return Err(invalid(
                "scalar action is not a Laurent polynomial: ρ(1/e)^e ≠ 1",
            ));
        }
        let powers: Vec<CycMatrix> = (0..e).map(|k| s.pow(k)).collect();
        let mut scalar = Vec::new();
        for m in 0..e as i64 {
            let mut f = CycMatrix::zeros(field, s.rows(), s.rows());
            for (k, pk) in powers.iter().enumerate() {
                let c = field.root(QmodZ::new(-m * k as i64, e as i64))?;
                f.add_scaled(&c, pk);
            }
            let f = f.scale_rational(&rational(1, e as i64));
            if !f.is_zero() {
                scalar.push((m, f));
            }
        }
        DenseRep::new(heis, field, scalar, k1, k2)
    }

    pub fn from_monomial(w: &MonomialRep, field: &Arc<CycField>) -> Result<Self> {
        let heis = w.heis();
        let p = heis.ty().rank();
        let k1 = (0..p).map(|i| w.action(&heis.x_gen(i)).to_matrix(field)).collect();
        let k2 = (0..p).map(|i| w.action(&heis.w_gen(i)).to_matrix(field)).collect();
        DenseRep::homogeneous(heis, field, w.weight(), k1, k2)
    }

    /// `ℚ(ζ_e)`, the smallest field holding every module of `G′`.
    pub fn default_field(heis: &HeisenbergGroup) -> Arc<CycField> {
        CycField::new(heis.exponent())
    }

    pub fn heis(&self) -> &HeisenbergGroup {
        &self.heis
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k1(&self) -> &[CycMatrix] {
        &self.k1
    }

    pub fn k2(&self) -> &[CycMatrix] {
        &self.k2
    }

    pub fn scalar_components(&self) -> &[(i64, CycMatrix)] {
        &self.scalar
    }

    pub fn weights(&self) -> Vec<i64> {
        self.scalar.iter().map(|s| s.0).collect()
    }

    pub fn weight(&self) -> Result<i64> {
        match self.scalar.as_slice() {
            [(n, _)] => Ok(*n),
            [] => Ok(0),
            _ => Err(ThetaError::NotHomogeneous(self.weights())),
        }
    }

    /// `ρ(β) = Σ_n e(nβ) F_n`.
    pub fn scalar_matrix(&self, beta: QmodZ) -> Result<CycMatrix> {
        let mut m = CycMatrix::zeros(&self.field, self.dim, self.dim);
        for (n, f) in &self.scalar {
            m.add_scaled(&self.field.root(beta.scale(*n))?, f);
        }
        Ok(m)
    }

    pub fn x_power(&self, x: &GroupElement) -> CycMatrix {
        power_product(&self.field, self.dim, &self.k1, x)
    }

    pub fn w_power(&self, w: &GroupElement) -> CycMatrix {
        power_product(&self.field, self.dim, &self.k2, w)
    }

    pub fn act(&self, g: &HElem) -> Result<CycMatrix> {
        let beta = g.alpha - self.heis.pairing(&g.x, &g.w);
        Ok(self
            .scalar_matrix(beta)?
            .mul(&self.x_power(&g.x))
            .mul(&self.w_power(&g.w)))
    }

    /// `X^x` for every `x`, indexed like `ty.elements()`.
    pub fn all_x_powers(&self) -> Vec<CycMatrix> {
        all_powers(&self.heis, &self.field, self.dim, &self.k1)
    }

    pub fn all_w_powers(&self) -> Vec<CycMatrix> {
        all_powers(&self.heis, &self.field, self.dim, &self.k2)
    }

    pub fn direct_sum(parts: &[&DenseRep]) -> Result<DenseRep> {
        let first = parts
            .first()
            .ok_or_else(|| ThetaError::InvalidArgument("empty direct sum".into()))?;
        let field = Arc::clone(&first.field);
        for p in parts {
            if p.heis != first.heis || p.field.level() != field.level() {
                return Err(ThetaError::InvalidArgument(
                    "summands over different groups or fields".into(),
                ));
            }
        }
        let mut weights: Vec<i64> = parts.iter().flat_map(|p| p.weights()).collect();
        weights.sort_unstable();
        weights.dedup();
        let scalar = weights
            .iter()
            .map(|&n| {
                let blocks: Vec<CycMatrix> = parts
                    .iter()
                    .map(|p| {
                        p.scalar
                            .iter()
                            .find(|s| s.0 == n)
                            .map(|s| s.1.clone())
                            .unwrap_or_else(|| CycMatrix::zeros(&field, p.dim, p.dim))
                    })
                    .collect();
                let refs: Vec<&CycMatrix> = blocks.iter().collect();
                (n, CycMatrix::block_diagonal(&field, &refs))
            })
            .collect();
        let p = first.heis.ty().rank();
        let stack = |pick: &dyn Fn(&DenseRep) -> &[CycMatrix]| -> Vec<CycMatrix> {
            (0..p)
                .map(|i| {
                    let refs: Vec<&CycMatrix> = parts.iter().map(|r| &pick(r)[i]).collect();
                    CycMatrix::block_diagonal(&field, &refs)
                })
                .collect()
        };
        let k1 = stack(&|r| &r.k1);
        let k2 = stack(&|r| &r.k2);
        DenseRep::new(&first.heis, &field, scalar, k1, k2)
    }

    /// The module `P ρ P⁻¹`.
    pub fn conjugate(&self, p: &CycMatrix, p_inv: &CycMatrix) -> Result<DenseRep> {
        if !p.mul(p_inv).is_identity() {
            return Err(ThetaError::InvalidArgument("p_inv is not the inverse of p".into()));
        }
        let conj = |m: &CycMatrix| m.conjugate_by(p, p_inv);
        DenseRep::new(
            &self.heis,
            &self.field,
            self.scalar.iter().map(|(n, f)| (*n, conj(f))).collect(),
            self.k1.iter().map(conj).collect(),
            self.k2.iter().map(conj).collect(),
        )
    }

    /// Traces on `G′`, in the enumeration order of `GPrime::elements`.
    pub fn character(&self, gp: &GPrime) -> Result<Vec<CycNumber>> {
        let ty = self.heis.ty();
        let xs = self.all_x_powers();
        let ws = self.all_w_powers();
        let nk = ty.order() as usize;
        // traces[c][ix * nk + iw] = tr(F_c X^x Y^w)
        let mut traces = Vec::with_capacity(self.scalar.len());
        for (_, f) in &self.scalar {
            let homogeneous = self.scalar.len() == 1;
            let mut t = Vec::with_capacity(nk * nk);
            for x in &xs {
                let fx = if homogeneous { x.clone() } else { f.mul(x) };
                for w in &ws {
                    t.push(fx.trace_of_product(w));
                }
            }
            traces.push(t);
        }
        let elems: Vec<GroupElement> = ty.elements().collect();
        let mut out = Vec::with_capacity(gp.elements.len());
        for g in &gp.elements {
            let ix = ty.index_of(&g.x);
            let iw = ty.index_of(&g.w);
            let beta = g.alpha - self.heis.pairing(&elems[ix], &elems[iw]);
            let mut v = self.field.zero();
            for ((n, _), t) in self.scalar.iter().zip(&traces) {
                let tr = &t[ix * nk + iw];
                if !tr.is_zero() {
                    v += &(&self.field.root(beta.scale(*n))? * tr);
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

fn power_product(
    field: &Arc<CycField>,
    dim: usize,
    gens: &[CycMatrix],
    x: &GroupElement,
) -> CycMatrix {
    let mut m = CycMatrix::identity(field, dim);
    for (g, &c) in gens.iter().zip(&x.coords) {
        for _ in 0..c {
            m = m.mul(g);
        }
    }
    m
}

fn all_powers(
    heis: &HeisenbergGroup,
    field: &Arc<CycField>,
    dim: usize,
    gens: &[CycMatrix],
) -> Vec<CycMatrix> {
    let ty = heis.ty();
    let mut out: Vec<CycMatrix> = Vec::with_capacity(ty.order() as usize);
    for x in ty.elements() {
        // drop one from the last nonzero coordinate: an earlier element
        let m = match x.coords.iter().rposition(|&c| c != 0) {
            None => CycMatrix::identity(field, dim),
            Some(i) => {
                let mut prev = x.clone();
                prev.coords[i] -= 1;
                out[ty.index_of(&prev)].mul(&gens[i])
            }
        };
        out.push(m);
    }
    out
}

/// `(1/|G′|) Σ_g a(g) · conj(b(g))`, which must be rational.
pub fn class_inner_product(a: &[CycNumber], b: &[CycNumber]) -> Result<BigRational> {
    assert_eq!(a.len(), b.len());
    let field = a
        .first()
        .map(|v| Arc::clone(v.field()))
        .unwrap_or_else(|| CycField::new(1));
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * &y.conj());
        }
    }
    let r = acc
        .as_rational()
        .ok_or_else(|| ThetaError::ContractViolation("inner product is not rational".into()))?;
    Ok(r / BigRational::from_integer(BigInt::from(a.len())))
}

/// Character norm and dimension test for one homogeneous module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub weight: i64,
    pub dim: usize,
    pub expected_dim: u64,
    pub norm: BigRational,
    pub irreducible: bool,
}

/// Irreducibility via `⟨χ_V, χ_V⟩_{G′} = 1`, cross-checked against
/// `dim V = D_n`.
pub fn is_irreducible(v: &DenseRep) -> Result<IrreducibilityReport> {
    let n = v.weight()?;
    let gp = v.heis.gprime();
    let chi = v.character(&gp)?;
    let norm = class_inner_product(&chi, &chi)?;
    let expected_dim = count_irreps(v.heis.ty(), n).1;
    let irreducible = norm.is_one();
    if irreducible != (v.dim as u64 == expected_dim) {
        return Err(ThetaError::ContractViolation(format!(
            "character norm {norm} disagrees with dim {} vs D_n = {expected_dim}",
            v.dim
        )));
    }
    Ok(IrreducibilityReport {
        weight: n,
        dim: v.dim,
        expected_dim,
        norm,
        irreducible,
    })
}

impl MonomialRep {
    pub fn is_irreducible(&self) -> Result<IrreducibilityReport> {
        let gp = self.heis().gprime();
        let norm = self.character(&gp).norm()?;
        let expected_dim = count_irreps(self.heis().ty(), self.weight()).1;
        let irreducible = norm.is_one();
        if irreducible != (self.dim() as u64 == expected_dim) {
            return Err(ThetaError::ContractViolation(format!(
                "character norm {norm} disagrees with dimension {}",
                self.dim()
            )));
        }
        Ok(IrreducibilityReport {
            weight: self.weight(),
            dim: self.dim(),
            expected_dim,
            norm,
            irreducible,
        })
    }
}

/// Splits the scalar action: `V = ⊕_n V_n`.
pub fn weight_decompose(v: &DenseRep) -> Result<BTreeMap<i64, DenseRep>> {
    let field = &v.field;
    let bases: Vec<(i64, Vec<Vector>)> = v
        .scalar
        .iter()
        .map(|(n, f)| (*n, f.column_space()))
        .collect();
    let all: Vec<Vector> = bases.iter().flat_map(|b| b.1.iter().cloned()).collect();
    let m = CycMatrix::from_columns(field, v.dim, &all);
    let m_inv = m
        .inverse()
        .ok_or_else(|| ThetaError::ContractViolation("weight spaces do not span".into()))?;
    let mut out = BTreeMap::new();
    let mut start = 0;
    for (n, basis) in bases {
        let k = basis.len();
        let b = CycMatrix::from_columns(field, v.dim, &basis);
        let l = CycMatrix::from_fn(field, k, v.dim, |i, j| m_inv.get(start + i, j).clone());
        let restrict = |g: &CycMatrix| l.mul(g).mul(&b);
        let part = DenseRep::homogeneous(
            &v.heis,
            field,
            n,
            v.k1.iter().map(restrict).collect(),
            v.k2.iter().map(restrict).collect(),
        )?;
        out.insert(n, part);
        start += k;
    }
    Ok(out)
}

/// Simultaneous eigenspaces `V_y` of the `K₁`-action, where `x` acts on
/// `V_y` by `e(⟨x, y⟩)`.
#[derive(Clone, Debug)]
pub struct WeightSpaces {
    pub n: i64,
    pub spaces: BTreeMap<GroupElement, Vec<Vector>>,
}

impl WeightSpaces {
    pub fn dims(&self) -> BTreeMap<GroupElement, usize> {
        self.spaces.iter().map(|(y, b)| (y.clone(), b.len())).collect()
    }
}

fn is_eigenvector(m: &CycMatrix, v: &[CycNumber], lambda: &CycNumber) -> bool {
    let mv = m.apply(v);
    mv.iter().zip(v).all(|(a, b)| *a == b * lambda)
}

fn in_space(v: &CycMatrix, x_gens: &[CycMatrix], y: &GroupElement, heis: &HeisenbergGroup) -> impl Fn(&[CycNumber]) -> bool {
    let field = Arc::clone(v.field());
    let ty = heis.ty().clone();
    let eig: Vec<CycNumber> = ty
        .basis()
        .iter()
        .map(|e| field.root(ty.dual_character(y, e)).expect("level"))
        .collect();
    let gens = x_gens.to_vec();
    move |vec: &[CycNumber]| gens.iter().zip(&eig).all(|(g, l)| is_eigenvector(g, vec, l))
}

pub fn k1_weight_spaces(v: &DenseRep) -> Result<WeightSpaces> {
    let n = v.weight()?;
    let ty = v.heis.ty();
    let field = &v.field;
    let xs = v.all_x_powers();
    let elems: Vec<GroupElement> = ty.elements().collect();
    let inv_order = rational(1, ty.order() as i64);
    let mut spaces = BTreeMap::new();
    let mut total = 0;
    for y in &elems {
        let mut p = CycMatrix::zeros(field, v.dim, v.dim);
        for (x, m) in elems.iter().zip(&xs) {
            p.add_scaled(&field.root(-ty.dual_character(y, x))?, m);
        }
        let p = p.scale_rational(&inv_order);
        let rank = p.trace().as_rational().ok_or_else(|| {
            ThetaError::ContractViolation("weight projector has irrational trace".into())
        })?;
        if rank.is_zero() {
            continue;
        }
        let basis = p.column_space();
        if BigRational::from_integer(BigInt::from(basis.len())) != rank {
            return Err(ThetaError::ContractViolation(format!(
                "K₁ action is not diagonalizable at y = {y}"
            )));
        }
        total += basis.len();
        spaces.insert(y.clone(), basis);
    }
    if total != v.dim {
        return Err(ThetaError::ContractViolation(
            "K₁ weight spaces do not span the module".into(),
        ));
    }
    // ρ(α, x, w) maps V_y into V_{y + nw}: check on the generators
    for (y, basis) in &spaces {
        let stay = in_space(&v.k1[0], &v.k1, y, &v.heis);
        for b in basis {
            if !stay(b) {
                return Err(ThetaError::ContractViolation(format!("V_{y} is not a weight space")));
            }
            for (j, yj) in v.k2.iter().enumerate() {
                let target = ty.add(y, &ty.scale(&ty.basis()[j], n));
                let moved = yj.apply(b);
                if !in_space(yj, &v.k1, &target, &v.heis)(&moved) {
                    return Err(ThetaError::ContractViolation(format!(
                        "Y_{j} does not map V_{y} into V_{target}"
                    )));
                }
            }
        }
    }
    Ok(WeightSpaces { n, spaces })
}

/// One irreducible summand `≅ W_{y,χ}`, with basis vectors matching the
/// monomial basis `e_{y+z}` of `W_{y,χ}`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub y: GroupElement,
    pub chi: KernelCharacter,
    pub basis: Vec<Vector>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n: i64,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    /// Sorted label classes, with repetition.
    pub fn labels(&self) -> Vec<(GroupElement, KernelCharacter)> {
        let mut l: Vec<_> = self
            .summands
            .iter()
            .map(|s| (s.y.clone(), s.chi.clone()))
            .collect();
        l.sort();
        l
    }
}

/// Splits a homogeneous module into copies of `W_{y,χ}`.
///
/// For each class representative `y` and character `χ` of `ker π_n`, the
/// space `V_{y,χ}` (where `Y^w` acts by `χ(w)` for `w ∈ ker π_n`) is
/// computed inside `V_y`; every basis vector `s` of it spans a copy
/// `⟨Y^{σ(z)} s⟩_z` of `W_{y,χ}`. The generators are checked to act on each
/// copy exactly as on `W_{y,χ}`, and the copies are checked to span `V`.
pub fn decompose_weight_module(v: &DenseRep) -> Result<Decomposition> {
    let spaces = k1_weight_spaces(v)?;
    let n = spaces.n;
    let heis = &v.heis;
    let ty = heis.ty();
    let field = &v.field;
    let pi = ty.mul_by_n(n);
    let section = Section::canonical(&pi);
    let ws = v.all_w_powers();
    let ker_scale = rational(1, pi.kernel.len() as i64);
    let chis = KernelCharacter::all(&pi);
    let projectors: Vec<CycMatrix> = chis
        .iter()
        .map(|chi| {
            let mut q = CycMatrix::zeros(field, v.dim, v.dim);
            for w in &pi.kernel {
                let c = field.root(-chi.eval(&pi, w)).expect("level");
                q.add_scaled(&c, &ws[ty.index_of(w)]);
            }
            q.scale_rational(&ker_scale)
        })
        .collect();
    let gens = heis.generators();
    let gen_mats: Vec<CycMatrix> = gens.iter().map(|g| v.act(g)).collect::<Result<_>>()?;

    let mut summands = Vec::new();
    for (y, basis) in &spaces.spaces {
        if coset_rep(&pi, y) != *y {
            continue;
        }
        for (chi, q) in chis.iter().zip(&projectors) {
            let images: Vec<Vector> = basis.iter().map(|b| q.apply(b)).collect();
            let iso = CycMatrix::from_columns(field, v.dim, &images).column_space();
            if iso.is_empty() {
                continue;
            }
            let model = build_irrep(heis, n, y, chi, &section)?;
            for s in iso {
                let copy: Vec<Vector> = (0..pi.image.len())
                    .map(|i| ws[ty.index_of(section.at(i))].apply(&s))
                    .collect();
                for (g, m) in gens.iter().zip(&gen_mats) {
                    let act = model.action(g);
                    for (j, u) in copy.iter().enumerate() {
                        let c = field.root(act.phase[j])?;
                        let want: Vector = copy[act.perm[j]].iter().map(|t| t * &c).collect();
                        if m.apply(u) != want {
                            return Err(ThetaError::ContractViolation(format!(
                                "copy of W_(y={y}) is not preserved by {g}"
                            )));
                        }
                    }
                }
                summands.push(Summand {
                    y: y.clone(),
                    chi: chi.clone(),
                    basis: copy,
                });
            }
        }
    }
    let all: Vec<Vector> = summands.iter().flat_map(|s| s.basis.iter().cloned()).collect();
    if all.len() != v.dim || CycMatrix::from_columns(field, v.dim, &all).rank() != v.dim {
        return Err(ThetaError::ContractViolation(format!(
            "irreducible copies span {} of {} dimensions",
            all.len(),
            v.dim
        )));
    }
    Ok(Decomposition { n, summands })
}

/// Projection onto `span(basis)` along the span of the standard vectors
/// not needed to complete it to a basis of the whole space.
pub fn projection_along_standard(field: &Arc<CycField>, dim: usize, basis: &[Vector]) -> Result<CycMatrix> {
    let mut cols: Vec<Vector> = basis.to_vec();
    for i in 0..dim {
        let mut e = vec![field.zero(); dim];
        e[i] = field.one();
        let mut trial = cols.clone();
        trial.push(e);
        if CycMatrix::from_columns(field, dim, &trial).rank() == trial.len() {
            cols = trial;
        }
    }
    let b = CycMatrix::from_columns(field, dim, &cols);
    let b_inv = b
        .inverse()
        .ok_or_else(|| ThetaError::InvalidArgument("basis vectors are dependent".into()))?;
    let mut d = CycMatrix::zeros(field, dim, dim);
    for i in 0..basis.len() {
        d.set(i, i, field.one());
    }
    Ok(b.mul(&d).mul(&b_inv))
}

/// `(1/|G′|) Σ_{g ∈ G′} ρ(g) p₀ ρ(g)⁻¹` for a homogeneous module. Scalars
/// cancel, so the average runs over `K₂` and then `K₁`.
pub fn equivariant_projector(v: &DenseRep, p0: &CycMatrix) -> Result<CycMatrix> {
    v.weight()?;
    let ty = v.heis.ty();
    let elems: Vec<GroupElement> = ty.elements().collect();
    let scale = rational(1, ty.order() as i64);
    let average = |powers: &[CycMatrix], m: &CycMatrix| -> CycMatrix {
        let mut acc = CycMatrix::zeros(&v.field, v.dim, v.dim);
        for (x, px) in elems.iter().zip(powers) {
            let inv = &powers[ty.index_of(&ty.neg(x))];
            acc = acc.add(&px.mul(m).mul(inv));
        }
        acc.scale_rational(&scale)
    };
    let p1 = average(&v.all_w_powers(), p0);
    Ok(average(&v.all_x_powers(), &p1))
}

/// `P (⊕ W_{y_k, χ_k}) P⁻¹` for a random monomial `P`.
pub fn conjugated_sum<R: Rng>(
    heis: &HeisenbergGroup,
    n: i64,
    labels: &[(GroupElement, KernelCharacter)],
    rng: &mut R,
) -> Result<DenseRep> {
    let field = DenseRep::default_field(heis);
    let pi = heis.ty().mul_by_n(n);
    let section = Section::canonical(&pi);
    let parts = labels
        .iter()
        .map(|(y, chi)| DenseRep::from_monomial(&build_irrep(heis, n, y, chi, &section)?, &field))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&DenseRep> = parts.iter().collect();
    let sum = DenseRep::direct_sum(&refs)?;
    let (p, p_inv) = random_monomial(&field, sum.dim(), heis.exponent(), rng);
    sum.conjugate(&p, &p_inv)
}

/// JSON form: weight projectors and generator matrices as arrays of
/// cyclotomic encodings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DenseRepJson {
    pub divisors: Vec<u64>,
    pub level: u64,
    pub scalar: Vec<(i64, Vec<Vec<CycJson>>)>,
    pub k1: Vec<Vec<Vec<CycJson>>>,
    pub k2: Vec<Vec<Vec<CycJson>>>,
}

fn matrix_json(m: &CycMatrix) -> Vec<Vec<CycJson>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| CycJson::from(m.get(i, j))).collect())
        .collect()
}

fn matrix_from_json(field: &Arc<CycField>, rows: &[Vec<CycJson>]) -> Result<CycMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(ThetaError::Parse("matrices must be square".into()));
    }
    let mut m = CycMatrix::zeros(field, n, n);
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            let v = c.to_number()?;
            if !field.level().is_multiple_of(v.level()) {
                return Err(ThetaError::Parse(format!(
                    "entry at level {} does not fit level {}",
                    v.level(),
                    field.level()
                )));
            }
            m.set(i, j, v.relevel(field));
        }
    }
    Ok(m)
}

impl DenseRepJson {
    pub fn from_rep(v: &DenseRep) -> Self {
        DenseRepJson {
            divisors: v.heis.ty().divisors().to_vec(),
            level: v.field.level(),
            scalar: v.scalar.iter().map(|(n, f)| (*n, matrix_json(f))).collect(),
            k1: v.k1.iter().map(matrix_json).collect(),
            k2: v.k2.iter().map(matrix_json).collect(),
        }
    }

    pub fn to_rep(&self) -> Result<DenseRep> {
        let heis = HeisenbergGroup::of_type(&self.divisors)?;
        let field = CycField::new(self.level);
        let scalar = self
            .scalar
            .iter()
            .map(|(n, m)| Ok((*n, matrix_from_json(&field, m)?)))
            .collect::<Result<Vec<_>>>()?;
        let k1 = self.k1.iter().map(|m| matrix_from_json(&field, m)).collect::<Result<_>>()?;
        let k2 = self.k2.iter().map(|m| matrix_from_json(&field, m)).collect::<Result<_>>()?;
        DenseRep::new(&heis, &field, scalar, k1, k2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn heis(d: &[u64]) -> HeisenbergGroup {
        HeisenbergGroup::of_type(d).unwrap()
    }

    fn el(c: &[u64]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    fn irrep(h: &HeisenbergGroup, n: i64, y: &[u64], chi: usize) -> DenseRep {
        let pi = h.ty().mul_by_n(n);
        let c = &KernelCharacter::all(&pi)[chi];
        let w = super::super::monomial::build_irrep_canonical(h, n, &el(y), c).unwrap();
        DenseRep::from_monomial(&w, &DenseRep::default_field(h)).unwrap()
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn dense_action_matches_monomial() {
        let h = heis(&[4]);
        let pi = h.ty().mul_by_n(2);
        let chi = &KernelCharacter::all(&pi)[1];
        let w = super::super::monomial::build_irrep_canonical(&h, 2, &el(&[1]), chi).unwrap();
        let f = DenseRep::default_field(&h);
        let d = DenseRep::from_monomial(&w, &f).unwrap();
        for g in &h.gprime().elements {
            assert_eq!(d.act(g).unwrap(), w.action(g).to_matrix(&f));
        }
    }

    #[test]
    fn rejects_broken_relations() {
        let h = heis(&[2]);
        let f = DenseRep::default_field(&h);
        let id = CycMatrix::identity(&f, 1);
        // a 1-dim module of weight 1 cannot exist: X Y = -Y X
        let bad = DenseRep::homogeneous(&h, &f, 1, vec![id.clone()], vec![id.clone()]);
        assert!(matches!(bad, Err(ThetaError::InvalidModule(_))));
        let s = CycMatrix::identity(&f, 1).scale(&f.integer(2));
        let bad = DenseRep::from_scalar_generator(&h, &f, &s, vec![id.clone()], vec![id]);
        assert!(matches!(bad, Err(ThetaError::InvalidModule(_))));
    }

    #[test]
    fn irreducibility_examples() {
        let h = heis(&[2]);
        let w = irrep(&h, 1, &[0], 0);
        let r = is_irreducible(&w).unwrap();
        assert!(r.irreducible);
        assert_eq!(r.norm, int(1));
        let ww = DenseRep::direct_sum(&[&w, &w]).unwrap();
        let r = is_irreducible(&ww).unwrap();
        assert!(!r.irreducible);
        assert_eq!(r.norm, int(4));

        let h4 = heis(&[4]);
        let s = DenseRep::direct_sum(&[&irrep(&h4, 2, &[0], 0), &irrep(&h4, 2, &[1], 0)]).unwrap();
        assert_eq!(is_irreducible(&s).unwrap().norm, int(2));

        let mixed = DenseRep::direct_sum(&[&w, &irrep(&h, 0, &[0], 0)]).unwrap();
        assert!(matches!(is_irreducible(&mixed), Err(ThetaError::NotHomogeneous(_))));
    }

    #[test]
    fn weight_space_examples() {
        let h = heis(&[2]);
        let s = k1_weight_spaces(&irrep(&h, 1, &[0], 0)).unwrap();
        assert_eq!(s.dims().into_iter().collect::<Vec<_>>(), vec![(el(&[0]), 1), (el(&[1]), 1)]);
        let s = k1_weight_spaces(&irrep(&h, 0, &[0], 0)).unwrap();
        assert_eq!(s.dims().into_iter().collect::<Vec<_>>(), vec![(el(&[0]), 1)]);
        let h4 = heis(&[4]);
        let s = k1_weight_spaces(&irrep(&h4, 2, &[1], 0)).unwrap();
        assert_eq!(s.spaces.keys().cloned().collect::<Vec<_>>(), vec![el(&[1]), el(&[3])]);
    }

    #[test]
    fn weight_decompose_mixed() {
        let h = heis(&[2]);
        let parts = [
            irrep(&h, 1, &[0], 0),
            irrep(&h, 0, &[1], 1),
            irrep(&h, 2, &[0], 1),
            irrep(&h, 0, &[0], 0),
        ];
        let refs: Vec<&DenseRep> = parts.iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sum = DenseRep::direct_sum(&refs).unwrap();
        let (p, pi) = random_monomial(sum.field(), sum.dim(), 2, &mut rng);
        let v = sum.conjugate(&p, &pi).unwrap();
        let split = weight_decompose(&v).unwrap();
        let dims: Vec<(i64, usize)> = split.iter().map(|(n, r)| (*n, r.dim())).collect();
        assert_eq!(dims, vec![(0, 2), (1, 2), (2, 1)]);
        let one = weight_decompose(&parts[0]).unwrap();
        assert_eq!(one.keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn weights_from_scalar_generator() {
        let h = heis(&[2]);
        let w = irrep(&h, 1, &[0], 0);
        let t = irrep(&h, 0, &[0], 0);
        let sum = DenseRep::direct_sum(&[&w, &t]).unwrap();
        let s = sum.act(&h.scalar(QmodZ::new(1, 2))).unwrap();
        let again = DenseRep::from_scalar_generator(&h, sum.field(), &s, sum.k1().to_vec(), sum.k2().to_vec()).unwrap();
        assert_eq!(again.weights(), vec![0, 1]);
    }

    #[test]
    fn decompose_irreducible_is_itself() {
        let h = heis(&[2, 2]);
        let v = irrep(&h, 1, &[0, 0], 0);
        let d = decompose_weight_module(&v).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.summands[0].y, el(&[0, 0]));
    }

    #[test]
    fn decompose_conjugated_sum_type_4() {
        let h = heis(&[4]);
        let pi = h.ty().mul_by_n(2);
        let chi = KernelCharacter::all(&pi)[1].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = conjugated_sum(&h, 2, &[(el(&[0]), chi.clone()), (el(&[2]), chi.clone())], &mut rng).unwrap();
        let d = decompose_weight_module(&v).unwrap();
        assert_eq!(d.labels(), vec![(el(&[0]), chi.clone()), (el(&[0]), chi)]);
    }

    #[test]
    fn decompose_all_weight_one_of_type_2() {
        let h = heis(&[2]);
        let pi = h.ty().mul_by_n(1);
        let triv = KernelCharacter::trivial(&pi);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = conjugated_sum(&h, 1, &[(el(&[0]), triv.clone()), (el(&[1]), triv.clone())], &mut rng).unwrap();
        let d = decompose_weight_module(&v).unwrap();
        assert_eq!(d.labels(), vec![(el(&[0]), triv.clone()), (el(&[0]), triv)]);
    }

    #[test]
    fn averaging_gives_invariant_projector() {
        let h = heis(&[2]);
        let pi = h.ty().mul_by_n(1);
        let triv = KernelCharacter::trivial(&pi);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = conjugated_sum(&h, 1, &[(el(&[0]), triv.clone()), (el(&[1]), triv)], &mut rng).unwrap();
        let d = decompose_weight_module(&v).unwrap();
        let w = &d.summands[0].basis;
        let p0 = projection_along_standard(v.field(), v.dim(), w).unwrap();
        let p = equivariant_projector(&v, &p0).unwrap();
        assert_eq!(p.mul(&p), p);
        for g in v.k1().iter().chain(v.k2()) {
            assert_eq!(g.mul(&p), p.mul(g));
        }
        for u in w {
            assert_eq!(p.apply(u), *u);
        }
        assert_eq!(p.rank(), w.len());
    }

    #[test]
    fn json_round_trip() {
        let h = heis(&[2]);
        let v = DenseRep::direct_sum(&[&irrep(&h, 1, &[0], 0), &irrep(&h, 0, &[1], 1)]).unwrap();
        let j = serde_json::to_string(&DenseRepJson::from_rep(&v)).unwrap();
        let back: DenseRepJson = serde_json::from_str(&j).unwrap();
        let w = back.to_rep().unwrap();
        assert_eq!(w.weights(), v.weights());
        assert_eq!(w.k2(), v.k2());
    }
}
