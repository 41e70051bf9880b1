//! The irreducible weight-`n` modules `W_{y,χ}` in their monomial basis,
//! their characters on `G′`, and the classification by labels.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::heisenberg::{GPrime, HElem, HeisenbergGroup};
use super::linalg::CycMatrix;
use crate::abelian::{FinAbGroup, GroupElement, MulByN};
use crate::error::{Result, ThetaError};
use crate::roots::{CycField, QmodZ};

/// A character of `ker π_n`, stored by its values on the basis of
/// `MulByN::kernel_group`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelCharacter {
    values: Vec<QmodZ>,
}

impl KernelCharacter {
    pub fn new(pi: &MulByN, values: Vec<QmodZ>) -> Result<Self> {
        let kg = pi.kernel_group();
        if values.len() != kg.rank() {
            return Err(ThetaError::InvalidCharacter(format!(
                "{} values for a kernel of rank {}",
                values.len(),
                kg.rank()
            )));
        }
        for (v, &g) in values.iter().zip(kg.divisors()) {
            if !v.scale(g as i64).is_zero() {
                return Err(ThetaError::InvalidCharacter(format!(
                    "value {v} on a generator of order {g}"
                )));
            }
        }
        Ok(KernelCharacter { values })
    }

    pub fn trivial(pi: &MulByN) -> Self {
        KernelCharacter {
            values: vec![QmodZ::ZERO; pi.kernel_group().rank()],
        }
    }

    /// The character `w ↦ ⟨t, w⟩` of the kernel group.
    pub fn from_dual(pi: &MulByN, t: &GroupElement) -> Self {
        let kg = pi.kernel_group();
        KernelCharacter {
            values: kg.basis().iter().map(|b| kg.dual_character(t, b)).collect(),
        }
    }

    /// A character given by its values on every kernel element; checks that
    /// it is a homomorphism.
    pub fn from_kernel_values(pi: &MulByN, f: impl Fn(&GroupElement) -> QmodZ) -> Result<Self> {
        let k = &pi.domain;
        for a in &pi.kernel {
            for b in &pi.kernel {
                if f(a) + f(b) != f(&k.add(a, b)) {
                    return Err(ThetaError::InvalidCharacter(format!(
                        "χ({a}) + χ({b}) ≠ χ({a} + {b})"
                    )));
                }
            }
        }
        let values = pi.kernel_generators().iter().map(&f).collect();
        KernelCharacter::new(pi, values)
    }

    /// Every character of `ker π_n`, in the order of the dual group.
    pub fn all(pi: &MulByN) -> Vec<KernelCharacter> {
        pi.kernel_group()
            .elements()
            .map(|t| KernelCharacter::from_dual(pi, &t))
            .collect()
    }

    pub fn values(&self) -> &[QmodZ] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn eval(&self, pi: &MulByN, w: &GroupElement) -> QmodZ {
        let c = pi
            .kernel_coords(w)
            .unwrap_or_else(|| panic!("{w} is not in the kernel of multiplication by {}", pi.n));
        c.coords
            .iter()
            .zip(&self.values)
            .map(|(&k, v)| v.scale(k as i64))
            .sum()
    }
}

/// A set-theoretic section `σ` of `π_n: K₂ → image π_n` with `σ(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    n: i64,
    preimages: Vec<GroupElement>,
}

impl Section {
    /// The lexicographically smallest preimage of each image point; for
    /// `n = 1` this is the identity.
    pub fn canonical(pi: &MulByN) -> Self {
        let mut pre: Vec<Option<GroupElement>> = vec![None; pi.image.len()];
        for w in pi.domain.elements() {
            let i = pi.image_index(&pi.apply(&w)).expect("image point");
            if pre[i].is_none() {
                pre[i] = Some(w);
            }
        }
        Section {
            n: pi.n,
            preimages: pre.into_iter().map(|p| p.expect("surjective")).collect(),
        }
    }

    /// The canonical section shifted by random kernel elements (keeping `σ(0) = 0`).
    pub fn randomized<R: Rng>(pi: &MulByN, rng: &mut R) -> Self {
        let mut s = Section::canonical(pi);
        let zero = pi.domain.zero();
        for (z, p) in pi.image.iter().zip(s.preimages.iter_mut()) {
            if *z == zero {
                continue;
            }
            let k = &pi.kernel[rng.gen_range(0..pi.kernel.len())];
            *p = pi.domain.add(p, k);
        }
        s
    }

    pub fn from_preimages(pi: &MulByN, preimages: Vec<GroupElement>) -> Result<Self> {
        if preimages.len() != pi.image.len() {
            return Err(ThetaError::InvalidArgument("one preimage per image point".into()));
        }
        for (z, w) in pi.image.iter().zip(&preimages) {
            if pi.apply(w) != *z {
                return Err(ThetaError::InvalidArgument(format!(
                    "{w} is not a preimage of {z} under multiplication by {}",
                    pi.n
                )));
            }
        }
        if !preimages[0].is_zero() {
            return Err(ThetaError::InvalidArgument("section must send 0 to 0".into()));
        }
        Ok(Section { n: pi.n, preimages })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// `σ(z)` for the `i`-th image point.
    pub fn at(&self, i: usize) -> &GroupElement {
        &self.preimages[i]
    }

    pub fn get(&self, pi: &MulByN, z: &GroupElement) -> &GroupElement {
        &self.preimages[pi.image_index(z).expect("image point")]
    }
}

/// How one group element acts in a monomial basis: `g·e_j = e(phase_j) e_{perm_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialAction {
    pub perm: Vec<usize>,
    pub phase: Vec<QmodZ>,
}

impl MonomialAction {
    /// `self ∘ other`.
    pub fn compose(&self, other: &MonomialAction) -> MonomialAction {
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let phase = other
            .phase
            .iter()
            .zip(&other.perm)
            .map(|(&p, &j)| p + self.phase[j])
            .collect();
        MonomialAction { perm, phase }
    }

    pub fn to_matrix(&self, field: &Arc<CycField>) -> CycMatrix {
        CycMatrix::monomial(field, &self.perm, &self.phase)
    }
}

/// `W_{y,χ}` with basis `e_{y+z}`, `z ∈ image π_n`, and action
/// `(α, x, w)·e_{y+z} = e(nα + ⟨x, y+z⟩ + χ(w + σ(z) − σ(nw + z))) e_{y+z+nw}`.
#[derive(Clone, Debug)]
pub struct MonomialRep {
    heis: HeisenbergGroup,
    n: i64,
    y: GroupElement,
    chi: KernelCharacter,
    pi: MulByN,
    section: Section,
}

pub fn build_irrep(
    heis: &HeisenbergGroup,
    n: i64,
    y: &GroupElement,
    chi: &KernelCharacter,
    section: &Section,
) -> Result<MonomialRep> {
    let ty = heis.ty();
    ty.check(y)?;
    let pi = ty.mul_by_n(n);
    let chi = KernelCharacter::new(&pi, chi.values.clone())?;
    if section.n != n || section.preimages.len() != pi.image.len() {
        return Err(ThetaError::InvalidArgument(format!(
            "section belongs to weight {}, not {n}",
            section.n
        )));
    }
    Ok(MonomialRep {
        heis: heis.clone(),
        n,
        y: y.clone(),
        chi,
        pi,
        section: section.clone(),
    })
}

/// [`build_irrep`] with the canonical section.
pub fn build_irrep_canonical(
    heis: &HeisenbergGroup,
    n: i64,
    y: &GroupElement,
    chi: &KernelCharacter,
) -> Result<MonomialRep> {
    let pi = heis.ty().mul_by_n(n);
    build_irrep(heis, n, y, chi, &Section::canonical(&pi))
}

impl MonomialRep {
    pub fn heis(&self) -> &HeisenbergGroup {
        &self.heis
    }

    pub fn weight(&self) -> i64 {
        self.n
    }

    pub fn y(&self) -> &GroupElement {
        &self.y
    }

    pub fn chi(&self) -> &KernelCharacter {
        &self.chi
    }

    pub fn pi(&self) -> &MulByN {
        &self.pi
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn dim(&self) -> usize {
        self.pi.image.len()
    }

    /// Basis labels `y + z`.
    pub fn basis(&self) -> Vec<GroupElement> {
        let ty = self.heis.ty();
        self.pi.image.iter().map(|z| ty.add(&self.y, z)).collect()
    }

    pub fn action(&self, g: &HElem) -> MonomialAction {
        let ty = self.heis.ty();
        let nw = self.pi.apply(&g.w);
        let base_phase = g.alpha.scale(self.n);
        let mut perm = Vec::with_capacity(self.dim());
        let mut phase = Vec::with_capacity(self.dim());
        for (i, z) in self.pi.image.iter().enumerate() {
            let target = ty.add(&nw, z);
            let j = self.pi.image_index(&target).expect("image is a subgroup");
            let k = ty.sub(&ty.add(&g.w, self.section.at(i)), self.section.at(j));
            let p = base_phase
                + self.heis.pairing(&g.x, &ty.add(&self.y, z))
                + self.chi.eval(&self.pi, &k);
            perm.push(j);
            phase.push(p);
        }
        MonomialAction { perm, phase }
    }

    /// `ρ(g)ρ(h) = ρ(gh)` for all pairs from `elements`.
    pub fn verify_homomorphism(&self, elements: &[HElem]) -> Result<()> {
        let acts: Vec<MonomialAction> = elements.iter().map(|g| self.action(g)).collect();
        for (g, ag) in elements.iter().zip(&acts) {
            for (h, ah) in elements.iter().zip(&acts) {
                if ag.compose(ah) != self.action(&self.heis.mul(g, h)) {
                    return Err(ThetaError::ContractViolation(format!(
                        "action is not multiplicative at {g} · {h}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Traces on `G′` as multisets of roots of unity.
    pub fn character(&self, gp: &GPrime) -> RootCharacter {
        let level = self.heis.exponent();
        let values = gp
            .elements
            .iter()
            .map(|g| {
                let a = self.action(g);
                let mut counts = vec![0i64; level as usize];
                for (j, (&i, q)) in a.perm.iter().zip(&a.phase).enumerate() {
                    if i == j {
                        counts[q.exponent_at(level).expect("phase in μ_e") as usize] += 1;
                    }
                }
                counts
            })
            .collect();
        RootCharacter { level, values }
    }

    /// The label class `(min(y + image π_n), χ)`.
    pub fn label(&self) -> (GroupElement, KernelCharacter) {
        (coset_rep(&self.pi, &self.y), self.chi.clone())
    }
}

/// The smallest element of `y + image π_n`.
pub fn coset_rep(pi: &MulByN, y: &GroupElement) -> GroupElement {
    pi.image
        .iter()
        .map(|z| pi.domain.add(y, z))
        .min()
        .expect("image contains 0")
}

/// A class function on `G′` whose values are sums of `e`-th roots of unity,
/// stored as multiplicities of `ζ_e^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCharacter {
    pub level: u64,
    pub values: Vec<Vec<i64>>,
}

impl RootCharacter {
    /// `(1/|G′|) Σ_g χ(g) · conj(ψ(g))`, exactly.
    pub fn inner_product(&self, other: &RootCharacter) -> Result<BigRational> {
        assert_eq!(self.level, other.level);
        assert_eq!(self.values.len(), other.values.len());
        let e = self.level as usize;
        let mut total = vec![0i64; e];
        for (a, b) in self.values.iter().zip(&other.values) {
            for (i, &ca) in a.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (j, &cb) in b.iter().enumerate() {
                    if cb != 0 {
                        total[(i + e - j) % e] += ca * cb;
                    }
                }
            }
        }
        let field = CycField::new(self.level);
        let mut sum = field.zero();
        for (k, &c) in total.iter().enumerate() {
            if c != 0 {
                sum += &(&field.integer(c) * &field.zeta_pow(k as i64));
            }
        }
        let r = sum.as_rational().ok_or_else(|| {
            ThetaError::ContractViolation("character inner product is not rational".into())
        })?;
        Ok(r / BigRational::from_integer(BigInt::from(self.values.len())))
    }

    pub fn norm(&self) -> Result<BigRational> {
        self.inner_product(self)
    }

    pub fn sum(&self, other: &RootCharacter) -> RootCharacter {
        RootCharacter {
            level: self.level,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

/// Isomorphism of two irreducibles by their labels: `y − y′ ∈ image π_n`
/// and `χ = χ′`. The answer is cross-checked against the character inner
/// product over `G′`.
pub fn isomorphic(a: &MonomialRep, b: &MonomialRep) -> Result<bool> {
    let gp = a.heis.gprime();
    isomorphic_with(a, b, &a.character(&gp), &b.character(&gp))
}

pub(crate) fn isomorphic_with(
    a: &MonomialRep,
    b: &MonomialRep,
    ca: &RootCharacter,
    cb: &RootCharacter,
) -> Result<bool> {
    if a.heis != b.heis || a.n != b.n {
        return Err(ThetaError::InvalidArgument(format!(
            "cannot compare weight {} and weight {} modules of different groups",
            a.n, b.n
        )));
    }
    let ty = a.heis.ty();
    let by_label = a.pi.in_image(&ty.sub(&a.y, &b.y)) && a.chi == b.chi;
    let ip = ca.inner_product(cb)?;
    let by_character = ip == BigRational::from_integer(1.into());
    if !by_character && ip != BigRational::from_integer(0.into()) {
        return Err(ThetaError::ContractViolation(format!(
            "inner product {ip} of two irreducibles is neither 0 nor 1"
        )));
    }
    if by_label != by_character {
        return Err(ThetaError::ContractViolation(format!(
            "label test says {by_label} but characters say {by_character} for y = {}, {}",
            a.y, b.y
        )));
    }
    Ok(by_label)
}

/// `(∏ gcd(n, d_i)², ∏ d_i / gcd(n, d_i))`.
pub fn count_irreps(ty: &FinAbGroup, n: i64) -> (u64, u64) {
    let m = n.unsigned_abs();
    ty.divisors().iter().fold((1, 1), |(c, d), &di| {
        let g = m.gcd(&di);
        (c * g * g, d * (di / g))
    })
}

/// Result of classifying every `W_{y,χ}` of one weight up to isomorphism.
#[derive(Clone, Debug)]
pub struct Classification {
    pub n: i64,
    /// One representative label per class, with the number of labels in it.
    pub classes: Vec<(GroupElement, KernelCharacter, usize)>,
    pub dims: Vec<usize>,
    pub formula: (u64, u64),
}

impl Classification {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn matches_formula(&self) -> bool {
        self.classes.len() as u64 == self.formula.0
            && self.dims.iter().all(|&d| d as u64 == self.formula.1)
    }
}

/// Builds `W_{y,χ}` for every `y ∈ K₂` and every `χ`, checks each is a
/// module and irreducible, and sorts them into classes by pairwise
/// isomorphism tests.
pub fn classify_irreps(heis: &HeisenbergGroup, n: i64) -> Result<Classification> {
    let ty = heis.ty();
    let pi = ty.mul_by_n(n);
    let section = Section::canonical(&pi);
    let gp = heis.gprime();
    let gens = heis.generators();
    let one = BigRational::from_integer(1.into());

    let mut reps: Vec<(MonomialRep, RootCharacter)> = Vec::new();
    let mut class_reps: Vec<usize> = Vec::new();
    let mut classes: Vec<(GroupElement, KernelCharacter, usize)> = Vec::new();
    let mut dims = Vec::new();
    for y in ty.elements() {
        for chi in KernelCharacter::all(&pi) {
            let w = build_irrep(heis, n, &y, &chi, &section)?;
            w.verify_homomorphism(&gens)?;
            let c = w.character(&gp);
            if c.norm()? != one {
                return Err(ThetaError::ContractViolation(format!(
                    "W_(y={y}) has character norm ≠ 1"
                )));
            }
            let mut found = None;
            for (ci, &ri) in class_reps.iter().enumerate() {
                let (r, rc) = &reps[ri];
                if isomorphic_with(&w, r, &c, rc)? {
                    found = Some(ci);
                    break;
                }
            }
            match found {
                Some(ci) => classes[ci].2 += 1,
                None => {
                    class_reps.push(reps.len());
                    classes.push((y.clone(), chi.clone(), 1));
                    dims.push(w.dim());
                }
            }
            reps.push((w, c));
        }
    }
    Ok(Classification {
        n,
        classes,
        dims,
        formula: count_irreps(ty, n),
    })
}
