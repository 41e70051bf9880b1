//! The standard Heisenberg group `μ_∞ × K₁ × K₂` of a type and its finite
//! subgroup `G′ = μ_e × K₁ × K₂`.

use std::fmt;

use num_integer::Integer;

use crate::abelian::{FinAbGroup, GroupElement};
use crate::error::{Result, ThetaError};
use crate::roots::QmodZ;
use crate::theta::{standard_heisenberg_of_type, ThetaElement, ThetaGroup};

/// An element `(α, x, w)` with `x ∈ K₁`, `w ∈ K₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HElem {
    pub alpha: QmodZ,
    pub x: GroupElement,
    pub w: GroupElement,
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.x, self.w)
    }
}

/// Product `(α, x, w)(β, x′, w′) = (α + β + ⟨x, w′⟩, x + x′, w + w′)` with
/// `⟨x, w⟩ = Σ x_i w_i / d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergGroup {
    ty: FinAbGroup,
}

impl HeisenbergGroup {
    pub fn new(ty: FinAbGroup) -> Self {
        HeisenbergGroup { ty }
    }

    pub fn of_type(divisors: &[u64]) -> Result<Self> {
        Ok(HeisenbergGroup::new(FinAbGroup::new(divisors.to_vec())?))
    }

    pub fn ty(&self) -> &FinAbGroup {
        &self.ty
    }

    /// `d_p`, the exponent of `K₁`; commutators live in `μ_e`.
    pub fn exponent(&self) -> u64 {
        self.ty.exponent()
    }

    pub fn pairing(&self, x: &GroupElement, w: &GroupElement) -> QmodZ {
        self.ty.dual_character(w, x)
    }

    pub fn identity(&self) -> HElem {
        self.scalar(QmodZ::ZERO)
    }

    pub fn scalar(&self, alpha: QmodZ) -> HElem {
        HElem {
            alpha,
            x: self.ty.zero(),
            w: self.ty.zero(),
        }
    }

    pub fn x_gen(&self, i: usize) -> HElem {
        HElem {
            alpha: QmodZ::ZERO,
            x: self.ty.basis()[i].clone(),
            w: self.ty.zero(),
        }
    }

    pub fn w_gen(&self, i: usize) -> HElem {
        HElem {
            alpha: QmodZ::ZERO,
            x: self.ty.zero(),
            w: self.ty.basis()[i].clone(),
        }
    }

    pub fn mul(&self, a: &HElem, b: &HElem) -> HElem {
        HElem {
            alpha: a.alpha + b.alpha + self.pairing(&a.x, &b.w),
            x: self.ty.add(&a.x, &b.x),
            w: self.ty.add(&a.w, &b.w),
        }
    }

    pub fn inv(&self, a: &HElem) -> HElem {
        HElem {
            alpha: -a.alpha + self.pairing(&a.x, &a.w),
            x: self.ty.neg(&a.x),
            w: self.ty.neg(&a.w),
        }
    }

    /// Generators of `G′`: the scalar `1/e`, then `x_i`, then `w_i`.
    pub fn generators(&self) -> Vec<HElem> {
        let p = self.ty.rank();
        let mut g = vec![self.scalar(QmodZ::new(1, self.exponent() as i64))];
        g.extend((0..p).map(|i| self.x_gen(i)));
        g.extend((0..p).map(|i| self.w_gen(i)));
        g
    }

    /// The same group as a theta group over `K₁ ⊕ K₂` (interleaved).
    pub fn as_theta_group(&self) -> ThetaGroup {
        standard_heisenberg_of_type(&self.ty)
    }

    pub fn to_theta(&self, a: &HElem) -> ThetaElement {
        ThetaElement {
            alpha: a.alpha,
            x: GroupElement::new(
                a.x.coords
                    .iter()
                    .zip(&a.w.coords)
                    .flat_map(|(&x, &w)| [x, w])
                    .collect(),
            ),
        }
    }

    pub fn gprime(&self) -> GPrime {
        GPrime::new(self.clone())
    }
}

/// `G′ = {(α, x, w) : α ∈ μ_e}`, enumerated as `α`-major, then `x`, then `w`.
#[derive(Clone, Debug)]
pub struct GPrime {
    pub heis: HeisenbergGroup,
    pub elements: Vec<HElem>,
}

impl GPrime {
    fn new(heis: HeisenbergGroup) -> Self {
        let e = heis.exponent();
        let ty = heis.ty().clone();
        let mut elements = Vec::with_capacity((e * ty.order() * ty.order()) as usize);
        for a in 0..e {
            for x in ty.elements() {
                for w in ty.elements() {
                    elements.push(HElem {
                        alpha: QmodZ::new(a as i64, e as i64),
                        x: x.clone(),
                        w,
                    });
                }
            }
        }
        GPrime { heis, elements }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `e · (∏ d_i)²`.
    pub fn order_formula(&self) -> u64 {
        let half = self.heis.ty().order();
        self.heis.exponent() * half * half
    }

    pub fn index_of(&self, g: &HElem) -> usize {
        let ty = self.heis.ty();
        let e = self.heis.exponent();
        let a = g.alpha.exponent_at(e).expect("scalar in μ_e") as usize;
        let n = ty.order() as usize;
        (a * n + ty.index_of(&g.x)) * n + ty.index_of(&g.w)
    }

    /// Conjugacy classes by brute force: the orbit of each element under
    /// `g ↦ h g h⁻¹` for every `h ∈ G′`.
    pub fn conjugacy_classes(&self, cap: u64) -> Result<Vec<Vec<usize>>> {
        if self.order() > cap {
            return Err(ThetaError::SizeExceeded {
                what: "|G′|".into(),
                size: self.order(),
                cap,
            });
        }
        let h = &self.heis;
        let inverses: Vec<HElem> = self.elements.iter().map(|g| h.inv(g)).collect();
        let mut class_of = vec![usize::MAX; self.elements.len()];
        let mut classes = Vec::new();
        for (i, g) in self.elements.iter().enumerate() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for (k, hi) in self.elements.iter().zip(&inverses) {
                let c = h.mul(&h.mul(k, g), hi);
                let j = self.index_of(&c);
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    members.push(j);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        Ok(classes)
    }
}

/// `Σ_{r=0}^{e−1} ∏ gcd(r, d_i)²`.
pub fn gprime_class_formula(ty: &FinAbGroup) -> u64 {
    let e = ty.exponent();
    (0..e)
        .map(|r| ty.divisors().iter().map(|&d| r.gcd(&d).pow(2)).product::<u64>())
        .sum()
}

/// Brute-force class count of `G′` alongside the closed formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPrimeCount {
    pub order: u64,
    pub order_formula: u64,
    pub classes: u64,
    pub class_formula: u64,
}

pub fn gprime_class_count(ty: &FinAbGroup, cap: u64) -> Result<GPrimeCount> {
    let g = HeisenbergGroup::new(ty.clone()).gprime();
    let classes = g.conjugacy_classes(cap)?.len() as u64;
    Ok(GPrimeCount {
        order: g.order(),
        order_formula: g.order_formula(),
        classes,
        class_formula: gprime_class_formula(ty),
    })
}
