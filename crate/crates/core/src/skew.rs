//! Alternating biadditive forms `K × K → ℚ/ℤ` and their symplectic
//! decompositions.

use serde::{Deserialize, Serialize};

use crate::abelian::{FinAbGroup, GroupElement, Quotient, Subgroup};
use crate::error::{Result, ThetaError};
use crate::roots::QmodZ;

/// An alternating form given by its Gram matrix on the standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm {
    base: FinAbGroup,
    gram: Vec<Vec<QmodZ>>,
}

impl SkewForm {
    pub fn new(base: FinAbGroup, gram: Vec<Vec<QmodZ>>) -> Result<Self> {
        let p = base.rank();
        if gram.len() != p || gram.iter().any(|r| r.len() != p) {
            return Err(ThetaError::InvalidForm(format!(
                "gram matrix must be {p}x{p}"
            )));
        }
        for i in 0..p {
            if !gram[i][i].is_zero() {
                return Err(ThetaError::InvalidForm(format!("b[{i}][{i}] = {} ≠ 0", gram[i][i])));
            }
            for j in 0..p {
                if gram[i][j] != -gram[j][i] {
                    return Err(ThetaError::InvalidForm(format!(
                        "b[{i}][{j}] = {} is not -b[{j}][{i}] = {}",
                        gram[i][j], gram[j][i]
                    )));
                }
                let g = num_integer::gcd(base.divisors()[i], base.divisors()[j]);
                if !g.is_multiple_of(gram[i][j].order()) {
                    return Err(ThetaError::InvalidForm(format!(
                        "b[{i}][{j}] = {} has order not dividing gcd = {g}",
                        gram[i][j]
                    )));
                }
            }
        }
        Ok(SkewForm { base, gram })
    }

    /// The form from its strict upper triangle.
    pub fn from_upper(base: FinAbGroup, upper: impl Fn(usize, usize) -> QmodZ) -> Result<Self> {
        let p = base.rank();
        let mut gram = vec![vec![QmodZ::ZERO; p]; p];
        for i in 0..p {
            for j in i + 1..p {
                gram[i][j] = upper(i, j);
                gram[j][i] = -gram[i][j];
            }
        }
        SkewForm::new(base, gram)
    }

    pub fn zero(base: FinAbGroup) -> Self {
        let p = base.rank();
        SkewForm {
            base,
            gram: vec![vec![QmodZ::ZERO; p]; p],
        }
    }

    /// The hyperbolic form on `⊕ (ℤ/d_i)²` (coordinates `x₁, y₁, x₂, y₂, …`)
    /// with `[x_i, y_i] = 1/d_i`.
    pub fn standard(ty: &FinAbGroup) -> Self {
        let base = ty.interleave_square();
        SkewForm::from_upper(base, |i, j| {
            if i % 2 == 0 && j == i + 1 {
                QmodZ::new(1, ty.divisors()[i / 2] as i64)
            } else {
                QmodZ::ZERO
            }
        })
        .expect("standard form is valid")
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn gram(&self) -> &[Vec<QmodZ>] {
        &self.gram
    }

    pub fn eval(&self, x: &GroupElement, y: &GroupElement) -> QmodZ {
        let mut acc = QmodZ::ZERO;
        for (i, &a) in x.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coords.iter().enumerate() {
                if b == 0 || self.gram[i][j].is_zero() {
                    continue;
                }
                acc += self.gram[i][j].scale((a * b) as i64);
            }
        }
        acc
    }

    /// `{x : [x, y] = 0 for all y}`.
    pub fn radical(&self) -> Subgroup {
        let basis = self.base.basis();
        Subgroup::from_predicate(&self.base, |x| basis.iter().all(|e| self.eval(x, e).is_zero()))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_trivial()
    }

    /// `{z : [h, z] = 0 for all h ∈ H}`.
    pub fn orthogonal(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_predicate(&self.base, |z| h.gens.iter().all(|g| self.eval(g, z).is_zero()))
    }

    pub fn is_isotropic(&self, h: &Subgroup) -> bool {
        h.gens
            .iter()
            .all(|a| h.gens.iter().all(|b| self.eval(a, b).is_zero()))
    }

    /// The form induced on a quotient `S/T`, where `T` pairs trivially with `S`.
    pub fn induced_on(&self, q: &Quotient) -> Result<SkewForm> {
        let lifts = &q.lifts;
        SkewForm::from_upper(q.group.clone(), |i, j| self.eval(&lifts[i], &lifts[j]))
    }

    /// Pulls the form back along a homomorphism given by the images of the
    /// standard generators of `domain`.
    pub fn pullback(&self, domain: FinAbGroup, images: &[GroupElement]) -> Result<SkewForm> {
        SkewForm::from_upper(domain, |i, j| self.eval(&images[i], &images[j]))
    }
}

/// A splitting `K = K₁ ⊕ K₂` into isotropic halves with
/// `[x_i, y_j] = δ_ij / d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticDecomposition {
    pub form: SkewForm,
    pub k1_gens: Vec<GroupElement>,
    pub k2_gens: Vec<GroupElement>,
    /// Ascending divisor chain `d₁ | d₂ | …`.
    pub ty: Vec<u64>,
}

impl SymplecticDecomposition {
    /// The decomposition whose form is the standard pairing in the basis
    /// `x_i, y_i`; the basis must present `K` as `⊕ (ℤ/d_i)²`.
    pub fn from_basis(
        base: &FinAbGroup,
        k1_gens: Vec<GroupElement>,
        k2_gens: Vec<GroupElement>,
    ) -> Result<Self> {
        if k1_gens.len() != k2_gens.len() {
            return Err(ThetaError::InvalidArgument(
                "k1 and k2 need the same number of generators".into(),
            ));
        }
        let mut ty = Vec::new();
        for (x, y) in k1_gens.iter().zip(&k2_gens) {
            let d = base.element_order(x)?;
            if base.element_order(y)? != d {
                return Err(ThetaError::InvalidArgument(format!(
                    "paired generators {x} and {y} have different orders"
                )));
            }
            ty.push(d);
        }
        let ty_group = FinAbGroup::new(ty.clone())?;
        let half: u64 = ty.iter().product();
        if half * half != base.order() {
            return Err(ThetaError::InvalidArgument(format!(
                "generators span at most {} of {} elements",
                half * half,
                base.order()
            )));
        }
        // coordinates of the standard generators in the new basis
        let mut coords_of = vec![None; base.rank()];
        for a in ty_group.elements() {
            let xa = a.coords.iter().zip(&k1_gens).fold(base.zero(), |acc, (&c, g)| {
                base.add(&acc, &base.scale(g, c as i64))
            });
            for b in ty_group.elements() {
                let u = b.coords.iter().zip(&k2_gens).fold(xa.clone(), |acc, (&c, g)| {
                    base.add(&acc, &base.scale(g, c as i64))
                });
                if let Some(k) = basis_position(&u) {
                    coords_of[k] = Some((a.clone(), b.clone()));
                }
            }
        }
        let coords_of = coords_of
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ThetaError::InvalidArgument("generators do not span the group".into()))?;
        let pair = |u: &(GroupElement, GroupElement), v: &(GroupElement, GroupElement)| {
            ty_group.dual_character(&v.1, &u.0) - ty_group.dual_character(&u.1, &v.0)
        };
        let form = SkewForm::from_upper(base.clone(), |i, j| pair(&coords_of[i], &coords_of[j]))?;
        let dec = SymplecticDecomposition {
            form,
            k1_gens,
            k2_gens,
            ty,
        };
        dec.verify()?;
        Ok(dec)
    }

    pub fn type_group(&self) -> FinAbGroup {
        FinAbGroup::new(self.ty.clone()).expect("type is a divisor chain")
    }

    /// Coordinates `(a, b)` with `u = Σ a_i x_i + Σ b_i y_i`, read off from
    /// the form itself.
    pub fn coords(&self, u: &GroupElement) -> (GroupElement, GroupElement) {
        let a = self
            .ty
            .iter()
            .zip(&self.k2_gens)
            .map(|(&d, y)| self.coord_of(self.form.eval(u, y), d))
            .collect();
        let b = self
            .ty
            .iter()
            .zip(&self.k1_gens)
            .map(|(&d, x)| self.coord_of(-self.form.eval(u, x), d))
            .collect();
        (GroupElement::new(a), GroupElement::new(b))
    }

    fn coord_of(&self, q: QmodZ, d: u64) -> u64 {
        // q is a multiple of 1/d
        let k = q.exponent_at(d).expect("pairing value of order dividing d");
        k % d
    }

    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let k = self.form.base();
        let mut acc = k.zero();
        for (x, &c) in self.k1_gens.iter().zip(&a.coords) {
            acc = k.add(&acc, &k.scale(x, c as i64));
        }
        for (y, &c) in self.k2_gens.iter().zip(&b.coords) {
            acc = k.add(&acc, &k.scale(y, c as i64));
        }
        acc
    }

    pub fn k1(&self) -> Subgroup {
        Subgroup::generated_by(self.form.base(), self.k1_gens.clone()).expect("valid generators")
    }

    pub fn k2(&self) -> Subgroup {
        Subgroup::generated_by(self.form.base(), self.k2_gens.clone()).expect("valid generators")
    }

    /// `⟨x₁, y₂⟩` for the K₁-part of `u` and K₂-part of `v`.
    pub fn standard_pairing(&self, u: &GroupElement, v: &GroupElement) -> QmodZ {
        let (a, _) = self.coords(u);
        let (_, b) = self.coords(v);
        self.type_group().dual_character(&b, &a)
    }

    /// Checks every structural invariant exhaustively.
    pub fn verify(&self) -> Result<()> {
        let k = self.form.base();
        let fail = |m: String| Err(ThetaError::ContractViolation(m));
        if self.ty.windows(2).any(|w| w[1] % w[0] != 0) {
            return fail(format!("type {:?} is not a chain", self.ty));
        }
        for (i, &d) in self.ty.iter().enumerate() {
            if k.element_order(&self.k1_gens[i])? != d || k.element_order(&self.k2_gens[i])? != d {
                return fail(format!("generator pair {i} does not have order {d}"));
            }
            for (j, &dj) in self.ty.iter().enumerate() {
                let want = if i == j { QmodZ::new(1, d as i64) } else { QmodZ::ZERO };
                let got = self.form.eval(&self.k1_gens[i], &self.k2_gens[j]);
                if got != want {
                    return fail(format!("<x{i}, y{j}> = {got}, expected {want}"));
                }
                if !self.form.eval(&self.k1_gens[i], &self.k1_gens[j]).is_zero()
                    || !self.form.eval(&self.k2_gens[i], &self.k2_gens[j]).is_zero()
                {
                    return fail(format!("halves not isotropic at ({i}, {j}) (d = {dj})"));
                }
            }
        }
        let half: u64 = self.ty.iter().product();
        if half * half != k.order() {
            return fail(format!("|K| = {} ≠ {half}²", k.order()));
        }
        for u in k.elements() {
            let (a, b) = self.coords(&u);
            if self.compose(&a, &b) != u {
                return fail(format!("{u} is not recovered from its coordinates"));
            }
        }
        Ok(())
    }
}

/// Symplectic basis by the largest-divisor-first induction: pick `x` of
/// maximal order `d`, a partner `y` with `[x, y]` of exact order `d`
/// (rescaled to `1/d`), then recurse on `⟨x, y⟩^⊥`.
pub fn symplectic_decompose(form: &SkewForm) -> Result<SymplecticDecomposition> {
    let radical = form.radical();
    if !radical.is_trivial() {
        return Err(ThetaError::DegenerateForm {
            radical: radical.elements,
        });
    }
    let k = form.base();
    // scan with the first coordinate varying fastest, so the standard
    // hyperbolic form returns its own basis
    let mut current: Vec<GroupElement> = k.elements().collect();
    current.sort_by(|a, b| a.coords.iter().rev().cmp(b.coords.iter().rev()));
    let mut pairs: Vec<(GroupElement, GroupElement, u64)> = Vec::new();

    while current.len() > 1 {
        let d = current
            .iter()
            .map(|g| k.element_order(g).expect("valid element"))
            .max()
            .expect("nonempty");
        let x = current
            .iter()
            .find(|g| k.element_order(g).expect("valid element") == d)
            .expect("element of maximal order")
            .clone();
        let (y, value) = current
            .iter()
            .find_map(|y| {
                let v = form.eval(&x, y);
                (v.order() == d && k.element_order(y).ok() == Some(d)).then(|| (y.clone(), v))
            })
            .ok_or_else(|| {
                ThetaError::ContractViolation(format!("no symplectic partner for {x}"))
            })?;
        // value = a/d with gcd(a, d) = 1; rescale y by a^{-1} mod d
        let a = value.exponent_at(d).expect("order d") as i64;
        let inv = mod_inverse(a, d as i64).expect("unit");
        let y = k.scale(&y, inv);
        debug_assert_eq!(form.eval(&x, &y), QmodZ::new(1, d as i64));

        current.retain(|z| form.eval(&x, z).is_zero() && form.eval(&y, z).is_zero());
        pairs.push((x, y, d));
    }

    pairs.reverse();
    let dec = SymplecticDecomposition {
        form: form.clone(),
        ty: pairs.iter().map(|p| p.2).collect(),
        k1_gens: pairs.iter().map(|p| p.0.clone()).collect(),
        k2_gens: pairs.iter().map(|p| p.1.clone()).collect(),
    };
    Ok(dec)
}

/// Decomposes the form induced on `K/K₀`, returning the quotient as well.
pub fn symplectic_decompose_mod_radical(
    form: &SkewForm,
) -> Result<(Quotient, SymplecticDecomposition)> {
    let radical = form.radical();
    let q = Quotient::new(form.base(), &form.base().basis(), &radical.gens);
    let induced = form.induced_on(&q)?;
    let dec = symplectic_decompose(&induced)?;
    Ok((q, dec))
}

/// The isotropic half `K₁` of a symplectic decomposition.
pub fn maximal_isotropic(form: &SkewForm) -> Result<Subgroup> {
    Ok(symplectic_decompose(form)?.k1())
}

// index k if u is the k-th standard generator
fn basis_position(u: &GroupElement) -> Option<usize> {
    let mut nz = u.coords.iter().enumerate().filter(|(_, &c)| c != 0);
    match (nz.next(), nz.next()) {
        (Some((k, 1)), None) => Some(k),
        _ => None,
    }
}

pub(crate) fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let e = num_integer::Integer::extended_gcd(&a.rem_euclid(m), &m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// JSON form `{"divisors": [...], "gram": [["0", "1/2"], ...]}`; only the
/// strict upper triangle is authoritative, the rest must agree with it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormJson {
    pub divisors: Vec<u64>,
    pub gram: Vec<Vec<String>>,
}

impl FormJson {
    pub fn from_form(form: &SkewForm) -> Self {
        FormJson {
            divisors: form.base().divisors().to_vec(),
            gram: form
                .gram()
                .iter()
                .map(|r| r.iter().map(|q| q.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_form(&self) -> Result<SkewForm> {
        let base = FinAbGroup::new(self.divisors.clone())?;
        let p = base.rank();
        if self.gram.len() != p || self.gram.iter().any(|r| r.len() != p) {
            return Err(ThetaError::Parse(format!("gram must be {p}x{p}")));
        }
        let parsed = self
            .gram
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<QmodZ>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let form = SkewForm::from_upper(base, |i, j| parsed[i][j])?;
        if form.gram() != parsed.as_slice() {
            return Err(ThetaError::InvalidForm(
                "gram is not the alternating completion of its upper triangle".into(),
            ));
        }
        Ok(form)
    }
}
