//! Central extensions `0 → ℚ/ℤ → G → K → 0` presented by normalized
//! 2-cocycles, with level subgroups, normal forms and descent.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abelian::{FinAbGroup, GroupElement, Quotient, Subgroup};
use crate::error::{Result, ThetaError};
use crate::roots::QmodZ;
use crate::skew::{symplectic_decompose, SkewForm, SymplecticDecomposition};

/// Largest base group stored as a full table.
pub const TABLE_CAP: u64 = 1024;
/// Largest base group on which the cocycle identity is checked exhaustively.
pub const IDENTITY_CHECK_CAP: u64 = 256;

/// A 1-cochain `K → ℚ/ℤ`, indexed by `FinAbGroup::index_of`.
pub type Cochain = Vec<QmodZ>;

#[derive(Clone, Debug)]
enum Repr {
    Table(Arc<Vec<QmodZ>>),
    /// `⟨x₁, y₂⟩` on the interleaved square of the type.
    Standard(FinAbGroup),
    /// `⟨a(u), b(v)⟩` in the coordinates of a decomposition.
    Heisenberg(Box<SymplecticDecomposition>),
}

/// A normalized 2-cocycle `f: K × K → ℚ/ℤ`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    base: FinAbGroup,
    repr: Repr,
}

impl Cocycle {
    pub fn trivial(base: FinAbGroup) -> Self {
        let n = base.order() as usize;
        Cocycle {
            base,
            repr: Repr::Table(Arc::new(vec![QmodZ::ZERO; n * n])),
        }
    }

    /// The standard Heisenberg cocycle of a type, on `⊕ (ℤ/d_i)²` with
    /// coordinates `(x₁, y₁, x₂, y₂, …)`.
    pub fn standard(ty: &FinAbGroup) -> Self {
        Cocycle {
            base: ty.interleave_square(),
            repr: Repr::Standard(ty.clone()),
        }
    }

    pub fn heisenberg(dec: &SymplecticDecomposition) -> Self {
        Cocycle {
            base: dec.form.base().clone(),
            repr: Repr::Heisenberg(Box::new(dec.clone())),
        }
    }

    /// Tabulates `f`, checking normalization and (on small groups) the
    /// cocycle identity.
    pub fn from_fn(base: FinAbGroup, f: impl Fn(&GroupElement, &GroupElement) -> QmodZ) -> Result<Self> {
        let n = base.order();
        if n > TABLE_CAP {
            return Err(ThetaError::SizeExceeded {
                what: "cocycle table base order".into(),
                size: n,
                cap: TABLE_CAP,
            });
        }
        let elems: Vec<GroupElement> = base.elements().collect();
        let mut table = Vec::with_capacity((n * n) as usize);
        for x in &elems {
            for y in &elems {
                table.push(f(x, y));
            }
        }
        let c = Cocycle {
            base,
            repr: Repr::Table(Arc::new(table)),
        };
        c.check_normalized()?;
        if n <= IDENTITY_CHECK_CAP {
            c.check_identity()?;
        }
        Ok(c)
    }

    /// Rows and columns in the enumeration order of `base.elements()`.
    pub fn from_table(base: FinAbGroup, table: Vec<Vec<QmodZ>>) -> Result<Self> {
        let n = base.order() as usize;
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(ThetaError::InvalidCocycle(format!("table must be {n}x{n}")));
        }
        let b = base.clone();
        Cocycle::from_fn(base, |x, y| table[b.index_of(x)][b.index_of(y)])
    }

    /// `δc(x, y) = c(x) + c(y) − c(x + y)`.
    pub fn coboundary(base: FinAbGroup, c: &[QmodZ]) -> Result<Self> {
        if c.len() as u64 != base.order() {
            return Err(ThetaError::InvalidArgument("cochain length ≠ |K|".into()));
        }
        if !c[0].is_zero() {
            return Err(ThetaError::InvalidArgument("cochain must vanish at 0".into()));
        }
        let b = base.clone();
        Cocycle::from_fn(base, |x, y| {
            c[b.index_of(x)] + c[b.index_of(y)] - c[b.index_of(&b.add(x, y))]
        })
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn eval(&self, x: &GroupElement, y: &GroupElement) -> QmodZ {
        match &self.repr {
            Repr::Table(t) => {
                let n = self.base.order() as usize;
                t[self.base.index_of(x) * n + self.base.index_of(y)]
            }
            Repr::Standard(ty) => {
                let mut acc = QmodZ::ZERO;
                for (i, &d) in ty.divisors().iter().enumerate() {
                    let p = x.coords[2 * i] * y.coords[2 * i + 1];
                    if p != 0 {
                        acc += QmodZ::new(p as i64, d as i64);
                    }
                }
                acc
            }
            Repr::Heisenberg(dec) => {
                let (a, _) = dec.coords(x);
                let (_, b) = dec.coords(y);
                dec.type_group().dual_character(&b, &a)
            }
        }
    }

    /// `f(x, y) − f(y, x)`, the commutator of lifts of `x` and `y`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> QmodZ {
        self.eval(x, y) - self.eval(y, x)
    }

    pub fn is_symmetric(&self) -> bool {
        let basis = self.base.basis();
        basis
            .iter()
            .all(|x| basis.iter().all(|y| self.commutator(x, y).is_zero()))
    }

    pub fn check_normalized(&self) -> Result<()> {
        let zero = self.base.zero();
        for x in self.base.elements() {
            if !self.eval(&zero, &x).is_zero() || !self.eval(&x, &zero).is_zero() {
                return Err(ThetaError::InvalidCocycle(format!("not normalized at {x}")));
            }
        }
        Ok(())
    }

    /// `f(x,y) + f(x+y,z) = f(y,z) + f(x,y+z)` for all triples.
    pub fn check_identity(&self) -> Result<()> {
        let elems: Vec<GroupElement> = self.base.elements().collect();
        let n = elems.len();
        let sum: Vec<usize> = elems
            .iter()
            .flat_map(|x| elems.iter().map(|y| self.base.index_of(&self.base.add(x, y))))
            .collect();
        let table: Vec<QmodZ> = match &self.repr {
            Repr::Table(t) => t.to_vec(),
            _ => self.to_table().into_iter().flatten().collect(),
        };
        // residues over a common denominator, so the triple loop is integer
        // addition
        let l = table
            .iter()
            .try_fold(1i64, |l, q| {
                let m = num_integer::lcm(l, q.den());
                (m <= 1 << 40).then_some(m)
            })
            .ok_or_else(|| ThetaError::SizeExceeded {
                what: "cocycle value denominators".into(),
                size: u64::MAX,
                cap: 1 << 40,
            })?;
        let r: Vec<i64> = table.iter().map(|q| q.num() * (l / q.den())).collect();
        let fail = |x: usize, y: usize, z: usize| {
            Err(ThetaError::InvalidCocycle(format!(
                "identity fails at ({}, {}, {})",
                elems[x], elems[y], elems[z]
            )))
        };
        for x in 0..n {
            for y in 0..n {
                let fxy = r[x * n + y];
                let row_xy = sum[x * n + y] * n;
                for z in 0..n {
                    let lhs = fxy + r[row_xy + z];
                    let rhs = r[y * n + z] + r[x * n + sum[y * n + z]];
                    if (lhs - rhs) % l != 0 {
                        return fail(x, y, z);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_table(&self) -> Vec<Vec<QmodZ>> {
        let elems: Vec<GroupElement> = self.base.elements().collect();
        elems
            .iter()
            .map(|x| elems.iter().map(|y| self.eval(x, y)).collect())
            .collect()
    }

    fn same_base(&self, other: &Cocycle) -> Result<()> {
        if self.base != other.base {
            return Err(ThetaError::InvalidArgument(format!(
                "cocycles over different groups {} and {}",
                self.base, other.base
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cocycle) -> Result<Cocycle> {
        self.same_base(other)?;
        Cocycle::from_fn(self.base.clone(), |x, y| self.eval(x, y) + other.eval(x, y))
    }

    pub fn sub(&self, other: &Cocycle) -> Result<Cocycle> {
        self.same_base(other)?;
        Cocycle::from_fn(self.base.clone(), |x, y| self.eval(x, y) - other.eval(x, y))
    }

    /// `f + δc`.
    pub fn twisted(&self, c: &[QmodZ]) -> Result<Cocycle> {
        self.add(&Cocycle::coboundary(self.base.clone(), c)?)
    }

    /// Pointwise equality on all pairs.
    pub fn same_values(&self, other: &Cocycle) -> bool {
        self.base == other.base
            && self.base.elements().all(|x| {
                self.base
                    .elements()
                    .all(|y| self.eval(&x, &y) == other.eval(&x, &y))
            })
    }
}

/// An element `(α, x)` of a theta group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaElement {
    pub alpha: QmodZ,
    pub x: GroupElement,
}

impl fmt::Display for ThetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.x)
    }
}

/// The extension defined by a cocycle, with product
/// `(α, x)(β, y) = (α + β + f(x, y), x + y)`.
#[derive(Clone, Debug)]
pub struct ThetaGroup {
    cocycle: Cocycle,
}

impl ThetaGroup {
    pub fn new(cocycle: Cocycle) -> Self {
        ThetaGroup { cocycle }
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn base(&self) -> &FinAbGroup {
        self.cocycle.base()
    }

    pub fn identity(&self) -> ThetaElement {
        self.scalar(QmodZ::ZERO)
    }

    pub fn scalar(&self, alpha: QmodZ) -> ThetaElement {
        ThetaElement {
            alpha,
            x: self.base().zero(),
        }
    }

    /// `(0, x)`.
    pub fn lift(&self, x: &GroupElement) -> ThetaElement {
        ThetaElement {
            alpha: QmodZ::ZERO,
            x: x.clone(),
        }
    }

    pub fn mul(&self, a: &ThetaElement, b: &ThetaElement) -> ThetaElement {
        ThetaElement {
            alpha: a.alpha + b.alpha + self.cocycle.eval(&a.x, &b.x),
            x: self.base().add(&a.x, &b.x),
        }
    }

    pub fn inv(&self, a: &ThetaElement) -> ThetaElement {
        let neg = self.base().neg(&a.x);
        ThetaElement {
            alpha: -a.alpha - self.cocycle.eval(&a.x, &neg),
            x: neg,
        }
    }

    pub fn pow(&self, a: &ThetaElement, n: i64) -> ThetaElement {
        let step = if n < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &step);
        }
        acc
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, a: &ThetaElement, b: &ThetaElement) -> ThetaElement {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&ab, &self.inv(&ba))
    }

    /// The form `[x, y]` read off from commutators of lifts.
    pub fn commutator_form(&self) -> Result<SkewForm> {
        let basis = self.base().basis();
        let gram = basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| self.commutator(&self.lift(x), &self.lift(y)).alpha)
                    .collect()
            })
            .collect();
        SkewForm::new(self.base().clone(), gram)
    }
}

/// The Heisenberg group of a symplectic decomposition.
pub fn standard_heisenberg(dec: &SymplecticDecomposition) -> ThetaGroup {
    ThetaGroup::new(Cocycle::heisenberg(dec))
}

/// The Heisenberg group `μ_∞ × K₁ × K₂` of a type, in interleaved coordinates.
pub fn standard_heisenberg_of_type(ty: &FinAbGroup) -> ThetaGroup {
    ThetaGroup::new(Cocycle::standard(ty))
}

/// A homomorphic section `K′ → G` over a subgroup of the base.
#[derive(Clone, Debug)]
pub struct LevelSubgroup {
    pub subgroup: Subgroup,
    /// Scalar parts `s(k)` aligned with `subgroup.elements`.
    scalars: Vec<QmodZ>,
    /// Cyclic decomposition `K′ = ⊕⟨g_i⟩` and the chosen lifts `z_i` of `g_i`.
    pub cyclic_type: FinAbGroup,
    pub cyclic_gens: Vec<GroupElement>,
    pub lifts: Vec<ThetaElement>,
}

impl LevelSubgroup {
    pub fn section(&self, k: &GroupElement) -> Option<ThetaElement> {
        let i = self.subgroup.elements.binary_search(k).ok()?;
        Some(ThetaElement {
            alpha: self.scalars[i],
            x: k.clone(),
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = ThetaElement> + '_ {
        self.subgroup
            .elements
            .iter()
            .zip(&self.scalars)
            .map(|(x, &alpha)| ThetaElement { alpha, x: x.clone() })
    }

    pub fn contains(&self, g: &ThetaElement) -> bool {
        self.section(&g.x).is_some_and(|s| s == *g)
    }

    /// Checks that the section lies over `K′` and is multiplicative.
    pub fn validate(&self, g: &ThetaGroup) -> Result<()> {
        if self.subgroup.ambient != *g.base() || self.scalars.len() != self.subgroup.elements.len() {
            return Err(ThetaError::ContractViolation(
                "level subgroup does not match the group".into(),
            ));
        }
        for a in self.elements() {
            for b in self.elements() {
                let ab = g.mul(&a, &b);
                if !self.contains(&ab) {
                    return Err(ThetaError::ContractViolation(format!(
                        "section is not multiplicative at {} · {}",
                        a.x, b.x
                    )));
                }
            }
        }
        Ok(())
    }

    /// `s(k) − s'(k)` for two sections over the same subgroup.
    pub fn difference(&self, other: &LevelSubgroup) -> Option<Vec<QmodZ>> {
        (self.subgroup.elements == other.subgroup.elements).then(|| {
            self.scalars
                .iter()
                .zip(&other.scalars)
                .map(|(&a, &b)| a - b)
                .collect()
        })
    }
}

/// Lifts an isotropic subgroup to a level subgroup: for each cyclic
/// generator `g_i` of order `m_i`, with `(0, g_i)^{m_i} = (β_i, 0)`, set
/// `z_i = (−β_i/m_i, g_i)`.
pub fn lift_level_subgroup(g: &ThetaGroup, k: &Subgroup) -> Result<LevelSubgroup> {
    lift_level_subgroup_shifted(g, k, &[])
}

/// As [`lift_level_subgroup`], replacing `z_i` by `(j_i/m_i) · z_i` for the
/// given shifts `j_i` (missing shifts are zero).
pub fn lift_level_subgroup_shifted(g: &ThetaGroup, k: &Subgroup, shifts: &[i64]) -> Result<LevelSubgroup> {
    if k.ambient != *g.base() {
        return Err(ThetaError::InvalidArgument(
            "subgroup lives in a different group".into(),
        ));
    }
    let cocycle = g.cocycle();
    for (i, a) in k.gens.iter().enumerate() {
        for b in &k.gens[i + 1..] {
            let v = cocycle.commutator(a, b);
            if !v.is_zero() {
                return Err(ThetaError::NotIsotropic {
                    x: a.clone(),
                    y: b.clone(),
                    value: v.to_string(),
                });
            }
        }
    }

    let (cyclic_type, cyclic_gens) = k.cyclic_decomposition();
    let mut lifts = Vec::with_capacity(cyclic_gens.len());
    for (i, (gi, &m)) in cyclic_gens.iter().zip(cyclic_type.divisors()).enumerate() {
        let h = g.lift(gi);
        let beta = g.pow(&h, m as i64);
        debug_assert!(beta.x.is_zero());
        let shift = QmodZ::new(shifts.get(i).copied().unwrap_or(0), m as i64);
        let alpha = (-beta.alpha).nth_root(m as i64)? + shift;
        lifts.push(ThetaElement {
            alpha,
            x: gi.clone(),
        });
    }

    let mut scalars = vec![QmodZ::ZERO; k.elements.len()];
    for c in cyclic_type.elements() {
        let mut s = g.identity();
        for (z, &e) in lifts.iter().zip(&c.coords) {
            s = g.mul(&s, &g.pow(z, e as i64));
        }
        let idx = k
            .elements
            .binary_search(&s.x)
            .map_err(|_| ThetaError::ContractViolation(format!("{} not in subgroup", s.x)))?;
        scalars[idx] = s.alpha;
    }

    let level = LevelSubgroup {
        subgroup: k.clone(),
        scalars,
        cyclic_type,
        cyclic_gens,
        lifts,
    };
    level.validate(g)?;
    Ok(level)
}

/// An equivalence of a theta group with the Heisenberg group of its
/// commutator form.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub decomposition: SymplecticDecomposition,
    /// `c` with `f = f_std + δc`.
    pub cochain: Cochain,
    /// Scalar parts of `σ(u) = σ₂(u₂) · σ₁(u₁)`.
    pub sigma: Vec<QmodZ>,
}

impl NormalForm {
    /// `[u, v]_σ` with `σ(u) σ(v) = [u, v]_σ · σ(u + v)`.
    pub fn factor_set(&self, g: &ThetaGroup, u: &GroupElement, v: &GroupElement) -> QmodZ {
        let k = g.base();
        self.sigma[k.index_of(u)] + self.sigma[k.index_of(v)] + g.cocycle().eval(u, v)
            - self.sigma[k.index_of(&k.add(u, v))]
    }
}

pub fn normal_form(g: &ThetaGroup) -> Result<NormalForm> {
    let form = g.commutator_form()?;
    let dec = symplectic_decompose(&form)?;
    let s1 = lift_level_subgroup(g, &dec.k1())?;
    let s2 = lift_level_subgroup(g, &dec.k2())?;
    let k = g.base();
    let zeros = dec.type_group().zero();

    let mut sigma = vec![QmodZ::ZERO; k.order() as usize];
    for u in k.elements() {
        let (a, b) = dec.coords(&u);
        let u1 = dec.compose(&a, &zeros);
        let u2 = dec.compose(&zeros, &b);
        let s = g.mul(
            &s2.section(&u2).expect("K₂ component"),
            &s1.section(&u1).expect("K₁ component"),
        );
        debug_assert_eq!(s.x, u);
        sigma[k.index_of(&u)] = s.alpha;
    }
    let cochain: Cochain = sigma.iter().map(|&s| -s).collect();

    let std = Cocycle::heisenberg(&dec);
    for u in k.elements() {
        for v in k.elements() {
            let lhs = g.cocycle().eval(&u, &v) - std.eval(&u, &v);
            let rhs = cochain[k.index_of(&u)] + cochain[k.index_of(&v)]
                - cochain[k.index_of(&k.add(&u, &v))];
            if lhs != rhs {
                return Err(ThetaError::ContractViolation(format!(
                    "normal form cochain fails at ({u}, {v})"
                )));
            }
        }
    }
    Ok(NormalForm {
        decomposition: dec,
        cochain,
        sigma,
    })
}

/// A cochain `c` with `f − g = δc`, if one exists.
///
/// `f − g` is a coboundary exactly when it is symmetric (`ℚ/ℤ` is divisible);
/// the witness comes from lifting all of `K` in the extension defined by
/// `f − g`.
pub fn equivalence_witness(f: &Cocycle, g: &Cocycle) -> Result<Option<Cochain>> {
    let h = f.sub(g)?;
    if !h.is_symmetric() {
        return Ok(None);
    }
    let k = h.base().clone();
    let group = ThetaGroup::new(h.clone());
    let level = lift_level_subgroup(&group, &Subgroup::whole(&k))?;
    let mut c = vec![QmodZ::ZERO; k.order() as usize];
    for s in level.elements() {
        c[k.index_of(&s.x)] = -s.alpha;
    }
    if !Cocycle::coboundary(k, &c)?.same_values(&h) {
        return Err(ThetaError::ContractViolation(
            "symmetric difference did not split".into(),
        ));
    }
    Ok(Some(c))
}

pub fn extensions_equivalent(f: &Cocycle, g: &Cocycle) -> Result<bool> {
    Ok(equivalence_witness(f, g)?.is_some())
}

/// The quotient `C(𝒦)/𝒦` of the centralizer of a level subgroup.
#[derive(Clone, Debug)]
pub struct Descent {
    pub group: ThetaGroup,
    /// `K′^⊥ / K′`, with lifts into the original base.
    pub quotient: Quotient,
    /// Image of the centralizer in the base, i.e. `K′^⊥`.
    pub centralizer: Subgroup,
}

pub fn descend(g: &ThetaGroup, level: &LevelSubgroup) -> Result<Descent> {
    level.validate(g)?;
    let k = g.base();
    let kp = &level.subgroup;
    let level_gens: Vec<ThetaElement> = kp
        .gens
        .iter()
        .map(|x| level.section(x).expect("generator in subgroup"))
        .collect();

    // by definition: elements commuting with every element of 𝒦 (scalars
    // are central, so test the lift (0, x))
    let centralizer = Subgroup::from_predicate(k, |x| {
        let h = g.lift(x);
        level_gens.iter().all(|z| g.mul(&h, z) == g.mul(z, &h))
    });
    let normalizer = Subgroup::from_predicate(k, |x| {
        let h = g.lift(x);
        let hi = g.inv(&h);
        level
            .elements()
            .all(|z| level.contains(&g.mul(&g.mul(&h, &z), &hi)))
    });
    if centralizer.elements != normalizer.elements {
        return Err(ThetaError::ContractViolation(
            "centralizer and normalizer of the level subgroup differ".into(),
        ));
    }
    let form = g.commutator_form()?;
    if form.orthogonal(kp).elements != centralizer.elements {
        return Err(ThetaError::ContractViolation(
            "centralizer is not the orthogonal of K′".into(),
        ));
    }
    if !kp.elements.iter().all(|x| centralizer.contains(x)) {
        return Err(ThetaError::ContractViolation("K′ is not isotropic".into()));
    }

    let quotient = Quotient::new(k, &centralizer.gens, &kp.gens);
    let q = quotient.group.clone();
    let f = g.cocycle();
    let cocycle = Cocycle::from_fn(q.clone(), |q1, q2| {
        let t1 = quotient.lift(q1);
        let t2 = quotient.lift(q2);
        let t12 = quotient.lift(&q.add(q1, q2));
        let kk = k.sub(&k.add(&t1, &t2), &t12);
        let s = level.section(&kk).expect("lift difference lies in K′");
        f.eval(&t1, &t2) - s.alpha - f.eval(&t12, &kk)
    })?;
    Ok(Descent {
        group: ThetaGroup::new(cocycle),
        quotient,
        centralizer,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StandardJson {
    pub k1: Vec<Vec<u64>>,
    pub k2: Vec<Vec<u64>>,
}

/// `{"divisors": [...], "table": [[...]]}` or
/// `{"divisors": [...], "standard": {"k1": [...], "k2": [...]}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleJson {
    pub divisors: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard: Option<StandardJson>,
}

impl CocycleJson {
    pub fn from_cocycle(c: &Cocycle) -> Self {
        let divisors = c.base().divisors().to_vec();
        let coords = |v: &[GroupElement]| v.iter().map(|g| g.coords.clone()).collect();
        match &c.repr {
            Repr::Table(_) => CocycleJson {
                divisors,
                table: Some(
                    c.to_table()
                        .iter()
                        .map(|r| r.iter().map(|q| q.to_string()).collect())
                        .collect(),
                ),
                standard: None,
            },
            Repr::Standard(ty) => {
                let b = c.base().basis();
                let p = ty.rank();
                CocycleJson {
                    divisors,
                    table: None,
                    standard: Some(StandardJson {
                        k1: (0..p).map(|i| b[2 * i].coords.clone()).collect(),
                        k2: (0..p).map(|i| b[2 * i + 1].coords.clone()).collect(),
                    }),
                }
            }
            Repr::Heisenberg(dec) => CocycleJson {
                divisors,
                table: None,
                standard: Some(StandardJson {
                    k1: coords(&dec.k1_gens),
                    k2: coords(&dec.k2_gens),
                }),
            },
        }
    }

    pub fn to_cocycle(&self) -> Result<Cocycle> {
        let base = FinAbGroup::new(self.divisors.clone())?;
        match (&self.table, &self.standard) {
            (Some(t), None) => {
                let parsed = t
                    .iter()
                    .map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<QmodZ>>>())
                    .collect::<Result<Vec<_>>>()?;
                Cocycle::from_table(base, parsed)
            }
            (None, Some(s)) => {
                let els = |v: &[Vec<u64>]| {
                    v.iter()
                        .map(|c| base.element(c.clone()))
                        .collect::<Result<Vec<_>>>()
                };
                let dec = SymplecticDecomposition::from_basis(&base, els(&s.k1)?, els(&s.k2)?)?;
                Ok(Cocycle::heisenberg(&dec))
            }
            _ => Err(ThetaError::Parse(
                "cocycle needs exactly one of \"table\" or \"standard\"".into(),
            )),
        }
    }
}
