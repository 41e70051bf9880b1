//! A lattice model of torsion points, supports, the adelic commutator
//! pairing and its dependence on the Néron–Severi class.
//!
//! Points of `V(X)` are compatible systems `x_n = (1/n)v mod ℤ^{2g}` for a
//! rational vector `v`. A class in `NS(X)` is an alternating integer matrix
//! `E`, and the commutator form of `G(n*L)` is `n²E(u, u′) mod ℤ` on
//! `K(n*L) = {u : n²E(u, ℤ^{2g}) ⊆ ℤ}/ℤ^{2g}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{FinAbGroup, GroupElement};
use crate::error::{Result, ThetaError};
use crate::roots::{format_rational, parse_rational, QmodZ};
use crate::skew::{symplectic_decompose, SkewForm};
use crate::snf::smith_normal_form;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

pub(crate) fn to_qmodz(r: &BigRational) -> Result<QmodZ> {
    let r = frac(r);
    let num = r.numer().to_i64();
    let den = r.denom().to_i64();
    match (num, den) {
        (Some(n), Some(d)) => Ok(QmodZ::new(n, d)),
        _ => Err(ThetaError::SizeExceeded {
            what: "denominator".into(),
            size: u64::MAX,
            cap: i64::MAX as u64,
        }),
    }
}

/// The torsion model `tor(X) ⊂ (ℚ/ℤ)^{2g}` with levels restricted to
/// `I = {n ≥ 1 : p ∤ n}` (`p = 0` means no restriction).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionModel {
    pub g: usize,
    pub excluded_prime: u64,
}

impl TorsionModel {
    pub fn new(g: usize, excluded_prime: u64) -> Result<Self> {
        if g == 0 {
            return Err(ThetaError::InvalidArgument("dimension g must be positive".into()));
        }
        if excluded_prime == 1 {
            return Err(ThetaError::InvalidArgument("excluded prime 1 leaves no levels".into()));
        }
        Ok(TorsionModel { g, excluded_prime })
    }

    pub fn in_levels(&self, n: u64) -> bool {
        n >= 1 && (self.excluded_prime == 0 || !n.is_multiple_of(self.excluded_prime))
    }

    pub fn check_level(&self, n: u64) -> Result<()> {
        if self.in_levels(n) {
            Ok(())
        } else {
            Err(ThetaError::ExcludedLevel {
                level: n,
                prime: self.excluded_prime,
            })
        }
    }

    /// The smallest member of `I` that is at least 2.
    fn second_level(&self) -> u64 {
        (2..).find(|&k| self.in_levels(k)).expect("I is infinite")
    }

    pub fn check_point(&self, x: &AdelePoint) -> Result<()> {
        if x.v.len() != 2 * self.g {
            return Err(ThetaError::InvalidArgument(format!(
                "point has {} coordinates, expected {}",
                x.v.len(),
                2 * self.g
            )));
        }
        self.check_level(x.denominator())
    }
}

/// The compatible system `x_n = (1/n)v mod ℤ^{2g}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdelePoint {
    pub v: Vec<BigRational>,
}

impl fmt::Display for AdelePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.v.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl AdelePoint {
    pub fn new(v: Vec<BigRational>) -> Self {
        AdelePoint { v }
    }

    pub fn from_fractions(v: &[(i64, i64)]) -> Self {
        AdelePoint::new(
            v.iter()
                .map(|&(a, b)| BigRational::new(a.into(), b.into()))
                .collect(),
        )
    }

    pub fn parse(v: &[&str]) -> Result<Self> {
        Ok(AdelePoint::new(
            v.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
        ))
    }

    /// `v / n` for the `i`-th standard basis vector.
    pub fn basis(g: usize, i: usize, n: i64) -> Self {
        let mut v = vec![BigRational::zero(); 2 * g];
        v[i] = BigRational::new(1.into(), n.into());
        AdelePoint::new(v)
    }

    /// Lcm of the denominators: the order of `x₁`.
    pub fn denominator(&self) -> u64 {
        self.v
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
            .to_u64()
            .expect("denominator fits in u64")
    }

    /// Membership in `T(X)`, i.e. `x₁ = 0`.
    pub fn is_integral(&self) -> bool {
        self.v.iter().all(|c| c.is_integer())
    }

    /// `x_n`, reduced into `[0, 1)^{2g}`.
    pub fn component(&self, n: u64) -> Vec<BigRational> {
        let n = int(n as i64);
        self.v.iter().map(|c| frac(&(c / &n))).collect()
    }

    /// `(n/m)·x_n = x_m` for `m | n`.
    pub fn is_compatible(&self, n: u64, m: u64) -> bool {
        if !n.is_multiple_of(m) {
            return false;
        }
        let k = int((n / m) as i64);
        let scaled: Vec<BigRational> = self.component(n).iter().map(|c| frac(&(c * &k))).collect();
        scaled == self.component(m)
    }

    pub fn apply(&self, f: &[Vec<i64>]) -> AdelePoint {
        AdelePoint::new(
            f.iter()
                .map(|row| {
                    row.iter()
                        .zip(&self.v)
                        .map(|(&a, c)| c * int(a))
                        .fold(BigRational::zero(), |s, t| s + t)
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &AdelePoint) -> AdelePoint {
        AdelePoint::new(self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> AdelePoint {
        AdelePoint::new(self.v.iter().map(|a| -a).collect())
    }
}

/// An alternating integer matrix on `ℤ^{2g}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSForm {
    model: TorsionModel,
    e: Vec<Vec<i64>>,
}

impl NSForm {
    pub fn new(model: TorsionModel, e: Vec<Vec<i64>>) -> Result<Self> {
        let n = 2 * model.g;
        if e.len() != n || e.iter().any(|r| r.len() != n) {
            return Err(ThetaError::InvalidForm(format!("E must be {n}×{n}")));
        }
        for i in 0..n {
            if e[i][i] != 0 {
                return Err(ThetaError::InvalidForm(format!("E[{i}][{i}] = {} ≠ 0", e[i][i])));
            }
            for j in 0..i {
                if e[i][j] != -e[j][i] {
                    return Err(ThetaError::InvalidForm(format!(
                        "E[{i}][{j}] = {} but E[{j}][{i}] = {}",
                        e[i][j], e[j][i]
                    )));
                }
            }
        }
        Ok(NSForm { model, e })
    }

    /// `E(e_i, e_{g+i}) = 1`, the principal polarization.
    pub fn principal(g: usize) -> Self {
        let mut e = vec![vec![0; 2 * g]; 2 * g];
        for i in 0..g {
            e[i][g + i] = 1;
            e[g + i][i] = -1;
        }
        NSForm::new(TorsionModel::new(g, 0).expect("g ≥ 1"), e).expect("alternating")
    }

    pub fn zero(model: TorsionModel) -> Self {
        NSForm::new(model, vec![vec![0; 2 * model.g]; 2 * model.g]).expect("alternating")
    }

    pub fn model(&self) -> &TorsionModel {
        &self.model
    }

    pub fn g(&self) -> usize {
        self.model.g
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.e
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> NSForm {
        let e = self.e.iter().map(|r| r.iter().map(|&c| c * k).collect()).collect();
        NSForm::new(self.model, e).expect("alternating")
    }

    pub fn add(&self, other: &NSForm) -> Result<NSForm> {
        if self.model != other.model {
            return Err(ThetaError::InvalidArgument("forms on different models".into()));
        }
        let e = self
            .e
            .iter()
            .zip(&other.e)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        NSForm::new(self.model, e)
    }

    /// `E(v, w) = vᵀ E w ∈ ℚ`.
    pub fn eval(&self, v: &[BigRational], w: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, row) in self.e.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            for (j, &c) in row.iter().enumerate() {
                if c != 0 && !w[j].is_zero() {
                    acc += &v[i] * &w[j] * int(c);
                }
            }
        }
        acc
    }

    /// `E·v`.
    fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.e
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(&c, x)| c != 0 && !x.is_zero())
                    .map(|(&c, x)| x * int(c))
                    .fold(BigRational::zero(), |s, t| s + t)
            })
            .collect()
    }

    pub fn determinant(&self) -> BigInt {
        let mut m: Vec<Vec<BigRational>> = self
            .e
            .iter()
            .map(|r| r.iter().map(|&c| int(c)).collect())
            .collect();
        let n = m.len();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let pivot = m[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                let f = &m[r][c] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
        det.to_integer()
    }
}

/// `x_n ∈ K(n*L)`, i.e. `n²E(x_n, ℤ^{2g}) ⊆ ℤ`, i.e. `n·Ev ∈ ℤ^{2g}`.
pub fn in_supp(e: &NSForm, x: &AdelePoint, n: u64) -> bool {
    e.model.in_levels(n) && supp_modulus(e, x).is_some_and(|m| n.is_multiple_of(m))
}

/// The least `m` with `m·Ev ∈ ℤ^{2g}`; outside `I`, `supp(x)` is exactly
/// the multiples of `m`. `None` when `m` exceeds `u64`.
pub fn supp_modulus(e: &NSForm, x: &AdelePoint) -> Option<u64> {
    e.apply(&x.v)
        .iter()
        .try_fold(1u64, |m, c| {
            let d = c.denom().to_u64()?;
            let g = num_integer::gcd(m, d);
            (m / g).checked_mul(d)
        })
}

/// `supp^L(x)`, truncated at `bound`.
pub fn supp(e: &NSForm, x: &AdelePoint, bound: u64) -> Result<Vec<u64>> {
    e.model.check_point(x)?;
    Ok(match supp_modulus(e, x) {
        Some(m) => (1..=bound / m)
            .map(|k| k * m)
            .filter(|&n| e.model.in_levels(n))
            .collect(),
        None => Vec::new(),
    })
}

/// The level-`n` commutator `n²·E(x_n, y_n) mod 1`.
pub fn level_pairing(e: &NSForm, x: &AdelePoint, y: &AdelePoint, n: u64) -> Result<QmodZ> {
    let nn = int((n * n) as i64);
    to_qmodz(&(e.eval(&x.component(n), &y.component(n)) * nn))
}

/// The adelic pairing together with the two levels it was computed at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairingValue {
    pub value: QmodZ,
    pub levels: (u64, u64),
}

impl fmt::Display for PairingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (levels {},{})", self.value, self.levels.0, self.levels.1)
    }
}

/// `[x, y]` computed at the two smallest members of `supp(x) ∩ supp(y)`;
/// the two values must agree.
pub fn adelic_pairing(e: &NSForm, x: &AdelePoint, y: &AdelePoint) -> Result<PairingValue> {
    e.model.check_point(x)?;
    e.model.check_point(y)?;
    // lcm(ord x₁, ord y₁)·{1, k} both lie in the joint support
    let l = x.denominator().lcm(&y.denominator());
    let bound = l * e.model.second_level();
    let m = match (supp_modulus(e, x), supp_modulus(e, y)) {
        (Some(a), Some(b)) => a.lcm(&b),
        _ => bound + 1,
    };
    let joint: Vec<u64> = (1..=bound / m)
        .map(|k| k * m)
        .filter(|&n| e.model.in_levels(n))
        .take(2)
        .collect();
    let [p, q] = joint[..] else {
        return Err(ThetaError::ContractViolation(format!(
            "joint support of {x} and {y} has fewer than two levels up to {bound}"
        )));
    };
    let a = level_pairing(e, x, y, p)?;
    let b = level_pairing(e, x, y, q)?;
    if a != b {
        return Err(ThetaError::ContractViolation(format!(
            "pairing of {x}, {y} is {a} at level {p} but {b} at level {q}"
        )));
    }
    Ok(PairingValue {
        value: a,
        levels: (p, q),
    })
}

/// The class of `E` in `H²(V(X); k^×)`, represented by its commutator
/// pairing. Equality is decided on the points `e_i/n`.
#[derive(Clone, Debug)]
pub struct NsClass {
    form: NSForm,
}

pub fn ns_to_h2(e: &NSForm) -> NsClass {
    NsClass { form: e.clone() }
}

impl NsClass {
    pub fn form(&self) -> &NSForm {
        &self.form
    }

    pub fn pairing(&self, x: &AdelePoint, y: &AdelePoint) -> Result<QmodZ> {
        Ok(adelic_pairing(&self.form, x, y)?.value)
    }

    pub fn add(&self, other: &NsClass) -> Result<NsClass> {
        Ok(NsClass {
            form: self.form.add(&other.form)?,
        })
    }

    pub fn is_trivial(&self) -> Result<bool> {
        Ok(injectivity_witness(&self.form)?.is_none())
    }

    /// Compares pairings on `(e_i/n, e_j/n)` for the smallest level `n` with
    /// `n²` above twice the largest entry, which separates integer forms.
    pub fn same_class(&self, other: &NsClass) -> Result<bool> {
        let model = self.form.model;
        if model != other.form.model {
            return Ok(false);
        }
        let big = self
            .form
            .e
            .iter()
            .chain(&other.form.e)
            .flatten()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0);
        let n = (1..)
            .find(|&n: &u64| model.in_levels(n) && n * n > 2 * big)
            .expect("I is infinite");
        let dim = 2 * model.g;
        for i in 0..dim {
            for j in 0..dim {
                let x = AdelePoint::basis(model.g, i, n as i64);
                let y = AdelePoint::basis(model.g, j, n as i64);
                if self.pairing(&x, &y)? != other.pairing(&x, &y)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Points `(e_i/n, e_j/n)` with nonzero pairing `E_ij/n²`, at the smallest
/// level `n` where some `E_ij` is not divisible by `n²`.
pub fn injectivity_witness(e: &NSForm) -> Result<Option<(AdelePoint, AdelePoint)>> {
    if e.is_zero() {
        return Ok(None);
    }
    let g = e.g();
    for n in (1u64..).filter(|&n| e.model.in_levels(n)) {
        let nn = (n * n) as i64;
        for i in 0..2 * g {
            for j in i + 1..2 * g {
                if e.e[i][j] % nn != 0 {
                    let x = AdelePoint::basis(g, i, n as i64);
                    let y = AdelePoint::basis(g, j, n as i64);
                    if adelic_pairing(e, &x, &y)?.value.is_zero() {
                        return Err(ThetaError::ContractViolation(
                            "witness pair pairs trivially".into(),
                        ));
                    }
                    return Ok(Some((x, y)));
                }
            }
        }
    }
    unreachable!("some level exceeds every entry")
}

/// `FᵀEF` for `F: ℤ^{2g′} → ℤ^{2g}`.
pub fn pullback(f: &[Vec<i64>], e: &NSForm) -> Result<NSForm> {
    let n = 2 * e.g();
    let m = f.first().map_or(0, |r| r.len());
    if f.len() != n || f.iter().any(|r| r.len() != m) || m == 0 || !m.is_multiple_of(2) {
        return Err(ThetaError::InvalidArgument(format!(
            "F must be {n}×2g′ with g′ ≥ 1"
        )));
    }
    let mut out = vec![vec![0i64; m]; m];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let mut s = 0i64;
            for i in 0..n {
                for j in 0..n {
                    s += f[i][a] * e.e[i][j] * f[j][b];
                }
            }
            *slot = s;
        }
    }
    NSForm::new(TorsionModel::new(m / 2, e.model.excluded_prime)?, out)
}

/// The two sides of `ē_n(x, φ_L(y)) = [x, z]_{G(n*L)}` with `nz = y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeilCheck {
    /// `n·E(x̃, ỹ)`: the Weil pairing against `φ_L(y) = E(−, ỹ)`.
    pub via_weil: QmodZ,
    /// `n²·E(x̃, z̃)`: the commutator in `G(n*L)`.
    pub via_commutator: QmodZ,
    pub holds: bool,
}

/// Both `x` and `y` must be `n`-torsion; `z = y/n`.
pub fn weil_relation_check(e: &NSForm, n: u64, x: &AdelePoint, y: &AdelePoint) -> Result<WeilCheck> {
    e.model.check_level(n)?;
    e.model.check_point(x)?;
    e.model.check_point(y)?;
    for (name, p) in [("x", x), ("y", y)] {
        if !n.is_multiple_of(p.denominator()) {
            return Err(ThetaError::InvalidArgument(format!(
                "{name} = {p} is not {n}-torsion"
            )));
        }
    }
    let nr = int(n as i64);
    let xr: Vec<BigRational> = x.v.iter().map(frac).collect();
    let yr: Vec<BigRational> = y.v.iter().map(frac).collect();
    let z: Vec<BigRational> = yr.iter().map(|c| c / &nr).collect();
    let via_weil = to_qmodz(&(e.eval(&xr, &yr) * &nr))?;
    let via_commutator = to_qmodz(&(e.eval(&xr, &z) * &nr * &nr))?;
    Ok(WeilCheck {
        via_weil,
        via_commutator,
        holds: via_weil == via_commutator,
    })
}

/// `K(n*L)` in elementary-divisor coordinates with its commutator form.
#[derive(Clone, Debug)]
pub struct LevelGroup {
    pub n: u64,
    pub form: SkewForm,
    /// Rational lifts of the generators, one per nontrivial divisor.
    pub generators: Vec<Vec<BigRational>>,
    divisors_all: Vec<i128>,
    right_inv: Vec<Vec<i128>>,
}

impl LevelGroup {
    pub fn group(&self) -> &FinAbGroup {
        self.form.base()
    }

    /// Coordinates of `u ∈ K(n*L)`: `c_j = D_j·(R⁻¹u)_j mod D_j`.
    pub fn coords(&self, u: &[BigRational]) -> Result<GroupElement> {
        let mut c = Vec::new();
        for (row, &d) in self.right_inv.iter().zip(&self.divisors_all) {
            let q = row
                .iter()
                .zip(u)
                .map(|(&a, x)| x * BigRational::from_integer(BigInt::from(a)))
                .fold(BigRational::zero(), |s, t| s + t);
            let scaled = q * BigRational::from_integer(BigInt::from(d));
            if !scaled.is_integer() {
                return Err(ThetaError::InvalidArgument(format!(
                    "point is not in K({}*L)",
                    self.n
                )));
            }
            if d > 1 {
                let r = scaled.to_integer().mod_floor(&BigInt::from(d));
                c.push(r.to_u64().expect("reduced coordinate"));
            }
        }
        Ok(GroupElement::new(c))
    }

    /// `|K|² = ∏ D_j`, nondegeneracy and `|H|² = |K|` for a maximal
    /// isotropic `H`, when `|K| ≤ cap`.
    pub fn check_structure(&self, cap: u64) -> Result<bool> {
        let order = self.group().order();
        if order > cap {
            return Ok(false);
        }
        let dec = symplectic_decompose(&self.form)?;
        let h = dec.type_group().order();
        if h * h != order {
            return Err(ThetaError::ContractViolation(format!(
                "maximal isotropic subgroup of order {h} in a group of order {order}"
            )));
        }
        Ok(true)
    }
}

/// `K(n*L) = (n²E)⁻¹ℤ^{2g} / ℤ^{2g}` via the Smith form `L·n²E·R = D`:
/// generators `R e_j / D_j`, pairing `n²E(g_i, g_j)`.
pub fn level_theta_group(e: &NSForm, n: u64) -> Result<LevelGroup> {
    e.model.check_level(n)?;
    let det = e.determinant();
    if det.is_zero() {
        return Err(ThetaError::InvalidForm(
            "E is degenerate, so K(n*L) is infinite".into(),
        ));
    }
    let order_from_det: BigInt = BigInt::from(n).pow(4 * e.g() as u32) * det.abs();
    const ORDER_CAP: u64 = 1 << 62;
    if order_from_det > BigInt::from(ORDER_CAP) {
        return Err(ThetaError::SizeExceeded {
            what: format!("|K({n}*L)|"),
            size: u64::try_from(&order_from_det).unwrap_or(u64::MAX),
            cap: ORDER_CAP,
        });
    }
    let n2 = i128::from(n as i64 * n as i64);
    let m: Vec<Vec<i128>> = e
        .e
        .iter()
        .map(|r| r.iter().map(|&c| i128::from(c) * n2).collect())
        .collect();
    let snf = smith_normal_form(&m);
    let dim = m.len();
    let mut generators = Vec::new();
    let mut divisors = Vec::new();
    for (j, &d) in snf.diag.iter().enumerate() {
        if d > 1 {
            let den = BigInt::from(d);
            generators.push(
                (0..dim)
                    .map(|i| BigRational::new(BigInt::from(snf.right[i][j]), den.clone()))
                    .collect::<Vec<_>>(),
            );
            divisors.push(u64::try_from(d).map_err(|_| ThetaError::SizeExceeded {
                what: "elementary divisor".into(),
                size: u64::MAX,
                cap: u64::MAX,
            })?);
        }
    }
    let group = FinAbGroup::new(divisors)?;
    if BigInt::from(group.order()) != order_from_det {
        return Err(ThetaError::ContractViolation(format!(
            "|K({n}*L)| = {} but n^(4g)·det E = {order_from_det}",
            group.order()
        )));
    }
    let nn = int(n2 as i64);
    let gens = generators.clone();
    let form = SkewForm::from_upper(group, |i, j| {
        to_qmodz(&(e.eval(&gens[i], &gens[j]) * &nn)).expect("small denominators")
    })?;
    Ok(LevelGroup {
        n,
        form,
        generators,
        divisors_all: snf.diag.clone(),
        right_inv: snf.right_inv.clone(),
    })
}

/// A random alternating matrix with entries in `[-bound, bound]`.
pub fn random_form<R: Rng>(model: TorsionModel, bound: i64, rng: &mut R) -> NSForm {
    let n = 2 * model.g;
    let mut e = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = rng.gen_range(-bound..=bound);
            e[i][j] = c;
            e[j][i] = -c;
        }
    }
    NSForm::new(model, e).expect("alternating")
}

/// A random point whose denominators lie in `I` and are at most `max_den`.
pub fn random_point<R: Rng>(model: &TorsionModel, max_den: u64, rng: &mut R) -> AdelePoint {
    let dens: Vec<u64> = (1..=max_den).filter(|&d| model.in_levels(d)).collect();
    AdelePoint::new(
        (0..2 * model.g)
            .map(|_| {
                let d = dens[rng.gen_range(0..dens.len())] as i64;
                BigRational::new(rng.gen_range(-2 * d..2 * d).into(), d.into())
            })
            .collect(),
    )
}

/// A random integer matrix `2g × 2g′` with entries in `[-bound, bound]`.
pub fn random_matrix<R: Rng>(rows: usize, cols: usize, bound: i64, rng: &mut R) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

/// `{"g": 1, "E": [[0,1],[-1,0]], "excluded_prime": 0}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NsJson {
    pub g: usize,
    #[serde(rename = "E")]
    pub e: Vec<Vec<i64>>,
    #[serde(default)]
    pub excluded_prime: u64,
}

impl NsJson {
    pub fn from_form(e: &NSForm) -> Self {
        NsJson {
            g: e.g(),
            e: e.e.clone(),
            excluded_prime: e.model.excluded_prime,
        }
    }

    pub fn to_form(&self) -> Result<NSForm> {
        NSForm::new(TorsionModel::new(self.g, self.excluded_prime)?, self.e.clone())
    }
}

/// `{"v": ["1/2", "0"]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointJson {
    pub v: Vec<String>,
}

impl PointJson {
    pub fn from_point(p: &AdelePoint) -> Self {
        PointJson {
            v: p.v.iter().map(format_rational).collect(),
        }
    }

    pub fn to_point(&self) -> Result<AdelePoint> {
        let refs: Vec<&str> = self.v.iter().map(String::as_str).collect();
        AdelePoint::parse(&refs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[(i64, i64)]) -> AdelePoint {
        AdelePoint::from_fractions(v)
    }

    fn q(n: i64, d: i64) -> QmodZ {
        QmodZ::new(n, d)
    }

    #[test]
    fn supp_examples() {
        let e = NSForm::principal(1);
        assert_eq!(supp(&e, &pt(&[(1, 2), (0, 1)]), 8).unwrap(), vec![2, 4, 6, 8]);
        assert_eq!(supp(&e, &pt(&[(3, 1), (-1, 1)]), 5).unwrap(), vec![1, 2, 3, 4, 5]);
        let z = NSForm::zero(TorsionModel::new(1, 0).unwrap());
        assert_eq!(supp(&z, &pt(&[(1, 3), (1, 5)]), 4).unwrap(), vec![1, 2, 3, 4]);
        let e3 = NSForm::new(TorsionModel::new(1, 3).unwrap(), e.matrix().to_vec()).unwrap();
        assert_eq!(supp(&e3, &pt(&[(1, 2), (0, 1)]), 8).unwrap(), vec![2, 4, 8]);
        assert!(matches!(
            supp(&e3, &pt(&[(1, 3), (0, 1)]), 8),
            Err(ThetaError::ExcludedLevel { level: 3, prime: 3 })
        ));
    }

    #[test]
    fn pairing_examples() {
        let e = NSForm::principal(1);
        let x = pt(&[(1, 2), (0, 1)]);
        let y = pt(&[(0, 1), (1, 2)]);
        let p = adelic_pairing(&e, &x, &y).unwrap();
        assert_eq!(p.value, q(1, 4));
        assert_eq!(p.levels, (2, 4));
        assert_eq!(p.to_string(), "1/4 (levels 2,4)");
        assert_eq!(level_pairing(&e, &x, &y, 4).unwrap(), q(1, 4));
        let ints = adelic_pairing(&e, &pt(&[(1, 1), (2, 1)]), &pt(&[(0, 1), (5, 1)])).unwrap();
        assert_eq!(ints.value, QmodZ::ZERO);
        assert_eq!(adelic_pairing(&e.scaled(2), &x, &y).unwrap().value, q(1, 2));
    }

    #[test]
    fn compatibility_of_components() {
        let x = pt(&[(1, 6), (5, 4)]);
        for (n, m) in [(6, 3), (12, 4), (4, 1), (5, 5)] {
            assert!(x.is_compatible(n, m));
        }
    }

    #[test]
    fn witness_examples() {
        let z = NSForm::zero(TorsionModel::new(2, 0).unwrap());
        assert!(injectivity_witness(&z).unwrap().is_none());
        let (x, y) = injectivity_witness(&NSForm::principal(1)).unwrap().unwrap();
        assert_eq!((x, y), (pt(&[(1, 2), (0, 1)]), pt(&[(0, 1), (1, 2)])));
        let mut m = vec![vec![0; 4]; 4];
        m[0][2] = 3;
        m[2][0] = -3;
        let e = NSForm::new(TorsionModel::new(2, 0).unwrap(), m).unwrap();
        let (x, y) = injectivity_witness(&e).unwrap().unwrap();
        assert_eq!(adelic_pairing(&e, &x, &y).unwrap().value, q(3, 4));
    }

    #[test]
    fn classes_add_and_compare() {
        let e = NSForm::principal(1);
        let c = ns_to_h2(&e);
        let twice = c.add(&c).unwrap();
        assert!(twice.same_class(&ns_to_h2(&e.scaled(2))).unwrap());
        assert!(!twice.same_class(&c).unwrap());
        assert!(ns_to_h2(&NSForm::zero(*e.model())).is_trivial().unwrap());
        assert!(!c.is_trivial().unwrap());
    }

    #[test]
    fn pullback_examples() {
        let e = NSForm::principal(1);
        assert_eq!(pullback(&[vec![1, 0], vec![0, 1]], &e).unwrap(), e);
        assert_eq!(pullback(&[vec![2, 0], vec![0, 2]], &e).unwrap(), e.scaled(4));
        assert_eq!(pullback(&[vec![0, 1], vec![1, 0]], &e).unwrap(), e.scaled(-1));
        assert!(pullback(&[vec![1, 0, 0]], &e).is_err());
        let x = pt(&[(1, 2), (0, 1)]);
        let y = pt(&[(0, 1), (1, 2)]);
        let f2 = [vec![2, 0], vec![0, 2]];
        let pulled = pullback(&f2, &e).unwrap();
        assert_eq!(
            adelic_pairing(&pulled, &x, &y).unwrap().value,
            adelic_pairing(&e, &x.apply(&f2), &y.apply(&f2)).unwrap().value
        );
    }

    #[test]
    fn weil_examples() {
        let e = NSForm::principal(1);
        let c = weil_relation_check(&e, 2, &pt(&[(1, 2), (0, 1)]), &pt(&[(0, 1), (1, 2)])).unwrap();
        assert_eq!((c.via_weil, c.via_commutator, c.holds), (q(1, 2), q(1, 2), true));
        let c = weil_relation_check(&e, 3, &pt(&[(1, 3), (0, 1)]), &pt(&[(0, 1), (1, 3)])).unwrap();
        assert_eq!((c.via_weil, c.via_commutator), (q(1, 3), q(1, 3)));
        let c = weil_relation_check(&e, 2, &pt(&[(0, 1), (0, 1)]), &pt(&[(0, 1), (1, 2)])).unwrap();
        assert_eq!((c.via_weil, c.via_commutator), (QmodZ::ZERO, QmodZ::ZERO));
        assert!(weil_relation_check(&e, 2, &pt(&[(1, 3), (0, 1)]), &pt(&[(0, 1), (1, 2)])).is_err());
    }

    #[test]
    fn level_group_examples() {
        let e = NSForm::principal(1);
        assert_eq!(level_theta_group(&e, 1).unwrap().group().order(), 1);
        let k = level_theta_group(&e, 2).unwrap();
        assert_eq!(k.group().divisors(), &[4, 4]);
        let dec = symplectic_decompose(&k.form).unwrap();
        assert_eq!(dec.ty, vec![4]);
        assert!(k.check_structure(4096).unwrap());
        let two = NSForm::principal(1).scaled(2);
        let k = level_theta_group(&two, 1).unwrap();
        assert_eq!(k.group().divisors(), &[2, 2]);
        let e3 = NSForm::new(TorsionModel::new(1, 2).unwrap(), e.matrix().to_vec()).unwrap();
        assert!(matches!(level_theta_group(&e3, 2), Err(ThetaError::ExcludedLevel { .. })));
    }

    #[test]
    fn level_group_matches_pairing() {
        let e = NSForm::principal(1).scaled(3);
        let x = pt(&[(1, 2), (1, 3)]);
        let y = pt(&[(1, 4), (5, 6)]);
        let p = adelic_pairing(&e, &x, &y).unwrap();
        let k = level_theta_group(&e, p.levels.0).unwrap();
        let cx = k.coords(&x.component(p.levels.0)).unwrap();
        let cy = k.coords(&y.component(p.levels.0)).unwrap();
        assert_eq!(k.form.eval(&cx, &cy), p.value);
    }

    #[test]
    fn json_round_trip() {
        let j: NsJson = serde_json::from_str(r#"{"g":1,"E":[[0,1],[-1,0]],"excluded_prime":0}"#).unwrap();
        assert_eq!(j.to_form().unwrap(), NSForm::principal(1));
        let p: PointJson = serde_json::from_str(r#"{"v":["1/2","0"]}"#).unwrap();
        assert_eq!(p.to_point().unwrap(), pt(&[(1, 2), (0, 1)]));
        let bad: NsJson = serde_json::from_str(r#"{"g":1,"E":[[0,1],[1,0]]}"#).unwrap();
        assert!(matches!(bad.to_form(), Err(ThetaError::InvalidForm(_))));
    }
}
