//! Exact roots of unity and cyclotomic numbers.
//!
//! The multiplicative group of roots of unity is written additively as
//! ℚ/ℤ: the fraction `a/b` stands for `exp(2πi·a/b)`. [`CycNumber`] is an
//! element of the cyclotomic field ℚ(ζ_N), stored as a rational polynomial in
//! ζ_N reduced modulo the N-th cyclotomic polynomial, so equality is plain
//! coefficient equality.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, ThetaError};

/// A root of unity, written as a reduced fraction `num/den` in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    /// The class of `num/den` modulo 1.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (mut num, mut den) = (i128::from(num), i128::from(den));
        if den < 0 {
            num = -num;
            den = -den;
        }
        Self::from_i128(num, den)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        let (num, den) = if num == 0 { (0, 1) } else { (num / g, den / g) };
        QmodZ {
            num: i64::try_from(num).expect("numerator overflow"),
            den: i64::try_from(den).expect("denominator overflow"),
        }
    }

    pub fn from_ratio(r: &num_rational::Rational64) -> Self {
        QmodZ::new(*r.numer(), *r.denom())
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Multiplicative order of the root of unity.
    pub fn order(self) -> u64 {
        self.den as u64
    }

    /// `n·self`, i.e. the n-th power of the root of unity.
    pub fn scale(self, n: i64) -> Self {
        Self::from_i128(i128::from(self.num) * i128::from(n), i128::from(self.den))
    }

    /// The canonical `y` with `n·y = self`: `num / (n·den)`.
    pub fn nth_root(self, n: i64) -> Result<Self> {
        if n <= 0 {
            return Err(ThetaError::InvalidArgument(format!(
                "nth_root needs n >= 1, got {n}"
            )));
        }
        Ok(Self::from_i128(
            i128::from(self.num),
            i128::from(self.den) * i128::from(n),
        ))
    }

    /// Exponent `k` with `self = k/level`, if `den` divides `level`.
    pub fn exponent_at(self, level: u64) -> Option<u64> {
        let den = self.den as u64;
        level.is_multiple_of(den).then(|| self.num as u64 * (level / den))
    }
}

pub fn qmz_add(x: QmodZ, y: QmodZ) -> QmodZ {
    x + y
}

pub fn nth_root(x: QmodZ, n: i64) -> Result<QmodZ> {
    x.nth_root(n)
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        if self.num == 0 {
            return rhs;
        }
        if rhs.num == 0 {
            return self;
        }
        let (a, b, c, d) = (self.num, self.den, rhs.num, rhs.den);
        let g = b.gcd(&d);
        let l = (b / g).checked_mul(d);
        let sum = l.and_then(|l| {
            let s = a.checked_mul(l / b)?.checked_add(c.checked_mul(l / d)?)?;
            Some((s, l))
        });
        match sum {
            Some((s, l)) => {
                let s = if s >= l { s - l } else { s };
                let h = s.gcd(&l);
                if s == 0 {
                    QmodZ::ZERO
                } else {
                    QmodZ { num: s / h, den: l / h }
                }
            }
            None => {
                let (a, b) = (i128::from(a), i128::from(b));
                let (c, d) = (i128::from(c), i128::from(d));
                let l = b.lcm(&d);
                QmodZ::from_i128(a * (l / b) + c * (l / d), l)
            }
        }
    }
}

impl AddAssign for QmodZ {
    fn add_assign(&mut self, rhs: QmodZ) {
        *self = *self + rhs;
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        if self.num == 0 {
            self
        } else {
            QmodZ {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    fn sub(self, rhs: QmodZ) -> QmodZ {
        self + (-rhs)
    }
}

impl SubAssign for QmodZ {
    fn sub_assign(&mut self, rhs: QmodZ) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for QmodZ {
    fn sum<I: Iterator<Item = QmodZ>>(iter: I) -> QmodZ {
        iter.fold(QmodZ::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `"a/b"` or an integer `"a"` into a big rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || ThetaError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl FromStr for QmodZ {
    type Err = ThetaError;
    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        let den = r.denom().clone();
        let num = r.numer().mod_floor(&den);
        let conv = |b: &BigInt| {
            i64::try_from(b).map_err(|_| ThetaError::Parse(format!("rational too large: {s}")))
        };
        Ok(QmodZ::new(conv(&num)?, conv(&den)?))
    }
}

impl Serialize for QmodZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.num, self.den))
    }
}

impl<'de> Deserialize<'de> for QmodZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic fields
// ---------------------------------------------------------------------------

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both ascending-degree, den monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Coefficients (ascending) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divide_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// The field ℚ(ζ_N) with a table of reduced powers of ζ_N.
#[derive(Debug)]
pub struct CycField {
    level: u64,
    degree: usize,
    modulus: Vec<i64>,
    // powers[k] = ζ^k reduced, k in 0..2·level
    powers: Vec<Vec<i64>>,
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
    }
}

impl Eq for CycField {}

impl CycField {
    pub fn new(level: u64) -> Arc<CycField> {
        assert!(level >= 1, "cyclotomic level must be positive");
        let modulus = cyclotomic_polynomial(level);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(2 * level as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..2 * level {
            powers.push(cur.clone());
            // multiply by ζ
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1] - top * modulus[i];
            }
            cur[0] = -top * modulus[0];
        }
        Arc::new(CycField {
            level,
            degree,
            modulus,
            powers,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    fn power(&self, k: u64) -> &[i64] {
        &self.powers[(k % self.level) as usize]
    }

    pub fn zero(self: &Arc<Self>) -> CycNumber {
        CycNumber {
            field: Arc::clone(self),
            coeffs: vec![BigRational::zero(); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycNumber {
        self.rational(BigRational::one())
    }

    pub fn rational(self: &Arc<Self>, r: BigRational) -> CycNumber {
        let mut z = self.zero();
        z.coeffs[0] = r;
        z
    }

    pub fn integer(self: &Arc<Self>, n: i64) -> CycNumber {
        self.rational(BigRational::from_integer(n.into()))
    }

    /// ζ_N^k.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycNumber {
        let k = k.rem_euclid(self.level as i64) as u64;
        CycNumber {
            field: Arc::clone(self),
            coeffs: self
                .power(k)
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        }
    }

    /// Embeds a root of unity whose order divides the level.
    pub fn root(self: &Arc<Self>, q: QmodZ) -> Result<CycNumber> {
        let k = q.exponent_at(self.level).ok_or_else(|| {
            ThetaError::InvalidArgument(format!(
                "root of unity {q} does not live at level {}",
                self.level
            ))
        })?;
        Ok(self.zeta_pow(k as i64))
    }

    /// Builds a number from raw coefficients of ζ^0, ζ^1, …, reducing as needed.
    pub fn from_coeffs(self: &Arc<Self>, raw: &[BigRational]) -> CycNumber {
        let mut z = self.zero();
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &p) in self.power(k as u64).iter().enumerate() {
                if p != 0 {
                    z.coeffs[i] += c * BigRational::from_integer(p.into());
                }
            }
        }
        z
    }
}

/// An element of the cyclotomic field ℚ(ζ_N) in canonical reduced form.
#[derive(Clone)]
pub struct CycNumber {
    field: Arc<CycField>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.field.level == other.field.level {
            return self.coeffs == other.coeffs;
        }
        let l = self.field.level.lcm(&other.field.level);
        let f = CycField::new(l);
        self.relevel(&f).coeffs == other.relevel(&f).coeffs
    }
}

impl Eq for CycNumber {}

impl Hash for CycNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.level.hash(state);
        self.coeffs.hash(state);
    }
}

impl CycNumber {
    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn level(&self) -> u64 {
        self.field.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Re-expresses the number in a field whose level is a multiple of ours.
    pub fn relevel(&self, target: &Arc<CycField>) -> CycNumber {
        if target.level == self.field.level {
            return self.clone();
        }
        assert!(
            target.level.is_multiple_of(self.field.level),
            "level {} does not divide {}",
            self.field.level,
            target.level
        );
        let step = target.level / self.field.level;
        let mut z = target.zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &p) in target.power(k as u64 * step).iter().enumerate() {
                if p != 0 {
                    z.coeffs[i] += c * BigRational::from_integer(p.into());
                }
            }
        }
        z
    }

    fn aligned(&self, other: &CycNumber) -> (CycNumber, CycNumber) {
        if self.field.level == other.field.level {
            return (self.clone(), other.clone());
        }
        let f = CycField::new(self.field.level.lcm(&other.field.level));
        (self.relevel(&f), other.relevel(&f))
    }

    /// Complex conjugate: ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> CycNumber {
        let f = &self.field;
        let mut z = f.zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (f.level - k as u64 % f.level) % f.level;
            for (i, &p) in f.power(e).iter().enumerate() {
                if p != 0 {
                    z.coeffs[i] += c * BigRational::from_integer(p.into());
                }
            }
        }
        z
    }

    pub fn scale(&self, r: &BigRational) -> CycNumber {
        CycNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn mul_same(&self, rhs: &CycNumber) -> CycNumber {
        let f = &self.field;
        let d = f.degree;
        let mut raw = vec![BigRational::zero(); 2 * d - 1];
        let mut any = false;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
                any = true;
            }
        }
        if !any {
            return f.zero();
        }
        let mut z = CycNumber {
            field: Arc::clone(f),
            coeffs: raw[..d].to_vec(),
        };
        for (k, c) in raw.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (i, &p) in f.power(k as u64).iter().enumerate() {
                if p != 0 {
                    z.coeffs[i] += c * BigRational::from_integer(p.into());
                }
            }
        }
        z
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in ℚ[x].
    pub fn inv(&self) -> Option<CycNumber> {
        if self.is_zero() {
            return None;
        }
        let f = &self.field;
        let modulus: Vec<BigRational> = f
            .modulus
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let (g, s) = poly_ext_gcd(&trim(self.coeffs.clone()), &modulus);
        // g is a nonzero constant since Φ_N is irreducible
        debug_assert_eq!(g.len(), 1);
        let inv_g = g[0].recip();
        let s: Vec<BigRational> = s.into_iter().map(|c| c * &inv_g).collect();
        Some(f.from_coeffs(&s))
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
    p
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        q[k] = c;
        r.pop();
        r = trim(r);
        if r.len() < b.len() {
            break;
        }
    }
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

// returns (gcd, s) with s·a ≡ gcd (mod m)
fn poly_ext_gcd(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        if self.field.level != rhs.field.level {
            let (a, b) = self.aligned(rhs);
            return &a + &b;
        }
        CycNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        if self.field.level != rhs.field.level {
            let (a, b) = self.aligned(rhs);
            return &a - &b;
        }
        CycNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        if self.field.level != rhs.field.level {
            let (a, b) = self.aligned(rhs);
            return a.mul_same(&b);
        }
        self.mul_same(rhs)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        if self.field.level == rhs.field.level {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

/// `acc + a·conj(b)`, re-levelled to a common field when needed.
pub fn cyc_inner_step(acc: &CycNumber, a: &CycNumber, b: &CycNumber) -> CycNumber {
    acc + &(a * &b.conj())
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = format_rational(c);
            terms.push(match k {
                0 => c,
                1 => format!("{c}·ζ{}", self.field.level),
                _ => format!("{c}·ζ{}^{k}", self.field.level),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON form `{"level": N, "coeffs": ["a/b", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycJson {
    pub level: u64,
    pub coeffs: Vec<String>,
}

impl From<&CycNumber> for CycJson {
    fn from(z: &CycNumber) -> Self {
        CycJson {
            level: z.field.level,
            coeffs: z.coeffs.iter().map(format_rational).collect(),
        }
    }
}

impl CycJson {
    pub fn to_number(&self) -> Result<CycNumber> {
        if self.level == 0 {
            return Err(ThetaError::Parse("cyclotomic level must be positive".into()));
        }
        let f = CycField::new(self.level);
        let raw = self
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(f.from_coeffs(&raw))
    }
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CycJson::deserialize(d)?
            .to_number()
            .map_err(serde::de::Error::custom)
    }
}

/// Whether a rational is a nonnegative integer.
pub fn is_nonnegative(r: &BigRational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> QmodZ {
        QmodZ::new(a, b)
    }

    #[test]
    fn qmz_add_examples() {
        assert_eq!(qmz_add(q(1, 4), q(1, 4)), q(1, 2));
        assert_eq!(qmz_add(q(1, 2), q(1, 2)), QmodZ::ZERO);
        // 1/6 + 1/10 = 5/30 + 3/30 = 8/30
        assert_eq!(qmz_add(q(1, 6), q(1, 10)), q(4, 15));
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(nth_root(q(1, 2), 2).unwrap(), q(1, 4));
        assert_eq!(nth_root(QmodZ::ZERO, 5).unwrap(), QmodZ::ZERO);
        let r = nth_root(q(2, 3), 3).unwrap();
        assert_eq!(r, q(2, 9));
        assert_eq!(r.scale(3), q(2, 3));
        assert!(matches!(
            nth_root(q(1, 2), 0),
            Err(ThetaError::InvalidArgument(_))
        ));
    }

    #[test]
    fn qmodz_normalization_and_parsing() {
        assert_eq!(q(5, 4), q(1, 4));
        assert_eq!(q(-1, 4), q(3, 4));
        assert_eq!(q(3, -4), q(1, 4));
        assert_eq!(q(0, 7), QmodZ::ZERO);
        assert_eq!(QmodZ::ZERO.den(), 1);
        assert_eq!("3/2".parse::<QmodZ>().unwrap(), q(1, 2));
        assert_eq!("-1/3".parse::<QmodZ>().unwrap(), q(2, 3));
        assert_eq!("0".parse::<QmodZ>().unwrap(), QmodZ::ZERO);
        assert!("1/0".parse::<QmodZ>().is_err());
        assert_eq!(serde_json::to_string(&q(1, 2)).unwrap(), "\"1/2\"");
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn cyc_inner_step_examples() {
        let f3 = CycField::new(3);
        let z3 = f3.zeta_pow(1);
        assert_eq!(cyc_inner_step(&f3.zero(), &z3, &z3), f3.one());

        let sum = &(&f3.one() + &z3) + &f3.zeta_pow(2);
        assert!(sum.is_zero());

        let f4 = CycField::new(4);
        let a = &f4.one() + &f4.zeta_pow(1);
        assert_eq!(cyc_inner_step(&f4.zero(), &a, &a), f4.integer(2));
    }

    #[test]
    fn relevel_and_mixed_levels() {
        let f4 = CycField::new(4);
        let f6 = CycField::new(6);
        // i + ζ6 lives in level 12
        let s = &f4.zeta_pow(1) + &f6.zeta_pow(1);
        assert_eq!(s.level(), 12);
        let f12 = CycField::new(12);
        assert_eq!(s, &f12.zeta_pow(3) + &f12.zeta_pow(2));
        // ζ4 == ζ12^3 compares equal across levels
        assert_eq!(f4.zeta_pow(1), f12.zeta_pow(3));
    }

    #[test]
    fn inverse_round_trips() {
        let f = CycField::new(12);
        let x = &(&f.integer(2) + &f.zeta_pow(1)) - &f.zeta_pow(5);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, f.one());
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn json_round_trip() {
        let f = CycField::new(5);
        let x = &f.zeta_pow(2).scale(&BigRational::new(3.into(), 7.into())) + &f.integer(1);
        let s = serde_json::to_string(&x).unwrap();
        let back: CycNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
