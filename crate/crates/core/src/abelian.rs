//! Finite abelian groups in elementary-divisor form.
//!
//! A group `ℤ/d₁ ⊕ … ⊕ ℤ/d_p` with `d_i | d_{i+1}` is stored by its divisor
//! list; elements are coordinate vectors with `0 ≤ c_i < d_i`. Subgroups are
//! explicit sorted element lists, which is fine at desk scale.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ThetaError};
use crate::roots::QmodZ;
use crate::snf::{mat_vec, smith_normal_form, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinAbGroup {
    divisors: Vec<u64>,
}

impl<'de> Deserialize<'de> for FinAbGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            divisors: Vec<u64>,
        }
        let raw = Raw::deserialize(d)?;
        FinAbGroup::new(raw.divisors).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup{:?}", self.divisors)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.divisors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FinAbGroup {
    pub fn new(divisors: Vec<u64>) -> Result<Self> {
        if let Some(d) = divisors.iter().find(|&&d| d < 2) {
            return Err(ThetaError::MalformedGroup(format!(
                "elementary divisor {d} < 2 in {divisors:?}"
            )));
        }
        if divisors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(ThetaError::MalformedGroup(format!(
                "divisors {divisors:?} do not form a chain d_i | d_(i+1)"
            )));
        }
        Ok(FinAbGroup { divisors })
    }

    /// Drops trivial factors; panics if the rest is not a chain.
    pub(crate) fn from_chain(divisors: impl IntoIterator<Item = u64>) -> Self {
        let divisors: Vec<u64> = divisors.into_iter().filter(|&d| d > 1).collect();
        FinAbGroup::new(divisors).expect("divisor chain")
    }

    pub fn trivial() -> Self {
        FinAbGroup { divisors: vec![] }
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    /// Largest element order (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.divisors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    pub fn basis(&self) -> Vec<GroupElement> {
        (0..self.rank())
            .map(|i| {
                let mut c = vec![0; self.rank()];
                c[i] = 1;
                GroupElement::new(c)
            })
            .collect()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.coords.len() == self.rank() && g.coords.iter().zip(&self.divisors).all(|(c, d)| c < d)
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(ThetaError::MalformedElement {
                coords: g.coords.clone(),
                divisors: self.divisors.clone(),
            })
        }
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<GroupElement> {
        let g = GroupElement::new(coords);
        self.check(&g)?;
        Ok(g)
    }

    /// Reduces an arbitrary integer vector into the group.
    pub fn reduce(&self, coords: &[i128]) -> GroupElement {
        assert_eq!(coords.len(), self.rank());
        GroupElement::new(
            coords
                .iter()
                .zip(&self.divisors)
                .map(|(&c, &d)| c.rem_euclid(i128::from(d)) as u64)
                .collect(),
        )
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.divisors)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&self.divisors)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &GroupElement, n: i64) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&self.divisors)
                .map(|(&x, &d)| {
                    let d = i128::from(d);
                    (i128::from(x) * i128::from(n)).rem_euclid(d) as u64
                })
                .collect(),
        )
    }

    /// Lexicographic index (first coordinate most significant).
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.coords
            .iter()
            .zip(&self.divisors)
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.divisors[i] as usize;
            coords[i] = (idx % d) as u64;
            idx /= d;
        }
        GroupElement::new(coords)
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        Ok(g.coords
            .iter()
            .zip(&self.divisors)
            .map(|(&c, &d)| d / c.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o)))
    }

    pub fn mul_by_n(&self, n: i64) -> MulByN {
        MulByN::new(self, n)
    }

    /// The standard pairing `⟨x, y⟩ = Σ x_i y_i / d_i` identifying the group
    /// with its own character group.
    pub fn dual_character(&self, y: &GroupElement, x: &GroupElement) -> QmodZ {
        x.coords
            .iter()
            .zip(&y.coords)
            .zip(&self.divisors)
            .map(|((&a, &b), &d)| {
                QmodZ::new(((u128::from(a) * u128::from(b)) % u128::from(d)) as i64, d as i64)
            })
            .sum()
    }

    /// `K ⊕ K` in elementary-divisor form, coordinates interleaved as
    /// `(x₁, y₁, x₂, y₂, …)`.
    pub fn interleave_square(&self) -> FinAbGroup {
        FinAbGroup {
            divisors: self.divisors.iter().flat_map(|&d| [d, d]).collect(),
        }
    }
}

pub fn element_order(k: &FinAbGroup, g: &GroupElement) -> Result<u64> {
    k.element_order(g)
}

pub fn mul_by_n(k: &FinAbGroup, n: i64) -> MulByN {
    k.mul_by_n(n)
}

pub fn dual_character(k: &FinAbGroup, y: &GroupElement, x: &GroupElement) -> QmodZ {
    k.dual_character(y, x)
}

/// Multiplication by `n` on a finite abelian group, with kernel and image
/// enumerated explicitly.
#[derive(Clone, Debug)]
pub struct MulByN {
    pub n: i64,
    pub domain: FinAbGroup,
    pub kernel: Vec<GroupElement>,
    pub image: Vec<GroupElement>,
    /// The kernel as an abstract group: `⊕ ℤ/gcd(n, d_i)` (trivial factors dropped).
    kernel_group: FinAbGroup,
    // for each domain coordinate: Some((kernel coordinate, step d_i/g_i))
    kernel_embed: Vec<Option<(usize, u64)>>,
}

impl MulByN {
    fn new(domain: &FinAbGroup, n: i64) -> Self {
        let gcds: Vec<u64> = domain
            .divisors
            .iter()
            .map(|&d| (n.unsigned_abs() % d).gcd(&d))
            .collect();
        let mut kernel_embed = Vec::with_capacity(domain.rank());
        let mut k = 0;
        for (&g, &d) in gcds.iter().zip(&domain.divisors) {
            if g > 1 {
                kernel_embed.push(Some((k, d / g)));
                k += 1;
            } else {
                kernel_embed.push(None);
            }
        }
        let kernel_group = FinAbGroup::from_chain(gcds.iter().copied());
        let mut kernel: Vec<GroupElement> = kernel_group
            .elements()
            .map(|c| {
                GroupElement::new(
                    kernel_embed
                        .iter()
                        .map(|e| e.map_or(0, |(j, step)| c.coords[j] * step))
                        .collect(),
                )
            })
            .collect();
        kernel.sort();
        let mut image: Vec<GroupElement> = domain.elements().map(|g| domain.scale(&g, n)).collect();
        image.sort();
        image.dedup();
        MulByN {
            n,
            domain: domain.clone(),
            kernel,
            image,
            kernel_group,
            kernel_embed,
        }
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        self.domain.scale(g, self.n)
    }

    pub fn kernel_group(&self) -> &FinAbGroup {
        &self.kernel_group
    }

    /// Coordinates of a kernel element in [`Self::kernel_group`].
    pub fn kernel_coords(&self, w: &GroupElement) -> Option<GroupElement> {
        let mut coords = vec![0; self.kernel_group.rank()];
        for (i, e) in self.kernel_embed.iter().enumerate() {
            match e {
                Some((j, step)) => {
                    if !w.coords[i].is_multiple_of(*step) {
                        return None;
                    }
                    coords[*j] = w.coords[i] / step;
                }
                None => {
                    if w.coords[i] != 0 {
                        return None;
                    }
                }
            }
        }
        Some(GroupElement::new(coords))
    }

    /// Kernel generators matching the basis of [`Self::kernel_group`].
    pub fn kernel_generators(&self) -> Vec<GroupElement> {
        let mut gens = vec![self.domain.zero(); self.kernel_group.rank()];
        for (i, e) in self.kernel_embed.iter().enumerate() {
            if let Some((j, step)) = e {
                gens[*j].coords[i] = *step;
            }
        }
        gens
    }

    pub fn in_kernel(&self, g: &GroupElement) -> bool {
        self.kernel.binary_search(g).is_ok()
    }

    pub fn in_image(&self, g: &GroupElement) -> bool {
        self.image.binary_search(g).is_ok()
    }

    pub fn image_index(&self, g: &GroupElement) -> Option<usize> {
        self.image.binary_search(g).ok()
    }

    /// `∏ d_i / gcd(n, d_i)`.
    pub fn image_order_formula(&self) -> u64 {
        self.domain.order() / self.kernel_group.order()
    }
}

/// A subgroup given by generators, with its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub ambient: FinAbGroup,
    pub gens: Vec<GroupElement>,
    pub elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn generated_by(ambient: &FinAbGroup, gens: Vec<GroupElement>) -> Result<Self> {
        for g in &gens {
            ambient.check(g)?;
        }
        let mut seen = vec![false; ambient.order() as usize];
        let zero = ambient.zero();
        seen[ambient.index_of(&zero)] = true;
        let mut elements = vec![zero];
        let mut frontier = 0;
        while frontier < elements.len() {
            let cur = elements[frontier].clone();
            frontier += 1;
            for g in &gens {
                let next = ambient.add(&cur, g);
                let idx = ambient.index_of(&next);
                if !seen[idx] {
                    seen[idx] = true;
                    elements.push(next);
                }
            }
        }
        elements.sort();
        Ok(Subgroup {
            ambient: ambient.clone(),
            gens,
            elements,
        })
    }

    /// A subgroup given by an element predicate (must define a subgroup).
    pub fn from_predicate(ambient: &FinAbGroup, pred: impl Fn(&GroupElement) -> bool) -> Self {
        let elements: Vec<GroupElement> = ambient.elements().filter(|g| pred(g)).collect();
        let gens = independent_generators(ambient, &elements);
        Subgroup {
            ambient: ambient.clone(),
            gens,
            elements,
        }
    }

    pub fn whole(ambient: &FinAbGroup) -> Self {
        Subgroup {
            ambient: ambient.clone(),
            gens: ambient.basis(),
            elements: ambient.elements().collect(),
        }
    }

    pub fn trivial(ambient: &FinAbGroup) -> Self {
        Subgroup {
            ambient: ambient.clone(),
            gens: vec![],
            elements: vec![ambient.zero()],
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// An internal direct-sum basis `⊕⟨g_i⟩` with orders forming a chain.
    pub fn cyclic_decomposition(&self) -> (FinAbGroup, Vec<GroupElement>) {
        let q = Quotient::new(&self.ambient, &self.gens, &[]);
        (q.group.clone(), q.lifts.clone())
    }
}

// greedy generating set: add elements not yet in the span
fn independent_generators(ambient: &FinAbGroup, elements: &[GroupElement]) -> Vec<GroupElement> {
    let mut gens = Vec::new();
    let mut span = Subgroup::trivial(ambient);
    for g in elements {
        if !span.contains(g) {
            gens.push(g.clone());
            span = Subgroup::generated_by(ambient, gens.clone()).expect("valid elements");
            if span.elements.len() == elements.len() {
                break;
            }
        }
    }
    gens
}

/// The quotient `S / T` of two subgroups `T ⊆ S` of an ambient group,
/// presented in elementary-divisor form.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ambient: FinAbGroup,
    pub group: FinAbGroup,
    /// Ambient representatives of the quotient's basis elements.
    pub lifts: Vec<GroupElement>,
    // projection: coords = (proj * v) / scale, then reduce
    basis_diag: Vec<i128>,
    basis_left: IntMatrix,
    second_left: IntMatrix,
    kept: Vec<(usize, u64)>,
}

impl Quotient {
    /// `⟨s_gens⟩ / ⟨t_gens⟩`; `t_gens` must lie in the span of `s_gens`.
    pub fn new(ambient: &FinAbGroup, s_gens: &[GroupElement], t_gens: &[GroupElement]) -> Self {
        let p = ambient.rank();
        let col = |g: &GroupElement| -> Vec<i128> { g.coords.iter().map(|&c| i128::from(c)).collect() };
        let relation_cols: Vec<Vec<i128>> = (0..p)
            .map(|i| {
                let mut v = vec![0i128; p];
                v[i] = i128::from(ambient.divisors[i]);
                v
            })
            .collect();

        // lattice Ŝ = span(s_gens) + Dℤ^p has basis left_inv · diag
        let s_cols: Vec<Vec<i128>> = s_gens.iter().map(col).chain(relation_cols.iter().cloned()).collect();
        let s_mat = columns_to_matrix(&s_cols, p);
        let snf1 = smith_normal_form(&s_mat);
        let basis_diag: Vec<i128> = snf1.diag[..p].to_vec();
        let basis_left = snf1.left.clone();
        let to_basis = |v: &[i128]| -> Vec<i128> {
            let lv = mat_vec(&basis_left, v);
            lv.iter()
                .zip(&basis_diag)
                .map(|(x, d)| {
                    assert!(x % d == 0, "vector outside the subgroup lattice");
                    x / d
                })
                .collect()
        };

        let t_cols: Vec<Vec<i128>> = t_gens
            .iter()
            .map(col)
            .chain(relation_cols.iter().cloned())
            .map(|c| to_basis(&c))
            .collect();
        let t_mat = columns_to_matrix(&t_cols, p);
        let snf2 = smith_normal_form(&t_mat);

        let mut kept = Vec::new();
        let mut lifts = Vec::new();
        for (j, &d) in snf2.diag.iter().enumerate().take(p) {
            if d > 1 {
                kept.push((j, d as u64));
                // generator in basis coords: column j of left_inv; ambient: basis · that
                let coeffs: Vec<i128> = (0..p).map(|r| snf2.left_inv[r][j]).collect();
                let amb: Vec<i128> = (0..p)
                    .map(|r| {
                        (0..p)
                            .map(|k| snf1.left_inv[r][k] * basis_diag[k] * coeffs[k])
                            .sum()
                    })
                    .collect();
                lifts.push(ambient.reduce(&amb));
            }
        }
        let group = FinAbGroup::from_chain(kept.iter().map(|&(_, d)| d));
        Quotient {
            ambient: ambient.clone(),
            group,
            lifts,
            basis_diag,
            basis_left,
            second_left: snf2.left,
            kept,
        }
    }

    /// Image of an element of `S` in the quotient.
    pub fn project(&self, g: &GroupElement) -> GroupElement {
        let v: Vec<i128> = g.coords.iter().map(|&c| i128::from(c)).collect();
        let lv = mat_vec(&self.basis_left, &v);
        let c: Vec<i128> = lv
            .iter()
            .zip(&self.basis_diag)
            .map(|(x, d)| {
                assert!(x % d == 0, "element {g} is not in the numerator subgroup");
                x / d
            })
            .collect();
        let u = mat_vec(&self.second_left, &c);
        GroupElement::new(
            self.kept
                .iter()
                .map(|&(j, d)| u[j].rem_euclid(i128::from(d)) as u64)
                .collect(),
        )
    }

    /// A representative in `S` of a quotient element.
    pub fn lift(&self, q: &GroupElement) -> GroupElement {
        self.lifts
            .iter()
            .zip(&q.coords)
            .fold(self.ambient.zero(), |acc, (l, &c)| {
                self.ambient.add(&acc, &self.ambient.scale(l, c as i64))
            })
    }
}

fn columns_to_matrix(cols: &[Vec<i128>], rows: usize) -> IntMatrix {
    (0..rows)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(d: &[u64]) -> FinAbGroup {
        FinAbGroup::new(d.to_vec()).unwrap()
    }

    fn el(c: &[u64]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    // repeated addition until zero
    fn brute_order(k: &FinAbGroup, g: &GroupElement) -> u64 {
        let mut acc = g.clone();
        let mut m = 1;
        while !acc.is_zero() {
            acc = k.add(&acc, g);
            m += 1;
        }
        m
    }

    #[test]
    fn rejects_bad_divisors() {
        assert!(FinAbGroup::new(vec![2, 3]).is_err());
        assert!(FinAbGroup::new(vec![1, 2]).is_err());
        assert!(FinAbGroup::new(vec![2, 4, 8]).is_ok());
    }

    #[test]
    fn element_order_examples() {
        assert_eq!(grp(&[2, 6]).element_order(&el(&[1, 2])).unwrap(), 6);
        assert_eq!(grp(&[4]).element_order(&el(&[0])).unwrap(), 1);
        let k = grp(&[2, 4]);
        assert_eq!(k.element_order(&el(&[1, 1])).unwrap(), 4);
        assert_eq!(brute_order(&k, &el(&[1, 1])), 4);
        assert!(matches!(
            k.element_order(&el(&[2, 1])),
            Err(ThetaError::MalformedElement { .. })
        ));
    }

    #[test]
    fn element_order_matches_brute_force() {
        for d in [&[2, 6, 12][..], &[3, 9], &[4, 8, 8], &[10, 20]] {
            let k = grp(d);
            for g in k.elements() {
                assert_eq!(k.element_order(&g).unwrap(), brute_order(&k, &g), "{g}");
            }
        }
    }

    #[test]
    fn mul_by_n_examples() {
        let k = grp(&[4]);
        let m = k.mul_by_n(2);
        assert_eq!(m.kernel, vec![el(&[0]), el(&[2])]);
        assert_eq!(m.image, vec![el(&[0]), el(&[2])]);
        let m = k.mul_by_n(1);
        assert_eq!(m.kernel, vec![el(&[0])]);
        assert_eq!(m.image.len(), 4);
        let m = grp(&[2, 4]).mul_by_n(2);
        assert_eq!(m.image.len(), 2);
        assert_eq!(m.image_order_formula(), 2);
        let m = grp(&[2, 4]).mul_by_n(0);
        assert_eq!(m.kernel.len(), 8);
        assert_eq!(m.image, vec![el(&[0, 0])]);
    }

    #[test]
    fn mul_by_n_order_law_exhaustive() {
        for d in [&[2][..], &[6], &[2, 4], &[3, 9], &[2, 2, 4], &[4, 12], &[5, 10, 20]] {
            let k = grp(d);
            for n in 0..=2 * k.exponent() as i64 {
                let m = k.mul_by_n(n);
                assert_eq!(m.image.len() as u64 * m.kernel.len() as u64, k.order());
                assert_eq!(m.image.len() as u64, m.image_order_formula());
                // kernel enumeration agrees with brute force
                let brute: Vec<_> = k.elements().filter(|g| k.scale(g, n).is_zero()).collect();
                assert_eq!(brute, m.kernel);
                for w in &m.kernel {
                    let c = m.kernel_coords(w).unwrap();
                    let back = m
                        .kernel_generators()
                        .iter()
                        .zip(&c.coords)
                        .fold(k.zero(), |acc, (g, &x)| k.add(&acc, &k.scale(g, x as i64)));
                    assert_eq!(&back, w);
                }
            }
        }
    }

    #[test]
    fn dual_character_examples() {
        assert_eq!(grp(&[2]).dual_character(&el(&[1]), &el(&[1])), QmodZ::new(1, 2));
        assert_eq!(grp(&[4]).dual_character(&el(&[0]), &el(&[1])), QmodZ::ZERO);
        assert_eq!(
            grp(&[2, 4]).dual_character(&el(&[1, 2]), &el(&[1, 1])),
            QmodZ::ZERO
        );
    }

    #[test]
    fn dual_character_is_injective() {
        for d in [&[2][..], &[2, 4], &[3, 3], &[6], &[2, 2, 2]] {
            let k = grp(d);
            let mut seen = std::collections::HashSet::new();
            for y in k.elements() {
                let row: Vec<QmodZ> = k.elements().map(|x| k.dual_character(&y, &x)).collect();
                assert!(seen.insert(row), "two elements give the same character");
            }
        }
    }

    #[test]
    fn subgroup_generation_and_decomposition() {
        let k = grp(&[2, 4]);
        let h = Subgroup::generated_by(&k, vec![el(&[1, 2]), el(&[0, 2])]).unwrap();
        assert_eq!(h.order(), 4);
        let (g, basis) = h.cyclic_decomposition();
        assert_eq!(g.divisors(), &[2, 2]);
        let span = Subgroup::generated_by(&k, basis).unwrap();
        assert_eq!(span.elements, h.elements);

        let k = grp(&[6]);
        let (g, _) = Subgroup::whole(&k).cyclic_decomposition();
        assert_eq!(g.divisors(), &[6]);
    }

    #[test]
    fn quotient_projects_consistently() {
        let k = grp(&[4, 4]);
        let s = Subgroup::from_predicate(&k, |g| g.coords[1] % 2 == 0);
        let t = Subgroup::generated_by(&k, vec![el(&[2, 0])]).unwrap();
        let q = Quotient::new(&k, &s.gens, &t.gens);
        assert_eq!(q.group.order(), 4);
        assert_eq!(q.group.divisors(), &[2, 2]);
        for a in &s.elements {
            for b in &s.elements {
                let lhs = q.project(&k.add(a, b));
                let rhs = q.group.add(&q.project(a), &q.project(b));
                assert_eq!(lhs, rhs);
            }
            let back = q.lift(&q.project(a));
            assert!(t.contains(&k.sub(a, &back)));
        }
        for tt in &t.elements {
            assert!(q.project(tt).is_zero());
        }
    }
}
