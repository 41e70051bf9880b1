//! Randomized and exhaustive verification suites. Each check records its
//! outcome and, on failure, the offending input.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{FinAbGroup, GroupElement, Subgroup};
use crate::adelic::{
    adelic_pairing, in_supp, injectivity_witness, level_theta_group, ns_to_h2, pullback,
    random_form, random_matrix, random_point, supp, weil_relation_check, AdelePoint, NSForm,
    TorsionModel,
};
use crate::error::{Result, ThetaError};
use crate::reps::dense::{class_inner_product, conjugated_sum, is_irreducible};
use crate::reps::monomial::coset_rep;
use crate::reps::{
    classify_irreps, count_irreps, decompose_weight_module, gprime_class_count, induce,
    DenseRep, HeisenbergGroup, KernelCharacter,
};
use crate::roots::QmodZ;
use crate::skew::{maximal_isotropic, symplectic_decompose, SkewForm};
use crate::theta::{
    descend, equivalence_witness, extensions_equivalent, lift_level_subgroup, normal_form,
    Cocycle, ThetaGroup,
};

/// The types on which the representation-theoretic suites run.
pub const SMALL_TYPES: &[&[u64]] = &[&[2], &[3], &[4], &[6], &[2, 2], &[2, 4]];

pub const SUITES: &[&str] = &[
    "counting",
    "gprime",
    "irreducibility",
    "induction",
    "decomposition",
    "structure",
    "descent",
    "cocycle",
    "adelic",
    "supp",
    "weil",
    "unique",
];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.into(),
            seed,
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Runs one check; an error counts as a failure with its message.
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let (passed, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    fn merge(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{}: {passed}/{} checks passed", self.suite, self.checks.len())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random cases per randomized property.
    pub cases: usize,
    /// Cap on enumerated group orders.
    pub size_cap: u64,
    pub level_bound: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            cases: 200,
            size_cap: 4096,
            level_bound: 48,
        }
    }
}

fn rng_for(seed: u64, suite: &str) -> ChaCha8Rng {
    let salt = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
    });
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

fn heis(ty: &[u64]) -> Result<HeisenbergGroup> {
    HeisenbergGroup::of_type(ty)
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let s = cfg.seed;
    Ok(match name {
        "counting" => counting_suite(SMALL_TYPES),
        "gprime" => gprime_suite(&[&[2], &[3], &[2, 2]], cfg.size_cap),
        "irreducibility" => irreducibility_suite(SMALL_TYPES, 3),
        "induction" => induction_suite(SMALL_TYPES),
        "decomposition" => decomposition_suite(SMALL_TYPES, cfg.cases.min(50), s),
        "structure" => structure_suite(cfg.cases.min(100), s),
        "descent" => descent_suite(cfg.cases.min(100), s),
        "cocycle" => cocycle_suite(cfg.cases, s),
        "adelic" => adelic_suite(cfg.cases, s),
        "supp" => supp_suite(cfg.cases, cfg.level_bound, s),
        "weil" => weil_suite(cfg.cases, s),
        "unique" => unique_suite(SMALL_TYPES),
        _ => {
            return Err(ThetaError::InvalidArgument(format!(
                "unknown suite {name:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    })
}

fn type_label(ty: &[u64]) -> String {
    format!(
        "({})",
        ty.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    )
}

/// Exhaustive classification of all `W_{y,χ}` for every weight `0..=d_p`.
pub fn counting_suite(types: &[&[u64]]) -> SuiteReport {
    let mut r = SuiteReport::new("counting", 0);
    for &ty in types {
        let dp = *ty.last().expect("nonempty type");
        for n in 0..=dp as i64 {
            r.run(format!("type {} weight {n}", type_label(ty)), || {
                let c = classify_irreps(&heis(ty)?, n)?;
                let (count, dim) = c.formula;
                Ok((
                    c.matches_formula(),
                    format!(
                        "{} classes (∏ gcd(n,d_i)² = {count}), dims {:?} (D_n = {dim})",
                        c.count(),
                        c.dims.iter().collect::<BTreeSet<_>>()
                    ),
                ))
            });
        }
    }
    r
}

/// Weight 1 has a single irreducible, of dimension `√|K|`.
pub fn unique_suite(types: &[&[u64]]) -> SuiteReport {
    let mut r = SuiteReport::new("unique", 0);
    for &ty in types {
        r.run(format!("type {} weight 1", type_label(ty)), || {
            let h = heis(ty)?;
            let c = classify_irreps(&h, 1)?;
            let k = h.ty().order() * h.ty().order();
            let ok = c.count() == 1 && c.dims.iter().all(|&d| (d as u64).pow(2) == k);
            Ok((ok, format!("{} class(es), dims {:?}, |K| = {k}", c.count(), c.dims)))
        });
    }
    r
}

pub fn gprime_suite(types: &[&[u64]], cap: u64) -> SuiteReport {
    let mut r = SuiteReport::new("gprime", 0);
    for &ty in types {
        r.run(format!("type {}", type_label(ty)), || {
            let c = gprime_class_count(&FinAbGroup::new(ty.to_vec())?, cap)?;
            Ok((
                c.order == c.order_formula && c.classes == c.class_formula,
                format!(
                    "|G′| = {} (d_p·(∏d_i)² = {}), {} classes (Σ_r ∏ gcd(r,d_i)² = {})",
                    c.order, c.order_formula, c.classes, c.class_formula
                ),
            ))
        });
    }
    r
}

fn one() -> BigRational {
    BigRational::from_integer(BigInt::from(1))
}

/// Norms of the class representatives are 1, of `k`-fold sums `k²`, and
/// distinct classes are orthogonal.
pub fn irreducibility_suite(types: &[&[u64]], max_mult: i64) -> SuiteReport {
    let mut r = SuiteReport::new("irreducibility", 0);
    for &ty in types {
        let dp = *ty.last().expect("nonempty type");
        for n in 0..=dp as i64 {
            r.run(format!("type {} weight {n}", type_label(ty)), || {
                let h = heis(ty)?;
                let gp = h.gprime();
                let c = classify_irreps(&h, n)?;
                let reps = c
                    .classes
                    .iter()
                    .map(|(y, chi, _)| crate::reps::build_irrep_canonical(&h, n, y, chi))
                    .collect::<Result<Vec<_>>>()?;
                let chars: Vec<_> = reps.iter().map(|w| w.character(&gp)).collect();
                for (i, ci) in chars.iter().enumerate() {
                    if ci.norm()? != one() {
                        return Ok((false, format!("class {i} has norm {}", ci.norm()?)));
                    }
                    let mut sum = ci.clone();
                    for k in 2..=max_mult {
                        sum = sum.sum(ci);
                        let want = BigRational::from_integer(BigInt::from(k * k));
                        if sum.norm()? != want {
                            return Ok((false, format!("{k}-fold sum of class {i} has norm {}", sum.norm()?)));
                        }
                    }
                    for (j, cj) in chars.iter().enumerate().skip(i + 1) {
                        let ip = ci.inner_product(cj)?;
                        if ip != BigRational::from_integer(BigInt::from(0)) {
                            return Ok((false, format!("classes {i}, {j} have inner product {ip}")));
                        }
                    }
                }
                // the same norms through dense matrices and cyclotomic traces
                let field = DenseRep::default_field(&h);
                let first = DenseRep::from_monomial(&reps[0], &field)?;
                let mut parts = vec![&first];
                for k in 1..=max_mult {
                    let sum = DenseRep::direct_sum(&parts)?;
                    let rep = is_irreducible(&sum)?;
                    let want = BigRational::from_integer(BigInt::from(k * k));
                    if rep.norm != want {
                        return Ok((false, format!("dense {k}-fold sum has norm {}", rep.norm)));
                    }
                    parts.push(&first);
                }
                Ok((
                    true,
                    format!(
                        "{} classes: norms 1, k-fold norms k² for k ≤ {max_mult}, cross products 0",
                        chars.len()
                    ),
                ))
            });
        }
    }
    r
}

/// Every class is induced from `G(ker π_n)`, with a verified intertwiner and
/// equal characters.
pub fn induction_suite(types: &[&[u64]]) -> SuiteReport {
    let mut r = SuiteReport::new("induction", 0);
    for &ty in types {
        let dp = *ty.last().expect("nonempty type");
        for n in 0..=dp as i64 {
            r.run(format!("type {} weight {n}", type_label(ty)), || {
                let h = heis(ty)?;
                let gp = h.gprime();
                let pi = h.ty().mul_by_n(n);
                let chis = KernelCharacter::all(&pi);
                let mut done = 0;
                for y in h.ty().elements().filter(|y| coset_rep(&pi, y) == *y) {
                    for chi in &chis {
                        let ind = induce(&h, n, &y, chi)?;
                        let target = DenseRep::from_monomial(&ind.target, ind.rep.field())?;
                        let a = ind.rep.character(&gp)?;
                        let b = target.character(&gp)?;
                        if a != b || ind.rep.dim() != ind.target.dim() {
                            return Ok((false, format!("characters differ at y = {y}")));
                        }
                        if class_inner_product(&a, &b)? != one() {
                            return Ok((false, format!("induced module at y = {y} is reducible")));
                        }
                        done += 1;
                    }
                }
                let want = count_irreps(h.ty(), n).0;
                Ok((
                    done as u64 == want,
                    format!("{done} inductions (expected {want}), intertwiners verified on G′"),
                ))
            });
        }
    }
    r
}

/// Random monomial-conjugated direct sums split back into their labels.
pub fn decomposition_suite(types: &[&[u64]], trials: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("decomposition", seed);
    let mut rng = rng_for(seed, "decomposition");
    for &ty in types {
        let h = match heis(ty) {
            Ok(h) => h,
            Err(e) => {
                r.run(type_label(ty), || Err(e));
                continue;
            }
        };
        let dp = *ty.last().expect("nonempty type") as i64;
        let elems: Vec<GroupElement> = h.ty().elements().collect();
        for t in 0..trials {
            let n = rng.gen_range(0..=dp);
            let pi = h.ty().mul_by_n(n);
            let chis = KernelCharacter::all(&pi);
            let k = rng.gen_range(1..=3);
            let labels: Vec<(GroupElement, KernelCharacter)> = (0..k)
                .map(|_| {
                    (
                        elems.choose(&mut rng).expect("nonempty").clone(),
                        chis.choose(&mut rng).expect("nonempty").clone(),
                    )
                })
                .collect();
            let sub_seed: u64 = rng.gen();
            r.run(format!("type {} trial {t}", type_label(ty)), || {
                let mut local = ChaCha8Rng::seed_from_u64(sub_seed);
                let v = conjugated_sum(&h, n, &labels, &mut local)?;
                let d = decompose_weight_module(&v)?;
                let mut want: Vec<_> = labels
                    .iter()
                    .map(|(y, chi)| (coset_rep(&pi, y), chi.clone()))
                    .collect();
                want.sort();
                let got = d.labels();
                let show = |l: &[(GroupElement, KernelCharacter)]| {
                    l.iter()
                        .map(|(y, c)| format!("(y={y}, χ={:?})", c.values()))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                Ok((
                    got == want,
                    format!("weight {n}, dim {}: expected {} got {}", v.dim(), show(&want), show(&got)),
                ))
            });
        }
    }
    r
}

/// Types whose standard form has `|K| ≤ 4096`.
const FORM_TYPES: &[&[u64]] = &[
    &[2], &[3], &[4], &[5], &[6], &[8], &[12], &[16], &[2, 2], &[2, 4], &[2, 6], &[3, 3],
    &[4, 4], &[2, 8], &[3, 6], &[2, 2, 2], &[2, 2, 4], &[2, 2, 2, 2], &[2, 4, 4], &[4, 8],
];

/// A random automorphism of `K`, as images of the standard generators:
/// a product of unit scalings and transvections `e_i ↦ e_i + c·e_j`.
pub fn random_automorphism<R: Rng>(k: &FinAbGroup, steps: usize, rng: &mut R) -> Vec<GroupElement> {
    let d = k.divisors().to_vec();
    let p = d.len();
    // images of e_i as integer rows
    let mut rows: Vec<Vec<i64>> = (0..p)
        .map(|i| (0..p).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..p);
        if p > 1 && rng.gen_bool(0.8) {
            let j = (i + rng.gen_range(1..p)) % p;
            // c·e_j must have order dividing d_i
            let step = d[j] / num_integer::gcd(d[i], d[j]);
            let c = (step * rng.gen_range(0..d[j])) as i64;
            let rj = rows[j].clone();
            for (a, b) in rows[i].iter_mut().zip(&rj) {
                *a += c * b;
            }
        } else {
            let units: Vec<i64> = (1..d[i] as i64)
                .filter(|&u| num_integer::gcd(u, d[i] as i64) == 1)
                .collect();
            let u = *units.choose(rng).unwrap_or(&1);
            for a in rows[i].iter_mut() {
                *a *= u;
            }
        }
    }
    rows.iter()
        .map(|row| k.reduce(&row.iter().map(|&c| i128::from(c)).collect::<Vec<_>>()))
        .collect()
}

/// The standard form of `ty`, moved by a random automorphism.
pub fn random_nondegenerate_form<R: Rng>(ty: &FinAbGroup, rng: &mut R) -> Result<SkewForm> {
    let std = SkewForm::standard(ty);
    let base = std.base().clone();
    let images = random_automorphism(&base, 4 * base.rank() + 4, rng);
    std.pullback(base, &images)
}

/// All maximal isotropic subgroups, by breadth-first extension of isotropic
/// subgroups one element at a time. Subgroups are bitsets over element
/// indices.
pub fn maximal_isotropic_subgroups(form: &SkewForm) -> Vec<Vec<usize>> {
    let k = form.base();
    let n = k.order() as usize;
    let elems: Vec<GroupElement> = k.elements().collect();
    let add: Vec<Vec<usize>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| k.index_of(&k.add(a, b))).collect())
        .collect();
    let orth: Vec<Vec<bool>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| form.eval(a, b).is_zero()).collect())
        .collect();
    let words = n.div_ceil(64);
    let to_bits = |s: &[usize]| {
        let mut b = vec![0u64; words];
        for &i in s {
            b[i / 64] |= 1 << (i % 64);
        }
        b
    };
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
    seen.insert(to_bits(&[0]));
    let mut maximal = Vec::new();
    while let Some(h) = frontier.pop() {
        let mut member = vec![false; n];
        for &i in &h {
            member[i] = true;
        }
        let mut extended = false;
        for x in 0..n {
            if member[x] || !h.iter().all(|&a| orth[a][x]) {
                continue;
            }
            extended = true;
            // ⟨H, x⟩ = ∪_j (H + j·x)
            let mut sub = h.clone();
            let mut inside = member.clone();
            let mut m = x;
            while !inside[m] {
                for &a in &h {
                    let s = add[a][m];
                    if !inside[s] {
                        inside[s] = true;
                        sub.push(s);
                    }
                }
                m = add[m][x];
            }
            sub.sort_unstable();
            let bits = to_bits(&sub);
            if seen.insert(bits) {
                frontier.push(sub);
            }
        }
        if !extended {
            maximal.push(h);
        }
    }
    maximal.sort();
    maximal
}

/// Reconstruction identity of symplectic decompositions, the order law
/// `|H|² = |K|` for every maximal isotropic subgroup, and the descent order
/// law.
pub fn structure_suite(forms: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("structure", seed);
    let mut rng = rng_for(seed, "structure");
    for t in 0..forms {
        let ty = FORM_TYPES[t % FORM_TYPES.len()];
        let sub_seed: u64 = rng.gen();
        r.run(format!("decompose form {t} of type {}", type_label(ty)), || {
            let mut local = ChaCha8Rng::seed_from_u64(sub_seed);
            let tyg = FinAbGroup::new(ty.to_vec())?;
            let form = random_nondegenerate_form(&tyg, &mut local)?;
            let dec = symplectic_decompose(&form)?;
            dec.verify()?;
            if dec.ty != ty {
                return Ok((false, format!("recovered type {:?}", dec.ty)));
            }
            let k = form.base();
            let tg = dec.type_group();
            for _ in 0..64 {
                let u = k.element_at(local.gen_range(0..k.order() as usize));
                let v = k.element_at(local.gen_range(0..k.order() as usize));
                let (au, bu) = dec.coords(&u);
                let (av, bv) = dec.coords(&v);
                let rebuilt = tg.dual_character(&bv, &au) - tg.dual_character(&bu, &av);
                if rebuilt != form.eval(&u, &v) {
                    return Ok((false, format!("[{u}, {v}] = {} but coordinates give {rebuilt}", form.eval(&u, &v))));
                }
            }
            Ok((true, format!("|K| = {}, type recovered, K = K₁ ⊕ K₂ verified", k.order())))
        });
    }
    for &ty in FORM_TYPES {
        let tyg = match FinAbGroup::new(ty.to_vec()) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if tyg.order() * tyg.order() > 256 {
            continue;
        }
        let sub_seed: u64 = rng.gen();
        r.run(format!("maximal isotropic, type {}", type_label(ty)), || {
            let mut local = ChaCha8Rng::seed_from_u64(sub_seed);
            let form = random_nondegenerate_form(&tyg, &mut local)?;
            let k = form.base().order();
            let all = maximal_isotropic_subgroups(&form);
            if let Some(bad) = all.iter().find(|h| (h.len() as u64).pow(2) != k) {
                return Ok((false, format!("maximal isotropic subgroup of order {} in |K| = {k}", bad.len())));
            }
            let h = maximal_isotropic(&form)?;
            let idx: Vec<usize> = h.elements.iter().map(|x| form.base().index_of(x)).collect();
            let mut idx = idx;
            idx.sort_unstable();
            if all.binary_search(&idx).is_err() {
                return Ok((false, "decomposition half is not maximal isotropic".into()));
            }
            Ok((true, format!("{} maximal isotropic subgroups, all of order √{k}", all.len())))
        });
    }
    r.merge(descent_suite(forms, seed));
    r
}

/// A random isotropic subgroup generated by at most two elements.
fn random_isotropic<R: Rng>(form: &SkewForm, rng: &mut R) -> Result<Subgroup> {
    let k = form.base();
    let n = k.order() as usize;
    let x = k.element_at(rng.gen_range(0..n));
    let perp: Vec<GroupElement> = k.elements().filter(|y| form.eval(&x, y).is_zero()).collect();
    let mut gens = vec![x];
    if rng.gen_bool(0.5) {
        gens.push(perp.choose(rng).expect("x ⊥ x").clone());
    }
    Subgroup::generated_by(k, gens)
}

fn random_cochain<R: Rng>(k: &FinAbGroup, rng: &mut R) -> Vec<QmodZ> {
    let mut c: Vec<QmodZ> = (0..k.order())
        .map(|_| {
            let d = rng.gen_range(1..=12);
            QmodZ::new(rng.gen_range(0..d), d)
        })
        .collect();
    c[0] = QmodZ::ZERO;
    c
}

/// `descend` on random isotropic level subgroups of twisted standard
/// groups: `|K′^⊥/K′| · |K′|² = |K|` and the result is nondegenerate.
pub fn descent_suite(cases: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("descent", seed);
    let mut rng = rng_for(seed, "descent");
    r.run("standard (2) over ⟨(1,0)⟩", || {
        let ty = FinAbGroup::new(vec![2])?;
        let g = ThetaGroup::new(Cocycle::standard(&ty));
        let kp = Subgroup::generated_by(g.base(), vec![GroupElement::new(vec![1, 0])])?;
        let d = descend(&g, &lift_level_subgroup(&g, &kp)?)?;
        Ok((d.group.base().order() == 1, format!("base′ = {}", d.group.base())))
    });
    r.run("standard (4) over ⟨(2,0)⟩", || {
        let ty = FinAbGroup::new(vec![4])?;
        let g = ThetaGroup::new(Cocycle::standard(&ty));
        let kp = Subgroup::generated_by(g.base(), vec![GroupElement::new(vec![2, 0])])?;
        let d = descend(&g, &lift_level_subgroup(&g, &kp)?)?;
        let dec = symplectic_decompose(&d.group.commutator_form()?)?;
        Ok((
            d.group.base().order() == 4 && dec.ty == vec![2],
            format!("base′ = {}, type {:?}", d.group.base(), dec.ty),
        ))
    });
    let small: Vec<&[u64]> = FORM_TYPES
        .iter()
        .copied()
        .filter(|t| t.iter().product::<u64>().pow(2) <= 256)
        .collect();
    for t in 0..cases {
        let ty = small[t % small.len()];
        let sub_seed: u64 = rng.gen();
        r.run(format!("descend case {t}, type {}", type_label(ty)), || {
            let mut local = ChaCha8Rng::seed_from_u64(sub_seed);
            let tyg = FinAbGroup::new(ty.to_vec())?;
            let base = tyg.interleave_square();
            let c = random_cochain(&base, &mut local);
            let g = ThetaGroup::new(Cocycle::standard(&tyg).twisted(&c)?);
            let form = g.commutator_form()?;
            let kp = random_isotropic(&form, &mut local)?;
            let d = descend(&g, &lift_level_subgroup(&g, &kp)?)?;
            let q = d.group.base().order();
            let law = q * kp.order() * kp.order() == base.order();
            let nondeg = d.group.commutator_form()?.is_nondegenerate();
            Ok((
                law && nondeg,
                format!(
                    "|K| = {}, |K′| = {}, |K′^⊥/K′| = {q}, nondegenerate: {nondeg}",
                    base.order(),
                    kp.order()
                ),
            ))
        });
    }
    r
}

/// `b(x, y) = Σ B_ij x_i y_j / gcd(d_i, d_j)`.
fn bilinear_cocycle(k: &FinAbGroup, b: &[Vec<i64>]) -> Result<Cocycle> {
    let d = k.divisors().to_vec();
    Cocycle::from_fn(k.clone(), |x, y| {
        let mut acc = QmodZ::ZERO;
        for i in 0..d.len() {
            for j in 0..d.len() {
                let g = num_integer::gcd(d[i], d[j]) as i64;
                acc += QmodZ::new(b[i][j] * (x.coords[i] * y.coords[j]) as i64, g);
            }
        }
        acc
    })
}

/// Equivalence of extensions against equality of commutator forms, with
/// every witness checked as an explicit coboundary.
pub fn cocycle_suite(pairs: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("cocycle", seed);
    let mut rng = rng_for(seed, "cocycle");
    let bases: [&[u64]; 3] = [&[2, 2], &[3, 3], &[2, 4]];
    let mut outcomes = [0usize; 2];
    for t in 0..pairs {
        let ty = bases[t % bases.len()];
        let sub_seed: u64 = rng.gen();
        let mut verdict = None;
        r.run(format!("pair {t} over {}", type_label(ty)), || {
            let mut local = ChaCha8Rng::seed_from_u64(sub_seed);
            let k = FinAbGroup::new(ty.to_vec())?;
            let p = ty.len();
            let rand_matrix = |rng: &mut ChaCha8Rng, sym: bool| {
                let mut m = vec![vec![0i64; p]; p];
                for i in 0..p {
                    for j in 0..p {
                        if !sym || j >= i {
                            m[i][j] = rng.gen_range(0..12);
                        } else {
                            m[i][j] = m[j][i];
                        }
                    }
                }
                m
            };
            let b = rand_matrix(&mut local, false);
            let b2 = if local.gen_bool(0.5) {
                let s = rand_matrix(&mut local, true);
                b.iter().zip(&s).map(|(x, y)| x.iter().zip(y).map(|(a, c)| a + c).collect()).collect()
            } else {
                rand_matrix(&mut local, false)
            };
            let f = bilinear_cocycle(&k, &b)?.twisted(&random_cochain(&k, &mut local))?;
            let g = bilinear_cocycle(&k, &b2)?.twisted(&random_cochain(&k, &mut local))?;
            let forms_equal = k
                .elements()
                .all(|x| k.elements().all(|y| f.commutator(&x, &y) == g.commutator(&x, &y)));
            let equivalent = extensions_equivalent(&f, &g)?;
            if let Some(c) = equivalence_witness(&f, &g)? {
                for x in k.elements() {
                    for y in k.elements() {
                        let dc = c[k.index_of(&x)] + c[k.index_of(&y)] - c[k.index_of(&k.add(&x, &y))];
                        if f.eval(&x, &y) - g.eval(&x, &y) != dc {
                            return Ok((false, format!("witness fails at ({x}, {y})")));
                        }
                    }
                }
            }
            verdict = Some(equivalent);
            Ok((
                equivalent == forms_equal,
                format!("equivalent: {equivalent}, equal commutator forms: {forms_equal}"),
            ))
        });
        if let Some(v) = verdict {
            outcomes[usize::from(v)] += 1;
        }
    }
    if pairs >= 10 {
        r.run("both outcomes exercised", || {
            Ok((
                outcomes[0] > 0 && outcomes[1] > 0,
                format!("{} equivalent, {} inequivalent pairs", outcomes[1], outcomes[0]),
            ))
        });
    }
    r.run("normal form of twisted standard groups", || {
        let mut local = rng_for(seed, "normal form");
        for ty in [&[2u64][..], &[3], &[2, 2], &[2, 4]] {
            let tyg = FinAbGroup::new(ty.to_vec())?;
            let c = random_cochain(&tyg.interleave_square(), &mut local);
            let g = ThetaGroup::new(Cocycle::standard(&tyg).twisted(&c)?);
            let nf = normal_form(&g)?;
            if nf.decomposition.ty != ty {
                return Ok((false, format!("normal form of type {:?}", nf.decomposition.ty)));
            }
        }
        Ok((true, "f = f_std + δc verified for 4 types".into()))
    });
    r
}

fn random_model<R: Rng>(rng: &mut R) -> TorsionModel {
    let g = rng.gen_range(1..=3);
    let p = *[0u64, 0, 0, 2, 3, 5].choose(rng).expect("nonempty");
    TorsionModel::new(g, p).expect("valid model")
}

fn q_of(r: &BigRational) -> QmodZ {
    crate::adelic::to_qmodz(r).expect("small denominators")
}

/// Additivity, triviality, functoriality, two-level agreement, bilinearity
/// and the bridge to the finite level groups.
pub fn adelic_suite(cases: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("adelic", seed);
    let mut rng = rng_for(seed, "adelic");
    let mut run_batch = |r: &mut SuiteReport, name: &str, check: &dyn Fn(&mut ChaCha8Rng) -> Result<Option<String>>| {
        let mut failure = None;
        for t in 0..cases {
            let sub_seed: u64 = rng.gen();
            let mut local = ChaCha8Rng::seed_from_u64(sub_seed);
            match check(&mut local) {
                Ok(None) => {}
                Ok(Some(msg)) => {
                    failure = Some(format!("case {t} (seed {sub_seed}): {msg}"));
                    break;
                }
                Err(e) => {
                    failure = Some(format!("case {t} (seed {sub_seed}): error: {e}"));
                    break;
                }
            }
        }
        r.run(name, || {
            Ok(match failure {
                None => (true, format!("{cases} random cases")),
                Some(m) => (false, m),
            })
        });
    };

    run_batch(&mut r, "additivity", &|rng| {
        let m = random_model(rng);
        let (e1, e2) = (random_form(m, 5, rng), random_form(m, 5, rng));
        let (x, y) = (random_point(&m, 12, rng), random_point(&m, 12, rng));
        let sum = ns_to_h2(&e1).add(&ns_to_h2(&e2))?;
        let lhs = sum.pairing(&x, &y)?;
        let rhs = adelic_pairing(&e1, &x, &y)?.value + adelic_pairing(&e2, &x, &y)?.value;
        Ok((lhs != rhs).then(|| format!("E={:?}, E′={:?}, x={x}, y={y}: {lhs} ≠ {rhs}", e1.matrix(), e2.matrix())))
    });
    run_batch(&mut r, "closed form E(v, w) mod 1", &|rng| {
        let m = random_model(rng);
        let e = random_form(m, 5, rng);
        let (x, y) = (random_point(&m, 12, rng), random_point(&m, 12, rng));
        let p = adelic_pairing(&e, &x, &y)?;
        let closed = q_of(&e.eval(&x.v, &y.v));
        Ok((p.value != closed).then(|| format!("x={x}, y={y}: {} vs {closed}", p.value)))
    });
    run_batch(&mut r, "bilinear and alternating", &|rng| {
        let m = random_model(rng);
        let e = random_form(m, 5, rng);
        let (x, x2, y) = (random_point(&m, 8, rng), random_point(&m, 8, rng), random_point(&m, 8, rng));
        let pv = |a: &AdelePoint, b: &AdelePoint| adelic_pairing(&e, a, b).map(|p| p.value);
        let lin = pv(&x.add(&x2), &y)? == pv(&x, &y)? + pv(&x2, &y)?;
        let lin2 = pv(&y, &x.add(&x2))? == pv(&y, &x)? + pv(&y, &x2)?;
        let alt = pv(&x, &x)?.is_zero() && pv(&x, &y)? == -pv(&y, &x)?;
        Ok((!(lin && lin2 && alt)).then(|| format!("x={x}, x′={x2}, y={y}")))
    });
    run_batch(&mut r, "trivial iff E = 0", &|rng| {
        let m = random_model(rng);
        let e = if rng.gen_bool(0.2) { NSForm::zero(m) } else { random_form(m, 5, rng) };
        let class = ns_to_h2(&e);
        match injectivity_witness(&e)? {
            None => {
                if !e.is_zero() {
                    return Ok(Some(format!("no witness for E = {:?}", e.matrix())));
                }
                for _ in 0..5 {
                    let (x, y) = (random_point(&m, 12, rng), random_point(&m, 12, rng));
                    if !class.pairing(&x, &y)?.is_zero() {
                        return Ok(Some(format!("zero form pairs {x}, {y} nontrivially")));
                    }
                }
                Ok(None)
            }
            Some((x, y)) => Ok((e.is_zero() || class.pairing(&x, &y)?.is_zero())
                .then(|| format!("bad witness {x}, {y} for {:?}", e.matrix()))),
        }
    });
    run_batch(&mut r, "class equality", &|rng| {
        let m = random_model(rng);
        let e = random_form(m, 5, rng);
        let d = random_form(m, 5, rng);
        let same = ns_to_h2(&e).same_class(&ns_to_h2(&e.add(&d)?))?;
        Ok((same != d.is_zero()).then(|| format!("E = {:?}, difference {:?}", e.matrix(), d.matrix())))
    });
    run_batch(&mut r, "functoriality", &|rng| {
        let m = random_model(rng);
        let e = random_form(m, 5, rng);
        let g2 = rng.gen_range(1..=3);
        let f = random_matrix(2 * m.g, 2 * g2, 3, rng);
        let pulled = pullback(&f, &e)?;
        let m2 = *pulled.model();
        let (x, y) = (random_point(&m2, 12, rng), random_point(&m2, 12, rng));
        let lhs = adelic_pairing(&pulled, &x, &y)?.value;
        let rhs = adelic_pairing(&e, &x.apply(&f), &y.apply(&f))?.value;
        Ok((lhs != rhs).then(|| format!("F={f:?}, x={x}, y={y}: {lhs} ≠ {rhs}")))
    });
    run_batch(&mut r, "two-level agreement", &|rng| {
        let m = random_model(rng);
        let e = random_form(m, 5, rng);
        let (x, y) = (random_point(&m, 12, rng), random_point(&m, 12, rng));
        let levels: Vec<u64> = (1..=24)
            .filter(|&n| in_supp(&e, &x, n) && in_supp(&e, &y, n))
            .collect();
        let vals: BTreeSet<QmodZ> = levels
            .iter()
            .map(|&n| crate::adelic::level_pairing(&e, &x, &y, n))
            .collect::<Result<_>>()?;
        Ok((vals.len() > 1).then(|| format!("levels {levels:?} give {vals:?}")))
    });
    run_batch(&mut r, "level theta group bridge", &|rng| {
        let m = random_model(rng);
        let e = random_form(m, 5, rng);
        if e.determinant() == BigInt::from(0) {
            return Ok(None);
        }
        let (x, y) = (random_point(&m, 6, rng), random_point(&m, 6, rng));
        let p = adelic_pairing(&e, &x, &y)?;
        let level = match level_theta_group(&e, p.levels.0) {
            Err(ThetaError::SizeExceeded { .. }) => return Ok(None),
            other => other?,
        };
        let cx = level.coords(&x.component(p.levels.0))?;
        let cy = level.coords(&y.component(p.levels.0))?;
        let v = level.form.eval(&cx, &cy);
        level.check_structure(4096)?;
        Ok((v != p.value).then(|| format!("x={x}, y={y}: finite form {v} vs pairing {}", p.value)))
    });
    r
}

/// `n ∈ supp(x)` straight from the definition: `n ∈ I` and `n·Ev` is
/// integral.
fn in_supp_direct(e: &NSForm, x: &AdelePoint, n: u64) -> bool {
    let n_big = BigRational::from_integer(BigInt::from(n));
    e.model().in_levels(n)
        && e.matrix().iter().all(|row| {
            let s: BigRational = row
                .iter()
                .zip(&x.v)
                .map(|(&c, v)| v * BigRational::from_integer(BigInt::from(c)))
                .sum();
            (s * &n_big).is_integer()
        })
}

/// The four support clauses, each checked against the
/// definition of the support.
pub fn supp_suite(cases: usize, bound: u64, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("supp", seed);
    let mut rng = rng_for(seed, "supp");
    let mut fails: [Option<String>; 4] = Default::default();
    for t in 0..cases {
        let m = random_model(&mut rng);
        let e = random_form(m, 5, &mut rng);
        let (x, y) = (random_point(&m, 12, &mut rng), random_point(&m, 12, &mut rng));
        let ord = x.denominator();
        if fails[0].is_none() && !in_supp_direct(&e, &x, ord) {
            fails[0] = Some(format!("case {t}: order {ord} of x₁ not in supp({x})"));
        }
        if fails[1].is_none() {
            if let Ok(s) = supp(&e, &x, bound) {
                let direct: Vec<u64> = (1..=bound).filter(|&n| in_supp_direct(&e, &x, n)).collect();
                if s != direct {
                    fails[1] = Some(format!("case {t}: supp({x}) = {s:?}, definition gives {direct:?}"));
                }
                for &a in &s {
                    if let Some(b) = (2..=bound / a).map(|k| k * a).find(|&b| m.in_levels(b) && !in_supp_direct(&e, &x, b)) {
                        fails[1] = Some(format!("case {t}: {a} ∈ supp({x}) but {b} ∉"));
                        break;
                    }
                }
            }
        }
        let l = num_integer::lcm(ord, y.denominator());
        if fails[2].is_none() && !(in_supp_direct(&e, &x, l) && in_supp_direct(&e, &y, l)) {
            fails[2] = Some(format!("case {t}: lcm {l} not in supp({x}) ∩ supp({y})"));
        }
        let g2 = rng.gen_range(1..=3);
        let f = random_matrix(2 * m.g, 2 * g2, 3, &mut rng);
        if let Ok(pulled) = pullback(&f, &e) {
            let z = random_point(pulled.model(), 12, &mut rng);
            let oz = z.denominator();
            if fails[3].is_none() && !(in_supp_direct(&pulled, &z, oz) && in_supp_direct(&e, &z.apply(&f), oz)) {
                fails[3] = Some(format!("case {t}: {oz} not in supp^(f*L)({z}) ∩ supp^L(f(z))"));
            }
        }
    }
    let names = [
        "(a) order of x₁ lies in the support",
        "(b) supports are closed under multiples",
        "(c) two supports meet",
        "(d) supports meet across a pullback",
    ];
    for (name, fail) in names.iter().zip(fails) {
        r.run(*name, || {
            Ok(match fail {
                None => (true, format!("{cases} random cases")),
                Some(m) => (false, m),
            })
        });
    }
    r
}

/// `ē_n(x, φ_L(y)) = [x, z]_{G(n*L)}` for `nz = y` on random `n`-torsion.
pub fn weil_suite(cases: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("weil", seed);
    let mut rng = rng_for(seed, "weil");
    let mut failure = None;
    for t in 0..cases {
        let m = random_model(&mut rng);
        let e = random_form(m, 5, &mut rng);
        let n = loop {
            let n = rng.gen_range(1..=12);
            if m.in_levels(n) {
                break n;
            }
        };
        let tors = |rng: &mut ChaCha8Rng| {
            AdelePoint::new(
                (0..2 * m.g)
                    .map(|_| BigRational::new(rng.gen_range(0..n as i64).into(), (n as i64).into()))
                    .collect(),
            )
        };
        let (x, y) = (tors(&mut rng), tors(&mut rng));
        match weil_relation_check(&e, n, &x, &y) {
            Ok(c) if c.holds => {}
            Ok(c) => {
                failure = Some(format!("case {t}: n={n}, x={x}, y={y}: {} vs {}", c.via_weil, c.via_commutator));
                break;
            }
            Err(err) => {
                failure = Some(format!("case {t}: {err}"));
                break;
            }
        }
    }
    r.run("random n-torsion pairs", || {
        Ok(match failure {
            None => (true, format!("{cases} random cases")),
            Some(m) => (false, m),
        })
    });
    r.run("principal examples", || {
        let e = NSForm::principal(1);
        let half = AdelePoint::from_fractions(&[(1, 2), (0, 1)]);
        let c2 = weil_relation_check(&e, 2, &half, &AdelePoint::from_fractions(&[(0, 1), (1, 2)]))?;
        let third = AdelePoint::from_fractions(&[(1, 3), (0, 1)]);
        let c3 = weil_relation_check(&e, 3, &third, &AdelePoint::from_fractions(&[(0, 1), (1, 3)]))?;
        let ok = c2.holds && c2.via_weil == QmodZ::new(1, 2) && c3.holds && c3.via_weil == QmodZ::new(1, 3);
        Ok((ok, format!("n=2: {}, n=3: {}", c2.via_weil, c3.via_weil)))
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfs_finds_lagrangians_of_small_forms() {
        let form = SkewForm::standard(&FinAbGroup::new(vec![2]).unwrap());
        // (ℤ/2)² with the hyperbolic form: three lines, all isotropic
        assert_eq!(maximal_isotropic_subgroups(&form).len(), 3);
        let form = SkewForm::standard(&FinAbGroup::new(vec![4]).unwrap());
        let all = maximal_isotropic_subgroups(&form);
        assert!(all.iter().all(|h| h.len() == 4));
        // cyclic ⟨(a,b)⟩ of order 4: 6 of them; plus ⟨(2,0),(0,2)⟩
        assert_eq!(all.len(), 7);
    }

    #[test]
    fn random_automorphisms_are_bijective() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = FinAbGroup::new(vec![2, 4, 4, 8]).unwrap();
        let images = random_automorphism(&k, 30, &mut rng);
        let h = Subgroup::generated_by(&k, images).unwrap();
        assert_eq!(h.order(), k.order());
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &VerifyConfig::default()).is_err());
    }

    #[test]
    fn quick_suites_pass() {
        let cfg = VerifyConfig { cases: 10, ..Default::default() };
        for s in ["gprime", "unique", "weil", "supp"] {
            let rep = run_suite(s, &cfg).unwrap();
            assert!(rep.passed(), "{rep}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }
}
