//! Worked examples for each operation, checked against brute-force oracles
//! written independently of the library code paths.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use theta_core::abelian::{FinAbGroup, GroupElement, Subgroup};
use theta_core::adelic::{
    adelic_pairing, injectivity_witness, level_theta_group, ns_to_h2, pullback, supp,
    weil_relation_check, AdelePoint, NSForm, TorsionModel,
};
use theta_core::reps::monomial::{build_irrep_canonical, isomorphic, KernelCharacter};
use theta_core::reps::{count_irreps, gprime_class_count, HeisenbergGroup};
use theta_core::roots::{cyc_inner_step, CycField, QmodZ};
use theta_core::skew::{maximal_isotropic, symplectic_decompose, SkewForm};
use theta_core::theta::{
    descend, extensions_equivalent, lift_level_subgroup, normal_form, Cocycle, ThetaGroup,
};

fn el(c: &[u64]) -> GroupElement {
    GroupElement::new(c.to_vec())
}

fn grp(d: &[u64]) -> FinAbGroup {
    FinAbGroup::new(d.to_vec()).unwrap()
}

fn q(a: i64, b: i64) -> QmodZ {
    QmodZ::new(a, b)
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Reduces a rational into `[0, 1)`.
fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

fn as_rational(x: QmodZ) -> BigRational {
    rat(x.num(), x.den())
}

// ---- abelian groups ----

fn order_by_addition(k: &FinAbGroup, g: &GroupElement) -> u64 {
    let mut acc = g.clone();
    let mut n = 1;
    while acc != k.zero() {
        acc = k.add(&acc, g);
        n += 1;
    }
    n
}

#[test]
fn element_orders() {
    assert_eq!(grp(&[2, 6]).element_order(&el(&[1, 2])).unwrap(), 6);
    assert_eq!(grp(&[4]).element_order(&el(&[0])).unwrap(), 1);
    let k = grp(&[2, 4]);
    assert_eq!(k.element_order(&el(&[1, 1])).unwrap(), 4);
    for ty in [&[2u64, 4][..], &[3, 6], &[2, 2, 4]] {
        let k = grp(ty);
        for g in k.elements() {
            assert_eq!(k.element_order(&g).unwrap(), order_by_addition(&k, &g), "{g}");
        }
    }
}

#[test]
fn multiplication_maps() {
    let set = |v: &[GroupElement]| v.iter().cloned().collect::<BTreeSet<_>>();
    let k = grp(&[4]);
    let m = k.mul_by_n(2);
    assert_eq!(set(&m.kernel), set(&[el(&[0]), el(&[2])]));
    assert_eq!(set(&m.image), set(&[el(&[0]), el(&[2])]));
    let m = k.mul_by_n(1);
    assert_eq!(m.kernel, vec![el(&[0])]);
    assert_eq!(m.image.len(), 4);
    // |image| = D_n
    assert_eq!(grp(&[2, 4]).mul_by_n(2).image.len(), 2);

    for ty in [&[2u64, 4][..], &[6], &[2, 6]] {
        let k = grp(ty);
        for n in -3..=7 {
            let m = k.mul_by_n(n);
            let image: BTreeSet<_> = k.elements().map(|g| k.scale(&g, n)).collect();
            let kernel: BTreeSet<_> = k.elements().filter(|g| k.scale(g, n) == k.zero()).collect();
            assert_eq!(set(&m.image), image, "image of {n} on {k}");
            assert_eq!(set(&m.kernel), kernel, "kernel of {n} on {k}");
        }
    }
}

#[test]
fn standard_pairing_on_the_type() {
    assert_eq!(grp(&[2]).dual_character(&el(&[1]), &el(&[1])), q(1, 2));
    assert_eq!(grp(&[4]).dual_character(&el(&[0]), &el(&[1])), QmodZ::ZERO);
    assert_eq!(grp(&[2, 4]).dual_character(&el(&[1, 2]), &el(&[1, 1])), QmodZ::ZERO);
}

// ---- roots of unity ----

#[test]
fn qmodz_matches_rational_arithmetic() {
    assert_eq!(q(1, 4) + q(1, 4), q(1, 2));
    assert!((q(1, 2) + q(1, 2)).is_zero());
    assert_eq!(q(1, 6) + q(1, 10), q(4, 15));
    for a in -7..8 {
        for b in 1..9 {
            for c in -5..6 {
                for d in 1..7 {
                    let s = q(a, b) + q(c, d);
                    assert_eq!(as_rational(s), frac(&(rat(a, b) + rat(c, d))));
                    let t = q(a, b) - q(c, d);
                    assert_eq!(as_rational(t), frac(&(rat(a, b) - rat(c, d))));
                }
            }
        }
    }
}

#[test]
fn nth_roots() {
    assert_eq!(q(1, 2).nth_root(2).unwrap(), q(1, 4));
    assert!(QmodZ::ZERO.nth_root(5).unwrap().is_zero());
    let r = q(2, 3).nth_root(3).unwrap();
    assert_eq!(r, q(2, 9));
    assert_eq!(r.scale(3), q(2, 3));
}

#[test]
fn cyclotomic_inner_steps() {
    let f3 = CycField::new(3);
    let z = f3.root(q(1, 3)).unwrap();
    assert_eq!(cyc_inner_step(&f3.zero(), &z, &z), f3.one());
    let z2 = f3.root(q(2, 3)).unwrap();
    assert!((&(&f3.one() + &z) + &z2).is_zero());
    let f4 = CycField::new(4);
    let a = &f4.one() + &f4.root(q(1, 4)).unwrap();
    let two = &f4.one() + &f4.one();
    assert_eq!(cyc_inner_step(&f4.zero(), &a, &a), two);
}

// ---- skew forms ----

fn hyperbolic(d: u64) -> SkewForm {
    SkewForm::standard(&grp(&[d]))
}

/// `Σ_{i,j} x_i y_j b_ij` straight from the Gram matrix.
fn eval_by_expansion(form: &SkewForm, x: &GroupElement, y: &GroupElement) -> QmodZ {
    let mut acc = QmodZ::ZERO;
    for (i, row) in form.gram().iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            acc += b.scale((x.coords[i] * y.coords[j]) as i64);
        }
    }
    acc
}

fn form24() -> SkewForm {
    SkewForm::from_upper(grp(&[2, 4]), |_, _| q(1, 2)).unwrap()
}

#[test]
fn skew_form_values() {
    let h = hyperbolic(2);
    assert_eq!(h.eval(&el(&[1, 0]), &el(&[0, 1])), q(1, 2));
    let f = form24();
    assert_eq!(f.eval(&el(&[1, 1]), &el(&[1, 2])), q(1, 2));
    for form in [h, f, SkewForm::standard(&grp(&[2, 6]))] {
        let k = form.base().clone();
        for x in k.elements() {
            assert!(form.eval(&x, &k.zero()).is_zero());
            for y in k.elements() {
                assert_eq!(form.eval(&x, &y), eval_by_expansion(&form, &x, &y));
            }
        }
    }
}

fn radical_by_enumeration(form: &SkewForm) -> Vec<GroupElement> {
    let k = form.base();
    k.elements()
        .filter(|x| k.elements().all(|y| form.eval(x, &y).is_zero()))
        .collect()
}

#[test]
fn radicals() {
    let z = SkewForm::zero(grp(&[2, 2]));
    assert_eq!(z.radical().order(), 4);
    assert_eq!(hyperbolic(2).radical().order(), 1);
    let f = form24();
    assert_eq!(f.radical().elements, vec![el(&[0, 0]), el(&[0, 2])]);
    for form in [z, f, SkewForm::from_upper(grp(&[2, 4, 4]), |i, _| if i == 0 { q(1, 2) } else { q(1, 4) }).unwrap()] {
        assert_eq!(form.radical().elements, radical_by_enumeration(&form));
    }
}

/// The Gram matrix of the decomposition's generators is the standard one.
fn check_symplectic_basis(form: &SkewForm, ty: &[u64]) {
    let dec = symplectic_decompose(form).unwrap();
    assert_eq!(dec.ty, ty);
    let k = form.base();
    for (i, &d) in ty.iter().enumerate() {
        assert_eq!(k.element_order(&dec.k1_gens[i]).unwrap(), d);
        assert_eq!(k.element_order(&dec.k2_gens[i]).unwrap(), d);
        for j in 0..ty.len() {
            let want = if i == j { q(1, d as i64) } else { QmodZ::ZERO };
            assert_eq!(form.eval(&dec.k1_gens[i], &dec.k2_gens[j]), want);
            assert!(form.eval(&dec.k1_gens[i], &dec.k1_gens[j]).is_zero());
            assert!(form.eval(&dec.k2_gens[i], &dec.k2_gens[j]).is_zero());
        }
    }
    // the generators span K
    let mut gens = dec.k1_gens.clone();
    gens.extend(dec.k2_gens.clone());
    assert_eq!(Subgroup::generated_by(k, gens).unwrap().order(), k.order());
}

#[test]
fn symplectic_bases() {
    let dec = symplectic_decompose(&hyperbolic(2)).unwrap();
    assert_eq!(dec.k1_gens, vec![el(&[1, 0])]);
    assert_eq!(dec.k2_gens, vec![el(&[0, 1])]);
    // hyperbolic (2) ⊕ hyperbolic (4), block Gram on (2,2,4,4)
    let block = SkewForm::from_upper(grp(&[2, 2, 4, 4]), |i, j| match (i, j) {
        (0, 1) => q(1, 2),
        (2, 3) => q(1, 4),
        _ => QmodZ::ZERO,
    })
    .unwrap();
    check_symplectic_basis(&block, &[2, 4]);
    check_symplectic_basis(&hyperbolic(3), &[3]);
    let dec = symplectic_decompose(&hyperbolic(3)).unwrap();
    assert_eq!(dec.form.eval(&dec.k1_gens[0], &dec.k2_gens[0]), q(1, 3));
}

/// No element outside `h` extends it to a larger isotropic subgroup.
fn is_maximal_isotropic(form: &SkewForm, h: &Subgroup) -> bool {
    let k = form.base();
    let iso = h.elements.iter().all(|a| h.elements.iter().all(|b| form.eval(a, b).is_zero()));
    iso && k
        .elements()
        .filter(|x| !h.contains(x))
        .all(|x| h.elements.iter().any(|a| !form.eval(a, &x).is_zero()))
}

#[test]
fn maximal_isotropic_subgroups() {
    let h = maximal_isotropic(&hyperbolic(2)).unwrap();
    assert_eq!(h.order(), 2);
    assert!(is_maximal_isotropic(&hyperbolic(2), &h));
    let std24 = SkewForm::standard(&grp(&[2, 4]));
    let h = maximal_isotropic(&std24).unwrap();
    assert_eq!(h.order(), 8);
    assert!(is_maximal_isotropic(&std24, &h));
    // every line in (ℤ/3)² is isotropic and maximal
    let f = hyperbolic(3);
    let h = maximal_isotropic(&f).unwrap();
    assert_eq!(h.order(), 3);
    let lines: BTreeSet<Vec<GroupElement>> = f
        .base()
        .elements()
        .filter(|x| *x != f.base().zero())
        .map(|x| Subgroup::generated_by(f.base(), vec![x]).unwrap().elements)
        .collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.contains(&h.elements));
}

// ---- theta groups ----

#[test]
fn standard_theta_group_products() {
    let g = ThetaGroup::new(Cocycle::standard(&grp(&[2])));
    let (a, b) = (g.lift(&el(&[1, 0])), g.lift(&el(&[0, 1])));
    let comm = g.mul(&g.mul(&a, &b), &g.mul(&g.inv(&a), &g.inv(&b)));
    assert_eq!(comm, g.scalar(q(1, 2)));
    let s = g.mul(&g.scalar(q(1, 3)), &g.scalar(q(1, 6)));
    assert_eq!(s, g.scalar(q(1, 2)));

    let g4 = ThetaGroup::new(Cocycle::standard(&grp(&[4])));
    let x = g4.lift(&el(&[1, 0]));
    let mut acc = g4.lift(&el(&[0, 0]));
    for _ in 0..4 {
        acc = g4.mul(&acc, &x);
    }
    assert_eq!(acc, g4.scalar(QmodZ::ZERO));
    assert_eq!(g4.pow(&x, 4), acc);
}

#[test]
fn commutator_forms() {
    let k = grp(&[2, 2]);
    let triv = ThetaGroup::new(Cocycle::trivial(k.clone()));
    let f = triv.commutator_form().unwrap();
    assert!(k.elements().all(|x| k.elements().all(|y| f.eval(&x, &y).is_zero())));

    for d in [2u64, 3] {
        let g = ThetaGroup::new(Cocycle::standard(&grp(&[d])));
        let form = g.commutator_form().unwrap();
        let base = g.base();
        for x in base.elements() {
            for y in base.elements() {
                let (a, b) = (g.lift(&x), g.lift(&y));
                let c = g.mul(&g.mul(&a, &b), &g.inv(&g.mul(&b, &a)));
                assert_eq!(form.eval(&x, &y), c.alpha);
                assert_eq!(c.x, base.zero());
            }
        }
        assert_eq!(form.eval(&el(&[1, 0]), &el(&[0, 1])), q(1, d as i64));
    }
}

#[test]
fn level_subgroup_lifts() {
    let g = ThetaGroup::new(Cocycle::standard(&grp(&[2])));
    let kp = Subgroup::generated_by(g.base(), vec![el(&[1, 0])]).unwrap();
    let level = lift_level_subgroup(&g, &kp).unwrap();
    let z = level.section(&el(&[1, 0])).unwrap();
    assert_eq!(g.pow(&z, 2), g.scalar(QmodZ::ZERO));

    let trivial = Subgroup::trivial(g.base());
    assert!(lift_level_subgroup(&g, &trivial).is_ok());

    let whole = Subgroup::generated_by(g.base(), vec![el(&[1, 0]), el(&[0, 1])]).unwrap();
    let err = lift_level_subgroup(&g, &whole).unwrap_err().to_string();
    assert!(err.contains("(1,0)") && err.contains("(0,1)"), "{err}");
}

#[test]
fn normal_forms_and_equivalence() {
    let ty = grp(&[2]);
    let std = Cocycle::standard(&ty);
    let nf = normal_form(&ThetaGroup::new(std.clone())).unwrap();
    assert_eq!(nf.decomposition.ty, vec![2]);
    assert!(nf.cochain.iter().all(|c| c.is_zero()));

    let base = ty.interleave_square();
    let c: Vec<QmodZ> = (0..base.order() as i64).map(|i| q(i * i, 5)).collect();
    let twisted = std.twisted(&c).unwrap();
    let nf = normal_form(&ThetaGroup::new(twisted.clone())).unwrap();
    // f = f_std + δc, rechecked on every pair
    for x in base.elements() {
        for y in base.elements() {
            let ix = base.index_of(&x);
            let iy = base.index_of(&y);
            let ixy = base.index_of(&base.add(&x, &y));
            let dc = nf.cochain[ix] + nf.cochain[iy] - nf.cochain[ixy];
            assert_eq!(twisted.eval(&x, &y), Cocycle::heisenberg(&nf.decomposition).eval(&x, &y) + dc);
        }
    }

    assert!(extensions_equivalent(&std, &std).unwrap());
    assert!(!extensions_equivalent(&Cocycle::trivial(base.clone()), &std).unwrap());
    assert!(extensions_equivalent(&std, &twisted).unwrap());
}

#[test]
fn descent_examples() {
    let g = ThetaGroup::new(Cocycle::standard(&grp(&[2])));
    let kp = Subgroup::generated_by(g.base(), vec![el(&[1, 0])]).unwrap();
    let d = descend(&g, &lift_level_subgroup(&g, &kp).unwrap()).unwrap();
    assert_eq!(d.group.base().order(), 1);

    let d = descend(&g, &lift_level_subgroup(&g, &Subgroup::trivial(g.base())).unwrap()).unwrap();
    assert_eq!(d.group.base().order(), 4);
    let f = d.group.commutator_form().unwrap();
    assert_eq!(symplectic_decompose(&f).unwrap().ty, vec![2]);

    let g4 = ThetaGroup::new(Cocycle::standard(&grp(&[4])));
    let kp = Subgroup::generated_by(g4.base(), vec![el(&[2, 0])]).unwrap();
    let d = descend(&g4, &lift_level_subgroup(&g4, &kp).unwrap()).unwrap();
    // centralizer of ⟨(2,0)⟩ by enumeration: second coordinate even
    let form = g4.commutator_form().unwrap();
    let cent: Vec<_> = g4
        .base()
        .elements()
        .filter(|x| form.eval(x, &el(&[2, 0])).is_zero())
        .collect();
    assert_eq!(d.centralizer.elements, cent);
    assert_eq!(d.group.base().order(), 4);
    let f = d.group.commutator_form().unwrap();
    assert_eq!(symplectic_decompose(&f).unwrap().ty, vec![2]);
}

// ---- representations ----

#[test]
fn weight_one_irrep_of_type_two() {
    let h = HeisenbergGroup::of_type(&[2]).unwrap();
    let pi = h.ty().mul_by_n(1);
    let w = build_irrep_canonical(&h, 1, &el(&[0]), &KernelCharacter::trivial(&pi)).unwrap();
    assert_eq!(w.dim(), 2);
    let x = w.action(&h.x_gen(0));
    assert_eq!(x.perm, vec![0, 1]);
    assert_eq!(x.phase, vec![QmodZ::ZERO, q(1, 2)]);
    let y = w.action(&h.w_gen(0));
    assert_eq!(y.perm, vec![1, 0]);
    assert!(y.phase.iter().all(|p| p.is_zero()));
}

#[test]
fn weight_zero_irreps_are_characters() {
    let h = HeisenbergGroup::of_type(&[3]).unwrap();
    let pi = h.ty().mul_by_n(0);
    for y in h.ty().elements() {
        let w = build_irrep_canonical(&h, 0, &y, &KernelCharacter::trivial(&pi)).unwrap();
        assert_eq!(w.dim(), 1);
        for x in h.ty().elements() {
            let g = theta_core::reps::heisenberg::HElem {
                alpha: QmodZ::ZERO,
                x: x.clone(),
                w: h.ty().zero(),
            };
            assert_eq!(w.action(&g).phase[0], h.ty().dual_character(&y, &x));
        }
    }
}

#[test]
fn isomorphism_criterion() {
    let h = HeisenbergGroup::of_type(&[4]).unwrap();
    let pi = h.ty().mul_by_n(2);
    let chis = KernelCharacter::all(&pi);
    let w = |y: u64, c: usize| build_irrep_canonical(&h, 2, &el(&[y]), &chis[c]).unwrap();
    assert_eq!(w(0, 0).dim(), 2);
    assert!(isomorphic(&w(0, 0), &w(2, 0)).unwrap());
    assert!(!isomorphic(&w(0, 0), &w(1, 0)).unwrap());
    assert!(!isomorphic(&w(0, 0), &w(0, 1)).unwrap());
}

#[test]
fn closed_form_counts() {
    assert_eq!(count_irreps(&grp(&[2]), 1), (1, 2));
    assert_eq!(count_irreps(&grp(&[2, 4]), 2), (16, 2));
    assert_eq!(count_irreps(&grp(&[6]), 3), (9, 2));
    assert_eq!(count_irreps(&grp(&[6]), 0), (36, 1));
}

/// Conjugacy classes of `G′ = μ_e × K₁ × K₂` with elements `(a, x, w)`,
/// `a` in units of `1/e`, and `(a,x,w)(b,x′,w′) = (a+b+⟨x,w′⟩, x+x′, w+w′)`.
fn gprime_classes_by_orbits(d: &[u64]) -> (usize, usize) {
    let e = *d.last().unwrap();
    let k = grp(d);
    let half: Vec<GroupElement> = k.elements().collect();
    let pair = |x: &GroupElement, w: &GroupElement| -> u64 {
        x.coords.iter().zip(&w.coords).zip(d).map(|((a, b), di)| a * b * (e / di)).sum::<u64>() % e
    };
    type El = (u64, GroupElement, GroupElement);
    let mul = |g: &El, h: &El| -> El {
        ((g.0 + h.0 + pair(&g.1, &h.2)) % e, k.add(&g.1, &h.1), k.add(&g.2, &h.2))
    };
    let inv = |g: &El| -> El {
        let (x, w) = (k.neg(&g.1), k.neg(&g.2));
        // (a,x,w)(b,−x,−w) = (a+b−⟨x,w⟩, 0, 0)
        ((2 * e - g.0 + pair(&g.1, &g.2)) % e, x, w)
    };
    let mut all = Vec::new();
    for a in 0..e {
        for x in &half {
            for w in &half {
                all.push((a, x.clone(), w.clone()));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut classes = 0;
    for g in &all {
        if seen.contains(g) {
            continue;
        }
        classes += 1;
        for h in &all {
            let c = mul(&mul(h, g), &inv(h));
            seen.insert(c);
        }
    }
    (all.len(), classes)
}

#[test]
fn gprime_conjugacy_classes() {
    for (d, order, classes) in [(&[2u64][..], 8, 5), (&[3], 27, 11), (&[2, 2], 32, 17)] {
        assert_eq!(gprime_classes_by_orbits(d), (order, classes));
        let c = gprime_class_count(&grp(d), 4096).unwrap();
        assert_eq!((c.order as usize, c.classes as usize), (order, classes));
        assert_eq!(c.class_formula as usize, classes);
    }
}

// ---- adelic model ----

fn pt(v: &[(i64, i64)]) -> AdelePoint {
    AdelePoint::from_fractions(v)
}

#[test]
fn supports() {
    let e = NSForm::principal(1);
    assert_eq!(supp(&e, &pt(&[(1, 2), (0, 1)]), 8).unwrap(), vec![2, 4, 6, 8]);
    assert_eq!(supp(&e, &pt(&[(3, 1), (-1, 1)]), 8).unwrap(), (1..=8).collect::<Vec<_>>());
    let zero = NSForm::zero(TorsionModel::new(1, 3).unwrap());
    assert_eq!(supp(&zero, &pt(&[(1, 2), (0, 1)]), 8).unwrap(), vec![1, 2, 4, 5, 7, 8]);
}

#[test]
fn pairings() {
    let e = NSForm::principal(1);
    let (x, y) = (pt(&[(1, 2), (0, 1)]), pt(&[(0, 1), (1, 2)]));
    let p = adelic_pairing(&e, &x, &y).unwrap();
    assert_eq!(p.value, q(1, 4));
    assert_eq!(p.levels, (2, 4));
    // by hand at levels 2 and 4: n²·E(x_n, y_n)
    for n in [2i64, 4] {
        let xn = rat(1, 2 * n);
        let yn = rat(1, 2 * n);
        assert_eq!(frac(&(xn * yn * BigInt::from(n * n))), rat(1, 4));
    }
    assert!(adelic_pairing(&e, &pt(&[(1, 1), (2, 1)]), &pt(&[(-3, 1), (0, 1)]))
        .unwrap()
        .value
        .is_zero());
    assert_eq!(adelic_pairing(&e.scaled(2), &x, &y).unwrap().value, q(1, 2));
}

#[test]
fn classes_and_witnesses() {
    let e = NSForm::principal(1);
    let class = ns_to_h2(&e);
    assert!(!class.is_trivial().unwrap());
    let zero = NSForm::zero(*e.model());
    assert!(ns_to_h2(&zero).is_trivial().unwrap());
    assert!(injectivity_witness(&zero).unwrap().is_none());

    let (x, y) = injectivity_witness(&e).unwrap().unwrap();
    assert_eq!(x, pt(&[(1, 2), (0, 1)]));
    assert_eq!(y, pt(&[(0, 1), (1, 2)]));
    assert_eq!(class.pairing(&x, &y).unwrap(), q(1, 4));

    let mut m = vec![vec![0i64; 4]; 4];
    m[0][2] = 3;
    m[2][0] = -3;
    let e13 = NSForm::new(TorsionModel::new(2, 0).unwrap(), m).unwrap();
    let (x, y) = injectivity_witness(&e13).unwrap().unwrap();
    let v = adelic_pairing(&e13, &x, &y).unwrap().value;
    assert_eq!(v, q(3, 4));
}

#[test]
fn pullbacks() {
    let e = NSForm::principal(1);
    let id = vec![vec![1, 0], vec![0, 1]];
    assert_eq!(pullback(&id, &e).unwrap(), e);
    let two = vec![vec![2, 0], vec![0, 2]];
    assert_eq!(pullback(&two, &e).unwrap(), e.scaled(4));
    let swap = vec![vec![0, 1], vec![1, 0]];
    assert_eq!(pullback(&swap, &e).unwrap(), e.scaled(-1));
    let (x, y) = (pt(&[(1, 2), (0, 1)]), pt(&[(0, 1), (1, 2)]));
    let quad = adelic_pairing(&pullback(&two, &e).unwrap(), &x, &y).unwrap().value;
    assert_eq!(quad, adelic_pairing(&e, &x, &y).unwrap().value.scale(4));
}

#[test]
fn weil_relation_examples() {
    let e = NSForm::principal(1);
    let c = weil_relation_check(&e, 2, &pt(&[(1, 2), (0, 1)]), &pt(&[(0, 1), (1, 2)])).unwrap();
    assert!(c.holds);
    assert_eq!(c.via_weil, q(1, 2));
    let c = weil_relation_check(&e, 2, &pt(&[(0, 1), (0, 1)]), &pt(&[(0, 1), (1, 2)])).unwrap();
    assert!(c.holds && c.via_weil.is_zero());
    let c = weil_relation_check(&e, 3, &pt(&[(1, 3), (0, 1)]), &pt(&[(0, 1), (1, 3)])).unwrap();
    assert!(c.holds);
    assert_eq!(c.via_weil, q(1, 3));
}

/// `K(n*L) = {u ∈ (ℚ/ℤ)^{2g} : n²Eu ∈ ℤ^{2g}}` enumerated on the grid
/// `(1/m)ℤ`, with `m = n²|det E|` an exponent bound; returns the order and
/// the multiset of element orders.
fn level_group_by_enumeration(e: &NSForm, n: u64) -> (usize, Vec<u64>) {
    let dim = 2 * e.g();
    let det = e.determinant().to_string().parse::<i64>().unwrap().unsigned_abs();
    let m = n * n * det;
    let n2 = (n * n) as i64;
    let mut orders = Vec::new();
    let total = (m as usize).pow(dim as u32);
    for idx in 0..total {
        let mut u = vec![0i64; dim];
        let mut r = idx;
        for c in u.iter_mut() {
            *c = (r % m as usize) as i64;
            r /= m as usize;
        }
        let integral = e
            .matrix()
            .iter()
            .all(|row| row.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>() * n2 % m as i64 == 0);
        if integral {
            let g = u.iter().fold(m as i64, |g, &c| num_integer::gcd(g, c));
            orders.push(m / g as u64);
        }
    }
    orders.sort_unstable();
    (orders.len(), orders)
}

#[test]
fn level_theta_groups() {
    let e = NSForm::principal(1);
    assert_eq!(level_theta_group(&e, 1).unwrap().group().order(), 1);
    let l = level_theta_group(&e, 2).unwrap();
    assert_eq!(l.group().divisors(), &[4, 4]);
    assert_eq!(symplectic_decompose(&l.form).unwrap().ty, vec![4]);
    let l = level_theta_group(&e.scaled(2), 1).unwrap();
    assert_eq!(l.group().divisors(), &[2, 2]);
    assert_eq!(symplectic_decompose(&l.form).unwrap().ty, vec![2]);

    let mut m = vec![vec![0i64; 4]; 4];
    m[0][1] = 1;
    m[1][0] = -1;
    m[2][3] = 2;
    m[3][2] = -2;
    let e2 = NSForm::new(TorsionModel::new(2, 0).unwrap(), m).unwrap();
    for (form, n) in [(e.clone(), 2), (e.scaled(3), 1), (e.scaled(2), 2), (e2, 1)] {
        let l = level_theta_group(&form, n).unwrap();
        let k = l.group();
        let mut orders: Vec<u64> = k.elements().map(|g| k.element_order(&g).unwrap()).collect();
        orders.sort_unstable();
        assert_eq!(level_group_by_enumeration(&form, n), (k.order() as usize, orders));
    }
}

#[test]
fn level_group_coordinates_carry_the_pairing() {
    let e = NSForm::principal(1).scaled(3);
    let l = level_theta_group(&e, 2).unwrap();
    for (x, y) in [
        (pt(&[(1, 2), (0, 1)]), pt(&[(0, 1), (1, 2)])),
        (pt(&[(1, 6), (1, 2)]), pt(&[(1, 3), (5, 6)])),
    ] {
        let p = adelic_pairing(&e, &x, &y).unwrap();
        let (xn, yn) = (x.component(2), y.component(2));
        let direct = e.eval(&xn, &yn) * BigRational::from_integer(BigInt::from(4));
        let cx = l.coords(&xn).unwrap();
        let cy = l.coords(&yn).unwrap();
        assert_eq!(as_rational(l.form.eval(&cx, &cy)), frac(&direct));
        if p.levels.0 == 2 {
            assert_eq!(l.form.eval(&cx, &cy), p.value);
        }
    }
}
