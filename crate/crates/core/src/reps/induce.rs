//! Induction from `H = {(α, x, w) : w ∈ ker π_n}` of the character
//! `(α, x, w) ↦ e(nα + ⟨x, y⟩ + χ(w))`, with an explicit isomorphism onto
//! the monomial model `W_{y,χ}`.

use super::dense::DenseRep;
use super::heisenberg::{HElem, HeisenbergGroup};
use super::linalg::CycMatrix;
use super::monomial::{build_irrep_canonical, KernelCharacter, MonomialAction, MonomialRep};
use crate::abelian::{GroupElement, MulByN};
use crate::error::{Result, ThetaError};
use crate::roots::QmodZ;

/// The induced module on the coset basis `f_z = t_z ⊗ 1`,
/// `t_z = (0, 0, σ(z))`, with `Ψ: f_z ↦ ρ_W(t_z) e_y` into `target`.
#[derive(Clone, Debug)]
pub struct Induced {
    pub rep: DenseRep,
    pub intertwiner: CycMatrix,
    pub target: MonomialRep,
}

struct Inducer<'a> {
    heis: &'a HeisenbergGroup,
    pi: &'a MulByN,
    n: i64,
    y: &'a GroupElement,
    chi: &'a KernelCharacter,
    reps: Vec<HElem>,
}

impl Inducer<'_> {
    fn character_on_h(&self, h: &HElem) -> QmodZ {
        debug_assert!(self.pi.in_kernel(&h.w));
        h.alpha.scale(self.n) + self.heis.pairing(&h.x, self.y) + self.chi.eval(self.pi, &h.w)
    }

    /// `g t_z = t_{z′} h` with `z′ = nw_g + z` and `h ∈ H`.
    fn action(&self, g: &HElem) -> MonomialAction {
        let ty = self.heis.ty();
        let nw = self.pi.apply(&g.w);
        let mut perm = Vec::with_capacity(self.reps.len());
        let mut phase = Vec::with_capacity(self.reps.len());
        for (z, t) in self.pi.image.iter().zip(&self.reps) {
            let j = self.pi.image_index(&ty.add(&nw, z)).expect("image is a subgroup");
            let h = self.heis.mul(&self.heis.inv(&self.reps[j]), &self.heis.mul(g, t));
            perm.push(j);
            phase.push(self.character_on_h(&h));
        }
        MonomialAction { perm, phase }
    }
}

pub fn induce(
    heis: &HeisenbergGroup,
    n: i64,
    y: &GroupElement,
    chi: &KernelCharacter,
) -> Result<Induced> {
    let target = build_irrep_canonical(heis, n, y, chi)?;
    let ty = heis.ty();
    let pi = target.pi();
    let reps = (0..pi.image.len())
        .map(|i| HElem {
            alpha: QmodZ::ZERO,
            x: ty.zero(),
            w: target.section().at(i).clone(),
        })
        .collect::<Vec<_>>();
    let ind = Inducer {
        heis,
        pi,
        n,
        y,
        chi: target.chi(),
        reps,
    };
    let field = DenseRep::default_field(heis);
    let mat = |g: &HElem| ind.action(g).to_matrix(&field);
    let p = ty.rank();
    let rep = DenseRep::homogeneous(
        heis,
        &field,
        n,
        (0..p).map(|i| mat(&heis.x_gen(i))).collect(),
        (0..p).map(|i| mat(&heis.w_gen(i))).collect(),
    )?;

    // e_y is basis vector 0 of W, since σ(0) = 0
    let mut e_y = vec![field.zero(); target.dim()];
    e_y[0] = field.one();
    let columns: Vec<_> = ind
        .reps
        .iter()
        .map(|t| target.action(t).to_matrix(&field).apply(&e_y))
        .collect();
    let psi = CycMatrix::from_columns(&field, target.dim(), &columns);
    if psi.inverse().is_none() {
        return Err(ThetaError::ContractViolation("Ψ is not invertible".into()));
    }
    for g in &heis.gprime().elements {
        let lhs = psi.mul(&rep.act(g)?);
        let rhs = target.action(g).to_matrix(&field).mul(&psi);
        if lhs != rhs {
            return Err(ThetaError::ContractViolation(format!(
                "Ψ does not intertwine the action of {g}"
            )));
        }
    }
    Ok(Induced {
        rep,
        intertwiner: psi,
        target,
    })
}
