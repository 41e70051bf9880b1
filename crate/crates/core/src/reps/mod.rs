//! Weight-`n` representation theory of the standard Heisenberg groups.

pub mod dense;
pub mod heisenberg;
pub mod induce;
pub mod linalg;
pub mod monomial;

pub use dense::{decompose_weight_module, is_irreducible, k1_weight_spaces, weight_decompose, DenseRep};
pub use heisenberg::{gprime_class_count, gprime_class_formula, GPrime, HElem, HeisenbergGroup};
pub use induce::induce;
pub use linalg::CycMatrix;
pub use monomial::{
    build_irrep, build_irrep_canonical, classify_irreps, count_irreps, isomorphic, KernelCharacter,
    MonomialRep, Section,
};
