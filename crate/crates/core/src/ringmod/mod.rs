//! Finite groups, finite rings with unity, and finite modules over them:
//! permutation and induced modules, orbit splittings, character duals and
//! a few additive functors.

mod functor;
mod group;
mod gset;
mod module;
mod ring;

pub use functor::{lift_functor_apply, FunctorTag, FunctorValue};
pub use group::{FinGroup, SubgroupOf, MAX_GROUP_ORDER};
pub use gset::{induced_module, orbit_decomposition, permutation_module, GSet, OrbitDecomposition};
pub use module::{
    dual_mod_hom, dual_module, module_evaluation, search_isomorphism, FinModule, ModHom,
    ModuleHomGroup, ModuleSum, QuotientModule, Side, Submodule, ISOMORPHISM_SEARCH_LIMIT,
};
pub use ring::{FiniteRing, RingKind, MAX_RING_RANK};
