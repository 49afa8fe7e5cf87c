//! Multiple holomorphs of semidirect products `A x| C_d` with coprime
//! exponents: the exponent-twisting map `pi`, its membership in the
//! normalizer of the holomorph, and the order of its coset in `T(G)`.

pub mod aut;
pub mod group;
pub mod hol;
pub mod modarith;
pub mod nilpotent;
pub mod oracle;
pub mod perm;
pub mod pi;
pub mod pipeline;
pub mod recipe;
pub mod spec;
