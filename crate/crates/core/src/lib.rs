//! Leray symbol functions and operator norms on the hypersurfaces
//! `M_γ`, with certified polygamma inequalities.

pub mod exactpoly;
pub mod specialfn;
pub mod certificate;
pub mod quad;
pub mod symbol;
pub mod bwcert;
pub mod emcert;
