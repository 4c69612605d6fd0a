//! Symbolic and numeric tools for the Lie-symmetry analysis of the
//! incompressible Navier–Stokes equations: expressions, differential forms,
//! generators and finite transforms, isobaric weights, self-similar
//! solutions and conserved forms.

pub mod expr;
pub mod exterior;
pub mod numeric;
pub mod symmetry;
pub mod weights;
pub mod solutions;
pub mod conserved;
pub mod properties;
