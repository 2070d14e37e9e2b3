//! Thomas–Fermi theory of atoms and diatomic molecules.
//!
//! Three layers: the universal neutral atom ([`atom`]), solved once by
//! shooting on the initial slope of the screening function and rescaled to
//! any charge by the `Z^(7/3)` law; the axisymmetric neutral diatomic
//! molecule ([`diatomic`]), solved by a preconditioned fixed-point
//! iteration on the electronic screening potential with the nuclear
//! singularities handled analytically; and the Scott-corrected energy
//! assembly ([`scott`]) that adds the `2 Z^2 S(Z*alpha)` nuclear
//! corrections on top of the molecular Thomas–Fermi energy.
//!
//! Units are `m = e = hbar = 1` with spin-1/2 electrons throughout, so the
//! density–potential relation is `rho = (2 V)^(3/2) / (3 pi^2)` and the
//! neutral-atom potential has the universal `81 pi^2 / (8 r^4)` far tail.

pub mod atom;
pub mod diatomic;
pub mod scott;
