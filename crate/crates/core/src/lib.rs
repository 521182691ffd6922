//! Exact computations with euclidean Coxeter groups, their dual intervals,
//! crystallographic enlargements and Garside normal forms.

pub mod exactgeom;
pub mod rootdata;
pub mod isomgroup;
pub mod posetengine;
pub mod midnc;
pub mod crystlat;
pub mod dualgarside;
