pub mod exactnum;
pub mod lattice;
pub mod tropcurve;
pub mod enumerate;
pub mod weights;
pub mod invariants;
pub mod cli;
