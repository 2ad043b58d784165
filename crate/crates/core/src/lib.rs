pub mod exact;
pub mod latgroup;
pub mod voa;
pub mod forms;
pub mod dihedral;
pub mod cli;
