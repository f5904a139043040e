//! Special geometry: j-special/geodesic specs, j-block decomposition,
//! D-special synthesis, freeness and normality predicates, and the
//! D-special closure.

mod spec;
mod synth;

pub use spec::{
    j_block_decomposition, root_path_matrices, GeodesicSpec, JBlock,
    JBlockDecomp, JSpecialSpec,
};
pub use synth::{
    full_ambient, jet_ambient, jet_names, project_onto, recognize_ambient,
    synthesize_dspecial, synthesize_dspecial_with_budget, BlockData,
    DSpecialVariety,
};
