//! Truncated simplicial sets and the homotopy-colimit machinery: simplicial
//! replacements, diagonals, cylinder homotopies, Cech complexes, simplex
//! categories and homotopy-finality proxies.

pub mod bisset;
pub mod cech;
pub mod cylinder;
pub mod diagram;
pub mod sset;

pub use bisset::{constant_horizontal, BiSSet, BiSSetMap};
pub use cech::{
    cech_cover, cech_map_sets, cech_map_ssets, cech_set, cover_diagram, double_cover_diagram,
    is_homotopy_final_proxy, simplex_category, FinalityVerdict,
};
pub use cylinder::{cylinder_homotopy, odot, product_with_interval, CylinderHomotopy};
pub use diagram::{
    alpha_sharp, chains, eta_hat, hocolim, induced_hocolim_map, srep, Chain, DiagramMorphism,
    SSetDiagram,
};
pub use sset::{
    boundary_simplex, circle, discrete_sset, from_semisimplicial, monotone_maps, nerve, product,
    standard_simplex, sub_sset, RawSSet, SSet, Semisimplicial, SimplicialMap, DEFAULT_TRUNCATION,
};
