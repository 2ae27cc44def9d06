//! Dowker complexes, rectangle complexes and formal concepts of finite
//! relations, with exact homology checks of Dowker duality.
//!
//! ```
//! use dowker_core::{dowker_complex, homology, Limits, Relation};
//!
//! let r = Relation::new(["a", "b"], ["1", "2"], [("a", "1"), ("b", "1"), ("b", "2")]).unwrap();
//! let d = dowker_complex(&r);
//! assert_eq!(d.num_facets(), 1);
//! let h = homology(&d, true, &Limits::default()).unwrap();
//! assert!(h.is_trivial());
//! ```

pub mod complex;
pub mod concepts;
pub mod dowker;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod relation;
pub mod verify;

pub use complex::{cone_point, fiber, nerve, Limits, Simplex, SimplicialComplex, SimplicialMap};
pub use concepts::{brute_force_concepts, derive_down, derive_up, enumerate_concepts, FormalConcept};
pub use dowker::{
    check_naturality, dowker_complex, dowker_map, pair_label, pi, pi_hat, rectangle_complex,
    rectangle_complex_with, rectangle_map, swap_iso, transpose_dowker_complex, witness_y,
};
pub use error::{Error, Result};
pub use homology::{
    check_fiber_hypothesis, check_functorial_dowker, homology, homology_map_matrix,
    homology_with, is_quasi_isomorphism, psi_star, Coefficients, HomologyResult,
};
pub use relation::{compose_morphisms, random_morphism, random_relation, Relation, RelationMorphism};
