//! Exact simplicial homology and the homology-level checks built on it.
//!
//! Complexes are first shrunk by strong collapse (see
//! [`SimplicialComplex::strong_collapse`]); a map `F: K → L` is studied through
//! `r_L ∘ F ∘ i_K` between the cores. Since inclusion and retraction are
//! homotopy inverse, this identifies `H(K)` with `H(core K)` compatibly with
//! composition, so every complex gets one fixed homology basis no matter which
//! map it appears in.

pub mod chain;
pub mod field;
pub mod matrix;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::complex::{ComplexJson, Limits, Simplex, SimplicialComplex, SimplicialMap};
use crate::dowker::{dowker_map, inverse_image_simplex, pi, pi_hat, swap_iso, witness_y};
use crate::error::{Error, Result};
use crate::relation::{Relation, RelationMorphism};

pub use chain::{chain_complex, induced_chain_map, mapping_cone, ChainComplex, ChainMap};
pub use field::{Coefficients, Field, FieldMatrix, PrimeField, Rationals};
pub use matrix::{invariant_factors, smith_normal_form, IntMatrix, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub dim: i64,
    pub betti: usize,
    /// Invariant factors above one, each dividing the next.
    #[serde(serialize_with = "integers")]
    pub torsion: Vec<BigInt>,
}

fn integers<S: Serializer>(values: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let numbers: Vec<serde_json::Value> = values
        .iter()
        .map(|v| match u64::try_from(v) {
            Ok(n) => serde_json::Value::from(n),
            Err(_) => serde_json::Value::from(v.to_string()),
        })
        .collect();
    numbers.serialize(s)
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub reduced: bool,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn group(&self, dim: i64) -> Option<&HomologyGroup> {
        self.groups.iter().find(|g| g.dim == dim)
    }

    pub fn betti(&self, dim: i64) -> usize {
        self.group(dim).map_or(0, |g| g.betti)
    }

    pub fn torsion(&self, dim: i64) -> &[BigInt] {
        self.group(dim).map_or(&[], |g| &g.torsion)
    }

    /// Betti numbers in degrees `0..`, trailing zeros dropped.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .groups
            .iter()
            .filter(|g| g.dim >= 0)
            .map(|g| g.betti)
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.iter().all(HomologyGroup::is_zero)
    }

    /// Same groups in every degree, treating missing degrees as zero.
    pub fn same_groups(&self, other: &HomologyResult) -> bool {
        let nonzero = |r: &HomologyResult| -> Vec<HomologyGroup> {
            r.groups.iter().filter(|g| !g.is_zero()).cloned().collect()
        };
        nonzero(self) == nonzero(other)
    }

    /// `Σ (−1)^d betti_d`.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|g| if g.dim.rem_euclid(2) == 0 { 1 } else { -1 } * g.betti as i64)
            .sum()
    }

    fn padded(mut self, lo: i64, hi: i64) -> Self {
        self.groups.retain(|g| g.dim >= lo && g.dim <= hi);
        self.groups = (lo..=hi)
            .map(|d| {
                self.group(d).cloned().unwrap_or(HomologyGroup {
                    dim: d,
                    betti: 0,
                    torsion: Vec::new(),
                })
            })
            .collect();
        self
    }
}

fn field_ranks<F: Field>(c: &ChainComplex, field: &F) -> Vec<usize> {
    c.degrees()
        .map(|d| {
            let m = c.boundary_ref(d).expect("degree in range");
            FieldMatrix::from_int(field, m).rank(field)
        })
        .collect()
}

/// Homology of a chain complex in every degree of its range. Torsion is only
/// reported over `Z`.
pub fn chain_homology(c: &ChainComplex, coefficients: Coefficients, reduced: bool) -> HomologyResult {
    let degrees: Vec<i64> = c.degrees().collect();
    let (ranks, factors): (Vec<usize>, Vec<Vec<BigInt>>) = match coefficients {
        Coefficients::Integers => degrees
            .iter()
            .map(|&d| {
                let f = invariant_factors(c.boundary_ref(d).expect("degree in range"));
                (f.len(), f)
            })
            .unzip(),
        Coefficients::Rationals => (field_ranks(c, &Rationals), vec![Vec::new(); degrees.len()]),
        Coefficients::Prime(p) => (field_ranks(c, &p), vec![Vec::new(); degrees.len()]),
    };
    let groups = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let out_rank = ranks[i];
            let in_rank = ranks.get(i + 1).copied().unwrap_or(0);
            let torsion = factors
                .get(i + 1)
                .map(|f| f.iter().filter(|t| !t.is_one()).cloned().collect())
                .unwrap_or_default();
            HomologyGroup {
                dim: d,
                betti: c.rank(d) - out_rank - in_rank,
                torsion,
            }
        })
        .collect();
    HomologyResult { reduced, groups }
}

fn degree_range(complex: &SimplicialComplex, reduced: bool) -> (i64, i64) {
    (if reduced { -1 } else { 0 }, complex.dimension())
}

/// Integer homology of `K`, computed on its strong-collapse core. Groups are
/// listed for every degree from 0 (or −1 when `reduced`) up to `dim K`.
pub fn homology(complex: &SimplicialComplex, reduced: bool, limits: &Limits) -> Result<HomologyResult> {
    homology_with(complex, reduced, Coefficients::Integers, limits)
}

pub fn homology_with(
    complex: &SimplicialComplex,
    reduced: bool,
    coefficients: Coefficients,
    limits: &Limits,
) -> Result<HomologyResult> {
    let core = complex.strong_collapse().core;
    let c = chain_complex(&core, reduced, limits)?;
    let (lo, hi) = degree_range(complex, reduced);
    Ok(chain_homology(&c, coefficients, reduced).padded(lo, hi))
}

/// Homology from the full chain complex of `K`, without collapsing. Only
/// feasible for small complexes; used to cross-check [`homology_with`].
pub fn literal_homology(
    complex: &SimplicialComplex,
    reduced: bool,
    coefficients: Coefficients,
    limits: &Limits,
) -> Result<HomologyResult> {
    let c = chain_complex(complex, reduced, limits)?;
    let (lo, hi) = degree_range(complex, reduced);
    Ok(chain_homology(&c, coefficients, reduced).padded(lo, hi))
}

/// `r_L ∘ F ∘ i_K` between the strong-collapse cores of source and target.
pub fn core_map(map: &SimplicialMap) -> SimplicialMap {
    let source = map.source().strong_collapse();
    let target = map.target().strong_collapse();
    let through = map
        .compose(&source.inclusion)
        .expect("inclusion lands in the source");
    target
        .retraction
        .compose(&through)
        .expect("map lands in the target")
}

/// Whether `F` induces an isomorphism on integral homology: the reduced
/// mapping cone of the core map has no homology at all.
pub fn is_quasi_isomorphism(map: &SimplicialMap, limits: &Limits) -> Result<bool> {
    let f = induced_chain_map(&core_map(map), true, limits)?;
    Ok(chain_homology(&mapping_cone(&f), Coefficients::Integers, true).is_trivial())
}

/// The same test on the full complexes, without collapsing.
pub fn cone_is_acyclic(map: &SimplicialMap, limits: &Limits) -> Result<bool> {
    let f = induced_chain_map(map, true, limits)?;
    Ok(chain_homology(&mapping_cone(&f), Coefficients::Integers, true).is_trivial())
}

/// Representatives of a basis of `H_d` over a field, and the matrix used to
/// read off coordinates.
struct HomologyBasis<E> {
    /// Independent boundaries followed by the representatives; a basis of the
    /// cycles.
    cycle_basis: FieldMatrix<E>,
    boundaries: usize,
    representatives: Vec<Vec<E>>,
}

/// Kernel basis of `∂_d` by column reduction in canonical order, then the
/// cycles that are pivots against the boundaries `im ∂_{d+1}`.
fn homology_basis<F: Field>(c: &ChainComplex, d: i64, field: &F) -> HomologyBasis<F::Elem> {
    let n = c.rank(d);
    let cycles = FieldMatrix::from_int(field, &c.boundary(d)).kernel(field);
    let incoming = FieldMatrix::from_int(field, &c.boundary(d + 1));
    let columns: Vec<Vec<F::Elem>> = (0..incoming.cols())
        .map(|j| incoming.column(j))
        .chain(cycles)
        .collect();
    let stacked = FieldMatrix::from_columns(field, n, &columns);
    let (_, pivots) = stacked.rref(field);
    let boundaries = pivots.iter().filter(|&&p| p < incoming.cols()).count();
    let chosen: Vec<Vec<F::Elem>> = pivots.iter().map(|&p| columns[p].clone()).collect();
    HomologyBasis {
        cycle_basis: FieldMatrix::from_columns(field, n, &chosen),
        boundaries,
        representatives: chosen[boundaries..].to_vec(),
    }
}

/// Matrix of `H_d(f)` in the bases of [`homology_basis`].
pub fn chain_map_homology_matrix<F: Field>(map: &ChainMap, d: i64, field: &F) -> FieldMatrix<F::Elem> {
    let source = homology_basis(map.source(), d, field);
    let target = homology_basis(map.target(), d, field);
    let f = FieldMatrix::from_int(field, &map.degree(d));
    let columns: Vec<Vec<F::Elem>> = source
        .representatives
        .iter()
        .map(|z| {
            let image = f.mul_vec(field, z);
            let coords = target
                .cycle_basis
                .solve(field, &image)
                .expect("a chain map sends cycles to cycles");
            coords[target.boundaries..].to_vec()
        })
        .collect();
    FieldMatrix::from_columns(field, target.representatives.len(), &columns)
}

/// Matrix of `H_k(F)` over `field`, in the canonical homology bases of the
/// strong-collapse cores of source and target.
pub fn homology_map_matrix<F: Field>(
    map: &SimplicialMap,
    k: usize,
    field: &F,
    limits: &Limits,
) -> Result<FieldMatrix<F::Elem>> {
    let f = induced_chain_map(&core_map(map), false, limits)?;
    Ok(chain_map_homology_matrix(&f, k as i64, field))
}

/// `Ψ_R` on `H_k`: `H_k(π_{R^T}) · H_k(S_R) · H_k(π_R)^{-1}`.
pub fn psi_star<F: Field>(
    relation: &Relation,
    k: usize,
    field: &F,
    limits: &Limits,
) -> Result<FieldMatrix<F::Elem>> {
    let down = homology_map_matrix(&pi(relation), k, field, limits)?;
    let inverse = down
        .inverse(field)
        .ok_or(Error::NotInvertible { degree: k })?;
    let swap = homology_map_matrix(&swap_iso(relation), k, field, limits)?;
    let across = homology_map_matrix(&pi(&relation.transpose()), k, field, limits)?;
    Ok(across.mul(field, &swap).mul(field, &inverse))
}

/// Whether `H_k(D(f^T)) · Ψ_{R0} = Ψ_{R1} · H_k(D(f))`.
pub fn check_functorial_dowker<F: Field>(
    morphism: &RelationMorphism,
    k: usize,
    field: &F,
    limits: &Limits,
) -> Result<bool> {
    let forward = homology_map_matrix(&dowker_map(morphism), k, field, limits)?;
    let backward = homology_map_matrix(&dowker_map(&morphism.transpose()), k, field, limits)?;
    let psi_source = psi_star(morphism.source(), k, field, limits)?;
    let psi_target = psi_star(morphism.target(), k, field, limits)?;
    Ok(backward.mul(field, &psi_source) == psi_target.mul(field, &forward))
}

/// Whether `π̂_R = π_{R^T} ∘ S_R` as vertex maps.
pub fn check_swap_factorization(relation: &Relation) -> bool {
    let composite = pi(&relation.transpose())
        .compose(&swap_iso(relation))
        .expect("S_R lands in E(R^T)");
    composite.vertex_table() == pi_hat(relation).vertex_table()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverElement {
    /// The face `τ ⊆ σ`.
    pub tau: Vec<String>,
    /// `π_R^{-1}(τ) = τ × Y(τ)`.
    pub simplex: Vec<String>,
}

/// Evidence that `π_R/σ` is contractible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub sigma: Vec<String>,
    pub fiber: ComplexJson,
    pub fiber_homology: HomologyResult,
    pub witnesses: Vec<String>,
    pub inverse_image: Vec<String>,
    pub inverse_image_is_simplex: bool,
    /// One element per non-empty `τ ⊆ σ`, in bitmask order over the sorted
    /// vertices of `σ`; the last element is `π_R^{-1}(σ)`.
    pub cover: Vec<CoverElement>,
    pub nerve: ComplexJson,
    /// Nerve vertex of `π_R^{-1}(σ)`.
    pub cone_vertex: String,
    pub cone_point: bool,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.fiber_homology.is_trivial() && self.inverse_image_is_simplex && self.cone_point
    }
}

/// Checks the fiber of `π_R` over `σ ∈ D(R)`: reduced homology, the simplex
/// `σ × Y(σ)`, and the cone point of the nerve of `{π_R^{-1}(τ) : τ ⊆ σ}`.
pub fn check_fiber_hypothesis(relation: &Relation, sigma: &Simplex, limits: &Limits) -> Result<FiberReport> {
    let witnesses = witness_y(relation, sigma)?;
    let projection = pi(relation);
    let fiber = projection.fiber(sigma)?;
    let fiber_homology = homology(&fiber, true, limits)?;
    let inverse_image = inverse_image_simplex(relation, sigma)?;
    let inverse_image_is_simplex = projection.source().contains(&inverse_image);

    let vertices = sigma.vertices();
    if vertices.len() >= usize::BITS as usize - 1 {
        return Err(Error::TooLarge {
            size: vertices.len(),
            limit: usize::BITS as usize - 2,
        });
    }
    let mut cover = Vec::new();
    let mut elements = Vec::new();
    for mask in 1usize..(1 << vertices.len()) {
        let tau = Simplex::new(
            (0..vertices.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vertices[i].clone()),
        )?;
        let simplex = inverse_image_simplex(relation, &tau)?;
        elements.push(SimplicialComplex::simplex(simplex.vertices().iter().cloned())?);
        cover.push(CoverElement {
            tau: tau.into(),
            simplex: simplex.into(),
        });
    }
    let nerve = crate::complex::nerve(&elements)?;
    let cone_vertex = (elements.len() - 1).to_string();
    let cone_point = nerve.is_cone_point(&cone_vertex);
    Ok(FiberReport {
        sigma: sigma.vertices().to_vec(),
        fiber: fiber.to_json(),
        fiber_homology,
        witnesses,
        inverse_image: inverse_image.into(),
        inverse_image_is_simplex,
        cover,
        nerve: nerve.to_json(),
        cone_vertex,
        cone_point,
    })
}
