//! The Dowker complex `D(R)`, the rectangle complex `E(R)`, and the simplicial
//! maps between them.
//!
//! Vertices of `E(R)` are the pairs of `R`, labelled `"(x,y)"` by
//! [`pair_label`].

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::complex::{Face, Limits, Simplex, SimplicialComplex, SimplicialMap};
use crate::concepts::{enumerate_concepts, up_bits};
use crate::error::{Error, Result};
use crate::relation::{Relation, RelationMorphism};

fn escape(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        if matches!(c, '\\' | ',' | '(' | ')') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// Vertex label of the pair `(x, y)` in `E(R)`. Backslash, comma and
/// parentheses inside component labels are backslash-escaped, which keeps the
/// rendering injective.
pub fn pair_label(x: &str, y: &str) -> String {
    format!("({},{})", escape(x), escape(y))
}

/// `D(R)`: vertex set `X`, facets the maximal witness sets `{x | (x, y) ∈ R}`.
pub fn dowker_complex(relation: &Relation) -> SimplicialComplex {
    let x = relation.x_labels();
    let mut vertices = x.to_vec();
    vertices.sort_unstable();
    let position = sorted_positions(x);
    let faces = (0..relation.y_labels().len())
        .map(|j| relation.column(j).ones().map(|i| position[i]).collect())
        .collect();
    SimplicialComplex::from_faces(vertices, faces)
}

/// `D(R^T)`.
pub fn transpose_dowker_complex(relation: &Relation) -> SimplicialComplex {
    dowker_complex(&relation.transpose())
}

/// Position of each label in the label-sorted order.
fn sorted_positions(labels: &[String]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    let mut position = vec![0u32; labels.len()];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p as u32;
    }
    position
}

/// The vertex set of `E(R)` with the pair behind each vertex.
struct PairVertices {
    labels: Vec<String>,
    /// `(x-index, y-index)` per vertex, aligned with `labels`.
    pairs: Vec<(usize, usize)>,
    /// Vertex of `(x-index, y-index)`.
    index: HashMap<(usize, usize), u32>,
}

impl PairVertices {
    fn new(relation: &Relation) -> Self {
        let mut rows: Vec<(String, (usize, usize))> = relation
            .index_pairs()
            .map(|(i, j)| {
                (
                    pair_label(&relation.x_labels()[i], &relation.y_labels()[j]),
                    (i, j),
                )
            })
            .collect();
        rows.sort_unstable();
        let index = rows
            .iter()
            .enumerate()
            .map(|(v, (_, p))| (*p, v as u32))
            .collect();
        let (labels, pairs) = rows.into_iter().unzip();
        PairVertices {
            labels,
            pairs,
            index,
        }
    }
}

/// `E(R)` without the dimension guard.
fn build_rectangle_complex(relation: &Relation) -> SimplicialComplex {
    let vertices = PairVertices::new(relation);
    let x_pos = |l: &str| relation.x_index(l).expect("concept label");
    let y_pos = |l: &str| relation.y_index(l).expect("concept label");
    let faces = enumerate_concepts(relation)
        .into_iter()
        .filter(|c| c.is_proper())
        .map(|c| {
            let mut face: Face = c
                .extent
                .iter()
                .flat_map(|x| c.intent.iter().map(move |y| (x_pos(x), y_pos(y))))
                .map(|p| vertices.index[&p])
                .collect();
            face.sort_unstable();
            face
        })
        .collect();
    SimplicialComplex::from_faces(vertices.labels, faces)
}

/// `E(R)` under the default [`Limits`].
pub fn rectangle_complex(relation: &Relation) -> Result<SimplicialComplex> {
    rectangle_complex_with(relation, &Limits::default())
}

/// `E(R)`: facets are the maximal non-empty rectangles `U × V ⊆ R`.
pub fn rectangle_complex_with(relation: &Relation, limits: &Limits) -> Result<SimplicialComplex> {
    let complex = build_rectangle_complex(relation);
    complex.check_dimension(limits)?;
    Ok(complex)
}

/// Whether a set of pairs spans a rectangle inside `R`:
/// `π(τ) × π̂(τ) ⊆ R`.
pub fn is_rectangle(relation: &Relation, pairs: &[(String, String)]) -> bool {
    let xs: BTreeSet<&str> = pairs.iter().map(|(x, _)| x.as_str()).collect();
    let ys: BTreeSet<&str> = pairs.iter().map(|(_, y)| y.as_str()).collect();
    xs.iter().all(|x| ys.iter().all(|y| relation.contains(x, y)))
}

fn pair_map(
    relation: &Relation,
    target: SimplicialComplex,
    project: impl Fn(usize, usize) -> String,
) -> SimplicialMap {
    let vertices = PairVertices::new(relation);
    let source = build_rectangle_complex(relation);
    let table: HashMap<&str, (usize, usize)> = vertices
        .labels
        .iter()
        .map(String::as_str)
        .zip(vertices.pairs.iter().copied())
        .collect();
    SimplicialMap::from_fn(source, target, |v| {
        table.get(v).map(|&(i, j)| project(i, j))
    })
    .expect("coordinate maps of a relation are simplicial")
}

/// `π_R: E(R) → D(R)`, `(x, y) ↦ x`.
pub fn pi(relation: &Relation) -> SimplicialMap {
    pair_map(relation, dowker_complex(relation), |i, _| {
        relation.x_labels()[i].clone()
    })
}

/// `π̂_R: E(R) → D(R^T)`, `(x, y) ↦ y`.
pub fn pi_hat(relation: &Relation) -> SimplicialMap {
    pair_map(relation, transpose_dowker_complex(relation), |_, j| {
        relation.y_labels()[j].clone()
    })
}

/// `S_R: E(R) → E(R^T)`, `(x, y) ↦ (y, x)`.
pub fn swap_iso(relation: &Relation) -> SimplicialMap {
    pair_map(relation, build_rectangle_complex(&relation.transpose()), |i, j| {
        pair_label(&relation.y_labels()[j], &relation.x_labels()[i])
    })
}

/// `D(f): D(R0) → D(R1)` with vertex map `f1`.
pub fn dowker_map(morphism: &RelationMorphism) -> SimplicialMap {
    SimplicialMap::from_fn(
        dowker_complex(morphism.source()),
        dowker_complex(morphism.target()),
        |x| morphism.f1(x).map(str::to_string),
    )
    .expect("a morphism of relations induces a simplicial map of Dowker complexes")
}

/// `E(f): E(R0) → E(R1)`, `(x, y) ↦ (f1(x), f2(y))`.
pub fn rectangle_map(morphism: &RelationMorphism) -> SimplicialMap {
    let source = morphism.source();
    let target_labels = |i: usize, j: usize| {
        let x = &source.x_labels()[i];
        let y = &source.y_labels()[j];
        pair_label(
            morphism.f1(x).expect("total"),
            morphism.f2(y).expect("total"),
        )
    };
    pair_map(source, build_rectangle_complex(morphism.target()), target_labels)
}

fn sigma_bits(relation: &Relation, sigma: &Simplex) -> Result<fixedbitset::FixedBitSet> {
    let mut bits = fixedbitset::FixedBitSet::with_capacity(relation.x_labels().len());
    for v in sigma.vertices() {
        bits.insert(relation.x_pos(v).map_err(|_| Error::NotASimplex {
            simplex: sigma.vertices().to_vec(),
        })?);
    }
    Ok(bits)
}

/// `Y(σ)`: every `y` witnessing `σ`, sorted. Errors unless `σ ∈ D(R)`.
pub fn witness_y(relation: &Relation, sigma: &Simplex) -> Result<Vec<String>> {
    let bits = sigma_bits(relation, sigma)?;
    let witnesses = up_bits(relation, &bits);
    if witnesses.count_ones(..) == 0 {
        return Err(Error::NotASimplex {
            simplex: sigma.vertices().to_vec(),
        });
    }
    let mut out: Vec<String> = witnesses
        .ones()
        .map(|j| relation.y_labels()[j].clone())
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// `σ × Y(σ)`, the top simplex of `π_R^{-1}(σ)`.
pub fn inverse_image_simplex(relation: &Relation, sigma: &Simplex) -> Result<Simplex> {
    let ys = witness_y(relation, sigma)?;
    Simplex::new(
        sigma
            .vertices()
            .iter()
            .flat_map(|x| ys.iter().map(move |y| pair_label(x, y))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalitySquareFailure {
    /// `"pi"` for `D(f)∘π = π∘E(f)`, `"pi_hat"` for `D(f^T)∘π̂ = π̂∘E(f)`.
    pub square: &'static str,
    pub vertex: String,
    pub via_source_projection: String,
    pub via_rectangle_map: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    pub vertices_checked: usize,
    pub failures: Vec<NaturalitySquareFailure>,
}

impl NaturalityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks both squares of the projection diagram for `f` vertex by vertex on
/// `E(R0)`: `D(f)∘π_{R0} = π_{R1}∘E(f)` and `D(f^T)∘π̂_{R0} = π̂_{R1}∘E(f)`.
pub fn check_naturality(morphism: &RelationMorphism) -> NaturalityReport {
    let e_f = rectangle_map(morphism);
    let squares = [
        (
            "pi",
            dowker_map(morphism).compose(&pi(morphism.source())),
            pi(morphism.target()).compose(&e_f),
        ),
        (
            "pi_hat",
            dowker_map(&morphism.transpose()).compose(&pi_hat(morphism.source())),
            pi_hat(morphism.target()).compose(&e_f),
        ),
    ];
    let mut failures = Vec::new();
    let mut vertices_checked = 0;
    for (name, top, bottom) in squares {
        let top = top.expect("composable by construction").vertex_table();
        let bottom = bottom.expect("composable by construction").vertex_table();
        vertices_checked = top.len();
        for (v, a) in &top {
            let b = bottom.get(v).cloned().unwrap_or_default();
            if *a != b {
                failures.push(NaturalitySquareFailure {
                    square: name,
                    vertex: v.clone(),
                    via_source_projection: a.clone(),
                    via_rectangle_map: b,
                });
            }
        }
        if top.len() != bottom.len() {
            failures.push(NaturalitySquareFailure {
                square: name,
                vertex: String::new(),
                via_source_projection: format!("{} vertices", top.len()),
                via_rectangle_map: format!("{} vertices", bottom.len()),
            });
        }
    }
    NaturalityReport {
        vertices_checked,
        failures,
    }
}
