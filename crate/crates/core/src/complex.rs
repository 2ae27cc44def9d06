//! Finite abstract simplicial complexes stored by their facets.
//!
//! Vertices are string labels kept in lexicographic order; internally a face
//! is a sorted vector of vertex positions, so positional order and label order
//! agree everywhere (boundary signs, canonical bases, export order).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted vertex positions of a face.
pub(crate) type Face = Vec<u32>;

/// A non-empty set of vertex labels, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Simplex(Vec<String>);

impl Simplex {
    pub fn new<I, S>(vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vs: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vs.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vs.sort_unstable();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0].clone()));
        }
        Ok(Simplex(vs))
    }

    pub fn vertices(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, vertex: &str) -> bool {
        self.0.binary_search_by(|v| v.as_str().cmp(vertex)).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(v))
    }

    /// Non-empty subsets, by size then lexicographically.
    pub fn faces(&self) -> Vec<Simplex> {
        (1..=self.0.len())
            .flat_map(|k| self.0.iter().cloned().combinations(k))
            .map(Simplex)
            .collect()
    }
}

impl TryFrom<Vec<String>> for Simplex {
    type Error = Error;

    fn try_from(value: Vec<String>) -> Result<Self> {
        Simplex::new(value)
    }
}

impl From<Simplex> for Vec<String> {
    fn from(value: Simplex) -> Self {
        value.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

/// Resource guards for anything that enumerates simplices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Facets may have at most `max_dimension + 1` vertices.
    pub max_dimension: usize,
    /// Cap on the number of simplices materialized for one chain complex.
    pub max_simplices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dimension: 25,
            max_simplices: 5_000,
        }
    }
}

impl Limits {
    pub fn with_max_dimension(self, max_dimension: usize) -> Self {
        Limits {
            max_dimension,
            ..self
        }
    }

    pub fn unbounded() -> Self {
        Limits {
            max_dimension: usize::MAX - 1,
            max_simplices: usize::MAX,
        }
    }
}

pub(crate) fn is_subset(small: &[u32], big: &[u32]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            match b.cmp(s) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Keeps the inclusion-maximal non-empty faces, sorted canonically.
pub(crate) fn maximalize(mut faces: Vec<Face>) -> Vec<Face> {
    faces.retain(|f| !f.is_empty());
    for f in &mut faces {
        f.sort_unstable();
        f.dedup();
    }
    faces.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
    for f in faces {
        if !kept.iter().any(|k| is_subset(&f, k)) {
            kept.push(f);
        }
    }
    kept.sort_unstable();
    kept
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Face {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// A finite abstract simplicial complex `(K, V)`, represented by its facets.
///
/// Declared vertices that lie in no facet are kept in the vertex set but are
/// not simplices, so they contribute nothing to homology.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Face>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex::default()
    }

    /// The complex generated by `candidates`: every non-empty subset of a
    /// candidate is a simplex, and the stored facets are the maximal ones.
    pub fn from_facets<V, S, C, F, T>(vertex_set: V, candidates: C) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        C: IntoIterator<Item = F>,
        F: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut vertices: Vec<String> = vertex_set.into_iter().map(Into::into).collect();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0].clone()));
        }
        let mut faces = Vec::new();
        for candidate in candidates {
            let face = candidate
                .into_iter()
                .map(|v| {
                    let v = v.as_ref();
                    vertices
                        .binary_search_by(|w| w.as_str().cmp(v))
                        .map(|p| p as u32)
                        .map_err(|_| Error::UnknownVertex(v.to_string()))
                })
                .collect::<Result<Face>>()?;
            faces.push(face);
        }
        Ok(SimplicialComplex::from_faces(vertices, faces))
    }

    /// The full simplex on `vertices`.
    pub fn simplex<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self> {
        let vs: Vec<String> = vertices.into_iter().map(Into::into).collect();
        SimplicialComplex::from_facets(vs.clone(), [vs])
    }

    /// `vertices` must be sorted and distinct; faces index into it.
    pub(crate) fn from_faces(vertices: Vec<String>, faces: Vec<Face>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        SimplicialComplex {
            vertices,
            facets: maximalize(faces),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, label: &str) -> Option<u32> {
        self.vertices
            .binary_search_by(|v| v.as_str().cmp(label))
            .ok()
            .map(|p| p as u32)
    }

    pub(crate) fn label(&self, v: u32) -> &str {
        &self.vertices[v as usize]
    }

    pub fn facets(&self) -> Vec<Simplex> {
        self.facets.iter().map(|f| self.to_simplex(f)).collect()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// True when the complex has no simplices (it may still declare vertices).
    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension of the largest facet; `-1` for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.facets.iter().map(|f| f.len() as i64 - 1).max().unwrap_or(-1)
    }

    /// Vertices that are 0-simplices, i.e. lie in some facet.
    pub(crate) fn active_vertices(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.facets.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub(crate) fn to_simplex(&self, face: &[u32]) -> Simplex {
        Simplex(face.iter().map(|&v| self.label(v).to_string()).collect())
    }

    pub(crate) fn to_face(&self, simplex: &Simplex) -> Option<Face> {
        simplex
            .vertices()
            .iter()
            .map(|v| self.vertex_index(v))
            .collect()
    }

    pub fn contains(&self, simplex: &Simplex) -> bool {
        self.to_face(simplex)
            .is_some_and(|face| self.contains_face(&face))
    }

    pub(crate) fn contains_face(&self, face: &[u32]) -> bool {
        !face.is_empty() && self.facets.iter().any(|f| is_subset(face, f))
    }

    pub(crate) fn k_faces(&self, k: usize) -> Vec<Face> {
        let set: BTreeSet<Face> = self
            .facets
            .iter()
            .filter(|f| f.len() > k)
            .flat_map(|f| f.iter().copied().combinations(k + 1))
            .collect();
        set.into_iter().collect()
    }

    /// All `k`-simplices in canonical order.
    pub fn k_simplices(&self, k: usize) -> Vec<Simplex> {
        self.k_faces(k).iter().map(|f| self.to_simplex(f)).collect()
    }

    /// Simplices grouped by dimension, each group sorted, subject to `limits`.
    pub(crate) fn faces_by_dimension(&self, limits: &Limits) -> Result<Vec<Vec<Face>>> {
        self.check_dimension(limits)?;
        let mut total: usize = 0;
        if let Some(f) = self.facets.iter().max_by_key(|f| f.len()) {
            let own = if f.len() >= usize::BITS as usize {
                usize::MAX
            } else {
                (1usize << f.len()) - 1
            };
            if own > limits.max_simplices {
                return Err(Error::SimplexBudget {
                    limit: limits.max_simplices,
                });
            }
        }
        let top = self.dimension();
        let mut out = Vec::new();
        for k in 0..=top.max(-1) {
            let mut set = BTreeSet::new();
            for f in self.facets.iter().filter(|f| f.len() as i64 > k) {
                for c in f.iter().copied().combinations(k as usize + 1) {
                    if set.insert(c) {
                        total += 1;
                        if total > limits.max_simplices {
                            return Err(Error::SimplexBudget {
                                limit: limits.max_simplices,
                            });
                        }
                    }
                }
            }
            out.push(set.into_iter().collect());
        }
        Ok(out)
    }

    pub fn check_dimension(&self, limits: &Limits) -> Result<()> {
        match self.facets.iter().map(Vec::len).max() {
            Some(size) if size > limits.max_dimension.saturating_add(1) => {
                Err(Error::DimensionGuard {
                    size,
                    max_dimension: limits.max_dimension,
                })
            }
            _ => Ok(()),
        }
    }

    /// Number of `k`-simplices for each `k`, by explicit enumeration.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dimension().max(-1))
            .map(|k| self.k_faces(k as usize).len())
            .collect()
    }

    /// `Σ (−1)^k · #k-simplices`, computed without enumerating simplices via
    /// `χ(K) = χ(K − v) + 1 − χ(lk v)`.
    pub fn euler_characteristic(&self) -> i64 {
        euler_of_faces(self.facets.clone())
    }

    /// Some vertex lying in every facet, the least one if several do.
    pub fn cone_point(&self) -> Option<String> {
        let mut common = self.facets.first()?.clone();
        for f in &self.facets[1..] {
            common = intersect_sorted(&common, f);
        }
        common.first().map(|&v| self.label(v).to_string())
    }

    /// Whether `vertex` can be joined to every simplex of the complex.
    pub fn is_cone_point(&self, vertex: &str) -> bool {
        match self.vertex_index(vertex) {
            Some(v) => !self.facets.is_empty() && self.facets.iter().all(|f| f.binary_search(&v).is_ok()),
            None => false,
        }
    }

    /// Repeatedly deletes dominated vertices (a vertex `v` is dominated by
    /// `w ≠ v` when every facet containing `v` contains `w`). Each deletion is
    /// a strong deformation retraction, so the core has the homotopy type of
    /// the complex. Deterministic: vertices are scanned in label order and the
    /// least dominating vertex is used.
    pub fn strong_collapse(&self) -> StrongCollapse {
        let n = self.vertices.len();
        let mut facets = self.facets.clone();
        let mut retract: Vec<u32> = (0..n as u32).collect();
        let mut alive = vec![false; n];
        for &v in facets.iter().flatten() {
            alive[v as usize] = true;
        }
        loop {
            let mut changed = false;
            for v in 0..n as u32 {
                if !alive[v as usize] {
                    continue;
                }
                let mut common: Option<Face> = None;
                for f in facets.iter().filter(|f| f.binary_search(&v).is_ok()) {
                    common = Some(match common {
                        None => f.clone(),
                        Some(c) => intersect_sorted(&c, f),
                    });
                }
                let dominator = common
                    .unwrap_or_default()
                    .into_iter()
                    .find(|&w| w != v);
                if let Some(w) = dominator {
                    facets = maximalize(
                        facets
                            .into_iter()
                            .map(|f| f.into_iter().filter(|&u| u != v).collect())
                            .collect(),
                    );
                    alive[v as usize] = false;
                    retract[v as usize] = w;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let core_vertices: Vec<String> = (0..n)
            .filter(|&v| alive[v])
            .map(|v| self.vertices[v].clone())
            .collect();
        let mut position = vec![u32::MAX; n];
        for (p, v) in (0..n).filter(|&v| alive[v]).enumerate() {
            position[v] = p as u32;
        }
        let core_faces = facets
            .iter()
            .map(|f| f.iter().map(|&v| position[v as usize]).collect())
            .collect();
        let core = SimplicialComplex::from_faces(core_vertices, core_faces);

        let resolve = |mut v: u32| {
            while retract[v as usize] != v {
                v = retract[v as usize];
            }
            v
        };
        let inclusion_map = (0..core.vertices.len())
            .map(|p| self.vertex_index(&core.vertices[p]))
            .collect();
        let retraction_map = (0..n as u32)
            .map(|v| {
                let r = resolve(v);
                alive[r as usize].then(|| position[r as usize])
            })
            .collect();
        let inclusion = SimplicialMap::from_index_map(core.clone(), self.clone(), inclusion_map)
            .expect("core is a subcomplex");
        let retraction = SimplicialMap::from_index_map(self.clone(), core.clone(), retraction_map)
            .expect("strong collapse retraction is simplicial");
        StrongCollapse {
            core,
            inclusion,
            retraction,
        }
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: self.vertices.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| f.iter().map(|&v| self.label(v).to_string()).collect())
                .collect(),
        }
    }

    pub fn from_json(value: ComplexJson) -> Result<Self> {
        SimplicialComplex::from_facets(value.vertices, value.facets)
    }

    /// The 1-skeleton as an undirected Graphviz graph.
    pub fn to_dot(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
        let mut out = String::from("graph complex {\n");
        for v in self.active_vertices() {
            out.push_str(&format!("  {};\n", quote(self.label(v))));
        }
        for e in self.k_faces(1) {
            out.push_str(&format!(
                "  {} -- {};\n",
                quote(self.label(e[0])),
                quote(self.label(e[1]))
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn euler_of_faces(facets: Vec<Face>) -> i64 {
    match facets.len() {
        0 => return 0,
        1 => return 1,
        _ => {}
    }
    let mut common = facets[0].clone();
    for f in &facets[1..] {
        common = intersect_sorted(&common, f);
        if common.is_empty() {
            break;
        }
    }
    if !common.is_empty() {
        return 1;
    }
    let v = facets[0][0];
    let link: Vec<Face> = facets
        .iter()
        .filter(|f| f.binary_search(&v).is_ok())
        .map(|f| f.iter().copied().filter(|&u| u != v).collect())
        .collect();
    let deletion: Vec<Face> = facets
        .into_iter()
        .map(|f| f.into_iter().filter(|&u| u != v).collect())
        .collect();
    euler_of_faces(maximalize(deletion)) + 1 - euler_of_faces(maximalize(link))
}

/// `cone_point(K)` as a free function.
pub fn cone_point(complex: &SimplicialComplex) -> Option<String> {
    complex.cone_point()
}

/// Wire form: `{"vertices": [...], "facets": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

/// Result of [`SimplicialComplex::strong_collapse`]: `retraction ∘ inclusion`
/// is the identity of the core.
#[derive(Debug, Clone)]
pub struct StrongCollapse {
    pub core: SimplicialComplex,
    pub inclusion: SimplicialMap,
    pub retraction: SimplicialMap,
}

/// A vertex map carrying simplices to simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    /// Target position for each source position; `None` only for isolated
    /// declared source vertices.
    map: Vec<Option<u32>>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        SimplicialMap::from_fn(source, target, |v| vertex_map.get(v).cloned())
    }

    pub fn from_fn<F>(source: SimplicialComplex, target: SimplicialComplex, f: F) -> Result<Self>
    where
        F: Fn(&str) -> Option<String>,
    {
        let map = source
            .vertices
            .iter()
            .map(|v| match f(v) {
                Some(image) => target
                    .vertex_index(&image)
                    .map(Some)
                    .ok_or(Error::UnknownVertex(image)),
                None => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialMap::from_index_map(source, target, map)
    }

    pub(crate) fn from_index_map(
        source: SimplicialComplex,
        target: SimplicialComplex,
        map: Vec<Option<u32>>,
    ) -> Result<Self> {
        debug_assert_eq!(map.len(), source.vertices.len());
        for v in source.active_vertices() {
            if map[v as usize].is_none() {
                return Err(Error::MapNotTotal(source.label(v).to_string()));
            }
        }
        let out = SimplicialMap {
            source,
            target,
            map,
        };
        for facet in &out.source.facets {
            if !out.target.contains_face(&out.image_face(facet)) {
                return Err(Error::NotSimplicial {
                    facet: out.source.to_simplex(facet).into(),
                });
            }
        }
        Ok(out)
    }

    pub fn identity(complex: &SimplicialComplex) -> Self {
        SimplicialMap {
            map: (0..complex.vertices.len() as u32).map(Some).collect(),
            source: complex.clone(),
            target: complex.clone(),
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn image(&self, vertex: &str) -> Option<&str> {
        let v = self.source.vertex_index(vertex)?;
        self.image_index(v).map(|w| self.target.label(w))
    }

    pub(crate) fn image_index(&self, v: u32) -> Option<u32> {
        self.map[v as usize]
    }

    /// Image of a face as a sorted set (collapsed vertices merge).
    pub(crate) fn image_face(&self, face: &[u32]) -> Face {
        let mut out: Face = face
            .iter()
            .map(|&v| self.map[v as usize].expect("active vertex is mapped"))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn apply(&self, simplex: &Simplex) -> Result<Simplex> {
        let face = self
            .source
            .to_face(simplex)
            .filter(|f| self.source.contains_face(f))
            .ok_or_else(|| Error::NotASimplex {
                simplex: simplex.vertices().to_vec(),
            })?;
        Ok(self.target.to_simplex(&self.image_face(&face)))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &SimplicialMap) -> Result<SimplicialMap> {
        if first.target != self.source {
            return Err(Error::SourceTargetMismatch);
        }
        Ok(SimplicialMap {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first
                .map
                .iter()
                .map(|v| v.and_then(|w| self.map[w as usize]))
                .collect(),
        })
    }

    /// Vertex images of all 0-simplices of the source.
    pub fn vertex_table(&self) -> BTreeMap<String, String> {
        self.source
            .active_vertices()
            .into_iter()
            .map(|v| {
                (
                    self.source.label(v).to_string(),
                    self.target
                        .label(self.map[v as usize].expect("active vertex is mapped"))
                        .to_string(),
                )
            })
            .collect()
    }

    /// `F/σ = {τ | F(τ) ⊆ σ}` as a subcomplex of the source.
    pub fn fiber(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        let not_simplex = || Error::NotASimplex {
            simplex: sigma.vertices().to_vec(),
        };
        let target_face = self.target.to_face(sigma).ok_or_else(not_simplex)?;
        if !self.target.contains_face(&target_face) {
            return Err(not_simplex());
        }
        let inside: Vec<bool> = self
            .map
            .iter()
            .map(|w| w.is_some_and(|w| target_face.binary_search(&w).is_ok()))
            .collect();
        let faces = self
            .source
            .facets
            .iter()
            .map(|f| f.iter().copied().filter(|&v| inside[v as usize]).collect())
            .collect();
        Ok(SimplicialComplex::from_faces(
            self.source.vertices.clone(),
            faces,
        ))
    }
}

/// `fiber(F, σ)` as a free function.
pub fn fiber(map: &SimplicialMap, sigma: &Simplex) -> Result<SimplicialComplex> {
    map.fiber(sigma)
}

/// Nerve of a cover by subcomplexes of one complex: vertex `j` stands for
/// `cover[j]` (labels `"0".."n-1"`), and a set of indices is a simplex when
/// the corresponding subcomplexes share a simplex, equivalently a vertex.
pub fn nerve(cover: &[SimplicialComplex]) -> Result<SimplicialComplex> {
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    let mut labels: Vec<String> = (0..cover.len()).map(|j| j.to_string()).collect();
    labels.sort_unstable();
    let mut position = vec![0u32; cover.len()];
    for (p, l) in labels.iter().enumerate() {
        position[l.parse::<usize>().expect("numeric label")] = p as u32;
    }
    let mut members: BTreeMap<&str, Face> = BTreeMap::new();
    for (j, element) in cover.iter().enumerate() {
        for v in element.active_vertices() {
            members
                .entry(element.label(v))
                .or_default()
                .push(position[j]);
        }
    }
    Ok(SimplicialComplex::from_faces(
        labels,
        members.into_values().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complex(facets: &[&[&str]]) -> SimplicialComplex {
        let vertices: BTreeSet<&str> = facets.iter().flat_map(|f| f.iter().copied()).collect();
        SimplicialComplex::from_facets(vertices, facets.iter().map(|f| f.iter())).unwrap()
    }

    fn simplex(vs: &[&str]) -> Simplex {
        Simplex::new(vs.iter().copied()).unwrap()
    }

    fn figure_one_dowker() -> SimplicialComplex {
        complex(&[&["b", "c", "d"], &["a", "b"], &["a", "c"]])
    }

    #[test]
    fn simplex_validation() {
        assert_eq!(Simplex::new(Vec::<String>::new()), Err(Error::EmptySimplex));
        assert_eq!(
            Simplex::new(["a", "b", "a"]),
            Err(Error::DuplicateVertex("a".into()))
        );
        assert_eq!(simplex(&["c", "a"]).vertices(), ["a", "c"]);
        assert_eq!(simplex(&["c", "a"]).to_string(), "{a,c}");
    }

    #[test]
    fn absorption_of_faces() {
        let k = complex(&[&["a", "b"], &["b"], &["a", "b", "c"]]);
        assert_eq!(k.facets(), vec![simplex(&["a", "b", "c"])]);
        let empty = SimplicialComplex::from_facets(Vec::<String>::new(), Vec::<Vec<String>>::new())
            .unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.dimension(), -1);
        let d = figure_one_dowker();
        assert_eq!(
            d.facets(),
            vec![
                simplex(&["a", "b"]),
                simplex(&["a", "c"]),
                simplex(&["b", "c", "d"])
            ]
        );
    }

    #[test]
    fn unknown_and_duplicate_vertices() {
        assert_eq!(
            SimplicialComplex::from_facets(["a"], [["b"]]),
            Err(Error::UnknownVertex("b".into()))
        );
        assert_eq!(
            SimplicialComplex::from_facets(["a", "a"], Vec::<Vec<String>>::new()),
            Err(Error::DuplicateVertex("a".into()))
        );
    }

    #[test]
    fn membership() {
        assert!(complex(&[&["a", "b", "c"]]).contains(&simplex(&["a", "c"])));
        assert!(!complex(&[&["a", "b"], &["b", "c"]]).contains(&simplex(&["a", "c"])));
        assert!(!figure_one_dowker().contains(&simplex(&["a", "b", "c"])));
        assert!(!figure_one_dowker().contains(&simplex(&["z"])));
    }

    #[test]
    fn k_simplices_and_counts() {
        let full = complex(&[&["a", "b", "c"]]);
        assert_eq!(
            full.k_simplices(1),
            vec![simplex(&["a", "b"]), simplex(&["a", "c"]), simplex(&["b", "c"])]
        );
        assert!(SimplicialComplex::empty().k_simplices(2).is_empty());
        let d = figure_one_dowker();
        assert_eq!(
            d.k_simplices(1),
            vec![
                simplex(&["a", "b"]),
                simplex(&["a", "c"]),
                simplex(&["b", "c"]),
                simplex(&["b", "d"]),
                simplex(&["c", "d"])
            ]
        );
        assert_eq!(d.f_vector(), vec![4, 5, 1]);
        assert_eq!(full.euler_characteristic(), 1);
        assert_eq!(d.euler_characteristic(), 0);
        assert_eq!(SimplicialComplex::empty().euler_characteristic(), 0);
    }

    #[test]
    fn simplicial_maps() {
        let d = figure_one_dowker();
        assert!(SimplicialMap::from_fn(d.clone(), d.clone(), |v| Some(v.to_string())).is_ok());
        let point = complex(&[&["p"]]);
        let constant = SimplicialMap::from_fn(d.clone(), point.clone(), |_| Some("p".into())).unwrap();
        assert_eq!(constant.apply(&simplex(&["b", "c", "d"])).unwrap(), simplex(&["p"]));

        let circle = complex(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let err = SimplicialMap::from_fn(d.clone(), circle, |v| {
            Some(if v == "d" { "a" } else { v }.to_string())
        })
        .unwrap_err();
        assert_eq!(
            err,
            Error::NotSimplicial {
                facet: vec!["b".into(), "c".into(), "d".into()]
            }
        );
        assert!(matches!(
            SimplicialMap::from_fn(d, point, |v| (v != "a").then(|| "p".to_string())),
            Err(Error::MapNotTotal(_))
        ));
    }

    #[test]
    fn fibers() {
        let d = figure_one_dowker();
        let id = SimplicialMap::identity(&d);
        assert_eq!(
            id.fiber(&simplex(&["b", "c"])).unwrap().facets(),
            vec![simplex(&["b", "c"])]
        );
        let point = complex(&[&["v"]]);
        let constant = SimplicialMap::from_fn(d.clone(), point, |_| Some("v".into())).unwrap();
        assert_eq!(constant.fiber(&simplex(&["v"])).unwrap(), d);
        assert!(matches!(
            id.fiber(&simplex(&["a", "d"])),
            Err(Error::NotASimplex { .. })
        ));
    }

    #[test]
    fn nerve_examples() {
        assert_eq!(nerve(&[]), Err(Error::EmptyCover));
        let single = nerve(&[complex(&[&["a", "b"]])]).unwrap();
        assert_eq!(single.facets(), vec![simplex(&["0"])]);
        let disjoint = nerve(&[complex(&[&["a"]]), complex(&[&["b"]])]).unwrap();
        assert_eq!(disjoint.facets(), vec![simplex(&["0"]), simplex(&["1"])]);

        // Fiber of the example projection over {a,b}, covered by the inverse
        // images of {a}, {b} and {a,b}.
        let a = complex(&[&["(a,2)", "(a,4)"]]);
        let b = complex(&[&["(b,1)", "(b,2)"]]);
        let ab = complex(&[&["(a,2)", "(b,2)"]]);
        let n = nerve(&[a, b, ab]).unwrap();
        assert_eq!(n.facets(), vec![simplex(&["0", "2"]), simplex(&["1", "2"])]);
        // The element for {a,b} meets both others: it is the cone point.
        assert_eq!(n.cone_point(), Some("2".to_string()));
        assert!(n.is_cone_point("2"));
        assert!(!n.is_cone_point("0"));
    }

    #[test]
    fn cone_points() {
        assert_eq!(complex(&[&["c", "a", "b"]]).cone_point(), Some("a".into()));
        assert_eq!(complex(&[&["a", "b"], &["b", "c"], &["a", "c"]]).cone_point(), None);
        assert_eq!(SimplicialComplex::empty().cone_point(), None);
    }

    #[test]
    fn strong_collapse_of_a_cone_is_a_point() {
        let k = complex(&[&["a", "b", "c"], &["a", "c", "d"], &["a", "d", "e"]]);
        let c = k.strong_collapse();
        assert_eq!(c.core.facets().len(), 1);
        assert_eq!(c.core.f_vector(), vec![1]);
        let circle = complex(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert_eq!(circle.strong_collapse().core, circle);
    }

    #[test]
    fn dot_export() {
        let dot = figure_one_dowker().to_dot();
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert_eq!(dot.lines().filter(|l| l.ends_with(';') && !l.contains("--")).count(), 4);
        assert_eq!(SimplicialComplex::empty().to_dot(), "graph complex {\n}\n");
    }

    #[test]
    fn json_round_trip() {
        let d = figure_one_dowker();
        let json = serde_json::to_value(d.to_json()).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"vertices": ["a","b","c","d"], "facets": [["a","b"],["a","c"],["b","c","d"]]})
        );
        assert_eq!(SimplicialComplex::from_json(d.to_json()).unwrap(), d);
    }

    #[test]
    fn guards() {
        let big = SimplicialComplex::simplex((0..30).map(|i| format!("v{i:02}"))).unwrap();
        assert!(matches!(
            big.check_dimension(&Limits::default()),
            Err(Error::DimensionGuard { size: 30, max_dimension: 25 })
        ));
        let mid = SimplicialComplex::simplex((0..14).map(|i| format!("v{i:02}"))).unwrap();
        assert!(matches!(
            mid.faces_by_dimension(&Limits::default()),
            Err(Error::SimplexBudget { .. })
        ));
        assert_eq!(
            mid.faces_by_dimension(&Limits::unbounded()).unwrap()[1].len(),
            91
        );
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        proptest::collection::vec(proptest::collection::btree_set(0u8..7, 1..5), 0..7).prop_map(
            |facets| {
                let vertices: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
                SimplicialComplex::from_facets(
                    vertices,
                    facets
                        .into_iter()
                        .map(|f| f.into_iter().map(|i| format!("v{i}")).collect::<Vec<_>>()),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn rebuilding_from_facets_is_idempotent(k in arb_complex()) {
            let again = SimplicialComplex::from_facets(k.vertices().to_vec(), k.facets().into_iter().map(Vec::from)).unwrap();
            prop_assert_eq!(again, k);
        }

        #[test]
        fn closed_under_faces(k in arb_complex()) {
            for facet in k.facets() {
                for face in facet.faces() {
                    prop_assert!(k.contains(&face));
                }
            }
        }

        #[test]
        fn euler_recursion_matches_face_counts(k in arb_complex()) {
            let counted: i64 = k.f_vector().iter().enumerate()
                .map(|(i, &n)| if i % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
            prop_assert_eq!(k.euler_characteristic(), counted);
        }

        #[test]
        fn cone_point_joins_every_facet(k in arb_complex()) {
            if let Some(v) = k.cone_point() {
                for facet in k.facets() {
                    let joined = Simplex::new(facet.vertices().iter().cloned().chain([v.clone()]).collect::<BTreeSet<_>>()).unwrap();
                    prop_assert!(k.contains(&joined));
                }
            }
        }

        #[test]
        fn fibers_are_exact(k in arb_complex(), target_size in 1usize..4, seed in any::<u64>()) {
            // A random vertex map into a full simplex is always simplicial.
            let target_vertices: Vec<String> = (0..target_size).map(|i| format!("t{i}")).collect();
            let target = SimplicialComplex::from_facets(target_vertices.clone(), [
                target_vertices[..target_size.min(2)].to_vec(),
                target_vertices[target_size - 1..].to_vec(),
            ]).unwrap();
            let full = SimplicialComplex::simplex(target_vertices.clone()).unwrap();
            let pick = |v: &str| {
                let i: u64 = v[1..].parse().unwrap();
                format!("t{}", (seed.rotate_left(i as u32 * 7) % target_size as u64))
            };
            let f = SimplicialMap::from_fn(k.clone(), full, |v| Some(pick(v))).unwrap();
            for sigma in target.facets() {
                let fib = f.fiber(&sigma).unwrap();
                for facet in fib.facets() {
                    prop_assert!(f.apply(&facet).unwrap().is_face_of(&sigma));
                }
                for facet in k.facets() {
                    for tau in facet.faces() {
                        if f.apply(&tau).unwrap().is_face_of(&sigma) {
                            prop_assert!(fib.contains(&tau));
                        }
                    }
                }
            }
        }

        #[test]
        fn strong_collapse_maps_compose_to_identity(k in arb_complex()) {
            let c = k.strong_collapse();
            let back = c.retraction.compose(&c.inclusion).unwrap();
            prop_assert_eq!(back.vertex_table(), SimplicialMap::identity(&c.core).vertex_table());
            prop_assert_eq!(c.core.euler_characteristic(), k.euler_characteristic());
        }

        #[test]
        fn nerve_of_pairwise_meeting_simplices_is_full(n in 1usize..6) {
            // Every element contains the shared vertex "s".
            let cover: Vec<SimplicialComplex> = (0..n)
                .map(|i| SimplicialComplex::simplex(["s".to_string(), format!("p{i}")]).unwrap())
                .collect();
            let nv = nerve(&cover).unwrap();
            prop_assert_eq!(nv.num_facets(), 1);
            prop_assert_eq!(nv.dimension(), n as i64 - 1);
        }
    }
}
