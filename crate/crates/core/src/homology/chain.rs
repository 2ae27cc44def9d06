//! Simplicial chain complexes over `Z`, induced chain maps and mapping cones.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::complex::{Face, Limits, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};

use super::matrix::IntMatrix;

/// A bounded chain complex of free abelian groups with labeled bases.
///
/// Degrees run from `min_degree` to `min_degree + bases.len() − 1`; the
/// boundary out of degree `d` is `boundaries[d − min_degree]`, with zero
/// rows when `d` is the lowest degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    min_degree: i64,
    bases: Vec<Vec<String>>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Panics unless the boundary shapes match the bases.
    pub fn new(min_degree: i64, bases: Vec<Vec<String>>, boundaries: Vec<IntMatrix>) -> Self {
        assert_eq!(bases.len(), boundaries.len(), "one boundary per degree");
        for (i, d) in boundaries.iter().enumerate() {
            let below = if i == 0 { 0 } else { bases[i - 1].len() };
            assert_eq!((d.rows(), d.cols()), (below, bases[i].len()), "boundary shape in degree {}", min_degree + i as i64);
        }
        ChainComplex {
            min_degree,
            bases,
            boundaries,
        }
    }

    /// The complex with no non-zero groups.
    pub fn zero(min_degree: i64) -> Self {
        ChainComplex::new(min_degree, Vec::new(), Vec::new())
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Highest degree with a (possibly empty) group; `min_degree − 1` when
    /// there are none.
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.bases.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_degree..=self.max_degree()
    }

    fn slot(&self, degree: i64) -> Option<usize> {
        (degree >= self.min_degree && degree <= self.max_degree())
            .then(|| (degree - self.min_degree) as usize)
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.slot(degree).map_or(0, |i| self.bases[i].len())
    }

    pub fn basis(&self, degree: i64) -> &[String] {
        self.slot(degree).map_or(&[], |i| &self.bases[i])
    }

    /// `∂_d: C_d → C_{d−1}`, a zero-size matrix outside the range.
    pub fn boundary(&self, degree: i64) -> IntMatrix {
        match self.slot(degree) {
            Some(i) => self.boundaries[i].clone(),
            None => IntMatrix::zeros(self.rank(degree - 1), 0),
        }
    }

    pub(crate) fn boundary_ref(&self, degree: i64) -> Option<&IntMatrix> {
        self.slot(degree).map(|i| &self.boundaries[i])
    }

    /// `∂_{d−1} ∘ ∂_d = 0` in every degree.
    pub fn check_d_squared(&self) -> bool {
        self.degrees().skip(1).all(|d| {
            let below = &self.boundaries[(d - 1 - self.min_degree) as usize];
            let here = &self.boundaries[(d - self.min_degree) as usize];
            below.mul(here).is_zero()
        })
    }

    /// Alternating sum of ranks over non-negative degrees.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .filter(|&d| d >= 0)
            .map(|d| if d % 2 == 0 { 1 } else { -1 } * self.rank(d) as i64)
            .sum()
    }
}

fn face_label(complex: &SimplicialComplex, face: &[u32]) -> String {
    complex.to_simplex(face).to_string()
}

/// Label of the augmentation basis element in degree −1.
pub const EMPTY_SIMPLEX: &str = "{}";

/// Sign `(−1)^i` where `i` is the omitted position.
fn boundary_matrix(faces: &[Face], below: &[Face]) -> IntMatrix {
    let mut m = IntMatrix::zeros(below.len(), faces.len());
    for (j, f) in faces.iter().enumerate() {
        for i in 0..f.len() {
            let mut sub = f.clone();
            sub.remove(i);
            let row = below.binary_search(&sub).expect("faces are closed downwards");
            let sign = if i % 2 == 0 { 1 } else { -1 };
            m.set(row, j, BigInt::from(sign));
        }
    }
    m
}

/// Simplices grouped by degree, with an empty face in degree −1 when
/// `reduced`.
fn graded_faces(complex: &SimplicialComplex, reduced: bool, limits: &Limits) -> Result<Vec<Vec<Face>>> {
    let mut faces = complex.faces_by_dimension(limits)?;
    if reduced {
        faces.insert(0, vec![Vec::new()]);
    }
    Ok(faces)
}

/// Simplicial chain complex of `K` in canonical bases: sorted `k`-simplices,
/// `∂` with sign `(−1)^i` on the face omitting the `i`-th vertex, and an
/// augmentation to `Z` in degree −1 when `reduced`.
pub fn chain_complex(complex: &SimplicialComplex, reduced: bool, limits: &Limits) -> Result<ChainComplex> {
    let faces = graded_faces(complex, reduced, limits)?;
    Ok(complex_from_faces(complex, &faces, reduced))
}

fn complex_from_faces(complex: &SimplicialComplex, faces: &[Vec<Face>], reduced: bool) -> ChainComplex {
    let min_degree = if reduced { -1 } else { 0 };
    let bases = faces
        .iter()
        .map(|group| {
            group
                .iter()
                .map(|f| {
                    if f.is_empty() {
                        EMPTY_SIMPLEX.to_string()
                    } else {
                        face_label(complex, f)
                    }
                })
                .collect()
        })
        .collect();
    let boundaries = (0..faces.len())
        .map(|i| {
            if i == 0 {
                IntMatrix::zeros(0, faces[0].len())
            } else {
                boundary_matrix(&faces[i], &faces[i - 1])
            }
        })
        .collect();
    ChainComplex::new(min_degree, bases, boundaries)
}

/// Per-degree matrices `f_d: A_d → B_d` for `d` in the source's range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    maps: Vec<IntMatrix>,
}

impl ChainMap {
    /// Validates shapes and the chain-map square.
    pub fn new(source: ChainComplex, target: ChainComplex, maps: Vec<IntMatrix>) -> Result<Self> {
        if maps.len() != source.bases.len() {
            return Err(Error::InvalidArgument(
                "one chain-map matrix per source degree".into(),
            ));
        }
        for (d, m) in source.degrees().zip(&maps) {
            if (m.rows(), m.cols()) != (target.rank(d), source.rank(d)) {
                return Err(Error::InvalidArgument(format!(
                    "chain-map matrix in degree {d} has the wrong shape"
                )));
            }
        }
        let map = ChainMap {
            source,
            target,
            maps,
        };
        if !map.check_square() {
            return Err(Error::InvalidArgument(
                "matrices do not commute with the boundaries".into(),
            ));
        }
        Ok(map)
    }

    pub fn zero(source: ChainComplex, target: ChainComplex) -> Self {
        let maps = source
            .degrees()
            .map(|d| IntMatrix::zeros(target.rank(d), source.rank(d)))
            .collect();
        ChainMap {
            source,
            target,
            maps,
        }
    }

    pub fn identity(complex: &ChainComplex) -> Self {
        ChainMap {
            source: complex.clone(),
            target: complex.clone(),
            maps: complex
                .degrees()
                .map(|d| IntMatrix::identity(complex.rank(d)))
                .collect(),
        }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// `f_d`, zero outside the source's range.
    pub fn degree(&self, d: i64) -> IntMatrix {
        match self.source.slot(d) {
            Some(i) => self.maps[i].clone(),
            None => IntMatrix::zeros(self.target.rank(d), self.source.rank(d)),
        }
    }

    /// `∂^B_d · f_d = f_{d−1} · ∂^A_d` in every degree.
    pub fn check_square(&self) -> bool {
        let lo = self.source.min_degree.min(self.target.min_degree);
        let hi = self.source.max_degree().max(self.target.max_degree()) + 1;
        (lo..=hi).all(|d| {
            let left = self.target.boundary(d).mul(&self.degree(d));
            let right = self.degree(d - 1).mul(&self.source.boundary(d));
            left == right
        })
    }
}

/// Linearization of a simplicial map: an injective image gets the sign of
/// the permutation sorting it, a degenerate image maps to zero. In degree −1
/// the map is `[1]`.
pub fn induced_chain_map(map: &SimplicialMap, reduced: bool, limits: &Limits) -> Result<ChainMap> {
    let source_faces = graded_faces(map.source(), reduced, limits)?;
    let target_faces = graded_faces(map.target(), reduced, limits)?;
    let source = complex_from_faces(map.source(), &source_faces, reduced);
    let target = complex_from_faces(map.target(), &target_faces, reduced);
    let empty = Vec::new();
    let maps = source_faces
        .iter()
        .enumerate()
        .map(|(i, group)| {
            let below = target_faces.get(i).unwrap_or(&empty);
            let mut m = IntMatrix::zeros(below.len(), group.len());
            for (j, face) in group.iter().enumerate() {
                let images: Vec<u32> = face
                    .iter()
                    .map(|&v| map.image_index(v).expect("active vertex is mapped"))
                    .collect();
                let mut sorted = images.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() < images.len() {
                    continue;
                }
                let row = below.binary_search(&sorted).expect("image is a simplex");
                let value = if inversions(&images).is_multiple_of(2) {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                m.set(row, j, value);
            }
            m
        })
        .collect();
    Ok(ChainMap {
        source,
        target,
        maps,
    })
}

fn inversions(v: &[u32]) -> usize {
    (0..v.len())
        .map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count())
        .sum()
}

/// `Cone(f)_d = A_{d−1} ⊕ B_d` with `∂(a, b) = (−∂a, ∂b − f(a))`.
pub fn mapping_cone(map: &ChainMap) -> ChainComplex {
    let a = &map.source;
    let b = &map.target;
    let lo = b.min_degree.min(a.min_degree + 1);
    let hi = b.max_degree().max(a.max_degree() + 1);
    if hi < lo {
        return ChainComplex::zero(lo);
    }
    let bases: Vec<Vec<String>> = (lo..=hi)
        .map(|d| {
            a.basis(d - 1)
                .iter()
                .map(|s| format!("a:{s}"))
                .chain(b.basis(d).iter().map(|s| format!("b:{s}")))
                .collect()
        })
        .collect();
    let boundaries = (lo..=hi)
        .map(|d| {
            let (ra, rb) = (a.rank(d - 2), b.rank(d - 1));
            let (ca, cb) = (a.rank(d - 1), b.rank(d));
            if d == lo {
                return IntMatrix::zeros(0, ca + cb);
            }
            let mut m = IntMatrix::zeros(ra + rb, ca + cb);
            let da = a.boundary(d - 1);
            let db = b.boundary(d);
            let f = map.degree(d - 1);
            for i in 0..ra {
                for j in 0..ca {
                    let v = da.get(i, j);
                    if !v.is_zero() {
                        m.set(i, j, -v.clone());
                    }
                }
            }
            for i in 0..rb {
                for j in 0..ca {
                    let v = f.get(i, j);
                    if !v.is_zero() {
                        m.set(ra + i, j, -v.clone());
                    }
                }
                for j in 0..cb {
                    let v = db.get(i, j);
                    if !v.is_zero() {
                        m.set(ra + i, ca + j, v.clone());
                    }
                }
            }
            m
        })
        .collect();
    ChainComplex::new(lo, bases, boundaries)
}
