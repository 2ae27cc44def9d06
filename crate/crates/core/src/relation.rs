//! Finite relations `R ⊆ X × Y` and morphisms between them.
//!
//! A [`Relation`] carries its label universes explicitly, so labels that take
//! part in no pair are still objects of the relation. Pairs are stored as a
//! bit matrix over label indices; labels keep the order they were given in.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Relation {
    x: Vec<String>,
    y: Vec<String>,
    x_index: HashMap<String, usize>,
    y_index: HashMap<String, usize>,
    /// `rows[i]` holds the y-indices related to `x[i]`.
    rows: Vec<FixedBitSet>,
    /// `cols[j]` holds the x-indices related to `y[j]`.
    cols: Vec<FixedBitSet>,
}

fn index_labels(labels: &[String], side: &'static str) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if index.insert(label.clone(), i).is_some() {
            return Err(Error::DuplicateLabel {
                label: label.clone(),
                side,
            });
        }
    }
    Ok(index)
}

impl Relation {
    /// Builds a relation from label universes and a pair list.
    ///
    /// Duplicate pairs are merged; duplicate labels and pairs naming labels
    /// outside the universes are rejected.
    pub fn new<S, T, P, A, B>(x_labels: S, y_labels: T, pairs: P) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        T: IntoIterator,
        T::Item: Into<String>,
        P: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let x: Vec<String> = x_labels.into_iter().map(Into::into).collect();
        let y: Vec<String> = y_labels.into_iter().map(Into::into).collect();
        let x_index = index_labels(&x, "x")?;
        let y_index = index_labels(&y, "y")?;
        let mut rel = Relation {
            rows: vec![FixedBitSet::with_capacity(y.len()); x.len()],
            cols: vec![FixedBitSet::with_capacity(x.len()); y.len()],
            x,
            y,
            x_index,
            y_index,
        };
        for (a, b) in pairs {
            let i = rel.x_pos(a.as_ref())?;
            let j = rel.y_pos(b.as_ref())?;
            rel.insert(i, j);
        }
        Ok(rel)
    }

    /// The relation `∅ ⊆ ∅ × ∅`.
    pub fn empty() -> Self {
        Relation::from_indices(Vec::new(), Vec::new(), std::iter::empty())
    }

    /// Builds from pre-validated distinct labels and in-range index pairs.
    pub(crate) fn from_indices(
        x: Vec<String>,
        y: Vec<String>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let x_index = index_labels(&x, "x").expect("distinct x labels");
        let y_index = index_labels(&y, "y").expect("distinct y labels");
        let mut rel = Relation {
            rows: vec![FixedBitSet::with_capacity(y.len()); x.len()],
            cols: vec![FixedBitSet::with_capacity(x.len()); y.len()],
            x,
            y,
            x_index,
            y_index,
        };
        for (i, j) in pairs {
            rel.insert(i, j);
        }
        rel
    }

    fn insert(&mut self, i: usize, j: usize) {
        self.rows[i].insert(j);
        self.cols[j].insert(i);
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y
    }

    pub fn x_index(&self, label: &str) -> Option<usize> {
        self.x_index.get(label).copied()
    }

    pub fn y_index(&self, label: &str) -> Option<usize> {
        self.y_index.get(label).copied()
    }

    pub(crate) fn x_pos(&self, label: &str) -> Result<usize> {
        self.x_index(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub(crate) fn y_pos(&self, label: &str) -> Result<usize> {
        self.y_index(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.count_ones(..) == 0)
    }

    pub fn contains(&self, x: &str, y: &str) -> bool {
        match (self.x_index(x), self.y_index(y)) {
            (Some(i), Some(j)) => self.rows[i].contains(j),
            _ => false,
        }
    }

    pub fn contains_indices(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// y-indices related to `x[i]`.
    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    /// x-indices related to `y[j]`: the witness set of `y[j]`.
    pub fn column(&self, j: usize) -> &FixedBitSet {
        &self.cols[j]
    }

    /// Pairs as index tuples, row-major.
    pub fn index_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.ones().map(move |j| (i, j)))
    }

    /// Pairs as labels, sorted lexicographically.
    pub fn pairs(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<(&str, &str)> = self
            .index_pairs()
            .map(|(i, j)| (self.x[i].as_str(), self.y[j].as_str()))
            .collect();
        out.sort_unstable();
        out
    }

    /// `(R^T, Y, X)`.
    pub fn transpose(&self) -> Relation {
        Relation {
            x: self.y.clone(),
            y: self.x.clone(),
            x_index: self.y_index.clone(),
            y_index: self.x_index.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    pub fn to_json(&self) -> RelationJson {
        RelationJson {
            x: self.x.clone(),
            y: self.y.clone(),
            pairs: self
                .pairs()
                .into_iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect(),
        }
    }

    pub fn from_json(value: RelationJson) -> Result<Self> {
        Relation::new(
            value.x,
            value.y,
            value.pairs.into_iter().map(|[a, b]| (a, b)),
        )
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: RelationJson = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "relation JSON, line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        Relation::from_json(value)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("relation serializes")
    }

    /// Reads `x,y` pair lines. The header line `x,y` is mandatory and the
    /// label universes are the labels seen, in first-appearance order.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse(format!("relation CSV, line 1: {e}")))?;
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
            return Err(Error::Parse(
                "relation CSV, line 1: expected header `x,y`".to_string(),
            ));
        }
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut seen_x = BTreeSet::new();
        let mut seen_y = BTreeSet::new();
        let mut pairs = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                Error::Parse(format!("relation CSV, line {line}: {e}"))
            })?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != 2 {
                return Err(Error::Parse(format!(
                    "relation CSV, line {line}: expected 2 fields, found {}",
                    record.len()
                )));
            }
            let (a, b) = (record[0].to_string(), record[1].to_string());
            if seen_x.insert(a.clone()) {
                x.push(a.clone());
            }
            if seen_y.insert(b.clone()) {
                y.push(b.clone());
            }
            pairs.push((a, b));
        }
        Relation::new(x, y, pairs)
    }

    /// Canonical CSV: header then pairs in lexicographic order. Labels used by
    /// no pair are not representable and are dropped.
    pub fn to_csv_string(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["x", "y"]).expect("in-memory write");
        for (a, b) in self.pairs() {
            writer.write_record([a, b]).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && self.rows == other.rows
    }
}

impl Eq for Relation {}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("x", &self.x)
            .field("y", &self.y)
            .field("pairs", &self.pairs())
            .finish()
    }
}

/// Wire form of a relation: `{"x": [...], "y": [...], "pairs": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationJson {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub pairs: Vec<[String; 2]>,
}

/// Each pair is kept independently with probability `density`. Labels are
/// `x0..x{nx-1}` and `y0..y{ny-1}`.
pub fn random_relation(nx: usize, ny: usize, density: f64, seed: u64) -> Relation {
    assert!(
        (0.0..=1.0).contains(&density),
        "density must lie in [0, 1], got {density}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = (0..nx).map(|i| format!("x{i}")).collect();
    let y = (0..ny).map(|j| format!("y{j}")).collect();
    let mut pairs = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Relation::from_indices(x, y, pairs)
}

/// A morphism `(f1, f2): (R0, X0, Y0) → (R1, X1, Y1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct RelationMorphism {
    source: Relation,
    target: Relation,
    /// `f1[i]` is the target x-index of source `x[i]`.
    f1: Vec<usize>,
    f2: Vec<usize>,
}

impl RelationMorphism {
    /// Validates label maps given as label-to-label tables.
    pub fn new(
        source: Relation,
        target: Relation,
        f1: &BTreeMap<String, String>,
        f2: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let lookup = |labels: &[String],
                      map: &BTreeMap<String, String>,
                      pos: &dyn Fn(&str) -> Result<usize>|
         -> Result<Vec<usize>> {
            labels
                .iter()
                .map(|l| {
                    let image = map.get(l).ok_or_else(|| Error::MapNotTotal(l.clone()))?;
                    pos(image)
                })
                .collect()
        };
        let f1 = lookup(&source.x, f1, &|l| target.x_pos(l))?;
        let f2 = lookup(&source.y, f2, &|l| target.y_pos(l))?;
        RelationMorphism::from_indices(source, target, f1, f2)
    }

    /// Validates label maps given as index vectors.
    pub fn from_indices(
        source: Relation,
        target: Relation,
        f1: Vec<usize>,
        f2: Vec<usize>,
    ) -> Result<Self> {
        if f1.len() != source.x.len() || f2.len() != source.y.len() {
            return Err(Error::InvalidArgument(
                "label maps must have one entry per source label".to_string(),
            ));
        }
        if let Some(&bad) = f1.iter().find(|&&i| i >= target.x.len()) {
            return Err(Error::UnknownLabel(format!("x index {bad}")));
        }
        if let Some(&bad) = f2.iter().find(|&&j| j >= target.y.len()) {
            return Err(Error::UnknownLabel(format!("y index {bad}")));
        }
        let mut sorted: Vec<(usize, usize)> = source.index_pairs().collect();
        sorted.sort_by(|a, b| {
            (&source.x[a.0], &source.y[a.1]).cmp(&(&source.x[b.0], &source.y[b.1]))
        });
        for (i, j) in sorted {
            if !target.contains_indices(f1[i], f2[j]) {
                return Err(Error::NotAMorphism {
                    x: source.x[i].clone(),
                    y: source.y[j].clone(),
                    fx: target.x[f1[i]].clone(),
                    fy: target.y[f2[j]].clone(),
                });
            }
        }
        Ok(RelationMorphism {
            source,
            target,
            f1,
            f2,
        })
    }

    pub fn identity(relation: &Relation) -> Self {
        RelationMorphism {
            source: relation.clone(),
            target: relation.clone(),
            f1: (0..relation.x.len()).collect(),
            f2: (0..relation.y.len()).collect(),
        }
    }

    pub fn source(&self) -> &Relation {
        &self.source
    }

    pub fn target(&self) -> &Relation {
        &self.target
    }

    pub fn f1_indices(&self) -> &[usize] {
        &self.f1
    }

    pub fn f2_indices(&self) -> &[usize] {
        &self.f2
    }

    pub fn f1(&self, x: &str) -> Option<&str> {
        let i = self.source.x_index(x)?;
        Some(&self.target.x[self.f1[i]])
    }

    pub fn f2(&self, y: &str) -> Option<&str> {
        let j = self.source.y_index(y)?;
        Some(&self.target.y[self.f2[j]])
    }

    /// `f^T = (f2, f1): R0^T → R1^T`.
    pub fn transpose(&self) -> RelationMorphism {
        RelationMorphism {
            source: self.source.transpose(),
            target: self.target.transpose(),
            f1: self.f2.clone(),
            f2: self.f1.clone(),
        }
    }

    /// `self ∘ first`, i.e. apply `first` then `self`.
    pub fn compose(&self, first: &RelationMorphism) -> Result<RelationMorphism> {
        if first.target != self.source {
            return Err(Error::SourceTargetMismatch);
        }
        Ok(RelationMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            f1: first.f1.iter().map(|&i| self.f1[i]).collect(),
            f2: first.f2.iter().map(|&j| self.f2[j]).collect(),
        })
    }

    pub fn to_json(&self) -> MorphismJson {
        let table = |labels: &[String], map: &[usize], target: &[String]| {
            labels
                .iter()
                .zip(map)
                .map(|(l, &t)| (l.clone(), target[t].clone()))
                .collect()
        };
        MorphismJson {
            source: self.source.to_json(),
            target: self.target.to_json(),
            f1: table(&self.source.x, &self.f1, &self.target.x),
            f2: table(&self.source.y, &self.f2, &self.target.y),
        }
    }

    pub fn from_json(value: MorphismJson) -> Result<Self> {
        RelationMorphism::new(
            Relation::from_json(value.source)?,
            Relation::from_json(value.target)?,
            &value.f1,
            &value.f2,
        )
    }
}

/// Composes `g ∘ f`.
pub fn compose_morphisms(g: &RelationMorphism, f: &RelationMorphism) -> Result<RelationMorphism> {
    g.compose(f)
}

impl fmt::Debug for RelationMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = self.to_json();
        f.debug_struct("RelationMorphism")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("f1", &json.f1)
            .field("f2", &json.f2)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: RelationJson,
    pub target: RelationJson,
    pub f1: BTreeMap<String, String>,
    pub f2: BTreeMap<String, String>,
}

/// Builds a valid morphism out of `source` by drawing the label maps first and
/// then taking the image of `source` plus independent noise pairs (kept with
/// probability `noise`) as the target relation.
///
/// Target labels are `u0..` and `v0..`; the target universes are no larger
/// than the source ones (but never empty when the source side is non-empty).
pub fn random_morphism(source: Relation, noise: f64, seed: u64) -> RelationMorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = source.x.len();
    let ny = source.y.len();
    let mx = if nx == 0 { rng.gen_range(0..=1) } else { rng.gen_range(1..=nx) };
    let my = if ny == 0 { rng.gen_range(0..=1) } else { rng.gen_range(1..=ny) };
    let f1: Vec<usize> = (0..nx).map(|_| rng.gen_range(0..mx)).collect();
    let f2: Vec<usize> = (0..ny).map(|_| rng.gen_range(0..my)).collect();
    let mut pairs: BTreeSet<(usize, usize)> =
        source.index_pairs().map(|(i, j)| (f1[i], f2[j])).collect();
    for i in 0..mx {
        for j in 0..my {
            if rng.gen_bool(noise) {
                pairs.insert((i, j));
            }
        }
    }
    let target = Relation::from_indices(
        (0..mx).map(|i| format!("u{i}")).collect(),
        (0..my).map(|j| format!("v{j}")).collect(),
        pairs,
    );
    RelationMorphism::from_indices(source, target, f1, f2).expect("image closure is a morphism")
}
