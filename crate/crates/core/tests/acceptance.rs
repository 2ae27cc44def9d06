//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any fails.
//!
//! Reference values come from brute-force oracles written here, independent
//! of the library's algorithms.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dowker_core::complex::Limits;
use dowker_core::concepts::{brute_force_concepts, enumerate_concepts, FormalConcept};
use dowker_core::dowker::{
    check_naturality, dowker_complex, dowker_map, inverse_image_simplex, is_rectangle, pi, pi_hat,
    rectangle_complex, rectangle_map, transpose_dowker_complex, witness_y,
};
use dowker_core::fixtures::figure_one;
use dowker_core::homology::{
    check_fiber_hypothesis, check_functorial_dowker, cone_is_acyclic, homology,
    homology_map_matrix, is_quasi_isomorphism, literal_homology, psi_star, Coefficients,
    HomologyResult, IntMatrix, PrimeField, Rationals,
};
use dowker_core::relation::{random_morphism, random_relation, Relation, RelationMorphism};
use dowker_core::verify::{check_algebra, check_smith, splitmix64};
use dowker_core::{Simplex, SimplicialComplex};
use num_bigint::BigInt;

// ---------------------------------------------------------------- oracles

type Facets = BTreeSet<Vec<String>>;

fn facet_set(k: &SimplicialComplex) -> Facets {
    k.facets().into_iter().map(Into::into).collect()
}

fn labels(items: &[&[&str]]) -> Facets {
    items
        .iter()
        .map(|f| f.iter().map(|s| s.to_string()).collect())
        .collect()
}

/// All faces of the given facets, grouped by size.
fn all_simplices(facets: &Facets) -> BTreeMap<usize, BTreeSet<Vec<String>>> {
    let mut out: BTreeMap<usize, BTreeSet<Vec<String>>> = BTreeMap::new();
    for f in facets {
        for mask in 1u64..(1 << f.len()) {
            let s: Vec<String> = (0..f.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| f[i].clone())
                .collect();
            out.entry(s.len()).or_default().insert(s);
        }
    }
    out
}

fn maximal(sets: Vec<BTreeSet<String>>) -> Facets {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .map(|s| s.iter().cloned().collect())
        .collect()
}

/// `D(R)` from the definition: subsets of `X` with a common witness.
fn oracle_dowker(r: &Relation) -> Facets {
    let witness_sets: Vec<BTreeSet<String>> = r
        .y_labels()
        .iter()
        .map(|y| {
            r.x_labels()
                .iter()
                .filter(|x| r.contains(x, y))
                .cloned()
                .collect()
        })
        .filter(|s: &BTreeSet<String>| !s.is_empty())
        .collect();
    maximal(witness_sets)
}

/// `E(R)` from the definition: every subset of `R` whose coordinate
/// projections span a rectangle in `R`. Only for relations with few pairs.
fn oracle_rectangles(r: &Relation) -> Vec<Vec<(String, String)>> {
    let pairs: Vec<(String, String)> = r
        .pairs()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert!(pairs.len() <= 16);
    (1u32..(1 << pairs.len()))
        .map(|mask| {
            (0..pairs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pairs[i].clone())
                .collect::<Vec<_>>()
        })
        .filter(|tau| {
            let xs: BTreeSet<&String> = tau.iter().map(|p| &p.0).collect();
            let ys: BTreeSet<&String> = tau.iter().map(|p| &p.1).collect();
            xs.iter().all(|x| ys.iter().all(|y| r.contains(x, y)))
        })
        .collect()
}

/// Concepts by closing every subset of objects.
fn oracle_concepts(r: &Relation) -> BTreeSet<(Vec<String>, Vec<String>)> {
    let xs = r.x_labels();
    let ys = r.y_labels();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1 << xs.len()) {
        let a: Vec<&String> = (0..xs.len()).filter(|i| mask >> i & 1 == 1).map(|i| &xs[i]).collect();
        let mut intent: Vec<String> = ys
            .iter()
            .filter(|y| a.iter().all(|x| r.contains(x, y)))
            .cloned()
            .collect();
        let mut extent: Vec<String> = xs
            .iter()
            .filter(|x| intent.iter().all(|y| r.contains(x, y)))
            .cloned()
            .collect();
        extent.sort();
        intent.sort();
        out.insert((extent, intent));
    }
    out
}

/// Non-zero diagonal of a Smith form by plain gcd elimination on `i128`.
#[allow(clippy::needless_range_loop)]
fn oracle_invariant_factors(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = true;
        for i in t + 1..rows {
            let q = m[i][t] / m[t][t];
            for j in t..cols {
                m[i][j] -= q * m[t][j];
            }
            done &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / m[t][t];
            for i in t..rows {
                m[i][j] -= q * m[i][t];
            }
            done &= m[t][j] == 0;
        }
        if !done {
            continue;
        }
        let p = m[t][t];
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0)) {
            for j in t..cols {
                m[t][j] += m[i][j];
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// Integral homology of a complex given by facets, from explicit boundary
/// matrices: `(betti, torsion)` per degree `0..`.
fn oracle_homology(facets: &Facets) -> Vec<(usize, Vec<i128>)> {
    let simplices = all_simplices(facets);
    let top = simplices.keys().max().copied().unwrap_or(0);
    let basis = |size: usize| -> Vec<Vec<String>> {
        simplices.get(&size).map(|s| s.iter().cloned().collect()).unwrap_or_default()
    };
    // factors[k] are the invariant factors of ∂ from size k+1 to size k.
    let mut factors: BTreeMap<usize, Vec<i128>> = BTreeMap::new();
    for size in 2..=top {
        let below = basis(size - 1);
        let here = basis(size);
        let mut m = vec![vec![0i128; here.len()]; below.len()];
        for (j, s) in here.iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let row = below.binary_search(&face).unwrap();
                m[row][j] = if i % 2 == 0 { 1 } else { -1 };
            }
        }
        factors.insert(size - 1, oracle_invariant_factors(m));
    }
    (1..=top)
        .map(|size| {
            let out_rank = factors.get(&(size - 1)).map_or(0, Vec::len);
            let incoming = factors.get(&size).cloned().unwrap_or_default();
            let betti = basis(size).len() - out_rank - incoming.len();
            (betti, incoming.into_iter().filter(|&d| d > 1).collect())
        })
        .collect()
}

fn matches_oracle(h: &HomologyResult, oracle: &[(usize, Vec<i128>)]) -> bool {
    let dims = h.groups.iter().filter(|g| g.dim >= 0).count().max(oracle.len());
    (0..dims).all(|d| {
        let (b, t) = oracle.get(d).cloned().unwrap_or_default();
        let torsion: Vec<i128> = h
            .torsion(d as i64)
            .iter()
            .map(|v| i128::try_from(v).unwrap())
            .collect();
        h.betti(d as i64) == b && torsion == t
    })
}

/// Independent check of the morphism condition.
fn oracle_is_morphism(f: &RelationMorphism) -> bool {
    f.source().pairs().iter().all(|(x, y)| {
        f.target()
            .contains(f.f1(x).unwrap(), f.f2(y).unwrap())
    })
}

// ---------------------------------------------------------------- corpus

const DENSITIES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// `count` relations with `1..=max` objects and attributes, cycling through
/// the density grid.
fn corpus(count: usize, max: usize, seed: u64) -> Vec<Relation> {
    (0..count)
        .map(|i| {
            let s = splitmix64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let nx = 1 + (s % max as u64) as usize;
            let ny = 1 + ((s >> 16) % max as u64) as usize;
            random_relation(nx, ny, DENSITIES[i % DENSITIES.len()], s >> 32)
        })
        .collect()
}

/// `count` random morphisms. Half of them start from relations whose Dowker
/// complex has a 1-cycle, so that maps on higher homology are exercised.
fn morphisms(count: usize, max: usize, seed: u64) -> Vec<RelationMorphism> {
    let plain = corpus(count - count / 2, max, seed);
    let with_cycles = corpus(100 * count, max + 1, seed ^ 0xC0FFEE)
        .into_iter()
        .filter(|r| {
            homology(&dowker_complex(r), false, &Limits::default())
                .is_ok_and(|h| h.betti(1) > 0)
        })
        .take(count / 2);
    plain
        .into_iter()
        .chain(with_cycles)
        .enumerate()
        .map(|(i, r)| random_morphism(r, 0.1, splitmix64(seed.wrapping_add(i as u64))))
        .collect()
}

// ---------------------------------------------------------------- criteria

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn criterion_1() -> Outcome {
    let r = figure_one();
    let d = dowker_complex(&r);
    let dt = transpose_dowker_complex(&r);
    let e = rectangle_complex(&r).unwrap();
    let want_d = labels(&[&["a", "b"], &["a", "c"], &["b", "c", "d"]]);
    let want_dt = labels(&[&["1", "2"], &["1", "3"], &["1", "4"], &["2", "4"]]);

    let rects = oracle_rectangles(&r);
    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for t in &rects {
        *by_size.entry(t.len()).or_default() += 1;
    }
    let rect_sets: Vec<BTreeSet<String>> = rects
        .iter()
        .map(|t| t.iter().map(|(x, y)| dowker_core::pair_label(x, y)).collect())
        .collect();
    let oracle_e = maximal(rect_sets);

    let f = e.f_vector();
    let ok = facet_set(&d) == want_d
        && facet_set(&d) == oracle_dowker(&r)
        && facet_set(&dt) == want_dt
        && facet_set(&dt) == oracle_dowker(&r.transpose())
        && e.vertices().len() == 8
        && f == [8, 9, 1]
        && by_size.get(&1) == Some(&8)
        && by_size.get(&2) == Some(&9)
        && by_size.get(&3) == Some(&1)
        && by_size.len() == 3
        && e.num_facets() == 7
        && facet_set(&e) == oracle_e;
    outcome(ok, format!("E(R) f-vector {f:?}, {} facets", e.num_facets()))
}

fn criterion_2() -> Outcome {
    let r = figure_one();
    let complexes = [
        ("D(R)", dowker_complex(&r)),
        ("D(R^T)", transpose_dowker_complex(&r)),
        ("E(R)", rectangle_complex(&r).unwrap()),
    ];
    let mut ok = true;
    for (_, k) in &complexes {
        let h = homology(k, false, &Limits::default()).unwrap();
        ok &= h.betti_numbers() == [1, 1];
        ok &= h.groups.iter().all(|g| g.torsion.is_empty());
        ok &= matches_oracle(&h, &oracle_homology(&facet_set(k)));
        ok &= h == literal_homology(k, false, Coefficients::Integers, &Limits::default()).unwrap();
    }
    outcome(ok, "betti (1,1), no torsion, for D(R), D(R^T), E(R)")
}

fn criterion_3() -> Outcome {
    let r = figure_one();
    let lim = Limits::default();
    let pi_ok = is_quasi_isomorphism(&pi(&r), &lim).unwrap() && cone_is_acyclic(&pi(&r), &lim).unwrap();
    let hat_ok = is_quasi_isomorphism(&pi_hat(&r), &lim).unwrap() && cone_is_acyclic(&pi_hat(&r), &lim).unwrap();
    let psi = psi_star(&r, 1, &Rationals, &lim).unwrap();
    let psi_ok = psi.rows() == 1 && psi.cols() == 1 && psi.inverse(&Rationals).is_some();
    outcome(
        pi_ok && hat_ok && psi_ok,
        format!("pi {pi_ok}, pi_hat {hat_ok}, psi_1 = {:?}", psi.to_strings()),
    )
}

fn concept_pairs(cs: &[FormalConcept]) -> BTreeSet<(Vec<String>, Vec<String>)> {
    cs.iter().map(|c| (c.extent.clone(), c.intent.clone())).collect()
}

fn criterion_4() -> Outcome {
    let rs = corpus(200, 8, 4);
    let mut bad = 0;
    let mut total = 0;
    for r in &rs {
        let fast = enumerate_concepts(r);
        let brute = brute_force_concepts(r).unwrap();
        total += fast.len();
        let same = fast.len() == concept_pairs(&fast).len()
            && concept_pairs(&fast) == concept_pairs(&brute)
            && concept_pairs(&fast) == oracle_concepts(r);
        bad += usize::from(!same);
    }
    outcome(bad == 0, format!("{} relations, {total} concepts, {bad} mismatches", rs.len()))
}

fn criterion_5(rs: &[Relation]) -> Outcome {
    let lim = Limits::default();
    let mut bad = 0;
    let mut with_holes = 0;
    for r in rs {
        let d = homology(&dowker_complex(r), false, &lim).unwrap();
        let dt = homology(&transpose_dowker_complex(r), false, &lim).unwrap();
        let e = homology(pi(r).source(), false, &lim).unwrap();
        // Both Dowker complexes are small enough for the explicit oracle.
        let oracle_ok = matches_oracle(&d, &oracle_homology(&oracle_dowker(r)))
            && matches_oracle(&dt, &oracle_homology(&oracle_dowker(&r.transpose())));
        if !(oracle_ok && d.same_groups(&dt) && d.same_groups(&e)) {
            bad += 1;
        }
        with_holes += usize::from(d.betti_numbers().iter().skip(1).any(|&b| b > 0));
    }
    outcome(bad == 0, format!("{} relations ({with_holes} with higher homology), {bad} disagreements", rs.len()))
}

fn criterion_6(rs: &[Relation]) -> Outcome {
    let lim = Limits::default();
    let mut bad = 0;
    let mut literal = 0;
    let literal_limits = Limits {
        max_dimension: 6,
        max_simplices: 400,
    };
    for r in rs {
        for map in [pi(r), pi_hat(r)] {
            if !is_quasi_isomorphism(&map, &lim).unwrap() {
                bad += 1;
            }
            // Cross-check on the uncollapsed cone when it is small enough.
            if let Ok(acyclic) = cone_is_acyclic(&map, &literal_limits) {
                literal += 1;
                bad += usize::from(!acyclic);
            }
        }
    }
    outcome(
        bad == 0,
        format!("{} maps, {literal} also checked on full cones, {bad} failures", 2 * rs.len()),
    )
}

fn criterion_7() -> Outcome {
    let rs = corpus(100, 5, 7);
    let lim = Limits::default();
    let mut checked = 0;
    let mut bad = 0;
    for r in &rs {
        let d = dowker_complex(r);
        for k in 0..=d.dimension().clamp(-1, 6) {
            for sigma in d.k_simplices(k as usize) {
                checked += 1;
                let report = check_fiber_hypothesis(r, &sigma, &lim).unwrap();
                // σ × Y(σ), computed directly, must be the reported simplex and
                // a rectangle of R.
                let ys: Vec<&String> = r
                    .y_labels()
                    .iter()
                    .filter(|y| sigma.vertices().iter().all(|x| r.contains(x, y)))
                    .collect();
                let block: Vec<(String, String)> = sigma
                    .vertices()
                    .iter()
                    .flat_map(|x| ys.iter().map(move |y| (x.clone(), (*y).clone())))
                    .collect();
                let expected = Simplex::new(block.iter().map(|(x, y)| dowker_core::pair_label(x, y))).unwrap();
                let direct_ok = !ys.is_empty()
                    && is_rectangle(r, &block)
                    && inverse_image_simplex(r, &sigma).unwrap() == expected
                    && witness_y(r, &sigma).unwrap().len() == ys.len()
                    && report.inverse_image == Vec::<String>::from(expected);
                if !(report.passed() && direct_ok) {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{} relations, {checked} simplices, {bad} failures", rs.len()))
}

fn criterion_8(fs: &[RelationMorphism]) -> Outcome {
    let mut bad = 0;
    let mut vertices = 0;
    for f in fs {
        let report = check_naturality(f);
        vertices += report.vertices_checked;
        // Direct vertex-by-vertex evaluation of both squares.
        let e_f = rectangle_map(f);
        let (p0, p1, h0, h1) = (pi(f.source()), pi(f.target()), pi_hat(f.source()), pi_hat(f.target()));
        let d_f = dowker_map(f);
        let d_ft = dowker_map(&f.transpose());
        let direct = f.source().pairs().iter().all(|(x, y)| {
            let v = dowker_core::pair_label(x, y);
            let image = e_f.image(&v).unwrap();
            d_f.image(p0.image(&v).unwrap()) == p1.image(image)
                && d_ft.image(h0.image(&v).unwrap()) == h1.image(image)
                && p1.image(image) == f.f1(x)
                && h1.image(image) == f.f2(y)
        });
        if !(oracle_is_morphism(f) && report.passed() && direct) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{} morphisms, {vertices} vertices, {bad} failures", fs.len()))
}

fn criterion_9(fs: &[RelationMorphism]) -> Outcome {
    let lim = Limits::default();
    let z2 = PrimeField::new(2).unwrap();
    let mut bad = 0;
    let mut nontrivial = 0;
    for f in fs {
        for k in 0..=2 {
            let q = check_functorial_dowker(f, k, &Rationals, &lim).unwrap();
            let p = check_functorial_dowker(f, k, &z2, &lim).unwrap();
            bad += usize::from(!(q && p));
            if k > 0 && homology_map_matrix(&dowker_map(f), k, &Rationals, &lim).unwrap().cols() > 0 {
                nontrivial += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("{} morphisms x 3 degrees x 2 fields, {nontrivial} with H_k != 0 (k > 0), {bad} failures", fs.len()),
    )
}

fn criterion_10(rs: &[Relation]) -> Outcome {
    let lim = Limits::default();
    let mut bad = 0;
    for r in rs {
        bad += usize::from(check_algebra(r, &lim).is_err());
    }
    // Smith forms of random integer matrices against the oracle.
    let mut smith_bad = 0;
    for i in 0..300u64 {
        let s = splitmix64(i);
        let rows = 1 + (s % 6) as usize;
        let cols = 1 + ((s >> 8) % 6) as usize;
        let data: Vec<Vec<i128>> = (0..rows)
            .map(|a| {
                (0..cols)
                    .map(|b| (splitmix64(s ^ ((a * 8 + b) as u64)) % 13) as i128 - 6)
                    .collect()
            })
            .collect();
        let m = IntMatrix::from_rows(
            &data.iter().map(|row| row.iter().map(|&v| BigInt::from(v)).collect()).collect::<Vec<Vec<BigInt>>>(),
        );
        let ours: Vec<i128> = dowker_core::homology::invariant_factors(&m)
            .iter()
            .map(|v| i128::try_from(v).unwrap())
            .collect();
        if !check_smith(&m) || ours != oracle_invariant_factors(data) {
            smith_bad += 1;
        }
    }
    outcome(
        bad == 0 && smith_bad == 0,
        format!("{} relations, 300 random matrices, {bad} + {smith_bad} failures", rs.len()),
    )
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture may be passed; none apply here.
    let duality = corpus(500, 6, 5);
    let maps = morphisms(200, 5, 8);
    type Criterion<'a> = (&'a str, Option<Duration>, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("worked example complexes", Some(Duration::from_secs(1)), Box::new(criterion_1)),
        ("worked example homology", None, Box::new(criterion_2)),
        ("worked example quasi-isomorphisms and psi", None, Box::new(criterion_3)),
        ("concept oracle equivalence", Some(Duration::from_secs(120)), Box::new(criterion_4)),
        ("Dowker duality campaign", Some(Duration::from_secs(600)), Box::new(|| criterion_5(&duality))),
        ("quasi-isomorphism campaign", None, Box::new(|| criterion_6(&duality))),
        ("fiber hypothesis campaign", None, Box::new(criterion_7)),
        ("strict naturality", None, Box::new(|| criterion_8(&maps))),
        ("functorial Dowker on homology", None, Box::new(|| criterion_9(&maps))),
        ("algebraic self-checks", None, Box::new(|| criterion_10(&duality))),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => {
                let in_time = budget.is_none_or(|b| elapsed <= b);
                let detail = if in_time {
                    o.detail
                } else {
                    format!("{} (over the {:?} budget)", o.detail, budget.unwrap())
                };
                (o.ok && in_time, detail)
            }
            Err(_) => (false, "panicked".to_string()),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {:>2}: {name}: {detail} [{:.2?}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
