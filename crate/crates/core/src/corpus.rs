//! Reference complexes and maps, plus seeded random complexes and elements.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Complex, VertexId};
use crate::functor::{compose, VertexMap};
use crate::incidence::{basis_pairs, IncidenceElement};
use crate::stories::{Story, StoryElement};
use crate::Scalar;

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn build(vertices: &[&str], facets: &[&[&str]]) -> Arc<Complex> {
    let facets: Vec<Vec<&str>> = facets.iter().map(|f| f.to_vec()).collect();
    Arc::new(Complex::build(vertices, &facets).expect("corpus complex"))
}

/// `{1}, {2}, {1,2}`.
pub fn edge() -> Arc<Complex> {
    build(&["1", "2"], &[&["1", "2"]])
}

pub fn full_triangle() -> Arc<Complex> {
    full_simplex(3)
}

pub fn hollow_triangle() -> Arc<Complex> {
    build(&["1", "2", "3"], &[&["1", "2"], &["1", "3"], &["2", "3"]])
}

pub fn tetrahedron_boundary() -> Arc<Complex> {
    build(&["1", "2", "3", "4"], &[&["1", "2", "3"], &["1", "2", "4"], &["1", "3", "4"], &["2", "3", "4"]])
}

/// The full simplex on `n` vertices labelled `1..=n`.
pub fn full_simplex(n: usize) -> Arc<Complex> {
    let v = labels(n);
    Arc::new(Complex::build(&v, std::slice::from_ref(&v)).expect("corpus complex"))
}

pub fn two_points() -> Arc<Complex> {
    build(&["1", "2"], &[])
}

/// The path `1 - 2 - 3`, with `suffix` appended to every label (`"'"` gives
/// the primed copy).
pub fn path(suffix: &str) -> Arc<Complex> {
    let v: Vec<String> = (1..=3).map(|i| format!("{i}{suffix}")).collect();
    Arc::new(
        Complex::build(&v, &[vec![v[0].clone(), v[1].clone()], vec![v[1].clone(), v[2].clone()]])
            .expect("corpus complex"),
    )
}

/// A random complex on 3 to 6 vertices with up to four facets of at most
/// three vertices, so that exhaustive degree-3 sweeps stay small.
pub fn random_complex(seed: u64) -> Arc<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=6);
    let mut order = labels(n);
    order.shuffle(&mut rng);
    let facet_count = rng.gen_range(1..=4);
    let facets: Vec<Vec<String>> = (0..facet_count)
        .map(|_| {
            let size = rng.gen_range(1..=3.min(n));
            order.choose_multiple(&mut rng, size).cloned().collect()
        })
        .collect();
    Arc::new(Complex::build(&order, &facets).expect("random complex"))
}

/// The named complexes followed by `random` seeded random ones.
pub fn complexes(random: usize, seed: u64) -> Vec<(String, Arc<Complex>)> {
    let mut out = vec![
        ("edge".to_string(), edge()),
        ("full-triangle".to_string(), full_triangle()),
        ("hollow-triangle".to_string(), hollow_triangle()),
        ("tetrahedron-boundary".to_string(), tetrahedron_boundary()),
        ("full-4-simplex".to_string(), full_simplex(5)),
        ("path".to_string(), path("")),
        ("path-primed".to_string(), path("'")),
    ];
    for i in 0..random {
        let s = seed.wrapping_add(i as u64);
        out.push((format!("random-{s}"), random_complex(s)));
    }
    out
}

fn map(source: &Arc<Complex>, target: &Arc<Complex>, pairs: &[(&str, &str)]) -> VertexMap {
    VertexMap::new(source, target, pairs).expect("corpus map")
}

/// `1'↦1, 2'↦2, 3'↦2` on the path complexes.
pub fn path_fold() -> VertexMap {
    map(&path("'"), &path(""), &[("1'", "1"), ("2'", "2"), ("3'", "2")])
}

/// `1'↦1, 2'↦3, 3'↦3`: sends the edge `{1',2'}` to `{1,3}`, which is not in
/// the target.
pub fn path_non_simplicial() -> VertexMap {
    map(&path("'"), &path(""), &[("1'", "1"), ("2'", "3"), ("3'", "3")])
}

/// Simplicial maps used by the functor checks, including identities and
/// composites.
pub fn simplicial_maps() -> Vec<(String, VertexMap)> {
    let (edge, tri, hollow, sphere) = (edge(), full_triangle(), hollow_triangle(), tetrahedron_boundary());
    let point = build(&["*"], &[]);
    let path2 = path("\"");
    let fold = path_fold();
    let pre = map(&path2, fold.source(), &[("1\"", "1'"), ("2\"", "2'"), ("3\"", "2'")]);
    let collapse = map(&tri, &edge, &[("1", "1"), ("2", "2"), ("3", "2")]);
    let include = map(&edge, &tri, &[("1", "1"), ("2", "2")]);
    let mut out = vec![
        ("identity-edge".to_string(), VertexMap::identity(&edge)),
        ("identity-triangle".to_string(), VertexMap::identity(&tri)),
        ("identity-path".to_string(), VertexMap::identity(&path(""))),
        ("path-fold".to_string(), fold.clone()),
        ("path-fold-left".to_string(), map(fold.source(), fold.target(), &[("1'", "2"), ("2'", "2"), ("3'", "3")])),
        ("triangle-collapse".to_string(), collapse.clone()),
        ("edge-into-triangle".to_string(), include.clone()),
        ("hollow-into-full".to_string(), map(&hollow, &tri, &[("1", "1"), ("2", "2"), ("3", "3")])),
        ("hollow-rotation".to_string(), map(&hollow, &hollow, &[("1", "2"), ("2", "3"), ("3", "1")])),
        ("sphere-onto-triangle".to_string(), map(&sphere, &tri, &[("1", "1"), ("2", "2"), ("3", "3"), ("4", "3")])),
        (
            "simplex-onto-sphere".to_string(),
            map(&full_simplex(5), &sphere, &[("1", "1"), ("2", "2"), ("3", "3"), ("4", "3"), ("5", "3")]),
        ),
        ("triangle-to-point".to_string(), map(&tri, &point, &[("1", "*"), ("2", "*"), ("3", "*")])),
    ];
    out.push(("fold-after-fold".to_string(), compose(&pre, &fold).expect("composable")));
    out.push(("collapse-after-include".to_string(), compose(&include, &collapse).expect("composable")));
    out
}

/// A random combination of one to three degree-`degree` basis pairs with
/// small rational coefficients, or `None` if that degree is empty.
pub fn random_incidence<R: Rng>(c: &Arc<Complex>, degree: usize, rng: &mut R) -> Option<IncidenceElement> {
    let pairs = basis_pairs(c, degree);
    if pairs.is_empty() {
        return None;
    }
    let terms = (0..rng.gen_range(1..=3)).map(|_| (*pairs.choose(rng).unwrap(), random_scalar(rng)));
    Some(IncidenceElement::from_terms(c, terms))
}

/// A random degree-`degree` story element with one to three terms. With
/// `start`, the first term begins at that simplex.
pub fn random_story_element<R: Rng>(c: &Arc<Complex>, degree: usize, start: Option<u32>, rng: &mut R) -> StoryElement {
    let count = c.len() as u32;
    let mut out = StoryElement::zero(c);
    for i in 0..rng.gen_range(1..=3) {
        let first = match (i, start) {
            (0, Some(s)) => s,
            _ => rng.gen_range(0..count),
        };
        let mut ids = vec![first];
        while ids.len() <= degree && count > 1 {
            let last = *ids.last().unwrap();
            let mut next = rng.gen_range(0..count - 1);
            if next >= last {
                next += 1;
            }
            ids.push(next);
        }
        if let Ok(story) = Story::new(c, ids) {
            out.add_term(story, random_scalar(rng));
        }
    }
    out
}

/// A random fair story element of the given degree (terms follow cover
/// relations), or zero when the complex has no such chains.
pub fn random_fair_story_element<R: Rng>(c: &Arc<Complex>, degree: usize, rng: &mut R) -> StoryElement {
    let mut out = StoryElement::zero(c);
    let starts: Vec<u32> = (0..c.len() as u32).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let mut ids = vec![*starts.choose(rng).unwrap()];
        while ids.len() <= degree {
            let ups = c.cofaces(*ids.last().unwrap());
            match ups.choose(rng) {
                Some(up) => ids.push(up.simplex),
                None => break,
            }
        }
        if ids.len() == degree + 1 {
            out.add_term(Story::new(c, ids).unwrap(), random_scalar(rng));
        }
    }
    out
}

pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    let num: i64 = rng.gen_range(-6..=6);
    let num = if num == 0 { 1 } else { num };
    Scalar::new(num.into(), rng.gen_range(1..=4i64).into())
}

/// Random vertex map between two complexes (not necessarily simplicial).
pub fn random_vertex_map<R: Rng>(source: &Arc<Complex>, target: &Arc<Complex>, rng: &mut R) -> VertexMap {
    let n = target.vertex_count() as VertexId;
    let assignment = (0..source.vertex_count()).map(|_| rng.gen_range(0..n)).collect();
    VertexMap::from_assignment(source, target, assignment)
}
