//! The property suite run by `incidence props`: every algebraic law the
//! engine promises, checked exactly on a given complex.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{betti, Chain, Complex, SimplexId};
use crate::corpus;
use crate::exec::{self, Execution};
use crate::expr;
use crate::functor::{compose, VertexMap};
use crate::incidence::{basis_pairs, BasisPair, IncidenceElement};
use crate::sign::Sign;
use crate::stories::{self, lift, lift_shuffled, sigma_rank, sigma_term, verify_differential_ideal};
use crate::Scalar;

#[derive(Clone, Copy, Debug)]
pub struct PropsConfig {
    pub seed: u64,
    /// Highest degree for the sigma, ideal and section checks.
    pub max_degree: usize,
    /// Random element pairs per complex for the Leibniz and product checks.
    pub random_pairs: usize,
    /// Random vertex orders tried by the section-independence check.
    pub section_seeds: u64,
    pub exec: Execution,
}

impl Default for PropsConfig {
    fn default() -> Self {
        PropsConfig { seed: 0, max_degree: 3, random_pairs: 500, section_seeds: 10, exec: Execution::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub complex: String,
    pub property: String,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&Arc<Complex>, &PropsConfig) -> Result<String, String>;

/// Property names in the order they run.
pub const PROPERTIES: &[(&str, Check)] = &[
    ("border-squared", border_squared),
    ("border-adjoint", border_adjoint),
    ("euler-characteristic", euler_characteristic),
    ("basis-count", basis_count),
    ("d-squared", d_squared),
    ("leibniz", leibniz),
    ("sigma-surjective", sigma_surjective),
    ("generators-in-kernel", generators_in_kernel),
    ("sigma-multiplicative", sigma_multiplicative),
    ("differential-ideal", differential_ideal),
    ("differential-via-stories", differential_via_stories),
    ("section-independence", section_independence),
    ("functor-laws", functor_laws),
    ("round-trip", round_trip),
];

/// Runs every property on every named complex. Cases may run concurrently;
/// the result is ordered by complex, then by [`PROPERTIES`].
pub fn run_properties(complexes: &[(String, Arc<Complex>)], cfg: &PropsConfig) -> Vec<PropertyOutcome> {
    let cases: Vec<(usize, usize)> =
        (0..complexes.len()).flat_map(|i| (0..PROPERTIES.len()).map(move |j| (i, j))).collect();
    exec::map(cfg.exec, &cases, |&(i, j)| {
        let (name, c) = &complexes[i];
        let (property, check) = PROPERTIES[j];
        let (passed, detail) = match check(c, cfg) {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        PropertyOutcome { complex: name.clone(), property: property.to_string(), passed, detail }
    })
}

/// Runs one named property; `None` if the name is unknown.
pub fn check(property: &str, c: &Arc<Complex>, cfg: &PropsConfig) -> Option<Result<String, String>> {
    PROPERTIES.iter().find(|(name, _)| *name == property).map(|(_, f)| f(c, cfg))
}

fn rng_for(cfg: &PropsConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9).wrapping_add(salt))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn border_squared(c: &Arc<Complex>, _: &PropsConfig) -> Result<String, String> {
    for id in 0..c.len() as SimplexId {
        let twice = c.border(&c.border(&Chain::basis(c, id)));
        ensure(twice.is_zero(), || format!("∂∂ {{{}}} ≠ 0", c.format_id(id)))?;
    }
    Ok(format!("{} simplices", c.len()))
}

/// `<∂a, b> = <a, δb>` on all basis simplices, i.e. the coborder matrix is
/// the transpose of the border matrix.
fn border_adjoint(c: &Arc<Complex>, _: &PropsConfig) -> Result<String, String> {
    let n = c.len() as SimplexId;
    let mut checked = 0;
    for a in 0..n {
        let down = c.border(&Chain::basis(c, a));
        for b in 0..n {
            if c.simplex(b).len() + 1 != c.simplex(a).len() {
                continue;
            }
            let up = c.coborder(&Chain::basis(c, b));
            checked += 1;
            ensure(down.coeff(b) == up.coeff(a), || {
                format!("<∂{{{}}}, {{{}}}> ≠ <{{{0}}}, δ{{{1}}}>", c.format_id(a), c.format_id(b))
            })?;
        }
    }
    Ok(format!("{checked} entries"))
}

/// Betti numbers against two independent counts: the alternating sum of the
/// face numbers and the number of connected components.
fn euler_characteristic(c: &Arc<Complex>, _: &PropsConfig) -> Result<String, String> {
    let b = betti(c);
    let chi_faces: i64 = (0..=c.dim()).map(|k| sign_of(k) * c.skeleton(k).len() as i64).sum();
    let chi_betti: i64 = b.iter().enumerate().map(|(k, &x)| sign_of(k) * x as i64).sum();
    ensure(chi_faces == chi_betti, || format!("χ from faces {chi_faces}, from betti {chi_betti}"))?;

    let mut parent: Vec<usize> = (0..c.vertex_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &e in c.skeleton(1) {
        let v = c.simplex(e).vertices();
        let (a, b) = (find(&mut parent, v[0] as usize), find(&mut parent, v[1] as usize));
        parent[a] = b;
    }
    let components = (0..parent.len()).filter(|&x| find(&mut parent, x) == x).count();
    ensure(b[0] == components, || format!("β0 = {}, components = {components}", b[0]))?;
    Ok(format!("betti {b:?}"))
}

fn sign_of(k: usize) -> i64 {
    Sign::parity(k).to_i64()
}

/// `basis_pairs` against brute-force enumeration of all simplex pairs.
fn basis_count(c: &Arc<Complex>, _: &PropsConfig) -> Result<String, String> {
    let mut counts = vec![0usize; c.dim() + 1];
    for p in c.simplices() {
        for q in c.simplices() {
            if p.is_subset_of(q) {
                counts[q.len() - p.len()] += 1;
            }
        }
    }
    for (n, &expected) in counts.iter().enumerate() {
        let got = basis_pairs(c, n).len();
        ensure(got == expected, || format!("degree {n}: {got} pairs, expected {expected}"))?;
    }
    ensure(basis_pairs(c, c.dim() + 1).is_empty(), || "pairs beyond the top degree".into())?;
    Ok(format!("sizes {counts:?}"))
}

fn all_pairs(c: &Complex) -> Vec<BasisPair> {
    (0..=c.dim()).flat_map(|n| basis_pairs(c, n)).collect()
}

fn random_homogeneous(c: &Arc<Complex>, rng: &mut ChaCha8Rng) -> IncidenceElement {
    loop {
        let degree = rng.gen_range(0..=c.dim());
        if let Some(x) = corpus::random_incidence(c, degree, rng) {
            return x;
        }
    }
}

fn d_squared(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let pairs = all_pairs(c);
    for p in &pairs {
        let x = IncidenceElement::basis(c, *p);
        ensure(x.differential().differential().is_zero(), || format!("d² {x} ≠ 0"))?;
    }
    let mut rng = rng_for(cfg, 1);
    for _ in 0..cfg.random_pairs {
        let x = random_homogeneous(c, &mut rng);
        ensure(x.differential().differential().is_zero(), || format!("d² ({x}) ≠ 0"))?;
    }
    Ok(format!("{} basis pairs, {} random", pairs.len(), cfg.random_pairs))
}

fn leibniz_holds(x: &IncidenceElement, y: &IncidenceElement) -> bool {
    let r = x.degree().unwrap_or(0);
    let lhs = x.multiply(y).unwrap().differential();
    let left = x.differential().multiply(y).unwrap();
    let right = x.multiply(&y.differential()).unwrap();
    let rhs = if r.is_multiple_of(2) { &left + &right } else { &left - &right };
    lhs == rhs
}

/// `d(xy) = dx·y + (-1)^r x·dy` on all pairs of basis elements and on random
/// homogeneous elements.
fn leibniz(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let pairs = all_pairs(c);
    let basis: Vec<IncidenceElement> = pairs.iter().map(|p| IncidenceElement::basis(c, *p)).collect();
    let diffs: Vec<IncidenceElement> = basis.iter().map(IncidenceElement::differential).collect();
    // On basis elements only products that can be nonzero matter; a pair
    // whose three products all vanish is skipped.
    let mut checked = 0;
    for (i, x) in pairs.iter().enumerate() {
        for (j, y) in pairs.iter().enumerate() {
            let touches = x.upper() == y.lower()
                || diffs[i].terms().any(|(p, _)| p.upper() == y.lower())
                || diffs[j].terms().any(|(q, _)| x.upper() == q.lower());
            if touches {
                checked += 1;
                ensure(leibniz_holds(&basis[i], &basis[j]), || format!("fails on ({}, {})", basis[i], basis[j]))?;
            }
        }
    }
    let mut rng = rng_for(cfg, 2);
    for _ in 0..cfg.random_pairs {
        let x = random_homogeneous(c, &mut rng);
        let y = random_homogeneous(c, &mut rng);
        ensure(leibniz_holds(&x, &y), || format!("fails on ({x}, {y})"))?;
    }
    Ok(format!("{checked} basis products, {} random", cfg.random_pairs))
}

/// Exact rank of sigma on degree-n stories equals the number of degree-n pairs.
fn sigma_surjective(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let mut ranks = Vec::new();
    for n in 0..=cfg.max_degree {
        let rank = sigma_rank(c, n, cfg.exec);
        let expected = basis_pairs(c, n).len();
        ensure(rank == expected, || format!("degree {n}: rank {rank}, {expected} pairs"))?;
        ranks.push(rank);
    }
    Ok(format!("ranks {ranks:?}"))
}

fn generators_in_kernel(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let mut total = 0usize;
    for n in 1..=cfg.max_degree {
        let bad = exec::map_range(cfg.exec, c.len(), |first| {
            let mut count = 0usize;
            let mut bad = None;
            stories::for_each_generator_from(c, n, first as SimplexId, &mut |g| {
                count += 1;
                let mut acc: HashMap<BasisPair, i64> = HashMap::new();
                for (w, s) in g.terms() {
                    if let Some((pair, sign)) = sigma_term(c, w) {
                        *acc.entry(pair).or_insert(0) += (sign * *s).to_i64();
                    }
                }
                if bad.is_none() && acc.values().any(|v| *v != 0) {
                    bad = Some(expr::format_generator(c, &g));
                }
            });
            (count, bad)
        });
        for (count, b) in bad {
            total += count;
            if let Some(g) = b {
                return Err(format!("sigma({g}) ≠ 0"));
            }
        }
    }
    Ok(format!("{total} generators"))
}

/// `sigma(a·b) = sigma(a)·sigma(b)` on random story elements, half of them
/// fair and with `b` attached at the end of `a` so products are nonzero.
fn sigma_multiplicative(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 3);
    let top = cfg.max_degree.min(2);
    for i in 0..cfg.random_pairs {
        let (r, s) = (rng.gen_range(0..=top), rng.gen_range(0..=top));
        let a = if i % 2 == 0 {
            corpus::random_fair_story_element(c, r, &mut rng)
        } else {
            corpus::random_story_element(c, r, None, &mut rng)
        };
        let start = a.terms().next().map(|(w, _)| w.last());
        let b = if i % 2 == 0 && start.is_some() {
            let mut b = corpus::random_fair_story_element(c, s, &mut rng);
            b = &b + &corpus::random_story_element(c, s, start, &mut rng);
            b
        } else {
            corpus::random_story_element(c, s, start, &mut rng)
        };
        let lhs = a.multiply(&b).map_err(|e| e.to_string())?.sigma();
        let rhs = a.sigma().multiply(&b.sigma()).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("sigma not multiplicative on ({a}) · ({b})"))?;
    }
    Ok(format!("{} pairs", cfg.random_pairs))
}

fn differential_ideal(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let report = verify_differential_ideal(c, cfg.max_degree, cfg.seed, cfg.exec);
    match report.violations.first() {
        None => Ok(format!("{} generators, {} products", report.generators, report.products)),
        Some(v) => Err(format!("{} violations, first {:?} on {}", report.violations.len(), v.kind, v.generator)),
    }
}

fn low_pairs(c: &Complex, max_degree: usize) -> Vec<BasisPair> {
    (0..=max_degree.min(c.dim())).flat_map(|n| basis_pairs(c, n)).collect()
}

/// `d x = sigma(d̄(lift x))` for every basis pair up to `max_degree`.
fn differential_via_stories(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let pairs = low_pairs(c, cfg.max_degree);
    let bad = exec::map(cfg.exec, &pairs, |p| {
        let x = IncidenceElement::basis(c, *p);
        let via = lift(&x).kahler_d().expect("homogeneous").sigma();
        (via != x.differential()).then(|| format!("on {x}: {via} ≠ {}", x.differential()))
    });
    match bad.into_iter().flatten().next() {
        Some(msg) => Err(msg),
        None => Ok(format!("{} basis pairs", pairs.len())),
    }
}

fn section_independence(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let pairs = low_pairs(c, cfg.max_degree);
    for seed in 0..cfg.section_seeds {
        let mut rng = rng_for(cfg, 100 + seed);
        for p in &pairs {
            let x = IncidenceElement::basis(c, *p);
            let w = lift_shuffled(&x, &mut rng);
            ensure(w.sigma() == x, || format!("sigma(lift) ≠ id on {x}"))?;
            let via = w.kahler_d().expect("homogeneous").sigma();
            ensure(via == x.differential(), || format!("section-dependent d on {x}"))?;
        }
    }
    Ok(format!("{} seeds × {} pairs", cfg.section_seeds, pairs.len()))
}

/// Identity and random simplicial self-maps are differentiable up to degree 2,
/// and pullback reverses composition.
fn functor_laws(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let degree = cfg.max_degree.min(2);
    let mut rng = rng_for(cfg, 4);
    let mut maps = vec![VertexMap::identity(c)];
    for _ in 0..40 {
        if maps.len() >= 4 {
            break;
        }
        let m = corpus::random_vertex_map(c, c, &mut rng);
        if m.is_simplicial() {
            maps.push(m);
        }
    }
    for m in &maps {
        let report = m.check_differentiable(degree, Execution::Sequential);
        ensure(report.passed(), || format!("{}: {:?}", expr::format_map(m).trim(), report.witnesses))?;
    }
    let pairs = low_pairs(c, degree);
    for m1 in &maps {
        for m2 in &maps {
            let both = compose(m2, m1).map_err(|e| e.to_string())?;
            for p in &pairs {
                let x = IncidenceElement::basis(c, *p);
                let direct = both.pullback_algebra(&x).map_err(|e| e.to_string())?;
                let stepwise = m2
                    .pullback_algebra(&m1.pullback_algebra(&x).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                ensure(direct == stepwise, || format!("composition law fails on {x}"))?;
            }
        }
    }
    Ok(format!("{} maps", maps.len()))
}

fn round_trip(c: &Arc<Complex>, cfg: &PropsConfig) -> Result<String, String> {
    let reparsed = expr::parse_complex(&expr::format_complex(c)).map_err(|e| e.to_string())?;
    ensure(reparsed == **c, || "complex file round trip changed the complex".into())?;
    let mut rng = rng_for(cfg, 5);
    let count = 50;
    for _ in 0..count {
        let x = random_homogeneous(c, &mut rng);
        let text = x.to_string();
        let back = expr::parse_incidence(&text, c).map_err(|e| format!("`{text}`: {e}"))?;
        ensure(back == x, || format!("`{text}` reparsed as `{back}`"))?;
        let json = expr::incidence_records(&x);
        ensure(expr::incidence_from_records(&json, c).as_ref() == Ok(&x), || format!("JSON round trip of `{text}`"))?;

        let degree = rng.gen_range(0..=2);
        let w = corpus::random_story_element(c, degree, None, &mut rng);
        let text = w.to_string();
        let back = expr::parse_story_element(&text, c).map_err(|e| format!("`{text}`: {e}"))?;
        ensure(back == w, || format!("`{text}` reparsed as `{back}`"))?;
        let json = expr::story_records(&w);
        ensure(expr::story_from_records(&json, c).as_ref() == Ok(&w), || format!("JSON round trip of `{text}`"))?;
    }
    let zero = Scalar::zero();
    ensure(expr::parse_scalar(&expr::format_scalar(&zero)) == Ok(zero), || "scalar 0".into())?;
    Ok(format!("{count} incidence and {count} story elements"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_complexes() {
        let cfg = PropsConfig { random_pairs: 50, section_seeds: 2, max_degree: 2, ..Default::default() };
        let cs = vec![
            ("edge".to_string(), corpus::edge()),
            ("hollow".to_string(), corpus::hollow_triangle()),
            ("random".to_string(), corpus::random_complex(7)),
        ];
        let out = run_properties(&cs, &cfg);
        assert_eq!(out.len(), 3 * PROPERTIES.len());
        for o in &out {
            assert!(o.passed, "{o:?}");
        }
        assert_eq!(out[0].property, "border-squared");
        assert_eq!(out.last().unwrap().complex, "random");
    }
}
