//! The stories algebra: the universal differential envelope of the algebra
//! of functions on a complex, written in the basis of stories
//! `<P0, …, Pn>` (finite sequences of simplices with distinct neighbours).
//!
//! A story is fair when every step adds exactly one vertex. Unfair stories
//! together with the differences `ε_w w - ε_w' w'` of fair stories sharing
//! endpoints span the simplicial ideal `I`, and the projection
//!
//! ```text
//! sigma(w) = ε_w |P0><Pn|   (w fair),   0 otherwise
//! ```
//!
//! identifies the quotient with the incidence algebra.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::complex::{Complex, SimplexId, VertexId};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::incidence::{basis_pairs, same_complex, BasisPair, IncidenceElement};
use crate::linalg::{self, SparseColumn};
use crate::sign::Sign;
use crate::Scalar;

type Statements = SmallVec<[SimplexId; 6]>;

/// A sequence of simplices with no two equal neighbours. Degree = length - 1.
///
/// Ordered by degree first, then lexicographically by simplex id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Story(Statements);

impl Ord for Story {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Story {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Story {
    pub fn new(c: &Complex, statements: impl IntoIterator<Item = SimplexId>) -> Result<Self> {
        let s: Statements = statements.into_iter().collect();
        if s.is_empty() {
            return Err(Error::EmptyStory);
        }
        if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedNeighbour(c.format_id(w[0])));
        }
        Ok(Story(s))
    }

    pub fn from_labels<S: AsRef<str>>(c: &Complex, statements: &[&[S]]) -> Result<Self> {
        let ids = statements.iter().map(|s| c.id_from_labels(s)).collect::<Result<Vec<_>>>()?;
        Self::new(c, ids)
    }

    pub(crate) fn from_slice(s: &[SimplexId]) -> Self {
        debug_assert!(!s.is_empty() && s.windows(2).all(|w| w[0] != w[1]));
        Story(s.into())
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn statements(&self) -> &[SimplexId] {
        &self.0
    }

    pub fn first(&self) -> SimplexId {
        self.0[0]
    }

    pub fn last(&self) -> SimplexId {
        self.0[self.0.len() - 1]
    }

    /// `<P0…Pn> · <Q0…Qm> = <P0…Pn Q1…Qm>` if `Pn = Q0`.
    pub fn concat(&self, other: &Story) -> Option<Story> {
        if self.last() != other.first() {
            return None;
        }
        let mut s = self.0.clone();
        s.extend_from_slice(&other.0[1..]);
        Some(Story(s))
    }
}

/// True iff every step of `w` adds exactly one vertex. Degree-0 stories are fair.
pub fn is_fair(c: &Complex, w: &Story) -> bool {
    w.0.windows(2).all(|s| c.cover(s[0], s[1]).is_some())
}

/// `ε_w`, the product of the incidence coefficients of the vertex added at
/// each step in the simplex it produces.
pub fn story_sign(c: &Complex, w: &Story) -> Result<Sign> {
    fair_sign(c, &w.0).ok_or(Error::UnfairStory)
}

fn fair_sign(c: &Complex, s: &[SimplexId]) -> Option<Sign> {
    s.windows(2).try_fold(Sign::Plus, |acc, w| c.cover(w[0], w[1]).map(|inc| acc * inc.sign))
}

/// `sigma` on a single story: the basis pair and sign it projects to.
pub fn sigma_term(c: &Complex, w: &Story) -> Option<(BasisPair, Sign)> {
    let sign = fair_sign(c, &w.0)?;
    Some((BasisPair::new_unchecked(c, w.first(), w.last()), sign))
}

/// All fair stories from `lower` to `upper`, one per order of adding the
/// missing vertices. Empty unless `lower ⊆ upper`.
pub fn fair_stories_between(c: &Complex, lower: SimplexId, upper: SimplexId) -> Vec<Story> {
    let target = c.simplex(upper);
    if !c.simplex(lower).is_subset_of(target) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut path: Statements = smallvec::smallvec![lower];
    fn go(c: &Complex, upper: SimplexId, path: &mut Statements, out: &mut Vec<Story>) {
        let at = *path.last().unwrap();
        if at == upper {
            out.push(Story(path.clone()));
            return;
        }
        let target = c.simplex(upper);
        for inc in c.cofaces(at) {
            if target.contains(inc.vertex) {
                path.push(inc.simplex);
                go(c, upper, path, out);
                path.pop();
            }
        }
    }
    go(c, upper, &mut path, &mut out);
    out
}

/// Calls `f` on every story of degree `n` whose first statement is `first`.
pub fn for_each_story_from(c: &Complex, n: usize, first: SimplexId, f: &mut impl FnMut(&Story)) {
    let mut story = Story(smallvec::smallvec![first]);
    fn go(c: &Complex, n: usize, story: &mut Story, f: &mut impl FnMut(&Story)) {
        if story.0.len() == n + 1 {
            f(story);
            return;
        }
        let last = story.last();
        for next in 0..c.len() as SimplexId {
            if next != last {
                story.0.push(next);
                go(c, n, story, f);
                story.0.pop();
            }
        }
    }
    go(c, n, &mut story, f);
}

/// Every story of degree `n`, in canonical order.
pub fn stories(c: &Complex, n: usize) -> Vec<Story> {
    let mut out = Vec::new();
    for first in 0..c.len() as SimplexId {
        for_each_story_from(c, n, first, &mut |s| out.push(s.clone()));
    }
    out
}

/// A rational combination of stories over one complex.
#[derive(Clone)]
pub struct StoryElement {
    complex: Arc<Complex>,
    terms: BTreeMap<Story, Scalar>,
}

impl StoryElement {
    pub fn zero(c: &Arc<Complex>) -> Self {
        StoryElement { complex: c.clone(), terms: BTreeMap::new() }
    }

    pub fn basis(c: &Arc<Complex>, story: Story) -> Self {
        let mut out = Self::zero(c);
        out.terms.insert(story, Scalar::one());
        out
    }

    pub fn from_terms(c: &Arc<Complex>, terms: impl IntoIterator<Item = (Story, Scalar)>) -> Self {
        let mut out = Self::zero(c);
        for (story, x) in terms {
            out.add_term(story, x);
        }
        out
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Story, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, story: &Story) -> Scalar {
        self.terms.get(story).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, story: Story, x: Scalar) {
        if x.is_zero() {
            return;
        }
        match self.terms.entry(story) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(x);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += x;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, x: &Scalar) -> Self {
        Self::from_terms(&self.complex, self.terms.iter().map(|(s, c)| (s.clone(), c * x)))
    }

    /// The common degree, or `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        let first = self.terms.keys().next()?.degree();
        self.terms.keys().all(|s| s.degree() == first).then_some(first)
    }

    fn homogeneous_degree(&self) -> Result<Option<usize>> {
        let mut keys = self.terms.keys();
        let Some(first) = keys.next().map(Story::degree) else {
            return Ok(None);
        };
        match keys.map(Story::degree).find(|d| *d != first) {
            Some(other) => Err(Error::MixedDegree(first, other)),
            None => Ok(Some(first)),
        }
    }

    /// Bilinear junction product.
    pub fn multiply(&self, other: &StoryElement) -> Result<StoryElement> {
        if !same_complex(&self.complex, &other.complex) {
            return Err(Error::ComplexMismatch);
        }
        let mut by_first: HashMap<SimplexId, Vec<(&Story, &Scalar)>> = HashMap::new();
        for (s, y) in &other.terms {
            by_first.entry(s.first()).or_default().push((s, y));
        }
        let mut out = Self::zero(&self.complex);
        for (left, x) in &self.terms {
            for (right, y) in by_first.get(&left.last()).into_iter().flatten() {
                out.add_term(left.concat(right).unwrap(), x * *y);
            }
        }
        Ok(out)
    }

    /// The envelope differential on a homogeneous element of degree `n`:
    ///
    /// ```text
    /// d<P0…Pn> = Σ_{Q≠P0} <Q P0…Pn>
    ///          + Σ_k (-1)^k Σ_{P(k-1)≠Q≠Pk} <P0…P(k-1) Q Pk…Pn>
    ///          + (-1)^(n+1) Σ_{Q≠Pn} <P0…Pn Q>
    /// ```
    pub fn kahler_d(&self) -> Result<StoryElement> {
        let mut out = Self::zero(&self.complex);
        let Some(n) = self.homogeneous_degree()? else {
            return Ok(out);
        };
        let count = self.complex.len() as SimplexId;
        for (story, x) in &self.terms {
            let s = &story.0;
            for q in (0..count).filter(|&q| q != s[0]) {
                let mut t: Statements = smallvec::smallvec![q];
                t.extend_from_slice(s);
                out.add_term(Story(t), x.clone());
            }
            for k in 1..=n {
                let coeff = Sign::parity(k).apply(x);
                for q in (0..count).filter(|&q| q != s[k - 1] && q != s[k]) {
                    let mut t = s.clone();
                    t.insert(k, q);
                    out.add_term(Story(t), coeff.clone());
                }
            }
            let coeff = Sign::parity(n + 1).apply(x);
            for q in (0..count).filter(|&q| q != s[n]) {
                let mut t = s.clone();
                t.push(q);
                out.add_term(Story(t), coeff.clone());
            }
        }
        Ok(out)
    }

    /// Projection onto the incidence algebra.
    pub fn sigma(&self) -> IncidenceElement {
        let mut out = IncidenceElement::zero(&self.complex);
        for (story, x) in &self.terms {
            if let Some((pair, sign)) = sigma_term(&self.complex, story) {
                out.add_term(pair, sign.apply(x));
            }
        }
        out
    }

    /// Membership in the simplicial ideal, decided through `ker sigma = I`.
    pub fn in_ideal(&self) -> bool {
        self.sigma().is_zero()
    }

    pub(crate) fn check_same(&self, other: &StoryElement) {
        assert!(same_complex(&self.complex, &other.complex), "operands live over different complexes");
    }
}

impl PartialEq for StoryElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_complex(&self.complex, &other.complex)
    }
}

impl Eq for StoryElement {}

impl fmt::Debug for StoryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StoryElement({self})")
    }
}

impl Add for &StoryElement {
    type Output = StoryElement;

    fn add(self, rhs: &StoryElement) -> StoryElement {
        self.check_same(rhs);
        let mut out = self.clone();
        for (s, x) in &rhs.terms {
            out.add_term(s.clone(), x.clone());
        }
        out
    }
}

impl Sub for &StoryElement {
    type Output = StoryElement;

    fn sub(self, rhs: &StoryElement) -> StoryElement {
        self.check_same(rhs);
        let mut out = self.clone();
        for (s, x) in &rhs.terms {
            out.add_term(s.clone(), -x);
        }
        out
    }
}

impl Neg for &StoryElement {
    type Output = StoryElement;

    fn neg(self) -> StoryElement {
        self.scale(&-Scalar::one())
    }
}

/// Canonical section of `sigma`: each pair `|P><Q|` goes to `ε_w w`, where
/// `w` adds the vertices of `Q - P` in increasing enumeration order.
pub fn lift(x: &IncidenceElement) -> StoryElement {
    lift_with_order(x, |_, _| {})
}

/// Like [`lift`], but adds the missing vertices of every pair in a random
/// order drawn from `rng`.
pub fn lift_shuffled<R: Rng>(x: &IncidenceElement, rng: &mut R) -> StoryElement {
    lift_with_order(x, |_, missing| missing.shuffle(rng))
}

/// Sign-corrected section where `order` may permute the vertices to add for
/// each pair (they arrive in enumeration order).
pub fn lift_with_order(x: &IncidenceElement, mut order: impl FnMut(&BasisPair, &mut Vec<VertexId>)) -> StoryElement {
    let c = x.complex();
    let mut out = StoryElement::zero(c);
    for (pair, coeff) in x.terms() {
        let mut missing = c.simplex(pair.upper()).minus(c.simplex(pair.lower()));
        order(pair, &mut missing);
        let mut statements: Statements = smallvec::smallvec![pair.lower()];
        let mut at = c.simplex(pair.lower()).clone();
        for v in missing {
            at = at.with(v).expect("missing vertex is new");
            statements.push(c.id_of(&at).expect("faces of a simplex are simplices"));
        }
        let story = Story(statements);
        let sign = fair_sign(c, &story.0).expect("constructed story is fair");
        out.add_term(story, sign.apply(coeff));
    }
    out
}

/// A spanning element of the ideal with `±1` coefficients: either a single
/// unfair story or `ε_w w - ε_w' w'` for fair `w, w'` with common endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGenerator {
    terms: SmallVec<[(Story, Sign); 2]>,
}

impl IdealGenerator {
    pub fn terms(&self) -> &[(Story, Sign)] {
        &self.terms
    }

    pub fn is_unfair_story(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn to_element(&self, c: &Arc<Complex>) -> StoryElement {
        StoryElement::from_terms(c, self.terms.iter().map(|(s, sign)| (s.clone(), sign.to_scalar())))
    }

    fn first(&self) -> SimplexId {
        self.terms[0].0.first()
    }

    fn last(&self) -> SimplexId {
        self.terms[0].0.last()
    }
}

/// Calls `f` on the degree-`n` generators whose stories start at `first`:
/// unfair stories, then balanced differences of fair stories.
pub fn for_each_generator_from(c: &Complex, n: usize, first: SimplexId, f: &mut impl FnMut(IdealGenerator)) {
    for_each_story_from(c, n, first, &mut |s| {
        if !is_fair(c, s) {
            f(IdealGenerator { terms: smallvec::smallvec![(s.clone(), Sign::Plus)] });
        }
    });
    let p = c.simplex(first);
    let mut uppers: Vec<SimplexId> = (0..c.len() as SimplexId)
        .filter(|&q| {
            let q = c.simplex(q);
            q.len() == p.len() + n && p.is_subset_of(q)
        })
        .collect();
    uppers.sort_unstable();
    for upper in uppers {
        let fair: Vec<(Story, Sign)> = fair_stories_between(c, first, upper)
            .into_iter()
            .map(|w| {
                let sign = fair_sign(c, &w.0).unwrap();
                (w, sign)
            })
            .collect();
        for i in 0..fair.len() {
            for j in i + 1..fair.len() {
                let (w, ew) = fair[i].clone();
                let (v, ev) = fair[j].clone();
                f(IdealGenerator { terms: smallvec::smallvec![(w, ew), (v, -ev)] });
            }
        }
    }
}

/// Spanning set of the degree-`n` part of the ideal (`n ≥ 1`): all unfair
/// stories plus the balanced differences of fair stories.
pub fn ideal_generators(c: &Arc<Complex>, n: usize) -> Result<Vec<StoryElement>> {
    Ok(raw_ideal_generators(c, n)?.iter().map(|g| g.to_element(c)).collect())
}

pub fn raw_ideal_generators(c: &Complex, n: usize) -> Result<Vec<IdealGenerator>> {
    if n == 0 {
        return Err(Error::DegreeZeroIdeal);
    }
    let mut out = Vec::new();
    for first in 0..c.len() as SimplexId {
        for_each_generator_from(c, n, first, &mut |g| out.push(g));
    }
    Ok(out)
}

/// Accumulates `coeff · sigma(d w)` into `acc` without building `d w`.
///
/// Only terms of `d w` that are fair survive `sigma`; such a term needs every
/// untouched step of `w` to be a cover and the new statement to sit in a
/// cover relation with its neighbours, so only those candidates are visited.
pub fn accumulate_sigma_of_d(c: &Complex, w: &Story, coeff: i64, acc: &mut HashMap<BasisPair, i64>) {
    let s = &w.0;
    let n = s.len() - 1;
    let steps: SmallVec<[Option<Sign>; 6]> = s.windows(2).map(|p| c.cover(p[0], p[1]).map(|i| i.sign)).collect();
    let unfair = steps.iter().filter(|x| x.is_none()).count();
    let mut bump = |pair: BasisPair, sign: Sign, k: i64| {
        let slot = acc.entry(pair).or_insert(0);
        *slot += sign.to_i64() * k;
    };
    if unfair == 0 {
        let eps = steps.iter().fold(Sign::Plus, |a, x| a * x.unwrap());
        for face in c.faces(s[0]) {
            bump(BasisPair::new_unchecked(c, face.simplex, s[n]), face.sign * eps, coeff);
        }
        let tail = Sign::parity(n + 1).to_i64() * coeff;
        for coface in c.cofaces(s[n]) {
            bump(BasisPair::new_unchecked(c, s[0], coface.simplex), coface.sign * eps, tail);
        }
    }
    for k in 1..=n {
        let others = unfair - usize::from(steps[k - 1].is_none());
        if others != 0 {
            continue;
        }
        let eps = steps.iter().enumerate().filter(|(i, _)| *i != k - 1).fold(Sign::Plus, |a, (_, x)| a * x.unwrap());
        let inner = Sign::parity(k).to_i64() * coeff;
        for up in c.cofaces(s[k - 1]) {
            if let Some(second) = c.cover(up.simplex, s[k]) {
                bump(BasisPair::new_unchecked(c, s[0], s[n]), eps * up.sign * second.sign, inner);
            }
        }
    }
}

/// Exact rank of `sigma` restricted to the degree-`n` stories.
pub fn sigma_rank(c: &Complex, n: usize, exec: Execution) -> usize {
    let rows: HashMap<BasisPair, usize> = basis_pairs(c, n).into_iter().enumerate().map(|(i, p)| (p, i)).collect();
    let columns: Vec<Vec<SparseColumn>> = exec::map_range(exec, c.len(), |first| {
        let mut cols = Vec::new();
        for_each_story_from(c, n, first as SimplexId, &mut |w| {
            if let Some((pair, sign)) = sigma_term(c, w) {
                cols.push(SparseColumn::from([(rows[&pair], sign.to_scalar())]));
            }
        });
        cols
    });
    linalg::rank(columns.into_iter().flatten())
}

/// Which closure property an ideal generator violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Differential,
    LeftProduct,
    RightProduct,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IdealViolation {
    pub degree: usize,
    pub kind: ViolationKind,
    pub generator: String,
}

/// Outcome of [`verify_differential_ideal`].
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct IdealReport {
    pub max_degree: usize,
    pub generators: usize,
    pub products: usize,
    pub violations: Vec<IdealViolation>,
}

impl IdealReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn random_walk(c: &Complex, len: usize, rng: &mut ChaCha8Rng, anchor: SimplexId, backwards: bool) -> Story {
    let mut s: Statements = smallvec::smallvec![anchor];
    let count = c.len() as SimplexId;
    for _ in 0..len {
        let prev = *s.last().unwrap();
        if count < 2 {
            break;
        }
        let mut next = rng.gen_range(0..count - 1);
        if next >= prev {
            next += 1;
        }
        s.push(next);
    }
    if backwards {
        s.reverse();
    }
    Story(s)
}

fn generator_seed(seed: u64, degree: usize, first: SimplexId, index: usize) -> u64 {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for x in [degree as u64, first as u64, index as u64] {
        h = (h ^ x).wrapping_mul(0x1000_0000_01B3).rotate_left(29);
    }
    h
}

fn sigma_of_product(c: &Complex, left: &[(Story, i64)], right: &[(Story, i64)]) -> bool {
    let mut acc: HashMap<BasisPair, i64> = HashMap::new();
    for (a, x) in left {
        for (b, y) in right {
            if let Some(w) = a.concat(b) {
                if let Some((pair, sign)) = sigma_term(c, &w) {
                    *acc.entry(pair).or_insert(0) += sign.to_i64() * x * y;
                }
            }
        }
    }
    acc.values().all(|v| *v == 0)
}

/// Checks that the ideal is a differential two-sided ideal up to
/// `max_degree`: for every generator `g` of degree `1..=max_degree`,
/// `d g`, `s·g` and `g·s` have zero `sigma`, with `s` a seeded random story
/// element (one term attached at the junction, one arbitrary term).
pub fn verify_differential_ideal(c: &Complex, max_degree: usize, seed: u64, exec: Execution) -> IdealReport {
    let mut report = IdealReport { max_degree, ..Default::default() };
    for degree in 1..=max_degree {
        let parts = exec::map_range(exec, c.len(), |first| {
            let first = first as SimplexId;
            let mut part = IdealReport::default();
            let mut index = 0usize;
            for_each_generator_from(c, degree, first, &mut |g| {
                let mut rng = ChaCha8Rng::seed_from_u64(generator_seed(seed, degree, first, index));
                index += 1;
                part.generators += 1;
                let mut fail = |kind| {
                    part.violations.push(IdealViolation {
                        degree,
                        kind,
                        generator: crate::expr::format_generator(c, &g),
                    })
                };

                let mut acc = HashMap::new();
                for (w, sign) in g.terms() {
                    accumulate_sigma_of_d(c, w, sign.to_i64(), &mut acc);
                }
                if acc.values().any(|v| *v != 0) {
                    fail(ViolationKind::Differential);
                }

                let gen: Vec<(Story, i64)> = g.terms().iter().map(|(w, s)| (w.clone(), s.to_i64())).collect();
                let element = |anchor: SimplexId, backwards: bool, rng: &mut ChaCha8Rng| {
                    let attached = random_walk(c, rng.gen_range(0..=2), rng, anchor, backwards);
                    let free_anchor = rng.gen_range(0..c.len() as SimplexId);
                    let free = random_walk(c, rng.gen_range(0..=2), rng, free_anchor, false);
                    vec![(attached, rng.gen_range(1..=5)), (free, -rng.gen_range(1..=5))]
                };
                let left = element(g.first(), true, &mut rng);
                let right = element(g.last(), false, &mut rng);
                part.products += 2;
                if !sigma_of_product(c, &left, &gen) {
                    fail(ViolationKind::LeftProduct);
                }
                if !sigma_of_product(c, &gen, &right) {
                    fail(ViolationKind::RightProduct);
                }
            });
            part
        });
        for part in parts {
            report.generators += part.generators;
            report.products += part.products;
            report.violations.extend(part.violations);
        }
    }
    report
}
