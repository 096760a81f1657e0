//! Vertex maps between complexes and the contravariant pullback they induce
//! on stories and on incidence algebras.
//!
//! A vertex map `π: K' -> K` sends each simplex of `K'` to its image vertex
//! set. When every image is a simplex of `K` the map is simplicial. A
//! non-simplicial map still has a well-defined set-theoretic action on
//! simplices, landing in the hull `K ∪ π(K')` (itself a simplicial complex on
//! the vertices of `K`); stories over the hull that leave `K` belong to the
//! ideal of `K`, and that is where non-simplicial maps fail to preserve it.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{Complex, Simplex, SimplexId, VertexId};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::expr;
use crate::incidence::{basis_pairs, same_complex, BasisPair, IncidenceElement};
use crate::stories::{self, lift, Story, StoryElement};

/// A total assignment of the vertices of `source` to vertices of `target`.
#[derive(Clone, Debug)]
pub struct VertexMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    hull: Arc<Complex>,
    assignment: Vec<VertexId>,
    images: Vec<SimplexId>,
    preimages: Vec<Vec<SimplexId>>,
    simplicial: bool,
}

impl VertexMap {
    /// Builds a map from `(source label, target label)` pairs. Every source
    /// vertex must be mapped exactly once.
    pub fn new<S: AsRef<str>, T: AsRef<str>>(
        source: &Arc<Complex>,
        target: &Arc<Complex>,
        assignment: &[(S, T)],
    ) -> Result<Self> {
        let mut ids: Vec<Option<VertexId>> = vec![None; source.vertex_count()];
        for (from, to) in assignment {
            let (from, to) = (from.as_ref(), to.as_ref());
            let v = source.vertex_id(from).ok_or_else(|| Error::UnknownVertex(from.to_string()))?;
            let w = target.vertex_id(to).ok_or_else(|| Error::UnknownVertex(to.to_string()))?;
            if ids[v as usize].replace(w).is_some() {
                return Err(Error::DuplicateMapping(from.to_string()));
            }
        }
        let assignment = ids
            .iter()
            .enumerate()
            .map(|(v, w)| w.ok_or_else(|| Error::UnmappedVertex(source.vertex_label(v as VertexId).to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_assignment(source, target, assignment))
    }

    pub fn identity(c: &Arc<Complex>) -> Self {
        Self::from_assignment(c, c, (0..c.vertex_count() as VertexId).collect())
    }

    /// `assignment[v]` is the target vertex of source vertex `v`.
    pub fn from_assignment(source: &Arc<Complex>, target: &Arc<Complex>, assignment: Vec<VertexId>) -> Self {
        assert_eq!(assignment.len(), source.vertex_count());
        let image_sets: Vec<Simplex> = source
            .simplices()
            .iter()
            .map(|s| Simplex::from_vertices_dedup(s.vertices().iter().map(|&v| assignment[v as usize])))
            .collect();
        let simplicial = image_sets.iter().all(|s| target.contains(s));
        let hull = if simplicial {
            target.clone()
        } else {
            let mut sets: Vec<Simplex> = target.simplices().to_vec();
            sets.extend(image_sets.iter().cloned());
            Arc::new(Complex::from_vertex_sets(target.vertex_order().to_vec(), sets))
        };
        let images: Vec<SimplexId> = image_sets.iter().map(|s| hull.id_of(s).expect("hull holds all images")).collect();
        let mut preimages = vec![Vec::new(); hull.len()];
        for (src, &img) in images.iter().enumerate() {
            preimages[img as usize].push(src as SimplexId);
        }
        VertexMap { source: source.clone(), target: target.clone(), hull, assignment, images, preimages, simplicial }
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    /// `K ∪ π(K')`; equal to the target exactly when the map is simplicial.
    pub fn hull(&self) -> &Arc<Complex> {
        &self.hull
    }

    pub fn image_of_vertex(&self, v: VertexId) -> VertexId {
        self.assignment[v as usize]
    }

    /// True iff the image of every simplex of the source is a simplex of the target.
    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    /// A source simplex whose image leaves the target, if any.
    pub fn non_simplicial_witness(&self) -> Option<String> {
        self.images.iter().enumerate().find_map(|(src, &img)| {
            let image = self.hull.simplex(img);
            (!self.target.contains(image)).then(|| {
                format!(
                    "{{{}}} maps to {{{}}}",
                    self.source.format_id(src as SimplexId),
                    self.hull.format_simplex(image)
                )
            })
        })
    }

    /// Image of a source simplex, as a simplex of the hull.
    pub fn image(&self, id: SimplexId) -> SimplexId {
        self.images[id as usize]
    }

    /// Source simplices mapping onto the hull simplex `id`.
    pub fn preimages(&self, id: SimplexId) -> &[SimplexId] {
        &self.preimages[id as usize]
    }

    /// Statement-wise image of a source story, as hull simplex ids. Neighbours
    /// may coincide, in which case the result is not a story.
    pub fn image_sequence(&self, w: &Story) -> Vec<SimplexId> {
        w.statements().iter().map(|&id| self.image(id)).collect()
    }

    fn to_hull_ids(&self, x: &StoryElement) -> Result<Vec<(Vec<SimplexId>, crate::Scalar)>> {
        if same_complex(x.complex(), &self.hull) {
            return Ok(x.terms().map(|(s, c)| (s.statements().to_vec(), c.clone())).collect());
        }
        if !same_complex(x.complex(), &self.target) {
            return Err(Error::ComplexMismatch);
        }
        Ok(x.terms()
            .map(|(s, c)| {
                let ids = s
                    .statements()
                    .iter()
                    .map(|&id| self.hull.id_of(self.target.simplex(id)).expect("target lies in hull"))
                    .collect();
                (ids, c.clone())
            })
            .collect())
    }

    /// Pullback on stories: each story `<P0…Pn>` of the target (or hull) goes
    /// to the sum of all source stories `<P0'…Pn'>` with `Pi' ↦ Pi`.
    /// Sequences with equal neighbours are not stories and are skipped.
    /// Simpliciality is not required.
    pub fn pullback_stories(&self, x: &StoryElement) -> Result<StoryElement> {
        let mut out = StoryElement::zero(&self.source);
        for (statements, coeff) in self.to_hull_ids(x)? {
            self.for_each_preimage(&statements, &mut |w| out.add_term(Story::from_slice(w), coeff.clone()));
        }
        Ok(out)
    }

    fn for_each_preimage(&self, statements: &[SimplexId], f: &mut impl FnMut(&[SimplexId])) {
        fn go(m: &VertexMap, statements: &[SimplexId], acc: &mut Vec<SimplexId>, f: &mut impl FnMut(&[SimplexId])) {
            let k = acc.len();
            if k == statements.len() {
                f(acc);
                return;
            }
            for &p in m.preimages(statements[k]) {
                if acc.last() != Some(&p) {
                    acc.push(p);
                    go(m, statements, acc, f);
                    acc.pop();
                }
            }
        }
        go(self, statements, &mut Vec::with_capacity(statements.len()), f);
    }

    /// The induced homomorphism `I(K) -> I(K')`, computed as
    /// `sigma' ∘ pullback_stories ∘ lift`.
    pub fn pullback_algebra(&self, x: &IncidenceElement) -> Result<IncidenceElement> {
        if !self.simplicial {
            return Err(Error::NotSimplicial(self.non_simplicial_witness().unwrap_or_default()));
        }
        if !same_complex(x.complex(), &self.target) {
            return Err(Error::ComplexMismatch);
        }
        Ok(self.pullback_stories(&lift(x))?.sigma())
    }

    /// Same as [`VertexMap::pullback_algebra`] with a caller-supplied section
    /// of `sigma`, used to check that the choice of section does not matter.
    pub fn pullback_algebra_via(
        &self,
        x: &IncidenceElement,
        section: impl Fn(&IncidenceElement) -> StoryElement,
    ) -> Result<IncidenceElement> {
        if !self.simplicial {
            return Err(Error::NotSimplicial(self.non_simplicial_witness().unwrap_or_default()));
        }
        Ok(self.pullback_stories(&section(x))?.sigma())
    }

    /// Stories of degree `n` over the hull that pass through a simplex outside
    /// the target. Empty for simplicial maps.
    pub fn escape_stories(&self, n: usize) -> Vec<Story> {
        if self.simplicial {
            return Vec::new();
        }
        stories::stories(&self.hull, n)
            .into_iter()
            .filter(|w| w.statements().iter().any(|&id| !self.target.contains(self.hull.simplex(id))))
            .collect()
    }

    /// Exhaustive differentiability check up to `max_degree`:
    /// (a) pullback is multiplicative on basis pairs, (b) it commutes with the
    /// differentials, (c) every ideal generator of degree `1..=max_degree`
    /// pulls back into the source ideal. (a) and (b) need a simplicial map
    /// and are `None` otherwise.
    pub fn check_differentiable(&self, max_degree: usize, exec: Execution) -> DifferentiabilityReport {
        let mut report = DifferentiabilityReport {
            max_degree,
            simplicial: self.simplicial,
            multiplicative: None,
            commutes: None,
            ideal_preserved: true,
            witnesses: Vec::new(),
        };
        if let Some(w) = self.non_simplicial_witness() {
            report.witnesses.push(format!("not simplicial: {w}"));
        }

        if self.simplicial {
            let (multiplicative, commutes, witnesses) = self.check_homomorphism(max_degree, exec);
            report.multiplicative = Some(multiplicative);
            report.commutes = Some(commutes);
            report.witnesses.extend(witnesses);
        }

        let target = &self.target;
        let hull = &self.hull;
        for degree in 1..=max_degree {
            let mut generators: Vec<StoryElement> = Vec::new();
            for g in stories::raw_ideal_generators(target, degree).expect("degree >= 1") {
                generators.push(g.to_element(target));
            }
            for w in self.escape_stories(degree) {
                generators.push(StoryElement::basis(hull, w));
            }
            let failures = exec::map(exec, &generators, |g| {
                let pulled = self.pullback_stories(g).expect("generator lives over target or hull");
                (!pulled.in_ideal()).then(|| format!("ideal not preserved: {g} pulls back to {pulled}"))
            });
            if let Some(first) = failures.into_iter().flatten().next() {
                report.ideal_preserved = false;
                report.witnesses.push(first);
            }
        }
        report
    }

    fn check_homomorphism(&self, max_degree: usize, exec: Execution) -> (bool, bool, Vec<String>) {
        let target = &self.target;
        let pairs: Vec<BasisPair> = (0..=max_degree + 1).flat_map(|n| basis_pairs(target, n)).collect();
        let images: Vec<IncidenceElement> = exec::map(exec, &pairs, |p| {
            self.pullback_algebra(&IncidenceElement::basis(target, *p)).expect("simplicial")
        });
        let cache: HashMap<BasisPair, &IncidenceElement> = pairs.iter().copied().zip(images.iter()).collect();
        let apply = |x: &IncidenceElement| {
            let mut out = IncidenceElement::zero(&self.source);
            for (p, c) in x.terms() {
                for (q, y) in cache[p].terms() {
                    out.add_term(*q, c * y);
                }
            }
            out
        };

        let low: Vec<BasisPair> = pairs.iter().copied().filter(|p| p.degree() <= max_degree).collect();
        let mut witnesses = Vec::new();
        let products = exec::map(exec, &low, |x| {
            let xe = IncidenceElement::basis(target, *x);
            for y in low.iter().filter(|y| x.degree() + y.degree() <= max_degree) {
                let ye = IncidenceElement::basis(target, *y);
                let lhs = apply(&xe.multiply(&ye).unwrap());
                let rhs = cache[x].multiply(cache[y]).unwrap();
                if lhs != rhs {
                    return Some(format!(
                        "not multiplicative on {} · {}",
                        expr::format_pair(target, x),
                        expr::format_pair(target, y)
                    ));
                }
            }
            None
        });
        let multiplicative = products.iter().all(Option::is_none);
        witnesses.extend(products.into_iter().flatten().take(1));

        let commutation = exec::map(exec, &low, |x| {
            let lhs = apply(&IncidenceElement::basis(target, *x).differential());
            let rhs = cache[x].differential();
            (lhs != rhs).then(|| format!("does not commute with d on {}", expr::format_pair(target, x)))
        });
        let commutes = commutation.iter().all(Option::is_none);
        witnesses.extend(commutation.into_iter().flatten().take(1));
        (multiplicative, commutes, witnesses)
    }
}

/// Vertex-wise composite `m1 ∘ m2` of `m2: K'' -> K'` and `m1: K' -> K`.
pub fn compose(m2: &VertexMap, m1: &VertexMap) -> Result<VertexMap> {
    if !same_complex(&m2.target, &m1.source) {
        return Err(Error::ComplexMismatch);
    }
    let assignment = m2.assignment.iter().map(|&v| m1.assignment[v as usize]).collect();
    Ok(VertexMap::from_assignment(&m2.source, &m1.target, assignment))
}

/// Result of [`VertexMap::check_differentiable`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DifferentiabilityReport {
    pub max_degree: usize,
    pub simplicial: bool,
    pub multiplicative: Option<bool>,
    pub commutes: Option<bool>,
    pub ideal_preserved: bool,
    pub witnesses: Vec<String>,
}

impl DifferentiabilityReport {
    pub fn passed(&self) -> bool {
        self.simplicial && self.multiplicative == Some(true) && self.commutes == Some(true) && self.ideal_preserved
    }
}
