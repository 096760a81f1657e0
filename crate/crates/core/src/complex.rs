//! Finite abstract simplicial complexes with a fixed vertex enumeration.
//!
//! Every sign in the crate derives from the enumeration given at build time:
//! the incidence coefficient of `v` in `P` is `(-1)^i` where `i` is the
//! position of `v` in `P` listed in enumeration order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::sign::{self, Sign};
use crate::Scalar;

/// Position of a vertex in the complex's enumeration.
pub type VertexId = u32;

/// Position of a simplex in the complex's lexicographic simplex list.
pub type SimplexId = u32;

/// A non-empty set of vertices, kept sorted by enumeration position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(SmallVec<[VertexId; 6]>);

impl Simplex {
    /// Builds a simplex from arbitrary vertex ids. Returns `None` on an empty
    /// or repeating vertex list.
    pub fn from_vertices(vertices: impl IntoIterator<Item = VertexId>) -> Option<Self> {
        let mut v: SmallVec<[VertexId; 6]> = vertices.into_iter().collect();
        v.sort_unstable();
        let len = v.len();
        v.dedup();
        (len > 0 && v.len() == len).then_some(Simplex(v))
    }

    /// Builds the simplex spanned by `vertices`, ignoring repeats.
    pub fn from_vertices_dedup(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut v: SmallVec<[VertexId; 6]> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        assert!(!v.is_empty(), "a simplex needs a vertex");
        Simplex(v)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Index of `v` in the enumerated vertex list of this simplex.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.position(v).is_some()
    }

    /// The face `P - v`. Removing the last vertex yields an empty set, which is
    /// not a simplex, so this returns `None` for vertices.
    pub fn without(&self, v: VertexId) -> Option<Simplex> {
        let i = self.position(v)?;
        if self.0.len() == 1 {
            return None;
        }
        let mut out = self.0.clone();
        out.remove(i);
        Some(Simplex(out))
    }

    /// `P + v`, or `None` if `v` is already present.
    pub fn with(&self, v: VertexId) -> Option<Simplex> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(i) => {
                let mut out = self.0.clone();
                out.insert(i, v);
                Some(Simplex(out))
            }
        }
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.contains(*v))
    }

    /// Vertices of `self` missing from `other`, in enumeration order.
    pub fn minus(&self, other: &Simplex) -> Vec<VertexId> {
        self.0.iter().copied().filter(|v| !other.contains(*v)).collect()
    }
}

/// A codimension-one incidence: the simplex on the other side, the vertex
/// that differs, and `ε` of that vertex in the larger simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub simplex: SimplexId,
    pub vertex: VertexId,
    pub sign: Sign,
}

/// A finite simplicial complex.
///
/// Immutable once built. Simplices are numbered in lexicographic order of
/// their enumerated vertex lists, so `SimplexId` order is the canonical order.
#[derive(Clone)]
pub struct Complex {
    vertex_order: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, SimplexId>,
    by_dim: Vec<Vec<SimplexId>>,
    faces: Vec<Vec<Incidence>>,
    cofaces: Vec<Vec<Incidence>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_order == other.vertex_order && self.simplices == other.simplices
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("vertex_order", &self.vertex_order)
            .field("simplices", &self.simplices.len())
            .field("dim", &self.dim())
            .finish()
    }
}

impl Complex {
    /// Builds the downward closure of `facets` over the enumeration
    /// `vertex_order`. Every vertex becomes a simplex even if no facet uses it.
    pub fn build<S: AsRef<str>, F: AsRef<[S]>>(vertex_order: &[S], facets: &[F]) -> Result<Self> {
        let order: Vec<String> = vertex_order.iter().map(|s| s.as_ref().to_string()).collect();
        let index = Self::index_vertices(&order)?;
        let mut sets = Vec::with_capacity(facets.len());
        for facet in facets {
            let facet = facet.as_ref();
            if facet.is_empty() {
                return Err(Error::EmptyFacet);
            }
            let mut ids = Vec::with_capacity(facet.len());
            for label in facet {
                let label = label.as_ref();
                let id = *index.get(label).ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
                if ids.contains(&id) {
                    return Err(Error::RepeatedVertexInSimplex(label.to_string()));
                }
                ids.push(id);
            }
            sets.push(Simplex::from_vertices(ids).expect("checked non-empty and distinct"));
        }
        Ok(Self::from_parts(order, index, sets))
    }

    /// Same as [`Complex::build`] for already-resolved vertex sets.
    pub(crate) fn from_vertex_sets(vertex_order: Vec<String>, sets: Vec<Simplex>) -> Self {
        let index = Self::index_vertices(&vertex_order).expect("vertex order already validated");
        Self::from_parts(vertex_order, index, sets)
    }

    fn index_vertices(order: &[String]) -> Result<HashMap<String, VertexId>> {
        if order.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let mut index = HashMap::with_capacity(order.len());
        for (i, label) in order.iter().enumerate() {
            if index.insert(label.clone(), i as VertexId).is_some() {
                return Err(Error::DuplicateVertex(label.clone()));
            }
        }
        Ok(index)
    }

    fn from_parts(vertex_order: Vec<String>, vertex_index: HashMap<String, VertexId>, sets: Vec<Simplex>) -> Self {
        let mut closed: BTreeSet<Simplex> =
            (0..vertex_order.len() as VertexId).map(|v| Simplex::from_vertices([v]).unwrap()).collect();
        for set in sets {
            if closed.contains(&set) {
                continue;
            }
            let verts = set.vertices();
            assert!(verts.len() < 31, "facet with {} vertices is too large to close", verts.len());
            for mask in 1u32..(1u32 << verts.len()) {
                let sub = (0..verts.len()).filter(|i| mask & (1 << i) != 0).map(|i| verts[i]);
                closed.insert(Simplex::from_vertices(sub).unwrap());
            }
        }

        let simplices: Vec<Simplex> = closed.into_iter().collect();
        let index: HashMap<Simplex, SimplexId> =
            simplices.iter().enumerate().map(|(i, s)| (s.clone(), i as SimplexId)).collect();
        let top = simplices.iter().map(Simplex::dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top + 1];
        let mut faces = vec![Vec::new(); simplices.len()];
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (id, s) in simplices.iter().enumerate() {
            by_dim[s.dim()].push(id as SimplexId);
            for (i, &v) in s.vertices().iter().enumerate() {
                if let Some(face) = s.without(v) {
                    let face_id = index[&face];
                    let sign = Sign::parity(i);
                    faces[id].push(Incidence { simplex: face_id, vertex: v, sign });
                    cofaces[face_id as usize].push(Incidence { simplex: id as SimplexId, vertex: v, sign });
                }
            }
        }
        for list in &mut cofaces {
            list.sort_by_key(|inc| inc.simplex);
        }

        Complex { vertex_order, vertex_index, simplices, index, by_dim, faces, cofaces }
    }

    pub fn vertex_order(&self) -> &[String] {
        &self.vertex_order
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_order.len()
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.vertex_index.get(label).copied()
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertex_order[v as usize]
    }

    /// All simplices in canonical (lexicographic) order.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.simplices[id as usize]
    }

    pub fn id_of(&self, s: &Simplex) -> Option<SimplexId> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Top dimension.
    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// Ids of the simplices of dimension `n`, in canonical order.
    pub fn skeleton(&self, n: usize) -> &[SimplexId] {
        self.by_dim.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Codimension-one faces of `id`.
    pub fn faces(&self, id: SimplexId) -> &[Incidence] {
        &self.faces[id as usize]
    }

    /// Codimension-one cofaces of `id`, sorted by simplex id.
    pub fn cofaces(&self, id: SimplexId) -> &[Incidence] {
        &self.cofaces[id as usize]
    }

    /// The coface incidence `lower -> upper`, if `upper = lower + v`.
    pub fn cover(&self, lower: SimplexId, upper: SimplexId) -> Option<Incidence> {
        let list = &self.cofaces[lower as usize];
        list.binary_search_by_key(&upper, |inc| inc.simplex).ok().map(|i| list[i])
    }

    /// `ε_{vP} = (-1)^i`, `i` the position of `v` in `P`.
    pub fn incidence_coeff(&self, v: VertexId, p: &Simplex) -> Result<Sign> {
        p.position(v).map(Sign::parity).ok_or_else(|| Error::VertexNotInSimplex {
            vertex: self.vertex_order.get(v as usize).cloned().unwrap_or_else(|| v.to_string()),
            simplex: self.format_simplex(p),
        })
    }

    /// Resolves vertex labels into a simplex of this complex.
    pub fn simplex_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Simplex> {
        let s = self.vertex_set_from_labels(labels)?;
        if self.contains(&s) {
            Ok(s)
        } else {
            Err(Error::NotASimplex(self.format_simplex(&s)))
        }
    }

    /// Resolves vertex labels into a vertex set, without checking membership.
    pub fn vertex_set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Simplex> {
        if labels.is_empty() {
            return Err(Error::EmptyFacet);
        }
        let mut ids = Vec::with_capacity(labels.len());
        for label in labels {
            let label = label.as_ref();
            let id = self.vertex_id(label).ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
            if ids.contains(&id) {
                return Err(Error::RepeatedVertexInSimplex(label.to_string()));
            }
            ids.push(id);
        }
        Ok(Simplex::from_vertices(ids).unwrap())
    }

    pub fn id_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<SimplexId> {
        let s = self.simplex_from_labels(labels)?;
        Ok(self.index[&s])
    }

    pub fn labels(&self, s: &Simplex) -> Vec<String> {
        s.vertices().iter().map(|&v| self.vertex_label(v).to_string()).collect()
    }

    /// Space-separated vertex labels, e.g. `1 2 3`.
    pub fn format_simplex(&self, s: &Simplex) -> String {
        s.vertices()
            .iter()
            .map(|&v| self.vertex_order.get(v as usize).map(String::as_str).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn format_id(&self, id: SimplexId) -> String {
        self.format_simplex(self.simplex(id))
    }

    /// Maximal simplices, in canonical order.
    pub fn facets(&self) -> Vec<SimplexId> {
        (0..self.len() as SimplexId).filter(|&id| self.cofaces(id).is_empty()).collect()
    }

    /// Border operator `∂|P> = Σ_v ε_{vP} |P - v>` extended linearly.
    /// The border of a vertex chain is the zero chain; it is reported in
    /// dimension 0 since there is no dimension -1.
    pub fn border(&self, x: &Chain) -> Chain {
        let mut out = Chain::zero(x.dim.saturating_sub(1));
        for (&id, coeff) in &x.terms {
            for inc in self.faces(id) {
                out.add_term(inc.simplex, inc.sign.apply(coeff));
            }
        }
        out
    }

    /// Coborder, the adjoint of [`Complex::border`]:
    /// `<P|∂ = Σ_{u: P+u ∈ K} ε_{u,P+u} <P+u|`.
    pub fn coborder(&self, x: &Chain) -> Chain {
        let mut out = Chain::zero(x.dim + 1);
        for (&id, coeff) in &x.terms {
            for inc in self.cofaces(id) {
                out.add_term(inc.simplex, inc.sign.apply(coeff));
            }
        }
        out
    }
}

/// A homogeneous rational combination of simplices of one dimension.
///
/// Chains and cochains share this type; whether a value is read as a ket
/// or a bra is decided by the operator applied to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    dim: usize,
    terms: BTreeMap<SimplexId, Scalar>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, terms: BTreeMap::new() }
    }

    /// `|P>` for the simplex `id`.
    pub fn basis(c: &Complex, id: SimplexId) -> Self {
        let mut out = Chain::zero(c.simplex(id).dim());
        out.terms.insert(id, Scalar::from_integer(1.into()));
        out
    }

    /// Collects terms into a chain; every simplex must have the same dimension.
    pub fn from_terms(c: &Complex, terms: impl IntoIterator<Item = (SimplexId, Scalar)>) -> Result<Self> {
        let mut out: Option<Chain> = None;
        for (id, coeff) in terms {
            let dim = c.simplex(id).dim();
            let chain = out.get_or_insert_with(|| Chain::zero(dim));
            if chain.dim != dim {
                return Err(Error::MixedDimension(chain.dim, dim));
            }
            chain.add_term(id, coeff);
        }
        Ok(out.unwrap_or_else(|| Chain::zero(0)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, id: SimplexId) -> Scalar {
        self.terms.get(&id).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (SimplexId, &Scalar)> {
        self.terms.iter().map(|(id, x)| (*id, x))
    }

    fn add_term(&mut self, id: SimplexId, x: Scalar) {
        if sign::is_zero(&x) {
            return;
        }
        let slot = self.terms.entry(id).or_insert_with(Scalar::zero);
        *slot += x;
        if slot.is_zero() {
            self.terms.remove(&id);
        }
    }
}

/// Rational Betti numbers `β_0, …, β_dim`, from exact ranks of the border
/// matrices.
pub fn betti(c: &Complex) -> Vec<usize> {
    let top = c.dim();
    let ranks: Vec<usize> = (0..=top + 1)
        .map(|n| {
            if n == 0 || n > top {
                return 0;
            }
            let rows: HashMap<SimplexId, usize> =
                c.skeleton(n - 1).iter().enumerate().map(|(i, &id)| (id, i)).collect();
            let columns = c.skeleton(n).iter().map(|&id| {
                c.border(&Chain::basis(c, id))
                    .terms()
                    .map(|(face, x)| (rows[&face], x.clone()))
                    .collect::<BTreeMap<_, _>>()
            });
            linalg::rank(columns)
        })
        .collect();
    (0..=top).map(|n| c.skeleton(n).len() - ranks[n] - ranks[n + 1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_integer(n.into())
    }

    fn triangle() -> Complex {
        Complex::build(&["1", "2", "3"], &[vec!["1", "2", "3"]]).unwrap()
    }

    fn chain(c: &Complex, terms: &[(&[&str], i64)]) -> Chain {
        Chain::from_terms(c, terms.iter().map(|(s, x)| (c.id_from_labels(s).unwrap(), q(*x)))).unwrap()
    }

    #[test]
    fn full_triangle_has_seven_simplices() {
        let c = triangle();
        assert_eq!(c.len(), 7);
        assert_eq!(c.skeleton(0).len(), 3);
        assert_eq!(c.skeleton(1).len(), 3);
        assert_eq!(c.skeleton(2).len(), 1);
    }

    #[test]
    fn singletons_are_forced() {
        let c = Complex::build::<&str, Vec<&str>>(&["1", "2"], &[]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn path_complex() {
        let c = Complex::build(&["1", "2", "3"], &[vec!["1", "2"], vec!["2", "3"]]).unwrap();
        assert_eq!(c.len(), 5);
        assert!(c.simplex_from_labels(&["1", "3"]).is_err());
    }

    #[test]
    fn build_errors() {
        assert_eq!(Complex::build(&["1", "2"], &[vec!["1", "3"]]).unwrap_err(), Error::UnknownVertex("3".into()));
        assert_eq!(Complex::build::<&str, Vec<&str>>(&["1", "2"], &[vec![]]).unwrap_err(), Error::EmptyFacet);
        assert_eq!(
            Complex::build::<&str, Vec<&str>>(&["1", "1"], &[]).unwrap_err(),
            Error::DuplicateVertex("1".into())
        );
        assert_eq!(Complex::build::<&str, Vec<&str>>(&[], &[]).unwrap_err(), Error::EmptyComplex);
    }

    #[test]
    fn skeletons() {
        let c = triangle();
        let edges: Vec<String> = c.skeleton(1).iter().map(|&id| c.format_id(id)).collect();
        assert_eq!(edges, ["1 2", "1 3", "2 3"]);
        assert!(c.skeleton(5).is_empty());
        let path = Complex::build(&["1", "2", "3"], &[vec!["1", "2"], vec!["2", "3"]]).unwrap();
        let verts: Vec<String> = path.skeleton(0).iter().map(|&id| path.format_id(id)).collect();
        assert_eq!(verts, ["1", "2", "3"]);
    }

    #[test]
    fn incidence_coefficients() {
        let c = triangle();
        let p = c.simplex_from_labels(&["1", "2", "3"]).unwrap();
        assert_eq!(c.incidence_coeff(0, &p).unwrap(), Sign::Plus);
        assert_eq!(c.incidence_coeff(1, &p).unwrap(), Sign::Minus);
        assert_eq!(c.incidence_coeff(2, &p).unwrap(), Sign::Plus);
        let e = c.simplex_from_labels(&["1", "2"]).unwrap();
        assert!(matches!(c.incidence_coeff(2, &e), Err(Error::VertexNotInSimplex { .. })));
    }

    #[test]
    fn enumeration_not_label_order_drives_signs() {
        let c = Complex::build(&["b", "a"], &[vec!["a", "b"]]).unwrap();
        let e = c.simplex_from_labels(&["a", "b"]).unwrap();
        assert_eq!(c.format_simplex(&e), "b a");
        assert_eq!(c.incidence_coeff(c.vertex_id("a").unwrap(), &e).unwrap(), Sign::Minus);
    }

    #[test]
    fn border_examples() {
        let c = triangle();
        assert_eq!(c.border(&chain(&c, &[(&["1", "2"], 1)])), chain(&c, &[(&["2"], 1), (&["1"], -1)]));
        assert!(c.border(&chain(&c, &[(&["1"], 1)])).is_zero());
        assert_eq!(
            c.border(&chain(&c, &[(&["1", "2", "3"], 1)])),
            chain(&c, &[(&["2", "3"], 1), (&["1", "3"], -1), (&["1", "2"], 1)])
        );
    }

    #[test]
    fn coborder_examples() {
        let c = triangle();
        assert_eq!(c.coborder(&chain(&c, &[(&["1"], 1)])), chain(&c, &[(&["1", "2"], -1), (&["1", "3"], -1)]));
        assert_eq!(c.coborder(&chain(&c, &[(&["1", "2"], 1)])), chain(&c, &[(&["1", "2", "3"], 1)]));
        assert!(c.coborder(&chain(&c, &[(&["1", "2", "3"], 1)])).is_zero());
    }

    #[test]
    fn mixed_dimension_rejected() {
        let c = triangle();
        let err = Chain::from_terms(
            &c,
            [(c.id_from_labels(&["1"]).unwrap(), q(1)), (c.id_from_labels(&["1", "2"]).unwrap(), q(1))],
        )
        .unwrap_err();
        assert_eq!(err, Error::MixedDimension(0, 1));
    }

    #[test]
    fn betti_examples() {
        let hollow = Complex::build(&["1", "2", "3"], &[vec!["1", "2"], vec!["1", "3"], vec!["2", "3"]]).unwrap();
        assert_eq!(betti(&hollow), vec![1, 1]);
        let two = Complex::build::<&str, Vec<&str>>(&["1", "2"], &[]).unwrap();
        assert_eq!(betti(&two), vec![2]);
        let sphere = Complex::build(
            &["1", "2", "3", "4"],
            &[vec!["1", "2", "3"], vec!["1", "2", "4"], vec!["1", "3", "4"], vec!["2", "3", "4"]],
        )
        .unwrap();
        assert_eq!(betti(&sphere), vec![1, 0, 1]);
        assert_eq!(betti(&triangle()), vec![1, 0, 0]);
    }

    #[test]
    fn cover_lookup() {
        let c = triangle();
        let a = c.id_from_labels(&["1"]).unwrap();
        let b = c.id_from_labels(&["1", "3"]).unwrap();
        let t = c.id_from_labels(&["1", "2", "3"]).unwrap();
        assert_eq!(c.cover(a, b).unwrap().sign, Sign::Minus);
        assert!(c.cover(a, t).is_none());
        assert_eq!(c.cover(b, t).unwrap().vertex, 1);
    }
}
