//! The incidence algebra `I(K)` of a simplicial complex, graded by
//! `dim Q - dim P`, with its product and differential.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::{Complex, Simplex, SimplexId};
use crate::error::{Error, Result};
use crate::sign::Sign;
use crate::Scalar;

/// A basis element `|P><Q|` with `P ⊆ Q`.
///
/// The derived order is the canonical one: degree, then `P`, then `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisPair {
    degree: u32,
    lower: SimplexId,
    upper: SimplexId,
}

impl BasisPair {
    pub fn new(c: &Complex, lower: SimplexId, upper: SimplexId) -> Result<Self> {
        let (p, q) = (c.simplex(lower), c.simplex(upper));
        if !p.is_subset_of(q) {
            return Err(Error::NotASubset { lower: c.format_simplex(p), upper: c.format_simplex(q) });
        }
        Ok(BasisPair { degree: (q.dim() - p.dim()) as u32, lower, upper })
    }

    pub(crate) fn new_unchecked(c: &Complex, lower: SimplexId, upper: SimplexId) -> Self {
        debug_assert!(c.simplex(lower).is_subset_of(c.simplex(upper)));
        let degree = (c.simplex(upper).dim() - c.simplex(lower).dim()) as u32;
        BasisPair { degree, lower, upper }
    }

    pub fn from_labels<S: AsRef<str>>(c: &Complex, p: &[S], q: &[S]) -> Result<Self> {
        Self::new(c, c.id_from_labels(p)?, c.id_from_labels(q)?)
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// `P`.
    pub fn lower(&self) -> SimplexId {
        self.lower
    }

    /// `Q`.
    pub fn upper(&self) -> SimplexId {
        self.upper
    }

    pub fn is_diagonal(&self) -> bool {
        self.lower == self.upper
    }
}

/// All pairs `P ⊆ Q` with `dim Q - dim P = n`, in canonical order.
pub fn basis_pairs(c: &Complex, n: usize) -> Vec<BasisPair> {
    let mut out = Vec::new();
    for (q_id, q) in c.simplices().iter().enumerate() {
        if q.len() <= n {
            continue;
        }
        for_each_subset(q.vertices(), q.len() - n, &mut |verts| {
            let p = Simplex::from_vertices(verts.iter().copied()).unwrap();
            let p_id = c.id_of(&p).expect("complex is downward closed");
            out.push(BasisPair { degree: n as u32, lower: p_id, upper: q_id as SimplexId });
        });
    }
    out.sort();
    out
}

fn for_each_subset(items: &[u32], k: usize, f: &mut impl FnMut(&[u32])) {
    fn go(items: &[u32], k: usize, start: usize, acc: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - acc.len() {
                break;
            }
            acc.push(items[i]);
            go(items, k, i + 1, acc, f);
            acc.pop();
        }
    }
    go(items, k, 0, &mut Vec::with_capacity(k), f);
}

pub(crate) fn same_complex(a: &Arc<Complex>, b: &Arc<Complex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A rational combination of basis pairs of one complex.
#[derive(Clone)]
pub struct IncidenceElement {
    complex: Arc<Complex>,
    terms: BTreeMap<BasisPair, Scalar>,
}

impl IncidenceElement {
    pub fn zero(c: &Arc<Complex>) -> Self {
        IncidenceElement { complex: c.clone(), terms: BTreeMap::new() }
    }

    pub fn basis(c: &Arc<Complex>, pair: BasisPair) -> Self {
        let mut out = Self::zero(c);
        out.terms.insert(pair, Scalar::one());
        out
    }

    pub fn from_terms(c: &Arc<Complex>, terms: impl IntoIterator<Item = (BasisPair, Scalar)>) -> Self {
        let mut out = Self::zero(c);
        for (pair, x) in terms {
            out.add_term(pair, x);
        }
        out
    }

    /// `Σ_P |P><P|`, the unit of the algebra.
    pub fn identity(c: &Arc<Complex>) -> Self {
        Self::from_terms(c, (0..c.len() as SimplexId).map(|id| (BasisPair::new_unchecked(c, id, id), Scalar::one())))
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisPair, &Scalar)> {
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

    pub fn coeff(&self, pair: &BasisPair) -> Scalar {
        self.terms.get(pair).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The common degree of all terms, or `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        let first = self.terms.keys().next()?.degree;
        self.terms.keys().all(|p| p.degree == first).then_some(first as usize)
    }

    pub fn add_term(&mut self, pair: BasisPair, x: Scalar) {
        if x.is_zero() {
            return;
        }
        let slot = self.terms.entry(pair).or_insert_with(Scalar::zero);
        *slot += x;
        if slot.is_zero() {
            self.terms.remove(&pair);
        }
    }

    pub fn scale(&self, x: &Scalar) -> Self {
        Self::from_terms(&self.complex, self.terms.iter().map(|(p, c)| (*p, c * x)))
    }

    /// Splits into homogeneous parts keyed by degree.
    pub fn degree_decompose(&self) -> BTreeMap<usize, IncidenceElement> {
        let mut out: BTreeMap<usize, IncidenceElement> = BTreeMap::new();
        for (pair, x) in &self.terms {
            out.entry(pair.degree()).or_insert_with(|| Self::zero(&self.complex)).terms.insert(*pair, x.clone());
        }
        out
    }

    /// Bilinear extension of `|P><Q| · |R><S| = δ_{QR} |P><S|`.
    pub fn multiply(&self, other: &IncidenceElement) -> Result<IncidenceElement> {
        if !same_complex(&self.complex, &other.complex) {
            return Err(Error::ComplexMismatch);
        }
        let mut by_lower: HashMap<SimplexId, Vec<(&BasisPair, &Scalar)>> = HashMap::new();
        for (pair, x) in &other.terms {
            by_lower.entry(pair.lower).or_default().push((pair, x));
        }
        let mut out = Self::zero(&self.complex);
        for (left, x) in &self.terms {
            for (right, y) in by_lower.get(&left.upper).into_iter().flatten() {
                let pair = BasisPair { degree: left.degree + right.degree, lower: left.lower, upper: right.upper };
                out.add_term(pair, x * *y);
            }
        }
        Ok(out)
    }

    /// The differential `d|P><Q| = |∂P><Q| - (-1)^n |P><Q∂|` on a degree-`n`
    /// pair, extended linearly (mixed degrees are handled termwise).
    pub fn differential(&self) -> IncidenceElement {
        let c = &self.complex;
        let mut out = Self::zero(c);
        for (pair, x) in &self.terms {
            let degree = pair.degree + 1;
            for face in c.faces(pair.lower) {
                let term = BasisPair { degree, lower: face.simplex, upper: pair.upper };
                out.add_term(term, face.sign.apply(x));
            }
            let outer = -Sign::parity(pair.degree());
            for coface in c.cofaces(pair.upper) {
                let term = BasisPair { degree, lower: pair.lower, upper: coface.simplex };
                out.add_term(term, (outer * coface.sign).apply(x));
            }
        }
        out
    }

    pub(crate) fn check_same(&self, other: &IncidenceElement) {
        assert!(same_complex(&self.complex, &other.complex), "operands live over different complexes");
    }
}

impl PartialEq for IncidenceElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_complex(&self.complex, &other.complex)
    }
}

impl Eq for IncidenceElement {}

impl fmt::Debug for IncidenceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IncidenceElement({self})")
    }
}

impl Add for &IncidenceElement {
    type Output = IncidenceElement;

    fn add(self, rhs: &IncidenceElement) -> IncidenceElement {
        self.check_same(rhs);
        let mut out = self.clone();
        for (pair, x) in &rhs.terms {
            out.add_term(*pair, x.clone());
        }
        out
    }
}

impl Sub for &IncidenceElement {
    type Output = IncidenceElement;

    fn sub(self, rhs: &IncidenceElement) -> IncidenceElement {
        self.check_same(rhs);
        let mut out = self.clone();
        for (pair, x) in &rhs.terms {
            out.add_term(*pair, -x);
        }
        out
    }
}

impl Neg for &IncidenceElement {
    type Output = IncidenceElement;

    fn neg(self) -> IncidenceElement {
        self.scale(&-Scalar::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Arc<Complex> {
        Arc::new(Complex::build(&["1", "2", "3"], &[vec!["1", "2", "3"]]).unwrap())
    }

    fn edge() -> Arc<Complex> {
        Arc::new(Complex::build(&["1", "2"], &[vec!["1", "2"]]).unwrap())
    }

    fn pair(c: &Arc<Complex>, p: &[&str], q: &[&str]) -> IncidenceElement {
        IncidenceElement::basis(c, BasisPair::from_labels(c, p, q).unwrap())
    }

    #[test]
    fn basis_sizes_for_triangle() {
        let c = triangle();
        assert_eq!(basis_pairs(&c, 0).len(), 7);
        assert_eq!(basis_pairs(&c, 1).len(), 9);
        assert_eq!(basis_pairs(&c, 2).len(), 3);
        assert!(basis_pairs(&c, 3).is_empty());
    }

    #[test]
    fn basis_pairs_are_sorted_and_subsets() {
        let c = triangle();
        let pairs = basis_pairs(&c, 1);
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        for p in pairs {
            assert!(c.simplex(p.lower()).is_subset_of(c.simplex(p.upper())));
        }
    }

    #[test]
    fn non_subset_pair_rejected() {
        let c = triangle();
        assert!(matches!(BasisPair::from_labels(&c, &["1", "2"], &["1"]), Err(Error::NotASubset { .. })));
        assert!(matches!(BasisPair::from_labels(&c, &["1"], &["2", "3"]), Err(Error::NotASubset { .. })));
    }

    #[test]
    fn product_examples() {
        let c = triangle();
        let a = pair(&c, &["1"], &["1", "2"]);
        assert_eq!(a.multiply(&pair(&c, &["1", "2"], &["1", "2", "3"])).unwrap(), pair(&c, &["1"], &["1", "2", "3"]));
        assert!(a.multiply(&pair(&c, &["1", "3"], &["1", "2", "3"])).unwrap().is_zero());
        let e = pair(&c, &["1"], &["1"]);
        assert_eq!(e.multiply(&e).unwrap(), e);
    }

    #[test]
    fn product_rejects_foreign_complex() {
        let a = pair(&triangle(), &["1"], &["1"]);
        let b = pair(&edge(), &["1"], &["1"]);
        assert_eq!(a.multiply(&b).unwrap_err(), Error::ComplexMismatch);
    }

    #[test]
    fn differential_examples() {
        let c = triangle();
        let d0 = pair(&c, &["1"], &["1"]).differential();
        assert_eq!(d0, &pair(&c, &["1"], &["1", "2"]) + &pair(&c, &["1"], &["1", "3"]));
        let d1 = pair(&c, &["1"], &["1", "2"]).differential();
        assert_eq!(d1, pair(&c, &["1"], &["1", "2", "3"]));
        let e = edge();
        assert!(pair(&e, &["1"], &["1"]).differential().differential().is_zero());
    }

    #[test]
    fn leibniz_worked_identity_on_edge() {
        let c = edge();
        let a = pair(&c, &["1"], &["1"]);
        let lhs = a.multiply(&a).unwrap().differential();
        let rhs = &a.differential().multiply(&a).unwrap() + &a.multiply(&a.differential()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, pair(&c, &["1"], &["1", "2"]));
    }

    #[test]
    fn identity_is_two_sided_unit() {
        let c = triangle();
        let one = IncidenceElement::identity(&c);
        let x = &pair(&c, &["1"], &["1", "2"])
            + &pair(&c, &["2", "3"], &["1", "2", "3"]).scale(&Scalar::new(3.into(), 2.into()));
        assert_eq!(one.multiply(&x).unwrap(), x);
        assert_eq!(x.multiply(&one).unwrap(), x);
    }

    #[test]
    fn degree_decomposition() {
        let c = triangle();
        let a = pair(&c, &["1"], &["1"]);
        let b = pair(&c, &["1"], &["1", "2"]).scale(&Scalar::from_integer(2.into()));
        let parts = (&a + &b).degree_decompose();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(parts[&0], a);
        assert_eq!(parts[&1], b);
        assert!(IncidenceElement::zero(&c).degree_decompose().is_empty());
        let top = pair(&c, &["1"], &["1", "2", "3"]).degree_decompose();
        assert_eq!(top.keys().copied().collect::<Vec<_>>(), vec![2]);
    }
}
