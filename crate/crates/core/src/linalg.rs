//! Exact rank of sparse rational matrices.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::Scalar;

/// A sparse column: row index to nonzero entry.
pub type SparseColumn = BTreeMap<usize, Scalar>;

/// Rank of the matrix whose columns are given, by Gaussian elimination over
/// the rationals. Each column is reduced against the pivots found so far
/// (pivot = smallest row index, normalized to 1).
pub fn rank(columns: impl IntoIterator<Item = SparseColumn>) -> usize {
    let mut pivots: HashMap<usize, SparseColumn> = HashMap::new();
    for mut col in columns {
        col.retain(|_, x| !x.is_zero());
        while let Some((&row, lead)) = col.iter().next() {
            match pivots.get(&row) {
                Some(pivot) => {
                    let factor = lead.clone();
                    for (&r, x) in pivot {
                        let entry = col.entry(r).or_insert_with(Scalar::zero);
                        *entry -= &factor * x;
                        if entry.is_zero() {
                            col.remove(&r);
                        }
                    }
                }
                None => {
                    let inv = Scalar::one() / lead;
                    for x in col.values_mut() {
                        *x *= &inv;
                    }
                    pivots.insert(row, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(entries: &[(usize, i64)]) -> SparseColumn {
        entries.iter().map(|&(r, x)| (r, Scalar::from_integer(x.into()))).collect()
    }

    #[test]
    fn identity_and_dependent_columns() {
        assert_eq!(rank([col(&[(0, 1)]), col(&[(1, 1)])]), 2);
        assert_eq!(rank([col(&[(0, 1), (1, 2)]), col(&[(0, 2), (1, 4)])]), 1);
        assert_eq!(rank([col(&[]), col(&[(3, 0)])]), 0);
    }

    #[test]
    fn hollow_triangle_border() {
        // rows 1,2,3; columns 12, 13, 23
        let cols = [col(&[(0, -1), (1, 1)]), col(&[(0, -1), (2, 1)]), col(&[(1, -1), (2, 1)])];
        assert_eq!(rank(cols), 2);
    }

    #[test]
    fn rational_pivots() {
        let half = |r| (r, Scalar::new(1.into(), 2.into()));
        let c1: SparseColumn = [half(0), half(1)].into_iter().collect();
        let c2 = col(&[(0, 3), (1, 3)]);
        let c3 = col(&[(1, 1), (2, 5)]);
        assert_eq!(rank([c1, c2, c3]), 2);
    }
}
