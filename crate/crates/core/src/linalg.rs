//! Exact Gaussian elimination over `Q`.
//!
//! [`Echelon`] is an incremental column basis over sparse vectors keyed by
//! any ordered index (words, row numbers). Columns are inserted in order;
//! a column that reduces to zero is dependent on earlier ones and never
//! becomes a pivot, which is the same as row-reducing the stacked matrix and
//! setting free variables to zero.
//!
//! [`solve_linear`] is plain dense Gauss-Jordan on `[A | b | I]`, returning a
//! left-null certificate when the system is inconsistent.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, factor: &Rational, source: &SparseVec<K>) {
    for (k, v) in source {
        let delta = factor * v;
        match target.get_mut(k) {
            Some(t) => {
                *t += delta;
                if t.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                target.insert(k.clone(), delta);
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Pivot<K> {
    vector: SparseVec<K>,
    /// Expression of `vector` in terms of inserted columns.
    combination: SparseVec<usize>,
}

/// Column basis built by elimination, optionally remembering how each basis
/// vector is composed from the inserted columns.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    pivots: BTreeMap<K, Pivot<K>>,
    track: bool,
    inserted: usize,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(track_combinations: bool) -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            track: track_combinations,
            inserted: 0,
        }
    }

    pub fn from_columns<I: IntoIterator<Item = SparseVec<K>>>(columns: I, track: bool) -> Self {
        let mut e = Echelon::new(track);
        for c in columns {
            e.insert(c);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Number of columns inserted so far.
    pub fn columns(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the basis. Returns the residual (zero iff `v` is in
    /// the span) and the combination of inserted columns that was subtracted.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut v = v.clone();
        let mut used: SparseVec<usize> = BTreeMap::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next().cloned(),
                Some(c) => v
                    .range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded))
                    .next()
                    .map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { break };
            if let Some(pivot) = self.pivots.get(&key) {
                // Pivot vectors have no entries before their pivot, so the
                // subtraction only touches keys at or after `key`.
                let factor = -(&v[&key] / &pivot.vector[&key]);
                axpy(&mut v, &factor, &pivot.vector);
                if self.track {
                    axpy(&mut used, &-&factor, &pivot.combination);
                }
            }
            cursor = Some(key);
        }
        (v, used)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Inserts the next column; returns whether it increased the rank.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (residual, used) = self.reduce(&v);
        let Some(pivot_key) = residual.keys().next().cloned() else {
            return false;
        };
        let mut combination = BTreeMap::new();
        if self.track {
            combination = used.into_iter().map(|(k, c)| (k, -c)).collect();
            combination.insert(index, Rational::one());
        }
        self.pivots.insert(
            pivot_key,
            Pivot {
                vector: residual,
                combination,
            },
        );
        true
    }

    /// Coefficients `c` over inserted columns with `Σ c_i col_i = v`, or the
    /// nonzero residual if `v` is outside the span.
    pub fn express(&self, v: &SparseVec<K>) -> std::result::Result<SparseVec<usize>, SparseVec<K>> {
        assert!(self.track, "express needs combination tracking");
        let (residual, used) = self.reduce(v);
        if residual.is_empty() {
            Ok(used)
        } else {
            Err(residual)
        }
    }
}

/// Solution of `A s = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub solution: Vec<Rational>,
    pub rank: usize,
}

/// Solves `A s = b` exactly by Gauss-Jordan elimination. Free variables are
/// set to zero. An inconsistent system yields [`Error::NoSolution`] carrying
/// `y` with `y A = 0` and `y b != 0`.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> Result<LinearSolution> {
    let rows = a.len();
    if b.len() != rows {
        return Err(Error::Dimension(format!("{rows} rows but {} right-hand sides", b.len())));
    }
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("ragged matrix".into()));
    }
    // [A | b | I]
    let width = cols + 1 + rows;
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let mut r = row.clone();
            r.push(bi.clone());
            r.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let rank = r;
    if let Some(bad) = (rank..rows).find(|&i| !m[i][cols].is_zero()) {
        return Err(Error::NoSolution {
            certificate: m[bad][cols + 1..width].to_vec(),
        });
    }
    let mut solution = vec![Rational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        solution[c] = m[i][cols].clone();
    }
    Ok(LinearSolution { solution, rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    fn mul(a: &[Vec<Rational>], s: &[Rational]) -> Vec<Rational> {
        a.iter()
            .map(|r| r.iter().zip(s).map(|(x, y)| x * y).sum())
            .collect()
    }

    #[test]
    fn identity_system() {
        let a = mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let b = vec![rat(3), ratio(-1, 2), rat(7)];
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.solution, b);
        assert_eq!(s.rank, 3);
    }

    #[test]
    fn underdetermined_system() {
        let a = mat(&[&[1, 1]]);
        let s = solve_linear(&a, &[rat(2)]).unwrap();
        assert_eq!(s.solution.iter().cloned().sum::<Rational>(), rat(2));
        assert_eq!(s.rank, 1);
        // Free variable set to zero.
        assert_eq!(s.solution, vec![rat(2), rat(0)]);
    }

    #[test]
    fn inconsistent_system() {
        let a = mat(&[&[1], &[1]]);
        let b = vec![rat(1), rat(2)];
        let Err(Error::NoSolution { certificate }) = solve_linear(&a, &b) else {
            panic!("expected no solution");
        };
        // y A = 0 and y b != 0
        let ya: Rational = certificate.iter().zip(&a).map(|(y, r)| y * &r[0]).sum();
        let yb: Rational = certificate.iter().zip(&b).map(|(y, v)| y * v).sum();
        assert!(ya.is_zero());
        assert!(!yb.is_zero());
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(solve_linear(&mat(&[&[1]]), &[]), Err(Error::Dimension(_))));
        assert!(matches!(
            solve_linear(&mat(&[&[1, 2], &[1]]), &[rat(1), rat(1)]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn rank_deficient_but_consistent() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let b = vec![rat(6), rat(12), rat(2)];
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.rank, 2);
        assert_eq!(mul(&a, &s.solution), b);
    }

    fn col(entries: &[(usize, i64)]) -> SparseVec<usize> {
        entries.iter().map(|&(k, v)| (k, rat(v))).collect()
    }

    #[test]
    fn echelon_rank_and_expression() {
        let cols = vec![
            col(&[(0, 1), (1, 1)]),
            col(&[(1, 1), (2, 1)]),
            col(&[(0, 1), (2, -1)]), // col0 - col1
            col(&[(2, 1)]),
        ];
        let e = Echelon::from_columns(cols.clone(), true);
        assert_eq!(e.rank(), 3);
        let target = col(&[(0, 2), (1, 5), (2, 4)]);
        let c = e.express(&target).unwrap();
        // The dependent third column is never used.
        assert!(!c.contains_key(&2));
        let mut re: SparseVec<usize> = BTreeMap::new();
        for (i, coeff) in &c {
            axpy(&mut re, coeff, &cols[*i]);
        }
        assert_eq!(re, target);
    }

    #[test]
    fn echelon_residual_outside_span() {
        let e = Echelon::from_columns(vec![col(&[(0, 1), (1, 1)])], true);
        let residual = e.express(&col(&[(0, 1)])).unwrap_err();
        assert!(!residual.is_empty());
        assert!(!e.contains(&col(&[(1, 3)])));
        assert!(e.contains(&col(&[(0, -2), (1, -2)])));
    }
}
