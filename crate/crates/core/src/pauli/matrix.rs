use rayon::prelude::*;

use super::bitvec::BitVec;
use crate::error::{Error, Result};

/// Dense GF(2) matrix stored as packed rows.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BinaryMatrix {
    rows: Vec<BitVec>,
    n_cols: usize,
}

/// Result of row reduction.
///
/// `reduced` holds the `rank` nonzero rows of the reduced row-echelon form.
/// When requested, `transform` has one row per input row: row `i < rank`
/// expresses reduced row `i` over the original rows, rows `i >= rank` are
/// the dependencies (combinations summing to zero).
#[derive(Clone, Debug)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: BinaryMatrix,
    pub transform: Option<BinaryMatrix>,
}

const PAR_THRESHOLD: usize = 1 << 16;

impl BinaryMatrix {
    pub fn new(n_cols: usize) -> Self {
        BinaryMatrix { rows: Vec::new(), n_cols }
    }

    pub fn from_rows(rows: Vec<BitVec>, n_cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::LengthMismatch(r.len(), n_cols));
        }
        Ok(BinaryMatrix { rows, n_cols })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| BitVec::from_ones(n, [i])).collect();
        BinaryMatrix { rows, n_cols: n }
    }

    pub fn push(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.n_cols);
        self.rows.push(row);
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t: Vec<BitVec> = (0..self.n_cols).map(|_| BitVec::zeros(self.rows.len())).collect();
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t[c].set(r, true);
            }
        }
        BinaryMatrix { rows: t, n_cols: self.rows.len() }
    }

    /// `v * M` for a row selector `v` of length `n_rows`.
    pub fn combine(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.n_cols);
        for i in v.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rref(false).rank
    }

    /// Gauss-Jordan elimination over GF(2). Pivot columns are taken left to
    /// right and the lowest-index candidate row becomes the pivot row.
    pub fn rref(&self, with_transform: bool) -> Rref {
        let m = self.rows.len();
        let mut rows = self.rows.clone();
        let mut tr: Option<Vec<BitVec>> =
            with_transform.then(|| (0..m).map(|i| BitVec::from_ones(m, [i])).collect());
        let mut pivots = Vec::new();
        let mut rank = 0;
        let words = super::bitvec::word_count(self.n_cols);
        for col in 0..self.n_cols {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            if let Some(t) = tr.as_mut() {
                t.swap(rank, p);
            }
            let pivot = rows[rank].clone();
            let pivot_t = tr.as_ref().map(|t| t[rank].clone());
            let start = col >> 6;
            let eliminate = |(i, row): (usize, &mut BitVec)| -> bool {
                if i != rank && row.get(col) {
                    row.xor_from(&pivot, start);
                    true
                } else {
                    false
                }
            };
            let hit: Vec<bool> = if m * (words - start) > PAR_THRESHOLD {
                rows.par_iter_mut().enumerate().map(eliminate).collect()
            } else {
                rows.iter_mut().enumerate().map(eliminate).collect()
            };
            if let (Some(t), Some(pt)) = (tr.as_mut(), pivot_t.as_ref()) {
                for (i, h) in hit.iter().enumerate() {
                    if *h {
                        t[i].xor_assign(pt);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Rref {
            rank,
            pivots,
            reduced: BinaryMatrix { rows, n_cols: self.n_cols },
            transform: tr.map(|t| BinaryMatrix { rows: t, n_cols: m }),
        }
    }

    /// Basis of `{v : M v = 0}`.
    pub fn null_space(&self) -> Vec<BitVec> {
        let rr = self.rref(false);
        null_space_from_rref(&rr, self.n_cols)
    }
}

pub(crate) fn null_space_from_rref(rr: &Rref, n_cols: usize) -> Vec<BitVec> {
    let mut is_pivot = vec![false; n_cols];
    for &p in &rr.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n_cols).filter(|&c| !is_pivot[c]).collect();
    free.par_iter()
        .map(|&f| {
            let mut v = BitVec::zeros(n_cols);
            v.set(f, true);
            for (i, &p) in rr.pivots.iter().enumerate() {
                if rr.reduced.rows[i].get(f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

impl Rref {
    /// Reduce `v` against the reduced rows; returns the residual and the
    /// combination of reduced rows that was subtracted.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut r = v.clone();
        let mut used = BitVec::zeros(self.rank);
        for (i, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_from(self.reduced.row(i), p >> 6);
                used.set(i, true);
            }
        }
        (r, used)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Express `v` over the original rows, if it lies in the row space.
    /// Requires the transform record.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let t = self.transform.as_ref().expect("rref computed without transform");
        let (res, used) = self.reduce(v);
        if !res.is_zero() {
            return None;
        }
        let mut out = BitVec::zeros(t.n_cols());
        for i in used.iter_ones() {
            out.xor_assign(t.row(i));
        }
        Some(out)
    }

    /// Combinations of original rows that sum to zero.
    pub fn dependencies(&self) -> &[BitVec] {
        let t = self.transform.as_ref().expect("rref computed without transform");
        &t.rows()[self.rank..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        let n = rows[0].len();
        let rows = rows
            .iter()
            .map(|r| BitVec::from_bools(&r.chars().map(|c| c == '1').collect::<Vec<_>>()))
            .collect();
        BinaryMatrix::from_rows(rows, n).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(BinaryMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn equal_rows_rank_one() {
        assert_eq!(mat(&["101", "101"]).rank(), 1);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = mat(&["1101", "0111", "1010", "0001"]);
        let r1 = m.rref(false);
        let r2 = r1.reduced.rref(false);
        assert_eq!(r1.reduced, r2.reduced);
        assert_eq!(r1.pivots, r2.pivots);
    }

    #[test]
    fn transform_expresses_rows() {
        let m = mat(&["1100", "0110", "1010", "0001"]);
        let r = m.rref(true);
        assert_eq!(r.rank, 3);
        let t = r.transform.as_ref().unwrap();
        for i in 0..r.rank {
            assert_eq!(&m.combine(t.row(i)), r.reduced.row(i));
        }
        assert_eq!(r.dependencies().len(), 1);
        assert!(m.combine(&r.dependencies()[0]).is_zero());
        let target = BitVec::from_bools(&[true, false, true, true]);
        let c = r.express(&target).unwrap();
        assert_eq!(m.combine(&c), target);
    }

    #[test]
    fn null_space_is_orthogonal() {
        let m = mat(&["11010", "01101", "10011"]);
        let ns = m.null_space();
        assert_eq!(ns.len(), 5 - m.rank());
        for v in &ns {
            for r in m.rows() {
                assert!(!r.dot(v));
            }
        }
    }
}
