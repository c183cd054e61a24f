//! Row-echelon linear algebra over a [`FiniteField`].

use super::field::{FiniteField, FqElem};

/// Reduced row echelon form in place, zero rows dropped; returns pivots.
pub fn rref(f: &FiniteField, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(FqElem(rows[r][c])).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(FqElem(*x), inv).0;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = FqElem(row[c]);
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(FqElem(*x), f.mul(factor, FqElem(y))).0;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &FiniteField, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Reduce `v` modulo an rref basis.
pub fn reduce(f: &FiniteField, v: &mut [u32], basis: &[Vec<u32>], pivots: &[usize]) {
    for (row, &c) in basis.iter().zip(pivots) {
        let factor = FqElem(v[c]);
        if factor.0 != 0 {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.sub(FqElem(*x), f.mul(factor, FqElem(y))).0;
            }
        }
    }
}

/// Row vector times matrix.
pub fn vec_mat(f: &FiniteField, v: &[u32], m: &[Vec<u32>]) -> Vec<u32> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = vec![0u32; ncols];
    for (&a, row) in v.iter().zip(m) {
        if a == 0 {
            continue;
        }
        for (o, &b) in out.iter_mut().zip(row) {
            *o = f.add(FqElem(*o), f.mul(FqElem(a), FqElem(b))).0;
        }
    }
    out
}

pub fn mat_mul(f: &FiniteField, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    a.iter().map(|r| vec_mat(f, r, b)).collect()
}

pub fn scale(f: &FiniteField, s: FqElem, v: &[u32]) -> Vec<u32> {
    v.iter().map(|&x| f.mul(s, FqElem(x)).0).collect()
}

/// All vectors of `F^n` in the canonical order.
pub fn all_vectors(q: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as u64).pow(n as u32);
    (0..total).map(move |mut i| {
        (0..n)
            .map(|_| {
                let c = (i % q as u64) as u32;
                i /= q as u64;
                c
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_over_f4_collapses_scalar_multiples() {
        let f = FiniteField::quadratic(2).unwrap();
        let w = f.generator();
        let v = vec![1, w.0, 0];
        let wv = scale(&f, w, &v);
        let mut rows = vec![wv, v.clone()];
        let piv = rref(&f, &mut rows);
        assert_eq!(piv, vec![0]);
        assert_eq!(rows, vec![v]);
    }
}
