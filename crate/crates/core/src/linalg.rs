//! Exact linear algebra: rational matrices, integer normal forms, and
//! reduced echelon forms over prime fields.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det = &det * &a[col][col];
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    det
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![Q::zero(); cols];
    for (c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o = &*o + c * x;
        }
    }
    out
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    num::Integer::lcm(a, b)
}

/// Hermite normal form (row style, upper triangular, positive pivots,
/// entries above each pivot reduced) of an integer matrix. Zero rows are
/// dropped.
pub fn hnf(mut m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        loop {
            let piv = (row..m.len())
                .filter(|&r| !m[r][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(piv) = piv else { break };
            m.swap(row, piv);
            let mut done = true;
            for r in row + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let qt = num::Integer::div_floor(&m[r][col], &m[row][col]);
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &qt * y;
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if row < m.len() && !m[row][col].is_zero() {
            if m[row][col].is_negative() {
                for x in m[row].iter_mut() {
                    *x = -&*x;
                }
            }
            for r in 0..row {
                let qt = num::Integer::div_floor(&m[r][col], &m[row][col]);
                if !qt.is_zero() {
                    let pivot_row = m[row].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                        *x = &*x - &qt * y;
                    }
                }
            }
            row += 1;
        }
    }
    m.truncate(row);
    m
}

/// Z-basis (in Hermite form) of the lattice spanned by rational row vectors.
pub fn lattice_basis(gens: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut den = BigInt::one();
    for g in gens {
        for x in g {
            den = lcm(&den, x.denom());
        }
    }
    let ints: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|x| (x * &den).to_integer()).collect())
        .collect();
    let dq = Q::from_integer(den);
    hnf(ints)
        .into_iter()
        .map(|r| r.into_iter().map(|x| Q::from_integer(x) / &dq).collect())
        .collect()
}

/// Elementary divisors (diagonal of the Smith form) of an integer matrix,
/// including zeros for rank deficiency on the shorter side.
pub fn elementary_divisors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                out.push(BigInt::zero());
                break;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let qt = num::Integer::div_floor(&a[i][t], &a[t][t]);
                if !qt.is_zero() {
                    let pr = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(pr.iter()) {
                        *x = &*x - &qt * y;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let qt = num::Integer::div_floor(&a[t][j], &a[t][t]);
                if !qt.is_zero() {
                    for row in a.iter_mut() {
                        let v = &row[t] * &qt;
                        row[j] = &row[j] - v;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // divisibility: fold any entry not divisible by the pivot back in
                let piv = a[t][t].clone();
                let bad = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !(&a[i][j] % &piv).is_zero())
                });
                if let Some(i) = bad {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(ri.iter()) {
                        *x = &*x + y;
                    }
                    continue;
                }
                out.push(piv.abs());
                break;
            }
        }
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u32) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    while (&y % &pb).is_zero() {
        y /= &pb;
        v += 1;
    }
    v
}

/// Valuations of the elementary divisors of an integer matrix read modulo
/// `p^k`. A divisor that vanishes modulo `p^k` is reported as `None`.
pub fn elementary_valuations_mod(m: &[Vec<i64>], p: u32, k: u32) -> Vec<Option<u32>> {
    let modulus = (p as i64).pow(k);
    let norm = |x: i64| x.rem_euclid(modulus);
    let val = |x: i64| {
        let mut x = norm(x);
        if x == 0 {
            return k;
        }
        let mut v = 0;
        while x % p as i64 == 0 {
            x /= p as i64;
            v += 1;
        }
        v
    };
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| norm(x)).collect()).collect();
    let n = a.len().min(a.first().map_or(0, |r| r.len()));
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 0..n {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = val(a[i][j]);
                if v < k && best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, v)) = best else {
            out.extend(std::iter::repeat(None).take(n - t));
            break;
        };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        // pivot = p^v * u with u a unit mod p^k
        let pv = (p as i64).pow(v);
        let unit = a[t][t] / pv;
        let uinv = mod_inverse(unit, modulus).expect("unit part is invertible");
        for i in t + 1..rows {
            if a[i][t] != 0 {
                let f = norm((a[i][t] / pv) * uinv);
                for j in t..cols {
                    a[i][j] = norm(a[i][j] - f * a[t][j]);
                }
            }
        }
        for j in t + 1..cols {
            if a[t][j] != 0 {
                let f = norm((a[t][j] / pv) * uinv);
                for i in t..rows {
                    a[i][j] = norm(a[i][j] - f * a[i][t]);
                }
            }
        }
        out.push(Some(v));
    }
    out
}

pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m, a.rem_euclid(m));
    while new_r != 0 {
        let qt = r / new_r;
        (t, new_t) = (new_t, t - qt * new_t);
        (r, new_r) = (new_r, r - qt * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m))
}

/// Reduced row echelon form over F_p in place; returns the pivot columns.
/// Zero rows are removed.
pub fn rref_mod(rows: &mut Vec<Vec<u32>>, p: u32) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod_p(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = (*x * inv) % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn inv_mod_p(a: u32, p: u32) -> u32 {
    mod_inverse(a as i64, p as i64).expect("nonzero element of a prime field") as u32
}

/// Reduce `v` modulo the row space of an rref basis with the given pivots.
pub fn reduce_mod_rows(v: &mut [u32], basis: &[Vec<u32>], pivots: &[usize], p: u32) {
    for (row, &c) in basis.iter().zip(pivots) {
        let f = v[c] % p;
        if f != 0 {
            for (x, y) in v.iter_mut().zip(row) {
                *x = (*x + (p - f) * y) % p;
            }
        }
    }
}

/// Basis of `{x : A x = 0}` over F_p, with `A` given by its rows.
pub fn nullspace_mod(equations: &[Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut a: Vec<Vec<u32>> = equations.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let pivots = if a.is_empty() { Vec::new() } else { rref_mod(&mut a, p) };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u32; ncols];
            v[f] = 1;
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = (p - row[f] % p) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn smith_form_small() {
        let d = elementary_divisors(&bi(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        let d: Vec<i64> = d.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn hnf_spans_same_lattice() {
        let h = hnf(bi(&[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(h, bi(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(vec_mat(&[q(1), q(0)], &inv), vec![q(1), q(-1)]);
        assert_eq!(determinant(&m), q(1));
    }

    #[test]
    fn valuations_mod_prime_power() {
        let v = elementary_valuations_mod(&[vec![4, 0], vec![0, 3]], 2, 4);
        assert_eq!(v, vec![Some(0), Some(2)]);
        let v = elementary_valuations_mod(&[vec![16, 0], vec![0, 1]], 2, 4);
        assert_eq!(v, vec![Some(0), None]);
    }

    #[test]
    fn rref_removes_dependent_rows() {
        let mut rows = vec![vec![1, 1, 0], vec![2, 2, 0], vec![0, 1, 1]];
        let piv = rref_mod(&mut rows, 3);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(rows, vec![vec![1, 0, 2], vec![0, 1, 1]]);
    }
}
