//! Small exact integer linear algebra for full-rank lattices in `Z^n`.
//!
//! Matrices are row-major `Vec<Vec<i128>>`. Lattice bases are stored as the
//! columns of a lower-triangular matrix in Hermite normal form: positive
//! diagonal and `0 <= b[i][j] < b[i][i]` below it.

pub type Mat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Mat {
    let mut m = vec![vec![0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn scalar(n: usize, c: i128) -> Mat {
    let mut m = identity(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c;
    }
    m
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &Mat, v: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn columns(a: &Mat) -> Vec<Vec<i128>> {
    transpose(a)
}

pub fn from_columns(cols: &[Vec<i128>]) -> Mat {
    transpose(&cols.to_vec())
}

/// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `x*a + y*b = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Column echelon form restricted to the given rows. Returns the number of
/// pivot columns; every column from that index on is zero in those rows.
pub fn column_echelon(cols: &mut [Vec<i128>], rows: std::ops::Range<usize>) -> usize {
    let mut piv = 0;
    for r in rows {
        if piv == cols.len() {
            break;
        }
        for j in piv + 1..cols.len() {
            if cols[j][r] == 0 {
                continue;
            }
            let a = cols[piv][r];
            let b = cols[j][r];
            let (g, x, y) = ext_gcd(a, b);
            let (pa, pb) = (a / g, b / g);
            for t in 0..cols[j].len() {
                let u = cols[piv][t];
                let v = cols[j][t];
                cols[piv][t] = x * u + y * v;
                cols[j][t] = pa * v - pb * u;
            }
        }
        if cols[piv][r] != 0 {
            if cols[piv][r] < 0 {
                for x in cols[piv].iter_mut() {
                    *x = -*x;
                }
            }
            piv += 1;
        }
    }
    piv
}

fn reduce_below_diagonal(cols: &mut [Vec<i128>]) {
    let n = cols.len();
    for j in 0..n {
        for i in j + 1..n {
            let q = cols[j][i].div_euclid(cols[i][i]);
            if q != 0 {
                for t in i..n {
                    let d = q * cols[i][t];
                    cols[j][t] -= d;
                }
            }
        }
    }
}

/// HNF of the lattice generated by `gens` together with `modulus * Z^n`.
pub fn hnf_mod(n: usize, gens: &[Vec<i128>], modulus: i128) -> Mat {
    assert!(modulus > 0, "lattice modulus must be positive");
    let mut basis: Vec<Vec<i128>> = columns(&scalar(n, modulus));
    for g in gens {
        let v: Vec<i128> = g.iter().map(|x| x.rem_euclid(modulus)).collect();
        if v.iter().all(|&x| x == 0) || contains_cols(&basis, &v) {
            continue;
        }
        let mut cols = basis.clone();
        cols.push(v);
        let rank = column_echelon(&mut cols, 0..n);
        debug_assert_eq!(rank, n);
        cols.truncate(n);
        reduce_below_diagonal(&mut cols);
        basis = cols;
    }
    from_columns(&basis)
}

fn contains_cols(cols: &[Vec<i128>], v: &[i128]) -> bool {
    let mut w = v.to_vec();
    for (i, c) in cols.iter().enumerate() {
        if w[i] % c[i] != 0 {
            return false;
        }
        let q = w[i] / c[i];
        for t in i..w.len() {
            w[t] -= q * c[t];
        }
    }
    true
}

/// Solves `b * x = v` for lower-triangular `b`, returning `None` unless the
/// solution is integral.
pub fn solve_lower(b: &Mat, v: &[i128]) -> Option<Vec<i128>> {
    let n = b.len();
    let mut x = vec![0i128; n];
    for i in 0..n {
        let mut r = v[i];
        for (k, xk) in x.iter().enumerate().take(i) {
            r -= b[i][k] * xk;
        }
        if b[i][i] == 0 || r % b[i][i] != 0 {
            return None;
        }
        x[i] = r / b[i][i];
    }
    Some(x)
}

/// Solves `b * X = a` column by column for lower-triangular `b`.
pub fn solve_lower_mat(b: &Mat, a: &Mat) -> Option<Mat> {
    let cols: Option<Vec<Vec<i128>>> = columns(a).iter().map(|c| solve_lower(b, c)).collect();
    cols.map(|c| from_columns(&c))
}

pub fn contains(b: &Mat, v: &[i128]) -> bool {
    solve_lower(b, v).is_some()
}

/// The representative of `v + L` inside the box `0 <= w_i < b[i][i]`.
pub fn reduce(b: &Mat, v: &[i128]) -> Vec<i128> {
    let n = b.len();
    let mut w = v.to_vec();
    for i in 0..n {
        let q = w[i].div_euclid(b[i][i]);
        if q != 0 {
            for t in i..n {
                w[t] -= q * b[t][i];
            }
        }
    }
    w
}

pub fn det_lower(b: &Mat) -> i128 {
    (0..b.len()).map(|i| b[i][i]).product()
}

/// Determinant by fraction-free elimination.
pub fn det(a: &Mat) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m = a.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// `det(b) * b^{-1}` for lower-triangular `b`.
pub fn adjugate_lower(b: &Mat) -> Mat {
    let n = b.len();
    let d = det_lower(b);
    let cols: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = d;
            solve_lower(b, &e).expect("adjugate of a triangular integer matrix is integral")
        })
        .collect();
    from_columns(&cols)
}

/// HNF basis of `{c in Z^n : m c = 0 mod modulus}`.
pub fn kernel_mod(m: &Mat, modulus: i128) -> Mat {
    let n = m.len();
    let mut cols: Vec<Vec<i128>> = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut c: Vec<i128> = (0..n).map(|i| m[i][j].rem_euclid(modulus)).collect();
        c.extend((0..n).map(|i| i128::from(i == j)));
        cols.push(c);
    }
    for j in 0..n {
        let mut c = vec![0i128; 2 * n];
        c[j] = modulus;
        cols.push(c);
    }
    let piv = column_echelon(&mut cols, 0..n);
    let gens: Vec<Vec<i128>> = cols[piv..].iter().map(|c| c[n..].to_vec()).collect();
    hnf_mod(n, &gens, modulus)
}

/// HNF of `modulus * (b^T)^{-1} Z^n`, the lattice dual to `b` relative to the
/// pairing into `Z / modulus`. Requires `modulus * Z^n ⊆ b Z^n`.
pub fn dual(b: &Mat, modulus: i128) -> Option<Mat> {
    let n = b.len();
    let bt = transpose(b);
    let mut gens = Vec::with_capacity(n);
    for j in 0..n {
        // Back substitution on the upper-triangular transpose.
        let mut x = vec![0i128; n];
        for i in (0..n).rev() {
            let mut r = if i == j { modulus } else { 0 };
            for k in i + 1..n {
                r -= bt[i][k] * x[k];
            }
            if r % bt[i][i] != 0 {
                return None;
            }
            x[i] = r / bt[i][i];
        }
        gens.push(x);
    }
    Some(hnf_mod(n, &gens, modulus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_signs() {
        for (a, b) in [(12, 18), (-4, 6), (0, -5), (7, 0), (0, 0)] {
            let (g, x, y) = ext_gcd(a, b);
            assert!(g >= 0);
            assert_eq!(x * a + y * b, g);
        }
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hnf_mod(2, &[vec![1, 1]], 2);
        assert_eq!(a, vec![vec![1, 0], vec![1, 2]]);
        let b = hnf_mod(2, &[vec![3, 3], vec![1, 1]], 2);
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_of_swap_times_two() {
        // [[0,2],[1,0]] c = 0 mod 2 forces c_0 even.
        let k = kernel_mod(&vec![vec![0, 2], vec![1, 0]], 2);
        assert_eq!(k, vec![vec![2, 0], vec![0, 1]]);
    }

    #[test]
    fn dual_is_an_involution() {
        let b = hnf_mod(2, &[vec![1, 3]], 4);
        let d = dual(&b, 4).unwrap();
        assert_eq!(dual(&d, 4).unwrap(), b);
    }

    #[test]
    fn bareiss_det() {
        assert_eq!(det(&vec![vec![0, 2], vec![1, 0]]), -2);
        assert_eq!(det(&vec![vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]), 18);
    }
}
