//! Small dense linear algebra over `Q` and `Z`, sized for dimensions ≤ ~10.

use crate::exactmath::Rational;

pub type QMat = Vec<Vec<Rational>>;
pub type ZMat = Vec<Vec<i128>>;

pub fn q_identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn z_identity(n: usize) -> ZMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn to_q(m: &[Vec<i128>]) -> QMat {
    m.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect()
}

pub fn q_transpose(m: &[Vec<Rational>]) -> QMat {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn z_transpose(m: &[Vec<i128>]) -> ZMat {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn q_matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> QMat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Rational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn q_vecmat(v: &[Rational], m: &[Vec<Rational>]) -> Vec<Rational> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    (0..cols)
        .map(|j| {
            let mut s = Rational::zero();
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() && !m[k][j].is_zero() {
                    s += x * &m[k][j];
                }
            }
            s
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn q_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: QMat = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det *= &pv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= &t;
            }
        }
    }
    det
}

/// Rank over `Q`.
pub fn q_rank(m: &[Vec<Rational>]) -> usize {
    q_rref(m).1.len()
}

/// Reduced row echelon form and its pivot columns.
pub fn q_rref(m: &[Vec<Rational>]) -> (QMat, Vec<usize>) {
    let mut a: QMat = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(piv, r);
        let inv = a[r][c].recip();
        for k in c..cols {
            a[r][k] = &a[r][k] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Inverse of a square nonsingular matrix.
pub fn q_inverse(m: &[Vec<Rational>]) -> Option<QMat> {
    let n = m.len();
    let aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (red, piv) = q_rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `x · A = b` for a row vector `x`, where `A` has full row rank.
/// Returns `None` when `b` is not in the row space.
pub fn q_solve_left(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    // x·A = b  ⇔  Aᵀ xᵀ = bᵀ
    let at = q_transpose(a);
    let r = a.len();
    let aug: QMat = at
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut v = row.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let (red, piv) = q_rref(&aug);
    if piv.contains(&r) {
        return None;
    }
    let mut x = vec![Rational::zero(); r];
    for (row, &c) in piv.iter().enumerate() {
        x[c] = red[row][r].clone();
    }
    Some(x)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        // a = q b + r
        let q = a.div_euclid(b);
        (g, y, x - q * y)
    }
}

/// Unimodular row reduction: returns `(H, U)` with `U·A = H`, `U`
/// unimodular and `H` in row echelon form with positive pivots, entries
/// above each pivot reduced into `[0, pivot)`.
pub fn z_hermite(a: &[Vec<i128>]) -> (ZMat, ZMat) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: ZMat = a.to_vec();
    let mut u = z_identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Combine all rows below r into row r by gcd steps.
        for i in r + 1..rows {
            if h[i][c] == 0 {
                continue;
            }
            let (g, x, y) = egcd(h[r][c], h[i][c]);
            let (ar, ai) = (h[r][c] / g, h[i][c] / g);
            for mat in [&mut h, &mut u] {
                let width = mat[0].len();
                for k in 0..width {
                    let top = mat[r][k];
                    let bot = mat[i][k];
                    mat[r][k] = x * top + y * bot;
                    mat[i][k] = -ai * top + ar * bot;
                }
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            for k in 0..cols {
                h[r][k] = -h[r][k];
            }
            for k in 0..rows {
                u[r][k] = -u[r][k];
            }
        }
        let pv = h[r][c];
        for i in 0..r {
            let q = h[i][c].div_euclid(pv);
            if q != 0 {
                for k in 0..cols {
                    h[i][k] -= q * h[r][k];
                }
                for k in 0..rows {
                    u[i][k] -= q * u[r][k];
                }
            }
        }
        r += 1;
    }
    (h, u)
}

/// Basis of the integer left kernel `{x ∈ Z^m : x·A = 0}`.
pub fn z_left_kernel(a: &[Vec<i128>]) -> ZMat {
    let (h, u) = z_hermite(a);
    h.iter()
        .zip(u)
        .filter(|(row, _)| row.iter().all(|&x| x == 0))
        .map(|(_, urow)| urow)
        .collect()
}

/// Basis of `Z^n ∩ span(rows)`: the saturation of the row lattice.
pub fn z_saturation(rows: &[Vec<i128>], n: usize) -> ZMat {
    if rows.is_empty() {
        return vec![];
    }
    // Right kernel of the generators, then its integer orthogonal complement.
    let kernel = z_left_kernel(&z_transpose(rows));
    if kernel.is_empty() {
        return z_identity(n);
    }
    z_left_kernel(&z_transpose(&kernel))
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Divide an integer vector by the gcd of its entries.
pub fn primitive(v: &[i128]) -> Vec<i128> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Scale a rational vector to the primitive integer vector on its ray.
pub fn primitive_from_rational(v: &[Rational]) -> Vec<i128> {
    let mut l: i128 = 1;
    for x in v {
        let d = x.denom().try_into().unwrap_or_else(|_| panic!("denominator overflow"));
        l = l / gcd(l, d) * d;
    }
    let ints: Vec<i128> = v
        .iter()
        .map(|x| (x * &Rational::from(l)).to_i128().expect("integral after scaling"))
        .collect();
    primitive(&ints)
}

/// Integer determinant via Bareiss elimination.
pub fn z_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// All `k`-element subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all maximal (`r×r`) minors of an `r×n` integer matrix; for
/// linearly independent rows this is the index of their span inside the
/// saturated lattice.
pub fn z_maximal_minor_gcd(rows: &[Vec<i128>]) -> i128 {
    let r = rows.len();
    if r == 0 {
        return 1;
    }
    let n = rows[0].len();
    combinations(n, r).into_iter().fold(0, |g, cols| {
        let sub: ZMat = rows.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
        gcd(g, z_det(&sub))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[&[i64]]) -> QMat {
        v.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect()
    }

    #[test]
    fn det_and_inverse() {
        let m = q(&[&[2, 1], &[1, 1]]);
        assert_eq!(q_det(&m), Rational::one());
        let inv = q_inverse(&m).unwrap();
        assert_eq!(q_matmul(&m, &inv), q_identity(2));
        assert!(q_inverse(&q(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn integer_det_matches_rational() {
        let m: ZMat = vec![vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]];
        assert_eq!(Rational::from(z_det(&m)), q_det(&to_q(&m)));
    }

    #[test]
    fn hermite_is_unimodular() {
        let a: ZMat = vec![vec![4, 6, 2], vec![2, 2, 8], vec![6, 9, 1]];
        let (h, u) = z_hermite(&a);
        assert_eq!(z_det(&u).abs(), 1);
        let prod: ZMat = u
            .iter()
            .map(|r| (0..3).map(|j| (0..3).map(|k| r[k] * a[k][j]).sum()).collect())
            .collect();
        assert_eq!(prod, h);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(h[i][j], 0);
            }
        }
    }

    #[test]
    fn saturation_of_doubled_vector() {
        let sat = z_saturation(&[vec![2, 2, 0]], 3);
        assert_eq!(sat.len(), 1);
        assert_eq!(primitive(&sat[0]).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1, 0]);
        assert_eq!(z_maximal_minor_gcd(&[vec![0, 1], vec![2, -1]]), 2);
        assert_eq!(z_maximal_minor_gcd(&[vec![2, 2, 0]]), 2);
    }

    #[test]
    fn solve_left() {
        let a = q(&[&[1, 0, 1], &[0, 1, 1]]);
        let x = q_solve_left(&a, &[Rational::from(2), Rational::from(3), Rational::from(5)]).unwrap();
        assert_eq!(x, vec![Rational::from(2), Rational::from(3)]);
        assert!(q_solve_left(&a, &[Rational::from(1), Rational::from(1), Rational::from(0)]).is_none());
    }
}
