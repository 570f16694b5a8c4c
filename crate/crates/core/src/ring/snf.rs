use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(BigInt::from(f(i, j)));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a `rows.len() × cols` matrix; every row must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().map(|&v| v.into()));
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `left · M · right = diag(diagonal)` with `d_1 | d_2 | …`, zeros last.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithNormalForm {
    /// Number of nonzero elementary divisors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by alternating row/column elimination with smallest
/// pivots. Total: the empty matrix yields an empty diagonal.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let steps = rows.min(cols);
    let mut diagonal = Vec::with_capacity(steps);

    'outer: for t in 0..steps {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&a, t) else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row(i, t, &q);
                left.add_row(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col(j, t, &q);
                right.add_col(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // The pivot must divide the whole trailing block.
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    left.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        diagonal.push(a[(t, t)].clone());
    }
    diagonal.resize(steps, BigInt::zero());

    SmithNormalForm { diagonal, left, right }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag_of(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m).diagonal.iter().map(|d| d.try_into().unwrap()).collect()
    }

    fn check(m: &IntMatrix) {
        let s = smith_normal_form(m);
        let prod = &(&s.left * m) * &s.right;
        assert!(prod.is_diagonal(), "{prod:?}");
        for (i, d) in s.diagonal.iter().enumerate() {
            assert_eq!(&prod[(i, i)], d);
            assert!(!d.is_negative());
        }
        for w in s.diagonal.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zeros must come last");
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken");
            }
        }
        assert_eq!(determinant(&s.left).abs(), BigInt::one());
        assert_eq!(determinant(&s.right).abs(), BigInt::one());

        // d_1 ⋯ d_k equals the gcd of all k×k minors.
        let mut running = BigInt::one();
        for k in 1..=m.rows().min(m.cols()) {
            running *= &s.diagonal[k - 1];
            assert_eq!(running, minor_gcd(m, k), "k = {k}");
        }
    }

    fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
        use itertools::Itertools;
        let mut g = BigInt::zero();
        for rs in (0..m.rows()).combinations(k) {
            for cs in (0..m.cols()).combinations(k) {
                let sub = IntMatrix::from_fn(k, k, |i, j| (&m[(rs[i], cs[j])]).try_into().unwrap());
                g = g.gcd(&determinant(&sub));
            }
        }
        g
    }

    #[test]
    fn small_examples() {
        assert_eq!(diag_of(&IntMatrix::identity(2)), vec![1, 1]);
        assert_eq!(diag_of(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2)), vec![1, 6]);
        assert_eq!(diag_of(&IntMatrix::from_rows(&[vec![2, 4], vec![4, 8]], 2)), vec![2, 0]);
        assert_eq!(diag_of(&IntMatrix::zeros(2, 3)), vec![0, 0]);
        let empty = IntMatrix::zeros(0, 4);
        let s = smith_normal_form(&empty);
        assert!(s.diagonal.is_empty());
        assert_eq!(s.right, IntMatrix::identity(4));
    }

    #[test]
    fn determinant_known_values() {
        let m = IntMatrix::from_rows(&[vec![2, -3, 1], vec![2, 0, -1], vec![1, 4, 5]], 3);
        assert_eq!(determinant(&m), BigInt::from(49));
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]], 2);
        assert_eq!(determinant(&singular), BigInt::zero());
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2);
        assert_eq!(determinant(&swap), BigInt::from(-1));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        fn cofactor(m: &[Vec<i64>]) -> i64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * cofactor(&minor)
                })
                .sum()
        }
        let mut seed = 7u64;
        for n in 1..=4 {
            for _ in 0..20 {
                let rows: Vec<Vec<i64>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                                ((seed >> 33) % 11) as i64 - 5
                            })
                            .collect()
                    })
                    .collect();
                let m = IntMatrix::from_rows(&rows, n);
                assert_eq!(determinant(&m), BigInt::from(cofactor(&rows)));
            }
        }
    }

    proptest! {
        #[test]
        fn snf_reconstructs(rows in 0usize..5, cols in 0usize..6, entries in prop::collection::vec(-12i64..12, 30)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j]);
            check(&m);
        }

        #[test]
        fn snf_of_structured_matrices(rows in 1usize..6, cols in 1usize..7, entries in prop::collection::vec(prop::sample::select(vec![0i64, 0, 2, 4, 6, -6, 12]), 42)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j]);
            check(&m);
        }
    }
}
