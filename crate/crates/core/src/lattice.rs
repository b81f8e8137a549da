//! Dense integer matrices and their Smith normal form.
//!
//! Generic over the integer scalar. The crate root exposes aliases for the
//! arbitrary-precision instantiation used by the certifier and a machine
//! integer one for quick experiments.

use std::fmt::Debug;

use num_integer::Integer;
use num_traits::Signed;

/// Integer scalars the lattice code can run on.
pub trait LatticeScalar: Integer + Signed + Clone + Debug + From<i32> {}

impl<T: Integer + Signed + Clone + Debug + From<i32>> LatticeScalar for T {}

/// A dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix<T> {
    rows: Vec<Vec<T>>,
    ncols: usize,
}

impl<T: LatticeScalar> IntegerMatrix<T> {
    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<T>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        IntegerMatrix { rows, ncols }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], ncols: usize) -> Self
    where
        T: From<i64>,
    {
        IntegerMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from(x)).collect())
                .collect(),
            ncols,
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.rows[r][c]
    }

    pub fn rank(&self) -> usize {
        self.smith_form().rank()
    }

    pub fn smith_form(&self) -> SmithForm<T> {
        smith_form(self)
    }
}

/// Elementary divisors of a matrix plus the inverse right transform.
///
/// If `U A V = D` then the row lattice of `A` is spanned by
/// `d_k * row_k(V^-1)`. A divisor `d_k > 1` therefore makes `row_k(V^-1)` a
/// vector of the saturated lattice that is missing from the row lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub divisors: Vec<T>,
    pub right_inverse: Vec<Vec<T>>,
}

impl<T: LatticeScalar> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// True iff every elementary divisor is one.
    pub fn is_torsion_free(&self) -> bool {
        self.divisors.iter().all(|d| d.is_one())
    }

    /// The first divisor above one with its saturation witness vector.
    pub fn torsion_witness(&self) -> Option<(T, Vec<T>)> {
        self.divisors
            .iter()
            .position(|d| !d.is_one())
            .map(|k| (self.divisors[k].clone(), self.right_inverse[k].clone()))
    }
}

/// Smith normal form by exact elimination, pivoting on the entry of least
/// absolute value.
#[allow(clippy::needless_range_loop)]
pub fn smith_form<T: LatticeScalar>(m: &IntegerMatrix<T>) -> SmithForm<T> {
    let mut a: Vec<Vec<T>> = m.rows.clone();
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut vinv: Vec<Vec<T>> = (0..nc)
        .map(|r| {
            (0..nc)
                .map(|c| if r == c { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    let mut divisors = Vec::new();

    for k in 0..nr.min(nc) {
        loop {
            let Some((pr, pc)) = min_abs_entry(&a, k) else {
                return SmithForm {
                    divisors,
                    right_inverse: vinv,
                };
            };
            a.swap(k, pr);
            if pc != k {
                for row in a.iter_mut() {
                    row.swap(k, pc);
                }
                vinv.swap(k, pc);
            }
            if a[k][k].is_negative() {
                for x in a[k].iter_mut() {
                    *x = -x.clone();
                }
            }
            let p = a[k][k].clone();
            let mut clean = true;
            for r in k + 1..nr {
                let q = a[r][k].div_floor(&p);
                if !q.is_zero() {
                    for c in k..nc {
                        let v = a[k][c].clone() * q.clone();
                        a[r][c] = a[r][c].clone() - v;
                    }
                }
                clean &= a[r][k].is_zero();
            }
            for c in k + 1..nc {
                let q = a[k][c].div_floor(&p);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let v = row[k].clone() * q.clone();
                        row[c] = row[c].clone() - v;
                    }
                    // col_c -= q col_k  =>  row_k(V^-1) += q row_c(V^-1)
                    for x in 0..nc {
                        let v = vinv[c][x].clone() * q.clone();
                        vinv[k][x] = vinv[k][x].clone() + v;
                    }
                }
                clean &= a[k][c].is_zero();
            }
            if !clean {
                continue;
            }
            // Enforce d_k | d_{k+1}: fold an offending row into row k and retry.
            let offender = (k + 1..nr).find(|&r| (k + 1..nc).any(|c| !a[r][c].is_multiple_of(&p)));
            match offender {
                Some(r) => {
                    for c in k..nc {
                        let v = a[r][c].clone();
                        a[k][c] = a[k][c].clone() + v;
                    }
                }
                None => {
                    divisors.push(p);
                    break;
                }
            }
        }
    }
    SmithForm {
        divisors,
        right_inverse: vinv,
    }
}

fn min_abs_entry<T: LatticeScalar>(a: &[Vec<T>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for (r, row) in a.iter().enumerate().skip(k) {
        for (c, x) in row.iter().enumerate().skip(k) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((r, c, ax));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn det(m: &[Vec<i64>]) -> i64 {
        // Laplace expansion; only used on tiny minors.
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(x, _)| x != c)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum()
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    /// Determinantal divisors: gcd of all k x k minors.
    fn determinantal_divisor(m: &[Vec<i64>], ncols: usize, k: usize) -> i64 {
        let mut g = 0i64;
        for rs in subsets(m.len(), k) {
            for cs in subsets(ncols, k) {
                let minor: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c]).collect())
                    .collect();
                g = g.gcd(&det(&minor));
            }
        }
        g
    }

    #[test]
    fn small_examples() {
        let m: IntegerMatrix<BigInt> = IntegerMatrix::from_i64_rows(&[vec![1, 1, -1, -1]], 4);
        assert!(m.smith_form().is_torsion_free());
        let m: IntegerMatrix<BigInt> = IntegerMatrix::from_i64_rows(&[vec![2, -2]], 2);
        let snf = m.smith_form();
        assert_eq!(snf.divisors, vec![BigInt::from(2)]);
        let (d, v) = snf.torsion_witness().unwrap();
        assert_eq!(d, BigInt::from(2));
        // 2 * v must be in the row lattice, i.e. +-(2, -2).
        let doubled: Vec<BigInt> = v.iter().map(|x| x * 2).collect();
        assert!(
            doubled == vec![BigInt::from(2), BigInt::from(-2)]
                || doubled == vec![BigInt::from(-2), BigInt::from(2)]
        );
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m: IntegerMatrix<i64> = IntegerMatrix::from_rows(vec![vec![0, 0], vec![0, 0]], 2);
        assert_eq!(m.rank(), 0);
        assert!(m.smith_form().is_torsion_free());
    }

    fn small_matrix() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
        (1usize..4, 1usize..5).prop_flat_map(|(r, c)| {
            (
                proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r),
                Just(c),
            )
        })
    }

    proptest! {
        #[test]
        fn divisors_match_determinantal_divisors((rows, ncols) in small_matrix()) {
            let m: IntegerMatrix<i64> = IntegerMatrix::from_rows(rows.clone(), ncols);
            let snf = m.smith_form();
            let mut prod = 1i64;
            for (k, d) in snf.divisors.iter().enumerate() {
                prop_assert!(*d > 0);
                if k > 0 {
                    prop_assert!(d % snf.divisors[k - 1] == 0);
                }
                prod *= d;
                prop_assert_eq!(prod, determinantal_divisor(&rows, ncols, k + 1));
            }
            let rank = snf.rank();
            if rank < rows.len().min(ncols) {
                prop_assert_eq!(determinantal_divisor(&rows, ncols, rank + 1), 0);
            }
            let big: IntegerMatrix<BigInt> = IntegerMatrix::from_i64_rows(&rows, ncols);
            let big_divs: Vec<BigInt> = snf.divisors.iter().map(|&d| BigInt::from(d)).collect();
            prop_assert_eq!(big.smith_form().divisors, big_divs);
        }

        #[test]
        fn torsion_witness_lies_in_saturation((rows, ncols) in small_matrix()) {
            let m: IntegerMatrix<i64> = IntegerMatrix::from_rows(rows.clone(), ncols);
            if let Some((d, v)) = m.smith_form().torsion_witness() {
                // d * v is in the row lattice, which has the same rank when v is appended.
                let scaled: Vec<i64> = v.iter().map(|x| x * d).collect();
                let mut with_scaled = rows.clone();
                with_scaled.push(scaled);
                let ext: IntegerMatrix<i64> = IntegerMatrix::from_rows(with_scaled, ncols);
                prop_assert_eq!(ext.smith_form().divisors, m.smith_form().divisors);
                let mut with_v = rows.clone();
                with_v.push(v);
                let sat: IntegerMatrix<i64> = IntegerMatrix::from_rows(with_v, ncols);
                prop_assert_eq!(sat.rank(), m.rank());
                prop_assert_ne!(sat.smith_form().divisors, m.smith_form().divisors);
            }
        }
    }
}
