//! Smith normal form postconditions, checked against determinantal divisors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use selfsim::ktheory::{cokernel, kernel, smith_normal_form, IntMatrix};

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
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

/// `d_k`: gcd of all `k × k` minors.
fn determinantal_divisor(m: &[Vec<i128>], k: usize) -> i128 {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mut g: i128 = 0;
    for rows in subsets(r, k) {
        for cols in subsets(c, k) {
            let sub: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(
            prop_oneof![3 => -6i64..=6, 1 => -60i64..=60, 1 => Just(0i64)], c), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_postconditions(rows in matrix()) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&m);
        prop_assert!(s.verify(&m));
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.determinant().abs() == BigInt::from(1));
        prop_assert!(s.v.determinant().abs() == BigInt::from(1));

        let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let diag = s.d.diagonal();
        let mut prod = BigInt::from(1);
        for (k, d) in diag.iter().enumerate() {
            prod *= d;
            prop_assert_eq!(prod.clone(), BigInt::from(determinantal_divisor(&wide, k + 1)));
        }

        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let coker = cokernel(&m);
        prop_assert_eq!(coker.rank, m.rows() - rank);
        prop_assert_eq!(kernel(&m).rank, m.cols() - rank);
        prop_assert!(coker.torsion.iter().all(|t| t > &BigInt::from(1)));
    }
}
