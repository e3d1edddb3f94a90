use mobius_core::kgroup_solver::{
    kernel_image, lattice_basis, smith_normal_form, IntegerMap, IntegerMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = IntegerMatrix<i64>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c)
            .prop_map(move |data| IntegerMatrix::new(r, c, data).unwrap())
    })
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
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
    (0..n)
        .flat_map(|first| {
            subsets(n - first - 1, k - 1).into_iter().map(move |rest| {
                std::iter::once(first)
                    .chain(rest.into_iter().map(|x| x + first + 1))
                    .collect()
            })
        })
        .collect()
}

/// Invariant factors as ratios of determinantal divisors (gcd of k×k minors).
fn determinantal_factors(m: &IntegerMatrix<i64>) -> Vec<i64> {
    let mut out = Vec::new();
    let mut previous = 1i128;
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = 0i128;
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                let minor: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| *m.get(i, j) as i128).collect())
                    .collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push((g / previous) as i64);
        previous = g;
    }
    out
}

fn to_i128(m: &IntegerMatrix<i64>) -> Vec<Vec<i128>> {
    (0..m.rows())
        .map(|i| m.row(i).into_iter().map(i128::from).collect())
        .collect()
}

/// `#{y ∈ (Z/n)^rows : yᵀM ≡ 0 mod n}`, which equals `|Hom(coker M, Z/n)|`.
fn hom_count(m: &IntegerMatrix<i64>, n: i64) -> u64 {
    let rows = m.rows();
    let total = (n as u64).pow(rows as u32);
    (0..total)
        .filter(|&code| {
            let mut y = vec![0i64; rows];
            let mut c = code;
            for slot in y.iter_mut() {
                *slot = (c % n as u64) as i64;
                c /= n as u64;
            }
            (0..m.cols()).all(|j| {
                (0..rows)
                    .map(|i| y[i] * m.get(i, j))
                    .sum::<i64>()
                    .rem_euclid(n)
                    == 0
            })
        })
        .count() as u64
}

fn permuted(m: &IntegerMatrix<i64>, rows: &[usize], cols: &[usize]) -> IntegerMatrix<i64> {
    let data = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| *m.get(i, j)))
        .collect();
    IntegerMatrix::new(m.rows(), m.cols(), data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_is_unimodular_and_diagonal(m in small_matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntegerMatrix::identity(m.rows()));
        prop_assert_eq!(det(&to_i128(&s.v)).abs(), 1);
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert_eq!(*s.d.get(i, j), 0);
                }
            }
        }
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|&x| x > 0));
        prop_assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn invariant_factors_match_determinantal_divisors(m in small_matrix()) {
        prop_assert_eq!(smith_normal_form(&m).invariant_factors(), determinantal_factors(&m));
    }

    #[test]
    fn invariant_factors_ignore_row_and_column_order(
        m in small_matrix(),
        seed in any::<u64>(),
    ) {
        let mut rows: Vec<usize> = (0..m.rows()).collect();
        let mut cols: Vec<usize> = (0..m.cols()).collect();
        let mut state = seed;
        let mut next = |bound: usize| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % bound
        };
        for i in (1..rows.len()).rev() {
            rows.swap(i, next(i + 1));
        }
        for i in (1..cols.len()).rev() {
            cols.swap(i, next(i + 1));
        }
        let p = permuted(&m, &rows, &cols);
        prop_assert_eq!(smith_normal_form(&p).invariant_factors(), smith_normal_form(&m).invariant_factors());
    }

    #[test]
    fn cokernel_matches_hom_counts(m in small_matrix().prop_filter("small target", |m| m.rows() <= 3)) {
        let coker = kernel_image(&IntegerMap::new(m.clone())).cokernel;
        for n in 2..=12i64 {
            let expected: u64 = coker.torsion().iter().map(|t| t.gcd(&n) as u64).product::<u64>()
                * (n as u64).pow(coker.free_rank() as u32);
            prop_assert_eq!(hom_count(&m, n), expected, "n = {}", n);
        }
    }

    #[test]
    fn kernel_basis_is_saturated(m in small_matrix()) {
        let ki = kernel_image(&IntegerMap::new(m.clone()));
        prop_assert_eq!(ki.kernel_basis.len(), ki.kernel.free_rank());
        prop_assert_eq!(ki.kernel.free_rank() + ki.image.free_rank(), m.cols());
        if !ki.kernel_basis.is_empty() {
            let k = IntegerMatrix::from_columns(m.cols(), &ki.kernel_basis);
            prop_assert!(m.mul(&k).is_zero());
            prop_assert!(smith_normal_form(&k).invariant_factors().iter().all(|&d| d == 1));
        }
        let columns: Vec<Vec<i64>> = (0..m.cols()).map(|j| m.column(j)).collect();
        prop_assert_eq!(ki.image_basis.clone(), lattice_basis(&columns, m.rows()));
    }
}

#[test]
fn bigint_entries() {
    let big = |s: &str| s.parse::<BigInt>().unwrap();
    let p = big("1000000000000000000000007");
    let q = big("998244353998244353");
    let m = IntegerMatrix::from_rows(vec![
        vec![p.clone() * q.clone(), p.clone()],
        vec![q.clone(), BigInt::from(0)],
    ])
    .unwrap();
    let s = smith_normal_form(&m);
    assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    let gcd = p.gcd(&q);
    assert_eq!(s.invariant_factors(), vec![gcd.clone(), p * q / gcd]);
}
