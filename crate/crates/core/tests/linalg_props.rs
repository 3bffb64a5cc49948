use linfty_core::{
    int, split_epi_section, split_mono_retraction, Complex, GradedMap, GradedSpace, Matrix, Rat,
};
use proptest::prelude::*;

fn mat(rows: &[Vec<i64>]) -> Matrix<Rat> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect()).unwrap()
}

fn matrix(max: usize) -> impl Strategy<Value = Matrix<Rat>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r).prop_map(|rows| mat(&rows))
    })
}

/// Unit lower-triangular, hence invertible.
fn unipotent(n: usize) -> impl Strategy<Value = Matrix<Rat>> {
    prop::collection::vec(-2i64..=2, n * n).prop_map(move |xs| {
        Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => int(1),
            std::cmp::Ordering::Greater => int(xs[i * n + j]),
            std::cmp::Ordering::Less => Rat::from_integer(0.into()),
        })
    })
}

fn space(dims: &[usize]) -> GradedSpace {
    GradedSpace::from_labels(
        dims.iter()
            .enumerate()
            .map(|(d, n)| (d as i32, (0..*n).map(|i| format!("v{d}_{i}")).collect())),
    )
    .unwrap()
}

/// Rank by plain fraction elimination, independent of the library.
fn oracle_rank(m: &Matrix<Rat>) -> usize {
    let mut a = m.to_rows();
    let mut rank = 0;
    let cols = m.cols();
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|r| a[*r][c] != int(0)) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && a[r][c] != int(0) {
                let f = a[r][c].clone() / a[rank][c].clone();
                for k in 0..cols {
                    let t = a[rank][k].clone() * f.clone();
                    a[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inverse_is_exact(m in unipotent(4), extra in matrix(4)) {
        let inv = m.inverse().unwrap();
        prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(4));
        if extra.rows() == extra.cols() {
            if let Ok(i) = extra.inverse() {
                prop_assert_eq!(extra.mul(&i).unwrap(), Matrix::identity(extra.rows()));
            } else {
                prop_assert!(oracle_rank(&extra) < extra.rows());
            }
        }
    }

    #[test]
    fn rank_matches_oracle(m in matrix(5)) {
        prop_assert_eq!(m.rank(), oracle_rank(&m));
        let k = m.kernel();
        prop_assert_eq!(k.cols(), m.cols() - m.rank());
        prop_assert!(m.mul(&k).unwrap().is_zero());
    }

    /// Surjections and injections of total dimension at most 8 split exactly.
    #[test]
    fn splittings(m in matrix(4), g in unipotent(4)) {
        let s = space(&[m.cols()]);
        let t = space(&[m.rows()]);
        let mut f = GradedMap::zero(&s, &t, 0);
        f.set_block(0, m.clone()).unwrap();
        if m.rank() == m.rows() {
            let sec = split_epi_section(&f).unwrap();
            prop_assert_eq!(f.compose(&sec).unwrap(), GradedMap::identity(&t));
        } else {
            prop_assert!(split_epi_section(&f).is_err());
        }
        if m.rank() == m.cols() {
            let ret = split_mono_retraction(&f).unwrap();
            prop_assert_eq!(ret.compose(&f).unwrap(), GradedMap::identity(&s));
        } else {
            prop_assert!(split_mono_retraction(&f).is_err());
        }
        let sq = space(&[4]);
        let mut iso = GradedMap::zero(&sq, &sq, 0);
        iso.set_block(0, g).unwrap();
        let sec = split_epi_section(&iso).unwrap();
        prop_assert_eq!(split_mono_retraction(&iso).unwrap(), sec);
    }

    /// A sum of elementary complexes `x → y` and singletons, conjugated by
    /// unipotent changes of basis: cohomology counts the singletons.
    #[test]
    fn cohomology_matches_construction(
        singles in prop::collection::vec(0usize..=2, 4),
        pairs in prop::collection::vec(0usize..=2, 3),
        gs in prop::collection::vec(prop::collection::vec(-2i64..=2, 36), 4),
    ) {
        let dims: Vec<usize> = (0..4)
            .map(|d| singles[d] + if d < 3 { pairs[d] } else { 0 } + if d > 0 { pairs[d - 1] } else { 0 })
            .collect();
        let s = space(&dims);
        let conj = |d: usize| {
            let n = dims[d];
            Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => int(1),
                std::cmp::Ordering::Greater => int(gs[d][(i * 6 + j) % 36]),
                std::cmp::Ordering::Less => Rat::from_integer(0.into()),
            })
        };
        let mut diff = GradedMap::zero(&s, &s, 1);
        for d in 0..3 {
            let src_off = singles[d] + if d > 0 { pairs[d - 1] } else { 0 };
            let tgt_off = singles[d + 1];
            let mut b = Matrix::zeros(dims[d + 1], dims[d]);
            for i in 0..pairs[d] {
                b.set(tgt_off + i, src_off + i, int(1));
            }
            let b = conj(d + 1).mul(&b).unwrap().mul(&conj(d).inverse().unwrap()).unwrap();
            diff.set_block(d as i32, b).unwrap();
        }
        let c = Complex::new(diff.clone()).unwrap();
        for d in 0..4 {
            let h = c.cohomology_at(d as i32).dim;
            prop_assert_eq!(h, singles[d]);
            let out = if d < 3 { oracle_rank(&diff.block(d as i32)) } else { 0 };
            let inn = if d > 0 { oracle_rank(&diff.block(d as i32 - 1)) } else { 0 };
            prop_assert_eq!(h, dims[d] - out - inn);
        }
        let again = Complex::new(diff).unwrap();
        prop_assert_eq!(again.cohomology_at(1), c.cohomology_at(1));
    }
}

#[test]
fn determinism_of_splittings() {
    let m = mat(&[vec![1, 2, 3], vec![2, 4, 7]]);
    let a = m.right_inverse().unwrap();
    let b = m.right_inverse().unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
    assert_eq!(m.mul(&a).unwrap(), Matrix::identity(2));
    assert_eq!(m.column_basis(), vec![0, 2]);
}
