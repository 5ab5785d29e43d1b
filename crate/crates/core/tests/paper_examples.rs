mod common;

use common::oracle;
use flarl::linalg::{covers, is_direct_sum, is_independent, pairwise_trivial, projection};
use flarl::{ExactLabel, LabelMatrix, LabelPoly, LinearMap, Resolution, Subspace};

fn m4() -> Resolution {
    Resolution::new(4).unwrap()
}

/// Row-major coordinates of a `cols`-wide matrix pattern.
fn cells(cols: usize, at: &[(usize, usize)]) -> Vec<usize> {
    at.iter().map(|(i, j)| i * cols + j).collect()
}

#[test]
fn pattern_subspaces_of_three_by_three_matrices() {
    let res = m4();
    let w1 = Subspace::coordinates(9, &cells(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]), res);
    let w2 = Subspace::coordinates(9, &cells(3, &[(0, 0), (0, 1), (1, 1), (2, 0), (2, 2)]), res);
    let meet = w1.intersection(&w2).unwrap();
    let sum = w1.sum(&w2).unwrap();
    assert_eq!((w1.dim(), w2.dim(), meet.dim(), sum.dim()), (4, 5, 1, 8));
    assert_eq!(meet, Subspace::coordinates(9, &[1], res));
    assert!(sum.is_hyperspace());
    assert!(!sum.contains(&Subspace::coordinates(9, &[3], res).basis().column(0)).unwrap());
}

#[test]
fn rank_and_nullity_of_the_five_by_two_map() {
    // a = (a1..a10) row-major in a 5×2 matrix; T(a) = [[a1,0,a5,0,a9],[a2,0,a6,0,a10]]
    let res = m4();
    let picks = [Some(0), None, Some(4), None, Some(8), Some(1), None, Some(5), None, Some(9)];
    let u = ExactLabel::unit(res);
    let mut idx = vec![ExactLabel::zero(res); 100];
    for (row, p) in picks.iter().enumerate() {
        if let Some(col) = p {
            idx[row * 10 + col] = u.clone();
        }
    }
    let t = LinearMap::new(LabelMatrix::new(10, 10, idx, res).unwrap());
    assert_eq!((t.rank(), t.nullity()), (6, 4));
    assert_eq!(t.null_space(), Subspace::coordinates(10, &[2, 3, 6, 7], res));
}

#[test]
fn four_coordinate_blocks_form_a_direct_sum() {
    let res = m4();
    let parts = [
        Subspace::coordinates(9, &[0, 2], res),
        Subspace::coordinates(9, &[4, 5, 8], res),
        Subspace::coordinates(9, &[1, 6, 7], res),
        Subspace::coordinates(9, &[3], res),
    ];
    assert!(is_direct_sum(&parts, 9).unwrap());
    assert!(is_independent(&parts).unwrap());
    assert!(pairwise_trivial(&parts).unwrap());
}

#[test]
fn five_overlapping_patterns_sum_but_not_directly() {
    let res = m4();
    let c = |at: &[(usize, usize)]| Subspace::coordinates(6, &cells(2, at), res);
    let parts = [
        c(&[(0, 0), (0, 1), (1, 1)]),
        c(&[(0, 0), (1, 0)]),
        c(&[(0, 1), (2, 0), (2, 1)]),
        c(&[(0, 0), (0, 1), (2, 0), (2, 1)]),
        c(&[(1, 0), (1, 1), (2, 0)]),
    ];
    assert!(covers(&parts, 6).unwrap());
    assert!(!is_direct_sum(&parts, 6).unwrap());
    assert!(!is_independent(&parts).unwrap());
    assert!(!pairwise_trivial(&parts).unwrap());
}

#[test]
fn projection_dropping_the_middle_coordinate() {
    let res = m4();
    let range = Subspace::coordinates(3, &[0, 2], res);
    let null = Subspace::coordinates(3, &[1], res);
    let e = projection(&range, &null).unwrap();
    let v = LabelMatrix::from_indices(3, 1, &[7, -2, 3], res).unwrap();
    assert_eq!(e.apply(&v).unwrap(), LabelMatrix::from_indices(3, 1, &[7, 0, 3], res).unwrap());
    assert_eq!(e.null_space(), null);
    assert_eq!(e.compose(&e).unwrap(), e);
}

#[test]
fn diagonal_part_leaves_diagonal_matrices_invariant() {
    // T([[a1,a2],[a3,a4]]) = [[a1,0],[0,a2]] on row-major coordinates
    let res = m4();
    let mut m = LabelMatrix::zero(4, 4, res).to_real();
    m.set(0, 0, oracle::q(1, 1));
    m.set(3, 1, oracle::q(1, 1));
    let t = LinearMap::new(LabelMatrix::from_real(&m, res));
    let diag = Subspace::coordinates(4, &[0, 3], res);
    assert!(t.is_invariant(&diag).unwrap());
    assert!(!t.is_invariant(&Subspace::coordinates(4, &[1], res)).unwrap());
}

#[test]
fn two_by_two_char_poly_closed_form() {
    let res = m4();
    let (a, b, c, d) = (3i64, -2i64, 7i64, 4i64);
    let m = LabelMatrix::from_indices(2, 2, &[a, b, c, d], res).unwrap();
    let cp = flarl::spectral::char_poly(&m).unwrap();
    let expected = LabelPoly::new(
        vec![
            ExactLabel::new(oracle::q(a * d - b * c, 5), res),
            ExactLabel::int(-(a + d), res),
            ExactLabel::unit(res),
        ],
        res,
    )
    .unwrap();
    assert_eq!(cp, expected);
}
