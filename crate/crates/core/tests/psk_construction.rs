use std::f64::consts::PI;

use lsnc_core::constraint::{build_constraints, Cell};
use lsnc_core::latin::{verify_latin, verify_removes};
use lsnc_core::psk::{
    classify, construct, partial_grid, remove_all_psk, vital_coloring, CaseTag, Method,
};
use lsnc_core::signal_set::SignalSet;
use num_complex::Complex64;

mod common;

fn labels(cells: &[Cell]) -> Vec<(usize, usize)> {
    cells.iter().map(|c| c.labels()).collect()
}

#[test]
fn case_examples() {
    assert_eq!(classify(8, 1, 3).unwrap().tag, CaseTag::BothOdd);
    let c = classify(16, 2, 6).unwrap();
    assert_eq!((c.tag, c.m1), (CaseTag::SamePower, 1));
    assert_eq!(classify(8, 2, 4).unwrap().tag, CaseTag::SinEven);
    assert_eq!(classify(16, 1, 2).unwrap().tag, CaseTag::Mixed);
}

#[test]
fn both_odd_partial_and_diagonals() {
    let case = classify(8, 1, 3).unwrap();
    let coloring = vital_coloring(&case).unwrap();
    let classes: Vec<Vec<usize>> = coloring.classes().iter().map(|c| c.iter().map(|v| v + 1).collect()).collect();
    assert_eq!(classes, vec![vec![1, 3, 5, 7], vec![2, 4, 6, 8], vec![9, 11, 13, 15], vec![10, 12, 14, 16]]);
    let partial = partial_grid(&case, &coloring).unwrap();
    assert_eq!(partial.at(0, 5), Some(1));
    assert_eq!(partial.at(0, 6), Some(3));
    assert_eq!(partial, common::fixture("psk8_k1_l3_partial").grid);
    let built = construct(8, 1, 3).unwrap();
    assert_eq!(built.method, Method::Diagonal);
    for (col, sym) in [(0, 5), (1, 6), (4, 7), (7, 8)] {
        assert_eq!(built.grid.at(0, col), Some(sym));
    }
    assert_eq!(built.grid, common::fixture("psk8_k1_l3_latin").grid);
    for sym in 1..=8 {
        let n = (0..64).filter(|&i| built.grid.at(i / 8, i % 8) == Some(sym)).count();
        assert_eq!(n, 8);
    }
}

#[test]
fn same_power_reproduces_reference_square() {
    let built = construct(16, 2, 6).unwrap();
    assert_eq!(built.partial, common::fixture("psk16_k2_l6_partial").grid);
    assert_eq!(built.grid, common::fixture("psk16_k2_l6_latin").grid);
}

#[test]
fn single_fill_trace() {
    let case = classify(8, 2, 4).unwrap();
    let coloring = vital_coloring(&case).unwrap();
    assert_eq!(coloring.classes(), vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]);
    let built = construct(8, 2, 4).unwrap();
    assert_eq!(built.partial.at(0, 3), Some(2));
    assert_eq!(built.partial.at(0, 5), Some(1));
    assert_eq!(built.partial, common::fixture("psk8_k2_l4_partial").grid);
    let t = built.trace.as_ref().unwrap();
    assert_eq!(t.filled, common::fixture("psk8_k2_l4_filled").grid);
    assert_eq!(t.interchanged, common::fixture("psk8_k2_l4_interchanged").grid);
    assert_eq!(labels(&t.family[0]), vec![(4, 7)]);
    assert_eq!(labels(&t.family[1]), vec![(4, 6)]);
    assert_eq!(labels(&t.family[2]), vec![(1, 1)]);
    assert!(t.family.iter().all(|x| x.len() == 1));
    assert_eq!(t.rectangle, common::fixture("psk8_k2_l4_rectangle").grid);
    let latin = common::fixture("psk8_k2_l4_latin");
    assert!(verify_latin(&latin.grid) && verify_removes(&latin.grid, &latin.partition()));
    assert!(verify_latin(&built.grid) && built.grid.symbol_count() == 8);
}

#[test]
fn double_fill_trace() {
    let built = construct(16, 1, 2).unwrap();
    assert_eq!(built.method, Method::DoubleFill);
    assert_eq!(built.partial, common::fixture("psk16_k1_l2_partial").grid);
    let t = built.trace.as_ref().unwrap();
    for r in 0..16 {
        assert_eq!(t.filled.row(r).iter().filter(|c| c.is_some()).count(), 6);
    }
    assert_eq!(t.filled, common::fixture("psk16_k1_l2_filled").grid);
    assert_eq!(t.interchanged, common::fixture("psk16_k1_l2_interchanged").grid);
    assert_eq!(t.family.len(), 32);
    #[rustfmt::skip]
    let reference: [[(usize, usize); 3]; 32] = [
        [(3, 6), (3, 10), (3, 14)], [(7, 4), (7, 12), (7, 16)],
        [(4, 7), (4, 11), (4, 15)], [(8, 1), (8, 5), (8, 13)],
        [(1, 8), (1, 12), (1, 16)], [(5, 2), (5, 6), (5, 14)],
        [(2, 1), (2, 9), (2, 13)], [(6, 3), (6, 7), (6, 15)],
        [(3, 2), (3, 10), (3, 14)], [(7, 4), (7, 8), (7, 16)],
        [(4, 3), (4, 11), (4, 15)], [(8, 1), (8, 5), (8, 9)],
        [(1, 4), (1, 12), (1, 16)], [(5, 2), (5, 6), (5, 10)],
        [(2, 1), (2, 5), (2, 13)], [(6, 3), (6, 7), (6, 11)],
        [(3, 2), (3, 6), (3, 14)], [(7, 4), (7, 8), (7, 12)],
        [(4, 3), (4, 7), (4, 15)], [(8, 5), (8, 9), (8, 13)],
        [(1, 4), (1, 8), (1, 16)], [(5, 6), (5, 10), (5, 14)],
        [(2, 1), (2, 5), (2, 9)], [(6, 7), (6, 11), (6, 15)],
        [(3, 2), (3, 6), (3, 10)], [(7, 8), (7, 12), (7, 16)],
        [(4, 3), (4, 7), (4, 11)], [(8, 1), (8, 9), (8, 13)],
        [(1, 4), (1, 8), (1, 12)], [(5, 2), (5, 10), (5, 14)],
        [(2, 5), (2, 9), (2, 13)], [(6, 3), (6, 11), (6, 15)],
    ];
    for (got, want) in t.family.iter().zip(reference) {
        assert_eq!(labels(got), want.to_vec());
    }
    let latin = common::fixture("psk16_k1_l2_latin");
    assert!(verify_latin(&latin.grid) && verify_removes(&latin.grid, &latin.partition()));
    assert!(verify_latin(&t.rectangle));
}

#[test]
fn sweeps() {
    for (m, count) in [(8usize, 12), (16, 56)] {
        let set = SignalSet::psk(m.trailing_zeros()).unwrap();
        let all = remove_all_psk(m).unwrap();
        assert_eq!(all.len(), count);
        let w = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
        for c in &all {
            assert_eq!(c.grid.symbol_count(), m);
            let p = build_constraints(&set, &c.fade_state).unwrap();
            assert!(verify_latin(&c.grid) && verify_removes(&c.grid, &p));
            let rotated = build_constraints(&set, &c.fade_state.scale(w, None)).unwrap();
            assert!(verify_removes(&c.grid.column_rotate(1), &rotated));
        }
    }
}

#[test]
fn closed_form_colorings_are_proper_everywhere() {
    for m in [8, 16, 32] {
        for s in lsnc_core::fade_state::psk_representatives(m).unwrap() {
            let p = s.psk.unwrap();
            vital_coloring(&classify(m, p.k, p.l).unwrap()).unwrap();
        }
    }
}
