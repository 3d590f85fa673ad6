use lsnc_core::coloring::{
    extend_coloring, greedy_color, verify_proper, Coloring, Extension, GreedyOrder,
};
use lsnc_core::constraint::{build_constraints, Cell};
use lsnc_core::fade_state::{parse_fade_state, FadeState};
use lsnc_core::graph::Graph;
use lsnc_core::latin::{
    complete_rows_hall, find_sdr, from_coloring, generic_complete, verify_latin, verify_removes, CellOrigin,
    Completion, LatinGrid, Sdr,
};
use lsnc_core::signal_set::SignalSet;
use lsnc_core::srg::{build_srg, vital_subgraph};

mod common;

const BUDGET: u64 = 5_000_000;

fn qam4_half() -> lsnc_core::constraint::ConstraintPartition {
    build_constraints(&SignalSet::square_qam(4).unwrap(), &parse_fade_state("0.5+0.5j", 4).unwrap()).unwrap()
}

/// The five-coloring of the 4-QAM graph at (1+j)/2, by block.
const QAM4_FIVE: [usize; 12] = [1, 2, 3, 4, 3, 5, 4, 5, 5, 2, 5, 1];

#[test]
fn verify_proper_examples() {
    let p = qam4_half();
    let g = build_srg(&p);
    let c = Coloring::from_labels(&QAM4_FIVE).unwrap();
    assert!(verify_proper(&g.graph, &c).unwrap());
    assert!(!verify_proper(&Graph::complete(4), &Coloring::new(vec![0, 1, 2, 0])).unwrap());
    assert!(verify_proper(&Graph::new(5), &Coloring::new(vec![0; 5])).unwrap());
    assert!(verify_proper(&Graph::new(5), &Coloring::new(vec![0; 4])).is_err());
}

#[test]
fn greedy_examples() {
    assert_eq!(greedy_color(&Graph::complete(6), &GreedyOrder::Natural).num_colors(), 6);
    assert_eq!(greedy_color(&Graph::new(6), &GreedyOrder::Dsatur).num_colors(), 1);
    let g = build_srg(&qam4_half()).graph;
    let orders = [
        GreedyOrder::Natural,
        GreedyOrder::Degeneracy,
        GreedyOrder::Dsatur,
        GreedyOrder::Sequence((0..12).rev().collect()),
    ];
    for o in &orders {
        let c = greedy_color(&g, o);
        assert!(verify_proper(&g, &c).unwrap());
        assert!((5..=7).contains(&c.num_colors()));
    }
}

#[test]
fn extension_examples() {
    let reference = common::fixture("qam8cross_constrained");
    let p = reference.partition();
    let g = build_srg(&p);
    let groups: [&[usize]; 8] = [&[1, 9], &[2, 15], &[3, 18], &[4, 16, 17], &[5, 11, 12], &[6, 13], &[7, 10], &[8, 14]];
    let mut partial = vec![None; g.vertex_count()];
    for (color, group) in groups.iter().enumerate() {
        for &b in *group {
            partial[b - 1] = Some(color);
        }
    }
    assert_eq!(extend_coloring(&g.graph, &partial, 8, BUDGET).unwrap(), Extension::Infeasible);
    match extend_coloring(&g.graph, &vec![None; g.vertex_count()], 8, BUDGET).unwrap() {
        Extension::Colored(c) => assert!(verify_proper(&g.graph, &c).unwrap()),
        other => panic!("{other:?}"),
    }

    let pam = build_constraints(&SignalSet::pam(4).unwrap(), &FadeState::from_exact(lsnc_core::exact::exact(-2, 0))).unwrap();
    let g = build_srg(&pam);
    let vital = vital_subgraph(&g, &pam);
    let vital_colors = Coloring::from_labels(&[1, 2, 3, 3, 4, 1]).unwrap();
    assert!(verify_proper(&vital.graph, &vital_colors).unwrap());
    let mut partial = vec![None; g.vertex_count()];
    for (v, &b) in vital.vertex_block.iter().enumerate() {
        partial[b] = Some(vital_colors.color(v));
    }
    match extend_coloring(&g.graph, &partial, 4, BUDGET).unwrap() {
        Extension::Colored(c) => {
            assert!(verify_proper(&g.graph, &c).unwrap());
            assert!(partial.iter().enumerate().all(|(v, p)| p.is_none_or(|x| x == c.color(v))));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn improper_partial_rejected() {
    let g = Graph::complete(3);
    assert!(extend_coloring(&g, &[Some(0), Some(0), None], 3, 100).is_err());
}

#[test]
fn from_coloring_examples() {
    let p = qam4_half();
    let c = Coloring::from_labels(&QAM4_FIVE).unwrap();
    let grid = from_coloring(&p, &c).unwrap();
    assert_eq!(grid, common::fixture("qam4_half_latin").grid);
    assert_eq!(grid.symbol_count(), 5);

    // Renaming colors renames symbols.
    let renamed = Coloring::new(c.colors().iter().map(|&x| (x + 2) % 5).collect());
    let other = from_coloring(&p, &renamed).unwrap();
    for r in 0..4 {
        for col in 0..4 {
            assert_eq!(other.at(r, col).map(|s| s - 1), grid.at(r, col).map(|s| (s + 1) % 5));
        }
    }

    let bad = Coloring::new(vec![0; 12]);
    assert!(from_coloring(&p, &bad).is_err());

    let singletons = build_constraints(&SignalSet::square_qam(4).unwrap(), &FadeState::new(num_complex::Complex64::new(9.0, 0.1))).unwrap();
    let g = build_srg(&singletons);
    let c = greedy_color(&g.graph, &GreedyOrder::Dsatur);
    let grid = from_coloring(&singletons, &c).unwrap();
    assert!(verify_latin(&grid) && verify_removes(&grid, &singletons));
    assert_eq!(grid.symbol_count(), 4);
}

#[test]
fn verifier_examples() {
    let reference = common::fixture("qam4_half_latin");
    assert!(verify_latin(&reference.grid));
    assert!(verify_removes(&reference.grid, &reference.partition()));
    let mut broken = reference.grid.clone();
    broken.set(Cell::from_labels(1, 3), 2, CellOrigin::Given);
    assert!(!verify_latin(&broken));
    assert!(verify_latin(&LatinGrid::empty(5)));

    let cross = common::fixture("qam8cross_latin");
    assert!(verify_removes(&cross.grid, &cross.partition()));
    assert_eq!(cross.grid.symbol_count(), 8);

    let xor: Vec<Vec<u32>> = (0..8u32).map(|a| (0..8u32).map(|b| (a ^ b) + 1).collect()).collect();
    let xor = LatinGrid::from_rows(&xor).unwrap();
    let psk8 = SignalSet::psk(3).unwrap();
    let one = FadeState::new(num_complex::Complex64::new(1.0, 0.0));
    assert!(verify_removes(&xor, &build_constraints(&psk8, &one).unwrap()));
}

#[test]
fn interchange_examples() {
    let two = common::fixture("order4_two_rows").grid;
    let swapped = two.interchange_symbol_row().unwrap();
    assert_eq!(swapped, common::fixture("order4_two_rows_interchanged").grid);
    assert_eq!(swapped.interchange_symbol_row().unwrap(), two);
    let rect = common::fixture("psk8_k2_l4_rectangle").grid;
    assert_eq!(rect.interchange_symbol_row().unwrap().interchange_symbol_row().unwrap(), rect);
}

#[test]
fn hall_completion_examples() {
    let two = common::fixture("order4_two_rows").grid;
    let done = complete_rows_hall(&two).unwrap();
    assert!(done.is_complete() && verify_latin(&done));
    for r in 0..2 {
        assert_eq!(done.row(r), two.row(r));
    }
    assert!(verify_latin(&common::fixture("order4_two_rows_completed").grid));
    let full = common::fixture("pam4_minus2_latin").grid;
    assert_eq!(complete_rows_hall(&full).unwrap(), full);
    let fresh = complete_rows_hall(&LatinGrid::empty(6)).unwrap();
    assert!(fresh.is_complete() && verify_latin(&fresh) && fresh.symbol_count() == 6);
}

#[test]
fn sdr_examples() {
    match find_sdr(&[vec![1, 2], vec![3, 4], vec![1, 2, 3]]) {
        Sdr::Representatives(r) => {
            assert!([1, 2].contains(&r[0]) && [3, 4].contains(&r[1]) && [1, 2, 3].contains(&r[2]));
            assert!(r[0] != r[1] && r[1] != r[2] && r[0] != r[2]);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(find_sdr(&[vec![1], vec![1]]), Sdr::HallViolation(vec![0, 1]));
}

#[test]
fn generic_completion_examples() {
    let partial = common::fixture("qam8cross_partial").grid;
    assert_eq!(generic_complete(&partial, 8, BUDGET).unwrap(), Completion::Infeasible);

    let pam = common::fixture("pam4_minus2_partial");
    match generic_complete(&pam.grid, 4, BUDGET).unwrap() {
        Completion::Completed(g) => {
            assert!(verify_latin(&g) && verify_removes(&g, &pam.partition()));
            assert_eq!(g.symbol_count(), 4);
        }
        other => panic!("{other:?}"),
    }
    let latin = common::fixture("pam4_minus2_latin");
    assert!(verify_latin(&latin.grid) && verify_removes(&latin.grid, &latin.partition()));

    match generic_complete(&LatinGrid::empty(4), 4, BUDGET).unwrap() {
        Completion::Completed(g) => assert!(verify_latin(&g) && g.is_complete()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn transforms() {
    let g = common::fixture("qam4_half_latin").grid;
    assert_eq!(g.transpose().transpose(), g);
    assert_eq!(g.column_rotate(4), g);
    assert!(verify_latin(&g.column_rotate(1)) && verify_latin(&g.transpose()));
}
