mod common;

use std::collections::HashMap;

use ae_core::game::{edge_count, GameState};
use ae_core::solver::{
    solve_position, solve_tau_e, solve_with_order, verify_observation1, GameValue,
};
use ae_core::{Error, LosingProperty};
use rand::seq::SliceRandom;
use rand::Rng;

fn to_value(v: Option<usize>) -> GameValue {
    v.map_or(GameValue::Infinite, GameValue::Finite)
}

#[test]
fn memoized_solver_matches_plain_minimax() {
    for n in 2..=5 {
        for p in LosingProperty::ALL {
            let mut memo = HashMap::new();
            let expected = common::minimax(n, p, &mut Vec::new(), &mut Vec::new(), &mut memo);
            assert_eq!(solve_tau_e(n, p).unwrap().tau_e, to_value(expected), "n={n} {p}");
        }
    }
}

#[test]
fn frozen_values() {
    use GameValue::{Finite, Infinite};
    let table = [
        (3, LosingProperty::NonPlanar, Infinite),
        (3, LosingProperty::NonBipartite, Infinite),
        (3, LosingProperty::ConnectedSpanning, Finite(2)),
        (3, LosingProperty::MinDegreeOne, Finite(2)),
        (4, LosingProperty::NonPlanar, Infinite),
        (4, LosingProperty::NonBipartite, Infinite),
        (4, LosingProperty::ConnectedSpanning, Finite(3)),
        (4, LosingProperty::MinDegreeOne, Finite(3)),
        (5, LosingProperty::NonPlanar, Infinite),
        (5, LosingProperty::NonBipartite, Finite(5)),
        (5, LosingProperty::ConnectedSpanning, Finite(5)),
        (5, LosingProperty::MinDegreeOne, Finite(5)),
    ];
    for (n, p, v) in table {
        assert_eq!(solve_tau_e(n, p).unwrap().tau_e, v, "n={n} {p}");
    }
}

#[test]
fn value_does_not_depend_on_move_order() {
    let mut rng = common::rng(11);
    for n in 3..=5 {
        for p in LosingProperty::ALL {
            let base = solve_tau_e(n, p).unwrap();
            for _ in 0..3 {
                let mut order: Vec<usize> = (0..edge_count(n)).collect();
                order.shuffle(&mut rng);
                let other = solve_with_order(n, p, order).unwrap();
                assert_eq!(other.tau_e, base.tau_e);
                assert_eq!(other.optimal_openings, base.optimal_openings);
            }
        }
    }
}

#[test]
fn bad_orders_and_large_boards_are_rejected() {
    assert!(matches!(solve_with_order(4, LosingProperty::MinDegreeOne, vec![0, 0, 1, 2, 3, 4]), Err(Error::InvalidParameter(_))));
    assert!(matches!(solve_tau_e(7, LosingProperty::MinDegreeOne), Err(Error::CapacityExceeded(_))));
}

#[test]
fn thousand_random_positions_agree_with_direct_evaluation() {
    let mut rng = common::rng(5);
    let mut memos: HashMap<(usize, LosingProperty), HashMap<_, _>> = HashMap::new();
    let mut checked = 0;
    while checked < 1000 {
        let n = rng.gen_range(3..=5);
        let p = LosingProperty::ALL[rng.gen_range(0..4)];
        let seq = common::shuffled_edges(&mut rng, n);
        let depth = rng.gen_range(0..seq.len());
        let (mut a, mut e) = (Vec::new(), Vec::new());
        for (i, &edge) in seq[..depth].iter().enumerate() {
            if i % 2 == 0 {
                a.push(edge);
            } else {
                e.push(edge);
            }
        }
        if common::recompute(p, n, &a) {
            continue;
        }
        let state = GameState::from_claims(n, &a, &e).unwrap();
        let memo = memos.entry((n, p)).or_default();
        let expected = common::minimax(n, p, &mut a, &mut e, memo);
        assert_eq!(solve_position(&state, p).unwrap(), to_value(expected), "n={n} {p} {a:?} {e:?}");
        checked += 1;
    }
}

#[test]
fn lost_positions_are_rejected() {
    let edges = ae_core::game::all_edges(3);
    let state = GameState::from_claims(3, &edges[..2], &edges[2..]).unwrap();
    assert!(solve_position(&state, LosingProperty::MinDegreeOne).is_err());
}

#[test]
fn min_degree_game_ends_no_later_than_connectivity_game() {
    for n in 2..=5 {
        let d = solve_tau_e(n, LosingProperty::MinDegreeOne).unwrap().tau_e;
        let t = solve_tau_e(n, LosingProperty::ConnectedSpanning).unwrap().tau_e;
        assert!(d <= t, "n={n}: {d} > {t}");
        println!("n={n} tau(min_degree_one)={d} tau(connected_spanning)={t} equal={}", d == t);
    }
}

#[test]
fn observation_one_examples() {
    let r = verify_observation1(4, LosingProperty::MinDegreeOne).unwrap();
    assert_eq!((r.ex, r.pass), (3, true));
    assert!(r.tau_e >= GameValue::Finite(3) && r.tau_e <= GameValue::Finite(4));
    let r = verify_observation1(3, LosingProperty::NonPlanar).unwrap();
    assert_eq!((r.tau_e, r.ex, r.pass), (GameValue::Infinite, 3, true));
    let r = verify_observation1(5, LosingProperty::NonBipartite).unwrap();
    assert_eq!((r.ex, r.lower, r.upper), (6, 4, 7));
    assert_eq!(r.to_string(), "tau_e=5 ex=6 sandwich=4..7 pass=true");
    let r = verify_observation1(4, LosingProperty::ConnectedSpanning).unwrap();
    assert!(matches!(r.tau_e, GameValue::Finite(3 | 4)));
}
