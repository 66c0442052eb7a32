use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wadge_game::{solve, verify_strategy, GameArena, Player, Solution};

fn random_arena(rng: &mut ChaCha8Rng, n: usize, max_out: usize, max_prio: u32) -> GameArena {
    let owner = (0..n).map(|_| if rng.gen_bool(0.5) { Player::Even } else { Player::Odd }).collect();
    let priority = (0..n).map(|_| rng.gen_range(0..=max_prio)).collect();
    let edges = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max_out);
            let mut e: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            e.sort_unstable();
            e.dedup();
            e
        })
        .collect();
    GameArena::new(owner, priority, edges)
}

/// Outcome of the play from `v` when both players follow fixed positional
/// choices: the parity of the largest priority on the cycle.
fn lasso_winner(g: &GameArena, choice: &[usize], v: usize) -> Player {
    let mut seen = vec![usize::MAX; g.len()];
    let mut path = Vec::new();
    let mut x = v;
    while seen[x] == usize::MAX {
        seen[x] = path.len();
        path.push(x);
        x = g.edges(x)[choice[x]];
    }
    let top = path[seen[x]..].iter().map(|&w| g.priority(w)).max().unwrap();
    if top % 2 == 0 {
        Player::Even
    } else {
        Player::Odd
    }
}

fn all_choices(g: &GameArena, who: Player) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; g.len()]];
    for v in 0..g.len() {
        if g.owner(v) != who {
            continue;
        }
        let mut next = Vec::new();
        for c in &out {
            for i in 0..g.edges(v).len() {
                let mut c2 = c.clone();
                c2[v] = i;
                next.push(c2);
            }
        }
        out = next;
    }
    out
}

fn brute_force(g: &GameArena) -> Vec<Player> {
    let evens = all_choices(g, Player::Even);
    let odds = all_choices(g, Player::Odd);
    (0..g.len())
        .map(|v| {
            let even_wins = evens.iter().any(|se| {
                odds.iter().all(|so| {
                    let mixed: Vec<usize> =
                        (0..g.len()).map(|w| if g.owner(w) == Player::Even { se[w] } else { so[w] }).collect();
                    lasso_winner(g, &mixed, v) == Player::Even
                })
            });
            if even_wins {
                Player::Even
            } else {
                Player::Odd
            }
        })
        .collect()
}

/// Exhaustive soundness: fixing `who`'s strategy inside its region, no cycle
/// reachable from that region has the opponent's parity as maximum.
fn strategy_sound(g: &GameArena, sol: &Solution, who: Player) -> bool {
    let n = g.len();
    let succ = |v: usize| -> Vec<usize> {
        if g.owner(v) == who {
            vec![sol.choice(g, v).expect("strategy defined in own region")]
        } else {
            g.edges(v).to_vec()
        }
    };
    for v in 0..n {
        if sol.wins(v) != who {
            continue;
        }
        for w in succ(v) {
            if sol.wins(w) != who {
                return false;
            }
        }
    }
    let bad_parity = if who == Player::Even { 1 } else { 0 };
    for p in (0..=g.len() as u32 * 4).filter(|p| p % 2 == bad_parity) {
        // is there a cycle through a priority-p vertex using vertices of
        // priority <= p, all inside the region?
        for start in 0..n {
            if sol.wins(start) != who || g.priority(start) != p {
                continue;
            }
            let mut seen = vec![false; n];
            let mut stack = succ(start);
            while let Some(x) = stack.pop() {
                if x == start {
                    return false;
                }
                if seen[x] || g.priority(x) > p {
                    continue;
                }
                seen[x] = true;
                stack.extend(succ(x));
            }
        }
    }
    true
}

#[test]
fn trivial_self_loops() {
    let g = GameArena::new(vec![Player::Even], vec![0], vec![vec![0]]);
    assert_eq!(solve(&g).winner, vec![Player::Even]);
    let g = GameArena::new(vec![Player::Even], vec![1], vec![vec![0]]);
    assert_eq!(solve(&g).winner, vec![Player::Odd]);
}

#[test]
fn dead_end_loses_for_owner() {
    let g = GameArena::new(vec![Player::Even, Player::Odd], vec![2, 1], vec![vec![], vec![]]);
    let s = solve(&g);
    assert_eq!(s.winner, vec![Player::Odd, Player::Even]);
}

#[test]
fn four_vertex_mixed_arena() {
    // 0 (Even, 1) -> 1, 2 ; 1 (Odd, 2) -> 0, 3 ; 2 (Odd, 3) -> 2 ; 3 (Even, 0) -> 1, 3
    let g = GameArena::new(
        vec![Player::Even, Player::Odd, Player::Odd, Player::Even],
        vec![1, 2, 3, 0],
        vec![vec![1, 2], vec![0, 3], vec![2], vec![1, 3]],
    );
    let s = solve(&g);
    assert_eq!(s.winner, brute_force(&g));
    assert_eq!(s.winner, vec![Player::Even, Player::Even, Player::Odd, Player::Even]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    assert!(verify_strategy(&g, &s, 1000, &mut rng));
}

#[test]
fn regions_match_positional_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..400 {
        let n = rng.gen_range(1..=8);
        let g = random_arena(&mut rng, n, 2, 5);
        let s = solve(&g);
        assert_eq!(s.winner, brute_force(&g), "round {round}:\n{}", g.dump());
    }
}

#[test]
fn strategies_are_exhaustively_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..400 {
        let n = rng.gen_range(1..=10);
        let g = random_arena(&mut rng, n, 3, 6);
        let s = solve(&g);
        assert!(strategy_sound(&g, &s, Player::Even), "{}", g.dump());
        assert!(strategy_sound(&g, &s, Player::Odd), "{}", g.dump());
        for v in 0..n {
            assert_eq!(s.strategy[v].is_some(), s.wins(v) == g.owner(v));
        }
    }
}

#[test]
fn solving_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let g = random_arena(&mut rng, 30, 3, 7);
        assert_eq!(solve(&g), solve(&g.clone()));
    }
}

#[test]
fn verify_strategy_accepts_solutions_and_rejects_swapped_regions() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let g = GameArena::new(vec![Player::Even], vec![0], vec![vec![0]]);
    let s = solve(&g);
    assert!(verify_strategy(&g, &s, 100, &mut rng));
    let swapped = Solution { winner: vec![Player::Odd], strategy: s.strategy.clone() };
    assert!(!verify_strategy(&g, &swapped, 100, &mut rng));
    for _ in 0..100 {
        let g = random_arena(&mut rng, 12, 3, 5);
        let s = solve(&g);
        assert!(verify_strategy(&g, &s, 200, &mut rng));
    }
}

#[test]
fn larger_arenas_agree_with_determinacy_and_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let g = random_arena(&mut rng, 2000, 3, 9);
        let s = solve(&g);
        assert!(strategy_sound(&g, &s, Player::Even));
        assert!(strategy_sound(&g, &s, Player::Odd));
    }
}

