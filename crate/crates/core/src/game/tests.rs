use super::*;
use crate::dd::DdManager;
use crate::dfa::{product, Alphabet, Dfa, ProductDfa};
use crate::problem::Limits;
use crate::random::{random_spec, InstanceParams};
use crate::sym::SymbolicArena;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Three states over one input `x` and one output `y`: from 0, output y=1
/// reaches 2 whatever the input; output y=0 reaches 1 on x and 2 otherwise.
/// State 1 loops forever, state 2 is absorbing.
fn toy() -> Dfa {
    let a = Alphabet::new(&["x"], &["y"]).unwrap();
    // letters: bit0 = x, bit1 = y
    let delta = vec![
        2, 1, 2, 2, // state 0
        1, 1, 1, 1, // state 1
        2, 2, 2, 2, // state 2
    ];
    Dfa::from_parts(a, 0, delta, vec![false, false, true])
}

#[test]
fn output_order_is_lexicographic() {
    assert_eq!(output_order(0), vec![0]);
    assert_eq!(output_order(1), vec![0, 1]);
    // first output atom is bit 0 and most significant
    assert_eq!(output_order(2), vec![0b00, 0b10, 0b01, 0b11]);
}

#[test]
fn prec_examples() {
    let d = toy();
    assert_eq!(prec(&d, &[false; 3]), vec![false; 3]);
    assert_eq!(prec(&d, &[true; 3]), vec![true; 3]);
    // only y=1 from state 0 is safe; state 1 never reaches 2
    assert_eq!(prec(&d, &[false, false, true]), vec![true, false, true]);
    assert_eq!(prec(&d, &[false, true, false]), vec![false, true, false]);
}

#[test]
fn explicit_solver_examples() {
    let d = toy();
    let all = solve_explicit(&d, &[true; 3]);
    assert!(all.winning.iter().all(|&w| w));
    assert!(all.rank.iter().all(|&r| r == Some(0)));
    let none = solve_explicit(&d, &[false; 3]);
    assert!(none.winning.iter().all(|&w| !w));
    let r = solve_explicit(&d, &[false, false, true]);
    assert_eq!(r.winning, vec![true, false, true]);
    assert_eq!(r.rank, vec![Some(1), None, Some(0)]);
    assert_eq!(r.moves, vec![Some(1), None, None]);
    assert_eq!(r.actions[0], Actions::Some(vec![1]));
}

#[test]
fn symbolic_trivial_targets() {
    let d = toy();
    let mut arena = SymbolicArena::new(d.alphabet(), std::slice::from_ref(&d));
    let f = arena.manager().const_false();
    let r = solve_symbolic(&mut arena, f, FixpointMode::Full);
    assert_eq!((r.w, r.t), (f, f));
    let t = arena.manager().const_true();
    let r = solve_symbolic(&mut arena, t, FixpointMode::Full);
    assert_eq!(r.w, t);
    assert_eq!(r.iterations(), 0);
}

fn random_products(count: usize, seed: u64) -> Vec<(Vec<Dfa>, ProductDfa)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let params = InstanceParams::default();
    let mut out = Vec::new();
    while out.len() < count {
        let spec = random_spec(&mut rng, &params);
        let compiled = spec.compile(&Limits::default()).unwrap();
        let comps = compiled.components().to_vec();
        let p = product(&comps).unwrap();
        if p.num_states() <= 2000 {
            out.push((comps, p));
        }
    }
    out
}

#[test]
fn symbolic_region_matches_explicit_region() {
    let mut rng = StdRng::seed_from_u64(99);
    for (comps, p) in random_products(60, 21) {
        let n = comps.len();
        let mask = rng.gen_range(1u64..1 << n);
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let target: Vec<bool> = (0..p.num_states() as u32)
            .map(|q| p.bits(q) & mask == mask)
            .collect();
        let explicit = solve_explicit(p.dfa(), &target);
        let a = p.dfa().alphabet().clone();
        let mut arena = SymbolicArena::new(&a, &comps);
        let g = arena.target_guarantee(&set).unwrap();
        let r = solve_symbolic(&mut arena, g, FixpointMode::Full);

        for pair in r.trace.windows(2) {
            let m = arena.manager_mut();
            assert!(m.is_implied(pair[0].0, pair[1].0));
            assert!(m.is_implied(pair[0].1, pair[1].1));
        }
        let ys = arena.y_vars().to_vec();
        let outputs = {
            let t = r.t;
            synthesize_outputs(arena.manager_mut(), t, &ys)
        };
        for q in 0..p.num_states() as u32 {
            let code = arena.code_of_tuple(p.tuple(q));
            assert_eq!(arena.eval_state(r.w, &code), explicit.winning[q as usize]);
            for y in 0..a.num_output_letters() as u32 {
                let allowed = arena.eval_state_output(r.t, &code, y);
                assert_eq!(allowed, explicit.actions[q as usize].allows(y));
                if allowed && !target[q as usize] {
                    for x in 0..a.num_input_letters() as u32 {
                        let next = p.dfa().next(q, a.join(x, y));
                        assert!(explicit.winning[next as usize]);
                    }
                }
            }
            // both engines pick the same output
            if explicit.winning[q as usize] {
                let y = outputs.iter().enumerate().fold(0u32, |acc, (j, &f)| {
                    acc | (arena.eval_state(f, &code) as u32) << j
                });
                assert_eq!(Some(y), explicit.actions[q as usize].first());
            }
        }

        let early = solve_symbolic(&mut arena, g, FixpointMode::EarlyExit);
        assert!(early.stats.steps <= r.stats.steps);
        let init = arena.initial();
        assert_eq!(
            arena.manager_mut().is_implied(init, early.w),
            explicit.winning[p.dfa().initial() as usize]
        );
    }
}

#[test]
fn extracted_moves_reach_the_target() {
    let mut rng = StdRng::seed_from_u64(5);
    for (_, p) in random_products(40, 77) {
        let n = p.num_components();
        let mask = rng.gen_range(1u64..1 << n);
        let target: Vec<bool> = (0..p.num_states() as u32)
            .map(|q| p.bits(q) & mask == mask)
            .collect();
        let r = solve_explicit(p.dfa(), &target);
        let a = p.dfa().alphabet();
        let nx = a.num_input_letters() as u32;
        let horizon = p.num_states().min(12);
        for start in 0..p.num_states() as u32 {
            if !r.winning[start as usize] {
                continue;
            }
            // every adversary reaches the target within the rank bound
            let mut frontier = vec![start];
            for _ in 0..horizon {
                frontier = frontier
                    .into_iter()
                    .filter(|&q| !target[q as usize])
                    .flat_map(|q| {
                        let y = r.moves[q as usize].unwrap();
                        (0..nx).map(move |x| (q, y, x))
                    })
                    .map(|(q, y, x)| p.dfa().next(q, a.join(x, y)))
                    .collect();
                frontier.sort_unstable();
                frontier.dedup();
                if frontier.is_empty() {
                    break;
                }
            }
            let rank = r.rank[start as usize].unwrap() as usize;
            if rank <= horizon {
                assert!(frontier.iter().all(|&q| target[q as usize]));
            }
        }
    }
}

#[test]
fn output_synthesis_examples() {
    let mut m = DdManager::new();
    let p = m.new_var("p").unwrap();
    let y = m.new_var("y").unwrap();
    let pf = m.var_func(p);
    let yf = m.var_func(y);
    let t = m.and(yf, pf);
    let f = synthesize_outputs(&mut m, t, &[y]);
    assert!(m.eval(f[0], &[true]).unwrap());

    let ny = m.not(yf);
    let either = m.or(yf, ny);
    let t = m.and(either, pf);
    let f = synthesize_outputs(&mut m, t, &[y]);
    assert!(!m.eval(f[0], &[true]).unwrap());
}

#[test]
fn output_synthesis_witnesses_random_relations() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..60 {
        let nz = 6;
        let ny = 4;
        let mut m = DdManager::new();
        let zs: Vec<_> = (0..nz).map(|i| m.new_var(format!("z{i}")).unwrap()).collect();
        let ys: Vec<_> = (0..ny).map(|i| m.new_var(format!("y{i}")).unwrap()).collect();
        // random relation from a truth table
        let table: Vec<bool> = (0..1u32 << (nz + ny)).map(|_| rng.gen_bool(0.3)).collect();
        let mut t = m.const_false();
        for (bits, &on) in table.iter().enumerate() {
            if on {
                let lits: Vec<_> = zs
                    .iter()
                    .chain(&ys)
                    .enumerate()
                    .map(|(i, &v)| m.literal(v, bits >> i & 1 == 1))
                    .collect();
                let cube = m.and_all(lits);
                t = m.or(t, cube);
            }
        }
        let fs = synthesize_outputs(&mut m, t, &ys);
        let subst = ys.iter().copied().zip(fs.iter().copied()).collect();
        let applied = m.vector_compose(t, &subst);
        let ycube = m.cube(&ys);
        let dom = m.exists_cube(ycube, t);
        assert_eq!(applied, dom);
        for z in 0..1usize << nz {
            let assign: Vec<bool> = (0..nz + ny).map(|i| i < nz && z >> i & 1 == 1).collect();
            if !m.eval(dom, &assign).unwrap() {
                continue;
            }
            let chosen = fs.iter().enumerate().fold(0usize, |acc, (j, &f)| {
                acc | (m.eval(f, &assign).unwrap() as usize) << j
            });
            let lex_min = crate::game::output_order(ny)
                .into_iter()
                .find(|&y| table[z | (y as usize) << nz])
                .unwrap();
            assert_eq!(chosen, lex_min as usize);
        }
    }
}
