mod common;

use std::collections::BTreeSet;

use common::*;
use hleq_core::cells::{
    boundary, cell_alpha_eq, dim, parse_cell, path_subst, print_cell, src, tgt, well_formed, Cell, Context,
};
use hleq_core::reduction::{
    contract, enumerate_terms, joinable, normal_form, redex_positions, reduction_graph, step_at, subterm_at,
    RedexKind, Step,
};
use hleq_core::syntax::{free_vars, name, parse_term, print_term, subst, Name, Term};
use hleq_core::theory::{
    beta_contract, build_beta_square, canonicalize, convertible, eta_contract, search_filler, step_cell,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn arb_name() -> impl Strategy<Value = Name> {
    prop::sample::select(vec!["x", "y", "z", "w", "x1"]).prop_map(name)
}

fn arb_term() -> impl Strategy<Value = Term> {
    arb_name().prop_map(Term::Var).prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::App(Box::new(f), Box::new(a))),
            (arb_name(), inner).prop_map(|(x, b)| Term::Abs(x, Box::new(b))),
        ]
    })
}

/// Renames every binder to a name unused elsewhere.
fn rename_binders(t: &Term, n: &mut usize) -> Term {
    fn go(t: &Term, env: &[(Name, Name)], n: &mut usize) -> Term {
        match t {
            Term::Var(x) => Term::Var(env.iter().rev().find(|(a, _)| a == x).map_or(x.clone(), |(_, b)| b.clone())),
            Term::App(f, a) => Term::App(Box::new(go(f, env, n)), Box::new(go(a, env, n))),
            Term::Abs(x, b) => {
                *n += 1;
                let y = name(&format!("b{n}"));
                let mut env = env.to_vec();
                env.push((x.clone(), y.clone()));
                Term::Abs(y, Box::new(go(b, &env, n)))
            }
        }
    }
    go(t, &[], n)
}

fn cell_from(seed: u64, d: usize) -> Cell {
    gen_cell(&mut StdRng::seed_from_u64(seed), d)
}

fn walk(t: &Term, path: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    out.push(path.clone());
    match t {
        Term::Var(_) => {}
        Term::App(f, a) => {
            path.push(Step::Fun);
            walk(f, path, out);
            path.pop();
            path.push(Step::Arg);
            walk(a, path, out);
            path.pop();
        }
        Term::Abs(_, b) => {
            path.push(Step::Body);
            walk(b, path, out);
            path.pop();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn term_round_trip(t in arb_term()) {
        prop_assert!(alpha(&parse_term(&print_term(&t)).unwrap(), &t));
    }

    #[test]
    fn subst_identity(t in arb_term(), x in arb_name()) {
        prop_assert!(alpha(&subst(&t, &x, &Term::Var(x.clone())), &t));
    }

    #[test]
    fn subst_fresh_is_noop(t in arb_term(), x in arb_name(), v in arb_term()) {
        prop_assume!(!free_vars(&t).contains(&x));
        prop_assert!(alpha(&subst(&t, &x, &v), &t));
    }

    #[test]
    fn subst_no_capture(t in arb_term(), x in arb_name(), v in arb_term()) {
        let out = free_vars(&subst(&t, &x, &v));
        let mut allowed: BTreeSet<Name> = free_vars(&t);
        let had = allowed.remove(&x);
        allowed.extend(free_vars(&v));
        prop_assert!(out.is_subset(&allowed));
        if had {
            prop_assert_eq!(out, allowed);
        }
        // agrees with the nameless oracle
        prop_assert_eq!(db(&subst(&t, &x, &v)), oracle_subst(&t, &x, &v));
    }

    #[test]
    fn subst_respects_alpha(t in arb_term(), x in arb_name(), v in arb_term()) {
        let mut n = 0;
        let t2 = rename_binders(&t, &mut n);
        let v2 = rename_binders(&v, &mut n);
        prop_assert!(alpha(&subst(&t, &x, &v), &subst(&t2, &x, &v2)));
    }

    #[test]
    fn step_changes_only_the_redex(t in arb_term()) {
        let mut paths = Vec::new();
        walk(&t, &mut Vec::new(), &mut paths);
        for p in redex_positions(&t) {
            let out = step_at(&t, &p).unwrap();
            let want = contract(subterm_at(&t, &p.path).unwrap(), p.kind).unwrap();
            prop_assert!(alpha(subterm_at(&out, &p.path).unwrap(), &want));
            for q in &paths {
                let disjoint = !q.starts_with(&p.path) && !p.path.starts_with(q);
                if disjoint {
                    prop_assert!(alpha(subterm_at(&out, q).unwrap(), subterm_at(&t, q).unwrap()));
                }
            }
            if p.path.is_empty() && p.kind == RedexKind::Beta {
                let Term::App(f, n) = &t else { unreachable!() };
                let Term::Abs(x, m) = &**f else { unreachable!() };
                prop_assert!(alpha(&out, &subst(m, x, n)));
            }
        }
    }

    #[test]
    fn reduction_is_deterministic(t in arb_term()) {
        prop_assert_eq!(redex_positions(&t), redex_positions(&t));
        prop_assert_eq!(normal_form(&t, 50), normal_form(&t, 50));
        let (g1, g2) = (reduction_graph(&t, 50, 10), reduction_graph(&t, 50, 10));
        prop_assert_eq!(g1.nodes, g2.nodes);
        prop_assert_eq!(g1.edges, g2.edges);
    }

    #[test]
    fn graph_edges_are_steps(t in arb_term()) {
        let g = reduction_graph(&t, 60, 10);
        for e in &g.edges {
            let next = step_at(&g.nodes[e.source], &e.position).unwrap();
            prop_assert!(alpha(&next, &g.nodes[e.target]));
        }
    }
}

#[test]
fn disjoint_beta_redexes_join() {
    let vars = vars();
    let mut seen = 0;
    for t in enumerate_terms(7, &vars) {
        let betas: Vec<_> = redex_positions(&t).into_iter().filter(|p| p.kind == RedexKind::Beta).collect();
        for (i, p) in betas.iter().enumerate() {
            for q in &betas[i + 1..] {
                if p.path.starts_with(&q.path) || q.path.starts_with(&p.path) {
                    continue;
                }
                seen += 1;
                let pq = step_at(&step_at(&t, p).unwrap(), q).unwrap();
                let qp = step_at(&step_at(&t, q).unwrap(), p).unwrap();
                assert!(joinable(&pq, &qp, 50), "{t}");
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn enumeration_is_deterministic() {
    let a: Vec<Term> = enumerate_terms(5, &vars()).collect();
    let b: Vec<Term> = enumerate_terms(5, &vars()).collect();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn globular(seed in any::<u64>(), d in 2usize..=3) {
        let ctx = ctx();
        let c = cell_from(seed, d);
        let (s, t) = boundary(&c, &ctx).unwrap();
        prop_assert!(cell_alpha_eq(&src(&s, &ctx).unwrap(), &src(&t, &ctx).unwrap()));
        prop_assert!(cell_alpha_eq(&tgt(&s, &ctx).unwrap(), &tgt(&t, &ctx).unwrap()));
    }

    #[test]
    fn inverse_involution_and_degeneracy(seed in any::<u64>(), d in 1usize..=3) {
        let ctx = ctx();
        let c = cell_from(seed, d);
        let ii = Cell::inv(Cell::inv(c.clone()));
        prop_assert!(cell_alpha_eq(&src(&ii, &ctx).unwrap(), &src(&c, &ctx).unwrap()));
        prop_assert!(cell_alpha_eq(&tgt(&ii, &ctx).unwrap(), &tgt(&c, &ctx).unwrap()));
        let dg = Cell::degen(c.clone());
        prop_assert_eq!(boundary(&dg, &ctx).unwrap(), (c.clone(), c.clone()));
        prop_assert_eq!(dim(&dg, &ctx).unwrap(), d + 1);
    }

    #[test]
    fn checker_is_deterministic(seed in any::<u64>(), d in 1usize..=3) {
        let ctx = ctx();
        let c = cell_from(seed, d);
        let v = well_formed(&c, &ctx);
        prop_assert!(v.is_ok(), "{}: {}", c, v);
        prop_assert_eq!(v, well_formed(&c, &ctx));
        // an ill-formed composite gets a deterministic verdict too
        let bad = Cell::concat(c.clone(), Cell::refl(Cell::Base(Term::Var(name("zz")))));
        prop_assert_eq!(well_formed(&bad, &ctx), well_formed(&bad, &ctx));
    }

    #[test]
    fn cell_round_trip(seed in any::<u64>(), d in 1usize..=3) {
        let ctx = ctx();
        let c = cell_from(seed, d);
        let back = parse_cell(&print_cell(&c), &ctx).unwrap();
        prop_assert!(cell_alpha_eq(&back, &c));
    }

    #[test]
    fn path_subst_ends(p in arb_term(), seed in any::<u64>()) {
        let ctx = ctx();
        let m = cell_from(seed, 1);
        let x = name("x");
        let out = path_subst(&Cell::Base(p.clone()), &x, &m, &ctx).unwrap();
        for source in [true, false] {
            let Cell::Base(n) = iterate(&m, 1, source) else { unreachable!() };
            let Cell::Base(end) = iterate(&out, 1, source) else { panic!("{out}") };
            prop_assert_eq!(db(&end), oracle_subst(&p, &x, &n));
        }
    }

    #[test]
    fn term_beta_target(t in arb_term(), x in arb_name(), n in arb_term()) {
        let ctx = Context::new();
        let redex = Term::App(Box::new(Term::Abs(x.clone(), Box::new(t.clone()))), Box::new(n.clone()));
        let step = beta_contract(&Cell::Base(redex), &ctx).unwrap();
        let Cell::Base(end) = tgt(&step, &ctx).unwrap() else { panic!() };
        prop_assert_eq!(db(&end), oracle_subst(&t, &x, &n));
    }

    #[test]
    fn contractions_are_sound(seed in any::<u64>(), d in 1usize..=2) {
        let ctx = ctx();
        let c = cell_from(seed, d);
        let lam = Cell::Base(parse_term("\\x. x y x").unwrap());
        let z = hleq_core::cells::elaborate(&Cell::App(Box::new(lam), Box::new(c.clone())), &ctx).unwrap();
        let b = beta_contract(&z, &ctx).unwrap();
        prop_assert!(well_formed(&b, &ctx).is_ok());
        let e = eta_contract(&c, &name("k"), None, &ctx).unwrap();
        prop_assert!(well_formed(&e, &ctx).is_ok());
        prop_assert_eq!(dim(&e, &ctx).unwrap(), d + 1);
    }

    #[test]
    fn canonicalize_keeps_boundary(seed in any::<u64>(), d in 1usize..=3) {
        let ctx = ctx();
        let c = cell_from(seed, d);
        let k = canonicalize(&c, &ctx);
        prop_assert!(well_formed(&k, &ctx).is_ok(), "{}", k);
        let (s1, t1) = boundary(&c, &ctx).unwrap();
        let (s2, t2) = boundary(&k, &ctx).unwrap();
        prop_assert!(cell_alpha_eq(&s1, &s2), "{} vs {}", s1, s2);
        prop_assert!(cell_alpha_eq(&t1, &t2), "{} vs {}", t1, t2);
        prop_assert_eq!(canonicalize(&k, &ctx), k);
    }

    #[test]
    fn search_is_sound_and_deterministic(s1 in any::<u64>(), s2 in any::<u64>()) {
        let ctx = ctx();
        let a = cell_from(s1, 1);
        let mut rng = StdRng::seed_from_u64(s2);
        // a parallel partner: the same ends, possibly a different route
        let b = match s2 % 3 {
            0 => canonicalize(&a, &ctx),
            1 => Cell::concat(a.clone(), Cell::concat(gen1(&mut rng, 0), Cell::inv(gen1(&mut rng, 0)))),
            _ => Cell::concat(Cell::concat(a.clone(), Cell::inv(a.clone())), a.clone()),
        };
        prop_assume!(well_formed(&b, &ctx).is_ok());
        let r1 = search_filler(&a, &b, &ctx, 2, 30).unwrap();
        let r2 = search_filler(&a, &b, &ctx, 2, 30).unwrap();
        prop_assert_eq!(&r1, &r2);
        if let Some(f) = r1.filler {
            prop_assert!(well_formed(&f, &ctx).is_ok());
            let (fs, ft) = boundary(&f, &ctx).unwrap();
            prop_assert!(cell_alpha_eq(&fs, &a));
            prop_assert_eq!(canonicalize(&ft, &ctx), canonicalize(&b, &ctx));
        }
    }

    #[test]
    fn witnesses_are_valid(m in arb_term(), n in arb_term()) {
        let ctx = Context::new();
        let conv = convertible(&m, &n, 60);
        for w in &conv.witnesses {
            prop_assert!(well_formed(w, &ctx).is_ok(), "{}", w);
            let (s, t) = boundary(w, &ctx).unwrap();
            prop_assert!(matches!(&s, Cell::Base(a) if alpha(a, &m)));
            prop_assert!(matches!(&t, Cell::Base(b) if alpha(b, &n)));
        }
    }
}

#[test]
fn beta_square_search_completes_at_depth_two() {
    let ctx = Context::new();
    let u = Term::Var(name("u"));
    let mut seen = 0;
    for t in enumerate_terms(5, &vars()) {
        for p in redex_positions(&t).into_iter().filter(|p| p.kind == RedexKind::Beta) {
            let tc = step_cell(&t, &p).unwrap();
            let (sq, filler) = build_beta_square(&u, &name("x"), &tc, &ctx).unwrap();
            let a = Cell::concat(sq.top, sq.right);
            let b = Cell::concat(sq.left, sq.bottom);
            let r = search_filler(&a, &b, &ctx, 2, 40).unwrap();
            assert!(r.found, "no filler for {tc}");
            let f = r.filler.unwrap();
            assert!(well_formed(&f, &ctx).is_ok());
            assert_eq!(dim(&f, &ctx).unwrap(), dim(&filler, &ctx).unwrap());
            seen += 1;
        }
    }
    assert!(seen > 100);
}
