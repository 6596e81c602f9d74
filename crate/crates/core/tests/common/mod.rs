//! Oracles and generators shared by the integration tests. The oracles use
//! de Bruijn indices so they share no code with the named kernel.
#![allow(dead_code)]

use std::sync::OnceLock;

use hleq_core::cells::{dim, elaborate, parse_cell, parse_context, src, tgt, Cell, Context};
use hleq_core::reduction::{enumerate_terms, redex_positions};
use hleq_core::syntax::{name, Name, Term};
use hleq_core::theory::step_cell;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Db {
    Free(String),
    Bound(usize),
    App(Box<Db>, Box<Db>),
    Abs(Box<Db>),
}

pub fn db(t: &Term) -> Db {
    fn go(t: &Term, env: &mut Vec<String>) -> Db {
        match t {
            Term::Var(x) => match env.iter().rev().position(|b| b == x.as_str()) {
                Some(i) => Db::Bound(i),
                None => Db::Free(x.as_str().to_string()),
            },
            Term::App(f, a) => Db::App(Box::new(go(f, env)), Box::new(go(a, env))),
            Term::Abs(x, b) => {
                env.push(x.as_str().to_string());
                let out = go(b, env);
                env.pop();
                Db::Abs(Box::new(out))
            }
        }
    }
    go(t, &mut Vec::new())
}

fn shift(t: &Db, by: isize, cutoff: usize) -> Db {
    match t {
        Db::Free(x) => Db::Free(x.clone()),
        Db::Bound(i) if *i >= cutoff => Db::Bound((*i as isize + by) as usize),
        Db::Bound(i) => Db::Bound(*i),
        Db::App(f, a) => Db::App(Box::new(shift(f, by, cutoff)), Box::new(shift(a, by, cutoff))),
        Db::Abs(b) => Db::Abs(Box::new(shift(b, by, cutoff + 1))),
    }
}

fn subst_idx(t: &Db, j: usize, s: &Db) -> Db {
    match t {
        Db::Free(x) => Db::Free(x.clone()),
        Db::Bound(i) if *i == j => s.clone(),
        Db::Bound(i) => Db::Bound(*i),
        Db::App(f, a) => Db::App(Box::new(subst_idx(f, j, s)), Box::new(subst_idx(a, j, s))),
        Db::Abs(b) => Db::Abs(Box::new(subst_idx(b, j + 1, &shift(s, 1, 0)))),
    }
}

/// `[arg/0] body` for the body of an abstraction.
pub fn db_beta(body: &Db, arg: &Db) -> Db {
    shift(&subst_idx(body, 0, &shift(arg, 1, 0)), -1, 0)
}

/// `[n/x] p` computed on de Bruijn terms.
pub fn oracle_subst(p: &Term, x: &Name, n: &Term) -> Db {
    let Db::Abs(body) = db(&Term::Abs(x.clone(), Box::new(p.clone()))) else { unreachable!() };
    db_beta(&body, &db(n))
}

pub fn alpha(a: &Term, b: &Term) -> bool {
    db(a) == db(b)
}

/// Fixed context used by the generated cells: endpoints `c`, `d` and a path `p`.
pub fn ctx() -> Context {
    parse_context("c : term-var\nd : term-var\np : (c ~ d)\n").unwrap()
}

pub fn vars() -> Vec<Name> {
    vec![name("x"), name("y")]
}

pub struct Pools {
    pub all: Vec<Term>,
    pub redexes: Vec<Term>,
    pub abstractions: Vec<Term>,
}

pub fn pools() -> &'static Pools {
    static P: OnceLock<Pools> = OnceLock::new();
    P.get_or_init(|| {
        let all: Vec<Term> = enumerate_terms(5, &vars()).collect();
        let redexes = all.iter().filter(|t| !redex_positions(t).is_empty()).cloned().collect();
        let abstractions = all.iter().filter(|t| matches!(t, Term::Abs(..))).cloned().collect();
        Pools { all, redexes, abstractions }
    })
}

/// Random term over a small alphabet, with shadowing.
pub fn random_term(rng: &mut StdRng, depth: usize) -> Term {
    const NAMES: [&str; 5] = ["x", "y", "z", "x1", "w"];
    let pick = |rng: &mut StdRng| name(NAMES[rng.gen_range(0..NAMES.len())]);
    if depth == 0 || rng.gen_bool(0.3) {
        return Term::Var(pick(rng));
    }
    if rng.gen_bool(0.5) {
        Term::App(Box::new(random_term(rng, depth - 1)), Box::new(random_term(rng, depth - 1)))
    } else {
        Term::Abs(pick(rng), Box::new(random_term(rng, depth - 1)))
    }
}

fn pick<'a>(rng: &mut StdRng, v: &'a [Term]) -> &'a Term {
    v.choose(rng).unwrap()
}

fn elab(c: Cell) -> Cell {
    elaborate(&c, &ctx()).unwrap()
}

fn app(a: Cell, b: Cell) -> Cell {
    elab(Cell::App(Box::new(a), Box::new(b)))
}

fn one_step(rng: &mut StdRng) -> Cell {
    let t = pick(rng, &pools().redexes);
    let ps = redex_positions(t);
    step_cell(t, ps.choose(rng).unwrap()).unwrap()
}

/// Random well-formed 1-cell.
pub fn gen1(rng: &mut StdRng, depth: usize) -> Cell {
    let ctx = ctx();
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..9) };
    match choice {
        0 | 1 => one_step(rng),
        2 => Cell::inv(gen1(rng, depth - 1)),
        3 => {
            let p = gen1(rng, depth - 1);
            let end = tgt(&p, &ctx).unwrap();
            match end.as_term().map(|t| (t.clone(), redex_positions(t))) {
                Some((t, ps)) if !ps.is_empty() => Cell::concat(p, step_cell(&t, ps.choose(rng).unwrap()).unwrap()),
                _ => Cell::concat(p, Cell::refl(end)),
            }
        }
        4 => {
            let f = Cell::Base(pick(rng, &pools().all).clone());
            if rng.gen_bool(0.5) {
                app(f, gen1(rng, depth - 1))
            } else {
                app(gen1(rng, depth - 1), f)
            }
        }
        5 => Cell::eta(Cell::Base(pick(rng, &pools().all).clone()), name("k")),
        6 => Cell::Abs { binder: name("x"), decl: None, body: Box::new(gen1(rng, depth - 1)), ann: None },
        7 => app(Cell::Base(pick(rng, &pools().all).clone()), Cell::PathVar(name("p"))),
        _ => Cell::refl(Cell::Base(pick(rng, &pools().all).clone())),
    }
}

/// Random well-formed 2-cell.
pub fn gen2(rng: &mut StdRng, depth: usize) -> Cell {
    let ctx = ctx();
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..9) };
    match choice {
        0 | 1 => {
            let lam = Cell::Base(pick(rng, &pools().abstractions).clone());
            Cell::beta(app(lam, gen1(rng, 2)))
        }
        2 => Cell::eta(gen1(rng, 2), name("k")),
        3 => {
            if rng.gen_bool(0.5) {
                Cell::refl(gen1(rng, 2))
            } else {
                Cell::degen(gen1(rng, 2))
            }
        }
        4 => Cell::inv(gen2(rng, depth - 1)),
        5 => {
            let s = gen2(rng, depth - 1);
            if rng.gen_bool(0.5) {
                let end = tgt(&s, &ctx).unwrap();
                Cell::concat(s, Cell::refl(end))
            } else {
                Cell::concat(s.clone(), Cell::inv(s))
            }
        }
        6 => app(Cell::Base(pick(rng, &pools().all).clone()), gen2(rng, depth - 1)),
        7 => {
            let s1 = gen1(rng, 1);
            parse_cell(&format!("beta[(lam1 r:(c ~ d). ({s1}) @ r) @ p]"), &ctx).unwrap()
        }
        _ => parse_cell(&format!("eta[r:(c ~ d)]({})", gen1(rng, 2)), &ctx).unwrap(),
    }
}

/// Random well-formed 3-cell.
pub fn gen3(rng: &mut StdRng) -> Cell {
    match rng.gen_range(0..5) {
        0 | 1 => {
            let lam = Cell::Base(pick(rng, &pools().abstractions).clone());
            Cell::beta(app(lam, gen2(rng, 1)))
        }
        2 => Cell::eta(gen2(rng, 1), name("k")),
        3 => Cell::refl(gen2(rng, 1)),
        _ => Cell::inv(gen3(rng)),
    }
}

pub fn gen_cell(rng: &mut StdRng, d: usize) -> Cell {
    let c = match d {
        1 => gen1(rng, 3),
        2 => gen2(rng, 2),
        _ => gen3(rng),
    };
    debug_assert_eq!(dim(&c, &ctx()).unwrap(), d);
    c
}

/// `src` or `tgt` applied `n` times.
pub fn iterate(c: &Cell, n: usize, source: bool) -> Cell {
    let ctx = ctx();
    let mut c = c.clone();
    for _ in 0..n {
        c = if source { src(&c, &ctx).unwrap() } else { tgt(&c, &ctx).unwrap() };
    }
    c
}
