use std::collections::{HashMap, HashSet, VecDeque};

use crate::cells::Cell;
use crate::error::KernelError;
use crate::reduction::{
    normal_form, reduction_graph, reduction_sequence, redex_positions, step_at, NormalForm, RedexKind, RedexPosition,
    ReductionGraph, Step,
};
use crate::syntax::{alpha_eq, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convertibility {
    Convertible,
    NotConvertible,
    /// The budget ran out before a decision.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conversion {
    pub verdict: Convertibility,
    /// 1-cells from `M` to `N`, pairwise distinct up to α.
    pub witnesses: Vec<Cell>,
}

/// The 1-cell contracting the redex of `t` at `p`, wrapped in the
/// surrounding term.
pub fn step_cell(t: &Term, p: &RedexPosition) -> Result<Cell, KernelError> {
    fn go(t: &Term, path: &[Step], kind: RedexKind) -> Result<Cell, KernelError> {
        let bad = || KernelError::InvalidPosition(format!("{t}"));
        match (path.first(), t) {
            (None, _) => match kind {
                RedexKind::Beta => match t {
                    Term::App(f, _) if matches!(**f, Term::Abs(..)) => Ok(Cell::beta(Cell::Base(t.clone()))),
                    _ => Err(KernelError::NotARedex(t.to_string())),
                },
                RedexKind::Eta => match crate::reduction::eta_body(t) {
                    Some(e) => {
                        let Term::Abs(x, _) = t else { unreachable!() };
                        Ok(Cell::eta(Cell::Base(e.clone()), x.clone()))
                    }
                    None => Err(KernelError::NotARedex(t.to_string())),
                },
            },
            (Some(Step::Fun), Term::App(f, a)) => Ok(Cell::App(
                Box::new(go(f, &path[1..], kind)?),
                Box::new(Cell::degen(Cell::Base((**a).clone()))),
            )),
            (Some(Step::Arg), Term::App(f, a)) => Ok(Cell::App(
                Box::new(Cell::degen(Cell::Base((**f).clone()))),
                Box::new(go(a, &path[1..], kind)?),
            )),
            (Some(Step::Body), Term::Abs(x, b)) => Ok(Cell::Abs {
                binder: x.clone(),
                decl: None,
                body: Box::new(go(b, &path[1..], kind)?),
                ann: None,
            }),
            _ => Err(bad()),
        }
    }
    go(t, &p.path, p.kind)
}

fn chain(steps: Vec<Cell>) -> Option<Cell> {
    steps.into_iter().reduce(Cell::concat)
}

/// Forward steps along `seq` starting at `t`.
fn forward(t: &Term, seq: &[(RedexPosition, Term)]) -> Vec<Cell> {
    let mut cur = t;
    let mut out = Vec::new();
    for (p, next) in seq {
        out.push(step_cell(cur, p).expect("reduction positions are valid"));
        cur = next;
    }
    out
}

fn witness(m_steps: Vec<Cell>, n_steps: Vec<Cell>, m: &Term) -> Cell {
    let back = n_steps.into_iter().rev().map(Cell::inv);
    chain(m_steps.into_iter().chain(back).collect()).unwrap_or_else(|| Cell::refl(Cell::Base(m.clone())))
}

/// Decides whether `m` and `n` are βη-convertible by comparing normal forms
/// reached within `budget` steps, falling back to bounded reduction graphs
/// when one side does not normalize. One witness is produced per distinct
/// first step out of `m`.
pub fn convertible(m: &Term, n: &Term, budget: usize) -> Conversion {
    let (nf_m, nf_n) = (normal_form(m, budget), normal_form(n, budget));
    match (&nf_m, &nf_n) {
        (NormalForm::Normal { term: a, .. }, NormalForm::Normal { term: b, .. }) => {
            if !alpha_eq(a, b) {
                return Conversion { verdict: Convertibility::NotConvertible, witnesses: Vec::new() };
            }
            let n_steps = forward(n, &reduction_sequence(n, budget).0);
            let mut seen = HashSet::new();
            let mut witnesses = Vec::new();
            let mut firsts: Vec<Option<RedexPosition>> = redex_positions(m).into_iter().map(Some).collect();
            if firsts.is_empty() {
                firsts.push(None);
            }
            for first in firsts {
                let mut steps = Vec::new();
                let mut start = m.clone();
                if let Some(p) = &first {
                    steps.push(step_cell(m, p).expect("listed redex positions are valid"));
                    start = step_at(m, p).expect("listed redex positions are valid");
                }
                let (seq, done) = reduction_sequence(&start, budget);
                if !done {
                    continue;
                }
                steps.extend(forward(&start, &seq));
                let w = witness(steps, n_steps.clone(), m);
                if seen.insert(w.key()) {
                    witnesses.push(w);
                }
            }
            Conversion { verdict: Convertibility::Convertible, witnesses }
        }
        _ => match joined_witness(m, n, budget) {
            Some(w) => Conversion { verdict: Convertibility::Convertible, witnesses: vec![w] },
            None => Conversion { verdict: Convertibility::Unknown, witnesses: Vec::new() },
        },
    }
}

/// Steps from the root of `g` to `node` along a shortest path.
fn path_to(g: &ReductionGraph, node: usize) -> Vec<Cell> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([0usize]);
    let mut seen = HashSet::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (ei, e) in g.edges.iter().enumerate().filter(|(_, e)| e.source == i) {
            if seen.insert(e.target) {
                parent.insert(e.target, ei);
                queue.push_back(e.target);
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = node;
    while let Some(&ei) = parent.get(&cur) {
        let e = &g.edges[ei];
        out.push(step_cell(&g.nodes[e.source], &e.position).expect("graph edges are valid"));
        cur = e.source;
    }
    out.reverse();
    out
}

fn joined_witness(m: &Term, n: &Term, budget: usize) -> Option<Cell> {
    let ga = reduction_graph(m, budget, budget);
    let gb = reduction_graph(n, budget, budget);
    let (ia, ib) = (0..gb.nodes.len()).find_map(|j| ga.node_of(&gb.nodes[j]).map(|i| (i, j)))?;
    Some(witness(path_to(&ga, ia), path_to(&gb, ib), m))
}
