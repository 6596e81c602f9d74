//! One-step β/η reduction on terms, leftmost-outermost normalization and a
//! bounded reduction-graph oracle.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::KernelError;
use crate::syntax::{fresh_var, name, subst, Name, Term, TermKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Fun,
    Arg,
    Body,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RedexKind {
    Beta,
    Eta,
}

/// Address of a β- or η-redex inside a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RedexPosition {
    pub path: Vec<Step>,
    pub kind: RedexKind,
}

impl RedexPosition {
    pub fn beta(path: &[Step]) -> Self {
        RedexPosition { path: path.to_vec(), kind: RedexKind::Beta }
    }

    pub fn eta(path: &[Step]) -> Self {
        RedexPosition { path: path.to_vec(), kind: RedexKind::Eta }
    }
}

impl fmt::Display for RedexPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            RedexKind::Beta => "beta",
            RedexKind::Eta => "eta",
        };
        write!(f, "{kind}@")?;
        if self.path.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<&str> = self
            .path
            .iter()
            .map(|s| match s {
                Step::Fun => "fun",
                Step::Arg => "arg",
                Step::Body => "body",
            })
            .collect();
        f.write_str(&parts.join("."))
    }
}

pub fn is_beta_redex(t: &Term) -> bool {
    matches!(t, Term::App(f, _) if matches!(**f, Term::Abs(..)))
}

/// `\x. M x` with `x` not free in `M`; returns `M`.
pub fn eta_body(t: &Term) -> Option<&Term> {
    match t {
        Term::Abs(x, body) => match &**body {
            Term::App(m, a) if matches!(&**a, Term::Var(y) if y == x) && !m.has_free(x) => Some(m),
            _ => None,
        },
        _ => None,
    }
}

/// All redexes of `t` in leftmost-outermost order.
pub fn redex_positions(t: &Term) -> Vec<RedexPosition> {
    fn go(t: &Term, path: &mut Vec<Step>, out: &mut Vec<RedexPosition>) {
        if is_beta_redex(t) {
            out.push(RedexPosition::beta(path));
        }
        if eta_body(t).is_some() {
            out.push(RedexPosition::eta(path));
        }
        match t {
            Term::Var(_) => {}
            Term::App(f, a) => {
                path.push(Step::Fun);
                go(f, path, out);
                path.pop();
                path.push(Step::Arg);
                go(a, path, out);
                path.pop();
            }
            Term::Abs(_, b) => {
                path.push(Step::Body);
                go(b, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn subterm_at<'a>(t: &'a Term, path: &[Step]) -> Option<&'a Term> {
    let mut cur = t;
    for step in path {
        cur = match (step, cur) {
            (Step::Fun, Term::App(f, _)) => f,
            (Step::Arg, Term::App(_, a)) => a,
            (Step::Body, Term::Abs(_, b)) => b,
            _ => return None,
        };
    }
    Some(cur)
}

/// Contracts the redex at the root of `t`.
pub fn contract(t: &Term, kind: RedexKind) -> Result<Term, KernelError> {
    match kind {
        RedexKind::Beta => match t {
            Term::App(f, a) => match &**f {
                Term::Abs(x, body) => Ok(subst(body, x, a)),
                _ => Err(KernelError::InvalidPosition(format!("`{t}` is not a β-redex"))),
            },
            _ => Err(KernelError::InvalidPosition(format!("`{t}` is not a β-redex"))),
        },
        RedexKind::Eta => eta_body(t)
            .cloned()
            .ok_or_else(|| KernelError::InvalidPosition(format!("`{t}` is not an η-redex"))),
    }
}

/// Performs the reduction at `p`, leaving the rest of the term untouched.
pub fn step_at(t: &Term, p: &RedexPosition) -> Result<Term, KernelError> {
    fn go(t: &Term, path: &[Step], kind: RedexKind) -> Result<Term, KernelError> {
        let Some((first, rest)) = path.split_first() else {
            return contract(t, kind);
        };
        match (first, t) {
            (Step::Fun, Term::App(f, a)) => Ok(Term::app(go(f, rest, kind)?, (**a).clone())),
            (Step::Arg, Term::App(f, a)) => Ok(Term::app((**f).clone(), go(a, rest, kind)?)),
            (Step::Body, Term::Abs(x, b)) => Ok(Term::lam(x.clone(), go(b, rest, kind)?)),
            _ => Err(KernelError::InvalidPosition(format!("path step {first:?} does not fit `{t}`"))),
        }
    }
    go(t, &p.path, p.kind)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    Normal { term: Term, steps: usize },
    Diverged { last: Term, steps: usize },
}

impl NormalForm {
    pub fn term(&self) -> Option<&Term> {
        match self {
            NormalForm::Normal { term, .. } => Some(term),
            NormalForm::Diverged { .. } => None,
        }
    }
}

/// Reduces the leftmost-outermost redex until none is left or `max_steps`
/// reductions have been made.
pub fn normal_form(t: &Term, max_steps: usize) -> NormalForm {
    let (path, _) = reduction_sequence(t, max_steps);
    let steps = path.len();
    let last = path.last().map(|(_, t)| t.clone()).unwrap_or_else(|| t.clone());
    if redex_positions(&last).is_empty() {
        NormalForm::Normal { term: last, steps }
    } else {
        NormalForm::Diverged { last, steps }
    }
}

/// The leftmost-outermost reduction sequence from `t`, at most `max_steps`
/// long: each entry is the position reduced and the resulting term. The flag
/// is true when a normal form was reached.
pub fn reduction_sequence(t: &Term, max_steps: usize) -> (Vec<(RedexPosition, Term)>, bool) {
    let mut out = Vec::new();
    let mut cur = t.clone();
    loop {
        let Some(p) = redex_positions(&cur).into_iter().next() else {
            return (out, true);
        };
        if out.len() == max_steps {
            return (out, false);
        }
        cur = step_at(&cur, &p).expect("listed redex positions are valid");
        out.push((p, cur.clone()));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub position: RedexPosition,
    pub target: usize,
}

/// Finite piece of the one-step reduction relation, with nodes identified up to α.
#[derive(Clone, Debug)]
pub struct ReductionGraph {
    pub root: Term,
    pub nodes: Vec<Term>,
    pub edges: Vec<Edge>,
    pub truncated: bool,
    index: HashMap<TermKey, usize>,
}

impl ReductionGraph {
    pub fn node_of(&self, t: &Term) -> Option<usize> {
        self.index.get(&t.key()).copied()
    }

    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.source == node)
    }

    /// Nodes without redexes.
    pub fn terminals(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| redex_positions(&self.nodes[i]).is_empty())
            .collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = &TermKey> {
        self.index.keys()
    }
}

/// Breadth-first closure of `t` under one-step reduction. Stops expanding at
/// depth `max_depth` and never holds more than `max_nodes` nodes; either limit
/// taking effect sets `truncated`.
pub fn reduction_graph(t: &Term, max_nodes: usize, max_depth: usize) -> ReductionGraph {
    let mut g = ReductionGraph {
        root: t.clone(),
        nodes: vec![t.clone()],
        edges: Vec::new(),
        truncated: false,
        index: HashMap::from([(t.key(), 0)]),
    };
    let mut depth = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let positions = redex_positions(&g.nodes[i]);
        if positions.is_empty() {
            continue;
        }
        if depth[i] >= max_depth {
            g.truncated = true;
            continue;
        }
        for p in positions {
            let next = step_at(&g.nodes[i], &p).expect("listed redex positions are valid");
            let key = next.key();
            let j = match g.index.get(&key) {
                Some(&j) => j,
                None => {
                    if g.nodes.len() >= max_nodes {
                        g.truncated = true;
                        continue;
                    }
                    let j = g.nodes.len();
                    g.nodes.push(next);
                    g.index.insert(key, j);
                    depth.push(depth[i] + 1);
                    queue.push_back(j);
                    j
                }
            };
            g.edges.push(Edge { source: i, position: p, target: j });
        }
    }
    g
}

/// True iff the reduction graphs of `a` and `b`, both bounded by `budget`
/// nodes and depth, share an α-class.
pub fn joinable(a: &Term, b: &Term, budget: usize) -> bool {
    let ga = reduction_graph(a, budget, budget);
    let gb = reduction_graph(b, budget, budget);
    let shared = gb.keys().any(|k| ga.index.contains_key(k));
    shared
}

/// All α-classes of terms whose [`Term::size`] is at most `max_size`, free
/// variables drawn from `vars`, smallest first. No two results are α-equal.
pub fn enumerate_terms(max_size: usize, vars: &[Name]) -> impl Iterator<Item = Term> + '_ {
    let mut memo = HashMap::new();
    (1..=max_size).flat_map(move |n| {
        let keys = nameless_of_size(n, 0, vars.len(), &mut memo);
        keys.into_iter().map(|k| named(&k, vars, &mut Vec::new())).collect::<Vec<_>>()
    })
}

#[derive(Clone)]
enum Shape {
    Free(usize),
    Bound(usize),
    App(Box<Shape>, Box<Shape>),
    Abs(Box<Shape>),
}

fn nameless_of_size(
    n: usize,
    depth: usize,
    free: usize,
    memo: &mut HashMap<(usize, usize), Vec<Shape>>,
) -> Vec<Shape> {
    if let Some(v) = memo.get(&(n, depth)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.extend((0..free).map(Shape::Free));
        out.extend((0..depth).map(Shape::Bound));
    }
    if n >= 2 {
        for b in nameless_of_size(n - 1, depth + 1, free, memo) {
            out.push(Shape::Abs(Box::new(b)));
        }
        for left in 1..n {
            let fs = nameless_of_size(left, depth, free, memo);
            let xs = nameless_of_size(n - left, depth, free, memo);
            for f in &fs {
                for x in &xs {
                    out.push(Shape::App(Box::new(f.clone()), Box::new(x.clone())));
                }
            }
        }
    }
    memo.insert((n, depth), out.clone());
    out
}

fn named(s: &Shape, vars: &[Name], binders: &mut Vec<Name>) -> Term {
    match s {
        Shape::Free(i) => Term::Var(vars[*i].clone()),
        Shape::Bound(i) => Term::Var(binders[binders.len() - 1 - i].clone()),
        Shape::App(f, a) => Term::app(named(f, vars, binders), named(a, vars, binders)),
        Shape::Abs(b) => {
            let avoid: BTreeSet<Name> = vars.iter().chain(binders.iter()).cloned().collect();
            let x = fresh_var(&avoid, &name("y"));
            binders.push(x.clone());
            let body = named(b, vars, binders);
            binders.pop();
            Term::lam(x, body)
        }
    }
}
