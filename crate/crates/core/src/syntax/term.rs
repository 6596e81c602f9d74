use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// An identifier: `[A-Za-z_][A-Za-z0-9_]*`, not a reserved keyword.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

pub const KEYWORDS: &[&str] = &["lam", "refl", "beta", "eta", "as"];

impl Name {
    /// Builds a name, returning `None` if `text` is not a valid identifier.
    pub fn new(text: &str) -> Option<Name> {
        let dim_lam = text.strip_prefix("lam").is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
        if is_identifier(text) && !KEYWORDS.contains(&text) && !dim_lam {
            Some(Name(Arc::from(text)))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand for building names in code and tests. Panics on invalid input.
pub fn name(text: &str) -> Name {
    Name::new(text).unwrap_or_else(|| panic!("invalid identifier {text:?}"))
}

/// Untyped lambda term with named variables.
///
/// Equality via `==` is syntactic; use [`alpha_eq`] for the observational
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    App(Box<Term>, Box<Term>),
    Abs(Name, Box<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(name(x))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn abs(x: &str, body: Term) -> Term {
        Term::Abs(name(x), Box::new(body))
    }

    pub fn lam(x: Name, body: Term) -> Term {
        Term::Abs(x, Box::new(body))
    }

    /// Counts variable occurrences and abstractions; applications are free.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(f, a) => f.size() + a.size(),
            Term::Abs(_, b) => 1 + b.size(),
        }
    }

    /// Counts every node of the tree.
    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(f, a) => 1 + f.node_count() + a.node_count(),
            Term::Abs(_, b) => 1 + b.node_count(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x) {
                    out.insert(x.clone());
                }
            }
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Abs(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &Name) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::App(f, a) => f.has_free(x) || a.has_free(x),
            Term::Abs(y, b) => y != x && b.has_free(x),
        }
    }

    /// Every name that occurs anywhere, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
            Term::Abs(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
        }
    }

    /// Locally nameless key: two terms are α-equivalent iff their keys are equal.
    pub fn key(&self) -> TermKey {
        fn go(t: &Term, bound: &mut Vec<Name>) -> TermKey {
            match t {
                Term::Var(x) => match bound.iter().rev().position(|b| b == x) {
                    Some(i) => TermKey::Bound(i),
                    None => TermKey::Free(x.clone()),
                },
                Term::App(f, a) => TermKey::App(Box::new(go(f, bound)), Box::new(go(a, bound))),
                Term::Abs(x, b) => {
                    bound.push(x.clone());
                    let body = go(b, bound);
                    bound.pop();
                    TermKey::Abs(Box::new(body))
                }
            }
        }
        go(self, &mut Vec::new())
    }
}

/// Nameless rendering of a term, used as the α-class representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKey {
    Free(Name),
    Bound(usize),
    App(Box<TermKey>, Box<TermKey>),
    Abs(Box<TermKey>),
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

/// True iff `a` and `b` differ only in the names of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(a: &'a Term, b: &'a Term, env: &mut Vec<(&'a Name, &'a Name)>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                for (l, r) in env.iter().rev() {
                    if *l == x || *r == y {
                        return *l == x && *r == y;
                    }
                }
                x == y
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => go(f1, f2, env) && go(a1, a2, env),
            (Term::Abs(x, b1), Term::Abs(y, b2)) => {
                env.push((x, y));
                let ok = go(b1, b2, env);
                env.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    t.free_vars()
}

/// First of `hint`, `hint1`, `hint2`, ... that is not in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<Name>, hint: &Name) -> Name {
    if !avoid.contains(hint) {
        return hint.clone();
    }
    (1u64..)
        .map(|i| Name(Arc::from(format!("{}{}", hint.as_str(), i))))
        .find(|n| !avoid.contains(n))
        .expect("name space exhausted")
}

/// Capture-avoiding substitution `[value/x]body`.
pub fn subst(body: &Term, x: &Name, value: &Term) -> Term {
    let fv = value.free_vars();
    subst_with(body, x, value, &fv)
}

fn subst_with(body: &Term, x: &Name, value: &Term, fv: &BTreeSet<Name>) -> Term {
    match body {
        Term::Var(y) => {
            if y == x {
                value.clone()
            } else {
                body.clone()
            }
        }
        Term::App(f, a) => Term::app(subst_with(f, x, value, fv), subst_with(a, x, value, fv)),
        Term::Abs(y, b) => {
            if y == x || !b.has_free(x) {
                body.clone()
            } else if fv.contains(y) {
                let mut avoid = fv.clone();
                avoid.extend(b.free_vars());
                avoid.insert(x.clone());
                let y2 = fresh_var(&avoid, y);
                let renamed = subst_with(b, y, &Term::Var(y2.clone()), &BTreeSet::from([y2.clone()]));
                Term::lam(y2, subst_with(&renamed, x, value, fv))
            } else {
                Term::lam(y.clone(), subst_with(b, x, value, fv))
            }
        }
    }
}
