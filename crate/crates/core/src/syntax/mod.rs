//! Dimension-0 syntax: untyped λ-terms, α-equivalence, substitution and the
//! concrete text format.

pub(crate) mod lexer;
mod term;

pub use term::{alpha_eq, fresh_var, free_vars, name, subst, Name, Term, TermKey, KEYWORDS};

use crate::error::ParseError;
use lexer::{Cursor, Tok};

/// Parses `term := abs | appseq`. Application associates to the left and an
/// abstraction body extends as far right as possible.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = term(&mut cur)?;
    if *cur.peek() != Tok::Eof {
        return Err(cur.error(&["name", "`(`", "end of input"]));
    }
    Ok(t)
}

fn term(cur: &mut Cursor) -> Result<Term, ParseError> {
    match cur.peek() {
        Tok::Backslash | Tok::Lam => {
            cur.bump();
            let x = cur.ident()?;
            cur.expect(Tok::Dot)?;
            let body = term(cur)?;
            Ok(Term::lam(Name::new(&x).expect("lexer yields identifiers"), body))
        }
        _ => {
            let mut acc = atom(cur)?;
            while matches!(cur.peek(), Tok::Ident(_) | Tok::LParen) {
                acc = Term::app(acc, atom(cur)?);
            }
            Ok(acc)
        }
    }
}

fn atom(cur: &mut Cursor) -> Result<Term, ParseError> {
    match cur.peek().clone() {
        Tok::Ident(x) => {
            cur.bump();
            Ok(Term::Var(Name::new(&x).expect("lexer yields identifiers")))
        }
        Tok::LParen => {
            cur.bump();
            let t = term(cur)?;
            cur.expect(Tok::RParen)?;
            Ok(t)
        }
        _ => Err(cur.error(&["name", "`(`", "`\\`", "`lam`"])),
    }
}

/// Prints with minimal parentheses, using `\x. body` for abstraction.
pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

pub(crate) fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x.as_str()),
        Term::Abs(x, b) => {
            out.push('\\');
            out.push_str(x.as_str());
            out.push_str(". ");
            write_term(b, out);
        }
        Term::App(f, a) => {
            write_operand(f, out, matches!(**f, Term::Abs(..)));
            out.push(' ');
            write_operand(a, out, !matches!(**a, Term::Var(_)));
        }
    }
}

fn write_operand(t: &Term, out: &mut String, parens: bool) {
    if parens {
        out.push('(');
    }
    write_term(t, out);
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_term("\\x. x").unwrap(), Term::abs("x", Term::var("x")));
        assert_eq!(
            parse_term("(\\x. u) ((\\y. v) z)").unwrap(),
            Term::app(
                Term::abs("x", Term::var("u")),
                Term::app(Term::abs("y", Term::var("v")), Term::var("z"))
            )
        );
        assert_eq!(
            parse_term("a b c").unwrap(),
            Term::app(Term::app(Term::var("a"), Term::var("b")), Term::var("c"))
        );
        assert_eq!(parse_term("lam x. x # identity\n").unwrap(), parse_term("\\x. x").unwrap());
        assert_eq!(
            parse_term("\\x. a b").unwrap(),
            Term::abs("x", Term::app(Term::var("a"), Term::var("b")))
        );
    }

    #[test]
    fn parse_errors_carry_position_and_expectations() {
        let e = parse_term("(\\x. x").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
        assert!(e.expected.iter().any(|s| s.contains(')')));
        let e = parse_term("a\n  .").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(parse_term("\\1. x").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_term("beta").is_err());
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_term(&Term::abs("x", Term::var("x"))), "\\x. x");
        let beta_eta = Term::app(Term::abs("z", Term::app(Term::var("x"), Term::var("z"))), Term::var("y"));
        assert_eq!(print_term(&beta_eta), "(\\z. x z) y");
        assert_eq!(print_term(&Term::app(Term::var("z"), Term::var("v"))), "z v");
        assert_eq!(print_term(&parse_term("a (b c)").unwrap()), "a (b c)");
        assert_eq!(print_term(&parse_term("a (\\x. x)").unwrap()), "a (\\x. x)");
        assert_eq!(print_term(&parse_term("(a (\\x. x)) b").unwrap()), "a (\\x. x) b");
    }
}
