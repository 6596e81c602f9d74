use std::fmt;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u32),
    Lam,
    Refl,
    Beta,
    Eta,
    As,
    Backslash,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    At,
    Bang,
    Tilde,
    Colon,
    InvMark,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "name `{s}`"),
            Tok::Int(n) => return write!(f, "integer `{n}`"),
            Tok::Lam => "`lam`",
            Tok::Refl => "`refl`",
            Tok::Beta => "`beta`",
            Tok::Eta => "`eta`",
            Tok::As => "`as`",
            Tok::Backslash => "`\\`",
            Tok::Dot => "`.`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Semi => "`;`",
            Tok::At => "`@`",
            Tok::Bang => "`!`",
            Tok::Tilde => "`~`",
            Tok::Colon => "`:`",
            Tok::InvMark => "`^-1`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let simple = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '\\' => Some(Tok::Backslash),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ';' => Some(Tok::Semi),
            '@' => Some(Tok::At),
            '!' => Some(Tok::Bang),
            '~' => Some(Tok::Tilde),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, line, col });
            i += 1;
            col += 1;
            continue;
        }
        if c == '^' {
            if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'1') {
                out.push(Token { tok: Tok::InvMark, line, col });
                i += 3;
                col += 3;
                continue;
            }
            return Err(ParseError::new(line, col, vec!["`^-1`".into()], "`^`".into()));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            // `lam1 r:(..)` spells a dimension right after the keyword
            if let Some(digits) = word.strip_prefix("lam").filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())) {
                let n = digits.parse().map_err(|_| {
                    ParseError::new(start_line, start_col, vec!["dimension".into()], format!("`{word}`"))
                })?;
                out.push(Token { tok: Tok::Lam, line: start_line, col: start_col });
                out.push(Token { tok: Tok::Int(n), line: start_line, col: start_col + 3 });
                continue;
            }
            let tok = match word.as_str() {
                "lam" => Tok::Lam,
                "refl" => Tok::Refl,
                "beta" => Tok::Beta,
                "eta" => Tok::Eta,
                "as" => Tok::As,
                _ => Tok::Ident(word),
            };
            out.push(Token { tok, line: start_line, col: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            let n = digits.parse().map_err(|_| {
                ParseError::new(start_line, start_col, vec!["dimension".into()], format!("`{digits}`"))
            })?;
            out.push(Token { tok: Tok::Int(n), line: start_line, col: start_col });
            continue;
        }
        return Err(ParseError::new(line, col, vec!["token".into()], format!("`{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Token cursor shared by the term and cell parsers.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Cursor, ParseError> {
        Ok(Cursor { toks: lex(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error(&self, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::new(
            t.line,
            t.col,
            expected.iter().map(|s| s.to_string()).collect(),
            t.tok.to_string(),
        )
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&[&tok.to_string()]))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["name"])),
        }
    }
}
