//! Recursive-descent parser for the concrete syntax.
//!
//! Grammar (all binary connectives associate to the right; `~` binds
//! tighter than `&`, then `|`, `->`, `<->`; membership binds tighter than
//! any connective; a quantifier body extends as far right as possible):
//!
//! ```text
//! formula := imp ('<->' formula)?
//! imp     := or ('->' imp)?
//! or      := and ('|' or)?
//! and     := unary ('&' and)?
//! unary   := '~' unary | primary
//! primary := 'false' | 'true' | 'forall' v '.' formula
//!          | 'exists' v '.' formula | '(' formula ')'
//!          | term ('in' term)?
//! term    := v | '{' v '|' formula '}'
//! v       := ident (':' integer)?
//! ```
//!
//! A bare `term` is accepted only as the whole input. Level annotations
//! are required in `tst` mode, forbidden in `nf` mode, and optional
//! (defaulting to 0) in `raw` mode.

use thiserror::Error;

use crate::nominal::{Atom, Binder, Level, Var};
use crate::print::Mode;
use crate::surface::{Formula, Syntax, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: u32,
        col: u32,
        message: String,
    },
    #[error("{line}:{col}: {message}")]
    Mode {
        line: u32,
        col: u32,
        message: String,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Int(i64),
    KwFalse,
    KwTrue,
    KwForall,
    KwExists,
    KwIn,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Dot,
    Colon,
    LBrace,
    RBrace,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(n) => format!("identifier `{n}`"),
            Tok::Int(i) => format!("integer `{i}`"),
            Tok::KwFalse => "`false`".into(),
            Tok::KwTrue => "`true`".into(),
            Tok::KwForall => "`forall`".into(),
            Tok::KwExists => "`exists`".into(),
            Tok::KwIn => "`in`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '~' => {
                bump(&mut chars);
                Tok::Tilde
            }
            '&' => {
                bump(&mut chars);
                Tok::Amp
            }
            '|' => {
                bump(&mut chars);
                Tok::Pipe
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            ':' => {
                bump(&mut chars);
                Tok::Colon
            }
            '{' => {
                bump(&mut chars);
                Tok::LBrace
            }
            '}' => {
                bump(&mut chars);
                Tok::RBrace
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            '-' => {
                bump(&mut chars);
                match chars.peek() {
                    Some('>') => {
                        bump(&mut chars);
                        Tok::Arrow
                    }
                    Some(d) if d.is_ascii_digit() => {
                        let mut n = String::from("-");
                        while chars.peek().is_some_and(|d| d.is_ascii_digit()) {
                            n.push(bump(&mut chars));
                        }
                        Tok::Int(n.parse().unwrap())
                    }
                    _ => {
                        return Err(ParseError::Syntax {
                            line: tline,
                            col: tcol,
                            message: "expected `->` or a negative integer after `-`".into(),
                        })
                    }
                }
            }
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    if chars.peek() == Some(&'>') {
                        bump(&mut chars);
                        Tok::DArrow
                    } else {
                        return Err(ParseError::Syntax {
                            line: tline,
                            col: tcol,
                            message: "expected `<->`".into(),
                        });
                    }
                } else {
                    return Err(ParseError::Syntax {
                        line: tline,
                        col: tcol,
                        message: "expected `<->`".into(),
                    });
                }
            }
            d if d.is_ascii_digit() => {
                let mut n = String::new();
                while chars.peek().is_some_and(|d| d.is_ascii_digit()) {
                    n.push(bump(&mut chars));
                }
                Tok::Int(n.parse().unwrap())
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let mut n = String::new();
                while chars
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '\'')
                {
                    n.push(bump(&mut chars));
                }
                match n.as_str() {
                    "false" => Tok::KwFalse,
                    "true" => Tok::KwTrue,
                    "forall" => Tok::KwForall,
                    "exists" => Tok::KwExists,
                    "in" => Tok::KwIn,
                    _ => Tok::Ident(n),
                }
            }
            other => {
                return Err(ParseError::Syntax {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Token {
            tok,
            line: tline,
            col: tcol,
        });
    }
    Ok(out)
}

/// Parse a whole input as a formula or (when the input is exactly one
/// term) a term.
pub fn parse(src: &str, mode: Mode) -> Result<Syntax, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser {
        tokens,
        at: 0,
        mode,
        scope: Vec::new(),
    };
    let ft = p.formula_or_term()?;
    p.expect_eof()?;
    Ok(match ft {
        Ft::Formula(f) => Syntax::Formula(f),
        Ft::Term(t) => Syntax::Term(t),
    })
}

pub fn parse_formula(src: &str, mode: Mode) -> Result<Formula, ParseError> {
    match parse(src, mode)? {
        Syntax::Formula(f) => Ok(f),
        Syntax::Term(_) => Err(ParseError::Syntax {
            line: 1,
            col: 1,
            message: "expected a formula, found a bare term".into(),
        }),
    }
}

enum Ft {
    Formula(Formula),
    Term(Term),
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    mode: Mode,
    scope: Vec<(String, Level)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.at).map(|t| &t.tok)
    }

    fn here(&self) -> (u32, u32) {
        match self.tokens.get(self.at) {
            Some(t) => (t.line, t.col),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn mode_fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Mode {
            line,
            col,
            message: message.into(),
        })
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.at).map(|t| t.tok.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(t) => t.describe(),
                None => "end of input".into(),
            };
            self.fail(format!("expected {}, found {}", tok.describe(), found))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.at == self.tokens.len() {
            Ok(())
        } else {
            let found = self.peek().unwrap().describe();
            self.fail(format!("expected end of input, found {found}"))
        }
    }

    fn formula_or_term(&mut self) -> Result<Ft, ParseError> {
        self.iff()
    }

    fn need_formula(&mut self, ft: Ft, ctx: &str) -> Result<Formula, ParseError> {
        match ft {
            Ft::Formula(f) => Ok(f),
            Ft::Term(_) => self.fail(format!("expected a formula {ctx}, found a bare term")),
        }
    }

    fn iff(&mut self) -> Result<Ft, ParseError> {
        let left = self.imp()?;
        if self.eat(&Tok::DArrow) {
            let l = self.need_formula(left, "left of `<->`")?;
            let right = self.iff()?;
            let r = self.need_formula(right, "right of `<->`")?;
            return Ok(Ft::Formula(Formula::iff(l, r)));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Ft, ParseError> {
        let left = self.or()?;
        if self.eat(&Tok::Arrow) {
            let l = self.need_formula(left, "left of `->`")?;
            let right = self.imp()?;
            let r = self.need_formula(right, "right of `->`")?;
            return Ok(Ft::Formula(Formula::imp(l, r)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Ft, ParseError> {
        let left = self.and()?;
        if self.eat(&Tok::Pipe) {
            let l = self.need_formula(left, "left of `|`")?;
            let right = self.or()?;
            let r = self.need_formula(right, "right of `|`")?;
            return Ok(Ft::Formula(Formula::or(l, r)));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Ft, ParseError> {
        let left = self.unary()?;
        if self.eat(&Tok::Amp) {
            let l = self.need_formula(left, "left of `&`")?;
            let right = self.and()?;
            let r = self.need_formula(right, "right of `&`")?;
            return Ok(Ft::Formula(Formula::conj(l, r)));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Ft, ParseError> {
        if self.eat(&Tok::Tilde) {
            let inner = self.unary()?;
            let f = self.need_formula(inner, "after `~`")?;
            return Ok(Ft::Formula(Formula::neg(f)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Ft, ParseError> {
        match self.peek() {
            Some(Tok::KwFalse) => {
                self.at += 1;
                Ok(Ft::Formula(Formula::Bot))
            }
            Some(Tok::KwTrue) => {
                self.at += 1;
                Ok(Ft::Formula(Formula::top()))
            }
            Some(Tok::KwForall) => {
                self.at += 1;
                let f = self.quantified(false)?;
                Ok(Ft::Formula(f))
            }
            Some(Tok::KwExists) => {
                self.at += 1;
                let f = self.quantified(true)?;
                Ok(Ft::Formula(f))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.formula_or_term()?;
                let f = self.need_formula(inner, "inside parentheses")?;
                self.expect(Tok::RParen)?;
                Ok(Ft::Formula(f))
            }
            Some(Tok::Ident(_)) | Some(Tok::LBrace) => {
                let t = self.term()?;
                if self.eat(&Tok::KwIn) {
                    let s = self.term()?;
                    Ok(Ft::Formula(Formula::In(t, s)))
                } else {
                    Ok(Ft::Term(t))
                }
            }
            Some(other) => {
                let found = other.describe();
                self.fail(format!("expected a formula or term, found {found}"))
            }
            None => self.fail("expected a formula or term, found end of input"),
        }
    }

    fn quantified(&mut self, existential: bool) -> Result<Formula, ParseError> {
        let (name, level) = self.binder_var()?;
        self.expect(Tok::Dot)?;
        self.scope.push((name.clone(), level));
        let body = self.formula_or_term();
        self.scope.pop();
        let body = self.need_formula(body?, "as a quantifier body")?;
        let binder = Binder::from_atom(&Atom::named(&name, level));
        let all = Formula::All(binder, Box::new(body));
        Ok(if existential {
            // ∃a.φ = ¬∀a.¬φ; the negation sits inside the binder.
            let Formula::All(b, body) = all else {
                unreachable!()
            };
            Formula::neg(Formula::All(b, Box::new(Formula::neg(*body))))
        } else {
            all
        })
    }

    /// A binder variable, with annotation rules per mode.
    fn binder_var(&mut self) -> Result<(String, Level), ParseError> {
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return self.fail("expected a variable");
        };
        self.at += 1;
        let level = self.level_annotation()?;
        let level = match (self.mode, level) {
            (Mode::Tst, Some(l)) => l,
            (Mode::Tst, None) => {
                return self.mode_fail(format!(
                    "variable `{name}` needs a level annotation in tst mode"
                ))
            }
            (Mode::Nf, None) => 0,
            (Mode::Nf, Some(_)) => {
                return self.mode_fail(format!(
                    "variable `{name}` must not carry a level annotation in nf mode"
                ))
            }
            (Mode::Raw, l) => l.unwrap_or(0),
        };
        Ok((name, level))
    }

    fn level_annotation(&mut self) -> Result<Option<Level>, ParseError> {
        if !self.eat(&Tok::Colon) {
            return Ok(None);
        }
        match self.advance() {
            Some(Tok::Int(i)) => Ok(Some(i)),
            _ => {
                self.at -= 1;
                self.fail("expected an integer level after `:`")
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.at += 1;
                let annotation = self.level_annotation()?;
                self.occurrence(name, annotation)
            }
            Some(Tok::LBrace) => {
                self.at += 1;
                let (name, level) = self.binder_var()?;
                self.expect(Tok::Pipe)?;
                self.scope.push((name.clone(), level));
                let body = self.formula_or_term();
                self.scope.pop();
                let body = self.need_formula(body?, "as a comprehension body")?;
                self.expect(Tok::RBrace)?;
                let binder = Binder::from_atom(&Atom::named(&name, level));
                Ok(Term::Comp(binder, Box::new(body)))
            }
            _ => self.fail("expected a term"),
        }
    }

    /// Resolve a variable occurrence against the scope stack.
    fn occurrence(&mut self, name: String, annotation: Option<Level>) -> Result<Term, ParseError> {
        let annotation = match (self.mode, annotation) {
            (Mode::Tst, Some(l)) => Some(l),
            (Mode::Tst, None) => {
                return self.mode_fail(format!(
                    "variable `{name}` needs a level annotation in tst mode"
                ))
            }
            (Mode::Nf, None) => None,
            (Mode::Nf, Some(_)) => {
                return self.mode_fail(format!(
                    "variable `{name}` must not carry a level annotation in nf mode"
                ))
            }
            (Mode::Raw, l) => l,
        };
        // Innermost matching binder: by name, and by level too when an
        // annotation is present.
        let hit = self
            .scope
            .iter()
            .rev()
            .position(|(n, l)| *n == name && annotation.is_none_or(|a| a == *l));
        if let Some(k) = hit {
            return Ok(Term::Var(Var::Bound(k as u32)));
        }
        let level = annotation.unwrap_or(0);
        Ok(Term::var(&Atom::named(&name, level)))
    }
}
