//! Recursive-descent parser for the concrete formula syntax.
//!
//! Precedence, loosest first: `->` / `<->` (right-assoc), `|`, `&`,
//! `U` / `R` (right-assoc), then the unary operators `!`, `X`, `N`, `F`, `G`.

use std::collections::BTreeSet;

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared atom `{name}` at line {line}, column {column}")]
    UndeclaredAtom {
        name: String,
        line: usize,
        column: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    WeakNext,
    Eventually,
    Always,
    Until,
    Release,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Next => "`X`".into(),
            Tok::WeakNext => "`N`".into(),
            Tok::Eventually => "`F`".into(),
            Tok::Always => "`G`".into(),
            Tok::Until => "`U`".into(),
            Tok::Release => "`R`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let mut push = |tok: Tok, width: usize, i: &mut usize, column: &mut usize| {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            *i += width;
            *column += width;
        };
        match c {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
            }
            c if c.is_whitespace() => {
                column += 1;
                i += 1;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            '!' | '~' => push(Tok::Not, 1, &mut i, &mut column),
            '&' => {
                let w = if chars.get(i + 1) == Some(&'&') { 2 } else { 1 };
                push(Tok::And, w, &mut i, &mut column)
            }
            '|' => {
                let w = if chars.get(i + 1) == Some(&'|') { 2 } else { 1 };
                push(Tok::Or, w, &mut i, &mut column)
            }
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Implies, 2, &mut i, &mut column),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Iff, 3, &mut i, &mut column)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let width = j - start;
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => {
                        // `X[!]` is accepted as an explicit strong next.
                        if chars.get(j) == Some(&'[')
                            && chars.get(j + 1) == Some(&'!')
                            && chars.get(j + 2) == Some(&']')
                        {
                            push(Tok::Next, width + 3, &mut i, &mut column);
                            continue;
                        }
                        Tok::Next
                    }
                    "N" | "WX" => Tok::WeakNext,
                    "F" => Tok::Eventually,
                    "G" => Tok::Always,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    _ => Tok::Ident(word),
                };
                push(tok, width, &mut i, &mut column);
            }
            other => return Err(syntax(tl, tc, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    alphabet: Option<&'a BTreeSet<String>>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    /// Parses the right operand of the binary operator `op`. A missing operand
    /// at end of input is reported at the operator itself.
    fn operand<F>(&mut self, op: &Token, parse: F) -> Result<Formula, ParseError>
    where
        F: FnOnce(&mut Self) -> Result<Formula, ParseError>,
    {
        if self.peek().tok == Tok::Eof {
            return Err(syntax(
                op.line,
                op.column,
                format!("missing right operand of {}", op.tok.describe()),
            ));
        }
        parse(self)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        match self.peek().tok {
            Tok::Implies => {
                let op = self.bump();
                let rhs = self.operand(&op, Self::implication)?;
                Ok(Formula::implies(lhs, rhs))
            }
            Tok::Iff => {
                let op = self.bump();
                let rhs = self.operand(&op, Self::implication)?;
                Ok(Formula::and(
                    Formula::implies(lhs.clone(), rhs.clone()),
                    Formula::implies(rhs, lhs),
                ))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek().tok == Tok::Or {
            let op = self.bump();
            let rhs = self.operand(&op, Self::conjunction)?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal()?;
        while self.peek().tok == Tok::And {
            let op = self.bump();
            let rhs = self.operand(&op, Self::temporal)?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek().tok {
            Tok::Until => {
                let op = self.bump();
                let rhs = self.operand(&op, Self::temporal)?;
                Ok(Formula::until(lhs, rhs))
            }
            Tok::Release => {
                let op = self.bump();
                let rhs = self.operand(&op, Self::temporal)?;
                Ok(Formula::release(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek().tok {
            Tok::Not => Formula::not,
            Tok::Next => Formula::next,
            Tok::WeakNext => Formula::weak_next,
            Tok::Eventually => Formula::eventually,
            Tok::Always => Formula::always,
            _ => return self.primary(),
        };
        let op = self.bump();
        let inner = self.operand(&op, Self::unary)?;
        Ok(wrap(inner))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(name) => {
                if let Some(alphabet) = self.alphabet {
                    if !alphabet.contains(&name) {
                        return Err(ParseError::UndeclaredAtom {
                            name,
                            line: t.line,
                            column: t.column,
                        });
                    }
                }
                Ok(Formula::Atom(name))
            }
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::LParen => {
                let inner = self.implication()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(syntax(
                        close.line,
                        close.column,
                        format!("expected `)`, found {}", close.tok.describe()),
                    ));
                }
                Ok(inner)
            }
            other => Err(syntax(
                t.line,
                t.column,
                format!("expected a formula, found {}", other.describe()),
            )),
        }
    }
}

fn parse_with(text: &str, alphabet: Option<&BTreeSet<String>>) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        alphabet,
    };
    let f = p.implication()?;
    let rest = p.peek();
    if rest.tok != Tok::Eof {
        return Err(syntax(
            rest.line,
            rest.column,
            format!("unexpected {}", rest.tok.describe()),
        ));
    }
    Ok(f)
}

/// Parses `text`, requiring every atom to be declared in `alphabet`.
pub fn parse(text: &str, alphabet: &BTreeSet<String>) -> Result<Formula, ParseError> {
    parse_with(text, Some(alphabet))
}

/// Parses `text` accepting any identifier as an atom.
pub fn parse_unchecked(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as F;

    fn ab() -> BTreeSet<String> {
        ["a", "b", "c"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(parse("F(a)", &ab()).unwrap(), F::eventually(F::atom("a")));
        assert_eq!(
            parse("a U (b & X c)", &ab()).unwrap(),
            F::until(
                F::atom("a"),
                F::and(F::atom("b"), F::next(F::atom("c")))
            )
        );
    }

    #[test]
    fn trailing_operator_is_reported_at_the_operator() {
        match parse("F a &", &ab()) {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undeclared_atom_is_named() {
        match parse("a & zz", &ab()) {
            Err(ParseError::UndeclaredAtom { name, column, .. }) => {
                assert_eq!(name, "zz");
                assert_eq!(column, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // unary binds tighter than binary
        assert_eq!(
            parse_unchecked("!a & b").unwrap(),
            F::and(F::not(F::atom("a")), F::atom("b"))
        );
        // U is right-associative
        assert_eq!(
            parse_unchecked("a U b U c").unwrap(),
            F::until(F::atom("a"), F::until(F::atom("b"), F::atom("c")))
        );
        // & binds looser than U
        assert_eq!(
            parse_unchecked("a & b U c").unwrap(),
            F::and(F::atom("a"), F::until(F::atom("b"), F::atom("c")))
        );
        // -> is right-associative and loosest
        assert_eq!(
            parse_unchecked("a -> b -> c | a").unwrap(),
            F::implies(
                F::atom("a"),
                F::implies(F::atom("b"), F::or(F::atom("c"), F::atom("a")))
            )
        );
        assert_eq!(
            parse_unchecked("a && b || X[!] c").unwrap(),
            F::or(F::and(F::atom("a"), F::atom("b")), F::next(F::atom("c")))
        );
    }

    #[test]
    fn multi_line_positions() {
        match parse_unchecked("a &\n  ) ") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_unchecked("a $ b").is_err());
        assert!(parse_unchecked("(a & b").is_err());
        assert!(parse_unchecked("a b").is_err());
        assert!(parse_unchecked("").is_err());
    }
}
