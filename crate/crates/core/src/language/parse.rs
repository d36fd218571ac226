use crate::error::{Error, ParseErrorKind, Result};

use super::signature::{is_ident_continue, is_ident_start};
use super::{Formula, Language, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Open,
    Close,
    Ident(&'a str),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next token and its byte offset.
    fn next(&mut self) -> Result<Option<(usize, Token<'a>)>> {
        self.skip_ws();
        let start = self.pos;
        let mut chars = self.text[start..].chars();
        let Some(c) = chars.next() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.pos += 1;
                Ok(Some((start, Token::Open)))
            }
            ')' => {
                self.pos += 1;
                Ok(Some((start, Token::Close)))
            }
            c if is_ident_start(c) => {
                let len = self.text[start..]
                    .char_indices()
                    .find(|&(_, c)| !is_ident_continue(c))
                    .map_or(self.text.len() - start, |(i, _)| i);
                self.pos += len;
                Ok(Some((start, Token::Ident(&self.text[start..start + len]))))
            }
            other => Err(parse_err(
                start,
                ParseErrorKind::UnexpectedToken(other.to_string()),
            )),
        }
    }

    fn peek(&mut self) -> Result<Option<(usize, Token<'a>)>> {
        let saved = self.pos;
        let tok = self.next();
        self.pos = saved;
        tok
    }
}

fn parse_err(position: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { position, kind }
}

/// Reads one formula in prefix s-expression syntax.
///
/// An atom is a variable of `lang` or a nullary connective; a compound is
/// `(name arg1 … argk)` with `k` the arity of `name`. `(c)` is accepted for a
/// nullary `c`. Errors carry the byte offset of the offending token.
pub fn parse_formula(text: &str, lang: &Language) -> Result<Formula> {
    let mut lexer = Lexer { text, pos: 0 };
    let f = parse_at(&mut lexer, lang)?;
    match lexer.next()? {
        None => Ok(f),
        Some((pos, _)) => Err(parse_err(pos, ParseErrorKind::TrailingInput)),
    }
}

/// Comma-separated formulas, e.g. `p, (imp p q)`. Blank input is the empty list.
pub fn parse_formula_list(text: &str, lang: &Language) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    let mut lexer = Lexer { text, pos: 0 };
    lexer.skip_ws();
    if lexer.pos == text.len() {
        return Ok(out);
    }
    loop {
        out.push(parse_at(&mut lexer, lang)?);
        lexer.skip_ws();
        match text[lexer.pos..].chars().next() {
            None => return Ok(out),
            Some(',') => lexer.pos += 1,
            Some(_) => return Err(parse_err(lexer.pos, ParseErrorKind::TrailingInput)),
        }
    }
}

fn parse_at(lexer: &mut Lexer<'_>, lang: &Language) -> Result<Formula> {
    let sig = lang.signature();
    match lexer.next()? {
        None => Err(parse_err(lexer.pos, ParseErrorKind::UnexpectedEnd)),
        Some((pos, Token::Close)) => {
            Err(parse_err(pos, ParseErrorKind::UnexpectedToken(")".into())))
        }
        Some((pos, Token::Ident(name))) => match sig.arity(name) {
            Some(0) => Ok(Formula::constant(name)),
            Some(arity) => Err(parse_err(
                pos,
                ParseErrorKind::ConnectiveAsAtom {
                    connective: name.to_string(),
                    arity,
                },
            )),
            None => {
                let v = Var::new(name);
                if lang.contains_var(&v) {
                    Ok(Formula::Var(v))
                } else {
                    Err(parse_err(
                        pos,
                        ParseErrorKind::UnknownVariable(name.to_string()),
                    ))
                }
            }
        },
        Some((open_pos, Token::Open)) => {
            let (pos, name) = match lexer.next()? {
                Some((pos, Token::Ident(name))) => (pos, name),
                Some((pos, tok)) => {
                    let shown = if tok == Token::Open { "(" } else { ")" };
                    return Err(parse_err(
                        pos,
                        ParseErrorKind::UnexpectedToken(shown.into()),
                    ));
                }
                None => return Err(parse_err(lexer.pos, ParseErrorKind::UnexpectedEnd)),
            };
            let Some(arity) = sig.arity(name) else {
                return Err(parse_err(
                    pos,
                    ParseErrorKind::UnknownConnective(name.to_string()),
                ));
            };
            let mut args = Vec::with_capacity(arity);
            loop {
                match lexer.peek()? {
                    Some((_, Token::Close)) => {
                        lexer.next()?;
                        break;
                    }
                    Some(_) => args.push(parse_at(lexer, lang)?),
                    None => return Err(parse_err(lexer.pos, ParseErrorKind::UnexpectedEnd)),
                }
            }
            if args.len() != arity {
                return Err(parse_err(
                    open_pos,
                    ParseErrorKind::ArityMismatch {
                        connective: name.to_string(),
                        expected: arity,
                        found: args.len(),
                    },
                ));
            }
            Ok(Formula::app(name, args))
        }
    }
}
