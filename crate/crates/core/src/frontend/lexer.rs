use std::fmt;

use super::FrontendError;

/// Line/column of a token, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Colon,
    Assign,
    Bang,
    AndAnd,
    OrOr,
    Arrow,
    Iff,
    Le,
    Lt,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    DotDot,
    SetMinus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Int(v) => return write!(f, "integer {v}"),
            Tok::Str(_) => "string",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Semi => "`;`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::Assign => "`=`",
            Tok::Bang => "`!`",
            Tok::AndAnd => "`&&`",
            Tok::OrOr => "`||`",
            Tok::Arrow => "`->`",
            Tok::Iff => "`<->`",
            Tok::Le => "`<=`",
            Tok::Lt => "`<`",
            Tok::Ge => "`>=`",
            Tok::Gt => "`>`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::DotDot => "`..`",
            Tok::SetMinus => "`(\\)`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, FrontendError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    // advances over `n` chars, tracking line/column
    let bump = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        if c == '/' && next == Some('*') {
            bump(&mut i, &mut line, &mut col, 2);
            loop {
                if i >= chars.len() {
                    return Err(FrontendError::Syntax {
                        pos,
                        expected: "end of comment `*/`".into(),
                    });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump(&mut i, &mut line, &mut col, 2);
                    break;
                }
                bump(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump(&mut i, &mut line, &mut col, 1);
            }
            let word: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Ident(word),
                pos,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump(&mut i, &mut line, &mut col, 1);
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse().map_err(|_| FrontendError::Syntax {
                pos,
                expected: "integer literal that fits in 64 bits".into(),
            })?;
            out.push(Token {
                tok: Tok::Int(value),
                pos,
            });
            continue;
        }
        if c == '"' {
            bump(&mut i, &mut line, &mut col, 1);
            let start = i;
            while i < chars.len() && chars[i] != '"' {
                bump(&mut i, &mut line, &mut col, 1);
            }
            if i >= chars.len() {
                return Err(FrontendError::Syntax {
                    pos,
                    expected: "closing `\"`".into(),
                });
            }
            let s: String = chars[start..i].iter().collect();
            bump(&mut i, &mut line, &mut col, 1);
            out.push(Token {
                tok: Tok::Str(s),
                pos,
            });
            continue;
        }
        let three: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if three == "<->" {
            (Tok::Iff, 3)
        } else if three == "(\\)" {
            (Tok::SetMinus, 3)
        } else {
            match (c, next) {
                ('&', Some('&')) => (Tok::AndAnd, 2),
                ('|', Some('|')) => (Tok::OrOr, 2),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('.', Some('.')) => (Tok::DotDot, 2),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (';', _) => (Tok::Semi, 1),
                (',', _) => (Tok::Comma, 1),
                (':', _) => (Tok::Colon, 1),
                ('=', _) => (Tok::Assign, 1),
                ('!', _) => (Tok::Bang, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                _ => {
                    return Err(FrontendError::Syntax {
                        pos,
                        expected: format!("a token (found unexpected character `{c}`)"),
                    })
                }
            }
        };
        bump(&mut i, &mut line, &mut col, len);
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<Tok> {
        tokenize(text).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_comments() {
        assert_eq!(
            kinds("a <-> !b // tail\n /* block */ -> (\\) .."),
            vec![
                Tok::Ident("a".into()),
                Tok::Iff,
                Tok::Bang,
                Tok::Ident("b".into()),
                Tok::Arrow,
                Tok::SetMinus,
                Tok::DotDot,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("a\n  b").unwrap();
        assert_eq!(toks[1].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn stray_character_is_reported() {
        assert!(matches!(tokenize("a $ b"), Err(FrontendError::Syntax { .. })));
    }
}
