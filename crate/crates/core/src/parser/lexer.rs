use super::{DiagnosticKind, ParseDiagnostic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Lower(String),
    Upper(String),
    Underscore,
    /// Unsigned magnitude; sign is applied by the parser.
    Int(u64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Bar,
    Minus,
    Question,
    Not,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
            Tok::Underscore => "`_`".into(),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Str(_) => "string".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::If => "`:-`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Question => "`?`".into(),
            Tok::Not => "`not`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_ident(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        &self.src[start..self.pos]
    }
}

fn is_anon_name(s: &str) -> bool {
    s.strip_prefix("_ANON")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let mut cur = Cursor {
        src,
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '%' {
            while !matches!(cur.peek(), None | Some('\n')) {
                cur.bump();
            }
            continue;
        }
        let (line, column, start) = (cur.line, cur.column, cur.pos);
        let err = |msg: String, kind| ParseDiagnostic::new(kind, line, column, msg);
        let tok = match c {
            '(' => {
                cur.bump();
                Tok::LParen
            }
            ')' => {
                cur.bump();
                Tok::RParen
            }
            ',' => {
                cur.bump();
                Tok::Comma
            }
            '.' => {
                cur.bump();
                Tok::Dot
            }
            '|' => {
                cur.bump();
                Tok::Bar
            }
            '-' => {
                cur.bump();
                Tok::Minus
            }
            '?' => {
                cur.bump();
                Tok::Question
            }
            ':' => {
                cur.bump();
                if cur.peek() == Some('-') {
                    cur.bump();
                    Tok::If
                } else {
                    return Err(err("expected `:-`".into(), DiagnosticKind::SyntaxError));
                }
            }
            '"' => {
                cur.bump();
                let mut text = String::new();
                loop {
                    match cur.bump() {
                        None => {
                            return Err(err(
                                "unterminated string".into(),
                                DiagnosticKind::SyntaxError,
                            ))
                        }
                        Some('"') => break,
                        Some('\\') => match cur.bump() {
                            Some('"') => text.push('"'),
                            Some('\\') => text.push('\\'),
                            _ => {
                                return Err(err(
                                    "invalid escape in string (only \\\" and \\\\)".into(),
                                    DiagnosticKind::SyntaxError,
                                ))
                            }
                        },
                        Some(ch) => text.push(ch),
                    }
                }
                Tok::Str(text)
            }
            '0'..='9' => {
                let digits = cur.take_ident();
                if !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err(
                        format!("malformed number `{digits}`"),
                        DiagnosticKind::SyntaxError,
                    ));
                }
                match digits.parse::<u64>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => {
                        return Err(err(
                            format!("integer `{digits}` does not fit in 64 bits"),
                            DiagnosticKind::IntegerOverflow,
                        ))
                    }
                }
            }
            '_' => {
                if matches!(cur.peek2(), Some(n) if n.is_ascii_alphanumeric() || n == '_') {
                    let name = cur.take_ident();
                    if is_anon_name(name) {
                        Tok::Upper(name.to_string())
                    } else {
                        return Err(err(
                            format!("identifier `{name}` may not start with `_`"),
                            DiagnosticKind::SyntaxError,
                        ));
                    }
                } else {
                    cur.bump();
                    Tok::Underscore
                }
            }
            c if c.is_ascii_lowercase() => {
                let name = cur.take_ident();
                if name == "not" && matches!(cur.peek(), Some(n) if n.is_whitespace()) {
                    Tok::Not
                } else {
                    Tok::Lower(name.to_string())
                }
            }
            c if c.is_ascii_uppercase() => Tok::Upper(cur.take_ident().to_string()),
            other => {
                return Err(err(
                    format!("unexpected character `{other}`"),
                    DiagnosticKind::SyntaxError,
                ))
            }
        };
        out.push(Token {
            tok,
            line,
            column,
            start,
            end: cur.pos,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            kinds("a | -b(X, 12) :- not c. % comment\n"),
            vec![
                Tok::Lower("a".into()),
                Tok::Bar,
                Tok::Minus,
                Tok::Lower("b".into()),
                Tok::LParen,
                Tok::Upper("X".into()),
                Tok::Comma,
                Tok::Int(12),
                Tok::RParen,
                Tok::If,
                Tok::Not,
                Tok::Lower("c".into()),
                Tok::Dot,
            ]
        );
    }

    #[test]
    fn not_requires_whitespace() {
        assert_eq!(kinds("not(a)")[0], Tok::Lower("not".into()));
        assert_eq!(kinds("notx")[0], Tok::Lower("notx".into()));
    }

    #[test]
    fn strings_and_escapes() {
        assert_eq!(
            kinds(r#""a \"b\" \\""#),
            vec![Tok::Str("a \"b\" \\".into())]
        );
        assert!(tokenize("\"open").is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let d = tokenize("p(99999999999999999999).").unwrap_err();
        assert_eq!(d.kind, DiagnosticKind::IntegerOverflow);
        assert_eq!((d.line, d.column), (1, 3));
    }

    #[test]
    fn anonymous_names() {
        assert_eq!(kinds("_")[0], Tok::Underscore);
        assert_eq!(kinds("_ANON3")[0], Tok::Upper("_ANON3".into()));
        assert!(tokenize("_foo").is_err());
    }
}
