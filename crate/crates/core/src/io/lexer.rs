use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Str(String),
    Stereo(String),
    Number(u32),
    LBrace,
    RBrace,
    Arrow,
    Colon,
    Semi,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Stereo(s) => format!("<<{s}>>"),
            Tok::Number(n) => n.to_string(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    pub fn new(text: &str) -> Self {
        Lexer { chars: text.chars().collect(), pos: 0, line: 1, col: 1 }
    }

    pub fn position(&self) -> (usize, usize) {
        (self.line, self.col)
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek_char(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c == '#' {
                while self.peek_char().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// Skips blanks, then returns where the next token starts.
    pub fn next_position(&mut self) -> (usize, usize) {
        self.skip_trivia();
        self.position()
    }

    pub fn peek(&self) -> Result<Tok, ParseError> {
        self.clone().next()
    }

    pub fn next(&mut self) -> Result<Tok, ParseError> {
        self.skip_trivia();
        let Some(c) = self.peek_char() else { return Ok(Tok::Eof) };
        let at = self.clone();
        match c {
            '{' => {
                self.bump();
                Ok(Tok::LBrace)
            }
            '}' => {
                self.bump();
                Ok(Tok::RBrace)
            }
            ':' => {
                self.bump();
                Ok(Tok::Colon)
            }
            ';' | ',' => {
                self.bump();
                Ok(Tok::Semi)
            }
            '-' if self.chars.get(self.pos + 1) == Some(&'>') => {
                self.bump();
                self.bump();
                Ok(Tok::Arrow)
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None | Some('\n') => return Err(at.error("unterminated string")),
                        Some('"') => return Ok(Tok::Str(s)),
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(self.error("bad escape in string")),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
            }
            '«' | '<' => {
                let close: &[char] = if c == '«' { &['»'] } else { &['>', '>'] };
                if c == '<' && self.chars.get(self.pos + 1) != Some(&'<') {
                    return Err(self.error("unexpected `<`"));
                }
                let open_len = if c == '«' { 1 } else { 2 };
                for _ in 0..open_len {
                    self.bump();
                }
                let start = self.pos;
                while self.pos < self.chars.len() && !self.chars[self.pos..].starts_with(close) {
                    if self.peek_char() == Some('\n') {
                        return Err(at.error("unterminated stereotype"));
                    }
                    self.bump();
                }
                if self.pos >= self.chars.len() {
                    return Err(at.error("unterminated stereotype"));
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                for _ in 0..close.len() {
                    self.bump();
                }
                let text = text.trim().to_string();
                if text.is_empty() {
                    return Err(at.error("empty stereotype"));
                }
                Ok(Tok::Stereo(text))
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(self.bump().expect("peeked"));
                }
                s.parse().map(Tok::Number).map_err(|_| at.error("number too large"))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while self.peek_char().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    s.push(self.bump().expect("peeked"));
                }
                Ok(Tok::Word(s))
            }
            other => Err(self.error(format!("unexpected character `{other}`"))),
        }
    }

    /// The rest of the current line, trimmed, with any `#` comment removed.
    pub fn rest_of_line(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek_char() {
            if c == '\n' || c == '#' {
                break;
            }
            s.push(c);
            self.bump();
        }
        s.trim().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        let mut lx = Lexer::new("diagram X \"a \\\"b\\\"\" { <<sub>> «x» -> : ; 12 } # c\n");
        let toks: Vec<Tok> = std::iter::from_fn(|| match lx.next().unwrap() {
            Tok::Eof => None,
            t => Some(t),
        })
        .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Word("diagram".into()),
                Tok::Word("X".into()),
                Tok::Str("a \"b\"".into()),
                Tok::LBrace,
                Tok::Stereo("sub".into()),
                Tok::Stereo("x".into()),
                Tok::Arrow,
                Tok::Colon,
                Tok::Semi,
                Tok::Number(12),
                Tok::RBrace,
            ]
        );
    }

    #[test]
    fn positions() {
        let mut lx = Lexer::new("a\n  \"open");
        lx.next().unwrap();
        let err = lx.next().unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
    }
}
