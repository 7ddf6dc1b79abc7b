//! Text format for presentations.
//!
//! ```text
//! # comments run to end of line
//! gens a b;
//! rel a b a^-1 b^-1;
//! per m = a, l = b;
//! ```

use super::{Letter, Presentation, PresentationError, Word};

const MAX_EXPONENT: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Int(i64),
    Semi,
    Caret,
    Eq,
    Comma,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> PresentationError {
    PresentationError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, PresentationError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                ';' => Some(Tok::Semi),
                '^' => Some(Tok::Caret),
                '=' => Some(Tok::Eq),
                ',' => Some(Tok::Comma),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line: line_no, col });
                i += 1;
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Name(name), line: line_no, col });
            } else if c == '-' || c == '+' || c.is_ascii_digit() {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<i64>()
                    .map_err(|_| syntax(line_no, col, format!("malformed integer `{text}`")))?;
                out.push(Spanned { tok: Tok::Int(value), line: line_no, col });
            } else {
                return Err(syntax(line_no, col, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    gens: Vec<String>,
    relators: Vec<Word>,
    peripheral: Option<(Word, Word)>,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), PresentationError> {
        let (line, col) = self.here();
        match self.next() {
            Some(s) if s.tok == want => Ok(()),
            _ => Err(syntax(line, col, format!("expected {what}"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), PresentationError> {
        let (line, col) = self.here();
        match self.next() {
            Some(Spanned { tok: Tok::Name(n), .. }) if n == kw => Ok(()),
            _ => Err(syntax(line, col, format!("expected `{kw}`"))),
        }
    }

    fn parse_file(&mut self) -> Result<(), PresentationError> {
        while let Some(s) = self.next() {
            match &s.tok {
                Tok::Name(kw) if kw == "gens" => self.parse_gens()?,
                Tok::Name(kw) if kw == "rel" => {
                    let w = self.parse_word()?;
                    self.expect(Tok::Semi, "`;`")?;
                    self.relators.push(w);
                }
                Tok::Name(kw) if kw == "per" => {
                    if self.peripheral.is_some() {
                        return Err(syntax(s.line, s.col, "peripheral pair given twice"));
                    }
                    self.expect_keyword("m")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let m = self.parse_word()?;
                    self.expect(Tok::Comma, "`,`")?;
                    self.expect_keyword("l")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let l = self.parse_word()?;
                    self.expect(Tok::Semi, "`;`")?;
                    self.peripheral = Some((m, l));
                }
                _ => {
                    return Err(syntax(
                        s.line,
                        s.col,
                        "expected a statement (`gens`, `rel` or `per`)",
                    ))
                }
            }
        }
        Ok(())
    }

    fn parse_gens(&mut self) -> Result<(), PresentationError> {
        let mut count = 0;
        loop {
            let (line, col) = self.here();
            match self.next() {
                Some(Spanned { tok: Tok::Name(n), .. }) => {
                    if self.gens.contains(&n) {
                        return Err(PresentationError::DuplicateGenerator { name: n, line, col });
                    }
                    self.gens.push(n);
                    count += 1;
                }
                Some(Spanned { tok: Tok::Semi, .. }) if count > 0 => return Ok(()),
                _ => return Err(syntax(line, col, "expected a generator name")),
            }
        }
    }

    fn parse_word(&mut self) -> Result<Word, PresentationError> {
        let mut letters = Vec::new();
        let mut terms = 0;
        while let Some(Spanned { tok: Tok::Name(_), .. }) = self.peek() {
            let s = self.next().unwrap();
            let Tok::Name(name) = s.tok else { unreachable!() };
            let gen = self.gens.iter().position(|g| *g == name).ok_or(
                PresentationError::UnknownSymbol {
                    name: name.clone(),
                    line: s.line,
                    col: s.col,
                },
            )?;
            let mut exp = 1;
            if let Some(Spanned { tok: Tok::Caret, .. }) = self.peek() {
                self.next();
                let (line, col) = self.here();
                match self.next() {
                    Some(Spanned { tok: Tok::Int(n), .. }) if n.abs() <= MAX_EXPONENT => exp = n,
                    Some(Spanned { tok: Tok::Int(_), .. }) => {
                        return Err(syntax(line, col, "exponent too large"))
                    }
                    _ => return Err(syntax(line, col, "expected an integer exponent")),
                }
            }
            letters.extend(std::iter::repeat(Letter::new(gen, exp < 0)).take(exp.unsigned_abs() as usize));
            terms += 1;
        }
        if terms == 0 {
            let (line, col) = self.here();
            return Err(syntax(line, col, "expected a word"));
        }
        Ok(Word::new(letters))
    }
}

pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
    let toks = lex(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map(|(i, l)| (i + 1, l.chars().count() + 1))
        .unwrap_or((1, 1));
    let mut parser = Parser {
        toks,
        pos: 0,
        gens: Vec::new(),
        relators: Vec::new(),
        peripheral: None,
        end,
    };
    parser.parse_file()?;
    Presentation::new(parser.gens, parser.relators, parser.peripheral)
}
