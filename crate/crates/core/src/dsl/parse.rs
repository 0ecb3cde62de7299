//! Recursive-descent parser for rule text.
//!
//! ```text
//! rule   := part part+
//! part   := UPPER item+
//! item   := elem | group
//! group  := '(' items ('|' items)* ')' quant?
//! elem   := LOWER stereo? args? quant?
//! stereo := '«' text '»' | '<<' text '>>'
//! args   := '(' arg (',' arg)* ')'
//! arg    := '{'^d name '}'^d roles? | INT '..' (INT | '*') | namespec
//! ```
//!
//! A part starts at every uppercase letter outside parentheses, braces and
//! stereotypes. After an element letter, a parenthesis opens a group only
//! if its content is itself an item list and it is followed by a
//! quantifier, contains `|` or cannot be read as arguments; otherwise it
//! holds arguments. A group with one branch and no quantifier is spliced
//! into the surrounding list.

use super::ast::*;
use super::DslError;
use crate::model::{multiplicity_valid, ElementKind};
use crate::name::NameSpec;
use crate::table::DiagramLetter;

pub fn parse_rule(text: &str) -> Result<RuleAst, DslError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    p.skip_ws();
    if p.eof() {
        return Err(DslError::Empty { offset: 0 });
    }
    let mut parts = Vec::new();
    while !p.eof() {
        parts.push(p.part()?);
        p.skip_ws();
    }
    if parts.len() < 2 {
        return Err(DslError::TooFewParts { found: parts.len(), offset: p.chars.len() });
    }
    if parts[0].diagram == parts[1].diagram {
        return Err(DslError::SameDiagram { letter: parts[0].diagram.as_char(), offset: 0 });
    }
    Ok(RuleAst { parts })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn eof(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn unexpected(&self) -> DslError {
        match self.peek() {
            Some(c) => DslError::Unexpected { found: c, offset: self.pos },
            None => DslError::Unbalanced { what: "rule ended early", offset: self.pos },
        }
    }

    fn part(&mut self) -> Result<DiagramPart, DslError> {
        let at = self.pos;
        let c = self.peek().ok_or_else(|| self.unexpected())?;
        if !c.is_ascii_uppercase() {
            return Err(self.unexpected());
        }
        let diagram = DiagramLetter::from_char(c).ok_or(DslError::UnknownDiagram { letter: c, offset: at })?;
        self.pos += 1;
        let items = self.items(false)?;
        if items.is_empty() {
            return Err(DslError::EmptyPart { letter: c, offset: at });
        }
        Ok(DiagramPart { diagram, items })
    }

    fn items(&mut self, in_group: bool) -> Result<Vec<Item>, DslError> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(c) if c.is_ascii_uppercase() => {
                    if in_group {
                        return Err(self.unexpected());
                    }
                    break;
                }
                Some('(') => match self.group()? {
                    Group { mut branches, quant: Quant::One } if branches.len() == 1 => items.append(&mut branches[0]),
                    g => items.push(Item::Group(g)),
                },
                Some(')' | '|') if in_group => break,
                Some(')') => return Err(DslError::Unbalanced { what: "unmatched `)`", offset: self.pos }),
                Some(c) if c.is_alphabetic() && c.is_lowercase() => items.push(Item::Elem(self.elem()?)),
                Some(_) => return Err(self.unexpected()),
            }
        }
        Ok(items)
    }

    fn group(&mut self) -> Result<Group, DslError> {
        let open = self.pos;
        self.pos += 1;
        let mut branches = vec![self.items(true)?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('|') => {
                    self.pos += 1;
                    branches.push(self.items(true)?);
                }
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(DslError::Unbalanced { what: "unclosed `(`", offset: open }),
            }
        }
        if branches.iter().any(Vec::is_empty) {
            return Err(DslError::EmptyGroup { offset: open });
        }
        let quant = self.quant();
        Ok(Group { branches, quant })
    }

    fn quant(&mut self) -> Quant {
        self.skip_ws();
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Quant::Plus
            }
            Some('?') => {
                self.pos += 1;
                Quant::Opt
            }
            _ => Quant::One,
        }
    }

    fn elem(&mut self) -> Result<ElemItem, DslError> {
        let at = self.pos;
        let c = self.peek().expect("caller checked");
        let letter = ItemLetter::from_char(c).ok_or(DslError::UnknownElement { letter: c, offset: at })?;
        self.pos += 1;
        let mut item = ElemItem::new(letter);
        self.skip_ws();
        item.stereotype = self.stereotype()?;
        self.skip_ws();
        if self.peek() == Some('(') && !self.paren_is_group()? {
            item.args = self.args()?;
        }
        item.quant = self.quant();
        Ok(item)
    }

    fn stereotype(&mut self) -> Result<Option<String>, DslError> {
        let (open_len, close): (usize, &[char]) = match (self.peek(), self.peek_at(1)) {
            (Some('«'), _) => (1, &['»']),
            (Some('<'), Some('<')) => (2, &['>', '>']),
            (Some('⟨'), Some('⟨')) => (2, &['⟩', '⟩']),
            _ => return Ok(None),
        };
        let start = self.pos;
        self.pos += open_len;
        let body_start = self.pos;
        while !self.eof() {
            if self.chars[self.pos..].starts_with(close) {
                let text: String = self.chars[body_start..self.pos].iter().collect();
                self.pos += close.len();
                let text = text.trim().to_string();
                if text.is_empty() {
                    return Err(DslError::BadArg { offset: start, reason: "empty stereotype".into() });
                }
                return Ok(Some(text));
            }
            self.pos += 1;
        }
        Err(DslError::Unbalanced { what: "unclosed stereotype", offset: start })
    }

    /// Index of the parenthesis matching the one at `open`.
    fn matching_paren(&self, open: usize) -> Result<usize, DslError> {
        let mut depth = 0i32;
        for (k, &c) in self.chars.iter().enumerate().skip(open) {
            match c {
                '(' | '{' | '[' => depth += 1,
                ')' | '}' | ']' => {
                    depth -= 1;
                    if depth == 0 {
                        if c != ')' {
                            return Err(DslError::Unbalanced { what: "mismatched bracket", offset: k });
                        }
                        return Ok(k);
                    }
                    if depth < 0 {
                        return Err(DslError::Unbalanced { what: "mismatched bracket", offset: k });
                    }
                }
                _ => {}
            }
        }
        Err(DslError::Unbalanced { what: "unclosed `(`", offset: open })
    }

    fn paren_is_group(&self) -> Result<bool, DslError> {
        let open = self.pos;
        let close = self.matching_paren(open)?;
        let inner: String = self.chars[open + 1..close].iter().collect();
        let mut sub = Parser { chars: inner.chars().collect(), pos: 0 };
        let parses = match sub.items(true) {
            Ok(items) => {
                let mut ok = !items.is_empty();
                while ok {
                    sub.skip_ws();
                    match sub.peek() {
                        None => break,
                        Some('|') => {
                            sub.pos += 1;
                            ok = matches!(sub.items(true), Ok(b) if !b.is_empty());
                        }
                        Some(_) => ok = false,
                    }
                }
                ok
            }
            Err(_) => false,
        };
        if !parses {
            return Ok(false);
        }
        let mut after = close + 1;
        while self.chars.get(after).is_some_and(|c| c.is_whitespace()) {
            after += 1;
        }
        let quantified = matches!(self.chars.get(after), Some('+' | '?'));
        if quantified || inner.contains('|') {
            return Ok(true);
        }
        let mut probe = Parser { chars: self.chars.clone(), pos: open };
        Ok(probe.args().is_err())
    }

    fn args(&mut self) -> Result<Vec<Arg>, DslError> {
        let open = self.pos;
        let close = self.matching_paren(open)?;
        let mut args = Vec::new();
        let mut depth = 0i32;
        let mut start = open + 1;
        for k in open + 1..=close {
            let c = self.chars[k];
            match c {
                '(' | '{' | '[' => depth += 1,
                ')' | '}' | ']' if k != close => depth -= 1,
                _ => {}
            }
            if (c == ',' && depth == 0) || k == close {
                let raw: String = self.chars[start..k].iter().collect();
                let lead = raw.len() - raw.trim_start().len();
                let offset = start + raw[..lead].chars().count();
                args.push(parse_arg(raw.trim(), offset)?);
                start = k + 1;
            }
        }
        self.pos = close + 1;
        let all_states = args.len() >= 2 && args.iter().all(|a| matches!(a, Arg::Name(n) if n.is_bare_state()));
        if all_states {
            let states = args
                .into_iter()
                .map(|a| match a {
                    Arg::Name(n) => n.state.expect("bare state"),
                    _ => unreachable!(),
                })
                .collect();
            return Ok(vec![Arg::States(states)]);
        }
        Ok(args)
    }
}

fn parse_arg(text: &str, offset: usize) -> Result<Arg, DslError> {
    if text.is_empty() {
        return Err(DslError::BadArg { offset, reason: "empty argument".into() });
    }
    if text.starts_with('{') {
        return parse_pattern_ref(text, offset).map(Arg::Pattern);
    }
    if text.starts_with(|c: char| c.is_ascii_digit()) && text.contains("..") {
        if !multiplicity_valid(text) {
            return Err(DslError::BadArg { offset, reason: format!("invalid multiplicity `{text}`") });
        }
        return Ok(Arg::Multiplicity(text.to_string()));
    }
    NameSpec::parse(text)
        .map(Arg::Name)
        .map_err(|e| DslError::BadArg { offset: offset + e.offset, reason: e.reason.to_string() })
}

fn parse_pattern_ref(text: &str, offset: usize) -> Result<PatternRef, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let depth = chars.iter().take_while(|&&c| c == '{').count();
    if depth > 3 {
        return Err(DslError::PatternDepth { depth, offset });
    }
    let name_end = chars[depth..]
        .iter()
        .position(|&c| c == '}')
        .map(|p| p + depth)
        .ok_or(DslError::Unbalanced { what: "unclosed `{`", offset })?;
    let name: String = chars[depth..name_end].iter().collect::<String>().trim().to_string();
    if name.is_empty() || name.contains(['{', '(', ')', ',', '[', ']']) {
        return Err(DslError::BadArg { offset: offset + depth, reason: "invalid pattern name".into() });
    }
    let closing = chars[name_end..].iter().take_while(|&&c| c == '}').count();
    if closing != depth {
        return Err(DslError::Unbalanced { what: "pattern braces do not match", offset: offset + name_end });
    }
    let mut roles = Vec::new();
    for (k, &c) in chars.iter().enumerate().skip(name_end + closing) {
        if c.is_whitespace() {
            continue;
        }
        let kind = ElementKind::from_letter(c).ok_or(DslError::UnknownElement { letter: c, offset: offset + k })?;
        roles.push(kind);
    }
    Ok(PatternRef { depth: depth as u8, name, roles })
}
