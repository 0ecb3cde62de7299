//! `name[State]:classifier` naming, shared by rule arguments, model files
//! and elements.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A possibly partial element name. Every part is optional; `:Request`
/// names an anonymous instance of class `Request`, `[Sent]:Request` the same
/// in state `Sent`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NameSpec {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub state: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classifier: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid name `{text}` at offset {offset}: {reason}")]
pub struct NameError {
    pub text: String,
    pub offset: usize,
    pub reason: &'static str,
}

impl NameSpec {
    pub fn named(name: impl Into<String>) -> Self {
        NameSpec { name: Some(name.into()), ..Default::default() }
    }

    pub fn of_class(classifier: impl Into<String>) -> Self {
        NameSpec { classifier: Some(classifier.into()), ..Default::default() }
    }

    pub fn in_state(state: impl Into<String>, classifier: impl Into<String>) -> Self {
        NameSpec { state: Some(state.into()), classifier: Some(classifier.into()), name: None }
    }

    pub fn state_only(state: impl Into<String>) -> Self {
        NameSpec { state: Some(state.into()), ..Default::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.name.is_none() && self.state.is_none() && self.classifier.is_none()
    }

    /// `[State]` with nothing else.
    pub fn is_bare_state(&self) -> bool {
        self.name.is_none() && self.classifier.is_none() && self.state.is_some()
    }

    /// Name when present, otherwise the classifier.
    pub fn display_name(&self) -> Option<&str> {
        self.name.as_deref().or(self.classifier.as_deref())
    }

    /// Fieldwise constraint check: every field present in `self` equals the
    /// corresponding field of `other`.
    pub fn constrains(&self, other: &NameSpec) -> bool {
        fn ok(want: &Option<String>, have: &Option<String>) -> bool {
            want.is_none() || want == have
        }
        ok(&self.name, &other.name) && ok(&self.state, &other.state) && ok(&self.classifier, &other.classifier)
    }

    /// Fills the fields missing from `self` with those of `fallback`.
    pub fn or_inherit(&self, fallback: &NameSpec) -> NameSpec {
        NameSpec {
            name: self.name.clone().or_else(|| fallback.name.clone()),
            state: self.state.clone().or_else(|| fallback.state.clone()),
            classifier: self.classifier.clone().or_else(|| fallback.classifier.clone()),
        }
    }

    pub fn parse(text: &str) -> Result<NameSpec, NameError> {
        let err = |offset, reason| NameError { text: text.to_string(), offset, reason };
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut angle = 0usize;
        let mut name_end = text.len();
        let mut state: Option<(usize, usize)> = None;
        let mut class_start: Option<usize> = None;

        // `::` at angle depth zero separates a message label from its return
        // classifier; the last one wins.
        let mut double_colon: Option<usize> = None;
        {
            let mut depth = 0usize;
            for w in 0..chars.len() {
                let (i, c) = chars[w];
                match c {
                    '<' => depth += 1,
                    '>' => depth = depth.saturating_sub(1),
                    ':' if depth == 0 && chars.get(w + 1).map(|p| p.1) == Some(':') => double_colon = Some(i),
                    _ => {}
                }
            }
        }

        let mut k = 0;
        while k < chars.len() {
            let (i, c) = chars[k];
            match c {
                '<' => angle += 1,
                '>' => angle = angle.saturating_sub(1),
                '[' if angle == 0 => {
                    name_end = i;
                    let close = text[i..].find(']').ok_or_else(|| err(i, "unclosed `[`"))? + i;
                    state = Some((i + 1, close));
                    let after = close + 1;
                    let rest = &text[after..];
                    if rest.trim().is_empty() {
                        break;
                    }
                    let rest_trim = rest.trim_start();
                    if !rest_trim.starts_with(':') {
                        return Err(err(after, "expected `:` after state"));
                    }
                    let colon = after + (rest.len() - rest_trim.len());
                    class_start = Some(colon + 1);
                    break;
                }
                ':' if angle == 0 => {
                    (name_end, class_start) = match double_colon {
                        Some(dc) => (dc, Some(dc + 2)),
                        None => (i, Some(i + 1)),
                    };
                    break;
                }
                ']' | '(' | ')' | ',' | '{' | '}' | '|' | '"' | '«' | '»' => {
                    return Err(err(i, "character not allowed in a name"));
                }
                _ => {}
            }
            k += 1;
        }

        let clean = |s: &str| {
            let t = s.trim();
            (!t.is_empty()).then(|| t.to_string())
        };
        let name = clean(&text[..name_end]);
        let state = match state {
            Some((a, b)) => {
                let s = clean(&text[a..b]);
                if s.is_none() {
                    return Err(err(a, "empty state"));
                }
                s
            }
            None => None,
        };
        let classifier = match class_start {
            Some(at) => {
                let raw = &text[at..];
                if let Some(bad) = raw.find(['[', ']', '(', ')', ',', '{', '}', '|', '"']) {
                    return Err(err(at + bad, "character not allowed in a classifier"));
                }
                let c = clean(raw);
                if c.is_none() {
                    return Err(err(at, "empty classifier"));
                }
                c
            }
            None => None,
        };
        Ok(NameSpec { name, state, classifier })
    }
}

impl FromStr for NameSpec {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NameSpec::parse(s)
    }
}

impl fmt::Display for NameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            f.write_str(n)?;
        }
        if let Some(s) = &self.state {
            write!(f, "[{s}]")?;
        }
        if let Some(c) = &self.classifier {
            write!(f, ":{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_form() {
        let n = NameSpec::parse("name1[State1]:class1").unwrap();
        assert_eq!(n.name.as_deref(), Some("name1"));
        assert_eq!(n.state.as_deref(), Some("State1"));
        assert_eq!(n.classifier.as_deref(), Some("class1"));
        assert_eq!(n.to_string(), "name1[State1]:class1");
    }

    #[test]
    fn partial_forms() {
        assert_eq!(NameSpec::parse(":Decision").unwrap(), NameSpec::of_class("Decision"));
        assert_eq!(NameSpec::parse("[Sent]:Request").unwrap(), NameSpec::in_state("Sent", "Request"));
        assert_eq!(NameSpec::parse("[Sent]").unwrap(), NameSpec::state_only("Sent"));
        assert_eq!(NameSpec::parse("1.Request_service").unwrap(), NameSpec::named("1.Request_service"));
        assert!(NameSpec::parse("").unwrap().is_empty());
    }

    #[test]
    fn message_label_with_return_classifier() {
        let n = NameSpec::parse("downLoad<Requests>::Request").unwrap();
        assert_eq!(n.name.as_deref(), Some("downLoad<Requests>"));
        assert_eq!(n.classifier.as_deref(), Some("Request"));
        assert_eq!(NameSpec::parse(&n.to_string()).unwrap(), n);
        let angle = NameSpec::parse("get<a:b>").unwrap();
        assert_eq!(angle, NameSpec::named("get<a:b>"));
    }

    #[test]
    fn rejects_malformed() {
        assert!(NameSpec::parse("[Sent").is_err());
        assert!(NameSpec::parse("a(b)").is_err());
        assert!(NameSpec::parse("[]:X").is_err());
        assert!(NameSpec::parse("x:").is_err());
        assert!(NameSpec::parse("[S]x").is_err());
    }

    #[test]
    fn constraint_and_inheritance() {
        let want = NameSpec::of_class("Decision");
        assert!(want.constrains(&NameSpec::in_state("Sent", "Decision")));
        assert!(!want.constrains(&NameSpec::of_class("Request")));
        let filled = NameSpec::state_only("Sent").or_inherit(&NameSpec::of_class("Request"));
        assert_eq!(filled, NameSpec::in_state("Sent", "Request"));
    }

    fn word() -> impl Strategy<Value = String> {
        "[A-Za-z0-9_.][A-Za-z0-9_. ]{0,8}[A-Za-z0-9_.]|[A-Za-z0-9_.]"
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(
            name in proptest::option::of(prop_oneof![word(), word().prop_map(|w| format!("{w}<{w}>"))]),
            state in proptest::option::of(word()),
            classifier in proptest::option::of(word()),
        ) {
            let spec = NameSpec { name, state, classifier };
            prop_assert_eq!(NameSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }
}
