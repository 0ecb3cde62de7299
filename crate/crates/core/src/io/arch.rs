use super::lexer::{Lexer, Tok};
use super::ParseError;
use crate::dsl::{render, resolve_rule};
use crate::model::{Architecture, Attachment, Diagram, EdgeKind, Element, ElementId, ElementKind, Host};
use crate::name::NameSpec;
use crate::table::DiagramLetter;
use std::fmt::Write as _;

type Pos = (usize, usize);

fn err_at(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError { line: pos.0, col: pos.1, message: message.into() }
}

/// Reference to an element by name, optionally narrowed by diagram, kind
/// and stereotype.
#[derive(Debug, Clone)]
struct ElemRef {
    letter: Option<DiagramLetter>,
    kind: Option<ElementKind>,
    spec: NameSpec,
    stereotype: Option<String>,
    pos: Pos,
}

struct PendingEdge {
    letter: DiagramLetter,
    kind: EdgeKind,
    from: ElemRef,
    to: ElemRef,
    label: Option<String>,
    multiplicity: Option<String>,
    returns: Option<String>,
    pos: Pos,
}

enum PendingAttr {
    Scenario(Vec<String>),
    Operations(Vec<NameSpec>),
}

/// Header of a pattern file.
#[derive(Debug, Clone)]
pub(crate) struct PatternHeader {
    pub category: u32,
    pub name: String,
    /// Role letter, placeholder texts and where the role was declared.
    pub placeholders: Vec<(String, Vec<String>, (usize, usize))>,
}

struct Parser {
    lx: Lexer,
    arch: Architecture,
    edges: Vec<PendingEdge>,
    attrs: Vec<(DiagramLetter, ElemRef, PendingAttr)>,
    rules_allowed: bool,
}

/// Parses a model file.
pub fn parse_model(text: &str) -> Result<Architecture, ParseError> {
    let mut p = Parser::new(text, true);
    p.expect_word("architecture")?;
    let name = p.string()?;
    p.arch.name = name;
    loop {
        let pos = p.lx.next_position();
        match p.lx.next()? {
            Tok::Eof => break,
            Tok::Word(w) if w == "diagram" => p.diagram_block()?,
            Tok::Word(w) if w == "rule" => p.rule_decl(None, pos)?,
            other => return Err(err_at(pos, format!("expected `diagram` or `rule`, found {}", other.describe()))),
        }
    }
    p.finish()
}

/// Parses a pattern file: header, placeholders and exactly one diagram.
pub(crate) fn parse_diagram_file(text: &str) -> Result<(PatternHeader, Architecture), ParseError> {
    let mut p = Parser::new(text, false);
    p.expect_word("pattern")?;
    let pos = p.lx.next_position();
    let category = match p.lx.next()? {
        Tok::Number(n) => n,
        other => return Err(err_at(pos, format!("expected a category number, found {}", other.describe()))),
    };
    let name = p.string()?;
    let mut placeholders = Vec::new();
    if p.lx.peek()? == Tok::Word("placeholders".into()) {
        p.lx.next()?;
        p.expect(Tok::LBrace)?;
        loop {
            let pos = p.lx.next_position();
            match p.lx.next()? {
                Tok::RBrace => break,
                Tok::Word(role) => {
                    p.expect(Tok::Colon)?;
                    let mut names = Vec::new();
                    loop {
                        match p.lx.peek()? {
                            Tok::Str(_) => names.push(p.string()?),
                            Tok::Semi => {
                                p.lx.next()?;
                                break;
                            }
                            Tok::RBrace => break,
                            other => {
                                let at = p.lx.next_position();
                                return Err(err_at(
                                    at,
                                    format!("expected a placeholder name, found {}", other.describe()),
                                ));
                            }
                        }
                    }
                    placeholders.push((role, names, pos));
                }
                other => return Err(err_at(pos, format!("expected a role letter, found {}", other.describe()))),
            }
        }
    }
    p.expect_word("diagram")?;
    p.diagram_block()?;
    let pos = p.lx.next_position();
    if p.lx.next()? != Tok::Eof {
        return Err(err_at(pos, "a pattern file holds exactly one diagram"));
    }
    let arch = p.finish()?;
    Ok((PatternHeader { category, name, placeholders }, arch))
}

impl Parser {
    fn new(text: &str, rules_allowed: bool) -> Self {
        Parser {
            lx: Lexer::new(text),
            arch: Architecture::new(""),
            edges: Vec::new(),
            attrs: Vec::new(),
            rules_allowed,
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let pos = self.lx.next_position();
        let got = self.lx.next()?;
        if got == want {
            Ok(())
        } else {
            Err(err_at(pos, format!("expected {}, found {}", want.describe(), got.describe())))
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<(), ParseError> {
        self.expect(Tok::Word(word.into()))
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let pos = self.lx.next_position();
        match self.lx.next()? {
            Tok::Str(s) => Ok(s),
            other => Err(err_at(pos, format!("expected a string, found {}", other.describe()))),
        }
    }

    fn spec(&mut self) -> Result<NameSpec, ParseError> {
        let pos = self.lx.next_position();
        let s = self.string()?;
        NameSpec::parse(&s).map_err(|e| err_at((pos.0, pos.1 + 1 + e.offset), e.to_string()))
    }

    fn stereotype(&mut self) -> Result<Option<String>, ParseError> {
        if let Tok::Stereo(s) = self.lx.peek()? {
            self.lx.next()?;
            return Ok(Some(s));
        }
        Ok(None)
    }

    fn letter(&mut self) -> Result<DiagramLetter, ParseError> {
        let pos = self.lx.next_position();
        match self.lx.next()? {
            Tok::Word(w) => as_letter(&w).ok_or_else(|| err_at(pos, format!("unknown diagram letter `{w}`"))),
            other => Err(err_at(pos, format!("expected a diagram letter, found {}", other.describe()))),
        }
    }

    fn diagram_block(&mut self) -> Result<(), ParseError> {
        let pos = self.lx.next_position();
        let letter = self.letter()?;
        if self.arch.diagram(letter).is_some() {
            return Err(err_at(pos, format!("diagram {letter} declared twice")));
        }
        let name = self.string()?;
        self.arch.ensure_diagram(letter).name = name;
        self.expect(Tok::LBrace)?;
        loop {
            let pos = self.lx.next_position();
            match self.lx.next()? {
                Tok::RBrace => return Ok(()),
                Tok::Word(w) => self.statement(letter, &w, pos, None)?,
                other => return Err(err_at(pos, format!("expected a declaration, found {}", other.describe()))),
            }
        }
    }

    fn statement(
        &mut self,
        letter: DiagramLetter,
        word: &str,
        pos: Pos,
        container: Option<ElementId>,
    ) -> Result<(), ParseError> {
        if let Some(kind) = ElementKind::from_keyword(word) {
            return self.element_decl(letter, kind, container);
        }
        if container.is_some() {
            return Err(err_at(
                pos,
                format!("only element declarations may appear inside a container, found `{word}`"),
            ));
        }
        match word {
            "edge" => self.edge_decl(letter, pos),
            "rule" => self.rule_decl(Some(letter), pos),
            "scenario" | "operations" => {
                let target = self.elem_ref(false)?;
                self.expect(Tok::LBrace)?;
                let mut items = Vec::new();
                loop {
                    let at = self.lx.next_position();
                    match self.lx.next()? {
                        Tok::RBrace => break,
                        Tok::Str(s) => items.push((s, at)),
                        other => {
                            return Err(err_at(at, format!("expected a string or `}}`, found {}", other.describe())))
                        }
                    }
                }
                let attr = if word == "scenario" {
                    PendingAttr::Scenario(items.into_iter().map(|(s, _)| s).collect())
                } else {
                    let ops = items
                        .into_iter()
                        .map(|(s, at)| NameSpec::parse(&s).map_err(|e| err_at(at, e.to_string())))
                        .collect::<Result<_, _>>()?;
                    PendingAttr::Operations(ops)
                };
                self.attrs.push((letter, target, attr));
                Ok(())
            }
            _ => Err(err_at(pos, format!("unknown element kind `{word}`"))),
        }
    }

    fn element_decl(
        &mut self,
        letter: DiagramLetter,
        kind: ElementKind,
        container: Option<ElementId>,
    ) -> Result<(), ParseError> {
        let pos = self.lx.next_position();
        let spec = self.spec()?;
        let stereotype = self.stereotype()?;
        let (id, _) = self
            .arch
            .find_or_create_element(letter, kind, spec, stereotype, container)
            .map_err(|e| err_at(pos, e.to_string()))?;
        if self.lx.peek()? == Tok::LBrace {
            if !kind.is_container() {
                return Err(err_at(pos, format!("a {} cannot contain elements", kind.keyword())));
            }
            self.lx.next()?;
            loop {
                let at = self.lx.next_position();
                match self.lx.next()? {
                    Tok::RBrace => break,
                    Tok::Word(w) => self.statement(letter, &w, at, Some(id))?,
                    other => return Err(err_at(at, format!("expected an element, found {}", other.describe()))),
                }
            }
        }
        Ok(())
    }

    fn elem_ref(&mut self, allow_letter: bool) -> Result<ElemRef, ParseError> {
        let pos = self.lx.next_position();
        let mut letter = None;
        let mut kind = None;
        if let Tok::Word(w) = self.lx.peek()? {
            if allow_letter {
                if let Some(l) = as_letter(&w) {
                    self.lx.next()?;
                    letter = Some(l);
                }
            }
        }
        if let Tok::Word(w) = self.lx.peek()? {
            let at = self.lx.next_position();
            kind =
                Some(ElementKind::from_keyword(&w).ok_or_else(|| err_at(at, format!("unknown element kind `{w}`")))?);
            self.lx.next()?;
        }
        let spec = self.spec()?;
        let stereotype = self.stereotype()?;
        Ok(ElemRef { letter, kind, spec, stereotype, pos })
    }

    fn edge_kind(&mut self) -> Result<EdgeKind, ParseError> {
        let pos = self.lx.next_position();
        match self.lx.next()? {
            Tok::Word(w) => EdgeKind::from_keyword(&w).ok_or_else(|| err_at(pos, format!("unknown edge kind `{w}`"))),
            other => Err(err_at(pos, format!("expected an edge kind, found {}", other.describe()))),
        }
    }

    fn edge_decl(&mut self, letter: DiagramLetter, pos: Pos) -> Result<(), ParseError> {
        let kind = self.edge_kind()?;
        let from = self.elem_ref(true)?;
        self.expect(Tok::Arrow)?;
        let to = self.elem_ref(true)?;
        let (mut label, mut multiplicity, mut returns) = (None, None, None);
        while let Tok::Word(w) = self.lx.peek()? {
            let at = self.lx.next_position();
            let slot = match w.as_str() {
                "label" => &mut label,
                "mult" => &mut multiplicity,
                "returns" => &mut returns,
                _ => break,
            };
            if slot.is_some() {
                return Err(err_at(at, format!("`{w}` given twice")));
            }
            self.lx.next()?;
            *slot = Some(self.string()?);
        }
        self.edges.push(PendingEdge { letter, kind, from, to, label, multiplicity, returns, pos });
        Ok(())
    }

    fn rule_decl(&mut self, block: Option<DiagramLetter>, pos: Pos) -> Result<(), ParseError> {
        if !self.rules_allowed {
            return Err(err_at(pos, "rules are not allowed here"));
        }
        self.expect_word("on")?;
        let mut letter = block;
        if let Tok::Word(w) = self.lx.peek()? {
            if let Some(l) = as_letter(&w) {
                self.lx.next()?;
                letter = Some(l);
            }
        }
        let letter = letter.ok_or_else(|| err_at(pos, "a rule outside a diagram block must name its host diagram"))?;
        let host = match self.lx.peek()? {
            Tok::Word(w) if w == "edge" => {
                self.lx.next()?;
                let kind = self.edge_kind()?;
                let (mut from, mut to) = (None, None);
                if let Tok::Str(_) = self.lx.peek()? {
                    from = Some(self.spec()?);
                    self.expect(Tok::Arrow)?;
                    to = Some(self.spec()?);
                }
                let mut label = None;
                if self.lx.peek()? == Tok::Word("label".into()) {
                    self.lx.next()?;
                    label = Some(self.string()?);
                }
                Host::Edge { kind, from, to, label }
            }
            _ => {
                let r = self.elem_ref(false)?;
                if r.stereotype.is_some() {
                    return Err(err_at(r.pos, "a rule host is named without a stereotype"));
                }
                Host::Element { kind: r.kind, spec: r.spec }
            }
        };
        self.expect(Tok::Colon)?;
        let (line, col) = self.lx.next_position();
        let text = self.lx.rest_of_line();
        if text.is_empty() {
            return Err(err_at((line, col), "missing rule text"));
        }
        let rule = resolve_rule(&text).map_err(|e| err_at((line, col + e.offset().unwrap_or(0)), e.to_string()))?;
        let att = Attachment::new(letter, host, rule).map_err(|e| err_at(pos, e.to_string()))?;
        self.arch.attachments.push(att);
        Ok(())
    }

    fn resolve(&self, default: DiagramLetter, r: &ElemRef) -> Result<ElementId, ParseError> {
        let letter = r.letter.unwrap_or(default);
        let d = self
            .arch
            .diagram(letter)
            .ok_or_else(|| err_at(r.pos, format!("dangling edge endpoint: diagram {letter} is not declared")))?;
        let candidates: Vec<&Element> = d
            .elements
            .iter()
            .filter(|e| e.spec == r.spec && r.kind.is_none_or(|k| k == e.kind))
            .filter(|e| r.stereotype.is_none() || e.stereotype == r.stereotype)
            .collect();
        candidates
            .iter()
            .find(|e| r.stereotype.is_some() || e.stereotype.is_none())
            .or(candidates.first())
            .map(|e| e.id)
            .ok_or_else(|| err_at(r.pos, format!("dangling edge endpoint `{}` in diagram {letter}", r.spec)))
    }

    fn finish(mut self) -> Result<Architecture, ParseError> {
        for (letter, r, attr) in std::mem::take(&mut self.attrs) {
            let id = self.resolve(letter, &r)?;
            let res = match attr {
                PendingAttr::Scenario(steps) => self.arch.set_scenario(id, steps),
                PendingAttr::Operations(ops) => self.arch.set_operations(id, ops),
            };
            res.map_err(|e| err_at(r.pos, e.to_string()))?;
        }
        for e in std::mem::take(&mut self.edges) {
            let from = self.resolve(e.letter, &e.from)?;
            let to = self.resolve(e.letter, &e.to)?;
            if self.arch.element(from).map(|(l, _)| l) != Some(e.letter) {
                return Err(err_at(e.from.pos, "an edge must start in its own diagram"));
            }
            self.arch
                .create_edge_full(e.letter, e.kind, from, to, e.label, e.multiplicity, e.returns)
                .map_err(|m| err_at(e.pos, m.to_string()))?;
        }
        Ok(self.arch)
    }
}

fn as_letter(word: &str) -> Option<DiagramLetter> {
    let mut cs = word.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) => DiagramLetter::from_char(c),
        _ => None,
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn stereo(s: &Option<String>) -> String {
    s.as_ref().map(|s| format!(" <<{s}>>")).unwrap_or_default()
}

/// Shortest reference that resolves back to `el` from diagram `from`.
fn ref_text(arch: &Architecture, from: DiagramLetter, id: ElementId) -> String {
    let Some((letter, el)) = arch.element(id) else { return quote(&format!("?{id}")) };
    let d = arch.diagram(letter).expect("element found");
    let mut s = String::new();
    if letter != from {
        s.push_str(&format!("{} ", letter.as_char()));
    }
    let same_spec: Vec<&Element> = d.elements.iter().filter(|e| e.spec == el.spec).collect();
    if same_spec.len() > 1 {
        s.push_str(el.kind.keyword());
        s.push(' ');
    }
    s.push_str(&quote(&el.spec.to_string()));
    if el.stereotype.is_some() && same_spec.iter().filter(|e| e.kind == el.kind).count() > 1 {
        s.push_str(&stereo(&el.stereotype));
    }
    s
}

fn write_elements(out: &mut String, d: &Diagram, container: Option<ElementId>, depth: usize) {
    let pad = "  ".repeat(depth);
    for el in d.elements.iter().filter(|e| e.container == container) {
        let _ = write!(out, "{pad}{} {}{}", el.kind.keyword(), quote(&el.spec.to_string()), stereo(&el.stereotype));
        if el.kind.is_container() && d.elements.iter().any(|e| e.container == Some(el.id)) {
            out.push_str(" {\n");
            write_elements(out, d, Some(el.id), depth + 1);
            let _ = writeln!(out, "{pad}}}");
        } else {
            out.push('\n');
        }
    }
}

/// Writes an architecture as a model file. Rules are written after the
/// diagrams, each naming its host diagram.
pub fn write_model(arch: &Architecture) -> String {
    let mut out = format!("architecture {}\n", quote(&arch.name));
    for d in arch.diagrams() {
        let _ = writeln!(out, "\ndiagram {} {} {{", d.letter.as_char(), quote(&d.name));
        write_elements(&mut out, d, None, 1);
        for el in &d.elements {
            let target = ref_text(arch, d.letter, el.id);
            if !el.scenario.is_empty() {
                let steps: Vec<String> = el.scenario.iter().map(|s| quote(s)).collect();
                let _ = writeln!(out, "  scenario {target} {{ {} }}", steps.join(" "));
            }
            if !el.operations.is_empty() {
                let ops: Vec<String> = el.operations.iter().map(|o| quote(&o.to_string())).collect();
                let _ = writeln!(out, "  operations {target} {{ {} }}", ops.join(" "));
            }
        }
        for e in &d.edges {
            let _ = write!(
                out,
                "  edge {} {} -> {}",
                e.kind,
                ref_text(arch, d.letter, e.from),
                ref_text(arch, d.letter, e.to)
            );
            for (key, value) in [("label", &e.label), ("mult", &e.multiplicity), ("returns", &e.returns)] {
                if let Some(v) = value {
                    let _ = write!(out, " {key} {}", quote(v));
                }
            }
            out.push('\n');
        }
        out.push_str("}\n");
    }
    if !arch.attachments.is_empty() {
        out.push('\n');
    }
    for a in &arch.attachments {
        let host = match &a.host {
            Host::Element { kind, spec } => {
                let k = kind.map(|k| format!("{} ", k.keyword())).unwrap_or_default();
                format!("{k}{}", quote(&spec.to_string()))
            }
            Host::Edge { kind, from, to, label } => {
                let mut s = format!("edge {kind}");
                if let (Some(f), Some(t)) = (from, to) {
                    let _ = write!(s, " {} -> {}", quote(&f.to_string()), quote(&t.to_string()));
                }
                if let Some(l) = label {
                    let _ = write!(s, " label {}", quote(l));
                }
                s
            }
        };
        let _ = writeln!(out, "rule on {} {host}: {}", a.host_diagram.as_char(), render(&a.rule));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::descriptors;

    const SEED: &str = r#"
architecture "Office"   # seed

diagram X "Context Diagram" {
  event "Request"
  activity "Office"
  instance ":Decision"
  edge control "Request" -> "Office"
  edge data "Office" -> ":Decision"
  rule on event "Request": Xevi(:Decision)Rivi(:Request)v(1.Request_service)i(:Decision)
}

rule on R activity "1.Request_service": Rivi(:Decision)Ba(Client)ua(Employee,Manager)
"#;

    fn same(a: &Architecture, b: &Architecture) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.letters(), b.letters());
        for d in a.diagrams() {
            let e = b.diagram(d.letter).unwrap();
            assert_eq!(d.name, e.name);
            assert_eq!(descriptors(a, d), descriptors(b, e));
        }
        assert_eq!(a.attachments, b.attachments);
    }

    #[test]
    fn seed_parses() {
        let a = parse_model(SEED).unwrap();
        assert_eq!(a.letters(), vec![DiagramLetter::X]);
        let x = a.diagram(DiagramLetter::X).unwrap();
        assert_eq!((x.elements.len(), x.edges.len()), (3, 2));
        assert_eq!(a.attachments.len(), 2);
        assert_eq!(a.attachments[1].host_diagram, DiagramLetter::R);
        same(&a, &parse_model(&write_model(&a)).unwrap());
    }

    #[test]
    fn containers_attributes_and_cross_diagram_edges() {
        let text = r#"architecture "t"
diagram U "uc" {
  usecase "Registration"
  scenario "Registration" { "1.Form_display" "x[Filled]:Request" }
}
diagram A "bp" {
  partition "Client" <<p>> {
    activity "Send_request"
  }
  instance "[Sent]:Request"
  edge data "Send_request" -> "[Sent]:Request"
}
diagram C "c" {
  class "Request"
  class "Decision"
  operations "Request" { "display" }
  edge association "Request" -> "Decision" mult "1..*"
}
diagram Y "y" {
  usecase "Form_display"
  edge realization "Form_display" -> U usecase "Registration"
}
rule on Q edge message label "downLoad<Requests>": QlmlMqyq
"#;
        let a = parse_model(text).unwrap();
        let ad = a.diagram(DiagramLetter::A).unwrap();
        let p = ad.of_kind(ElementKind::Partition).next().unwrap();
        assert_eq!(p.stereotype.as_deref(), Some("p"));
        assert_eq!(ad.contained_in(p.id).count(), 1);
        let u = a.diagram(DiagramLetter::U).unwrap();
        assert_eq!(u.elements[0].scenario.len(), 2);
        let c = a.diagram(DiagramLetter::C).unwrap();
        assert_eq!(c.edges[0].multiplicity.as_deref(), Some("1..*"));
        assert_eq!(c.elements[0].operations, vec![NameSpec::named("display")]);
        let y = a.diagram(DiagramLetter::Y).unwrap();
        assert_eq!(a.element(y.edges[0].to).unwrap().0, DiagramLetter::U);
        same(&a, &parse_model(&write_model(&a)).unwrap());
    }

    #[test]
    fn ambiguous_names_are_qualified() {
        let mut a = Architecture::new("t");
        let l = DiagramLetter::R;
        let (v, _) = a.find_or_create_element(l, ElementKind::Activity, NameSpec::named("X"), None, None).unwrap();
        let (i1, _) = a.find_or_create_element(l, ElementKind::Instance, NameSpec::named("X"), None, None).unwrap();
        let (i2, _) = a
            .find_or_create_element(l, ElementKind::Instance, NameSpec::named("X"), Some("product".into()), None)
            .unwrap();
        a.create_edge(l, EdgeKind::DataFlow, v, i2, None, None).unwrap();
        a.create_edge(l, EdgeKind::DataFlow, i1, v, None, None).unwrap();
        let text = write_model(&a);
        assert!(text.contains("edge data activity \"X\" -> instance \"X\" <<product>>"), "{text}");
        same(&a, &parse_model(&text).unwrap());
    }

    #[test]
    fn located_errors() {
        let cases = [
            ("architecture \"a\"\ndiagram X \"x\" {\n  widget \"w\"\n}", (3, 3), "unknown element kind"),
            ("architecture \"a\"\ndiagram X \"x\" {\n  edge flow \"a\" -> \"b\"\n}", (3, 8), "unknown edge kind"),
            (
                "architecture \"a\"\ndiagram X \"x\" {\n  event \"a\"\n  edge control \"a\" -> \"b\"\n}",
                (4, 23),
                "dangling",
            ),
            ("architecture \"a\"\nrule on \"x\": XeRi", (2, 1), "host diagram"),
            ("architecture \"a\"\nrule on X \"x\": XeRw", (2, 19), "unknown element"),
            ("architecture \"a\"\ndiagram W \"w\" {}", (2, 9), "unknown diagram letter"),
            ("architecture \"a\"\ndiagram X \"x\" {\n  event \"a[\"\n}", (3, 11), "unclosed"),
            ("", (1, 1), "expected `architecture`"),
        ];
        for (text, (line, col), needle) in cases {
            let e = parse_model(text).unwrap_err();
            assert_eq!((e.line, e.col), (line, col), "{text}: {e}");
            assert!(e.message.contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn host_mismatch_is_reported() {
        let e = parse_model("architecture \"a\"\nrule on R \"x\": XeRi").unwrap_err();
        assert!(e.message.contains("does not match"), "{e}");
    }
}
