use super::ast::*;
use std::fmt::{self, Write};

/// Canonical rule text. Stereotypes always use ASCII `<<..>>`.
pub fn render(ast: &RuleAst) -> String {
    ast.to_string()
}

impl fmt::Display for RuleAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for part in &self.parts {
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

impl fmt::Display for DiagramPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char(self.diagram.as_char())?;
        write_items(f, &self.items)
    }
}

fn write_items(f: &mut fmt::Formatter<'_>, items: &[Item]) -> fmt::Result {
    for item in items {
        match item {
            Item::Elem(e) => write!(f, "{e}")?,
            Item::Group(g) => {
                f.write_char('(')?;
                for (k, branch) in g.branches.iter().enumerate() {
                    if k > 0 {
                        f.write_char('|')?;
                    }
                    write_items(f, branch)?;
                }
                write!(f, "){}", g.quant.suffix())?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for ElemItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char(self.letter.as_char())?;
        if let Some(st) = &self.stereotype {
            write!(f, "<<{st}>>")?;
        }
        if !self.args.is_empty() {
            let message = self.letter == ItemLetter::Element(crate::model::ElementKind::Message);
            let args: Vec<String> = self
                .args
                .iter()
                .map(|a| match a {
                    Arg::Name(n) if message && n.state.is_none() && n.name.is_some() && n.classifier.is_some() => {
                        format!(
                            "{}::{}",
                            n.name.as_deref().unwrap_or_default(),
                            n.classifier.as_deref().unwrap_or_default()
                        )
                    }
                    _ => a.to_string(),
                })
                .collect();
            write!(f, "({})", args.join(","))?;
        }
        f.write_str(self.quant.suffix())
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(n) => write!(f, "{n}"),
            Arg::Multiplicity(m) => f.write_str(m),
            Arg::States(states) => {
                let parts: Vec<String> = states.iter().map(|s| format!("[{s}]")).collect();
                f.write_str(&parts.join(","))
            }
            Arg::Pattern(p) => {
                let d = p.depth as usize;
                write!(f, "{}{}{}", "{".repeat(d), p.name, "}".repeat(d))?;
                for r in &p.roles {
                    f.write_char(r.letter())?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_rule;
    use super::*;

    #[test]
    fn canonical_forms() {
        for (input, canonical) in [
            ("XeviRivi", "XeviRivi"),
            ("Bu«scenarios»An«start»(v+|i+)+n«stop»", "Bu<<scenarios>>An<<start>>(v+|i+)+n<<stop>>"),
            ("Rev⟨⟨subprocess⟩⟩i⟨⟨product⟩⟩Baua", "Rev<<subprocess>>i<<product>>Baua"),
            (
                "SrsZv({{RequestRegistration}})i([Sent], [Registered])",
                "SrsZv({{RequestRegistration}})i([Sent],[Registered])",
            ),
            ("RiviAv({Office}i)", "RiviAv({Office}i)"),
            ("AiviCcz(1..*)c", "AiviCcz(1..*)c"),
            ("YuQl(Registration)m(downLoad<Request>::Request)l", "YuQl(Registration)m(downLoad<Request>::Request)l"),
        ] {
            let ast = parse_rule(input).unwrap();
            assert_eq!(render(&ast), canonical);
            assert_eq!(parse_rule(canonical).unwrap(), ast);
        }
    }
}
