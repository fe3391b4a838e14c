//! A structural VRML97 reader: enough to check what a writer produced,
//! not a full parser.

use std::collections::BTreeMap;

use super::VRML_HEADER;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VrmlSummary {
    pub header: String,
    /// Occurrences of each node type (`Transform`, `Shape`, …).
    pub node_counts: BTreeMap<String, usize>,
    pub def_names: Vec<String>,
    /// `(from, to)` pairs, e.g. `("T0_clock.fraction_changed", "T0_interp.set_fraction")`.
    pub routes: Vec<(String, String)>,
    pub top_level_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    Open(char),
    Close(char),
}

fn tokenize(body: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '#' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => s.extend(chars.next()),
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(Error::Config("unterminated string".into())),
                    }
                }
                toks.push(Tok::Str(s));
            }
            '{' | '[' => toks.push(Tok::Open(c)),
            '}' | ']' => toks.push(Tok::Close(c)),
            c if c.is_whitespace() || c == ',' => {}
            c => {
                let mut w = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || "{}[]\",#".contains(n) {
                        break;
                    }
                    w.push(n);
                    chars.next();
                }
                toks.push(Tok::Word(w));
            }
        }
    }
    Ok(toks)
}

fn is_node_type(w: &str) -> bool {
    w.chars().next().is_some_and(|c| c.is_ascii_uppercase()) && w.chars().all(|c| c.is_ascii_alphanumeric())
}

/// Summarizes a VRML97 document: header, node types, `DEF`s and `ROUTE`s.
pub fn read_vrml(text: &str) -> Result<VrmlSummary> {
    let (header, body) = text.split_once('\n').unwrap_or((text, ""));
    if header.trim_end() != VRML_HEADER {
        return Err(Error::Config(format!("bad VRML header {header:?}")));
    }
    let toks = tokenize(body)?;
    let mut sum = VrmlSummary {
        header: header.trim_end().to_string(),
        ..Default::default()
    };
    let mut stack: Vec<char> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        match &toks[i] {
            Tok::Open(c) => {
                if *c == '{' {
                    if let Some(Tok::Word(w)) = i.checked_sub(1).map(|j| &toks[j]) {
                        if is_node_type(w) {
                            *sum.node_counts.entry(w.clone()).or_default() += 1;
                            if stack.is_empty() {
                                sum.top_level_nodes += 1;
                            }
                        }
                    }
                }
                stack.push(*c);
            }
            Tok::Close(c) => {
                let want = if *c == '}' { '{' } else { '[' };
                if stack.pop() != Some(want) {
                    return Err(Error::Config(format!("unbalanced {c:?}")));
                }
            }
            Tok::Word(w) if w == "DEF" => {
                if let Some(Tok::Word(name)) = toks.get(i + 1) {
                    sum.def_names.push(name.clone());
                    i += 1;
                }
            }
            Tok::Word(w) if w == "ROUTE" => match (toks.get(i + 1), toks.get(i + 2), toks.get(i + 3)) {
                (Some(Tok::Word(from)), Some(Tok::Word(to_kw)), Some(Tok::Word(to))) if to_kw == "TO" => {
                    sum.routes.push((from.clone(), to.clone()));
                    i += 3;
                }
                _ => return Err(Error::Config("malformed ROUTE".into())),
            },
            _ => {}
        }
        i += 1;
    }
    if !stack.is_empty() {
        return Err(Error::Config("unclosed bracket".into()));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_nodes_and_routes() {
        let doc = "#VRML V2.0 utf8\n# comment { \nDEF A Transform { children [ Shape { geometry Text { string [ \"}\" ] } } ] }\n\
                   DEF C TimeSensor { loop TRUE }\nROUTE C.fraction_changed TO A.set_x\n";
        let s = read_vrml(doc).unwrap();
        assert_eq!(s.node_counts["Transform"], 1);
        assert_eq!(s.node_counts["Shape"], 1);
        assert_eq!(s.node_counts["Text"], 1);
        assert_eq!(s.top_level_nodes, 2);
        assert_eq!(s.def_names, ["A", "C"]);
        assert_eq!(s.routes, [("C.fraction_changed".to_string(), "A.set_x".to_string())]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_vrml("#VRML V1.0 ascii\n").is_err());
        assert!(read_vrml("#VRML V2.0 utf8\nShape { ").is_err());
        assert!(read_vrml("#VRML V2.0 utf8\nShape { ] }").is_err());
    }
}
