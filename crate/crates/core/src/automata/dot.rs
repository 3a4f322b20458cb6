use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Alphabet, AutomataError, Dfa, DfaBuilder};

const START: &str = "__start";

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders `dfa` as a Graphviz digraph.
///
/// Node `s<i>` is state `i`; accepting states are double circles and the
/// initial state gets an unlabeled entry edge from an invisible point. Edges
/// are listed per state in symbol order, with symbols sharing a target merged
/// into one comma-separated label.
pub fn to_dot(dfa: &Dfa, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    out.push_str("digraph dfa {\n");
    out.push_str("    rankdir=LR;\n");
    out.push_str("    node [shape=circle];\n");
    let _ = writeln!(out, "    {START} [shape=point, label=\"\"];");
    for q in 0..dfa.state_count() {
        let shape = if dfa.is_accepting(q) {
            "doublecircle"
        } else {
            "circle"
        };
        match labels.and_then(|l| l.get(q)) {
            Some(label) => {
                let _ = writeln!(out, "    s{q} [shape={shape}, label=\"{}\"];", escape(label));
            }
            None => {
                let _ = writeln!(out, "    s{q} [shape={shape}];");
            }
        }
    }
    let _ = writeln!(out, "    {START} -> s{};", dfa.initial());
    let symbols = dfa.alphabet().symbols();
    for q in 0..dfa.state_count() {
        let mut groups: Vec<(usize, Vec<char>)> = Vec::new();
        for (s, &c) in symbols.iter().enumerate() {
            let target = dfa.target(q, s as u8);
            match groups.iter_mut().find(|(t, _)| *t == target) {
                Some((_, cs)) => cs.push(c),
                None => groups.push((target, vec![c])),
            }
        }
        for (target, cs) in groups {
            let label: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                out,
                "    s{q} -> s{target} [label=\"{}\"];",
                escape(&label.join(","))
            );
        }
    }
    out.push_str("}\n");
    out
}

fn dot_error(line: usize, reason: impl Into<String>) -> AutomataError {
    AutomataError::Dot {
        line,
        reason: reason.into(),
    }
}

/// Splits `[k=v, k="v"]` into pairs.
fn parse_attributes(text: &str, line: usize) -> Result<BTreeMap<String, String>, AutomataError> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| dot_error(line, "attribute list must be bracketed"))?;
    let mut attrs = BTreeMap::new();
    let mut chars = inner.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace() || *c == ',') {
            chars.next();
        }
        if chars.peek().is_none() {
            break;
        }
        let key: String = chars
            .by_ref()
            .take_while(|&c| c != '=')
            .collect::<String>()
            .trim()
            .to_string();
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let mut value = String::new();
        if chars.peek() == Some(&'"') {
            chars.next();
            let mut closed = false;
            while let Some(c) = chars.next() {
                match c {
                    '\\' => value.push(chars.next().ok_or_else(|| dot_error(line, "dangling escape"))?),
                    '"' => {
                        closed = true;
                        break;
                    }
                    c => value.push(c),
                }
            }
            if !closed {
                return Err(dot_error(line, "unterminated string"));
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c == ',' || c.is_whitespace() {
                    break;
                }
                value.push(c);
                chars.next();
            }
        }
        if key.is_empty() {
            return Err(dot_error(line, "empty attribute name"));
        }
        attrs.insert(key, value);
    }
    Ok(attrs)
}

fn parse_node_id(id: &str, line: usize) -> Result<usize, AutomataError> {
    id.strip_prefix('s')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| dot_error(line, format!("unexpected node id '{id}'")))
}

/// Reads back the digraph dialect written by [`to_dot`]. Returns the state
/// labels when the input carried any.
pub fn parse_dot(text: &str, alphabet: &Alphabet) -> Result<(Dfa, Option<Vec<String>>), AutomataError> {
    let mut nodes: BTreeMap<usize, (bool, Option<String>)> = BTreeMap::new();
    let mut edges: Vec<(usize, usize, usize, String)> = Vec::new();
    let mut initial = None;
    let mut opened = false;
    let mut closed = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if !opened {
            if line.starts_with("digraph") && line.ends_with('{') {
                opened = true;
                continue;
            }
            return Err(dot_error(line_no, "expected 'digraph ... {'"));
        }
        if line == "}" {
            closed = true;
            continue;
        }
        if closed {
            return Err(dot_error(line_no, "content after closing brace"));
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| dot_error(line_no, "statement must end with ';'"))?
            .trim();
        if stmt.starts_with("rankdir") || stmt.starts_with("node ") || stmt.starts_with("node[") {
            continue;
        }
        let (head, attrs) = match stmt.find('[') {
            Some(pos) => (stmt[..pos].trim(), Some(parse_attributes(&stmt[pos..], line_no)?)),
            None => (stmt, None),
        };
        if let Some((from, to)) = head.split_once("->") {
            let (from, to) = (from.trim(), to.trim());
            let target = parse_node_id(to, line_no)?;
            if from == START {
                if initial.replace(target).is_some() {
                    return Err(dot_error(line_no, "more than one initial state"));
                }
                continue;
            }
            let source = parse_node_id(from, line_no)?;
            let label = attrs
                .and_then(|mut a| a.remove("label"))
                .ok_or_else(|| dot_error(line_no, "edge without label"))?;
            edges.push((line_no, source, target, label));
        } else if head == START {
            continue;
        } else {
            let q = parse_node_id(head, line_no)?;
            let mut attrs = attrs.unwrap_or_default();
            let accepting = attrs.get("shape").map(String::as_str) == Some("doublecircle");
            if nodes.insert(q, (accepting, attrs.remove("label"))).is_some() {
                return Err(dot_error(line_no, format!("node s{q} declared twice")));
            }
        }
    }
    if !closed {
        return Err(dot_error(text.lines().count(), "missing closing brace"));
    }
    let state_count = nodes.len();
    if nodes.keys().enumerate().any(|(i, &q)| i != q) {
        return Err(dot_error(0, "node ids must be exactly s0..s(n-1)"));
    }
    let mut builder = DfaBuilder::new(alphabet.clone(), state_count)?;
    for (line, source, target, label) in edges {
        for part in label.split(',') {
            let mut cs = part.chars();
            let symbol = match (cs.next(), cs.next()) {
                (Some(c), None) => alphabet
                    .index_of(c)
                    .ok_or_else(|| dot_error(line, format!("symbol '{c}' not in alphabet")))?,
                _ => return Err(dot_error(line, format!("bad edge label '{label}'"))),
            };
            if builder.transition(source, symbol).is_some() {
                return Err(dot_error(line, "duplicate transition"));
            }
            builder
                .set_transition(source, symbol, target)
                .map_err(|e| dot_error(line, e.to_string()))?;
        }
    }
    builder.set_initial(initial.ok_or_else(|| dot_error(0, "no initial state"))?)?;
    let mut labels = Vec::with_capacity(state_count);
    let mut any_label = false;
    for (q, (accepting, label)) in nodes {
        builder.set_accepting(q, accepting)?;
        any_label |= label.is_some();
        labels.push(label.unwrap_or_else(|| format!("s{q}")));
    }
    Ok((builder.build()?, any_label.then_some(labels)))
}
