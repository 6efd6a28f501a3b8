//! Textual problem documents.
//!
//! A document declares variables with explicit domains, then constraints
//! over them:
//!
//! ```text
//! # a comment
//! var x1 in [3,6]        # inclusive range
//! var x2 in {1,3}        # explicit value set (holes preserved)
//! var x3 in {2}
//!
//! alldifferent x1 x2 x3
//! alldifferent x1+1 x2-2 # optional constant offsets per variable
//! ```
//!
//! Names map to dense variable ids in declaration order, and
//! `parse(serialize(p))` reproduces `p` structurally.

use std::fmt;

use alldiff_core::model::{
    validate, AllDifferentConstraint, Domain, DomainStore, ModelError, Problem, Value, VariableId,
};

/// A problem plus the variable names of its document form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedProblem {
    pub names: Vec<String>,
    pub problem: Problem,
}

impl NamedProblem {
    pub fn name_of(&self, var: VariableId) -> &str {
        &self.names[var.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    Model(Vec<ModelError>),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, msg } => {
                write!(f, "line {line}, column {col}: {msg}")
            }
            ParseError::Model(errors) => {
                write!(f, "invalid model:")?;
                for e in errors {
                    write!(f, "\n  {e}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ParseError {}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// `(token, 1-based starting column)` pairs of one line, comments stripped.
fn tokenize(line: &str) -> Vec<(&str, usize)> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((&line[s..i], s + 1));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((&line[s..], s + 1));
    }
    tokens
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_value(s: &str, line: usize, col: usize) -> Result<Value, ParseError> {
    s.trim()
        .parse::<Value>()
        .map_err(|_| syntax(line, col, format!("expected an integer, found `{s}`")))
}

/// Domains are explicit value sets in memory, so reject ranges that
/// would materialize absurd amounts of values.
pub const MAX_RANGE_WIDTH: i128 = 10_000_000;

/// Domain written either as `[lo,hi]` or `{v1,v2,...}` (spaces allowed,
/// `{}` is the empty domain).
fn parse_domain(spec: &str, line: usize, col: usize) -> Result<Domain, ParseError> {
    let spec = spec.trim();
    if let Some(inner) = spec.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 2 {
            return Err(syntax(line, col, "range needs exactly `[lo,hi]`"));
        }
        let lo = parse_value(parts[0], line, col)?;
        let hi = parse_value(parts[1], line, col)?;
        if lo > hi {
            return Err(syntax(
                line,
                col,
                format!("range lower bound {lo} exceeds upper bound {hi}"),
            ));
        }
        if hi as i128 - lo as i128 + 1 > MAX_RANGE_WIDTH {
            return Err(syntax(
                line,
                col,
                format!("range [{lo},{hi}] is wider than {MAX_RANGE_WIDTH} values"),
            ));
        }
        Ok(Domain::range(lo, hi))
    } else if let Some(inner) = spec.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Domain::empty());
        }
        let mut values = Vec::new();
        for part in inner.split(',') {
            values.push(parse_value(part, line, col)?);
        }
        Ok(Domain::new(values))
    } else {
        Err(syntax(
            line,
            col,
            format!("expected `[lo,hi]` or `{{v1,v2,...}}`, found `{spec}`"),
        ))
    }
}

/// Constraint term: `name`, `name+k` or `name-k`.
fn parse_term(term: &str, line: usize, col: usize) -> Result<(&str, Value), ParseError> {
    let split = term
        .char_indices()
        .skip(1)
        .find(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i);
    match split {
        None => Ok((term, 0)),
        Some(i) => {
            let name = &term[..i];
            let offset = parse_value(&term[i..], line, col)?;
            Ok((name, offset))
        }
    }
}

/// Parses a problem document, validating the resulting model.
pub fn parse_problem(doc: &str) -> Result<NamedProblem, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut domains: Vec<Domain> = Vec::new();
    let mut constraints: Vec<AllDifferentConstraint> = Vec::new();

    for (line_no, raw) in doc.lines().enumerate() {
        let line_no = line_no + 1;
        let tokens = tokenize(raw);
        let Some(&(keyword, kw_col)) = tokens.first() else {
            continue;
        };
        match keyword {
            "var" => {
                let Some(&(name, name_col)) = tokens.get(1) else {
                    return Err(syntax(line_no, kw_col, "expected `var <name> in <domain>`"));
                };
                if !is_identifier(name) {
                    return Err(syntax(
                        line_no,
                        name_col,
                        format!("`{name}` is not a valid variable name"),
                    ));
                }
                if names.iter().any(|n| n == name) {
                    return Err(syntax(
                        line_no,
                        name_col,
                        format!("variable `{name}` declared twice"),
                    ));
                }
                match tokens.get(2) {
                    Some(&("in", _)) => {}
                    _ => {
                        return Err(syntax(line_no, name_col, "expected `in` after the name"));
                    }
                }
                let Some(&(_, dom_col)) = tokens.get(3) else {
                    return Err(syntax(line_no, kw_col, "missing domain"));
                };
                // The domain may contain spaces; re-join the remaining tokens.
                let spec: String = tokens[3..]
                    .iter()
                    .map(|&(t, _)| t)
                    .collect::<Vec<_>>()
                    .join("");
                names.push(name.to_string());
                domains.push(parse_domain(&spec, line_no, dom_col)?);
            }
            "alldifferent" => {
                if tokens.len() == 1 {
                    return Err(syntax(line_no, kw_col, "constraint lists no variables"));
                }
                let mut vars = Vec::new();
                let mut offsets = Vec::new();
                for &(term, col) in &tokens[1..] {
                    let (name, offset) = parse_term(term, line_no, col)?;
                    let Some(id) = names.iter().position(|n| n == name) else {
                        return Err(syntax(
                            line_no,
                            col,
                            format!("unknown variable `{name}`"),
                        ));
                    };
                    // Shifted views must stay representable in i64.
                    let d = &domains[id];
                    for bound in [d.min(), d.max()].into_iter().flatten() {
                        if bound.checked_add(offset).is_none() {
                            return Err(syntax(
                                line_no,
                                col,
                                format!("offset {offset} overflows the domain of `{name}`"),
                            ));
                        }
                    }
                    vars.push(VariableId(id));
                    offsets.push(offset);
                }
                constraints.push(AllDifferentConstraint::with_offsets(vars, offsets));
            }
            other => {
                return Err(syntax(
                    line_no,
                    kw_col,
                    format!("expected `var` or `alldifferent`, found `{other}`"),
                ));
            }
        }
    }

    if names.is_empty() {
        return Err(syntax(1, 1, "document declares no variables"));
    }

    let problem = Problem::new(DomainStore::new(domains), constraints);
    validate(&problem).map_err(ParseError::Model)?;
    Ok(NamedProblem { names, problem })
}

fn format_domain(d: &Domain) -> String {
    let contiguous = d.len() >= 2
        && (d.max().unwrap() as i128 - d.min().unwrap() as i128 + 1) == d.len() as i128;
    if contiguous {
        format!("[{},{}]", d.min().unwrap(), d.max().unwrap())
    } else {
        let values: Vec<String> = d.iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", values.join(","))
    }
}

/// Renders a problem as a document that parses back to it.
pub fn serialize_problem(np: &NamedProblem) -> String {
    let mut out = String::new();
    for (i, name) in np.names.iter().enumerate() {
        let d = np.problem.domains.domain(VariableId(i));
        out.push_str(&format!("var {name} in {}\n", format_domain(d)));
    }
    for c in &np.problem.constraints {
        out.push_str("alldifferent");
        for (&v, &o) in c.vars().iter().zip(c.offsets()) {
            out.push(' ');
            out.push_str(&np.names[v.index()]);
            if o != 0 {
                out.push_str(&format!("{o:+}"));
            }
        }
        out.push('\n');
    }
    out
}
