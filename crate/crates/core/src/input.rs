//! Input documents: a plain text matrix or a JSON object.
//!
//! ```text
//! # comments and blank lines are ignored
//! dim 2
//! 4 0
//! 3 1
//! ```
//!
//! ```json
//! {"version": 1, "generators": [[4, 0], [3, 1]], "label": "curve"}
//! ```

use std::fmt;

use serde::Deserialize;

use crate::matrix::IntMatrix;

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDocument {
    pub generators: IntMatrix,
    pub label: Option<String>,
}

impl InputDocument {
    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.generators.to_i64_rows().expect("parsed entries fit in i64")
    }
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn parse_input(bytes: &[u8]) -> Result<InputDocument, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let (line, column) = position_of(&bytes[..e.valid_up_to()]);
        ParseError::new(line, column, "input is not valid UTF-8")
    })?;
    match text.trim_start().chars().next() {
        None => Err(ParseError::new(1, 1, "empty input")),
        Some('{') => parse_json(text),
        Some(_) => parse_text(text),
    }
}

/// Line and column just after `prefix`.
fn position_of(prefix: &[u8]) -> (usize, usize) {
    let text = String::from_utf8_lossy(prefix);
    let line = text.matches('\n').count() + 1;
    let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (idx, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, idx)),
            (true, Some((c, s))) => {
                out.push((c, &line[s..idx]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c, &line[s..]));
    }
    out
}

fn parse_entry(token: &str, line: usize, column: usize) -> Result<i64, ParseError> {
    if token.starts_with('-') && token[1..].chars().all(|c| c.is_ascii_digit()) && token.len() > 1 {
        return Err(ParseError::new(line, column, format!("negative entry `{token}`")));
    }
    if !token.chars().all(|c| c.is_ascii_digit()) {
        return Err(ParseError::new(line, column, format!("expected a nonnegative integer, found `{token}`")));
    }
    token.parse::<i64>().map_err(|_| ParseError::new(line, column, format!("entry `{token}` is too large")))
}

/// The plain text format: `dim <n>` followed by one generator per line.
pub fn parse_text(text: &str) -> Result<InputDocument, ParseError> {
    let mut dim: Option<usize> = None;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        let Some(n) = dim else {
            dim = Some(parse_dim_line(&toks, line_no)?);
            continue;
        };
        if toks.len() != n {
            let column = if toks.len() > n { toks[n].0 } else { content.chars().count() + 1 };
            return Err(ParseError::new(line_no, column, format!("expected {n} entries, found {}", toks.len())));
        }
        let row = toks.iter().map(|&(c, t)| parse_entry(t, line_no, c)).collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let Some(n) = dim else {
        return Err(ParseError::new(1, 1, "empty input"));
    };
    if rows.is_empty() {
        return Err(ParseError::new(last_line + 1, 1, "no generators after `dim` line"));
    }
    Ok(InputDocument { generators: IntMatrix::from_rows(n, &rows), label: None })
}

fn parse_dim_line(toks: &[(usize, &str)], line: usize) -> Result<usize, ParseError> {
    let (col, word) = toks[0];
    if word != "dim" {
        return Err(ParseError::new(line, col, format!("expected `dim <n>`, found `{word}`")));
    }
    let Some(&(col, value)) = toks.get(1) else {
        return Err(ParseError::new(line, col + word.len(), "missing dimension after `dim`"));
    };
    if let Some(&(extra, _)) = toks.get(2) {
        return Err(ParseError::new(line, extra, "unexpected token after dimension"));
    }
    match value.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(ParseError::new(line, col, format!("dimension must be a positive integer, found `{value}`"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: Option<u64>,
    generators: Vec<Vec<u64>>,
    label: Option<String>,
}

/// The JSON format `{"version": 1, "generators": [[...], ...], "label": ...}`.
pub fn parse_json(text: &str) -> Result<InputDocument, ParseError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        // serde appends its own position; keep only the message
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        ParseError::new(e.line().max(1), e.column().max(1), msg)
    })?;
    if let Some(v) = raw.version {
        if v != 1 {
            let (line, column) = locate_key(text, "version").unwrap_or((1, 1));
            return Err(ParseError::new(line, column, format!("unsupported version {v}, expected 1")));
        }
    }
    let Some(first) = raw.generators.first() else {
        let (line, column) = locate_key(text, "generators").unwrap_or((1, 1));
        return Err(ParseError::new(line, column, "no generators"));
    };
    let n = first.len();
    if n == 0 {
        let (line, column) = locate_row(text, 0).unwrap_or((1, 1));
        return Err(ParseError::new(line, column, "generators must have at least one entry"));
    }
    let mut rows = Vec::with_capacity(raw.generators.len());
    for (k, row) in raw.generators.iter().enumerate() {
        let locate = || locate_row(text, k).unwrap_or((1, 1));
        if row.len() != n {
            let (line, column) = locate();
            return Err(ParseError::new(
                line,
                column,
                format!("generator {} has {} entries, expected {n}", k + 1, row.len()),
            ));
        }
        let row = row
            .iter()
            .map(|&x| i64::try_from(x))
            .collect::<Result<Vec<i64>, _>>()
            .map_err(|_| {
                let (line, column) = locate();
                ParseError::new(line, column, format!("generator {} has an entry that is too large", k + 1))
            })?;
        rows.push(row);
    }
    Ok(InputDocument { generators: IntMatrix::from_rows(n, &rows), label: raw.label })
}

/// Character cursor over JSON text tracking line and column.
struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { chars: text.chars().peekable(), line: 1, column: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn read_string(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.bump() {
            match c {
                '"' => break,
                '\\' => {
                    if let Some(e) = self.bump() {
                        s.push(e);
                    }
                }
                _ => s.push(c),
            }
        }
        s
    }
}

/// Position of the key `"name"` of the top-level object.
fn locate_key(text: &str, name: &str) -> Option<(usize, usize)> {
    let mut sc = Scanner::new(text);
    let mut depth = 0usize;
    loop {
        let (line, column) = (sc.line, sc.column);
        match sc.bump()? {
            '"' => {
                let s = sc.read_string();
                if depth == 1 && s == name {
                    return Some((line, column));
                }
            }
            '{' | '[' => depth += 1,
            '}' | ']' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
}

/// Position of the opening bracket of row `k` of the top-level
/// `"generators"` array.
fn locate_row(text: &str, k: usize) -> Option<(usize, usize)> {
    let mut sc = Scanner::new(text);
    let mut stack: Vec<char> = Vec::new();
    let mut last_key = String::new();
    let mut in_generators = false;
    let mut row = 0usize;
    loop {
        let (line, column) = (sc.line, sc.column);
        match sc.bump()? {
            '"' => {
                let s = sc.read_string();
                if stack.len() == 1 {
                    last_key = s;
                }
            }
            '[' => {
                if stack == ['{'] && last_key == "generators" {
                    in_generators = true;
                } else if in_generators && stack.len() == 2 {
                    if row == k {
                        return Some((line, column));
                    }
                    row += 1;
                }
                stack.push('[');
            }
            '{' => stack.push('{'),
            ']' | '}' => {
                stack.pop();
                if stack.len() == 1 {
                    in_generators = false;
                }
            }
            _ => {}
        }
    }
}
