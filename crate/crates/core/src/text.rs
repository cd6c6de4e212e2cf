//! Line-oriented helpers shared by the text formats.

use thiserror::Error;

/// A syntax error tied to a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            message: message.into(),
        }
    }
}

/// Non-empty lines with `#` comments stripped, paired with their line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw
            .match_indices('#')
            .map(|(pos, _)| pos)
            .find(|&pos| !starts_letter_token(raw, pos))
        {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

// `#0` and `#1` are legal letter names (fresh letters of the reductions), so a
// `#` only opens a comment when it starts a token that is not followed by a
// digit.
fn starts_letter_token(raw: &str, pos: usize) -> bool {
    let before_ok = pos == 0 || raw[..pos].ends_with(char::is_whitespace) || raw[..pos].ends_with(['(', ',']);
    let next = raw[pos + 1..].chars().next();
    before_ok && next.is_some_and(|c| c.is_ascii_digit())
}

/// If `line` starts with `keyword:`, returns the remainder.
pub(crate) fn keyword<'a>(line: &'a str, keyword: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(keyword)?;
    let rest = rest.trim_start();
    rest.strip_prefix(':').map(str::trim)
}
