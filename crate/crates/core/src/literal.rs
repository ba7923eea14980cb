//! Text format for named sets.
//!
//! A set file is one group-spec line followed by one set per line:
//!
//! ```text
//! Z/4xZ/6
//! A = {0, 5, 23}
//! B = {(0,1), (3,5)}
//! ```
//!
//! Elements are canonical indices or coordinate tuples. Blank lines and lines
//! starting with `#` are ignored. Inline CLI literals use the same `name = {..}`
//! grammar.

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::set::GroupSet;

#[derive(Clone, Debug)]
pub struct SetFile {
    pub group: GroupSpec,
    pub sets: Vec<(String, GroupSet)>,
}

impl SetFile {
    pub fn get(&self, name: &str) -> Option<&GroupSet> {
        self.sets.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

pub fn parse_set_file(text: &str, max_order: u64) -> Result<SetFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("set file is empty".into()))?;
    let group = GroupSpec::parse_with_cap(header, max_order)?;
    let mut sets: Vec<(String, GroupSet)> = Vec::new();
    for (lineno, line) in lines {
        let (name, set) =
            parse_set_literal(&group, line).map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
        if sets.iter().any(|(n, _)| *n == name) {
            return Err(Error::Parse(format!("line {lineno}: set {name:?} defined twice")));
        }
        sets.push((name, set));
    }
    Ok(SetFile { group, sets })
}

/// Parses `name = {e1, e2, ...}`.
pub fn parse_set_literal(group: &GroupSpec, text: &str) -> Result<(String, GroupSet)> {
    let (name, body) = text
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected `name = {{...}}`, got {text:?}")))?;
    let name = name.trim();
    let valid_name = name
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    if !valid_name {
        return Err(Error::Parse(format!("invalid set name {name:?}")));
    }
    let set = parse_set_body(group, body.trim())?;
    Ok((name.to_string(), set))
}

/// Parses `{e1, e2, ...}`.
pub fn parse_set_body(group: &GroupSpec, body: &str) -> Result<GroupSet> {
    let inner = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("set body must be wrapped in braces: {body:?}")))?;
    let mut indices = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let (token, tail) = if rest.starts_with('(') {
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed tuple in {body:?}")))?;
            (&rest[..=close], &rest[close + 1..])
        } else {
            match rest.find(',') {
                Some(p) => (&rest[..p], &rest[p..]),
                None => (rest, ""),
            }
        };
        indices.push(parse_element(group, token.trim())?);
        let tail = tail.trim_start();
        rest = match tail.strip_prefix(',') {
            Some(t) => {
                let t = t.trim_start();
                if t.is_empty() {
                    return Err(Error::Parse(format!("trailing comma in {body:?}")));
                }
                t
            }
            None if tail.is_empty() => tail,
            None => return Err(Error::Parse(format!("expected ',' before {tail:?}"))),
        };
    }
    GroupSet::from_indices(group, indices)
}

fn parse_element(group: &GroupSpec, token: &str) -> Result<u64> {
    let bad = || Error::Parse(format!("bad element {token:?}"));
    if let Some(tuple) = token.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let coords = tuple
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Ok(group.encode(&coords)?.index() as u64)
    } else {
        let v: u64 = token.parse().map_err(|_| bad())?;
        Ok(group.element(v)?.index() as u64)
    }
}

pub fn format_set_literal(name: &str, set: &GroupSet) -> String {
    format!("{name} = {set}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_tuples_and_comments() {
        let text = "# demo\nZ/4xZ/6\n\nA = {0, 5, 23}\nB = {(0,1), (3, 5)}\nE = {}\n";
        let file = parse_set_file(text, 1 << 24).unwrap();
        assert_eq!(file.group.order(), 24);
        assert_eq!(file.get("A").unwrap().to_vec(), vec![0, 5, 23]);
        assert_eq!(file.get("B").unwrap().to_vec(), vec![1, 23]);
        assert!(file.get("E").unwrap().is_empty());
    }

    #[test]
    fn literal_round_trip() {
        let g = GroupSpec::parse("Z/100").unwrap();
        let (name, s) = parse_set_literal(&g, "A={0,1,2,3,4}").unwrap();
        assert_eq!(name, "A");
        assert_eq!(s.len(), 5);
        let text = format_set_literal(&name, &s);
        assert_eq!(parse_set_literal(&g, &text).unwrap().1, s);
    }

    #[test]
    fn rejects_malformed() {
        let g = GroupSpec::parse("Z/10").unwrap();
        for bad in ["A {1}", "= {1}", "1A = {1}", "A = 1,2", "A = {1,}", "A = {1 2}", "A = {10}", "A = {(1,2)}", "A = {x}"] {
            assert!(parse_set_literal(&g, bad).is_err(), "{bad:?}");
        }
        assert!(parse_set_file("", 100).is_err());
        assert!(parse_set_file("Z/10\nA={1}\nA={2}", 100).is_err());
    }
}
