//! Blank-line separated `key: value` stanzas, `#` comments.

use super::VerifyError;

#[derive(Clone, Debug, PartialEq)]
pub struct Stanza {
    pub line: u32,
    pub fields: Vec<(String, String, u32)>,
}

impl Stanza {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _, _)| k == key).map(|(_, v, _)| v.as_str())
    }

    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = (&'a str, u32)> + 'a {
        self.fields.iter().filter(move |(k, _, _)| k == key).map(|(_, v, l)| (v.as_str(), *l))
    }

    pub fn require(&self, key: &str) -> Result<&str, VerifyError> {
        self.get(key).ok_or_else(|| VerifyError::Format { line: self.line, msg: format!("missing `{key}:`") })
    }

    pub fn line_of(&self, key: &str) -> u32 {
        self.fields.iter().find(|(k, _, _)| k == key).map_or(self.line, |(_, _, l)| *l)
    }
}

pub fn parse_stanzas(text: &str, keys: &[&str]) -> Result<Vec<Stanza>, VerifyError> {
    let mut out = Vec::new();
    let mut current: Option<Stanza> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = u32::try_from(idx + 1).unwrap_or(u32::MAX);
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            out.extend(current.take());
            continue;
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(VerifyError::Format { line, msg: format!("expected `key: value`, found `{trimmed}`") });
        };
        let key = key.trim();
        if !keys.contains(&key) {
            return Err(VerifyError::Format { line, msg: format!("unknown field `{key}`") });
        }
        let st = current.get_or_insert_with(|| Stanza { line, fields: Vec::new() });
        st.fields.push((key.to_string(), value.trim().to_string(), line));
    }
    out.extend(current);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_blank_lines() {
        let text = "# c\nname: a\nlhs: {A1,A2}\n\n\nname: b\nrhs: 0\n";
        let s = parse_stanzas(text, &["name", "lhs", "rhs"]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].get("lhs"), Some("{A1,A2}"));
        assert_eq!(s[1].line, 6);
        assert_eq!(s[1].line_of("rhs"), 7);
    }

    #[test]
    fn rejects_unknown_fields() {
        let err = parse_stanzas("name: a\nfoo: b\n", &["name"]).unwrap_err();
        assert!(matches!(err, VerifyError::Format { line: 2, .. }));
    }
}
