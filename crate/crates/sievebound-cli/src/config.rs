//! Line-based `key=value` configuration files; flags override file values.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

pub fn load(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Fills an optional flag from the config map when absent on the CLI.
pub fn fill(slot: &mut Option<String>, map: &BTreeMap<String, String>, key: &str) {
    if slot.is_none() {
        if let Some(v) = map.get(key) {
            *slot = Some(v.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_comments() {
        let map = parse("theta = 1/4\n# comment\nk=5  # trailing\n\n").unwrap();
        assert_eq!(map["theta"], "1/4");
        assert_eq!(map["k"], "5");
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn rejects_bare_words() {
        assert!(parse("nonsense").is_err());
    }

    #[test]
    fn flags_override() {
        let map = parse("k=5").unwrap();
        let mut set = Some("3".to_string());
        let mut unset = None;
        fill(&mut set, &map, "k");
        fill(&mut unset, &map, "k");
        assert_eq!(set.as_deref(), Some("3"));
        assert_eq!(unset.as_deref(), Some("5"));
    }
}
