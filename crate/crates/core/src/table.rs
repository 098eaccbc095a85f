//! Knot tables: one `name<TAB>pd` record per line, `#` starts a comment.

use thiserror::Error;

/// Prime alternating knots with at most nine crossings.
pub const BUNDLED_TABLE: &str = include_str!("../data/knots_upto9.tsv");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: expected `name<TAB>pd`")]
    BadRecord { line: usize },
    #[error("line {line}: duplicate knot name {name:?}")]
    Duplicate { line: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub name: String,
    pub pd: String,
    /// 1-based line number in the source text.
    pub line: usize,
}

pub fn parse_table(text: &str) -> Result<Vec<TableEntry>, TableError> {
    let mut out: Vec<TableEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        if content.trim().is_empty() {
            continue;
        }
        let Some((name, pd)) = content.split_once('\t') else {
            return Err(TableError::BadRecord { line });
        };
        let (name, pd) = (name.trim(), pd.trim());
        if name.is_empty() || pd.is_empty() {
            return Err(TableError::BadRecord { line });
        }
        if out.iter().any(|e| e.name == name) {
            return Err(TableError::Duplicate {
                line,
                name: name.to_string(),
            });
        }
        out.push(TableEntry {
            name: name.to_string(),
            pd: pd.to_string(),
            line,
        });
    }
    Ok(out)
}

pub fn bundled_table() -> Vec<TableEntry> {
    parse_table(BUNDLED_TABLE).expect("bundled table is well formed")
}

pub fn lookup<'a>(entries: &'a [TableEntry], name: &str) -> Option<&'a TableEntry> {
    entries.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_records_and_comments() {
        let text = "# header\n3_1\tX(1,4,2,5) X(3,6,4,1) X(5,2,6,3)  # trefoil\n\n4_1\tX(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)\n";
        let t = parse_table(text).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].name, "3_1");
        assert_eq!(t[0].pd, "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)");
        assert_eq!(t[1].line, 4);
        assert_eq!(lookup(&t, "4_1").map(|e| e.line), Some(4));
        assert!(lookup(&t, "5_1").is_none());
    }

    #[test]
    fn rejects_bad_lines() {
        assert_eq!(
            parse_table("3_1 X(1,2,2,1)"),
            Err(TableError::BadRecord { line: 1 })
        );
        assert!(matches!(
            parse_table("a\tX(1,2,2,1)\na\tX(1,2,2,1)"),
            Err(TableError::Duplicate { line: 2, .. })
        ));
    }

    #[test]
    fn bundled_table_contents() {
        let t = bundled_table();
        assert_eq!(t.len(), 73);
        for name in ["3_1", "4_1", "7_6", "9_41"] {
            assert!(lookup(&t, name).is_some(), "{name}");
        }
    }
}
