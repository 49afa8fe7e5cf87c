//! CSV multiplication tables: `N` lines of `N` comma-separated 0-based indices,
//! row `g` column `h` holding `g*h`. No header; element 0 is the identity.

use std::path::Path;

use super::{GroupError, GroupTable};

pub fn parse_table_csv(text: &str) -> Result<GroupTable, GroupError> {
    let mut rows = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut row = Vec::new();
        let mut column = 1;
        for field in line.split(',') {
            if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
                return Err(GroupError::Parse {
                    line: line_no + 1,
                    column,
                    message: format!("expected a non-negative integer, found {field:?}"),
                });
            }
            let value = field.parse().map_err(|e| GroupError::Parse {
                line: line_no + 1,
                column,
                message: format!("{e}"),
            })?;
            row.push(value);
            column += field.len() + 1;
        }
        rows.push(row);
    }
    GroupTable::from_rows(&rows)
}

pub fn import_table(path: impl AsRef<Path>) -> Result<GroupTable, GroupError> {
    parse_table_csv(&std::fs::read_to_string(path)?)
}

/// Serializes a table in the import format, one newline-terminated row per element.
pub fn to_csv(table: &GroupTable) -> String {
    let mut out = String::new();
    for row in table.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
