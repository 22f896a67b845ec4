//! Artifact serialization and all-or-nothing writes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::CliError;

/// A named file body, produced in memory before anything touches disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn json<T: Serialize>(name: &str, value: &T) -> Self {
        let mut bytes = serde_json::to_vec_pretty(value).expect("artifact serializes");
        bytes.push(b'\n');
        Self {
            name: name.to_owned(),
            bytes,
        }
    }

    /// CSV with `header` and string-formatted `rows`.
    pub fn csv(name: &str, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory csv write");
        for row in rows {
            w.write_record(&row).expect("in-memory csv write");
        }
        Self {
            name: name.to_owned(),
            bytes: w.into_inner().expect("in-memory csv flush"),
        }
    }
}

/// Writes every artifact into `dir` through temp files in the same
/// directory. Renames happen only after all bodies are on disk.
pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut staged = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
        tmp.write_all(&a.bytes)
            .and_then(|_| tmp.as_file().sync_all())
            .map_err(|e| CliError::io(tmp.path(), e))?;
        staged.push((tmp, dir.join(&a.name)));
    }
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let a = Artifact::csv("t.csv", &["a".into(), "b".into()], vec![vec!["1".into(), "2.5".into()]]);
        assert_eq!(String::from_utf8(a.bytes).unwrap(), "a,b\n1,2.5\n");
    }

    #[test]
    fn writes_and_leaves_no_temp_files() {
        let dir = tempfile::tempdir().unwrap();
        let arts = [Artifact::json("x.json", &[1, 2]), Artifact::json("y.json", &"s")];
        write_all(dir.path(), &arts).unwrap();
        let mut names: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert_eq!(names, ["x.json", "y.json"]);
    }
}
