//! Bundled input files: the example algebras, the free-algebra
//! presentations, and a few deliberately broken inputs for the error paths.

use std::path::Path;

use ncdc_core::samples;
use ncdc_core::{Error, Result};

use crate::formats::{AlgebraFile, PresentationFile, RelTerm};

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<String> {
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("serialization: {}", e)))?;
    std::fs::write(&path, text + "\n")
        .map_err(|e| Error::Parse(format!("cannot write {}: {}", path.display(), e)))?;
    Ok(name.to_string())
}

fn write_raw(dir: &Path, name: &str, text: &str) -> Result<String> {
    let path = dir.join(name);
    std::fs::write(&path, text)
        .map_err(|e| Error::Parse(format!("cannot write {}: {}", path.display(), e)))?;
    Ok(name.to_string())
}

fn heisenberg_presentation() -> PresentationFile {
    PresentationFile {
        name: "heisenberg".into(),
        field_order: 4,
        generators: vec!["x".into(), "y".into()],
        precedence: None,
        relations: vec![vec![
            RelTerm(vec![(0, 1, 1)], vec!["x".into(), "y".into()]),
            RelTerm(vec![(0, -1, 1)], vec!["y".into(), "x".into()]),
            RelTerm(vec![(1, -1, 1)], vec![]),
        ]],
    }
}

fn clock_shift_presentation(n: usize) -> PresentationFile {
    PresentationFile {
        name: format!("clockshift{}", n),
        field_order: n as u64,
        generators: vec!["x".into(), "y".into()],
        precedence: None,
        relations: vec![
            vec![
                RelTerm(vec![(0, 1, 1)], vec!["x".into(), "y".into()]),
                RelTerm(vec![(1, -1, 1)], vec!["y".into(), "x".into()]),
            ],
            vec![
                RelTerm(vec![(0, 1, 1)], vec!["x".into(); n]),
                RelTerm(vec![(0, -1, 1)], vec![]),
            ],
            vec![
                RelTerm(vec![(0, 1, 1)], vec!["y".into(); n]),
                RelTerm(vec![(0, -1, 1)], vec![]),
            ],
        ],
    }
}

const BROKEN_ASSOC: &str = r#"{
  "name": "broken-assoc",
  "dim": 3,
  "field_order": 1,
  "labels": ["1", "a", "b"],
  "unit": [[[0, 1, 1]], [], []],
  "sc": [
    [0, 0, 0, [[0, 1, 1]]],
    [0, 1, 1, [[0, 1, 1]]],
    [0, 2, 2, [[0, 1, 1]]],
    [1, 0, 1, [[0, 1, 1]]],
    [2, 0, 2, [[0, 1, 1]]],
    [1, 1, 2, [[0, 1, 1]]],
    [1, 2, 0, [[0, 1, 1]]]
  ]
}
"#;

const BROKEN_UNIT: &str = r#"{
  "name": "broken-unit",
  "dim": 2,
  "field_order": 1,
  "labels": ["1", "x"],
  "unit": [[[0, 1, 1]], []],
  "sc": [
    [0, 0, 0, [[0, 1, 1]]],
    [0, 1, 1, [[0, 1, 1]]]
  ]
}
"#;

const DUPLICATE_LHS: &str = r#"{
  "name": "duplicate-lhs",
  "field_order": 1,
  "generators": ["x", "y"],
  "relations": [
    [[[[0, 1, 1]], ["x", "y"]], [[[0, -1, 1]], ["y", "x"]]],
    [[[[0, 1, 1]], ["x", "y"]], [[[0, -2, 1]], ["y", "x"]]]
  ]
}
"#;

pub fn write_fixtures(dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Parse(format!("cannot create {}: {}", dir.display(), e)))?;
    let mut written = Vec::new();
    for (name, alg) in [
        ("m2.json", samples::m2()),
        ("m3.json", samples::m3()),
        ("c3.json", samples::c3()),
        ("f3xm2.json", samples::f3xm2()),
        ("dual2.json", samples::dual2()),
        ("dual2xm2.json", samples::dual2xm2()),
        ("m2m2.json", samples::m2_plus_m2()),
    ] {
        let stem = name.trim_end_matches(".json");
        written.push(write_json(
            dir,
            name,
            &AlgebraFile::from_algebra(stem, &alg)?,
        )?);
    }
    written.push(write_json(
        dir,
        "heisenberg.pres.json",
        &heisenberg_presentation(),
    )?);
    written.push(write_json(
        dir,
        "clockshift2.pres.json",
        &clock_shift_presentation(2),
    )?);
    written.push(write_json(
        dir,
        "clockshift3.pres.json",
        &clock_shift_presentation(3),
    )?);
    written.push(write_raw(dir, "broken_assoc.json", BROKEN_ASSOC)?);
    written.push(write_raw(dir, "broken_unit.json", BROKEN_UNIT)?);
    written.push(write_raw(dir, "duplicate_lhs.pres.json", DUPLICATE_LHS)?);
    Ok(written)
}
