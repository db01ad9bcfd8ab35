//! Corpus files: pretty-printed base and variant documents plus a JSON
//! lines manifest with one record per case.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sted_core::tree::{parse_document, DocumentTree};
use sted_core::variation::{
    apply_variation, enumerate_cases, gen_base_document, BaseDocSpec, VariationKind, VariationSpec, VariationTables,
};

use crate::error::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    pub case_id: String,
    pub base_seed: u64,
    pub kind: VariationKind,
    pub ratio: Option<f64>,
    /// Relative to the manifest's directory.
    pub base_path: String,
    pub variant_path: String,
}

/// Notes produced while generating, such as flatten key collisions.
#[derive(Debug, Default)]
pub struct GenerateOutcome {
    pub manifest: PathBuf,
    pub cases: usize,
    pub warnings: Vec<String>,
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::internal(dir.display(), e))?;
    }
    fs::write(path, contents).map_err(|e| Error::internal(path.display(), e))
}

fn pretty(doc: &DocumentTree) -> String {
    let mut s = doc.to_json_pretty();
    s.push('\n');
    s
}

/// Generates every base in `bases` and every (kind, ratio) case, writes
/// them under `out`, and writes the manifest last.
pub fn generate_corpus(
    out: &Path,
    bases: &[BaseDocSpec],
    kinds: &[VariationKind],
    ratios: &[f64],
    tables: &VariationTables,
) -> Result<GenerateOutcome> {
    let docs: Vec<DocumentTree> =
        bases.par_iter().map(gen_base_document).collect::<Result<_, _>>().map_err(Error::from)?;
    let base_paths: Vec<String> = (0..bases.len()).map(|i| format!("bases/b{i:03}.json")).collect();
    for (doc, rel) in docs.iter().zip(&base_paths) {
        write_file(&out.join(rel), pretty(doc).as_bytes())?;
    }

    let cases = enumerate_cases(bases, kinds, ratios);
    let variants: Vec<(String, Vec<String>)> = cases
        .par_iter()
        .map(|c| -> Result<(String, Vec<String>)> {
            let spec = VariationSpec { kind: c.kind, ratio: c.ratio.unwrap_or(1.0), seed: c.seed };
            let v = apply_variation(&docs[c.base], &spec, tables)
                .map_err(|e| Error::Input(format!("{}: {e}", c.case_id)))?;
            let warnings = v
                .warnings
                .iter()
                .map(|w| format!("{}: key {:?} collided, renamed to {:?}", c.case_id, w.key, w.renamed_to))
                .collect();
            Ok((pretty(&v.tree), warnings))
        })
        .collect::<Result<_>>()?;

    let mut manifest = String::new();
    let mut warnings = Vec::new();
    for (c, (json, w)) in cases.iter().zip(variants) {
        let rel = format!("variants/{}.json", c.case_id);
        write_file(&out.join(&rel), json.as_bytes())?;
        warnings.extend(w);
        let record = ManifestRecord {
            case_id: c.case_id.clone(),
            base_seed: bases[c.base].seed,
            kind: c.kind,
            ratio: c.ratio,
            base_path: base_paths[c.base].clone(),
            variant_path: rel,
        };
        manifest.push_str(&serde_json::to_string(&record).map_err(|e| Error::internal("manifest", e))?);
        manifest.push('\n');
    }
    let path = out.join(MANIFEST_NAME);
    write_file(&path, manifest.as_bytes())?;
    Ok(GenerateOutcome { manifest: path, cases: cases.len(), warnings })
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::input(path.display(), e))?;
    let mut records = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::input(path.display(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ManifestRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Input(format!("{}:{}: {e}", path.display(), n + 1)))?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::Input(format!("{}: manifest has no cases", path.display())));
    }
    Ok(records)
}

pub fn read_document(path: &Path) -> Result<DocumentTree> {
    let text = fs::read_to_string(path).map_err(|e| Error::input(path.display(), e))?;
    parse_document(&text).map_err(|e| Error::input(path.display(), e))
}
