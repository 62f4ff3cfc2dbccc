use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use globset::{Glob, GlobSet, GlobSetBuilder};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;
use walkdir::WalkDir;

use super::{extract_attributes, extract_pragmas, resolve_context, CodeModel, FileExtraction, DEFAULT_SIGIL};
use crate::diagnostics::{CheckId, Finding, SourceLocation};

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("source root `{0}` does not exist or is not a directory")]
    MissingRoot(PathBuf),
    #[error("invalid exclude glob `{pattern}`: {source}")]
    BadGlob {
        pattern: String,
        #[source]
        source: globset::Error,
    },
    #[error("cannot build worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("invalid scan setting `{key}`: {message}")]
    Setting { key: String, message: String },
}

/// Which files are scanned and by which front-end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub sigil: String,
    /// Extensions (without dot) handled by the attribute front-end.
    pub attribute_extensions: Vec<String>,
    /// Extensions handled by the pragma front-end; empty means every file
    /// not claimed by the attribute front-end.
    pub pragma_extensions: Vec<String>,
    /// Globs matched against root-relative paths.
    pub exclude: Vec<String>,
    /// Worker threads; `None` uses the global pool. Never affects output.
    pub workers: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            sigil: DEFAULT_SIGIL.to_owned(),
            attribute_extensions: vec!["java".to_owned()],
            pragma_extensions: Vec::new(),
            exclude: vec!["**/.git/**".to_owned()],
            workers: None,
        }
    }
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().trim_start_matches('.').to_owned())
        .filter(|s| !s.is_empty())
        .collect()
}

impl ScanConfig {
    /// Applies one `key = value` setting. Returns `Ok(false)` for keys this
    /// config does not own.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool, ScanError> {
        let bad = |message: &str| ScanError::Setting {
            key: key.to_owned(),
            message: message.to_owned(),
        };
        match key {
            "sigil" => {
                let value = value.trim();
                if value.is_empty() || value.contains(char::is_whitespace) {
                    return Err(bad("must be a non-empty token without spaces"));
                }
                self.sigil = value.to_owned();
            }
            "attribute_extensions" => self.attribute_extensions = list(value),
            "pragma_extensions" => self.pragma_extensions = list(value),
            "exclude" => {
                self.exclude = value
                    .split(',')
                    .map(|s| s.trim().to_owned())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            "workers" => {
                let n: usize = value.trim().parse().map_err(|_| bad("expected a positive integer"))?;
                if n == 0 {
                    return Err(bad("expected a positive integer"));
                }
                self.workers = Some(n);
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Canonical text of the settings that influence scan output.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "sigil={}", self.sigil);
        let _ = writeln!(out, "attribute_extensions={}", self.attribute_extensions.join(","));
        let _ = writeln!(out, "pragma_extensions={}", self.pragma_extensions.join(","));
        let _ = writeln!(out, "exclude={}", self.exclude.join(","));
        out
    }

    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    fn front_end(&self, relative: &str) -> Option<FrontEnd> {
        let ext = Path::new(relative).extension().and_then(|e| e.to_str()).unwrap_or("");
        if self.attribute_extensions.iter().any(|e| e == ext) {
            Some(FrontEnd::Attribute)
        } else if self.pragma_extensions.is_empty() || self.pragma_extensions.iter().any(|e| e == ext) {
            Some(FrontEnd::Pragma)
        } else {
            None
        }
    }

    fn exclude_set(&self) -> Result<GlobSet, ScanError> {
        let mut builder = GlobSetBuilder::new();
        for pattern in &self.exclude {
            let glob = Glob::new(pattern).map_err(|source| ScanError::BadGlob {
                pattern: pattern.clone(),
                source,
            })?;
            builder.add(glob);
        }
        builder.build().map_err(|source| ScanError::BadGlob {
            pattern: self.exclude.join(","),
            source,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum FrontEnd {
    Attribute,
    Pragma,
}

struct SourceFile {
    absolute: PathBuf,
    relative: String,
    front_end: FrontEnd,
}

fn collect_files(root: &Path, config: &ScanConfig, excludes: &GlobSet) -> Vec<SourceFile> {
    let mut files = Vec::new();
    let walker = WalkDir::new(root).sort_by_file_name().into_iter();
    for entry in walker.filter_map(Result::ok) {
        if !entry.file_type().is_file() {
            continue;
        }
        let Ok(relative) = entry.path().strip_prefix(root) else {
            continue;
        };
        let relative = relative
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        if excludes.is_match(&relative) {
            continue;
        }
        if let Some(front_end) = config.front_end(&relative) {
            files.push(SourceFile {
                absolute: entry.path().to_path_buf(),
                relative,
                front_end,
            });
        }
    }
    files
}

fn extract_file(file: &SourceFile, sigil: &str) -> FileExtraction {
    let bytes = match fs::read(&file.absolute) {
        Ok(bytes) => bytes,
        Err(err) => {
            return FileExtraction {
                findings: vec![
                    Finding::new(CheckId::IoError, format!("cannot read `{}`: {err}", file.relative))
                        .at(SourceLocation::new(file.relative.as_str(), 1, 1)),
                ],
                ..FileExtraction::default()
            }
        }
    };
    if bytes.contains(&0) {
        // binary file
        return FileExtraction::default();
    }
    let text = String::from_utf8_lossy(&bytes);
    let mut out = match file.front_end {
        FrontEnd::Attribute => extract_attributes(&text, &file.relative),
        FrontEnd::Pragma => extract_pragmas(&text, &file.relative, sigil),
    };
    resolve_context(&mut out);
    out
}

/// Scans every root and builds the code model. Output is independent of
/// directory order and of the number of workers.
pub fn scan_tree(roots: &[PathBuf], config: &ScanConfig) -> Result<CodeModel, ScanError> {
    if let Some(missing) = roots.iter().find(|r| !r.is_dir()) {
        return Err(ScanError::MissingRoot(missing.clone()));
    }
    let excludes = config.exclude_set()?;
    let mut files = Vec::new();
    let mut seen = BTreeSet::new();
    for root in roots {
        for file in collect_files(root, config, &excludes) {
            // the same file reached through two roots is scanned once
            if seen.insert(fs::canonicalize(&file.absolute).unwrap_or(file.absolute.clone())) {
                files.push(file);
            }
        }
    }

    let extract_all =
        || -> Vec<FileExtraction> { files.par_iter().map(|file| extract_file(file, &config.sigil)).collect() };
    let extractions = match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(extract_all),
        None => extract_all(),
    };

    let mut instances = Vec::new();
    let mut findings = Vec::new();
    for extraction in extractions {
        instances.extend(extraction.instances);
        findings.extend(extraction.findings);
    }
    Ok(CodeModel::from_instances(instances, findings).with_config_fingerprint(config.fingerprint()))
}
