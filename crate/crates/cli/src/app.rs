//! Command implementations and argument handling.
//!
//! Exit codes are the contract: 0 means the domain check passed (valid /
//! within / fully allocated), 1 means the check ran and came out
//! negative, 2 means the command could not run (usage, IO, parse, or
//! precondition errors). Standard output carries only the requested
//! report; diagnostics go to standard error.

use std::fs;
use std::path::{Path, PathBuf};

use oddfit_core::allocate::{allocate, Environment};
use oddfit_core::compare::generic_compare;
use oddfit_core::export::{document_from_text, to_canonical_text, to_plantuml, Format};
use oddfit_core::fixtures;
use oddfit_core::model::{validate_document, OddDocument, Role, TaxonomyRegistry};
use oddfit_core::parse::{load_taxonomies, parse_document_unvalidated};

const USAGE: &str = "\
oddfit — ODD-based capability matching and test case allocation

Usage:
  oddfit validate [--taxonomy FILE]... DOCUMENT...
  oddfit compare --cap FILE --req FILE [--report FILE] [--format yaml|json] [--taxonomy FILE]...
  oddfit allocate --req-dir DIR --cap-dir DIR [--report FILE] [--format yaml|json] [--taxonomy FILE]...
  oddfit viz --doc FILE --out FILE [--taxonomy FILE]...
  oddfit help

Document files may be grammar text (.odd) or canonical YAML/JSON
(.yaml, .yml, .json). The built-in taxonomies `odd` and `ext_odd` are
always loaded; --taxonomy adds more.

Exit codes: 0 check passed; 1 check negative (violations found, not
within, or some test case unallocatable); 2 usage, IO, or parse error.
";

pub fn run(args: &[String]) -> i32 {
    let mut args = args.iter();
    match args.next().map(String::as_str) {
        Some("validate") => cmd_validate(args.cloned().collect()),
        Some("compare") => cmd_compare(args.cloned().collect()),
        Some("allocate") => cmd_allocate(args.cloned().collect()),
        Some("viz") => cmd_viz(args.cloned().collect()),
        Some("help") | Some("--help") | Some("-h") => {
            eprint!("{USAGE}");
            0
        }
        Some(other) => {
            eprintln!("error: unknown command `{other}`");
            eprint!("{USAGE}");
            2
        }
        None => {
            eprint!("{USAGE}");
            2
        }
    }
}

fn cmd_validate(args: Vec<String>) -> i32 {
    let mut taxonomy_files = Vec::new();
    let mut documents = Vec::new();
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "--taxonomy" => match iter.next() {
                Some(value) => taxonomy_files.push(PathBuf::from(value)),
                None => return usage_error("--taxonomy needs a file argument"),
            },
            flag if flag.starts_with("--") => {
                return usage_error(&format!("unknown flag `{flag}` for validate"))
            }
            file => documents.push(PathBuf::from(file)),
        }
    }
    if documents.is_empty() {
        return usage_error("validate needs at least one document file");
    }
    let registry = match build_registry(&taxonomy_files) {
        Ok(registry) => registry,
        Err(code) => return code,
    };

    let mut worst = 0;
    for file in &documents {
        match check_document(file, &registry) {
            DocumentCheck::Valid => {}
            DocumentCheck::Violations(lines) => {
                for line in lines {
                    eprintln!("{}: {line}", file.display());
                }
                worst = worst.max(1);
            }
            DocumentCheck::Unreadable(lines) => {
                for line in lines {
                    eprintln!("{}: {line}", file.display());
                }
                worst = 2;
            }
        }
    }
    worst
}

enum DocumentCheck {
    Valid,
    /// Parsed, but the content violates the taxonomy (exit 1 territory).
    Violations(Vec<String>),
    /// IO, syntax, or layout problem (exit 2 territory).
    Unreadable(Vec<String>),
}

fn check_document(file: &Path, registry: &TaxonomyRegistry) -> DocumentCheck {
    let source = match fs::read_to_string(file) {
        Ok(source) => source,
        Err(e) => return DocumentCheck::Unreadable(vec![format!("error: {e}")]),
    };
    match file_format(file) {
        Some(FileFormat::Grammar) => {
            let default_id = stem_id(file);
            let parsed =
                match parse_document_unvalidated(&source, registry, default_id.as_deref()) {
                    Ok(parsed) => parsed,
                    Err(diagnostics) => {
                        return DocumentCheck::Unreadable(
                            diagnostics.iter().map(|d| d.to_string()).collect(),
                        )
                    }
                };
            let taxonomy = registry
                .get(parsed.document.taxonomy_id())
                .expect("checked during parse");
            let violations = validate_document(&parsed.document, taxonomy);
            if violations.is_empty() {
                DocumentCheck::Valid
            } else {
                DocumentCheck::Violations(
                    parsed
                        .diagnostics_for(&violations)
                        .iter()
                        .map(|d| d.to_string())
                        .collect(),
                )
            }
        }
        Some(FileFormat::Canonical(format)) => {
            match document_from_text(&source, format, registry) {
                Ok(_) => DocumentCheck::Valid,
                Err(oddfit_core::export::ImportError::Invalid(violations)) => {
                    DocumentCheck::Violations(
                        violations.iter().map(|v| format!("error: {v}")).collect(),
                    )
                }
                Err(e) => DocumentCheck::Unreadable(vec![format!("error: {e}")]),
            }
        }
        None => DocumentCheck::Unreadable(vec![
            "error: unknown file extension (expected .odd, .yaml, .yml, or .json)".to_string(),
        ]),
    }
}

fn cmd_compare(args: Vec<String>) -> i32 {
    let mut taxonomy_files = Vec::new();
    let mut cap_file = None;
    let mut req_file = None;
    let mut report_file = None;
    let mut format = Format::Yaml;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "--taxonomy" => match iter.next() {
                Some(value) => taxonomy_files.push(PathBuf::from(value)),
                None => return usage_error("--taxonomy needs a file argument"),
            },
            "--cap" => cap_file = iter.next().map(PathBuf::from),
            "--req" => req_file = iter.next().map(PathBuf::from),
            "--report" => report_file = iter.next().map(PathBuf::from),
            "--format" => match parse_format(iter.next()) {
                Ok(parsed) => format = parsed,
                Err(code) => return code,
            },
            other => return usage_error(&format!("unexpected argument `{other}` for compare")),
        }
    }
    let (Some(cap_file), Some(req_file)) = (cap_file, req_file) else {
        return usage_error("compare needs --cap FILE and --req FILE");
    };
    let registry = match build_registry(&taxonomy_files) {
        Ok(registry) => registry,
        Err(code) => return code,
    };
    // flag position decides the role for this comparison, so a document
    // can be compared against itself
    let cap = match load_valid_document(&cap_file, &registry) {
        Ok(doc) => doc.with_role(Role::Capability),
        Err(code) => return code,
    };
    let req = match load_valid_document(&req_file, &registry) {
        Ok(doc) => doc.with_role(Role::Requirement),
        Err(code) => return code,
    };
    if req.has_expressions() {
        eprintln!(
            "{}: error: a document with expression leaves cannot serve as the requirement",
            req_file.display()
        );
        return 2;
    }
    let taxonomy = match registry.resolve_common(cap.taxonomy_id(), req.taxonomy_id()) {
        Ok(taxonomy) => taxonomy,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let verdict = match generic_compare(&cap, &req, taxonomy) {
        Ok(verdict) => verdict,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = to_canonical_text(&verdict, format);
    if let Err(code) = emit_report(&report, report_file.as_deref()) {
        return code;
    }
    if verdict.within {
        0
    } else {
        1
    }
}

fn cmd_allocate(args: Vec<String>) -> i32 {
    let mut taxonomy_files = Vec::new();
    let mut req_dir = None;
    let mut cap_dir = None;
    let mut report_file = None;
    let mut format = Format::Yaml;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "--taxonomy" => match iter.next() {
                Some(value) => taxonomy_files.push(PathBuf::from(value)),
                None => return usage_error("--taxonomy needs a file argument"),
            },
            "--req-dir" => req_dir = iter.next().map(PathBuf::from),
            "--cap-dir" => cap_dir = iter.next().map(PathBuf::from),
            "--report" => report_file = iter.next().map(PathBuf::from),
            "--format" => match parse_format(iter.next()) {
                Ok(parsed) => format = parsed,
                Err(code) => return code,
            },
            other => return usage_error(&format!("unexpected argument `{other}` for allocate")),
        }
    }
    let (Some(req_dir), Some(cap_dir)) = (req_dir, cap_dir) else {
        return usage_error("allocate needs --req-dir DIR and --cap-dir DIR");
    };
    let registry = match build_registry(&taxonomy_files) {
        Ok(registry) => registry,
        Err(code) => return code,
    };

    let requirements = match load_directory(&req_dir, &registry, Role::Requirement) {
        Ok(docs) => docs,
        Err(code) => return code,
    };
    let environments = match load_directory(&cap_dir, &registry, Role::Capability) {
        Ok(docs) => docs,
        Err(code) => return code,
    };
    let environments: Vec<Environment> = match environments
        .into_iter()
        .map(|doc| Environment::new(doc.id().to_string(), doc))
        .collect::<Result<_, _>>()
    {
        Ok(environments) => environments,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    let report = match allocate(&requirements, &environments, &registry) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = to_canonical_text(&report, format);
    if let Err(code) = emit_report(&text, report_file.as_deref()) {
        return code;
    }
    if report.fully_allocated() {
        0
    } else {
        for case in &report.unallocated {
            eprintln!("unallocatable: {}", case.test_case);
        }
        1
    }
}

fn cmd_viz(args: Vec<String>) -> i32 {
    let mut taxonomy_files = Vec::new();
    let mut doc_file = None;
    let mut out_file = None;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "--taxonomy" => match iter.next() {
                Some(value) => taxonomy_files.push(PathBuf::from(value)),
                None => return usage_error("--taxonomy needs a file argument"),
            },
            "--doc" => doc_file = iter.next().map(PathBuf::from),
            "--out" => out_file = iter.next().map(PathBuf::from),
            other => return usage_error(&format!("unexpected argument `{other}` for viz")),
        }
    }
    let (Some(doc_file), Some(out_file)) = (doc_file, out_file) else {
        return usage_error("viz needs --doc FILE and --out FILE");
    };
    let registry = match build_registry(&taxonomy_files) {
        Ok(registry) => registry,
        Err(code) => return code,
    };
    let doc = match load_valid_document(&doc_file, &registry) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    let diagram = to_plantuml(&doc);
    if let Err(e) = fs::write(&out_file, diagram) {
        eprintln!("error: writing {}: {e}", out_file.display());
        return 2;
    }
    0
}

fn usage_error(message: &str) -> i32 {
    eprintln!("error: {message}");
    eprint!("{USAGE}");
    2
}

fn parse_format(value: Option<String>) -> Result<Format, i32> {
    match value {
        Some(name) => match Format::from_name(&name) {
            Some(format) => Ok(format),
            None => Err(usage_error(&format!(
                "unknown format `{name}` (expected yaml or json)"
            ))),
        },
        None => Err(usage_error("--format needs a value (yaml or json)")),
    }
}

fn build_registry(taxonomy_files: &[PathBuf]) -> Result<TaxonomyRegistry, i32> {
    let mut registry = fixtures::builtin_registry();
    for file in taxonomy_files {
        let source = match fs::read_to_string(file) {
            Ok(source) => source,
            Err(e) => {
                eprintln!("error: {}: {e}", file.display());
                return Err(2);
            }
        };
        if let Err(diagnostics) = load_taxonomies(&mut registry, &source) {
            for d in diagnostics.iter() {
                eprintln!("{}: {d}", file.display());
            }
            return Err(2);
        }
    }
    Ok(registry)
}

enum FileFormat {
    Grammar,
    Canonical(Format),
}

fn file_format(path: &Path) -> Option<FileFormat> {
    match path.extension()?.to_str()? {
        "odd" => Some(FileFormat::Grammar),
        "yaml" | "yml" => Some(FileFormat::Canonical(Format::Yaml)),
        "json" => Some(FileFormat::Canonical(Format::Json)),
        _ => None,
    }
}

/// Document id fallback from the file name: stem lowered with `-`
/// mapped to `_`. The document's own declared name takes precedence.
fn stem_id(path: &Path) -> Option<String> {
    let stem = path.file_stem()?.to_str()?;
    let id: String = stem
        .chars()
        .map(|c| match c {
            '-' => '_',
            other => other.to_ascii_lowercase(),
        })
        .collect();
    Some(id)
}

fn load_valid_document(file: &Path, registry: &TaxonomyRegistry) -> Result<OddDocument, i32> {
    match check_document_full(file, registry) {
        Ok(doc) => Ok(doc),
        Err(lines) => {
            for line in lines {
                eprintln!("{}: {line}", file.display());
            }
            Err(2)
        }
    }
}

/// Parses and fully validates; any problem is a precondition failure.
fn check_document_full(
    file: &Path,
    registry: &TaxonomyRegistry,
) -> Result<OddDocument, Vec<String>> {
    let source =
        fs::read_to_string(file).map_err(|e| vec![format!("error: {e}")])?;
    match file_format(file) {
        Some(FileFormat::Grammar) => {
            let default_id = stem_id(file);
            oddfit_core::parse::parse_document(&source, registry, default_id.as_deref())
                .map_err(|diagnostics| diagnostics.iter().map(|d| d.to_string()).collect())
        }
        Some(FileFormat::Canonical(format)) => document_from_text(&source, format, registry)
            .map_err(|e| vec![format!("error: {e}")]),
        None => Err(vec![
            "error: unknown file extension (expected .odd, .yaml, .yml, or .json)".to_string(),
        ]),
    }
}

/// Loads every document file in a directory, sorted by file name, and
/// checks they all carry the expected role.
fn load_directory(
    dir: &Path,
    registry: &TaxonomyRegistry,
    role: Role,
) -> Result<Vec<OddDocument>, i32> {
    let entries = match fs::read_dir(dir) {
        Ok(entries) => entries,
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return Err(2);
        }
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok())
        .map(|entry| entry.path())
        .filter(|path| path.is_file() && file_format(path).is_some())
        .collect();
    files.sort();

    let mut documents = Vec::new();
    for file in files {
        let doc = load_valid_document(&file, registry)?;
        if doc.role() != role {
            eprintln!(
                "{}: error: expected a {} document, found {}",
                file.display(),
                role,
                doc.role()
            );
            return Err(2);
        }
        documents.push(doc);
    }
    Ok(documents)
}

fn emit_report(text: &str, report_file: Option<&Path>) -> Result<(), i32> {
    match report_file {
        Some(path) => fs::write(path, text).map_err(|e| {
            eprintln!("error: writing {}: {e}", path.display());
            2
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
