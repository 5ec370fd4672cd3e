//! Corpus ingestion: filtering rules, bimodal/unimodal datasets, splits.
//!
//! Input is line-delimited JSON with the CodeSearchNet field vocabulary
//! (`code`, `docstring`, `language`, `func_name`, `url`), so real dumps
//! ingest unmodified. Filtering applies, in order: an optional
//! project-reuse flag, documentation truncation to the first paragraph,
//! demotion to unimodal code when the truncated documentation has fewer
//! than three whitespace tokens, rejection of functions shorter than three
//! source lines, and rejection of function names containing "test".

use std::collections::BTreeSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rng;
use crate::tokenizer::{pretokenize_nl, pretokenize_pl};

/// One raw function record as it arrives from a corpus dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawFunctionRecord {
    pub code: String,
    #[serde(default)]
    pub docstring: String,
    pub language: String,
    #[serde(default)]
    pub func_name: String,
    #[serde(default)]
    pub url: String,
    #[serde(default)]
    pub repo: String,
    /// Optional upstream metadata: whether the project is used by at least
    /// one other project. Honored when present, ignored when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reused: Option<bool>,
}

/// A documentation-function pair, pre-tokenized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BimodalPair {
    pub id: String,
    pub language: String,
    pub nl_tokens: Vec<String>,
    pub pl_tokens: Vec<String>,
}

/// A bare function without usable documentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnimodalCode {
    pub id: String,
    pub language: String,
    pub pl_tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    Malformed(String),
    NotReused,
    TooFewLines,
    NameContainsTest,
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectReason::Malformed(m) => write!(f, "malformed: {m}"),
            RejectReason::NotReused => write!(f, "project not reused"),
            RejectReason::TooFewLines => write!(f, "fewer than three lines"),
            RejectReason::NameContainsTest => write!(f, "name contains test"),
        }
    }
}

/// Outcome of filtering one record.
#[derive(Debug, Clone)]
pub enum Decision {
    Bimodal(BimodalPair),
    Unimodal(UnimodalCode),
    Reject(RejectReason),
}

/// Filtering rules with a closed, configurable language set.
#[derive(Debug, Clone, Default)]
pub struct Filter {
    /// When set, records with other language tags are rejected as malformed.
    pub languages: Option<BTreeSet<String>>,
}

/// Return the prefix of `doc` up to the first blank-line paragraph break.
/// The whole doc is returned when no break exists.
pub fn truncate_first_paragraph(doc: &str) -> String {
    let mut kept = Vec::new();
    for line in doc.split('\n') {
        if line.trim().is_empty() {
            break;
        }
        kept.push(line);
    }
    kept.join("\n")
}

/// Count source lines after stripping trailing whitespace.
pub fn source_line_count(code: &str) -> usize {
    let trimmed = code.trim_end();
    if trimmed.is_empty() {
        0
    } else {
        trimmed.split('\n').count()
    }
}

fn short_hash(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update(p.as_bytes());
        hasher.update([0u8]);
    }
    let digest = hasher.finalize();
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}

/// Stable record identifier derived from content and input position.
pub fn record_id(record: &RawFunctionRecord, line_index: usize) -> String {
    let h = short_hash(&[&record.language, &record.func_name, &record.code]);
    format!("r{line_index:06}-{h}")
}

impl Filter {
    pub fn new(languages: Option<BTreeSet<String>>) -> Self {
        Filter { languages }
    }

    /// Apply the filtering rules to one record.
    pub fn filter_record(&self, record: &RawFunctionRecord, id: String) -> Decision {
        if record.code.trim().is_empty() {
            return Decision::Reject(RejectReason::Malformed("empty code".into()));
        }
        if record.language.is_empty() {
            return Decision::Reject(RejectReason::Malformed("missing language".into()));
        }
        if let Some(langs) = &self.languages {
            if !langs.contains(&record.language) {
                return Decision::Reject(RejectReason::Malformed(format!(
                    "unknown language {:?}",
                    record.language
                )));
            }
        }
        if record.reused == Some(false) {
            return Decision::Reject(RejectReason::NotReused);
        }

        let doc = truncate_first_paragraph(&record.docstring);
        let doc_word_count = doc.split_whitespace().count();

        if source_line_count(&record.code) < 3 {
            return Decision::Reject(RejectReason::TooFewLines);
        }
        if record.func_name.to_lowercase().contains("test") {
            return Decision::Reject(RejectReason::NameContainsTest);
        }

        let pl_tokens = pretokenize_pl(&record.code);
        if pl_tokens.is_empty() {
            return Decision::Reject(RejectReason::Malformed("no code tokens".into()));
        }
        if doc_word_count < 3 {
            // Too-short documentation demotes the record to unimodal code
            // instead of dropping it.
            return Decision::Unimodal(UnimodalCode {
                id,
                language: record.language.clone(),
                pl_tokens,
            });
        }
        Decision::Bimodal(BimodalPair {
            id,
            language: record.language.clone(),
            nl_tokens: pretokenize_nl(&doc),
            pl_tokens,
        })
    }
}

/// A logged rejection: record id (or line marker) and reason.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Rejection {
    pub id: String,
    pub reason: String,
}

/// Result of ingesting a record stream.
#[derive(Debug, Default)]
pub struct IngestResult {
    pub bimodal: Vec<BimodalPair>,
    pub unimodal: Vec<UnimodalCode>,
    pub rejections: Vec<Rejection>,
    pub input_count: usize,
}

/// Ingest line-delimited records. Undecodable lines are logged and skipped.
pub fn ingest<R: BufRead>(reader: R, filter: &Filter) -> Result<IngestResult> {
    let mut out = IngestResult::default();
    for (index, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(format!("line {index}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        out.input_count += 1;
        let record: RawFunctionRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                out.rejections.push(Rejection {
                    id: format!("line{index:06}"),
                    reason: format!("undecodable: {e}"),
                });
                continue;
            }
        };
        let id = record_id(&record, index);
        match filter.filter_record(&record, id.clone()) {
            Decision::Bimodal(pair) => out.bimodal.push(pair),
            Decision::Unimodal(code) => out.unimodal.push(code),
            Decision::Reject(reason) => out.rejections.push(Rejection {
                id,
                reason: reason.to_string(),
            }),
        }
    }
    Ok(out)
}

/// Deterministic train/dev/test partition of pair ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub seed: u64,
    pub train: Vec<String>,
    pub dev: Vec<String>,
    pub test: Vec<String>,
}

impl DatasetSplit {
    pub fn contains(&self, id: &str) -> bool {
        self.train.iter().any(|x| x == id)
            || self.dev.iter().any(|x| x == id)
            || self.test.iter().any(|x| x == id)
    }
}

/// Split ids by `ratios = (train, dev, test)` with a floor-then-distribute
/// size policy: each partition gets the floor of its share and leftover
/// slots go to the largest fractional remainders (ties to the earlier
/// partition). Shuffling is seeded and input-order independent.
pub fn split(ids: &[String], ratios: (f64, f64, f64), seed: u64) -> Result<DatasetSplit> {
    let r = [ratios.0, ratios.1, ratios.2];
    if r.iter().any(|&x| !(0.0..=1.0).contains(&x) || !x.is_finite()) {
        return Err(Error::InvalidConfig("split ratios must lie in [0, 1]".into()));
    }
    let total: f64 = r.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "split ratios must sum to 1, got {total}"
        )));
    }

    let mut sorted: Vec<String> = ids.to_vec();
    sorted.sort();
    sorted.dedup();
    let n = sorted.len();

    // Fisher-Yates with a derived stream.
    let mut rng = rng::stream(seed, "corpus.split", &[]);
    use rand::Rng;
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        sorted.swap(i, j);
    }

    let mut sizes = [0usize; 3];
    let mut remainders: Vec<(usize, f64)> = Vec::new();
    for (k, &share) in r.iter().enumerate() {
        let exact = share * n as f64;
        sizes[k] = exact.floor() as usize;
        remainders.push((k, exact - exact.floor()));
    }
    let mut leftover = n - sizes.iter().sum::<usize>();
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for (k, _) in remainders {
        if leftover == 0 {
            break;
        }
        sizes[k] += 1;
        leftover -= 1;
    }

    let dev_start = sizes[0];
    let test_start = sizes[0] + sizes[1];
    Ok(DatasetSplit {
        seed,
        train: sorted[..dev_start].to_vec(),
        dev: sorted[dev_start..test_start].to_vec(),
        test: sorted[test_start..].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(code: &str, doc: &str, name: &str) -> RawFunctionRecord {
        RawFunctionRecord {
            code: code.into(),
            docstring: doc.into(),
            language: "python".into(),
            func_name: name.into(),
            url: String::new(),
            repo: String::new(),
            reused: None,
        }
    }

    const THREE_LINES: &str = "def add(a, b):\n    c = a + b\n    return c";

    #[test]
    fn truncates_to_first_paragraph() {
        assert_eq!(
            truncate_first_paragraph("Sort items.\n\nUses quicksort."),
            "Sort items."
        );
        assert_eq!(truncate_first_paragraph(""), "");
        // Three paragraphs, hand-split: only the first survives.
        let doc = "Reads a file.\nReturns bytes.\n\nSecond paragraph.\n\nThird.";
        assert_eq!(truncate_first_paragraph(doc), "Reads a file.\nReturns bytes.");
    }

    #[test]
    fn rejects_test_names() {
        let f = Filter::default();
        let d = f.filter_record(&record(THREE_LINES, "Adds two numbers.", "run_tests"), "x".into());
        assert!(matches!(d, Decision::Reject(RejectReason::NameContainsTest)));
    }

    #[test]
    fn rejects_short_functions() {
        let f = Filter::default();
        let d = f.filter_record(
            &record("def f():\n    return 1", "Valid doc over here.", "f"),
            "x".into(),
        );
        assert!(matches!(d, Decision::Reject(RejectReason::TooFewLines)));
    }

    #[test]
    fn demotes_short_docs_to_unimodal() {
        let f = Filter::default();
        let d = f.filter_record(&record(THREE_LINES, "Sort.", "add"), "x".into());
        assert!(matches!(d, Decision::Unimodal(_)));
    }

    #[test]
    fn accepts_valid_records() {
        let f = Filter::default();
        let d = f.filter_record(&record(THREE_LINES, "Adds two numbers together.", "add"), "x".into());
        match d {
            Decision::Bimodal(p) => {
                assert!(p.nl_tokens.len() >= 3);
                assert!(!p.pl_tokens.is_empty());
            }
            other => panic!("expected bimodal, got {other:?}"),
        }
    }

    #[test]
    fn filtering_is_idempotent_on_survivors() {
        let f = Filter::default();
        let r = record(THREE_LINES, "Adds two numbers together.", "add");
        let first = f.filter_record(&r, "x".into());
        let second = f.filter_record(&r, "x".into());
        match (first, second) {
            (Decision::Bimodal(a), Decision::Bimodal(b)) => assert_eq!(a, b),
            _ => panic!("decision changed between applications"),
        }
    }

    #[test]
    fn reuse_flag_honored_when_present() {
        let f = Filter::default();
        let mut r = record(THREE_LINES, "Adds two numbers together.", "add");
        r.reused = Some(false);
        assert!(matches!(
            f.filter_record(&r, "x".into()),
            Decision::Reject(RejectReason::NotReused)
        ));
        r.reused = Some(true);
        assert!(matches!(f.filter_record(&r, "x".into()), Decision::Bimodal(_)));
    }

    #[test]
    fn ingest_counts_sum_to_input() {
        let lines = [
            serde_json::to_string(&record(THREE_LINES, "Adds two numbers together.", "add"))
                .unwrap(),
            serde_json::to_string(&record(THREE_LINES, "Sort.", "sort")).unwrap(),
            serde_json::to_string(&record("x = 1", "Valid doc over here.", "f")).unwrap(),
            "{not json".to_string(),
        ];
        let input = lines.join("\n");
        let out = ingest(input.as_bytes(), &Filter::default()).unwrap();
        assert_eq!(out.input_count, 4);
        assert_eq!(out.bimodal.len(), 1);
        assert_eq!(out.unimodal.len(), 1);
        assert_eq!(out.rejections.len(), 2);
        assert_eq!(
            out.bimodal.len() + out.unimodal.len() + out.rejections.len(),
            out.input_count
        );
    }

    #[test]
    fn ingest_empty_stream() {
        let out = ingest("".as_bytes(), &Filter::default()).unwrap();
        assert_eq!(out.input_count, 0);
        assert!(out.bimodal.is_empty() && out.unimodal.is_empty() && out.rejections.is_empty());
    }

    #[test]
    fn split_is_deterministic_and_exhaustive() {
        let ids: Vec<String> = (0..100).map(|i| format!("id{i:03}")).collect();
        let a = split(&ids, (0.8, 0.1, 0.1), 7).unwrap();
        let b = split(&ids, (0.8, 0.1, 0.1), 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.train.len(), 80);
        assert_eq!(a.dev.len(), 10);
        assert_eq!(a.test.len(), 10);
        let mut all: Vec<&String> = a.train.iter().chain(&a.dev).chain(&a.test).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 100);
    }

    #[test]
    fn split_all_train() {
        let ids: Vec<String> = (0..10).map(|i| format!("id{i}")).collect();
        let s = split(&ids, (1.0, 0.0, 0.0), 3).unwrap();
        assert_eq!(s.train.len(), 10);
        assert!(s.dev.is_empty() && s.test.is_empty());
    }

    #[test]
    fn split_floor_then_distribute() {
        // 10 ids at (0.8, 0.1, 0.1): floors are (8, 1, 1) with no leftover.
        let ids: Vec<String> = (0..10).map(|i| format!("id{i}")).collect();
        let s = split(&ids, (0.8, 0.1, 0.1), 11).unwrap();
        assert_eq!((s.train.len(), s.dev.len(), s.test.len()), (8, 1, 1));
    }

    #[test]
    fn split_rejects_bad_ratios() {
        let ids: Vec<String> = (0..4).map(|i| format!("id{i}")).collect();
        assert!(split(&ids, (0.5, 0.2, 0.2), 1).is_err());
    }
}
