//! Bimodal natural-language / programming-language representation learning
//! at desk scale.
//!
//! The pipeline: ingest function records into bimodal (doc, code) pairs and
//! unimodal codes, induce a shared subword vocabulary, train bidirectional
//! n-gram generators on unimodal data, pre-train a small Transformer encoder
//! with a hybrid masked-language-modeling + replaced-token-detection
//! objective, then fine-tune and evaluate on code search (MRR), zero-shot
//! cloze probing, and code-to-documentation generation (smoothed BLEU-4).

pub mod autodiff;
pub mod bleu;
pub mod checkpoint;
pub mod cli;
pub mod corpus;
pub mod corruption;
pub mod encoder;
pub mod error;
pub mod fixture;
pub mod generation;
pub mod manifest;
pub mod ngram;
pub mod optimizer;
pub mod pretrain;
pub mod probing;
pub mod rng;
pub mod search;
pub mod tokenizer;

pub use error::{Error, Result};
