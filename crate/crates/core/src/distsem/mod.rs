//! Word meaning from co-occurrence counts and sentence meaning from
//! grammar.
//!
//! A word's meaning vector counts how often it appears near each context
//! word, normalized to unit length. A sentence's meaning is the network of
//! its word states wired by the caps of its pregroup reduction.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::DiagramError;
use crate::tensor::TensorError;

mod corpus;
mod lexicon;

pub use corpus::{
    ingest_corpus, ingest_sharded, meaning_vector, normalized, similarity, tokenize,
    tokenize_line, ContextConfig, CooccurrenceModel, MeaningVector,
};
pub use lexicon::{
    evaluate_sentence, functional_word_diagram, sentence_diagram, sentence_meaning,
    verb_tensor_from_pairs, FunctionalWord, Lexicon, LexiconEntry, Meaning, NOT_BOX,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistsemError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("grammar error: {0}")]
    Grammar(String),
    #[error("lexicon error: {0}")]
    Lexicon(String),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("context config error: {0}")]
    Config(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Word → meaning vector, as stored on disk.
pub type VectorStore = BTreeMap<String, Vec<f64>>;

/// Meaning vectors of every word in the model. Zero vectors are kept.
pub fn vector_store(m: &CooccurrenceModel) -> VectorStore {
    m.counts
        .keys()
        .map(|w| {
            let v = meaning_vector(m, w).expect("word taken from the model");
            (w.clone(), v.vector)
        })
        .collect()
}

/// Look a word up in a store as a meaning vector.
pub fn stored_vector(store: &VectorStore, word: &str) -> Result<MeaningVector, DistsemError> {
    let v = store
        .get(word)
        .ok_or_else(|| DistsemError::UnknownWord(word.to_string()))?;
    Ok(MeaningVector {
        word: word.to_string(),
        vector: v.clone(),
        zero: v.iter().all(|&x| x == 0.0),
    })
}
