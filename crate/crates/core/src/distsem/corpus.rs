use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DistsemError;

/// Context words and window scope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextConfig {
    pub words: Vec<String>,
    pub window: usize,
}

impl ContextConfig {
    pub fn new(words: Vec<String>, window: usize) -> Result<Self, DistsemError> {
        if window == 0 {
            return Err(DistsemError::Config("window must be at least 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for w in &words {
            if !seen.insert(w) {
                return Err(DistsemError::Config(format!("context word `{w}` listed twice")));
            }
        }
        Ok(ContextConfig { words, window })
    }

    /// One context word per line plus a `window = k` line. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, DistsemError> {
        let mut words = Vec::new();
        let mut window = None;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("window") {
                let k = rest
                    .trim()
                    .strip_prefix('=')
                    .map(str::trim)
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| DistsemError::Config(format!("bad window line `{line}`")))?;
                window = Some(k);
            } else {
                words.extend(tokenize_line(line));
            }
        }
        let window = window.ok_or_else(|| DistsemError::Config("missing `window = k`".into()))?;
        ContextConfig::new(words, window)
    }
}

/// Lowercase, strip punctuation, split on whitespace.
pub fn tokenize_line(line: &str) -> Vec<String> {
    line.split_whitespace()
        .map(|w| {
            w.chars()
                .filter(|c| c.is_alphanumeric() || *c == '\'' || *c == '-')
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .map(|w| w.trim_matches(|c| c == '\'' || c == '-').to_string())
        .filter(|w| !w.is_empty())
        .collect()
}

/// One token list per line; windows never cross a line break.
pub fn tokenize(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(tokenize_line)
        .filter(|l| !l.is_empty())
        .collect()
}

/// Co-occurrence counts `N_x(a)` for every word `a` of a corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceModel {
    pub config: ContextConfig,
    pub counts: BTreeMap<String, Vec<u64>>,
    pub token_count: usize,
}

impl CooccurrenceModel {
    pub fn is_empty(&self) -> bool {
        self.token_count == 0
    }

    pub fn count(&self, word: &str, context: &str) -> Option<u64> {
        let i = self.config.words.iter().position(|w| w == context)?;
        Some(self.counts.get(word).map_or(0, |v| v[i]))
    }

    fn empty(config: &ContextConfig) -> Self {
        CooccurrenceModel {
            config: config.clone(),
            counts: BTreeMap::new(),
            token_count: 0,
        }
    }

    /// Add another model's counts. Commutative and associative.
    pub fn merge(mut self, other: CooccurrenceModel) -> Self {
        for (w, v) in other.counts {
            let e = self
                .counts
                .entry(w)
                .or_insert_with(|| vec![0; v.len()]);
            for (a, b) in e.iter_mut().zip(v) {
                *a += b;
            }
        }
        self.token_count += other.token_count;
        self
    }
}

/// Count the centres in `centres`, looking at neighbours anywhere in `seg`.
fn count_centres(seg: &[String], centres: Range<usize>, config: &ContextConfig) -> CooccurrenceModel {
    let index: BTreeMap<&str, usize> = config
        .words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let mut m = CooccurrenceModel::empty(config);
    let k = config.window;
    for i in centres {
        m.token_count += 1;
        let entry = m
            .counts
            .entry(seg[i].clone())
            .or_insert_with(|| vec![0; config.words.len()]);
        let mut hit = vec![false; config.words.len()];
        let lo = i.saturating_sub(k);
        let hi = (i + k).min(seg.len() - 1);
        for j in (lo..=hi).filter(|&j| j != i) {
            if let Some(&x) = index.get(seg[j].as_str()) {
                hit[x] = true;
            }
        }
        for (c, h) in entry.iter_mut().zip(hit) {
            *c += h as u64;
        }
    }
    m
}

/// Centres per parallel job.
const SHARD: usize = 4096;

/// Count a tokenized corpus (one token list per line) in parallel.
pub fn ingest_corpus(lines: &[Vec<String>], config: &ContextConfig) -> CooccurrenceModel {
    let jobs: Vec<(usize, Range<usize>)> = lines
        .iter()
        .enumerate()
        .flat_map(|(l, toks)| {
            (0..toks.len())
                .step_by(SHARD)
                .map(move |s| (l, s..(s + SHARD).min(toks.len())))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(l, r)| count_centres(&lines[l], r, config))
        .reduce(|| CooccurrenceModel::empty(config), CooccurrenceModel::merge)
}

/// Count a single token stream split into shards at `cuts`. Each shard
/// carries `k` tokens of overlap on either side but only counts its own
/// centres, so the merged result equals a single pass.
pub fn ingest_sharded(tokens: &[String], config: &ContextConfig, cuts: &[usize]) -> CooccurrenceModel {
    let mut bounds = vec![0];
    bounds.extend(cuts.iter().copied().filter(|&c| c > 0 && c < tokens.len()));
    bounds.push(tokens.len());
    bounds.sort_unstable();
    bounds.dedup();
    let k = config.window;
    bounds
        .windows(2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|w| {
            let (s, e) = (w[0], w[1]);
            let lo = s.saturating_sub(k);
            let hi = (e + k).min(tokens.len());
            // the shard sees only tokens[lo..hi]
            count_centres(&tokens[lo..hi], s - lo..e - lo, config)
        })
        .reduce(|| CooccurrenceModel::empty(config), CooccurrenceModel::merge)
}

/// A normalized count vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeaningVector {
    pub word: String,
    pub vector: Vec<f64>,
    /// The word never co-occurred with a context word.
    pub zero: bool,
}

/// Divide a vector by its Euclidean norm; `None` for the zero vector.
pub fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 0.0).then(|| v.iter().map(|x| x / norm).collect())
}

pub fn meaning_vector(m: &CooccurrenceModel, word: &str) -> Result<MeaningVector, DistsemError> {
    let counts = m
        .counts
        .get(word)
        .ok_or_else(|| DistsemError::UnknownWord(word.to_string()))?;
    let raw: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    Ok(match normalized(&raw) {
        Some(vector) => MeaningVector {
            word: word.to_string(),
            vector,
            zero: false,
        },
        None => MeaningVector {
            word: word.to_string(),
            vector: raw,
            zero: true,
        },
    })
}

/// Inner product of two meaning vectors.
pub fn similarity(u: &MeaningVector, v: &MeaningVector) -> Result<f64, DistsemError> {
    if u.vector.len() != v.vector.len() {
        return Err(DistsemError::Dimension(u.vector.len(), v.vector.len()));
    }
    Ok(u.vector.iter().zip(&v.vector).map(|(a, b)| a * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(words: &[&str], k: usize) -> ContextConfig {
        ContextConfig::new(words.iter().map(|w| w.to_string()).collect(), k).unwrap()
    }

    #[test]
    fn three_token_counts() {
        let lines = tokenize("a b a");
        assert_eq!(ingest_corpus(&lines, &cfg(&["b"], 1)).count("a", "b"), Some(2));
        assert_eq!(ingest_corpus(&lines, &cfg(&["b"], 5)).count("a", "b"), Some(2));
        assert_eq!(ingest_corpus(&lines, &cfg(&["z"], 2)).count("a", "z"), Some(0));
    }

    #[test]
    fn a_word_is_not_its_own_context_at_distance_zero() {
        let m = ingest_corpus(&tokenize("a"), &cfg(&["a"], 3));
        assert_eq!(m.count("a", "a"), Some(0));
        let m = ingest_corpus(&tokenize("a a"), &cfg(&["a"], 1));
        assert_eq!(m.count("a", "a"), Some(2));
    }

    #[test]
    fn windows_stop_at_line_breaks() {
        let m = ingest_corpus(&tokenize("a\nb"), &cfg(&["b"], 3));
        assert_eq!(m.count("a", "b"), Some(0));
    }

    #[test]
    fn tokenizer_lowercases_and_strips() {
        assert_eq!(tokenize_line("Alice, likes BOB!"), vec!["alice", "likes", "bob"]);
    }

    #[test]
    fn vectors() {
        let mut m = ingest_corpus(&[], &cfg(&["x", "y"], 1));
        assert!(m.is_empty());
        m.counts.insert("a".into(), vec![3, 4]);
        m.counts.insert("z".into(), vec![0, 0]);
        let a = meaning_vector(&m, "a").unwrap();
        assert_eq!(a.vector, vec![0.6, 0.8]);
        assert!(meaning_vector(&m, "z").unwrap().zero);
        assert!(matches!(meaning_vector(&m, "q"), Err(DistsemError::UnknownWord(_))));
        let e = MeaningVector {
            word: "e".into(),
            vector: vec![1.0, 0.0],
            zero: false,
        };
        assert!((similarity(&a, &e).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(normalized(&a.vector).unwrap(), a.vector);
    }

    #[test]
    fn config_file() {
        let c = ContextConfig::parse("# ctx\nred\nblue\nwindow = 2\n").unwrap();
        assert_eq!(c.words, vec!["red", "blue"]);
        assert_eq!(c.window, 2);
        assert!(ContextConfig::parse("red\n").is_err());
        assert!(ContextConfig::parse("red\nred\nwindow = 1").is_err());
        assert!(ContextConfig::parse("red\nwindow = 0").is_err());
    }
}
