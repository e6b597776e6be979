//! Pregroup types and contraction-only reduction.
//!
//! A simple type is an atom with an adjoint order `z ∈ {-1, 0, +1}`. Two
//! adjacent simple types cancel when they are `x · x⁻¹ˡ` (orders `0, -1`) or
//! `x⁻¹ʳ · x` (orders `+1, 0`). A reduction is a non-crossing set of such
//! cancellations; each one becomes a cap in the wiring diagram.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, Edge, End, Node, WireType};

/// Longest string the brute-force oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PregroupError {
    #[error("adjoint order {0} is outside -1..=1")]
    Order(i8),
    #[error("cannot parse simple type `{0}`")]
    Syntax(String),
    #[error("brute force is limited to {BRUTE_FORCE_LIMIT} simple types, got {0}")]
    TooLong(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub atom: String,
    pub z: i8,
}

impl SimpleType {
    pub fn new(atom: &str, z: i8) -> Result<Self, PregroupError> {
        if !(-1..=1).contains(&z) {
            return Err(PregroupError::Order(z));
        }
        Ok(SimpleType {
            atom: atom.to_string(),
            z,
        })
    }

    pub fn base(atom: &str) -> Self {
        SimpleType {
            atom: atom.to_string(),
            z: 0,
        }
    }

    /// The wire type this simple type is carried on.
    pub fn wire(&self) -> WireType {
        WireType::new(self.atom.as_str())
    }
}

/// Written in the plain convention: `x^l` for order −1, `x^r` for +1.
impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.z {
            -1 => write!(f, "{}^l", self.atom),
            1 => write!(f, "{}^r", self.atom),
            _ => write!(f, "{}", self.atom),
        }
    }
}

/// How `^l` and `^r` are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `x^l` has order −1 and `x^r` order +1, so `n · (n^l s n^r) · n ≤ s`.
    #[default]
    Plain,
    /// The mirror image: `x^r` has order −1 and `x^l` order +1, so
    /// `n · (n^r s n^l) · n ≤ s`.
    Mirrored,
}

pub fn parse_simple(token: &str, conv: Convention) -> Result<SimpleType, PregroupError> {
    let (atom, suffix) = match token.split_once('^') {
        Some((a, s)) => (a, Some(s)),
        None => (token, None),
    };
    let valid = !atom.is_empty() && atom.chars().all(|c| c.is_alphanumeric() || c == '_');
    if !valid {
        return Err(PregroupError::Syntax(token.to_string()));
    }
    let sign = match conv {
        Convention::Plain => 1,
        Convention::Mirrored => -1,
    };
    let z = match suffix {
        None => 0,
        Some("l") => -sign,
        Some("r") => sign,
        Some(_) => return Err(PregroupError::Syntax(token.to_string())),
    };
    SimpleType::new(atom, z)
}

/// Whitespace-separated simple types, e.g. `n^l s n^r`.
pub fn parse_type(text: &str, conv: Convention) -> Result<Vec<SimpleType>, PregroupError> {
    text.split_whitespace().map(|t| parse_simple(t, conv)).collect()
}

pub fn format_type(ts: &[SimpleType]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

/// Whether `a` immediately followed by `b` cancels to the unit.
pub fn contract_ok(a: &SimpleType, b: &SimpleType) -> bool {
    a.atom == b.atom && matches!((a.z, b.z), (0, -1) | (1, 0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub types: Vec<SimpleType>,
    /// Cancelled pairs `(p, q)`, `p < q`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Positions left over, left to right.
    pub survivors: Vec<usize>,
}

impl Reduction {
    pub fn result(&self) -> Vec<SimpleType> {
        self.survivors.iter().map(|&i| self.types[i].clone()).collect()
    }

    pub fn is_non_crossing(&self) -> bool {
        self.pairs.iter().all(|&(p, q)| {
            self.pairs
                .iter()
                .all(|&(a, b)| !(p < a && a < q && q < b))
                && self.survivors.iter().all(|&s| s < p || s > q)
        })
    }
}

/// `empty[i][j]`: the slice `i..j` cancels completely.
fn empty_table(ts: &[SimpleType]) -> Vec<Vec<bool>> {
    let n = ts.len();
    let mut e = vec![vec![false; n + 1]; n + 1];
    for (i, row) in e.iter_mut().enumerate() {
        row[i] = true;
    }
    for len in (2..=n).step_by(2) {
        for i in 0..=n - len {
            let j = i + len;
            e[i][j] = (i + 1..j)
                .step_by(2)
                .any(|k| contract_ok(&ts[i], &ts[k]) && e[i + 1][k] && e[k + 1][j]);
        }
    }
    e
}

/// Lexicographically least cancellation of `i..j`, which must be possible.
fn witness(ts: &[SimpleType], e: &[Vec<bool>], i: usize, j: usize, out: &mut Vec<(usize, usize)>) {
    if i == j {
        return;
    }
    let k = (i + 1..j)
        .step_by(2)
        .find(|&k| contract_ok(&ts[i], &ts[k]) && e[i + 1][k] && e[k + 1][j])
        .expect("interval is cancellable");
    out.push((i, k));
    witness(ts, e, i + 1, k, out);
    witness(ts, e, k + 1, j, out);
}

/// Reduce `ts` to the single simple type `target`. Among all reductions the
/// one with the lexicographically least pair list is returned.
pub fn reduce_to(ts: &[SimpleType], target: &SimpleType) -> Option<Reduction> {
    let n = ts.len();
    let e = empty_table(ts);
    (0..n)
        .filter(|&p| &ts[p] == target && e[0][p] && e[p + 1][n])
        .map(|p| {
            let mut pairs = Vec::new();
            witness(ts, &e, 0, p, &mut pairs);
            witness(ts, &e, p + 1, n, &mut pairs);
            Reduction {
                types: ts.to_vec(),
                pairs,
                survivors: vec![p],
            }
        })
        .min_by(|a, b| a.pairs.cmp(&b.pairs))
}

/// Reduce `ts` all the way to the unit.
pub fn reduce_to_unit(ts: &[SimpleType]) -> Option<Reduction> {
    let e = empty_table(ts);
    e[0][ts.len()].then(|| {
        let mut pairs = Vec::new();
        witness(ts, &e, 0, ts.len(), &mut pairs);
        Reduction {
            types: ts.to_vec(),
            pairs,
            survivors: vec![],
        }
    })
}

/// Every reduction to `target` (`None`: to the unit), by exhaustive search.
///
/// Scans left to right keeping a stack of open simple types: a type either
/// closes the top of the stack, opens a new pair, or, when nothing is open,
/// survives.
pub fn all_reductions(
    ts: &[SimpleType],
    target: Option<&SimpleType>,
) -> Result<Vec<Reduction>, PregroupError> {
    if ts.len() > BRUTE_FORCE_LIMIT {
        return Err(PregroupError::TooLong(ts.len()));
    }
    let mut found = Vec::new();
    let mut stack = Vec::new();
    let mut pairs = Vec::new();
    let mut survivors = Vec::new();
    scan(ts, 0, &mut stack, &mut pairs, &mut survivors, &mut found);
    let want: Vec<&SimpleType> = target.into_iter().collect();
    let mut out: Vec<Reduction> = found
        .into_iter()
        .filter(|(_, s)| s.iter().map(|&i| &ts[i]).collect::<Vec<_>>() == want)
        .map(|(mut pairs, survivors)| {
            pairs.sort_unstable();
            Reduction {
                types: ts.to_vec(),
                pairs,
                survivors,
            }
        })
        .collect();
    out.sort_by(|a, b| a.pairs.cmp(&b.pairs));
    Ok(out)
}

type Found = Vec<(Vec<(usize, usize)>, Vec<usize>)>;

fn scan(
    ts: &[SimpleType],
    i: usize,
    stack: &mut Vec<usize>,
    pairs: &mut Vec<(usize, usize)>,
    survivors: &mut Vec<usize>,
    found: &mut Found,
) {
    if i == ts.len() {
        if stack.is_empty() {
            found.push((pairs.clone(), survivors.clone()));
        }
        return;
    }
    if let Some(&top) = stack.last() {
        if contract_ok(&ts[top], &ts[i]) {
            stack.pop();
            pairs.push((top, i));
            scan(ts, i + 1, stack, pairs, survivors, found);
            pairs.pop();
            stack.push(top);
        }
    }
    stack.push(i);
    scan(ts, i + 1, stack, pairs, survivors, found);
    stack.pop();
    if stack.is_empty() {
        survivors.push(i);
        scan(ts, i + 1, stack, pairs, survivors, found);
        survivors.pop();
    }
}

/// Whether some reduction leaves exactly `target` (`None`: nothing).
pub fn brute_force_reduce(
    ts: &[SimpleType],
    target: Option<&SimpleType>,
) -> Result<bool, PregroupError> {
    Ok(!all_reductions(ts, target)?.is_empty())
}

/// One input wire per simple type; each cancelled pair becomes a cap and
/// each survivor runs straight to an output.
pub fn reduction_to_diagram(r: &Reduction) -> Diagram {
    let n = r.types.len();
    let mut nodes: Vec<Node> = r
        .types
        .iter()
        .map(|t| Node::Boundary { ty: t.wire() })
        .collect();
    let mut edges: Vec<Edge> = r
        .pairs
        .iter()
        .map(|&(p, q)| Edge(End::new(p, 0), End::new(q, 0)))
        .collect();
    let mut outputs = Vec::new();
    for &s in &r.survivors {
        let o = nodes.len();
        nodes.push(Node::Boundary {
            ty: r.types[s].wire(),
        });
        edges.push(Edge(End::new(s, 0), End::new(o, 0)));
        outputs.push(o);
    }
    Diagram::from_parts(nodes, edges, (0..n).collect(), outputs, vec![])
        .expect("a reduction wires every simple type once")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Vec<SimpleType> {
        parse_type(s, Convention::Plain).unwrap()
    }

    #[test]
    fn contraction_laws() {
        let n = SimpleType::base("n");
        let nl = SimpleType::new("n", -1).unwrap();
        let nr = SimpleType::new("n", 1).unwrap();
        assert!(contract_ok(&n, &nl));
        assert!(contract_ok(&nr, &n));
        assert!(!contract_ok(&nl, &n));
        assert!(!contract_ok(&n, &SimpleType::new("s", -1).unwrap()));
        assert!(SimpleType::new("n", 2).is_err());
    }

    #[test]
    fn transitive_sentence_reduces() {
        let ts = t("n n^l s n^r n");
        let r = reduce_to(&ts, &SimpleType::base("s")).unwrap();
        assert_eq!(r.pairs, vec![(0, 1), (3, 4)]);
        assert_eq!(r.survivors, vec![2]);
        let d = reduction_to_diagram(&r);
        assert_eq!(d.inputs().len(), 5);
        assert_eq!(d.output_types(), vec![WireType::new("s")]);
    }

    #[test]
    fn trivial_and_failing_cases() {
        let s = SimpleType::base("s");
        let r = reduce_to(&t("s"), &s).unwrap();
        assert!(r.pairs.is_empty());
        assert!(reduction_to_diagram(&r).canonical_equal(&Diagram::identity(&["s".into()])));
        assert!(reduce_to(&t("n n"), &s).is_none());
        assert!(!brute_force_reduce(&t("n n^l"), Some(&s)).unwrap());
        assert!(brute_force_reduce(&t("n n^l"), None).unwrap());
        assert!(reduce_to_unit(&t("n n^l")).is_some());
    }

    #[test]
    fn mirrored_convention_swaps_adjoints() {
        let m = parse_type("n n^r s n^l n", Convention::Mirrored).unwrap();
        assert_eq!(m, t("n n^l s n^r n"));
    }

    #[test]
    fn survivors_may_not_sit_under_a_cap() {
        // n s n^l: the only cancelling pair would enclose s
        assert!(reduce_to(&t("n s n^l"), &SimpleType::base("s")).is_none());
        assert!(!brute_force_reduce(&t("n s n^l"), Some(&SimpleType::base("s"))).unwrap());
    }

    #[test]
    fn oracle_limit() {
        let long = t(&["n"; 13].join(" "));
        assert!(matches!(
            brute_force_reduce(&long, None),
            Err(PregroupError::TooLong(13))
        ));
    }
}
