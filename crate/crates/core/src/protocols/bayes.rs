use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::diagram::{Diagram, GeneratorDecl, WireType};
use crate::tensor::{interpret, Model, TensorValue};

/// Marginal probabilities at or below this count as unsupported evidence.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Slack allowed in row sums.
const SUM_TOL: f64 = 1e-12;

/// Row-stochastic matrix: `rows[x][y] = M(y|x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Channel {
    rows: Vec<Vec<f64>>,
}

impl TryFrom<Vec<Vec<f64>>> for Channel {
    type Error = ProtocolError;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, ProtocolError> {
        Channel::new(rows)
    }
}

impl From<Channel> for Vec<Vec<f64>> {
    fn from(c: Channel) -> Self {
        c.rows
    }
}

fn check_distribution(v: &[f64]) -> Result<(), String> {
    if v.is_empty() {
        return Err("empty distribution".into());
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(format!("entry {x} is not a probability"));
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > SUM_TOL {
        return Err(format!("entries sum to {s}, not 1"));
    }
    Ok(())
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, ProtocolError> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || width == 0 {
            return Err(ProtocolError::Channel("empty matrix".into()));
        }
        for (x, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(ProtocolError::Channel(format!("row {x} has length {}", r.len())));
            }
            check_distribution(r).map_err(|e| ProtocolError::Channel(format!("row {x}: {e}")))?;
        }
        Ok(Channel { rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `|X|`.
    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    /// `|Y|`.
    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    /// `M(y|x)`.
    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.rows[x][y]
    }

    /// The pushforward `q(y) = Σₓ M(y|x) p(x)`.
    pub fn push(&self, p: &Prior) -> Vec<f64> {
        (0..self.outputs())
            .map(|y| (0..self.inputs()).map(|x| self.prob(y, x) * p.0[x]).sum())
            .collect()
    }
}

/// A probability vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Prior(Vec<f64>);

impl TryFrom<Vec<f64>> for Prior {
    type Error = ProtocolError;
    fn try_from(v: Vec<f64>) -> Result<Self, ProtocolError> {
        Prior::new(v)
    }
}

impl From<Prior> for Vec<f64> {
    fn from(p: Prior) -> Self {
        p.0
    }
}

impl Prior {
    pub fn new(p: Vec<f64>) -> Result<Self, ProtocolError> {
        check_distribution(&p).map_err(ProtocolError::Prior)?;
        Ok(Prior(p))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }
}

/// Result of [`bayes_invert`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inversion {
    /// `posterior[y][x] = B(x|y)`; rows of unsupported `y` are zero.
    pub posterior: Vec<Vec<f64>>,
    pub marginal: Vec<f64>,
    /// Outcomes `y` with `q(y) ≤ SUPPORT_TOL`.
    pub unsupported: Vec<usize>,
    /// Largest entrywise difference between the two computations.
    pub deviation: f64,
}

impl Inversion {
    /// The posterior as a channel from `Y` to `X`; fails if some evidence is
    /// unsupported.
    pub fn channel(&self) -> Result<Channel, ProtocolError> {
        if !self.unsupported.is_empty() {
            return Err(ProtocolError::Channel(format!(
                "unsupported evidence {:?}",
                self.unsupported
            )));
        }
        Channel::new(self.posterior.clone())
    }
}

/// `B(x|y) = M(y|x) p(x) / q(y)` entry by entry.
pub fn bayes_rule(p: &Prior, m: &Channel) -> Vec<Vec<f64>> {
    let q = m.push(p);
    (0..m.outputs())
        .map(|y| {
            (0..m.inputs())
                .map(|x| {
                    if q[y] > SUPPORT_TOL {
                        m.prob(y, x) * p.0[x] / q[y]
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// `M` bent across a prior-weighted cup `Σₓ p(x)|xx⟩` on `X` and an
/// evidence cap `Σ_y q(y)⁻¹⟨yy|` on `Y`.
fn transposed(p: &Prior, m: &Channel, q: &[f64]) -> Result<Vec<Vec<f64>>, ProtocolError> {
    let (nx, ny) = (m.inputs(), m.outputs());
    let mut model = Model::<f64>::new();
    model.add_type("X", nx)?;
    model.add_type("Y", ny)?;
    let channel = TensorValue::from_fn(vec![ny, nx], |i| m.prob(i[0], i[1]));
    model.add_generator(GeneratorDecl::new("M", &["X"], &["Y"]), channel)?;
    let cup = TensorValue::from_fn(vec![nx, nx], |i| if i[0] == i[1] { p.0[i[0]] } else { 0.0 });
    model.add_generator(GeneratorDecl::new("prior", &[], &["X", "X"]), cup)?;
    let cap = TensorValue::from_fn(vec![ny, ny], |i| {
        if i[0] == i[1] && q[i[0]] > SUPPORT_TOL {
            1.0 / q[i[0]]
        } else {
            0.0
        }
    });
    model.add_generator(GeneratorDecl::new("evidence", &["Y", "Y"], &[]), cap)?;
    let sig = model.signature();
    let (x, y) = (WireType::new("X"), WireType::new("Y"));
    let id_x = Diagram::identity(&[x]);
    let id_y = Diagram::identity(&[y]);
    let d = id_y
        .compose_par(&sig.generator("prior")?)
        .compose_seq(&id_y.compose_par(&sig.generator("M")?).compose_par(&id_x))?
        .compose_seq(&sig.generator("evidence")?.compose_par(&id_x))?;
    let t = interpret(&d, &model)?;
    Ok((0..ny)
        .map(|yy| (0..nx).map(|xx| t.get(&[xx, yy])).collect())
        .collect())
}

/// Invert `m` against the prior `p`, computing the posterior both by Bayes'
/// rule and as a transposed diagram, and requiring the two to agree to
/// within `1e-12`.
pub fn bayes_invert(p: &Prior, m: &Channel) -> Result<Inversion, ProtocolError> {
    if p.0.len() != m.inputs() {
        return Err(ProtocolError::Prior(format!(
            "prior has {} entries, channel has {} inputs",
            p.0.len(),
            m.inputs()
        )));
    }
    let q = m.push(p);
    let direct = bayes_rule(p, m);
    let diagrammatic = transposed(p, m, &q)?;
    let deviation = direct
        .iter()
        .flatten()
        .zip(diagrammatic.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if deviation > 1e-12 {
        return Err(ProtocolError::Disagreement(deviation));
    }
    let unsupported = (0..q.len()).filter(|&y| q[y] <= SUPPORT_TOL).collect();
    Ok(Inversion {
        posterior: diagrammatic,
        marginal: q,
        unsupported,
        deviation,
    })
}
