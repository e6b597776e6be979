//! Tensor networks built from diagrams, and their contraction.

use std::collections::BTreeMap;

use serde::Serialize;

use super::value::{next_index, strides};
use super::{Model, Semiring, TensorError, TensorValue};
use crate::diagram::{Diagram, Node};

/// A tensor whose axes carry wire labels. A label shared by two axes is
/// summed over when the axes meet.
#[derive(Clone, Debug)]
pub(crate) struct Labeled<S> {
    pub labels: Vec<usize>,
    pub t: TensorValue<S>,
}

impl<S: Semiring> Labeled<S> {
    pub fn new(labels: Vec<usize>, t: TensorValue<S>) -> Self {
        debug_assert_eq!(labels.len(), t.rank());
        Labeled { labels, t }.trace_repeated()
    }

    /// Contract away labels that occur twice on this one tensor.
    fn trace_repeated(self) -> Self {
        let mut pairs = Vec::new();
        for i in 0..self.labels.len() {
            if let Some(j) = (i + 1..self.labels.len()).find(|&j| self.labels[j] == self.labels[i])
            {
                pairs.push((i, j));
            }
        }
        if pairs.is_empty() {
            return self;
        }
        let traced: Vec<bool> = (0..self.labels.len())
            .map(|k| pairs.iter().any(|&(i, j)| k == i || k == j))
            .collect();
        let keep: Vec<usize> = (0..self.labels.len()).filter(|&k| !traced[k]).collect();
        let shape = self.t.shape().to_vec();
        let st = strides(&shape);
        let out_shape: Vec<usize> = keep.iter().map(|&k| shape[k]).collect();
        let sum_shape: Vec<usize> = pairs.iter().map(|&(i, _)| shape[i]).collect();
        let t = TensorValue::from_fn(out_shape, |idx| {
            let base: usize = idx.iter().zip(&keep).map(|(&i, &k)| i * st[k]).sum();
            let mut acc = S::zero();
            let mut s = vec![0; pairs.len()];
            loop {
                let off: usize = base
                    + s.iter()
                        .zip(&pairs)
                        .map(|(&v, &(i, j))| v * (st[i] + st[j]))
                        .sum::<usize>();
                acc = acc.add(self.t.data()[off]);
                if !next_index(&mut s, &sum_shape) {
                    break;
                }
            }
            acc
        });
        Labeled {
            labels: keep.iter().map(|&k| self.labels[k]).collect(),
            t,
        }
    }

    /// Sum over shared labels; free axes of `self` come first.
    pub fn contract(&self, other: &Labeled<S>) -> Labeled<S> {
        let shared: Vec<usize> = self
            .labels
            .iter()
            .copied()
            .filter(|l| other.labels.contains(l))
            .collect();
        let a_free: Vec<usize> = (0..self.labels.len())
            .filter(|&k| !shared.contains(&self.labels[k]))
            .collect();
        let b_free: Vec<usize> = (0..other.labels.len())
            .filter(|&k| !shared.contains(&other.labels[k]))
            .collect();
        let a_sh: Vec<usize> = shared
            .iter()
            .map(|l| self.labels.iter().position(|x| x == l).unwrap())
            .collect();
        let b_sh: Vec<usize> = shared
            .iter()
            .map(|l| other.labels.iter().position(|x| x == l).unwrap())
            .collect();
        let (sa, sb) = (strides(self.t.shape()), strides(other.t.shape()));
        let sum_shape: Vec<usize> = a_sh.iter().map(|&k| self.t.shape()[k]).collect();
        let mut out_shape: Vec<usize> = a_free.iter().map(|&k| self.t.shape()[k]).collect();
        out_shape.extend(b_free.iter().map(|&k| other.t.shape()[k]));
        let na = a_free.len();
        let t = TensorValue::from_fn(out_shape, |idx| {
            let base_a: usize = idx[..na].iter().zip(&a_free).map(|(&i, &k)| i * sa[k]).sum();
            let base_b: usize = idx[na..].iter().zip(&b_free).map(|(&i, &k)| i * sb[k]).sum();
            let mut acc = S::zero();
            let mut s = vec![0; shared.len()];
            loop {
                let mut oa = base_a;
                let mut ob = base_b;
                for (q, &v) in s.iter().enumerate() {
                    oa += v * sa[a_sh[q]];
                    ob += v * sb[b_sh[q]];
                }
                acc = acc.add(self.t.data()[oa].mul(other.t.data()[ob]));
                if !next_index(&mut s, &sum_shape) {
                    break;
                }
            }
            acc
        });
        let mut labels: Vec<usize> = a_free.iter().map(|&k| self.labels[k]).collect();
        labels.extend(b_free.iter().map(|&k| other.labels[k]));
        Labeled { labels, t }
    }
}

/// Shape of the network a diagram turns into, independent of any model.
#[derive(Clone, Debug)]
pub(crate) struct NetworkShape {
    /// Per tensor: the node it came from (`None` for a bare boundary wire)
    /// and its axis labels.
    pub tensors: Vec<(Option<usize>, Vec<usize>)>,
    /// Label of every output then every input, in boundary order.
    pub open: Vec<usize>,
    /// Type of each label.
    pub label_types: BTreeMap<usize, crate::diagram::WireType>,
}

pub(crate) fn network_shape(d: &Diagram) -> NetworkShape {
    let edges = d.edges();
    let mut label_types = BTreeMap::new();
    let mut open_of = vec![usize::MAX; d.node_count()];
    let mut tensors = Vec::new();
    let mut fresh = edges.len();
    let mut wires = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        let ty = d.nodes()[e.0.node].port_type(e.0.port).clone();
        label_types.insert(i, ty.clone());
        let (ba, bb) = (
            d.nodes()[e.0.node].is_boundary(),
            d.nodes()[e.1.node].is_boundary(),
        );
        match (ba, bb) {
            (true, true) => {
                open_of[e.0.node] = i;
                open_of[e.1.node] = fresh;
                label_types.insert(fresh, ty);
                wires.push((None, vec![i, fresh]));
                fresh += 1;
            }
            (true, false) => open_of[e.0.node] = i,
            (false, true) => open_of[e.1.node] = i,
            (false, false) => {}
        }
    }
    for (id, n) in d.nodes().iter().enumerate() {
        match n {
            Node::Boundary { .. } => {}
            Node::Generator(g) => {
                // outputs first, then inputs
                let mut port_label = vec![usize::MAX; g.arity()];
                for (i, e) in edges.iter().enumerate() {
                    for end in [e.0, e.1] {
                        if end.node == id {
                            port_label[end.port] = i;
                        }
                    }
                }
                let n_in = g.inputs.len();
                let labels = port_label[n_in..]
                    .iter()
                    .chain(&port_label[..n_in])
                    .copied()
                    .collect();
                tensors.push((Some(id), labels));
            }
            Node::Spider { .. } => {
                let mut labels = Vec::new();
                for (i, e) in edges.iter().enumerate() {
                    for end in [e.0, e.1] {
                        if end.node == id {
                            labels.push(i);
                        }
                    }
                }
                tensors.push((Some(id), labels));
            }
        }
    }
    tensors.extend(wires);
    let open = d
        .outputs()
        .iter()
        .chain(d.inputs())
        .map(|&b| open_of[b])
        .collect();
    NetworkShape {
        tensors,
        open,
        label_types,
    }
}

/// Greedy pairwise contraction order.
///
/// Steps refer to tensors by id: the network's tensors are `0..n` and the
/// result of step `k` gets id `n + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionPlan {
    pub tensors: usize,
    pub steps: Vec<(usize, usize)>,
    /// Largest number of open axes of any intermediate result.
    pub max_rank: usize,
    /// Sum over steps of the number of scalar multiplications.
    pub cost: u128,
}

/// Plan assuming every wire has dimension 2.
pub fn contraction_plan(d: &Diagram) -> ContractionPlan {
    let shape = network_shape(d);
    plan_for(&shape, &|_| 2)
}

pub(crate) fn plan_for(shape: &NetworkShape, dim: &dyn Fn(usize) -> usize) -> ContractionPlan {
    // remove pairs that close up inside a single tensor
    let reduce = |labels: &[usize]| -> Vec<usize> {
        labels
            .iter()
            .copied()
            .filter(|l| labels.iter().filter(|x| *x == l).count() == 1)
            .collect()
    };
    let mut live: Vec<(usize, Vec<usize>)> = shape
        .tensors
        .iter()
        .enumerate()
        .map(|(i, (_, l))| (i, reduce(l)))
        .collect();
    let n = live.len();
    let mut steps = Vec::new();
    let mut max_rank = live.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    let mut cost: u128 = 0;
    let size = |labels: &[usize]| -> u128 { labels.iter().map(|&l| dim(l) as u128).product() };
    while live.len() > 1 {
        let mut best: Option<(u128, usize, usize, Vec<usize>, u128)> = None;
        for i in 0..live.len() {
            for j in i + 1..live.len() {
                let (a, b) = (&live[i].1, &live[j].1);
                let connected = a.iter().any(|l| b.contains(l));
                if !connected {
                    continue;
                }
                let result: Vec<usize> = a
                    .iter()
                    .filter(|l| !b.contains(l))
                    .chain(b.iter().filter(|l| !a.contains(l)))
                    .copied()
                    .collect();
                let mut all = a.clone();
                all.extend(b.iter().filter(|l| !a.contains(l)));
                let key = size(&result);
                if best.as_ref().is_none_or(|bst| key < bst.0) {
                    best = Some((key, i, j, result, size(&all)));
                }
            }
        }
        let (i, j, result, flops) = match best {
            Some((_, i, j, r, f)) => (i, j, r, f),
            None => {
                // disconnected pieces: outer product of the two smallest
                let mut order: Vec<usize> = (0..live.len()).collect();
                order.sort_by_key(|&k| (size(&live[k].1), k));
                let (i, j) = (order[0].min(order[1]), order[0].max(order[1]));
                let mut r = live[i].1.clone();
                r.extend(live[j].1.iter().copied());
                let f = size(&r);
                (i, j, r, f)
            }
        };
        steps.push((live[i].0, live[j].0));
        cost += flops;
        max_rank = max_rank.max(result.len());
        let id = n + steps.len() - 1;
        live.remove(j);
        live.remove(i);
        live.push((id, result));
    }
    ContractionPlan {
        tensors: n,
        steps,
        max_rank,
        cost,
    }
}

/// Evaluate a diagram in a model, contracting along the greedy plan.
pub fn interpret<S: Semiring>(d: &Diagram, m: &Model<S>) -> Result<TensorValue<S>, TensorError> {
    let shape = network_shape(d);
    let dims = label_dims(&shape, m)?;
    let plan = plan_for(&shape, &|l| dims[&l]);
    evaluate(d, m, &shape, &plan)
}

/// Evaluate along a caller-supplied plan.
pub fn interpret_with_plan<S: Semiring>(
    d: &Diagram,
    m: &Model<S>,
    plan: &ContractionPlan,
) -> Result<TensorValue<S>, TensorError> {
    let shape = network_shape(d);
    if plan.tensors != shape.tensors.len() || plan.steps.len() + 1 < shape.tensors.len() {
        return Err(TensorError::Plan(
            "plan does not fit this diagram's network".into(),
        ));
    }
    evaluate(d, m, &shape, plan)
}

fn label_dims<S: Semiring>(
    shape: &NetworkShape,
    m: &Model<S>,
) -> Result<BTreeMap<usize, usize>, TensorError> {
    shape
        .label_types
        .iter()
        .map(|(&l, t)| Ok((l, m.dim(t)?)))
        .collect()
}

fn evaluate<S: Semiring>(
    d: &Diagram,
    m: &Model<S>,
    shape: &NetworkShape,
    plan: &ContractionPlan,
) -> Result<TensorValue<S>, TensorError> {
    let dims = label_dims(shape, m)?;
    let mut pool: Vec<Option<Labeled<S>>> = Vec::new();
    for (node, labels) in &shape.tensors {
        let t = match node {
            None => TensorValue::identity(dims[&labels[0]]),
            Some(id) => match &d.nodes()[*id] {
                Node::Generator(g) => m.generator_tensor(&g.name)?.clone(),
                Node::Spider { color, ty } => m.spider_tensor(*color, ty, labels.len())?,
                Node::Boundary { .. } => unreachable!("boundaries carry no tensor"),
            },
        };
        pool.push(Some(Labeled::new(labels.clone(), t)));
    }
    for &(i, j) in &plan.steps {
        let a = pool
            .get_mut(i)
            .and_then(Option::take)
            .ok_or_else(|| TensorError::Plan(format!("tensor {i} is not available")))?;
        let b = pool
            .get_mut(j)
            .and_then(Option::take)
            .ok_or_else(|| TensorError::Plan(format!("tensor {j} is not available")))?;
        pool.push(Some(a.contract(&b)));
    }
    let mut rest = pool.into_iter().flatten();
    let mut result = match rest.next() {
        Some(r) => r,
        None => Labeled::new(vec![], TensorValue::scalar(S::one())),
    };
    if rest.next().is_some() {
        return Err(TensorError::Plan("plan leaves more than one tensor".into()));
    }
    let mut scalar = S::one();
    for t in d.circles() {
        scalar = scalar.mul(S::from_count(m.dim(t)?));
    }
    let perm: Vec<usize> = shape
        .open
        .iter()
        .map(|l| result.labels.iter().position(|x| x == l).expect("open label survives"))
        .collect();
    result.t = result.t.permute(&perm);
    Ok(if scalar == S::one() {
        result.t
    } else {
        result.t.scale(scalar)
    })
}
