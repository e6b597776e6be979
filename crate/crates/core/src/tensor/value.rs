use serde::{Deserialize, Serialize};

use super::{Semiring, TensorError};

/// Dense row-major array over a semiring.
///
/// For a process with `n` inputs and `m` outputs the shape lists the `m`
/// output dimensions first, then the `n` input dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorValue<S> {
    shape: Vec<usize>,
    data: Vec<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    Exact,
    UpToScalar,
}

/// Result of [`equal_tensors`].
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison<S> {
    pub equal: bool,
    /// `λ` with `a ≈ λ·b` (always `1` in exact mode when equal).
    pub scalar: Option<S>,
    /// Largest entrywise deviation after scaling.
    pub deviation: f64,
}

pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

/// Odometer over a mixed-radix index space.
pub(crate) fn next_index(idx: &mut [usize], shape: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

impl<S: Semiring> TensorValue<S> {
    pub fn new(shape: Vec<usize>, data: Vec<S>) -> Result<Self, TensorError> {
        let expected: usize = shape.iter().product();
        if expected != data.len() {
            return Err(TensorError::Shape(format!(
                "shape {:?} needs {} entries, got {}",
                shape,
                expected,
                data.len()
            )));
        }
        Ok(TensorValue { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        TensorValue {
            shape,
            data: vec![S::zero(); n],
        }
    }

    pub fn scalar(x: S) -> Self {
        TensorValue {
            shape: vec![],
            data: vec![x],
        }
    }

    /// `Σᵢ |i⟩⟨i|` on a `d`-dimensional wire.
    pub fn identity(d: usize) -> Self {
        let mut t = Self::zeros(vec![d, d]);
        for i in 0..d {
            t.data[i * d + i] = S::one();
        }
        t
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> S) -> Self {
        let n: usize = shape.iter().product();
        let mut data = Vec::with_capacity(n);
        let mut idx = vec![0; shape.len()];
        if n > 0 {
            loop {
                data.push(f(&idx));
                if !next_index(&mut idx, &shape) {
                    break;
                }
            }
        }
        TensorValue { shape, data }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn get(&self, idx: &[usize]) -> S {
        let st = strides(&self.shape);
        self.data[idx.iter().zip(&st).map(|(i, s)| i * s).sum::<usize>()]
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        TensorValue {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, k: S) -> Self {
        self.map(|x| x.mul(k))
    }

    pub fn conj(&self) -> Self {
        self.map(S::involution)
    }

    /// Reorder axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rank());
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let src = strides(&self.shape);
        TensorValue::from_fn(shape, |idx| {
            let off: usize = idx.iter().zip(perm).map(|(&i, &p)| i * src[p]).sum();
            self.data[off]
        })
    }

    /// Kronecker-style product: axes of `self` then axes of `other`.
    pub fn outer(&self, other: &Self) -> Self {
        let mut shape = self.shape.clone();
        shape.extend(&other.shape);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for &a in &self.data {
            for &b in &other.data {
                data.push(a.mul(b));
            }
        }
        TensorValue { shape, data }
    }

    /// Swap the output block (first `outputs` axes) with the input block.
    pub fn flip_blocks(&self, outputs: usize) -> Self {
        let r = self.rank();
        let perm: Vec<usize> = (outputs..r).chain(0..outputs).collect();
        self.permute(&perm)
    }

    /// Conjugate transpose of a process with `outputs` output axes.
    pub fn dagger(&self, outputs: usize) -> Self {
        self.flip_blocks(outputs).conj()
    }

    /// Sequential composition viewed as matrices: `self` is applied first.
    /// `self` has shape `[B.., A..]`, `next` has `[C.., B..]`.
    pub fn then(&self, self_outputs: usize, next: &Self, next_outputs: usize) -> Self {
        let b_axes = self_outputs;
        let next_inputs = next.rank() - next_outputs;
        assert_eq!(b_axes, next_inputs, "inner dimensions differ");
        assert_eq!(&self.shape[..b_axes], &next.shape[next_outputs..]);
        let inner: usize = self.shape[..b_axes].iter().product();
        let a: usize = self.shape[b_axes..].iter().product();
        let c: usize = next.shape[..next_outputs].iter().product();
        let mut data = vec![S::zero(); c * a];
        for i in 0..c {
            for j in 0..a {
                let mut acc = S::zero();
                for k in 0..inner {
                    acc = acc.add(next.data[i * inner + k].mul(self.data[k * a + j]));
                }
                data[i * a + j] = acc;
            }
        }
        let mut shape = next.shape[..next_outputs].to_vec();
        shape.extend(&self.shape[b_axes..]);
        TensorValue { shape, data }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "shape": self.shape,
            "data": self.data.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, TensorError> {
        let bad = |m: &str| TensorError::Shape(m.to_string());
        let shape: Vec<usize> = serde_json::from_value(
            v.get("shape").cloned().ok_or_else(|| bad("tensor needs `shape`"))?,
        )
        .map_err(|e| bad(&format!("bad shape: {e}")))?;
        let data = v
            .get("data")
            .and_then(|d| d.as_array())
            .ok_or_else(|| bad("tensor needs a `data` array"))?
            .iter()
            .map(|x| {
                S::from_json(x).ok_or_else(|| bad(&format!("`{x}` is not a {} scalar", S::NAME)))
            })
            .collect::<Result<Vec<S>, _>>()?;
        TensorValue::new(shape, data)
    }
}

/// Compare two tensors of the same shape.
///
/// Exact mode: `max |aᵢ − bᵢ| ≤ tol`. Up-to-scalar: `λ = a_k / b_k` at the
/// largest-magnitude entry of `a`, then `max |aᵢ − λ bᵢ| ≤ tol · |a_k|`.
/// Booleans are only ever compared for exact equality.
pub fn equal_tensors<S: Semiring>(
    a: &TensorValue<S>,
    b: &TensorValue<S>,
    mode: CompareMode,
    tol: f64,
) -> Result<Comparison<S>, TensorError> {
    if a.shape != b.shape {
        return Err(TensorError::Shape(format!(
            "cannot compare shapes {:?} and {:?}",
            a.shape, b.shape
        )));
    }
    if !S::approximate() {
        let equal = a.data == b.data;
        return Ok(Comparison {
            equal,
            scalar: equal.then(S::one),
            deviation: if equal { 0.0 } else { 1.0 },
        });
    }
    let dev_with = |lambda: S| {
        a.data
            .iter()
            .zip(&b.data)
            .map(|(&x, &y)| x.distance(y.mul(lambda)))
            .fold(0.0, f64::max)
    };
    match mode {
        CompareMode::Exact => {
            let deviation = dev_with(S::one());
            Ok(Comparison {
                equal: deviation <= tol,
                scalar: (deviation <= tol).then(S::one),
                deviation,
            })
        }
        CompareMode::UpToScalar => {
            let (k, amax) = a
                .data
                .iter()
                .enumerate()
                .map(|(i, x)| (i, x.magnitude()))
                .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if amax == 0.0 {
                let bmax = b.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
                return Ok(Comparison {
                    equal: bmax == 0.0,
                    scalar: (bmax == 0.0).then(S::one),
                    deviation: bmax,
                });
            }
            let Some(lambda) = a.data[k].ratio(b.data[k]) else {
                return Ok(Comparison {
                    equal: false,
                    scalar: None,
                    deviation: amax,
                });
            };
            let deviation = dev_with(lambda);
            let equal = deviation <= tol * amax;
            Ok(Comparison {
                equal,
                scalar: Some(lambda),
                deviation,
            })
        }
    }
}
