use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

#[cfg(test)]
use super::value::next_index;
use super::{equal_tensors, CompareMode, Semiring, TensorError, TensorValue, DEFAULT_TOL};
use crate::diagram::{Color, Diagram, GeneratorDecl, Node, Signature, WireType};

/// A concrete dagger compact category: dimensions, generator tensors and
/// spider bases over the semiring `S`.
#[derive(Clone, Debug)]
pub struct Model<S> {
    signature: Signature,
    dims: BTreeMap<WireType, usize>,
    tensors: BTreeMap<String, TensorValue<S>>,
    bases: BTreeMap<(Color, WireType), Vec<Vec<S>>>,
}

impl<S: Semiring> Default for Model<S> {
    fn default() -> Self {
        Model {
            signature: Signature::new(),
            dims: BTreeMap::new(),
            tensors: BTreeMap::new(),
            bases: BTreeMap::new(),
        }
    }
}

fn err(m: impl Into<String>) -> TensorError {
    TensorError::Model(m.into())
}

impl<S: Semiring> Model<S> {
    pub fn new() -> Self {
        Model::default()
    }

    pub fn add_type(&mut self, ty: &str, dim: usize) -> Result<(), TensorError> {
        if dim == 0 {
            return Err(err(format!("type `{ty}` needs a positive dimension")));
        }
        self.signature.add_type(WireType::new(ty));
        self.dims.insert(WireType::new(ty), dim);
        Ok(())
    }

    /// Declare a generator with its tensor. The dagger partner's tensor is
    /// the conjugate transpose unless it was given already.
    pub fn add_generator(
        &mut self,
        decl: GeneratorDecl,
        t: TensorValue<S>,
    ) -> Result<(), TensorError> {
        self.signature
            .add_generator(decl.clone())
            .map_err(|e| err(e.to_string()))?;
        let expected = self.port_shape(&decl)?;
        if t.shape() != expected.as_slice() {
            return Err(err(format!(
                "generator `{}` needs shape {:?}, got {:?}",
                decl.name,
                expected,
                t.shape()
            )));
        }
        let partner = decl.partner();
        if !self.tensors.contains_key(&partner) {
            self.tensors
                .insert(partner.clone(), t.dagger(decl.outputs.len()));
        }
        if partner != decl.name || !self.tensors.contains_key(&decl.name) {
            self.tensors.insert(decl.name.clone(), t);
        }
        Ok(())
    }

    /// Replace a generator's tensor without touching its partner. Used to
    /// build deliberately inconsistent models.
    pub fn set_tensor(&mut self, name: &str, t: TensorValue<S>) -> Result<(), TensorError> {
        let decl = self
            .signature
            .get(name)
            .ok_or_else(|| TensorError::Missing(format!("generator `{name}`")))?
            .clone();
        if t.shape() != self.port_shape(&decl)?.as_slice() {
            return Err(err(format!("wrong shape for `{name}`")));
        }
        self.tensors.insert(name.to_string(), t);
        Ok(())
    }

    /// Set the basis a spider colour denotes on `ty`; `vectors[b]` is the
    /// `b`-th basis vector. Bases must be real and orthonormal.
    pub fn set_basis(
        &mut self,
        color: Color,
        ty: &WireType,
        vectors: Vec<Vec<S>>,
    ) -> Result<(), TensorError> {
        let d = self.dim(ty)?;
        if vectors.len() != d || vectors.iter().any(|v| v.len() != d) {
            return Err(err(format!("{color} basis on `{ty}` must be {d}×{d}")));
        }
        if S::approximate() {
            for (a, va) in vectors.iter().enumerate() {
                if va.iter().any(|x| x.distance(x.involution()) > DEFAULT_TOL) {
                    return Err(err(format!("{color} basis on `{ty}` must be real")));
                }
                for (b, vb) in vectors.iter().enumerate() {
                    let ip = va.iter().zip(vb).fold(S::zero(), |acc, (&x, &y)| acc.add(x.mul(y)));
                    let want = if a == b { S::one() } else { S::zero() };
                    if ip.distance(want) > 1e-9 {
                        return Err(err(format!(
                            "{color} basis on `{ty}` is not orthonormal"
                        )));
                    }
                }
            }
        }
        self.bases.insert((color, ty.clone()), vectors);
        Ok(())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn dim(&self, ty: &WireType) -> Result<usize, TensorError> {
        self.dims
            .get(ty)
            .copied()
            .ok_or_else(|| TensorError::Missing(format!("dimension for type `{ty}`")))
    }

    pub fn generator_tensor(&self, name: &str) -> Result<&TensorValue<S>, TensorError> {
        self.tensors
            .get(name)
            .ok_or_else(|| TensorError::Missing(format!("tensor for generator `{name}`")))
    }

    /// Basis for a colour; light defaults to the standard basis.
    pub fn basis(&self, color: Color, ty: &WireType) -> Result<Vec<Vec<S>>, TensorError> {
        if let Some(b) = self.bases.get(&(color, ty.clone())) {
            return Ok(b.clone());
        }
        if color == Color::Light {
            let d = self.dim(ty)?;
            return Ok((0..d)
                .map(|i| (0..d).map(|j| if i == j { S::one() } else { S::zero() }).collect())
                .collect());
        }
        Err(TensorError::Missing(format!("{color} basis on type `{ty}`")))
    }

    pub fn has_basis(&self, color: Color, ty: &WireType) -> bool {
        self.basis(color, ty).is_ok()
    }

    /// `Σ_b |b…b⟩` with `legs` tensor factors.
    pub fn spider_tensor(
        &self,
        color: Color,
        ty: &WireType,
        legs: usize,
    ) -> Result<TensorValue<S>, TensorError> {
        let basis = self.basis(color, ty)?;
        let d = basis.len();
        Ok(TensorValue::from_fn(vec![d; legs], |idx| {
            basis.iter().fold(S::zero(), |acc, v| {
                acc.add(idx.iter().fold(S::one(), |p, &i| p.mul(v[i])))
            })
        }))
    }

    fn port_shape(&self, decl: &GeneratorDecl) -> Result<Vec<usize>, TensorError> {
        decl.outputs
            .iter()
            .chain(&decl.inputs)
            .map(|t| self.dim(t))
            .collect()
    }

    /// Check that `d` only uses what this model assigns.
    pub fn covers(&self, d: &Diagram) -> Result<(), TensorError> {
        for n in d.nodes() {
            match n {
                Node::Generator(g) => {
                    self.generator_tensor(&g.name)?;
                }
                Node::Spider { color, ty } => {
                    self.basis(*color, ty)?;
                }
                Node::Boundary { ty } => {
                    self.dim(ty)?;
                }
            }
        }
        for t in d.circles() {
            self.dim(t)?;
        }
        Ok(())
    }

    /// Every partner tensor must be the conjugate transpose of its box.
    pub fn check_dagger(&self, tol: f64) -> Result<(), TensorError> {
        for g in self.signature.generators() {
            let t = self.generator_tensor(&g.name)?;
            let p = self.generator_tensor(&g.partner())?;
            let flipped = t.dagger(g.outputs.len());
            if !equal_tensors(&flipped, p, CompareMode::Exact, tol)?.equal {
                return Err(err(format!(
                    "`{}` is not the conjugate transpose of `{}`",
                    g.partner(),
                    g.name
                )));
            }
        }
        Ok(())
    }

    /// Whether `f ; f†` and `f† ; f` are both identities.
    pub fn is_unitary(&self, name: &str, tol: f64) -> Result<bool, TensorError> {
        let g = self
            .signature
            .get(name)
            .ok_or_else(|| TensorError::Missing(format!("generator `{name}`")))?;
        let t = self.generator_tensor(name)?;
        let p = self.generator_tensor(&g.partner())?;
        let (n, m) = (g.inputs.len(), g.outputs.len());
        let id = |types: &[WireType]| -> Result<TensorValue<S>, TensorError> {
            let ds: Vec<usize> = types.iter().map(|t| self.dim(t)).collect::<Result<_, _>>()?;
            let mut shape = ds.clone();
            shape.extend(&ds);
            let k = ds.len();
            Ok(TensorValue::from_fn(shape, |idx| {
                if idx[..k] == idx[k..] {
                    S::one()
                } else {
                    S::zero()
                }
            }))
        };
        let a = t.then(m, p, n);
        let b = p.then(n, t, m);
        Ok(equal_tensors(&a, &id(&g.inputs)?, CompareMode::Exact, tol)?.equal
            && equal_tensors(&b, &id(&g.outputs)?, CompareMode::Exact, tol)?.equal)
    }

    /// Check every generator flagged unitary.
    pub fn check_unitaries(&self, tol: f64) -> Result<(), TensorError> {
        for g in self.signature.unitaries() {
            if !self.is_unitary(&g.name, tol)? {
                return Err(err(format!("`{}` is flagged unitary but is not", g.name)));
            }
        }
        Ok(())
    }

    /// A copy where each partner tensor is the plain transpose, with no
    /// conjugation: a deliberately broken model.
    pub fn dagger_mutant(&self) -> Model<S> {
        let mut m = self.clone();
        for g in self.signature.generators() {
            if g.name < g.partner() {
                let t = &self.tensors[&g.name];
                m.tensors
                    .insert(g.partner(), t.flip_blocks(g.outputs.len()));
            }
        }
        m
    }

    fn from_file(f: ModelFile) -> Result<Self, TensorError> {
        let mut m = Model::new();
        for (t, d) in &f.types {
            m.add_type(t, *d)?;
        }
        // boxes with data first so that partners without data can be derived
        for g in f.generators.iter().filter(|g| g.data.is_some()) {
            let decl = GeneratorDecl {
                name: g.name.clone(),
                inputs: g.inputs.clone(),
                outputs: g.outputs.clone(),
                dagger: g.dagger.clone(),
                unitary: g.unitary,
            };
            let shape = match &g.shape {
                Some(s) => s.clone(),
                None => m.port_shape(&decl)?,
            };
            let data = g
                .data
                .as_ref()
                .unwrap()
                .iter()
                .map(|x| {
                    S::from_json(x).ok_or_else(|| {
                        err(format!("`{}`: `{x}` is not a {} scalar", g.name, S::NAME))
                    })
                })
                .collect::<Result<Vec<S>, _>>()?;
            let t = TensorValue::new(shape, data)?;
            m.add_generator(decl, t)?;
        }
        for g in f.generators.iter().filter(|g| g.data.is_none()) {
            let known = m.signature.get(&g.name).ok_or_else(|| {
                err(format!(
                    "generator `{}` has no data and is nobody's dagger",
                    g.name
                ))
            })?;
            if known.inputs != g.inputs || known.outputs != g.outputs {
                return Err(err(format!("`{}` disagrees with its partner", g.name)));
            }
            if g.unitary && !known.unitary {
                let mut decl = known.clone();
                decl.unitary = true;
                m.signature
                    .add_generator(decl)
                    .map_err(|e| err(e.to_string()))?;
            }
        }
        for (color, per_type) in &f.spiders {
            let color: Color = color.parse().map_err(|e: String| err(e))?;
            for (ty, basis) in per_type {
                let ty = WireType::new(ty.as_str());
                let t: TensorValue<S> = TensorValue::from_json(basis)?;
                let d = m.dim(&ty)?;
                if t.shape() != [d, d] {
                    return Err(err(format!("{color} basis on `{ty}` must have shape [{d},{d}]")));
                }
                let vectors = t.data().chunks(d).map(|c| c.to_vec()).collect();
                m.set_basis(color, &ty, vectors)?;
            }
        }
        if f.check_dagger {
            m.check_dagger(DEFAULT_TOL)?;
            m.check_unitaries(DEFAULT_TOL)?;
        }
        Ok(m)
    }
}

impl Model<f64> {
    fn check_nonnegative(&self) -> Result<(), TensorError> {
        for (name, t) in &self.tensors {
            if t.data().iter().any(|&x| x < 0.0) {
                return Err(err(format!("`{name}` has a negative entry")));
            }
        }
        for ((c, ty), b) in &self.bases {
            if b.iter().flatten().any(|&x| x < 0.0) {
                return Err(err(format!("{c} basis on `{ty}` has a negative entry")));
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    semiring: String,
    types: BTreeMap<String, usize>,
    #[serde(default)]
    generators: Vec<GeneratorFile>,
    #[serde(default)]
    spiders: BTreeMap<String, BTreeMap<String, Value>>,
    #[serde(default = "yes")]
    check_dagger: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    name: String,
    #[serde(default)]
    inputs: Vec<WireType>,
    #[serde(default)]
    outputs: Vec<WireType>,
    #[serde(default)]
    dagger: Option<String>,
    #[serde(default)]
    unitary: bool,
    #[serde(default)]
    shape: Option<Vec<usize>>,
    #[serde(default)]
    data: Option<Vec<Value>>,
}

/// A model over whichever semiring its file names.
#[derive(Clone, Debug)]
pub enum AnyModel {
    Complex(Model<Complex64>),
    Real(Model<f64>),
    Boolean(Model<bool>),
}

impl AnyModel {
    pub fn from_json_str(text: &str) -> Result<AnyModel, TensorError> {
        let f: ModelFile =
            serde_json::from_str(text).map_err(|e| err(format!("cannot read model: {e}")))?;
        match f.semiring.as_str() {
            "complex" => Ok(AnyModel::Complex(Model::from_file(f)?)),
            "nonneg-real" => {
                let m = Model::<f64>::from_file(f)?;
                m.check_nonnegative()?;
                Ok(AnyModel::Real(m))
            }
            "boolean" => Ok(AnyModel::Boolean(Model::from_file(f)?)),
            other => Err(err(format!(
                "unknown semiring `{other}` (expected complex, nonneg-real or boolean)"
            ))),
        }
    }

    pub fn semiring(&self) -> &'static str {
        match self {
            AnyModel::Complex(_) => Complex64::NAME,
            AnyModel::Real(_) => f64::NAME,
            AnyModel::Boolean(_) => bool::NAME,
        }
    }

    pub fn signature(&self) -> &Signature {
        match self {
            AnyModel::Complex(m) => m.signature(),
            AnyModel::Real(m) => m.signature(),
            AnyModel::Boolean(m) => m.signature(),
        }
    }

    pub fn dagger_mutant(&self) -> AnyModel {
        match self {
            AnyModel::Complex(m) => AnyModel::Complex(m.dagger_mutant()),
            AnyModel::Real(m) => AnyModel::Real(m.dagger_mutant()),
            AnyModel::Boolean(m) => AnyModel::Boolean(m.dagger_mutant()),
        }
    }
}

/// Every index tuple of a shape, in row-major order.
#[cfg(test)]
pub(crate) fn indices(shape: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if shape.contains(&0) {
        return out;
    }
    let mut idx = vec![0; shape.len()];
    loop {
        out.push(idx.clone());
        if !next_index(&mut idx, shape) {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUBIT: &str = r#"{
        "semiring": "complex",
        "types": {"Q": 2},
        "generators": [
            {"name": "S", "inputs": ["Q"], "outputs": ["Q"], "unitary": true,
             "data": [1, 0, 0, [0, 1]]}
        ],
        "spiders": {"dark": {"Q": {"shape": [2, 2],
            "data": [0.7071067811865476, 0.7071067811865476,
                     0.7071067811865476, -0.7071067811865476]}}}
    }"#;

    fn qubit() -> Model<Complex64> {
        match AnyModel::from_json_str(QUBIT).unwrap() {
            AnyModel::Complex(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn partner_is_conjugate_transpose() {
        let m = qubit();
        let s_dag = m.generator_tensor("S_dag").unwrap();
        assert_eq!(s_dag.get(&[1, 1]), Complex64::new(0.0, -1.0));
        assert!(m.is_unitary("S", 1e-12).unwrap());
    }

    #[test]
    fn mutant_fails_dagger_check() {
        let m = qubit().dagger_mutant();
        assert!(m.check_dagger(1e-9).is_err());
        assert!(!m.is_unitary("S", 1e-9).unwrap());
    }

    #[test]
    fn copy_spider_entries() {
        let m = qubit();
        let t = m.spider_tensor(Color::Light, &"Q".into(), 3).unwrap();
        for idx in indices(&[2, 2, 2]) {
            let want = if idx[0] == idx[1] && idx[1] == idx[2] { 1.0 } else { 0.0 };
            assert_eq!(t.get(&idx), Complex64::new(want, 0.0));
        }
    }

    #[test]
    fn bad_models_are_rejected() {
        let non_unitary = r#"{"semiring": "complex", "types": {"Q": 2}, "generators": [
            {"name": "P", "inputs": ["Q"], "outputs": ["Q"], "dagger": "P", "unitary": true,
             "data": [1, 0, 0, 0]}]}"#;
        assert!(AnyModel::from_json_str(non_unitary).is_err());
        let negative = r#"{"semiring": "nonneg-real", "types": {"X": 2}, "generators": [
            {"name": "m", "inputs": ["X"], "outputs": ["X"], "data": [1, -1, 0, 1]}]}"#;
        assert!(AnyModel::from_json_str(negative).is_err());
        let skew = r#"{"semiring": "complex", "types": {"Q": 2},
            "spiders": {"dark": {"Q": {"shape": [2, 2], "data": [1, 1, 0, 1]}}}}"#;
        assert!(AnyModel::from_json_str(skew).is_err());
        let unknown = r#"{"semiring": "tropical", "types": {}}"#;
        assert!(AnyModel::from_json_str(unknown).is_err());
    }

    #[test]
    fn dark_basis_is_required_explicitly() {
        let mut m = Model::<f64>::new();
        m.add_type("Q", 3).unwrap();
        assert!(m.spider_tensor(Color::Dark, &"Q".into(), 2).is_err());
        assert!(m.spider_tensor(Color::Light, &"Q".into(), 2).is_ok());
    }
}
