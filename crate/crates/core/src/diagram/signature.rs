use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Color, Diagram, DiagramError, DiagramResult, GenLabel, WireType};

/// Declaration of a box: its typed ports and its dagger partner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDecl {
    pub name: String,
    #[serde(default)]
    pub inputs: Vec<WireType>,
    #[serde(default)]
    pub outputs: Vec<WireType>,
    /// Name of the flipped box; defaults to `<name>_dag`.
    #[serde(default)]
    pub dagger: Option<String>,
    #[serde(default)]
    pub unitary: bool,
}

impl GeneratorDecl {
    pub fn new(name: &str, inputs: &[&str], outputs: &[&str]) -> Self {
        GeneratorDecl {
            name: name.to_string(),
            inputs: inputs.iter().map(|&t| t.into()).collect(),
            outputs: outputs.iter().map(|&t| t.into()).collect(),
            dagger: None,
            unitary: false,
        }
    }

    pub fn with_dagger(mut self, partner: &str) -> Self {
        self.dagger = Some(partner.to_string());
        self
    }

    pub fn self_adjoint(mut self) -> Self {
        self.dagger = Some(self.name.clone());
        self
    }

    pub fn unitary(mut self) -> Self {
        self.unitary = true;
        self
    }

    pub fn partner(&self) -> String {
        self.dagger
            .clone()
            .unwrap_or_else(|| format!("{}_dag", self.name))
    }
}

/// Wire types and generators available to diagrams.
///
/// Every generator has exactly one dagger partner with reversed arity;
/// partners that are not declared explicitly are added automatically.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Signature {
    types: BTreeSet<WireType>,
    generators: BTreeMap<String, GeneratorDecl>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn with_types(types: &[&str]) -> Self {
        let mut s = Signature::new();
        for t in types {
            s.add_type(WireType::new(*t));
        }
        s
    }

    pub fn add_type(&mut self, ty: WireType) {
        self.types.insert(ty);
    }

    pub fn has_type(&self, ty: &WireType) -> bool {
        self.types.contains(ty)
    }

    pub fn types(&self) -> impl Iterator<Item = &WireType> {
        self.types.iter()
    }

    pub fn generators(&self) -> impl Iterator<Item = &GeneratorDecl> {
        self.generators.values()
    }

    pub fn get(&self, name: &str) -> Option<&GeneratorDecl> {
        self.generators.get(name)
    }

    pub fn add_generator(&mut self, decl: GeneratorDecl) -> DiagramResult<()> {
        for t in decl.inputs.iter().chain(&decl.outputs) {
            self.check_type(t)?;
        }
        let name = decl.name.clone();
        let bad = |why: &str| Err(DiagramError::BadDeclaration(name.clone(), why.into()));
        let partner = decl.partner();
        let mut decl = decl;
        decl.dagger = Some(partner.clone());
        if let Some(existing) = self.generators.get(&decl.name) {
            if existing == &decl {
                return Ok(());
            }
            // an auto-declared partner may be refined by an explicit flag
            if existing.inputs == decl.inputs
                && existing.outputs == decl.outputs
                && existing.dagger == decl.dagger
            {
                let unitary = existing.unitary || decl.unitary;
                self.set_unitary(&decl.name, unitary);
                return Ok(());
            }
            return bad("conflicts with an earlier declaration");
        }
        if partner == decl.name {
            if decl.inputs != decl.outputs {
                return bad("a self-adjoint box needs equal input and output types");
            }
            self.generators.insert(decl.name.clone(), decl);
            return Ok(());
        }
        match self.generators.get(&partner) {
            Some(p) => {
                if p.partner() != decl.name || p.inputs != decl.outputs || p.outputs != decl.inputs
                {
                    return bad("dagger partner has incompatible declaration");
                }
            }
            None => {
                let p = GeneratorDecl {
                    name: partner.clone(),
                    inputs: decl.outputs.clone(),
                    outputs: decl.inputs.clone(),
                    dagger: Some(decl.name.clone()),
                    unitary: decl.unitary,
                };
                self.generators.insert(partner, p);
            }
        }
        self.generators.insert(decl.name.clone(), decl);
        Ok(())
    }

    fn set_unitary(&mut self, name: &str, unitary: bool) {
        let partner = self.generators[name].partner();
        for n in [name.to_string(), partner] {
            if let Some(g) = self.generators.get_mut(&n) {
                g.unitary = unitary;
            }
        }
    }

    /// Union of two signatures; fails on conflicting declarations.
    pub fn merge(&mut self, other: &Signature) -> DiagramResult<()> {
        for t in &other.types {
            self.add_type(t.clone());
        }
        for g in other.generators.values() {
            self.add_generator(g.clone())?;
        }
        Ok(())
    }

    pub fn check_type(&self, ty: &WireType) -> DiagramResult<()> {
        if self.types.contains(ty) {
            Ok(())
        } else {
            Err(DiagramError::UnknownType(ty.clone()))
        }
    }

    pub fn label(&self, name: &str) -> DiagramResult<Arc<GenLabel>> {
        let g = self
            .generators
            .get(name)
            .ok_or_else(|| DiagramError::UnknownGenerator(name.to_string()))?;
        Ok(Arc::new(GenLabel {
            name: g.name.clone(),
            dagger: g.partner(),
            inputs: g.inputs.clone(),
            outputs: g.outputs.clone(),
        }))
    }

    pub fn identity(&self, types: &[WireType]) -> DiagramResult<Diagram> {
        for t in types {
            self.check_type(t)?;
        }
        Ok(Diagram::identity(types))
    }

    pub fn generator(&self, name: &str) -> DiagramResult<Diagram> {
        Ok(Diagram::generator(self.label(name)?))
    }

    pub fn cup(&self, ty: &WireType) -> DiagramResult<Diagram> {
        self.check_type(ty)?;
        Ok(Diagram::cup(ty))
    }

    pub fn cap(&self, ty: &WireType) -> DiagramResult<Diagram> {
        self.check_type(ty)?;
        Ok(Diagram::cap(ty))
    }

    pub fn swap(&self, s: &WireType, t: &WireType) -> DiagramResult<Diagram> {
        self.check_type(s)?;
        self.check_type(t)?;
        Ok(Diagram::swap(s, t))
    }

    pub fn spider(&self, color: Color, ty: &WireType, n: usize, m: usize) -> DiagramResult<Diagram> {
        self.check_type(ty)?;
        Ok(Diagram::spider(color, ty, n, m))
    }

    /// Generators flagged unitary, each listed once per dagger pair.
    pub fn unitaries(&self) -> Vec<&GeneratorDecl> {
        self.generators
            .values()
            .filter(|g| g.unitary && g.name <= g.partner())
            .collect()
    }

    /// Check that a diagram only uses what this signature declares.
    pub fn check_diagram(&self, d: &Diagram) -> DiagramResult<()> {
        for n in d.nodes() {
            match n {
                super::Node::Generator(g) => {
                    let decl = self.label(&g.name)?;
                    if *decl != **g {
                        return Err(DiagramError::BadDeclaration(
                            g.name.clone(),
                            "diagram disagrees with the signature".into(),
                        ));
                    }
                }
                super::Node::Spider { ty, .. } | super::Node::Boundary { ty } => {
                    self.check_type(ty)?
                }
            }
        }
        for t in d.circles() {
            self.check_type(t)?;
        }
        Ok(())
    }
}
