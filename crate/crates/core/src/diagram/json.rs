use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    Color, Diagram, DiagramError, DiagramResult, Edge, End, GeneratorDecl, Node, Signature,
    WireType,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeJson {
    Generator {
        name: String,
    },
    Spider {
        color: Color,
        #[serde(rename = "type")]
        ty: WireType,
    },
    Boundary {
        #[serde(rename = "type")]
        ty: WireType,
    },
}

/// On-disk diagram format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramJson {
    #[serde(default)]
    pub types: Vec<WireType>,
    #[serde(default)]
    pub generators: Vec<GeneratorDecl>,
    pub nodes: Vec<NodeJson>,
    /// `[[node, port], [node, port]]`
    pub edges: Vec<[[usize; 2]; 2]>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub circles: Vec<WireType>,
}

impl DiagramJson {
    /// Serialize `d`; generator declarations come from `sig` when given,
    /// otherwise from the labels stored in the diagram.
    pub fn from_diagram(d: &Diagram, sig: Option<&Signature>) -> DiagramJson {
        let mut types = BTreeSet::new();
        let mut gens: Vec<GeneratorDecl> = Vec::new();
        let mut nodes = Vec::new();
        for n in d.nodes() {
            nodes.push(match n {
                Node::Generator(g) => {
                    types.extend(g.inputs.iter().chain(&g.outputs).cloned());
                    if !gens.iter().any(|x| x.name == g.name) {
                        let decl = sig.and_then(|s| s.get(&g.name)).cloned().unwrap_or_else(|| {
                            GeneratorDecl {
                                name: g.name.clone(),
                                inputs: g.inputs.clone(),
                                outputs: g.outputs.clone(),
                                dagger: Some(g.dagger.clone()),
                                unitary: false,
                            }
                        });
                        gens.push(decl);
                    }
                    NodeJson::Generator {
                        name: g.name.clone(),
                    }
                }
                Node::Spider { color, ty } => {
                    types.insert(ty.clone());
                    NodeJson::Spider {
                        color: *color,
                        ty: ty.clone(),
                    }
                }
                Node::Boundary { ty } => {
                    types.insert(ty.clone());
                    NodeJson::Boundary { ty: ty.clone() }
                }
            });
        }
        types.extend(d.circles().iter().cloned());
        gens.sort_by(|a, b| a.name.cmp(&b.name));
        DiagramJson {
            types: types.into_iter().collect(),
            generators: gens,
            nodes,
            edges: d
                .edges()
                .iter()
                .map(|e| [[e.0.node, e.0.port], [e.1.node, e.1.port]])
                .collect(),
            inputs: d.inputs().to_vec(),
            outputs: d.outputs().to_vec(),
            circles: d.circles().to_vec(),
        }
    }

    /// The signature declared by the file.
    pub fn signature(&self) -> DiagramResult<Signature> {
        let mut sig = Signature::new();
        for t in &self.types {
            sig.add_type(t.clone());
        }
        for g in &self.generators {
            sig.add_generator(g.clone())?;
        }
        Ok(sig)
    }

    /// Build the diagram against `sig` (usually [`DiagramJson::signature`]).
    pub fn to_diagram(&self, sig: &Signature) -> DiagramResult<Diagram> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            nodes.push(match n {
                NodeJson::Generator { name } => Node::Generator(sig.label(name)?),
                NodeJson::Spider { color, ty } => {
                    sig.check_type(ty)?;
                    Node::Spider {
                        color: *color,
                        ty: ty.clone(),
                    }
                }
                NodeJson::Boundary { ty } => {
                    sig.check_type(ty)?;
                    Node::Boundary { ty: ty.clone() }
                }
            });
        }
        let edges = self
            .edges
            .iter()
            .map(|[[a, pa], [b, pb]]| Edge(End::new(*a, *pa), End::new(*b, *pb)))
            .collect();
        for t in &self.circles {
            sig.check_type(t)?;
        }
        Diagram::from_parts(
            nodes,
            edges,
            self.inputs.clone(),
            self.outputs.clone(),
            self.circles.clone(),
        )
    }

    pub fn parse(text: &str) -> DiagramResult<(Signature, Diagram)> {
        let j: DiagramJson = serde_json::from_str(text)
            .map_err(|e| DiagramError::Malformed(format!("diagram JSON: {e}")))?;
        let sig = j.signature()?;
        let d = j.to_diagram(&sig)?;
        Ok((sig, d))
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram JSON is always serializable")
    }
}
