use super::{verify, ProtocolError, ProtocolReport};
use crate::diagram::{Diagram, WireType};
use crate::tensor::{Model, Semiring, DEFAULT_TOL};

/// The wire `f` acts on, if `f` is a declared and actual unitary `Q → Q`.
fn unitary_wire<S: Semiring>(m: &Model<S>, f: &str) -> Result<WireType, ProtocolError> {
    let bad = || ProtocolError::NotUnitary(f.to_string());
    let g = m.signature().get(f).ok_or_else(bad)?;
    let single = g.inputs.len() == 1 && g.outputs == g.inputs;
    if !single || !g.unitary || !m.is_unitary(f, DEFAULT_TOL)? {
        return Err(bad());
    }
    Ok(g.inputs[0].clone())
}

/// Bob's correction: `f†` turned upside down.
fn correction<S: Semiring>(m: &Model<S>, f: &str) -> Result<Diagram, ProtocolError> {
    Ok(m.signature().generator(f)?.dagger().transpose())
}

/// Alice's input, a shared cup, Alice's `f`-decorated cap on her two wires,
/// and Bob's correction on his.
pub fn teleportation_diagram<S: Semiring>(m: &Model<S>, f: &str) -> Result<Diagram, ProtocolError> {
    let q = unitary_wire(m, f)?;
    let id = Diagram::identity(std::slice::from_ref(&q));
    let share = id.compose_par(&Diagram::cup(&q));
    let decorate = id
        .compose_par(&m.signature().generator(f)?)
        .compose_par(&id);
    let measure = Diagram::cap(&q).compose_par(&correction(m, f)?);
    Ok(share.compose_seq(&decorate)?.compose_seq(&measure)?)
}

/// Teleportation through the unitary `f` with its correction. Target: the
/// identity wire.
pub fn teleportation_demo<S: Semiring>(m: &Model<S>, f: &str) -> Result<ProtocolReport, ProtocolError> {
    let d = teleportation_diagram(m, f)?;
    let q = unitary_wire(m, f)?;
    verify(&format!("teleportation[{f}]"), &d, &Diagram::identity(&[q]), m)
}

/// Two cups, an `f`-decorated cap joining their inner wires, and the
/// correction on the last wire.
pub fn swapping_diagram<S: Semiring>(m: &Model<S>, f: &str) -> Result<Diagram, ProtocolError> {
    let q = unitary_wire(m, f)?;
    let id = Diagram::identity(std::slice::from_ref(&q));
    let pairs = Diagram::cup(&q).compose_par(&Diagram::cup(&q));
    let decorate = id
        .compose_par(&id)
        .compose_par(&m.signature().generator(f)?)
        .compose_par(&id);
    let measure = id
        .compose_par(&Diagram::cap(&q))
        .compose_par(&correction(m, f)?);
    Ok(pairs.compose_seq(&decorate)?.compose_seq(&measure)?)
}

/// Negative control: the cap closes the second pair through the correction
/// instead of joining the two pairs.
pub fn swapping_misrouted<S: Semiring>(m: &Model<S>, f: &str) -> Result<Diagram, ProtocolError> {
    let q = unitary_wire(m, f)?;
    let id = Diagram::identity(std::slice::from_ref(&q));
    let pairs = Diagram::cup(&q).compose_par(&Diagram::cup(&q));
    let closed = correction(m, f)?
        .compose_par(&id)
        .compose_seq(&Diagram::cap(&q))?;
    let last = id
        .compose_par(&m.signature().generator(f)?)
        .compose_par(&closed);
    Ok(pairs.compose_seq(&last)?)
}

/// Entanglement swapping: the outer wires end up sharing a cup.
pub fn swapping_demo<S: Semiring>(m: &Model<S>, f: &str) -> Result<ProtocolReport, ProtocolError> {
    let d = swapping_diagram(m, f)?;
    let q = unitary_wire(m, f)?;
    verify(&format!("entanglement-swapping[{f}]"), &d, &Diagram::cup(&q), m)
}

/// Run the swapping checks on the misrouted diagram.
pub fn swapping_control<S: Semiring>(m: &Model<S>, f: &str) -> Result<ProtocolReport, ProtocolError> {
    let d = swapping_misrouted(m, f)?;
    let q = unitary_wire(m, f)?;
    verify(&format!("entanglement-swapping-misrouted[{f}]"), &d, &Diagram::cup(&q), m)
}
