//! Dual repellers, Conley forms and Morse sets.

use serde::Serialize;

use super::atoms::{AtomSet, Atoms};
use super::attractors::is_attracting_neighborhood;
use super::portrait::PhasePortrait;
use super::region::Region;
use crate::error::{Error, Result};

fn attractor_set(atoms: &Atoms, a: &Region) -> Result<AtomSet> {
    let set = atoms
        .exact_set(a)
        .ok_or_else(|| Error::NotAnAttractor(format!("{a} has endpoints off the portrait")))?;
    let ok = atoms.is_closed(set) && atoms.omega_set(set) == set && {
        let u = atoms.fatten(set, 0.5);
        is_attracting_neighborhood(atoms.p, &u) && atoms.exact_set(&omega_region(atoms, &u)) == Some(set)
    };
    if ok {
        Ok(set)
    } else {
        Err(Error::NotAnAttractor(a.to_string()))
    }
}

fn omega_region(atoms: &Atoms, u: &Region) -> Region {
    atoms.to_region(atoms.omega_spans(&atoms.spans_of_region(u)))
}

/// `A* = {x : ω(x) ∩ A = ∅}`.
pub fn dual_repeller(p: &PhasePortrait, a: &Region) -> Result<Region> {
    let atoms = Atoms::new(p)?;
    let set = attractor_set(&atoms, a)?;
    Ok(atoms.to_region(atoms.dual(set)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConleyMorse {
    /// `A ∩ A'*`.
    pub conley: Region,
    /// `(A ∨ A') ∩ (A ∧ A')*`.
    pub symmetric: Region,
    /// Whether the symmetric form equals `(A ∩ A'*) ∪ (A' ∩ A*)`.
    pub symmetric_identity: bool,
    /// Whether the Conley form is the maximal invariant subset of a Morse
    /// neighbourhood built from fattened attractor and repeller.
    pub morse_check: bool,
}

pub fn conley_morse(p: &PhasePortrait, a: &Region, a2: &Region) -> Result<ConleyMorse> {
    let atoms = Atoms::new(p)?;
    let sa = attractor_set(&atoms, a)?;
    let sb = attractor_set(&atoms, a2)?;
    let conley = sa & atoms.dual(sb);
    let join = sa | sb;
    let meet = atoms.omega_set(sa & sb);
    let symmetric = join & atoms.dual(meet);
    let other = (sa & atoms.dual(sb)) | (sb & atoms.dual(sa));

    // Morse neighbourhood: attracting neighbourhood of A cut by a repelling
    // neighbourhood of A'*
    let u = atoms.fatten(sa, 0.5);
    let rep = atoms.dual(sb);
    let v = atoms.fatten(rep, 0.5);
    let mut morse_check = is_attracting_neighborhood(p, &u);
    if p.is_flow() {
        morse_check &= is_attracting_neighborhood(&p.reversed()?, &v);
    }
    let n = u.intersection(&v);
    let inv = atoms.invariant_part(atoms.covered(&n));
    morse_check &= inv == conley;

    Ok(ConleyMorse {
        conley: atoms.to_region(conley),
        symmetric: atoms.to_region(symmetric),
        symmetric_identity: symmetric == other,
        morse_check,
    })
}
