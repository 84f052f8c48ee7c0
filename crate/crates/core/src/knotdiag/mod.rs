//! Projective knot diagrams, their lift to the 3-sphere, and polynomial
//! invariants for identifying torus links.

mod diagram;
mod invariants;
mod laurent;
mod moves;
mod pd;

pub use diagram::{build_diagram, diagram_from_set, identify_diagram, identify_torus, InvariantMatch, lift_double_cover, u1_center, IdentifyReport, LiftedDiagram, Passage, ProjCrossing, ProjDiagram, Verdict};
pub use invariants::{
    alexander, alexander_torus_closed_form, jones, jones_with, kauffman_bracket, kauffman_bracket_with, STATE_SUM_BUDGET,
};
pub use laurent::LaurentPoly;
pub use moves::{faces, random_moves, reidemeister1, reidemeister2, Dart};
pub use pd::{torus_reference, PdCode, PdCrossing};
