use std::collections::BTreeSet;

use rand::Rng;

use super::pd::{PdCode, PdCrossing};
use crate::{Error, Result};

/// The edge end at `slot` of crossing `x`, read as walking away from `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub x: usize,
    pub slot: usize,
}

fn other_end(pd: &PdCode, d: Dart) -> Dart {
    let e = pd.crossings[d.x].edges[d.slot];
    for (x, c) in pd.crossings.iter().enumerate() {
        for (s, &f) in c.edges.iter().enumerate() {
            if f == e && (x, s) != (d.x, d.slot) {
                return Dart { x, slot: s };
            }
        }
    }
    panic!("edge {e} has a single end");
}

/// Faces of the diagram as cycles of darts, each face on the left of its
/// darts.
pub fn faces(pd: &PdCode) -> Vec<Vec<Dart>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in 0..pd.crossings.len() {
        for slot in 0..4 {
            let start = Dart { x, slot };
            if seen.contains(&start) {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            loop {
                seen.insert(d);
                face.push(d);
                let a = other_end(pd, d);
                d = Dart { x: a.x, slot: (a.slot + 3) % 4 };
                if d == start {
                    break;
                }
            }
            out.push(face);
        }
    }
    out
}

/// Entry of a new crossing in counterclockwise order: label, strand, and
/// whether the edge enters the crossing.
type Slot = (usize, u8, bool);

fn assemble(ccw: [Slot; 4], under: u8) -> PdCrossing {
    let start = ccw.iter().position(|s| s.1 == under && s.2).expect("under strand enters");
    let r: Vec<Slot> = (0..4).map(|i| ccw[(start + i) % 4]).collect();
    let sign = if r[1].1 != under && !r[1].2 { 1 } else { -1 };
    PdCrossing { edges: [r[0].0, r[1].0, r[2].0, r[3].0], sign }
}

/// Adds a curl on `edge`. `side` picks the side of the edge, `under_first`
/// whether the first passage through the new crossing is the under one.
pub fn reidemeister1(pd: &PdCode, edge: Option<usize>, side: bool, under_first: bool) -> Result<PdCode> {
    let mut out = pd.clone();
    let next = pd.max_edge() + 1;
    let (e1, l, e3) = match edge {
        None => {
            if pd.free_loops == 0 {
                return Err(Error::InvalidParameters("no free loop to curl".into()));
            }
            out.free_loops -= 1;
            (next, next + 1, next)
        }
        Some(e) => {
            // retarget the head of e to the new label
            let mut done = false;
            for c in out.crossings.iter_mut() {
                for s in 0..4 {
                    if !done && c.edges[s] == e && c.is_incoming_slot(s) {
                        c.edges[s] = next + 1;
                        done = true;
                    }
                }
            }
            if !done {
                return Err(Error::InvalidParameters(format!("edge {e} not in diagram")));
            }
            (e, next, next + 1)
        }
    };
    // passage 1: e1 -> l, passage 2: l -> e3
    let a: [Slot; 4] = [(l, 1, false), (l, 2, true), (e1, 1, true), (e3, 2, false)];
    let ccw = if side { a } else { [a[3], a[2], a[1], a[0]] };
    out.crossings.push(assemble(ccw, if under_first { 1 } else { 2 }));
    Ok(out)
}

/// Pushes the edge of dart `a` across their common face over (or under) the
/// edge of dart `b`, creating two crossings.
pub fn reidemeister2(pd: &PdCode, a: Dart, b: Dart, a_over: bool) -> Result<PdCode> {
    let e = pd.crossings[a.x].edges[a.slot];
    let f = pd.crossings[b.x].edges[b.slot];
    if e == f {
        return Err(Error::InvalidParameters("R2 needs two distinct edges".into()));
    }
    let ae = other_end(pd, a);
    let be = other_end(pd, b);
    // walking along a (resp. b) agrees with the orientation iff the start slot is outgoing
    let fwd_e = !pd.crossings[a.x].is_incoming_slot(a.slot);
    let fwd_f = !pd.crossings[b.x].is_incoming_slot(b.slot);
    let n = pd.max_edge() + 1;
    let (ea, eb, ec) = (e, n, n + 1);
    let (fa, fb, fc) = (f, n + 2, n + 3);
    let mut out = pd.clone();
    out.crossings[ae.x].edges[ae.slot] = ec;
    out.crossings[be.x].edges[be.slot] = fc;
    // walking-direction entries, flipped where walking runs against the edge
    let se = |label: usize, walk_in: bool| (label, 1u8, walk_in == fwd_e);
    let sf = |label: usize, walk_in: bool| (label, 2u8, walk_in == fwd_f);
    let p1 = [sf(fb, true), se(eb, false), sf(fc, false), se(ea, true)];
    let p2 = [sf(fa, true), se(eb, true), sf(fb, false), se(ec, false)];
    let under = if a_over { 2 } else { 1 };
    out.crossings.push(assemble(p1, under));
    out.crossings.push(assemble(p2, under));
    Ok(out)
}

/// Applies `steps` random R1/R2 moves.
pub fn random_moves<R: Rng>(pd: &PdCode, steps: usize, rng: &mut R) -> Result<PdCode> {
    let mut cur = pd.clone();
    for _ in 0..steps {
        let use_r2 = !cur.is_empty() && rng.gen_bool(0.5);
        if use_r2 {
            let fs = faces(&cur);
            let face = &fs[rng.gen_range(0..fs.len())];
            let label = |d: &Dart| cur.crossings[d.x].edges[d.slot];
            let i = rng.gen_range(0..face.len());
            let candidates: Vec<&Dart> = face.iter().filter(|d| label(d) != label(&face[i])).collect();
            if candidates.is_empty() {
                continue;
            }
            let j = candidates[rng.gen_range(0..candidates.len())];
            cur = reidemeister2(&cur, face[i], *j, rng.gen_bool(0.5))?;
        } else {
            let edges: Vec<usize> = cur.edges().into_iter().collect();
            let edge = if edges.is_empty() { None } else { Some(edges[rng.gen_range(0..edges.len())]) };
            cur = reidemeister1(&cur, edge, rng.gen_bool(0.5), rng.gen_bool(0.5))?;
        }
    }
    Ok(cur.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdiag::invariants::{alexander, jones};
    use crate::knotdiag::pd::torus_reference;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn euler_ok(pd: &PdCode) -> bool {
        pd.is_empty() || faces(pd).len() == pd.len() + 2
    }

    #[test]
    fn curl_on_unknot() {
        for side in [false, true] {
            for u in [false, true] {
                let k = reidemeister1(&PdCode::unknot(), None, side, u).unwrap();
                k.validate().unwrap();
                assert_eq!(k.components(), 1);
                assert!(euler_ok(&k));
                assert_eq!(jones(&k).unwrap().to_string(), "1");
            }
        }
    }

    #[test]
    fn r2_on_trefoil_keeps_invariants() {
        let t = torus_reference(3, 2).unwrap();
        let v = jones(&t).unwrap();
        let fs = faces(&t);
        assert_eq!(fs.len(), 5);
        for face in &fs {
            for &a in face {
                for &b in face {
                    let Ok(m) = reidemeister2(&t, a, b, true) else { continue };
                    m.validate().unwrap();
                    assert!(euler_ok(&m));
                    assert_eq!(jones(&m).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn random_sequences_keep_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bases = [PdCode::unknot(), torus_reference(3, 2).unwrap(), torus_reference(2, 2).unwrap()];
        let mut runs = 0;
        for base in &bases {
            let v = jones(base).unwrap();
            let a = alexander(base).ok();
            for _ in 0..40 {
                let steps = rng.gen_range(1..=3);
                let m = random_moves(base, steps, &mut rng).unwrap();
                m.validate().unwrap();
                assert!(euler_ok(&m), "{m:?}");
                assert_eq!(jones(&m).unwrap(), v, "{m:?}");
                assert_eq!(alexander(&m).ok(), a);
                runs += 1;
            }
        }
        assert!(runs >= 100);
    }
}
