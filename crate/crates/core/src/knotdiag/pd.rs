use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One crossing: edge labels counterclockwise starting at the incoming
/// under edge. For `sign = +1` slot 1 is the outgoing over edge, for
/// `sign = -1` it is the incoming over edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCrossing {
    pub edges: [usize; 4],
    pub sign: i8,
}

impl PdCrossing {
    pub fn over_in(&self) -> usize {
        if self.sign > 0 {
            self.edges[3]
        } else {
            self.edges[1]
        }
    }

    pub fn over_out(&self) -> usize {
        if self.sign > 0 {
            self.edges[1]
        } else {
            self.edges[3]
        }
    }

    pub fn under_in(&self) -> usize {
        self.edges[0]
    }

    pub fn under_out(&self) -> usize {
        self.edges[2]
    }

    /// Slot of the edge end that enters the crossing.
    pub fn is_incoming_slot(&self, slot: usize) -> bool {
        match slot {
            0 => true,
            2 => false,
            1 => self.sign < 0,
            _ => self.sign > 0,
        }
    }
}

/// Planar diagram code of an oriented link diagram on the sphere, plus the
/// number of crossingless unknotted components.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCode {
    pub crossings: Vec<PdCrossing>,
    pub free_loops: usize,
}

impl PdCode {
    pub fn unknot() -> Self {
        PdCode { crossings: Vec::new(), free_loops: 1 }
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    pub fn edges(&self) -> BTreeSet<usize> {
        self.crossings.iter().flat_map(|c| c.edges).collect()
    }

    /// Every edge appears once entering and once leaving a crossing.
    pub fn validate(&self) -> Result<()> {
        let mut ends: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for c in &self.crossings {
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::Parse("crossing sign must be ±1".into()));
            }
            for (s, &e) in c.edges.iter().enumerate() {
                let v = ends.entry(e).or_insert((0, 0));
                if c.is_incoming_slot(s) {
                    v.0 += 1;
                } else {
                    v.1 += 1;
                }
            }
        }
        for (e, (i, o)) in ends {
            if i != 1 || o != 1 {
                return Err(Error::Parse(format!("edge {e} has {i} heads and {o} tails")));
            }
        }
        Ok(())
    }

    /// Successor of each edge along its component.
    pub fn successor(&self) -> BTreeMap<usize, usize> {
        let mut next = BTreeMap::new();
        for c in &self.crossings {
            next.insert(c.under_in(), c.under_out());
            next.insert(c.over_in(), c.over_out());
        }
        next
    }

    /// Components, each as its cyclic list of edges.
    pub fn component_edges(&self) -> Vec<Vec<usize>> {
        let next = self.successor();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &e in next.keys() {
            if seen.contains(&e) {
                continue;
            }
            let mut comp = vec![e];
            seen.insert(e);
            let mut x = next[&e];
            while x != e {
                seen.insert(x);
                comp.push(x);
                x = next[&x];
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> usize {
        self.component_edges().len() + self.free_loops
    }

    /// Relabels edges `1..=E` along components in traversal order.
    pub fn normalized(&self) -> PdCode {
        let mut map = BTreeMap::new();
        for comp in self.component_edges() {
            for e in comp {
                let n = map.len() + 1;
                map.insert(e, n);
            }
        }
        PdCode {
            crossings: self
                .crossings
                .iter()
                .map(|c| PdCrossing { edges: c.edges.map(|e| map[&e]), sign: c.sign })
                .collect(),
            free_loops: self.free_loops,
        }
    }

    pub fn max_edge(&self) -> usize {
        self.edges().into_iter().next_back().unwrap_or(0)
    }

    /// Mirror image: every crossing switched.
    pub fn mirror(&self) -> PdCode {
        PdCode {
            crossings: self
                .crossings
                .iter()
                .map(|c| {
                    // the old over strand becomes the under strand
                    let [a, b, cc, d] = c.edges;
                    let e = if c.sign > 0 { [d, a, b, cc] } else { [b, cc, d, a] };
                    PdCrossing { edges: e, sign: -c.sign }
                })
                .collect(),
            free_loops: self.free_loops,
        }
    }
}

/// Closure of the positive braid `(σ1 σ2 … σ_{q-1})^p` on `q` strands.
pub fn torus_reference(p: usize, q: usize) -> Result<PdCode> {
    if q == 0 || p < q {
        return Err(Error::InvalidParameters(format!("torus type ({p},{q}) needs p >= q >= 1")));
    }
    if q == 1 {
        return Ok(PdCode::unknot());
    }
    let mut labels: Vec<usize> = (1..=q).collect();
    let mut next = q + 1;
    let mut crossings = Vec::new();
    for _ in 0..p {
        for i in 0..q - 1 {
            let (a, b) = (labels[i], labels[i + 1]);
            let (na, nb) = (next, next + 1);
            next += 2;
            // the strand moving right passes over
            crossings.push(PdCrossing { edges: [b, na, nb, a], sign: 1 });
            labels[i] = nb;
            labels[i + 1] = na;
        }
    }
    // close: the top label at each position is the bottom label there
    let close: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i + 1)).collect();
    for c in &mut crossings {
        c.edges = c.edges.map(|e| close.get(&e).copied().unwrap_or(e));
    }
    Ok(PdCode { crossings, free_loops: 0 }.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn trefoil_left() -> PdCode {
        let x = |e: [usize; 4]| PdCrossing { edges: e, sign: -1 };
        PdCode { crossings: vec![x([1, 4, 2, 5]), x([3, 6, 4, 1]), x([5, 2, 6, 3])], free_loops: 0 }
    }

    #[test]
    fn trefoil_code_is_valid() {
        let t = trefoil_left();
        t.validate().unwrap();
        assert_eq!(t.components(), 1);
        assert_eq!(t.writhe(), -3);
        let m = t.mirror();
        m.validate().unwrap();
        assert_eq!(m.writhe(), 3);
    }

    #[test]
    fn torus_references() {
        assert_eq!(torus_reference(3, 1).unwrap(), PdCode::unknot());
        let t32 = torus_reference(3, 2).unwrap();
        t32.validate().unwrap();
        assert_eq!((t32.len(), t32.components()), (3, 1));
        let t53 = torus_reference(5, 3).unwrap();
        t53.validate().unwrap();
        assert_eq!((t53.len(), t53.components()), (10, 1));
        let t42 = torus_reference(4, 2).unwrap();
        assert_eq!(t42.components(), 2);
        assert_eq!(torus_reference(6, 4).unwrap().components(), 2);
        assert!(torus_reference(2, 3).is_err());
    }
}
