use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::vertex::VertexId;

/// Facets listed in a proposed shelling sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingOrder {
    pub order: Vec<Simplex>,
}

/// Checks that each facet after the first meets the union of its
/// predecessors in a nonempty union of its own ridges that is not its whole
/// boundary.
pub fn verify_shelling(x: &SimplicialComplex, s: &ShellingOrder) -> Result<bool> {
    let listed: BTreeSet<&Simplex> = s.order.iter().collect();
    if listed.len() != s.order.len() {
        return Err(Error::InvalidOrder("repeated facet".into()));
    }
    if listed.len() != x.num_facets() || !listed.iter().all(|f| x.facets().contains(*f)) {
        return Err(Error::InvalidOrder("order does not list exactly the facets of the complex".into()));
    }
    let mut placed_ridges: HashSet<Simplex> = HashSet::new();
    let mut star: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (j, sigma) in s.order.iter().enumerate() {
        if j > 0 {
            let present: Vec<&VertexId> =
                sigma.verts().iter().filter(|v| placed_ridges.contains(&sigma.without(v))).collect();
            if present.is_empty() || present.len() == sigma.len() {
                return Ok(false);
            }
            // Every earlier facet must meet sigma inside one of the present
            // ridges, i.e. miss at least one vertex opposite a present ridge.
            let earlier: BTreeSet<usize> =
                sigma.verts().iter().filter_map(|v| star.get(v)).flatten().copied().collect();
            for i in earlier {
                let tau = &s.order[i];
                if !present.iter().any(|v| !tau.contains(v)) {
                    return Ok(false);
                }
            }
        }
        for r in sigma.boundary_facets() {
            placed_ridges.insert(r);
        }
        for v in sigma.verts() {
            star.entry(*v).or_default().push(j);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(xs: &[u64]) -> Simplex {
        xs.iter().map(|&x| VertexId::Raw(x)).collect()
    }

    #[test]
    fn basic_orders() {
        let one = SimplicialComplex::simplex(r(&[1, 2, 3]));
        assert!(verify_shelling(&one, &ShellingOrder { order: vec![r(&[1, 2, 3])] }).unwrap());

        let strip = SimplicialComplex::new([r(&[1, 2, 3]), r(&[2, 3, 4]), r(&[3, 4, 5])]).unwrap();
        let good = ShellingOrder { order: vec![r(&[1, 2, 3]), r(&[2, 3, 4]), r(&[3, 4, 5])] };
        assert!(verify_shelling(&strip, &good).unwrap());
        // Second facet only touches the first at a vertex.
        let bad = ShellingOrder { order: vec![r(&[1, 2, 3]), r(&[3, 4, 5]), r(&[2, 3, 4])] };
        assert!(!verify_shelling(&strip, &bad).unwrap());
    }

    #[test]
    fn disjoint_second_facet() {
        let x = SimplicialComplex::new([r(&[1, 2, 3]), r(&[4, 5, 6]), r(&[3, 4, 5])]).unwrap();
        let s = ShellingOrder { order: vec![r(&[1, 2, 3]), r(&[4, 5, 6]), r(&[3, 4, 5])] };
        assert!(!verify_shelling(&x, &s).unwrap());
    }

    #[test]
    fn closing_facet_rejected() {
        let sphere = SimplicialComplex::new([r(&[1, 2, 3]), r(&[1, 2, 4]), r(&[1, 3, 4]), r(&[2, 3, 4])]).unwrap();
        let s = ShellingOrder { order: sphere.facets().iter().cloned().collect() };
        assert!(!verify_shelling(&sphere, &s).unwrap());
    }

    #[test]
    fn not_a_permutation() {
        let x = SimplicialComplex::new([r(&[1, 2, 3]), r(&[2, 3, 4])]).unwrap();
        let s = ShellingOrder { order: vec![r(&[1, 2, 3])] };
        assert!(matches!(verify_shelling(&x, &s), Err(Error::InvalidOrder(_))));
        let s = ShellingOrder { order: vec![r(&[1, 2, 3]), r(&[1, 2, 3])] };
        assert!(verify_shelling(&x, &s).is_err());
    }
}
