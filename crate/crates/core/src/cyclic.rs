//! Boundary complex of the cyclic polytope via Gale's evenness condition.

use itertools::Itertools;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::vertex::VertexId;

/// Gale's evenness condition for a sorted subset `set` of `[1, n]`: between
/// any two non-members there is an even number of members.
pub fn satisfies_gale_evenness(set: &[u64], n: u64) -> bool {
    let mut prev_gap: Option<u64> = None;
    let mut between = 0usize;
    let mut it = set.iter().peekable();
    for x in 1..=n {
        if it.peek() == Some(&&x) {
            it.next();
            between += 1;
        } else {
            if prev_gap.is_some() && between % 2 == 1 {
                return false;
            }
            prev_gap = Some(x);
            between = 0;
        }
    }
    true
}

/// `∂C(n, d)` on the labels `Raw(1..=n)`.
pub fn cyclic_polytope_facets(n: u64, d: usize) -> Result<SimplicialComplex> {
    if d < 2 || n <= d as u64 {
        return Err(Error::DegenerateInput(format!("cyclic polytope C({n},{d}) needs d >= 2 and n > d")));
    }
    let facets = (1..=n)
        .combinations(d)
        .filter(|c| satisfies_gale_evenness(c, n))
        .map(|c| Simplex::from_verts(c.into_iter().map(VertexId::Raw)));
    SimplicialComplex::new(facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Literal pairwise form of the condition.
    fn gale_pairwise(set: &[u64], n: u64) -> bool {
        let outside: Vec<u64> = (1..=n).filter(|x| !set.contains(x)).collect();
        outside.iter().all(|&x| outside.iter().all(|&y| x >= y || set.iter().filter(|&&z| x < z && z < y).count() % 2 == 0))
    }

    #[test]
    fn matches_pairwise_oracle() {
        for n in 5..=10u64 {
            for d in 2..=5usize {
                if n <= d as u64 {
                    continue;
                }
                for c in (1..=n).combinations(d) {
                    assert_eq!(satisfies_gale_evenness(&c, n), gale_pairwise(&c, n), "{c:?} in C({n},{d})");
                }
            }
        }
    }

    #[test]
    fn small_cases() {
        assert!(satisfies_gale_evenness(&[1, 2, 3, 4], 6));
        assert_eq!(cyclic_polytope_facets(6, 4).unwrap().num_facets(), 9);
        assert_eq!(cyclic_polytope_facets(5, 4).unwrap().num_facets(), 5);
        // n(n-3)/2 facets for d = 4.
        for n in 5..=12u64 {
            assert_eq!(cyclic_polytope_facets(n, 4).unwrap().num_facets() as u64, n * (n - 3) / 2);
        }
        assert!(cyclic_polytope_facets(4, 4).is_err());
        assert!(cyclic_polytope_facets(5, 1).is_err());
    }
}
