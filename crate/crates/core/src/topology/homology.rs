//! Reduced homology over GF(2) from boundary-matrix ranks.

use std::collections::HashMap;

use crate::complex::SimplicialComplex;

/// Rank over GF(2) of a sparse matrix given by columns of sorted row
/// indices. Columns are consumed.
pub(crate) fn gf2_rank(mut columns: Vec<Vec<u32>>) -> usize {
    let mut pivot_of: HashMap<u32, usize> = HashMap::new();
    let mut rank = 0;
    for c in 0..columns.len() {
        let mut col = std::mem::take(&mut columns[c]);
        while let Some(&low) = col.last() {
            match pivot_of.get(&low) {
                Some(&p) => col = xor_sorted(&col, &columns[p]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_of.insert(low, c);
            rank += 1;
        }
        columns[c] = col;
    }
    rank
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Reduced Betti numbers over GF(2) of a complex whose facets are given as
/// sorted vertex-index lists of equal length. Entry `k` is `β̃_k`.
pub(crate) fn reduced_betti_indexed(facets: &[Vec<u32>]) -> Vec<usize> {
    let Some(first) = facets.first() else {
        return Vec::new();
    };
    let top = first.len();
    if top == 0 {
        return Vec::new();
    }
    // faces[k] = faces with k+1 vertices
    let mut faces: Vec<HashMap<Vec<u32>, u32>> = vec![HashMap::new(); top];
    for f in facets {
        let n = f.len();
        for mask in 1u32..(1u32 << n) {
            let s: Vec<u32> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| f[i]).collect();
            let k = s.len() - 1;
            let next = faces[k].len() as u32;
            faces[k].entry(s).or_insert(next);
        }
    }
    let counts: Vec<usize> = faces.iter().map(HashMap::len).collect();
    // rank[k] = rank of the boundary map from k-faces to (k-1)-faces;
    // rank[0] is the augmentation.
    let mut rank = vec![0usize; top + 1];
    rank[0] = usize::from(counts[0] > 0);
    for k in 1..top {
        let cols: Vec<Vec<u32>> = faces[k]
            .keys()
            .map(|s| {
                let mut col: Vec<u32> = (0..s.len())
                    .map(|drop| {
                        let sub: Vec<u32> =
                            s.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, v)| *v).collect();
                        faces[k - 1][&sub]
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect();
        rank[k] = gf2_rank(cols);
    }
    (0..top).map(|k| counts[k] - rank[k] - rank[k + 1]).collect()
}

/// Reduced Betti numbers over GF(2) in dimensions `0..=dim`.
pub fn betti_gf2(x: &SimplicialComplex) -> Vec<usize> {
    let verts: Vec<_> = x.vertices().into_iter().collect();
    let facets: Vec<Vec<u32>> = x
        .facets()
        .iter()
        .map(|f| f.verts().iter().map(|v| verts.binary_search(v).unwrap() as u32).collect())
        .collect();
    reduced_betti_indexed(&facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{boundary_complex, cone};
    use crate::cyclic::cyclic_polytope_facets;
    use crate::simplex::Simplex;
    use crate::vertex::VertexId;

    fn r(xs: &[u64]) -> Simplex {
        xs.iter().map(|&x| VertexId::Raw(x)).collect()
    }

    #[test]
    fn spheres_and_cones() {
        let d4 = boundary_complex(&SimplicialComplex::simplex(r(&[1, 2, 3, 4, 5]))).unwrap();
        assert_eq!(betti_gf2(&d4), vec![0, 0, 0, 1]);
        assert_eq!(betti_gf2(&cone(&d4, VertexId::ConeApex).unwrap()), vec![0, 0, 0, 0, 0]);
        assert_eq!(betti_gf2(&cyclic_polytope_facets(8, 4).unwrap()), vec![0, 0, 0, 1]);
    }

    #[test]
    fn disconnected_and_circle() {
        let two_points = SimplicialComplex::new([r(&[1]), r(&[2])]).unwrap();
        assert_eq!(betti_gf2(&two_points), vec![1]);
        let circle = SimplicialComplex::new([r(&[1, 2]), r(&[2, 3]), r(&[1, 3])]).unwrap();
        assert_eq!(betti_gf2(&circle), vec![0, 1]);
    }

    #[test]
    fn projective_plane_has_z2_homology() {
        // Six-vertex RP^2: over GF(2) both β1 and β2 are 1.
        let rp2 = SimplicialComplex::new(
            [
                [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
                [2, 3, 5], [3, 4, 6], [2, 4, 5], [3, 5, 6], [2, 4, 6],
            ]
            .iter()
            .map(|t| r(t)),
        )
        .unwrap();
        assert_eq!(betti_gf2(&rp2), vec![0, 1, 1]);
    }

    #[test]
    fn rank_of_small_matrix() {
        assert_eq!(gf2_rank(vec![vec![0, 1], vec![1, 2], vec![0, 2]]), 2);
        assert_eq!(gf2_rank(vec![vec![], vec![3]]), 1);
    }
}
