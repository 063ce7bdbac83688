use std::collections::BTreeSet;

use proptest::prelude::*;

use sphereforge::cell::FreeSumCell;
use sphereforge::complex::{boundary_complex, SimplicialComplex};
use sphereforge::grid::{diagonal_band, shelling_order_band, GridBox};
use sphereforge::io::{format_choices, parse_choices};
use sphereforge::simplex::Simplex;
use sphereforge::topology::{certify, verify_shelling};
use sphereforge::vertex::VertexId;

fn raw(r: std::ops::Range<u64>) -> Simplex {
    Simplex::from_verts(r.map(VertexId::Raw))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn choices_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..70)) {
        prop_assert_eq!(parse_choices(&format_choices(&bits), bits.len()).unwrap(), bits);
    }

    #[test]
    fn free_sum_triangulations_share_boundary(f in 2u64..5, g in 2u64..5) {
        let c = FreeSumCell::new(raw(0..f), raw(10..10 + g)).unwrap();
        let lo = SimplicialComplex::new(c.triangulate(false)).unwrap();
        let hi = SimplicialComplex::new(c.triangulate(true)).unwrap();
        prop_assert_eq!(lo.num_facets() as u64, g);
        prop_assert_eq!(hi.num_facets() as u64, f);
        let d = (f + g - 2) as isize;
        prop_assert!(certify(&lo).is_ball(d));
        prop_assert!(certify(&hi).is_ball(d));
        prop_assert_eq!(boundary_complex(&lo).unwrap(), boundary_complex(&hi).unwrap());
        let expected: BTreeSet<Simplex> = c.boundary_facets().into_iter().collect();
        let bd = boundary_complex(&lo).unwrap();
        prop_assert_eq!(bd.facets(), &expected);
    }

    #[test]
    fn band_orders_are_shellings(dims in proptest::collection::vec(1u32..5, 2..4), a in 0u32..100, b in 0u32..100) {
        let bbox = GridBox::new(dims.clone()).unwrap();
        let d = dims.len() as u32;
        let top: u32 = dims.iter().sum();
        let m1 = d + a % (top - d + 1);
        let m2 = m1 + b % (top - m1 + 1);
        let band = diagonal_band(&bbox, m1, m2).unwrap();
        prop_assume!(band.shellable_guaranteed && !band.region.is_empty());
        let x = SimplicialComplex::new(band.region.simplices()).unwrap();
        prop_assert!(verify_shelling(&x, &shelling_order_band(&band).unwrap()).unwrap());
    }
}
