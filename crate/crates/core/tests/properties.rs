use proptest::prelude::*;

use xc01::constructions::{downmono_targets, reflection_targets, union_point_targets, Predecessor};
use xc01::core_types::{apply_symmetry, enumerate_symmetries};
use xc01::equivalence::{canonical_01_id, find_affine_map};
use xc01::exact_geometry::affine_dimension;
use xc01::lower_bounds::{
    all_bounds, determinant_pairs, enumerate_maximal_rectangles, min_cover_oracle, rectangle_covering_number,
    refined_rectangle_covering_number,
};
use xc01::{SlackMatrix, VertexSet};

fn small_matrix() -> impl Strategy<Value = SlackMatrix<i64>> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(m, k)| proptest::collection::vec(proptest::collection::vec(0i64..=3, k), m))
        .prop_filter("oracle size", |rows| rows.iter().flatten().filter(|&&x| x > 0).count() <= 12)
        .prop_map(|rows| SlackMatrix::from_rows(rows).unwrap())
}

fn medium_matrix() -> impl Strategy<Value = SlackMatrix<i64>> {
    (1usize..=7, 1usize..=7)
        .prop_flat_map(|(m, k)| proptest::collection::vec(proptest::collection::vec(0i64..=3, k), m))
        .prop_map(|rows| SlackMatrix::from_rows(rows).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn matrix_with_transform() -> impl Strategy<Value = (SlackMatrix<i64>, Vec<usize>, Vec<usize>, Vec<i64>, Vec<i64>)> {
    medium_matrix().prop_flat_map(|s| {
        let (m, k) = (s.rows(), s.cols());
        (
            Just(s),
            permutation(m),
            permutation(k),
            proptest::collection::vec(1i64..=4, m),
            proptest::collection::vec(1i64..=4, k),
        )
    })
}

fn full_dim_set(n: usize) -> impl Strategy<Value = VertexSet> {
    (1u32..(1u32 << (1 << n)))
        .prop_map(move |m| VertexSet::new(n, m).unwrap())
        .prop_filter("full-dimensional", move |v| affine_dimension(v).unwrap() == n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solvers_match_oracle(s in small_matrix()) {
        prop_assert_eq!(rectangle_covering_number(&s).unwrap(), min_cover_oracle(&s, false).unwrap());
        prop_assert_eq!(refined_rectangle_covering_number(&s).unwrap(), min_cover_oracle(&s, true).unwrap());
    }

    #[test]
    fn bounds_are_ordered(s in medium_matrix()) {
        let (omega, rc, rrc) = all_bounds(&s).unwrap();
        prop_assert!(omega <= rc && rc <= rrc);
    }

    #[test]
    fn bounds_ignore_order_and_scale((s, rows, cols, rs, cs) in matrix_with_transform()) {
        let t = SlackMatrix::from_rows(
            rows.iter().map(|&i| cols.iter().map(|&j| s.get(i, j) * rs[i] * cs[j]).collect()).collect(),
        ).unwrap();
        prop_assert_eq!(all_bounds(&s).unwrap(), all_bounds(&t).unwrap());
        prop_assert_eq!(determinant_pairs(&s).unwrap().len(), determinant_pairs(&t).unwrap().len());
    }

    #[test]
    fn maximal_rectangles_cover_the_support(s in medium_matrix()) {
        let rects = enumerate_maximal_rectangles(&s).unwrap();
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                let covered = rects.iter().any(|r| r.contains(i, j));
                prop_assert_eq!(covered, s.get(i, j) > 0);
            }
        }
        for (a, b) in rects.iter().zip(rects.iter().skip(1)) {
            prop_assert!(a < b);
        }
    }

    #[test]
    fn canonical_id_is_an_orbit_invariant(mask in 1u32..=u16::MAX as u32, which in 0usize..384) {
        let v = VertexSet::new(4, mask).unwrap();
        let sigma = &enumerate_symmetries(4).unwrap()[which];
        let w = apply_symmetry(sigma, &v).unwrap();
        prop_assert_eq!(canonical_01_id(&v), canonical_01_id(&w));
        prop_assert!(canonical_01_id(&v) <= v.id());
    }

    #[test]
    fn affine_maps_are_symmetric(v in full_dim_set(3), w in full_dim_set(3)) {
        let forward = find_affine_map(&v, &w);
        let backward = find_affine_map(&w, &v);
        prop_assert_eq!(forward.is_some(), backward.is_some());
        if let Some(map) = forward {
            let mut image = 0u32;
            for p in v.points() {
                let q = map.apply(&p.iter().map(|&x| xc01::Rational::from_integer(x as i128)).collect::<Vec<_>>());
                let idx = q.iter().enumerate().fold(0usize, |acc, (i, c)| acc | (c.to_integer() as usize) << i);
                image |= 1 << idx;
            }
            prop_assert_eq!(image, w.mask());
        }
    }

    #[test]
    fn operations_grow_the_predecessor(mask in 1u32..=u16::MAX as u32, xcs in 0usize..10, facets in 0usize..10) {
        let set = VertexSet::new(4, mask).unwrap();
        let pred = Predecessor { set, class_id: 0, xcs, n_facets: facets };
        let mut targets = union_point_targets(&pred);
        targets.extend(reflection_targets(&pred));
        targets.extend((0..4).filter_map(|j| downmono_targets(&pred, j)));
        for (t, cert) in targets {
            prop_assert!(set.is_subset(&t) && t != set);
            prop_assert!(cert.bound > xcs.min(facets));
        }
    }
}
