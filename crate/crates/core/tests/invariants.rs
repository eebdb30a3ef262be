//! Euler, Künneth and page-Euler invariants over every model in the built-in scene.
mod common;

use common::scene;
use vbetti_core::mvss::{row_alternating_sums, spectral_sequence};
use vbetti_core::scene::{BetaSection, SceneFile};
use vbetti_core::simplicial::{
    betti_cohomology, betti_compact_supports, betti_mod2, disjoint_union, euler_compact_supports,
    euler_compact_supports_combinatorial, product_complex,
};
use vbetti_core::BettiVector;

#[test]
fn euler_characteristic_two_ways_on_every_complex() {
    for (name, k) in &scene().complexes {
        let b = betti_mod2(k);
        assert_eq!(b.euler(), k.euler_characteristic(), "{name}");
        assert_eq!(b, betti_cohomology(k), "{name}: homology and cohomology differ over GF(2)");
        if let Some(d) = k.dim() {
            assert!(b.dims().len() <= d + 1, "{name}");
        }
    }
}

#[test]
fn compact_supports_euler_two_ways_on_every_pair() {
    for (name, p) in &scene().pairs {
        let combinatorial = euler_compact_supports_combinatorial(p);
        assert_eq!(euler_compact_supports(p), combinatorial, "{name}");
        assert_eq!(betti_compact_supports(p).euler(), combinatorial, "{name}");
        let total = p.total.euler_characteristic();
        let boundary = p.boundary_complex().euler_characteristic();
        assert_eq!(combinatorial, total - boundary, "{name}");
    }
}

#[test]
fn kunneth_on_small_complexes() {
    let names = ["point", "two-points", "circle", "figure-eight", "rp1", "rp2", "sphere-1"];
    let sc = scene();
    for a in names {
        for b in names {
            let (ka, kb) = (&sc.complexes[a], &sc.complexes[b]);
            if ka.vertices().len() * kb.vertices().len() > 64 {
                continue;
            }
            let prod = product_complex(ka, kb).unwrap();
            let expected = betti_mod2(ka).convolve(&betti_mod2(kb));
            assert_eq!(betti_mod2(&prod), expected, "{a} x {b}");
            assert_eq!(
                prod.euler_characteristic(),
                ka.euler_characteristic() * kb.euler_characteristic(),
                "{a} x {b}"
            );
        }
    }
}

#[test]
fn disjoint_union_adds_betti_numbers() {
    let sc = scene();
    for a in ["circle", "rp2", "torus", "point"] {
        for b in ["circle", "sphere-2", "empty"] {
            let (ka, kb) = (&sc.complexes[a], &sc.complexes[b]);
            assert_eq!(
                betti_mod2(&disjoint_union(ka, kb)),
                betti_mod2(ka).add(&betti_mod2(kb)),
                "{a} + {b}"
            );
        }
    }
}

#[test]
fn every_page_has_the_euler_characteristic_of_the_total() {
    for (name, a) in &scene().arrangements {
        let chi = a.total().euler_characteristic();
        let ss = spectral_sequence(a).unwrap();
        for page in &ss.pages {
            assert_eq!(page.euler(), chi, "{name}: E_{}", page.r);
            let rows = row_alternating_sums(page);
            let from_rows: i64 = rows
                .iter()
                .enumerate()
                .map(|(q, s)| if q % 2 == 0 { *s } else { -s })
                .sum();
            assert_eq!(from_rows, chi, "{name}: E_{} by rows", page.r);
        }
        // E_1 column p is the cohomology of the (p+1)-fold intersections
        let e1 = &ss.pages[0];
        for p in 0..a.len() {
            let col = a.column_betti(p);
            for q in 0..=a.total().dim().unwrap_or(0) {
                assert_eq!(e1.get(p, q), col.get(q), "{name}: E_1^({p},{q})");
            }
        }
        let mut b = Vec::new();
        for (&(p, q), &d) in &ss.infinity().dims {
            if b.len() <= p + q {
                b.resize(p + q + 1, 0usize);
            }
            b[p + q] += d;
        }
        assert_eq!(BettiVector::new(b), betti_mod2(a.total()), "{name}: convergence");
    }
}

#[test]
fn virtual_poincare_polynomial_at_minus_one_is_chi_c() {
    let sc = scene();
    let mut checked = 0;
    for section in BetaSection::SEARCH_ORDER {
        for name in sc.names_in(section) {
            let v = sc.virtual_betti_in(section, name).unwrap().unwrap();
            if let Some(chi) = v.chi_c {
                assert_eq!(v.beta.eval(-1).unwrap(), chi, "{} {name}", section.label());
                checked += 1;
            }
        }
    }
    assert!(checked >= 40, "only {checked} targets had an independent chi_c");
}

#[test]
fn scene_file_round_trip_is_identical() {
    let sc = scene();
    let json = sc.to_json();
    let file: SceneFile = serde_json::from_str(&json).unwrap();
    assert_eq!(&file, sc.file());
    assert_eq!(file.to_json(), json);
}
