use linfty_core::bundle::tubular_psi;
use linfty_core::ce::KoszulChart;
use linfty_core::{Poly, PolyRing};

#[test]
fn koszul_identity_exhaustive() {
    for n in 1..=3usize {
        for k in 1..=n.min(2) {
            let ring = PolyRing::new((0..n).map(|i| format!("x{i}")));
            let u: Vec<Poly> = (0..k).map(Poly::var).collect();
            let c = KoszulChart::new(ring, &u).unwrap();
            let r = c.identity_check(6);
            assert!(r.passed(), "n={n} k={k} {r:?}");
            for w in 0..=6 {
                let h = c.cohomology_by_weight(w).unwrap();
                assert!(h.iter().all(|(q, d)| *q == 0 || *d == 0), "n={n} k={k} w={w}");
            }
        }
    }
}

#[test]
fn tubular_psi_is_euler_on_random_sections() {
    let ring = PolyRing::new(["x", "y", "z"]);
    for text in ["x*y + x^2*z - 3*x", "x^3 - 2*x*z^2", "x*y*z + x"] {
        let u = ring.parse(text).unwrap();
        let t = tubular_psi(&[u], 1).unwrap();
        assert!(t.euler && t.boundary, "{text}");
    }
    let ring = PolyRing::new(["x", "y", "z"]);
    let u = vec![ring.parse("x + y*z - x*y").unwrap(), ring.parse("y^2 + x*y*z").unwrap()];
    let t = tubular_psi(&u, 2).unwrap();
    assert!(t.euler && t.boundary);
}
