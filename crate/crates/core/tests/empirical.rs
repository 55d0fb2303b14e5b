use lp_envelopes::oracle::{empirical_b, interior_grid, Extremum};
use lp_envelopes::sampling::{random_disc_point, substream};
use lp_envelopes::{lower_envelope, upper_envelope, ConeTriple, Exponent};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[test]
fn supremum_and_infimum_reach_the_envelopes() {
    for p in [-1.0, 0.5, 1.5, 3.0] {
        let p = Exponent::new(p).unwrap();
        for (i, &(s, z)) in interior_grid(5).iter().enumerate() {
            let t = ConeTriple::from_cross_section(s, z).unwrap();
            let sup = empirical_b(p, &t, Extremum::Sup, 8, i as u64).unwrap();
            let inf = empirical_b(p, &t, Extremum::Inf, 8, i as u64).unwrap();
            assert!(
                rel(sup, upper_envelope(p, &t)) <= 1e-6,
                "p = {p} ({s}, {z})"
            );
            assert!(
                rel(inf, lower_envelope(p, &t)) <= 1e-6,
                "p = {p} ({s}, {z})"
            );
        }
    }
}

#[test]
fn empirical_supremum_is_midpoint_concave() {
    let mut rng = substream(11, 0);
    for p in [-2.0, 0.7, 1.3, 4.0] {
        let p = Exponent::new(p).unwrap();
        for k in 0..20u64 {
            let (s1, z1) = random_disc_point(&mut rng);
            let (s2, z2) = random_disc_point(&mut rng);
            let a = ConeTriple::from_cross_section(s1, z1).unwrap();
            let b = ConeTriple::from_cross_section(s2, z2).unwrap();
            let m = ConeTriple::from_cross_section(0.5 * (s1 + s2), 0.5 * (z1 + z2)).unwrap();
            let sup = |t: &ConeTriple| empirical_b(p, t, Extremum::Sup, 4, k).unwrap();
            let avg = 0.5 * (sup(&a) + sup(&b));
            assert!(sup(&m) >= avg - 1e-6 * avg.abs().max(1.0), "p = {p}");
        }
    }
}
