use proptest::prelude::*;
use torsionlab::characters::standard_table;
use torsionlab::groups::{build_group, inverse_mod, GroupSpec, PolytopeSymbol};
use torsionlab::torsion::{
    torsion_closed_form, torsion_lens, torsion_via_cyclic_decomposition, Convention, TwistSpec,
};
use torsionlab::zetalab::{cancellation_check, torsion_spectral, ZetaParams};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn coprime_lens() -> impl Strategy<Value = (u32, u32, u32, u32)> {
    (2u32..=16)
        .prop_flat_map(|q| (Just(q), 1..q, 1..q, 0..q))
        .prop_filter("coprime", |(q, a, b, _)| gcd(*q, *a) == 1 && gcd(*q, *b) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lens_routes_agree((q, l1, l2, r) in coprime_lens()) {
        let conv = Convention::Doubled;
        let lens = torsion_lens(q, [l1, l2], r, conv).unwrap();
        let spec = GroupSpec::Cyclic { q, nu1: inverse_mod(l1, q), nu2: inverse_mod(l2, q) };
        let g = build_group(spec).unwrap();
        prop_assert_eq!(spec.to_string(), lens.group.clone());
        let table = standard_table(&g).unwrap();
        let twist = if r == 0 { TwistSpec::Trivial } else { TwistSpec::Irrep { label: format!("w^{r}") } };
        let closed = torsion_closed_form(&g, &table, &twist, conv).unwrap();
        let spectral = torsion_spectral(&g, &table, &twist, conv, &ZetaParams::default()).unwrap();
        prop_assert!((lens.numeric - closed.numeric).abs() < 1e-8);
        prop_assert!((spectral.numeric - closed.numeric).abs() < 1e-8);
    }

    #[test]
    fn sine_symmetry((q, l1, l2, r) in coprime_lens()) {
        let a = torsion_lens(q, [l1, l2], r, Convention::PaperTable).unwrap();
        let b = torsion_lens(q, [q - l1, l2], r, Convention::PaperTable).unwrap();
        prop_assert!((a.numeric - b.numeric).abs() < 1e-12);
    }

    #[test]
    fn cancellation_for_rational_angles(q in 1i64..=30, a in 0i64..30, b in 0i64..30) {
        let alpha = torsionlab::RationalAngle::new(a, q);
        let beta = torsionlab::RationalAngle::new(b, q);
        let c = cancellation_check(alpha, beta, &ZetaParams::default()).unwrap();
        prop_assert!(c.f0.abs() < 1e-8 && c.f0_prime.abs() < 1e-8, "{:?}", c);
    }
}

#[test]
fn spectral_matches_closed_form_on_every_twist() {
    let mut specs = vec![
        GroupSpec::BinaryDihedral { q: 3 },
        GroupSpec::BinaryDihedral { q: 5 },
        GroupSpec::BinaryTetrahedral,
        GroupSpec::BinaryOctahedral,
        GroupSpec::BinaryIcosahedral,
    ];
    specs.push(GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P333 });
    for spec in specs {
        let g = build_group(spec).unwrap();
        let table = standard_table(&g).unwrap();
        for chi in &table.irreps {
            let twist = TwistSpec::Irrep { label: chi.label.clone() };
            let closed = torsion_closed_form(&g, &table, &twist, Convention::PaperTable).unwrap();
            let spectral = torsion_spectral(&g, &table, &twist, Convention::PaperTable, &ZetaParams::default()).unwrap();
            assert!(
                (closed.numeric - spectral.numeric).abs() < 1e-8,
                "{spec} {}: {} vs {}",
                chi.label,
                closed.numeric,
                spectral.numeric
            );
        }
    }
}

#[test]
fn cyclic_decomposition_matches_closed_form() {
    let mut specs = vec![GroupSpec::BinaryTetrahedral, GroupSpec::BinaryOctahedral, GroupSpec::BinaryIcosahedral];
    specs.extend((2..=8).map(|q| GroupSpec::BinaryDihedral { q }));
    for spec in specs {
        let g = build_group(spec).unwrap();
        let table = standard_table(&g).unwrap();
        let closed = torsion_closed_form(&g, &table, &TwistSpec::Trivial, Convention::PaperTable).unwrap();
        let cyc = torsion_via_cyclic_decomposition(&spec, &TwistSpec::Trivial, Convention::PaperTable).unwrap();
        assert!(cyc.log_value.unwrap().same_value(closed.log_value.as_ref().unwrap()), "{spec}");
    }
}

#[test]
fn cyclic_decomposition_rejects_twists() {
    let r = torsion_via_cyclic_decomposition(
        &GroupSpec::BinaryIcosahedral,
        &TwistSpec::Irrep { label: "2s".into() },
        Convention::PaperTable,
    );
    assert!(r.is_err());
}
