use num_complex::Complex64;
use std::f64::consts::PI;
use torsionlab::characters::{induce, restrict, standard_table};
use torsionlab::groups::{build_group, cyclic_subgroups, FiniteSymmetryGroup, GroupSpec, PolytopeSymbol};

fn families() -> Vec<GroupSpec> {
    let mut v = vec![
        GroupSpec::lens(7),
        GroupSpec::Cyclic { q: 12, nu1: 1, nu2: 5 },
        GroupSpec::BinaryDihedral { q: 3 },
        GroupSpec::BinaryDihedral { q: 6 },
        GroupSpec::BinaryTetrahedral,
        GroupSpec::BinaryOctahedral,
        GroupSpec::BinaryIcosahedral,
    ];
    v.extend([PolytopeSymbol::P333, PolytopeSymbol::P334].map(|symbol| GroupSpec::PolytopeRotation { symbol }));
    v
}

fn subgroup_of_order(g: &FiniteSymmetryGroup, m: u32) -> usize {
    (0..g.order()).find(|&x| g.element_order(x) == m).expect("element of the requested order")
}

#[test]
fn frobenius_reciprocity() {
    for spec in families() {
        let g = build_group(spec).unwrap();
        let table = standard_table(&g).unwrap();
        for (gen, m) in cyclic_subgroups(&g) {
            for r in 0..m as i64 {
                let ind = induce(&g, gen, m, r);
                for psi in &table.irreps {
                    let lhs = table.inner(&ind, &psi.cf);
                    let res = restrict(&g, &psi.cf, gen, m);
                    let rhs: Complex64 = res
                        .iter()
                        .enumerate()
                        .map(|(j, v)| Complex64::from_polar(1.0, 2.0 * PI * (r * j as i64) as f64 / m as f64) * v.conj())
                        .sum::<Complex64>()
                        / m as f64;
                    assert!((lhs - rhs).norm() < 1e-9, "{spec} {} r={r}: {lhs} vs {rhs}", psi.label);
                }
            }
        }
    }
}

#[test]
fn induction_is_transitive_through_z10() {
    let g = build_group(GroupSpec::BinaryIcosahedral).unwrap();
    let gen10 = subgroup_of_order(&g, 10);
    let gen5 = g.power(gen10, 2);
    let via_z5 = induce(&g, gen5, 5, 1);
    // ω₁₀ and −ω₁₀ = ω₁₀⁶ both restrict to ω₅
    let via_z10 = induce(&g, gen10, 10, 1).add_scaled(&induce(&g, gen10, 10, 6), Complex64::new(1.0, 0.0));
    assert!(via_z5.max_abs_diff(&via_z10) < 1e-9);
}

#[test]
fn induced_characters_decompose() {
    use torsionlab::characters::decompose;
    let g = build_group(GroupSpec::BinaryIcosahedral).unwrap();
    let table = standard_table(&g).unwrap();
    let gen = subgroup_of_order(&g, 10);
    let parts = decompose(&induce(&g, gen, 10, 1), &table).unwrap();
    let dims: u32 = parts.iter().map(|(l, m)| table.get(l).unwrap().dim * m).sum();
    assert_eq!(dims, 12);
}
