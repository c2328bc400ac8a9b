use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use modular_analog::arith::linalg::RMatrix;
use modular_analog::arith::local::{build_local_ring, LocalRing};
use modular_analog::character::{
    borel_character, full_irreducible_table, induced_character, torus_character, zu_character, ClassFunction,
    LinearCharacter,
};
use modular_analog::cohomology::shapiro_check;
use modular_analog::group::{build_heisenberg_semidirect, gl2_with_torus, FiniteGroup};
use modular_analog::lattice::{induced_lattice, Lattice};
use modular_analog::pnilpotent::{heisenberg_characters, heisenberg_modules};
use modular_analog::report::{canonical_json, run_sequence, Family, RunConfig};
use proptest::prelude::*;

fn z9() -> LocalRing {
    build_local_ring(3, 1, 2).unwrap()
}

/// Every `a·r₀ + b·r₁` over `Z/9`, as integer pairs. Elements of `Z/9` are
/// stored as a single residue.
fn span(m: &RMatrix) -> BTreeSet<(u64, u64)> {
    let rows: Vec<[i64; 2]> = (0..m.rows())
        .map(|i| [m.get(i, 0).0[0] as i64, m.get(i, 1).0[0] as i64])
        .collect();
    let mut out = BTreeSet::new();
    let n = 9i64.pow(rows.len() as u32);
    for code in 0..n {
        let mut c = code;
        let mut v = [0i64; 2];
        for r in &rows {
            let a = c % 9;
            c /= 9;
            v[0] += a * r[0];
            v[1] += a * r[1];
        }
        out.insert((v[0].rem_euclid(9) as u64, v[1].rem_euclid(9) as u64));
    }
    out
}

#[test]
fn howell_form_on_every_two_by_two_over_z9() {
    let ring = z9();
    for code in 0..9i64.pow(4) {
        let vals = [code % 9, code / 9 % 9, code / 81 % 9, code / 729];
        let a = RMatrix::from_ints(&ring, 2, 2, &vals);
        let hf = a.howell();
        assert_eq!(hf.h.howell().h, hf.h, "Howell form not idempotent for {vals:?}");
        assert_eq!(hf.u.mul(&a), hf.h, "transform for {vals:?}");
        let s = span(&a);
        assert_eq!(span(&hf.h), s, "row span changed for {vals:?}");
        let pe = a.pivoted_echelon();
        assert_eq!(span(&pe.h), s, "pivoted echelon span for {vals:?}");
        // each summand R/π^{2-v} of the span has 3^{2-v} elements
        let size: u64 = pe.pivots.iter().map(|&(_, v)| 3u64.pow(2 - v)).product();
        assert_eq!(size as usize, s.len(), "invariants for {vals:?}");
        // Howell property: the vectors with zero first coordinate are spanned
        // by the rows whose pivot is in column 1
        let tail: BTreeSet<_> = s.iter().filter(|v| v.0 == 0).cloned().collect();
        let keep: Vec<usize> = (0..hf.h.rows()).filter(|&i| hf.pivots[i].0 == 1).collect();
        assert_eq!(span(&hf.h.select_rows(&keep)), tail, "Howell property for {vals:?}");
    }
}

struct Gl2Fixture {
    g: FiniteGroup,
    table: Vec<ClassFunction>,
    m: u32,
}

fn gl2() -> &'static Gl2Fixture {
    static F: OnceLock<Gl2Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let table = full_irreducible_table(&g, m).unwrap();
        Gl2Fixture { g, table, m }
    })
}

/// `λ(x^i) = ζ^{k i}` on the cyclic subgroup generated by `x`.
fn cyclic_character(g: &mut FiniteGroup, x: usize, k: u64, m: u32) -> (String, LinearCharacter) {
    let name = format!("C{x}");
    let n = g.element_order(x);
    let mut log = HashMap::new();
    let mut y = g.identity();
    for i in 0..n {
        log.insert(y, i);
        y = g.mul(y, x);
    }
    g.mark_generated(&name, &[x]);
    let h = g.subgroup(&name).clone();
    let lam = LinearCharacter::new(g, &h, m, format!("λ{k}"), |z| ((m as u64 / n) * (k * log[&z] % n)) as u32).unwrap();
    (name, lam)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn frobenius_reciprocity(kind in 0usize..4, x in 1usize..480, k in 0u64..120, i in 0usize..1000, j in 0u64..4) {
        let fx = gl2();
        let chi = &fx.table[i % fx.table.len()];
        let mut g = fx.g.clone();
        let (name, lam) = match kind {
            0 => ("T".to_string(), torus_character(&g, k as i64, fx.m).unwrap()),
            1 => {
                let theta = torus_character(&g, k as i64, fx.m).unwrap();
                ("ZU".to_string(), zu_character(&g, &theta).unwrap())
            }
            2 => ("B".to_string(), borel_character(&g, k % 4, j, fx.m).unwrap()),
            _ => cyclic_character(&mut g, x, k, fx.m),
        };
        let h = g.subgroup(&name);
        let ind = induced_character(&g, h, &lam);
        prop_assert_eq!(ind.degree as usize, g.order() / h.order());
        prop_assert_eq!(ind.inner(chi, &g), lam.inner_with_restriction(&g, chi));
    }
}

#[test]
fn shapiro_agrees_with_mackey_on_gl2_inductions() {
    let fx = gl2();
    let g = &fx.g;
    for n in [4u32, 6] {
        let ring = build_local_ring(3, g.exponent(), n as i64).unwrap();
        for j in [0i64, 3, 6, 8, 12] {
            let theta = torus_character(g, j, fx.m).unwrap();
            let t = Lattice::full(Arc::new(induced_lattice(g, g.subgroup("T"), &theta, &ring).unwrap()));
            let c = shapiro_check(g, &t).unwrap();
            assert!(c.agrees, "Ind_T θ{j} at N = {n}");
            let psi = zu_character(g, &theta).unwrap();
            let zu = Lattice::full(Arc::new(induced_lattice(g, g.subgroup("ZU"), &psi, &ring).unwrap()));
            let c = shapiro_check(g, &zu).unwrap();
            assert!(c.agrees, "Ind_ZU ψ from θ{j} at N = {n}");
            assert!(c.direct.is_trivial(), "P acts freely on G/ZU");
        }
    }
}

#[test]
fn shapiro_agrees_with_mackey_on_heisenberg_inductions() {
    let g = build_heisenberg_semidirect(5, 3).unwrap();
    let m = g.exponent() as u32;
    let ring = build_local_ring(3, g.exponent(), 6).unwrap();
    for t in 1..5 {
        let chars = heisenberg_characters(&g, t, m).unwrap();
        let (src, tgt) = heisenberg_modules(&g, &chars, &ring).unwrap();
        for module in [src, tgt] {
            let c = shapiro_check(&g, &Lattice::full(module.clone())).unwrap();
            assert!(c.agrees, "{} for θ{t}", module.label);
        }
    }
}

#[test]
fn sequence_certificates_are_byte_identical() {
    let cfg = RunConfig {
        family: Family::Gl2,
        p: 3,
        l: 5,
        theta: Some(3),
        precision: None,
        seed: 0,
        out: None,
    };
    let a = canonical_json(&run_sequence(&cfg).unwrap());
    let b = canonical_json(&run_sequence(&cfg).unwrap());
    assert_eq!(a, b);
    let other = RunConfig { seed: 0xdead_beef, ..cfg };
    assert_eq!(a, canonical_json(&run_sequence(&other).unwrap()));
}
