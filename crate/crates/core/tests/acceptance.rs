//! One line per acceptance criterion. Run with `--nocapture` to see them.

use std::sync::Arc;
use std::time::{Duration, Instant};

use modular_analog::arith::linalg::RMatrix;
use modular_analog::arith::local::{build_local_ring, LocalRing};
use modular_analog::character::{
    cuspidal_character, decompose, find_in_table, full_irreducible_table, general_position_mod_p, induced_character,
    torus_character, LinearCharacter,
};
use modular_analog::group::{gl2_with_torus, FiniteGroup};
use modular_analog::lattice::{commutativity_check, endomorphisms, induced_lattice, Lattice};
use modular_analog::report::{
    canonical_json, run_blocks, run_obstructions, run_sequence, verify_certificate, Family, RunConfig, HYPOTHESIS_FAILED,
    PASS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Ledger {
    lines: Vec<(u32, bool, String)>,
}

impl Ledger {
    fn record(&mut self, n: u32, ok: bool, detail: String) {
        println!("criterion {n}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
        self.lines.push((n, ok, detail));
    }
}

fn gl2(l: u64, theta: i64) -> RunConfig {
    RunConfig {
        family: Family::Gl2,
        p: 3,
        l,
        theta: Some(theta),
        precision: None,
        seed: 0,
        out: None,
    }
}

fn text<'a>(v: &'a Value, path: &[&str]) -> &'a str {
    let mut cur = v;
    for p in path {
        cur = &cur[*p];
    }
    cur.as_str().unwrap_or("")
}

fn truth(v: &Value, path: &[&str]) -> bool {
    let mut cur = v;
    for p in path {
        cur = &cur[*p];
    }
    cur.as_bool().unwrap_or(false)
}

fn parse_elem(ring: &LocalRing, v: &Value) -> modular_analog::arith::local::RElem {
    let digits: Vec<String> = serde_json::from_value(v.clone()).unwrap();
    ring.from_strings(&digits).unwrap()
}

/// Index of the matrix with the given entries.
fn element(g: &FiniteGroup, entries: (u64, u64, u64, u64)) -> usize {
    (0..g.order()).find(|&x| g.gl2_entries(x) == entries).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn criterion_1(ledger: &mut Ledger, cert: &Value, took: Duration) {
    // θ = t³ on T of order 24, |S| = 8, Ξ = {ξ : ξ^3 = 1} so the orbit is
    // the exponents 3, 11, 19; the defect is |G|_3 / χ(1)_3 = 3.
    let g = gl2_with_torus(5, 3).unwrap();
    let m = g.exponent() as u32;
    let table = full_irreducible_table(&g, m).unwrap();
    let mut want: Vec<String> = [3i64, 11, 19]
        .iter()
        .map(|&j| {
            let c = cuspidal_character(&g, &torus_character(&g, j, m).unwrap()).unwrap().character;
            table[find_in_table(&table, &c).unwrap()].label.clone()
        })
        .collect();
    want.sort();
    let mut got: Vec<String> = cert["block"]["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    got.sort();
    let vals: Vec<i64> = cert["block"]["member_min_valuations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().parse().unwrap())
        .collect();
    let block_val: i64 = text(cert, &["block", "min_valuation"]).parse().unwrap();
    let defect = text(cert, &["block", "defect_order"]);
    let ok = got == want
        && vals.len() == 3
        && vals.iter().all(|&v| v < 0)
        && block_val >= 0
        && defect == "3"
        && took < Duration::from_secs(60)
        && text(cert, &["status"]) == PASS;
    ledger.record(
        1,
        ok,
        format!("block {got:?}, single valuations {vals:?}, block valuation {block_val}, defect {defect}, {took:.1?}"),
    );
}

fn criterion_2(ledger: &mut Ledger, cert: &Value, took: Duration) {
    let g = gl2_with_torus(5, 3).unwrap();
    let m = g.exponent() as u32;
    let ring = build_local_ring(3, g.exponent(), 6).unwrap();
    let theta = torus_character(&g, 3, m).unwrap();
    // χ(zu) = −θ(z) with z = diag(2, 2), u = [[1, 1], [0, 1]]
    let z = element(&g, (2, 0, 0, 2));
    let zu = element(&g, (2, 2, 0, 2));
    let minus_theta_z = ring.neg(&ring.root(theta.exp(z).unwrap() as u64));
    let zu_class = g.class_of(zu);
    let mut matches = 0;
    let mut degree_ok = false;
    let mut zu_ok = false;
    for row in cert["sequence"]["fingerprint"].as_array().unwrap() {
        let class: usize = text(row, &["class"]).parse().unwrap();
        let trace = parse_elem(&ring, &row["trace"]);
        let expected = parse_elem(&ring, &row["expected"]);
        if trace == expected {
            matches += 1;
        }
        if class == 0 {
            degree_ok = trace == ring.from_int(4);
        }
        if class == zu_class {
            zu_ok = trace == minus_theta_z;
        }
    }
    let ranks = (
        text(cert, &["sequence", "ranks", "kernel"]),
        text(cert, &["sequence", "ranks", "middle"]),
        text(cert, &["sequence", "ranks", "right"]),
    );
    // ℓ − 1 = 4, |Ξ|·(ℓ − 1) = 12 and the difference 8
    let ranks_ok = ranks == ("4", "12", "8");
    let hyp = truth(cert, &["hypotheses", "multiplicity_free"])
        && cert["hypotheses"]["ratios"]
            .as_array()
            .unwrap()
            .iter()
            .all(|r| !truth(r, &["nontrivial_p_power"]))
        && truth(cert, &["hypotheses", "passed"]);
    let hi = &cert["sequence"]["precision_check"];
    let hi_ok = truth(hi, &["exact"]) && truth(hi, &["fingerprint_ok"]) && text(hi, &["precision"]) == "7";
    let ok = hyp && ranks_ok && matches >= 5 && degree_ok && zu_ok && hi_ok && took < Duration::from_secs(120);
    ledger.record(
        2,
        ok,
        format!(
            "hypotheses {hyp}, ranks {ranks:?}, fingerprint {matches} classes, χ(1) {degree_ok}, χ(zu) {zu_ok}, N+1 {hi_ok}, {took:.1?}"
        ),
    );
}

fn criterion_3(ledger: &mut Ledger, cert: &Value) {
    let coh = &cert["cohomology"];
    let mut rows = Vec::new();
    for r in coh["shift"].as_array().unwrap() {
        rows.push((
            text(r, &["n"]).to_string(),
            text(r, &["kernel"]).to_string(),
            text(r, &["right_shifted"]).to_string(),
        ));
    }
    let shift = rows.len() == 3 && rows.iter().all(|(_, a, b)| a == b);
    let middle_zero = coh["middle"]["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| text(d, &["dimension"]) == "0");
    let verified = verify_certificate(cert).map(|v| v.passed()).unwrap_or(false);
    ledger.record(
        3,
        shift && middle_zero && verified,
        format!("rows (n, Ĥⁿ kernel, Ĥⁿ⁻¹ right) {rows:?}, middle trivial {middle_zero}, recheck {verified}"),
    );
}

fn criterion_4(ledger: &mut Ledger, cert: &Value) {
    let mo = &cert["block"]["morita"];
    let integral = truth(mo, &["iota_integral"]);
    let hom = truth(mo, &["homomorphism_residual_zero"]);
    let power = truth(mo, &["power_nonvanishing"]);
    ledger.record(
        4,
        integral && hom && power,
        format!("ι integral {integral}, homomorphism residual zero {hom}, ι(x−1)² ≢ 0 {power}"),
    );
}

fn criterion_5(ledger: &mut Ledger, cert: &Value) {
    // θ|_S = η_k with k = 3 mod 8, its Weyl conjugate k = 15 mod 8 = 7
    let d = &cert["block"]["decomposition"];
    let mut support: Vec<String> = d["support"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    support.sort();
    let dbar = text(d, &["dbar_theta"]);
    let ok = (dbar == "1" || dbar == "-1") && support == ["η3", "η7"] && truth(d, &["routes_agree"]);
    ledger.record(5, ok, format!("d̄_θ = {dbar}, support {support:?}"));
}

fn criterion_6(ledger: &mut Ledger) {
    let cfg = RunConfig {
        theta: None,
        ..gl2(11, 0)
    };
    let (cert, took) = timed(|| run_obstructions(&cfg).unwrap());
    let rows = cert["rows"].as_array().unwrap();
    // order-4 characters of the torus of order 120 have exponent 30 or 90
    let four: Vec<&Value> = rows.iter().filter(|r| text(r, &["order"]) == "4").collect();
    let four_ok = four.len() == 1
        && text(four[0], &["minimal_exponent"]) == "30"
        && text(four[0], &["minimal"]) == "0"
        && four[0]["twists"]
            .as_array()
            .unwrap()
            .iter()
            .all(|t| text(t, &["dimension"]) == "2");
    let all_minimal_zero = rows.iter().all(|r| text(r, &["minimal"]) == "0");
    let ok = four_ok && all_minimal_zero && !rows.is_empty() && took < Duration::from_secs(600);
    ledger.record(
        6,
        ok,
        format!("{} classes, order-4 row {four_ok}, all minimal 0 {all_minimal_zero}, {took:.1?}", rows.len()),
    );
}

fn criterion_7(ledger: &mut Ledger) {
    let cfg = RunConfig {
        family: Family::Heisenberg,
        theta: Some(1),
        ..gl2(5, 1)
    };
    let (cert, took) = timed(|| run_sequence(&cfg).unwrap());
    let ring = build_local_ring(3, 30, 6).unwrap();
    let ext = &cert["extension"];
    let dim = text(ext, &["eta_dimension"]);
    let traces: Vec<_> = ext["traces_nontrivial_a"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| parse_elem(&ring, t))
        .collect();
    let minus_one = traces.len() == 5 && traces.iter().all(|t| *t == ring.from_int(-1));
    let rk: usize = text(&cert, &["sequence", "ranks", "kernel"]).parse().unwrap_or(0);
    let rm: usize = text(&cert, &["sequence", "ranks", "middle"]).parse().unwrap_or(0);
    let rr: usize = text(&cert, &["sequence", "ranks", "right"]).parse().unwrap_or(0);
    let additive = rm == rk + rr && rk == 5;
    let hyp = truth(&cert, &["hypotheses", "passed"]);
    let exact = truth(&cert, &["sequence", "surjective"])
        && truth(&cert, &["sequence", "kernel_maps_to_zero"])
        && truth(&cert, &["sequence", "equivariance_residual_zero"]);
    let ok = dim == "5" && minus_one && additive && hyp && exact && took < Duration::from_secs(300);
    ledger.record(
        7,
        ok,
        format!("dim η {dim}, five traces −1 {minus_one}, ranks ({rk}, {rm}, {rr}), hypotheses {hyp}, {took:.1?}"),
    );
}

/// Row span over `Z/9` by enumeration, with entries as residues.
fn span_z9(m: &RMatrix) -> std::collections::BTreeSet<(u64, u64)> {
    let rows: Vec<(u64, u64)> = (0..m.rows()).map(|i| (m.get(i, 0).0[0], m.get(i, 1).0[0])).collect();
    let mut out = std::collections::BTreeSet::new();
    for code in 0..9u64.pow(rows.len() as u32) {
        let (mut c, mut v) = (code, (0u64, 0u64));
        for r in &rows {
            let a = c % 9;
            c /= 9;
            v = ((v.0 + a * r.0) % 9, (v.1 + a * r.1) % 9);
        }
        out.insert(v);
    }
    out
}

fn criterion_8(ledger: &mut Ledger, seq: &Value) {
    // Frobenius reciprocity on random (subgroup, linear character, irreducible)
    let g = gl2_with_torus(5, 3).unwrap();
    let m = g.exponent() as u32;
    let table = full_irreducible_table(&g, m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut frob = 0;
    for _ in 0..100 {
        let j = rng.gen_range(0..24);
        let theta = torus_character(&g, j, m).unwrap();
        let (h, lam) = if rng.gen_bool(0.5) {
            (g.subgroup("T"), theta)
        } else {
            (g.subgroup("ZU"), modular_analog::character::zu_character(&g, &theta).unwrap())
        };
        let chi = &table[rng.gen_range(0..table.len())];
        if induced_character(&g, h, &lam).inner(chi, &g) == lam.inner_with_restriction(&g, chi) {
            frob += 1;
        }
    }
    // Howell form on all 2×2 matrices over Z/9
    let z9 = build_local_ring(3, 1, 2).unwrap();
    let mut howell = 0;
    for code in 0..6561i64 {
        let a = RMatrix::from_ints(&z9, 2, 2, &[code % 9, code / 9 % 9, code / 81 % 9, code / 729]);
        let h = a.howell().h;
        if h.howell().h == h && span_z9(&h) == span_z9(&a) {
            howell += 1;
        }
    }
    // Shapiro against Mackey on each restriction computed by the sequence run
    let sh = &seq["cohomology"]["shapiro"];
    let shapiro = truth(sh, &["right_ambient"]) && truth(sh, &["middle_ambient"]);
    // determinism, including a different seed
    let a = canonical_json(&run_sequence(&gl2(5, 3)).unwrap());
    let b = canonical_json(&run_sequence(&gl2(5, 3)).unwrap());
    let c = canonical_json(&run_sequence(&RunConfig { seed: 99, ..gl2(5, 3) }).unwrap());
    let det = a == b && a == c && a == canonical_json(seq);
    let ok = frob == 100 && howell == 6561 && shapiro && det;
    ledger.record(
        8,
        ok,
        format!("Frobenius {frob}/100, Howell {howell}/6561, Shapiro {shapiro}, byte-identical {det}"),
    );
}

fn criterion_9(ledger: &mut Ledger) {
    let g = gl2_with_torus(5, 3).unwrap();
    let m = g.exponent() as u32;
    let ring = build_local_ring(3, g.exponent(), 6).unwrap();
    // θ = t²: θ^ℓ/θ = t⁸ has order 3, so θ̄ is Weyl-fixed
    let theta2 = torus_character(&g, 2, m).unwrap();
    let rejected = !general_position_mod_p(&g, &theta2, &ring).unwrap().holds();
    let status = run_sequence(&gl2(5, 2)).map(|c| text(&c, &["status"]).to_string()).unwrap_or_default();
    // Ind_{ZU} 1 is the degenerate Gelfand–Graev module: each principal
    // series has a 2-dimensional space of U-invariants, so it occurs twice
    let zu = g.subgroup("ZU");
    let one = LinearCharacter::trivial(zu, m);
    let table = full_irreducible_table(&g, m).unwrap();
    let ind = induced_character(&g, zu, &one);
    let (mults, exact) = decompose(&g, &table, &ind).unwrap();
    let repeated = exact && mults.iter().any(|&k| k >= 2);
    let module = Arc::new(induced_lattice(&g, zu, &one, &ring).unwrap());
    let ends = endomorphisms(&g, &Lattice::full(module)).unwrap();
    let witness = commutativity_check(&ends);
    let sum_sq: i64 = mults.iter().map(|k| k * k).sum();
    let ok = rejected && status == HYPOTHESIS_FAILED && repeated && witness.is_some() && ends.len() as i64 == sum_sq;
    ledger.record(
        9,
        ok,
        format!(
            "θ̄ Weyl-fixed rejected {rejected} (status {status}), max multiplicity {}, End rank {} = Σ m² {sum_sq}, witness {witness:?}",
            mults.iter().max().unwrap(),
            ends.len()
        ),
    );
}

// Runs without the libtest harness so the criterion lines are never captured.
fn main() {
    let mut ledger = Ledger { lines: Vec::new() };
    let (blocks, t_blocks) = timed(|| run_blocks(&gl2(5, 3)).unwrap());
    let (seq, t_seq) = timed(|| run_sequence(&gl2(5, 3)).unwrap());
    criterion_1(&mut ledger, &blocks, t_blocks);
    criterion_2(&mut ledger, &seq, t_seq);
    criterion_3(&mut ledger, &seq);
    criterion_4(&mut ledger, &blocks);
    criterion_5(&mut ledger, &blocks);
    criterion_6(&mut ledger);
    criterion_7(&mut ledger);
    criterion_8(&mut ledger, &seq);
    criterion_9(&mut ledger);
    let failed: Vec<u32> = ledger.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
