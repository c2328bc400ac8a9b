//! Run configuration, the pipelines behind each command, canonical JSON
//! certificates and their independent re-verification.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::arith::cyclotomic::CyclotomicRecord;
use crate::arith::linalg::RMatrix;
use crate::arith::local::{build_local_ring, LocalRing, RElem};
use crate::arith::numtheory::{gcd, is_prime};
use crate::block::{
    block_partition, central_character_profile, central_product, centralizer, default_precision,
    generalized_decomposition_numbers, idempotents_sum_to_one, morita_iota, nilpotency_certificate_gl2,
    profile_is_indicator, brauer_multiplicative_spot_check, CentralElement,
};
use crate::character::{
    cuspidal_character, find_in_table, full_irreducible_table, general_position_mod_p, in_general_position,
    induced_character,
    torus_character, zu_character, ClassFunction,
};
use crate::cohomology::{
    mackey_restriction, minimal_lift_report, restrict_to_p, shapiro_check, tate_cohomology_pair,
    CohomologyReport, DimensionShift, MackeyPiece,
};
use crate::error::{Error, Result};
use crate::group::{build_heisenberg_semidirect, gl2_with_torus, FiniteGroup};
use crate::lattice::{
    apply_idempotent, certify_sequence, commutativity_check, endomorphisms, equivariance_residual_zero,
    expected_cut_rank, find_surjection, hom_from_induced, hypothesis_check, induced_lattice, HypothesisCheck,
    Lattice, MonomialModule, SequenceData, Surjection,
};
use crate::pnilpotent::{eta_one, heisenberg_block, heisenberg_characters, heisenberg_modules, unique_eta};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gl2,
    Heisenberg,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Gl2 => "gl2",
            Family::Heisenberg => "heisenberg",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Blocks,
    Sequence,
    Obstructions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: Family,
    pub p: u64,
    pub l: u64,
    #[serde(default)]
    pub theta: Option<i64>,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
}

const MAX_L: u64 = 11;
const MAX_PRECISION: u32 = 64;

impl RunConfig {
    pub fn validate(&self, cmd: Command) -> Result<()> {
        let (p, l) = (self.p, self.l);
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} is not prime")));
        }
        if !is_prime(l) || l == 2 {
            return Err(Error::InvalidInput(format!("ℓ = {l} is not an odd prime")));
        }
        if p == l {
            return Err(Error::InvalidInput("p must differ from ℓ".into()));
        }
        if l > MAX_L {
            return Err(Error::InvalidInput(format!("ℓ = {l} exceeds the enumeration limit {MAX_L}")));
        }
        if (l + 1) % p != 0 {
            return Err(Error::InvalidInput(format!("ℓ = {l} is not ≡ −1 mod p = {p}")));
        }
        if let Some(n) = self.precision {
            if !(2..=MAX_PRECISION).contains(&n) {
                return Err(Error::InvalidInput(format!("precision {n} outside 2..={MAX_PRECISION}")));
            }
        }
        if cmd == Command::Obstructions {
            if self.family != Family::Gl2 {
                return Err(Error::InvalidInput("obstructions are defined for the gl2 family".into()));
            }
            return Ok(());
        }
        let theta = self
            .theta
            .ok_or_else(|| Error::InvalidInput("--theta is required".into()))?;
        match self.family {
            Family::Gl2 => {
                let q = (l * l - 1) as i64;
                if !(0..q).contains(&theta) {
                    return Err(Error::InvalidInput(format!("θ exponent {theta} outside 0..{q}")));
                }
                if (theta * l as i64 - theta).rem_euclid(q) == 0 {
                    return Err(Error::InvalidInput(format!(
                        "θ{theta} is Weyl-fixed over K; there is no cuspidal π_θ"
                    )));
                }
            }
            Family::Heisenberg => {
                if !(1..l as i64).contains(&theta) {
                    return Err(Error::InvalidInput(format!(
                        "θ exponent {theta} must be a faithful character of Z (1..{l})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn echo(&self, precision: u32) -> Value {
        let mut m = Map::new();
        m.insert("family".into(), json!(self.family.as_str()));
        m.insert("p".into(), s(self.p));
        m.insert("l".into(), s(self.l));
        if let Some(t) = self.theta {
            m.insert("theta".into(), s(t));
        }
        m.insert("precision".into(), s(precision));
        Value::Object(m)
    }
}

pub const PASS: &str = "PASS";
pub const HYPOTHESIS_FAILED: &str = "HYPOTHESIS_FAILED";
pub const FINDING: &str = "FINDING";

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn elem(ring: &LocalRing, x: &RElem) -> Value {
    json!(ring.to_strings(x))
}

fn elems(ring: &LocalRing, xs: &[RElem]) -> Value {
    Value::Array(xs.iter().map(|x| elem(ring, x)).collect())
}

fn matrix(m: &RMatrix) -> Value {
    json!({"rows": s(m.rows()), "cols": s(m.cols()), "entries": m.to_strings()})
}

fn opt_i64(v: Option<i64>) -> Value {
    v.map_or(Value::Null, s)
}

fn group_json(g: &FiniteGroup) -> Value {
    json!({
        "label": g.label,
        "order": s(g.order()),
        "classes": s(g.num_classes()),
        "exponent": s(g.exponent()),
    })
}

fn ring_json(r: &LocalRing) -> Value {
    json!({
        "p": s(r.p()),
        "conductor": s(r.conductor()),
        "e": s(r.e()),
        "d": s(r.d()),
        "precision": s(r.precision()),
        "residue_field_size": s(r.residue_field_size()),
        "residue_polynomial": r.residue_polynomial().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

fn cohomology_json(r: &CohomologyReport) -> Value {
    json!({
        "module": r.module,
        "degrees": r.degrees.iter().map(|(n, t)| json!({
            "degree": s(n), "dimension": s(t.dimension), "length": s(t.length)
        })).collect::<Vec<_>>(),
        "norm_rank": s(r.norm_rank),
        "augmentation_rank": s(r.augmentation_rank),
        "periodic": r.periodic(),
    })
}

fn hypothesis_json(h: &HypothesisCheck) -> Value {
    json!({
        "inner_product": s(h.inner_product),
        "constituents": s(h.constituents),
        "multiplicity_sum": s(h.multiplicity_sum),
        "multiplicity_free": h.multiplicity_free,
        "ratios": h.ratios.iter().map(|r| json!({
            "representative": s(r.representative),
            "intersection_order": s(r.intersection_order),
            "ratio_order": s(r.ratio_order),
            "nontrivial_p_power": r.nontrivial_p_power,
        })).collect::<Vec<_>>(),
        "offending": h.offending.map_or(Value::Null, s),
        "passed": h.passed,
    })
}

/// Resolved working context for a config.
pub struct Context {
    pub group: FiniteGroup,
    pub ring: LocalRing,
    pub precision: u32,
}

pub fn context(cfg: &RunConfig) -> Result<Context> {
    let group = match cfg.family {
        Family::Gl2 => gl2_with_torus(cfg.l, cfg.p)?,
        Family::Heisenberg => build_heisenberg_semidirect(cfg.l, cfg.p)?,
    };
    let m = group.exponent();
    let probe = build_local_ring(cfg.p, m, 2)?;
    let precision = cfg
        .precision
        .unwrap_or_else(|| default_precision(group.order() as u64, cfg.p, probe.e()));
    if precision > MAX_PRECISION {
        return Err(Error::InvalidInput(format!(
            "working precision {precision} exceeds {MAX_PRECISION}"
        )));
    }
    let ring = build_local_ring(cfg.p, m, precision as i64)?;
    Ok(Context { group, ring, precision })
}

/// Exponents `j + k·|S|` of the torus characters `θξ`, `ξ ∈ Ξ`.
pub fn orbit_exponents(g: &FiniteGroup, j: i64) -> Vec<i64> {
    let td = g.torus.as_ref().expect("torus");
    let q = td.powers.len() as i64;
    let s_ord = g.subgroup("S").order() as i64;
    let pa = q / s_ord;
    (0..pa).map(|k| (j + k * s_ord).rem_euclid(q)).collect()
}

struct Gl2Block {
    table: Vec<ClassFunction>,
    orbit: Vec<i64>,
    members: Vec<ClassFunction>,
    idempotent: CentralElement,
}

/// `{π_θξ}` over the `θξ` in general position over `K`; that is all of them
/// when `θ̄` is, and at least `θ` itself since validation requires it.
fn gl2_orbit_block(g: &FiniteGroup, j: i64, m: u32) -> Result<Gl2Block> {
    let orbit = orbit_exponents(g, j);
    let mut members = Vec::with_capacity(orbit.len());
    for &e in &orbit {
        let t = torus_character(g, e, m)?;
        if in_general_position(g, &t) {
            members.push(cuspidal_character(g, &t)?.character);
        }
    }
    let mut idempotent = CentralElement::idempotent(g, &members[0]);
    for c in &members[1..] {
        idempotent = idempotent.add(&CentralElement::idempotent(g, c));
    }
    Ok(Gl2Block {
        table: Vec::new(),
        orbit,
        members,
        idempotent,
    })
}

/// `blocks` for the `gl2` family.
pub fn run_blocks(cfg: &RunConfig) -> Result<Value> {
    cfg.validate(Command::Blocks)?;
    match cfg.family {
        Family::Gl2 => blocks_gl2(cfg),
        Family::Heisenberg => blocks_heisenberg(cfg),
    }
}

fn blocks_gl2(cfg: &RunConfig) -> Result<Value> {
    let ctx = context(cfg)?;
    let (g, ring) = (&ctx.group, &ctx.ring);
    let m = g.exponent() as u32;
    let j = cfg.theta.expect("validated");
    let theta = torus_character(g, j, m)?;
    let gp = general_position_mod_p(g, &theta, ring)?;
    let mut ob = gl2_orbit_block(g, j, m)?;
    ob.table = full_irreducible_table(g, m)?;
    let table = &ob.table;
    let blocks = block_partition(g, table, ring)?;
    let sum_to_one = idempotents_sum_to_one(g, table);
    let profiles_ok = blocks
        .iter()
        .all(|b| profile_is_indicator(&central_character_profile(g, table, b), &b.members));
    let cusp_index = find_in_table(table, &ob.members[0])
        .ok_or_else(|| Error::Internal("π_θ missing from the character table".into()))?;
    let mut orbit_indices: Vec<usize> = ob
        .members
        .iter()
        .map(|c| find_in_table(table, c).ok_or_else(|| Error::Internal("π_θξ missing from the table".into())))
        .collect::<Result<_>>()?;
    orbit_indices.sort_unstable();
    let block = blocks
        .iter()
        .find(|b| b.members.contains(&cusp_index))
        .expect("partition covers the table");
    let block_is_orbit = block.members == orbit_indices;
    let member_valuations: Vec<Option<i64>> = ob
        .members
        .iter()
        .map(|c| CentralElement::idempotent(g, c).min_valuation(ring))
        .collect();
    let members_non_integral = member_valuations.iter().all(|v| v.map_or(false, |v| v < 0));
    let mut out = Map::new();
    out.insert("certificate".into(), json!("blocks"));
    out.insert("tool".into(), json!({"name": "modan", "version": TOOL_VERSION}));
    out.insert("config".into(), cfg.echo(ctx.precision));
    out.insert("group".into(), group_json(g));
    out.insert("ring".into(), ring_json(ring));
    out.insert(
        "partition".into(),
        json!({
            "blocks": s(blocks.len()),
            "sizes": blocks.iter().map(|b| s(b.members.len())).collect::<Vec<_>>(),
            "defect_orders": blocks.iter().map(|b| s(b.defect_order)).collect::<Vec<_>>(),
            "members": blocks.iter().map(|b| b.members.iter().map(|&i| table[i].label.clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "idempotents_sum_to_one": sum_to_one,
            "central_character_profiles_ok": profiles_ok,
        }),
    );
    let gp_json = json!({
        "residues_differ": gp.residues_differ,
        "ratio_order": s(gp.ratio_order),
        "ratio_not_p_power": gp.ratio_not_p_power,
        "holds": gp.holds(),
    });
    let mut bj = Map::new();
    bj.insert("theta".into(), s(j));
    bj.insert("orbit_exponents".into(), json!(ob.orbit.iter().map(s).collect::<Vec<_>>()));
    bj.insert("members".into(), json!(block.members.iter().map(|&i| table[i].label.clone()).collect::<Vec<_>>()));
    bj.insert("size".into(), s(block.members.len()));
    bj.insert("block_is_orbit".into(), json!(block_is_orbit));
    bj.insert("member_min_valuations".into(), json!(member_valuations.iter().map(|&v| opt_i64(v)).collect::<Vec<_>>()));
    bj.insert("members_non_integral".into(), json!(members_non_integral));
    bj.insert("min_valuation".into(), opt_i64(block.min_valuation));
    bj.insert("integral".into(), json!(block.min_valuation.map_or(true, |v| v >= 0)));
    bj.insert("minimal".into(), block.minimal.map_or(Value::Null, Value::Bool));
    bj.insert("defect_order".into(), s(block.defect_order));
    bj.insert("general_position_mod_p".into(), gp_json);
    let mut status = PASS;
    if !gp.holds() {
        status = HYPOTHESIS_FAILED;
        bj.insert("idempotent".into(), elems(ring, &block.idempotent.reduce(ring)?));
    } else {
        let e_red = ob.idempotent.reduce(ring)?;
        bj.insert("idempotent".into(), elems(ring, &e_red));
        let cert = nilpotency_certificate_gl2(g, &ob.idempotent, &theta, ring)?;
        let residue = ring.residue_ring();
        let sc = g.structure_constants();
        let cg = centralizer(g, &g.subgroup("P").generators);
        let c = g.num_classes();
        let pairs: Vec<(usize, usize)> = (1..c.min(6)).map(|k| (k, (k * 7 + 3) % c)).collect();
        let brauer_mult = brauer_multiplicative_spot_check(g, &sc, &residue, &cg, &pairs);
        bj.insert(
            "nilpotency".into(),
            json!({
                "centralizer_order": s(cg.len()),
                "brauer_image_nonzero": cert.brauer_image_nonzero,
                "brauer_pair_identity": cert.brauer_pair_identity,
                "weyl_fixes_residue": cert.weyl_fixes_residue,
                "brauer_multiplicative_spot_check": brauer_mult,
                "f": cert.f_description,
                "passed": cert.passed && brauer_mult,
            }),
        );
        let cusp = cuspidal_character(g, &theta)?;
        let x = g.subgroup("P").generators[0];
        let d = generalized_decomposition_numbers(g, &cusp, x, ring)?;
        let mut orbit = vec![d.theta_index, d.theta_w_index];
        orbit.sort_unstable();
        orbit.dedup();
        let support_is_orbit = d.support == orbit;
        bj.insert(
            "decomposition".into(),
            json!({
                "x": s(x),
                "exact": d.exact.iter().map(|z| serde_json::to_value(CyclotomicRecord::from(z)).expect("record")).collect::<Vec<_>>(),
                "solved": elems(ring, &d.solved),
                "routes_agree": d.routes_agree,
                "support": d.support.iter().map(|&i| d.etas[i].label.clone()).collect::<Vec<_>>(),
                "support_is_weyl_orbit": support_is_orbit,
                "dbar_theta": d.dbar_theta.map_or(Value::Null, s),
                "sum_identity": d.sum_identity,
            }),
        );
        let xis = ob
            .orbit
            .iter()
            .map(|&e| torus_character(g, e - j, m))
            .collect::<Result<Vec<_>>>()?;
        let mr = morita_iota(g, &ob.members, &xis, ring, &sc)?;
        bj.insert(
            "morita".into(),
            json!({
                "iota_integral": mr.iota_integral,
                "iota_min_valuations": mr.iota_min_valuation.iter().map(|&v| opt_i64(v)).collect::<Vec<_>>(),
                "iota_one_is_block_idempotent": mr.iota_one_is_block_idempotent,
                "homomorphism_residual_zero": mr.homomorphism_residual_zero,
                "order_relation": mr.order_relation,
                "power_nonvanishing": mr.power_nonvanishing,
            }),
        );
        let ok = block_is_orbit
            && members_non_integral
            && block.min_valuation.map_or(false, |v| v >= 0)
            && cert.passed
            && brauer_mult
            && d.routes_agree
            && matches!(d.dbar_theta, Some(1) | Some(-1))
            && support_is_orbit
            && d.sum_identity
            && mr.iota_integral
            && mr.homomorphism_residual_zero
            && mr.power_nonvanishing
            && mr.order_relation
            && sum_to_one
            && profiles_ok;
        if !ok {
            status = FINDING;
        }
    }
    out.insert("block".into(), Value::Object(bj));
    out.insert("status".into(), json!(status));
    Ok(Value::Object(out))
}

fn blocks_heisenberg(cfg: &RunConfig) -> Result<Value> {
    let ctx = context(cfg)?;
    let (g, ring) = (&ctx.group, &ctx.ring);
    let m = g.exponent() as u32;
    let t = cfg.theta.expect("validated") as u64;
    let chars = heisenberg_characters(g, t, m)?;
    let hb = heisenberg_block(g, &chars, ring, cfg.p)?;
    let member_valuations: Vec<Option<i64>> = hb
        .block
        .members
        .iter()
        .map(|&i| CentralElement::idempotent(g, &chars.twists[i]).min_valuation(ring))
        .collect();
    let members_non_integral = member_valuations.iter().all(|v| v.map_or(false, |v| v < 0));
    let integral = hb.block.min_valuation.map_or(true, |v| v >= 0);
    let ok = integral
        && hb.block.minimal == Some(true)
        && hb.linkage_agrees
        && hb.linkage_separates
        && hb.p_nilpotent
        && members_non_integral;
    Ok(json!({
        "certificate": "blocks",
        "tool": {"name": "modan", "version": TOOL_VERSION},
        "config": cfg.echo(ctx.precision),
        "group": group_json(g),
        "ring": ring_json(ring),
        "block": {
            "theta": s(t),
            "members": hb.block.members.iter().map(|&i| chars.twists[i].label.clone()).collect::<Vec<_>>(),
            "size": s(hb.block.members.len()),
            "member_min_valuations": member_valuations.iter().map(|&v| opt_i64(v)).collect::<Vec<_>>(),
            "members_non_integral": members_non_integral,
            "min_valuation": opt_i64(hb.block.min_valuation),
            "integral": integral,
            "minimal": hb.block.minimal.map_or(Value::Null, Value::Bool),
            "defect_order": s(hb.block.defect_order),
            "linkage_agrees": hb.linkage_agrees,
            "linkage_separates": hb.linkage_separates,
            "idempotent": elems(ring, &hb.block.idempotent.reduce(ring)?),
            "nilpotency": {"p_nilpotent_structure": hb.p_nilpotent, "passed": hb.p_nilpotent},
        },
        "status": if ok { PASS } else { FINDING },
    }))
}

/// One precision's worth of sequence data.
struct SequenceRun {
    idempotent: Vec<RElem>,
    source: Lattice,
    target: Lattice,
    hom_free_rank: usize,
    hom_torsion: usize,
    surjection: Option<Surjection>,
    data: Option<SequenceData>,
    cut_checks: bool,
}

fn sequence_run(
    g: &FiniteGroup,
    ring: &LocalRing,
    e: &CentralElement,
    src: Arc<MonomialModule>,
    tgt: Arc<MonomialModule>,
    expected: &ClassFunction,
    seed: u64,
) -> Result<SequenceRun> {
    let coeffs = e.reduce(ring)?;
    let s_cut = apply_idempotent(g, src.clone(), &coeffs, &format!("e·{}", src.label))?;
    let t_cut = apply_idempotent(g, tgt.clone(), &coeffs, &format!("e·{}", tgt.label))?;
    let cut_checks =
        s_cut.idempotent_residual_zero && s_cut.identity_on_cut && t_cut.idempotent_residual_zero && t_cut.identity_on_cut;
    let source = s_cut.lattice;
    let target = t_cut.lattice;
    let hom = hom_from_induced(g, &source.module, &target)?;
    let surjection = find_surjection(g, &source, &target, &hom, seed, 0)?;
    let data = match &surjection {
        Some(sj) => Some(certify_sequence(g, &source, &target, sj, &expected.reduce(ring))?),
        None => None,
    };
    Ok(SequenceRun {
        idempotent: coeffs,
        source,
        target,
        hom_free_rank: hom.free_rank,
        hom_torsion: hom.torsion,
        surjection,
        data,
        cut_checks,
    })
}

fn rebuild_module(g: &FiniteGroup, m: &MonomialModule, ring: &LocalRing) -> Result<Arc<MonomialModule>> {
    Ok(Arc::new(induced_lattice(g, g.subgroup(&m.subgroup), &m.lambda, ring)?))
}

/// Common tail of both `sequence` pipelines.
#[allow(clippy::too_many_arguments)]
fn sequence_section(
    g: &FiniteGroup,
    ctx: &Context,
    e: &CentralElement,
    src: Arc<MonomialModule>,
    tgt: Arc<MonomialModule>,
    expected: &ClassFunction,
    block_members: &[ClassFunction],
    seed: u64,
) -> Result<(Value, Value, bool)> {
    let ring = &ctx.ring;
    let run = sequence_run(g, ring, e, src.clone(), tgt.clone(), expected, seed)?;
    let hi_ring = ring.with_precision(ctx.precision + 1);
    let run_hi = sequence_run(
        g,
        &hi_ring,
        e,
        rebuild_module(g, &src, &hi_ring)?,
        rebuild_module(g, &tgt, &hi_ring)?,
        expected,
        seed,
    )?;
    let exp_mid = expected_cut_rank(g, block_members, &src.character(g))?;
    let exp_right = expected_cut_rank(g, block_members, &tgt.character(g))?;
    let mut seq = Map::new();
    seq.insert("idempotent".into(), elems(ring, &run.idempotent));
    seq.insert("cut_projector_checks".into(), json!(run.cut_checks));
    seq.insert(
        "expected_ranks".into(),
        json!({"middle": s(exp_mid), "right": s(exp_right), "kernel": s(expected.degree)}),
    );
    seq.insert("middle_module".into(), json!(src.label));
    seq.insert("right_module".into(), json!(tgt.label));
    seq.insert("middle_basis".into(), matrix(&run.source.basis));
    seq.insert("right_basis".into(), matrix(&run.target.basis));
    seq.insert("hom_free_rank".into(), s(run.hom_free_rank));
    seq.insert("hom_torsion".into(), s(run.hom_torsion));
    let ends = endomorphisms(g, &run.target)?;
    let witness = commutativity_check(&ends);
    seq.insert(
        "right_endomorphisms".into(),
        json!({"rank": s(ends.len()), "commutative": witness.is_none()}),
    );
    let (Some(sj), Some(data)) = (&run.surjection, &run.data) else {
        seq.insert("surjection".into(), Value::Null);
        return Ok((Value::Object(seq), Value::Null, false));
    };
    seq.insert(
        "surjection".into(),
        json!({
            "coefficients": sj.coefficients.iter().map(s).collect::<Vec<_>>(),
            "method": sj.method,
            "attempts": s(sj.attempts),
            "matrix": matrix(&sj.matrix),
        }),
    );
    if sj.method.starts_with("random") {
        seq.insert("seed_used".into(), s(seed));
    }
    seq.insert(
        "ranks".into(),
        json!({"kernel": s(data.ranks.0), "middle": s(data.ranks.1), "right": s(data.ranks.2)}),
    );
    seq.insert("kernel_basis".into(), matrix(&data.kernel.basis));
    seq.insert("kernel_free".into(), json!(data.kernel_free));
    seq.insert("equivariance_residual_zero".into(), json!(data.equivariance_residual_zero));
    seq.insert("kernel_maps_to_zero".into(), json!(data.kernel_maps_to_zero));
    seq.insert("surjective".into(), json!(data.surjective));
    seq.insert(
        "fingerprint".into(),
        Value::Array(
            data.fingerprint
                .iter()
                .map(|(k, a, b)| {
                    json!({"class": s(k), "representative": s(g.class_rep(*k)), "trace": elem(ring, a), "expected": elem(ring, b), "match": a == b})
                })
                .collect(),
        ),
    );
    seq.insert("fingerprint_matches".into(), s(data.fingerprint_matches));
    // second precision
    let hi_ok = match &run_hi.data {
        Some(dh) => {
            let agrees = dh.kernel.basis.to_ring(ring) == data.kernel.basis;
            seq.insert(
                "precision_check".into(),
                json!({
                    "precision": s(hi_ring.precision()),
                    "ranks": {"kernel": s(dh.ranks.0), "middle": s(dh.ranks.1), "right": s(dh.ranks.2)},
                    "exact": dh.exact(),
                    "fingerprint_ok": dh.fingerprint_ok(),
                    "kernel_reduces_to_kernel": agrees,
                    "hom_free_rank": s(run_hi.hom_free_rank),
                }),
            );
            dh.exact() && dh.fingerprint_ok() && dh.ranks == data.ranks && run_hi.cut_checks
        }
        None => {
            seq.insert("precision_check".into(), json!({"precision": s(hi_ring.precision()), "surjection": Value::Null}));
            false
        }
    };
    // a second surjection, for independence of the kernel from the search
    let hom = hom_from_induced(g, &run.source.module, &run.target)?;
    let second = find_surjection(g, &run.source, &run.target, &hom, seed.wrapping_add(1), 1)?;
    let second_ok = match &second {
        Some(s2) => {
            let d2 = certify_sequence(g, &run.source, &run.target, s2, &expected.reduce(ring))?;
            let agree = d2.fingerprint.iter().zip(&data.fingerprint).all(|(a, b)| a.1 == b.1);
            seq.insert(
                "second_surjection".into(),
                json!({"coefficients": s2.coefficients.iter().map(s).collect::<Vec<_>>(), "method": s2.method, "fingerprint_agrees": agree}),
            );
            agree
        }
        None => {
            seq.insert("second_surjection".into(), Value::Null);
            true
        }
    };
    // cohomology of the three terms restricted to P, at N and N + 1
    let (dh_k, dh_m, dh_r) = match &run_hi.data {
        Some(dh) => (dh.kernel.clone(), run_hi.source.clone(), run_hi.target.clone()),
        None => (data.kernel.clone(), run.source.clone(), run.target.clone()),
    };
    let hk = tate_cohomology_pair(&restrict_to_p(g, &data.kernel)?, &restrict_to_p(g, &dh_k)?)?;
    let hm = tate_cohomology_pair(&restrict_to_p(g, &run.source)?, &restrict_to_p(g, &dh_m)?)?;
    let hr = tate_cohomology_pair(&restrict_to_p(g, &run.target)?, &restrict_to_p(g, &dh_r)?)?;
    let rows: Vec<(i32, usize, usize)> = (0..=2).map(|n| (n, hk.dimension(n), hr.dimension(n - 1))).collect();
    let shift = DimensionShift {
        middle_trivial: hm.is_trivial(),
        shift_holds: rows.iter().all(|&(_, a, b)| a == b),
        periodic: hk.periodic() && hm.periodic() && hr.periodic(),
        kernel: hk,
        middle: hm,
        right: hr,
        rows,
    };
    let ambient_t = Lattice::full(tgt.clone());
    let ambient_s = Lattice::full(src.clone());
    let sh_t = shapiro_check(g, &ambient_t)?;
    let sh_s = shapiro_check(g, &ambient_s)?;
    let pieces = mackey_restriction(g, &tgt)?;
    let non_projective: Vec<Value> = pieces
        .iter()
        .filter_map(|p| match p {
            MackeyPiece::Character { representative, exponent, order, intersection } => Some(json!({
                "representative": s(representative),
                "exponent": s(exponent),
                "order": s(order),
                "intersection_order": s(intersection),
            })),
            _ => None,
        })
        .collect();
    let projective = pieces.iter().filter(|p| matches!(p, MackeyPiece::Projective { .. })).count();
    let coh = json!({
        "subgroup": "P",
        "kernel": cohomology_json(&shift.kernel),
        "middle": cohomology_json(&shift.middle),
        "right": cohomology_json(&shift.right),
        "shift": shift.rows.iter().map(|&(n, a, b)| json!({"n": s(n), "kernel": s(a), "right_shifted": s(b), "equal": a == b})).collect::<Vec<_>>(),
        "middle_trivial": shift.middle_trivial,
        "shift_holds": shift.shift_holds,
        "periodic": shift.periodic,
        "mackey_right_ambient": {"non_projective": non_projective, "projective_pieces": s(projective)},
        "shapiro": {
            "right_ambient": sh_t.agrees,
            "middle_ambient": sh_s.agrees,
            "middle_ambient_trivial": sh_s.direct.is_trivial(),
        },
    });
    let ok = data.exact()
        && data.fingerprint_ok()
        && hi_ok
        && second_ok
        && run.cut_checks
        && data.ranks.1 as i64 == exp_mid
        && data.ranks.2 as i64 == exp_right
        && data.ranks.0 as i64 == expected.degree
        && shift.passed()
        && sh_t.agrees
        && sh_s.agrees
        && sh_s.direct.is_trivial();
    Ok((Value::Object(seq), coh, ok))
}

/// `sequence`.
pub fn run_sequence(cfg: &RunConfig) -> Result<Value> {
    cfg.validate(Command::Sequence)?;
    let ctx = context(cfg)?;
    let g = &ctx.group;
    let ring = &ctx.ring;
    let m = g.exponent() as u32;
    let mut out = Map::new();
    out.insert("certificate".into(), json!("sequence"));
    out.insert("tool".into(), json!({"name": "modan", "version": TOOL_VERSION}));
    out.insert("config".into(), cfg.echo(ctx.precision));
    out.insert("group".into(), group_json(g));
    out.insert("ring".into(), ring_json(ring));
    let status = match cfg.family {
        Family::Gl2 => {
            let j = cfg.theta.expect("validated");
            let theta = torus_character(g, j, m)?;
            let gp = general_position_mod_p(g, &theta, ring)?;
            let table = full_irreducible_table(g, m)?;
            let hc = hypothesis_check(g, g.subgroup("T"), &theta, &table, cfg.p)?;
            let projective = gcd(g.subgroup("ZU").order() as u64, cfg.p) == 1;
            let all = hc.passed && gp.holds() && projective;
            let mut hyp = hypothesis_json(&hc);
            hyp["general_position_mod_p"] = json!({
                "residues_differ": gp.residues_differ,
                "ratio_order": s(gp.ratio_order),
                "holds": gp.holds(),
            });
            hyp["middle_subgroup_prime_to_p"] = json!(projective);
            hyp["passed"] = json!(all);
            out.insert("hypotheses".into(), hyp);
            if !all {
                HYPOTHESIS_FAILED
            } else {
                let ob = gl2_orbit_block(g, j, m)?;
                let cert = nilpotency_certificate_gl2(g, &ob.idempotent, &theta, ring)?;
                out.insert("nilpotency".into(), json!({"passed": cert.passed}));
                let cusp = cuspidal_character(g, &theta)?;
                let psi = zu_character(g, &theta)?;
                let src = Arc::new(induced_lattice(g, g.subgroup("ZU"), &psi, ring)?);
                let tgt = Arc::new(induced_lattice(g, g.subgroup("T"), &theta, ring)?);
                let want = induced_character(g, g.subgroup("ZU"), &psi);
                let char_ok = src.character(g).values == want.values;
                let (seq, coh, ok) =
                    sequence_section(g, &ctx, &ob.idempotent, src, tgt, &cusp.character, &ob.members, cfg.seed)?;
                out.insert("sequence".into(), seq);
                out.insert("cohomology".into(), coh);
                if ok && cert.passed && char_ok {
                    PASS
                } else {
                    FINDING
                }
            }
        }
        Family::Heisenberg => {
            let t = cfg.theta.expect("validated") as u64;
            let eta = unique_eta(g, t, ring)?;
            let ext = eta_one(g, &eta)?;
            let chars = heisenberg_characters(g, t, m)?;
            let expected = chars.eta1.reduce(ring);
            let matrix_char_ok =
                (0..g.num_classes()).all(|k| ext.matrix(g, &eta, g.class_rep(k)).trace() == expected[k]);
            out.insert(
                "extension".into(),
                json!({
                    "eta_dimension": s(eta.dimension),
                    "eta_norm": s(eta.norm),
                    "eta_central_character": eta.central_character_ok,
                    "a_order": s(ext.traces.len() + 1),
                    "traces_nontrivial_a": elems(ring, &ext.traces),
                    "all_traces_minus_one": ext.eta1,
                    "order_relation": ext.order_relation,
                    "homomorphism_residual_zero": ext.homomorphism_residual_zero,
                    "restriction_is_eta": ext.restriction_is_eta,
                    "character_identity": matrix_char_ok,
                    "a_matrix": matrix(&ext.a_matrix),
                }),
            );
            let hb = heisenberg_block(g, &chars, ring, cfg.p)?;
            let hc = hypothesis_check(g, g.subgroup("ZA"), &chars.theta_za, &chars.twists, cfg.p)?;
            let projective = gcd(g.subgroup("Hline").order() as u64, cfg.p) == 1;
            let mut hyp = hypothesis_json(&hc);
            hyp["middle_subgroup_prime_to_p"] = json!(projective);
            hyp["passed"] = json!(hc.passed && projective);
            out.insert("hypotheses".into(), hyp);
            out.insert(
                "nilpotency".into(),
                json!({
                    "p_nilpotent_structure": hb.p_nilpotent,
                    "block_members": hb.block.members.iter().map(|&i| chars.twists[i].label.clone()).collect::<Vec<_>>(),
                    "block_integral": hb.block.min_valuation.map_or(true, |v| v >= 0),
                    "block_minimal": hb.block.minimal == Some(true),
                    "passed": hb.p_nilpotent && hb.linkage_agrees && hb.block.minimal == Some(true),
                }),
            );
            if !(hc.passed && projective) {
                HYPOTHESIS_FAILED
            } else {
                let (src, tgt) = heisenberg_modules(g, &chars, ring)?;
                let members: Vec<ClassFunction> = hb.block.members.iter().map(|&i| chars.twists[i].clone()).collect();
                let (seq, coh, ok) =
                    sequence_section(g, &ctx, &hb.block.idempotent, src, tgt, &chars.eta1, &members, cfg.seed)?;
                out.insert("sequence".into(), seq);
                out.insert("cohomology".into(), coh);
                let ext_ok = ext.eta1
                    && ext.homomorphism_residual_zero
                    && ext.restriction_is_eta
                    && matrix_char_ok
                    && eta.dimension as u64 == cfg.l
                    && eta.norm == 1
                    && eta.central_character_ok;
                if ok && ext_ok && hb.p_nilpotent {
                    PASS
                } else {
                    FINDING
                }
            }
        }
    };
    out.insert("status".into(), json!(status));
    Ok(Value::Object(out))
}

/// `obstructions`.
pub fn run_obstructions(cfg: &RunConfig) -> Result<Value> {
    cfg.validate(Command::Obstructions)?;
    let ctx = context(cfg)?;
    let (g, ring) = (&ctx.group, &ctx.ring);
    let rows = minimal_lift_report(g, ring, cfg.p)?;
    let ok = rows.iter().all(|r| r.minimal == 0);
    Ok(json!({
        "certificate": "obstructions",
        "tool": {"name": "modan", "version": TOOL_VERSION},
        "config": {"family": "gl2", "p": s(cfg.p), "l": s(cfg.l), "precision": s(ctx.precision)},
        "group": group_json(g),
        "ring": ring_json(ring),
        "input": "H^2(SL2(Z), -) = H^2(P, -) via Farrell cohomology (assumed reduction, not verified)",
        "scope": "local obstruction dimensions only; no Hecke localization is modelled",
        "rows": rows.iter().map(|r| json!({
            "minimal_exponent": s(r.minimal_exponent),
            "order": s(r.order),
            "minimal": s(r.minimal),
            "twists": r.twists.iter().map(|&(e, d)| json!({"exponent": s(e), "dimension": s(d)})).collect::<Vec<_>>(),
            "tag": r.tag(),
        })).collect::<Vec<_>>(),
        "status": if ok { PASS } else { FINDING },
    }))
}

/// Canonical text of a certificate (sorted keys, two-space indent).
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Outcome of `verify`.
#[derive(Clone, Debug)]
pub struct Verification {
    pub checks: Vec<(String, bool)>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, b)| *b)
    }
}

fn field<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Value> {
    let mut cur = v;
    for p in path {
        cur = cur
            .get(*p)
            .ok_or_else(|| Error::Malformed(format!("missing field {}", path.join("."))))?;
    }
    Ok(cur)
}

fn num<T: std::str::FromStr>(v: &Value, path: &[&str]) -> Result<T> {
    field(v, path)?
        .as_str()
        .and_then(|x| x.parse().ok())
        .ok_or_else(|| Error::Malformed(format!("field {} is not a decimal string", path.join("."))))
}

fn flag(v: &Value, path: &[&str]) -> Result<bool> {
    field(v, path)?
        .as_bool()
        .ok_or_else(|| Error::Malformed(format!("field {} is not a boolean", path.join("."))))
}

fn parse_elems(ring: &LocalRing, v: &Value) -> Result<Vec<RElem>> {
    let arr: Vec<Vec<String>> = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
    arr.iter().map(|x| ring.from_strings(x)).collect()
}

fn parse_matrix(ring: &LocalRing, v: &Value) -> Result<RMatrix> {
    let rows: usize = num(v, &["rows"])?;
    let cols: usize = num(v, &["cols"])?;
    let entries: Vec<Vec<Vec<String>>> =
        serde_json::from_value(field(v, &["entries"])?.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(Error::Malformed("matrix shape disagrees with its entries".into()));
    }
    if rows == 0 {
        return Ok(RMatrix::zeros(ring, 0, cols));
    }
    RMatrix::from_strings(ring, &entries)
}

fn config_from_cert(v: &Value) -> Result<RunConfig> {
    let family = match field(v, &["config", "family"])?.as_str() {
        Some("gl2") => Family::Gl2,
        Some("heisenberg") => Family::Heisenberg,
        _ => return Err(Error::Malformed("unknown family".into())),
    };
    let theta = match v.get("config").and_then(|c| c.get("theta")) {
        Some(_) => Some(num(v, &["config", "theta"])?),
        None => None,
    };
    Ok(RunConfig {
        family,
        p: num(v, &["config", "p"])?,
        l: num(v, &["config", "l"])?,
        theta,
        precision: Some(num(v, &["config", "precision"])?),
        seed: 0,
        out: None,
    })
}

/// Recheck a certificate from its recorded data: idempotency, bases,
/// equivariance, exactness, ranks, fingerprints and periodicity. No search
/// is repeated.
pub fn verify_certificate(v: &Value) -> Result<Verification> {
    let kind = field(v, &["certificate"])?
        .as_str()
        .ok_or_else(|| Error::Malformed("certificate kind".into()))?
        .to_string();
    let cfg = config_from_cert(v)?;
    let status = field(v, &["status"])?
        .as_str()
        .ok_or_else(|| Error::Malformed("status".into()))?
        .to_string();
    let mut checks: Vec<(String, bool)> = Vec::new();
    match kind.as_str() {
        "blocks" => {
            cfg.validate(Command::Blocks).map_err(|e| Error::Malformed(e.to_string()))?;
            let ctx = context(&cfg)?;
            let (g, ring) = (&ctx.group, &ctx.ring);
            let e = parse_elems(ring, field(v, &["block", "idempotent"])?)?;
            let sc = g.structure_constants();
            checks.push(("idempotent".into(), central_product(ring, &sc, &e, &e) == e));
            checks.push(("nonzero".into(), e.iter().any(|x| !ring.is_zero(&x.0))));
            let size: usize = num(v, &["block", "size"])?;
            let members = field(v, &["block", "members"])?
                .as_array()
                .ok_or_else(|| Error::Malformed("members".into()))?;
            checks.push(("size".into(), members.len() == size));
            if cfg.family == Family::Gl2 && status == PASS {
                let j = cfg.theta.expect("validated");
                let ob = gl2_orbit_block(g, j, g.exponent() as u32)?;
                checks.push(("idempotent_recomputed".into(), ob.idempotent.reduce(ring)? == e));
                checks.push(("size_is_orbit".into(), size == ob.orbit.len()));
                let defect: u64 = num(v, &["block", "defect_order"])?;
                checks.push((
                    "defect_order".into(),
                    defect == crate::block::defect_order(g.order() as u64, &[ob.members[0].degree], cfg.p),
                ));
            }
        }
        "sequence" => {
            cfg.validate(Command::Sequence).map_err(|e| Error::Malformed(e.to_string()))?;
            if status == HYPOTHESIS_FAILED {
                checks.push(("hypotheses_recorded_failed".into(), !flag(v, &["hypotheses", "passed"])?));
            } else {
                verify_sequence(v, &cfg, &mut checks)?;
            }
        }
        "obstructions" => {
            cfg.validate(Command::Obstructions).map_err(|e| Error::Malformed(e.to_string()))?;
            let ctx = context(&cfg)?;
            let rows = minimal_lift_report(&ctx.group, &ctx.ring, cfg.p)?;
            let recorded = field(v, &["rows"])?
                .as_array()
                .ok_or_else(|| Error::Malformed("rows".into()))?;
            checks.push(("row_count".into(), recorded.len() == rows.len()));
            for (r, rec) in rows.iter().zip(recorded) {
                let minimal: usize = num(rec, &["minimal"])?;
                let exp: u64 = num(rec, &["minimal_exponent"])?;
                let tw_ok = rec
                    .get("twists")
                    .and_then(|t| t.as_array())
                    .map(|t| {
                        t.len() == r.twists.len()
                            && t.iter().zip(&r.twists).all(|(a, &(e, d))| {
                                num::<u64>(a, &["exponent"]).ok() == Some(e) && num::<usize>(a, &["dimension"]).ok() == Some(d)
                            })
                    })
                    .unwrap_or(false);
                checks.push((format!("row_{exp}"), minimal == r.minimal && exp == r.minimal_exponent && tw_ok));
            }
        }
        other => return Err(Error::Malformed(format!("unknown certificate kind {other:?}"))),
    }
    Ok(Verification { checks })
}

fn verify_sequence(v: &Value, cfg: &RunConfig, checks: &mut Vec<(String, bool)>) -> Result<()> {
    let ctx = context(cfg)?;
    let (g, ring) = (&ctx.group, &ctx.ring);
    let m = g.exponent() as u32;
    let (src, tgt, expected) = match cfg.family {
        Family::Gl2 => {
            let j = cfg.theta.expect("validated");
            let theta = torus_character(g, j, m)?;
            let psi = zu_character(g, &theta)?;
            (
                Arc::new(induced_lattice(g, g.subgroup("ZU"), &psi, ring)?),
                Arc::new(induced_lattice(g, g.subgroup("T"), &theta, ring)?),
                cuspidal_character(g, &theta)?.character,
            )
        }
        Family::Heisenberg => {
            let t = cfg.theta.expect("validated") as u64;
            let chars = heisenberg_characters(g, t, m)?;
            let (s_, t_) = heisenberg_modules(g, &chars, ring)?;
            (s_, t_, chars.eta1)
        }
    };
    let e = parse_elems(ring, field(v, &["sequence", "idempotent"])?)?;
    let sc = g.structure_constants();
    checks.push(("idempotent".into(), central_product(ring, &sc, &e, &e) == e));
    let mid = Lattice::from_rows(src.clone(), "middle", &parse_matrix(ring, field(v, &["sequence", "middle_basis"])?)?)?;
    let right = Lattice::from_rows(tgt.clone(), "right", &parse_matrix(ring, field(v, &["sequence", "right_basis"])?)?)?;
    let f = parse_matrix(ring, field(v, &["sequence", "surjection", "matrix"])?)?;
    let ker_rows = parse_matrix(ring, field(v, &["sequence", "kernel_basis"])?)?;
    let kernel = Lattice::from_rows(src.clone(), "kernel", &ker_rows)?;
    let rk: usize = num(v, &["sequence", "ranks", "kernel"])?;
    let rm: usize = num(v, &["sequence", "ranks", "middle"])?;
    let rr: usize = num(v, &["sequence", "ranks", "right"])?;
    checks.push(("rank_additivity".into(), rm == rk + rr));
    checks.push((
        "ranks_match_bases".into(),
        rk == kernel.rank() && rm == mid.rank() && rr == right.rank() && f.rows() == rm && f.cols() == rr,
    ));
    let mut gens = src.generators().to_vec();
    gens.sort_unstable();
    checks.push(("equivariance".into(), f.rows() == mid.rank() && f.cols() == right.rank() && equivariance_residual_zero(g, &mid, &right, &f, &gens)));
    checks.push(("surjective".into(), f.cols() == right.rank() && f.rank_mod_pi() == right.rank()));
    // kernel rows, in middle coordinates, are annihilated by f
    let kc = RMatrix::from_elems(
        ring,
        kernel.rank(),
        mid.rank(),
        &(0..kernel.rank()).flat_map(|i| mid.coords(&kernel.basis_vector(i))).collect::<Vec<_>>(),
    );
    let inside = (0..kernel.rank()).all(|i| mid.contains(&kernel.basis_vector(i)));
    checks.push(("kernel_inside_middle".into(), inside));
    checks.push(("kernel_maps_to_zero".into(), f.rows() == mid.rank() && kc.mul(&f).is_zero()));
    let exp = expected.reduce(ring);
    let fp_ok = (0..g.num_classes()).all(|k| kernel.trace(g, g.class_rep(k)) == exp[k]);
    checks.push(("fingerprint".into(), fp_ok));
    let coh = field(v, &["cohomology"])?;
    for part in ["kernel", "middle", "right"] {
        let degs = field(coh, &[part, "degrees"])?
            .as_array()
            .ok_or_else(|| Error::Malformed("degrees".into()))?;
        let dims: Vec<(i64, u64)> = degs
            .iter()
            .map(|d| Ok((num(d, &["degree"])?, num(d, &["dimension"])?)))
            .collect::<Result<_>>()?;
        let periodic = dims
            .iter()
            .all(|&(n, a)| dims.iter().filter(|&&(k, _)| (k - n) % 2 == 0).all(|&(_, b)| b == a));
        checks.push((format!("periodic_{part}"), periodic));
    }
    let hk = tate_cohomology_pair(&restrict_to_p(g, &kernel)?, &restrict_to_p(g, &kernel)?)?;
    let recorded_k: Vec<u64> = field(coh, &["kernel", "degrees"])?
        .as_array()
        .ok_or_else(|| Error::Malformed("degrees".into()))?
        .iter()
        .map(|d| num(d, &["dimension"]))
        .collect::<Result<_>>()?;
    checks.push((
        "kernel_cohomology".into(),
        hk.degrees.iter().map(|(_, t)| t.dimension as u64).collect::<Vec<_>>() == recorded_k,
    ));
    Ok(())
}

/// Plain-text rendering of the headline fields.
pub fn render_text(v: &Value) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let get = |path: &[&str]| -> String {
        let mut cur = v;
        for p in path {
            match cur.get(*p) {
                Some(x) => cur = x,
                None => return "-".into(),
            }
        }
        match cur {
            Value::String(s) => s.clone(),
            Value::Null => "-".into(),
            other => other.to_string(),
        }
    };
    let _ = writeln!(out, "certificate  {}", get(&["certificate"]));
    let _ = writeln!(
        out,
        "config       family={} p={} l={} theta={} N={}",
        get(&["config", "family"]),
        get(&["config", "p"]),
        get(&["config", "l"]),
        get(&["config", "theta"]),
        get(&["config", "precision"])
    );
    let _ = writeln!(out, "group        {} (order {})", get(&["group", "label"]), get(&["group", "order"]));
    match get(&["certificate"]).as_str() {
        "blocks" => {
            let _ = writeln!(out, "block        {}", get(&["block", "members"]));
            let _ = writeln!(
                out,
                "size {}  defect {}  min valuation {}  minimal {}",
                get(&["block", "size"]),
                get(&["block", "defect_order"]),
                get(&["block", "min_valuation"]),
                get(&["block", "minimal"])
            );
            let _ = writeln!(out, "nilpotent    {}", get(&["block", "nilpotency", "passed"]));
            let _ = writeln!(out, "d(theta)     {}", get(&["block", "decomposition", "dbar_theta"]));
            let _ = writeln!(out, "morita       power nonvanishing {}", get(&["block", "morita", "power_nonvanishing"]));
        }
        "sequence" => {
            let _ = writeln!(out, "hypotheses   {}", get(&["hypotheses", "passed"]));
            let _ = writeln!(
                out,
                "ranks        kernel {}  middle {}  right {}",
                get(&["sequence", "ranks", "kernel"]),
                get(&["sequence", "ranks", "middle"]),
                get(&["sequence", "ranks", "right"])
            );
            let _ = writeln!(
                out,
                "fingerprint  {} / {} classes",
                get(&["sequence", "fingerprint_matches"]),
                get(&["group", "classes"])
            );
            if let Some(rows) = v.get("cohomology").and_then(|c| c.get("shift")).and_then(|r| r.as_array()) {
                let _ = writeln!(out, "  n  dim H^n(kernel)  dim H^(n-1)(right)");
                for r in rows {
                    let g = |k: &str| r.get(k).and_then(|x| x.as_str()).unwrap_or("-").to_string();
                    let _ = writeln!(out, "  {}  {:>15}  {:>18}", g("n"), g("kernel"), g("right_shifted"));
                }
            }
            if v.get("extension").is_some() {
                let _ = writeln!(out, "eta1 traces  all -1: {}", get(&["extension", "all_traces_minus_one"]));
            }
        }
        "obstructions" => {
            let _ = writeln!(out, "  exponent  order  minimal  non-minimal");
            if let Some(rows) = v.get("rows").and_then(|r| r.as_array()) {
                for r in rows {
                    let g = |k: &str| r.get(k).and_then(|x| x.as_str()).unwrap_or("-").to_string();
                    let tw: Vec<String> = r
                        .get("twists")
                        .and_then(|t| t.as_array())
                        .map(|t| t.iter().filter_map(|x| x.get("dimension").and_then(|d| d.as_str()).map(String::from)).collect())
                        .unwrap_or_default();
                    let _ = writeln!(out, "  {:>8}  {:>5}  {:>7}  {}", g("minimal_exponent"), g("order"), g("minimal"), tw.join(" "));
                }
            }
        }
        _ => {}
    }
    let _ = writeln!(out, "status       {}", get(&["status"]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(family: Family, p: u64, l: u64, theta: Option<i64>) -> RunConfig {
        RunConfig {
            family,
            p,
            l,
            theta,
            precision: None,
            seed: 0,
            out: None,
        }
    }

    #[test]
    fn validation_precedes_computation() {
        let bad = |c: RunConfig, cmd| matches!(c.validate(cmd), Err(Error::InvalidInput(_)));
        assert!(bad(cfg(Family::Gl2, 5, 5, Some(3)), Command::Blocks));
        assert!(bad(cfg(Family::Gl2, 3, 7, None), Command::Obstructions));
        assert!(bad(cfg(Family::Gl2, 3, 5, Some(24)), Command::Blocks));
        assert!(bad(cfg(Family::Gl2, 3, 5, Some(6)), Command::Sequence));
        assert!(bad(cfg(Family::Gl2, 3, 5, None), Command::Sequence));
        assert!(bad(cfg(Family::Heisenberg, 3, 5, Some(5)), Command::Sequence));
        assert!(bad(cfg(Family::Gl2, 3, 17, Some(1)), Command::Blocks));
        assert!(cfg(Family::Gl2, 3, 5, Some(3)).validate(Command::Blocks).is_ok());
        assert!(cfg(Family::Gl2, 3, 11, None).validate(Command::Obstructions).is_ok());
        assert!(cfg(Family::Heisenberg, 3, 5, Some(1)).validate(Command::Sequence).is_ok());
    }

    #[test]
    fn orbit_of_order_four_character() {
        let g = gl2_with_torus(11, 3).unwrap();
        assert_eq!(orbit_exponents(&g, 30), vec![30, 70, 110]);
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = cfg(Family::Heisenberg, 3, 5, Some(2));
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
        assert!(serde_json::from_str::<RunConfig>(r#"{"family": "gl2", "p": 3, "l": 5, "bogus": 1}"#).is_err());
    }

    #[test]
    fn tampered_idempotent_fails_verification() {
        let mut v = run_blocks(&cfg(Family::Gl2, 3, 5, Some(3))).unwrap();
        assert!(verify_certificate(&v).unwrap().passed());
        let ring = build_local_ring(3, 120, 6).unwrap();
        v["block"]["idempotent"][0] = elem(&ring, &ring.from_int(2));
        let report = verify_certificate(&v).unwrap();
        assert!(!report.passed());
        assert!(report.checks.iter().any(|(n, ok)| n == "idempotent" && !ok));
    }
}
