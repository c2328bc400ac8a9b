//! The `p`-nilpotent family `G = H ⋊ A`: the Heisenberg representation `η`,
//! its trace-normalized extension `η₁`, and the certified sequence
//! `0 → η̃₁ → e·Ind_H^G η̃ → e·Ind_{ZA}^G θ̃ → 0`.

use std::sync::Arc;

use crate::arith::cyclotomic::{RootAccumulator, RootSum};
use crate::arith::linalg::RMatrix;
use crate::arith::local::{LocalRing, RElem};
use crate::block::{certify_block, linkage_residues, Block};
use crate::character::{verify_orthonormal, CharKind, ClassFunction, LinearCharacter};
use crate::error::{Error, Result};
use crate::group::{verify_p_nilpotent, FiniteGroup};
use crate::lattice::{induced_lattice, induced_lattice_within, intertwiners, Lattice, MonomialModule};

/// `(v0, v1, z, j)` with `g = (v, z)·a^j`.
pub fn heisenberg_coords(g: &FiniteGroup, x: usize) -> (u64, u64, u64, u64) {
    let l = g.field_size().expect("Heisenberg family") as u64;
    let k = g.key(x);
    (k % l, (k / l) % l, (k / (l * l)) % l, k / (l * l * l))
}

/// `θ_t(z^c) = ζ_ℓ^{tc}` on `Z`, extended by `λ(v0, 0, z) = θ(z)` to the
/// line subgroup or by `θ̂(z a^j) = θ(z)` to `ZA`.
pub fn theta_on(g: &FiniteGroup, name: &str, t: u64, m: u32) -> Result<LinearCharacter> {
    let l = g.field_size().expect("Heisenberg family") as u64;
    if m as u64 % l != 0 {
        return Err(Error::InvalidInput(format!("conductor {m} not divisible by ℓ = {l}")));
    }
    let step = m as u64 / l;
    let h = g.subgroup(name);
    LinearCharacter::new(g, h, m, format!("θ{t}|{name}"), |x| {
        let (_, _, z, _) = heisenberg_coords(g, x);
        ((t * z % l) * step) as u32
    })
}

/// `η = Ind_{Hline}^H λ` with its checks.
#[derive(Clone, Debug)]
pub struct EtaData {
    pub module: Arc<MonomialModule>,
    pub dimension: usize,
    /// `⟨χ_η, χ_η⟩_H`, exact.
    pub norm: i64,
    pub central_character_ok: bool,
}

pub fn unique_eta(g: &FiniteGroup, t: u64, ring: &LocalRing) -> Result<EtaData> {
    let l = g.field_size().expect("Heisenberg family") as u64;
    if t % l == 0 {
        return Err(Error::InvalidInput(format!("θ{t} is not faithful on Z")));
    }
    let m = ring.conductor() as u32;
    let lambda = theta_on(g, "Hline", t, m)?;
    let h = g.subgroup("H");
    let module = Arc::new(induced_lattice_within(g, h, g.subgroup("Hline"), &lambda, ring)?);
    let mut acc = RootAccumulator::new(m);
    for &x in &h.elements {
        let s = module.trace_sum(g, x);
        acc.add_product(&s, &s.conj(m), 1);
    }
    let norm_q = acc.to_cyclotomic().scale(1, h.order() as i128);
    let norm = norm_q
        .as_integer()
        .ok_or_else(|| Error::Internal("⟨χ_η, χ_η⟩ is not an integer".into()))? as i64;
    let step = ring.conductor() / l;
    let central_character_ok = g.subgroup("Z").elements.iter().all(|&z| {
        let mono = module.monomial(g, z);
        let (_, _, c, _) = heisenberg_coords(g, z);
        let want = (t * c % l) * step;
        mono.perm.iter().enumerate().all(|(i, &j)| i == j) && mono.exps.iter().all(|&e| e == want)
    });
    Ok(EtaData {
        dimension: module.rank(),
        module,
        norm,
        central_character_ok,
    })
}

/// The extension `η₁` of `η` to `G`.
#[derive(Clone, Debug)]
pub struct ExtensionDatum {
    /// `σ₁(a)` in the row convention, normalized to trace `-1`.
    pub a_matrix: RMatrix,
    pub intertwiner_rank: usize,
    /// `tr η₁(a^k)` for `k = 1, ..., |A| - 1`.
    pub traces: Vec<RElem>,
    pub order_relation: bool,
    pub homomorphism_residual_zero: bool,
    pub restriction_is_eta: bool,
    pub eta1: bool,
}

impl ExtensionDatum {
    /// `σ₁(h a^k) = S^k σ(h)`.
    pub fn matrix(&self, g: &FiniteGroup, eta: &EtaData, x: usize) -> RMatrix {
        let hd = g.heisenberg.as_ref().expect("Heisenberg family");
        let (_, _, _, j) = heisenberg_coords(g, x);
        let h = g.mul(x, g.pow(g.inv(hd.a_gen), j));
        let eta_h = Lattice::full(eta.module.clone()).action_matrix(g, h);
        mat_pow(&self.a_matrix, j).mul(&eta_h)
    }
}

fn mat_pow(m: &RMatrix, k: u64) -> RMatrix {
    let mut acc = RMatrix::identity(m.ring(), m.rows());
    for _ in 0..k {
        acc = acc.mul(m);
    }
    acc
}

pub fn eta_one(g: &FiniteGroup, eta: &EtaData) -> Result<ExtensionDatum> {
    let hd = g.heisenberg.as_ref().expect("Heisenberg family");
    let ring = eta.module.ring.clone();
    let full = Lattice::full(eta.module.clone());
    let a = hd.a_gen;
    let ainv = g.inv(a);
    let gens = g.subgroup("H").generators.clone();
    let pairs: Vec<(RMatrix, RMatrix)> = gens
        .iter()
        .map(|&h| (full.action_matrix(g, h), full.action_matrix(g, g.mul(g.mul(a, h), ainv))))
        .collect();
    let (sols, rank) = intertwiners(&ring, eta.dimension, eta.dimension, &pairs);
    if rank != 1 {
        return Err(Error::Internal(format!("intertwiner module has free rank {rank}, expected 1")));
    }
    let s = &sols[0];
    let tr = s.trace();
    let inv = ring
        .inv(&tr)
        .ok_or_else(|| Error::Internal("intertwiner trace is not a unit".into()))?;
    let s = s.scale(&ring.neg(&inv));
    let n = hd.a_order;
    let order_relation = mat_pow(&s, n) == RMatrix::identity(&ring, eta.dimension);
    let traces: Vec<RElem> = (1..n).map(|k| mat_pow(&s, k).trace()).collect();
    let minus_one = ring.from_int(-1);
    let eta1 = order_relation && traces.iter().all(|t| *t == minus_one);
    let mut datum = ExtensionDatum {
        a_matrix: s,
        intertwiner_rank: rank,
        traces,
        order_relation,
        homomorphism_residual_zero: false,
        restriction_is_eta: false,
        eta1,
    };
    // σ₁(x s) = σ₁(s) σ₁(x) for every x and generator s
    let mut ok = true;
    for &sg in g.generators() {
        let ms = datum.matrix(g, eta, sg);
        for x in 0..g.order() {
            if datum.matrix(g, eta, g.mul(x, sg)) != ms.mul(&datum.matrix(g, eta, x)) {
                ok = false;
                break;
            }
        }
    }
    datum.homomorphism_residual_zero = ok;
    datum.restriction_is_eta = gens
        .iter()
        .all(|&h| datum.matrix(g, eta, h) == full.action_matrix(g, h));
    if !datum.eta1 {
        return Err(Error::Internal("no twist of the extension has all traces −1".into()));
    }
    Ok(datum)
}

/// `ξ_k(h a^j) = ζ_{|A|}^{kj}`, inflated from `A`.
pub fn a_character(g: &FiniteGroup, k: u64, m: u32) -> ClassFunction {
    let n = g.heisenberg.as_ref().expect("Heisenberg family").a_order;
    let step = m as u64 / n;
    let sums = (0..g.num_classes())
        .map(|c| {
            let (_, _, _, j) = heisenberg_coords(g, g.class_rep(c));
            RootSum::root(((k * j % n) * step) as u32)
        })
        .collect();
    ClassFunction::from_sums(m, sums, CharKind::Irreducible, format!("ξ{k}"))
}

/// Everything computed for one `(ℓ, p, θ)`.
#[derive(Clone, Debug)]
pub struct HeisenbergCharacters {
    /// `χ_{η₁} = Ind_H η − Ind_{ZA} θ̂`.
    pub eta1: ClassFunction,
    /// `η₁ ⊗ ξ_k` for `k = 0, ..., |A| - 1`: every irreducible with central
    /// character `θ`.
    pub twists: Vec<ClassFunction>,
    pub ind_h: ClassFunction,
    pub ind_za: ClassFunction,
    pub lambda: LinearCharacter,
    pub theta_za: LinearCharacter,
}

pub fn heisenberg_characters(g: &FiniteGroup, t: u64, m: u32) -> Result<HeisenbergCharacters> {
    let lambda = theta_on(g, "Hline", t, m)?;
    let theta_za = theta_on(g, "ZA", t, m)?;
    let ind_h = crate::character::induced_character(g, g.subgroup("Hline"), &lambda);
    let ind_za = crate::character::induced_character(g, g.subgroup("ZA"), &theta_za);
    let mut eta1 = ind_h.sub(&ind_za);
    eta1.label = format!("η₁[θ{t}]");
    eta1.kind = CharKind::Irreducible;
    let n = g.heisenberg.as_ref().expect("Heisenberg family").a_order;
    let twists: Vec<ClassFunction> = (0..n)
        .map(|k| {
            let mut c = eta1.tensor(&a_character(g, k, m));
            c.label = format!("η₁ξ{k}");
            c.kind = CharKind::Irreducible;
            c
        })
        .collect();
    verify_orthonormal(g, &twists)?;
    Ok(HeisenbergCharacters {
        eta1,
        twists,
        ind_h,
        ind_za,
        lambda,
        theta_za,
    })
}

/// Indices `k` with `ξ_k` of `p`-power order.
pub fn p_power_twists(n: u64, p: u64) -> Vec<usize> {
    (0..n)
        .filter(|&k| crate::arith::numtheory::is_power_of(n / crate::arith::numtheory::gcd(k, n), p))
        .map(|k| k as usize)
        .collect()
}

#[derive(Clone, Debug)]
pub struct HeisenbergBlock {
    pub block: Block,
    pub linkage_agrees: bool,
    /// No other twist shares the linkage residues.
    pub linkage_separates: bool,
    pub p_nilpotent: bool,
}

pub fn heisenberg_block(g: &FiniteGroup, chars: &HeisenbergCharacters, ring: &LocalRing, p: u64) -> Result<HeisenbergBlock> {
    let n = chars.twists.len() as u64;
    let members = p_power_twists(n, p);
    let block = certify_block(g, &chars.twists, &members, ring)?;
    let residue = ring.residue_ring();
    let keys: Vec<Vec<RElem>> = chars
        .twists
        .iter()
        .map(|c| linkage_residues(g, c, &residue))
        .collect::<Result<_>>()?;
    let linkage_agrees = members.iter().all(|&i| keys[i] == keys[members[0]]);
    let linkage_separates = (0..keys.len())
        .filter(|i| !members.contains(i))
        .all(|i| keys[i] != keys[members[0]]);
    Ok(HeisenbergBlock {
        block,
        linkage_agrees,
        linkage_separates,
        p_nilpotent: verify_p_nilpotent(g, "N", "P", p),
    })
}

/// Source and target modules of the sequence.
pub fn heisenberg_modules(g: &FiniteGroup, chars: &HeisenbergCharacters, ring: &LocalRing) -> Result<(Arc<MonomialModule>, Arc<MonomialModule>)> {
    let src = induced_lattice(g, g.subgroup("Hline"), &chars.lambda, ring)?;
    let tgt = induced_lattice(g, g.subgroup("ZA"), &chars.theta_za, ring)?;
    Ok((Arc::new(src), Arc::new(tgt)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::local::build_local_ring;
    use crate::group::build_heisenberg_semidirect;

    #[test]
    fn eta_and_eta1_at_five() {
        let g = build_heisenberg_semidirect(5, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 6).unwrap();
        let eta = unique_eta(&g, 1, &ring).unwrap();
        assert_eq!(eta.dimension, 5);
        assert_eq!(eta.norm, 1);
        assert!(eta.central_character_ok);
        let ext = eta_one(&g, &eta).unwrap();
        assert_eq!(ext.traces.len(), 5);
        assert!(ext.eta1 && ext.homomorphism_residual_zero && ext.restriction_is_eta);
        let chars = heisenberg_characters(&g, 1, m).unwrap();
        assert_eq!(chars.eta1.degree, 5);
        assert_eq!(chars.ind_h.degree, 30);
        assert_eq!(chars.ind_za.degree, 25);
        let expected = chars.eta1.reduce(&ring);
        for k in 0..g.num_classes() {
            assert_eq!(ext.matrix(&g, &eta, g.class_rep(k)).trace(), expected[k]);
        }
        let hb = heisenberg_block(&g, &chars, &ring, 3).unwrap();
        assert_eq!(hb.block.members, vec![0, 2, 4]);
        assert_eq!(hb.block.minimal, Some(true));
        assert!(hb.block.min_valuation.unwrap() >= 0);
        assert_eq!(hb.block.defect_order, 3);
        assert!(hb.linkage_agrees && hb.linkage_separates && hb.p_nilpotent);
    }

    #[test]
    fn non_faithful_theta_is_rejected() {
        let g = build_heisenberg_semidirect(5, 3).unwrap();
        let ring = build_local_ring(3, g.exponent(), 4).unwrap();
        assert!(unique_eta(&g, 5, &ring).is_err());
    }
}
