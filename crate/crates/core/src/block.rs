//! Central idempotents, blocks, defect groups, the Brauer homomorphism,
//! generalized decomposition numbers and the explicit Morita data for the
//! cuspidal blocks of `GL_2(F_ℓ)` and for `p`-nilpotent groups.

use std::collections::BTreeMap;

use crate::arith::cyclotomic::{CyclotomicNumber, RootSum};
use crate::arith::linalg::RMatrix;
use crate::arith::local::{LocalRing, RElem};
use crate::arith::numtheory::{p_part, vp};
use crate::character::{ClassFunction, Cuspidal, LinearCharacter};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A central element of `K[G]`, stored per conjugacy class as `nums[K] / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralElement {
    pub m: u32,
    pub den: i64,
    pub nums: Vec<RootSum>,
}

impl CentralElement {
    pub fn zero(g: &FiniteGroup, m: u32, den: i64) -> Self {
        CentralElement {
            m,
            den,
            nums: vec![RootSum::new(); g.num_classes()],
        }
    }

    /// The identity `[1]`.
    pub fn one(g: &FiniteGroup, m: u32) -> Self {
        let mut z = Self::zero(g, m, 1);
        z.nums[0] = RootSum::int(1);
        z
    }

    /// `e_χ = χ(1)/|G| Σ_g χ(g⁻¹) [g]`.
    pub fn idempotent(g: &FiniteGroup, chi: &ClassFunction) -> Self {
        let nums = chi.sums.iter().map(|s| s.conj(chi.m).scaled(chi.degree)).collect();
        CentralElement {
            m: chi.m,
            den: g.order() as i64,
            nums,
        }
    }

    /// Sum of elements sharing the same denominator.
    pub fn add(&self, other: &CentralElement) -> CentralElement {
        assert_eq!(self.den, other.den);
        let nums = self
            .nums
            .iter()
            .zip(&other.nums)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.add_assign_scaled(b, 1);
                s
            })
            .collect();
        CentralElement {
            m: self.m,
            den: self.den,
            nums,
        }
    }

    /// `Σ c_i z_i` for root-of-unity scalars `c_i = ζ^{k_i}`.
    pub fn combination(parts: &[(u32, &CentralElement)]) -> CentralElement {
        let first = parts[0].1;
        let mut nums = vec![RootSum::new(); first.nums.len()];
        for &(k, z) in parts {
            assert_eq!(z.den, first.den);
            for (acc, s) in nums.iter_mut().zip(&z.nums) {
                acc.add_assign_scaled(&s.shifted(k, z.m), 1);
            }
        }
        CentralElement {
            m: first.m,
            den: first.den,
            nums,
        }
    }

    pub fn value(&self, class: usize) -> CyclotomicNumber {
        self.nums[class].to_cyclotomic(self.m).scale(1, self.den as i128)
    }

    /// Minimum coefficient valuation (`None` for zero).
    pub fn min_valuation(&self, ring: &LocalRing) -> Option<i64> {
        self.nums
            .iter()
            .filter_map(|s| ring.valuation_of_root_sum(s, self.den))
            .min()
    }

    pub fn is_integral(&self, ring: &LocalRing) -> bool {
        self.min_valuation(ring).map_or(true, |v| v >= 0)
    }

    /// Image in `R_N` per class; fails if not integral.
    pub fn reduce(&self, ring: &LocalRing) -> Result<Vec<RElem>> {
        self.nums.iter().map(|s| ring.from_root_sum_div(s, self.den)).collect()
    }

    /// Scalar by which the element acts in the irreducible `ψ`:
    /// `ω_ψ(z) = Σ_K z_K |K| ψ(g_K)/ψ(1)`.
    pub fn central_character(&self, g: &FiniteGroup, psi: &ClassFunction) -> CyclotomicNumber {
        let mut acc = crate::arith::cyclotomic::RootAccumulator::new(self.m);
        for k in 0..g.num_classes() {
            acc.add_product(&self.nums[k], &psi.sums[k], g.class_size(k) as i64);
        }
        acc.to_cyclotomic().scale(1, self.den as i128 * psi.degree as i128)
    }
}

/// Product of class functions viewed as central elements of `R_N[G]`, via
/// class structure constants.
pub fn central_product(ring: &LocalRing, sc: &[Vec<u32>], a: &[RElem], b: &[RElem]) -> Vec<RElem> {
    let c = a.len();
    let mut out = vec![ring.zero(); c];
    let mut ab: Vec<Option<RElem>> = vec![None; c * c];
    for k in 0..c {
        if ring.is_zero(&a[k].0) {
            continue;
        }
        for l in 0..c {
            if !ring.is_zero(&b[l].0) {
                ab[k * c + l] = Some(ring.mul(&a[k], &b[l]));
            }
        }
    }
    for (mi, o) in out.iter_mut().enumerate() {
        for (kl, &n) in sc[mi].iter().enumerate() {
            if n == 0 {
                continue;
            }
            if let Some(x) = &ab[kl] {
                ring.add_scaled_int(&mut o.0, &x.0, n as u64);
            }
        }
    }
    out
}

/// `|K| χ(g_K) / χ(1)` reduced modulo `π`, for every class.
pub fn linkage_residues(g: &FiniteGroup, chi: &ClassFunction, residue: &LocalRing) -> Result<Vec<RElem>> {
    (0..g.num_classes())
        .map(|k| {
            let s = chi.sums[k].scaled(g.class_size(k) as i64);
            residue.from_root_sum_div(&s, chi.degree)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Block {
    /// Indices into the character list the block was computed from.
    pub members: Vec<usize>,
    pub idempotent: CentralElement,
    pub min_valuation: Option<i64>,
    /// `None` when the exhaustive subset check was skipped.
    pub minimal: Option<bool>,
    pub defect_order: u64,
}

/// `|D| = |G|_p / gcd_p(degrees)`.
pub fn defect_order(group_order: u64, degrees: &[i64], p: u64) -> u64 {
    let gp = p_part(group_order, p);
    let min_pp = degrees
        .iter()
        .map(|&d| p_part(d.unsigned_abs(), p))
        .min()
        .unwrap_or(1);
    gp / min_pp.min(gp)
}

/// Whether no proper nonempty sub-sum of the members' idempotents is integral.
pub fn is_minimal(ring: &LocalRing, idems: &[CentralElement]) -> bool {
    let n = idems.len();
    for mask in 1..(1u32 << n) - 1 {
        let mut acc: Option<CentralElement> = None;
        for (i, e) in idems.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = Some(match acc {
                    None => e.clone(),
                    Some(a) => a.add(e),
                });
            }
        }
        if acc.expect("nonempty").is_integral(ring) {
            return false;
        }
    }
    true
}

const MINIMALITY_LIMIT: usize = 6;

/// Certify a proposed block: integral idempotent, minimality (small blocks),
/// common linkage residues, and defect order.
pub fn certify_block(g: &FiniteGroup, chars: &[ClassFunction], members: &[usize], ring: &LocalRing) -> Result<Block> {
    let idems: Vec<CentralElement> = members.iter().map(|&i| CentralElement::idempotent(g, &chars[i])).collect();
    let mut e = idems[0].clone();
    for x in &idems[1..] {
        e = e.add(x);
    }
    let min_valuation = e.min_valuation(ring);
    let minimal = (members.len() <= MINIMALITY_LIMIT).then(|| is_minimal(ring, &idems));
    let degrees: Vec<i64> = members.iter().map(|&i| chars[i].degree).collect();
    Ok(Block {
        members: members.to_vec(),
        idempotent: e,
        min_valuation,
        minimal,
        defect_order: defect_order(g.order() as u64, &degrees, ring.p()),
    })
}

/// Partition of the characters by central characters modulo `π`, each block
/// certified by integrality of its idempotent.
pub fn block_partition(g: &FiniteGroup, table: &[ClassFunction], ring: &LocalRing) -> Result<Vec<Block>> {
    let residue = ring.residue_ring();
    let mut groups: Vec<(Vec<RElem>, Vec<usize>)> = Vec::new();
    for (i, chi) in table.iter().enumerate() {
        let key = linkage_residues(g, chi, &residue)?;
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(i),
            None => groups.push((key, vec![i])),
        }
    }
    let mut blocks = Vec::with_capacity(groups.len());
    for (_, members) in groups {
        let b = certify_block(g, table, &members, ring)?;
        if b.min_valuation.map_or(false, |v| v < 0) {
            return Err(Error::Internal(format!(
                "linkage class {:?} has a non-integral idempotent",
                members
            )));
        }
        if b.minimal == Some(false) {
            return Err(Error::Internal(format!("linkage class {:?} is not a single block", members)));
        }
        blocks.push(b);
    }
    Ok(blocks)
}

/// Column orthogonality form of `Σ_χ e_χ = 1`, checked exactly.
pub fn idempotents_sum_to_one(g: &FiniteGroup, table: &[ClassFunction]) -> bool {
    let m = table[0].m;
    let mut total = CentralElement::zero(g, m, g.order() as i64);
    for chi in table {
        total = total.add(&CentralElement::idempotent(g, chi));
    }
    (0..g.num_classes()).all(|k| {
        let v = total.value(k);
        if k == 0 {
            v.as_integer() == Some(1)
        } else {
            v.is_zero()
        }
    })
}

/// `ω_ψ(e_B)` for every `ψ`; equals 1 exactly on the members and 0 elsewhere,
/// which certifies `e_B² = e_B` and orthogonality to every other block.
pub fn central_character_profile(g: &FiniteGroup, table: &[ClassFunction], block: &Block) -> Vec<CyclotomicNumber> {
    table.iter().map(|psi| block.idempotent.central_character(g, psi)).collect()
}

pub fn profile_is_indicator(profile: &[CyclotomicNumber], members: &[usize]) -> bool {
    profile.iter().enumerate().all(|(i, v)| {
        let expected = if members.contains(&i) { 1 } else { 0 };
        v.as_integer() == Some(expected)
    })
}

/// Brauer homomorphism: restriction of the support of a central element of
/// `k[G]` to `C_G(P)`; returned per element of the centraliser (sorted).
pub fn brauer_homomorphism(g: &FiniteGroup, z: &[RElem], centralizer: &[usize]) -> BTreeMap<usize, RElem> {
    centralizer
        .iter()
        .map(|&x| (x, z[g.class_of(x)].clone()))
        .collect()
}

/// Centraliser of a subgroup given by generators.
pub fn centralizer(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    (0..g.order())
        .filter(|&y| gens.iter().all(|&x| g.mul(x, y) == g.mul(y, x)))
        .collect()
}

/// Product in the group algebra of an abelian subgroup (sorted supports).
pub fn abelian_product(
    g: &FiniteGroup,
    ring: &LocalRing,
    a: &BTreeMap<usize, RElem>,
    b: &BTreeMap<usize, RElem>,
) -> BTreeMap<usize, RElem> {
    let mut out: BTreeMap<usize, RElem> = BTreeMap::new();
    for (&x, u) in a {
        if ring.is_zero(&u.0) {
            continue;
        }
        for (&y, v) in b {
            if ring.is_zero(&v.0) {
                continue;
            }
            let t = ring.mul(u, v);
            let e = out.entry(g.mul(x, y)).or_insert_with(|| ring.zero());
            ring.add_assign(&mut e.0, &t.0);
        }
    }
    out.retain(|_, v| !ring.is_zero(&v.0));
    out
}

/// `e_f = |S|⁻¹ Σ_{s∈S} η(s⁻¹) [s]` over `k`, the block idempotent of `k[T]`
/// attached to the character `η` of `S ≤ T`.
pub fn torus_block_idempotent(eta: &LinearCharacter, residue: &LocalRing) -> BTreeMap<usize, RElem> {
    let n = eta.elements.len() as i64;
    let inv = residue.inv(&residue.from_int(n)).expect("|S| prime to p");
    let step = residue.conductor() / eta.m as u64;
    eta.elements
        .iter()
        .zip(&eta.exps)
        .map(|(&s, &k)| {
            let v = residue.root((eta.m - k) as u64 % eta.m as u64 * step);
            (s, residue.mul(&v, &inv))
        })
        .collect()
}

/// Spot-check multiplicativity of the Brauer homomorphism on products of
/// class sums, over `k`.
pub fn brauer_multiplicative_spot_check(
    g: &FiniteGroup,
    sc: &[Vec<u32>],
    residue: &LocalRing,
    centralizer: &[usize],
    pairs: &[(usize, usize)],
) -> bool {
    let c = g.num_classes();
    let member: Vec<bool> = {
        let mut v = vec![false; g.order()];
        for &x in centralizer {
            v[x] = true;
        }
        v
    };
    for &(k, l) in pairs {
        let class_sum = |kk: usize| -> BTreeMap<usize, RElem> {
            g.classes()[kk]
                .iter()
                .filter(|&&x| member[x])
                .map(|&x| (x, residue.one()))
                .collect()
        };
        let lhs: BTreeMap<usize, RElem> = centralizer
            .iter()
            .map(|&x| {
                let mcls = g.class_of(x);
                (x, residue.from_int(sc[mcls][k * c + l] as i64))
            })
            .filter(|(_, v)| !residue.is_zero(&v.0))
            .collect();
        let rhs = abelian_product(g, residue, &class_sum(k), &class_sum(l));
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Brauer-pair and nilpotency checks for a cuspidal block of `GL_2`.
#[derive(Clone, Debug)]
pub struct NilpotencyCertificate {
    pub brauer_image_nonzero: bool,
    pub brauer_pair_identity: bool,
    pub weyl_fixes_residue: bool,
    pub p_nilpotent_structure: Option<bool>,
    pub passed: bool,
    /// The chosen block `f` of `k[T]`: the restriction `θ̄|_S`.
    pub f_description: String,
}

/// Nilpotency certificate for the `Ξ`-orbit block of a torus character `θ`.
pub fn nilpotency_certificate_gl2(
    g: &FiniteGroup,
    block_idem: &CentralElement,
    theta: &LinearCharacter,
    ring: &LocalRing,
) -> Result<NilpotencyCertificate> {
    let residue = ring.residue_ring();
    let ebar = block_idem.reduce(&residue)?;
    let p = g.subgroup("P");
    let c = centralizer(g, &p.generators);
    let br = brauer_homomorphism(g, &ebar, &c);
    let brauer_image_nonzero = br.values().any(|v| !residue.is_zero(&v.0));
    let s = g.subgroup("S");
    let eta = theta.restrict("S", &s.elements);
    let ef = torus_block_idempotent(&eta, &residue);
    let prod = abelian_product(g, &residue, &ef, &br);
    let ef_clean: BTreeMap<usize, RElem> = ef.into_iter().filter(|(_, v)| !residue.is_zero(&v.0)).collect();
    let brauer_pair_identity = prod == ef_clean;
    let l = g.field_size().expect("GL2") as i64;
    let step = residue.conductor() / theta.m as u64;
    let tw = theta.pow(l);
    let weyl_fixes_residue = theta
        .exps
        .iter()
        .zip(&tw.exps)
        .all(|(&a, &b)| residue.root(a as u64 * step) == residue.root(b as u64 * step));
    Ok(NilpotencyCertificate {
        brauer_image_nonzero,
        brauer_pair_identity,
        weyl_fixes_residue,
        p_nilpotent_structure: None,
        passed: brauer_image_nonzero && brauer_pair_identity && !weyl_fixes_residue,
        f_description: format!("block of k[T] for {}|S", theta.label),
    })
}

/// Generalized decomposition numbers `d_η` at a regular `x ∈ P`.
#[derive(Clone, Debug)]
pub struct DecompositionNumbers {
    /// Characters `η` of `S` by exponent relative to the generator power used.
    pub etas: Vec<LinearCharacter>,
    /// Exact `d_η` from orthogonality over `K`.
    pub exact: Vec<CyclotomicNumber>,
    /// `d_η` from solving the linear system over `R_N`.
    pub solved: Vec<RElem>,
    pub routes_agree: bool,
    /// Indices with `d̄_η ≠ 0`.
    pub support: Vec<usize>,
    /// Index of `θ̄|_S` and `θ̄^w|_S`.
    pub theta_index: usize,
    pub theta_w_index: usize,
    /// `d̄_{θ̄}` as `±1` when it reduces to a sign.
    pub dbar_theta: Option<i64>,
    pub sum_identity: bool,
}

/// Solve `χ_θ(xy) = Σ_η d_η η(y)` on `y ∈ S`, both exactly and over `R_N`.
pub fn generalized_decomposition_numbers(
    g: &FiniteGroup,
    cusp: &Cuspidal,
    x: usize,
    ring: &LocalRing,
) -> Result<DecompositionNumbers> {
    let s = g.subgroup("S");
    let m = cusp.character.m;
    let chi = &cusp.character;
    let td = g.torus.as_ref().expect("torus");
    let s_order = s.order() as u64;
    let step = td.powers.len() as u64 / s_order;
    // characters of S: η_k(t^{step·i}) = ζ_{|S|}^{ki}
    let etas: Vec<LinearCharacter> = (0..s_order)
        .map(|k| {
            LinearCharacter::new(g, s, m, format!("η{k}"), |y| {
                // y = t^{step·i}
                let i = (td.log[&y] / step) % s_order;
                ((m as u64 / s_order) * (k * i % s_order)) as u32
            })
        })
        .collect::<Result<_>>()?;
    // exact route
    let mut exact = Vec::with_capacity(etas.len());
    for eta in &etas {
        let mut acc = RootSum::new();
        for (&y, &k) in eta.elements.iter().zip(&eta.exps) {
            let v = &chi.sums[g.class_of(g.mul(x, y))];
            acc.add_assign_scaled(&v.shifted(m - k, m), 1);
        }
        exact.push(acc.to_cyclotomic(m).scale(1, s_order as i128));
    }
    // R_N route: unknown row vector d with d·M = b, M[η][y] = η(y)
    let mut mat = RMatrix::zeros(ring, etas.len(), s.order());
    for (i, eta) in etas.iter().enumerate() {
        for (j, &k) in eta.exps.iter().enumerate() {
            mat.set(i, j, &ring.root(k as u64));
        }
    }
    let reduced = chi.reduce(ring);
    let mut b = RMatrix::zeros(ring, 1, s.order());
    for (j, &y) in s.elements.iter().enumerate() {
        b.set(0, j, &reduced[g.class_of(g.mul(x, y))]);
    }
    let sol = mat.solve(&b)?;
    let solved: Vec<RElem> = (0..etas.len()).map(|i| sol.get(0, i)).collect();
    let routes_agree = exact
        .iter()
        .zip(&solved)
        .map(|(e, r)| ring.from_cyclotomic(e).map(|v| v == *r))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    let residue = ring.residue_ring();
    let support: Vec<usize> = solved
        .iter()
        .enumerate()
        .filter(|(_, d)| !residue.is_zero(&residue.truncate(&ring.convert(d, &residue), 1).0))
        .map(|(i, _)| i)
        .collect();
    let theta_s = cusp.theta.restrict("S", &s.elements);
    let l = g.field_size().expect("GL2") as i64;
    let theta_ws = cusp.theta.pow(l).restrict("S", &s.elements);
    let theta_index = etas.iter().position(|e| e.exps == theta_s.exps).expect("θ|S is a character of S");
    let theta_w_index = etas.iter().position(|e| e.exps == theta_ws.exps).expect("θ^w|S is a character of S");
    let dbar = residue.convert(&solved[theta_index], &residue);
    let dbar_theta = if dbar == residue.one() {
        Some(1)
    } else if dbar == residue.from_int(-1) {
        Some(-1)
    } else {
        None
    };
    // Σ d_η η(1) = χ(x)
    let mut total = CyclotomicNumber::zero(m);
    for e in &exact {
        total = &total + e;
    }
    let sum_identity = &total == chi.value_at(g, x);
    Ok(DecompositionNumbers {
        etas,
        exact,
        solved,
        routes_agree,
        support,
        theta_index,
        theta_w_index,
        dbar_theta,
        sum_identity,
    })
}

/// Checks on `ι(g) = Σ_ξ ξ(g) e_{θξ}` for a cyclic `P = ⟨x⟩`.
#[derive(Clone, Debug)]
pub struct MoritaReport {
    pub iota_integral: bool,
    pub iota_min_valuation: Vec<Option<i64>>,
    pub iota_one_is_block_idempotent: bool,
    pub homomorphism_residual_zero: bool,
    pub power_nonvanishing: bool,
    pub order_relation: bool,
}

/// `ι` on `P`, given the cuspidal members `π_{θξ}` indexed by `ξ ∈ Ξ` (with
/// `xi_exps[i]` the exponent of `ξ_i(x)`).
pub fn morita_iota(
    g: &FiniteGroup,
    members: &[ClassFunction],
    xis: &[LinearCharacter],
    ring: &LocalRing,
    sc: &[Vec<u32>],
) -> Result<MoritaReport> {
    let p = g.subgroup("P");
    let x = p.generators[0];
    let n = p.order() as u64;
    let idems: Vec<CentralElement> = members.iter().map(|c| CentralElement::idempotent(g, c)).collect();
    let iota = |gp: usize| -> CentralElement {
        let parts: Vec<(u32, &CentralElement)> = xis
            .iter()
            .zip(&idems)
            .map(|(xi, e)| (xi.exp(gp).expect("ξ defined on T ⊇ P"), e))
            .collect();
        CentralElement::combination(&parts)
    };
    let powers: Vec<usize> = (0..n).map(|k| g.pow(x, k)).collect();
    let iotas: Vec<CentralElement> = powers.iter().map(|&y| iota(y)).collect();
    let iota_min_valuation: Vec<Option<i64>> = iotas.iter().map(|z| z.min_valuation(ring)).collect();
    let iota_integral = iota_min_valuation.iter().all(|v| v.map_or(true, |v| v >= 0));
    if !iota_integral {
        return Err(Error::Internal("ι is not integral".into()));
    }
    let mut e_b = idems[0].clone();
    for e in &idems[1..] {
        e_b = e_b.add(e);
    }
    let iota_one_is_block_idempotent = iotas[0] == e_b;
    let red: Vec<Vec<RElem>> = iotas.iter().map(|z| z.reduce(ring)).collect::<Result<_>>()?;
    let mut homomorphism_residual_zero = true;
    for a in 0..n as usize {
        for b in 0..n as usize {
            let prod = central_product(ring, sc, &red[a], &red[b]);
            if prod != red[(a + b) % n as usize] {
                homomorphism_residual_zero = false;
            }
        }
    }
    // ι(x)^n = ι(1)
    let mut cur = red[0].clone();
    for _ in 0..n {
        cur = central_product(ring, sc, &cur, &red[1]);
    }
    let order_relation = cur == red[0];
    // ι(x - 1)^{n-1} mod π
    let diff: Vec<RElem> = red[1].iter().zip(&red[0]).map(|(a, b)| ring.sub(a, b)).collect();
    let mut pw = diff.clone();
    for _ in 1..n - 1 {
        pw = central_product(ring, sc, &pw, &diff);
    }
    let power_nonvanishing = pw.iter().any(|v| ring.is_unit(&v.0));
    Ok(MoritaReport {
        iota_integral,
        iota_min_valuation,
        iota_one_is_block_idempotent,
        homomorphism_residual_zero,
        power_nonvanishing,
        order_relation,
    })
}

/// `v_p(|G|)·e + 4`, the default working precision.
pub fn default_precision(group_order: u64, p: u64, e: usize) -> u32 {
    vp(group_order, p) * e as u32 + 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::local::build_local_ring;
    use crate::character::{cuspidal_character, full_irreducible_table, torus_character};
    use crate::group::gl2_with_torus;

    #[test]
    fn trivial_idempotent() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let one = ClassFunction::trivial(&g, m);
        let e = CentralElement::idempotent(&g, &one);
        for k in 0..g.num_classes() {
            assert_eq!(e.value(k), CyclotomicNumber::from_rational(m, 1, 480));
        }
    }

    #[test]
    fn cuspidal_idempotent_has_valuation_minus_one() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 6).unwrap();
        let theta = torus_character(&g, 3, m).unwrap();
        let c = cuspidal_character(&g, &theta).unwrap();
        let e = CentralElement::idempotent(&g, &c.character);
        assert_eq!(e.value(0), CyclotomicNumber::from_rational(m, 16, 480));
        assert_eq!(ring.valuation_of(&e.value(0)), Some(-(ring.e() as i64)));
        assert_eq!(e.min_valuation(&ring), Some(-2));
    }

    #[test]
    fn blocks_of_gl2_f5() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 6).unwrap();
        let table = full_irreducible_table(&g, m).unwrap();
        let blocks = block_partition(&g, &table, &ring).unwrap();
        let total: usize = blocks.iter().map(|b| b.members.len()).sum();
        assert_eq!(total, 24);
        assert!(idempotents_sum_to_one(&g, &table));
        for b in &blocks {
            let prof = central_character_profile(&g, &table, b);
            assert!(profile_is_indicator(&prof, &b.members));
            for &i in &b.members {
                if table[i].degree % 3 == 0 {
                    assert_eq!(b.members.len(), 1);
                    assert_eq!(b.defect_order, 1);
                }
            }
        }
        let principal = blocks.iter().find(|b| b.members.contains(&0)).unwrap();
        assert_eq!(principal.defect_order, 3);
    }

    fn cuspidal_block(g: &FiniteGroup, m: u32, j: i64) -> (Vec<ClassFunction>, Vec<LinearCharacter>, Cuspidal) {
        let mut members = Vec::new();
        let mut xis = Vec::new();
        let mut first = None;
        for k in 0..3 {
            let theta = torus_character(g, j + 8 * k, m).unwrap();
            let c = cuspidal_character(g, &theta).unwrap();
            members.push(c.character.clone());
            xis.push(torus_character(g, 8 * k, m).unwrap());
            first.get_or_insert(c);
        }
        (members, xis, first.unwrap())
    }

    #[test]
    fn cuspidal_block_at_five_three() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 6).unwrap();
        let (members, xis, cusp) = cuspidal_block(&g, m, 3);
        let b = certify_block(&g, &members, &[0, 1, 2], &ring).unwrap();
        assert!(b.min_valuation.unwrap() >= 0);
        assert_eq!(b.minimal, Some(true));
        assert_eq!(b.defect_order, 3);
        for c in &members {
            assert!(!CentralElement::idempotent(&g, c).is_integral(&ring));
        }
        let cert = nilpotency_certificate_gl2(&g, &b.idempotent, &cusp.theta, &ring).unwrap();
        assert!(cert.passed, "{cert:?}");

        let x = g.subgroup("P").generators[0];
        let d = generalized_decomposition_numbers(&g, &cusp, x, &ring).unwrap();
        assert!(d.routes_agree);
        assert!(d.sum_identity);
        assert_eq!(d.dbar_theta, Some(-1));
        let mut orbit = vec![d.theta_index, d.theta_w_index];
        orbit.sort();
        orbit.dedup();
        assert_eq!(d.support, orbit);

        let sc = g.structure_constants();
        let mr = morita_iota(&g, &members, &xis, &ring, &sc).unwrap();
        assert!(mr.iota_integral && mr.iota_one_is_block_idempotent);
        assert!(mr.homomorphism_residual_zero);
        assert!(mr.order_relation);
        assert!(mr.power_nonvanishing);

        let residue = ring.residue_ring();
        let c = centralizer(&g, &g.subgroup("P").generators);
        assert_eq!(c.len(), 24);
        assert!(brauer_multiplicative_spot_check(&g, &sc, &residue, &c, &[(1, 2), (3, 5), (7, 7)]));
    }

    #[test]
    fn defect_arithmetic() {
        assert_eq!(defect_order(480, &[4, 4, 4], 3), 3);
        assert_eq!(defect_order(480, &[6], 3), 1);
    }
}
