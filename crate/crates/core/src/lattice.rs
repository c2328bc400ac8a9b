//! Integral lattices: induced modules with monomial action, idempotent cuts,
//! equivariant maps, hypothesis checks and certified short exact sequences.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::cyclotomic::RootSum;
use crate::arith::linalg::RMatrix;
use crate::arith::local::{LocalRing, RElem};
use crate::arith::numtheory::{is_power_of, root_order};
use crate::character::{decompose, ClassFunction, LinearCharacter};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, MarkedSubgroup};

/// `Ind_H^X λ` for a linear `λ` of `H ≤ X ≤ G`, with basis the left cosets of
/// `H` in `X` (the coset `H` itself represented by the identity, first).
#[derive(Clone, Debug)]
pub struct MonomialModule {
    pub ring: LocalRing,
    pub label: String,
    pub over: String,
    pub subgroup: String,
    pub lambda: LinearCharacter,
    pub reps: Vec<usize>,
    coset_of: Vec<usize>,
    h_member: Vec<bool>,
    over_gens: Vec<usize>,
    step: u64,
}

/// A monomial matrix: basis vector `i` goes to `ζ^{exps[i]} e_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub perm: Vec<usize>,
    pub exps: Vec<u64>,
}

pub fn induced_lattice(g: &FiniteGroup, h: &MarkedSubgroup, lambda: &LinearCharacter, ring: &LocalRing) -> Result<MonomialModule> {
    induced_lattice_within(g, &g.whole(), h, lambda, ring)
}

pub fn induced_lattice_within(
    g: &FiniteGroup,
    over: &MarkedSubgroup,
    h: &MarkedSubgroup,
    lambda: &LinearCharacter,
    ring: &LocalRing,
) -> Result<MonomialModule> {
    if ring.conductor() % lambda.m as u64 != 0 {
        return Err(Error::InvalidInput(format!(
            "values of {} are not roots of unity in R_N (conductor {})",
            lambda.label,
            ring.conductor()
        )));
    }
    if h.elements.iter().any(|&x| !over.contains(x)) {
        return Err(Error::InvalidInput(format!("{} is not contained in {}", h.name, over.name)));
    }
    let n = g.order();
    let mut h_member = vec![false; n];
    for &x in &h.elements {
        h_member[x] = true;
    }
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = vec![g.identity()];
    for &x in &h.elements {
        coset_of[x] = 0;
    }
    for &y in &over.elements {
        if coset_of[y] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(y);
        for &x in &h.elements {
            coset_of[g.mul(y, x)] = id;
        }
    }
    let module = MonomialModule {
        ring: ring.clone(),
        label: format!("Ind_{}^{}({})", h.name, over.name, lambda.label),
        over: over.name.clone(),
        subgroup: h.name.clone(),
        lambda: lambda.clone(),
        reps,
        coset_of,
        h_member,
        over_gens: over.generators.clone(),
        step: ring.conductor() / lambda.m as u64,
    };
    module.verify(g)?;
    Ok(module)
}

impl MonomialModule {
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn generators(&self) -> &[usize] {
        &self.over_gens
    }

    /// `g·e_i = λ(h) e_j` where `g g_i = g_j h`.
    pub fn monomial(&self, g: &FiniteGroup, x: usize) -> Monomial {
        let n = self.rank();
        let mut perm = Vec::with_capacity(n);
        let mut exps = Vec::with_capacity(n);
        for &gi in &self.reps {
            let y = g.mul(x, gi);
            let j = self.coset_of[y];
            assert!(j != usize::MAX, "element outside the acting group");
            let h = g.mul(g.inv(self.reps[j]), y);
            debug_assert!(self.h_member[h]);
            perm.push(j);
            exps.push(self.lambda.exp(h).expect("member") as u64 * self.step);
        }
        Monomial { perm, exps }
    }

    pub fn apply(&self, mono: &Monomial, v: &[RElem]) -> Vec<RElem> {
        let ring = &self.ring;
        let mut out = vec![ring.zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            if ring.is_zero(&x.0) {
                continue;
            }
            out[mono.perm[i]] = if mono.exps[i] == 0 {
                x.clone()
            } else {
                ring.mul(x, ring.root_ref(mono.exps[i]))
            };
        }
        out
    }

    pub fn act(&self, g: &FiniteGroup, x: usize, v: &[RElem]) -> Vec<RElem> {
        self.apply(&self.monomial(g, x), v)
    }

    /// Exact trace as a sum of roots of unity of order dividing `λ.m`.
    pub fn trace_sum(&self, g: &FiniteGroup, x: usize) -> RootSum {
        let mono = self.monomial(g, x);
        let mut s = RootSum::new();
        for (i, &j) in mono.perm.iter().enumerate() {
            if i == j {
                s.add_term((mono.exps[i] / self.step) as u32, 1);
            }
        }
        s
    }

    /// Character of the module, as a class function of `G` (only meaningful
    /// when the module is induced to all of `G`).
    pub fn character(&self, g: &FiniteGroup) -> ClassFunction {
        let sums = (0..g.num_classes()).map(|k| self.trace_sum(g, g.class_rep(k))).collect();
        ClassFunction::from_sums(
            self.lambda.m,
            sums,
            crate::character::CharKind::Induced {
                from: self.subgroup.clone(),
                character: self.lambda.label.clone(),
            },
            self.label.clone(),
        )
    }

    /// Generator actions are monomial and invertible, and each generator
    /// matrix has the order of the generator.
    pub fn verify(&self, g: &FiniteGroup) -> Result<()> {
        let n = self.rank();
        for &s in &self.over_gens {
            let m = self.monomial(g, s);
            let mut seen = vec![false; n];
            for &j in &m.perm {
                if seen[j] {
                    return Err(Error::Internal(format!("{}: generator action not invertible", self.label)));
                }
                seen[j] = true;
            }
            // ρ(s)^{ord s} = 1 on every basis vector
            let ord = g.element_order(s);
            let c = self.ring.conductor();
            for i in 0..n {
                let (mut j, mut e) = (i, 0u64);
                for _ in 0..ord {
                    e = (e + m.exps[j]) % c;
                    j = m.perm[j];
                }
                if j != i || e != 0 {
                    return Err(Error::Internal(format!("{}: relation s^{ord} = 1 fails", self.label)));
                }
            }
        }
        Ok(())
    }
}

fn row_vec(m: &RMatrix, i: usize) -> Vec<RElem> {
    (0..m.cols()).map(|j| m.get(i, j)).collect()
}

/// A free direct summand of a monomial module, with a basis whose restriction
/// to the `pivots` columns is the identity (so coordinates are read off).
#[derive(Clone, Debug)]
pub struct Lattice {
    pub module: Arc<MonomialModule>,
    pub label: String,
    pub basis: RMatrix,
    pub pivots: Vec<usize>,
}

impl Lattice {
    pub fn full(module: Arc<MonomialModule>) -> Lattice {
        let n = module.rank();
        Lattice {
            label: module.label.clone(),
            basis: RMatrix::identity(&module.ring, n),
            pivots: (0..n).collect(),
            module,
        }
    }

    /// From rows spanning a direct summand; fails unless every Howell pivot
    /// is a unit.
    pub fn from_rows(module: Arc<MonomialModule>, label: impl Into<String>, rows: &RMatrix) -> Result<Lattice> {
        let pe = rows.pivoted_echelon();
        if pe.torsion_rank() > 0 {
            return Err(Error::Precision(format!(
                "span has {} summands with torsion; not a free direct summand",
                pe.torsion_rank()
            )));
        }
        let pivots: Vec<usize> = pe.pivots.iter().map(|&(c, _)| c).collect();
        let basis = pe.h;
        for (i, &c) in pivots.iter().enumerate() {
            for (k, _) in pivots.iter().enumerate() {
                let want = if i == k { module.ring.one() } else { module.ring.zero() };
                if basis.get(k, c) != want {
                    return Err(Error::Internal("Howell basis is not unitriangular on pivots".into()));
                }
            }
        }
        Ok(Lattice {
            module,
            label: label.into(),
            basis,
            pivots,
        })
    }

    pub fn ring(&self) -> &LocalRing {
        &self.module.ring
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<RElem> {
        row_vec(&self.basis, i)
    }

    pub fn coords(&self, v: &[RElem]) -> Vec<RElem> {
        self.pivots.iter().map(|&c| v[c].clone()).collect()
    }

    pub fn embed(&self, x: &[RElem]) -> Vec<RElem> {
        let ring = self.ring();
        let n = self.module.rank();
        let mut out = vec![ring.zero(); n];
        for (i, c) in x.iter().enumerate() {
            if ring.is_zero(&c.0) {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.basis.entry(i, j);
                if !ring.is_zero(b) {
                    ring.mul_add_assign(&mut o.0, &c.0, b);
                }
            }
        }
        out
    }

    /// Whether an ambient vector lies in the lattice.
    pub fn contains(&self, v: &[RElem]) -> bool {
        self.embed(&self.coords(v)) == v
    }

    /// Sublattice spanned by rows given in this lattice's coordinates.
    pub fn sublattice(&self, label: impl Into<String>, rows: &RMatrix) -> Result<Lattice> {
        let amb = rows.mul(&self.basis);
        Lattice::from_rows(self.module.clone(), label, &amb)
    }

    /// Matrix of `g` in the row convention: row `i` is the coordinate vector
    /// of `g·b_i`.
    pub fn action_matrix(&self, g: &FiniteGroup, x: usize) -> RMatrix {
        let mono = self.module.monomial(g, x);
        let r = self.rank();
        let mut out = RMatrix::zeros(self.ring(), r, r);
        for i in 0..r {
            let img = self.module.apply(&mono, &self.basis_vector(i));
            for (j, &c) in self.pivots.iter().enumerate() {
                out.set(i, j, &img[c]);
            }
        }
        out
    }

    pub fn trace(&self, g: &FiniteGroup, x: usize) -> RElem {
        let ring = self.ring();
        let mono = self.module.monomial(g, x);
        let mut inv = vec![0usize; mono.perm.len()];
        for (i, &j) in mono.perm.iter().enumerate() {
            inv[j] = i;
        }
        let mut t = ring.zero();
        for (i, &c) in self.pivots.iter().enumerate() {
            let src = inv[c];
            let b = self.basis.get(i, src);
            if ring.is_zero(&b.0) {
                continue;
            }
            let v = ring.mul(&b, ring.root_ref(mono.exps[src]));
            ring.add_assign(&mut t.0, &v.0);
        }
        t
    }
}

/// `e·M` for a central element given by per-class coefficients in `R_N`.
#[derive(Clone, Debug)]
pub struct CutLattice {
    pub lattice: Lattice,
    /// `e²·e₁ = e·e₁`, which with centrality gives `e(1 − e) = 0`.
    pub idempotent_residual_zero: bool,
    /// `e` acts as the identity on every basis vector of the cut.
    pub identity_on_cut: bool,
}

/// Assemble `σ(e)` from `u = e·e₁` (rows `g_i·u`), saturate, and check the
/// projector identities.
pub fn apply_idempotent(g: &FiniteGroup, module: Arc<MonomialModule>, coeffs: &[RElem], label: &str) -> Result<CutLattice> {
    let ring = module.ring.clone();
    let n = module.rank();
    let e_vec = |v: &[RElem]| -> Vec<RElem> { apply_central(g, &module, coeffs, v) };
    let mut e1 = vec![ring.zero(); n];
    e1[0] = ring.one();
    let u = e_vec(&e1);
    let mut rows = RMatrix::zeros(&ring, n, n);
    for (i, &gi) in module.reps.iter().enumerate() {
        let r = module.act(g, gi, &u);
        for (j, x) in r.iter().enumerate() {
            rows.set(i, j, x);
        }
    }
    let idempotent_residual_zero = e_vec(&u) == u;
    let sat = rows.saturate();
    let lattice = if sat.rows() == 0 {
        Lattice {
            module: module.clone(),
            label: label.to_string(),
            basis: RMatrix::zeros(&ring, 0, n),
            pivots: Vec::new(),
        }
    } else {
        Lattice::from_rows(module.clone(), label, &sat)?
    };
    let identity_on_cut = (0..lattice.rank()).all(|i| {
        let b = lattice.basis_vector(i);
        e_vec(&b) == b
    });
    Ok(CutLattice {
        lattice,
        idempotent_residual_zero,
        identity_on_cut,
    })
}

/// `e·v = Σ_g c_{[g]} g·v`.
pub fn apply_central(g: &FiniteGroup, module: &MonomialModule, coeffs: &[RElem], v: &[RElem]) -> Vec<RElem> {
    let ring = &module.ring;
    let n = module.rank();
    let mut out = vec![ring.zero(); n];
    let support: Vec<usize> = (0..n).filter(|&i| !ring.is_zero(&v[i].0)).collect();
    for x in 0..g.order() {
        let c = &coeffs[g.class_of(x)];
        if ring.is_zero(&c.0) {
            continue;
        }
        for &i in &support {
            let y = g.mul(x, module.reps[i]);
            let j = module.coset_of[y];
            let h = g.mul(g.inv(module.reps[j]), y);
            let k = module.lambda.exp(h).expect("member") as u64 * module.step;
            let t = ring.mul(&ring.mul(c, &v[i]), ring.root_ref(k));
            ring.add_assign(&mut out[j].0, &t.0);
        }
    }
    out
}

/// `Hom_G(Ind_H λ, L)` through Frobenius reciprocity: vectors `w ∈ L` with
/// `h·w = λ(h) w` for the generators of `H`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    /// Howell basis of the solution module, in target coordinates.
    pub basis: RMatrix,
    pub free_rank: usize,
    pub torsion: usize,
}

impl HomSpace {
    pub fn free_basis(&self) -> Vec<Vec<RElem>> {
        (0..self.basis.rows())
            .filter(|&i| {
                let r = self.basis.row_matrix(i);
                r.min_valuation() == Some(0)
            })
            .map(|i| row_vec(&self.basis, i))
            .collect()
    }
}

pub fn hom_from_induced(g: &FiniteGroup, source: &MonomialModule, target: &Lattice) -> Result<HomSpace> {
    let ring = target.ring().clone();
    let r = target.rank();
    let h = g.subgroup(&source.subgroup);
    if r == 0 {
        return Ok(HomSpace {
            basis: RMatrix::zeros(&ring, 0, 0),
            free_rank: 0,
            torsion: 0,
        });
    }
    let mut blocks: Option<RMatrix> = None;
    for &s in &h.generators {
        let mut a = target.action_matrix(g, s);
        let lam = ring.root(source.lambda.exp(s).expect("generator in H") as u64 * source.step);
        for i in 0..r {
            let d = ring.sub(&a.get(i, i), &lam);
            a.set(i, i, &d);
        }
        blocks = Some(match blocks {
            None => a,
            Some(b) => b.hstack(&a),
        });
    }
    let sys = blocks.unwrap_or_else(|| RMatrix::zeros(&ring, r, 1));
    let pe = sys.kernel().pivoted_echelon();
    Ok(HomSpace {
        free_rank: pe.free_rank(),
        torsion: pe.torsion_rank(),
        basis: pe.h,
    })
}

/// Matrix (source coordinates → target coordinates) of the map
/// `g_i H ⊗ 1 ↦ g_i·w` restricted to a sublattice of the induced module.
pub fn map_from_vector(g: &FiniteGroup, source: &Lattice, target: &Lattice, w: &[RElem]) -> RMatrix {
    let ring = target.ring();
    let w_amb = target.embed(w);
    let module = &source.module;
    let n = module.rank();
    let mut psi = RMatrix::zeros(ring, n, target.rank());
    for (i, &gi) in module.reps.iter().enumerate() {
        let img = target.coords(&target.module.act(g, gi, &w_amb));
        for (j, x) in img.iter().enumerate() {
            psi.set(i, j, x);
        }
    }
    source.basis.mul(&psi)
}

/// `σ_M(s)·F = F·σ_{M'}(s)` for the given elements.
pub fn equivariance_residual_zero(g: &FiniteGroup, source: &Lattice, target: &Lattice, f: &RMatrix, gens: &[usize]) -> bool {
    gens.iter().all(|&s| {
        let lhs = source.action_matrix(g, s).mul(f);
        let rhs = f.mul(&target.action_matrix(g, s));
        lhs == rhs
    })
}

/// Direct solution of `σ_M(s) F = F σ_{M'}(s)` over the generators, as a list
/// of `r × r'` matrices (free part of the Howell basis) and the free rank.
pub fn hom_space_direct(g: &FiniteGroup, source: &Lattice, target: &Lattice, gens: &[usize]) -> (Vec<RMatrix>, usize) {
    let pairs: Vec<(RMatrix, RMatrix)> = gens
        .iter()
        .map(|&s| (source.action_matrix(g, s), target.action_matrix(g, s)))
        .collect();
    intertwiners(source.ring(), source.rank(), target.rank(), &pairs)
}

/// All `F` (`r × r'`) with `A_i F = F B_i` for every pair `(A_i, B_i)`.
pub fn intertwiners(ring: &LocalRing, r: usize, rp: usize, pairs: &[(RMatrix, RMatrix)]) -> (Vec<RMatrix>, usize) {
    let nv = r * rp;
    let mut sys = RMatrix::zeros(ring, nv, nv * pairs.len().max(1));
    for (gi, (a, b)) in pairs.iter().enumerate() {
        let off = gi * nv;
        // (AF)[i][c] = Σ_a A[i][a] F[a][c];  (FB)[i][c] = Σ_b F[i][b] B[b][c]
        for i in 0..r {
            for c in 0..rp {
                let col = off + i * rp + c;
                for aa in 0..r {
                    let x = a.get(i, aa);
                    if !ring.is_zero(&x.0) {
                        let row = aa * rp + c;
                        let cur = sys.get(row, col);
                        sys.set(row, col, &ring.add(&cur, &x));
                    }
                }
                for bb in 0..rp {
                    let x = b.get(bb, c);
                    if !ring.is_zero(&x.0) {
                        let row = i * rp + bb;
                        let cur = sys.get(row, col);
                        sys.set(row, col, &ring.sub(&cur, &x));
                    }
                }
            }
        }
    }
    let pe = sys.kernel().pivoted_echelon();
    let free = pe.free_rank();
    let mats = (0..pe.h.rows())
        .filter(|&i| pe.pivots[i].1 == 0)
        .map(|i| {
            let mut f = RMatrix::zeros(ring, r, rp);
            for a in 0..r {
                for c in 0..rp {
                    f.set(a, c, &pe.h.get(i, a * rp + c));
                }
            }
            f
        })
        .collect();
    (mats, free)
}

/// First pair `(i, j)` of non-commuting endomorphisms, or `None`.
pub fn commutativity_check(maps: &[RMatrix]) -> Option<(usize, usize)> {
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            if maps[i].mul(&maps[j]) != maps[j].mul(&maps[i]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Endomorphisms of `Ind_H λ` (or of a cut of it), through Frobenius reciprocity.
pub fn endomorphisms(g: &FiniteGroup, lattice: &Lattice) -> Result<Vec<RMatrix>> {
    let hom = hom_from_induced(g, &lattice.module, lattice)?;
    Ok(hom
        .free_basis()
        .iter()
        .map(|w| map_from_vector(g, lattice, lattice, w))
        .collect())
}

#[derive(Clone, Debug)]
pub struct RatioCheck {
    pub representative: usize,
    pub intersection_order: usize,
    /// Order of `ψ⁻¹ψ^s` on `H_s = H ∩ sHs⁻¹`.
    pub ratio_order: u64,
    pub nontrivial_p_power: bool,
}

#[derive(Clone, Debug)]
pub struct HypothesisCheck {
    /// `⟨Ind ψ, Ind ψ⟩`, from the double cosets.
    pub inner_product: i64,
    pub constituents: usize,
    pub multiplicity_sum: i64,
    pub multiplicity_free: bool,
    pub ratios: Vec<RatioCheck>,
    pub offending: Option<usize>,
    pub passed: bool,
}

/// Multiplicity-freeness of `Ind_H^G ψ` and absence of nontrivial `p`-power
/// ratio characters `ψ⁻¹ψ^s` on `H_s`. `table` must span the constituents.
pub fn hypothesis_check(
    g: &FiniteGroup,
    h: &MarkedSubgroup,
    psi: &LinearCharacter,
    table: &[ClassFunction],
    p: u64,
) -> Result<HypothesisCheck> {
    let dc = g.double_cosets(h, h);
    let m = psi.m;
    let mut ratios = Vec::with_capacity(dc.representatives.len());
    let mut inner = 0i64;
    for (&s, inter) in dc.representatives.iter().zip(&dc.intersections) {
        let sinv = g.inv(s);
        let mut order = 1u64;
        for &x in inter {
            let a = psi.exp(x).expect("member");
            let b = psi.exp(g.mul(g.mul(sinv, x), s)).expect("conjugate in H");
            let k = (b + m - a) % m;
            order = crate::arith::numtheory::lcm(order, root_order(k as u64, m as u64));
        }
        if order == 1 {
            inner += 1;
        }
        ratios.push(RatioCheck {
            representative: s,
            intersection_order: inter.len(),
            ratio_order: order,
            nontrivial_p_power: order > 1 && is_power_of(order, p),
        });
    }
    let ind = crate::character::induced_character(g, h, psi);
    let (mults, exact) = decompose(g, table, &ind)?;
    if !exact {
        return Err(Error::InvalidInput(format!(
            "the supplied characters do not span the constituents of {}",
            ind.label
        )));
    }
    let constituents = mults.iter().filter(|&&k| k != 0).count();
    let multiplicity_sum: i64 = mults.iter().sum();
    let sum_sq: i64 = mults.iter().map(|k| k * k).sum();
    if sum_sq != inner {
        return Err(Error::Internal(format!(
            "Mackey inner product {inner} disagrees with Σ mult² = {sum_sq}"
        )));
    }
    let multiplicity_free = inner == constituents as i64 && multiplicity_sum == sum_sq;
    let offending = ratios.iter().find(|r| r.nontrivial_p_power).map(|r| r.representative);
    Ok(HypothesisCheck {
        inner_product: inner,
        constituents,
        multiplicity_sum,
        multiplicity_free,
        passed: multiplicity_free && offending.is_none(),
        ratios,
        offending,
    })
}

/// A surjection `source → target` built from a Hom vector.
#[derive(Clone, Debug)]
pub struct Surjection {
    pub vector: Vec<RElem>,
    /// Coefficients with respect to the free Hom basis (residue indices).
    pub coefficients: Vec<u64>,
    pub matrix: RMatrix,
    pub method: String,
    pub attempts: usize,
}

const ENUMERATION_BOUND: u64 = 729;
const RANDOM_ATTEMPTS: usize = 512;

/// Search Hom-basis combinations: projective points over `F_p` in canonical
/// order, then seeded random points over `k`. The first `skip` successes are
/// passed over (used to compare kernels of distinct surjections).
pub fn find_surjection(
    g: &FiniteGroup,
    source: &Lattice,
    target: &Lattice,
    hom: &HomSpace,
    seed: u64,
    skip: usize,
) -> Result<Option<Surjection>> {
    let mut skip = skip;
    let ring = target.ring().clone();
    if target.rank() == 0 {
        return Ok(Some(Surjection {
            vector: Vec::new(),
            coefficients: Vec::new(),
            matrix: RMatrix::zeros(&ring, source.rank(), 0),
            method: "zero".into(),
            attempts: 0,
        }));
    }
    let basis = hom.free_basis();
    let k = basis.len();
    if k == 0 {
        return Ok(None);
    }
    let maps: Vec<RMatrix> = basis.iter().map(|w| map_from_vector(g, source, target, w)).collect();
    let p = ring.p();
    let combine = |coef: &[u64]| -> (Vec<RElem>, RMatrix) {
        let mut w = vec![ring.zero(); target.rank()];
        let mut f = RMatrix::zeros(&ring, source.rank(), target.rank());
        for (i, &c) in coef.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let cr = ring.residue_rep(c);
            for (x, b) in w.iter_mut().zip(&basis[i]) {
                ring.mul_add_assign(&mut x.0, &cr.0, &b.0);
            }
            f = f.add(&maps[i].scale(&cr));
        }
        (w, f)
    };
    let mut attempts = 0;
    let total = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total <= ENUMERATION_BOUND as u128 {
        for code in 1..total as u64 {
            let mut coef = vec![0u64; k];
            let mut c = code;
            for x in coef.iter_mut().rev() {
                *x = c % p;
                c /= p;
            }
            // projective representative: first nonzero coordinate equal to 1
            if coef.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            attempts += 1;
            let (w, f) = combine(&coef);
            if f.rank_mod_pi() == target.rank() {
                if skip > 0 {
                    skip -= 1;
                    continue;
                }
                return Ok(Some(Surjection {
                    vector: w,
                    coefficients: coef,
                    matrix: f,
                    method: "enumeration over F_p".into(),
                    attempts,
                }));
            }
        }
    }
    let q = ring.residue_field_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let coef: Vec<u64> = (0..k).map(|_| rng.gen_range(0..q)).collect();
        attempts += 1;
        let (w, f) = combine(&coef);
        if f.rank_mod_pi() == target.rank() {
            if skip > 0 {
                skip -= 1;
                continue;
            }
            return Ok(Some(Surjection {
                vector: w,
                coefficients: coef,
                matrix: f,
                method: format!("random over k (seed {seed})"),
                attempts,
            }));
        }
    }
    Ok(None)
}

/// A certified `0 → K → M → M' → 0`.
#[derive(Clone, Debug)]
pub struct SequenceData {
    pub kernel: Lattice,
    pub ranks: (usize, usize, usize),
    pub kernel_free: bool,
    pub equivariance_residual_zero: bool,
    pub kernel_maps_to_zero: bool,
    pub surjective: bool,
    /// Per class: trace on the kernel and the expected value.
    pub fingerprint: Vec<(usize, RElem, RElem)>,
    pub fingerprint_matches: usize,
}

impl SequenceData {
    pub fn exact(&self) -> bool {
        self.kernel_free
            && self.equivariance_residual_zero
            && self.kernel_maps_to_zero
            && self.surjective
            && self.ranks.1 == self.ranks.0 + self.ranks.2
    }

    pub fn fingerprint_ok(&self) -> bool {
        self.fingerprint_matches == self.fingerprint.len()
    }
}

/// Kernel of the surjection and its trace fingerprint against `expected`
/// (values per class in `R_N`).
pub fn certify_sequence(
    g: &FiniteGroup,
    source: &Lattice,
    target: &Lattice,
    surj: &Surjection,
    expected: &[RElem],
) -> Result<SequenceData> {
    let f = &surj.matrix;
    let surjective = f.rank_mod_pi() == target.rank();
    let ker = f.kernel().pivoted_echelon();
    let kernel_free = ker.torsion_rank() == 0;
    let kernel = source.sublattice(format!("ker({})", source.label), &ker.free_rows())?;
    let kernel_maps_to_zero = ker.h.mul(f).is_zero();
    let mut gens: Vec<usize> = source.module.generators().to_vec();
    gens.sort_unstable();
    let equivariance_residual_zero = equivariance_residual_zero(g, source, target, f, &gens);
    let fingerprint: Vec<(usize, RElem, RElem)> = (0..g.num_classes())
        .map(|k| (k, kernel.trace(g, g.class_rep(k)), expected[k].clone()))
        .collect();
    let fingerprint_matches = fingerprint.iter().filter(|(_, a, b)| a == b).count();
    Ok(SequenceData {
        ranks: (kernel.rank(), source.rank(), target.rank()),
        kernel,
        kernel_free,
        equivariance_residual_zero,
        kernel_maps_to_zero,
        surjective,
        fingerprint,
        fingerprint_matches,
    })
}

/// `Σ_{χ ∈ B} ⟨χ, Ind⟩ χ(1)`, the rank of the cut predicted by characters.
pub fn expected_cut_rank(g: &FiniteGroup, members: &[ClassFunction], ind: &ClassFunction) -> Result<i64> {
    let mut total = 0;
    for chi in members {
        total += chi.inner_int(ind, g)? * chi.degree;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::local::build_local_ring;
    use crate::character::{induced_character, torus_character, zu_character};
    use crate::group::gl2_with_torus;

    #[test]
    fn induced_module_character_matches_induction() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 4).unwrap();
        let theta = torus_character(&g, 3, m).unwrap();
        let psi = zu_character(&g, &theta).unwrap();
        let zu = g.subgroup("ZU");
        let module = induced_lattice(&g, zu, &psi, &ring).unwrap();
        assert_eq!(module.rank(), 24);
        assert_eq!(module.character(&g).values, induced_character(&g, zu, &psi).values);
        let full = Lattice::full(Arc::new(module));
        assert_eq!(full.trace(&g, g.identity()), ring.from_int(24));
    }

    #[test]
    fn identity_idempotent_keeps_everything() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 4).unwrap();
        let theta = torus_character(&g, 3, m).unwrap();
        let module = Arc::new(induced_lattice(&g, g.subgroup("T"), &theta, &ring).unwrap());
        let mut coeffs = vec![ring.zero(); g.num_classes()];
        coeffs[0] = ring.one();
        let cut = apply_idempotent(&g, module, &coeffs, "1·M").unwrap();
        assert_eq!(cut.lattice.rank(), 20);
        assert!(cut.idempotent_residual_zero && cut.identity_on_cut);
    }

    #[test]
    fn engineered_ratio_of_order_three_fails() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let table = crate::character::full_irreducible_table(&g, m).unwrap();
        let good = torus_character(&g, 3, m).unwrap();
        let hc = hypothesis_check(&g, g.subgroup("T"), &good, &table, 3).unwrap();
        assert!(hc.passed, "{hc:?}");
        let bad = torus_character(&g, 2, m).unwrap();
        let hc = hypothesis_check(&g, g.subgroup("T"), &bad, &table, 3).unwrap();
        assert!(!hc.passed);
        let w = hc.offending.unwrap();
        assert!(g.subgroup("NT").contains(w) && !g.subgroup("T").contains(w));
    }
}

#[cfg(test)]
mod sequence_tests {
    use super::*;
    use crate::arith::local::build_local_ring;
    use crate::block::CentralElement;
    use crate::character::{cuspidal_character, induced_character, torus_character, zu_character};
    use crate::group::gl2_with_torus;

    #[test]
    fn gl2_f5_sequence() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 6).unwrap();
        let theta = torus_character(&g, 3, m).unwrap();
        let members: Vec<ClassFunction> = (0..3)
            .map(|k| cuspidal_character(&g, &torus_character(&g, 3 + 8 * k, m).unwrap()).unwrap().character)
            .collect();
        let mut e = CentralElement::idempotent(&g, &members[0]);
        for c in &members[1..] {
            e = e.add(&CentralElement::idempotent(&g, c));
        }
        let coeffs = e.reduce(&ring).unwrap();
        let psi = zu_character(&g, &theta).unwrap();
        let zu = g.subgroup("ZU");
        let t = g.subgroup("T");
        let mzu = Arc::new(induced_lattice(&g, zu, &psi, &ring).unwrap());
        let mt = Arc::new(induced_lattice(&g, t, &theta, &ring).unwrap());
        let src = apply_idempotent(&g, mzu, &coeffs, "e·Ind_ZU").unwrap();
        let tgt = apply_idempotent(&g, mt, &coeffs, "e·Ind_T").unwrap();
        assert!(src.idempotent_residual_zero && src.identity_on_cut);
        assert_eq!(src.lattice.rank(), 12);
        assert_eq!(tgt.lattice.rank(), 8);
        assert_eq!(expected_cut_rank(&g, &members, &induced_character(&g, zu, &psi)).unwrap(), 12);
        let hom = hom_from_induced(&g, &src.lattice.module, &tgt.lattice).unwrap();
        assert_eq!(hom.free_rank, 2, "{hom:?}");
        let surj = find_surjection(&g, &src.lattice, &tgt.lattice, &hom, 7, 0).unwrap().expect("surjection");
        let cusp = cuspidal_character(&g, &theta).unwrap();
        let seq = certify_sequence(&g, &src.lattice, &tgt.lattice, &surj, &cusp.character.reduce(&ring)).unwrap();
        assert_eq!(seq.ranks, (4, 12, 8));
        assert!(seq.exact(), "{:?}", surj.method);
        assert!(seq.fingerprint_ok());

        let ends = endomorphisms(&g, &tgt.lattice).unwrap();
        assert_eq!(ends.len(), 2);
        assert!(commutativity_check(&ends).is_none());
        let (direct, free) = hom_space_direct(&g, &tgt.lattice, &tgt.lattice, g.generators());
        assert_eq!(free, 2);
        assert_eq!(direct.len(), 2);
    }
}
