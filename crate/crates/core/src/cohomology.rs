//! Tate cohomology of a cyclic `p`-group acting on a lattice, Mackey
//! restriction of induced modules, the dimension shift along a certified
//! sequence, and the obstruction tables.

use crate::arith::linalg::RMatrix;
use crate::arith::local::{LocalRing, RElem};
use crate::arith::numtheory::root_order;
use crate::character::{torus_character, LinearCharacter};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::{Lattice, MonomialModule};

/// A generator acting on a free `R_N`-module (row convention `v ↦ v·σ`).
#[derive(Clone, Debug)]
pub struct CyclicAction {
    pub label: String,
    pub generator: RMatrix,
    pub order: u64,
}

impl CyclicAction {
    pub fn new(label: impl Into<String>, generator: RMatrix, order: u64) -> Result<Self> {
        let a = CyclicAction {
            label: label.into(),
            generator,
            order,
        };
        if a.power(order) != RMatrix::identity(a.generator.ring(), a.generator.rows()) {
            return Err(Error::InvalidInput(format!("{}: generator^{order} ≠ 1", a.label)));
        }
        Ok(a)
    }

    /// Rank-one module on which the generator acts by `ζ^k`.
    pub fn rank_one(ring: &LocalRing, k: u64, order: u64) -> Result<Self> {
        let m = RMatrix::from_elems(ring, 1, 1, &[ring.root(k)]);
        Self::new(format!("ζ^{k}"), m, order)
    }

    pub fn rank(&self) -> usize {
        self.generator.rows()
    }

    pub fn power(&self, k: u64) -> RMatrix {
        let ring = self.generator.ring();
        let mut acc = RMatrix::identity(ring, self.rank());
        for _ in 0..k {
            acc = acc.mul(&self.generator);
        }
        acc
    }

    pub fn norm(&self) -> RMatrix {
        let ring = self.generator.ring();
        let mut acc = RMatrix::zeros(ring, self.rank(), self.rank());
        let mut cur = RMatrix::identity(ring, self.rank());
        for _ in 0..self.order {
            acc = acc.add(&cur);
            cur = cur.mul(&self.generator);
        }
        acc
    }

    pub fn augmentation(&self) -> RMatrix {
        self.generator.sub(&RMatrix::identity(self.generator.ring(), self.rank()))
    }

    pub fn to_ring(&self, target: &LocalRing) -> CyclicAction {
        CyclicAction {
            label: self.label.clone(),
            generator: self.generator.to_ring(target),
            order: self.order,
        }
    }
}

/// One Tate group as a finite `O`-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateGroup {
    /// Minimal number of generators, i.e. `dim_k` of the group modulo `π`.
    pub dimension: usize,
    /// Composition length (`dim_k` of the whole group).
    pub length: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub module: String,
    /// Degrees `-1, 0, 1, 2`.
    pub degrees: Vec<(i32, TateGroup)>,
    pub norm_rank: usize,
    pub augmentation_rank: usize,
    pub precision: u32,
}

impl CohomologyReport {
    pub fn dimension(&self, n: i32) -> usize {
        let d = n.rem_euclid(2);
        self.degrees
            .iter()
            .find(|(k, _)| k.rem_euclid(2) == d)
            .map(|(_, t)| t.dimension)
            .expect("degrees cover both parities")
    }

    pub fn periodic(&self) -> bool {
        self.degrees
            .iter()
            .all(|(n, t)| self.degrees.iter().filter(|(k, _)| (k - n) % 2 == 0).all(|(_, u)| u == t))
    }

    pub fn is_trivial(&self) -> bool {
        self.degrees.iter().all(|(_, t)| t.dimension == 0)
    }
}

/// `ker(a) / rowspan(b)` for lattices: the free part of the `R_N`-kernel of
/// `a` is the lattice kernel modulo a bounded error, and the quotient is read
/// off from the pivoted echelon form of `b` in kernel coordinates.
fn lattice_quotient(a: &RMatrix, b: &RMatrix) -> Result<TateGroup> {
    let ring = a.ring();
    let n = ring.precision() as u64;
    let cols = a.kernel().pivoted_echelon().free_columns();
    let r0 = cols.len();
    if r0 == 0 {
        return Ok(TateGroup { dimension: 0, length: 0 });
    }
    let hx = b.select_cols(&cols).pivoted_echelon();
    if hx.pivots.len() < r0 {
        return Err(Error::Precision(format!(
            "image of rank {} inside a kernel of rank {r0}: quotient not finite",
            hx.pivots.len()
        )));
    }
    let length: u64 = hx.pivots.iter().map(|&(_, v)| v as u64).sum();
    if hx.pivots.iter().any(|&(_, v)| v as u64 >= n) {
        return Err(Error::Precision("quotient exponent reaches the working precision".into()));
    }
    Ok(TateGroup {
        dimension: r0 - hx.free_rank(),
        length,
    })
}

fn tate_at(action: &CyclicAction) -> Result<CohomologyReport> {
    let nm = action.norm();
    let aug = action.augmentation();
    let even = lattice_quotient(&aug, &nm)?;
    let odd = lattice_quotient(&nm, &aug)?;
    Ok(CohomologyReport {
        module: action.label.clone(),
        degrees: vec![(-1, odd.clone()), (0, even.clone()), (1, odd), (2, even)],
        norm_rank: nm.rank_mod_pi(),
        augmentation_rank: aug.rank_mod_pi(),
        precision: action.generator.ring().precision(),
    })
}

/// `Ĥⁿ(P, M)` for `n ∈ {-1, 0, 1, 2}` at the working precision. Lattices
/// recomputed at a second precision go through [`tate_cohomology_pair`].
pub fn tate_cohomology(action: &CyclicAction) -> Result<CohomologyReport> {
    tate_at(action)
}

/// `Ĥⁿ` of the same lattice given at two precisions; aborts unless they agree.
pub fn tate_cohomology_pair(lo: &CyclicAction, hi: &CyclicAction) -> Result<CohomologyReport> {
    let a = tate_at(lo)?;
    let b = tate_at(hi)?;
    if a.degrees != b.degrees {
        return Err(Error::Precision(format!(
            "{}: Tate groups change between precision {} and {}",
            lo.label, a.precision, b.precision
        )));
    }
    Ok(a)
}

/// Rank-one module `ζ^k`, checked at the working and at double precision.
pub fn rank_one_cohomology(ring: &LocalRing, k: u64, order: u64) -> Result<CohomologyReport> {
    let hi = ring.with_precision(ring.precision() * 2);
    tate_cohomology_pair(&CyclicAction::rank_one(ring, k, order)?, &CyclicAction::rank_one(&hi, k, order)?)
}

/// Action of the marked generator of `P` on a lattice.
pub fn restrict_to_p(g: &FiniteGroup, lattice: &Lattice) -> Result<CyclicAction> {
    let p = g.subgroup("P");
    let x = p.generators[0];
    CyclicAction::new(
        format!("{}|P", lattice.label),
        lattice.action_matrix(g, x),
        g.element_order(x),
    )
}

/// One summand of `Res_P Ind_H λ`, for `P` of prime order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MackeyPiece {
    /// `Q = P ∩ sHs⁻¹ ≠ 1`: `Ind_Q^P` of the character `y ↦ λ(s⁻¹ys)`, as
    /// the exponent (in the ring conductor) of its value on the generator of
    /// `Q`. By Shapiro its cohomology is that of `Q`.
    Character { representative: usize, exponent: u64, order: u64, intersection: usize },
    /// `P ∩ sHs⁻¹ = 1`: a free `R_N[P]`-module of the given rank over `R_N[P]`.
    Projective { representative: usize, multiplicity: usize },
}

pub fn mackey_restriction(g: &FiniteGroup, module: &MonomialModule) -> Result<Vec<MackeyPiece>> {
    let p = g.subgroup("P");
    let x = p.generators[0];
    let h = g.subgroup(&module.subgroup);
    if module.over != g.whole().name {
        return Err(Error::InvalidInput("Mackey restriction needs a module induced to G".into()));
    }
    let dc = g.double_cosets(p, h);
    let c = module.ring.conductor();
    let step = c / module.lambda.m as u64;
    let mut out = Vec::new();
    for ((&s, &size), inter) in dc.representatives.iter().zip(&dc.sizes).zip(&dc.intersections) {
        if inter.len() == 1 {
            out.push(MackeyPiece::Projective {
                representative: s,
                multiplicity: size / h.order() / p.order(),
            });
        } else {
            // P is cyclic, so Q is generated by x^{|P|/|Q|}
            let xq = g.pow(x, (p.order() / inter.len()) as u64);
            let y = g.mul(g.mul(g.inv(s), xq), s);
            let k = module.lambda.exp(y).expect("conjugate lies in H") as u64 * step;
            out.push(MackeyPiece::Character {
                representative: s,
                exponent: k,
                order: root_order(k, c),
                intersection: inter.len(),
            });
        }
    }
    Ok(out)
}

/// Shapiro/Mackey cross-check: `Ĥⁿ(P, Ind_H λ)` computed on the module equals
/// the sum over the character pieces (projective pieces contribute nothing).
#[derive(Clone, Debug)]
pub struct ShapiroCheck {
    pub direct: CohomologyReport,
    pub from_mackey: Vec<usize>,
    pub agrees: bool,
}

pub fn shapiro_check(g: &FiniteGroup, lattice: &Lattice) -> Result<ShapiroCheck> {
    let pieces = mackey_restriction(g, &lattice.module)?;
    let ring = lattice.ring();
    let direct = tate_cohomology(&restrict_to_p(g, lattice)?)?;
    let mut from_mackey = vec![0usize; 4];
    for piece in &pieces {
        if let MackeyPiece::Character { exponent, intersection, .. } = piece {
            let r = rank_one_cohomology(ring, *exponent, *intersection as u64)?;
            for (i, (_, t)) in r.degrees.iter().enumerate() {
                from_mackey[i] += t.dimension;
            }
        }
    }
    let agrees = direct.degrees.iter().zip(&from_mackey).all(|((_, t), &d)| t.dimension == d);
    Ok(ShapiroCheck {
        direct,
        from_mackey,
        agrees,
    })
}

/// `Ĥⁿ(P, K) = Ĥ^{n-1}(P, M')` with `Ĥ(P, M) = 0` along `0 → K → M → M' → 0`.
#[derive(Clone, Debug)]
pub struct DimensionShift {
    pub kernel: CohomologyReport,
    pub middle: CohomologyReport,
    pub right: CohomologyReport,
    /// `(n, dim Ĥⁿ(K), dim Ĥ^{n-1}(M'))` for `n = 0, 1, 2`.
    pub rows: Vec<(i32, usize, usize)>,
    pub middle_trivial: bool,
    pub shift_holds: bool,
    pub periodic: bool,
}

impl DimensionShift {
    pub fn passed(&self) -> bool {
        self.middle_trivial && self.shift_holds && self.periodic
    }
}

pub fn dimension_shift_check(
    kernel: &CyclicAction,
    middle: &CyclicAction,
    right: &CyclicAction,
) -> Result<DimensionShift> {
    let k = tate_cohomology(kernel)?;
    let m = tate_cohomology(middle)?;
    let r = tate_cohomology(right)?;
    let rows: Vec<(i32, usize, usize)> = (0..=2).map(|n| (n, k.dimension(n), r.dimension(n - 1))).collect();
    Ok(DimensionShift {
        middle_trivial: m.is_trivial(),
        shift_holds: rows.iter().all(|&(_, a, b)| a == b),
        periodic: k.periodic() && m.periodic() && r.periodic(),
        kernel: k,
        middle: m,
        right: r,
        rows,
    })
}

/// `dim_k H¹(P, χ|_P ⊕ χ^w|_P)` from the two rank-one pieces.
pub fn obstruction_dimension(g: &FiniteGroup, chi: &LinearCharacter, ring: &LocalRing) -> Result<usize> {
    let p = g.subgroup("P");
    let x = p.generators[0];
    let l = g.field_size().ok_or_else(|| Error::InvalidInput("needs GL_2".into()))? as i64;
    let step = ring.conductor() / chi.m as u64;
    let mut total = 0;
    for c in [chi.clone(), chi.pow(l)] {
        let k = c.exp(x).expect("P ≤ T") as u64 * step;
        let r = rank_one_cohomology(ring, k, p.order() as u64)?;
        total += r.dimension(1);
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct ObstructionRow {
    /// Exponent of the minimal (prime-to-`p`) lift `θ'`.
    pub minimal_exponent: u64,
    pub order: u64,
    pub minimal: usize,
    /// `(exponent of θ'ξ, dimension)` for the nontrivial `ξ ∈ Ξ`.
    pub twists: Vec<(u64, usize)>,
}

impl ObstructionRow {
    pub fn tag(&self) -> &'static str {
        if self.minimal == 0 && self.twists.iter().all(|&(_, d)| d > 0) {
            "no obstruction to minimal lift; obstructed non-minimal direction"
        } else if self.minimal == 0 {
            "no obstruction to minimal lift"
        } else {
            "obstructed minimal direction"
        }
    }
}

/// One row per Weyl orbit of characters of `T` in general position modulo
/// `π` (residue classes of exponents modulo `|S|`), ordered by the minimal
/// lift's exponent.
pub fn minimal_lift_report(g: &FiniteGroup, ring: &LocalRing, p: u64) -> Result<Vec<ObstructionRow>> {
    let td = g.torus.as_ref().ok_or_else(|| Error::InvalidInput("needs the torus".into()))?;
    let q = td.powers.len() as u64;
    let l = g.field_size().expect("GL2");
    let pa = q / g.subgroup("S").order() as u64;
    let s = q / pa;
    let m = ring.conductor() as u32;
    let mut rows = Vec::new();
    let mut seen = vec![false; s as usize];
    for j in 0..q {
        // minimal lifts: exponents divisible by the p-part
        if j % pa != 0 {
            continue;
        }
        let r = (j % s) as usize;
        if seen[r] {
            continue;
        }
        let rw = (j * l % s) as usize;
        if r == rw {
            continue;
        }
        seen[r] = true;
        seen[rw] = true;
        let theta = torus_character(g, j as i64, m)?;
        let minimal = obstruction_dimension(g, &theta, ring)?;
        let twists = (1..pa)
            .map(|k| {
                let e = (j + k * s) % q;
                let t = torus_character(g, e as i64, m)?;
                Ok((e, obstruction_dimension(g, &t, ring)?))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(ObstructionRow {
            minimal_exponent: j,
            order: q / crate::arith::numtheory::gcd(j, q),
            minimal,
            twists,
        });
    }
    let _ = p;
    Ok(rows)
}

pub fn residues(v: &[RElem], ring: &LocalRing) -> Vec<RElem> {
    v.iter().map(|x| ring.residue(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::local::build_local_ring;
    use crate::group::gl2_with_torus;

    #[test]
    fn trivial_and_twisted_rank_one() {
        let ring = build_local_ring(3, 3, 6).unwrap();
        let t = rank_one_cohomology(&ring, 0, 3).unwrap();
        assert_eq!(t.dimension(1), 0);
        assert_eq!(t.dimension(0), 1);
        assert_eq!(t.dimension(2), 1);
        assert!(t.periodic());
        let z = rank_one_cohomology(&ring, 1, 3).unwrap();
        assert_eq!(z.dimension(1), 1);
        assert_eq!(z.dimension(0), 0);
    }

    #[test]
    fn regular_module_is_acyclic() {
        let ring = build_local_ring(3, 3, 6).unwrap();
        let mut m = RMatrix::zeros(&ring, 3, 3);
        for i in 0..3 {
            m.set(i, (i + 1) % 3, &ring.one());
        }
        let t = tate_cohomology(&CyclicAction::new("R[P]", m, 3).unwrap()).unwrap();
        assert!(t.is_trivial());
    }

    #[test]
    fn obstruction_examples() {
        let g = gl2_with_torus(11, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 4).unwrap();
        let order4 = torus_character(&g, 30, m).unwrap();
        assert_eq!(obstruction_dimension(&g, &order4, &ring).unwrap(), 0);
        let order12 = torus_character(&g, 10, m).unwrap();
        assert_eq!(obstruction_dimension(&g, &order12, &ring).unwrap(), 2);
        let rows = minimal_lift_report(&g, &ring, 3).unwrap();
        assert_eq!(rows.len(), 15);
        assert!(rows.iter().all(|r| r.minimal == 0 && r.twists.iter().all(|&(_, d)| d == 2)));
        let r4 = rows.iter().find(|r| r.order == 4).unwrap();
        assert_eq!(r4.minimal_exponent, 30);
    }
}
