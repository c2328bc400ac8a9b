//! Exact ordinary characters: linear characters of subgroups, induction, the
//! cuspidal characters of `GL_2(F_ℓ)` and its full irreducible table.
//!
//! Values are integer combinations of `m`-th roots of unity ([`RootSum`]) with
//! `m` the exponent of the group; canonical [`CyclotomicNumber`] values are kept
//! alongside.

use std::fmt::Write as _;

use crate::arith::cyclotomic::{CyclotomicNumber, RootAccumulator, RootSum};
use crate::arith::local::LocalRing;
use crate::arith::numtheory::{is_power_of, lcm, root_order, vp};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, MarkedSubgroup};

/// A homomorphism `λ: H → μ_m`, stored as exponents `λ(h) = ζ_m^{exps[i]}` for
/// the sorted elements of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCharacter {
    pub subgroup: String,
    pub elements: Vec<usize>,
    pub exps: Vec<u32>,
    pub m: u32,
    pub label: String,
}

impl LinearCharacter {
    /// Build from a value function, verifying multiplicativity against every
    /// generator of `H`.
    pub fn new(
        g: &FiniteGroup,
        h: &MarkedSubgroup,
        m: u32,
        label: impl Into<String>,
        f: impl Fn(usize) -> u32,
    ) -> Result<Self> {
        let exps: Vec<u32> = h.elements.iter().map(|&x| f(x) % m).collect();
        let chi = LinearCharacter {
            subgroup: h.name.clone(),
            elements: h.elements.clone(),
            exps,
            m,
            label: label.into(),
        };
        for &x in &h.elements {
            for &s in &h.generators {
                let xs = g.mul(x, s);
                let lhs = chi.exp(xs).expect("closed");
                let rhs = (chi.exp(x).expect("member") + chi.exp(s).expect("member")) % m;
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!(
                        "{} is not multiplicative on {}",
                        chi.label, h.name
                    )));
                }
            }
        }
        Ok(chi)
    }

    pub fn trivial(h: &MarkedSubgroup, m: u32) -> Self {
        LinearCharacter {
            subgroup: h.name.clone(),
            elements: h.elements.clone(),
            exps: vec![0; h.elements.len()],
            m,
            label: format!("1_{}", h.name),
        }
    }

    /// Exponent of `λ(x)`, or `None` if `x ∉ H`.
    pub fn exp(&self, x: usize) -> Option<u32> {
        self.elements.binary_search(&x).ok().map(|i| self.exps[i])
    }

    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .fold(1, |acc, &k| lcm(acc, root_order(k as u64, self.m as u64)))
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&k| k == 0)
    }

    pub fn mul(&self, other: &LinearCharacter) -> LinearCharacter {
        assert_eq!(self.elements, other.elements);
        assert_eq!(self.m, other.m);
        LinearCharacter {
            subgroup: self.subgroup.clone(),
            elements: self.elements.clone(),
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| (a + b) % self.m)
                .collect(),
            m: self.m,
            label: format!("{}·{}", self.label, other.label),
        }
    }

    pub fn pow(&self, k: i64) -> LinearCharacter {
        let m = self.m as i64;
        LinearCharacter {
            subgroup: self.subgroup.clone(),
            elements: self.elements.clone(),
            exps: self
                .exps
                .iter()
                .map(|&a| ((a as i64 * k).rem_euclid(m)) as u32)
                .collect(),
            m: self.m,
            label: format!("{}^{}", self.label, k),
        }
    }

    /// Restriction to a subgroup given by sorted elements.
    pub fn restrict(&self, name: &str, elements: &[usize]) -> LinearCharacter {
        LinearCharacter {
            subgroup: name.to_string(),
            elements: elements.to_vec(),
            exps: elements
                .iter()
                .map(|&x| self.exp(x).expect("restriction to a subgroup"))
                .collect(),
            m: self.m,
            label: format!("{}|{}", self.label, name),
        }
    }

    /// `⟨λ, χ|_H⟩_H`.
    pub fn inner_with_restriction(&self, g: &FiniteGroup, chi: &ClassFunction) -> CyclotomicNumber {
        let mut acc = RootAccumulator::new(self.m);
        for (&x, &k) in self.elements.iter().zip(&self.exps) {
            let v = &chi.sums[g.class_of(x)];
            acc.add_sum(&v.conj(self.m), k, 1);
        }
        acc.to_cyclotomic().scale(1, self.elements.len() as i128)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharKind {
    Virtual,
    Irreducible,
    Induced { from: String, character: String },
}

/// A class function of `G` with values in `Z[ζ_m]`.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    pub m: u32,
    pub sums: Vec<RootSum>,
    pub values: Vec<CyclotomicNumber>,
    pub kind: CharKind,
    pub label: String,
    pub degree: i64,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl ClassFunction {
    pub fn from_sums(m: u32, sums: Vec<RootSum>, kind: CharKind, label: impl Into<String>) -> Self {
        let values: Vec<CyclotomicNumber> = sums.iter().map(|s| s.to_cyclotomic(m)).collect();
        let degree = values
            .first()
            .and_then(|v| v.as_integer())
            .expect("degree is a rational integer") as i64;
        ClassFunction {
            m,
            sums,
            values,
            kind,
            label: label.into(),
            degree,
        }
    }

    pub fn trivial(g: &FiniteGroup, m: u32) -> Self {
        ClassFunction::from_sums(m, vec![RootSum::int(1); g.num_classes()], CharKind::Irreducible, "1")
    }

    pub fn value(&self, class: usize) -> &CyclotomicNumber {
        &self.values[class]
    }

    pub fn value_at(&self, g: &FiniteGroup, x: usize) -> &CyclotomicNumber {
        &self.values[g.class_of(x)]
    }

    fn combine(&self, other: &ClassFunction, sign: i64, label: String) -> ClassFunction {
        assert_eq!(self.m, other.m);
        let sums = self
            .sums
            .iter()
            .zip(&other.sums)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.add_assign_scaled(b, sign);
                s
            })
            .collect();
        ClassFunction::from_sums(self.m, sums, CharKind::Virtual, label)
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        self.combine(other, 1, format!("{} + {}", self.label, other.label))
    }

    pub fn sub(&self, other: &ClassFunction) -> ClassFunction {
        self.combine(other, -1, format!("{} - {}", self.label, other.label))
    }

    pub fn neg(&self) -> ClassFunction {
        let sums = self.sums.iter().map(|s| s.scaled(-1)).collect();
        ClassFunction::from_sums(self.m, sums, CharKind::Virtual, format!("-({})", self.label))
    }

    pub fn conj(&self) -> ClassFunction {
        let sums = self.sums.iter().map(|s| s.conj(self.m)).collect();
        ClassFunction::from_sums(self.m, sums, self.kind.clone(), format!("conj({})", self.label))
    }

    /// Pointwise product.
    pub fn tensor(&self, other: &ClassFunction) -> ClassFunction {
        let sums = self
            .sums
            .iter()
            .zip(&other.sums)
            .map(|(a, b)| a.mul(b, self.m))
            .collect();
        ClassFunction::from_sums(self.m, sums, CharKind::Virtual, format!("{}⊗{}", self.label, other.label))
    }

    /// `⟨χ, ψ⟩_G = |G|⁻¹ Σ_K |K| χ(g_K) conj(ψ(g_K))`.
    pub fn inner(&self, other: &ClassFunction, g: &FiniteGroup) -> CyclotomicNumber {
        let mut acc = RootAccumulator::new(self.m);
        for k in 0..g.num_classes() {
            acc.add_product(&self.sums[k], &other.sums[k].conj(self.m), g.class_size(k) as i64);
        }
        acc.to_cyclotomic().scale(1, g.order() as i128)
    }

    /// Inner product required to be a rational integer.
    pub fn inner_int(&self, other: &ClassFunction, g: &FiniteGroup) -> Result<i64> {
        self.inner(other, g)
            .as_integer()
            .map(|v| v as i64)
            .ok_or_else(|| Error::Internal(format!("⟨{}, {}⟩ is not an integer", self.label, other.label)))
    }

    pub fn is_irreducible(&self, g: &FiniteGroup) -> bool {
        self.degree > 0 && self.inner_int(self, g).ok() == Some(1)
    }

    /// Values reduced into a local ring.
    pub fn reduce(&self, ring: &LocalRing) -> Vec<crate::arith::RElem> {
        assert_eq!(ring.conductor() % self.m as u64, 0);
        let step = (ring.conductor() / self.m as u64) as u32;
        self.sums
            .iter()
            .map(|s| ring.from_root_sum(&s.galois(step, self.m * step)))
            .collect()
    }
}

/// `Ind_H^G λ` by summing over left coset representatives.
pub fn induced_character(g: &FiniteGroup, h: &MarkedSubgroup, lambda: &LinearCharacter) -> ClassFunction {
    let (reps, _) = g.left_cosets(h);
    let m = lambda.m;
    let sums = (0..g.num_classes())
        .map(|k| {
            let x = g.class_rep(k);
            let mut s = RootSum::new();
            for &r in &reps {
                let y = g.mul(g.mul(g.inv(r), x), r);
                if h.contains(y) {
                    s.add_term(lambda.exp(y).expect("member"), 1);
                }
            }
            s
        })
        .collect();
    ClassFunction::from_sums(
        m,
        sums,
        CharKind::Induced {
            from: h.name.clone(),
            character: lambda.label.clone(),
        },
        format!("Ind_{}({})", h.name, lambda.label),
    )
}

/// `θ_j(t^k) = ζ_{ℓ²-1}^{jk}` on the marked torus generator.
pub fn torus_character(g: &FiniteGroup, j: i64, m: u32) -> Result<LinearCharacter> {
    let td = g
        .torus
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("group has no marked torus".into()))?;
    let q = td.powers.len() as i64;
    if m as i64 % q != 0 {
        return Err(Error::InvalidInput(format!("conductor {m} not divisible by |T| = {q}")));
    }
    let step = m as i64 / q;
    let jr = j.rem_euclid(q);
    let t = g.subgroup("T");
    LinearCharacter::new(g, t, m, format!("θ{jr}"), |x| {
        ((td.log[&x] as i64 * jr % q) * step) as u32
    })
}

/// Exponent `j` of a torus character.
pub fn torus_exponent(g: &FiniteGroup, theta: &LinearCharacter) -> i64 {
    let td = g.torus.as_ref().expect("torus");
    let q = td.powers.len() as u64;
    let step = theta.m as u64 / q;
    (theta.exp(td.generator).expect("generator in T") as u64 / step) as i64
}

/// Smallest primitive root modulo `ℓ`.
pub fn primitive_root(l: u64) -> u64 {
    (2..l.max(3))
        .find(|&r| crate::arith::numtheory::mult_order(r, l) == l - 1)
        .unwrap_or(1)
}

fn discrete_log_table(l: u64) -> Vec<u64> {
    let r = primitive_root(l);
    let mut table = vec![0u64; l as usize];
    let mut x = 1;
    for k in 0..l - 1 {
        table[x as usize] = k;
        x = x * r % l;
    }
    table
}

/// `ψ(z·u_b) = θ(z) ζ_ℓ^b` on `ZU`, for a character `θ` of `T` (restricted to `Z`).
pub fn zu_character(g: &FiniteGroup, theta: &LinearCharacter) -> Result<LinearCharacter> {
    let l = g.field_size().expect("GL2");
    let m = theta.m;
    if m as u64 % l != 0 {
        return Err(Error::InvalidInput(format!("conductor {m} not divisible by ℓ = {l}")));
    }
    let zu = g.subgroup("ZU");
    let inv = |a: u64| crate::arith::numtheory::mod_inv(a, l).expect("unit");
    LinearCharacter::new(g, zu, m, format!("ψ[{}]", theta.label), |x| {
        let (a, b, _, _) = g.gl2_entries(x);
        let z = g.gl2_element(a, 0, 0, a).expect("scalar");
        let ub = b * inv(a) % l;
        (theta.exp(z).expect("Z ≤ T") as u64 + (m as u64 / l) * ub) as u32 % m
    })
}

/// `α_i ∘ det`, with `α_i(r^k) = ζ_{ℓ-1}^{ik}` for the least primitive root `r`.
pub fn det_character(g: &FiniteGroup, i: u64, m: u32) -> ClassFunction {
    let l = g.field_size().expect("GL2");
    let dlog = discrete_log_table(l);
    let step = m as u64 / (l - 1);
    let sums = (0..g.num_classes())
        .map(|k| {
            let d = g.det(g.class_rep(k));
            RootSum::root(((dlog[d as usize] * i % (l - 1)) * step) as u32)
        })
        .collect();
    ClassFunction::from_sums(m, sums, CharKind::Irreducible, format!("det^{i}"))
}

/// `α_i ⊗ α_j` on the Borel subgroup.
pub fn borel_character(g: &FiniteGroup, i: u64, j: u64, m: u32) -> Result<LinearCharacter> {
    let l = g.field_size().expect("GL2");
    let dlog = discrete_log_table(l);
    let step = m as u64 / (l - 1);
    let b = g.subgroup("B");
    LinearCharacter::new(g, b, m, format!("α{i}⊗α{j}"), |x| {
        let (a, _, _, d) = g.gl2_entries(x);
        (((dlog[a as usize] * i + dlog[d as usize] * j) % (l - 1)) * step) as u32
    })
}

/// General position over `K`: `θ^ℓ ≠ θ`.
pub fn in_general_position(g: &FiniteGroup, theta: &LinearCharacter) -> bool {
    let l = g.field_size().expect("GL2") as i64;
    theta.pow(l).exps != theta.exps
}

/// Output of [`cuspidal_character`].
#[derive(Clone, Debug)]
pub struct Cuspidal {
    pub character: ClassFunction,
    /// Sign with `ε · (Ind_T θ - Ind_ZU ψ)` irreducible of positive degree.
    pub epsilon: i64,
    pub theta: LinearCharacter,
    pub psi: LinearCharacter,
}

/// `π_θ = ε·(Ind_T^G θ − Ind_{ZU}^G ψ)`; verified irreducible of degree `ℓ − 1`.
pub fn cuspidal_character(g: &FiniteGroup, theta: &LinearCharacter) -> Result<Cuspidal> {
    let l = g.field_size().expect("GL2") as i64;
    if !in_general_position(g, theta) {
        return Err(Error::InvalidInput(format!(
            "{} factors through the norm (not in general position)",
            theta.label
        )));
    }
    let psi = zu_character(g, theta)?;
    let ind_t = induced_character(g, g.subgroup("T"), theta);
    let ind_zu = induced_character(g, g.subgroup("ZU"), &psi);
    let r = ind_t.sub(&ind_zu);
    let epsilon = if r.degree < 0 { -1 } else { 1 };
    let mut chi = if epsilon < 0 { r.neg() } else { r };
    chi.label = format!("π[{}]", theta.label);
    if chi.inner_int(&chi, g)? != 1 {
        return Err(Error::Internal(format!("{} is not irreducible", chi.label)));
    }
    if chi.degree != l - 1 {
        return Err(Error::Internal(format!("{} has degree {}", chi.label, chi.degree)));
    }
    chi.kind = CharKind::Irreducible;
    Ok(Cuspidal {
        character: chi,
        epsilon,
        theta: theta.clone(),
        psi,
    })
}

/// Outcome of [`general_position_mod_p`], recording both criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPosition {
    pub residues_differ: bool,
    pub ratio_order: u64,
    pub ratio_not_p_power: bool,
}

impl GeneralPosition {
    pub fn holds(&self) -> bool {
        self.residues_differ && self.ratio_not_p_power
    }
}

/// Whether `θ̄ ≠ θ̄^w` over the residue field; computed by comparing reductions
/// and, independently, from the order of `θ^{1-ℓ}`.
pub fn general_position_mod_p(g: &FiniteGroup, theta: &LinearCharacter, ring: &LocalRing) -> Result<GeneralPosition> {
    let l = g.field_size().expect("GL2") as i64;
    let res = ring.residue_ring();
    let step = ring.conductor() / theta.m as u64;
    let theta_w = theta.pow(l);
    let residues_differ = theta
        .exps
        .iter()
        .zip(&theta_w.exps)
        .any(|(&a, &b)| res.root(a as u64 * step) != res.root(b as u64 * step));
    let ratio = theta.pow(1 - l);
    let ratio_order = ratio.order();
    let ratio_not_p_power = !is_power_of(ratio_order, ring.p());
    if residues_differ != ratio_not_p_power {
        return Err(Error::Internal("general-position criteria disagree".into()));
    }
    Ok(GeneralPosition {
        residues_differ,
        ratio_order,
        ratio_not_p_power,
    })
}

/// `θ' = θ ∘ (T → S)`, the prime-to-`p` part of a torus character exponent.
pub fn p_prime_part(j: i64, q: u64, p: u64) -> i64 {
    let pa = p.pow(vp(q, p));
    let qp = q / pa;
    // idempotent ε ≡ 1 mod q', ≡ 0 mod p^a
    let eps = (0..q).step_by(pa as usize).find(|&x| x % qp == 1 % qp).expect("CRT");
    ((j.rem_euclid(q as i64) as u64 * eps) % q) as i64
}

/// Character table of `GL_2(F_ℓ)`: determinant characters, twisted Steinberg,
/// principal series and cuspidal characters. Completeness and pairwise
/// orthonormality are verified.
pub fn full_irreducible_table(g: &FiniteGroup, m: u32) -> Result<Vec<ClassFunction>> {
    let l = g.field_size().expect("GL2");
    let q = l * l - 1;
    let mut table = Vec::new();
    for i in 0..l - 1 {
        table.push(det_character(g, i, m));
    }
    let b = g.subgroup("B");
    for i in 0..l - 1 {
        let ind = induced_character(g, b, &borel_character(g, i, i, m)?);
        let mut st = ind.sub(&det_character(g, i, m));
        st.kind = CharKind::Irreducible;
        st.label = format!("St·det^{i}");
        table.push(st);
    }
    for i in 0..l - 1 {
        for j in i + 1..l - 1 {
            let mut ps = induced_character(g, b, &borel_character(g, i, j, m)?);
            ps.kind = CharKind::Irreducible;
            ps.label = format!("PS({i},{j})");
            table.push(ps);
        }
    }
    for j in 0..q {
        let jl = j * l % q;
        if j == jl || jl < j {
            continue;
        }
        let theta = torus_character(g, j as i64, m)?;
        table.push(cuspidal_character(g, &theta)?.character);
    }
    let sum_sq: i64 = table.iter().map(|c| c.degree * c.degree).sum();
    if table.len() != g.num_classes() || sum_sq != g.order() as i64 {
        return Err(Error::Internal(format!(
            "incomplete table: {} characters, Σ deg² = {sum_sq}",
            table.len()
        )));
    }
    verify_orthonormal(g, &table)?;
    Ok(table)
}

/// Pairwise orthonormality of a list of characters.
pub fn verify_orthonormal(g: &FiniteGroup, table: &[ClassFunction]) -> Result<()> {
    let conj: Vec<Vec<RootSum>> = table
        .iter()
        .map(|c| c.sums.iter().map(|s| s.conj(c.m)).collect())
        .collect();
    for (a, ca) in table.iter().enumerate() {
        for (b, cb) in conj.iter().enumerate().skip(a) {
            let mut acc = RootAccumulator::new(ca.m);
            for k in 0..g.num_classes() {
                acc.add_product(&ca.sums[k], &cb[k], g.class_size(k) as i64);
            }
            let v = acc.to_cyclotomic();
            let expected = if a == b { g.order() as i128 } else { 0 };
            if v.as_integer() != Some(expected) {
                return Err(Error::Internal(format!(
                    "⟨{}, {}⟩ ≠ {}",
                    ca.label,
                    table[b].label,
                    expected / g.order() as i128
                )));
            }
        }
    }
    Ok(())
}

/// Index of a character in a table.
pub fn find_in_table(table: &[ClassFunction], chi: &ClassFunction) -> Option<usize> {
    table.iter().position(|c| c.values == chi.values)
}

/// Multiplicities of table members in a class function.
pub fn decompose(g: &FiniteGroup, table: &[ClassFunction], chi: &ClassFunction) -> Result<(Vec<i64>, bool)> {
    let mut mults = Vec::with_capacity(table.len());
    let mut residual = chi.clone();
    for c in table {
        let k = chi.inner_int(c, g)?;
        mults.push(k);
        if k != 0 {
            let sums = residual
                .sums
                .iter()
                .zip(&c.sums)
                .map(|(r, s)| {
                    let mut t = r.clone();
                    t.add_assign_scaled(s, -k);
                    t
                })
                .collect();
            residual = ClassFunction::from_sums(chi.m, sums, CharKind::Virtual, "residual");
        }
    }
    let exact = residual.values.iter().all(|v| v.is_zero());
    Ok((mults, exact))
}

/// Text matrix: one row per character, values per class.
pub fn table_text(g: &FiniteGroup, table: &[ClassFunction]) -> String {
    let mut s = String::new();
    let reps: Vec<String> = (0..g.num_classes()).map(|k| g.class_rep(k).to_string()).collect();
    let _ = writeln!(s, "class reps: {}", reps.join(" "));
    for c in table {
        let vals: Vec<String> = c.values.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}: {}", c.label, vals.join(" | "));
    }
    s
}

/// Canonical torus exponent `(ℓ²-1)/order` of a character of the given order.
pub fn torus_exponent_of_order(q: u64, order: u64) -> Option<u64> {
    (order > 0 && q % order == 0).then(|| (q / order) % q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::local::build_local_ring;
    use crate::arith::numtheory::gcd;
    use crate::group::gl2_with_torus;

    #[test]
    fn weyl_fixed_characters_are_not_in_general_position() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        // θ_j^ℓ = θ_j exactly when 24 | 4j
        for j in 0..24 {
            let t = torus_character(&g, j, m).unwrap();
            assert_eq!(in_general_position(&g, &t), j % 6 != 0, "θ{j}");
        }
        assert!(cuspidal_character(&g, &torus_character(&g, 6, m).unwrap()).is_err());
    }

    #[test]
    fn induced_degrees_and_trivial_induction() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let theta = torus_character(&g, 3, m).unwrap();
        assert_eq!(theta.order(), 8);
        assert_eq!(induced_character(&g, g.subgroup("T"), &theta).degree, 20);
        let psi = zu_character(&g, &theta).unwrap();
        assert_eq!(induced_character(&g, g.subgroup("ZU"), &psi).degree, 24);
        let whole = g.whole();
        let one = LinearCharacter::trivial(&whole, m);
        let ind = induced_character(&g, &whole, &one);
        assert_eq!(ind, ClassFunction::trivial(&g, m));
    }

    #[test]
    fn cuspidal_of_order_eight() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let theta = torus_character(&g, 3, m).unwrap();
        let c = cuspidal_character(&g, &theta).unwrap();
        assert_eq!(c.character.degree, 4);
        assert_eq!(c.epsilon, -1);
        assert_eq!(c.character.inner_int(&c.character, &g).unwrap(), 1);
        // χ(zu) = -θ(z)
        let z = g.gl2_element(2, 0, 0, 2).unwrap();
        let zu = g.gl2_element(2, 1, 0, 2).unwrap();
        let expected = -&CyclotomicNumber::root(m, theta.exp(z).unwrap() as u64);
        assert_eq!(c.character.value_at(&g, zu), &expected);
        let norm_factor = torus_character(&g, 6, m).unwrap();
        assert!(cuspidal_character(&g, &norm_factor).is_err());
    }

    #[test]
    fn gl2_f5_table() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let table = full_irreducible_table(&g, m).unwrap();
        assert_eq!(table.len(), 24);
        let mut degs: Vec<i64> = table.iter().map(|c| c.degree).collect();
        degs.sort();
        degs.dedup();
        assert_eq!(degs, vec![1, 4, 5, 6]);
    }

    #[test]
    fn general_position_criteria() {
        let g = gl2_with_torus(5, 3).unwrap();
        let m = g.exponent() as u32;
        let ring = build_local_ring(3, m as u64, 4).unwrap();
        let t8 = torus_character(&g, 3, m).unwrap();
        let gp = general_position_mod_p(&g, &t8, &ring).unwrap();
        assert!(gp.holds());
        assert_eq!(gp.ratio_order, 2);
        let t3 = torus_character(&g, 8, m).unwrap();
        let gp3 = general_position_mod_p(&g, &t3, &ring).unwrap();
        assert_eq!(gp3.ratio_order, 3);
        assert!(!gp3.holds());
        let triv = torus_character(&g, 0, m).unwrap();
        assert!(!general_position_mod_p(&g, &triv, &ring).unwrap().holds());
    }

    #[test]
    fn prime_to_p_parts() {
        assert_eq!(p_prime_part(3, 24, 3), 3);
        let j = p_prime_part(1, 24, 3);
        assert_eq!(24 / gcd(j as u64, 24), 8);
        assert_eq!(p_prime_part(0, 24, 3), 0);
    }
}
