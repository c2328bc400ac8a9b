//! Explicit finite groups: `GL_2(F_ℓ)` with its non-split torus, and the
//! Heisenberg semidirect product `H ⋊ A`.
//!
//! Elements are encoded as integer keys and carry canonical indices given by
//! the sorted key order; every downstream iteration order derives from these.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::arith::numtheory::{factorize, is_prime, lcm, mod_inv, vp};
use crate::error::{Error, Result};

/// Multiplication law of a group family.
#[derive(Clone, Debug)]
pub enum GroupLaw {
    /// Invertible 2×2 matrices over `F_ℓ`, key `a + ℓb + ℓ²c + ℓ³d` for `[[a,b],[c,d]]`.
    Gl2 { l: u64 },
    /// `(v, z)·a^j` with `v ∈ F_{ℓ²}` in the basis `{1, X}`, key `v0 + ℓv1 + ℓ²z + ℓ³j`.
    Heisenberg {
        l: u64,
        /// `X² + q1·X + q0 = 0`.
        q0: u64,
        q1: u64,
        half: u64,
        /// `a^j` as `(α, β)` meaning `α + βX`.
        a_pows: Vec<(u64, u64)>,
    },
    /// `Z/n` written additively.
    Cyclic { n: u64 },
}

impl GroupLaw {
    fn mul(&self, x: u64, y: u64) -> u64 {
        match self {
            GroupLaw::Gl2 { l } => {
                let l = *l;
                let (a, b, c, d) = (x % l, (x / l) % l, (x / (l * l)) % l, x / (l * l * l));
                let (e, f, g, h) = (y % l, (y / l) % l, (y / (l * l)) % l, y / (l * l * l));
                let na = (a * e + b * g) % l;
                let nb = (a * f + b * h) % l;
                let nc = (c * e + d * g) % l;
                let nd = (c * f + d * h) % l;
                na + l * nb + l * l * nc + l * l * l * nd
            }
            GroupLaw::Heisenberg {
                l,
                q0,
                q1,
                half,
                a_pows,
            } => {
                let l = *l;
                let n = a_pows.len() as u64;
                let (v0, v1, z, i) = (x % l, (x / l) % l, (x / (l * l)) % l, x / (l * l * l));
                let (w0, w1, zz, j) = (y % l, (y / l) % l, (y / (l * l)) % l, y / (l * l * l));
                // a^i acting on w
                let (al, be) = a_pows[i as usize];
                let (s0, s1) = field_mul(l, *q0, *q1, (al, be), (w0, w1));
                let omega = (v0 * s1 + l * l - v1 * s0) % l;
                let r0 = (v0 + s0) % l;
                let r1 = (v1 + s1) % l;
                let rz = (z + zz + half * omega) % l;
                let rj = (i + j) % n;
                r0 + l * r1 + l * l * rz + l * l * l * rj
            }
            GroupLaw::Cyclic { n } => (x + y) % n,
        }
    }
}

/// `(α + βX)(γ + δX)` in `F_ℓ[X]/(X² + q1 X + q0)`.
pub fn field_mul(l: u64, q0: u64, q1: u64, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
    let c0 = a.0 * b.0 % l;
    let c1 = (a.0 * b.1 + a.1 * b.0) % l;
    let c2 = a.1 * b.1 % l;
    // X² = -q1 X - q0
    let r0 = (c0 + c2 * ((l - q0 % l) % l)) % l;
    let r1 = (c1 + c2 * ((l - q1 % l) % l)) % l;
    (r0, r1)
}

/// A subgroup recorded by its sorted element indices.
#[derive(Clone, Debug)]
pub struct MarkedSubgroup {
    pub name: String,
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
    member: Vec<bool>,
}

impl MarkedSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn contains(&self, g: usize) -> bool {
        self.member[g]
    }
    /// Position of `g` in the sorted element list.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }
}

/// Torus data for `GL_2(F_ℓ)`.
#[derive(Clone, Debug)]
pub struct TorusData {
    /// `X² + q1 X + q0` irreducible over `F_ℓ`.
    pub q0: u64,
    pub q1: u64,
    /// Marked generator `t` of `T` and `t^k` for `k < ℓ²-1`.
    pub generator: usize,
    pub powers: Vec<usize>,
    /// `log[g] = k` with `t^k = g`, for `g ∈ T`.
    pub log: BTreeMap<usize, u64>,
    pub weyl: usize,
}

/// Structure specific to the Heisenberg family.
#[derive(Clone, Debug)]
pub struct HeisenbergData {
    pub q0: u64,
    pub q1: u64,
    /// Generator `a` of `A` and its order `ℓ + 1`.
    pub a_gen: usize,
    pub a_order: u64,
    /// Generator `z` of `Z`, corresponding to `(0, 1)`.
    pub z_gen: usize,
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub law: GroupLaw,
    pub label: String,
    keys: Vec<u64>,
    index: Vec<u32>,
    identity: usize,
    inverses: Vec<usize>,
    orders: Vec<u64>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    generators: Vec<usize>,
    subgroups: BTreeMap<String, MarkedSubgroup>,
    pub torus: Option<TorusData>,
    pub heisenberg: Option<HeisenbergData>,
}

/// Double coset decomposition `H \ G / L`.
#[derive(Clone, Debug)]
pub struct DoubleCosetDecomposition {
    pub left: String,
    pub right: String,
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
    /// `H ∩ s L s⁻¹` for each representative `s`, as sorted indices.
    pub intersections: Vec<Vec<usize>>,
}

const ENUMERATION_CAP: usize = 20_000;

impl FiniteGroup {
    fn from_keys(law: GroupLaw, label: String, mut keys: Vec<u64>, key_space: u64, identity_key: u64) -> Result<Self> {
        keys.sort_unstable();
        keys.dedup();
        if keys.len() > ENUMERATION_CAP {
            return Err(Error::InvalidInput(format!(
                "group order {} exceeds the enumeration cap {ENUMERATION_CAP}",
                keys.len()
            )));
        }
        let mut index = vec![u32::MAX; key_space as usize];
        for (i, &k) in keys.iter().enumerate() {
            index[k as usize] = i as u32;
        }
        let identity = index[identity_key as usize] as usize;
        let mut g = FiniteGroup {
            law,
            label,
            keys,
            index,
            identity,
            inverses: Vec::new(),
            orders: Vec::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
            generators: Vec::new(),
            subgroups: BTreeMap::new(),
            torus: None,
            heisenberg: None,
        };
        g.finish()?;
        Ok(g)
    }

    fn finish(&mut self) -> Result<()> {
        let n = self.order();
        // closure check and orders
        let mut orders = vec![0u64; n];
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            let mut k = 1;
            let mut y = x;
            while y != self.identity {
                y = self.mul(y, x);
                k += 1;
                if k > n as u64 + 1 {
                    return Err(Error::Internal("element of infinite order".into()));
                }
            }
            orders[x] = k;
            // x^{k-1}
            let mut inv = self.identity;
            for _ in 0..k - 1 {
                inv = self.mul(inv, x);
            }
            inverses[x] = inv;
        }
        self.orders = orders;
        self.inverses = inverses;
        self.generators = self.greedy_generators(&(0..n).collect::<Vec<_>>());
        self.compute_classes();
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.keys.len()
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn key(&self, g: usize) -> u64 {
        self.keys[g]
    }
    pub fn index_of_key(&self, key: u64) -> Option<usize> {
        self.index
            .get(key as usize)
            .copied()
            .filter(|&i| i != u32::MAX)
            .map(|i| i as usize)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let k = self.law.mul(self.keys[a], self.keys[b]);
        let i = self.index[k as usize];
        debug_assert!(i != u32::MAX, "product left the group");
        i as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let k = k % self.orders[a];
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverses[g])
    }

    pub fn element_order(&self, g: usize) -> u64 {
        self.orders[g]
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| lcm(acc, o))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// Smallest-index element of each class; class 0 is the identity class.
    pub fn class_rep(&self, k: usize) -> usize {
        self.classes[k][0]
    }

    pub fn class_size(&self, k: usize) -> usize {
        self.classes[k].len()
    }

    pub fn centralizer_order(&self, g: usize) -> usize {
        self.order() / self.class_size(self.class_of[g])
    }

    /// Class of `g⁻¹` for `g` in class `k`.
    pub fn inverse_class(&self, k: usize) -> usize {
        self.class_of[self.inverses[self.class_rep(k)]]
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        let order = std::iter::once(self.identity).chain((0..n).filter(|&x| x != self.identity));
        for x in order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![x];
            class_of[x] = id;
            let mut queue = VecDeque::from([x]);
            while let Some(y) = queue.pop_front() {
                for &g in &self.generators {
                    let z = self.conj(g, y);
                    if class_of[z] == usize::MAX {
                        class_of[z] = id;
                        members.push(z);
                        queue.push_back(z);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    /// Closure of a generating set.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut queue = VecDeque::from([self.identity]);
        while let Some(y) = queue.pop_front() {
            for &g in gens {
                let z = self.mul(y, g);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                    queue.push_back(z);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Greedy generating set of the subgroup with the given elements, scanning
    /// in index order. A cyclic subgroup gets its least generator alone.
    pub fn greedy_generators(&self, elements: &[usize]) -> Vec<usize> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        if let Some(&x) = sorted.iter().find(|&&x| self.element_order(x) == elements.len() as u64) {
            return vec![x];
        }
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for &x in &sorted {
            if span.len() == elements.len() {
                break;
            }
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Record a subgroup generated by `gens` under `name`.
    pub fn mark_generated(&mut self, name: &str, gens: &[usize]) -> &MarkedSubgroup {
        let elements = self.closure(gens);
        self.mark_elements(name, elements)
    }

    /// Record a subgroup given by its elements (closure is verified).
    pub fn mark_elements(&mut self, name: &str, mut elements: Vec<usize>) -> &MarkedSubgroup {
        elements.sort_unstable();
        elements.dedup();
        let mut member = vec![false; self.order()];
        for &x in &elements {
            member[x] = true;
        }
        for &x in &elements {
            assert!(member[self.inverses[x]], "subgroup {name} not closed under inverses");
        }
        let generators = self.greedy_generators(&elements);
        assert_eq!(
            self.closure(&generators).len(),
            elements.len(),
            "subgroup {name} not closed"
        );
        self.subgroups.insert(
            name.to_string(),
            MarkedSubgroup {
                name: name.to_string(),
                elements,
                generators,
                member,
            },
        );
        &self.subgroups[name]
    }

    pub fn subgroup(&self, name: &str) -> &MarkedSubgroup {
        self.subgroups
            .get(name)
            .unwrap_or_else(|| panic!("no subgroup marked {name}"))
    }

    pub fn try_subgroup(&self, name: &str) -> Option<&MarkedSubgroup> {
        self.subgroups.get(name)
    }

    pub fn whole(&self) -> MarkedSubgroup {
        MarkedSubgroup {
            name: "G".into(),
            elements: (0..self.order()).collect(),
            generators: self.generators.clone(),
            member: vec![true; self.order()],
        }
    }

    pub fn subgroup_names(&self) -> Vec<String> {
        self.subgroups.keys().cloned().collect()
    }

    /// `H \ G / L`, representatives = smallest index in each double coset.
    pub fn double_cosets(&self, h: &MarkedSubgroup, l: &MarkedSubgroup) -> DoubleCosetDecomposition {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut intersections = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut size = 0;
            for &x in &h.elements {
                let xs = self.mul(x, s);
                for &y in &l.elements {
                    let z = self.mul(xs, y);
                    if !seen[z] {
                        seen[z] = true;
                        size += 1;
                    }
                }
            }
            let sinv = self.inv(s);
            let inter: Vec<usize> = h
                .elements
                .iter()
                .copied()
                .filter(|&x| l.contains(self.mul(self.mul(sinv, x), s)))
                .collect();
            representatives.push(s);
            sizes.push(size);
            intersections.push(inter);
        }
        DoubleCosetDecomposition {
            left: h.name.clone(),
            right: l.name.clone(),
            representatives,
            sizes,
            intersections,
        }
    }

    /// Left coset representatives `g_i` of `H` (smallest index per coset) and,
    /// for each element, its coset number.
    pub fn left_cosets(&self, h: &MarkedSubgroup) -> (Vec<usize>, Vec<usize>) {
        let n = self.order();
        let mut coset = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(g);
            for &x in &h.elements {
                coset[self.mul(g, x)] = id;
            }
        }
        (reps, coset)
    }

    /// Class structure data: `counts[m][k·c + l] = #{x ∈ K_k : x⁻¹ g_m ∈ K_l}`.
    pub fn structure_constants(&self) -> Vec<Vec<u32>> {
        let c = self.num_classes();
        let mut out = vec![vec![0u32; c * c]; c];
        for (m, row) in out.iter_mut().enumerate() {
            let gm = self.class_rep(m);
            for x in 0..self.order() {
                let y = self.mul(self.inverses[x], gm);
                row[self.class_of[x] * c + self.class_of[y]] += 1;
            }
        }
        out
    }

    /// Cayley graph edge list on the generators, one `source generator target` per line.
    pub fn edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} order {} generators {:?}", self.label, self.order(), self.generators);
        for x in 0..self.order() {
            for (k, &g) in self.generators.iter().enumerate() {
                let _ = writeln!(s, "{x} {k} {}", self.mul(x, g));
            }
        }
        s
    }

    /// Verify the group axioms, fully up to the enumeration cap of products.
    pub fn verify_axioms(&self) -> bool {
        let n = self.order();
        let e = self.identity;
        let sample: Vec<usize> = if n <= 1000 {
            (0..n).collect()
        } else {
            (0..n).step_by(n / 97 + 1).collect()
        };
        for &a in &sample {
            if self.mul(a, e) != a || self.mul(e, a) != a || self.mul(a, self.inv(a)) != e {
                return false;
            }
            for &b in &sample {
                let ab = self.mul(a, b);
                for &c in sample.iter().take(16) {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Order of `ℓ` for the two matrix families.
    pub fn field_size(&self) -> Option<u64> {
        match self.law {
            GroupLaw::Gl2 { l } | GroupLaw::Heisenberg { l, .. } => Some(l),
            GroupLaw::Cyclic { .. } => None,
        }
    }

    /// Cyclic group `Z/n`, for tests and small examples.
    pub fn cyclic(n: u64) -> Result<Self> {
        FiniteGroup::from_keys(
            GroupLaw::Cyclic { n },
            format!("C{n}"),
            (0..n).collect(),
            n,
            0,
        )
    }

    /// Elements of a subgroup of `p`-power order generated by the `p`-part of a
    /// cyclic generator `g`.
    pub fn sylow_of_cyclic(&self, g: usize, p: u64) -> usize {
        let n = self.orders[g];
        let pa = p.pow(vp(n, p));
        self.pow(g, n / pa)
    }

    /// Matrix entries `(a, b, c, d)` of a `GL_2` element.
    pub fn gl2_entries(&self, g: usize) -> (u64, u64, u64, u64) {
        let GroupLaw::Gl2 { l } = self.law else {
            panic!("not a GL2 group")
        };
        let x = self.keys[g];
        (x % l, (x / l) % l, (x / (l * l)) % l, x / (l * l * l))
    }

    pub fn gl2_element(&self, a: u64, b: u64, c: u64, d: u64) -> Option<usize> {
        let GroupLaw::Gl2 { l } = self.law else {
            return None;
        };
        self.index_of_key(a % l + l * (b % l) + l * l * (c % l) + l * l * l * (d % l))
    }

    pub fn det(&self, g: usize) -> u64 {
        let GroupLaw::Gl2 { l } = self.law else {
            panic!("not a GL2 group")
        };
        let (a, b, c, d) = self.gl2_entries(g);
        (a * d % l + l * l - b * c % l) % l
    }
}

/// `x² + q1 x + q0` used for `F_{ℓ²}`: `x² - c` with `c` the least non-residue
/// when `ℓ ≡ 3 (mod 4)`, otherwise the lexicographically least irreducible.
pub fn torus_quadratic(l: u64) -> (u64, u64) {
    let is_square = |c: u64| (0..l).any(|x| x * x % l == c % l);
    if l % 4 == 3 {
        let c = (1..l).find(|&c| !is_square(c)).expect("non-residue exists");
        ((l - c) % l, 0)
    } else {
        for q1 in 0..l {
            for q0 in 0..l {
                if (0..l).all(|x| (x * x + q1 * x + q0) % l != 0) {
                    return (q0, q1);
                }
            }
        }
        unreachable!("irreducible quadratics exist")
    }
}

/// `GL_2(F_ℓ)` with `Z`, `U`, `ZU`, `B` marked.
pub fn build_gl2(l: u64) -> Result<FiniteGroup> {
    if !is_prime(l) {
        return Err(Error::InvalidInput(format!("ℓ = {l} is not prime")));
    }
    if l > 23 {
        return Err(Error::InvalidInput(format!("ℓ = {l} exceeds the cap 23")));
    }
    let mut keys = Vec::new();
    for d in 0..l {
        for c in 0..l {
            for b in 0..l {
                for a in 0..l {
                    if (a * d + l * l - b * c) % l != 0 {
                        keys.push(a + l * b + l * l * c + l * l * l * d);
                    }
                }
            }
        }
    }
    let mut g = FiniteGroup::from_keys(
        GroupLaw::Gl2 { l },
        format!("GL2(F{l})"),
        keys,
        l.pow(4),
        1 + l * l * l,
    )?;
    let z: Vec<usize> = (1..l).filter_map(|a| g.gl2_element(a, 0, 0, a)).collect();
    g.mark_elements("Z", z);
    let u: Vec<usize> = (0..l).filter_map(|b| g.gl2_element(1, b, 0, 1)).collect();
    g.mark_elements("U", u);
    let zu: Vec<usize> = (1..l)
        .flat_map(|a| (0..l).map(move |b| (a, b)))
        .filter_map(|(a, b)| g.gl2_element(a, b, 0, a))
        .collect();
    g.mark_elements("ZU", zu);
    let mut b = Vec::new();
    for a in 1..l {
        for d in 1..l {
            for x in 0..l {
                b.extend(g.gl2_element(a, x, 0, d));
            }
        }
    }
    g.mark_elements("B", b);
    Ok(g)
}

/// Mark the non-split torus `T`, its normaliser `NT`, and record the marked
/// generator and Weyl element.
pub fn nonsplit_torus(g: &mut FiniteGroup) -> Result<()> {
    let l = match g.law {
        GroupLaw::Gl2 { l } => l,
        _ => return Err(Error::InvalidInput("torus requires a GL2 group".into())),
    };
    let (q0, q1) = torus_quadratic(l);
    // companion matrix [[0, -q0], [1, -q1]]
    let elem = |alpha: u64, beta: u64| -> (u64, u64, u64, u64) {
        (alpha, beta * ((l - q0) % l) % l, beta, (alpha + beta * ((l - q1) % l)) % l)
    };
    let mut t = Vec::new();
    let mut gen = None;
    let q = l * l - 1;
    for alpha in 0..l {
        for beta in 0..l {
            if alpha == 0 && beta == 0 {
                continue;
            }
            let (a, b, c, d) = elem(alpha, beta);
            let x = g
                .gl2_element(a, b, c, d)
                .ok_or_else(|| Error::Internal("torus element not invertible".into()))?;
            t.push(x);
            if gen.is_none() && g.element_order(x) == q {
                gen = Some(x);
            }
        }
    }
    let gen = gen.ok_or_else(|| Error::Internal("torus is not cyclic".into()))?;
    let mut powers = Vec::with_capacity(q as usize);
    let mut cur = g.identity();
    for _ in 0..q {
        powers.push(cur);
        cur = g.mul(cur, gen);
    }
    let log: BTreeMap<usize, u64> = powers.iter().enumerate().map(|(k, &x)| (x, k as u64)).collect();
    if log.len() != t.len() {
        return Err(Error::Internal("marked generator does not generate T".into()));
    }
    let target = powers[l as usize % q as usize];
    let weyl = (0..g.order())
        .find(|&w| g.conj(w, gen) == target)
        .ok_or_else(|| Error::Internal("no Weyl element".into()))?;
    g.mark_elements("T", t.clone());
    let mut nt = t.clone();
    nt.extend(t.iter().map(|&x| g.mul(weyl, x)));
    g.mark_elements("NT", nt);
    g.torus = Some(TorusData {
        q0,
        q1,
        generator: gen,
        powers,
        log,
        weyl,
    });
    Ok(())
}

/// Mark the Sylow-`p` subgroup `P` of `T` and its complement `S`.
pub fn mark_torus_sylow(g: &mut FiniteGroup, p: u64) -> Result<()> {
    let td = g
        .torus
        .clone()
        .ok_or_else(|| Error::InvalidInput("torus not marked".into()))?;
    let q = td.powers.len() as u64;
    let a = vp(q, p);
    let pa = p.pow(a);
    let pgen = td.powers[(q / pa) as usize];
    let sgen = td.powers[pa as usize % q as usize];
    g.mark_generated("P", &[pgen]);
    g.mark_generated("S", &[sgen]);
    Ok(())
}

/// `GL_2(F_ℓ)` with every marked subgroup used downstream.
pub fn gl2_with_torus(l: u64, p: u64) -> Result<FiniteGroup> {
    let mut g = build_gl2(l)?;
    nonsplit_torus(&mut g)?;
    mark_torus_sylow(&mut g, p)?;
    Ok(g)
}

/// `G = H ⋊ A` with `H` the Heisenberg group on `V = F_{ℓ²}` (symplectic form
/// the determinant in the basis `{1, X}`) and `A` the norm-one subgroup of
/// `F_{ℓ²}^×` (isomorphic to `F_{ℓ²}^×/F_ℓ^×`), acting by scaling on `V` and
/// trivially on the centre `Z`.
pub fn build_heisenberg_semidirect(l: u64, p: u64) -> Result<FiniteGroup> {
    if !is_prime(l) || l == 2 {
        return Err(Error::InvalidInput(format!("ℓ = {l} must be an odd prime")));
    }
    if !is_prime(p) || p == l {
        return Err(Error::InvalidInput(format!("p = {p} must be a prime different from ℓ")));
    }
    if (l + 1) % p != 0 {
        return Err(Error::InvalidInput(format!("p = {p} does not divide ℓ + 1")));
    }
    if l > 23 {
        return Err(Error::InvalidInput(format!("ℓ = {l} exceeds the cap 23")));
    }
    let (q0, q1) = torus_quadratic(l);
    // generator of F_{ℓ²}^× (first in (α, β) order), then a = gen^{ℓ-1}
    let q = l * l - 1;
    let fmul = |x: (u64, u64), y: (u64, u64)| field_mul(l, q0, q1, x, y);
    let order_of = |x: (u64, u64)| {
        let mut k = 1;
        let mut y = x;
        while y != (1, 0) {
            y = fmul(y, x);
            k += 1;
        }
        k
    };
    let mut gen = None;
    'outer: for alpha in 0..l {
        for beta in 0..l {
            if (alpha, beta) != (0, 0) && order_of((alpha, beta)) == q {
                gen = Some((alpha, beta));
                break 'outer;
            }
        }
    }
    let gen = gen.expect("F_{ℓ²}^× is cyclic");
    let mut a = (1, 0);
    for _ in 0..l - 1 {
        a = fmul(a, gen);
    }
    let n = l + 1;
    let mut a_pows = Vec::with_capacity(n as usize);
    let mut cur = (1u64, 0u64);
    for _ in 0..n {
        a_pows.push(cur);
        cur = fmul(cur, a);
    }
    if cur != (1, 0) || order_of(a) != n {
        return Err(Error::Internal("A does not have order ℓ + 1".into()));
    }
    // fixed-point-free action on V
    for (j, &aj) in a_pows.iter().enumerate().skip(1) {
        for v0 in 0..l {
            for v1 in 0..l {
                if (v0, v1) != (0, 0) && fmul(aj, (v0, v1)) == (v0, v1) {
                    return Err(Error::Internal(format!("a^{j} fixes a nonzero vector")));
                }
            }
        }
    }
    let half = mod_inv(2, l).expect("ℓ odd");
    let law = GroupLaw::Heisenberg {
        l,
        q0,
        q1,
        half,
        a_pows,
    };
    let keys: Vec<u64> = (0..l * l * l * n).collect();
    let mut g = FiniteGroup::from_keys(law, format!("Heis(F{l})⋊C{n}"), keys, l * l * l * n, 0)?;
    let key = |v0: u64, v1: u64, z: u64, j: u64| v0 + l * v1 + l * l * z + l * l * l * j;
    let idx = |g: &FiniteGroup, k: u64| g.index_of_key(k).expect("key in range");
    let h: Vec<usize> = (0..l * l * l).map(|k| idx(&g, k)).collect();
    g.mark_elements("H", h);
    let z: Vec<usize> = (0..l).map(|z| idx(&g, key(0, 0, z, 0))).collect();
    g.mark_elements("Z", z);
    let a_gen = idx(&g, key(0, 0, 0, 1));
    g.mark_generated("A", &[a_gen]);
    let za: Vec<usize> = (0..l)
        .flat_map(|z| (0..n).map(move |j| (z, j)))
        .map(|(z, j)| idx(&g, key(0, 0, z, j)))
        .collect();
    g.mark_elements("ZA", za);
    let line: Vec<usize> = (0..l)
        .flat_map(|v0| (0..l).map(move |z| (v0, z)))
        .map(|(v0, z)| idx(&g, key(v0, 0, z, 0)))
        .collect();
    g.mark_elements("Hline", line);
    let pa = p.pow(vp(n, p));
    let p_gen = g.pow(a_gen, n / pa);
    g.mark_generated("P", &[p_gen]);
    let a_prime_gen = g.pow(a_gen, pa);
    g.mark_generated("Aprime", &[a_prime_gen]);
    let mut nn = g.subgroup("H").generators.clone();
    nn.push(a_prime_gen);
    g.mark_generated("N", &nn);
    let z_gen = idx(&g, key(0, 0, 1, 0));
    g.heisenberg = Some(HeisenbergData {
        q0,
        q1,
        a_gen,
        a_order: n,
        z_gen,
    });
    Ok(g)
}

/// Structural verification of `G = N ⋊ P` with `p ∤ |N|`, `N` normal and `N ∩ P = 1`.
pub fn verify_p_nilpotent(g: &FiniteGroup, n_name: &str, p_name: &str, p: u64) -> bool {
    let n = g.subgroup(n_name);
    let pp = g.subgroup(p_name);
    let coprime = n.order() as u64 % p != 0;
    let p_group = factorize(pp.order() as u64).iter().all(|&(r, _)| r == p);
    let orders = n.order() * pp.order() == g.order();
    let trivial = pp.elements.iter().all(|&x| x == g.identity() || !n.contains(x));
    let normal = g
        .generators()
        .iter()
        .all(|&s| n.generators.iter().all(|&x| n.contains(g.conj(s, x))));
    coprime && p_group && orders && trivial && normal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_f5_orders() {
        let g = gl2_with_torus(5, 3).unwrap();
        assert_eq!(g.order(), 480);
        assert_eq!(g.subgroup("Z").order(), 4);
        assert_eq!(g.subgroup("U").order(), 5);
        assert_eq!(g.subgroup("ZU").order(), 20);
        assert_eq!(g.subgroup("T").order(), 24);
        assert_eq!(g.subgroup("NT").order(), 48);
        assert_eq!(g.subgroup("P").order(), 3);
        assert_eq!(g.subgroup("S").order(), 8);
        assert_eq!(g.num_classes(), 24);
        let total: usize = g.classes().iter().map(|c| c.len()).sum();
        assert_eq!(total, 480);
        assert!(g.verify_axioms());
        assert_eq!(g.exponent(), 120);
    }

    #[test]
    fn brute_force_count_of_invertible_matrices() {
        let l = 5u64;
        let mut count = 0;
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    for d in 0..l {
                        if (a * d + l * l - b * c) % l != 0 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, 480);
    }

    #[test]
    fn torus_is_self_centralising() {
        let g = gl2_with_torus(5, 3).unwrap();
        let t = g.subgroup("T");
        let x = t.generators[0];
        let p = g.subgroup("P");
        let px = p.generators[0];
        let cent: Vec<usize> = (0..g.order()).filter(|&y| g.mul(y, px) == g.mul(px, y)).collect();
        assert_eq!(cent, t.elements);
        assert!(t.contains(x));
        let td = g.torus.as_ref().unwrap();
        assert_eq!((td.q0, td.q1), (2, 0));
        assert!(!t.contains(td.weyl));
    }

    #[test]
    fn torus_double_cosets() {
        let g = gl2_with_torus(5, 3).unwrap();
        let t = g.subgroup("T").clone();
        let dc = g.double_cosets(&t, &t);
        assert_eq!(dc.sizes.iter().sum::<usize>(), 480);
        let nt = g.subgroup("NT");
        let z = &g.subgroup("Z").elements;
        for (s, inter) in dc.representatives.iter().zip(&dc.intersections) {
            if nt.contains(*s) {
                assert_eq!(inter.len(), 24);
            } else {
                assert_eq!(inter, z);
            }
        }
        let whole = g.whole();
        let one = g.double_cosets(&whole, &whole);
        assert_eq!(one.representatives.len(), 1);
        assert_eq!(one.intersections[0].len(), 480);
    }

    #[test]
    fn heisenberg_semidirect_structure() {
        let g = build_heisenberg_semidirect(5, 3).unwrap();
        assert_eq!(g.order(), 750);
        assert_eq!(g.subgroup("H").order(), 125);
        assert_eq!(g.subgroup("Z").order(), 5);
        assert_eq!(g.subgroup("A").order(), 6);
        assert_eq!(g.subgroup("ZA").order(), 30);
        assert_eq!(g.subgroup("P").order(), 3);
        assert!(g.verify_axioms());
        let hd = g.heisenberg.as_ref().unwrap();
        assert_eq!(g.conj(hd.a_gen, hd.z_gen), hd.z_gen);
        assert!(verify_p_nilpotent(&g, "N", "P", 3));
        assert_eq!(g.exponent(), 30);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(build_gl2(29).is_err());
        assert!(build_gl2(9).is_err());
        assert!(build_heisenberg_semidirect(7, 3).is_err());
    }

    #[test]
    fn quadratics() {
        assert_eq!(torus_quadratic(11), (9, 0));
        assert_eq!(torus_quadratic(5), (2, 0));
        assert_eq!(torus_quadratic(7), (4, 0));
    }
}
