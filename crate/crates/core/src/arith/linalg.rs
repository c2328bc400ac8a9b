//! Dense matrices over `R_N = O/π^N` and the Howell normal form.
//!
//! `R_N` is a chain ring, so every ideal is `π^v R_N`. The Howell form is an
//! echelon basis of the row span whose pivots are exact powers `π^v`, whose
//! entries above a pivot are canonical residues modulo that pivot, and which
//! has the Howell property: the rows with leading column `≥ j` span every
//! element of the row module vanishing in the first `j` columns. It is unique
//! for a given row span.

use std::fmt;

use super::local::{LocalRing, RElem};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct RMatrix {
    ring: LocalRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl PartialEq for RMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RMatrix {}x{} over {:?}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.entry(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of [`RMatrix::howell`]: `u · a = h`, with `pivots[i] = (column, valuation)`
/// for row `i` of `h`.
#[derive(Clone, Debug)]
pub struct HowellForm {
    pub h: RMatrix,
    pub u: RMatrix,
    pub pivots: Vec<(usize, u32)>,
}

impl HowellForm {
    /// Number of pivots that are units.
    pub fn unit_pivots(&self) -> usize {
        self.pivots.iter().filter(|&&(_, v)| v == 0).count()
    }

    /// Number of pivots that are not units.
    pub fn torsion_pivots(&self) -> usize {
        self.pivots.len() - self.unit_pivots()
    }
}

/// Result of [`RMatrix::pivoted_echelon`]. Row `i` of `h` has content
/// `π^{v_i}` and entry exactly `π^{v_i}` in column `c_i`; every later row is
/// zero in that column, and unit-pivot rows are also cleared from each other.
/// The row span is then `⊕ R_N/π^{N-v_i}`.
#[derive(Clone, Debug)]
pub struct PivotedEchelon {
    pub h: RMatrix,
    pub pivots: Vec<(usize, u32)>,
}

impl PivotedEchelon {
    /// Number of free summands, which is also the rank modulo `π`.
    pub fn free_rank(&self) -> usize {
        self.pivots.iter().filter(|&&(_, v)| v == 0).count()
    }

    pub fn torsion_rank(&self) -> usize {
        self.pivots.len() - self.free_rank()
    }

    /// Rows with unit content, which form a basis of a free direct summand.
    pub fn free_rows(&self) -> RMatrix {
        let idx: Vec<usize> = (0..self.pivots.len()).filter(|&i| self.pivots[i].1 == 0).collect();
        self.h.select_rows(&idx)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        self.pivots.iter().filter(|&&(_, v)| v == 0).map(|&(c, _)| c).collect()
    }
}

impl RMatrix {
    pub fn zeros(ring: &LocalRing, rows: usize, cols: usize) -> Self {
        RMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![0; rows * cols * ring.width()],
        }
    }

    pub fn identity(ring: &LocalRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        let one = ring.one();
        for i in 0..n {
            m.set(i, i, &one);
        }
        m
    }

    pub fn from_elems(ring: &LocalRing, rows: usize, cols: usize, elems: &[RElem]) -> Self {
        assert_eq!(elems.len(), rows * cols);
        let mut m = Self::zeros(ring, rows, cols);
        for (k, x) in elems.iter().enumerate() {
            m.set(k / cols, k % cols, x);
        }
        m
    }

    pub fn from_ints(ring: &LocalRing, rows: usize, cols: usize, vals: &[i64]) -> Self {
        let elems: Vec<RElem> = vals.iter().map(|&v| ring.from_int(v)).collect();
        Self::from_elems(ring, rows, cols, &elems)
    }

    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    fn w(&self) -> usize {
        self.ring.width()
    }

    pub fn entry(&self, i: usize, j: usize) -> &[u64] {
        let w = self.w();
        let k = (i * self.cols + j) * w;
        &self.data[k..k + w]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [u64] {
        let w = self.w();
        let k = (i * self.cols + j) * w;
        &mut self.data[k..k + w]
    }

    pub fn get(&self, i: usize, j: usize) -> RElem {
        RElem(self.entry(i, j).to_vec())
    }

    pub fn set(&mut self, i: usize, j: usize, x: &RElem) {
        self.entry_mut(i, j).copy_from_slice(&x.0);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        let len = self.cols * self.w();
        &self.data[i * len..(i + 1) * len]
    }

    pub fn row_matrix(&self, i: usize) -> RMatrix {
        RMatrix {
            ring: self.ring.clone(),
            rows: 1,
            cols: self.cols,
            data: self.row(i).to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entry_mut(j, i).copy_from_slice(self.entry(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let ring = &self.ring;
        let w = self.w();
        let mut out = RMatrix::zeros(ring, self.rows, other.cols);
        let mut tmp = vec![0u64; w];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.iter().all(|&c| c == 0) {
                    continue;
                }
                let a = a.to_vec();
                for j in 0..other.cols {
                    let b = other.entry(k, j);
                    if b.iter().all(|&c| c == 0) {
                        continue;
                    }
                    ring.mul_into(&a, b, &mut tmp);
                    ring.add_assign(out.entry_mut(i, j), &tmp);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        let w = self.w();
        for (a, b) in out.data.chunks_mut(w).zip(other.data.chunks(w)) {
            self.ring.add_assign(a, b);
        }
        out
    }

    pub fn sub(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        let w = self.w();
        for (a, b) in out.data.chunks_mut(w).zip(other.data.chunks(w)) {
            self.ring.sub_assign(a, b);
        }
        out
    }

    pub fn scale(&self, x: &RElem) -> RMatrix {
        let mut out = self.clone();
        let w = self.w();
        let mut tmp = vec![0u64; w];
        for a in out.data.chunks_mut(w) {
            self.ring.mul_into(a, &x.0, &mut tmp);
            a.copy_from_slice(&tmp);
        }
        out
    }

    pub fn hstack(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = RMatrix::zeros(&self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entry_mut(i, j).copy_from_slice(self.entry(i, j));
            }
            for j in 0..other.cols {
                out.entry_mut(i, self.cols + j).copy_from_slice(other.entry(i, j));
            }
        }
        out
    }

    pub fn vstack(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        RMatrix {
            ring: self.ring.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> RMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols * self.w());
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        RMatrix {
            ring: self.ring.clone(),
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> RMatrix {
        let mut out = RMatrix::zeros(&self.ring, self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.entry_mut(i, jj).copy_from_slice(self.entry(i, j));
            }
        }
        out
    }

    /// Same entries read in another precision of the same field.
    pub fn to_ring(&self, target: &LocalRing) -> RMatrix {
        let mut out = RMatrix::zeros(target, self.rows, self.cols);
        out.data.copy_from_slice(&self.data);
        for x in out.data.chunks_mut(target.width()) {
            target.canon(x);
        }
        out
    }

    /// Minimum valuation over all entries (`None` for the zero matrix).
    pub fn min_valuation(&self) -> Option<u32> {
        self.data
            .chunks(self.w())
            .filter_map(|x| self.ring.valuation(x))
            .min()
    }

    pub fn trace(&self) -> RElem {
        assert_eq!(self.rows, self.cols);
        let mut acc = self.ring.zero();
        for i in 0..self.rows {
            self.ring.add_assign(&mut acc.0, self.entry(i, i));
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<Vec<Vec<String>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.entry(i, j).iter().map(|c| c.to_string()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn from_strings(ring: &LocalRing, s: &[Vec<Vec<String>>]) -> Result<RMatrix> {
        let rows = s.len();
        let cols = s.first().map_or(0, |r| r.len());
        let mut m = RMatrix::zeros(ring, rows, cols);
        for (i, r) in s.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Malformed("ragged matrix".into()));
            }
            for (j, x) in r.iter().enumerate() {
                let e = ring.from_strings(x)?;
                m.set(i, j, &e);
            }
        }
        Ok(m)
    }

    /// Howell normal form of the row span together with the transformation.
    pub fn howell(&self) -> HowellForm {
        let ring = &self.ring;
        let w = self.w();
        let n = ring.precision();
        let ncols = self.cols;
        let nrows = self.rows;
        let mut work: Vec<(Vec<u64>, Vec<u64>)> = (0..nrows)
            .map(|i| {
                let mut u = vec![0u64; nrows * w];
                u[i * w..(i + 1) * w].copy_from_slice(&ring.one().0);
                (self.row(i).to_vec(), u)
            })
            .collect();
        let mut done: Vec<(Vec<u64>, Vec<u64>, usize, u32)> = Vec::new();
        let mut tmp = vec![0u64; w];
        for c in 0..ncols {
            let mut best: Option<(usize, u32)> = None;
            for (idx, (row, _)) in work.iter().enumerate() {
                if let Some(v) = ring.valuation(&row[c * w..(c + 1) * w]) {
                    if best.map_or(true, |(_, bv)| v < bv) {
                        best = Some((idx, v));
                        if v == 0 {
                            break;
                        }
                    }
                }
            }
            let Some((pi, v)) = best else { continue };
            let (mut prow, mut pu) = work.remove(pi);
            // normalise the pivot to exactly π^v
            let pivot = RElem(prow[c * w..(c + 1) * w].to_vec());
            let unit = ring.div_pi_pow(&pivot, v);
            let uinv = ring.inv(&unit).expect("pivot unit part is invertible");
            scale_slice(ring, &mut prow, &uinv.0, &mut tmp);
            scale_slice(ring, &mut pu, &uinv.0, &mut tmp);
            if v > 0 {
                // the representative of π^v·unit·unit^{-1} may differ in the
                // undetermined top digits; set it exactly
                prow[c * w..(c + 1) * w].copy_from_slice(&ring.pi_pow(v).0);
            }
            for (row, u) in work.iter_mut() {
                let x = RElem(row[c * w..(c + 1) * w].to_vec());
                if ring.is_zero(&x.0) {
                    continue;
                }
                let q = ring.div_pi_pow(&x, v);
                axpy_neg(ring, row, &q.0, &prow, c, &mut tmp);
                axpy_neg(ring, u, &q.0, &pu, 0, &mut tmp);
                row[c * w..(c + 1) * w].iter_mut().for_each(|z| *z = 0);
            }
            if v > 0 {
                let ann = ring.pi_pow(n - v);
                let mut arow = prow.clone();
                let mut au = pu.clone();
                scale_slice(ring, &mut arow, &ann.0, &mut tmp);
                scale_slice(ring, &mut au, &ann.0, &mut tmp);
                if !arow.iter().all(|&z| z == 0) {
                    work.push((arow, au));
                }
            }
            done.push((prow, pu, c, v));
        }
        // reduce entries above each pivot modulo the pivot
        for k in 0..done.len() {
            let (c, v) = (done[k].2, done[k].3);
            let (prow, pu) = (done[k].0.clone(), done[k].1.clone());
            for j in 0..k {
                let y = RElem(done[j].0[c * w..(c + 1) * w].to_vec());
                if ring.is_zero(&y.0) {
                    continue;
                }
                let r = ring.truncate(&y, v);
                let diff = ring.sub(&y, &r);
                if ring.is_zero(&diff.0) {
                    continue;
                }
                let q = ring.div_pi_pow(&diff, v);
                let (row, u) = {
                    let d = &mut done[j];
                    (&mut d.0, &mut d.1)
                };
                axpy_neg(ring, row, &q.0, &prow, c, &mut tmp);
                axpy_neg(ring, u, &q.0, &pu, 0, &mut tmp);
                row[c * w..(c + 1) * w].copy_from_slice(&r.0);
            }
        }
        let r = done.len();
        let mut h = RMatrix::zeros(ring, r, ncols);
        let mut u = RMatrix::zeros(ring, r, nrows);
        let mut pivots = Vec::with_capacity(r);
        for (i, (row, urow, c, v)) in done.into_iter().enumerate() {
            let len = ncols * w;
            h.data[i * len..(i + 1) * len].copy_from_slice(&row);
            let ulen = nrows * w;
            u.data[i * ulen..(i + 1) * ulen].copy_from_slice(&urow);
            pivots.push((c, v));
        }
        HowellForm { h, u, pivots }
    }

    /// Howell basis of the row span.
    pub fn image(&self) -> RMatrix {
        self.howell().h
    }

    /// Howell basis of the left kernel `{x : x·A = 0}`.
    pub fn kernel(&self) -> RMatrix {
        let ring = &self.ring;
        let aug = self.hstack(&RMatrix::identity(ring, self.rows));
        let hf = aug.howell();
        let keep: Vec<usize> = hf
            .pivots
            .iter()
            .enumerate()
            .filter(|(_, &(c, _))| c >= self.cols)
            .map(|(i, _)| i)
            .collect();
        let sel = hf.h.select_rows(&keep);
        let idx: Vec<usize> = (self.cols..self.cols + self.rows).collect();
        sel.select_cols(&idx)
    }

    /// One solution `x` of `x·A = b` for a row vector `b`.
    pub fn solve(&self, b: &RMatrix) -> Result<RMatrix> {
        self.solve_with(&self.howell(), b)
    }

    /// As [`solve`](Self::solve) with a precomputed Howell form of `self`.
    pub fn solve_with(&self, hf: &HowellForm, b: &RMatrix) -> Result<RMatrix> {
        assert_eq!(b.rows, 1);
        assert_eq!(b.cols, self.cols);
        let ring = &self.ring;
        let w = self.w();
        let mut rem = b.data.clone();
        let mut x = vec![0u64; self.rows * w];
        let mut tmp = vec![0u64; w];
        let mut next = 0;
        for c in 0..self.cols {
            let y = RElem(rem[c * w..(c + 1) * w].to_vec());
            while next < hf.pivots.len() && hf.pivots[next].0 < c {
                next += 1;
            }
            if ring.is_zero(&y.0) {
                continue;
            }
            if next >= hf.pivots.len() || hf.pivots[next].0 != c {
                return Err(Error::Inconsistent(format!("no pivot in column {c}")));
            }
            let v = hf.pivots[next].1;
            match ring.valuation(&y.0) {
                Some(vy) if vy < v => {
                    return Err(Error::Inconsistent(format!(
                        "entry of valuation {vy} below pivot π^{v}"
                    )))
                }
                _ => {}
            }
            let q = ring.div_pi_pow(&y, v);
            axpy_neg(ring, &mut rem, &q.0, hf.h.row(next), c, &mut tmp);
            rem[c * w..(c + 1) * w].iter_mut().for_each(|z| *z = 0);
            let negq = ring.neg(&q);
            axpy_neg(ring, &mut x, &negq.0, hf.u.row(next), 0, &mut tmp);
        }
        if !rem.iter().all(|&z| z == 0) {
            return Err(Error::Inconsistent("target not in row span".into()));
        }
        Ok(RMatrix {
            ring: ring.clone(),
            rows: 1,
            cols: self.rows,
            data: x,
        })
    }

    /// Smallest direct summand containing the row span: rows of positive
    /// content are divided by it, iterated to a fixed point. The result has
    /// the identity on its pivot columns.
    pub fn saturate(&self) -> RMatrix {
        let mut cur = self.clone();
        loop {
            let pe = cur.pivoted_echelon();
            if pe.torsion_rank() == 0 {
                return pe.h;
            }
            let mut next = pe.h.clone();
            for (i, &(_, v)) in pe.pivots.iter().enumerate() {
                if v > 0 {
                    for j in 0..next.cols {
                        let y = next.ring.div_pi_pow(&next.get(i, j), v);
                        next.set(i, j, &y);
                    }
                }
            }
            cur = next;
        }
    }

    /// Row echelon form with full pivoting: at each step the entry of least
    /// valuation anywhere in the remaining rows, ties broken by column then
    /// row. Unit pivots therefore come first, in increasing column order.
    pub fn pivoted_echelon(&self) -> PivotedEchelon {
        let ring = &self.ring;
        let w = self.w();
        let ncols = self.cols;
        let mut work: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| self.row(i).to_vec())
            .filter(|r| r.iter().any(|&z| z != 0))
            .collect();
        let mut done: Vec<(Vec<u64>, usize, u32)> = Vec::new();
        let mut tmp = vec![0u64; w];
        while !work.is_empty() {
            let mut best: Option<(u32, usize, usize)> = None;
            'scan: for c in 0..ncols {
                for (ri, row) in work.iter().enumerate() {
                    if let Some(v) = ring.valuation(&row[c * w..(c + 1) * w]) {
                        if best.map_or(true, |(bv, _, _)| v < bv) {
                            best = Some((v, c, ri));
                            if v == 0 {
                                break 'scan;
                            }
                        }
                    }
                }
            }
            let Some((v, c, ri)) = best else { break };
            let mut prow = work.remove(ri);
            let pivot = RElem(prow[c * w..(c + 1) * w].to_vec());
            let unit = ring.div_pi_pow(&pivot, v);
            let uinv = ring.inv(&unit).expect("pivot unit part is invertible");
            scale_slice(ring, &mut prow, &uinv.0, &mut tmp);
            if v > 0 {
                prow[c * w..(c + 1) * w].copy_from_slice(&ring.pi_pow(v).0);
            }
            for row in work.iter_mut() {
                let x = RElem(row[c * w..(c + 1) * w].to_vec());
                if ring.is_zero(&x.0) {
                    continue;
                }
                let q = ring.div_pi_pow(&x, v);
                axpy_neg(ring, row, &q.0, &prow, 0, &mut tmp);
                row[c * w..(c + 1) * w].iter_mut().for_each(|z| *z = 0);
            }
            work.retain(|r| r.iter().any(|&z| z != 0));
            if v == 0 {
                for (row, _, _) in done.iter_mut() {
                    let x = RElem(row[c * w..(c + 1) * w].to_vec());
                    if ring.is_zero(&x.0) {
                        continue;
                    }
                    axpy_neg(ring, row, &x.0, &prow, 0, &mut tmp);
                    row[c * w..(c + 1) * w].iter_mut().for_each(|z| *z = 0);
                }
            }
            done.push((prow, c, v));
        }
        let mut h = RMatrix::zeros(ring, done.len(), ncols);
        let len = ncols * w;
        let mut pivots = Vec::with_capacity(done.len());
        for (i, (row, c, v)) in done.into_iter().enumerate() {
            h.data[i * len..(i + 1) * len].copy_from_slice(&row);
            pivots.push((c, v));
        }
        PivotedEchelon { h, pivots }
    }

    /// Rank of the reduction modulo `π`.
    pub fn rank_mod_pi(&self) -> usize {
        self.pivoted_echelon().free_rank()
    }
}

fn scale_slice(ring: &LocalRing, row: &mut [u64], q: &[u64], tmp: &mut [u64]) {
    let w = ring.width();
    for x in row.chunks_mut(w) {
        if x.iter().all(|&z| z == 0) {
            continue;
        }
        ring.mul_into(x, q, tmp);
        x.copy_from_slice(tmp);
    }
}

/// `dst[j] -= q·src[j]` for columns `j >= start`.
fn axpy_neg(ring: &LocalRing, dst: &mut [u64], q: &[u64], src: &[u64], start: usize, tmp: &mut [u64]) {
    let w = ring.width();
    for (j, s) in src.chunks(w).enumerate().skip(start) {
        if s.iter().all(|&z| z == 0) {
            continue;
        }
        ring.mul_into(q, s, tmp);
        ring.sub_assign(&mut dst[j * w..(j + 1) * w], tmp);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::local::build_local_ring;

    fn z9() -> LocalRing {
        build_local_ring(3, 1, 2).unwrap()
    }

    #[test]
    fn three_over_z9() {
        let r = z9();
        let a = RMatrix::from_ints(&r, 1, 1, &[3]);
        let hf = a.howell();
        assert_eq!(hf.h, a);
        assert_eq!(a.kernel(), RMatrix::from_ints(&r, 1, 1, &[3]));
    }

    #[test]
    fn identity_is_its_own_form() {
        let r = z9();
        let a = RMatrix::identity(&r, 2);
        assert_eq!(a.howell().h, a);
        assert_eq!(a.kernel().rows(), 0);
    }

    #[test]
    fn pivots_one_and_three() {
        let r = z9();
        let a = RMatrix::from_ints(&r, 2, 2, &[1, 1, 0, 3]);
        let hf = a.howell();
        assert_eq!(hf.pivots, vec![(0, 0), (1, 1)]);
        assert_eq!((hf.unit_pivots(), hf.torsion_pivots()), (1, 1));
        assert_eq!(hf.u.mul(&a), hf.h);
    }

    #[test]
    fn kernel_of_uniformizer() {
        let r = build_local_ring(3, 3, 4).unwrap();
        let a = RMatrix::from_elems(&r, 1, 1, &[r.uniformizer()]);
        let k = a.kernel();
        assert_eq!(k.rows(), 1);
        assert_eq!(k.get(0, 0), r.pi_pow(3));
    }

    #[test]
    fn saturation_of_pi_line() {
        let r = build_local_ring(3, 3, 4).unwrap();
        let a = RMatrix::from_elems(&r, 1, 2, &[r.uniformizer(), r.zero()]);
        assert_eq!(a.saturate(), RMatrix::from_elems(&r, 1, 2, &[r.one(), r.zero()]));
    }

    #[test]
    fn solve_three_x_is_six() {
        let r = z9();
        let a = RMatrix::from_ints(&r, 1, 1, &[3]);
        let b = RMatrix::from_ints(&r, 1, 1, &[6]);
        let x = a.solve(&b).unwrap();
        assert_eq!(x.mul(&a), b);
        let k = a.kernel();
        let mut sols: Vec<i64> = (0..3)
            .map(|t| {
                let y = x.add(&k.scale(&r.from_int(t)));
                y.get(0, 0).0[0] as i64
            })
            .collect();
        sols.sort();
        assert_eq!(sols, vec![2, 5, 8]);
        assert!(a.solve(&RMatrix::from_ints(&r, 1, 1, &[1])).is_err());
    }

    #[test]
    fn non_unit_leading_entry_still_spans_a_summand() {
        let r = z9();
        let a = RMatrix::from_ints(&r, 1, 2, &[3, 1]);
        assert_eq!(a.howell().pivots[0], (0, 1));
        let pe = a.pivoted_echelon();
        assert_eq!(pe.pivots, vec![(1, 0)]);
        assert_eq!(a.rank_mod_pi(), 1);
        assert_eq!(a.saturate(), a);
    }

    #[test]
    fn pivoted_echelon_reads_off_invariants() {
        let r = z9();
        // span of (3, 3) and (0, 3): Z/3 ⊕ Z/3, no free part
        let a = RMatrix::from_ints(&r, 2, 2, &[3, 3, 0, 3]);
        let pe = a.pivoted_echelon();
        assert_eq!(pe.free_rank(), 0);
        assert_eq!(pe.pivots, vec![(0, 1), (1, 1)]);
        let b = RMatrix::from_ints(&r, 3, 3, &[1, 2, 0, 2, 4, 3, 0, 0, 6]);
        let pe = b.pivoted_echelon();
        assert_eq!((pe.free_rank(), pe.torsion_rank()), (1, 1));
        assert_eq!(pe.free_columns(), vec![0]);
    }
}
