//! Port-based teleportation on `A_{p,1}`: the spectrum of `rho`, the
//! pretty-good POVM in Gelfand-Tsetlin coordinates, its Naimark dilation on
//! the dilated Bratteli diagram, the `W_lambda` rotations, and a dense
//! simulation of the protocol.
//!
//! Systems `1..p` are Alice's ports `A_1..A_p`, system `p+1` is the input
//! register `C`, which carries the dual action.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::bratteli::{dilated_paths, irr_labels, IrrepLabel, Path, Tower};
use crate::combinat::{syt_count, Cell, Partition};
use crate::diagram::{check_dense, compose_word, kron, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};
use crate::exact::SurdMatrix;
use crate::irreps::Irrep;
use crate::scalar::{Rational, Scalar, Surd};
use crate::schur::SchurTransform;

/// Upper bound on `d^(p+1)` for dense simulation.
pub const SIMULATION_CAP: u128 = 1_000_000;

/// Word of the cyclic shift `pi = sigma_1 sigma_2 ... sigma_{p-1}`.
pub fn cyclic_word(p: usize) -> Vec<usize> {
    (1..p).collect()
}

/// Word of `pi^k sigma_p pi^{-k}`.
pub fn rho_word(p: usize, k: usize) -> Vec<usize> {
    let mut w = Vec::new();
    for _ in 0..k % p {
        w.extend(cyclic_word(p));
    }
    w.push(p);
    for _ in 0..k % p {
        w.extend((1..p).rev());
    }
    w
}

/// Port joined to `C` by the contraction `pi^k sigma_p pi^{-k}` (1-based).
pub fn port_of(p: usize, k: usize) -> Result<usize> {
    let (g, _) = compose_word(&rho_word(p, k), p, 1)?;
    Ok(g.partner()[p] + 1)
}

fn check_sizes(p: usize, d: usize) -> Result<()> {
    if p < 1 || d < 1 {
        return Err(Error::InvalidArgument("need p >= 1 and d >= 1".into()));
    }
    Ok(())
}

/// Eigenvalue of `rho` on every Gelfand-Tsetlin vector. `rho = d - J_{p+1}`,
/// so this is `d + cont(T^p \ lambda_l)` when `lambda_r` is empty, else 0.
pub fn rho_spectrum(p: usize, d: usize) -> Result<Vec<(IrrepLabel, Path, Rational)>> {
    check_sizes(p, d)?;
    let mut out = Vec::new();
    for label in irr_labels(p, 1, d)? {
        let tower = Tower::new(p, 1, d)?;
        for t in tower.paths_to(p + 1, &label.shape) {
            out.push((label.clone(), t.clone(), rho_eigenvalue(&t, p, d)));
        }
    }
    Ok(out)
}

fn rho_eigenvalue(t: &Path, p: usize, d: usize) -> Rational {
    if !t.leaf().right.is_empty() {
        return Rational::from_integer(0);
    }
    let removed = t.leaf().left.added_cell(&t.vertex(p).left).expect("step p+1 removes a left box");
    Rational::from_integer(d as i128 + removed.content() as i128)
}

/// `sqrt(d_{T^p} / (p d_{T^{p-1}}))` with symmetric-group dimensions.
fn amplitude(t: &Path, p: usize) -> Rational {
    let num = syt_count(&t.vertex(p).left) as i128;
    let den = p as i128 * syt_count(&t.vertex(p - 1).left) as i128;
    Rational::new(num, den)
}

/// `sum_S |w_S><w_S|` over the given paths; `w_S` is supported on paths
/// through `S` with `T^{p-1} = T^{p+1}`.
fn w_projector(paths: &[Path], p: usize) -> Result<SurdMatrix> {
    let n = paths.len();
    let mut m = SurdMatrix::zeros(n, n);
    let mut groups: BTreeMap<Vec<Vec<i64>>, Vec<usize>> = BTreeMap::new();
    for (i, t) in paths.iter().enumerate() {
        if !t.leaf().right.is_empty() || t.vertex(p - 1).left != t.leaf().left {
            continue;
        }
        let key: Vec<Vec<i64>> = t.vertices()[..p].iter().map(|v| v.left.padded(p)).collect();
        groups.entry(key).or_default().push(i);
    }
    for members in groups.values() {
        for &i in members {
            for &j in members {
                let a = amplitude(&paths[i], p);
                let b = amplitude(&paths[j], p);
                m.set_scalar(i, j, &Scalar::sqrt(a * b))?;
            }
        }
    }
    Ok(m)
}

fn conjugate_by_shift(pi: &SurdMatrix, e: &SurdMatrix, k: usize) -> Result<SurdMatrix> {
    let mut out = e.clone();
    let pt = pi.transpose();
    for _ in 0..k {
        out = pi.mul(&out)?.mul(&pt)?;
    }
    Ok(out)
}

fn complete(ops: &mut Vec<SurdMatrix>, n: usize) -> Result<()> {
    let mut rest = SurdMatrix::identity(n);
    for e in ops.iter() {
        rest = rest.sub(e)?;
    }
    ops.insert(0, rest);
    Ok(())
}

/// POVM restricted to one irrep, `E_0 .. E_p`, in path order.
#[derive(Clone, Debug)]
pub struct PovmBlock {
    pub label: IrrepLabel,
    pub paths: Vec<Path>,
    pub elements: Vec<SurdMatrix>,
}

/// Dilated PVM restricted to one irrep. `embedding[i]` is the dilated index
/// of the i-th ordinary path.
#[derive(Clone, Debug)]
pub struct PvmBlock {
    pub label: IrrepLabel,
    pub paths: Vec<Path>,
    pub embedding: Vec<usize>,
    pub elements: Vec<SurdMatrix>,
}

impl PvmBlock {
    /// `Pi_k` restricted to the ordinary paths.
    pub fn compress(&self, k: usize) -> SurdMatrix {
        let n = self.embedding.len();
        let mut m = SurdMatrix::zeros(n, n);
        for (i, &a) in self.embedding.iter().enumerate() {
            for (j, &b) in self.embedding.iter().enumerate() {
                m.set(i, j, self.elements[k].get(a, b));
            }
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct PbtMeasurement {
    pub p: usize,
    pub d: usize,
    pub povm: Vec<PovmBlock>,
    pub dilated_pvm: Vec<PvmBlock>,
}

/// Which measurement Alice performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Protocol {
    /// `E_k = rho^{-1/2} rho_k rho^{-1/2}`.
    PrettyGood,
    /// `E_k = rho_k / (d + p - 1)`, the largest multiple of `rho_k` for which
    /// the `E_k` still sum to at most `I`. Teleports exactly when `k >= 1`.
    ProbabilisticExact,
}

/// Pretty-good POVM from the `w` vectors, one block per irrep of `A_{p,1}`.
pub fn build_povm(p: usize, d: usize) -> Result<Vec<PovmBlock>> {
    build_povm_for(p, d, Protocol::PrettyGood)
}

pub fn build_povm_for(p: usize, d: usize, protocol: Protocol) -> Result<Vec<PovmBlock>> {
    check_sizes(p, d)?;
    let mut out = Vec::new();
    for label in irr_labels(p, 1, d)? {
        let irr = Irrep::new(&label, p, 1, d)?;
        let n = irr.dim();
        let mut elements = Vec::new();
        match protocol {
            Protocol::PrettyGood => {
                let ep = w_projector(irr.paths(), p)?;
                let pi = irr.word(&cyclic_word(p))?;
                for k in 1..=p {
                    elements.push(conjugate_by_shift(&pi, &ep, k)?);
                }
            }
            Protocol::ProbabilisticExact => {
                let x = Rational::new(1, (d + p - 1) as i128);
                for k in 1..=p {
                    elements.push(irr.word(&rho_word(p, k))?.scale(&x)?);
                }
            }
        }
        complete(&mut elements, n)?;
        out.push(PovmBlock { label, paths: irr.paths().to_vec(), elements });
    }
    Ok(out)
}

/// `E_k` through `rho^{-1/2} psi_lambda(rho_k) rho^{-1/2}`, with the
/// generalized inverse taken on the exact diagonal of `rho`.
pub fn povm_from_rho(p: usize, d: usize) -> Result<Vec<PovmBlock>> {
    check_sizes(p, d)?;
    let mut out = Vec::new();
    for label in irr_labels(p, 1, d)? {
        let irr = Irrep::new(&label, p, 1, d)?;
        let n = irr.dim();
        let rho_k: Vec<SurdMatrix> = (1..=p).map(|k| irr.word(&rho_word(p, k))).collect::<Result<_>>()?;
        let mut rho = SurdMatrix::zeros(n, n);
        for r in &rho_k {
            rho = rho.add(r)?;
        }
        if !rho.is_diagonal() {
            return Err(Error::CheckFailed(format!("rho is not diagonal on {label}")));
        }
        let mut inv_sqrt = SurdMatrix::zeros(n, n);
        for i in 0..n {
            let v = rho.get(i, i).as_rational().ok_or(Error::CheckFailed("irrational rho eigenvalue".into()))?;
            if v != Rational::from_integer(0) {
                inv_sqrt.set_scalar(i, i, &Scalar::sqrt(v.recip()))?;
            }
        }
        let mut elements = Vec::new();
        for r in &rho_k {
            elements.push(inv_sqrt.mul(r)?.mul(&inv_sqrt)?);
        }
        complete(&mut elements, n)?;
        out.push(PovmBlock { label, paths: irr.paths().to_vec(), elements });
    }
    Ok(out)
}

/// `Pi_k = pi^k (sum_S |w~_S><w~_S|) pi^{-k}` over dilated paths.
pub fn build_dilated_pvm(p: usize, d: usize) -> Result<Vec<PvmBlock>> {
    check_sizes(p, d)?;
    let mut out = Vec::new();
    for label in irr_labels(p, 1, d)? {
        let ordinary = Tower::new(p, 1, d)?.paths_to(p + 1, &label.shape);
        let paths = dilated_paths(&label, p, d)?;
        let undilated_side = !label.shape.right.is_empty();
        let tower = if undilated_side { Tower::new(p, 1, d)? } else { Tower::dilated(p, d)? };
        let irr = Irrep::symmetric_part(tower, label.shape.clone(), paths.clone())?;
        let embedding = ordinary
            .iter()
            .map(|t| {
                let td = if undilated_side { t.clone() } else { t.dilated()? };
                irr.index_of(&td).ok_or_else(|| Error::Mismatch(format!("{t} missing from the dilated basis")))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = irr.dim();
        let pp = w_projector(&paths, p)?;
        let pi = irr.word(&cyclic_word(p))?;
        let mut elements = Vec::new();
        for k in 1..=p {
            elements.push(conjugate_by_shift(&pi, &pp, k)?);
        }
        complete(&mut elements, n)?;
        out.push(PvmBlock { label, paths, embedding, elements });
    }
    Ok(out)
}

pub fn build_measurement(p: usize, d: usize) -> Result<PbtMeasurement> {
    Ok(PbtMeasurement { p, d, povm: build_povm(p, d)?, dilated_pvm: build_dilated_pvm(p, d)? })
}

/// Column `W_lambda |0>` and a Householder completion to an orthogonal
/// matrix.
#[derive(Clone, Debug)]
pub struct WRotation {
    pub lambda: Partition,
    pub cells: Vec<Cell>,
    pub amplitudes: Vec<Scalar>,
    pub matrix: DMatrix<f64>,
}

/// `W_lambda` for `lambda` at level `p - 1` with at most `d` rows; the
/// cells are all of `AC(lambda)`, including row `d + 1`.
pub fn w_rotation(lambda: &Partition, p: usize, d: usize) -> Result<WRotation> {
    if lambda.size() + 1 != p {
        return Err(Error::InvalidArgument(format!("{lambda:?} is not at level p - 1 = {}", p.saturating_sub(1))));
    }
    if lambda.length() > d {
        return Err(Error::InvalidShape(format!("{lambda:?} has more than {d} rows")));
    }
    let cells = lambda.addable();
    let dl = syt_count(lambda) as i128;
    let mut amplitudes = Vec::new();
    for &a in &cells {
        let mu = lambda.with_added(a).expect("addable");
        amplitudes.push(Scalar::sqrt(Rational::new(syt_count(&mu) as i128, p as i128 * dl)));
    }
    let n = cells.len();
    let w = nalgebra::DVector::from_iterator(n, amplitudes.iter().map(|s| s.to_f64()));
    let mut v = -w.clone();
    v[0] += 1.0;
    let vv = v.dot(&v);
    let matrix =
        if vv < 1e-300 { DMatrix::identity(n, n) } else { DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv) };
    Ok(WRotation { lambda: lambda.clone(), cells, amplitudes, matrix })
}

/// Exact checks of a measurement. All residuals are exact zero tests.
#[derive(Clone, Debug, Default)]
pub struct PbtReport {
    pub povm_complete: bool,
    pub povm_psd: bool,
    pub min_povm_eigenvalue: f64,
    pub pvm_idempotent: bool,
    pub pvm_orthogonal: bool,
    pub compress_matches: bool,
    pub w_norms_one: bool,
}

pub fn verify_measurement(m: &PbtMeasurement) -> Result<PbtReport> {
    let mut r = PbtReport {
        povm_complete: true,
        povm_psd: true,
        min_povm_eigenvalue: f64::INFINITY,
        pvm_idempotent: true,
        pvm_orthogonal: true,
        compress_matches: true,
        w_norms_one: true,
    };
    for b in &m.povm {
        let n = b.paths.len();
        let mut sum = SurdMatrix::zeros(n, n);
        for e in &b.elements {
            sum = sum.add(e)?;
            let ev = e.to_dense().symmetric_eigenvalues().min();
            r.min_povm_eigenvalue = r.min_povm_eigenvalue.min(ev);
        }
        r.povm_complete &= sum == SurdMatrix::identity(n);
    }
    r.povm_psd = r.min_povm_eigenvalue >= -1e-12;
    for (b, e) in m.dilated_pvm.iter().zip(&m.povm) {
        for (j, pj) in b.elements.iter().enumerate() {
            for (k, pk) in b.elements.iter().enumerate() {
                let prod = pj.mul(pk)?;
                if j == k {
                    r.pvm_idempotent &= prod == *pj;
                } else {
                    r.pvm_orthogonal &= prod.is_zero();
                }
            }
        }
        for k in 0..=m.p {
            r.compress_matches &= b.compress(k) == e.elements[k];
        }
    }
    for label in irr_labels(m.p, 1, m.d)? {
        if label.shape.right.is_empty() && m.p >= 1 {
            let w = w_rotation(&label.shape.left, m.p, m.d)?;
            let s: Rational = w.amplitudes.iter().map(|a| a.square()).sum();
            r.w_norms_one &= s == Rational::from_integer(1);
        }
    }
    Ok(r)
}

/// Dense `E_k` on `(C^d)^{p+1}`: `U^T (⊕ E_k^lambda ⊗ I) U`.
pub fn dense_povm(p: usize, d: usize, blocks: &[PovmBlock]) -> Result<Vec<DMatrix<f64>>> {
    let sch = SchurTransform::new(p, 1, d)?;
    let u = sch.dense()?;
    let dim = u.nrows();
    let mut out = Vec::new();
    for k in 0..=p {
        let mut blk = DMatrix::<f64>::zeros(dim, dim);
        let mut at = 0;
        for b in blocks {
            let m = b.label.m() as usize;
            let e = kron(&b.elements[k].to_dense(), &DMatrix::<f64>::identity(m, m));
            let s = e.nrows();
            blk.view_mut((at, at), (s, s)).copy_from(&e);
            at += s;
        }
        if at != dim {
            return Err(Error::CheckFailed("blocks do not cover the space".into()));
        }
        out.push(u.transpose() * blk * &u);
    }
    Ok(out)
}

/// Input of a simulation: an explicit vector or a Haar-random one.
#[derive(Clone, Debug)]
pub enum InputState {
    Vector(Vec<Complex64>),
    Random(u64),
}

impl InputState {
    pub fn resolve(&self, d: usize) -> Result<Vec<Complex64>> {
        let v = match self {
            InputState::Vector(v) => v.clone(),
            InputState::Random(seed) => {
                let mut rng = rand::rngs::StdRng::seed_from_u64(*seed);
                (0..d)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex64::new(re, im)
                    })
                    .collect()
            }
        };
        if v.len() != d {
            return Err(Error::InvalidArgument(format!("state has {} amplitudes, expected {d}", v.len())));
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidArgument("state is zero".into()));
        }
        Ok(v.into_iter().map(|z| z / norm).collect())
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub k: usize,
    /// Bob's port holding the state; `None` for `k = 0`.
    pub port: Option<usize>,
    pub probability: f64,
    /// Normalized state of Bob's port.
    pub state: Option<DMatrix<Complex64>>,
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub p: usize,
    pub d: usize,
    pub protocol: Protocol,
    pub input: Vec<Complex64>,
    pub outcomes: Vec<Outcome>,
}

/// Dense simulation with `p` maximally entangled pairs `A_i B_i`.
pub fn simulate_pbt(p: usize, d: usize, input: &InputState, protocol: Protocol) -> Result<Simulation> {
    check_sizes(p, d)?;
    let alice = (d as u128).checked_pow(p as u32 + 1).ok_or(Error::Overflow)?;
    if alice > SIMULATION_CAP {
        return Err(Error::SizeCap { entries: alice, cap: SIMULATION_CAP });
    }
    check_dense(alice, DEFAULT_DENSE_CAP)?;
    let psi = input.resolve(d)?;
    let blocks = build_povm_for(p, d, protocol)?;
    let ops = dense_povm(p, d, &blocks)?;
    let na = alice as usize;
    let nb = d.pow(p as u32);
    // |Phi> = sum_a |a>_A |c>_C |a>_B psi_c / sqrt(d^p), as an (A C) x B matrix
    let mut st = DMatrix::<Complex64>::zeros(na, nb);
    let scale = 1.0 / (nb as f64).sqrt();
    for a in 0..nb {
        for (c, amp) in psi.iter().enumerate() {
            st[(a * d + c, a)] = amp * scale;
        }
    }
    let mut outcomes = Vec::new();
    for (k, e) in ops.iter().enumerate() {
        let ec = e.map(|x| Complex64::new(x, 0.0));
        // Bob's unnormalized state: (st^dag E st)^T
        let rb = (st.adjoint() * ec * &st).transpose();
        let prob = rb.trace().re;
        if k == 0 {
            outcomes.push(Outcome { k, port: None, probability: prob, state: None, fidelity: None });
            continue;
        }
        let port = port_of(p, k)?;
        let red = reduce_to_port(&rb, p, d, port - 1);
        let (state, fidelity) = if prob > 1e-14 {
            let s = red / Complex64::new(prob, 0.0);
            let mut f = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    f += psi[i].conj() * s[(i, j)] * psi[j];
                }
            }
            (Some(s), Some(f.re))
        } else {
            (None, None)
        };
        outcomes.push(Outcome { k, port: Some(port), probability: prob, state, fidelity });
    }
    Ok(Simulation { p, d, protocol, input: psi, outcomes })
}

/// Partial trace of an operator on `(C^d)^p` onto factor `keep` (0-based).
fn reduce_to_port(r: &DMatrix<Complex64>, p: usize, d: usize, keep: usize) -> DMatrix<Complex64> {
    let n = d.pow(p as u32);
    let stride = d.pow((p - 1 - keep) as u32);
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for a in 0..n {
        for b in 0..n {
            let (da, db) = ((a / stride) % d, (b / stride) % d);
            // the other factors must agree
            if a - da * stride == b - db * stride {
                out[(da, db)] += r[(a, b)];
            }
        }
    }
    out
}

/// Entries of a SurdMatrix as strings, for JSON dumps.
pub fn matrix_strings(m: &SurdMatrix) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let v: Surd = m.get(i, j);
                    v.as_scalar().map(|s| s.to_string()).unwrap_or_else(|| v.to_string())
                })
                .collect()
        })
        .collect()
}

impl PbtMeasurement {
    /// POVM blocks, dilated PVM blocks with their embeddings, and the
    /// `W_lambda` amplitudes.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let povm: Vec<_> = self
            .povm
            .iter()
            .map(|b| {
                serde_json::json!({
                    "irrep": b.label.to_string(),
                    "staircase": b.label.staircase().entries(),
                    "paths": b.paths.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "elements": b.elements.iter().map(matrix_strings).collect::<Vec<_>>(),
                })
            })
            .collect();
        let pvm: Vec<_> = self
            .dilated_pvm
            .iter()
            .map(|b| {
                serde_json::json!({
                    "irrep": b.label.to_string(),
                    "paths": b.paths.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "embedding": b.embedding,
                    "elements": b.elements.iter().map(matrix_strings).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut rotations = Vec::new();
        for label in irr_labels(self.p, 1, self.d)? {
            if !label.shape.right.is_empty() {
                continue;
            }
            let w = w_rotation(&label.shape.left, self.p, self.d)?;
            rotations.push(serde_json::json!({
                "lambda": w.lambda.parts(),
                "cells": w.cells.iter().map(|c| [c.row, c.col]).collect::<Vec<_>>(),
                "amplitudes": w.amplitudes.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "matrix": (0..w.matrix.nrows())
                    .map(|i| (0..w.matrix.ncols()).map(|j| w.matrix[(i, j)]).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }));
        }
        Ok(serde_json::json!({
            "p": self.p,
            "d": self.d,
            "ports": (1..=self.p).map(|k| port_of(self.p, k)).collect::<Result<Vec<_>>>()?,
            "povm": povm,
            "dilated_pvm": pvm,
            "w_rotations": rotations,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_examples() {
        let s = rho_spectrum(1, 2).unwrap();
        let nonzero: Vec<_> = s.iter().filter(|x| x.2 != Rational::from_integer(0)).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].2, Rational::from_integer(2));
        let s = rho_spectrum(3, 3).unwrap();
        let mut ev: Vec<i128> = s
            .iter()
            .filter(|x| x.0.shape.left.parts() == [2] && x.0.shape.right.is_empty() && x.2 != Rational::from_integer(0))
            .map(|x| x.2.to_integer())
            .collect();
        ev.sort();
        ev.dedup();
        assert_eq!(ev, vec![2, 5]);
    }

    #[test]
    fn row_rotation() {
        let w = w_rotation(&Partition::row(3), 4, 2).unwrap();
        let sq: Vec<Rational> = w.amplitudes.iter().map(|a| a.square()).collect();
        assert_eq!(sq, vec![Rational::new(1, 4), Rational::new(3, 4)]);
        let q = &w.matrix;
        assert!((q.transpose() * q - DMatrix::identity(2, 2)).abs().max() < 1e-14);
        assert!((q[(0, 0)] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn ports_cycle() {
        let mut ports: Vec<usize> = (1..=3).map(|k| port_of(3, k).unwrap()).collect();
        ports.sort();
        assert_eq!(ports, vec![1, 2, 3]);
    }

    #[test]
    fn w_construction_equals_rho_route() {
        for (p, d) in [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)] {
            let a = build_povm(p, d).unwrap();
            let b = povm_from_rho(p, d).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.elements, y.elements, "p={p} d={d} {}", x.label);
            }
            let r = verify_measurement(&build_measurement(p, d).unwrap()).unwrap();
            assert!(r.povm_complete && r.povm_psd, "{p} {d} {r:?}");
            assert!(r.pvm_idempotent && r.pvm_orthogonal, "{p} {d} {r:?}");
            assert!(r.compress_matches && r.w_norms_one, "{p} {d} {r:?}");
        }
    }

    #[test]
    fn dense_oracle() {
        let (p, d) = (2, 2);
        let ops = dense_povm(p, d, &build_povm(p, d).unwrap()).unwrap();
        let rk: Vec<DMatrix<f64>> =
            (1..=p).map(|k| compose_word(&rho_word(p, k), p, 1).unwrap().0.psi(d).unwrap()).collect();
        let rho = rk.iter().fold(DMatrix::zeros(8, 8), |a, b| a + b);
        let eig = rho.clone().symmetric_eigen();
        let inv = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| if x > 1e-9 { 1.0 / x.sqrt() } else { 0.0 }));
        let r = &eig.eigenvectors * inv * eig.eigenvectors.transpose();
        for k in 1..=p {
            let want = &r * &rk[k - 1] * &r;
            assert!((&ops[k] - want).abs().max() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn simulation() {
        let psi = InputState::Vector(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        for p in [2, 3] {
            let pe = simulate_pbt(p, 2, &psi, Protocol::ProbabilisticExact).unwrap();
            let pg = simulate_pbt(p, 2, &psi, Protocol::PrettyGood).unwrap();
            for o in &pe.outcomes[1..] {
                assert!((o.fidelity.unwrap() - 1.0).abs() < 1e-10);
            }
            let total: f64 = pg.outcomes.iter().map(|o| o.probability).sum();
            assert!((total - 1.0).abs() < 1e-10);
            eprintln!("{:?}", pg.outcomes.iter().map(|o| (o.probability, o.fidelity)).collect::<Vec<_>>());
            eprintln!("{:?}", pe.outcomes.iter().map(|o| (o.probability, o.fidelity)).collect::<Vec<_>>());
        }
    }
}
