#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

use wbrauer::diagram::BrauerDiagram;
use wbrauer::scalar::Scalar;
use wbrauer::sdp::{Algebra, DiagramTerm, Operand, SparseEntry, UnitEntry, UnitOperand};

pub fn rng(seed: u64) -> rand::rngs::StdRng {
    rand::rngs::StdRng::seed_from_u64(seed)
}

/// Generator matrices from the data file, keyed by the mixed diagram text.
pub fn load_a32() -> BTreeMap<String, Vec<Vec<Vec<Scalar>>>> {
    let text = include_str!("../data/a32_irreps.txt");
    let mut out: BTreeMap<String, Vec<Vec<Vec<Scalar>>>> = BTreeMap::new();
    let mut cur: Option<String> = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix("irrep ") {
            cur = Some(name.trim().to_string());
            out.insert(name.trim().to_string(), Vec::new());
        } else if line.starts_with("gen ") {
            out.get_mut(cur.as_ref().unwrap()).unwrap().push(Vec::new());
        } else {
            let row: Vec<Scalar> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
            out.get_mut(cur.as_ref().unwrap()).unwrap().last_mut().unwrap().push(row);
        }
    }
    out
}

/// Lexicographic successor of a permutation; false after the last one.
pub fn next_perm(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Mirror image top <-> bottom, so `psi(flip(pi)) = psi(pi)^T`.
pub fn flip(pi: &BrauerDiagram) -> BrauerDiagram {
    let n = pi.n();
    let sw = |i: usize| (i + n) % (2 * n);
    let mut partner = vec![0; 2 * n];
    for (i, &j) in pi.partner().iter().enumerate() {
        partner[sw(i)] = sw(j);
    }
    BrauerDiagram::from_partner(pi.p(), pi.q(), partner).unwrap()
}

/// `sum c (pi + flip(pi)) / 2` over a few random diagrams.
pub fn random_symmetric_diagrams<R: Rng>(p: usize, q: usize, terms: usize, rng: &mut R) -> Vec<DiagramTerm> {
    let all = BrauerDiagram::all(p, q);
    let mut out = Vec::new();
    for _ in 0..terms {
        let pi = &all[rng.random_range(0..all.len())];
        let c: f64 = rng.random_range(-1.0..1.0);
        out.push(DiagramTerm { diagram: pi.to_string(), coeff: c / 2.0 });
        out.push(DiagramTerm { diagram: flip(pi).to_string(), coeff: c / 2.0 });
    }
    out
}

pub fn random_symmetric_units<R: Rng>(alg: &Algebra, rng: &mut R) -> UnitOperand {
    let mut entries = Vec::new();
    for irr in alg.irreps() {
        let n = irr.dim();
        for s in 0..n {
            for t in s..n {
                let v: f64 = rng.random_range(-1.0..1.0);
                let (a, b) = (irr.paths()[s].to_string(), irr.paths()[t].to_string());
                entries.push(UnitEntry { s: a.clone(), t: b.clone(), value: v });
                if s != t {
                    entries.push(UnitEntry { s: b, t: a, value: v });
                }
            }
        }
    }
    UnitOperand { entries }
}

pub fn digits(mut k: usize, n: usize, d: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    for i in (0..n).rev() {
        v[i] = k % d;
        k /= d;
    }
    v
}

/// `sum value |row><col|`.
pub fn sparse_from_dense(m: &DMatrix<f64>, n: usize, d: usize) -> Vec<SparseEntry> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)].abs() > 1e-14 {
                out.push(SparseEntry { row: digits(i, n, d), col: digits(j, n, d), value: m[(i, j)] });
            }
        }
    }
    out
}

/// Dense matrix of an operand, built without the Schur transform.
pub fn dense_operand(op: &Operand, alg: &Algebra, mu: &mut wbrauer::irreps::MatrixUnits) -> DMatrix<f64> {
    let dim = alg.d.pow((alg.p + alg.q) as u32);
    match op {
        Operand::Identity { scale } => DMatrix::identity(dim, dim) * *scale,
        Operand::Diagrams { terms } => {
            let mut m = DMatrix::zeros(dim, dim);
            for t in terms {
                let pi: BrauerDiagram = t.diagram.parse().unwrap();
                m += pi.psi(alg.d).unwrap() * t.coeff;
            }
            m
        }
        Operand::Computational { entries } => {
            let mut m = DMatrix::zeros(dim, dim);
            let idx = |v: &[usize]| v.iter().fold(0, |a, &x| a * alg.d + x);
            for e in entries {
                m[(idx(&e.row), idx(&e.col))] += e.value;
            }
            m
        }
        Operand::MatrixUnits(u) => {
            let y = alg.resolve(u).unwrap();
            let mut m = DMatrix::zeros(dim, dim);
            for (b, irr) in alg.irreps().iter().enumerate() {
                for s in 0..irr.dim() {
                    for t in 0..irr.dim() {
                        let v = y.blocks[b][(s, t)];
                        if v != 0.0 {
                            m += mu.unit(irr, &irr.paths()[s], &irr.paths()[t]).unwrap() * v;
                        }
                    }
                }
            }
            m
        }
    }
}

/// Trace over the systems after the first `keep`.
pub fn dense_partial_trace(x: &DMatrix<f64>, n: usize, d: usize, keep: usize) -> DMatrix<f64> {
    let kd = d.pow(keep as u32);
    let rest = d.pow((n - keep) as u32);
    let mut out = DMatrix::zeros(kd, kd);
    for a in 0..kd {
        for b in 0..kd {
            for c in 0..rest {
                out[(a, b)] += x[(a * rest + c, b * rest + c)];
            }
        }
    }
    out
}
