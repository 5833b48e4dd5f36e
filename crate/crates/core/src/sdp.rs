//! Unitary-equivariant SDPs in matrix-unit coordinates: traces against the
//! supported operand forms, Ram-Wenzl partial traces, and the reduced SDP
//! with SDPA and JSON writers.
//!
//! An equivariant `X = sum x_{ST} E_{ST}` is stored as one real block
//! `X_lambda[S, T] = x_{ST}` per irrep. In the Schur basis `X` is
//! `⊕ X_lambda ⊗ I_{m_lambda}`.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bratteli::{IrrepLabel, Path, Tower};
use crate::diagram::BrauerDiagram;
use crate::error::{Error, Result};
use crate::irreps::{all_irreps, Irrep};
use crate::schur::SchurTransform;

/// Irreps of one `A_{p,q}` with their multiplicities, shared by all
/// operations on equivariant matrices.
pub struct Algebra {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    irreps: Vec<Irrep>,
    schur: SchurTransform,
}

impl Algebra {
    pub fn new(p: usize, q: usize, d: usize) -> Result<Self> {
        Ok(Algebra { p, q, d, irreps: all_irreps(p, q, d)?, schur: SchurTransform::new(p, q, d)? })
    }

    /// Sub-algebra on the first `k` systems.
    pub fn prefix(&self, k: usize) -> Result<Algebra> {
        let p = self.p.min(k);
        Algebra::new(p, k - p, self.d)
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn schur(&self) -> &SchurTransform {
        &self.schur
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.irreps.iter().map(|i| i.dim()).collect()
    }

    /// `sum d_lambda^2`.
    pub fn dimension(&self) -> usize {
        self.irreps.iter().map(|i| i.dim() * i.dim()).sum()
    }

    /// Irrep index and path index of `t`.
    pub fn locate(&self, t: &Path) -> Option<(usize, usize)> {
        self.irreps.iter().enumerate().find_map(|(b, irr)| irr.index_of(t).map(|i| (b, i)))
    }

    pub fn zero(&self) -> EquivariantMatrix {
        EquivariantMatrix {
            p: self.p,
            q: self.q,
            d: self.d,
            blocks: self.irreps.iter().map(|i| DMatrix::zeros(i.dim(), i.dim())).collect(),
        }
    }

    pub fn identity(&self) -> EquivariantMatrix {
        EquivariantMatrix {
            p: self.p,
            q: self.q,
            d: self.d,
            blocks: self.irreps.iter().map(|i| DMatrix::identity(i.dim(), i.dim())).collect(),
        }
    }

    /// `E_{ST}` as an equivariant matrix.
    pub fn unit(&self, s: &Path, t: &Path) -> Result<EquivariantMatrix> {
        let (bs, i) = self.locate(s).ok_or_else(|| Error::Mismatch(format!("unknown path {s}")))?;
        let (bt, j) = self.locate(t).ok_or_else(|| Error::Mismatch(format!("unknown path {t}")))?;
        if bs != bt {
            return Err(Error::Mismatch("paths end at different leaves".into()));
        }
        let mut x = self.zero();
        x.blocks[bs][(i, j)] = 1.0;
        Ok(x)
    }

    /// Dense form `U^T (⊕ X_lambda ⊗ I) U` in the computational basis.
    pub fn to_dense(&self, x: &EquivariantMatrix) -> Result<DMatrix<f64>> {
        let u = self.schur.dense()?;
        let dim = u.nrows();
        let mut blk = DMatrix::<f64>::zeros(dim, dim);
        let mut at = 0;
        for (b, irr) in self.irreps.iter().enumerate() {
            let m = irr.multiplicity() as usize;
            let k = crate::diagram::kron(&x.blocks[b], &DMatrix::<f64>::identity(m, m));
            let s = k.nrows();
            blk.view_mut((at, at), (s, s)).copy_from(&k);
            at += s;
        }
        Ok(u.transpose() * blk * u)
    }

    /// Reads off the coefficients of a dense equivariant matrix.
    pub fn from_dense(&self, x: &DMatrix<f64>) -> Result<EquivariantMatrix> {
        let u = self.schur.dense()?;
        let y = &u * x * u.transpose();
        let mut out = self.zero();
        let mut at = 0;
        for (b, irr) in self.irreps.iter().enumerate() {
            let m = irr.multiplicity() as usize;
            for s in 0..irr.dim() {
                for t in 0..irr.dim() {
                    out.blocks[b][(s, t)] = y[(at + s * m, at + t * m)];
                }
            }
            at += irr.dim() * m;
        }
        Ok(out)
    }

    /// `v_S(x)_M = <(S, M)| U |x>` for every pattern `M` of the leaf.
    pub fn chain_vector(&self, s: &Path, x: &[usize]) -> Result<DVector<f64>> {
        let n = self.p + self.q;
        if x.len() != n || x.iter().any(|&v| v >= self.d) {
            return Err(Error::InvalidArgument(format!("string must have {n} letters in 0..{}", self.d)));
        }
        let mut v = DMatrix::<f64>::from_element(1, 1, 1.0);
        for (k, &xk) in x.iter().enumerate() {
            let kind = if k < self.p { crate::schur::Kind::Plus } else { crate::schur::Kind::Minus };
            let c = self.schur.cg(xk + 1, &s.vertex(k).staircase(), &s.vertex(k + 1).staircase(), kind)?;
            v = &c.dense * v;
        }
        Ok(v.column(0).into_owned())
    }

    /// Weight of a string: `+e_x` for the first `p` letters, `-e_x` after.
    pub fn string_weight(&self, x: &[usize]) -> Vec<i64> {
        let mut w = vec![0i64; self.d];
        for (k, &v) in x.iter().enumerate() {
            w[v] += if k < self.p { 1 } else { -1 };
        }
        w
    }

    /// Coefficient tables `F` with `Tr(Y X) = sum F_lambda[S,T] x_{ST}`.
    pub fn functional(&self, y: &Operand) -> Result<Functional> {
        let mut tables: Vec<DMatrix<f64>> = self.irreps.iter().map(|i| DMatrix::zeros(i.dim(), i.dim())).collect();
        match y {
            Operand::Identity { scale } => {
                for (b, irr) in self.irreps.iter().enumerate() {
                    tables[b] = DMatrix::identity(irr.dim(), irr.dim()) * (*scale * irr.multiplicity() as f64);
                }
            }
            Operand::MatrixUnits(ym) => {
                let ym = self.resolve(ym)?;
                for (b, irr) in self.irreps.iter().enumerate() {
                    tables[b] = ym.blocks[b].transpose() * irr.multiplicity() as f64;
                }
            }
            Operand::Diagrams { terms } => {
                for term in terms {
                    let pi: BrauerDiagram = term.diagram.parse()?;
                    if pi.p() != self.p || pi.q() != self.q {
                        return Err(Error::Mismatch(format!("diagram {pi} has the wrong shape")));
                    }
                    for (b, irr) in self.irreps.iter().enumerate() {
                        let m = irr.diagram(&pi)?.to_dense();
                        tables[b] += m.transpose() * (term.coeff * irr.multiplicity() as f64);
                    }
                }
            }
            Operand::Computational { entries } => {
                // Tr(|J><I| X) = <I|X|J> = sum x_{ST} <v_S(I), v_T(J)>
                for e in entries {
                    if self.string_weight(&e.row) != self.string_weight(&e.col) {
                        continue;
                    }
                    for (b, irr) in self.irreps.iter().enumerate() {
                        let vi: Vec<DVector<f64>> =
                            irr.paths().iter().map(|s| self.chain_vector(s, &e.col)).collect::<Result<_>>()?;
                        let vj: Vec<DVector<f64>> =
                            irr.paths().iter().map(|s| self.chain_vector(s, &e.row)).collect::<Result<_>>()?;
                        for s in 0..irr.dim() {
                            for t in 0..irr.dim() {
                                tables[b][(s, t)] += e.value * vi[s].dot(&vj[t]);
                            }
                        }
                    }
                }
            }
        }
        Ok(Functional { tables })
    }

    /// Turns a serialized matrix-unit operand into blocks.
    pub fn resolve(&self, y: &UnitOperand) -> Result<EquivariantMatrix> {
        let tower = Tower::new(self.p, self.q, self.d)?;
        let mut x = self.zero();
        for e in &y.entries {
            let s = tower.parse_path(&e.s)?;
            let t = tower.parse_path(&e.t)?;
            let (bs, i) = self.locate(&s).ok_or_else(|| Error::Mismatch(format!("unknown path {s}")))?;
            let (bt, j) = self.locate(&t).ok_or_else(|| Error::Mismatch(format!("unknown path {t}")))?;
            if bs != bt {
                return Err(Error::Mismatch(format!("{s} and {t} end at different leaves")));
            }
            x.blocks[bs][(i, j)] += e.value;
        }
        Ok(x)
    }

    /// Serialized form of blocks.
    pub fn unit_operand(&self, x: &EquivariantMatrix) -> UnitOperand {
        let mut entries = Vec::new();
        for (b, irr) in self.irreps.iter().enumerate() {
            for s in 0..irr.dim() {
                for t in 0..irr.dim() {
                    let v = x.blocks[b][(s, t)];
                    if v != 0.0 {
                        entries.push(UnitEntry {
                            s: irr.paths()[s].to_string(),
                            t: irr.paths()[t].to_string(),
                            value: v,
                        });
                    }
                }
            }
        }
        UnitOperand { entries }
    }

    /// `psi_lambda(Y) X_lambda` for the forms allowed in partial traces.
    fn left_multiply(&self, y: &Operand, x: &EquivariantMatrix) -> Result<EquivariantMatrix> {
        let mut out = x.clone();
        match y {
            Operand::Identity { scale } => {
                for b in &mut out.blocks {
                    *b *= *scale;
                }
            }
            Operand::MatrixUnits(ym) => {
                let ym = self.resolve(ym)?;
                for (b, blk) in out.blocks.iter_mut().enumerate() {
                    *blk = &ym.blocks[b] * &x.blocks[b];
                }
            }
            Operand::Diagrams { terms } => {
                for (b, irr) in self.irreps.iter().enumerate() {
                    let mut m = DMatrix::<f64>::zeros(irr.dim(), irr.dim());
                    for term in terms {
                        let pi: BrauerDiagram = term.diagram.parse()?;
                        m += irr.diagram(&pi)?.to_dense() * term.coeff;
                    }
                    out.blocks[b] = m * &x.blocks[b];
                }
            }
            Operand::Computational { .. } => {
                return Err(Error::UnsupportedForm(
                    "partial traces take identity, matrix-unit or diagram operands".into(),
                ))
            }
        }
        Ok(out)
    }

    /// `Tr_{k+1..n}(Y X)` as an equivariant matrix on the first `k` systems,
    /// by repeated Ram-Wenzl steps:
    /// `Tr_last E_{ST} = (m_lambda / m_mu) E_{S'T'}` when both paths pass
    /// through `mu` one level down, else 0.
    pub fn partial_trace(&self, x: &EquivariantMatrix, k: usize, y: &Operand) -> Result<(Algebra, EquivariantMatrix)> {
        let n = self.p + self.q;
        if k == 0 || k >= n {
            return Err(Error::InvalidArgument(format!("kept systems {k} not in 1..{n}")));
        }
        let mut cur_alg = Algebra::new(self.p, self.q, self.d)?;
        let mut cur = self.left_multiply(y, x)?;
        for level in (k..n).rev() {
            let next_alg = self.prefix(level)?;
            let mut next = next_alg.zero();
            for (b, irr) in cur_alg.irreps.iter().enumerate() {
                let ml = irr.multiplicity() as f64;
                for (s, sp) in irr.paths().iter().enumerate() {
                    let ss = sp.truncated();
                    let (nb, i) = next_alg.locate(&ss).ok_or(Error::CheckFailed("truncated path missing".into()))?;
                    let mu = next_alg.irreps[nb].multiplicity() as f64;
                    for (t, tp) in irr.paths().iter().enumerate() {
                        let v = cur.blocks[b][(s, t)];
                        if v == 0.0 {
                            continue;
                        }
                        let tt = tp.truncated();
                        if tt.leaf() != ss.leaf() {
                            continue;
                        }
                        let (_, j) = next_alg.locate(&tt).expect("same leaf");
                        next.blocks[nb][(i, j)] += v * ml / mu;
                    }
                }
            }
            cur_alg = next_alg;
            cur = next;
        }
        Ok((cur_alg, cur))
    }
}

/// `X = sum x_{ST} E_{ST}`, one block per irrep in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantMatrix {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    pub blocks: Vec<DMatrix<f64>>,
}

impl EquivariantMatrix {
    /// `x_{ST}` is real here, so Hermitian means symmetric blocks.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| (b - b.transpose()).abs().max() <= tol)
    }

    pub fn coeff(&self, block: usize, s: usize, t: usize) -> f64 {
        self.blocks[block][(s, t)]
    }
}

/// `Tr(Y X)` with `Y = E_{ST}`: `x_{TS} m_lambda`.
pub fn trace_against_unit(alg: &Algebra, x: &EquivariantMatrix, s: &Path, t: &Path) -> Result<f64> {
    let (bs, i) = alg.locate(s).ok_or_else(|| Error::Mismatch(format!("unknown path {s}")))?;
    let (bt, j) = alg.locate(t).ok_or_else(|| Error::Mismatch(format!("unknown path {t}")))?;
    if bs != bt {
        return Err(Error::Mismatch("paths end at different leaves".into()));
    }
    Ok(x.blocks[bs][(j, i)] * alg.irreps[bs].multiplicity() as f64)
}

/// `<J| X |I>` through CG chains; 0 unless the two strings have equal weight.
pub fn trace_against_computational(alg: &Algebra, x: &EquivariantMatrix, i: &[usize], j: &[usize]) -> Result<f64> {
    if alg.string_weight(i) != alg.string_weight(j) {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for (b, irr) in alg.irreps.iter().enumerate() {
        let vj: Vec<DVector<f64>> = irr.paths().iter().map(|s| alg.chain_vector(s, j)).collect::<Result<_>>()?;
        let vi: Vec<DVector<f64>> = irr.paths().iter().map(|s| alg.chain_vector(s, i)).collect::<Result<_>>()?;
        for s in 0..irr.dim() {
            for t in 0..irr.dim() {
                let c = x.blocks[b][(s, t)];
                if c != 0.0 {
                    acc += c * vj[s].dot(&vi[t]);
                }
            }
        }
    }
    Ok(acc)
}

/// `Tr(psi(pi) X) = sum_lambda m_lambda tr(psi_lambda(pi) X_lambda)`.
pub fn trace_against_diagram(alg: &Algebra, x: &EquivariantMatrix, pi: &BrauerDiagram) -> Result<f64> {
    let mut acc = 0.0;
    for (b, irr) in alg.irreps.iter().enumerate() {
        let m = irr.diagram(pi)?.to_dense();
        acc += irr.multiplicity() as f64 * (m * &x.blocks[b]).trace();
    }
    Ok(acc)
}

/// One entry of a matrix-unit operand; `s`, `t` are path strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitEntry {
    pub s: String,
    pub t: String,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UnitOperand {
    pub entries: Vec<UnitEntry>,
}

/// `value * |row><col|` in the computational basis (0-based letters).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseEntry {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramTerm {
    pub diagram: String,
    pub coeff: f64,
}

/// A data matrix tagged with its input form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Operand {
    Identity { scale: f64 },
    MatrixUnits(UnitOperand),
    Computational { entries: Vec<SparseEntry> },
    Diagrams { terms: Vec<DiagramTerm> },
}

impl Operand {
    pub fn form_name(&self) -> &'static str {
        match self {
            Operand::Identity { .. } => "identity",
            Operand::MatrixUnits(_) => "matrix_units",
            Operand::Computational { .. } => "computational",
            Operand::Diagrams { .. } => "diagrams",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub a: Operand,
    pub b: f64,
}

/// `Tr_{from..n}(D X) = B`; `B` lives on systems `1..from-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialTraceEquality {
    pub d: Operand,
    pub from_system: usize,
    pub b: Operand,
}

/// `max Tr(C X)` subject to the listed constraints, `X ⪰ 0` equivariant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    pub objective: Operand,
    #[serde(default)]
    pub inequalities: Vec<Inequality>,
    #[serde(default)]
    pub equalities: Vec<PartialTraceEquality>,
}

/// Coefficient tables of a linear functional of the blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    pub tables: Vec<DMatrix<f64>>,
}

impl Functional {
    pub fn eval(&self, x: &EquivariantMatrix) -> f64 {
        self.tables.iter().zip(&x.blocks).map(|(f, b)| f.component_mul(b).sum()).sum()
    }

    /// Same functional on symmetric variables: `F + F^T` off the diagonal.
    pub fn symmetrized(&self) -> Functional {
        Functional { tables: self.tables.iter().map(|f| (f + f.transpose()) * 0.5).collect() }
    }
}

/// A scalar constraint `f(x) <= b` or `f(x) = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarConstraint {
    pub f: Functional,
    pub b: f64,
    pub equality: bool,
    pub source: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockInfo {
    pub index: usize,
    pub irrep: String,
    pub staircase: Vec<i64>,
    pub size: usize,
    pub multiplicity: u128,
    pub paths: Vec<String>,
}

/// The reduced problem: `max f_C` over PSD blocks `X_lambda`.
#[derive(Clone, Debug)]
pub struct ReducedSdp {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    pub blocks: Vec<BlockInfo>,
    pub objective: Functional,
    pub constraints: Vec<ScalarConstraint>,
}

impl ReducedSdp {
    /// `dim A_{p,q} = sum d_lambda^2`.
    pub fn variable_count(&self) -> usize {
        self.blocks.iter().map(|b| b.size * b.size).sum()
    }

    /// Independent entries of symmetric blocks.
    pub fn symmetric_variable_count(&self) -> usize {
        self.blocks.iter().map(|b| b.size * (b.size + 1) / 2).sum()
    }

    /// `(block, row, col)` for each SDPA variable, row <= col.
    pub fn variables(&self) -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for b in &self.blocks {
            for i in 0..b.size {
                for j in i..b.size {
                    v.push((b.index, i, j));
                }
            }
        }
        v
    }

    fn coefficient(f: &Functional, (b, i, j): (usize, usize, usize)) -> f64 {
        if i == j {
            f.tables[b][(i, i)]
        } else {
            f.tables[b][(i, j)] + f.tables[b][(j, i)]
        }
    }

    /// Rows of the diagonal block: `(constraint index, sign)`; sign `+1`
    /// encodes `b - f >= 0`, `-1` encodes `f - b >= 0`.
    fn lp_rows(&self) -> Vec<(usize, f64)> {
        let mut rows = Vec::new();
        for (k, c) in self.constraints.iter().enumerate() {
            rows.push((k, 1.0));
            if c.equality {
                rows.push((k, -1.0));
            }
        }
        rows
    }

    /// SDPA sparse format: minimize `-f_C`; one block per irrep plus a
    /// diagonal block of slacks.
    pub fn write_sdpa<W: Write>(&self, out: &mut W) -> Result<()> {
        let vars = self.variables();
        let lp = self.lp_rows();
        let nblocks = self.blocks.len() + usize::from(!lp.is_empty());
        writeln!(out, "* reduced equivariant SDP p={} q={} d={}", self.p, self.q, self.d)?;
        writeln!(out, "{}", vars.len())?;
        writeln!(out, "{nblocks}")?;
        let mut sizes: Vec<String> = self.blocks.iter().map(|b| b.size.to_string()).collect();
        if !lp.is_empty() {
            sizes.push(format!("-{}", lp.len()));
        }
        writeln!(out, "{}", sizes.join(" "))?;
        let c: Vec<String> = vars.iter().map(|&v| fmt_num(-Self::coefficient(&self.objective, v))).collect();
        writeln!(out, "{}", c.join(" "))?;
        let lp_block = self.blocks.len() + 1;
        // F_0
        for (r, &(k, sign)) in lp.iter().enumerate() {
            let v = -sign * self.constraints[k].b;
            if v != 0.0 {
                writeln!(out, "0 {lp_block} {} {} {}", r + 1, r + 1, fmt_num(v))?;
            }
        }
        for (vi, &(b, i, j)) in vars.iter().enumerate() {
            writeln!(out, "{} {} {} {} 1", vi + 1, b + 1, i + 1, j + 1)?;
            for (r, &(k, sign)) in lp.iter().enumerate() {
                let a = Self::coefficient(&self.constraints[k].f, (b, i, j));
                if a != 0.0 {
                    writeln!(out, "{} {lp_block} {} {} {}", vi + 1, r + 1, r + 1, fmt_num(-sign * a))?;
                }
            }
        }
        Ok(())
    }

    /// JSON description of blocks, variables and slack rows.
    pub fn manifest(&self) -> serde_json::Value {
        let vars: Vec<serde_json::Value> = self
            .variables()
            .iter()
            .enumerate()
            .map(|(k, &(b, i, j))| serde_json::json!({"index": k + 1, "block": b + 1, "row": i + 1, "col": j + 1}))
            .collect();
        let lp: Vec<serde_json::Value> = self
            .lp_rows()
            .iter()
            .enumerate()
            .map(|(r, &(k, sign))| {
                serde_json::json!({
                    "row": r + 1,
                    "constraint": k,
                    "source": self.constraints[k].source,
                    "sense": if self.constraints[k].equality {
                        if sign > 0.0 { "equality_upper" } else { "equality_lower" }
                    } else { "inequality" },
                })
            })
            .collect();
        let blocks: Vec<serde_json::Value> = self
            .blocks
            .iter()
            .map(|b| {
                serde_json::json!({
                    "block": b.index + 1,
                    "irrep": b.irrep,
                    "staircase": b.staircase,
                    "size": b.size,
                    "multiplicity": b.multiplicity.to_string(),
                    "paths": b.paths,
                })
            })
            .collect();
        serde_json::json!({
            "p": self.p,
            "q": self.q,
            "d": self.d,
            "sense": "maximize; SDPA objective is negated",
            "algebra_dim": self.variable_count(),
            "sdpa_variables": self.symmetric_variable_count(),
            "blocks": blocks,
            "slack_block": if self.constraints.is_empty() { serde_json::Value::Null } else { serde_json::json!(self.blocks.len() + 1) },
            "slack_rows": lp,
            "variables": vars,
        })
    }
}

fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:e}")
    }
}

/// Builds the reduced SDP.
pub fn reduce_sdp(prob: &SdpProblem) -> Result<ReducedSdp> {
    let alg = Algebra::new(prob.p, prob.q, prob.d)?;
    reduce_with(&alg, prob)
}

pub fn reduce_with(alg: &Algebra, prob: &SdpProblem) -> Result<ReducedSdp> {
    if (alg.p, alg.q, alg.d) != (prob.p, prob.q, prob.d) {
        return Err(Error::Mismatch("algebra does not match the problem".into()));
    }
    let n = prob.p + prob.q;
    let objective = alg.functional(&prob.objective)?;
    let mut constraints = Vec::new();
    for (k, ineq) in prob.inequalities.iter().enumerate() {
        constraints.push(ScalarConstraint {
            f: alg.functional(&ineq.a)?,
            b: ineq.b,
            equality: false,
            source: format!("inequality {k} ({})", ineq.a.form_name()),
        });
    }
    for (k, eq) in prob.equalities.iter().enumerate() {
        if !matches!(eq.d, Operand::MatrixUnits(_) | Operand::Identity { .. }) {
            return Err(Error::UnsupportedForm(format!(
                "equality {k}: D must be given in matrix units, got {}",
                eq.d.form_name()
            )));
        }
        if eq.from_system < 2 || eq.from_system > n {
            return Err(Error::InvalidArgument(format!("equality {k}: traced systems must start in 2..={n}")));
        }
        let keep = eq.from_system - 1;
        let sub = alg.prefix(keep)?;
        let target = match &eq.b {
            Operand::MatrixUnits(u) => sub.resolve(u)?,
            Operand::Identity { scale } => {
                let mut x = sub.identity();
                for b in &mut x.blocks {
                    *b *= *scale;
                }
                x
            }
            other => {
                return Err(Error::UnsupportedForm(format!(
                    "equality {k}: B must be given in matrix units or as identity, got {}",
                    other.form_name()
                )))
            }
        };
        // coefficient (mu, s, t) of Tr(D X) is linear in x; probe with units
        let mut probes: BTreeMap<(usize, usize, usize), Functional> = BTreeMap::new();
        for (b, irr) in alg.irreps.iter().enumerate() {
            for s in 0..irr.dim() {
                for t in 0..irr.dim() {
                    let mut e = alg.zero();
                    e.blocks[b][(s, t)] = 1.0;
                    let (_, r) = alg.partial_trace(&e, keep, &eq.d)?;
                    for (nb, blk) in r.blocks.iter().enumerate() {
                        for i in 0..blk.nrows() {
                            for j in 0..blk.ncols() {
                                let v = blk[(i, j)];
                                let f = probes.entry((nb, i, j)).or_insert_with(|| Functional {
                                    tables: alg.irreps.iter().map(|x| DMatrix::zeros(x.dim(), x.dim())).collect(),
                                });
                                f.tables[b][(s, t)] += v;
                            }
                        }
                    }
                }
            }
        }
        for (nb, blk) in target.blocks.iter().enumerate() {
            for i in 0..blk.nrows() {
                for j in 0..blk.ncols() {
                    let f = probes.remove(&(nb, i, j)).unwrap_or_else(|| Functional {
                        tables: alg.irreps.iter().map(|x| DMatrix::zeros(x.dim(), x.dim())).collect(),
                    });
                    constraints.push(ScalarConstraint {
                        f,
                        b: blk[(i, j)],
                        equality: true,
                        source: format!("equality {k} coefficient ({nb},{i},{j})"),
                    });
                }
            }
        }
    }
    let blocks = alg
        .irreps
        .iter()
        .enumerate()
        .map(|(i, irr)| BlockInfo {
            index: i,
            irrep: irr.label().to_string(),
            staircase: irr.label().staircase().entries().to_vec(),
            size: irr.dim(),
            multiplicity: irr.multiplicity(),
            paths: irr.paths().iter().map(|t| t.to_string()).collect(),
        })
        .collect();
    Ok(ReducedSdp { p: prob.p, q: prob.q, d: prob.d, blocks, objective, constraints })
}

/// Irrep labels of the blocks, for callers that only need the layout.
pub fn block_labels(alg: &Algebra) -> Vec<IrrepLabel> {
    alg.irreps.iter().map(|i| i.label()).collect()
}
