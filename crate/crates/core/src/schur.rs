//! Reduced Wigner coefficients, Clebsch-Gordan matrices for the direct
//! (`Plus`) and dual (`Minus`) couplings, MPS evaluation of mixed Schur
//! transform entries, and the dense transform.
//!
//! Rows of a Gelfand-Tsetlin pattern are indexed by length: row `n` has `n`
//! entries. `l_{k,n} = m_{k,n} - k`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bratteli::{irr_labels, IrrepLabel, Path, Tower};
use crate::combinat::{gt_patterns, GtPattern, Staircase};
use crate::diagram::{check_dense, kron, space_dim, BrauerDiagram, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};
use crate::exact::SurdMatrix;
use crate::irreps::Irrep;
use crate::scalar::{Rational, Scalar};

/// Direct coupling with `C^d` or dual coupling with its conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Plus,
    Minus,
}

impl Kind {
    fn sign(self) -> i64 {
        match self {
            Kind::Plus => 1,
            Kind::Minus => -1,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Plus => "plus",
            Kind::Minus => "minus",
        })
    }
}

/// Arguments of one reduced Wigner coefficient: rows `n` and `n-1` of the
/// input pattern and of the output pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWignerKey {
    pub kind: Kind,
    pub upper_in: Vec<i64>,
    pub upper_out: Vec<i64>,
    pub lower_in: Vec<i64>,
    pub lower_out: Vec<i64>,
}

fn interlaces(upper: &[i64], lower: &[i64]) -> bool {
    lower.len() + 1 == upper.len() && (0..lower.len()).all(|i| upper[i] >= lower[i] && lower[i] >= upper[i + 1])
}

/// Index `i` where `out - inn = s e_i`, if that is the whole difference.
fn single_step(inn: &[i64], out: &[i64], s: i64) -> Option<usize> {
    let mut hit = None;
    for (k, (a, b)) in inn.iter().zip(out).enumerate() {
        match b - a {
            0 => {}
            x if x == s && hit.is_none() => hit = Some(k),
            _ => return None,
        }
    }
    hit
}

fn int_prod(it: impl Iterator<Item = i64>) -> Option<i128> {
    it.fold(Some(1i128), |acc, x| acc?.checked_mul(x as i128))
}

/// Reduced Wigner coefficient, exact.
pub fn reduced_wigner(key: &ReducedWignerKey) -> Result<Scalar> {
    let (mu, nu, ml, nl) = (&key.upper_in, &key.upper_out, &key.lower_in, &key.lower_out);
    let n = mu.len();
    if nu.len() != n || ml.len() + 1 != n || nl.len() + 1 != n {
        return Err(Error::InvalidArgument("reduced Wigner rows have wrong lengths".into()));
    }
    if !interlaces(mu, ml) || !interlaces(nu, nl) {
        return Ok(Scalar::zero());
    }
    let s = key.kind.sign();
    let up_same = mu == nu;
    let lo_same = ml == nl;
    if up_same {
        return Ok(if lo_same { Scalar::one() } else { Scalar::zero() });
    }
    let Some(i) = single_step(mu, nu, s) else {
        return Ok(Scalar::zero());
    };
    let lu = |k: usize| mu[k] - (k as i64 + 1);
    let ll = |k: usize| ml[k] - (k as i64 + 1);
    let (num, den, sign) = if lo_same {
        let num = match key.kind {
            Kind::Plus => int_prod((0..n - 1).map(|j| ll(j) - lu(i) - 1)),
            Kind::Minus => int_prod((0..n - 1).map(|j| ll(j) - lu(i))),
        };
        let den = int_prod((0..n).filter(|&j| j != i).map(|j| lu(j) - lu(i)));
        (num, den, 1)
    } else {
        let Some(j) = single_step(ml, nl, s) else {
            return Ok(Scalar::zero());
        };
        let sg = if i <= j { 1 } else { -1 };
        let (num, den) = match key.kind {
            Kind::Plus => (
                int_prod((0..n - 1).filter(|&k| k != j).map(|k| ll(k) - lu(i) - 1))
                    .zip(int_prod((0..n).filter(|&k| k != i).map(|k| lu(k) - ll(j))))
                    .and_then(|(a, b)| a.checked_mul(b)),
                int_prod((0..n).filter(|&k| k != i).map(|k| lu(k) - lu(i)))
                    .zip(int_prod((0..n - 1).filter(|&k| k != j).map(|k| ll(k) - ll(j) - 1)))
                    .and_then(|(a, b)| a.checked_mul(b)),
            ),
            Kind::Minus => (
                int_prod((0..n - 1).filter(|&k| k != j).map(|k| ll(k) - lu(i)))
                    .zip(int_prod((0..n).filter(|&k| k != i).map(|k| lu(k) - ll(j) + 1)))
                    .and_then(|(a, b)| a.checked_mul(b)),
                int_prod((0..n).filter(|&k| k != i).map(|k| lu(k) - lu(i)))
                    .zip(int_prod((0..n - 1).filter(|&k| k != j).map(|k| ll(k) - ll(j) + 1)))
                    .and_then(|(a, b)| a.checked_mul(b)),
            ),
        };
        (num, den, sg)
    };
    let (num, den) = (num.ok_or(Error::Overflow)?, den.ok_or(Error::Overflow)?);
    if num == 0 || den == 0 {
        return Ok(Scalar::zero());
    }
    Ok(Scalar::signed_sqrt(sign, Rational::new(num.abs(), den.abs())))
}

/// Clebsch-Gordan coefficient `<N | x, M>`: product of reduced Wigner
/// coefficients over rows `d, d-1, ..., 2`. Zero unless the row sums of rows
/// `r >= x` move by `±1` and the others stay put.
pub fn cg_coefficient(x: usize, m: &GtPattern, nn: &GtPattern, kind: Kind) -> Result<Scalar> {
    let d = m.d();
    if nn.d() != d || x == 0 || x > d {
        return Err(Error::InvalidArgument(format!("bad CG arguments x = {x}, d = {d}")));
    }
    let s = kind.sign();
    for r in 1..=d {
        let diff: i64 = nn.row(r).iter().sum::<i64>() - m.row(r).iter().sum::<i64>();
        if diff != if r >= x { s } else { 0 } {
            return Ok(Scalar::zero());
        }
    }
    let mut acc = Scalar::one();
    for r in 2..=d {
        let key = ReducedWignerKey {
            kind,
            upper_in: m.row(r).to_vec(),
            upper_out: nn.row(r).to_vec(),
            lower_in: m.row(r - 1).to_vec(),
            lower_out: nn.row(r - 1).to_vec(),
        };
        let w = reduced_wigner(&key)?;
        if w.is_zero() {
            return Ok(Scalar::zero());
        }
        acc = acc.checked_mul(&w).ok_or(Error::Overflow)?;
    }
    // one-row patterns: the only row moves by s
    if d == 1 && nn.row(1)[0] - m.row(1)[0] != s {
        return Ok(Scalar::zero());
    }
    Ok(acc)
}

/// Clebsch-Gordan block for qudit value `x`: rows `GT(mu)`, columns
/// `GT(lambda)`.
#[derive(Clone, Debug)]
pub struct CgMatrix {
    pub x: usize,
    pub kind: Kind,
    pub rows: Vec<GtPattern>,
    pub cols: Vec<GtPattern>,
    pub exact: SurdMatrix,
    pub dense: DMatrix<f64>,
}

impl CgMatrix {
    /// Sub-block with output weight `w_out` and input weight `w_in`.
    pub fn weight_block(&self, w_out: &[i64], w_in: &[i64]) -> (Vec<usize>, Vec<usize>, DMatrix<f64>) {
        let r: Vec<usize> = (0..self.rows.len()).filter(|&i| self.rows[i].weight() == w_out).collect();
        let c: Vec<usize> = (0..self.cols.len()).filter(|&j| self.cols[j].weight() == w_in).collect();
        let m = DMatrix::from_fn(r.len(), c.len(), |a, b| self.dense[(r[a], c[b])]);
        (r, c, m)
    }
}

/// `CG` block `x` between `lambda` and `mu`; zero when `mu` is not one step away.
pub fn cg_matrix(x: usize, lambda: &Staircase, mu: &Staircase, kind: Kind) -> Result<CgMatrix> {
    let cols = gt_patterns(lambda);
    let rows = gt_patterns(mu);
    cg_matrix_on(x, rows, cols, kind)
}

fn cg_matrix_on(x: usize, rows: Vec<GtPattern>, cols: Vec<GtPattern>, kind: Kind) -> Result<CgMatrix> {
    let mut exact = SurdMatrix::zeros(rows.len(), cols.len());
    for (i, nn) in rows.iter().enumerate() {
        for (j, m) in cols.iter().enumerate() {
            let c = cg_coefficient(x, m, nn, kind)?;
            if !c.is_zero() {
                exact.set_scalar(i, j, &c)?;
            }
        }
    }
    let dense = exact.to_dense();
    Ok(CgMatrix { x, kind, rows, cols, exact, dense })
}

/// Lower `d-1` rows of a pattern.
fn lower(m: &GtPattern) -> GtPattern {
    GtPattern::new(m.rows()[1..].to_vec()).expect("sub-pattern of a valid pattern")
}

/// The same block assembled as `(C_d ⊗ I)(I ⊗ CG_{d-1})`: the first factor
/// couples `x` into the lower `d-1` rows (identity when `x = d`), the second
/// updates the top row from rows `d` and `d-1`.
pub fn cg_matrix_factorized(x: usize, lambda: &Staircase, mu: &Staircase, kind: Kind) -> Result<DMatrix<f64>> {
    let d = lambda.d();
    let cols = gt_patterns(lambda);
    let rows = gt_patterns(mu);
    if d == 1 {
        return Ok(cg_matrix_on(x, rows, cols, kind)?.dense);
    }
    // intermediate labels (row d-1 of the input, lower pattern of the output)
    let mut mids: Vec<(Vec<i64>, GtPattern)> = Vec::new();
    for m in &cols {
        for nn in &rows {
            let key = (m.row(d - 1).to_vec(), lower(nn));
            if !mids.contains(&key) {
                mids.push(key);
            }
        }
    }
    let mut first = DMatrix::<f64>::zeros(mids.len(), cols.len());
    for (a, (mrow, pl)) in mids.iter().enumerate() {
        for (j, m) in cols.iter().enumerate() {
            if m.row(d - 1) != mrow.as_slice() {
                continue;
            }
            let ml = lower(m);
            let v = if x == d {
                if ml == *pl {
                    1.0
                } else {
                    0.0
                }
            } else {
                cg_coefficient(x, &ml, pl, kind)?.to_f64()
            };
            first[(a, j)] = v;
        }
    }
    let mut second = DMatrix::<f64>::zeros(rows.len(), mids.len());
    for (i, nn) in rows.iter().enumerate() {
        for (a, (mrow, pl)) in mids.iter().enumerate() {
            if lower(nn) != *pl {
                continue;
            }
            // the top row of the input is lambda itself
            let key = ReducedWignerKey {
                kind,
                upper_in: lambda.entries().to_vec(),
                upper_out: nn.row(d).to_vec(),
                lower_in: mrow.clone(),
                lower_out: nn.row(d - 1).to_vec(),
            };
            // row-sum bookkeeping of the top row
            let ds: i64 = nn.row(d).iter().sum::<i64>() - lambda.sum();
            if ds != kind.sign() {
                continue;
            }
            second[(i, a)] = reduced_wigner(&key)?.to_f64();
        }
    }
    Ok(second * first)
}

/// A row label of the mixed Schur transform.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SchurLabel {
    pub path: Path,
    pub pattern: GtPattern,
}

impl fmt::Display for SchurLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.path, self.pattern)
    }
}

type CgKey = (usize, Vec<i64>, Vec<i64>, Kind);

/// Mixed Schur transform for `(p, q, d)` with cached CG blocks.
pub struct SchurTransform {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    tower: Tower,
    labels: Vec<IrrepLabel>,
    cache: RwLock<HashMap<CgKey, Arc<CgMatrix>>>,
    patterns: RwLock<HashMap<Vec<i64>, Arc<Vec<GtPattern>>>>,
}

impl SchurTransform {
    pub fn new(p: usize, q: usize, d: usize) -> Result<Self> {
        let tower = Tower::new(p, q, d)?;
        Ok(SchurTransform {
            p,
            q,
            d,
            tower,
            labels: irr_labels(p, q, d)?,
            cache: RwLock::new(HashMap::new()),
            patterns: RwLock::new(HashMap::new()),
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn irrep_labels(&self) -> &[IrrepLabel] {
        &self.labels
    }

    /// `GT(shape)` in canonical order.
    pub fn patterns(&self, shape: &Staircase) -> Arc<Vec<GtPattern>> {
        let key = shape.entries().to_vec();
        if let Some(v) = self.patterns.read().expect("lock").get(&key) {
            return v.clone();
        }
        let v = Arc::new(gt_patterns(shape));
        self.patterns.write().expect("lock").insert(key, v.clone());
        v
    }

    /// Cached CG block.
    pub fn cg(&self, x: usize, lambda: &Staircase, mu: &Staircase, kind: Kind) -> Result<Arc<CgMatrix>> {
        let key = (x, lambda.entries().to_vec(), mu.entries().to_vec(), kind);
        if let Some(m) = self.cache.read().expect("lock").get(&key) {
            return Ok(m.clone());
        }
        let rows = (*self.patterns(mu)).clone();
        let cols = (*self.patterns(lambda)).clone();
        let m = Arc::new(cg_matrix_on(x, rows, cols, kind)?);
        self.cache.write().expect("lock").insert(key, m.clone());
        Ok(m)
    }

    fn kind_at(&self, k: usize) -> Kind {
        if k < self.p {
            Kind::Plus
        } else {
            Kind::Minus
        }
    }

    /// Row labels in order: leaf, then path, then pattern.
    pub fn row_labels(&self) -> Vec<SchurLabel> {
        let mut out = Vec::new();
        for lam in &self.labels {
            let pats = self.patterns(&lam.staircase());
            for t in self.tower.paths_to(self.tower.n(), &lam.shape) {
                for m in pats.iter() {
                    out.push(SchurLabel { path: t.clone(), pattern: m.clone() });
                }
            }
        }
        out
    }

    /// Bond dimensions `|GT(T^k)|` along a path.
    pub fn bond_dimensions(&self, t: &Path) -> Vec<usize> {
        t.vertices().iter().map(|v| self.patterns(&v.staircase()).len()).collect()
    }

    /// `<(T, M)| U |x>` by contracting the CG chain (`x` is 0-based).
    pub fn entry(&self, label: &SchurLabel, x: &[usize]) -> Result<f64> {
        let n = self.tower.n();
        if x.len() != n || x.iter().any(|&v| v >= self.d) {
            return Err(Error::InvalidArgument(format!("string must have {n} letters in 0..{}", self.d)));
        }
        let t = &label.path;
        if t.len() != n || t.leaf().staircase() != label.pattern.top() {
            return Err(Error::Mismatch("pattern shape differs from the path leaf".into()));
        }
        // weight balance
        let mut w = vec![0i64; self.d];
        for (k, &v) in x.iter().enumerate() {
            w[v] += self.kind_at(k).sign();
        }
        if label.pattern.weight() != w {
            return Ok(0.0);
        }
        let mut vec = DMatrix::<f64>::from_element(1, 1, 1.0);
        for (k, &xk) in x.iter().enumerate() {
            let c = self.cg(xk + 1, &t.vertex(k).staircase(), &t.vertex(k + 1).staircase(), self.kind_at(k))?;
            vec = &c.dense * vec;
        }
        let pats = self.patterns(&t.leaf().staircase());
        let idx =
            pats.iter().position(|m| *m == label.pattern).ok_or_else(|| Error::Mismatch("pattern not found".into()))?;
        Ok(vec[(idx, 0)])
    }

    /// Rows of `U` for one path: `|GT(leaf)| x d^n`.
    pub fn path_block(&self, t: &Path) -> Result<DMatrix<f64>> {
        let mut cur = DMatrix::<f64>::from_element(1, 1, 1.0);
        for k in 0..t.len() {
            let (a, b) = (t.vertex(k).staircase(), t.vertex(k + 1).staircase());
            let mats: Vec<Arc<CgMatrix>> =
                (1..=self.d).map(|x| self.cg(x, &a, &b, self.kind_at(k))).collect::<Result<_>>()?;
            let rows = mats[0].rows.len();
            let cols = cur.ncols();
            let mut next = DMatrix::<f64>::zeros(rows, cols * self.d);
            for (xv, c) in mats.iter().enumerate() {
                let prod = &c.dense * &cur;
                for j in 0..cols {
                    next.set_column(j * self.d + xv, &prod.column(j));
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// The dense unitary: rows `row_labels()`, columns the computational basis.
    pub fn dense(&self) -> Result<DMatrix<f64>> {
        self.dense_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn dense_with_cap(&self, cap: u128) -> Result<DMatrix<f64>> {
        let dim = space_dim(self.d, self.tower.n())?;
        check_dense(dim as u128, cap)?;
        let mut u = DMatrix::<f64>::zeros(dim, dim);
        let mut row = 0;
        for lam in &self.labels {
            for t in self.tower.paths_to(self.tower.n(), &lam.shape) {
                let b = self.path_block(&t)?;
                if row + b.nrows() > dim {
                    return Err(Error::Mismatch("more Schur labels than basis states".into()));
                }
                u.view_mut((row, 0), (b.nrows(), dim)).copy_from(&b);
                row += b.nrows();
            }
        }
        if row != dim {
            return Err(Error::Mismatch(format!("{row} Schur labels for dimension {dim}")));
        }
        Ok(u)
    }

    /// `⊕_lambda psi_lambda(sigma_i) ⊗ I_{m_lambda}` in row-label order.
    pub fn block_generator(&self, irreps: &[Irrep], i: usize) -> Result<DMatrix<f64>> {
        let dim = space_dim(self.d, self.tower.n())?;
        let mut out = DMatrix::<f64>::zeros(dim, dim);
        let mut at = 0;
        for irr in irreps {
            let m = irr.multiplicity() as usize;
            let blk = kron(&irr.generator(i)?.to_dense(), &DMatrix::<f64>::identity(m, m));
            let s = blk.nrows();
            out.view_mut((at, at), (s, s)).copy_from(&blk);
            at += s;
        }
        Ok(out)
    }
}

/// `<(T, M)| U |x>` for a fresh transform.
pub fn schur_entry(p: usize, q: usize, d: usize, label: &SchurLabel, x: &[usize]) -> Result<f64> {
    SchurTransform::new(p, q, d)?.entry(label, x)
}

/// Dense mixed Schur transform.
pub fn build_usch(p: usize, q: usize, d: usize) -> Result<DMatrix<f64>> {
    SchurTransform::new(p, q, d)?.dense()
}

/// Summary of how well `U` block-diagonalizes the generators.
#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub unitarity: f64,
    pub per_generator: Vec<f64>,
}

impl BlockReport {
    pub fn max_error(&self) -> f64 {
        self.per_generator.iter().copied().fold(self.unitarity, f64::max)
    }
}

/// `max |U psi(sigma_i) U^T - ⊕ psi_lambda(sigma_i) ⊗ I|` per generator and
/// `max |U U^T - I|`.
pub fn block_diagonalization(p: usize, q: usize, d: usize) -> Result<BlockReport> {
    let st = SchurTransform::new(p, q, d)?;
    let u = st.dense()?;
    let dim = u.nrows();
    let unitarity = (&u * u.transpose() - DMatrix::<f64>::identity(dim, dim)).abs().max();
    let irreps: Vec<Irrep> = st.labels.iter().map(|l| Irrep::new(l, p, q, d)).collect::<Result<_>>()?;
    let mut per_generator = Vec::new();
    for i in 1..p + q {
        let g = BrauerDiagram::generator(i, p, q)?.psi(d)?;
        let conj = &u * g * u.transpose();
        let want = st.block_generator(&irreps, i)?;
        per_generator.push((conj - want).abs().max());
    }
    Ok(BlockReport { unitarity, per_generator })
}
