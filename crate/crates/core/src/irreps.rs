//! Irreducible representations of `A_{p,q}` in the Gelfand-Tsetlin basis:
//! exact generator matrices, the coefficient `c(T)`, relation checks, the
//! Jucys-Murphy spectrum, and matrix units.

use std::collections::{BTreeMap, HashMap, VecDeque};

use nalgebra::DMatrix;
use num_traits::CheckedMul;
use serde::Serialize;

use crate::bratteli::{irr_labels, IrrepLabel, Path, Tower};
use crate::combinat::{ssyt_count, MixedDiagram};
use crate::diagram::{compose_word, diagram_to_generators, jm_element, BrauerDiagram, DiagramCombo};
use crate::error::{Error, Result};
use crate::exact::SurdMatrix;
use crate::scalar::{Rational, Scalar};

/// `psi_lambda` for one leaf: paths in canonical order and the exact
/// generator matrices `psi_lambda(sigma_i)`, `i = 1..p+q-1`.
#[derive(Clone, Debug)]
pub struct Irrep {
    tower: Tower,
    leaf: MixedDiagram,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    gens: Vec<SurdMatrix>,
}

impl Irrep {
    pub fn new(label: &IrrepLabel, p: usize, q: usize, d: usize) -> Result<Self> {
        let tower = Tower::new(p, q, d)?;
        if label.level != p + q || !tower.is_vertex(p + q, &label.shape) {
            return Err(Error::InvalidShape(format!("{label} is not an irrep of A({p},{q}), d = {d}")));
        }
        let paths = tower.paths_to(p + q, &label.shape);
        Irrep::from_paths(tower, label.shape.clone(), paths)
    }

    /// Representation on a given, canonically ordered, set of paths that is
    /// closed under the level swaps (ordinary or dilated).
    pub fn from_paths(tower: Tower, leaf: MixedDiagram, paths: Vec<Path>) -> Result<Self> {
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut irr = Irrep { tower, leaf, paths, index, gens: Vec::new() };
        let n = tower.n();
        for i in 1..n {
            let g = irr.build_generator(i)?;
            irr.gens.push(g);
        }
        Ok(irr)
    }

    /// Only `sigma_1 .. sigma_{p-1}`; used on the dilated diagram, where the
    /// contraction is not defined.
    pub fn symmetric_part(tower: Tower, leaf: MixedDiagram, paths: Vec<Path>) -> Result<Self> {
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut irr = Irrep { tower, leaf, paths, index, gens: Vec::new() };
        for i in 1..tower.p {
            let g = irr.build_generator(i)?;
            irr.gens.push(g);
        }
        Ok(irr)
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn leaf(&self) -> &MixedDiagram {
        &self.leaf
    }

    pub fn label(&self) -> IrrepLabel {
        IrrepLabel { shape: self.leaf.clone(), level: self.tower.n() }
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    /// `m_lambda` for the leaf.
    pub fn multiplicity(&self) -> u128 {
        self.leaf.dimension()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn index_of(&self, t: &Path) -> Option<usize> {
        self.index.get(t).copied()
    }

    fn build_generator(&self, i: usize) -> Result<SurdMatrix> {
        let n = self.dim();
        let mut m = SurdMatrix::zeros(n, n);
        if i == self.tower.p {
            for (col, t) in self.paths.iter().enumerate() {
                let mob = t.mobile_set();
                if mob.is_empty() {
                    continue;
                }
                let ct = c_squared(t)?;
                for s in &mob {
                    let Some(row) = self.index_of(s) else { continue };
                    let cs = c_squared(s)?;
                    let v = Scalar::sqrt(cs.checked_mul(&ct).ok_or(Error::Overflow)?);
                    m.set_scalar(row, col, &v)?;
                }
            }
        } else {
            for (col, t) in self.paths.iter().enumerate() {
                let r = t.axial_distance(i) as i128;
                let inv = Rational::new(1, r);
                m.set_scalar(col, col, &Scalar::from_rational(inv).ok_or(Error::Overflow)?)?;
                match t.swapped(i).and_then(|s| self.index_of(&s)) {
                    Some(row) => {
                        let off = Scalar::sqrt(Rational::new(r * r - 1, r * r));
                        m.set_scalar(row, col, &off)?;
                    }
                    None => {
                        if r.abs() != 1 {
                            return Err(Error::CheckFailed(format!("path {t} has no swap at level {i} but r = {r}")));
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// `psi_lambda(sigma_i)`.
    pub fn generator(&self, i: usize) -> Result<&SurdMatrix> {
        self.gens.get(i.wrapping_sub(1)).ok_or_else(|| Error::InvalidArgument(format!("generator {i} out of range")))
    }

    /// Product `psi(sigma_{w_1}) ... psi(sigma_{w_k})`, exact.
    pub fn word(&self, w: &[usize]) -> Result<SurdMatrix> {
        let mut acc = SurdMatrix::identity(self.dim());
        for &i in w {
            acc = acc.mul(self.generator(i)?)?;
        }
        Ok(acc)
    }

    /// Same product in floating point.
    pub fn word_dense(&self, w: &[usize]) -> Result<DMatrix<f64>> {
        let mut acc = DMatrix::identity(self.dim(), self.dim());
        for &i in w {
            acc *= self.generator(i)?.to_dense();
        }
        Ok(acc)
    }

    /// `psi_lambda(pi)` for a diagram through its generator word.
    pub fn diagram(&self, pi: &BrauerDiagram) -> Result<SurdMatrix> {
        self.check_shape(pi.p(), pi.q())?;
        let w = diagram_to_generators(pi);
        let (_, loops) = compose_word(&w, pi.p(), pi.q())?;
        let m = self.word(&w)?;
        if loops == 0 {
            Ok(m)
        } else {
            let f = Rational::from_integer((self.tower.d as i128).pow(loops as u32));
            m.scale(&(Rational::from_integer(1) / f))
        }
    }

    /// `psi_lambda(x)` for a combination of diagrams.
    pub fn combo(&self, x: &DiagramCombo) -> Result<SurdMatrix> {
        self.check_shape(x.p, x.q)?;
        if x.d != self.tower.d {
            return Err(Error::Mismatch(format!("combination has d = {}, irrep d = {}", x.d, self.tower.d)));
        }
        let mut acc = SurdMatrix::zeros(self.dim(), self.dim());
        for (pi, c) in x.terms() {
            acc = acc.add(&self.diagram(pi)?.scale(c)?)?;
        }
        Ok(acc)
    }

    fn check_shape(&self, p: usize, q: usize) -> Result<()> {
        if p != self.tower.p || q != self.tower.q {
            return Err(Error::Mismatch(format!("diagram is ({p},{q}), irrep is ({},{})", self.tower.p, self.tower.q)));
        }
        Ok(())
    }

    /// Steps `(from, to, generator)` leading from path index `t` to `s`
    /// along nonzero generator entries.
    pub fn transport_chain(&self, s: usize, t: usize) -> Option<Vec<(usize, usize, usize)>> {
        let n = self.dim();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(j) = queue.pop_front() {
            if j == s {
                break;
            }
            for (gi, g) in self.gens.iter().enumerate() {
                for k in 0..n {
                    if !seen[k] && !g.get(k, j).is_zero() {
                        seen[k] = true;
                        prev[k] = Some((j, gi + 1));
                        queue.push_back(k);
                    }
                }
            }
        }
        if !seen[s] {
            return None;
        }
        let mut steps = Vec::new();
        let mut cur = s;
        while cur != t {
            let (j, g) = prev[cur]?;
            steps.push((j, cur, g));
            cur = j;
        }
        steps.reverse();
        Some(steps)
    }
}

/// Exact generator matrix with labels.
#[derive(Clone, Debug, Serialize)]
pub struct IrrepMatrix {
    pub label: String,
    pub staircase: Vec<i64>,
    pub generator_index: usize,
    pub paths: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub scalar_entries: Vec<Vec<String>>,
}

/// `psi_lambda(sigma_i)` with path labels, exact entries and float copy.
pub fn irrep_generator(label: &IrrepLabel, i: usize, p: usize, q: usize, d: usize) -> Result<IrrepMatrix> {
    if i == 0 || i >= p + q {
        return Err(Error::InvalidArgument(format!("generator {i} not in 1..{}", p + q)));
    }
    let irr = Irrep::new(label, p, q, d)?;
    let g = irr.generator(i)?;
    let n = irr.dim();
    let mut scalar_entries = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            let s = g.scalar(r, c).ok_or(Error::Overflow)?;
            row.push(s.to_string());
        }
        scalar_entries.push(row);
    }
    let dense = g.to_dense();
    Ok(IrrepMatrix {
        label: label.to_string(),
        staircase: label.staircase().entries().to_vec(),
        generator_index: i,
        paths: irr.paths().iter().map(|t| t.to_string()).collect(),
        matrix: (0..n).map(|r| (0..n).map(|c| dense[(r, c)]).collect()).collect(),
        scalar_entries,
    })
}

/// `m` of the left diagram with `d` rows (0 when too long).
fn m_left(v: &MixedDiagram, d: usize) -> u128 {
    ssyt_count(&v.left, d)
}

/// `c(T)^2` from the content product
/// `(d + cont a) prod_{c in RC} (cont a - cont c) / prod_{a' in AC \ a} (cont a - cont a')`.
pub fn c_squared_contents(t: &Path) -> Result<Rational> {
    let a = t.mobile_cell().ok_or(Error::NoMobileElement)?;
    let tw = t.tower();
    let below = &t.vertex(tw.p - 1).left;
    let ca = a.content() as i128;
    let mut num = Rational::from_integer(tw.d as i128 + ca);
    for c in below.removable() {
        num *= Rational::from_integer(ca - c.content() as i128);
    }
    let mut den = Rational::from_integer(1);
    for c in below.addable() {
        if c != a {
            den *= Rational::from_integer(ca - c.content() as i128);
        }
    }
    Ok(num / den)
}

/// `c(T)^2 = m_{T^p} / m_{T^{p-1}}`.
pub fn c_squared_dimensions(t: &Path) -> Result<Rational> {
    if t.mobile_set().is_empty() {
        return Err(Error::NoMobileElement);
    }
    let tw = t.tower();
    let num = m_left(t.vertex(tw.p), tw.d);
    let den = m_left(t.vertex(tw.p - 1), tw.d);
    Ok(Rational::new(num as i128, den as i128))
}

/// `c(T)^2`, with both closed forms required to agree.
fn c_squared(t: &Path) -> Result<Rational> {
    let a = c_squared_dimensions(t)?;
    // the content form counts a (d+1)-th row box with weight d + cont = 0
    let b = c_squared_contents(t)?;
    if a != b {
        return Err(Error::CheckFailed(format!("c(T)^2 disagrees for {t}: {a} vs {b}")));
    }
    Ok(a)
}

/// `c(T)`, nonnegative.
pub fn c_coefficient(t: &Path) -> Result<Scalar> {
    Ok(Scalar::sqrt(c_squared(t)?))
}

/// Eigenvalues `wcont_k(T)` of `J_k`, in path order.
pub fn jm_spectrum(label: &IrrepLabel, k: usize, p: usize, q: usize, d: usize) -> Result<Vec<(Path, i64)>> {
    if k == 0 || k > p + q {
        return Err(Error::InvalidArgument(format!("JM index {k} not in 1..={}", p + q)));
    }
    let irr = Irrep::new(label, p, q, d)?;
    Ok(irr.paths().iter().map(|t| (t.clone(), t.walled_content(k))).collect())
}

/// `psi_lambda(J_k)` evaluated from its diagram expansion.
pub fn jm_matrix(irr: &Irrep, k: usize) -> Result<SurdMatrix> {
    let t = irr.tower();
    irr.combo(&jm_element(k, t.p, t.q, t.d)?)
}

/// One defining relation `lhs = coeff * rhs` between generator words.
#[derive(Clone, Debug, Serialize)]
pub struct RelationInstance {
    pub relation: char,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
    pub coeff: i64,
}

/// All instances of relations (a)-(h) for `(p, q)` and `d`.
pub fn relation_instances(p: usize, q: usize, d: usize) -> Vec<RelationInstance> {
    let n = p + q;
    let gens: Vec<usize> = (1..n).collect();
    let has = |i: usize| i >= 1 && i < n;
    let mut out = Vec::new();
    let mut push = |relation: char, lhs: Vec<usize>, rhs: Vec<usize>, coeff: i64| {
        out.push(RelationInstance { relation, lhs, rhs, coeff })
    };
    for &i in &gens {
        if i != p {
            push('a', vec![i, i], vec![], 1);
        }
    }
    for &i in &gens {
        if has(i + 1) && i + 1 != p && i != p && i + 1 != p + 1 {
            // excludes i = p-1 and i = p
            push('b', vec![i, i + 1, i], vec![i + 1, i, i + 1], 1);
        }
    }
    for &i in &gens {
        for &j in &gens {
            if i < j && j - i > 1 && i != p && j != p {
                push('c', vec![i, j], vec![j, i], 1);
            }
        }
    }
    if has(p) {
        push('d', vec![p, p], vec![p], d as i64);
        for j in [p.wrapping_sub(1), p + 1] {
            if has(j) {
                push('e', vec![p, j, p], vec![p], 1);
            }
        }
        for &i in &gens {
            if i != p && i + 1 != p && i != p + 1 {
                push('f', vec![p, i], vec![i, p], 1);
            }
        }
        if has(p - 1) && has(p + 1) {
            push('g', vec![p, p + 1, p - 1, p, p - 1], vec![p, p + 1, p - 1, p, p + 1], 1);
            push('h', vec![p - 1, p, p + 1, p - 1, p], vec![p + 1, p, p + 1, p - 1, p], 1);
        }
    }
    out
}

/// Per-relation outcome over every irrep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationSummary {
    pub instances: usize,
    /// instances decided in exact arithmetic
    pub exact_checks: usize,
    /// exact instances that failed
    pub exact_failures: usize,
    /// largest float residual over instances that needed float
    pub max_float_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    pub irreps: usize,
    pub relations: BTreeMap<char, RelationSummary>,
}

impl RelationReport {
    pub fn all_ok(&self, tol: f64) -> bool {
        self.relations.values().all(|s| s.exact_failures == 0 && s.max_float_residual <= tol)
    }
}

/// Checks (a)-(h) in every irrep of `A_{p,q}`.
pub fn verify_relations(p: usize, q: usize, d: usize) -> Result<RelationReport> {
    let labels = irr_labels(p, q, d)?;
    let inst = relation_instances(p, q, d);
    let mut relations: BTreeMap<char, RelationSummary> = BTreeMap::new();
    for c in 'a'..='h' {
        relations.insert(c, RelationSummary::default());
    }
    for label in &labels {
        let irr = Irrep::new(label, p, q, d)?;
        for r in &inst {
            let s = relations.get_mut(&r.relation).expect("preseeded");
            s.instances += 1;
            let exact = irr.word(&r.lhs).and_then(|l| {
                let rhs = irr.word(&r.rhs)?.scale(&Rational::from_integer(r.coeff as i128))?;
                l.sub(&rhs)
            });
            match exact {
                Ok(diff) => {
                    s.exact_checks += 1;
                    if !diff.is_zero() {
                        s.exact_failures += 1;
                    }
                }
                Err(Error::Overflow) => {
                    let l = irr.word_dense(&r.lhs)?;
                    let rr = irr.word_dense(&r.rhs)? * r.coeff as f64;
                    let res = (l - rr).abs().max();
                    s.max_float_residual = s.max_float_residual.max(res);
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(RelationReport { p, q, d, irreps: labels.len(), relations })
}

/// All irreps of `A_{p,q}` in canonical order.
pub fn all_irreps(p: usize, q: usize, d: usize) -> Result<Vec<Irrep>> {
    irr_labels(p, q, d)?.iter().map(|l| Irrep::new(l, p, q, d)).collect()
}

/// Matrix units `E_{ST}` as dense operators on `(C^d)^{p+q}`, built from
/// joint JM eigenprojections and transport along generator words.
pub struct MatrixUnits {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    gens: Vec<DMatrix<f64>>,
    jm: Vec<DMatrix<f64>>,
    spectra: Vec<Vec<i64>>,
    diag_cache: HashMap<Path, DMatrix<f64>>,
}

impl MatrixUnits {
    pub fn new(p: usize, q: usize, d: usize) -> Result<Self> {
        let n = p + q;
        let mut gens = Vec::new();
        for i in 1..n {
            gens.push(BrauerDiagram::generator(i, p, q)?.psi(d)?);
        }
        let mut jm = Vec::new();
        for k in 1..=n {
            jm.push(jm_element(k, p, q, d)?.psi()?);
        }
        let mut spectra = vec![Vec::new(); n];
        for label in irr_labels(p, q, d)? {
            for t in Tower::new(p, q, d)?.paths_to(n, &label.shape) {
                for k in 1..=n {
                    let w = t.walled_content(k);
                    if !spectra[k - 1].contains(&w) {
                        spectra[k - 1].push(w);
                    }
                }
            }
        }
        Ok(MatrixUnits { p, q, d, gens, jm, spectra, diag_cache: HashMap::new() })
    }

    /// Joint eigenprojection `E_{TT}`.
    pub fn diagonal(&mut self, t: &Path) -> DMatrix<f64> {
        if let Some(m) = self.diag_cache.get(t) {
            return m.clone();
        }
        let dim = self.jm[0].nrows();
        let mut acc = DMatrix::<f64>::identity(dim, dim);
        for k in 1..=self.p + self.q {
            let w = t.walled_content(k) as f64;
            for &c in &self.spectra[k - 1] {
                let c = c as f64;
                if c != w {
                    let mut f = self.jm[k - 1].clone();
                    for i in 0..dim {
                        f[(i, i)] -= c;
                    }
                    acc = f * acc / (w - c);
                }
            }
        }
        self.diag_cache.insert(t.clone(), acc.clone());
        acc
    }

    /// `E_{ST}`, acting as `|S><T| ⊗ I` in the Schur basis.
    pub fn unit(&mut self, irr: &Irrep, s: &Path, t: &Path) -> Result<DMatrix<f64>> {
        let (Some(si), Some(ti)) = (irr.index_of(s), irr.index_of(t)) else {
            return Err(Error::Mismatch("paths do not belong to this irrep".into()));
        };
        let steps = irr.transport_chain(si, ti).ok_or_else(|| Error::Mismatch("irrep graph is disconnected".into()))?;
        // E_{c_{j+1} c_j} = E_{c_{j+1}} psi(g) E_{c_j} / g[c_{j+1}, c_j]
        let mut acc = self.diagonal(t);
        for (from, to, g) in steps {
            let e = irr.gens[g - 1].get(to, from).to_f64();
            let pt = self.diagonal(&irr.paths[to]);
            acc = pt * &self.gens[g - 1] * acc / e;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: &str, d: usize, level: usize) -> IrrepLabel {
        IrrepLabel { shape: MixedDiagram::parse(s, d).unwrap(), level }
    }

    #[test]
    fn small_blocks() {
        let m = irrep_generator(&label("((2,1),(2))", 3, 5), 2, 3, 2, 3).unwrap();
        let got: Vec<f64> = m.matrix.iter().flatten().copied().collect();
        let h = 3f64.sqrt() / 2.0;
        // one of the two orderings of the reflection block
        assert!(
            got.iter().zip([0.5, h, h, -0.5]).all(|(a, b)| (a - b).abs() < 1e-15)
                || got.iter().zip([-0.5, h, h, 0.5]).all(|(a, b)| (a - b).abs() < 1e-15)
        );
        let z = irrep_generator(&label("((3),(2))", 3, 5), 3, 3, 2, 3).unwrap();
        assert_eq!(z.scalar_entries, vec![vec!["0".to_string()]]);
    }

    #[test]
    fn contraction_block_values() {
        let irr = Irrep::new(&label("((2),(1))", 3, 5), 3, 2, 3).unwrap();
        let mut diag: Vec<Rational> = Vec::new();
        for t in irr.paths() {
            if let Ok(c) = c_squared(t) {
                diag.push(c);
            }
        }
        diag.sort();
        assert_eq!(diag, vec![Rational::new(4, 3), Rational::new(5, 3)]);
        let g = irr.generator(3).unwrap();
        assert_eq!(g.mul(g).unwrap(), g.scale(&Rational::from_integer(3)).unwrap());
    }

    #[test]
    fn trivial_contraction() {
        let irr = Irrep::new(&label("((),())", 1, 2), 1, 1, 1).unwrap();
        assert_eq!(c_coefficient(&irr.paths()[0]).unwrap(), Scalar::one());
    }

    #[test]
    fn relations_hold() {
        for (p, q, d) in [(1, 1, 2), (2, 1, 2), (3, 2, 3), (3, 0, 2), (2, 2, 2)] {
            let r = verify_relations(p, q, d).unwrap();
            assert!(r.all_ok(1e-12), "{p} {q} {d}: {r:?}");
        }
        let r = verify_relations(3, 0, 2).unwrap();
        assert_eq!(r.relations[&'d'].instances, 0);
    }

    #[test]
    fn jm_is_diagonal() {
        for label in irr_labels(2, 2, 2).unwrap() {
            let irr = Irrep::new(&label, 2, 2, 2).unwrap();
            for k in 1..=4 {
                let m = jm_matrix(&irr, k).unwrap();
                assert!(m.is_diagonal());
                for (i, t) in irr.paths().iter().enumerate() {
                    assert_eq!(m.get(i, i).as_rational(), Some(Rational::from_integer(t.walled_content(k) as i128)));
                }
            }
        }
    }

    #[test]
    fn units_multiply() {
        let mut mu = MatrixUnits::new(1, 1, 2).unwrap();
        let mut sum = DMatrix::<f64>::zeros(4, 4);
        for irr in all_irreps(1, 1, 2).unwrap() {
            for t in irr.paths() {
                sum += mu.unit(&irr, t, t).unwrap();
            }
        }
        assert!((sum - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-12);
        let irr = Irrep::new(&label("((2),(1))", 3, 5), 3, 2, 3);
        assert!(irr.is_ok());
        let irr = Irrep::new(&label("((1),())", 3, 3), 2, 1, 3).unwrap();
        let mut mu = MatrixUnits::new(2, 1, 3).unwrap();
        let ps = irr.paths().to_vec();
        let e01 = mu.unit(&irr, &ps[0], &ps[1]).unwrap();
        let e10 = mu.unit(&irr, &ps[1], &ps[0]).unwrap();
        let e00 = mu.unit(&irr, &ps[0], &ps[0]).unwrap();
        assert!((&e01 * &e10 - &e00).abs().max() < 1e-10);
        assert!((e01.trace()).abs() < 1e-10);
        assert!((e00.trace() - irr.multiplicity() as f64).abs() < 1e-10);
    }
}
