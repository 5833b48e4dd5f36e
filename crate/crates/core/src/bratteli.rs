//! Bratteli diagram of the tower `A_0 ⊂ A_1 ⊂ ... ⊂ A_{p+q}`, its paths
//! (mixed standard tableaux), walled contents, mobile sets, and the dilated
//! diagram used by port-based teleportation.
//!
//! Levels `1..=p` add a left box; later levels remove a left box or add a
//! right box. In the dilated tower (`q = 1`) levels `0..=p` are Young
//! diagrams with at most `d+1` rows and at most one box in row `d+1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinat::{Cell, MixedDiagram, Partition, Staircase};
use crate::error::{Error, Result};

/// An irrep label of `A_{p,q}`: a mixed diagram at level `p+q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel {
    pub shape: MixedDiagram,
    pub level: usize,
}

impl IrrepLabel {
    pub fn staircase(&self) -> Staircase {
        self.shape.staircase()
    }

    /// `m_lambda`, the `U(d)` multiplicity.
    pub fn m(&self) -> u128 {
        self.shape.dimension()
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.shape.fmt(f)
    }
}

/// Shape parameters of a tower; `dilated` switches on the extra vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tower {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    pub dilated: bool,
}

impl Tower {
    pub fn new(p: usize, q: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("d must be at least 1".into()));
        }
        Ok(Tower { p, q, d, dilated: false })
    }

    pub fn dilated(p: usize, d: usize) -> Result<Self> {
        if d == 0 || p == 0 {
            return Err(Error::InvalidArgument("dilated tower needs p, d >= 1".into()));
        }
        Ok(Tower { p, q: 1, d, dilated: true })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Row bound used for vertices at `level`.
    fn width(&self, level: usize) -> usize {
        if self.dilated && level <= self.p {
            self.d + 1
        } else {
            self.d
        }
    }

    fn vertex(&self, level: usize, left: Partition, right: Partition) -> Option<MixedDiagram> {
        let w = self.width(level);
        if left.length() + right.length() > w {
            return None;
        }
        if self.dilated && level <= self.p && left.part(self.d + 1) > 1 {
            return None;
        }
        Some(MixedDiagram { left, right, d: w })
    }

    /// Membership of `v` at `level`.
    pub fn is_vertex(&self, level: usize, v: &MixedDiagram) -> bool {
        if level > self.n() || v.d != self.width(level) {
            return false;
        }
        if self.vertex(level, v.left.clone(), v.right.clone()).is_none() {
            return false;
        }
        let (l, r) = (v.left.size(), v.right.size());
        if level <= self.p {
            r == 0 && l == level
        } else {
            // l = p - j, r = level - p - j
            l <= self.p && self.p - l + r == level - self.p
        }
    }

    /// Vertices at `level + 1` joined to `v`.
    pub fn successors(&self, level: usize, v: &MixedDiagram) -> Vec<MixedDiagram> {
        let mut out = Vec::new();
        if level >= self.n() {
            return out;
        }
        if level < self.p {
            for a in v.left.addable() {
                if let Some(l) = v.left.with_added(a) {
                    out.extend(self.vertex(level + 1, l, v.right.clone()));
                }
            }
        } else {
            for a in v.left.removable() {
                if let Some(l) = v.left.with_removed(a) {
                    out.extend(self.vertex(level + 1, l, v.right.clone()));
                }
            }
            for a in v.right.addable() {
                if let Some(r) = v.right.with_added(a) {
                    out.extend(self.vertex(level + 1, v.left.clone(), r));
                }
            }
        }
        out
    }

    /// Vertices at `level - 1` joined to `v`.
    pub fn predecessors(&self, level: usize, v: &MixedDiagram) -> Vec<MixedDiagram> {
        let mut out = Vec::new();
        if level == 0 {
            return out;
        }
        if level <= self.p {
            for a in v.left.removable() {
                if let Some(l) = v.left.with_removed(a) {
                    out.extend(self.vertex(level - 1, l, v.right.clone()));
                }
            }
        } else {
            for a in v.left.addable() {
                if let Some(l) = v.left.with_added(a) {
                    out.extend(self.vertex(level - 1, l, v.right.clone()));
                }
            }
            for a in v.right.removable() {
                if let Some(r) = v.right.with_removed(a) {
                    out.extend(self.vertex(level - 1, v.left.clone(), r));
                }
            }
        }
        out.retain(|u| self.is_vertex(level - 1, u));
        out
    }

    /// Edge predicate between consecutive levels `level -> level + 1`.
    pub fn is_edge(&self, level: usize, u: &MixedDiagram, v: &MixedDiagram) -> bool {
        self.is_vertex(level, u) && self.successors(level, u).contains(v)
    }

    /// Vertices at each level, canonically ordered (staircase descending).
    pub fn levels(&self) -> Vec<Vec<MixedDiagram>> {
        let mut levels = vec![vec![MixedDiagram::empty(self.width(0))]];
        for k in 0..self.n() {
            let mut next: Vec<MixedDiagram> = Vec::new();
            for v in &levels[k] {
                for s in self.successors(k, v) {
                    if !next.contains(&s) {
                        next.push(s);
                    }
                }
            }
            sort_vertices(&mut next);
            levels.push(next);
        }
        levels
    }

    /// Path counts `d_v` for every vertex of every level.
    pub fn path_counts(&self) -> Vec<BTreeMap<MixedDiagram, u128>> {
        let mut counts = vec![BTreeMap::from([(MixedDiagram::empty(self.width(0)), 1u128)])];
        for k in 0..self.n() {
            let mut next = BTreeMap::new();
            for (v, c) in &counts[k] {
                for s in self.successors(k, v) {
                    *next.entry(s).or_insert(0) += c;
                }
            }
            counts.push(next);
        }
        counts
    }

    /// Number of paths from the root to `v` at `level`.
    pub fn path_count(&self, level: usize, v: &MixedDiagram) -> u128 {
        self.path_counts().get(level).and_then(|m| m.get(v).copied()).unwrap_or(0)
    }

    /// All root-to-`v` paths, canonically ordered.
    pub fn paths_to(&self, level: usize, v: &MixedDiagram) -> Vec<Path> {
        let mut out = Vec::new();
        if !self.is_vertex(level, v) {
            return out;
        }
        let mut stack = vec![v.clone()];
        self.collect_back(level, &mut stack, &mut out);
        sort_paths(&mut out);
        out
    }

    fn collect_back(&self, level: usize, stack: &mut Vec<MixedDiagram>, out: &mut Vec<Path>) {
        if level == 0 {
            let vertices: Vec<MixedDiagram> = stack.iter().rev().cloned().collect();
            out.push(Path { tower: *self, vertices });
            return;
        }
        let top = stack.last().expect("nonempty").clone();
        for u in self.predecessors(level, &top) {
            stack.push(u);
            self.collect_back(level - 1, stack, out);
            stack.pop();
        }
    }

    /// Builds a path from its vertices, checking every edge.
    pub fn path(&self, vertices: Vec<MixedDiagram>) -> Result<Path> {
        if vertices.is_empty() || vertices[0] != MixedDiagram::empty(self.width(0)) {
            return Err(Error::InvalidShape("path must start at the empty diagram".into()));
        }
        for k in 0..vertices.len() - 1 {
            if !self.is_edge(k, &vertices[k], &vertices[k + 1]) {
                return Err(Error::InvalidShape(format!(
                    "no edge {} -> {} at level {k}",
                    vertices[k],
                    vertices[k + 1]
                )));
            }
        }
        Ok(Path { tower: *self, vertices })
    }

    /// Parses `s0;s1;...` staircases.
    pub fn parse_path(&self, s: &str) -> Result<Path> {
        let mut vertices = Vec::new();
        for (k, part) in s.split(';').enumerate() {
            let st: Staircase = part.trim().parse()?;
            if st.d() != self.width(k) {
                return Err(Error::Parse(format!(
                    "staircase `{part}` has width {}, expected {}",
                    st.d(),
                    self.width(k)
                )));
            }
            vertices.push(MixedDiagram::from_staircase(&st));
        }
        self.path(vertices)
    }
}

fn vertex_key(v: &MixedDiagram) -> Vec<i64> {
    v.staircase().entries().to_vec()
}

fn sort_vertices(v: &mut [MixedDiagram]) {
    v.sort_by(|a, b| vertex_key(b).cmp(&vertex_key(a)));
}

fn sort_paths(v: &mut [Path]) {
    v.sort_by(|a, b| b.key().cmp(&a.key()));
}

/// A root-to-leaf path; vertex `k` sits at level `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    tower: Tower,
    vertices: Vec<MixedDiagram>,
}

impl Path {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn vertices(&self) -> &[MixedDiagram] {
        &self.vertices
    }

    pub fn vertex(&self, k: usize) -> &MixedDiagram {
        &self.vertices[k]
    }

    /// Number of levels after the root.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn leaf(&self) -> &MixedDiagram {
        self.vertices.last().expect("paths are nonempty")
    }

    pub fn key(&self) -> Vec<Vec<i64>> {
        self.vertices.iter().map(vertex_key).collect()
    }

    /// The first `level` steps, as a path of the sub-tower `A_level`.
    pub fn prefix(&self, level: usize) -> Path {
        let t = &self.tower;
        let p = t.p.min(level);
        let tower = Tower { p, q: level - p, d: t.d, dilated: t.dilated && level > t.p };
        Path { tower, vertices: self.vertices[..=level].to_vec() }
    }

    /// Drops the last vertex.
    pub fn truncated(&self) -> Path {
        self.prefix(self.len() - 1)
    }

    /// The box added or removed at step `i` (1-based), and whether it lives
    /// in the right diagram, and whether it was added.
    fn step(&self, i: usize) -> (Cell, bool, bool) {
        let (u, v) = (&self.vertices[i - 1], &self.vertices[i]);
        if let Some(c) = u.left.added_cell(&v.left) {
            (c, false, true)
        } else if let Some(c) = v.left.added_cell(&u.left) {
            (c, false, false)
        } else {
            let c = u.right.added_cell(&v.right).expect("consecutive vertices differ by one box");
            (c, true, true)
        }
    }

    /// Walled content of step `i`: `cont` of an added left box, `-cont` of a
    /// removed left box, `d + cont` of an added right box.
    pub fn walled_content(&self, i: usize) -> i64 {
        let (c, right, added) = self.step(i);
        let d = self.tower.d as i64;
        match (right, added) {
            (false, true) => c.content(),
            (false, false) => -c.content(),
            _ => d + c.content(),
        }
    }

    /// `r_i = wcont_{i+1} - wcont_i`.
    pub fn axial_distance(&self, i: usize) -> i64 {
        self.walled_content(i + 1) - self.walled_content(i)
    }

    /// Paths that agree with this one everywhere except possibly level `k`,
    /// in canonical order; includes `self`.
    pub fn level_alternatives(&self, k: usize) -> Vec<Path> {
        let t = &self.tower;
        if k == 0 || k >= self.len() {
            return vec![self.clone()];
        }
        let (u, w) = (&self.vertices[k - 1], &self.vertices[k + 1]);
        let mut out: Vec<Path> = t
            .successors(k - 1, u)
            .into_iter()
            .filter(|v| t.successors(k, v).contains(w))
            .map(|v| {
                let mut s = self.clone();
                s.vertices[k] = v;
                s
            })
            .collect();
        sort_paths(&mut out);
        out
    }

    /// The unique other path differing only at level `k`, if any.
    pub fn swapped(&self, k: usize) -> Option<Path> {
        let mut alts = self.level_alternatives(k);
        alts.retain(|s| s != self);
        debug_assert!(alts.len() <= 1 || k == self.tower.p);
        alts.pop()
    }

    /// `M(T)`: empty unless `T^{p-1} = T^{p+1}`, else every level-`p`
    /// replacement.
    pub fn mobile_set(&self) -> Vec<Path> {
        let p = self.tower.p;
        if p == 0 || self.len() <= p || !self.same_shape(p - 1, p + 1) {
            return Vec::new();
        }
        self.level_alternatives(p)
    }

    fn same_shape(&self, a: usize, b: usize) -> bool {
        let (x, y) = (&self.vertices[a], &self.vertices[b]);
        x.left == y.left && x.right == y.right
    }

    /// The mobile cell `T^p_l \ T^{p-1}_l`, when the mobile set is nonempty.
    pub fn mobile_cell(&self) -> Option<Cell> {
        if self.mobile_set().is_empty() {
            return None;
        }
        let p = self.tower.p;
        self.vertices[p - 1].left.added_cell(&self.vertices[p].left)
    }

    /// The same path viewed in the undilated tower, if all its vertices exist
    /// there.
    pub fn undilated(&self) -> Option<Path> {
        if !self.tower.dilated {
            return Some(self.clone());
        }
        let t = Tower { dilated: false, ..self.tower };
        let mut vertices = Vec::new();
        for v in &self.vertices {
            vertices.push(MixedDiagram::new(v.left.clone(), v.right.clone(), t.d).ok()?);
        }
        t.path(vertices).ok()
    }

    /// The same path in the dilated tower.
    pub fn dilated(&self) -> Result<Path> {
        let t = Tower::dilated(self.tower.p, self.tower.d)?;
        if self.tower.q != 1 {
            return Err(Error::InvalidArgument("dilation needs q = 1".into()));
        }
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| MixedDiagram { left: v.left.clone(), right: v.right.clone(), d: t.width(k) })
            .collect();
        t.path(vertices)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.staircase().to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// All irrep labels of `A_{p,q}` (level `p+q`), canonically ordered.
pub fn irr_labels(p: usize, q: usize, d: usize) -> Result<Vec<IrrepLabel>> {
    let t = Tower::new(p, q, d)?;
    let n = t.n();
    Ok(t.levels().pop().unwrap_or_default().into_iter().map(|shape| IrrepLabel { shape, level: n }).collect())
}

/// Irrep labels from the closed description: `k <= min(p,q)`,
/// `left ⊢ p-k`, `right ⊢ q-k`, `l(left) + l(right) <= d`.
pub fn irr_labels_closed_form(p: usize, q: usize, d: usize) -> Vec<IrrepLabel> {
    let mut out = Vec::new();
    for k in 0..=p.min(q) {
        for l in Partition::all_of(p - k) {
            for r in Partition::all_of(q - k) {
                if let Ok(shape) = MixedDiagram::new(l.clone(), r, d) {
                    out.push(IrrepLabel { shape, level: p + q });
                }
            }
        }
    }
    out.sort_by(|a, b| vertex_key(&b.shape).cmp(&vertex_key(&a.shape)));
    out
}

/// Root-to-`lambda` paths in canonical order.
pub fn paths(lambda: &IrrepLabel, p: usize, q: usize, d: usize) -> Result<Vec<Path>> {
    let t = Tower::new(p, q, d)?;
    check_label(&t, lambda)?;
    Ok(t.paths_to(t.n(), &lambda.shape))
}

/// `d_lambda` by dynamic programming.
pub fn irrep_dimension(lambda: &IrrepLabel, p: usize, q: usize, d: usize) -> Result<u128> {
    let t = Tower::new(p, q, d)?;
    check_label(&t, lambda)?;
    Ok(t.path_count(t.n(), &lambda.shape))
}

fn check_label(t: &Tower, lambda: &IrrepLabel) -> Result<()> {
    if lambda.level != t.n() || !t.is_vertex(t.n(), &lambda.shape) {
        return Err(Error::InvalidShape(format!("{lambda} is not an irrep of A({},{}) with d = {}", t.p, t.q, t.d)));
    }
    Ok(())
}

/// Paths of the dilated diagram ending at `lambda` (`q = 1`). For
/// `lambda_r != ∅` these are the ordinary paths.
pub fn dilated_paths(lambda: &IrrepLabel, p: usize, d: usize) -> Result<Vec<Path>> {
    let ordinary = Tower::new(p, 1, d)?;
    check_label(&ordinary, lambda)?;
    if !lambda.shape.right.is_empty() {
        return Ok(ordinary.paths_to(p + 1, &lambda.shape));
    }
    let t = Tower::dilated(p, d)?;
    Ok(t.paths_to(p + 1, &lambda.shape))
}

/// Number of level-`level` Young diagrams reachable in the dilated tower,
/// with their path counts.
pub fn dilated_counts(p: usize, d: usize) -> Result<Vec<BTreeMap<MixedDiagram, u128>>> {
    Ok(Tower::dilated(p, d)?.path_counts())
}
