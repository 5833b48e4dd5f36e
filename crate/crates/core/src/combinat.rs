//! Young diagrams, Gelfand-Tsetlin patterns and staircases.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A box of a Young diagram, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }
}

/// `cont(i,j) = j - i`.
pub fn content(cell: Cell) -> i64 {
    cell.content()
}

/// A weakly decreasing sequence of positive integers (zeros stripped).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidShape(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Single row `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Partition::empty()
        } else {
            Partition(vec![n])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero rows, `l(lambda)`.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    /// `|lambda|`.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row `i` (1-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return usize::MAX;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.row >= 1 && c.col >= 1 && c.col <= self.part(c.row)
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size());
        for (i, &li) in self.0.iter().enumerate() {
            for j in 0..li {
                out.push(Cell::new(i + 1, j + 1));
            }
        }
        out
    }

    /// `AC(lambda)`, ordered by row.
    pub fn addable(&self) -> Vec<Cell> {
        (1..=self.length() + 1)
            .filter(|&i| self.part(i) < self.part(i - 1))
            .map(|i| Cell::new(i, self.part(i) + 1))
            .collect()
    }

    /// `RC(lambda)`, ordered by row.
    pub fn removable(&self) -> Vec<Cell> {
        (1..=self.length()).filter(|&i| self.part(i) > self.part(i + 1)).map(|i| Cell::new(i, self.part(i))).collect()
    }

    /// `lambda ∪ c`; `None` if `c` is not addable.
    pub fn with_added(&self, c: Cell) -> Option<Partition> {
        if c.row == 0 || c.row > self.length() + 1 || self.part(c.row) + 1 != c.col {
            return None;
        }
        if c.row > 1 && self.part(c.row - 1) < c.col {
            return None;
        }
        let mut v = self.0.clone();
        if c.row == v.len() + 1 {
            v.push(1);
        } else {
            v[c.row - 1] += 1;
        }
        Some(Partition(v))
    }

    /// `lambda \ c`; `None` if `c` is not removable.
    pub fn with_removed(&self, c: Cell) -> Option<Partition> {
        if c.row == 0 || c.row > self.length() || self.part(c.row) != c.col {
            return None;
        }
        if self.part(c.row + 1) >= c.col {
            return None;
        }
        let mut v = self.0.clone();
        v[c.row - 1] -= 1;
        Partition::new(v).ok()
    }

    /// The unique cell of `bigger` not in `self`, if `bigger = self ∪ c`.
    pub fn added_cell(&self, bigger: &Partition) -> Option<Cell> {
        if bigger.size() != self.size() + 1 {
            return None;
        }
        self.addable().into_iter().find(|&c| self.with_added(c).as_ref() == Some(bigger))
    }

    pub fn hook(&self, c: Cell) -> usize {
        let arm = self.part(c.row) - c.col;
        let leg = (c.row + 1..=self.length()).filter(|&k| self.part(k) >= c.col).count();
        arm + leg + 1
    }

    /// Entries padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<i64> {
        let mut v: Vec<i64> = self.0.iter().map(|&x| x as i64).collect();
        v.resize(n.max(v.len()), 0);
        v
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for k in (1..=n.min(max)).rev() {
                cur.push(k);
                rec(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma separated parts; empty string, `()` or `∅` for the empty diagram.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() || t == "∅" {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad partition `{s}`")))?;
        Partition::new(parts)
    }
}

/// `(AC(lambda), RC(lambda))`.
pub fn addable_removable(lambda: &Partition) -> (Vec<Cell>, Vec<Cell>) {
    (lambda.addable(), lambda.removable())
}

/// Prime exponent bookkeeping for exact ratios of products.
#[derive(Default)]
struct Factored(BTreeMap<u64, i64>);

impl Factored {
    fn mul(&mut self, mut n: u64, e: i64) {
        assert!(n > 0);
        let mut p = 2u64;
        while p * p <= n {
            while n.is_multiple_of(p) {
                *self.0.entry(p).or_default() += e;
                n /= p;
            }
            p += 1;
        }
        if n > 1 {
            *self.0.entry(n).or_default() += e;
        }
    }

    fn value(&self) -> u128 {
        let mut v: u128 = 1;
        for (&p, &e) in &self.0 {
            assert!(e >= 0, "non-integral ratio");
            for _ in 0..e {
                v = v.checked_mul(p as u128).expect("dimension overflows u128");
            }
        }
        v
    }
}

/// `d_lambda = n! / prod hooks`, the number of standard Young tableaux.
pub fn syt_count(lambda: &Partition) -> u128 {
    let mut f = Factored::default();
    for k in 2..=lambda.size() as u64 {
        f.mul(k, 1);
    }
    for c in lambda.cells() {
        f.mul(lambda.hook(c) as u64, -1);
    }
    f.value()
}

/// `m_lambda = prod (d + cont) / prod hooks`, the dimension of the `U(d)`
/// irrep; zero when `l(lambda) > d`.
pub fn ssyt_count(lambda: &Partition, d: usize) -> u128 {
    if lambda.length() > d {
        return 0;
    }
    let mut f = Factored::default();
    for c in lambda.cells() {
        f.mul((d as i64 + c.content()) as u64, 1);
        f.mul(lambda.hook(c) as u64, -1);
    }
    f.value()
}

/// Weakly decreasing integer vector of length `d`, possibly negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Staircase(Vec<i64>);

impl Staircase {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidShape("empty staircase".into()));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidShape(format!("{entries:?} is not weakly decreasing")));
        }
        Ok(Staircase(entries))
    }

    pub fn zero(d: usize) -> Self {
        Staircase(vec![0; d])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `U(d)` dimension, via the shifted partition.
    pub fn dimension(&self) -> u128 {
        let s = -self.0.last().copied().unwrap_or(0);
        let shifted: Vec<usize> = self.0.iter().map(|&x| (x + s) as usize).collect();
        ssyt_count(&Partition::new(shifted).expect("staircase is decreasing"), self.d())
    }
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Staircase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let v = t
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad staircase `{s}`")))?;
        Staircase::new(v)
    }
}

/// A pair of Young diagrams with `l(left) + l(right) <= d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MixedDiagram {
    pub left: Partition,
    pub right: Partition,
    pub d: usize,
}

impl MixedDiagram {
    pub fn new(left: Partition, right: Partition, d: usize) -> Result<Self> {
        if left.length() + right.length() > d {
            return Err(Error::InvalidShape(format!("l({left}) + l({right}) exceeds d = {d}")));
        }
        Ok(MixedDiagram { left, right, d })
    }

    pub fn empty(d: usize) -> Self {
        MixedDiagram { left: Partition::empty(), right: Partition::empty(), d }
    }

    /// `lambda~_i = left_i - right_{d+1-i}`.
    pub fn staircase(&self) -> Staircase {
        let d = self.d;
        let l = self.left.padded(d);
        let r = self.right.padded(d);
        Staircase((0..d).map(|i| l[i] - r[d - 1 - i]).collect())
    }

    pub fn from_staircase(s: &Staircase) -> Self {
        let d = s.d();
        let e = s.entries();
        let left: Vec<usize> = e.iter().map(|&x| x.max(0) as usize).collect();
        let right: Vec<usize> = (0..d).map(|j| (-e[d - 1 - j]).max(0) as usize).collect();
        MixedDiagram {
            left: Partition::new(left).expect("nonneg part of a decreasing vector"),
            right: Partition::new(right).expect("nonneg part of a decreasing vector"),
            d,
        }
    }

    /// `(lambda^, s)` with `lambda^ = lambda~ + s`, `s = right_1`.
    pub fn walled_concatenation(&self) -> (Partition, usize) {
        let s = self.right.part(1);
        let st = self.staircase();
        let v: Vec<usize> = st.entries().iter().map(|&x| (x + s as i64) as usize).collect();
        (Partition::new(v).expect("shifted staircase is a partition"), s)
    }

    /// `U(d)` dimension `m_lambda`.
    pub fn dimension(&self) -> u128 {
        self.staircase().dimension()
    }
}

impl fmt::Display for MixedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}),({}))", self.left, self.right)
    }
}

impl MixedDiagram {
    /// Parses `((2,1),(2))` or `(2,1|2)` for a given `d`.
    pub fn parse(s: &str, d: usize) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad mixed diagram `{s}`"));
        let (l, r) = if let Some(inner) = t.strip_prefix("((").and_then(|x| x.strip_suffix("))")) {
            inner.split_once("),(").ok_or_else(bad)?
        } else if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            inner.split_once('|').ok_or_else(bad)?
        } else {
            t.split_once('|').ok_or_else(bad)?
        };
        MixedDiagram::new(l.parse()?, r.parse()?, d)
    }
}

/// `(lambda~, (lambda^, s))` for a mixed diagram.
pub fn staircase_conversions(mu: &MixedDiagram) -> Result<(Staircase, (Partition, usize))> {
    if mu.left.length() + mu.right.length() > mu.d {
        return Err(Error::InvalidShape(format!("{mu} has too many rows for d = {}", mu.d)));
    }
    Ok((mu.staircase(), mu.walled_concatenation()))
}

/// Gelfand-Tsetlin pattern; `rows[0]` is the top row of length `d`,
/// `rows[d-1]` the bottom row of length 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GtPattern {
    rows: Vec<Vec<i64>>,
}

impl GtPattern {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let d = rows.len();
        for (k, r) in rows.iter().enumerate() {
            if r.len() != d - k {
                return Err(Error::InvalidShape(format!("row {k} has length {}", r.len())));
            }
        }
        let p = GtPattern { rows };
        if !p.is_interlacing() {
            return Err(Error::InvalidShape("rows do not interlace".into()));
        }
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Row of length `j` (`m_j`), 1-based.
    pub fn row(&self, j: usize) -> &[i64] {
        &self.rows[self.d() - j]
    }

    pub fn top(&self) -> Staircase {
        Staircase(self.rows[0].clone())
    }

    /// `m_{i,j} >= m_{i,j-1} >= m_{i+1,j}` for every row pair.
    pub fn is_interlacing(&self) -> bool {
        for k in 0..self.d().saturating_sub(1) {
            let up = &self.rows[k];
            let lo = &self.rows[k + 1];
            for i in 0..lo.len() {
                if !(up[i] >= lo[i] && lo[i] >= up[i + 1]) {
                    return false;
                }
            }
        }
        true
    }

    /// `w_j = s_j - s_{j-1}` with `s_j` the sum of the row of length `j`.
    pub fn weight(&self) -> Vec<i64> {
        let d = self.d();
        let sums: Vec<i64> = (1..=d).map(|j| self.row(j).iter().sum()).collect();
        (0..d).map(|j| sums[j] - if j == 0 { 0 } else { sums[j - 1] }).collect()
    }
}

impl fmt::Display for GtPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl FromStr for GtPattern {
    type Err = Error;

    /// Rows top to bottom separated by `;`, entries by `,`.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .trim()
            .split(';')
            .map(|r| r.split(',').map(|x| x.trim().parse::<i64>()).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad pattern `{s}`")))?;
        GtPattern::new(rows)
    }
}

/// `w(M)`.
pub fn pattern_weight(m: &GtPattern) -> Vec<i64> {
    m.weight()
}

/// All GT patterns with top row `shape`, in canonical order: descending
/// lexicographic on the rows below the top, read top to bottom.
pub fn gt_patterns(shape: &Staircase) -> Vec<GtPattern> {
    fn rec(rows: &mut Vec<Vec<i64>>, out: &mut Vec<GtPattern>) {
        let up = rows.last().unwrap().clone();
        if up.len() == 1 {
            out.push(GtPattern { rows: rows.clone() });
            return;
        }
        let n = up.len() - 1;
        let mut cur = Vec::with_capacity(n);
        fill(&up, n, &mut cur, rows, out);
    }
    fn fill(up: &[i64], n: usize, cur: &mut Vec<i64>, rows: &mut Vec<Vec<i64>>, out: &mut Vec<GtPattern>) {
        let i = cur.len();
        if i == n {
            rows.push(cur.clone());
            rec(rows, out);
            rows.pop();
            return;
        }
        let mut v = up[i];
        while v >= up[i + 1] {
            cur.push(v);
            fill(up, n, cur, rows, out);
            cur.pop();
            v -= 1;
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![shape.entries().to_vec()], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn contents() {
        assert_eq!(content(Cell::new(1, 1)), 0);
        assert_eq!(content(Cell::new(1, 5)), 4);
        assert_eq!(content(Cell::new(3, 1)), -2);
    }

    #[test]
    fn corners_of_533() {
        let (ac, rc) = addable_removable(&p(&[5, 3, 3]));
        assert_eq!(rc, vec![Cell::new(1, 5), Cell::new(3, 3)]);
        assert_eq!(ac, vec![Cell::new(1, 6), Cell::new(2, 4), Cell::new(4, 1)]);
        let (ac, rc) = addable_removable(&Partition::empty());
        assert!(rc.is_empty());
        assert_eq!(ac, vec![Cell::new(1, 1)]);
        let (ac, rc) = addable_removable(&p(&[2, 2]));
        assert_eq!(rc, vec![Cell::new(2, 2)]);
        assert_eq!(ac, vec![Cell::new(1, 3), Cell::new(3, 1)]);
    }

    #[test]
    fn dimensions() {
        assert_eq!(syt_count(&p(&[3, 1])), 3);
        assert_eq!(syt_count(&p(&[7])), 1);
        assert_eq!(syt_count(&p(&[2, 2])), 2);
        assert_eq!(syt_count(&p(&[3, 2, 1])), 16);
        assert_eq!(ssyt_count(&p(&[3, 1]), 2), 3);
        assert_eq!(ssyt_count(&p(&[1]), 5), 5);
        assert_eq!(ssyt_count(&p(&[2, 2]), 3), 6);
        assert_eq!(ssyt_count(&p(&[1, 1, 1]), 2), 0);
    }

    #[test]
    fn patterns_of_31() {
        let pats = gt_patterns(&Staircase::new(vec![3, 1]).unwrap());
        let rows: Vec<String> = pats.iter().map(|m| m.to_string()).collect();
        assert_eq!(rows, vec!["3,1;3", "3,1;2", "3,1;1"]);
        let w: Vec<Vec<i64>> = pats.iter().map(pattern_weight).collect();
        assert_eq!(w, vec![vec![3, 1], vec![2, 2], vec![1, 3]]);
        assert_eq!(gt_patterns(&Staircase::zero(4)).len(), 1);
        let st = Staircase::new(vec![2, 0, -1, -3]).unwrap();
        assert_eq!(gt_patterns(&st).len() as u128, ssyt_count(&p(&[5, 3, 2]), 4));
    }

    #[test]
    fn staircases() {
        let mu = MixedDiagram::new(p(&[2]), p(&[3, 1]), 4).unwrap();
        let (st, (hat, s)) = staircase_conversions(&mu).unwrap();
        assert_eq!(st.entries(), &[2, 0, -1, -3]);
        assert_eq!(hat, p(&[5, 3, 2]));
        assert_eq!(s, 3);
        assert_eq!(MixedDiagram::from_staircase(&st), mu);
        let mu = MixedDiagram::new(p(&[1]), p(&[1]), 2).unwrap();
        let (st, (hat, s)) = staircase_conversions(&mu).unwrap();
        assert_eq!(st.entries(), &[1, -1]);
        assert_eq!(hat, p(&[2]));
        assert_eq!(s, 1);
        assert!(MixedDiagram::new(p(&[1, 1]), p(&[1]), 2).is_err());
    }

    #[test]
    fn parsing() {
        let m = MixedDiagram::parse("((2,1),(2))", 3).unwrap();
        assert_eq!(m.left, p(&[2, 1]));
        assert_eq!(m.right, p(&[2]));
        let e = MixedDiagram::parse("((1),())", 3).unwrap();
        assert!(e.right.is_empty());
        assert_eq!(MixedDiagram::parse(&m.to_string(), 3).unwrap(), m);
        let g: GtPattern = "3,1;2".parse().unwrap();
        assert_eq!(g.weight(), vec![2, 2]);
        assert!("1,3;2".parse::<GtPattern>().is_err());
    }
}
