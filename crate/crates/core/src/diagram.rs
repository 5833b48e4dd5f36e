//! Walled Brauer diagrams, their composition, the natural matrix
//! representation `psi` on `(C^d)^{p+q}`, and Jucys-Murphy elements.
//!
//! Node `i` (0-based) of a diagram is top node `i+1`; node `n+i` is bottom
//! node `i+1`, with `n = p+q`. Top nodes carry the row index of `psi`, bottom
//! nodes the column index. `compose(a, b)` glues the bottom of `a` onto the
//! top of `b`, so `psi(a) psi(b) = d^loops psi(a∘b)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Default bound on the number of entries of any dense matrix we build.
pub const DEFAULT_DENSE_CAP: u128 = 1_000_000;

/// Checks that a `dim x dim` dense matrix stays within `cap` entries.
pub fn check_dense(dim: u128, cap: u128) -> Result<()> {
    let entries = dim.saturating_mul(dim);
    if entries > cap {
        return Err(Error::SizeCap { entries, cap });
    }
    Ok(())
}

/// `d^n` with overflow check.
pub fn space_dim(d: usize, n: usize) -> Result<usize> {
    (d as u128)
        .checked_pow(n as u32)
        .filter(|&x| x <= usize::MAX as u128)
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidArgument(format!("{d}^{n} overflows")))
}

/// A walled Brauer diagram stored as its node involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BrauerDiagram {
    p: usize,
    q: usize,
    partner: Vec<usize>,
}

impl BrauerDiagram {
    /// Builds a diagram from its involution, checking the wall rules.
    pub fn from_partner(p: usize, q: usize, partner: Vec<usize>) -> Result<Self> {
        let n = p + q;
        if partner.len() != 2 * n {
            return Err(Error::InvalidArgument("partner table has wrong length".into()));
        }
        for (a, &b) in partner.iter().enumerate() {
            if b >= 2 * n || partner[b] != a || a == b {
                return Err(Error::InvalidArgument("partner table is not a perfect matching".into()));
            }
            let (ta, ia) = (a < n, a % n);
            let (tb, ib) = (b < n, b % n);
            let same_side = (ia < p) == (ib < p);
            if (ta != tb) != same_side {
                return Err(Error::InvalidArgument(format!("edge {a}-{b} violates the wall rule")));
            }
        }
        Ok(BrauerDiagram { p, q, partner })
    }

    pub fn identity(p: usize, q: usize) -> Self {
        let n = p + q;
        let partner = (0..2 * n).map(|a| if a < n { a + n } else { a - n }).collect();
        BrauerDiagram { p, q, partner }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    /// Adjacent transposition `sigma_i` for `i != p`, contraction at `i = p`.
    pub fn generator(i: usize, p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if i == 0 || i >= n {
            return Err(Error::InvalidArgument(format!("generator index {i} not in 1..{n}")));
        }
        if i == p {
            BrauerDiagram::contraction(p, p + 1, p, q)
        } else {
            BrauerDiagram::transposition(i, i + 1, p, q)
        }
    }

    /// Transposition `(i, j)` of two nodes on the same side (1-based).
    pub fn transposition(i: usize, j: usize, p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if i == 0 || j == 0 || i > n || j > n || i == j || (i <= p) != (j <= p) {
            return Err(Error::InvalidArgument(format!("bad transposition ({i},{j})")));
        }
        let mut d = BrauerDiagram::identity(p, q);
        let (a, b) = (i - 1, j - 1);
        d.partner[a] = b + n;
        d.partner[b + n] = a;
        d.partner[b] = a + n;
        d.partner[a + n] = b;
        Ok(d)
    }

    /// Contraction of left node `i <= p` with right node `k > p` (1-based).
    pub fn contraction(i: usize, k: usize, p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if i == 0 || i > p || k <= p || k > n {
            return Err(Error::InvalidArgument(format!("bad contraction <{i},{k}>")));
        }
        let mut d = BrauerDiagram::identity(p, q);
        let (a, b) = (i - 1, k - 1);
        d.partner[a] = b;
        d.partner[b] = a;
        d.partner[a + n] = b + n;
        d.partner[b + n] = a + n;
        Ok(d)
    }

    /// Permutation diagram joining top `perm[j]` to bottom `j` (0-based);
    /// `perm` must keep both sides of the wall.
    pub fn permutation(perm: &[usize], p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        let mut partner = vec![0; 2 * n];
        for (j, &t) in perm.iter().enumerate() {
            partner[t] = j + n;
            partner[j + n] = t;
        }
        BrauerDiagram::from_partner(p, q, partner)
    }

    /// Number of top-top edges.
    pub fn num_contractions(&self) -> usize {
        let n = self.n();
        (0..n).filter(|&a| self.partner[a] < n && a < self.partner[a]).count()
    }

    pub fn is_permutation(&self) -> bool {
        self.num_contractions() == 0
    }

    /// All diagrams for given `(p, q)`.
    pub fn all(p: usize, q: usize) -> Vec<BrauerDiagram> {
        // Side-swapped matching: top-left and bottom-right form one side,
        // top-right and bottom-left the other; any bijection between them works.
        let n = p + q;
        let side_a: Vec<usize> = (0..p).chain((n + p)..(2 * n)).collect();
        let side_b: Vec<usize> = (p..n).chain(n..(n + p)).collect();
        let mut out = Vec::new();
        let mut used = vec![false; n];
        let mut pick = vec![0; n];
        fn rec(
            k: usize,
            a: &[usize],
            b: &[usize],
            used: &mut [bool],
            pick: &mut [usize],
            p: usize,
            q: usize,
            out: &mut Vec<BrauerDiagram>,
        ) {
            let n = p + q;
            if k == n {
                let mut partner = vec![0; 2 * n];
                for i in 0..n {
                    partner[a[i]] = b[pick[i]];
                    partner[b[pick[i]]] = a[i];
                }
                out.push(BrauerDiagram { p, q, partner });
                return;
            }
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    pick[k] = j;
                    rec(k + 1, a, b, used, pick, p, q, out);
                    used[j] = false;
                }
            }
        }
        rec(0, &side_a, &side_b, &mut used, &mut pick, p, q, &mut out);
        out.sort();
        out
    }

    /// Nodes in 1-based `t`/`b` notation.
    fn node_name(&self, a: usize) -> String {
        let n = self.n();
        if a < n {
            format!("t{}", a + 1)
        } else {
            format!("b{}", a - n + 1)
        }
    }

    /// `psi(pi)` in the computational basis, first tensor factor most
    /// significant; entries are 0/1.
    pub fn psi(&self, d: usize) -> Result<DMatrix<f64>> {
        self.psi_with_cap(d, DEFAULT_DENSE_CAP)
    }

    pub fn psi_with_cap(&self, d: usize, cap: u128) -> Result<DMatrix<f64>> {
        let n = self.n();
        let dim = space_dim(d, n)?;
        check_dense(dim as u128, cap)?;
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        let top_pairs: Vec<(usize, usize)> =
            (0..n).filter(|&a| self.partner[a] < n && a < self.partner[a]).map(|a| (a, self.partner[a])).collect();
        let mut ydig = vec![0usize; n];
        let mut x = vec![0usize; n];
        for col in 0..dim {
            let mut c = col;
            for i in (0..n).rev() {
                ydig[i] = c % d;
                c /= d;
            }
            // bottom-bottom edges need equal labels
            let ok = (0..n).all(|j| {
                let b = self.partner[n + j];
                b < n || ydig[b - n] == ydig[j]
            });
            if !ok {
                continue;
            }
            for (a, xa) in x.iter_mut().enumerate() {
                let b = self.partner[a];
                if b >= n {
                    *xa = ydig[b - n];
                }
            }
            let free = top_pairs.len();
            let combos = d.pow(free as u32);
            for mut k in 0..combos {
                for &(a, b) in &top_pairs {
                    let v = k % d;
                    k /= d;
                    x[a] = v;
                    x[b] = v;
                }
                let row = x.iter().fold(0usize, |acc, &v| acc * d + v);
                m[(row, col)] += 1.0;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for BrauerDiagram {
    /// `p q | t1:b2 t2:b1 ...`, one entry per edge, from its first node.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} |", self.p, self.q)?;
        for a in 0..2 * self.n() {
            let b = self.partner[a];
            if a < b {
                write!(f, " {}:{}", self.node_name(a), self.node_name(b))?;
            }
        }
        Ok(())
    }
}

impl FromStr for BrauerDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("bad diagram `{s}`: {m}"));
        let (head, body) = s.split_once('|').ok_or_else(|| bad("missing `|`"))?;
        let nums: Vec<usize> = head
            .split_whitespace()
            .map(|x| x.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("bad p q"))?;
        if nums.len() != 2 {
            return Err(bad("expected `p q`"));
        }
        let (p, q) = (nums[0], nums[1]);
        let n = p + q;
        let node = |t: &str| -> Result<usize> {
            let (kind, idx) = t.split_at(1);
            let i: usize = idx.parse().map_err(|_| bad("bad node"))?;
            if i == 0 || i > n {
                return Err(bad("node out of range"));
            }
            match kind {
                "t" => Ok(i - 1),
                "b" => Ok(n + i - 1),
                _ => Err(bad("node must start with t or b")),
            }
        };
        let mut partner = vec![usize::MAX; 2 * n];
        for e in body.split_whitespace() {
            let (a, b) = e.split_once(':').ok_or_else(|| bad("edge needs `:`"))?;
            let (a, b) = (node(a)?, node(b)?);
            if partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(bad("node used twice"));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if partner.contains(&usize::MAX) {
            return Err(bad("unmatched node"));
        }
        BrauerDiagram::from_partner(p, q, partner)
    }
}

/// `a ∘ b` (bottom of `a` glued to top of `b`) and the number of closed loops.
pub fn compose(a: &BrauerDiagram, b: &BrauerDiagram) -> Result<(BrauerDiagram, usize)> {
    if a.p != b.p || a.q != b.q {
        return Err(Error::Mismatch(format!("cannot compose ({},{}) with ({},{})", a.p, a.q, b.p, b.q)));
    }
    let n = a.n();
    let mut seen = vec![false; n];
    let mut partner = vec![usize::MAX; 2 * n];
    // outer nodes: a's top (0..n) and b's bottom (n..2n)
    for start in 0..2 * n {
        if partner[start] != usize::MAX {
            continue;
        }
        // (in_a, node) current position
        let (mut in_a, mut cur) = if start < n { (true, a.partner[start]) } else { (false, b.partner[start]) };
        let end = loop {
            if in_a {
                if cur < n {
                    break cur;
                }
                let m = cur - n;
                seen[m] = true;
                in_a = false;
                cur = b.partner[m];
            } else {
                if cur >= n {
                    break cur;
                }
                let m = cur;
                seen[m] = true;
                in_a = true;
                cur = a.partner[n + m];
            }
        };
        partner[start] = end;
        partner[end] = start;
    }
    let mut loops = 0;
    for m0 in 0..n {
        if seen[m0] {
            continue;
        }
        loops += 1;
        let mut m = m0;
        loop {
            seen[m] = true;
            let x = a.partner[n + m] - n;
            seen[x] = true;
            let y = b.partner[x];
            if y == m0 {
                break;
            }
            m = y;
        }
    }
    Ok((BrauerDiagram { p: a.p, q: a.q, partner }, loops))
}

/// Composes a generator word `sigma_{w_1} ... sigma_{w_k}`.
pub fn compose_word(word: &[usize], p: usize, q: usize) -> Result<(BrauerDiagram, usize)> {
    let mut acc = BrauerDiagram::identity(p, q);
    let mut loops = 0;
    for &i in word {
        let (next, l) = compose(&acc, &BrauerDiagram::generator(i, p, q)?)?;
        acc = next;
        loops += l;
    }
    Ok((acc, loops))
}

/// Adjacent-transposition word for the permutation diagram of `perm`
/// (top `perm[j]` to bottom `j`). Never uses the wall index `p`.
pub fn permutation_word(perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    let mut pos = vec![0; n];
    for (j, &t) in perm.iter().enumerate() {
        pos[t] = j;
    }
    let mut word = Vec::new();
    loop {
        let Some(i) = (0..n.saturating_sub(1)).find(|&i| pos[i] > pos[i + 1]) else {
            break;
        };
        word.push(i + 1);
        pos.swap(i, i + 1);
    }
    word
}

/// Word for the product of nested contractions `<p-i, p+1+i>`, `i < k`.
pub fn nested_contraction_word(k: usize, p: usize, q: usize) -> Vec<usize> {
    let n = p + q;
    let mut word = Vec::new();
    for i in 0..k {
        // tau = (p-i, p)(p+1, p+1+i), realized as an adjacent-transposition word
        let mut tau: Vec<usize> = (0..n).collect();
        tau.swap(p - 1 - i, p - 1);
        tau.swap(p, p + i);
        let tw = permutation_word(&tau);
        word.extend(tw.iter().copied());
        word.push(p);
        word.extend(tw.iter().rev().copied());
    }
    word
}

/// Generator word whose composition is `pi` (with no closed loops):
/// `pi = P_alpha * sigma_bar_k * P_beta`.
pub fn diagram_to_generators(pi: &BrauerDiagram) -> Vec<usize> {
    let (p, q, n) = (pi.p, pi.q, pi.n());
    let k = pi.num_contractions();
    let mut top_pairs = Vec::new();
    let mut bot_pairs = Vec::new();
    let mut left_through = Vec::new();
    let mut right_through = Vec::new();
    for a in 0..n {
        let b = pi.partner[a];
        if b < n {
            if a < b {
                top_pairs.push((a, b));
            }
        } else if a < p {
            left_through.push((a, b - n));
        } else {
            right_through.push((a, b - n));
        }
    }
    for a in n..2 * n {
        let b = pi.partner[a];
        if b >= n && a < b {
            bot_pairs.push((a - n, b - n));
        }
    }
    let mut alpha = vec![usize::MAX; n];
    let mut beta_inv = vec![usize::MAX; n];
    for i in 0..k {
        let (l, r) = top_pairs[i];
        alpha[p - 1 - i] = l;
        alpha[p + i] = r;
        let (l, r) = bot_pairs[i];
        beta_inv[p - 1 - i] = l;
        beta_inv[p + i] = r;
    }
    for (j, &(t, u)) in left_through.iter().enumerate() {
        alpha[j] = t;
        beta_inv[j] = u;
    }
    for (j, &(t, u)) in right_through.iter().enumerate() {
        alpha[p + k + j] = t;
        beta_inv[p + k + j] = u;
    }
    let mut beta = vec![0; n];
    for (j, &b) in beta_inv.iter().enumerate() {
        beta[b] = j;
    }
    let mut word = permutation_word(&alpha);
    word.extend(nested_contraction_word(k, p, q));
    word.extend(permutation_word(&beta));
    word
}

/// Formal rational combination of diagrams of one shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramCombo {
    pub p: usize,
    pub q: usize,
    pub d: usize,
    terms: BTreeMap<BrauerDiagram, Rational>,
}

impl DiagramCombo {
    pub fn zero(p: usize, q: usize, d: usize) -> Self {
        DiagramCombo { p, q, d, terms: BTreeMap::new() }
    }

    pub fn single(pi: BrauerDiagram, d: usize) -> Self {
        let mut c = DiagramCombo::zero(pi.p, pi.q, d);
        c.add_term(pi, Rational::from_integer(1));
        c
    }

    pub fn identity(p: usize, q: usize, d: usize) -> Self {
        DiagramCombo::single(BrauerDiagram::identity(p, q), d)
    }

    pub fn terms(&self) -> &BTreeMap<BrauerDiagram, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, pi: BrauerDiagram, c: Rational) {
        let e = self.terms.entry(pi.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&pi);
        }
    }

    pub fn add(&self, other: &DiagramCombo) -> DiagramCombo {
        let mut out = self.clone();
        for (pi, c) in &other.terms {
            out.add_term(pi.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: Rational) -> DiagramCombo {
        let mut out = DiagramCombo::zero(self.p, self.q, self.d);
        for (pi, x) in &self.terms {
            out.add_term(pi.clone(), *x * c);
        }
        out
    }

    /// Algebra product, with `d^loops` factors.
    pub fn mul(&self, other: &DiagramCombo) -> Result<DiagramCombo> {
        let mut out = DiagramCombo::zero(self.p, self.q, self.d);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let (c, l) = compose(a, b)?;
                let f = Rational::from_integer((self.d as i128).pow(l as u32));
                out.add_term(c, *x * *y * f);
            }
        }
        Ok(out)
    }

    pub fn psi(&self) -> Result<DMatrix<f64>> {
        let dim = space_dim(self.d, self.p + self.q)?;
        check_dense(dim as u128, DEFAULT_DENSE_CAP)?;
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for (pi, c) in &self.terms {
            let f = *c.numer() as f64 / *c.denom() as f64;
            m += pi.psi(self.d)? * f;
        }
        Ok(m)
    }
}

/// Jucys-Murphy element `J_k`:
/// `0` for `k = 1`, `sum_{i<k} (i,k)` for `k <= p`, and
/// `sum_{p<i<k} (i,k) - sum_{i<=p} <i,k> + d` for `k > p`.
pub fn jm_element(k: usize, p: usize, q: usize, d: usize) -> Result<DiagramCombo> {
    let n = p + q;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("JM index {k} not in 1..={n}")));
    }
    let one = Rational::from_integer(1);
    let mut c = DiagramCombo::zero(p, q, d);
    if k <= p {
        for i in 1..k {
            c.add_term(BrauerDiagram::transposition(i, k, p, q)?, one);
        }
    } else {
        for i in p + 1..k {
            c.add_term(BrauerDiagram::transposition(i, k, p, q)?, one);
        }
        for i in 1..=p {
            c.add_term(BrauerDiagram::contraction(i, k, p, q)?, -one);
        }
        c.add_term(BrauerDiagram::identity(p, q), Rational::from_integer(d as i128));
    }
    Ok(c)
}

/// Haar-random unitary via QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal absorbed.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let z = DMatrix::<Complex64>::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / 2f64.sqrt()
    });
    let qr = z.qr();
    let mut qm = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            qm[(i, j)] *= ph;
        }
    }
    qm
}

/// Kronecker product.
pub fn kron<T>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T>
where
    T: nalgebra::Scalar + Copy + std::ops::Mul<Output = T> + Zero,
{
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::<T>::from_element(ar * br, ac * bc, T::zero());
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `U^{⊗p} ⊗ conj(U)^{⊗q}`.
pub fn mixed_tensor_power(u: &DMatrix<Complex64>, p: usize, q: usize) -> DMatrix<Complex64> {
    let ub = u.map(|z| z.conj());
    let mut acc = DMatrix::<Complex64>::from_element(1, 1, Complex64::new(1.0, 0.0));
    for _ in 0..p {
        acc = kron(&acc, u);
    }
    for _ in 0..q {
        acc = kron(&acc, &ub);
    }
    acc
}
