//! Integer homology of truncated simplicial sets via normalized chains and
//! Smith normal form. This is the verification oracle behind every
//! weak-equivalence proxy in the crate: all arithmetic is exact (arbitrary
//! precision), all answers carry their valid degree range, and out-of-range
//! queries are errors rather than zeros.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::simplicial::{SSet, SimplicialMap};

/// A dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let data = rows.into_iter().flat_map(|row| row.into_iter().map(BigInt::from)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cell = out.at_mut(i, j);
                        *cell += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.at(src, j) * q;
            *self.at_mut(dst, j) += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.at(i, src) * q;
            *self.at_mut(i, dst) += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.at(r, j).clone();
            *self.at_mut(r, j) = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.at(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                    *m.at_mut(i, j) = v;
                }
                *m.at_mut(i, k) = BigInt::zero();
            }
            prev = m.at(k, k).clone();
        }
        sign * m.at(n - 1, n - 1).clone()
    }
}

/// Smith normal form d = u * m * v with u, v unimodular and the diagonal
/// entries nonnegative and successively dividing.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.at(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Nontrivial invariant factors (> 1).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect()
    }

    /// Re-multiplies the factorization and checks it against the input.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        self.u.mul(m).mul(&self.v) == self.d
    }
}

fn find_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let x = m.at(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if x.abs() < m.at(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Smith normal form by minimal-absolute-value pivoting. The identity
/// d = u * m * v is re-verified by multiplication for inputs up to 64x64;
/// use [`Snf::verify`] explicitly beyond that.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let limit = m.rows.min(m.cols);
    let mut t = 0;
    while t < limit {
        let Some((pi, pj)) = find_pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // clear the column below the pivot
            let mut dirty = false;
            for i in t + 1..d.rows {
                if d.at(i, t).is_zero() {
                    continue;
                }
                let q = -(d.at(i, t) / d.at(t, t));
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.at(i, t).is_zero() {
                    // remainder smaller than the pivot: promote it
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..d.cols {
                if d.at(t, j).is_zero() {
                    continue;
                }
                let q = -(d.at(t, j) / d.at(t, t));
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d.at(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // divisibility: fold in any entry the pivot does not divide
        let mut fixed = false;
        'scan: for i in t + 1..d.rows {
            for j in t + 1..d.cols {
                if !(d.at(i, j) % d.at(t, t)).is_zero() {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue; // redo this pivot with the folded row
        }
        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let snf = Snf { d, u, v };
    if m.rows * m.cols <= 64 * 64 {
        assert!(snf.verify(m), "smith normal form factorization check failed");
    } else {
        debug_assert!(snf.verify(m));
    }
    snf
}

/// Invariant factors only (no transform tracking): same elimination, used
/// where u and v are not needed.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let snf = smith_normal_form_bare(m.clone());
    (0..snf.rows.min(snf.cols))
        .map(|i| snf.at(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect()
}

fn smith_normal_form_bare(mut d: IntMatrix) -> IntMatrix {
    let limit = d.rows.min(d.cols);
    let mut t = 0;
    while t < limit {
        let Some((pi, pj)) = find_pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        d.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..d.rows {
                if d.at(i, t).is_zero() {
                    continue;
                }
                let q = -(d.at(i, t) / d.at(t, t));
                d.add_row(i, t, &q);
                if !d.at(i, t).is_zero() {
                    d.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..d.cols {
                if d.at(t, j).is_zero() {
                    continue;
                }
                let q = -(d.at(t, j) / d.at(t, t));
                d.add_col(j, t, &q);
                if !d.at(t, j).is_zero() {
                    d.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        let mut fixed = false;
        'scan: for i in t + 1..d.rows {
            for j in t + 1..d.cols {
                if !(d.at(i, j) % d.at(t, t)).is_zero() {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue;
        }
        if d.at(t, t).is_negative() {
            d.negate_row(t);
        }
        t += 1;
    }
    d
}

/// Normalized chain complex of a truncated simplicial set: one generator per
/// nondegenerate simplex, boundary the alternating face sum with degenerate
/// faces dropped.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    trunc: usize,
    ranks: Vec<usize>,
    /// boundaries[n - 1] = boundary C_n -> C_{n-1}
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n - 1]
    }

    pub fn new(trunc: usize, ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        let c = ChainComplex { trunc, ranks, boundaries };
        for n in 2..=trunc {
            if !c.boundary(n - 1).mul(c.boundary(n)).is_zero() {
                return Err(Error::BoundaryCompositionNonzero { degree: n });
            }
        }
        Ok(c)
    }
}

/// Builds the normalized chains of a simplicial set, verifying that the
/// boundary squares to zero.
pub fn normalized_chains(x: &SSet) -> Result<ChainComplex> {
    let t = x.trunc();
    let mut nondeg: Vec<Vec<usize>> = Vec::new();
    let mut position: Vec<BTreeMap<usize, usize>> = Vec::new();
    for n in 0..=t {
        let nd = x.nondegenerate(n);
        position.push(nd.iter().enumerate().map(|(p, &k)| (k, p)).collect());
        nondeg.push(nd);
    }
    let ranks: Vec<usize> = nondeg.iter().map(|v| v.len()).collect();
    let mut boundaries = Vec::new();
    for n in 1..=t {
        let mut m = IntMatrix::zero(ranks[n - 1], ranks[n]);
        for (col, &k) in nondeg[n].iter().enumerate() {
            for i in 0..=n {
                let f = x.face(n, i, k);
                if let Some(&row) = position[n - 1].get(&f) {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    *m.at_mut(row, col) += BigInt::from(sign);
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex::new(t, ranks, boundaries)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    /// divisibility-ordered torsion coefficients, each > 1
    pub torsion: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroups {
    pub groups: Vec<HomologyGroup>,
    /// degrees [0, valid_through] have full boundary data
    pub valid_through: usize,
}

impl HomologyGroups {
    pub fn group(&self, degree: usize) -> Result<&HomologyGroup> {
        if degree > self.valid_through {
            return Err(Error::RangeExceedsValidity {
                requested: degree,
                valid: self.valid_through,
            });
        }
        Ok(&self.groups[degree])
    }

    pub fn betti_vector(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }
}

/// Homology in degrees 0..=trunc-1 (the range with full boundary data).
pub fn homology_groups(c: &ChainComplex) -> Result<HomologyGroups> {
    if c.trunc() == 0 {
        return Err(Error::RangeExceedsValidity { requested: 0, valid: 0 });
    }
    let valid_through = c.trunc() - 1;
    let mut rank_of_boundary = vec![0usize; c.trunc() + 2];
    let mut torsion_of = vec![Vec::new(); c.trunc() + 2];
    for n in 1..=c.trunc() {
        let factors = invariant_factors(c.boundary(n));
        rank_of_boundary[n] = factors.len();
        torsion_of[n] = factors.into_iter().filter(|f| !f.is_one()).collect();
    }
    let mut groups = Vec::new();
    for n in 0..=valid_through {
        let rho_n = if n == 0 { 0 } else { rank_of_boundary[n] };
        let rho_next = rank_of_boundary[n + 1];
        let betti = c.rank(n) - rho_n - rho_next;
        groups.push(HomologyGroup { degree: n, betti, torsion: torsion_of[n + 1].clone() });
    }
    Ok(HomologyGroups { groups, valid_through })
}

pub fn homology_of(x: &SSet) -> Result<HomologyGroups> {
    homology_groups(&normalized_chains(x)?)
}

#[derive(Debug, Clone)]
pub struct HomologyComparison {
    pub equal: bool,
    pub compared_through: usize,
    /// the comparison is a homology-level proxy for weak equivalence
    pub proxy: &'static str,
}

/// Degreewise equality of Betti numbers and torsion within the shared valid
/// range; erroring when the requested range exceeds it.
pub fn homology_equal(x: &SSet, y: &SSet, through: usize) -> Result<HomologyComparison> {
    let hx = homology_of(x)?;
    let hy = homology_of(y)?;
    let valid = hx.valid_through.min(hy.valid_through);
    if through > valid {
        return Err(Error::RangeExceedsValidity { requested: through, valid });
    }
    let equal = (0..=through).all(|n| hx.groups[n] == hy.groups[n]);
    Ok(HomologyComparison { equal, compared_through: through, proxy: "homology-proxy" })
}

/// The chain map on normalized complexes induced by a simplicial map
/// (images that are degenerate go to zero).
pub fn chain_map(f: &SimplicialMap) -> Result<Vec<IntMatrix>> {
    let x = f.source();
    let y = f.target();
    let t = x.trunc();
    let mut out = Vec::new();
    for n in 0..=t {
        let src_nd = x.nondegenerate(n);
        let tgt_nd = y.nondegenerate(n);
        let tgt_pos: BTreeMap<usize, usize> =
            tgt_nd.iter().enumerate().map(|(p, &k)| (k, p)).collect();
        let mut m = IntMatrix::zero(tgt_nd.len(), src_nd.len());
        for (col, &k) in src_nd.iter().enumerate() {
            if let Some(&row) = tgt_pos.get(&f.apply(n, k)) {
                *m.at_mut(row, col) = BigInt::one();
            }
        }
        out.push(m);
    }
    // chain map condition: boundary . f = f . boundary
    let cx = normalized_chains(x)?;
    let cy = normalized_chains(y)?;
    for n in 1..=t {
        if cy.boundary(n).mul(&out[n]) != out[n - 1].mul(cx.boundary(n)) {
            return Err(Error::Malformed { reason: format!("chain map fails at degree {n}") });
        }
    }
    Ok(out)
}

/// Basis of the kernel of m, as columns.
fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    (rank..m.cols)
        .map(|j| (0..m.cols).map(|i| snf.v.at(i, j).clone()).collect())
        .collect()
}

/// Does v lie in the column span of m (over the integers)?
fn in_image(snf: &Snf, v: &[BigInt]) -> bool {
    let uv = snf.u.mul_vec(v);
    let rank = snf.rank();
    for (i, value) in uv.iter().enumerate() {
        if i < rank {
            if !(value % snf.d.at(i, i)).is_zero() {
                return false;
            }
        } else if !value.is_zero() {
            return false;
        }
    }
    true
}

/// Whether two simplicial maps X -> Y induce the same map on homology in
/// degrees 0..=through. Decided exactly: for every kernel basis cycle z,
/// (f - g)(z) must be a boundary.
pub fn homology_maps_equal(f: &SimplicialMap, g: &SimplicialMap, through: usize) -> Result<bool> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::Mismatch);
    }
    let t = f.source().trunc();
    if through + 1 > t {
        return Err(Error::RangeExceedsValidity { requested: through, valid: t.saturating_sub(1) });
    }
    let fm = chain_map(f)?;
    let gm = chain_map(g)?;
    let cx = normalized_chains(f.source())?;
    let cy = normalized_chains(f.target())?;
    for n in 0..=through {
        let cycles: Vec<Vec<BigInt>> = if n == 0 {
            let r = cx.rank(0);
            (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                        .collect()
                })
                .collect()
        } else {
            kernel_basis(cx.boundary(n))
        };
        let target_boundary = smith_normal_form(cy.boundary(n + 1));
        for z in cycles {
            let fz = fm[n].mul_vec(&z);
            let gz = gm[n].mul_vec(&z);
            let diff: Vec<BigInt> = fz.iter().zip(&gz).map(|(a, b)| a - b).collect();
            if !in_image(&target_boundary, &diff) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether a simplicial map is a homology isomorphism, decided through the
/// acyclicity of its mapping cone. Valid conclusions reach degree trunc - 2.
pub fn homology_map_is_iso(f: &SimplicialMap) -> Result<(bool, usize)> {
    let t = f.source().trunc();
    if t < 2 {
        return Err(Error::RangeExceedsValidity { requested: 0, valid: 0 });
    }
    let fm = chain_map(f)?;
    let cx = normalized_chains(f.source())?;
    let cy = normalized_chains(f.target())?;
    // cone_n = C_{n-1} + D_n with boundary (c, d) -> (-dc, dd - f c)
    let mut ranks = Vec::new();
    for n in 0..=t {
        let cr = if n == 0 { 0 } else { cx.rank(n - 1) };
        ranks.push(cr + cy.rank(n));
    }
    let mut boundaries = Vec::new();
    for n in 1..=t {
        let cr_top = if n >= 2 { cx.rank(n - 2) } else { 0 };
        let cr = cx.rank(n - 1);
        let mut m = IntMatrix::zero(ranks[n - 1], ranks[n]);
        // top-left: -boundary_C at degree n-1 (when n >= 2)
        if n >= 2 {
            let b = cx.boundary(n - 1);
            for i in 0..b.rows {
                for j in 0..b.cols {
                    *m.at_mut(i, j) = -b.at(i, j).clone();
                }
            }
        }
        // bottom-left: -f_{n-1}
        for i in 0..cy.rank(n - 1) {
            for j in 0..cr {
                *m.at_mut(cr_top + i, j) = -fm[n - 1].at(i, j).clone();
            }
        }
        // bottom-right: boundary_D at degree n
        let b = cy.boundary(n);
        for i in 0..b.rows {
            for j in 0..b.cols {
                *m.at_mut(cr_top + i, cr + j) = b.at(i, j).clone();
            }
        }
        boundaries.push(m);
    }
    let cone = ChainComplex::new(t, ranks, boundaries)?;
    let h = homology_groups(&cone)?;
    let acyclic = h.groups.iter().all(|g| g.betti == 0 && g.torsion.is_empty());
    Ok((acyclic, t - 2))
}
