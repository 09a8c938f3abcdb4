//! m-periodic complexes of projectives, the compression functor from
//! bounded complexes, projective-injective objects, and unrolling back to
//! bounded complexes.

use crate::algebra::{AlgElement, PMap, PathAlgebra};
use crate::complexes::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::field::{fp_neg, FMatrix};

/// An m-periodic complex: `terms[r]` and `diffs[r]` describe all degrees
/// ≡ r (mod m); `diffs[r]` maps `terms[r]` to `terms[(r+1) % m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicComplex {
    pub m: usize,
    pub terms: Vec<Vec<usize>>,
    pub diffs: Vec<PMap>,
}

impl PeriodicComplex {
    pub fn zero(m: usize) -> Self {
        PeriodicComplex {
            m,
            terms: vec![vec![]; m],
            diffs: (0..m).map(|_| PMap::zero(vec![], vec![])).collect(),
        }
    }

    pub fn term(&self, i: i64) -> &[usize] {
        &self.terms[i.rem_euclid(self.m as i64) as usize]
    }

    pub fn diff(&self, i: i64) -> &PMap {
        &self.diffs[i.rem_euclid(self.m as i64) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn total_summands(&self) -> usize {
        self.terms.iter().map(|t| t.len()).sum()
    }

    pub fn validate(&self, alg: &PathAlgebra) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Input("period must be at least 2".into()));
        }
        if self.terms.len() != self.m || self.diffs.len() != self.m {
            return Err(Error::Dimension("periodic complex shape".into()));
        }
        for r in 0..self.m {
            let d = &self.diffs[r];
            if d.src != self.terms[r] || d.dst != self.terms[(r + 1) % self.m] {
                return Err(Error::Dimension(format!(
                    "differential at residue {r} has mismatched summands"
                )));
            }
            d.validate(alg)?;
        }
        for r in 0..self.m {
            let comp = self.diffs[(r + 1) % self.m].compose(&self.diffs[r], alg);
            if !comp.is_zero() {
                return Err(Error::SquareNonzero { degree: r as i64 });
            }
        }
        Ok(())
    }

    /// Z[s]: terms reindexed cyclically, differentials scaled by (−1)^s.
    pub fn shift(&self, s: i64, p: u64) -> PeriodicComplex {
        let m = self.m as i64;
        let sign = if s.rem_euclid(2) == 0 { 1 } else { fp_neg(1, p) };
        let terms = (0..m)
            .map(|r| self.term(r + s).to_vec())
            .collect();
        let diffs = (0..m)
            .map(|r| self.diff(r + s).scale(sign, p))
            .collect();
        PeriodicComplex { m: self.m, terms, diffs }
    }

    pub fn direct_sum(&self, other: &PeriodicComplex) -> PeriodicComplex {
        assert_eq!(self.m, other.m, "period mismatch");
        let terms: Vec<Vec<usize>> = (0..self.m)
            .map(|r| {
                let mut t = self.terms[r].clone();
                t.extend_from_slice(&other.terms[r]);
                t
            })
            .collect();
        let diffs = (0..self.m)
            .map(|r| self.diffs[r].direct_sum(&other.diffs[r]))
            .collect();
        PeriodicComplex { m: self.m, terms, diffs }
    }

    /// Reinterpret with period m·factor (terms and diffs repeat verbatim).
    pub fn unfold(&self, factor: usize) -> PeriodicComplex {
        let m2 = self.m * factor;
        PeriodicComplex {
            m: m2,
            terms: (0..m2).map(|r| self.terms[r % self.m].clone()).collect(),
            diffs: (0..m2).map(|r| self.diffs[r % self.m].clone()).collect(),
        }
    }
}

/// A periodic chain map f: Z -> W: `maps[r]` acts in degrees ≡ r (mod m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicChainMap {
    pub maps: Vec<PMap>,
}

impl PeriodicChainMap {
    pub fn zero(z: &PeriodicComplex, w: &PeriodicComplex) -> Self {
        PeriodicChainMap {
            maps: (0..z.m)
                .map(|r| PMap::zero(z.terms[r].clone(), w.terms[r].clone()))
                .collect(),
        }
    }

    pub fn identity(z: &PeriodicComplex) -> Self {
        PeriodicChainMap {
            maps: z.terms.iter().map(|t| PMap::identity(t.clone())).collect(),
        }
    }

    pub fn map_at(&self, i: i64) -> &PMap {
        &self.maps[i.rem_euclid(self.maps.len() as i64) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn validate(&self, alg: &PathAlgebra, z: &PeriodicComplex, w: &PeriodicComplex) -> Result<()> {
        if self.maps.len() != z.m || z.m != w.m {
            return Err(Error::Dimension("periodic map count".into()));
        }
        for r in 0..z.m {
            if self.maps[r].src != z.terms[r] || self.maps[r].dst != w.terms[r] {
                return Err(Error::Dimension(format!("periodic map shape at residue {r}")));
            }
            self.maps[r].validate(alg)?;
        }
        for r in 0..z.m as i64 {
            let lhs = w.diff(r).compose(self.map_at(r), alg);
            let rhs = self.map_at(r + 1).compose(z.diff(r), alg);
            if lhs != rhs {
                return Err(Error::Input(format!(
                    "periodic map does not commute at residue {r}"
                )));
            }
        }
        Ok(())
    }

    /// self ∘ other.
    pub fn compose(&self, other: &PeriodicChainMap, alg: &PathAlgebra) -> PeriodicChainMap {
        PeriodicChainMap {
            maps: self
                .maps
                .iter()
                .zip(&other.maps)
                .map(|(g, f)| g.compose(f, alg))
                .collect(),
        }
    }

    pub fn add(&self, other: &PeriodicChainMap, p: u64) -> PeriodicChainMap {
        PeriodicChainMap {
            maps: self
                .maps
                .iter()
                .zip(&other.maps)
                .map(|(a, b)| a.add(b, p))
                .collect(),
        }
    }

    pub fn scale(&self, s: u64, p: u64) -> PeriodicChainMap {
        PeriodicChainMap { maps: self.maps.iter().map(|m| m.scale(s, p)).collect() }
    }

    pub fn sub(&self, other: &PeriodicChainMap, p: u64) -> PeriodicChainMap {
        self.add(&other.scale(fp_neg(1, p), p), p)
    }
}

/// The compression of a bounded complex: term at residue r is
/// ⊕_t X^{r + tm} (blocks in increasing degree), with block-diagonal
/// differentials.
pub fn compress(x: &Complex, m: usize) -> PeriodicComplex {
    assert!(m >= 2);
    let mut z = PeriodicComplex::zero(m);
    if x.terms.is_empty() {
        return z;
    }
    // block degree lists per residue
    let degs = |r: usize| -> Vec<i64> {
        (x.bottom..=x.top())
            .filter(|i| i.rem_euclid(m as i64) as usize == r)
            .collect()
    };
    for r in 0..m {
        z.terms[r] = degs(r)
            .iter()
            .flat_map(|&i| x.term(i).iter().copied())
            .collect();
    }
    for r in 0..m {
        let src_degs = degs(r);
        let dst_degs = degs((r + 1) % m);
        let mut d = PMap::zero(z.terms[r].clone(), z.terms[(r + 1) % m].clone());
        let mut col0 = 0usize;
        for &i in &src_degs {
            let blk = x.diff(i);
            // locate the destination block for degree i+1
            let mut row0 = 0usize;
            for &j in &dst_degs {
                if j == i + 1 {
                    for rr in 0..blk.dst.len() {
                        for cc in 0..blk.src.len() {
                            d.entries[row0 + rr][col0 + cc] = blk.entries[rr][cc].clone();
                        }
                    }
                }
                row0 += x.term(j).len();
            }
            col0 += x.term(i).len();
        }
        z.diffs[r] = d;
    }
    z
}

/// The compression of a chain map: block-diagonal with blocks f^{r+tm}.
pub fn compress_map(f: &ChainMap, x: &Complex, y: &Complex, m: usize) -> PeriodicChainMap {
    let zx = compress(x, m);
    let zy = compress(y, m);
    let mut out = PeriodicChainMap::zero(&zx, &zy);
    if x.terms.is_empty() {
        return out;
    }
    for r in 0..m {
        // blocks of each compressed term are ordered by degree over the
        // support of x (resp. y)
        let x_degs: Vec<i64> = (x.bottom..=x.top())
            .filter(|i| i.rem_euclid(m as i64) as usize == r)
            .collect();
        let y_degs: Vec<i64> = if y.terms.is_empty() {
            vec![]
        } else {
            (y.bottom..=y.top())
                .filter(|i| i.rem_euclid(m as i64) as usize == r)
                .collect()
        };
        let mut col0 = 0usize;
        for &i in &x_degs {
            let blk = f.map_at(i, x, y);
            let mut row0 = 0usize;
            for &j in &y_degs {
                if j == i {
                    for rr in 0..blk.dst.len() {
                        for cc in 0..blk.src.len() {
                            out.maps[r].entries[row0 + rr][col0 + cc] =
                                blk.entries[rr][cc].clone();
                        }
                    }
                }
                row0 += y.term(j).len();
            }
            col0 += x.term(i).len();
        }
    }
    out
}

/// Coordinate layout for periodic degreewise maps Z^r -> W^{r+shift}.
#[derive(Debug, Clone)]
pub struct PeriodicHomLayout {
    pub shift: i64,
    pub slots: Vec<(usize, usize, usize, usize)>, // (residue, row, col, path)
}

pub fn periodic_hom_layout(alg: &PathAlgebra, z: &PeriodicComplex, w: &PeriodicComplex, shift: i64) -> PeriodicHomLayout {
    let mut slots = Vec::new();
    for r in 0..z.m {
        let zs = &z.terms[r];
        let ws = w.term(r as i64 + shift);
        for (row, &wv) in ws.iter().enumerate() {
            for (col, &zv) in zs.iter().enumerate() {
                for &q in &alg.hom_basis(zv, wv) {
                    slots.push((r, row, col, q));
                }
            }
        }
    }
    PeriodicHomLayout { shift, slots }
}

pub fn periodic_coords_to_map(
    alg: &PathAlgebra,
    z: &PeriodicComplex,
    w: &PeriodicComplex,
    layout: &PeriodicHomLayout,
    coords: &[u64],
) -> PeriodicChainMap {
    let mut maps: Vec<PMap> = (0..z.m)
        .map(|r| PMap::zero(z.terms[r].clone(), w.term(r as i64 + layout.shift).to_vec()))
        .collect();
    for (slot, &(r, row, col, q)) in layout.slots.iter().enumerate() {
        if coords[slot] != 0 {
            maps[r].entries[row][col] =
                maps[r].entries[row][col].add(&AlgElement::term(q, coords[slot]), alg.p);
        }
    }
    PeriodicChainMap { maps }
}

pub fn periodic_map_to_coords(layout: &PeriodicHomLayout, f: &PeriodicChainMap) -> Vec<u64> {
    layout
        .slots
        .iter()
        .map(|&(r, row, col, q)| *f.maps[r].entries[row][col].coeffs.get(&q).unwrap_or(&0))
        .collect()
}

fn periodic_commutation_matrix(
    alg: &PathAlgebra,
    z: &PeriodicComplex,
    w: &PeriodicComplex,
    layout: &PeriodicHomLayout,
    out_layout: &PeriodicHomLayout,
) -> FMatrix {
    let p = alg.p;
    let mut m = FMatrix::zero(out_layout.slots.len(), layout.slots.len(), p);
    for (j, &(r, row, col, q)) in layout.slots.iter().enumerate() {
        let mut unit = PMap::zero(z.terms[r].clone(), w.terms[r].clone());
        unit.entries[row][col] = AlgElement::path(q);
        let lhs = w.diffs[r].compose(&unit, alg); // at out-residue r
        let prev = (r + z.m - 1) % z.m;
        let rhs = unit.compose(&z.diffs[prev], alg); // at out-residue prev
        for (orow, &(or, orr, occ, oq)) in out_layout.slots.iter().enumerate() {
            let mut v = 0u64;
            if or == r {
                v = crate::field::fp_add(
                    v,
                    *lhs.entries[orr][occ].coeffs.get(&oq).unwrap_or(&0),
                    p,
                );
            }
            if or == prev {
                v = crate::field::fp_sub(
                    v,
                    *rhs.entries[orr][occ].coeffs.get(&oq).unwrap_or(&0),
                    p,
                );
            }
            if v != 0 {
                m[(orow, j)] = crate::field::fp_add(m[(orow, j)], v, p);
            }
        }
    }
    m
}

pub fn periodic_hom_space(alg: &PathAlgebra, z: &PeriodicComplex, w: &PeriodicComplex) -> Vec<PeriodicChainMap> {
    assert_eq!(z.m, w.m, "period mismatch");
    let layout = periodic_hom_layout(alg, z, w, 0);
    if layout.slots.is_empty() {
        return vec![];
    }
    let out_layout = periodic_hom_layout(alg, z, w, 1);
    let cons = periodic_commutation_matrix(alg, z, w, &layout, &out_layout);
    let kern = cons.kernel_basis();
    (0..kern.cols)
        .map(|j| {
            let coords: Vec<u64> = (0..kern.rows).map(|r| kern[(r, j)]).collect();
            periodic_coords_to_map(alg, z, w, &layout, &coords)
        })
        .collect()
}

pub fn periodic_hom_dim(alg: &PathAlgebra, z: &PeriodicComplex, w: &PeriodicComplex) -> usize {
    let layout = periodic_hom_layout(alg, z, w, 0);
    if layout.slots.is_empty() {
        return 0;
    }
    let out_layout = periodic_hom_layout(alg, z, w, 1);
    let cons = periodic_commutation_matrix(alg, z, w, &layout, &out_layout);
    layout.slots.len() - cons.rank()
}

/// Boundary d_W h + h d_Z of a degree-(−1) collection h^r: Z^r -> W^{r−1}.
pub fn periodic_homotopy_boundary(
    alg: &PathAlgebra,
    z: &PeriodicComplex,
    w: &PeriodicComplex,
    h: &PeriodicChainMap,
) -> PeriodicChainMap {
    let p = alg.p;
    let m = z.m as i64;
    let maps = (0..m)
        .map(|r| {
            w.diff(r - 1)
                .compose(h.map_at(r), alg)
                .add(&h.map_at(r + 1).compose(z.diff(r), alg), p)
        })
        .collect();
    PeriodicChainMap { maps }
}

fn periodic_homotopy_image_matrix(
    alg: &PathAlgebra,
    z: &PeriodicComplex,
    w: &PeriodicComplex,
    layout: &PeriodicHomLayout,
) -> FMatrix {
    let h_layout = periodic_hom_layout(alg, z, w, -1);
    let mut m = FMatrix::zero(layout.slots.len(), h_layout.slots.len(), alg.p);
    for j in 0..h_layout.slots.len() {
        let mut e = vec![0u64; h_layout.slots.len()];
        e[j] = 1;
        let h = periodic_coords_to_map(alg, z, w, &h_layout, &e);
        let b = periodic_homotopy_boundary(alg, z, w, &h);
        for (r, &v) in periodic_map_to_coords(layout, &b).iter().enumerate() {
            m[(r, j)] = v;
        }
    }
    m
}

pub fn periodic_homotopy_dim(alg: &PathAlgebra, z: &PeriodicComplex, w: &PeriodicComplex) -> usize {
    let layout = periodic_hom_layout(alg, z, w, 0);
    if layout.slots.is_empty() {
        return 0;
    }
    periodic_homotopy_image_matrix(alg, z, w, &layout).rank()
}

pub fn periodic_stable_hom_dim(alg: &PathAlgebra, z: &PeriodicComplex, w: &PeriodicComplex) -> usize {
    periodic_hom_dim(alg, z, w) - periodic_homotopy_dim(alg, z, w)
}

pub fn periodic_is_null_homotopic(
    alg: &PathAlgebra,
    z: &PeriodicComplex,
    w: &PeriodicComplex,
    f: &PeriodicChainMap,
) -> bool {
    let layout = periodic_hom_layout(alg, z, w, 0);
    let target = periodic_map_to_coords(&layout, f);
    if target.iter().all(|&v| v == 0) {
        return true;
    }
    let m = periodic_homotopy_image_matrix(alg, z, w, &layout);
    matches!(m.solve(&target), Ok(Some(_)))
}

/// The projective-injective object K for a sum of projectives M placed at
/// `position`: M = id = M in residues (position, position+1), zero
/// elsewhere.
pub fn k_complex(summands: &[usize], position: usize, m: usize) -> PeriodicComplex {
    let mut z = PeriodicComplex::zero(m);
    if summands.is_empty() {
        return z;
    }
    let a = position % m;
    let b = (position + 1) % m;
    z.terms[a] = summands.to_vec();
    z.terms[b] = summands.to_vec();
    for r in 0..m {
        z.diffs[r] = PMap::zero(z.terms[r].clone(), z.terms[(r + 1) % m].clone());
    }
    z.diffs[a] = PMap::identity(summands.to_vec());
    z
}

/// Cyclic Gaussian elimination of invertible differential entries.
/// Returns the minimal periodic complex and the stripped pieces
/// (residue, vertex, loop element).
pub fn periodic_strip(alg: &PathAlgebra, z: &PeriodicComplex) -> (PeriodicComplex, Vec<(usize, usize, AlgElement)>) {
    let p = alg.p;
    let m = z.m;
    let mut cur = z.clone();
    let mut live: Vec<Vec<bool>> = cur.terms.iter().map(|t| vec![true; t.len()]).collect();
    let mut dead_pairs: Vec<(usize, usize, usize)> = Vec::new();

    loop {
        let mut pivot = None;
        'outer: for r0 in 0..m {
            let d = &cur.diffs[r0];
            for (row, rowe) in d.entries.iter().enumerate() {
                if !live[(r0 + 1) % m][row] {
                    continue;
                }
                for (col, e) in rowe.iter().enumerate() {
                    if !live[r0][col] || d.src[col] != d.dst[row] {
                        continue;
                    }
                    if let Some(inv) = invert_loop(alg, d.src[col], e) {
                        pivot = Some((r0, row, col, inv));
                        break 'outer;
                    }
                }
            }
        }
        let Some((r0, row, col, uinv)) = pivot else { break };
        let d = cur.diffs[r0].clone();
        let r1 = (r0 + 1) % m;

        let mut phi = PMap::identity(d.src.clone());
        let mut phi_inv = PMap::identity(d.src.clone());
        for cc in 0..d.src.len() {
            if cc != col {
                let t = d.entries[row][cc].mul(&uinv, alg);
                phi.entries[col][cc] = t.clone();
                phi_inv.entries[col][cc] = t.neg(p);
            }
        }
        let mut psi = PMap::identity(d.dst.clone());
        let mut psi_inv = PMap::identity(d.dst.clone());
        for rr in 0..d.dst.len() {
            if rr != row {
                let t = uinv.mul(&d.entries[rr][col], alg);
                psi.entries[rr][row] = t.neg(p);
                psi_inv.entries[rr][row] = t;
            }
        }

        // automorphism per residue: Φ[r0] = phi, Φ[r1] = psi, identity else;
        // d_new[j] = Φ[j+1] ∘ d[j] ∘ Φ[j]^{-1}
        let autos: Vec<Option<(&PMap, &PMap)>> = (0..m)
            .map(|r| {
                if r == r0 {
                    Some((&phi, &phi_inv))
                } else if r == r1 {
                    Some((&psi, &psi_inv))
                } else {
                    None
                }
            })
            .collect();
        let old = cur.clone();
        for j in 0..m {
            let mut nd = old.diffs[j].clone();
            if let Some((_, inv)) = autos[j] {
                nd = nd.compose(inv, alg);
            }
            if let Some((fwd, _)) = autos[(j + 1) % m] {
                nd = fwd.compose(&nd, alg);
            }
            cur.diffs[j] = nd;
        }
        live[r0][col] = false;
        live[r1][row] = false;
        dead_pairs.push((r0, col, row));
    }

    let live_cols: Vec<Vec<usize>> = live
        .iter()
        .map(|l| (0..l.len()).filter(|&i| l[i]).collect())
        .collect();
    let core_terms: Vec<Vec<usize>> = cur
        .terms
        .iter()
        .zip(&live_cols)
        .map(|(t, idx)| idx.iter().map(|&i| t[i]).collect())
        .collect();
    let core_diffs: Vec<PMap> = (0..m)
        .map(|r| {
            let d = &cur.diffs[r];
            let mut nd = PMap::zero(core_terms[r].clone(), core_terms[(r + 1) % m].clone());
            for (nr, &or) in live_cols[(r + 1) % m].iter().enumerate() {
                for (nc, &oc) in live_cols[r].iter().enumerate() {
                    nd.entries[nr][nc] = d.entries[or][oc].clone();
                }
            }
            nd
        })
        .collect();
    let pieces = dead_pairs
        .iter()
        .map(|&(r0, c, r)| (r0, cur.terms[r0][c], cur.diffs[r0].entries[r][c].clone()))
        .collect();
    (PeriodicComplex { m, terms: core_terms, diffs: core_diffs }, pieces)
}

fn invert_loop(alg: &PathAlgebra, v: usize, u: &AlgElement) -> Option<AlgElement> {
    let lam = u.trivial_coeff(v);
    if lam == 0 {
        return None;
    }
    let p = alg.p;
    let lam_inv = crate::field::fp_inv(lam, p);
    let n = u.scale(lam_inv, p).add(&AlgElement::path(v).neg(p), p);
    let mut inv = AlgElement::path(v);
    let mut pow = AlgElement::path(v);
    loop {
        pow = pow.mul(&n.neg(p), alg);
        if pow.is_zero() {
            break;
        }
        inv = inv.add(&pow, p);
    }
    Some(inv.scale(lam_inv, p))
}

/// Is Z a direct sum of rotated projective-injective K objects?
pub fn is_projective_injective(alg: &PathAlgebra, z: &PeriodicComplex) -> bool {
    periodic_strip(alg, z).0.is_zero()
}

/// Invert the compression: lift each projective summand to an integer
/// degree compatible with the nonzero differential entries, and return the
/// resulting bounded complex (support starting at 1) together with the
/// shift class t such that compress(X̂[t], m) ≅ Z. Fails when the entries
/// force contradictory degrees, i.e. when the given presentation carries no
/// consistent grading.
pub fn unroll(z: &PeriodicComplex) -> Result<(Complex, usize)> {
    let m = z.m;
    if z.is_zero() {
        return Ok((Complex::zero(), 0));
    }
    // one node per projective summand of each residue term
    let mut offs = vec![0usize; m + 1];
    for r in 0..m {
        offs[r + 1] = offs[r] + z.terms[r].len();
    }
    let total = offs[m];
    // each nonzero entry of diffs[r] forces deg(dst) = deg(src) + 1
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); total];
    for r in 0..m {
        let d = &z.diffs[r];
        let r1 = (r + 1) % m;
        for row in 0..d.dst.len() {
            for col in 0..d.src.len() {
                if !d.entries[row][col].is_zero() {
                    let a = offs[r] + col;
                    let b = offs[r1] + row;
                    adj[a].push((b, 1));
                    adj[b].push((a, -1));
                }
            }
        }
    }
    let mut deg: Vec<Option<i64>> = vec![None; total];
    for s0 in 0..total {
        if deg[s0].is_some() {
            continue;
        }
        let r0 = offs.iter().position(|&o| o > s0).unwrap() - 1;
        deg[s0] = Some(r0 as i64);
        let mut stack = vec![s0];
        while let Some(a) = stack.pop() {
            let da = deg[a].unwrap();
            for &(b, delta) in &adj[a] {
                match deg[b] {
                    None => {
                        deg[b] = Some(da + delta);
                        stack.push(b);
                    }
                    Some(db) if db != da + delta => return Err(Error::UnrollFailed),
                    Some(_) => {}
                }
            }
        }
    }
    let lo = deg.iter().map(|d| d.unwrap()).min().unwrap();
    let hi = deg.iter().map(|d| d.unwrap()).max().unwrap();
    let n = (hi - lo + 1) as usize;
    // lifted summands per normalized degree, as (residue, index in term)
    let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for r in 0..m {
        for k in 0..z.terms[r].len() {
            let d = deg[offs[r] + k].unwrap();
            slots[(d - lo) as usize].push((r, k));
        }
    }
    let terms: Vec<Vec<usize>> = slots
        .iter()
        .map(|s| s.iter().map(|&(r, k)| z.terms[r][k]).collect())
        .collect();
    let diffs: Vec<PMap> = (0..n - 1)
        .map(|d| {
            let r = (d as i64 + lo).rem_euclid(m as i64) as usize;
            let mut blk = PMap::zero(terms[d].clone(), terms[d + 1].clone());
            for (ci, &(_, ka)) in slots[d].iter().enumerate() {
                for (ri, &(_, kb)) in slots[d + 1].iter().enumerate() {
                    blk.entries[ri][ci] = z.diffs[r].entries[kb][ka].clone();
                }
            }
            blk
        })
        .collect();
    let x = Complex { bottom: 1, terms, diffs };
    let t = (1 - lo).rem_euclid(m as i64) as usize;
    Ok((x.trimmed(), t))
}

/// Witness for the refolding decomposition of a short-period compression:
/// with w = min{s ≥ 1 : ms ≥ n}, the m-periodic compression of X —
/// reinterpreted with period mw — splits as ⊕_{j∈[0,w−1]} Z[mj] where Z is
/// the mw-periodic compression of X.
pub struct RefoldWitness {
    pub w: usize,
    /// the m-periodic compression, unfolded to period mw
    pub lhs: PeriodicComplex,
    /// ⊕_j (mw-periodic compression)[mj]
    pub rhs: PeriodicComplex,
    pub iso: (PeriodicChainMap, PeriodicChainMap),
}

pub fn refold_witness(alg: &PathAlgebra, x: &Complex, m: usize, seed: u64) -> Result<RefoldWitness> {
    let xt = x.trimmed();
    let n = if xt.terms.is_empty() { 1 } else { xt.top().max(1) } as usize;
    let mut w = 1usize;
    while m * w < n {
        w += 1;
    }
    let lhs = compress(x, m).unfold(w);
    let big = compress(x, m * w);
    let mut rhs: Option<PeriodicComplex> = None;
    for j in 0..w {
        let piece = big.shift((m * j) as i64, alg.p);
        rhs = Some(match rhs {
            None => piece,
            Some(acc) => acc.direct_sum(&piece),
        });
    }
    let rhs = rhs.expect("w >= 1");
    let iso = crate::decomp::are_isomorphic(alg, &lhs, &rhs, seed)
        .ok_or_else(|| {
            Error::TheoremCheck("refolded compressions are not isomorphic".into())
        })?;
    Ok(RefoldWitness { w, lhs, rhs, iso })
}

/// Bracket display "(e_1, …, e_m, e_1)": entry k is the term in degree k,
/// with the first entry repeated at the end.
pub fn bracket_string(alg: &PathAlgebra, z: &PeriodicComplex) -> String {
    let entry = |k: usize| -> String {
        let t = &z.terms[k % z.m];
        if t.is_empty() {
            "0".to_string()
        } else {
            t.iter()
                .map(|&v| alg.quiver.vertex_labels[v].clone())
                .collect::<Vec<_>>()
                .join("⊕")
        }
    };
    let mut parts: Vec<String> = (1..=z.m).map(entry).collect();
    parts.push(entry(1));
    format!("({})", parts.join(","))
}

/// Parse the bracket display (m+1 entries, last equal to first); only
/// single-vertex or empty entries, with canonical one-dimensional
/// differentials.
pub fn parse_bracket(alg: &PathAlgebra, text: &str) -> Result<PeriodicComplex> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Input("bracket literal must be parenthesized".into()))?;
    let fields: Vec<&str> = inner.split(',').map(|s| s.trim()).collect();
    if fields.len() < 3 {
        return Err(Error::Input("bracket literal needs at least period 2".into()));
    }
    if fields[0] != fields[fields.len() - 1] {
        return Err(Error::Input(
            "bracket literal must repeat its first entry at the end".into(),
        ));
    }
    let m = fields.len() - 1;
    let mut z = PeriodicComplex::zero(m);
    for (k, f) in fields[..m].iter().enumerate() {
        let r = (k + 1) % m; // entry k is degree k+1
        if *f == "0" {
            continue;
        }
        let parts: Vec<&str> = f.split('⊕').collect();
        let mut t = Vec::new();
        for lab in parts {
            let v = alg
                .quiver
                .vertex_index(lab.trim())
                .ok_or_else(|| Error::Input(format!("unknown vertex {lab}")))?;
            t.push(v);
        }
        z.terms[r] = t;
    }
    for r in 0..m {
        let mut d = PMap::zero(z.terms[r].clone(), z.terms[(r + 1) % m].clone());
        if z.terms[r].len() == 1 && z.terms[(r + 1) % m].len() == 1 {
            let basis = alg.hom_basis(z.terms[r][0], z.terms[(r + 1) % m][0]);
            match basis.len() {
                0 => {}
                1 => d.entries[0][0] = AlgElement::path(basis[0]),
                _ => {
                    return Err(Error::Input(format!(
                        "ambiguous differential at residue {r}"
                    )))
                }
            }
        }
        z.diffs[r] = d;
    }
    z.validate(alg)?;
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::complexes::{hom_dim, parse_comma_complex};

    fn cx(alg: &PathAlgebra, s: &str) -> Complex {
        parse_comma_complex(alg, s).unwrap()
    }

    #[test]
    fn compress_paper_display() {
        let alg = triangle();
        let x = cx(&alg, "0,3,2");
        let z = compress(&x, 4);
        z.validate(&alg).unwrap();
        assert_eq!(bracket_string(&alg, &z), "(0,3,2,0,0)");
        assert!(compress(&Complex::zero(), 4).is_zero());
    }

    #[test]
    fn compress_folds_long_complexes() {
        let alg = triangle();
        let x = cx(&alg, "3,2,1"); // degrees 1..3
        let z = compress(&x, 2);
        z.validate(&alg).unwrap();
        // residue 1 collects degrees 1 and 3; residue 0 collects degree 2
        assert_eq!(z.terms[1].len(), 2);
        assert_eq!(z.terms[0].len(), 1);
        for r in 0..2usize {
            let expect: usize = (1..=3i64)
                .filter(|i| i.rem_euclid(2) as usize == r)
                .map(|i| x.term(i).len())
                .sum();
            assert_eq!(z.terms[r].len(), expect);
        }
    }

    #[test]
    fn compress_map_functorial() {
        let alg = triangle();
        let x = cx(&alg, "0,0,2");
        let y = cx(&alg, "0,3,2");
        let w = cx(&alg, "0,3,0");
        for m in [2usize, 3, 4] {
            let id = ChainMap::identity(&x);
            let cid = compress_map(&id, &x, &x, m);
            assert_eq!(cid, PeriodicChainMap::identity(&compress(&x, m)));
            for f in crate::complexes::hom_space(&alg, &x, &y) {
                for g in crate::complexes::hom_space(&alg, &y, &w) {
                    let gf = g.compose(&f, &alg, &x, &y, &w);
                    let lhs = compress_map(&gf, &x, &w, m);
                    let rhs = compress_map(&g, &y, &w, m)
                        .compose(&compress_map(&f, &x, &y, m), &alg);
                    assert_eq!(lhs, rhs);
                    lhs.validate(&alg, &compress(&x, m), &compress(&w, m)).unwrap();
                }
            }
        }
    }

    #[test]
    fn shift_identities() {
        let alg = triangle();
        let z = compress(&cx(&alg, "3,2,1"), 4);
        assert_eq!(z.shift(0, alg.p), z);
        assert_eq!(z.shift(4, alg.p), z); // even period: no sign change
        assert_eq!(z.shift(1, alg.p).shift(-1, alg.p), z);
    }

    #[test]
    fn compress_commutes_with_shift_up_to_structure() {
        let alg = triangle();
        let x = cx(&alg, "0,3,2");
        for m in [2usize, 4] {
            let lhs = compress(&x.shift(1, alg.p), m);
            let rhs = compress(&x, m).shift(1, alg.p);
            // same terms; differentials may differ by signs realized by a
            // diagonal iso — here supports are small enough that the
            // matrices agree exactly
            assert_eq!(lhs.terms, rhs.terms);
            lhs.validate(&alg).unwrap();
            rhs.validate(&alg).unwrap();
        }
    }

    #[test]
    fn k_complex_shape_and_compress() {
        let alg = triangle();
        let k = k_complex(&[0], 0, 4);
        k.validate(&alg).unwrap();
        assert_eq!(k.terms[0], vec![0]);
        assert_eq!(k.terms[1], vec![0]);
        assert!(k.terms[2].is_empty());
        assert!(is_projective_injective(&alg, &k));
        // compress of a bounded contractible is a rotated K
        let c = Complex::contractible(0, 1, AlgElement::path(0));
        let z = compress(&c, 4);
        assert_eq!(z, k_complex(&[0], 1, 4));
        assert!(k_complex(&[], 0, 4).is_zero());
    }

    #[test]
    fn periodic_end_of_k_is_one_dimensional() {
        let alg = triangle();
        for v in 0..3 {
            let k = k_complex(&[v], 0, 4);
            assert_eq!(periodic_hom_dim(&alg, &k, &k), alg.hom_basis(v, v).len());
        }
    }

    #[test]
    fn compressed_relation_complex_not_projective_injective() {
        let alg = triangle();
        let z = compress(&cx(&alg, "3,2,1"), 4);
        assert!(!is_projective_injective(&alg, &z));
    }

    #[test]
    fn precovering_identity_stalk() {
        let alg = triangle();
        for m in [2usize, 3, 4] {
            for v in 0..3 {
                let x = Complex::stalk(v, 1);
                let z = compress(&x, m);
                let lhs = periodic_hom_dim(&alg, &z, &z);
                let mut rhs = 0;
                for j in -4i64..=4 {
                    rhs += hom_dim(&alg, &x, &x.shift(m as i64 * j, alg.p));
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn precovering_identity_longer_complexes() {
        let alg = triangle();
        let xs = ["3,2,1", "0,3,2", "0,2,1", "0,0,2", "2,1,0"];
        for m in [2usize, 3] {
            for sx in xs {
                for sy in xs {
                    let x = cx(&alg, sx);
                    let y = cx(&alg, sy);
                    let lhs =
                        periodic_hom_dim(&alg, &compress(&x, m), &compress(&y, m));
                    let mut rhs = 0;
                    for j in -6i64..=6 {
                        rhs += hom_dim(&alg, &x, &y.shift(m as i64 * j, alg.p));
                    }
                    assert_eq!(lhs, rhs, "m={m} X={sx} Y={sy}");
                }
            }
        }
    }

    #[test]
    fn full_faithfulness_when_period_covers_window() {
        let alg = triangle();
        let xs = ["3,2,1", "0,3,2", "0,0,1"];
        for sx in xs {
            for sy in xs {
                let x = cx(&alg, sx);
                let y = cx(&alg, sy);
                for m in [3usize, 4, 5] {
                    assert_eq!(
                        periodic_hom_dim(&alg, &compress(&x, m), &compress(&y, m)),
                        hom_dim(&alg, &x, &y),
                        "m={m} X={sx} Y={sy}"
                    );
                }
            }
        }
    }

    #[test]
    fn unroll_round_trip_shapes() {
        let alg = triangle();
        for s in ["0,3,2", "3,2,1", "0,0,2"] {
            let x = cx(&alg, s);
            let z = compress(&x, 4);
            let (xh, t) = unroll(&z).unwrap();
            xh.validate(&alg).unwrap();
            // the recompression has the same terms up to rotation
            let back = compress(&xh.shift(t as i64, alg.p), 4);
            assert_eq!(back.terms, z.terms, "unroll of {s}");
            assert_eq!(
                periodic_hom_dim(&alg, &back, &z) > 0,
                true
            );
        }
        // K objects unroll to contractibles
        let k = k_complex(&[1], 2, 4);
        let (xh, _) = unroll(&k).unwrap();
        assert_eq!(xh.total_summands(), 2);
        assert_eq!(xh.length(), 1);
    }

    #[test]
    fn unroll_rejects_fully_cyclic() {
        let alg = crate::algebra::parse_algebra(
            r#"
            [quiver]
            vertices = ["1"]
            arrows = [{name="l", from="1", to="1"}]
            relations = [["l", "l"]]
            "#,
        )
        .unwrap();
        // 2-periodic complex P1 -l-> P1 -l-> P1 cyclically: no zero diff
        let l = alg.arrow_path("l");
        let mut d0 = PMap::zero(vec![0], vec![0]);
        d0.entries[0][0] = AlgElement::path(l);
        let z = PeriodicComplex { m: 2, terms: vec![vec![0], vec![0]], diffs: vec![d0.clone(), d0] };
        z.validate(&alg).unwrap();
        assert!(matches!(unroll(&z), Err(Error::UnrollFailed)));
    }

    #[test]
    fn bracket_parse_round_trip() {
        let alg = triangle();
        let z = parse_bracket(&alg, "(0,3,2,0,0)").unwrap();
        assert_eq!(bracket_string(&alg, &z), "(0,3,2,0,0)");
        assert_eq!(z, compress(&cx(&alg, "0,3,2"), 4));
    }

    #[test]
    fn refold_witness_trivial_when_period_covers() {
        let alg = triangle();
        let x = cx(&alg, "3,2,1");
        let wit = refold_witness(&alg, &x, 3, 1).unwrap();
        assert_eq!(wit.w, 1);
        assert_eq!(wit.lhs, compress(&x, 3));
        assert_eq!(wit.rhs, compress(&x, 3));
    }

    #[test]
    fn refold_witness_splits_short_period() {
        let alg = triangle();
        let x = cx(&alg, "3,2,1");
        let wit = refold_witness(&alg, &x, 2, 1).unwrap();
        assert_eq!(wit.w, 2);
        assert_eq!(wit.lhs.m, 4);
        assert_eq!(wit.lhs.total_summands(), 6);
        // the two sides match degreewise by construction of the iso
        let dec = crate::decomp::decompose(&alg, &wit.lhs, 17).unwrap();
        assert_eq!(dec.summands.len(), 2);
        let big = compress(&x, 4);
        for (s, _, _) in &dec.summands {
            let hit = (0..2).any(|j| {
                crate::decomp::are_isomorphic(&alg, s, &big.shift(2 * j, alg.p), 23).is_some()
            });
            assert!(hit, "summand is a rotation of the period-4 compression");
        }
    }

    #[test]
    fn unfold_preserves_validity() {
        let alg = triangle();
        let z = compress(&cx(&alg, "3,2,1"), 2);
        let u = z.unfold(2);
        assert_eq!(u.m, 4);
        u.validate(&alg).unwrap();
        assert_eq!(u.terms[0], z.terms[0]);
        assert_eq!(u.terms[2], z.terms[0]);
    }
}
