//! Sectional paths in an Auslander-Reiten quiver: enumeration, composition
//! of irreducible arrow representatives, membership in radical powers of the
//! category, and placement constraints for projective-injective vertices
//! along a path.

use crate::algebra::PathAlgebra;
use crate::artheory::{radical_maps, ARQuiver};
use crate::decomp::KsObject;
use crate::error::{Error, Result};
use crate::field::FMatrix;

/// A path X_0 -> X_1 -> ... -> X_r in an AR quiver together with, for each
/// step, a basis of irreducible representatives of the arrow space
/// rad(X_i, X_{i+1}) / rad^2(X_i, X_{i+1}).  For arrows of multiplicity one
/// the representative is unique up to a nonzero scalar; for higher
/// multiplicity every basis element is carried so that composites can be
/// examined for each choice.
#[derive(Debug, Clone)]
pub struct SectionalPath<T: KsObject> {
    /// vertex indices into the quiver, length r + 1
    pub vertices: Vec<usize>,
    /// reps[i] is a basis of arrow representatives X_i -> X_{i+1}, length r
    pub reps: Vec<Vec<T::Map>>,
}

impl<T: KsObject> SectionalPath<T> {
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Basis of the arrow space rad(X,Y)/rad^2(X,Y) as actual maps X -> Y: a
/// subset of a radical basis whose classes span the quotient, computed
/// against the given vertex universe (rad^2 runs through every universe
/// vertex).  Empty when there is no arrow X -> Y.
pub fn arrow_representatives<T: KsObject>(
    alg: &PathAlgebra,
    vertices: &[T],
    x: usize,
    y: usize,
    seed: u64,
) -> Result<Vec<T::Map>> {
    let p = alg.p;
    let rad_xy = radical_maps(alg, &vertices[x], &vertices[y], seed)?;
    if rad_xy.is_empty() {
        return Ok(Vec::new());
    }
    let coords = |f: &T::Map| T::map_coords(alg, &vertices[x], &vertices[y], f);
    // rows spanning rad^2(X,Y): composites through every universe vertex
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for k in 0..vertices.len() {
        let rad_xk = radical_maps(alg, &vertices[x], &vertices[k], seed)?;
        if rad_xk.is_empty() {
            continue;
        }
        let rad_ky = radical_maps(alg, &vertices[k], &vertices[y], seed)?;
        for f in &rad_xk {
            for g in &rad_ky {
                let comp = T::compose_map(alg, g, f, &vertices[x], &vertices[k], &vertices[y]);
                rows.push(coords(&comp));
            }
        }
    }
    let mut rank = if rows.is_empty() {
        0
    } else {
        FMatrix::from_rows(rows.clone(), p).rank()
    };
    // greedily keep radical maps whose classes are independent mod rad^2
    let mut reps = Vec::new();
    for f in rad_xy {
        rows.push(coords(&f));
        let r = FMatrix::from_rows(rows.clone(), p).rank();
        if r > rank {
            rank = r;
            reps.push(f);
        } else {
            rows.pop();
        }
    }
    Ok(reps)
}

/// All sectional paths of length 1..=max_len in the quiver.  A path is
/// sectional when for every interior position, tau^{-1} X_i is not
/// isomorphic to X_{i+2}; when X_i is the start of no mesh (so tau^{-1} is
/// undefined, e.g. at a projective-injective vertex) the condition holds
/// vacuously.  Vertices in an AR quiver are pairwise non-isomorphic, so the
/// comparison is by index.
pub fn enumerate_sectional_paths<T: KsObject>(
    alg: &PathAlgebra,
    arq: &ARQuiver<T>,
    max_len: usize,
    seed: u64,
) -> Result<Vec<SectionalPath<T>>> {
    let n = arq.vertices.len();
    // tau_inv[v] = end of the mesh starting at v, when one exists
    let mut tau_inv = vec![None; n];
    for &(end, start) in &arq.tau_pairs {
        tau_inv[start] = Some(end);
    }
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(s, t, _) in &arq.arrows {
        succ[s].push(t);
    }
    let mut rep_cache: std::collections::HashMap<(usize, usize), Vec<T::Map>> =
        std::collections::HashMap::new();
    for &(s, t, _) in &arq.arrows {
        let reps = arrow_representatives(alg, &arq.vertices, s, t, seed)?;
        if reps.is_empty() {
            return Err(Error::TheoremCheck(format!(
                "quiver arrow {s} -> {t} has no irreducible representative"
            )));
        }
        rep_cache.insert((s, t), reps);
    }
    let mut out = Vec::new();
    // depth-first extension; the sectionality condition only constrains the
    // last three vertices, so every prefix of a collected path is sectional
    let mut stack: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        if path.len() > 1 {
            let reps = path
                .windows(2)
                .map(|w| rep_cache[&(w[0], w[1])].clone())
                .collect();
            out.push(SectionalPath {
                vertices: path.clone(),
                reps,
            });
        }
        if path.len() == max_len + 1 {
            continue;
        }
        for &next in &succ[last] {
            if path.len() >= 2 {
                let prev = path[path.len() - 2];
                if tau_inv[prev] == Some(next) {
                    continue;
                }
            }
            let mut ext = path.clone();
            ext.push(next);
            stack.push(ext);
        }
    }
    Ok(out)
}

/// Composites f_r ∘ ... ∘ f_1 along the path, one per choice of arrow
/// representative at each step, with a flag marking the zero map.
pub fn compose_along<T: KsObject>(
    alg: &PathAlgebra,
    arq: &ARQuiver<T>,
    path: &SectionalPath<T>,
) -> Vec<(T::Map, bool)> {
    let vs = &path.vertices;
    let x0 = &arq.vertices[vs[0]];
    let xr = &arq.vertices[*vs.last().unwrap()];
    let mut partials: Vec<T::Map> = vec![T::identity_map(x0)];
    for (i, step) in path.reps.iter().enumerate() {
        let mut next = Vec::new();
        for g in partials {
            for f in step {
                next.push(T::compose_map(
                    alg,
                    f,
                    &g,
                    x0,
                    &arq.vertices[vs[i]],
                    &arq.vertices[vs[i + 1]],
                ));
            }
        }
        partials = next;
    }
    partials
        .into_iter()
        .map(|f| {
            let zero = T::map_coords(alg, x0, xr, &f).iter().all(|&c| c == 0);
            (f, zero)
        })
        .collect()
}

/// Does f: X -> Y lie in rad^k of the category, computed against the vertex
/// universe?  rad^k is spanned by k-fold composites of radical maps through
/// universe vertices; each power is reduced to a coordinate-independent
/// basis before the next composition round.
pub fn radical_power_membership<T: KsObject>(
    alg: &PathAlgebra,
    universe: &[T],
    x: usize,
    y: usize,
    f: &T::Map,
    k: usize,
    seed: u64,
) -> Result<bool> {
    let p = alg.p;
    let n = universe.len();
    let coords =
        |a: usize, b: usize, g: &T::Map| T::map_coords(alg, &universe[a], &universe[b], g);
    if k == 0 {
        return Ok(true);
    }
    // reduce a list of maps a -> b to a linearly independent subset
    let reduce = |a: usize, b: usize, maps: Vec<T::Map>| -> Vec<T::Map> {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rank = 0;
        let mut basis = Vec::new();
        for g in maps {
            rows.push(coords(a, b, &g));
            let r = FMatrix::from_rows(rows.clone(), p).rank();
            if r > rank {
                rank = r;
                basis.push(g);
            } else {
                rows.pop();
            }
        }
        basis
    };
    let mut rad1: Vec<Vec<Vec<T::Map>>> = Vec::with_capacity(n);
    for a in 0..n {
        let mut row = Vec::with_capacity(n);
        for b in 0..n {
            let maps = radical_maps(alg, &universe[a], &universe[b], seed)?;
            row.push(reduce(a, b, maps));
        }
        rad1.push(row);
    }
    let mut power = rad1.clone();
    for _ in 1..k {
        let mut next: Vec<Vec<Vec<T::Map>>> = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for c in 0..n {
                let mut maps = Vec::new();
                for b in 0..n {
                    for g in &power[a][b] {
                        for h in &rad1[b][c] {
                            maps.push(T::compose_map(
                                alg,
                                h,
                                g,
                                &universe[a],
                                &universe[b],
                                &universe[c],
                            ));
                        }
                    }
                }
                next[a][c] = reduce(a, c, maps);
            }
        }
        power = next;
    }
    let mut rows: Vec<Vec<u64>> = power[x][y].iter().map(|g| coords(x, y, g)).collect();
    let rank = if rows.is_empty() {
        0
    } else {
        FMatrix::from_rows(rows.clone(), p).rank()
    };
    rows.push(coords(x, y, f));
    Ok(FMatrix::from_rows(rows, p).rank() == rank)
}

/// Where the projective-injective vertices sit along a path X_0..X_r whose
/// composite is nonzero.  A nonzero composite forbids projective-injectives
/// strictly inside the path, and the admissible placements are: none after
/// the start, none before the end, or exactly the two endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiPlacement {
    /// no projective-injective anywhere on the path
    None,
    /// the start is the only projective-injective
    StartOnly,
    /// the end is the only projective-injective
    EndOnly,
    /// both endpoints are projective-injective, the interior is clean
    EndsOnly,
    /// a projective-injective at this interior position: impossible on a
    /// path with nonzero composite
    InteriorViolation(usize),
}

pub fn classify_pi_positions(pi_flags: &[bool], path: &[usize]) -> PiPlacement {
    let r = path.len() - 1;
    for (pos, &v) in path.iter().enumerate().take(r).skip(1) {
        if pi_flags[v] {
            return PiPlacement::InteriorViolation(pos);
        }
    }
    match (pi_flags[path[0]], pi_flags[path[r]] && r > 0) {
        (true, true) => PiPlacement::EndsOnly,
        (true, false) => PiPlacement::StartOnly,
        (false, true) => PiPlacement::EndOnly,
        (false, false) => PiPlacement::None,
    }
}
