//! The Mayer–Vietoris spectral sequence of a closed cover, over GF(2).
//!
//! For pieces `X_0, …, X_{m-1}` of a complex `X`, the double complex has
//! `C^{p,q} = ⊕_{i_0<…<i_p} C^q(X_{i_0} ∩ … ∩ X_{i_p})`, the vertical map is
//! the simplicial coboundary and the horizontal map sums the restrictions to
//! the next deeper intersections. Signs vanish mod 2. Pages are computed
//! from the column filtration of the total complex with
//!
//! ```text
//! Z_r^p = { x ∈ F^p : Dx ∈ F^{p+r} }
//! E_r^p = Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1})
//! ```
//!
//! where `F^p` is spanned by the columns `≥ p` and `Z_0^p = F^p`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::gf2::{quotient_dim, Gf2Matrix, Gf2Subspace};
use crate::polynomial::IntPolynomial;
use crate::simplicial::{betti_mod2, poincare_polynomial, BettiVector, SimplicialComplex, Subcomplex, TopologyError};
use crate::strata::{inclusion_exclusion, StrataError};
use crate::weights::WeightArray;

/// More pieces than this would need too many intersections.
pub const MAX_PIECES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvssError {
    #[error("the pieces do not cover the total complex; {0:?} is in no piece")]
    NotACover(Vec<String>),
    #[error("an arrangement needs at least one piece")]
    NoPieces,
    #[error("piece name {0:?} used twice")]
    DuplicatePiece(String),
    #[error("{0} pieces exceeds the limit of {MAX_PIECES}")]
    TooManyPieces(usize),
    #[error("piece {piece:?}: {source}")]
    Piece {
        piece: String,
        #[source]
        source: TopologyError,
    },
    #[error("spectral sequence gives b = {spectral} but direct homology gives {direct}")]
    ConvergenceMismatch {
        spectral: BettiVector,
        direct: BettiVector,
    },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Strata(#[from] StrataError),
}

/// A complex together with closed subcomplexes covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    total: SimplicialComplex,
    names: Vec<String>,
    pieces: Vec<Subcomplex>,
}

impl Arrangement {
    pub fn new(
        total: SimplicialComplex,
        pieces: Vec<(String, Subcomplex)>,
    ) -> Result<Self, MvssError> {
        if pieces.is_empty() {
            return Err(MvssError::NoPieces);
        }
        if pieces.len() > MAX_PIECES {
            return Err(MvssError::TooManyPieces(pieces.len()));
        }
        let mut names = Vec::with_capacity(pieces.len());
        let mut subs = Vec::with_capacity(pieces.len());
        for (name, sub) in pieces {
            sub.validate_in(&total).map_err(|source| MvssError::Piece {
                piece: name.clone(),
                source,
            })?;
            if names.contains(&name) {
                return Err(MvssError::DuplicatePiece(name));
            }
            names.push(name);
            subs.push(sub);
        }
        let union = subs
            .iter()
            .fold(Subcomplex::empty(&total), |acc, s| acc.union(s));
        for d in 0..=total.dim().unwrap_or(0) {
            if let Some(i) = (0..total.count(d)).find(|&i| !union.contains_index(d, i)) {
                return Err(MvssError::NotACover(total.names(&total.simplices(d)[i])));
            }
        }
        Ok(Arrangement {
            total,
            names,
            pieces: subs,
        })
    }

    /// Pieces given by maximal simplices (face-closed on construction).
    pub fn from_maximal<S: AsRef<str>>(
        total: SimplicialComplex,
        pieces: &[(&str, Vec<Vec<S>>)],
    ) -> Result<Self, MvssError> {
        let subs = pieces
            .iter()
            .map(|(name, simplices)| {
                Subcomplex::from_maximal(&total, simplices)
                    .map(|s| (name.to_string(), s))
                    .map_err(|source| MvssError::Piece {
                        piece: name.to_string(),
                        source,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Arrangement::new(total, subs)
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn pieces(&self) -> &[Subcomplex] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `∩_{i ∈ subset} X_i`; the whole complex for the empty subset.
    pub fn intersection(&self, subset: &[usize]) -> Subcomplex {
        subset
            .iter()
            .fold(Subcomplex::full(&self.total), |acc, &i| acc.intersection(&self.pieces[i]))
    }

    /// Index sets of size `p + 1`, in lexicographic order.
    pub fn subsets(&self, p: usize) -> Vec<Vec<usize>> {
        combinations(self.len(), p + 1)
    }

    /// `X^p`: the disjoint union of all `(p+1)`-fold intersections.
    pub fn column_betti(&self, p: usize) -> BettiVector {
        self.subsets(p)
            .iter()
            .map(|s| betti_mod2(&self.intersection(s).to_complex(&self.total)))
            .fold(BettiVector::new(Vec::new()), |acc, b| acc.add(&b))
    }

    /// `Σ_S (-1)^{|S|+1} β(X_S)` with every intersection taken as compact
    /// nonsingular, so that its Poincaré polynomial is its `β`.
    pub fn inclusion_exclusion_beta(&self) -> Result<IntPolynomial, MvssError> {
        let pieces = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let k = self.intersection(&[i]).to_complex(&self.total);
                poincare_polynomial(&k).map(|b| (n.clone(), b))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(StrataError::from)?;
        let mut inter = BTreeMap::new();
        for size in 2..=self.len() {
            for s in combinations(self.len(), size) {
                let k = self.intersection(&s).to_complex(&self.total);
                inter.insert(s, poincare_polynomial(&k).map_err(StrataError::from)?);
            }
        }
        Ok(inclusion_exclusion(&pieces, &inter)?)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// One summand `C^q(X_S)` of `C^{p,q}`.
#[derive(Debug, Clone)]
struct Block {
    subset: Vec<usize>,
    /// Indices of the q-simplices of `X_S` in the total complex.
    simplices: Vec<usize>,
}

/// The double complex, flattened into its total complex.
///
/// Coordinates of `C^n` are ordered by column `p`, then subset, then
/// simplex, so `F^p C^n` is a coordinate tail.
#[derive(Debug, Clone)]
pub struct DoubleComplex {
    m: usize,
    /// `offsets[n][p]`, `p = 0..=m`: first coordinate of column `p` in `C^n`.
    offsets: Vec<Vec<usize>>,
    /// `blocks[n][p]` for `p ≤ n`, `p < m`.
    blocks: Vec<Vec<Vec<Block>>>,
    vertical: Vec<Gf2Matrix>,
    horizontal: Vec<Gf2Matrix>,
    total_d: Vec<Gf2Matrix>,
}

impl DoubleComplex {
    pub fn build(a: &Arrangement) -> Result<Self, MvssError> {
        let m = a.len();
        let top_q = match a.total.dim() {
            Some(d) => d,
            None => {
                return Ok(DoubleComplex {
                    m,
                    offsets: Vec::new(),
                    blocks: Vec::new(),
                    vertical: Vec::new(),
                    horizontal: Vec::new(),
                    total_d: Vec::new(),
                })
            }
        };
        let top_n = top_q + m - 1;
        let columns: Vec<Vec<(Vec<usize>, Subcomplex)>> = (0..m)
            .map(|p| {
                a.subsets(p)
                    .into_iter()
                    .map(|s| {
                        let sub = a.intersection(&s);
                        (s, sub)
                    })
                    .collect()
            })
            .collect();

        let mut offsets = Vec::with_capacity(top_n + 1);
        let mut blocks = Vec::with_capacity(top_n + 1);
        for n in 0..=top_n {
            let mut offs = Vec::with_capacity(m + 1);
            let mut col_blocks = Vec::new();
            let mut at = 0;
            for p in 0..m {
                offs.push(at);
                if p > n || n - p > top_q {
                    col_blocks.push(Vec::new());
                    continue;
                }
                let q = n - p;
                let bs: Vec<Block> = columns[p]
                    .iter()
                    .map(|(s, sub)| Block {
                        subset: s.clone(),
                        simplices: sub.indices(q),
                    })
                    .collect();
                at += bs.iter().map(|b| b.simplices.len()).sum::<usize>();
                col_blocks.push(bs);
            }
            offs.push(at);
            offsets.push(offs);
            blocks.push(col_blocks);
        }

        // cofaces[q][σ] = (q+1)-simplices of the total complex having σ as a facet
        let cofaces: Vec<Vec<Vec<usize>>> = (0..=top_q)
            .map(|q| {
                let mut c = vec![Vec::new(); a.total.count(q)];
                if q < top_q {
                    for (j, t) in a.total.simplices(q + 1).iter().enumerate() {
                        for f in t.facets() {
                            c[a.total.index_of(&f).expect("face-closed")].push(j);
                        }
                    }
                }
                c
            })
            .collect();

        let mut dc = DoubleComplex {
            m,
            offsets,
            blocks,
            vertical: Vec::new(),
            horizontal: Vec::new(),
            total_d: Vec::new(),
        };
        for n in 0..=top_n {
            let rows = dc.dim(n as i64 + 1);
            let cols = dc.dim(n as i64);
            let mut v = Gf2Matrix::zeros(rows, cols);
            let mut h = Gf2Matrix::zeros(rows, cols);
            for p in 0..m.min(n + 1) {
                let q = n - p;
                let mut col = dc.offsets[n][p];
                for (bi, block) in dc.blocks[n][p].iter().enumerate() {
                    let piece = &columns[p][bi].1;
                    for &sigma in &block.simplices {
                        if q < top_q {
                            for &tau in &cofaces[q][sigma] {
                                if piece.contains_index(q + 1, tau) {
                                    v.set(dc.coord(n + 1, p, bi, tau), col, true);
                                }
                            }
                        }
                        if p + 1 < m {
                            for (bj, (t, sub)) in columns[p + 1].iter().enumerate() {
                                if is_subset(&block.subset, t) && sub.contains_index(q, sigma) {
                                    h.set(dc.coord(n + 1, p + 1, bj, sigma), col, true);
                                }
                            }
                        }
                        col += 1;
                    }
                }
            }
            let mut d = v.clone();
            for r in 0..rows {
                for c in h.row(r).ones() {
                    d.toggle(r, c);
                }
            }
            dc.vertical.push(v);
            dc.horizontal.push(h);
            dc.total_d.push(d);
        }
        dc.check_identities()?;
        Ok(dc)
    }

    fn coord(&self, n: usize, p: usize, block: usize, simplex: usize) -> usize {
        let bs = &self.blocks[n][p];
        let before: usize = bs[..block].iter().map(|b| b.simplices.len()).sum();
        let within = bs[block]
            .simplices
            .binary_search(&simplex)
            .expect("simplex lies in the deeper intersection");
        self.offsets[n][p] + before + within
    }

    /// Number of columns.
    pub fn pieces(&self) -> usize {
        self.m
    }

    /// Largest total degree carrying cochains, if any.
    pub fn top_degree(&self) -> Option<usize> {
        self.offsets.len().checked_sub(1)
    }

    /// `dim C^n` of the total complex.
    pub fn dim(&self, n: i64) -> usize {
        if n < 0 || n as usize >= self.offsets.len() {
            0
        } else {
            self.offsets[n as usize][self.m]
        }
    }

    /// `dim C^{p,q}`.
    pub fn block_dim(&self, p: usize, q: usize) -> usize {
        let n = p + q;
        if p >= self.m || n >= self.offsets.len() {
            0
        } else {
            self.offsets[n][p + 1] - self.offsets[n][p]
        }
    }

    /// Start of `F^p C^n`.
    fn filtration_offset(&self, n: i64, p: i64) -> usize {
        if n < 0 || n as usize >= self.offsets.len() {
            return 0;
        }
        let p = p.clamp(0, self.m as i64) as usize;
        self.offsets[n as usize][p]
    }

    /// The total differential `C^n -> C^{n+1}`.
    pub fn total_differential(&self, n: usize) -> &Gf2Matrix {
        &self.total_d[n]
    }

    /// Checks `δ² = 0`, `h² = 0`, `δh = hδ` and `D² = 0`.
    pub fn check_identities(&self) -> Result<(), MvssError> {
        for n in 1..self.total_d.len() {
            let named = [
                ("vertical squared", self.vertical[n].mul(&self.vertical[n - 1])),
                ("horizontal squared", self.horizontal[n].mul(&self.horizontal[n - 1])),
                ("total squared", self.total_d[n].mul(&self.total_d[n - 1])),
            ];
            for (what, prod) in named {
                if !prod.is_zero() {
                    return Err(MvssError::Inconsistent(format!("{what} is nonzero in degree {n}")));
                }
            }
            let vh = self.vertical[n].mul(&self.horizontal[n - 1]);
            let hv = self.horizontal[n].mul(&self.vertical[n - 1]);
            if vh != hv {
                return Err(MvssError::Inconsistent(format!(
                    "vertical and horizontal maps do not commute in degree {n}"
                )));
            }
        }
        Ok(())
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Subspace arithmetic for the column filtration, with memoised `Z_r^p`.
struct Filtered<'a> {
    dc: &'a DoubleComplex,
    z: HashMap<(i64, i64, i64), Gf2Subspace>,
}

impl<'a> Filtered<'a> {
    fn new(dc: &'a DoubleComplex) -> Self {
        Filtered { dc, z: HashMap::new() }
    }

    /// `Z_r^p` in `C^n`.
    fn z(&mut self, r: i64, p: i64, n: i64) -> Gf2Subspace {
        let key = (r.max(0), p, n);
        if let Some(s) = self.z.get(&key) {
            return s.clone();
        }
        let dim = self.dc.dim(n);
        let start = self.dc.filtration_offset(n, p);
        let space = if dim == 0 {
            Gf2Subspace::zero(0)
        } else if r <= 0 {
            Gf2Subspace::coordinate(dim, start..dim)
        } else {
            let d = &self.dc.total_d[n as usize];
            let end = self.dc.filtration_offset(n + 1, p + r);
            let block = d.submatrix(0..end, start..dim);
            let k = block.kernel_basis();
            Gf2Subspace::span(dim, k.basis().iter().map(|v| v.embed(dim, start)).collect())
        };
        self.z.insert(key, space.clone());
        space
    }

    /// `D(Z_r^p in C^{n-1})`, a subspace of `C^n`.
    fn boundary_of_z(&mut self, r: i64, p: i64, n: i64) -> Gf2Subspace {
        if n <= 0 {
            return Gf2Subspace::zero(self.dc.dim(n));
        }
        let z = self.z(r, p, n - 1);
        self.dc.total_d[(n - 1) as usize].image_of(&z)
    }

    /// Denominator of `E_r^{p}` in `C^n`.
    fn denominator(&mut self, r: i64, p: i64, n: i64) -> Result<Gf2Subspace, MvssError> {
        let a = self.z(r - 1, p + 1, n);
        let b = self.boundary_of_z(r - 1, p - r + 1, n);
        a.sum(&b).map_err(|e| MvssError::Inconsistent(e.to_string()))
    }

    fn page_entry(&mut self, r: i64, p: i64, q: i64) -> Result<usize, MvssError> {
        let n = p + q;
        let num = self.z(r, p, n);
        let den = self.denominator(r, p, n)?;
        quotient_dim(&num, &den).map_err(|_| {
            MvssError::Inconsistent(format!("E_{r}^{{{p},{q}}} denominator not inside numerator"))
        })
    }

    /// Rank of `d_r` leaving `(p, q)`.
    fn differential_rank(&mut self, r: i64, p: i64, q: i64) -> Result<usize, MvssError> {
        let n = p + q;
        let den = self.denominator(r, p + r, n + 1)?;
        let z = self.z(r, p, n);
        let image = self.dc.total_d[n as usize].image_of(&z);
        let sum = image
            .sum(&den)
            .map_err(|e| MvssError::Inconsistent(e.to_string()))?;
        Ok(sum.dim() - den.dim())
    }
}

/// Dimensions of one page, indexed by `(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralPage {
    pub r: usize,
    pub dims: BTreeMap<(usize, usize), usize>,
}

impl SpectralPage {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Largest `q` with an entry in the table.
    pub fn max_q(&self) -> Option<usize> {
        self.dims.keys().map(|&(_, q)| q).max()
    }

    pub fn max_p(&self) -> Option<usize> {
        self.dims.keys().map(|&(p, _)| p).max()
    }

    /// `Σ_{p,q} (-1)^{p+q} dim E^{p,q}`.
    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&(p, q), &d)| if (p + q) % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Row `q` as a list over `p`, with trailing zeros dropped.
    pub fn row(&self, q: usize) -> Vec<usize> {
        let mut row: Vec<usize> = (0..=self.max_p().unwrap_or(0)).map(|p| self.get(p, q)).collect();
        while row.len() > 1 && row.last() == Some(&0) {
            row.pop();
        }
        row
    }

    /// Table with the top row first and columns by `p`.
    pub fn render(&self) -> String {
        let Some(top) = self.max_q() else {
            return String::new();
        };
        (0..=top)
            .rev()
            .map(|q| {
                let cells: Vec<String> = self.row(q).iter().map(|d| d.to_string()).collect();
                format!("q={q}: {}", cells.join(" "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `Σ_p (-1)^p dim E^{p,q}` for each `q`.
pub fn row_alternating_sums(page: &SpectralPage) -> Vec<i64> {
    let Some(top) = page.max_q() else {
        return Vec::new();
    };
    (0..=top)
        .map(|q| {
            page.dims
                .iter()
                .filter(|(&(_, qq), _)| qq == q)
                .map(|(&(p, _), &d)| if p % 2 == 0 { d as i64 } else { -(d as i64) })
                .sum()
        })
        .collect()
}

/// Nonzero-capable differentials of one page: `(p, q) -> rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialRanks {
    pub r: usize,
    pub ranks: BTreeMap<(usize, usize), usize>,
}

impl DifferentialRanks {
    pub fn is_zero(&self) -> bool {
        self.ranks.values().all(|&r| r == 0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.ranks.iter().filter(|(_, &r)| r > 0).map(|(&k, &r)| (k, r))
    }
}

/// Why the reported page is `E_∞`: every `d_s` with `s ≥ page` was computed
/// to be zero up to `structural_bound`, past which `d_s` has no room to act.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationCertificate {
    pub page: usize,
    pub checked: Vec<usize>,
    pub structural_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSequence {
    /// `E_1, E_2, …, E_∞`.
    pub pages: Vec<SpectralPage>,
    /// `d_1, d_2, …` matching `pages`.
    pub differentials: Vec<DifferentialRanks>,
    pub certificate: StabilizationCertificate,
}

impl SpectralSequence {
    pub fn infinity(&self) -> &SpectralPage {
        self.pages.last().expect("at least one page")
    }

    /// `E_r`, repeating `E_∞` past stabilization.
    pub fn page(&self, r: usize) -> &SpectralPage {
        assert!(r >= 1, "pages start at 1");
        &self.pages[(r - 1).min(self.pages.len() - 1)]
    }
}

/// All pages up to `E_∞`, with every page checked against the previous one.
pub fn spectral_sequence(a: &Arrangement) -> Result<SpectralSequence, MvssError> {
    let dc = DoubleComplex::build(a)?;
    let m = a.len();
    let top_q = a.total.dim();
    let mut f = Filtered::new(&dc);
    let mut pages: Vec<SpectralPage> = Vec::new();
    let mut differentials: Vec<DifferentialRanks> = Vec::new();
    // d_r moves p by r, so d_r = 0 for r ≥ m and E_m = E_∞.
    let last = m.max(1);
    for r in 1..=last {
        let mut dims = BTreeMap::new();
        let mut ranks = BTreeMap::new();
        if let Some(top_q) = top_q {
            for p in 0..m {
                for q in 0..=top_q {
                    let d = f.page_entry(r as i64, p as i64, q as i64)?;
                    dims.insert((p, q), d);
                }
            }
            for p in 0..m {
                for q in 0..=top_q {
                    if p + r < m && q + 1 >= r {
                        let rank = f.differential_rank(r as i64, p as i64, q as i64)?;
                        ranks.insert((p, q), rank);
                    }
                }
            }
        }
        let page = SpectralPage { r, dims };
        if let (Some(prev), Some(prev_d)) = (pages.last(), differentials.last()) {
            check_homology_step(prev, prev_d, &page)?;
        }
        pages.push(page);
        differentials.push(DifferentialRanks { r, ranks });
    }
    // first r with d_s = 0 for all s ≥ r
    let mut inf = last;
    while inf > 1 && differentials[inf - 2].is_zero() {
        inf -= 1;
    }
    pages.truncate(inf);
    let checked = (inf..=last).collect();
    differentials.truncate(inf);
    Ok(SpectralSequence {
        pages,
        differentials,
        certificate: StabilizationCertificate {
            page: inf,
            checked,
            structural_bound: m,
        },
    })
}

/// `dim E_{r+1} = dim E_r - rank(out) - rank(in)` at every entry.
fn check_homology_step(
    prev: &SpectralPage,
    d: &DifferentialRanks,
    next: &SpectralPage,
) -> Result<(), MvssError> {
    let r = d.r;
    for (&(p, q), &dim) in &prev.dims {
        let out = d.ranks.get(&(p, q)).copied().unwrap_or(0);
        let inc = if p >= r {
            d.ranks.get(&(p - r, q + r - 1)).copied().unwrap_or(0)
        } else {
            0
        };
        let expected = dim as i64 - out as i64 - inc as i64;
        if next.get(p, q) as i64 != expected {
            return Err(MvssError::Inconsistent(format!(
                "E_{}^{{{p},{q}}} = {} but homology of E_{r} gives {expected}",
                r + 1,
                next.get(p, q)
            )));
        }
    }
    Ok(())
}

/// Pages `E_1..E_{up_to}`; pages past stabilization repeat `E_∞`.
pub fn compute_pages(a: &Arrangement, up_to: usize) -> Result<Vec<SpectralPage>, MvssError> {
    let ss = spectral_sequence(a)?;
    Ok((1..=up_to)
        .map(|r| {
            let mut page = ss.page(r).clone();
            page.r = r;
            page
        })
        .collect())
}

fn betti_from_infinity(page: &SpectralPage) -> BettiVector {
    let mut b = Vec::new();
    for (&(p, q), &d) in &page.dims {
        let i = p + q;
        if b.len() <= i {
            b.resize(i + 1, 0);
        }
        b[i] += d;
    }
    BettiVector::new(b)
}

/// `b_i = Σ_p dim E_∞^{p, i-p}`, cross-checked against direct homology.
pub fn converged_betti(a: &Arrangement) -> Result<BettiVector, MvssError> {
    let ss = spectral_sequence(a)?;
    converged_from(a, &ss)
}

fn converged_from(a: &Arrangement, ss: &SpectralSequence) -> Result<BettiVector, MvssError> {
    let spectral = betti_from_infinity(ss.infinity());
    let direct = betti_mod2(&a.total);
    if spectral != direct {
        return Err(MvssError::ConvergenceMismatch { spectral, direct });
    }
    Ok(spectral)
}

/// `w(i, j) = dim E_∞^{i-j, j}`, over degrees `0..=dim X`.
pub fn mv_filtration(a: &Arrangement) -> Result<WeightArray, MvssError> {
    let ss = spectral_sequence(a)?;
    converged_from(a, &ss)?;
    Ok(profile_from(a, ss.infinity()))
}

fn profile_from(a: &Arrangement, inf: &SpectralPage) -> WeightArray {
    let len = a.total.dim().map_or(0, |d| d + 1);
    let mut w = WeightArray::zeros(len);
    for i in 0..len {
        for j in 0..=i {
            w.set(i, j, inf.get(i - j, j));
        }
    }
    w
}

/// Everything the CLI reports about an arrangement, computed once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvReport {
    pub sequence: SpectralSequence,
    pub betti: BettiVector,
    pub profile: WeightArray,
}

pub fn mv_report(a: &Arrangement) -> Result<MvReport, MvssError> {
    let sequence = spectral_sequence(a)?;
    let betti = converged_from(a, &sequence)?;
    let profile = profile_from(a, sequence.infinity());
    Ok(MvReport {
        sequence,
        betti,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_circles_wedge() -> Arrangement {
        let k = SimplicialComplex::from_maximal(
            &["o", "a", "b", "c", "d"],
            &[
                vec!["o", "a"],
                vec!["a", "b"],
                vec!["b", "o"],
                vec!["o", "c"],
                vec!["c", "d"],
                vec!["d", "o"],
            ],
        )
        .unwrap();
        Arrangement::from_maximal(
            k,
            &[
                ("A", vec![vec!["o", "a"], vec!["a", "b"], vec!["b", "o"]]),
                ("B", vec![vec!["o", "c"], vec!["c", "d"], vec!["d", "o"]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn wedge_of_circles() {
        let a = two_circles_wedge();
        let dc = DoubleComplex::build(&a).unwrap();
        assert_eq!(dc.block_dim(1, 0), 1);
        assert_eq!(dc.block_dim(0, 0), 6);
        assert_eq!(dc.block_dim(0, 1), 6);
        let ss = spectral_sequence(&a).unwrap();
        let e1 = &ss.pages[0];
        assert_eq!(e1.row(0), vec![2, 1]);
        assert_eq!(e1.row(1), vec![2]);
        assert_eq!(converged_betti(&a).unwrap(), BettiVector::new(vec![1, 2]));
        assert_eq!(ss.certificate.page, 2);
    }

    #[test]
    fn single_piece_is_its_cochain_complex() {
        let k = SimplicialComplex::from_maximal(&["a", "b", "c"], &[vec!["a", "b", "c"]]).unwrap();
        let a = Arrangement::from_maximal(k.clone(), &[("K", vec![vec!["a", "b", "c"]])]).unwrap();
        let ss = spectral_sequence(&a).unwrap();
        assert_eq!(ss.pages.len(), 1);
        assert_eq!(ss.infinity().row(0), vec![1]);
        let w = mv_filtration(&a).unwrap();
        assert_eq!(w, WeightArray::diagonal(&[1, 0, 0]));
    }

    #[test]
    fn not_a_cover() {
        let k = SimplicialComplex::from_maximal(&["a", "b", "c"], &[vec!["a", "b"], vec!["b", "c"]]).unwrap();
        let err = Arrangement::from_maximal(k, &[("A", vec![vec!["a", "b"]])]).unwrap_err();
        assert_eq!(err, MvssError::NotACover(vec!["c".into()]));
    }

    #[test]
    fn row_sums() {
        let page = SpectralPage {
            r: 1,
            dims: BTreeMap::from([((0, 0), 3), ((1, 0), 3), ((2, 0), 4), ((0, 1), 2), ((1, 1), 3), ((0, 2), 3)]),
        };
        assert_eq!(row_alternating_sums(&page), vec![4, -1, 3]);
        assert_eq!(page.render(), "q=2: 3\nq=1: 2 3\nq=0: 3 3 4");
    }

    #[test]
    fn combinations_lex() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
    }
}
