//! Finite abstract simplicial complexes and their mod-2 (co)homology.
//!
//! Simplices are sorted tuples of vertex indices, where the index is the
//! vertex's position in the complex's ordered vertex list. Each dimension
//! keeps its simplices in lexicographic order, so boundary matrices are
//! reproducible. Orientation never appears: over GF(2) all signs vanish.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::gf2::{BitVec, Gf2Matrix, Gf2Subspace};
use crate::polynomial::{IntPolynomial, PolyError};

/// Largest number of simplices a complex may have.
pub const MAX_SIMPLICES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("simplex {simplex:?} is present but its face {missing:?} is not")]
    NotFaceClosed {
        simplex: Vec<String>,
        missing: Vec<String>,
    },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex {0:?} is listed twice")]
    DuplicateVertex(String),
    #[error("simplex {0:?} repeats a vertex or is empty")]
    DegenerateSimplex(Vec<String>),
    #[error("complex has {count} simplices, more than the limit of {limit}")]
    TooLarge { count: usize, limit: usize },
    #[error("simplex {0:?} does not belong to the parent complex")]
    NotInParent(Vec<String>),
    #[error("subcomplex was built for a different parent complex")]
    ParentMismatch,
    #[error("vertex map is not simplicial: image of {0:?} is not a simplex of the target")]
    NotSimplicial(Vec<String>),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A simplex as a strictly increasing list of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts the given vertices; returns `None` for an empty or degenerate list.
    pub fn new(mut vertices: Vec<usize>) -> Option<Self> {
        vertices.sort_unstable();
        let distinct = vertices.windows(2).all(|w| w[0] != w[1]);
        (distinct && !vertices.is_empty()).then_some(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces, in the order "drop vertex 0, drop vertex 1, ...".
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (0..n).filter(move |_| n > 1).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n)).map(move |mask| {
            Simplex(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }
}

/// A finite abstract simplicial complex with named, ordered vertices.
#[derive(Clone)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.by_dim == other.by_dim
    }
}

impl Eq for SimplicialComplex {}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("vertices", &self.vertices.len())
            .field("f_vector", &self.f_vector())
            .finish()
    }
}

fn vertex_lookup<S: AsRef<str>>(vertices: &[S]) -> Result<HashMap<&str, usize>, TopologyError> {
    let mut lookup = HashMap::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        if lookup.insert(v.as_ref(), i).is_some() {
            return Err(TopologyError::DuplicateVertex(v.as_ref().to_string()));
        }
    }
    Ok(lookup)
}

fn resolve_simplex<S: AsRef<str>>(
    lookup: &HashMap<&str, usize>,
    names: &[S],
) -> Result<Simplex, TopologyError> {
    let indices = names
        .iter()
        .map(|n| {
            lookup
                .get(n.as_ref())
                .copied()
                .ok_or_else(|| TopologyError::UnknownVertex(n.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Simplex::new(indices).ok_or_else(|| {
        TopologyError::DegenerateSimplex(names.iter().map(|n| n.as_ref().to_string()).collect())
    })
}

fn check_size(count: usize) -> Result<(), TopologyError> {
    if count > MAX_SIMPLICES {
        return Err(TopologyError::TooLarge {
            count,
            limit: MAX_SIMPLICES,
        });
    }
    Ok(())
}

/// Inserts the face closure of `s` into `set`, failing once the limit is crossed.
fn close_into(set: &mut HashSet<Simplex>, s: &Simplex) -> Result<(), TopologyError> {
    if s.0.len() >= 64 || (1usize << s.0.len()) > MAX_SIMPLICES + 1 {
        return Err(TopologyError::TooLarge {
            count: 1usize.checked_shl(s.0.len() as u32).unwrap_or(usize::MAX),
            limit: MAX_SIMPLICES,
        });
    }
    if set.contains(s) {
        return Ok(());
    }
    for face in s.faces() {
        set.insert(face);
    }
    check_size(set.len())
}

/// Checks the two complex invariants for an explicit list of simplices.
pub fn validate<S: AsRef<str>>(vertices: &[S], simplices: &[Vec<S>]) -> Result<(), TopologyError> {
    let lookup = vertex_lookup(vertices)?;
    check_size(simplices.len() + vertices.len())?;
    let set = simplices
        .iter()
        .map(|s| resolve_simplex(&lookup, s))
        .collect::<Result<HashSet<_>, _>>()?;
    let name = |s: &Simplex| -> Vec<String> {
        s.0.iter().map(|&i| vertices[i].as_ref().to_string()).collect()
    };
    for s in &set {
        for facet in s.facets() {
            if !set.contains(&facet) {
                return Err(TopologyError::NotFaceClosed {
                    simplex: name(s),
                    missing: name(&facet),
                });
            }
        }
    }
    Ok(())
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::from_closed_set(Vec::new(), HashSet::new())
    }

    fn from_closed_set(vertices: Vec<String>, set: HashSet<Simplex>) -> Self {
        let top = set.iter().map(|s| s.0.len()).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); top];
        for s in set {
            by_dim[s.dim()].push(s);
        }
        for layer in &mut by_dim {
            layer.sort_unstable();
        }
        let index = by_dim
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        Self {
            vertices,
            by_dim,
            index,
        }
    }

    /// Builds the face closure of `maximal`. Every listed vertex becomes a
    /// 0-simplex even if no maximal simplex mentions it.
    pub fn from_maximal<S: AsRef<str>, T: AsRef<str>>(
        vertices: &[S],
        maximal: &[Vec<T>],
    ) -> Result<Self, TopologyError> {
        let lookup = vertex_lookup(vertices)?;
        let mut set: HashSet<Simplex> = (0..vertices.len()).map(|i| Simplex(vec![i])).collect();
        check_size(set.len())?;
        for names in maximal {
            let s = resolve_simplex(&lookup, names)?;
            close_into(&mut set, &s)?;
        }
        Ok(Self::from_closed_set(
            vertices.iter().map(|v| v.as_ref().to_string()).collect(),
            set,
        ))
    }

    /// Builds a complex from a complete, face-closed list of simplices.
    pub fn from_simplices<S: AsRef<str>>(
        vertices: &[S],
        simplices: &[Vec<S>],
    ) -> Result<Self, TopologyError> {
        validate(vertices, simplices)?;
        let lookup = vertex_lookup(vertices)?;
        let mut set: HashSet<Simplex> = (0..vertices.len()).map(|i| Simplex(vec![i])).collect();
        for s in simplices {
            set.insert(resolve_simplex(&lookup, s)?);
        }
        Ok(Self::from_closed_set(
            vertices.iter().map(|v| v.as_ref().to_string()).collect(),
            set,
        ))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn num_simplices(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    pub fn names(&self, s: &Simplex) -> Vec<String> {
        s.0.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Resolves a list of vertex names to a simplex of this complex.
    pub fn find<S: AsRef<str>>(&self, names: &[S]) -> Result<Simplex, TopologyError> {
        let lookup = vertex_lookup(&self.vertices)?;
        let s = resolve_simplex(&lookup, names)?;
        if !self.contains(&s) {
            return Err(TopologyError::NotInParent(
                names.iter().map(|n| n.as_ref().to_string()).collect(),
            ));
        }
        Ok(s)
    }

    /// Simplices that are not a proper face of another simplex, by dimension
    /// and then lexicographically.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: HashSet<&Simplex> = HashSet::new();
        for layer in self.by_dim.iter().skip(1) {
            for s in layer {
                for f in s.facets() {
                    if let Some(i) = self.index_of(&f) {
                        covered.insert(&self.by_dim[f.dim()][i]);
                    }
                }
            }
        }
        self.by_dim
            .iter()
            .flatten()
            .filter(|s| !covered.contains(s))
            .cloned()
            .collect()
    }

    /// The mod-2 boundary map `C_d -> C_{d-1}`: rows are (d-1)-simplices,
    /// columns are d-simplices. Zero-width for `d == 0`.
    pub fn boundary_matrix(&self, d: usize) -> Gf2Matrix {
        if d == 0 {
            return Gf2Matrix::zeros(0, self.count(0));
        }
        let mut m = Gf2Matrix::zeros(self.count(d - 1), self.count(d));
        for (j, s) in self.simplices(d).iter().enumerate() {
            for f in s.facets() {
                m.set(self.index[d - 1][&f], j, true);
            }
        }
        m
    }

    /// The mod-2 coboundary `C^d -> C^{d+1}` built from cofaces: rows are
    /// (d+1)-simplices, columns are d-simplices.
    pub fn coboundary_matrix(&self, d: usize) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.count(d + 1), self.count(d));
        let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); self.count(d)];
        for (j, s) in self.simplices(d + 1).iter().enumerate() {
            for f in s.facets() {
                cofaces[self.index[d][&f]].push(j);
            }
        }
        for (i, cos) in cofaces.iter().enumerate() {
            for &j in cos {
                m.set(j, i, true);
            }
        }
        m
    }

    /// Alternating count of simplices.
    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, layer)| if d % 2 == 0 { layer.len() as i64 } else { -(layer.len() as i64) })
            .sum()
    }
}

/// A face-closed subset of a parent complex, stored as membership flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    members: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub fn empty(parent: &SimplicialComplex) -> Self {
        Self {
            members: parent.by_dim.iter().map(|l| vec![false; l.len()]).collect(),
        }
    }

    pub fn full(parent: &SimplicialComplex) -> Self {
        Self {
            members: parent.by_dim.iter().map(|l| vec![true; l.len()]).collect(),
        }
    }

    fn insert_closure(&mut self, parent: &SimplicialComplex, s: &Simplex) {
        for f in s.faces() {
            let i = parent.index[f.dim()][&f];
            self.members[f.dim()][i] = true;
        }
    }

    /// Face closure of the given simplices, each of which must be in `parent`.
    pub fn from_maximal<S: AsRef<str>>(
        parent: &SimplicialComplex,
        maximal: &[Vec<S>],
    ) -> Result<Self, TopologyError> {
        let mut sub = Self::empty(parent);
        for names in maximal {
            let s = parent.find(names)?;
            sub.insert_closure(parent, &s);
        }
        Ok(sub)
    }

    /// Face closure of simplices given by index.
    pub fn from_simplex_set<'a>(
        parent: &SimplicialComplex,
        simplices: impl IntoIterator<Item = &'a Simplex>,
    ) -> Result<Self, TopologyError> {
        let mut sub = Self::empty(parent);
        for s in simplices {
            if !parent.contains(s) {
                return Err(TopologyError::NotInParent(parent_names_lossy(parent, s)));
            }
            sub.insert_closure(parent, s);
        }
        Ok(sub)
    }

    /// Exactly the listed simplices; fails unless they are face-closed.
    pub fn from_simplices<S: AsRef<str>>(
        parent: &SimplicialComplex,
        simplices: &[Vec<S>],
    ) -> Result<Self, TopologyError> {
        let mut sub = Self::empty(parent);
        for names in simplices {
            let s = parent.find(names)?;
            sub.members[s.dim()][parent.index[s.dim()][&s]] = true;
        }
        sub.validate_in(parent)?;
        Ok(sub)
    }

    /// The subcomplex spanned by the simplices whose vertices all satisfy `keep`.
    pub fn induced(parent: &SimplicialComplex, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            members: parent
                .by_dim
                .iter()
                .map(|l| l.iter().map(|s| s.0.iter().all(|&v| keep(v))).collect())
                .collect(),
        }
    }

    pub fn validate_in(&self, parent: &SimplicialComplex) -> Result<(), TopologyError> {
        if self.members.len() != parent.by_dim.len()
            || self
                .members
                .iter()
                .zip(&parent.by_dim)
                .any(|(m, l)| m.len() != l.len())
        {
            return Err(TopologyError::ParentMismatch);
        }
        for (d, layer) in parent.by_dim.iter().enumerate() {
            for (i, s) in layer.iter().enumerate() {
                if !self.members[d][i] {
                    continue;
                }
                for f in s.facets() {
                    if !self.contains(parent, &f) {
                        return Err(TopologyError::NotFaceClosed {
                            simplex: parent.names(s),
                            missing: parent.names(&f),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn contains_index(&self, d: usize, i: usize) -> bool {
        self.members.get(d).and_then(|m| m.get(i)).copied().unwrap_or(false)
    }

    pub fn contains(&self, parent: &SimplicialComplex, s: &Simplex) -> bool {
        parent
            .index_of(s)
            .is_some_and(|i| self.contains_index(s.dim(), i))
    }

    /// Indices (into the parent's d-simplices) of members of dimension d.
    pub fn indices(&self, d: usize) -> Vec<usize> {
        self.members
            .get(d)
            .map(|m| m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
            .unwrap_or_default()
    }

    pub fn count(&self, d: usize) -> usize {
        self.members.get(d).map_or(0, |m| m.iter().filter(|&&b| b).count())
    }

    pub fn num_simplices(&self) -> usize {
        self.members.iter().flatten().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.num_simplices() == 0
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        self.zip_with(other, |a, b| a && b)
    }

    fn zip_with(&self, other: &Subcomplex, f: impl Fn(bool, bool) -> bool) -> Subcomplex {
        assert_eq!(self.members.len(), other.members.len(), "subcomplexes of different parents");
        Subcomplex {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
                .collect(),
        }
    }

    /// Maximal member simplices as vertex-name lists.
    pub fn maximal_names(&self, parent: &SimplicialComplex) -> Vec<Vec<String>> {
        let c = self.to_complex(parent);
        c.maximal_simplices().iter().map(|s| c.names(s)).collect()
    }

    /// The subcomplex as a standalone complex, keeping the parent's vertex order.
    pub fn to_complex(&self, parent: &SimplicialComplex) -> SimplicialComplex {
        let kept: Vec<usize> = self
            .indices(0)
            .into_iter()
            .map(|i| parent.by_dim[0][i].0[0])
            .collect();
        let renumber: HashMap<usize, usize> =
            kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let set = parent
            .by_dim
            .iter()
            .enumerate()
            .flat_map(|(d, layer)| {
                layer
                    .iter()
                    .enumerate()
                    .filter(move |&(i, _)| self.members[d][i])
                    .map(|(_, s)| Simplex(s.0.iter().map(|v| renumber[v]).collect()))
            })
            .collect();
        SimplicialComplex::from_closed_set(
            kept.iter().map(|&v| parent.vertices[v].clone()).collect(),
            set,
        )
    }
}

fn parent_names_lossy(parent: &SimplicialComplex, s: &Simplex) -> Vec<String> {
    s.0.iter()
        .map(|&i| parent.vertices.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
        .collect()
}

/// A compact complex together with a closed subcomplex; models the locally
/// compact space `|total| \ |boundary|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSpace {
    pub total: SimplicialComplex,
    pub boundary: Subcomplex,
}

impl PairSpace {
    pub fn new(total: SimplicialComplex, boundary: Subcomplex) -> Result<Self, TopologyError> {
        boundary.validate_in(&total)?;
        Ok(Self { total, boundary })
    }

    pub fn from_maximal<S: AsRef<str>>(
        total: SimplicialComplex,
        boundary: &[Vec<S>],
    ) -> Result<Self, TopologyError> {
        let boundary = Subcomplex::from_maximal(&total, boundary)?;
        Ok(Self { total, boundary })
    }

    /// The pair `(k, ∅)`.
    pub fn closed(total: SimplicialComplex) -> Self {
        let boundary = Subcomplex::empty(&total);
        Self { total, boundary }
    }

    pub fn boundary_complex(&self) -> SimplicialComplex {
        self.boundary.to_complex(&self.total)
    }

    /// Number of connected components of `|total| \ |boundary|`: open
    /// simplices outside the boundary, glued along the face relation.
    pub fn open_components(&self) -> usize {
        let k = &self.total;
        let offsets: Vec<usize> = k
            .by_dim
            .iter()
            .scan(0, |acc, l| {
                let o = *acc;
                *acc += l.len();
                Some(o)
            })
            .collect();
        let mut parent: Vec<usize> = (0..k.num_simplices()).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let outside = |d: usize, i: usize| !self.boundary.contains_index(d, i);
        for (d, layer) in k.by_dim.iter().enumerate().skip(1) {
            for (i, s) in layer.iter().enumerate() {
                if !outside(d, i) {
                    continue;
                }
                for f in s.facets() {
                    let j = k.index[d - 1][&f];
                    if outside(d - 1, j) {
                        let a = root(&mut parent, offsets[d] + i);
                        let b = root(&mut parent, offsets[d - 1] + j);
                        parent[a] = b;
                    }
                }
            }
        }
        let mut roots = BTreeSet::new();
        for (d, layer) in k.by_dim.iter().enumerate() {
            for i in 0..layer.len() {
                if outside(d, i) {
                    roots.insert(root(&mut parent, offsets[d] + i));
                }
            }
        }
        roots.len()
    }
}

/// Mod-2 Betti numbers `b_0, b_1, ...` with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BettiVector(Vec<usize>);

impl BettiVector {
    pub fn new(mut dims: Vec<usize>) -> Self {
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Self(dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn poincare(&self) -> Result<IntPolynomial, PolyError> {
        IntPolynomial::from_counts(&self.0)
    }

    pub fn add(&self, other: &BettiVector) -> BettiVector {
        let n = self.0.len().max(other.0.len());
        BettiVector::new((0..n).map(|i| self.get(i) + other.get(i)).collect())
    }

    /// Künneth product: convolution of the two sequences.
    pub fn convolve(&self, other: &BettiVector) -> BettiVector {
        if self.0.is_empty() || other.0.is_empty() {
            return BettiVector::default();
        }
        let mut out = vec![0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BettiVector::new(out)
    }
}

impl std::fmt::Display for BettiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Boundary map `C_d -> C_{d-1}` of the relative chain complex C(K)/C(L).
fn relative_boundary(k: &SimplicialComplex, l: Option<&Subcomplex>, d: usize) -> Gf2Matrix {
    let keep = |dim: usize| -> Vec<usize> {
        (0..k.count(dim))
            .filter(|&i| l.is_none_or(|l| !l.contains_index(dim, i)))
            .collect()
    };
    let cols = keep(d);
    if d == 0 {
        return Gf2Matrix::zeros(0, cols.len());
    }
    let rows = keep(d - 1);
    let mut row_of = vec![usize::MAX; k.count(d - 1)];
    for (r, &i) in rows.iter().enumerate() {
        row_of[i] = r;
    }
    let mut m = Gf2Matrix::zeros(rows.len(), cols.len());
    for (c, &j) in cols.iter().enumerate() {
        for f in k.by_dim[d][j].facets() {
            let r = row_of[k.index[d - 1][&f]];
            if r != usize::MAX {
                m.set(r, c, true);
            }
        }
    }
    m
}

fn relative_betti(k: &SimplicialComplex, l: Option<&Subcomplex>) -> BettiVector {
    let top = k.by_dim.len();
    let sizes: Vec<usize> = (0..top)
        .map(|d| k.count(d) - l.map_or(0, |l| l.count(d)))
        .collect();
    let ranks: Vec<usize> = (0..=top)
        .map(|d| if d == 0 || d >= top { 0 } else { relative_boundary(k, l, d).rank() })
        .collect();
    BettiVector::new((0..top).map(|d| sizes[d] - ranks[d] - ranks[d + 1]).collect())
}

/// `dim H_i(K; Z_2)` from the ranks of the boundary matrices.
pub fn betti_mod2(k: &SimplicialComplex) -> BettiVector {
    relative_betti(k, None)
}

/// `dim H^i(K; Z_2)` computed from coboundary matrices.
pub fn betti_cohomology(k: &SimplicialComplex) -> BettiVector {
    let top = k.by_dim.len();
    let ranks: Vec<usize> = (0..top).map(|d| k.coboundary_matrix(d).rank()).collect();
    BettiVector::new(
        (0..top)
            .map(|d| k.count(d) - ranks[d] - if d == 0 { 0 } else { ranks[d - 1] })
            .collect(),
    )
}

/// `dim H^i(total, boundary; Z_2)`, the compactly supported cohomology of
/// `|total| \ |boundary|`.
pub fn betti_compact_supports(p: &PairSpace) -> BettiVector {
    relative_betti(&p.total, Some(&p.boundary))
}

pub fn poincare_polynomial(k: &SimplicialComplex) -> Result<IntPolynomial, PolyError> {
    betti_mod2(k).poincare()
}

/// `Σ (-1)^i dim H^i_c` from the relative cohomology.
pub fn euler_compact_supports(p: &PairSpace) -> i64 {
    betti_compact_supports(p).euler()
}

/// Alternating count of the simplices outside the boundary.
pub fn euler_compact_supports_combinatorial(p: &PairSpace) -> i64 {
    (0..p.total.by_dim.len())
        .map(|d| {
            let n = (p.total.count(d) - p.boundary.count(d)) as i64;
            if d % 2 == 0 { n } else { -n }
        })
        .sum()
}

/// Disjoint union. Vertex names are kept when the two vertex sets are
/// disjoint; otherwise they are tagged `L.` / `R.`.
pub fn disjoint_union(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let left: HashSet<&String> = a.vertices.iter().collect();
    let clash = b.vertices.iter().any(|v| left.contains(v));
    let tag = |prefix: &str, v: &String| {
        if clash { format!("{prefix}{v}") } else { v.clone() }
    };
    let vertices: Vec<String> = a
        .vertices
        .iter()
        .map(|v| tag("L.", v))
        .chain(b.vertices.iter().map(|v| tag("R.", v)))
        .collect();
    let shift = a.vertices.len();
    let set = a
        .by_dim
        .iter()
        .flatten()
        .cloned()
        .chain(
            b.by_dim
                .iter()
                .flatten()
                .map(|s| Simplex(s.0.iter().map(|v| v + shift).collect())),
        )
        .collect();
    SimplicialComplex::from_closed_set(vertices, set)
}

/// Staircase triangulation of `|a| × |b|`, with vertex `(u,v)` named `"(u,v)"`
/// and product-lexicographic vertex order.
pub fn product_complex(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Result<SimplicialComplex, TopologyError> {
    if a.is_empty() || b.is_empty() {
        return Ok(SimplicialComplex::empty());
    }
    let nb = b.vertices.len();
    check_size(a.vertices.len() * nb)?;
    let vertices: Vec<String> = a
        .vertices
        .iter()
        .flat_map(|u| b.vertices.iter().map(move |v| format!("({u},{v})")))
        .collect();
    let mut set: HashSet<Simplex> = (0..vertices.len()).map(|i| Simplex(vec![i])).collect();
    let (ma, mb) = (a.maximal_simplices(), b.maximal_simplices());
    for s in &ma {
        for t in &mb {
            let (k, l) = (s.0.len() - 1, t.0.len() - 1);
            // lattice paths from (0,0) to (k,l) with unit steps
            let mut stack = vec![(vec![(0usize, 0usize)], 0usize, 0usize)];
            while let Some((path, i, j)) = stack.pop() {
                if i == k && j == l {
                    let verts = path.iter().map(|&(x, y)| s.0[x] * nb + t.0[y]).collect();
                    close_into(&mut set, &Simplex(verts))?;
                    continue;
                }
                if i < k {
                    let mut p = path.clone();
                    p.push((i + 1, j));
                    stack.push((p, i + 1, j));
                }
                if j < l {
                    let mut p = path;
                    p.push((i, j + 1));
                    stack.push((p, i, j + 1));
                }
            }
        }
    }
    Ok(SimplicialComplex::from_closed_set(vertices, set))
}

/// A vertex map between complexes that sends simplices to simplices.
#[derive(Debug, Clone)]
pub struct SimplicialMap<'a> {
    source: &'a SimplicialComplex,
    target: &'a SimplicialComplex,
    vertex_map: Vec<usize>,
}

impl<'a> SimplicialMap<'a> {
    /// `pairs` maps every source vertex name to a target vertex name.
    pub fn new<S: AsRef<str>>(
        source: &'a SimplicialComplex,
        target: &'a SimplicialComplex,
        pairs: &[(S, S)],
    ) -> Result<Self, TopologyError> {
        let mut vertex_map = vec![usize::MAX; source.vertices.len()];
        for (from, to) in pairs {
            let i = source
                .vertex_index(from.as_ref())
                .ok_or_else(|| TopologyError::UnknownVertex(from.as_ref().to_string()))?;
            let j = target
                .vertex_index(to.as_ref())
                .ok_or_else(|| TopologyError::UnknownVertex(to.as_ref().to_string()))?;
            vertex_map[i] = j;
        }
        if let Some(i) = vertex_map.iter().position(|&j| j == usize::MAX) {
            return Err(TopologyError::UnknownVertex(source.vertices[i].clone()));
        }
        let map = Self {
            source,
            target,
            vertex_map,
        };
        for s in source.by_dim.iter().flatten() {
            if !target.contains(&map.image(s)) {
                return Err(TopologyError::NotSimplicial(source.names(s)));
            }
        }
        Ok(map)
    }

    fn image(&self, s: &Simplex) -> Simplex {
        let mut v: Vec<usize> = s.0.iter().map(|&i| self.vertex_map[i]).collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// Pullback `C^q(target) -> C^q(source)`; degenerate images contribute zero.
    pub fn cochain_pullback(&self, q: usize) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.source.count(q), self.target.count(q));
        for (i, s) in self.source.simplices(q).iter().enumerate() {
            let img = self.image(s);
            if img.dim() == q {
                m.set(i, self.target.index[q][&img], true);
            }
        }
        m
    }

    /// Rank of the induced map `H^q(target) -> H^q(source)`.
    pub fn induced_rank(&self, q: usize) -> usize {
        let cocycles_t = cocycles(self.target, q);
        let coboundaries_s = coboundaries(self.source, q);
        let pulled = self.cochain_pullback(q).image_of(&cocycles_t);
        let total = pulled.sum(&coboundaries_s).expect("same ambient");
        total.dim() - coboundaries_s.dim()
    }
}

/// `Z^q = ker(δ: C^q -> C^{q+1})`.
pub fn cocycles(k: &SimplicialComplex, q: usize) -> Gf2Subspace {
    k.coboundary_matrix(q).kernel_basis()
}

/// `B^q = im(δ: C^{q-1} -> C^q)`.
pub fn coboundaries(k: &SimplicialComplex, q: usize) -> Gf2Subspace {
    if q == 0 {
        return Gf2Subspace::zero(k.count(0));
    }
    k.coboundary_matrix(q - 1).image_basis()
}

/// Whether `x` is a cocycle in degree `q`.
pub fn is_cocycle(k: &SimplicialComplex, q: usize, x: &BitVec) -> bool {
    k.coboundary_matrix(q).mul_vec(x).is_zero()
}
