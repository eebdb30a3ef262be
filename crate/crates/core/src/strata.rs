//! The recursion computing virtual Poincaré polynomials from user-supplied
//! compactifications and stratifications.
//!
//! A nonsingular stratum is given by a nonsingular compactification `X̄`
//! together with `X̄ \ X`, and contributes `β(X̄) - β(X̄ \ X)`, where the
//! boundary term is itself computed recursively. A singular variety is the
//! sum of its strata. The engine never picks compactifications or
//! stratifications; it evaluates what it is given and checks consistency.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::polynomial::{Degree, IntPolynomial, PolyError};
use crate::scissor::{degree_law, DegreeDiagnostic};
use crate::simplicial::{
    betti_mod2, euler_compact_supports_combinatorial, poincare_polynomial, PairSpace,
    SimplicialComplex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("stratum {stratum:?}: boundary of the compactification is nonempty and has no stratification or compactness assertion")]
    MissingBoundaryData { stratum: String },
    #[error("stratum {stratum:?}: {diagnostic} (beta = {beta}, declared dimension {dim})")]
    DimensionMismatch {
        stratum: String,
        dim: usize,
        beta: IntPolynomial,
        diagnostic: DegreeDiagnostic,
    },
    #[error("stratum {stratum:?}: boundary stratification has beta(-1) = {from_strata} but the boundary subcomplex has Euler characteristic {from_model}")]
    BoundaryEulerMismatch {
        stratum: String,
        from_strata: i64,
        from_model: i64,
    },
    #[error("stratification {spec:?} lists stratum {name:?} twice")]
    DuplicateStratum { spec: String, name: String },
    #[error("stratification {spec:?} references unknown stratum {name:?}")]
    UnknownStratum { spec: String, name: String },
    #[error("frontier of {stratum:?} contains {frontier:?}, which is not of smaller dimension")]
    FrontierNotLower { stratum: String, frontier: String },
    #[error("refinement mapping is not a partition: {0}")]
    NotAPartition(String),
    #[error("no beta given for the intersection of {0:?}")]
    MissingIntersection(Vec<String>),
    #[error("too many pieces for inclusion-exclusion ({0}, limit 20)")]
    TooManyPieces(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// How the boundary `X̄ \ X` of an open model gets its polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryData {
    Missing,
    /// The boundary subcomplex is asserted compact nonsingular; its Poincaré
    /// polynomial is used directly.
    CompactNonsingular,
    Stratified(Box<StratifiedSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratumModel {
    /// Asserted compact nonsingular.
    Compact(SimplicialComplex),
    /// `pair.total` is asserted to be a nonsingular compactification of the
    /// stratum, with `pair.boundary` modelling `X̄ \ X`.
    Open { pair: PairSpace, boundary: BoundaryData },
    Declared(IntPolynomial),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumRecord {
    pub name: String,
    pub dim: usize,
    pub model: StratumModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StratifiedSpec {
    pub name: String,
    pub strata: Vec<StratumRecord>,
    /// Stratum name -> strata whose union is its frontier.
    pub frontier: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineOptions {
    /// Turn dimension-law violations into errors instead of warnings.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumReport {
    pub name: String,
    pub dim: usize,
    pub beta: IntPolynomial,
    /// Connected components of the modelled space, when a model is present.
    pub components: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedReport {
    pub beta: IntPolynomial,
    pub strata: Vec<StratumReport>,
    /// Dimension-law violations downgraded to warnings (non-strict mode).
    pub warnings: Vec<StrataError>,
}

fn check_degree(
    stratum: &str,
    dim: usize,
    beta: &IntPolynomial,
    opts: EngineOptions,
    warnings: &mut Vec<StrataError>,
) -> Result<(), StrataError> {
    if let Some(diagnostic) = degree_law(beta, dim).diagnostic {
        let err = StrataError::DimensionMismatch {
            stratum: stratum.to_string(),
            dim,
            beta: beta.clone(),
            diagnostic,
        };
        if opts.strict {
            return Err(err);
        }
        warnings.push(err);
    }
    Ok(())
}

/// `β` of one stratum, with any warnings raised while computing it.
pub fn beta_of_stratum(
    s: &StratumRecord,
    opts: EngineOptions,
) -> Result<(StratumReport, Vec<StrataError>), StrataError> {
    let mut warnings = Vec::new();
    let (beta, components) = match &s.model {
        StratumModel::Compact(k) => (poincare_polynomial(k)?, Some(betti_mod2(k).get(0))),
        StratumModel::Declared(p) => (p.clone(), None),
        StratumModel::Open { pair, boundary } => {
            let closure = poincare_polynomial(&pair.total)?;
            let boundary_beta = if pair.boundary.is_empty() {
                IntPolynomial::zero()
            } else {
                match boundary {
                    BoundaryData::Missing => {
                        return Err(StrataError::MissingBoundaryData {
                            stratum: s.name.clone(),
                        })
                    }
                    BoundaryData::CompactNonsingular => {
                        poincare_polynomial(&pair.boundary_complex())?
                    }
                    BoundaryData::Stratified(spec) => {
                        let inner = beta_of_stratified(spec, opts)?;
                        warnings.extend(inner.warnings);
                        let from_model = pair.boundary_complex().euler_characteristic();
                        let from_strata = inner.beta.eval(-1)?;
                        if from_model != from_strata {
                            return Err(StrataError::BoundaryEulerMismatch {
                                stratum: s.name.clone(),
                                from_strata,
                                from_model,
                            });
                        }
                        inner.beta
                    }
                }
            };
            (closure.checked_sub(&boundary_beta)?, Some(pair.open_components()))
        }
    };
    check_degree(&s.name, s.dim, &beta, opts, &mut warnings)?;
    Ok((
        StratumReport {
            name: s.name.clone(),
            dim: s.dim,
            beta,
            components,
        },
        warnings,
    ))
}

impl StratifiedSpec {
    /// Unique names, known frontier references, frontiers of lower dimension.
    pub fn validate(&self) -> Result<(), StrataError> {
        let mut dims = BTreeMap::new();
        for s in &self.strata {
            if dims.insert(s.name.as_str(), s.dim).is_some() {
                return Err(StrataError::DuplicateStratum {
                    spec: self.name.clone(),
                    name: s.name.clone(),
                });
            }
        }
        let unknown = |name: &str| StrataError::UnknownStratum {
            spec: self.name.clone(),
            name: name.to_string(),
        };
        for (stratum, frontier) in &self.frontier {
            let dim = *dims.get(stratum.as_str()).ok_or_else(|| unknown(stratum))?;
            for f in frontier {
                let fdim = *dims.get(f.as_str()).ok_or_else(|| unknown(f))?;
                if fdim >= dim {
                    return Err(StrataError::FrontierNotLower {
                        stratum: stratum.clone(),
                        frontier: f.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.strata.iter().map(|s| s.dim).max()
    }
}

/// Sum of `β` over all strata, checked against the degree law.
pub fn beta_of_stratified(
    x: &StratifiedSpec,
    opts: EngineOptions,
) -> Result<StratifiedReport, StrataError> {
    x.validate()?;
    let mut warnings = Vec::new();
    let mut strata = Vec::with_capacity(x.strata.len());
    let mut beta = IntPolynomial::zero();
    for s in &x.strata {
        let (report, w) = beta_of_stratum(s, opts)?;
        warnings.extend(w);
        beta = beta.checked_add(&report.beta)?;
        strata.push(report);
    }
    if let Some(dim) = x.max_dim() {
        check_degree(&x.name, dim, &beta, opts, &mut warnings)?;
    }
    Ok(StratifiedReport {
        beta,
        strata,
        warnings,
    })
}

/// `χ_c` by counting simplices stratum by stratum, without touching any
/// homology. Declared strata contribute `β(-1)` and are reported in the
/// second component.
pub fn chi_c_of_stratified(x: &StratifiedSpec) -> Result<(i64, Vec<String>), StrataError> {
    let mut total = 0i64;
    let mut declared = Vec::new();
    for s in &x.strata {
        total += match &s.model {
            StratumModel::Compact(k) => k.euler_characteristic(),
            StratumModel::Open { pair, .. } => euler_compact_supports_combinatorial(pair),
            StratumModel::Declared(p) => {
                declared.push(s.name.clone());
                p.eval(-1)?
            }
        };
    }
    Ok((total, declared))
}

/// `Σ_{∅≠S} (-1)^{|S|+1} β(∩_{i∈S} X_i)`.
///
/// `intersections` is keyed by sorted index lists of size at least two;
/// singletons come from `pieces`. Every subset must be present (an empty
/// intersection is entered as the zero polynomial).
pub fn inclusion_exclusion(
    pieces: &[(String, IntPolynomial)],
    intersections: &BTreeMap<Vec<usize>, IntPolynomial>,
) -> Result<IntPolynomial, StrataError> {
    let m = pieces.len();
    if m > 20 {
        return Err(StrataError::TooManyPieces(m));
    }
    let mut total = IntPolynomial::zero();
    for mask in 1u32..(1u32 << m) {
        let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let beta = if subset.len() == 1 {
            &pieces[subset[0]].1
        } else {
            intersections.get(&subset).ok_or_else(|| {
                StrataError::MissingIntersection(
                    subset.iter().map(|&i| pieces[i].0.clone()).collect(),
                )
            })?
        };
        total = if subset.len() % 2 == 1 {
            total.checked_add(beta)?
        } else {
            total.checked_sub(beta)?
        };
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementLine {
    pub coarse: String,
    pub coarse_beta: IntPolynomial,
    pub fine_sum: IntPolynomial,
}

impl RefinementLine {
    pub fn holds(&self) -> bool {
        self.coarse_beta == self.fine_sum
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementVerdict {
    pub lines: Vec<RefinementLine>,
    pub coarse_total: IntPolynomial,
    pub fine_total: IntPolynomial,
}

impl RefinementVerdict {
    pub fn holds(&self) -> bool {
        self.lines.iter().all(RefinementLine::holds) && self.coarse_total == self.fine_total
    }

    /// First coarse stratum whose refinement disagrees.
    pub fn failing_stratum(&self) -> Option<&str> {
        self.lines
            .iter()
            .find(|l| !l.holds())
            .map(|l| l.coarse.as_str())
    }
}

/// Checks that every coarse stratum's `β` equals the sum over the fine
/// strata mapped to it.
pub fn refinement_check(
    coarse: &StratifiedSpec,
    fine: &StratifiedSpec,
    mapping: &BTreeMap<String, Vec<String>>,
    opts: EngineOptions,
) -> Result<RefinementVerdict, StrataError> {
    let coarse_names: BTreeSet<&str> = coarse.strata.iter().map(|s| s.name.as_str()).collect();
    let fine_names: BTreeSet<&str> = fine.strata.iter().map(|s| s.name.as_str()).collect();
    let mut used: BTreeMap<&str, &str> = BTreeMap::new();
    for (c, fs) in mapping {
        if !coarse_names.contains(c.as_str()) {
            return Err(StrataError::NotAPartition(format!("unknown coarse stratum {c:?}")));
        }
        for f in fs {
            if !fine_names.contains(f.as_str()) {
                return Err(StrataError::NotAPartition(format!("unknown fine stratum {f:?}")));
            }
            if let Some(prev) = used.insert(f, c) {
                return Err(StrataError::NotAPartition(format!(
                    "fine stratum {f:?} assigned to both {prev:?} and {c:?}"
                )));
            }
        }
    }
    if let Some(c) = coarse_names.iter().find(|c| !mapping.contains_key(**c)) {
        return Err(StrataError::NotAPartition(format!("coarse stratum {c:?} has no image")));
    }
    if let Some(f) = fine_names.iter().find(|f| !used.contains_key(**f)) {
        return Err(StrataError::NotAPartition(format!("fine stratum {f:?} is not assigned")));
    }

    let coarse_report = beta_of_stratified(coarse, opts)?;
    let fine_report = beta_of_stratified(fine, opts)?;
    let fine_beta: BTreeMap<&str, &IntPolynomial> = fine_report
        .strata
        .iter()
        .map(|r| (r.name.as_str(), &r.beta))
        .collect();
    let mut lines = Vec::new();
    for r in &coarse_report.strata {
        let mut fine_sum = IntPolynomial::zero();
        for f in &mapping[&r.name] {
            fine_sum = fine_sum.checked_add(fine_beta[f.as_str()])?;
        }
        lines.push(RefinementLine {
            coarse: r.name.clone(),
            coarse_beta: r.beta.clone(),
            fine_sum,
        });
    }
    Ok(RefinementVerdict {
        lines,
        coarse_total: coarse_report.beta,
        fine_total: fine_report.beta,
    })
}

/// Whether `beta` satisfies the degree law for a nonempty variety of
/// dimension `dim` (used by callers that hold a bare polynomial).
pub fn has_degree(beta: &IntPolynomial, dim: usize) -> bool {
    beta.degree() == Degree::Finite(dim) && beta.leading_coeff() > 0
}
