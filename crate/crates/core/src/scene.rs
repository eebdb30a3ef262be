//! JSON scene files: named complexes, pairs, atoms, expressions,
//! stratifications, covers, arrangements and weight-system inputs.
//!
//! A file is parsed into [`SceneFile`] (plain serde data, kept verbatim for
//! round-trips) and then resolved into a [`Scene`], where every reference is
//! checked and every model is built. Subcomplexes are always stored by their
//! maximal simplices and face-closed on load.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mvss::Arrangement;
use crate::polynomial::IntPolynomial;
use crate::scissor::{evaluate_beta, evaluate_chi_c, AtomRecord, AtomRegistry, Provenance, ScissorExpr};
use crate::simplicial::{
    euler_compact_supports_combinatorial, poincare_polynomial, PairSpace, SimplicialComplex,
    Subcomplex,
};
use crate::strata::{
    beta_of_stratified, chi_c_of_stratified, inclusion_exclusion, BoundaryData, EngineOptions,
    StrataError, StratifiedSpec, StratumModel, StratumRecord,
};
use crate::weights::{LinearConstraint, WeightSystemInput};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("invalid scene JSON: {0}")]
    Json(String),
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("no {section} named {name:?}")]
    UnknownName { section: &'static str, name: String },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
    #[error("stratification {0:?} refers to itself through boundary data")]
    Cycle(String),
}

fn invalid(context: impl Into<String>, err: impl std::fmt::Display) -> SceneError {
    SceneError::Invalid {
        context: context.into(),
        message: err.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
}

impl ComplexSpec {
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        ComplexSpec {
            vertices: k.vertices().to_vec(),
            maximal_simplices: k.maximal_simplices().iter().map(|s| k.names(s)).collect(),
        }
    }

    pub fn build(&self) -> Result<SimplicialComplex, crate::simplicial::TopologyError> {
        SimplicialComplex::from_maximal(&self.vertices, &self.maximal_simplices)
    }
}

/// A complex given by name or inline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRef {
    Named(String),
    Inline(ComplexSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub total: ComplexRef,
    /// Maximal simplices of the closed subcomplex removed from `total`.
    #[serde(default)]
    pub boundary: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairRef {
    Named(String),
    Inline(PairSpec),
}

/// Exactly one of `beta`, `model`, `pair`, `stratification`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<IntPolynomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_c: Option<i64>,
    /// A compact nonsingular model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ComplexRef>,
    /// A nonsingular compactification whose boundary is compact nonsingular.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stratification: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub compact_nonsingular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub compact_nonsingular: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stratification: Option<String>,
}

/// Exactly one of `compact`, `open`, `beta`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumModelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compact: Option<ComplexRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open: Option<PairRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<IntPolynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumSpec {
    pub name: String,
    pub dim: usize,
    pub model: StratumModelSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratificationSpec {
    pub strata: Vec<StratumSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub frontier: BTreeMap<String, BTreeSet<String>>,
}

/// A piece of a cover: an atom name or a declared polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverTerm {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<IntPolynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub pieces: BTreeMap<String, CoverTerm>,
    /// Keyed by piece names joined with `&`, e.g. `"X1&X2"`.
    #[serde(default)]
    pub intersections: BTreeMap<String, CoverTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub name: String,
    pub simplices: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementSpec {
    pub total: ComplexRef,
    pub pieces: Vec<PieceSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightInputSpec {
    pub b: Vec<usize>,
    pub beta: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pairs: BTreeMap<String, PairSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub atoms: BTreeMap<String, AtomSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expressions: BTreeMap<String, ScissorExpr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub stratifications: BTreeMap<String, StratificationSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub covers: BTreeMap<String, CoverSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub arrangements: BTreeMap<String, ArrangementSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weight_inputs: BTreeMap<String, WeightInputSpec>,
}

impl Default for SceneFile {
    fn default() -> Self {
        SceneFile {
            schema_version: SCHEMA_VERSION,
            complexes: BTreeMap::new(),
            pairs: BTreeMap::new(),
            atoms: BTreeMap::new(),
            expressions: BTreeMap::new(),
            stratifications: BTreeMap::new(),
            covers: BTreeMap::new(),
            arrangements: BTreeMap::new(),
            weight_inputs: BTreeMap::new(),
        }
    }
}

impl SceneFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene data always serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub pieces: Vec<(String, CoverTerm)>,
    /// Keyed by sorted piece indices.
    pub intersections: BTreeMap<Vec<usize>, CoverTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightInput {
    pub input: WeightSystemInput,
    pub constraints: Vec<LinearConstraint>,
}

/// Sections that can answer a `β` query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaSection {
    Expression,
    Cover,
    Stratification,
    Atom,
    Arrangement,
}

impl BetaSection {
    pub const SEARCH_ORDER: [BetaSection; 5] = [
        BetaSection::Expression,
        BetaSection::Cover,
        BetaSection::Stratification,
        BetaSection::Atom,
        BetaSection::Arrangement,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BetaSection::Expression => "expression",
            BetaSection::Cover => "cover",
            BetaSection::Stratification => "stratification",
            BetaSection::Atom => "atom",
            BetaSection::Arrangement => "arrangement",
        }
    }
}

/// `β` of a named target with an independently obtained `χ_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualBetti {
    pub kind: &'static str,
    pub beta: IntPolynomial,
    /// `None` when no computation independent of `β` is available.
    pub chi_c: Option<i64>,
    pub warnings: Vec<String>,
    /// Atoms whose `β` was entered by hand.
    pub declared: Vec<String>,
}

/// A fully resolved and validated scene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    file: SceneFile,
    pub complexes: BTreeMap<String, SimplicialComplex>,
    pub pairs: BTreeMap<String, PairSpace>,
    pub atoms: AtomRegistry,
    pub expressions: BTreeMap<String, ScissorExpr>,
    pub stratifications: BTreeMap<String, StratifiedSpec>,
    pub covers: BTreeMap<String, Cover>,
    pub arrangements: BTreeMap<String, Arrangement>,
    pub weight_inputs: BTreeMap<String, WeightInput>,
    pub options: EngineOptions,
    /// Non-fatal diagnostics raised while resolving.
    pub warnings: Vec<String>,
}

fn exactly_one(context: &str, present: &[(&str, bool)]) -> Result<(), SceneError> {
    let set: Vec<&str> = present.iter().filter(|(_, p)| *p).map(|(n, _)| *n).collect();
    if set.len() == 1 {
        return Ok(());
    }
    let names: Vec<&str> = present.iter().map(|(n, _)| *n).collect();
    Err(invalid(
        context,
        format!("expected exactly one of {}, found {}", names.join(", "), set.len()),
    ))
}

struct Resolver<'a> {
    file: &'a SceneFile,
    complexes: BTreeMap<String, SimplicialComplex>,
    pairs: BTreeMap<String, PairSpace>,
    strat_done: BTreeMap<String, StratifiedSpec>,
    strat_visiting: BTreeSet<String>,
}

impl<'a> Resolver<'a> {
    fn complex(&self, r: &ComplexRef, ctx: &str) -> Result<SimplicialComplex, SceneError> {
        match r {
            ComplexRef::Named(n) => self.complexes.get(n).cloned().ok_or_else(|| {
                invalid(ctx, format!("unknown complex {n:?}"))
            }),
            ComplexRef::Inline(spec) => spec.build().map_err(|e| invalid(ctx, e)),
        }
    }

    fn pair_spec(&self, spec: &PairSpec, ctx: &str) -> Result<PairSpace, SceneError> {
        let total = self.complex(&spec.total, ctx)?;
        PairSpace::from_maximal(total, &spec.boundary).map_err(|e| invalid(ctx, e))
    }

    fn pair(&self, r: &PairRef, ctx: &str) -> Result<PairSpace, SceneError> {
        match r {
            PairRef::Named(n) => self
                .pairs
                .get(n)
                .cloned()
                .ok_or_else(|| invalid(ctx, format!("unknown pair {n:?}"))),
            PairRef::Inline(spec) => self.pair_spec(spec, ctx),
        }
    }

    fn stratification(&mut self, name: &str, ctx: &str) -> Result<StratifiedSpec, SceneError> {
        if let Some(s) = self.strat_done.get(name) {
            return Ok(s.clone());
        }
        let spec = self
            .file
            .stratifications
            .get(name)
            .ok_or_else(|| invalid(ctx, format!("unknown stratification {name:?}")))?;
        if !self.strat_visiting.insert(name.to_string()) {
            return Err(SceneError::Cycle(name.to_string()));
        }
        let mut strata = Vec::with_capacity(spec.strata.len());
        for s in &spec.strata {
            let sctx = format!("stratification {name:?}, stratum {:?}", s.name);
            let m = &s.model;
            exactly_one(
                &sctx,
                &[("compact", m.compact.is_some()), ("open", m.open.is_some()), ("beta", m.beta.is_some())],
            )?;
            if m.boundary.is_some() && m.open.is_none() {
                return Err(invalid(&sctx, "boundary data given without an open model"));
            }
            let model = if let Some(c) = &m.compact {
                StratumModel::Compact(self.complex(c, &sctx)?)
            } else if let Some(beta) = &m.beta {
                StratumModel::Declared(beta.clone())
            } else {
                let pair = self.pair(m.open.as_ref().expect("checked above"), &sctx)?;
                let boundary = match &m.boundary {
                    None => BoundaryData::Missing,
                    Some(b) => {
                        if b.compact_nonsingular && b.stratification.is_some() {
                            return Err(invalid(
                                &sctx,
                                "boundary is both asserted compact nonsingular and stratified",
                            ));
                        }
                        match &b.stratification {
                            Some(inner) => {
                                BoundaryData::Stratified(Box::new(self.stratification(inner, &sctx)?))
                            }
                            None if b.compact_nonsingular => BoundaryData::CompactNonsingular,
                            None => BoundaryData::Missing,
                        }
                    }
                };
                StratumModel::Open { pair, boundary }
            };
            strata.push(StratumRecord {
                name: s.name.clone(),
                dim: s.dim,
                model,
            });
        }
        let resolved = StratifiedSpec {
            name: name.to_string(),
            strata,
            frontier: spec.frontier.clone(),
        };
        resolved
            .validate()
            .map_err(|e| invalid(format!("stratification {name:?}"), e))?;
        self.strat_visiting.remove(name);
        self.strat_done.insert(name.to_string(), resolved.clone());
        Ok(resolved)
    }
}

impl Scene {
    pub fn from_json(src: &str, options: EngineOptions) -> Result<Scene, SceneError> {
        let file: SceneFile = serde_json::from_str(src).map_err(|e| SceneError::Json(e.to_string()))?;
        Scene::from_file(file, options)
    }

    /// Resolves every section, failing on the first dangling reference or
    /// invalid model.
    pub fn from_file(file: SceneFile, options: EngineOptions) -> Result<Scene, SceneError> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(SceneError::SchemaVersion(file.schema_version));
        }
        let mut warnings = Vec::new();
        let mut r = Resolver {
            file: &file,
            complexes: BTreeMap::new(),
            pairs: BTreeMap::new(),
            strat_done: BTreeMap::new(),
            strat_visiting: BTreeSet::new(),
        };
        for (name, spec) in &file.complexes {
            let k = spec.build().map_err(|e| invalid(format!("complex {name:?}"), e))?;
            r.complexes.insert(name.clone(), k);
        }
        for (name, spec) in &file.pairs {
            let p = r.pair_spec(spec, &format!("pair {name:?}"))?;
            r.pairs.insert(name.clone(), p);
        }
        for name in file.stratifications.keys() {
            r.stratification(name, &format!("stratification {name:?}"))?;
        }

        let mut atoms = AtomRegistry::new();
        for (name, spec) in &file.atoms {
            let ctx = format!("atom {name:?}");
            exactly_one(
                &ctx,
                &[
                    ("beta", spec.beta.is_some()),
                    ("model", spec.model.is_some()),
                    ("pair", spec.pair.is_some()),
                    ("stratification", spec.stratification.is_some()),
                ],
            )?;
            if spec.chi_c.is_some() && spec.beta.is_none() {
                return Err(invalid(&ctx, "chi_c may only accompany a declared beta"));
            }
            let record = if let Some(beta) = &spec.beta {
                let mut rec = AtomRecord::declared(beta.clone(), spec.compact_nonsingular)
                    .map_err(|e| invalid(&ctx, e))?;
                if let Some(c) = spec.chi_c {
                    rec.chi_c = c;
                }
                rec
            } else if let Some(m) = &spec.model {
                let k = r.complex(m, &ctx)?;
                AtomRecord {
                    beta: poincare_polynomial(&k).map_err(|e| invalid(&ctx, e))?,
                    chi_c: k.euler_characteristic(),
                    provenance: Provenance::ComputedFromModel(model_label(m)),
                    compact_nonsingular: true,
                }
            } else if let Some(p) = &spec.pair {
                let pair = r.pair(p, &ctx)?;
                let beta = poincare_polynomial(&pair.total)
                    .and_then(|t| t.checked_sub(&poincare_polynomial(&pair.boundary_complex())?))
                    .map_err(|e| invalid(&ctx, e))?;
                AtomRecord {
                    beta,
                    chi_c: euler_compact_supports_combinatorial(&pair),
                    provenance: Provenance::ComputedFromModel(match p {
                        PairRef::Named(n) => n.clone(),
                        PairRef::Inline(_) => "inline pair".into(),
                    }),
                    compact_nonsingular: pair.boundary.is_empty(),
                }
            } else {
                let sname = spec.stratification.as_ref().expect("checked above");
                let strat = r.stratification(sname, &ctx)?;
                let report = beta_of_stratified(&strat, options).map_err(|e| invalid(&ctx, e))?;
                warnings.extend(report.warnings.iter().map(|w| format!("{ctx}: {w}")));
                let (chi_c, _) = chi_c_of_stratified(&strat).map_err(|e| invalid(&ctx, e))?;
                AtomRecord {
                    beta: report.beta,
                    chi_c,
                    provenance: Provenance::ComputedRecursively(sname.clone()),
                    compact_nonsingular: false,
                }
            };
            atoms.insert(name.clone(), record).map_err(|e| invalid(&ctx, e))?;
        }

        for (name, e) in &file.expressions {
            e.check_atoms(&atoms)
                .map_err(|err| invalid(format!("expression {name:?}"), err))?;
        }

        let mut covers = BTreeMap::new();
        for (name, spec) in &file.covers {
            let ctx = format!("cover {name:?}");
            let check_term = |t: &CoverTerm| -> Result<(), SceneError> {
                exactly_one(&ctx, &[("atom", t.atom.is_some()), ("beta", t.beta.is_some())])?;
                if let Some(a) = &t.atom {
                    atoms.get(a).map_err(|e| invalid(&ctx, e))?;
                }
                Ok(())
            };
            let pieces: Vec<(String, CoverTerm)> = spec.pieces.clone().into_iter().collect();
            let index: BTreeMap<&str, usize> =
                pieces.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();
            for (_, t) in &pieces {
                check_term(t)?;
            }
            let mut intersections = BTreeMap::new();
            for (key, t) in &spec.intersections {
                check_term(t)?;
                let mut idx = key
                    .split('&')
                    .map(|p| {
                        index
                            .get(p.trim())
                            .copied()
                            .ok_or_else(|| invalid(&ctx, format!("intersection {key:?} names unknown piece {p:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                idx.sort_unstable();
                idx.dedup();
                if idx.len() < 2 {
                    return Err(invalid(&ctx, format!("intersection {key:?} needs two distinct pieces")));
                }
                if intersections.insert(idx, t.clone()).is_some() {
                    return Err(invalid(&ctx, format!("intersection {key:?} given twice")));
                }
            }
            covers.insert(name.clone(), Cover { pieces, intersections });
        }

        let mut arrangements = BTreeMap::new();
        for (name, spec) in &file.arrangements {
            let ctx = format!("arrangement {name:?}");
            let total = r.complex(&spec.total, &ctx)?;
            let pieces = spec
                .pieces
                .iter()
                .map(|p| {
                    Subcomplex::from_maximal(&total, &p.simplices)
                        .map(|s| (p.name.clone(), s))
                        .map_err(|e| invalid(format!("{ctx}, piece {:?}", p.name), e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let a = Arrangement::new(total, pieces).map_err(|e| invalid(&ctx, e))?;
            arrangements.insert(name.clone(), a);
        }

        let mut weight_inputs = BTreeMap::new();
        for (name, spec) in &file.weight_inputs {
            let ctx = format!("weight input {name:?}");
            let input = WeightSystemInput::new(spec.b.clone(), spec.beta.clone())
                .map_err(|e| invalid(&ctx, e))?;
            let constraints = spec
                .constraints
                .iter()
                .map(|c| c.parse::<LinearConstraint>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| invalid(&ctx, e))?;
            for c in &constraints {
                c.check_range(input.b.len()).map_err(|e| invalid(&ctx, e))?;
            }
            weight_inputs.insert(name.clone(), WeightInput { input, constraints });
        }

        let Resolver {
            complexes,
            pairs,
            strat_done,
            ..
        } = r;
        Ok(Scene {
            complexes,
            pairs,
            atoms,
            expressions: file.expressions.clone(),
            stratifications: strat_done,
            covers,
            arrangements,
            weight_inputs,
            options,
            warnings,
            file,
        })
    }

    pub fn file(&self) -> &SceneFile {
        &self.file
    }

    pub fn to_json(&self) -> String {
        self.file.to_json()
    }

    fn lookup<'s, T>(
        map: &'s BTreeMap<String, T>,
        section: &'static str,
        name: &str,
    ) -> Result<&'s T, SceneError> {
        map.get(name).ok_or_else(|| SceneError::UnknownName {
            section,
            name: name.to_string(),
        })
    }

    pub fn complex(&self, name: &str) -> Result<&SimplicialComplex, SceneError> {
        Self::lookup(&self.complexes, "complex", name)
    }

    pub fn pair(&self, name: &str) -> Result<&PairSpace, SceneError> {
        Self::lookup(&self.pairs, "pair", name)
    }

    pub fn expression(&self, name: &str) -> Result<&ScissorExpr, SceneError> {
        Self::lookup(&self.expressions, "expression", name)
    }

    pub fn stratification(&self, name: &str) -> Result<&StratifiedSpec, SceneError> {
        Self::lookup(&self.stratifications, "stratification", name)
    }

    pub fn cover(&self, name: &str) -> Result<&Cover, SceneError> {
        Self::lookup(&self.covers, "cover", name)
    }

    pub fn arrangement(&self, name: &str) -> Result<&Arrangement, SceneError> {
        Self::lookup(&self.arrangements, "arrangement", name)
    }

    pub fn weight_input(&self, name: &str) -> Result<&WeightInput, SceneError> {
        Self::lookup(&self.weight_inputs, "weight input", name)
    }

    /// A complex to take homology of: complexes, then the total of a pair or
    /// arrangement of that name.
    pub fn homology_target(&self, name: &str) -> Result<&SimplicialComplex, SceneError> {
        self.complexes
            .get(name)
            .or_else(|| self.arrangements.get(name).map(Arrangement::total))
            .or_else(|| self.pairs.get(name).map(|p| &p.total))
            .ok_or_else(|| SceneError::UnknownName {
                section: "complex",
                name: name.to_string(),
            })
    }

    /// `β` of a named target, searched among expressions, covers,
    /// stratifications, atoms and arrangements, in that order.
    pub fn virtual_betti(&self, name: &str) -> Result<VirtualBetti, SceneError> {
        for section in BetaSection::SEARCH_ORDER {
            if let Some(v) = self.virtual_betti_in(section, name)? {
                return Ok(v);
            }
        }
        Err(SceneError::UnknownName {
            section: "expression, cover, stratification, atom or arrangement",
            name: name.to_string(),
        })
    }

    /// `β` of `name` within one section; `None` if the section has no such entry.
    pub fn virtual_betti_in(
        &self,
        section: BetaSection,
        name: &str,
    ) -> Result<Option<VirtualBetti>, SceneError> {
        let ctx = || format!("{} {name:?}", section.label());
        Ok(Some(match section {
            BetaSection::Expression => {
                let Some(e) = self.expressions.get(name) else { return Ok(None) };
                let beta = evaluate_beta(e, &self.atoms).map_err(|err| invalid(ctx(), err))?;
                let chi_c = evaluate_chi_c(e, &self.atoms).map_err(|err| invalid(ctx(), err))?;
                let declared = e
                    .atoms()
                    .into_iter()
                    .filter(|a| {
                        matches!(self.atoms.get(a).map(|r| &r.provenance), Ok(Provenance::Declared))
                    })
                    .map(str::to_string)
                    .collect::<BTreeSet<_>>();
                VirtualBetti {
                    kind: "expression",
                    beta,
                    chi_c: Some(chi_c),
                    warnings: Vec::new(),
                    declared: declared.into_iter().collect(),
                }
            }
            BetaSection::Cover => {
                let Some(c) = self.covers.get(name) else { return Ok(None) };
                self.cover_beta(name, c)?
            }
            BetaSection::Stratification => {
                let Some(s) = self.stratifications.get(name) else { return Ok(None) };
                let report = beta_of_stratified(s, self.options).map_err(|err| invalid(ctx(), err))?;
                let (chi_c, declared) = chi_c_of_stratified(s).map_err(|err| invalid(ctx(), err))?;
                VirtualBetti {
                    kind: "stratification",
                    beta: report.beta,
                    chi_c: declared.is_empty().then_some(chi_c),
                    warnings: report.warnings.iter().map(ToString::to_string).collect(),
                    declared,
                }
            }
            BetaSection::Atom => {
                let Ok(a) = self.atoms.get(name) else { return Ok(None) };
                let declared = matches!(a.provenance, Provenance::Declared);
                VirtualBetti {
                    kind: "atom",
                    beta: a.beta.clone(),
                    chi_c: (!declared || self.file.atoms[name].chi_c.is_some()).then_some(a.chi_c),
                    warnings: Vec::new(),
                    declared: if declared { vec![name.to_string()] } else { Vec::new() },
                }
            }
            BetaSection::Arrangement => {
                let Some(a) = self.arrangements.get(name) else { return Ok(None) };
                VirtualBetti {
                    kind: "arrangement",
                    beta: a.inclusion_exclusion_beta().map_err(|err| invalid(ctx(), err))?,
                    chi_c: Some(a.total().euler_characteristic()),
                    warnings: Vec::new(),
                    declared: Vec::new(),
                }
            }
        }))
    }

    /// Names in a section, sorted.
    pub fn names_in(&self, section: BetaSection) -> Vec<&str> {
        match section {
            BetaSection::Expression => self.expressions.keys().map(String::as_str).collect(),
            BetaSection::Cover => self.covers.keys().map(String::as_str).collect(),
            BetaSection::Stratification => self.stratifications.keys().map(String::as_str).collect(),
            BetaSection::Atom => self.atoms.names().collect(),
            BetaSection::Arrangement => self.arrangements.keys().map(String::as_str).collect(),
        }
    }

    fn cover_beta(&self, name: &str, c: &Cover) -> Result<VirtualBetti, SceneError> {
        let ctx = format!("cover {name:?}");
        let mut declared = BTreeSet::new();
        let mut chi_independent = true;
        let mut term = |t: &CoverTerm| -> Result<(IntPolynomial, i64), SceneError> {
            match (&t.atom, &t.beta) {
                (Some(a), _) => {
                    let rec = self.atoms.get(a).map_err(|e| invalid(&ctx, e))?;
                    if matches!(rec.provenance, Provenance::Declared) {
                        declared.insert(a.clone());
                    }
                    Ok((rec.beta.clone(), rec.chi_c))
                }
                (None, Some(b)) => {
                    chi_independent = false;
                    Ok((b.clone(), b.eval(-1).map_err(|e| invalid(&ctx, e))?))
                }
                (None, None) => unreachable!("validated on load"),
            }
        };
        let mut pieces = Vec::new();
        let mut chi_pieces = Vec::new();
        for (n, t) in &c.pieces {
            let (b, x) = term(t)?;
            pieces.push((n.clone(), b));
            chi_pieces.push((n.clone(), IntPolynomial::constant(x)));
        }
        let mut inter = BTreeMap::new();
        let mut chi_inter = BTreeMap::new();
        for (k, t) in &c.intersections {
            let (b, x) = term(t)?;
            inter.insert(k.clone(), b);
            chi_inter.insert(k.clone(), IntPolynomial::constant(x));
        }
        let beta = inclusion_exclusion(&pieces, &inter).map_err(|e: StrataError| invalid(&ctx, e))?;
        let chi_c = inclusion_exclusion(&chi_pieces, &chi_inter)
            .map_err(|e| invalid(&ctx, e))?
            .coeff(0);
        Ok(VirtualBetti {
            kind: "cover",
            beta,
            chi_c: chi_independent.then_some(chi_c),
            warnings: Vec::new(),
            declared: declared.into_iter().collect(),
        })
    }
}

fn model_label(r: &ComplexRef) -> String {
    match r {
        ComplexRef::Named(n) => n.clone(),
        ComplexRef::Inline(_) => "inline complex".into(),
    }
}
