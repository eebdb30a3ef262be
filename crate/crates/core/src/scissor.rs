//! Scissor-calculus expressions in the Grothendieck ring of real varieties,
//! evaluated through the virtual Poincaré polynomial and through the Euler
//! characteristic with compact supports.
//!
//! Expressions are never normalised: two expressions present the same class
//! only as far as their images under these homomorphisms agree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polynomial::{Degree, IntPolynomial, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScissorError {
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),
    #[error("atom {0:?} is registered twice")]
    DuplicateAtom(String),
    #[error("atom {name:?} is flagged compact nonsingular but {beta} has a negative coefficient")]
    NegativeClassicalBetti { name: String, beta: IntPolynomial },
    #[error(
        "blowup presentation disagrees with its base: [Bl] - [E] + [C] gives {presented}, base gives {base}"
    )]
    BlowupBaseMismatch {
        presented: IntPolynomial,
        base: IntPolynomial,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Where an atom's invariants came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "source")]
pub enum Provenance {
    /// Entered by hand.
    Declared,
    /// Computed from a named simplicial model (a complex or a pair).
    ComputedFromModel(String),
    /// Computed by the stratified recursion from a named stratification.
    ComputedRecursively(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomRecord {
    pub beta: IntPolynomial,
    /// Euler characteristic with compact supports, obtained independently of
    /// `beta` whenever a model is available.
    pub chi_c: i64,
    pub provenance: Provenance,
    pub compact_nonsingular: bool,
}

impl AtomRecord {
    /// A hand-entered atom; `chi_c` defaults to `beta(-1)`.
    pub fn declared(beta: IntPolynomial, compact_nonsingular: bool) -> Result<Self, PolyError> {
        Ok(Self {
            chi_c: beta.eval(-1)?,
            beta,
            provenance: Provenance::Declared,
            compact_nonsingular,
        })
    }
}

/// Named atoms with their invariants. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomRegistry {
    atoms: BTreeMap<String, AtomRecord>,
}

impl AtomRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, record: AtomRecord) -> Result<(), ScissorError> {
        let name = name.into();
        if record.compact_nonsingular && !record.beta.is_nonnegative() {
            return Err(ScissorError::NegativeClassicalBetti {
                name,
                beta: record.beta,
            });
        }
        if self.atoms.contains_key(&name) {
            return Err(ScissorError::DuplicateAtom(name));
        }
        self.atoms.insert(name, record);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&AtomRecord, ScissorError> {
        self.atoms
            .get(name)
            .ok_or_else(|| ScissorError::UnknownAtom(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.atoms.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.atoms.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AtomRecord)> {
        self.atoms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// An element of the Grothendieck ring presented as a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ScissorExpr {
    Atom {
        name: String,
    },
    /// `[X ⊔ Y] = [X] + [Y]`.
    Union {
        left: Box<ScissorExpr>,
        right: Box<ScissorExpr>,
    },
    /// `[X × Y] = [X]·[Y]`.
    Product {
        left: Box<ScissorExpr>,
        right: Box<ScissorExpr>,
    },
    /// `[X \ Y] = [X] - [Y]` for `Y` closed in `X` (closedness is the
    /// caller's assertion).
    Difference {
        total: Box<ScissorExpr>,
        closed_sub: Box<ScissorExpr>,
    },
    /// The base `X` of a blowup `Bl_C X -> X` with exceptional divisor `E`,
    /// through `[X] = [Bl_C X] - [E] + [C]`. When `base` is given it must
    /// evaluate to the same class.
    Blowup {
        blowup_total: Box<ScissorExpr>,
        exceptional: Box<ScissorExpr>,
        center: Box<ScissorExpr>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<ScissorExpr>>,
    },
    Empty,
}

impl ScissorExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        Self::Atom { name: name.into() }
    }

    pub fn union(left: ScissorExpr, right: ScissorExpr) -> Self {
        Self::Union {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn product(left: ScissorExpr, right: ScissorExpr) -> Self {
        Self::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn difference(total: ScissorExpr, closed_sub: ScissorExpr) -> Self {
        Self::Difference {
            total: Box::new(total),
            closed_sub: Box::new(closed_sub),
        }
    }

    pub fn blowup(
        blowup_total: ScissorExpr,
        exceptional: ScissorExpr,
        center: ScissorExpr,
        base: Option<ScissorExpr>,
    ) -> Self {
        Self::Blowup {
            blowup_total: Box::new(blowup_total),
            exceptional: Box::new(exceptional),
            center: Box::new(center),
            base: base.map(Box::new),
        }
    }

    /// Disjoint union of many terms (`Empty` when there are none).
    pub fn union_all(terms: impl IntoIterator<Item = ScissorExpr>) -> Self {
        terms
            .into_iter()
            .reduce(ScissorExpr::union)
            .unwrap_or(ScissorExpr::Empty)
    }

    /// Names of all atoms referenced, in first-seen order.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ScissorExpr::Atom { name } => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            ScissorExpr::Union { left, right } | ScissorExpr::Product { left, right } => {
                left.collect_atoms(out);
                right.collect_atoms(out);
            }
            ScissorExpr::Difference { total, closed_sub } => {
                total.collect_atoms(out);
                closed_sub.collect_atoms(out);
            }
            ScissorExpr::Blowup {
                blowup_total,
                exceptional,
                center,
                base,
            } => {
                blowup_total.collect_atoms(out);
                exceptional.collect_atoms(out);
                center.collect_atoms(out);
                if let Some(b) = base {
                    b.collect_atoms(out);
                }
            }
            ScissorExpr::Empty => {}
        }
    }

    /// Fails with `UnknownAtom` on the first unresolved leaf.
    pub fn check_atoms(&self, reg: &AtomRegistry) -> Result<(), ScissorError> {
        self.atoms().into_iter().try_for_each(|a| reg.get(a).map(|_| ()))
    }
}

/// The virtual Poincaré polynomial of the class presented by `e`.
pub fn evaluate_beta(e: &ScissorExpr, reg: &AtomRegistry) -> Result<IntPolynomial, ScissorError> {
    Ok(match e {
        ScissorExpr::Atom { name } => reg.get(name)?.beta.clone(),
        ScissorExpr::Union { left, right } => {
            evaluate_beta(left, reg)?.checked_add(&evaluate_beta(right, reg)?)?
        }
        ScissorExpr::Product { left, right } => {
            evaluate_beta(left, reg)?.checked_mul(&evaluate_beta(right, reg)?)?
        }
        ScissorExpr::Difference { total, closed_sub } => {
            evaluate_beta(total, reg)?.checked_sub(&evaluate_beta(closed_sub, reg)?)?
        }
        ScissorExpr::Blowup {
            blowup_total,
            exceptional,
            center,
            base,
        } => {
            let presented = evaluate_beta(blowup_total, reg)?
                .checked_sub(&evaluate_beta(exceptional, reg)?)?
                .checked_add(&evaluate_beta(center, reg)?)?;
            if let Some(base) = base {
                let base = evaluate_beta(base, reg)?;
                if base != presented {
                    return Err(ScissorError::BlowupBaseMismatch { presented, base });
                }
            }
            presented
        }
        ScissorExpr::Empty => IntPolynomial::zero(),
    })
}

/// `χ_c` of the class presented by `e`, by the same recursion over the
/// atoms' own `χ_c` values.
pub fn evaluate_chi_c(e: &ScissorExpr, reg: &AtomRegistry) -> Result<i64, ScissorError> {
    let overflow = || ScissorError::Poly(PolyError::Overflow);
    Ok(match e {
        ScissorExpr::Atom { name } => reg.get(name)?.chi_c,
        ScissorExpr::Union { left, right } => evaluate_chi_c(left, reg)?
            .checked_add(evaluate_chi_c(right, reg)?)
            .ok_or_else(overflow)?,
        ScissorExpr::Product { left, right } => evaluate_chi_c(left, reg)?
            .checked_mul(evaluate_chi_c(right, reg)?)
            .ok_or_else(overflow)?,
        ScissorExpr::Difference { total, closed_sub } => evaluate_chi_c(total, reg)?
            .checked_sub(evaluate_chi_c(closed_sub, reg)?)
            .ok_or_else(overflow)?,
        ScissorExpr::Blowup {
            blowup_total,
            exceptional,
            center,
            ..
        } => {
            let center = evaluate_chi_c(center, reg)?;
            evaluate_chi_c(blowup_total, reg)?
                .checked_sub(evaluate_chi_c(exceptional, reg)?)
                .and_then(|v| v.checked_add(center))
                .ok_or_else(overflow)?
        }
        ScissorExpr::Empty => 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupVerdict {
    pub holds: bool,
    /// `β(Bl) - β(E)`
    pub lhs: IntPolynomial,
    /// `β(X) - β(C)`
    pub rhs: IntPolynomial,
    pub first_failing_degree: Option<usize>,
}

/// Checks `β(Bl_C X) - β(E) = β(X) - β(C)` coefficientwise.
pub fn check_blowup_relation(
    x: &IntPolynomial,
    c: &IntPolynomial,
    bl: &IntPolynomial,
    e: &IntPolynomial,
) -> Result<BlowupVerdict, PolyError> {
    let lhs = bl.checked_sub(e)?;
    let rhs = x.checked_sub(c)?;
    let n = lhs.coeffs().len().max(rhs.coeffs().len());
    let first_failing_degree = (0..n).find(|&i| lhs.coeff(i) != rhs.coeff(i));
    Ok(BlowupVerdict {
        holds: first_failing_degree.is_none(),
        lhs,
        rhs,
        first_failing_degree,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeDiagnostic {
    /// `β = 0`, so the class is zero although the variety was claimed nonempty.
    ZeroClass,
    WrongDegree { expected: usize, found: usize },
    NonPositiveLeading { leading: i64 },
}

impl std::fmt::Display for DegreeDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegreeDiagnostic::ZeroClass => f.write_str("class is zero: beta vanishes"),
            DegreeDiagnostic::WrongDegree { expected, found } => {
                write!(f, "degree {found} differs from claimed dimension {expected}")
            }
            DegreeDiagnostic::NonPositiveLeading { leading } => {
                write!(f, "leading coefficient {leading} is not positive")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVerdict {
    pub beta: IntPolynomial,
    pub degree: Degree,
    pub leading: i64,
    pub diagnostic: Option<DegreeDiagnostic>,
}

impl DegreeVerdict {
    pub fn holds(&self) -> bool {
        self.diagnostic.is_none()
    }
}

/// Degree law for a polynomial claimed to be `β` of a nonempty variety of
/// dimension `claimed_dim`.
pub fn degree_law(beta: &IntPolynomial, claimed_dim: usize) -> DegreeVerdict {
    let (degree, leading) = beta.degree_and_leading();
    let diagnostic = match degree {
        Degree::NegInfinity => Some(DegreeDiagnostic::ZeroClass),
        Degree::Finite(d) if d != claimed_dim => Some(DegreeDiagnostic::WrongDegree {
            expected: claimed_dim,
            found: d,
        }),
        Degree::Finite(_) if leading <= 0 => Some(DegreeDiagnostic::NonPositiveLeading { leading }),
        Degree::Finite(_) => None,
    };
    DegreeVerdict {
        beta: beta.clone(),
        degree,
        leading,
        diagnostic,
    }
}

pub fn degree_report(
    e: &ScissorExpr,
    reg: &AtomRegistry,
    claimed_dim: usize,
) -> Result<DegreeVerdict, ScissorError> {
    Ok(degree_law(&evaluate_beta(e, reg)?, claimed_dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn registry() -> AtomRegistry {
        let mut reg = AtomRegistry::new();
        for (name, beta, cn) in [
            ("pt", "1", true),
            ("2pt", "2", true),
            ("4pt", "4", true),
            ("circle", "1 + t", true),
            ("ellipse", "1 + t", true),
        ] {
            reg.insert(name, AtomRecord::declared(poly(beta), cn).unwrap())
                .unwrap();
        }
        reg
    }

    fn a(name: &str) -> ScissorExpr {
        ScissorExpr::atom(name)
    }

    #[test]
    fn ellipses_by_inclusion_exclusion() {
        let reg = registry();
        let e = ScissorExpr::difference(ScissorExpr::union(a("ellipse"), a("ellipse")), a("4pt"));
        let beta = evaluate_beta(&e, &reg).unwrap();
        assert_eq!(beta, poly("-2 + 2*t"));
        assert_eq!(beta.coeff(0), -2);
        assert!(degree_report(&e, &reg, 1).unwrap().holds());
    }

    #[test]
    fn figure_eights() {
        let reg = registry();
        // proper transform is a circle, two points over the node, centre a point
        let x = ScissorExpr::blowup(a("circle"), a("2pt"), a("pt"), None);
        assert_eq!(evaluate_beta(&x, &reg).unwrap(), poly("t"));
        assert_eq!(evaluate_chi_c(&x, &reg).unwrap(), -1);
        let y = ScissorExpr::difference(ScissorExpr::union(a("circle"), a("circle")), a("pt"));
        assert_eq!(evaluate_beta(&y, &reg).unwrap(), poly("1 + 2*t"));
    }

    #[test]
    fn circle_minus_point_and_empty() {
        let reg = registry();
        let line = ScissorExpr::difference(a("circle"), a("pt"));
        assert_eq!(evaluate_chi_c(&line, &reg).unwrap(), -1);
        assert_eq!(evaluate_chi_c(&ScissorExpr::Empty, &reg).unwrap(), 0);
        assert_eq!(evaluate_beta(&ScissorExpr::Empty, &reg).unwrap(), IntPolynomial::zero());
    }

    #[test]
    fn unknown_atom_is_named() {
        let reg = registry();
        let e = ScissorExpr::union(a("circle"), a("klein"));
        assert_eq!(
            evaluate_beta(&e, &reg),
            Err(ScissorError::UnknownAtom("klein".into()))
        );
        assert_eq!(
            evaluate_chi_c(&e, &reg),
            Err(ScissorError::UnknownAtom("klein".into()))
        );
    }

    #[test]
    fn blowup_base_is_checked() {
        let reg = registry();
        let ok = ScissorExpr::blowup(a("circle"), a("2pt"), a("pt"), Some(ScissorExpr::difference(a("circle"), a("pt"))));
        // (1+t) - 2 + 1 = t equals circle minus point
        assert_eq!(evaluate_beta(&ok, &reg).unwrap(), poly("t"));
        let bad = ScissorExpr::blowup(a("circle"), a("2pt"), a("pt"), Some(a("circle")));
        assert!(matches!(
            evaluate_beta(&bad, &reg),
            Err(ScissorError::BlowupBaseMismatch { .. })
        ));
    }

    #[test]
    fn blowup_relation_examples() {
        let zero = IntPolynomial::zero();
        let x = poly("1 + t^2");
        // empty centre: Bl = X, E = ∅
        assert!(check_blowup_relation(&x, &zero, &x, &zero).unwrap().holds);
        // centre a whole component Y of X = Z ⊔ Y: Bl = Z, E = ∅
        let y = poly("1 + t");
        let z = poly("1 + t^2");
        let v = check_blowup_relation(&(&z + &y), &y, &z, &zero).unwrap();
        assert!(v.holds);
        // S² blown up at a point is RP², exceptional curve RP¹
        let v = check_blowup_relation(&x, &poly("1"), &poly("1 + t + t^2"), &poly("1 + t")).unwrap();
        assert!(v.holds);
        let v = check_blowup_relation(&x, &poly("1"), &poly("1 + t + t^2"), &poly("1")).unwrap();
        assert!(!v.holds);
        assert_eq!(v.first_failing_degree, Some(1));
    }

    #[test]
    fn degree_diagnostics() {
        let reg = registry();
        let v = degree_report(&ScissorExpr::Empty, &reg, 2).unwrap();
        assert_eq!(v.diagnostic, Some(DegreeDiagnostic::ZeroClass));
        for n in 0..4 {
            let beta = &IntPolynomial::monomial(1, n + 1) - &IntPolynomial::monomial(1, n);
            assert!(degree_law(&beta, n + 1).holds());
            assert!(!degree_law(&beta, n + 2).holds());
        }
        assert_eq!(
            degree_law(&poly("3 - t"), 1).diagnostic,
            Some(DegreeDiagnostic::NonPositiveLeading { leading: -1 })
        );
    }

    #[test]
    fn registry_rejects_negative_classical_betti() {
        let mut reg = AtomRegistry::new();
        let bad = AtomRecord::declared(poly("t - 1"), true).unwrap();
        assert!(matches!(
            reg.insert("bad", bad),
            Err(ScissorError::NegativeClassicalBetti { .. })
        ));
        reg.insert("x", AtomRecord::declared(poly("1"), true).unwrap()).unwrap();
        assert!(matches!(
            reg.insert("x", AtomRecord::declared(poly("1"), true).unwrap()),
            Err(ScissorError::DuplicateAtom(_))
        ));
    }

    #[test]
    fn expression_json_shape() {
        let e = ScissorExpr::difference(a("circle"), a("pt"));
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(json["op"], "difference");
        assert_eq!(json["total"]["op"], "atom");
        assert_eq!(json["closed_sub"]["name"], "pt");
        let back: ScissorExpr = serde_json::from_value(json).unwrap();
        assert_eq!(back, e);
        let empty: ScissorExpr = serde_json::from_str(r#"{"op":"empty"}"#).unwrap();
        assert_eq!(empty, ScissorExpr::Empty);
    }
}
