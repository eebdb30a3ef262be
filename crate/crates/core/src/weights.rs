//! Integer shadows of a weight filtration on cohomology.
//!
//! A candidate profile is a triangular array `w(i, j)`, `0 ≤ j ≤ i ≤ n`,
//! where `w(i, j)` is the dimension of the `j`-th graded piece of `H^i`.
//! It must satisfy two families of equations: the `i`-th diagonal sums to
//! `b_i`, and the alternating sum along row `j` is the virtual Betti number:
//!
//! ```text
//! Σ_j w(i, j) = b_i,      (-1)^j Σ_{i ≥ j} (-1)^i w(i, j) = β_j.
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("malformed constraint {input:?}: {reason}")]
    MalformedConstraint { input: String, reason: String },
    #[error("b has {b} entries but beta has {beta}")]
    LengthMismatch { b: usize, beta: usize },
}

fn malformed(input: &str, reason: impl Into<String>) -> WeightError {
    WeightError::MalformedConstraint {
        input: input.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystemInput {
    pub b: Vec<usize>,
    pub beta: Vec<i64>,
}

impl WeightSystemInput {
    /// `b` and `beta` must have the same length.
    pub fn new(b: Vec<usize>, beta: Vec<i64>) -> Result<Self, WeightError> {
        let input = WeightSystemInput { b, beta };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<(), WeightError> {
        if self.b.len() != self.beta.len() {
            return Err(WeightError::LengthMismatch {
                b: self.b.len(),
                beta: self.beta.len(),
            });
        }
        Ok(())
    }

    /// Top degree, or `None` for the empty system.
    pub fn n(&self) -> Option<usize> {
        self.b.len().checked_sub(1)
    }
}

/// Triangular array `w[i][j]`, `0 ≤ j ≤ i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeightArray {
    w: Vec<Vec<usize>>,
}

impl WeightArray {
    /// All-zero array for degrees `0..len`.
    pub fn zeros(len: usize) -> Self {
        WeightArray {
            w: (0..len).map(|i| vec![0; i + 1]).collect(),
        }
    }

    /// Builds from rows `w[i] = [w(i,0), …, w(i,i)]`; `None` if not triangular.
    pub fn from_rows(w: Vec<Vec<usize>>) -> Option<Self> {
        w.iter()
            .enumerate()
            .all(|(i, r)| r.len() == i + 1)
            .then_some(WeightArray { w })
    }

    /// Array concentrated on the diagonal, `w(i,i) = b_i`.
    pub fn diagonal(b: &[usize]) -> Self {
        let mut w = Self::zeros(b.len());
        for (i, &v) in b.iter().enumerate() {
            w.w[i][i] = v;
        }
        w
    }

    /// Number of cohomological degrees covered (`n + 1`).
    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// `w(i, j)`, zero outside the triangle.
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.w.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: usize, v: usize) {
        self.w[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.w
    }

    /// Entries in lexicographic `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.w
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| ((i, j), v)))
    }

    pub fn diagonal_sum(&self, i: usize) -> usize {
        self.w.get(i).map_or(0, |r| r.iter().sum())
    }

    /// `(-1)^j Σ_{i ≥ j} (-1)^i w(i, j)`.
    pub fn row_alternating(&self, j: usize) -> i64 {
        let s: i64 = (j..self.w.len())
            .map(|i| {
                let v = self.w[i][j] as i64;
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum();
        if j % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// Whether this array solves the system for `input`.
    pub fn satisfies(&self, input: &WeightSystemInput) -> bool {
        self.len() == input.b.len()
            && (0..self.len()).all(|i| self.diagonal_sum(i) == input.b[i])
            && (0..self.len()).all(|j| self.row_alternating(j) == input.beta[j])
    }

    /// Compact single-line form, e.g. `w00=1 w10=0 w11=1`.
    pub fn inline(&self) -> String {
        self.entries()
            .map(|((i, j), v)| format!("{}={v}", var_name(i, j)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn var_name(i: usize, j: usize) -> String {
    if i < 10 {
        format!("w{i}{j}")
    } else {
        format!("w[{i},{j}]")
    }
}

/// Triangular layout, top row first: row `j` lists `w(j,j) … w(n,j)`.
impl fmt::Display for WeightArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.w.len();
        for j in (0..n).rev() {
            let row: Vec<String> = (j..n).map(|i| self.w[i][j].to_string()).collect();
            write!(f, "{}", row.join(" "))?;
            if j > 0 {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Every nonnegative solution, in lexicographic order of the entries.
///
/// Enumerates compositions of each `b_i` into `i + 1` parts, pruning on the
/// row equations once they can no longer be met by the remaining diagonals.
/// The search is exhaustive, so its output is complete by construction.
pub fn solve_weight_system(input: &WeightSystemInput) -> Vec<WeightArray> {
    if input.validate().is_err() {
        return Vec::new();
    }
    let len = input.b.len();
    // slack[k] = Σ_{i ≥ k} b_i bounds what diagonals k.. can still add to a row
    let mut slack = vec![0i64; len + 1];
    for i in (0..len).rev() {
        slack[i] = slack[i + 1] + input.b[i] as i64;
    }
    let mut out = Vec::new();
    let mut w = WeightArray::zeros(len);
    // partial[j] = Σ_{assigned i} (-1)^i w(i,j)
    let mut partial = vec![0i64; len];
    search_diagonal(input, &slack, 0, &mut w, &mut partial, &mut out);
    out
}

fn search_diagonal(
    input: &WeightSystemInput,
    slack: &[i64],
    i: usize,
    w: &mut WeightArray,
    partial: &mut [i64],
    out: &mut Vec<WeightArray>,
) {
    let len = input.b.len();
    // Row j still receives w(k, j) from every diagonal k ≥ max(i, j).
    for j in 0..len {
        let target = if j % 2 == 0 { input.beta[j] } else { -input.beta[j] };
        if (target - partial[j]).abs() > slack[i.max(j)] {
            return;
        }
    }
    if i == len {
        out.push(w.clone());
        return;
    }
    compose(input, slack, i, 0, input.b[i], w, partial, out);
}

#[allow(clippy::too_many_arguments)]
fn compose(
    input: &WeightSystemInput,
    slack: &[i64],
    i: usize,
    j: usize,
    remaining: usize,
    w: &mut WeightArray,
    partial: &mut [i64],
    out: &mut Vec<WeightArray>,
) {
    let sign = if i % 2 == 0 { 1 } else { -1 };
    let range = if j == i { remaining..=remaining } else { 0..=remaining };
    for v in range {
        w.set(i, j, v);
        partial[j] += sign * v as i64;
        if j == i {
            search_diagonal(input, slack, i + 1, w, partial, out);
        } else {
            compose(input, slack, i, j + 1, remaining - v, w, partial, out);
        }
        partial[j] -= sign * v as i64;
    }
    w.set(i, j, 0);
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConditionFlags {
    pub compact_nonsingular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// `w(i,j) = 0` for all `j < i`.
    pub manifold: bool,
    /// The row equations hold.
    pub virtual_betti: bool,
    /// The diagonal equations hold.
    pub diagonals: bool,
    /// Present only when the space is flagged compact nonsingular: the
    /// array is diagonal with `w(i,i) = b_i = β_i`.
    pub compact_nonsingular: Option<bool>,
}

pub fn check_conditions(
    w: &WeightArray,
    input: &WeightSystemInput,
    flags: ConditionFlags,
) -> ConditionReport {
    let len = w.len();
    let manifold = w.entries().all(|((i, j), v)| j == i || v == 0);
    let virtual_betti =
        len == input.beta.len() && (0..len).all(|j| w.row_alternating(j) == input.beta[j]);
    let diagonals = len == input.b.len() && (0..len).all(|i| w.diagonal_sum(i) == input.b[i]);
    let compact_nonsingular = flags.compact_nonsingular.then(|| {
        manifold
            && len == input.b.len()
            && len == input.beta.len()
            && (0..len).all(|i| w.get(i, i) == input.b[i] && input.b[i] as i64 == input.beta[i])
    });
    ConditionReport {
        manifold,
        virtual_betti,
        diagonals,
        compact_nonsingular,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<")]
    Lt,
}

/// `Σ c·w(i,j) + constant  REL  0`, remembering the text it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: BTreeMap<(usize, usize), i64>,
    pub constant: i64,
    pub relation: Relation,
    pub text: String,
    /// Free-form note, e.g. which argument the constraint encodes.
    pub note: Option<String>,
}

impl LinearConstraint {
    pub fn evaluate(&self, w: &WeightArray) -> i64 {
        self.coeffs
            .iter()
            .map(|(&(i, j), &c)| c * w.get(i, j) as i64)
            .sum::<i64>()
            + self.constant
    }

    pub fn holds(&self, w: &WeightArray) -> bool {
        let v = self.evaluate(w);
        match self.relation {
            Relation::Eq => v == 0,
            Relation::Ge => v >= 0,
            Relation::Le => v <= 0,
            Relation::Gt => v > 0,
            Relation::Lt => v < 0,
        }
    }

    /// Checks every referenced variable lies inside the triangle of `len` degrees.
    pub fn check_range(&self, len: usize) -> Result<(), WeightError> {
        for &(i, j) in self.coeffs.keys() {
            if j > i || i >= len {
                return Err(malformed(
                    &self.text,
                    format!("{} is outside the array (degrees 0..{len})", var_name(i, j)),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Tokens of one side of a constraint.
fn parse_side(side: &str, whole: &str) -> Result<(BTreeMap<(usize, usize), i64>, i64), WeightError> {
    let mut coeffs = BTreeMap::new();
    let mut constant = 0i64;
    let s: String = side.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(malformed(whole, "empty side"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (k, c) in s.char_indices() {
        // '-' or '+' inside brackets never occurs in valid input; split at every sign
        if (c == '+' || c == '-') && k > 0 {
            terms.push(&s[start..k]);
            start = k;
        }
    }
    terms.push(&s[start..]);
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'+') => (1, &term[1..]),
            Some(b'-') => (-1, &term[1..]),
            _ => (1, term),
        };
        if body.is_empty() {
            return Err(malformed(whole, "dangling sign"));
        }
        let (coef, var) = match body.find('w') {
            None => (body, None),
            Some(0) => ("1", Some(body)),
            Some(p) => {
                let c = body[..p].strip_suffix('*').unwrap_or(&body[..p]);
                (c, Some(&body[p..]))
            }
        };
        let c: i64 = coef
            .parse()
            .map_err(|_| malformed(whole, format!("bad coefficient {coef:?}")))?;
        let c = c * sign;
        match var {
            None => constant += c,
            Some(v) => *coeffs.entry(parse_var(v, whole)?).or_insert(0) += c,
        }
    }
    Ok((coeffs, constant))
}

fn parse_var(v: &str, whole: &str) -> Result<(usize, usize), WeightError> {
    let rest = &v[1..];
    let bad = || malformed(whole, format!("bad variable {v:?}"));
    if let Some(inner) = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let (i, j) = inner.split_once(',').ok_or_else(bad)?;
        Ok((i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?))
    } else if rest.len() == 2 && rest.bytes().all(|b| b.is_ascii_digit()) {
        let d = rest.as_bytes();
        Ok(((d[0] - b'0') as usize, (d[1] - b'0') as usize))
    } else {
        Err(bad())
    }
}

impl FromStr for LinearConstraint {
    type Err = WeightError;

    /// Accepts `lhs REL rhs` with `REL` one of `= == >= <= > <`, each side a
    /// sum of integers and terms `w21`, `3*w21`, `3w21`, `w[2,1]`. Text after
    /// `#` becomes the note.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (body, note) = match s.split_once('#') {
            Some((b, n)) => (b, Some(n.trim().to_string()).filter(|n| !n.is_empty())),
            None => (s, None),
        };
        let text = body.trim().to_string();
        let ops = [
            (">=", Relation::Ge),
            ("<=", Relation::Le),
            ("==", Relation::Eq),
            (">", Relation::Gt),
            ("<", Relation::Lt),
            ("=", Relation::Eq),
        ];
        let (pos, op, relation) = ops
            .iter()
            .filter_map(|&(op, rel)| text.find(op).map(|p| (p, op, rel)))
            .min_by_key(|&(p, op, _)| (p, std::cmp::Reverse(op.len())))
            .ok_or_else(|| malformed(&text, "no relation (=, >=, <=, >, <)"))?;
        let (lhs, rhs) = (&text[..pos], &text[pos + op.len()..]);
        if rhs.contains(['=', '<', '>']) {
            return Err(malformed(&text, "more than one relation"));
        }
        let (mut coeffs, lc) = parse_side(lhs, &text)?;
        let (rc, rconst) = parse_side(rhs, &text)?;
        for (k, c) in rc {
            *coeffs.entry(k).or_insert(0) -= c;
        }
        coeffs.retain(|_, c| *c != 0);
        Ok(LinearConstraint {
            coeffs,
            constant: lc - rconst,
            relation,
            text,
            note,
        })
    }
}

/// One constraint per line; blank lines and lines starting with `#` skipped.
pub fn parse_constraints(src: &str) -> Result<Vec<LinearConstraint>, WeightError> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    pub survivors: Vec<WeightArray>,
    /// Eliminated arrays with the first constraint each one violates.
    pub eliminated: Vec<(WeightArray, String)>,
}

impl FilterOutcome {
    pub fn is_infeasible(&self) -> bool {
        self.survivors.is_empty()
    }

    /// Distinct violated constraints, in order of first appearance.
    pub fn violated(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for (_, c) in &self.eliminated {
            if !seen.contains(&c.as_str()) {
                seen.push(c.as_str());
            }
        }
        seen
    }

    /// `INFEASIBLE (violates: ...)`, or `None` if something survived.
    pub fn infeasibility_message(&self) -> Option<String> {
        self.is_infeasible()
            .then(|| format!("INFEASIBLE (violates: {})", self.violated().join(", ")))
    }
}

pub fn constraint_filter(
    solutions: &[WeightArray],
    constraints: &[LinearConstraint],
) -> Result<FilterOutcome, WeightError> {
    let mut survivors = Vec::new();
    let mut eliminated = Vec::new();
    for w in solutions {
        for c in constraints {
            c.check_range(w.len())?;
        }
        match constraints.iter().find(|c| !c.holds(w)) {
            None => survivors.push(w.clone()),
            Some(c) => eliminated.push((w.clone(), c.text.clone())),
        }
    }
    Ok(FilterOutcome {
        survivors,
        eliminated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub j: usize,
    pub alternating_sum: i64,
    pub beta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualBettiVerdict {
    pub rows: Vec<RowCheck>,
}

impl VirtualBettiVerdict {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.alternating_sum == r.beta)
    }

    pub fn failing_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.alternating_sum != r.beta)
            .map(|r| r.j)
            .collect()
    }
}

/// Checks the row equations of a profile against `β`; missing entries on
/// either side count as zero.
pub fn mv_profile_vs_virtual_betti(profile: &WeightArray, beta: &[i64]) -> VirtualBettiVerdict {
    let len = profile.len().max(beta.len());
    let rows = (0..len)
        .map(|j| RowCheck {
            j,
            alternating_sum: if j < profile.len() { profile.row_alternating(j) } else { 0 },
            beta: beta.get(j).copied().unwrap_or(0),
        })
        .collect();
    VirtualBettiVerdict { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(rows: &[&[usize]]) -> WeightArray {
        WeightArray::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn input(b: &[usize], beta: &[i64]) -> WeightSystemInput {
        WeightSystemInput::new(b.to_vec(), beta.to_vec()).unwrap()
    }

    #[test]
    fn surface_has_two_solutions() {
        let sols = solve_weight_system(&input(&[1, 1, 8], &[4, -1, 3]));
        assert_eq!(
            sols,
            vec![arr(&[&[1], &[0, 1], &[3, 2, 3]]), arr(&[&[1], &[1, 0], &[4, 1, 3]])]
        );
    }

    #[test]
    fn pair_unions() {
        let sols = solve_weight_system(&input(&[1, 0, 3], &[1, -1, 2]));
        assert_eq!(sols, vec![arr(&[&[1], &[0, 0], &[0, 1, 2]])]);

        let sols = solve_weight_system(&input(&[1, 2, 3], &[1, 1, 2]));
        let c: LinearConstraint = "w10 = 0".parse().unwrap();
        let out = constraint_filter(&sols, &[c]).unwrap();
        assert_eq!(out.survivors, vec![arr(&[&[1], &[0, 2], &[0, 1, 2]])]);
    }

    #[test]
    fn surface_constraints_are_infeasible() {
        let sols = solve_weight_system(&input(&[1, 1, 8], &[4, -1, 3]));
        let c: LinearConstraint = "w21 >= 3".parse().unwrap();
        let out = constraint_filter(&sols, &[c]).unwrap();
        assert!(out.is_infeasible());
        assert_eq!(out.infeasibility_message().unwrap(), "INFEASIBLE (violates: w21 >= 3)");

        let cs = parse_constraints("w10 = 1\nw10 <= 0  # injection into H^1 of the torus\n").unwrap();
        assert_eq!(cs[1].note.as_deref(), Some("injection into H^1 of the torus"));
        let out = constraint_filter(&sols, &cs).unwrap();
        assert!(out.is_infeasible());
        assert_eq!(out.violated(), vec!["w10 = 1", "w10 <= 0"]);

        let out = constraint_filter(&sols, &[]).unwrap();
        assert_eq!(out.survivors, sols);
    }

    #[test]
    fn empty_input_has_one_empty_solution() {
        let inp = input(&[], &[]);
        let sols = solve_weight_system(&inp);
        assert_eq!(sols, vec![WeightArray::zeros(0)]);
        let r = check_conditions(&sols[0], &inp, ConditionFlags { compact_nonsingular: true });
        assert!(r.manifold && r.virtual_betti && r.diagonals && r.compact_nonsingular == Some(true));
    }

    #[test]
    fn conditions() {
        let torus = input(&[1, 2, 1], &[1, 2, 1]);
        let d = WeightArray::diagonal(&[1, 2, 1]);
        let r = check_conditions(&d, &torus, ConditionFlags { compact_nonsingular: true });
        assert!(r.manifold && r.virtual_betti && r.compact_nonsingular == Some(true));

        let surf = input(&[1, 1, 8], &[4, -1, 3]);
        let w = arr(&[&[1], &[0, 1], &[3, 2, 3]]);
        let r = check_conditions(&w, &surf, ConditionFlags::default());
        assert!(!r.manifold);
        assert!(r.virtual_betti && r.diagonals);
        assert_eq!(r.compact_nonsingular, None);
    }

    #[test]
    fn profile_vs_beta() {
        let profile = arr(&[&[1], &[0, 1], &[2, 3, 3]]);
        let v = mv_profile_vs_virtual_betti(&profile, &[4, -1, 3]);
        assert!(!v.holds());
        assert_eq!(v.failing_rows(), vec![0, 1]);
        assert_eq!(v.rows[0].alternating_sum, 3);

        let d = WeightArray::diagonal(&[2, 0, 2]);
        assert!(mv_profile_vs_virtual_betti(&d, &[2, 0, 2]).holds());
    }

    #[test]
    fn parse_constraint_forms() {
        let c: LinearConstraint = "2*w20 - w[2,1] + 1 <= w00".parse().unwrap();
        assert_eq!(c.relation, Relation::Le);
        assert_eq!(c.constant, 1);
        assert_eq!(c.coeffs, BTreeMap::from([((2, 0), 2), ((2, 1), -1), ((0, 0), -1)]));
        let c: LinearConstraint = "3w11 > 2".parse().unwrap();
        assert_eq!(c.relation, Relation::Gt);
        assert_eq!(c.coeffs[&(1, 1)], 3);
        for bad in ["w21", "w21 >= ", "x >= 1", "w2 >= 1", "w21 >= 1 >= 0", "w[2;1] = 0", "w21 >= 1 +"] {
            assert!(
                matches!(bad.parse::<LinearConstraint>(), Err(WeightError::MalformedConstraint { .. })),
                "{bad}"
            );
        }
        let c: LinearConstraint = "w32 >= 0".parse().unwrap();
        let w = WeightArray::zeros(3);
        assert!(constraint_filter(&[w], &[c]).is_err());
    }

    #[test]
    fn triangular_display() {
        let w = arr(&[&[1], &[0, 1], &[3, 2, 3]]);
        assert_eq!(w.to_string(), "3\n1 2\n1 0 3");
        assert_eq!(w.inline(), "w00=1 w10=0 w11=1 w20=3 w21=2 w22=3");
    }
}
