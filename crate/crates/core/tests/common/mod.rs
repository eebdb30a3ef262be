//! Brute-force oracles and generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use vbetti_core::fixtures::builtin_scene;
use vbetti_core::scene::Scene;
use vbetti_core::scissor::{AtomRegistry, ScissorExpr};
use vbetti_core::strata::EngineOptions;
use vbetti_core::weights::{WeightArray, WeightSystemInput};
use vbetti_core::{BitVec, Gf2Matrix, Gf2Subspace};

/// The built-in scene, built once per test binary.
pub fn scene() -> &'static Scene {
    static SCENE: OnceLock<Scene> = OnceLock::new();
    SCENE.get_or_init(|| builtin_scene(EngineOptions::default()))
}

// GF(2)

/// Dense matrices up to 8x8.
pub fn small_matrix() -> impl Strategy<Value = Gf2Matrix> {
    (0usize..=8, 0usize..=8).prop_flat_map(|(r, c)| {
        prop::collection::vec(0u8..=1, r * c)
            .prop_map(move |bits| Gf2Matrix::from_dense(r, c, &bits).expect("sized"))
    })
}

pub fn to_mask(v: &BitVec) -> u64 {
    v.ones().fold(0, |m, i| m | (1 << i))
}

pub fn from_mask(len: usize, m: u64) -> BitVec {
    BitVec::from_indices(len, (0..len).filter(|&i| m >> i & 1 == 1))
}

/// Every vector `Ax`, as bit masks.
pub fn all_images(a: &Gf2Matrix) -> Vec<u64> {
    (0..1u64 << a.cols())
        .map(|x| to_mask(&a.mul_vec(&from_mask(a.cols(), x))))
        .collect()
}

pub fn log2_exact(n: usize) -> usize {
    assert!(n.is_power_of_two(), "{n} is not a power of two");
    n.trailing_zeros() as usize
}

/// Rank as `log2 |image|`.
pub fn brute_rank(a: &Gf2Matrix) -> usize {
    log2_exact(all_images(a).into_iter().collect::<BTreeSet<_>>().len())
}

/// Nullity as `log2 |{x : Ax = 0}|`.
pub fn brute_nullity(a: &Gf2Matrix) -> usize {
    log2_exact(all_images(a).into_iter().filter(|&y| y == 0).count())
}

/// All elements of the span, as masks.
pub fn span_elements(vs: &[BitVec]) -> BTreeSet<u64> {
    let masks: Vec<u64> = vs.iter().map(to_mask).collect();
    (0..1u64 << masks.len())
        .map(|sel| {
            masks
                .iter()
                .enumerate()
                .filter(|(i, _)| sel >> i & 1 == 1)
                .fold(0, |acc, (_, m)| acc ^ m)
        })
        .collect()
}

pub fn rows_of(a: &Gf2Matrix) -> Vec<BitVec> {
    (0..a.rows()).map(|r| a.row(r).clone()).collect()
}

pub fn subspace_of_rows(a: &Gf2Matrix) -> Gf2Subspace {
    Gf2Subspace::span(a.cols(), rows_of(a))
}

// scissor expressions

/// Atoms of the built-in scene whose `chi_c` comes from a model, not from `β`.
pub const MODEL_ATOMS: &[&str] = &[
    "point",
    "two-points",
    "circle",
    "circle-minus-point",
    "sphere-2",
    "rp2",
    "rp2-minus-point",
    "torus",
    "affine-1",
    "affine-2",
    "empty",
    "figure-eight-x",
];

pub fn expression(depth: u32) -> impl Strategy<Value = ScissorExpr> {
    let leaf = prop_oneof![
        9 => prop::sample::select(MODEL_ATOMS).prop_map(ScissorExpr::atom),
        1 => Just(ScissorExpr::Empty),
    ];
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ScissorExpr::union(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ScissorExpr::product(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ScissorExpr::difference(a, b)),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(bl, e, c)| ScissorExpr::blowup(bl, e, c, None)),
        ]
    })
}

/// `β(e)` evaluated at the integer `t`, by integer arithmetic on atom values.
/// Evaluation at a point is a ring map, so this must agree with evaluating
/// the polynomial.
pub fn eval_at(e: &ScissorExpr, reg: &AtomRegistry, t: i64) -> i64 {
    match e {
        ScissorExpr::Atom { name } => {
            let b = &reg.get(name).expect("known atom").beta;
            b.coeffs().iter().rev().fold(0, |acc, &c| acc * t + c)
        }
        ScissorExpr::Union { left, right } => eval_at(left, reg, t) + eval_at(right, reg, t),
        ScissorExpr::Product { left, right } => eval_at(left, reg, t) * eval_at(right, reg, t),
        ScissorExpr::Difference { total, closed_sub } => {
            eval_at(total, reg, t) - eval_at(closed_sub, reg, t)
        }
        ScissorExpr::Blowup {
            blowup_total,
            exceptional,
            center,
            ..
        } => eval_at(blowup_total, reg, t) - eval_at(exceptional, reg, t) + eval_at(center, reg, t),
        ScissorExpr::Empty => 0,
    }
}

/// `χ_c(e)` from the atoms' model-derived `chi_c` values.
pub fn chi_c_oracle(e: &ScissorExpr, reg: &AtomRegistry) -> i64 {
    match e {
        ScissorExpr::Atom { name } => reg.get(name).expect("known atom").chi_c,
        ScissorExpr::Union { left, right } => chi_c_oracle(left, reg) + chi_c_oracle(right, reg),
        ScissorExpr::Product { left, right } => chi_c_oracle(left, reg) * chi_c_oracle(right, reg),
        ScissorExpr::Difference { total, closed_sub } => {
            chi_c_oracle(total, reg) - chi_c_oracle(closed_sub, reg)
        }
        ScissorExpr::Blowup {
            blowup_total,
            exceptional,
            center,
            ..
        } => chi_c_oracle(blowup_total, reg) - chi_c_oracle(exceptional, reg) + chi_c_oracle(center, reg),
        ScissorExpr::Empty => 0,
    }
}

// weight system

/// Every array with `0 <= w(i,j) <= b_i` satisfying the system, by plain
/// enumeration of the full box.
pub fn brute_weight_solutions(input: &WeightSystemInput) -> Vec<WeightArray> {
    let n = input.b.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut w = WeightArray::zeros(n);
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        input: &WeightSystemInput,
        w: &mut WeightArray,
        out: &mut Vec<WeightArray>,
    ) {
        if k == cells.len() {
            let n = input.b.len();
            let diag_ok = (0..n).all(|i| (0..=i).map(|j| w.get(i, j)).sum::<usize>() == input.b[i]);
            let rows_ok = (0..n).all(|j| {
                let s: i64 = (j..n)
                    .map(|i| if i % 2 == 0 { w.get(i, j) as i64 } else { -(w.get(i, j) as i64) })
                    .sum();
                let signed = if j % 2 == 0 { s } else { -s };
                signed == input.beta[j]
            });
            if diag_ok && rows_ok {
                out.push(w.clone());
            }
            return;
        }
        let (i, j) = cells[k];
        for v in 0..=input.b[i] {
            w.set(i, j, v);
            go(k + 1, cells, input, w, out);
        }
        w.set(i, j, 0);
    }
    go(0, &cells, input, &mut w, &mut out);
    out.sort();
    out
}

/// Small systems, half of them built from an actual array so they are feasible.
pub fn weight_input() -> impl Strategy<Value = WeightSystemInput> {
    let random = (1usize..=3)
        .prop_flat_map(|n| (prop::collection::vec(0usize..=3, n), prop::collection::vec(-4i64..=4, n)))
        .prop_map(|(b, beta)| WeightSystemInput::new(b, beta).expect("same length"));
    let feasible = (1usize..=3)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0usize..=2, n), n))
        .prop_map(|grid| {
            let n = grid.len();
            let rows: Vec<Vec<usize>> = (0..n).map(|i| grid[i][..=i].to_vec()).collect();
            let w = WeightArray::from_rows(rows).expect("triangular");
            let b = (0..n).map(|i| w.diagonal_sum(i)).collect();
            let beta = (0..n).map(|j| w.row_alternating(j)).collect();
            WeightSystemInput::new(b, beta).expect("same length")
        });
    prop_oneof![random, feasible]
}
