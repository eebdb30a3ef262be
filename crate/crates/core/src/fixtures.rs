//! Built-in models, the builtin scene, and the named example suite.
//!
//! Every model here is a concrete simplicial complex; nothing is declared by
//! hand. The two-spheres-and-torus surface is built as the barycentric
//! subdivision of a regular CW structure: four triple points `p, q, r, s`,
//! twelve arcs on the three double curves `C12, C13, C23` (each meeting the
//! triple points in the cyclic order `p, r, s, q`), two extra edges on the
//! torus, and eighteen 2-cells.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::error::Error;
use std::fmt;

use crate::mvss::{mv_report, row_alternating_sums, Arrangement};
use crate::polynomial::IntPolynomial;
use crate::scene::{
    ArrangementSpec, AtomSpec, BetaSection, BoundarySpec, ComplexRef, ComplexSpec, CoverSpec,
    CoverTerm, PairRef, PairSpec, PieceSpec, Scene, SceneFile, StratificationSpec,
    StratumModelSpec, StratumSpec, WeightInputSpec,
};
use crate::scissor::{check_blowup_relation, degree_law, evaluate_beta, ScissorExpr};
use crate::simplicial::{
    betti_compact_supports, betti_mod2, disjoint_union, euler_compact_supports_combinatorial,
    product_complex, PairSpace, SimplicialComplex, SimplicialMap, Subcomplex,
};
use crate::strata::{beta_of_stratified, refinement_check, EngineOptions};
use crate::weights::{
    check_conditions, constraint_filter, mv_profile_vs_virtual_betti, solve_weight_system,
    ConditionFlags, WeightArray, WeightSystemInput,
};

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Polygon on the given vertices, in order.
pub fn cycle(names: &[&str]) -> SimplicialComplex {
    SimplicialComplex::from_maximal(names, &cycle_edges(names)).expect("valid polygon")
}

fn cycle_edges(names: &[&str]) -> Vec<Vec<String>> {
    (0..names.len())
        .map(|i| strings(&[names[i], names[(i + 1) % names.len()]]))
        .collect()
}

/// A finite set of points.
pub fn points(names: &[&str]) -> SimplicialComplex {
    let simplices: Vec<Vec<&str>> = names.iter().map(|n| vec![*n]).collect();
    SimplicialComplex::from_maximal(names, &simplices).expect("distinct points")
}

/// Boundary of the `(n+1)`-dimensional cross-polytope, a triangulated `S^n`
/// with vertices `+i`, `-i` for `i = 0..=n`.
pub fn octahedral_sphere(n: usize) -> SimplicialComplex {
    let vertices: Vec<String> = (0..=n).flat_map(|i| [format!("+{i}"), format!("-{i}")]).collect();
    SimplicialComplex::from_maximal(&vertices, &sign_choices(n + 1)).expect("cross-polytope")
}

/// Maximal simplices of the sphere on the first `axes` axes, i.e. the
/// equator `S^{axes-1}` inside any larger cross-polytope sphere.
pub fn octahedral_equator(axes: usize) -> Vec<Vec<String>> {
    sign_choices(axes)
}

fn sign_choices(axes: usize) -> Vec<Vec<String>> {
    if axes == 0 {
        return Vec::new();
    }
    (0..1u32 << axes)
        .map(|mask| {
            (0..axes)
                .map(|i| format!("{}{i}", if mask >> i & 1 == 0 { '+' } else { '-' }))
                .collect()
        })
        .collect()
}

/// The six-vertex real projective plane.
pub fn rp2() -> SimplicialComplex {
    let faces = [
        ["1", "2", "4"],
        ["1", "2", "6"],
        ["1", "3", "5"],
        ["1", "3", "6"],
        ["1", "4", "5"],
        ["2", "3", "4"],
        ["2", "3", "5"],
        ["2", "5", "6"],
        ["3", "4", "6"],
        ["4", "5", "6"],
    ];
    let faces: Vec<Vec<&str>> = faces.iter().map(|f| f.to_vec()).collect();
    SimplicialComplex::from_maximal(&["1", "2", "3", "4", "5", "6"], &faces).expect("RP2")
}

/// Product of two triangles' boundaries.
pub fn torus() -> SimplicialComplex {
    product_complex(&cycle(&["a0", "a1", "a2"]), &cycle(&["b0", "b1", "b2"])).expect("small")
}

/// Copy of `k` with every vertex name prefixed.
pub fn prefixed(k: &SimplicialComplex, prefix: &str) -> SimplicialComplex {
    let vertices: Vec<String> = k.vertices().iter().map(|v| format!("{prefix}{v}")).collect();
    let maximal: Vec<Vec<String>> = k
        .maximal_simplices()
        .iter()
        .map(|s| k.names(s).iter().map(|v| format!("{prefix}{v}")).collect())
        .collect();
    SimplicialComplex::from_maximal(&vertices, &maximal).expect("renaming keeps validity")
}

fn disjoint_all(parts: &[SimplicialComplex]) -> SimplicialComplex {
    parts
        .iter()
        .fold(SimplicialComplex::empty(), |acc, k| disjoint_union(&acc, k))
}

/// Order complex of a regular CW complex given by cells and their
/// codimension-one faces. Vertices of the result are the cell names.
fn cw_subdivision(cells: &[(String, Vec<String>)]) -> SimplicialComplex {
    let index: HashMap<&str, usize> = cells
        .iter()
        .enumerate()
        .map(|(i, (n, _))| (n.as_str(), i))
        .collect();
    fn descend(
        i: usize,
        cells: &[(String, Vec<String>)],
        index: &HashMap<&str, usize>,
        chain: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) {
        chain.push(cells[i].0.clone());
        if cells[i].1.is_empty() {
            out.push(chain.clone());
        }
        for b in &cells[i].1 {
            descend(index[b.as_str()], cells, index, chain, out);
        }
        chain.pop();
    }
    let mut chains = Vec::new();
    for i in 0..cells.len() {
        descend(i, cells, &index, &mut Vec::new(), &mut chains);
    }
    let vertices: Vec<&str> = cells.iter().map(|(n, _)| n.as_str()).collect();
    SimplicialComplex::from_maximal(&vertices, &chains).expect("regular CW complex")
}

const TRIPLE: [&str; 4] = ["p", "q", "r", "s"];
/// Arcs of every double curve, in the cyclic order p, r, s, q.
const ARCS: [(&str, &str); 4] = [("p", "r"), ("r", "s"), ("s", "q"), ("q", "p")];

fn arc(curve: &str, a: &str, b: &str) -> String {
    format!("e{curve}_{a}{b}")
}

/// Six 2-cells of a sphere cut by two double curves `a`, `b` crossing at
/// the four triple points: four bigons and two quadrilaterals.
fn sphere_faces(tag: &str, a: &str, b: &str) -> Vec<(String, Vec<String>)> {
    let f = |name: &str, vs: &[&str], es: Vec<String>| {
        let mut boundary = strings(vs);
        boundary.extend(es);
        (format!("{tag}_{name}"), boundary)
    };
    vec![
        f("rs", &["r", "s"], vec![arc(a, "r", "s"), arc(b, "r", "s")]),
        f("qp", &["q", "p"], vec![arc(a, "q", "p"), arc(b, "q", "p")]),
        f("pr", &["p", "r"], vec![arc(a, "p", "r"), arc(b, "p", "r")]),
        f("sq", &["s", "q"], vec![arc(a, "s", "q"), arc(b, "s", "q")]),
        f("quad1", &TRIPLE, vec![arc(a, "p", "r"), arc(b, "r", "s"), arc(a, "s", "q"), arc(b, "q", "p")]),
        f("quad2", &TRIPLE, vec![arc(b, "p", "r"), arc(a, "r", "s"), arc(b, "s", "q"), arc(a, "q", "p")]),
    ]
}

/// Cells of the surface and the cell names of each piece.
pub fn surface_443_cells() -> (Vec<(String, Vec<String>)>, [BTreeSet<String>; 3]) {
    let mut cells: Vec<(String, Vec<String>)> = TRIPLE.iter().map(|v| (v.to_string(), Vec::new())).collect();
    for curve in ["12", "13", "23"] {
        for (a, b) in ARCS {
            cells.push((arc(curve, a, b), strings(&[a, b])));
        }
    }
    cells.push(("long_pq".into(), strings(&["p", "q"])));
    cells.push(("long_rs".into(), strings(&["r", "s"])));
    let x1 = sphere_faces("x1", "12", "13");
    let x2 = sphere_faces("x2", "12", "23");
    let t = |name: &str, es: Vec<String>| {
        let mut boundary = strings(&TRIPLE);
        boundary.extend(es);
        (format!("x3_{name}"), boundary)
    };
    let x3 = vec![
        (
            "x3_inner".to_string(),
            [strings(&["p", "q"]), vec![arc("13", "q", "p"), arc("23", "q", "p")]].concat(),
        ),
        (
            "x3_outer".to_string(),
            [strings(&["r", "s"]), vec![arc("13", "r", "s"), arc("23", "r", "s")]].concat(),
        ),
        t("d1", vec![arc("13", "p", "r"), arc("23", "r", "s"), arc("13", "s", "q"), arc("23", "q", "p")]),
        t("d2", vec![arc("23", "p", "r"), arc("13", "r", "s"), arc("23", "s", "q"), arc("13", "q", "p")]),
        t("annulus_east", vec![arc("13", "p", "r"), "long_rs".into(), arc("13", "s", "q"), "long_pq".into()]),
        t("annulus_west", vec![arc("23", "p", "r"), "long_rs".into(), arc("23", "s", "q"), "long_pq".into()]),
    ];
    let mut pieces: [BTreeSet<String>; 3] = Default::default();
    for (i, faces) in [&x1, &x2, &x3].into_iter().enumerate() {
        for (name, boundary) in faces {
            pieces[i].insert(name.clone());
            pieces[i].extend(boundary.iter().cloned());
        }
    }
    cells.extend(x1);
    cells.extend(x2);
    cells.extend(x3);
    (cells, pieces)
}

/// Two spheres and a torus, pairwise meeting in circles through four
/// common points.
pub fn surface_443() -> Arrangement {
    let (cells, pieces) = surface_443_cells();
    let total = cw_subdivision(&cells);
    let subs = ["X1", "X2", "X3"]
        .iter()
        .zip(&pieces)
        .map(|(n, cellset)| (n.to_string(), induced_on(&total, |v| cellset.contains(v))))
        .collect();
    Arrangement::new(total, subs).expect("pieces cover the surface")
}

fn induced_on(k: &SimplicialComplex, keep: impl Fn(&str) -> bool) -> Subcomplex {
    Subcomplex::induced(k, |i| keep(&k.vertices()[i]))
}

/// Cells on the double curve `Cij` (its arcs and the triple points).
fn curve_cells(curve: &str) -> BTreeSet<String> {
    ARCS.iter()
        .map(|(a, b)| arc(curve, a, b))
        .chain(TRIPLE.iter().map(|v| v.to_string()))
        .collect()
}

/// The curve with two components tangent at two points, its resolution
/// (two disjoint circles), and the circle it projects to.
pub struct TangentCircles {
    pub curve: SimplicialComplex,
    pub resolution: SimplicialComplex,
    pub base: SimplicialComplex,
}

impl TangentCircles {
    pub fn new() -> Self {
        let a = ["u", "a1", "v", "a2"];
        let b = ["u", "b1", "v", "b2"];
        let mut edges = cycle_edges(&a);
        edges.extend(cycle_edges(&b));
        let curve = SimplicialComplex::from_maximal(&["u", "v", "a1", "a2", "b1", "b2"], &edges).expect("curve");
        let resolution = disjoint_union(&prefixed(&cycle(&a), "A."), &prefixed(&cycle(&b), "B."));
        let base = cycle(&["u", "c1", "v", "c2"]);
        TangentCircles {
            curve,
            resolution,
            base,
        }
    }

    /// Vertex map of the projection to the base circle. Each component
    /// folds onto one half of the base.
    pub fn projection_pairs() -> Vec<(String, String)> {
        [("u", "u"), ("v", "v"), ("a1", "c1"), ("a2", "c1"), ("b1", "c2"), ("b2", "c2")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    /// Vertex map of the resolution, including each component.
    pub fn resolution_pairs() -> Vec<(String, String)> {
        ["A.", "B."]
            .iter()
            .flat_map(|pre| {
                let side = if *pre == "A." { ["a1", "a2"] } else { ["b1", "b2"] };
                ["u", "v", side[0], side[1]]
                    .into_iter()
                    .map(move |v| (format!("{pre}{v}"), v.to_string()))
            })
            .collect()
    }
}

impl Default for TangentCircles {
    fn default() -> Self {
        Self::new()
    }
}

// ---------------------------------------------------------------------------
// builtin scene

struct Builder {
    file: SceneFile,
}

impl Builder {
    fn complex(&mut self, name: &str, k: &SimplicialComplex) {
        self.file.complexes.insert(name.into(), ComplexSpec::from_complex(k));
    }

    fn pair(&mut self, name: &str, total: &str, boundary: Vec<Vec<String>>) {
        self.file.pairs.insert(
            name.into(),
            PairSpec {
                total: ComplexRef::Named(total.into()),
                boundary,
            },
        );
    }

    fn model_atom(&mut self, name: &str, complex: &str) {
        self.file.atoms.insert(
            name.into(),
            AtomSpec {
                model: Some(ComplexRef::Named(complex.into())),
                ..Default::default()
            },
        );
    }

    fn pair_atom(&mut self, name: &str, pair: &str) {
        self.file.atoms.insert(
            name.into(),
            AtomSpec {
                pair: Some(PairRef::Named(pair.into())),
                ..Default::default()
            },
        );
    }

    fn strat_atom(&mut self, name: &str, strat: &str) {
        self.file.atoms.insert(
            name.into(),
            AtomSpec {
                stratification: Some(strat.into()),
                ..Default::default()
            },
        );
    }

    fn expr(&mut self, name: &str, e: ScissorExpr) {
        self.file.expressions.insert(name.into(), e);
    }

    fn strat(&mut self, name: &str, strata: Vec<StratumSpec>, frontier: &[(&str, &[&str])]) {
        self.file.stratifications.insert(
            name.into(),
            StratificationSpec {
                strata,
                frontier: frontier
                    .iter()
                    .map(|(s, f)| (s.to_string(), f.iter().map(|x| x.to_string()).collect()))
                    .collect(),
            },
        );
    }

    fn arrangement(&mut self, name: &str, total: &str, a: &Arrangement) {
        let pieces = a
            .names()
            .iter()
            .zip(a.pieces())
            .map(|(n, p)| PieceSpec {
                name: n.clone(),
                simplices: p.maximal_names(a.total()),
            })
            .collect();
        self.file.arrangements.insert(
            name.into(),
            ArrangementSpec {
                total: ComplexRef::Named(total.into()),
                pieces,
            },
        );
    }

    fn weights(&mut self, name: &str, b: &[usize], beta: &[i64], constraints: &[&str]) {
        self.file.weight_inputs.insert(
            name.into(),
            WeightInputSpec {
                b: b.to_vec(),
                beta: beta.to_vec(),
                constraints: strings(constraints),
            },
        );
    }
}

fn compact_stratum(name: &str, dim: usize, complex: &str) -> StratumSpec {
    StratumSpec {
        name: name.into(),
        dim,
        model: StratumModelSpec {
            compact: Some(ComplexRef::Named(complex.into())),
            ..Default::default()
        },
    }
}

fn open_stratum(name: &str, dim: usize, pair: &str, boundary: BoundarySpec) -> StratumSpec {
    StratumSpec {
        name: name.into(),
        dim,
        model: StratumModelSpec {
            open: Some(PairRef::Named(pair.into())),
            boundary: Some(boundary),
            ..Default::default()
        },
    }
}

fn cn() -> BoundarySpec {
    BoundarySpec {
        compact_nonsingular: true,
        stratification: None,
    }
}

fn stratified(name: &str) -> BoundarySpec {
    BoundarySpec {
        compact_nonsingular: false,
        stratification: Some(name.into()),
    }
}

fn atom(n: &str) -> ScissorExpr {
    ScissorExpr::atom(n)
}

fn atom_term(n: &str) -> CoverTerm {
    CoverTerm {
        atom: Some(n.into()),
        beta: None,
    }
}

fn point_set(names: &[String]) -> Vec<Vec<String>> {
    names.iter().map(|n| vec![n.clone()]).collect()
}

/// The scene behind the CLI defaults and the example suite.
pub fn builtin_scene_file() -> SceneFile {
    let mut b = Builder {
        file: SceneFile::default(),
    };

    // small spaces
    b.complex("empty", &SimplicialComplex::empty());
    b.complex("point", &points(&["o"]));
    b.complex("two-points", &points(&["u", "v"]));
    b.complex("four-points", &points(&["p1", "p2", "p3", "p4"]));
    b.complex("circle", &cycle(&["c0", "c1", "c2"]));
    b.complex("torus", &torus());
    b.complex("rp2", &rp2());
    b.complex("rp1", &cycle(&["1", "2", "3"]));
    for n in 1..=4 {
        b.complex(&format!("sphere-{n}"), &octahedral_sphere(n));
    }
    b.complex(
        "circle-and-sphere",
        &disjoint_union(&cycle(&["c0", "c1", "c2"]), &octahedral_sphere(2)),
    );
    let wedge = SimplicialComplex::from_maximal(
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
    .expect("wedge");
    b.complex("figure-eight", &wedge);

    b.pair("circle-minus-point", "circle", vec![strings(&["c0"])]);
    b.pair("circle-minus-two-points", "circle", vec![strings(&["c0"]), strings(&["c1"])]);
    b.pair("rp2-minus-point", "rp2", vec![strings(&["1"])]);
    for n in 0..=3 {
        let k = n + 1;
        b.pair(&format!("sphere-{k}-minus-sphere-{n}"), &format!("sphere-{k}"), octahedral_equator(n + 1));
        b.pair(&format!("affine-{k}"), &format!("sphere-{k}"), vec![strings(&["+0"])]);
    }

    for name in [
        "empty", "point", "two-points", "four-points", "circle", "torus", "rp2", "rp1", "circle-and-sphere",
    ] {
        b.model_atom(name, name);
    }
    b.model_atom("ellipse", "circle");
    for n in 1..=4 {
        b.model_atom(&format!("sphere-{n}"), &format!("sphere-{n}"));
    }
    b.pair_atom("circle-minus-point", "circle-minus-point");
    b.pair_atom("rp2-minus-point", "rp2-minus-point");
    for k in 1..=4 {
        b.pair_atom(&format!("affine-{k}"), &format!("affine-{k}"));
    }
    b.strat_atom("figure-eight-x", "figure-eight-x");

    b.expr(
        "ellipses",
        ScissorExpr::difference(ScissorExpr::union(atom("ellipse"), atom("ellipse")), atom("four-points")),
    );
    b.expr(
        "figure-eight-x",
        ScissorExpr::blowup(atom("circle"), atom("two-points"), atom("point"), None),
    );
    b.expr(
        "figure-eight-y",
        ScissorExpr::difference(ScissorExpr::union(atom("circle"), atom("circle")), atom("point")),
    );
    b.expr("circle-minus-point", ScissorExpr::difference(atom("circle"), atom("point")));
    b.expr("empty", ScissorExpr::Empty);
    b.expr("torus-product", ScissorExpr::product(atom("circle"), atom("circle")));
    b.expr(
        "blowup-rp2",
        ScissorExpr::blowup(atom("rp2"), atom("rp1"), atom("point"), Some(atom("sphere-2"))),
    );
    b.expr(
        "blowup-plane",
        ScissorExpr::blowup(atom("rp2-minus-point"), atom("rp1"), atom("point"), Some(atom("affine-2"))),
    );
    b.expr(
        "blowup-empty-center",
        ScissorExpr::blowup(atom("torus"), atom("empty"), atom("empty"), Some(atom("torus"))),
    );
    b.expr(
        "blowup-component",
        ScissorExpr::blowup(atom("circle"), atom("empty"), atom("sphere-2"), Some(atom("circle-and-sphere"))),
    );

    b.strat(
        "figure-eight-x",
        vec![
            open_stratum("smooth", 1, "circle-minus-two-points", cn()),
            compact_stratum("node", 0, "point"),
        ],
        &[("smooth", &["node"])],
    );
    for n in 0..=3 {
        let name = format!("sphere-{}-minus-sphere-{n}", n + 1);
        b.strat(&name, vec![open_stratum("open", n + 1, &name, cn())], &[]);
    }

    b.covers_ellipses();
    b.surface_443();
    b.tangent_circles();

    let t = torus();
    b.arrangement(
        "torus",
        "torus",
        &Arrangement::new(t.clone(), vec![("T".into(), Subcomplex::full(&t))]).expect("single piece"),
    );
    let two = disjoint_union(&octahedral_sphere(2), &octahedral_sphere(2));
    b.complex("two-spheres", &two);
    let halves = ["L.", "R."]
        .iter()
        .map(|pre| (pre.trim_end_matches('.').to_string(), induced_on(&two, |v| v.starts_with(pre))))
        .collect();
    b.arrangement("two-spheres", "two-spheres", &Arrangement::new(two, halves).expect("cover"));
    let ell = ellipses_complex();
    b.complex("ellipses", &ell);
    let ell_arr = Arrangement::new(
        ell.clone(),
        ["a", "b"]
            .iter()
            .map(|c| (format!("X{}", if *c == "a" { 1 } else { 2 }), induced_on(&ell, |v| v.starts_with('p') || v.starts_with(c))))
            .collect(),
    )
    .expect("ellipses cover");
    b.arrangement("ellipses", "ellipses", &ell_arr);

    b.weights("torus", &[1, 2, 1], &[1, 2, 1], &[]);
    b.file
}

/// Two circles (eight vertices each) crossing at `p1..p4`.
fn ellipses_complex() -> SimplicialComplex {
    let a = ["p1", "a1", "p2", "a2", "p3", "a3", "p4", "a4"];
    let bb = ["p1", "b1", "p2", "b2", "p3", "b3", "p4", "b4"];
    let mut edges = cycle_edges(&a);
    edges.extend(cycle_edges(&bb));
    let vertices: BTreeSet<&str> = a.iter().chain(bb.iter()).copied().collect();
    let vertices: Vec<&str> = vertices.into_iter().collect();
    SimplicialComplex::from_maximal(&vertices, &edges).expect("ellipses")
}

impl Builder {
    fn covers_ellipses(&mut self) {
        self.file.covers.insert(
            "ellipses".into(),
            CoverSpec {
                pieces: BTreeMap::from([("X1".into(), atom_term("ellipse")), ("X2".into(), atom_term("ellipse"))]),
                intersections: BTreeMap::from([("X1&X2".into(), atom_term("four-points"))]),
            },
        );
    }

    fn surface_443(&mut self) {
        let a = surface_443();
        let total = a.total().clone();
        self.complex("surface-443", &total);
        self.arrangement("surface-443", "surface-443", &a);

        let piece_names = ["x1", "x2", "x3"];
        let curves = ["12", "13", "23"];
        // curves lying on each piece
        let on_piece: [[&str; 2]; 3] = [["12", "13"], ["12", "23"], ["13", "23"]];
        let triple: Vec<String> = strings(&TRIPLE);

        let pieces: Vec<SimplicialComplex> = (0..3).map(|i| a.intersection(&[i]).to_complex(&total)).collect();
        for (i, k) in pieces.iter().enumerate() {
            self.complex(&format!("surface-443-{}", piece_names[i]), k);
            self.model_atom(&format!("surface-443-{}", piece_names[i]), &format!("surface-443-{}", piece_names[i]));
        }
        let circles: Vec<SimplicialComplex> = curves
            .iter()
            .map(|c| {
                let cells = curve_cells(c);
                induced_on(&total, |v| cells.contains(v)).to_complex(&total)
            })
            .collect();
        for (c, k) in curves.iter().zip(&circles) {
            let name = format!("surface-443-c{c}");
            self.complex(&name, k);
            self.model_atom(&name, &name);
            self.pair(&format!("{name}-open"), &name, point_set(&triple));
        }
        self.complex("surface-443-p", &points(&TRIPLE));
        self.model_atom("surface-443-p", "surface-443-p");

        // cover by the three pieces, every intersection a model
        let mut intersections = BTreeMap::new();
        for (i, j, c) in [(0, 1, "12"), (0, 2, "13"), (1, 2, "23")] {
            intersections.insert(
                format!("X{}&X{}", i + 1, j + 1),
                atom_term(&format!("surface-443-c{c}")),
            );
        }
        intersections.insert("X1&X2&X3".into(), atom_term("surface-443-p"));
        self.file.covers.insert(
            "surface-443".into(),
            CoverSpec {
                pieces: (0..3)
                    .map(|i| (format!("X{}", i + 1), atom_term(&format!("surface-443-{}", piece_names[i]))))
                    .collect(),
                intersections,
            },
        );

        // fine stratification: each piece minus its curves, each curve minus
        // the triple points, and the triple points
        for (i, pn) in piece_names.iter().enumerate() {
            let cells: BTreeSet<String> = on_piece[i].iter().flat_map(|c| curve_cells(c)).collect();
            let k = &pieces[i];
            let boundary = induced_on(k, |v| cells.contains(v)).maximal_names(k);
            let pair = format!("surface-443-{pn}-open");
            self.pair(&pair, &format!("surface-443-{pn}"), boundary);
            let bname = format!("surface-443-{pn}-curves");
            let [c1, c2] = on_piece[i];
            self.strat(
                &bname,
                vec![
                    open_stratum(&format!("c{c1}-arcs"), 1, &format!("surface-443-c{c1}-open"), cn()),
                    open_stratum(&format!("c{c2}-arcs"), 1, &format!("surface-443-c{c2}-open"), cn()),
                    compact_stratum("triple", 0, "surface-443-p"),
                ],
                &[(&format!("c{c1}-arcs"), &["triple"]), (&format!("c{c2}-arcs"), &["triple"])],
            );
        }
        let mut fine = Vec::new();
        for pn in piece_names {
            fine.push(open_stratum(
                &format!("{pn}-open"),
                2,
                &format!("surface-443-{pn}-open"),
                stratified(&format!("surface-443-{pn}-curves")),
            ));
        }
        for c in curves {
            fine.push(open_stratum(&format!("c{c}-arcs"), 1, &format!("surface-443-c{c}-open"), cn()));
        }
        fine.push(compact_stratum("triple", 0, "surface-443-p"));
        self.strat(
            "surface-443-fine",
            fine,
            &[
                ("x1-open", &["c12-arcs", "c13-arcs", "triple"]),
                ("x2-open", &["c12-arcs", "c23-arcs", "triple"]),
                ("x3-open", &["c13-arcs", "c23-arcs", "triple"]),
                ("c12-arcs", &["triple"]),
                ("c13-arcs", &["triple"]),
                ("c23-arcs", &["triple"]),
            ],
        );

        // coarse stratification: smooth locus, double curves minus triple
        // points, triple points
        let disjoint_pieces = disjoint_all(
            &pieces
                .iter()
                .zip(piece_names)
                .map(|(k, pn)| prefixed(k, &format!("{pn}:")))
                .collect::<Vec<_>>(),
        );
        self.complex("surface-443-pieces", &disjoint_pieces);
        let preimage: Vec<BTreeSet<String>> = (0..3)
            .map(|i| on_piece[i].iter().flat_map(|c| curve_cells(c)).map(|v| format!("{}:{v}", piece_names[i])).collect())
            .collect();
        let pre_boundary = induced_on(&disjoint_pieces, |v| preimage.iter().any(|s| s.contains(v)))
            .maximal_names(&disjoint_pieces);
        self.pair("surface-443-smooth", "surface-443-pieces", pre_boundary);

        // normalisation of the preimage: six disjoint circles, marked at 24 points
        let mut six = Vec::new();
        let mut marks = Vec::new();
        for (i, pn) in piece_names.iter().enumerate() {
            for c in on_piece[i] {
                let pre = format!("{pn}:c{c}:");
                six.push(prefixed(&circles[curves.iter().position(|x| *x == c).expect("curve")], &pre));
                marks.extend(TRIPLE.iter().map(|v| format!("{pre}{v}")));
            }
        }
        self.complex("surface-443-preimage-circles", &disjoint_all(&six));
        self.pair("surface-443-preimage-arcs", "surface-443-preimage-circles", point_set(&marks));
        let marked: Vec<String> = piece_names
            .iter()
            .flat_map(|pn| TRIPLE.iter().map(move |v| format!("{pn}:{v}")))
            .collect();
        let marked_refs: Vec<&str> = marked.iter().map(String::as_str).collect();
        self.complex("surface-443-preimage-points", &points(&marked_refs));
        self.strat(
            "surface-443-preimage",
            vec![
                open_stratum("arcs", 1, "surface-443-preimage-arcs", cn()),
                compact_stratum("points", 0, "surface-443-preimage-points"),
            ],
            &[("arcs", &["points"])],
        );

        let sigma = disjoint_all(
            &curves
                .iter()
                .zip(&circles)
                .map(|(c, k)| prefixed(k, &format!("c{c}:")))
                .collect::<Vec<_>>(),
        );
        self.complex("surface-443-curves", &sigma);
        let sigma_marks: Vec<String> = curves
            .iter()
            .flat_map(|c| TRIPLE.iter().map(move |v| format!("c{c}:{v}")))
            .collect();
        self.pair("surface-443-curves-open", "surface-443-curves", point_set(&sigma_marks));
        self.strat(
            "surface-443",
            vec![
                open_stratum("smooth", 2, "surface-443-smooth", stratified("surface-443-preimage")),
                open_stratum("double", 1, "surface-443-curves-open", cn()),
                compact_stratum("triple", 0, "surface-443-p"),
            ],
            &[("smooth", &["double", "triple"]), ("double", &["triple"])],
        );

        // sub-arrangements on two of the pieces
        for (name, i, j) in [("surface-443-x12", 0, 1), ("surface-443-x13", 0, 2)] {
            let union = a.pieces()[i].union(&a.pieces()[j]);
            let k = union.to_complex(&total);
            self.complex(name, &k);
            let sub = Arrangement::new(
                k.clone(),
                [i, j]
                    .iter()
                    .map(|&x| {
                        let cells: BTreeSet<String> =
                            a.pieces()[x].maximal_names(&total).into_iter().flatten().collect();
                        (a.names()[x].clone(), induced_on(&k, |v| cells.contains(v)))
                    })
                    .collect(),
            )
            .expect("sub-arrangement");
            self.arrangement(name, name, &sub);
        }

        self.weights("surface-443", &[1, 1, 8], &[4, -1, 3], &[]);
        self.weights(
            "surface-443-rank",
            &[1, 1, 8],
            &[4, -1, 3],
            &["w21 >= 3  # images of the three double-curve classes are independent in W21/W20"],
        );
        self.weights(
            "surface-443-naturality",
            &[1, 1, 8],
            &[4, -1, 3],
            &["w10 = 1  # the second solution", "w10 <= 0  # H1 injects into H1 of the torus piece, which has no weight 0"],
        );
        self.weights("surface-443-x12", &[1, 0, 3], &[1, -1, 2], &[]);
        self.weights(
            "surface-443-x13",
            &[1, 2, 3],
            &[1, 1, 2],
            &["w10 = 0  # H1 injects into H1 of the torus piece"],
        );
    }

    fn tangent_circles(&mut self) {
        let t = TangentCircles::new();
        self.complex("tangent-circles", &t.curve);
        self.complex("tangent-circles-resolution", &t.resolution);
        self.complex("tangent-circles-base", &t.base);
        let k = &t.curve;
        let pieces = ["a", "b"]
            .iter()
            .map(|c| {
                (
                    c.to_uppercase(),
                    induced_on(k, |v| v == "u" || v == "v" || v.starts_with(c)),
                )
            })
            .collect();
        let a = Arrangement::new(k.clone(), pieces).expect("two components");
        self.arrangement("two-tangent-circles", "tangent-circles", &a);
    }
}

/// The builtin scene, resolved.
pub fn builtin_scene(options: EngineOptions) -> Scene {
    Scene::from_file(builtin_scene_file(), options).expect("builtin scene is valid")
}

// ---------------------------------------------------------------------------
// example suite

/// One expected-versus-actual comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn new(label: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        Check {
            label: label.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureOutcome {
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// Set when the fixture could not run to completion.
    pub error: Option<String>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(Check::passed)
    }

    /// `PASS name (n checks)` or `FAIL name: reason`.
    pub fn summary(&self) -> String {
        if let Some(e) = &self.error {
            return format!("FAIL {}: {e}", self.name);
        }
        match self.checks.iter().find(|c| !c.passed()) {
            None => format!("PASS {} ({} checks)", self.name, self.checks.len()),
            Some(c) => format!(
                "FAIL {}: {}: expected {}, got {}",
                self.name, c.label, c.expected, c.actual
            ),
        }
    }
}

type FixtureResult = Result<Vec<Check>, Box<dyn Error>>;
type FixtureFn = fn(&Scene) -> FixtureResult;

/// Name, one-line description, body.
pub const FIXTURES: &[(&str, &str)] = &[
    ("chi-c", "Euler characteristic with compact supports of a circle, a circle minus a point, a point"),
    ("ellipses", "two ellipses meeting in four points"),
    ("figure-eights", "two homeomorphic curves with different virtual Betti numbers"),
    ("spheres", "spheres minus equators and affine spaces, dimensions 1 to 4"),
    ("blowups", "blowup relation on every blowup in the scene, plus a corrupted control"),
    ("chi-c-consistency", "beta(-1) against an independent chi_c for every named target"),
    ("surface-443-betti", "Betti numbers of the two-spheres-and-torus surface and its pieces"),
    ("surface-443-beta", "virtual Poincare polynomial of the surface three ways"),
    ("surface-443-mvss", "Mayer-Vietoris spectral sequence of the surface"),
    ("surface-443-rows", "row alternating sums of each page against the virtual Betti numbers"),
    ("surface-443-weights", "weight profiles compatible with the surface"),
    ("surface-443-subarrangements", "weight profiles of unions of two pieces"),
    ("two-tangent-circles", "curve with two components tangent at two points"),
    ("mvss-small", "spectral sequences of a single piece and of two disjoint pieces"),
];

fn body(name: &str) -> Option<FixtureFn> {
    Some(match name {
        "chi-c" => fx_chi_c,
        "ellipses" => fx_ellipses,
        "figure-eights" => fx_figure_eights,
        "spheres" => fx_spheres,
        "blowups" => fx_blowups,
        "chi-c-consistency" => fx_chi_c_consistency,
        "surface-443-betti" => fx_surface_betti,
        "surface-443-beta" => fx_surface_beta,
        "surface-443-mvss" => fx_surface_mvss,
        "surface-443-rows" => fx_surface_rows,
        "surface-443-weights" => fx_surface_weights,
        "surface-443-subarrangements" => fx_subarrangements,
        "two-tangent-circles" => fx_tangent_circles,
        "mvss-small" => fx_mvss_small,
        _ => return None,
    })
}

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

/// Runs one named fixture against `scene`; `None` for an unknown name.
pub fn run_fixture(scene: &Scene, name: &str) -> Option<FixtureOutcome> {
    let (static_name, _) = FIXTURES.iter().find(|(n, _)| *n == name)?;
    let f = body(name)?;
    Some(match f(scene) {
        Ok(checks) => FixtureOutcome {
            name: static_name,
            checks,
            error: None,
        },
        Err(e) => FixtureOutcome {
            name: static_name,
            checks: Vec::new(),
            error: Some(e.to_string()),
        },
    })
}

pub fn run_all(scene: &Scene) -> Vec<FixtureOutcome> {
    fixture_names()
        .map(|n| run_fixture(scene, n).expect("listed fixture"))
        .collect()
}

fn beta_of(sc: &Scene, name: &str) -> Result<IntPolynomial, Box<dyn Error>> {
    Ok(sc.virtual_betti(name)?.beta)
}

fn beta_in(sc: &Scene, section: BetaSection, name: &str) -> Result<IntPolynomial, Box<dyn Error>> {
    sc.virtual_betti_in(section, name)?
        .map(|v| v.beta)
        .ok_or_else(|| format!("no {} named {name:?}", section.label()).into())
}

fn fx_chi_c(sc: &Scene) -> FixtureResult {
    let mut checks = Vec::new();
    let circle = PairSpace::closed(sc.complex("circle")?.clone());
    for (label, pair, expected) in [
        ("circle", &circle, 0),
        ("circle minus a point", sc.pair("circle-minus-point")?, -1),
        ("point", &PairSpace::closed(sc.complex("point")?.clone()), 1),
    ] {
        checks.push(Check::new(
            format!("chi_c({label}) from relative cohomology"),
            expected,
            betti_compact_supports(pair).euler(),
        ));
        checks.push(Check::new(
            format!("chi_c({label}) by counting simplices"),
            expected,
            euler_compact_supports_combinatorial(pair),
        ));
    }
    checks.push(Check::new(
        "beta(circle minus a point)(-1)",
        -1,
        beta_of(sc, "circle-minus-point")?.eval(-1)?,
    ));
    Ok(checks)
}

fn fx_ellipses(sc: &Scene) -> FixtureResult {
    let e = beta_in(sc, BetaSection::Expression, "ellipses")?;
    Ok(vec![
        Check::new("beta(ellipses) from the scissor expression", "-2 + 2*t", &e),
        Check::new("beta_0", -2, e.coeff(0)),
        Check::new("beta_1", 2, e.coeff(1)),
        Check::new("degree law in dimension 1", "holds", verdict(degree_law(&e, 1).holds())),
        Check::new("beta from the cover", "-2 + 2*t", beta_in(sc, BetaSection::Cover, "ellipses")?),
        Check::new(
            "beta from the arrangement of two circles",
            "-2 + 2*t",
            beta_in(sc, BetaSection::Arrangement, "ellipses")?,
        ),
    ])
}

fn verdict(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn fx_figure_eights(sc: &Scene) -> FixtureResult {
    let x = beta_in(sc, BetaSection::Expression, "figure-eight-x")?;
    let xs = beta_in(sc, BetaSection::Stratification, "figure-eight-x")?;
    let y = beta_in(sc, BetaSection::Expression, "figure-eight-y")?;
    let b = betti_mod2(sc.complex("figure-eight")?);
    Ok(vec![
        Check::new("beta(X) via blowing up the node", "t", &x),
        Check::new("beta(X) via smooth locus and node", "t", &xs),
        Check::new("beta_1(X)", 1, x.coeff(1)),
        Check::new("beta(Y) via two circles glued at a point", "1 + 2*t", &y),
        Check::new("beta_1(Y)", 2, y.coeff(1)),
        Check::new("b of the common topological model", "1 2", b),
    ])
}

fn fx_spheres(sc: &Scene) -> FixtureResult {
    let mut checks = Vec::new();
    for n in 0..=3usize {
        let k = n + 1;
        let diff = beta_in(sc, BetaSection::Stratification, &format!("sphere-{k}-minus-sphere-{n}"))?;
        let expected = IntPolynomial::monomial(1, k).checked_sub(&IntPolynomial::monomial(1, n))?;
        checks.push(Check::new(format!("beta(S^{k} minus S^{n})"), &expected, &diff));
        checks.push(Check::new(format!("beta_{n}(S^{k} minus S^{n})"), -1, diff.coeff(n)));
        checks.push(Check::new(
            format!("degree law for S^{k} minus S^{n}"),
            "holds",
            verdict(degree_law(&diff, k).holds()),
        ));
        let affine = beta_in(sc, BetaSection::Atom, &format!("affine-{k}"))?;
        checks.push(Check::new(format!("beta(R^{k})"), IntPolynomial::monomial(1, k), &affine));
        checks.push(Check::new(format!("beta_{n}(R^{k})"), 0, affine.coeff(n)));
    }
    Ok(checks)
}

/// `(label, X, C, Bl, E)` as atom names.
/// `(label, X, C, Bl_C X, E)` atom names for every blowup in the built-in scene.
pub const BLOWUPS: &[(&str, &str, &str, &str, &str)] = &[
    ("sphere blown up at a point", "sphere-2", "point", "rp2", "rp1"),
    ("plane blown up at the origin", "affine-2", "point", "rp2-minus-point", "rp1"),
    ("empty center", "torus", "empty", "torus", "empty"),
    ("center a whole component", "circle-and-sphere", "sphere-2", "circle", "empty"),
    ("figure eight blown up at the node", "figure-eight-x", "point", "circle", "two-points"),
];

fn fx_blowups(sc: &Scene) -> FixtureResult {
    let atom = |n: &str| -> Result<IntPolynomial, Box<dyn Error>> { Ok(sc.atoms.get(n)?.beta.clone()) };
    let mut checks = Vec::new();
    for (label, x, c, bl, e) in BLOWUPS {
        let v = check_blowup_relation(&atom(x)?, &atom(c)?, &atom(bl)?, &atom(e)?)?;
        checks.push(Check::new(format!("blowup relation, {label}"), "holds", verdict(v.holds)));
    }
    for name in ["blowup-rp2", "blowup-plane", "blowup-empty-center", "blowup-component"] {
        let e = sc.expression(name)?;
        checks.push(Check::new(
            format!("{name} agrees with its base"),
            "ok",
            evaluate_beta(e, &sc.atoms).map(|_| "ok".to_string()).unwrap_or_else(|err| err.to_string()),
        ));
    }
    // exceptional divisor replaced by a point
    let bad = check_blowup_relation(&atom("sphere-2")?, &atom("point")?, &atom("rp2")?, &atom("point")?)?;
    checks.push(Check::new("corrupted control", "fails", verdict(bad.holds)));
    checks.push(Check::new(
        "corrupted control, first failing degree",
        "1",
        bad.first_failing_degree.map_or("none".into(), |d| d.to_string()),
    ));
    Ok(checks)
}

fn fx_chi_c_consistency(sc: &Scene) -> FixtureResult {
    let mut checks = Vec::new();
    for section in BetaSection::SEARCH_ORDER {
        for name in sc.names_in(section) {
            let v = sc
                .virtual_betti_in(section, name)?
                .ok_or_else(|| format!("{} {name:?} vanished", section.label()))?;
            let label = format!("{} {name}: beta(-1) against chi_c", section.label());
            match v.chi_c {
                Some(chi) => checks.push(Check::new(label, chi, v.beta.eval(-1)?)),
                None => checks.push(Check::new(label, "independent chi_c", "none available")),
            }
        }
    }
    Ok(checks)
}

fn fx_surface_betti(sc: &Scene) -> FixtureResult {
    let a = sc.arrangement("surface-443")?;
    let mut checks = vec![Check::new("b(X)", "1 1 8", betti_mod2(sc.complex("surface-443")?))];
    for (i, expected) in ["1 0 1", "1 0 1", "1 2 1"].iter().enumerate() {
        let k = a.intersection(&[i]).to_complex(a.total());
        checks.push(Check::new(format!("b({})", a.names()[i]), expected, betti_mod2(&k)));
    }
    for s in [[0, 1], [0, 2], [1, 2]] {
        let k = a.intersection(&s).to_complex(a.total());
        checks.push(Check::new(
            format!("b({} & {})", a.names()[s[0]], a.names()[s[1]]),
            "1 1",
            betti_mod2(&k),
        ));
    }
    checks.push(Check::new(
        "b(X1 & X2 & X3)",
        "4",
        betti_mod2(&a.intersection(&[0, 1, 2]).to_complex(a.total())),
    ));
    checks.push(Check::new("b(X^1), three circles", "3 3", a.column_betti(1)));
    checks.push(Check::new("b(X^2), four points", "4", a.column_betti(2)));
    Ok(checks)
}

fn fx_surface_beta(sc: &Scene) -> FixtureResult {
    let expected = "4 - t + 3*t^2";
    let mut checks = vec![
        Check::new("beta by inclusion-exclusion over the cover", expected, beta_in(sc, BetaSection::Cover, "surface-443")?),
        Check::new(
            "beta by inclusion-exclusion over the arrangement",
            expected,
            beta_in(sc, BetaSection::Arrangement, "surface-443")?,
        ),
    ];
    let coarse = sc.stratification("surface-443")?;
    let report = beta_of_stratified(coarse, sc.options)?;
    checks.push(Check::new("beta from the three-stratum stratification", expected, &report.beta));
    let comps: Vec<String> = report
        .strata
        .iter()
        .map(|r| r.components.map_or("?".into(), |c| c.to_string()))
        .collect();
    checks.push(Check::new("components of the strata", "17 12 4", comps.join(" ")));
    let betas: Vec<String> = report.strata.iter().map(|r| r.beta.to_string()).collect();
    checks.push(Check::new(
        "beta of the strata",
        "9 - 4*t + 3*t^2 | -9 + 3*t | 4",
        betas.join(" | "),
    ));
    let fine = sc.stratification("surface-443-fine")?;
    let mapping = BTreeMap::from([
        ("smooth".to_string(), strings(&["x1-open", "x2-open", "x3-open"])),
        ("double".to_string(), strings(&["c12-arcs", "c13-arcs", "c23-arcs"])),
        ("triple".to_string(), strings(&["triple"])),
    ]);
    let refinement = refinement_check(coarse, fine, &mapping, sc.options)?;
    checks.push(Check::new("beta from the seven-stratum refinement", expected, &refinement.fine_total));
    checks.push(Check::new("refinement agrees stratum by stratum", "holds", verdict(refinement.holds())));
    let e = beta_of(sc, "surface-443")?;
    checks.push(Check::new("(beta_0, beta_1, beta_2)", "4 -1 3", format!("{} {} {}", e.coeff(0), e.coeff(1), e.coeff(2))));
    Ok(checks)
}

fn rows_of(page: &crate::mvss::SpectralPage) -> String {
    (0..=2)
        .rev()
        .map(|q| {
            page.row(q)
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(" / ")
}

fn fx_surface_mvss(sc: &Scene) -> FixtureResult {
    let rep = mv_report(sc.arrangement("surface-443")?)?;
    let ss = &rep.sequence;
    let mut checks = vec![
        Check::new("E_1 rows q=2 / q=1 / q=0", "3 / 2 3 / 3 3 4", rows_of(ss.page(1))),
        Check::new("E_2 rows q=2 / q=1 / q=0", "3 / 2 3 / 1 0 3", rows_of(ss.page(2))),
        Check::new("E_3 rows q=2 / q=1 / q=0", "3 / 1 3 / 1 0 2", rows_of(ss.page(3))),
    ];
    let d2: Vec<String> = ss.differentials[1]
        .nonzero()
        .map(|((p, q), r)| format!("({p},{q})->({},{}) rank {r}", p + 2, q - 1))
        .collect();
    checks.push(Check::new("nonzero d_2", "(0,1)->(2,0) rank 1", d2.join(", ")));
    checks.push(Check::new("E_infinity page", 3, ss.certificate.page));
    checks.push(Check::new("pages after stabilization checked zero", "3", join(&ss.certificate.checked)));
    checks.push(Check::new("b from E_infinity", "1 1 8", &rep.betti));
    checks.push(Check::new(
        "profile w(i,j) = dim E_infinity^{i-j,j}",
        "w00=1 w10=0 w11=1 w20=2 w21=3 w22=3",
        rep.profile.inline(),
    ));
    Ok(checks)
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn fx_surface_rows(sc: &Scene) -> FixtureResult {
    let a = sc.arrangement("surface-443")?;
    let rep = mv_report(a)?;
    let beta = beta_in(sc, BetaSection::Arrangement, "surface-443")?;
    let beta_list: Vec<i64> = (0..3).map(|i| beta.coeff(i)).collect();
    let ss = &rep.sequence;
    let verdict_e3 = mv_profile_vs_virtual_betti(&rep.profile, &beta_list);
    let row0 = &verdict_e3.rows[0];
    Ok(vec![
        Check::new("row sums of E_1", "4 -1 3", join(&row_alternating_sums(ss.page(1)))),
        Check::new("row sums of E_2", "4 -1 3", join(&row_alternating_sums(ss.page(2)))),
        Check::new("row sums of E_3", "3 -2 3", join(&row_alternating_sums(ss.page(3)))),
        Check::new("virtual Betti condition for the E_infinity profile", "fails", verdict(verdict_e3.holds())),
        Check::new("failing rows", "0 1", join(&verdict_e3.failing_rows())),
        Check::new("row j=0", "3 != 4", format!("{} != {}", row0.alternating_sum, row0.beta)),
    ])
}

fn weight_input(sc: &Scene, name: &str) -> Result<WeightSystemInput, Box<dyn Error>> {
    Ok(sc.weight_input(name)?.input.clone())
}

fn fx_surface_weights(sc: &Scene) -> FixtureResult {
    let input = weight_input(sc, "surface-443")?;
    let sols = solve_weight_system(&input);
    let inline: Vec<String> = sols.iter().map(WeightArray::inline).collect();
    let mut checks = vec![
        Check::new("number of solutions", 2, sols.len()),
        Check::new(
            "solutions",
            "w00=1 w10=0 w11=1 w20=3 w21=2 w22=3 | w00=1 w10=1 w11=0 w20=4 w21=1 w22=3",
            inline.join(" | "),
        ),
    ];
    if let Some(first) = sols.first() {
        let r = check_conditions(first, &input, ConditionFlags::default());
        checks.push(Check::new("manifold condition on the first solution", "fails", verdict(r.manifold)));
    }
    for (name, expected) in [
        ("surface-443-rank", "INFEASIBLE (violates: w21 >= 3)"),
        ("surface-443-naturality", "INFEASIBLE (violates: w10 = 1, w10 <= 0)"),
    ] {
        let w = sc.weight_input(name)?;
        let out = constraint_filter(&solve_weight_system(&w.input), &w.constraints)?;
        checks.push(Check::new(
            format!("constraints of {name}"),
            expected,
            out.infeasibility_message().unwrap_or_else(|| "feasible".into()),
        ));
    }
    Ok(checks)
}

fn fx_subarrangements(sc: &Scene) -> FixtureResult {
    let mut checks = Vec::new();
    for (name, b, beta) in [("surface-443-x12", "1 0 3", "1 -1 2"), ("surface-443-x13", "1 2 3", "1 1 2")] {
        let a = sc.arrangement(name)?;
        let model_b = betti_mod2(a.total());
        let model_beta = a.inclusion_exclusion_beta()?;
        checks.push(Check::new(format!("b({name}) from the model"), b, &model_b));
        checks.push(Check::new(
            format!("beta({name}) by inclusion-exclusion"),
            beta,
            join(&(0..3).map(|i| model_beta.coeff(i)).collect::<Vec<_>>()),
        ));
        let w = sc.weight_input(name)?;
        checks.push(Check::new(format!("stored b of {name}"), b, join(&w.input.b)));
        checks.push(Check::new(format!("stored beta of {name}"), beta, join(&w.input.beta)));
        let out = constraint_filter(&solve_weight_system(&w.input), &w.constraints)?;
        let w2: Vec<String> = out
            .survivors
            .iter()
            .map(|s| format!("w20={} w21={} w22={}", s.get(2, 0), s.get(2, 1), s.get(2, 2)))
            .collect();
        checks.push(Check::new(format!("w^2 of {name}"), "w20=0 w21=1 w22=2", w2.join(" | ")));
    }
    Ok(checks)
}

fn fx_tangent_circles(sc: &Scene) -> FixtureResult {
    let x = sc.complex("tangent-circles")?;
    let xt = sc.complex("tangent-circles-resolution")?;
    let c = sc.complex("tangent-circles-base")?;
    let q = SimplicialMap::new(x, c, &TangentCircles::projection_pairs())?;
    let p = SimplicialMap::new(xt, x, &TangentCircles::resolution_pairs())?;
    let qp_pairs: Vec<(String, String)> = {
        let qmap: BTreeMap<String, String> = TangentCircles::projection_pairs().into_iter().collect();
        TangentCircles::resolution_pairs()
            .into_iter()
            .map(|(from, mid)| (from, qmap[&mid].clone()))
            .collect()
    };
    let qp = SimplicialMap::new(xt, c, &qp_pairs)?;
    let h1 = betti_mod2(x).get(1);
    let rq = q.induced_rank(1);
    let rp = p.induced_rank(1);
    let rep = mv_report(sc.arrangement("two-tangent-circles")?)?;
    let e1 = rep.sequence.page(1);
    Ok(vec![
        Check::new("dim H^1(X)", 3, h1),
        Check::new("rank q^* on H^1", 1, rq),
        Check::new("rank p^* on H^1", 2, rp),
        Check::new("rank of the composite", 0, qp.induced_rank(1)),
        Check::new("rank q^* + rank p^* = dim H^1(X)", "exact", if rq + rp == h1 { "exact" } else { "not exact" }),
        Check::new("E_1 row q=0", "2 2", join(&e1.row(0))),
        Check::new("E_1 row q=1", "2", join(&e1.row(1))),
        Check::new("b from E_infinity", "1 3", &rep.betti),
    ])
}

fn fx_mvss_small(sc: &Scene) -> FixtureResult {
    let single = mv_report(sc.arrangement("torus")?)?;
    let two = mv_report(sc.arrangement("two-spheres")?)?;
    let two_beta = beta_in(sc, BetaSection::Arrangement, "two-spheres")?;
    let beta_list: Vec<i64> = (0..3).map(|i| two_beta.coeff(i)).collect();
    let torus_input = weight_input(sc, "torus")?;
    let diag = WeightArray::diagonal(&[1, 2, 1]);
    let r = check_conditions(&diag, &torus_input, ConditionFlags { compact_nonsingular: true });
    Ok(vec![
        Check::new("single piece: pages", 1, single.sequence.pages.len()),
        Check::new("single piece: profile", WeightArray::diagonal(&[1, 2, 1]).inline(), single.profile.inline()),
        Check::new("disjoint pieces: b", "2 0 2", &two.betti),
        Check::new("disjoint pieces: profile", WeightArray::diagonal(&[2, 0, 2]).inline(), two.profile.inline()),
        Check::new(
            "disjoint pieces: virtual Betti condition",
            "holds",
            verdict(mv_profile_vs_virtual_betti(&two.profile, &beta_list).holds()),
        ),
        Check::new("torus: manifold condition on the diagonal profile", "holds", verdict(r.manifold)),
        Check::new(
            "torus: diagonal profile among the solutions",
            "yes",
            if solve_weight_system(&torus_input).contains(&diag) { "yes" } else { "no" },
        ),
    ])
}
