//! The 27 lines on a nonsingular cubic surface, purely lattice-theoretically.
//!
//! The Picard lattice is `Z^7` with form `diag(1, -1, ..., -1)` in the basis
//! `e0, ..., e6`, and the hyperplane class is `h = 3e0 - e1 - ... - e6`.
//! Lines are the classes with `x² = -1`, `x·h = 1`; roots are the classes
//! with `x² = -2`, `x·h = 0`.
//!
//! # Why the enumeration boxes are complete
//!
//! Write `x = a·e0 + Σ bᵢeᵢ`. Then `x·h = 3a + Σbᵢ` and `x² = a² - Σbᵢ²`.
//!
//! *Lines.* `Σbᵢ = 1 - 3a` and `Σbᵢ² = a² + 1`. Cauchy–Schwarz gives
//! `(1 - 3a)² ≤ 6(a² + 1)`, i.e. `3a² - 6a - 5 ≤ 0`, so `a ∈ {0, 1, 2}`.
//! Then `Σbᵢ² ≤ 5`. If some `|bᵢ| = 2` the other five satisfy
//! `Σbⱼ² ≤ 1`, so `|Σbᵢ| ≤ 3`; but `a = 2` is the only case with
//! `Σbᵢ² ≥ 4`, and it needs `Σbᵢ = -5`. Hence `|bᵢ| ≤ 1`, and the box
//! `(2, 1, 1, 1, 1, 1, 1)` contains every line.
//!
//! *Roots.* `Σbᵢ = -3a` and `Σbᵢ² = a² + 2`; Cauchy–Schwarz gives
//! `9a² ≤ 6(a² + 2)`, so `|a| ≤ 2` and `Σbᵢ² ≤ 6`, hence `|bᵢ| ≤ 2`.
//!
//! Both claims are also re-checked at run time in the tests by widening the
//! box and observing no new solutions.

use serde::Serialize;

use crate::automorphism::{self, AutomorphismSummary, Graph};
use crate::error::{Error, Result};
use crate::lattice::{Bounds, DivisorClass, Lattice};

pub const LATTICE_NAME: &str = "A(X)";

/// Box for lines, see the module docs.
pub const LINE_BOX: [u32; 7] = [2, 1, 1, 1, 1, 1, 1];
/// Box for roots, see the module docs.
pub const ROOT_BOX: [u32; 7] = [2, 2, 2, 2, 2, 2, 2];

#[derive(Clone, Debug)]
pub struct CubicLattice {
    pub lattice: Lattice,
    pub h: DivisorClass,
}

impl Default for CubicLattice {
    fn default() -> Self {
        Self::new()
    }
}

impl CubicLattice {
    pub fn new() -> CubicLattice {
        let basis = (0..7).map(|i| format!("e{i}")).collect();
        let lattice = Lattice::diagonal(&[1, -1, -1, -1, -1, -1, -1])
            .and_then(|l| l.named(LATTICE_NAME).with_basis(basis))
            .expect("static lattice is valid");
        let h = DivisorClass::new(LATTICE_NAME, vec![3, -1, -1, -1, -1, -1, -1]);
        CubicLattice { lattice, h }
    }

    pub fn dot(&self, x: &DivisorClass, y: &DivisorClass) -> i64 {
        let v = self.lattice.dot_i128(&x.coords, &y.coords).expect("small coordinates");
        v as i64
    }
}

/// The three families of lines in the `e`-basis normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum LineFamily {
    /// `eᵢ`
    E(u8),
    /// `e0 - eᵢ - eⱼ`, `i < j`
    F(u8, u8),
    /// `2e0 - Σ_{j≠i} eⱼ`, labeled by the omitted index `i`.
    G(u8),
}

impl LineFamily {
    pub fn label(&self) -> String {
        match self {
            LineFamily::E(i) => format!("E{i}"),
            LineFamily::F(i, j) => format!("F{i}{j}"),
            LineFamily::G(i) => format!("G{i}"),
        }
    }

    fn classify(c: &[i64]) -> Option<LineFamily> {
        let b = &c[1..];
        let pos = |v: i64| -> Vec<u8> {
            b.iter()
                .enumerate()
                .filter(|(_, &x)| x == v)
                .map(|(i, _)| (i + 1) as u8)
                .collect()
        };
        match c[0] {
            0 => {
                let ones = pos(1);
                (ones.len() == 1 && pos(0).len() == 5).then(|| LineFamily::E(ones[0]))
            }
            1 => {
                let m = pos(-1);
                (m.len() == 2 && pos(0).len() == 4).then(|| LineFamily::F(m[0], m[1]))
            }
            2 => {
                let z = pos(0);
                (z.len() == 1 && pos(-1).len() == 5).then(|| LineFamily::G(z[0]))
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Line {
    pub class: DivisorClass,
    pub family: LineFamily,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineSet {
    pub lines: Vec<Line>,
}

impl LineSet {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn family_counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for l in &self.lines {
            match l.family {
                LineFamily::E(_) => c.0 += 1,
                LineFamily::F(..) => c.1 += 1,
                LineFamily::G(_) => c.2 += 1,
            }
        }
        c
    }

    /// Intersection number of lines `i` and `j`.
    pub fn meet(&self, cubic: &CubicLattice, i: usize, j: usize) -> i64 {
        cubic.dot(&self.lines[i].class, &self.lines[j].class)
    }

    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        self.lines.iter().position(|l| l.class.coords == coords)
    }
}

/// Every line class, in lexicographic coordinate order.
pub fn enumerate_lines(cubic: &CubicLattice) -> Result<LineSet> {
    let raw = cubic.lattice.vectors_with(
        -1,
        &[(cubic.h.clone(), 1)],
        &Bounds::PerCoordinate(LINE_BOX.to_vec()),
    )?;
    let lines = raw
        .into_iter()
        .map(|class| {
            let family = LineFamily::classify(&class.coords).ok_or_else(|| {
                Error::InvariantViolation(format!("line {:?} in no family", class.coords))
            })?;
            Ok(Line { class, family })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LineSet { lines })
}

/// All roots `x² = -2`, `x·h = 0`.
pub fn roots(cubic: &CubicLattice) -> Result<Vec<DivisorClass>> {
    cubic.lattice.vectors_with(
        -2,
        &[(cubic.h.clone(), 0)],
        &Bounds::PerCoordinate(ROOT_BOX.to_vec()),
    )
}

/// The incidence graph: vertices are lines, edges join meeting lines.
pub fn incidence_graph(cubic: &CubicLattice, s: &LineSet) -> Graph {
    let n = s.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if s.meet(cubic, i, j) == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, &edges).expect("indices in range")
}

/// Unordered triples of pairwise meeting lines summing to `h`.
pub fn triangles(cubic: &CubicLattice, s: &LineSet) -> Vec<[usize; 3]> {
    let n = s.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if s.meet(cubic, a, b) != 1 {
                continue;
            }
            for c in b + 1..n {
                if s.meet(cubic, a, c) != 1 || s.meet(cubic, b, c) != 1 {
                    continue;
                }
                let sum: Vec<i64> = (0..7)
                    .map(|k| {
                        s.lines[a].class.coords[k] + s.lines[b].class.coords[k] + s.lines[c].class.coords[k]
                    })
                    .collect();
                if sum == cubic.h.coords {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// A double six: `l[i]·m[j] = 1` for `i ≠ j`, `l[i]·m[i] = 0`, each
/// sextuple pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleSix {
    pub l: [usize; 6],
    pub m: [usize; 6],
}

/// All double sixes, each listed once with the lexicographically smaller
/// sextuple as `l`.
pub fn double_sixes(cubic: &CubicLattice, s: &LineSet) -> Vec<DoubleSix> {
    let n = s.len();
    let disjoint = |i: usize, j: usize| i != j && s.meet(cubic, i, j) == 0;
    // Sextuples of pairwise disjoint lines, as sorted index sets.
    let mut sixes: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn grow(
        start: usize,
        n: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        disjoint: &dyn Fn(usize, usize) -> bool,
    ) {
        if stack.len() == 6 {
            out.push(stack.clone());
            return;
        }
        for v in start..n {
            if stack.iter().all(|&u| disjoint(u, v)) {
                stack.push(v);
                grow(v + 1, n, stack, out, disjoint);
                stack.pop();
            }
        }
    }
    grow(0, n, &mut stack, &mut sixes, &disjoint);

    let mut out = Vec::new();
    for l in &sixes {
        // m[i] must miss l[i] and meet every other l[j]; it is unique if it exists.
        let mut m = [0usize; 6];
        let mut ok = true;
        for i in 0..6 {
            let cands: Vec<usize> = (0..n)
                .filter(|&c| !l.contains(&c))
                .filter(|&c| (0..6).all(|j| s.meet(cubic, l[j], c) == if i == j { 0 } else { 1 }))
                .collect();
            if cands.len() != 1 {
                ok = false;
                break;
            }
            m[i] = cands[0];
        }
        if !ok || !(0..6).all(|i| (i + 1..6).all(|j| disjoint(m[i], m[j]))) {
            continue;
        }
        let mut ms = m.to_vec();
        ms.sort_unstable();
        if l.as_slice() < ms.as_slice() {
            let l: [usize; 6] = l.as_slice().try_into().unwrap();
            out.push(DoubleSix { l, m });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpleRoots {
    pub roots: Vec<DivisorClass>,
    /// Edges `(i, j)` with `fᵢ·fⱼ = 1`.
    pub edges: Vec<(usize, usize)>,
    pub gram_determinant: i64,
}

/// The simple roots `f1..f6` with `e1..e4 = L1..L4`, `e5 = L5'`,
/// `e6 = L5''` and `L5 = e0 - e5 - e6`:
/// `f1 = e1-e2`, `f2 = e2-e3`, `f3 = e3-e4`, `f4 = e4-e5`, `f5 = e5-e6`,
/// `f6 = L4 - L5 = -e0 + e4 + e5 + e6`.
pub fn simple_roots(cubic: &CubicLattice) -> Result<SimpleRoots> {
    let f = |c: [i64; 7]| DivisorClass::new(LATTICE_NAME, c.to_vec());
    let roots = vec![
        f([0, 1, -1, 0, 0, 0, 0]),
        f([0, 0, 1, -1, 0, 0, 0]),
        f([0, 0, 0, 1, -1, 0, 0]),
        f([0, 0, 0, 0, 1, -1, 0]),
        f([0, 0, 0, 0, 0, 1, -1]),
        f([-1, 0, 0, 0, 1, 1, 1]),
    ];
    let mut edges = Vec::new();
    let mut gram = vec![vec![0i64; 6]; 6];
    for i in 0..6 {
        if cubic.dot(&roots[i], &cubic.h) != 0 {
            return Err(Error::InvariantViolation(format!("f{} not orthogonal to h", i + 1)));
        }
        for j in 0..6 {
            gram[i][j] = cubic.dot(&roots[i], &roots[j]);
        }
        if gram[i][i] != -2 {
            return Err(Error::InvariantViolation(format!("f{}² ≠ -2", i + 1)));
        }
        for j in i + 1..6 {
            match gram[i][j] {
                0 => {}
                1 => edges.push((i, j)),
                v => {
                    return Err(Error::InvariantViolation(format!(
                        "f{}·f{} = {v}",
                        i + 1,
                        j + 1
                    )))
                }
            }
        }
    }
    let graph = Graph::new(6, &edges)?;
    if !is_e6_diagram(&graph) {
        return Err(Error::InvariantViolation("simple roots do not form E6".into()));
    }
    let d = crate::exact::det(&gram);
    Ok(SimpleRoots {
        roots,
        edges,
        gram_determinant: i64::try_from(d).expect("small determinant"),
    })
}

/// A tree on 6 vertices with a single trivalent node whose arms have
/// lengths 1, 2, 2.
fn is_e6_diagram(g: &Graph) -> bool {
    if g.order() != 6 || g.edges().len() != 5 {
        return false;
    }
    let centers: Vec<usize> = (0..6).filter(|&v| g.degree(v) == 3).collect();
    if centers.len() != 1 || (0..6).any(|v| g.degree(v) > 3) {
        return false;
    }
    let c = centers[0];
    let mut arms: Vec<usize> = g
        .neighbors(c)
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (c, start, 1);
            loop {
                let next: Vec<usize> = g.neighbors(cur).iter().copied().filter(|&x| x != prev).collect();
                if next.len() != 1 {
                    break len;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
        })
        .collect();
    arms.sort_unstable();
    arms == [1, 2, 2]
}

/// Order of the automorphism group of the incidence graph.
pub fn incidence_automorphism_order(g: &Graph, node_budget: u64) -> Result<AutomorphismSummary> {
    automorphism::automorphism_group(g, node_budget)
}
