//! Affine Weyl group machinery on arrangement windows: alcove and wall
//! detection, exact affine isometries, bounded orbit enumeration with a
//! simple-transitivity check, special points and family orbits.
//!
//! Group elements are exact affine isometries (orthogonal rational
//! matrix plus rational translation); equality is matrix equality, so no
//! word-problem machinery is ever needed.
//!
//! Wall certification: the orthogonal projection of an interior point
//! onto a wall of an alcove lands in the closed facet, because alcoves
//! of affine Weyl groups are nonobtuse simplices. The projection test
//! therefore decides wall-ness whenever it is strict; exact ties fall
//! back to a rational LP that finds a relative-interior facet point.

use crate::arrangement::{Arrangement, HyperplaneFamily, Window};
use crate::geometry::{Hyperplane, Vector};
use crate::linalg::Matrix;
use crate::lp::{maximize, LpResult};
use crate::root_system::reflect_vector;
use crate::scalar::{rat, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("basepoint lies on a hyperplane (family {0}, index {1})")]
    OnWall(usize, i64),
    #[error("window exhausted: {0}")]
    WindowExhausted(String),
    #[error(
        "alcove is not a simplex ({0} walls for dimension {1}); arrangement not irreducible affine"
    )]
    NotSimplex(usize, usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Arrangement(#[from] crate::arrangement::ArrangementError),
}

/// An exact affine isometry `x -> linear x + translation`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    pub linear: Matrix,
    pub translation: Vector,
}

impl Isometry {
    pub fn identity(dim: usize) -> Self {
        Isometry {
            linear: Matrix::identity(dim),
            translation: Vector::zero(dim),
        }
    }

    pub fn reflection(h: &Hyperplane) -> Self {
        let u = h.normal();
        let dim = u.dim();
        let n2 = u.norm2();
        let mut linear = Matrix::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                let d = rat(2) * &u.coords[i] * &u.coords[j] / n2.clone();
                let v = &linear[(i, j)] - &d;
                linear[(i, j)] = v;
            }
        }
        let t = rat(2) * h.offset() / &n2;
        Isometry {
            linear,
            translation: u.scale(&t),
        }
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        Vector::new(self.linear.apply(&x.coords)).add(&self.translation)
    }

    /// `self` after `other`: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: self.linear.mul(&other.linear),
            translation: self.apply(&other.translation),
        }
    }
}

/// One wall of an alcove, tagged with its generating family and index.
#[derive(Debug, Clone)]
pub struct Wall {
    pub family: usize,
    pub k: i64,
    pub plane: Hyperplane,
}

/// A full alcove: walls, vertices and an interior reference point.
#[derive(Debug, Clone)]
pub struct Alcove {
    pub walls: Vec<Wall>,
    pub vertices: Vec<Vector>,
    pub centroid: Vector,
}

/// Chart frame of a window: base point and basis of the translation
/// space (the standard frame when no chart is attached).
fn chart_frame(arr: &Arrangement) -> (Vector, Vec<Vector>) {
    match &arr.chart {
        Some(c) => (c.base.clone(), c.basis.clone()),
        None => {
            let dim = arr.dim;
            let basis = (0..dim)
                .map(|i| {
                    let mut v = vec![Rat::zero(); dim];
                    v[i] = Rat::one();
                    Vector::new(v)
                })
                .collect();
            (Vector::zero(dim), basis)
        }
    }
}

/// Finds the alcove of the window containing `basepoint`. The wall list
/// is ordered by (family, index), which makes downstream output
/// deterministic.
pub fn find_alcove(window: &Window, basepoint: &Vector) -> Result<Alcove, WeylError> {
    let arr = &window.arrangement;
    if basepoint.dim() != arr.dim {
        return Err(WeylError::InvalidInput(
            "basepoint dimension mismatch".into(),
        ));
    }
    if let Some(c) = &arr.chart {
        if !c.contains(basepoint) {
            return Err(WeylError::InvalidInput(
                "basepoint outside the chart".into(),
            ));
        }
    }
    if let Some((f, k)) = arr.on_hyperplane(basepoint) {
        return Err(WeylError::OnWall(f, k));
    }
    if !window.contains_point(basepoint) {
        return Err(WeylError::WindowExhausted(
            "basepoint outside the window ball".into(),
        ));
    }

    // Candidates: the two bracketing hyperplanes per family. Hyperplanes
    // of the same family beyond the brackets are implied by them.
    let mut candidates: Vec<Wall> = Vec::new();
    for (fi, f) in arr.families.iter().enumerate() {
        let t = (f.direction().dot(basepoint) - f.phase().clone()) / f.step().clone();
        let k_lo =
            t.floor().to_integer().to_i64().ok_or_else(|| {
                WeylError::InvalidInput("basepoint too far from family phase".into())
            })?;
        for k in [k_lo, k_lo + 1] {
            let plane = f.hyperplane(k);
            // A bracketing plane beyond the window means the window is
            // too small to contain the alcove closure.
            if plane.dist2(&window.center) > &window.radius * &window.radius {
                return Err(WeylError::WindowExhausted(format!(
                    "bracketing hyperplane of family {} index {} outside the ball",
                    f.label, k
                )));
            }
            candidates.push(Wall {
                family: fi,
                k,
                plane,
            });
        }
    }
    // Two subfamilies in one direction can produce coincident planes.
    candidates.sort_by(|a, b| a.plane.cmp(&b.plane).then(a.family.cmp(&b.family)));
    candidates.dedup_by(|a, b| a.plane == b.plane);

    let signs: Vec<Rat> = candidates.iter().map(|c| c.plane.eval(basepoint)).collect();

    let mut walls = Vec::new();
    for (i, cand) in candidates.iter().enumerate() {
        let p = cand.plane.project(basepoint);
        let mut tie = false;
        let mut violated = false;
        for (j, other) in candidates.iter().enumerate() {
            if i == j {
                continue;
            }
            let v = other.plane.eval(&p);
            let prod = &v * &signs[j];
            if prod.is_negative() {
                violated = true;
                break;
            }
            if v.is_zero() {
                tie = true;
            }
        }
        let is_wall = if violated {
            false
        } else if !tie {
            true
        } else {
            certify_wall_lp(arr, &candidates, &signs, i)
        };
        if is_wall {
            walls.push(cand.clone());
        }
    }

    let m = arr.chart_dim();
    if walls.len() != m + 1 {
        return Err(WeylError::NotSimplex(walls.len(), m));
    }
    walls.sort_by_key(|w| (w.family, w.k));

    // Vertices: each subset omitting one wall meets in one point.
    let (base, basis) = chart_frame(arr);
    let mut vertices = Vec::new();
    for omit in 0..walls.len() {
        let rows: Vec<Vec<Rat>> = walls
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != omit)
            .map(|(_, w)| basis.iter().map(|b| w.plane.normal().dot(b)).collect())
            .collect();
        let rhs: Vec<Rat> = walls
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != omit)
            .map(|(_, w)| w.plane.offset() - w.plane.normal().dot(&base))
            .collect();
        let y = Matrix::from_rows(rows)
            .solve_unique(&rhs)
            .ok_or(WeylError::NotSimplex(walls.len(), m))?;
        let mut v = base.clone();
        for (b, c) in basis.iter().zip(&y) {
            v = v.add(&b.scale(c));
        }
        if !window.contains_point(&v) {
            return Err(WeylError::WindowExhausted(format!(
                "alcove vertex {v} outside the ball"
            )));
        }
        vertices.push(v);
    }
    let mut centroid = Vector::zero(arr.dim);
    for v in &vertices {
        centroid = centroid.add(v);
    }
    let centroid = centroid.scale(&rat(vertices.len() as i64).recip());
    Ok(Alcove {
        walls,
        vertices,
        centroid,
    })
}

/// LP certificate: does `candidates[target]` carry a point strictly
/// inside every other candidate halfspace?
fn certify_wall_lp(arr: &Arrangement, candidates: &[Wall], signs: &[Rat], target: usize) -> bool {
    let (base, basis) = chart_frame(arr);
    let m = basis.len();
    // Variables: chart coordinates y_1..y_m and the slack margin t.
    // Maximize t subject to sign_j (eval_j(y)) >= t for j != target,
    // eval_target(y) = 0, and t <= 1.
    let mut constraints: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let eval_coeffs = |w: &Wall| -> (Vec<Rat>, Rat) {
        let lin: Vec<Rat> = basis.iter().map(|b| w.plane.normal().dot(b)).collect();
        let cst = w.plane.normal().dot(&base) - w.plane.offset().clone();
        (lin, cst)
    };
    for (j, cand) in candidates.iter().enumerate() {
        let (lin, cst) = eval_coeffs(cand);
        if j == target {
            // eval = 0: two inequalities without t.
            let mut row = lin.clone();
            row.push(Rat::zero());
            constraints.push((row.clone(), -cst.clone()));
            let neg: Vec<Rat> = row.iter().map(|c| -c.clone()).collect();
            constraints.push((neg, cst.clone()));
        } else {
            // sign_j * (lin . y + cst) >= t  <=>  -sign_j*lin . y + t <= sign_j*cst
            let s = if signs[j].is_positive() {
                rat(1)
            } else {
                rat(-1)
            };
            let mut row: Vec<Rat> = lin.iter().map(|c| -(&s * c)).collect();
            row.push(Rat::one());
            constraints.push((row, &s * &cst));
        }
    }
    let mut tcap = vec![Rat::zero(); m];
    tcap.push(Rat::one());
    constraints.push((tcap, Rat::one()));
    let mut objective = vec![Rat::zero(); m];
    objective.push(Rat::one());
    match maximize(&objective, &constraints) {
        LpResult::Optimal { value, .. } => value.is_positive(),
        LpResult::Infeasible => false,
        LpResult::Unbounded => true,
    }
}

/// Deterministic generic basepoint: the lexicographically first point of
/// a fixed grid scan around the window centre that avoids every
/// hyperplane. The grid pitch along axis i divides the smallest family
/// step by a distinct odd number, so coordinates of scan points never
/// collide and the scan escapes the walls within the first shells.
pub fn generic_basepoint(window: &Window) -> Result<Vector, WeylError> {
    let arr = &window.arrangement;
    let (_, basis) = chart_frame(arr);
    let m = basis.len();
    let min_step = arr
        .families
        .iter()
        .map(|f| f.step().clone())
        .min()
        .ok_or_else(|| WeylError::InvalidInput("empty arrangement".into()))?;
    let deltas: Vec<Rat> = (0..m)
        .map(|i| &min_step / &rat(17 + 2 * i as i64))
        .collect();
    for shell in 0..2000u32 {
        let mut offsets = shell_offsets(m, shell);
        offsets.sort();
        for off in offsets {
            let mut p = window.center.clone();
            for ((b, d), o) in basis.iter().zip(&deltas).zip(&off) {
                p = p.add(&b.scale(&(d * &rat(*o))));
            }
            if !window.contains_point(&p) {
                continue;
            }
            if arr.on_hyperplane(&p).is_none() {
                return Ok(p);
            }
        }
    }
    Err(WeylError::WindowExhausted(
        "no generic point found in the scan".into(),
    ))
}

fn shell_offsets(m: usize, shell: u32) -> Vec<Vec<i64>> {
    // All integer offset vectors with max-norm exactly `shell`.
    let s = shell as i64;
    let mut out = Vec::new();
    let mut cur = vec![-s; m];
    loop {
        if cur.iter().any(|&c| c.abs() == s) || s == 0 {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == m {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= s {
                break;
            }
            cur[i] = -s;
            i += 1;
        }
    }
}

/// All points of the window ball lying on one hyperplane from every
/// parallel class (families sharing a direction count as one class).
/// Rank-one input is rejected.
pub fn special_points(window: &Window) -> Result<Vec<Vector>, WeylError> {
    let arr = &window.arrangement;
    let m = arr.chart_dim();
    if arr.rank() < 2 || m < 2 {
        return Err(WeylError::InvalidInput(
            "rank-one arrangements are unsupported".into(),
        ));
    }
    // Group families into parallel classes by direction.
    let mut class_dirs: Vec<Vector> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (fi, f) in arr.families.iter().enumerate() {
        match class_dirs.iter().position(|d| d == f.direction()) {
            Some(ci) => classes[ci].push(fi),
            None => {
                class_dirs.push(f.direction().clone());
                classes.push(vec![fi]);
            }
        }
    }
    let on_class = |ci: usize, p: &Vector| -> bool {
        classes[ci]
            .iter()
            .any(|&fi| arr.families[fi].index_of_point(p).is_some())
    };

    // Pick m classes with independent directions (greedy).
    let (base, basis) = chart_frame(arr);
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (ci, d) in class_dirs.iter().enumerate() {
        let mut cand = rows.clone();
        cand.push(d.coords.clone());
        if crate::linalg::span_rank(&cand) > rows.len() {
            rows = cand;
            chosen.push(ci);
            if chosen.len() == m {
                break;
            }
        }
    }
    if chosen.len() < m {
        return Err(WeylError::InvalidInput(
            "directions do not span the chart".into(),
        ));
    }

    // Candidate offsets per chosen class: all window hyperplanes of all
    // subfamilies in that class.
    let offset_lists: Vec<Vec<Rat>> = chosen
        .iter()
        .map(|&ci| {
            let mut offs: Vec<Rat> = classes[ci]
                .iter()
                .flat_map(|&fi| {
                    let f = &arr.families[fi];
                    f.indices_in_ball(&window.center, &window.radius)
                        .into_iter()
                        .map(move |k| f.offset(k))
                })
                .collect();
            offs.sort();
            offs.dedup();
            offs
        })
        .collect();
    if offset_lists.iter().any(|l| l.is_empty()) {
        return Err(WeylError::WindowExhausted(
            "a parallel class misses the ball".into(),
        ));
    }

    let mut found: Vec<Vector> = Vec::new();
    let mut combo = vec![0usize; m];
    'outer: loop {
        // Solve the intersection of the selected hyperplanes in the chart.
        let mut mat_rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (slot, &ci) in chosen.iter().enumerate() {
            let d = &class_dirs[ci];
            mat_rows.push(basis.iter().map(|b| d.dot(b)).collect::<Vec<Rat>>());
            rhs.push(&offset_lists[slot][combo[slot]] - &d.dot(&base));
        }
        if let Some(y) = Matrix::from_rows(mat_rows).solve_unique(&rhs) {
            let mut p = base.clone();
            for (b, c) in basis.iter().zip(&y) {
                p = p.add(&b.scale(c));
            }
            if window.contains_point(&p)
                && (0..classes.len()).all(|ci| on_class(ci, &p))
                && !found.contains(&p)
            {
                found.push(p);
            }
        }
        // Advance the multi-index.
        for slot in 0..m {
            combo[slot] += 1;
            if combo[slot] < offset_lists[slot].len() {
                continue 'outer;
            }
            combo[slot] = 0;
        }
        break;
    }
    if found.is_empty() {
        return Err(WeylError::WindowExhausted(
            "no special point inside the ball".into(),
        ));
    }
    found.sort();
    Ok(found)
}

/// Key identifying an alcove: its sorted vertex list.
fn alcove_key(vertices: &[Vector]) -> Vec<Vector> {
    let mut v = vertices.to_vec();
    v.sort();
    v
}

/// Breadth-first enumeration of alcoves by wall crossings from the base
/// alcove, tracking the exact group element reaching each alcove.
/// Returns true iff the action is simply transitive on the full alcoves
/// of the window: every full alcove is reached and no alcove is reached
/// by two different isometries.
pub fn alcove_transitivity_check(window: &Window) -> Result<bool, WeylError> {
    let basepoint = generic_basepoint(window)?;
    let base = find_alcove(window, &basepoint)?;
    let dim = window.arrangement.dim;

    let inside = |vs: &[Vector]| vs.iter().all(|v| window.contains_point(v));

    let mut reached: BTreeMap<Vec<Vector>, Isometry> = BTreeMap::new();
    let mut queue = VecDeque::new();
    reached.insert(alcove_key(&base.vertices), Isometry::identity(dim));
    queue.push_back((base.vertices.clone(), Isometry::identity(dim)));
    while let Some((verts, g)) = queue.pop_front() {
        for wall in &base.walls {
            let image_plane = image_hyperplane(&g, &wall.plane);
            let s = Isometry::reflection(&image_plane);
            let g2 = s.compose(&g);
            let verts2: Vec<Vector> = verts.iter().map(|v| s.apply(v)).collect();
            if !inside(&verts2) {
                continue;
            }
            let key = alcove_key(&verts2);
            match reached.get(&key) {
                Some(known) => {
                    if known != &g2 {
                        return Ok(false); // two distinct elements, same alcove
                    }
                }
                None => {
                    reached.insert(key, g2.clone());
                    queue.push_back((verts2, g2));
                }
            }
        }
    }
    if reached.len() < 2 {
        return Err(WeylError::WindowExhausted(
            "window does not hold two full alcoves".into(),
        ));
    }

    // Completeness: every full alcove found by direct sampling must have
    // been reached by the crossing walk.
    let (_, basis) = chart_frame(&window.arrangement);
    let min_step = window
        .arrangement
        .families
        .iter()
        .map(|f| f.step().clone())
        .min()
        .unwrap();
    let pitch = min_step / rat(3);
    let m = basis.len();
    let extent = (to_f(&window.radius) / to_f(&pitch)).ceil() as i64 + 1;
    let mut combo = vec![-extent; m];
    loop {
        let mut p = window.center.clone();
        for (b, &c) in basis.iter().zip(&combo) {
            // Offset by a non-dyadic fraction so samples dodge the walls.
            p = p.add(&b.scale(&(&pitch * &(rat(c) + crate::scalar::ratio(1, 7)))));
        }
        if window.contains_point(&p) && window.arrangement.on_hyperplane(&p).is_none() {
            if let Ok(al) = find_alcove(window, &p) {
                if inside(&al.vertices) && !reached.contains_key(&alcove_key(&al.vertices)) {
                    return Ok(false);
                }
            }
        }
        let mut i = 0;
        loop {
            if i == m {
                return Ok(true);
            }
            combo[i] += 1;
            if combo[i] <= extent {
                break;
            }
            combo[i] = -extent;
            i += 1;
        }
    }
}

fn to_f(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::MAX)
}

/// Image of a hyperplane under an isometry: for g(x) = Rx + t the image
/// of <u,x> = c is <Ru, y> = c + <Ru, t>.
pub fn image_hyperplane(g: &Isometry, h: &Hyperplane) -> Hyperplane {
    let ru = Vector::new(g.linear.apply(&h.normal().coords));
    let off = h.offset() + &ru.dot(&g.translation);
    Hyperplane::new(ru, off).expect("isometries preserve nonzero normals")
}

/// Partition of the families into orbit representatives under the Weyl
/// group. Orbits are the connected components of the graph joining each
/// family to its image under every base-alcove wall reflection (the
/// reflections generate the group, so one union pass suffices).
pub fn family_orbits(window: &Window) -> Result<Vec<usize>, WeylError> {
    let arr = &window.arrangement;
    let basepoint = generic_basepoint(window)?;
    let alcove = find_alcove(window, &basepoint)?;

    let n = arr.families.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }

    for wall in &alcove.walls {
        for fi in 0..n {
            let image = reflect_family(&arr.families[fi], &wall.plane);
            let Some(fj) = arr.families.iter().position(|g| same_family(g, &image)) else {
                return Err(WeylError::InvalidInput(format!(
                    "arrangement is not reflection invariant: image of family {} is missing",
                    arr.families[fi].label
                )));
            };
            let (a, b) = (find(&mut parent, fi), find(&mut parent, fj));
            if a != b {
                parent[a] = b;
            }
        }
    }
    Ok((0..n).map(|i| find(&mut parent, i)).collect())
}

/// The image family of `f` under reflection in `mirror`.
pub fn reflect_family(f: &HyperplaneFamily, mirror: &Hyperplane) -> HyperplaneFamily {
    let u = f.direction();
    let u2 = reflect_vector(mirror, u);
    // Offsets c map to c - 2 c0 <u,u0>/<u0,u0> (see reflect_hyperplane).
    let factor = rat(2) * u.dot(mirror.normal()) / mirror.normal().norm2();
    let phase2 = f.phase() - &(&factor * mirror.offset());
    HyperplaneFamily::new(f.label.clone(), u2, f.step().clone(), phase2)
        .expect("reflection preserves family structure")
        .reducible(f.reducible)
}

/// Family identity ignoring labels and reducibility flags.
pub fn same_family(a: &HyperplaneFamily, b: &HyperplaneFamily) -> bool {
    a.direction() == b.direction() && a.step() == b.step() && a.phase() == b.phase()
}

#[cfg(test)]
pub(crate) mod test_windows {
    use super::*;
    use crate::arrangement::Chart;
    use crate::scalar::ratio;

    pub fn a2_window(radius: i64) -> Window {
        let chart = Chart::new(
            Vector::zero(3),
            vec![
                Vector::from_ints(&[1, -1, 0]),
                Vector::from_ints(&[0, 1, -1]),
            ],
        )
        .unwrap();
        let fams = vec![
            HyperplaneFamily::new("a", Vector::from_ints(&[1, -1, 0]), rat(1), rat(0)).unwrap(),
            HyperplaneFamily::new("b", Vector::from_ints(&[0, 1, -1]), rat(1), rat(0)).unwrap(),
            HyperplaneFamily::new("c", Vector::from_ints(&[1, 0, -1]), rat(1), rat(0)).unwrap(),
        ];
        let arr = Arrangement::with_chart(3, fams, Some(chart)).unwrap();
        Window::new(arr, Vector::zero(3), rat(radius)).unwrap()
    }

    pub fn c2_window(radius: i64) -> Window {
        // Coordinate families split into integer and half-integer
        // subfamilies so spacings and orbits are modelled faithfully.
        let f = |l: &str, d: &[i64], pn: i64, pd: i64| {
            HyperplaneFamily::new(l, Vector::from_ints(d), rat(1), ratio(pn, pd)).unwrap()
        };
        let fams = vec![
            f("x0", &[1, 0], 0, 1),
            f("x1", &[1, 0], 1, 2),
            f("y0", &[0, 1], 0, 1),
            f("y1", &[0, 1], 1, 2),
            f("d-", &[1, -1], 0, 1),
            f("d+", &[1, 1], 0, 1),
        ];
        let arr = Arrangement::new(2, fams).unwrap();
        Window::new(arr, Vector::zero(2), rat(radius)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_windows::{a2_window, c2_window};
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn a2_alcove_has_three_walls() {
        let w = a2_window(3);
        let b = generic_basepoint(&w).unwrap();
        let alcove = find_alcove(&w, &b).unwrap();
        assert_eq!(alcove.walls.len(), 3);
        assert_eq!(alcove.vertices.len(), 3);
    }

    #[test]
    fn c2_alcove_has_three_walls() {
        let w = c2_window(3);
        let b = generic_basepoint(&w).unwrap();
        let alcove = find_alcove(&w, &b).unwrap();
        assert_eq!(alcove.walls.len(), 3);
    }

    #[test]
    fn tiny_window_is_exhausted() {
        // Radius 1/4 cannot hold the alcove closure of the C-type
        // arrangement (bracketing hyperplanes fall outside the ball).
        let fams = vec![
            HyperplaneFamily::new("x", Vector::from_ints(&[1, 0]), rat(1), rat(0)).unwrap(),
            HyperplaneFamily::new("y", Vector::from_ints(&[0, 1]), rat(1), rat(0)).unwrap(),
            HyperplaneFamily::new("d", Vector::from_ints(&[1, -1]), rat(1), rat(0)).unwrap(),
            HyperplaneFamily::new("e", Vector::from_ints(&[1, 1]), rat(1), rat(0)).unwrap(),
        ];
        let arr = Arrangement::new(2, fams).unwrap();
        let w = Window::new(arr, Vector::new(vec![ratio(1, 8), ratio(1, 16)]), ratio(1, 4))
            .unwrap();
        let b = Vector::new(vec![ratio(1, 8), ratio(1, 16)]);
        assert!(matches!(find_alcove(&w, &b), Err(WeylError::WindowExhausted(_))));
    }

    #[test]
    fn basepoint_on_wall_is_rejected() {
        let w = c2_window(3);
        let err = find_alcove(&w, &Vector::new(vec![rat(0), ratio(1, 3)])).unwrap_err();
        assert!(matches!(err, WeylError::OnWall(..)));
    }

    #[test]
    fn reducible_grid_rejected_as_nonsimplex() {
        // Two orthogonal families only: alcoves are squares.
        let fams = vec![
            HyperplaneFamily::new("x", Vector::from_ints(&[1, 0]), rat(1), rat(0)).unwrap(),
            HyperplaneFamily::new("y", Vector::from_ints(&[0, 1]), rat(1), rat(0)).unwrap(),
        ];
        let arr = Arrangement::new(2, fams).unwrap();
        let w = Window::new(arr, Vector::zero(2), rat(3)).unwrap();
        let b = generic_basepoint(&w).unwrap();
        assert!(matches!(
            find_alcove(&w, &b),
            Err(WeylError::NotSimplex(4, 2))
        ));
    }

    #[test]
    fn isometry_reflection_is_involution() {
        let h = Hyperplane::new(Vector::from_ints(&[2, -1]), ratio(3, 2)).unwrap();
        let s = Isometry::reflection(&h);
        let ss = s.compose(&s);
        assert_eq!(ss, Isometry::identity(2));
        let x = Vector::new(vec![ratio(5, 3), rat(-2)]);
        assert_eq!(s.apply(&x), crate::geometry::reflect(&h, &x));
    }

    #[test]
    fn a2_transitive_radius_three() {
        let w = a2_window(3);
        assert_eq!(alcove_transitivity_check(&w), Ok(true));
    }

    #[test]
    fn c2_transitive_radius_three() {
        let w = c2_window(3);
        assert_eq!(alcove_transitivity_check(&w), Ok(true));
    }

    #[test]
    fn a2_special_points_include_origin() {
        let w = a2_window(3);
        let pts = special_points(&w).unwrap();
        assert!(pts.contains(&Vector::zero(3)));
        for p in &pts {
            for f in &w.arrangement.families {
                assert!(f.index_of_point(p).is_some());
            }
        }
    }

    #[test]
    fn c2_special_points_form_wide_lattice() {
        let w = c2_window(2);
        let pts = special_points(&w).unwrap();
        assert!(!pts.is_empty());
        // Derived enumeration: the special points of this arrangement are
        // the integer points together with the half-integer points with
        // both coordinates half-integral (the wide-spaced intersection
        // lattice); mixed points miss the diagonal classes.
        assert!(pts.contains(&Vector::zero(2)));
        assert!(pts.contains(&Vector::new(vec![ratio(1, 2), ratio(1, 2)])));
        assert!(!pts.contains(&Vector::new(vec![ratio(1, 2), rat(0)])));
        for p in &pts {
            let x2 = &p.coords[0] + &p.coords[0];
            let y2 = &p.coords[1] + &p.coords[1];
            assert!(crate::scalar::is_integer(&x2) && crate::scalar::is_integer(&y2));
            assert!(crate::scalar::is_integer(&(&p.coords[0] - &p.coords[1])));
        }
    }

    #[test]
    fn rank_one_special_points_rejected() {
        let fams =
            vec![HyperplaneFamily::new("x", Vector::from_ints(&[1, 0]), rat(1), rat(0)).unwrap()];
        // Rank 1 in dim 2 is not essential, so the arrangement itself is
        // rejected; in dim 1 it is essential but special_points refuses.
        assert!(Arrangement::new(2, fams).is_err());
        let fams1 =
            vec![HyperplaneFamily::new("x", Vector::from_ints(&[1]), rat(1), rat(0)).unwrap()];
        let arr = Arrangement::new(1, fams1).unwrap();
        let w = Window::new(arr, Vector::zero(1), rat(3)).unwrap();
        assert!(matches!(
            special_points(&w),
            Err(WeylError::InvalidInput(_))
        ));
    }

    #[test]
    fn a2_families_single_orbit() {
        let w = a2_window(3);
        let orbits = family_orbits(&w).unwrap();
        let first = orbits[0];
        assert!(orbits.iter().all(|&o| o == first));
    }

    #[test]
    fn c2_families_three_orbits() {
        let w = c2_window(3);
        let orbits = family_orbits(&w).unwrap();
        let mut distinct: Vec<usize> = orbits.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), 3);
        // Integer x with integer y; half-integer x with half-integer y;
        // the two diagonals together.
        assert_eq!(orbits[0], orbits[2]);
        assert_eq!(orbits[1], orbits[3]);
        assert_eq!(orbits[4], orbits[5]);
        assert_ne!(orbits[0], orbits[1]);
        assert_ne!(orbits[0], orbits[4]);
    }

    #[test]
    fn every_window_wall_conjugate_to_base_wall() {
        // Walk the window and record which family orbit each reached
        // alcove's walls belong to; every orbit must contain a base wall.
        let w = c2_window(3);
        let orbits = family_orbits(&w).unwrap();
        let b = generic_basepoint(&w).unwrap();
        let alcove = find_alcove(&w, &b).unwrap();
        let base_orbits: std::collections::HashSet<usize> =
            alcove.walls.iter().map(|wl| orbits[wl.family]).collect();
        for f in 0..w.arrangement.families.len() {
            assert!(base_orbits.contains(&orbits[f]));
        }
    }
}
