//! Exact plane and space geometry: rational vectors, affine hyperplanes
//! in canonical form, angle classification by squared cosines, and the
//! three-parallel-lines dichotomy used by the slice calculus.
//!
//! Angles are only ever classified through the rational invariant
//! r = <v,w>^2 / (<v,v><w,w>), so every decision here is exact.

use crate::linalg::{span_rank, Matrix};
use crate::scalar::{rat, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("hyperplane normal must be nonzero")]
    ZeroNormal,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("point does not lie on its line")]
    PointOffLine,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("configuration violates the parallel-lines dichotomy: {0}")]
    DichotomyViolation(String),
}

/// A vector (or point) with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    pub coords: Vec<Rat>,
}

impl Vector {
    pub fn new(coords: Vec<Rat>) -> Self {
        Vector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector::new(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Vector::new(vec![Rat::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &Vector) -> Rat {
        assert_eq!(self.dim(), other.dim());
        let mut s = Rat::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if !a.is_zero() && !b.is_zero() {
                s += a * b;
            }
        }
        s
    }

    pub fn norm2(&self) -> Rat {
        self.dot(self)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Vector {
        Vector::new(self.coords.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector::new(self.coords.iter().map(|a| -a.clone()).collect())
    }

    /// `self = lambda * other` for some rational lambda?
    pub fn multiple_of(&self, other: &Vector) -> Option<Rat> {
        if other.is_zero() {
            return if self.is_zero() {
                Some(Rat::zero())
            } else {
                None
            };
        }
        let k = other.coords.iter().position(|c| !c.is_zero()).unwrap();
        let lambda = &self.coords[k] / &other.coords[k];
        if self == &other.scale(&lambda) {
            Some(lambda)
        } else {
            None
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The affine hyperplane `{ x : <normal, x> = offset }`.
///
/// Stored in canonical form: the normal is a primitive integer vector
/// whose first nonzero coordinate is positive, with the offset rescaled
/// to match, so equality of hyperplanes is plain field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vector,
    offset: Rat,
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: Rat) -> Result<Self, GeometryError> {
        if normal.is_zero() {
            return Err(GeometryError::ZeroNormal);
        }
        let (canon, factor) = canonical_direction(&normal);
        Ok(Hyperplane {
            normal: canon,
            offset: &offset * &factor,
        })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Signed evaluation `<normal, x> - offset`.
    pub fn eval(&self, x: &Vector) -> Rat {
        self.normal.dot(x) - self.offset.clone()
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.eval(x).is_zero()
    }

    pub fn is_parallel_to(&self, other: &Hyperplane) -> bool {
        self.normal == other.normal
    }

    /// Squared distance from `x` to the hyperplane.
    pub fn dist2(&self, x: &Vector) -> Rat {
        let e = self.eval(x);
        &(&e * &e) / &self.normal.norm2()
    }

    /// Orthogonal projection of `x` onto the hyperplane.
    pub fn project(&self, x: &Vector) -> Vector {
        let t = self.eval(x) / self.normal.norm2();
        x.sub(&self.normal.scale(&t))
    }
}

/// Canonicalizes a direction: primitive integer vector, first nonzero
/// coordinate positive. Returns the canonical vector and the factor `f`
/// with `canonical = f * input`.
pub fn canonical_direction(v: &Vector) -> (Vector, Rat) {
    assert!(!v.is_zero());
    let mut den_lcm = BigInt::one();
    for c in &v.coords {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v
        .coords
        .iter()
        .map(|c| (c * Rat::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
    }
    let first = ints.iter().find(|n| !n.is_zero()).unwrap();
    if first.is_negative() {
        g = -g;
    }
    let canon = Vector::new(ints.iter().map(|n| Rat::from_integer(n / &g)).collect());
    let factor = Rat::new(den_lcm, g);
    (canon, factor)
}

/// Reflection of `x` in the hyperplane `h`:
/// `x - 2 (<x,v> - c) / <v,v> * v`. Involutive and fixes `h` pointwise.
pub fn reflect(h: &Hyperplane, x: &Vector) -> Vector {
    let t = rat(2) * h.eval(x) / h.normal.norm2();
    x.sub(&h.normal.scale(&t))
}

/// The exact angle classes occurring between walls of affine Weyl
/// arrangements, discriminated by r = cos^2 of the normal angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleClass {
    /// r = 1
    Parallel,
    /// r = 0
    Right,
    /// r = 1/4
    Pi3,
    /// r = 1/2
    Pi4,
    /// r = 3/4
    Pi6,
    Other,
}

impl AngleClass {
    /// Link multiplicity in a Coxeter graph: pi/2 -> 0, pi/3 -> 1,
    /// pi/4 -> 2, pi/6 -> 3. Parallel walls never share an alcove here.
    pub fn link_multiplicity(self) -> Option<u8> {
        match self {
            AngleClass::Right => Some(0),
            AngleClass::Pi3 => Some(1),
            AngleClass::Pi4 => Some(2),
            AngleClass::Pi6 => Some(3),
            AngleClass::Parallel | AngleClass::Other => None,
        }
    }
}

/// Classifies the angle between two hyperplanes via
/// r = <v,w>^2 / (<v,v><w,w>).
pub fn angle_class(h1: &Hyperplane, h2: &Hyperplane) -> AngleClass {
    angle_class_dirs(&h1.normal, &h2.normal)
}

pub fn angle_class_dirs(v: &Vector, w: &Vector) -> AngleClass {
    let num = v.dot(w);
    let r = &(&num * &num) / &(v.norm2() * w.norm2());
    if r == rat(1) {
        AngleClass::Parallel
    } else if r.is_zero() {
        AngleClass::Right
    } else if r == Rat::new(BigInt::from(1), BigInt::from(4)) {
        AngleClass::Pi3
    } else if r == Rat::new(BigInt::from(1), BigInt::from(2)) {
        AngleClass::Pi4
    } else if r == Rat::new(BigInt::from(3), BigInt::from(4)) {
        AngleClass::Pi6
    } else {
        AngleClass::Other
    }
}

/// True iff all points lie on one affine line (exact rank of differences).
pub fn colinear(points: &[Vector]) -> bool {
    if points.len() <= 2 {
        return true;
    }
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.sub(&points[0]).coords)
        .collect();
    span_rank(&diffs) <= 1
}

/// Verdict of [`euclid_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EuclidVerdict {
    Colinear,
    MidlineOrthogonal,
    ConstraintsNotSatisfied,
}

/// Classifies a configuration of three distinct parallel lines with a
/// marked point on each, against the dichotomy for the six lines
/// (the three parallels plus the three connecting lines):
///
/// * all pairwise angles multiples of pi/6 and never pi/2  => the points
///   must be colinear;
/// * all pairwise angles multiples of pi/4 => either colinear, or the
///   middle line lies exactly half way and the outer connecting line is
///   orthogonal to it.
///
/// Returns an error if the marked points violate the preconditions, or a
/// `DichotomyViolation` if a hypothesis-satisfying configuration fails
/// its mandated conclusion (the exhaustive scans assert this never
/// happens).
pub fn euclid_check(
    lines: &[Hyperplane; 3],
    points: &[Vector; 3],
) -> Result<EuclidVerdict, GeometryError> {
    let dim = lines[0].dim();
    for l in lines.iter() {
        if l.dim() != dim {
            return Err(GeometryError::DimensionMismatch(l.dim(), dim));
        }
    }
    if !(lines[0].is_parallel_to(&lines[1]) && lines[0].is_parallel_to(&lines[2])) {
        return Err(GeometryError::Degenerate("lines are not parallel".into()));
    }
    if lines[0] == lines[1] || lines[0] == lines[2] || lines[1] == lines[2] {
        return Err(GeometryError::Degenerate(
            "lines are not pairwise distinct".into(),
        ));
    }
    for (l, p) in lines.iter().zip(points.iter()) {
        if !l.contains(p) {
            return Err(GeometryError::PointOffLine);
        }
    }
    for a in 0..3 {
        for b in (a + 1)..3 {
            if points[a] == points[b] {
                return Err(GeometryError::Degenerate(
                    "coincident marked points; connecting line undefined".into(),
                ));
            }
        }
    }

    // Direction vectors of all six lines: the common parallel direction
    // plus the three connecting lines.
    let parallel_dir = line_direction(&lines[0]);
    let dirs = [
        parallel_dir.clone(),
        parallel_dir.clone(),
        parallel_dir,
        points[1].sub(&points[0]),
        points[2].sub(&points[0]),
        points[2].sub(&points[1]),
    ];

    let mut all_pi6_no_right = true;
    let mut all_pi4 = true;
    for a in 0..6 {
        for b in (a + 1)..6 {
            match angle_class_dirs(&dirs[a], &dirs[b]) {
                AngleClass::Parallel => {}
                AngleClass::Right => {
                    all_pi6_no_right = false;
                }
                AngleClass::Pi3 | AngleClass::Pi6 => {
                    all_pi4 = false;
                }
                AngleClass::Pi4 => {
                    all_pi6_no_right = false;
                }
                AngleClass::Other => {
                    all_pi6_no_right = false;
                    all_pi4 = false;
                }
            }
        }
    }

    let points_colinear = colinear(points);
    if all_pi6_no_right {
        return if points_colinear {
            Ok(EuclidVerdict::Colinear)
        } else {
            Err(GeometryError::DichotomyViolation(
                "pi/6 hypothesis holds but points are not colinear".into(),
            ))
        };
    }
    if all_pi4 {
        if points_colinear {
            return Ok(EuclidVerdict::Colinear);
        }
        // The middle line must lie exactly half way between the others,
        // and the outer connecting line must be orthogonal to it.
        let evals: Vec<Rat> = lines.iter().map(|l| l.offset().clone()).collect();
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| evals[a].cmp(&evals[b]));
        let (lo, mid, hi) = (idx[0], idx[1], idx[2]);
        let halfway = &evals[mid] - &evals[lo] == &evals[hi] - &evals[mid];
        let outer = points[hi].sub(&points[lo]);
        let orthogonal = outer.dot(&line_direction(&lines[mid])).is_zero();
        return if halfway && orthogonal {
            Ok(EuclidVerdict::MidlineOrthogonal)
        } else {
            Err(GeometryError::DichotomyViolation(format!(
                "pi/4 hypothesis holds but halfway={halfway} orthogonal={orthogonal}"
            )))
        };
    }
    Ok(EuclidVerdict::ConstraintsNotSatisfied)
}

/// A direction vector of a line given as a hyperplane of a plane. Only
/// meaningful when the ambient containing the configuration is a plane;
/// for planes embedded in higher dimension the caller supplies
/// configurations inside a fixed 2-dimensional chart, and this picks the
/// direction inside that chart by solving for the orthogonal complement
/// of the normal within the span of the configuration.
fn line_direction(h: &Hyperplane) -> Vector {
    let n = h.normal();
    match n.dim() {
        2 => Vector::new(vec![-n.coords[1].clone(), n.coords[0].clone()]),
        d => {
            // Direction orthogonal to the normal inside the sum-zero
            // chart used by the pi/6 lattice scans.
            let mut rows = vec![n.coords.clone()];
            rows.push(vec![Rat::one(); d]);
            let ker = Matrix::from_rows(rows).kernel();
            assert!(!ker.is_empty(), "line direction undefined");
            Vector::new(ker[0].clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    fn hp(normal: &[i64], offset: i64) -> Hyperplane {
        Hyperplane::new(Vector::from_ints(normal), rat(offset)).unwrap()
    }

    #[test]
    fn reflect_examples() {
        // coordinate reflection
        let h = hp(&[1, 0], 0);
        assert_eq!(
            reflect(&h, &Vector::from_ints(&[3, 1])),
            Vector::from_ints(&[-3, 1])
        );
        // fixed point on the hyperplane
        let h = hp(&[1, 0], 1);
        assert_eq!(
            reflect(&h, &Vector::from_ints(&[1, 5])),
            Vector::from_ints(&[1, 5])
        );
        // swap-negate symmetry
        let h = hp(&[1, 1], 0);
        assert_eq!(
            reflect(&h, &Vector::from_ints(&[1, 0])),
            Vector::from_ints(&[0, -1])
        );
    }

    #[test]
    fn zero_normal_rejected() {
        assert_eq!(
            Hyperplane::new(Vector::from_ints(&[0, 0]), rat(1)),
            Err(GeometryError::ZeroNormal)
        );
    }

    #[test]
    fn angle_class_examples() {
        assert_eq!(
            angle_class(&hp(&[1, 0], 0), &hp(&[0, 1], 0)),
            AngleClass::Right
        );
        assert_eq!(
            angle_class(&hp(&[1, 0], 0), &hp(&[1, 1], 0)),
            AngleClass::Pi4
        );
        // r = 9/12 = 3/4 forced
        assert_eq!(
            angle_class(&hp(&[1, -1, 0], 0), &hp(&[2, -1, -1], 0)),
            AngleClass::Pi6
        );
        assert_eq!(
            angle_class(&hp(&[1, 0], 0), &hp(&[1, 2], 0)),
            AngleClass::Other
        );
        assert_eq!(
            angle_class(&hp(&[1, 0], 0), &hp(&[1, 0], 5)),
            AngleClass::Parallel
        );
    }

    #[test]
    fn colinear_examples() {
        assert!(colinear(&[
            Vector::from_ints(&[0, 0]),
            Vector::from_ints(&[1, 1]),
            Vector::from_ints(&[2, 2]),
        ]));
        assert!(!colinear(&[
            Vector::from_ints(&[0, 0]),
            Vector::from_ints(&[1, 0]),
            Vector::from_ints(&[0, 1]),
        ]));
        assert!(colinear(&[Vector::from_ints(&[5, 5])]));
    }

    #[test]
    fn euclid_check_examples() {
        let lines = [hp(&[1, 0], 0), hp(&[1, 0], 1), hp(&[1, 0], 2)];
        // points on one diagonal
        let verdict = euclid_check(
            &lines,
            &[
                Vector::from_ints(&[0, 0]),
                Vector::from_ints(&[1, 1]),
                Vector::from_ints(&[2, 2]),
            ],
        )
        .unwrap();
        assert_eq!(verdict, EuclidVerdict::Colinear);

        // symmetric pi/4 configuration, l13 horizontal and orthogonal to l2
        let verdict = euclid_check(
            &lines,
            &[
                Vector::from_ints(&[0, 0]),
                Vector::from_ints(&[1, 1]),
                Vector::from_ints(&[2, 0]),
            ],
        )
        .unwrap();
        assert_eq!(verdict, EuclidVerdict::MidlineOrthogonal);

        // slope -1/2 gives r outside {0, 1/4, 1/2, 3/4, 1}
        let lines = [hp(&[1, 0], 0), hp(&[1, 0], 1), hp(&[1, 0], 3)];
        let verdict = euclid_check(
            &lines,
            &[
                Vector::from_ints(&[0, 0]),
                Vector::from_ints(&[1, 1]),
                Vector::from_ints(&[3, 0]),
            ],
        )
        .unwrap();
        assert_eq!(verdict, EuclidVerdict::ConstraintsNotSatisfied);
    }

    #[test]
    fn euclid_check_rejects_bad_input() {
        let lines = [hp(&[1, 0], 0), hp(&[1, 0], 1), hp(&[1, 0], 2)];
        let err = euclid_check(
            &lines,
            &[
                Vector::from_ints(&[0, 0]),
                Vector::from_ints(&[0, 1]), // not on x = 1
                Vector::from_ints(&[2, 0]),
            ],
        )
        .unwrap_err();
        assert_eq!(err, GeometryError::PointOffLine);
    }

    #[test]
    fn pi6_config_in_sum_zero_chart() {
        // Hexagonal data embedded in {sum = 0} of Q^3: normals of A2 type.
        let l = |c: i64| Hyperplane::new(Vector::from_ints(&[1, -1, 0]), rat(c)).unwrap();
        let lines = [l(0), l(1), l(2)];
        // Points marching along the root direction (0,1,-1), which makes
        // an exact pi/6-class angle with the line direction (1,1,-2).
        let pt = |c: i64| Vector::from_ints(&[0, -c, c]);
        let verdict = euclid_check(&lines, &[pt(0), pt(1), pt(2)]).unwrap();
        assert_eq!(verdict, EuclidVerdict::Colinear);
    }

    proptest! {
        #[test]
        fn reflect_is_involutive(coords in proptest::collection::vec(-20i64..20, 3),
                                 normal in proptest::collection::vec(-5i64..5, 3),
                                 offset in -10i64..10) {
            prop_assume!(normal.iter().any(|&c| c != 0));
            let h = Hyperplane::new(Vector::from_ints(&normal), rat(offset)).unwrap();
            let x = Vector::from_ints(&coords);
            prop_assert_eq!(reflect(&h, &reflect(&h, &x)), x);
        }

        #[test]
        fn angle_class_scale_invariant(normal1 in proptest::collection::vec(-5i64..5, 3),
                                       normal2 in proptest::collection::vec(-5i64..5, 3),
                                       num in 1i64..7, den in 1i64..7) {
            prop_assume!(normal1.iter().any(|&c| c != 0));
            prop_assume!(normal2.iter().any(|&c| c != 0));
            let h1 = Hyperplane::new(Vector::from_ints(&normal1), rat(0)).unwrap();
            let h2 = Hyperplane::new(Vector::from_ints(&normal2), rat(0)).unwrap();
            let scaled = Hyperplane::new(
                Vector::from_ints(&normal2).scale(&ratio(num, den)), rat(0)).unwrap();
            prop_assert_eq!(angle_class(&h1, &h2), angle_class(&h1, &scaled));
            prop_assert_eq!(angle_class(&h1, &h2), angle_class(&h2, &h1));
        }
    }
}
