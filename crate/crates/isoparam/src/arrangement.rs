//! Families of parallel equidistant hyperplanes, affine charts for
//! working inside subspaces, and finite windows of an arrangement.
//!
//! A family stores the functional form `<u, x> = phase + k * step`
//! (k over the integers) with `u` a canonical primitive integer
//! direction. The geometric spacing is `step / ||u||`, so spacings are
//! compared through their exact squares.

use crate::geometry::{canonical_direction, Hyperplane, Vector};
use crate::linalg::{span_rank, Matrix};
use crate::scalar::{rat, Rat};
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("family step must be positive")]
    NonPositiveStep,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("family direction {0} does not lie in the chart")]
    DirectionOutsideChart(String),
    #[error("directions do not span the space: rank {0} < dim {1}")]
    NotEssential(usize, usize),
    #[error("chart basis is not linearly independent")]
    DegenerateChart,
}

/// One family of parallel equidistant hyperplanes
/// `{ x : <direction, x> = phase + k*step }`, k integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HyperplaneFamily {
    pub label: String,
    direction: Vector,
    step: Rat,
    phase: Rat,
    /// Marks families whose eigenspaces are reducible (doubled roots;
    /// rendered as concentric circles on the Dynkin diagram).
    pub reducible: bool,
}

impl HyperplaneFamily {
    pub fn new(
        label: impl Into<String>,
        direction: Vector,
        step: Rat,
        phase: Rat,
    ) -> Result<Self, ArrangementError> {
        if direction.is_zero() {
            return Err(ArrangementError::ZeroDirection);
        }
        if !step.is_positive() {
            return Err(ArrangementError::NonPositiveStep);
        }
        let (canon, factor) = canonical_direction(&direction);
        let step2 = &step * &factor.abs();
        let mut phase2 = &phase * &factor;
        // Normalize the phase into [0, step).
        phase2 = &phase2 - &(&step2 * &(&phase2 / &step2).floor());
        Ok(HyperplaneFamily {
            label: label.into(),
            direction: canon,
            step: step2,
            phase: phase2,
            reducible: false,
        })
    }

    pub fn reducible(mut self, flag: bool) -> Self {
        self.reducible = flag;
        self
    }

    pub fn direction(&self) -> &Vector {
        &self.direction
    }

    pub fn step(&self) -> &Rat {
        &self.step
    }

    pub fn phase(&self) -> &Rat {
        &self.phase
    }

    pub fn offset(&self, k: i64) -> Rat {
        &self.phase + &(&self.step * &rat(k))
    }

    pub fn hyperplane(&self, k: i64) -> Hyperplane {
        Hyperplane::new(self.direction.clone(), self.offset(k)).expect("nonzero direction")
    }

    /// Geometric spacing squared between consecutive hyperplanes.
    pub fn spacing2(&self) -> Rat {
        &(&self.step * &self.step) / &self.direction.norm2()
    }

    /// The index k with `<direction, x> = offset(k)`, if `x` lies on a
    /// hyperplane of the family.
    pub fn index_of_point(&self, x: &Vector) -> Option<i64> {
        let t = (self.direction.dot(x) - self.phase.clone()) / self.step.clone();
        if t.denom() == &num_bigint::BigInt::from(1) {
            use num_traits::ToPrimitive;
            t.numer().to_i64()
        } else {
            None
        }
    }

    /// Indices of family hyperplanes meeting the closed ball
    /// `||x - center|| <= radius`.
    pub fn indices_in_ball(&self, center: &Vector, radius: &Rat) -> Vec<i64> {
        let m = self.direction.dot(center);
        let bound = radius * radius * self.direction.norm2();
        let in_ball = |k: i64| {
            let e = self.offset(k) - m.clone();
            &e * &e <= bound
        };
        let start = {
            let t = (&m - &self.phase) / self.step.clone();
            use num_traits::ToPrimitive;
            t.floor()
                .to_integer()
                .to_i64()
                .expect("window index overflow")
        };
        let mut ks = Vec::new();
        let mut k = start;
        while in_ball(k) {
            ks.push(k);
            k -= 1;
        }
        let mut k = start + 1;
        while in_ball(k) {
            ks.push(k);
            k += 1;
        }
        ks.sort_unstable();
        ks
    }
}

/// An affine chart `base + span(basis)` for arrangements living inside a
/// proper subspace of the ambient space (restrictions of root systems).
/// Points are always kept in ambient coordinates; the chart is used for
/// solving and sampling inside the subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub base: Vector,
    pub basis: Vec<Vector>,
}

impl Chart {
    pub fn new(base: Vector, basis: Vec<Vector>) -> Result<Self, ArrangementError> {
        let rows: Vec<Vec<Rat>> = basis.iter().map(|v| v.coords.clone()).collect();
        if span_rank(&rows) != basis.len() {
            return Err(ArrangementError::DegenerateChart);
        }
        Ok(Chart { base, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Ambient point of chart coordinates `y`.
    pub fn point(&self, y: &[Rat]) -> Vector {
        let mut p = self.base.clone();
        for (b, c) in self.basis.iter().zip(y) {
            p = p.add(&b.scale(c));
        }
        p
    }

    /// Chart coordinates of an ambient point, if it lies on the chart.
    pub fn coords(&self, x: &Vector) -> Option<Vec<Rat>> {
        let cols: Vec<Vec<Rat>> = self.basis.iter().map(|v| v.coords.clone()).collect();
        let m = Matrix::from_cols(cols);
        m.solve_unique(&x.sub(&self.base).coords)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.coords(x).is_some()
    }

    /// True if the direction lies in the chart's translation space.
    pub fn contains_direction(&self, v: &Vector) -> bool {
        let mut rows: Vec<Vec<Rat>> = self.basis.iter().map(|b| b.coords.clone()).collect();
        let r = span_rank(&rows);
        rows.push(v.coords.clone());
        span_rank(&rows) == r
    }
}

/// A hyperplane arrangement given by finitely many families, optionally
/// confined to an affine chart.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub dim: usize,
    pub families: Vec<HyperplaneFamily>,
    pub chart: Option<Chart>,
}

impl Arrangement {
    pub fn new(dim: usize, families: Vec<HyperplaneFamily>) -> Result<Self, ArrangementError> {
        Arrangement::with_chart(dim, families, None)
    }

    pub fn with_chart(
        dim: usize,
        families: Vec<HyperplaneFamily>,
        chart: Option<Chart>,
    ) -> Result<Self, ArrangementError> {
        for f in &families {
            if f.direction().dim() != dim {
                return Err(ArrangementError::DimensionMismatch);
            }
            if let Some(c) = &chart {
                if !c.contains_direction(f.direction()) {
                    return Err(ArrangementError::DirectionOutsideChart(f.label.clone()));
                }
            }
        }
        let arr = Arrangement {
            dim,
            families,
            chart,
        };
        let rank = arr.rank();
        let target = arr.chart_dim();
        if rank < target {
            return Err(ArrangementError::NotEssential(rank, target));
        }
        Ok(arr)
    }

    /// Dimension of the space the arrangement actually lives in.
    pub fn chart_dim(&self) -> usize {
        self.chart.as_ref().map_or(self.dim, Chart::dim)
    }

    /// Rank: dimension of the span of the family directions.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rat>> = self
            .families
            .iter()
            .map(|f| f.direction().coords.clone())
            .collect();
        span_rank(&rows)
    }

    /// The family (and index) whose hyperplane passes through `x`, if any.
    pub fn on_hyperplane(&self, x: &Vector) -> Option<(usize, i64)> {
        for (fi, f) in self.families.iter().enumerate() {
            if let Some(k) = f.index_of_point(x) {
                return Some((fi, k));
            }
        }
        None
    }

    /// Minimal gap (functional scale) between parallel hyperplanes in
    /// direction `dir`, over all families sharing that direction.
    /// This is the union spacing entering the canonical root lengths.
    pub fn min_gap_in_direction(&self, dir: &Vector) -> Option<Rat> {
        let same: Vec<&HyperplaneFamily> = self
            .families
            .iter()
            .filter(|f| f.direction() == dir)
            .collect();
        if same.is_empty() {
            return None;
        }
        // Within one family the gap is its step; between two families of
        // offsets a + kZ*s and b + kZ*t the minimal gap is computed by
        // merging offsets over one common period.
        let mut best: Option<Rat> = None;
        let mut consider = |g: Rat| {
            if g.is_positive() && best.as_ref().is_none_or(|b| &g < b) {
                best = Some(g);
            }
        };
        for f in &same {
            consider(f.step().clone());
        }
        for (i, f) in same.iter().enumerate() {
            for g in &same[i + 1..] {
                // Offsets differ by (phase_g - phase_f) mod gcd-lattice of
                // the two steps. The step lattice of the union is the set
                // { phase difference + Z s + Z t }.
                let d = g.phase() - f.phase();
                let lattice = rational_gcd(f.step(), g.step());
                let rem = &d - &(&lattice * &(&d / &lattice).floor());
                consider(rem.clone());
                consider(&lattice - &rem);
            }
        }
        best
    }
}

/// Gcd of two positive rationals: the generator of Z a + Z b.
pub fn rational_gcd(a: &Rat, b: &Rat) -> Rat {
    use num_integer::Integer;
    let den = a.denom().lcm(b.denom());
    let na = (a * Rat::from_integer(den.clone())).to_integer();
    let nb = (b * Rat::from_integer(den.clone())).to_integer();
    Rat::new(na.gcd(&nb), den)
}

/// A finite window of an arrangement: the hyperplanes meeting a closed
/// rational ball, together with the family regenerators.
#[derive(Debug, Clone)]
pub struct Window {
    pub arrangement: Arrangement,
    pub center: Vector,
    pub radius: Rat,
    pub planes: Vec<WindowPlane>,
}

#[derive(Debug, Clone)]
pub struct WindowPlane {
    pub family: usize,
    pub k: i64,
    pub plane: Hyperplane,
}

impl Window {
    pub fn new(
        arrangement: Arrangement,
        center: Vector,
        radius: Rat,
    ) -> Result<Self, ArrangementError> {
        if center.dim() != arrangement.dim {
            return Err(ArrangementError::DimensionMismatch);
        }
        let mut planes = Vec::new();
        for (fi, f) in arrangement.families.iter().enumerate() {
            for k in f.indices_in_ball(&center, &radius) {
                planes.push(WindowPlane {
                    family: fi,
                    k,
                    plane: f.hyperplane(k),
                });
            }
        }
        Ok(Window {
            arrangement,
            center,
            radius,
            planes,
        })
    }

    pub fn contains_point(&self, x: &Vector) -> bool {
        let d = x.sub(&self.center);
        d.norm2() <= &self.radius * &self.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn family_canonicalization() {
        // Direction (-2, 0), step 1, phase 1/3 is the same family as
        // (1, 0) with step 1/2... no: steps scale by |factor| = 1/2.
        let f =
            HyperplaneFamily::new("a", Vector::from_ints(&[-2, 0]), rat(1), ratio(1, 3)).unwrap();
        assert_eq!(f.direction(), &Vector::from_ints(&[1, 0]));
        assert_eq!(f.step(), &ratio(1, 2));
        // phase: -1/2 * 1/3 = -1/6 -> normalized into [0, 1/2) as 1/3.
        assert_eq!(f.phase(), &ratio(1, 3));
        // Same hyperplane set as the original: <(-2,0),x> = 1/3 + k
        // means x_1 = -1/6 - k/2, i.e. <(1,0),x> = 1/3 + k'/2.
        assert!(f
            .index_of_point(&Vector::new(vec![ratio(-1, 6), rat(0)]))
            .is_some());
    }

    #[test]
    fn indices_in_ball_are_symmetric() {
        let f = HyperplaneFamily::new("a", Vector::from_ints(&[1, 0]), rat(1), rat(0)).unwrap();
        let ks = f.indices_in_ball(&Vector::zero(2), &rat(3));
        assert_eq!(ks, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn union_gap_across_split_families() {
        // Integer and half-integer subfamilies in the same direction.
        let a = HyperplaneFamily::new("int", Vector::from_ints(&[1, 0]), rat(1), rat(0)).unwrap();
        let b =
            HyperplaneFamily::new("half", Vector::from_ints(&[1, 0]), rat(1), ratio(1, 2)).unwrap();
        let arr = Arrangement::new(
            2,
            vec![
                a,
                b,
                HyperplaneFamily::new("y", Vector::from_ints(&[0, 1]), rat(1), rat(0)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(
            arr.min_gap_in_direction(&Vector::from_ints(&[1, 0])),
            Some(ratio(1, 2))
        );
        assert_eq!(
            arr.min_gap_in_direction(&Vector::from_ints(&[0, 1])),
            Some(rat(1))
        );
    }

    #[test]
    fn chart_membership() {
        let chart = Chart::new(
            Vector::zero(3),
            vec![
                Vector::from_ints(&[1, -1, 0]),
                Vector::from_ints(&[0, 1, -1]),
            ],
        )
        .unwrap();
        assert!(chart.contains(&Vector::from_ints(&[1, 0, -1])));
        assert!(!chart.contains(&Vector::from_ints(&[1, 1, 1])));
        assert!(chart.contains_direction(&Vector::from_ints(&[2, -1, -1])));
        assert!(!chart.contains_direction(&Vector::from_ints(&[1, 1, 1])));
    }
}
