//! Construction of the three matrix models and their exact restricted
//! root decompositions.
//!
//! The decomposition never assumes the expected root data: eigenvalues
//! of ad_x^2 are found by scanning all integers inside a Gershgorin
//! bound, eigenspaces are exact kernels, curvature normals are extracted
//! from the shape-operator action, and a completeness certificate
//! (dimension count) guards the result.

use super::cmat::CMat;
use super::ModelError;
use crate::gaussian::GaussRat;
use crate::linalg::Matrix;
use crate::scalar::{rat, Rat};
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    A2,
    B2,
    BC2,
}

impl ModelKind {
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        match s.to_ascii_lowercase().as_str() {
            "a2" => Ok(ModelKind::A2),
            "b2" => Ok(ModelKind::B2),
            "bc2" => Ok(ModelKind::BC2),
            other => Err(ModelError::UnknownModel(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::A2 => "a2",
            ModelKind::B2 => "b2",
            ModelKind::BC2 => "bc2",
        }
    }
}

/// A matrix Lie algebra with Cartan decomposition data and a regular
/// point.
#[derive(Debug, Clone)]
pub struct CartanModel {
    pub kind: ModelKind,
    pub n: usize,
    pub k_basis: Vec<CMat>,
    pub p_basis: Vec<CMat>,
    /// Indices into p_basis spanning the maximal abelian a.
    pub a_indices: Vec<usize>,
    pub x: CMat,
}

/// One curvature distribution E_i: its basis (E' part first, then the
/// E'' part), the matching k-blocks, and the curvature normal.
#[derive(Debug, Clone)]
pub struct Sphere {
    pub basis: Vec<CMat>,
    pub prime_dim: usize,
    pub dp_dim: usize,
    pub kbasis: Vec<CMat>,
    /// Curvature normal as an element of a.
    pub v: CMat,
    /// Coordinates of v in the a-basis (used for colinearity and the
    /// bracket-ratio calculus, which are affine-invariant).
    pub v_coords: Vec<Rat>,
    /// Squared functional values: norm of the underlying restricted root
    /// relative to the eigenvalue, used to tell long from short roots.
    pub root_norm2: Rat,
}

impl Sphere {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn reducible(&self) -> bool {
        self.dp_dim > 0
    }
}

/// Exact restricted-root decomposition of a model.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub spheres: Vec<Sphere>,
    pub a_basis: Vec<CMat>,
    pub k0_dim: usize,
}

fn i_times(m: &CMat) -> CMat {
    m.scale(&GaussRat::i())
}

impl CartanModel {
    pub fn build(kind: ModelKind) -> Result<CartanModel, ModelError> {
        let model = match kind {
            ModelKind::A2 => Self::build_a2(),
            ModelKind::B2 => Self::build_b2(),
            ModelKind::BC2 => Self::build_bc2(),
        };
        model.validate()?;
        Ok(model)
    }

    /// su(3) with the real-form involution: k = so(3), p the traceless
    /// imaginary symmetric matrices; dim p = 5.
    fn build_a2() -> CartanModel {
        let n = 3;
        let e = |i, j| CMat::unit(n, i, j);
        let k_basis = vec![
            e(0, 1).sub(&e(1, 0)),
            e(0, 2).sub(&e(2, 0)),
            e(1, 2).sub(&e(2, 1)),
        ];
        let p_basis = vec![
            i_times(&e(0, 0).sub(&e(1, 1))),
            i_times(&e(1, 1).sub(&e(2, 2))),
            i_times(&e(0, 1).add(&e(1, 0))),
            i_times(&e(0, 2).add(&e(2, 0))),
            i_times(&e(1, 2).add(&e(2, 1))),
        ];
        // x = i diag(3, 1, -4): differences 2, 5, 7 are distinct.
        let x = p_basis[0]
            .scale_rat(&rat(3))
            .add(&p_basis[1].scale_rat(&rat(4)));
        CartanModel {
            kind: ModelKind::A2,
            n,
            k_basis,
            p_basis,
            a_indices: vec![0, 1],
            x,
        }
    }

    /// so(5) with k = so(2) + so(3), p the 2x3 block; dim p = 6.
    fn build_b2() -> CartanModel {
        let n = 5;
        let e = |i, j| CMat::unit(n, i, j);
        let skew = |i, j| e(i, j).sub(&e(j, i));
        let k_basis = vec![skew(0, 1), skew(2, 3), skew(2, 4), skew(3, 4)];
        let mut p_basis = Vec::new();
        for a in 0..2 {
            for b in 2..5 {
                p_basis.push(skew(a, b));
            }
        }
        // a spanned by the (0,2) and (1,3) blocks; x = 4 a1 + 1 a2.
        let x = p_basis[0]
            .scale_rat(&rat(4))
            .add(&p_basis[4].scale_rat(&rat(1)));
        CartanModel {
            kind: ModelKind::B2,
            n,
            k_basis,
            p_basis,
            a_indices: vec![0, 4],
            x,
        }
    }

    /// su(5) with k = s(u(2) + u(3)), p the complex 2x3 block; real
    /// dimension of p is 12.
    fn build_bc2() -> CartanModel {
        let n = 5;
        let e = |i, j| CMat::unit(n, i, j);
        let skew = |i, j| e(i, j).sub(&e(j, i));
        let sym_i = |i, j| i_times(&e(i, j).add(&e(j, i)));
        let diag_i = |i: usize, j: usize| i_times(&e(i, i).sub(&e(j, j)));

        let mut k_basis = vec![skew(0, 1), sym_i(0, 1), diag_i(0, 1)];
        for a in 2..5 {
            for b in (a + 1)..5 {
                k_basis.push(skew(a, b));
                k_basis.push(sym_i(a, b));
            }
        }
        k_basis.push(diag_i(2, 3));
        k_basis.push(diag_i(3, 4));
        // Mixed-trace generator i diag(3,3,-2,-2,-2).
        let mixed = CMat::from_fn(n, |i, j| {
            if i != j {
                GaussRat::zero()
            } else if i < 2 {
                GaussRat::new(Rat::zero(), rat(3))
            } else {
                GaussRat::new(Rat::zero(), rat(-2))
            }
        });
        k_basis.push(mixed);

        let mut p_basis = Vec::new();
        for a in 0..2 {
            for b in 2..5 {
                p_basis.push(skew(a, b));
                p_basis.push(sym_i(a, b));
            }
        }
        // a spanned by the real (0,2) and (1,3) units; x = 4 a1 + a2.
        let x = p_basis[0]
            .scale_rat(&rat(4))
            .add(&p_basis[8].scale_rat(&rat(1)));
        CartanModel {
            kind: ModelKind::BC2,
            n,
            k_basis,
            p_basis,
            a_indices: vec![0, 8],
            x,
        }
    }

    pub fn a_basis(&self) -> Vec<CMat> {
        self.a_indices
            .iter()
            .map(|&i| self.p_basis[i].clone())
            .collect()
    }

    pub fn dim_p(&self) -> usize {
        self.p_basis.len()
    }

    /// Coordinate solver for a list of matrices (columns of flattened
    /// real coordinates).
    fn coord_solver(mats: &[CMat]) -> CoordSolver {
        CoordSolver::new(mats)
    }

    /// Checks the Cartan relations, anti-Hermitian bases, abelian and
    /// maximal a, and that x is regular enough to be in a.
    pub fn validate(&self) -> Result<(), ModelError> {
        for m in self.k_basis.iter().chain(&self.p_basis) {
            if !m.is_anti_hermitian() {
                return Err(ModelError::Invariant(
                    "basis matrix not anti-Hermitian".into(),
                ));
            }
            if !m.trace().is_zero() {
                return Err(ModelError::Invariant("basis matrix not traceless".into()));
            }
        }
        let k_solver = Self::coord_solver(&self.k_basis);
        let p_solver = Self::coord_solver(&self.p_basis);
        for (label, lhs, rhs, target) in [
            ("[k,k] in k", &self.k_basis, &self.k_basis, &k_solver),
            ("[k,p] in p", &self.k_basis, &self.p_basis, &p_solver),
            ("[p,p] in k", &self.p_basis, &self.p_basis, &k_solver),
        ] {
            for a in lhs.iter() {
                for b in rhs.iter() {
                    let br = a.bracket(b);
                    if target.coords(&br).is_none() {
                        return Err(ModelError::Invariant(label.into()));
                    }
                }
            }
        }
        // a abelian and maximal: the centralizer of a inside p is a.
        let a_basis = self.a_basis();
        for u in &a_basis {
            for v in &a_basis {
                if !u.bracket(v).is_zero() {
                    return Err(ModelError::Invariant("a is not abelian".into()));
                }
            }
        }
        // Solve [Z, a_i] = 0 for Z in p: stack the bracket maps.
        let dim = self.dim_p();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for ab in &a_basis {
            // columns: coords of [b_u, ab] flattened
            let cols: Vec<Vec<Rat>> = self
                .p_basis
                .iter()
                .map(|b| b.bracket(ab).flatten())
                .collect();
            let m = Matrix::from_cols(cols);
            for r in 0..m.rows {
                rows.push(m.row(r).to_vec());
            }
        }
        let stacked = Matrix::from_rows(rows);
        let null = stacked.kernel();
        if null.len() != a_basis.len() {
            return Err(ModelError::Invariant(format!(
                "centralizer of a in p has dimension {} != {}",
                null.len(),
                a_basis.len()
            )));
        }
        let _ = dim;
        Ok(())
    }

    /// Exact restricted-root decomposition with curvature normals.
    pub fn decompose(&self) -> Result<Decomposition, ModelError> {
        let p_solver = Self::coord_solver(&self.p_basis);
        let k_solver = Self::coord_solver(&self.k_basis);
        let dim_p = self.dim_p();
        let dim_k = self.k_basis.len();

        // Matrix of ad_x^2 on p and on k.
        let ad2 = |basis: &[CMat], solver: &CoordSolver| -> Matrix {
            let cols: Vec<Vec<Rat>> = basis
                .iter()
                .map(|b| {
                    let img = self.x.bracket(&self.x.bracket(b));
                    solver.coords(&img).expect("ad_x^2 preserves the subspace")
                })
                .collect();
            Matrix::from_cols(cols)
        };
        let ap = ad2(&self.p_basis, &p_solver);
        let ak = ad2(&self.k_basis, &k_solver);

        let eig_p = integer_eigenspaces(&ap)?;
        let eig_k = integer_eigenspaces(&ak)?;
        let total_p: usize = eig_p.iter().map(|(_, v)| v.len()).sum();
        let total_k: usize = eig_k.iter().map(|(_, v)| v.len()).sum();
        if total_p != dim_p || total_k != dim_k {
            return Err(ModelError::Inconsistency(format!(
                "eigenspace scan incomplete: p {total_p}/{dim_p}, k {total_k}/{dim_k}"
            )));
        }

        let a_basis = self.a_basis();
        // Regularity: the zero eigenspace on p must be exactly a.
        let zero_dim = eig_p
            .iter()
            .find(|(mu, _)| mu.is_zero())
            .map_or(0, |(_, v)| v.len());
        if zero_dim != a_basis.len() {
            return Err(ModelError::DegeneratePoint(format!(
                "centralizer of x in p has dimension {zero_dim}"
            )));
        }
        let k0_dim = eig_k
            .iter()
            .find(|(mu, _)| mu.is_zero())
            .map_or(0, |(_, v)| v.len());

        let mats_of = |coords: &[Vec<Rat>], basis: &[CMat]| -> Vec<CMat> {
            coords
                .iter()
                .map(|c| {
                    let mut m = CMat::zero(self.n);
                    for (b, coeff) in basis.iter().zip(c) {
                        if !coeff.is_zero() {
                            m = m.add(&b.scale_rat(coeff));
                        }
                    }
                    m
                })
                .collect()
        };

        // Gram of a for extracting curvature normals.
        let adim = a_basis.len();
        let mut gram_a = Matrix::zero(adim, adim);
        for i in 0..adim {
            for j in 0..adim {
                gram_a[(i, j)] = a_basis[i].inner(&a_basis[j]);
            }
        }

        // Per nonzero eigenvalue: basis matrices, the matching k-block,
        // and the curvature normal from the shape-operator action.
        struct RawSpace {
            mu: Rat,
            basis: Vec<CMat>,
            kblock: Vec<CMat>,
            v_coords: Vec<Rat>,
            v: CMat,
        }
        let mut raw: Vec<RawSpace> = Vec::new();
        for (mu, vecs) in &eig_p {
            if mu.is_zero() {
                continue;
            }
            let basis = mats_of(vecs, &self.p_basis);
            let kvecs = eig_k
                .iter()
                .find(|(km, _)| km == mu)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| {
                    ModelError::Inconsistency(format!("no k-block for eigenvalue {mu}"))
                })?;
            let kblock = mats_of(&kvecs, &self.k_basis);
            if kblock.len() != basis.len() {
                return Err(ModelError::Inconsistency(format!(
                    "k-block dimension {} != p-block dimension {} at eigenvalue {mu}",
                    kblock.len(),
                    basis.len()
                )));
            }
            // Shape operator: for each basis X solve [W, x] = X in the
            // k-block, then A_xi X = -[W, xi] must equal <xi, v> X.
            let bracket_cols: Vec<Vec<Rat>> = kblock
                .iter()
                .map(|w| w.bracket(&self.x).flatten())
                .collect();
            let bmat = Matrix::from_cols(bracket_cols);
            let mut v_vals: Option<Vec<Rat>> = None;
            for xmat in &basis {
                let w_coords = bmat.solve_unique(&xmat.flatten()).ok_or_else(|| {
                    ModelError::SolveFailed("check-solve within the k-block".into())
                })?;
                let mut w = CMat::zero(self.n);
                for (kb, c) in kblock.iter().zip(&w_coords) {
                    if !c.is_zero() {
                        w = w.add(&kb.scale_rat(c));
                    }
                }
                // For each a-basis xi: -[W, xi] = c_r X exactly.
                let mut cs = Vec::with_capacity(adim);
                for xi in &a_basis {
                    let img = w.bracket(xi).neg();
                    let c = proportion(&img, xmat).ok_or_else(|| {
                        ModelError::Inconsistency(
                            "shape operator does not act as a scalar on an eigenspace".into(),
                        )
                    })?;
                    cs.push(c);
                }
                match &v_vals {
                    None => v_vals = Some(cs),
                    Some(prev) => {
                        if prev != &cs {
                            return Err(ModelError::Inconsistency(
                                "curvature normal differs within one eigenspace".into(),
                            ));
                        }
                    }
                }
            }
            let cs = v_vals.expect("nonempty eigenspace");
            // <a_r, v> = c_r: solve the Gram system.
            let v_coords = gram_a
                .solve_unique(&cs)
                .ok_or_else(|| ModelError::SolveFailed("curvature normal extraction".into()))?;
            let mut v = CMat::zero(self.n);
            for (ab, c) in a_basis.iter().zip(&v_coords) {
                if !c.is_zero() {
                    v = v.add(&ab.scale_rat(c));
                }
            }
            raw.push(RawSpace {
                mu: mu.clone(),
                basis,
                kblock,
                v_coords,
                v,
            });
        }

        // Group raw eigenspaces by equal curvature normal: p_lambda and
        // p_{2 lambda} share v; accidental eigenvalue ratios do not.
        let mut spheres: Vec<Sphere> = Vec::new();
        let mut used = vec![false; raw.len()];
        for i in 0..raw.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let mut members = vec![i];
            for j in (i + 1)..raw.len() {
                if !used[j] && raw[j].v_coords == raw[i].v_coords {
                    used[j] = true;
                    members.push(j);
                }
            }
            if members.len() > 2 {
                return Err(ModelError::Inconsistency(
                    "more than two root spaces share a curvature normal".into(),
                ));
            }
            // Sort: the smaller |eigenvalue| is p_lambda (E'), the other
            // p_{2 lambda} (E'').
            members.sort_by(|&a, &b| raw[a].mu.abs().cmp(&raw[b].mu.abs()));
            if members.len() == 2 {
                let r = &raw[members[1]].mu / &raw[members[0]].mu;
                if r != rat(4) {
                    return Err(ModelError::Inconsistency(
                        "paired eigenvalues are not in ratio 4".into(),
                    ));
                }
            }
            let mut basis = Vec::new();
            let mut kbasis = Vec::new();
            let prime_dim = raw[members[0]].basis.len();
            let mut dp_dim = 0;
            for (slot, &m) in members.iter().enumerate() {
                if slot == 1 {
                    dp_dim = raw[m].basis.len();
                }
                basis.extend(raw[m].basis.iter().cloned());
                kbasis.extend(raw[m].kblock.iter().cloned());
            }
            // Relative squared root norm: |mu| * ||v||^2 = ||h||^2 scale.
            let root_norm2 = raw[members[0]].mu.abs() * raw[members[0]].v.norm2();
            spheres.push(Sphere {
                basis,
                prime_dim: if members.len() == 2 {
                    prime_dim
                } else {
                    prime_dim
                },
                dp_dim,
                kbasis,
                v: raw[members[0]].v.clone(),
                v_coords: raw[members[0]].v_coords.clone(),
                root_norm2,
            });
        }
        // In the irreducible case prime_dim is the whole sphere.
        for s in &mut spheres {
            if s.dp_dim == 0 {
                s.prime_dim = s.basis.len();
            }
        }

        let total: usize = spheres.iter().map(Sphere::dim).sum();
        if total + a_basis.len() != dim_p {
            return Err(ModelError::Inconsistency(format!(
                "sphere dimensions {total} + a {} != dim p {dim_p}",
                a_basis.len()
            )));
        }
        spheres.sort_by(|a, b| a.v_coords.cmp(&b.v_coords));
        Ok(Decomposition {
            spheres,
            a_basis,
            k0_dim,
        })
    }
}

/// Proportionality constant c with img = c * base, if any (base nonzero).
fn proportion(img: &CMat, base: &CMat) -> Option<Rat> {
    if img.is_zero() {
        return Some(Rat::zero());
    }
    // find a nonzero entry of base
    for i in 0..base.n {
        for j in 0..base.n {
            let b = &base[(i, j)];
            if !b.is_zero() {
                let t = &img[(i, j)];
                let c = if !b.re.is_zero() {
                    &t.re / &b.re
                } else {
                    &t.im / &b.im
                };
                return if img == &base.scale_rat(&c) {
                    Some(c)
                } else {
                    None
                };
            }
        }
    }
    None
}

/// All integer eigenvalues of a rational matrix known to be semisimple
/// with integer spectrum, with exact kernel bases. The scan range is the
/// Gershgorin bound; completeness is certified by the caller through a
/// dimension count.
fn integer_eigenspaces(a: &Matrix) -> Result<Vec<(Rat, Vec<Vec<Rat>>)>, ModelError> {
    let n = a.rows;
    let mut bound = Rat::zero();
    for i in 0..n {
        let mut s = Rat::zero();
        for j in 0..n {
            s += a[(i, j)].abs();
        }
        if s > bound {
            bound = s;
        }
    }
    let b = bound
        .ceil()
        .to_integer()
        .to_i64()
        .ok_or_else(|| ModelError::Inconsistency("Gershgorin bound overflow".into()))?;
    let mut out = Vec::new();
    for mu in -b..=b {
        let mut shifted = a.clone();
        for i in 0..n {
            let v = &shifted[(i, i)] - &rat(mu);
            shifted[(i, i)] = v;
        }
        let ker = shifted.kernel();
        if !ker.is_empty() {
            out.push((rat(mu), ker));
        }
    }
    Ok(out)
}

/// Solves coordinates of matrices with respect to a fixed basis via a
/// precomputed pseudo-inverse of the flattened basis matrix.
pub(super) struct CoordSolver {
    basis_flat: Matrix,
    normal_inv: Matrix,
}

impl CoordSolver {
    pub(super) fn new(mats: &[CMat]) -> Self {
        let cols: Vec<Vec<Rat>> = mats.iter().map(CMat::flatten).collect();
        let basis_flat = Matrix::from_cols(cols);
        let gram = basis_flat.transpose().mul(&basis_flat);
        let normal_inv = gram.inverse().expect("basis must be linearly independent");
        CoordSolver {
            basis_flat,
            normal_inv,
        }
    }

    /// Coordinates of m in the basis, or None if m is outside the span.
    pub(super) fn coords(&self, m: &CMat) -> Option<Vec<Rat>> {
        let b = m.flatten();
        let rhs = self.basis_flat.transpose().apply(&b);
        let c = self.normal_inv.apply(&rhs);
        // verify exact membership
        let back = self.basis_flat.apply(&c);
        if back == b {
            Some(c)
        } else {
            None
        }
    }
}
