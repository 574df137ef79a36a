//! The homogeneous structure on a decomposed model, precomputed as
//! exact structure constants over the eigenspace bases.
//!
//! Tangent vectors are coordinate vectors over the concatenated sphere
//! bases; the bracket [X-check, Y] splits into the tangential part
//! (the structure Gamma) and the a-part (the second fundamental form),
//! and both are tabulated once so that identity trials are plain
//! bilinear algebra afterwards.

use super::cartan::{CartanModel, CoordSolver, Decomposition, Sphere};
use super::cmat::CMat;
use super::ModelError;
use crate::linalg::Matrix;
use crate::scalar::{Rat, RatSampler};
use num_traits::Zero;

/// Coordinates over the concatenated sphere bases.
pub type TangentVec = Vec<Rat>;
/// Coordinates over the a-basis.
pub type NormalVec = Vec<Rat>;

#[derive(Debug, Clone)]
pub struct GammaSystem {
    pub model: CartanModel,
    pub dec: Decomposition,
    pub dim: usize,
    pub sphere_offsets: Vec<usize>,
    pub sphere_of: Vec<usize>,
    /// Inner products of the tangent basis (block diagonal: distinct
    /// eigenspaces are orthogonal).
    pub gram: Matrix,
    pub gram_a: Matrix,
    /// <v_i, v_j> in the model inner product.
    pub vinner: Matrix,
    gamma_table: Vec<Vec<TangentVec>>,
    alpha_table: Vec<Vec<NormalVec>>,
    checks: Vec<CMat>,
}

impl GammaSystem {
    pub fn new(model: CartanModel) -> Result<Self, ModelError> {
        let dec = model.decompose()?;
        Self::from_parts(model, dec)
    }

    pub fn from_parts(model: CartanModel, dec: Decomposition) -> Result<Self, ModelError> {
        let mut basis: Vec<CMat> = Vec::new();
        let mut sphere_offsets = Vec::new();
        let mut sphere_of = Vec::new();
        for (i, s) in dec.spheres.iter().enumerate() {
            sphere_offsets.push(basis.len());
            for b in &s.basis {
                basis.push(b.clone());
                sphere_of.push(i);
            }
        }
        let dim = basis.len();
        let adim = dec.a_basis.len();

        let mut gram = Matrix::zero(dim, dim);
        for u in 0..dim {
            for w in 0..dim {
                gram[(u, w)] = basis[u].inner(&basis[w]);
            }
        }
        let mut gram_a = Matrix::zero(adim, adim);
        for u in 0..adim {
            for w in 0..adim {
                gram_a[(u, w)] = dec.a_basis[u].inner(&dec.a_basis[w]);
            }
        }
        let ns = dec.spheres.len();
        let mut vinner = Matrix::zero(ns, ns);
        for i in 0..ns {
            for j in 0..ns {
                vinner[(i, j)] = dec.spheres[i].v.inner(&dec.spheres[j].v);
            }
        }

        // X-check per basis column, solved inside the matching k-block.
        let mut checks = Vec::with_capacity(dim);
        for (u, b) in basis.iter().enumerate() {
            let s = &dec.spheres[sphere_of[u]];
            checks.push(solve_check(&model, s, b)?);
        }

        // Full-p coordinate solver: tangent basis followed by a.
        let mut full: Vec<CMat> = basis.clone();
        full.extend(dec.a_basis.iter().cloned());
        let solver = CoordSolver::new(&full);

        let mut gamma_table = vec![vec![Vec::new(); dim]; dim];
        let mut alpha_table = vec![vec![Vec::new(); dim]; dim];
        for u in 0..dim {
            for w in 0..dim {
                let br = checks[u].bracket(&basis[w]);
                let coords = solver
                    .coords(&br)
                    .ok_or_else(|| ModelError::Inconsistency("bracket leaves k + p".into()))?;
                gamma_table[u][w] = coords[..dim].to_vec();
                alpha_table[u][w] = coords[dim..].to_vec();
            }
        }

        Ok(GammaSystem {
            model,
            dec,
            dim,
            sphere_offsets,
            sphere_of,
            gram,
            gram_a,
            vinner,
            gamma_table,
            alpha_table,
            checks,
        })
    }

    pub fn sphere_count(&self) -> usize {
        self.dec.spheres.len()
    }

    pub fn sphere(&self, i: usize) -> &Sphere {
        &self.dec.spheres[i]
    }

    /// Column range of sphere i.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.sphere_offsets[i];
        start..start + self.dec.spheres[i].dim()
    }

    /// Column range of the E' (resp. E'') part of sphere i.
    pub fn prime_range(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.sphere_offsets[i];
        start..start + self.dec.spheres[i].prime_dim
    }

    pub fn dp_range(&self, i: usize) -> std::ops::Range<usize> {
        let s = &self.dec.spheres[i];
        let start = self.sphere_offsets[i] + s.prime_dim;
        start..start + s.dp_dim
    }

    pub fn zero_vec(&self) -> TangentVec {
        vec![Rat::zero(); self.dim]
    }

    pub fn is_zero_vec(v: &[Rat]) -> bool {
        v.iter().all(Rat::is_zero)
    }

    /// True iff v is supported inside sphere i.
    pub fn supported_in(&self, v: &[Rat], i: usize) -> bool {
        let r = self.block_range(i);
        v.iter()
            .enumerate()
            .all(|(u, c)| r.contains(&u) || c.is_zero())
    }

    /// The unique sphere supporting v, if a single one does.
    pub fn support_sphere(&self, v: &[Rat]) -> Option<usize> {
        let mut found = None;
        for (u, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let s = self.sphere_of[u];
                match found {
                    None => found = Some(s),
                    Some(prev) if prev != s => return None,
                    _ => {}
                }
            }
        }
        found
    }

    /// The E_k-component (a coordinate mask).
    pub fn project_block(&self, v: &[Rat], k: usize) -> TangentVec {
        let mut out = self.zero_vec();
        for u in self.block_range(k) {
            out[u] = v[u].clone();
        }
        out
    }

    /// Component in the E' or E'' sub-block of sphere k.
    pub fn project_sub(&self, v: &[Rat], k: usize, doubleprime: bool) -> TangentVec {
        let mut out = self.zero_vec();
        let r = if doubleprime {
            self.dp_range(k)
        } else {
            self.prime_range(k)
        };
        for u in r {
            out[u] = v[u].clone();
        }
        out
    }

    pub fn inner(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for u in 0..self.dim {
            if a[u].is_zero() {
                continue;
            }
            for w in 0..self.dim {
                if !b[w].is_zero() && !self.gram[(u, w)].is_zero() {
                    s += &a[u] * &b[w] * &self.gram[(u, w)];
                }
            }
        }
        s
    }

    pub fn norm2(&self, a: &[Rat]) -> Rat {
        self.inner(a, a)
    }

    pub fn inner_a(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let n = a.len();
        let mut s = Rat::zero();
        for u in 0..n {
            for w in 0..n {
                if !a[u].is_zero() && !b[w].is_zero() {
                    s += &a[u] * &b[w] * &self.gram_a[(u, w)];
                }
            }
        }
        s
    }

    /// Gamma with the first argument in a single eigenspace (the zero
    /// vector is allowed and maps to zero).
    pub fn gamma(&self, x: &[Rat], y: &[Rat]) -> Result<TangentVec, ModelError> {
        if self.support_sphere(x).is_none() && !Self::is_zero_vec(x) {
            return Err(ModelError::MixedArgument);
        }
        Ok(self.gamma_mixed(x, y))
    }

    /// Gamma extended blockwise over the first argument (finite sums).
    pub fn gamma_mixed(&self, x: &[Rat], y: &[Rat]) -> TangentVec {
        let mut out = self.zero_vec();
        for u in 0..self.dim {
            if x[u].is_zero() {
                continue;
            }
            for w in 0..self.dim {
                if y[w].is_zero() {
                    continue;
                }
                let f = &x[u] * &y[w];
                for (o, t) in out.iter_mut().zip(&self.gamma_table[u][w]) {
                    if !t.is_zero() {
                        *o += &f * t;
                    }
                }
            }
        }
        out
    }

    /// Second fundamental form in a-coordinates.
    pub fn alpha(&self, x: &[Rat], y: &[Rat]) -> NormalVec {
        let adim = self.dec.a_basis.len();
        let mut out = vec![Rat::zero(); adim];
        for u in 0..self.dim {
            if x[u].is_zero() {
                continue;
            }
            for w in 0..self.dim {
                if y[w].is_zero() {
                    continue;
                }
                let f = &x[u] * &y[w];
                for (o, t) in out.iter_mut().zip(&self.alpha_table[u][w]) {
                    if !t.is_zero() {
                        *o += &f * t;
                    }
                }
            }
        }
        out
    }

    /// nabla_X alpha(Y, Z) = <Gamma_X Y, Z> (v_j - v_k) for X in E_i,
    /// Y in E_j, Z in E_k; returned in a-coordinates.
    pub fn nabla_alpha(
        &self,
        x: &[Rat],
        j: usize,
        y: &[Rat],
        k: usize,
        z: &[Rat],
    ) -> Result<NormalVec, ModelError> {
        let g = self.gamma(x, y)?;
        let c = self.inner(&g, z);
        let diff = self.v_diff(j, k);
        Ok(diff.into_iter().map(|d| &c * &d).collect())
    }

    /// v_j - v_k in a-coordinates.
    pub fn v_diff(&self, j: usize, k: usize) -> NormalVec {
        self.dec.spheres[j]
            .v_coords
            .iter()
            .zip(&self.dec.spheres[k].v_coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    /// The bracket ratio (v_j - v_k)/(v_i - v_k) in the zero-extended
    /// convention, computed on a-coordinates (affine invariant).
    pub fn bracket_ratio(&self, j: usize, i: usize, k: usize) -> Rat {
        let vj = crate::geometry::Vector::new(self.dec.spheres[j].v_coords.clone());
        let vi = crate::geometry::Vector::new(self.dec.spheres[i].v_coords.clone());
        let vk = crate::geometry::Vector::new(self.dec.spheres[k].v_coords.clone());
        crate::slices::codazzi_ratio(&vi, &vj, &vk).unwrap_or_else(|_| Rat::zero())
    }

    /// X-check of a tangent vector supported in one sphere, as a matrix.
    pub fn check_of(&self, x: &[Rat]) -> Result<CMat, ModelError> {
        if self.support_sphere(x).is_none() && !Self::is_zero_vec(x) {
            return Err(ModelError::MixedArgument);
        }
        let mut w = CMat::zero(self.model.n);
        for (u, c) in x.iter().enumerate() {
            if !c.is_zero() {
                w = w.add(&self.checks[u].scale_rat(c));
            }
        }
        Ok(w)
    }

    /// Tangent vector with given coefficients inside sphere i.
    pub fn from_sphere_coeffs(&self, i: usize, coeffs: &[Rat]) -> TangentVec {
        let mut v = self.zero_vec();
        for (slot, c) in self.block_range(i).zip(coeffs) {
            v[slot] = c.clone();
        }
        v
    }

    pub fn random_in_sphere(&self, i: usize, sampler: &mut RatSampler) -> TangentVec {
        let d = self.dec.spheres[i].dim();
        let coeffs: Vec<Rat> = (0..d).map(|_| sampler.next_rat()).collect();
        self.from_sphere_coeffs(i, &coeffs)
    }

    /// Random vector in the E' or E'' part of sphere i.
    pub fn random_in_sub(
        &self,
        i: usize,
        doubleprime: bool,
        sampler: &mut RatSampler,
    ) -> TangentVec {
        let mut v = self.zero_vec();
        let r = if doubleprime {
            self.dp_range(i)
        } else {
            self.prime_range(i)
        };
        for slot in r {
            v[slot] = sampler.next_rat();
        }
        v
    }

    /// <X wedge Y, Z wedge W> = <X,Z><Y,W> - <X,W><Y,Z>.
    pub fn wedge_inner(&self, x: &[Rat], y: &[Rat], z: &[Rat], w: &[Rat]) -> Rat {
        self.inner(x, z) * self.inner(y, w) - self.inner(x, w) * self.inner(y, z)
    }
}

/// Solves [W, x] = X for W in the sphere's k-block.
fn solve_check(model: &CartanModel, sphere: &Sphere, x: &CMat) -> Result<CMat, ModelError> {
    let cols: Vec<Vec<Rat>> = sphere
        .kbasis
        .iter()
        .map(|w| w.bracket(&model.x).flatten())
        .collect();
    let sol = Matrix::from_cols(cols)
        .solve_unique(&x.flatten())
        .ok_or_else(|| ModelError::SolveFailed("check solve".into()))?;
    let mut w = CMat::zero(model.n);
    for (kb, c) in sphere.kbasis.iter().zip(&sol) {
        if !c.is_zero() {
            w = w.add(&kb.scale_rat(c));
        }
    }
    // The defining equation holds exactly by construction; verify anyway.
    if w.bracket(&model.x) != *x {
        return Err(ModelError::SolveFailed("check residual nonzero".into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cartan::ModelKind;
    use crate::scalar::rat;

    fn system(kind: ModelKind) -> GammaSystem {
        GammaSystem::new(CartanModel::build(kind).unwrap()).unwrap()
    }

    #[test]
    fn check_solve_examples() {
        let g = system(ModelKind::A2);
        // X = 0 gives zero.
        let z = g.zero_vec();
        assert!(g.check_of(&z).unwrap().is_zero());
        // Defining equation and linearity on a basis vector.
        let x = g.from_sphere_coeffs(0, &[rat(1)]);
        let w = g.check_of(&x).unwrap();
        let mut xmat = CMat::zero(g.model.n);
        for (u, c) in x.iter().enumerate() {
            if !c.is_zero() {
                xmat = xmat.add(
                    &g.dec.spheres[g.sphere_of[u]].basis[u - g.sphere_offsets[g.sphere_of[u]]]
                        .scale_rat(c),
                );
            }
        }
        assert_eq!(w.bracket(&g.model.x), xmat);
        let x2 = g.from_sphere_coeffs(0, &[rat(2)]);
        let w2 = g.check_of(&x2).unwrap();
        assert_eq!(w2, w.scale_rat(&rat(2)));
    }

    #[test]
    fn alpha_is_inner_times_normal() {
        for kind in [ModelKind::A2, ModelKind::B2, ModelKind::BC2] {
            let g = system(kind);
            let mut sampler = RatSampler::new(11);
            for i in 0..g.sphere_count() {
                for j in 0..g.sphere_count() {
                    let x = g.random_in_sphere(i, &mut sampler);
                    let y = g.random_in_sphere(j, &mut sampler);
                    let a = g.alpha(&x, &y);
                    let expect: Vec<Rat> = if i == j {
                        let c = g.inner(&x, &y);
                        g.dec.spheres[i].v_coords.iter().map(|v| &c * v).collect()
                    } else {
                        vec![Rat::zero(); g.dec.a_basis.len()]
                    };
                    assert_eq!(a, expect, "{kind:?} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn mixed_first_argument_rejected() {
        let g = system(ModelKind::A2);
        let mut x = g.from_sphere_coeffs(0, &[rat(1)]);
        let y = g.from_sphere_coeffs(1, &[rat(1)]);
        x[g.sphere_offsets[1]] = rat(1);
        assert!(matches!(g.gamma(&x, &y), Err(ModelError::MixedArgument)));
    }

    #[test]
    fn gamma_bilinear_consistency() {
        let g = system(ModelKind::B2);
        let mut sampler = RatSampler::new(3);
        let x = g.random_in_sphere(0, &mut sampler);
        let y = g.random_in_sphere(1, &mut sampler);
        let z = g.random_in_sphere(2, &mut sampler);
        let yz: Vec<Rat> = y.iter().zip(&z).map(|(a, b)| a + b).collect();
        let lhs = g.gamma(&x, &yz).unwrap();
        let rhs: Vec<Rat> = g
            .gamma(&x, &y)
            .unwrap()
            .iter()
            .zip(&g.gamma(&x, &z).unwrap())
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(lhs, rhs);
    }
}
