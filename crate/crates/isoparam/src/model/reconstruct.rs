//! Reconstruction of the homogeneous structure from the second
//! fundamental form and its covariant derivative.
//!
//! The input is the nabla-alpha tensor on eigenspace bases (plus the
//! curvature normals, which encode alpha). Off-diagonal blocks are
//! recovered by dividing out (v_j - v_k); the diagonal blocks of
//! reducible eigenspaces are recovered by writing target vectors as sums
//! of cross products and pushing the commutation relation through them.
//! The reconstruction never reads the direct Gamma table; the acceptance
//! suite compares the two tables entry by entry.

use super::gamma::{GammaSystem, NormalVec, TangentVec};
use super::ModelError;
use crate::geometry::Vector;
use crate::linalg::Matrix;
use crate::scalar::{rat, Rat};
use num_traits::Zero;

/// The nabla-alpha tensor on basis triples, in a-coordinates:
/// values[u][w][z] = nabla_{B_u} alpha (B_w, B_z).
#[derive(Debug, Clone)]
pub struct NablaData {
    pub values: Vec<Vec<Vec<NormalVec>>>,
}

/// Materializes the tensor from a model (the data "as produced at the
/// basepoint"); reconstruction afterwards reads only this.
pub fn nabla_tensor(g: &GammaSystem) -> Result<NablaData, ModelError> {
    let dim = g.dim;
    let mut values = vec![vec![Vec::new(); dim]; dim];
    for u in 0..dim {
        let mut x = g.zero_vec();
        x[u] = rat(1);
        for w in 0..dim {
            let mut y = g.zero_vec();
            y[w] = rat(1);
            let j = g.sphere_of[w];
            let mut per_z = Vec::with_capacity(dim);
            for z in 0..dim {
                let mut zc = g.zero_vec();
                zc[z] = rat(1);
                let k = g.sphere_of[z];
                per_z.push(g.nabla_alpha(&x, j, &y, k, &zc)?);
            }
            values[u][w] = per_z;
        }
    }
    Ok(NablaData { values })
}

/// Partially reconstructed table: None marks cells not yet recovered.
struct ReconTable {
    cells: Vec<Vec<Option<TangentVec>>>,
}

impl ReconTable {
    fn new(dim: usize) -> Self {
        ReconTable {
            cells: vec![vec![None; dim]; dim],
        }
    }

    /// Applies the partial structure to coordinate vectors; fails if a
    /// missing cell is hit with a nonzero coefficient.
    fn apply(&self, g: &GammaSystem, x: &[Rat], y: &[Rat]) -> Result<TangentVec, ModelError> {
        let mut out = g.zero_vec();
        for (u, cu) in x.iter().enumerate() {
            if cu.is_zero() {
                continue;
            }
            for (w, cw) in y.iter().enumerate() {
                if cw.is_zero() {
                    continue;
                }
                let Some(cell) = &self.cells[u][w] else {
                    return Err(ModelError::Inconsistency(format!(
                        "reconstruction requires unrecovered cell ({u},{w})"
                    )));
                };
                let f = cu * cw;
                for (o, t) in out.iter_mut().zip(cell) {
                    if !t.is_zero() {
                        *o += &f * t;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Reconstructs the full Gamma table from the nabla-alpha tensor.
/// Returns recon[u][w] = coordinates of Gamma_{B_u} B_w.
pub fn reconstruct_gamma(
    g: &GammaSystem,
    nabla: &NablaData,
) -> Result<Vec<Vec<TangentVec>>, ModelError> {
    let dim = g.dim;
    let ns = g.sphere_count();
    let mut table = ReconTable::new(dim);

    // Block Gram inverses for turning pairings <Gamma, B_z> into block
    // coordinates.
    let mut block_gram_inv: Vec<Matrix> = Vec::with_capacity(ns);
    for k in 0..ns {
        let r = g.block_range(k);
        let n = r.len();
        let mut m = Matrix::zero(n, n);
        for (a, ua) in r.clone().enumerate() {
            for (b, ub) in r.clone().enumerate() {
                m[(a, b)] = g.gram[(ua, ub)].clone();
            }
        }
        block_gram_inv.push(
            m.inverse()
                .ok_or_else(|| ModelError::Inconsistency("singular block Gram matrix".into()))?,
        );
    }

    // Step 1: every component outside the second argument's sphere comes
    // from the tensor: <Gamma_{B_u} B_w, B_z>(v_j - v_k) = N[u][w][z].
    // The E_j component of a cross block vanishes; diagonal E_i parts
    // are left for step 2.
    for u in 0..dim {
        let i = g.sphere_of[u];
        for w in 0..dim {
            let j = g.sphere_of[w];
            let mut vec = g.zero_vec();
            for k in 0..ns {
                if k == j {
                    continue;
                }
                if i == j && k == i {
                    continue;
                }
                let diff = Vector::new(g.v_diff(j, k));
                let mut pairings = Vec::new();
                for z in g.block_range(k) {
                    let val = Vector::new(nabla.values[u][w][z].clone());
                    let c = if val.is_zero() {
                        Rat::zero()
                    } else {
                        val.multiple_of(&diff).ok_or_else(|| {
                            ModelError::Inconsistency(
                                "nabla-alpha value not parallel to the normal difference".into(),
                            )
                        })?
                    };
                    pairings.push(c);
                }
                let coords = block_gram_inv[k].apply(&pairings);
                for (slot, z) in g.block_range(k).enumerate() {
                    vec[z] = coords[slot].clone();
                }
            }
            // Diagonal reducible cells keep a placeholder until step 2.
            if i == j && g.sphere(i).reducible() {
                // store the off-sphere part only; completed later
                table.cells[u][w] = Some(vec);
            } else {
                // cross cells: E_j component zero; irreducible diagonal
                // cells are entirely zero on their own sphere.
                table.cells[u][w] = Some(vec);
            }
        }
    }

    // Step 2: the missing E_i part of diagonal blocks on reducible
    // spheres.
    for i in 0..ns {
        if !g.sphere(i).reducible() {
            continue;
        }
        // E'' x E'': the sphere part vanishes. (Cells already hold the
        // off-sphere part, which the tensor forces to zero.)

        // E' x E'' -> E': commutation through cross-product expansions
        // of the E'' basis vectors.
        let dp_cols: Vec<usize> = g.dp_range(i).collect();
        let prime_cols: Vec<usize> = g.prime_range(i).collect();
        let mut case1: Vec<(usize, usize, TangentVec)> = Vec::new();
        for &w in &dp_cols {
            let mut target = g.zero_vec();
            target[w] = rat(1);
            let expansion = expand_as_products(g, &table, i, &target, true)?;
            for &u in &prime_cols {
                let mut x = g.zero_vec();
                x[u] = rat(1);
                let value = push_through(g, &table, i, &x, &expansion)?;
                case1.push((u, w, value));
            }
        }
        for (u, w, value) in &case1 {
            let cell = table.cells[*u][*w].as_mut().expect("step-1 cell");
            for z in g.block_range(i) {
                cell[z] = value[z].clone();
            }
        }

        // E'' x E' -> E': expand the second argument in E'.
        for &w in &prime_cols {
            let mut target = g.zero_vec();
            target[w] = rat(1);
            let expansion = expand_as_products(g, &table, i, &target, false)?;
            for &u in &dp_cols {
                let mut x = g.zero_vec();
                x[u] = rat(1);
                let value = push_through(g, &table, i, &x, &expansion)?;
                let cell = table.cells[u][w].as_mut().expect("step-1 cell");
                for z in g.block_range(i) {
                    cell[z] = value[z].clone();
                }
            }
        }

        // E' x E' -> E'': skew duality against the E' x E'' values.
        let dpn = dp_cols.len();
        let mut dp_gram = Matrix::zero(dpn, dpn);
        for (a, &ua) in dp_cols.iter().enumerate() {
            for (b, &ub) in dp_cols.iter().enumerate() {
                dp_gram[(a, b)] = g.gram[(ua, ub)].clone();
            }
        }
        let dp_gram_inv = dp_gram
            .inverse()
            .ok_or_else(|| ModelError::Inconsistency("singular E'' Gram".into()))?;
        for &u in &prime_cols {
            for &w in &prime_cols {
                let mut y = g.zero_vec();
                y[w] = rat(1);
                let mut pairings = Vec::with_capacity(dpn);
                for &z in &dp_cols {
                    // <Gamma_{B_u} B_w, B_z> = -<B_w, Gamma_{B_u} B_z>
                    let guz = case1
                        .iter()
                        .find(|(a, b, _)| *a == u && *b == z)
                        .map(|(_, _, v)| v.clone())
                        .expect("case-1 value");
                    pairings.push(-g.inner(&y, &guz));
                }
                let coords = dp_gram_inv.apply(&pairings);
                let cell = table.cells[u][w].as_mut().expect("step-1 cell");
                for z in g.block_range(i) {
                    cell[z] = Rat::zero();
                }
                for (slot, &z) in dp_cols.iter().enumerate() {
                    cell[z] = coords[slot].clone();
                }
            }
        }
    }

    Ok(table
        .cells
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| c.expect("all cells recovered"))
                .collect()
        })
        .collect())
}

/// Expands a target vector supported in sphere i as a combination of
/// cross products Gamma_{B_y} B_z over sphere pairs (j, k) avoiding i.
/// `prefer_irreducible` restricts the candidates to irreducible sphere
/// pairs first (enough for the doubled part) and widens only on demand.
struct Expansion {
    /// (y column, z column, coefficient)
    terms: Vec<(usize, usize, Rat)>,
}

fn expand_as_products(
    g: &GammaSystem,
    table: &ReconTable,
    i: usize,
    target: &[Rat],
    prefer_irreducible: bool,
) -> Result<Expansion, ModelError> {
    let ns = g.sphere_count();
    let mut pair_sets: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut irred_pairs = Vec::new();
    let mut all_pairs = Vec::new();
    for j in 0..ns {
        for k in 0..ns {
            if j == k || j == i || k == i {
                continue;
            }
            if !affine_span_avoids_origin(g, &[i, j, k]) {
                continue;
            }
            all_pairs.push((j, k));
            if !g.sphere(j).reducible() && !g.sphere(k).reducible() {
                irred_pairs.push((j, k));
            }
        }
    }
    if prefer_irreducible {
        pair_sets.push(irred_pairs);
    }
    pair_sets.push(all_pairs);

    for pairs in pair_sets {
        let mut cols: Vec<TangentVec> = Vec::new();
        let mut labels: Vec<(usize, usize)> = Vec::new();
        for &(j, k) in &pairs {
            for y in g.block_range(j) {
                for z in g.block_range(k) {
                    let Some(cell) = &table.cells[y][z] else {
                        continue;
                    };
                    cols.push(cell.clone());
                    labels.push((y, z));
                }
            }
        }
        if cols.is_empty() {
            continue;
        }
        let m = Matrix::from_cols(cols);
        if let Some(sol) = m.solve(target) {
            let terms = labels
                .into_iter()
                .zip(sol)
                .filter(|(_, c)| !c.is_zero())
                .map(|((y, z), c)| (y, z, c))
                .collect();
            return Ok(Expansion { terms });
        }
    }
    Err(ModelError::Inconsistency(
        "target not in the span of cross products".into(),
    ))
}

/// Applies the commutation relation through an expansion:
/// Gamma_X (sum c Gamma_Y Z) = sum c (Gamma_Y Gamma_X Z
/// + Gamma_{Gamma_X Y - Gamma_Y X} Z), everything evaluated on the
/// partial table.
fn push_through(
    g: &GammaSystem,
    table: &ReconTable,
    _i: usize,
    x: &[Rat],
    expansion: &Expansion,
) -> Result<TangentVec, ModelError> {
    let mut out = g.zero_vec();
    for (y, z, c) in &expansion.terms {
        let mut yv = g.zero_vec();
        yv[*y] = rat(1);
        let mut zv = g.zero_vec();
        zv[*z] = rat(1);
        let gxz = table.apply(g, x, &zv)?;
        let t1 = table.apply(g, &yv, &gxz)?;
        let gxy = table.apply(g, x, &yv)?;
        let gyx = table.apply(g, &yv, x)?;
        let d: TangentVec = gxy.iter().zip(&gyx).map(|(a, b)| a - b).collect();
        let t2 = table.apply(g, &d, &zv)?;
        for (o, (a, b)) in out.iter_mut().zip(t1.iter().zip(&t2)) {
            *o += &(a + b) * c;
        }
    }
    Ok(out)
}

fn affine_span_avoids_origin(g: &GammaSystem, spheres: &[usize]) -> bool {
    let adim = g.dec.a_basis.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for r in 0..adim {
        rows.push(
            spheres
                .iter()
                .map(|&s| g.sphere(s).v_coords[r].clone())
                .collect(),
        );
    }
    rows.push(vec![rat(1); spheres.len()]);
    let mut rhs = vec![Rat::zero(); adim];
    rhs.push(rat(1));
    Matrix::from_rows(rows).solve(&rhs).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cartan::{CartanModel, ModelKind};

    fn direct_table(g: &GammaSystem) -> Vec<Vec<TangentVec>> {
        let dim = g.dim;
        let mut out = vec![vec![Vec::new(); dim]; dim];
        for u in 0..dim {
            let mut x = g.zero_vec();
            x[u] = rat(1);
            for w in 0..dim {
                let mut y = g.zero_vec();
                y[w] = rat(1);
                out[u][w] = g.gamma(&x, &y).unwrap();
            }
        }
        out
    }

    #[test]
    fn reconstruction_matches_direct_a2_b2() {
        for kind in [ModelKind::A2, ModelKind::B2] {
            let g = GammaSystem::new(CartanModel::build(kind).unwrap()).unwrap();
            let tensor = nabla_tensor(&g).unwrap();
            let recon = reconstruct_gamma(&g, &tensor).unwrap();
            assert_eq!(recon, direct_table(&g), "{kind:?}");
        }
    }

    #[test]
    fn reconstruction_matches_direct_bc2() {
        let g = GammaSystem::new(CartanModel::build(ModelKind::BC2).unwrap()).unwrap();
        let tensor = nabla_tensor(&g).unwrap();
        let recon = reconstruct_gamma(&g, &tensor).unwrap();
        let direct = direct_table(&g);
        // Compare cell by cell for a readable failure.
        for u in 0..g.dim {
            for w in 0..g.dim {
                assert_eq!(
                    recon[u][w], direct[u][w],
                    "cell ({u},{w}) spheres ({},{})",
                    g.sphere_of[u], g.sphere_of[w]
                );
            }
        }
    }
}
