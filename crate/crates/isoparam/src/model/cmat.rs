//! Square matrices over Gaussian rationals: the carrier of the matrix
//! Lie algebra models. The invariant inner product is -Re trace(XY),
//! positive definite on anti-Hermitian matrices.

use crate::gaussian::GaussRat;
use crate::scalar::Rat;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMat {
    pub n: usize,
    a: Vec<GaussRat>,
}

impl CMat {
    pub fn zero(n: usize) -> Self {
        CMat {
            n,
            a: vec![GaussRat::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> GaussRat) -> Self {
        let mut m = CMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Elementary real matrix unit E_{ij}.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = CMat::zero(n);
        m[(i, j)] = GaussRat::one();
        m
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(GaussRat::is_zero)
    }

    pub fn add(&self, o: &CMat) -> CMat {
        CMat {
            n: self.n,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        CMat {
            n: self.n,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self) -> CMat {
        CMat {
            n: self.n,
            a: self.a.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, s: &GaussRat) -> CMat {
        CMat {
            n: self.n,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn scale_rat(&self, s: &Rat) -> CMat {
        CMat {
            n: self.n,
            a: self.a.iter().map(|x| x.scale(s)).collect(),
        }
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = CMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let lik = &self[(i, k)];
                if lik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    if o[(k, j)].is_zero() {
                        continue;
                    }
                    let add = lik * &o[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &add;
                }
            }
        }
        out
    }

    pub fn bracket(&self, o: &CMat) -> CMat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn is_anti_hermitian(&self) -> bool {
        self.adjoint() == self.neg()
    }

    pub fn trace(&self) -> GaussRat {
        let mut t = GaussRat::zero();
        for i in 0..self.n {
            t = &t + &self[(i, i)];
        }
        t
    }

    /// Invariant inner product -Re trace(XY).
    pub fn inner(&self, o: &CMat) -> Rat {
        let mut t = Rat::zero();
        for i in 0..self.n {
            for k in 0..self.n {
                if self[(i, k)].is_zero() || o[(k, i)].is_zero() {
                    continue;
                }
                let prod = &self[(i, k)] * &o[(k, i)];
                t += prod.re;
            }
        }
        -t
    }

    pub fn norm2(&self) -> Rat {
        self.inner(self)
    }

    /// Real coordinates: interleaved (re, im) of all entries.
    pub fn flatten(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(2 * self.n * self.n);
        for g in &self.a {
            out.push(g.re.clone());
            out.push(g.im.clone());
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = GaussRat;
    fn index(&self, (i, j): (usize, usize)) -> &GaussRat {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussRat {
        &mut self.a[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn i_g() -> GaussRat {
        GaussRat::i()
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi() {
        let a = CMat::unit(3, 0, 1).sub(&CMat::unit(3, 1, 0));
        let b = CMat::unit(3, 1, 2).sub(&CMat::unit(3, 2, 1));
        let c = CMat::unit(3, 0, 2)
            .scale(&i_g())
            .add(&CMat::unit(3, 2, 0).scale(&i_g()));
        assert_eq!(a.bracket(&b), b.bracket(&a).neg());
        let jac = a
            .bracket(&b.bracket(&c))
            .add(&b.bracket(&c.bracket(&a)))
            .add(&c.bracket(&a.bracket(&b)));
        assert!(jac.is_zero());
    }

    #[test]
    fn inner_positive_definite_on_anti_hermitian() {
        let x = CMat::unit(2, 0, 1).sub(&CMat::unit(2, 1, 0));
        assert!(x.is_anti_hermitian());
        assert_eq!(x.norm2(), rat(2));
        let y = CMat::unit(2, 0, 0)
            .scale(&i_g())
            .sub(&CMat::unit(2, 1, 1).scale(&i_g()));
        assert!(y.is_anti_hermitian());
        assert_eq!(y.norm2(), rat(2));
        assert_eq!(x.inner(&y), rat(0));
    }
}
