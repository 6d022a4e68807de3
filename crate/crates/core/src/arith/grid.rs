use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{frac, int, DensePoly, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    /// `{-1+1/n, -1+3/n, ..., 1-1/n}`, n points.
    In,
    /// `{-1, -1+2/n, ..., 1}`, n+1 points.
    Out,
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridKind::In => write!(f, "in"),
            GridKind::Out => write!(f, "out"),
        }
    }
}

impl FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" | "IN" => Ok(GridKind::In),
            "out" | "OUT" => Ok(GridKind::Out),
            other => Err(Error::param(format!("unknown grid kind {other:?}"))),
        }
    }
}

/// An equispaced point set in [-1, 1], materialized in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    kind: GridKind,
    n: usize,
    points: Vec<Scalar>,
}

impl Grid {
    pub fn new(kind: GridKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("grid parameter n must be positive"));
        }
        let n_i = n as i64;
        let points = match kind {
            GridKind::In => (0..n_i).map(|i| frac(2 * i + 1 - n_i, n_i)).collect(),
            GridKind::Out => (0..=n_i).map(|i| frac(2 * i - n_i, n_i)).collect(),
        };
        Ok(Grid { kind, n, points })
    }

    pub fn inner(n: usize) -> Result<Self> {
        Grid::new(GridKind::In, n)
    }

    pub fn outer(n: usize) -> Result<Self> {
        Grid::new(GridKind::Out, n)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, t: &Scalar) -> bool {
        self.points.binary_search(t).is_ok()
    }
}

/// `x -> scale * x + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub scale: Scalar,
    pub offset: Scalar,
}

impl AffineMap {
    pub fn apply(&self, x: &Scalar) -> Scalar {
        &self.scale * x + &self.offset
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        if self.scale.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let scale = Scalar::one() / &self.scale;
        let offset = -&self.offset * &scale;
        Ok(AffineMap { scale, offset })
    }
}

/// The stretch `x -> (n+1)/n * x` carrying `D^in_{n+1}` onto `D^out_n`.
pub fn stretch_map(n: usize) -> Result<AffineMap> {
    if n == 0 {
        return Err(Error::param("stretch map needs n >= 1"));
    }
    Ok(AffineMap {
        scale: frac(n as i64 + 1, n as i64),
        offset: Scalar::zero(),
    })
}

/// Hamming weight `m` of an n-bit string mapped to `t = 1 - 2m/n`.
pub fn weight_to_point(n: usize, m: usize) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::param("n must be positive"));
    }
    if m > n {
        return Err(Error::param(format!("weight {m} outside 0..={n}")));
    }
    Ok(Scalar::one() - frac(2 * m as i64, n as i64))
}

/// Inverse of [`weight_to_point`]: `m = (1 - t) n / 2`.
pub fn point_to_weight(n: usize, t: &Scalar) -> Result<usize> {
    if n == 0 {
        return Err(Error::param("n must be positive"));
    }
    let m = (Scalar::one() - t) * int(n as i64) / int(2);
    if !m.is_integer() || m < Scalar::zero() || m > int(n as i64) {
        return Err(Error::NotOnGrid(t.to_string()));
    }
    Ok(m.to_integer().try_into().expect("weight fits in usize"))
}

/// `(f, g) = (1/n) * sum_{x in D^in_n} f(x) g(x)`.
pub fn inner_product(f: &DensePoly, g: &DensePoly, n: usize) -> Result<Scalar> {
    let grid = Grid::inner(n)?;
    Ok(inner_product_on(f, g, &grid))
}

pub(crate) fn inner_product_on(f: &DensePoly, g: &DensePoly, grid: &Grid) -> Scalar {
    let total: Scalar = grid.points().iter().map(|x| f.eval(x) * g.eval(x)).sum();
    total / int(grid.n() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn pts(v: &[(i64, i64)]) -> Vec<Scalar> {
        v.iter().map(|&(a, b)| frac(a, b)).collect()
    }

    #[test]
    fn grid_examples() {
        assert_eq!(Grid::inner(2).unwrap().points(), pts(&[(-1, 2), (1, 2)]));
        assert_eq!(Grid::outer(2).unwrap().points(), pts(&[(-1, 1), (0, 1), (1, 1)]));
        assert_eq!(
            Grid::inner(3).unwrap().points(),
            pts(&[(-2, 3), (0, 1), (2, 3)])
        );
        assert!(Grid::inner(0).is_err());
        assert!(Grid::outer(0).is_err());
    }

    #[test]
    fn grid_cardinality_and_order() {
        for n in 1..=50 {
            let din = Grid::inner(n).unwrap();
            let dout = Grid::outer(n).unwrap();
            assert_eq!(din.len(), n);
            assert_eq!(dout.len(), n + 1);
            assert!(din.points().windows(2).all(|w| w[0] < w[1]));
            assert!(dout.points().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn stretch_and_shift_identities() {
        for n in 1..=200usize {
            let map = stretch_map(n).unwrap();
            let image: Vec<Scalar> = Grid::inner(n + 1)
                .unwrap()
                .points()
                .iter()
                .map(|x| map.apply(x))
                .collect();
            assert_eq!(image, Grid::outer(n).unwrap().points());

            let shifted: BTreeSet<Scalar> = Grid::outer(n)
                .unwrap()
                .points()
                .iter()
                .map(|x| x - frac(1, n as i64))
                .collect();
            assert!(Grid::inner(n)
                .unwrap()
                .points()
                .iter()
                .all(|x| shifted.contains(x)));
        }
    }

    #[test]
    fn stretch_n4_examples() {
        let map = stretch_map(4).unwrap();
        let y = map.apply(&frac(3, 5));
        assert_eq!(y, frac(3, 4));
        assert!(!Grid::inner(5).unwrap().contains(&frac(3, 5)));
        assert!(!Grid::outer(4).unwrap().contains(&y));
        assert_eq!(map.apply(&frac(2, 5)), frac(1, 2));
        assert_eq!(map.inverse().unwrap().apply(&y), frac(3, 5));
    }

    #[test]
    fn weight_point_examples() {
        assert_eq!(weight_to_point(2, 0).unwrap(), int(1));
        assert_eq!(weight_to_point(2, 1).unwrap(), int(0));
        assert_eq!(weight_to_point(4, 3).unwrap(), frac(-1, 2));
        assert!(weight_to_point(4, 5).is_err());
        for n in 1..30 {
            for m in 0..=n {
                let t = weight_to_point(n, m).unwrap();
                assert_eq!(point_to_weight(n, &t).unwrap(), m);
            }
        }
        assert!(matches!(point_to_weight(4, &frac(1, 3)), Err(Error::NotOnGrid(_))));
        assert!(matches!(point_to_weight(4, &int(3)), Err(Error::NotOnGrid(_))));
    }

    #[test]
    fn inner_product_examples() {
        let one = DensePoly::constant(int(1));
        let x = DensePoly::x();
        for n in 1..10 {
            assert_eq!(inner_product(&one, &one, n).unwrap(), int(1));
            assert_eq!(inner_product(&x, &one, n).unwrap(), int(0));
        }
        assert_eq!(inner_product(&x, &x, 4).unwrap(), frac(5, 16));
    }

    #[test]
    fn inner_product_vanishing() {
        // (x - 1/2)(x + 1/2) vanishes on D^in_2 but is not the zero polynomial.
        let f = DensePoly::new(vec![frac(-1, 4), int(0), int(1)]);
        assert_eq!(inner_product(&f, &f, 2).unwrap(), int(0));
        assert!(inner_product(&f, &f, 3).unwrap() > int(0));
    }
}
