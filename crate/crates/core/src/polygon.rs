//! Exact Newton polygons.
//!
//! Hulls are built from exactly known points only. Points whose value is
//! only bounded below ([`Valuation::AtLeast`]) never become vertices; they
//! are checked against the finished hull and reject it if they dip below.

use crate::arith::Valuation;
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPoint<T> {
    pub index: usize,
    pub val: Valuation<T>,
}

impl<T> HullPoint<T> {
    pub fn exact(index: usize, v: T) -> Self {
        HullPoint {
            index,
            val: Valuation::Exact(v),
        }
    }

    pub fn at_least(index: usize, v: T) -> Self {
        HullPoint {
            index,
            val: Valuation::AtLeast(v),
        }
    }
}

/// Lower convex hull of `(index, value)` points together with its slopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon<T> {
    vertices: Vec<(usize, T)>,
    slopes: Vec<T>,
}

impl<T: ExactScalar> NewtonPolygon<T> {
    /// Strict corners, by increasing index.
    pub fn vertices(&self) -> &[(usize, T)] {
        &self.vertices
    }

    /// Slopes in ascending order, each repeated by its horizontal length.
    pub fn slopes(&self) -> &[T] {
        &self.slopes
    }

    /// Horizontal length of the polygon.
    pub fn width(&self) -> usize {
        self.slopes.len()
    }

    /// Value of the hull at an integer abscissa within its range.
    pub fn value_at(&self, index: usize) -> Option<T> {
        interpolate(&self.vertices, index)
    }
}

/// Slopes at a point, in descending order `a_1 >= ... >= a_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeVector<T> {
    values: Vec<T>,
}

impl<T: ExactScalar> SlopeVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::MalformedInput("slopes must be descending".into()));
        }
        Ok(SlopeVector { values })
    }

    /// The generic vector `(n-1, n-2, ..., 0)`.
    pub fn generic(n: usize) -> Self {
        SlopeVector {
            values: (0..n).rev().map(|i| T::from_int(i as i64)).collect(),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> T {
        self.values.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Partial sum of the `r` largest slopes.
    pub fn partial_sum(&self, r: usize) -> T {
        self.values[..r].iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// True if every entry has a denominator dividing `bound`.
    pub fn denominators_divide(&self, bound: u64) -> bool {
        self.values
            .iter()
            .all(|v| v.denominator_u64().is_some_and(|d| bound % d == 0))
    }
}

fn interpolate<T: ExactScalar>(vertices: &[(usize, T)], index: usize) -> Option<T> {
    let pos = vertices.iter().position(|(i, _)| *i >= index)?;
    let (i1, v1) = &vertices[pos];
    if *i1 == index {
        return Some(v1.clone());
    }
    if pos == 0 {
        return None;
    }
    let (i0, v0) = &vertices[pos - 1];
    let t = T::from_int((index - i0) as i64) / T::from_int((i1 - i0) as i64);
    Some(v0.clone() + (v1.clone() - v0.clone()) * t)
}

/// Lower convex chain through sorted points with distinct indices, keeping
/// only strict corners.
fn lower_chain<T: ExactScalar>(points: &[(usize, T)]) -> Vec<(usize, T)> {
    let mut chain: Vec<(usize, T)> = Vec::with_capacity(points.len());
    for pt in points {
        while chain.len() >= 2 {
            let (ax, ay) = &chain[chain.len() - 2];
            let (bx, by) = &chain[chain.len() - 1];
            // keep b only if slope(a,b) < slope(b,c)
            let left = (by.clone() - ay.clone()) * T::from_int((pt.0 - bx) as i64);
            let right = (pt.1.clone() - by.clone()) * T::from_int((bx - ax) as i64);
            if left < right {
                break;
            }
            chain.pop();
        }
        chain.push(pt.clone());
    }
    chain
}

fn chain_slopes<T: ExactScalar>(vertices: &[(usize, T)]) -> Vec<T> {
    let mut slopes = Vec::new();
    for w in vertices.windows(2) {
        let len = w[1].0 - w[0].0;
        let s = (w[1].1.clone() - w[0].1.clone()) / T::from_int(len as i64);
        slopes.extend(std::iter::repeat(s).take(len));
    }
    slopes
}

/// Newton polygon of coefficient valuations, certified against censored points.
pub fn lower_hull<T: ExactScalar>(points: &[HullPoint<T>]) -> Result<NewtonPolygon<T>> {
    let mut sorted: Vec<&HullPoint<T>> = points.iter().collect();
    sorted.sort_by_key(|pt| pt.index);
    if sorted.windows(2).any(|w| w[0].index == w[1].index) {
        return Err(Error::MalformedInput("duplicate hull index".into()));
    }
    match sorted.first() {
        Some(pt) if pt.index == 0 && pt.val == Valuation::Exact(T::zero()) => {}
        _ => {
            return Err(Error::MalformedInput(
                "the point at index 0 must be present with exact value 0".into(),
            ))
        }
    }
    let last = sorted.last().expect("nonempty");
    if !last.val.is_exact() {
        return Err(Error::MalformedInput(format!(
            "the last point (index {}) must be exact",
            last.index
        )));
    }
    let exact: Vec<(usize, T)> = sorted
        .iter()
        .filter_map(|pt| pt.val.exact().map(|v| (pt.index, v.clone())))
        .collect();
    let vertices = lower_chain(&exact);
    for pt in &sorted {
        if let Valuation::AtLeast(bound) = &pt.val {
            let hull = interpolate(&vertices, pt.index).expect("index within hull range");
            if *bound < hull {
                return Err(Error::PrecisionInsufficient {
                    index: pt.index,
                    bound: bound.to_string(),
                    hull: hull.to_string(),
                    precision: 0,
                    suggested: 0,
                });
            }
        }
    }
    let slopes = chain_slopes(&vertices);
    Ok(NewtonPolygon { vertices, slopes })
}

/// Divides ascending slopes by the degree of the point and reverses them.
pub fn slopes_descending<T: ExactScalar>(polygon: &NewtonPolygon<T>, degree_scale: u32) -> SlopeVector<T> {
    let m = T::from_int(degree_scale.max(1) as i64);
    SlopeVector {
        values: polygon
            .slopes()
            .iter()
            .rev()
            .map(|s| s.clone() / m.clone())
            .collect(),
    }
}

/// Pointwise largest convex function on `0..=n` that vanishes at 0 and stays
/// below every given ceiling.
pub fn biggest_convex_minorant<T: ExactScalar>(ceilings: &[(usize, T)]) -> Result<Vec<T>> {
    let mut pts: Vec<(usize, T)> = ceilings.to_vec();
    pts.sort_by_key(|c| c.0);
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::MalformedInput("duplicate ceiling index".into()));
    }
    match pts.first() {
        Some((0, v)) if v.is_zero() => {}
        _ => {
            return Err(Error::MalformedInput(
                "ceiling at index 0 must be present and equal to 0".into(),
            ))
        }
    }
    let n = pts.last().expect("nonempty").0;
    let chain = lower_chain(&pts);
    Ok((0..=n)
        .map(|r| interpolate(&chain, r).expect("within range"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    fn qs(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| q(n, d)).collect()
    }

    #[test]
    fn quintic_counterexample_hull() {
        let pts = vec![
            HullPoint::exact(0, q(0, 1)),
            HullPoint::at_least(1, q(1, 1)),
            HullPoint::exact(2, q(1, 1)),
            HullPoint::at_least(3, q(4, 1)),
            HullPoint::exact(4, q(6, 1)),
        ];
        let poly = lower_hull(&pts).unwrap();
        assert_eq!(poly.slopes(), qs(&[(1, 2), (1, 2), (5, 2), (5, 2)]).as_slice());
        assert_eq!(poly.vertices().len(), 3);
        let desc = slopes_descending(&poly, 1);
        assert_eq!(desc.values(), qs(&[(5, 2), (5, 2), (1, 2), (1, 2)]).as_slice());
    }

    #[test]
    fn flat_hull() {
        let pts: Vec<_> = (0..3).map(|i| HullPoint::exact(i, q(0, 1))).collect();
        let poly = lower_hull(&pts).unwrap();
        assert_eq!(poly.slopes(), qs(&[(0, 1), (0, 1)]).as_slice());
        assert_eq!(poly.vertices(), &[(0, q(0, 1)), (2, q(0, 1))]);
    }

    #[test]
    fn censored_point_below_hull() {
        let pts = vec![
            HullPoint::exact(0, q(0, 1)),
            HullPoint::at_least(1, q(2, 5)),
            HullPoint::exact(2, q(1, 1)),
        ];
        assert!(matches!(lower_hull(&pts), Err(Error::PrecisionInsufficient { index: 1, .. })));
    }

    #[test]
    fn malformed_inputs() {
        assert!(lower_hull::<Rational>(&[]).is_err());
        let no_origin = vec![HullPoint::exact(0, q(1, 1)), HullPoint::exact(1, q(1, 1))];
        assert!(matches!(lower_hull(&no_origin), Err(Error::MalformedInput(_))));
        let censored_end = vec![HullPoint::exact(0, q(0, 1)), HullPoint::at_least(1, q(1, 1))];
        assert!(matches!(lower_hull(&censored_end), Err(Error::MalformedInput(_))));
        let dup = vec![HullPoint::exact(0, q(0, 1)), HullPoint::exact(0, q(0, 1))];
        assert!(lower_hull(&dup).is_err());
    }

    #[test]
    fn descending_scaling() {
        let pts = vec![
            HullPoint::exact(0, q(0, 1)),
            HullPoint::exact(1, q(0, 1)),
            HullPoint::exact(2, q(2, 1)),
        ];
        let poly = lower_hull(&pts).unwrap();
        assert_eq!(slopes_descending(&poly, 2).values(), qs(&[(1, 1), (0, 1)]).as_slice());
        let pts = vec![
            HullPoint::exact(0, q(0, 1)),
            HullPoint::exact(1, q(0, 1)),
            HullPoint::exact(2, q(1, 1)),
            HullPoint::exact(3, q(3, 1)),
        ];
        let poly = lower_hull(&pts).unwrap();
        assert_eq!(slopes_descending(&poly, 1).values(), qs(&[(2, 1), (1, 1), (0, 1)]).as_slice());
    }

    #[test]
    fn minorant_examples() {
        let env = biggest_convex_minorant(&[(0, q(0, 1)), (1, q(-1, 1)), (2, q(-1, 1)), (3, q(0, 1))]).unwrap();
        assert_eq!(env, qs(&[(0, 1), (-1, 1), (-1, 1), (0, 1)]));
        let env = biggest_convex_minorant(&[(0, q(0, 1)), (1, q(0, 1)), (2, q(0, 1)), (3, q(0, 1))]).unwrap();
        assert!(env.iter().all(|v| *v == q(0, 1)));
        assert!(biggest_convex_minorant(&[(1, q(0, 1))]).is_err());
    }

    #[test]
    fn generic_over_small_rationals() {
        type Q64 = Ratio<i64>;
        let pts = vec![
            HullPoint::exact(0, Q64::from_int(0)),
            HullPoint::exact(1, Q64::from_int(3)),
            HullPoint::exact(3, Q64::from_int(1)),
        ];
        let poly = lower_hull(&pts).unwrap();
        assert_eq!(poly.slopes(), &[Q64::new(1, 3); 3]);
    }

    fn arb_points() -> impl Strategy<Value = Vec<i64>> {
        (1usize..=6).prop_flat_map(|n| proptest::collection::vec(0i64..=12, n))
    }

    /// Brute-force lower envelope: minimum over chords through pairs of points.
    fn envelope(points: &[(usize, Rational)], r: usize) -> Rational {
        let mut best: Option<Rational> = None;
        for (i, vi) in points {
            for (j, vj) in points {
                if i <= &r && &r <= j {
                    let val = if i == j {
                        vi.clone()
                    } else {
                        vi.clone()
                            + (vj.clone() - vi.clone()) * Rational::from_int((r - i) as i64)
                                / Rational::from_int((j - i) as i64)
                    };
                    if best.as_ref().map_or(true, |b| val < *b) {
                        best = Some(val);
                    }
                }
            }
        }
        best.unwrap()
    }

    proptest! {
        #[test]
        fn hull_matches_envelope_and_is_idempotent(vals in arb_points()) {
            let n = vals.len();
            let mut pts = vec![(0usize, Rational::from_int(0))];
            pts.extend(vals.iter().enumerate().map(|(i, &v)| (i + 1, Rational::from_int(v))));
            let hp: Vec<_> = pts.iter().map(|(i, v)| HullPoint::exact(*i, v.clone())).collect();
            let poly = lower_hull(&hp).unwrap();
            for r in 0..=n {
                prop_assert_eq!(poly.value_at(r).unwrap(), envelope(&pts, r));
            }
            // sum rule
            let total = poly.slopes().iter().cloned().fold(Rational::from_int(0), |a, b| a + b);
            prop_assert_eq!(total, pts[n].1.clone());
            // convexity and multiplicity-weighted integrality
            prop_assert!(poly.slopes().windows(2).all(|w| w[0] <= w[1]));
            for w in poly.vertices().windows(2) {
                let rise = w[1].1.clone() - w[0].1.clone();
                prop_assert!(rise.is_integral());
            }
            let again: Vec<_> = poly.vertices().iter().map(|(i, v)| HullPoint::exact(*i, v.clone())).collect();
            prop_assert_eq!(lower_hull(&again).unwrap(), poly.clone());
            // denominators of slopes divide lcm(1..n)
            let lcm = (1..=n as u64).fold(1u64, num_integer::lcm);
            prop_assert!(slopes_descending(&poly, 1).denominators_divide(lcm));
        }

        #[test]
        fn minorant_is_convex_and_below(vals in proptest::collection::vec(-20i64..20, 1..7)) {
            let mut ceil = vec![(0usize, Rational::from_int(0))];
            ceil.extend(vals.iter().enumerate().map(|(i, &v)| (i + 1, Rational::from_frac(v, 3))));
            let env = biggest_convex_minorant(&ceil).unwrap();
            for (r, v) in &ceil {
                prop_assert!(env[*r] <= *v);
            }
            for w in env.windows(3) {
                prop_assert!(w[1].clone() - w[0].clone() <= w[2].clone() - w[1].clone());
            }
            for r in 0..env.len() {
                prop_assert_eq!(env[r].clone(), envelope(&ceil, r));
            }
        }
    }
}
