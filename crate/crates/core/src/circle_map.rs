//! Maps from (subsets of) the circle to the circle.

use crate::circle::{orientation, position_cmp, CirclePoint, MobiusMap};
use crate::error::{Error, Result};

pub trait CircleMap {
    fn eval(&self, x: &CirclePoint) -> Result<CirclePoint>;
}

impl CircleMap for MobiusMap {
    fn eval(&self, x: &CirclePoint) -> Result<CirclePoint> {
        Ok(self.apply(x))
    }
}

/// The identity of the circle.
pub struct Identity;

impl CircleMap for Identity {
    fn eval(&self, x: &CirclePoint) -> Result<CirclePoint> {
        Ok(x.clone())
    }
}

impl<F: Fn(&CirclePoint) -> Result<CirclePoint>> CircleMap for F {
    fn eval(&self, x: &CirclePoint) -> Result<CirclePoint> {
        self(x)
    }
}

/// Order-preserving map on a finite support, stored sorted by position.
#[derive(Clone, Debug)]
pub struct DiscreteCircleMap {
    support: Vec<CirclePoint>,
    values: Vec<CirclePoint>,
}

/// True when the sequence is strictly counterclockwise and winds once.
pub fn is_cyclically_ordered(pts: &[CirclePoint]) -> bool {
    match pts.len() {
        0..=2 => pts.len() < 2 || !pts[0].same(&pts[1]),
        n => (1..n - 1).all(|i| orientation(&pts[0], &pts[i], &pts[i + 1]) == 1),
    }
}

impl DiscreteCircleMap {
    /// Builds the map from pairs in any order; requires at least three
    /// points, distinct support and strictly order-preserving values.
    pub fn new(pairs: Vec<(CirclePoint, CirclePoint)>) -> Result<Self> {
        if pairs.len() < 3 {
            return Err(Error::TooFewPoints { need: 3, got: pairs.len() });
        }
        let m = Self::new_unchecked(pairs);
        for i in 0..m.support.len() {
            let j = (i + 1) % m.support.len();
            if m.support[i].same(&m.support[j]) {
                return Err(Error::CoincidentPoints);
            }
        }
        if !is_cyclically_ordered(&m.values) {
            return Err(Error::NotAcausal("values do not preserve the cyclic order".into()));
        }
        Ok(m)
    }

    /// Sorts by support position without checking order preservation.
    pub fn new_unchecked(mut pairs: Vec<(CirclePoint, CirclePoint)>) -> Self {
        pairs.sort_by(|a, b| position_cmp(&a.0, &b.0));
        let (support, values) = pairs.into_iter().unzip();
        DiscreteCircleMap { support, values }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[CirclePoint] {
        &self.support
    }

    pub fn values(&self) -> &[CirclePoint] {
        &self.values
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&CirclePoint, &CirclePoint)> {
        self.support.iter().zip(self.values.iter())
    }

    pub fn index_of(&self, x: &CirclePoint) -> Option<usize> {
        match self.support.binary_search_by(|p| position_cmp(p, x)) {
            Ok(i) if self.support[i].same(x) => Some(i),
            _ => self.support.iter().position(|p| p.same(x)),
        }
    }

    /// Post-composition with a circle map.
    pub fn then<M: CircleMap + ?Sized>(&self, m: &M) -> Result<DiscreteCircleMap> {
        let values = self.values.iter().map(|v| m.eval(v)).collect::<Result<Vec<_>>>()?;
        Ok(DiscreteCircleMap { support: self.support.clone(), values })
    }

    /// The inverse map, supported on the values.
    pub fn inverse(&self) -> DiscreteCircleMap {
        Self::new_unchecked(self.values.iter().cloned().zip(self.support.iter().cloned()).collect())
    }

    /// Restriction to the support indices given.
    pub fn restrict(&self, idx: &[usize]) -> Result<DiscreteCircleMap> {
        Self::new(idx.iter().map(|&i| (self.support[i].clone(), self.values[i].clone())).collect())
    }
}

impl CircleMap for DiscreteCircleMap {
    fn eval(&self, x: &CirclePoint) -> Result<CirclePoint> {
        self.index_of(x)
            .map(|i| self.values[i].clone())
            .ok_or_else(|| Error::UndefinedAtEndpoint(x.to_string()))
    }
}
