//! The scalar type objective weights and values are computed in.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Sub};

use num_traits::Zero;

/// Exact, totally ordered additive scalar used for guarantee and
/// observation weights.
///
/// Value ladders deduplicate and compare subset sums, so the type must have
/// exact equality and a total order. Integers and `num_rational::Ratio`
/// qualify; floating-point types do not.
pub trait Weight:
    Clone + Ord + Hash + Debug + Display + Zero + Add<Output = Self> + Sub<Output = Self> + Send + Sync + 'static
{
    /// Sum of an iterator of weights.
    fn sum_of<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Self {
        items.into_iter().fold(Self::zero(), |acc, w| acc + w.clone())
    }
}

impl<T> Weight for T where
    T: Clone + Ord + Hash + Debug + Display + Zero + Add<Output = T> + Sub<Output = T> + Send + Sync + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn sums_are_exact() {
        let w = [Rational::new(1, 3), Rational::new(1, 6), Rational::new(1, 2)];
        assert_eq!(Rational::sum_of(&w), Rational::from_integer(1));
        assert_eq!(u64::sum_of(&[1, 2, 3]), 6);
    }
}
