use std::fmt::Debug;

use num_traits::{Num, Signed};

/// Exact ordered field used by the generic linear algebra.
///
/// Any `Num + Signed + PartialOrd` type qualifies. Exactness is the caller's business:
/// the pipeline instantiates it with [`crate::Rational`], while floating-point types
/// satisfy the bound but are not validated.
pub trait Field: Clone + Debug + PartialOrd + Num + Signed {
    fn from_i64(v: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        let mut n = v.unsigned_abs();
        // Double-and-add keeps this generic without a FromPrimitive bound.
        let mut pow = one;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc + pow.clone();
            }
            pow = pow.clone() + pow;
            n >>= 1;
        }
        if v < 0 {
            -acc
        } else {
            acc
        }
    }
}

impl<T: Clone + Debug + PartialOrd + Num + Signed> Field for T {}

/// Entry type of a nonnegative matrix handed to the lower-bound solvers.
///
/// Only the sign of an entry and strict comparisons of 2x2 products matter, so any
/// ordered ring works.
pub trait SlackEntry: Copy + Debug + PartialOrd + Num {}

impl<T: Copy + Debug + PartialOrd + Num> SlackEntry for T {}
