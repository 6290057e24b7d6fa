//! Affine twist models on the annulus `[0, 1] x S^1` (lengths in units of pi).

use std::ops::Mul;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::q::Q;

/// `D_{m,c}: (x, t) -> (x + m t + c, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AnnulusTwist {
    pub m: Q,
    pub c: Q,
}

impl AnnulusTwist {
    pub fn new(m: Q, c: Q) -> Self {
        AnnulusTwist { m, c }
    }

    pub fn identity() -> Self {
        AnnulusTwist { m: Q::zero(), c: Q::zero() }
    }

    pub fn compose(self, other: AnnulusTwist) -> AnnulusTwist {
        AnnulusTwist { m: self.m + other.m, c: self.c + other.c }
    }

    pub fn invert(self) -> AnnulusTwist {
        AnnulusTwist { m: -self.m, c: -self.c }
    }

    pub fn apply(self, x: Q, t: Q) -> (Q, Q) {
        (x + self.m * t + self.c, t)
    }
}

impl Mul for AnnulusTwist {
    type Output = AnnulusTwist;

    fn mul(self, rhs: AnnulusTwist) -> AnnulusTwist {
        self.compose(rhs)
    }
}

/// Screw number `-(e/n) theta` of an annulus whose linearization has slope `e/n`.
pub fn screw_from_linearization(e: i64, n: i64, theta: Q) -> Result<Q> {
    if n == 0 {
        return Err(Error::PropertyDoesNotHold("linearization with n = 0".into()));
    }
    Ok(-Q::new(e as i128, n as i128) * theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::{int, q};

    #[test]
    fn sum_rule() {
        let a = AnnulusTwist::new(int(1), q(1, 2));
        let b = AnnulusTwist::new(int(2), int(0));
        assert_eq!(a * b, AnnulusTwist::new(int(3), q(1, 2)));
        assert_eq!(a.invert() * a, AnnulusTwist::identity());
        assert_eq!(screw_from_linearization(1, 1, int(1)).unwrap(), int(-1));
        // composing the maps pointwise agrees with adding parameters
        let (x, t) = b.apply(q(1, 3), q(1, 5));
        assert_eq!(a.apply(x, t), (a * b).apply(q(1, 3), q(1, 5)));
    }
}
