//! Exact rationals. A `Q` used as a length means that multiple of pi.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

pub fn int(n: i128) -> Q {
    Ratio::from_integer(n)
}

/// Largest `u` such that both inputs are integer multiples of `u`.
pub fn gcd(a: Q, b: Q) -> Q {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let n = a.numer().abs().gcd(&b.numer().abs());
    let d = a.denom().lcm(b.denom());
    Ratio::new(n, d)
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a Q>) -> Q {
    it.into_iter().fold(Q::zero(), |acc, x| gcd(acc, *x))
}

/// `x / u` when it is an integer.
pub fn div_exact(x: Q, u: Q) -> Option<i128> {
    let r = x / u;
    if r.is_integer() {
        Some(r.to_integer())
    } else {
        None
    }
}

pub fn modulo(x: Q, m: Q) -> Q {
    let r = x - (x / m).floor() * m;
    r
}

pub fn fmt(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i128 = a.trim().parse().ok()?;
            let d: i128 = b.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Ratio::new(n, d))
        }
        None => Some(int(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_gcd() {
        assert_eq!(gcd(q(1, 2), q(1, 2)), q(1, 2));
        assert_eq!(gcd_all(&[q(1, 12), int(1), q(1, 6)]), q(1, 12));
        assert_eq!(gcd(q(3, 8), q(1, 4)), q(1, 8));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["1/2", "3", "-5/7", "0"] {
            assert_eq!(fmt(&parse(s).unwrap()), s);
        }
        assert!(parse("1/0").is_none());
        assert_eq!(fmt(&parse("2/4").unwrap()), "1/2");
    }
}
