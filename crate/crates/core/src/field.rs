//! Prime field arithmetic.
//!
//! Every exact computation in the crate runs over a prime field `F_p`
//! carried around as a small copyable context. Elements are plain `u32`
//! residues in `0..p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus. Large enough that randomized Hom-space searches fail
/// with negligible probability.
pub const DEFAULT_PRIME: u32 = 32003;

/// A prime field `F_p` with `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::UnsupportedField(
                "modulus 0 (rationals) is not supported; use a prime".into(),
            ));
        }
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not a prime below 2^31")));
        }
        Ok(Fp { p })
    }

    pub fn default_field() -> Self {
        Fp { p: DEFAULT_PRIME }
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    /// Reduce a signed integer into canonical range.
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for readable output.
    pub fn to_signed(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn elem(self, v: i64) -> FieldElem {
        FieldElem {
            value: self.from_i64(v),
            p: self.p,
        }
    }
}

/// A residue tagged with its modulus. Used at API boundaries (parsed
/// coefficients, reports); internal arithmetic works on raw `u32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElem {
    pub value: u32,
    pub p: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n as u64 {
        if n as u64 % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}
