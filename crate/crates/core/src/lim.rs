//! Local invertible maps restricted to the Pauli-with-scalar subgroup.
//!
//! A [`Lim`] is `λ · O_{k-1} ⊗ … ⊗ O_0` where every local factor is one of
//! `I`, `Z`, `X`, `XZ` written in the normal form `X^x Z^z`. Phases produced
//! by reordering factors are folded into `λ`, so composition is an XOR of two
//! bit masks plus a sign.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shared relative tolerance for amplitude and scalar comparisons.
pub const TOL: f64 = 1e-10;

/// Largest register a [`Lim`] can describe (factors are packed in a `u64`).
pub const MAX_LIM_QUBITS: usize = 63;

/// Local Pauli factor `X^x · Z^z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliFactor {
    pub x: bool,
    pub z: bool,
}

impl PauliFactor {
    pub const I: PauliFactor = PauliFactor { x: false, z: false };
    pub const Z: PauliFactor = PauliFactor { x: false, z: true };
    pub const X: PauliFactor = PauliFactor { x: true, z: false };
    pub const XZ: PauliFactor = PauliFactor { x: true, z: true };

    pub fn is_identity(self) -> bool {
        !self.x && !self.z
    }

    /// Dense 2×2 matrix, row-major.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match (self.x, self.z) {
            (false, false) => [[one, zero], [zero, one]],
            (false, true) => [[one, zero], [zero, -one]],
            (true, false) => [[zero, one], [one, zero]],
            // X·Z
            (true, true) => [[zero, -one], [one, zero]],
        }
    }

    /// Matrix of the adjoint. `(XZ)† = ZX = −XZ`; the others are Hermitian.
    pub fn dagger_matrix(self) -> [[Complex64; 2]; 2] {
        let m = self.matrix();
        [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
    }

    fn symbol(self) -> &'static str {
        match (self.x, self.z) {
            (false, false) => "I",
            (false, true) => "Z",
            (true, false) => "X",
            (true, true) => "XZ",
        }
    }
}

/// A scalar times a string of local Pauli factors over `num_qubits` qubits.
///
/// Bit `q` of the internal masks is the factor acting on qubit `q`, so the
/// most-significant qubit is the highest bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lim {
    scalar: Complex64,
    x: u64,
    z: u64,
    len: u8,
}

impl Lim {
    pub fn identity(num_qubits: usize) -> Lim {
        Lim::scalar_only(num_qubits, Complex64::new(1.0, 0.0))
    }

    pub fn scalar_only(num_qubits: usize, scalar: Complex64) -> Lim {
        assert!(num_qubits <= MAX_LIM_QUBITS, "LIM register too large");
        Lim { scalar, x: 0, z: 0, len: num_qubits as u8 }
    }

    /// Builds a LIM from factors listed most-significant qubit first.
    pub fn from_factors(scalar: Complex64, factors: &[PauliFactor]) -> Lim {
        let len = factors.len();
        assert!(len <= MAX_LIM_QUBITS, "LIM register too large");
        let (mut x, mut z) = (0u64, 0u64);
        for (i, f) in factors.iter().enumerate() {
            let q = len - 1 - i;
            x |= (f.x as u64) << q;
            z |= (f.z as u64) << q;
        }
        Lim { scalar, x, z, len: len as u8 }
    }

    /// Builds a LIM from raw masks; bits at or above `num_qubits` must be clear.
    pub fn from_masks(scalar: Complex64, x: u64, z: u64, num_qubits: usize) -> Lim {
        assert!(num_qubits <= MAX_LIM_QUBITS, "LIM register too large");
        let mask = low_mask(num_qubits);
        assert!(x & !mask == 0 && z & !mask == 0, "mask bits beyond register");
        Lim { scalar, x, z, len: num_qubits as u8 }
    }

    pub fn num_qubits(&self) -> usize {
        self.len as usize
    }

    pub fn scalar(&self) -> Complex64 {
        self.scalar
    }

    pub fn with_scalar(mut self, scalar: Complex64) -> Lim {
        self.scalar = scalar;
        self
    }

    pub fn scaled(mut self, by: Complex64) -> Lim {
        self.scalar *= by;
        self
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Factor acting on qubit `q`.
    pub fn factor(&self, q: usize) -> PauliFactor {
        debug_assert!(q < self.num_qubits());
        PauliFactor { x: (self.x >> q) & 1 == 1, z: (self.z >> q) & 1 == 1 }
    }

    /// Factors listed most-significant qubit first.
    pub fn factors(&self) -> Vec<PauliFactor> {
        (0..self.num_qubits()).rev().map(|q| self.factor(q)).collect()
    }

    /// True when every local factor is `I` (the scalar is ignored).
    pub fn is_pauli_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// `top ⊗ self`: prepends a factor on a new most-significant qubit.
    pub fn tensor_top(&self, top: PauliFactor) -> Lim {
        let q = self.num_qubits();
        assert!(q < MAX_LIM_QUBITS, "LIM register too large");
        Lim {
            scalar: self.scalar,
            x: self.x | ((top.x as u64) << q),
            z: self.z | ((top.z as u64) << q),
            len: self.len + 1,
        }
    }

    /// Product `self · other` as operators.
    pub fn mul(&self, other: &Lim) -> Result<Lim> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { expected: self.num_qubits(), actual: other.num_qubits() });
        }
        // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1·x2} X^{x1^x2} Z^{z1^z2}
        let sign = if (self.z & other.x).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        Ok(Lim { scalar: self.scalar * other.scalar * sign, x: self.x ^ other.x, z: self.z ^ other.z, len: self.len })
    }

    /// Sign of `P·P` for the Pauli part: `(XZ)² = −I`, the rest square to `I`.
    fn square_sign(&self) -> f64 {
        if (self.x & self.z).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn inverse(&self) -> Result<Lim> {
        if self.scalar.norm() == 0.0 {
            return Err(Error::ZeroScalar);
        }
        Ok(Lim { scalar: self.square_sign() / self.scalar, ..*self })
    }

    /// Conjugate transpose: `(λ X^x Z^z)† = λ̄ Z^z X^x`.
    pub fn dagger(&self) -> Lim {
        Lim { scalar: self.scalar.conj() * self.square_sign(), ..*self }
    }

    /// Applies the LIM to a dense vector of length `2^k` in `O(2^k)`.
    pub fn apply_dense(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = 1usize << self.num_qubits();
        if v.len() != dim {
            return Err(Error::LengthMismatch { expected: dim, actual: v.len() });
        }
        let (x, z) = (self.x as usize, self.z as usize);
        Ok((0..dim)
            .map(|i| {
                let src = i ^ x;
                let amp = v[src] * self.scalar;
                if (src & z).count_ones() % 2 == 1 {
                    -amp
                } else {
                    amp
                }
            })
            .collect())
    }

    /// Equality of Pauli parts and scalars within relative tolerance.
    pub fn approx_eq(&self, other: &Lim, tol: f64) -> bool {
        self.len == other.len && self.x == other.x && self.z == other.z && approx_eq_c(self.scalar, other.scalar, tol)
    }
}

impl fmt::Display for Lim {
    /// Renders as `(0.5-0.5i)*Z.I.X`, factors from the most-significant qubit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_complex(f, self.scalar)?;
        if self.num_qubits() > 0 {
            f.write_str("*")?;
            for (i, fac) in self.factors().iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                f.write_str(fac.symbol())?;
            }
        }
        Ok(())
    }
}

pub(crate) fn write_complex(f: &mut impl fmt::Write, c: Complex64) -> fmt::Result {
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    if im < 0.0 {
        write!(f, "({}-{}i)", c.re + 0.0, -im)
    } else {
        write!(f, "({}+{}i)", c.re + 0.0, im)
    }
}

pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)`.
pub fn approx_eq_c(a: Complex64, b: Complex64, tol: f64) -> bool {
    let scale = 1.0f64.max(a.norm()).max(b.norm());
    (a - b).norm() <= tol * scale
}
