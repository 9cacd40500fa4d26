//! Independent oracles shared by the integration suites. Nothing here calls
//! into the code under test for the quantity it checks.
#![allow(dead_code)]

use limqsp::circuit::{Gate, GateKind};
use limqsp::{Complex64, Lim, PauliFactor};
use rand::Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn factor_matrix(f: PauliFactor) -> [[C; 2]; 2] {
    let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
    let x = [[o, l], [l, o]];
    let z = [[l, o], [o, -l]];
    let id = [[l, o], [o, l]];
    let a = if f.x { x } else { id };
    let b = if f.z { z } else { id };
    let mut m = [[o; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// Dense row-major matrix.
#[derive(Clone, Debug)]
pub struct Mat {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Mat {
    pub fn identity(dim: usize) -> Mat {
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c(1.0, 0.0);
        }
        Mat { dim, data }
    }

    pub fn from2(m: [[C; 2]; 2]) -> Mat {
        Mat { dim: 2, data: vec![m[0][0], m[0][1], m[1][0], m[1][1]] }
    }

    pub fn at(&self, i: usize, j: usize) -> C {
        self.data[i * self.dim + j]
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let dim = self.dim * other.dim;
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        data[(i * other.dim + k) * dim + j * other.dim + l] = self.at(i, j) * other.at(k, l);
                    }
                }
            }
        }
        Mat { dim, data }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let d = self.dim;
        let mut data = vec![c(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.at(i, k);
                if a.norm() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.at(k, j);
                }
            }
        }
        Mat { dim: d, data }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.at(i, j) * v[j]).sum()).collect()
    }

    pub fn scale(mut self, s: C) -> Mat {
        for x in &mut self.data {
            *x *= s;
        }
        self
    }

    pub fn dagger(&self) -> Mat {
        let d = self.dim;
        let mut data = vec![c(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.at(i, j).conj();
            }
        }
        Mat { dim: d, data }
    }

    pub fn max_diff(&self, other: &Mat) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// `λ · M(f_top) ⊗ … ⊗ M(f_0)` by explicit Kronecker products.
pub fn lim_matrix(scalar: C, factors_top_first: &[PauliFactor]) -> Mat {
    let mut m = Mat::identity(1);
    for &f in factors_top_first {
        m = m.kron(&Mat::from2(factor_matrix(f)));
    }
    m.scale(scalar)
}

pub fn lim_as_matrix(l: &Lim) -> Mat {
    lim_matrix(l.scalar(), &l.factors())
}

/// Full `2^m × 2^m` matrix of a controlled gate, built column by column
/// from the definition: the 2×2 payload acts on the target bit of basis
/// states whose control bits all match.
pub fn gate_matrix(g: &Gate, m: usize) -> Mat {
    let dim = 1usize << m;
    let u = g.kind.matrix();
    let mut mat = Mat { dim, data: vec![c(0.0, 0.0); dim * dim] };
    for col in 0..dim {
        let bit = |q: usize| (col >> q) & 1 == 1;
        let active = g.controls.iter().all(|ctl| bit(ctl.qubit) == ctl.required_bit());
        if !active {
            mat.data[col * dim + col] = c(1.0, 0.0);
            continue;
        }
        let t = g.target;
        let b = bit(t) as usize;
        for out in 0..2usize {
            let row = (col & !(1 << t)) | (out << t);
            mat.data[row * dim + col] += u[out * 2 + b];
        }
    }
    mat
}

pub fn circuit_matrix(gates: &[Gate], m: usize) -> Mat {
    let mut acc = Mat::identity(1 << m);
    for g in gates {
        acc = gate_matrix(g, m).mul(&acc);
    }
    acc
}

pub fn hadamard() -> [[C; 2]; 2] {
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

/// The 3-qubit H+CZ ladder: H on every qubit, then CZ(q2,q1), CZ(q2,q0),
/// CZ(q1,q0), as one matrix product over the full space, applied to |000⟩.
pub fn ladder_state_3() -> Vec<C> {
    let h = Mat::from2(hadamard());
    let hhh = h.kron(&h).kron(&h);
    let mut cz_all = Mat::identity(8);
    for i in 0..8usize {
        let bits = [(i >> 2) & 1, (i >> 1) & 1, i & 1];
        let pairs = bits[0] * bits[1] + bits[0] * bits[2] + bits[1] * bits[2];
        if pairs % 2 == 1 {
            cz_all.data[i * 8 + i] = c(-1.0, 0.0);
        }
    }
    let mut zero = vec![c(0.0, 0.0); 8];
    zero[0] = c(1.0, 0.0);
    cz_all.mul(&hhh).apply(&zero)
}

/// Brute-force Pauli isomorphism search: some `(λ, P)` with `w = λ·P·u`,
/// `P` listed top qubit first. Candidate images are computed entrywise from
/// the single-qubit matrices.
pub fn iso_oracle(u: &[C], w: &[C], tol: f64) -> Option<(C, Vec<PauliFactor>)> {
    assert_eq!(u.len(), w.len());
    let k = u.len().trailing_zeros() as usize;
    let mats: Vec<[[C; 2]; 2]> =
        [PauliFactor::I, PauliFactor::Z, PauliFactor::X, PauliFactor::XZ].iter().map(|&f| factor_matrix(f)).collect();
    let scale = u.iter().chain(w).map(|a| a.norm()).fold(0.0, f64::max).max(1e-300);
    let mut choice = vec![0usize; k];
    for code in 0..(1usize << (2 * k)) {
        for (q, ch) in choice.iter_mut().enumerate() {
            *ch = (code >> (2 * q)) & 3;
        }
        // (P u)[i] = Π_q M_q[i_q][j_q] · u[j], j = i with X-flipped bits
        let image: Vec<C> = (0..u.len())
            .map(|i| {
                let mut coeff = c(1.0, 0.0);
                let mut j = 0usize;
                for q in 0..k {
                    let m = &mats[choice[q]];
                    let iq = (i >> q) & 1;
                    let jq = if m[iq][0].norm() > 0.0 { 0 } else { 1 };
                    coeff *= m[iq][jq];
                    j |= jq << q;
                }
                coeff * u[j]
            })
            .collect();
        let pivot = image.iter().position(|a| a.norm() > tol * scale)?;
        if w[pivot].norm() <= tol * scale {
            continue;
        }
        let lambda = w[pivot] / image[pivot];
        if image.iter().zip(w).all(|(a, b)| (lambda * a - b).norm() <= 1e-9 * scale) {
            let factors = (0..k)
                .rev()
                .map(|q| [PauliFactor::I, PauliFactor::Z, PauliFactor::X, PauliFactor::XZ][choice[q]])
                .collect();
            return Some((lambda, factors));
        }
    }
    None
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn normalize(v: &mut [C]) {
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in v {
        *a /= n;
    }
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<C> {
    let mut v: Vec<C> = (0..1usize << n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    normalize(&mut v);
    v
}

/// Amplitudes drawn from a small set (zeros, ±1, ±i, ±1/√2 …) so that
/// subvectors repeat and carry nontrivial symmetries.
pub fn discrete_state(rng: &mut impl Rng, n: usize) -> Vec<C> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let palette = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(s, 0.0), c(0.5, 0.5)];
    loop {
        let mut v: Vec<C> = (0..1usize << n).map(|_| palette[rng.random_range(0..palette.len())]).collect();
        if v.iter().any(|a| a.norm() > 0.0) {
            normalize(&mut v);
            return v;
        }
    }
}

pub fn random_factor(rng: &mut impl Rng) -> PauliFactor {
    [PauliFactor::I, PauliFactor::Z, PauliFactor::X, PauliFactor::XZ][rng.random_range(0..4)]
}

pub fn random_lim(rng: &mut impl Rng, k: usize) -> (C, Vec<PauliFactor>) {
    let lambda = C::from_polar(rng.random_range(0.25..2.0), rng.random_range(0.0..std::f64::consts::TAU));
    (lambda, (0..k).map(|_| random_factor(rng)).collect())
}

/// `λ P v` through the Kronecker oracle.
pub fn twist(v: &[C], lambda: C, factors: &[PauliFactor]) -> Vec<C> {
    lim_matrix(lambda, factors).apply(v)
}

pub fn is_unitary_gate(kind: &GateKind) -> bool {
    let m = kind.matrix();
    let u = Mat { dim: 2, data: m.to_vec() };
    u.mul(&u.dagger()).max_diff(&Mat::identity(2)) < 1e-12
}
