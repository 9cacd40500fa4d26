//! Dense statevector simulator used as the correctness oracle.
//!
//! Qubit `m−1` is the most-significant index bit. Gates update amplitude
//! pairs in place; controls act as index filters.

mod io;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

pub use io::{read_statevector, write_statevector};

/// Largest register the simulator accepts.
pub const SIM_MAX_QUBITS: usize = 22;

/// Registers at least this large are updated in parallel when enabled.
#[cfg(feature = "parallel")]
const PAR_MIN_QUBITS: usize = 14;

/// Execution strategy for the pairwise update loop. Both produce identical
/// results; `Parallel` falls back to sequential without the `parallel`
/// feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    amplitudes: Vec<Complex64>,
    num_qubits: usize,
}

fn check_size(m: usize) -> Result<()> {
    if m > SIM_MAX_QUBITS {
        Err(Error::TooManyQubits { requested: m, limit: SIM_MAX_QUBITS })
    } else {
        Ok(())
    }
}

impl DenseState {
    /// `|0…0⟩` on `m` qubits.
    pub fn zero(m: usize) -> Result<DenseState> {
        DenseState::basis(m, 0)
    }

    pub fn basis(m: usize, index: usize) -> Result<DenseState> {
        check_size(m)?;
        let dim = 1usize << m;
        if index >= dim {
            return Err(Error::QubitOutOfRange { qubit: index, num_qubits: m });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(DenseState { amplitudes, num_qubits: m })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<DenseState> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let m = len.trailing_zeros() as usize;
        check_size(m)?;
        Ok(DenseState { amplitudes, num_qubits: m })
    }

    /// `|1⟩_a ⊗ |ψ⟩` with the ancilla on the new most-significant qubit.
    pub fn with_ancilla_one(psi: &[Complex64]) -> Result<DenseState> {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); psi.len()];
        amplitudes.extend_from_slice(psi);
        DenseState::from_amplitudes(amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        self.apply_gate_with(gate, Parallelism::default())
    }

    pub fn apply_gate_with(&mut self, gate: &Gate, par: Parallelism) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let kernel = Kernel::new(gate);
        match par {
            #[cfg(feature = "parallel")]
            Parallelism::Parallel if self.num_qubits >= PAR_MIN_QUBITS => kernel.apply_par(&mut self.amplitudes),
            _ => kernel.apply_seq(&mut self.amplitudes),
        }
        Ok(())
    }
}

/// Precomputed masks for one gate application.
struct Kernel {
    m: [Complex64; 4],
    kind: GateKind,
    half: usize,
    // control bits above the target are constant within a block
    high_mask: usize,
    high_val: usize,
    low_mask: usize,
    low_val: usize,
}

impl Kernel {
    fn new(gate: &Gate) -> Kernel {
        let t = gate.target;
        let (mut mask, mut val) = (0usize, 0usize);
        for c in &gate.controls {
            mask |= 1 << c.qubit;
            if c.required_bit() {
                val |= 1 << c.qubit;
            }
        }
        let below = (1usize << t) - 1;
        Kernel {
            m: gate.kind.matrix(),
            kind: gate.kind,
            half: 1 << t,
            high_mask: mask & !below,
            high_val: val & !below,
            low_mask: mask & below,
            low_val: val & below,
        }
    }

    #[inline]
    fn update(&self, a: &mut Complex64, b: &mut Complex64) {
        match self.kind {
            GateKind::PauliX => std::mem::swap(a, b),
            GateKind::PauliZ => *b = -*b,
            GateKind::Phase(_) => *b *= self.m[3],
            GateKind::Unitary2(_) => {
                let (x, y) = (*a, *b);
                *a = self.m[0] * x + self.m[1] * y;
                *b = self.m[2] * x + self.m[3] * y;
            }
        }
    }

    fn block_selected(&self, block_index: usize) -> bool {
        (block_index * 2 * self.half) & self.high_mask == self.high_val
    }

    fn apply_block(&self, block: &mut [Complex64]) {
        let (lo, hi) = block.split_at_mut(self.half);
        for (off, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            if off & self.low_mask == self.low_val {
                self.update(a, b);
            }
        }
    }

    fn apply_seq(&self, amps: &mut [Complex64]) {
        for (bi, block) in amps.chunks_mut(2 * self.half).enumerate() {
            if self.block_selected(bi) {
                self.apply_block(block);
            }
        }
    }

    #[cfg(feature = "parallel")]
    fn apply_par(&self, amps: &mut [Complex64]) {
        use rayon::prelude::*;
        let blocks = amps.len() / (2 * self.half);
        if blocks >= 64 {
            amps.par_chunks_mut(2 * self.half)
                .enumerate()
                .filter(|(bi, _)| self.block_selected(*bi))
                .for_each(|(_, block)| self.apply_block(block));
        } else {
            for (bi, block) in amps.chunks_mut(2 * self.half).enumerate() {
                if !self.block_selected(bi) {
                    continue;
                }
                let (lo, hi) = block.split_at_mut(self.half);
                lo.par_iter_mut().zip(hi.par_iter_mut()).enumerate().for_each(|(off, (a, b))| {
                    if off & self.low_mask == self.low_val {
                        self.update(a, b);
                    }
                });
            }
        }
    }
}

/// Applies every gate left to right.
pub fn run(circuit: &Circuit, initial: DenseState) -> Result<DenseState> {
    run_with(circuit, initial, Parallelism::default())
}

pub fn run_with(circuit: &Circuit, initial: DenseState, par: Parallelism) -> Result<DenseState> {
    if initial.num_qubits != circuit.num_qubits() {
        return Err(Error::LengthMismatch { expected: circuit.num_qubits(), actual: initial.num_qubits });
    }
    let mut state = initial;
    for g in circuit.gates() {
        state.apply_gate_with(g, par)?;
    }
    Ok(state)
}

/// `|⟨a|b⟩|`.
pub fn fidelity(a: &DenseState, b: &DenseState) -> Result<f64> {
    if a.amplitudes.len() != b.amplitudes.len() {
        return Err(Error::LengthMismatch { expected: a.amplitudes.len(), actual: b.amplitudes.len() });
    }
    Ok(inner(&a.amplitudes, &b.amplitudes).norm())
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn h() -> [Complex64; 4] {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        [s, s, s, -s]
    }

    #[test]
    fn x_flips_zero() {
        let mut s = DenseState::zero(1).unwrap();
        s.apply_gate(&Gate::x(0)).unwrap();
        assert_eq!(s, DenseState::basis(1, 1).unwrap());
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = DenseState::zero(1).unwrap();
        s.apply_gate(&Gate::unitary(h(), 0)).unwrap();
        for a in s.amplitudes() {
            assert!((a - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn ccz_only_flips_all_ones() {
        let ccz = Gate::z(0).ctrl(2).ctrl(1);
        let mut s = DenseState::basis(3, 0b110).unwrap();
        s.apply_gate(&ccz).unwrap();
        assert_eq!(s, DenseState::basis(3, 0b110).unwrap());
        let mut s = DenseState::basis(3, 0b111).unwrap();
        s.apply_gate(&ccz).unwrap();
        assert_eq!(s.amplitude(0b111), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn negative_control() {
        let g = Gate::x(0).negctrl(1);
        let mut s = DenseState::basis(2, 0b00).unwrap();
        s.apply_gate(&g).unwrap();
        assert_eq!(s, DenseState::basis(2, 0b01).unwrap());
        let mut s = DenseState::basis(2, 0b10).unwrap();
        s.apply_gate(&g).unwrap();
        assert_eq!(s, DenseState::basis(2, 0b10).unwrap());
    }

    #[test]
    fn out_of_range_and_mismatch() {
        let mut s = DenseState::zero(2).unwrap();
        assert!(s.apply_gate(&Gate::x(2)).is_err());
        let c = Circuit::new(3);
        assert!(run(&c, s.clone()).is_err());
        assert_eq!(run(&Circuit::new(2), s.clone()).unwrap(), s);
        assert!(DenseState::zero(SIM_MAX_QUBITS + 1).is_err());
    }

    #[test]
    fn fidelity_basics() {
        let a = DenseState::basis(2, 1).unwrap();
        let b = DenseState::basis(2, 2).unwrap();
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        let phased =
            DenseState::from_amplitudes(a.amplitudes().iter().map(|x| x * Complex64::from_polar(1.0, 0.9)).collect())
                .unwrap();
        assert!((fidelity(&a, &phased).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&a, &DenseState::zero(3).unwrap()).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let m = 15;
        let amps: Vec<Complex64> =
            (0..1usize << m).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let gates = [
            Gate::unitary(h(), 14).ctrl(3),
            Gate::unitary(h(), 0).negctrl(14).ctrl(7),
            Gate::x(9).ctrl(0).ctrl(14),
            Gate::phase(0.4, 13),
        ];
        let mut a = DenseState::from_amplitudes(amps.clone()).unwrap();
        let mut b = DenseState::from_amplitudes(amps).unwrap();
        for g in &gates {
            a.apply_gate_with(g, Parallelism::Sequential).unwrap();
            b.apply_gate_with(g, Parallelism::Parallel).unwrap();
        }
        assert_eq!(a, b);
    }
}
