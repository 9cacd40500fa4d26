//! Pauli stabilizer groups of diagram nodes and the coset minimisation that
//! makes high labels canonical.
//!
//! A node's group holds every LIM `g` with `g|v⟩ = |v⟩`. Such groups are
//! abelian and their scalars are fourth roots of unity, so they are kept as
//! lists of generators with snapped scalars.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::store::compare_labels;
use crate::error::Result;
use crate::lim::{Lim, PauliFactor};

/// Pauli part as an integer: the X mask outranks the Z mask. A coset
/// minimum therefore has the fewest X bits available, and a pure-Z string
/// is always its own minimum.
pub(crate) fn key(l: &Lim) -> u128 {
    ((l.x_mask() as u128) << 64) | l.z_mask() as u128
}

fn lead(k: u128) -> u32 {
    127 - k.leading_zeros()
}

/// Nearest of `1, i, −1, −i`.
pub(crate) fn snap_root4(c: Complex64) -> Complex64 {
    if c.re.abs() >= c.im.abs() {
        Complex64::new(c.re.signum(), 0.0)
    } else {
        Complex64::new(0.0, c.im.signum())
    }
}

fn mul_snapped(a: &Lim, b: &Lim) -> Result<Lim> {
    let p = a.mul(b)?;
    Ok(p.with_scalar(snap_root4(p.scalar())))
}

fn is_real_unit(c: Complex64) -> bool {
    c.re.abs() >= c.im.abs()
}

/// Element of `Stab(L) × Stab(H)` tracked by its combined Pauli key.
#[derive(Clone, Copy, Debug)]
struct Pair {
    key: u128,
    g: Lim,
    s: Lim,
}

impl Pair {
    fn combine(&self, other: &Pair) -> Result<Pair> {
        Ok(Pair { key: self.key ^ other.key, g: mul_snapped(&self.g, &other.g)?, s: mul_snapped(&self.s, &other.s)? })
    }
}

/// Row-echelon basis of the span of `Stab(L) ∪ Stab(H)` Pauli parts, with
/// the kernel (pairs whose Pauli parts coincide) collected on the side.
struct Echelon {
    rows: Vec<Pair>,
    kernel: Vec<Pair>,
}

impl Echelon {
    fn new(k: usize, lo: &[Lim], hi: &[Lim]) -> Result<Echelon> {
        let id = Lim::identity(k);
        let mut e = Echelon { rows: Vec::new(), kernel: Vec::new() };
        let items = lo.iter().map(|g| Pair { key: key(g), g: *g, s: id }).chain(hi.iter().map(|s| Pair {
            key: key(s),
            g: id,
            s: *s,
        }));
        for p in items {
            let r = e.reduce(p)?;
            if r.key == 0 {
                e.kernel.push(r);
            } else {
                let pos = e.rows.iter().position(|row| lead(row.key) < lead(r.key)).unwrap_or(e.rows.len());
                e.rows.insert(pos, r);
            }
        }
        Ok(e)
    }

    /// Clears every leading bit of the basis from `p`, top bit first. The
    /// result is the least key in `p.key ⊕ span`.
    fn reduce(&self, mut p: Pair) -> Result<Pair> {
        for row in &self.rows {
            if p.key >> lead(row.key) & 1 == 1 {
                p = p.combine(row)?;
            }
        }
        Ok(p)
    }
}

/// Scalar `f` with `g⁻¹·h·s = f·h`, for a kernel pair.
fn kernel_factor(pair: &Pair, h: &Lim) -> Result<Complex64> {
    let img = pair.g.inverse()?.mul(h)?.mul(&pair.s)?;
    Ok(snap_root4(img.scalar() / h.scalar()))
}

/// Least label in the symmetry orbit of `h` and a transform `T` with
/// `N(h) = T · N(label)`, where `N(x) = |0⟩|L⟩ + |1⟩ x|H⟩`.
///
/// The orbit is `{(−1)^a g⁻¹ h s}` for `g ∈ Stab(L)`, `s ∈ Stab(H)`
/// (`T = Z^a ⊗ g`), plus `{(−1)^a h⁻¹ s}` (`T = X Z^a ⊗ h`) when `L = H`.
pub(crate) fn canonical_label(
    level: usize,
    h: Lim,
    stab_lo: &[Lim],
    stab_hi: &[Lim],
    shared_child: bool,
    tol: f64,
) -> Result<(Lim, Lim)> {
    let k = level - 1;
    let id = Lim::identity(k);
    let ech = Echelon::new(k, stab_lo, stab_hi)?;
    let base = ech.reduce(Pair { key: key(&h), g: id, s: id })?;

    let minus = Complex64::new(-1.0, 0.0);
    let mut cands: Vec<(Lim, Lim)> = Vec::with_capacity(6);
    let h0 = base.g.inverse()?.mul(&h)?.mul(&base.s)?;
    let mut a_variants = vec![(h0, base.g.tensor_top(PauliFactor::I))];
    let mut imag = None;
    for kp in &ech.kernel {
        if !is_real_unit(kernel_factor(kp, &h0)?) {
            imag = Some(*kp);
            break;
        }
    }
    if let Some(kp) = imag {
        let h1 = kp.g.inverse()?.mul(&h0)?.mul(&kp.s)?;
        a_variants.push((h1, mul_snapped(&base.g, &kp.g)?.tensor_top(PauliFactor::I)));
    }
    let z_top = id.tensor_top(PauliFactor::Z);
    for (lab, t) in a_variants {
        cands.push((lab, t));
        cands.push((lab.scaled(minus), t.mul(&z_top)?));
    }
    if shared_child {
        // with L = H, key(g) ⊕ key(s) ranges over the same span as key(n)
        let n = mul_snapped(&base.g, &base.s)?;
        let lab = h.inverse()?.mul(&n)?;
        let t = h.tensor_top(PauliFactor::X);
        cands.push((lab, t));
        cands.push((lab.scaled(minus), t.mul(&z_top)?));
    }

    let mut best = cands[0];
    for c in cands.into_iter().skip(1) {
        debug_assert_eq!(key(&c.0), key(&best.0));
        if compare_labels(&c.0, &best.0, tol) == Ordering::Less {
            best = c;
        }
    }
    Ok(best)
}

/// Generators of `Stab(N)` for `N = |0⟩ l|L⟩ + |1⟩ h|H⟩`; a `None` label is a
/// ZERO edge. Both sides ZERO is not a node and yields no generators.
pub(crate) fn node_stabilizers(
    level: usize,
    low: Option<&Lim>,
    high: Option<&Lim>,
    stab_lo: &[Lim],
    stab_hi: &[Lim],
    shared_child: bool,
    tol: f64,
) -> Result<Vec<Lim>> {
    let k = level - 1;
    let lift = |g: &Lim, top: PauliFactor| g.tensor_top(top);
    let conj = |l: &Lim, g: &Lim| -> Result<Lim> { mul_snapped(&l.mul(g)?, &l.inverse()?) };
    match (low, high) {
        (None, None) => Ok(Vec::new()),
        (Some(l), None) => {
            let mut gens = vec![Lim::identity(k).tensor_top(PauliFactor::Z)];
            for g in stab_lo {
                gens.push(lift(&conj(l, g)?, PauliFactor::I));
            }
            Ok(gens)
        }
        (None, Some(h)) => {
            let mut gens = vec![Lim::identity(k).tensor_top(PauliFactor::Z).scaled(Complex64::new(-1.0, 0.0))];
            for s in stab_hi {
                gens.push(lift(&conj(h, s)?, PauliFactor::I));
            }
            Ok(gens)
        }
        (Some(l), Some(h)) => {
            if !l.is_pauli_identity() || l.scalar() != Complex64::new(1.0, 0.0) {
                // N = (I ⊗ l)·N' with N' = |0⟩|L⟩ + |1⟩ l⁻¹h|H⟩
                let inner = l.inverse()?.mul(h)?;
                let gens = node_stabilizers(
                    level,
                    Some(&Lim::identity(k)),
                    Some(&inner),
                    stab_lo,
                    stab_hi,
                    shared_child,
                    tol,
                )?;
                let lt = lift(l, PauliFactor::I);
                return gens.iter().map(|g| conj(&lt, g)).collect();
            }
            let ech = Echelon::new(k, stab_lo, stab_hi)?;
            let z_top = Lim::identity(k).tensor_top(PauliFactor::Z);
            let mut gens = Vec::new();
            let mut imag: Option<Pair> = None;
            for kp in &ech.kernel {
                let mut kp = *kp;
                let mut f = kernel_factor(&kp, h)?;
                if !is_real_unit(f) {
                    match imag {
                        None => {
                            imag = Some(kp);
                            continue;
                        }
                        Some(first) => {
                            kp = kp.combine(&first)?;
                            f = kernel_factor(&kp, h)?;
                        }
                    }
                }
                if kp.g.is_pauli_identity() {
                    continue;
                }
                // (−1)^a g⁻¹ h s = h  ⇒  Z^a ⊗ g fixes N
                let g = lift(&kp.g, PauliFactor::I);
                gens.push(if f.re < 0.0 { z_top.mul(&g)? } else { g });
            }
            if shared_child {
                // X Z^a ⊗ h fixes N iff (−1)^a h² = I
                let sq = h.mul(h)?.scalar();
                if (sq - Complex64::new(sq.re.signum(), 0.0)).norm() <= 1e3 * tol {
                    let top = PauliFactor { x: true, z: sq.re < 0.0 };
                    let g = h.tensor_top(top);
                    gens.push(g.with_scalar(snap_root4(g.scalar())));
                }
            }
            Ok(gens)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn key_order_x_part_first() {
        let zz = Lim::from_factors(c(1.0, 0.0), &[PauliFactor::Z, PauliFactor::Z]);
        let ix = Lim::from_factors(c(1.0, 0.0), &[PauliFactor::I, PauliFactor::X]);
        let xi = Lim::from_factors(c(1.0, 0.0), &[PauliFactor::X, PauliFactor::I]);
        assert!(key(&zz) < key(&ix) && key(&ix) < key(&xi));
    }

    #[test]
    fn coset_minimum_uses_child_stabilizer() {
        // children |+⟩ (stabilised by X): Z·|+⟩ and XZ·|+⟩ agree up to phase
        let x = Lim::from_factors(c(1.0, 0.0), &[PauliFactor::X]);
        let xz = Lim::from_factors(c(1.0, 0.0), &[PauliFactor::XZ]);
        let (label, _) = canonical_label(2, xz, &[x], &[x], true, 1e-10).unwrap();
        assert_eq!(label.factors(), vec![PauliFactor::Z]);
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_root4(c(-0.9999999, 1e-9)), c(-1.0, 0.0));
        assert_eq!(snap_root4(c(1e-12, -1.0)), c(0.0, -1.0));
    }
}
