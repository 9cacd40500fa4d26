use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
struct OrdF64(f64);

impl PartialEq for OrdF64 {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}
impl Eq for OrdF64 {}
impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Interns complex numbers so that values within tolerance share one
/// bit-exact representative, which makes them usable as hash keys.
#[derive(Clone, Debug)]
pub(crate) struct ScalarTable {
    entries: BTreeMap<(OrdF64, OrdF64), Complex64>,
    tol: f64,
}

impl ScalarTable {
    pub(crate) fn new(tol: f64) -> Self {
        ScalarTable { entries: BTreeMap::new(), tol }
    }

    pub(crate) fn intern(&mut self, c: Complex64) -> Complex64 {
        let c = snap_components(c, self.tol);
        let d = self.tol * 1.0f64.max(c.norm());
        let lo = (OrdF64(c.re - d), OrdF64(f64::NEG_INFINITY));
        let hi = (OrdF64(c.re + d), OrdF64(f64::INFINITY));
        let mut best: Option<(f64, Complex64)> = None;
        for (_, &v) in self.entries.range(lo..=hi) {
            let dist = (v - c).norm();
            if dist <= d && best.is_none_or(|(bd, _)| dist < bd) {
                best = Some((dist, v));
            }
        }
        if let Some((_, v)) = best {
            return v;
        }
        self.entries.insert((OrdF64(c.re), OrdF64(c.im)), c);
        c
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Zeroes real or imaginary parts that are negligible relative to `|c|`.
pub(crate) fn snap_components(c: Complex64, tol: f64) -> Complex64 {
    let mag = c.norm();
    let re = if c.re.abs() <= tol * mag { 0.0 } else { c.re };
    let im = if c.im.abs() <= tol * mag { 0.0 } else { c.im };
    Complex64::new(re + 0.0, im + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearby_values_share_representative() {
        let mut t = ScalarTable::new(1e-10);
        let a = t.intern(Complex64::new(0.5, 0.25));
        let b = t.intern(Complex64::new(0.5 + 1e-13, 0.25 - 1e-13));
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
        let c = t.intern(Complex64::new(0.5 + 1e-6, 0.25));
        assert_ne!(a, c);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn snapping_removes_signed_noise() {
        let s = snap_components(Complex64::new(-1.0, -1e-17), 1e-10);
        assert_eq!(s, Complex64::new(-1.0, 0.0));
        assert!(s.im.is_sign_positive());
    }

    #[test]
    fn relative_tolerance_for_large_values() {
        let mut t = ScalarTable::new(1e-10);
        let a = t.intern(Complex64::new(1e6, 0.0));
        let b = t.intern(Complex64::new(1e6 + 1e-5, 0.0));
        assert_eq!(a, b);
    }
}
