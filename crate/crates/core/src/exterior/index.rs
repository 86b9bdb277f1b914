//! Packed multi-index bookkeeping for forms on a 7-dimensional space.
//!
//! An increasing multi-index `i1 < i2 < .. < ik` is stored as a 7-bit mask.
//! Within one degree the masks are enumerated in lexicographic order of the
//! increasing tuples; that order is the packed coefficient order.

use std::sync::OnceLock;

pub const DIM: usize = 7;
pub(crate) const FULL_MASK: u8 = (1 << DIM) - 1;

pub(crate) struct WedgeEntry {
    pub left: u16,
    pub right: u16,
    pub out: u16,
    pub negative: bool,
}

pub(crate) struct InteriorEntry {
    pub axis: u8,
    pub input: u16,
    pub out: u16,
    pub negative: bool,
}

pub(crate) struct Tables {
    masks: Vec<Vec<u8>>,
    position: [u16; 128],
    wedge: Vec<Vec<WedgeEntry>>,
    interior: Vec<Vec<InteriorEntry>>,
    complement_negative: [bool; 128],
}

pub(crate) fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(Tables::build)
}

/// Number of packed coefficients of a k-form.
pub const fn form_len(degree: usize) -> usize {
    // C(7, k)
    const LENS: [usize; 8] = [1, 7, 21, 35, 35, 21, 7, 1];
    LENS[degree]
}

/// Sign of the permutation sorting the concatenation of two disjoint increasing
/// index sets. Returns `true` when the sign is negative.
pub(crate) fn concat_negative(a: u8, b: u8) -> bool {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = a & !((1u16 << (j + 1)) - 1) as u8;
        inversions += above.count_ones();
    }
    inversions % 2 == 1
}

/// Mask and permutation sign of an arbitrary index tuple. `None` when an index
/// repeats.
pub(crate) fn sort_indices(indices: &[usize]) -> Option<(u8, bool)> {
    let mut mask = 0u8;
    let mut negative = false;
    for &i in indices {
        let bit = 1u8 << i;
        if mask & bit != 0 {
            return None;
        }
        if concat_negative(mask, bit) {
            negative = !negative;
        }
        mask |= bit;
    }
    Some((mask, negative))
}

pub(crate) fn mask_indices(mask: u8) -> impl Iterator<Item = usize> {
    (0..DIM).filter(move |i| mask & (1 << i) != 0)
}

impl Tables {
    fn build() -> Self {
        let mut masks: Vec<Vec<u8>> = vec![Vec::new(); DIM + 1];
        let mut tuple = Vec::with_capacity(DIM);
        for k in 0..=DIM {
            enumerate(k, 0, &mut tuple, &mut masks[k]);
        }
        let mut position = [0u16; 128];
        for list in &masks {
            for (p, &m) in list.iter().enumerate() {
                position[m as usize] = p as u16;
            }
        }

        let mut wedge = Vec::with_capacity((DIM + 1) * (DIM + 1));
        for p in 0..=DIM {
            for q in 0..=DIM {
                let mut entries = Vec::new();
                if p + q <= DIM {
                    for (ia, &a) in masks[p].iter().enumerate() {
                        for (ib, &b) in masks[q].iter().enumerate() {
                            if a & b == 0 {
                                entries.push(WedgeEntry {
                                    left: ia as u16,
                                    right: ib as u16,
                                    out: position[(a | b) as usize],
                                    negative: concat_negative(a, b),
                                });
                            }
                        }
                    }
                }
                wedge.push(entries);
            }
        }

        let mut interior = Vec::with_capacity(DIM + 1);
        for list in &masks {
            let mut entries = Vec::new();
            for (ia, &a) in list.iter().enumerate() {
                for (slot, axis) in mask_indices(a).enumerate() {
                    let rest = a & !(1 << axis);
                    entries.push(InteriorEntry {
                        axis: axis as u8,
                        input: ia as u16,
                        out: position[rest as usize],
                        negative: slot % 2 == 1,
                    });
                }
            }
            interior.push(entries);
        }

        let mut complement_negative = [false; 128];
        for m in 0..128u8 {
            complement_negative[m as usize] = concat_negative(m, FULL_MASK ^ m);
        }

        Tables {
            masks,
            position,
            wedge,
            interior,
            complement_negative,
        }
    }

    pub fn masks(&self, degree: usize) -> &[u8] {
        &self.masks[degree]
    }

    pub fn position(&self, mask: u8) -> usize {
        self.position[mask as usize] as usize
    }

    pub fn wedge(&self, p: usize, q: usize) -> &[WedgeEntry] {
        &self.wedge[p * (DIM + 1) + q]
    }

    pub fn interior(&self, degree: usize) -> &[InteriorEntry] {
        &self.interior[degree]
    }

    /// Sign of `dx^I ∧ dx^{I^c}` relative to `dx^1 ∧ .. ∧ dx^7`.
    pub fn complement_negative(&self, mask: u8) -> bool {
        self.complement_negative[mask as usize]
    }
}

fn enumerate(k: usize, start: usize, tuple: &mut Vec<usize>, out: &mut Vec<u8>) {
    if tuple.len() == k {
        out.push(tuple.iter().fold(0u8, |m, &i| m | (1 << i)));
        return;
    }
    for i in start..DIM {
        tuple.push(i);
        enumerate(k, i + 1, tuple, out);
        tuple.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_are_binomials() {
        let t = tables();
        for k in 0..=DIM {
            assert_eq!(t.masks(k).len(), form_len(k));
        }
    }

    #[test]
    fn lexicographic_order() {
        let t = tables();
        let first: Vec<usize> = mask_indices(t.masks(3)[0]).collect();
        let second: Vec<usize> = mask_indices(t.masks(3)[1]).collect();
        assert_eq!(first, vec![0, 1, 2]);
        assert_eq!(second, vec![0, 1, 3]);
    }

    #[test]
    fn sort_sign() {
        assert_eq!(sort_indices(&[0, 1]), Some((0b11, false)));
        assert_eq!(sort_indices(&[1, 0]), Some((0b11, true)));
        assert_eq!(sort_indices(&[2, 0, 1]), Some((0b111, false)));
        assert_eq!(sort_indices(&[0, 0]), None);
    }
}
