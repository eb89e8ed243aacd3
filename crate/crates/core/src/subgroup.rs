//! Additive subgroups of GF(2^s), their cosets, and the indexed subgroup table
//! used by density evolution.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SymbolSet};

/// Default cap on `s` for building a [`SubgroupTable`] (T = 374 at s = 5).
pub const DEFAULT_TABLE_MAX_S: u32 = 5;

/// An additive subgroup (GF(2)-subspace) with its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    set: SymbolSet,
    basis: Vec<FieldElement>,
}

impl Subgroup {
    /// Returns `None` unless `set` contains 0 and is closed under addition.
    pub fn from_set(set: SymbolSet) -> Option<Subgroup> {
        if !set.contains(FieldElement::ZERO) || !set.len().is_power_of_two() {
            return None;
        }
        if set.iter().any(|x| set.translate(x) != set) {
            return None;
        }
        Some(Subgroup {
            set,
            basis: reduced_basis(set.iter()),
        })
    }

    /// The span of arbitrary generators.
    pub fn span(generators: &[FieldElement]) -> Subgroup {
        let basis = reduced_basis(generators.iter().copied());
        let mut mask = SymbolSet::singleton(FieldElement::ZERO);
        for b in &basis {
            mask = mask.union(mask.translate(*b));
        }
        Subgroup { set: mask, basis }
    }

    pub fn trivial() -> Subgroup {
        Subgroup {
            set: SymbolSet::singleton(FieldElement::ZERO),
            basis: Vec::new(),
        }
    }

    pub fn set(&self) -> SymbolSet {
        self.set
    }

    /// Canonical basis: reduced row-echelon form, pivots (leading bits) descending.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        self.set.contains(x)
    }
}

/// Gaussian elimination over GF(2); returns the reduced basis sorted by pivot, high first.
pub fn reduced_basis<I: IntoIterator<Item = FieldElement>>(vectors: I) -> Vec<FieldElement> {
    let mut rows: Vec<u8> = Vec::new();
    for v in vectors {
        let mut v = v.value();
        for &r in &rows {
            let pivot = 7 - r.leading_zeros() as u8;
            if v >> pivot & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            rows.push(v);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    // back-substitute so each pivot bit appears in exactly one row
    for i in 0..rows.len() {
        let pivot = 7 - rows[i].leading_zeros() as u8;
        for k in 0..rows.len() {
            if k != i && rows[k] >> pivot & 1 == 1 {
                rows[k] ^= rows[i];
            }
        }
    }
    rows.sort_unstable_by(|a, b| b.cmp(a));
    rows.into_iter().map(FieldElement::new).collect()
}

/// A coset `H + r` with `r` the minimum-value element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coset {
    pub subgroup: Subgroup,
    pub representative: FieldElement,
}

impl Coset {
    pub fn set(&self) -> SymbolSet {
        self.subgroup.set().translate(self.representative)
    }
}

/// Splits a set into subgroup plus canonical shift, or `None` if it is not a coset.
pub fn coset_decompose(set: SymbolSet) -> Option<Coset> {
    let rep = set.min()?;
    let subgroup = Subgroup::from_set(set.translate(rep))?;
    Some(Coset {
        subgroup,
        representative: rep,
    })
}

/// The channel subgroup `M_0^j`: polynomials of degree below `j`, i.e. values `[0, 2^j)`.
pub fn channel_subgroup(field: &Field, j: usize) -> Result<Subgroup> {
    if j > field.s() as usize {
        return Err(Error::ErasureType { j, s: field.s() });
    }
    let basis: Vec<FieldElement> = (0..j).rev().map(|b| FieldElement::new(1 << b)).collect();
    Ok(Subgroup {
        set: SymbolSet::range(0, 1 << j),
        basis,
    })
}

/// Number of `j`-dimensional subspaces of GF(2)^s.
pub fn gaussian_binomial(s: u32, j: u32) -> u64 {
    if j > s {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..j {
        num *= (1u128 << s) - (1u128 << i);
        den *= (1u128 << j) - (1u128 << i);
    }
    (num / den) as u64
}

/// Total number of additive subgroups of GF(2^s).
pub fn subgroup_count(s: u32) -> u64 {
    (0..=s).map(|j| gaussian_binomial(s, j)).sum()
}

/// All subgroups `H_1..H_T` (0-based here, `H_1 = {0}` at index 0) with
/// precomputed scale, span and intersection index maps.
#[derive(Clone, Debug)]
pub struct SubgroupTable {
    field: Field,
    subgroups: Vec<Subgroup>,
    index: HashMap<u64, usize>,
    /// `scale[g * T + t]` = index of `g * H_t`; row `g = 0` unused.
    scale: Vec<u16>,
    span: Vec<u16>,
    meet: Vec<u16>,
    channel_index: Vec<usize>,
}

impl SubgroupTable {
    pub fn new(field: &Field) -> Result<Self> {
        Self::with_max_s(field, DEFAULT_TABLE_MAX_S)
    }

    pub fn with_max_s(field: &Field, max_s: u32) -> Result<Self> {
        if field.s() > max_s {
            return Err(Error::FieldTooLarge {
                s: field.s(),
                max: max_s,
            });
        }
        let subgroups = enumerate(field);
        let t_count = subgroups.len();
        let index: HashMap<u64, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, h)| (h.set().mask(), i))
            .collect();
        let lookup = |set: SymbolSet| index[&set.mask()] as u16;

        let q = field.q();
        let mut scale = vec![0u16; q * t_count];
        for g in field.nonzero_elements() {
            for (t, h) in subgroups.iter().enumerate() {
                scale[g.value() as usize * t_count + t] =
                    lookup(field.scale_set_unchecked(g, h.set()));
            }
        }
        let mut span = vec![0u16; t_count * t_count];
        let mut meet = vec![0u16; t_count * t_count];
        for (a, ha) in subgroups.iter().enumerate() {
            for (b, hb) in subgroups.iter().enumerate().skip(a) {
                let s = lookup(field.sumset_unchecked(ha.set(), hb.set()));
                let m = lookup(ha.set().intersect(hb.set()));
                span[a * t_count + b] = s;
                span[b * t_count + a] = s;
                meet[a * t_count + b] = m;
                meet[b * t_count + a] = m;
            }
        }
        let channel_index = (0..=field.s() as usize)
            .map(|j| index[&SymbolSet::range(0, 1 << j).mask()])
            .collect();
        Ok(SubgroupTable {
            field: *field,
            subgroups,
            index,
            scale,
            span,
            meet,
            channel_index,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// T, the number of subgroups.
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn get(&self, t: usize) -> &Subgroup {
        &self.subgroups[t]
    }

    pub fn index_of(&self, set: SymbolSet) -> Option<usize> {
        self.index.get(&set.mask()).copied()
    }

    #[inline]
    pub fn scale(&self, g: FieldElement, t: usize) -> usize {
        self.scale[g.value() as usize * self.len() + t] as usize
    }

    #[inline]
    pub fn span(&self, a: usize, b: usize) -> usize {
        self.span[a * self.len() + b] as usize
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    /// Index of the channel subgroup `M_0^j`.
    pub fn channel_index(&self, j: usize) -> usize {
        self.channel_index[j]
    }
}

/// Subspaces ordered by dimension, then by mask value.
fn enumerate(field: &Field) -> Vec<Subgroup> {
    let mut layers: Vec<Vec<u64>> = vec![vec![1]];
    for _ in 0..field.s() {
        let prev = layers.last().unwrap();
        let mut next: Vec<u64> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for &mask in prev {
            let set = SymbolSet::from_mask(mask);
            for x in field.elements() {
                if set.contains(x) {
                    continue;
                }
                let bigger = set.union(set.translate(x)).mask();
                if seen.insert(bigger) {
                    next.push(bigger);
                }
            }
        }
        next.sort_unstable();
        layers.push(next);
    }
    layers
        .into_iter()
        .flatten()
        .map(|mask| Subgroup::from_set(SymbolSet::from_mask(mask)).expect("span is a subgroup"))
        .collect()
}
