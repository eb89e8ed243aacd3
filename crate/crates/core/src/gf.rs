//! Arithmetic in GF(2^s) under a polynomial basis, plus bitmask symbol sets.
//!
//! An element is stored as an integer in `[0, q)` whose bit `i` is the
//! coefficient of `alpha^i`. A [`SymbolSet`] is a q-bit mask in one `u64`,
//! which caps the extension degree at 6.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree (q = 64 fits one machine word).
pub const MAX_S: u32 = 6;

/// Default primitive polynomials, indexed by `s`.
pub const DEFAULT_PRIMITIVE_POLYS: [u32; 7] = [
    0,
    0b11,      // x + 1
    0b111,     // x^2 + x + 1
    0b1011,    // x^3 + x + 1
    0b10011,   // x^4 + x + 1
    0b100101,  // x^5 + x^2 + 1
    0b1000011, // x^6 + x + 1
];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw value; callers are responsible for `value < q`.
    pub const fn new(value: u8) -> Self {
        FieldElement(value)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

/// GF(2^s) with log/antilog tables for a primitive polynomial.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Field {
    s: u32,
    poly: u32,
    exp: [u8; 128],
    log: [u8; 64],
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("s", &self.s)
            .field("poly", &format_args!("{:#b}", self.poly))
            .finish()
    }
}

impl Field {
    /// GF(2^s) with the default primitive polynomial for `s`.
    pub fn new(s: u32) -> Result<Self> {
        if s == 0 || s > MAX_S {
            return Err(Error::FieldTooLarge { s, max: MAX_S });
        }
        Self::with_poly(s, DEFAULT_PRIMITIVE_POLYS[s as usize])
    }

    /// GF(2^s) reduced by `poly`, which must be primitive of degree `s`.
    pub fn with_poly(s: u32, poly: u32) -> Result<Self> {
        if s == 0 || s > MAX_S {
            return Err(Error::FieldTooLarge { s, max: MAX_S });
        }
        if poly >> s != 1 {
            return Err(Error::NotPrimitive { poly, s });
        }
        let q = 1usize << s;
        let mut exp = [0u8; 128];
        let mut log = [0u8; 64];
        let mut e = 1u32;
        for k in 0..q - 1 {
            if k > 0 && e == 1 {
                // alpha has order k < q - 1
                return Err(Error::NotPrimitive { poly, s });
            }
            exp[k] = e as u8;
            exp[k + q - 1] = e as u8;
            log[e as usize] = k as u8;
            e <<= 1;
            if e >> s & 1 == 1 {
                e ^= poly;
            }
            if e == 0 {
                return Err(Error::NotPrimitive { poly, s });
            }
        }
        if e != 1 {
            return Err(Error::NotPrimitive { poly, s });
        }
        Ok(Field { s, poly, exp, log })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> usize {
        1 << self.s
    }

    pub fn primitive_poly(&self) -> u32 {
        self.poly
    }

    /// The primitive element `x` (value 2, or 1 in GF(2)).
    pub fn alpha(&self) -> FieldElement {
        FieldElement(self.exp[1 % (self.q() - 1).max(1)])
    }

    pub fn element(&self, value: usize) -> Option<FieldElement> {
        (value < self.q()).then_some(FieldElement(value as u8))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q()).map(|v| FieldElement(v as u8))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q()).map(|v| FieldElement(v as u8))
    }

    /// `alpha^k` for any integer `k` (negative exponents allowed).
    pub fn alpha_pow(&self, k: i64) -> FieldElement {
        let order = (self.q() - 1) as i64;
        FieldElement(self.exp[k.rem_euclid(order) as usize])
    }

    /// Discrete log base alpha of a nonzero element.
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        (!a.is_zero()).then(|| self.log[a.0 as usize] as usize)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        FieldElement(self.exp[self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize])
    }

    #[inline]
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero { q: self.q() });
        }
        let order = self.q() - 1;
        Ok(FieldElement(
            self.exp[(order - self.log[a.0 as usize] as usize) % order],
        ))
    }

    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let inv = self.inv(b)?;
        Ok(self.mul(a, inv))
    }

    /// The full alphabet as a set.
    pub fn full_set(&self) -> SymbolSet {
        SymbolSet(low_bits(self.q()))
    }

    /// Sumset `{a + b : a in A, b in B}`.
    pub fn sumset(&self, a: SymbolSet, b: SymbolSet) -> Result<SymbolSet> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.sumset_unchecked(a, b))
    }

    /// Sumset without the emptiness check; an empty operand yields the empty set.
    #[inline]
    pub fn sumset_unchecked(&self, a: SymbolSet, b: SymbolSet) -> SymbolSet {
        let full = self.full_set();
        if a == full || b == full {
            return if a.is_empty() || b.is_empty() {
                SymbolSet::EMPTY
            } else {
                full
            };
        }
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut out = 0u64;
        for x in small.iter() {
            out |= xor_translate(large.0, x.0);
        }
        SymbolSet(out)
    }

    /// Element-wise product `{g * a : a in A}`.
    pub fn scale_set(&self, g: FieldElement, a: SymbolSet) -> Result<SymbolSet> {
        if g.is_zero() {
            return Err(Error::ZeroScalar);
        }
        Ok(self.scale_set_unchecked(g, a))
    }

    #[inline]
    pub fn scale_set_unchecked(&self, g: FieldElement, a: SymbolSet) -> SymbolSet {
        if g.0 == 1 {
            return a;
        }
        let mut out = 0u64;
        for x in a.iter() {
            out |= 1u64 << self.mul(g, x).0;
        }
        SymbolSet(out)
    }
}

fn low_bits(count: usize) -> u64 {
    if count >= 64 {
        u64::MAX
    } else {
        (1u64 << count) - 1
    }
}

const SWAP_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Translates a mask by XOR: bit `y` of the input moves to bit `y ^ x`.
#[inline]
pub fn xor_translate(mut mask: u64, x: u8) -> u64 {
    let mut x = x as u32;
    while x != 0 {
        let k = x.trailing_zeros();
        let sh = 1u32 << k;
        let m = SWAP_MASKS[k as usize];
        mask = ((mask & m) << sh) | ((mask >> sh) & m);
        x &= x - 1;
    }
    mask
}

/// A subset of GF(2^s) as a bitmask; bit `x` set means element `x` is present.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct SymbolSet(u64);

impl SymbolSet {
    pub const EMPTY: SymbolSet = SymbolSet(0);

    pub const fn from_mask(mask: u64) -> Self {
        SymbolSet(mask)
    }

    pub fn singleton(x: FieldElement) -> Self {
        SymbolSet(1u64 << x.0)
    }

    pub fn from_elements<I: IntoIterator<Item = u8>>(elements: I) -> Self {
        SymbolSet(elements.into_iter().fold(0, |m, x| m | 1u64 << x))
    }

    /// The contiguous block `[start, start + len)`.
    pub fn range(start: usize, len: usize) -> Self {
        SymbolSet(low_bits(len) << start)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn is_singleton(self) -> bool {
        self.0 != 0 && self.0 & (self.0 - 1) == 0
    }

    pub fn contains(self, x: FieldElement) -> bool {
        self.0 >> x.0 & 1 == 1
    }

    pub fn min(self) -> Option<FieldElement> {
        (!self.is_empty()).then(|| FieldElement(self.0.trailing_zeros() as u8))
    }

    pub fn intersect(self, other: SymbolSet) -> SymbolSet {
        SymbolSet(self.0 & other.0)
    }

    pub fn union(self, other: SymbolSet) -> SymbolSet {
        SymbolSet(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: SymbolSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// `{a + x : a in self}`.
    pub fn translate(self, x: FieldElement) -> SymbolSet {
        SymbolSet(xor_translate(self.0, x.0))
    }

    pub fn iter(self) -> SetIter {
        SetIter(self.0)
    }
}

impl fmt::Debug for SymbolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|x| x.0)).finish()
    }
}

pub struct SetIter(u64);

impl Iterator for SetIter {
    type Item = FieldElement;

    fn next(&mut self) -> Option<FieldElement> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(FieldElement(x as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl IntoIterator for SymbolSet {
    type Item = FieldElement;
    type IntoIter = SetIter;

    fn into_iter(self) -> SetIter {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: u8) -> FieldElement {
        FieldElement::new(v)
    }

    #[test]
    fn default_polys_are_primitive() {
        for s in 1..=MAX_S {
            Field::new(s).unwrap();
        }
    }

    #[test]
    fn rejects_non_primitive() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but alpha has order 5
        assert!(Field::with_poly(4, 0b11111).is_err());
        // x^2 + 1 = (x + 1)^2
        assert!(Field::with_poly(2, 0b101).is_err());
        assert!(Field::with_poly(3, 0b11).is_err());
    }

    #[test]
    fn gf4_alpha_squared() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.mul(el(2), el(2)), el(3));
        for a in f.elements() {
            assert_eq!(f.mul(a, FieldElement::ONE), a);
        }
    }

    /// Multiplication by shift-and-reduce, independent of the log tables.
    fn mul_slow(a: u8, b: u8, s: u32, poly: u32) -> u8 {
        let mut acc = 0u32;
        let mut a = a as u32;
        let mut b = b as u32;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> s & 1 == 1 {
                a ^= poly;
            }
        }
        acc as u8
    }

    #[test]
    fn gf8_table_matches_shift_and_add() {
        for s in 1..=MAX_S {
            let f = Field::new(s).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(
                        f.mul(a, b).value(),
                        mul_slow(a.value(), b.value(), s, f.primitive_poly())
                    );
                }
            }
        }
    }

    #[test]
    fn division() {
        let f = Field::new(2).unwrap();
        for a in f.nonzero_elements() {
            assert_eq!(f.div(a, a).unwrap(), FieldElement::ONE);
            assert_eq!(f.div(FieldElement::ZERO, a).unwrap(), FieldElement::ZERO);
        }
        let r = f.div(el(3), el(2)).unwrap();
        assert_eq!(f.mul(r, el(2)), el(3));
        assert!(matches!(
            f.div(el(1), FieldElement::ZERO),
            Err(Error::DivisionByZero { q: 4 })
        ));
    }

    #[test]
    fn sumset_examples() {
        let f = Field::new(2).unwrap();
        let a = SymbolSet::from_elements([0, 1]);
        let b = SymbolSet::from_elements([0, 2]);
        assert_eq!(f.sumset(a, b).unwrap(), f.full_set());
        let zero = SymbolSet::singleton(FieldElement::ZERO);
        assert_eq!(f.sumset(zero, b).unwrap(), b);
        assert!(matches!(f.sumset(SymbolSet::EMPTY, b), Err(Error::EmptySet)));
    }

    #[test]
    fn scale_set_examples() {
        let f = Field::new(2).unwrap();
        let a = SymbolSet::from_elements([0, 1]);
        assert_eq!(f.scale_set(FieldElement::ONE, a).unwrap(), a);
        assert_eq!(
            f.scale_set(el(2), a).unwrap(),
            SymbolSet::from_elements([0, 2])
        );
        assert!(matches!(
            f.scale_set(FieldElement::ZERO, a),
            Err(Error::ZeroScalar)
        ));
    }

    #[test]
    fn translate_full_width() {
        let f = Field::new(6).unwrap();
        let set = SymbolSet::from_elements([0, 5, 63]);
        let t = set.translate(el(42));
        assert_eq!(t, SymbolSet::from_elements([42, 5 ^ 42, 63 ^ 42]));
        assert_eq!(f.full_set().translate(el(17)), f.full_set());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sumset_matches_pairwise_enumeration(a in 1u64..(1 << 16), b in 1u64..(1 << 16)) {
                let f = Field::new(4).unwrap();
                let (a, b) = (SymbolSet::from_mask(a), SymbolSet::from_mask(b));
                let mut expect = 0u64;
                for x in a {
                    for y in b {
                        expect |= 1 << (x.value() ^ y.value());
                    }
                }
                prop_assert_eq!(f.sumset(a, b).unwrap().mask(), expect);
            }

            #[test]
            fn scaling_preserves_cardinality(g in 1u8..64, a in any::<u64>()) {
                let f = Field::new(6).unwrap();
                let set = SymbolSet::from_mask(a);
                prop_assert_eq!(f.scale_set(FieldElement::new(g), set).unwrap().len(), set.len());
            }

            #[test]
            fn field_axioms(a in 0u8..32, b in 0u8..32, c in 0u8..32) {
                let f = Field::new(5).unwrap();
                let (a, b, c) = (el(a), el(b), el(c));
                prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
    }
}
