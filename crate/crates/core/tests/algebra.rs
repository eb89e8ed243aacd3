use proptest::prelude::*;
use qmbc_core::channel::observe;
use qmbc_core::subgroup::{channel_subgroup, coset_decompose, gaussian_binomial};
use qmbc_core::{capacity, Field, FieldElement, QmbcParams, SubgroupTable, SymbolSet};

fn field(s: u32) -> Field {
    Field::new(s).unwrap()
}

fn shift(set: SymbolSet, g: u8) -> SymbolSet {
    set.translate(FieldElement::new(g))
}

proptest! {
    #[test]
    fn field_axioms(s in 1u32..=6, a in any::<u8>(), b in any::<u8>(), c in any::<u8>()) {
        let f = field(s);
        let q = f.q() as u8 - 1;
        let (a, b, c) = (FieldElement::new(a & q), FieldElement::new(b & q), FieldElement::new(c & q));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
        prop_assert_eq!(f.mul(a, FieldElement::ONE), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn sumset_of_cosets_shifts_the_subgroup_sum(s in 2u32..=4, ia in any::<usize>(), ib in any::<usize>(), ga in any::<u8>(), gb in any::<u8>()) {
        let f = field(s);
        let table = SubgroupTable::new(&f).unwrap();
        let mask = f.q() as u8 - 1;
        let (ha, hb) = (table.get(ia % table.len()).set(), table.get(ib % table.len()).set());
        let (ga, gb) = (ga & mask, gb & mask);
        let lhs = f.sumset(shift(ha, ga), shift(hb, gb)).unwrap();
        let rhs = shift(f.sumset(ha, hb).unwrap(), ga ^ gb);
        prop_assert_eq!(lhs, rhs);
        prop_assert!(coset_decompose(lhs).is_some());
    }

    #[test]
    fn cosets_sharing_an_element_meet_in_a_coset(s in 2u32..=4, ia in any::<usize>(), ib in any::<usize>(), gamma in any::<u8>(), ta in any::<u8>(), tb in any::<u8>()) {
        let f = field(s);
        let table = SubgroupTable::new(&f).unwrap();
        let mask = f.q() as u8 - 1;
        let (ha, hb) = (table.get(ia % table.len()).set(), table.get(ib % table.len()).set());
        let gamma = gamma & mask;
        // move gamma by an element of each subgroup so the cosets still share it
        let pick = |h: SymbolSet, k: u8| h.iter().nth(k as usize % h.len()).unwrap().value();
        let a = shift(ha, gamma ^ pick(ha, ta));
        let b = shift(hb, gamma ^ pick(hb, tb));
        prop_assert_eq!(a.intersect(b), shift(ha.intersect(hb), gamma));
    }

    #[test]
    fn channel_output_contains_the_input(s in 1u32..=6, x in any::<u8>(), j in 0usize..=6) {
        let f = field(s);
        let j = j % (s as usize + 1);
        let x = FieldElement::new(x & (f.q() as u8 - 1));
        let out = observe(x, j);
        prop_assert!(out.contains(x));
        prop_assert_eq!(out.len(), 1 << j);
    }
}

#[test]
fn subgroup_counts_per_dimension_are_gaussian_binomials() {
    for s in 1..=5u32 {
        let table = SubgroupTable::new(&field(s)).unwrap();
        for j in 0..=s {
            let count = table.subgroups().iter().filter(|g| g.dim() == j as usize).count() as u64;
            assert_eq!(count, gaussian_binomial(s, j), "s={s} j={j}");
        }
    }
}

#[test]
fn table_operators_agree_with_masks() {
    for s in 2..=4u32 {
        let f = field(s);
        let table = SubgroupTable::new(&f).unwrap();
        for a in 0..table.len() {
            for b in 0..table.len() {
                let (sa, sb) = (table.get(a).set(), table.get(b).set());
                assert_eq!(table.get(table.span(a, b)).set(), f.sumset(sa, sb).unwrap());
                assert_eq!(table.get(table.meet(a, b)).set(), sa.intersect(sb));
            }
            for g in f.nonzero_elements() {
                assert_eq!(table.get(table.scale(g, a)).set(), f.scale_set(g, table.get(a).set()).unwrap());
            }
        }
    }
}

#[test]
fn channel_subgroups_are_nested_and_partition_the_alphabet() {
    for s in 1..=6u32 {
        let f = field(s);
        for j in 0..=s as usize {
            let m = channel_subgroup(&f, j).unwrap().set();
            if j > 0 {
                assert!(channel_subgroup(&f, j - 1).unwrap().set().is_subset_of(m));
            }
            let mut covered = SymbolSet::EMPTY;
            let mut blocks = 0;
            for x in f.elements() {
                let out = observe(x, j);
                if out.min() == Some(x) {
                    assert!(out.intersect(covered).is_empty());
                    covered = covered.union(out);
                    blocks += 1;
                }
            }
            assert_eq!(covered, f.full_set());
            assert_eq!(blocks, f.q() >> j);
        }
    }
}

#[test]
fn capacity_reduces_to_the_erasure_channel() {
    for s in 1..=4u32 {
        let f = field(s);
        for e in [0.0, 0.1, 0.5, 0.9] {
            let mut eps = vec![0.0; s as usize];
            eps[s as usize - 1] = e;
            let c = capacity(&QmbcParams::new(&f, eps).unwrap());
            assert!((c - (1.0 - e)).abs() < 1e-15);
        }
    }
}
