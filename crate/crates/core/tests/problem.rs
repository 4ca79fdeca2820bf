use std::collections::HashSet;

use proptest::prelude::*;
use qsched::problem::{
    build_layout, ceil_log2, count_solutions, count_solutions_with, feasible_paths,
    full_space_size, marked_mask, path_mask, reduced_space_size, space_sizes, AncillaStrategy,
    CoinPolicy, Dimensions, Instance, LayoutOptions, Mode, QubitLayout, Schedule,
};
use qsched::{Error, ExecPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn inst(i: usize, k: usize) -> Instance {
    Instance::uniform(i, k, 4).unwrap()
}

/// Independent oracle: every tuple of first dates and increments, with the
/// resource rule checked directly.
fn naive_count(instance: &Instance) -> u64 {
    let (i_n, k_n, c) = (instance.machines(), instance.jobs(), instance.window());
    let digits = i_n * k_n;
    let total = c.pow(digits as u32);
    let mut count = 0;
    for code in 0..total {
        let mut rest = code;
        let mut dates = vec![vec![0u64; k_n]; i_n];
        for (i, row) in dates.iter_mut().enumerate() {
            let mut d = instance.offset(i);
            for slot in row.iter_mut() {
                let step = rest % c;
                rest /= c;
                d += step;
                *slot = d;
            }
        }
        let clash = (0..k_n).any(|k| {
            (0..i_n).any(|a| (a + 1..i_n).any(|b| dates[a][k] == dates[b][k]))
        });
        if !clash {
            count += 1;
        }
    }
    count
}

#[test]
fn ceil_log2_values() {
    assert_eq!(ceil_log2(1), 0);
    assert_eq!(ceil_log2(2), 1);
    assert_eq!(ceil_log2(4), 2);
    assert_eq!(ceil_log2(5), 3);
    assert_eq!(ceil_log2(7), 3);
    assert_eq!(ceil_log2(8), 3);
}

#[test]
fn instance_validation() {
    let bad = [
        Instance::new(0, 2, 4, &[]),
        Instance::new(2, 0, 4, &[0, 0]),
        Instance::new(2, 2, 3, &[0, 0]),
        Instance::new(2, 2, 1, &[0, 0]),
        Instance::new(2, 2, 4, &[0]),
        Instance::new(2, 2, 4, &[0, -1]),
    ];
    for r in bad {
        assert!(matches!(r.unwrap_err(), Error::Validation(_)));
    }
    let i = Instance::new(2, 2, 4, &[3, 5]).unwrap();
    assert_eq!(i.offsets(), &[0, 2]);
    assert_eq!(i.max_offset(), 2);
    assert_eq!(i.label(), "I2K2C4O2");
    assert_eq!(inst(2, 3).label(), "I2K3C4");
}

#[test]
fn mode_parsing() {
    assert_eq!("full".parse::<Mode>().unwrap(), Mode::Full);
    assert_eq!("reduced".parse::<Mode>().unwrap(), Mode::Reduced);
    assert!(matches!("Full".parse::<Mode>().unwrap_err(), Error::Validation(_)));
    assert_eq!(Mode::Reduced.to_string(), "reduced");
}

#[test]
fn json_round_trip_and_rejections() {
    let i = Instance::new(2, 2, 4, &[0, 2]).unwrap();
    assert_eq!(Instance::from_json(&i.to_json()).unwrap(), i);
    let text = r#"{"machines":2,"jobs":2,"window":4,"offsets":[0,0],"extra":1}"#;
    assert!(matches!(Instance::from_json(text).unwrap_err(), Error::Validation(_)));
    let text = r#"{"machines":2,"jobs":2,"window":6,"offsets":[0,0]}"#;
    assert!(matches!(Instance::from_json(text).unwrap_err(), Error::Validation(_)));
    assert!(Instance::from_json("not json").is_err());
    let missing = Instance::load(std::path::Path::new("/nonexistent/x.json")).unwrap_err();
    assert!(matches!(missing, Error::Validation(_)));
}

#[test]
fn dimensions_widths() {
    let d = inst(2, 2).dimensions();
    assert_eq!((d.date_width(0), d.date_width(1)), (2, 3));
    assert_eq!(d.data_width(), 10);
    assert_eq!(d.offset_width(), 0);
    assert_eq!(d.coin_width(), 2);
    assert_eq!(d.overlap_checks(), 2);
    let d = Dimensions::new(3, 2, 5, 0).unwrap();
    assert_eq!(d.date_width(0), 3);
    assert_eq!(d.coin_width(), 3);
    assert_eq!(d.overlap_checks(), 6);
    assert!(Dimensions::new(1, 1, 1, 0).is_err());
}

#[test]
fn layout_i2k2_flags() {
    let i = inst(2, 2);
    let full = build_layout(&i, Mode::Full).unwrap();
    let reduced = build_layout(&i, Mode::Reduced).unwrap();
    assert_eq!(full.total_wires(), 17);
    assert_eq!(reduced.total_wires(), 15);
    for l in [&full, &reduced] {
        assert_eq!(l.data_width(), 10);
        assert_eq!(l.group_a().len(), 2);
        assert!(l.group_b().is_some());
        assert_eq!(l.strategy(), AncillaStrategy::Flags);
    }
    assert_eq!(full.flag_wires().len(), 4);
    assert_eq!(full.path_checks().len(), 2);
    assert!(reduced.path_checks().is_empty());
    assert_eq!(reduced.coin_wires(), 2);
    assert_eq!(full.coin_wires(), 0);
    assert_eq!(full.data_register(0, 0).wires(), &[0, 1]);
    assert_eq!(full.data_register(0, 1).wires(), &[2, 3, 4]);
    assert_eq!(full.data_register(1, 0).wires(), &[5, 6]);
    assert_eq!(reduced.active_width(), 12);
    assert_eq!(full.active_width(), 10);
}

#[test]
fn layout_counter_totals() {
    let cases = [
        ((2, 3), Mode::Full, 23),
        ((2, 3), Mode::Reduced, 20),
        ((3, 2), Mode::Full, 21),
        ((3, 2), Mode::Reduced, 18),
    ];
    let counter = LayoutOptions {
        ancilla: AncillaStrategy::Counter,
        coins: CoinPolicy::Reuse,
    };
    for ((i, k), mode, want) in cases {
        let l = QubitLayout::plan(&inst(i, k).dimensions(), mode, counter);
        assert_eq!(l.total_wires(), want, "I{i}K{k} {mode}");
        assert!(l.counter().is_some());
        assert_eq!(l.strategy(), AncillaStrategy::Counter);
    }
}

#[test]
fn auto_picks_fewer_wires() {
    for (i, k) in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)] {
        let dims = inst(i, k).dimensions();
        for mode in Mode::ALL {
            let auto = QubitLayout::plan(&dims, mode, LayoutOptions::compact());
            let f = QubitLayout::plan(&dims, mode, LayoutOptions::default());
            let c = QubitLayout::plan(
                &dims,
                mode,
                LayoutOptions { ancilla: AncillaStrategy::Counter, coins: CoinPolicy::Reuse },
            );
            assert_eq!(auto.total_wires(), f.total_wires().min(c.total_wires()));
            assert_ne!(auto.strategy(), AncillaStrategy::Auto);
        }
    }
}

#[test]
fn layout_capacity_error() {
    let big = Instance::uniform(4, 4, 4).unwrap();
    let err = build_layout(&big, Mode::Full).unwrap_err();
    assert!(err.is_capacity());
}

#[test]
fn per_step_coins() {
    let i = inst(2, 3);
    let opts = LayoutOptions { ancilla: AncillaStrategy::Flags, coins: CoinPolicy::PerStep };
    let l = QubitLayout::plan(&i.dimensions(), Mode::Reduced, opts);
    assert_eq!(l.coin_registers().len(), 4);
    assert_eq!(l.coin_wires(), 8);
    assert_ne!(l.coin_for(0, 1), l.coin_for(1, 2));
    let reuse = QubitLayout::plan(&i.dimensions(), Mode::Reduced, LayoutOptions::default());
    assert_eq!(reuse.coin_for(0, 1), reuse.coin_for(1, 2));
}

#[test]
fn decode_and_render() {
    let l = build_layout(&inst(1, 2), Mode::Full).unwrap();
    let index = 0b01_001;
    assert_eq!(l.render_data(index), "01 010");
    assert_eq!(l.decode_basis(index), Schedule { dates: vec![vec![1, 2]] });
    let l2 = build_layout(&inst(2, 2), Mode::Full).unwrap();
    assert_eq!(l2.render_data(0), "00 000 | 00 000");
}

#[test]
fn encode_decode_round_trip() {
    let l = build_layout(&inst(2, 2), Mode::Full).unwrap();
    for index in 0..1usize << 10 {
        let s = l.decode_basis(index);
        assert_eq!(l.encode(&s).unwrap(), index);
    }
    let too_big = Schedule { dates: vec![vec![4, 0], vec![0, 0]] };
    assert!(l.encode(&too_big).is_err());
    assert!(l.encode(&Schedule { dates: vec![vec![0, 0]] }).is_err());
}

#[test]
fn solution_counts_match_naive_oracle() {
    for (i, k, want) in [(1, 1, 4), (1, 2, 16), (2, 1, 12), (2, 2, 164)] {
        let x = inst(i, k);
        assert_eq!(naive_count(&x), want);
        assert_eq!(count_solutions(&x).unwrap(), want);
    }
    let x = inst(2, 3);
    assert_eq!(count_solutions(&x).unwrap(), naive_count(&x));
    let x = inst(3, 2);
    assert_eq!(count_solutions(&x).unwrap(), naive_count(&x));
    let x = Instance::new(2, 2, 4, &[0, 2]).unwrap();
    assert_eq!(count_solutions(&x).unwrap(), naive_count(&x));
    let x = Instance::new(2, 2, 2, &[0, 1]).unwrap();
    assert_eq!(count_solutions(&x).unwrap(), naive_count(&x));
}

#[test]
fn known_counts() {
    assert_eq!(count_solutions(&inst(2, 3)).unwrap(), 2332);
    assert_eq!(count_solutions(&inst(3, 2)).unwrap(), 936);
    let s = space_sizes(&inst(2, 2)).unwrap();
    assert_eq!((s.n_full, s.n_reduced, s.m_solutions), (1024, 256, 164));
    assert!((s.sqrt_ratio(Mode::Reduced) - (256.0f64 / 164.0).sqrt()).abs() < 1e-12);
}

#[test]
fn single_machine_counts_every_path() {
    for k in 1..=4 {
        for c in [2u64, 4, 8] {
            let x = Instance::uniform(1, k, c).unwrap();
            assert_eq!(count_solutions(&x).unwrap(), c.pow(k as u32));
            assert_eq!(feasible_paths(&x, 0).len() as u64, c.pow(k as u32));
        }
    }
}

#[test]
fn offset_symmetry_and_feasibility() {
    let a = Instance::new(2, 2, 4, &[0, 2]).unwrap();
    let b = Instance::new(2, 2, 4, &[2, 0]).unwrap();
    assert_eq!(count_solutions(&a).unwrap(), count_solutions(&b).unwrap());
    assert!(a.is_feasible_path(1, &[2, 5]));
    assert!(!a.is_feasible_path(1, &[1, 2]));
    assert!(!a.is_feasible_path(1, &[6, 6]));
    assert!(!a.is_feasible_path(0, &[2, 6]));
    assert!(!a.is_feasible_path(0, &[2, 1]));
    let clash = Schedule { dates: vec![vec![2, 3], vec![2, 4]] };
    assert!(!a.satisfies_resources(&clash));
    assert!(!a.is_solution(&clash));
    let ok = Schedule { dates: vec![vec![1, 3], vec![2, 4]] };
    assert!(a.is_solution(&ok));
}

#[test]
fn budget_and_policies() {
    let x = inst(2, 3);
    assert!(count_solutions_with(&x, 100, ExecPolicy::Sequential).unwrap_err().is_capacity());
    let seq = count_solutions_with(&x, 1 << 20, ExecPolicy::Sequential).unwrap();
    let par = count_solutions_with(&x, 1 << 20, ExecPolicy::Parallel).unwrap();
    assert_eq!(seq, par);
    assert_eq!(full_space_size(&x).unwrap(), 1 << 18);
    assert_eq!(reduced_space_size(&x).unwrap(), 4096);
}

#[test]
fn marked_mask_spot_check() {
    let x = inst(2, 3);
    let l = QubitLayout::plan(&x.dimensions(), Mode::Full, LayoutOptions::default());
    let mask = marked_mask(&x, &l).unwrap();
    assert_eq!(mask.len(), 2332);
    let paths = path_mask(&x, &l).unwrap();
    assert_eq!(paths.len(), 4096);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let idx = rng.gen_range(0..1usize << l.data_width());
        let s = l.decode_basis(idx);
        assert_eq!(mask.contains(idx), x.is_solution(&s), "index {idx}");
        let feasible = (0..2).all(|m| x.is_feasible_path(m, &s.dates[m]));
        assert_eq!(paths.contains(idx), feasible);
    }
}

#[test]
fn solutions_are_distinct_under_encoding() {
    let x = inst(2, 2);
    let l = build_layout(&x, Mode::Full).unwrap();
    let mut seen = HashSet::new();
    qsched::problem::for_each_solution(&x, 1 << 20, &mut |s| {
        assert!(x.is_solution(s));
        assert!(seen.insert(l.encode(s).unwrap()));
    })
    .unwrap();
    assert_eq!(seen.len(), 164);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn count_bounded_by_reduced_space(i in 1usize..4, k in 1usize..3, o in 0i64..3) {
        let mut offsets = vec![0; i];
        offsets[i - 1] = o;
        let x = Instance::new(i, k, 4, &offsets).unwrap();
        let m = count_solutions(&x).unwrap();
        prop_assert!(m <= reduced_space_size(&x).unwrap());
        prop_assert_eq!(m, naive_count(&x));
    }

    #[test]
    fn layout_prefix_invariants(i in 1usize..4, k in 1usize..4, full in any::<bool>(), counter in any::<bool>()) {
        let mode = if full { Mode::Full } else { Mode::Reduced };
        let ancilla = if counter { AncillaStrategy::Counter } else { AncillaStrategy::Flags };
        let l = QubitLayout::plan(
            &inst(i, k).dimensions(),
            mode,
            LayoutOptions { ancilla, coins: CoinPolicy::Reuse },
        );
        prop_assert!(l.data_width() <= l.active_width());
        prop_assert!(l.active_width() <= l.total_wires());
        let mut used = HashSet::new();
        for m in 0..i {
            for j in 0..k {
                for &w in l.data_register(m, j).wires() {
                    prop_assert!(w < l.data_width());
                    prop_assert!(used.insert(w));
                }
            }
        }
        prop_assert_eq!(used.len(), l.data_width());
        prop_assert!(l.ancilla_wires().iter().all(|&w| w >= l.data_width() && w < l.total_wires()));
    }
}
