//! Property tests over randomized inputs.

use chrono::{Duration, NaiveDate};
use ndarray::Array2;
use proptest::prelude::*;

use invar_core::herding::{binomial_herding_test, buy_ratio, effective_number, HerdingLabel};
use invar_core::market::{
    parse_trade_tape, read_panel_csv, write_panel_csv, write_trade_tape, FirmId, GridMeta,
    Horizon, IntervalGrid, InventoryPanel, Session, TradeRecord,
};
use invar_core::spectra::{correlation_matrix, eigendecompose, rmt_bounds};

fn grid_for(t: usize) -> IntervalGrid {
    let dates: Vec<NaiveDate> = (0..t as i64)
        .map(|i| NaiveDate::from_ymd_opt(2001, 1, 1).unwrap() + Duration::days(i))
        .collect();
    IntervalGrid::build(dates, Session::default(), Horizon::Days(1)).unwrap()
}

fn cell_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![
        3 => prop::num::f64::NORMAL.prop_map(|v| v % 1.0e6),
        1 => Just(0.0),
    ]
}

proptest! {
    // Panels survive CSV serialization bit for bit, including the
    // distinction between inactive cells and active zeros.
    #[test]
    fn panel_csv_roundtrip(rows in 1usize..12, cols in 1usize..6,
                           seed_cells in prop::collection::vec(cell_strategy(), 1..72)) {
        let grid = grid_for(rows);
        let firms: Vec<FirmId> = (0..cols).map(|i| FirmId::new(format!("F{i}"))).collect();
        let values = Array2::from_shape_fn((rows, cols), |(t, i)| {
            seed_cells[(t * cols + i) % seed_cells.len()]
        });
        let activity = values.mapv(|v| v != 0.0);
        let panel = InventoryPanel::new(grid, firms, values, activity).unwrap();

        let mut csv = Vec::new();
        write_panel_csv(&mut csv, &panel).unwrap();
        let meta = GridMeta::from_grid(panel.grid());
        let back = read_panel_csv(csv.as_slice(), &meta).unwrap();
        prop_assert_eq!(back.firms(), panel.firms());
        prop_assert_eq!(back.activity(), panel.activity());
        for (a, b) in back.values().iter().zip(panel.values().iter()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    // Trade tapes round-trip through write/parse with exact floats.
    #[test]
    fn tape_roundtrip(prices in prop::collection::vec(1.0e-3..1.0e4f64, 1..40),
                      volumes in prop::collection::vec(1.0e-3..1.0e6f64, 1..40)) {
        let base = NaiveDate::from_ymd_opt(2001, 3, 1).unwrap().and_hms_opt(10, 0, 0).unwrap();
        let trades: Vec<TradeRecord> = prices
            .iter()
            .zip(&volumes)
            .enumerate()
            .map(|(k, (p, v))| TradeRecord {
                timestamp: base + Duration::seconds(k as i64),
                stock: "TEF".into(),
                buyer: FirmId::new(format!("B{}", k % 5)),
                seller: FirmId::new(format!("S{}", k % 3)),
                price: *p,
                volume: *v,
            })
            .collect();
        let mut tape = Vec::new();
        write_trade_tape(&mut tape, &trades).unwrap();
        let parsed = parse_trade_tape(tape.as_slice()).unwrap();
        prop_assert_eq!(parsed.len(), trades.len());
        for (a, b) in parsed.iter().zip(&trades) {
            prop_assert_eq!(a.price.to_bits(), b.price.to_bits());
            prop_assert_eq!(a.volume.to_bits(), b.volume.to_bits());
            prop_assert_eq!(&a.buyer, &b.buyer);
        }
    }

    // The bulk support edges are nonnegative, ordered, and collapse toward
    // 1 as T grows.
    #[test]
    fn rmt_bounds_well_formed(n in 1usize..200, extra in 1usize..5000) {
        let t = n + extra;
        let (lo, hi) = rmt_bounds(n, t).unwrap();
        prop_assert!(lo >= 0.0);
        prop_assert!(hi > lo);
        let q_inv = n as f64 / t as f64;
        prop_assert!((hi - (1.0 + q_inv + 2.0 * q_inv.sqrt())).abs() < 1e-12);
        prop_assert!((lo - (1.0 + q_inv - 2.0 * q_inv.sqrt())).abs() < 1e-12);
    }

    // Correlation matrices of random panels are symmetric with unit
    // diagonal, entries in [-1, 1], and a spectrum that preserves trace.
    #[test]
    fn correlation_matrix_well_formed(seed in 0u64..5000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let t = rng.gen_range(8..40);
        let n = rng.gen_range(2..8);
        let grid = grid_for(t);
        let values = Array2::from_shape_fn((t, n), |_| rng.gen::<f64>() - 0.5);
        let activity = Array2::from_elem((t, n), true);
        let firms: Vec<FirmId> = (0..n).map(|i| FirmId::new(format!("F{i}"))).collect();
        let panel = InventoryPanel::new(grid, firms, values, activity).unwrap();
        let c = correlation_matrix(&panel).unwrap();
        for i in 0..n {
            prop_assert_eq!(c.entries()[(i, i)], 1.0);
            for j in 0..n {
                let v = c.entries()[(i, j)];
                prop_assert!((-1.0..=1.0).contains(&v));
                prop_assert_eq!(v.to_bits(), c.entries()[(j, i)].to_bits());
            }
        }
        let spectrum = eigendecompose(&c).unwrap();
        let trace: f64 = spectrum.eigenvalues.iter().sum();
        prop_assert!((trace - n as f64).abs() <= 1e-8 * n as f64);
        prop_assert!(*spectrum.eigenvalues.last().unwrap() >= -1e-8);
    }

    // Sign antisymmetry of the herding measures on arbitrary value lists.
    #[test]
    fn herding_measures_antisymmetric(values in prop::collection::vec(-1.0e6..1.0e6f64, 1..50)) {
        let negated: Vec<f64> = values.iter().map(|v| -v).collect();
        let n_buy = values.iter().filter(|v| **v > 0.0).count();
        let n_sell = values.iter().filter(|v| **v < 0.0).count();
        if n_buy + n_sell == 0 {
            prop_assert!(buy_ratio(&values).is_none());
            return Ok(());
        }
        if let (Some(b), Some(bn)) = (buy_ratio(&values), buy_ratio(&negated)) {
            prop_assert!((b + bn - 1.0).abs() < 1e-9);
        }
        if let (Some(ne), Some(nen)) = (effective_number(&values), effective_number(&negated)) {
            prop_assert!(((ne - nen) / ne).abs() < 1e-12);
            prop_assert!(ne >= 1.0 - 1e-12);
            prop_assert!(ne <= values.len() as f64 + 1e-9);
        }
        let label = binomial_herding_test(n_buy, n_sell, 0.5, 0.05).unwrap();
        let label_neg = binomial_herding_test(n_sell, n_buy, 0.5, 0.05).unwrap();
        let expected = match label {
            HerdingLabel::BuyHerd => HerdingLabel::SellHerd,
            HerdingLabel::SellHerd => HerdingLabel::BuyHerd,
            other => other,
        };
        prop_assert_eq!(label_neg, expected);
    }
}
