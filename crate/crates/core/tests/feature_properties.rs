use gdpkit::features::{
    block_counts, block_grid, block_histogram, extract_codes, feature_vector, DescriptorKind,
};
use gdpkit::image::GrayImage;
use proptest::prelude::*;

fn image(max_dim: usize) -> impl Strategy<Value = GrayImage> {
    (3..=max_dim, 3..=max_dim).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), w * h)
            .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
    })
}

fn kind() -> impl Strategy<Value = DescriptorKind> {
    prop::sample::select(DescriptorKind::ALL.to_vec())
}

proptest! {
    #[test]
    fn length_and_block_sums(img in image(24), kind in kind(), n in 1usize..8) {
        let n = n.min(img.width()).min(img.height());
        let fv = feature_vector(&img, kind, n).unwrap();
        prop_assert_eq!(fv.len(), n * n * kind.bins());
        for r in 0..n {
            for c in 0..n {
                let sum: f64 = fv.block(r, c).iter().sum();
                prop_assert!(sum.abs() < 1e-9 || (sum - 1.0).abs() < 1e-9, "block sum {}", sum);
                prop_assert!(fv.block(r, c).iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }
    }

    #[test]
    fn brightness_offset_leaves_gdp_features_unchanged(img in image(20), offset in -255i32..=255, n in 1usize..5) {
        let lo = i32::from(*img.pixels().iter().min().unwrap());
        let hi = i32::from(*img.pixels().iter().max().unwrap());
        let offset = offset.clamp(-lo, 255 - hi);
        let shifted = img.map(|p| (i32::from(p) + offset) as u8);
        let n = n.min(img.width()).min(img.height());
        prop_assert_eq!(
            feature_vector(&img, DescriptorKind::Gdp, n).unwrap(),
            feature_vector(&shifted, DescriptorKind::Gdp, n).unwrap()
        );
    }

    #[test]
    fn block_order_does_not_matter(img in image(20), kind in kind(), n in 1usize..6, order_seed in any::<u64>()) {
        let n = n.min(img.width()).min(img.height());
        let grid = block_grid(img.width(), img.height(), n).unwrap();
        let codes = extract_codes(&img, kind).unwrap();
        let mut order: Vec<usize> = (0..n * n).collect();
        // Fisher-Yates with a tiny LCG, independent of the crate's RNG use
        let mut state = order_seed | 1;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let bins = kind.bins();
        let mut assembled = vec![0u32; n * n * bins];
        for &b in &order {
            let hist = block_histogram(&codes, &grid, b / n, b % n);
            assembled[b * bins..(b + 1) * bins].copy_from_slice(&hist);
        }
        prop_assert_eq!(assembled, block_counts(&codes, &grid));
    }
}

#[test]
fn interior_codes_are_assigned_to_their_own_blocks() {
    // a bright square in the lower-right block only changes that block
    let base = GrayImage::filled(12, 12, 50).unwrap();
    let marked = GrayImage::from_fn(12, 12, |x, y| {
        if x >= 8 && y >= 8 && (x + y) % 2 == 0 {
            200
        } else {
            50
        }
    })
    .unwrap();
    let a = feature_vector(&base, DescriptorKind::Gdp, 3).unwrap();
    let b = feature_vector(&marked, DescriptorKind::Gdp, 3).unwrap();
    for r in 0..3 {
        for c in 0..3 {
            if (r, c) != (2, 2) && (r, c) != (1, 2) && (r, c) != (2, 1) && (r, c) != (1, 1) {
                assert_eq!(a.block(r, c), b.block(r, c), "block ({r},{c})");
            }
        }
    }
    assert_ne!(a.block(2, 2), b.block(2, 2));
}
