#![no_main]

use densest_core::graph::{similarity_from_points, PointCloud};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(cloud) = PointCloud::from_csv(data) else { return };
    assert!(cloud.len() > 0 && cloud.dim() > 0);
    if cloud.len() <= 64 {
        let _ = similarity_from_points(&cloud, true);
    }
});
