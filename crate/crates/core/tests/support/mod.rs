//! Shared helpers for integration tests: random scenes and a raster oracle
//! that measures coverage by sampling true circles on a fine grid.
#![allow(dead_code)]

use lotforge::catalog::{Catalog, EntryId};
use lotforge::geometry::Vec2;
use lotforge::metrics::{ScoreConfig, SunSample};
use lotforge::scene::{add_element, create_scene, LotSpec, Pose, Scene};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORACLE_CELL: f64 = 0.1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_pose(rng: &mut impl Rng, lot: &LotSpec) -> Pose {
    Pose::new(
        Vec2::new(
            rng.random_range(0.0..lot.width()),
            rng.random_range(0.0..lot.depth()),
        ),
        rng.random_range(0.0..360.0),
        rng.random_range(0.5..=2.0),
    )
    .expect("pose in range")
}

/// A scene of `0..=max_elements` random catalog entries placed inside `lot`.
pub fn random_scene(
    rng: &mut impl Rng,
    catalog: &Catalog,
    lot: LotSpec,
    max_elements: usize,
) -> Scene {
    let ids: Vec<EntryId> = catalog
        .entries()
        .iter()
        .map(|e| e.entry_id.clone())
        .collect();
    let n = rng.random_range(0..=max_elements);
    let mut scene = create_scene(lot, None);
    for _ in 0..n {
        let id = ids.choose(rng).expect("catalog not empty");
        let pose = random_pose(rng, &scene.lot);
        scene = add_element(&scene, id, pose, catalog)
            .expect("centre inside lot")
            .0;
    }
    scene
}

/// Fraction of lot cells whose centre lies inside any of `discs`.
pub fn raster_fraction(lot: &LotSpec, discs: &[(Vec2, f64)], cell: f64) -> f64 {
    let nx = (lot.width() / cell).round() as usize;
    let ny = (lot.depth() / cell).round() as usize;
    let mut hit = vec![false; nx * ny];
    for (c, r) in discs {
        let x0 = (((c.x - r) / cell).floor().max(0.0)) as usize;
        let y0 = (((c.y - r) / cell).floor().max(0.0)) as usize;
        let x1 = (((c.x + r) / cell).ceil().max(0.0) as usize).min(nx);
        let y1 = (((c.y + r) / cell).ceil().max(0.0) as usize).min(ny);
        for ix in x0..x1 {
            let px = (ix as f64 + 0.5) * cell;
            for iy in y0..y1 {
                let py = (iy as f64 + 0.5) * cell;
                if (px - c.x).powi(2) + (py - c.y).powi(2) <= r * r {
                    hit[iy * nx + ix] = true;
                }
            }
        }
    }
    hit.iter().filter(|h| **h).count() as f64 / hit.len() as f64
}

/// Shadow discs computed from first principles: the canopy circle moved
/// `h / tan(altitude)` away from the sun.
pub fn oracle_shadow_discs(scene: &Scene, catalog: &Catalog, sun: &SunSample) -> Vec<(Vec2, f64)> {
    scene
        .instances
        .iter()
        .filter_map(|i| {
            let e = catalog.entry(&i.entry_id)?;
            if !e.is_shade_caster() {
                return None;
            }
            let s = i.pose.scale();
            let len = if sun.altitude_deg >= 90.0 {
                0.0
            } else {
                e.height * s / sun.altitude_deg.to_radians().tan()
            };
            let bearing = (sun.azimuth_deg + 180.0).to_radians();
            let p = i.pose.position();
            Some((
                Vec2::new(p.x + len * bearing.sin(), p.y + len * bearing.cos()),
                e.canopy_radius * s,
            ))
        })
        .collect()
}

pub fn oracle_shaded_fraction(scene: &Scene, catalog: &Catalog, config: &ScoreConfig) -> f64 {
    config
        .sun_samples
        .iter()
        .map(|sun| {
            sun.weight
                * raster_fraction(
                    &scene.lot,
                    &oracle_shadow_discs(scene, catalog, sun),
                    ORACLE_CELL,
                )
        })
        .sum()
}

pub fn oracle_lighting(scene: &Scene, catalog: &Catalog) -> f64 {
    let discs: Vec<(Vec2, f64)> = scene
        .instances
        .iter()
        .filter_map(|i| {
            let e = catalog.entry(&i.entry_id)?;
            (e.light_radius > 0.0).then(|| (i.pose.position(), e.light_radius * i.pose.scale()))
        })
        .collect();
    raster_fraction(&scene.lot, &discs, ORACLE_CELL)
}

/// `scene` turned clockwise by `quarter_turns * 90` degrees about the centre
/// of its square lot. Element headings (counter-clockwise) turn back by the
/// same angle.
pub fn rotate_square_scene(scene: &Scene, quarter_turns: u32) -> Scene {
    let side = scene.lot.width();
    assert_eq!(side, scene.lot.depth(), "square lots only");
    let mut out = scene.clone();
    for inst in &mut out.instances {
        let mut p = inst.pose.position();
        for _ in 0..quarter_turns % 4 {
            // clockwise about the centre: (x, y) -> (y, side - x)
            p = Vec2::new(p.y, side - p.x);
        }
        inst.pose = Pose::new(
            p,
            inst.pose.rotation_deg() - 90.0 * f64::from(quarter_turns),
            inst.pose.scale(),
        )
        .expect("rotated pose");
    }
    out
}

pub fn config_rotated(config: &ScoreConfig, quarter_turns: u32) -> ScoreConfig {
    let mut c = config.clone();
    for s in &mut c.sun_samples {
        *s = SunSample::new(
            s.altitude_deg,
            s.azimuth_deg + 90.0 * f64::from(quarter_turns),
            s.weight,
        )
        .expect("rotated sun");
    }
    c
}
