use super::shadow::union_area;
use super::{MetricError, ScoreConfig};
use crate::catalog::{tags, Catalog, CatalogEntry};
use crate::geometry::{disc_polygon, Polygon, Vec2, CIRCLE_SEGMENTS};
use crate::scene::{entry_footprint, ElementInstance, Scene};

pub(crate) fn resolved<'a>(
    scene: &'a Scene,
    catalog: &'a Catalog,
) -> Result<Vec<(&'a ElementInstance, &'a CatalogEntry)>, MetricError> {
    scene
        .instances
        .iter()
        .map(|i| {
            catalog
                .entry(&i.entry_id)
                .map(|e| (i, e))
                .ok_or_else(|| MetricError::UnknownEntry(i.entry_id.clone()))
        })
        .collect()
}

/// Fraction of the lot inside at least one light pool.
pub fn lighting_coverage(scene: &Scene, catalog: &Catalog) -> Result<f64, MetricError> {
    let lot = scene.lot.rect();
    let pools: Vec<Polygon> = resolved(scene, catalog)?
        .into_iter()
        .filter(|(_, e)| e.light_radius > 0.0)
        .map(|(i, e)| {
            disc_polygon(
                i.pose.position(),
                e.light_radius * i.pose.scale(),
                CIRCLE_SEGMENTS,
            )
            .clip_to_rect(&lot)
        })
        .filter(|p| !p.is_empty())
        .collect();
    Ok((union_area(&pools, &lot) / lot.area()).clamp(0.0, 1.0))
}

/// Unordered pairs of seating elements whose centres are within the pair
/// distance, plus a fixed bonus per gathering-tagged element.
pub fn sociability_pairs(scene: &Scene, catalog: &Catalog) -> Result<u32, MetricError> {
    sociability_pairs_with(scene, catalog, &ScoreConfig::default())
}

pub(crate) fn sociability_pairs_with(
    scene: &Scene,
    catalog: &Catalog,
    config: &ScoreConfig,
) -> Result<u32, MetricError> {
    let items = resolved(scene, catalog)?;
    let seats: Vec<Vec2> = items
        .iter()
        .filter(|(_, e)| e.is_seating())
        .map(|(i, _)| i.pose.position())
        .collect();
    let mut pairs = 0u32;
    for (k, a) in seats.iter().enumerate() {
        for b in &seats[k + 1..] {
            if a.distance(*b) <= config.pair_distance + 1e-9 {
                pairs += 1;
            }
        }
    }
    let gathering = items
        .iter()
        .filter(|(_, e)| e.has_tag(tags::GATHERING))
        .count() as u32;
    Ok(pairs + gathering * config.gathering_pairs)
}

/// Share of play elements with a seat within the supervision distance.
pub(crate) fn supervised_play_fraction(
    items: &[(&ElementInstance, &CatalogEntry)],
    config: &ScoreConfig,
) -> f64 {
    let seats: Vec<Vec2> = items
        .iter()
        .filter(|(_, e)| e.is_seating())
        .map(|(i, _)| i.pose.position())
        .collect();
    let play: Vec<Vec2> = items
        .iter()
        .filter(|(_, e)| e.is_play())
        .map(|(i, _)| i.pose.position())
        .collect();
    if play.is_empty() {
        return 0.0;
    }
    let watched = play
        .iter()
        .filter(|p| {
            seats
                .iter()
                .any(|s| s.distance(**p) <= config.supervision_distance)
        })
        .count();
    watched as f64 / play.len() as f64
}

/// Open ground (grid cells free of any footprint) within the stage radius of
/// a stage-like element, in square meters.
pub(crate) fn open_area_near_stage(
    scene: &Scene,
    items: &[(&ElementInstance, &CatalogEntry)],
    config: &ScoreConfig,
) -> f64 {
    let stages: Vec<Vec2> = items
        .iter()
        .filter(|(_, e)| e.has_tag(tags::STAGE_LIKE))
        .map(|(i, _)| i.pose.position())
        .collect();
    if stages.is_empty() {
        return 0.0;
    }
    let footprints: Vec<Polygon> = items
        .iter()
        .filter(|(_, e)| e.height > 0.0)
        .map(|(i, e)| entry_footprint(e.footprint_w, e.footprint_d, &i.pose))
        .collect();
    let step = config.open_grid;
    let nx = (scene.lot.width() / step).floor() as usize;
    let ny = (scene.lot.depth() / step).floor() as usize;
    let mut cells = 0usize;
    for ix in 0..nx {
        for iy in 0..ny {
            let p = Vec2::new((ix as f64 + 0.5) * step, (iy as f64 + 0.5) * step);
            if !stages.iter().any(|s| s.distance(p) <= config.stage_radius) {
                continue;
            }
            if footprints.iter().any(|f| f.contains(p)) {
                continue;
            }
            cells += 1;
        }
    }
    cells as f64 * step * step
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::scene::{add_element, create_scene, LotSpec, Pose};

    fn place(items: &[(&str, f64, f64)]) -> Scene {
        let c = builtin_catalog();
        let mut s = create_scene(LotSpec::default(), None);
        for &(e, x, y) in items {
            s = add_element(&s, &e.into(), Pose::at(x, y).unwrap(), &c)
                .unwrap()
                .0;
        }
        s
    }

    #[test]
    fn no_lamps_no_light() {
        let s = place(&[("bench.basic", 5.0, 5.0)]);
        assert_eq!(lighting_coverage(&s, &builtin_catalog()).unwrap(), 0.0);
    }

    #[test]
    fn centred_lamp_covers_disc_area() {
        let s = place(&[("lamp.street", 20.0, 15.0)]);
        let f = lighting_coverage(&s, &builtin_catalog()).unwrap();
        let expected = std::f64::consts::PI * 64.0 / 1200.0;
        assert!((f - expected).abs() < 1e-9, "{f}");
    }

    #[test]
    fn pair_counting() {
        let c = builtin_catalog();
        assert_eq!(
            sociability_pairs(&place(&[("bench.basic", 5.0, 5.0)]), &c).unwrap(),
            0
        );
        assert_eq!(
            sociability_pairs(
                &place(&[("bench.basic", 5.0, 5.0), ("bench.basic", 7.0, 5.0)]),
                &c
            )
            .unwrap(),
            1
        );
        let tri = place(&[
            ("bench.basic", 5.0, 5.0),
            ("bench.basic", 7.0, 5.0),
            ("bench.basic", 6.0, 6.5),
        ]);
        assert_eq!(sociability_pairs(&tri, &c).unwrap(), 3);
        let far = place(&[("bench.basic", 5.0, 5.0), ("bench.basic", 9.0, 5.0)]);
        assert_eq!(sociability_pairs(&far, &c).unwrap(), 0);
        // picnic tables are seating and gathering
        let picnic = place(&[("picnic.table", 20.0, 15.0)]);
        assert_eq!(sociability_pairs(&picnic, &c).unwrap(), 2);
    }

    #[test]
    fn supervision() {
        let c = builtin_catalog();
        let cfg = ScoreConfig::default();
        let s = place(&[
            ("playground.gym", 10.0, 10.0),
            ("swings", 35.0, 25.0),
            ("bench.basic", 12.0, 12.0),
        ]);
        let items = resolved(&s, &c).unwrap();
        assert_eq!(supervised_play_fraction(&items, &cfg), 0.5);
    }

    #[test]
    fn open_area_around_stage() {
        let c = builtin_catalog();
        let cfg = ScoreConfig::default();
        let s = place(&[("gazebo", 20.0, 15.0)]);
        let items = resolved(&s, &c).unwrap();
        let open = open_area_near_stage(&s, &items, &cfg);
        // disc of radius 10 is ~314 m^2, minus the 16 m^2 gazebo footprint
        assert!(open > 280.0 && open < 310.0, "{open}");
        let none = place(&[("bench.basic", 20.0, 15.0)]);
        let items = resolved(&none, &c).unwrap();
        assert_eq!(open_area_near_stage(&none, &items, &cfg), 0.0);
    }
}
