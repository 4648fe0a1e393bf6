use geo::{Area, BooleanOps};

use super::{MetricError, ScoreConfig, SunSample};
use crate::catalog::Catalog;
use crate::geometry::{disc_polygon, Polygon, Rect, Vec2, CIRCLE_SEGMENTS};
use crate::scene::{ElementInstance, LotSpec, Scene};

/// Horizontal displacement of a shadow cast from `height` meters, pointing
/// away from the sun. Zero when the sun is at the zenith.
pub fn shadow_offset(height: f64, sun: &SunSample) -> Vec2 {
    if sun.altitude_deg >= 90.0 {
        return Vec2::ZERO;
    }
    let length = height / sun.altitude_deg.to_radians().tan();
    Vec2::from_bearing(sun.azimuth_deg + 180.0) * length
}

/// Canopy disc of a shade-casting element, displaced along the shadow
/// direction and clipped to the lot. The result is empty when the shadow
/// falls entirely off the lot.
pub fn shadow_polygon(
    instance: &ElementInstance,
    catalog: &Catalog,
    sun: &SunSample,
    lot: &LotSpec,
) -> Result<Polygon, MetricError> {
    let entry = catalog
        .entry(&instance.entry_id)
        .ok_or_else(|| MetricError::UnknownEntry(instance.entry_id.clone()))?;
    if !(entry.is_shade_caster() && entry.canopy_radius > 0.0 && entry.height > 0.0) {
        return Err(MetricError::Affordance(instance.entry_id.clone()));
    }
    let scale = instance.pose.scale();
    let center = instance.pose.position() + shadow_offset(entry.height * scale, sun);
    Ok(
        disc_polygon(center, entry.canopy_radius * scale, CIRCLE_SEGMENTS)
            .clip_to_rect(&lot.rect()),
    )
}

/// Clipped shadow polygons of every shade-caster for one sun sample.
pub fn scene_shadows(
    scene: &Scene,
    catalog: &Catalog,
    sun: &SunSample,
) -> Result<Vec<Polygon>, MetricError> {
    let mut out = Vec::new();
    for inst in &scene.instances {
        let entry = catalog
            .entry(&inst.entry_id)
            .ok_or_else(|| MetricError::UnknownEntry(inst.entry_id.clone()))?;
        if entry.is_shade_caster() {
            let p = shadow_polygon(inst, catalog, sun, &scene.lot)?;
            if !p.is_empty() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Area of the union of polygons that already lie inside `bounds`.
pub(crate) fn union_area(polygons: &[Polygon], bounds: &Rect) -> f64 {
    match polygons.len() {
        0 => 0.0,
        1 => polygons[0].area(),
        _ => {
            let geo_polys: Vec<geo::Polygon<f64>> = polygons.iter().map(Polygon::to_geo).collect();
            let union = geo::unary_union(&geo_polys);
            // Snap away any sliver the overlay may produce along the lot edge.
            let clipped = union.intersection(&bounds_polygon(bounds));
            clipped.unsigned_area()
        }
    }
}

fn bounds_polygon(bounds: &Rect) -> geo::Polygon<f64> {
    bounds.to_polygon().to_geo()
}

/// Weighted fraction of the lot covered by shadow, one value per sample
/// followed by the weighted total.
pub(crate) fn shaded_fractions(
    scene: &Scene,
    catalog: &Catalog,
    config: &ScoreConfig,
) -> Result<(Vec<f64>, f64), MetricError> {
    let lot = scene.lot.rect();
    let mut per_sample = Vec::with_capacity(config.sun_samples.len());
    let mut total = 0.0;
    for sun in &config.sun_samples {
        let shadows = scene_shadows(scene, catalog, sun)?;
        let f = (union_area(&shadows, &lot) / lot.area()).clamp(0.0, 1.0);
        per_sample.push(f);
        total += sun.weight * f;
    }
    Ok((per_sample, total.clamp(0.0, 1.0)))
}

/// `sum(weight * area(union(shadows) within lot)) / lot area`.
pub fn shaded_fraction(
    scene: &Scene,
    catalog: &Catalog,
    config: &ScoreConfig,
) -> Result<f64, MetricError> {
    shaded_fractions(scene, catalog, config).map(|(_, total)| total)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SeatingStats {
    pub seats: u32,
    /// Share of seat capacity on elements whose centroid is in shadow for at
    /// least half the sample weight.
    pub shaded_seat_fraction: f64,
}

pub fn seating_stats(
    scene: &Scene,
    catalog: &Catalog,
    config: &ScoreConfig,
) -> Result<SeatingStats, MetricError> {
    let shadows_per_sample = config
        .sun_samples
        .iter()
        .map(|sun| scene_shadows(scene, catalog, sun))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seats = 0u32;
    let mut shaded_seats = 0u32;
    for inst in &scene.instances {
        let entry = catalog
            .entry(&inst.entry_id)
            .ok_or_else(|| MetricError::UnknownEntry(inst.entry_id.clone()))?;
        if !entry.is_seating() {
            continue;
        }
        seats += entry.seat_capacity;
        let centroid = inst.pose.position();
        let shaded_weight: f64 = config
            .sun_samples
            .iter()
            .zip(&shadows_per_sample)
            .filter(|(_, shadows)| shadows.iter().any(|p| p.contains(centroid)))
            .map(|(sun, _)| sun.weight)
            .sum();
        if shaded_weight >= 0.5 - 1e-12 {
            shaded_seats += entry.seat_capacity;
        }
    }
    let shaded_seat_fraction = if seats == 0 {
        0.0
    } else {
        f64::from(shaded_seats) / f64::from(seats)
    };
    Ok(SeatingStats {
        seats,
        shaded_seat_fraction,
    })
}
