//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use lotforge::catalog::{builtin_catalog, ScenarioGroup, ScenarioId};
use lotforge::geometry::Vec2;
use lotforge::metric::Metric;
use lotforge::metrics::{lighting_coverage, score_scene, shaded_fraction, ScoreConfig};
use lotforge::scene::{
    add_element, create_scene, decode_scene, encode_scene, match_replication, remove_element,
    LotSpec, MatchTolerances, Pose,
};
use lotforge::service::{router, AppState, Store};
use lotforge::survey::{
    agreement_report, analyze, filter_raters, ingest_ratings, reference_means, RatingDataset,
    RatingRecord, DEFAULT_EPS,
};
use rand::Rng;
use tower::ServiceExt;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, failures: Vec<String>, summary: String) -> Outcome {
    let pass = failures.is_empty();
    let detail = if pass {
        summary
    } else {
        format!("{summary}; {}", failures.join("; "))
    };
    Outcome { name, pass, detail }
}

fn reference_means_regression() -> Outcome {
    let mut fails = Vec::new();
    let target = reference_means::fixture();
    let synthetic =
        reference_means::synthesize_ratings(&target, &reference_means::SynthOptions::default())
            .unwrap();
    let mut csv = Vec::new();
    synthetic.write_csv(&mut csv).unwrap();

    let started = Instant::now();
    let dataset = ingest_ratings(csv.as_slice()).unwrap();
    let report = analyze(&dataset, &builtin_catalog(), None).unwrap();
    let elapsed = started.elapsed();

    let mut worst = 0.0f64;
    for (id, want) in &target.scenarios {
        let Some(got) = report.means.get(id) else {
            fails.push(format!("{id} missing"));
            continue;
        };
        for m in Metric::ALL {
            let d = (got.means.get(m) - want.means.get(m)).abs();
            worst = worst.max(d);
            if d > 0.005 {
                fails.push(format!(
                    "{id} {m}: {:.4} vs {:.2}",
                    got.means.get(m),
                    want.means.get(m)
                ));
            }
        }
    }
    let (max, min) = report.means.extremes().unwrap();
    if !(max.0.as_str() == "C2" && max.1 == Metric::Play && (max.2 - 5.82).abs() <= 0.005) {
        fails.push(format!("max is {} {} {:.4}", max.0, max.1, max.2));
    }
    if !(min.0.as_str() == "A2" && min.1 == Metric::Play && (min.2 - 4.18).abs() <= 0.005) {
        fails.push(format!("min is {} {} {:.4}", min.0, min.1, min.2));
    }
    let soc_min = report
        .means
        .scenarios
        .values()
        .map(|s| s.means.get(Metric::Sociability))
        .fold(f64::INFINITY, f64::min);
    if (soc_min - 5.02).abs() > 0.005 || soc_min < 5.0 {
        fails.push(format!("sociability min {soc_min:.4}"));
    }
    if elapsed >= Duration::from_secs(1) {
        fails.push(format!("took {elapsed:?}"));
    }
    outcome(
        "reference means regression",
        fails,
        format!(
            "{} rows, worst cell error {worst:.4}, max {} {} {:.2}, min {} {} {:.2}, sociability min {soc_min:.2}, {:?}",
            dataset.len(),
            max.0,
            max.1,
            max.2,
            min.0,
            min.1,
            min.2,
            elapsed
        ),
    )
}

fn agreement_reproduction() -> Outcome {
    let mut fails = Vec::new();
    let report = agreement_report(
        &reference_means::fixture(),
        &builtin_catalog().designated_metrics(),
        DEFAULT_EPS,
    )
    .unwrap();
    let dis: Vec<&str> = report.disagreements().iter().map(|s| s.as_str()).collect();
    if report.agree_count != 9 || report.total != 12 {
        fails.push(format!("agree {}/{}", report.agree_count, report.total));
    }
    if dis != ["A2", "C1", "C4"] {
        fails.push(format!("disagreements {dis:?}"));
    }
    for r in report.rows.iter().filter(|r| !r.agrees) {
        if !r.designated_in_top3 {
            fails.push(format!(
                "{} designated not in top3 {:?}",
                r.scenario_id, r.top3
            ));
        }
    }
    let ties: BTreeMap<&str, usize> = report
        .rows
        .iter()
        .filter(|r| r.argmax.len() > 1)
        .map(|r| (r.scenario_id.as_str(), r.argmax.len()))
        .collect();
    if ties != BTreeMap::from([("A4", 2), ("B4", 2)]) {
        fails.push(format!("tie rows {ties:?}"));
    }
    outcome(
        "agreement reproduction",
        fails,
        format!(
            "{}/{} agree, disagreements {dis:?}, tie rows {:?}",
            report.agree_count,
            report.total,
            ties.keys().collect::<Vec<_>>()
        ),
    )
}

fn rating(rater: &str, value: u8, check: Option<u8>) -> RatingRecord {
    RatingRecord {
        rater_id: rater.to_string(),
        design_id: "A1-d01".into(),
        scenario_id: "A1".into(),
        metric: Metric::Shade,
        value,
        is_attention_check: check.is_some(),
        expected_value: check,
        row: 0,
    }
}

/// Random raters with known failure counts; returns the dataset and the
/// raters that must be excluded.
fn attention_dataset(rng: &mut impl Rng, raters: usize) -> (RatingDataset, BTreeSet<String>) {
    let mut records = Vec::new();
    let mut expected = BTreeSet::new();
    for k in 0..raters {
        let id = format!("r{k:02}");
        let checks = rng.random_range(0..=5);
        let fails = rng.random_range(0..=checks);
        for c in 0..checks {
            let want = rng.random_range(1..=7u8);
            let given = if c < fails { want % 7 + 1 } else { want };
            records.push(rating(&id, given, Some(want)));
        }
        for _ in 0..rng.random_range(1..=4) {
            records.push(rating(&id, rng.random_range(1..=7), None));
        }
        if fails >= 2 {
            expected.insert(id);
        }
    }
    (RatingDataset::new(records), expected)
}

fn attention_rule() -> Outcome {
    let mut fails = Vec::new();
    // 20 raters: five each failing 0, 1, 2 and 3 of 4 checks
    let mut records = Vec::new();
    for k in 0..20usize {
        let id = format!("p{k:02}");
        let failed = k / 5;
        for c in 0..4 {
            records.push(rating(&id, if c < failed { 1 } else { 4 }, Some(4)));
        }
        records.push(rating(&id, 5, None));
    }
    let f = filter_raters(&RatingDataset::new(records));
    let want: Vec<String> = (10..20).map(|k| format!("p{k:02}")).collect();
    if f.excluded != want {
        fails.push(format!("fixed dataset excluded {:?}", f.excluded));
    }
    if f.dataset.len() != 10 {
        fails.push(format!("fixed dataset kept {} rows", f.dataset.len()));
    }

    let mut rng = support::rng(500);
    for case in 0..500 {
        let n = rng.random_range(1..=30);
        let (ds, expected) = attention_dataset(&mut rng, n);
        let f = filter_raters(&ds);
        let got: BTreeSet<String> = f.excluded.iter().cloned().collect();
        let kept_ok = f
            .dataset
            .records
            .iter()
            .all(|r| !r.is_attention_check && !expected.contains(&r.rater_id));
        let kept_count = ds
            .records
            .iter()
            .filter(|r| !r.is_attention_check && !expected.contains(&r.rater_id))
            .count();
        if got != expected || !kept_ok || kept_count != f.dataset.len() {
            fails.push(format!("random case {case} mismatched"));
            break;
        }
    }
    outcome(
        "attention-check rule",
        fails,
        "20-rater fixture excludes the 10 with 2+ failures; 500 random datasets".into(),
    )
}

fn geometry_oracle() -> Outcome {
    let mut fails = Vec::new();
    let catalog = builtin_catalog();
    let config = ScoreConfig::default();
    let mut rng = support::rng(200);
    let started = Instant::now();
    let (mut worst_shade, mut worst_light) = (0.0f64, 0.0f64);
    for case in 0..200 {
        let scene = support::random_scene(&mut rng, &catalog, LotSpec::default(), 30);
        let shade = shaded_fraction(&scene, &catalog, &config).unwrap();
        let light = lighting_coverage(&scene, &catalog).unwrap();
        let ds = (shade - support::oracle_shaded_fraction(&scene, &catalog, &config)).abs();
        let dl = (light - support::oracle_lighting(&scene, &catalog)).abs();
        worst_shade = worst_shade.max(ds);
        worst_light = worst_light.max(dl);
        if ds > 0.02 || dl > 0.02 {
            fails.push(format!(
                "case {case}: shade diff {ds:.4}, light diff {dl:.4}"
            ));
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(60) {
        fails.push(format!("took {elapsed:?}"));
    }
    outcome(
        "geometry oracle equivalence",
        fails,
        format!("200 scenes, worst shade diff {worst_shade:.4}, worst light diff {worst_light:.4}, {elapsed:?}"),
    )
}

fn metric_properties() -> Outcome {
    let mut fails = Vec::new();
    let catalog = builtin_catalog();
    let config = ScoreConfig::default();

    let empty = score_scene(&create_scene(LotSpec::default(), None), &catalog, &config).unwrap();
    if empty.scores.iter().any(|(_, v)| v != 1.0) {
        fails.push(format!("empty scene scores {:?}", empty.scores));
    }

    let mut rng = support::rng(1000);
    for case in 0..1000 {
        let scene = support::random_scene(&mut rng, &catalog, LotSpec::default(), 30);
        let r = score_scene(&scene, &catalog, &config).unwrap();
        let bad = r.scores.iter().find(|(_, v)| !(1.0..=7.0).contains(v));
        if let Some((m, v)) = bad {
            fails.push(format!("case {case}: {m} = {v}"));
            break;
        }
    }

    let trees = ["tree.oak", "tree.maple", "tree.palm"];
    let mut worst_drop = 0.0f64;
    for _ in 0..200 {
        let scene = support::random_scene(&mut rng, &catalog, LotSpec::default(), 30);
        let tree = trees[rng.random_range(0..trees.len())];
        let pose = support::random_pose(&mut rng, &scene.lot);
        let (more, _) = add_element(&scene, &tree.into(), pose, &catalog).unwrap();
        let a = score_scene(&scene, &catalog, &config)
            .unwrap()
            .scores
            .get(Metric::Shade);
        let b = score_scene(&more, &catalog, &config)
            .unwrap()
            .scores
            .get(Metric::Shade);
        worst_drop = worst_drop.max(a - b);
    }
    if worst_drop > 1e-9 {
        fails.push(format!("shade fell by {worst_drop:e} after adding a tree"));
    }

    let mut worst_rot = 0.0f64;
    for _ in 0..50 {
        let lot = LotSpec::new(30.0, 30.0).unwrap();
        let scene = support::random_scene(&mut rng, &catalog, lot, 30);
        let base = score_scene(&scene, &catalog, &config).unwrap();
        for q in 1..4 {
            let turned = support::rotate_square_scene(&scene, q);
            let r = score_scene(&turned, &catalog, &support::config_rotated(&config, q)).unwrap();
            for m in Metric::ALL {
                worst_rot = worst_rot.max((r.scores.get(m) - base.scores.get(m)).abs());
            }
        }
    }
    if worst_rot > 0.01 {
        fails.push(format!("joint rotation changed a score by {worst_rot:.4}"));
    }
    outcome(
        "metric properties",
        fails,
        format!(
            "1000 scenes in [1,7], empty = 1.0, 200 tree additions (worst shade drop {worst_drop:.1e}), 150 quarter-turns (worst diff {worst_rot:.1e})"
        ),
    )
}

fn serialization() -> Outcome {
    let mut fails = Vec::new();
    let catalog = builtin_catalog();
    let mut rng = support::rng(1001);
    for case in 0..1000 {
        let w = rng.random_range(5.0..=200.0);
        let d = rng.random_range(5.0..=200.0);
        let scene = support::random_scene(&mut rng, &catalog, LotSpec::new(w, d).unwrap(), 30);
        let text = encode_scene(&scene);
        match decode_scene(&text) {
            Ok(back) if back == scene && encode_scene(&back) == text => {}
            Ok(_) => {
                fails.push(format!("case {case}: round trip changed the scene"));
                break;
            }
            Err(e) => {
                fails.push(format!("case {case}: {e}"));
                break;
            }
        }
    }
    outcome(
        "serialization",
        fails,
        "1000 random scenes round-trip byte-stable".into(),
    )
}

fn replication_gate() -> Outcome {
    let mut fails = Vec::new();
    let catalog = builtin_catalog();
    let tol = MatchTolerances::default();
    let mut rng = support::rng(2024);
    let (mut removals, mut displacements) = (0, 0);
    for case in 0..200 {
        let mut target = support::random_scene(&mut rng, &catalog, LotSpec::default(), 30);
        if target.is_empty() {
            target = add_element(
                &target,
                &"bench.basic".into(),
                Pose::at(5.0, 5.0).unwrap(),
                &catalog,
            )
            .unwrap()
            .0;
        }
        if !match_replication(&target, &target, &tol, &catalog).passed {
            fails.push(format!("case {case}: self match failed"));
            continue;
        }
        let k = rng.random_range(0..target.instances.len());
        let victim = target.instances[k].clone();
        let removed = remove_element(&target, &victim.instance_id).unwrap();
        removals += 1;
        let r = match_replication(&removed, &target, &tol, &catalog);
        // with same-entry siblings, greedy pairing may report a sibling as the missing one
        if r.passed || r.missing.len() != 1 {
            fails.push(format!("case {case}: removal not reported"));
        }
        // Only move elements with no same-entry neighbour close enough to
        // swap partners under greedy matching.
        let lonely = target.instances.iter().all(|o| {
            o.instance_id == victim.instance_id
                || o.entry_id != victim.entry_id
                || o.pose.position().distance(victim.pose.position()) > 6.0
        });
        if lonely {
            let angle = rng.random_range(0.0..std::f64::consts::TAU);
            let dist = rng.random_range(1.05..2.5);
            let moved_pose = victim
                .pose
                .with_position(victim.pose.position() + Vec2::new(angle.cos(), angle.sin()) * dist)
                .unwrap();
            let mut moved = target.clone();
            moved.instances[k].pose = moved_pose;
            displacements += 1;
            if match_replication(&moved, &target, &tol, &catalog).passed {
                fails.push(format!("case {case}: {dist:.2} m displacement passed"));
            }
        }
    }
    outcome(
        "replication gate",
        fails,
        format!("200 self matches, {removals} removals, {displacements} displacements over 1 m"),
    )
}

async fn call(app: &axum::Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let body = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, body)
}

fn post_json(uri: &str, body: String) -> Request<Body> {
    Request::post(uri)
        .header("content-type", "application/json")
        .body(Body::from(body))
        .unwrap()
}

fn service_contract() -> Outcome {
    let mut fails = Vec::new();
    let runtime = tokio::runtime::Runtime::new().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let catalog = builtin_catalog();
    let mut rng = support::rng(77);
    let scene = support::random_scene(&mut rng, &catalog, LotSpec::default(), 12);
    let mut first_scene = String::new();
    runtime.block_on(async {
        let app = router(AppState::new(
            Store::open(dir.path()).unwrap(),
            catalog.clone(),
            42,
        ));
        let (status, body) = call(&app, post_json("/api/scenes", encode_scene(&scene))).await;
        if status != StatusCode::CREATED {
            fails.push(format!("save returned {status}"));
            return;
        }
        let saved: serde_json::Value = serde_json::from_slice(&body).unwrap();
        first_scene = saved["scene_id"].as_str().unwrap().to_string();
        let (status, body) = call(
            &app,
            Request::get(format!("/api/scenes/{first_scene}"))
                .body(Body::empty())
                .unwrap(),
        )
        .await;
        let back = decode_scene(std::str::from_utf8(&body).unwrap());
        if status != StatusCode::OK || back.as_ref() != Ok(&scene) {
            fails.push("get did not return the saved scene".into());
        }

        let mut counts: BTreeMap<ScenarioGroup, usize> = BTreeMap::new();
        for p in 0..1000 {
            let pid = format!("participant-{p}-{}", rng.random::<u32>());
            let req = serde_json::json!({ "participant_id": pid }).to_string();
            let (s1, b1) = call(&app, post_json("/api/assignments", req.clone())).await;
            let (s2, b2) = call(&app, post_json("/api/assignments", req)).await;
            let a: serde_json::Value = serde_json::from_slice(&b1).unwrap();
            let group: ScenarioGroup = serde_json::from_value(a["group"].clone()).unwrap();
            let mut order: Vec<ScenarioId> =
                serde_json::from_value(a["scenario_order"].clone()).unwrap();
            order.sort();
            if s1 != StatusCode::OK || s2 != StatusCode::OK || b1 != b2 {
                fails.push(format!("participant {p}: assignment not idempotent"));
                break;
            }
            if order != group.scenario_ids().to_vec() {
                fails.push(format!(
                    "participant {p}: order is not a permutation of {group:?}"
                ));
                break;
            }
            *counts.entry(group).or_default() += 1;
        }
        let spread = counts.values().max().unwrap_or(&0) - counts.values().min().unwrap_or(&0);
        if counts.len() != 3 || spread > 1 {
            fails.push(format!("groups unbalanced {counts:?}"));
        }
    });
    runtime.block_on(async {
        let app = router(AppState::new(
            Store::open(dir.path()).unwrap(),
            catalog.clone(),
            42,
        ));
        let (status, body) = call(
            &app,
            Request::get(format!("/api/scenes/{first_scene}"))
                .body(Body::empty())
                .unwrap(),
        )
        .await;
        let back = decode_scene(std::str::from_utf8(&body).unwrap_or(""));
        if status != StatusCode::OK || back.as_ref() != Ok(&scene) {
            fails.push("scene lost across restart".into());
        }
        let req = serde_json::json!({ "participant_id": "after-restart" }).to_string();
        let (_, body) = call(&app, post_json("/api/assignments", req)).await;
        let a: serde_json::Value = serde_json::from_slice(&body).unwrap();
        // 1000 earlier assignments survive, so the next one continues the rotation
        if a["group"] != "B" {
            fails.push(format!(
                "assignment count not restored, got group {}",
                a["group"]
            ));
        }
    });
    outcome(
        "service contract",
        fails,
        "save/get round trip, 1000 participants, restart keeps records".into(),
    )
}

fn main() {
    let criteria: Vec<fn() -> Outcome> = vec![
        reference_means_regression,
        agreement_reproduction,
        attention_rule,
        geometry_oracle,
        metric_properties,
        serialization,
        replication_gate,
        service_contract,
    ];
    let mut failed = 0;
    for run in criteria {
        let o = run();
        println!(
            "{} {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} criteria, {failed} failed", 8);
    if failed > 0 {
        std::process::exit(1);
    }
}
