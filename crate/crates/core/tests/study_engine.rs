mod common;

use std::collections::{BTreeMap, HashMap};

use common::*;
use interior_aesthetics::color::{BasicColor, DominantColorSummary};
use interior_aesthetics::preference::{ColorRatingProfile, PreferenceModel};
use interior_aesthetics::scoring::{DatasetStats, FeatureRange, ScoredRow};
use interior_aesthetics::service::StudyService;
use interior_aesthetics::store::{ingest, Corpus, EventLog, FeatureTable};
use interior_aesthetics::study::{generate_pairs, hit_rate, predict_choice, ImagePair, Study};
use interior_aesthetics::{Error, ImageId, StudyId, UserId};
use proptest::prelude::*;

fn id(s: &str) -> ImageId {
    ImageId::from(s)
}

/// Corpus built from explicit aesthetic scores and palettes.
fn synthetic_corpus(entries: &[(&str, f64, Vec<(BasicColor, u32)>)]) -> Corpus {
    let rows = entries
        .iter()
        .map(|(name, score, _)| ScoredRow {
            image_id: id(name),
            likes: 0,
            color_harmony: 100.0,
            lightness: 5,
            complexity: 100,
            ch_norm: *score,
            l_norm: *score,
            c_norm: 1.0 - score,
            simplicity_norm: *score,
            aesthetic_score: *score,
        })
        .collect();
    let range = FeatureRange::new(0.0, 1.0).unwrap();
    let stats = DatasetStats { color_harmony: range, lightness: range, complexity: range };
    Corpus {
        table: FeatureTable::new(rows, Some(stats)).unwrap(),
        palettes: entries
            .iter()
            .map(|(name, _, palette)| (id(name), DominantColorSummary::new(palette.clone()).unwrap()))
            .collect(),
        image_dir: None,
    }
}

#[test]
fn generate_pairs_matches_enumeration() {
    for n in 2..12 {
        let mut brute = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i < j {
                    brute.push((i, j));
                }
            }
        }
        assert_eq!(generate_pairs(n).unwrap(), brute);
        assert_eq!(brute.len(), n * (n - 1) / 2);
    }
}

#[test]
fn prediction_prefers_higher_total_and_ignores_order() {
    let corpus = synthetic_corpus(&[
        ("1", 0.68, vec![(BasicColor::Gray, 500), (BasicColor::Red, 100)]),
        ("91", 0.52, vec![(BasicColor::Gray, 500), (BasicColor::Red, 100)]),
    ]);
    let profile = ColorRatingProfile::uniform(UserId::from("u1"), 0.7).unwrap();
    let model = PreferenceModel::default();
    let p = predict_choice(&ImagePair::new(id("1"), id("91")).unwrap(), &corpus, &profile, &model).unwrap();
    let q = predict_choice(&ImagePair::new(id("91"), id("1")).unwrap(), &corpus, &profile, &model).unwrap();
    assert_eq!(p.winner, id("1"));
    assert_eq!(p, q);
    assert!(!p.tie);
    assert!(p.totals.0 > p.totals.1);
}

#[test]
fn identical_images_tie_to_lower_id() {
    let palette = vec![(BasicColor::Beige, 900)];
    let corpus = synthetic_corpus(&[("7", 0.6, palette.clone()), ("3", 0.6, palette)]);
    let profile = ColorRatingProfile::uniform(UserId::from("u1"), 0.4).unwrap();
    let p = predict_choice(&ImagePair::new(id("7"), id("3")).unwrap(), &corpus, &profile, &PreferenceModel::default()).unwrap();
    assert!(p.tie);
    assert_eq!(p.winner, id("3"));
}

#[test]
fn missing_image_or_profile_is_a_lookup_error() {
    let corpus = synthetic_corpus(&[("1", 0.5, vec![(BasicColor::Red, 1)]), ("2", 0.5, vec![(BasicColor::Red, 1)])]);
    let profile = ColorRatingProfile::uniform(UserId::from("u1"), 0.4).unwrap();
    let model = PreferenceModel::default();
    let missing = predict_choice(&ImagePair::new(id("1"), id("5")).unwrap(), &corpus, &profile, &model);
    assert!(matches!(missing, Err(Error::NotFound(_))));
    let study = Study::create(
        StudyId::from("s1"),
        vec![id("1"), id("2")],
        vec![UserId::from("u1")],
        1,
        &corpus,
        &HashMap::new(),
        &model,
    );
    assert!(matches!(study, Err(Error::NotFound(_))));
}

fn service_with_users(n_images: usize) -> (StudyService, Vec<UserId>, Vec<ImageId>) {
    let dir = tempfile::tempdir().unwrap();
    let palettes = [[200, 30, 30], [40, 80, 200], [40, 160, 60], [225, 205, 170], [120, 75, 40], [20, 20, 20], [245, 245, 245]];
    for i in 0..n_images {
        let img = scene(palettes[i % palettes.len()], &[(40, 40, 30 + 10 * i, 30, palettes[(i + 3) % palettes.len()])]);
        std::fs::write(dir.path().join(format!("{}.png", i + 1)), img.to_png()).unwrap();
    }
    let corpus = ingest(dir.path(), None).unwrap().corpus;
    let mut service = StudyService::new(corpus, PreferenceModel::default(), EventLog::in_memory()).unwrap();
    let mut users = Vec::new();
    for (name, warm) in [("A", true), ("B", false)] {
        let user = service.create_user(name).unwrap();
        let ui: BTreeMap<BasicColor, f64> = BasicColor::ALL
            .into_iter()
            .map(|c| {
                let likes_it = matches!(c, BasicColor::Red | BasicColor::Brown | BasicColor::Beige) == warm;
                (c, if likes_it { 9.0 } else { 2.0 })
            })
            .collect();
        service.submit_ratings(&user, &ui).unwrap();
        users.push(user);
    }
    let images = (1..=n_images).map(|i| id(&i.to_string())).collect();
    (service, users, images)
}

#[test]
fn completed_study_has_u_times_t_trials() {
    let (mut service, users, images) = service_with_users(5);
    let study_id = service.create_study(images, users.clone(), Some(9)).unwrap().study_id.clone();
    assert_eq!(service.study(&study_id).unwrap().trials_per_user(), 10);
    for user in &users {
        let mut seen = 0;
        while let Some(next) = service.next_trial(&study_id, user).unwrap() {
            assert_eq!(next.index, seen);
            assert_eq!(next.total, 10);
            service.record_trial(&study_id, user, next.pair.clone(), next.right.clone()).unwrap();
            seen += 1;
        }
        assert_eq!(seen, 10);
    }
    let report = service.report(&study_id).unwrap();
    assert!(report.complete);
    assert_eq!(report.overall.trials, 20);
    assert_eq!(report.per_user.len(), 2);
    assert_eq!(report.overall.hit_rate, Some(hit_rate(service.trials(&study_id).unwrap()).unwrap()));
}

#[test]
fn duplicate_and_foreign_answers_are_rejected() {
    let (mut service, users, images) = service_with_users(3);
    let study_id = service.create_study(images, vec![users[0].clone()], Some(1)).unwrap().study_id.clone();
    let next = service.next_trial(&study_id, &users[0]).unwrap().unwrap();
    service.record_trial(&study_id, &users[0], next.pair.clone(), next.left.clone()).unwrap();
    let again = service.record_trial(&study_id, &users[0], next.pair.clone(), next.right.clone());
    assert!(matches!(again, Err(Error::Conflict(_))));
    let outsider = service.record_trial(&study_id, &users[1], next.pair.clone(), next.left.clone());
    assert!(matches!(outsider, Err(Error::NotFound(_))));
    let pair = service.next_trial(&study_id, &users[0]).unwrap().unwrap().pair;
    let wrong_choice = service.record_trial(&study_id, &users[0], pair, id("99"));
    assert!(matches!(wrong_choice, Err(Error::InvalidArgument(_))));
    assert_eq!(service.trials(&study_id).unwrap().len(), 1);
}

#[test]
fn presentation_order_is_reproducible_from_seed() {
    let (mut service, users, images) = service_with_users(6);
    let a = service.create_study(images.clone(), users.clone(), Some(77)).unwrap().clone();
    let b = service.create_study(images, users, Some(77)).unwrap().clone();
    assert_ne!(a.study_id, b.study_id);
    assert_eq!(a.plan, b.plan);
    let flipped = a.plan.iter().filter(|t| &t.left != t.pair.first()).count();
    assert!(flipped > 0 && flipped < a.plan.len());
}

#[test]
fn predictions_are_frozen_at_creation() {
    let (mut service, users, images) = service_with_users(4);
    let study = service.create_study(images, users.clone(), Some(5)).unwrap().clone();
    let all_ten: BTreeMap<BasicColor, f64> = BasicColor::ALL.into_iter().map(|c| (c, 10.0)).collect();
    service.submit_ratings(&users[0], &all_ten).unwrap();
    assert_eq!(service.study(&study.study_id).unwrap().plan, study.plan);
}

#[test]
fn study_creation_validates_inputs() {
    let (mut service, users, images) = service_with_users(3);
    assert!(service.create_study(vec![images[0].clone()], users.clone(), None).is_err());
    assert!(service.create_study(vec![images[0].clone(), images[0].clone()], users.clone(), None).is_err());
    assert!(service.create_study(images.clone(), vec![], None).is_err());
    assert!(service.create_study(images.clone(), vec![UserId::from("ghost")], None).is_err());
    assert!(service.create_study(vec![images[0].clone(), id("nope")], users, None).is_err());
}

proptest! {
    #[test]
    fn hit_rate_is_permutation_invariant(hits in prop::collection::vec(any::<bool>(), 1..40), seed in any::<u64>()) {
        let pair = ImagePair::new(id("1"), id("2")).unwrap();
        let trials: Vec<_> = hits.iter().map(|&hit| interior_aesthetics::study::Trial {
            study_id: StudyId::from("s"),
            user_id: UserId::from("u"),
            pair: pair.clone(),
            predicted_winner: id("1"),
            human_choice: if hit { id("1") } else { id("2") },
            hit,
            tie: false,
        }).collect();
        let mut shuffled = trials.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.reverse();
        prop_assert_eq!(hit_rate(&trials).unwrap(), hit_rate(&shuffled).unwrap());
    }
}
