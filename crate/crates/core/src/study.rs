//! Two-alternative forced choice studies: trial plans, frozen predictions
//! and hit-rate reporting.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{ImageId, StudyId, UserId};
use crate::preference::{color_scheme_preference, ColorRatingProfile, PreferenceModel};
use crate::store::Corpus;

/// All unordered index pairs `(i, j)`, `i < j`, in lexicographic order;
/// `n (n - 1) / 2` of them.
pub fn generate_pairs(n: usize) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 stimuli, got {n}")));
    }
    Ok((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect())
}

/// Unordered image pair stored with the smaller id first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ImagePair(ImageId, ImageId);

impl ImagePair {
    pub fn new(a: ImageId, b: ImageId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Self(a, b)),
            std::cmp::Ordering::Greater => Ok(Self(b, a)),
            std::cmp::Ordering::Equal => Err(Error::invalid(format!("pair of identical images {a}"))),
        }
    }

    pub fn first(&self) -> &ImageId {
        &self.0
    }

    pub fn second(&self) -> &ImageId {
        &self.1
    }

    pub fn contains(&self, id: &ImageId) -> bool {
        &self.0 == id || &self.1 == id
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub winner: ImageId,
    /// Both images scored exactly the same; `winner` is then the lower id.
    pub tie: bool,
    pub totals: (f64, f64),
}

/// Total preference of one image for one user.
pub fn total_preference_for(
    id: &ImageId,
    corpus: &Corpus,
    profile: &ColorRatingProfile,
    model: &PreferenceModel,
) -> Result<f64> {
    let row = corpus.row(id)?;
    let color_pref = color_scheme_preference(corpus.palette(id)?, profile)?;
    model.total_preference(row.aesthetic_score, color_pref)
}

/// Predicts which image of the pair the user prefers.
pub fn predict_choice(
    pair: &ImagePair,
    corpus: &Corpus,
    profile: &ColorRatingProfile,
    model: &PreferenceModel,
) -> Result<Prediction> {
    let a = total_preference_for(pair.first(), corpus, profile, model)?;
    let b = total_preference_for(pair.second(), corpus, profile, model)?;
    let winner = if b > a { pair.second() } else { pair.first() };
    Ok(Prediction {
        winner: winner.clone(),
        tie: a == b,
        totals: (a, b),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedTrial {
    pub user_id: UserId,
    pub pair: ImagePair,
    pub left: ImageId,
    pub right: ImageId,
    pub prediction: Prediction,
}

/// A study with its trial plan; predictions are frozen at creation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Study {
    pub study_id: StudyId,
    pub image_ids: Vec<ImageId>,
    pub user_ids: Vec<UserId>,
    /// Seeds the left/right presentation order.
    pub seed: u64,
    pub plan: Vec<PlannedTrial>,
}

impl Study {
    pub fn create(
        study_id: StudyId,
        image_ids: Vec<ImageId>,
        user_ids: Vec<UserId>,
        seed: u64,
        corpus: &Corpus,
        profiles: &HashMap<UserId, ColorRatingProfile>,
        model: &PreferenceModel,
    ) -> Result<Self> {
        let mut images = image_ids;
        images.sort();
        if images.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("study images must be distinct"));
        }
        let pairs = generate_pairs(images.len())?;
        if user_ids.is_empty() {
            return Err(Error::invalid("study needs at least one participant"));
        }
        let mut users = user_ids;
        users.dedup();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut plan = Vec::with_capacity(users.len() * pairs.len());
        for user in &users {
            let profile = profiles
                .get(user)
                .ok_or_else(|| Error::NotFound(format!("color ratings for user {user}")))?;
            for &(i, j) in &pairs {
                let pair = ImagePair::new(images[i].clone(), images[j].clone())?;
                let prediction = predict_choice(&pair, corpus, profile, model)?;
                let (left, right) = if rng.random_bool(0.5) {
                    (pair.second().clone(), pair.first().clone())
                } else {
                    (pair.first().clone(), pair.second().clone())
                };
                plan.push(PlannedTrial {
                    user_id: user.clone(),
                    pair,
                    left,
                    right,
                    prediction,
                });
            }
        }
        Ok(Self {
            study_id,
            image_ids: images,
            user_ids: users,
            seed,
            plan,
        })
    }

    pub fn trials_per_user(&self) -> usize {
        let n = self.image_ids.len();
        n * (n - 1) / 2
    }

    pub fn planned(&self, user: &UserId, pair: &ImagePair) -> Option<&PlannedTrial> {
        self.plan.iter().find(|t| &t.user_id == user && &t.pair == pair)
    }
}

/// One answered 2AFC comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub study_id: StudyId,
    pub user_id: UserId,
    pub pair: ImagePair,
    pub predicted_winner: ImageId,
    pub human_choice: ImageId,
    pub hit: bool,
    #[serde(default)]
    pub tie: bool,
}

impl Trial {
    pub fn new(study_id: StudyId, planned: &PlannedTrial, human_choice: ImageId) -> Result<Self> {
        if !planned.pair.contains(&human_choice) {
            return Err(Error::invalid(format!("choice {human_choice} is not part of the pair")));
        }
        Ok(Self {
            study_id,
            user_id: planned.user_id.clone(),
            pair: planned.pair.clone(),
            hit: planned.prediction.winner == human_choice,
            predicted_winner: planned.prediction.winner.clone(),
            human_choice,
            tie: planned.prediction.tie,
        })
    }
}

/// Share of trials whose predicted winner matches the human choice.
pub fn hit_rate(trials: &[Trial]) -> Result<f64> {
    if trials.is_empty() {
        return Err(Error::invalid("hit rate of an empty trial list"));
    }
    let hits = trials.iter().filter(|t| t.hit).count();
    Ok(hits as f64 / trials.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitSummary {
    pub hits: usize,
    pub trials: usize,
    /// `None` until at least one trial is recorded.
    pub hit_rate: Option<f64>,
}

impl HitSummary {
    fn of<'a>(trials: impl IntoIterator<Item = &'a Trial>) -> Self {
        let (hits, total) = trials
            .into_iter()
            .fold((0, 0), |(h, n), t| (h + t.hit as usize, n + 1));
        Self {
            hits,
            trials: total,
            hit_rate: (total > 0).then(|| hits as f64 / total as f64),
        }
    }
}

/// Per-user and pooled hit rates of a study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub study_id: StudyId,
    pub per_user: BTreeMap<UserId, HitSummary>,
    pub overall: HitSummary,
    pub expected_trials: usize,
    pub complete: bool,
}

pub fn report(study: &Study, trials: &[Trial]) -> StudyReport {
    let own: Vec<&Trial> = trials.iter().filter(|t| t.study_id == study.study_id).collect();
    let per_user = study
        .user_ids
        .iter()
        .map(|u| (u.clone(), HitSummary::of(own.iter().copied().filter(|t| &t.user_id == u))))
        .collect();
    let overall = HitSummary::of(own.iter().copied());
    StudyReport {
        study_id: study.study_id.clone(),
        per_user,
        complete: overall.trials == study.plan.len(),
        overall,
        expected_trials: study.plan.len(),
    }
}
