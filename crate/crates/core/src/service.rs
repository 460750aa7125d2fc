//! Stateful study service: users, color ratings, studies and trials,
//! persisted through the event log and rebuilt from it on start.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::color::BasicColor;
use crate::error::{Error, Result};
use crate::ids::{ImageId, StudyId, UserId};
use crate::preference::{ColorRatingProfile, PreferenceModel, PreferenceResult};
use crate::store::{Corpus, Event, EventLog};
use crate::study::{self, ImagePair, Study, StudyReport, Trial};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct User {
    pub user_id: UserId,
    pub name: String,
}

/// What a participant should see next.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NextTrial {
    pub pair: ImagePair,
    pub left: ImageId,
    pub right: ImageId,
    pub index: usize,
    pub total: usize,
}

#[derive(Debug)]
pub struct StudyService {
    corpus: Corpus,
    model: PreferenceModel,
    log: EventLog,
    users: BTreeMap<UserId, User>,
    profiles: HashMap<UserId, ColorRatingProfile>,
    studies: BTreeMap<StudyId, Study>,
    trials: BTreeMap<StudyId, Vec<Trial>>,
}

impl StudyService {
    /// Rebuilds state by replaying `log`.
    pub fn new(corpus: Corpus, model: PreferenceModel, log: EventLog) -> Result<Self> {
        let mut service = Self {
            corpus,
            model,
            log: EventLog::in_memory(),
            users: BTreeMap::new(),
            profiles: HashMap::new(),
            studies: BTreeMap::new(),
            trials: BTreeMap::new(),
        };
        for record in log.records() {
            service.apply(&record.event)?;
        }
        service.log = log;
        Ok(service)
    }

    fn apply(&mut self, event: &Event) -> Result<()> {
        match event {
            Event::UserCreated { user_id, name } => {
                self.users.insert(
                    user_id.clone(),
                    User {
                        user_id: user_id.clone(),
                        name: name.clone(),
                    },
                );
            }
            Event::ColorRatingSubmitted { user_id, ratings } => {
                let mut values = [0.0; 12];
                for color in BasicColor::ALL {
                    values[color.index()] = *ratings
                        .get(&color)
                        .ok_or_else(|| Error::invalid(format!("missing rating for {color}")))?;
                }
                self.profiles
                    .insert(user_id.clone(), ColorRatingProfile::new(user_id.clone(), values)?);
            }
            Event::StudyCreated(study) => {
                self.trials.entry(study.study_id.clone()).or_default();
                self.studies.insert(study.study_id.clone(), (**study).clone());
            }
            Event::TrialRecorded(trial) => {
                self.trials.entry(trial.study_id.clone()).or_default().push(trial.clone());
            }
        }
        Ok(())
    }

    fn commit(&mut self, event: Event) -> Result<()> {
        self.apply(&event)?;
        self.log.append(event)?;
        Ok(())
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn model(&self) -> &PreferenceModel {
        &self.model
    }

    pub fn log(&self) -> &EventLog {
        &self.log
    }

    pub fn users(&self) -> impl Iterator<Item = &User> {
        self.users.values()
    }

    pub fn create_user(&mut self, name: &str) -> Result<UserId> {
        let user_id = UserId(format!("u{}", self.users.len() + 1));
        self.commit(Event::UserCreated {
            user_id: user_id.clone(),
            name: name.to_string(),
        })?;
        Ok(user_id)
    }

    fn require_user(&self, user: &UserId) -> Result<()> {
        if self.users.contains_key(user) {
            Ok(())
        } else {
            Err(Error::NotFound(format!("user {user}")))
        }
    }

    /// Stores 0..=10 UI ratings (all 12 colors) as a normalized profile.
    pub fn submit_ratings(&mut self, user: &UserId, ui: &BTreeMap<BasicColor, f64>) -> Result<&ColorRatingProfile> {
        self.require_user(user)?;
        let profile = ColorRatingProfile::from_ui_scale(user.clone(), ui)?;
        self.commit(Event::ColorRatingSubmitted {
            user_id: user.clone(),
            ratings: profile.ratings(),
        })?;
        Ok(&self.profiles[user])
    }

    pub fn profile(&self, user: &UserId) -> Result<&ColorRatingProfile> {
        self.require_user(user)?;
        self.profiles
            .get(user)
            .ok_or_else(|| Error::NotFound(format!("color ratings for user {user}")))
    }

    pub fn predict(&self, user: &UserId, image: &ImageId) -> Result<PreferenceResult> {
        let profile = self.profile(user)?;
        let row = self.corpus.row(image)?;
        crate::preference::evaluate(&self.model, image, row.aesthetic_score, self.corpus.palette(image)?, profile)
    }

    pub fn create_study(&mut self, image_ids: Vec<ImageId>, user_ids: Vec<UserId>, seed: Option<u64>) -> Result<&Study> {
        for user in &user_ids {
            self.require_user(user)?;
        }
        for image in &image_ids {
            self.corpus.row(image)?;
        }
        let study_id = StudyId(format!("s{}", self.studies.len() + 1));
        let study = Study::create(
            study_id.clone(),
            image_ids,
            user_ids,
            seed.unwrap_or_else(rand::random),
            &self.corpus,
            &self.profiles,
            &self.model,
        )?;
        self.commit(Event::StudyCreated(Box::new(study)))?;
        Ok(&self.studies[&study_id])
    }

    pub fn study(&self, id: &StudyId) -> Result<&Study> {
        self.studies
            .get(id)
            .ok_or_else(|| Error::NotFound(format!("study {id}")))
    }

    pub fn trials(&self, id: &StudyId) -> Result<&[Trial]> {
        self.study(id)?;
        Ok(self.trials.get(id).map(Vec::as_slice).unwrap_or(&[]))
    }

    /// First planned pair the user has not answered yet; `None` when done.
    pub fn next_trial(&self, id: &StudyId, user: &UserId) -> Result<Option<NextTrial>> {
        let study = self.study(id)?;
        if !study.user_ids.contains(user) {
            return Err(Error::NotFound(format!("user {user} in study {id}")));
        }
        let answered = self.trials(id)?;
        let own: Vec<_> = study.plan.iter().filter(|t| &t.user_id == user).collect();
        Ok(own
            .iter()
            .enumerate()
            .find(|(_, planned)| {
                !answered
                    .iter()
                    .any(|t| &t.user_id == user && t.pair == planned.pair)
            })
            .map(|(index, planned)| NextTrial {
                pair: planned.pair.clone(),
                left: planned.left.clone(),
                right: planned.right.clone(),
                index,
                total: own.len(),
            }))
    }

    /// Records a choice; a second answer for the same (study, user, pair)
    /// is a conflict.
    pub fn record_trial(&mut self, id: &StudyId, user: &UserId, pair: ImagePair, choice: ImageId) -> Result<Trial> {
        let study = self.study(id)?;
        let planned = study
            .planned(user, &pair)
            .ok_or_else(|| Error::NotFound(format!("pair {pair:?} for user {user} in study {id}")))?;
        if self.trials(id)?.iter().any(|t| &t.user_id == user && t.pair == pair) {
            return Err(Error::Conflict(format!("trial already recorded for user {user}")));
        }
        let trial = Trial::new(id.clone(), planned, choice)?;
        self.commit(Event::TrialRecorded(trial.clone()))?;
        Ok(trial)
    }

    pub fn report(&self, id: &StudyId) -> Result<StudyReport> {
        Ok(study::report(self.study(id)?, self.trials(id)?))
    }
}
