//! Personalized aesthetic preference for interior design images.
//!
//! Images are standardized to 200x200 RGB and described by color harmony,
//! lightness and complexity. Those features are normalized against the
//! corpus and combined into an aesthetic score; a user's single-color
//! ratings, weighted by the image's dominant colors, give a color-scheme
//! preference. A Mamdani fuzzy system merges both into a total preference,
//! and two-alternative forced choice studies measure how often that
//! prediction matches what people pick.

pub mod color;
pub mod error;
pub mod features;
pub mod fuzzy;
pub mod ids;
pub mod imaging;
pub mod preference;
pub mod scoring;
pub mod service;
pub mod store;
pub mod study;

pub use error::{Error, Result};
pub use ids::{ImageId, StudyId, UserId};
