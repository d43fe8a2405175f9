use alloc::string::{String, ToString};
use core::fmt;
use serde::{Deserialize, Serialize};

/// A two-level error-category identifier, e.g. `Negation` or
/// `Verb tense/aspect/mood/type` with subcategory `pluperfect`.
///
/// Comparison is exact string equality on both levels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CategoryPath {
    category: String,
    subcategory: Option<String>,
}

impl CategoryPath {
    /// Top-level category without a subcategory. Empty names are rejected.
    pub fn top(category: impl Into<String>) -> Option<Self> {
        let category = category.into();
        if category.is_empty() {
            return None;
        }
        Some(Self {
            category,
            subcategory: None,
        })
    }

    pub fn with_sub(category: impl Into<String>, subcategory: impl Into<String>) -> Option<Self> {
        let category = category.into();
        let subcategory = subcategory.into();
        if category.is_empty() || subcategory.is_empty() {
            return None;
        }
        Some(Self {
            category,
            subcategory: Some(subcategory),
        })
    }

    pub fn new(category: impl Into<String>, subcategory: Option<String>) -> Option<Self> {
        match subcategory {
            None => Self::top(category),
            Some(s) => Self::with_sub(category, s),
        }
    }

    pub fn category(&self) -> &str {
        &self.category
    }

    pub fn subcategory(&self) -> Option<&str> {
        self.subcategory.as_deref()
    }

    /// The same path with the subcategory dropped.
    pub fn top_level(&self) -> CategoryPath {
        CategoryPath {
            category: self.category.clone(),
            subcategory: None,
        }
    }
}

impl fmt::Display for CategoryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subcategory {
            Some(sub) => write!(f, "{}/{}", self.category, sub),
            None => f.write_str(&self.category),
        }
    }
}

impl CategoryPath {
    /// Inverse of `Display`: splits on the first `/`.
    pub fn parse(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((cat, sub)) => Self::with_sub(cat.to_string(), sub.to_string()),
            None => Self::top(s.to_string()),
        }
    }
}
