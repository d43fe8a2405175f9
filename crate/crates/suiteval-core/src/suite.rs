use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::category::CategoryPath;
use crate::error::{CoreError, CoreResult};

/// One test-suite entry: a source sentence targeting a single linguistic
/// phenomenon, with a positive rule matching a successful translation and an
/// optional negative rule matching an erroneous one.
///
/// Rules are stored as pattern strings; the companion crate compiles and
/// validates them under the supported dialect when a suite file is loaded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestItem {
    pub id: String,
    pub source_text: String,
    pub category: CategoryPath,
    pub positive_rule: String,
    pub negative_rule: Option<String>,
    /// `i` flag from the suite file: rules match case-insensitively.
    pub case_insensitive: bool,
    pub notes: Option<String>,
}

/// A validated collection of test items with unique ids, kept in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSuite {
    items: Vec<TestItem>,
    by_id: BTreeMap<String, usize>,
}

impl TestSuite {
    /// Checks id uniqueness and non-empty sources. Rule compilation is the
    /// loader's responsibility.
    pub fn new(items: Vec<TestItem>) -> CoreResult<Self> {
        let mut by_id = BTreeMap::new();
        for (idx, item) in items.iter().enumerate() {
            if item.source_text.trim().is_empty() {
                return Err(CoreError::EmptySource {
                    id: item.id.clone(),
                });
            }
            if by_id.insert(item.id.clone(), idx).is_some() {
                return Err(CoreError::DuplicateItemId(item.id.clone()));
            }
        }
        Ok(Self { items, by_id })
    }

    pub fn items(&self) -> &[TestItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&TestItem> {
        self.by_id.get(id).map(|&i| &self.items[i])
    }

    /// Distinct top-level category count, for diagnostics summaries.
    pub fn category_count(&self) -> usize {
        let mut cats: Vec<&str> = self.items.iter().map(|i| i.category.category()).collect();
        cats.sort_unstable();
        cats.dedup();
        cats.len()
    }
}
