use serde::{Deserialize, Serialize};
use std::fmt;

/// Product group. Only the four major groups are named; anything else in
/// the dump (Toy, Software, CE, ...) is kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    Book,
    Dvd,
    Music,
    Video,
    Other(String),
}

impl Group {
    pub fn parse(s: &str) -> Self {
        match s {
            "Book" => Group::Book,
            "DVD" => Group::Dvd,
            "Music" => Group::Music,
            "Video" => Group::Video,
            other => Group::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Group::Book => "Book",
            Group::Dvd => "DVD",
            Group::Music => "Music",
            Group::Video => "Video",
            Group::Other(s) => s,
        }
    }

    /// Position in the Book, DVD, Music, Video one-hot order.
    pub fn index(&self) -> Option<usize> {
        match self {
            Group::Book => Some(0),
            Group::Dvd => Some(1),
            Group::Music => Some(2),
            Group::Video => Some(3),
            Group::Other(_) => None,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One `|`-delimited path of the category hierarchy, root first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CategoryPath {
    pub levels: Vec<(String, u32)>,
}

impl CategoryPath {
    pub fn ids(&self) -> Vec<u32> {
        self.levels.iter().map(|(_, id)| *id).collect()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReviewSummary {
    pub total: u64,
    pub downloaded: u64,
    pub avg_rating: f64,
}

/// One metadata entry of the dump.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProductRecord {
    pub id: u64,
    pub asin: String,
    pub title: Option<String>,
    pub group: Option<Group>,
    pub salesrank: Option<i64>,
    pub similar_asins: Vec<String>,
    pub category_paths: Vec<CategoryPath>,
    pub review_summary: Option<ReviewSummary>,
    pub discontinued: bool,
}

/// Which records count as usable. The default drops discontinued products
/// and products without a title or group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterPolicy {
    pub require_title: bool,
    pub require_group: bool,
    pub require_categories: bool,
    pub require_salesrank: bool,
}

impl Default for FilterPolicy {
    fn default() -> Self {
        Self {
            require_title: true,
            require_group: true,
            require_categories: false,
            require_salesrank: false,
        }
    }
}

impl FilterPolicy {
    pub fn accepts(&self, r: &ProductRecord) -> bool {
        if r.discontinued {
            return false;
        }
        if self.require_title && r.title.as_deref().is_none_or(|t| t.trim().is_empty()) {
            return false;
        }
        if self.require_group && r.group.as_ref().is_none_or(|g| g.as_str().is_empty()) {
            return false;
        }
        if self.require_categories && r.category_paths.is_empty() {
            return false;
        }
        if self.require_salesrank && r.salesrank.is_none_or(|s| s <= 0) {
            return false;
        }
        true
    }
}

/// Drops unusable records under the default policy, preserving order.
pub fn filter_valid<I>(records: I) -> impl Iterator<Item = ProductRecord>
where
    I: IntoIterator<Item = ProductRecord>,
{
    let policy = FilterPolicy::default();
    records.into_iter().filter(move |r| policy.accepts(r))
}
