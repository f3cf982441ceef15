use serde::{Deserialize, Serialize};

/// Outcome of one named identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, pass: bool) -> Self {
        Check {
            id: id.into(),
            pass,
            detail: None,
        }
    }

    /// An empty `detail` is dropped.
    pub fn with_detail(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        Check {
            id: id.into(),
            pass,
            detail: (!detail.is_empty()).then_some(detail),
        }
    }
}

/// Ordered list of checks with lookup by id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks(pub Vec<Check>);

impl Checks {
    pub fn new() -> Self {
        Checks(Vec::new())
    }

    pub fn push(&mut self, check: Check) {
        self.0.push(check);
    }

    pub fn record(&mut self, id: impl Into<String>, pass: bool) {
        self.0.push(Check::new(id, pass));
    }

    pub fn record_detail(&mut self, id: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.0.push(Check::with_detail(id, pass, detail));
    }

    pub fn extend(&mut self, other: Checks) {
        self.0.extend(other.0);
    }

    pub fn all_pass(&self) -> bool {
        self.0.iter().all(|c| c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.0.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.0.iter().filter(|c| !c.pass)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Check> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
