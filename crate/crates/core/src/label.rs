use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// The suffix used for the partner of a named arc, as in `k` / `k†`.
pub const DAGGER: char = '†';

/// A user-facing identifier for an arc or a vertex.
///
/// Labels are ordered "naturally": maximal digit runs compare as numbers, so
/// `2 < 10` and `k < k†`. Every canonical listing in the crate follows this
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `k` becomes `k†`.
    pub fn daggered(&self) -> Label {
        let mut s = self.0.clone();
        s.push(DAGGER);
        Label(s)
    }

    pub fn is_daggered(&self) -> bool {
        self.0.ends_with(DAGGER)
    }

    /// Namespaced label `prefix.self`, used for graphs assembled from parts.
    pub fn namespaced(&self, prefix: &Label) -> Label {
        Label(format!("{}.{}", prefix.0, self.0))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_owned())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(s)
    }
}

impl From<usize> for Label {
    fn from(n: usize) -> Self {
        Label(n.to_string())
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Token<'a> {
    Number(u128, usize),
    Text(&'a str),
}

fn tokens(s: &str) -> impl Iterator<Item = Token<'_>> {
    let mut rest = s;
    std::iter::from_fn(move || {
        let first = rest.chars().next()?;
        let digit = first.is_ascii_digit();
        let end = rest
            .char_indices()
            .find(|(_, c)| c.is_ascii_digit() != digit)
            .map_or(rest.len(), |(i, _)| i);
        let (run, tail) = rest.split_at(end);
        rest = tail;
        Some(match run.parse::<u128>() {
            Ok(n) if digit => Token::Number(n, run.len()),
            _ => Token::Text(run),
        })
    })
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        tokens(&self.0)
            .cmp(tokens(&other.0))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Returns `base` if it is not taken, otherwise `base'`, `base''`, ...
pub(crate) fn fresh_label(base: Label, taken: impl Fn(&Label) -> bool) -> Label {
    let mut candidate = base;
    while taken(&candidate) {
        candidate.0.push('\'');
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(xs: &[&str]) -> Vec<String> {
        let mut v: Vec<Label> = xs.iter().map(|&s| Label::from(s)).collect();
        v.sort();
        v.into_iter().map(|l| l.0).collect()
    }

    #[test]
    fn natural_order() {
        assert_eq!(
            sorted(&["10", "1†", "2", "0", "1", "0†"]),
            vec!["0", "0†", "1", "1†", "2", "10"]
        );
        assert_eq!(sorted(&["v.10", "v.9", "a"]), vec!["a", "v.9", "v.10"]);
    }

    #[test]
    fn dagger_round() {
        let k = Label::from("3");
        assert!(k.daggered().is_daggered());
        assert_eq!(k.daggered().as_str(), "3†");
    }

    #[test]
    fn fresh_labels_avoid_collisions() {
        let taken = ["x", "x'"];
        let l = fresh_label(Label::from("x"), |c| taken.contains(&c.as_str()));
        assert_eq!(l.as_str(), "x''");
    }
}
