//! Weighted inverted index with ranked retrieval.
//!
//! Each term maps to a posting list from document id to weight, augmented
//! with the maximum weight so the heaviest documents are found by descent.
//! Weights must be finite and nonnegative: zero is the identity of the max.

use std::cmp::Ordering;

use augmap::{AugMap, AugSpec, Plain};
use thiserror::Error;

pub type DocId = u64;

pub struct Posting;

impl AugSpec for Posting {
    type Key = DocId;
    type Value = f64;
    type Aug = f64;

    fn compare(a: &DocId, b: &DocId) -> Ordering {
        a.cmp(b)
    }
    fn base(_: &DocId, w: &f64) -> f64 {
        *w
    }
    fn combine(a: &f64, b: &f64) -> f64 {
        a.max(*b)
    }
    fn identity() -> f64 {
        0.0
    }
}

pub type PostingList = AugMap<Posting>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IndexError {
    #[error("weight {weight} for term {term:?}, document {doc} is not finite and nonnegative")]
    InvalidWeight { term: String, doc: DocId, weight: f64 },
}

fn add(a: &f64, b: &f64) -> f64 {
    a + b
}

#[derive(Clone, Default)]
pub struct InvertedIndex {
    terms: AugMap<Plain<String, PostingList>>,
}

impl InvertedIndex {
    /// Groups `(term, doc, weight)` triples by term. Repeated `(term, doc)`
    /// pairs have their weights added.
    pub fn build(mut triples: Vec<(String, DocId, f64)>) -> Result<Self, IndexError> {
        if let Some((term, doc, weight)) = triples.iter().find(|t| !(t.2.is_finite() && t.2 >= 0.0)) {
            return Err(IndexError::InvalidWeight { term: term.clone(), doc: *doc, weight: *weight });
        }
        triples.sort_by(|a, b| a.0.cmp(&b.0));
        let mut lists = Vec::new();
        let mut rest = &mut triples[..];
        while let Some(first) = rest.first() {
            let len = rest.iter().take_while(|t| t.0 == first.0).count();
            let (group, tail) = rest.split_at_mut(len);
            let term = std::mem::take(&mut group[0].0);
            let postings = group.iter().map(|t| (t.1, t.2)).collect();
            lists.push((term, PostingList::build(postings, add)));
            rest = tail;
        }
        Ok(Self { terms: AugMap::from_sorted(lists) })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn postings(&self, term: &str) -> Option<&PostingList> {
        self.terms.find(&term.to_owned())
    }

    /// Posting list of `term`, empty when the term is absent.
    pub fn term(&self, term: &str) -> PostingList {
        self.postings(term).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = &String> {
        self.terms.keys()
    }
}

impl std::fmt::Debug for InvertedIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(t, p)| (t, p.to_vec()))).finish()
    }
}

/// Documents in both lists, weights added.
pub fn q_and(a: &PostingList, b: &PostingList) -> PostingList {
    a.intersect(b, add)
}

/// Documents in either list, weights added on shared documents.
pub fn q_or(a: &PostingList, b: &PostingList) -> PostingList {
    a.union(b, add)
}

/// Documents of `a` absent from `b`.
pub fn q_and_not(a: &PostingList, b: &PostingList) -> PostingList {
    a.difference(b)
}

/// The `k` heaviest documents in non-increasing weight order; equal weights
/// come out by ascending document id.
pub fn top_k(p: &PostingList, k: usize) -> Vec<(DocId, f64)> {
    let mut work = p.clone();
    let mut out = Vec::with_capacity(k.min(p.len()));
    while out.len() < k && !work.is_empty() {
        let best = work.aug_val();
        let (&doc, &w) = work.aug_find(|a| *a >= best).expect("root aug is attained by some entry");
        out.push((doc, w));
        work.delete_mut(&doc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(entries: &[(DocId, f64)]) -> PostingList {
        entries.iter().copied().collect()
    }

    fn t(term: &str, doc: DocId, w: f64) -> (String, DocId, f64) {
        (term.to_owned(), doc, w)
    }

    #[test]
    fn build_examples() {
        assert!(InvertedIndex::build(vec![]).unwrap().is_empty());
        let ix = InvertedIndex::build(vec![t("a", 1, 0.5), t("a", 2, 0.7), t("b", 1, 0.2)]).unwrap();
        assert_eq!(ix.term("a").to_vec(), vec![(1, 0.5), (2, 0.7)]);
        assert_eq!(ix.term("a").aug_val(), 0.7);
        assert_eq!(ix.term("b").to_vec(), vec![(1, 0.2)]);
        assert!(ix.term("c").is_empty());
        assert_eq!(ix.terms().cloned().collect::<Vec<_>>(), vec!["a", "b"]);

        let ix = InvertedIndex::build(vec![t("a", 1, 0.25), t("a", 1, 0.5)]).unwrap();
        assert_eq!(ix.term("a").to_vec(), vec![(1, 0.75)]);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(InvertedIndex::build(vec![t("a", 1, -1.0)]).is_err());
        assert!(InvertedIndex::build(vec![t("a", 1, f64::NAN)]).is_err());
    }

    #[test]
    fn query_examples() {
        let p = list(&[(1, 0.5), (2, 0.75)]);
        assert_eq!(q_or(&p, &PostingList::new()).to_vec(), p.to_vec());
        let q = list(&[(2, 0.125), (3, 0.875)]);
        assert_eq!(q_and(&p, &q).to_vec(), vec![(2, 0.875)]);
        assert_eq!(q_or(&p, &q).to_vec(), vec![(1, 0.5), (2, 0.875), (3, 0.875)]);
        assert!(q_and_not(&p, &p).is_empty());
        assert_eq!(q_and_not(&p, &q).to_vec(), vec![(1, 0.5)]);
        assert_eq!(p.to_vec(), vec![(1, 0.5), (2, 0.75)]);
    }

    #[test]
    fn top_k_examples() {
        assert!(top_k(&PostingList::new(), 5).is_empty());
        let p = list(&[(4, 0.5), (1, 0.9), (3, 0.5), (2, 0.1)]);
        assert_eq!(top_k(&p, 2), vec![(1, 0.9), (3, 0.5)]);
        assert_eq!(top_k(&p, 10), vec![(1, 0.9), (3, 0.5), (4, 0.5), (2, 0.1)]);
        assert_eq!(top_k(&p, 0), vec![]);
        assert_eq!(p.len(), 4);
    }
}
