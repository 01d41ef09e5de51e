//! Web-domain vote: an institution is academic when one of the top three
//! search results sits under an `edu`, `ac` or `gov` domain label.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use url::Url;

use super::Vote;

#[derive(Debug, thiserror::Error)]
pub enum ResolverError {
    #[error("no results recorded for query {0:?}")]
    Missing(String),
    #[error("resolver I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("resolver file: {0}")]
    Format(#[from] serde_json::Error),
}

/// Returns ordered result URLs for a search query.
pub trait WebResolver: Send + Sync {
    fn search(&self, query: &str) -> Result<Vec<String>, ResolverError>;
}

/// File-backed fixture: a JSON object mapping query → ordered URL list.
#[derive(Debug, Clone, Default)]
pub struct FixtureResolver {
    results: BTreeMap<String, Vec<String>>,
}

impl FixtureResolver {
    pub fn new(results: BTreeMap<String, Vec<String>>) -> Self {
        FixtureResolver { results }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, ResolverError> {
        Ok(FixtureResolver::new(serde_json::from_slice(bytes)?))
    }

    pub fn load(path: &Path) -> Result<Self, ResolverError> {
        Self::from_json(&std::fs::read(path)?)
    }
}

impl WebResolver for FixtureResolver {
    fn search(&self, query: &str) -> Result<Vec<String>, ResolverError> {
        self.results
            .get(query)
            .cloned()
            .ok_or_else(|| ResolverError::Missing(query.to_string()))
    }
}

/// Persistent cache in front of another resolver. Hits never reach the inner
/// resolver; misses are stored and written back by [`CachedResolver::flush`].
pub struct CachedResolver<R> {
    inner: R,
    path: PathBuf,
    cache: Mutex<BTreeMap<String, Vec<String>>>,
}

impl<R: WebResolver> CachedResolver<R> {
    pub fn open(inner: R, path: impl Into<PathBuf>) -> Result<Self, ResolverError> {
        let path = path.into();
        let cache = if path.exists() {
            serde_json::from_slice(&std::fs::read(&path)?)?
        } else {
            BTreeMap::new()
        };
        Ok(CachedResolver {
            inner,
            path,
            cache: Mutex::new(cache),
        })
    }

    pub fn flush(&self) -> Result<(), ResolverError> {
        let cache = self.cache.lock().expect("resolver cache lock");
        let tmp = self.path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(&*cache)?)?;
        std::fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}

impl<R: WebResolver> WebResolver for CachedResolver<R> {
    fn search(&self, query: &str) -> Result<Vec<String>, ResolverError> {
        if let Some(hit) = self.cache.lock().expect("resolver cache lock").get(query) {
            return Ok(hit.clone());
        }
        let fresh = self.inner.search(query)?;
        self.cache
            .lock()
            .expect("resolver cache lock")
            .insert(query.to_string(), fresh.clone());
        Ok(fresh)
    }
}

const ACADEMIC_LABELS: [&str; 3] = ["edu", "ac", "gov"];

fn is_academic_url(u: &str) -> bool {
    let Ok(parsed) = Url::parse(u) else {
        return false;
    };
    parsed.host_str().is_some_and(|host| {
        host.split('.')
            .any(|label| ACADEMIC_LABELS.iter().any(|a| label.eq_ignore_ascii_case(a)))
    })
}

/// Queries the resolver with the cleaned string and inspects at most three
/// results. Resolver failure abstains.
pub fn domain_classify(cleaned: &str, resolver: &dyn WebResolver) -> Vote {
    match resolver.search(cleaned) {
        Ok(urls) => {
            if urls.iter().take(3).any(|u| is_academic_url(u)) {
                Vote::Academia
            } else {
                Vote::Industry
            }
        }
        Err(e) => {
            log::debug!("domain vote abstains for {cleaned:?}: {e}");
            Vote::Abstain
        }
    }
}
