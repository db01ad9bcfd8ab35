//! HTTP embedding provider.
//!
//! Wire protocol: `POST {endpoint}` with `{"model": <model_id>, "texts":
//! [...]}`; the response is `{"vectors": [[...], ...]}` in request order.
//! The bearer credential, if any, comes from [`TOKEN_ENV`].

use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sted_core::semantic::{EmbeddingProvider, EmbeddingProviderSpec, EmbeddingVector, ProviderError, ProviderKind};

pub const TOKEN_ENV: &str = "STED_PROVIDER_TOKEN";
pub const DEFAULT_MAX_IN_FLIGHT: usize = 8;
pub const DEFAULT_RETRIES: u32 = 3;

#[derive(Serialize)]
struct Request<'a> {
    model: &'a str,
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct Response {
    vectors: Vec<Vec<f64>>,
}

/// Counting semaphore bounding concurrent requests.
#[derive(Debug)]
struct Slots {
    free: Mutex<usize>,
    released: Condvar,
}

impl Slots {
    fn new(n: usize) -> Self {
        Slots { free: Mutex::new(n.max(1)), released: Condvar::new() }
    }

    fn acquire(&self) -> SlotGuard<'_> {
        let mut free = self.free.lock().expect("slot lock");
        while *free == 0 {
            free = self.released.wait(free).expect("slot lock");
        }
        *free -= 1;
        SlotGuard(self)
    }
}

struct SlotGuard<'a>(&'a Slots);

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().expect("slot lock") += 1;
        self.0.released.notify_one();
    }
}

enum Attempt {
    Done(Vec<EmbeddingVector>),
    Retry(String),
    Fail(ProviderError),
}

#[derive(Debug)]
pub struct RemoteProvider {
    spec: EmbeddingProviderSpec,
    endpoint: String,
    agent: ureq::Agent,
    token: Option<String>,
    slots: Slots,
    retries: u32,
    backoff: Duration,
}

impl RemoteProvider {
    /// A provider for `spec`, reading the credential from [`TOKEN_ENV`].
    pub fn new(spec: EmbeddingProviderSpec) -> Result<Self, ProviderError> {
        spec.validate()?;
        if spec.kind != ProviderKind::RemoteHttp {
            return Err(ProviderError::InvalidSpec("provider kind must be remote-http".into()));
        }
        let endpoint = spec.endpoint.clone().unwrap_or_default();
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(spec.timeout_ms)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(RemoteProvider {
            spec,
            endpoint,
            agent,
            token: std::env::var(TOKEN_ENV).ok().filter(|t| !t.is_empty()),
            slots: Slots::new(DEFAULT_MAX_IN_FLIGHT),
            retries: DEFAULT_RETRIES,
            backoff: Duration::from_millis(200),
        })
    }

    pub fn with_token(mut self, token: Option<String>) -> Self {
        self.token = token;
        self
    }

    pub fn with_max_in_flight(mut self, n: usize) -> Self {
        self.slots = Slots::new(n);
        self
    }

    /// Retries after the first attempt, with exponential backoff from `backoff`.
    pub fn with_retries(mut self, retries: u32, backoff: Duration) -> Self {
        self.retries = retries;
        self.backoff = backoff;
        self
    }

    fn attempt(&self, texts: &[&str]) -> Attempt {
        let body = Request { model: self.spec.model_id.as_deref().unwrap_or(""), texts };
        let mut req = self.agent.post(&self.endpoint).header("Content-Type", "application/json");
        if let Some(t) = &self.token {
            req = req.header("Authorization", format!("Bearer {t}"));
        }
        let mut resp = match req.send_json(&body) {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status().as_u16();
        if status == 429 || status >= 500 {
            return Attempt::Retry(format!("HTTP {status}"));
        }
        if status != 200 {
            return Attempt::Fail(ProviderError::Unavailable(format!("HTTP {status} from {}", self.endpoint)));
        }
        let parsed: Response = match resp.body_mut().read_json() {
            Ok(p) => p,
            Err(e) => return Attempt::Fail(ProviderError::Unavailable(format!("malformed response: {e}"))),
        };
        if parsed.vectors.len() != texts.len() {
            return Attempt::Fail(ProviderError::Unavailable(format!(
                "expected {} vectors, got {}",
                texts.len(),
                parsed.vectors.len()
            )));
        }
        let mut out = Vec::with_capacity(texts.len());
        for v in parsed.vectors {
            if v.len() != self.spec.dimension {
                return Attempt::Fail(ProviderError::DimensionMismatch {
                    expected: self.spec.dimension,
                    actual: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Attempt::Fail(ProviderError::Unavailable("non-finite vector component".into()));
            }
            out.push(EmbeddingVector::normalized(&v));
        }
        Attempt::Done(out)
    }

    fn request(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, ProviderError> {
        let _slot = self.slots.acquire();
        let mut last = String::new();
        for attempt in 0..=self.retries {
            if attempt > 0 {
                thread::sleep(self.backoff * 2u32.saturating_pow(attempt - 1));
            }
            match self.attempt(texts) {
                Attempt::Done(v) => return Ok(v),
                Attempt::Fail(e) => return Err(e),
                Attempt::Retry(msg) => last = msg,
            }
        }
        Err(ProviderError::Unavailable(format!(
            "{} failed after {} attempts: {last}",
            self.endpoint,
            self.retries + 1
        )))
    }
}

impl EmbeddingProvider for RemoteProvider {
    fn spec(&self) -> &EmbeddingProviderSpec {
        &self.spec
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, ProviderError> {
        let mut out = Vec::with_capacity(texts.len());
        for chunk in texts.chunks(self.spec.max_batch) {
            out.extend(self.request(chunk)?);
        }
        Ok(out)
    }
}
