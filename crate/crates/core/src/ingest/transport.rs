//! HTTP plumbing: the transport abstraction, a ureq-backed live transport,
//! a fixture transport for tests, rate limiting and retry.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransportError {
    #[error("network error for {url}: {reason}")]
    Network { url: String, reason: String },
    #[error("gave up on {url} after {attempts} attempts: {reason}")]
    RetriesExhausted {
        url: String,
        attempts: u32,
        reason: String,
    },
}

/// A decoded HTTP response. `retry_after` carries the Retry-After header
/// in seconds when the server sent one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
    pub retry_after: Option<u64>,
}

impl HttpResponse {
    pub fn ok(body: impl Into<String>) -> HttpResponse {
        HttpResponse {
            status: 200,
            body: body.into(),
            retry_after: None,
        }
    }

    pub fn status(status: u16, body: impl Into<String>) -> HttpResponse {
        HttpResponse {
            status,
            body: body.into(),
            retry_after: None,
        }
    }
}

/// Blocking GET transport. Implementations return `Ok` for every decoded
/// response regardless of status code; `Err` means the exchange itself
/// failed.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str, headers: &[(&str, &str)]) -> Result<HttpResponse, TransportError>;
}

/// Live transport over ureq. Error statuses are surfaced as responses, not
/// errors, so callers can read error bodies and Retry-After.
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new() -> HttpTransport {
        let config = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(120)))
            .build();
        HttpTransport {
            agent: config.new_agent(),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        HttpTransport::new()
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str, headers: &[(&str, &str)]) -> Result<HttpResponse, TransportError> {
        let mut request = self.agent.get(url);
        for (name, value) in headers {
            request = request.header(*name, *value);
        }
        let mut response = request.call().map_err(|e| TransportError::Network {
            url: url.to_owned(),
            reason: e.to_string(),
        })?;
        let status = response.status().as_u16();
        let retry_after = response
            .headers()
            .get("retry-after")
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.trim().parse::<u64>().ok());
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError::Network {
                url: url.to_owned(),
                reason: e.to_string(),
            })?;
        Ok(HttpResponse {
            status,
            body,
            retry_after,
        })
    }
}

/// Scripted transport: per-URL queues of canned responses, plus a request
/// log with arrival instants so tests can assert pacing. Requesting a URL
/// with no remaining fixture is a network error.
#[derive(Default)]
pub struct FixtureTransport {
    responses: Mutex<BTreeMap<String, VecDeque<HttpResponse>>>,
    log: Mutex<Vec<(Instant, String)>>,
}

impl FixtureTransport {
    pub fn new() -> FixtureTransport {
        FixtureTransport::default()
    }

    /// Queue a response for one exact URL; repeated pushes answer repeated
    /// requests in order.
    pub fn push(&self, url: impl Into<String>, response: HttpResponse) {
        self.responses
            .lock()
            .unwrap()
            .entry(url.into())
            .or_default()
            .push_back(response);
    }

    /// URLs requested so far, in order.
    pub fn requested_urls(&self) -> Vec<String> {
        self.log.lock().unwrap().iter().map(|(_, u)| u.clone()).collect()
    }

    /// Request instants, for rate-limit assertions.
    pub fn request_instants(&self) -> Vec<Instant> {
        self.log.lock().unwrap().iter().map(|(t, _)| *t).collect()
    }

    /// Number of queued responses not yet consumed.
    pub fn remaining(&self) -> usize {
        self.responses.lock().unwrap().values().map(VecDeque::len).sum()
    }
}

impl Transport for FixtureTransport {
    fn get(&self, url: &str, _headers: &[(&str, &str)]) -> Result<HttpResponse, TransportError> {
        self.log.lock().unwrap().push((Instant::now(), url.to_owned()));
        let mut responses = self.responses.lock().unwrap();
        match responses.get_mut(url).and_then(VecDeque::pop_front) {
            Some(response) => Ok(response),
            None => Err(TransportError::Network {
                url: url.to_owned(),
                reason: "no fixture response queued".to_owned(),
            }),
        }
    }
}

/// Enforces a minimum gap between consecutive acquisitions, shared across
/// callers of one endpoint.
pub struct RateLimiter {
    min_gap: Duration,
    last: Mutex<Option<Instant>>,
}

impl RateLimiter {
    pub fn new(min_gap: Duration) -> RateLimiter {
        RateLimiter {
            min_gap,
            last: Mutex::new(None),
        }
    }

    /// Block until the gap since the previous acquisition reaches the
    /// configured minimum.
    pub fn acquire(&self) {
        let mut last = self.last.lock().unwrap();
        if let Some(previous) = *last {
            let elapsed = previous.elapsed();
            if elapsed < self.min_gap {
                std::thread::sleep(self.min_gap - elapsed);
            }
        }
        *last = Some(Instant::now());
    }

    pub fn min_gap(&self) -> Duration {
        self.min_gap
    }
}

/// Exponential backoff schedule for transient failures.
#[derive(Debug, Clone)]
pub struct RetryPolicy {
    /// Total attempts including the first one.
    pub max_attempts: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 4,
            base_delay: Duration::from_secs(1),
            max_delay: Duration::from_secs(60),
        }
    }
}

impl RetryPolicy {
    /// Backoff before retry number `retry` (0-based): base * 2^retry,
    /// capped.
    pub fn delay(&self, retry: u32) -> Duration {
        let factor = 2u32.saturating_pow(retry);
        (self.base_delay * factor).min(self.max_delay)
    }
}

fn transient(status: u16) -> bool {
    status == 429 || (500..=599).contains(&status)
}

/// GET with rate limiting and retry. Responses with status 429 or 5xx are
/// retried (honoring Retry-After when present, otherwise the backoff
/// schedule), as are transport-level failures. Any other status is
/// returned to the caller as-is.
pub fn fetch_with_retry(
    transport: &dyn Transport,
    limiter: &RateLimiter,
    policy: &RetryPolicy,
    url: &str,
    headers: &[(&str, &str)],
) -> Result<HttpResponse, TransportError> {
    let mut last_reason = String::new();
    for attempt in 0..policy.max_attempts {
        limiter.acquire();
        match transport.get(url, headers) {
            Ok(response) if !transient(response.status) => return Ok(response),
            Ok(response) => {
                last_reason = format!("HTTP {}", response.status);
                let delay = response
                    .retry_after
                    .map(Duration::from_secs)
                    .unwrap_or_else(|| policy.delay(attempt))
                    .min(policy.max_delay);
                if attempt + 1 < policy.max_attempts {
                    std::thread::sleep(delay);
                }
            }
            Err(TransportError::Network { reason, .. }) => {
                last_reason = reason;
                if attempt + 1 < policy.max_attempts {
                    std::thread::sleep(policy.delay(attempt));
                }
            }
            Err(other) => return Err(other),
        }
    }
    Err(TransportError::RetriesExhausted {
        url: url.to_owned(),
        attempts: policy.max_attempts,
        reason: last_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast_policy() -> RetryPolicy {
        RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::from_millis(1),
            max_delay: Duration::from_millis(4),
        }
    }

    #[test]
    fn fixture_transport_answers_in_queue_order() {
        let transport = FixtureTransport::new();
        transport.push("http://x/a", HttpResponse::ok("first"));
        transport.push("http://x/a", HttpResponse::ok("second"));
        assert_eq!(transport.get("http://x/a", &[]).unwrap().body, "first");
        assert_eq!(transport.get("http://x/a", &[]).unwrap().body, "second");
        assert!(transport.get("http://x/a", &[]).is_err());
        assert_eq!(transport.requested_urls().len(), 3);
    }

    #[test]
    fn rate_limiter_enforces_minimum_gap() {
        let limiter = RateLimiter::new(Duration::from_millis(20));
        let transport = FixtureTransport::new();
        transport.push("http://x/a", HttpResponse::ok(""));
        transport.push("http://x/a", HttpResponse::ok(""));
        transport.push("http://x/a", HttpResponse::ok(""));
        for _ in 0..3 {
            limiter.acquire();
            let _ = transport.get("http://x/a", &[]);
        }
        let instants = transport.request_instants();
        for pair in instants.windows(2) {
            assert!(pair[1] - pair[0] >= Duration::from_millis(19));
        }
    }

    #[test]
    fn retry_recovers_from_transient_statuses() {
        let transport = FixtureTransport::new();
        transport.push("http://x/a", HttpResponse::status(503, "down"));
        transport.push("http://x/a", HttpResponse::status(429, "slow down"));
        transport.push("http://x/a", HttpResponse::ok("finally"));
        let limiter = RateLimiter::new(Duration::ZERO);
        let response =
            fetch_with_retry(&transport, &limiter, &fast_policy(), "http://x/a", &[]).unwrap();
        assert_eq!(response.body, "finally");
        assert_eq!(transport.requested_urls().len(), 3);
    }

    #[test]
    fn retry_honors_retry_after_seconds() {
        let transport = FixtureTransport::new();
        transport.push(
            "http://x/a",
            HttpResponse {
                status: 429,
                body: String::new(),
                retry_after: Some(0),
            },
        );
        transport.push("http://x/a", HttpResponse::ok("ok"));
        let limiter = RateLimiter::new(Duration::ZERO);
        let response =
            fetch_with_retry(&transport, &limiter, &fast_policy(), "http://x/a", &[]).unwrap();
        assert_eq!(response.status, 200);
    }

    #[test]
    fn retry_gives_up_after_max_attempts() {
        let transport = FixtureTransport::new();
        for _ in 0..3 {
            transport.push("http://x/a", HttpResponse::status(500, ""));
        }
        let limiter = RateLimiter::new(Duration::ZERO);
        let err = fetch_with_retry(&transport, &limiter, &fast_policy(), "http://x/a", &[])
            .unwrap_err();
        assert_eq!(
            err,
            TransportError::RetriesExhausted {
                url: "http://x/a".into(),
                attempts: 3,
                reason: "HTTP 500".into(),
            }
        );
    }

    #[test]
    fn non_transient_statuses_pass_through() {
        let transport = FixtureTransport::new();
        transport.push("http://x/a", HttpResponse::status(404, "nope"));
        let limiter = RateLimiter::new(Duration::ZERO);
        let response =
            fetch_with_retry(&transport, &limiter, &fast_policy(), "http://x/a", &[]).unwrap();
        assert_eq!(response.status, 404);
        assert_eq!(transport.requested_urls().len(), 1);
    }

    #[test]
    fn backoff_doubles_and_caps() {
        let policy = RetryPolicy {
            max_attempts: 10,
            base_delay: Duration::from_millis(100),
            max_delay: Duration::from_millis(350),
        };
        assert_eq!(policy.delay(0), Duration::from_millis(100));
        assert_eq!(policy.delay(1), Duration::from_millis(200));
        assert_eq!(policy.delay(2), Duration::from_millis(350));
        assert_eq!(policy.delay(9), Duration::from_millis(350));
    }
}
