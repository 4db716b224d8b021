//! HTTP client for an external paraphrase service.
//!
//! Wire format: `POST {endpoint}/paraphrase` with body
//! `{"text": string, "num_return_sequences": integer}`; the service replies
//! `{"paraphrases": [string, …]}` with exactly the requested count. Any
//! non-200 status or unparseable body is a provider failure. Timeouts,
//! connection errors, and 5xx responses are retried a bounded number of
//! times before giving up.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{AugmentError, ParaphraseProvider, ParaphraseRequest};

/// Connection settings for [`HttpParaphraseProvider`].
#[derive(Debug, Clone)]
pub struct HttpProviderConfig {
    /// Base URL of the service; requests go to `{endpoint}/paraphrase`.
    pub endpoint: String,
    /// Per-request timeout.
    pub timeout: Duration,
    /// Additional attempts after a transient failure (timeout, connection
    /// error, or 5xx status).
    pub retries: u32,
    /// Pause before each retry.
    pub retry_delay: Duration,
}

impl HttpProviderConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            timeout: Duration::from_secs(30),
            retries: 2,
            retry_delay: Duration::from_millis(200),
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_retries(mut self, retries: u32) -> Self {
        self.retries = retries;
        self
    }

    pub fn with_retry_delay(mut self, delay: Duration) -> Self {
        self.retry_delay = delay;
        self
    }
}

#[derive(Serialize)]
struct WireRequest<'a> {
    text: &'a str,
    num_return_sequences: usize,
}

#[derive(Deserialize)]
struct WireResponse {
    paraphrases: Vec<String>,
}

enum CallFailure {
    Transient(String),
    Fatal(String),
}

/// Paraphrase provider backed by an HTTP service. The client is `Send +
/// Sync`; share one instance across worker threads to bound concurrency at
/// the call-site pool size.
pub struct HttpParaphraseProvider {
    client: reqwest::blocking::Client,
    url: String,
    retries: u32,
    retry_delay: Duration,
}

impl HttpParaphraseProvider {
    pub fn new(config: HttpProviderConfig) -> Result<Self, AugmentError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| AugmentError::ProviderSetup {
                message: e.to_string(),
            })?;
        let url = format!("{}/paraphrase", config.endpoint.trim_end_matches('/'));
        Ok(Self {
            client,
            url,
            retries: config.retries,
            retry_delay: config.retry_delay,
        })
    }

    fn call_once(&self, request: &ParaphraseRequest) -> Result<Vec<String>, CallFailure> {
        let body = WireRequest {
            text: &request.span_text,
            num_return_sequences: request.count,
        };
        let response = self
            .client
            .post(&self.url)
            .json(&body)
            .send()
            .map_err(|e| CallFailure::Transient(format!("request failed: {e}")))?;
        let status = response.status();
        if status.is_server_error() {
            return Err(CallFailure::Transient(format!("server error: {status}")));
        }
        if !status.is_success() {
            return Err(CallFailure::Fatal(format!("unexpected status: {status}")));
        }
        let parsed: WireResponse = response
            .json()
            .map_err(|e| CallFailure::Fatal(format!("malformed response body: {e}")))?;
        Ok(parsed.paraphrases)
    }
}

impl ParaphraseProvider for HttpParaphraseProvider {
    fn paraphrase(&self, request: &ParaphraseRequest) -> Result<Vec<String>, AugmentError> {
        let mut last_failure = String::new();
        for attempt in 0..=self.retries {
            if attempt > 0 {
                std::thread::sleep(self.retry_delay);
            }
            match self.call_once(request) {
                Ok(paraphrases) => return Ok(paraphrases),
                Err(CallFailure::Transient(message)) => last_failure = message,
                Err(CallFailure::Fatal(message)) => {
                    return Err(AugmentError::Provider {
                        span_text: request.span_text.clone(),
                        count: request.count,
                        message,
                    })
                }
            }
        }
        Err(AugmentError::Provider {
            span_text: request.span_text.clone(),
            count: request.count,
            message: format!(
                "giving up after {} attempts: {last_failure}",
                self.retries + 1
            ),
        })
    }
}
