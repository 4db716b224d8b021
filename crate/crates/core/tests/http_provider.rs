//! Tests for the HTTP paraphrase provider against a minimal local stub.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use cespan::{
    augment, parse_tagged, serialize_tagged, splice_span, AugmentError, HttpParaphraseProvider,
    HttpProviderConfig, ParaphraseProvider, ParaphraseRequest, SpliceTarget,
};

/// One canned exchange: inspect the request body, produce a response.
type Responder = Box<dyn Fn(usize, &str) -> String + Send + Sync>;

/// Spawns a single-threaded HTTP/1.1 stub that serves `expected` requests
/// sequentially and then shuts down. Returns its base endpoint.
fn spawn_stub(expected: usize, responder: Responder) -> (String, std::thread::JoinHandle<()>) {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub listener");
    let endpoint = format!("http://{}", listener.local_addr().unwrap());
    let handle = std::thread::spawn(move || {
        for call in 0..expected {
            let (mut stream, _) = listener.accept().expect("accept");
            let body = read_request_body(&mut stream);
            let response = responder(call, &body);
            stream
                .write_all(response.as_bytes())
                .expect("write response");
        }
    });
    (endpoint, handle)
}

fn read_request_body(stream: &mut TcpStream) -> String {
    stream
        .set_read_timeout(Some(Duration::from_secs(5)))
        .unwrap();
    let mut raw = Vec::new();
    let mut buffer = [0u8; 4096];
    let (header_end, content_length) = loop {
        let read = stream.read(&mut buffer).expect("read request");
        assert!(read > 0, "client closed before full request");
        raw.extend_from_slice(&buffer[..read]);
        if let Some(pos) = find_header_end(&raw) {
            let headers = String::from_utf8_lossy(&raw[..pos]);
            let length = headers
                .lines()
                .find_map(|line| {
                    let (name, value) = line.split_once(':')?;
                    name.eq_ignore_ascii_case("content-length")
                        .then(|| value.trim().parse::<usize>().ok())?
                })
                .unwrap_or(0);
            break (pos + 4, length);
        }
    };
    while raw.len() < header_end + content_length {
        let read = stream.read(&mut buffer).expect("read body");
        assert!(read > 0, "client closed mid-body");
        raw.extend_from_slice(&buffer[..read]);
    }
    String::from_utf8_lossy(&raw[header_end..header_end + content_length]).into_owned()
}

fn find_header_end(raw: &[u8]) -> Option<usize> {
    raw.windows(4).position(|w| w == b"\r\n\r\n")
}

fn json_response(body: &str) -> String {
    format!(
        "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
        body.len()
    )
}

fn error_response(status: &str) -> String {
    format!("HTTP/1.1 {status}\r\ncontent-length: 0\r\nconnection: close\r\n\r\n")
}

fn provider_for(endpoint: &str) -> HttpParaphraseProvider {
    let config = HttpProviderConfig::new(endpoint)
        .with_timeout(Duration::from_secs(5))
        .with_retries(2)
        .with_retry_delay(Duration::from_millis(10));
    HttpParaphraseProvider::new(config).unwrap()
}

#[test]
fn http_provider_round_trips_request_and_response() {
    let (endpoint, handle) = spawn_stub(
        1,
        Box::new(|_, body| {
            let request: serde_json::Value = serde_json::from_str(body).unwrap();
            assert_eq!(request["text"], "their demands were not met");
            assert_eq!(request["num_return_sequences"], 2);
            json_response(r#"{"paraphrases": ["their demands weren't met", "demands were unmet"]}"#)
        }),
    );
    let provider = provider_for(&endpoint);
    let got = provider
        .paraphrase(&ParaphraseRequest {
            span_text: "their demands were not met".into(),
            count: 2,
        })
        .unwrap();
    assert_eq!(got, ["their demands weren't met", "demands were unmet"]);
    handle.join().unwrap();
}

#[test]
fn http_provider_retries_transient_server_errors() {
    let calls = Arc::new(AtomicUsize::new(0));
    let seen = Arc::clone(&calls);
    let (endpoint, handle) = spawn_stub(
        2,
        Box::new(move |call, _| {
            seen.fetch_add(1, Ordering::SeqCst);
            if call == 0 {
                error_response("503 Service Unavailable")
            } else {
                json_response(r#"{"paraphrases": ["ok"]}"#)
            }
        }),
    );
    let provider = provider_for(&endpoint);
    let got = provider
        .paraphrase(&ParaphraseRequest {
            span_text: "x".into(),
            count: 1,
        })
        .unwrap();
    assert_eq!(got, ["ok"]);
    assert_eq!(calls.load(Ordering::SeqCst), 2);
    handle.join().unwrap();
}

#[test]
fn http_provider_fails_fast_on_client_errors() {
    let (endpoint, handle) = spawn_stub(1, Box::new(|_, _| error_response("404 Not Found")));
    let provider = provider_for(&endpoint);
    let err = provider
        .paraphrase(&ParaphraseRequest {
            span_text: "x".into(),
            count: 1,
        })
        .unwrap_err();
    assert!(matches!(err, AugmentError::Provider { .. }), "{err}");
    handle.join().unwrap();
}

#[test]
fn http_provider_reports_malformed_bodies() {
    let (endpoint, handle) = spawn_stub(1, Box::new(|_, _| json_response(r#"{"nope": 1}"#)));
    let provider = provider_for(&endpoint);
    let err = provider
        .paraphrase(&ParaphraseRequest {
            span_text: "x".into(),
            count: 1,
        })
        .unwrap_err();
    assert!(matches!(err, AugmentError::Provider { .. }), "{err}");
    handle.join().unwrap();
}

#[test]
fn augment_through_http_equals_direct_splicing() {
    let relation = parse_tagged("<ARG0>a b</ARG0> <SIG>so</SIG> <ARG1>c d e</ARG1>").unwrap();
    let (endpoint, handle) = spawn_stub(
        2,
        Box::new(|_, body| {
            let request: serde_json::Value = serde_json::from_str(body).unwrap();
            let text = request["text"].as_str().unwrap();
            let first = format!("{text} one");
            let second = format!("{text} two more");
            json_response(&serde_json::json!({ "paraphrases": [first, second] }).to_string())
        }),
    );
    let provider = provider_for(&endpoint);
    let via_http = augment(&relation, &provider, 2).unwrap();
    handle.join().unwrap();

    // The stub's outputs are deterministic; splice them by hand.
    let cause = relation.cause_text();
    let effect = relation.effect_text();
    let mut expected = Vec::new();
    for cause_text in [format!("{cause} one"), format!("{cause} two more")] {
        let with_cause = splice_span(&relation, SpliceTarget::Cause, &cause_text).unwrap();
        for effect_text in [format!("{effect} one"), format!("{effect} two more")] {
            expected.push(splice_span(&with_cause, SpliceTarget::Effect, &effect_text).unwrap());
        }
    }
    assert_eq!(via_http.len(), expected.len());
    for (got, want) in via_http.iter().zip(&expected) {
        assert_eq!(got, want);
        assert_eq!(serialize_tagged(got), serialize_tagged(want));
    }
}

#[test]
fn wrong_count_from_service_is_a_contract_failure() {
    let relation = parse_tagged("<ARG0>a</ARG0> <ARG1>b</ARG1>").unwrap();
    let (endpoint, handle) = spawn_stub(
        1,
        Box::new(|_, _| json_response(r#"{"paraphrases": ["only one"]}"#)),
    );
    let provider = provider_for(&endpoint);
    let err = augment(&relation, &provider, 3).unwrap_err();
    assert!(
        matches!(
            err,
            AugmentError::CountMismatch {
                expected: 3,
                got: 1,
                ..
            }
        ),
        "{err}"
    );
    handle.join().unwrap();
}
