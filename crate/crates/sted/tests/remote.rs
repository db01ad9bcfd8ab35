use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use serde_json::{json, Value};
use sted::remote::RemoteProvider;
use sted_core::prelude::*;
use sted_core::semantic::{EmbeddingProviderSpec, ProviderError};

#[derive(Debug, Clone)]
struct Seen {
    auth: Option<String>,
    body: Value,
}

/// Serves each request with `respond(attempt, body) -> (status, body)` and
/// records what it saw.
fn serve(respond: impl Fn(usize, &Value) -> (u16, String) + Send + 'static) -> (String, Arc<Mutex<Vec<Seen>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&seen);
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut auth = None;
            let mut length = 0;
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                    break;
                }
                let lower = line.to_ascii_lowercase();
                if let Some(v) = lower.strip_prefix("content-length:") {
                    length = v.trim().parse().unwrap();
                }
                if lower.starts_with("authorization:") {
                    auth = Some(line["authorization:".len()..].trim().to_string());
                }
            }
            let mut body = vec![0; length];
            reader.read_exact(&mut body).unwrap();
            let body: Value = serde_json::from_slice(&body).unwrap_or(Value::Null);
            let attempt = {
                let mut log = log.lock().unwrap();
                log.push(Seen { auth, body: body.clone() });
                log.len() - 1
            };
            let (status, text) = respond(attempt, &body);
            let _ = write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{text}",
                text.len()
            );
        }
    });
    (format!("http://{addr}/embed"), seen)
}

fn spec(endpoint: &str, dimension: usize) -> EmbeddingProviderSpec {
    serde_json::from_value(json!({
        "provider_id": "mock",
        "kind": "remote-http",
        "endpoint": endpoint,
        "model_id": "mock-model",
        "dimension": dimension,
        "timeout_ms": 2000,
        "max_batch": 2
    }))
    .unwrap()
}

fn vectors_for(body: &Value, dim: usize) -> String {
    let n = body["texts"].as_array().map_or(0, Vec::len);
    let vs: Vec<Vec<f64>> = (0..n).map(|i| (0..dim).map(|j| if j == i % dim { 3.0 } else { 0.0 }).collect()).collect();
    json!({ "vectors": vs }).to_string()
}

fn provider(endpoint: &str, dim: usize) -> RemoteProvider {
    RemoteProvider::new(spec(endpoint, dim)).unwrap().with_token(None).with_retries(2, Duration::from_millis(1))
}

#[test]
fn batches_and_normalizes() {
    let (url, seen) = serve(|_, body| (200, vectors_for(body, 4)));
    let p = provider(&url, 4).with_token(Some("secret".into()));
    let out = p.embed_batch(&["a", "b", "c"]).unwrap();
    assert_eq!(out.len(), 3);
    assert!(out.iter().all(|v| (v.norm() - 1.0).abs() < 1e-6));
    let seen = seen.lock().unwrap();
    assert_eq!(seen.len(), 2);
    assert_eq!(seen[0].body, json!({"model": "mock-model", "texts": ["a", "b"]}));
    assert_eq!(seen[1].body["texts"], json!(["c"]));
    assert_eq!(seen[0].auth.as_deref(), Some("Bearer secret"));
}

#[test]
fn no_credential_no_header() {
    let (url, seen) = serve(|_, body| (200, vectors_for(body, 4)));
    provider(&url, 4).embed_batch(&["a"]).unwrap();
    assert!(seen.lock().unwrap()[0].auth.is_none());
}

#[test]
fn dimension_mismatch_fails_without_retry() {
    let (url, seen) = serve(|_, body| (200, vectors_for(body, 3)));
    let err = provider(&url, 4).embed_batch(&["a"]).unwrap_err();
    assert_eq!(err, ProviderError::DimensionMismatch { expected: 4, actual: 3 });
    assert_eq!(seen.lock().unwrap().len(), 1);
}

#[test]
fn server_errors_are_retried_then_reported() {
    let (url, seen) = serve(|_, _| (500, "{}".into()));
    let err = provider(&url, 4).embed_batch(&["a"]).unwrap_err();
    assert!(matches!(err, ProviderError::Unavailable(ref m) if m.contains("3 attempts")), "{err}");
    assert_eq!(seen.lock().unwrap().len(), 3);
}

#[test]
fn transient_failure_recovers() {
    let (url, seen) = serve(|attempt, body| if attempt == 0 { (429, "{}".into()) } else { (200, vectors_for(body, 4)) });
    assert_eq!(provider(&url, 4).embed_batch(&["a"]).unwrap().len(), 1);
    assert_eq!(seen.lock().unwrap().len(), 2);
}

#[test]
fn client_errors_and_bad_payloads_fail_fast() {
    let (url, seen) = serve(|_, _| (400, "{}".into()));
    assert!(provider(&url, 4).embed_batch(&["a"]).is_err());
    assert_eq!(seen.lock().unwrap().len(), 1);

    let (url, _) = serve(|_, _| (200, "not json".into()));
    assert!(matches!(provider(&url, 4).embed_batch(&["a"]), Err(ProviderError::Unavailable(_))));

    let (url, _) = serve(|_, _| (200, json!({"vectors": []}).to_string()));
    assert!(matches!(provider(&url, 4).embed_batch(&["a"]), Err(ProviderError::Unavailable(_))));
}

#[test]
fn unreachable_endpoint_surfaces_as_provider_error() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let p = provider(&format!("http://127.0.0.1:{port}/embed"), 4);
    let ctx = EmbeddingContext::new(&p);
    let a = parse_document(r#"{"name": "x"}"#).unwrap();
    let err = sted_score(&a, &a.clone(), &StedConfig::default(), &ctx);
    // Identical documents still need label embeddings.
    assert!(matches!(
        err,
        Err(sted_core::sted::StedError::Similarity(sted_core::semantic::SimilarityError::Provider(_)))
    ));
}

#[test]
fn rejects_local_spec() {
    assert!(RemoteProvider::new(EmbeddingProviderSpec::deterministic_local()).is_err());
}
