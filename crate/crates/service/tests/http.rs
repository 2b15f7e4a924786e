use std::collections::BTreeSet;
use std::net::SocketAddr;
use std::sync::Arc;

use errata_core::collection::{distribution, parse_collection, validate_records};
use errata_core::{ErrorCode, LabelVector};
use errata_service::{
    open_service, Ack, ErrorBody, Progress, ServiceConfig, TaskView, ITEMS_HEADER,
};
use serde_json::json;

fn start(dir: &std::path::Path, annotators: &[&str], n_items: usize, probe_rate: f64) -> SocketAddr {
    let mut items = format!("{ITEMS_HEADER}\n");
    for i in 0..n_items {
        items.push_str(&format!("item-{i:02},src-{},run-0,\"Source {i}, long.\",Simple {i}.\n", i / 5));
    }
    std::fs::write(dir.join("items.csv"), items).unwrap();
    let cfg = ServiceConfig {
        port: 0,
        data_path: dir.join("events.jsonl"),
        items_path: dir.join("items.csv"),
        probe_rate,
        shared_pool_size: n_items,
        rater_count: 1,
        seed: 11,
        annotators: annotators.iter().map(|s| s.to_string()).collect(),
    };
    let svc = Arc::new(open_service(cfg).unwrap());
    let std_listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = std_listener.local_addr().unwrap();
    std_listener.set_nonblocking(true).unwrap();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Builder::new_current_thread()
            .enable_all()
            .build()
            .unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::from_std(std_listener).unwrap();
            errata_service::serve(listener, svc).await.unwrap();
        });
    });
    addr
}

fn agent() -> ureq::Agent {
    ureq::Agent::config_builder()
        .http_status_as_error(false)
        .build()
        .into()
}

fn next(agent: &ureq::Agent, addr: SocketAddr, annotator: &str) -> Option<TaskView> {
    let mut resp = agent
        .get(format!("http://{addr}/api/task/next"))
        .query("annotator", annotator)
        .call()
        .unwrap();
    match resp.status().as_u16() {
        200 => Some(resp.body_mut().read_json().unwrap()),
        204 => None,
        s => panic!("unexpected status {s}"),
    }
}

fn submit(agent: &ureq::Agent, addr: SocketAddr, body: serde_json::Value) -> (u16, String) {
    let mut resp = agent
        .post(format!("http://{addr}/api/submit"))
        .send_json(&body)
        .unwrap();
    (resp.status().as_u16(), resp.body_mut().read_to_string().unwrap())
}

fn export(agent: &ureq::Agent, addr: SocketAddr) -> String {
    let mut resp = agent.get(format!("http://{addr}/api/export")).call().unwrap();
    assert_eq!(resp.status().as_u16(), 200);
    assert!(resp
        .headers()
        .get("content-type")
        .unwrap()
        .to_str()
        .unwrap()
        .starts_with("text/csv"));
    resp.body_mut().read_to_string().unwrap()
}

fn labels_for(task: &TaskView) -> LabelVector {
    // Deterministic in the shown text, so a probe gets the same labels as
    // its original.
    if task.simplified_text.len().is_multiple_of(2) {
        LabelVector::no_error()
    } else {
        LabelVector::with_codes(&[ErrorCode::D2_1])
    }
}

#[test]
fn status_codes() {
    let dir = tempfile::tempdir().unwrap();
    let addr = start(dir.path(), &["A", "B"], 3, 0.0);
    let agent = agent();

    let resp = agent
        .get(format!("http://{addr}/api/task/next"))
        .query("annotator", "nobody")
        .call()
        .unwrap();
    assert_eq!(resp.status().as_u16(), 404);

    let task = next(&agent, addr, "A").unwrap();
    let raw: serde_json::Value = serde_json::to_value(&task).unwrap();
    assert!(raw.get("item_id").is_none());

    let (status, body) = submit(
        &agent,
        addr,
        json!({"task_id": task.task_id, "annotator_id": "A",
               "labels": {"no_error": true, "flags": {"A1": true}}}),
    );
    assert_eq!(status, 422);
    let err: ErrorBody = serde_json::from_str(&body).unwrap();
    assert_eq!(err.reasons[0].field, "labels.flags.A1");

    let (status, _) = submit(
        &agent,
        addr,
        json!({"task_id": task.task_id, "annotator_id": "B", "labels": {"no_error": true}}),
    );
    assert_eq!(status, 403);

    let (status, _) = submit(
        &agent,
        addr,
        json!({"task_id": "A-9999", "annotator_id": "A", "labels": {"no_error": true}}),
    );
    assert_eq!(status, 404);

    let (status, body) = submit(
        &agent,
        addr,
        json!({"task_id": task.task_id, "annotator_id": "A", "labels": {"no_error": true}}),
    );
    assert_eq!(status, 200, "{body}");
    let ack: Ack = serde_json::from_str(&body).unwrap();
    assert!(ack.accepted && !ack.supersedes);

    let mut resp = agent
        .get(format!("http://{addr}/api/progress"))
        .query("annotator", "A")
        .call()
        .unwrap();
    let p: Progress = resp.body_mut().read_json().unwrap();
    assert_eq!((p.total, p.issued, p.submitted), (3, 1, 1));

    let mut resp = agent.get(format!("http://{addr}/api/taxonomy")).call().unwrap();
    assert_eq!(resp.status().as_u16(), 200);
    let tax: serde_json::Value = resp.body_mut().read_json().unwrap();
    assert!(tax.to_string().contains("D2.1") || tax.to_string().contains("D2_1"));

    while next(&agent, addr, "B").is_some() {}
    assert!(next(&agent, addr, "B").is_none());
}

#[test]
fn concurrent_annotators_keep_their_own_probes() {
    let dir = tempfile::tempdir().unwrap();
    let addr = start(dir.path(), &["A", "B", "C"], 20, 0.1);
    let handles: Vec<_> = ["A", "B", "C"]
        .into_iter()
        .map(|name| {
            std::thread::spawn(move || {
                let agent = agent();
                let mut seen = Vec::new();
                while let Some(task) = next(&agent, addr, name) {
                    assert_eq!(task.annotator_id, name);
                    let (status, body) = submit(
                        &agent,
                        addr,
                        json!({"task_id": task.task_id, "annotator_id": name,
                               "labels": labels_for(&task)}),
                    );
                    assert_eq!(status, 200, "{body}");
                    seen.push(task.task_id);
                }
                seen
            })
        })
        .collect();
    for (h, name) in handles.into_iter().zip(["A", "B", "C"]) {
        let seen = h.join().unwrap();
        assert_eq!(seen.len(), 22);
        assert!(seen.iter().all(|t| t.starts_with(&format!("{name}-"))));
    }

    let csv = export(&agent(), addr);
    let records = parse_collection(csv.as_bytes()).unwrap();
    assert_eq!(records.len(), 66);
    assert!(validate_records(&records).is_empty());
    let mut probe_ids = BTreeSet::new();
    for r in records.iter().filter(|r| r.is_probe()) {
        assert!(r.item_id.ends_with(&format!("::probe-{}", r.annotator_id)));
        let orig = records
            .iter()
            .find(|o| Some(&o.item_id) == r.duplicate_of.as_ref() && o.annotator_id == r.annotator_id)
            .expect("probe original from the same annotator");
        assert_eq!(orig.labels, r.labels);
        probe_ids.insert(r.item_id.clone());
    }
    assert_eq!(probe_ids.len(), 6);

    let dist = distribution(&records);
    assert_eq!(dist.records, 66);
    let no_error = dist.row("no_error").unwrap();
    let any = dist.row("any_error").unwrap();
    assert_eq!(no_error.true_count + any.true_count, 66);
}
