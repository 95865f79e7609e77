//! Client side of the worker protocol against in-process test workers.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use trenchcv::raster::{ClassScheme, LabelMask, RgbFrame};
use trenchcv::segmenter::protocol::{self, Response};
use trenchcv::segmenter::{
    segment, threshold_segment, RemoteSegmenter, Segmenter, ThresholdParams,
};
use trenchcv::synthgen::{generate_scene, SceneParams};
use trenchcv::Error;

const TIMEOUT: Duration = Duration::from_secs(5);

/// Binds a local port and runs `handler` on the first accepted connection.
fn one_shot<F>(handler: F) -> (u16, JoinHandle<()>)
where
    F: FnOnce(TcpStream) + Send + 'static,
{
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = listener.local_addr().unwrap().port();
    let handle = std::thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        handler(stream);
    });
    (port, handle)
}

fn echo_threshold_worker() -> (u16, JoinHandle<()>) {
    one_shot(|mut stream| {
        let params = ThresholdParams::default();
        protocol::serve_connection(&mut stream, |frame| Ok(threshold_segment(&params, frame)))
            .unwrap();
    })
}

fn connect(port: u16) -> trenchcv::Result<RemoteSegmenter> {
    RemoteSegmenter::connect("127.0.0.1", port, &ClassScheme::default(), TIMEOUT)
}

fn palette_frame() -> RgbFrame {
    RgbFrame::new(
        2,
        2,
        vec![218, 190, 112, 101, 67, 33, 60, 60, 60, 218, 190, 112],
    )
    .unwrap()
}

#[test]
fn two_by_two_round_trip() {
    let (port, worker) = echo_threshold_worker();
    let mut remote = connect(port).unwrap();
    let frame = palette_frame();
    let mask = remote.segment(&frame, "f").unwrap();
    assert_eq!(mask.labels(), &[2, 1, 0, 2]);
    assert!(mask.labels().iter().all(|&l| l < 3));
    drop(remote);
    worker.join().unwrap();
}

#[test]
fn matches_local_threshold_on_scenes() {
    let (port, worker) = echo_threshold_worker();
    let mut remote = connect(port).unwrap();
    let params = SceneParams {
        width: 96,
        height: 64,
        machinery_band_rows: 8,
        ..Default::default()
    };
    for seed in 0..5 {
        let scene = generate_scene(&params, seed).unwrap();
        let got = segment(&mut remote, &scene.frame, "s").unwrap();
        assert_eq!(
            got.mask,
            threshold_segment(&ThresholdParams::default(), &scene.frame)
        );
        assert_eq!(got.mask, scene.mask);
    }
    drop(remote);
    worker.join().unwrap();
}

#[test]
fn client_bytes_match_golden_transcript() {
    let sent = Arc::new(Mutex::new(Vec::new()));
    let record = Arc::clone(&sent);
    let (port, worker) = one_shot(move |mut stream| {
        let mut hello = [0u8; 5];
        stream.read_exact(&mut hello).unwrap();
        stream.write_all(b"FQS1\x01").unwrap();
        let mut request = [0u8; 9 + 12];
        stream.read_exact(&mut request).unwrap();
        let mut all = hello.to_vec();
        all.extend_from_slice(&request);
        *record.lock().unwrap() = all;
        stream
            .write_all(&[0, 2, 0, 0, 0, 2, 0, 0, 0, 3, 2, 1, 0, 2])
            .unwrap();
    });
    let mut remote = connect(port).unwrap();
    let mask = remote.segment(&palette_frame(), "f").unwrap();
    assert_eq!(mask.labels(), &[2, 1, 0, 2]);
    worker.join().unwrap();

    let mut golden = vec![0x46, 0x51, 0x53, 0x31, 0x01];
    golden.extend_from_slice(&[2, 0, 0, 0, 2, 0, 0, 0, 3]);
    golden.extend_from_slice(&[218, 190, 112, 101, 67, 33, 60, 60, 60, 218, 190, 112]);
    assert_eq!(*sent.lock().unwrap(), golden);
}

#[test]
fn bad_magic_fails_handshake() {
    let (port, worker) = one_shot(|mut stream| {
        let mut hello = [0u8; 5];
        stream.read_exact(&mut hello).unwrap();
        stream.write_all(b"HTTP/").unwrap();
    });
    assert!(matches!(connect(port), Err(Error::Protocol(_))));
    worker.join().unwrap();
}

#[test]
fn version_other_than_one_is_rejected() {
    let (port, worker) = one_shot(|mut stream| {
        let mut hello = [0u8; 5];
        stream.read_exact(&mut hello).unwrap();
        stream.write_all(b"FQS1\x02").unwrap();
    });
    let err = connect(port).unwrap_err();
    assert!(err.to_string().contains("version 2"), "{err}");
    worker.join().unwrap();
}

#[test]
fn worker_replying_with_wrong_size_mask() {
    let (port, worker) = one_shot(|mut stream| {
        protocol::serve_connection(&mut stream, |_| Ok(LabelMask::filled(3, 3, 1, 3).unwrap()))
            .unwrap();
    });
    let mut remote = connect(port).unwrap();
    let err = remote.segment(&palette_frame(), "f").unwrap_err();
    assert!(matches!(err, Error::DimensionMismatch { .. }), "{err}");
    // the connection is dropped after a protocol violation
    assert!(matches!(
        remote.segment(&palette_frame(), "f"),
        Err(Error::Protocol(_))
    ));
    worker.join().unwrap();
}

#[test]
fn out_of_range_class_id_rejected() {
    let (port, worker) = one_shot(|mut stream| {
        let mut hello = [0u8; 5];
        stream.read_exact(&mut hello).unwrap();
        stream.write_all(b"FQS1\x01").unwrap();
        protocol::read_request(&mut stream).unwrap();
        let bad = Response::Mask {
            width: 2,
            height: 2,
            class_count: 3,
            labels: vec![0, 1, 2, 9],
        };
        protocol::write_response(&mut stream, &bad).unwrap();
    });
    let mut remote = connect(port).unwrap();
    let err = remote.segment(&palette_frame(), "f").unwrap_err();
    assert!(
        matches!(
            err,
            Error::UnknownClassId {
                value: 9,
                index: 3,
                ..
            }
        ),
        "{err}"
    );
    worker.join().unwrap();
}

#[test]
fn model_error_keeps_connection() {
    let (port, worker) = one_shot(|mut stream| {
        let mut calls = 0;
        protocol::serve_connection(&mut stream, |frame| {
            calls += 1;
            if calls == 1 {
                Err("model exploded".into())
            } else {
                Ok(threshold_segment(&ThresholdParams::default(), frame))
            }
        })
        .unwrap();
    });
    let mut remote = connect(port).unwrap();
    match remote.segment(&palette_frame(), "f").unwrap_err() {
        Error::WorkerStatus { status, message } => {
            assert_eq!(status, protocol::STATUS_MODEL_ERROR);
            assert_eq!(message, "model exploded");
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(remote.segment(&palette_frame(), "f").is_ok());
    drop(remote);
    worker.join().unwrap();
}

#[test]
fn reference_server_rejects_four_channels() {
    let (port, worker) = echo_threshold_worker();
    let mut stream = TcpStream::connect(("127.0.0.1", port)).unwrap();
    stream.write_all(b"FQS1\x01").unwrap();
    let mut hello = [0u8; 5];
    stream.read_exact(&mut hello).unwrap();
    assert_eq!(&hello, b"FQS1\x01");
    let mut req = vec![1, 0, 0, 0, 1, 0, 0, 0, 4];
    req.extend_from_slice(&[1, 2, 3, 4]);
    stream.write_all(&req).unwrap();
    match protocol::read_response(&mut stream).unwrap() {
        Response::Failure { status, .. } => assert_eq!(status, protocol::STATUS_BAD_REQUEST),
        other => panic!("unexpected {other:?}"),
    }
    worker.join().unwrap();
}

#[test]
fn connection_refused_is_network_error() {
    let port = {
        let l = TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap().port()
    };
    assert!(matches!(connect(port), Err(Error::Network(_))));
}

#[test]
fn silent_worker_times_out() {
    let (port, worker) = one_shot(|stream| {
        std::thread::sleep(Duration::from_millis(600));
        drop(stream);
    });
    let started = std::time::Instant::now();
    let err = RemoteSegmenter::connect(
        "127.0.0.1",
        port,
        &ClassScheme::default(),
        Duration::from_millis(200),
    )
    .unwrap_err();
    assert!(matches!(err, Error::Network(_)), "{err}");
    assert!(started.elapsed() < Duration::from_millis(550));
    worker.join().unwrap();
}
