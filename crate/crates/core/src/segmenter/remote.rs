use std::io::BufReader;
use std::net::{Shutdown, TcpStream, ToSocketAddrs};
use std::time::Duration;

use super::protocol::{self, Response};
use crate::error::{Error, Result};
use crate::raster::{ClassScheme, LabelMask, RgbFrame};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(5);

/// Client for a segmentation worker. One connection, one request in flight.
/// After any protocol violation the connection is closed and every later
/// call fails.
#[derive(Debug)]
pub struct RemoteSegmenter {
    conn: Option<Connection>,
    class_count: usize,
    endpoint: String,
}

#[derive(Debug)]
struct Connection {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
}

impl RemoteSegmenter {
    pub fn connect(host: &str, port: u16, scheme: &ClassScheme, timeout: Duration) -> Result<Self> {
        let endpoint = format!("{host}:{port}");
        let mut last_err = None;
        let mut stream = None;
        for addr in (host, port).to_socket_addrs()? {
            match TcpStream::connect_timeout(&addr, timeout) {
                Ok(s) => {
                    stream = Some(s);
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        let stream = match (stream, last_err) {
            (Some(s), _) => s,
            (None, Some(e)) => return Err(Error::Network(e)),
            (None, None) => {
                return Err(Error::Protocol(format!(
                    "{endpoint} resolved to no address"
                )))
            }
        };
        stream.set_read_timeout(Some(timeout))?;
        stream.set_write_timeout(Some(timeout))?;
        stream.set_nodelay(true)?;

        let mut conn = Connection {
            reader: BufReader::new(stream.try_clone()?),
            writer: stream,
        };
        protocol::write_client_hello(&mut conn.writer)?;
        if let Err(e) = protocol::read_server_hello(&mut conn.reader) {
            let _ = conn.writer.shutdown(Shutdown::Both);
            return Err(e);
        }
        Ok(RemoteSegmenter {
            conn: Some(conn),
            class_count: scheme.class_count(),
            endpoint,
        })
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn close(&mut self) {
        if let Some(conn) = self.conn.take() {
            let _ = conn.writer.shutdown(Shutdown::Both);
        }
    }

    fn exchange(&mut self, frame: &RgbFrame) -> Result<LabelMask> {
        let conn = self
            .conn
            .as_mut()
            .ok_or_else(|| Error::Protocol(format!("connection to {} is closed", self.endpoint)))?;
        protocol::write_request(&mut conn.writer, frame)?;
        match protocol::read_response(&mut conn.reader)? {
            Response::Mask {
                width,
                height,
                class_count,
                labels,
            } => {
                if (width, height) != (frame.width(), frame.height()) {
                    return Err(Error::DimensionMismatch {
                        left_name: "frame",
                        left_w: frame.width(),
                        left_h: frame.height(),
                        right_name: "worker mask",
                        right_w: width,
                        right_h: height,
                    });
                }
                if class_count as usize != self.class_count {
                    return Err(Error::ClassCountMismatch {
                        expected: self.class_count,
                        actual: class_count as usize,
                    });
                }
                LabelMask::new(width, height, labels, self.class_count)
            }
            Response::Failure {
                status, message, ..
            } => {
                if status != protocol::STATUS_MODEL_ERROR {
                    self.close();
                }
                Err(Error::WorkerStatus { status, message })
            }
        }
    }
}

impl super::Segmenter for RemoteSegmenter {
    fn segment(&mut self, frame: &RgbFrame, _stem: &str) -> Result<LabelMask> {
        let result = self.exchange(frame);
        if let Err(e) = &result {
            if !matches!(e, Error::WorkerStatus { .. }) {
                self.close();
            }
        }
        result
    }
}

impl Drop for RemoteSegmenter {
    fn drop(&mut self) {
        self.close();
    }
}
