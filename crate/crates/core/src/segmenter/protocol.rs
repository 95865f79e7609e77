//! Binary segmentation protocol. All integers little-endian.
//!
//! ```text
//! handshake   client: "FQS1" u8 version        server: "FQS1" u8 accepted_version
//! request     u32 width | u32 height | u8 channels (=3) | width*height*3 RGB bytes
//! response    u8 status | u32 width | u32 height | u8 class_count | payload
//!             status 0: payload = width*height class-id bytes
//!             status 1 (model error) / 2 (bad request):
//!                       payload = u16 length | UTF-8 message
//! ```

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::raster::{LabelMask, RgbFrame};

pub const MAGIC: [u8; 4] = *b"FQS1";
pub const PROTOCOL_VERSION: u8 = 1;

pub const STATUS_OK: u8 = 0;
pub const STATUS_MODEL_ERROR: u8 = 1;
pub const STATUS_BAD_REQUEST: u8 = 2;

/// Upper bound on width*height accepted from the wire.
pub const MAX_PIXELS: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    pub pixels: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Response {
    Mask {
        width: u32,
        height: u32,
        class_count: u8,
        labels: Vec<u8>,
    },
    Failure {
        status: u8,
        width: u32,
        height: u32,
        class_count: u8,
        message: String,
    },
}

impl Response {
    pub fn from_mask(mask: &LabelMask) -> Self {
        Response::Mask {
            width: mask.width(),
            height: mask.height(),
            class_count: mask.class_count() as u8,
            labels: mask.labels().to_vec(),
        }
    }

    pub fn failure(status: u8, message: impl Into<String>) -> Self {
        Response::Failure {
            status,
            width: 0,
            height: 0,
            class_count: 0,
            message: message.into(),
        }
    }
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

fn read_u8(r: &mut impl Read) -> Result<u8> {
    Ok(read_array::<1>(r)?[0])
}

fn read_u16(r: &mut impl Read) -> Result<u16> {
    Ok(u16::from_le_bytes(read_array(r)?))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    Ok(u32::from_le_bytes(read_array(r)?))
}

fn read_hello(r: &mut impl Read) -> Result<u8> {
    let magic: [u8; 4] = read_array(r)?;
    if magic != MAGIC {
        return Err(Error::Protocol(format!(
            "bad magic {magic:02x?}, expected {MAGIC:02x?}"
        )));
    }
    read_u8(r)
}

fn write_hello(w: &mut impl Write, version: u8) -> Result<()> {
    let mut buf = [0u8; 5];
    buf[..4].copy_from_slice(&MAGIC);
    buf[4] = version;
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn write_client_hello(w: &mut impl Write) -> Result<()> {
    write_hello(w, PROTOCOL_VERSION)
}

/// Reads the server's reply and rejects any version other than ours.
pub fn read_server_hello(r: &mut impl Read) -> Result<()> {
    let accepted = read_hello(r)?;
    if accepted != PROTOCOL_VERSION {
        return Err(Error::Protocol(format!(
            "worker accepted protocol version {accepted}, client speaks {PROTOCOL_VERSION}"
        )));
    }
    Ok(())
}

/// Server side: returns the version the client asked for.
pub fn read_client_hello(r: &mut impl Read) -> Result<u8> {
    read_hello(r)
}

pub fn write_server_hello(w: &mut impl Write) -> Result<()> {
    write_hello(w, PROTOCOL_VERSION)
}

fn pixel_count(width: u32, height: u32) -> Result<usize> {
    let n = u64::from(width) * u64::from(height);
    if n > MAX_PIXELS {
        return Err(Error::Protocol(format!(
            "{width}x{height} exceeds the {MAX_PIXELS}-pixel limit"
        )));
    }
    Ok(n as usize)
}

pub fn encode_request(frame: &RgbFrame) -> Vec<u8> {
    let mut buf = Vec::with_capacity(9 + frame.as_bytes().len());
    buf.extend_from_slice(&frame.width().to_le_bytes());
    buf.extend_from_slice(&frame.height().to_le_bytes());
    buf.push(3);
    buf.extend_from_slice(frame.as_bytes());
    buf
}

pub fn write_request(w: &mut impl Write, frame: &RgbFrame) -> Result<()> {
    w.write_all(&encode_request(frame))?;
    w.flush()?;
    Ok(())
}

/// Reads a request header and its `width*height*channels` payload.
pub fn read_request(r: &mut impl Read) -> Result<Request> {
    let width = read_u32(r)?;
    let height = read_u32(r)?;
    let channels = read_u8(r)?;
    let len = pixel_count(width, height)? * channels as usize;
    let mut pixels = vec![0u8; len];
    r.read_exact(&mut pixels)?;
    Ok(Request {
        width,
        height,
        channels,
        pixels,
    })
}

pub fn encode_response(response: &Response) -> Vec<u8> {
    let mut buf = Vec::new();
    let mut header = |status: u8, width: u32, height: u32, class_count: u8| {
        buf.push(status);
        buf.extend_from_slice(&width.to_le_bytes());
        buf.extend_from_slice(&height.to_le_bytes());
        buf.push(class_count);
    };
    match response {
        Response::Mask {
            width,
            height,
            class_count,
            labels,
        } => {
            header(STATUS_OK, *width, *height, *class_count);
            buf.extend_from_slice(labels);
        }
        Response::Failure {
            status,
            width,
            height,
            class_count,
            message,
        } => {
            header(*status, *width, *height, *class_count);
            // u16 length prefix; longer messages are cut at a char boundary
            let mut end = message.len().min(u16::MAX as usize);
            while !message.is_char_boundary(end) {
                end -= 1;
            }
            buf.extend_from_slice(&(end as u16).to_le_bytes());
            buf.extend_from_slice(&message.as_bytes()[..end]);
        }
    }
    buf
}

pub fn write_response(w: &mut impl Write, response: &Response) -> Result<()> {
    w.write_all(&encode_response(response))?;
    w.flush()?;
    Ok(())
}

pub fn read_response(r: &mut impl Read) -> Result<Response> {
    let status = read_u8(r)?;
    let width = read_u32(r)?;
    let height = read_u32(r)?;
    let class_count = read_u8(r)?;
    if status == STATUS_OK {
        let mut labels = vec![0u8; pixel_count(width, height)?];
        r.read_exact(&mut labels)?;
        return Ok(Response::Mask {
            width,
            height,
            class_count,
            labels,
        });
    }
    let len = read_u16(r)?;
    let mut raw = vec![0u8; len as usize];
    r.read_exact(&mut raw)?;
    let message = String::from_utf8(raw)
        .map_err(|_| Error::Protocol("worker message is not UTF-8".into()))?;
    Ok(Response::Failure {
        status,
        width,
        height,
        class_count,
        message,
    })
}

/// Reference server loop for one connection: handshake, then one response
/// per request until the client hangs up. Malformed requests get status 2
/// and end the connection; `handler` errors get status 1 and do not.
pub fn serve_connection<S, F>(stream: &mut S, mut handler: F) -> Result<()>
where
    S: Read + Write,
    F: FnMut(&RgbFrame) -> std::result::Result<LabelMask, String>,
{
    let requested = read_client_hello(stream)?;
    write_server_hello(stream)?;
    if requested != PROTOCOL_VERSION {
        return Ok(());
    }
    loop {
        let request = match read_request(stream) {
            Ok(req) => req,
            Err(Error::Network(e)) if e.kind() == std::io::ErrorKind::UnexpectedEof => {
                return Ok(())
            }
            Err(Error::Protocol(msg)) => {
                write_response(stream, &Response::failure(STATUS_BAD_REQUEST, msg))?;
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        if request.channels != 3 {
            let msg = format!("expected 3 channels, got {}", request.channels);
            write_response(stream, &Response::failure(STATUS_BAD_REQUEST, msg))?;
            return Ok(());
        }
        let frame = match RgbFrame::new(request.width, request.height, request.pixels) {
            Ok(f) => f,
            Err(e) => {
                write_response(
                    stream,
                    &Response::failure(STATUS_BAD_REQUEST, e.to_string()),
                )?;
                return Ok(());
            }
        };
        let response = match handler(&frame) {
            Ok(mask) => Response::from_mask(&mask),
            Err(msg) => Response::failure(STATUS_MODEL_ERROR, msg),
        };
        write_response(stream, &response)?;
    }
}
