use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::os::unix::net::UnixStream;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use thiserror::Error;

use super::wire::{format_request, parse_response};
use super::{DecisionRequest, DecisionResponse, Endpoint};
use crate::sparse::MatrixFeatures;

/// Client-side failures, kept distinct so callers can fall back.
#[derive(Debug, Error)]
pub enum BusError {
    #[error("connection failed: {0}")]
    Connect(io::Error),
    #[error("request timed out")]
    Timeout,
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("i/o error: {0}")]
    Io(io::Error),
}

impl BusError {
    fn from_io(e: io::Error) -> Self {
        match e.kind() {
            io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut => BusError::Timeout,
            _ => BusError::Io(e),
        }
    }
}

enum Stream {
    Tcp(TcpStream),
    Unix(UnixStream),
}

impl Read for Stream {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        match self {
            Stream::Tcp(s) => s.read(buf),
            Stream::Unix(s) => s.read(buf),
        }
    }
}

impl Write for Stream {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Stream::Tcp(s) => s.write(buf),
            Stream::Unix(s) => s.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            Stream::Tcp(s) => s.flush(),
            Stream::Unix(s) => s.flush(),
        }
    }
}

/// One connection to the decision daemon; requests on it are answered in
/// order, so it can be reused.
pub struct BusClient {
    reader: BufReader<Stream>,
}

static NEXT_REQUEST: AtomicU64 = AtomicU64::new(1);

fn fresh_request_id() -> String {
    format!("q{}", NEXT_REQUEST.fetch_add(1, Ordering::Relaxed))
}

impl BusClient {
    pub fn connect(endpoint: &Endpoint, timeout: Duration) -> Result<Self, BusError> {
        let stream = match endpoint {
            Endpoint::Tcp(addr) => {
                let sock_addr = addr
                    .to_socket_addrs()
                    .map_err(BusError::Connect)?
                    .next()
                    .ok_or_else(|| {
                        BusError::Connect(io::Error::new(
                            io::ErrorKind::InvalidInput,
                            format!("cannot resolve {addr}"),
                        ))
                    })?;
                let s =
                    TcpStream::connect_timeout(&sock_addr, timeout).map_err(BusError::Connect)?;
                let _ = s.set_nodelay(true);
                s.set_read_timeout(Some(timeout)).map_err(BusError::Io)?;
                s.set_write_timeout(Some(timeout)).map_err(BusError::Io)?;
                Stream::Tcp(s)
            }
            Endpoint::Unix(path) => {
                let s = UnixStream::connect(path).map_err(BusError::Connect)?;
                s.set_read_timeout(Some(timeout)).map_err(BusError::Io)?;
                s.set_write_timeout(Some(timeout)).map_err(BusError::Io)?;
                Stream::Unix(s)
            }
        };
        Ok(BusClient {
            reader: BufReader::new(stream),
        })
    }

    /// Sends one request and waits for its reply; returns the reply and
    /// the measured round-trip time.
    pub fn request(
        &mut self,
        req: &DecisionRequest,
    ) -> Result<(DecisionResponse, Duration), BusError> {
        let line = format_request(req);
        let started = Instant::now();
        let stream = self.reader.get_mut();
        stream
            .write_all(line.as_bytes())
            .and_then(|_| stream.write_all(b"\n"))
            .and_then(|_| stream.flush())
            .map_err(BusError::from_io)?;

        let mut reply = String::new();
        let read = self
            .reader
            .read_line(&mut reply)
            .map_err(BusError::from_io)?;
        if read == 0 {
            return Err(BusError::Protocol("connection closed before reply".into()));
        }
        let round_trip = started.elapsed();
        let resp = parse_response(reply.trim_end()).map_err(BusError::Protocol)?;
        if resp.request_id != req.request_id {
            return Err(BusError::Protocol(format!(
                "reply id `{}` does not match request id `{}`",
                resp.request_id, req.request_id
            )));
        }
        Ok((resp, round_trip))
    }

    /// Builds a request from extracted features and sends it.
    pub fn request_features(
        &mut self,
        features: &MatrixFeatures,
    ) -> Result<(DecisionResponse, Duration), BusError> {
        let req = DecisionRequest {
            request_id: fresh_request_id(),
            n: features.n as u64,
            nnz: features.nnz as u64,
            density_percent: features.density_percent,
            diag_distance: features.avg_diag_distance,
        };
        self.request(&req)
    }
}

/// One-shot exchange: connect, ask, and return the reply with the
/// measured round-trip time.
pub fn request_decision(
    endpoint: &Endpoint,
    features: &MatrixFeatures,
    timeout: Duration,
) -> Result<(DecisionResponse, Duration), BusError> {
    let mut client = BusClient::connect(endpoint, timeout)?;
    client.request_features(features)
}
