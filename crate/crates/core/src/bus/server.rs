use std::io::{self, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::os::unix::net::{UnixListener, UnixStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use super::wire::{format_error, format_response, parse_request};
use super::{DecisionResponse, Endpoint};
use crate::error::{Error, Result};
use crate::fuzzy::{decide_density, RuleBase};

const POLL_INTERVAL: Duration = Duration::from_millis(2);
const READ_TIMEOUT: Duration = Duration::from_millis(100);
const MAX_LINE: usize = 64 * 1024;

enum Listener {
    Tcp(TcpListener),
    Unix(UnixListener),
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

fn bind(endpoint: &Endpoint) -> Result<(Listener, Endpoint)> {
    match endpoint {
        Endpoint::Tcp(addr) => {
            let listener = TcpListener::bind(addr.as_str())?;
            let actual = Endpoint::Tcp(listener.local_addr()?.to_string());
            Ok((Listener::Tcp(listener), actual))
        }
        Endpoint::Unix(path) => {
            if path.exists() {
                // A leftover socket file from a dead daemon refuses binds;
                // remove it only if nobody answers.
                if UnixStream::connect(path).is_err() {
                    std::fs::remove_file(path)?;
                } else {
                    return Err(Error::InvalidInput(format!(
                        "endpoint {} is already served",
                        path.display()
                    )));
                }
            }
            let listener = UnixListener::bind(path)?;
            Ok((Listener::Unix(listener), Endpoint::Unix(path.clone())))
        }
    }
}

/// Serves decision requests until `shutdown` is set. Binds, then accepts
/// connections concurrently; within a connection requests are answered
/// strictly in order, one reply line per request line. Malformed lines
/// get an `ERR` reply and the connection stays open.
pub fn serve(rule_base: &RuleBase, endpoint: &Endpoint, shutdown: &Arc<AtomicBool>) -> Result<()> {
    let (listener, actual) = bind(endpoint)?;
    serve_on(listener, actual, rule_base.clone(), shutdown)
}

fn serve_on(
    listener: Listener,
    endpoint: Endpoint,
    rule_base: RuleBase,
    shutdown: &Arc<AtomicBool>,
) -> Result<()> {
    match &listener {
        Listener::Tcp(l) => l.set_nonblocking(true)?,
        Listener::Unix(l) => l.set_nonblocking(true)?,
    }
    let handlers: Mutex<Vec<JoinHandle<()>>> = Mutex::new(Vec::new());
    loop {
        if shutdown.load(Ordering::SeqCst) {
            break;
        }
        let accepted = match &listener {
            Listener::Tcp(l) => l.accept().map(|(s, _)| Stream::Tcp(s)),
            Listener::Unix(l) => l.accept().map(|(s, _)| Stream::Unix(s)),
        };
        match accepted {
            Ok(stream) => {
                let rules = rule_base.clone();
                let flag = Arc::clone(shutdown);
                let handle = thread::spawn(move || handle_connection(stream, &rules, &flag));
                handlers.lock().unwrap().push(handle);
            }
            Err(e) if e.kind() == io::ErrorKind::WouldBlock => {
                thread::sleep(POLL_INTERVAL);
            }
            Err(e) => {
                log::warn!("accept failed: {e}");
                thread::sleep(POLL_INTERVAL);
            }
        }
    }
    for handle in handlers.into_inner().unwrap() {
        let _ = handle.join();
    }
    if let Endpoint::Unix(path) = &endpoint {
        let _ = std::fs::remove_file(path);
    }
    Ok(())
}

fn handle_connection(mut stream: Stream, rules: &RuleBase, shutdown: &AtomicBool) {
    match &stream {
        Stream::Tcp(s) => {
            let _ = s.set_read_timeout(Some(READ_TIMEOUT));
            let _ = s.set_nodelay(true);
        }
        Stream::Unix(s) => {
            let _ = s.set_read_timeout(Some(READ_TIMEOUT));
        }
    }
    let mut buf: Vec<u8> = Vec::new();
    let mut chunk = [0u8; 4096];
    loop {
        // Serve complete lines already buffered.
        while let Some(pos) = buf.iter().position(|&b| b == b'\n') {
            let line_bytes: Vec<u8> = buf.drain(..=pos).collect();
            let line = String::from_utf8_lossy(&line_bytes[..line_bytes.len() - 1]);
            let reply = answer_line(line.trim_end_matches('\r'), rules);
            if stream.write_all(reply.as_bytes()).is_err() || stream.write_all(b"\n").is_err() {
                return;
            }
            let _ = stream.flush();
        }
        if buf.len() > MAX_LINE {
            // Refuse to buffer unbounded garbage; drop the partial line.
            buf.clear();
            let reply = format_error(None, "line too long");
            if stream.write_all(reply.as_bytes()).is_err() || stream.write_all(b"\n").is_err() {
                return;
            }
        }
        if shutdown.load(Ordering::SeqCst) {
            return;
        }
        match stream.read(&mut chunk) {
            Ok(0) => return,
            Ok(n) => buf.extend_from_slice(&chunk[..n]),
            Err(e)
                if e.kind() == io::ErrorKind::WouldBlock || e.kind() == io::ErrorKind::TimedOut =>
            {
                continue;
            }
            Err(_) => return,
        }
    }
}

fn answer_line(line: &str, rules: &RuleBase) -> String {
    let started = Instant::now();
    let req = match parse_request(line) {
        Ok(req) => req,
        Err((id, reason)) => return format_error(id.as_deref(), &reason),
    };
    let recomputed = req.recomputed_density();
    let rel = (req.density_percent - recomputed).abs() / recomputed.abs().max(f64::MIN_POSITIVE);
    if rel > 1e-9 {
        log::warn!(
            "request {}: client density {} disagrees with recomputed {} from n={} nnz={}",
            req.request_id,
            req.density_percent,
            recomputed,
            req.n,
            req.nnz
        );
    }
    // The sensor owns the density; its value drives the decision.
    match decide_density(rules, req.density_percent) {
        Ok(decision) => format_response(&DecisionResponse {
            request_id: req.request_id,
            chosen: decision.chosen,
            grades: decision.grades,
            used_fallback: decision.used_fallback,
            daemon_micros: started.elapsed().as_micros() as u64,
        }),
        Err(e) => format_error(Some(&req.request_id), &e.to_string()),
    }
}

/// A daemon running on a background thread. Shuts down (and removes its
/// socket file) when dropped.
pub struct DaemonHandle {
    endpoint: Endpoint,
    shutdown: Arc<AtomicBool>,
    thread: Option<JoinHandle<Result<()>>>,
}

impl DaemonHandle {
    /// The endpoint actually bound; for TCP port 0 this carries the
    /// resolved port.
    pub fn endpoint(&self) -> &Endpoint {
        &self.endpoint
    }

    pub fn shutdown(mut self) -> Result<()> {
        self.stop()
    }

    fn stop(&mut self) -> Result<()> {
        self.shutdown.store(true, Ordering::SeqCst);
        match self.thread.take() {
            Some(handle) => handle
                .join()
                .map_err(|_| Error::InvalidInput("daemon thread panicked".into()))?,
            None => Ok(()),
        }
    }
}

impl Drop for DaemonHandle {
    fn drop(&mut self) {
        let _ = self.stop();
    }
}

/// Binds synchronously (so bind errors surface here) and serves on a
/// background thread.
pub fn spawn_daemon(rule_base: RuleBase, endpoint: &Endpoint) -> Result<DaemonHandle> {
    let (listener, actual) = bind(endpoint)?;
    let shutdown = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&shutdown);
    let thread_endpoint = actual.clone();
    let thread = thread::spawn(move || serve_on(listener, thread_endpoint, rule_base, &flag));
    Ok(DaemonHandle {
        endpoint: actual,
        shutdown,
        thread: Some(thread),
    })
}
