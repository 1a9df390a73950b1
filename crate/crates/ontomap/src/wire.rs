//! Line-delimited JSON translator protocol.
//!
//! Requests, one per line:
//! `{"op":"hello"}`, `{"op":"score_tokens","task","source","prefix","allowed"}`,
//! `{"op":"embed","task","text"}`. Replies carry `capabilities`+`embed_dim`,
//! `scores` or `vector`; failures are `{"error": code, "message": text}`.
//! A server answers requests strictly in order, one reply line each.

use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::process::{Child, Command, Stdio};
use std::sync::Mutex;
use std::time::Duration;

use ontomap_core::align::{Capabilities, TaskId, Translator, TranslatorError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Request {
    Hello,
    ScoreTokens {
        task: String,
        source: String,
        prefix: Vec<String>,
        allowed: Vec<String>,
    },
    Embed {
        task: String,
        text: String,
    },
}

fn error_reply(code: &str, message: &str) -> Value {
    json!({ "error": code, "message": message })
}

fn finite_reply(key: &str, values: Vec<f64>) -> Value {
    if values.iter().all(|v| v.is_finite()) {
        json!({ key: values })
    } else {
        error_reply("bad_response", "translator produced a non-finite value")
    }
}

/// Answers one request line.
pub fn respond<T: Translator + ?Sized>(translator: &T, line: &str) -> Value {
    let request: Request = match serde_json::from_str(line) {
        Ok(r) => r,
        Err(e) => return error_reply("bad_request", &e.to_string()),
    };
    let result = match request {
        Request::Hello => {
            let caps = translator.capabilities();
            return json!({
                "capabilities": { "score_tokens": caps.score_tokens, "embed": caps.embed },
                "embed_dim": caps.embed_dim,
            });
        }
        Request::ScoreTokens {
            task,
            source,
            prefix,
            allowed,
        } => {
            let prefix: Vec<&str> = prefix.iter().map(String::as_str).collect();
            let allowed: Vec<&str> = allowed.iter().map(String::as_str).collect();
            translator
                .score_tokens(&TaskId::new(task, "", ""), &source, &prefix, &allowed)
                .map(|s| finite_reply("scores", s))
        }
        Request::Embed { task, text } => translator
            .embed(&TaskId::new(task, "", ""), &text)
            .map(|v| finite_reply("vector", v)),
    };
    result.unwrap_or_else(|e| error_reply(&e.code, &e.message))
}

/// Serves requests until end of input; returns the number answered.
pub fn serve<T, R, W>(translator: &T, reader: R, mut writer: W) -> io::Result<usize>
where
    T: Translator + ?Sized,
    R: BufRead,
    W: Write,
{
    let mut answered = 0;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = respond(translator, &line);
        writeln!(writer, "{reply}")?;
        writer.flush()?;
        answered += 1;
    }
    Ok(answered)
}

/// Serves connections one after another, forever.
pub fn serve_tcp<T: Translator + ?Sized>(translator: &T, listener: TcpListener) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let reader = BufReader::new(stream.try_clone()?);
        // a broken client must not stop the server
        let _ = serve(translator, reader, stream);
    }
    Ok(())
}

struct Connection {
    reader: Box<dyn BufRead + Send>,
    writer: Option<Box<dyn Write + Send>>,
    child: Option<Child>,
}

impl Drop for Connection {
    fn drop(&mut self) {
        // closing our end lets a stdio server see end of input and exit
        self.writer.take();
        if let Some(child) = &mut self.child {
            let _ = child.wait();
        }
    }
}

/// Client side of the protocol. Calls are serialized over one connection.
pub struct WireTranslator {
    address: String,
    capabilities: Capabilities,
    connection: Mutex<Connection>,
}

impl std::fmt::Debug for WireTranslator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WireTranslator")
            .field("address", &self.address)
            .field("capabilities", &self.capabilities)
            .finish_non_exhaustive()
    }
}

fn unreachable(address: &str, err: impl std::fmt::Display) -> TranslatorError {
    TranslatorError::new("unreachable", format!("cannot reach translator at `{address}`: {err}"))
}

fn protocol(message: impl Into<String>) -> TranslatorError {
    TranslatorError::new("protocol", message)
}

impl WireTranslator {
    /// Connects to `stdio:<command line>` (spawned, arguments split on
    /// whitespace) or a TCP `host:port`, then performs the hello exchange.
    pub fn connect(address: &str) -> Result<Self, TranslatorError> {
        let connection = if let Some(command) = address.strip_prefix("stdio:") {
            let mut parts = command.split_whitespace();
            let program = parts.next().ok_or_else(|| unreachable(address, "empty command"))?;
            let mut child = Command::new(program)
                .args(parts)
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::inherit())
                .spawn()
                .map_err(|e| unreachable(address, e))?;
            let stdin = child.stdin.take().expect("piped stdin");
            let stdout = child.stdout.take().expect("piped stdout");
            Connection {
                reader: Box::new(BufReader::new(stdout)),
                writer: Some(Box::new(stdin)),
                child: Some(child),
            }
        } else {
            let tcp = address.strip_prefix("tcp:").unwrap_or(address);
            let stream = TcpStream::connect(tcp).map_err(|e| unreachable(address, e))?;
            stream
                .set_read_timeout(Some(Duration::from_secs(300)))
                .map_err(|e| unreachable(address, e))?;
            let reader = stream.try_clone().map_err(|e| unreachable(address, e))?;
            Connection {
                reader: Box::new(BufReader::new(reader)),
                writer: Some(Box::new(stream)),
                child: None,
            }
        };
        Self::handshake(address, connection)
    }

    /// Uses an already open pair of streams.
    pub fn from_streams<R, W>(reader: R, writer: W) -> Result<Self, TranslatorError>
    where
        R: BufRead + Send + 'static,
        W: Write + Send + 'static,
    {
        let connection = Connection {
            reader: Box::new(reader),
            writer: Some(Box::new(writer)),
            child: None,
        };
        Self::handshake("streams", connection)
    }

    fn handshake(address: &str, connection: Connection) -> Result<Self, TranslatorError> {
        let mut translator = Self {
            address: address.to_string(),
            capabilities: Capabilities {
                score_tokens: false,
                embed: false,
                embed_dim: 0,
            },
            connection: Mutex::new(connection),
        };
        let reply = translator.call(&Request::Hello)?;
        let flag = |name: &str| reply["capabilities"][name].as_bool();
        let (Some(score_tokens), Some(embed), Some(embed_dim)) =
            (flag("score_tokens"), flag("embed"), reply["embed_dim"].as_u64())
        else {
            return Err(protocol(format!("malformed hello reply: {reply}")));
        };
        translator.capabilities = Capabilities {
            score_tokens,
            embed,
            embed_dim: embed_dim as usize,
        };
        Ok(translator)
    }

    pub fn address(&self) -> &str {
        &self.address
    }

    fn call(&self, request: &Request) -> Result<Value, TranslatorError> {
        let mut conn = self.connection.lock().unwrap_or_else(|p| p.into_inner());
        let io_error = |e: io::Error| TranslatorError::new("io", format!("translator connection: {e}"));
        let mut line = serde_json::to_string(request).expect("request serializes");
        line.push('\n');
        let writer = conn.writer.as_mut().expect("writer open while connected");
        writer.write_all(line.as_bytes()).map_err(io_error)?;
        writer.flush().map_err(io_error)?;
        let mut reply = String::new();
        if conn.reader.read_line(&mut reply).map_err(io_error)? == 0 {
            return Err(TranslatorError::new("io", "translator closed the connection"));
        }
        let reply: Value = serde_json::from_str(&reply).map_err(|e| protocol(format!("reply is not JSON: {e}")))?;
        if let Some(code) = reply.get("error") {
            let code = code.as_str().unwrap_or("unknown");
            let message = reply.get("message").and_then(Value::as_str).unwrap_or("");
            return Err(TranslatorError::new(code, message));
        }
        Ok(reply)
    }

    fn numbers(reply: &Value, key: &str, expected: usize) -> Result<Vec<f64>, TranslatorError> {
        let values = reply[key]
            .as_array()
            .ok_or_else(|| protocol(format!("reply lacks `{key}`")))?
            .iter()
            .map(|v| v.as_f64().ok_or_else(|| protocol(format!("non-numeric `{key}` entry"))))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != expected {
            return Err(protocol(format!(
                "expected {expected} `{key}` values, got {}",
                values.len()
            )));
        }
        Ok(values)
    }
}

impl Translator for WireTranslator {
    fn capabilities(&self) -> Capabilities {
        self.capabilities
    }

    fn score_tokens(
        &self,
        task: &TaskId,
        source: &str,
        prefix: &[&str],
        allowed: &[&str],
    ) -> Result<Vec<f64>, TranslatorError> {
        let reply = self.call(&Request::ScoreTokens {
            task: task.name.clone(),
            source: source.to_string(),
            prefix: prefix.iter().map(|s| s.to_string()).collect(),
            allowed: allowed.iter().map(|s| s.to_string()).collect(),
        })?;
        Self::numbers(&reply, "scores", allowed.len())
    }

    fn embed(&self, task: &TaskId, text: &str) -> Result<Vec<f64>, TranslatorError> {
        let reply = self.call(&Request::Embed {
            task: task.name.clone(),
            text: text.to_string(),
        })?;
        Self::numbers(&reply, "vector", self.capabilities.embed_dim)
    }
}
