use std::fmt::Write as _;

/// Command failures, each mapped to a stable exit code and reported as a
/// single machine-readable JSON line on stderr.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2: bad flags or configuration.
    Config(String),
    /// Exit code 3: a requested internal assertion failed.
    Assertion { check: String, detail: String },
    /// Exit code 4: output could not be written.
    Io { path: String, message: String },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn assertion(check: impl Into<String>, detail: impl Into<String>) -> Self {
        CliError::Assertion {
            check: check.into(),
            detail: detail.into(),
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Assertion { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }

    /// One-line JSON failure report.
    pub fn report(&self) -> String {
        let mut s = String::from("{");
        match self {
            CliError::Config(msg) => {
                write!(s, "\"status\":\"config-error\",\"message\":\"{}\"", escape(msg)).unwrap();
            }
            CliError::Assertion { check, detail } => {
                write!(
                    s,
                    "\"status\":\"assertion-failed\",\"check\":\"{}\",\"detail\":\"{}\"",
                    escape(check),
                    escape(detail)
                )
                .unwrap();
            }
            CliError::Io { path, message } => {
                write!(
                    s,
                    "\"status\":\"io-error\",\"path\":\"{}\",\"message\":\"{}\"",
                    escape(path),
                    escape(message)
                )
                .unwrap();
            }
        }
        s.push('}');
        s
    }
}

impl From<expfam::Error> for CliError {
    fn from(err: expfam::Error) -> Self {
        CliError::Config(err.to_string())
    }
}

fn escape(s: &str) -> String {
    s.chars()
        .flat_map(|c| match c {
            '"' => vec!['\\', '"'],
            '\\' => vec!['\\', '\\'],
            '\n' => vec!['\\', 'n'],
            c => vec![c],
        })
        .collect()
}
