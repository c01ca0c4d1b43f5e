use std::fmt;
use std::path::{Path, PathBuf};

/// Failure of one CLI run, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Core(tbg_core::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        use tbg_core::ErrorClass;
        match self {
            Failure::Input(_) => 2,
            Failure::Core(e) => match e.class() {
                ErrorClass::InvalidInput => 2,
                ErrorClass::ComputeGuard | ErrorClass::Compute => 3,
            },
            Failure::Io { .. } => 4,
        }
    }

    pub fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
        move |source| Failure::Io { path: path.to_path_buf(), source }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(msg) => write!(f, "invalid input: {msg}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for Failure {}

impl From<tbg_core::Error> for Failure {
    fn from(e: tbg_core::Error) -> Self {
        Failure::Core(e)
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
