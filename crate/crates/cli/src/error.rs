/// Failures surfaced by the CLI, mapped to exit codes 2 and 3.
#[derive(Debug)]
pub enum CliError {
    Core(multweyl::Error),
    Parameter(String),
    Io(String),
}

impl CliError {
    pub fn param(msg: impl Into<String>) -> Self {
        CliError::Parameter(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(multweyl::Error::Resource(_)) => 3,
            _ => 2,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.tag(),
            CliError::Parameter(_) => "parameter",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> String {
        let raw = match self {
            CliError::Core(multweyl::Error::Parameter(m))
            | CliError::Core(multweyl::Error::Resource(m))
            | CliError::Core(multweyl::Error::Evaluation(m))
            | CliError::Parameter(m)
            | CliError::Io(m) => m.clone(),
        };
        raw.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

impl From<multweyl::Error> for CliError {
    fn from(e: multweyl::Error) -> Self {
        CliError::Core(e)
    }
}
