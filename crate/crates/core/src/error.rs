use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The argument lies outside the region where the representation is
    /// defined (or proven to converge).
    #[error("{function}: argument {value} outside domain {domain}")]
    Domain {
        function: &'static str,
        value: String,
        domain: &'static str,
    },
    /// Malformed input: empty tables, duplicate nodes, unparsable numbers.
    #[error("invalid argument: {0}")]
    Argument(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, value: impl ToString, domain: &'static str) -> Self {
        Error::Domain {
            function,
            value: value.to_string(),
            domain,
        }
    }
}
