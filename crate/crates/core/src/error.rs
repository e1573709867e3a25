use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("homomorphism is not well defined: {0}")]
    IllDefinedHom(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("size guard: {0}")]
    SizeLimit(String),
    #[error("not a chain map in degree {degree}")]
    NotChainMap { degree: i32 },
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("invalid site: {0}")]
    InvalidSite(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
