use super::{Cardinality, CompileError, ContainerKind, ErrorCode};

/// Parses `('='|'~')? ('0..1'|'1..1'|'0..N'|'1..N')`.
pub fn parse_cardinality(token: &str) -> Result<(Cardinality, ContainerKind), CompileError> {
    let (container, base) = match token.chars().next() {
        Some('=') => (ContainerKind::OrderedList, &token[1..]),
        Some('~') => (ContainerKind::NumberedList, &token[1..]),
        _ => (ContainerKind::Plain, token),
    };
    let cardinality = Cardinality::ALL
        .into_iter()
        .find(|c| c.token() == base)
        .ok_or_else(|| CompileError::new(ErrorCode::MalformedCardinality, format!("malformed cardinality {token:?}")))?;
    Ok((cardinality, container))
}
