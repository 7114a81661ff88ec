/// Splits an IRI into `(prefix, name)` with `prefix + name == iri`.
///
/// The prefix ends at the last `#`, or failing that at the last `/` after the
/// scheme's `://` (or after the scheme `:` when there is no authority). With
/// the prefix table disabled, or when no delimiter exists, the prefix is
/// empty.
pub fn split_iri(iri: &str, prefix_enabled: bool) -> (&str, &str) {
    if !prefix_enabled {
        return ("", iri);
    }
    if let Some(hash) = iri.rfind('#') {
        return iri.split_at(hash + 1);
    }
    let after_scheme = match iri.find("://") {
        Some(i) => i + 3,
        None => iri.find(':').map_or(0, |i| i + 1),
    };
    match iri[after_scheme..].rfind('/') {
        Some(slash) => iri.split_at(after_scheme + slash + 1),
        None => ("", iri),
    }
}
