/// Syntactic check for an informal AIDA-style assertion: a single
/// non-empty line starting with an upper-case letter and ending with `.`.
pub fn is_aida_sentence(s: &str) -> bool {
    !s.is_empty()
        && !s.contains(['\n', '\r'])
        && s.chars().next().is_some_and(char::is_uppercase)
        && s.ends_with('.')
}
