/// Splits text on Unicode whitespace and strips leading/trailing
/// non-alphanumeric characters from each piece. Case is preserved and
/// nothing is stemmed or removed, so `"A"` and `"a"` stay distinct and
/// internal hyphens and apostrophes survive (`"don't"`, `"well-known"`).
pub fn tokenize(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|t| !t.is_empty())
}
