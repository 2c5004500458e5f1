use std::fmt;

/// Lowercased word tokens. No token is empty or contains whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenList(Vec<String>);

impl TokenList {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Tokens joined by single spaces.
    pub fn join(&self) -> String {
        self.0.join(" ")
    }

    /// Builds a list from already-tokenized words, e.g. in tests. Words are
    /// passed through [`tokenize`] so the type invariants still hold.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        let joined: Vec<&str> = words.iter().map(AsRef::as_ref).collect();
        tokenize(&joined.join(" "))
    }
}

impl fmt::Display for TokenList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join())
    }
}

impl std::ops::Deref for TokenList {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

fn is_punct(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace()
}

/// Lowercases, splits on whitespace and detaches leading and trailing
/// punctuation characters as single-character tokens. Interior punctuation
/// (`it's`, `3.5`) stays attached.
pub fn tokenize(text: &str) -> TokenList {
    let lower = text.to_lowercase();
    let mut tokens = Vec::new();
    for chunk in lower.split_whitespace() {
        let start = chunk
            .char_indices()
            .find(|&(_, c)| !is_punct(c))
            .map(|(i, _)| i);
        let Some(start) = start else {
            tokens.extend(chunk.chars().map(String::from));
            continue;
        };
        let end = chunk
            .char_indices()
            .rev()
            .find(|&(_, c)| !is_punct(c))
            .map(|(i, c)| i + c.len_utf8())
            .unwrap_or(chunk.len());

        tokens.extend(chunk[..start].chars().map(String::from));
        tokens.push(chunk[start..end].to_string());
        tokens.extend(chunk[end..].chars().map(String::from));
    }
    TokenList(tokens)
}
