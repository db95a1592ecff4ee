/// Punctuation marks annotated by the transcribers; removed wherever they occur.
const STRIPPED: [char; 4] = [',', '.', '!', '?'];

/// Splits a transcript utterance into lowercase surface tokens.
///
/// Apostrophes and hyphens are kept, so contractions ("that's") and cut-off
/// words ("neuchat-") survive as single tokens. Tokens made only of
/// punctuation ("...", a detached ",") disappear.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let token: String = raw
                .chars()
                .filter(|c| !STRIPPED.contains(c))
                .flat_map(char::to_lowercase)
                .collect();
            (!token.is_empty()).then_some(token)
        })
        .collect()
}
