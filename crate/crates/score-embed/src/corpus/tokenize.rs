use std::sync::LazyLock;

use regex::Regex;

static URL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\bhttps?://\S+|\bwww\.\S+").unwrap());
static MENTION_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@\w+").unwrap());
// Alternation order matters: placeholder literals and hashtags must win over
// the single-punctuation fallback at the same position.
static TOKEN_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"<url>|<user>|#\w+|\w+|[^\w\s]").unwrap());

/// Splits raw text into lowercase tokens.
///
/// Punctuation is split into standalone tokens. With `twitter_normalize`,
/// URLs collapse to `<url>`, @-mentions to `<user>`, and hashtags are kept
/// as single tokens with their `#`. Empty or whitespace-only input yields
/// an empty list.
pub fn tokenize(text: &str, twitter_normalize: bool) -> Vec<String> {
    let mut s = text.to_lowercase();
    if twitter_normalize {
        s = URL_RE.replace_all(&s, " <url> ").into_owned();
        s = MENTION_RE.replace_all(&s, " <user> ").into_owned();
    }
    TOKEN_RE
        .find_iter(&s)
        .map(|m| m.as_str().to_string())
        .collect()
}

/// Lowercases tokens that are already split (constituency-tree leaves),
/// without any re-splitting or normalization.
pub fn lowercase_tokens(tokens: &[String]) -> Vec<String> {
    tokens.iter().map(|t| t.to_lowercase()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(text: &str, twitter: bool) -> Vec<String> {
        tokenize(text, twitter)
    }

    #[test]
    fn splits_punctuation_and_lowercases() {
        assert_eq!(toks("Good plan!", false), vec!["good", "plan", "!"]);
    }

    #[test]
    fn twitter_normalization() {
        assert_eq!(
            toks("@Sen vote http://x.co #ACA", true),
            vec!["<user>", "vote", "<url>", "#aca"]
        );
    }

    #[test]
    fn empty_input_yields_empty_list() {
        assert_eq!(toks("", false), Vec::<String>::new());
        assert_eq!(toks("   \t ", true), Vec::<String>::new());
    }

    #[test]
    fn hashtag_splits_without_twitter_mode_too() {
        // The hashtag pattern is part of the base token grammar; the twitter
        // flag only controls URL and mention rewriting.
        assert_eq!(toks("#ACA passed", false), vec!["#aca", "passed"]);
        assert_eq!(toks("see http://x.co", false), vec!["see", "http", ":", "/", "/", "x", ".", "co"]);
    }

    #[test]
    fn adjacent_punctuation_becomes_separate_tokens() {
        assert_eq!(toks("no!!", false), vec!["no", "!", "!"]);
        assert_eq!(toks("well...maybe", false), vec!["well", ".", ".", ".", "maybe"]);
    }

    #[test]
    fn www_urls_and_mixed_case_mentions() {
        assert_eq!(toks("WWW.Example.COM rocks", true), vec!["<url>", "rocks"]);
        assert_eq!(toks("cc @ABC_def.", true), vec!["cc", "<user>", "."]);
    }

    #[test]
    fn lowercase_tokens_does_not_resplit() {
        let leaves = vec!["Rock-solid".to_string(), "n't".to_string(), "A".to_string()];
        assert_eq!(lowercase_tokens(&leaves), vec!["rock-solid", "n't", "a"]);
    }

    #[test]
    fn tokenize_is_deterministic() {
        let text = "RT @user1: Obamacare #fail www.hc.gov !!";
        assert_eq!(toks(text, true), toks(text, true));
    }
}
