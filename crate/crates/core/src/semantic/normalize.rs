use alloc::string::String;

use super::SimilarityError;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Upper,
    Lower,
    Digit,
    Separator,
}

fn classify(c: char) -> Class {
    if c.is_ascii_digit() || (c.is_numeric() && !c.is_alphabetic()) {
        Class::Digit
    } else if c.is_uppercase() {
        Class::Upper
    } else if c.is_alphanumeric() {
        // Caseless letters count as lowercase.
        Class::Lower
    } else {
        Class::Separator
    }
}

/// Canonical word form of a key: lowercase words separated by one space.
///
/// Word boundaries are separators (`_`, `-`, whitespace and other
/// punctuation), lower-to-upper transitions, letter/digit transitions, and
/// the last capital of an uppercase run that is followed by a lowercase
/// letter (`HTTPResponse` → `http response`).
pub fn normalize_field_name(name: &str) -> Result<String, SimilarityError> {
    if name.is_empty() {
        return Err(SimilarityError::EmptyName);
    }
    let chars: alloc::vec::Vec<char> = name.chars().collect();
    let mut out = String::with_capacity(name.len() + 4);
    let mut prev = Class::Separator;
    let mut pending_space = false;
    for (i, &c) in chars.iter().enumerate() {
        let class = classify(c);
        if class == Class::Separator {
            pending_space = !out.is_empty();
            prev = class;
            continue;
        }
        let next = chars.get(i + 1).map(|&n| classify(n));
        let boundary = match (prev, class) {
            (Class::Separator, _) => false,
            (Class::Lower, Class::Upper) => true,
            (Class::Digit, Class::Upper | Class::Lower) => true,
            (Class::Upper | Class::Lower, Class::Digit) => true,
            (Class::Upper, Class::Upper) => next == Some(Class::Lower),
            _ => false,
        };
        if (boundary || pending_space) && !out.is_empty() {
            out.push(' ');
        }
        pending_space = false;
        out.extend(c.to_lowercase());
        prev = class;
    }
    Ok(out)
}
