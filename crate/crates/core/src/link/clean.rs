/// Drops comma-separated segments that carry postal codes, street numbers or
/// region abbreviations: any segment containing a digit, or containing a
/// maximal uppercase run of exactly two or three letters.
pub fn clean_affiliation(raw: &str) -> String {
    raw.split(',')
        .map(str::trim)
        .filter(|seg| !seg.is_empty() && keep_segment(seg))
        .collect::<Vec<_>>()
        .join(", ")
}

fn keep_segment(seg: &str) -> bool {
    if seg.chars().any(|c| c.is_ascii_digit()) {
        return false;
    }
    !has_short_uppercase_run(seg)
}

fn has_short_uppercase_run(seg: &str) -> bool {
    let mut run = 0usize;
    for c in seg.chars().chain(std::iter::once(' ')) {
        if c.is_uppercase() {
            run += 1;
        } else {
            if (2..=3).contains(&run) {
                return true;
            }
            run = 0;
        }
    }
    false
}
