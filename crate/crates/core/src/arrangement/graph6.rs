use super::{bit, Arrangement, ArrangementError, MAX_LINES};

/// Encode in the short graph6 form: one header byte `n + 63`, then the upper
/// triangle read column by column (`(0,1), (0,2), (1,2), (0,3), ...`), packed
/// big-endian into 6-bit groups offset by 63.
pub fn encode_graph6(a: &Arrangement) -> String {
    let n = a.n();
    debug_assert!(n <= MAX_LINES);
    let nbits = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(1 + nbits.div_ceil(6));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | a.meets(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

pub fn decode_graph6(text: &str) -> Result<Arrangement, ArrangementError> {
    let bad = |msg: String| ArrangementError::MalformedGraph6(msg);
    let s = text.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    let (&head, body) = bytes.split_first().ok_or_else(|| bad("empty input".into()))?;
    if !(63..=126).contains(&head) {
        return Err(bad(format!("header byte {head:#04x} out of range")));
    }
    if head == 126 {
        return Err(bad("long-form header (n > 62) is not supported".into()));
    }
    let n = (head - 63) as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(bad(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let mut rows = vec![0u64; n];
    let mut idx = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = body[idx / 6];
            if !(63..=126).contains(&byte) {
                return Err(bad(format!("data byte {byte:#04x} out of range")));
            }
            let val = byte - 63;
            if (val >> (5 - idx % 6)) & 1 == 1 {
                rows[i] |= bit(j);
                rows[j] |= bit(i);
            }
            idx += 1;
        }
    }
    if let Some(&last) = body.last() {
        if !(63..=126).contains(&last) {
            return Err(bad(format!("data byte {last:#04x} out of range")));
        }
        let pad = expected * 6 - nbits;
        if (last - 63) & ((1u8 << pad) - 1) != 0 {
            return Err(bad("nonzero padding bits".into()));
        }
    }
    Ok(Arrangement::from_rows_unchecked(n, rows))
}
