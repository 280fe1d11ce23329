use qsqrt_core::blocks::Block;

/// Parses `N`, `A..B`, `A..=B` (both inclusive) or `A,B,C`.
///
/// Ranges over the square root step by 2 and must start and end on even
/// widths; other circuits step by 1.
pub fn parse_widths(text: &str, block: Block) -> Result<Vec<usize>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid width `{}`", s.trim()))
    };
    let widths = if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        if block.requires_even() && (lo % 2 != 0 || hi % 2 != 0) {
            return Err(format!(
                "{block} needs even widths; range {lo}..{hi} has an odd endpoint"
            ));
        }
        let step = if block.requires_even() { 2 } else { 1 };
        (lo..=hi).step_by(step).collect()
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    for &n in &widths {
        block
            .check_n(n)
            .map_err(|e| format!("{block} at n = {n}: {e}"))?;
    }
    Ok(widths)
}
