//! SDPA sparse format (`.dat-s`).
//!
//! The program `max bᵀy + offset, F₀ + Σ yᵢ Fᵢ ⪰ 0` is written in SDPA's
//! primal form `min cᵀx, Σ Fᵢ xᵢ - F₀' ⪰ 0` with `c = -b`, `F₀' = -F₀`.
//! The offset is not representable and is dropped, so the SDPA optimum is
//! `offset - (our optimum)`; it is recorded in a comment line.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::ipm::{BlockKind, BlockSdp, BlockSpec, SparseSym};

pub fn write_sdpa(problem: &BlockSdp, mut w: impl Write) -> Result<()> {
    writeln!(w, "* objective offset {:.16e} (SDPA optimum = offset - maximum)", problem.offset)?;
    writeln!(w, "{}", problem.num_variables())?;
    writeln!(w, "{}", problem.blocks.len())?;
    let sizes: Vec<String> = problem
        .blocks
        .iter()
        .map(|b| match b.kind {
            BlockKind::Dense => b.size.to_string(),
            BlockKind::Diagonal => format!("-{}", b.size),
        })
        .collect();
    writeln!(w, "{}", sizes.join(" "))?;
    let c: Vec<String> = problem.objective.iter().map(|b| format!("{:.16e}", -b)).collect();
    writeln!(w, "{}", c.join(" "))?;
    for (blk, s) in problem.constant.iter().enumerate() {
        for &(r, col, v) in &s.entries {
            writeln!(w, "0 {} {} {} {:.16e}", blk + 1, r + 1, col + 1, -v)?;
        }
    }
    for (i, list) in problem.coefficients.iter().enumerate() {
        for (blk, s) in list {
            for &(r, col, v) in &s.entries {
                writeln!(w, "{} {} {} {} {:.16e}", i + 1, blk + 1, r + 1, col + 1, v)?;
            }
        }
    }
    Ok(())
}

/// Reads a sparse SDPA file, accepting comment lines starting with `*` or
/// `"` and the separators `{}(),`. The offset comment written by
/// [`write_sdpa`] is restored when present.
pub fn read_sdpa(r: impl BufRead) -> Result<BlockSdp> {
    let mut offset = 0.0;
    let mut tokens: Vec<String> = Vec::new();
    for line in r.lines() {
        let line = line?;
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("* objective offset ") {
            offset = rest
                .split_whitespace()
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Format("bad offset comment".into()))?;
            continue;
        }
        if trimmed.starts_with('*') || trimmed.starts_with('"') {
            continue;
        }
        let cleaned: String =
            line.chars().map(|ch| if matches!(ch, '{' | '}' | '(' | ')' | ',') { ' ' } else { ch }).collect();
        tokens.extend(cleaned.split_whitespace().map(str::to_owned));
    }
    let mut it = tokens.into_iter();
    let mut next = |what: &str| it.next().ok_or_else(|| Error::Format(format!("missing {what}")));
    let parse_usize = |t: String, what: &str| t.parse::<usize>().map_err(|_| Error::Format(format!("bad {what}: {t}")));
    let parse_f64 = |t: String| t.parse::<f64>().map_err(|_| Error::Format(format!("bad number: {t}")));

    let m = parse_usize(next("m")?, "m")?;
    let nblocks = parse_usize(next("nBLOCK")?, "nBLOCK")?;
    let mut blocks = Vec::with_capacity(nblocks);
    for _ in 0..nblocks {
        let t = next("block size")?;
        let v: i64 = t.parse().map_err(|_| Error::Format(format!("bad block size: {t}")))?;
        if v == 0 {
            return Err(Error::Format("zero block size".into()));
        }
        let kind = if v < 0 { BlockKind::Diagonal } else { BlockKind::Dense };
        blocks.push(BlockSpec { kind, size: v.unsigned_abs() as usize });
    }
    let mut objective = Vec::with_capacity(m);
    for _ in 0..m {
        objective.push(-parse_f64(next("c")?)?);
    }
    let mut constant = vec![SparseSym::default(); nblocks];
    let mut coefficients: Vec<Vec<(usize, SparseSym)>> = vec![Vec::new(); m];
    while let Ok(t) = next("entry") {
        let mat = parse_usize(t, "matrix number")?;
        let blk = parse_usize(next("block")?, "block")?;
        let i = parse_usize(next("row")?, "row")?;
        let j = parse_usize(next("column")?, "column")?;
        let v = parse_f64(next("value")?)?;
        if mat > m || blk == 0 || blk > nblocks || i == 0 || j == 0 {
            return Err(Error::Format(format!("entry {mat} {blk} {i} {j} out of range")));
        }
        let (r, c) = if i <= j { (i - 1, j - 1) } else { (j - 1, i - 1) };
        if c >= blocks[blk - 1].size {
            return Err(Error::Format(format!("entry {mat} {blk} {i} {j} exceeds the block size")));
        }
        if mat == 0 {
            constant[blk - 1].entries.push((r, c, -v));
        } else {
            let list = &mut coefficients[mat - 1];
            match list.iter_mut().find(|(b, _)| *b == blk - 1) {
                Some((_, s)) => s.entries.push((r, c, v)),
                None => list.push((blk - 1, SparseSym { entries: vec![(r, c, v)] })),
            }
        }
    }
    Ok(BlockSdp { blocks, constant, coefficients, objective, offset })
}
