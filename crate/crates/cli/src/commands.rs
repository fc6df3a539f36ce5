use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use permcode_core::algebra::multiplicities as multiplicity_table;
use permcode_core::bound::BoundStatus;
use permcode_core::lp::{build_lp, solve_lp};
use permcode_core::orbits::{burnside_count, burnside_count_swap};
use permcode_core::sdp::sdpa::write_sdpa;
use permcode_core::sdp::solve_instance;
use permcode_core::terwilliger::{terwilliger_dimension, terwilliger_dimension_orbits};
use permcode_core::{
    BasicBlockSet, CharacterTable, DistanceSet, Formulation, OrbitIndex, SchemeData, SdpContext, SdpOptions,
    SymmetricGroup, TransposeMode,
};
use serde::Serialize;

use crate::report::{align, BoundKind, BoundReport, Outcome};
use crate::{Exit, Mode};

fn labels<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(T::to_string).collect()
}

#[derive(Serialize)]
struct CharsReport {
    n: usize,
    classes: Vec<String>,
    class_sizes: Vec<u64>,
    centralizer_sizes: Vec<u64>,
    characters: Vec<String>,
    /// `values[character][class]`
    values: Vec<Vec<i64>>,
}

pub fn chars(n: usize) -> Result<Outcome> {
    let t = CharacterTable::new(n)?;
    let r = CharsReport {
        n,
        classes: labels(t.classes()),
        class_sizes: t.class_sizes().to_vec(),
        centralizer_sizes: t.centralizer_sizes().to_vec(),
        characters: labels(t.characters()),
        values: (0..t.len()).map(|a| t.row(a).to_vec()).collect(),
    };
    let mut rows = vec![std::iter::once("χ \\ class".to_string()).chain(r.classes.iter().cloned()).collect::<Vec<_>>()];
    rows.push(std::iter::once("|C|".to_string()).chain(r.class_sizes.iter().map(u64::to_string)).collect());
    rows.push(std::iter::once("|Z|".to_string()).chain(r.centralizer_sizes.iter().map(u64::to_string)).collect());
    for (label, values) in r.characters.iter().zip(&r.values) {
        rows.push(std::iter::once(label.clone()).chain(values.iter().map(i64::to_string)).collect());
    }
    let text = align(&rows);
    Outcome::new(r, text)
}

#[derive(Serialize)]
struct SchemeReport {
    n: usize,
    classes: Vec<String>,
    characters: Vec<String>,
    class_sizes: Vec<u64>,
    weights: Vec<usize>,
    /// `q[class][character]`
    q: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure_constants: Option<Vec<Vec<Vec<i64>>>>,
}

pub fn scheme(n: usize, with_p: bool) -> Result<Outcome> {
    let t = CharacterTable::new(n)?;
    let s = SchemeData::new(&t)?;
    let p = with_p.then(|| {
        (0..s.m).map(|i| (0..s.m).map(|j| (0..s.m).map(|k| s.structure_constant(i, j, k)).collect()).collect()).collect()
    });
    let r = SchemeReport {
        n,
        classes: labels(t.classes()),
        characters: labels(t.characters()),
        class_sizes: s.class_sizes.clone(),
        weights: s.weights.clone(),
        q: s.q.clone(),
        structure_constants: p,
    };
    let mut rows = vec![["class", "size", "weight"].map(String::from).into_iter().chain(r.characters.iter().cloned()).collect::<Vec<_>>()];
    for i in 0..s.m {
        let mut row = vec![r.classes[i].clone(), r.class_sizes[i].to_string(), r.weights[i].to_string()];
        row.extend(r.q[i].iter().map(i64::to_string));
        rows.push(row);
    }
    let mut text = format!("second eigenmatrix Q of the conjugacy scheme, n = {n}\n");
    text.push_str(&align(&rows));
    if let Some(p) = &r.structure_constants {
        text.push_str("\nnonzero p_ij^k (i, j, k by class):\n");
        for (i, pi) in p.iter().enumerate() {
            for (j, pij) in pi.iter().enumerate() {
                for (k, &v) in pij.iter().enumerate() {
                    if v != 0 {
                        let _ = writeln!(text, "  {} {} {}  {v}", r.classes[i], r.classes[j], r.classes[k]);
                    }
                }
            }
        }
    }
    Outcome::new(r, text)
}

fn bound_text(r: &BoundReport) -> String {
    let mut text = format!("n = {}, D = {}\n", r.n, r.distances);
    let kind = match r.kind {
        BoundKind::Lp => "LP",
        BoundKind::Sdp => "SDP",
    };
    match &r.exact_optimum {
        Some(q) => {
            let _ = writeln!(text, "{:<15}{q} (≈ {:.6})", format!("{kind} optimum"), r.raw_optimum);
        }
        None => {
            let _ = writeln!(text, "{:<15}{:.9}", format!("{kind} optimum"), r.raw_optimum);
        }
    }
    let _ = writeln!(text, "floored bound  {}", r.floored_bound);
    let _ = writeln!(text, "product Π d    {}", r.product);
    if let Some(d) = &r.diagnostics {
        let _ = writeln!(
            text,
            "solver         {:?}, {} iterations, gap {:.1e}, infeasibility {:.1e}/{:.1e}, min eigenvalues {:.1e}/{:.1e}",
            r.status,
            d.iterations,
            d.relative_gap,
            d.primal_infeasibility,
            d.dual_infeasibility,
            d.min_eigenvalue_r1,
            d.min_eigenvalue_r2
        );
    }
    text
}

fn bound_outcome(r: BoundReport) -> Result<Outcome> {
    let exit = if r.status == BoundStatus::Optimal { 0 } else { 4 };
    let mut out = Outcome::new(&r, bound_text(&r))?;
    out.csv = Some(r.csv());
    out.exit = exit;
    if exit != 0 {
        eprintln!("error: the solver did not reach an optimal point ({:?})", r.status);
    }
    Ok(out)
}

pub fn lp(n: usize, d: DistanceSet) -> Result<Outcome> {
    let problem = build_lp(n, &d)?;
    bound_outcome(BoundReport::new(n, d, BoundKind::Lp, solve_lp(&problem)))
}

#[derive(Serialize)]
struct OrbitsReport {
    n: usize,
    orbit_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    swap_orbit_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumeration: Option<Enumeration>,
}

#[derive(Serialize)]
struct Enumeration {
    orbits: usize,
    swap_classes: Option<usize>,
    /// `(orbit size, number of orbits)`
    size_histogram: Vec<(u64, usize)>,
    /// `[row class][column class]`
    block_counts: Vec<Vec<usize>>,
}

pub fn orbits(n: usize, enumerate: bool, swap: bool, save: Option<&Path>) -> Result<Outcome> {
    let mut r = OrbitsReport {
        n,
        orbit_count: burnside_count(n)?,
        swap_orbit_count: if swap { Some(burnside_count_swap(n)?) } else { None },
        enumeration: None,
    };
    let mut text = format!("b_{n} = {}\n", r.orbit_count);
    if let Some(s) = r.swap_orbit_count {
        let _ = writeln!(text, "b_{n}* = {s}");
    }
    if enumerate || save.is_some() {
        let g = SymmetricGroup::new(n)?;
        let idx = OrbitIndex::enumerate(&g)?;
        if idx.num_orbits() as u64 != r.orbit_count {
            return Err(Exit {
                code: 1,
                message: format!("enumerated {} orbits, the formula gives {}", idx.num_orbits(), r.orbit_count),
            }
            .into());
        }
        if let Some(path) = save {
            idx.save(path).with_context(|| format!("writing {}", path.display()))?;
        }
        let e = Enumeration {
            orbits: idx.num_orbits(),
            swap_classes: swap.then(|| idx.swap_classes().len()),
            size_histogram: idx.size_histogram(),
            block_counts: idx.block_counts(),
        };
        let _ = writeln!(text, "enumerated orbits: {}", e.orbits);
        if let Some(s) = e.swap_classes {
            let _ = writeln!(text, "enumerated swap classes: {s}");
        }
        text.push_str("orbit sizes:\n");
        let hist: Vec<Vec<String>> = std::iter::once(vec!["size".to_string(), "orbits".to_string()])
            .chain(e.size_histogram.iter().map(|(s, c)| vec![s.to_string(), c.to_string()]))
            .collect();
        text.push_str(&align(&hist));
        text.push_str("orbits per block (row class × column class):\n");
        let t = g.characters();
        let mut rows = vec![std::iter::once(String::new()).chain(labels(t.classes())).collect::<Vec<_>>()];
        for (i, counts) in e.block_counts.iter().enumerate() {
            rows.push(std::iter::once(t.classes()[i].to_string()).chain(counts.iter().map(usize::to_string)).collect());
        }
        text.push_str(&align(&rows));
        r.enumeration = Some(e);
    }
    Outcome::new(r, text)
}

#[derive(Serialize)]
struct MultiplicityReport {
    n: usize,
    table: permcode_core::MultiplicityTable,
    nonzero: Vec<u64>,
    sum_of_squares: u64,
    orbit_count: u64,
    dimension: u64,
}

pub fn multiplicities(n: usize) -> Result<Outcome> {
    let g = SymmetricGroup::new(n)?;
    let table = multiplicity_table(&g)?;
    let r = MultiplicityReport {
        n,
        nonzero: table.nonzero_sorted(),
        sum_of_squares: table.sum_of_squares(),
        orbit_count: burnside_count(n)?,
        dimension: table.dimension(),
        table,
    };
    let classes = labels(g.characters().classes());
    let mut rows =
        vec![["character", "d_k", "m_k"].map(String::from).into_iter().chain(classes.iter().map(|c| format!("a^{c}"))).collect::<Vec<_>>()];
    for k in 0..r.table.characters.len() {
        let mut row = vec![r.table.labels[k].to_string(), r.table.degrees[k].to_string(), r.table.multiplicities[k].to_string()];
        row.extend(r.table.coefficients[k].iter().map(u64::to_string));
        rows.push(row);
    }
    let mut text = align(&rows);
    let _ = writeln!(text, "nonzero m_k: {:?}", r.nonzero);
    let _ = writeln!(text, "Σ m_k² = {} (b_{n} = {}), Σ m_k d_k = {} (n! = {})", r.sum_of_squares, r.orbit_count, r.dimension, g.order());
    Outcome::new(r, text)
}

#[derive(Serialize)]
struct TerwilligerOut {
    #[serde(flatten)]
    report: permcode_core::terwilliger::TerwilligerReport,
    orbit_count: u64,
    equal: bool,
}

pub fn terwilliger(n: usize, allow_slow: bool) -> Result<Outcome> {
    let g = SymmetricGroup::new(n)?;
    let report = match n {
        0..=5 => terwilliger_dimension(&g)?,
        6 if allow_slow => terwilliger_dimension_orbits(&g, &OrbitIndex::enumerate(&g)?)?,
        6 => {
            return Err(Exit { code: 3, message: "n = 6 is a long run; pass --allow-slow".into() }.into());
        }
        _ => {
            return Err(Exit { code: 3, message: format!("the closure is limited to n ≤ 6, got {n}") }.into());
        }
    };
    let orbit_count = burnside_count(n)?;
    let r = TerwilligerOut { equal: report.dimension as u64 == orbit_count, orbit_count, report };
    let text = format!(
        "dim<A_i, E'_i> = {} ({} representation, {} products)\nb_{n} = {} ({})\npivots: smallest accepted {:.2e}, largest rejected {:.2e}\n",
        r.report.dimension,
        r.report.representation,
        r.report.products,
        r.orbit_count,
        if r.equal { "equal" } else { "DIFFERENT" },
        r.report.smallest_accepted_pivot,
        r.report.largest_rejected_pivot
    );
    let mut out = Outcome::new(r, text)?;
    if !out.result["equal"].as_bool().unwrap_or(false) {
        out.exit = 1;
    }
    Ok(out)
}

#[derive(Serialize)]
struct BlockRow {
    character: String,
    degree: u64,
    size: usize,
    class_dims: Vec<usize>,
    probe: permcode_core::blocks::Probe,
    largest_rejected: f64,
}

#[derive(Serialize)]
struct BlocksReport {
    n: usize,
    blocks: Vec<BlockRow>,
    sum_of_squares: usize,
    orbit_count: u64,
}

pub fn blocks(n: usize, seed: u64, save: Option<&Path>) -> Result<Outcome> {
    let g = SymmetricGroup::new(n)?;
    let idx = OrbitIndex::enumerate(&g)?;
    let table = multiplicity_table(&g)?;
    let set = BasicBlockSet::compute(&g, &idx, &table, seed)?;
    if let Some(path) = save {
        set.save(&idx, path).with_context(|| format!("writing {}", path.display()))?;
    }
    let rows: Vec<BlockRow> = set
        .blocks
        .iter()
        .map(|b| BlockRow {
            character: table.labels[b.basis.index].to_string(),
            degree: b.basis.degree,
            size: b.dim(),
            class_dims: b.basis.class_dims.clone(),
            probe: b.basis.probe.clone(),
            largest_rejected: b.basis.largest_rejected,
        })
        .collect();
    let r = BlocksReport {
        n,
        sum_of_squares: rows.iter().map(|b| b.size * b.size).sum(),
        orbit_count: burnside_count(n)?,
        blocks: rows,
    };
    let mut table_rows = vec![["character", "d_k", "m_k", "probe", "rejected"].map(String::from).to_vec()];
    for b in &r.blocks {
        table_rows.push(vec![
            b.character.clone(),
            b.degree.to_string(),
            b.size.to_string(),
            format!("{:?}", b.probe).to_lowercase(),
            format!("{:.1e}", b.largest_rejected),
        ]);
    }
    let mut text = align(&table_rows);
    let _ = writeln!(text, "Σ m_k² = {} (b_{n} = {})", r.sum_of_squares, r.orbit_count);
    Outcome::new(r, text)
}

pub fn sdp_options(mode: Mode, split: bool) -> SdpOptions {
    SdpOptions {
        formulation: match mode {
            Mode::Block => Formulation::Block,
            Mode::Full => Formulation::Full,
        },
        transpose: if split { TransposeMode::Split } else { TransposeMode::Merged },
        ..SdpOptions::default()
    }
}

pub fn sdp(n: usize, d: DistanceSet, mode: Mode, split: bool, export: Option<&Path>, seed: u64) -> Result<Outcome> {
    let options = sdp_options(mode, split);
    let ctx = SdpContext::new(n, options.formulation, seed)?;
    let instance = ctx.instance(d, &options)?;
    if let Some(path) = export {
        let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_sdpa(&instance.problem, std::io::BufWriter::new(file))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let variables = instance.model.num_variables();
    let solution = solve_instance(instance, &options.ipm)?;
    let mut r = BoundReport::new(n, d, BoundKind::Sdp, solution.bound);
    r.formulation = Some(format!("{:?}", options.formulation).to_lowercase());
    r.variables = Some(variables);
    bound_outcome(r)
}
