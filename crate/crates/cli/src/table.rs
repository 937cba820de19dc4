//! Human-readable rendering of the report payloads.

use std::fmt::Write as _;

use crate::report::{
    AgentRef, AllocationPayload, CoalitionsPayload, PatternReport, ProfileReport, ShapleyPayload,
    VerifyReport, WorthPayload,
};

/// Pads every column to its widest cell; the first column is left-aligned,
/// the rest right-aligned.
fn grid(headers: &[&str], rows: &[Vec<String>]) -> String {
    let columns = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (cell, width) in row.iter().zip(widths.iter_mut()) {
            *width = (*width).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut emit = |cells: &[String]| {
        for (index, (cell, width)) in cells.iter().zip(&widths).enumerate() {
            if index > 0 {
                out.push_str("  ");
            }
            if index == 0 {
                let _ = write!(out, "{cell:<width$}");
            } else {
                let _ = write!(out, "{cell:>width$}");
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    emit(&headers.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    emit(&vec!["-".repeat(3); columns]);
    let _ = columns;
    for row in rows {
        emit(row);
    }
    out
}

fn member_list(members: &[AgentRef]) -> String {
    members
        .iter()
        .map(|m| m.label.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn allocation(report: &ProfileReport<AllocationPayload>) -> String {
    let result = &report.result;
    let rows: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|row| {
            vec![
                row.label.clone(),
                row.position.to_string(),
                row.valuation.cell(),
                row.initial_share.cell(),
                row.adjusted_share.cell(),
                row.compensation.cell(),
            ]
        })
        .collect();
    format!(
        "{n} agents; {label} takes the object; surplus {surplus}\n\n{table}",
        n = report.n,
        label = result.winner.label,
        surplus = result.surplus.cell(),
        table = grid(
            &["agent", "rank", "valuation", "equal share", "final worth", "cash flow"],
            &rows,
        ),
    )
}

pub fn worth(report: &ProfileReport<WorthPayload>) -> String {
    let result = &report.result;
    format!(
        "coalition of {size}: {members}\nworth       {worth}\nper capita  {per_capita}\n",
        size = result.size,
        members = member_list(&result.members),
        worth = result.worth.cell(),
        per_capita = result.per_capita.cell(),
    )
}

pub fn shapley(report: &ProfileReport<ShapleyPayload>) -> String {
    let result = &report.result;
    let rows: Vec<Vec<String>> = result
        .values
        .iter()
        .map(|row| {
            vec![
                row.label.clone(),
                row.position.to_string(),
                row.phi.cell(),
            ]
        })
        .collect();
    let oracle = &result.oracle_check;
    let oracle_line = if !oracle.requested {
        String::new()
    } else if oracle.ran {
        format!(
            "oracle check: enumeration {} the {} values\n",
            if oracle.matches == Some(true) { "matches" } else { "CONTRADICTS" },
            result.method,
        )
    } else {
        format!(
            "oracle check: skipped, {} agents exceed the cap of {}\n",
            report.n, oracle.cap
        )
    };
    format!(
        "{n} agents, {method} evaluation\n{oracle_line}\n{table}",
        n = report.n,
        method = result.method,
        table = grid(&["agent", "rank", "shapley value"], &rows),
    )
}

pub fn pattern(report: &PatternReport) -> String {
    let max_n = report.max_n;
    let mut out = String::new();
    let width = max_n.to_string().len().max(2);
    let _ = write!(out, "{:>width$} |", "n");
    for position in 1..=max_n {
        let _ = write!(out, " {position:>2}");
    }
    out.push('\n');
    let _ = write!(out, "{:->width$}-+", "");
    out.push_str(&"-".repeat(3 * max_n));
    out.push('\n');
    for row in &report.rows {
        let _ = write!(out, "{:>width$} |", row.n);
        for position in 1..=row.n.min(max_n) {
            let mark = if row.positions.contains(&position) {
                if row.kind == "two-weak" {
                    'W'
                } else {
                    'S'
                }
            } else {
                '.'
            };
            let _ = write!(out, " {mark:>2}");
        }
        out.push('\n');
    }
    out.push_str("\nS one strongly averse position, W two weakly averse positions, . neither\n");
    out
}

pub fn coalitions(report: &ProfileReport<CoalitionsPayload>) -> String {
    let result = &report.result;
    let size_rows: Vec<Vec<String>> = result
        .sizes
        .iter()
        .map(|row| {
            vec![
                row.size.to_string(),
                member_list(&row.members),
                row.worth.cell(),
                row.per_capita.cell(),
            ]
        })
        .collect();
    let increment_rows: Vec<Vec<String>> = result
        .increments
        .iter()
        .map(|row| {
            vec![
                row.size.to_string(),
                row.total.cell(),
                row.per_capita.cell(),
            ]
        })
        .collect();
    let bounds_line = match &result.bounds {
        None => "size bounds: not stated for a constant profile".to_string(),
        Some(b) => {
            let extra = |name: &str, flag: Option<bool>| match flag {
                None => String::new(),
                Some(true) => format!(", {name} holds"),
                Some(false) => format!(", {name} FAILS"),
            };
            format!(
                "size bounds: ordering {}, s* range {}, s** range {}{}{}",
                if b.order_ok { "holds" } else { "FAILS" },
                if b.s_star_ok { "holds" } else { "FAILS" },
                if b.s_double_star_ok { "holds" } else { "FAILS" },
                extra("even-n cut", b.sharper_even),
                extra("tie cut", b.sharper_tie),
            )
        }
    };
    let formation = &result.formation;
    let step_rows: Vec<Vec<String>> = formation
        .steps
        .iter()
        .map(|step| {
            vec![
                step.agent.label.clone(),
                step.agent.position.to_string(),
                step.increment.cell(),
                if step.accepted { "joins" } else { "declined" }.to_string(),
            ]
        })
        .collect();
    format!(
        "best coalition per size\n{sizes}\nincrements when the next agent joins\n{increments}\n\
         best total worth at size {s_star}, best per-capita worth at size {s_double_star}\n\
         {bounds_line}\n\ngreedy formation ({criterion} rule, threshold {threshold})\n{steps}\n\
         formed {members} with worth {worth}\n",
        sizes = grid(&["size", "members", "worth", "per capita"], &size_rows),
        increments = grid(&["size", "total", "per capita"], &increment_rows),
        s_star = result.s_star,
        s_double_star = result.s_double_star,
        criterion = formation.criterion,
        threshold = formation.threshold.cell(),
        steps = grid(&["agent", "rank", "increment", "outcome"], &step_rows),
        members = member_list(&formation.final_members),
        worth = formation.final_worth.cell(),
    )
}

pub fn verify(report: &VerifyReport) -> String {
    let identities = &report.identities;
    if identities.all_hold {
        format!(
            "both summation identities hold exactly at all {} points (1 <= j, t <= {})\n",
            identities.points_checked, identities.max
        )
    } else {
        let mut out = format!(
            "IDENTITY FAILURES at {} of {} points:\n",
            identities.failures.len(),
            identities.points_checked
        );
        for failure in &identities.failures {
            let _ = writeln!(out, "  j = {}, t = {}", failure.j, failure.t);
        }
        out
    }
}
