//! Input documents and the typed report payloads every command emits.

use std::collections::HashSet;

use kgain::valuations::ValuationProfile;
use kgain::{ExactProfile, Rational};
use serde::Serialize;
use serde_json::Value;

use crate::rational_text::{parse_rational, Quantity};

/// One agent as given on the command line or in the input document.
#[derive(Debug, Clone)]
pub struct InputAgent {
    pub label: String,
    pub value: Rational,
}

/// Parses the structured input document: an object with an `agents` array of
/// `{label, valuation}` entries. Valuations are exact strings (integer,
/// fraction, or decimal); plain JSON integers are accepted, JSON floats are
/// not, so `"0.1"` keeps meaning one tenth.
pub fn parse_document(text: &str) -> Result<Vec<InputAgent>, String> {
    let document: Value =
        serde_json::from_str(text).map_err(|e| format!("input is not valid JSON: {e}"))?;
    let agents = document
        .get("agents")
        .ok_or("input must be an object with an \"agents\" array")?
        .as_array()
        .ok_or("\"agents\" must be an array")?;
    let mut out = Vec::with_capacity(agents.len());
    for (index, entry) in agents.iter().enumerate() {
        let label = entry
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| format!("agent {index}: \"label\" must be a string"))?
            .to_owned();
        let value = match entry.get("valuation") {
            Some(Value::String(text)) => {
                parse_rational(text).map_err(|e| format!("agent {label:?}: {e}"))?
            }
            Some(Value::Number(number)) => match number.as_i64() {
                Some(int) => Rational::from_integer(int.into()),
                None => {
                    return Err(format!(
                        "agent {label:?}: write the valuation as a string like \
                         \"{number}\" so it stays exact"
                    ))
                }
            },
            _ => return Err(format!("agent {label:?}: missing \"valuation\"")),
        };
        out.push(InputAgent { label, value });
    }
    let mut seen = HashSet::new();
    for agent in &out {
        if !seen.insert(agent.label.as_str()) {
            return Err(format!("duplicate agent label {:?}", agent.label));
        }
    }
    Ok(out)
}

/// Parses `--values 10,6,3,2,1` into agents labeled by input position.
pub fn parse_values_flag(csv: &str) -> Result<Vec<InputAgent>, String> {
    csv.split(',')
        .enumerate()
        .map(|(index, token)| {
            Ok(InputAgent {
                label: (index + 1).to_string(),
                value: parse_rational(token)?,
            })
        })
        .collect()
}

/// The agents in input order next to their canonical profile.
pub struct ProfileContext {
    pub agents: Vec<InputAgent>,
    pub profile: ExactProfile,
}

impl ProfileContext {
    pub fn new(agents: Vec<InputAgent>) -> kgain::Result<Self> {
        let values: Vec<Rational> = agents.iter().map(|a| a.value.clone()).collect();
        let profile = ValuationProfile::canonicalize(&values)?;
        Ok(ProfileContext { agents, profile })
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    /// Input label of the agent at a canonical position.
    pub fn label_of_position(&self, position: usize) -> &str {
        &self.agents[self.profile.original_label(position) - 1].label
    }

    /// Canonical position of the agent with an input label, if any.
    pub fn position_of_label(&self, label: &str) -> Option<usize> {
        let index = self.agents.iter().position(|a| a.label == label)?;
        Some(self.profile.canonical_position(index + 1))
    }

    /// The canonical-order echo included in every profile report.
    pub fn echo(&self, precision: usize) -> Vec<AgentEcho> {
        (1..=self.n())
            .map(|position| AgentEcho {
                position,
                label: self.label_of_position(position).to_owned(),
                valuation: Quantity::of(self.profile.value(position), precision),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AgentEcho {
    pub position: usize,
    pub label: String,
    pub valuation: Quantity,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgentRef {
    pub position: usize,
    pub label: String,
}

/// Report wrapper for the commands that analyze one profile.
#[derive(Serialize)]
pub struct ProfileReport<P: Serialize> {
    pub command: &'static str,
    pub n: usize,
    /// Agents in canonical (descending-valuation) order.
    pub agents: Vec<AgentEcho>,
    pub result: P,
}

#[derive(Serialize)]
pub struct AllocationRow {
    pub position: usize,
    pub label: String,
    pub valuation: Quantity,
    pub initial_share: Quantity,
    pub adjusted_share: Quantity,
    pub compensation: Quantity,
}

#[derive(Serialize)]
pub struct AllocationPayload {
    pub winner: AgentRef,
    pub surplus: Quantity,
    pub rows: Vec<AllocationRow>,
}

#[derive(Serialize)]
pub struct WorthPayload {
    pub members: Vec<AgentRef>,
    pub size: usize,
    pub worth: Quantity,
    pub per_capita: Quantity,
}

#[derive(Serialize)]
pub struct ShapleyRow {
    pub position: usize,
    pub label: String,
    pub phi: Quantity,
}

#[derive(Serialize)]
pub struct OracleCheck {
    pub requested: bool,
    /// False when the oracle was skipped (not requested, or n above the cap).
    pub ran: bool,
    pub cap: usize,
    pub matches: Option<bool>,
}

#[derive(Serialize)]
pub struct ShapleyPayload {
    pub method: &'static str,
    pub values: Vec<ShapleyRow>,
    pub oracle_check: OracleCheck,
}

#[derive(Serialize)]
pub struct PatternRow {
    pub n: usize,
    pub kind: &'static str,
    pub positions: Vec<usize>,
}

#[derive(Serialize)]
pub struct PatternReport {
    pub command: &'static str,
    pub max_n: usize,
    pub rows: Vec<PatternRow>,
}

#[derive(Serialize)]
pub struct SizeRowPayload {
    pub size: usize,
    pub members: Vec<AgentRef>,
    pub worth: Quantity,
    pub per_capita: Quantity,
}

#[derive(Serialize)]
pub struct IncrementRow {
    pub size: usize,
    pub total: Quantity,
    pub per_capita: Quantity,
}

#[derive(Serialize)]
pub struct BoundsPayload {
    pub order_ok: bool,
    pub s_star_ok: bool,
    pub s_double_star_ok: bool,
    pub sharper_even: Option<bool>,
    pub sharper_tie: Option<bool>,
}

#[derive(Serialize)]
pub struct FormationStepPayload {
    pub agent: AgentRef,
    pub increment: Quantity,
    pub accepted: bool,
}

#[derive(Serialize)]
pub struct FormationPayload {
    pub criterion: &'static str,
    pub threshold: Quantity,
    pub steps: Vec<FormationStepPayload>,
    pub final_members: Vec<AgentRef>,
    pub final_worth: Quantity,
}

#[derive(Serialize)]
pub struct CoalitionsPayload {
    pub sizes: Vec<SizeRowPayload>,
    pub increments: Vec<IncrementRow>,
    pub s_star: usize,
    pub s_double_star: usize,
    /// Null when the profile is constant, where the size bounds say nothing.
    pub bounds: Option<BoundsPayload>,
    pub formation: FormationPayload,
}

#[derive(Serialize)]
pub struct IdentityFailure {
    pub j: u64,
    pub t: u64,
}

#[derive(Serialize)]
pub struct IdentitiesPayload {
    pub max: u64,
    pub points_checked: u64,
    pub all_hold: bool,
    pub failures: Vec<IdentityFailure>,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub identities: IdentitiesPayload,
}
