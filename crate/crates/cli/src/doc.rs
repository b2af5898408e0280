//! JSON document schema for actions: a coloured graph with squares, an
//! automaton over it, and optional dynamics and tolerance sections.

use kgraph_action::automaton::Automaton;
use kgraph_action::graph::{ColouredGraph, KGraph, SquareSet};
use kgraph_action::{Action, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub r: String,
    pub s: String,
    pub colour: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub id: String,
    pub r: String,
    pub s: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransDoc {
    pub state: String,
    pub edge: String,
    pub out_edge: String,
    /// A state id, or a vertex id meaning the unit there.
    pub out_state: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsDoc {
    pub beta: f64,
    pub r: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesDoc {
    #[serde(default = "default_value_tol")]
    pub value: f64,
    #[serde(default = "default_tail_tol")]
    pub tail: f64,
}

fn default_value_tol() -> f64 {
    1e-12
}

fn default_tail_tol() -> f64 {
    1e-10
}

impl Default for TolerancesDoc {
    fn default() -> TolerancesDoc {
        TolerancesDoc {
            value: default_value_tol(),
            tail: default_tail_tol(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDocument {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    pub squares: Vec<[String; 4]>,
    #[serde(default)]
    pub states: Vec<StateDoc>,
    #[serde(default)]
    pub trans: Vec<TransDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesDoc>,
}

impl ActionDocument {
    pub fn parse(text: &str) -> Result<ActionDocument> {
        serde_json::from_str(text)
            .map_err(|e| Error::Schema(format!("line {}: {e}", e.line())))
    }

    pub fn to_action(&self) -> Result<Action> {
        let vertices: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str, &str, usize)> = self
            .edges
            .iter()
            .map(|e| (e.id.as_str(), e.r.as_str(), e.s.as_str(), e.colour))
            .collect();
        let graph = ColouredGraph::new(self.k, &vertices, &edges)?;
        let squares: Vec<[&str; 4]> = self
            .squares
            .iter()
            .map(|q| [q[0].as_str(), q[1].as_str(), q[2].as_str(), q[3].as_str()])
            .collect();
        let squares = SquareSet::new(&graph, &squares)?;
        let kg = KGraph::new(graph, squares)?;
        let states: Vec<(&str, &str, &str)> = self
            .states
            .iter()
            .map(|s| (s.id.as_str(), s.r.as_str(), s.s.as_str()))
            .collect();
        let trans: Vec<(&str, &str, &str, &str)> = self
            .trans
            .iter()
            .map(|t| {
                (
                    t.state.as_str(),
                    t.edge.as_str(),
                    t.out_edge.as_str(),
                    t.out_state.as_str(),
                )
            })
            .collect();
        let aut = Automaton::new(&kg, &states, &trans)?;
        Action::new(kg, aut)
    }

    pub fn tolerances(&self) -> TolerancesDoc {
        self.tolerances.clone().unwrap_or_default()
    }
}
