use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use pursuit_core::construct::{build_dodecahedron, build_subdivided_cube, LandmarkTable, Layered};
use pursuit_core::graph::Graph;
use pursuit_core::strategy::{World, STRATEGY_LAYERS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphId {
    QPrime,
    Dodecahedron,
    Layered(u32),
}

impl fmt::Display for GraphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphId::QPrime => f.write_str("q-prime"),
            GraphId::Dodecahedron => f.write_str("dodecahedron"),
            GraphId::Layered(l) => write!(f, "layered:{l}"),
        }
    }
}

impl FromStr for GraphId {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q-prime" => Ok(GraphId::QPrime),
            "dodecahedron" => Ok(GraphId::Dodecahedron),
            _ => {
                let l = s.strip_prefix("layered:").ok_or_else(|| anyhow!("unknown graph `{s}`"))?;
                let l: u32 = l.parse().with_context(|| format!("bad layer count in `{s}`"))?;
                if l == 0 {
                    bail!("layered graphs need at least one layer");
                }
                Ok(GraphId::Layered(l))
            }
        }
    }
}

/// A built graph; layered graphs keep their addressing and base landmarks.
pub struct Loaded {
    pub id: GraphId,
    pub graph: Arc<Graph>,
    pub layered: Option<(Layered, LandmarkTable)>,
    /// Present for the strategy's layer count, sharing the process-wide world.
    pub world: Option<Arc<World>>,
}

impl GraphId {
    /// Builds the graph; `layered:49` reuses the shared strategy world.
    pub fn load(self) -> Result<Loaded> {
        let (graph, layered, world) = match self {
            GraphId::QPrime => (Arc::new(build_subdivided_cube()), None, None),
            GraphId::Dodecahedron => (Arc::new(build_dodecahedron()), None, None),
            GraphId::Layered(l) if l == STRATEGY_LAYERS => {
                let w = World::shared();
                (Arc::new(w.graph().clone()), None, Some(w))
            }
            GraphId::Layered(l) => {
                let d = Layered::new(l)?;
                let t = LandmarkTable::base(&d);
                (Arc::new(d.graph().clone()), Some((d, t)), None)
            }
        };
        Ok(Loaded { id: self, graph, layered, world })
    }
}

impl Loaded {
    /// Addressing of a layered graph, from the world when it was shared.
    pub fn layered(&self) -> Option<&Layered> {
        match (&self.layered, &self.world) {
            (Some((d, _)), _) => Some(d),
            (None, Some(w)) => Some(&w.d),
            _ => None,
        }
    }

    pub fn landmarks(&self) -> Option<&LandmarkTable> {
        match (&self.layered, &self.world) {
            (Some((_, t)), _) => Some(t),
            (None, Some(w)) => Some(w.frame_at(0)),
            _ => None,
        }
    }
}
