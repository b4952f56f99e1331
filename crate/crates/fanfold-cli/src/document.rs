//! The fan file format: a JSON object with an optional "name" and a
//! required "rays" list of two-element integer lists, in arbitrary order.
//! The written form is always the canonical (counterclockwise) order.

use serde::{Deserialize, Serialize};

use fanfold::fan::{Fan2D, FanError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rays: Vec<[i64; 2]>,
}

impl FanDocument {
    pub fn from_fan(fan: &Fan2D) -> FanDocument {
        FanDocument {
            name: fan.name().map(str::to_owned),
            rays: fan.rays_i64(),
        }
    }

    pub fn validate(&self) -> Result<Fan2D, FanError> {
        let raw: Vec<(i64, i64)> = self.rays.iter().map(|r| (r[0], r[1])).collect();
        Fan2D::validate(&raw, self.name.as_deref())
    }
}
