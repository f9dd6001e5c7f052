use serde::{Deserialize, Serialize};

use super::Fan;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

/// Wire form of a fan: `{"dim", "rays", "max_cones", "name"?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl FanJson {
    pub fn from_fan(fan: &Fan) -> Result<Self> {
        let rays = fan
            .rays()
            .iter()
            .map(|r| r.to_i64().ok_or_else(|| Error::Json("ray coordinate exceeds 64 bits".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: fan.dim(),
            rays,
            max_cones: fan.max_cones().iter().map(|c| c.rays().to_vec()).collect(),
            name: fan.name().map(str::to_owned),
        })
    }

    pub fn into_fan(self) -> Result<Fan> {
        let fan = Fan::new(self.dim, self.rays.iter().map(|r| LatticeVector::from_i64(r)).collect(), self.max_cones)?;
        Ok(match self.name {
            Some(n) => fan.with_name(n),
            None => fan,
        })
    }
}

pub fn fan_from_json(text: &str) -> Result<Fan> {
    let raw: FanJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    raw.into_fan()
}

pub fn fan_to_json(fan: &Fan) -> Result<String> {
    serde_json::to_string(&FanJson::from_fan(fan)?).map_err(|e| Error::Json(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_p2() {
        let fan = fan_from_json(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#).unwrap();
        assert_eq!(fan.num_rays(), 3);
        assert!(fan.is_smooth() && fan.is_complete());
        let again = fan_from_json(&fan_to_json(&fan).unwrap()).unwrap();
        assert_eq!(again, fan);
    }

    #[test]
    fn name_passes_through() {
        let fan = fan_from_json(r#"{"dim":1,"rays":[[1],[-1]],"max_cones":[[0],[1]],"name":"P1"}"#).unwrap();
        assert_eq!(fan.name(), Some("P1"));
        assert!(fan_to_json(&fan).unwrap().contains("\"name\":\"P1\""));
    }

    #[test]
    fn structured_errors() {
        let e = fan_from_json(r#"{"dim":2,"rays":[[2,4],[0,1]],"max_cones":[[0,1]]}"#).unwrap_err();
        assert_eq!(e.code(), "ray_not_primitive");
        assert_eq!(e.to_string(), "ray 0 not primitive");
        let e = fan_from_json(r#"{"dim":2,"rays":[[1,0]]}"#).unwrap_err();
        assert_eq!(e.code(), "json");
        let e = fan_from_json(r#"{"dim":2,"rays":[[1,0],[0,1]],"max_cones":[[0,5]]}"#).unwrap_err();
        assert_eq!(e.code(), "ray_index_out_of_range");
    }
}
