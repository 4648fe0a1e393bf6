use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The eight livability metrics, in their canonical table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Shade,
    Play,
    Comfort,
    Safety,
    Nature,
    Recreation,
    Entertainment,
    Sociability,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Shade,
        Metric::Play,
        Metric::Comfort,
        Metric::Safety,
        Metric::Nature,
        Metric::Recreation,
        Metric::Entertainment,
        Metric::Sociability,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Metric::Shade => "shade",
            Metric::Play => "play",
            Metric::Comfort => "comfort",
            Metric::Safety => "safety",
            Metric::Nature => "nature",
            Metric::Recreation => "recreation",
            Metric::Entertainment => "entertainment",
            Metric::Sociability => "sociability",
        }
    }

    /// Column heading used in survey reports.
    pub fn label(self) -> &'static str {
        match self {
            Metric::Nature => "Access to Nature",
            Metric::Shade => "Shade",
            Metric::Play => "Play",
            Metric::Comfort => "Comfort",
            Metric::Safety => "Safety",
            Metric::Recreation => "Recreation",
            Metric::Entertainment => "Entertainment",
            Metric::Sociability => "Sociability",
        }
    }

    /// The question raters answer for this metric.
    pub fn question(self) -> &'static str {
        match self {
            Metric::Shade => "Are there shady spaces for people to spend time?",
            Metric::Play => "Are there activities available for children or young people?",
            Metric::Comfort => "Are there places to sit and relax?",
            Metric::Safety => {
                "Are there places to supervise children playing, is there lighting for nighttime activities, etc.?"
            }
            Metric::Nature => {
                "Are there elements of nature such as trees, flowers, gardens, or animals?"
            }
            Metric::Recreation => "Are there activities available for adults?",
            Metric::Entertainment => {
                "Could the area be used for performances, dancing, outdoor dining, etc.?"
            }
            Metric::Sociability => "Would people enjoy gathering here to spend time with friends?",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown metric `{0}`")]
pub struct UnknownMetric(pub String);

impl FromStr for Metric {
    type Err = UnknownMetric;

    /// Accepts the canonical id, the report label, and a few spellings seen
    /// in hand-made spreadsheets ("access to nature", "access_to_nature").
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .map(|c| if c == '_' || c == '-' { ' ' } else { c })
            .collect();
        let m = match norm.as_str() {
            "shade" => Metric::Shade,
            "play" => Metric::Play,
            "comfort" => Metric::Comfort,
            "safety" => Metric::Safety,
            "nature" | "access to nature" => Metric::Nature,
            "recreation" => Metric::Recreation,
            "entertainment" => Metric::Entertainment,
            "sociability" => Metric::Sociability,
            _ => return Err(UnknownMetric(s.to_string())),
        };
        Ok(m)
    }
}

/// Fixed-size map keyed by [`Metric`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricMap<T>(pub [T; 8]);

impl<T: Copy> MetricMap<T> {
    pub fn splat(v: T) -> Self {
        MetricMap([v; 8])
    }

    pub fn get(&self, m: Metric) -> T {
        self.0[m.index()]
    }

    pub fn set(&mut self, m: Metric, v: T) {
        self.0[m.index()] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metric, T)> + '_ {
        Metric::ALL.iter().map(move |m| (*m, self.0[m.index()]))
    }
}

impl<T: Serialize + Copy> Serialize for MetricMap<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(8))?;
        for (m, v) in self.iter() {
            map.serialize_entry(m.id(), &v)?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de> + Copy + Default> Deserialize<'de> for MetricMap<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = std::collections::BTreeMap::<String, T>::deserialize(deserializer)?;
        let mut out = MetricMap::<T>::default();
        let mut seen = [false; 8];
        for (k, v) in raw {
            let m: Metric = k.parse().map_err(serde::de::Error::custom)?;
            out.set(m, v);
            seen[m.index()] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(serde::de::Error::custom(format!(
                "missing metric `{}`",
                Metric::ALL[i]
            )));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_ids_and_labels() {
        for m in Metric::ALL {
            assert_eq!(m.id().parse::<Metric>().unwrap(), m);
            assert_eq!(m.label().parse::<Metric>().unwrap(), m);
        }
        assert!("nope".parse::<Metric>().is_err());
    }

    #[test]
    fn metric_map_json_shape() {
        let mut m = MetricMap::splat(1.0);
        m.set(Metric::Nature, 5.02);
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.starts_with("{\"shade\":1.0,\"play\""));
        let back: MetricMap<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<MetricMap<f64>>("{\"shade\":1.0}").is_err());
    }
}
